//! `bigraphon` command line tool. Every verb prints one JSON document.
//!
//! Exit status: 0 on success, 1 on malformed input or arguments, 2 when a
//! mathematical precondition of the requested operation fails.

mod output;

use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use bigraphon::decomp::{self, TreeDecomposition};
use bigraphon::search::{self, SearchConfig};
use bigraphon::transforms;
use bigraphon::{io, Bigraph, DensityMethod, Error, Flag, StepBigraphon};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bigraphon", version, about = "Densities, regularization and decompositions for bigraphons")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct KernelArg {
    /// Step bigraphon: JSON file or inline JSON.
    #[arg(long)]
    kernel: String,
}

#[derive(Args)]
struct Tol {
    /// Residual tolerance used for the "ok" verdict.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Verb {
    /// Homomorphism density t(G, W).
    Density {
        #[arg(long)]
        graph: String,
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long, default_value = "auto")]
        method: DensityMethod,
    },
    /// Flag density table over the labeled parts.
    FlagDensity {
        #[arg(long)]
        flag: String,
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long, default_value = "auto")]
        method: DensityMethod,
    },
    /// Main regularization lemma for a left 1-flag.
    Regularize {
        #[arg(long)]
        flag: String,
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        tol: Tol,
    },
    /// Lower regularization by trimming low-degree parts.
    LowerReg {
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        tol: Tol,
    },
    /// Five-stage biregularization.
    Pipeline {
        #[command(flatten)]
        kernel: KernelArg,
        #[command(flatten)]
        tol: Tol,
    },
    /// Star regularization pipeline.
    Stars {
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        tol: Tol,
    },
    /// Symmetric main lemma.
    Symmetric {
        #[arg(long)]
        flag: String,
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        epsilon: f64,
        #[command(flatten)]
        tol: Tol,
    },
    /// Verify a reflective tree decomposition, or search for one.
    Certify {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        tree: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_bags: usize,
        /// Search time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Decomposition weight d_T of the whole tree or a subtree.
    Dt {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        tree: String,
        /// Bag indices of the subtree (repeatable).
        #[arg(long)]
        bag: Vec<usize>,
    },
    /// Bag integral identity for one or all root bags.
    Intft {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        tree: String,
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long)]
        bag: Option<usize>,
        #[command(flatten)]
        tol: Tol,
    },
    /// Sidorenko gap t(G,W) - t(rho,W)^e(G).
    Gap {
        #[arg(long)]
        graph: String,
        #[command(flatten)]
        kernel: KernelArg,
    },
    /// Sampled evidence that the first graph weakly dominates the second.
    Evidence {
        /// Exactly two graphs.
        #[arg(long, num_args = 1, required = true)]
        graph: Vec<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Projected gradient search for a negative Sidorenko gap.
    Search {
        #[arg(long)]
        graph: String,
        /// Parts per side as MxN.
        #[arg(long, default_value = "3x3")]
        parts: String,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 1.0)]
        lr: f64,
        #[arg(long)]
        seed: u64,
    },
    /// Tensor-power amplification of a density inequality.
    TensorCheck {
        /// Left factor as PATH:EXPONENT (repeatable).
        #[arg(long)]
        lhs: Vec<String>,
        /// Right factor as PATH:EXPONENT (repeatable).
        #[arg(long)]
        rhs: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[command(flatten)]
        kernel: KernelArg,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
    },
}

fn read_text(arg: &str) -> Result<String, Error> {
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_owned());
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| Error::Parse {
        path: arg.to_owned(),
        message: e.to_string(),
    })
}

fn graph(arg: &str) -> Result<Bigraph, Error> {
    io::parse_bigraph(&read_text(arg)?)
}

fn flag(arg: &str) -> Result<Flag, Error> {
    io::parse_flag(&read_text(arg)?)
}

fn kernel(arg: &KernelArg) -> Result<StepBigraphon, Error> {
    io::parse_kernel(&read_text(&arg.kernel)?)
}

fn tree(arg: &str) -> Result<TreeDecomposition, Error> {
    io::parse_decomposition(&read_text(arg)?)
}

fn factors(args: &[String]) -> Result<Vec<(Bigraph, f64)>, Error> {
    args.iter()
        .map(|a| {
            let (path, exp) = a
                .rsplit_once(':')
                .ok_or_else(|| Error::InvalidParameter(format!("`{a}` is not PATH:EXPONENT")))?;
            let exp: f64 = exp
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent in `{a}`")))?;
            Ok((graph(path)?, exp))
        })
        .collect()
}

fn parts(text: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::InvalidParameter(format!("parts must look like 3x3, got `{text}`"));
    let (m, n) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok((m.parse().map_err(|_| bad())?, n.parse().map_err(|_| bad())?))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data always serializes")
}

fn run(verb: Verb) -> Result<Value, Error> {
    Ok(match verb {
        Verb::Density { graph: g, kernel: k, method } => {
            let (g, w) = (graph(&g)?, kernel(&k)?);
            json!({ "t": w.density(&g, method), "method": method.to_string() })
        }
        Verb::FlagDensity { flag: f, kernel: k, method } => {
            let (f, w) = (flag(&f)?, kernel(&k)?);
            let table = w.flag_density_with(&f, method);
            json!({
                "labels": f.label_ids(),
                "dims": table.dims,
                "values": table.values,
                "delta": table.delta(),
                "Delta": table.big_delta(),
            })
        }
        Verb::Regularize { flag: f, kernel: k, d, epsilon, tol } => {
            let (f, w) = (flag(&f)?, kernel(&k)?);
            let (out, report) = transforms::main_lemma_transform(&w, &f, d, epsilon)?;
            json!({ "kernel": to_value(&out), "ok": report.holds(tol.tolerance), "report": to_value(&report) })
        }
        Verb::LowerReg { kernel: k, alpha, tol } => {
            let w = kernel(&k)?;
            let (out, trace) = transforms::lower_regularize(&w, alpha)?;
            json!({ "kernel": to_value(&out), "ok": trace.report.holds(tol.tolerance), "trace": to_value(&trace) })
        }
        Verb::Pipeline { kernel: k, tol } => {
            let w = kernel(&k)?;
            let (out, report) = transforms::biregularize_pipeline(&w)?;
            json!({
                "kernel": to_value(&out),
                "stages": to_value(&report.kernels),
                "ok": report.holds(tol.tolerance),
                "report": to_value(&report),
            })
        }
        Verb::Stars { kernel: k, d, tol } => {
            let w = kernel(&k)?;
            let (out, report) = transforms::stars_pipeline(&w, d)?;
            json!({
                "kernel": to_value(&out),
                "stages": to_value(&report.kernels),
                "ok": report.holds(tol.tolerance),
                "report": to_value(&report),
            })
        }
        Verb::Symmetric { flag: f, kernel: k, d, epsilon, tol } => {
            let (f, w) = (flag(&f)?, kernel(&k)?);
            let (out, report) = transforms::symmetric_main_lemma(&w, &f, d, epsilon)?;
            json!({ "kernel": to_value(&out), "ok": report.holds(tol.tolerance), "report": to_value(&report) })
        }
        Verb::Certify { graph: g, tree: t, max_bags, budget } => {
            let g = graph(&g)?;
            let (t, trivial) = match t {
                Some(t) => (tree(&t)?, None),
                None => {
                    let budget = budget.map(Duration::from_secs_f64);
                    let found = decomp::find_reflective_decomposition(&g, max_bags, budget)?;
                    (found.decomposition, Some(found.trivial))
                }
            };
            let cert = decomp::verify_reflective(&g, &t)?;
            let mut out = json!({
                "valid": cert.valid,
                "core": cert.core_class,
                "core_graph": to_value(&cert.core),
                "violated_condition": to_value(&cert.violated_condition),
                "per_edge_isos": to_value(&cert.per_edge_isos),
                "assumptions": cert.assumptions,
                "decomposition": to_value(&t),
            });
            if cert.valid {
                out["d_T"] = json!(decomp::decomposition_weight(&g, &t, None)?);
            }
            if let Some(trivial) = trivial {
                out["trivial"] = json!(trivial);
            }
            out
        }
        Verb::Dt { graph: g, tree: t, bag } => {
            let (g, t) = (graph(&g)?, tree(&t)?);
            let sub = (!bag.is_empty()).then_some(bag.as_slice());
            json!({ "d_T": decomp::decomposition_weight(&g, &t, sub)?, "bags": sub })
        }
        Verb::Intft { graph: g, tree: t, kernel: k, bag, tol } => {
            let (g, t, w) = (graph(&g)?, tree(&t)?, kernel(&k)?);
            let roots: Vec<usize> = match bag {
                Some(b) => vec![b],
                None => (0..t.len()).collect(),
            };
            let reports = roots
                .into_iter()
                .map(|u| decomp::intft_check(&g, &t, &w, u))
                .collect::<Result<Vec<_>, _>>()?;
            let worst = reports
                .iter()
                .map(|r| r.max_residual.max(r.z_residual))
                .fold(0.0, f64::max);
            json!({ "ok": worst <= tol.tolerance, "max_residual": worst, "bags": to_value(&reports) })
        }
        Verb::Gap { graph: g, kernel: k } => {
            let (g, w) = (graph(&g)?, kernel(&k)?);
            to_value(&search::sidorenko_gap(&g, &w))
        }
        Verb::Evidence { graph: gs, samples, seed } => {
            let [a, b] = gs.as_slice() else {
                return Err(Error::InvalidParameter("evidence needs exactly two --graph arguments".into()));
            };
            let report = search::weak_domination_evidence(&graph(a)?, &graph(b)?, samples, seed)?;
            to_value(&report)
        }
        Verb::Search { graph: g, parts: p, restarts, steps, lr, seed } => {
            let g = graph(&g)?;
            let (m, n) = parts(&p)?;
            let cfg = SearchConfig {
                m,
                n,
                restarts,
                steps,
                learning_rate: lr,
                seed,
            };
            to_value(&search::counterexample_search(&g, &cfg)?)
        }
        Verb::TensorCheck { lhs, rhs, c, kernel: k, k_max } => {
            let w = kernel(&k)?;
            let report = search::tensor_trick_check(&factors(&lhs)?, &factors(&rhs)?, c, &w, k_max)?;
            to_value(&report)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.verb) {
        Ok(value) => {
            println!("{}", output::render(value));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", output::render(json!({ "error": e.to_string() })));
            if e.is_precondition() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
