//! Bigraphon constructions that improve regularity while keeping densities
//! under control. Every transform returns the new kernel together with a
//! [`TransformReport`] whose residuals are recomputed from scratch on both
//! kernels.

mod lower_reg;
mod main_lemma;
mod pipeline;
mod stars;
mod symmetric;

use std::collections::BTreeMap;

use serde::Serialize;

pub use lower_reg::{i0_bound, lower_regularize, m_alpha, select_alpha, TrimStep, TrimTrace};
pub use main_lemma::main_lemma_transform;
pub use pipeline::{biregularize_pipeline, PipelineReport};
pub use stars::{k1d_lower_regularize, stars_pipeline};
pub use symmetric::symmetric_main_lemma;

use crate::bigraph::Bigraph;
use crate::flag::Flag;
use crate::stepfn::{DensityMethod, StepBigraphon};

/// Edge density and point-degree extremes of a kernel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelSummary {
    pub parts: (usize, usize),
    pub t_rho: f64,
    pub delta_e1: f64,
    #[serde(rename = "Delta_e1")]
    pub big_delta_e1: f64,
    pub delta_e2: f64,
    #[serde(rename = "Delta_e2")]
    pub big_delta_e2: f64,
    /// Transform-specific quantities such as `t(F)`, `δ(F)`, `Δ(F)`.
    pub extra: BTreeMap<String, f64>,
}

impl KernelSummary {
    pub fn of(w: &StepBigraphon) -> Self {
        let minmax = |v: Vec<f64>| {
            v.into_iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
        };
        let (delta_e1, big_delta_e1) = minmax(w.left_degrees());
        let (delta_e2, big_delta_e2) = minmax(w.right_degrees());
        KernelSummary {
            parts: (w.m(), w.n()),
            t_rho: w.edge_density(),
            delta_e1,
            big_delta_e1,
            delta_e2,
            big_delta_e2,
            extra: BTreeMap::new(),
        }
    }

    pub(crate) fn with_flag(mut self, w: &StepBigraphon, f: &Flag) -> Self {
        let table = w.flag_density(f);
        self.extra
            .insert("t(F)".into(), w.density(f.underlying(), DensityMethod::Auto));
        self.extra.insert("delta(F)".into(), table.delta());
        self.extra.insert("Delta(F)".into(), table.big_delta());
        self
    }
}

/// Audit record of one transform.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformReport {
    pub transform: String,
    /// True when the transform short-circuited to the identity.
    pub identity: bool,
    pub input: KernelSummary,
    pub output: KernelSummary,
    pub epsilon: Option<f64>,
    pub d: Option<usize>,
    #[serde(rename = "Z")]
    pub z: Option<f64>,
    /// `f` evaluated on every left part (main-lemma style transforms).
    pub f_values: Vec<f64>,
    /// Relative slack of every verified post-condition; `≥ 0` means it holds.
    pub item_residuals: BTreeMap<String, f64>,
}

impl TransformReport {
    pub(crate) fn new(name: &str, input: &StepBigraphon, output: &StepBigraphon) -> Self {
        TransformReport {
            transform: name.to_owned(),
            identity: false,
            input: KernelSummary::of(input),
            output: KernelSummary::of(output),
            epsilon: None,
            d: None,
            z: None,
            f_values: Vec::new(),
            item_residuals: BTreeMap::new(),
        }
    }

    pub(crate) fn record(&mut self, key: impl Into<String>, slack: f64) {
        let key = key.into();
        let e = self.item_residuals.entry(key).or_insert(f64::INFINITY);
        *e = e.min(slack);
    }

    /// Smallest residual with its key.
    pub fn worst(&self) -> Option<(&str, f64)> {
        self.item_residuals
            .iter()
            .map(|(k, &v)| (k.as_str(), v))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Whether every residual is at least `-tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.item_residuals.values().all(|&r| r >= -tol)
    }
}

/// Named test bigraphs the reports check density bounds against.
pub fn test_family(d: usize) -> Vec<(String, Bigraph)> {
    let mut out: Vec<(String, Bigraph)> = vec![
        ("rho".into(), Bigraph::edge()),
        ("K12".into(), Bigraph::star(2).expect("valid")),
        ("K13".into(), Bigraph::star(3).expect("valid")),
        ("K21".into(), Bigraph::complete_bipartite(2, 1).expect("valid")),
        ("K31".into(), Bigraph::complete_bipartite(3, 1).expect("valid")),
        ("P4".into(), Bigraph::path(4).expect("valid")),
        ("P5".into(), Bigraph::path(5).expect("valid")),
        ("C4".into(), Bigraph::even_cycle(4).expect("valid")),
        ("C6".into(), Bigraph::even_cycle(6).expect("valid")),
        ("book2".into(), Bigraph::book(2).expect("valid")),
        ("K23".into(), Bigraph::complete_bipartite(2, 3).expect("valid")),
        ("K32".into(), Bigraph::complete_bipartite(3, 2).expect("valid")),
        ("K33".into(), Bigraph::complete_bipartite(3, 3).expect("valid")),
        (
            "2rho".into(),
            Bigraph::new(["a", "b"], ["c", "e"], [("a", "c"), ("b", "e")]).expect("valid"),
        ),
        (
            "rho+isoL".into(),
            Bigraph::new(["a", "b"], ["c"], [("a", "c")]).expect("valid"),
        ),
    ];
    for a in 1..=3 {
        let name = format!("K{a}{d}");
        if d >= 1 && !out.iter().any(|(n, _)| *n == name) {
            out.push((name, Bigraph::complete_bipartite(a, d).expect("valid")));
        }
    }
    out
}

/// Right 1-flags whose underlying bigraph is left `d`-regular.
pub(crate) fn right_flags_left_regular(d: usize) -> Vec<(String, Flag)> {
    let mut out = Vec::new();
    for a in 1..=3 {
        let g = Bigraph::complete_bipartite(a, d).expect("valid");
        let r0 = g.v1();
        out.push((format!("K{a}{d}@R0"), Flag::from_indices(g, vec![r0])));
    }
    if d == 2 {
        let g = Bigraph::even_cycle(6).expect("valid");
        let r0 = g.v1();
        out.push(("C6@R0".into(), Flag::from_indices(g, vec![r0])));
    }
    out
}

pub(crate) fn density(w: &StepBigraphon, g: &Bigraph) -> f64 {
    w.density(g, DensityMethod::Auto)
}

/// `defect / scale`, zero when both vanish.
pub(crate) fn relative(defect: f64, scale: f64) -> f64 {
    if defect == 0.0 {
        0.0
    } else {
        defect / scale.abs()
    }
}
