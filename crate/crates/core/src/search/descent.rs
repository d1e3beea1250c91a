use rand::Rng;
use serde::Serialize;

use crate::bigraph::Bigraph;
use crate::error::{Error, Result};
use crate::par;
use crate::search::{sidorenko_gap, stream_rng, GapReport};
use crate::stepfn::StepBigraphon;

/// Projected gradient descent settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    pub m: usize,
    pub n: usize,
    pub restarts: usize,
    pub steps: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            m: 3,
            n: 3,
            restarts: 4,
            steps: 200,
            learning_rate: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub best: GapReport,
    pub best_kernel: StepBigraphon,
    pub best_restart: usize,
    /// Smallest gap among the starting kernels.
    pub initial_gap: f64,
    /// Best gap reached by each restart.
    pub restart_best: Vec<f64>,
    /// Best-so-far gap after each step of the winning restart.
    pub trajectory: Vec<f64>,
}

struct Run {
    initial: f64,
    best_gap: f64,
    best: StepBigraphon,
    trajectory: Vec<f64>,
}

fn run(g: &Bigraph, cfg: &SearchConfig, restart: usize) -> Run {
    let (m, n) = (cfg.m, cfg.n);
    let mut rng = stream_rng(cfg.seed, restart as u64);
    let values: Vec<f64> = (0..m * n).map(|_| rng.gen_range(0.0..=1.0)).collect();
    let uniform = |k: usize| vec![1.0 / k as f64; k];
    let mut w = StepBigraphon::with_parts(uniform(m), uniform(n), values);
    let e = g.edge_count() as i32;
    let gap = |w: &StepBigraphon| sidorenko_gap(g, w).gap;
    let initial = gap(&w);
    let mut best_gap = initial;
    let mut best = w.clone();
    let mut trajectory = Vec::with_capacity(cfg.steps);
    for _ in 0..cfg.steps {
        let t_rho = w.edge_density();
        let grad = w.density_gradient(g);
        let coef = if e == 0 { 0.0 } else { e as f64 * t_rho.powi(e - 1) };
        let values = w.values();
        let next: Vec<f64> = (0..m * n)
            .map(|k| {
                let d = grad[k] - coef * w.mu()[k / n] * w.nu()[k % n];
                (values[k] - cfg.learning_rate * d).max(0.0)
            })
            .collect();
        w = StepBigraphon::with_parts(w.mu().to_vec(), w.nu().to_vec(), next);
        let current = gap(&w);
        if current < best_gap {
            best_gap = current;
            best = w.clone();
        }
        trajectory.push(best_gap);
    }
    Run {
        initial,
        best_gap,
        best,
        trajectory,
    }
}

/// Minimizes `t(G,W) - t(ρ,W)^{e(G)}` over nonnegative values with uniform
/// measures. Restarts run independently; ties go to the lower restart.
pub fn counterexample_search(g: &Bigraph, cfg: &SearchConfig) -> Result<SearchReport> {
    if cfg.m == 0 || cfg.n == 0 || cfg.restarts == 0 {
        return Err(Error::InvalidParameter("parts and restarts must be at least 1".into()));
    }
    if !(cfg.learning_rate.is_finite() && cfg.learning_rate > 0.0) {
        return Err(Error::InvalidParameter("learning rate must be positive".into()));
    }
    let runs = par::map_range(cfg.restarts, |r| run(g, cfg, r));
    let initial_gap = runs.iter().map(|r| r.initial).fold(f64::INFINITY, f64::min);
    let restart_best: Vec<f64> = runs.iter().map(|r| r.best_gap).collect();
    let best_restart = (0..runs.len())
        .min_by(|&a, &b| restart_best[a].total_cmp(&restart_best[b]).then(a.cmp(&b)))
        .expect("at least one restart");
    let winner = runs.into_iter().nth(best_restart).expect("index in range");
    Ok(SearchReport {
        config: *cfg,
        best: sidorenko_gap(g, &winner.best),
        best_kernel: winner.best,
        best_restart,
        initial_gap,
        restart_best,
        trajectory: winner.trajectory,
    })
}
