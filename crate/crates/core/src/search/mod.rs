//! Numerical probes of Sidorenko-type inequalities: the gap
//! `t(G,W) - t(ρ,W)^{e(G)}`, sampled evidence for weak domination, a
//! projected gradient search for negative gaps, and the tensor-power
//! amplification argument.
//!
//! Everything here is evidence, never proof. Random draws come from
//! per-sample ChaCha streams so results are reproducible for a fixed seed
//! regardless of thread count.

mod descent;
mod sample;
mod tensor;

use serde::Serialize;

pub use descent::{counterexample_search, SearchConfig, SearchReport};
pub use sample::{
    biregularize_by_scaling, random_kernel, random_symmetric_kernel, sample_biregular, stream_rng, BIREGULAR_TOLERANCE,
};
pub use tensor::{tensor_trick_check, TensorReport, TensorStep};

use crate::bigraph::Bigraph;
use crate::error::{Error, Result};
use crate::par;
use crate::stepfn::{DensityMethod, StepBigraphon};
use crate::transforms::KernelSummary;

/// `t(G,W)` against `t(ρ,W)^{e(G)}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub graph: Bigraph,
    pub kernel: KernelSummary,
    pub t_g: f64,
    pub t_rho: f64,
    /// `t_g - t_rho^{e(G)}`.
    pub gap: f64,
    /// `t_g / t_rho^{e(G)}`, absent when `t_rho = 0`.
    pub ratio: Option<f64>,
}

pub fn sidorenko_gap(g: &Bigraph, w: &StepBigraphon) -> GapReport {
    let t_g = w.density(g, DensityMethod::Auto);
    let t_rho = w.density(&Bigraph::edge(), DensityMethod::Auto);
    let power = t_rho.powi(g.edge_count() as i32);
    GapReport {
        graph: g.clone(),
        kernel: KernelSummary::of(w),
        t_g,
        t_rho,
        gap: t_g - power,
        ratio: (t_rho > 0.0).then(|| t_g / power),
    }
}

/// `t(G,W)/t(ρ,W)^{e(G)}`.
fn ratio(g: &Bigraph, w: &StepBigraphon) -> f64 {
    let t_rho = w.edge_density();
    w.density(g, DensityMethod::Auto) / t_rho.powi(g.edge_count() as i32)
}

/// Minimum of `ratio(G₁) - ratio(G₂)` over sampled biregular kernels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvidenceReport {
    pub g1: Bigraph,
    pub g2: Bigraph,
    pub seed: u64,
    pub samples: usize,
    /// Draws discarded because scaling did not converge.
    pub rejected: usize,
    pub min_difference: f64,
    pub worst_sample: usize,
    pub worst_kernel: StepBigraphon,
}

/// Samples `samples` strictly positive biregular kernels with 1 to 4 parts
/// per side. A negative minimum refutes "G₁ weakly dominates G₂".
pub fn weak_domination_evidence(g1: &Bigraph, g2: &Bigraph, samples: usize, seed: u64) -> Result<EvidenceReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    let results = par::map_range(samples, |i| {
        let mut rng = stream_rng(seed, i as u64);
        let m = rand::Rng::gen_range(&mut rng, 1..=4);
        let n = rand::Rng::gen_range(&mut rng, 1..=4);
        let (w, rejected) = sample_biregular(&mut rng, m, n);
        let diff = ratio(g1, &w) - ratio(g2, &w);
        (diff, rejected, w)
    });
    let mut rejected = 0;
    let mut best: Option<(usize, f64, StepBigraphon)> = None;
    for (i, (diff, rej, w)) in results.into_iter().enumerate() {
        rejected += rej;
        if best.as_ref().is_none_or(|b| diff < b.1) {
            best = Some((i, diff, w));
        }
    }
    let (worst_sample, min_difference, worst_kernel) = best.expect("at least one sample");
    Ok(EvidenceReport {
        g1: g1.clone(),
        g2: g2.clone(),
        seed,
        samples,
        rejected,
        min_difference,
        worst_sample,
        worst_kernel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c4_gap_on_identity() {
        let w = StepBigraphon::uniform(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = sidorenko_gap(&Bigraph::even_cycle(4).unwrap(), &w);
        assert!((r.gap - 0.0625).abs() < 1e-15);
        assert!((r.ratio.unwrap() - 2.0).abs() < 1e-14);
        let c = StepBigraphon::constant(0.3, 2, 3).unwrap();
        assert!(sidorenko_gap(&Bigraph::book(2).unwrap(), &c).gap.abs() < 1e-15);
    }

    #[test]
    fn evidence_is_reproducible() {
        let c4 = Bigraph::even_cycle(4).unwrap();
        let rho = Bigraph::edge();
        let a = weak_domination_evidence(&c4, &rho, 20, 11).unwrap();
        let b = weak_domination_evidence(&c4, &rho, 20, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.min_difference >= -1e-9);
        let same = weak_domination_evidence(&c4, &c4, 5, 1).unwrap();
        assert_eq!(same.min_difference, 0.0);
    }
}
