use serde::Serialize;

use crate::bigraph::Bigraph;
use crate::error::{Error, Result};
use crate::stepfn::{DensityMethod, StepBigraphon};
use crate::tolerance::rel_diff;

/// Tensor powers larger than this many parts per side are not evaluated.
const MAX_PARTS: usize = 81;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorStep {
    pub k: usize,
    /// Max over all graphs of the relative gap between `t(G,W^{⊗k})` and `t(G,W)^k`.
    pub identity_residual: f64,
    /// `∏ t(Gᵢ,W^{⊗k})^{rᵢ}`.
    pub lhs: f64,
    /// `∏ t(Hⱼ,W^{⊗k})^{sⱼ}`.
    pub rhs: f64,
    /// Whether `lhs ≥ c·rhs` at this power.
    pub holds: bool,
    /// `c^{1/k}`: the constant this power certifies for `W` itself.
    pub amplified_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TensorReport {
    pub c: f64,
    pub k_max: usize,
    pub steps: Vec<TensorStep>,
    /// Powers skipped because the tensor kernel would be too large.
    pub skipped: Vec<usize>,
}

fn product(side: &[(Bigraph, f64)], w: &StepBigraphon) -> (f64, Vec<f64>) {
    let dens: Vec<f64> = side.iter().map(|(g, _)| w.density(g, DensityMethod::Auto)).collect();
    let p = dens.iter().zip(side).map(|(t, (_, r))| t.powf(*r)).product();
    (p, dens)
}

/// Evaluates `∏ t(Gᵢ,·)^{rᵢ} ≥ c·∏ t(Hⱼ,·)^{sⱼ}` on `W^{⊗k}` for
/// `k = 1..=k_max`, checking multiplicativity of densities along the way.
pub fn tensor_trick_check(
    lhs: &[(Bigraph, f64)],
    rhs: &[(Bigraph, f64)],
    c: f64,
    w: &StepBigraphon,
    k_max: usize,
) -> Result<TensorReport> {
    if k_max == 0 {
        return Err(Error::InvalidParameter("k_max must be at least 1".into()));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter("c must be positive".into()));
    }
    if lhs.iter().chain(rhs).any(|(_, r)| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::InvalidParameter("exponents must be nonnegative".into()));
    }
    let (_, base_l) = product(lhs, w);
    let (_, base_r) = product(rhs, w);
    let mut steps = Vec::new();
    let mut skipped = Vec::new();
    let mut power = w.clone();
    for k in 1..=k_max {
        if k > 1 {
            if power.m() * w.m() > MAX_PARTS || power.n() * w.n() > MAX_PARTS {
                skipped.extend(k..=k_max);
                break;
            }
            power = power.tensor(w);
        }
        let (l, dl) = product(lhs, &power);
        let (r, dr) = product(rhs, &power);
        let identity_residual = dl
            .iter()
            .zip(&base_l)
            .chain(dr.iter().zip(&base_r))
            .map(|(tk, t1)| rel_diff(*tk, t1.powi(k as i32)))
            .fold(0.0, f64::max);
        steps.push(TensorStep {
            k,
            identity_residual,
            lhs: l,
            rhs: r,
            holds: l >= c * r,
            amplified_constant: c.powf(1.0 / k as f64),
        });
    }
    Ok(TensorReport {
        c,
        k_max,
        steps,
        skipped,
    })
}
