use serde::Serialize;

use crate::bigraph::Side;
use crate::error::{Error, Result};
use crate::stepfn::{Selection, StepBigraphon};
use crate::tolerance::{slack_eq, slack_ge, slack_le, ITEM};
use crate::transforms::{density, test_family, TransformReport};

/// One trimming round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrimStep {
    pub side: Side,
    /// Absolute (unconditioned) measure removed.
    pub removed_mass: f64,
    /// Parts that lost mass, lowest degree first.
    pub parts: Vec<usize>,
    /// Edge density of the restriction after this round.
    pub t_rho_after: f64,
    pub left_mass_after: f64,
    pub right_mass_after: f64,
}

/// Full record of a lower regularization run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrimTrace {
    pub alpha: f64,
    pub i0: usize,
    pub i0_bound: f64,
    pub m_alpha: f64,
    pub t_rho_initial: f64,
    pub steps: Vec<TrimStep>,
    /// Final absolute masses kept on each part (`X'`, `Y'`).
    pub selection: Selection,
    /// `t(ρ, W)/t(ρ, Ŵ)`.
    pub scale: f64,
    pub report: TransformReport,
}

/// `1 / (log₂(1-α/10) - log₂√(1-α))`, the bound on the number of rounds.
pub fn i0_bound(alpha: f64) -> f64 {
    1.0 / ((1.0 - alpha / 10.0).log2() - 0.5 * (1.0 - alpha).log2())
}

/// `(1-α)^{1+i0_bound(α)}`, the guaranteed surviving mass per side.
pub fn m_alpha(alpha: f64) -> f64 {
    (1.0 - alpha).powf(1.0 + i0_bound(alpha))
}

fn feasible(alpha: f64, w: &StepBigraphon, t: f64) -> bool {
    m_alpha(alpha) >= 0.125 && 0.1 - alpha * w.norm_inf() / t >= 1.0 / 16.0
}

/// Largest `α = 2^{-k}`, `3 ≤ k ≤ 40`, with `M(α) ≥ 1/8` and
/// `1/10 - α‖W‖∞/t(ρ,W) ≥ 1/16`.
pub fn select_alpha(w: &StepBigraphon) -> Option<f64> {
    let t = w.edge_density();
    if t <= 0.0 {
        return None;
    }
    (3..=40).map(|k| 0.5f64.powi(k)).find(|&a| feasible(a, w, t))
}

struct State<'a> {
    w: &'a StepBigraphon,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl State<'_> {
    fn masses(&self) -> (f64, f64) {
        (self.x.iter().sum(), self.y.iter().sum())
    }

    /// Conditional point degrees on both sides and the conditional edge density.
    fn degrees(&self) -> (Vec<f64>, Vec<f64>, f64) {
        let (xm, ym) = self.masses();
        let (m, n) = (self.w.m(), self.w.n());
        let left: Vec<f64> = (0..m)
            .map(|i| (0..n).map(|j| self.y[j] * self.w.value(i, j)).sum::<f64>() / ym)
            .collect();
        let right: Vec<f64> = (0..n)
            .map(|j| (0..m).map(|i| self.x[i] * self.w.value(i, j)).sum::<f64>() / xm)
            .collect();
        let t = (0..m).map(|i| self.x[i] * left[i]).sum::<f64>() / xm;
        (left, right, t)
    }
}

/// Removes `alpha·total` mass from low-degree parts, lowest degree first.
/// Returns `None` when the low-degree mass is below the quota.
fn trim(masses: &mut [f64], deg: &[f64], threshold: f64, alpha: f64) -> Option<(f64, Vec<usize>)> {
    let total: f64 = masses.iter().sum();
    let mut low: Vec<usize> = (0..masses.len()).filter(|&i| masses[i] > 0.0 && deg[i] < threshold).collect();
    let low_mass: f64 = low.iter().map(|&i| masses[i]).sum();
    let quota = alpha * total;
    if low_mass < quota {
        return None;
    }
    low.sort_by(|&a, &b| deg[a].total_cmp(&deg[b]).then(a.cmp(&b)));
    let mut left = quota;
    let mut touched = Vec::new();
    for i in low {
        if left <= 0.0 {
            break;
        }
        let take = masses[i].min(left);
        masses[i] = if take >= masses[i] { 0.0 } else { masses[i] - take };
        left -= take;
        touched.push(i);
    }
    Some((quota, touched))
}

/// Trims parts of low point degree until both sides are lower regular,
/// then rescales so that `t(ρ)` is unchanged.
///
/// Requires `max{Δ(e₁,W), Δ(e₂,W)} ≤ 2·t(ρ,W)`. With `alpha = None` the
/// largest admissible dyadic `α` is used.
pub fn lower_regularize(w: &StepBigraphon, alpha: Option<f64>) -> Result<(StepBigraphon, TrimTrace)> {
    let t0 = w.edge_density();
    let default_alpha = 0.125;
    if t0 <= 0.0 {
        let a = alpha.unwrap_or(default_alpha);
        let mut report = TransformReport::new("lower_regularize", w, w);
        report.identity = true;
        return Ok((w.clone(), trace_identity(w, a, t0, report)));
    }
    let max_deg = w
        .left_degrees()
        .into_iter()
        .chain(w.right_degrees())
        .fold(0.0, f64::max);
    if slack_le(max_deg, 2.0 * t0) < -ITEM {
        return Err(Error::Precondition(format!(
            "max point degree {max_deg} exceeds 2·t(rho) = {}",
            2.0 * t0
        )));
    }
    let alpha = match alpha {
        Some(a) => {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::InvalidParameter(format!("alpha must lie in (0,1), got {a}")));
            }
            if !feasible(a, w, t0) {
                return Err(Error::Precondition(format!(
                    "alpha {a} violates M(alpha) >= 1/8 or 1/10 - alpha·|W|/t(rho) >= 1/16"
                )));
            }
            a
        }
        None => select_alpha(w)
            .ok_or_else(|| Error::Precondition("no admissible alpha in 2^-3..2^-40".into()))?,
    };
    let bound = i0_bound(alpha);
    let cap = (2.0 * bound).ceil() as usize + 16;

    let mut st = State {
        w,
        x: w.mu().to_vec(),
        y: w.nu().to_vec(),
    };
    let mut steps = Vec::new();
    loop {
        let (dl, dr, t) = st.degrees();
        let threshold = t / 10.0;
        let done = if let Some((removed, parts)) = trim(&mut st.x, &dl, threshold, alpha) {
            (Side::Left, removed, parts)
        } else if let Some((removed, parts)) = trim(&mut st.y, &dr, threshold, alpha) {
            (Side::Right, removed, parts)
        } else {
            break;
        };
        let (_, _, t_after) = st.degrees();
        let (xm, ym) = st.masses();
        steps.push(TrimStep {
            side: done.0,
            removed_mass: done.1,
            parts: done.2,
            t_rho_after: t_after,
            left_mass_after: xm,
            right_mass_after: ym,
        });
        if steps.len() > cap {
            return Err(Error::Internal(format!("trimming did not stop within {cap} rounds")));
        }
    }

    let (dl, dr, t) = st.degrees();
    let keep_left: Vec<f64> = (0..w.m())
        .map(|i| if st.x[i] > 0.0 && dl[i] >= t / 10.0 { st.x[i] } else { 0.0 })
        .collect();
    let keep_right: Vec<f64> = (0..w.n())
        .map(|j| if st.y[j] > 0.0 && dr[j] >= t / 10.0 { st.y[j] } else { 0.0 })
        .collect();
    let untouched = steps.is_empty()
        && keep_left.iter().zip(w.mu()).all(|(a, b)| a == b)
        && keep_right.iter().zip(w.nu()).all(|(a, b)| a == b);
    let selection = Selection {
        left: keep_left,
        right: keep_right,
    };
    let (out, scale) = if untouched {
        (w.clone(), 1.0)
    } else {
        let hat = w.restrict(&selection)?;
        let scale = t0 / hat.edge_density();
        (hat.scale(scale)?, scale)
    };

    let mut report = TransformReport::new("lower_regularize", w, &out);
    report.identity = untouched;
    let i0 = steps.len();
    report.record("i0_bound", slack_le(i0 as f64, bound));
    let growth = (1.0 - alpha / 10.0) / (1.0 - alpha);
    let mut prev = t0;
    for (i, s) in steps.iter().enumerate() {
        report.record("t_rho_monotone", slack_ge(s.t_rho_after, prev));
        report.record("t_rho_growth", slack_ge(s.t_rho_after, growth.powi(i as i32 + 1) * t0));
        prev = s.t_rho_after;
    }
    let (xm, ym) = st.masses();
    let floor = (1.0 - alpha).powi(i0 as i32);
    report.record("mass_lower_bound", slack_ge(xm.min(ym), floor));
    verify(&mut report, w, &out);

    let trace = TrimTrace {
        alpha,
        i0,
        i0_bound: bound,
        m_alpha: m_alpha(alpha),
        t_rho_initial: t0,
        steps,
        selection,
        scale,
        report,
    };
    Ok((out, trace))
}

fn trace_identity(w: &StepBigraphon, alpha: f64, t0: f64, report: TransformReport) -> TrimTrace {
    TrimTrace {
        alpha,
        i0: 0,
        i0_bound: i0_bound(alpha),
        m_alpha: m_alpha(alpha),
        t_rho_initial: t0,
        steps: Vec::new(),
        selection: Selection::full(w),
        scale: 1.0,
        report,
    }
}

fn verify(report: &mut TransformReport, w: &StepBigraphon, out: &StepBigraphon) {
    let t_in = w.edge_density();
    let t_out = out.edge_density();
    report.record("item1", slack_eq(t_out, t_in));
    let min_deg = out
        .left_degrees()
        .into_iter()
        .chain(out.right_degrees())
        .fold(f64::INFINITY, f64::min);
    report.record("item2", slack_ge(min_deg, t_out / 1024.0));
    for (name, g) in test_family(1) {
        let c = 2f64.powi((3 * g.vertex_count() + g.edge_count()) as i32);
        report.record(format!("item3[{name}]"), slack_le(density(out, &g), c * density(w, &g)));
    }
}
