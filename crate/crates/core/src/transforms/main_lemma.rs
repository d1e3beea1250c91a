use crate::error::{Error, Result};
use crate::flag::Flag;
use crate::stepfn::StepBigraphon;
use crate::tolerance::{slack_eq, slack_ge, slack_le};
use crate::transforms::{density, right_flags_left_regular, test_family, KernelSummary, TransformReport};

pub(crate) fn check_left_flag(f: &Flag, d: usize, epsilon: f64) -> Result<()> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::Precondition(format!("epsilon must be positive, got {epsilon}")));
    }
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    if !f.is_left_one_flag() {
        return Err(Error::Precondition("F must be a left 1-flag".into()));
    }
    if !f.underlying().is_left_regular(d) {
        return Err(Error::Precondition(format!("|F| is not left {d}-regular")));
    }
    Ok(())
}

/// Reweights the left parts by `f(x) = max{t(F,W)(x), ε·t(|F|,W)}` and
/// rescales every row by `(Z/f(x))^{1/d}`, where `Z = ∫ f dμ`.
///
/// The result has `Δ(F,W') ≤ (1+ε)·t(|F|,W')`, leaves the density of every
/// left `d`-regular bigraph unchanged, and moves all other densities by at
/// most `(1+1/ε)^{e/d - v₁}` in the appropriate direction.
pub fn main_lemma_transform(
    w: &StepBigraphon,
    f: &Flag,
    d: usize,
    epsilon: f64,
) -> Result<(StepBigraphon, crate::transforms::TransformReport)> {
    check_left_flag(f, d, epsilon)?;
    let g = f.underlying();
    let t_g = density(w, g);
    let table = w.flag_density(f);

    let (out, f_values, z) = if t_g == 0.0 {
        (w.clone(), Vec::new(), None)
    } else {
        let f_values: Vec<f64> = table.values.iter().map(|&t| t.max(epsilon * t_g)).collect();
        let z: f64 = f_values.iter().zip(w.mu()).map(|(f, m)| f * m).sum();
        let mu: Vec<f64> = f_values.iter().zip(w.mu()).map(|(f, m)| m * f / z).collect();
        let row_scale: Vec<f64> = f_values.iter().map(|f| (z / f).powf(1.0 / d as f64)).collect();
        let scaled = w.map_values(|i, _, x| row_scale[i] * x);
        (
            StepBigraphon::with_parts(mu, w.nu().to_vec(), scaled.values().to_vec()),
            f_values,
            Some(z),
        )
    };

    let mut report = TransformReport::new("main_lemma", w, &out);
    report.identity = z.is_none();
    report.epsilon = Some(epsilon);
    report.d = Some(d);
    report.z = z;
    report.input = KernelSummary::of(w).with_flag(w, f);
    report.output = KernelSummary::of(&out).with_flag(&out, f);
    if let Some(z) = z {
        let again: f64 = f_values.iter().zip(w.mu()).map(|(f, m)| f * m).sum();
        report.record("Z_sum", slack_eq(z, again));
        report.record("Z_lower", slack_ge(z, t_g));
        report.record("Z_upper", slack_le(z, (1.0 + epsilon) * t_g));
    }
    report.f_values = f_values;
    verify_items(&mut report, w, &out, f, d, epsilon);
    Ok((out, report))
}

fn verify_items(report: &mut TransformReport, w: &StepBigraphon, out: &StepBigraphon, f: &Flag, d: usize, eps: f64) {
    let g = f.underlying();
    let before = w.flag_density(f);
    let after = out.flag_density(f);
    let t_g_after = density(out, g);
    report.record("item1", slack_le(after.big_delta(), (1.0 + eps) * t_g_after));
    report.record("item2", slack_ge(after.delta(), t_g_after.min(before.delta() / eps)));

    for (name, fl) in right_flags_left_regular(d) {
        let a = w.flag_density(&fl);
        let b = out.flag_density(&fl);
        for (x, y) in a.values.iter().zip(&b.values) {
            report.record(format!("item3[{name}]"), slack_eq(*y, *x));
        }
    }

    let base = 1.0 + 1.0 / eps;
    let corollary = d == 1 && f.underlying().edge_count() == 1;
    for (name, h) in test_family(d) {
        let p = h.degree_profile();
        let t_before = density(w, &h);
        let t_after = density(out, &h);
        let bound = base.powf(h.edge_count() as f64 / d as f64 - h.v1() as f64) * t_before;
        if p.big_delta1 <= d {
            report.record(format!("item4[{name}]"), slack_ge(t_after, bound));
        }
        if h.v1() > 0 && p.delta1 >= d {
            report.record(format!("item5[{name}]"), slack_le(t_after, bound));
        }
        if h.v1() > 0 && h.is_left_regular(d) {
            report.record(format!("item6[{name}]"), slack_eq(t_after, t_before));
        }
        if corollary {
            let cor = base.powi(h.edge_count() as i32) * t_before;
            report.record(format!("cor_item4[{name}]"), slack_le(t_after, cor));
        }
    }
}
