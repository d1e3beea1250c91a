use crate::error::{Error, Result};
use crate::flag::Flag;
use crate::stepfn::StepBigraphon;
use crate::tolerance::{slack_eq, slack_ge, slack_le, IDENTITY};
use crate::transforms::main_lemma::check_left_flag;
use crate::transforms::{density, test_family, KernelSummary, TransformReport};

/// Symmetric version of the main lemma: both sides are reweighted by `f`
/// and `W'(x,y) = (Z²/(f(x)f(y)))^{1/d}·W(x,y)`.
///
/// `W` must be symmetric and `|F|` both left and right `d`-regular. The
/// output is symmetric.
pub fn symmetric_main_lemma(
    w: &StepBigraphon,
    f: &Flag,
    d: usize,
    epsilon: f64,
) -> Result<(StepBigraphon, TransformReport)> {
    check_left_flag(f, d, epsilon)?;
    if !f.underlying().is_right_regular(d) {
        return Err(Error::Precondition(format!("|F| is not right {d}-regular")));
    }
    if !w.is_symmetric(IDENTITY * w.norm_inf().max(1.0)) {
        return Err(Error::Precondition("kernel is not symmetric".into()));
    }
    let g = f.underlying();
    let t_g = density(w, g);
    let table = w.flag_density(f);

    let (out, f_values, z) = if t_g == 0.0 {
        (w.clone(), Vec::new(), None)
    } else {
        let m = w.m();
        let fv: Vec<f64> = table.values.iter().map(|&t| t.max(epsilon * t_g)).collect();
        let z: f64 = fv.iter().zip(w.mu()).map(|(f, m)| f * m).sum();
        let mu: Vec<f64> = fv.iter().zip(w.mu()).map(|(f, m)| m * f / z).collect();
        let mut values = vec![0.0; m * m];
        for i in 0..m {
            for j in i..m {
                let c = (z * z / (fv[i] * fv[j])).powf(1.0 / d as f64);
                values[i * m + j] = c * w.value(i, j);
                values[j * m + i] = c * w.value(i, j);
            }
        }
        (StepBigraphon::with_parts(mu.clone(), mu, values), fv, Some(z))
    };

    let mut report = TransformReport::new("symmetric_main_lemma", w, &out);
    report.identity = z.is_none();
    report.epsilon = Some(epsilon);
    report.d = Some(d);
    report.z = z;
    report.f_values = f_values;
    report.input = KernelSummary::of(w).with_flag(w, f);
    report.output = KernelSummary::of(&out).with_flag(&out, f);
    report.record("symmetric", if out.is_symmetric(0.0) { 0.0 } else { -1.0 });

    let before = w.flag_density(f);
    let after = out.flag_density(f);
    let t_after = density(&out, g);
    report.record("item1", slack_le(after.big_delta(), (1.0 + epsilon) * t_after));
    report.record("item2", slack_ge(after.delta(), t_after.min(before.delta() / epsilon)));
    let base = 1.0 + 1.0 / epsilon;
    for (name, h) in test_family(d) {
        let p = h.degree_profile();
        let t0 = density(w, &h);
        let t1 = density(&out, &h);
        let bound = base.powf(2.0 * h.edge_count() as f64 / d as f64 - h.vertex_count() as f64) * t0;
        if p.big_delta1.max(p.big_delta2) <= d {
            report.record(format!("item3[{name}]"), slack_ge(t1, bound));
        }
        if h.v1() > 0 && h.v2() > 0 && p.delta1.min(p.delta2) >= d {
            report.record(format!("item4[{name}]"), slack_le(t1, bound));
        }
        if h.v1() > 0 && h.v2() > 0 && h.is_left_regular(d) && h.is_right_regular(d) {
            report.record(format!("item5[{name}]"), slack_eq(t1, t0));
        }
    }
    Ok((out, report))
}
