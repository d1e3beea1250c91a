use std::collections::BTreeMap;

use crate::bigraph::Bigraph;
use crate::error::{Error, Result};
use crate::flag::Flag;
use crate::stepfn::{Selection, StepBigraphon};
use crate::tolerance::{slack_eq, slack_ge, slack_le, ITEM};
use crate::transforms::{density, relative, main_lemma_transform, test_family, KernelSummary, PipelineReport, TransformReport};

/// Keeps the left parts whose `K_{1,d}` degree is at least half of
/// `t(K_{1,d},W)` and rescales by `(t(K_{1,d},W)/t(K_{1,d},Ŵ))^{1/d}`.
///
/// Requires `Δ(K^L_{1,d},W) ≤ 2·t(K_{1,d},W)`.
pub fn k1d_lower_regularize(w: &StepBigraphon, d: usize) -> Result<(StepBigraphon, TransformReport)> {
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    let star = Bigraph::star(d)?;
    let flag = Flag::star_left(d)?;
    let tk = density(w, &star);
    let table = w.flag_density(&flag);
    if tk == 0.0 {
        let mut report = TransformReport::new("k1d_lower_regularize", w, w);
        report.identity = true;
        report.d = Some(d);
        return Ok((w.clone(), report));
    }
    if slack_le(table.big_delta(), 2.0 * tk) < -ITEM {
        return Err(Error::Precondition(format!(
            "Delta(K^L_1,{d}) = {} exceeds 2·t(K_1,{d}) = {}",
            table.big_delta(),
            2.0 * tk
        )));
    }
    let keep: Vec<bool> = table.values.iter().map(|&x| x >= tk / 2.0).collect();
    let out = if keep.iter().all(|&k| k) {
        w.clone()
    } else {
        let sel = Selection {
            left: keep
                .iter()
                .zip(w.mu())
                .map(|(&k, &m)| if k { m } else { 0.0 })
                .collect(),
            right: w.nu().to_vec(),
        };
        let hat = w.restrict(&sel)?;
        let c = (tk / density(&hat, &star)).powf(1.0 / d as f64);
        hat.scale(c)?
    };

    let mut report = TransformReport::new("k1d_lower_regularize", w, &out);
    report.identity = keep.iter().all(|&k| k);
    report.d = Some(d);
    report.input = KernelSummary::of(w).with_flag(w, &flag);
    report.output = KernelSummary::of(&out).with_flag(&out, &flag);
    let kept: f64 = keep.iter().zip(w.mu()).filter(|(k, _)| **k).map(|(_, m)| m).sum();
    report.record("kept_mass", slack_ge(kept, 1.0 / 3.0));
    let tk_out = density(&out, &star);
    report.record("item1", slack_eq(tk_out, tk));
    report.record("item2", slack_ge(out.flag_density(&flag).delta(), tk_out / 6.0));
    for (name, g) in test_family(d) {
        let c = 3f64.powi(g.v1() as i32);
        report.record(format!("item3[{name}]"), slack_le(density(&out, &g), c * density(w, &g)));
    }
    Ok((out, report))
}

/// Main lemma with `F = K^L_{1,d}`, `ε = 1`, then star lower regularization,
/// then the main lemma again with `ε = 1/6`. The result is left regular and
/// keeps `t(K_{1,d})`.
pub fn stars_pipeline(w: &StepBigraphon, d: usize) -> Result<(StepBigraphon, PipelineReport)> {
    let flag = Flag::star_left(d)?;
    let star = flag.underlying().clone();
    let (w1, r1) = main_lemma_transform(w, &flag, d, 1.0)?;
    let (w2, r2) = k1d_lower_regularize(&w1, d)?;
    let (w3, r3) = main_lemma_transform(&w2, &flag, d, 1.0 / 6.0)?;

    let mut checks = BTreeMap::new();
    let mut put = |k: String, v: f64| {
        let e = checks.entry(k).or_insert(f64::INFINITY);
        *e = f64::min(*e, v);
    };
    let t0 = density(w, &star);
    for (i, wi) in [&w1, &w2, &w3].into_iter().enumerate() {
        put(format!("t_star_preserved[W{}]", i + 1), slack_eq(density(wi, &star), t0));
    }
    let t3 = density(&w3, &star);
    let table = w3.flag_density(&flag);
    let spread = table.big_delta() - table.delta();
    put("star_regular".into(), -relative(spread, t3));
    let (left_defect, _) = w3.biregularity_defect();
    put("left_regular".into(), -relative(left_defect, w3.edge_density()));
    for (name, g) in test_family(d) {
        let p = g.degree_profile();
        if g.v1() == 0 || p.delta1 < d {
            continue;
        }
        let (v1, e) = (g.v1() as f64, g.edge_count() as f64);
        let ed = e / d as f64;
        let c = 2f64.powf(v1 - ed) * 3f64.powf(-v1) * 7f64.powf(v1 - ed);
        put(format!("chain[{name}]"), slack_ge(density(w, &g), c * density(&w3, &g)));
    }

    let report = PipelineReport {
        pipeline: format!("stars(d={d})"),
        stages: vec![r1, r2, r3],
        trim: None,
        checks,
        kernels: vec![w1, w2, w3.clone()],
    };
    Ok((w3, report))
}
