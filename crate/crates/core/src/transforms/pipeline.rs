use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::flag::Flag;
use crate::stepfn::StepBigraphon;
use crate::tolerance::{slack_eq, slack_ge};
use crate::transforms::{density, lower_regularize, main_lemma_transform, relative, test_family, TransformReport, TrimTrace};

/// Stage reports of a multi-step construction plus end-to-end checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub pipeline: String,
    pub stages: Vec<TransformReport>,
    pub trim: Option<TrimTrace>,
    /// End-to-end residuals; `≥ 0` means the check holds.
    pub checks: BTreeMap<String, f64>,
    /// Kernel after every stage.
    #[serde(skip)]
    pub kernels: Vec<StepBigraphon>,
}

impl PipelineReport {
    fn residuals(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        let stage = self.stages.iter().enumerate().flat_map(|(i, r)| {
            r.item_residuals
                .iter()
                .map(move |(k, &v)| (format!("stage{}:{k}", i + 1), v))
        });
        let trim = self
            .trim
            .iter()
            .flat_map(|t| t.report.item_residuals.iter().map(|(k, &v)| (format!("trim:{k}"), v)));
        let checks = self.checks.iter().map(|(k, &v)| (k.clone(), v));
        stage.chain(trim).chain(checks)
    }

    /// Smallest residual across all stages and checks.
    pub fn worst(&self) -> Option<(String, f64)> {
        self.residuals().min_by(|a, b| a.1.total_cmp(&b.1))
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.residuals().all(|(_, r)| r >= -tol)
    }
}

fn dual_main(w: &StepBigraphon, epsilon: f64) -> Result<(StepBigraphon, TransformReport)> {
    let (out, mut report) = main_lemma_transform(&w.dual(), &Flag::e1(), 1, epsilon)?;
    report.transform = "dual_main_lemma".into();
    Ok((out.dual(), report))
}

/// Five-stage biregularization: left and right main lemma with `ε = 1`,
/// lower regularization, then left and right main lemma with `ε = 2^{-10}`.
///
/// The output is biregular with the same edge density, and
/// `t(G,W) ≥ 1025^{-2e}·2^{-3v-3e}·t(G,W')` for every bigraph `G`.
pub fn biregularize_pipeline(w: &StepBigraphon) -> Result<(StepBigraphon, PipelineReport)> {
    let e1 = Flag::e1();
    let eps = 2f64.powi(-10);
    let (w1, r1) = main_lemma_transform(w, &e1, 1, 1.0)?;
    let (w2, r2) = dual_main(&w1, 1.0)?;
    let (w3, trim) = lower_regularize(&w2, None)?;
    let (w4, r4) = main_lemma_transform(&w3, &e1, 1, eps)?;
    let (w5, r5) = dual_main(&w4, eps)?;

    let mut checks = BTreeMap::new();
    let t0 = w.edge_density();
    let t5 = w5.edge_density();
    checks.insert("t_rho_preserved".to_string(), slack_eq(t5, t0));
    let (dl, dr) = w5.biregularity_defect();
    checks.insert("biregular".to_string(), -relative(dl.max(dr), t5));
    for (name, g) in test_family(1) {
        let (v, e) = (g.vertex_count() as i32, g.edge_count() as i32);
        let c = 1025f64.powi(-2 * e) * 2f64.powi(-3 * v - 3 * e);
        checks.insert(format!("chain[{name}]"), slack_ge(density(w, &g), c * density(&w5, &g)));
    }

    let report = PipelineReport {
        pipeline: "biregularize".into(),
        stages: vec![r1, r2, r4, r5],
        trim: Some(trim),
        checks,
        kernels: vec![w1, w2, w3, w4, w5.clone()],
    };
    Ok((w5, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_on_skewed_kernel() {
        let w = StepBigraphon::new(
            vec![0.1, 0.2, 0.3, 0.4],
            vec![0.25, 0.25, 0.5],
            vec![
                vec![0.9, 0.8, 0.7],
                vec![0.0, 0.1, 0.05],
                vec![0.3, 0.6, 0.2],
                vec![0.01, 0.02, 0.9],
            ],
        )
        .unwrap();
        let (out, rep) = biregularize_pipeline(&w).unwrap();
        assert!(rep.holds(1e-9), "{:?}", rep.worst());
        let (dl, dr) = out.biregularity_defect();
        assert!(dl.max(dr) <= 1e-9 * out.edge_density());
        assert_eq!(rep.kernels.len(), 5);
    }
}
