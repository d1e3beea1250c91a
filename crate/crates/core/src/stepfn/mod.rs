//! Step bigraphons and their density functionals.
//!
//! A step bigraphon is constant on each cell of a finite product partition,
//! so every density is a finite weighted sum over part assignments. Parts
//! always carry positive measure, which makes minima and maxima over parts
//! coincide with essential infima and suprema.

mod contract;
mod kernel;

pub use contract::DensityMethod;
pub use kernel::{Selection, StepBigraphon, MEASURE_SUM_TOLERANCE};

use crate::bigraph::{Bigraph, Side};
use crate::flag::Flag;

/// `t(F, W)` tabulated over the parts assigned to the labeled vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct FlagDensityTable {
    pub flag: Flag,
    /// Number of parts per label (left labels range over `m`, right over `n`).
    pub dims: Vec<usize>,
    /// Row-major, label 0 slowest.
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl FlagDensityTable {
    /// Entry for one part per label.
    pub fn get(&self, parts: &[usize]) -> f64 {
        let mut k = 0;
        for (&p, &d) in parts.iter().zip(&self.dims) {
            k = k * d + p;
        }
        self.values[k]
    }

    /// `δ(F, W)`.
    pub fn delta(&self) -> f64 {
        self.min
    }

    /// `Δ(F, W)`.
    pub fn big_delta(&self) -> f64 {
        self.max
    }

    /// Integrates the labeled coordinates against the part measures.
    pub fn integrate(&self, w: &StepBigraphon) -> f64 {
        let g = self.flag.underlying();
        let measures: Vec<&[f64]> = self
            .flag
            .labels()
            .iter()
            .map(|&v| w.measure(g.side(v)))
            .collect();
        let mut parts = vec![0; self.dims.len()];
        let mut total = 0.0;
        for (k, &x) in self.values.iter().enumerate() {
            let mut rem = k;
            for i in (0..self.dims.len()).rev() {
                parts[i] = rem % self.dims[i];
                rem /= self.dims[i];
            }
            let weight: f64 = parts.iter().zip(&measures).map(|(&p, m)| m[p]).product();
            total += x * weight;
        }
        total
    }
}

impl StepBigraphon {
    /// `t(G, W)`.
    pub fn density(&self, g: &Bigraph, method: DensityMethod) -> f64 {
        contract::pinned_table(g, &[], self, method)[0]
    }

    /// `t(F, W)` for every assignment of the labeled vertices.
    pub fn flag_density(&self, f: &Flag) -> FlagDensityTable {
        self.flag_density_with(f, DensityMethod::Auto)
    }

    pub fn flag_density_with(&self, f: &Flag, method: DensityMethod) -> FlagDensityTable {
        let g = f.underlying();
        let values = contract::pinned_table(g, f.labels(), self, method);
        let dims = f
            .labels()
            .iter()
            .map(|&v| match g.side(v) {
                Side::Left => self.m(),
                Side::Right => self.n(),
            })
            .collect();
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        FlagDensityTable {
            flag: f.clone(),
            dims,
            values,
            min,
            max,
        }
    }

    /// `∂ t(G, W) / ∂ W[i][j]`, row-major `m × n`.
    ///
    /// Sum over edges `(v, w)` of the density of `G - (v, w)` with `v`, `w`
    /// pinned at `(i, j)`, times `μ_i ν_j`.
    pub fn density_gradient(&self, g: &Bigraph) -> Vec<f64> {
        let (m, n) = (self.m(), self.n());
        let mut grad = vec![0.0; m * n];
        for &(l, r) in g.edges() {
            let h = Bigraph::from_indices(
                g.left_ids().to_vec(),
                g.right_ids().to_vec(),
                g.edges().iter().copied().filter(|&e| e != (l, r)).collect(),
            );
            let pinned = [l, g.v1() + r];
            let table = contract::pinned_table(&h, &pinned, self, DensityMethod::Auto);
            for (acc, x) in grad.iter_mut().zip(&table) {
                *acc += x;
            }
        }
        for i in 0..m {
            for j in 0..n {
                grad[i * n + j] *= self.mu()[i] * self.nu()[j];
            }
        }
        grad
    }
}
