use crate::error::{Error, Result};

/// Measures may deviate from summing to one by at most this much.
pub const MEASURE_SUM_TOLERANCE: f64 = 1e-9;

/// A step bigraphon: left parts with measures `mu`, right parts with measures
/// `nu`, and a nonnegative value on every (left part, right part) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct StepBigraphon {
    mu: Vec<f64>,
    nu: Vec<f64>,
    /// Row-major `m × n`.
    values: Vec<f64>,
}

/// Weighted sub-selection of parts: `left[i] ∈ [0, μ_i]` is the mass of left
/// part `i` that is kept (fractional values model measurable subsets of an
/// atom), likewise for `right`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Selection {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl Selection {
    /// Everything selected.
    pub fn full(w: &StepBigraphon) -> Self {
        Selection {
            left: w.mu.clone(),
            right: w.nu.clone(),
        }
    }

    pub fn left_mass(&self) -> f64 {
        self.left.iter().sum()
    }

    pub fn right_mass(&self) -> f64 {
        self.right.iter().sum()
    }
}

fn check_measure(field: &str, w: &[f64]) -> Result<()> {
    if w.is_empty() {
        return Err(Error::kernel(field, "at least one part is required"));
    }
    if let Some((i, x)) = w.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::kernel(
            format!("{field}[{i}]"),
            format!("part measures must be strictly positive and finite, got {x}"),
        ));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > MEASURE_SUM_TOLERANCE {
        return Err(Error::kernel(field, format!("measures sum to {s}, expected 1")));
    }
    Ok(())
}

impl StepBigraphon {
    pub fn new(mu: Vec<f64>, nu: Vec<f64>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != mu.len() {
            return Err(Error::kernel(
                "values",
                format!("{} rows for {} left parts", rows.len(), mu.len()),
            ));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != nu.len()) {
            return Err(Error::kernel(
                format!("values[{i}]"),
                format!("{} entries for {} right parts", r.len(), nu.len()),
            ));
        }
        Self::from_flat(mu, nu, rows.concat())
    }

    pub fn from_flat(mu: Vec<f64>, nu: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_measure("mu", &mu)?;
        check_measure("nu", &nu)?;
        let n = nu.len();
        if values.len() != mu.len() * n {
            return Err(Error::kernel("values", "shape does not match the measures"));
        }
        if let Some((k, x)) = values.iter().enumerate().find(|(_, x)| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::kernel(
                format!("values[{}][{}]", k / n, k % n),
                format!("values must be nonnegative and finite, got {x}"),
            ));
        }
        Ok(StepBigraphon { mu, nu, values })
    }

    /// Uniform measures on both sides.
    pub fn uniform(rows: Vec<Vec<f64>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        Self::new(vec![1.0 / m as f64; m], vec![1.0 / n.max(1) as f64; n], rows)
    }

    /// Constant kernel `≡ p` on `m × n` uniform parts.
    pub fn constant(p: f64, m: usize, n: usize) -> Result<Self> {
        Self::uniform(vec![vec![p; n]; m])
    }

    pub fn m(&self) -> usize {
        self.mu.len()
    }

    pub fn n(&self) -> usize {
        self.nu.len()
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn nu(&self) -> &[f64] {
        &self.nu
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.n()).map(<[f64]>::to_vec).collect()
    }

    /// Measure of the parts on a side (`Left` → `mu`).
    pub fn measure(&self, side: crate::bigraph::Side) -> &[f64] {
        match side {
            crate::bigraph::Side::Left => &self.mu,
            crate::bigraph::Side::Right => &self.nu,
        }
    }

    /// `‖W‖_∞`, the largest value.
    pub fn norm_inf(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `W*`: values transposed, measures swapped.
    pub fn dual(&self) -> StepBigraphon {
        let (m, n) = (self.m(), self.n());
        let mut values = vec![0.0; m * n];
        for i in 0..m {
            for j in 0..n {
                values[j * m + i] = self.values[i * n + j];
            }
        }
        StepBigraphon {
            mu: self.nu.clone(),
            nu: self.mu.clone(),
            values,
        }
    }

    /// `c·W` for `c ≥ 0`.
    pub fn scale(&self, c: f64) -> Result<StepBigraphon> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::InvalidParameter(format!("scale factor must be >= 0, got {c}")));
        }
        Ok(self.map_values(|_, _, x| c * x))
    }

    pub(crate) fn map_values(&self, f: impl Fn(usize, usize, f64) -> f64) -> StepBigraphon {
        let n = self.n();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &x)| f(k / n, k % n, x))
            .collect();
        StepBigraphon {
            mu: self.mu.clone(),
            nu: self.nu.clone(),
            values,
        }
    }

    /// Same values with new measures (assumed valid).
    pub(crate) fn with_parts(mu: Vec<f64>, nu: Vec<f64>, values: Vec<f64>) -> StepBigraphon {
        debug_assert_eq!(values.len(), mu.len() * nu.len());
        StepBigraphon { mu, nu, values }
    }

    /// `W₁ ⊗ W₂`. Left part `(a, b)` has index `a·m₂ + b`, likewise on the right.
    pub fn tensor(&self, other: &StepBigraphon) -> StepBigraphon {
        let (m1, n1, m2, n2) = (self.m(), self.n(), other.m(), other.n());
        let mu = self.mu.iter().flat_map(|&a| other.mu.iter().map(move |&b| a * b)).collect();
        let nu = self.nu.iter().flat_map(|&a| other.nu.iter().map(move |&b| a * b)).collect();
        let mut values = vec![0.0; m1 * m2 * n1 * n2];
        let cols = n1 * n2;
        for x1 in 0..m1 {
            for x2 in 0..m2 {
                let row = x1 * m2 + x2;
                for y1 in 0..n1 {
                    let w1 = self.value(x1, y1);
                    for y2 in 0..n2 {
                        values[row * cols + y1 * n2 + y2] = w1 * other.value(x2, y2);
                    }
                }
            }
        }
        StepBigraphon { mu, nu, values }
    }

    /// `W^{⊗k}` with `W^{⊗1} = W` and `W^{⊗(k+1)} = W^{⊗k} ⊗ W`.
    pub fn tensor_power(&self, k: usize) -> Result<StepBigraphon> {
        if k == 0 {
            return Err(Error::InvalidParameter("tensor power must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.tensor(self);
        }
        Ok(acc)
    }

    /// `W|_{X'×Y'}` over the conditional measures of a weighted selection.
    /// Parts with zero selected mass are dropped.
    pub fn restrict(&self, sel: &Selection) -> Result<StepBigraphon> {
        let (rows, cols) = (self.pick("left", &sel.left, &self.mu)?, self.pick("right", &sel.right, &self.nu)?);
        let lm: f64 = rows.iter().map(|&(_, w)| w).sum();
        let rm: f64 = cols.iter().map(|&(_, w)| w).sum();
        let mu = rows.iter().map(|&(_, w)| w / lm).collect();
        let nu = cols.iter().map(|&(_, w)| w / rm).collect();
        let mut values = Vec::with_capacity(rows.len() * cols.len());
        for &(i, _) in &rows {
            for &(j, _) in &cols {
                values.push(self.value(i, j));
            }
        }
        Ok(StepBigraphon { mu, nu, values })
    }

    fn pick(&self, side: &str, sel: &[f64], full: &[f64]) -> Result<Vec<(usize, f64)>> {
        if sel.len() != full.len() {
            return Err(Error::InvalidParameter(format!(
                "{side} selection has {} entries for {} parts",
                sel.len(),
                full.len()
            )));
        }
        let mut out = Vec::new();
        for (i, (&w, &cap)) in sel.iter().zip(full).enumerate() {
            if !(w.is_finite() && w >= 0.0 && w <= cap * (1.0 + 1e-12)) {
                return Err(Error::InvalidParameter(format!(
                    "{side} selection mass {w} for part {i} outside [0, {cap}]"
                )));
            }
            if w > 0.0 {
                out.push((i, w));
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidParameter(format!("{side} selection has zero mass")));
        }
        Ok(out)
    }

    /// `t(e₁, W)(x)` for every left part.
    pub fn left_degrees(&self) -> Vec<f64> {
        self.values
            .chunks(self.n())
            .map(|row| row.iter().zip(&self.nu).map(|(w, v)| w * v).sum())
            .collect()
    }

    /// `t(e₂, W)(y)` for every right part.
    pub fn right_degrees(&self) -> Vec<f64> {
        let n = self.n();
        (0..n)
            .map(|j| (0..self.m()).map(|i| self.mu[i] * self.values[i * n + j]).sum())
            .collect()
    }

    /// `t(ρ, W)`.
    pub fn edge_density(&self) -> f64 {
        self.left_degrees().iter().zip(&self.mu).map(|(d, m)| d * m).sum()
    }

    /// Max deviation of left (right) point degrees from `t(ρ, W)`.
    pub fn biregularity_defect(&self) -> (f64, f64) {
        let t = self.edge_density();
        let dev = |d: Vec<f64>| d.into_iter().map(|x| (x - t).abs()).fold(0.0, f64::max);
        (dev(self.left_degrees()), dev(self.right_degrees()))
    }

    /// `μ = ν` and symmetric values, within `tol`.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.m() == self.n()
            && self.mu.iter().zip(&self.nu).all(|(a, b)| (a - b).abs() <= tol)
            && (0..self.m()).all(|i| (0..i).all(|j| (self.value(i, j) - self.value(j, i)).abs() <= tol))
    }
}
