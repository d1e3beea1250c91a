use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::stepfn::StepBigraphon;

/// Largest allowed relative biregularity defect of a sampled kernel.
pub const BIREGULAR_TOLERANCE: f64 = 1e-10;

const MAX_SCALING_ROUNDS: usize = 5000;

/// Independent stream `index` of the generator seeded by `seed`. Streams do
/// not depend on how work is split across threads.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_measure<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let s: f64 = raw.iter().sum();
    let mut out: Vec<f64> = raw.iter().map(|x| x / s).collect();
    // put the rounding error on the largest part so the sum is 1 to the ulp
    let err = 1.0 - out.iter().sum::<f64>();
    let big = (0..k).max_by(|&a, &b| out[a].total_cmp(&out[b])).unwrap_or(0);
    out[big] += err;
    out
}

/// Random measures and values uniform on `[lo, hi]`.
pub fn random_kernel<R: Rng>(rng: &mut R, m: usize, n: usize, lo: f64, hi: f64) -> StepBigraphon {
    let mu = random_measure(rng, m);
    let nu = random_measure(rng, n);
    let values = (0..m * n).map(|_| rng.gen_range(lo..=hi)).collect();
    StepBigraphon::from_flat(mu, nu, values).expect("random kernel is valid")
}

/// Random symmetric kernel with equal measures on both sides.
pub fn random_symmetric_kernel<R: Rng>(rng: &mut R, m: usize) -> StepBigraphon {
    let mu = random_measure(rng, m);
    let mut values = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let x = rng.gen_range(0.0..=1.0);
            values[i * m + j] = x;
            values[j * m + i] = x;
        }
    }
    StepBigraphon::from_flat(mu.clone(), mu, values).expect("random kernel is valid")
}

/// Scales rows and columns of `w` until all point degrees agree.
///
/// Alternates `a_i ← 1/Σ_j ν_j b_j K_ij` and `b_j ← 1/Σ_i μ_i a_i K_ij`, then
/// normalizes so the largest value is 1. Returns `None` if the defect does
/// not drop to [`BIREGULAR_TOLERANCE`] within the round limit.
pub fn biregularize_by_scaling(w: &StepBigraphon) -> Option<StepBigraphon> {
    let (m, n) = (w.m(), w.n());
    let (mu, nu) = (w.mu(), w.nu());
    let mut a = vec![1.0; m];
    let mut b = vec![1.0; n];
    for _ in 0..MAX_SCALING_ROUNDS {
        for i in 0..m {
            let s: f64 = (0..n).map(|j| nu[j] * b[j] * w.value(i, j)).sum();
            if s <= 0.0 {
                return None;
            }
            a[i] = 1.0 / s;
        }
        for j in 0..n {
            let s: f64 = (0..m).map(|i| mu[i] * a[i] * w.value(i, j)).sum();
            if s <= 0.0 {
                return None;
            }
            b[j] = 1.0 / s;
        }
        let worst = (0..m)
            .map(|i| {
                let deg: f64 = (0..n).map(|j| nu[j] * a[i] * b[j] * w.value(i, j)).sum();
                (deg - 1.0).abs()
            })
            .fold(0.0, f64::max);
        if worst < BIREGULAR_TOLERANCE * 1e-2 {
            let scaled = w.map_values(|i, j, x| a[i] * b[j] * x);
            let top = scaled.norm_inf();
            let out = scaled.map_values(|_, _, x| x / top);
            let (dl, dr) = out.biregularity_defect();
            return (dl.max(dr) <= BIREGULAR_TOLERANCE * out.edge_density()).then_some(out);
        }
    }
    None
}

/// Draws strictly positive kernels (values uniform on `[0.1, 1]`) until one
/// scales to a biregular kernel. Returns the kernel and the number of
/// rejected draws.
pub fn sample_biregular<R: Rng>(rng: &mut R, m: usize, n: usize) -> (StepBigraphon, usize) {
    let mut rejected = 0;
    loop {
        let raw = random_kernel(rng, m, n, 0.1, 1.0);
        match biregularize_by_scaling(&raw) {
            Some(w) => return (w, rejected),
            None => rejected += 1,
        }
    }
}
