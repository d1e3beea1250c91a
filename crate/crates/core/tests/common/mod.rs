#![allow(dead_code)]

use bigraphon::{Bigraph, StepBigraphon};
use proptest::prelude::*;

/// Brute force `t(G, W)` with some vertices pinned: sums over every part
/// assignment of the free vertices, one odometer step at a time.
pub fn oracle_pinned(g: &Bigraph, w: &StepBigraphon, pinned: &[(usize, usize)]) -> f64 {
    let v1 = g.v1();
    let nv = g.vertex_count();
    let size = |v: usize| if v < v1 { w.m() } else { w.n() };
    let weight = |v: usize, p: usize| if v < v1 { w.mu()[p] } else { w.nu()[p] };
    let mut assign = vec![0usize; nv];
    let mut free = vec![true; nv];
    for &(v, p) in pinned {
        assign[v] = p;
        free[v] = false;
    }
    let free_vs: Vec<usize> = (0..nv).filter(|&v| free[v]).collect();
    let mut total = 0.0;
    loop {
        let mut term: f64 = free_vs.iter().map(|&v| weight(v, assign[v])).product();
        for &(l, r) in g.edges() {
            term *= w.value(assign[l], assign[v1 + r]);
        }
        total += term;
        let mut k = 0;
        loop {
            if k == free_vs.len() {
                return total;
            }
            let v = free_vs[k];
            assign[v] += 1;
            if assign[v] < size(v) {
                break;
            }
            assign[v] = 0;
            k += 1;
        }
    }
}

pub fn oracle(g: &Bigraph, w: &StepBigraphon) -> f64 {
    oracle_pinned(g, w, &[])
}

pub fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn measure(k: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..1.0, k).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

/// Kernels with up to `max` parts per side; about a fifth of the entries are zero.
pub fn kernel(max: usize) -> impl Strategy<Value = StepBigraphon> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| {
        (
            measure(m),
            measure(n),
            prop::collection::vec(prop_oneof![1 => Just(0.0), 4 => 0.0f64..1.0], m * n),
        )
            .prop_map(|(mu, nu, v)| StepBigraphon::from_flat(mu, nu, v).unwrap())
    })
}

pub fn positive_kernel(max: usize) -> impl Strategy<Value = StepBigraphon> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| {
        (measure(m), measure(n), prop::collection::vec(0.05f64..1.0, m * n))
            .prop_map(|(mu, nu, v)| StepBigraphon::from_flat(mu, nu, v).unwrap())
    })
}

pub fn build(a: usize, b: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Bigraph {
    let left: Vec<String> = (0..a).map(|i| format!("L{i}")).collect();
    let right: Vec<String> = (0..b).map(|j| format!("R{j}")).collect();
    let e: Vec<(String, String)> = edges.into_iter().map(|(i, j)| (left[i].clone(), right[j].clone())).collect();
    Bigraph::new(left, right, e).unwrap()
}

/// Random bigraph with `1..=max_side` vertices per side.
pub fn bigraph(max_side: usize) -> impl Strategy<Value = Bigraph> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(a, b)| {
        prop::collection::vec(any::<bool>(), a * b).prop_map(move |bits| {
            build(a, b, (0..a * b).filter(|&k| bits[k]).map(|k| (k / b, k % b)))
        })
    })
}
