//! Evaluation of partially integrated homomorphism densities.
//!
//! Both routes compute, for every assignment of the pinned vertices to
//! parts, the sum over assignments of the remaining vertices of
//! `∏ edge values × ∏ part measures of the unpinned vertices`.
//! `naive` enumerates assignments depth-first; `treedp` eliminates
//! variables one at a time along a min-fill order.

use std::collections::BTreeSet;

use crate::bigraph::Bigraph;
use crate::par;
use crate::stepfn::StepBigraphon;

/// How to evaluate a density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DensityMethod {
    /// Exhaustive enumeration of part assignments.
    Naive,
    /// Variable elimination over a greedy (min-fill) tree decomposition.
    TreeDp,
    /// `Naive` for tiny enumerations, `TreeDp` otherwise.
    #[default]
    Auto,
}

impl std::str::FromStr for DensityMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(DensityMethod::Naive),
            "treedp" => Ok(DensityMethod::TreeDp),
            "auto" => Ok(DensityMethod::Auto),
            other => Err(crate::Error::InvalidParameter(format!("unknown density method `{other}`"))),
        }
    }
}

impl std::fmt::Display for DensityMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DensityMethod::Naive => "naive",
            DensityMethod::TreeDp => "treedp",
            DensityMethod::Auto => "auto",
        })
    }
}

const AUTO_NAIVE_LIMIT: f64 = 4096.0;

struct Ctx<'a> {
    g: &'a Bigraph,
    w: &'a StepBigraphon,
    parts: Vec<usize>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a Bigraph, w: &'a StepBigraphon) -> Self {
        let parts = (0..g.vertex_count())
            .map(|v| if v < g.v1() { w.m() } else { w.n() })
            .collect();
        Ctx { g, w, parts }
    }

    fn measure(&self, v: usize) -> &[f64] {
        if v < self.g.v1() {
            self.w.mu()
        } else {
            self.w.nu()
        }
    }

    /// W at (part of left endpoint, part of right endpoint) for global vertices.
    fn edge_value(&self, a: usize, pa: usize, _b: usize, pb: usize) -> f64 {
        if a < self.g.v1() {
            self.w.value(pa, pb)
        } else {
            self.w.value(pb, pa)
        }
    }
}

/// Table over pinned assignments, row-major in the order of `pinned`.
pub(crate) fn pinned_table(g: &Bigraph, pinned: &[usize], w: &StepBigraphon, method: DensityMethod) -> Vec<f64> {
    let ctx = Ctx::new(g, w);
    let method = match method {
        DensityMethod::Auto => {
            let work: f64 = (0..g.vertex_count()).map(|v| ctx.parts[v] as f64).product();
            if work <= AUTO_NAIVE_LIMIT {
                DensityMethod::Naive
            } else {
                DensityMethod::TreeDp
            }
        }
        m => m,
    };
    match method {
        DensityMethod::Naive => naive(&ctx, pinned),
        _ => treedp(&ctx, pinned),
    }
}

fn decode(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
}

// ---------------------------------------------------------------------------
// naive

struct Plan {
    free: Vec<usize>,
    /// For each free vertex in order, its neighbors placed before it.
    back: Vec<Vec<usize>>,
    /// Edges with both endpoints pinned.
    pinned_edges: Vec<(usize, usize)>,
}

fn plan(g: &Bigraph, pinned: &[usize]) -> Plan {
    let n = g.vertex_count();
    let mut placed = vec![false; n];
    for &v in pinned {
        placed[v] = true;
    }
    let mut free = Vec::new();
    let mut back = Vec::new();
    while free.len() + pinned.len() < n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let k = g.neighbors(v).iter().filter(|&&u| placed[u]).count();
                (k, std::cmp::Reverse(v))
            })
            .expect("unplaced vertex");
        back.push(g.neighbors(v).iter().copied().filter(|&u| placed[u]).collect());
        placed[v] = true;
        free.push(v);
    }
    let pinned_edges = g
        .global_edges()
        .filter(|&(a, b)| pinned.contains(&a) && pinned.contains(&b))
        .collect();
    Plan {
        free,
        back,
        pinned_edges,
    }
}

fn naive(ctx: &Ctx, pinned: &[usize]) -> Vec<f64> {
    let plan = plan(ctx.g, pinned);
    let dims: Vec<usize> = pinned.iter().map(|&v| ctx.parts[v]).collect();
    let entries: usize = dims.iter().product();
    let n = ctx.g.vertex_count();

    let eval_entry = |e: usize, first: Option<usize>| -> f64 {
        let mut assign = vec![usize::MAX; n];
        let mut pins = vec![0; pinned.len()];
        decode(e, &dims, &mut pins);
        for (&v, &p) in pinned.iter().zip(&pins) {
            assign[v] = p;
        }
        let base: f64 = plan
            .pinned_edges
            .iter()
            .map(|&(a, b)| ctx.edge_value(a, assign[a], b, assign[b]))
            .product();
        if base == 0.0 {
            return 0.0;
        }
        base * dfs(ctx, &plan, 0, first, &mut assign)
    };

    if entries > 1 || plan.free.is_empty() {
        par::map_range(entries, |e| eval_entry(e, None))
    } else {
        let v0 = plan.free[0];
        vec![par::sum_range(ctx.parts[v0], |p| eval_entry(0, Some(p)))]
    }
}

/// Sum over assignments of `plan.free[depth..]`; if `only` is set the vertex
/// at this depth is restricted to that part.
fn dfs(ctx: &Ctx, plan: &Plan, depth: usize, only: Option<usize>, assign: &mut [usize]) -> f64 {
    let Some(&v) = plan.free.get(depth) else {
        return 1.0;
    };
    let measure = ctx.measure(v);
    let range = match only {
        Some(p) => p..p + 1,
        None => 0..ctx.parts[v],
    };
    let mut total = 0.0;
    for p in range {
        let mut f = measure[p];
        for &u in &plan.back[depth] {
            f *= ctx.edge_value(v, p, u, assign[u]);
        }
        if f == 0.0 {
            continue;
        }
        assign[v] = p;
        total += f * dfs(ctx, plan, depth + 1, None, assign);
    }
    assign[v] = usize::MAX;
    total
}

// ---------------------------------------------------------------------------
// treedp

struct Factor {
    scope: Vec<usize>,
    data: Vec<f64>,
}

/// Multiplies `factors` over `out ++ [elim]` and sums out `elim` weighted by
/// its measure; the result is indexed by `out` (row-major).
fn combine(ctx: &Ctx, factors: &[&Factor], out: &[usize], elim: Option<usize>) -> Factor {
    let mut vars: Vec<usize> = out.to_vec();
    vars.extend(elim);
    let dims: Vec<usize> = vars.iter().map(|&v| ctx.parts[v]).collect();
    let total: usize = dims.iter().product();
    let out_len: usize = out.iter().map(|&v| ctx.parts[v]).product();

    // stride of each variable (by position in `vars`) inside each factor
    let strides: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| {
            let fd: Vec<usize> = f.scope.iter().map(|&v| ctx.parts[v]).collect();
            let mut own = vec![0; f.scope.len()];
            let mut s = 1;
            for k in (0..fd.len()).rev() {
                own[k] = s;
                s *= fd[k];
            }
            vars.iter()
                .map(|v| f.scope.iter().position(|u| u == v).map_or(0, |k| own[k]))
                .collect()
        })
        .collect();
    let measure = elim.map(|e| ctx.measure(e));

    let mut data = vec![0.0; out_len];
    let mut idx = vec![0usize; vars.len()];
    let mut offs = vec![0usize; factors.len()];
    let last = vars.len();
    for flat in 0..total {
        let mut prod = 1.0;
        for (f, &o) in factors.iter().zip(&offs) {
            prod *= f.data[o];
        }
        let (slot, weight) = match measure {
            Some(m) => (flat / dims[last - 1], m[idx[last - 1]]),
            None => (flat, 1.0),
        };
        data[slot] += prod * weight;
        // odometer
        let mut k = last;
        while k > 0 {
            k -= 1;
            idx[k] += 1;
            for (o, s) in offs.iter_mut().zip(&strides) {
                *o += s[k];
            }
            if idx[k] < dims[k] {
                break;
            }
            for (o, s) in offs.iter_mut().zip(&strides) {
                *o -= s[k] * dims[k];
            }
            idx[k] = 0;
        }
    }
    Factor {
        scope: out.to_vec(),
        data,
    }
}

/// Greedy min-fill elimination order over the unpinned vertices.
pub(crate) fn min_fill_order(g: &Bigraph, pinned: &[usize]) -> Vec<usize> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut todo: BTreeSet<usize> = (0..n).filter(|v| !pinned.contains(v)).collect();
    let mut order = Vec::with_capacity(todo.len());
    while !todo.is_empty() {
        let fill = |v: usize| {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut missing = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if !adj[a].contains(&b) {
                        missing += 1;
                    }
                }
            }
            (missing, nb.len(), v)
        };
        let v = todo.iter().copied().min_by_key(|&v| fill(v)).expect("nonempty");
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for &a in &nb {
            adj[a].remove(&v);
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
        adj[v].clear();
        todo.remove(&v);
        order.push(v);
    }
    order
}

fn treedp(ctx: &Ctx, pinned: &[usize]) -> Vec<f64> {
    let g = ctx.g;
    let w = ctx.w;
    let mut pool: Vec<Factor> = g
        .global_edges()
        .map(|(l, r)| Factor {
            scope: vec![l, r],
            data: w.values().to_vec(),
        })
        .collect();
    for v in min_fill_order(g, pinned) {
        let (touching, rest): (Vec<Factor>, Vec<Factor>) = pool.into_iter().partition(|f| f.scope.contains(&v));
        let out: Vec<usize> = touching
            .iter()
            .flat_map(|f| f.scope.iter().copied())
            .filter(|&u| u != v)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let refs: Vec<&Factor> = touching.iter().collect();
        let merged = combine(ctx, &refs, &out, Some(v));
        pool = rest;
        pool.push(merged);
    }
    let refs: Vec<&Factor> = pool.iter().collect();
    combine(ctx, &refs, pinned, None).data
}
