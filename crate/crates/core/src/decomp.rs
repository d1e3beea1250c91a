//! Tree decompositions, the reflective condition on adjacent bags, the
//! weight `d_T` and the integral identity behind the gluing argument.
//!
//! For a tree edge `{U₁, U₂}` the flag `F_{U₁U₂}` is `G|_{U₁}` with the
//! shared vertices `U₁ ∩ U₂` labeled in the host's vertex order, so the same
//! vertex gets the same label on both sides. `F'_{U₁U₂}` additionally drops
//! the edges inside `U₁ ∩ U₂`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bigraph::Bigraph;
use crate::error::{Error, Result};
use crate::flag::{two_core, Flag};
use crate::iso::bigraphs_isomorphic;
use crate::par;
use crate::stepfn::{DensityMethod, FlagDensityTable, StepBigraphon};
use crate::tolerance::rel_diff;

/// Bags of vertex ids joined by the edges of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    bags: Vec<Vec<String>>,
    tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<String>>, tree_edges: Vec<(usize, usize)>) -> Result<Self> {
        let k = bags.len();
        if k == 0 {
            return Err(Error::InvalidDecomposition("no bags".into()));
        }
        for (i, bag) in bags.iter().enumerate() {
            if bag.is_empty() {
                return Err(Error::InvalidDecomposition(format!("bag {i} is empty")));
            }
            let distinct: BTreeSet<&String> = bag.iter().collect();
            if distinct.len() != bag.len() {
                return Err(Error::InvalidDecomposition(format!("bag {i} repeats a vertex")));
            }
        }
        if tree_edges.len() + 1 != k {
            return Err(Error::InvalidDecomposition(format!(
                "{} tree edges for {k} bags; a tree needs {}",
                tree_edges.len(),
                k - 1
            )));
        }
        for &(a, b) in &tree_edges {
            if a >= k || b >= k || a == b {
                return Err(Error::InvalidDecomposition(format!("bad tree edge [{a}, {b}]")));
            }
        }
        let t = TreeDecomposition { bags, tree_edges };
        let all: Vec<usize> = (0..k).collect();
        if !t.connected_subset(&all) {
            return Err(Error::InvalidDecomposition("tree edges do not connect all bags".into()));
        }
        Ok(t)
    }

    /// The decomposition with `V(G)` as its only bag.
    pub fn single_bag(g: &Bigraph) -> Self {
        TreeDecomposition {
            bags: vec![all_ids(g)],
            tree_edges: Vec::new(),
        }
    }

    pub fn bags(&self) -> &[Vec<String>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    fn connected_subset(&self, subset: &[usize]) -> bool {
        let inside: BTreeSet<usize> = subset.iter().copied().collect();
        let Some(&start) = subset.first() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(a, b) in &self.tree_edges {
                let next = if a == u { b } else if b == u { a } else { continue };
                if inside.contains(&next) && seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        seen.len() == inside.len()
    }

    fn resolve(&self, g: &Bigraph) -> Result<Vec<Vec<bool>>> {
        self.bags
            .iter()
            .map(|bag| {
                let mut keep = vec![false; g.vertex_count()];
                for id in bag {
                    keep[g.index_of(id)?] = true;
                }
                Ok(keep)
            })
            .collect()
    }
}

fn all_ids(g: &Bigraph) -> Vec<String> {
    (0..g.vertex_count()).map(|v| g.id(v).to_owned()).collect()
}

/// First condition a decomposition fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Violation {
    CoversVertices { vertex: String },
    CoversEdges { edge: (String, String) },
    RunningIntersection { vertex: String },
    Reflectivity { tree_edge: (usize, usize) },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionCheck {
    pub valid: bool,
    pub violation: Option<Violation>,
}

fn require_connected(g: &Bigraph) -> Result<()> {
    if g.vertex_count() < 2 || !g.is_connected() {
        return Err(Error::Precondition("bigraph must be connected with at least two vertices".into()));
    }
    Ok(())
}

/// Checks vertex cover, edge cover and the running intersection property.
pub fn verify_decomposition(g: &Bigraph, t: &TreeDecomposition) -> Result<DecompositionCheck> {
    require_connected(g)?;
    let bags = t.resolve(g)?;
    let fail = |v| {
        Ok(DecompositionCheck {
            valid: false,
            violation: Some(v),
        })
    };
    for v in 0..g.vertex_count() {
        if !bags.iter().any(|b| b[v]) {
            return fail(Violation::CoversVertices { vertex: g.id(v).into() });
        }
    }
    for (a, b) in g.global_edges() {
        if !bags.iter().any(|bag| bag[a] && bag[b]) {
            return fail(Violation::CoversEdges {
                edge: (g.id(a).into(), g.id(b).into()),
            });
        }
    }
    for v in 0..g.vertex_count() {
        let holding: Vec<usize> = (0..bags.len()).filter(|&i| bags[i][v]).collect();
        if !t.connected_subset(&holding) {
            return fail(Violation::RunningIntersection { vertex: g.id(v).into() });
        }
    }
    Ok(DecompositionCheck {
        valid: true,
        violation: None,
    })
}

/// `F_{U₁U₂}` or, with `prime`, `F'_{U₁U₂}`.
fn bag_flag(g: &Bigraph, u1: &[bool], u2: &[bool], prime: bool) -> Flag {
    let (sub, map) = g.induced_by_indices(u1);
    let shared: Vec<bool> = u1.iter().zip(u2).map(|(a, b)| *a && *b).collect();
    let labels: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| shared[v])
        .map(|v| map[v].expect("shared vertex lies in the bag"))
        .collect();
    let sub = if prime {
        let mut inner = vec![false; sub.vertex_count()];
        for &l in &labels {
            inner[l] = true;
        }
        let m = sub.v1();
        let edges = sub
            .edges()
            .iter()
            .copied()
            .filter(|&(l, r)| !(inner[l] && inner[m + r]))
            .collect();
        Bigraph::from_indices(sub.left_ids().to_vec(), sub.right_ids().to_vec(), edges)
    } else {
        sub
    };
    Flag::from_indices(sub, labels)
}

/// Witness for one tree edge: vertex maps `C₂(F_{U₁U₂}) → C₂(F_{U₂U₁})` and
/// the same for the primed flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeIso {
    pub bags: (usize, usize),
    pub map: BTreeMap<String, String>,
    pub map_prime: BTreeMap<String, String>,
    /// `e(|C₂(F'_{U₁U₂})|)`.
    pub core_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReflectiveCertificate {
    pub valid: bool,
    pub violated_condition: Option<Violation>,
    /// `C₂(G|_U)`, common to all bags when valid.
    pub core: Option<Bigraph>,
    pub core_class: Option<String>,
    pub per_edge_isos: Vec<EdgeIso>,
    /// Hypotheses of the gluing argument that are not checked here.
    pub assumptions: Vec<String>,
}

fn id_map(a: &Flag, b: &Flag, map: &[usize]) -> BTreeMap<String, String> {
    map.iter()
        .enumerate()
        .map(|(v, &w)| (a.underlying().id(v).to_owned(), b.underlying().id(w).to_owned()))
        .collect()
}

/// Checks that adjacent bags have label-isomorphic flag 2-cores and
/// extracts the core.
pub fn verify_reflective(g: &Bigraph, t: &TreeDecomposition) -> Result<ReflectiveCertificate> {
    let check = verify_decomposition(g, t)?;
    let mut cert = ReflectiveCertificate {
        valid: false,
        violated_condition: check.violation,
        core: None,
        core_class: None,
        per_edge_isos: Vec::new(),
        assumptions: vec!["the core weakly dominates G restricted to every bag intersection".into()],
    };
    if !check.valid {
        return Ok(cert);
    }
    let bags = t.resolve(g)?;
    let checked = par::map_slice(t.tree_edges(), |&(a, b)| {
        let fa = bag_flag(g, &bags[a], &bags[b], false).two_core();
        let fb = bag_flag(g, &bags[b], &bags[a], false).two_core();
        let pa = bag_flag(g, &bags[a], &bags[b], true).two_core();
        let pb = bag_flag(g, &bags[b], &bags[a], true).two_core();
        let iso = fa.isomorphism_to(&fb);
        let iso_prime = pa.isomorphism_to(&pb);
        match (iso, iso_prime) {
            (Some(m), Some(mp)) => Ok(Some(EdgeIso {
                bags: (a, b),
                map: id_map(&fa, &fb, &m),
                map_prime: id_map(&pa, &pb, &mp),
                core_edges: pa.underlying().edge_count(),
            })),
            (None, None) => Ok(None),
            _ => Err(Error::Internal(format!(
                "flag and primed-flag reflectivity disagree on tree edge [{a}, {b}]"
            ))),
        }
    });
    for (res, &(a, b)) in checked.into_iter().zip(t.tree_edges()) {
        match res? {
            Some(iso) => cert.per_edge_isos.push(iso),
            None => {
                cert.violated_condition = Some(Violation::Reflectivity { tree_edge: (a, b) });
                return Ok(cert);
            }
        }
    }
    let core = two_core(&g.induced_by_indices(&bags[0]).0);
    for (i, bag) in bags.iter().enumerate().skip(1) {
        if !bigraphs_isomorphic(&core, &two_core(&g.induced_by_indices(bag).0)) {
            return Err(Error::Internal(format!("bag {i} has a different 2-core")));
        }
    }
    cert.valid = true;
    cert.core_class = Some(core_class(&core));
    cert.core = Some(core);
    Ok(cert)
}

/// Short name of a core: `empty`, `C{k}-iso`, `K{a},{b}-iso`, `book{k}-iso`,
/// or `v{v₁}+{v₂}e{e}` otherwise.
pub fn core_class(h: &Bigraph) -> String {
    let (v1, v2, e) = (h.v1(), h.v2(), h.edge_count());
    if h.vertex_count() == 0 {
        return "empty".into();
    }
    if v1 == v2 && e == v1 + v2 && v1 >= 2 {
        if let Ok(c) = Bigraph::even_cycle(2 * v1) {
            if bigraphs_isomorphic(h, &c) {
                return format!("C{}-iso", 2 * v1);
            }
        }
    }
    if e == v1 * v2 {
        return format!("K{v1},{v2}-iso");
    }
    if v1 == v2 && v1 >= 2 && e == 3 * (v1 - 1) + 1 {
        if let Ok(b) = Bigraph::book(v1 - 1) {
            if bigraphs_isomorphic(h, &b) {
                return format!("book{}-iso", v1 - 1);
            }
        }
    }
    format!("v{v1}+{v2}e{e}")
}

/// `d_{T'} = e(G_{T'}) - Σ e(|C₂(F'_{U₁U₂})|)` over the tree edges of the
/// subtree `T'` (all of `T` by default).
pub fn decomposition_weight(g: &Bigraph, t: &TreeDecomposition, subtree: Option<&[usize]>) -> Result<i64> {
    let bags = t.resolve(g)?;
    let all: Vec<usize> = (0..t.len()).collect();
    let sub = subtree.unwrap_or(&all);
    if sub.iter().any(|&i| i >= t.len()) {
        return Err(Error::InvalidDecomposition("subtree names a missing bag".into()));
    }
    if !t.connected_subset(sub) {
        return Err(Error::InvalidDecomposition("subtree bags are not connected in the tree".into()));
    }
    let inside: BTreeSet<usize> = sub.iter().copied().collect();
    let mut union = vec![false; g.vertex_count()];
    for &i in &inside {
        for (u, &k) in union.iter_mut().zip(&bags[i]) {
            *u |= k;
        }
    }
    let mut d = g.global_edges().filter(|&(a, b)| union[a] && union[b]).count() as i64;
    for &(a, b) in t.tree_edges() {
        if !(inside.contains(&a) && inside.contains(&b)) {
            continue;
        }
        let ea = bag_flag(g, &bags[a], &bags[b], true).two_core().underlying().edge_count();
        let eb = bag_flag(g, &bags[b], &bags[a], true).two_core().underlying().edge_count();
        if ea != eb {
            return Err(Error::Precondition(format!(
                "summand for tree edge [{a}, {b}] depends on orientation ({ea} vs {eb})"
            )));
        }
        d -= ea as i64;
    }
    Ok(d)
}

/// Result of evaluating the bag integral identity for one root bag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntfReport {
    pub bag: usize,
    pub d_t: i64,
    pub t_rho: f64,
    pub assignments: usize,
    /// Max relative gap between both sides over all pinned assignments.
    pub max_residual: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    pub z_expected: f64,
    pub z_residual: f64,
}

const MAX_ASSIGNMENTS: usize = 50_000_000;

/// Integrates `f_T` over the vertices outside bag `u0` and compares with
/// `t(ρ,W)^{d_T - e(G|_{U₀})}·∏_{E(G|_{U₀})} W` for every assignment of
/// `u0`; also compares `Z = ∫ f_T` with `t(ρ,W)^{d_T - e(H)}·t(H,W)`.
pub fn intft_check(g: &Bigraph, t: &TreeDecomposition, w: &StepBigraphon, u0: usize) -> Result<IntfReport> {
    if u0 >= t.len() {
        return Err(Error::InvalidParameter(format!("bag {u0} out of range")));
    }
    if w.values().iter().any(|&x| x <= 0.0) {
        return Err(Error::Precondition("kernel must be strictly positive".into()));
    }
    let t_rho = w.edge_density();
    let (dl, dr) = w.biregularity_defect();
    if dl.max(dr) > 1e-9 * t_rho {
        return Err(Error::Precondition(format!(
            "kernel is not biregular (defect {})",
            dl.max(dr)
        )));
    }
    let cert = verify_reflective(g, t)?;
    if !cert.valid {
        return Err(Error::Precondition("decomposition is not reflective".into()));
    }
    let d_t = decomposition_weight(g, t, None)?;
    let bags = t.resolve(g)?;

    let nv = g.vertex_count();
    let dims: Vec<usize> = (0..nv).map(|v| if v < g.v1() { w.m() } else { w.n() }).collect();
    let total = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .filter(|&x| x <= MAX_ASSIGNMENTS)
        .ok_or_else(|| Error::InvalidParameter("too many part assignments".into()))?;
    let measure = |v: usize, p: usize| if v < g.v1() { w.mu()[p] } else { w.nu()[p] };

    let denominators: Vec<(Vec<usize>, FlagDensityTable)> = t
        .tree_edges()
        .iter()
        .map(|&(a, b)| {
            let shared: Vec<usize> = (0..nv).filter(|&v| bags[a][v] && bags[b][v]).collect();
            let core = bag_flag(g, &bags[a], &bags[b], true).two_core();
            (shared, w.flag_density(&core))
        })
        .collect();
    let root: Vec<usize> = (0..nv).filter(|&v| bags[u0][v]).collect();
    let root_size: usize = root.iter().map(|&v| dims[v]).product();
    let edges: Vec<(usize, usize)> = g.global_edges().collect();

    let f_t = |x: &[usize]| {
        let num: f64 = edges.iter().map(|&(a, b)| w.value(x[a], x[b])).product();
        let den: f64 = denominators
            .iter()
            .map(|(shared, table)| {
                let parts: Vec<usize> = shared.iter().map(|&v| x[v]).collect();
                table.get(&parts)
            })
            .product();
        num / den
    };
    let root_index = |x: &[usize]| root.iter().fold(0, |k, &v| k * dims[v] + x[v]);

    let inner = total / dims[0];
    let partials = par::map_range(dims[0], |p0| {
        let mut lhs = vec![0.0; root_size];
        let mut z = 0.0;
        let mut x = vec![0usize; nv];
        x[0] = p0;
        for _ in 0..inner {
            let val = f_t(&x);
            let mut outside = 1.0;
            let mut all = 1.0;
            for v in 0..nv {
                let m = measure(v, x[v]);
                all *= m;
                if !bags[u0][v] {
                    outside *= m;
                }
            }
            lhs[root_index(&x)] += val * outside;
            z += val * all;
            for v in (1..nv).rev() {
                x[v] += 1;
                if x[v] < dims[v] {
                    break;
                }
                x[v] = 0;
            }
        }
        (lhs, z)
    });
    let mut lhs = vec![0.0; root_size];
    let mut z = 0.0;
    for (part, zp) in partials {
        for (acc, x) in lhs.iter_mut().zip(part) {
            *acc += x;
        }
        z += zp;
    }

    let root_edges: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(a, b)| bags[u0][a] && bags[u0][b])
        .collect();
    let factor = t_rho.powi((d_t - root_edges.len() as i64) as i32);
    let mut max_residual: f64 = 0.0;
    let mut x = vec![0usize; nv];
    for (k, &l) in lhs.iter().enumerate() {
        let mut rem = k;
        for &v in root.iter().rev() {
            x[v] = rem % dims[v];
            rem /= dims[v];
        }
        let rhs = factor * root_edges.iter().map(|&(a, b)| w.value(x[a], x[b])).product::<f64>();
        max_residual = max_residual.max(rel_diff(l, rhs));
    }

    let core = cert.core.expect("valid certificate has a core");
    let z_expected =
        t_rho.powi((d_t - core.edge_count() as i64) as i32) * w.density(&core, DensityMethod::Auto);
    Ok(IntfReport {
        bag: u0,
        d_t,
        t_rho,
        assignments: total,
        max_residual,
        z,
        z_expected,
        z_residual: rel_diff(z, z_expected),
    })
}

/// Outcome of [`find_reflective_decomposition`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoundDecomposition {
    pub decomposition: TreeDecomposition,
    pub certificate: ReflectiveCertificate,
    /// True when no decomposition with two or more bags was found.
    pub trivial: bool,
    pub candidates_tried: usize,
}

fn bag_ids(g: &Bigraph, keep: &[bool]) -> Vec<String> {
    (0..g.vertex_count()).filter(|&v| keep[v]).map(|v| g.id(v).to_owned()).collect()
}

/// Candidate bag systems for separator `sep`: one bag per component (when at
/// most `max_bags`), and two overlapping bags that each miss one extreme
/// component.
fn candidates(g: &Bigraph, sep: &[bool], max_bags: usize) -> Vec<TreeDecomposition> {
    let rest: Vec<bool> = sep.iter().map(|s| !s).collect();
    let (sub, map) = g.induced_by_indices(&rest);
    let mut back = vec![0; sub.vertex_count()];
    for (v, m) in map.iter().enumerate() {
        if let Some(i) = m {
            back[*i] = v;
        }
    }
    let comps: Vec<Vec<usize>> = sub
        .components()
        .into_iter()
        .map(|c| c.into_iter().map(|v| back[v]).collect())
        .collect();
    let r = comps.len();
    if r < 2 {
        return Vec::new();
    }
    let bag_of = |parts: &[&Vec<usize>]| {
        let mut keep = sep.to_vec();
        for c in parts {
            for &v in c.iter() {
                keep[v] = true;
            }
        }
        bag_ids(g, &keep)
    };
    let mut out = Vec::new();
    if r <= max_bags {
        let bags = comps.iter().map(|c| bag_of(&[c])).collect();
        let edges = (1..r).map(|i| (i - 1, i)).collect();
        out.push(TreeDecomposition { bags, tree_edges: edges });
    }
    if r >= 3 {
        let first: Vec<&Vec<usize>> = comps[..r - 1].iter().collect();
        let last: Vec<&Vec<usize>> = comps[1..].iter().collect();
        out.push(TreeDecomposition {
            bags: vec![bag_of(&first), bag_of(&last)],
            tree_edges: vec![(0, 1)],
        });
    }
    out
}

/// Searches separators by size, then lexicographically, for a reflective
/// decomposition with between 2 and `max_bags` bags. Falls back to the
/// single-bag decomposition, marked trivial.
pub fn find_reflective_decomposition(
    g: &Bigraph,
    max_bags: usize,
    budget: Option<Duration>,
) -> Result<FoundDecomposition> {
    require_connected(g)?;
    let start = Instant::now();
    let nv = g.vertex_count();
    let mut tried = 0;
    if max_bags >= 2 {
        'sizes: for size in 1..nv.saturating_sub(1) {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                if budget.is_some_and(|b| start.elapsed() > b) {
                    break 'sizes;
                }
                let mut sep = vec![false; nv];
                for &v in &combo {
                    sep[v] = true;
                }
                for cand in candidates(g, &sep, max_bags) {
                    tried += 1;
                    let cert = verify_reflective(g, &cand)?;
                    if cert.valid {
                        return Ok(FoundDecomposition {
                            decomposition: cand,
                            certificate: cert,
                            trivial: false,
                            candidates_tried: tried,
                        });
                    }
                }
                if !next_combination(&mut combo, nv) {
                    break;
                }
            }
        }
    }
    let decomposition = TreeDecomposition::single_bag(g);
    let certificate = verify_reflective(g, &decomposition)?;
    Ok(FoundDecomposition {
        decomposition,
        certificate,
        trivial: true,
        candidates_tried: tried,
    })
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The two-bag decomposition of `book(k)`: spine with pages `1..k-1`, and
/// spine with pages `2..k`.
pub fn book_two_bags(k: usize) -> Result<(Bigraph, TreeDecomposition)> {
    if k < 2 {
        return Err(Error::InvalidParameter("book decomposition needs k >= 2".into()));
    }
    let g = Bigraph::book(k)?;
    let bag = |pages: std::ops::RangeInclusive<usize>| {
        let mut ids = vec!["L0".to_string()];
        ids.extend(pages.clone().map(|i| format!("L{i}")));
        ids.push("R0".into());
        ids.extend(pages.map(|i| format!("R{i}")));
        ids
    };
    let t = TreeDecomposition::new(vec![bag(1..=k - 1), bag(2..=k)], vec![(0, 1)])?;
    Ok((g, t))
}
