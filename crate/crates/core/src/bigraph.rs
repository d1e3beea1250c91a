//! Bigraphs: bipartite graphs with a fixed, ordered bipartition.
//!
//! Vertices are identified externally by opaque string ids and internally by
//! dense indices: left vertex `i` has index `i`, right vertex `j` has index
//! `v1 + j`. Every builder documents its numbering so results are
//! reproducible.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Side of the bipartition a vertex lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A bigraph `(V1, V2, E)` with edges directed from the left side to the right side.
#[derive(Clone, PartialEq, Eq)]
pub struct Bigraph {
    left: Vec<String>,
    right: Vec<String>,
    /// Sorted, deduplicated `(left index, right index)` pairs.
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Bigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(l, r)| format!("{}-{}", self.left[l], self.right[r]))
            .collect();
        f.debug_struct("Bigraph")
            .field("v1", &self.left)
            .field("v2", &self.right)
            .field("edges", &edges)
            .finish()
    }
}

/// The standard families with a fixed numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    /// `ρ`: `L0 - R0`.
    Edge,
    /// `K_{1,d}`: center `L0`, leaves `R0..R{d-1}`.
    Star(usize),
    /// Path on `n` vertices alternating sides starting on the left:
    /// vertex `k` is `L{k/2}` for even `k` and `R{k/2}` for odd `k`.
    Path(usize),
    /// Cycle on `2k` vertices `L0 R0 L1 R1 ... L{k-1} R{k-1}`; the argument is
    /// the number of vertices and must be even and at least 4.
    EvenCycle(usize),
    /// `B_k`: spine `L0 - R0`; page `i` (1-based) adds `Li`, `Ri` with edges
    /// `L0-Ri`, `Li-R0`, `Li-Ri`.
    Book(usize),
    /// `K_{m,n}` on `L0..L{m-1}` and `R0..R{n-1}`.
    CompleteBipartite(usize, usize),
}

fn left_id(i: usize) -> String {
    format!("L{i}")
}

fn right_id(j: usize) -> String {
    format!("R{j}")
}

impl Bigraph {
    /// Builds a bigraph from vertex ids and `(left id, right id)` edges.
    pub fn new<S: AsRef<str>>(
        left: impl IntoIterator<Item = S>,
        right: impl IntoIterator<Item = S>,
        edges: impl IntoIterator<Item = (S, S)>,
    ) -> Result<Self> {
        let left: Vec<String> = left.into_iter().map(|s| s.as_ref().to_owned()).collect();
        let right: Vec<String> = right.into_iter().map(|s| s.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(left.len() + right.len());
        for (k, id) in left.iter().chain(right.iter()).enumerate() {
            if index.insert(id.clone(), k).is_some() {
                return Err(Error::InvalidBigraph(format!("duplicate vertex id `{id}`")));
            }
        }
        let m = left.len();
        let mut pairs = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let l = match index.get(a) {
                Some(&k) if k < m => k,
                Some(_) => {
                    return Err(Error::InvalidBigraph(format!(
                        "edge ({a}, {b}): `{a}` is not a left vertex"
                    )))
                }
                None => return Err(Error::UnknownVertex(a.to_owned())),
            };
            let r = match index.get(b) {
                Some(&k) if k >= m => k - m,
                Some(_) => {
                    return Err(Error::InvalidBigraph(format!(
                        "edge ({a}, {b}): `{b}` is not a right vertex"
                    )))
                }
                None => return Err(Error::UnknownVertex(b.to_owned())),
            };
            pairs.push((l, r));
        }
        let before = pairs.len();
        pairs.sort_unstable();
        pairs.dedup();
        if pairs.len() != before {
            return Err(Error::InvalidBigraph("duplicate edge".into()));
        }
        Ok(Self::from_parts(left, right, pairs, index))
    }

    /// Internal constructor: ids are known distinct and edges valid (may be unsorted).
    pub(crate) fn from_indices(left: Vec<String>, right: Vec<String>, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        let index = left
            .iter()
            .chain(right.iter())
            .enumerate()
            .map(|(k, id)| (id.clone(), k))
            .collect();
        Self::from_parts(left, right, edges, index)
    }

    fn from_parts(
        left: Vec<String>,
        right: Vec<String>,
        edges: Vec<(usize, usize)>,
        index: HashMap<String, usize>,
    ) -> Self {
        let m = left.len();
        let mut adj = vec![Vec::new(); m + right.len()];
        for &(l, r) in &edges {
            adj[l].push(m + r);
            adj[m + r].push(l);
        }
        Bigraph {
            left,
            right,
            edges,
            index,
            adj,
        }
    }

    /// The bigraph with no vertices.
    pub fn empty() -> Self {
        Self::from_indices(Vec::new(), Vec::new(), Vec::new())
    }

    pub fn standard(kind: StandardKind) -> Result<Self> {
        let positive = |name: &str, v: usize| {
            if v == 0 {
                Err(Error::InvalidParameter(format!("{name} must be at least 1")))
            } else {
                Ok(())
            }
        };
        match kind {
            StandardKind::Edge => Ok(Self::complete_bipartite_unchecked(1, 1)),
            StandardKind::Star(d) => {
                positive("star degree", d)?;
                Ok(Self::complete_bipartite_unchecked(1, d))
            }
            StandardKind::CompleteBipartite(m, n) => {
                positive("left size", m)?;
                positive("right size", n)?;
                Ok(Self::complete_bipartite_unchecked(m, n))
            }
            StandardKind::Path(n) => {
                positive("path length", n)?;
                let left = (0..n.div_ceil(2)).map(left_id).collect();
                let right = (0..n / 2).map(right_id).collect();
                // vertex k <-> k+1; left index of vertex k is k/2 for even k
                let edges = (0..n.saturating_sub(1))
                    .map(|k| if k % 2 == 0 { (k / 2, k / 2) } else { (k.div_ceil(2), k / 2) })
                    .collect();
                Ok(Self::from_indices(left, right, edges))
            }
            StandardKind::EvenCycle(len) => {
                if len < 4 || len % 2 != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "even cycle needs an even vertex count >= 4, got {len}"
                    )));
                }
                let k = len / 2;
                let left = (0..k).map(left_id).collect();
                let right = (0..k).map(right_id).collect();
                let edges = (0..k).flat_map(|i| [(i, i), ((i + 1) % k, i)]).collect();
                Ok(Self::from_indices(left, right, edges))
            }
            StandardKind::Book(k) => {
                positive("book pages", k)?;
                let left = (0..=k).map(left_id).collect();
                let right = (0..=k).map(right_id).collect();
                let mut edges = vec![(0, 0)];
                for i in 1..=k {
                    edges.extend([(0, i), (i, 0), (i, i)]);
                }
                Ok(Self::from_indices(left, right, edges))
            }
        }
    }

    fn complete_bipartite_unchecked(m: usize, n: usize) -> Self {
        let left = (0..m).map(left_id).collect();
        let right = (0..n).map(right_id).collect();
        let edges = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        Self::from_indices(left, right, edges)
    }

    /// `ρ`, the single edge.
    pub fn edge() -> Self {
        Self::complete_bipartite_unchecked(1, 1)
    }

    pub fn star(d: usize) -> Result<Self> {
        Self::standard(StandardKind::Star(d))
    }

    pub fn path(n: usize) -> Result<Self> {
        Self::standard(StandardKind::Path(n))
    }

    pub fn even_cycle(len: usize) -> Result<Self> {
        Self::standard(StandardKind::EvenCycle(len))
    }

    pub fn book(k: usize) -> Result<Self> {
        Self::standard(StandardKind::Book(k))
    }

    pub fn complete_bipartite(m: usize, n: usize) -> Result<Self> {
        Self::standard(StandardKind::CompleteBipartite(m, n))
    }

    pub fn v1(&self) -> usize {
        self.left.len()
    }

    pub fn v2(&self) -> usize {
        self.right.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn left_ids(&self) -> &[String] {
        &self.left
    }

    pub fn right_ids(&self) -> &[String] {
        &self.right
    }

    /// Edges as `(left index, right index)`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges as `(global left index, global right index)`.
    pub fn global_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.v1();
        self.edges.iter().map(move |&(l, r)| (l, m + r))
    }

    pub fn side(&self, v: usize) -> Side {
        if v < self.v1() {
            Side::Left
        } else {
            Side::Right
        }
    }

    pub fn id(&self, v: usize) -> &str {
        if v < self.v1() {
            &self.left[v]
        } else {
            &self.right[v - self.v1()]
        }
    }

    /// Global index of a vertex id.
    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(id.to_owned()))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Whether global vertices `a` and `b` are adjacent.
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let m = self.v1();
        let (l, r) = match (a < m, b < m) {
            (true, false) => (a, b - m),
            (false, true) => (b, a - m),
            _ => return false,
        };
        self.edges.binary_search(&(l, r)).is_ok()
    }

    /// Induced sub-bigraph on a set of global indices, preserving relative order.
    pub(crate) fn induced_by_indices(&self, keep: &[bool]) -> (Bigraph, Vec<Option<usize>>) {
        let m = self.v1();
        let mut map = vec![None; self.vertex_count()];
        let mut left = Vec::new();
        let mut right = Vec::new();
        for v in 0..m {
            if keep[v] {
                map[v] = Some(left.len());
                left.push(self.left[v].clone());
            }
        }
        let new_m = left.len();
        for v in m..self.vertex_count() {
            if keep[v] {
                map[v] = Some(new_m + right.len());
                right.push(self.right[v - m].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(l, r)| match (map[l], map[m + r]) {
                (Some(a), Some(b)) => Some((a, b - new_m)),
                _ => None,
            })
            .collect();
        (Bigraph::from_indices(left, right, edges), map)
    }

    /// `G|_U` for a set of vertex ids.
    pub fn induced<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<Bigraph> {
        let mut keep = vec![false; self.vertex_count()];
        for id in ids {
            keep[self.index_of(id.as_ref())?] = true;
        }
        Ok(self.induced_by_indices(&keep).0)
    }

    /// `G - v`.
    pub fn remove_vertex(&self, id: &str) -> Result<Bigraph> {
        let v = self.index_of(id)?;
        let mut keep = vec![true; self.vertex_count()];
        keep[v] = false;
        Ok(self.induced_by_indices(&keep).0)
    }

    /// `G - E'` for a list of `(left id, right id)` edges.
    pub fn remove_edges<S: AsRef<str>>(&self, edges: impl IntoIterator<Item = (S, S)>) -> Result<Bigraph> {
        let m = self.v1();
        let mut drop = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let l = self.index_of(a)?;
            let r = self.index_of(b)?;
            if l >= m || r < m || self.edges.binary_search(&(l, r - m)).is_err() {
                return Err(Error::UnknownEdge(a.to_owned(), b.to_owned()));
            }
            drop.insert((l, r - m));
        }
        let edges = self.edges.iter().copied().filter(|e| !drop.contains(e)).collect();
        Ok(Bigraph::from_indices(self.left.clone(), self.right.clone(), edges))
    }

    /// The dual bigraph `G*`: sides swapped, edges reversed.
    pub fn dual(&self) -> Bigraph {
        let edges = self.edges.iter().map(|&(l, r)| (r, l)).collect();
        Bigraph::from_indices(self.right.clone(), self.left.clone(), edges)
    }

    /// Global index map from `self` into `self.dual()`.
    pub(crate) fn dual_index(&self, v: usize) -> usize {
        let (m, n) = (self.v1(), self.v2());
        if v < m {
            n + v
        } else {
            v - m
        }
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let m = self.v1();
        let stats = |range: std::ops::Range<usize>| {
            let mut it = range.map(|v| self.degree(v));
            match it.next() {
                None => (0, 0),
                Some(first) => it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))),
            }
        };
        let (delta1, big_delta1) = stats(0..m);
        let (delta2, big_delta2) = stats(m..self.vertex_count());
        DegreeProfile {
            delta1,
            big_delta1,
            delta2,
            big_delta2,
            left_regular_degree: (delta1 == big_delta1).then_some(delta1),
            right_regular_degree: (delta2 == big_delta2).then_some(delta2),
        }
    }

    /// Every left vertex has degree exactly `d` (vacuous for an empty left side).
    pub fn is_left_regular(&self, d: usize) -> bool {
        (0..self.v1()).all(|v| self.degree(v) == d)
    }

    pub fn is_right_regular(&self, d: usize) -> bool {
        (self.v1()..self.vertex_count()).all(|v| self.degree(v) == d)
    }

    /// Connected components as lists of global indices (ascending).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut stack = vec![s];
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.components().len() == 1
    }
}

/// Minimum and maximum degrees per side. An empty side reports zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct DegreeProfile {
    pub delta1: usize,
    #[serde(rename = "Delta1")]
    pub big_delta1: usize,
    pub delta2: usize,
    #[serde(rename = "Delta2")]
    pub big_delta2: usize,
    pub left_regular_degree: Option<usize>,
    pub right_regular_degree: Option<usize>,
}

impl DegreeProfile {
    pub fn is_biregular(&self) -> bool {
        self.left_regular_degree.is_some() && self.right_regular_degree.is_some()
    }
}
