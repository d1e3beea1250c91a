//! Flags: bigraphs with an injective partial labeling.

use std::collections::HashSet;

use crate::bigraph::{Bigraph, Side};
use crate::error::{Error, Result};
use crate::iso;

/// A partially labeled bigraph. Label `k` is the vertex at position `k` of
/// the labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    underlying: Bigraph,
    /// Global vertex indices in label order.
    labels: Vec<usize>,
}

impl Flag {
    pub fn new<S: AsRef<str>>(underlying: Bigraph, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut idx = Vec::new();
        let mut seen = HashSet::new();
        for id in labels {
            let v = underlying.index_of(id.as_ref())?;
            if !seen.insert(v) {
                return Err(Error::InvalidBigraph(format!(
                    "labeling is not injective: `{}` repeated",
                    id.as_ref()
                )));
            }
            idx.push(v);
        }
        Ok(Flag {
            underlying,
            labels: idx,
        })
    }

    pub(crate) fn from_indices(underlying: Bigraph, labels: Vec<usize>) -> Self {
        debug_assert!(labels.iter().all(|&v| v < underlying.vertex_count()));
        Flag { underlying, labels }
    }

    /// A flag with no labels.
    pub fn unlabeled(g: Bigraph) -> Self {
        Flag {
            underlying: g,
            labels: Vec::new(),
        }
    }

    /// `e₁ = (ρ, left vertex)`.
    pub fn e1() -> Self {
        Flag::from_indices(Bigraph::edge(), vec![0])
    }

    /// `e₂ = (ρ, right vertex)`.
    pub fn e2() -> Self {
        Flag::from_indices(Bigraph::edge(), vec![1])
    }

    /// `K^L_{1,d}`: the star labeled at its center.
    pub fn star_left(d: usize) -> Result<Self> {
        Ok(Flag::from_indices(Bigraph::star(d)?, vec![0]))
    }

    pub fn underlying(&self) -> &Bigraph {
        &self.underlying
    }

    pub fn into_underlying(self) -> Bigraph {
        self.underlying
    }

    /// Labeled vertices as global indices, in label order.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_ids(&self) -> Vec<String> {
        self.labels.iter().map(|&v| self.underlying.id(v).to_owned()).collect()
    }

    pub fn is_labeled(&self, v: usize) -> bool {
        self.labels.contains(&v)
    }

    /// A single labeled vertex on the left side.
    pub fn is_left_one_flag(&self) -> bool {
        self.labels.len() == 1 && self.underlying.side(self.labels[0]) == Side::Left
    }

    pub fn is_right_one_flag(&self) -> bool {
        self.labels.len() == 1 && self.underlying.side(self.labels[0]) == Side::Right
    }

    /// Dual flag: sides swapped, labels follow their vertices.
    pub fn dual(&self) -> Flag {
        let labels = self.labels.iter().map(|&v| self.underlying.dual_index(v)).collect();
        Flag::from_indices(self.underlying.dual(), labels)
    }

    /// Whether `θ₂∘θ₁⁻¹` is an isomorphism of the labeled induced parts.
    pub fn same_type(&self, other: &Flag) -> bool {
        if self.labels.len() != other.labels.len() {
            return false;
        }
        let (g1, g2) = (&self.underlying, &other.underlying);
        for (k, (&a, &b)) in self.labels.iter().zip(&other.labels).enumerate() {
            if g1.side(a) != g2.side(b) {
                return false;
            }
            for (&c, &d) in self.labels[k + 1..].iter().zip(&other.labels[k + 1..]) {
                if g1.has_edge(a, c) != g2.has_edge(b, d) {
                    return false;
                }
            }
        }
        true
    }

    /// `F₁ ⊔ F₂`: disjoint union identifying equally labeled vertices.
    ///
    /// Vertices of `self` keep their ids; unlabeled vertices of `other` get
    /// the first free id of the form `{id}#{n}`.
    pub fn amalgamate(&self, other: &Flag) -> Result<Flag> {
        if !self.same_type(other) {
            return Err(Error::TypeMismatch(
                "labeled parts do not induce isomorphic labeled sub-bigraphs".into(),
            ));
        }
        let g1 = &self.underlying;
        let g2 = &other.underlying;
        let mut taken: HashSet<String> = g1.left_ids().iter().chain(g1.right_ids()).cloned().collect();
        let mut fresh = |id: &str| {
            let mut n = 1;
            loop {
                let cand = format!("{id}#{n}");
                if taken.insert(cand.clone()) {
                    return cand;
                }
                n += 1;
            }
        };
        // image of each vertex of g2, as (side, index within side) in the result
        let mut left: Vec<String> = g1.left_ids().to_vec();
        let mut right: Vec<String> = g1.right_ids().to_vec();
        let mut image = vec![(Side::Left, 0usize); g2.vertex_count()];
        let m1 = g1.v1();
        for v in 0..g2.vertex_count() {
            if let Some(k) = other.labels.iter().position(|&x| x == v) {
                let u = self.labels[k];
                image[v] = if u < m1 { (Side::Left, u) } else { (Side::Right, u - m1) };
            } else if g2.side(v) == Side::Left {
                image[v] = (Side::Left, left.len());
                left.push(fresh(g2.id(v)));
            } else {
                image[v] = (Side::Right, right.len());
                right.push(fresh(g2.id(v)));
            }
        }
        let mut edges: Vec<(usize, usize)> = g1.edges().to_vec();
        for (l, r) in g2.global_edges() {
            edges.push((image[l].1, image[r].1));
        }
        let new_m = left.len();
        let labels = self
            .labels
            .iter()
            .map(|&u| if u < m1 { u } else { new_m + (u - m1) })
            .collect();
        Ok(Flag::from_indices(Bigraph::from_indices(left, right, edges), labels))
    }

    /// `F^{⊔k}` with `F^{⊔1} = F` and `F^{⊔(k+1)} = F^{⊔k} ⊔ F`.
    pub fn power(&self, k: usize) -> Result<Flag> {
        if k == 0 {
            return Err(Error::InvalidParameter("amalgamation power must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.amalgamate(self)?;
        }
        Ok(acc)
    }

    /// The 2-core `C₂(F)`: repeatedly drop unlabeled vertices of degree < 2.
    pub fn two_core(&self) -> Flag {
        let g = &self.underlying;
        let n = g.vertex_count();
        let mut alive = vec![true; n];
        let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        let labeled: Vec<bool> = (0..n).map(|v| self.is_labeled(v)).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&v| !labeled[v] && deg[v] < 2).collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in g.neighbors(v) {
                if alive[w] {
                    deg[w] -= 1;
                    if !labeled[w] && deg[w] < 2 {
                        queue.push(w);
                    }
                }
            }
        }
        self.restrict_alive(&alive)
    }

    /// 2-core computed by removing, at each step, the vertex picked by
    /// `choose` among all currently removable vertices (given in ascending
    /// order). The result does not depend on the choices.
    pub fn two_core_with(&self, mut choose: impl FnMut(&[usize]) -> usize) -> Flag {
        let g = &self.underlying;
        let n = g.vertex_count();
        let mut alive = vec![true; n];
        let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
        loop {
            let removable: Vec<usize> = (0..n)
                .filter(|&v| alive[v] && !self.is_labeled(v) && deg[v] < 2)
                .collect();
            if removable.is_empty() {
                break;
            }
            let v = removable[choose(&removable) % removable.len()];
            alive[v] = false;
            for &w in g.neighbors(v) {
                if alive[w] {
                    deg[w] -= 1;
                }
            }
        }
        self.restrict_alive(&alive)
    }

    fn restrict_alive(&self, alive: &[bool]) -> Flag {
        let (sub, map) = self.underlying.induced_by_indices(alive);
        let labels = self
            .labels
            .iter()
            .map(|&v| map[v].expect("labeled vertices are never removed"))
            .collect();
        Flag::from_indices(sub, labels)
    }

    /// Label-preserving isomorphism `self → other` as a global index map.
    pub fn isomorphism_to(&self, other: &Flag) -> Option<Vec<usize>> {
        iso::find_isomorphism(&self.underlying, &self.labels, &other.underlying, &other.labels)
    }

    pub fn is_isomorphic(&self, other: &Flag) -> bool {
        self.isomorphism_to(other).is_some()
    }
}

/// 2-core of an unlabeled bigraph.
pub fn two_core(g: &Bigraph) -> Bigraph {
    Flag::unlabeled(g.clone()).two_core().into_underlying()
}
