//! Exact isomorphism test for partially labeled bigraphs.
//!
//! Colour refinement over (side, label position, degree) followed by
//! backtracking over colour classes. Exhaustive; meant for graphs of a few
//! dozen vertices at most.

use std::collections::BTreeMap;

use crate::bigraph::Bigraph;

const UNLABELED: usize = usize::MAX;

fn initial_colors(g: &Bigraph, labels: &[usize]) -> Vec<(u8, usize, usize)> {
    let mut pos = vec![UNLABELED; g.vertex_count()];
    for (k, &v) in labels.iter().enumerate() {
        pos[v] = k;
    }
    (0..g.vertex_count())
        .map(|v| (g.side(v) as u8, pos[v], g.degree(v)))
        .collect()
}

/// Joint colour refinement of both graphs so colour ids are comparable.
fn refine(a: &Bigraph, la: &[usize], b: &Bigraph, lb: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let init_a = initial_colors(a, la);
    let init_b = initial_colors(b, lb);
    let distinct: std::collections::BTreeSet<_> = init_a.iter().chain(init_b.iter()).copied().collect();
    let rank: BTreeMap<_, _> = distinct.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut ca: Vec<usize> = init_a.iter().map(|c| rank[c]).collect();
    let mut cb: Vec<usize> = init_b.iter().map(|c| rank[c]).collect();
    let mut classes = rank.len();
    loop {
        let sig = |g: &Bigraph, col: &[usize], v: usize| {
            let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| col[w]).collect();
            nb.sort_unstable();
            (col[v], nb)
        };
        let sa: Vec<_> = (0..a.vertex_count()).map(|v| sig(a, &ca, v)).collect();
        let sb: Vec<_> = (0..b.vertex_count()).map(|v| sig(b, &cb, v)).collect();
        let mut ids: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
        for s in sa.iter().chain(sb.iter()) {
            ids.entry(s).or_insert(0);
        }
        for (i, v) in ids.values_mut().enumerate() {
            *v = i;
        }
        let na: Vec<usize> = sa.iter().map(|s| ids[s]).collect();
        let nb: Vec<usize> = sb.iter().map(|s| ids[s]).collect();
        let n = ids.len();
        ca = na;
        cb = nb;
        if n == classes {
            return (ca, cb);
        }
        classes = n;
    }
}

/// Finds a side-, edge- and label-preserving bijection from `a` to `b`.
///
/// `la`/`lb` are the labelings as global vertex indices; position `k` in
/// one must map to position `k` in the other. Returns `map` with
/// `map[v_a] = v_b`.
pub fn find_isomorphism(a: &Bigraph, la: &[usize], b: &Bigraph, lb: &[usize]) -> Option<Vec<usize>> {
    if a.v1() != b.v1() || a.v2() != b.v2() || a.edge_count() != b.edge_count() || la.len() != lb.len() {
        return None;
    }
    if la.iter().zip(lb).any(|(&x, &y)| a.side(x) != b.side(y)) {
        return None;
    }
    let (ca, cb) = refine(a, la, b, lb);
    let mut hist_a = ca.clone();
    let mut hist_b = cb.clone();
    hist_a.sort_unstable();
    hist_b.sort_unstable();
    if hist_a != hist_b {
        return None;
    }
    let n = a.vertex_count();
    let mut class_size = BTreeMap::new();
    for &c in &ca {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    // Small classes first, then stay close to already placed vertices.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                let attached = a.neighbors(v).iter().any(|&w| placed[w]);
                (class_size[&ca[v]], !attached, v)
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    let mut by_color: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..b.vertex_count() {
        by_color.entry(cb[v]).or_default().push(v);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; b.vertex_count()];
    if extend(a, b, &ca, &by_color, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Bigraph,
    b: &Bigraph,
    ca: &[usize],
    by_color: &BTreeMap<usize, Vec<usize>>,
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    for &cand in &by_color[&ca[v]] {
        if used[cand] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| a.has_edge(v, u) == b.has_edge(cand, map[u]));
        if !consistent {
            continue;
        }
        map[v] = cand;
        used[cand] = true;
        if extend(a, b, ca, by_color, order, depth + 1, map, used) {
            return true;
        }
        used[cand] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Plain bigraph isomorphism (side preserving).
pub fn bigraphs_isomorphic(a: &Bigraph, b: &Bigraph) -> bool {
    find_isomorphism(a, &[], b, &[]).is_some()
}
