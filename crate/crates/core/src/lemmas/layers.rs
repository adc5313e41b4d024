//! Layer machinery over almost-trees: bad-set pruning, the forest of
//! leftover path lengths, strong/thick classification in the top two
//! layers, and the pigeonhole embedding of a theta graph once the thick
//! count passes the bound (l-2) d^(s-1).
//!
//! Throughout, s is constrained to k1+1 <= s <= k*-1 so that every leftover
//! length tau_t = k1 + k_t - 2s - 1 is odd and positive. D_j blocks are the
//! layer-s descendants of the j-th layer-1 vertex, A blocks those of
//! layer-k1 vertices, and B blocks those of layer-(k1+1) vertices.

use crate::detect::Embedding;
use crate::graph::{Graph, LayeredGraph};
use crate::lemmas::tree::check_regular_almost_tree;
use crate::theta::ThetaSpec;
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Bad sets B_1..B_{s+1}, one per layer.
#[derive(Clone, Debug)]
pub struct BadSets {
    /// Layer index of the top set (s+1).
    pub top_layer: usize,
    pub theta_top: usize,
    pub theta_inner: usize,
    /// `sets[i]` is B_{i+1}, a subset of layer i+1, ascending.
    pub sets: Vec<Vec<u32>>,
}

impl BadSets {
    /// B_j for a layer index j in 1..=s+1.
    pub fn for_layer(&self, j: usize) -> &[u32] {
        &self.sets[j - 1]
    }

    /// All bad vertices across layers.
    pub fn all(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.sets.iter().flatten().copied().collect();
        out.sort_unstable();
        out
    }
}

/// Computes the bad sets: B_{s+1} holds the layer-(s+1) vertices with at
/// least `theta_top` parents, and downward for i = s..1, B_i holds the
/// layer-i vertices with at least `theta_inner` children inside B_{i+1}.
pub fn compute_bad_sets(
    lg: &LayeredGraph,
    s: usize,
    theta_top: usize,
    theta_inner: usize,
) -> Result<BadSets> {
    if theta_top < 1 || theta_inner < 1 {
        return Err(Error::Precondition("thresholds must be >= 1".into()));
    }
    if lg.depth() < s + 1 {
        return Err(Error::Precondition(format!(
            "need layers through {}, have {}",
            s + 1,
            lg.depth()
        )));
    }
    let mut sets = vec![Vec::new(); s + 1];
    sets[s] = lg
        .layer(s + 1)
        .iter()
        .copied()
        .filter(|&v| lg.parents(v).len() >= theta_top)
        .collect();
    for i in (1..=s).rev() {
        let above: std::collections::HashSet<u32> = sets[i].iter().copied().collect();
        sets[i - 1] = lg
            .layer(i)
            .iter()
            .copied()
            .filter(|&v| {
                lg.children(v)
                    .iter()
                    .filter(|w| above.contains(w))
                    .count()
                    >= theta_inner
            })
            .collect();
    }
    Ok(BadSets {
        top_layer: s + 1,
        theta_top,
        theta_inner,
        sets,
    })
}

/// Leftover path lengths tau_t = k1 + k_t - 2s - 1 for t = 2..l.
pub fn gamma_lengths(spec: &ThetaSpec, s: usize) -> Result<Vec<u32>> {
    let ks = spec.lengths();
    let k1 = ks[0] as i64;
    ks[1..]
        .iter()
        .map(|&kt| {
            let tau = k1 + kt as i64 - 2 * s as i64 - 1;
            if tau < 1 {
                Err(Error::Range(format!(
                    "leftover length k1 + {kt} - 2*{s} - 1 = {tau} is not positive"
                )))
            } else {
                Ok(tau as u32)
            }
        })
        .collect()
}

/// The forest of l-1 disjoint paths with the leftover lengths.
pub fn build_gamma_forest(spec: &ThetaSpec, s: usize) -> Result<Graph> {
    let lengths = gamma_lengths(spec, s)?;
    let mut edges = Vec::new();
    let mut next = 0u32;
    for &tau in &lengths {
        for i in 0..tau {
            edges.push((next + i, next + i + 1));
        }
        next += tau + 1;
    }
    Graph::from_edge_list(next as usize, &edges)
}

/// Strong/thick labels on the top two layers of an almost-tree.
#[derive(Clone, Debug)]
pub struct ThickThinLabels {
    pub s: usize,
    /// Strong vertices of layer s+1, ascending.
    pub strong: Vec<u32>,
    /// Layer-s vertices with at least one strong neighbor, ascending.
    pub thick: Vec<u32>,
    pub thin: Vec<u32>,
    /// For each strong vertex, one witness system of internally disjoint
    /// paths (full vertex sequences starting at the strong vertex).
    pub witnesses: BTreeMap<u32, Vec<Vec<u32>>>,
}

/// Walks tree parents (unique below layer s+1) up to `layer`.
fn ancestor_at(lg: &LayeredGraph, v: u32, layer: usize) -> u32 {
    let mut cur = v;
    let mut j = lg.layer_of[v as usize].expect("layered vertex") as usize;
    while j > layer {
        cur = lg.parents(cur)[0];
        j -= 1;
    }
    cur
}

/// Context shared by classification and embedding.
struct Blocks {
    /// layer-1 ancestor (D block id) of each layer-s vertex.
    d_block: BTreeMap<u32, u32>,
}

fn block_map(lg: &LayeredGraph, s: usize) -> Blocks {
    let d_block = lg
        .layer(s)
        .iter()
        .map(|&v| (v, ancestor_at(lg, v, 1)))
        .collect();
    Blocks { d_block }
}

/// Classifies layer-(s+1) vertices as strong and layer-s vertices as
/// thick/thin on a regular almost-tree of type (d, s+1).
///
/// A vertex v of layer s+1 is strong when the induced graph on the top two
/// layers carries l-1 paths from v, of lengths tau_2..tau_l, pairwise
/// sharing only v, whose ending vertices lie in pairwise distinct D blocks.
/// The recorded witness is the first such system in DFS order.
pub fn classify_strong_thick(
    lg: &LayeredGraph,
    d: usize,
    spec: &ThetaSpec,
    s: usize,
) -> Result<ThickThinLabels> {
    let taus = gamma_lengths(spec, s)?;
    let k1 = spec.lengths()[0] as usize;
    if s < k1 + 1 {
        return Err(Error::Range(format!("need s >= k1+1 = {}", k1 + 1)));
    }
    let check = check_regular_almost_tree(lg, d, s + 1);
    if !check.ok {
        return Err(Error::Precondition(format!(
            "not a regular almost-tree of type ({d}, {}): {}",
            s + 1,
            check.violation.unwrap()
        )));
    }
    let blocks = block_map(lg, s);
    let mut labels = ThickThinLabels {
        s,
        strong: Vec::new(),
        thick: Vec::new(),
        thin: Vec::new(),
        witnesses: BTreeMap::new(),
    };
    let mut used = vec![false; lg.base.vertex_count()];
    for &v in lg.layer(s + 1) {
        used[v as usize] = true;
        let mut system = Vec::new();
        let mut used_blocks = Vec::new();
        let found = search_paths(lg, s, &blocks, &taus, v, &mut used, 0, &mut system, &mut used_blocks);
        used[v as usize] = false;
        if found {
            labels.strong.push(v);
            labels.witnesses.insert(v, system);
        }
    }
    let strong_set: std::collections::HashSet<u32> = labels.strong.iter().copied().collect();
    for &w in lg.layer(s) {
        if lg
            .children(w)
            .iter()
            .any(|v| strong_set.contains(v))
        {
            labels.thick.push(w);
        } else {
            labels.thin.push(w);
        }
    }
    Ok(labels)
}

/// Backtracking search for a witness system rooted at `v`: one path per
/// remaining length `taus[idx..]`, vertices confined to layers s and s+1,
/// endpoints in D blocks not yet in `used_blocks`. Found paths stay marked
/// in `used` while deeper paths search, so the system shares only `v`.
#[allow(clippy::too_many_arguments)]
fn search_paths(
    lg: &LayeredGraph,
    s: usize,
    blocks: &Blocks,
    taus: &[u32],
    v: u32,
    used: &mut Vec<bool>,
    idx: usize,
    system: &mut Vec<Vec<u32>>,
    used_blocks: &mut Vec<u32>,
) -> bool {
    if idx == taus.len() {
        return true;
    }
    let mut path = vec![v];
    grow_witness(lg, s, blocks, taus, v, used, idx, system, used_blocks, &mut path)
}

/// DFS one witness path of length taus[idx] from the last vertex of `path`.
#[allow(clippy::too_many_arguments)]
fn grow_witness(
    lg: &LayeredGraph,
    s: usize,
    blocks: &Blocks,
    taus: &[u32],
    v: u32,
    used: &mut Vec<bool>,
    idx: usize,
    system: &mut Vec<Vec<u32>>,
    used_blocks: &mut Vec<u32>,
    path: &mut Vec<u32>,
) -> bool {
    if path.len() as u32 == taus[idx] + 1 {
        let end = *path.last().unwrap();
        let block = blocks.d_block[&end];
        if used_blocks.contains(&block) {
            return false;
        }
        used_blocks.push(block);
        system.push(path.clone());
        if search_paths(lg, s, blocks, taus, v, used, idx + 1, system, used_blocks) {
            return true;
        }
        system.pop();
        used_blocks.pop();
        return false;
    }
    let last = *path.last().unwrap();
    let in_top = lg.layer_of[last as usize] == Some(s as u32 + 1);
    for &w in lg.base.neighbors(last) {
        // stay inside the two-layer induced graph
        let wl = lg.layer_of[w as usize];
        let ok_layer = if in_top {
            wl == Some(s as u32)
        } else {
            wl == Some(s as u32 + 1)
        };
        if !ok_layer || used[w as usize] {
            continue;
        }
        path.push(w);
        used[w as usize] = true;
        let found = grow_witness(lg, s, blocks, taus, v, used, idx, system, used_blocks, path);
        used[w as usize] = false;
        path.pop();
        if found {
            return true;
        }
    }
    false
}

/// Embeds the full theta graph from an over-threshold thick set, following
/// the pigeonhole argument: some A block carries thick vertices in l-1
/// distinct B blocks; each contributes a strong neighbor whose witness path
/// escapes to a fresh D block, and the tree closes every path through the
/// root. Poles are the A-block root (layer k1) and the tree root.
///
/// Precondition: |thick| > (l-2) d^(s-1).
pub fn embed_theta_from_thick(
    lg: &LayeredGraph,
    d: usize,
    spec: &ThetaSpec,
    s: usize,
    labels: &ThickThinLabels,
) -> Result<Embedding> {
    let taus = gamma_lengths(spec, s)?;
    let k1 = spec.lengths()[0] as usize;
    let ell = spec.path_count();
    let bound = (ell as u64 - 2) * (d as u64).pow(s as u32 - 1);
    if labels.thick.len() as u64 <= bound {
        return Err(Error::Precondition(format!(
            "thick count {} does not exceed the bound {bound}",
            labels.thick.len()
        )));
    }
    let check = check_regular_almost_tree(lg, d, s + 1);
    if !check.ok {
        return Err(Error::Precondition(format!(
            "not a regular almost-tree of type ({d}, {}): {}",
            s + 1,
            check.violation.unwrap()
        )));
    }
    let blocks = block_map(lg, s);
    let strong_set: std::collections::HashSet<u32> = labels.strong.iter().copied().collect();

    // thick vertices grouped by (A block, B block)
    let mut by_a: BTreeMap<u32, BTreeMap<u32, Vec<u32>>> = BTreeMap::new();
    for &u in &labels.thick {
        let a = ancestor_at(lg, u, k1);
        let b = ancestor_at(lg, u, k1 + 1);
        by_a.entry(a).or_default().entry(b).or_default().push(u);
    }

    for (&a, b_groups) in &by_a {
        if b_groups.len() < ell - 1 {
            continue;
        }
        let home_block = ancestor_at(lg, a, 1);
        let mut used = vec![false; lg.base.vertex_count()];
        // pole path: tree chain a -> root
        let mut pole_chain = vec![a];
        for _ in 0..k1 {
            pole_chain.push(lg.parents(*pole_chain.last().unwrap())[0]);
        }
        for &x in &pole_chain {
            used[x as usize] = true;
        }
        let b_list: Vec<u32> = b_groups.keys().copied().collect();
        let mut paths: Vec<Vec<u32>> = vec![pole_chain.clone()];
        let mut used_blocks = vec![home_block];
        if place_branches(
            lg,
            s,
            k1,
            &blocks,
            &taus,
            &strong_set,
            b_groups,
            &b_list,
            0,
            &mut Vec::new(),
            &mut used,
            &mut used_blocks,
            &mut paths,
        ) {
            let root = lg.root;
            let emb = Embedding {
                poles: (a, root),
                paths,
            };
            return Ok(emb);
        }
    }
    Err(Error::BoundMissed(
        "thick count exceeds the bound but no embedding was realized".into(),
    ))
}

/// Chooses, for branch `idx` (the path of length k_{idx+2}), a B block, a
/// thick vertex in it, a strong neighbor, and an escaping witness path,
/// then closes through the tree; backtracks across all choices.
#[allow(clippy::too_many_arguments)]
fn place_branches(
    lg: &LayeredGraph,
    s: usize,
    k1: usize,
    blocks: &Blocks,
    taus: &[u32],
    strong_set: &std::collections::HashSet<u32>,
    b_groups: &BTreeMap<u32, Vec<u32>>,
    b_list: &[u32],
    idx: usize,
    chosen_b: &mut Vec<u32>,
    used: &mut Vec<bool>,
    used_blocks: &mut Vec<u32>,
    paths: &mut Vec<Vec<u32>>,
) -> bool {
    if idx == taus.len() {
        return true;
    }
    for &b in b_list {
        if chosen_b.contains(&b) {
            continue;
        }
        for &u in &b_groups[&b] {
            // tree chain a -> u; a is already marked used, internals not
            let mut down = vec![u];
            for _ in 0..s - k1 {
                let p = lg.parents(*down.last().unwrap())[0];
                down.push(p);
            }
            down.reverse(); // [a, ..., u]
            if down[1..].iter().any(|&x| used[x as usize]) {
                continue;
            }
            for &x in &down[1..] {
                used[x as usize] = true;
            }
            for &w in &lg.children(u) {
                if used[w as usize] || !strong_set.contains(&w) {
                    continue;
                }
                used[w as usize] = true;
                // escaping witness path of length taus[idx] from w
                let mut witness: Vec<Vec<u32>> = Vec::new();
                let mut path = vec![w];
                let found_path = grow_witness(
                    lg,
                    s,
                    blocks,
                    &taus[idx..idx + 1],
                    w,
                    used,
                    0,
                    &mut witness,
                    used_blocks,
                    &mut path,
                );
                if found_path {
                    let wpath = witness.pop().unwrap();
                    let end = *wpath.last().unwrap();
                    // the DFS unwound its marks; pin the whole path down
                    for &x in &wpath[1..] {
                        used[x as usize] = true;
                    }
                    // tree chain end -> root
                    let mut up = vec![end];
                    for _ in 0..s {
                        up.push(lg.parents(*up.last().unwrap())[0]);
                    }
                    let chain_free = up[1..up.len() - 1].iter().all(|&x| !used[x as usize]);
                    if chain_free {
                        for &x in &up[1..up.len() - 1] {
                            used[x as usize] = true;
                        }
                        // assemble: a -> u -> w -> ... -> end -> root
                        let mut full = down.clone();
                        full.extend(wpath.iter().copied());
                        full.extend(up[1..].iter().copied());
                        paths.push(full);
                        chosen_b.push(b);
                        if place_branches(
                            lg, s, k1, blocks, taus, strong_set, b_groups, b_list, idx + 1,
                            chosen_b, used, used_blocks, paths,
                        ) {
                            return true;
                        }
                        chosen_b.pop();
                        paths.pop();
                        for &x in &up[1..up.len() - 1] {
                            used[x as usize] = false;
                        }
                    }
                    for &x in &wpath[1..] {
                        used[x as usize] = false;
                    }
                    used_blocks.pop();
                }
                used[w as usize] = false;
            }
            for &x in &down[1..] {
                used[x as usize] = false;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::verify_embedding;
    use crate::graph::bfs_layers;
    use crate::theta::validate_spec;

    #[test]
    fn bad_sets_empty_on_trees() {
        // perfect binary tree depth 3: unique parents everywhere
        let mut edges = Vec::new();
        for v in 0..7u32 {
            edges.push((v, 2 * v + 1));
            edges.push((v, 2 * v + 2));
        }
        let g = Graph::from_edge_list(15, &edges).unwrap();
        let lg = bfs_layers(&g, 0).unwrap();
        let b = compute_bad_sets(&lg, 2, 2, 2).unwrap();
        assert!(b.all().is_empty());
    }

    #[test]
    fn bad_sets_cascade_on_dense_chain() {
        // layers 1-3-3 with full joins between consecutive layers
        let mut edges = vec![(0u32, 1u32), (0, 2), (0, 3)];
        for u in 1..4u32 {
            for w in 4..7u32 {
                edges.push((u, w));
            }
        }
        let g = Graph::from_edge_list(7, &edges).unwrap();
        let lg = bfs_layers(&g, 0).unwrap();
        let b = compute_bad_sets(&lg, 1, 2, 2).unwrap();
        assert_eq!(b.for_layer(2), &[4, 5, 6], "every layer-2 vertex has 3 parents");
        assert_eq!(b.for_layer(1), &[1, 2, 3], "every layer-1 vertex has 3 bad children");
    }

    #[test]
    fn bad_sets_monotone_in_thresholds() {
        let mut edges = vec![(0u32, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 5), (4, 5)];
        edges.push((3, 6));
        let g = Graph::from_edge_list(7, &edges).unwrap();
        let lg = bfs_layers(&g, 0).unwrap();
        let loose = compute_bad_sets(&lg, 2, 2, 1).unwrap();
        let tight = compute_bad_sets(&lg, 2, 3, 2).unwrap();
        for j in 1..=3 {
            let l: std::collections::HashSet<u32> = loose.for_layer(j).iter().copied().collect();
            for v in tight.for_layer(j) {
                assert!(l.contains(v), "raising thresholds must shrink B_{j}");
            }
        }
    }

    #[test]
    fn gamma_forest_lengths() {
        let spec = validate_spec(&[3, 7, 7]).unwrap();
        let g = build_gamma_forest(&spec, 4).unwrap();
        // two disjoint edges
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 2);

        let spec = validate_spec(&[3, 9, 9]).unwrap();
        let g = build_gamma_forest(&spec, 4).unwrap();
        // two disjoint paths of length 3
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 6);

        let spec = validate_spec(&[3, 5, 5]).unwrap();
        assert!(matches!(build_gamma_forest(&spec, 4), Err(Error::Range(_))));
    }

    /// Perfect d-ary tree down to `depth`, plus a custom last layer where
    /// groups of `share` same-index leaves across distinct level-1 subtrees
    /// share one child; remaining child slots are private.
    fn shared_child_tree(d: usize, depth: usize, share: bool) -> Graph {
        let mut edges = Vec::new();
        let mut next = 1u32;
        let mut level = vec![0u32];
        for _ in 0..depth {
            let mut new_level = Vec::new();
            for &v in &level {
                for _ in 0..d {
                    edges.push((v, next));
                    new_level.push(next);
                    next += 1;
                }
            }
            level = new_level;
        }
        // leaves grouped by level-1 subtree: block size d^(depth-1)
        let block = level.len() / d;
        if share {
            for i in 0..block {
                let shared = next;
                next += 1;
                for j in 0..d {
                    edges.push((level[j * block + i], shared));
                }
            }
        }
        for &leaf in &level {
            let private = if share { d - 1 } else { d };
            for _ in 0..private {
                edges.push((leaf, next));
                next += 1;
            }
        }
        Graph::from_edge_list(next as usize, &edges).unwrap()
    }

    #[test]
    fn pure_tree_is_all_thin() {
        let spec = validate_spec(&[3, 7, 7]).unwrap();
        let g = shared_child_tree(3, 4, false);
        let lg = bfs_layers(&g, 0).unwrap();
        let labels = classify_strong_thick(&lg, 3, &spec, 4).unwrap();
        assert!(labels.strong.is_empty());
        assert!(labels.thick.is_empty());
        assert_eq!(labels.thin.len(), 81);
    }

    #[test]
    fn shared_children_make_thick_vertices() {
        let spec = validate_spec(&[3, 7, 7]).unwrap();
        let g = shared_child_tree(3, 4, true);
        let lg = bfs_layers(&g, 0).unwrap();
        let labels = classify_strong_thick(&lg, 3, &spec, 4).unwrap();
        // every shared child has parents in three distinct D blocks
        assert_eq!(labels.strong.len(), 27);
        assert_eq!(labels.thick.len(), 81);
        for (v, system) in &labels.witnesses {
            assert_eq!(system.len(), 2);
            for path in system {
                assert_eq!(path[0], *v);
                assert_eq!(path.len(), 2, "tau = 1 paths are single edges");
            }
        }
    }

    #[test]
    fn embed_from_thick_on_planted_instance() {
        let spec = validate_spec(&[3, 7, 7]).unwrap();
        let g = shared_child_tree(3, 4, true);
        let lg = bfs_layers(&g, 0).unwrap();
        let labels = classify_strong_thick(&lg, 3, &spec, 4).unwrap();
        assert!(labels.thick.len() as u64 > 27);
        let emb = embed_theta_from_thick(&lg, 3, &spec, 4, &labels).unwrap();
        assert!(verify_embedding(&g, &spec, &emb), "embedding must verify");
    }

    #[test]
    fn embed_precondition_on_thin_instance() {
        let spec = validate_spec(&[3, 7, 7]).unwrap();
        let g = shared_child_tree(3, 4, false);
        let lg = bfs_layers(&g, 0).unwrap();
        let labels = classify_strong_thick(&lg, 3, &spec, 4).unwrap();
        assert!(matches!(
            embed_theta_from_thick(&lg, 3, &spec, 4, &labels),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn cycle_case_embeds_c8() {
        // spec (2,6), s = 3: one leftover edge; a single cross-block shared
        // child creates a thick vertex and a C8
        let spec = validate_spec(&[2, 6]).unwrap();
        let g = shared_child_tree(2, 3, true);
        let lg = bfs_layers(&g, 0).unwrap();
        let labels = classify_strong_thick(&lg, 2, &spec, 3).unwrap();
        assert!(!labels.thick.is_empty());
        let emb = embed_theta_from_thick(&lg, 2, &spec, 3, &labels).unwrap();
        assert!(verify_embedding(&g, &spec, &emb));
        // cross-check: the host indeed contains Theta_{2,6}
        let det = crate::detect::detect_theta(
            &g,
            &spec,
            crate::detect::DetectMode::First,
            1_000_000,
        )
        .unwrap();
        assert_eq!(det.is_free(), Some(false));
    }
}
