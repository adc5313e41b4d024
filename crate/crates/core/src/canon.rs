//! Canonical labeling of small graphs by refinement plus backtracking.
//!
//! Isomorphic graphs map to identical canonical forms. The search refines
//! an ordered partition by neighbor counts until stable, individualizes
//! vertices of the first non-singleton cell, and keeps the labeling whose
//! packed upper-triangle adjacency code is largest. Twin vertices (equal
//! neighborhoods apart from each other) branch only once. Limited to 16
//! vertices, which covers the exact extremal searches.

use crate::graph::Graph;
use crate::{Error, Result};

pub const MAX_CANON_N: usize = 16;

/// The canonically relabeled graph.
pub fn canonical_form(g: &Graph) -> Result<Graph> {
    let perm = canonical_labeling(g)?;
    let n = g.vertex_count();
    let mut edges = Vec::with_capacity(g.edge_count());
    let mut inv = vec![0u32; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old as usize] = new as u32;
    }
    for (u, v) in g.edges() {
        edges.push((inv[u as usize], inv[v as usize]));
    }
    Graph::from_edge_list(n, &edges)
}

/// Canonical order of the vertices: entry `new` holds the original vertex.
pub fn canonical_labeling(g: &Graph) -> Result<Vec<u32>> {
    let n = g.vertex_count();
    if n > MAX_CANON_N {
        return Err(Error::SizeLimit(format!(
            "canonical form limited to {MAX_CANON_N} vertices, got {n}"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let masks: Vec<u32> = (0..n as u32)
        .map(|v| {
            g.neighbors(v)
                .iter()
                .fold(0u32, |m, &w| m | 1 << w)
        })
        .collect();
    let mut state = Search {
        masks: &masks,
        n,
        best_code: None,
        best_perm: Vec::new(),
    };
    let start = refine(&masks, vec![(0..n as u32).collect()]);
    state.descend(start);
    Ok(state.best_perm)
}

struct Search<'a> {
    masks: &'a [u32],
    n: usize,
    best_code: Option<u128>,
    best_perm: Vec<u32>,
}

impl<'a> Search<'a> {
    fn descend(&mut self, partition: Vec<Vec<u32>>) {
        if let Some(cell_idx) = partition.iter().position(|c| c.len() > 1) {
            let cell = &partition[cell_idx];
            let mut tried: Vec<u32> = Vec::new();
            for &v in cell {
                // twin pruning: when (u v) is an automorphism the two
                // branches explore rank-equal labelings
                if tried.iter().any(|&u| {
                    let strip = !(1u32 << u) & !(1 << v);
                    (self.masks[u as usize] & strip) == (self.masks[v as usize] & strip)
                }) {
                    continue;
                }
                tried.push(v);
                let mut next = Vec::with_capacity(partition.len() + 1);
                for (i, c) in partition.iter().enumerate() {
                    if i == cell_idx {
                        next.push(vec![v]);
                        next.push(c.iter().copied().filter(|&u| u != v).collect());
                    } else {
                        next.push(c.clone());
                    }
                }
                self.descend(refine(self.masks, next));
            }
        } else {
            let perm: Vec<u32> = partition.iter().map(|c| c[0]).collect();
            let code = self.pack(&perm);
            if self.best_code.is_none() || code > self.best_code.unwrap() {
                self.best_code = Some(code);
                self.best_perm = perm;
            }
        }
    }

    /// Upper-triangle adjacency bits under the labeling, packed row-major.
    fn pack(&self, perm: &[u32]) -> u128 {
        let mut code = 0u128;
        for i in 0..self.n {
            for j in i + 1..self.n {
                code <<= 1;
                if self.masks[perm[i] as usize] >> perm[j] & 1 == 1 {
                    code |= 1;
                }
            }
        }
        code
    }
}

/// Equitable refinement: repeatedly splits cells by neighbor counts into
/// every current cell, sub-cells ordered by ascending count, until stable.
fn refine(masks: &[u32], mut partition: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    loop {
        let mut changed = false;
        let splitters: Vec<u32> = partition
            .iter()
            .map(|c| c.iter().fold(0u32, |m, &v| m | 1 << v))
            .collect();
        'outer: for splitter in &splitters {
            for (i, cell) in partition.iter().enumerate() {
                if cell.len() < 2 {
                    continue;
                }
                let count =
                    |v: u32| (masks[v as usize] & splitter).count_ones();
                let first = count(cell[0]);
                if cell.iter().all(|&v| count(v) == first) {
                    continue;
                }
                let mut groups: Vec<(u32, Vec<u32>)> = Vec::new();
                for &v in cell {
                    let c = count(v);
                    match groups.iter_mut().find(|(k, _)| *k == c) {
                        Some((_, g)) => g.push(v),
                        None => groups.push((c, vec![v])),
                    }
                }
                groups.sort_by_key(|(k, _)| *k);
                let mut next = Vec::with_capacity(partition.len() + groups.len());
                for (j, c) in partition.iter().enumerate() {
                    if j == i {
                        for (_, group) in &groups {
                            next.push(group.clone());
                        }
                    } else {
                        next.push(c.clone());
                    }
                }
                partition = next;
                changed = true;
                break 'outer;
            }
        }
        if !changed {
            return partition;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph6::encode_graph6;

    fn canon_key(g: &Graph) -> String {
        encode_graph6(&canonical_form(g).unwrap())
    }

    #[test]
    fn relabeled_graphs_agree() {
        let g1 = Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let g2 = Graph::from_edge_list(5, &[(3, 2), (2, 0), (0, 4), (4, 1)]).unwrap();
        assert_eq!(canon_key(&g1), canon_key(&g2));
    }

    #[test]
    fn non_isomorphic_graphs_differ() {
        let path = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let star = Graph::from_edge_list(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_ne!(canon_key(&path), canon_key(&star));
    }

    #[test]
    fn symmetric_graphs_are_quick() {
        for g in [Graph::empty(9), Graph::complete(9)] {
            let form = canonical_form(&g).unwrap();
            assert_eq!(form.edge_count(), g.edge_count());
        }
    }

    #[test]
    fn exhaustive_agreement_on_relabelings() {
        // every permutation of a fixed 6-vertex graph canonizes identically
        let g = Graph::from_edge_list(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (1, 5)])
            .unwrap();
        let reference = canon_key(&g);
        let perms = permutations(6);
        for p in perms.iter().step_by(7) {
            let edges: Vec<(u32, u32)> = g
                .edges()
                .iter()
                .map(|&(u, v)| (p[u as usize], p[v as usize]))
                .collect();
            let relabeled = Graph::from_edge_list(6, &edges).unwrap();
            assert_eq!(canon_key(&relabeled), reference);
        }
    }

    fn permutations(n: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut items: Vec<u32> = (0..n as u32).collect();
        heap(&mut items, n, &mut out);
        out
    }

    fn heap(items: &mut Vec<u32>, k: usize, out: &mut Vec<Vec<u32>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(items, k - 1, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
}
