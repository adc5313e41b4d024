//! Regular trees and almost-trees inside BFS layerings: validation and the
//! star-extraction growth step that turns a regular tree with one bounded
//! extra layer into a regular tree one layer deeper.
//!
//! A layered graph is a regular almost-tree of type (d, s) when every
//! vertex in layers 0..s-1 has exactly d children, every vertex in layers
//! 1..s-1 has exactly one parent, and the subtree hanging off each layer-1
//! vertex has the same layered shape as the tree above it. A regular tree
//! additionally has unique parents in layer s.

use crate::graph::{Graph, LayeredGraph};
use crate::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;

/// Verdict of an almost-tree check.
#[derive(Clone, Debug)]
pub struct TreeCheck {
    pub ok: bool,
    /// First violation found, scanning layers outward.
    pub violation: Option<String>,
}

impl TreeCheck {
    fn pass() -> TreeCheck {
        TreeCheck {
            ok: true,
            violation: None,
        }
    }
    fn fail(message: String) -> TreeCheck {
        TreeCheck {
            ok: false,
            violation: Some(message),
        }
    }
}

/// Checks the regular almost-tree conditions of type (d, s); the last
/// layer s may have multiple parents.
pub fn check_regular_almost_tree(lg: &LayeredGraph, d: usize, s: usize) -> TreeCheck {
    check_tree_conditions(lg, d, s, false)
}

/// Checks the regular tree conditions of type (d, s): the almost-tree
/// conditions plus unique parents in layer s.
pub fn check_regular_tree(lg: &LayeredGraph, d: usize, s: usize) -> TreeCheck {
    check_tree_conditions(lg, d, s, true)
}

fn check_tree_conditions(lg: &LayeredGraph, d: usize, s: usize, strict_last: bool) -> TreeCheck {
    if s < 1 {
        return TreeCheck::fail("type needs s >= 1".into());
    }
    if lg.depth() < s {
        return TreeCheck::fail(format!("only {} layers, need {}", lg.depth(), s));
    }
    // no edges inside a layer
    for j in 0..=s {
        for &v in lg.layer(j) {
            if lg
                .base
                .neighbors(v)
                .iter()
                .any(|&w| lg.layer_of[w as usize] == Some(j as u32))
            {
                return TreeCheck::fail(format!("vertex {v} has an edge inside layer {j}"));
            }
        }
    }
    for j in 0..s {
        for &v in lg.layer(j) {
            let c = lg.children(v).len();
            if c != d {
                return TreeCheck::fail(format!(
                    "vertex {v} in layer {j} has {c} children, expected {d}"
                ));
            }
        }
    }
    let parent_limit = if strict_last { s } else { s - 1 };
    for j in 1..=parent_limit {
        for &v in lg.layer(j) {
            let p = lg.parents(v).len();
            if p != 1 {
                return TreeCheck::fail(format!(
                    "vertex {v} in layer {j} has {p} parents, expected 1"
                ));
            }
        }
    }
    // layered-shape equality of the root tree and each child subtree
    let root_shape = shape_profile(lg, lg.root, s.saturating_sub(1));
    for &v1 in lg.layer(1) {
        let child_shape = shape_profile(lg, v1, s.saturating_sub(1));
        if child_shape != root_shape {
            return TreeCheck::fail(format!(
                "subtree of layer-1 vertex {v1} has a different layered shape"
            ));
        }
    }
    TreeCheck::pass()
}

/// Branching profile of the subtree below `start`, `depth` levels deep:
/// per relative level, the sorted list of children counts.
fn shape_profile(lg: &LayeredGraph, start: u32, depth: usize) -> Vec<Vec<usize>> {
    let mut profile = Vec::with_capacity(depth);
    let mut level = vec![start];
    for _ in 0..depth {
        let mut counts: Vec<usize> = Vec::with_capacity(level.len());
        let mut next = Vec::new();
        for &v in &level {
            let children = lg.children(v);
            counts.push(children.len());
            next.extend(children);
        }
        counts.sort_unstable();
        profile.push(counts);
        level = next;
    }
    profile
}

/// A uniform-branching tree certificate rooted inside a host graph.
#[derive(Clone, Debug, Serialize)]
pub struct RegularTreeCert {
    pub root: u32,
    /// Uniform branching degree of every internal vertex.
    pub branching: usize,
    /// Kept vertices per layer, layer 0 = [root].
    pub layers: Vec<Vec<u32>>,
    /// Kept children of every internal vertex.
    pub children: BTreeMap<u32, Vec<u32>>,
}

impl RegularTreeCert {
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }
}

/// Re-validates a tree certificate against its host: uniform branching,
/// unique parents, edges present, all vertices distinct.
pub fn validate_tree_cert(host: &Graph, cert: &RegularTreeCert) -> Result<()> {
    if cert.layers.is_empty() || cert.layers[0] != vec![cert.root] {
        return Err(Error::Precondition("layer 0 must be exactly the root".into()));
    }
    let mut seen = std::collections::HashSet::new();
    for layer in &cert.layers {
        for &v in layer {
            if !seen.insert(v) {
                return Err(Error::Precondition(format!("vertex {v} appears twice")));
            }
        }
    }
    let mut parent_count: BTreeMap<u32, usize> = BTreeMap::new();
    for (j, layer) in cert.layers.iter().enumerate() {
        if j == cert.depth() {
            break;
        }
        let next: std::collections::HashSet<u32> = cert.layers[j + 1].iter().copied().collect();
        for &v in layer {
            let kids = cert
                .children
                .get(&v)
                .ok_or_else(|| Error::Precondition(format!("vertex {v} has no children entry")))?;
            if kids.len() != cert.branching {
                return Err(Error::Precondition(format!(
                    "vertex {v} has {} kept children, expected {}",
                    kids.len(),
                    cert.branching
                )));
            }
            for &w in kids {
                if !next.contains(&w) {
                    return Err(Error::Precondition(format!(
                        "child {w} of {v} is not in layer {}",
                        j + 1
                    )));
                }
                if !host.has_edge(v, w) {
                    return Err(Error::Precondition(format!(
                        "certificate edge ({v},{w}) missing from host"
                    )));
                }
                *parent_count.entry(w).or_insert(0) += 1;
            }
        }
    }
    for layer in &cert.layers[1..] {
        for &v in layer {
            if parent_count.get(&v) != Some(&1) {
                return Err(Error::Precondition(format!(
                    "vertex {v} has {} certificate parents",
                    parent_count.get(&v).copied().unwrap_or(0)
                )));
            }
        }
    }
    Ok(())
}

/// The shrink factor of the growth step: K = C1(C0^2+1) * (2 C0^2)^s, via
/// the chain C'_s = C1(C0^2+1), C'_{t-1} = 2 C'_t C0^2.
pub fn growth_shrink_factor(s: usize, c0: usize, c1: usize) -> u64 {
    let c0sq = (c0 * c0) as u64;
    let mut k = c1 as u64 * (c0sq + 1);
    for _ in 0..s {
        k *= 2 * c0sq;
    }
    k
}

/// Grows a regular tree of type (d, s) with a bounded extra layer into a
/// regular tree certificate of type (d', s+1), d' >= ceil(d/K).
///
/// Preconditions on the layered host:
/// (A) layers 0..s form a regular tree of type (d, s);
/// (B) each layer-s vertex has between d and C0^2 d children in layer s+1;
/// (C) the two-layer induced subgraph H[L_s u L_{s+1}] has at most
///     C1 |V(H)| edges.
///
/// The algorithm extracts disjoint stars under layer s with quota
/// ceil(d/C'_s), then walks upward keeping, at each layer t-1, the parents
/// with at least ceil(d/C'_{t-1}) surviving children; the final tree is
/// trimmed to the uniform branching ceil(d/K).
pub fn grow_regular_tree(
    lg: &LayeredGraph,
    d: usize,
    s: usize,
    c0: usize,
    c1: usize,
) -> Result<RegularTreeCert> {
    if d == 0 || c0 == 0 || c1 == 0 {
        return Err(Error::Precondition("need d, C0, C1 >= 1".into()));
    }
    let check = check_regular_tree(lg, d, s);
    if !check.ok {
        return Err(Error::Precondition(format!(
            "condition (A): {}",
            check.violation.unwrap()
        )));
    }
    if lg.depth() < s + 1 {
        return Err(Error::Precondition(format!(
            "condition (B): no layer {} in the host",
            s + 1
        )));
    }
    let c0sq = c0 * c0;
    let mut two_layer_edges = 0usize;
    for &v in lg.layer(s) {
        let c = lg.children(v).len();
        if c < d || c > c0sq * d {
            return Err(Error::Precondition(format!(
                "condition (B): layer-{s} vertex {v} has {c} children, outside [{d}, {}]",
                c0sq * d
            )));
        }
        two_layer_edges += c;
    }
    let two_layer_vertices = lg.layer(s).len() + lg.layer(s + 1).len();
    if two_layer_edges > c1 * two_layer_vertices {
        return Err(Error::Precondition(format!(
            "condition (C): {two_layer_edges} edges > C1 * {two_layer_vertices} vertices"
        )));
    }

    // quota chain
    let mut chain = vec![0u64; s + 1];
    chain[s] = c1 as u64 * (c0sq as u64 + 1);
    for t in (0..s).rev() {
        chain[t] = 2 * chain[t + 1] * c0sq as u64;
    }
    let quota = |t: usize| -> usize { (d as u64).div_ceil(chain[t]) as usize };

    // bottom phase: disjoint stars under layer s
    let mut kept_children: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut taken = vec![false; lg.base.vertex_count()];
    let q_s = quota(s);
    loop {
        let mut picked = None;
        for &v in lg.layer(s) {
            if kept_children.contains_key(&v) || taken[v as usize] {
                continue;
            }
            let alive: Vec<u32> = lg
                .children(v)
                .into_iter()
                .filter(|&w| !taken[w as usize])
                .collect();
            if alive.len() >= q_s {
                picked = Some((v, alive));
                break;
            }
            taken[v as usize] = true; // starved center, never reconsidered
        }
        let Some((v, alive)) = picked else { break };
        for &w in &alive {
            taken[w as usize] = true;
        }
        kept_children.insert(v, alive[..q_s].to_vec());
    }
    let mut kept: Vec<u32> = kept_children.keys().copied().collect();

    // upward phase: keep parents rich enough in surviving children
    for t in (1..=s).rev() {
        let q = quota(t - 1);
        let kept_set: std::collections::HashSet<u32> = kept.iter().copied().collect();
        let mut next_kept = Vec::new();
        for &u in lg.layer(t - 1) {
            let rich: Vec<u32> = lg
                .children(u)
                .into_iter()
                .filter(|w| kept_set.contains(w))
                .collect();
            if rich.len() >= q {
                kept_children.insert(u, rich[..q].to_vec());
                next_kept.push(u);
            }
        }
        if next_kept.is_empty() {
            return Err(Error::BoundMissed(format!(
                "no layer-{} vertex keeps {} children",
                t - 1,
                q
            )));
        }
        kept = next_kept;
    }
    if kept != vec![lg.root] {
        return Err(Error::BoundMissed(
            "root did not survive the upward pass".into(),
        ));
    }

    // final trim to uniform branching ceil(d/K)
    let branching = quota(0);
    let mut layers = vec![vec![lg.root]];
    let mut children: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for _ in 0..=s {
        let mut next = Vec::new();
        for &v in layers.last().unwrap() {
            let kids = &kept_children[&v];
            let kept_kids = kids[..branching].to_vec();
            next.extend(kept_kids.iter().copied());
            children.insert(v, kept_kids);
        }
        next.sort_unstable();
        layers.push(next);
    }
    let cert = RegularTreeCert {
        root: lg.root,
        branching,
        layers,
        children,
    };
    validate_tree_cert(&lg.base, &cert)?;
    Ok(cert)
}
