//! Reduction steps: core peeling, greedy tree embedding, disjoint star
//! extraction, and degree regularization.
//!
//! A graph with |E| >= l|V| and |V| >= 2l+1 keeps a nonempty l-core under
//! peeling, and any tree on l+1 vertices embeds greedily into a host of
//! minimum degree l, with a prescribed vertex anchored to either side of a
//! bipartition. Star extraction deletes whole neighborhoods greedily.
//! Regularization selects a dyadic degree bucket and peels it until the
//! max/min degree ratio bound holds.

use crate::graph::{BipartitionTag, Graph, InducedSubgraph, Side};
use crate::{Error, Result};

/// Iteratively deletes vertices of degree < `min_degree` and returns the
/// surviving induced subgraph (the core), possibly empty.
pub fn peel_to_min_degree(g: &Graph, min_degree: usize) -> InducedSubgraph {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n as u32).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: Vec<u32> = (0..n as u32)
        .filter(|&v| degree[v as usize] < min_degree)
        .collect();
    while let Some(v) = queue.pop() {
        if !alive[v as usize] {
            continue;
        }
        alive[v as usize] = false;
        for &w in g.neighbors(v) {
            if alive[w as usize] {
                degree[w as usize] -= 1;
                if degree[w as usize] < min_degree {
                    queue.push(w);
                }
            }
        }
    }
    let survivors: Vec<u32> = (0..n as u32).filter(|&v| alive[v as usize]).collect();
    g.induced(&survivors)
}

/// Where to pin one tree vertex during embedding.
#[derive(Clone, Copy, Debug)]
pub struct Anchor {
    pub tree_vertex: u32,
    pub side: Side,
}

/// Greedily embeds a tree into `host`, which must have minimum degree at
/// least |V(tree)| - 1. Returns the vertex map (tree vertex -> host vertex).
///
/// With an anchor, the host must carry a bipartition tag and the anchored
/// tree vertex lands on the requested side. The greedy order is BFS from
/// the anchored vertex (or vertex 0), ties broken by least index; under the
/// degree precondition it cannot fail.
pub fn greedy_embed_tree(
    host: &Graph,
    bipartition: Option<&BipartitionTag>,
    tree: &Graph,
    anchor: Option<Anchor>,
) -> Result<Vec<u32>> {
    let t = tree.vertex_count();
    if t == 0 {
        return Err(Error::Precondition("tree is empty".into()));
    }
    if tree.edge_count() != t - 1 {
        return Err(Error::Precondition(format!(
            "not a tree: {} vertices, {} edges",
            t,
            tree.edge_count()
        )));
    }
    let needed = t - 1;
    if host.vertex_count() == 0
        || (0..host.vertex_count() as u32).any(|v| host.degree(v) < needed)
    {
        return Err(Error::Precondition(format!(
            "host minimum degree below {needed}"
        )));
    }
    let root = anchor.map_or(0, |a| a.tree_vertex);
    if root as usize >= t {
        return Err(Error::Precondition(format!(
            "anchor vertex {root} outside tree"
        )));
    }
    let start = match anchor {
        None => 0u32,
        Some(a) => {
            let tag = bipartition.ok_or_else(|| {
                Error::Precondition("anchored embedding needs a bipartition tag".into())
            })?;
            (0..host.vertex_count() as u32)
                .find(|&v| tag.side(v) == a.side)
                .ok_or_else(|| Error::Precondition("requested side is empty".into()))?
        }
    };
    // connectivity check doubles as the BFS embedding order
    let order = crate::graph::bfs_layers(tree, root)?;
    if order.layer_of.iter().any(Option::is_none) {
        return Err(Error::Precondition("tree is disconnected".into()));
    }
    let mut image = vec![u32::MAX; t];
    let mut taken = vec![false; host.vertex_count()];
    image[root as usize] = start;
    taken[start as usize] = true;
    for layer in &order.layers[1..] {
        for &tv in layer {
            let parent = order.parents(tv)[0];
            let pw = image[parent as usize];
            let w = host
                .neighbors(pw)
                .iter()
                .copied()
                .find(|&w| !taken[w as usize])
                .expect("degree precondition guarantees a free neighbor");
            image[tv as usize] = w;
            taken[w as usize] = true;
        }
    }
    Ok(image)
}

/// A star kept by [`extract_disjoint_stars`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Star {
    pub center: u32,
    pub leaves: Vec<u32>,
}

/// Greedy extraction of vertex-disjoint stars from a bipartite graph:
/// centers on the Left side, leaves on the Right.
///
/// Preconditions: |Right| >= |Left| * d and every Left vertex has degree in
/// [d, c*d]. Repeatedly picks the least center with at least ceil(d/c)
/// surviving neighbors, keeps that many leaves, and deletes the center's
/// whole surviving neighborhood. Returns at least ceil(m/(c+1)) stars of
/// ceil(d/c) leaves each, pairwise disjoint.
pub fn extract_disjoint_stars(
    g: &Graph,
    bipartition: &BipartitionTag,
    d: usize,
    c: usize,
) -> Result<Vec<Star>> {
    if d == 0 || c == 0 {
        return Err(Error::Precondition("need d >= 1 and c >= 1".into()));
    }
    let centers = bipartition.vertices_on(Side::Left);
    let pool = bipartition.vertices_on(Side::Right);
    let m = centers.len();
    if pool.len() < m * d {
        return Err(Error::Precondition(format!(
            "leaf pool {} smaller than m*d = {}",
            pool.len(),
            m * d
        )));
    }
    for &v in &centers {
        let deg = g.degree(v);
        if deg < d || deg > c * d {
            return Err(Error::Precondition(format!(
                "center {v} has degree {deg} outside [{d}, {}]",
                c * d
            )));
        }
    }
    let quota = d.div_ceil(c);
    let mut deleted = vec![false; g.vertex_count()];
    let mut stars = Vec::new();
    loop {
        let mut picked = None;
        for &v in &centers {
            if deleted[v as usize] {
                continue;
            }
            let alive: Vec<u32> = g
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&w| !deleted[w as usize])
                .collect();
            if alive.len() >= quota {
                picked = Some((v, alive));
                break;
            }
        }
        let Some((v, alive)) = picked else { break };
        deleted[v as usize] = true;
        for &w in &alive {
            deleted[w as usize] = true;
        }
        stars.push(Star {
            center: v,
            leaves: alive[..quota].to_vec(),
        });
    }
    let target = m.div_ceil(c + 1);
    if stars.len() < target {
        return Err(Error::BoundMissed(format!(
            "greedy produced {} stars, the guarantee is {target}",
            stars.len()
        )));
    }
    Ok(stars)
}

/// Result of [`regularize_degrees`].
#[derive(Clone, Debug)]
pub struct Regularized {
    pub subgraph: InducedSubgraph,
    /// Fraction of the original edges retained.
    pub retained_edges: f64,
    /// max/min degree ratio of the result (1.0 for a single edge).
    pub achieved_ratio: f64,
}

/// Extracts a nonempty subgraph whose max/min degree ratio is at most
/// `ratio`, reporting the retained edge fraction.
///
/// Candidates come from dyadic degree buckets: for each bucket floor f, the
/// subgraph induced on vertices of degree >= ceil(f/2) gets one peeling
/// pass at that threshold, then vertices of minimum degree are removed one
/// at a time until the ratio holds. The candidate with the most edges wins;
/// if every bucket empties, the fallback is a single edge at a maximum
/// degree vertex, which has ratio 1.
pub fn regularize_degrees(g: &Graph, ratio: usize) -> Result<Regularized> {
    if ratio < 2 {
        return Err(Error::Precondition(format!("ratio {ratio} < 2")));
    }
    if g.edge_count() == 0 {
        return Err(Error::Precondition("graph has no edges".into()));
    }
    let total_edges = g.edge_count() as f64;
    let max_deg = (0..g.vertex_count() as u32)
        .map(|v| g.degree(v))
        .max()
        .unwrap();
    let mut best: Option<InducedSubgraph> = None;
    let mut floor = 1usize;
    while floor <= max_deg {
        let threshold = floor.div_ceil(2).max(1);
        let verts: Vec<u32> = (0..g.vertex_count() as u32)
            .filter(|&v| g.degree(v) >= threshold)
            .collect();
        let sub = g.induced(&verts);
        // one peeling pass at the bucket threshold
        let keep: Vec<u32> = (0..sub.graph.vertex_count() as u32)
            .filter(|&v| sub.graph.degree(v) >= threshold)
            .map(|v| sub.vertices[v as usize])
            .collect();
        let sub = peel_to_ratio(g, g.induced(&keep), ratio);
        if sub.graph.edge_count() > best.as_ref().map_or(0, |b| b.graph.edge_count()) {
            best = Some(sub);
        }
        floor *= 2;
    }
    let subgraph = match best {
        Some(b) if b.graph.edge_count() > 0 => b,
        _ => {
            // single edge at a maximum degree vertex
            let v = (0..g.vertex_count() as u32)
                .filter(|&v| g.degree(v) > 0)
                .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
                .unwrap();
            let u = g.neighbors(v)[0];
            g.induced(&[u.min(v), u.max(v)])
        }
    };
    let degs: Vec<usize> = (0..subgraph.graph.vertex_count() as u32)
        .map(|v| subgraph.graph.degree(v))
        .collect();
    let achieved = *degs.iter().max().unwrap() as f64 / *degs.iter().min().unwrap() as f64;
    Ok(Regularized {
        retained_edges: subgraph.graph.edge_count() as f64 / total_edges,
        achieved_ratio: achieved,
        subgraph,
    })
}

/// Removes least-index minimum-degree vertices until max/min <= ratio.
fn peel_to_ratio(parent: &Graph, mut sub: InducedSubgraph, ratio: usize) -> InducedSubgraph {
    loop {
        if sub.graph.vertex_count() == 0 {
            return sub;
        }
        let degs: Vec<usize> = (0..sub.graph.vertex_count() as u32)
            .map(|v| sub.graph.degree(v))
            .collect();
        let (min_d, max_d) = (*degs.iter().min().unwrap(), *degs.iter().max().unwrap());
        if min_d > 0 && max_d <= ratio * min_d {
            return sub;
        }
        let drop = degs.iter().position(|&d| d == min_d).unwrap();
        let keep: Vec<u32> = sub
            .vertices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, &v)| v)
            .collect();
        sub = parent.induced(&keep);
    }
}
