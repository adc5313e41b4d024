//! Immutable simple graphs with adjacency sets, BFS layering, and degree
//! statistics.
//!
//! Vertices are dense 0-based indices. External identifiers (field vectors,
//! line coordinates) are mapped through side tables owned by the module that
//! produces the graph. Graphs never change after construction; algorithms
//! that "delete" vertices build induced subgraphs instead.

use crate::{Error, Result};
use num_rational::Ratio;

/// Bitset adjacency mirror is only kept for hosts up to this many vertices.
const BITSET_LIMIT: usize = 4096;

/// An immutable undirected simple graph.
///
/// Adjacency is stored as sorted neighbor lists; for graphs with at most
/// 4096 vertices a bitset mirror accelerates `has_edge`. The mirror is an
/// internal cache and takes no part in equality.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<u32>>,
    bits: Option<Vec<u64>>,
    words: usize,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}
impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

impl Graph {
    /// Builds a simple graph from an edge list. Duplicate edges collapse;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edge_list(n: usize, edges: &[(u32, u32)]) -> Result<Graph> {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidEdge(format!("self-loop at {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidEdge(format!(
                    "endpoint out of range: ({u},{v}) with n={n}"
                )));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_adj(adj))
    }

    /// n isolated vertices.
    pub fn empty(n: usize) -> Graph {
        Self::from_sorted_adj(vec![Vec::new(); n])
    }

    /// The complete graph K_n.
    pub fn complete(n: usize) -> Graph {
        let adj = (0..n as u32)
            .map(|u| (0..n as u32).filter(|&v| v != u).collect())
            .collect();
        Self::from_sorted_adj(adj)
    }

    pub(crate) fn from_sorted_adj(adj: Vec<Vec<u32>>) -> Graph {
        let n = adj.len();
        let (bits, words) = if n <= BITSET_LIMIT {
            let words = n.div_ceil(64);
            let mut bits = vec![0u64; n * words];
            for (u, list) in adj.iter().enumerate() {
                for &v in list {
                    bits[u * words + (v as usize) / 64] |= 1 << (v % 64);
                }
            }
            (Some(bits), words)
        } else {
            (None, 0)
        };
        Graph { n, adj, bits, words }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        match &self.bits {
            Some(bits) => {
                bits[u as usize * self.words + (v as usize) / 64] >> (v % 64) & 1 == 1
            }
            None => self.adj[u as usize].binary_search(&v).is_ok(),
        }
    }

    /// All edges as (u, v) with u < v, in lexicographic order.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n as u32 {
            for &v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Subgraph induced by `vertices` (sorted, deduplicated internally).
    /// Vertex i of the result corresponds to `vertices[i]` of `self`.
    pub fn induced(&self, vertices: &[u32]) -> InducedSubgraph {
        let mut verts: Vec<u32> = vertices.to_vec();
        verts.sort_unstable();
        verts.dedup();
        let mut index = vec![u32::MAX; self.n];
        for (i, &v) in verts.iter().enumerate() {
            index[v as usize] = i as u32;
        }
        let adj = verts
            .iter()
            .map(|&v| {
                self.neighbors(v)
                    .iter()
                    .filter(|&&w| index[w as usize] != u32::MAX)
                    .map(|&w| index[w as usize])
                    .collect()
            })
            .collect();
        InducedSubgraph {
            graph: Graph::from_sorted_adj(adj),
            vertices: verts,
        }
    }

    /// Two-coloring by BFS if the graph is bipartite, `None` otherwise.
    /// Colors are assigned per connected component, least vertex first.
    pub fn two_coloring(&self) -> Option<Vec<Side>> {
        let mut side = vec![None; self.n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..self.n as u32 {
            if side[s as usize].is_some() {
                continue;
            }
            side[s as usize] = Some(Side::Left);
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                let opposite = side[u as usize].unwrap().flip();
                for &v in self.neighbors(u) {
                    match side[v as usize] {
                        None => {
                            side[v as usize] = Some(opposite);
                            queue.push_back(v);
                        }
                        Some(c) if c != opposite => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }

    /// Checks the simplicity invariants (sorted symmetric adjacency, no
    /// loops). Constructors maintain these; exposed for tests and decoders.
    pub fn check_invariants(&self) -> Result<()> {
        for u in 0..self.n as u32 {
            let list = self.neighbors(u);
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidEdge(format!("adjacency of {u} not strictly sorted")));
            }
            for &v in list {
                if v == u {
                    return Err(Error::InvalidEdge(format!("self-loop at {u}")));
                }
                if self.adj[v as usize].binary_search(&u).is_err() {
                    return Err(Error::InvalidEdge(format!("asymmetric edge ({u},{v})")));
                }
            }
        }
        Ok(())
    }
}

/// A vertex-subset view: the induced graph plus the original vertex ids.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `graph` vertex `i` is `vertices[i]` in the parent graph.
    pub vertices: Vec<u32>,
}

impl InducedSubgraph {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Side of a bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
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

/// A per-vertex Left/Right labeling certified against a graph: every edge
/// joins Left to Right.
#[derive(Clone, Debug)]
pub struct BipartitionTag {
    sides: Vec<Side>,
}

impl BipartitionTag {
    pub fn new(g: &Graph, sides: Vec<Side>) -> Result<BipartitionTag> {
        if sides.len() != g.vertex_count() {
            return Err(Error::InvalidVertex(format!(
                "bipartition labels {} vertices, graph has {}",
                sides.len(),
                g.vertex_count()
            )));
        }
        for (u, v) in g.edges() {
            if sides[u as usize] == sides[v as usize] {
                return Err(Error::InvalidEdge(format!(
                    "edge ({u},{v}) stays on one side"
                )));
            }
        }
        Ok(BipartitionTag { sides })
    }

    /// Derives a tag from BFS two-coloring; fails on odd cycles.
    pub fn from_graph(g: &Graph) -> Result<BipartitionTag> {
        let sides = g
            .two_coloring()
            .ok_or_else(|| Error::Precondition("graph is not bipartite".into()))?;
        Ok(BipartitionTag { sides })
    }

    pub fn side(&self, v: u32) -> Side {
        self.sides[v as usize]
    }

    pub fn vertices_on(&self, side: Side) -> Vec<u32> {
        (0..self.sides.len() as u32)
            .filter(|&v| self.sides[v as usize] == side)
            .collect()
    }
}

/// A graph with a distinguished root and its BFS layers.
#[derive(Clone, Debug)]
pub struct LayeredGraph {
    pub base: Graph,
    pub root: u32,
    /// `layers[j]` is the set of vertices at distance j from the root,
    /// ascending within each layer.
    pub layers: Vec<Vec<u32>>,
    /// Per-vertex layer index; `None` when unreachable from the root.
    pub layer_of: Vec<Option<u32>>,
}

impl LayeredGraph {
    pub fn depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn layer(&self, j: usize) -> &[u32] {
        &self.layers[j]
    }

    /// Parents of `v`: neighbors one layer closer to the root.
    pub fn parents(&self, v: u32) -> Vec<u32> {
        match self.layer_of[v as usize] {
            Some(j) if j > 0 => self
                .base
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| self.layer_of[u as usize] == Some(j - 1))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Children of `v`: neighbors one layer further from the root.
    pub fn children(&self, v: u32) -> Vec<u32> {
        match self.layer_of[v as usize] {
            Some(j) => self
                .base
                .neighbors(v)
                .iter()
                .copied()
                .filter(|&u| self.layer_of[u as usize] == Some(j + 1))
                .collect(),
            None => Vec::new(),
        }
    }
}

/// BFS layering from `root`. Unreached vertices are flagged, not dropped.
pub fn bfs_layers(g: &Graph, root: u32) -> Result<LayeredGraph> {
    if root as usize >= g.vertex_count() {
        return Err(Error::InvalidVertex(format!(
            "root {root} out of range (n={})",
            g.vertex_count()
        )));
    }
    let mut layer_of: Vec<Option<u32>> = vec![None; g.vertex_count()];
    let mut layers: Vec<Vec<u32>> = vec![vec![root]];
    layer_of[root as usize] = Some(0);
    loop {
        let mut next = Vec::new();
        let depth = layers.len() as u32;
        for &u in layers.last().unwrap() {
            for &v in g.neighbors(u) {
                if layer_of[v as usize].is_none() {
                    layer_of[v as usize] = Some(depth);
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        layers.push(next);
    }
    Ok(LayeredGraph {
        base: g.clone(),
        root,
        layers,
        layer_of,
    })
}

/// Exact degree statistics. Empty graphs report all zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub mean: Ratio<u64>,
}

pub fn degree_stats(g: &Graph) -> DegreeStats {
    if g.vertex_count() == 0 {
        return DegreeStats {
            min: 0,
            max: 0,
            mean: Ratio::from_integer(0),
        };
    }
    let degs: Vec<usize> = (0..g.vertex_count() as u32).map(|v| g.degree(v)).collect();
    DegreeStats {
        min: *degs.iter().min().unwrap(),
        max: *degs.iter().max().unwrap(),
        mean: Ratio::new(2 * g.edge_count() as u64, g.vertex_count() as u64),
    }
}

/// Reads the plain edge-list format: first line `n m`, then m lines `u v`,
/// whitespace-separated, 0-based.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut tokens = text.split_whitespace();
    let mut next_usize = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what}")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad {what}")))
    };
    let n = next_usize("vertex count")?;
    let m = next_usize("edge count")?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let u = next_usize("edge endpoint")? as u32;
        let v = next_usize("edge endpoint")? as u32;
        edges.push((u, v));
    }
    Graph::from_edge_list(n, &edges)
}

/// Writes the plain edge-list format accepted by [`parse_edge_list`].
pub fn format_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("{} {}\n", g.vertex_count(), edges.len());
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}
