//! Exact, budgeted detection of theta subgraphs.
//!
//! The searcher iterates over pole pairs (u,v) with dist(u,v) <= k1 and, for
//! each pair, backtracks over the paths in increasing length order. Each
//! path is enumerated meet-in-the-middle: half paths grow from both poles to
//! depth ceil(k/2) and join on a shared meet vertex. A global used-vertex
//! marker enforces internal disjointness. When two consecutive paths have
//! equal length, the second vertex of the later path is forced above the
//! second vertex of the earlier one, so each embedding is produced exactly
//! once up to pole swap and equal-length path permutation.
//!
//! Budgets are counted in node expansions (path-extension steps), a
//! deterministic unit independent of wall clock. A search that completes
//! within budget is exact: an empty result proves the host free.

use crate::graph::{Graph, Side};
use crate::theta::ThetaSpec;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// What the search should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetectMode {
    /// Stop at the first embedding (least pole pair wins).
    First,
    /// Count all canonical embeddings.
    Count,
    /// Collect all canonical embeddings.
    All,
}

/// Whether the search ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// The search space was exhausted; results are exact.
    Exhausted,
    /// The expansion budget ran out; results are a lower bound.
    BudgetExceeded,
}

/// An injective vertex map witnessing a theta subgraph.
///
/// `paths[i]` is the full vertex sequence of the i-th path, poles included,
/// with exactly `k_i` edges. Serializes to the certificate format
/// `{"poles":[u,v],"paths":[[...],[...]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub poles: (u32, u32),
    pub paths: Vec<Vec<u32>>,
}

/// Outcome of [`detect_theta`].
#[derive(Clone, Debug)]
pub struct Detection {
    pub status: SearchStatus,
    /// Node expansions consumed.
    pub expansions: u64,
    /// Found embeddings: at most one in `First` mode, all of them in `All`
    /// mode, empty in `Count` mode.
    pub embeddings: Vec<Embedding>,
    /// Number of canonical embeddings found (when counting or collecting).
    pub count: u64,
}

impl Detection {
    /// Freeness verdict: `Some(true)` = certified free, `Some(false)` =
    /// copy found, `None` = inconclusive (budget ran out with no copy).
    pub fn is_free(&self) -> Option<bool> {
        if self.count > 0 {
            Some(false)
        } else {
            match self.status {
                SearchStatus::Exhausted => Some(true),
                SearchStatus::BudgetExceeded => None,
            }
        }
    }
}

/// Independent checker for embeddings, straight from the definition.
/// Search code never calls this internally; it exists so certificates can
/// be re-verified without trusting the searcher.
pub fn verify_embedding(host: &Graph, spec: &ThetaSpec, emb: &Embedding) -> bool {
    let n = host.vertex_count() as u32;
    let (p, q) = emb.poles;
    if p >= n || q >= n || p == q {
        return false;
    }
    if emb.paths.len() != spec.path_count() {
        return false;
    }
    let mut seen_internal: Vec<u32> = Vec::new();
    for (path, &k) in emb.paths.iter().zip(spec.lengths()) {
        if path.len() != k as usize + 1 {
            return false;
        }
        if path[0] != p || *path.last().unwrap() != q {
            return false;
        }
        for w in path.windows(2) {
            if w[0] >= n || w[1] >= n || !host.has_edge(w[0], w[1]) {
                return false;
            }
        }
        // vertices distinct within the path
        let mut sorted = path.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        for &x in &path[1..path.len() - 1] {
            if x == p || x == q || seen_internal.contains(&x) {
                return false;
            }
            seen_internal.push(x);
        }
    }
    true
}

/// Decides whether `host` contains `Θ_spec`; see the module docs for the
/// search strategy and canonical-embedding semantics.
pub fn detect_theta(
    host: &Graph,
    spec: &ThetaSpec,
    mode: DetectMode,
    budget: u64,
) -> Result<Detection> {
    if budget == 0 {
        return Err(Error::Precondition("budget must be positive".into()));
    }
    let n = host.vertex_count();
    let mut out = Detection {
        status: SearchStatus::Exhausted,
        expansions: 0,
        embeddings: Vec::new(),
        count: 0,
    };
    if spec.vertex_count() > n {
        return Ok(out);
    }
    let sides = host.two_coloring();
    let k1 = spec.lengths()[0];
    let mut s = Searcher {
        host,
        ks: spec.lengths(),
        mode,
        budget,
        expansions: 0,
        used: vec![false; n],
        paths: Vec::with_capacity(spec.path_count()),
        found: Vec::new(),
        count: 0,
        dist: vec![u32::MAX; n],
        touched: Vec::new(),
    };
    let mut hit_budget = false;
    'poles: for u in 0..n as u32 {
        s.bounded_bfs(u, k1);
        for v in u + 1..n as u32 {
            if s.dist[v as usize] > k1 {
                continue;
            }
            if let Some(sides) = &sides {
                let same = sides[u as usize] == sides[v as usize];
                if same != (k1 % 2 == 0) {
                    continue;
                }
            }
            s.used[u as usize] = true;
            s.used[v as usize] = true;
            let flow = s.assign_path(u, v, 0, 0);
            s.used[u as usize] = false;
            s.used[v as usize] = false;
            match flow {
                Flow::Continue => {}
                Flow::StopFound => break 'poles,
                Flow::StopBudget => {
                    hit_budget = true;
                    break 'poles;
                }
            }
        }
    }
    out.status = if hit_budget {
        SearchStatus::BudgetExceeded
    } else {
        SearchStatus::Exhausted
    };
    out.expansions = s.expansions;
    out.embeddings = s.found;
    out.count = s.count;
    Ok(out)
}

enum Flow {
    Continue,
    StopFound,
    StopBudget,
}

struct Searcher<'a> {
    host: &'a Graph,
    ks: &'a [u32],
    mode: DetectMode,
    budget: u64,
    expansions: u64,
    used: Vec<bool>,
    paths: Vec<Vec<u32>>,
    found: Vec<Embedding>,
    count: u64,
    dist: Vec<u32>,
    touched: Vec<u32>,
}

impl<'a> Searcher<'a> {
    /// BFS distances from `src` out to `radius`, resetting only the entries
    /// touched by the previous call.
    fn bounded_bfs(&mut self, src: u32, radius: u32) {
        for &v in &self.touched {
            self.dist[v as usize] = u32::MAX;
        }
        self.touched.clear();
        self.dist[src as usize] = 0;
        self.touched.push(src);
        let mut frontier = vec![src];
        let mut d = 0;
        while d < radius && !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for &u in &frontier {
                for &v in self.host.neighbors(u) {
                    if self.dist[v as usize] == u32::MAX {
                        self.dist[v as usize] = d;
                        self.touched.push(v);
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
    }

    fn spend(&mut self) -> bool {
        self.expansions += 1;
        self.expansions > self.budget
    }

    /// Backtracks over path `i` between the poles.
    fn assign_path(&mut self, u: u32, v: u32, i: usize, min_second: u32) -> Flow {
        let k = self.ks[i];
        // lower bound on the second vertex, for equal-length symmetry pruning
        let bound = if i > 0 && self.ks[i - 1] == k {
            min_second
        } else {
            0
        };
        self.for_each_path(u, v, k, bound, i)
    }

    /// Enumerates simple u-v paths with k edges avoiding used vertices,
    /// meet-in-the-middle; on each, recurses into the next path or records
    /// the embedding.
    fn for_each_path(&mut self, u: u32, v: u32, k: u32, min_second: u32, i: usize) -> Flow {
        if k == 1 {
            if self.spend() {
                return Flow::StopBudget;
            }
            if self.host.has_edge(u, v) && v >= min_second {
                return self.complete_path(u, v, i, vec![u, v]);
            }
            return Flow::Continue;
        }
        let a = k.div_ceil(2);
        let b = k - a;
        // Half paths from v: [v, y1, ..., yb], internals unused.
        let mut halves: Vec<Vec<u32>> = Vec::new();
        let mut by_meet: HashMap<u32, Vec<usize>> = HashMap::new();
        let mut stack: Vec<u32> = vec![v];
        if self.grow_from_pole(&mut stack, b, &mut |half| {
            by_meet
                .entry(*half.last().unwrap())
                .or_default()
                .push(halves.len());
            halves.push(half.to_vec());
        }) {
            return Flow::StopBudget;
        }
        if halves.is_empty() {
            return Flow::Continue;
        }
        // Half paths from u joined against the map.
        let mut path: Vec<u32> = Vec::with_capacity(k as usize + 1);
        path.push(u);
        self.join_from_pole(&mut path, a, min_second, &halves, &by_meet, i)
    }

    /// DFS all half paths of exactly `depth` edges from the pole at
    /// `stack[0]`, avoiding used vertices. Returns true on budget overrun.
    fn grow_from_pole(
        &mut self,
        stack: &mut Vec<u32>,
        depth: u32,
        emit: &mut dyn FnMut(&[u32]),
    ) -> bool {
        if stack.len() as u32 == depth + 1 {
            emit(stack);
            return false;
        }
        let last = *stack.last().unwrap();
        for idx in 0..self.host.neighbors(last).len() {
            let w = self.host.neighbors(last)[idx];
            if self.used[w as usize] || stack.contains(&w) {
                continue;
            }
            if self.spend() {
                return true;
            }
            stack.push(w);
            let over = self.grow_from_pole(stack, depth, emit);
            stack.pop();
            if over {
                return true;
            }
        }
        false
    }

    /// DFS half paths from pole u; at full depth, join with the v-side
    /// halves meeting at the same vertex.
    fn join_from_pole(
        &mut self,
        path: &mut Vec<u32>,
        depth: u32,
        min_second: u32,
        halves: &[Vec<u32>],
        by_meet: &HashMap<u32, Vec<usize>>,
        i: usize,
    ) -> Flow {
        if path.len() as u32 == depth + 1 {
            let meet = *path.last().unwrap();
            let Some(candidates) = by_meet.get(&meet) else {
                return Flow::Continue;
            };
            for &h in candidates {
                let half = &halves[h];
                // internals of both halves must be disjoint (meet shared)
                let u_internal = &path[1..path.len() - 1];
                let v_internal = &half[1..half.len() - 1];
                if v_internal.iter().any(|y| u_internal.contains(y)) {
                    continue;
                }
                let mut full = path.clone();
                for &y in half[1..half.len() - 1].iter().rev() {
                    full.push(y);
                }
                full.push(half[0]);
                match self.complete_path(path[0], half[0], i, full) {
                    Flow::Continue => {}
                    stop => return stop,
                }
            }
            return Flow::Continue;
        }
        let last = *path.last().unwrap();
        for idx in 0..self.host.neighbors(last).len() {
            let w = self.host.neighbors(last)[idx];
            if path.len() == 1 && w < min_second {
                continue;
            }
            if self.used[w as usize] || path.contains(&w) {
                continue;
            }
            if self.spend() {
                return Flow::StopBudget;
            }
            path.push(w);
            let flow = self.join_from_pole(path, depth, min_second, halves, by_meet, i);
            path.pop();
            match flow {
                Flow::Continue => {}
                stop => return stop,
            }
        }
        Flow::Continue
    }

    /// A complete path for index `i` was found: recurse or record.
    fn complete_path(&mut self, u: u32, v: u32, i: usize, full: Vec<u32>) -> Flow {
        for &x in &full[1..full.len() - 1] {
            self.used[x as usize] = true;
        }
        self.paths.push(full);
        let flow = if self.paths.len() == self.ks.len() {
            self.record(u, v)
        } else {
            let second = self.paths.last().unwrap()[1];
            self.assign_path(u, v, i + 1, second + 1)
        };
        let full = self.paths.pop().unwrap();
        for &x in &full[1..full.len() - 1] {
            self.used[x as usize] = false;
        }
        flow
    }

    fn record(&mut self, u: u32, v: u32) -> Flow {
        self.count += 1;
        match self.mode {
            DetectMode::First => {
                self.found.push(Embedding {
                    poles: (u, v),
                    paths: self.paths.clone(),
                });
                Flow::StopFound
            }
            DetectMode::All => {
                self.found.push(Embedding {
                    poles: (u, v),
                    paths: self.paths.clone(),
                });
                Flow::Continue
            }
            DetectMode::Count => Flow::Continue,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{build_theta, validate_spec};

    fn c8() -> Graph {
        Graph::from_edge_list(8, &(0..8).map(|i| (i, (i + 1) % 8)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn finds_theta_in_itself() {
        let spec = validate_spec(&[3, 5, 5]).unwrap();
        let host = build_theta(&spec).graph;
        let det = detect_theta(&host, &spec, DetectMode::First, 1_000_000).unwrap();
        assert_eq!(det.is_free(), Some(false));
        assert!(verify_embedding(&host, &spec, &det.embeddings[0]));
    }

    #[test]
    fn k23_contains_theta222() {
        let spec = validate_spec(&[2, 2, 2]).unwrap();
        let host =
            Graph::from_edge_list(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
        let det = detect_theta(&host, &spec, DetectMode::First, 1_000_000).unwrap();
        assert_eq!(det.is_free(), Some(false));
        assert!(verify_embedding(&host, &spec, &det.embeddings[0]));
    }

    #[test]
    fn c8_decompositions() {
        let host = c8();
        for lens in [vec![4, 4], vec![2, 6]] {
            let spec = validate_spec(&lens).unwrap();
            let det = detect_theta(&host, &spec, DetectMode::First, 1_000_000).unwrap();
            assert_eq!(det.is_free(), Some(false), "C8 should contain {spec}");
            assert!(verify_embedding(&host, &spec, &det.embeddings[0]));
        }
        let spec = validate_spec(&[3, 5, 5]).unwrap();
        let det = detect_theta(&host, &spec, DetectMode::First, 1_000_000).unwrap();
        assert_eq!(det.is_free(), Some(true));
    }

    #[test]
    fn c8_counts_its_cycle_splits() {
        // C8 as Theta_{2,6}: poles are the 8 pairs at distance 2, one split each
        let det = detect_theta(
            &c8(),
            &validate_spec(&[2, 6]).unwrap(),
            DetectMode::Count,
            1_000_000,
        )
        .unwrap();
        assert_eq!(det.status, SearchStatus::Exhausted);
        assert_eq!(det.count, 8);
        // C8 as Theta_{4,4}: 4 antipodal pole pairs
        let det = detect_theta(
            &c8(),
            &validate_spec(&[4, 4]).unwrap(),
            DetectMode::Count,
            1_000_000,
        )
        .unwrap();
        assert_eq!(det.count, 4);
    }

    #[test]
    fn budget_exhaustion_is_inconclusive() {
        let spec = validate_spec(&[3, 5, 5]).unwrap();
        let host = build_theta(&validate_spec(&[5, 7, 7]).unwrap()).graph;
        let det = detect_theta(&host, &spec, DetectMode::First, 3).unwrap();
        assert_eq!(det.status, SearchStatus::BudgetExceeded);
        assert_eq!(det.is_free(), None);
    }

    #[test]
    fn zero_budget_rejected() {
        let spec = validate_spec(&[2, 2]).unwrap();
        assert!(detect_theta(&Graph::empty(4), &spec, DetectMode::First, 0).is_err());
    }

    #[test]
    fn verify_rejects_corrupted_embeddings() {
        let spec = validate_spec(&[2, 2]).unwrap();
        let host = build_theta(&spec).graph; // C4 labeled 0-2-1-3-0
        let good = Embedding {
            poles: (0, 1),
            paths: vec![vec![0, 2, 1], vec![0, 3, 1]],
        };
        assert!(verify_embedding(&host, &spec, &good));
        let dup = Embedding {
            poles: (0, 1),
            paths: vec![vec![0, 2, 1], vec![0, 2, 1]],
        };
        assert!(!verify_embedding(&host, &spec, &dup));
        let wrong_len = Embedding {
            poles: (0, 1),
            paths: vec![vec![0, 2, 1], vec![0, 3, 2, 1]],
        };
        assert!(!verify_embedding(&host, &spec, &wrong_len));
        let non_edge = Embedding {
            poles: (0, 2),
            paths: vec![vec![0, 1, 2], vec![0, 3, 2]],
        };
        assert!(!verify_embedding(&host, &spec, &non_edge));
    }

    #[test]
    fn embedding_certificate_json_shape() {
        let emb = Embedding {
            poles: (0, 5),
            paths: vec![vec![0, 2, 5], vec![0, 3, 5]],
        };
        let json = serde_json::to_string(&emb).unwrap();
        assert_eq!(json, r#"{"poles":[0,5],"paths":[[0,2,5],[0,3,5]]}"#);
    }
}
