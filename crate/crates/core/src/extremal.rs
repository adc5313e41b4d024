//! Extremal numbers for theta patterns: exact values at tiny n by
//! isomorph-free enumeration, certified lower bounds by randomized local
//! search, and the scaling table of the incidence construction.

use crate::canon::canonical_form;
use crate::detect::{detect_theta, DetectMode};
use crate::geometry::build_incidence_graph;
use crate::graph::Graph;
use crate::graph6::encode_graph6;
use crate::theta::{k_star, ThetaSpec};
use crate::{Error, Result};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// How an extremal value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exact maximum over all isomorphism classes.
    Exhaustive,
    /// Certified witness from local search; a lower bound only.
    Search,
}

/// An extremal value with its certified witness.
#[derive(Clone, Debug)]
pub struct ExtremalResult {
    pub n: usize,
    pub spec: ThetaSpec,
    pub max_edges: usize,
    pub witness: Graph,
    pub method: Method,
    pub seed: Option<u64>,
    pub budget: Option<u64>,
}

pub const MAX_EXACT_N: usize = 9;
pub const MAX_SEARCH_N: usize = 200;

const INNER_BUDGET: u64 = u64::MAX / 2;

/// Exact ex(n, theta) for n <= 9 by breadth-first enumeration of
/// isomorphism classes ordered by edge count, pruning any graph containing
/// the pattern; the canonical form deduplicates classes. When the pattern
/// has more vertices than the host, the complete graph is extremal.
pub fn ex_exhaustive(n: usize, spec: &ThetaSpec) -> Result<ExtremalResult> {
    if n > MAX_EXACT_N {
        return Err(Error::SizeLimit(format!(
            "exact search limited to n <= {MAX_EXACT_N}, got {n}"
        )));
    }
    if spec.vertex_count() > n {
        let witness = Graph::complete(n);
        certify_free(&witness, spec)?;
        return Ok(ExtremalResult {
            n,
            spec: spec.clone(),
            max_edges: n * n.saturating_sub(1) / 2,
            witness,
            method: Method::Exhaustive,
            seed: None,
            budget: None,
        });
    }
    let mut level: Vec<(String, Graph)> = vec![(
        encode_graph6(&Graph::empty(n)),
        Graph::empty(n),
    )];
    let mut best = level[0].clone();
    let mut edges = 0usize;
    loop {
        let mut next: std::collections::BTreeMap<String, Graph> = std::collections::BTreeMap::new();
        for (_, g) in &level {
            for u in 0..n as u32 {
                for v in u + 1..n as u32 {
                    if g.has_edge(u, v) {
                        continue;
                    }
                    let mut es = g.edges();
                    es.push((u, v));
                    let h = Graph::from_edge_list(n, &es)?;
                    let det = detect_theta(&h, spec, DetectMode::First, INNER_BUDGET)?;
                    debug_assert!(det.is_free().is_some(), "tiny hosts always exhaust");
                    if det.is_free() == Some(false) {
                        continue;
                    }
                    let canon = canonical_form(&h)?;
                    next.entry(encode_graph6(&canon)).or_insert(canon);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        edges += 1;
        level = next.into_iter().collect();
        best = level[0].clone();
    }
    certify_free(&best.1, spec)?;
    Ok(ExtremalResult {
        n,
        spec: spec.clone(),
        max_edges: edges,
        witness: best.1,
        method: Method::Exhaustive,
        seed: None,
        budget: None,
    })
}

fn certify_free(g: &Graph, spec: &ThetaSpec) -> Result<()> {
    let det = detect_theta(g, spec, DetectMode::First, INNER_BUDGET)?;
    if det.is_free() != Some(true) {
        return Err(Error::Precondition(
            "witness failed the freeness certificate".into(),
        ));
    }
    Ok(())
}

/// Randomized lower-bound search: hill climbing by single-edge additions,
/// reverting any addition that creates the pattern, with a fixed schedule
/// of random removals (every 37th attempt) to leave plateaus. The returned
/// witness is re-certified free before returning. Deterministic in
/// (budget, seed); `budget` counts move attempts.
pub fn ex_search_lower(
    n: usize,
    spec: &ThetaSpec,
    budget: u64,
    seed: u64,
) -> Result<ExtremalResult> {
    if n > MAX_SEARCH_N {
        return Err(Error::SizeLimit(format!(
            "search limited to n <= {MAX_SEARCH_N}, got {n}"
        )));
    }
    let done = |witness: Graph, max_edges: usize| ExtremalResult {
        n,
        spec: spec.clone(),
        max_edges,
        witness,
        method: Method::Search,
        seed: Some(seed),
        budget: Some(budget),
    };
    if spec.vertex_count() > n {
        let witness = Graph::complete(n);
        certify_free(&witness, spec)?;
        return Ok(done(witness, n * n.saturating_sub(1) / 2));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut best_edges: Vec<(u32, u32)> = Vec::new();
    let radius = 2 * *spec.lengths().last().unwrap();
    for attempt in 1..=budget {
        if attempt % 37 == 0 && !edges.is_empty() {
            let idx = rng.gen_range(0..edges.len());
            edges.swap_remove(idx);
            continue;
        }
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u == v || edges.contains(&(u.min(v), u.max(v))) {
            continue;
        }
        let e = (u.min(v), u.max(v));
        edges.push(e);
        let h = Graph::from_edge_list(n, &edges)?;
        if creates_theta(&h, spec, e, radius)? {
            edges.pop();
        } else if edges.len() > best_edges.len() {
            best_edges = edges.clone();
        }
    }
    let witness = Graph::from_edge_list(n, &best_edges)?;
    certify_free(&witness, spec)?;
    Ok(done(witness, best_edges.len()))
}

/// Exact check that some copy of the pattern goes through `e` in `h`,
/// where `h` minus `e` is known to be free: any copy lies within distance
/// 2*k_max of the new edge, so the search runs on that ball only.
fn creates_theta(h: &Graph, spec: &ThetaSpec, e: (u32, u32), radius: u32) -> Result<bool> {
    let mut dist = vec![u32::MAX; h.vertex_count()];
    let mut frontier = vec![e.0, e.1];
    dist[e.0 as usize] = 0;
    dist[e.1 as usize] = 0;
    let mut d = 0;
    while d < radius && !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &u in &frontier {
            for &w in h.neighbors(u) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d;
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    let ball: Vec<u32> = (0..h.vertex_count() as u32)
        .filter(|&v| dist[v as usize] != u32::MAX)
        .collect();
    let sub = h.induced(&ball);
    let det = detect_theta(&sub.graph, spec, DetectMode::First, INNER_BUDGET)?;
    Ok(det.is_free() == Some(false))
}

/// One row of the scaling table for the incidence construction.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingRow {
    pub q: u64,
    pub n: u64,
    pub edges: u64,
    /// (n/2)^(1 + 1/k*), exact (requires k* | 4).
    pub bound: u64,
    /// edges / bound as an exact fraction (numerator, denominator).
    pub ratio: (u64, u64),
}

/// Builds G(q) for each q and tabulates actual edge counts against the
/// bound value (n/2)^(1+1/k*). The ratio is exactly 1 for the (3,5,5)
/// family. Exact arithmetic needs k* to divide 4 (k* in {1, 2, 4}).
pub fn scaling_report(spec: &ThetaSpec, qs: &[u64]) -> Result<Vec<ScalingRow>> {
    let ks = k_star(spec) as u64;
    if 4 % ks != 0 {
        return Err(Error::Range(format!(
            "exact bound needs k* | 4; spec has k* = {ks}"
        )));
    }
    qs.iter()
        .map(|&q| {
            let g = build_incidence_graph(q)?;
            let n = g.graph.vertex_count() as u64;
            let edges = g.graph.edge_count() as u64;
            // (n/2)^(1+1/k*) = q^(4 + 4/k*)
            let bound = q.pow(4 + 4 / ks as u32);
            let ratio = Ratio::new(edges, bound);
            Ok(ScalingRow {
                q,
                n,
                edges,
                bound,
                ratio: (*ratio.numer(), *ratio.denom()),
            })
        })
        .collect()
}
