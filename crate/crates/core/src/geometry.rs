//! The moment-curve point/line incidence construction over GF(q)^4.
//!
//! Points are all of GF(q)^4. For each direction v_z = (1, z, z^2, z^3) the
//! lines {x + y v_z : y in GF(q)} form a parallel class of q^3 lines
//! partitioning the points; over all q directions this gives q^4 lines. The
//! incidence graph joins each point to the q lines through it: a q-regular
//! bipartite graph on 2q^4 vertices with q^5 edges. Its 8-cycles pair up
//! parallel lines (opposite sides of every 8-cycle share a direction), which
//! is what makes the graph Θ_{3,5,5}-free.

use crate::cycles::enumerate_cycles;
use crate::detect::{detect_theta, DetectMode, Embedding, SearchStatus};
use crate::field::{make_field, moment_curve, vec4_add, vec4_scale, Field, Vec4};
use crate::graph::{BipartitionTag, Graph, Side};
use crate::theta::{validate_spec, ThetaSpec};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Size guard: 2q^4 vertices.
pub const MAX_CONSTRUCTION_Q: u64 = 16;

/// A line in canonical form: direction index z and the unique base point of
/// the line with first coordinate 0 (v_z has first coordinate 1, so every
/// line meets the hyperplane x0 = 0 exactly once).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Line {
    pub z: u64,
    pub base: Vec4,
}

/// The bipartite point/line incidence graph of the construction, with the
/// tables mapping vertices back to coordinates.
pub struct IncidenceGraph {
    pub graph: Graph,
    pub bipartition: BipartitionTag,
    pub field: Field,
    q: u64,
}

impl IncidenceGraph {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn point_count(&self) -> usize {
        (self.q * self.q * self.q * self.q) as usize
    }

    pub fn line_count(&self) -> usize {
        self.point_count()
    }

    pub fn is_point(&self, v: u32) -> bool {
        (v as usize) < self.point_count()
    }

    /// Vertex id of a point, by lexicographic coordinate rank.
    pub fn point_id(&self, x: Vec4) -> u32 {
        let q = self.q;
        (((x[0] * q + x[1]) * q + x[2]) * q + x[3]) as u32
    }

    pub fn point_coords(&self, v: u32) -> Vec4 {
        let q = self.q;
        let mut r = v as u64;
        let x3 = r % q;
        r /= q;
        let x2 = r % q;
        r /= q;
        let x1 = r % q;
        r /= q;
        [r, x1, x2, x3]
    }

    /// Vertex id of a canonical line, ordered by (z, base).
    pub fn line_id(&self, line: Line) -> u32 {
        let q = self.q;
        debug_assert_eq!(line.base[0], 0);
        (q * q * q * q + line.z * q * q * q + (line.base[1] * q + line.base[2]) * q + line.base[3])
            as u32
    }

    pub fn line_info(&self, v: u32) -> Line {
        let q = self.q;
        let mut r = v as u64 - q * q * q * q;
        let b3 = r % q;
        r /= q;
        let b2 = r % q;
        r /= q;
        let b1 = r % q;
        r /= q;
        Line {
            z: r,
            base: [0, b1, b2, b3],
        }
    }

    /// Direction (parallel class) of a line vertex.
    pub fn direction_of(&self, v: u32) -> u64 {
        self.line_info(v).z
    }

    /// Canonicalizes an arbitrary base point: shifts along v_z until the
    /// first coordinate is 0.
    pub fn canonical_line(&self, z: u64, through: Vec4) -> Line {
        let f = &self.field;
        let shift = vec4_scale(f, f.neg(through[0]), moment_curve(f, z));
        Line {
            z,
            base: vec4_add(f, through, shift),
        }
    }

    /// CSV vertex table: `vertex,kind,a,b,c,d` where a..d are point
    /// coordinates, or `vertex,kind,z,b1,b2,b3` for lines.
    pub fn vertex_table_csv(&self) -> String {
        let mut out = String::from("vertex,kind,c0,c1,c2,c3\n");
        for v in 0..self.graph.vertex_count() as u32 {
            if self.is_point(v) {
                let x = self.point_coords(v);
                out.push_str(&format!("{v},point,{},{},{},{}\n", x[0], x[1], x[2], x[3]));
            } else {
                let l = self.line_info(v);
                out.push_str(&format!(
                    "{v},line,{},{},{},{}\n",
                    l.z, l.base[1], l.base[2], l.base[3]
                ));
            }
        }
        out
    }
}

/// Builds the incidence graph G(q) for a prime power q <= 16.
pub fn build_incidence_graph(q: u64) -> Result<IncidenceGraph> {
    if q > MAX_CONSTRUCTION_Q {
        return Err(Error::SizeLimit(format!(
            "q = {q} exceeds construction limit {MAX_CONSTRUCTION_Q}"
        )));
    }
    let field = make_field(q)?;
    let points = q * q * q * q;
    let n = 2 * points;
    let point_id = |x: Vec4| (((x[0] * q + x[1]) * q + x[2]) * q + x[3]) as u32;
    let mut edges = Vec::with_capacity((q * points) as usize);
    let mut lid = points as u32;
    for z in 0..q {
        let dir = moment_curve(&field, z);
        for b1 in 0..q {
            for b2 in 0..q {
                for b3 in 0..q {
                    let base: Vec4 = [0, b1, b2, b3];
                    for y in 0..q {
                        let pt = vec4_add(&field, base, vec4_scale(&field, y, dir));
                        edges.push((point_id(pt), lid));
                    }
                    lid += 1;
                }
            }
        }
    }
    let graph = Graph::from_edge_list(n as usize, &edges)?;
    let sides = (0..n)
        .map(|v| if v < points { Side::Left } else { Side::Right })
        .collect();
    let bipartition = BipartitionTag::new(&graph, sides)?;
    Ok(IncidenceGraph {
        graph,
        bipartition,
        field,
        q,
    })
}

/// How to pick the 8-cycles checked by [`verify_c8_direction_pattern`].
#[derive(Clone, Copy, Debug)]
pub enum C8Mode {
    Exhaustive,
    Sample { seed: u64, count: u64 },
}

/// One offending 8-cycle, if the direction pattern ever failed.
#[derive(Clone, Debug, Serialize)]
pub struct C8Violation {
    pub cycle: Vec<u32>,
    pub directions: [u64; 4],
}

/// Report of the 8-cycle direction check.
#[derive(Clone, Debug, Serialize)]
pub struct C8Report {
    pub q: u64,
    pub mode: String,
    pub checked: u64,
    pub violation_count: u64,
    /// At most 16 violations are retained.
    pub violations: Vec<C8Violation>,
}

impl C8Report {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// Checks that every 8-cycle p1 l1 p2 l2 p3 l3 p4 l4 has opposite lines
/// parallel and the two directions distinct (v1 = v3, v2 = v4, v1 != v2).
pub fn verify_c8_direction_pattern(g: &IncidenceGraph, mode: C8Mode) -> C8Report {
    let mut report = C8Report {
        q: g.q(),
        mode: match mode {
            C8Mode::Exhaustive => "exhaustive".into(),
            C8Mode::Sample { seed, count } => format!("sample(seed={seed},count={count})"),
        },
        checked: 0,
        violation_count: 0,
        violations: Vec::new(),
    };
    let check = |cycle: &[u32], report: &mut C8Report| {
        // canonical cycles start at their least vertex, which is a point,
        // so lines sit at the odd positions
        let dirs = [
            g.direction_of(cycle[1]),
            g.direction_of(cycle[3]),
            g.direction_of(cycle[5]),
            g.direction_of(cycle[7]),
        ];
        report.checked += 1;
        if !(dirs[0] == dirs[2] && dirs[1] == dirs[3] && dirs[0] != dirs[1]) {
            report.violation_count += 1;
            if report.violations.len() < 16 {
                report.violations.push(C8Violation {
                    cycle: cycle.to_vec(),
                    directions: dirs,
                });
            }
        }
    };
    match mode {
        C8Mode::Exhaustive => {
            let list = enumerate_cycles(&g.graph, 8).expect("length 8 is valid");
            for cycle in &list.cycles {
                check(cycle, &mut report);
            }
        }
        C8Mode::Sample { seed, count } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut attempts = 0u64;
            let max_attempts = count.saturating_mul(10_000);
            while report.checked < count && attempts < max_attempts {
                attempts += 1;
                let start = rng.gen_range(0..g.point_count() as u32);
                if let Some(cycle) = random_8_cycle(g, start, &mut rng) {
                    check(&cycle, &mut report);
                }
            }
        }
    }
    report
}

/// One random alternating closed walk attempt; `Some` iff it closes into a
/// simple 8-cycle, returned in canonical orientation.
fn random_8_cycle(g: &IncidenceGraph, start: u32, rng: &mut ChaCha8Rng) -> Option<Vec<u32>> {
    let mut cycle = vec![start];
    for _ in 1..8 {
        let last = *cycle.last().unwrap();
        let nbrs = g.graph.neighbors(last);
        let w = nbrs[rng.gen_range(0..nbrs.len())];
        if cycle.contains(&w) {
            return None;
        }
        cycle.push(w);
    }
    if !g.graph.has_edge(*cycle.last().unwrap(), start) {
        return None;
    }
    // rotate to least vertex and orient canonically
    let min_pos = (0..8).min_by_key(|&i| cycle[i]).unwrap();
    cycle.rotate_left(min_pos);
    if cycle[1] > cycle[7] {
        cycle[1..].reverse();
    }
    Some(cycle)
}

/// Freeness verdict for G(q) against Θ_{3,5,5}.
#[derive(Clone, Debug, Serialize)]
pub struct FreenessReport {
    pub q: u64,
    pub vertices: usize,
    pub edges: usize,
    pub spec: String,
    /// "free (exhausted)", "no copy found (budget)", or "copy found".
    pub status: String,
    pub expansions: u64,
    pub budget: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Embedding>,
}

impl FreenessReport {
    pub fn certified_free(&self) -> bool {
        self.status == "free (exhausted)"
    }
}

/// Runs the theta search on G(q) and reports the outcome.
pub fn freeness_certificate(q: u64, budget: u64) -> Result<FreenessReport> {
    let spec: ThetaSpec = validate_spec(&[3, 5, 5])?;
    let g = build_incidence_graph(q)?;
    let det = detect_theta(&g.graph, &spec, DetectMode::First, budget)?;
    let status = if det.count > 0 {
        "copy found".to_string()
    } else {
        match det.status {
            SearchStatus::Exhausted => "free (exhausted)".to_string(),
            SearchStatus::BudgetExceeded => "no copy found (budget)".to_string(),
        }
    };
    Ok(FreenessReport {
        q,
        vertices: g.graph.vertex_count(),
        edges: g.graph.edge_count(),
        spec: spec.to_string(),
        status,
        expansions: det.expansions,
        budget,
        counterexample: det.embeddings.into_iter().next(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::degree_stats;

    #[test]
    fn g2_counts() {
        let g = build_incidence_graph(2).unwrap();
        assert_eq!(g.point_count(), 16);
        assert_eq!(g.line_count(), 16);
        assert_eq!(g.graph.vertex_count(), 32);
        assert_eq!(g.graph.edge_count(), 32);
        let s = degree_stats(&g.graph);
        assert_eq!((s.min, s.max), (2, 2));
    }

    #[test]
    fn g3_counts_and_regularity() {
        let g = build_incidence_graph(3).unwrap();
        assert_eq!(g.graph.vertex_count(), 162);
        assert_eq!(g.graph.edge_count(), 243);
        let s = degree_stats(&g.graph);
        assert_eq!((s.min, s.max), (3, 3));
    }

    #[test]
    fn g4_exercises_prime_power_branch() {
        let g = build_incidence_graph(4).unwrap();
        assert_eq!(g.graph.vertex_count(), 512);
        assert_eq!(g.graph.edge_count(), 1024);
        let s = degree_stats(&g.graph);
        assert_eq!((s.min, s.max), (4, 4));
    }

    #[test]
    fn size_guard() {
        assert!(matches!(build_incidence_graph(17), Err(_)));
        assert!(matches!(build_incidence_graph(6), Err(Error::NotPrimePower(6))));
    }

    #[test]
    fn parallel_classes_partition_points() {
        let g = build_incidence_graph(3).unwrap();
        let q = 3u64;
        for z in 0..q {
            let mut covered = vec![false; g.point_count()];
            for b1 in 0..q {
                for b2 in 0..q {
                    for b3 in 0..q {
                        let lid = g.line_id(Line { z, base: [0, b1, b2, b3] });
                        for &p in g.graph.neighbors(lid) {
                            assert!(!covered[p as usize], "point on two parallel lines");
                            covered[p as usize] = true;
                        }
                    }
                }
            }
            assert!(covered.iter().all(|&c| c), "class z={z} misses points");
        }
    }

    #[test]
    fn distinct_directions_meet_at_most_once() {
        let g = build_incidence_graph(3).unwrap();
        let lines: Vec<u32> = (g.point_count() as u32..g.graph.vertex_count() as u32).collect();
        for (i, &l1) in lines.iter().enumerate() {
            for &l2 in &lines[i + 1..] {
                if g.direction_of(l1) == g.direction_of(l2) {
                    continue;
                }
                let shared = g
                    .graph
                    .neighbors(l1)
                    .iter()
                    .filter(|p| g.graph.neighbors(l2).binary_search(p).is_ok())
                    .count();
                assert!(shared <= 1, "lines {l1},{l2} share {shared} points");
            }
        }
    }

    #[test]
    fn hand_built_parallelogram_has_pattern() {
        // lines of directions 0 and 1 in GF(3)^4 forming a parallelogram
        let g = build_incidence_graph(3).unwrap();
        let f = &g.field;
        let v0 = moment_curve(f, 0);
        let v1 = moment_curve(f, 1);
        let p1: Vec4 = [0, 0, 0, 0];
        let p2 = vec4_add(f, p1, v0); // along direction 0
        let p3 = vec4_add(f, p2, v1); // along direction 1
        let p4 = vec4_add(f, p1, v1);
        let l1 = g.line_id(g.canonical_line(0, p1)); // p1 - p2
        let l2 = g.line_id(g.canonical_line(1, p2)); // p2 - p3
        let l3 = g.line_id(g.canonical_line(0, p4)); // p3 - p4 (parallel to l1)
        let l4 = g.line_id(g.canonical_line(1, p1)); // p4 - p1 (parallel to l2)
        let cycle = [
            g.point_id(p1),
            l1,
            g.point_id(p2),
            l2,
            g.point_id(p3),
            l3,
            g.point_id(p4),
            l4,
        ];
        // all eight incidences present
        for i in 0..8 {
            assert!(g.graph.has_edge(cycle[i], cycle[(i + 1) % 8]));
        }
        assert_eq!(g.direction_of(l1), g.direction_of(l3));
        assert_eq!(g.direction_of(l2), g.direction_of(l4));
        assert_ne!(g.direction_of(l1), g.direction_of(l2));
    }

    #[test]
    fn c8_pattern_q2_exhaustive() {
        let g = build_incidence_graph(2).unwrap();
        let report = verify_c8_direction_pattern(&g, C8Mode::Exhaustive);
        assert_eq!(report.checked, 4, "G(2) splits into four 8-cycles");
        assert!(report.passed());
    }

    #[test]
    fn c8_sample_mode_is_deterministic() {
        let g = build_incidence_graph(3).unwrap();
        let r1 = verify_c8_direction_pattern(&g, C8Mode::Sample { seed: 7, count: 25 });
        let r2 = verify_c8_direction_pattern(&g, C8Mode::Sample { seed: 7, count: 25 });
        assert_eq!(r1.checked, r2.checked);
        assert!(r1.passed());
        assert!(r1.checked > 0);
    }

    #[test]
    fn freeness_q2() {
        let report = freeness_certificate(2, 10_000_000).unwrap();
        assert!(report.certified_free(), "status: {}", report.status);
    }
}
