//! Theta specifications `Θ_{k1,…,kℓ}`, the k* statistic, bound exponents,
//! and explicit construction of theta graphs.

use crate::graph::Graph;
use crate::{Error, Result};
use num_rational::Ratio;

/// A validated multiset of path lengths defining `Θ_{k1,…,kℓ}`.
///
/// Invariants: lengths sorted ascending, all of one parity, the value 1 at
/// most once, and at least two paths. With exactly two paths the spec
/// denotes the cycle `C_{k1+k2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaSpec {
    lengths: Vec<u32>,
}

impl ThetaSpec {
    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn path_count(&self) -> usize {
        self.lengths.len()
    }

    /// Number of vertices of the theta graph: 2 + Σ(k_i − 1).
    pub fn vertex_count(&self) -> usize {
        2 + self.lengths.iter().map(|&k| k as usize - 1).sum::<usize>()
    }

    /// Number of edges of the theta graph: Σ k_i.
    pub fn edge_count(&self) -> usize {
        self.lengths.iter().map(|&k| k as usize).sum()
    }
}

impl std::fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for ThetaSpec {
    type Err = Error;

    /// Parses the CLI syntax "k1,k2,...,kl", e.g. "3,5,5".
    fn from_str(s: &str) -> Result<ThetaSpec> {
        let lengths: Vec<i64> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad path length {t:?}")))
            })
            .collect::<Result<_>>()?;
        validate_spec(&lengths)
    }
}

/// Validates and normalizes a list of path lengths.
pub fn validate_spec(lengths: &[i64]) -> Result<ThetaSpec> {
    if lengths.len() < 2 {
        return Err(Error::Spec(format!(
            "need at least 2 paths, got {}",
            lengths.len()
        )));
    }
    let mut out = Vec::with_capacity(lengths.len());
    for &k in lengths {
        if k <= 0 || k > u32::MAX as i64 {
            return Err(Error::Spec(format!("path length {k} not positive")));
        }
        out.push(k as u32);
    }
    out.sort_unstable();
    if out.iter().any(|&k| k % 2 != out[0] % 2) {
        return Err(Error::Parity(format!("lengths {out:?}")));
    }
    if out.iter().filter(|&&k| k == 1).count() > 1 {
        return Err(Error::Multiplicity);
    }
    Ok(ThetaSpec { lengths: out })
}

/// `k* = ½ min_{i<j}(k_i + k_j)`; always an integer by the parity invariant.
pub fn k_star(spec: &ThetaSpec) -> u32 {
    (spec.lengths[0] + spec.lengths[1]) / 2
}

/// The extremal bound exponent `1 + 1/k*`, exact.
pub fn upper_bound_exponent(spec: &ThetaSpec) -> Ratio<u64> {
    Ratio::from_integer(1) + Ratio::new(1, k_star(spec) as u64)
}

/// A theta graph together with its defining structure: poles and the `ℓ`
/// internally disjoint pole-to-pole paths.
#[derive(Clone, Debug)]
pub struct ThetaGraph {
    pub graph: Graph,
    pub poles: (u32, u32),
    /// Full vertex sequences pole-to-pole, one per spec length, spec order.
    pub paths: Vec<Vec<u32>>,
}

/// Builds `Θ_{k1,…,kℓ}` with deterministic labels: poles 0 and 1, then the
/// internal vertices of each path in spec order.
pub fn build_theta(spec: &ThetaSpec) -> ThetaGraph {
    let (p, q) = (0u32, 1u32);
    let mut next = 2u32;
    let mut edges = Vec::with_capacity(spec.edge_count());
    let mut paths = Vec::with_capacity(spec.path_count());
    for &k in spec.lengths() {
        let mut path = vec![p];
        for _ in 0..k - 1 {
            path.push(next);
            next += 1;
        }
        path.push(q);
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
        }
        paths.push(path);
    }
    let graph = Graph::from_edge_list(next as usize, &edges)
        .expect("theta construction yields a simple graph");
    ThetaGraph {
        graph,
        poles: (p, q),
        paths,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_sorts_and_accepts() {
        let spec = validate_spec(&[5, 3, 5]).unwrap();
        assert_eq!(spec.lengths(), &[3, 5, 5]);
    }

    #[test]
    fn mixed_parity_rejected() {
        assert!(matches!(validate_spec(&[3, 4]), Err(Error::Parity(_))));
    }

    #[test]
    fn double_one_rejected() {
        assert!(matches!(validate_spec(&[1, 1, 3]), Err(Error::Multiplicity)));
    }

    #[test]
    fn too_few_or_nonpositive_rejected() {
        assert!(matches!(validate_spec(&[4]), Err(Error::Spec(_))));
        assert!(matches!(validate_spec(&[0, 2]), Err(Error::Spec(_))));
        assert!(matches!(validate_spec(&[-2, 2]), Err(Error::Spec(_))));
    }

    #[test]
    fn k_star_values() {
        assert_eq!(k_star(&validate_spec(&[3, 5, 5]).unwrap()), 4);
        // (1,1) would be a parallel edge; valid cycle specs start at k = 2
        for k in 2..=10 {
            assert_eq!(k_star(&validate_spec(&[k, k]).unwrap()), k as u32);
        }
        assert_eq!(k_star(&validate_spec(&[2, 4, 6]).unwrap()), 3);
    }

    #[test]
    fn exponents() {
        assert_eq!(
            upper_bound_exponent(&validate_spec(&[3, 5, 5]).unwrap()),
            Ratio::new(5, 4)
        );
        assert_eq!(
            upper_bound_exponent(&validate_spec(&[2, 2]).unwrap()),
            Ratio::new(3, 2)
        );
        assert_eq!(
            upper_bound_exponent(&validate_spec(&[4, 4, 4]).unwrap()),
            Ratio::new(5, 4)
        );
    }

    #[test]
    fn build_c4_as_theta22() {
        let t = build_theta(&validate_spec(&[2, 2]).unwrap());
        assert_eq!(t.graph.vertex_count(), 4);
        assert_eq!(t.graph.edge_count(), 4);
    }

    #[test]
    fn build_theta_355_counts() {
        let t = build_theta(&validate_spec(&[3, 5, 5]).unwrap());
        assert_eq!(t.graph.vertex_count(), 12);
        assert_eq!(t.graph.edge_count(), 13);
    }

    #[test]
    fn build_k23_as_theta222() {
        let t = build_theta(&validate_spec(&[2, 2, 2]).unwrap());
        assert_eq!(t.graph.vertex_count(), 5);
        assert_eq!(t.graph.edge_count(), 6);
    }

    #[test]
    fn theta_with_length_one_path() {
        let t = build_theta(&validate_spec(&[1, 3]).unwrap());
        // C4 again: edge plus a 3-path between the poles
        assert_eq!(t.graph.vertex_count(), 4);
        assert_eq!(t.graph.edge_count(), 4);
        assert!(t.graph.has_edge(0, 1));
    }

    #[test]
    fn theta_graphs_are_bipartite() {
        for lens in [vec![2, 2], vec![3, 5, 5], vec![1, 3, 5], vec![4, 4, 4, 6]] {
            let spec = validate_spec(&lens).unwrap();
            let t = build_theta(&spec);
            assert!(
                t.graph.two_coloring().is_some(),
                "theta {spec} not bipartite"
            );
        }
    }
}
