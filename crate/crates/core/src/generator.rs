//! Random graph families `G(n; c)` and `B(n/2, n/2; c)`.
//!
//! Two construction methods are provided. The direct method flips one biased
//! coin per candidate edge in lexicographic order. The counted method first
//! draws the edge count from the normal approximation of `Bin(N, p)` and then
//! samples that many distinct candidate indices by rejection.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, NodeId};
use crate::rng::SeededRng;

/// Above this node count [`Method::Auto`] switches to the counted method.
pub const DEFAULT_COUNTED_THRESHOLD: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    General,
    Bipartite,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::General => "general",
            FamilyKind::Bipartite => "bipartite",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(FamilyKind::General),
            "bipartite" => Ok(FamilyKind::Bipartite),
            other => Err(Error::Input(format!(
                "unknown graph family {other:?} (expected general or bipartite)"
            ))),
        }
    }
}

/// A random graph family with `n` nodes and expected degree `c`.
///
/// Bipartite graphs use nodes `0..n/2` as the left side and `n/2..n` as the
/// right side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphFamily {
    kind: FamilyKind,
    n: usize,
    c: f64,
}

impl GraphFamily {
    pub fn new(kind: FamilyKind, n: usize, c: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Input(format!("need at least 2 nodes, got {n}")));
        }
        if n > u32::MAX as usize / 2 {
            return Err(Error::Input(format!("node count {n} too large")));
        }
        if kind == FamilyKind::Bipartite && !n.is_multiple_of(2) {
            return Err(Error::Input(format!(
                "bipartite graphs need an even node count, got {n}"
            )));
        }
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::Input(format!("expected degree must be >= 0, got {c}")));
        }
        let fam = GraphFamily { kind, n, c };
        if fam.edge_probability() > 1.0 {
            return Err(Error::Input(format!(
                "expected degree {c} is too large for {n} nodes"
            )));
        }
        Ok(fam)
    }

    pub fn general(n: usize, c: f64) -> Result<Self> {
        GraphFamily::new(FamilyKind::General, n, c)
    }

    pub fn bipartite(n: usize, c: f64) -> Result<Self> {
        GraphFamily::new(FamilyKind::Bipartite, n, c)
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn nodes(&self) -> usize {
        self.n
    }

    pub fn expected_degree(&self) -> f64 {
        self.c
    }

    /// Size of the left side for bipartite families.
    pub fn left_size(&self) -> Option<usize> {
        (self.kind == FamilyKind::Bipartite).then_some(self.n / 2)
    }

    /// Number of candidate edges `N`.
    pub fn candidate_count(&self) -> u64 {
        let n = self.n as u64;
        match self.kind {
            FamilyKind::General => n * (n - 1) / 2,
            FamilyKind::Bipartite => (n / 2) * (n / 2),
        }
    }

    /// Per-candidate edge probability `p`.
    pub fn edge_probability(&self) -> f64 {
        match self.kind {
            FamilyKind::General => self.c / (self.n - 1) as f64,
            FamilyKind::Bipartite => 2.0 * self.c / self.n as f64,
        }
    }

    /// Index of candidate edge `{u, v}` in `0..N`.
    pub fn encode(&self, u: NodeId, v: NodeId) -> Result<u64> {
        let n = self.n as u64;
        let (a, b) = (u.min(v) as u64, u.max(v) as u64);
        if a == b || b >= n {
            return Err(Error::Input(format!("{{{u}, {v}}} is not a candidate edge")));
        }
        match self.kind {
            FamilyKind::General => Ok(row_start(n, a) + (b - a - 1)),
            FamilyKind::Bipartite => {
                let half = n / 2;
                if a >= half || b < half {
                    return Err(Error::Input(format!(
                        "{{{u}, {v}}} does not cross the bipartition"
                    )));
                }
                Ok(a * half + (b - half))
            }
        }
    }

    /// Inverse of [`encode`](Self::encode); returns `(u, v)` with `u < v`.
    pub fn decode(&self, index: u64) -> (NodeId, NodeId) {
        let n = self.n as u64;
        debug_assert!(index < self.candidate_count());
        match self.kind {
            FamilyKind::General => {
                // Row u starts at u(2n - u - 1)/2; invert the quadratic, then fix rounding.
                let m = (2 * n - 1) as f64;
                let approx = ((m - (m * m - 8.0 * index as f64).max(0.0).sqrt()) / 2.0).floor();
                let mut u = (approx.max(0.0) as u64).min(n - 2);
                while u > 0 && row_start(n, u) > index {
                    u -= 1;
                }
                while u + 1 < n - 1 && row_start(n, u + 1) <= index {
                    u += 1;
                }
                let v = u + 1 + (index - row_start(n, u));
                (u as NodeId, v as NodeId)
            }
            FamilyKind::Bipartite => {
                let half = n / 2;
                ((index / half) as NodeId, (half + index % half) as NodeId)
            }
        }
    }
}

fn row_start(n: u64, u: u64) -> u64 {
    u * (2 * n - u - 1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Counted,
    /// Direct up to `threshold` nodes, counted above.
    Auto { threshold: usize },
}

impl Default for Method {
    fn default() -> Self {
        Method::Auto {
            threshold: DEFAULT_COUNTED_THRESHOLD,
        }
    }
}

impl Method {
    pub fn resolve(self, n: usize) -> Method {
        match self {
            Method::Auto { threshold } if n > threshold => Method::Counted,
            Method::Auto { .. } => Method::Direct,
            m => m,
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "counted" => Ok(Method::Counted),
            "auto" => Ok(Method::default()),
            other => Err(Error::Input(format!(
                "unknown generation method {other:?} (expected direct, counted or auto)"
            ))),
        }
    }
}

pub fn generate(fam: &GraphFamily, rng: &mut SeededRng, method: Method) -> Result<DynamicGraph> {
    match method.resolve(fam.n) {
        Method::Counted => generate_counted(fam, rng),
        _ => generate_direct(fam, rng),
    }
}

/// Includes every candidate edge independently with probability `p`,
/// consuming one uniform real per candidate in lexicographic order.
pub fn generate_direct(fam: &GraphFamily, rng: &mut SeededRng) -> Result<DynamicGraph> {
    let p = fam.edge_probability();
    let n = fam.n as NodeId;
    let expected = (fam.candidate_count() as f64 * p) as usize;
    let mut edges = Vec::with_capacity(expected + expected / 8 + 16);
    match fam.kind {
        FamilyKind::General => {
            for u in 0..n {
                for v in u + 1..n {
                    if rng.next_f64() < p {
                        edges.push((u, v));
                    }
                }
            }
        }
        FamilyKind::Bipartite => {
            let half = n / 2;
            for u in 0..half {
                for v in half..n {
                    if rng.next_f64() < p {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    Ok(DynamicGraph::from_simple_edges(fam.n, &edges))
}

/// Draws `X ~ Bin(N, p)` (normal approximation) and then `X` distinct
/// candidate edges uniformly at random.
pub fn generate_counted(fam: &GraphFamily, rng: &mut SeededRng) -> Result<DynamicGraph> {
    let total = fam.candidate_count();
    let p = fam.edge_probability();
    let count = if p <= 0.0 {
        0
    } else if p >= 1.0 {
        total
    } else {
        rng.binomial_via_normal(total, p)?
    };
    generate_with_edge_count(fam, count, rng)
}

/// Samples exactly `count` distinct candidate edges by index rejection.
pub fn generate_with_edge_count(
    fam: &GraphFamily,
    count: u64,
    rng: &mut SeededRng,
) -> Result<DynamicGraph> {
    let total = fam.candidate_count();
    if count > total {
        return Err(Error::Input(format!(
            "cannot draw {count} distinct edges out of {total} candidates"
        )));
    }
    let mut seen = HashSet::with_capacity(count as usize);
    let mut edges = Vec::with_capacity(count as usize);
    while (edges.len() as u64) < count {
        let index = rng.uniform_below_u64(total)?;
        if seen.insert(index) {
            edges.push(fam.decode(index));
        }
    }
    Ok(DynamicGraph::from_simple_edges(fam.n, &edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let g = GraphFamily::general(100, 3.0).unwrap();
        assert_eq!(g.candidate_count(), 4950);
        assert!((g.edge_probability() - 3.0 / 99.0).abs() < 1e-15);
        let b = GraphFamily::bipartite(100, 3.0).unwrap();
        assert_eq!(b.candidate_count(), 2500);
        assert!((b.edge_probability() - 0.06).abs() < 1e-15);
        assert_eq!(b.left_size(), Some(50));
    }

    #[test]
    fn invalid_families() {
        assert!(matches!(GraphFamily::bipartite(11, 2.0), Err(Error::Input(_))));
        assert!(GraphFamily::general(1, 2.0).is_err());
        assert!(GraphFamily::general(10, -1.0).is_err());
        assert!(GraphFamily::general(10, f64::NAN).is_err());
        assert!(GraphFamily::general(3, 2.5).is_err());
    }

    #[test]
    fn zero_degree_gives_empty_graph() {
        let fam = GraphFamily::general(50, 0.0).unwrap();
        let mut rng = SeededRng::new(1);
        assert_eq!(generate_direct(&fam, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(generate_counted(&fam, &mut rng).unwrap().edge_count(), 0);
    }

    #[test]
    fn certain_edges_give_triangle() {
        let fam = GraphFamily::general(3, 2.0).unwrap();
        let g = generate_direct(&fam, &mut SeededRng::new(5)).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn zero_count_gives_empty_graph() {
        let fam = GraphFamily::bipartite(10, 1.0).unwrap();
        let g = generate_with_edge_count(&fam, 0, &mut SeededRng::new(0)).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.alive_count(), 10);
        assert!(generate_with_edge_count(&fam, 26, &mut SeededRng::new(0)).is_err());
    }

    #[test]
    fn encoding_is_a_bijection() {
        for n in [2usize, 3, 7, 50, 100] {
            let fam = GraphFamily::general(n, 0.0).unwrap();
            let mut next = 0;
            for u in 0..n as NodeId {
                for v in u + 1..n as NodeId {
                    let idx = fam.encode(u, v).unwrap();
                    assert_eq!(idx, next, "lexicographic index of ({u}, {v})");
                    assert_eq!(fam.decode(idx), (u, v));
                    next += 1;
                }
            }
            assert_eq!(next, fam.candidate_count());
        }
        for n in [2usize, 8, 100] {
            let fam = GraphFamily::bipartite(n, 0.0).unwrap();
            let half = (n / 2) as NodeId;
            let mut all: Vec<u64> = (0..half)
                .flat_map(|u| (half..2 * half).map(move |v| (u, v)))
                .map(|(u, v)| {
                    let idx = fam.encode(u, v).unwrap();
                    assert_eq!(fam.decode(idx), (u, v));
                    idx
                })
                .collect();
            all.sort_unstable();
            assert_eq!(all, (0..fam.candidate_count()).collect::<Vec<_>>());
            assert!(fam.encode(0, 1).is_err() || n == 2);
        }
    }

    #[test]
    fn decode_large_general_indices() {
        let fam = GraphFamily::general(1_000_000, 3.0).unwrap();
        let n = 1_000_000u32;
        for &(u, v) in &[(0, 1), (0, n - 1), (1, 2), (123_456, 654_321), (n - 2, n - 1)] {
            assert_eq!(fam.decode(fam.encode(u, v).unwrap()), (u, v));
        }
    }

    #[test]
    fn bipartite_graphs_cross_sides() {
        let fam = GraphFamily::bipartite(200, 4.0).unwrap();
        for g in [
            generate_direct(&fam, &mut SeededRng::new(3)).unwrap(),
            generate_counted(&fam, &mut SeededRng::new(3)).unwrap(),
        ] {
            g.check_invariants().unwrap();
            assert!(g.edges().all(|(u, v)| u < 100 && v >= 100));
        }
    }

    #[test]
    fn method_resolution() {
        assert_eq!(Method::default().resolve(10_000), Method::Direct);
        assert_eq!(Method::default().resolve(10_001), Method::Counted);
        assert_eq!(Method::Direct.resolve(1 << 20), Method::Direct);
        assert_eq!("counted".parse::<Method>().unwrap(), Method::Counted);
        assert!("exact".parse::<Method>().is_err());
    }
}
