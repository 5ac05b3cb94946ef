//! Mutable sparse graph used by every reduction step.
//!
//! Nodes are tombstoned on deletion so ids stay stable; contraction appends
//! fresh ids after the original `0..n`. Alive nodes are kept in per-degree
//! buckets (swap-remove arrays with a position map) which makes bucket
//! membership updates and uniform sampling within a bucket O(1).

use std::cell::Cell;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::rng::SeededRng;

pub type NodeId = u32;

/// Snapshot of one degree-2 contraction, enough to lift a matching edge at
/// `merged` back onto `u`, `v1` and `v2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionRecord {
    pub u: NodeId,
    pub v1: NodeId,
    pub v2: NodeId,
    pub merged: NodeId,
    /// Neighbors of `v1` at contraction time without `u` and `v2`, sorted.
    pub n1: Vec<NodeId>,
    /// Neighbors of `v2` at contraction time without `u` and `v1`, sorted.
    pub n2: Vec<NodeId>,
}

impl ContractionRecord {
    pub fn v1_was_adjacent(&self, w: NodeId) -> bool {
        self.n1.binary_search(&w).is_ok()
    }

    pub fn v2_was_adjacent(&self, w: NodeId) -> bool {
        self.n2.binary_search(&w).is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct DynamicGraph {
    original_n: usize,
    adj: Vec<Vec<NodeId>>,
    alive: Vec<bool>,
    buckets: Vec<Vec<NodeId>>,
    bucket_pos: Vec<u32>,
    alive_count: usize,
    edge_count: usize,
    // Lower bound on the smallest non-empty positive-degree bucket.
    min_hint: Cell<usize>,
    // Upper bound on the largest non-empty bucket.
    max_hint: Cell<usize>,
}

impl DynamicGraph {
    /// Graph with `n` isolated nodes.
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize / 2, "node count {n} too large");
        DynamicGraph {
            original_n: n,
            adj: vec![Vec::new(); n],
            alive: vec![true; n],
            buckets: vec![(0..n as NodeId).collect()],
            bucket_pos: (0..n as u32).collect(),
            alive_count: n,
            edge_count: 0,
            min_hint: Cell::new(1),
            max_hint: Cell::new(0),
        }
    }

    /// Builds a simple graph; loops and repeated pairs are dropped.
    pub fn build(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut g = DynamicGraph::new(n);
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Input(format!(
                    "edge {{{u}, {v}}} has an endpoint outside 0..{n}"
                )));
            }
            if u != v && !g.has_edge(u, v) {
                g.add_edge(u, v);
            }
        }
        Ok(g)
    }

    /// Builds from pairs already known to be distinct, in range and loop-free.
    pub(crate) fn from_simple_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let mut degree = vec![0u32; n];
        for &(u, v) in edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut adj: Vec<Vec<NodeId>> = degree
            .iter()
            .map(|&d| Vec::with_capacity(d as usize))
            .collect();
        for &(u, v) in edges {
            debug_assert!(u != v);
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let max_degree = degree.iter().copied().max().unwrap_or(0) as usize;
        let mut buckets = vec![Vec::new(); max_degree + 1];
        let mut bucket_pos = vec![0u32; n];
        for (u, &d) in degree.iter().enumerate() {
            let bucket = &mut buckets[d as usize];
            bucket_pos[u] = bucket.len() as u32;
            bucket.push(u as NodeId);
        }
        DynamicGraph {
            original_n: n,
            adj,
            alive: vec![true; n],
            buckets,
            bucket_pos,
            alive_count: n,
            edge_count: edges.len(),
            min_hint: Cell::new(1),
            max_hint: Cell::new(max_degree),
        }
    }

    /// Number of nodes the graph was created with.
    pub fn original_node_count(&self) -> usize {
        self.original_n
    }

    /// One past the largest id ever handed out, contracted nodes included.
    pub fn node_bound(&self) -> usize {
        self.adj.len()
    }

    pub fn alive_count(&self) -> usize {
        self.alive_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn is_alive(&self, u: NodeId) -> bool {
        self.alive.get(u as usize).copied().unwrap_or(false)
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u as usize].len()
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u as usize]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        if !self.is_alive(u) || !self.is_alive(v) {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a as usize].contains(&b)
    }

    pub fn alive_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.adj.len() as NodeId).filter(move |&u| self.alive[u as usize])
    }

    /// Every edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.alive_nodes().flat_map(move |u| {
            self.adj[u as usize]
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        })
    }

    /// Alive nodes currently of degree `d`, in unspecified order.
    pub fn bucket(&self, d: usize) -> &[NodeId] {
        self.buckets.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Smallest `d >= 1` with an alive node of degree `d`; `None` without edges.
    pub fn min_positive_degree(&self) -> Option<usize> {
        if self.edge_count == 0 {
            return None;
        }
        let mut d = self.min_hint.get().max(1);
        while self.bucket(d).is_empty() {
            d += 1;
        }
        self.min_hint.set(d);
        Some(d)
    }

    pub fn max_degree(&self) -> usize {
        let mut d = self.max_hint.get().min(self.buckets.len().saturating_sub(1));
        while d > 0 && self.bucket(d).is_empty() {
            d -= 1;
        }
        self.max_hint.set(d);
        d
    }

    pub fn random_node_of_degree(&self, d: usize, rng: &mut SeededRng) -> Result<NodeId> {
        rng.choose(self.bucket(d))
            .ok_or_else(|| Error::Usage(format!("no alive node has degree {d}")))
    }

    fn check_alive(&self, u: NodeId) -> Result<()> {
        if self.is_alive(u) {
            Ok(())
        } else if (u as usize) < self.adj.len() {
            Err(Error::Usage(format!("node {u} has already been removed")))
        } else {
            Err(Error::Usage(format!("node {u} does not exist")))
        }
    }

    /// Removes `u` and all incident edges.
    pub fn delete_node(&mut self, u: NodeId) -> Result<()> {
        self.check_alive(u)?;
        let neighbors = std::mem::take(&mut self.adj[u as usize]);
        for &v in &neighbors {
            self.unlink(v, u);
        }
        self.edge_count -= neighbors.len();
        self.bucket_remove(u, neighbors.len());
        self.alive[u as usize] = false;
        self.alive_count -= 1;
        Ok(())
    }

    /// Contracts `u` (degree exactly 2) with its neighbors `v1`, `v2` into a
    /// fresh node, dropping the self-loops and parallel edges that result.
    pub fn contract_triple(
        &mut self,
        u: NodeId,
        v1: NodeId,
        v2: NodeId,
    ) -> Result<ContractionRecord> {
        self.check_alive(u)?;
        let nu = self.neighbors(u);
        let shape_ok = nu.len() == 2 && v1 != v2 && nu.contains(&v1) && nu.contains(&v2);
        if !shape_ok {
            return Err(Error::Usage(format!(
                "contract_triple({u}, {v1}, {v2}): node {u} must have exactly the neighbors {{{v1}, {v2}}}"
            )));
        }
        let snapshot = |x: NodeId, other: NodeId| {
            let mut s: Vec<NodeId> = self.adj[x as usize]
                .iter()
                .copied()
                .filter(|&w| w != u && w != other)
                .collect();
            s.sort_unstable();
            s
        };
        let n1 = snapshot(v1, v2);
        let n2 = snapshot(v2, v1);
        let mut union: Vec<NodeId> = n1.iter().chain(&n2).copied().collect();
        union.sort_unstable();
        union.dedup();

        self.delete_node(u)?;
        self.delete_node(v1)?;
        self.delete_node(v2)?;
        let merged = self.add_node();
        for &w in &union {
            self.add_edge(merged, w);
        }
        Ok(ContractionRecord {
            u,
            v1,
            v2,
            merged,
            n1,
            n2,
        })
    }

    fn add_node(&mut self) -> NodeId {
        let id = self.adj.len() as NodeId;
        self.adj.push(Vec::new());
        self.alive.push(true);
        self.bucket_pos.push(0);
        self.bucket_insert(id, 0);
        self.alive_count += 1;
        id
    }

    /// Caller guarantees `u != v`, both alive, edge absent.
    fn add_edge(&mut self, u: NodeId, v: NodeId) {
        for (a, b) in [(u, v), (v, u)] {
            let d = self.degree(a);
            self.adj[a as usize].push(b);
            self.bucket_move(a, d, d + 1);
        }
        self.edge_count += 1;
    }

    /// Drops `u` from the neighbor list of `v` and rebuckets `v`.
    fn unlink(&mut self, v: NodeId, u: NodeId) {
        let list = &mut self.adj[v as usize];
        let pos = list
            .iter()
            .position(|&x| x == u)
            .expect("adjacency must be symmetric");
        list.swap_remove(pos);
        let d = list.len();
        self.bucket_move(v, d + 1, d);
    }

    fn bucket_insert(&mut self, u: NodeId, d: usize) {
        if self.buckets.len() <= d {
            self.buckets.resize_with(d + 1, Vec::new);
        }
        self.bucket_pos[u as usize] = self.buckets[d].len() as u32;
        self.buckets[d].push(u);
        if d >= 1 && d < self.min_hint.get() {
            self.min_hint.set(d);
        }
        if d > self.max_hint.get() {
            self.max_hint.set(d);
        }
    }

    fn bucket_remove(&mut self, u: NodeId, d: usize) {
        let pos = self.bucket_pos[u as usize] as usize;
        let bucket = &mut self.buckets[d];
        debug_assert_eq!(bucket[pos], u);
        bucket.swap_remove(pos);
        if let Some(&moved) = bucket.get(pos) {
            self.bucket_pos[moved as usize] = pos as u32;
        }
    }

    fn bucket_move(&mut self, u: NodeId, from: usize, to: usize) {
        self.bucket_remove(u, from);
        self.bucket_insert(u, to);
    }

    /// Verifies every structural invariant; intended for tests.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Internal(msg));
        let mut alive = 0;
        let mut degree_sum = 0;
        for u in 0..self.adj.len() as NodeId {
            let list = &self.adj[u as usize];
            if !self.alive[u as usize] {
                if !list.is_empty() {
                    return fail(format!("dead node {u} still has neighbors"));
                }
                continue;
            }
            alive += 1;
            degree_sum += list.len();
            let mut sorted = list.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != list.len() {
                return fail(format!("node {u} has parallel edges"));
            }
            for &v in list {
                if v == u {
                    return fail(format!("node {u} has a self-loop"));
                }
                if !self.is_alive(v) || !self.adj[v as usize].contains(&u) {
                    return fail(format!("edge {{{u}, {v}}} is not symmetric"));
                }
            }
            let d = list.len();
            let pos = self.bucket_pos[u as usize] as usize;
            if self.bucket(d).get(pos) != Some(&u) {
                return fail(format!("node {u} missing from degree bucket {d}"));
            }
        }
        let bucketed: usize = self.buckets.iter().map(Vec::len).sum();
        if bucketed != alive || alive != self.alive_count {
            return fail(format!(
                "alive count {} / bucketed {bucketed} / counted {alive} disagree",
                self.alive_count
            ));
        }
        if degree_sum != 2 * self.edge_count {
            return fail(format!(
                "degree sum {degree_sum} != 2 * edge count {}",
                self.edge_count
            ));
        }
        Ok(())
    }

    /// Reads the `n m` header plus `m` lines of `u v` pairs.
    pub fn read_edge_list(reader: impl BufRead) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let parse_err = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
        let mut next_pair = |what: &str| -> Result<Option<(usize, u64, u64)>> {
            for (i, line) in lines.by_ref() {
                let line = line.map_err(|e| parse_err(i, e.to_string()))?;
                let mut tokens = line.split_whitespace();
                let Some(first) = tokens.next() else {
                    continue;
                };
                let second = tokens
                    .next()
                    .ok_or_else(|| parse_err(i, format!("expected two integers in {what}")))?;
                if tokens.next().is_some() {
                    return Err(parse_err(i, format!("trailing tokens in {what}")));
                }
                let a = first
                    .parse()
                    .map_err(|e| parse_err(i, format!("{what}: {first:?}: {e}")))?;
                let b = second
                    .parse()
                    .map_err(|e| parse_err(i, format!("{what}: {second:?}: {e}")))?;
                return Ok(Some((i, a, b)));
            }
            Ok(None)
        };
        let (_, n, m) = next_pair("header")?.ok_or_else(|| parse_err(0, "missing header".into()))?;
        let n = usize::try_from(n)
            .ok()
            .filter(|&n| n <= u32::MAX as usize / 2)
            .ok_or_else(|| parse_err(0, format!("node count {n} too large")))?;
        let mut edges = Vec::with_capacity(m.min(1 << 24) as usize);
        for k in 0..m {
            let (line, u, v) = next_pair("edge")?
                .ok_or_else(|| parse_err(0, format!("expected {m} edges, found {k}")))?;
            if u >= n as u64 || v >= n as u64 {
                return Err(parse_err(line, format!("endpoint out of range 0..{n}")));
            }
            edges.push((u as NodeId, v as NodeId));
        }
        if let Some((line, _, _)) = next_pair("edge")? {
            return Err(parse_err(line, format!("more than the declared {m} edges")));
        }
        DynamicGraph::build(n, edges)
    }

    pub fn write_edge_list(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.node_bound(), self.edge_count)?;
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        out.flush()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        DynamicGraph::read_edge_list(std::io::BufReader::new(file))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_edge_list(std::io::BufWriter::new(file))
            .map_err(|e| Error::io(path, e))
    }
}

/// A set of pairwise node-disjoint edges, stored as `(min, max)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<(NodeId, NodeId)>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut m = Matching::new();
        for (u, v) in edges {
            m.push(u, v);
        }
        m
    }

    pub fn push(&mut self, u: NodeId, v: NodeId) {
        self.edges.push((u.min(v), u.max(v)));
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn sorted(mut self) -> Self {
        self.edges.sort_unstable();
        self
    }

    /// Checks node-disjointness and that every edge exists in `graph`.
    pub fn validate(&self, graph: &DynamicGraph) -> Result<()> {
        let mut used = vec![false; graph.node_bound()];
        for &(u, v) in &self.edges {
            if !graph.has_edge(u, v) {
                return Err(Error::Internal(format!(
                    "matched pair {{{u}, {v}}} is not an edge"
                )));
            }
            for x in [u, v] {
                if std::mem::replace(&mut used[x as usize], true) {
                    return Err(Error::Internal(format!("node {x} is matched twice")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn degrees(g: &DynamicGraph) -> Vec<usize> {
        (0..g.node_bound() as NodeId).map(|u| g.degree(u)).collect()
    }

    fn path(n: u32) -> DynamicGraph {
        DynamicGraph::build(n as usize, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn complete(n: u32) -> DynamicGraph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        DynamicGraph::build(n as usize, edges).unwrap()
    }

    #[test]
    fn build_path() {
        let g = path(3);
        assert_eq!(degrees(&g), vec![1, 2, 1]);
        assert_eq!(g.edge_count(), 2);
        g.check_invariants().unwrap();
    }

    #[test]
    fn build_drops_duplicates_and_loops() {
        let g = DynamicGraph::build(3, [(0, 1), (0, 1), (2, 2)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(1, 0));
        assert_eq!(g.degree(2), 0);
        g.check_invariants().unwrap();
    }

    #[test]
    fn build_cycle_and_rejects_out_of_range() {
        let g = DynamicGraph::build(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(degrees(&g), vec![2; 4]);
        assert!(matches!(
            DynamicGraph::build(2, [(0, 2)]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn delete_middle_of_path() {
        let mut g = path(3);
        g.delete_node(1).unwrap();
        assert_eq!(g.degree(0), 0);
        assert_eq!(g.degree(2), 0);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.min_positive_degree(), None);
        g.check_invariants().unwrap();
        assert!(matches!(g.delete_node(1), Err(Error::Usage(_))));
        assert!(matches!(g.delete_node(9), Err(Error::Usage(_))));
    }

    #[test]
    fn delete_from_cycle_and_clique() {
        let mut c4 = DynamicGraph::build(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        c4.delete_node(2).unwrap();
        assert_eq!(c4.edge_count(), 2);
        assert_eq!((c4.degree(0), c4.degree(1), c4.degree(3)), (2, 1, 1));

        let mut k4 = complete(4);
        k4.delete_node(0).unwrap();
        assert_eq!(k4.edge_count(), 3);
        assert!([1, 2, 3].iter().all(|&u| k4.degree(u) == 2));
        k4.check_invariants().unwrap();
    }

    #[test]
    fn contract_inside_path() {
        let mut g = path(4);
        let rec = g.contract_triple(1, 0, 2).unwrap();
        assert_eq!(rec.merged, 4);
        assert_eq!(g.neighbors(4), &[3]);
        assert!(rec.n1.is_empty());
        assert_eq!(rec.n2, vec![3]);
        assert_eq!(g.alive_count(), 2);
        g.check_invariants().unwrap();
    }

    #[test]
    fn contract_triangle_drops_loops() {
        let mut g = complete(3);
        let rec = g.contract_triple(0, 1, 2).unwrap();
        assert_eq!(rec.merged, 3);
        assert_eq!(g.degree(3), 0);
        assert_eq!(g.edge_count(), 0);
        g.check_invariants().unwrap();
    }

    #[test]
    fn contract_diamond_collapses_parallel_edges() {
        let mut g = DynamicGraph::build(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let rec = g.contract_triple(0, 1, 2).unwrap();
        assert_eq!(g.neighbors(rec.merged), &[3]);
        assert_eq!(g.degree(3), 1);
        g.check_invariants().unwrap();
    }

    #[test]
    fn contract_rejects_wrong_shape() {
        let mut g = path(4);
        assert!(g.contract_triple(0, 1, 2).is_err());
        assert!(g.contract_triple(1, 0, 3).is_err());
        assert!(g.contract_triple(1, 0, 0).is_err());
        g.check_invariants().unwrap();
    }

    #[test]
    fn min_positive_degree_cases() {
        assert_eq!(path(3).min_positive_degree(), Some(1));
        let c4 = DynamicGraph::build(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4.min_positive_degree(), Some(2));
        assert_eq!(DynamicGraph::new(0).min_positive_degree(), None);
        assert_eq!(DynamicGraph::new(5).min_positive_degree(), None);
    }

    #[test]
    fn min_degree_tracks_decrements() {
        let mut k4 = complete(4);
        assert_eq!(k4.min_positive_degree(), Some(3));
        assert_eq!(k4.max_degree(), 3);
        k4.delete_node(0).unwrap();
        assert_eq!(k4.min_positive_degree(), Some(2));
        k4.delete_node(1).unwrap();
        assert_eq!(k4.min_positive_degree(), Some(1));
        assert_eq!(k4.max_degree(), 1);
    }

    #[test]
    fn random_node_of_degree_endpoints() {
        let g = path(3);
        let mut seen = [0u32; 3];
        for seed in 0..400 {
            let mut rng = SeededRng::new(seed);
            seen[g.random_node_of_degree(1, &mut rng).unwrap() as usize] += 1;
        }
        assert_eq!(seen[1], 0);
        assert!(seen[0] > 150 && seen[2] > 150, "{seen:?}");
        assert!(g.random_node_of_degree(3, &mut SeededRng::new(0)).is_err());
    }

    #[test]
    fn random_leaf_of_star() {
        let g = DynamicGraph::build(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let mut rng = SeededRng::new(8);
        let mut seen = [0u32; 4];
        for _ in 0..3000 {
            seen[g.random_node_of_degree(1, &mut rng).unwrap() as usize] += 1;
        }
        assert_eq!(seen[0], 0);
        // Each leaf: Binomial(3000, 1/3), sd ~ 25.8; allow 4 sd.
        for &c in &seen[1..] {
            assert!((c as f64 - 1000.0).abs() < 104.0, "{seen:?}");
        }
    }

    #[test]
    fn bucket_sampling_chi_square() {
        // 10 nodes of degree 2 (a 10-cycle), 10^4 draws.
        let g = DynamicGraph::build(10, (0..10).map(|i| (i, (i + 1) % 10))).unwrap();
        let mut rng = SeededRng::new(31337);
        let mut counts = [0f64; 10];
        for _ in 0..10_000 {
            counts[g.random_node_of_degree(2, &mut rng).unwrap() as usize] += 1.0;
        }
        let chi2: f64 = counts.iter().map(|c| (c - 1000.0).powi(2) / 1000.0).sum();
        // 0.999 quantile of chi-square with 9 degrees of freedom.
        assert!(chi2 < 27.877, "chi2 = {chi2}");
    }

    #[test]
    fn edge_list_round_trip() {
        let g = DynamicGraph::build(5, [(0, 1), (3, 4), (1, 3)]).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "5 3\n0 1\n1 3\n3 4\n");
        let back = DynamicGraph::read_edge_list(&buf[..]).unwrap();
        assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn edge_list_errors() {
        let bad = [
            "",
            "3\n",
            "3 1\n0 3\n",
            "3 2\n0 1\n",
            "3 1\n0 1\n1 2\n",
            "3 1\n0 x\n",
        ];
        for text in bad {
            assert!(
                DynamicGraph::read_edge_list(text.as_bytes()).is_err(),
                "{text:?} should be rejected"
            );
        }
    }

    #[test]
    fn matching_validation() {
        let g = path(4);
        assert!(Matching::from_edges([(1, 0), (2, 3)]).validate(&g).is_ok());
        assert!(Matching::from_edges([(0, 2)]).validate(&g).is_err());
        assert!(Matching::from_edges([(0, 1), (1, 2)]).validate(&g).is_err());
    }

    #[derive(Clone, Debug)]
    enum Op {
        Delete(u32),
        Contract(u32, bool),
    }

    proptest! {
        #[test]
        fn random_operation_sequences_keep_invariants(
            n in 2usize..30,
            raw_edges in proptest::collection::vec((0u32..30, 0u32..30), 0..80),
            ops in proptest::collection::vec(
                prop_oneof![
                    (0u32..1000).prop_map(Op::Delete),
                    ((0u32..1000), any::<bool>()).prop_map(|(i, f)| Op::Contract(i, f)),
                ],
                0..40,
            ),
        ) {
            let edges = raw_edges.into_iter().map(|(u, v)| (u % n as u32, v % n as u32));
            let mut g = DynamicGraph::build(n, edges).unwrap();
            g.check_invariants().unwrap();
            for op in ops {
                let alive: Vec<NodeId> = g.alive_nodes().collect();
                if alive.is_empty() {
                    break;
                }
                match op {
                    Op::Delete(i) => {
                        let u = alive[i as usize % alive.len()];
                        g.delete_node(u).unwrap();
                    }
                    Op::Contract(i, flip) => {
                        let twos = g.bucket(2).to_vec();
                        if twos.is_empty() {
                            continue;
                        }
                        let u = twos[i as usize % twos.len()];
                        let (mut a, mut b) = (g.neighbors(u)[0], g.neighbors(u)[1]);
                        if flip {
                            std::mem::swap(&mut a, &mut b);
                        }
                        let before = g.alive_count();
                        let rec = g.contract_triple(u, a, b).unwrap();
                        prop_assert_eq!(g.alive_count(), before - 2);
                        let mut expect: Vec<NodeId> = rec.n1.iter().chain(&rec.n2).copied().collect();
                        expect.sort_unstable();
                        expect.dedup();
                        let mut got = g.neighbors(rec.merged).to_vec();
                        got.sort_unstable();
                        prop_assert_eq!(got, expect);
                        prop_assert!(![rec.u, rec.v1, rec.v2].contains(&rec.merged));
                        prop_assert!(!rec.n1.contains(&rec.u) && !rec.n2.contains(&rec.u));
                    }
                }
                g.check_invariants().unwrap();
            }
        }
    }
}
