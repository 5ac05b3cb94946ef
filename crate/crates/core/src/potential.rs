//! Incrementally maintained expected potentials.
//!
//! For an alive node `u` the potential is `sum over neighbors v of 1/deg(v)`.
//! Deleting a node touches at most its two-hop neighborhood, so updates are
//! applied eagerly there instead of recomputing every value. Nodes of
//! positive degree are kept in an ordered set keyed by potential so that the
//! minimum and its tie set can be read off the front.

use std::collections::BTreeSet;

use ordered_float::OrderedFloat;

use crate::error::{Error, Result};
use crate::graph::{ContractionRecord, DynamicGraph, NodeId};

/// Relative tolerance used for ties and for the recomputation check.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Incremental updates applied before all values are recomputed from scratch.
pub const REBUILD_INTERVAL: u64 = 1 << 20;

type Key = (OrderedFloat<f64>, NodeId);

#[derive(Clone, Debug, Default)]
pub struct PotentialIndex {
    pi: Vec<f64>,
    // Key under which each node is stored in `order`, if it is stored.
    stored: Vec<Option<f64>>,
    order: BTreeSet<Key>,
    updates_since_rebuild: u64,
}

/// `sum over v in N(u) of 1 / deg(v)`, evaluated directly.
pub fn potential_of(g: &DynamicGraph, u: NodeId) -> f64 {
    g.neighbors(u)
        .iter()
        .map(|&v| 1.0 / g.degree(v) as f64)
        .sum()
}

impl PotentialIndex {
    pub fn build(g: &DynamicGraph) -> Self {
        let mut idx = PotentialIndex::default();
        idx.rebuild(g);
        idx
    }

    /// Recomputes every potential and the ordered set.
    pub fn rebuild(&mut self, g: &DynamicGraph) {
        let bound = g.node_bound();
        self.pi = vec![0.0; bound];
        self.stored = vec![None; bound];
        self.order.clear();
        for u in g.alive_nodes() {
            let value = potential_of(g, u);
            self.pi[u as usize] = value;
            if g.degree(u) > 0 {
                self.store(u, value);
            }
        }
        self.updates_since_rebuild = 0;
    }

    pub fn potential(&self, u: NodeId) -> f64 {
        self.pi.get(u as usize).copied().unwrap_or(0.0)
    }

    /// Number of nodes currently eligible for [`min_tie_set`](Self::min_tie_set).
    pub fn eligible_count(&self) -> usize {
        self.order.len()
    }

    /// Sum of all stored potentials. Equals the number of alive nodes of
    /// positive degree, since each such node contributes `deg * 1/deg`.
    pub fn total(&self) -> f64 {
        self.order.iter().map(|(p, _)| p.0).sum()
    }

    fn ensure_capacity(&mut self, bound: usize) {
        if self.pi.len() < bound {
            self.pi.resize(bound, 0.0);
            self.stored.resize(bound, None);
        }
    }

    fn store(&mut self, u: NodeId, value: f64) {
        if let Some(old) = self.stored[u as usize].replace(value) {
            self.order.remove(&(OrderedFloat(old), u));
        }
        self.order.insert((OrderedFloat(value), u));
    }

    fn unstore(&mut self, u: NodeId) {
        if let Some(old) = self.stored[u as usize].take() {
            self.order.remove(&(OrderedFloat(old), u));
        }
    }

    /// Applies the effect of deleting `x`. Must be called while `x` and its
    /// edges are still present in `g`, i.e. right before `g.delete_node(x)`.
    pub fn remove_node_update(&mut self, g: &DynamicGraph, x: NodeId) -> Result<()> {
        if !g.is_alive(x) {
            return Err(Error::Usage(format!(
                "potential update for node {x}, which is not alive"
            )));
        }
        self.ensure_capacity(g.node_bound());
        let dx = g.degree(x) as f64;
        let mut touched = Vec::new();
        for &v in g.neighbors(x) {
            let dv = g.degree(v);
            self.pi[v as usize] -= 1.0 / dx;
            touched.push(v);
            if dv > 1 {
                let delta = 1.0 / (dv - 1) as f64 - 1.0 / dv as f64;
                for &w in g.neighbors(v) {
                    if w != x {
                        self.pi[w as usize] += delta;
                        touched.push(w);
                    }
                }
            }
        }
        self.updates_since_rebuild += touched.len() as u64 + 1;

        self.pi[x as usize] = 0.0;
        self.unstore(x);
        touched.sort_unstable();
        touched.dedup();
        for y in touched {
            let becomes_isolated = g.degree(y) == 1 && g.neighbors(y)[0] == x;
            if becomes_isolated {
                self.pi[y as usize] = 0.0;
                self.unstore(y);
            } else {
                self.store(y, self.pi[y as usize]);
            }
        }
        Ok(())
    }

    /// Recomputes the potentials of `nodes` from the current graph.
    pub fn refresh(&mut self, g: &DynamicGraph, nodes: impl IntoIterator<Item = NodeId>) {
        self.ensure_capacity(g.node_bound());
        for u in nodes {
            self.updates_since_rebuild += 1;
            if g.is_alive(u) && g.degree(u) > 0 {
                let value = potential_of(g, u);
                self.pi[u as usize] = value;
                self.store(u, value);
            } else {
                self.pi[u as usize] = 0.0;
                self.unstore(u);
            }
        }
    }

    /// Brings the index up to date after `g.contract_triple` produced `rec`.
    ///
    /// Only nodes within distance two of the merged node can change: their
    /// neighbor sets or their neighbors' degrees were altered.
    pub fn after_contraction(&mut self, g: &DynamicGraph, rec: &ContractionRecord) {
        let mut affected = vec![rec.u, rec.v1, rec.v2, rec.merged];
        for &w in g.neighbors(rec.merged) {
            affected.push(w);
            affected.extend_from_slice(g.neighbors(w));
        }
        affected.sort_unstable();
        affected.dedup();
        self.refresh(g, affected);
    }

    /// Rebuilds from scratch once enough incremental updates have accumulated.
    pub fn maybe_rebuild(&mut self, g: &DynamicGraph) {
        if self.updates_since_rebuild >= REBUILD_INTERVAL {
            self.rebuild(g);
        }
    }

    pub fn min_potential(&self) -> Option<f64> {
        self.order.first().map(|(p, _)| p.0)
    }

    fn tie_range(&self) -> Result<impl Iterator<Item = NodeId> + '_> {
        let min = self
            .min_potential()
            .ok_or_else(|| Error::Usage("no node of positive degree left".into()))?;
        let limit = min + TIE_TOLERANCE * (1.0 + min.abs());
        Ok(self
            .order
            .iter()
            .take_while(move |(p, _)| p.0 <= limit)
            .map(|&(_, u)| u))
    }

    /// All nodes whose potential is within tolerance of the minimum, ordered
    /// by potential and then id.
    pub fn min_tie_set(&self) -> Result<Vec<NodeId>> {
        Ok(self.tie_range()?.collect())
    }

    /// Number of tied minimum nodes and the `k`-th of them; avoids collecting
    /// the whole set when only one random member is needed.
    pub(crate) fn tie_count(&self) -> Result<usize> {
        Ok(self.tie_range()?.count())
    }

    pub(crate) fn tie_member(&self, k: usize) -> Result<NodeId> {
        self.tie_range()?
            .nth(k)
            .ok_or_else(|| Error::Internal(format!("tie set has no member {k}")))
    }

    /// Largest relative deviation between stored and recomputed potentials
    /// over alive nodes of positive degree, plus a check of the ordered set.
    pub fn check_against(&self, g: &DynamicGraph) -> Result<f64> {
        let mut worst: f64 = 0.0;
        let mut eligible = 0;
        for u in g.alive_nodes() {
            if g.degree(u) == 0 {
                if self.stored.get(u as usize).copied().flatten().is_some() {
                    return Err(Error::Internal(format!("isolated node {u} is still indexed")));
                }
                continue;
            }
            eligible += 1;
            let exact = potential_of(g, u);
            let stored = self.potential(u);
            worst = worst.max((stored - exact).abs() / (1.0 + stored.abs()));
            if self.stored.get(u as usize).copied().flatten() != Some(stored) {
                return Err(Error::Internal(format!("node {u} has a stale order key")));
            }
        }
        if eligible != self.order.len() {
            return Err(Error::Internal(format!(
                "{} indexed nodes but {eligible} eligible",
                self.order.len()
            )));
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{generate_direct, GraphFamily};
    use crate::rng::SeededRng;

    fn star() -> DynamicGraph {
        DynamicGraph::build(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    fn path3() -> DynamicGraph {
        DynamicGraph::build(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn k4() -> DynamicGraph {
        DynamicGraph::build(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn build_star_path_and_regular() {
        let idx = PotentialIndex::build(&star());
        assert!(close(idx.potential(0), 3.0));
        assert!((1..4).all(|u| close(idx.potential(u), 1.0 / 3.0)));

        let idx = PotentialIndex::build(&path3());
        assert!(close(idx.potential(1), 2.0));
        assert!(close(idx.potential(0), 0.5) && close(idx.potential(2), 0.5));

        let idx = PotentialIndex::build(&k4());
        assert!((0..4).all(|u| close(idx.potential(u), 1.0)));
    }

    #[test]
    fn remove_end_of_path() {
        let mut g = path3();
        let mut idx = PotentialIndex::build(&g);
        idx.remove_node_update(&g, 0).unwrap();
        g.delete_node(0).unwrap();
        assert!(close(idx.potential(1), 1.0));
        assert!(close(idx.potential(2), 1.0));
        assert_eq!(idx.check_against(&g).unwrap(), 0.0);
    }

    #[test]
    fn remove_leaf_of_star() {
        let mut g = star();
        let mut idx = PotentialIndex::build(&g);
        idx.remove_node_update(&g, 3).unwrap();
        g.delete_node(3).unwrap();
        assert!(close(idx.potential(0), 2.0));
        assert!(close(idx.potential(1), 0.5) && close(idx.potential(2), 0.5));
        idx.check_against(&g).unwrap();
    }

    #[test]
    fn removing_center_isolates_leaves() {
        let mut g = star();
        let mut idx = PotentialIndex::build(&g);
        idx.remove_node_update(&g, 0).unwrap();
        g.delete_node(0).unwrap();
        assert_eq!(idx.eligible_count(), 0);
        assert!(idx.min_tie_set().is_err());
        idx.check_against(&g).unwrap();
        assert!(idx.remove_node_update(&g, 0).is_err());
    }

    #[test]
    fn tie_sets() {
        let mut all = PotentialIndex::build(&k4()).min_tie_set().unwrap();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
        let mut leaves = PotentialIndex::build(&star()).min_tie_set().unwrap();
        leaves.sort_unstable();
        assert_eq!(leaves, vec![1, 2, 3]);
    }

    #[test]
    fn tie_set_matches_scan_on_irregular_graph() {
        // Triangle 0-1-2 with a pendant path 2-3-4 and an extra leaf 5 on 1.
        let g = DynamicGraph::build(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (1, 5)]).unwrap();
        let idx = PotentialIndex::build(&g);
        let scan: Vec<f64> = (0..6).map(|u| potential_of(&g, u)).collect();
        let min = scan.iter().copied().fold(f64::INFINITY, f64::min);
        let expect: Vec<NodeId> = (0..6).filter(|&u| scan[u as usize] <= min + 1e-9).collect();
        // Leaf 5 hangs on node 1 of degree 3: 1/3 is the unique minimum.
        assert_eq!(expect, vec![5]);
        assert_eq!(idx.min_tie_set().unwrap(), expect);
    }

    #[test]
    fn potentials_sum_to_active_node_count() {
        let fam = GraphFamily::general(300, 4.0).unwrap();
        let g = generate_direct(&fam, &mut SeededRng::new(12)).unwrap();
        let idx = PotentialIndex::build(&g);
        let active = g.alive_nodes().filter(|&u| g.degree(u) > 0).count();
        assert!((idx.total() - active as f64).abs() <= 1e-6 * 300.0);
    }

    #[test]
    fn incremental_matches_recompute_after_random_deletions() {
        let fam = GraphFamily::general(200, 4.0).unwrap();
        let mut rng = SeededRng::new(99);
        let mut steps = 0;
        while steps < 1000 {
            let mut g = generate_direct(&fam, &mut rng).unwrap();
            let mut idx = PotentialIndex::build(&g);
            while g.edge_count() > 0 && steps < 1000 {
                let alive: Vec<NodeId> = g.alive_nodes().collect();
                let x = rng.choose(&alive).unwrap();
                idx.remove_node_update(&g, x).unwrap();
                g.delete_node(x).unwrap();
                steps += 1;
                assert!(idx.check_against(&g).unwrap() <= TIE_TOLERANCE);
                let active = g.alive_nodes().filter(|&u| g.degree(u) > 0).count();
                assert!((idx.total() - active as f64).abs() <= 1e-6 * 200.0);
            }
        }
    }

    #[test]
    fn tie_set_independent_of_deletion_order() {
        let fam = GraphFamily::general(60, 4.0).unwrap();
        let base = generate_direct(&fam, &mut SeededRng::new(4)).unwrap();
        let victims = [3, 17, 25, 40, 41, 59];
        let run = |order: &[NodeId]| {
            let mut g = base.clone();
            let mut idx = PotentialIndex::build(&g);
            for &x in order {
                idx.remove_node_update(&g, x).unwrap();
                g.delete_node(x).unwrap();
            }
            let mut ties = idx.min_tie_set().unwrap();
            ties.sort_unstable();
            ties
        };
        let forward = run(&victims);
        let mut reversed = victims;
        reversed.reverse();
        assert_eq!(forward, run(&reversed));
    }

    #[test]
    fn contraction_refresh_matches_recompute() {
        let mut g = DynamicGraph::build(
            7,
            [(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (4, 5), (5, 6)],
        )
        .unwrap();
        let mut idx = PotentialIndex::build(&g);
        let rec = g.contract_triple(0, 1, 2).unwrap();
        idx.after_contraction(&g, &rec);
        assert_eq!(idx.check_against(&g).unwrap(), 0.0);
    }
}
