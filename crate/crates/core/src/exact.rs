//! Exact maximum-cardinality matching, used to score the heuristics.
//!
//! * [`max_matching_bipartite`]: Hopcroft-Karp (BFS layering, DFS augmentation).
//! * [`max_matching_general`]: Edmonds' blossom search with union-find bases.
//! * [`max_matching_brute`]: exhaustive search for graphs with at most 24 edges.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, Matching, NodeId};

/// Brute force refuses graphs with more edges than this.
pub const BRUTE_FORCE_MAX_EDGES: usize = 24;

const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    BipartiteHopcroftKarp { left_size: usize },
    GeneralBlossom,
    BruteForce,
}

impl OracleKind {
    /// Size of a maximum matching of `g` according to this oracle.
    pub fn max_matching_size(&self, g: &DynamicGraph) -> Result<usize> {
        match *self {
            OracleKind::BipartiteHopcroftKarp { left_size } => {
                Ok(max_matching_bipartite(g, left_size)?.len())
            }
            OracleKind::GeneralBlossom => Ok(max_matching_general(g).len()),
            OracleKind::BruteForce => max_matching_brute(g),
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleKind::BipartiteHopcroftKarp { left_size } => write!(f, "bipartite_hk({left_size})"),
            OracleKind::GeneralBlossom => f.write_str("general_blossom"),
            OracleKind::BruteForce => f.write_str("brute_force"),
        }
    }
}

impl FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general_blossom" | "blossom" => Ok(OracleKind::GeneralBlossom),
            "brute_force" | "brute" => Ok(OracleKind::BruteForce),
            other => Err(Error::Input(format!("unknown oracle {other:?}"))),
        }
    }
}

/// Hopcroft-Karp on a graph whose edges all join `0..left_size` to the rest.
pub fn max_matching_bipartite(g: &DynamicGraph, left_size: usize) -> Result<Matching> {
    let left = left_size.min(g.node_bound());
    let is_left = |u: NodeId| (u as usize) < left_size;
    if let Some((u, v)) = g.edges().find(|&(u, v)| is_left(u) == is_left(v)) {
        return Err(Error::Input(format!(
            "edge {{{u}, {v}}} lies within one side of the bipartition at {left_size}"
        )));
    }

    let mut mate_left = vec![NIL; left];
    let mut mate_right = vec![NIL; g.node_bound()];
    // Greedy start: cheap and leaves far fewer phases.
    for u in 0..left as NodeId {
        if let Some(&v) = g.neighbors(u).iter().find(|&&v| mate_right[v as usize] == NIL) {
            mate_left[u as usize] = v;
            mate_right[v as usize] = u;
        }
    }

    let mut dist = vec![u32::MAX; left];
    let mut next_edge = vec![0usize; left];
    let mut queue = VecDeque::new();
    let mut stack: Vec<NodeId> = Vec::new();
    loop {
        // Layer the free left nodes and everything reachable by alternating paths.
        queue.clear();
        for u in 0..left {
            if mate_left[u] == NIL && g.degree(u as NodeId) > 0 {
                dist[u] = 0;
                queue.push_back(u as NodeId);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                let w = mate_right[v as usize];
                if w == NIL {
                    reachable_free = true;
                } else if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !reachable_free {
            break;
        }

        next_edge.iter_mut().for_each(|e| *e = 0);
        for root in 0..left as NodeId {
            if mate_left[root as usize] != NIL || dist[root as usize] != 0 {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&x) = stack.last() {
                let xi = x as usize;
                let neighbors = g.neighbors(x);
                if next_edge[xi] == neighbors.len() {
                    dist[xi] = u32::MAX;
                    stack.pop();
                    continue;
                }
                let v = neighbors[next_edge[xi]];
                next_edge[xi] += 1;
                let w = mate_right[v as usize];
                if w == NIL {
                    for &y in &stack {
                        let vy = g.neighbors(y)[next_edge[y as usize] - 1];
                        mate_left[y as usize] = vy;
                        mate_right[vy as usize] = y;
                    }
                    break;
                } else if dist[w as usize] == dist[xi] + 1 {
                    stack.push(w);
                }
            }
        }
    }

    Ok(Matching::from_edges(
        (0..left)
            .filter(|&u| mate_left[u] != NIL)
            .map(|u| (u as NodeId, mate_left[u])),
    ))
}

/// Maximum matching of an arbitrary graph.
pub fn max_matching_general(g: &DynamicGraph) -> Matching {
    Blossom::new(g).solve(None)
}

/// Maximum matching reached by augmenting `initial`, which must be a valid
/// matching of `g`. Returns `initial` unchanged when it is already maximum.
pub fn augment_to_maximum(g: &DynamicGraph, initial: &Matching) -> Result<Matching> {
    initial.validate(g)?;
    Ok(Blossom::new(g).solve(Some(initial)))
}

/// Blossom search state. Per-search arrays are reset only where touched.
struct Blossom<'g> {
    g: &'g DynamicGraph,
    mate: Vec<u32>,
    parent: Vec<u32>,
    even: Vec<bool>,
    dsu: Vec<u32>,
    lca_mark: Vec<u32>,
    lca_stamp: u32,
    touched: Vec<u32>,
    queue: VecDeque<u32>,
    /// Blossom bases waiting to be merged into the blossom being formed.
    merge: Vec<u32>,
}

impl<'g> Blossom<'g> {
    fn new(g: &'g DynamicGraph) -> Self {
        let n = g.node_bound();
        Blossom {
            g,
            mate: vec![NIL; n],
            parent: vec![NIL; n],
            even: vec![false; n],
            dsu: (0..n as u32).collect(),
            lca_mark: vec![0; n],
            lca_stamp: 0,
            touched: Vec::new(),
            queue: VecDeque::new(),
            merge: Vec::new(),
        }
    }

    fn solve(mut self, initial: Option<&Matching>) -> Matching {
        let n = self.g.node_bound();
        match initial {
            Some(m) => {
                for &(u, v) in m.edges() {
                    self.mate[u as usize] = v;
                    self.mate[v as usize] = u;
                }
            }
            None => {
                for u in 0..n as u32 {
                    if self.mate[u as usize] != NIL {
                        continue;
                    }
                    let free = self
                        .g
                        .neighbors(u)
                        .iter()
                        .copied()
                        .find(|&v| self.mate[v as usize] == NIL);
                    if let Some(v) = free {
                        self.mate[u as usize] = v;
                        self.mate[v as usize] = u;
                    }
                }
            }
        }
        // A root without an augmenting path never gains one after later
        // augmentations, so every root is searched at most once.
        for root in 0..n as u32 {
            if self.mate[root as usize] == NIL && self.g.degree(root) > 0 {
                if let Some(end) = self.search(root) {
                    self.augment(end);
                }
                self.reset();
            }
        }
        Matching::from_edges(
            (0..n as u32)
                .filter(|&u| self.mate[u as usize] != NIL && u < self.mate[u as usize])
                .map(|u| (u, self.mate[u as usize])),
        )
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.dsu[root as usize] != root {
            root = self.dsu[root as usize];
        }
        while self.dsu[x as usize] != root {
            let next = self.dsu[x as usize];
            self.dsu[x as usize] = root;
            x = next;
        }
        root
    }

    fn touch(&mut self, x: u32) {
        self.touched.push(x);
    }

    fn reset(&mut self) {
        for &x in &self.touched {
            self.parent[x as usize] = NIL;
            self.even[x as usize] = false;
            self.dsu[x as usize] = x;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn is_even(&self, x: u32, root: u32) -> bool {
        x == root || (self.mate[x as usize] != NIL && self.parent[self.mate[x as usize] as usize] != NIL)
    }

    fn search(&mut self, root: u32) -> Option<u32> {
        self.even[root as usize] = true;
        self.touch(root);
        self.queue.push_back(root);
        let g = self.g;
        while let Some(v) = self.queue.pop_front() {
            for &to in g.neighbors(v) {
                if self.find(v) == self.find(to) || self.mate[v as usize] == to {
                    continue;
                }
                if self.is_even(to, root) {
                    let base = self.lca(v, to);
                    self.mark_path(v, base, to);
                    self.mark_path(to, base, v);
                    for i in 0..self.merge.len() {
                        let r = self.merge[i];
                        if r != base {
                            self.dsu[r as usize] = base;
                        }
                    }
                    self.merge.clear();
                } else if self.parent[to as usize] == NIL {
                    self.parent[to as usize] = v;
                    self.touch(to);
                    let next = self.mate[to as usize];
                    if next == NIL {
                        return Some(to);
                    }
                    self.even[next as usize] = true;
                    self.touch(next);
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn lca(&mut self, mut a: u32, mut b: u32) -> u32 {
        self.lca_stamp = self.lca_stamp.wrapping_add(1);
        if self.lca_stamp == 0 {
            self.lca_mark.iter_mut().for_each(|m| *m = 0);
            self.lca_stamp = 1;
        }
        loop {
            a = self.find(a);
            self.lca_mark[a as usize] = self.lca_stamp;
            let m = self.mate[a as usize];
            if m == NIL {
                break;
            }
            a = self.parent[m as usize];
        }
        loop {
            b = self.find(b);
            if self.lca_mark[b as usize] == self.lca_stamp {
                return b;
            }
            b = self.parent[self.mate[b as usize] as usize];
        }
    }

    /// Walks from `v` up to the blossom base `base`, redirecting parent
    /// pointers through `child`. Blossoms met on the way are recorded in
    /// `merge`; they are folded into `base` only after both sides of the new
    /// blossom have been walked, since a walk may pass through a blossom that
    /// would otherwise already look like part of `base`.
    fn mark_path(&mut self, mut v: u32, base: u32, mut child: u32) {
        while self.find(v) != base {
            let m = self.mate[v as usize];
            self.parent[v as usize] = child;
            child = m;
            let (rv, rm) = (self.find(v), self.find(m));
            self.merge.extend([rv, rm]);
            if !self.even[m as usize] {
                self.even[m as usize] = true;
                self.touch(m);
                self.queue.push_back(m);
            }
            v = self.parent[m as usize];
        }
    }

    fn augment(&mut self, mut v: u32) {
        while v != NIL {
            let pv = self.parent[v as usize];
            let next = self.mate[pv as usize];
            self.mate[v as usize] = pv;
            self.mate[pv as usize] = v;
            v = next;
        }
    }
}

/// Exact maximum matching size by exhaustive search over edge subsets.
pub fn max_matching_brute(g: &DynamicGraph) -> Result<usize> {
    let edges: Vec<(NodeId, NodeId)> = g.edges().collect();
    if edges.len() > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::Usage(format!(
            "brute force supports at most {BRUTE_FORCE_MAX_EDGES} edges, got {}",
            edges.len()
        )));
    }
    let mut used = vec![false; g.node_bound()];
    let ceiling = g.alive_count() / 2;
    let mut best = 0;
    brute(&edges, 0, 0, &mut used, ceiling, &mut best);
    Ok(best)
}

fn brute(
    edges: &[(NodeId, NodeId)],
    i: usize,
    size: usize,
    used: &mut [bool],
    ceiling: usize,
    best: &mut usize,
) {
    *best = (*best).max(size);
    if i == edges.len() || *best == ceiling || size + (edges.len() - i) <= *best {
        return;
    }
    let (u, v) = edges[i];
    if !used[u as usize] && !used[v as usize] {
        used[u as usize] = true;
        used[v as usize] = true;
        brute(edges, i + 1, size + 1, used, ceiling, best);
        used[u as usize] = false;
        used[v as usize] = false;
    }
    brute(edges, i + 1, size, used, ceiling, best);
}
