//! The six greedy matchers.
//!
//! Every matcher repeatedly looks at the minimum positive degree `d` of the
//! current graph. A degree-1 node is always matched to its unique neighbor.
//! With degree-2 reduction enabled, a degree-2 node is contracted together
//! with its two neighbors. Otherwise a heuristic picks an edge, whose
//! endpoints are matched and deleted.
//!
//! Each step is appended to an action log. Contractions produce matching
//! edges on nodes that do not exist in the input, so the final matching is
//! recovered by replaying the log backwards ([`unwind`]).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{ContractionRecord, DynamicGraph, Matching, NodeId};
use crate::potential::PotentialIndex;
use crate::rng::SeededRng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OptLevel {
    /// Degree-1 reduction only.
    Degree1,
    /// Degree-1 and degree-2 reduction, degree 1 preferred.
    Degree12,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heuristic {
    /// Uniformly random edge.
    Random,
    /// Minimum-degree node, then its minimum-degree neighbor.
    DegDeg,
    /// Minimum-potential node, then its minimum-degree neighbor.
    PotDeg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgorithmSpec {
    pub opt: OptLevel,
    pub heu: Heuristic,
}

impl AlgorithmSpec {
    pub const ALL: [AlgorithmSpec; 6] = [
        AlgorithmSpec::new(OptLevel::Degree1, Heuristic::Random),
        AlgorithmSpec::new(OptLevel::Degree12, Heuristic::Random),
        AlgorithmSpec::new(OptLevel::Degree1, Heuristic::DegDeg),
        AlgorithmSpec::new(OptLevel::Degree12, Heuristic::DegDeg),
        AlgorithmSpec::new(OptLevel::Degree1, Heuristic::PotDeg),
        AlgorithmSpec::new(OptLevel::Degree12, Heuristic::PotDeg),
    ];

    pub const fn new(opt: OptLevel, heu: Heuristic) -> Self {
        AlgorithmSpec { opt, heu }
    }

    /// Command-line name, e.g. `opt12-potdeg`.
    pub fn name(&self) -> &'static str {
        use Heuristic::*;
        use OptLevel::*;
        match (self.opt, self.heu) {
            (Degree1, Random) => "opt1-rand",
            (Degree12, Random) => "opt12-rand",
            (Degree1, DegDeg) => "opt1-degdeg",
            (Degree12, DegDeg) => "opt12-degdeg",
            (Degree1, PotDeg) => "opt1-potdeg",
            (Degree12, PotDeg) => "opt12-potdeg",
        }
    }

    /// Conventional long name, e.g. `OPT(1,2):HEU(pot,deg)`.
    pub fn label(&self) -> String {
        let opt = match self.opt {
            OptLevel::Degree1 => "OPT(1)",
            OptLevel::Degree12 => "OPT(1,2)",
        };
        let heu = match self.heu {
            Heuristic::Random => "HEU(rand)",
            Heuristic::DegDeg => "HEU(deg,deg)",
            Heuristic::PotDeg => "HEU(pot,deg)",
        };
        format!("{opt}:{heu}")
    }

    /// Small stable integer used when deriving per-algorithm seeds.
    pub fn tag(&self) -> u32 {
        AlgorithmSpec::ALL
            .iter()
            .position(|s| s == self)
            .expect("every spec is listed") as u32
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmSpec::ALL
            .iter()
            .copied()
            .find(|spec| spec.name() == s || spec.label() == s)
            .ok_or_else(|| {
                Error::Input(format!(
                    "unknown algorithm {s:?}; expected one of {}",
                    AlgorithmSpec::ALL.map(|a| a.name()).join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    MatchEdge(NodeId, NodeId),
    Contract(ContractionRecord),
}

pub type ActionLog = Vec<Action>;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepCounters {
    /// Degree-1 reductions.
    pub o1: u64,
    /// Degree-2 reductions.
    pub o2: u64,
    /// Heuristic steps.
    pub h: u64,
}

impl StepCounters {
    pub fn total(&self) -> u64 {
        self.o1 + self.o2 + self.h
    }

    /// `(o1, o2, h)` as fractions of all steps, or `None` if there were none.
    pub fn fractions(&self) -> Option<(f64, f64, f64)> {
        let total = self.total();
        (total > 0).then(|| {
            let t = total as f64;
            (self.o1 as f64 / t, self.o2 as f64 / t, self.h as f64 / t)
        })
    }
}

/// Runs `spec` on `graph` with a fresh generator seeded by `seed`.
pub fn run(graph: DynamicGraph, spec: AlgorithmSpec, seed: u32) -> Result<(Matching, StepCounters)> {
    GreedyMatcher::new(graph, spec, SeededRng::new(seed)).solve()
}

/// State of one greedy run: the shrinking graph, its action log and counters.
#[derive(Clone, Debug)]
pub struct GreedyMatcher {
    graph: DynamicGraph,
    spec: AlgorithmSpec,
    rng: SeededRng,
    log: ActionLog,
    counters: StepCounters,
    potentials: Option<PotentialIndex>,
    original_n: usize,
}

impl GreedyMatcher {
    pub fn new(graph: DynamicGraph, spec: AlgorithmSpec, rng: SeededRng) -> Self {
        let potentials = (spec.heu == Heuristic::PotDeg).then(|| PotentialIndex::build(&graph));
        let original_n = graph.node_bound();
        GreedyMatcher {
            graph,
            spec,
            rng,
            log: Vec::new(),
            counters: StepCounters::default(),
            potentials,
            original_n,
        }
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn counters(&self) -> StepCounters {
        self.counters
    }

    pub fn log(&self) -> &[Action] {
        &self.log
    }

    pub fn potentials(&self) -> Option<&PotentialIndex> {
        self.potentials.as_ref()
    }

    /// Performs one step. Returns `false` once no edges are left.
    pub fn step(&mut self) -> Result<bool> {
        let Some(d) = self.graph.min_positive_degree() else {
            return Ok(false);
        };
        match (d, self.spec.opt) {
            (1, _) => self.degree1_step()?,
            (2, OptLevel::Degree12) => self.degree2_step()?,
            _ => self.heuristic_step()?,
        }
        Ok(true)
    }

    /// Runs to completion and unwinds the log.
    pub fn solve(mut self) -> Result<(Matching, StepCounters)> {
        while self.step()? {}
        self.finish()
    }

    /// Unwinds the log into a matching of the input graph. Steps not yet
    /// taken are simply absent from the result.
    pub fn finish(self) -> Result<(Matching, StepCounters)> {
        let matching = unwind(&self.log, self.original_n)?;
        Ok((matching, self.counters))
    }

    /// Matches a uniformly random degree-1 node to its neighbor.
    pub fn degree1_step(&mut self) -> Result<()> {
        if self.graph.min_positive_degree() != Some(1) {
            return Err(Error::Internal("degree-1 step without a degree-1 node".into()));
        }
        let u = self.graph.random_node_of_degree(1, &mut self.rng)?;
        let v = self.graph.neighbors(u)[0];
        self.match_and_remove(u, v)?;
        self.counters.o1 += 1;
        Ok(())
    }

    /// Contracts a uniformly random degree-2 node with its neighbors; which
    /// neighbor becomes `v1` is decided by a fair coin.
    pub fn degree2_step(&mut self) -> Result<()> {
        if self.graph.min_positive_degree() != Some(2) {
            return Err(Error::Internal(
                "degree-2 step while the minimum degree is not 2".into(),
            ));
        }
        let u = self.graph.random_node_of_degree(2, &mut self.rng)?;
        let (mut v1, mut v2) = (self.graph.neighbors(u)[0], self.graph.neighbors(u)[1]);
        if self.rng.below(2) == 1 {
            std::mem::swap(&mut v1, &mut v2);
        }
        self.contract(u, v1, v2)
    }

    /// Contracts the degree-2 node `u` with its neighbors `v1` and `v2`,
    /// logging the contraction and counting it as a degree-2 step.
    pub fn contract(&mut self, u: NodeId, v1: NodeId, v2: NodeId) -> Result<()> {
        let rec = self.graph.contract_triple(u, v1, v2)?;
        if let Some(idx) = self.potentials.as_mut() {
            idx.after_contraction(&self.graph, &rec);
            idx.maybe_rebuild(&self.graph);
        }
        self.log.push(Action::Contract(rec));
        self.counters.o2 += 1;
        Ok(())
    }

    /// Selects an edge with the configured heuristic and matches it.
    pub fn heuristic_step(&mut self) -> Result<()> {
        let (u, v) = match self.spec.heu {
            Heuristic::Random => select_rand(&self.graph, &mut self.rng)?,
            Heuristic::DegDeg => select_degdeg(&self.graph, &mut self.rng)?,
            Heuristic::PotDeg => {
                let idx = self
                    .potentials
                    .as_ref()
                    .ok_or_else(|| Error::Internal("potential index missing".into()))?;
                select_potdeg(&self.graph, idx, &mut self.rng)?
            }
        };
        self.match_and_remove(u, v)?;
        self.counters.h += 1;
        Ok(())
    }

    fn match_and_remove(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        if !self.graph.has_edge(u, v) {
            return Err(Error::Internal(format!("{{{u}, {v}}} is not an edge")));
        }
        for x in [u, v] {
            if let Some(idx) = self.potentials.as_mut() {
                idx.remove_node_update(&self.graph, x)?;
            }
            self.graph.delete_node(x)?;
        }
        if let Some(idx) = self.potentials.as_mut() {
            idx.maybe_rebuild(&self.graph);
        }
        self.log.push(Action::MatchEdge(u, v));
        Ok(())
    }
}

/// Uniformly random edge: a degree class is picked with probability
/// proportional to the edge endpoints it holds, then a node in it, then one
/// of its neighbors.
pub fn select_rand(g: &DynamicGraph, rng: &mut SeededRng) -> Result<(NodeId, NodeId)> {
    if g.edge_count() == 0 {
        return Err(Error::Usage("select_rand on a graph without edges".into()));
    }
    let endpoints = 2 * g.edge_count() as u64;
    let mut r = rng.uniform_below_u64(endpoints)?;
    for d in 1..=g.max_degree() {
        let bucket = g.bucket(d);
        let weight = (d * bucket.len()) as u64;
        if r < weight {
            let u = bucket[(r / d as u64) as usize];
            let v = g.neighbors(u)[(r % d as u64) as usize];
            return Ok((u, v));
        }
        r -= weight;
    }
    Err(Error::Internal("degree buckets disagree with the edge count".into()))
}

/// Uniformly random neighbor of `u` among those of minimum degree.
fn min_degree_neighbor(g: &DynamicGraph, u: NodeId, rng: &mut SeededRng) -> NodeId {
    let neighbors = g.neighbors(u);
    let min = neighbors
        .iter()
        .map(|&v| g.degree(v))
        .min()
        .expect("selected node has a neighbor");
    let count = neighbors.iter().filter(|&&v| g.degree(v) == min).count();
    let k = rng.below(count as u32) as usize;
    neighbors
        .iter()
        .copied()
        .filter(|&v| g.degree(v) == min)
        .nth(k)
        .expect("k < count")
}

/// Random minimum-degree node, then a random minimum-degree neighbor.
pub fn select_degdeg(g: &DynamicGraph, rng: &mut SeededRng) -> Result<(NodeId, NodeId)> {
    let d = g
        .min_positive_degree()
        .ok_or_else(|| Error::Usage("select_degdeg on a graph without edges".into()))?;
    let u = g.random_node_of_degree(d, rng)?;
    Ok((u, min_degree_neighbor(g, u, rng)))
}

/// Random minimum-potential node, then a random minimum-degree neighbor.
pub fn select_potdeg(
    g: &DynamicGraph,
    idx: &PotentialIndex,
    rng: &mut SeededRng,
) -> Result<(NodeId, NodeId)> {
    if g.edge_count() == 0 {
        return Err(Error::Usage("select_potdeg on a graph without edges".into()));
    }
    let ties = idx.tie_count()?;
    let u = idx.tie_member(rng.below(ties as u32) as usize)?;
    if !g.is_alive(u) || g.degree(u) == 0 {
        return Err(Error::Internal(format!(
            "potential index selected node {u}, which has no edges"
        )));
    }
    Ok((u, min_degree_neighbor(g, u, rng)))
}

/// Replays `log` backwards and returns a matching on nodes `0..original_n`.
///
/// A contraction whose merged node ended up unmatched contributes
/// `{u, v1}`. If the merged node was matched to `w`, that edge is replaced by
/// `{v1, w}` plus `{u, v2}` when `v1` was adjacent to `w`, and by `{v2, w}`
/// plus `{u, v1}` otherwise.
pub fn unwind(log: &[Action], original_n: usize) -> Result<Matching> {
    const NONE: NodeId = NodeId::MAX;
    let contractions = log
        .iter()
        .filter(|a| matches!(a, Action::Contract(_)))
        .count();
    let bound = original_n + contractions;
    let mut mate = vec![NONE; bound];
    let pair = |mate: &mut Vec<NodeId>, a: NodeId, b: NodeId| -> Result<()> {
        if a as usize >= bound || b as usize >= bound {
            return Err(Error::Internal(format!("log refers to unknown node in {{{a}, {b}}}")));
        }
        if mate[a as usize] != NONE || mate[b as usize] != NONE {
            return Err(Error::Internal(format!("node of {{{a}, {b}}} matched twice")));
        }
        mate[a as usize] = b;
        mate[b as usize] = a;
        Ok(())
    };

    for action in log.iter().rev() {
        match action {
            Action::MatchEdge(u, v) => pair(&mut mate, *u, *v)?,
            Action::Contract(rec) => {
                let w = mate[rec.merged as usize];
                if w == NONE {
                    pair(&mut mate, rec.u, rec.v1)?;
                    continue;
                }
                mate[rec.merged as usize] = NONE;
                mate[w as usize] = NONE;
                if rec.v1_was_adjacent(w) {
                    pair(&mut mate, rec.v1, w)?;
                    pair(&mut mate, rec.u, rec.v2)?;
                } else if rec.v2_was_adjacent(w) {
                    pair(&mut mate, rec.v2, w)?;
                    pair(&mut mate, rec.u, rec.v1)?;
                } else {
                    return Err(Error::Internal(format!(
                        "node {w} matched to contracted node {} but adjacent to neither {} nor {}",
                        rec.merged, rec.v1, rec.v2
                    )));
                }
            }
        }
    }

    let mut matching = Matching::new();
    for (u, &v) in mate.iter().enumerate() {
        let u = u as NodeId;
        if v != NONE && u < v {
            if u as usize >= original_n || v as usize >= original_n {
                return Err(Error::Internal(format!(
                    "contracted node left in the final matching ({u}, {v})"
                )));
            }
            matching.push(u, v);
        }
    }
    Ok(matching)
}
