//! Exact small cuts: verification, FT-sampled connectivity certificates, and the
//! two-phase min-cut algorithm for edges and vertices.
//!
//! Phase 1 repeatedly samples a subgraph, grows a truncated BFS tree in it from a
//! fixed source and lets every node learn its tree path; the union of a node's
//! paths is its certificate. Phase 2 has every node compute a local cut in its
//! certificate, agrees on the smallest report, and verifies it before returning.

mod edge;
mod vertex;
pub mod verify;

use std::collections::BTreeMap;

use serde::Serialize;

pub use edge::{certificate_min_cuts, min_cut_unknown_lambda, randomized_min_cut, randomized_min_cut_with_certificates};
pub(crate) use edge::{edge_phase_two, spanning_tree};
pub use verify::{edge_verify_depth, verify_cut, verify_vertex_cut, vertex_verify_depth, Verdict};
pub use vertex::randomized_vertex_cut;

use crate::flow::{local_edge_cut, LocalCut};
use crate::graph::{Edge, EdgeId, Multigraph, NodeId};
use crate::primitives::{all_reduce, bfs_tree, broadcast, collect_root_paths, BfsTree, Ranked, SubgraphSelector};
use crate::sim::{Message, Sim};

/// How many iterations to run, with what sampling probability, and how deep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterationPlan {
    pub iterations: u64,
    pub p: f64,
    pub depth_cap: u32,
    /// Stop once no certificate has grown for `ceil(iterations / 10)` iterations.
    pub early_exit: bool,
}

/// `ceil(base^(2 lambda) * ln n * scale)`, at least 1.
pub fn analytic_iterations(base: u64, lambda: u64, n: usize, scale: f64) -> u64 {
    let raw = (base as f64).powf(2.0 * lambda as f64) * (n.max(2) as f64).ln() * scale;
    raw.ceil().clamp(1.0, u64::MAX as f64) as u64
}

impl IterationPlan {
    /// Edge sampling: depth `3 lambda D`, `p = 1 - 1/(3 lambda D)`.
    pub fn edge(lambda: u64, diameter: u32, n: usize, scale: f64) -> Self {
        let base = 3 * lambda.max(1) * diameter.max(1) as u64;
        Self {
            iterations: analytic_iterations(base, lambda, n, scale),
            p: 1.0 - 1.0 / base as f64,
            depth_cap: base as u32,
            early_exit: false,
        }
    }

    /// Vertex sampling: depth `3 lambda Delta D`, `p = 1 - 1/(3 lambda Delta D)`.
    pub fn vertex(lambda: u64, diameter: u32, max_degree: u32, n: usize, scale: f64) -> Self {
        let base = 3 * lambda.max(1) * max_degree.max(1) as u64 * diameter.max(1) as u64;
        Self {
            iterations: analytic_iterations(base, lambda, n, scale),
            p: 1.0 - 1.0 / base as f64,
            depth_cap: base as u32,
            early_exit: false,
        }
    }

    pub fn iterations(mut self, iterations: u64) -> Self {
        self.iterations = iterations.max(1);
        self
    }

    pub fn early_exit(mut self, on: bool) -> Self {
        self.early_exit = on;
        self
    }

    fn window(&self) -> Option<u64> {
        self.early_exit.then(|| self.iterations.div_ceil(10).max(1))
    }
}

/// The edges a node `owner` collected from its root paths towards `source`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StCertificate {
    pub owner: NodeId,
    pub source: NodeId,
    pub edges: BTreeMap<EdgeId, (NodeId, NodeId)>,
}

impl StCertificate {
    pub fn new(owner: NodeId, source: NodeId) -> Self {
        Self { owner, source, edges: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_list(&self) -> Vec<Edge> {
        self.edges.iter().map(|(&id, &(u, v))| Edge { id, u, v }).collect()
    }
}

/// The `source`-`owner` cut of the certificate, truncated after `lambda + 1` paths.
pub fn local_st_cut(cert: &StCertificate, lambda: u64) -> LocalCut<EdgeId> {
    local_edge_cut(&cert.edge_list(), cert.source, cert.owner, lambda + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mode {
    Randomized { seed: u64 },
    Deterministic { family: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutResult<T> {
    pub mode: Mode,
    pub lambda: u64,
    /// `None`: no cut of size at most `lambda` was found.
    pub value: Option<u64>,
    pub witness: Vec<T>,
    pub discovered_by: Option<NodeId>,
    pub sources: Vec<NodeId>,
    /// Every round this call spent on the simulator.
    pub rounds: u64,
    pub phase1_rounds: u64,
    pub iterations: u64,
    /// Reports that failed verification before one passed.
    pub rejected: u64,
    pub max_certificate_edges: usize,
    pub coin_draws: u64,
}

/// What a driver knows about the network before it starts.
#[derive(Clone, Copy, Debug)]
pub struct Knowledge {
    pub diameter: u32,
    pub max_degree: u32,
}

impl Knowledge {
    /// The exact diameter, or `n - 1` when the graph is disconnected.
    pub fn of(g: &Multigraph) -> Self {
        Self {
            diameter: g.diameter().unwrap_or(g.n().saturating_sub(1)).max(1) as u32,
            max_degree: g.max_degree().max(1) as u32,
        }
    }
}

pub struct Phase1 {
    /// Per node, per source.
    pub certs: Vec<Vec<StCertificate>>,
    pub iterations: u64,
    pub rounds: u64,
}

/// Runs sampling iterations from each `source` in turn, `selectors(i, j)` giving
/// the subgraph of iteration `j` for source number `i`.
pub fn collect_certificates<F, I>(
    sim: &mut Sim<'_>,
    sources: &[NodeId],
    cap: u32,
    window: Option<u64>,
    mut selectors: F,
) -> Phase1
where
    F: FnMut(usize) -> I,
    I: Iterator<Item = SubgraphSelector>,
{
    let n = sim.graph().n();
    let mut certs: Vec<Vec<StCertificate>> =
        (0..n).map(|t| sources.iter().map(|&s| StCertificate::new(t, s)).collect()).collect();
    let start = sim.transcript().rounds;
    let mut iterations = 0;
    for (i, &s) in sources.iter().enumerate() {
        let mut stale = 0;
        for sel in selectors(i) {
            iterations += 1;
            let tree = bfs_tree(sim, &sel, s, cap);
            let (paths, _) = collect_root_paths(sim, &tree);
            let mut grew = false;
            for (t, path) in paths.iter().enumerate() {
                for hop in path {
                    grew |= certs[t][i].edges.insert(hop.edge, (hop.from, hop.to)).is_none();
                }
            }
            stale = if grew { 0 } else { stale + 1 };
            if window.is_some_and(|w| stale >= w) {
                log::debug!("early exit after {iterations} iterations");
                break;
            }
        }
    }
    Phase1 { certs, iterations, rounds: sim.transcript().rounds - start }
}

pub(crate) struct Candidate<M> {
    pub value: u64,
    pub witness: Vec<M>,
}

pub(crate) struct Winner<M> {
    pub value: u64,
    pub witness: Vec<M>,
    pub owner: NodeId,
    pub rejected: u64,
}

/// Agrees on the smallest verified report. `candidates[u]` must be sorted by value;
/// a rejected winner withdraws its report and offers its next one.
pub(crate) fn select_verified<M, V>(
    sim: &mut Sim<'_>,
    tree: &BfsTree,
    lambda: u64,
    candidates: &[Vec<Candidate<M>>],
    mut verify: V,
) -> Option<Winner<M>>
where
    M: Message,
    V: FnMut(&mut Sim<'_>, &[M]) -> bool,
{
    let n = sim.graph().n();
    let mut next = vec![0usize; n];
    let mut rejected = 0;
    loop {
        let offers: Vec<Ranked> = (0..n)
            .map(|u| Ranked { value: candidates[u].get(next[u]).map_or(lambda + 1, |c| c.value), owner: u })
            .collect();
        let (best, _) = all_reduce(sim, tree, &offers, |a, b| *a.min(b));
        if best.value > lambda {
            return None;
        }
        let cand = &candidates[best.owner][next[best.owner]];
        broadcast(sim, best.owner, &cand.witness);
        if verify(sim, &cand.witness) {
            return Some(Winner { value: best.value, witness: cand.witness.clone(), owner: best.owner, rejected });
        }
        log::debug!("report of node {} failed verification", best.owner);
        rejected += 1;
        next[best.owner] += 1;
    }
}
