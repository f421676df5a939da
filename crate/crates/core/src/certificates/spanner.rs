//! Baswana–Sen clustering spanners, run as a message-passing protocol.
//!
//! Phase `i < k`: clusters are sampled with probability `n^(-1/k)` (a shared
//! coin keyed by the center, so members agree without talking). A node of an
//! unsampled cluster joins the adjacent sampled cluster over its lightest edge,
//! keeping that edge and the lightest edge to every cluster lighter still; with
//! no sampled neighbor it keeps one edge per adjacent cluster and drops out.
//! The last phase keeps one edge per adjacent cluster. Edge ids are the weights.
//! Every phase costs two rounds: cluster announcements, then drop notices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{EdgeId, NodeId};
use crate::primitives::{Mask, Selector};
use crate::sim::{mix64, Io, Message, Protocol, Sim, Widths};

const CLUSTER_STREAM: u64 = 0x636c_7573;

#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq)]
enum BsMsg {
    Hello { cluster: NodeId, sampled: bool },
    /// The sender removed this edge; `kept` if it went into the spanner.
    Drop { kept: bool },
}

impl Message for BsMsg {
    fn bits(&self, w: &Widths) -> u32 {
        match self {
            BsMsg::Hello { .. } => 2 + w.node,
            BsMsg::Drop { .. } => 2,
        }
    }
}

struct Phase<'a> {
    alive: &'a [Vec<bool>],
    cluster: &'a [Option<NodeId>],
    sampled: &'a [bool],
    last: bool,
}

#[derive(Clone, Default)]
struct PhaseState {
    alive: Vec<bool>,
    cluster: Option<NodeId>,
    kept: Vec<usize>,
    /// Ports the peer put into the spanner.
    peer_kept: Vec<usize>,
}

impl Phase<'_> {
    fn decide(&self, st: &mut PhaseState, io: &mut Io<'_, BsMsg>) {
        let u = io.node();
        let Some(own) = self.cluster[u] else { return };
        let mut peer: BTreeMap<usize, (NodeId, bool)> = BTreeMap::new();
        for (port, m) in io.inbox() {
            if let BsMsg::Hello { cluster, sampled } = *m {
                peer.insert(*port, (cluster, sampled));
            }
        }
        // edges inside a cluster are never needed again
        for (&p, &(c, _)) in &peer {
            if c == own {
                st.alive[p] = false;
            }
        }
        // lightest alive edge to each adjacent cluster
        let ports = io.ports();
        let mut lightest: BTreeMap<NodeId, (EdgeId, usize, bool)> = BTreeMap::new();
        for (&p, &(c, s)) in &peer {
            if st.alive[p] {
                let e = ports[p].edge;
                lightest.entry(c).and_modify(|x| if e < x.0 { *x = (e, p, s) }).or_insert((e, p, s));
            }
        }
        let drop_to = |c: NodeId, st: &mut PhaseState| {
            for (&p, &(pc, _)) in &peer {
                if pc == c {
                    st.alive[p] = false;
                }
            }
        };
        let sampled_own = self.sampled[own];
        if !self.last && sampled_own {
            return;
        }
        let join = if self.last {
            None
        } else {
            lightest.iter().filter(|(_, x)| x.2).min_by_key(|(_, x)| x.0).map(|(&c, &x)| (c, x))
        };
        match join {
            None => {
                for (&c, &(_, p, _)) in &lightest {
                    st.kept.push(p);
                    drop_to(c, st);
                }
                st.cluster = if self.last { Some(own) } else { None };
            }
            Some((star, (e_star, p_star, _))) => {
                st.kept.push(p_star);
                drop_to(star, st);
                for (&c, &(e, p, _)) in &lightest {
                    if e < e_star {
                        st.kept.push(p);
                        drop_to(c, st);
                    }
                }
                st.cluster = Some(star);
            }
        }
        for &p in peer.keys() {
            if !st.alive[p] && self.alive[u][p] {
                io.send(p, BsMsg::Drop { kept: st.kept.contains(&p) });
            }
        }
    }
}

impl Protocol for Phase<'_> {
    type State = PhaseState;
    type Msg = BsMsg;

    fn init(&self, io: &mut Io<'_, BsMsg>) -> PhaseState {
        let u = io.node();
        let st = PhaseState { alive: self.alive[u].clone(), cluster: self.cluster[u], ..Default::default() };
        if let Some(c) = self.cluster[u] {
            for p in 0..io.ports().len() {
                if st.alive[p] {
                    io.send(p, BsMsg::Hello { cluster: c, sampled: self.sampled[c] });
                }
            }
        }
        st
    }

    fn step(&self, st: &mut PhaseState, io: &mut Io<'_, BsMsg>) {
        if io.round() == 1 {
            self.decide(st, io);
        } else {
            for (port, m) in io.inbox() {
                if let BsMsg::Drop { kept } = *m {
                    st.alive[*port] = false;
                    if kept {
                        st.peer_kept.push(*port);
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpannerResult {
    /// Sorted edge ids of `H`.
    pub edges: Vec<EdgeId>,
    pub k: u32,
    pub f: u32,
    pub edge_count: usize,
    pub rounds: u64,
    pub construction: &'static str,
    /// Spanners built (one per sequential round or sampled subgraph).
    pub spanners: u32,
    /// `|H| / ((f+1) n^(1+1/k))`.
    pub size_ratio: f64,
}

/// Keeps each cluster center at phase `phase` with probability `n^(-1/k)`.
fn sample_centers(sim: &Sim<'_>, k: u32, salt: u64, phase: u32) -> Vec<bool> {
    let n = sim.graph().n();
    let p = (n.max(1) as f64).powf(-1.0 / k as f64);
    let stream = mix64(CLUSTER_STREAM ^ salt).wrapping_add(phase as u64);
    (0..n).map(|c| sim.coins().bernoulli(stream, c as u64, p)).collect()
}

/// One `(2k-1)`-spanner of the masked subgraph; returns edge positions.
pub(crate) fn spanner_positions(sim: &mut Sim<'_>, mask: &Mask, k: u32, salt: u64) -> Vec<usize> {
    let n = sim.graph().n();
    let mut alive: Vec<Vec<bool>> =
        (0..n).map(|u| sim.ports(u).iter().map(|p| p.peer != u && mask.usable(u, p)).collect()).collect();
    let mut cluster: Vec<Option<NodeId>> = (0..n).map(|u| mask.contains_node(u).then_some(u)).collect();
    let mut kept = vec![false; sim.graph().m()];
    for phase in 1..=k.max(1) {
        let last = phase == k.max(1);
        let sampled = if last { vec![false; n] } else { sample_centers(sim, k, salt, phase) };
        let run = sim.run(&Phase { alive: &alive, cluster: &cluster, sampled: &sampled, last });
        for (u, st) in run.states.into_iter().enumerate() {
            for &p in st.kept.iter().chain(&st.peer_kept) {
                kept[sim.ports(u)[p].pos] = true;
            }
            alive[u] = st.alive;
            cluster[u] = st.cluster;
        }
    }
    kept.iter().enumerate().filter(|(_, &k)| k).map(|(p, _)| p).collect()
}

pub(crate) fn result(sim: &Sim<'_>, positions: &[usize], k: u32, f: u32, rounds: u64, spanners: u32) -> SpannerResult {
    let g = sim.graph();
    let mut edges: Vec<EdgeId> = positions.iter().map(|&p| g.edge_at(p).id).collect();
    edges.sort_unstable();
    let n = g.n().max(1) as f64;
    SpannerResult {
        edge_count: edges.len(),
        size_ratio: edges.len() as f64 / ((f + 1) as f64 * n.powf(1.0 + 1.0 / k as f64)),
        edges,
        k,
        f,
        rounds,
        construction: "baswana-sen clustering",
        spanners,
    }
}

/// A `(2k-1)`-spanner of the whole network.
pub fn spanner_2k1(sim: &mut Sim<'_>, k: u32) -> SpannerResult {
    let start = sim.transcript().rounds;
    let mask = Mask::all(sim.graph());
    let pos = spanner_positions(sim, &mask, k.max(1), 0);
    let rounds = sim.transcript().rounds - start;
    result(sim, &pos, k.max(1), 0, rounds, 1)
}

/// `f + 1` spanners in sequence, each avoiding every edge already taken; tolerates `f` edge faults.
pub(crate) fn ft_edges_positions(sim: &mut Sim<'_>, base: &Mask, k: u32, f: u32, salt: u64) -> Vec<usize> {
    let mut mask = base.clone();
    let mut all = Vec::new();
    for i in 0..=f {
        let h = spanner_positions(sim, &mask, k, mix64(salt ^ (i as u64 + 1)));
        for &p in &h {
            mask.remove_edge(p);
        }
        if h.is_empty() {
            break;
        }
        all.extend(h);
    }
    all.sort_unstable();
    all
}

pub fn ft_spanner_edges(sim: &mut Sim<'_>, k: u32, f: u32) -> SpannerResult {
    let start = sim.transcript().rounds;
    let mask = Mask::all(sim.graph());
    let pos = ft_edges_positions(sim, &mask, k.max(1), f, 0);
    let rounds = sim.transcript().rounds - start;
    result(sim, &pos, k.max(1), f, rounds, f + 1)
}

const VERTEX_STREAM: u64 = 0x7674_7866;

/// Sampled subgraphs per vertex-fault spanner: `10 (f+1) ln n`.
pub fn vertex_ft_iterations(n: usize, f: u32) -> u32 {
    if f == 0 {
        return 1;
    }
    (10.0 * (f + 1) as f64 * (n.max(2) as f64).ln()).ceil() as u32
}

/// Union of spanners of induced subgraphs keeping each vertex w.p. `1 - 1/(f+1)`.
pub fn ft_spanner_vertices(sim: &mut Sim<'_>, k: u32, f: u32) -> SpannerResult {
    let g = sim.graph();
    let n = g.n();
    let start = sim.transcript().rounds;
    let keep = 1.0 - 1.0 / (f + 1) as f64;
    let iterations = vertex_ft_iterations(n, f);
    let mut taken = vec![false; g.m()];
    for j in 0..iterations {
        let dropped: Vec<NodeId> = if f == 0 {
            Vec::new()
        } else {
            (0..n).filter(|&v| !sim.coins().bernoulli(VERTEX_STREAM.wrapping_add(j as u64), v as u64, keep)).collect()
        };
        let mask = Mask::without_nodes(g, &dropped);
        for p in spanner_positions(sim, &mask, k.max(1), mix64(VERTEX_STREAM ^ j as u64)) {
            taken[p] = true;
        }
    }
    let pos: Vec<usize> = (0..g.m()).filter(|&p| taken[p]).collect();
    let rounds = sim.transcript().rounds - start;
    result(sim, &pos, k.max(1), f, rounds, iterations)
}
