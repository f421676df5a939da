//! Neighborhood covers from exponentially shifted clusterings.
//!
//! One repetition draws a shift `delta_v` per node and lets every node join the
//! center maximizing `delta_c - dist(c, v)` (ties to the lower center id). This is
//! a Bellman-Ford flood of offers; the node an offer arrived from becomes the
//! parent, and the parents form shortest-path trees inside each cluster.
//! Repetitions continue until every node has been *padded* at least once, i.e.
//! its whole `k`-ball landed in its own cluster.

use serde::Serialize;

use crate::graph::NodeId;
use crate::primitives::{all_reduce, BfsTree, Selector, Word};
use crate::sim::{mix64, Coins, Io, Message, Protocol, Sim, Widths};
use crate::util::ceil_log2;

const SHIFT_STREAM: u64 = 0x73_6869_6674;

/// Where the shifts come from.
#[derive(Clone, Debug)]
pub enum Shifts {
    Random { coins: Coins, salt: u64 },
    /// Derived from node ids by hashing; consumes no coins.
    IdHash { salt: u64 },
}

impl Shifts {
    fn unit(&self, rep: u64, v: NodeId) -> f64 {
        match self {
            Shifts::Random { coins, salt } => coins.unit(mix64(SHIFT_STREAM ^ salt).wrapping_add(rep), v as u64),
            Shifts::IdHash { salt } => {
                let z = mix64(mix64(mix64(SHIFT_STREAM ^ salt).wrapping_add(rep)) ^ v as u64);
                (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
            }
        }
    }

    /// `floor(Exp(1 / 2k))`.
    fn shift(&self, rep: u64, v: NodeId, k: u32) -> i64 {
        let u = self.unit(rep, v);
        (-(1.0 - u).ln() * 2.0 * k.max(1) as f64).floor().min(1e6) as i64
    }
}

#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq)]
struct Offer {
    score: i64,
    center: NodeId,
}

impl Message for Offer {
    fn bits(&self, w: &Widths) -> u32 {
        w.node + 20
    }
}

fn better(a: (i64, NodeId), b: (i64, NodeId)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

struct Shifted<'a, S> {
    sel: &'a S,
    shift: &'a [i64],
}

#[derive(Clone, Copy)]
struct ShiftState {
    best: (i64, NodeId),
    parent: Option<usize>,
}

impl<S: Selector> Protocol for Shifted<'_, S> {
    type State = ShiftState;
    type Msg = Offer;

    fn init(&self, io: &mut Io<'_, Offer>) -> ShiftState {
        let u = io.node();
        let st = ShiftState { best: (self.shift[u], u), parent: None };
        io.send_where(&Offer { score: st.best.0, center: u }, |_, p| self.sel.usable(u, p));
        st
    }

    fn step(&self, st: &mut ShiftState, io: &mut Io<'_, Offer>) {
        let u = io.node();
        let mut changed = false;
        for (port, o) in io.inbox() {
            let cand = (o.score - 1, o.center);
            if better(cand, st.best) {
                st.best = cand;
                st.parent = Some(*port);
                changed = true;
            }
        }
        if changed {
            let msg = Offer { score: st.best.0, center: st.best.1 };
            io.send_where(&msg, |_, p| self.sel.usable(u, p));
        }
    }
}

#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq)]
struct Hello {
    center: NodeId,
    child: bool,
}

impl Message for Hello {
    fn bits(&self, w: &Widths) -> u32 {
        w.node + 1
    }
}

struct Greet<'a, S> {
    sel: &'a S,
    center: &'a [NodeId],
    parent: &'a [Option<usize>],
}

impl<S: Selector> Protocol for Greet<'_, S> {
    /// Per port: the peer's center (usable ports only), and the child ports.
    type State = (Vec<Option<NodeId>>, Vec<usize>);
    type Msg = Hello;

    fn init(&self, io: &mut Io<'_, Hello>) -> Self::State {
        let u = io.node();
        for (i, p) in io.ports().iter().enumerate() {
            if self.sel.usable(u, p) {
                io.send(i, Hello { center: self.center[u], child: self.parent[u] == Some(i) });
            }
        }
        (vec![None; io.ports().len()], Vec::new())
    }

    fn step(&self, st: &mut Self::State, io: &mut Io<'_, Hello>) {
        for (port, h) in io.inbox() {
            st.0[*port] = Some(h.center);
            if h.child {
                st.1.push(*port);
            }
        }
    }
}

/// `Some(c)` while everything within the rounds so far shares center `c`.
#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq)]
struct Uniform(Option<NodeId>);

impl Message for Uniform {
    fn bits(&self, w: &Widths) -> u32 {
        w.node + 1
    }
}

struct PadCheck<'a, S> {
    sel: &'a S,
    center: &'a [NodeId],
    k: u32,
}

impl<S: Selector> Protocol for PadCheck<'_, S> {
    type State = Uniform;
    type Msg = Uniform;

    fn init(&self, io: &mut Io<'_, Uniform>) -> Uniform {
        let u = io.node();
        let st = Uniform(Some(self.center[u]));
        if self.k > 0 {
            io.send_where(&st, |_, p| self.sel.usable(u, p));
        }
        st
    }

    fn step(&self, st: &mut Uniform, io: &mut Io<'_, Uniform>) {
        let u = io.node();
        if io.inbox().iter().any(|(_, m)| *m != *st) {
            *st = Uniform(None);
        }
        if io.round() < self.k as u64 {
            io.send_where(st, |_, p| self.sel.usable(u, p));
        }
    }
}

/// One clustering of the selected subgraph.
#[derive(Clone, Debug)]
pub struct Clustering {
    pub center: Vec<NodeId>,
    /// Forest of cluster trees; roots are the centers.
    pub tree: BfsTree,
    /// Per node and port: the peer's center, for ports inside the selected subgraph.
    pub peer_center: Vec<Vec<Option<NodeId>>>,
    /// The node's whole `k`-ball lies in its cluster.
    pub padded: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverCluster {
    pub id: usize,
    pub repetition: usize,
    pub center: NodeId,
    pub members: Vec<NodeId>,
    pub radius: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct NeighborhoodCover {
    pub k: u32,
    pub clusters: Vec<CoverCluster>,
    #[serde(skip)]
    pub repetitions: Vec<Clustering>,
    pub rounds: u64,
    pub max_radius: u32,
    /// Largest number of clusters any node belongs to.
    pub max_overlap: usize,
    /// Nodes never padded within the repetition cap.
    pub unpadded: Vec<NodeId>,
}

fn cluster_once<S: Selector>(sim: &mut Sim<'_>, sel: &S, k: u32, shifts: &Shifts, rep: u64) -> Clustering {
    let n = sim.graph().n();
    let shift: Vec<i64> = (0..n).map(|v| shifts.shift(rep, v, k)).collect();
    let run = sim.run(&Shifted { sel, shift: &shift });
    let center: Vec<NodeId> = run.states.iter().map(|s| s.best.1).collect();
    let parent: Vec<Option<usize>> = run.states.iter().map(|s| s.parent).collect();
    let depth: Vec<Option<u32>> = run.states.iter().map(|s| Some((shift[s.best.1] - s.best.0) as u32)).collect();
    let greet = sim.run(&Greet { sel, center: &center, parent: &parent });
    let pad = sim.run(&PadCheck { sel, center: &center, k });
    let (peer_center, children): (Vec<_>, Vec<_>) = greet
        .states
        .into_iter()
        .map(|(pc, mut ch)| {
            ch.sort_unstable();
            (pc, ch)
        })
        .unzip();
    let tree = BfsTree {
        roots: (0..n).filter(|&v| center[v] == v).collect(),
        parent_edge: (0..n).map(|u| parent[u].map(|p| sim.ports(u)[p].edge)).collect(),
        root: center.iter().map(|&c| Some(c)).collect(),
        depth,
        parent,
        children,
        rounds: run.transcript.rounds,
    };
    let padded = (0..n).map(|v| pad.states[v] == Uniform(Some(center[v]))).collect();
    Clustering { center, tree, peer_center, padded }
}

/// Cover of the selected subgraph in which every node's `k`-ball lies inside one cluster.
///
/// `report` is a spanning tree of the network, used to agree on when to stop.
pub fn cover_selected<S: Selector>(
    sim: &mut Sim<'_>,
    sel: &S,
    k: u32,
    shifts: &Shifts,
    report: &BfsTree,
) -> NeighborhoodCover {
    let n = sim.graph().n();
    let start = sim.transcript().rounds;
    let cap = 4 * ceil_log2(n.max(2) as u64) as u64 + 8;
    let target = report.reached_count() as u64;
    let mut covered = vec![false; n];
    let mut reps = Vec::new();
    for rep in 0..cap {
        let c = cluster_once(sim, sel, k, shifts, rep);
        for v in 0..n {
            covered[v] |= c.padded[v];
        }
        reps.push(c);
        let flags: Vec<Word> = (0..n).map(|v| Word((covered[v] && report.reached(v)) as u64)).collect();
        let (count, _) = all_reduce(sim, report, &flags, |a, b| Word(a.0 + b.0));
        if count.0 >= target {
            break;
        }
    }
    let mut clusters = Vec::new();
    let mut overlap = vec![0usize; n];
    for (r, c) in reps.iter().enumerate() {
        for &center in &c.tree.roots {
            let members: Vec<NodeId> = (0..n).filter(|&v| c.center[v] == center).collect();
            let radius = members.iter().filter_map(|&v| c.tree.depth[v]).max().unwrap_or(0);
            for &v in &members {
                overlap[v] += 1;
            }
            clusters.push(CoverCluster { id: clusters.len(), repetition: r, center, members, radius });
        }
    }
    NeighborhoodCover {
        k,
        max_radius: clusters.iter().map(|c| c.radius).max().unwrap_or(0),
        max_overlap: overlap.into_iter().max().unwrap_or(0),
        unpadded: (0..n).filter(|&v| !covered[v]).collect(),
        clusters,
        repetitions: reps,
        rounds: sim.transcript().rounds - start,
    }
}

/// Neighborhood cover of the whole network with parameter `k`.
pub fn neighborhood_cover(sim: &mut Sim<'_>, k: u32, shifts: &Shifts) -> NeighborhoodCover {
    let start = sim.transcript().rounds;
    let (tree, _) = crate::mincut::spanning_tree(sim, 0);
    let mut cover = cover_selected(sim, &crate::primitives::SubgraphSelector::All, k, shifts, &tree);
    cover.rounds = sim.transcript().rounds - start;
    cover
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, oracle, GeneratorSpec, Multigraph};

    /// Property (1), checked centrally: each ball sits inside some cluster.
    fn balls_covered(g: &Multigraph, cover: &NeighborhoodCover) -> bool {
        (0..g.n()).all(|v| {
            let ball: Vec<NodeId> =
                g.distances(v).iter().enumerate().filter(|(_, d)| d.is_some_and(|d| d <= cover.k as usize)).map(|(x, _)| x).collect();
            cover.clusters.iter().any(|c| ball.iter().all(|x| c.members.contains(x)))
        })
    }

    #[test]
    fn large_k_gives_whole_graph() {
        let g = generate(&GeneratorSpec::Grid(3, 3), 0).unwrap();
        let mut sim = Sim::with_defaults(&g);
        let cover = neighborhood_cover(&mut sim, 4, &Shifts::IdHash { salt: 1 });
        assert!(cover.unpadded.is_empty());
        assert!(cover.clusters.iter().any(|c| c.members.len() == 9));
    }

    #[test]
    fn cycle_twelve_unit_balls() {
        let g = generate(&GeneratorSpec::Cycle(12), 0).unwrap();
        for seed in 0..5 {
            let mut sim = Sim::new(&g, crate::sim::SimConfig::for_graph(&g).seed(seed));
            let coins = sim.coins().clone();
            let cover = neighborhood_cover(&mut sim, 1, &Shifts::Random { coins, salt: 0 });
            assert!(cover.unpadded.is_empty());
            assert!(balls_covered(&g, &cover));
            assert!(cover.max_overlap <= 4 * 4 + 8);
        }
    }

    #[test]
    fn cluster_trees_are_shortest_paths() {
        let g = generate(&GeneratorSpec::Petersen, 0).unwrap();
        let mut sim = Sim::with_defaults(&g);
        let cover = neighborhood_cover(&mut sim, 1, &Shifts::IdHash { salt: 7 });
        for c in &cover.repetitions {
            for v in 0..g.n() {
                let d = c.tree.depth[v].unwrap() as usize;
                assert_eq!(oracle::bfs_filtered(&g, c.center[v], |_| true, |x| c.center[x] == c.center[v])[v], Some(d));
                if let Some(p) = c.tree.parent[v] {
                    assert_eq!(c.center[sim.ports(v)[p].peer], c.center[v]);
                }
            }
        }
        assert!(balls_covered(&g, &cover));
    }
}
