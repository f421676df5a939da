//! Cycle covers from the fundamental cycles of cluster trees.
//!
//! For every cluster tree, each intra-cluster non-tree edge `f = (x, y)` closes
//! one fundamental cycle. Its endpoints swap root paths over `f`, then each pushes
//! the finished cycle up its own side to the lowest common ancestor, so every
//! node on the cycle ends up knowing it. Streams share a port one at a time in
//! FIFO order, so congestion shows up as measured rounds.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::cover::{cover_selected, Clustering, Shifts};
use crate::graph::{EdgeId, NodeId};
use crate::primitives::{collect_root_paths, BfsTree, Hop, PathMsg, RootPath, Selector};
use crate::sim::{Io, Message, Protocol, Sim, Widths};
use crate::util::bits_for;

#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq)]
pub enum StreamMsg {
    /// Opens a stream of `len` items describing a walk from `start`; the receiver
    /// forwards it to its tree parent while `hops > 0`.
    Header { start: NodeId, len: u32, hops: u32 },
    Item(PathMsg),
}

impl Message for StreamMsg {
    fn bits(&self, w: &Widths) -> u32 {
        match self {
            StreamMsg::Header { len, hops, .. } => 1 + w.node + bits_for(*len as u64) + bits_for(*hops as u64),
            StreamMsg::Item(m) => 1 + m.bits(w),
        }
    }
}

/// A stream a node starts: out port, header hops, walk start, items.
pub struct Origin {
    pub port: usize,
    pub hops: u32,
    pub start: NodeId,
    pub items: Vec<PathMsg>,
}

struct Streams<'a> {
    parent: &'a [Option<usize>],
    origins: &'a [Vec<Origin>],
}

struct Flow {
    start: NodeId,
    len: u32,
    items: Vec<PathMsg>,
    arrived_on: Option<usize>,
}

#[derive(Default)]
struct StreamState {
    flows: Vec<Flow>,
    open_in: BTreeMap<usize, usize>,
    /// Per out port: queued `(flow, header hops)`, and progress on the head.
    queues: BTreeMap<usize, VecDeque<(usize, u32)>>,
    progress: BTreeMap<usize, (bool, usize)>,
}

impl Streams<'_> {
    fn pump(&self, st: &mut StreamState, io: &mut Io<'_, StreamMsg>) {
        for (&port, q) in st.queues.iter_mut() {
            let Some(&(f, hops)) = q.front() else { continue };
            let flow = &st.flows[f];
            let prog = st.progress.entry(port).or_insert((false, 0));
            if !prog.0 {
                io.send(port, StreamMsg::Header { start: flow.start, len: flow.len, hops });
                prog.0 = true;
            } else if prog.1 < flow.items.len() {
                io.send(port, StreamMsg::Item(flow.items[prog.1]));
                prog.1 += 1;
            } else {
                continue;
            }
            if prog.0 && prog.1 == flow.len as usize {
                q.pop_front();
                *prog = (false, 0);
            }
        }
    }
}

impl Protocol for Streams<'_> {
    type State = StreamState;
    type Msg = StreamMsg;

    fn init(&self, io: &mut Io<'_, StreamMsg>) -> StreamState {
        let mut st = StreamState::default();
        for o in &self.origins[io.node()] {
            st.flows.push(Flow { start: o.start, len: o.items.len() as u32, items: o.items.clone(), arrived_on: None });
            st.queues.entry(o.port).or_default().push_back((st.flows.len() - 1, o.hops));
        }
        self.pump(&mut st, io);
        st
    }

    fn step(&self, st: &mut StreamState, io: &mut Io<'_, StreamMsg>) {
        let u = io.node();
        for (port, msg) in io.inbox() {
            match *msg {
                StreamMsg::Header { start, len, hops } => {
                    st.flows.push(Flow { start, len, items: Vec::new(), arrived_on: Some(*port) });
                    let f = st.flows.len() - 1;
                    st.open_in.insert(*port, f);
                    if hops > 0 {
                        let up = self.parent[u].expect("forwarded streams climb the tree");
                        st.queues.entry(up).or_default().push_back((f, hops - 1));
                    }
                }
                StreamMsg::Item(m) => st.flows[st.open_in[port]].items.push(m),
            }
        }
        self.pump(st, io);
    }

    fn busy(&self, st: &StreamState) -> bool {
        st.queues.values().any(|q| !q.is_empty())
    }
}

/// Received streams per node as `(arrival port, walk)`.
fn run_streams(sim: &mut Sim<'_>, parent: &[Option<usize>], origins: &[Vec<Origin>]) -> Vec<Vec<(usize, Vec<Hop>)>> {
    let run = sim.run(&Streams { parent, origins });
    run.states
        .into_iter()
        .map(|st| {
            st.flows
                .into_iter()
                .filter_map(|f| f.arrived_on.map(|p| (p, walk(f.start, &f.items))))
                .collect()
        })
        .collect()
}

fn walk(start: NodeId, items: &[PathMsg]) -> Vec<Hop> {
    let mut at = start;
    items
        .iter()
        .map(|m| {
            let h = Hop { edge: m.edge, from: at, to: m.to };
            at = m.to;
            h
        })
        .collect()
}

fn to_items(hops: &[Hop]) -> Vec<PathMsg> {
    hops.iter().map(|h| PathMsg { edge: h.edge, to: h.to }).collect()
}

/// A closed walk with distinct edges, starting and ending at `hops[0].from`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub hops: Vec<Hop>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.hops.iter().map(|h| h.edge).collect()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.hops.iter().any(|h| h.edge == e)
    }

    /// Consecutive hops chain, the walk closes, and no edge repeats.
    pub fn is_valid(&self) -> bool {
        let chained = self.hops.windows(2).all(|w| w[0].to == w[1].from);
        let closed = self.hops.first().zip(self.hops.last()).is_some_and(|(a, b)| a.from == b.to);
        chained && closed && self.edge_set().len() == self.hops.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleCover {
    pub d_prime: u32,
    pub cycles: Vec<Cycle>,
    /// Cycle indices known to each node.
    #[serde(skip)]
    pub known: Vec<BTreeSet<usize>>,
    /// Selected edges on no emitted cycle.
    pub uncovered: Vec<EdgeId>,
    pub max_length: usize,
    /// `max_length / d_prime`.
    pub stretch: f64,
    /// Most cycles through a single edge.
    pub congestion: usize,
    pub cover_radius: u32,
    pub cover_overlap: usize,
    pub unpadded: usize,
    pub rounds: u64,
}

impl CycleCover {
    pub fn covering(&self, e: EdgeId) -> impl Iterator<Item = &Cycle> {
        self.cycles.iter().filter(move |c| c.contains(e))
    }
}

/// Fundamental cycle of `x`'s non-tree edge `(edge)` to `y`, from the two root paths.
/// Walk order: lca down to x, across, y back up to the lca.
fn fundamental(px: &RootPath, py: &RootPath, edge: EdgeId, x: NodeId, y: NodeId) -> (Vec<Hop>, usize, usize) {
    let common = px.iter().zip(py).take_while(|(a, b)| a == b).count();
    let mut hops: Vec<Hop> = px[common..].to_vec();
    hops.push(Hop { edge, from: x, to: y });
    hops.extend(py[common..].iter().rev().map(|h| Hop { edge: h.edge, from: h.to, to: h.from }));
    (hops, px.len() - common, py.len() - common)
}

fn cycles_of(sim: &mut Sim<'_>, sel: &impl Selector, c: &Clustering) -> Vec<BTreeMap<BTreeSet<EdgeId>, Vec<Hop>>> {
    let n = sim.graph().n();
    let tree: &BfsTree = &c.tree;
    let (paths, _) = collect_root_paths(sim, tree);
    // non-tree ports inside the node's own cluster
    let closing: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            (0..sim.ports(u).len())
                .filter(|&i| {
                    c.peer_center[u][i] == Some(c.center[u])
                        && sel.usable(u, &sim.ports(u)[i])
                        && tree.parent[u] != Some(i)
                        && !tree.children[u].contains(&i)
                })
                .collect()
        })
        .collect();
    let swap: Vec<Vec<Origin>> = (0..n)
        .map(|u| {
            closing[u]
                .iter()
                .map(|&port| Origin { port, hops: 0, start: c.center[u], items: to_items(&paths[u]) })
                .collect()
        })
        .collect();
    let heard = run_streams(sim, &tree.parent, &swap);

    let mut known: Vec<BTreeMap<BTreeSet<EdgeId>, Vec<Hop>>> = vec![BTreeMap::new(); n];
    let mut push: Vec<Vec<Origin>> = (0..n).map(|_| Vec::new()).collect();
    for u in 0..n {
        for (port, their_path) in &heard[u] {
            let p = sim.ports(u)[*port];
            // orient every cycle from the lower-id endpoint so both ends build the same walk
            let (x, y, px, py) =
                if u < p.peer { (u, p.peer, &paths[u], their_path) } else { (p.peer, u, their_path, &paths[u]) };
            let (hops, up_x, up_y) = fundamental(px, py, p.edge, x, y);
            let up = if u == x { up_x } else { up_y };
            let start = hops[0].from;
            if up > 0 {
                let parent = tree.parent[u].expect("a node below the lca has a parent");
                push[u].push(Origin { port: parent, hops: up as u32 - 1, start, items: to_items(&hops) });
            }
            known[u].insert(hops.iter().map(|h| h.edge).collect(), hops);
        }
    }
    for (u, streams) in run_streams(sim, &tree.parent, &push).into_iter().enumerate() {
        for (_, hops) in streams {
            known[u].insert(hops.iter().map(|h| h.edge).collect(), hops);
        }
    }
    known
}

/// Cycle cover of the selected subgraph: every edge on a cycle of length at most
/// `d_prime` there lies on some emitted cycle, known to all of that cycle's nodes.
pub fn cycle_cover_selected<S: Selector>(
    sim: &mut Sim<'_>,
    sel: &S,
    d_prime: u32,
    shifts: &Shifts,
    report: &BfsTree,
) -> CycleCover {
    let g = sim.graph();
    let n = g.n();
    let start = sim.transcript().rounds;
    let cover = cover_selected(sim, sel, d_prime / 2, shifts, report);
    let mut index: BTreeMap<BTreeSet<EdgeId>, usize> = BTreeMap::new();
    let mut cycles = Vec::new();
    let mut known = vec![BTreeSet::new(); n];
    for c in &cover.repetitions {
        for (u, per_node) in cycles_of(sim, sel, c).into_iter().enumerate() {
            for (set, hops) in per_node {
                let id = *index.entry(set).or_insert_with(|| {
                    cycles.push(Cycle { hops });
                    cycles.len() - 1
                });
                known[u].insert(id);
            }
        }
    }
    let mut load: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for c in &cycles {
        for h in &c.hops {
            *load.entry(h.edge).or_default() += 1;
        }
    }
    let uncovered = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(pos, e)| sel.contains_edge(e.id, *pos) && !load.contains_key(&e.id))
        .map(|(_, e)| e.id)
        .collect();
    let max_length = cycles.iter().map(Cycle::len).max().unwrap_or(0);
    CycleCover {
        d_prime,
        stretch: max_length as f64 / d_prime.max(1) as f64,
        congestion: load.values().copied().max().unwrap_or(0),
        max_length,
        cycles,
        known,
        uncovered,
        cover_radius: cover.max_radius,
        cover_overlap: cover.max_overlap,
        unpadded: cover.unpadded.len(),
        rounds: sim.transcript().rounds - start,
    }
}

/// Cycle cover of the selected subgraph, building its own spanning tree for coordination.
pub fn approx_cycle_cover<S: Selector>(sim: &mut Sim<'_>, sel: &S, d_prime: u32, shifts: &Shifts) -> CycleCover {
    let start = sim.transcript().rounds;
    let (tree, _) = crate::mincut::spanning_tree(sim, 0);
    let mut cc = cycle_cover_selected(sim, sel, d_prime, shifts, &tree);
    cc.rounds = sim.transcript().rounds - start;
    cc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, oracle, GeneratorSpec, Multigraph};
    use crate::primitives::SubgraphSelector;

    fn cover(g: &Multigraph, d: u32) -> CycleCover {
        let mut sim = Sim::with_defaults(g);
        approx_cycle_cover(&mut sim, &SubgraphSelector::All, d, &Shifts::IdHash { salt: 3 })
    }

    /// Every edge on some cycle of length at most `d`, via the oracle.
    fn short_cycle_edges(g: &Multigraph, d: usize) -> Vec<EdgeId> {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(pos, e)| oracle::bfs_filtered(g, e.u, |p| p != *pos, |_| true)[e.v].is_some_and(|x| x < d))
            .map(|(_, e)| e.id)
            .collect()
    }

    fn check(g: &Multigraph, cc: &CycleCover) {
        assert!(cc.cycles.iter().all(Cycle::is_valid));
        for e in short_cycle_edges(g, cc.d_prime as usize) {
            assert!(cc.covering(e).next().is_some(), "edge {e} uncovered");
        }
        // every node on a cycle knows it
        for (i, c) in cc.cycles.iter().enumerate() {
            for h in &c.hops {
                assert!(cc.known[h.from].contains(&i) && cc.known[h.to].contains(&i));
            }
        }
    }

    #[test]
    fn six_cycle() {
        let g = generate(&GeneratorSpec::Cycle(6), 0).unwrap();
        let cc = cover(&g, 6);
        check(&g, &cc);
        assert_eq!(cc.cycles.len(), 1);
        assert_eq!(cc.cycles[0].len(), 6);
    }

    #[test]
    fn bridge_is_uncovered() {
        let g = generate(&GeneratorSpec::TwoTriangles, 0).unwrap();
        let cc = cover(&g, 3);
        check(&g, &cc);
        assert_eq!(cc.uncovered, vec![EdgeId(7)]);
    }

    #[test]
    fn grid_faces() {
        let g = generate(&GeneratorSpec::Grid(3, 3), 0).unwrap();
        let cc = cover(&g, 4);
        check(&g, &cc);
        assert!(cc.uncovered.is_empty());
    }

    #[test]
    fn parallel_edges_make_two_cycles() {
        let g = generate(&GeneratorSpec::MultiCycle { n: 3, multiplicity: 2 }, 0).unwrap();
        let cc = cover(&g, 3);
        check(&g, &cc);
        assert!(cc.cycles.iter().any(|c| c.len() == 2));
    }
}
