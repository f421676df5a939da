//! Distributed edge renaming onto `1..=m`.
//!
//! Each edge is owned by its lower-id endpoint. A BFS tree from the component
//! leader convergecasts owned-edge counts, the leader hands out contiguous id
//! ranges by a prefix downcast, and owners tell the other endpoint the new id.

use std::collections::BTreeMap;

use super::aggregate::{convergecast, downcast, Word};
use super::bfs::bfs_tree;
use super::selector::SubgraphSelector;
use crate::graph::{EdgeId, Multigraph, NodeId};
use crate::sim::{Io, Message, Protocol, Sim, Widths};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    /// New id of the edge at each position.
    pub new_id: Vec<EdgeId>,
    /// Per node: new ids of incident edges as that node learned them, by position.
    pub known: Vec<BTreeMap<usize, EdgeId>>,
    pub rounds: u64,
    /// The graph had several components; each got its own contiguous range.
    pub disconnected: bool,
}

impl Renaming {
    pub fn apply(&self, g: &Multigraph) -> Multigraph {
        g.with_ids(&self.new_id).expect("renaming is a bijection")
    }
}

#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq)]
struct NewId(EdgeId);

impl Message for NewId {
    fn bits(&self, w: &Widths) -> u32 {
        w.edge
    }
}

struct Notify<'a> {
    start: &'a [Option<u64>],
    owned: &'a [Vec<usize>],
}

impl Protocol for Notify<'_> {
    type State = BTreeMap<usize, EdgeId>;
    type Msg = NewId;

    fn init(&self, io: &mut Io<'_, NewId>) -> Self::State {
        let u = io.node();
        let mut known = BTreeMap::new();
        if let Some(start) = self.start[u] {
            for (k, &port) in self.owned[u].iter().enumerate() {
                let id = EdgeId((start + k as u64) as u32);
                known.insert(io.ports()[port].pos, id);
                io.send(port, NewId(id));
            }
        }
        known
    }

    fn step(&self, known: &mut Self::State, io: &mut Io<'_, NewId>) {
        for (port, NewId(id)) in io.inbox() {
            known.insert(io.ports()[*port].pos, *id);
        }
    }
}

fn owned_ports(sim: &Sim<'_>, u: NodeId) -> Vec<usize> {
    // ports are in ascending original id order already
    (0..sim.ports(u).len()).filter(|&i| u < sim.ports(u)[i].peer).collect()
}

/// Renames every edge; components are handled leader by leader with consecutive ranges.
pub fn rename_edges(sim: &mut Sim<'_>) -> Renaming {
    let g = sim.graph();
    let n = g.n();
    let owned: Vec<Vec<usize>> = (0..n).map(|u| owned_ports(sim, u)).collect();
    let counts: Vec<Word> = owned.iter().map(|o| Word(o.len() as u64)).collect();
    let mut start: Vec<Option<u64>> = vec![None; n];
    let mut rounds = 0;
    let mut next = 1u64;
    let mut components = 0;
    while let Some(leader) = (0..n).find(|&u| start[u].is_none()) {
        components += 1;
        let tree = bfs_tree(sim, &SubgraphSelector::All, leader, n as u32);
        let (up, r1) = convergecast(sim, &tree, &counts, |a, b| Word(a.0 + b.0));
        let sub: Vec<BTreeMap<usize, u64>> =
            up.iter().map(|s| s.from_children.iter().map(|(p, w)| (*p, w.0)).collect()).collect();
        let total = up[leader].acc.0;
        let (offs, r2) = downcast(sim, &tree, Word(next), |u, v| {
            let mut off = v.0 + owned[u].len() as u64;
            let mut out = Vec::new();
            for (&port, &size) in &sub[u] {
                out.push((port, Word(off)));
                off += size;
            }
            out
        });
        for u in 0..n {
            if tree.reached(u) {
                start[u] = offs[u].map(|w| w.0);
            }
        }
        rounds += tree.rounds + r1 + r2;
        next += total;
    }
    let run = sim.run(&Notify { start: &start, owned: &owned });
    rounds += run.transcript.rounds;
    let known = run.states;
    let mut new_id = vec![EdgeId(0); g.m()];
    for map in &known {
        for (&pos, &id) in map {
            new_id[pos] = id;
        }
    }
    Renaming { new_id, known, rounds, disconnected: components > 1 }
}
