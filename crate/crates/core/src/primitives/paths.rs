//! Pipelined root-path collection down a BFS tree.
//!
//! Every node already knows its own parent edge, so in round 1 each node sends
//! that edge to its children; afterwards it relays whatever arrived from its
//! parent in the previous round. A node at depth `h` therefore hears its
//! ancestors' edges nearest-first and holds its whole path after `h - 1` rounds.

use serde::Serialize;

use super::bfs::BfsTree;
use crate::graph::{EdgeId, NodeId};
use crate::sim::{Io, Message, Protocol, Sim, Widths};

/// One tree edge, oriented away from the root.
#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Hop {
    pub edge: EdgeId,
    pub from: NodeId,
    pub to: NodeId,
}

/// Root-to-node path; first hop leaves the root, last hop enters the node.
pub type RootPath = Vec<Hop>;

/// On the wire: an edge and its endpoint farther from the root.
#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq)]
pub struct PathMsg {
    pub edge: EdgeId,
    pub to: NodeId,
}

impl Message for PathMsg {
    fn bits(&self, w: &Widths) -> u32 {
        w.edge + w.node
    }
}

pub struct RootPaths<'t> {
    pub tree: &'t BfsTree,
}

#[derive(Default)]
pub struct PathState {
    /// Received ancestors' edges, nearest first.
    heard: Vec<PathMsg>,
    relay: Option<PathMsg>,
}

impl Protocol for RootPaths<'_> {
    type State = PathState;
    type Msg = PathMsg;

    fn init(&self, io: &mut Io<'_, PathMsg>) -> PathState {
        let u = io.node();
        if let Some(edge) = self.tree.parent_edge[u] {
            let msg = PathMsg { edge, to: u };
            for &c in &self.tree.children[u] {
                io.send(c, msg);
            }
        }
        PathState::default()
    }

    fn step(&self, st: &mut PathState, io: &mut Io<'_, PathMsg>) {
        let u = io.node();
        let from_parent = io.inbox().iter().find(|(p, _)| Some(*p) == self.tree.parent[u]).map(|(_, m)| *m);
        if let Some(msg) = from_parent {
            st.heard.push(msg);
            st.relay = Some(msg);
        }
        if let Some(msg) = st.relay.take() {
            for &c in &self.tree.children[u] {
                io.send(c, msg);
            }
        }
    }
}

/// Every reached node learns its root path; unreached nodes get an empty path.
pub fn collect_root_paths(sim: &mut Sim<'_>, tree: &BfsTree) -> (Vec<RootPath>, u64) {
    let run = sim.run(&RootPaths { tree });
    let g = sim.graph();
    let paths = run
        .states
        .into_iter()
        .enumerate()
        .map(|(u, st)| {
            let Some(own) = tree.parent_edge[u] else {
                return Vec::new();
            };
            let mut ends: Vec<(EdgeId, NodeId)> = st.heard.iter().rev().map(|m| (m.edge, m.to)).collect();
            ends.push((own, u));
            let mut prev = tree.root[u].expect("reached node has a root");
            ends.into_iter()
                .map(|(edge, to)| {
                    let hop = Hop { edge, from: prev, to };
                    debug_assert!(g.edge(edge).is_some_and(|e| e.touches(prev) && e.touches(to)));
                    prev = to;
                    hop
                })
                .collect()
        })
        .collect();
    (paths, run.transcript.rounds)
}
