//! Convergecast and downcast along a BFS tree built with announcements.

use super::bfs::BfsTree;
use super::broadcast::broadcast;
use crate::graph::{EdgeId, NodeId};
use crate::sim::{Io, Message, Protocol, Sim, Widths};

pub struct Convergecast<'a, T, F> {
    pub tree: &'a BfsTree,
    pub values: &'a [T],
    pub combine: F,
}

pub struct UpState<T> {
    pub acc: T,
    /// Values reported by each child port, in arrival order.
    pub from_children: Vec<(usize, T)>,
    sent: bool,
}

impl<T: Message, F: Fn(&T, &T) -> T> Convergecast<'_, T, F> {
    fn maybe_send(&self, st: &mut UpState<T>, io: &mut Io<'_, T>) {
        let u = io.node();
        if !st.sent && st.from_children.len() == self.tree.children[u].len() {
            st.sent = true;
            if let Some(p) = self.tree.parent[u] {
                io.send(p, st.acc.clone());
            }
        }
    }
}

impl<T: Message, F: Fn(&T, &T) -> T> Protocol for Convergecast<'_, T, F> {
    type State = UpState<T>;
    type Msg = T;

    fn init(&self, io: &mut Io<'_, T>) -> UpState<T> {
        let u = io.node();
        let mut st = UpState { acc: self.values[u].clone(), from_children: Vec::new(), sent: false };
        if self.tree.reached(u) {
            self.maybe_send(&mut st, io);
        }
        st
    }

    fn step(&self, st: &mut UpState<T>, io: &mut Io<'_, T>) {
        for (port, v) in io.inbox() {
            st.acc = (self.combine)(&st.acc, v);
            st.from_children.push((*port, v.clone()));
        }
        if !io.inbox().is_empty() {
            self.maybe_send(st, io);
        }
    }
}

/// Folds `values` up the tree; the root's `acc` is the aggregate over its reached subtree.
pub fn convergecast<T: Message, F: Fn(&T, &T) -> T>(
    sim: &mut Sim<'_>,
    tree: &BfsTree,
    values: &[T],
    combine: F,
) -> (Vec<UpState<T>>, u64) {
    let run = sim.run(&Convergecast { tree, values, combine });
    (run.states, run.transcript.rounds)
}

/// Pushes per-child values down the tree: `split(node, value)` yields `(child port, value)` pairs.
pub struct Downcast<'a, T, F> {
    pub tree: &'a BfsTree,
    pub root_value: T,
    pub split: F,
}

impl<T: Message, F: Fn(NodeId, &T) -> Vec<(usize, T)>> Protocol for Downcast<'_, T, F> {
    type State = Option<T>;
    type Msg = T;

    fn init(&self, io: &mut Io<'_, T>) -> Option<T> {
        let u = io.node();
        if self.tree.roots.contains(&u) && self.tree.reached(u) {
            for (port, v) in (self.split)(u, &self.root_value) {
                io.send(port, v);
            }
            Some(self.root_value.clone())
        } else {
            None
        }
    }

    fn step(&self, st: &mut Option<T>, io: &mut Io<'_, T>) {
        let u = io.node();
        if let Some((_, v)) = io.inbox().iter().find(|(p, _)| Some(*p) == self.tree.parent[u]) {
            for (port, w) in (self.split)(u, v) {
                io.send(port, w);
            }
            *st = Some(v.clone());
        }
    }
}

pub fn downcast<T: Message, F: Fn(NodeId, &T) -> Vec<(usize, T)>>(
    sim: &mut Sim<'_>,
    tree: &BfsTree,
    root_value: T,
    split: F,
) -> (Vec<Option<T>>, u64) {
    let run = sim.run(&Downcast { tree, root_value, split });
    (run.states, run.transcript.rounds)
}

/// Convergecast to the root followed by a broadcast of the result, so every node learns it.
pub fn all_reduce<T: Message, F: Fn(&T, &T) -> T>(
    sim: &mut Sim<'_>,
    tree: &BfsTree,
    values: &[T],
    combine: F,
) -> (T, u64) {
    let root = tree.source();
    let (states, up) = convergecast(sim, tree, values, combine);
    let result = states[root].acc.clone();
    let (_, down) = broadcast(sim, root, std::slice::from_ref(&result));
    (result, up + down)
}

/// A flag or small count, priced at the edge-id width.
#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq, PartialOrd, Ord)]
pub struct Word(pub u64);

impl Message for Word {
    fn bits(&self, w: &Widths) -> u32 {
        w.edge
    }
}

/// `(value, owner)` pair compared lexicographically.
#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ranked {
    pub value: u64,
    pub owner: NodeId,
}

impl Message for Ranked {
    fn bits(&self, w: &Widths) -> u32 {
        4 + w.node
    }
}

/// A single edge id.
#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeWord(pub EdgeId);

impl Message for EdgeWord {
    fn bits(&self, w: &Widths) -> u32 {
        w.edge
    }
}

/// A single node id.
#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq, PartialOrd, Ord)]
pub struct NodeWord(pub NodeId);

impl Message for NodeWord {
    fn bits(&self, w: &Widths) -> u32 {
        w.node
    }
}
