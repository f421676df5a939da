//! Truncated BFS on a selected subgraph.

use super::selector::Selector;
use crate::graph::{EdgeId, NodeId};
use crate::sim::{Io, Message, Protocol, Sim, Widths};

/// A BFS forest; single-source in the common case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsTree {
    pub roots: Vec<NodeId>,
    pub depth: Vec<Option<u32>>,
    /// Port towards the parent.
    pub parent: Vec<Option<usize>>,
    pub parent_edge: Vec<Option<EdgeId>>,
    /// Root each node hangs from.
    pub root: Vec<Option<NodeId>>,
    /// Child ports; filled only when the tree was built with announcements.
    pub children: Vec<Vec<usize>>,
    pub rounds: u64,
}

impl BfsTree {
    pub fn source(&self) -> NodeId {
        self.roots[0]
    }

    pub fn reached(&self, v: NodeId) -> bool {
        self.depth[v].is_some()
    }

    pub fn reached_count(&self) -> usize {
        self.depth.iter().filter(|d| d.is_some()).count()
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().flatten().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Hash, PartialEq, Eq)]
pub enum BfsMsg {
    Explore { root: NodeId },
    Adopt,
}

impl Message for BfsMsg {
    fn bits(&self, w: &Widths) -> u32 {
        match self {
            BfsMsg::Explore { .. } => 1 + w.node,
            BfsMsg::Adopt => 1,
        }
    }
}

pub struct TruncatedBfs<'a, S> {
    pub sel: &'a S,
    pub roots: &'a [NodeId],
    pub cap: u32,
    /// Children tell their parent about themselves (one extra round).
    pub announce: bool,
}

#[derive(Clone, Debug, Default)]
pub struct BfsState {
    depth: Option<u32>,
    parent: Option<usize>,
    root: Option<NodeId>,
    children: Vec<usize>,
}

impl<S: Selector> Protocol for TruncatedBfs<'_, S> {
    type State = BfsState;
    type Msg = BfsMsg;

    fn init(&self, io: &mut Io<'_, BfsMsg>) -> BfsState {
        let u = io.node();
        let mut st = BfsState::default();
        if self.roots.contains(&u) && self.sel.contains_node(u) {
            st.depth = Some(0);
            st.root = Some(u);
            if self.cap > 0 {
                io.send_where(&BfsMsg::Explore { root: u }, |_, p| self.sel.usable(u, p));
            }
        }
        st
    }

    fn step(&self, st: &mut BfsState, io: &mut Io<'_, BfsMsg>) {
        let u = io.node();
        let inbox = io.inbox();
        for (port, msg) in inbox {
            if *msg == BfsMsg::Adopt {
                st.children.push(*port);
            }
        }
        if st.depth.is_some() {
            return;
        }
        // ports are sorted by edge id, so the first explore comes over the lowest id
        let Some((pport, BfsMsg::Explore { root })) = inbox.iter().find(|(_, m)| matches!(m, BfsMsg::Explore { .. }))
        else {
            return;
        };
        let d = io.round() as u32;
        st.depth = Some(d);
        st.parent = Some(*pport);
        st.root = Some(*root);
        if self.announce {
            io.send(*pport, BfsMsg::Adopt);
        }
        if d < self.cap {
            let heard: Vec<usize> =
                inbox.iter().filter(|(_, m)| matches!(m, BfsMsg::Explore { .. })).map(|(p, _)| *p).collect();
            let msg = BfsMsg::Explore { root: *root };
            io.send_where(&msg, |i, p| !heard.contains(&i) && self.sel.usable(u, p));
        }
    }
}

/// BFS from `roots` up to depth `cap` inside the selected subgraph.
pub fn bfs_forest<S: Selector>(sim: &mut Sim<'_>, sel: &S, roots: &[NodeId], cap: u32, announce: bool) -> BfsTree {
    let run = sim.run(&TruncatedBfs { sel, roots, cap, announce });
    let mut tree = BfsTree {
        roots: roots.to_vec(),
        depth: Vec::with_capacity(run.states.len()),
        parent: Vec::with_capacity(run.states.len()),
        parent_edge: Vec::with_capacity(run.states.len()),
        root: Vec::with_capacity(run.states.len()),
        children: Vec::with_capacity(run.states.len()),
        rounds: run.transcript.rounds,
    };
    for (u, st) in run.states.into_iter().enumerate() {
        tree.depth.push(st.depth);
        tree.parent.push(st.parent);
        tree.parent_edge.push(st.parent.map(|p| sim.ports(u)[p].edge));
        tree.root.push(st.root);
        let mut ch = st.children;
        ch.sort_unstable();
        tree.children.push(ch);
    }
    tree
}

/// Single-source truncated BFS.
pub fn truncated_bfs<S: Selector>(sim: &mut Sim<'_>, sel: &S, s: NodeId, cap: u32) -> BfsTree {
    bfs_forest(sim, sel, &[s], cap, false)
}

/// Single-source BFS whose nodes also learn their children.
pub fn bfs_tree<S: Selector>(sim: &mut Sim<'_>, sel: &S, s: NodeId, cap: u32) -> BfsTree {
    bfs_forest(sim, sel, &[s], cap, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, oracle, GeneratorSpec, Multigraph};
    use crate::primitives::selector::{Mask, SubgraphSelector};
    use crate::sim::Coins;
    use proptest::prelude::*;

    fn gen(s: &str) -> Multigraph {
        generate(&s.parse::<GeneratorSpec>().unwrap(), 0).unwrap()
    }

    #[test]
    fn c8_cap3_misses_antipode() {
        let g = gen("cycle(8)");
        let t = truncated_bfs(&mut Sim::with_defaults(&g), &SubgraphSelector::All, 0, 3);
        assert_eq!(t.reached_count(), 7);
        assert!(!t.reached(4));
        assert!(t.rounds <= 4);
    }

    #[test]
    fn grid_corner_takes_depth_rounds() {
        let g = gen("grid(3,3)");
        let t = truncated_bfs(&mut Sim::with_defaults(&g), &SubgraphSelector::All, 0, 10);
        assert_eq!(t.max_depth(), 4);
        assert_eq!(t.rounds, 4);
    }

    #[test]
    fn p_one_matches_all() {
        let g = gen("petersen");
        let coins = Coins::new(5);
        let a = truncated_bfs(&mut Sim::with_defaults(&g), &SubgraphSelector::All, 3, 2);
        let b = truncated_bfs(&mut Sim::with_defaults(&g), &SubgraphSelector::random_edges(1.0, 0, &coins), 3, 2);
        assert_eq!(a, b);
    }

    #[test]
    fn bridge_exclusion_cuts_off_right_triangle() {
        let g = gen("two-triangles");
        let mask = Mask::without_edges(&g, &[EdgeId(7)]);
        let t = truncated_bfs(&mut Sim::with_defaults(&g), &mask, 0, 10);
        assert_eq!((0..6).filter(|&v| t.reached(v)).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn parent_is_lowest_id_edge() {
        // node 3 of C_4 hears from 0 (edge 4) and 2 (edge 3) at once
        let g = gen("cycle(4)");
        let t = bfs_tree(&mut Sim::with_defaults(&g), &SubgraphSelector::All, 1, 5);
        assert_eq!(t.parent_edge[3], Some(EdgeId(3)));
        assert_eq!(t.children[2].len(), 1);
    }

    proptest! {
        #[test]
        fn full_bfs_equals_oracle(n in 4usize..14, lambda in 1usize..4, seed in 0u64..1000, src in 0usize..14) {
            prop_assume!(lambda < n);
            let g = generate(&GeneratorSpec::RandomLambda { n, lambda, extra: 0.15 }, seed).unwrap();
            let s = src % n;
            let d = g.diameter().unwrap() as u32;
            let t = bfs_tree(&mut Sim::with_defaults(&g), &SubgraphSelector::All, s, d);
            let want = oracle::bfs_filtered(&g, s, |_| true, |_| true);
            for v in 0..n {
                prop_assert_eq!(t.depth[v].map(|x| x as usize), want[v]);
                if let Some(p) = t.parent[v] {
                    let parent = g.edge(t.parent_edge[v].unwrap()).unwrap().other(v);
                    prop_assert_eq!(t.depth[parent].unwrap() + 1, t.depth[v].unwrap());
                    prop_assert!(t.children[parent].iter().any(|&c| Sim::with_defaults(&g).ports(parent)[c].peer == v));
                    let _ = p;
                }
            }
            prop_assert!(t.rounds <= d as u64 + 2);
        }
    }
}
