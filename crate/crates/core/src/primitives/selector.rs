//! Per-iteration subgraph membership, decidable locally by both endpoints.

use fixedbitset::FixedBitSet;

use crate::graph::{EdgeId, Multigraph, NodeId};
use crate::sim::{mix64, Coins, Port};

const EDGE_STREAM: u64 = 0x6564_6765;
const NODE_STREAM: u64 = 0x6e6f_6465;

pub trait Selector {
    fn contains_edge(&self, id: EdgeId, pos: usize) -> bool;

    fn contains_node(&self, _v: NodeId) -> bool {
        true
    }

    /// Whether `u` may use `port`; symmetric in the two endpoints by construction.
    fn usable(&self, u: NodeId, port: &Port) -> bool {
        self.contains_node(u) && self.contains_node(port.peer) && self.contains_edge(port.edge, port.pos)
    }
}

impl<S: Selector + ?Sized> Selector for &S {
    fn contains_edge(&self, id: EdgeId, pos: usize) -> bool {
        (**self).contains_edge(id, pos)
    }

    fn contains_node(&self, v: NodeId) -> bool {
        (**self).contains_node(v)
    }
}

/// The subgraph `G_i` of one sampling iteration.
#[derive(Clone, Debug)]
pub enum SubgraphSelector {
    All,
    /// Every edge independently with probability `p`, keyed by `(iteration, edge id)`.
    RandomEdges { p: f64, iteration: u64, coins: Coins },
    /// Every vertex independently with probability `p`, plus the `keep` vertices; induced subgraph.
    RandomVertices { p: f64, iteration: u64, coins: Coins, keep: Vec<NodeId> },
    /// Edges (by id) belonging to a universal-set member.
    Universal(crate::derand::MemberSet),
}

impl SubgraphSelector {
    pub fn random_edges(p: f64, iteration: u64, coins: &Coins) -> Self {
        SubgraphSelector::RandomEdges { p, iteration, coins: coins.clone() }
    }

    pub fn random_vertices(p: f64, iteration: u64, coins: &Coins, keep: Vec<NodeId>) -> Self {
        SubgraphSelector::RandomVertices { p, iteration, coins: coins.clone(), keep }
    }
}

impl Selector for SubgraphSelector {
    fn contains_edge(&self, id: EdgeId, _pos: usize) -> bool {
        match self {
            SubgraphSelector::RandomEdges { p, iteration, coins } => {
                *p >= 1.0 || coins.bernoulli(mix64(EDGE_STREAM ^ iteration), id.0 as u64, *p)
            }
            SubgraphSelector::Universal(member) => member.contains(id.0 as u64 - 1),
            _ => true,
        }
    }

    fn contains_node(&self, v: NodeId) -> bool {
        match self {
            SubgraphSelector::RandomVertices { p, iteration, coins, keep } => {
                keep.contains(&v) || *p >= 1.0 || coins.bernoulli(mix64(NODE_STREAM ^ iteration), v as u64, *p)
            }
            _ => true,
        }
    }
}

/// Explicit edge (by position) and node masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    edges: FixedBitSet,
    nodes: Option<FixedBitSet>,
}

impl Mask {
    pub fn all(g: &Multigraph) -> Self {
        let mut edges = FixedBitSet::with_capacity(g.m());
        edges.insert_range(..);
        Self { edges, nodes: None }
    }

    pub fn from_positions<I: IntoIterator<Item = usize>>(g: &Multigraph, positions: I) -> Self {
        let mut edges = FixedBitSet::with_capacity(g.m());
        positions.into_iter().for_each(|p| edges.insert(p));
        Self { edges, nodes: None }
    }

    /// Everything except the listed edges.
    pub fn without_edges<'a, I: IntoIterator<Item = &'a EdgeId>>(g: &Multigraph, ids: I) -> Self {
        let mut m = Self::all(g);
        for id in ids {
            if let Some(p) = g.position(*id) {
                m.edges.set(p, false);
            }
        }
        m
    }

    /// Everything except the listed nodes (and their incident edges).
    pub fn without_nodes<'a, I: IntoIterator<Item = &'a NodeId>>(g: &Multigraph, nodes: I) -> Self {
        let mut keep = FixedBitSet::with_capacity(g.n());
        keep.insert_range(..);
        for &v in nodes {
            keep.set(v, false);
        }
        Self { nodes: Some(keep), ..Self::all(g) }
    }

    pub fn remove_edge(&mut self, pos: usize) {
        self.edges.set(pos, false);
    }

    pub fn edge_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.ones()
    }
}

impl Selector for Mask {
    fn contains_edge(&self, _id: EdgeId, pos: usize) -> bool {
        self.edges.contains(pos)
    }

    fn contains_node(&self, v: NodeId) -> bool {
        self.nodes.as_ref().is_none_or(|s| s.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GeneratorSpec};
    use crate::sim::Sim;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn endpoints_agree(seed in any::<u64>(), iteration in 0u64..1_000, p in 0.0f64..1.0) {
            let g = generate(&GeneratorSpec::Complete(6), 0).unwrap();
            let sim = Sim::with_defaults(&g);
            let coins = Coins::new(seed);
            let sels = [
                SubgraphSelector::random_edges(p, iteration, &coins),
                SubgraphSelector::random_vertices(p, iteration, &coins, vec![0]),
            ];
            for sel in &sels {
                for u in 0..g.n() {
                    for port in sim.ports(u) {
                        let back = &sim.ports(port.peer)[port.back];
                        prop_assert_eq!(sel.usable(u, port), sel.usable(port.peer, back));
                    }
                }
            }
        }
    }

    #[test]
    fn p_one_is_all() {
        let coins = Coins::new(1);
        let sel = SubgraphSelector::random_edges(1.0, 3, &coins);
        assert!((1..100).all(|i| sel.contains_edge(EdgeId(i), 0)));
        assert_eq!(coins.draws(), 0);
    }

    #[test]
    fn vertex_sampling_keeps_sources() {
        let coins = Coins::new(1);
        let sel = SubgraphSelector::random_vertices(0.0, 0, &coins, vec![2, 5]);
        assert!(sel.contains_node(2) && sel.contains_node(5) && !sel.contains_node(3));
    }
}
