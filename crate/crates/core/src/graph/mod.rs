//! Undirected multigraphs with stable edge identities.
//!
//! Every algorithm in the crate runs on a [`Multigraph`]. Parallel edges are
//! first-class (each has its own [`EdgeId`]); self-loops are rejected.

mod generate;
mod io;
pub mod oracle;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generate::{generate, GeneratorSpec};
pub use io::{parse_graph, write_graph, ParseError};

/// Nodes are dense indices `0..n`.
pub type NodeId = usize;

/// Stable edge identity. Ids are unique within a graph; loaders assign `1..=m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
}

impl Edge {
    /// The endpoint opposite to `x`.
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }
}

/// One entry of a node's adjacency list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub edge: EdgeId,
    /// Position of the edge in [`Multigraph::edges`].
    pub pos: usize,
    pub peer: NodeId,
}

#[derive(Clone, Debug)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
    by_id: HashMap<EdgeId, usize>,
    adj: Vec<Vec<Incidence>>,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    /// Builds a graph from endpoint pairs, assigning ids `1..=m` in order.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let edges = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (u, v))| Edge { id: EdgeId(i as u32 + 1), u, v })
            .collect();
        Self::with_edges(n, edges)
    }

    /// Builds a graph from explicit edges; ids must be unique.
    pub fn with_edges(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut by_id = HashMap::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); n];
        for (pos, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {} has endpoint out of range (n = {n})",
                    e.id
                )));
            }
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("edge {} is a self-loop", e.id)));
            }
            if by_id.insert(e.id, pos).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge id {}", e.id)));
            }
            adj[e.u].push(Incidence { edge: e.id, pos, peer: e.v });
            adj[e.v].push(Incidence { edge: e.id, pos, peer: e.u });
        }
        for list in &mut adj {
            list.sort_by_key(|inc| inc.edge);
        }
        Ok(Self { n, edges, by_id, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_at(&self, pos: usize) -> &Edge {
        &self.edges[pos]
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.by_id.get(&id).map(|&p| &self.edges[p])
    }

    pub fn position(&self, id: EdgeId) -> Option<usize> {
        self.by_id.get(&id).copied()
    }

    /// Incident edges of `u`, sorted by ascending edge id. Parallel edges appear separately.
    pub fn incident(&self, u: NodeId) -> &[Incidence] {
        &self.adj[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_edge_id(&self) -> u32 {
        self.edges.iter().map(|e| e.id.0).max().unwrap_or(0)
    }

    pub fn adjacent(&self, u: NodeId, v: NodeId) -> bool {
        self.adj[u].iter().any(|inc| inc.peer == v)
    }

    /// Hop distances from `src` (`None` when unreachable).
    pub fn distances(&self, src: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for inc in &self.adj[u] {
                if dist[inc.peer].is_none() {
                    dist[inc.peer] = Some(du + 1);
                    queue.push_back(inc.peer);
                }
            }
        }
        dist
    }

    pub fn eccentricity(&self, src: NodeId) -> Option<usize> {
        self.distances(src).into_iter().try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// Hop diameter; `None` for disconnected graphs.
    pub fn diameter(&self) -> Option<usize> {
        (0..self.n).try_fold(0, |acc, u| self.eccentricity(u).map(|e| acc.max(e)))
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.distances(0).iter().all(Option::is_some)
    }

    /// Returns a copy whose edge at position `p` carries id `ids[p]`.
    pub fn with_ids(&self, ids: &[EdgeId]) -> Result<Self> {
        assert_eq!(ids.len(), self.m(), "one id per edge");
        let edges = self
            .edges
            .iter()
            .zip(ids)
            .map(|(e, &id)| Edge { id, ..*e })
            .collect();
        Self::with_edges(self.n, edges)
    }

    /// Subgraph on the same node set keeping the edges at the given positions (ids preserved).
    pub fn edge_subgraph<I: IntoIterator<Item = usize>>(&self, positions: I) -> Self {
        let mut keep: Vec<usize> = positions.into_iter().collect();
        keep.sort_unstable();
        keep.dedup();
        let edges = keep.into_iter().map(|p| self.edges[p]).collect();
        Self::with_edges(self.n, edges).expect("subgraph of a valid graph is valid")
    }
}

/// Whether a fault set deletes edges or vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaultKind {
    EdgeFaults,
    VertexFaults,
}

/// A set of deleted edges or deleted vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaultSet {
    Edges(BTreeSet<EdgeId>),
    Vertices(BTreeSet<NodeId>),
}

impl FaultSet {
    pub fn none() -> Self {
        FaultSet::Edges(BTreeSet::new())
    }

    pub fn edges<I: IntoIterator<Item = EdgeId>>(ids: I) -> Self {
        FaultSet::Edges(ids.into_iter().collect())
    }

    pub fn vertices<I: IntoIterator<Item = NodeId>>(ids: I) -> Self {
        FaultSet::Vertices(ids.into_iter().collect())
    }

    pub fn kind(&self) -> FaultKind {
        match self {
            FaultSet::Edges(_) => FaultKind::EdgeFaults,
            FaultSet::Vertices(_) => FaultKind::VertexFaults,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            FaultSet::Edges(s) => s.len(),
            FaultSet::Vertices(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks that every member exists in `g`.
    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        match self {
            FaultSet::Edges(s) => {
                if let Some(id) = s.iter().find(|id| g.edge(**id).is_none()) {
                    return Err(Error::InvalidArgument(format!("fault edge {id} not in graph")));
                }
            }
            FaultSet::Vertices(s) => {
                if let Some(v) = s.iter().find(|&&v| v >= g.n()) {
                    return Err(Error::InvalidArgument(format!("fault vertex {v} not in graph")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_edges_are_distinct_incidences() {
        let g = Multigraph::from_pairs(2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.incident(0)[0].edge, EdgeId(1));
        assert_eq!(g.incident(0)[1].edge, EdgeId(2));
    }

    #[test]
    fn rejects_self_loops_and_duplicate_ids() {
        assert!(Multigraph::from_pairs(2, [(1, 1)]).is_err());
        let e = Edge { id: EdgeId(5), u: 0, v: 1 };
        assert!(Multigraph::with_edges(2, vec![e, e]).is_err());
        assert!(Multigraph::from_pairs(2, [(0, 2)]).is_err());
    }

    #[test]
    fn diameter_of_cycle_and_disconnected() {
        let c6 = Multigraph::from_pairs(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert_eq!(c6.diameter(), Some(3));
        let two = Multigraph::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(two.diameter(), None);
        assert!(!two.is_connected());
    }

    #[test]
    fn incidences_sorted_by_id_even_with_custom_ids() {
        let edges = vec![
            Edge { id: EdgeId(40), u: 0, v: 1 },
            Edge { id: EdgeId(7), u: 0, v: 2 },
            Edge { id: EdgeId(19), u: 1, v: 2 },
        ];
        let g = Multigraph::with_edges(3, edges).unwrap();
        let ids: Vec<u32> = g.incident(0).iter().map(|i| i.edge.0).collect();
        assert_eq!(ids, vec![7, 40]);
        assert_eq!(g.position(EdgeId(19)), Some(2));
    }
}
