//! Distributed cut verification by a single truncated BFS.
//!
//! Removing at most `lambda` edges from a graph of diameter `D` leaves every
//! surviving component with diameter at most `(lambda + 1) D + lambda`, which is
//! at most `3 lambda D`. So a BFS of that depth from any node reaches everything
//! unless the edges form a cut. For vertex removals the bound is
//! `(lambda * Delta + 1)(2D + 1)`: along a shortest surviving path, points spaced
//! `2D + 1` apart each sit within `D` of a distinct neighbour of the removed set.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId};
use crate::primitives::{all_reduce, truncated_bfs, BfsTree, Mask, Word};
use crate::sim::Sim;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub is_cut: bool,
    /// Rounds of the verification BFS.
    pub rounds: u64,
    /// Rounds spent aggregating the verdict over a spanning tree (0 without one).
    pub report_rounds: u64,
}

/// Depth of the verification BFS for an edge set of size `lambda`.
pub fn edge_verify_depth(lambda: u64, diameter: u32) -> u32 {
    (3 * lambda.max(1) * diameter.max(1) as u64) as u32
}

/// Depth of the verification BFS for a vertex set of size `lambda`.
pub fn vertex_verify_depth(lambda: u64, diameter: u32, max_degree: u32) -> u32 {
    ((lambda * max_degree as u64 + 1) * (2 * diameter.max(1) as u64 + 1)) as u32
}

fn count_reached(sim: &mut Sim<'_>, bfs: &BfsTree, report: Option<&BfsTree>) -> u64 {
    let Some(tree) = report else { return 0 };
    let flags: Vec<Word> = (0..sim.graph().n()).map(|u| Word(bfs.reached(u) as u64)).collect();
    let (total, rounds) = all_reduce(sim, tree, &flags, |a, b| Word(a.0 + b.0));
    debug_assert_eq!(total.0 as usize, bfs.reached_count());
    rounds
}

/// Whether removing `cut` disconnects the graph. All nodes are assumed to know `cut`.
///
/// With `report`, a spanning BFS tree of the graph, the reached-node count is
/// summed over it so every node learns the verdict.
pub fn verify_cut(
    sim: &mut Sim<'_>,
    cut: &[EdgeId],
    lambda: u64,
    diameter: u32,
    report: Option<&BfsTree>,
) -> Result<Verdict> {
    if cut.len() as u64 > lambda {
        return Err(Error::InvalidArgument(format!("cut of size {} exceeds lambda = {lambda}", cut.len())));
    }
    let g = sim.graph();
    if let Some(bad) = cut.iter().find(|id| g.edge(**id).is_none()) {
        return Err(Error::InvalidArgument(format!("edge {bad} is not in the graph")));
    }
    if g.n() == 0 {
        return Ok(Verdict { is_cut: false, rounds: 0, report_rounds: 0 });
    }
    let mask = Mask::without_edges(g, cut);
    let bfs = truncated_bfs(sim, &mask, 0, edge_verify_depth(lambda, diameter));
    let report_rounds = count_reached(sim, &bfs, report);
    Ok(Verdict { is_cut: bfs.reached_count() < g.n(), rounds: bfs.rounds, report_rounds })
}

/// Whether removing the vertices `cut` disconnects the remaining graph.
pub fn verify_vertex_cut(
    sim: &mut Sim<'_>,
    cut: &[NodeId],
    lambda: u64,
    diameter: u32,
    max_degree: u32,
    report: Option<&BfsTree>,
) -> Result<Verdict> {
    if cut.len() as u64 > lambda {
        return Err(Error::InvalidArgument(format!("cut of size {} exceeds lambda = {lambda}", cut.len())));
    }
    let g = sim.graph();
    if let Some(bad) = cut.iter().find(|&&v| v >= g.n()) {
        return Err(Error::InvalidArgument(format!("node {bad} is not in the graph")));
    }
    let mut removed = cut.to_vec();
    removed.sort_unstable();
    removed.dedup();
    let alive = g.n() - removed.len();
    let Some(src) = (0..g.n()).find(|v| removed.binary_search(v).is_err()) else {
        return Ok(Verdict { is_cut: false, rounds: 0, report_rounds: 0 });
    };
    let mask = Mask::without_nodes(g, &removed);
    let bfs = truncated_bfs(sim, &mask, src, vertex_verify_depth(lambda, diameter, max_degree));
    let report_rounds = count_reached(sim, &bfs, report);
    Ok(Verdict { is_cut: alive >= 2 && bfs.reached_count() < alive, rounds: bfs.rounds, report_rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GeneratorSpec, Multigraph};

    fn verdict(g: &Multigraph, cut: &[u32], lambda: u64) -> Verdict {
        let mut sim = Sim::with_defaults(g);
        let ids: Vec<EdgeId> = cut.iter().map(|&i| EdgeId(i)).collect();
        verify_cut(&mut sim, &ids, lambda, g.diameter().unwrap() as u32, None).unwrap()
    }

    #[test]
    fn bridge_and_cycle() {
        let g = generate(&GeneratorSpec::TwoTriangles, 0).unwrap();
        assert!(verdict(&g, &[7], 1).is_cut);
        let c6 = generate(&GeneratorSpec::Cycle(6), 0).unwrap();
        assert!(!verdict(&c6, &[1], 1).is_cut);
        let v = verdict(&c6, &[1, 4], 2);
        assert!(v.is_cut);
        assert!(v.rounds <= 3 * 2 * 3 + 4);
    }

    #[test]
    fn rejects_oversized_sets() {
        let g = generate(&GeneratorSpec::Cycle(6), 0).unwrap();
        let mut sim = Sim::with_defaults(&g);
        assert!(verify_cut(&mut sim, &[EdgeId(1), EdgeId(2)], 1, 3, None).is_err());
    }

    #[test]
    fn vertex_sets() {
        let g = generate(&GeneratorSpec::Cycle(4), 0).unwrap();
        let mut sim = Sim::with_defaults(&g);
        assert!(verify_vertex_cut(&mut sim, &[1, 3], 2, 2, 2, None).unwrap().is_cut);
        assert!(!verify_vertex_cut(&mut sim, &[1], 2, 2, 2, None).unwrap().is_cut);
        let k4 = generate(&GeneratorSpec::Complete(4), 0).unwrap();
        let mut sim = Sim::with_defaults(&k4);
        assert!(!verify_vertex_cut(&mut sim, &[0, 1, 2], 3, 1, 3, None).unwrap().is_cut);
    }
}
