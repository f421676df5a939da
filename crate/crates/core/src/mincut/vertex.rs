//! Vertex variant: `lambda + 1` sources, vertex sampling, vertex certificates.

use super::edge::spanning_tree;
use super::verify::verify_vertex_cut;
use super::{collect_certificates, select_verified, Candidate, CutResult, IterationPlan, Knowledge, Mode};
use crate::error::{Error, Result};
use crate::flow::local_vertex_cut;
use crate::graph::NodeId;
use crate::primitives::{NodeWord, SubgraphSelector};
use crate::sim::Sim;

/// Randomized exact vertex cut up to `lambda`; sources are the `lambda + 1` lowest ids,
/// each always kept in its own samples.
pub fn randomized_vertex_cut(
    sim: &mut Sim<'_>,
    lambda: u64,
    plan: Option<IterationPlan>,
) -> Result<CutResult<NodeId>> {
    let g = sim.graph();
    let n = g.n();
    if lambda + 1 >= n as u64 {
        return Err(Error::InvalidArgument(format!("vertex cuts need lambda < n - 1 (lambda = {lambda}, n = {n})")));
    }
    let know = Knowledge::of(g);
    let plan = plan.unwrap_or_else(|| IterationPlan::vertex(lambda, know.diameter, know.max_degree, n, 1.0));
    let (start, draws) = (sim.transcript().rounds, sim.coins().draws());
    let sources: Vec<NodeId> = (0..=lambda as usize).collect();
    let coins = sim.coins().clone();
    let (iters, p) = (plan.iterations, plan.p);
    let phase1 = collect_certificates(sim, &sources, plan.depth_cap, plan.window(), |i| {
        let coins = coins.clone();
        (0..iters).map(move |j| SubgraphSelector::random_vertices(p, i as u64 * iters + j, &coins, vec![i]))
    });

    let (tree, spans) = spanning_tree(sim, 0);
    let candidates: Vec<Vec<Candidate<NodeWord>>> = (0..n)
        .map(|t| {
            let mut mine: Vec<(u64, usize, Vec<NodeId>)> = Vec::new();
            if t == 0 && !spans {
                mine.push((0, 0, Vec::new()));
            }
            for (i, &s) in sources.iter().enumerate() {
                if s == t || g.adjacent(s, t) {
                    continue;
                }
                let cert = &phase1.certs[t][i];
                if let Some(lc) = local_vertex_cut(&cert.edge_list(), s, t, lambda + 1) {
                    if let Some(w) = lc.witness.filter(|_| lc.value <= lambda) {
                        mine.push((lc.value, i, w));
                    }
                }
            }
            mine.sort();
            mine.into_iter()
                .map(|(value, _, w)| Candidate { value, witness: w.into_iter().map(NodeWord).collect() })
                .collect()
        })
        .collect();
    let winner = select_verified(sim, &tree, lambda, &candidates, |sim, w| {
        let nodes: Vec<NodeId> = w.iter().map(|x| x.0).collect();
        verify_vertex_cut(sim, &nodes, lambda, know.diameter, know.max_degree, Some(&tree)).is_ok_and(|v| v.is_cut)
    });
    let max_certificate_edges = phase1.certs.iter().flatten().map(|c| c.len()).max().unwrap_or(0);
    let mut res = CutResult {
        mode: Mode::Randomized { seed: sim.config().seed },
        lambda,
        value: None,
        witness: Vec::new(),
        discovered_by: None,
        sources,
        rounds: sim.transcript().rounds - start,
        phase1_rounds: phase1.rounds,
        iterations: phase1.iterations,
        rejected: 0,
        max_certificate_edges,
        coin_draws: sim.coins().draws() - draws,
    };
    if let Some(w) = winner {
        let mut witness: Vec<NodeId> = w.witness.iter().map(|x| x.0).collect();
        witness.sort_unstable();
        res.value = Some(w.value);
        res.witness = witness;
        res.discovered_by = Some(w.owner);
        res.rejected = w.rejected;
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, oracle, GeneratorSpec, Multigraph};

    fn plan(g: &Multigraph, lambda: u64, scale: f64) -> IterationPlan {
        let k = Knowledge::of(g);
        IterationPlan::vertex(lambda, k.diameter, k.max_degree, g.n(), scale)
    }

    #[test]
    fn path_middle_vertex() {
        let g = Multigraph::from_pairs(3, [(0, 1), (1, 2)]).unwrap();
        let mut sim = Sim::with_defaults(&g);
        let res = randomized_vertex_cut(&mut sim, 1, Some(plan(&g, 1, 1.0))).unwrap();
        assert_eq!(res.value, Some(1));
        assert_eq!(res.witness, vec![1]);
    }

    #[test]
    fn cycle_four_antipodal_pair() {
        let g = generate(&GeneratorSpec::Cycle(4), 0).unwrap();
        let mut sim = Sim::with_defaults(&g);
        let res = randomized_vertex_cut(&mut sim, 2, Some(plan(&g, 2, 0.01))).unwrap();
        assert_eq!(res.value, Some(2));
        assert!(oracle::vertex_cut_oracle(&g, 0, 2, 4).witnesses.contains(&res.witness)
            || oracle::vertex_cut_oracle(&g, 1, 3, 4).witnesses.contains(&res.witness));
    }

    #[test]
    fn complete_graph_has_no_vertex_cut() {
        let g = generate(&GeneratorSpec::Complete(5), 0).unwrap();
        let mut sim = Sim::with_defaults(&g);
        let res = randomized_vertex_cut(&mut sim, 3, Some(plan(&g, 3, 1e-6))).unwrap();
        assert_eq!(res.value, None);
        assert!(randomized_vertex_cut(&mut sim, 4, None).is_err());
    }
}
