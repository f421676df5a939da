//! Edge variant of the two-phase algorithm.

use std::collections::BTreeSet;

use super::verify::verify_cut;
use super::{
    collect_certificates, local_st_cut, select_verified, Candidate, CutResult, IterationPlan, Knowledge, Mode,
    Phase1, StCertificate,
};
use crate::flow::all_min_edge_cuts;
use crate::graph::{EdgeId, NodeId};
use crate::primitives::{all_reduce, bfs_tree, BfsTree, EdgeWord, SubgraphSelector, Word};
use crate::sim::Sim;

/// Spanning BFS tree of the source's component, and whether it spans everything.
pub(crate) fn spanning_tree(sim: &mut Sim<'_>, source: NodeId) -> (BfsTree, bool) {
    let n = sim.graph().n();
    let tree = bfs_tree(sim, &SubgraphSelector::All, source, n as u32);
    let ones: Vec<Word> = (0..n).map(|u| Word(tree.reached(u) as u64)).collect();
    let (count, _) = all_reduce(sim, &tree, &ones, |a, b| Word(a.0 + b.0));
    (tree, count.0 as usize == n)
}

/// Phase 2 over per-node certificates (one source). Shared with the deterministic driver.
pub(crate) fn edge_phase_two(
    sim: &mut Sim<'_>,
    lambda: u64,
    diameter: u32,
    phase1: &Phase1,
    mode: Mode,
    start_rounds: u64,
    draws_before: u64,
) -> CutResult<EdgeId> {
    let source = phase1.certs.first().map_or(0, |c| c[0].source);
    let n = sim.graph().n();
    let (tree, spans) = spanning_tree(sim, source);
    let candidates: Vec<Vec<Candidate<EdgeWord>>> = (0..n)
        .map(|t| {
            if t == source {
                // the source learns from the count whether the graph is disconnected
                return if spans { Vec::new() } else { vec![Candidate { value: 0, witness: Vec::new() }] };
            }
            let cut = local_st_cut(&phase1.certs[t][0], lambda);
            match cut.witness {
                Some(w) if cut.value <= lambda => {
                    vec![Candidate { value: cut.value, witness: w.into_iter().map(EdgeWord).collect() }]
                }
                _ => Vec::new(),
            }
        })
        .collect();
    let winner = select_verified(sim, &tree, lambda, &candidates, |sim, w| {
        let ids: Vec<EdgeId> = w.iter().map(|e| e.0).collect();
        verify_cut(sim, &ids, lambda, diameter, Some(&tree)).is_ok_and(|v| v.is_cut)
    });
    let max_certificate_edges = phase1.certs.iter().map(|c| c[0].len()).max().unwrap_or(0);
    let mut res = CutResult {
        mode,
        lambda,
        value: None,
        witness: Vec::new(),
        discovered_by: None,
        sources: vec![source],
        rounds: sim.transcript().rounds - start_rounds,
        phase1_rounds: phase1.rounds,
        iterations: phase1.iterations,
        rejected: 0,
        max_certificate_edges,
        coin_draws: sim.coins().draws() - draws_before,
    };
    if let Some(w) = winner {
        let mut witness: Vec<EdgeId> = w.witness.iter().map(|e| e.0).collect();
        witness.sort_unstable();
        res.value = Some(w.value);
        res.witness = witness;
        res.discovered_by = Some(w.owner);
        res.rejected = w.rejected;
    }
    res
}

fn phase_one_random(sim: &mut Sim<'_>, plan: &IterationPlan) -> Phase1 {
    let coins = sim.coins().clone();
    let (iters, p) = (plan.iterations, plan.p);
    collect_certificates(sim, &[0], plan.depth_cap, plan.window(), |_| {
        let coins = coins.clone();
        (0..iters).map(move |j| SubgraphSelector::random_edges(p, j, &coins))
    })
}

/// Randomized exact min cut up to `lambda` from source 0; `plan` defaults to the analytic one.
pub fn randomized_min_cut(sim: &mut Sim<'_>, lambda: u64, plan: Option<IterationPlan>) -> CutResult<EdgeId> {
    randomized_min_cut_with_certificates(sim, lambda, plan).0
}

/// As [`randomized_min_cut`], also returning every node's certificate.
pub fn randomized_min_cut_with_certificates(
    sim: &mut Sim<'_>,
    lambda: u64,
    plan: Option<IterationPlan>,
) -> (CutResult<EdgeId>, Vec<StCertificate>) {
    let g = sim.graph();
    let know = Knowledge::of(g);
    let plan = plan.unwrap_or_else(|| IterationPlan::edge(lambda, know.diameter, g.n(), 1.0));
    let (start, draws) = (sim.transcript().rounds, sim.coins().draws());
    let phase1 = phase_one_random(sim, &plan);
    let mode = Mode::Randomized { seed: sim.config().seed };
    let res = edge_phase_two(sim, lambda, know.diameter, &phase1, mode, start, draws);
    let certs = phase1.certs.into_iter().map(|mut c| c.swap_remove(0)).collect();
    (res, certs)
}

/// Tries `lambda = 1, 2, ..` and stops at the first level with a verified cut.
pub fn min_cut_unknown_lambda(sim: &mut Sim<'_>, lambda_max: u64, scale: f64, early_exit: bool) -> CutResult<EdgeId> {
    let g = sim.graph();
    let know = Knowledge::of(g);
    let start = sim.transcript().rounds;
    let mut spent = (0, 0);
    let mut last = None;
    for lambda in 1..=lambda_max.max(1) {
        let plan = IterationPlan::edge(lambda, know.diameter, g.n(), scale).early_exit(early_exit);
        let mut res = randomized_min_cut(sim, lambda, Some(plan));
        spent = (spent.0 + res.iterations, spent.1 + res.phase1_rounds);
        res.iterations = spent.0;
        res.phase1_rounds = spent.1;
        res.rounds = sim.transcript().rounds - start;
        if res.value.is_some() {
            return res;
        }
        last = Some(res);
    }
    last.expect("at least one level runs")
}

/// Every minimum cut some node can read off its certificate, when the certificate
/// value equals `value`, kept only if it passes distributed verification.
pub fn certificate_min_cuts(sim: &mut Sim<'_>, certs: &[StCertificate], value: u64) -> Vec<Vec<EdgeId>> {
    let diameter = Knowledge::of(sim.graph()).diameter;
    let mut found = BTreeSet::new();
    for cert in certs.iter().filter(|c| c.owner != c.source) {
        let lc = local_st_cut(cert, value);
        if lc.saturated || lc.value != value {
            continue;
        }
        found.extend(all_min_edge_cuts(&cert.edge_list(), cert.source, cert.owner, &lc.paths));
    }
    found.into_iter().filter(|cut| verify_cut(sim, cut, value, diameter, None).is_ok_and(|v| v.is_cut)).collect()
}
