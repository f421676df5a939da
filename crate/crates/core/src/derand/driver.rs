//! Deterministic min cut: the sampled subgraphs are replaced by the members of an
//! `(m, a, b)` FT-universal family over the renamed edge ids.

use std::collections::HashMap;

use serde::Serialize;

use super::universal::UniversalFamily;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, NodeId};
use crate::mincut::edge_phase_two;
use crate::mincut::{collect_certificates, CutResult, Mode};
use crate::primitives::{all_reduce, bfs_tree, rename_edges, SubgraphSelector, Word};
use crate::sim::Sim;
use crate::util::subsets_up_to;

/// Default cap on the number of family members (iterations) a run may walk.
pub const DEFAULT_ITERATION_BUDGET: u128 = 2_000_000;

/// The family a deterministic run at level `lambda` uses, with `d_tilde` the source's BFS depth.
pub fn family_for(m: usize, lambda: u64, d_tilde: u32) -> Result<UniversalFamily> {
    let a = 3 * lambda as usize * 2 * d_tilde.max(1) as usize;
    UniversalFamily::build(m.max(1), a, lambda as usize)
}

/// Deterministic exact min cut up to `lambda`. Consumes no coins; the witness is
/// reported in the original edge ids.
pub fn deterministic_min_cut(sim: &mut Sim<'_>, lambda: u64, budget: Option<u128>) -> Result<CutResult<EdgeId>> {
    let budget = budget.unwrap_or(DEFAULT_ITERATION_BUDGET);
    let g = sim.graph();
    let start = sim.transcript().rounds;
    let renaming = rename_edges(sim);
    let renamed = renaming.apply(g);
    let mut inner = Sim::new(&renamed, sim.config().clone());

    // D~ = depth of a BFS tree from the source, known to all after an all-reduce
    let n = g.n();
    let tree = bfs_tree(&mut inner, &SubgraphSelector::All, 0, n as u32);
    let depths: Vec<Word> = (0..n).map(|u| Word(tree.depth[u].unwrap_or(0) as u64)).collect();
    let (d_tilde, _) = all_reduce(&mut inner, &tree, &depths, |a, b| Word(a.0.max(b.0)));
    let d_tilde = d_tilde.0.max(1) as u32;

    let fam = family_for(g.m(), lambda, d_tilde)?;
    let size = fam.distinct_len();
    if size > budget {
        return Err(Error::FamilyTooLarge { size, budget });
    }
    let family = format!("ft-universal(m={},a={},b={};{})", fam.n, fam.a, fam.b, fam.perfect.used);
    let phase1 = collect_certificates(&mut inner, &[0], fam.a as u32, None, |_| {
        fam.distinct_members().map(SubgraphSelector::Universal)
    });
    let mut res = edge_phase_two(&mut inner, lambda, 2 * d_tilde, &phase1, Mode::Deterministic { family }, 0, 0);
    res.coin_draws = inner.coins().draws() + sim.coins().draws();
    sim.absorb(inner.transcript());
    res.rounds = sim.transcript().rounds - start;

    let back: HashMap<EdgeId, EdgeId> =
        renaming.new_id.iter().zip(g.edges()).map(|(&new, e)| (new, e.id)).collect();
    res.witness = res.witness.iter().map(|id| back[id]).collect();
    res.witness.sort_unstable();
    Ok(res)
}

/// Result of checking the path/fault coverage property of a family on a graph.
#[derive(Clone, Debug, Default, Serialize)]
pub struct TransferReport {
    pub pairs_checked: u64,
    /// Violating `(path, faults)` pairs, as edge ids.
    pub violations: Vec<(Vec<EdgeId>, Vec<EdgeId>)>,
}

/// For every fault set `B` of at most `b` edges and every simple path `A` of at most
/// `max_len` edges avoiding `B`, checks that some member contains `A` and excludes `B`.
///
/// `g` must carry ids `1..=m` matching the family's domain.
pub fn path_fault_audit(fam: &UniversalFamily, g: &Multigraph, b: usize, max_len: usize) -> Result<TransferReport> {
    if g.m() > 64 || fam.n < g.m() {
        return Err(Error::InvalidArgument("path audits need m <= 64 and a family over [m]".into()));
    }
    if g.edges().iter().any(|e| e.id.0 == 0 || e.id.0 as usize > g.m()) {
        return Err(Error::InvalidArgument("edge ids must be 1..=m".into()));
    }
    let bit = |id: EdgeId| 1u64 << (id.0 - 1);
    let members: Vec<u64> = fam.distinct_members().map(|m| m.mask()).collect();
    let paths = simple_paths(g, max_len);
    let mut rep = TransferReport::default();
    for faults in subsets_up_to(g.m(), b) {
        let bm = faults.iter().fold(0u64, |acc, &p| acc | bit(g.edge_at(p).id));
        for &am in paths.iter().filter(|&&am| am & bm == 0) {
            rep.pairs_checked += 1;
            if !members.iter().any(|&s| s & am == am && s & bm == 0) {
                let ids = |mask: u64| (0..64).filter(|i| mask >> i & 1 == 1).map(|i| EdgeId(i + 1)).collect();
                rep.violations.push((ids(am), ids(bm)));
            }
        }
    }
    Ok(rep)
}

/// Edge sets (as id masks) of all simple paths with 1..=`max_len` edges.
fn simple_paths(g: &Multigraph, max_len: usize) -> Vec<u64> {
    fn extend(g: &Multigraph, at: NodeId, seen: &mut Vec<bool>, mask: u64, left: usize, out: &mut Vec<u64>) {
        if left == 0 {
            return;
        }
        for inc in g.incident(at) {
            if seen[inc.peer] {
                continue;
            }
            let m = mask | 1 << (inc.edge.0 - 1);
            out.push(m);
            seen[inc.peer] = true;
            extend(g, inc.peer, seen, m, left - 1, out);
            seen[inc.peer] = false;
        }
    }
    let mut out = Vec::new();
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        seen[s] = true;
        extend(g, s, &mut seen, 0, max_len, &mut out);
        seen[s] = false;
    }
    out.sort_unstable();
    out.dedup();
    out
}
