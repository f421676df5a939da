//! Connectivity `lambda(e)` of every edge `e = (u, v)`, exact up to `lambda`.
//!
//! Each iteration samples a subgraph, builds a cycle cover of it with cycles of
//! length up to `D' = 6 lambda D + 1`, and the endpoint `e.u` adds every covering
//! cycle through `e` to its local graph `G_e`. If `e` survives some fault set `F`
//! of at most `lambda - 1` other edges on a short cycle, some iteration keeps that
//! cycle and drops `F`; so `G_e` separates `u` from `v` exactly when `G` does, for
//! cuts of size at most `lambda`.

pub mod cover;
pub mod cycles;

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

pub use cover::{cover_selected, neighborhood_cover, Clustering, CoverCluster, NeighborhoodCover, Shifts};
pub use cycles::{approx_cycle_cover, cycle_cover_selected, Cycle, CycleCover};

use crate::derand::driver::DEFAULT_ITERATION_BUDGET;
use crate::derand::UniversalFamily;
use crate::error::{Error, Result};
use crate::flow::local_edge_cut;
use crate::graph::oracle::CutValue;
use crate::graph::{Edge, EdgeId, NodeId};
use crate::mincut::{analytic_iterations, spanning_tree, Knowledge, Mode};
use crate::primitives::{all_reduce, bfs_tree, rename_edges, BfsTree, SubgraphSelector, Word};
use crate::sim::Sim;

/// Sampling schedule for the randomized variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// `p = 1 - 1/D'`, iterations `(D'-1)^(2 lambda) ln n`.
    Fig,
    /// `p = 1 - 1/D'^lambda`, iterations `lambda D'^lambda ln n`.
    Text,
}

impl Preset {
    pub fn keep_probability(self, d_prime: u32, lambda: u64) -> f64 {
        match self {
            Preset::Fig => 1.0 - 1.0 / d_prime as f64,
            Preset::Text => 1.0 - (d_prime as f64).powi(lambda as i32).recip(),
        }
    }

    pub fn iterations(self, d_prime: u32, lambda: u64, n: usize, scale: f64) -> u64 {
        match self {
            Preset::Fig => analytic_iterations(d_prime as u64 - 1, lambda, n, scale),
            Preset::Text => {
                let v = lambda as f64 * (d_prime as f64).powi(lambda as i32) * (n.max(2) as f64).ln() * scale;
                (v.ceil().min(u64::MAX as f64) as u64).max(1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EdgeConnMode {
    Randomized { scale: f64, preset: Preset, early_exit: bool, iterations: Option<u64> },
    /// Universal-family members over renamed ids; `budget` caps the member count.
    Deterministic { budget: Option<u128> },
}

impl EdgeConnMode {
    pub fn randomized(scale: f64) -> Self {
        EdgeConnMode::Randomized { scale, preset: Preset::Fig, early_exit: false, iterations: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeConn {
    pub id: EdgeId,
    pub u: NodeId,
    pub v: NodeId,
    pub lambda_e: CutValue,
    /// A minimum `u`-`v` cut containing `e`, when the value is exact.
    pub certificate: Vec<EdgeId>,
    /// Edges of `G_e` held by `u`.
    pub local_edges: usize,
    #[serde(skip)]
    pub local: Vec<EdgeId>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeConnMap {
    pub mode: Mode,
    pub lambda: u64,
    pub d_prime: u32,
    pub keep_probability: f64,
    pub iterations: u64,
    pub edges: Vec<EdgeConn>,
    pub rounds: u64,
    pub coin_draws: u64,
    pub max_cycle_length: usize,
    pub max_congestion: usize,
    pub max_local_edges: usize,
}

impl EdgeConnMap {
    pub fn get(&self, id: EdgeId) -> Option<&EdgeConn> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("edge_id,u,v,lambda_e,certificate_edges\n");
        for e in &self.edges {
            let value = match e.lambda_e {
                CutValue::Exact(v) => v.to_string(),
                CutValue::AtLeast(v) => format!(">={v}"),
            };
            let cert: Vec<String> = e.certificate.iter().map(|id| id.0.to_string()).collect();
            out.push_str(&format!("{},{},{},{},{}\n", e.id.0, e.u, e.v, value, cert.join(";")));
        }
        out
    }
}

/// Per edge position: the cycle edges its owner `e.u` has gathered.
struct Gathered {
    local: Vec<BTreeMap<EdgeId, (NodeId, NodeId)>>,
    iterations: u64,
    max_cycle_length: usize,
    max_congestion: usize,
}

fn gather<I>(sim: &mut Sim<'_>, d_prime: u32, shifts: &Shifts, tree: &BfsTree, window: Option<u64>, members: I) -> Gathered
where
    I: Iterator<Item = SubgraphSelector>,
{
    let g = sim.graph();
    let n = g.n();
    let mut local: Vec<BTreeMap<EdgeId, (NodeId, NodeId)>> =
        g.edges().iter().map(|e| BTreeMap::from([(e.id, (e.u, e.v))])).collect();
    let mut out = Gathered { local: Vec::new(), iterations: 0, max_cycle_length: 0, max_congestion: 0 };
    let mut stale = 0;
    for (j, sel) in members.enumerate() {
        out.iterations += 1;
        let shifts = match shifts {
            Shifts::Random { coins, salt } => Shifts::Random { coins: coins.clone(), salt: salt ^ (j as u64) << 20 },
            Shifts::IdHash { salt } => Shifts::IdHash { salt: salt ^ (j as u64) << 20 },
        };
        let cc = cycle_cover_selected(sim, &sel, d_prime, &shifts, tree);
        out.max_cycle_length = out.max_cycle_length.max(cc.max_length);
        out.max_congestion = out.max_congestion.max(cc.congestion);
        let mut grew = vec![false; n];
        for (pos, e) in g.edges().iter().enumerate() {
            for &ci in &cc.known[e.u] {
                let c = &cc.cycles[ci];
                if c.contains(e.id) {
                    for h in &c.hops {
                        grew[e.u] |= local[pos].insert(h.edge, (h.from, h.to)).is_none();
                    }
                }
            }
        }
        if let Some(w) = window {
            let flags: Vec<Word> = grew.iter().map(|&b| Word(b as u64)).collect();
            let (any, _) = all_reduce(sim, tree, &flags, |a, b| Word(a.0 | b.0));
            stale = if any.0 == 1 { 0 } else { stale + 1 };
            if stale >= w {
                log::debug!("edge connectivities settled after {} iterations", out.iterations);
                break;
            }
        }
    }
    out.local = local;
    out
}

fn evaluate(lambda: u64, e: &Edge, local: &BTreeMap<EdgeId, (NodeId, NodeId)>) -> EdgeConn {
    let edges: Vec<Edge> = local.iter().map(|(&id, &(u, v))| Edge { id, u, v }).collect();
    let cut = local_edge_cut(&edges, e.u, e.v, lambda + 1);
    let (lambda_e, certificate) = match cut.witness {
        Some(w) if cut.value <= lambda => (CutValue::Exact(cut.value), w),
        _ => (CutValue::AtLeast(lambda + 1), Vec::new()),
    };
    EdgeConn { id: e.id, u: e.u, v: e.v, lambda_e, certificate, local_edges: local.len(), local: local.keys().copied().collect() }
}

/// `lambda(e)` for every edge, exact when at most `lambda` and `AtLeast(lambda + 1)` otherwise.
pub fn all_edge_connectivities(sim: &mut Sim<'_>, lambda: u64, mode: &EdgeConnMode) -> Result<EdgeConnMap> {
    if lambda == 0 {
        return Err(Error::InvalidArgument("edge connectivities need lambda >= 1".into()));
    }
    match mode {
        EdgeConnMode::Randomized { scale, preset, early_exit, iterations } => {
            Ok(randomized(sim, lambda, *scale, *preset, *early_exit, *iterations))
        }
        EdgeConnMode::Deterministic { budget } => deterministic(sim, lambda, *budget),
    }
}

fn randomized(sim: &mut Sim<'_>, lambda: u64, scale: f64, preset: Preset, early_exit: bool, iters: Option<u64>) -> EdgeConnMap {
    let g = sim.graph();
    let start = sim.transcript().rounds;
    let draws = sim.coins().draws();
    let d_prime = 6 * lambda as u32 * Knowledge::of(g).diameter + 1;
    let p = preset.keep_probability(d_prime, lambda);
    let total = iters.unwrap_or_else(|| preset.iterations(d_prime, lambda, g.n(), scale)).max(1);
    let window = early_exit.then(|| total.div_ceil(10).max(1));
    let coins = sim.coins().clone();
    let (tree, _) = spanning_tree(sim, 0);
    let shifts = Shifts::Random { coins: coins.clone(), salt: 0 };
    let members = (0..total).map(|j| SubgraphSelector::random_edges(p, j, &coins));
    let got = gather(sim, d_prime, &shifts, &tree, window, members);
    let edges = g.edges().iter().zip(&got.local).map(|(e, l)| evaluate(lambda, e, l)).collect();
    EdgeConnMap {
        mode: Mode::Randomized { seed: coins.seed() },
        lambda,
        d_prime,
        keep_probability: p,
        iterations: got.iterations,
        edges,
        rounds: sim.transcript().rounds - start,
        coin_draws: sim.coins().draws() - draws,
        max_cycle_length: got.max_cycle_length,
        max_congestion: got.max_congestion,
        max_local_edges: got.local.iter().map(BTreeMap::len).max().unwrap_or(0),
    }
}

/// The family a deterministic run uses: paths of `D'` edges against `lambda - 1` faults.
pub fn edgeconn_family(m: usize, lambda: u64, d_tilde: u32) -> Result<UniversalFamily> {
    let d_prime = 6 * lambda as usize * 2 * d_tilde.max(1) as usize + 1;
    UniversalFamily::build(m.max(1), d_prime, lambda as usize - 1)
}

fn deterministic(sim: &mut Sim<'_>, lambda: u64, budget: Option<u128>) -> Result<EdgeConnMap> {
    let budget = budget.unwrap_or(DEFAULT_ITERATION_BUDGET);
    let g = sim.graph();
    let n = g.n();
    let start = sim.transcript().rounds;
    let renaming = rename_edges(sim);
    let renamed = renaming.apply(g);
    let mut inner = Sim::new(&renamed, sim.config().clone());
    let tree = bfs_tree(&mut inner, &SubgraphSelector::All, 0, n as u32);
    let depths: Vec<Word> = (0..n).map(|u| Word(tree.depth[u].unwrap_or(0) as u64)).collect();
    let (d_tilde, _) = all_reduce(&mut inner, &tree, &depths, |a, b| Word(a.0.max(b.0)));
    let fam = edgeconn_family(g.m(), lambda, d_tilde.0.max(1) as u32)?;
    let size = fam.distinct_len();
    if size > budget {
        return Err(Error::FamilyTooLarge { size, budget });
    }
    let d_prime = fam.a as u32;
    let (span, _) = spanning_tree(&mut inner, 0);
    let members = fam.distinct_members().map(SubgraphSelector::Universal);
    let got = gather(&mut inner, d_prime, &Shifts::IdHash { salt: 0 }, &span, None, members);
    let coin_draws = inner.coins().draws();
    sim.absorb(inner.transcript());

    let back: HashMap<EdgeId, EdgeId> = renaming.new_id.iter().zip(g.edges()).map(|(&new, e)| (new, e.id)).collect();
    let edges = g
        .edges()
        .iter()
        .zip(renamed.edges())
        .zip(&got.local)
        .map(|((orig, re), l)| {
            let mut c = evaluate(lambda, re, l);
            c.id = orig.id;
            c.certificate = c.certificate.iter().map(|id| back[id]).collect();
            c.certificate.sort_unstable();
            c.local = c.local.iter().map(|id| back[id]).collect();
            c.local.sort_unstable();
            c
        })
        .collect();
    Ok(EdgeConnMap {
        mode: Mode::Deterministic {
            family: format!("ft-universal(m={},a={},b={};{})", fam.n, fam.a, fam.b, fam.perfect.used),
        },
        lambda,
        d_prime,
        keep_probability: 1.0,
        iterations: got.iterations,
        edges,
        rounds: sim.transcript().rounds - start,
        coin_draws,
        max_cycle_length: got.max_cycle_length,
        max_congestion: got.max_congestion,
        max_local_edges: got.local.iter().map(BTreeMap::len).max().unwrap_or(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, oracle, GeneratorSpec, Multigraph};
    use crate::sim::SimConfig;

    fn truth(g: &Multigraph, e: &Edge, lambda: u64) -> CutValue {
        let v = oracle::pair_edge_connectivity(g, e.u, e.v);
        if v <= lambda { CutValue::Exact(v) } else { CutValue::AtLeast(lambda + 1) }
    }

    fn check(g: &Multigraph, map: &EdgeConnMap) {
        for (e, got) in g.edges().iter().zip(&map.edges) {
            assert_eq!(got.lambda_e, truth(g, e, map.lambda), "edge {}", e.id);
            if let CutValue::Exact(v) = got.lambda_e {
                assert_eq!(got.certificate.len() as u64, v);
                assert!(got.certificate.contains(&e.id));
            }
        }
    }

    #[test]
    fn bridge_graph_randomized() {
        let g = generate(&GeneratorSpec::TwoTriangles, 0).unwrap();
        let mut sim = Sim::new(&g, SimConfig::for_graph(&g).seed(3));
        let mode = EdgeConnMode::Randomized { scale: 1.0, preset: Preset::Fig, early_exit: false, iterations: Some(40) };
        let map = all_edge_connectivities(&mut sim, 2, &mode).unwrap();
        check(&g, &map);
        assert_eq!(map.get(EdgeId(7)).unwrap().lambda_e, CutValue::Exact(1));
    }

    #[test]
    fn wheel_has_mixed_values() {
        let g = generate(&GeneratorSpec::Wheel(5), 0).unwrap();
        let mut sim = Sim::new(&g, SimConfig::for_graph(&g).seed(11));
        let mode = EdgeConnMode::Randomized { scale: 1.0, preset: Preset::Text, early_exit: true, iterations: Some(60) };
        let map = all_edge_connectivities(&mut sim, 3, &mode).unwrap();
        check(&g, &map);
    }

    #[test]
    fn deterministic_cycle_uses_no_coins() {
        let g = generate(&GeneratorSpec::MultiCycle { n: 4, multiplicity: 2 }, 0).unwrap();
        let mut sim = Sim::with_defaults(&g);
        let map = all_edge_connectivities(&mut sim, 2, &EdgeConnMode::Deterministic { budget: None }).unwrap();
        assert_eq!(map.coin_draws, 0);
        check(&g, &map);
        assert!(map.to_csv().starts_with("edge_id,u,v,lambda_e,certificate_edges\n"));
    }

    #[test]
    fn presets() {
        assert_eq!(Preset::Fig.keep_probability(7, 1), 1.0 - 1.0 / 7.0);
        assert_eq!(Preset::Text.iterations(7, 2, 3, 1.0), (2.0 * 49.0 * 3f64.ln()).ceil() as u64);
    }
}
