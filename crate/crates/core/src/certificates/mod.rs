//! Sparse connectivity certificates from fault-tolerant spanners, and the
//! edge-sampling decomposition for `(1 - eps) lambda` certificates.

pub mod audit;
pub mod spanner;

use serde::Serialize;

pub use audit::{certificate_audit, fault_sample_audit, ft_edge_audit, ft_vertex_audit, spanner_audit, Audit};
pub use spanner::{ft_spanner_edges, ft_spanner_vertices, spanner_2k1, vertex_ft_iterations, SpannerResult};

use crate::error::{Error, Result};
use crate::graph::{oracle, EdgeId, Multigraph};
use crate::primitives::Mask;
use crate::sim::{Coins, Sim, Transcript};
use crate::util::ceil_log2;

const PART_STREAM: u64 = 0x7061_7274;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMode {
    Exact,
    Karger,
    /// `mu = 1`: the decomposition collapsed to a single exact certificate.
    KargerDegenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateResult {
    pub mode: CertificateMode,
    pub lambda: u64,
    pub epsilon: Option<f64>,
    pub mu: u64,
    /// Connectivity each part's certificate targets.
    pub lambda_prime: u64,
    pub stretch_k: u32,
    pub edges: Vec<EdgeId>,
    pub edge_count: usize,
    pub rounds: u64,
    pub construction: &'static str,
    pub part_edges: Vec<usize>,
    /// Oracle edge connectivity of each part; `None` for a disconnected part.
    pub part_connectivities: Vec<Option<u64>>,
}

/// Stretch used for certificates: `ceil(log2 n)`, at least 1.
pub fn certificate_stretch(n: usize) -> u32 {
    ceil_log2(n.max(2) as u64).max(1)
}

fn exact_on(sim: &mut Sim<'_>, base: &Mask, lambda: u64, salt: u64) -> Vec<usize> {
    let k = certificate_stretch(sim.graph().n());
    spanner::ft_edges_positions(sim, base, k, lambda.saturating_sub(1) as u32, salt)
}

fn ids(g: &Multigraph, pos: &[usize]) -> Vec<EdgeId> {
    let mut v: Vec<EdgeId> = pos.iter().map(|&p| g.edge_at(p).id).collect();
    v.sort_unstable();
    v
}

/// `H` such that every pair connected in `G - F` stays connected in `H - F`, for all `|F| <= lambda - 1`.
pub fn sparse_certificate(sim: &mut Sim<'_>, lambda: u64) -> Result<CertificateResult> {
    if lambda == 0 {
        return Err(Error::InvalidArgument("certificates need lambda >= 1".into()));
    }
    let g = sim.graph();
    let start = sim.transcript().rounds;
    let pos = exact_on(sim, &Mask::all(g), lambda, 0);
    let edges = ids(g, &pos);
    Ok(CertificateResult {
        mode: CertificateMode::Exact,
        lambda,
        epsilon: None,
        mu: 1,
        lambda_prime: lambda,
        stretch_k: certificate_stretch(g.n()),
        edge_count: edges.len(),
        part_edges: vec![g.m()],
        part_connectivities: Vec::new(),
        edges,
        rounds: sim.transcript().rounds - start,
        construction: "edge fault-tolerant baswana-sen spanner",
    })
}

/// `mu = ceil(lambda eps^2 / (20 log2 n))`.
pub fn karger_mu(lambda: u64, eps: f64, n: usize) -> u64 {
    let log = (n.max(2) as f64).log2();
    ((lambda as f64 * eps * eps / (20.0 * log)).ceil() as u64).max(1)
}

/// Part label of every edge (by position), uniform in `0..mu`, keyed by edge id.
pub fn karger_parts(g: &Multigraph, coins: &Coins, mu: u64) -> Vec<u64> {
    g.edges().iter().map(|e| coins.below(PART_STREAM, e.id.0 as u64, mu)).collect()
}

/// Oracle connectivity of each part.
pub fn part_connectivities(g: &Multigraph, labels: &[u64], mu: u64) -> Vec<Option<u64>> {
    (0..mu).map(|i| oracle::edge_connectivity_filtered(g, |p| labels[p] == i)).collect()
}

/// Union of `floor((1-eps) lambda / mu)`-certificates of `mu` random edge-disjoint parts.
///
/// The parts run simultaneously; the merged transcript counts the slowest.
pub fn karger_certificate(sim: &mut Sim<'_>, lambda: u64, eps: f64) -> Result<CertificateResult> {
    if lambda == 0 || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument("karger certificates need lambda >= 1 and 0 < eps < 1".into()));
    }
    let g = sim.graph();
    let mu = karger_mu(lambda, eps, g.n());
    if mu == 1 {
        log::info!("mu = 1 at lambda = {lambda}, eps = {eps}; falling back to an exact certificate");
        let mut res = sparse_certificate(sim, lambda)?;
        res.mode = CertificateMode::KargerDegenerate;
        res.epsilon = Some(eps);
        return Ok(res);
    }
    let lambda_prime = (((1.0 - eps) * lambda as f64) / mu as f64).floor().max(1.0) as u64;
    let labels = karger_parts(g, sim.coins(), mu);
    let mut all = Vec::new();
    let mut transcripts = Vec::new();
    let mut part_edges = Vec::new();
    for i in 0..mu {
        let mask = Mask::from_positions(g, (0..g.m()).filter(|&p| labels[p] == i));
        part_edges.push(mask.edge_positions().count());
        let mut part = Sim::new(g, sim.config().clone());
        all.extend(exact_on(&mut part, &mask, lambda_prime, i + 1));
        transcripts.push(part.transcript().clone());
    }
    let merged = Transcript::merge_parallel(&transcripts);
    sim.absorb(&merged);
    all.sort_unstable();
    let edges = ids(g, &all);
    Ok(CertificateResult {
        mode: CertificateMode::Karger,
        lambda,
        epsilon: Some(eps),
        mu,
        lambda_prime,
        stretch_k: certificate_stretch(g.n()),
        edge_count: edges.len(),
        part_edges,
        part_connectivities: part_connectivities(g, &labels, mu),
        edges,
        rounds: merged.rounds,
        construction: "edge fault-tolerant baswana-sen spanner per part",
    })
}
