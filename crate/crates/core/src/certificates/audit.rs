//! Centralized audits of spanner and certificate properties.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{oracle, EdgeId, Multigraph, NodeId};
use crate::util::subsets_up_to;

#[derive(Clone, Debug, Default, Serialize)]
pub struct Audit {
    pub checked: u64,
    /// `(u, v, faults)` triples that broke the property.
    pub violations: Vec<(NodeId, NodeId, Vec<usize>)>,
}

impl Audit {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn membership(g: &Multigraph, h: &[EdgeId]) -> Vec<bool> {
    let set: HashSet<EdgeId> = h.iter().copied().collect();
    g.edges().iter().map(|e| set.contains(&e.id)).collect()
}

/// Every edge outside `H` has its endpoints within `2k - 1` in `H`.
pub fn spanner_audit(g: &Multigraph, h: &[EdgeId], k: u32) -> Audit {
    let in_h = membership(g, h);
    let mut a = Audit::default();
    for (pos, e) in g.edges().iter().enumerate().filter(|(p, _)| !in_h[*p]) {
        a.checked += 1;
        let d = oracle::bfs_filtered(g, e.u, |p| in_h[p], |_| true)[e.v];
        if !d.is_some_and(|d| d < 2 * k as usize) {
            a.violations.push((e.u, e.v, vec![pos]));
        }
    }
    a
}

/// Stretch check for every pair under every fault set; `faults` enumerates position or node sets.
fn stretch_under(g: &Multigraph, in_h: &[bool], k: u32, faults: Vec<Vec<usize>>, nodes: bool) -> Audit {
    let n = g.n();
    let stretch = 2 * k as usize - 1;
    let mut a = Audit::default();
    for f in faults {
        let mut dead = vec![false; if nodes { n } else { g.m() }];
        f.iter().for_each(|&x| dead[x] = true);
        let edge_ok = |p: usize| nodes || !dead[p];
        let node_ok = |v: usize| !nodes || !dead[v];
        for u in (0..n).filter(|&u| node_ok(u)) {
            let dg = oracle::bfs_filtered(g, u, edge_ok, node_ok);
            let dh = oracle::bfs_filtered(g, u, |p| in_h[p] && edge_ok(p), node_ok);
            for v in u + 1..n {
                if let Some(d) = dg[v] {
                    a.checked += 1;
                    if !dh[v].is_some_and(|x| x <= stretch * d) {
                        a.violations.push((u, v, f.clone()));
                    }
                }
            }
        }
    }
    a
}

/// `dist(u, v, H - F) <= (2k-1) dist(u, v, G - F)` for all pairs and edge sets `|F| <= f`.
pub fn ft_edge_audit(g: &Multigraph, h: &[EdgeId], k: u32, f: usize) -> Audit {
    stretch_under(g, &membership(g, h), k, subsets_up_to(g.m(), f).collect(), false)
}

/// As [`ft_edge_audit`] with vertex faults.
pub fn ft_vertex_audit(g: &Multigraph, h: &[EdgeId], k: u32, f: usize) -> Audit {
    stretch_under(g, &membership(g, h), k, subsets_up_to(g.n(), f).collect(), true)
}

/// Pairwise certificate property: every pair connected in `G - F` is connected in
/// `H - F`, for all edge sets `|F| <= lambda - 1`.
pub fn certificate_audit(g: &Multigraph, h: &[EdgeId], lambda: u64) -> Audit {
    let in_h = membership(g, h);
    let mut a = Audit::default();
    for f in subsets_up_to(g.m(), lambda.saturating_sub(1) as usize) {
        let mut dead = vec![false; g.m()];
        f.iter().for_each(|&p| dead[p] = true);
        let mut seen = vec![false; g.n()];
        for u in 0..g.n() {
            if seen[u] {
                continue;
            }
            let dg = oracle::bfs_filtered(g, u, |p| !dead[p], |_| true);
            let dh = oracle::bfs_filtered(g, u, |p| in_h[p] && !dead[p], |_| true);
            for v in 0..g.n() {
                if dg[v].is_some() {
                    seen[v] = true;
                    a.checked += 1;
                    if dh[v].is_none() {
                        a.violations.push((u, v, f.clone()));
                    }
                }
            }
        }
    }
    a
}

/// Component label of every node in the subgraph of edges passing `edge_ok`.
fn components<E: Fn(usize) -> bool>(g: &Multigraph, edge_ok: E) -> Vec<usize> {
    let mut label = vec![usize::MAX; g.n()];
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = s;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for inc in g.incident(u) {
                if edge_ok(inc.pos) && label[inc.peer] == usize::MAX {
                    label[inc.peer] = s;
                    stack.push(inc.peer);
                }
            }
        }
    }
    label
}

/// Samples `samples` fault sets of `size` edges and checks every listed pair that
/// stays connected in `G - F` also does in `H - F`.
pub fn fault_sample_audit(
    g: &Multigraph,
    h: &[EdgeId],
    pairs: &[(NodeId, NodeId)],
    size: usize,
    samples: u64,
    seed: u64,
) -> Audit {
    let in_h = membership(g, h);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = Audit::default();
    for _ in 0..samples {
        let f = sample(&mut rng, g.m(), size.min(g.m())).into_vec();
        let mut dead = vec![false; g.m()];
        f.iter().for_each(|&p| dead[p] = true);
        let in_g = components(g, |p| !dead[p]);
        let in_hf = components(g, |p| in_h[p] && !dead[p]);
        for &(u, v) in pairs {
            a.checked += 1;
            if in_g[u] == in_g[v] && in_hf[u] != in_hf[v] {
                a.violations.push((u, v, f.clone()));
            }
        }
    }
    a
}
