//! Centralized brute-force oracles.
//!
//! Everything here sees the whole graph at once and is deliberately independent
//! of the distributed code paths it is used to check: cut values come from a
//! capacity max-flow over aggregated parallel edges, witness lists from
//! exhaustive subset enumeration.

use std::collections::VecDeque;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{EdgeId, FaultSet, Multigraph, NodeId};
use crate::util::subsets_up_to;
use crate::util::Combinations;

/// Default witness-enumeration cap.
pub const DEFAULT_CAP: usize = 4;

/// A cut size, or a lower bound when the search was capped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutValue {
    Exact(u64),
    AtLeast(u64),
}

impl CutValue {
    pub fn exact(self) -> Option<u64> {
        match self {
            CutValue::Exact(v) => Some(v),
            CutValue::AtLeast(_) => None,
        }
    }

    /// `min(value, cap)` with `AtLeast(k)` read as `k`.
    pub fn truncated(self, cap: u64) -> u64 {
        match self {
            CutValue::Exact(v) | CutValue::AtLeast(v) => v.min(cap),
        }
    }
}

impl fmt::Display for CutValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutValue::Exact(v) => write!(f, "{v}"),
            CutValue::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

impl Serialize for CutValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CutValue::Exact(v) => s.serialize_u64(*v),
            CutValue::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

/// Oracle answer: the minimum cut value and, when it is within the cap, every minimum cut.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCut<T> {
    pub value: CutValue,
    pub witnesses: Vec<Vec<T>>,
    /// Vertex cuts only: `s` and `t` are adjacent, so no vertex set separates them.
    pub adjacent: bool,
}

/// Hop distances from `src` using only edges (by position) and nodes accepted by the filters.
pub fn bfs_filtered<E, V>(g: &Multigraph, src: NodeId, edge_ok: E, node_ok: V) -> Vec<Option<usize>>
where
    E: Fn(usize) -> bool,
    V: Fn(NodeId) -> bool,
{
    let mut dist = vec![None; g.n()];
    if !node_ok(src) {
        return dist;
    }
    let mut queue = VecDeque::new();
    dist[src] = Some(0);
    queue.push_back(src);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or(0);
        for inc in g.incident(u) {
            if dist[inc.peer].is_none() && edge_ok(inc.pos) && node_ok(inc.peer) {
                dist[inc.peer] = Some(du + 1);
                queue.push_back(inc.peer);
            }
        }
    }
    dist
}

/// BFS hop distance between `u` and `v` after deleting `faults`; `None` means disconnected.
pub fn dist_under_faults(g: &Multigraph, u: NodeId, v: NodeId, faults: &FaultSet) -> Option<usize> {
    match faults {
        FaultSet::Edges(ids) => {
            let mut dead = vec![false; g.m()];
            for id in ids {
                if let Some(p) = g.position(*id) {
                    dead[p] = true;
                }
            }
            bfs_filtered(g, u, |p| !dead[p], |_| true)[v]
        }
        FaultSet::Vertices(vs) => {
            if vs.contains(&u) || vs.contains(&v) {
                return None;
            }
            bfs_filtered(g, u, |_| true, |x| !vs.contains(&x))[v]
        }
    }
}

/// Capacity network for Edmonds–Karp.
struct FlowNet {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
}

impl FlowNet {
    fn new(n: usize) -> Self {
        Self { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new() }
    }

    /// Adds an arc pair; `back` is the reverse capacity (equal for undirected edges).
    fn add(&mut self, a: usize, b: usize, fwd: u64, back: u64) {
        self.head[a].push(self.to.len());
        self.to.push(b);
        self.cap.push(fwd);
        self.head[b].push(self.to.len());
        self.to.push(a);
        self.cap.push(back);
    }

    fn max_flow(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let n = self.head.len();
        let mut flow = 0;
        while flow < limit {
            let mut pred = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &arc in &self.head[u] {
                    let w = self.to[arc];
                    if !seen[w] && self.cap[arc] > 0 {
                        seen[w] = true;
                        pred[w] = arc;
                        queue.push_back(w);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut push = limit - flow;
            let mut x = t;
            while x != s {
                let arc = pred[x];
                push = push.min(self.cap[arc]);
                x = self.to[arc ^ 1];
            }
            let mut x = t;
            while x != s {
                let arc = pred[x];
                self.cap[arc] -= push;
                self.cap[arc ^ 1] += push;
                x = self.to[arc ^ 1];
            }
            flow += push;
        }
        flow
    }
}

/// Aggregates parallel edges into capacities.
fn edge_network<E: Fn(usize) -> bool>(g: &Multigraph, edge_ok: E) -> FlowNet {
    let mut caps = std::collections::BTreeMap::new();
    for (p, e) in g.edges().iter().enumerate() {
        if edge_ok(p) {
            *caps.entry((e.u.min(e.v), e.u.max(e.v))).or_insert(0u64) += 1;
        }
    }
    let mut net = FlowNet::new(g.n());
    for ((a, b), c) in caps {
        net.add(a, b, c, c);
    }
    net
}

/// `s`-`t` edge connectivity (maximum number of edge-disjoint paths).
pub fn pair_edge_connectivity(g: &Multigraph, s: NodeId, t: NodeId) -> u64 {
    pair_edge_connectivity_filtered(g, s, t, |_| true)
}

pub fn pair_edge_connectivity_filtered<E: Fn(usize) -> bool>(
    g: &Multigraph,
    s: NodeId,
    t: NodeId,
    edge_ok: E,
) -> u64 {
    if s == t {
        return u64::MAX;
    }
    edge_network(g, edge_ok).max_flow(s, t, u64::MAX)
}

/// Global edge connectivity; `None` when `n < 2` (no cut exists).
pub fn edge_connectivity(g: &Multigraph) -> Option<u64> {
    edge_connectivity_filtered(g, |_| true)
}

pub fn edge_connectivity_filtered<E: Fn(usize) -> bool + Copy>(g: &Multigraph, edge_ok: E) -> Option<u64> {
    if g.n() < 2 {
        return None;
    }
    (1..g.n()).map(|t| pair_edge_connectivity_filtered(g, 0, t, edge_ok)).min()
}

/// `s`-`t` vertex connectivity by node splitting; `None` when `s` and `t` are adjacent.
pub fn pair_vertex_connectivity(g: &Multigraph, s: NodeId, t: NodeId) -> Option<u64> {
    if s == t || g.adjacent(s, t) {
        return None;
    }
    let n = g.n();
    let big = n as u64 + 1;
    let mut net = FlowNet::new(2 * n);
    // node x: in = x, out = n + x
    for x in 0..n {
        let c = if x == s || x == t { big } else { 1 };
        net.add(x, n + x, c, 0);
    }
    for e in g.edges() {
        net.add(n + e.u, e.v, big, 0);
        net.add(n + e.v, e.u, big, 0);
    }
    Some(net.max_flow(n + s, t, big))
}

fn separates_pair(g: &Multigraph, dead: &[bool], s: NodeId, t: NodeId) -> bool {
    bfs_filtered(g, s, |p| !dead[p], |_| true)[t].is_none()
}

fn disconnects(g: &Multigraph, dead: &[bool]) -> bool {
    bfs_filtered(g, 0, |p| !dead[p], |_| true).iter().any(Option::is_none)
}

/// Every edge subset of exactly `size` whose removal separates the pair (or the graph).
pub fn enumerate_edge_cuts(g: &Multigraph, pair: Option<(NodeId, NodeId)>, size: usize) -> Vec<Vec<EdgeId>> {
    let mut dead = vec![false; g.m()];
    let mut out = Vec::new();
    for subset in Combinations::new(g.m(), size) {
        for &p in &subset {
            dead[p] = true;
        }
        let cut = match pair {
            Some((s, t)) => separates_pair(g, &dead, s, t),
            None => disconnects(g, &dead),
        };
        if cut {
            let mut ids: Vec<EdgeId> = subset.iter().map(|&p| g.edge_at(p).id).collect();
            ids.sort();
            out.push(ids);
        }
        for &p in &subset {
            dead[p] = false;
        }
    }
    out.sort();
    out
}

/// Smallest disconnecting edge set size up to `cap`, found purely by enumeration.
pub fn min_cut_by_enumeration(
    g: &Multigraph,
    pair: Option<(NodeId, NodeId)>,
    cap: usize,
) -> Option<(usize, Vec<Vec<EdgeId>>)> {
    (0..=cap.min(g.m())).find_map(|size| {
        let cuts = enumerate_edge_cuts(g, pair, size);
        (!cuts.is_empty()).then_some((size, cuts))
    })
}

/// Exact edge cut oracle: max-flow value plus every minimum cut when the value is at most `cap`.
///
/// With `pair = None` this is the global minimum cut.
pub fn min_cut_oracle(g: &Multigraph, pair: Option<(NodeId, NodeId)>, cap: usize) -> OracleCut<EdgeId> {
    let value = match pair {
        Some((s, t)) => Some(pair_edge_connectivity(g, s, t)),
        None => edge_connectivity(g),
    };
    match value {
        Some(v) if v <= cap as u64 => OracleCut {
            value: CutValue::Exact(v),
            witnesses: enumerate_edge_cuts(g, pair, v as usize),
            adjacent: false,
        },
        _ => OracleCut { value: CutValue::AtLeast(cap as u64 + 1), witnesses: Vec::new(), adjacent: false },
    }
}

/// Exhaustive `s`-`t` vertex cut oracle over subsets of `V \ {s, t}` of size at most `cap`.
pub fn vertex_cut_oracle(g: &Multigraph, s: NodeId, t: NodeId, cap: usize) -> OracleCut<NodeId> {
    let unbounded = OracleCut { value: CutValue::AtLeast(cap as u64 + 1), witnesses: Vec::new(), adjacent: false };
    if s == t {
        return unbounded;
    }
    if g.adjacent(s, t) {
        return OracleCut { adjacent: true, ..unbounded };
    }
    let candidates: Vec<NodeId> = (0..g.n()).filter(|&x| x != s && x != t).collect();
    let mut removed = vec![false; g.n()];
    for size in 0..=cap.min(candidates.len()) {
        let mut witnesses = Vec::new();
        for subset in Combinations::new(candidates.len(), size) {
            for &i in &subset {
                removed[candidates[i]] = true;
            }
            if bfs_filtered(g, s, |_| true, |x| !removed[x])[t].is_none() {
                witnesses.push(subset.iter().map(|&i| candidates[i]).collect());
            }
            for &i in &subset {
                removed[candidates[i]] = false;
            }
        }
        if !witnesses.is_empty() {
            return OracleCut { value: CutValue::Exact(size as u64), witnesses, adjacent: false };
        }
    }
    unbounded
}

/// Minimum over non-adjacent pairs of the vertex cut oracle; `None` if every pair is adjacent.
pub fn global_vertex_cut_value(g: &Multigraph, cap: usize) -> Option<CutValue> {
    let mut best: Option<CutValue> = None;
    for s in 0..g.n() {
        for t in s + 1..g.n() {
            if g.adjacent(s, t) {
                continue;
            }
            let v = vertex_cut_oracle(g, s, t, cap).value;
            best = Some(match best {
                Some(b) if b <= v => b,
                _ => v,
            });
        }
    }
    best
}

/// Every vertex subset (excluding `keep`) of size at most `cap` that disconnects the graph.
pub fn disconnecting_vertex_sets(g: &Multigraph, cap: usize) -> Vec<Vec<NodeId>> {
    let mut out = Vec::new();
    let mut removed = vec![false; g.n()];
    for subset in subsets_up_to(g.n(), cap) {
        if subset.len() + 2 > g.n() {
            continue;
        }
        for &x in &subset {
            removed[x] = true;
        }
        let src = (0..g.n()).find(|&x| !removed[x]).unwrap_or(0);
        if bfs_filtered(g, src, |_| true, |x| !removed[x])
            .iter()
            .enumerate()
            .any(|(x, d)| !removed[x] && d.is_none())
        {
            out.push(subset.clone());
        }
        for &x in &subset {
            removed[x] = false;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GeneratorSpec};

    fn gen(spec: &str) -> Multigraph {
        generate(&spec.parse::<GeneratorSpec>().unwrap(), 0).unwrap()
    }

    #[test]
    fn bridge_is_unique_global_min_cut() {
        let g = gen("two-triangles");
        let cut = min_cut_oracle(&g, None, DEFAULT_CAP);
        assert_eq!(cut.value, CutValue::Exact(1));
        assert_eq!(cut.witnesses, vec![vec![EdgeId(7)]]);
    }

    #[test]
    fn cycle_six_has_fifteen_min_cuts() {
        let cut = min_cut_oracle(&gen("cycle(6)"), None, DEFAULT_CAP);
        assert_eq!(cut.value, CutValue::Exact(2));
        assert_eq!(cut.witnesses.len(), 15);
    }

    #[test]
    fn k4_pair_cut() {
        let cut = min_cut_oracle(&gen("complete(4)"), Some((0, 1)), DEFAULT_CAP);
        assert_eq!(cut.value, CutValue::Exact(3));
    }

    #[test]
    fn disconnected_pair_has_empty_witness() {
        let g = Multigraph::from_pairs(4, [(0, 1), (2, 3)]).unwrap();
        let cut = min_cut_oracle(&g, Some((0, 3)), DEFAULT_CAP);
        assert_eq!(cut.value, CutValue::Exact(0));
        assert_eq!(cut.witnesses, vec![Vec::<EdgeId>::new()]);
        assert_eq!(min_cut_oracle(&g, None, 2).value, CutValue::Exact(0));
    }

    #[test]
    fn above_cap_reports_lower_bound() {
        let cut = min_cut_oracle(&gen("complete(6)"), None, 3);
        assert_eq!(cut.value, CutValue::AtLeast(4));
        assert!(cut.witnesses.is_empty());
    }

    #[test]
    fn vertex_cuts() {
        let path = gen("path(3)");
        let cut = vertex_cut_oracle(&path, 0, 2, 4);
        assert_eq!(cut.value, CutValue::Exact(1));
        assert_eq!(cut.witnesses, vec![vec![1]]);
        assert_eq!(vertex_cut_oracle(&gen("cycle(4)"), 0, 2, 4).value, CutValue::Exact(2));
        assert_eq!(vertex_cut_oracle(&gen("grid(3,3)"), 0, 8, 4).value, CutValue::Exact(2));
        let k4 = vertex_cut_oracle(&gen("complete(4)"), 0, 1, 3);
        assert!(k4.adjacent);
        assert_eq!(k4.value, CutValue::AtLeast(4));
    }

    #[test]
    fn vertex_flow_agrees_with_enumeration() {
        for spec in ["grid(3,3)", "petersen", "cycle(7)", "wheel(6)", "hypercube(3)"] {
            let g = gen(spec);
            for s in 0..g.n() {
                for t in s + 1..g.n() {
                    if g.adjacent(s, t) {
                        continue;
                    }
                    let flow = pair_vertex_connectivity(&g, s, t).unwrap();
                    let exh = vertex_cut_oracle(&g, s, t, 4).value;
                    assert_eq!(CutValue::Exact(flow), exh, "{spec} {s}-{t}");
                }
            }
        }
    }

    #[test]
    fn dist_examples() {
        let tri = gen("cycle(3)");
        assert_eq!(dist_under_faults(&tri, 0, 1, &FaultSet::edges([EdgeId(1)])), Some(2));
        let c8 = gen("cycle(8)");
        assert_eq!(dist_under_faults(&c8, 0, 4, &FaultSet::edges([EdgeId(1)])), Some(4));
        let pet = gen("petersen");
        let e = pet.edges()[0];
        assert_eq!(dist_under_faults(&pet, e.u, e.v, &FaultSet::edges([e.id])), Some(4));
        assert_eq!(dist_under_faults(&c8, 0, 4, &FaultSet::vertices([2, 6])), None);
    }
}
