//! Local unit-capacity max-flow on a node's own edge list.
//!
//! Augmenting paths are found by BFS scanning arcs in ascending edge-id order,
//! so results are a deterministic function of the edge list. The witness cut is
//! the frontier of the residual reachable set from `s`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::graph::{Edge, EdgeId, NodeId};
use crate::util::Combinations;

struct Net {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u64>,
    /// Edge id carried by the arc (`None` for internal split arcs).
    label: Vec<Option<EdgeId>>,
}

impl Net {
    fn new(n: usize) -> Self {
        Self { head: vec![Vec::new(); n], to: Vec::new(), cap: Vec::new(), label: Vec::new() }
    }

    fn add(&mut self, a: usize, b: usize, fwd: u64, back: u64, label: Option<EdgeId>) -> usize {
        let id = self.to.len();
        self.head[a].push(id);
        self.to.push(b);
        self.cap.push(fwd);
        self.label.push(label);
        self.head[b].push(id + 1);
        self.to.push(a);
        self.cap.push(back);
        self.label.push(label);
        id
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &a in &self.head[u] {
                let w = self.to[a];
                if !seen[w] && self.cap[a] > 0 {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
        seen
    }

    fn augment(&mut self, s: usize, t: usize, limit: u64) -> u64 {
        let mut flow = 0;
        while flow < limit {
            let mut pred = vec![usize::MAX; self.head.len()];
            let mut seen = vec![false; self.head.len()];
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                if u == t {
                    break;
                }
                for &a in &self.head[u] {
                    let w = self.to[a];
                    if !seen[w] && self.cap[a] > 0 {
                        seen[w] = true;
                        pred[w] = a;
                        q.push_back(w);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut x = t;
            while x != s {
                let a = pred[x];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                x = self.to[a ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

/// Outcome of a truncated local flow computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCut<T> {
    /// Flow value, capped at the limit.
    pub value: u64,
    /// The limit was reached; the true connectivity is at least `value`.
    pub saturated: bool,
    /// Minimum cut (edges or vertices), present when not saturated.
    pub witness: Option<Vec<T>>,
    /// Edge-disjoint (or internally vertex-disjoint) paths found, as edge-id lists.
    pub paths: Vec<Vec<EdgeId>>,
}

fn index_nodes(edges: &[Edge], extra: &[NodeId]) -> HashMap<NodeId, usize> {
    let mut ids: BTreeSet<NodeId> = extra.iter().copied().collect();
    for e in edges {
        ids.insert(e.u);
        ids.insert(e.v);
    }
    ids.into_iter().enumerate().map(|(i, v)| (v, i)).collect()
}

fn sorted(edges: &[Edge]) -> Vec<Edge> {
    let mut es = edges.to_vec();
    es.sort_by_key(|e| e.id);
    es
}

/// Decomposes the unit flow into paths by walking flow-carrying arcs from `s`.
fn decompose(net: &Net, arcs: &[usize], s: usize, t: usize, k: u64) -> Vec<Vec<EdgeId>> {
    // arcs[i] is the forward arc of a unit edge; flow direction from residual capacities
    let mut out: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (i, &a) in arcs.iter().enumerate() {
        let (x, y) = (net.to[a ^ 1], net.to[a]);
        match net.cap[a] {
            0 => out.entry(x).or_default().push((i, y)),
            2 => out.entry(y).or_default().push((i, x)),
            _ => {}
        }
    }
    let mut used = vec![false; arcs.len()];
    let mut paths = Vec::new();
    for _ in 0..k {
        let mut walk: Vec<(usize, usize)> = Vec::new(); // (edge index, node reached)
        let mut at = s;
        let mut steps = 0;
        while at != t && steps <= arcs.len() {
            let Some(&(i, y)) = out.get(&at).and_then(|v| v.iter().find(|(i, _)| !used[*i])) else {
                break;
            };
            used[i] = true;
            walk.push((i, y));
            at = y;
            steps += 1;
        }
        if at != t {
            break;
        }
        // erase loops so the path is simple
        let mut simple: Vec<(usize, usize)> = Vec::new();
        for step in walk {
            if let Some(pos) = simple.iter().position(|&(_, y)| y == step.1) {
                simple.truncate(pos + 1);
                continue;
            }
            if step.1 == s {
                simple.clear();
                continue;
            }
            simple.push(step);
        }
        paths.push(simple.iter().map(|&(i, _)| net.label[arcs[i]].expect("edge arc")).collect());
    }
    paths
}

/// `s`-`t` edge cut of the subgraph `edges`, computing at most `limit` augmenting paths.
pub fn local_edge_cut(edges: &[Edge], s: NodeId, t: NodeId, limit: u64) -> LocalCut<EdgeId> {
    let es = sorted(edges);
    let idx = index_nodes(&es, &[s, t]);
    if s == t {
        return LocalCut { value: limit, saturated: true, witness: None, paths: Vec::new() };
    }
    let mut net = Net::new(idx.len());
    let arcs: Vec<usize> = es.iter().map(|e| net.add(idx[&e.u], idx[&e.v], 1, 1, Some(e.id))).collect();
    let (si, ti) = (idx[&s], idx[&t]);
    let value = net.augment(si, ti, limit);
    let saturated = value >= limit;
    let witness = (!saturated).then(|| {
        let side = net.reachable(si);
        es.iter().filter(|e| side[idx[&e.u]] != side[idx[&e.v]]).map(|e| e.id).collect()
    });
    let paths = decompose(&net, &arcs, si, ti, value);
    LocalCut { value, saturated, witness, paths }
}

/// `s`-`t` vertex cut of the subgraph `edges` by node splitting; `None` if `s` and `t` are adjacent.
pub fn local_vertex_cut(edges: &[Edge], s: NodeId, t: NodeId, limit: u64) -> Option<LocalCut<NodeId>> {
    if s == t || edges.iter().any(|e| e.touches(s) && e.touches(t)) {
        return None;
    }
    let es = sorted(edges);
    let idx = index_nodes(&es, &[s, t]);
    let k = idx.len();
    let big = limit + 1;
    let mut net = Net::new(2 * k);
    // in-node i, out-node k + i
    let mut split = vec![0; k];
    let mut nodes: Vec<(NodeId, usize)> = idx.iter().map(|(&v, &i)| (v, i)).collect();
    nodes.sort_unstable();
    for &(v, i) in &nodes {
        let c = if v == s || v == t { big } else { 1 };
        split[i] = net.add(i, k + i, c, 0, None);
    }
    let mut arcs = Vec::new();
    for e in &es {
        let (a, b) = (idx[&e.u], idx[&e.v]);
        arcs.push(net.add(k + a, b, big, 0, Some(e.id)));
        arcs.push(net.add(k + b, a, big, 0, Some(e.id)));
    }
    let (si, ti) = (k + idx[&s], idx[&t]);
    let value = net.augment(si, ti, limit);
    let saturated = value >= limit;
    let witness = (!saturated).then(|| {
        let side = net.reachable(si);
        nodes.iter().filter(|&&(_, i)| side[i] && !side[k + i]).map(|&(v, _)| v).collect()
    });
    // paths: follow saturated edge arcs from s
    let mut paths = Vec::new();
    let mut next: HashMap<usize, Vec<(usize, EdgeId)>> = HashMap::new();
    for &a in &arcs {
        if net.cap[a] < big {
            let from = net.to[a ^ 1] - k;
            next.entry(from).or_default().push((net.to[a], net.label[a].expect("edge arc")));
        }
    }
    for _ in 0..value {
        let mut at = idx[&s];
        let mut path = Vec::new();
        while at != idx[&t] {
            let Some(list) = next.get_mut(&at) else { break };
            let Some((w, id)) = list.pop() else { break };
            path.push(id);
            at = w;
        }
        paths.push(path);
    }
    Some(LocalCut { value, saturated, witness, paths })
}

/// Every `s`-`t` edge cut of size `size` in the subgraph, where `size` equals the `s`-`t`
/// connectivity witnessed by `paths` (each minimum cut takes exactly one edge per path).
pub fn all_min_edge_cuts(edges: &[Edge], s: NodeId, t: NodeId, paths: &[Vec<EdgeId>]) -> Vec<Vec<EdgeId>> {
    let es = sorted(edges);
    let idx = index_nodes(&es, &[s, t]);
    let separates = |cut: &BTreeSet<EdgeId>| {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); idx.len()];
        for e in es.iter().filter(|e| !cut.contains(&e.id)) {
            adj[idx[&e.u]].push(idx[&e.v]);
            adj[idx[&e.v]].push(idx[&e.u]);
        }
        let mut seen = vec![false; idx.len()];
        seen[idx[&s]] = true;
        let mut stack = vec![idx[&s]];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        !seen[idx[&t]]
    };
    let mut out = BTreeSet::new();
    let mut choice = vec![0usize; paths.len()];
    if paths.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    loop {
        let cut: BTreeSet<EdgeId> = paths.iter().zip(&choice).map(|(p, &c)| p[c]).collect();
        if cut.len() == paths.len() && separates(&cut) {
            out.insert(cut.into_iter().collect::<Vec<_>>());
        }
        // odometer over one edge per path
        let mut i = 0;
        while i < paths.len() {
            choice[i] += 1;
            if choice[i] < paths[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == paths.len() {
            break;
        }
    }
    out.into_iter().collect()
}

/// Brute-force variant of [`all_min_edge_cuts`] used to cross-check it.
pub fn min_edge_cuts_by_subsets(edges: &[Edge], s: NodeId, t: NodeId, size: usize) -> Vec<Vec<EdgeId>> {
    let es = sorted(edges);
    let mut out = Vec::new();
    for pick in Combinations::new(es.len(), size) {
        let cut: BTreeSet<EdgeId> = pick.iter().map(|&i| es[i].id).collect();
        let rest: Vec<Edge> = es.iter().filter(|e| !cut.contains(&e.id)).copied().collect();
        if local_edge_cut(&rest, s, t, 1).value == 0 {
            out.push(cut.into_iter().collect());
        }
    }
    out.sort();
    out
}
