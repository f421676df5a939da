//! Worst-case round counts with concrete constants, one per primitive and algorithm.
//!
//! Every bound is in terms of quantities a caller can compute up front (n, m, D,
//! the iteration count) plus the number of rejected reports, which only the run
//! itself knows. `D` is the hop diameter of the network; a BFS from any node has
//! depth at most `D`.

use crate::util::ceil_log2;

/// Truncated BFS to depth `min(cap, depth)`: one round per level, one for the
/// explores that land on visited nodes, one for the parent announcement.
pub fn bfs(cap: u64, depth: u64) -> u64 {
    cap.min(depth) + 2
}

/// Every node of a depth-`h` tree learning its root path, one edge id per round.
pub fn root_paths(h: u64) -> u64 {
    2 * h + 2
}

/// Convergecast up a BFS tree of depth at most `d`, then a flood back down.
pub fn all_reduce(d: u64) -> u64 {
    2 * d + 3
}

/// Pipelined flood of `items` words from one node.
pub fn broadcast(d: u64, items: u64) -> u64 {
    d + items + 2
}

/// Cut verification (one truncated BFS), plus the verdict aggregation when `report` is set.
pub fn verify(depth: u64, d: u64, report: bool) -> u64 {
    bfs(depth, d) + if report { all_reduce(d) } else { 0 }
}

/// Spanning BFS tree plus the reached-node count.
pub fn spanning_tree(d: u64) -> u64 {
    bfs(u64::MAX, d) + all_reduce(d)
}

/// Renaming: BFS, convergecast, downcast, one notification round.
pub fn rename(d: u64) -> u64 {
    3 * d + 5
}

/// Phase 1 with `iterations` BFS-plus-paths rounds at depth cap `cap`:
/// `iterations * (cap + 2 cap + 4)`.
pub fn phase_one(iterations: u64, cap: u64) -> u64 {
    iterations * (3 * cap + 4)
}

/// Phase 2: spanning tree, then per attempt an all-reduce, a witness broadcast
/// of at most `lambda` words and a verification with aggregation.
pub fn phase_two(lambda: u64, d: u64, verify_depth: u64, rejected: u64) -> u64 {
    spanning_tree(d) + (rejected + 1) * (all_reduce(d) + broadcast(d, lambda) + verify(verify_depth, d, true))
}

/// Randomized edge min cut: `iterations` at cap `3 lambda D`, verification at the same depth.
pub fn randomized_min_cut(lambda: u64, d: u64, iterations: u64, rejected: u64) -> u64 {
    let cap = 3 * lambda.max(1) * d.max(1);
    phase_one(iterations, cap) + phase_two(lambda, d, cap, rejected)
}

/// Vertex cuts: `lambda + 1` sources of `iterations` each at cap `3 lambda Delta D`;
/// verification at depth `(lambda Delta + 1)(2D + 1)`.
pub fn randomized_vertex_cut(lambda: u64, d: u64, max_degree: u64, iterations: u64, rejected: u64) -> u64 {
    let (d1, dg) = (d.max(1), max_degree.max(1));
    let cap = 3 * lambda.max(1) * dg * d1;
    let depth = (lambda * dg + 1) * (2 * d1 + 1);
    phase_one((lambda + 1) * iterations, cap) + phase_two(lambda, d, depth, rejected)
}

/// Deterministic min cut over `members` family members with `d_tilde` the source's BFS depth.
pub fn deterministic_min_cut(lambda: u64, d: u64, d_tilde: u64, members: u64, rejected: u64) -> u64 {
    let a = 6 * lambda * d_tilde.max(1);
    rename(d)
        + bfs(u64::MAX, d)
        + all_reduce(d)
        + phase_one(members, a)
        + phase_two(lambda, d, 3 * lambda.max(1) * 2 * d_tilde.max(1), rejected)
}

/// Repetitions a neighborhood cover may take before giving up.
pub fn cover_repetitions(n: usize) -> u64 {
    4 * ceil_log2(n.max(2) as u64) as u64 + 8
}

/// One exponential-shift clustering with padding parameter `k`, plus its cycles.
///
/// Shift flooding settles within `n + 1` rounds, greetings take 2, the padding
/// check `k + 1`, the stop test an all-reduce. Cluster radii are below `n`, so
/// root paths take `2n`, the path swap `n + 1`, and pushing the at most `2m`
/// cycles of at most `2n` words up the trees `n + 4mn`.
pub fn clustering(n: u64, m: u64, d: u64, k: u64) -> u64 {
    (n + 1) + 2 + (k + 1) + all_reduce(d) + 2 * n + (n + 1) + (n + 4 * m * n)
}

/// Cycle cover with parameter `d_prime` (clusters padded to `d_prime / 2`).
pub fn cycle_cover(n: usize, m: usize, d: u64, d_prime: u64) -> u64 {
    cover_repetitions(n) * clustering(n as u64, m as u64, d, d_prime / 2)
}

/// Randomized all-edge connectivities: one cycle cover per iteration, plus the
/// early-exit all-reduce when it is on.
pub fn edge_connectivities(n: usize, m: usize, d: u64, d_prime: u64, iterations: u64, early_exit: bool) -> u64 {
    let per = cycle_cover(n, m, d, d_prime) + if early_exit { all_reduce(d) } else { 0 };
    spanning_tree(d) + iterations * per
}

/// Deterministic all-edge connectivities over `members` family members.
pub fn deterministic_edge_connectivities(n: usize, m: usize, d: u64, d_prime: u64, members: u64) -> u64 {
    rename(d) + bfs(u64::MAX, d) + all_reduce(d) + spanning_tree(d) + members * cycle_cover(n, m, d, d_prime)
}

/// `(2k - 1)`-spanner: `k` phases of two rounds.
pub fn spanner(k: u64) -> u64 {
    2 * k.max(1)
}

/// `spanners` spanners run one after another.
pub fn spanners(count: u64, k: u64) -> u64 {
    count * spanner(k)
}

/// Exact sparse certificate: `lambda` spanners with stretch `ceil(log2 n)`.
pub fn sparse_certificate(lambda: u64, n: usize) -> u64 {
    spanners(lambda.max(1), ceil_log2(n.max(2) as u64).max(1) as u64)
}
