//! Deterministic test-graph generators.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{oracle, Multigraph, NodeId};
use crate::error::{Error, Result};

/// Attempts before `random-lambda` gives up on hitting the requested connectivity.
const MAX_ATTEMPTS: usize = 64;

/// A parsed generator description such as `cycle(5)` or `random-lambda(12,3,0.2)`.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Cycle(usize),
    Path(usize),
    /// Star with the given number of leaves; the center is node 0.
    Star(usize),
    Complete(usize),
    CompleteBipartite(usize, usize),
    Grid(usize, usize),
    Torus(usize, usize),
    /// Hub 0 joined to a rim cycle `1..=k`.
    Wheel(usize),
    /// Two `k`-cycles joined by a perfect matching of rungs.
    Prism(usize),
    Hypercube(u32),
    Petersen,
    /// Two triangles joined by a bridge (edge id 7).
    TwoTriangles,
    /// Two copies of K4 joined by two edges (ids 13 and 14).
    TwoK4,
    MultiCycle { n: usize, multiplicity: usize },
    RandomLambda { n: usize, lambda: usize, extra: f64 },
    /// Adjacent `s = 0`, `t = 1` whose `s`-`t` connectivity is `lambda`, built by
    /// repeatedly bridging every newest edge with a length-`d` detour.
    LowerBound { d: usize, lambda: usize },
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GeneratorSpec::*;
        match self {
            Cycle(n) => write!(f, "cycle({n})"),
            Path(n) => write!(f, "path({n})"),
            Star(k) => write!(f, "star({k})"),
            Complete(n) => write!(f, "complete({n})"),
            CompleteBipartite(a, b) => write!(f, "complete-bipartite({a},{b})"),
            Grid(r, c) => write!(f, "grid({r},{c})"),
            Torus(a, b) => write!(f, "torus({a},{b})"),
            Wheel(k) => write!(f, "wheel({k})"),
            Prism(k) => write!(f, "prism({k})"),
            Hypercube(d) => write!(f, "hypercube({d})"),
            Petersen => write!(f, "petersen"),
            TwoTriangles => write!(f, "two-triangles"),
            TwoK4 => write!(f, "two-k4"),
            MultiCycle { n, multiplicity } => write!(f, "multi-cycle({n},{multiplicity})"),
            RandomLambda { n, lambda, extra } => write!(f, "random-lambda({n},{lambda},{extra})"),
            LowerBound { d, lambda } => write!(f, "lower-bound({d},{lambda})"),
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let close = s
                    .strip_suffix(')')
                    .ok_or_else(|| Error::InvalidArgument(format!("unclosed generator spec `{s}`")))?;
                (&s[..open], &close[open + 1..])
            }
            None => (s, ""),
        };
        let nums: Vec<&str> = args.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
        let bad = || Error::InvalidArgument(format!("bad arguments in generator spec `{s}`"));
        let int = |i: usize| -> Result<usize> { nums.get(i).and_then(|a| a.parse().ok()).ok_or_else(bad) };
        let arity = |k: usize| if nums.len() == k { Ok(()) } else { Err(bad()) };
        use GeneratorSpec::*;
        let spec = match name.to_ascii_lowercase().as_str() {
            "cycle" => arity(1).and(int(0).map(Cycle))?,
            "path" => arity(1).and(int(0).map(Path))?,
            "star" => arity(1).and(int(0).map(Star))?,
            "complete" => arity(1).and(int(0).map(Complete))?,
            "complete-bipartite" => {
                arity(2)?;
                CompleteBipartite(int(0)?, int(1)?)
            }
            "k33" => arity(0).map(|_| CompleteBipartite(3, 3))?,
            "grid" => {
                arity(2)?;
                Grid(int(0)?, int(1)?)
            }
            "torus" => {
                arity(2)?;
                Torus(int(0)?, int(1)?)
            }
            "wheel" => arity(1).and(int(0).map(Wheel))?,
            "prism" => arity(1).and(int(0).map(Prism))?,
            "hypercube" => arity(1).and(int(0).map(|d| Hypercube(d as u32)))?,
            "petersen" => arity(0).map(|_| Petersen)?,
            "two-triangles" => arity(0).map(|_| TwoTriangles)?,
            "two-k4" => arity(0).map(|_| TwoK4)?,
            "multi-cycle" => {
                arity(2)?;
                MultiCycle { n: int(0)?, multiplicity: int(1)? }
            }
            "random-lambda" | "random-lambda-connected" => {
                arity(3)?;
                let extra: f64 = nums[2].parse().map_err(|_| bad())?;
                RandomLambda { n: int(0)?, lambda: int(1)?, extra }
            }
            "lower-bound" | "lower-bound-family" => {
                arity(2)?;
                LowerBound { d: int(0)?, lambda: int(1)? }
            }
            _ => return Err(Error::InvalidArgument(format!("unknown generator `{name}`"))),
        };
        Ok(spec)
    }
}

fn unsat(msg: impl Into<String>) -> Error {
    Error::Unsatisfiable(msg.into())
}

fn cycle_pairs(nodes: &[NodeId]) -> Vec<(NodeId, NodeId)> {
    (0..nodes.len()).map(|i| (nodes[i], nodes[(i + 1) % nodes.len()])).collect()
}

/// Builds the graph described by `spec`; `seed` only matters for random generators.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Multigraph> {
    use GeneratorSpec::*;
    let (n, pairs): (usize, Vec<(NodeId, NodeId)>) = match *spec {
        Cycle(n) => {
            if n < 3 {
                return Err(unsat("cycle needs n >= 3"));
            }
            (n, cycle_pairs(&(0..n).collect::<Vec<_>>()))
        }
        Path(n) => {
            if n == 0 {
                return Err(unsat("path needs n >= 1"));
            }
            (n, (1..n).map(|i| (i - 1, i)).collect())
        }
        Star(k) => (k + 1, (1..=k).map(|i| (0, i)).collect()),
        Complete(n) => (n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()),
        CompleteBipartite(a, b) => (a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect()),
        Grid(r, c) => {
            let mut pairs = Vec::new();
            for i in 0..r {
                for j in 0..c {
                    let x = i * c + j;
                    if j + 1 < c {
                        pairs.push((x, x + 1));
                    }
                    if i + 1 < r {
                        pairs.push((x, x + c));
                    }
                }
            }
            (r * c, pairs)
        }
        Torus(a, b) => {
            if a < 3 || b < 3 {
                return Err(unsat("torus needs both sides >= 3"));
            }
            let mut pairs = Vec::new();
            for i in 0..a {
                for j in 0..b {
                    let x = i * b + j;
                    pairs.push((x, i * b + (j + 1) % b));
                    pairs.push((x, ((i + 1) % a) * b + j));
                }
            }
            (a * b, pairs)
        }
        Wheel(k) => {
            if k < 3 {
                return Err(unsat("wheel needs a rim of >= 3"));
            }
            let rim: Vec<NodeId> = (1..=k).collect();
            let mut pairs: Vec<_> = rim.iter().map(|&x| (0, x)).collect();
            pairs.extend(cycle_pairs(&rim));
            (k + 1, pairs)
        }
        Prism(k) => {
            if k < 3 {
                return Err(unsat("prism needs k >= 3"));
            }
            let mut pairs = cycle_pairs(&(0..k).collect::<Vec<_>>());
            pairs.extend(cycle_pairs(&(k..2 * k).collect::<Vec<_>>()));
            pairs.extend((0..k).map(|i| (i, i + k)));
            (2 * k, pairs)
        }
        Hypercube(d) => {
            let n = 1usize << d;
            let mut pairs = Vec::new();
            for x in 0..n {
                for b in 0..d {
                    let y = x ^ (1 << b);
                    if x < y {
                        pairs.push((x, y));
                    }
                }
            }
            (n, pairs)
        }
        Petersen => {
            let mut pairs = cycle_pairs(&[0, 1, 2, 3, 4]);
            pairs.extend((0..5).map(|i| (i, i + 5)));
            pairs.extend((0..5).map(|i| (i + 5, (i + 2) % 5 + 5)));
            (10, pairs)
        }
        TwoTriangles => (6, vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]),
        TwoK4 => {
            let mut pairs = Vec::new();
            for base in [0, 4] {
                for u in 0..4 {
                    for v in u + 1..4 {
                        pairs.push((base + u, base + v));
                    }
                }
            }
            pairs.extend([(3, 4), (2, 5)]);
            (8, pairs)
        }
        MultiCycle { n, multiplicity } => {
            if n < 3 || multiplicity == 0 {
                return Err(unsat("multi-cycle needs n >= 3 and multiplicity >= 1"));
            }
            let base = cycle_pairs(&(0..n).collect::<Vec<_>>());
            (n, base.iter().flat_map(|&p| std::iter::repeat_n(p, multiplicity)).collect())
        }
        RandomLambda { n, lambda, extra } => return random_lambda(n, lambda, extra, seed),
        LowerBound { d, lambda } => lower_bound(d, lambda)?,
    };
    Multigraph::from_pairs(n, pairs)
}

/// Harary-style `lambda`-connected base graph on `order`, as a set of normalized pairs.
fn harary(order: &[NodeId], lambda: usize) -> BTreeSet<(NodeId, NodeId)> {
    let n = order.len();
    let mut pairs = BTreeSet::new();
    let mut add = |a: usize, b: usize| {
        let (x, y) = (order[a % n], order[b % n]);
        if x != y {
            pairs.insert((x.min(y), x.max(y)));
        }
    };
    if lambda == 1 {
        for i in 1..n {
            add(i - 1, i);
        }
        return pairs;
    }
    for i in 0..n {
        for j in 1..=lambda / 2 {
            add(i, i + j);
        }
    }
    if lambda % 2 == 1 {
        for i in 0..n.div_ceil(2) {
            add(i, i + n / 2);
        }
    }
    pairs
}

fn random_lambda(n: usize, lambda: usize, extra: f64, seed: u64) -> Result<Multigraph> {
    if lambda == 0 || lambda >= n {
        return Err(unsat(format!("random-lambda needs 1 <= lambda < n (got lambda = {lambda}, n = {n})")));
    }
    if !(0.0..=1.0).contains(&extra) {
        return Err(unsat("extra-edge probability must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut order: Vec<NodeId> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let mut pairs = harary(&order, lambda);
        let mut deg = vec![0usize; n];
        for &(a, b) in &pairs {
            deg[a] += 1;
            deg[b] += 1;
        }
        // one minimum-degree vertex keeps its degree, pinning the connectivity from above
        let pinned = (0..n).min_by_key(|&x| (deg[x], x)).unwrap_or(0);
        for u in 0..n {
            for v in u + 1..n {
                if u != pinned && v != pinned && !pairs.contains(&(u, v)) && rng.random_bool(extra) {
                    pairs.insert((u, v));
                }
            }
        }
        let g = Multigraph::from_pairs(n, pairs)?;
        if oracle::edge_connectivity(&g) == Some(lambda as u64) {
            return Ok(g);
        }
        log::debug!("random-lambda({n},{lambda},{extra}) attempt rejected, resampling");
    }
    Err(unsat(format!("no {lambda}-connected graph on {n} nodes after {MAX_ATTEMPTS} attempts")))
}

fn lower_bound(d: usize, lambda: usize) -> Result<(usize, Vec<(NodeId, NodeId)>)> {
    if d < 2 || lambda == 0 {
        return Err(unsat("lower-bound family needs d >= 2 and lambda >= 1"));
    }
    let mut n = 2;
    let mut pairs = vec![(0, 1)];
    let mut newest = vec![(0, 1)];
    for _ in 1..lambda {
        let mut next = Vec::new();
        for &(a, b) in &newest {
            let mut prev = a;
            for _ in 0..d - 1 {
                next.push((prev, n));
                prev = n;
                n += 1;
            }
            next.push((prev, b));
        }
        pairs.extend(&next);
        newest = next;
    }
    Ok((n, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(s: &str) -> Multigraph {
        generate(&s.parse().unwrap(), 1).unwrap()
    }

    #[test]
    fn small_shapes() {
        let c5 = gen("cycle(5)");
        assert_eq!((c5.m(), c5.diameter()), (5, Some(2)));
        assert_eq!(gen("petersen").m(), 15);
        assert_eq!(gen("petersen").diameter(), Some(2));
        assert_eq!(gen("hypercube(3)").m(), 12);
        assert_eq!(gen("torus(3,3)").m(), 18);
        assert_eq!(gen("grid(3,3)").m(), 12);
        assert_eq!(gen("wheel(6)").m(), 12);
        assert_eq!(gen("k33").m(), 9);
        assert_eq!(gen("prism(3)").m(), 9);
        let tt = gen("two-triangles");
        assert_eq!(tt.edge(crate::graph::EdgeId(7)).map(|e| (e.u, e.v)), Some((2, 3)));
    }

    #[test]
    fn multi_cycle_lambda() {
        let g = gen("multi-cycle(4,3)");
        assert_eq!(g.m(), 12);
        assert_eq!(oracle::edge_connectivity(&g), Some(6));
    }

    #[test]
    fn random_lambda_hits_target_and_is_deterministic() {
        for (n, l) in [(8, 1), (10, 2), (12, 3), (9, 3), (6, 5)] {
            let spec = GeneratorSpec::RandomLambda { n, lambda: l, extra: 0.2 };
            let a = generate(&spec, 7).unwrap();
            assert_eq!(oracle::edge_connectivity(&a), Some(l as u64));
            assert_eq!(a, generate(&spec, 7).unwrap());
        }
        assert!(generate(&GeneratorSpec::RandomLambda { n: 4, lambda: 4, extra: 0.1 }, 0).is_err());
    }

    #[test]
    fn lower_bound_pair_connectivity() {
        for l in 1..=3 {
            let g = generate(&GeneratorSpec::LowerBound { d: 3, lambda: l }, 0).unwrap();
            assert!(g.adjacent(0, 1));
            assert_eq!(oracle::pair_edge_connectivity(&g, 0, 1), l as u64);
        }
    }

    #[test]
    fn spec_round_trip() {
        for s in ["cycle(5)", "random-lambda(12,3,0.2)", "lower-bound(3,2)", "two-k4", "complete-bipartite(3,3)"] {
            let spec: GeneratorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("bogus(3)".parse::<GeneratorSpec>().is_err());
        assert!("cycle(3,4)".parse::<GeneratorSpec>().is_err());
    }
}
