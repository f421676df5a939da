//! `(n, k)`-perfect hash families into `[2k^2]`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hash::HashFamily;
use crate::error::{Error, Result};
use crate::util::{binomial, ceil_log2, Combinations};

/// Largest number of `k`-subsets an audit will walk.
pub const AUDIT_LIMIT: u128 = 2_000_000;

/// The eps used for the explicit construction.
pub const EXPLICIT_EPS: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "mode", content = "seed")]
pub enum PerfectMode {
    /// Identity when `2k^2 >= n`, explicit otherwise.
    Auto,
    Explicit,
    VerifiedSearch(u64),
}

#[derive(Clone, Debug)]
enum Source {
    Identity,
    Explicit(HashFamily),
    Table(Vec<Arc<Vec<u32>>>),
}

#[derive(Clone, Debug)]
pub struct PerfectFamily {
    pub n: usize,
    pub k: usize,
    pub range: u32,
    source: Source,
    /// Construction that ended up being used ("identity", "explicit", "verified-search").
    pub used: &'static str,
    /// The explicit family failed its audit and was replaced.
    pub fell_back: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerfectAudit {
    pub subsets: u128,
    /// Largest member index any subset needed.
    pub deepest_member: u128,
    pub failure: Option<Vec<usize>>,
}

impl PerfectAudit {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Cardinality budget `6400 * (ceil(log2 n) * ceil(log2 2k^2))^2`.
pub fn size_budget(n: usize, k: usize) -> u128 {
    let t = ceil_log2(n.max(2) as u64) as u128 * ceil_log2(2 * (k * k).max(1) as u64).max(1) as u128;
    6400 * t * t
}

impl PerfectFamily {
    pub fn build(n: usize, k: usize, mode: PerfectMode) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("perfect family needs n >= 1".into()));
        }
        let range = (2 * k * k).max(1) as u32;
        let base = |source, used| PerfectFamily { n, k, range, source, used, fell_back: false };
        match mode {
            PerfectMode::Auto if range as usize >= n => Ok(base(Source::Identity, "identity")),
            PerfectMode::Auto | PerfectMode::Explicit => {
                let alpha = ceil_log2(n as u64).max(1);
                let beta = ceil_log2(range as u64);
                let fam = base(Source::Explicit(HashFamily::new(alpha, beta, EXPLICIT_EPS)?), "explicit");
                if binomial(n as u64, k as u64) > AUDIT_LIMIT {
                    return Ok(fam);
                }
                let audit = fam.audit();
                if audit.ok() {
                    return Ok(fam);
                }
                log::warn!("explicit ({n},{k})-perfect family failed its audit at {:?}; falling back", audit.failure);
                let mut fb = Self::verified_search(n, k, 0)?;
                fb.fell_back = true;
                Ok(fb)
            }
            PerfectMode::VerifiedSearch(seed) => Self::verified_search(n, k, seed),
        }
    }

    /// Random tables added greedily until every `k`-subset has an injective member.
    fn verified_search(n: usize, k: usize, seed: u64) -> Result<Self> {
        let range = (2 * k * k).max(1) as u32;
        if binomial(n as u64, k as u64) > AUDIT_LIMIT {
            return Err(Error::PerfectFamily(format!("C({n},{k}) subsets exceed the audit limit")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pending: Vec<Vec<usize>> = Combinations::new(n, k).collect();
        let mut tables = Vec::new();
        while !pending.is_empty() {
            if tables.len() >= 10_000 {
                return Err(Error::PerfectFamily("verified search did not converge".into()));
            }
            let t: Vec<u32> = (0..n).map(|_| rng.random_range(0..range)).collect();
            let before = pending.len();
            pending.retain(|s| !injective(s.iter().map(|&x| t[x])));
            if pending.len() < before {
                tables.push(Arc::new(t));
            }
        }
        if tables.is_empty() {
            tables.push(Arc::new((0..n as u32).map(|x| x % range).collect()));
        }
        Ok(PerfectFamily { n, k, range, source: Source::Table(tables), used: "verified-search", fell_back: false })
    }

    pub fn len(&self) -> u128 {
        match &self.source {
            Source::Identity => 1,
            Source::Explicit(f) => f.len(),
            Source::Table(t) => t.len() as u128,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hash_family(&self) -> Option<&HashFamily> {
        match &self.source {
            Source::Explicit(f) => Some(f),
            _ => None,
        }
    }

    /// Member `j` as a lookup table over `[n]`.
    pub fn table(&self, j: u128) -> Arc<Vec<u32>> {
        match &self.source {
            Source::Identity => Arc::new((0..self.n as u32).collect()),
            Source::Explicit(f) => {
                let h = f.member(j);
                Arc::new((0..self.n as u64).map(|x| (h.eval(x) % self.range as u64) as u32).collect())
            }
            Source::Table(t) => t[j as usize].clone(),
        }
    }

    /// Exhaustive check that every `k`-subset has an injective member.
    pub fn audit(&self) -> PerfectAudit {
        let mut cache: Vec<Arc<Vec<u32>>> = Vec::new();
        let mut audit = PerfectAudit { subsets: 0, deepest_member: 0, failure: None };
        'subsets: for s in Combinations::new(self.n, self.k) {
            audit.subsets += 1;
            let mut j = 0u128;
            while j < self.len() {
                if j as usize == cache.len() {
                    cache.push(self.table(j));
                }
                let t = &cache[j as usize];
                if injective(s.iter().map(|&x| t[x])) {
                    audit.deepest_member = audit.deepest_member.max(j);
                    continue 'subsets;
                }
                j += 1;
            }
            audit.failure = Some(s);
            break;
        }
        audit
    }
}

fn injective<I: Iterator<Item = u32>>(vals: I) -> bool {
    let mut seen: Vec<u32> = Vec::with_capacity(8);
    for v in vals {
        if seen.contains(&v) {
            return false;
        }
        seen.push(v);
    }
    true
}
