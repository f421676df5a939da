//! `(n, a, b)` FT-universal families `S_{h, i_1..i_b} = { x : h(x) not in {i_1..i_b} }`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::perfect::{PerfectFamily, PerfectMode};
use crate::error::{Error, Result};
use crate::util::{binomial, subsets_up_to};

/// One member, stored as its hash table plus banned values; never as an explicit set.
#[derive(Clone, PartialEq, Eq)]
pub struct MemberSet {
    pub hash_index: u128,
    table: Arc<Vec<u32>>,
    pub banned: Vec<u32>,
}

impl fmt::Debug for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MemberSet(h={}, banned={:?})", self.hash_index, self.banned)
    }
}

impl MemberSet {
    /// Membership of domain element `x` (0-based); out-of-domain elements are excluded.
    pub fn contains(&self, x: u64) -> bool {
        self.table.get(x as usize).is_some_and(|v| !self.banned.contains(v))
    }

    /// Bitmask over `[n]`, for `n <= 64`.
    pub fn mask(&self) -> u64 {
        (0..self.table.len().min(64)).filter(|&x| self.contains(x as u64)).fold(0, |m, x| m | 1 << x)
    }
}

#[derive(Clone, Debug)]
pub struct UniversalFamily {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub perfect: Arc<PerfectFamily>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniversalExport {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub range: u32,
    pub perfect_construction: &'static str,
    pub perfect_members: String,
    pub alpha: Option<u32>,
    pub beta: Option<u32>,
    pub eps: Option<f64>,
    pub field_degree: Option<u32>,
    pub member_count: String,
    pub distinct_members: String,
}

impl UniversalFamily {
    pub fn build(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::build_with(n, a, b, PerfectMode::Auto)
    }

    pub fn build_with(n: usize, a: usize, b: usize, mode: PerfectMode) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("universal family needs n >= 1".into()));
        }
        let k = a + b;
        Ok(Self { n, a, b, k, perfect: Arc::new(PerfectFamily::build(n, k, mode)?) })
    }

    /// `|PerfectFamily| * (2k^2)^b`, saturating.
    pub fn len(&self) -> u128 {
        (0..self.b).fold(self.perfect.len(), |acc, _| acc.saturating_mul(self.perfect.range as u128))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Member by index: hash-major, then banned tuple in base `2k^2`.
    pub fn member(&self, idx: u128) -> MemberSet {
        let r = self.perfect.range as u128;
        let per_hash = r.saturating_pow(self.b as u32);
        let mut rest = idx % per_hash;
        let banned = (0..self.b)
            .map(|_| {
                let v = (rest % r) as u32;
                rest /= r;
                v
            })
            .collect();
        let h = idx / per_hash;
        MemberSet { hash_index: h, table: self.perfect.table(h), banned }
    }

    /// Number of distinct member sets; distinct banned tuples only matter through the hash image.
    pub fn distinct_len(&self) -> u128 {
        let mut total = 0u128;
        for h in 0..self.perfect.len() {
            let img = image(&self.perfect.table(h)).len() as u64;
            let from = u64::from(!self.empty_ban_reachable(img as usize));
            total += (from..=self.b as u64).map(|j| binomial(img, j)).sum::<u128>();
        }
        total
    }

    /// Banning nothing needs `b = 0` or a banned value outside the hash image.
    fn empty_ban_reachable(&self, image_len: usize) -> bool {
        self.b == 0 || image_len < self.perfect.range as usize
    }

    /// Iterates the distinct members (banned sets drawn from each hash image, size <= b).
    pub fn distinct_members(&self) -> impl Iterator<Item = MemberSet> + '_ {
        let b = self.b;
        (0..self.perfect.len()).flat_map(move |h| {
            let table = self.perfect.table(h);
            let img: Vec<u32> = image(&table).into_iter().collect();
            let empty_ok = self.empty_ban_reachable(img.len());
            subsets_up_to(img.len(), b).filter(move |s| empty_ok || !s.is_empty()).map(move |s| MemberSet {
                hash_index: h,
                table: table.clone(),
                banned: s.iter().map(|&i| img[i]).collect(),
            })
        })
    }

    pub fn export(&self) -> UniversalExport {
        let hf = self.perfect.hash_family();
        UniversalExport {
            n: self.n,
            a: self.a,
            b: self.b,
            k: self.k,
            range: self.perfect.range,
            perfect_construction: self.perfect.used,
            perfect_members: self.perfect.len().to_string(),
            alpha: hf.map(|f| f.alpha),
            beta: hf.map(|f| f.beta),
            eps: hf.map(|f| f.eps),
            field_degree: hf.map(|f| f.l0),
            member_count: self.len().to_string(),
            distinct_members: self.distinct_len().to_string(),
        }
    }
}

fn image(table: &[u32]) -> BTreeSet<u32> {
    table.iter().copied().collect()
}

/// Result of checking a set family for `(n, a, b)`-universality.
#[derive(Clone, Debug, Default, Serialize)]
pub struct UniversalReport {
    pub n: usize,
    pub a: usize,
    pub b: usize,
    pub members_checked: usize,
    pub pairs_checked: u64,
    /// Violating `(A, B)` pairs.
    pub violations: Vec<(Vec<usize>, Vec<usize>)>,
}

impl UniversalReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

fn to_mask(xs: &[usize]) -> u64 {
    xs.iter().fold(0, |m, &x| m | 1 << x)
}

/// Checks universality of an explicit family of bitmasks over `[n]` (`n <= 64`).
pub fn audit_masks(masks: &[u64], n: usize, a: usize, b: usize, mode: AuditMode) -> UniversalReport {
    assert!(n <= 64, "mask audits need n <= 64");
    let mut rep = UniversalReport { n, a, b, members_checked: masks.len(), ..Default::default() };
    let check = |av: Vec<usize>, bv: Vec<usize>, rep: &mut UniversalReport| {
        let (am, bm) = (to_mask(&av), to_mask(&bv));
        rep.pairs_checked += 1;
        if !masks.iter().any(|&m| m & am == am && m & bm == 0) {
            rep.violations.push((av, bv));
        }
    };
    match mode {
        AuditMode::Exhaustive => {
            for bv in subsets_up_to(n, b) {
                let rest: Vec<usize> = (0..n).filter(|x| !bv.contains(x)).collect();
                for ai in subsets_up_to(rest.len(), a) {
                    check(ai.iter().map(|&i| rest[i]).collect(), bv.clone(), &mut rep);
                }
            }
        }
        AuditMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let mut perm: Vec<usize> = (0..n).collect();
                for i in (1..n).rev() {
                    perm.swap(i, rng.random_range(0..=i));
                }
                let bs = rng.random_range(0..=b.min(n));
                let as_ = rng.random_range(0..=a.min(n - bs));
                let mut bv = perm[..bs].to_vec();
                let mut av = perm[bs..bs + as_].to_vec();
                av.sort_unstable();
                bv.sort_unstable();
                check(av, bv, &mut rep);
            }
        }
    }
    rep
}

/// Universality audit of a built family over its distinct members.
pub fn verify_universal(fam: &UniversalFamily, mode: AuditMode) -> Result<UniversalReport> {
    if fam.n > 64 {
        return Err(Error::InvalidArgument("audits support n <= 64".into()));
    }
    if mode == AuditMode::Exhaustive && (fam.n > 14 || fam.a > 4 || fam.b > 2) {
        return Err(Error::InvalidArgument("exhaustive audits are limited to n <= 14, a <= 4, b <= 2".into()));
    }
    let limit = 5_000_000u128;
    if fam.distinct_len() > limit {
        return Err(Error::FamilyTooLarge { size: fam.distinct_len(), budget: limit });
    }
    let masks: Vec<u64> = fam.distinct_members().map(|m| m.mask()).collect();
    Ok(audit_masks(&masks, fam.n, fam.a, fam.b, mode))
}

/// Draws `ceil(5e * a^(b+1) * ln n)` independent samples keeping each element w.p. `1 - 1/a`,
/// resampling with the next seed until the exhaustive audit passes.
#[derive(Clone, Debug, Serialize)]
pub struct SampledFamily {
    pub masks: Vec<u64>,
    pub seed_used: u64,
    pub attempts: u64,
}

pub fn sampled_family_size(n: usize, a: usize, b: usize) -> usize {
    (5.0 * std::f64::consts::E * (a as f64).powi(b as i32 + 1) * (n as f64).ln()).ceil().max(1.0) as usize
}

pub fn randomized_family_search(n: usize, a: usize, b: usize, seed: u64) -> Result<SampledFamily> {
    if a < 2 {
        return Err(Error::InvalidArgument("randomized family search needs a >= 2 (p = 1 - 1/a)".into()));
    }
    if n > 64 {
        return Err(Error::InvalidArgument("randomized family search needs n <= 64".into()));
    }
    let size = sampled_family_size(n, a, b);
    let p = 1.0 - 1.0 / a as f64;
    for attempt in 0..64u64 {
        let s = seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let masks: Vec<u64> =
            (0..size).map(|_| (0..n).filter(|_| rng.random_bool(p)).fold(0, |m, x| m | 1 << x)).collect();
        if audit_masks(&masks, n, a, b, AuditMode::Exhaustive).ok() {
            return Ok(SampledFamily { masks, seed_used: s, attempts: attempt + 1 });
        }
        log::info!("sampled ({n},{a},{b}) family with seed {s} failed its audit; resampling");
    }
    Err(Error::PerfectFamily("randomized family search exhausted its attempts".into()))
}
