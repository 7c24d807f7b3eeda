//! The family of squarefree discriminants `d = 4n^2 + 1`.
//!
//! For these `d` the fundamental unit is `2n + sqrt(d)` (except `d = 5`), so
//! the regulator is about `(1/2) log d` and the class number is driven by
//! `L(1, chi_d)` alone. Every prime `p | n` splits in `Q(sqrt d)` because
//! `d = 1 mod p`; choosing `n` divisible by all small primes forces
//! `L(1, chi_d)` to be large.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{factorize, jacobi, kronecker, mul_mod, pow_mod};
use crate::classnum::{class_number_with, extremal_statistic_from, ClassNumberOptions, LMethod};
use crate::error::{domain, Error, Result};
use crate::lfun::{euler_truncated, tail_prime_sum};
use crate::par::map_slice;
use crate::sieve::{primes_up_to, Primes};

/// A member (or candidate member) `d = 4n^2 + 1` of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChowlaDiscriminant {
    pub n: u64,
    pub d: u64,
    pub squarefree: bool,
}

impl ChowlaDiscriminant {
    pub fn new(n: u64, squarefree: bool) -> Self {
        Self { n, d: chowla_d(n), squarefree }
    }

    /// Largest prime `P` such that `chi_d(p) = 1` for every prime `p <= P`;
    /// `1` when 2 does not split. Saturates at the end of `primes`.
    pub fn splitting_bound(&self, primes: &Primes) -> u64 {
        let mut last = 1;
        for &p in primes.as_slice() {
            if kronecker(self.d as i64, p) != 1 {
                return last;
            }
            last = p;
        }
        last
    }
}

pub fn chowla_d(n: u64) -> u64 {
    4 * n * n + 1
}

/// Largest `n` with `4n^2 + 1 <= x`.
pub fn max_n(x: u64) -> u64 {
    if x < 5 {
        0
    } else {
        ((x - 1) / 4).isqrt()
    }
}

/// `log epsilon_d` for `d = 4n^2 + 1`: `log(2n + sqrt d)`, and the golden ratio at `n = 1`.
pub fn chowla_regulator(n: u64) -> f64 {
    if n == 1 {
        ((1.0 + 5f64.sqrt()) / 2.0).ln()
    } else {
        let d = chowla_d(n) as f64;
        (2.0 * n as f64 + d.sqrt()).ln()
    }
}

/// The two roots `n mod p^2` of `4n^2 + 1 = 0 (mod p^2)` for a prime `p = 1 mod 4`.
pub fn roots_mod_p_squared(p: u64) -> [u64; 2] {
    debug_assert!(p % 4 == 1);
    let nonresidue = (2..p).find(|&c| jacobi(c, p) == -1).expect("p is an odd prime");
    // i^2 = -1 mod p, lifted to p^2 by one Newton step.
    let i = pow_mod(nonresidue, (p - 1) / 4, p);
    let p2 = p * p;
    let f = (mul_mod(i, i, p2) + 1) % p2;
    let inv_2i = pow_mod(2 * i % p2, p2 - p - 1, p2);
    let i2 = (i + p2 - mul_mod(f, inv_2i, p2)) % p2;
    // 2n = i2  =>  n = i2 / 2
    let n = mul_mod(i2, p2.div_ceil(2), p2);
    [n.min(p2 - n), n.max(p2 - n)]
}

/// Number of `n mod p^2` with `p^2 | 4n^2 + 1`, counted directly.
pub fn local_root_count(p: u64) -> u64 {
    let p2 = p * p;
    (0..p2).filter(|&n| (4 * (n as u128) * (n as u128) + 1).is_multiple_of(p2 as u128)).count() as u64
}

/// Closed form of [`local_root_count`]: 2 for `p = 1 mod 4`, otherwise 0.
pub fn local_root_count_closed(p: u64) -> u64 {
    if p % 4 == 1 {
        2
    } else {
        0
    }
}

/// Squarefree flags of `4n^2 + 1` for `n = 0..=n_max` by sieving the roots mod `p^2`.
///
/// Only primes up to `prime_bound` are sieved; any `n` whose `d` exceeds
/// `prime_bound^2` is then settled by factoring `d` directly.
pub fn squarefree_flags(n_max: u64, prime_bound: Option<u64>) -> Vec<bool> {
    let d_max = chowla_d(n_max);
    let full = d_max.isqrt();
    let bound = prime_bound.map_or(full, |b| b.min(full));
    let mut flags = vec![true; n_max as usize + 1];
    for p in primes_up_to(bound) {
        if p % 4 != 1 {
            continue;
        }
        let p2 = p * p;
        for r in roots_mod_p_squared(p) {
            let mut n = r;
            while n <= n_max {
                flags[n as usize] = false;
                n += p2;
            }
        }
    }
    if bound < full {
        let safe = bound.saturating_mul(bound);
        for n in 1..=n_max {
            if flags[n as usize] && chowla_d(n) > safe {
                flags[n as usize] = factorize(chowla_d(n), None).is_squarefree();
            }
        }
    }
    flags
}

/// All `n` with `4n^2 + 1 <= x` and `q | n`, with squarefree flags.
pub fn family_candidates(x: u64, q: u64) -> Vec<ChowlaDiscriminant> {
    assert!(q >= 1, "q must be positive");
    let n_max = max_n(x);
    if n_max < q {
        return Vec::new();
    }
    let flags = squarefree_flags(n_max, None);
    (1..=n_max / q).map(|j| ChowlaDiscriminant::new(j * q, flags[(j * q) as usize])).collect()
}

/// Squarefree `d = 4n^2 + 1 <= x` with `q | n`, ascending in `n`.
pub fn enumerate_family(x: u64, q: u64) -> Vec<ChowlaDiscriminant> {
    family_candidates(x, q).into_iter().filter(|c| c.squarefree).collect()
}

/// Count of family members against the predicted main term.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub x: u64,
    pub q: u64,
    pub count: u64,
    /// `(sqrt(x) / 2q) prod_{p not | q} (1 - rho(p^2)/p^2)`
    pub main_term_local: f64,
    /// `(sqrt(x) / 2q) prod_{p not | q} (1 - 2/p^2)`, the all-primes product.
    pub main_term_literal: f64,
    pub rel_error: f64,
    pub rel_error_literal: f64,
    /// Relative truncation error of either product, at most `2 / P` for cutoff `P`.
    pub product_tail_bound: f64,
}

/// Product cutoff for the local densities.
pub const DENSITY_PRIME_CUTOFF: u64 = 100_000;

pub fn density_check(x: u64, q: u64) -> Result<DensityReport> {
    if q == 0 {
        return domain("q must be positive");
    }
    let scale = (x as f64).sqrt() / (2.0 * q as f64);
    if scale < 100.0 {
        return domain(format!("density check needs sqrt(x)/(2q) >= 100, got {scale:.3}"));
    }
    let count = enumerate_family(x, q).len() as u64;
    let (mut local, mut literal) = (0.0f64, 0.0f64);
    for p in primes_up_to(DENSITY_PRIME_CUTOFF) {
        if q.is_multiple_of(p) {
            continue;
        }
        let p2 = (p * p) as f64;
        local += (-(local_root_count_closed(p) as f64) / p2).ln_1p();
        literal += (-2.0 / p2).ln_1p();
    }
    let main_term_local = scale * local.exp();
    let main_term_literal = scale * literal.exp();
    Ok(DensityReport {
        x,
        q,
        count,
        main_term_local,
        main_term_literal,
        rel_error: count as f64 / main_term_local - 1.0,
        rel_error_literal: count as f64 / main_term_literal - 1.0,
        product_tail_bound: 2.0 / DENSITY_PRIME_CUTOFF as f64,
    })
}

/// Product of the primes `p <= y`.
pub fn primorial(y: f64) -> Result<u64> {
    let mut q = 1u64;
    for p in primes_up_to(y.max(0.0).floor() as u64) {
        q = q.checked_mul(p).ok_or_else(|| Error::Domain(format!("primorial of {y} overflows 64 bits")))?;
    }
    Ok(q)
}

/// Squarefree `d = 4n^2 + 1 <= x` with every prime `p <= y` dividing `n`,
/// each post-checked to satisfy `chi_d(p) = 1` for all `p <= y`.
pub fn construct_splitting(x: u64, y: f64) -> Result<Vec<ChowlaDiscriminant>> {
    let q = primorial(y)?;
    if (2 * q) as f64 > (x as f64).sqrt() {
        return Ok(Vec::new());
    }
    let small = primes_up_to(y.max(0.0).floor() as u64);
    let members = enumerate_family(x, q);
    for m in &members {
        if let Some(&p) = small.iter().find(|&&p| kronecker(m.d as i64, p) != 1) {
            return Err(Error::Consistency(format!("d = {} does not split at p = {p}", m.d)));
        }
    }
    Ok(members)
}

/// Class number estimate and extremal statistic for one family member.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeRow {
    pub d: u64,
    pub n: u64,
    /// `sqrt(d) L_trunc / (2 R)`; real-valued since `L_trunc` is an approximation.
    pub h: f64,
    pub regulator: f64,
    pub l_trunc: f64,
    pub tail_sum: f64,
    pub statistic: f64,
    /// Cycle-count class number, when `d` is small enough to compute it.
    pub h_exact: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeParams {
    pub y: Option<f64>,
    pub z: Option<f64>,
    /// Members with `d` at or below this also get an exact class number.
    pub exact_limit: u64,
}

impl Default for ExtremeParams {
    fn default() -> Self {
        Self { y: None, z: None, exact_limit: 1_000_000 }
    }
}

/// Largest Euler-product cutoff used by the search.
pub const Z_CAP: f64 = 1.0e6;

/// `z = (log x)^6` capped at `1e6`.
pub fn default_z(x: u64) -> f64 {
    (x as f64).ln().powi(6).min(Z_CAP)
}

/// `y = log x / (2 log log x)`, at least 3.
pub fn default_y(x: u64) -> f64 {
    let l = (x as f64).ln();
    (l / (2.0 * l.ln())).max(3.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeSearch {
    pub x: u64,
    pub y: f64,
    pub z: f64,
    /// Ranked by statistic, largest first.
    pub rows: Vec<ExtremeRow>,
    /// `(log log x)^{-1/4}`.
    pub tail_threshold: f64,
    /// Members with `|tail_sum| > tail_threshold`.
    pub tail_exceedances: u64,
    pub max_statistic: f64,
}

fn member_row(m: &ChowlaDiscriminant, y: f64, z: f64, primes: &Primes, exact_limit: u64) -> Result<ExtremeRow> {
    let l_trunc = euler_truncated(m.d, z, primes)?;
    let tail_sum = if y < z { tail_prime_sum(m.d, y, z, primes)? } else { 0.0 };
    let regulator = chowla_regulator(m.n);
    let h = (m.d as f64).sqrt() * l_trunc / (2.0 * regulator);
    let statistic = extremal_statistic_from(h, m.d)?;
    let h_exact = if m.d <= exact_limit {
        let opts = ClassNumberOptions { method: LMethod::Series, ..Default::default() };
        Some(class_number_with(m.d, opts, None)?.h)
    } else {
        None
    };
    Ok(ExtremeRow { d: m.d, n: m.n, h, regulator, l_trunc, tail_sum, statistic, h_exact })
}

fn rows_for(members: &[ChowlaDiscriminant], y: f64, z: f64, primes: &Primes, exact_limit: u64) -> Result<Vec<ExtremeRow>> {
    map_slice(members, 16, |chunk| chunk.iter().map(|m| member_row(m, y, z, primes, exact_limit)).collect::<Result<Vec<_>>>())
        .into_iter()
        .collect::<Result<Vec<Vec<_>>>>()
        .map(|parts| parts.into_iter().flatten().collect())
}

/// Rank the members built by [`construct_splitting`] by their extremal statistic.
pub fn extreme_search(x: u64, params: ExtremeParams) -> Result<ExtremeSearch> {
    let y = params.y.unwrap_or_else(|| default_y(x));
    let z = params.z.unwrap_or_else(|| default_z(x));
    if !(z >= 2.0) {
        return domain(format!("Euler cutoff z must be at least 2, got {z}"));
    }
    let primes = Primes::up_to(z.floor() as u64 + 1);
    let members = construct_splitting(x, y)?;
    let mut rows = rows_for(&members, y, z, &primes, params.exact_limit)?;
    rows.sort_by(|a, b| b.statistic.total_cmp(&a.statistic).then(a.d.cmp(&b.d)));
    let tail_threshold = (x as f64).ln().ln().powf(-0.25);
    let tail_exceedances = rows.iter().filter(|r| r.tail_sum.abs() > tail_threshold).count() as u64;
    let max_statistic = rows.first().map_or(f64::NAN, |r| r.statistic);
    Ok(ExtremeSearch { x, y, z, rows, tail_threshold, tail_exceedances, max_statistic })
}

/// Statistics of a uniform random sample (without replacement) of members of the family up to `x`.
pub fn family_sample(x: u64, size: usize, seed: u64, z: f64) -> Result<Vec<ExtremeRow>> {
    let members = enumerate_family(x, 1);
    let size = size.min(members.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<ChowlaDiscriminant> = sample(&mut rng, members.len(), size).into_iter().map(|i| members[i]).collect();
    picked.sort();
    let primes = Primes::up_to(z.floor() as u64 + 1);
    rows_for(&picked, 2.0, z, &primes, 0)
}

/// Median of a non-empty list of values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { (v[mid - 1] + v[mid]) / 2.0 })
}
