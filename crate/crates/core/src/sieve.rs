//! Least-prime-factor tables and prime lists.

use crate::arith::Factorization;
use crate::error::{Error, Result};

/// Default cap on the number of entries in a [`LpfSieve`] (4 bytes each, so 1 GiB).
pub const DEFAULT_LPF_BUDGET: u64 = 1 << 28;

/// Table of least prime factors for every integer in `2..=limit`.
///
/// Memory is `4 * (limit + 1)` bytes. The table is immutable once built and
/// can be shared freely between threads.
#[derive(Debug, Clone)]
pub struct LpfSieve {
    lpf: Vec<u32>,
}

impl LpfSieve {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_budget(limit, DEFAULT_LPF_BUDGET)
    }

    pub fn with_budget(limit: u64, budget: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit must be at least 2, got {limit}")));
        }
        if limit > budget || limit > u32::MAX as u64 {
            return Err(Error::Resource(format!("least-prime-factor table of {limit} entries exceeds budget of {budget}")));
        }
        let n = limit as usize;
        let mut lpf = vec![0u32; n + 1];
        for i in 2..=n {
            if lpf[i] != 0 {
                continue;
            }
            lpf[i] = i as u32;
            let mut j = i.saturating_mul(i);
            while j <= n {
                if lpf[j] == 0 {
                    lpf[j] = i as u32;
                }
                j += i;
            }
        }
        Ok(Self { lpf })
    }

    pub fn limit(&self) -> u64 {
        (self.lpf.len() - 1) as u64
    }

    /// Least prime factor of `v`; `None` outside `2..=limit`.
    pub fn least_prime_factor(&self, v: u64) -> Option<u64> {
        if v < 2 || v > self.limit() {
            return None;
        }
        Some(self.lpf[v as usize] as u64)
    }

    pub fn is_prime(&self, v: u64) -> bool {
        self.least_prime_factor(v) == Some(v)
    }

    /// Factor `v <= limit` by repeated table lookups.
    pub fn factorize(&self, v: u64) -> Option<Factorization> {
        if v == 0 || v > self.limit() {
            return None;
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rest = v;
        while rest > 1 {
            let p = self.lpf[rest as usize] as u64;
            rest /= p;
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        Some(Factorization::from_parts(v, factors))
    }
}

const SEGMENT: u64 = 1 << 16;

/// All primes `<= limit`, by a segmented sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = limit.isqrt();
    // Base primes up to sqrt(limit) with a plain sieve.
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root as usize {
        if small[i] {
            base.push(i as u64);
            let mut j = i * i;
            while j <= root as usize {
                small[j] = false;
                j += i;
            }
        }
    }
    let mut out = Vec::new();
    let mut seg = vec![true; SEGMENT as usize];
    let mut lo = 2u64;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut j = start;
            while j <= hi {
                seg[(j - lo) as usize] = false;
                j += p;
            }
        }
        out.extend((0..len).filter(|&i| seg[i]).map(|i| lo + i as u64));
        lo = hi + 1;
    }
    out
}

/// A cached ascending list of primes up to some bound, with range queries.
#[derive(Debug, Clone)]
pub struct Primes {
    limit: u64,
    list: Vec<u64>,
}

impl Primes {
    pub fn up_to(limit: u64) -> Self {
        Self { limit, list: primes_up_to(limit) }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.list
    }

    /// Check that the cached list reaches `bound` (a real cutoff).
    pub fn ensure_covers(&self, bound: f64) -> Result<()> {
        if bound.is_finite() && bound <= self.limit as f64 + 1.0 {
            Ok(())
        } else {
            Err(Error::Resource(format!("prime cache reaches {} but cutoff {bound} was requested", self.limit)))
        }
    }

    /// Primes `p <= z`.
    pub fn up_to_real(&self, z: f64) -> &[u64] {
        let end = self.list.partition_point(|&p| (p as f64) <= z);
        &self.list[..end]
    }

    /// Primes in the open interval `(y, z)`.
    pub fn open_interval(&self, y: f64, z: f64) -> &[u64] {
        let start = self.list.partition_point(|&p| (p as f64) <= y);
        let end = self.list.partition_point(|&p| (p as f64) < z);
        if start >= end {
            &[]
        } else {
            &self.list[start..end]
        }
    }
}
