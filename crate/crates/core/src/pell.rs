//! Continued fractions of quadratic irrationals, fundamental units and
//! regulators, and censuses of small solutions to `m^2 - d n^2 = +-4`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::is_fundamental;
use crate::error::{domain, Error, Result};
use crate::par::map_chunks;

/// Periodic continued fraction `sqrt(d) = [a0; period, period, ...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFractionExpansion {
    pub d: u64,
    pub a0: u64,
    pub period: Vec<u64>,
}

impl ContinuedFractionExpansion {
    pub fn period_length(&self) -> usize {
        self.period.len()
    }

    /// Convergents `p_k / q_k` for `k = 0..count`.
    pub fn convergents(&self, count: usize) -> Vec<(BigUint, BigUint)> {
        let mut out = Vec::with_capacity(count);
        let (mut p_prev, mut p) = (BigUint::one(), BigUint::from(self.a0));
        let (mut q_prev, mut q) = (BigUint::zero(), BigUint::one());
        for i in 0..count {
            if i > 0 {
                let a = BigUint::from(self.period[(i - 1) % self.period.len()]);
                let p_next = &a * &p + &p_prev;
                let q_next = &a * &q + &q_prev;
                p_prev = std::mem::replace(&mut p, p_next);
                q_prev = std::mem::replace(&mut q, q_next);
            }
            out.push((p.clone(), q.clone()));
        }
        out
    }
}

/// Expand `sqrt(d)` for non-square `d >= 2`.
pub fn cf_sqrt(d: u64) -> Result<ContinuedFractionExpansion> {
    let a0 = d.isqrt();
    if d < 2 || a0 * a0 == d {
        return domain(format!("cf_sqrt needs a non-square d >= 2, got {d}"));
    }
    let (mut m, mut den, mut a) = (0u64, 1u64, a0);
    let mut period = Vec::new();
    while a != 2 * a0 {
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        period.push(a);
    }
    Ok(ContinuedFractionExpansion { d, a0, period })
}

/// `epsilon_d = (a + b sqrt(d)) / 2`, the fundamental unit of `Q(sqrt(d))`.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalUnit {
    pub d: u64,
    pub a: BigUint,
    pub b: BigUint,
    /// Sign of `a^2 - d b^2 = 4 * norm_sign`.
    pub norm_sign: i8,
    /// `log epsilon_d`.
    pub regulator: f64,
    /// Period of the reduced quadratic irrational the unit was read from.
    pub period_length: usize,
}

/// Natural log of a big unsigned integer, correct to double precision.
pub fn ln_biguint(v: &BigUint) -> f64 {
    assert!(!v.is_zero(), "log of zero");
    let bits = v.bits();
    if bits <= 64 {
        return (v.to_u64().expect("fits in u64") as f64).ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_u64().expect("fits in u64") as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log((a + b sqrt(d)) / 2)` from `a` and the norm sign, stable for huge `a`.
///
/// Uses `b sqrt(d) = sqrt(a^2 - 4s)`, so `epsilon = a (1 + sqrt(1 - 4s/a^2)) / 2`.
fn regulator_from(a: &BigUint, norm_sign: i8) -> f64 {
    let ln_a = ln_biguint(a);
    let inv_a2 = (-2.0 * ln_a).exp();
    let inner = 1.0 - 4.0 * norm_sign as f64 * inv_a2;
    ln_a + ((1.0 + inner.sqrt()) / 2.0).ln()
}

/// State of the reduced irrational `(P + sqrt(D)) / Q` walked by [`fundamental_unit`].
struct ReducedWalk {
    d: u64,
    root: u64,
    p0: u64,
}

impl ReducedWalk {
    /// Start at `(P0 + sqrt(d)) / 2` where `P0` is the largest integer below
    /// `sqrt(d)` with `P0 = d mod 2`. This is reduced and generates the maximal order.
    fn new(d: u64) -> Self {
        let root = d.isqrt();
        let p0 = if root % 2 == d % 2 { root } else { root - 1 };
        Self { d, root, p0 }
    }

    /// Partial quotients over one period.
    fn period(&self) -> Vec<u64> {
        let (p0, q0) = (self.p0, 2u64);
        let (mut p, mut q) = (p0, q0);
        let mut quotients = Vec::new();
        loop {
            let a = (p + self.root) / q;
            quotients.push(a);
            let p_next = a * q - p;
            let q_next = (self.d - p_next * p_next) / q;
            p = p_next;
            q = q_next;
            if p == p0 && q == q0 {
                return quotients;
            }
        }
    }
}

/// Fundamental unit of `Q(sqrt(d))` for a positive fundamental discriminant `d`.
///
/// The unit is read off one period of the continued fraction of a reduced
/// quadratic irrational generating the ring of integers.
pub fn fundamental_unit(d: u64) -> Result<FundamentalUnit> {
    if d > i64::MAX as u64 || !is_fundamental(d as i64) || d < 5 {
        return domain(format!("{d} is not a positive fundamental discriminant"));
    }
    let walk = ReducedWalk::new(d);
    let quotients = walk.period();
    // k_{-2} = 1, k_{-1} = 0.
    let (mut k_prev, mut k) = (BigUint::one(), BigUint::zero());
    for &a in &quotients {
        let next = BigUint::from(a) * &k + &k_prev;
        k_prev = std::mem::replace(&mut k, next);
    }
    // epsilon = k_{l-1} * (P0 + sqrt d)/2 + k_{l-2}
    let a = BigUint::from(walk.p0) * &k + (&k_prev << 1u32);
    let b = k;
    let norm = BigInt::from(a.clone()).pow(2) - BigInt::from(d) * BigInt::from(b.clone()).pow(2);
    let norm_sign = if norm == BigInt::from(4) {
        1
    } else if norm == BigInt::from(-4) {
        -1
    } else {
        return Err(Error::Consistency(format!("unit for d = {d} has norm {norm}/4")));
    };
    let regulator = regulator_from(&a, norm_sign);
    Ok(FundamentalUnit { d, a, b, norm_sign, regulator, period_length: quotients.len() })
}

/// Regulator as `sum log xi_i` over the complete quotients of one period.
///
/// An independent floating-point route to `log epsilon_d` that avoids big integers.
pub fn regulator_from_quotients(d: u64) -> Result<f64> {
    if !is_fundamental(d as i64) || d < 5 {
        return domain(format!("{d} is not a positive fundamental discriminant"));
    }
    let walk = ReducedWalk::new(d);
    let sqrt_d = (d as f64).sqrt();
    let (p0, q0) = (walk.p0, 2u64);
    let (mut p, mut q) = (p0, q0);
    let mut total = 0.0;
    loop {
        total += ((p as f64 + sqrt_d) / q as f64).ln();
        let a = (p + walk.root) / q;
        let p_next = a * q - p;
        q = (d - p_next * p_next) / q;
        p = p_next;
        if p == p0 && q == q0 {
            return Ok(total);
        }
    }
}

/// A positive solution of `m^2 - d n^2 = 4 * sign`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct PellSolution {
    pub m: u64,
    pub n: u64,
    pub sign: i8,
}

/// All positive solutions `(m, n)` of `m^2 - d n^2 = +-4` with `m <= d^theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct PellCensus {
    pub d: u64,
    pub theta: f64,
    pub solutions: Vec<PellSolution>,
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.5 && theta < 1.5 {
        Ok(())
    } else {
        domain(format!("theta must lie in (1/2, 3/2), got {theta}"))
    }
}

fn census_solutions(d: u64, m_max: u64) -> Vec<PellSolution> {
    let mut out = Vec::new();
    let d = d as u128;
    let m_max2 = (m_max as u128) * (m_max as u128);
    let mut n = 1u128;
    // Any solution has d n^2 - 4 <= m^2 <= m_max^2.
    while d * n * n <= m_max2 + 4 {
        let dn2 = d * n * n;
        for (sign, target) in [(-1i8, dn2.checked_sub(4)), (1, Some(dn2 + 4))] {
            let Some(t) = target else { continue };
            if t == 0 || t > m_max2 {
                continue;
            }
            let m = t.isqrt();
            if m * m == t {
                out.push(PellSolution { m: m as u64, n: n as u64, sign });
            }
        }
        n += 1;
    }
    out.sort();
    out
}

/// Largest integer `m` with `m <= d^theta`.
fn m_bound(d: u64, theta: f64) -> u64 {
    (d as f64).powf(theta).floor() as u64
}

/// Exhaustive census `S_theta(d)`, sorted by `m`.
pub fn pell_census(d: u64, theta: f64) -> Result<PellCensus> {
    check_theta(theta)?;
    if d < 1 {
        return domain("pell_census needs d >= 1");
    }
    Ok(PellCensus { d, theta, solutions: census_solutions(d, m_bound(d, theta)) })
}

/// Totals of `|S_theta(d)|` over `d <= x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PellAggregate {
    pub x: u64,
    pub theta: f64,
    pub fundamental_only: bool,
    pub total: u64,
    /// `(x^{1/2} + x^{theta - 1/2}) (log x)^2`
    pub bound_skeleton: f64,
    pub ratio: f64,
}

/// `sum_{d <= x} |S_theta(d)|`, over all integers `d` or only fundamental discriminants.
pub fn pell_census_aggregate(x: u64, theta: f64, fundamental_only: bool) -> Result<PellAggregate> {
    check_theta(theta)?;
    if x < 2 {
        return domain(format!("pell_census_aggregate needs x >= 2, got {x}"));
    }
    let partials = map_chunks(1..x + 1, 2048, |range| {
        range
            .filter(|&d| !fundamental_only || is_fundamental(d as i64))
            .map(|d| census_solutions(d, m_bound(d, theta)).len() as u64)
            .sum::<u64>()
    });
    let total: u64 = partials.iter().sum();
    let xf = x as f64;
    let bound_skeleton = (xf.sqrt() + xf.powf(theta - 0.5)) * xf.ln().powi(2);
    Ok(PellAggregate { x, theta, fundamental_only, total, bound_skeleton, ratio: total as f64 / bound_skeleton })
}

/// `ell(q) = #{m mod q : m^2 = 4 mod q}`, counted directly.
pub fn ell(q: u64) -> u64 {
    assert!(q >= 1, "ell needs q >= 1");
    let target = 4 % q;
    (0..q).filter(|&m| ((m as u128 * m as u128) % q as u128) as u64 == target).count() as u64
}
