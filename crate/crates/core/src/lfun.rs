//! `L(1, chi_d)` for real quadratic characters.
//!
//! Two exact evaluations are provided. [`l_exact`] is the finite log-sine
//! formula, `O(d)` terms. [`l_series`] is the rapidly convergent expansion
//! obtained from the functional equation,
//!
//! ```text
//! L(1, chi_d) = sum_{n >= 1} chi_d(n) [ erfc(n sqrt(pi/d)) / n + E1(pi n^2 / d) / sqrt(d) ],
//! ```
//!
//! which needs only `O(sqrt(d))` terms and is what the large scans use.
//! Both agree to better than `1e-10` relative (see the tests).

use std::f64::consts::PI;

use crate::arith::{is_fundamental_sieved, kronecker};
use crate::error::{domain, Result};
use crate::par::{map_chunks, CompensatedSum};
use crate::sieve::{LpfSieve, Primes};
use crate::EULER_GAMMA;

/// Exponential integral `E1(x)` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 needs x > 0");
    if x <= 1.0 {
        // -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let add = term / k as f64;
            sum += add;
            if add.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        // Modified Lentz continued fraction.
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

fn check_fundamental(d: u64) -> Result<()> {
    if d >= 5 && d <= i64::MAX as u64 && crate::arith::is_fundamental(d as i64) {
        Ok(())
    } else {
        domain(format!("{d} is not a positive fundamental discriminant"))
    }
}

/// `L(1, chi_d) = -(1/sqrt d) sum_{a=1}^{d-1} chi_d(a) log sin(pi a / d)`.
pub fn l_exact(d: u64) -> Result<f64> {
    check_fundamental(d)?;
    // chi_d is even, so the terms for a and d - a coincide.
    let mut sum = CompensatedSum::new();
    let df = d as f64;
    for a in 1..=(d - 1) / 2 {
        let chi = kronecker(d as i64, a);
        if chi != 0 {
            sum.add(chi as f64 * (PI * a as f64 / df).sin().ln());
        }
    }
    if d.is_multiple_of(2) {
        let a = d / 2;
        let chi = kronecker(d as i64, a);
        if chi != 0 {
            sum.add(0.5 * chi as f64 * (PI * a as f64 / df).sin().ln());
        }
    }
    Ok(-2.0 * sum.value() / df.sqrt())
}

/// Number of series terms needed: past `pi n^2 / d > 34` every term is below `1e-16`.
fn series_terms(d: u64) -> u64 {
    ((34.0 * d as f64 / PI).sqrt().ceil() as u64).max(1)
}

/// `L(1, chi_d)` by the rapidly convergent series, `O(sqrt d)` terms.
pub fn l_series(d: u64) -> Result<f64> {
    check_fundamental(d)?;
    let sieve = LpfSieve::new(series_terms(d).max(2))?;
    Ok(series_unchecked(d, &sieve))
}

/// As [`l_series`], with a caller-provided factor table covering `3.3 sqrt(d)`.
pub fn l_series_with(d: u64, sieve: &LpfSieve) -> Result<f64> {
    check_fundamental(d)?;
    if sieve.limit() < series_terms(d) {
        return Err(crate::Error::Resource(format!("factor table to {} is too short for d = {d}", sieve.limit())));
    }
    Ok(series_unchecked(d, sieve))
}

fn series_unchecked(d: u64, sieve: &LpfSieve) -> f64 {
    let n_max = series_terms(d) as usize;
    let df = d as f64;
    let s = (PI / df).sqrt();
    let inv_sqrt_d = 1.0 / df.sqrt();
    // chi_d on 1..=n_max from its values at primes.
    let mut chi = vec![0i8; n_max + 1];
    chi[1] = 1;
    let mut sum = CompensatedSum::new();
    for n in 1..=n_max {
        if n > 1 {
            let p = sieve.least_prime_factor(n as u64).expect("covered by sieve") as usize;
            chi[n] = if p == n { kronecker(d as i64, n as u64) as i8 } else { chi[p] * chi[n / p] };
        }
        if chi[n] == 0 {
            continue;
        }
        let t = n as f64 * s;
        let term = libm::erfc(t) / n as f64 + exp_integral_e1(t * t) * inv_sqrt_d;
        sum.add(chi[n] as f64 * term);
    }
    sum.value()
}

/// `prod_{p <= z} (1 - chi_d(p)/p)^{-1}`.
pub fn euler_truncated(d: u64, z: f64, primes: &Primes) -> Result<f64> {
    primes.ensure_covers(z)?;
    let mut log_sum = CompensatedSum::new();
    for &p in primes.up_to_real(z) {
        let chi = kronecker(d as i64, p);
        if chi != 0 {
            log_sum.add(-(-(chi as f64) / p as f64).ln_1p());
        }
    }
    Ok(log_sum.value().exp())
}

/// `sum_{y < p < z} chi_d(p) / p`.
pub fn tail_prime_sum(d: u64, y: f64, z: f64, primes: &Primes) -> Result<f64> {
    if y >= z {
        return domain(format!("tail sum needs y < z, got y = {y}, z = {z}"));
    }
    primes.ensure_covers(z)?;
    Ok(primes.open_interval(y, z).iter().map(|&p| kronecker(d as i64, p) as f64 / p as f64).collect::<CompensatedSum>().value())
}

/// `sum_{y < p < z} sum_{j >= 2} chi_d(p)^j / (j p^j)`, the part of
/// `log prod (1 - chi/p)^{-1}` not captured by the linear prime sum.
pub fn higher_order_prime_terms(d: u64, y: f64, z: f64, primes: &Primes) -> Result<f64> {
    if y >= z {
        return domain(format!("needs y < z, got y = {y}, z = {z}"));
    }
    primes.ensure_covers(z)?;
    Ok(primes
        .open_interval(y, z)
        .iter()
        .map(|&p| {
            let u = kronecker(d as i64, p) as f64 / p as f64;
            -(-u).ln_1p() - u
        })
        .collect::<CompensatedSum>()
        .value())
}

/// Exact value, truncated Euler product and tail prime sum for one `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct LValueReport {
    pub d: u64,
    pub exact: f64,
    pub euler_truncated: f64,
    pub tail_sum: f64,
    pub rel_error: f64,
}

pub fn l_value_report(d: u64, y: f64, z: f64, primes: &Primes) -> Result<LValueReport> {
    let exact = l_series(d)?;
    let euler = euler_truncated(d, z, primes)?;
    let tail_sum = tail_prime_sum(d, y, z, primes)?;
    Ok(LValueReport { d, exact, euler_truncated: euler, tail_sum, rel_error: euler / exact - 1.0 })
}

/// One discriminant where the Euler product misses `L(1, chi_d)` by more than the tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusException {
    pub d: u64,
    pub exact: f64,
    pub euler: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximationCensus {
    pub x: u64,
    pub a_exponent: f64,
    pub tol: f64,
    /// Euler product cutoff `(log x)^A`.
    pub z: f64,
    /// Number of positive fundamental discriminants `d < x`.
    pub count: u64,
    pub exceptions: Vec<CensusException>,
    /// `exceptions / count`.
    pub fraction: f64,
    /// `x^{1/A} / count`, the scale of the asymptotic exception bound.
    pub reference_fraction: f64,
    pub max_abs_rel_error: f64,
    /// `max_d L(1, chi_d) / (e^gamma log log d)`.
    pub max_littlewood_ratio: f64,
}

/// Default tolerance `c0 / log log x`.
pub fn default_census_tol(x: u64, c0: f64) -> f64 {
    c0 / (x as f64).ln().ln()
}

/// Scan all positive fundamental `d < x` and list those whose Euler product
/// up to `(log x)^A` misses `L(1, chi_d)` by more than `tol` (relative).
pub fn approximation_census(x: u64, a_exponent: f64, tol: f64) -> Result<ApproximationCensus> {
    if !(6..=100_000_000).contains(&x) {
        return domain(format!("census range x must lie in [6, 1e8], got {x}"));
    }
    if a_exponent <= 1.0 || tol.is_nan() || tol <= 0.0 {
        return domain(format!("census needs A > 1 and tol > 0, got A = {a_exponent}, tol = {tol}"));
    }
    let z = (x as f64).ln().powf(a_exponent);
    let primes = Primes::up_to(z.floor() as u64 + 1);
    let sieve = LpfSieve::new(x.max(series_terms(x)))?;
    let e_gamma = EULER_GAMMA.exp();

    struct Partial {
        count: u64,
        exceptions: Vec<CensusException>,
        max_abs: f64,
        max_lw: f64,
    }

    let parts = map_chunks(5..x, 1024, |range| {
        let mut part = Partial { count: 0, exceptions: Vec::new(), max_abs: 0.0, max_lw: 0.0 };
        for d in range {
            if !is_fundamental_sieved(d as i64, Some(&sieve)) {
                continue;
            }
            part.count += 1;
            let exact = series_unchecked(d, &sieve);
            let euler = euler_truncated(d, z, &primes).expect("primes cover z");
            let rel = euler / exact - 1.0;
            part.max_abs = part.max_abs.max(rel.abs());
            part.max_lw = part.max_lw.max(exact / (e_gamma * (d as f64).ln().ln()));
            if rel.abs() > tol {
                part.exceptions.push(CensusException { d, exact, euler, rel_error: rel });
            }
        }
        part
    });

    let mut count = 0;
    let mut exceptions = Vec::new();
    let (mut max_abs, mut max_lw) = (0.0f64, 0.0f64);
    for part in parts {
        count += part.count;
        exceptions.extend(part.exceptions);
        max_abs = max_abs.max(part.max_abs);
        max_lw = max_lw.max(part.max_lw);
    }
    let fraction = exceptions.len() as f64 / count as f64;
    Ok(ApproximationCensus {
        x,
        a_exponent,
        tol,
        z,
        count,
        fraction,
        exceptions,
        reference_fraction: (x as f64).powf(1.0 / a_exponent) / count as f64,
        max_abs_rel_error: max_abs,
        max_littlewood_ratio: max_lw,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn e1_reference_values() {
        for (x, v) in [
            (1e-6, 13.238_295_893_062_49),
            (0.1, 1.822_923_958_419_390_6),
            (0.5, 0.559_773_594_776_160_8),
            (1.0, 0.219_383_934_395_520_27),
            (1.5, 0.100_019_582_406_632_65),
            (2.0, 0.048_900_510_708_061_12),
            (5.0, 0.001_148_295_591_275_325_8),
            (10.0, 4.156_968_929_685_324e-6),
            (25.0, 5.348_899_755_340_217e-13),
            (40.0, 1.036_773_261_451_657e-19),
        ] {
            assert!(close(exp_integral_e1(x), v, 1e-13), "E1({x}) = {} vs {v}", exp_integral_e1(x));
        }
    }

    #[test]
    fn l_exact_examples() {
        // Frozen from 30-digit evaluations of the log-sine sum.
        assert!(close(l_exact(5).unwrap(), 0.430_408_940_964_004_04, 1e-12));
        assert!(close(l_exact(8).unwrap(), 0.623_225_240_140_230_5, 1e-12));
        assert!(close(l_exact(17).unwrap(), 1.016_084_833_842_840_8, 1e-12));
        assert!(close(l_exact(65).unwrap(), 1.377_516_009_735_442_4, 1e-12));
        assert!(l_exact(9).is_err());
        assert!(l_exact(1).is_err());
    }

    #[test]
    fn l_exact_matches_unit_route_for_class_number_one() {
        // h = 1 for d = 5, 8, 17: L = 2 R / sqrt(d).
        for (d, r) in [(5u64, ((1.0 + 5f64.sqrt()) / 2.0).ln()), (8, (1.0 + 2f64.sqrt()).ln()), (17, (4.0 + 17f64.sqrt()).ln())] {
            assert!(close(l_exact(d).unwrap(), 2.0 * r / (d as f64).sqrt(), 1e-12), "d={d}");
        }
    }

    #[test]
    fn series_matches_log_sine() {
        for d in crate::arith::fundamental_discriminants(5, 3000) {
            let a = l_exact(d).unwrap();
            let b = l_series(d).unwrap();
            assert!(close(a, b, 1e-11), "d={d}: {a} vs {b}");
            assert!(a > 0.0);
        }
        for d in [100_003u64, 999_997, 1_000_001] {
            if crate::arith::is_fundamental(d as i64) {
                let a = l_exact(d).unwrap();
                let b = l_series(d).unwrap();
                assert!(close(a, b, 1e-10), "d={d}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn euler_and_tail_examples() {
        let primes = Primes::up_to(10_000);
        assert!(close(euler_truncated(5, 2.0, &primes).unwrap(), 2.0 / 3.0, 1e-15));
        assert_eq!(euler_truncated(5, 1.5, &primes).unwrap(), 1.0);
        let l5 = l_exact(5).unwrap();
        assert!(close(euler_truncated(5, 1e4, &primes).unwrap(), l5, 0.01));
        assert!(close(tail_prime_sum(5, 2.0, 10.0, &primes).unwrap(), -10.0 / 21.0, 1e-15));
        assert_eq!(tail_prime_sum(5, 7.5, 8.0, &primes).unwrap(), 0.0);
        assert!(close(tail_prime_sum(17, 2.0, 5.0, &primes).unwrap(), -1.0 / 3.0, 1e-15));
        assert!(tail_prime_sum(5, 10.0, 10.0, &primes).is_err());
        assert!(euler_truncated(5, 1e6, &primes).is_err());
    }

    #[test]
    fn euler_product_factorizes_over_the_tail() {
        let primes = Primes::up_to(20_000);
        for d in [5u64, 13, 17, 101, 1_009, 4_357, 99_989] {
            for (y, z) in [(3.0, 50.0), (100.0, 2_000.0), (150.0, 20_000.0)] {
                let lhs = euler_truncated(d, z, &primes).unwrap();
                let tail = tail_prime_sum(d, y, z, &primes).unwrap();
                let corr = higher_order_prime_terms(d, y, z, &primes).unwrap();
                // The product over p <= y, times the (y, z) part. (z is never prime here.)
                let rhs = euler_truncated(d, y, &primes).unwrap() * (tail + corr).exp();
                assert!(close(lhs, rhs, 1e-12), "d={d} y={y} z={z}");
                if y >= 100.0 {
                    assert!(corr.abs() <= 2.0 / (y.sqrt() * y.ln()), "d={d} y={y}");
                }
            }
        }
    }

    #[test]
    fn census_edge_cases() {
        let c = approximation_census(10_000, 2.0, f64::INFINITY).unwrap();
        assert!(c.exceptions.is_empty());
        assert_eq!(c.count, crate::arith::fundamental_discriminants(5, 10_000).len() as u64);
        let tight = approximation_census(10_000, 2.0, 0.05).unwrap();
        let loose = approximation_census(10_000, 2.0, 0.5).unwrap();
        let tight_set: std::collections::BTreeSet<u64> = tight.exceptions.iter().map(|e| e.d).collect();
        assert!(loose.exceptions.iter().all(|e| tight_set.contains(&e.d)));
        assert!(tight.exceptions.len() >= loose.exceptions.len());
        assert!(approximation_census(10_000, 1.0, 0.5).is_err());
    }
}
