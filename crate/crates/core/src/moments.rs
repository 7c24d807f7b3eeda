//! Moments of tail prime sums over the family, the multinomial coefficients
//! `b_r(m; y, z)` of their expansion, and two character-sum explorers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{factorize, fundamental_discriminants, kronecker, squarefree_decompose, Factorization, PeriodicCharSum};
use crate::chowla::{chowla_d, enumerate_family, max_n};
use crate::error::{domain, Result};
use crate::par::{map_slice, CompensatedSum};
use crate::sieve::{LpfSieve, Primes};

/// `n!` for `n <= 20`.
pub fn factorial(n: u32) -> u64 {
    assert!(n <= 20, "{n}! overflows 64 bits");
    (1..=n as u64).product()
}

/// `r! / (a_1! ... a_s!)` where `r = sum a_i`.
pub fn multinomial(exponents: &[u32]) -> u64 {
    let r: u32 = exponents.iter().sum();
    // running product of binomials keeps intermediates small
    let mut acc = 1u64;
    let mut seen = 0u64;
    for &a in exponents {
        for j in 1..=a as u64 {
            seen += 1;
            acc = acc * seen / j;
        }
    }
    debug_assert_eq!(seen, r as u64);
    acc
}

/// `b_r(m; y, z)` from a factorization of `m`.
pub fn b_from_factorization(f: &Factorization, r: u32, y: f64, z: f64) -> u64 {
    if f.big_omega() != r {
        return 0;
    }
    if !f.factors().iter().all(|&(p, _)| (p as f64) > y && (p as f64) < z) {
        return 0;
    }
    let exps: Vec<u32> = f.factors().iter().map(|&(_, a)| a).collect();
    multinomial(&exps)
}

/// Number of ordered ways to write `m` as a product of `r` primes from `(y, z)`.
pub fn b_coefficient(m: u64, r: u32, y: f64, z: f64) -> u64 {
    assert!(m >= 1, "m must be positive");
    b_from_factorization(&factorize(m, None), r, y, z)
}

/// Which `n` the moment sums run over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentDomain {
    /// Squarefree `d = 4n^2 + 1 <= x`.
    #[default]
    Family,
    /// Every `d = 4n^2 + 1 <= x`, squarefree or not.
    AllN,
}

fn domain_discriminants(x: u64, dom: MomentDomain) -> Vec<u64> {
    match dom {
        MomentDomain::Family => enumerate_family(x, 1).iter().map(|c| c.d).collect(),
        MomentDomain::AllN => (1..=max_n(x)).map(chowla_d).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub x: u64,
    pub y: f64,
    pub z: f64,
    pub k: u32,
    pub members: u64,
    /// `sum_d (sum_{y<p<z} chi_d(p)/p)^{2k}`
    pub empirical: f64,
    /// `sqrt(x) (k / (y log y))^k`
    pub skeleton: f64,
    /// `(empirical / sqrt x)^{1/k} (y log y) / k`; absent for `k = 0`.
    pub c_estimate: Option<f64>,
    /// Whether `z^{2k} <= x^{1/4}`.
    pub z_power_guard: bool,
    /// `log x / (8 log log x)`; divide by `A` for the admissible range of `k`.
    pub k_limit_unit: f64,
}

fn tails(x: u64, y: f64, z: f64, dom: MomentDomain) -> Result<Vec<f64>> {
    if !(y >= 1.0 && y < z) {
        return domain(format!("moments need 1 <= y < z, got y = {y}, z = {z}"));
    }
    let primes = Primes::up_to(z.floor() as u64 + 1);
    let interval = primes.open_interval(y, z).to_vec();
    let ds = domain_discriminants(x, dom);
    Ok(map_slice(&ds, 256, |chunk| {
        chunk
            .iter()
            .map(|&d| interval.iter().map(|&p| kronecker(d as i64, p) as f64 / p as f64).collect::<CompensatedSum>().value())
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect())
}

fn report(x: u64, y: f64, z: f64, k: u32, tails: &[f64]) -> MomentReport {
    let empirical = tails.iter().map(|t| t.powi(2 * k as i32)).collect::<CompensatedSum>().value();
    let sqrt_x = (x as f64).sqrt();
    let ylogy = y * y.ln();
    let skeleton = sqrt_x * (k as f64 / ylogy).powi(k as i32);
    let c_estimate = (k > 0).then(|| (empirical / sqrt_x).powf(1.0 / k as f64) * ylogy / k as f64);
    let lx = (x as f64).ln();
    MomentReport {
        x,
        y,
        z,
        k,
        members: tails.len() as u64,
        empirical,
        skeleton,
        c_estimate,
        z_power_guard: z.powi(2 * k as i32) <= (x as f64).powf(0.25),
        k_limit_unit: lx / (8.0 * lx.ln()),
    }
}

/// The `2k`-th moment of the tail prime sum over the family up to `x`.
pub fn moment_empirical(x: u64, y: f64, z: f64, k: u32) -> Result<MomentReport> {
    moment_sweep(x, y, z, &[k], MomentDomain::Family).map(|mut v| v.remove(0))
}

/// Moments for several `k`, sharing the tail sums.
pub fn moment_sweep(x: u64, y: f64, z: f64, ks: &[u32], dom: MomentDomain) -> Result<Vec<MomentReport>> {
    let t = tails(x, y, z, dom)?;
    Ok(ks.iter().map(|&k| report(x, y, z, k, &t)).collect())
}

/// `sum_m b_{2k}(m; y, z) (sum_d chi_d(m)) / m`, summing over multisets of `2k`
/// primes from `(y, z)`.
pub fn moment_via_expansion(x: u64, y: f64, z: f64, k: u32, dom: MomentDomain) -> Result<f64> {
    if !(y >= 1.0 && y < z) {
        return domain(format!("moments need 1 <= y < z, got y = {y}, z = {z}"));
    }
    let primes = Primes::up_to(z.floor() as u64 + 1);
    let interval = primes.open_interval(y, z).to_vec();
    let ds = domain_discriminants(x, dom);
    // chi[d][i] = chi_d(p_i)
    let chi: Vec<Vec<i32>> = ds.iter().map(|&d| interval.iter().map(|&p| kronecker(d as i64, p)).collect()).collect();
    let mut total = CompensatedSum::new();
    let mut exps = vec![0u32; interval.len()];
    let mut row = vec![1i32; ds.len()];
    expand(&interval, &chi, 0, 2 * k, 1.0, &mut exps, &mut row, &mut total);
    Ok(total.value())
}

#[allow(clippy::too_many_arguments)]
fn expand(
    primes: &[u64],
    chi: &[Vec<i32>],
    start: usize,
    remaining: u32,
    inv_m: f64,
    exps: &mut Vec<u32>,
    row: &mut Vec<i32>,
    total: &mut CompensatedSum,
) {
    if remaining == 0 {
        let char_sum: i64 = row.iter().map(|&v| v as i64).sum();
        let nonzero: Vec<u32> = exps.iter().copied().filter(|&a| a > 0).collect();
        total.add(multinomial(&nonzero) as f64 * char_sum as f64 * inv_m);
        return;
    }
    for i in start..primes.len() {
        let saved = row.clone();
        for (r, c) in row.iter_mut().zip(chi) {
            *r *= c[i];
        }
        exps[i] += 1;
        expand(primes, chi, i, remaining - 1, inv_m / primes[i] as f64, exps, row, total);
        exps[i] -= 1;
        *row = saved;
    }
}

/// A violation of `b_{l+r}(nm) <= C(l+r, l) b_l(n) b_r(m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CombCounterexample {
    pub n: u64,
    pub m: u64,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombCheck {
    pub pairs_checked: u64,
    pub counterexamples: Vec<CombCounterexample>,
}

impl CombCheck {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    let k = k.min(n - k) as u64;
    (0..k).fold(1u64, |acc, j| acc * (n as u64 - j) / (j + 1))
}

fn merge_exponents(a: &[(u64, u32)], b: &[(u64, u32)]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(p, x)), Some(&(q, y))) if p == q => {
                out.push(x + y);
                i += 1;
                j += 1;
            }
            (Some(&(p, x)), Some(&(q, _))) if p < q => {
                out.push(x);
                i += 1;
            }
            (Some(&(_, x)), None) => {
                out.push(x);
                i += 1;
            }
            (_, Some(&(_, y))) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Exhaustive check of the coefficient inequality over all ordered pairs
/// `n, m <= n_max` in the support with `Omega(n) <= l_max`, `Omega(m) <= r_max`
/// and `Omega(n) + Omega(m) <= omega_cap`.
pub fn comb_inequality_check(n_max: u64, y: f64, z: f64, l_max: u32, r_max: u32, omega_cap: u32) -> Result<CombCheck> {
    let sieve = LpfSieve::new(n_max.max(2))?;
    let support: Vec<(u64, Factorization)> = (1..=n_max)
        .map(|n| (n, sieve.factorize(n).expect("within sieve")))
        .filter(|(_, f)| f.factors().iter().all(|&(p, _)| (p as f64) > y && (p as f64) < z))
        .collect();
    let b_of = |f: &Factorization| {
        let e: Vec<u32> = f.factors().iter().map(|&(_, a)| a).collect();
        multinomial(&e)
    };
    let parts = map_slice(&support, 64, |chunk| {
        let mut checked = 0u64;
        let mut bad = Vec::new();
        for (n, fnn) in chunk {
            let l = fnn.big_omega();
            if l > l_max {
                continue;
            }
            let bn = b_of(fnn);
            for (m, fm) in &support {
                let r = fm.big_omega();
                if r > r_max || l + r > omega_cap {
                    continue;
                }
                checked += 1;
                let lhs = multinomial(&merge_exponents(fnn.factors(), fm.factors()));
                let rhs = binomial(l + r, l) * bn * b_of(fm);
                if lhs > rhs {
                    bad.push(CombCounterexample { n: *n, m: *m, lhs, rhs });
                }
            }
        }
        (checked, bad)
    });
    let mut out = CombCheck { pairs_checked: 0, counterexamples: Vec::new() };
    for (c, b) in parts {
        out.pairs_checked += c;
        out.counterexamples.extend(b);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
}

impl IdentityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        let rel_error = if rhs == 0.0 { lhs.abs() } else { ((lhs - rhs) / rhs).abs() };
        Self { lhs, rhs, rel_error }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.rel_error <= tol
    }
}

/// Literal multisets above this count are summed through a generating-function recursion.
pub const LITERAL_MULTISET_LIMIT: u128 = 20_000_000;

fn multiset_count(n: usize, r: u32) -> u128 {
    // C(n + r - 1, r)
    (0..r as u128).fold(1u128, |acc, j| acc * (n as u128 + j) / (j + 1))
}

/// `sum_n b_r(n; y, z) / n^2` against `(sum_{y<p<z} 1/p^2)^r`.
pub fn prime_square_identity_check(y: f64, z: f64, r: u32) -> Result<IdentityCheck> {
    if r > 20 {
        return domain(format!("r must be at most 20, got {r}"));
    }
    if !(y < z) {
        return domain(format!("needs y < z, got y = {y}, z = {z}"));
    }
    let primes = Primes::up_to(z.floor() as u64 + 1);
    let interval = primes.open_interval(y, z);
    let inv_sq: Vec<f64> = interval.iter().map(|&p| 1.0 / (p as f64 * p as f64)).collect();
    let rhs = inv_sq.iter().copied().collect::<CompensatedSum>().value().powi(r as i32);
    let lhs = if multiset_count(inv_sq.len(), r) <= LITERAL_MULTISET_LIMIT {
        let mut total = CompensatedSum::new();
        let mut exps = vec![0u32; inv_sq.len()];
        literal_sum(&inv_sq, 0, r, 1.0, &mut exps, &mut total);
        total.value()
    } else {
        egf_sum(&inv_sq, r)
    };
    Ok(IdentityCheck::new(lhs, rhs))
}

fn literal_sum(w: &[f64], start: usize, remaining: u32, prod: f64, exps: &mut Vec<u32>, total: &mut CompensatedSum) {
    if remaining == 0 {
        let nz: Vec<u32> = exps.iter().copied().filter(|&a| a > 0).collect();
        total.add(multinomial(&nz) as f64 * prod);
        return;
    }
    for i in start..w.len() {
        exps[i] += 1;
        literal_sum(w, i, remaining - 1, prod * w[i], exps, total);
        exps[i] -= 1;
    }
}

/// `r! [t^r] prod_i sum_{a <= r} (w_i t)^a / a!`.
fn egf_sum(w: &[f64], r: u32) -> f64 {
    let r = r as usize;
    let mut coeff = vec![0.0f64; r + 1];
    coeff[0] = 1.0;
    for &wi in w {
        let mut next = vec![0.0f64; r + 1];
        for (i, &c) in coeff.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let mut term = c;
            for a in 0..=(r - i) {
                if a > 0 {
                    term *= wi / a as f64;
                }
                next[i + a] += term;
            }
        }
        coeff = next;
    }
    coeff[r] * factorial(r as u32) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharsumBoundRow {
    pub q: u64,
    pub q0: u64,
    pub complete: i64,
    /// `|complete| q0 / q`, the ratio after whole periods.
    pub period_ratio: f64,
    /// Largest `|sum_{n <= x} ((4n^2+1)/q)| q0 / x` over the sampled `x in [q^2, 4q^2]`.
    pub max_ratio: f64,
}

/// Number of sample points in `[q^2, 4q^2]`.
pub const CHARSUM_GRID: u64 = 64;

/// Empirical constant of the partial-sum bound for every odd `q <= q_max`.
pub fn charsum_bound_census(q_max: u64) -> Result<Vec<CharsumBoundRow>> {
    if q_max == 0 {
        return domain("q_max must be positive");
    }
    let qs: Vec<u64> = (1..=q_max).step_by(2).collect();
    map_slice(&qs, 32, |chunk| {
        chunk
            .iter()
            .map(|&q| {
                let dec = squarefree_decompose(q)?;
                let q0 = dec.squarefree_part;
                let table = PeriodicCharSum::new(q);
                let (lo, hi) = (q * q, 4 * q * q);
                let max_ratio = (0..=CHARSUM_GRID)
                    .map(|i| lo + (hi - lo) * i / CHARSUM_GRID)
                    .map(|x| table.partial(x).unsigned_abs() as f64 * q0 as f64 / x as f64)
                    .fold(0.0f64, f64::max);
                let complete = table.complete();
                Ok(CharsumBoundRow {
                    q,
                    q0,
                    complete,
                    period_ratio: complete.unsigned_abs() as f64 * q0 as f64 / q as f64,
                    max_ratio,
                })
            })
            .collect::<Result<Vec<_>>>()
    })
    .into_iter()
    .collect::<Result<Vec<Vec<_>>>>()
    .map(|v| v.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SieveRatio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// `sum_{d < x fundamental} |sum_{n<=N} a_n chi_d(n)|^2` against
/// `(x + N) sum_{n1 n2 = square} |a_{n1} a_{n2}|`, for `a = coeffs[1..]`.
pub fn large_sieve_sides(x: u64, coeffs: &[i8], sieve: &LpfSieve) -> SieveRatio {
    let n_max = coeffs.len().saturating_sub(1) as u64;
    assert!(n_max <= sieve.limit().max(1), "sieve does not cover N");
    let ds = fundamental_discriminants(1, x);
    let lhs_parts = map_slice(&ds, 32, |chunk| {
        let mut chi = vec![0i32; n_max as usize + 1];
        chunk
            .iter()
            .map(|&d| {
                if n_max >= 1 {
                    chi[1] = 1;
                }
                for n in 2..=n_max {
                    let p = sieve.least_prime_factor(n).expect("within sieve");
                    chi[n as usize] = if p == n { kronecker(d as i64, p) } else { chi[p as usize] * chi[(n / p) as usize] };
                }
                let s: i64 = (1..=n_max as usize).map(|n| coeffs[n] as i64 * chi[n] as i64).sum();
                (s * s) as f64
            })
            .sum::<f64>()
    });
    let lhs: f64 = lhs_parts.into_iter().collect::<CompensatedSum>().value();
    let mut by_kernel = vec![0u64; n_max as usize + 1];
    for n in 1..=n_max {
        if coeffs[n as usize] != 0 {
            let s = crate::arith::squarefree_kernel(n, Some(sieve));
            by_kernel[s as usize] += coeffs[n as usize].unsigned_abs() as u64;
        }
    }
    let diag: u64 = by_kernel.iter().map(|&c| c * c).sum();
    let rhs = (x + n_max) as f64 * diag as f64;
    let ratio = if rhs == 0.0 { 0.0 } else { lhs / rhs };
    SieveRatio { lhs, rhs, ratio }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SieveRatioReport {
    pub x: u64,
    pub n: u64,
    pub seed: u64,
    pub trials: Vec<SieveRatio>,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

/// Random coefficients `a_n in {-1, 0, 1}`, one independent stream per trial.
pub fn random_coefficients(n: u64, seed: u64, trial: u64) -> Vec<i8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut a = vec![0i8; n as usize + 1];
    for v in a.iter_mut().skip(1) {
        *v = rng.gen_range(-1i8..=1);
    }
    a
}

pub fn large_sieve_ratio(x: u64, n: u64, trials: u64, seed: u64) -> Result<SieveRatioReport> {
    if x == 0 || n == 0 || trials == 0 {
        return domain("x, N and trials must be positive");
    }
    if x > 10_000 || n > 10_000 {
        return domain(format!("x and N are capped at 1e4, got x = {x}, N = {n}"));
    }
    let sieve = LpfSieve::new(n.max(2))?;
    let results: Vec<SieveRatio> = (0..trials).map(|t| large_sieve_sides(x, &random_coefficients(n, seed, t), &sieve)).collect();
    let max_ratio = results.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let mean_ratio = results.iter().map(|r| r.ratio).sum::<f64>() / trials as f64;
    Ok(SieveRatioReport { x, n, seed, trials: results, max_ratio, mean_ratio })
}
