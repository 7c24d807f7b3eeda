//! Exact integer arithmetic: quadratic symbols, factorization, and complete
//! character sums of the polynomial `f(a) = 4a^2 + 1`.
//!
//! Everything here is exact. Products are taken in 128-bit intermediates, so
//! moduli up to `2^63` and discriminants up to `i64::MAX` are safe.

use crate::error::{domain, Result};
use crate::sieve::LpfSieve;

/// Jacobi symbol `(a / n)` for odd `n >= 1`.
pub fn jacobi(a: u64, n: u64) -> i32 {
    assert!(n % 2 == 1, "Jacobi symbol needs an odd modulus, got {n}");
    let mut a = a % n;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d / m)` for any integer `d` and `m >= 1`.
///
/// At `m = 2` this uses the classical convention: `0` for even `d`, `+1` for
/// `d = +-1 mod 8`, `-1` for `d = +-3 mod 8`.
pub fn kronecker(d: i64, m: u64) -> i32 {
    assert!(m >= 1, "Kronecker symbol needs m >= 1");
    let tz = m.trailing_zeros();
    let odd = m >> tz;
    let mut r = 1;
    if tz > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if tz % 2 == 1 && matches!(d.rem_euclid(8), 3 | 5) {
            r = -r;
        }
    }
    let a = (d as i128).rem_euclid(odd as i128) as u64;
    r * jacobi(a, odd)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization `value = prod p^e`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub(crate) fn from_parts(value: u64, factors: Vec<(u64, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Self { value, factors }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of prime factors counted with multiplicity, `Omega(value)`.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of `p^e`; equals [`Self::value`] for every well-formed factorization.
    pub fn reconstruct(&self) -> u128 {
        self.factors.iter().map(|&(p, e)| (p as u128).pow(e)).product()
    }

    /// All positive divisors, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs
    }
}

/// Factor `v >= 1`, using `sieve` when it covers `v` and trial division otherwise.
pub fn factorize(v: u64, sieve: Option<&LpfSieve>) -> Factorization {
    assert!(v >= 1, "cannot factor zero");
    if let Some(f) = sieve.and_then(|s| s.factorize(v)) {
        return f;
    }
    let mut factors = Vec::new();
    let mut rest = v;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    let mut p = 3u64;
    while p.saturating_mul(p) <= rest {
        push(p, &mut rest);
        p += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Factorization::from_parts(v, factors)
}

/// `q = q1^2 * q0` with `q0` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub value: u64,
    pub square_part_root: u64,
    pub squarefree_part: u64,
}

impl SquarefreeDecomposition {
    pub fn from_factorization(f: &Factorization) -> Self {
        let mut root = 1u64;
        let mut free = 1u64;
        for &(p, e) in f.factors() {
            root *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
        }
        Self { value: f.value(), square_part_root: root, squarefree_part: free }
    }
}

/// Split an odd `q` into its square and squarefree parts.
pub fn squarefree_decompose(q: u64) -> Result<SquarefreeDecomposition> {
    if q == 0 || q.is_multiple_of(2) {
        return domain(format!("squarefree decomposition needs an odd positive q, got {q}"));
    }
    Ok(SquarefreeDecomposition::from_factorization(&factorize(q, None)))
}

/// Squarefree kernel `s` of any `n >= 1` (the unique squarefree `s` with `n / s` a square).
pub fn squarefree_kernel(n: u64, sieve: Option<&LpfSieve>) -> u64 {
    SquarefreeDecomposition::from_factorization(&factorize(n, sieve)).squarefree_part
}

/// Whether `d` is the discriminant of a quadratic field.
pub fn is_fundamental(d: i64) -> bool {
    is_fundamental_sieved(d, None)
}

/// [`is_fundamental`] with an optional factor table for the squarefree test.
pub fn is_fundamental_sieved(d: i64, sieve: Option<&LpfSieve>) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let squarefree = |m: u64| factorize(m, sieve).is_squarefree();
    match d.rem_euclid(4) {
        1 => squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Positive fundamental discriminants in `[lo, hi)`, ascending.
pub fn fundamental_discriminants(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(5)..hi).filter(|&d| is_fundamental(d as i64)).collect()
}

/// `f(a) mod q` for `f(a) = 4a^2 + 1`.
#[inline]
pub fn f_mod(a: u64, q: u64) -> u64 {
    let a = a % q;
    ((4 * (a as u128) * (a as u128) + 1) % q as u128) as u64
}

/// Complete sum `sum_{a=1}^{q} ((4a^2 + 1) / q)` by direct summation.
pub fn complete_sum_f(q: u64) -> i64 {
    assert!(q % 2 == 1, "complete sum needs an odd modulus, got {q}");
    (1..=q).map(|a| jacobi(f_mod(a, q), q) as i64).sum()
}

/// The same complete sum via the Chinese remainder theorem: a product over
/// prime-power blocks `sum_{a mod p^k} ((4a^2+1)/p)^k`, each reduced to one
/// sum over residues mod `p`.
pub fn complete_sum_f_crt(q: &Factorization) -> i64 {
    assert!(q.value() % 2 == 1, "complete sum needs an odd modulus");
    q.factors()
        .iter()
        .map(|&(p, k)| {
            let lift = p.pow(k - 1) as i64;
            if k % 2 == 0 {
                // Even power: each term is 1 unless p | f(a).
                let zeros = (0..p).filter(|&c| f_mod(c, p) == 0).count() as i64;
                lift * (p as i64 - zeros)
            } else {
                lift * (0..p).map(|c| jacobi(f_mod(c, p), p) as i64).sum::<i64>()
            }
        })
        .product()
}

/// Partial sum `sum_{n=1}^{x} ((4n^2 + 1) / q)` by direct summation.
pub fn charsum_partial(q: u64, x: u64) -> i64 {
    assert!(q % 2 == 1, "character sum needs an odd modulus, got {q}");
    (1..=x).map(|n| jacobi(f_mod(n, q), q) as i64).sum()
}

/// One period of `((4a^2+1)/q)` as prefix sums, for `O(1)` partial sums at any `x`.
#[derive(Debug, Clone)]
pub struct PeriodicCharSum {
    q: u64,
    /// `prefix[r] = sum_{a=1}^{r} ((4a^2+1)/q)`, `r = 0..=q`.
    prefix: Vec<i64>,
}

impl PeriodicCharSum {
    pub fn new(q: u64) -> Self {
        assert!(q % 2 == 1, "character sum needs an odd modulus, got {q}");
        let mut prefix = Vec::with_capacity(q as usize + 1);
        prefix.push(0);
        let mut acc = 0i64;
        for a in 1..=q {
            acc += jacobi(f_mod(a, q), q) as i64;
            prefix.push(acc);
        }
        Self { q, prefix }
    }

    pub fn complete(&self) -> i64 {
        self.prefix[self.q as usize]
    }

    pub fn partial(&self, x: u64) -> i64 {
        (x / self.q) as i64 * self.complete() + self.prefix[(x % self.q) as usize]
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        domain(format!("{p} is not an odd prime"))
    }
}

/// Jacobsthal sum `sum_{n=1}^{p} ((n^2 + b) / p)` by direct evaluation.
pub fn jacobsthal_check(p: u64, b: i64) -> Result<i64> {
    check_odd_prime(p)?;
    let b = b.rem_euclid(p as i64) as u64;
    Ok((1..=p).map(|n| jacobi((mul_mod(n, n, p) + b) % p, p) as i64).sum())
}

/// Jacobsthal sums for every `b` in `0..p` at once.
///
/// Writes the sum as `(b/p) + 2 * sum_{t in QR} ((t+b)/p)` and counts
/// `|QR ∩ (QR - b)|` with word-parallel popcounts over a rotated bitset,
/// `O(p^2 / 64)` work in total. Values are exact.
pub fn jacobsthal_row(p: u64) -> Result<Vec<i64>> {
    check_odd_prime(p)?;
    let n = p as usize;
    let mut is_qr = vec![false; n];
    for t in 1..n {
        is_qr[(t * t) % n] = true;
    }
    let words = n.div_ceil(64);
    // Two copies of the residue bitset back to back, plus one guard word.
    let mut doubled = vec![0u64; (2 * n).div_ceil(64) + 1];
    let mut single = vec![0u64; words];
    for t in 0..n {
        if is_qr[t] {
            single[t / 64] |= 1 << (t % 64);
            doubled[t / 64] |= 1 << (t % 64);
            doubled[(t + n) / 64] |= 1 << ((t + n) % 64);
        }
    }
    let chi = |t: usize| -> i64 {
        if t == 0 {
            0
        } else if is_qr[t] {
            1
        } else {
            -1
        }
    };
    let half = (n as i64 - 1) / 2;
    let mut row = Vec::with_capacity(n);
    for b in 0..n {
        // A = #{t in QR : t + b in QR}
        let mut a = 0i64;
        for (j, &w) in single.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let bit = b + 64 * j;
            let (wi, sh) = (bit / 64, bit % 64);
            let rotated = if sh == 0 { doubled[wi] } else { (doubled[wi] >> sh) | (doubled[wi + 1] << (64 - sh)) };
            a += (w & rotated).count_ones() as i64;
        }
        let minus_b = (n - b) % n;
        let neg_b_in_qr = (minus_b != 0 && is_qr[minus_b]) as i64;
        // |QR ∩ (NR - b)| = |QR| - A - [-b in QR]
        let against = half - a - neg_b_in_qr;
        row.push(chi(b) + 2 * (a - against));
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Euler's criterion, used as an independent symbol oracle for odd primes.
    fn legendre_euler(a: i64, p: u64) -> i32 {
        let r = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
        match r {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(5, 5), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(17, 2), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(12, 2), 0);
        assert_eq!(kronecker(7, 1), 1);
    }

    #[test]
    fn kronecker_at_two_matches_square_lift() {
        // For odd d, (d/2) = 1 iff d is a square mod 8 after adjusting sign, i.e. d = +-1 mod 8.
        for d in -99i64..=99 {
            if d % 2 == 0 {
                continue;
            }
            let is_pm1 = (0..8).any(|x: i64| (x * x - d).rem_euclid(8) == 0 || (x * x + d).rem_euclid(8) == 0);
            assert_eq!(kronecker(d, 2) == 1, is_pm1, "d = {d}");
        }
    }

    #[test]
    fn kronecker_matches_legendre_at_odd_primes() {
        for p in [3u64, 5, 7, 11, 13, 101, 997] {
            for d in -300i64..300 {
                assert_eq!(kronecker(d, p), legendre_euler(d, p), "({d}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_is_multiplicative() {
        for d in -200i64..=200 {
            for m1 in 1..=200u64 {
                for m2 in (1..=200u64).step_by(7) {
                    assert_eq!(kronecker(d, m1 * m2), kronecker(d, m1) * kronecker(d, m2));
                }
            }
        }
    }

    #[test]
    fn kronecker_is_periodic_for_one_mod_four() {
        for d in [5i64, 17, 37] {
            for m in 1..=(10 * d as u64) {
                assert_eq!(kronecker(d, m), kronecker(d, (m - 1) % d as u64 + 1), "d={d}, m={m}");
            }
        }
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let s = LpfSieve::new(100_000).unwrap();
        for v in 0..=100_000u64 {
            assert_eq!(is_prime(v), s.is_prime(v), "{v}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1, None).factors().is_empty());
        assert_eq!(factorize(325, None).factors(), &[(5, 2), (13, 1)]);
        assert_eq!(factorize(30030, None).factors(), &[(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1)]);
        let s = LpfSieve::new(1000).unwrap();
        assert_eq!(factorize(325, Some(&s)), factorize(325, None));
        // Beyond the sieve, trial division takes over.
        assert_eq!(factorize(1_000_003 * 3, Some(&s)).factors(), &[(3, 1), (1_000_003, 1)]);
    }

    #[test]
    fn factorize_round_trip() {
        let s = LpfSieve::new(100_000).unwrap();
        for v in 1..=100_000u64 {
            let f = factorize(v, Some(&s));
            assert_eq!(f.reconstruct(), v as u128);
            assert!(f.factors().iter().all(|&(p, e)| e >= 1 && is_prime(p)));
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn squarefree_decompose_examples() {
        let d = squarefree_decompose(9).unwrap();
        assert_eq!((d.square_part_root, d.squarefree_part), (3, 1));
        let d = squarefree_decompose(45).unwrap();
        assert_eq!((d.square_part_root, d.squarefree_part), (3, 5));
        let d = squarefree_decompose(15).unwrap();
        assert_eq!((d.square_part_root, d.squarefree_part), (1, 15));
        assert!(squarefree_decompose(12).is_err());
        assert_eq!(squarefree_kernel(72, None), 2);
    }

    #[test]
    fn fundamental_discriminants_small() {
        let got = fundamental_discriminants(1, 45);
        assert_eq!(got, vec![5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44]);
        assert!(is_fundamental(-4));
        assert!(is_fundamental(-3));
        assert!(!is_fundamental(-1));
    }

    #[test]
    fn complete_sum_examples() {
        assert_eq!(complete_sum_f(5), -1);
        assert_eq!(complete_sum_f(9), 9);
        assert_eq!(complete_sum_f(1), 1);
        // Hand check for q = 5: terms for a = 1..5 are 0, -1, -1, 0, +1.
        let terms: Vec<i32> = (1..=5).map(|a| jacobi(f_mod(a, 5), 5)).collect();
        assert_eq!(terms, vec![0, -1, -1, 0, 1]);
    }

    #[test]
    fn complete_sum_routes_agree() {
        for q in (1..=2000u64).step_by(2) {
            let direct = complete_sum_f(q);
            assert_eq!(direct, complete_sum_f_crt(&factorize(q, None)), "q = {q}");
            let q0 = squarefree_decompose(q).unwrap().squarefree_part;
            assert!(direct.unsigned_abs() * q0 <= q, "bound fails at q = {q}");
        }
    }

    #[test]
    fn jacobsthal_examples() {
        assert_eq!(jacobsthal_check(5, 1), Ok(-1));
        assert_eq!(jacobsthal_check(7, 3), Ok(-1));
        assert_eq!(jacobsthal_check(5, 0), Ok(4));
        assert!(jacobsthal_check(9, 1).is_err());
        assert!(jacobsthal_check(2, 1).is_err());
    }

    #[test]
    fn jacobsthal_row_matches_direct() {
        for &p in crate::sieve::primes_up_to(700).iter().skip(1) {
            let row = jacobsthal_row(p).unwrap();
            for b in 0..p {
                assert_eq!(row[b as usize], jacobsthal_check(p, b as i64).unwrap(), "p={p} b={b}");
            }
        }
    }

    #[test]
    fn charsum_partial_examples() {
        assert_eq!(charsum_partial(1, 10), 10);
        assert_eq!(charsum_partial(5, 5), -1);
        assert_eq!(charsum_partial(5, 25), -5);
    }

    #[test]
    fn charsum_partial_is_periodic() {
        for q in (1..=500u64).step_by(2) {
            let c = complete_sum_f(q);
            let per = PeriodicCharSum::new(q);
            for k in 1..=10u64 {
                assert_eq!(charsum_partial(q, k * q), k as i64 * c, "q={q} k={k}");
            }
            for x in [0, 1, q / 2, 3 * q + 1, 7 * q - 1] {
                assert_eq!(per.partial(x), charsum_partial(q, x));
            }
        }
    }
}
