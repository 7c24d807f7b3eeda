//! Built-in identity checks and small-range oracle agreements.

use realquad::arith::{
    complete_sum_f, complete_sum_f_crt, factorize, fundamental_discriminants, is_prime, jacobi, jacobsthal_row, kronecker,
    squarefree_decompose,
};
use realquad::chowla::{chowla_d, squarefree_flags};
use realquad::classnum::class_number;
use realquad::lfun::{l_exact, l_series};
use realquad::moments::{
    b_coefficient, factorial, moment_sweep, moment_via_expansion, prime_square_identity_check, MomentDomain,
};
use realquad::pell::{fundamental_unit, regulator_from_quotients};
use realquad::sieve::primes_up_to;

use crate::report::Report;

struct Check {
    name: &'static str,
    cases: u64,
    failures: u64,
}

fn check(name: &'static str, results: impl IntoIterator<Item = bool>) -> Check {
    let (mut cases, mut failures) = (0, 0);
    for ok in results {
        cases += 1;
        failures += (!ok) as u64;
    }
    Check { name, cases, failures }
}

fn checks() -> Vec<Check> {
    let odd_primes: Vec<u64> = primes_up_to(1000).into_iter().filter(|&p| p > 2).collect();
    let fund = fundamental_discriminants(5, 10_001);
    vec![
        check(
            "jacobi_euler_criterion",
            odd_primes.iter().take(40).flat_map(|&p| {
                (1..p).map(move |a| {
                    let e = realquad::arith::pow_mod(a, (p - 1) / 2, p);
                    jacobi(a, p) == if e == 1 { 1 } else { -1 }
                })
            }),
        ),
        check(
            "kronecker_multiplicative",
            (-200i64..=200).filter(|d| d % 4 == 0 || d.rem_euclid(4) == 1).flat_map(|d| {
                (1..60u64).flat_map(move |a| (1..60u64).map(move |b| kronecker(d, a * b) == kronecker(d, a) * kronecker(d, b)))
            }),
        ),
        check("miller_rabin_vs_sieve", {
            let set: std::collections::HashSet<u64> = primes_up_to(100_000).into_iter().collect();
            (0..=100_000u64).map(move |n| is_prime(n) == set.contains(&n))
        }),
        check("factorization_roundtrip", (1..=100_000u64).map(|n| factorize(n, None).reconstruct() == n as u128)),
        check(
            "jacobsthal_minus_one",
            odd_primes.iter().map(|&p| jacobsthal_row(p).map(|row| row[1..].iter().all(|&s| s == -1)).unwrap_or(false)),
        ),
        check(
            "complete_sum_crt_and_bound",
            (1..=2000u64).step_by(2).map(|q| {
                let direct = complete_sum_f(q);
                let q0 = squarefree_decompose(q).map(|s| s.squarefree_part).unwrap_or(0);
                direct == complete_sum_f_crt(&factorize(q, None)) && q0 > 0 && direct.unsigned_abs() * q0 <= q
            }),
        ),
        check(
            "regulator_two_routes",
            fund.iter().map(|&d| match (fundamental_unit(d), regulator_from_quotients(d)) {
                (Ok(u), Ok(r)) => (u.regulator - r).abs() <= 1e-9 * r.max(1.0),
                _ => false,
            }),
        ),
        check(
            "class_number_cycles_vs_analytic",
            fund.iter().map(|&d| class_number(d).map(|c| (c.h_analytic - c.h as f64).abs() < 1e-4).unwrap_or(false)),
        ),
        check(
            "l_series_vs_log_sine",
            fund.iter().take_while(|&&d| d < 3000).map(|&d| match (l_series(d), l_exact(d)) {
                (Ok(a), Ok(b)) => ((a - b) / b).abs() < 1e-10,
                _ => false,
            }),
        ),
        check("family_sieve_vs_factorization", {
            let flags = squarefree_flags(10_000, None);
            (1..=10_000u64).map(move |n| flags[n as usize] == factorize(chowla_d(n), None).is_squarefree())
        }),
        check(
            "family_splits_at_divisors_of_n",
            (1..=10_000u64).flat_map(|n| {
                factorize(n, None).factors().iter().map(|&(p, _)| kronecker(chowla_d(n) as i64, p) == 1).collect::<Vec<_>>()
            }),
        ),
        check(
            "b_factorial_cap",
            (1..=10_000u64).flat_map(|m| (0..=8).map(move |r| b_coefficient(m, r, 1.0, 1e6) <= factorial(r))),
        ),
        check(
            "prime_square_power_identity",
            (0..=6).map(|r| prime_square_identity_check(2.0, 100.0, r).map(|c| c.holds(1e-12)).unwrap_or(false)),
        ),
        check(
            "moment_expansion_identity",
            (0..=2u32).map(|k| {
                let direct = moment_sweep(10_000, 2.0, 40.0, &[k], MomentDomain::Family).map(|v| v[0].empirical);
                let expanded = moment_via_expansion(10_000, 2.0, 40.0, k, MomentDomain::Family);
                match (direct, expanded) {
                    (Ok(a), Ok(b)) => ((a - b) / a).abs() < 1e-9,
                    _ => false,
                }
            }),
        ),
    ]
}

pub fn selftest() -> Report {
    let mut r = Report::new(&["check", "cases", "failures", "passed"]);
    r.config("subcommand", "selftest");
    let results = checks();
    let all = results.iter().all(|c| c.failures == 0);
    for c in &results {
        r.row(vec![c.name.into(), c.cases.into(), c.failures.into(), (c.failures == 0).into()]);
    }
    r.summary("checks", results.len()).summary("all_passed", all);
    r
}
