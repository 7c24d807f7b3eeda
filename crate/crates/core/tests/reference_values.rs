//! Values checked against 30-digit mpmath computations.

use realquad::classnum::{class_number, extremal_statistic};
use realquad::lfun::{exp_integral_e1, l_exact, l_series, tail_prime_sum};
use realquad::sieve::Primes;

const L_VALUES: &[(u64, f64)] = &[
    (5, 0.43040894096400404),
    (8, 0.623_225_240_140_230_5),
    (12, 0.760_345_996_300_946_3),
    (13, 0.662_735_391_071_845_5),
    (17, 1.0160848338428408),
    (40, 1.150_086_522_848_371),
    (65, 1.3775160097354424),
    (101, 0.596_668_668_017_519_2),
];

#[test]
fn l_values() {
    for &(d, want) in L_VALUES {
        assert!((l_exact(d).unwrap() - want).abs() < 1e-13, "log-sine d={d}");
        assert!((l_series(d).unwrap() - want).abs() < 1e-13, "series d={d}");
    }
}

#[test]
fn exponential_integral() {
    let table = [
        (1e-6, 13.23829589306249),
        (0.1, 1.82292395841939),
        (0.5, 0.55977359477616),
        (1.0, 0.21938393439552),
        (1.5, 0.10001958240663),
        (2.0, 0.04890051070806),
        (5.0, 0.00114829559127533),
        (10.0, 4.15696892968532e-6),
        (25.0, 5.3488997553402e-13),
        (40.0, 1.036773261451657e-19),
    ];
    for (x, want) in table {
        let got = exp_integral_e1(x);
        assert!(((got - want) / want).abs() < 1e-12, "E1({x}) = {got}, want {want}");
    }
}

#[test]
fn small_tail_and_statistic() {
    let primes = Primes::up_to(100);
    assert!((tail_prime_sum(5, 2.0, 10.0, &primes).unwrap() + 10.0 / 21.0).abs() < 1e-15);
    assert!((extremal_statistic(5).unwrap() - 1.5124715480025905).abs() < 1e-13);
    assert!((realquad::two_e_gamma() - 3.562144835980396).abs() < 1e-14);
}

#[test]
fn class_numbers_of_known_fields() {
    // h = 1 for the first few, then the classical small cases with h > 1
    for (d, h) in [(5, 1), (8, 1), (12, 1), (13, 1), (17, 1), (40, 2), (60, 2), (65, 2), (229, 3), (316, 3), (401, 5)] {
        assert_eq!(class_number(d).unwrap().h, h, "d={d}");
    }
}
