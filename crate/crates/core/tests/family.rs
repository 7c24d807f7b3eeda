use realquad::chowla::{construct_splitting, extreme_search, family_sample, median, primorial, ExtremeParams};

#[test]
fn construction_count_is_near_the_main_term() {
    for (x, y) in
        [(100_000_000u64, 3.0), (10_000_000_000, 3.0), (10_000_000_000, 7.0), (1_000_000_000_000, 7.0), (1_000_000_000_000, 13.0)]
    {
        let q = primorial(y).unwrap();
        let count = construct_splitting(x, y).unwrap().len() as f64;
        let local: f64 = realquad::sieve::primes_up_to(100_000)
            .into_iter()
            .filter(|&p| p % 4 == 1 && !q.is_multiple_of(p))
            .map(|p| 1.0 - 2.0 / (p * p) as f64)
            .product();
        let main = (x as f64).sqrt() / (2.0 * q as f64) * local;
        assert!(count >= 0.5 * main, "x={x} y={y}: {count} < 0.5 * {main}");
    }
}

#[test]
fn top_statistic_beats_the_family_median() {
    let x = 100_000_000;
    let s = extreme_search(x, ExtremeParams::default()).unwrap();
    let sample = family_sample(x, 400, 7, s.z).unwrap();
    let med = median(&sample.iter().map(|r| r.statistic).collect::<Vec<_>>()).unwrap();
    assert!(s.max_statistic > med, "{} <= {med}", s.max_statistic);
}

#[test]
fn constructed_class_numbers_match_cycles() {
    let s = extreme_search(10_000_000_000, ExtremeParams { y: Some(3.0), z: Some(1.0e5), exact_limit: 1_000_000 }).unwrap();
    let checked: Vec<_> = s.rows.iter().filter_map(|r| r.h_exact.map(|h| (r.d, r.h, h))).collect();
    assert!(!checked.is_empty());
    for (d, h, exact) in checked {
        assert!((h / exact as f64 - 1.0).abs() < 0.1, "d={d}: {h} vs {exact}");
    }
}
