//! One function per subcommand, each building a [`Report`].

use realquad::arith::is_fundamental;
use realquad::chowla::{
    construct_splitting, density_check, enumerate_family, extreme_search, family_sample, median, primorial, ExtremeParams,
};
use realquad::classnum::{class_number_with, extremal_statistic_from, ClassNumberOptions};
use realquad::lfun::{approximation_census, default_census_tol};
use realquad::moments::{charsum_bound_census, large_sieve_ratio, moment_sweep, MomentDomain};
use realquad::pell::pell_census_aggregate;
use realquad::sieve::{LpfSieve, Primes};
use realquad::{two_e_gamma, Result};

use crate::report::{Cell, Report};
use crate::selftest::selftest;
use crate::Command;

pub fn dispatch(cmd: &Command) -> Result<Report> {
    match *cmd {
        Command::Family { x, q } => family(x, q),
        Command::Density { x, q } => density(x, q),
        Command::Splitting { x, y } => splitting(x, y),
        Command::Extremes { x, y, z, sample, seed } => extremes(x, y, z, sample, seed),
        Command::LfunCensus { x, a, tol, c0 } => lfun_census(x, a, tol, c0),
        Command::PellCensus { x, theta, fundamental_only } => pell(x, theta, fundamental_only),
        Command::Moments { x, y, z, k, all_n } => moments(x, y, z, k, all_n),
        Command::CharsumCensus { q } => charsum(q),
        Command::SieveRatio { x, n, trials, seed } => sieve_ratio(x, n, trials, seed),
        Command::Classnum { x, from } => classnum(from, x),
        Command::Selftest => Ok(selftest()),
    }
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(realquad::Error::Domain(msg.into()))
    }
}

fn family(x: u64, q: u64) -> Result<Report> {
    require(x >= 5 && q >= 1, "family needs x >= 5 and q >= 1")?;
    let primes = Primes::up_to(1000);
    let members = enumerate_family(x, q);
    let mut r = Report::new(&["n", "d", "splitting_bound"]);
    r.config("subcommand", "family").config("x", x).config("q", q);
    for m in &members {
        r.row(vec![m.n.into(), m.d.into(), m.splitting_bound(&primes).into()]);
    }
    r.summary("count", members.len());
    Ok(r)
}

fn density(x: u64, q: u64) -> Result<Report> {
    let d = density_check(x, q)?;
    let mut r = Report::new(&["q", "count", "main_term_local", "main_term_literal", "rel_error", "rel_error_literal"]);
    r.config("subcommand", "density").config("x", x).config("q", q);
    r.row(vec![
        d.q.into(),
        d.count.into(),
        d.main_term_local.into(),
        d.main_term_literal.into(),
        d.rel_error.into(),
        d.rel_error_literal.into(),
    ]);
    r.summary("product_tail_bound", d.product_tail_bound);
    Ok(r)
}

fn splitting(x: u64, y: f64) -> Result<Report> {
    let q = primorial(y)?;
    let members = construct_splitting(x, y)?;
    let primes = Primes::up_to(1000);
    let mut r = Report::new(&["d", "n", "splitting_bound"]);
    r.config("subcommand", "splitting").config("x", x).config("y", y);
    for m in &members {
        r.row(vec![m.d.into(), m.n.into(), m.splitting_bound(&primes).into()]);
    }
    r.summary("q", q).summary("count", members.len()).summary("violations", 0u64);
    Ok(r)
}

fn extremes(x: u64, y: Option<f64>, z: Option<f64>, sample: u64, seed: u64) -> Result<Report> {
    require(x >= 5, "extremes needs x >= 5")?;
    let s = extreme_search(x, ExtremeParams { y, z, ..Default::default() })?;
    let mut r = Report::new(&["d", "n", "h", "regulator", "L_trunc", "statistic"]);
    r.config("subcommand", "extremes").config("x", x).config("y", s.y).config("z", s.z);
    if sample > 0 {
        r.config("sample", sample).config("seed", seed);
    }
    for row in &s.rows {
        r.row(vec![row.d.into(), row.n.into(), row.h.into(), row.regulator.into(), row.l_trunc.into(), row.statistic.into()]);
    }
    r.summary("count", s.rows.len())
        .summary("max_statistic", s.max_statistic)
        .summary("two_e_gamma", two_e_gamma())
        .summary("tail_threshold", s.tail_threshold)
        .summary("tail_exceedances", s.tail_exceedances);
    let exact: Vec<_> = s.rows.iter().filter_map(|row| row.h_exact.map(|h| (row.h, h))).collect();
    if !exact.is_empty() {
        let worst = exact.iter().map(|&(h, e)| (h - e as f64).abs() / e as f64).fold(0.0, f64::max);
        r.summary("exact_checked", exact.len()).summary("max_rel_gap_to_exact", worst);
    }
    if sample > 0 {
        let rows = family_sample(x, sample as usize, seed, s.z)?;
        let stats: Vec<f64> = rows.iter().map(|row| row.statistic).collect();
        if let Some(m) = median(&stats) {
            r.summary("sample_median_statistic", m);
            r.summary("max_over_median", s.max_statistic / m);
        }
    }
    Ok(r)
}

fn lfun_census(x: u64, a: f64, tol: Option<f64>, c0: f64) -> Result<Report> {
    require(x >= 16, "lfun-census needs x >= 16")?;
    let tol = tol.unwrap_or_else(|| default_census_tol(x, c0));
    let c = approximation_census(x, a, tol)?;
    let mut r = Report::new(&["d", "exact", "euler", "rel_error"]);
    r.config("subcommand", "lfun-census").config("x", x).config("A", a).config("tol", tol);
    for e in &c.exceptions {
        r.row(vec![e.d.into(), e.exact.into(), e.euler.into(), e.rel_error.into()]);
    }
    r.summary("z", c.z)
        .summary("count", c.count)
        .summary("exceptions", c.exceptions.len())
        .summary("fraction", c.fraction)
        .summary("reference_fraction", c.reference_fraction)
        .summary("max_abs_rel_error", c.max_abs_rel_error)
        .summary("max_littlewood_ratio", c.max_littlewood_ratio);
    Ok(r)
}

fn pell(x: u64, theta: f64, fundamental_only: bool) -> Result<Report> {
    let a = pell_census_aggregate(x, theta, fundamental_only)?;
    let mut r = Report::new(&["x", "theta", "total", "bound_skeleton", "ratio"]);
    r.config("subcommand", "pell-census").config("x", x).config("theta", theta).config("fundamental_only", fundamental_only);
    r.row(vec![a.x.into(), a.theta.into(), a.total.into(), a.bound_skeleton.into(), a.ratio.into()]);
    Ok(r)
}

fn moments(x: u64, y: Option<f64>, z: Option<f64>, k_max: u64, all_n: bool) -> Result<Report> {
    require(x >= 5, "moments needs x >= 5")?;
    require(k_max <= 10, "moments supports k <= 10")?;
    let lx = (x as f64).ln();
    let y = y.unwrap_or(lx.powf(0.75));
    let z = z.unwrap_or(lx * lx);
    let dom = if all_n { MomentDomain::AllN } else { MomentDomain::Family };
    let ks: Vec<u32> = (0..=k_max as u32).collect();
    let reports = moment_sweep(x, y, z, &ks, dom)?;
    let mut r = Report::new(&["k", "members", "empirical", "skeleton", "c_estimate", "root_moment", "z_power_guard"]);
    r.config("subcommand", "moments").config("x", x).config("y", y).config("z", z).config("all_n", all_n);
    for m in &reports {
        let root = if m.k == 0 { Cell::Real(1.0) } else { Cell::Real(m.empirical.powf(1.0 / m.k as f64)) };
        r.row(vec![
            m.k.into(),
            m.members.into(),
            m.empirical.into(),
            m.skeleton.into(),
            m.c_estimate.unwrap_or(0.0).into(),
            root,
            m.z_power_guard.into(),
        ]);
    }
    let c_max = reports.iter().filter_map(|m| m.c_estimate).fold(0.0, f64::max);
    r.summary("max_c_estimate", c_max).summary("k_limit_unit", reports[0].k_limit_unit);
    Ok(r)
}

fn charsum(q_max: u64) -> Result<Report> {
    require((1..=2000).contains(&q_max), "charsum-census needs 1 <= q <= 2000")?;
    let rows = charsum_bound_census(q_max)?;
    let mut r = Report::new(&["q", "q0", "complete", "period_ratio", "max_ratio"]);
    r.config("subcommand", "charsum-census").config("q", q_max);
    for row in &rows {
        r.row(vec![row.q.into(), row.q0.into(), row.complete.into(), row.period_ratio.into(), row.max_ratio.into()]);
    }
    r.summary("max_ratio", rows.iter().map(|row| row.max_ratio).fold(0.0, f64::max));
    Ok(r)
}

fn sieve_ratio(x: u64, n: u64, trials: u64, seed: u64) -> Result<Report> {
    let s = large_sieve_ratio(x, n, trials, seed)?;
    let mut r = Report::new(&["trial", "lhs", "rhs", "ratio"]);
    r.config("subcommand", "sieve-ratio").config("x", x).config("N", n).config("trials", trials).config("seed", seed);
    for (i, t) in s.trials.iter().enumerate() {
        r.row(vec![i.into(), t.lhs.into(), t.rhs.into(), t.ratio.into()]);
    }
    r.summary("max_ratio", s.max_ratio).summary("mean_ratio", s.mean_ratio);
    Ok(r)
}

fn classnum(from: u64, x: u64) -> Result<Report> {
    require(from <= x, "classnum needs from <= x")?;
    require(x <= 10_000_000, "classnum supports x <= 1e7")?;
    let sieve = LpfSieve::new(x.max(2))?;
    let ds: Vec<u64> = (from.max(5)..=x).filter(|&d| is_fundamental(d as i64)).collect();
    let records = realquad::par::map_slice(&ds, 64, |chunk| {
        chunk.iter().map(|&d| class_number_with(d, ClassNumberOptions::default(), Some(&sieve))).collect::<Result<Vec<_>>>()
    });
    let mut r = Report::new(&["d", "narrow_h", "h", "norm_sign", "regulator", "L", "h_analytic", "statistic"]);
    r.config("subcommand", "classnum").config("from", from).config("x", x);
    let mut max_gap = 0.0f64;
    for part in records {
        for c in part? {
            max_gap = max_gap.max((c.h_analytic - c.h as f64).abs());
            r.row(vec![
                c.d.into(),
                c.narrow_h.into(),
                c.h.into(),
                c.norm_sign.into(),
                c.regulator.into(),
                c.l_value.into(),
                c.h_analytic.into(),
                extremal_statistic_from(c.h as f64, c.d)?.into(),
            ]);
        }
    }
    r.summary("count", r.rows.len()).summary("max_rounding_gap", max_gap);
    Ok(r)
}
