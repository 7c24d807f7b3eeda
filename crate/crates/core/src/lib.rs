//! Computational toolkit for real quadratic fields `Q(sqrt(d))`.
//!
//! The crate computes class numbers two ways (cycles of reduced indefinite
//! forms, and the analytic class number formula), fundamental units and
//! regulators from continued fractions, and `L(1, chi_d)` both exactly and
//! as truncated Euler products. On top of that it runs desk-scale
//! experiments on the family `d = 4n^2 + 1`, where the fundamental unit is
//! as small as possible and class numbers can be extremely large.
//!
//! Module map:
//!
//! * [`arith`]: Kronecker/Jacobi symbols, factorization, character sums of `4a^2 + 1`.
//! * [`sieve`]: least-prime-factor tables and prime lists.
//! * [`pell`]: continued fractions, fundamental units, Pell solution censuses.
//! * [`lfun`]: `L(1, chi_d)` evaluation and Euler-product censuses.
//! * [`classnum`]: indefinite binary quadratic forms and class numbers.
//! * [`chowla`]: the family `4n^2 + 1` and the extreme class number search.
//! * [`moments`]: the `b_r(m; y, z)` calculus, prime-sum moments, sieve explorer.

pub mod arith;
pub mod chowla;
pub mod classnum;
mod error;
pub mod lfun;
pub mod moments;
pub mod par;
pub mod pell;
pub mod sieve;

pub use error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `2 e^gamma`, the conjectured limsup of the extremal statistic.
pub fn two_e_gamma() -> f64 {
    2.0 * EULER_GAMMA.exp()
}
