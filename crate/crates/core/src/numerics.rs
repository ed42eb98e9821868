//! Scalar information measures and monotone root finding.
//!
//! Every rate in the toolkit is expressed in a single [`LogBase`]. The binary
//! entropy, the Gaussian capacity function and their inverses live here as
//! methods on the base so that a whole computation cannot mix units.

use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

use crate::error::{domain, Error, Result};

/// Slack allowed when an argument that should lie in a closed interval
/// overshoots an endpoint by floating-point rounding.
pub(crate) const ENDPOINT_SLACK: f64 = 1e-12;

/// Logarithm base for entropies, capacities and rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    /// Base 2.
    #[default]
    Bits,
    /// Base e.
    Nats,
}

impl LogBase {
    /// Natural log of the base, the divisor turning `ln` into `log_base`.
    #[inline]
    pub fn ln_base(self) -> f64 {
        match self {
            LogBase::Bits => LN_2,
            LogBase::Nats => 1.0,
        }
    }

    /// The amount of information in one bit, in this base (`log 2`).
    #[inline]
    pub fn bit(self) -> f64 {
        match self {
            LogBase::Bits => 1.0,
            LogBase::Nats => LN_2,
        }
    }

    #[inline]
    pub fn log(self, x: f64) -> f64 {
        x.ln() / self.ln_base()
    }

    /// `-x log x` with the convention `0 log 0 = 0`.
    #[inline]
    pub(crate) fn neg_x_log_x(self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -x * x.ln() / self.ln_base()
        }
    }

    /// Shannon entropy of a probability vector. Entries are not validated.
    pub fn entropy(self, probs: &[f64]) -> f64 {
        probs.iter().map(|&p| self.neg_x_log_x(p)).sum()
    }

    /// Binary entropy `H_b(p) = -p log p - (1-p) log(1-p)`.
    pub fn binary_entropy(self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain("p", p, "[0, 1]"));
        }
        Ok(self.hb(p))
    }

    #[inline]
    pub(crate) fn hb(self, p: f64) -> f64 {
        self.neg_x_log_x(p) + self.neg_x_log_x(1.0 - p)
    }

    /// Inverse of the binary entropy on the branch `[0, 1/2]`.
    pub fn binary_entropy_inv(self, h: f64, tol: Tolerance) -> Result<f64> {
        let top = self.bit();
        if !(h >= -ENDPOINT_SLACK && h <= top + ENDPOINT_SLACK) {
            return Err(domain("h", h, "[0, H_b(1/2)]"));
        }
        if h <= 0.0 {
            return Ok(0.0);
        }
        if h >= top {
            return Ok(0.5);
        }
        bisect_monotone(|q| self.hb(q), 0.0, 0.5, h, Monotonicity::Increasing, tol)
    }

    /// Gaussian capacity function `Γ(x) = log(1 + x) / 2`.
    pub fn gaussian_cap(self, snr: f64) -> Result<f64> {
        if !(snr >= 0.0) {
            return Err(domain("snr", snr, "[0, inf)"));
        }
        Ok(self.gamma(snr))
    }

    #[inline]
    pub(crate) fn gamma(self, snr: f64) -> f64 {
        0.5 * snr.ln_1p() / self.ln_base()
    }

    /// Closed-form inverse of [`LogBase::gaussian_cap`].
    pub fn gaussian_cap_inv(self, c: f64) -> Result<f64> {
        if !(c >= 0.0) {
            return Err(domain("c", c, "[0, inf)"));
        }
        Ok(self.gamma_inv(c))
    }

    #[inline]
    pub(crate) fn gamma_inv(self, c: f64) -> f64 {
        (2.0 * c * self.ln_base()).exp_m1()
    }
}

impl std::fmt::Display for LogBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LogBase::Bits => "bits",
            LogBase::Nats => "nats",
        })
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bits" => Ok(LogBase::Bits),
            "nats" => Ok(LogBase::Nats),
            other => Err(Error::Parse(format!("unknown log base `{other}`"))),
        }
    }
}

/// Stopping rule for iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub max_iters: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, max_iters: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !abs_tol.is_finite() {
            return Err(domain("abs_tol", abs_tol, "(0, inf)"));
        }
        if max_iters == 0 {
            return Err(domain("max_iters", 0.0, "[1, inf)"));
        }
        Ok(Tolerance { abs_tol, max_iters })
    }

    /// Bisection run down to the resolution of `f64`.
    pub fn machine() -> Self {
        Tolerance {
            abs_tol: 1e-300,
            max_iters: 2_000,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_tol: 1e-10,
            max_iters: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Bisection for `f(x) = target` on `[lo, hi]` where `f` is monotone.
///
/// Stops once the bracket is narrower than `tol.abs_tol` and the residual at
/// the last probe is within `tol.abs_tol`, or when the bracket cannot be split
/// further in floating point.
pub fn bisect_monotone<F>(
    f: F,
    lo: f64,
    hi: f64,
    target: f64,
    direction: Monotonicity,
    tol: Tolerance,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo <= hi) {
        return Err(Error::Precondition(format!(
            "bisection interval [{lo}, {hi}] is empty"
        )));
    }
    let sign = match direction {
        Monotonicity::Increasing => 1.0,
        Monotonicity::Decreasing => -1.0,
    };
    let residual = |x: f64| sign * (f(x) - target);

    let (r_lo, r_hi) = (residual(lo), residual(hi));
    if r_lo.is_nan() || r_hi.is_nan() {
        return Err(domain("f(endpoint)", f64::NAN, "finite reals"));
    }
    if r_lo > 0.0 || r_hi < 0.0 {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: f(lo),
            f_hi: f(hi),
            target,
        });
    }
    if r_lo == 0.0 {
        return Ok(lo);
    }
    if r_hi == 0.0 {
        return Ok(hi);
    }

    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..tol.max_iters {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            return Ok(mid);
        }
        let r = residual(mid);
        if r.is_nan() {
            return Err(domain("f(x)", f64::NAN, "finite reals"));
        }
        if r == 0.0 {
            return Ok(mid);
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol.abs_tol && r.abs() <= tol.abs_tol {
            return Ok(mid);
        }
    }
    Err(Error::IterationLimit {
        routine: "bisect_monotone",
        max_iters: tol.max_iters,
    })
}

/// Binary convolution `p ⋆ q = p(1-q) + (1-p)q`, the crossover probability of
/// two cascaded binary symmetric channels.
pub fn binary_convolution(p: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("p", p, "[0, 1]"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(domain("q", q, "[0, 1]"));
    }
    Ok(bconv(p, q))
}

#[inline]
pub(crate) fn bconv(p: f64, q: f64) -> f64 {
    p * (1.0 - q) + (1.0 - p) * q
}
