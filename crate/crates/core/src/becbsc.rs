//! Broadcast channel with a BEC(`tau1`) to User 1 and a BSC(`p2`) to User 2.
//!
//! Both bounds are exhausted by `U ~ Bernoulli(1/2)` with `P_{X|U}` a BSC(`q`),
//! `q` in `[0, 1/2]`, which gives the family
//! `f1(q) = (1 - tau1) H_b(q)` and `f2(q) = 1 - H_b(p2 ⋆ q) + C12`.
//!
//! The converse step bounds `H(X|U)` through Mrs. Gerber's Lemma;
//! [`mgl_gap`] measures its slack for an arbitrary auxiliary law.

use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::numerics::{bconv, bisect_monotone, LogBase, Monotonicity, Tolerance, ENDPOINT_SLACK};
use crate::regions::ParametricFamily;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecBscBC {
    tau1: f64,
    p2: f64,
    base: LogBase,
}

impl BecBscBC {
    /// Requires `p2` in `[0, 1/2)` and `0 <= tau1 < H_b(p2)` (in bits), the
    /// range in which the BEC is more capable than the BSC.
    pub fn new(tau1: f64, p2: f64, base: LogBase) -> Result<Self> {
        if !(0.0..0.5).contains(&p2) {
            return Err(Error::Precondition(format!(
                "requires 0 <= p2 < 1/2, got p2 = {p2}"
            )));
        }
        let hb_bits = LogBase::Bits.hb(p2);
        if !(tau1 >= 0.0 && tau1 < hb_bits) {
            return Err(Error::Precondition(format!(
                "requires 0 <= tau1 < H_b(p2) = {hb_bits}, got tau1 = {tau1}"
            )));
        }
        Ok(BecBscBC { tau1, p2, base })
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn p2(&self) -> f64 {
        self.p2
    }

    pub fn base(&self) -> LogBase {
        self.base
    }

    pub fn c1(&self) -> f64 {
        (1.0 - self.tau1) * self.base.bit()
    }

    pub fn c2(&self) -> f64 {
        self.base.bit() - self.base.hb(self.p2)
    }

    pub fn max_c12(&self) -> f64 {
        self.c1() - self.c2()
    }

    fn check_c12(&self, c12: f64) -> Result<()> {
        if !(c12 >= 0.0) {
            return Err(domain("C12", c12, "[0, C1 - C2]"));
        }
        if c12 > self.max_c12() + ENDPOINT_SLACK {
            return Err(Error::Precondition(format!(
                "requires C12 <= C1 - C2 = H_b(p2) - tau1, got C12 = {c12} > {}",
                self.max_c12()
            )));
        }
        Ok(())
    }

    pub fn family(&self, c12: f64) -> Result<ParametricFamily> {
        self.check_c12(c12)?;
        self.check_monotone_gap()?;
        let (tau1, p2, base) = (self.tau1, self.p2, self.base);
        ParametricFamily::new(
            0.5,
            self.c1(),
            self.c2(),
            c12,
            Arc::new(move |q| (1.0 - tau1) * base.hb(q)),
            Arc::new(move |q| base.bit() - base.hb(bconv(p2, q)) + c12),
        )
    }

    /// `g(q) = H_b(p2 ⋆ q) - (1 - tau1) H_b(q)`, decreasing from `H_b(p2)` at
    /// `q = 0` to `tau1` (one bit scaled) at `q = 1/2`.
    pub fn threshold_gap(&self, q: f64) -> f64 {
        self.base.hb(bconv(self.p2, q)) - (1.0 - self.tau1) * self.base.hb(q)
    }

    /// True if `g` is monotone on `[0, 1/2]`, i.e. `tau1 <= 4 p2 (1 - p2)`.
    ///
    /// Near `q = 1/2` the sign of `g'` is that of `(1 - 2 p2)^2 - (1 - tau1)`,
    /// so for larger erasure probabilities `g` dips below `tau1` and the
    /// threshold equation has two roots.
    pub fn has_monotone_gap(&self) -> bool {
        self.tau1 <= 4.0 * self.p2 * (1.0 - self.p2)
    }

    fn check_monotone_gap(&self) -> Result<()> {
        if self.has_monotone_gap() {
            return Ok(());
        }
        Err(Error::Precondition(format!(
            "requires tau1 <= 4 p2 (1 - p2) = {} for a unique threshold, got tau1 = {}",
            4.0 * self.p2 * (1.0 - self.p2),
            self.tau1
        )))
    }

    /// The `q_th` in `[0, 1/2]` with `g(q_th) = C12 + tau1`.
    pub fn q_threshold(&self, c12: f64, tol: Tolerance) -> Result<f64> {
        self.check_c12(c12)?;
        self.check_monotone_gap()?;
        let target = c12 + self.tau1 * self.base.bit();
        if self.threshold_gap(0.0) <= target + ENDPOINT_SLACK {
            return Ok(0.0);
        }
        if self.threshold_gap(0.5) >= target - ENDPOINT_SLACK {
            return Ok(0.5);
        }
        bisect_monotone(
            |q| self.threshold_gap(q),
            0.0,
            0.5,
            target,
            Monotonicity::Decreasing,
            tol,
        )
    }

    /// `R1_th = (1 - tau1) H_b(q_th)`.
    pub fn r1_th_closed(&self, c12: f64, tol: Tolerance) -> Result<f64> {
        Ok((1.0 - self.tau1) * self.base.hb(self.q_threshold(c12, tol)?))
    }

    /// `R2*(r1) = 1 - H_b(p2 ⋆ H_b^{-1}(r1 / (1 - tau1))) + C12` for
    /// `r1 <= R1_th`.
    pub fn r2star_closed(&self, c12: f64, r1: f64, tol: Tolerance) -> Result<f64> {
        let r1_th = self.r1_th_closed(c12, tol)?;
        if !(r1 >= -ENDPOINT_SLACK && r1 <= r1_th + ENDPOINT_SLACK) {
            return Err(Error::Precondition(format!(
                "r1 = {r1} lies outside [0, R1_th = {r1_th}]"
            )));
        }
        let h = (r1.clamp(0.0, r1_th) / (1.0 - self.tau1)).min(self.base.bit());
        let q = self.base.binary_entropy_inv(h, tol)?;
        Ok(self.base.bit() - self.base.hb(bconv(self.p2, q)) + c12)
    }
}

/// Slack in Mrs. Gerber's Lemma for binary `X` sent through a BSC(`p2`):
/// `H(Y2|U) - H_b(H_b^{-1}(H(X|U)) ⋆ p2)`, never negative.
///
/// `p_x_given_u[u]` is the law of `X` given `U = u`, as `[P(0|u), P(1|u)]`.
pub fn mgl_gap(p_u: &[f64], p_x_given_u: &[[f64; 2]], p2: f64, base: LogBase) -> Result<f64> {
    if p_u.len() != p_x_given_u.len() {
        return Err(Error::Dimension(format!(
            "P_U has {} entries but P_X|U has {} rows",
            p_u.len(),
            p_x_given_u.len()
        )));
    }
    if !(0.0..=1.0).contains(&p2) {
        return Err(domain("p2", p2, "[0, 1]"));
    }
    let (h_x_u, h_y_u) = conditional_entropies(p_u, p_x_given_u, p2, base);
    let q = base.binary_entropy_inv(h_x_u.min(base.bit()), Tolerance::machine())?;
    Ok(h_y_u - base.hb(bconv(q, p2)))
}

/// `(H(X|U), H(Y2|U))` for binary `X` through a BSC(`p2`).
pub fn conditional_entropies(
    p_u: &[f64],
    p_x_given_u: &[[f64; 2]],
    p2: f64,
    base: LogBase,
) -> (f64, f64) {
    p_u.iter()
        .zip(p_x_given_u)
        .fold((0.0, 0.0), |(hx, hy), (&pu, row)| {
            let one = row[1];
            (hx + pu * base.hb(one), hy + pu * base.hb(bconv(p2, one)))
        })
}
