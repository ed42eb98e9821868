//! Scalar Gaussian broadcast channel `Y_k = sqrt(s_k) X + Z_k` with unit
//! noise and unit input power, so `C_k = Γ(s_k)`.
//!
//! The power split `alpha` parametrizes both bounds:
//! `f1(alpha) = Γ(alpha s1)` and `f2(alpha) = C2 + C12 - Γ(alpha s2)`.

use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::numerics::{LogBase, ENDPOINT_SLACK};
use crate::regions::ParametricFamily;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBC {
    s1: f64,
    s2: f64,
    base: LogBase,
}

impl GaussianBC {
    /// Requires `s1 > s2 > 0`.
    pub fn new(s1: f64, s2: f64, base: LogBase) -> Result<Self> {
        if !(s2 > 0.0 && s1 > s2 && s1.is_finite()) {
            return Err(Error::Precondition(format!(
                "requires s1 > s2 > 0, got s1 = {s1}, s2 = {s2}"
            )));
        }
        Ok(GaussianBC { s1, s2, base })
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn base(&self) -> LogBase {
        self.base
    }

    pub fn c1(&self) -> f64 {
        self.base.gamma(self.s1)
    }

    pub fn c2(&self) -> f64 {
        self.base.gamma(self.s2)
    }

    /// Largest cooperation capacity covered by the threshold results.
    pub fn max_c12(&self) -> f64 {
        self.c1() - self.c2()
    }

    fn check_c12(&self, c12: f64) -> Result<()> {
        if !(c12 >= 0.0) {
            return Err(domain("C12", c12, "[0, C1 - C2]"));
        }
        if c12 > self.max_c12() + ENDPOINT_SLACK {
            return Err(Error::Precondition(format!(
                "requires C12 <= C1 - C2, got C12 = {c12} > {}",
                self.max_c12()
            )));
        }
        Ok(())
    }

    pub fn family(&self, c12: f64) -> Result<ParametricFamily> {
        self.check_c12(c12)?;
        let (s1, s2, base) = (self.s1, self.s2, self.base);
        let c2 = self.c2();
        ParametricFamily::new(
            1.0,
            self.c1(),
            c2,
            c12,
            Arc::new(move |a| base.gamma(a * s1)),
            Arc::new(move |a| c2 + c12 - base.gamma(a * s2)),
        )
    }

    /// Closed-form threshold
    /// `alpha_th = ((s1 - s2) / Γ^{-1}(C1 - C2 - C12) - s2)^{-1}`.
    ///
    /// The grouping follows from solving
    /// `C1 - C2 - C12 = ½ log(1 + (s1 - s2) / (1/alpha + s2))` for `alpha`.
    pub fn alpha_th_closed(&self, c12: f64) -> Result<f64> {
        self.check_c12(c12)?;
        let slack = (self.max_c12() - c12).max(0.0);
        let g = self.base.gamma_inv(slack);
        if g <= 0.0 {
            return Ok(0.0);
        }
        let inv = (self.s1 - self.s2) / g - self.s2;
        Ok((1.0 / inv).clamp(0.0, 1.0))
    }

    /// `R1_th = Γ(alpha_th s1)`.
    pub fn r1_th_closed(&self, c12: f64) -> Result<f64> {
        Ok(self.base.gamma(self.alpha_th_closed(c12)? * self.s1))
    }

    /// `R2*(r1) = C2 + C12 - Γ(Γ^{-1}(r1) s2 / s1)` for `r1 <= R1_th`.
    pub fn r2star_closed(&self, c12: f64, r1: f64) -> Result<f64> {
        let r1_th = self.r1_th_closed(c12)?;
        if !(r1 >= -ENDPOINT_SLACK && r1 <= r1_th + ENDPOINT_SLACK) {
            return Err(Error::Precondition(format!(
                "r1 = {r1} lies outside [0, R1_th = {r1_th}]"
            )));
        }
        let snr = self.base.gamma_inv(r1.max(0.0)) * self.s2 / self.s1;
        Ok(self.c2() + c12 - self.base.gamma(snr))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Tolerance;
    use crate::regions::{boundary_r2star, threshold_alpha};
    use rand::{Rng, SeedableRng};

    fn reference_bc() -> GaussianBC {
        GaussianBC::new(5.0, 0.5, LogBase::Bits).unwrap()
    }

    #[test]
    fn rejects_misordered_snrs() {
        assert!(GaussianBC::new(0.5, 5.0, LogBase::Bits).is_err());
        assert!(GaussianBC::new(1.0, 0.0, LogBase::Bits).is_err());
        assert!(GaussianBC::new(1.0, 1.0, LogBase::Bits).is_err());
        assert!(reference_bc().family(1.5).is_err());
        assert!(reference_bc().family(-0.1).is_err());
    }

    #[test]
    fn family_endpoints_and_sample() {
        let bc = reference_bc();
        let fam = bc.family(0.5).unwrap();
        assert_eq!((fam.f1(0.0), fam.f2(0.0)), (0.0, bc.c2() + 0.5));
        assert!((fam.f1(1.0) - bc.c1()).abs() < 1e-15);
        assert!((fam.f2(1.0) - 0.5).abs() < 1e-15);
        assert!((fam.f1(0.25) - 0.5 * 2.25f64.log2()).abs() < 1e-15);
        assert!((fam.f1(0.25) - 0.584963).abs() < 1e-6);
        assert!((fam.f2(0.25) - 0.707518).abs() < 1e-6);
    }

    #[test]
    fn sum_matches_closed_rearrangement() {
        let bc = reference_bc();
        let c12 = 0.3;
        let fam = bc.family(c12).unwrap();
        for i in 1..=1000 {
            let a = i as f64 / 1000.0;
            let lhs = fam.f1(a) + fam.f2(a) - bc.c2() - c12;
            let rhs = 0.5 * (1.0 + (bc.s1 - bc.s2) / (1.0 / a + bc.s2)).log2();
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn sum_is_strictly_increasing_on_fine_grid() {
        let fam = reference_bc().family(0.4).unwrap();
        let n = 10_000;
        let mut prev = fam.f1(0.0) + fam.f2(0.0);
        for i in 1..=n {
            let a = i as f64 / n as f64;
            let cur = fam.f1(a) + fam.f2(a);
            assert!(cur > prev);
            prev = cur;
        }
    }

    #[test]
    fn closed_threshold_examples() {
        let bc = reference_bc();
        assert_eq!(bc.alpha_th_closed(bc.max_c12()).unwrap(), 0.0);
        assert!((bc.alpha_th_closed(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((bc.alpha_th_closed(0.5).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn closed_boundary_examples() {
        let bc = reference_bc();
        assert!((bc.r2star_closed(0.5, 0.0).unwrap() - (bc.c2() + 0.5)).abs() < 1e-15);
        let v = bc.r2star_closed(0.5, 0.5 * 2.25f64.log2()).unwrap();
        // Γ^{-1}(R1) = 1.25, Γ(0.125) = ½ log2 1.125
        let expected = 0.5 * 1.5f64.log2() + 0.5 - 0.5 * 1.125f64.log2();
        assert!((v - expected).abs() < 1e-12);
        assert!((v - 0.707518).abs() < 1e-6);
        let v = bc.r2star_closed(0.5, 0.3).unwrap();
        assert!(v + 0.3 < bc.c1());
        assert!(bc.r2star_closed(0.5, 0.7).is_err());
    }

    #[test]
    fn closed_and_bisection_thresholds_agree() {
        let tol = Tolerance::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let s2: f64 = rng.random_range(0.05..5.0);
            let s1: f64 = s2 + rng.random_range(0.05..20.0);
            let bc = GaussianBC::new(s1, s2, LogBase::Bits).unwrap();
            for k in 0..50 {
                let c12 = bc.max_c12() * k as f64 / 49.0;
                let fam = bc.family(c12).unwrap();
                let a = threshold_alpha(&fam, tol).unwrap();
                let closed = bc.alpha_th_closed(c12).unwrap();
                assert!((a - closed).abs() <= 1e-9, "s1={s1} s2={s2} c12={c12}");
            }
        }
    }

    #[test]
    fn closed_and_parametric_boundaries_agree() {
        let tol = Tolerance::default();
        let bc = reference_bc();
        let fam = bc.family(0.5).unwrap();
        let r1_th = bc.r1_th_closed(0.5).unwrap();
        for i in 0..=100 {
            let r1 = r1_th * i as f64 / 100.0;
            let a = bc.r2star_closed(0.5, r1).unwrap();
            let b = boundary_r2star(&fam, r1, tol).unwrap();
            assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn nats_scale_consistently() {
        let bits = reference_bc();
        let nats = GaussianBC::new(5.0, 0.5, LogBase::Nats).unwrap();
        let ln2 = std::f64::consts::LN_2;
        assert!((nats.c1() - bits.c1() * ln2).abs() < 1e-15);
        let a_bits = bits.alpha_th_closed(0.5).unwrap();
        let a_nats = nats.alpha_th_closed(0.5 * ln2).unwrap();
        assert!((a_bits - a_nats).abs() < 1e-12);
    }
}
