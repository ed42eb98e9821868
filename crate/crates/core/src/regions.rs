//! Parametric inner and outer bounds and the threshold below which they meet.
//!
//! A [`ParametricFamily`] describes both bounds through two rate curves over a
//! parameter `alpha` in `[0, b]`:
//!
//! * the outer bound is the union of rectangles `r1 <= f1(alpha)`,
//!   `r2 <= f2(alpha)`;
//! * the inner bound is the union of the same rectangles cut by the sum-rate
//!   constraint `r1 + r2 <= C1`.
//!
//! With `f1` increasing, `f2` decreasing and `f1 + f2` increasing, the two
//! unions coincide for every `alpha` up to the unique `alpha_th` with
//! `f1(alpha_th) + f2(alpha_th) = C1`. Boundary points with
//! `r1 <= R1_th = f1(alpha_th)` are therefore capacity points, and there
//! `R2*(r1) = f2(f1^{-1}(r1))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};
use crate::frontier::{BoundaryPoint, Frontier, Segment};
use crate::numerics::{bisect_monotone, Monotonicity, Tolerance, ENDPOINT_SLACK};

/// Points of the validation grid checked at construction.
pub const VALIDATION_GRID: usize = 1_000;

/// Default number of `alpha` samples for boundary curves.
pub const DEFAULT_BOUNDARY_GRID: usize = 2_001;

const MONOTONE_SLACK: f64 = 1e-12;
const ENDPOINT_TOL: f64 = 1e-9;

pub type RateCurve = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Rate curves `f1`, `f2` on `[0, b]` together with the capacities they are
/// anchored to.
#[derive(Clone)]
pub struct ParametricFamily {
    b: f64,
    c1: f64,
    c2: f64,
    c12: f64,
    f1: RateCurve,
    f2: RateCurve,
}

impl fmt::Debug for ParametricFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricFamily")
            .field("b", &self.b)
            .field("c1", &self.c1)
            .field("c2", &self.c2)
            .field("c12", &self.c12)
            .finish_non_exhaustive()
    }
}

impl ParametricFamily {
    /// Builds a family and checks its shape on a [`VALIDATION_GRID`]-point grid.
    pub fn new(b: f64, c1: f64, c2: f64, c12: f64, f1: RateCurve, f2: RateCurve) -> Result<Self> {
        let fam = Self::new_unchecked(b, c1, c2, c12, f1, f2);
        fam.validate()?;
        Ok(fam)
    }

    /// Builds a family without checking its shape. Thresholds and boundary
    /// inversion assume the shape holds.
    pub fn new_unchecked(b: f64, c1: f64, c2: f64, c12: f64, f1: RateCurve, f2: RateCurve) -> Self {
        ParametricFamily {
            b,
            c1,
            c2,
            c12,
            f1,
            f2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let shape = |msg: String| Err(Error::Precondition(format!("parametric family: {msg}")));
        if !(self.b > 0.0 && self.b.is_finite()) {
            return shape(format!("b = {} must be positive", self.b));
        }
        if !(self.c12 >= 0.0) {
            return shape(format!("C12 = {} must be nonnegative", self.c12));
        }
        let ends = [
            ("f1(0)", self.f1(0.0), 0.0),
            ("f1(b)", self.f1(self.b), self.c1),
            ("f2(0)", self.f2(0.0), self.c2 + self.c12),
            ("f2(b)", self.f2(self.b), self.c12),
        ];
        for (name, got, want) in ends {
            if !((got - want).abs() <= ENDPOINT_TOL) {
                return shape(format!("{name} = {got}, expected {want}"));
            }
        }
        let mut prev = (self.f1(0.0), self.f2(0.0));
        for i in 1..=VALIDATION_GRID {
            let a = self.b * i as f64 / VALIDATION_GRID as f64;
            let cur = (self.f1(a), self.f2(a));
            if !cur.0.is_finite() || !cur.1.is_finite() {
                return shape(format!("non-finite value at alpha = {a}"));
            }
            if cur.0 - prev.0 < -MONOTONE_SLACK {
                return shape(format!("f1 decreases near alpha = {a}"));
            }
            if cur.1 - prev.1 > MONOTONE_SLACK {
                return shape(format!("f2 increases near alpha = {a}"));
            }
            if (cur.0 + cur.1) - (prev.0 + prev.1) < -MONOTONE_SLACK {
                return shape(format!("f1 + f2 decreases near alpha = {a}"));
            }
            prev = cur;
        }
        Ok(())
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn c12(&self) -> f64 {
        self.c12
    }

    #[inline]
    pub fn f1(&self, alpha: f64) -> f64 {
        (self.f1)(alpha)
    }

    #[inline]
    pub fn f2(&self, alpha: f64) -> f64 {
        (self.f2)(alpha)
    }

    /// `f1^{-1}(r1)` by bisection, for `r1` in `[0, C1]`.
    pub fn f1_inverse(&self, r1: f64, tol: Tolerance) -> Result<f64> {
        if !(r1 >= -ENDPOINT_SLACK && r1 <= self.c1 + ENDPOINT_SLACK) {
            return Err(domain("r1", r1, "[0, C1]"));
        }
        let target = r1.clamp(self.f1(0.0), self.f1(self.b));
        bisect_monotone(
            |a| self.f1(a),
            0.0,
            self.b,
            target,
            Monotonicity::Increasing,
            tol,
        )
    }

    /// Exact upper boundary of the outer bound at `r1`, `f2(f1^{-1}(r1))`.
    pub fn outer_r2(&self, r1: f64, tol: Tolerance) -> Result<f64> {
        Ok(self.f2(self.f1_inverse(r1, tol)?))
    }

    /// Exact upper boundary of the inner bound at `r1`.
    pub fn inner_r2(&self, r1: f64, tol: Tolerance) -> Result<f64> {
        Ok(self.outer_r2(r1, tol)?.min(self.c1 - r1))
    }

    fn check_cooperation_hypothesis(&self) -> Result<()> {
        if self.c12 > self.c1 - self.c2 + ENDPOINT_SLACK {
            return Err(Error::Precondition(format!(
                "requires C12 <= C1 - C2, got C12 = {} > {} = C1 - C2",
                self.c12,
                self.c1 - self.c2
            )));
        }
        Ok(())
    }
}

/// The unique `alpha_th` in `[0, b]` with `f1 + f2 = C1`.
pub fn threshold_alpha(fam: &ParametricFamily, tol: Tolerance) -> Result<f64> {
    fam.check_cooperation_hypothesis()?;
    let sum = |a: f64| fam.f1(a) + fam.f2(a);
    // endpoint cases are exact in closed form; the slack keeps rounding from
    // sending bisection into the flat tail of f1 + f2
    if sum(0.0) >= fam.c1 - ENDPOINT_SLACK {
        return Ok(0.0);
    }
    if sum(fam.b) <= fam.c1 + ENDPOINT_SLACK {
        return Ok(fam.b);
    }
    bisect_monotone(sum, 0.0, fam.b, fam.c1, Monotonicity::Increasing, tol)
}

/// `R1_th = f1(alpha_th)`.
pub fn r1_threshold(fam: &ParametricFamily, tol: Tolerance) -> Result<f64> {
    Ok(fam.f1(threshold_alpha(fam, tol)?))
}

/// The capacity boundary `R2*(r1) = f2(f1^{-1}(r1))`, valid for `r1 <= R1_th`.
pub fn boundary_r2star(fam: &ParametricFamily, r1: f64, tol: Tolerance) -> Result<f64> {
    let r1_th = r1_threshold(fam, tol)?;
    if !(r1 >= -ENDPOINT_SLACK && r1 <= r1_th + ENDPOINT_SLACK) {
        return Err(Error::Precondition(format!(
            "r1 = {r1} lies outside [0, R1_th = {r1_th}]"
        )));
    }
    fam.outer_r2(r1.clamp(0.0, r1_th), tol)
}

/// Uniform grid plus `alpha_th` when it can be computed.
fn alpha_grid(fam: &ParametricFamily, grid_size: usize) -> Result<(Vec<f64>, Option<f64>)> {
    if grid_size < 2 {
        return Err(domain("grid_size", grid_size as f64, "[2, inf)"));
    }
    let mut grid: Vec<f64> = (0..grid_size)
        .map(|i| fam.b * i as f64 / (grid_size - 1) as f64)
        .collect();
    let th = threshold_alpha(fam, Tolerance::default()).ok();
    grid.extend(th);
    Ok((grid, th))
}

/// Past the threshold the sum-rate cut is active.
fn cut_active(fam: &ParametricFamily, th: Option<f64>, a: f64) -> bool {
    match th {
        Some(th) => a > th,
        None => fam.f1(a) + fam.f2(a) > fam.c1 + ENDPOINT_SLACK,
    }
}

fn segment_for(cut: bool) -> Segment {
    if cut {
        Segment::SumrateConjectured
    } else {
        Segment::Proven
    }
}

/// Sampled frontier of the inner bound.
///
/// Samples `alpha` uniformly on `[0, b]` and, when the threshold exists, at
/// `alpha_th` itself so the diamond point is an exact corner. Corners produced
/// by a pentagon whose sum-rate cut is active are marked
/// [`Segment::SumrateConjectured`].
pub fn inner_boundary(fam: &ParametricFamily, grid_size: usize) -> Result<Frontier> {
    let (grid, th) = alpha_grid(fam, grid_size)?;
    let corners: Vec<BoundaryPoint> = grid
        .par_iter()
        .flat_map_iter(|&a| {
            let (f1, f2) = (fam.f1(a), fam.f2(a));
            let cut = cut_active(fam, th, a);
            let segment = segment_for(cut);
            let mk = |r1: f64, r2: f64| BoundaryPoint {
                alpha: Some(a),
                r1,
                r2,
                segment,
            };
            let mut out = vec![mk(f1, f2.min(fam.c1 - f1))];
            if cut && f1 + f2 > fam.c1 {
                out.push(mk((fam.c1 - f2).max(0.0), f2));
            }
            out
        })
        .collect();
    Ok(Frontier::from_corners(corners))
}

/// Sampled frontier of the outer bound: the dominant corners `(f1, f2)`.
pub fn outer_boundary(fam: &ParametricFamily, grid_size: usize) -> Result<Frontier> {
    let (grid, th) = alpha_grid(fam, grid_size)?;
    let corners: Vec<BoundaryPoint> = grid
        .par_iter()
        .map(|&a| {
            let (f1, f2) = (fam.f1(a), fam.f2(a));
            BoundaryPoint {
                alpha: Some(a),
                r1: f1,
                r2: f2,
                segment: segment_for(cut_active(fam, th, a)),
            }
        })
        .collect();
    Ok(Frontier::from_corners(corners))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoincidenceReport {
    pub alpha_th: f64,
    /// `max(0, f1 + f2 - C1)` over grid points `alpha <= alpha_th`.
    pub max_violation: f64,
    /// `f1 + f2 - C1` at `alpha_th`.
    pub residual_at_threshold: f64,
    /// Smallest grid `alpha > alpha_th` where the sum-rate cut removes area.
    pub first_divergence: Option<f64>,
}

/// Checks that the sum-rate constraint is inactive on `[0, alpha_th]`.
pub fn coincidence_check(
    fam: &ParametricFamily,
    grid_size: usize,
    tol: Tolerance,
) -> Result<CoincidenceReport> {
    if grid_size < 2 {
        return Err(domain("grid_size", grid_size as f64, "[2, inf)"));
    }
    let alpha_th = threshold_alpha(fam, tol)?;
    let excess = |a: f64| fam.f1(a) + fam.f2(a) - fam.c1;
    let mut max_violation: f64 = 0.0;
    let mut first_divergence = None;
    for i in 0..grid_size {
        let a = fam.b * i as f64 / (grid_size - 1) as f64;
        let e = excess(a);
        if a <= alpha_th {
            max_violation = max_violation.max(e);
        } else if first_divergence.is_none() && e > tol.abs_tol {
            first_divergence = Some(a);
        }
    }
    Ok(CoincidenceReport {
        alpha_th,
        max_violation,
        residual_at_threshold: excess(alpha_th),
        first_divergence,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub c12: f64,
    pub alpha_th: f64,
    pub r1_th: f64,
    /// `f2(alpha_th)`, which equals `C1 - R1_th`.
    pub r2_at_th: f64,
}

/// Thresholds across a grid of cooperation capacities.
pub fn sweep_thresholds<F>(
    factory: F,
    c12_grid: &[f64],
    tol: Tolerance,
) -> Result<Vec<ThresholdRow>>
where
    F: Fn(f64) -> Result<ParametricFamily> + Sync,
{
    c12_grid
        .par_iter()
        .map(|&c12| {
            let fam = factory(c12)?;
            let alpha_th = threshold_alpha(&fam, tol)?;
            Ok(ThresholdRow {
                c12,
                alpha_th,
                r1_th: fam.f1(alpha_th),
                r2_at_th: fam.f2(alpha_th),
            })
        })
        .collect()
}

/// True if `alpha_th` and `R1_th` strictly decrease along rows sorted by
/// increasing `c12`.
pub fn thresholds_strictly_decreasing(rows: &[ThresholdRow]) -> bool {
    rows.windows(2)
        .all(|w| w[1].alpha_th < w[0].alpha_th && w[1].r1_th < w[0].r1_th)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::LogBase;

    const BITS: LogBase = LogBase::Bits;

    /// Gaussian family for s1 = 5, s2 = 0.5 built directly from Γ.
    fn gauss(c12: f64) -> ParametricFamily {
        let (s1, s2) = (5.0, 0.5);
        let c1 = BITS.gamma(s1);
        let c2 = BITS.gamma(s2);
        ParametricFamily::new(
            1.0,
            c1,
            c2,
            c12,
            Arc::new(move |a| BITS.gamma(a * s1)),
            Arc::new(move |a| c2 + c12 - BITS.gamma(a * s2)),
        )
        .unwrap()
    }

    #[test]
    fn threshold_examples() {
        let tol = Tolerance::default();
        assert!((threshold_alpha(&gauss(0.0), tol).unwrap() - 1.0).abs() < 1e-9);
        let c1_minus_c2 = BITS.gamma(5.0) - BITS.gamma(0.5);
        assert!((c1_minus_c2 - 1.0).abs() < 1e-15);
        assert_eq!(threshold_alpha(&gauss(c1_minus_c2), tol).unwrap(), 0.0);
        assert!((threshold_alpha(&gauss(0.5), tol).unwrap() - 0.25).abs() < 1e-9);
    }

    #[test]
    fn threshold_rejects_excess_cooperation() {
        let err = threshold_alpha(&gauss(1.2), Tolerance::default()).unwrap_err();
        assert!(err.to_string().contains("C12 <= C1 - C2"));
    }

    #[test]
    fn r1_threshold_examples() {
        let tol = Tolerance::default();
        let fam = gauss(0.0);
        assert!((r1_threshold(&fam, tol).unwrap() - fam.c1()).abs() < 1e-9);
        assert!(r1_threshold(&gauss(1.0), tol).unwrap().abs() < 1e-12);
        let r = r1_threshold(&gauss(0.5), tol).unwrap();
        assert!((r - 0.5 * 2.25f64.log2()).abs() < 1e-9);
        assert!((r - 0.584963).abs() < 1e-6);
    }

    #[test]
    fn boundary_examples() {
        let tol = Tolerance::default();
        let fam = gauss(0.5);
        assert!((boundary_r2star(&fam, 0.0, tol).unwrap() - (fam.c2() + 0.5)).abs() < 1e-12);
        let r1_th = r1_threshold(&fam, tol).unwrap();
        let at_th = boundary_r2star(&fam, r1_th, tol).unwrap();
        assert!((at_th - (fam.c1() - r1_th)).abs() < 1e-9);
        let v = boundary_r2star(&fam, 0.5 * 2.25f64.log2(), tol).unwrap();
        assert!((v - 0.707518).abs() < 1e-6, "{v}");
        assert!(boundary_r2star(&fam, r1_th + 0.01, tol).is_err());
    }

    #[test]
    fn boundary_sum_rate_is_strict_below_threshold() {
        let tol = Tolerance::default();
        let fam = gauss(0.5);
        let r1_th = r1_threshold(&fam, tol).unwrap();
        for i in 0..100 {
            let r1 = r1_th * i as f64 / 100.0;
            let s = r1 + boundary_r2star(&fam, r1, tol).unwrap();
            assert!(s < fam.c1() - 1e-6, "r1={r1}");
        }
    }

    #[test]
    fn inner_boundary_shapes() {
        let fam = gauss(0.5);
        let inner = inner_boundary(&fam, DEFAULT_BOUNDARY_GRID).unwrap();
        let r1_th = r1_threshold(&fam, Tolerance::default()).unwrap();
        for p in inner.points() {
            assert!(p.r1 + p.r2 <= fam.c1() + 1e-9);
            if p.r1 > r1_th + 1e-12 {
                assert!((p.r1 + p.r2 - fam.c1()).abs() < 1e-9);
                assert_eq!(p.segment, Segment::SumrateConjectured);
            } else {
                assert_eq!(p.segment, Segment::Proven);
            }
        }
        // the diamond point is a corner
        assert!(inner
            .points()
            .iter()
            .any(|p| (p.r1 - r1_th).abs() < 1e-12 && (p.r1 + p.r2 - fam.c1()).abs() < 1e-9));
    }

    #[test]
    fn constant_f2_gives_rectangle_sweep() {
        // synthetic single-user case: f2 is flat, so the frontier is the
        // rectangle corner at the right end.
        let fam =
            ParametricFamily::new_unchecked(1.0, 1.0, 0.3, 0.0, Arc::new(|a| a), Arc::new(|_| 0.3));
        let inner = inner_boundary(&fam, 11).unwrap();
        let rates: Vec<(f64, f64)> = inner.points().iter().map(|p| (p.r1, p.r2)).collect();
        assert_eq!(rates.first().unwrap(), &(0.7, 0.3));
        assert!((rates.last().unwrap().0 - 1.0).abs() < 1e-12);
        let outer = outer_boundary(&fam, 11).unwrap();
        assert_eq!(outer.len(), 1);
        assert_eq!((outer.points()[0].r1, outer.points()[0].r2), (1.0, 0.3));
    }

    #[test]
    fn outer_boundary_examples() {
        let fam = gauss(0.5);
        let two_point = outer_boundary(&fam, 2).unwrap();
        let last = two_point.points().last().unwrap();
        assert!((last.r1 - fam.c1()).abs() < 1e-12 && (last.r2 - 0.5).abs() < 1e-12);

        let outer = outer_boundary(&fam, DEFAULT_BOUNDARY_GRID).unwrap();
        let r2 = outer.r2_at(0.584963).unwrap();
        assert!((r2 - 0.707518).abs() < 1e-5);

        let inner = inner_boundary(&fam, DEFAULT_BOUNDARY_GRID).unwrap();
        for p in inner.points() {
            assert!(outer.dominates(p.rate(), 1e-12));
        }
    }

    #[test]
    fn coincidence_examples() {
        let tol = Tolerance::default();
        let rep = coincidence_check(&gauss(0.5), DEFAULT_BOUNDARY_GRID, tol).unwrap();
        assert!((rep.alpha_th - 0.25).abs() < 1e-9);
        assert!(rep.max_violation <= 1e-9);
        assert!(rep.residual_at_threshold.abs() <= tol.abs_tol);
        let first = rep.first_divergence.unwrap();
        assert!(first > 0.25 && first < 0.25 + 2.0 / 2000.0);

        let fam = gauss(0.5);
        assert!((fam.f1(1.0) + fam.f2(1.0) - (fam.c1() + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn threshold_sweep_examples() {
        let tol = Tolerance::default();
        let rows = sweep_thresholds(|c| Ok(gauss(c)), &[0.0], tol).unwrap();
        assert!((rows[0].alpha_th - 1.0).abs() < 1e-9);
        assert!((rows[0].r1_th - gauss(0.0).c1()).abs() < 1e-9);

        let rows = sweep_thresholds(|c| Ok(gauss(c)), &[1.0], tol).unwrap();
        assert_eq!((rows[0].alpha_th, rows[0].r1_th), (0.0, 0.0));

        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        let rows = sweep_thresholds(|c| Ok(gauss(c)), &grid, tol).unwrap();
        assert!(thresholds_strictly_decreasing(&rows));
        assert!((rows[2].alpha_th - 0.25).abs() < 1e-9);
        for r in &rows {
            assert!((r.r1_th + r.r2_at_th - gauss(0.0).c1()).abs() < 1e-9);
        }
        assert!(sweep_thresholds(|c| Ok(gauss(c)), &[0.0, 1.5], tol).is_err());
    }

    #[test]
    fn validation_catches_bad_families() {
        let c2 = 0.3;
        let wrong_end = ParametricFamily::new(
            1.0,
            1.0,
            c2,
            0.0,
            Arc::new(|a| 0.9 * a),
            Arc::new(move |a| c2 * (1.0 - a)),
        );
        assert!(wrong_end.is_err());
        let rising_f2 = ParametricFamily::new(
            1.0,
            1.0,
            0.0,
            0.2,
            Arc::new(|a| a),
            Arc::new(|a| 0.2 + 0.1 * (std::f64::consts::PI * a).sin()),
        );
        assert!(rising_f2.is_err());
        let falling_sum = ParametricFamily::new(
            1.0,
            0.5,
            0.8,
            0.0,
            Arc::new(|a| 0.5 * a),
            Arc::new(|a| 0.8 * (1.0 - a)),
        );
        assert!(falling_sum.is_err());
        let negative_coop =
            ParametricFamily::new(1.0, 1.0, 0.0, -0.1, Arc::new(|a| a), Arc::new(|_| -0.1));
        assert!(negative_coop.is_err());
    }

    #[test]
    fn sign_of_excess_changes_once() {
        let fam = gauss(0.3);
        let n = 10_000;
        let signs: Vec<bool> = (0..=n)
            .map(|i| {
                let a = i as f64 / n as f64;
                fam.f1(a) + fam.f2(a) - fam.c1() > 0.0
            })
            .collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(changes, 1);
    }
}
