//! Sampled upper-right frontiers of two-user rate regions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Self {
        RatePair { r1, r2 }
    }
}

/// Whether a frontier point is a proven capacity-boundary point.
///
/// Points past the diamond point follow the sum-rate line on the inner
/// bound; their optimality is only conjectured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Segment {
    Proven,
    SumrateConjectured,
}

impl Segment {
    pub fn as_str(self) -> &'static str {
        match self {
            Segment::Proven => "proven",
            Segment::SumrateConjectured => "sumrate_conjectured",
        }
    }
}

impl std::str::FromStr for Segment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proven" => Ok(Segment::Proven),
            "sumrate_conjectured" => Ok(Segment::SumrateConjectured),
            other => Err(Error::Parse(format!("unknown segment `{other}`"))),
        }
    }
}

/// A corner of the frontier; `alpha` is the family parameter that produced it,
/// absent for brute-force frontiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub alpha: Option<f64>,
    pub r1: f64,
    pub r2: f64,
    pub segment: Segment,
}

impl BoundaryPoint {
    pub fn rate(&self) -> RatePair {
        RatePair::new(self.r1, self.r2)
    }
}

/// Pareto-filtered corner set, sorted by strictly increasing `r1` with
/// strictly decreasing `r2`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    points: Vec<BoundaryPoint>,
}

impl Frontier {
    /// Keeps the non-dominated corners of `corners`.
    pub fn from_corners<I>(corners: I) -> Self
    where
        I: IntoIterator<Item = BoundaryPoint>,
    {
        let mut pts: Vec<BoundaryPoint> = corners
            .into_iter()
            .filter(|p| p.r1.is_finite() && p.r2.is_finite())
            .collect();
        pts.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2)));
        let mut kept = Vec::new();
        let mut best_r2 = f64::NEG_INFINITY;
        for p in pts.into_iter().rev() {
            if p.r2 > best_r2 {
                best_r2 = p.r2;
                kept.push(p);
            }
        }
        kept.reverse();
        Frontier { points: kept }
    }

    /// Wraps points that are already a valid frontier (used when parsing).
    pub fn from_sorted(points: Vec<BoundaryPoint>) -> Result<Self> {
        for w in points.windows(2) {
            if !(w[1].r1 > w[0].r1 && w[1].r2 <= w[0].r2) {
                return Err(Error::Parse(format!(
                    "frontier points ({}, {}) and ({}, {}) are out of order",
                    w[0].r1, w[0].r2, w[1].r1, w[1].r2
                )));
            }
        }
        Ok(Frontier { points })
    }

    pub fn points(&self) -> &[BoundaryPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_r1(&self) -> Option<f64> {
        self.points.last().map(|p| p.r1)
    }

    /// Upper boundary `r2(r1)` with linear interpolation between corners;
    /// `None` beyond the last corner.
    pub fn r2_at(&self, r1: f64) -> Option<f64> {
        let first = self.points.first()?;
        let last = self.points.last()?;
        if r1 > last.r1 {
            return None;
        }
        if r1 <= first.r1 {
            return Some(first.r2);
        }
        let i = self.points.partition_point(|p| p.r1 < r1);
        let (a, b) = (&self.points[i - 1], &self.points[i]);
        let t = (r1 - a.r1) / (b.r1 - a.r1);
        Some(a.r2 + t * (b.r2 - a.r2))
    }

    /// True if some corner weakly dominates `p` up to `slack` in each coordinate.
    pub fn dominates(&self, p: RatePair, slack: f64) -> bool {
        let i = self.points.partition_point(|c| c.r1 < p.r1 - slack);
        self.points.get(i).is_some_and(|c| c.r2 >= p.r2 - slack)
    }

    /// The part of the frontier with `r1 <= limit`.
    pub fn truncated(&self, limit: f64) -> Frontier {
        Frontier {
            points: self
                .points
                .iter()
                .copied()
                .filter(|p| p.r1 <= limit)
                .collect(),
        }
    }

    /// Frontier shifted by `(d1, d2)`; used for tests and sensitivity studies.
    pub fn shifted(&self, d1: f64, d2: f64) -> Frontier {
        Frontier {
            points: self
                .points
                .iter()
                .map(|p| BoundaryPoint {
                    r1: p.r1 + d1,
                    r2: p.r2 + d2,
                    ..*p
                })
                .collect(),
        }
    }
}

/// Largest vertical gap between two frontiers.
///
/// Both are read as piecewise-linear curves `r2(r1)`; the gap is evaluated at
/// every corner abscissa inside the common `r1` range, which is exact for
/// piecewise-linear curves. A difference in the `r1` extent of the two curves
/// also counts as a deviation.
pub fn frontier_deviation(a: &Frontier, b: &Frontier) -> Result<f64> {
    let (Some(end_a), Some(end_b)) = (a.max_r1(), b.max_r1()) else {
        return Err(Error::EmptyFrontier);
    };
    let common = end_a.min(end_b);
    let mut worst = (end_a - end_b).abs();
    let abscissae = a
        .points
        .iter()
        .chain(&b.points)
        .map(|p| p.r1)
        .filter(|&r| r <= common)
        .chain(std::iter::once(common));
    for r1 in abscissae {
        if let (Some(x), Some(y)) = (a.r2_at(r1), b.r2_at(r1)) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok(worst)
}
