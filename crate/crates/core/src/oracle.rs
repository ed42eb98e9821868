//! Brute-force superposition bounds for small discrete channel pairs.
//!
//! The inner bound is the union over auxiliary laws `P_{UX}` of the pentagons
//!
//! ```text
//! r1 <= I(X; Y1 | U),   r2 <= I(U; Y2) + C12,   r1 + r2 <= I(X; Y1)
//! ```
//!
//! and the outer bound drops the sum-rate constraint. Here `P_U` runs over the
//! integer compositions of `steps` into `|U|` parts and each row of `P_{X|U}`
//! independently over the compositions of `steps` into `|X|` parts. The result
//! is an exhaustive, reproducible under-approximation of both regions that
//! does not rely on any parametric characterization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::channel::{mutual_information_raw, ChannelPair};
use crate::error::{domain, Error, Result};
use crate::frontier::{BoundaryPoint, Frontier, Segment};
use crate::numerics::{LogBase, Tolerance};
use crate::regions::ParametricFamily;

pub use crate::frontier::frontier_deviation;

/// Default cap on the number of auxiliary laws evaluated.
pub const DEFAULT_MAX_EVALUATIONS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub u_cardinality: usize,
    pub steps: usize,
    pub max_evaluations: u64,
}

impl GridSpec {
    pub fn new(u_cardinality: usize, steps: usize) -> Result<Self> {
        if u_cardinality < 1 {
            return Err(domain("u_cardinality", u_cardinality as f64, "[1, inf)"));
        }
        if steps < 2 {
            return Err(domain("steps", steps as f64, "[2, inf)"));
        }
        Ok(GridSpec {
            u_cardinality,
            steps,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        })
    }

    pub fn with_max_evaluations(mut self, max_evaluations: u64) -> Self {
        self.max_evaluations = max_evaluations;
        self
    }

    /// Upper bound on the auxiliary laws enumerated for an input alphabet of
    /// size `x_size`.
    pub fn grid_size(&self, x_size: usize) -> u128 {
        let rows = count_compositions(self.steps, x_size);
        count_compositions(self.steps, self.u_cardinality)
            .saturating_mul(rows.saturating_pow(self.u_cardinality as u32))
    }
}

impl Default for GridSpec {
    /// `|U| = 3`, one more than a binary input alphabet.
    fn default() -> Self {
        GridSpec {
            u_cardinality: 3,
            steps: 40,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }
}

fn count_compositions(total: usize, parts: usize) -> u128 {
    // C(total + parts - 1, parts - 1)
    let k = parts.saturating_sub(1) as u128;
    let n = total as u128 + k;
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All ways of writing `total` as an ordered sum of `parts` nonnegative
/// integers, in lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(left - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    }
    out
}

/// Per-row quantities reused across every `P_U`.
struct RowTable {
    probs: Vec<Vec<f64>>,
    /// `I(X; Y1 | U = u)` for this row
    info1: Vec<f64>,
    /// `H(Y1 | X)` averaged over this row
    noise1: Vec<f64>,
    py1: Vec<Vec<f64>>,
    py2: Vec<Vec<f64>>,
    h_y2: Vec<f64>,
}

impl RowTable {
    fn new(pair: &ChannelPair, steps: usize, base: LogBase) -> Self {
        let x_size = pair.input_size();
        let probs: Vec<Vec<f64>> = compositions(steps, x_size)
            .into_iter()
            .map(|c| c.iter().map(|&k| k as f64 / steps as f64).collect())
            .collect();
        let row_h1 = pair.ch1().row_entropies(base);
        let mut table = RowTable {
            info1: Vec::with_capacity(probs.len()),
            noise1: Vec::with_capacity(probs.len()),
            py1: Vec::with_capacity(probs.len()),
            py2: Vec::with_capacity(probs.len()),
            h_y2: Vec::with_capacity(probs.len()),
            probs: Vec::new(),
        };
        for row in &probs {
            let mut py1 = vec![0.0; pair.ch1().output_size()];
            let mut py2 = vec![0.0; pair.ch2().output_size()];
            pair.ch1().output_law(row, &mut py1);
            pair.ch2().output_law(row, &mut py2);
            table
                .info1
                .push(mutual_information_raw(row, pair.ch1(), base));
            table
                .noise1
                .push(row.iter().zip(&row_h1).map(|(p, h)| p * h).sum());
            table.h_y2.push(base.entropy(&py2));
            table.py1.push(py1);
            table.py2.push(py2);
        }
        table.probs = probs;
        table
    }

    fn len(&self) -> usize {
        self.probs.len()
    }
}

/// Inner and outer brute-force frontiers from one enumeration.
#[derive(Debug, Clone)]
pub struct OracleFrontiers {
    pub inner: Frontier,
    pub outer: Frontier,
    pub evaluations: u64,
    pub runtime_seconds: f64,
    pub warnings: Vec<String>,
}

/// Run metadata written next to oracle frontiers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleMeta {
    pub u_cardinality: usize,
    pub steps: usize,
    pub runtime_seconds: f64,
    pub evaluations: u64,
}

impl OracleFrontiers {
    pub fn meta(&self, spec: &GridSpec) -> OracleMeta {
        OracleMeta {
            u_cardinality: spec.u_cardinality,
            steps: spec.steps,
            runtime_seconds: crate::export::round_sig(self.runtime_seconds),
            evaluations: self.evaluations,
        }
    }
}

fn pentagon_corners(a: f64, r: f64, s: f64) -> [(f64, f64); 2] {
    let a_cut = a.min(s);
    [
        (a_cut.min((s - r).max(0.0)), r.min(s)),
        (a_cut, r.min((s - a_cut).max(0.0))),
    ]
}

fn point(r1: f64, r2: f64, segment: Segment) -> BoundaryPoint {
    BoundaryPoint {
        alpha: None,
        r1,
        r2,
        segment,
    }
}

/// Enumerates the grid once and returns both frontiers.
pub fn oracle_regions(
    pair: &ChannelPair,
    c12: f64,
    spec: &GridSpec,
    base: LogBase,
) -> Result<OracleFrontiers> {
    let started = Instant::now();
    if !(c12 >= 0.0) {
        return Err(domain("C12", c12, "[0, inf)"));
    }
    let spec =
        GridSpec::new(spec.u_cardinality, spec.steps)?.with_max_evaluations(spec.max_evaluations);
    let mut warnings = Vec::new();
    if pair.input_size() > 2 {
        warnings.push(format!(
            "input alphabet of size {} makes the grid grow quickly",
            pair.input_size()
        ));
    }
    let size = spec.grid_size(pair.input_size());
    if size > spec.max_evaluations as u128 {
        return Err(Error::Budget(format!(
            "grid with |U| = {} and {} steps has {size} auxiliary laws, budget is {}",
            spec.u_cardinality, spec.steps, spec.max_evaluations
        )));
    }

    let rows = RowTable::new(pair, spec.steps, base);
    let weights = compositions(spec.steps, spec.u_cardinality);
    let n1 = pair.ch1().output_size();
    let n2 = pair.ch2().output_size();

    let chunks: Vec<(Frontier, Frontier, u64)> = weights
        .par_iter()
        .map(|w| {
            let p_u: Vec<f64> = w.iter().map(|&k| k as f64 / spec.steps as f64).collect();
            let active: Vec<usize> = (0..p_u.len()).filter(|&u| p_u[u] > 0.0).collect();
            let mut idx = vec![0usize; active.len()];
            let mut py1 = vec![0.0; n1];
            let mut py2 = vec![0.0; n2];
            let mut inner = Vec::new();
            let mut outer = Vec::new();
            let mut count = 0u64;
            loop {
                let mut info = 0.0;
                let mut noise = 0.0;
                let mut h_y2_u = 0.0;
                py1.iter_mut().for_each(|v| *v = 0.0);
                py2.iter_mut().for_each(|v| *v = 0.0);
                for (&u, &k) in active.iter().zip(&idx) {
                    let pu = p_u[u];
                    info += pu * rows.info1[k];
                    noise += pu * rows.noise1[k];
                    h_y2_u += pu * rows.h_y2[k];
                    for (acc, v) in py1.iter_mut().zip(&rows.py1[k]) {
                        *acc += pu * v;
                    }
                    for (acc, v) in py2.iter_mut().zip(&rows.py2[k]) {
                        *acc += pu * v;
                    }
                }
                let a = info.max(0.0);
                let r = (base.entropy(&py2) - h_y2_u).max(0.0) + c12;
                let s = (base.entropy(&py1) - noise).max(0.0);
                outer.push(point(a, r, Segment::Proven));
                let cut = a + r > s;
                let seg = if cut {
                    Segment::SumrateConjectured
                } else {
                    Segment::Proven
                };
                for (r1, r2) in pentagon_corners(a, r, s) {
                    inner.push(point(r1, r2, seg));
                }
                count += 1;

                // odometer over the rows of the active auxiliary symbols
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        return (
                            Frontier::from_corners(inner),
                            Frontier::from_corners(outer),
                            count,
                        );
                    }
                    idx[pos] += 1;
                    if idx[pos] < rows.len() {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
            }
        })
        .collect();

    let evaluations = chunks.iter().map(|c| c.2).sum();
    let inner = Frontier::from_corners(chunks.iter().flat_map(|c| c.0.points().iter().copied()));
    let outer = Frontier::from_corners(chunks.iter().flat_map(|c| c.1.points().iter().copied()));
    Ok(OracleFrontiers {
        inner,
        outer,
        evaluations,
        runtime_seconds: started.elapsed().as_secs_f64(),
        warnings,
    })
}

/// Brute-force frontier of the superposition inner bound.
pub fn oracle_inner(
    pair: &ChannelPair,
    c12: f64,
    spec: &GridSpec,
    base: LogBase,
) -> Result<Frontier> {
    Ok(oracle_regions(pair, c12, spec, base)?.inner)
}

/// Brute-force frontier of the outer bound.
pub fn oracle_outer(
    pair: &ChannelPair,
    c12: f64,
    spec: &GridSpec,
    base: LogBase,
) -> Result<Frontier> {
    Ok(oracle_regions(pair, c12, spec, base)?.outer)
}

/// How far a brute-force frontier is from a parametric characterization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    /// Deviation between oracle and sampled parametric inner frontiers.
    pub inner_deviation: f64,
    pub outer_deviation: f64,
    /// Largest amount by which an oracle corner rises above the exact
    /// parametric boundary; should never be positive beyond rounding.
    pub inner_excess: f64,
    pub outer_excess: f64,
}

fn excess_over(
    points: &Frontier,
    fam: &ParametricFamily,
    inner: bool,
    tol: Tolerance,
) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for p in points.points() {
        let e = if p.r1 > fam.c1() {
            p.r1 - fam.c1()
        } else {
            let bound = if inner {
                fam.inner_r2(p.r1.max(0.0), tol)?
            } else {
                fam.outer_r2(p.r1.max(0.0), tol)?
            };
            p.r2 - bound
        };
        worst = worst.max(e);
    }
    Ok(worst)
}

pub fn compare_with_family(
    oracle: &OracleFrontiers,
    fam: &ParametricFamily,
    grid_size: usize,
    tol: Tolerance,
) -> Result<OracleComparison> {
    let inner = crate::regions::inner_boundary(fam, grid_size)?;
    let outer = crate::regions::outer_boundary(fam, grid_size)?;
    Ok(OracleComparison {
        inner_deviation: frontier_deviation(&oracle.inner, &inner)?,
        outer_deviation: frontier_deviation(&oracle.outer, &outer)?,
        inner_excess: excess_over(&oracle.inner, fam, true, tol)?,
        outer_excess: excess_over(&oracle.outer, fam, false, tol)?,
    })
}
