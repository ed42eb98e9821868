//! Discrete memoryless channels, mutual information and channel ordering.
//!
//! A [`DiscreteChannel`] is a row-stochastic transition matrix. The JSON form
//! is `{"input_size": .., "output_size": .., "rows": [[..], ..]}` and is
//! validated on deserialization.
//!
//! For the binary erasure channel the output alphabet is ordered
//! `(0, 1, erasure)`. Note that for a BEC the identity
//! `I(X; Y1) = (1 - tau) H(X)` holds for every input law; the factor is
//! `1 - tau`, not `tau`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::numerics::{LogBase, Tolerance};

const STOCHASTIC_TOL: f64 = 1e-12;

fn check_distribution(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what} is empty")));
    }
    if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::InvalidDistribution(format!(
            "{what} has entry {v} outside [0, 1]"
        )));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > STOCHASTIC_TOL {
        return Err(Error::InvalidDistribution(format!(
            "{what} sums to {sum}, not 1"
        )));
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct RawChannel {
    input_size: usize,
    output_size: usize,
    rows: Vec<Vec<f64>>,
}

/// Row-stochastic transition matrix `P(y | x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannel")]
pub struct DiscreteChannel {
    input_size: usize,
    output_size: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<RawChannel> for DiscreteChannel {
    type Error = Error;

    fn try_from(raw: RawChannel) -> Result<Self> {
        let ch = DiscreteChannel::new(raw.rows)?;
        if ch.input_size != raw.input_size || ch.output_size != raw.output_size {
            return Err(Error::Dimension(format!(
                "declared {}x{} but rows are {}x{}",
                raw.input_size, raw.output_size, ch.input_size, ch.output_size
            )));
        }
        Ok(ch)
    }
}

impl DiscreteChannel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let input_size = rows.len();
        if input_size == 0 {
            return Err(Error::Dimension("channel has no inputs".into()));
        }
        let output_size = rows[0].len();
        for (x, row) in rows.iter().enumerate() {
            if row.len() != output_size {
                return Err(Error::Dimension(format!(
                    "row {x} has {} outputs, expected {output_size}",
                    row.len()
                )));
            }
            check_distribution(row, &format!("row {x}"))?;
        }
        Ok(DiscreteChannel {
            input_size,
            output_size,
            rows,
        })
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn transition(&self, x: usize, y: usize) -> f64 {
        self.rows[x][y]
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Output law `P_Y` induced by the input law `px`. No validation.
    pub(crate) fn output_law(&self, px: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (row, &p) in self.rows.iter().zip(px) {
            if p == 0.0 {
                continue;
            }
            for (o, &w) in out.iter_mut().zip(row) {
                *o += p * w;
            }
        }
    }

    /// Entropy of each row, `H(Y | X = x)`.
    pub(crate) fn row_entropies(&self, base: LogBase) -> Vec<f64> {
        self.rows.iter().map(|r| base.entropy(r)).collect()
    }
}

/// Binary symmetric channel with crossover probability `p`.
pub fn make_bsc(p: f64) -> Result<DiscreteChannel> {
    if !(0.0..=0.5).contains(&p) {
        return Err(domain("p", p, "[0, 1/2]"));
    }
    DiscreteChannel::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
}

/// Binary erasure channel with erasure probability `tau`; outputs `(0, 1, e)`.
pub fn make_bec(tau: f64) -> Result<DiscreteChannel> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(domain("tau", tau, "[0, 1]"));
    }
    DiscreteChannel::new(vec![vec![1.0 - tau, 0.0, tau], vec![0.0, 1.0 - tau, tau]])
}

/// Marginal channels to User 1 (the stronger receiver) and User 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    ch1: DiscreteChannel,
    ch2: DiscreteChannel,
}

impl ChannelPair {
    pub fn new(ch1: DiscreteChannel, ch2: DiscreteChannel) -> Result<Self> {
        if ch1.input_size != ch2.input_size {
            return Err(Error::Dimension(format!(
                "input alphabets differ: {} vs {}",
                ch1.input_size, ch2.input_size
            )));
        }
        Ok(ChannelPair { ch1, ch2 })
    }

    pub fn ch1(&self) -> &DiscreteChannel {
        &self.ch1
    }

    pub fn ch2(&self) -> &DiscreteChannel {
        &self.ch2
    }

    pub fn input_size(&self) -> usize {
        self.ch1.input_size
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDistribution {
    probs: Vec<f64>,
}

impl InputDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_distribution(&probs, "input distribution")?;
        Ok(InputDistribution { probs })
    }

    pub fn uniform(size: usize) -> Self {
        InputDistribution {
            probs: vec![1.0 / size as f64; size],
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

#[derive(Debug, Deserialize)]
struct RawJoint {
    p_u: Vec<f64>,
    p_x_given_u: Vec<Vec<f64>>,
}

/// Joint law of the auxiliary `U` and the input `X`, as `P_U` and `P_{X|U}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJoint")]
pub struct AuxiliaryJoint {
    p_u: Vec<f64>,
    p_x_given_u: Vec<Vec<f64>>,
}

impl TryFrom<RawJoint> for AuxiliaryJoint {
    type Error = Error;

    fn try_from(raw: RawJoint) -> Result<Self> {
        AuxiliaryJoint::new(raw.p_u, raw.p_x_given_u)
    }
}

impl AuxiliaryJoint {
    pub fn new(p_u: Vec<f64>, p_x_given_u: Vec<Vec<f64>>) -> Result<Self> {
        check_distribution(&p_u, "P_U")?;
        if p_x_given_u.len() != p_u.len() {
            return Err(Error::Dimension(format!(
                "P_U has {} entries but P_X|U has {} rows",
                p_u.len(),
                p_x_given_u.len()
            )));
        }
        let x_size = p_x_given_u[0].len();
        for (u, row) in p_x_given_u.iter().enumerate() {
            if row.len() != x_size {
                return Err(Error::Dimension(format!(
                    "row {u} of P_X|U has {} entries, expected {x_size}",
                    row.len()
                )));
            }
            check_distribution(row, &format!("P_X|U={u}"))?;
        }
        Ok(AuxiliaryJoint { p_u, p_x_given_u })
    }

    /// `U ~ Bernoulli(1/2)` and `P_{X|U}` a BSC(`q`).
    pub fn symmetric_binary(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(domain("q", q, "[0, 1]"));
        }
        AuxiliaryJoint::new(vec![0.5, 0.5], vec![vec![1.0 - q, q], vec![q, 1.0 - q]])
    }

    pub fn u_size(&self) -> usize {
        self.p_u.len()
    }

    pub fn x_size(&self) -> usize {
        self.p_x_given_u[0].len()
    }

    pub fn p_u(&self) -> &[f64] {
        &self.p_u
    }

    pub fn p_x_given_u(&self) -> &[Vec<f64>] {
        &self.p_x_given_u
    }

    /// The input law `P_X` induced by the joint.
    pub fn input_law(&self) -> InputDistribution {
        let mut px = vec![0.0; self.x_size()];
        for (pu, row) in self.p_u.iter().zip(&self.p_x_given_u) {
            for (acc, &p) in px.iter_mut().zip(row) {
                *acc += pu * p;
            }
        }
        InputDistribution { probs: px }
    }
}

pub(crate) fn mutual_information_raw(px: &[f64], ch: &DiscreteChannel, base: LogBase) -> f64 {
    let mut py = vec![0.0; ch.output_size];
    ch.output_law(px, &mut py);
    let h_y = base.entropy(&py);
    let h_y_x: f64 = px
        .iter()
        .zip(&ch.rows)
        .map(|(&p, row)| if p == 0.0 { 0.0 } else { p * base.entropy(row) })
        .sum();
    (h_y - h_y_x).max(0.0)
}

/// `I(X; Y)` for input law `px` through `ch`.
pub fn mutual_information(
    px: &InputDistribution,
    ch: &DiscreteChannel,
    base: LogBase,
) -> Result<f64> {
    if px.probs.len() != ch.input_size {
        return Err(Error::Dimension(format!(
            "input law has {} entries, channel has {} inputs",
            px.probs.len(),
            ch.input_size
        )));
    }
    Ok(mutual_information_raw(&px.probs, ch, base))
}

/// Channel capacity by Blahut-Arimoto.
///
/// Iterates until the certified gap `max_x D(W(.|x) || q) - I` is at most
/// `tol.abs_tol` and returns the lower bound together with the input law
/// that attains it.
pub fn capacity(
    ch: &DiscreteChannel,
    tol: Tolerance,
    base: LogBase,
) -> Result<(f64, InputDistribution)> {
    let nx = ch.input_size;
    let mut px = vec![1.0 / nx as f64; nx];
    let mut py = vec![0.0; ch.output_size];
    let mut div = vec![0.0; nx];
    // gap is computed in nats
    let abs_tol_nats = tol.abs_tol * base.ln_base();

    for _ in 0..tol.max_iters {
        ch.output_law(&px, &mut py);
        for (d, row) in div.iter_mut().zip(&ch.rows) {
            *d = row
                .iter()
                .zip(&py)
                .filter(|(&w, _)| w > 0.0)
                .map(|(&w, &q)| w * (w / q).ln())
                .sum();
        }
        let lower: f64 = px.iter().zip(&div).map(|(p, d)| p * d).sum();
        let upper = div.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if upper - lower <= abs_tol_nats {
            let c = lower.max(0.0) / base.ln_base();
            return Ok((c, InputDistribution { probs: px }));
        }
        let dmax = upper;
        let mut z = 0.0;
        for (p, d) in px.iter_mut().zip(&div) {
            *p *= (d - dmax).exp();
            z += *p;
        }
        px.iter_mut().for_each(|p| *p /= z);
    }
    Err(Error::IterationLimit {
        routine: "blahut_arimoto",
        max_iters: tol.max_iters,
    })
}

/// The three informations entering the superposition bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxInformations {
    /// `I(X; Y1 | U)`
    pub x_y1_given_u: f64,
    /// `I(U; Y2)`
    pub u_y2: f64,
    /// `I(X; Y1)`
    pub x_y1: f64,
}

pub fn conditional_informations(
    joint: &AuxiliaryJoint,
    pair: &ChannelPair,
    base: LogBase,
) -> Result<AuxInformations> {
    if joint.x_size() != pair.input_size() {
        return Err(Error::Dimension(format!(
            "P_X|U has {} inputs, channels have {}",
            joint.x_size(),
            pair.input_size()
        )));
    }
    let (ch1, ch2) = (&pair.ch1, &pair.ch2);

    let mut x_y1_given_u = 0.0;
    let mut h_y2_given_u = 0.0;
    let mut py2 = vec![0.0; ch2.output_size];
    let mut py2_u = vec![0.0; ch2.output_size];
    for (&pu, row) in joint.p_u.iter().zip(&joint.p_x_given_u) {
        if pu == 0.0 {
            continue;
        }
        x_y1_given_u += pu * mutual_information_raw(row, ch1, base);
        ch2.output_law(row, &mut py2_u);
        h_y2_given_u += pu * base.entropy(&py2_u);
        for (acc, &p) in py2.iter_mut().zip(&py2_u) {
            *acc += pu * p;
        }
    }
    let u_y2 = (base.entropy(&py2) - h_y2_given_u).max(0.0);
    let x_y1 = mutual_information_raw(&joint.input_law().probs, ch1, base);
    Ok(AuxInformations {
        x_y1_given_u,
        u_y2,
        x_y1,
    })
}

/// Settings for the numerical more-capable test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoreCapableCheck {
    /// Grid intervals along `P_X(0)` for binary inputs; lattice steps per
    /// coordinate (capped at 100) for larger input alphabets.
    pub resolution: usize,
    /// Dirichlet(1, .., 1) samples added for input alphabets of size >= 3.
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for MoreCapableCheck {
    fn default() -> Self {
        MoreCapableCheck {
            resolution: 10_000,
            random_samples: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MoreCapableVerdict {
    Holds,
    Violated { witness: InputDistribution },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoreCapableReport {
    pub verdict: MoreCapableVerdict,
    /// Smallest observed `I(X; Y1) - I(X; Y2)`.
    pub min_gap: f64,
    /// Input law at which `min_gap` was observed.
    pub argmin: InputDistribution,
    pub points_tested: usize,
}

impl MoreCapableReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, MoreCapableVerdict::Holds)
    }
}

/// Numerical check of `I(X; Y1) >= I(X; Y2)` for all input laws.
///
/// The verdict is numerical evidence over the tested points, not a proof.
pub fn is_more_capable(
    pair: &ChannelPair,
    check: &MoreCapableCheck,
    base: LogBase,
    tol: Tolerance,
) -> Result<MoreCapableReport> {
    if check.resolution == 0 {
        return Err(domain("resolution", 0.0, "[1, inf)"));
    }
    let gap = |px: &[f64]| {
        mutual_information_raw(px, &pair.ch1, base) - mutual_information_raw(px, &pair.ch2, base)
    };

    let (min_gap, argmin, points_tested) = if pair.input_size() == 1 {
        (0.0, vec![1.0], 1)
    } else if pair.input_size() == 2 {
        scan_binary(&gap, check.resolution)
    } else {
        scan_simplex(&gap, pair.input_size(), check)
    };

    let argmin = InputDistribution { probs: argmin };
    let verdict = if min_gap >= -tol.abs_tol {
        MoreCapableVerdict::Holds
    } else {
        MoreCapableVerdict::Violated {
            witness: argmin.clone(),
        }
    };
    Ok(MoreCapableReport {
        verdict,
        min_gap,
        argmin,
        points_tested,
    })
}

fn scan_binary<G>(gap: &G, resolution: usize) -> (f64, Vec<f64>, usize)
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    let at = |p: f64| gap(&[p, 1.0 - p]);
    let (best_i, best) = (0..=resolution)
        .into_par_iter()
        .map(|i| (i, at(i as f64 / resolution as f64)))
        .reduce(
            || (usize::MAX, f64::INFINITY),
            |a, b| {
                if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );

    // golden-section refinement on the neighbouring cells
    let step = 1.0 / resolution as f64;
    let mut lo = (best_i as f64 * step - step).max(0.0);
    let mut hi = (best_i as f64 * step + step).min(1.0);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (at(a), at(b));
    for _ in 0..80 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = at(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = at(b);
        }
    }
    let (p_ref, g_ref) = if fa < fb { (a, fa) } else { (b, fb) };
    let tested = resolution + 1 + 82;
    if g_ref < best {
        (g_ref, vec![p_ref, 1.0 - p_ref], tested)
    } else {
        let p = best_i as f64 * step;
        (best, vec![p, 1.0 - p], tested)
    }
}

fn scan_simplex<G>(gap: &G, size: usize, check: &MoreCapableCheck) -> (f64, Vec<f64>, usize)
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    let steps = check.resolution.min(100);
    let lattice: Vec<Vec<f64>> = crate::oracle::compositions(steps, size)
        .into_iter()
        .map(|c| c.iter().map(|&k| k as f64 / steps as f64).collect())
        .collect();
    let n_lattice = lattice.len();

    let lattice_best = lattice
        .into_par_iter()
        .map(|p| (gap(&p), p))
        .min_by(|a, b| a.0.total_cmp(&b.0));

    let random_best = (0..check.random_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(check.seed);
            rng.set_stream(i as u64);
            let mut p: Vec<f64> = (0..size).map(|_| Exp1.sample(&mut rng)).collect();
            let z: f64 = p.iter().sum();
            p.iter_mut().for_each(|v| *v /= z);
            (gap(&p), p)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0));

    let best = match (lattice_best, random_best) {
        (Some(a), Some(b)) => {
            if b.0 < a.0 {
                b
            } else {
                a
            }
        }
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => (0.0, vec![1.0 / size as f64; size]),
    };
    (best.0, best.1, n_lattice + check.random_samples)
}
