//! Monte Carlo simulation of superposition coding with decode-and-forward
//! cooperation.
//!
//! Cloud centers `u^n(m2)` carry User 2's message; satellites `x^n(m1, m2)`
//! are drawn around them. User 1 decodes both messages by exhaustive maximum
//! likelihood and forwards the bin index of its estimate of `m2` over the
//! cooperation link. User 2 then decodes `m2` by maximum likelihood among the
//! messages of that bin, where the likelihood of `m2` averages the channel law
//! over the satellites of cloud `m2`. Both decoders break ties uniformly at
//! random.
//!
//! Messages, bins and the codebook are counted in bits of rate:
//! `nu = ceil(2^{n r})` messages and `ceil(2^{n C12})` bins.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::AuxiliaryJoint;
use crate::error::{domain, Error, Result};
use crate::numerics::LogBase;

pub const DEFAULT_CODEBOOK_BUDGET: u64 = 1 << 16;
/// Binary codewords are packed into one `u64`.
pub const MAX_BLOCKLENGTH: usize = 64;

/// Stream reserved for codebook generation; trial `t` uses stream `t + 1`.
const CODEBOOK_STREAM: u64 = 0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputLaw {
    /// Cloud law `P_U` and satellite law `P_{X|U}`; `X` must be binary.
    Discrete(AuxiliaryJoint),
    /// Cloud power `1 - alpha`, satellite innovation power `alpha`.
    Gaussian { alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimChannel {
    /// BEC(`tau1`) to User 1 and BSC(`p2`) to User 2.
    BecBsc { tau1: f64, p2: f64 },
    /// `Y_k = sqrt(s_k) X + Z_k` with unit-variance noise.
    Gaussian { s1: f64, s2: f64 },
}

impl SimChannel {
    /// Range checks only; any erasure and crossover probability is accepted.
    pub fn validate(&self) -> Result<()> {
        match *self {
            SimChannel::BecBsc { tau1, p2 } => {
                if !(0.0..=1.0).contains(&tau1) {
                    return Err(domain("tau1", tau1, "[0, 1]"));
                }
                if !(0.0..=1.0).contains(&p2) {
                    return Err(domain("p2", p2, "[0, 1]"));
                }
            }
            SimChannel::Gaussian { s1, s2 } => {
                if !(s1 >= 0.0 && s1.is_finite()) {
                    return Err(domain("s1", s1, "[0, inf)"));
                }
                if !(s2 >= 0.0 && s2.is_finite()) {
                    return Err(domain("s2", s2, "[0, inf)"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeConfig {
    pub n: usize,
    pub r1: f64,
    pub r2: f64,
    pub c12: f64,
    pub input_law: InputLaw,
    pub seed: u64,
    /// Largest allowed `nu1 * nu2`.
    pub budget: u64,
    /// Base the rates are expressed in.
    pub base: LogBase,
}

/// `ceil(2^{n r})`, ignoring a relative excess below 1e-9 from rounding.
fn message_count(n: usize, rate_bits: f64) -> f64 {
    let x = (n as f64 * rate_bits).exp2();
    (x * (1.0 - 1e-12) - 1e-9).ceil().max(1.0)
}

impl CodeConfig {
    pub fn new(
        n: usize,
        r1: f64,
        r2: f64,
        c12: f64,
        input_law: InputLaw,
        seed: u64,
    ) -> Result<Self> {
        let cfg = CodeConfig {
            n,
            r1,
            r2,
            c12,
            input_law,
            seed,
            budget: DEFAULT_CODEBOOK_BUDGET,
            base: LogBase::Bits,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_budget(mut self, budget: u64) -> Result<Self> {
        self.budget = budget;
        self.validate()?;
        Ok(self)
    }

    pub fn with_base(mut self, base: LogBase) -> Result<Self> {
        self.base = base;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_BLOCKLENGTH).contains(&self.n) {
            return Err(domain("n", self.n as f64, "[1, 64]"));
        }
        for (name, r) in [("r1", self.r1), ("r2", self.r2), ("c12", self.c12)] {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(domain(name, r, "[0, inf)"));
            }
        }
        match &self.input_law {
            InputLaw::Discrete(j) => {
                if j.u_size() > 256 {
                    return Err(Error::Dimension(format!(
                        "cloud alphabet of size {} exceeds 256",
                        j.u_size()
                    )));
                }
            }
            InputLaw::Gaussian { alpha } => {
                if !(0.0..=1.0).contains(alpha) {
                    return Err(domain("alpha", *alpha, "[0, 1]"));
                }
            }
        }
        let total = self.count(self.r1) * self.count(self.r2);
        if total > self.budget as f64 {
            return Err(Error::Budget(format!(
                "codebook of {total} codewords exceeds the budget of {}",
                self.budget
            )));
        }
        Ok(())
    }

    fn count(&self, rate: f64) -> f64 {
        message_count(self.n, rate / self.base.bit())
    }

    /// Number of User 1 messages `nu1`.
    pub fn nu1(&self) -> usize {
        self.count(self.r1) as usize
    }

    /// Number of User 2 messages `nu2`.
    pub fn nu2(&self) -> usize {
        self.count(self.r2) as usize
    }

    /// Number of cooperation messages, capped at `nu2`.
    pub fn bin_count(&self) -> usize {
        let bins = self.count(self.c12);
        (bins.min(self.nu2() as f64)) as usize
    }

    /// Messages per bin, the smallest size that lets the bins cover all of `nu2`.
    pub fn bin_size(&self) -> usize {
        self.nu2().div_ceil(self.bin_count())
    }
}

/// Bin index of every User 2 message, in message order.
pub fn bin_assignment(cfg: &CodeConfig) -> Vec<usize> {
    let size = cfg.bin_size();
    (0..cfg.nu2()).map(|m| m / size).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Codebook {
    /// Cloud symbols per letter; satellites bit-packed, letter `i` in bit `i`.
    Binary {
        n: usize,
        clouds: Vec<Vec<u8>>,
        satellites: Vec<Vec<u64>>,
    },
    Gaussian {
        n: usize,
        clouds: Vec<Vec<f64>>,
        satellites: Vec<Vec<Vec<f64>>>,
    },
}

impl Codebook {
    pub fn cloud_count(&self) -> usize {
        match self {
            Codebook::Binary { clouds, .. } => clouds.len(),
            Codebook::Gaussian { clouds, .. } => clouds.len(),
        }
    }

    pub fn satellites_per_cloud(&self) -> usize {
        match self {
            Codebook::Binary { satellites, .. } => satellites[0].len(),
            Codebook::Gaussian { satellites, .. } => satellites[0].len(),
        }
    }
}

/// Draws the codebook from the codebook stream of `cfg.seed`.
pub fn build_superposition_codebook(cfg: &CodeConfig) -> Result<Codebook> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(CODEBOOK_STREAM);
    let (n, nu1, nu2) = (cfg.n, cfg.nu1(), cfg.nu2());
    match &cfg.input_law {
        InputLaw::Discrete(j) => {
            if j.x_size() != 2 {
                return Err(Error::Dimension(format!(
                    "binary codebooks need |X| = 2, got {}",
                    j.x_size()
                )));
            }
            let cloud_law = WeightedIndex::new(j.p_u())
                .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
            let clouds: Vec<Vec<u8>> = (0..nu2)
                .map(|_| (0..n).map(|_| cloud_law.sample(&mut rng) as u8).collect())
                .collect();
            let p_one: Vec<f64> = j.p_x_given_u().iter().map(|row| row[1]).collect();
            let satellites = clouds
                .iter()
                .map(|u| {
                    (0..nu1)
                        .map(|_| {
                            u.iter().enumerate().fold(0u64, |acc, (i, &s)| {
                                let bit = rng.random::<f64>() < p_one[s as usize];
                                acc | (u64::from(bit) << i)
                            })
                        })
                        .collect()
                })
                .collect();
            Ok(Codebook::Binary {
                n,
                clouds,
                satellites,
            })
        }
        InputLaw::Gaussian { alpha } => {
            let (cloud_amp, sat_amp) = ((1.0 - alpha).sqrt(), alpha.sqrt());
            let normal = |rng: &mut ChaCha8Rng| -> f64 { rng.sample(StandardNormal) };
            let clouds: Vec<Vec<f64>> = (0..nu2)
                .map(|_| (0..n).map(|_| cloud_amp * normal(&mut rng)).collect())
                .collect();
            let satellites = clouds
                .iter()
                .map(|u| {
                    (0..nu1)
                        .map(|_| u.iter().map(|&c| c + sat_amp * normal(&mut rng)).collect())
                        .collect()
                })
                .collect();
            Ok(Codebook::Gaussian {
                n,
                clouds,
                satellites,
            })
        }
    }
}

/// Error counts over independent trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub trials: u64,
    /// Trials where User 1's estimate of `(m1, m2)` is wrong.
    pub user1_joint_errors: u64,
    /// Trials where User 2's estimate of `m2` is wrong.
    pub user2_errors: u64,
    /// Trials where either user decodes its own message wrongly.
    pub total_errors: u64,
    /// `total_errors / trials`.
    pub p_e_estimate: f64,
    /// Normal-approximation 95% half-width of `p_e_estimate`.
    pub half_width_95: f64,
}

impl SimReport {
    fn from_counts(trials: u64, e1: u64, e2: u64, total: u64) -> Self {
        let p = total as f64 / trials as f64;
        SimReport {
            trials,
            user1_joint_errors: e1,
            user2_errors: e2,
            total_errors: total,
            p_e_estimate: p,
            half_width_95: binomial_half_width(p, trials),
        }
    }

    pub fn user2_rate(&self) -> f64 {
        self.user2_errors as f64 / self.trials as f64
    }

    pub fn user2_half_width(&self) -> f64 {
        binomial_half_width(self.user2_rate(), self.trials)
    }
}

pub fn binomial_half_width(p: f64, trials: u64) -> f64 {
    1.96 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Uniform choice among tied maximizers, one candidate at a time.
struct TieBreak {
    best: f64,
    index: usize,
    ties: u64,
}

impl TieBreak {
    fn new() -> Self {
        TieBreak {
            best: f64::NEG_INFINITY,
            index: 0,
            ties: 0,
        }
    }

    fn offer(&mut self, score: f64, index: usize, rng: &mut ChaCha8Rng) {
        if score > self.best || self.ties == 0 {
            self.best = score;
            self.index = index;
            self.ties = 1;
        } else if score == self.best {
            self.ties += 1;
            if rng.random_range(0..self.ties) == 0 {
                self.index = index;
            }
        }
    }
}

struct TrialOutcome {
    user1: bool,
    user2: bool,
    total: bool,
}

/// `ln sum_i exp(v_i)` over a nonempty slice; `-inf` if every term is.
fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// `ln P(y | x)` for a BSC(`p`) at Hamming distance `d` over `n` letters.
fn bsc_loglik(d: u32, n: usize, p: f64) -> f64 {
    let agree = (n as u32 - d) as f64;
    let term = |k: f64, q: f64| if k == 0.0 { 0.0 } else { k * q.ln() };
    term(d as f64, p) + term(agree, 1.0 - p)
}

struct Simulator<'a> {
    cfg: &'a CodeConfig,
    book: Codebook,
    channel: SimChannel,
    bins: Vec<usize>,
}

impl<'a> Simulator<'a> {
    fn new(cfg: &'a CodeConfig, channel: SimChannel) -> Result<Self> {
        channel.validate()?;
        match (&cfg.input_law, channel) {
            (InputLaw::Discrete(_), SimChannel::BecBsc { .. })
            | (InputLaw::Gaussian { .. }, SimChannel::Gaussian { .. }) => {}
            _ => return Err(Error::Precondition(
                "discrete input laws need the becbsc channel and power splits the gaussian channel"
                    .into(),
            )),
        }
        Ok(Simulator {
            cfg,
            book: build_superposition_codebook(cfg)?,
            channel,
            bins: bin_assignment(cfg),
        })
    }

    fn trial(&self, t: u64) -> TrialOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(t + 1);
        let nu1 = self.book.satellites_per_cloud();
        let nu2 = self.book.cloud_count();
        let m1 = rng.random_range(0..nu1);
        let m2 = rng.random_range(0..nu2);
        let mut scratch = vec![0.0; nu1];
        let (d1, d2) = match (&self.book, self.channel) {
            (Codebook::Binary { n, satellites, .. }, SimChannel::BecBsc { tau1, p2 }) => {
                let x = satellites[m2][m1];
                let mut seen = 0u64;
                let mut flips = 0u64;
                for i in 0..*n {
                    if rng.random::<f64>() >= tau1 {
                        seen |= 1 << i;
                    }
                    if rng.random::<f64>() < p2 {
                        flips |= 1 << i;
                    }
                }
                let y2 = x ^ flips;

                // BEC: every codeword consistent with the unerased letters is
                // equally likely.
                let mut pick = TieBreak::new();
                for (c, sats) in satellites.iter().enumerate() {
                    for (s, &w) in sats.iter().enumerate() {
                        if (w ^ x) & seen == 0 {
                            pick.offer(0.0, c * nu1 + s, &mut rng);
                        }
                    }
                }
                let d1 = (pick.index % nu1, pick.index / nu1);

                let bin = self.bins[d1.1];
                let mut pick = TieBreak::new();
                for c in (0..nu2).filter(|&c| self.bins[c] == bin) {
                    for (v, &w) in scratch.iter_mut().zip(&satellites[c]) {
                        *v = bsc_loglik((w ^ y2).count_ones(), *n, p2);
                    }
                    pick.offer(log_sum_exp(&scratch), c, &mut rng);
                }
                (d1, pick.index)
            }
            (Codebook::Gaussian { satellites, .. }, SimChannel::Gaussian { s1, s2 }) => {
                let x = &satellites[m2][m1];
                let (a1, a2) = (s1.sqrt(), s2.sqrt());
                let y1: Vec<f64> = x
                    .iter()
                    .map(|&v| a1 * v + rng.sample::<f64, _>(StandardNormal))
                    .collect();
                let y2: Vec<f64> = x
                    .iter()
                    .map(|&v| a2 * v + rng.sample::<f64, _>(StandardNormal))
                    .collect();
                let loglik = |y: &[f64], a: f64, w: &[f64]| -> f64 {
                    -0.5 * y
                        .iter()
                        .zip(w)
                        .map(|(&y, &w)| (y - a * w).powi(2))
                        .sum::<f64>()
                };
                let mut pick = TieBreak::new();
                for (c, sats) in satellites.iter().enumerate() {
                    for (s, w) in sats.iter().enumerate() {
                        pick.offer(loglik(&y1, a1, w), c * nu1 + s, &mut rng);
                    }
                }
                let d1 = (pick.index % nu1, pick.index / nu1);

                let bin = self.bins[d1.1];
                let mut pick = TieBreak::new();
                for c in (0..nu2).filter(|&c| self.bins[c] == bin) {
                    for (v, w) in scratch.iter_mut().zip(&satellites[c]) {
                        *v = loglik(&y2, a2, w);
                    }
                    pick.offer(log_sum_exp(&scratch), c, &mut rng);
                }
                (d1, pick.index)
            }
            _ => unreachable!("codebook and channel checked at construction"),
        };
        let user1 = d1 != (m1, m2);
        let user2 = d2 != m2;
        TrialOutcome {
            user1,
            user2,
            total: d1.0 != m1 || user2,
        }
    }
}

/// Runs `trials` independent trials; trial `t` draws everything from stream
/// `t + 1` of `cfg.seed`, so the report does not depend on thread count.
pub fn simulate(cfg: &CodeConfig, channel: SimChannel, trials: u64) -> Result<SimReport> {
    if trials == 0 {
        return Err(domain("trials", 0.0, "[1, inf)"));
    }
    let sim = Simulator::new(cfg, channel)?;
    let (e1, e2, total) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let o = sim.trial(t);
            (u64::from(o.user1), u64::from(o.user2), u64::from(o.total))
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(SimReport::from_counts(trials, e1, e2, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(q: f64) -> InputLaw {
        InputLaw::Discrete(AuxiliaryJoint::symmetric_binary(q).unwrap())
    }

    fn cfg(n: usize, r1: f64, r2: f64, c12: f64, law: InputLaw) -> CodeConfig {
        CodeConfig::new(n, r1, r2, c12, law, 7).unwrap()
    }

    #[test]
    fn codebook_counts() {
        let c = cfg(8, 0.0, 0.0, 0.0, sym(0.2));
        let book = build_superposition_codebook(&c).unwrap();
        assert_eq!((book.cloud_count(), book.satellites_per_cloud()), (1, 1));
        let c = cfg(8, 0.25, 0.25, 0.0, sym(0.2));
        let book = build_superposition_codebook(&c).unwrap();
        assert_eq!((book.cloud_count(), book.satellites_per_cloud()), (4, 4));
        let g = cfg(8, 0.25, 0.25, 0.0, InputLaw::Gaussian { alpha: 0.3 });
        let book = build_superposition_codebook(&g).unwrap();
        assert_eq!((book.cloud_count(), book.satellites_per_cloud()), (4, 4));
    }

    #[test]
    fn budget_and_ranges() {
        assert!(matches!(
            CodeConfig::new(16, 1.0, 0.5, 0.0, sym(0.1), 0),
            Err(Error::Budget(_))
        ));
        assert!(CodeConfig::new(16, 1.0, 0.5, 0.0, sym(0.1), 0)
            .is_err_and(|e| e.to_string().contains("budget")));
        let c = cfg(16, 0.5, 0.5, 0.0, sym(0.1));
        assert!(c.clone().with_budget(1 << 15).is_err());
        assert!(CodeConfig::new(0, 0.1, 0.1, 0.0, sym(0.1), 0).is_err());
        assert!(CodeConfig::new(65, 0.0, 0.0, 0.0, sym(0.1), 0).is_err());
        assert!(CodeConfig::new(8, -0.1, 0.1, 0.0, sym(0.1), 0).is_err());
        assert!(CodeConfig::new(8, 0.1, 0.1, 0.0, InputLaw::Gaussian { alpha: 1.5 }, 0).is_err());
        assert!(simulate(&c, SimChannel::BecBsc { tau1: 0.1, p2: 0.2 }, 0).is_err());
        assert!(simulate(&c, SimChannel::Gaussian { s1: 5.0, s2: 0.5 }, 10).is_err());
        assert!(simulate(&c, SimChannel::BecBsc { tau1: 1.1, p2: 0.2 }, 10).is_err());
    }

    #[test]
    fn bin_examples() {
        let b = bin_assignment(&cfg(8, 0.25, 0.5, 0.25, sym(0.1)));
        assert_eq!(b, vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3]);
        let b = bin_assignment(&cfg(8, 0.25, 0.5, 0.5, sym(0.1)));
        assert_eq!(b, (0..16).collect::<Vec<_>>());
        let b = bin_assignment(&cfg(8, 0.25, 0.5, 0.75, sym(0.1)));
        assert_eq!(b, (0..16).collect::<Vec<_>>());
        let b = bin_assignment(&cfg(8, 0.25, 0.5, 0.0, sym(0.1)));
        assert_eq!(b, vec![0; 16]);
        // 6 messages in ceil(2^{1.6}) = 4 bins of 2, last one empty
        let c = cfg(8, 0.0, 0.3, 0.2, sym(0.1));
        assert_eq!(c.nu2(), 6);
        assert_eq!(bin_assignment(&c), vec![0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn satellites_scatter_around_clouds() {
        let c = CodeConfig::new(64, 0.1, 0.1, 0.0, sym(0.11), 3).unwrap();
        let Codebook::Binary {
            clouds, satellites, ..
        } = build_superposition_codebook(&c).unwrap()
        else {
            unreachable!()
        };
        let mut flips = 0u64;
        let mut letters = 0u64;
        for (u, sats) in clouds.iter().zip(&satellites) {
            let packed = u
                .iter()
                .enumerate()
                .fold(0u64, |a, (i, &s)| a | (u64::from(s) << i));
            for &x in sats {
                flips += u64::from((x ^ packed).count_ones());
                letters += 64;
            }
        }
        let frac = flips as f64 / letters as f64;
        let sigma = (0.11 * 0.89 / letters as f64).sqrt();
        assert!((frac - 0.11).abs() < 3.0 * sigma, "{frac}");
    }

    #[test]
    fn noiseless_channels_never_err() {
        let c = cfg(32, 0.125, 0.125, 0.05, sym(0.5));
        let Codebook::Binary { satellites, .. } = build_superposition_codebook(&c).unwrap() else {
            unreachable!()
        };
        let mut words: Vec<u64> = satellites.concat();
        words.sort_unstable();
        words.dedup();
        assert_eq!(words.len(), 256);
        let r = simulate(&c, SimChannel::BecBsc { tau1: 0.0, p2: 0.0 }, 2000).unwrap();
        assert_eq!(r.total_errors, 0);
        assert_eq!(r.p_e_estimate, 0.0);
        let g = cfg(16, 0.3, 0.3, 0.1, InputLaw::Gaussian { alpha: 0.5 });
        let r = simulate(&g, SimChannel::Gaussian { s1: 1e6, s2: 1e6 }, 2000).unwrap();
        assert_eq!(r.total_errors, 0);
    }

    #[test]
    fn reports_are_reproducible_and_thread_independent() {
        let c = cfg(12, 0.4, 0.2, 0.2, sym(0.1));
        let ch = SimChannel::BecBsc { tau1: 0.1, p2: 0.2 };
        let a = simulate(&c, ch, 3000).unwrap();
        let b = simulate(&c, ch, 3000).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| simulate(&c, ch, 3000).unwrap());
        assert_eq!(a, serial);
        let other = simulate(&CodeConfig { seed: 8, ..c }, ch, 3000).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn correct_relay_keeps_truth_in_user2_candidates() {
        let c = cfg(10, 0.3, 0.6, 0.3, sym(0.15));
        let sim = Simulator::new(&c, SimChannel::BecBsc { tau1: 0.2, p2: 0.5 }).unwrap();
        let size = c.bin_size();
        for t in 0..2000 {
            let o = sim.trial(t);
            // with useless Y2 the only errors User 2 avoids are those the bin rules out
            if !o.user1 && size == 1 {
                assert!(!o.user2);
            }
        }
        let c = cfg(10, 0.3, 0.6, 0.6, sym(0.15));
        let sim = Simulator::new(&c, SimChannel::BecBsc { tau1: 0.2, p2: 0.5 }).unwrap();
        for t in 0..2000 {
            let o = sim.trial(t);
            assert!(o.user1 || !o.user2);
        }
    }

    #[test]
    fn useless_second_channel_leaves_bin_ambiguity() {
        let c = cfg(16, 0.0, 0.5, 0.25, sym(0.5));
        let size = c.bin_size() as f64;
        assert_eq!(size, 16.0);
        let r = simulate(&c, SimChannel::BecBsc { tau1: 0.0, p2: 0.5 }, 10_000).unwrap();
        let expected = 1.0 - 1.0 / size;
        let sigma = (expected * (1.0 - expected) / 10_000.0).sqrt();
        assert!(
            (r.user2_rate() - expected).abs() < 3.0 * sigma,
            "{}",
            r.user2_rate()
        );
    }

    #[test]
    fn cooperation_does_not_hurt() {
        let ch = SimChannel::BecBsc { tau1: 0.1, p2: 0.2 };
        for n in [8, 12] {
            let without = simulate(&cfg(n, 0.3, 0.25, 0.0, sym(0.1)), ch, 4000).unwrap();
            let with = simulate(&cfg(n, 0.3, 0.25, 0.2, sym(0.1)), ch, 4000).unwrap();
            assert!(
                with.p_e_estimate
                    <= without.p_e_estimate + 2.0 * with.half_width_95.max(without.half_width_95),
                "n={n}: {with:?} vs {without:?}"
            );
        }
    }

    #[test]
    fn gaussian_simulation_runs() {
        let g = cfg(12, 0.5, 0.25, 0.25, InputLaw::Gaussian { alpha: 0.25 });
        let r = simulate(&g, SimChannel::Gaussian { s1: 5.0, s2: 0.5 }, 2000).unwrap();
        assert!(r.total_errors <= r.trials);
        assert!(r.p_e_estimate < 0.5);
    }
}
