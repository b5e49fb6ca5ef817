//! Seeded Monte Carlo estimation of a strategy's expected payoff.
//!
//! Trials are split into fixed blocks of [`BLOCK_TRIALS`]. Block `b` draws
//! from substream `b` of the configured seed (see [`crate::rng`]), and each
//! trial consumes the stream in a fixed order: base amount, envelope pick,
//! then one uniform for the switch decision (always drawn, even when the
//! switch probability is 0 or 1). Block results are merged in a fixed
//! binary tree, so the reported numbers do not depend on the worker count.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amount::Amount;
use crate::error::{Error, Result};
use crate::rng;
use crate::stats::Moments;
use crate::strategy::{switch_probability, PriorKnowledge, StrategySpec};
use crate::world::{BaseDraw, EnvelopeMode, EnvelopePick, Sampler};
use crate::prior::SamplerSpec;

pub const BLOCK_TRIALS: u64 = 4096;

/// Normal quantile used for the reported interval.
pub const CI95_Z: f64 = 1.96;

/// Excess kurtosis above which a confidence interval should not be trusted.
pub const HEAVY_TAIL_KURTOSIS: f64 = 20.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: u64,
    pub seed: u64,
    pub sampler: SamplerSpec,
    pub strategy: StrategySpec,
    #[serde(default)]
    pub knowledge: PriorKnowledge,
    #[serde(default)]
    pub envelope_mode: EnvelopeMode,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        self.sampler.validate()?;
        self.strategy.validate()?;
        self.strategy.check_requirements(self.envelope_mode, &self.knowledge)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub mean: f64,
    pub stderr: f64,
    pub ci95_low: f64,
    pub ci95_high: f64,
    pub trials: u64,
    pub excess_kurtosis: f64,
}

impl SimResult {
    fn from_moments(m: &Moments) -> Self {
        let mean = m.sum_mean();
        let stderr = (m.sample_variance() / m.count as f64).sqrt();
        Self {
            mean,
            stderr,
            ci95_low: mean - CI95_Z * stderr,
            ci95_high: mean + CI95_Z * stderr,
            trials: m.count,
            excess_kurtosis: m.excess_kurtosis(),
        }
    }

    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn within(&self, value: f64, k: f64) -> bool {
        (self.mean - value).abs() <= k * self.stderr
    }

    pub fn is_heavy_tailed(&self) -> bool {
        self.excess_kurtosis > HEAVY_TAIL_KURTOSIS
    }
}

/// Precomputed payoffs for finite priors, or the live path for continuous
/// samplers.
enum Evaluator<'a> {
    /// Per atom, per pick: `(x, x', s)`.
    Table(Vec<[(f64, f64, f64); 2]>),
    Live { cfg: &'a SimConfig, constant: Option<f64> },
}

impl<'a> Evaluator<'a> {
    fn new(cfg: &'a SimConfig) -> Result<Self> {
        let constant = if cfg.strategy.is_oblivious() {
            let s = switch_probability(&cfg.strategy, &crate::world::Observation::Closed, &cfg.knowledge)?;
            Some(s.to_f64())
        } else {
            None
        };
        let SamplerSpec::Finite(prior) = &cfg.sampler else {
            return Ok(Self::Live { cfg, constant });
        };
        let table = prior
            .atoms()
            .iter()
            .map(|atom| {
                let y = &atom.value;
                let row = |x: &Amount, other: &Amount| -> Result<(f64, f64, f64)> {
                    let s = switch_probability(&cfg.strategy, &cfg.envelope_mode.observe(x), &cfg.knowledge)?;
                    Ok((x.to_f64(), other.to_f64(), s.to_f64()))
                };
                Ok([row(y, &y.double())?, row(&y.double(), y)?])
            })
            .collect::<Result<_>>()?;
        Ok(Self::Table(table))
    }

    fn trial<R: Rng + ?Sized>(&self, sampler: &Sampler, rng: &mut R) -> Result<f64> {
        let draw = sampler.draw_base(rng);
        let pick = EnvelopePick::draw(rng);
        let u: f64 = rng.random();
        let (x, other, s) = match (self, draw) {
            (Self::Table(table), BaseDraw::Atom(i)) => table[i][pick as usize],
            (Self::Live { constant: Some(s), .. }, BaseDraw::Real(y)) => match pick {
                EnvelopePick::Lower => (y, 2.0 * y, *s),
                EnvelopePick::Higher => (2.0 * y, y, *s),
            },
            (Self::Live { cfg, .. }, draw) => {
                let y = sampler.base_amount(draw);
                let x = match pick {
                    EnvelopePick::Lower => y.clone(),
                    EnvelopePick::Higher => y.double(),
                };
                let s = switch_probability(&cfg.strategy, &cfg.envelope_mode.observe(&x), &cfg.knowledge)?.to_f64();
                let y = y.to_f64();
                match pick {
                    EnvelopePick::Lower => (y, 2.0 * y, s),
                    EnvelopePick::Higher => (2.0 * y, y, s),
                }
            }
            (Self::Table(_), BaseDraw::Real(_)) => unreachable!("table built for a finite sampler"),
        };
        Ok(if u < s { other } else { x })
    }
}

fn run_block(cfg: &SimConfig, sampler: &Sampler, eval: &Evaluator<'_>, block: u64) -> Result<Moments> {
    let start = block * BLOCK_TRIALS;
    let len = BLOCK_TRIALS.min(cfg.trials - start) as usize;
    let mut stream = rng::substream(cfg.seed, block);
    let mut payoffs = Vec::with_capacity(len);
    for _ in 0..len {
        payoffs.push(eval.trial(sampler, &mut stream)?);
    }
    Ok(Moments::from_slice(&payoffs))
}

/// Single-worker simulation.
pub fn run_sim(cfg: &SimConfig) -> Result<SimResult> {
    run_sim_with_workers(cfg, 1)
}

/// Simulation spread across `workers` threads; the result is the same for
/// every worker count.
pub fn run_sim_with_workers(cfg: &SimConfig, workers: usize) -> Result<SimResult> {
    cfg.validate()?;
    if workers == 0 {
        return Err(Error::InvalidConfig("workers must be at least 1".into()));
    }
    let sampler = Sampler::new(&cfg.sampler)?;
    let eval = Evaluator::new(cfg)?;
    let blocks = cfg.trials.div_ceil(BLOCK_TRIALS);
    let parts: Vec<Moments> = if workers == 1 {
        (0..blocks).map(|b| run_block(cfg, &sampler, &eval, b)).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        pool.install(|| {
            (0..blocks)
                .into_par_iter()
                .map(|b| run_block(cfg, &sampler, &eval, b))
                .collect::<Result<_>>()
        })?
    };
    Ok(SimResult::from_moments(&Moments::merge_all(&parts)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloneResult {
    pub y: Amount,
    pub clones: u64,
    pub mean_x: f64,
    /// `2/3 · mean_x`
    pub implied_y: f64,
}

/// Plays `clones` copies of one game with the base amount fixed at `y` and
/// averages what the player sees.
pub fn run_clones(y: &Amount, clones: u64, seed: u64) -> Result<CloneResult> {
    if !y.is_positive() {
        return Err(Error::InvalidAmount("base amount must be strictly positive".into()));
    }
    if clones == 0 {
        return Err(Error::InvalidConfig("clones must be at least 1".into()));
    }
    let mut stream = rng::stream(seed);
    let higher = (0..clones)
        .filter(|_| EnvelopePick::draw(&mut stream) == EnvelopePick::Higher)
        .count() as u64;
    // Every observed value is y or 2y, so the average is exact.
    let total_units = num_rational::BigRational::new((clones + higher).into(), clones.into());
    let mean_x = crate::amount::rational_to_f64(&(y.as_rational() * total_units));
    Ok(CloneResult { y: y.clone(), clones, mean_x, implied_y: mean_x * 2.0 / 3.0 })
}
