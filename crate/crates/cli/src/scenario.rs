//! Scenario documents.
//!
//! ```json
//! {
//!   "prior": {"atoms": [{"value": "1", "prob": "1/2"}, {"value": "2", "prob": "1/2"}]},
//!   "strategy": {"kind": "mean_threshold"},
//!   "knowledge": {"kind": "full_prior", "prior": {"atoms": [...]}},
//!   "envelope_mode": "open",
//!   "engine": {"kind": "monte_carlo", "trials": 100000, "seed": 42}
//! }
//! ```
//!
//! `prior` is either a bare finite prior (`{"atoms": ...}`) or a tagged
//! sampler (`{"kind": "log_normal", ...}`). `strategies` (a list) may stand
//! in for `strategy`. `knowledge`, `envelope_mode` and `engine` default to
//! no information, an open envelope and the exact engine.

use std::path::Path;

use envelope_core::{
    EnvelopeMode, FiniteBasePrior, PriorKnowledge, SamplerSpec, SimConfig, StrategySpec,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Engine {
    #[default]
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub prior: SamplerSpec,
    pub strategies: Vec<StrategySpec>,
    pub knowledge: PriorKnowledge,
    pub envelope_mode: EnvelopeMode,
    pub engine: Engine,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    prior: Value,
    strategy: Option<StrategySpec>,
    strategies: Option<Vec<StrategySpec>>,
    #[serde(default)]
    knowledge: PriorKnowledge,
    #[serde(default)]
    envelope_mode: EnvelopeMode,
    #[serde(default)]
    engine: Engine,
}

/// Reads a prior given either as `{"atoms": ...}` or as a tagged sampler.
pub fn parse_prior(value: Value) -> Result<SamplerSpec, CliError> {
    if value.get("kind").is_some() {
        Ok(serde_json::from_value(value)?)
    } else {
        Ok(SamplerSpec::Finite(serde_json::from_value(value)?))
    }
}

/// Reads a prior file that must describe a finite prior.
pub fn load_finite_prior(path: &Path) -> Result<FiniteBasePrior, CliError> {
    let text = read(path)?;
    match parse_prior(serde_json::from_str(&text)?)? {
        SamplerSpec::Finite(p) => Ok(p),
        _ => Err(CliError::Validation("prior must be a finite prior".into())),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: RawScenario = serde_json::from_str(text)?;
        let strategies = match (raw.strategy, raw.strategies) {
            (Some(_), Some(_)) => {
                return Err(CliError::Validation("give either `strategy` or `strategies`, not both".into()))
            }
            (Some(s), None) => vec![s],
            (None, Some(list)) if !list.is_empty() => list,
            _ => return Err(CliError::Validation("scenario names no strategy".into())),
        };
        Ok(Self {
            prior: parse_prior(raw.prior)?,
            strategies,
            knowledge: raw.knowledge,
            envelope_mode: raw.envelope_mode,
            engine: raw.engine,
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&read(path)?)
    }

    /// Checks every strategy against the envelope mode and knowledge.
    pub fn validate_strategies(&self) -> Result<(), CliError> {
        for s in &self.strategies {
            s.check_requirements(self.envelope_mode, &self.knowledge)
                .map_err(|e| CliError::Validation(e.to_string()))?;
        }
        Ok(())
    }

    pub fn finite_prior(&self) -> Result<&FiniteBasePrior, CliError> {
        self.prior
            .as_finite()
            .ok_or_else(|| CliError::Validation("the exact engine needs a finite prior".into()))
    }

    pub fn single_strategy(&self) -> Result<&StrategySpec, CliError> {
        match self.strategies.as_slice() {
            [one] => Ok(one),
            _ => Err(CliError::Validation("this command takes exactly one strategy".into())),
        }
    }

    /// Monte Carlo configuration for the single strategy.
    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let Engine::MonteCarlo { trials, seed } = self.engine else {
            return Err(CliError::Validation("scenario does not use the monte_carlo engine".into()));
        };
        let cfg = SimConfig {
            trials,
            seed,
            sampler: self.prior.clone(),
            strategy: self.single_strategy()?.clone(),
            knowledge: self.knowledge.clone(),
            envelope_mode: self.envelope_mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
