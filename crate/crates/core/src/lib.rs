//! Two-envelope game laboratory.
//!
//! One envelope holds a base amount `y` drawn from a prior, the other `2y`;
//! the player picks one by a fair coin and may switch. This crate evaluates
//! switching strategies exactly over finite priors ([`exact`]) and by seeded
//! simulation over any sampler ([`montecarlo`]).

pub mod amount;
pub mod error;
pub mod exact;
pub mod montecarlo;
pub mod prior;
pub mod rng;
pub mod stats;
pub mod strategy;
pub mod world;

pub use amount::{parse_rational, to_decimal_string, Amount, Rational};
pub use error::{Error, RequirementError, Result};
pub use exact::{
    conditional_gain, correct_open_value, decompose_correction, exact_value, naive_value, posterior,
    ExactReport, Posterior,
};
pub use montecarlo::{run_clones, run_sim, run_sim_with_workers, CloneResult, SimConfig, SimResult};
pub use prior::{prior_mean, Atom, FiniteBasePrior, SamplerSpec};
pub use strategy::{switch_probability, DecayForm, PriorKnowledge, StrategySpec, SwitchProbability};
pub use world::{sample_world, world_values, EnvelopeMode, EnvelopePick, Observation, Sampler, WorldState};
