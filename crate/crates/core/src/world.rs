//! Realized outcomes of one game: base amount, envelope pick and what the
//! player gets to see.

use rand::distr::weighted::WeightedIndex;
use rand::distr::{Distribution, Uniform};
use rand::Rng;
use rand_distr::{Geometric, LogNormal};
use serde::{Deserialize, Serialize};

use crate::amount::Amount;
use crate::error::{Error, Result};
use crate::prior::SamplerSpec;

/// Which envelope the player picked. Always a fair coin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopePick {
    /// The chosen envelope holds the base amount `y`.
    Lower,
    /// The chosen envelope holds `2y`.
    Higher,
}

impl EnvelopePick {
    pub const BOTH: [EnvelopePick; 2] = [EnvelopePick::Lower, EnvelopePick::Higher];

    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.random::<bool>() {
            Self::Lower
        } else {
            Self::Higher
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WorldState {
    y: Amount,
    pick: EnvelopePick,
}

impl WorldState {
    pub fn new(y: Amount, pick: EnvelopePick) -> Result<Self> {
        if !y.is_positive() {
            return Err(Error::InvalidAmount("base amount must be strictly positive".into()));
        }
        Ok(Self { y, pick })
    }

    pub fn y(&self) -> &Amount {
        &self.y
    }

    pub fn pick(&self) -> EnvelopePick {
        self.pick
    }

    /// `(x, x')`: the chosen envelope's content and the other one's.
    pub fn values(&self) -> (Amount, Amount) {
        match self.pick {
            EnvelopePick::Lower => (self.y.clone(), self.y.double()),
            EnvelopePick::Higher => (self.y.double(), self.y.clone()),
        }
    }
}

pub fn world_values(w: &WorldState) -> (Amount, Amount) {
    w.values()
}

/// What the player sees before deciding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Observation {
    Closed,
    Open(Amount),
}

impl Observation {
    pub fn open(x: Amount) -> Result<Self> {
        if !x.is_positive() {
            return Err(Error::InvalidAmount("observed amount must be strictly positive".into()));
        }
        Ok(Self::Open(x))
    }

    pub fn amount(&self) -> Option<&Amount> {
        match self {
            Self::Closed => None,
            Self::Open(x) => Some(x),
        }
    }
}

/// Whether the player opens the chosen envelope before deciding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeMode {
    #[default]
    Open,
    Closed,
}

impl EnvelopeMode {
    pub fn observe(self, x: &Amount) -> Observation {
        match self {
            Self::Open => Observation::Open(x.clone()),
            Self::Closed => Observation::Closed,
        }
    }
}

/// One draw of the base amount: either an atom index of a finite prior or a
/// real value from a continuous family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum BaseDraw {
    Atom(usize),
    Real(f64),
}

/// A [`SamplerSpec`] prepared for repeated draws.
#[derive(Clone, Debug)]
pub struct Sampler {
    spec: SamplerSpec,
    kind: SamplerKind,
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Finite(WeightedIndex<f64>),
    Uniform(Uniform<f64>),
    LogNormal(LogNormal<f64>),
    Geometric { dist: Geometric, unit: f64 },
}

impl Sampler {
    pub fn new(spec: &SamplerSpec) -> Result<Self> {
        spec.validate()?;
        let bad = |e: &dyn std::fmt::Display| Error::InvalidSampler(e.to_string());
        let kind = match *spec {
            SamplerSpec::Finite(ref p) => {
                let weights = p.atoms().iter().map(|a| crate::amount::rational_to_f64(&a.prob));
                SamplerKind::Finite(WeightedIndex::new(weights).map_err(|e| bad(&e))?)
            }
            SamplerSpec::UniformContinuous { low, high } => {
                SamplerKind::Uniform(Uniform::new(low, high).map_err(|e| bad(&e))?)
            }
            SamplerSpec::LogNormal { mu, sigma } => {
                SamplerKind::LogNormal(LogNormal::new(mu, sigma).map_err(|e| bad(&e))?)
            }
            SamplerSpec::GeometricScaled { success_prob, unit } => SamplerKind::Geometric {
                dist: Geometric::new(success_prob).map_err(|e| bad(&e))?,
                unit,
            },
        };
        Ok(Self { spec: spec.clone(), kind })
    }

    pub fn spec(&self) -> &SamplerSpec {
        &self.spec
    }

    pub(crate) fn draw_base<R: Rng + ?Sized>(&self, rng: &mut R) -> BaseDraw {
        match &self.kind {
            SamplerKind::Finite(index) => BaseDraw::Atom(index.sample(rng)),
            SamplerKind::Uniform(u) => BaseDraw::Real(u.sample(rng)),
            // Clamp so an underflowing draw still yields a positive amount.
            SamplerKind::LogNormal(d) => BaseDraw::Real(d.sample(rng).max(f64::MIN_POSITIVE)),
            SamplerKind::Geometric { dist, unit } => {
                BaseDraw::Real(unit * (dist.sample(rng) as f64 + 1.0))
            }
        }
    }

    pub(crate) fn base_amount(&self, draw: BaseDraw) -> Amount {
        match (draw, &self.spec) {
            (BaseDraw::Atom(i), SamplerSpec::Finite(p)) => p.atoms()[i].value.clone(),
            (BaseDraw::Real(y), _) => Amount::from_f64(y).expect("samplers yield finite values"),
            (BaseDraw::Atom(_), _) => unreachable!("atom draw from a continuous sampler"),
        }
    }

    /// Draws `y`, then the pick, in that order.
    pub fn sample_world<R: Rng + ?Sized>(&self, rng: &mut R) -> WorldState {
        let draw = self.draw_base(rng);
        let pick = EnvelopePick::draw(rng);
        WorldState { y: self.base_amount(draw), pick }
    }
}

/// Draws one world from `spec`. Prefer [`Sampler`] for repeated draws.
pub fn sample_world<R: Rng + ?Sized>(spec: &SamplerSpec, rng: &mut R) -> Result<WorldState> {
    Ok(Sampler::new(spec)?.sample_world(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prior::FiniteBasePrior;
    use crate::rng;

    fn amt(s: &str) -> Amount {
        s.parse().unwrap()
    }

    #[test]
    fn values_follow_pick() {
        let lo = WorldState::new(amt("1"), EnvelopePick::Lower).unwrap();
        assert_eq!(world_values(&lo), (amt("1"), amt("2")));
        let hi = WorldState::new(amt("1"), EnvelopePick::Higher).unwrap();
        assert_eq!(world_values(&hi), (amt("2"), amt("1")));
        let frac = WorldState::new(amt("3/2"), EnvelopePick::Lower).unwrap();
        assert_eq!(world_values(&frac), (amt("3/2"), amt("3")));
    }

    #[test]
    fn zero_base_rejected() {
        assert!(WorldState::new(Amount::zero(), EnvelopePick::Lower).is_err());
        assert!(Observation::open(Amount::zero()).is_err());
    }

    #[test]
    fn point_mass_always_draws_its_value() {
        let spec = SamplerSpec::Finite(FiniteBasePrior::point_mass(amt("7")).unwrap());
        for seed in 0..20 {
            let w = sample_world(&spec, &mut rng::stream(seed)).unwrap();
            assert_eq!(w.y(), &amt("7"));
        }
    }

    #[test]
    fn continuous_samplers_stay_positive() {
        let specs = [
            SamplerSpec::UniformContinuous { low: 0.5, high: 3.0 },
            SamplerSpec::LogNormal { mu: -2.0, sigma: 2.0 },
            SamplerSpec::GeometricScaled { success_prob: 0.3, unit: 2.5 },
        ];
        for spec in &specs {
            let sampler = Sampler::new(spec).unwrap();
            let mut r = rng::stream(1);
            for _ in 0..2_000 {
                assert!(sampler.sample_world(&mut r).y().is_positive());
            }
        }
    }

    #[test]
    fn geometric_draws_are_unit_multiples() {
        let sampler = Sampler::new(&SamplerSpec::GeometricScaled { success_prob: 0.5, unit: 2.0 }).unwrap();
        let mut r = rng::stream(3);
        for _ in 0..200 {
            let y = sampler.sample_world(&mut r).y().to_f64();
            assert!(y >= 2.0 && (y / 2.0).fract() == 0.0);
        }
    }
}
