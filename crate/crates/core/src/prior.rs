//! Distributions of the base amount: exact finite priors for enumeration and
//! sampler families for Monte Carlo.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::amount::{deserialize_rational, serialize_rational, Amount, Rational};
use crate::error::{Error, Result};

/// One support point of a [`FiniteBasePrior`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub value: Amount,
    #[serde(serialize_with = "serialize_rational", deserialize_with = "deserialize_rational")]
    pub prob: Rational,
}

/// A finite distribution of the base amount.
///
/// Atoms are strictly positive, pairwise distinct and sorted ascending; the
/// probabilities lie in `(0, 1]` and sum to exactly one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPrior")]
pub struct FiniteBasePrior {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawPrior {
    atoms: Vec<Atom>,
}

impl TryFrom<RawPrior> for FiniteBasePrior {
    type Error = Error;

    fn try_from(raw: RawPrior) -> Result<Self> {
        Self::from_atoms(raw.atoms)
    }
}

impl FiniteBasePrior {
    pub fn new(atoms: impl IntoIterator<Item = (Amount, Rational)>) -> Result<Self> {
        Self::from_atoms(atoms.into_iter().map(|(value, prob)| Atom { value, prob }).collect())
    }

    pub fn from_atoms(mut atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyPrior);
        }
        for atom in &atoms {
            if !atom.value.is_positive() {
                return Err(Error::InvalidPrior("prior values must be strictly positive".into()));
            }
            if !atom.prob.is_positive() || atom.prob > Rational::one() {
                return Err(Error::InvalidPrior(format!(
                    "prior probability {} is outside (0, 1]",
                    atom.prob
                )));
            }
        }
        let total: Rational = atoms.iter().map(|a| &a.prob).sum();
        if !total.is_one() {
            return Err(Error::InvalidPrior("prior probabilities must sum to 1".into()));
        }
        atoms.sort_by(|a, b| a.value.cmp(&b.value));
        if atoms.windows(2).any(|w| w[0].value == w[1].value) {
            return Err(Error::InvalidPrior("prior values must be distinct".into()));
        }
        Ok(Self { atoms })
    }

    /// All mass on a single value.
    pub fn point_mass(value: Amount) -> Result<Self> {
        Self::new([(value, Rational::one())])
    }

    /// Equal mass on each of `values`.
    pub fn uniform(values: impl IntoIterator<Item = Amount>) -> Result<Self> {
        let values: Vec<_> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::EmptyPrior);
        }
        let p = Rational::new(1.into(), values.len().into());
        Self::new(values.into_iter().map(|v| (v, p.clone())))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Probability mass at `value`; exactly zero off the support.
    pub fn f1(&self, value: &Amount) -> Rational {
        self.atoms
            .binary_search_by(|a| a.value.cmp(value))
            .map(|i| self.atoms[i].prob.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn min_value(&self) -> &Amount {
        &self.atoms[0].value
    }

    pub fn max_value(&self) -> &Amount {
        &self.atoms[self.atoms.len() - 1].value
    }

    /// `E[Y]`, summed in ascending atom order.
    pub fn mean(&self) -> Amount {
        let total: Rational = self
            .atoms
            .iter()
            .map(|a| a.value.as_rational() * &a.prob)
            .sum();
        Amount::new(total).expect("positive atoms have a positive mean")
    }
}

/// `E[Y]` of a finite prior.
pub fn prior_mean(prior: &FiniteBasePrior) -> Amount {
    prior.mean()
}

/// A family the base amount can be drawn from.
///
/// Serialized as `{"kind": "...", ...params}`. Real-valued parameters accept
/// plain JSON numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SamplerRepr", into = "SamplerRepr")]
pub enum SamplerSpec {
    Finite(FiniteBasePrior),
    UniformContinuous { low: f64, high: f64 },
    LogNormal { mu: f64, sigma: f64 },
    /// `unit · K` with `K` the 1-based trial index of the first success.
    GeometricScaled { success_prob: f64, unit: f64 },
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SamplerRepr {
    Finite(FiniteBasePrior),
    UniformContinuous { low: f64, high: f64 },
    LogNormal { mu: f64, sigma: f64 },
    GeometricScaled { success_prob: f64, unit: f64 },
}

impl TryFrom<SamplerRepr> for SamplerSpec {
    type Error = Error;

    fn try_from(repr: SamplerRepr) -> Result<Self> {
        let spec = match repr {
            SamplerRepr::Finite(p) => Self::Finite(p),
            SamplerRepr::UniformContinuous { low, high } => Self::UniformContinuous { low, high },
            SamplerRepr::LogNormal { mu, sigma } => Self::LogNormal { mu, sigma },
            SamplerRepr::GeometricScaled { success_prob, unit } => {
                Self::GeometricScaled { success_prob, unit }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<SamplerSpec> for SamplerRepr {
    fn from(spec: SamplerSpec) -> Self {
        match spec {
            SamplerSpec::Finite(p) => Self::Finite(p),
            SamplerSpec::UniformContinuous { low, high } => Self::UniformContinuous { low, high },
            SamplerSpec::LogNormal { mu, sigma } => Self::LogNormal { mu, sigma },
            SamplerSpec::GeometricScaled { success_prob, unit } => {
                Self::GeometricScaled { success_prob, unit }
            }
        }
    }
}

impl SamplerSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSampler(msg));
        match *self {
            Self::Finite(_) => Ok(()),
            Self::UniformContinuous { low, high } => {
                if !(low.is_finite() && high.is_finite() && low > 0.0 && high > low) {
                    return bad(format!("uniform needs 0 < low < high, got [{low}, {high}]"));
                }
                Ok(())
            }
            Self::LogNormal { mu, sigma } => {
                if !(mu.is_finite() && sigma.is_finite() && sigma > 0.0) {
                    return bad(format!("log-normal needs finite mu and sigma > 0, got ({mu}, {sigma})"));
                }
                Ok(())
            }
            Self::GeometricScaled { success_prob, unit } => {
                if !(success_prob > 0.0 && success_prob < 1.0) {
                    return bad(format!("geometric success_prob must lie in (0, 1), got {success_prob}"));
                }
                if !(unit.is_finite() && unit > 0.0) {
                    return bad(format!("geometric unit must be positive, got {unit}"));
                }
                Ok(())
            }
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteBasePrior> {
        match self {
            Self::Finite(p) => Some(p),
            _ => None,
        }
    }

    /// Mean of the base amount as a real number.
    pub fn mean_f64(&self) -> f64 {
        match *self {
            Self::Finite(ref p) => p.mean().to_f64(),
            Self::UniformContinuous { low, high } => 0.5 * (low + high),
            Self::LogNormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
            Self::GeometricScaled { success_prob, unit } => unit / success_prob,
        }
    }
}
