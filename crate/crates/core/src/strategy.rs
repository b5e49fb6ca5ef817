//! Switching rules.
//!
//! A strategy maps what the player sees ([`Observation`]) and what they know
//! about the base prior ([`PriorKnowledge`]) to a probability of switching.
//! Every rule here is a pure function of those two inputs.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::amount::{deserialize_rational, parse_rational, Amount, Rational};
use crate::error::{Error, RequirementError, Result};
use crate::exact::{conditional_gain, posterior};
use crate::prior::FiniteBasePrior;
use crate::world::{EnvelopeMode, Observation};

/// What the player knows about the distribution of the base amount.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "KnowledgeRepr", into = "KnowledgeRepr")]
pub enum PriorKnowledge {
    #[default]
    NoInformation,
    MeanOnly(Amount),
    Bounds { y_min: Option<Amount>, y_max: Option<Amount> },
    FullPrior(FiniteBasePrior),
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum KnowledgeRepr {
    NoInformation,
    MeanOnly {
        mean_y: Amount,
    },
    Bounds {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y_min: Option<Amount>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y_max: Option<Amount>,
    },
    FullPrior {
        prior: FiniteBasePrior,
    },
}

impl TryFrom<KnowledgeRepr> for PriorKnowledge {
    type Error = Error;

    fn try_from(repr: KnowledgeRepr) -> Result<Self> {
        match repr {
            KnowledgeRepr::NoInformation => Ok(Self::NoInformation),
            KnowledgeRepr::MeanOnly { mean_y } => Self::mean_only(mean_y),
            KnowledgeRepr::Bounds { y_min, y_max } => Self::bounds(y_min, y_max),
            KnowledgeRepr::FullPrior { prior } => Ok(Self::FullPrior(prior)),
        }
    }
}

impl From<PriorKnowledge> for KnowledgeRepr {
    fn from(k: PriorKnowledge) -> Self {
        match k {
            PriorKnowledge::NoInformation => Self::NoInformation,
            PriorKnowledge::MeanOnly(mean_y) => Self::MeanOnly { mean_y },
            PriorKnowledge::Bounds { y_min, y_max } => Self::Bounds { y_min, y_max },
            PriorKnowledge::FullPrior(prior) => Self::FullPrior { prior },
        }
    }
}

impl PriorKnowledge {
    pub fn mean_only(mean_y: Amount) -> Result<Self> {
        if !mean_y.is_positive() {
            return Err(Error::InvalidKnowledge("mean_y must be strictly positive".into()));
        }
        Ok(Self::MeanOnly(mean_y))
    }

    pub fn bounds(y_min: Option<Amount>, y_max: Option<Amount>) -> Result<Self> {
        for b in y_min.iter().chain(y_max.iter()) {
            if !b.is_positive() {
                return Err(Error::InvalidKnowledge("bounds must be strictly positive".into()));
            }
        }
        if let (Some(lo), Some(hi)) = (&y_min, &y_max) {
            if lo > hi {
                return Err(Error::InvalidKnowledge(format!("y_min {lo} exceeds y_max {hi}")));
            }
        }
        Ok(Self::Bounds { y_min, y_max })
    }

    /// Exact support bounds of a known prior.
    pub fn bounds_of(prior: &FiniteBasePrior) -> Self {
        Self::Bounds {
            y_min: Some(prior.min_value().clone()),
            y_max: Some(prior.max_value().clone()),
        }
    }
}

/// A probability of switching, exact and within `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwitchProbability(Rational);

impl SwitchProbability {
    pub fn new(p: Rational) -> Result<Self> {
        if p.is_negative() || p > Rational::one() {
            return Err(Error::InvalidStrategy(format!("switch probability {p} is outside [0, 1]")));
        }
        Ok(Self(p))
    }

    pub fn never() -> Self {
        Self(Rational::zero())
    }

    pub fn always() -> Self {
        Self(Rational::one())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// Probability of keeping.
    pub fn complement(&self) -> Rational {
        Rational::one() - &self.0
    }

    pub fn to_f64(&self) -> f64 {
        crate::amount::rational_to_f64(&self.0)
    }

    /// Exact rational for a real probability, rounded to 12 significant
    /// digits so that the same input always yields the same rational.
    pub fn from_f64_rounded(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidStrategy(format!("switch probability {p} is outside [0, 1]")));
        }
        Self::new(round_significant(p, 12))
    }
}

impl std::str::FromStr for SwitchProbability {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }
}

impl fmt::Display for SwitchProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for SwitchProbability {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for SwitchProbability {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Self::new(deserialize_rational(d)?).map_err(de::Error::custom)
    }
}

/// Rounds a finite nonnegative float to `digits` significant decimal digits
/// and returns the exact rational of the rounded decimal.
pub(crate) fn round_significant(v: f64, digits: usize) -> Rational {
    if v == 0.0 {
        return Rational::zero();
    }
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let mantissa: num_bigint::BigInt = mantissa.replace('.', "").parse().expect("mantissa digits");
    let exp: i64 = exp.parse::<i64>().expect("exponent") - (digits as i64 - 1);
    let ten = num_bigint::BigInt::from(10u8);
    if exp >= 0 {
        Rational::from_integer(mantissa * num_traits::pow(ten, exp as usize))
    } else {
        Rational::new(mantissa, num_traits::pow(ten, (-exp) as usize))
    }
}

/// Shape of a strictly decreasing switch-probability curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum DecayForm {
    /// `exp(-rate · x)`
    ExponentialDecay { rate: f64 },
    /// `1 / (1 + x)`
    Reciprocal,
}

impl DecayForm {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Self::ExponentialDecay { rate } => (-rate * x).exp(),
            Self::Reciprocal => 1.0 / (1.0 + x),
        }
    }
}

/// A switching rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StrategyRepr", into = "StrategyRepr")]
pub enum StrategySpec {
    Never,
    Always,
    /// Switch with a fixed probability regardless of what is seen.
    Blind(SwitchProbability),
    /// Switch iff `x < 3/2 · E[Y]`.
    MeanThreshold,
    /// Keep above a known `y_max`, switch below `2 · y_min`, otherwise switch
    /// with the fallback probability.
    BoundsRule { fallback: SwitchProbability },
    /// Switch iff the posterior expected gain is strictly positive.
    BayesArgmax,
    /// Switch with probability `P(lower | x)`.
    BayesMixed,
    MonotoneDecreasing(DecayForm),
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum StrategyRepr {
    Never,
    Always,
    Blind {
        p: SwitchProbability,
    },
    MeanThreshold,
    BoundsRule {
        fallback: SwitchProbability,
    },
    BayesArgmax,
    BayesMixed,
    MonotoneDecreasing {
        #[serde(flatten)]
        form: DecayForm,
    },
}

impl TryFrom<StrategyRepr> for StrategySpec {
    type Error = Error;

    fn try_from(repr: StrategyRepr) -> Result<Self> {
        let spec = match repr {
            StrategyRepr::Never => Self::Never,
            StrategyRepr::Always => Self::Always,
            StrategyRepr::Blind { p } => Self::Blind(p),
            StrategyRepr::MeanThreshold => Self::MeanThreshold,
            StrategyRepr::BoundsRule { fallback } => Self::BoundsRule { fallback },
            StrategyRepr::BayesArgmax => Self::BayesArgmax,
            StrategyRepr::BayesMixed => Self::BayesMixed,
            StrategyRepr::MonotoneDecreasing { form } => Self::MonotoneDecreasing(form),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<StrategySpec> for StrategyRepr {
    fn from(spec: StrategySpec) -> Self {
        match spec {
            StrategySpec::Never => Self::Never,
            StrategySpec::Always => Self::Always,
            StrategySpec::Blind(p) => Self::Blind { p },
            StrategySpec::MeanThreshold => Self::MeanThreshold,
            StrategySpec::BoundsRule { fallback } => Self::BoundsRule { fallback },
            StrategySpec::BayesArgmax => Self::BayesArgmax,
            StrategySpec::BayesMixed => Self::BayesMixed,
            StrategySpec::MonotoneDecreasing(form) => Self::MonotoneDecreasing { form },
        }
    }
}

/// Prior knowledge a strategy cannot do without.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnowledgeNeed {
    /// `MeanOnly` or `FullPrior`.
    Mean,
    Bounds,
    FullPrior,
}

impl KnowledgeNeed {
    fn describe(self) -> &'static str {
        match self {
            Self::Mean => "mean_only or full_prior",
            Self::Bounds => "bounds",
            Self::FullPrior => "full_prior",
        }
    }

    fn satisfied_by(self, knowledge: &PriorKnowledge) -> bool {
        matches!(
            (self, knowledge),
            (Self::Mean, PriorKnowledge::MeanOnly(_) | PriorKnowledge::FullPrior(_))
                | (Self::Bounds, PriorKnowledge::Bounds { .. })
                | (Self::FullPrior, PriorKnowledge::FullPrior(_))
        )
    }
}

impl StrategySpec {
    pub fn validate(&self) -> Result<()> {
        if let Self::MonotoneDecreasing(DecayForm::ExponentialDecay { rate }) = *self {
            if !(rate.is_finite() && rate > 0.0) {
                return Err(Error::InvalidStrategy(format!("decay rate must be positive, got {rate}")));
            }
        }
        Ok(())
    }

    /// Stable name used in reports and for ordering ties.
    pub fn name(&self) -> String {
        match self {
            Self::Never => "never".into(),
            Self::Always => "always".into(),
            Self::Blind(p) => format!("blind({p})"),
            Self::MeanThreshold => "mean_threshold".into(),
            Self::BoundsRule { fallback } => format!("bounds_rule({fallback})"),
            Self::BayesArgmax => "bayes_argmax".into(),
            Self::BayesMixed => "bayes_mixed".into(),
            Self::MonotoneDecreasing(DecayForm::Reciprocal) => "monotone_decreasing(reciprocal)".into(),
            Self::MonotoneDecreasing(DecayForm::ExponentialDecay { rate }) => {
                format!("monotone_decreasing(exponential_decay {rate})")
            }
        }
    }

    /// Constant in the observation: never, always or blind.
    pub fn is_oblivious(&self) -> bool {
        matches!(self, Self::Never | Self::Always | Self::Blind(_))
    }

    pub fn needs_open_envelope(&self) -> bool {
        !self.is_oblivious()
    }

    pub fn knowledge_need(&self) -> Option<KnowledgeNeed> {
        match self {
            Self::MeanThreshold => Some(KnowledgeNeed::Mean),
            Self::BoundsRule { .. } => Some(KnowledgeNeed::Bounds),
            Self::BayesArgmax | Self::BayesMixed => Some(KnowledgeNeed::FullPrior),
            _ => None,
        }
    }

    /// Checks up front that the scenario gives this strategy what it needs.
    pub fn check_requirements(
        &self,
        mode: EnvelopeMode,
        knowledge: &PriorKnowledge,
    ) -> Result<(), RequirementError> {
        if self.needs_open_envelope() && mode == EnvelopeMode::Closed {
            return Err(RequirementError::MissingObservation { strategy: self.name() });
        }
        match self.knowledge_need() {
            Some(need) if !need.satisfied_by(knowledge) => Err(RequirementError::MissingPrior {
                strategy: self.name(),
                needs: need.describe(),
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for StrategySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Probability that `spec` switches after seeing `obs` with knowledge `prior`.
pub fn switch_probability(
    spec: &StrategySpec,
    obs: &Observation,
    prior: &PriorKnowledge,
) -> Result<SwitchProbability> {
    match spec {
        StrategySpec::Never => return Ok(SwitchProbability::never()),
        StrategySpec::Always => return Ok(SwitchProbability::always()),
        StrategySpec::Blind(p) => return Ok(p.clone()),
        _ => {}
    }
    let x = obs
        .amount()
        .ok_or_else(|| RequirementError::MissingObservation { strategy: spec.name() })?;
    if let Some(need) = spec.knowledge_need() {
        if !need.satisfied_by(prior) {
            return Err(RequirementError::MissingPrior { strategy: spec.name(), needs: need.describe() }.into());
        }
    }
    let p = match (spec, prior) {
        (StrategySpec::MeanThreshold, _) => {
            let mean = match prior {
                PriorKnowledge::MeanOnly(m) => m.clone(),
                PriorKnowledge::FullPrior(p) => p.mean(),
                _ => unreachable!("checked above"),
            };
            // Strict: a tie keeps.
            indicator(*x < mean.three_halves())
        }
        (StrategySpec::BoundsRule { fallback }, PriorKnowledge::Bounds { y_min, y_max }) => {
            if y_max.as_ref().is_some_and(|hi| x > hi) {
                SwitchProbability::never()
            } else if y_min.as_ref().is_some_and(|lo| *x < lo.double()) {
                SwitchProbability::always()
            } else {
                fallback.clone()
            }
        }
        // A zero gain keeps.
        (StrategySpec::BayesArgmax, PriorKnowledge::FullPrior(p)) => {
            indicator(conditional_gain(p, x)?.is_positive())
        }
        (StrategySpec::BayesMixed, PriorKnowledge::FullPrior(p)) => {
            SwitchProbability(posterior(p, x)?.p_lower)
        }
        (StrategySpec::MonotoneDecreasing(form), _) => {
            SwitchProbability::from_f64_rounded(form.eval(x.to_f64()))?
        }
        _ => unreachable!("knowledge requirement checked above"),
    };
    Ok(p)
}

fn indicator(switch: bool) -> SwitchProbability {
    if switch {
        SwitchProbability::always()
    } else {
        SwitchProbability::never()
    }
}
