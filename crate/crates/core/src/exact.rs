//! Exact expectations over a finite base prior.
//!
//! [`exact_value`] enumerates every `(y, pick)` outcome with weight
//! `f1(y) / 2` and accumulates the payoff `(1 - s)·x + s·x'` in ascending
//! atom order. The difference between `E[V]` and the `3/2 · E[Y]` baseline is
//! reported as `correction`; [`decompose_correction`] recomputes it from the
//! closed form `1/2 · Σ f1(y)·y·(s(y) - s(2y))`.

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::amount::{parse_rational, ratio, to_decimal_string, Amount, Rational};
use crate::error::{Error, Result};
use crate::prior::FiniteBasePrior;
use crate::strategy::{switch_probability, PriorKnowledge, StrategySpec, SwitchProbability};
use crate::world::{EnvelopeMode, EnvelopePick, WorldState};

/// Places used for the approximate decimal rendering.
pub const DECIMAL_PLACES: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactReport {
    pub e_y: Amount,
    pub e_x: Amount,
    pub e_v: Amount,
    /// `3/2 · e_y`
    pub baseline: Amount,
    /// `e_v - baseline`
    pub correction: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Posterior {
    /// `P(lower | x)`: the chosen envelope holds the base amount.
    pub p_lower: Rational,
    /// `P(higher | x)`
    pub p_higher: Rational,
}

fn check_strategy(spec: &StrategySpec, mode: EnvelopeMode, knowledge: &PriorKnowledge) -> Result<()> {
    spec.validate()?;
    spec.check_requirements(mode, knowledge)?;
    Ok(())
}

/// Switch probability at each observable amount, keyed by atom index and pick.
fn switch_table(
    prior: &FiniteBasePrior,
    spec: &StrategySpec,
    knowledge: &PriorKnowledge,
    mode: EnvelopeMode,
) -> Result<Vec<[SwitchProbability; 2]>> {
    check_strategy(spec, mode, knowledge)?;
    prior
        .atoms()
        .iter()
        .map(|atom| {
            let at = |x: &Amount| switch_probability(spec, &mode.observe(x), knowledge);
            Ok([at(&atom.value)?, at(&atom.value.double())?])
        })
        .collect()
}

/// Exact `E[Y]`, `E[X]`, `E[V]` for `spec` played on `prior`.
pub fn exact_value(
    prior: &FiniteBasePrior,
    spec: &StrategySpec,
    knowledge: &PriorKnowledge,
    mode: EnvelopeMode,
) -> Result<ExactReport> {
    if prior.is_empty() {
        return Err(Error::EmptyPrior);
    }
    let table = switch_table(prior, spec, knowledge, mode)?;
    let half = ratio(1, 2);
    let mut e_x = Rational::zero();
    let mut e_v = Rational::zero();
    for (atom, probs) in prior.atoms().iter().zip(&table) {
        let weight = &atom.prob * &half;
        for (pick, s) in EnvelopePick::BOTH.into_iter().zip(probs) {
            let world = WorldState::new(atom.value.clone(), pick)?;
            let (x, x_other) = world.values();
            let payoff = s.complement() * x.as_rational() + s.value() * x_other.as_rational();
            e_x += &weight * x.as_rational();
            e_v += &weight * payoff;
        }
    }
    let e_y = prior.mean();
    let baseline = e_y.three_halves();
    let correction = &e_v - baseline.as_rational();
    Ok(ExactReport {
        e_y,
        e_x: Amount::new(e_x)?,
        e_v: Amount::new(e_v)?,
        baseline,
        correction,
    })
}

/// `E[V] - 3/2 · E[Y]` from the closed form, without enumerating payoffs.
pub fn decompose_correction(
    prior: &FiniteBasePrior,
    spec: &StrategySpec,
    knowledge: &PriorKnowledge,
    mode: EnvelopeMode,
) -> Result<Rational> {
    if prior.is_empty() {
        return Err(Error::EmptyPrior);
    }
    let table = switch_table(prior, spec, knowledge, mode)?;
    let sum: Rational = prior
        .atoms()
        .iter()
        .zip(&table)
        .map(|(atom, [at_y, at_2y])| &atom.prob * atom.value.as_rational() * (at_y.value() - at_2y.value()))
        .sum();
    Ok(sum * ratio(1, 2))
}

/// Posterior over which envelope was picked, given the chosen one holds `x`.
pub fn posterior(prior: &FiniteBasePrior, x: &Amount) -> Result<Posterior> {
    if !x.is_positive() {
        return Err(Error::InvalidAmount("observed amount must be strictly positive".into()));
    }
    let w_lower = prior.f1(x);
    let w_higher = prior.f1(&x.half());
    let total = &w_lower + &w_higher;
    if total.is_zero() {
        return Err(Error::ImpossibleObservation { x: x.to_string() });
    }
    Ok(Posterior {
        p_lower: w_lower / &total,
        p_higher: w_higher / total,
    })
}

/// Expected gain of switching over keeping, given `x`.
pub fn conditional_gain(prior: &FiniteBasePrior, x: &Amount) -> Result<Rational> {
    let post = posterior(prior, x)?;
    let x = x.as_rational();
    Ok(post.p_lower * x - post.p_higher * x * ratio(1, 2))
}

/// The fallacious value `(1 - p)·x + p·(5/4)·x` obtained by treating `x` as
/// fixed across the envelope choice.
pub fn naive_value(x: &Amount, p_switch: &SwitchProbability) -> Amount {
    let x = x.as_rational();
    let value = p_switch.complement() * x + p_switch.value() * ratio(5, 4) * x;
    Amount::new(value).expect("convex combination of nonnegative values")
}

/// `(1 - p)·x + p·(3/2)·E[Y]`.
pub fn correct_open_value(x: &Amount, p_switch: &SwitchProbability, e_y: &Amount) -> Amount {
    let value = p_switch.complement() * x.as_rational() + p_switch.value() * e_y.three_halves().as_rational();
    Amount::new(value).expect("convex combination of nonnegative values")
}

impl ExactReport {
    /// `e_x` equals the baseline and `e_v = baseline + correction`.
    pub fn is_consistent(&self) -> bool {
        self.e_x == self.baseline && *self.e_v.as_rational() == self.baseline.as_rational() + &self.correction
    }
}

impl Posterior {
    pub fn is_normalized(&self) -> bool {
        (&self.p_lower + &self.p_higher).is_one()
    }
}

/// An exact value alongside its rounded decimal form, as emitted in JSON
/// reports. Only `exact` is read back; `approx` is always re-derived.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub exact: String,
    pub approx: String,
}

impl Cell {
    pub fn of(r: &Rational) -> Self {
        Self { exact: r.to_string(), approx: to_decimal_string(r, DECIMAL_PLACES) }
    }

    pub fn value(&self) -> Result<Rational> {
        parse_rational(&self.exact)
    }

    fn parse<E: serde::de::Error>(&self) -> Result<Rational, E> {
        self.value().map_err(E::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct ReportRepr {
    e_y: Cell,
    e_x: Cell,
    e_v: Cell,
    baseline: Cell,
    correction: Cell,
}

impl Serialize for ExactReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ReportRepr {
            e_y: Cell::of(self.e_y.as_rational()),
            e_x: Cell::of(self.e_x.as_rational()),
            e_v: Cell::of(self.e_v.as_rational()),
            baseline: Cell::of(self.baseline.as_rational()),
            correction: Cell::of(&self.correction),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactReport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = ReportRepr::deserialize(d)?;
        let amount = |c: &Cell| Amount::new(c.parse()?).map_err(D::Error::custom);
        Ok(Self {
            e_y: amount(&r.e_y)?,
            e_x: amount(&r.e_x)?,
            e_v: amount(&r.e_v)?,
            baseline: amount(&r.baseline)?,
            correction: r.correction.parse()?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct PosteriorRepr {
    p_lower: Cell,
    p_higher: Cell,
}

impl Serialize for Posterior {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PosteriorRepr { p_lower: Cell::of(&self.p_lower), p_higher: Cell::of(&self.p_higher) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Posterior {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PosteriorRepr::deserialize(d)?;
        Ok(Self { p_lower: r.p_lower.parse()?, p_higher: r.p_higher.parse()? })
    }
}
