#![allow(dead_code)]

use envelope_core::{
    Amount, DecayForm, FiniteBasePrior, PriorKnowledge, Rational, StrategySpec, SwitchProbability,
};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

pub fn amt(s: &str) -> Amount {
    s.parse().unwrap()
}

pub fn q(s: &str) -> Rational {
    envelope_core::parse_rational(s).unwrap()
}

pub fn sp(s: &str) -> SwitchProbability {
    s.parse().unwrap()
}

pub fn half_half() -> FiniteBasePrior {
    FiniteBasePrior::uniform([amt("1"), amt("2")]).unwrap()
}

/// Builds a prior from `(numer, denom)` values and integer weights,
/// dropping duplicate values.
pub fn prior_from(values: &[(u64, u64)], weights: &[u64]) -> FiniteBasePrior {
    let mut atoms: Vec<(Amount, u64)> = Vec::new();
    for (&(n, d), &w) in values.iter().zip(weights) {
        let v = Amount::from_ratio(n, d).unwrap();
        if !atoms.iter().any(|(a, _)| *a == v) {
            atoms.push((v, w));
        }
    }
    let total: u64 = atoms.iter().map(|(_, w)| w).sum();
    FiniteBasePrior::new(atoms.into_iter().map(|(v, w)| (v, Rational::new(w.into(), total.into())))).unwrap()
}

/// Random prior: up to 8 atoms, values `n/d` with `n ≤ 200`, `d ≤ 4`,
/// integer weights in `1..=9`.
pub fn random_prior<R: Rng>(rng: &mut R) -> FiniteBasePrior {
    let size = rng.random_range(1..=8);
    let values: Vec<(u64, u64)> = (0..size).map(|_| (rng.random_range(1..=200), rng.random_range(1..=4))).collect();
    let weights: Vec<u64> = (0..size).map(|_| rng.random_range(1..=9)).collect();
    prior_from(&values, &weights)
}

pub fn arb_prior() -> impl Strategy<Value = FiniteBasePrior> {
    prop::collection::vec(((1u64..=200, 1u64..=4), 1u64..=9), 1..=8).prop_map(|atoms| {
        let (values, weights): (Vec<_>, Vec<_>) = atoms.into_iter().unzip();
        prior_from(&values, &weights)
    })
}

pub fn arb_probability() -> impl Strategy<Value = SwitchProbability> {
    (0u64..=12, 1u64..=12).prop_map(|(n, d)| {
        let n = n.min(d);
        SwitchProbability::new(Rational::new(n.into(), d.into())).unwrap()
    })
}

/// Every catalogue strategy with the knowledge it needs about `prior`.
pub fn catalogue(prior: &FiniteBasePrior) -> Vec<(StrategySpec, PriorKnowledge)> {
    let full = PriorKnowledge::FullPrior(prior.clone());
    vec![
        (StrategySpec::Never, PriorKnowledge::NoInformation),
        (StrategySpec::Always, PriorKnowledge::NoInformation),
        (StrategySpec::Blind(sp("1/3")), PriorKnowledge::NoInformation),
        (StrategySpec::Blind(sp("1/2")), PriorKnowledge::NoInformation),
        (StrategySpec::MeanThreshold, full.clone()),
        (StrategySpec::MeanThreshold, PriorKnowledge::mean_only(prior.mean()).unwrap()),
        (StrategySpec::BoundsRule { fallback: sp("1/2") }, PriorKnowledge::bounds_of(prior)),
        (StrategySpec::BoundsRule { fallback: sp("0") }, PriorKnowledge::bounds_of(prior)),
        (StrategySpec::BayesArgmax, full.clone()),
        (StrategySpec::BayesMixed, full),
        (StrategySpec::MonotoneDecreasing(DecayForm::Reciprocal), PriorKnowledge::NoInformation),
        (
            StrategySpec::MonotoneDecreasing(DecayForm::ExponentialDecay { rate: 0.05 }),
            PriorKnowledge::NoInformation,
        ),
    ]
}

/// Independent `E[Y]`: plain sum over atoms.
pub fn oracle_mean(prior: &FiniteBasePrior) -> Rational {
    prior
        .atoms()
        .iter()
        .fold(Rational::zero(), |acc, a| acc + a.value.as_rational() * &a.prob)
}

/// Independent enumeration of `(E[X], E[V])` given a switch rule `s(x)`.
/// Outcomes are listed explicitly: the chosen envelope holds y or 2y with
/// probability 1/2 each.
pub fn oracle_enumerate(prior: &FiniteBasePrior, s: impl Fn(&Rational) -> Rational) -> (Rational, Rational) {
    let half = q("1/2");
    let one = q("1");
    let mut e_x = Rational::zero();
    let mut e_v = Rational::zero();
    for atom in prior.atoms() {
        let y = atom.value.as_rational().clone();
        let two_y = &y + &y;
        for (x, other) in [(y.clone(), two_y.clone()), (two_y, y)] {
            let w = &atom.prob * &half;
            let p = s(&x);
            e_x += &w * &x;
            e_v += &w * ((&one - &p) * &x + p * other);
        }
    }
    (e_x, e_v)
}
