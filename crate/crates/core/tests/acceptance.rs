//! Acceptance gate. Each criterion runs against its pinned tolerance and
//! runtime budget and prints one PASS/FAIL line; any failure fails the
//! target.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use envelope_core::{
    correct_open_value, decompose_correction, exact_value, naive_value, run_clones, run_sim,
    run_sim_with_workers, switch_probability, Amount, EnvelopeMode, FiniteBasePrior, Observation,
    PriorKnowledge, Rational, SamplerSpec, SimConfig, StrategySpec, SwitchProbability,
};
use num_traits::{One, Signed, Zero};

type Outcome = Result<String, String>;

/// Id, title, runtime budget, check.
type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn priors(seed: u64, count: usize) -> Vec<FiniteBasePrior> {
    let mut gen = envelope_core::rng::stream(seed);
    (0..count).map(|_| random_prior(&mut gen)).collect()
}

fn oblivious() -> Vec<StrategySpec> {
    vec![
        StrategySpec::Never,
        StrategySpec::Always,
        StrategySpec::Blind(sp("1/3")),
        StrategySpec::Blind(sp("1/2")),
    ]
}

/// E[V] = 3/2 E[Y] exactly for oblivious strategies.
fn theorem_identity() -> Outcome {
    let mut cases = 0;
    for prior in priors(1, 100) {
        let baseline = oracle_mean(&prior) * q("3/2");
        for spec in oblivious() {
            for mode in [EnvelopeMode::Open, EnvelopeMode::Closed] {
                let r = exact_value(&prior, &spec, &PriorKnowledge::NoInformation, mode).map_err(|e| e.to_string())?;
                ensure(*r.e_v.as_rational() == baseline, || format!("{spec}: e_v {} != {baseline}", r.e_v))?;
                ensure(r.correction.is_zero(), || format!("{spec}: correction {}", r.correction))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} prior/strategy/mode cases, exact equality"))
}

/// E[X] = 3/2 E[Y] exactly for every strategy.
fn corollary_identity() -> Outcome {
    let mut cases = 0;
    for prior in priors(1, 100) {
        let baseline = oracle_mean(&prior) * q("3/2");
        for (spec, k) in catalogue(&prior) {
            let r = exact_value(&prior, &spec, &k, EnvelopeMode::Open).map_err(|e| e.to_string())?;
            ensure(*r.e_x.as_rational() == baseline, || format!("{spec}: e_x {} != {baseline}", r.e_x))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} prior/strategy cases, exact equality"))
}

fn paradox_reproduction() -> Outcome {
    let hundred = amt("100");
    let naive = naive_value(&hundred, &SwitchProbability::always());
    ensure(naive == amt("125"), || format!("naive {naive}"))?;
    let gain = (naive.as_rational() - hundred.as_rational()) / hundred.as_rational();
    ensure(gain == q("1/4"), || format!("naive gain {gain}"))?;
    let correct = correct_open_value(&hundred, &SwitchProbability::always(), &amt("200/3"));
    ensure(correct == hundred, || format!("correct {correct}"))?;
    Ok("naive 125 (+25%), correct 100".into())
}

/// Four-outcome enumeration on {1: 1/2, 2: 1/2} with the decision rules
/// written out by hand.
fn prior_information_gain() -> Outcome {
    let prior = half_half();
    let k = PriorKnowledge::FullPrior(prior.clone());
    let threshold = q("3/2") * q("3/2");
    let mean_rule = |x: &Rational| x < &threshold;
    let bayes_rule = |x: &Rational| {
        let f = |v: &Rational| if *v == q("1") || *v == q("2") { q("1/2") } else { q("0") };
        let (w_lo, w_hi) = (f(x), f(&(x * q("1/2"))));
        let total = &w_lo + &w_hi;
        let gain = (&w_lo / &total) * x - (&w_hi / &total) * x * q("1/2");
        gain.is_positive()
    };
    let enumerate = |rule: &dyn Fn(&Rational) -> bool| -> Rational {
        let outcomes = [(q("1"), q("2")), (q("2"), q("1")), (q("2"), q("4")), (q("4"), q("2"))];
        outcomes.iter().map(|(x, other)| if rule(x) { other.clone() } else { x.clone() }).sum::<Rational>() / q("4")
    };
    for (spec, rule) in [
        (StrategySpec::MeanThreshold, &mean_rule as &dyn Fn(&Rational) -> bool),
        (StrategySpec::BayesArgmax, &bayes_rule),
    ] {
        let oracle = enumerate(rule);
        ensure(oracle == q("11/4"), || format!("{spec}: hand enumeration gives {oracle}"))?;
        let r = exact_value(&prior, &spec, &k, EnvelopeMode::Open).map_err(|e| e.to_string())?;
        ensure(*r.e_v.as_rational() == oracle, || format!("{spec}: engine {} vs oracle {oracle}", r.e_v))?;
        ensure(r.baseline == amt("9/4") && r.e_v > r.baseline, || format!("{spec}: no gain over {}", r.baseline))?;
    }
    Ok("mean_threshold and bayes_argmax: 11/4 > 9/4".into())
}

fn bound_rules() -> Outcome {
    let eps = q("1/1000");
    let tiny = q("1/1000000");
    let mut checks = 0;
    for (i, prior) in priors(5, 50).into_iter().enumerate() {
        let fallback = [sp("0"), sp("1/2"), sp("1")][i % 3].clone();
        let rule = StrategySpec::BoundsRule { fallback };
        let lo = prior.min_value().as_rational().clone();
        let hi = prior.max_value().as_rational().clone();
        let above: Vec<Rational> = vec![&hi + &eps, &hi * (q("1") + &tiny), &hi * q("2"), &hi * q("2") + q("1")];
        let below: Vec<Rational> = vec![&lo * q("2") - &eps, &lo * q("2") * (q("1") - &tiny), lo.clone(), &lo * q("1/2")]
            .into_iter()
            .filter(|x| x.is_positive())
            .collect();
        let s = |x: &Rational, k: &PriorKnowledge| {
            let obs = Observation::open(Amount::new(x.clone()).unwrap()).unwrap();
            switch_probability(&rule, &obs, k).map(|p| p.value().clone()).map_err(|e| e.to_string())
        };
        let both = PriorKnowledge::bounds_of(&prior);
        let max_only = PriorKnowledge::bounds(None, Some(prior.max_value().clone())).unwrap();
        let min_only = PriorKnowledge::bounds(Some(prior.min_value().clone()), None).unwrap();
        for x in &above {
            for k in [&both, &max_only] {
                let p = s(x, k)?;
                ensure(p.is_zero(), || format!("x = {x} > y_max = {hi}: switch prob {p}"))?;
                checks += 1;
            }
        }
        for x in &below {
            let p = s(x, &min_only)?;
            ensure(p.is_one(), || format!("x = {x} < 2 y_min = {}: switch prob {p}", &lo * q("2")))?;
            checks += 1;
            if *x <= hi {
                let p = s(x, &both)?;
                ensure(p.is_one(), || format!("x = {x} < 2 y_min with both bounds: switch prob {p}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} boundary-adjacent observations over 50 priors"))
}

fn oracle_equivalence() -> Outcome {
    let mut cases = 0;
    for prior in priors(6, 100) {
        for (spec, k) in catalogue(&prior) {
            let r = exact_value(&prior, &spec, &k, EnvelopeMode::Open).map_err(|e| e.to_string())?;
            let delta = decompose_correction(&prior, &spec, &k, EnvelopeMode::Open).map_err(|e| e.to_string())?;
            ensure(delta == r.correction, || format!("{spec}: closed form {delta} vs enumeration {}", r.correction))?;
            if let StrategySpec::MonotoneDecreasing(_) = spec {
                ensure(delta.is_positive(), || format!("{spec}: correction {delta} not positive"))?;
            }
            cases += 1;
        }
    }
    Ok(format!("{cases} prior/strategy cases, exact equality"))
}

fn monte_carlo_consistency() -> Outcome {
    let cfg = |seed| SimConfig {
        trials: 100_000,
        seed,
        sampler: SamplerSpec::Finite(half_half()),
        strategy: StrategySpec::Always,
        knowledge: PriorKnowledge::NoInformation,
        envelope_mode: EnvelopeMode::Open,
    };
    let mut inside = 0;
    for seed in 0..50 {
        let r = run_sim(&cfg(seed)).map_err(|e| e.to_string())?;
        if r.within(2.25, 4.0) {
            inside += 1;
        }
    }
    ensure(inside >= 49, || format!("9/4 inside the 4-stderr band in {inside}/50 runs"))?;
    let first = run_sim(&cfg(7)).map_err(|e| e.to_string())?;
    let again = run_sim(&cfg(7)).map_err(|e| e.to_string())?;
    ensure(first.mean.to_bits() == again.mean.to_bits() && first == again, || "same seed, different output".into())?;
    for workers in [2, 4, 8] {
        let r = run_sim_with_workers(&cfg(7), workers).map_err(|e| e.to_string())?;
        ensure(r.mean.to_bits() == first.mean.to_bits(), || format!("{workers} workers: mean {} vs {}", r.mean, first.mean))?;
    }
    Ok(format!("{inside}/50 seeds inside band; reproducible; workers 1/2/4/8 agree"))
}

fn clone_averaging() -> Outcome {
    let r = run_clones(&amt("100"), 100_000, 2026).map_err(|e| e.to_string())?;
    ensure((r.mean_x - 150.0).abs() <= 1.5, || format!("mean_x {}", r.mean_x))?;
    ensure((r.implied_y - 100.0).abs() <= 1.0, || format!("implied_y {}", r.implied_y))?;
    Ok(format!("mean_x {:.3}, implied_y {:.3}", r.mean_x, r.implied_y))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1", "oblivious strategies: E[V] = 3/2 E[Y]", Duration::from_secs(1), theorem_identity),
        ("AC2", "every strategy: E[X] = 3/2 E[Y]", Duration::from_secs(1), corollary_identity),
        ("AC3", "paradox: naive 125 vs correct 100", Duration::from_secs(1), paradox_reproduction),
        ("AC4", "prior information gain 11/4 vs 9/4", Duration::from_secs(1), prior_information_gain),
        ("AC5", "bound rules never/always switch", Duration::from_secs(1), bound_rules),
        ("AC6", "closed-form correction = enumeration", Duration::from_secs(2), oracle_equivalence),
        ("AC7", "Monte Carlo consistency and determinism", Duration::from_secs(30), monte_carlo_consistency),
        ("AC8", "clone averaging: mean X = 3/2 Y", Duration::from_secs(1), clone_averaging),
    ];
    let mut failed = 0;
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {id} {title}: {detail} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {title}: {why} ({elapsed:.2?})");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
