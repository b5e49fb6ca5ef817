//! One function per subcommand. Each returns the text for stdout plus any
//! warnings destined for stderr.

use std::path::Path;

use envelope_core::exact::Cell;
use envelope_core::{
    conditional_gain, correct_open_value, exact_value, naive_value, parse_rational, posterior,
    run_clones, run_sim_with_workers, Amount, CloneResult, ExactReport, Rational, SimResult,
    SwitchProbability,
};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::render::{self, Format};
use crate::scenario::{load_finite_prior, Engine, Scenario};

/// Explanation printed with the paradox report.
pub const PARADOX_EXPLANATION: &str = "X is not a constant over the envelope choice: \
the hidden base Y is fixed, so switching is worth (3/2)·E[Y], not (5/4)·X";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub warnings: Vec<String>,
}

impl From<String> for Output {
    fn from(stdout: String) -> Self {
        Self { stdout, warnings: Vec::new() }
    }
}

fn row<const N: usize>(cells: [&str; N]) -> Vec<String> {
    cells.iter().map(|s| s.to_string()).collect()
}

fn exact_row(label: &str, value: &Rational) -> Vec<String> {
    let cell = Cell::of(value);
    vec![label.to_owned(), cell.exact, cell.approx]
}

pub fn parse_amount(flag: &str, raw: &str) -> Result<Amount, CliError> {
    let value = parse_rational(raw).map_err(|e| CliError::Validation(format!("--{flag}: {e}")))?;
    Amount::positive(value).map_err(|e| CliError::Validation(format!("--{flag}: {e}")))
}

pub fn parse_probability(flag: &str, raw: &str) -> Result<SwitchProbability, CliError> {
    raw.parse().map_err(|e| CliError::Validation(format!("--{flag}: {e}")))
}

fn exact_scenario(scenario: &Scenario) -> Result<(), CliError> {
    if scenario.engine != Engine::Exact {
        return Err(CliError::Validation("scenario does not use the exact engine".into()));
    }
    scenario.validate_strategies()
}

pub fn exact(scenario: &Scenario, format: Format) -> Result<Output, CliError> {
    exact_scenario(scenario)?;
    let prior = scenario.finite_prior()?;
    let spec = scenario.single_strategy()?;
    let report = exact_value(prior, spec, &scenario.knowledge, scenario.envelope_mode)?;
    render_exact(&report, &spec.name(), format).map(Output::from)
}

pub fn render_exact(report: &ExactReport, strategy: &str, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => render::json(report)?,
        Format::Csv => {
            let [e_y, e_x, e_v, baseline] =
                [&report.e_y, &report.e_x, &report.e_v, &report.baseline].map(|a| a.to_string());
            render::csv(&[
                row(["strategy", "e_y", "e_x", "e_v", "baseline", "correction"]),
                vec![strategy.to_owned(), e_y, e_x, e_v, baseline, report.correction.to_string()],
            ])
        }
        Format::Table => {
            let mut out = format!("strategy: {strategy}\n");
            out.push_str(&render::table(&[
                row(["quantity", "exact", "approx"]),
                exact_row("E[Y]", report.e_y.as_rational()),
                exact_row("E[X]", report.e_x.as_rational()),
                exact_row("E[V]", report.e_v.as_rational()),
                exact_row("3/2*E[Y]", report.baseline.as_rational()),
                exact_row("correction", &report.correction),
            ]));
            out
        }
    })
}

/// Monte Carlo result plus the seed that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub seed: u64,
    #[serde(flatten)]
    pub result: SimResult,
}

pub fn simulate(scenario: &Scenario, workers: usize, format: Format) -> Result<Output, CliError> {
    scenario.validate_strategies()?;
    let cfg = scenario.sim_config()?;
    let result = run_sim_with_workers(&cfg, workers)?;
    let mut warnings = Vec::new();
    if result.is_heavy_tailed() {
        warnings.push(format!(
            "warning: payoff excess kurtosis {:.1} exceeds {}; the confidence interval may be unreliable",
            result.excess_kurtosis,
            envelope_core::montecarlo::HEAVY_TAIL_KURTOSIS
        ));
    }
    let report = SimReport { seed: cfg.seed, result };
    Ok(Output { stdout: render_sim(&report, format)?, warnings })
}

pub fn render_sim(report: &SimReport, format: Format) -> Result<String, CliError> {
    let r = &report.result;
    Ok(match format {
        Format::Json => render::json(report)?,
        Format::Csv => render::csv(&[
            row(["mean", "stderr", "ci95_low", "ci95_high", "trials", "seed"]),
            [r.mean, r.stderr, r.ci95_low, r.ci95_high]
                .iter()
                .map(f64::to_string)
                .chain([r.trials.to_string(), report.seed.to_string()])
                .collect(),
        ]),
        Format::Table => render::table(&[
            row(["mean", &r.mean.to_string()]),
            row(["stderr", &r.stderr.to_string()]),
            row(["ci95", &format!("[{}, {}]", r.ci95_low, r.ci95_high)]),
            row(["trials", &r.trials.to_string()]),
            row(["seed", &report.seed.to_string()]),
        ]),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareRow {
    pub rank: usize,
    pub strategy: String,
    pub e_v: Cell,
    pub correction: Cell,
}

/// Exact value of every listed strategy, best first; ties go to the name
/// that sorts first.
pub fn compare_rows(scenario: &Scenario) -> Result<Vec<CompareRow>, CliError> {
    exact_scenario(scenario)?;
    let prior = scenario.finite_prior()?;
    let mut scored = scenario
        .strategies
        .iter()
        .map(|s| {
            let r = exact_value(prior, s, &scenario.knowledge, scenario.envelope_mode)?;
            Ok((s.name(), r))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    scored.sort_by(|(na, a), (nb, b)| b.e_v.cmp(&a.e_v).then_with(|| na.cmp(nb)));
    Ok(scored
        .into_iter()
        .enumerate()
        .map(|(i, (strategy, r))| CompareRow {
            rank: i + 1,
            strategy,
            e_v: Cell::of(r.e_v.as_rational()),
            correction: Cell::of(&r.correction),
        })
        .collect())
}

pub fn compare(scenario: &Scenario, format: Format) -> Result<Output, CliError> {
    let rows = compare_rows(scenario)?;
    render_compare(&rows, format).map(Output::from)
}

pub fn render_compare(rows: &[CompareRow], format: Format) -> Result<String, CliError> {
    let body = rows.iter().map(|r| {
        vec![r.rank.to_string(), r.strategy.clone(), r.e_v.exact.clone(), r.e_v.approx.clone(), r.correction.exact.clone()]
    });
    Ok(match format {
        Format::Json => render::json(&rows)?,
        Format::Csv => {
            let mut all = vec![row(["rank", "strategy", "e_v", "e_v_approx", "correction"])];
            all.extend(body);
            render::csv(&all)
        }
        Format::Table => {
            let mut all = vec![row(["rank", "strategy", "E[V]", "approx", "correction"])];
            all.extend(body);
            render::table(&all)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosteriorReport {
    pub x: Amount,
    pub p_lower: Cell,
    pub p_higher: Cell,
    pub conditional_gain: Cell,
    /// `"switch"` when the gain is strictly positive, else `"keep"`.
    pub action: String,
}

pub fn posterior_report(prior_path: &Path, x: &str) -> Result<PosteriorReport, CliError> {
    let prior = load_finite_prior(prior_path)?;
    let x = parse_amount("x", x)?;
    let post = posterior(&prior, &x)?;
    let gain = conditional_gain(&prior, &x)?;
    Ok(PosteriorReport {
        action: if gain.is_positive() { "switch" } else { "keep" }.into(),
        p_lower: Cell::of(&post.p_lower),
        p_higher: Cell::of(&post.p_higher),
        conditional_gain: Cell::of(&gain),
        x,
    })
}

pub fn posterior_cmd(prior_path: &Path, x: &str, format: Format) -> Result<Output, CliError> {
    let report = posterior_report(prior_path, x)?;
    render_posterior(&report, format).map(Output::from)
}

pub fn render_posterior(r: &PosteriorReport, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => render::json(r)?,
        Format::Csv => render::csv(&[
            row(["x", "p_lower", "p_higher", "conditional_gain", "action"]),
            vec![r.x.to_string(), r.p_lower.exact.clone(), r.p_higher.exact.clone(), r.conditional_gain.exact.clone(), r.action.clone()],
        ]),
        Format::Table => {
            let cell = |label: &str, c: &Cell| vec![label.to_owned(), c.exact.clone(), c.approx.clone()];
            render::table(&[
                row(["x", &r.x.to_string()]),
                cell("P(lower|x)", &r.p_lower),
                cell("P(higher|x)", &r.p_higher),
                cell("gain", &r.conditional_gain),
                row(["action", &r.action]),
            ])
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParadoxReport {
    pub naive: Cell,
    pub correct: Cell,
    /// `naive - correct`
    pub delta: Cell,
    pub explanation: String,
}

pub fn paradox_report(x: &str, mean_y: &str, p: &str) -> Result<ParadoxReport, CliError> {
    let x = parse_amount("x", x)?;
    let mean_y = parse_amount("mean-y", mean_y)?;
    let p = parse_probability("p", p)?;
    let naive = naive_value(&x, &p);
    let correct = correct_open_value(&x, &p, &mean_y);
    let delta = naive.as_rational() - correct.as_rational();
    Ok(ParadoxReport {
        naive: Cell::of(naive.as_rational()),
        correct: Cell::of(correct.as_rational()),
        delta: Cell::of(&delta),
        explanation: PARADOX_EXPLANATION.into(),
    })
}

pub fn paradox(x: &str, mean_y: &str, p: &str, format: Format) -> Result<Output, CliError> {
    let r = paradox_report(x, mean_y, p)?;
    Ok(Output::from(match format {
        Format::Json => render::json(&r)?,
        Format::Csv => render::csv(&[
            row(["naive", "correct", "delta", "explanation"]),
            vec![r.naive.exact, r.correct.exact, r.delta.exact, r.explanation],
        ]),
        Format::Table => {
            let cell = |label: &str, c: &Cell| vec![label.to_owned(), c.exact.clone(), format!("({})", c.approx)];
            let mut out = render::table(&[cell("naive", &r.naive), cell("correct", &r.correct), cell("delta", &r.delta)]);
            out.push_str(&r.explanation);
            out.push('\n');
            out
        }
    }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloneReport {
    pub seed: u64,
    #[serde(flatten)]
    pub result: CloneResult,
}

pub fn clones(y: &str, n: u64, seed: u64, format: Format) -> Result<Output, CliError> {
    let y = parse_amount("y", y)?;
    let result = run_clones(&y, n, seed)?;
    let r = CloneReport { seed, result };
    let c = &r.result;
    Ok(Output::from(match format {
        Format::Json => render::json(&r)?,
        Format::Csv => render::csv(&[
            row(["y", "clones", "seed", "mean_x", "implied_y"]),
            vec![c.y.to_string(), c.clones.to_string(), seed.to_string(), c.mean_x.to_string(), c.implied_y.to_string()],
        ]),
        Format::Table => render::table(&[
            row(["y", &c.y.to_string()]),
            row(["clones", &c.clones.to_string()]),
            row(["seed", &seed.to_string()]),
            row(["mean_x", &c.mean_x.to_string()]),
            row(["implied_y", &c.implied_y.to_string()]),
        ]),
    }))
}
