use rayon::prelude::*;
use serde::Serialize;

use super::{regret, run_game, GameTrace, LearnerSpec, Protocol};
use crate::adversaries::{uniform_label_target, AdversaryFactory, AdversarySpec, Opponent};
use crate::class::{HypothesisClass, Stream, StreamExample, VersionSpace};
use crate::dimensions::{bldim, ldim};
use crate::error::{Error, Result};
use crate::learners::{regret_bounds, Learner};
use crate::seed::mix;

/// Two-sided 99% normal quantile.
const Z99: f64 = 2.576;

pub const SEED_RULE: &str = "trial i uses s_i = splitmix64(master + (i+1)*0x9E3779B97F4A7C15); \
     adversary seed mix(s_i, 0), learner seed mix(s_i, 1)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub loss: u64,
    pub best_loss: u64,
    pub regret: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// The empirical value must not exceed the bound.
    Upper,
    /// The empirical value must reach the bound.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub formula: String,
    pub kind: BoundKind,
    pub value: f64,
    /// Quantity compared against `value`, described by `compared`.
    pub empirical: f64,
    pub compared: String,
    pub satisfied: bool,
    /// Whether the bound provably applies to this learner/adversary pairing;
    /// other rows are informational.
    pub enforced: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretReport {
    pub learner: String,
    pub adversary: String,
    pub protocol: Protocol,
    pub horizon: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub seed_rule: &'static str,
    pub mean_loss: f64,
    pub mean_best_loss: f64,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub ci_half_width: f64,
    pub min_loss: u64,
    pub max_loss: u64,
    pub max_regret: i64,
    pub realizable_trials: usize,
    pub log_base: &'static str,
    pub bounds: Vec<BoundCheck>,
}

impl RegretReport {
    pub fn enforced_failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.bounds.iter().filter(|b| b.enforced && !b.satisfied)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Plays trial `trial_seed`: the adversary and the learner get independent
/// sub-seeds.
pub fn play_trial<F>(
    class: &HypothesisClass,
    learners: &F,
    adversaries: &AdversaryFactory,
    protocol: Protocol,
    horizon: usize,
    trial_seed: u64,
) -> Result<(GameTrace, TrialOutcome)>
where
    F: Fn(u64) -> Result<Learner>,
{
    let opponent = adversaries.build(mix(trial_seed, 0))?;
    let mut learner = learners(mix(trial_seed, 1))?;
    let mut trace = run_game(class, &mut learner, opponent, protocol, horizon)?;
    trace.adversary = adversaries.spec().to_string();
    trace.seed = Some(trial_seed);
    let outcome = regret(&trace, class);
    Ok((trace, outcome))
}

/// Runs `trials` independent games in parallel. Per-trial results are
/// integers combined in trial order, so the report does not depend on
/// scheduling.
pub fn monte_carlo<F>(
    class: &HypothesisClass,
    learners: F,
    adversaries: &AdversaryFactory,
    protocol: Protocol,
    horizon: usize,
    trials: usize,
    master_seed: u64,
) -> Result<RegretReport>
where
    F: Fn(u64) -> Result<Learner> + Sync,
{
    if trials == 0 {
        return Err(Error::Config("at least one trial is required".into()));
    }
    let results: Vec<Result<(String, TrialOutcome)>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            play_trial(class, &learners, adversaries, protocol, horizon, mix(master_seed, i))
                .map(|(trace, outcome)| (trace.learner, outcome))
        })
        .collect();
    let mut outcomes = Vec::with_capacity(trials);
    let mut learner = String::new();
    for r in results {
        let (name, outcome) = r?;
        if learner.is_empty() {
            learner = name;
        }
        outcomes.push(outcome);
    }

    let n = trials as i128;
    let sum: i128 = outcomes.iter().map(|o| o.regret as i128).sum();
    let sum_sq: i128 = outcomes.iter().map(|o| (o.regret as i128).pow(2)).sum();
    let loss_sum: u128 = outcomes.iter().map(|o| o.loss as u128).sum();
    let best_sum: u128 = outcomes.iter().map(|o| o.best_loss as u128).sum();
    let std = if trials > 1 {
        ((n * sum_sq - sum * sum) as f64 / (n * (n - 1)) as f64).max(0.0).sqrt()
    } else {
        0.0
    };
    Ok(RegretReport {
        learner,
        adversary: adversaries.spec().to_string(),
        protocol,
        horizon,
        trials,
        master_seed,
        seed_rule: SEED_RULE,
        mean_loss: loss_sum as f64 / trials as f64,
        mean_best_loss: best_sum as f64 / trials as f64,
        mean_regret: sum as f64 / trials as f64,
        std_regret: std,
        ci_half_width: Z99 * std / (trials as f64).sqrt(),
        min_loss: outcomes.iter().map(|o| o.loss).min().unwrap_or(0),
        max_loss: outcomes.iter().map(|o| o.loss).max().unwrap_or(0),
        max_regret: outcomes.iter().map(|o| o.regret).max().unwrap_or(0),
        realizable_trials: outcomes.iter().filter(|o| o.best_loss == 0).count(),
        log_base: "natural",
        bounds: Vec::new(),
    })
}

/// Exact expected mistakes of a deterministic learner against the uniform
/// adversary, averaging over its equally likely labels.
pub fn exact_uniform_expectation<F>(
    class: &HypothesisClass,
    learners: F,
    protocol: Protocol,
    horizon: usize,
) -> Result<f64>
where
    F: Fn(u64) -> Result<Learner>,
{
    let (x, labels) = uniform_label_target(class, horizon)?;
    if labels.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0u64;
    for &y in &labels {
        let mut learner = learners(0)?;
        if !learner.is_deterministic() {
            return Err(Error::Config("exact expectation needs a deterministic learner".into()));
        }
        let stream = Stream::new(vec![StreamExample { x, y }; horizon]);
        let trace = run_game(class, &mut learner, Opponent::Oblivious(stream), protocol, horizon)?;
        total += trace.cumulative_loss();
    }
    Ok(total as f64 / labels.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Dimensions {
    pub l: i32,
    pub bl: i32,
    pub c: usize,
}

impl Dimensions {
    pub fn of(v: &VersionSpace) -> Self {
        Self {
            l: ldim(v),
            bl: bldim(v),
            c: v.max_projection(),
        }
    }
}

fn upper(name: &str, formula: &str, value: f64, empirical: f64, compared: &str, enforced: bool) -> BoundCheck {
    BoundCheck {
        name: name.into(),
        formula: formula.into(),
        kind: BoundKind::Upper,
        value,
        empirical,
        compared: compared.into(),
        satisfied: empirical <= value,
        enforced,
    }
}

fn lower(name: &str, formula: &str, value: f64, empirical: f64, compared: &str, enforced: bool) -> BoundCheck {
    BoundCheck {
        name: name.into(),
        formula: formula.into(),
        kind: BoundKind::Lower,
        value,
        empirical,
        compared: compared.into(),
        satisfied: empirical >= value,
        enforced,
    }
}

/// Annotates `report` with the regret bounds that relate to it. Upper bounds
/// compare `mean + CI`; lower bounds on expected mistakes compare
/// `mean + CI` too, i.e. they fail only when the mean is significantly below.
pub fn bound_check(report: &mut RegretReport, dims: Dimensions, learner: Option<LearnerSpec>, adversary: &AdversarySpec) {
    let t = report.horizon;
    let (l, bl) = (dims.l.max(0) as u32, dims.bl.max(0) as u32);
    let b = regret_bounds(l, bl, dims.c, t);
    let upper_emp = report.mean_regret + report.ci_half_width;
    let bandit = report.protocol == Protocol::Bandit;
    let experts = bandit && learner == Some(LearnerSpec::Exp4Remap);
    let mut rows = vec![
        upper("optimal", "8*sqrt(L*BL*T*ln(T))", b.optimal, upper_emp, "mean_regret + ci", experts),
        upper(
            "experts_remapped",
            "e*sqrt(L*C*T*ln(T*C))",
            b.experts_remapped,
            upper_emp,
            "mean_regret + ci",
            experts,
        ),
        upper(
            "intermediate",
            "2e*sqrt(2*L*BL*T*ln(T))",
            b.intermediate,
            upper_emp,
            "mean_regret + ci",
            false,
        ),
    ];
    if b.trivial_regime {
        rows.push(upper(
            "trivial_regime",
            "BL (T <= BL)",
            bl as f64,
            upper_emp,
            "mean_regret + ci",
            false,
        ));
    }
    if learner == Some(LearnerSpec::Bsoa) && bandit && report.realizable_trials == report.trials {
        rows.push(upper("mistakes_at_most_bl", "BL", bl as f64, report.max_loss as f64, "max_loss", true));
    }
    if learner == Some(LearnerSpec::Soa) && report.realizable_trials == report.trials {
        rows.push(upper("mistakes_at_most_l", "L", l as f64, report.max_loss as f64, "max_loss", true));
    }
    match adversary {
        AdversarySpec::Uniform => {
            let d = dims.c.min(t) as f64;
            rows.push(lower(
                "uniform_lower",
                "(min(C,T)-1)/2",
                (d - 1.0).max(0.0) / 2.0,
                upper_emp,
                "mean_regret + ci",
                bandit,
            ));
        }
        AdversarySpec::BlTree if dims.c > 0 => {
            let d = (bl as usize).min(t) as f64;
            rows.push(lower(
                "bltree_lower",
                "min(BL,T)/C",
                d / dims.c as f64,
                upper_emp,
                "mean_regret + ci",
                bandit,
            ));
        }
        AdversarySpec::Adaptive => {
            rows.push(lower(
                "adaptive_lower",
                "min(BL,T)",
                (bl as usize).min(t) as f64,
                report.min_loss as f64,
                "min_loss",
                true,
            ));
        }
        _ => {}
    }
    report.bounds = rows;
}
