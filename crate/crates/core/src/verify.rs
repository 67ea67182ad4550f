//! Randomized checks of the engines and reductions against the oracles.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bench::{thread_pool, Answer, SCHEMA_VERSION};
use crate::decomposition::{heuristic_decompose, nicify, Strategy};
use crate::engine::{solve_hamilton, solve_steiner, HamiltonMode, HamiltonOptions, SteinerOptions};
use crate::error::Result;
use crate::graph::{Graph, SteinerInstance, Weight};
use crate::oracles;
use crate::partition::Partition;
use crate::reduce::{reduce, reduce_matchings};
use crate::stats::{ReducePolicy, RunStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Reduce,
    Hamilton,
    Steiner,
    All,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

/// Per-trial outcome; `failure` is `None` when every check agreed.
#[derive(Clone, Debug, Serialize)]
pub struct Trial {
    pub index: usize,
    pub n: usize,
    pub m: usize,
    pub checks: usize,
    pub failure: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub runs: Vec<TrialRun>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialRun {
    pub policy: crate::stats::PolicyKind,
    pub mode: &'static str,
    pub answer: Answer,
    pub stats: RunStats,
}

fn summarize(suite: &'static str, trials: &[Trial]) -> SuiteReport {
    SuiteReport {
        suite,
        trials: trials.len(),
        checks: trials.iter().map(|t| t.checks).sum(),
        failures: trials.iter().filter(|t| t.failure.is_some()).count(),
        first_failure: trials.iter().find_map(|t| t.failure.clone().map(|f| format!("trial {}: {f}", t.index))),
    }
}

/// Independent generator per (seed, suite, trial).
pub fn trial_rng(seed: u64, suite: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite << 32 | index as u64);
    rng
}

pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64, max_weight: Weight) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v, rng.random_range(1..=max_weight)));
            }
        }
    }
    Graph::new(n, edges).expect("generated edges are valid")
}

/// A table over `t` positions: each partition kept with probability 1/2,
/// random weights.
pub fn random_table(rng: &mut impl Rng, t: usize) -> Result<Vec<(Partition, Weight)>> {
    let mut rows = Vec::new();
    for p in oracles::partitions(t)? {
        if rng.random_bool(0.5) {
            rows.push((p, rng.random_range(0..50)));
        }
    }
    Ok(rows)
}

pub fn random_matching_table(rng: &mut impl Rng, t: usize) -> Result<Vec<(Partition, Weight)>> {
    let all = oracles::matchings(t)?;
    let keep = rng.random_range(0.1..1.0);
    let mut rows = Vec::new();
    for p in all {
        if rng.random_bool(keep) {
            rows.push((p, rng.random_range(0..50)));
        }
    }
    Ok(rows)
}

fn reduce_trial(rng: &mut ChaCha8Rng, index: usize, t: usize) -> Result<Trial> {
    let rows = random_table(rng, t)?;
    let (kept, stats) = reduce(&rows, t)?;
    let cap = 1usize << (t.max(1) - 1);
    let failure = if kept.len() > cap {
        Some(format!("t={t}: {} rows kept, cap {cap}", kept.len()))
    } else if stats.rows_out as usize != kept.len() {
        Some(format!("t={t}: stats report {} rows out", stats.rows_out))
    } else if !oracles::check_representative(&rows, &kept, t)? {
        Some(format!("t={t}: output does not represent input of {} rows", rows.len()))
    } else {
        None
    };
    Ok(Trial { index, n: t, m: rows.len(), checks: 2, failure, runs: Vec::new() })
}

fn matching_trial(rng: &mut ChaCha8Rng, index: usize, t: usize) -> Result<Trial> {
    let rows = random_matching_table(rng, t)?;
    let (kept, _) = reduce_matchings(&rows, t)?;
    let cap = 1usize << (t / 2).saturating_sub(1);
    let failure = if kept.len() > cap {
        Some(format!("t={t}: {} matchings kept, cap {cap}", kept.len()))
    } else if !oracles::check_matching_representative(&rows, &kept, t)? {
        Some(format!("t={t}: matching output does not represent input"))
    } else {
        None
    };
    Ok(Trial { index, n: t, m: rows.len(), checks: 2, failure, runs: Vec::new() })
}

/// Reduce on `per_t` random tables for each `t` in `1..=7`.
pub fn reduce_trials(seed: u64, per_t: usize) -> Result<Vec<Trial>> {
    let jobs: Vec<usize> = (1..=7).flat_map(|t| std::iter::repeat_n(t, per_t)).collect();
    jobs.par_iter()
        .enumerate()
        .map(|(i, &t)| reduce_trial(&mut trial_rng(seed, 1, i), i, t))
        .collect()
}

/// `reduce_matchings` on `per_t` random tables for each `t` in `{2,4,6,8}`.
pub fn matching_trials(seed: u64, per_t: usize) -> Result<Vec<Trial>> {
    let jobs: Vec<usize> = [2, 4, 6, 8].into_iter().flat_map(|t| std::iter::repeat_n(t, per_t)).collect();
    jobs.par_iter()
        .enumerate()
        .map(|(i, &t)| matching_trial(&mut trial_rng(seed, 4, i), i, t))
        .collect()
}

const POLICIES: [ReducePolicy; 2] = [ReducePolicy::NEVER, ReducePolicy::ALWAYS];

/// Decision and TSP under both policies on one graph, against the
/// permutation and Held-Karp oracles.
pub fn hamilton_trial(g: &Graph, index: usize, keep_runs: bool) -> Result<Trial> {
    let nd = nicify(&heuristic_decompose(g, Strategy::MinFill), g)?;
    let expect_yes = oracles::oracle_hamilton(g)?;
    let expect_tsp = oracles::oracle_tsp(g)?;
    let mut failure = None;
    let mut runs = Vec::new();
    let mut checks = 0;
    for policy in POLICIES {
        for mode in [HamiltonMode::Decision, HamiltonMode::Tsp] {
            let out = solve_hamilton(g, &nd, HamiltonOptions::new(mode, policy))?;
            checks += 1;
            let (answer, ok) = match mode {
                HamiltonMode::Decision => {
                    let a = if out.cycle_weight.is_some() { Answer::Yes } else { Answer::No };
                    (a, out.cycle_weight.is_some() == expect_yes)
                }
                HamiltonMode::Tsp => (
                    out.cycle_weight.map_or(Answer::Infeasible, Answer::Weight),
                    out.cycle_weight == expect_tsp,
                ),
            };
            let mode_name = if mode == HamiltonMode::Tsp { "tsp" } else { "decision" };
            if !ok && failure.is_none() {
                failure = Some(format!(
                    "{mode_name} under {:?}: got {:?}, oracle {:?}/{:?}\n{}",
                    policy.kind,
                    out.cycle_weight,
                    expect_yes,
                    expect_tsp,
                    g.to_gr()
                ));
            }
            if keep_runs {
                runs.push(TrialRun { policy: policy.kind, mode: mode_name, answer, stats: out.stats });
            }
        }
    }
    Ok(Trial { index, n: g.n(), m: g.m(), checks, failure, runs })
}

/// Random graphs with `n` drawn from `sizes` and edge density in `[0.2, 0.9)`.
pub fn hamilton_trials(seed: u64, count: usize, sizes: RangeInclusive<usize>, keep_runs: bool) -> Result<Vec<Trial>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, 2, i);
            let n = rng.random_range(sizes.clone());
            let density = rng.random_range(0.2..0.9);
            let g = random_graph(&mut rng, n, density, 20);
            hamilton_trial(&g, i, keep_runs)
        })
        .collect()
}

pub fn steiner_trial(inst: &SteinerInstance, index: usize) -> Result<Trial> {
    let g = &inst.graph;
    let nd = nicify(&heuristic_decompose(g, Strategy::MinDegree), g)?;
    let expect = oracles::oracle_steiner(inst)?;
    let mut failure = None;
    for policy in POLICIES {
        let got = solve_steiner(inst, &nd, SteinerOptions::new(policy))?.weight;
        if got != expect && failure.is_none() {
            failure = Some(format!(
                "under {:?}: got {got:?}, oracle {expect:?}, terminals {:?}\n{}",
                policy.kind,
                inst.terminals(),
                g.to_gr()
            ));
        }
    }
    Ok(Trial { index, n: g.n(), m: g.m(), checks: 2, failure, runs: Vec::new() })
}

/// `n` in `2..=10`, one to four terminals, weights in `1..=10`.
pub fn random_steiner(rng: &mut impl Rng) -> SteinerInstance {
    let n = rng.random_range(2..=10);
    let density = rng.random_range(0.2..0.8);
    let g = random_graph(rng, n, density, 10);
    let k = rng.random_range(1..=n.min(4));
    let mut terminals = BTreeSet::new();
    while terminals.len() < k {
        terminals.insert(rng.random_range(0..n));
    }
    SteinerInstance::new(g, terminals).expect("terminals in range")
}

pub fn steiner_trials(seed: u64, count: usize) -> Result<Vec<Trial>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(seed, 3, i);
            steiner_trial(&random_steiner(&mut rng), i)
        })
        .collect()
}

pub fn run(suite: Suite, trials: usize, seed: u64) -> Result<VerifyReport> {
    let pool = thread_pool()?;
    pool.install(|| {
        let mut suites = Vec::new();
        if matches!(suite, Suite::Reduce | Suite::All) {
            let mut all = reduce_trials(seed, trials)?;
            all.extend(matching_trials(seed, trials)?);
            suites.push(summarize("reduce", &all));
        }
        if matches!(suite, Suite::Hamilton | Suite::All) {
            suites.push(summarize("hamilton", &hamilton_trials(seed, trials, 3..=8, false)?));
        }
        if matches!(suite, Suite::Steiner | Suite::All) {
            suites.push(summarize("steiner", &steiner_trials(seed, trials)?));
        }
        let passed = suites.iter().all(|s| s.failures == 0);
        Ok(VerifyReport {
            schema_version: SCHEMA_VERSION,
            kind: "verify",
            seed,
            trials,
            suites,
            passed,
        })
    })
}

/// Drops every `nanos` field, recursively.
pub fn strip_timing(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(map) => {
            map.remove("nanos");
            map.values_mut().for_each(strip_timing);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(strip_timing),
        _ => {}
    }
}
