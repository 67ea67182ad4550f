//! Instance generators and the benchmark harness.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::decomposition::{heuristic_decompose, nicify, parse_td, NiceDecomposition, Strategy, TreeDecomposition};
use crate::engine::{solve_hamilton, solve_steiner, HamiltonMode, HamiltonOptions, RunLimits, SteinerOptions};
use crate::error::{Error, Result};
use crate::graph::{parse_gr, parse_terminals, Graph, SteinerInstance, Weight};
use crate::oracles::bell;
use crate::stats::{ReducePolicy, RunStats};

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Hamilton,
    Tsp,
    Steiner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Weight(Weight),
    Infeasible,
}

impl Answer {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Answer::Yes | Answer::Weight(_))
    }
}

impl Serialize for Answer {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Answer::Yes => s.serialize_str("yes"),
            Answer::No => s.serialize_str("no"),
            Answer::Infeasible => s.serialize_str("infeasible"),
            Answer::Weight(w) => s.serialize_u64(*w),
        }
    }
}

/// A problem input; the decomposition is computed when absent.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub terminals: Option<BTreeSet<usize>>,
    pub td: Option<TreeDecomposition>,
}

impl Instance {
    pub fn nice(&self) -> Result<NiceDecomposition> {
        match &self.td {
            Some(td) => nicify(td, &self.graph),
            None => nicify(&heuristic_decompose(&self.graph, Strategy::MinFill), &self.graph),
        }
    }
}

/// Runs one problem on a prepared decomposition.
pub fn solve_problem(
    problem: Problem,
    inst: &Instance,
    nd: &NiceDecomposition,
    policy: ReducePolicy,
    general_reduce: bool,
    limits: RunLimits,
) -> Result<(Answer, RunStats)> {
    match problem {
        Problem::Hamilton | Problem::Tsp => {
            let mode = if problem == Problem::Tsp {
                HamiltonMode::Tsp
            } else {
                HamiltonMode::Decision
            };
            let mut opts = HamiltonOptions::new(mode, policy);
            opts.general_reduce = general_reduce;
            opts.limits = limits;
            let out = solve_hamilton(&inst.graph, nd, opts)?;
            let answer = match (mode, out.cycle_weight) {
                (HamiltonMode::Decision, Some(_)) => Answer::Yes,
                (HamiltonMode::Decision, None) => Answer::No,
                (HamiltonMode::Tsp, Some(w)) => Answer::Weight(w),
                (HamiltonMode::Tsp, None) => Answer::Infeasible,
            };
            Ok((answer, out.stats))
        }
        Problem::Steiner => {
            let terminals = inst
                .terminals
                .clone()
                .ok_or_else(|| Error::Input(format!("{}: Steiner needs terminals", inst.name)))?;
            let st = SteinerInstance::new(inst.graph.clone(), terminals)?;
            let out = solve_steiner(&st, nd, SteinerOptions { policy, limits })?;
            Ok((out.weight.map_or(Answer::Infeasible, Answer::Weight), out.stats))
        }
    }
}

/// Random partial k-tree: a k-tree on `n` vertices whose edges are each kept
/// with probability `keep`. The k-tree's own decomposition (bags of `k+1`
/// vertices) stays valid for the subgraph.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KTreeSpec {
    pub n: usize,
    pub k: usize,
    pub keep: f64,
    pub max_weight: Weight,
    /// Attach every new vertex to the previous bag, giving a path decomposition.
    pub path_like: bool,
}

pub fn random_ktree(spec: &KTreeSpec, rng: &mut impl Rng) -> Result<(Graph, TreeDecomposition)> {
    let KTreeSpec { n, k, keep, max_weight, path_like } = *spec;
    if n < k + 1 {
        return Err(Error::Input(format!("a {k}-tree needs at least {} vertices", k + 1)));
    }
    if !(0.0..=1.0).contains(&keep) || max_weight == 0 {
        return Err(Error::Input("keep must be in [0,1] and max weight ≥ 1".into()));
    }
    let mut edges = Vec::new();
    for u in 0..=k {
        for v in u + 1..=k {
            edges.push((u, v));
        }
    }
    let mut bags: Vec<Vec<usize>> = vec![(0..=k).collect()];
    let mut tree = Vec::new();
    for v in k + 1..n {
        let parent = if path_like { bags.len() - 1 } else { rng.random_range(0..bags.len()) };
        let mut clique = bags[parent].clone();
        clique.remove(rng.random_range(0..clique.len()));
        for &u in &clique {
            edges.push((u, v));
        }
        clique.push(v);
        clique.sort_unstable();
        bags.push(clique);
        tree.push((parent, bags.len() - 1));
    }
    let mut weighted = Vec::with_capacity(edges.len());
    for (u, v) in edges {
        if rng.random_bool(keep) {
            weighted.push((u, v, rng.random_range(1..=max_weight)));
        }
    }
    let g = Graph::new(n, weighted)?;
    Ok((g, TreeDecomposition::new(n, bags, tree)))
}

/// The cycle `C_n` with a path decomposition of width 2 (bags `{0, i, i+1}`).
pub fn cycle_with_decomposition(n: usize) -> Result<(Graph, TreeDecomposition)> {
    if n < 3 {
        return Err(Error::Input("a cycle needs at least 3 vertices".into()));
    }
    let g = Graph::unweighted(n, (0..n).map(|i| (i, (i + 1) % n)))?;
    let bags: Vec<Vec<usize>> = (1..n - 1).map(|i| vec![0, i, i + 1]).collect();
    let tree = (1..bags.len()).map(|i| (i - 1, i)).collect();
    Ok((g, TreeDecomposition::new(n, bags, tree)))
}

/// Batch of generated instances; Steiner terminals are drawn uniformly.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorSpec {
    pub count: usize,
    pub ktree: KTreeSpec,
    pub terminals: usize,
    pub seed: u64,
}

pub fn generate(spec: &GeneratorSpec) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    for i in 0..spec.count {
        let (graph, td) = random_ktree(&spec.ktree, &mut rng)?;
        let mut ids: Vec<usize> = (0..graph.n()).collect();
        ids.shuffle(&mut rng);
        let terminals: BTreeSet<usize> = ids.into_iter().take(spec.terminals.max(1)).collect();
        out.push(Instance {
            name: format!("ktree-n{}-k{}-{i}", spec.ktree.n, spec.ktree.k),
            graph,
            terminals: Some(terminals),
            td: Some(td),
        });
    }
    Ok(out)
}

/// Reads every `*.gr` in `dir`, with optional `.td` and `.terminals`
/// siblings sharing the stem. Instances come back sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<Instance>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gr"))
        .collect();
    paths.sort();
    let mut out = Vec::with_capacity(paths.len());
    for path in paths {
        let read = |p: &Path| -> Result<String> { Ok(std::fs::read_to_string(p)?) };
        let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        let context = |e: Error| Error::Input(format!("{}: {e}", path.display()));
        let graph = parse_gr(&read(&path)?).map_err(context)?;
        let td_path = path.with_extension("td");
        let td = if td_path.exists() {
            Some(parse_td(&read(&td_path)?).map_err(context)?)
        } else {
            None
        };
        let term_path = path.with_extension("terminals");
        let terminals = if term_path.exists() {
            Some(parse_terminals(&read(&term_path)?, graph.n()).map_err(context)?)
        } else {
            None
        };
        out.push(Instance { name, graph, terminals, td });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub problems: Vec<Problem>,
    pub policies: Vec<ReducePolicy>,
    pub timeout: Option<Duration>,
    pub per_node_rows: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Timeout,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub instance: String,
    pub problem: Problem,
    pub policy: crate::stats::PolicyKind,
    pub threshold: Option<usize>,
    pub n: usize,
    pub m: usize,
    pub width: Option<usize>,
    pub status: Status,
    pub error: Option<String>,
    pub answer: Option<Answer>,
    /// Number of partitions of a full bag, the naive slice ceiling
    /// (saturates at `u64::MAX`).
    pub naive_ceiling: Option<u64>,
    /// `2^width`, the cap on a reduced full-bag slice.
    pub reduce_cap: Option<u64>,
    pub stats: Option<RunStats>,
}

fn run_one(inst: &Instance, problem: Problem, policy: ReducePolicy, cfg: &BenchConfig) -> BenchRecord {
    let mut rec = BenchRecord {
        instance: inst.name.clone(),
        problem,
        policy: policy.kind,
        threshold: policy.threshold,
        n: inst.graph.n(),
        m: inst.graph.m(),
        width: None,
        status: Status::Ok,
        error: None,
        answer: None,
        naive_ceiling: None,
        reduce_cap: None,
        stats: None,
    };
    let limits = RunLimits {
        deadline: cfg.timeout.map(|d| Instant::now() + d),
        per_node_rows: cfg.per_node_rows,
    };
    let result = inst.nice().and_then(|nd| {
        let w = nd.width();
        rec.width = Some(w);
        rec.naive_ceiling = Some(u64::try_from(bell(w + 1)).unwrap_or(u64::MAX));
        rec.reduce_cap = 1u64.checked_shl(w as u32);
        solve_problem(problem, inst, &nd, policy, false, limits)
    });
    match result {
        Ok((answer, stats)) => {
            rec.answer = Some(answer);
            rec.stats = Some(stats);
        }
        Err(Error::Timeout) => rec.status = Status::Timeout,
        Err(e) => {
            rec.status = Status::Error;
            rec.error = Some(e.to_string());
        }
    }
    rec
}

/// Worker pool sized by `TWREDUCE_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("TWREDUCE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::Input(format!("TWREDUCE_THREADS must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n.max(1));
    }
    builder.build().map_err(|e| Error::Input(e.to_string()))
}

/// One record per (instance, problem, policy), in input order.
pub fn run_bench(instances: &[Instance], cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let jobs: Vec<(&Instance, Problem, ReducePolicy)> = instances
        .iter()
        .flat_map(|i| {
            cfg.problems
                .iter()
                .flat_map(move |&p| cfg.policies.iter().map(move |&pol| (i, p, pol)))
        })
        .collect();
    let pool = thread_pool()?;
    Ok(pool.install(|| jobs.par_iter().map(|&(i, p, pol)| run_one(i, p, pol, cfg)).collect()))
}

#[derive(Serialize)]
pub struct BenchReport<'a> {
    pub schema_version: &'static str,
    pub kind: &'static str,
    pub records: &'a [BenchRecord],
}

pub fn to_json(records: &[BenchRecord], pretty: bool) -> Result<String> {
    let report = BenchReport {
        schema_version: SCHEMA_VERSION,
        kind: "bench",
        records,
    };
    let text = if pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    };
    text.map_err(|e| Error::Input(e.to_string()))
}

#[derive(Serialize)]
struct CsvRow<'a> {
    instance: &'a str,
    problem: Problem,
    policy: crate::stats::PolicyKind,
    threshold: Option<usize>,
    n: usize,
    m: usize,
    width: Option<usize>,
    status: Status,
    answer: Option<String>,
    naive_ceiling: Option<u64>,
    reduce_cap: Option<u64>,
    max_table_rows: Option<u64>,
    max_table_rows_before_reduce: Option<u64>,
    max_slice_rows: Option<u64>,
    max_slice_rows_after_reduce: Option<u64>,
    reduce_calls: Option<u64>,
    rows_eliminated: Option<u64>,
    rows_in: Option<u64>,
    rows_out: Option<u64>,
    xor_word_ops: Option<u64>,
    peak_memory_bytes: Option<u64>,
    nanos: Option<u64>,
    error: Option<&'a str>,
}

pub fn to_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        let s = r.stats.as_ref();
        w.serialize(CsvRow {
            instance: &r.instance,
            problem: r.problem,
            policy: r.policy,
            threshold: r.threshold,
            n: r.n,
            m: r.m,
            width: r.width,
            status: r.status,
            answer: r.answer.map(|a| match a {
                Answer::Weight(w) => w.to_string(),
                other => serde_json::to_value(other).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            }),
            naive_ceiling: r.naive_ceiling,
            reduce_cap: r.reduce_cap,
            max_table_rows: s.map(|s| s.max_table_rows),
            max_table_rows_before_reduce: s.map(|s| s.max_table_rows_before_reduce),
            max_slice_rows: s.map(|s| s.max_slice_rows),
            max_slice_rows_after_reduce: s.map(|s| s.max_slice_rows_after_reduce),
            reduce_calls: s.map(|s| s.reduce_calls),
            rows_eliminated: s.map(|s| s.rows_eliminated),
            rows_in: s.map(|s| s.reduce.rows_in),
            rows_out: s.map(|s| s.reduce.rows_out),
            xor_word_ops: s.map(|s| s.reduce.xor_word_ops),
            peak_memory_bytes: s.map(|s| s.peak_memory_bytes),
            nanos: s.map(|s| s.nanos),
            error: r.error.as_deref(),
        })
        .map_err(|e| Error::Input(e.to_string()))?;
    }
    if records.is_empty() {
        return Ok(String::new());
    }
    let bytes = w.into_inner().map_err(|e| Error::Input(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ktree_decomposition_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for path_like in [false, true] {
            for k in 1..5 {
                let spec = KTreeSpec { n: 15, k, keep: 0.7, max_weight: 5, path_like };
                let (g, td) = random_ktree(&spec, &mut rng).unwrap();
                td.validate(&g).unwrap();
                assert_eq!(td.width(), k);
                if path_like {
                    assert!(td.tree_edges().iter().all(|&(a, b)| b == a + 1));
                }
            }
        }
        let full = KTreeSpec { n: 8, k: 3, keep: 1.0, max_weight: 1, path_like: false };
        let (g, _) = random_ktree(&full, &mut rng).unwrap();
        assert_eq!(g.m(), 6 + 3 * 4);
    }

    #[test]
    fn cycle_decomposition() {
        let (g, td) = cycle_with_decomposition(7).unwrap();
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 2);
        assert!(cycle_with_decomposition(2).is_err());
    }

    #[test]
    fn generation_is_seeded() {
        let spec = GeneratorSpec {
            count: 3,
            ktree: KTreeSpec { n: 10, k: 3, keep: 0.8, max_weight: 9, path_like: false },
            terminals: 3,
            seed: 5,
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.graph, y.graph);
            assert_eq!(x.terminals, y.terminals);
        }
    }

    #[test]
    fn bench_records_per_policy() {
        let spec = GeneratorSpec {
            count: 2,
            ktree: KTreeSpec { n: 9, k: 2, keep: 0.9, max_weight: 9, path_like: false },
            terminals: 3,
            seed: 3,
        };
        let cfg = BenchConfig {
            problems: vec![Problem::Tsp, Problem::Steiner],
            policies: vec![ReducePolicy::NEVER, ReducePolicy::ALWAYS],
            timeout: None,
            per_node_rows: false,
        };
        let recs = run_bench(&generate(&spec).unwrap(), &cfg).unwrap();
        assert_eq!(recs.len(), 8);
        for pair in recs.chunks(2) {
            assert_eq!(pair[0].answer, pair[1].answer);
            assert_eq!(pair[0].status, Status::Ok);
            assert_eq!(pair[0].reduce_cap, Some(4));
            assert_eq!(pair[0].naive_ceiling, Some(5));
        }
        let csv = to_csv(&recs).unwrap();
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.starts_with("instance,problem,policy"));
    }

    #[test]
    fn empty_bench() {
        let cfg = BenchConfig {
            problems: vec![Problem::Hamilton],
            policies: vec![ReducePolicy::ALWAYS],
            timeout: None,
            per_node_rows: false,
        };
        let recs = run_bench(&[], &cfg).unwrap();
        assert!(recs.is_empty());
        assert_eq!(to_csv(&recs).unwrap(), "");
        let v: serde_json::Value = serde_json::from_str(&to_json(&recs, false).unwrap()).unwrap();
        assert_eq!(v["records"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn timeout_is_recorded() {
        let spec = GeneratorSpec {
            count: 1,
            ktree: KTreeSpec { n: 40, k: 6, keep: 1.0, max_weight: 9, path_like: false },
            terminals: 5,
            seed: 9,
        };
        let cfg = BenchConfig {
            problems: vec![Problem::Tsp],
            policies: vec![ReducePolicy::NEVER],
            timeout: Some(Duration::ZERO),
            per_node_rows: false,
        };
        let recs = run_bench(&generate(&spec).unwrap(), &cfg).unwrap();
        assert_eq!(recs[0].status, Status::Timeout);
    }
}
