use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use edgevar::census::{self, CensusAccumulator};
use edgevar::edgedist::{abs_transform, EdgeSummary, EdgeTally, Family};
use edgevar::learn::{self, BootstrapRun, Criterion, Dataset, LearnerSpec, TuningKind};
use edgevar::matrix::SquareMatrix;
use edgevar::measures::{self, MeasureOptions, Reduction, Source, VariabilityReport};
use edgevar::sampler::{self, McmcConfig};
use edgevar::spectral::{self, SpectralSummary};
use edgevar::Graph;

use crate::output::{self, RunManifest};
use crate::{CliError, SeedArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Auto,
    Bernoulli,
    Trinomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetArg {
    Exact,
    Approx,
}

impl From<TargetArg> for Source {
    fn from(t: TargetArg) -> Source {
        match t {
            TargetArg::Exact => Source::Exact,
            TargetArg::Approx => Source::Approximate,
        }
    }
}

/// `none`, `drop:<threshold>` or `shrink:<gamma>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionArg(pub Reduction);

impl FromStr for ReductionArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, value) = s.split_once(':').unwrap_or((s, ""));
        let number = || value.parse::<f64>().map_err(|_| format!("bad number in reduction '{s}'"));
        let r = match kind {
            "none" if value.is_empty() => Reduction::None,
            "drop" => Reduction::DropBelow(number()?),
            "shrink" => Reduction::Shrink(number()?),
            _ => return Err(format!("expected none, drop:<threshold> or shrink:<gamma>, got '{s}'")),
        };
        Ok(ReductionArg(r))
    }
}

/// `mi:<threshold>`, `hc` or `hc:<max parents>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnerArg(pub LearnerSpec);

impl FromStr for LearnerArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let spec = match s.split_once(':') {
            Some(("mi", t)) => {
                LearnerSpec::MiSkeleton { threshold: t.parse().map_err(|_| format!("bad threshold in '{s}'"))? }
            }
            None if s == "hc" => LearnerSpec::HcBic(learn::HcConfig::default()),
            Some(("hc", m)) => LearnerSpec::HcBic(learn::HcConfig {
                max_parents: Some(m.parse().map_err(|_| format!("bad parent limit in '{s}'"))?),
                ..learn::HcConfig::default()
            }),
            _ => return Err(format!("expected mi:<threshold>, hc or hc:<max parents>, got '{s}'")),
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(LearnerArg(spec))
    }
}

/// Inclusive `N..M`, or a single `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NodeRange {
    pub from: usize,
    pub to: usize,
}

impl FromStr for NodeRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad node count '{x}'"));
        let (from, to) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => (parse(s)?, parse(s)?),
        };
        if from > to {
            return Err(format!("empty range '{s}'"));
        }
        Ok(NodeRange { from, to })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TuneKindArg {
    Mi,
    HcMaxParents,
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    s.parse::<Criterion>().map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- census

#[derive(Debug, Args, Serialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub nodes: usize,
    /// Enumerate undirected graphs instead of DAGs.
    #[arg(long)]
    pub undirected: bool,
    /// Permit the n = 7 DAG census (about 1.1e9 graphs).
    #[arg(long)]
    pub allow_huge: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct JointTable {
    a: usize,
    b: usize,
    /// Rows: state of `a`; columns: state of `b`; states -1, 0, +1.
    counts: [[u64; 3]; 3],
}

#[derive(Debug, Serialize)]
struct CensusReport {
    manifest: RunManifest,
    family: Family,
    n: usize,
    k: usize,
    directed: bool,
    graph_count: u64,
    mean_edge_count: f64,
    /// Per pair, counts of states -1, 0, +1.
    marginal_counts: Vec<[u64; 3]>,
    marginals: Vec<Vec<f64>>,
    joint_tables: Vec<JointTable>,
    sigma: SquareMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    skeleton_sigma: Option<SquareMatrix>,
    spectral: SpectralSummary,
}

fn summary_marginals(s: &EdgeSummary) -> Vec<Vec<f64>> {
    match s {
        EdgeSummary::Bernoulli(b) => b.p().iter().map(|&p| vec![1.0 - p, p]).collect(),
        EdgeSummary::Trinomial(t) => t.marginals().iter().map(|m| m.to_vec()).collect(),
    }
}

pub fn census(a: &CensusArgs) -> Result<(), CliError> {
    let acc: CensusAccumulator =
        if a.undirected { census::census_ugs(a.nodes)? } else { census::census_dags_with(a.nodes, a.allow_huge)? };
    let summary = acc.to_summary()?;
    let family = acc.family();
    let skeleton_sigma = match &summary {
        EdgeSummary::Trinomial(_) => Some(acc.to_bernoulli()?.sigma().clone()),
        EdgeSummary::Bernoulli(_) => None,
    };
    let mut joint_tables = Vec::new();
    for x in 0..acc.k {
        for y in x + 1..acc.k {
            joint_tables.push(JointTable { a: x, b: y, counts: acc.joint_counts(x, y) });
        }
    }
    let report = CensusReport {
        manifest: RunManifest::new("census", a, None),
        family,
        n: acc.n,
        k: acc.k,
        directed: acc.directed,
        graph_count: acc.graph_count,
        mean_edge_count: acc.mean_edge_count(),
        marginal_counts: (0..acc.k).map(|x| acc.marginal_counts(x)).collect(),
        marginals: summary_marginals(&summary),
        joint_tables,
        spectral: spectral::eigenvalues_symmetric(summary.sigma(), family)?,
        sigma: summary.sigma().clone(),
        skeleton_sigma,
    };
    output::write_json(&a.out, &report)
}

// ---------------------------------------------------------------- sample

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub nodes: usize,
    #[arg(long)]
    pub samples: usize,
    /// Uniform undirected graphs (independent edges with probability 1/2).
    #[arg(long, conflicts_with = "beta")]
    pub undirected: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
    #[arg(long)]
    pub burn_in: Option<u64>,
    #[arg(long)]
    pub thin: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub chains: usize,
    /// Independent arcs i -> j (i < j) with this probability, instead of
    /// uniform DAGs.
    #[arg(long)]
    pub beta: Option<f64>,
    /// JSONL output, one graph per line; the run manifest goes to
    /// `<out>.manifest.json`.
    #[arg(long)]
    pub out: PathBuf,
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn sample(a: &SampleArgs) -> Result<(), CliError> {
    let seed = a.seed.seed;
    let graphs = if a.undirected {
        sampler::sample_uniform_ugs(a.nodes, a.samples, seed)?
    } else if let Some(beta) = a.beta {
        sampler::sample_independent_arcs(a.nodes, beta, a.samples, seed)?
    } else {
        let mut cfg = McmcConfig::new(a.nodes, a.samples, seed);
        cfg.chains = a.chains;
        if let Some(b) = a.burn_in {
            cfg.burn_in = b;
        }
        if let Some(t) = a.thin {
            cfg.thin = t;
        }
        sampler::sample_uniform_dags(&cfg)?
    };
    let mut w = output::create(&a.out)?;
    for g in &graphs {
        let line = serde_json::to_string(g).expect("graphs serialize");
        writeln!(w, "{line}").map_err(|e| CliError::output(&a.out, e))?;
    }
    w.flush().map_err(|e| CliError::output(&a.out, e))?;
    output::write_json(&sidecar(&a.out), &RunManifest::new("sample", a, Some(seed)))
}

// ---------------------------------------------------------------- summarize

#[derive(Debug, Args, Serialize)]
pub struct SummarizeArgs {
    /// Graph JSONL, one graph per line.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// One non-negative weight per graph; an optional `weight` header.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SummaryFile {
    pub manifest: RunManifest,
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub sample_count: u64,
    pub total_weight: f64,
    /// Seed of the run that produced the graphs, when known.
    pub source_seed: Option<u64>,
    /// Per pair: `[p(0), p(1)]` for Bernoulli, `[p(-1), p(0), p(+1)]` for Trinomial.
    pub marginals: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub sigma: SquareMatrix,
    /// Covariance of arc presence regardless of direction (Trinomial only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton_sigma: Option<SquareMatrix>,
}

fn read_graphs(path: &Path, bytes: &[u8]) -> Result<Vec<Graph>, CliError> {
    let mut graphs = Vec::new();
    for (i, line) in bytes.lines().enumerate() {
        let line = line.map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        if line.trim().is_empty() {
            continue;
        }
        let g: Graph = serde_json::from_str(&line)
            .map_err(|e| CliError::input(format!("{} line {}: {e}", path.display(), i + 1)))?;
        graphs.push(g);
    }
    Ok(graphs)
}

fn read_weights(path: &Path, bytes: &[u8]) -> Result<Vec<f64>, CliError> {
    let text = std::str::from_utf8(bytes).map_err(|_| CliError::input(format!("{} is not UTF-8", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let cell = line.trim();
        if cell.is_empty() || (i == 0 && cell.eq_ignore_ascii_case("weight")) {
            continue;
        }
        match cell.parse::<f64>() {
            Ok(w) if w.is_finite() && w >= 0.0 => out.push(w),
            _ => return Err(CliError::input(format!("{} line {}: bad weight '{cell}'", path.display(), i + 1))),
        }
    }
    Ok(out)
}

pub fn summarize(a: &SummarizeArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("summarize", a, None);
    let bytes = output::read_input(&a.input)?;
    manifest.add_input(&a.input, &bytes);
    let graphs = read_graphs(&a.input, &bytes)?;
    let first = graphs.first().ok_or_else(|| CliError::input(format!("{} holds no graphs", a.input.display())))?;
    let weights = match &a.weights {
        Some(p) => {
            let wb = output::read_input(p)?;
            manifest.add_input(p, &wb);
            let w = read_weights(p, &wb)?;
            if w.len() != graphs.len() {
                return Err(CliError::input(format!("{} weights for {} graphs", w.len(), graphs.len())));
            }
            Some(w)
        }
        None => None,
    };
    let tally = EdgeTally::from_graphs(&graphs, weights.as_deref(), first.is_directed())?;
    let total_weight = tally.total_weight();
    let summary = EdgeSummary::from_tally(tally)?;
    if summary.sample_count() != graphs.len() as u64 {
        return Err(CliError::failure(format!(
            "read {} graphs but summarised {}",
            graphs.len(),
            summary.sample_count()
        )));
    }
    let source_seed = std::fs::read(sidecar(&a.input))
        .ok()
        .and_then(|b| serde_json::from_slice::<RunManifest>(&b).ok())
        .and_then(|m| m.seed);
    let (mean, skeleton_sigma) = match &summary {
        EdgeSummary::Bernoulli(b) => (b.mean().to_vec(), None),
        EdgeSummary::Trinomial(t) => (t.mean().to_vec(), Some(abs_transform(t).sigma().clone())),
    };
    let file = SummaryFile {
        manifest,
        family: summary.family(),
        n: summary.nodes(),
        k: summary.sigma().dim(),
        sample_count: summary.sample_count(),
        total_weight,
        source_seed,
        marginals: summary_marginals(&summary),
        mean,
        sigma: summary.sigma().clone(),
        skeleton_sigma,
    };
    output::write_json(&a.out, &file)
}

// ---------------------------------------------------------------- measures

#[derive(Debug, Args, Serialize)]
pub struct MeasuresArgs {
    /// Output of `summarize` or `census`.
    #[arg(long)]
    pub summary: PathBuf,
    /// `bernoulli` on a DAG summary measures arc presence regardless of direction.
    #[arg(long, value_enum, default_value_t = FamilyArg::Auto)]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value_t = TargetArg::Approx)]
    pub target: TargetArg,
    #[arg(long, default_value = "drop:1e-12")]
    pub reduction: ReductionArg,
    #[arg(long)]
    pub out: PathBuf,
}

/// The fields `measures` needs from a summary or census report.
#[derive(Debug, Deserialize)]
struct MeasureInput {
    family: Family,
    n: usize,
    sigma: SquareMatrix,
    #[serde(default)]
    skeleton_sigma: Option<SquareMatrix>,
}

#[derive(Debug, Serialize)]
struct MeasuresFile {
    manifest: RunManifest,
    summary_family: Family,
    #[serde(flatten)]
    report: VariabilityReport,
    spectral: SpectralSummary,
}

pub fn measures(a: &MeasuresArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("measures", a, None);
    let bytes = output::read_input(&a.summary)?;
    manifest.add_input(&a.summary, &bytes);
    let input: MeasureInput =
        serde_json::from_slice(&bytes).map_err(|e| CliError::input(format!("{}: {e}", a.summary.display())))?;
    if input.sigma.dim() != edgevar::graph::pair_count(input.n) {
        return Err(CliError::input(format!(
            "sigma has dimension {} but n = {} needs {}",
            input.sigma.dim(),
            input.n,
            edgevar::graph::pair_count(input.n)
        )));
    }
    let (family, sigma) = match (a.family, input.family) {
        (FamilyArg::Auto, f) => (f, input.sigma),
        (FamilyArg::Bernoulli, Family::Bernoulli) | (FamilyArg::Trinomial, Family::Trinomial) => {
            (input.family, input.sigma)
        }
        (FamilyArg::Bernoulli, Family::Trinomial) => match input.skeleton_sigma {
            Some(s) => (Family::Bernoulli, s),
            None => return Err(CliError::input("the summary carries no skeleton covariance")),
        },
        (FamilyArg::Trinomial, Family::Bernoulli) => {
            return Err(CliError::usage("an undirected summary has no direction to measure"))
        }
    };
    let opts = MeasureOptions { reduction: a.reduction.0, target: a.target.into() };
    let report = measures::variability_report(&sigma, family, &opts)?;
    let file = MeasuresFile {
        manifest,
        summary_family: input.family,
        spectral: spectral::eigenvalues_symmetric(&sigma, family)?,
        report,
    };
    output::write_json(&a.out, &file)
}

// ---------------------------------------------------------------- maxent

#[derive(Debug, Args, Serialize)]
pub struct MaxentArgs {
    #[arg(long)]
    pub nodes: usize,
    #[arg(long, value_enum, default_value_t = FamilyArg::Trinomial)]
    pub family: FamilyArg,
    #[arg(long, value_enum, default_value_t = TargetArg::Approx)]
    pub source: TargetArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
struct MaxentFile {
    manifest: RunManifest,
    #[serde(flatten)]
    reference: measures::MaxEntReference,
}

pub fn maxent(a: &MaxentArgs) -> Result<(), CliError> {
    let family = match a.family {
        FamilyArg::Bernoulli => Family::Bernoulli,
        FamilyArg::Trinomial => Family::Trinomial,
        FamilyArg::Auto => return Err(CliError::usage("maxent needs --family bernoulli or trinomial")),
    };
    let reference = measures::maxent_reference(a.nodes, family, a.source.into())?;
    output::write_json(&a.out, &MaxentFile { manifest: RunManifest::new("maxent", a, None), reference })
}

// ---------------------------------------------------------------- bounds

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    /// Inclusive range such as `2..20`.
    #[arg(long)]
    pub nodes: NodeRange,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn bounds(a: &BoundsArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for n in a.nodes.from..=a.nodes.to {
        let b = measures::fmg_covariance_bound(n)?;
        let [p_arrow, p_zero, _] = measures::approx_marginals(n);
        rows.push(format!("{n},{},{},{p_arrow},{p_zero}", b.cov_bound, b.cor_bound));
    }
    let mut w = output::create(&a.out)?;
    let write = |w: &mut std::io::BufWriter<std::fs::File>| -> std::io::Result<()> {
        writeln!(w, "n,cov_bound,cor_bound,p_arrow,p_zero")?;
        for r in &rows {
            writeln!(w, "{r}")?;
        }
        w.flush()
    };
    write(&mut w).map_err(|e| CliError::output(&a.out, e))
}

// ---------------------------------------------------------------- learning

#[derive(Debug, Args, Serialize)]
pub struct LearnArgs {
    /// CSV with a header row and categorical cells.
    #[arg(long)]
    pub data: PathBuf,
    /// `mi:<threshold>`, `hc` or `hc:<max parents>`.
    #[arg(long)]
    pub learner: LearnerArg,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_enum, default_value_t = TargetArg::Approx)]
    pub target: TargetArg,
    #[arg(long, default_value = "drop:1e-12")]
    pub reduction: ReductionArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
struct RunFile {
    manifest: RunManifest,
    #[serde(flatten)]
    run: BootstrapRun,
}

fn load_dataset(path: &Path, manifest: &mut RunManifest) -> Result<Dataset, CliError> {
    let bytes = output::read_input(path)?;
    manifest.add_input(path, &bytes);
    Dataset::from_reader(bytes.as_slice()).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn learn_bootstrap(a: &LearnArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("learn-bootstrap", a, Some(a.seed.seed));
    let data = load_dataset(&a.data, &mut manifest)?;
    let opts = MeasureOptions { reduction: a.reduction.0, target: a.target.into() };
    let run = learn::bootstrap_with(&data, &a.learner.0, a.replicates, a.seed.seed, &opts)?;
    output::write_json(&a.out, &RunFile { manifest, run })
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// Outputs of `learn-bootstrap` on the same dataset.
    #[arg(long, num_args = 1.., required = true)]
    pub runs: Vec<PathBuf>,
    /// `vt`, `vg` or `vf`.
    #[arg(long, value_parser = parse_criterion, default_value = "vt")]
    pub criterion: Criterion,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct CompareFile {
    manifest: RunManifest,
    runs: Vec<String>,
    #[serde(flatten)]
    selection: learn::Selection,
}

pub fn compare(a: &CompareArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("compare", a, None);
    let mut runs = Vec::with_capacity(a.runs.len());
    for p in &a.runs {
        let bytes = output::read_input(p)?;
        manifest.add_input(p, &bytes);
        let f: RunFile =
            serde_json::from_slice(&bytes).map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
        runs.push(f.run);
    }
    let selection = learn::select_algorithm(&runs, a.criterion)?;
    println!("{:<4} {:<24} {:>12} {:>12} {:>12}", "run", "learner", "vt", "vg", "vf");
    for (i, (label, n)) in selection.table.iter().enumerate() {
        let mark = if i == selection.index { "*" } else { " " };
        println!("{i:<3}{mark} {label:<24} {:>12.6} {:>12.6} {:>12.6}", n.var_t, n.var_g, n.var_f);
    }
    if let Some(out) = &a.out {
        let runs = a.runs.iter().map(|p| p.display().to_string()).collect();
        output::write_json(out, &CompareFile { manifest, runs, selection })?;
    }
    Ok(())
}

#[derive(Debug, Args, Serialize)]
pub struct TuneArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum, default_value_t = TuneKindArg::Mi)]
    pub kind: TuneKindArg,
    /// Comma-separated parameter values, tried in order.
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    pub replicates: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_parser = parse_criterion, default_value = "vt")]
    pub criterion: Criterion,
    #[arg(long, value_enum, default_value_t = TargetArg::Approx)]
    pub target: TargetArg,
    /// CSV curve with columns tau, value, best.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn tune(a: &TuneArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("tune", a, Some(a.seed.seed));
    let data = load_dataset(&a.data, &mut manifest)?;
    let kind = match a.kind {
        TuneKindArg::Mi => TuningKind::MiThreshold,
        TuneKindArg::HcMaxParents => TuningKind::HcMaxParents,
    };
    let opts = MeasureOptions { target: a.target.into(), ..MeasureOptions::default() };
    let result = learn::select_tuning(&data, kind, &a.grid, a.replicates, a.seed.seed, a.criterion, &opts)?;
    let mut w = output::create(&a.out)?;
    let write = |w: &mut std::io::BufWriter<std::fs::File>| -> std::io::Result<()> {
        writeln!(w, "tau,value,best")?;
        for (i, (tau, v)) in result.curve.iter().enumerate() {
            writeln!(w, "{tau},{v},{}", i == result.best_index)?;
        }
        w.flush()
    };
    write(&mut w).map_err(|e| CliError::output(&a.out, e))?;
    output::write_json(&sidecar(&a.out), &manifest)?;
    println!("best tau {} ({} = {})", result.best_tau, a.criterion_name(), result.curve[result.best_index].1);
    Ok(())
}

impl TuneArgs {
    fn criterion_name(&self) -> &'static str {
        match self.criterion {
            Criterion::Vt => "vt",
            Criterion::Vg => "vg",
            Criterion::Vf => "vf",
        }
    }
}

// ---------------------------------------------------------------- verification

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Largest size to check (3..=6, or 7 with --allow-huge).
    #[arg(long, default_value_t = 5)]
    pub max_nodes: usize,
    #[arg(long)]
    pub allow_huge: bool,
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    if a.max_nodes < 3 {
        return Err(CliError::usage("--max-nodes must be at least 3"));
    }
    let mut failures = 0;
    println!("{:<3} {:<11} {:>10} {:>12}  result", "n", "quantity", "printed", "exact");
    for n in 3..=a.max_nodes {
        let acc = census::census_dags_with(n, a.allow_huge)?;
        for c in census::check_published(&acc)? {
            let verdict = if c.matches { "PASS" } else { "FAIL" };
            failures += usize::from(!c.matches);
            println!("{:<3} {:<11} {:>10} {:>12.9}  {verdict}", c.n, c.quantity, c.printed, c.exact);
        }
    }
    if failures > 0 {
        return Err(CliError::failure(format!("{failures} values differ from the printed tables")));
    }
    Ok(())
}
