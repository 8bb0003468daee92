use serde::{Deserialize, Serialize};

use crate::learn::{bootstrap_with, BootstrapRun, Dataset, HcConfig, LearnerSpec};
use crate::measures::{MeasureOptions, Normalized};
use crate::{Error, Result};

/// Values closer than this count as tied.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// Normalised total variance.
    Vt,
    /// Normalised generalised variance.
    Vg,
    /// Normalised Frobenius variability.
    Vf,
}

impl Criterion {
    pub fn value(self, n: &Normalized) -> f64 {
        match self {
            Criterion::Vt => n.var_t,
            Criterion::Vg => n.var_g,
            Criterion::Vf => n.var_f,
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vt" => Ok(Criterion::Vt),
            "vg" => Ok(Criterion::Vg),
            "vf" => Ok(Criterion::Vf),
            _ => Err(Error::InvalidArgument(format!("unknown criterion {s:?}; use vt, vg or vf"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub criterion: Criterion,
    pub index: usize,
    pub learner: String,
    pub value: f64,
    /// Another run matched the winning value; the earliest was kept.
    pub tie: bool,
    /// Per run: learner label and all three normalised measures.
    pub table: Vec<(String, Normalized)>,
}

fn argmin(values: &[f64]) -> (usize, bool) {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] - TIE_TOLERANCE {
            best = i;
        }
    }
    let ties = values.iter().filter(|&&v| (v - values[best]).abs() <= TIE_TOLERANCE).count();
    (best, ties > 1)
}

/// The run with the smallest normalised criterion. Runs must share the
/// dataset and the graph family.
pub fn select_algorithm(runs: &[BootstrapRun], criterion: Criterion) -> Result<Selection> {
    let first = runs.first().ok_or_else(|| Error::Empty("no runs to compare".into()))?;
    for r in runs {
        if r.family != first.family {
            return Err(Error::Incomparable(format!(
                "{} learns {} structures but {} learns {}",
                first.learner, first.family, r.learner, r.family
            )));
        }
        if r.dataset_fingerprint != first.dataset_fingerprint {
            return Err(Error::Incomparable(format!(
                "{} and {} were run on different datasets",
                first.learner, r.learner
            )));
        }
    }
    let values: Vec<f64> = runs.iter().map(|r| criterion.value(&r.report.normalized)).collect();
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidArgument("criterion value is NaN".into()));
    }
    let (index, tie) = argmin(&values);
    Ok(Selection {
        criterion,
        index,
        learner: runs[index].learner.clone(),
        value: values[index],
        tie,
        table: runs.iter().map(|r| (r.learner.clone(), r.report.normalized)).collect(),
    })
}

/// What the tuning parameter controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TuningKind {
    /// Mutual-information threshold of the skeleton learner.
    MiThreshold,
    /// Maximum in-degree for hill climbing (grid values are rounded).
    HcMaxParents,
}

impl TuningKind {
    pub fn learner(self, tau: f64) -> Result<LearnerSpec> {
        let spec = match self {
            TuningKind::MiThreshold => LearnerSpec::MiSkeleton { threshold: tau },
            TuningKind::HcMaxParents => {
                if !(tau >= 0.0 && tau.is_finite()) {
                    return Err(Error::InvalidArgument(format!("max parents must be a finite value >= 0, got {tau}")));
                }
                LearnerSpec::HcBic(HcConfig { max_parents: Some(tau.round() as usize), ..HcConfig::default() })
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningResult {
    pub kind: TuningKind,
    pub criterion: Criterion,
    pub best_tau: f64,
    pub best_index: usize,
    pub tie: bool,
    /// `(τ, criterion)` for every grid value, in grid order.
    pub curve: Vec<(f64, f64)>,
}

/// Bootstraps the learner at each grid value and returns the value with the
/// smallest criterion.
pub fn select_tuning(
    data: &Dataset,
    kind: TuningKind,
    grid: &[f64],
    replicates: usize,
    seed: u64,
    criterion: Criterion,
    opts: &MeasureOptions,
) -> Result<TuningResult> {
    if grid.is_empty() {
        return Err(Error::Empty("empty tuning grid".into()));
    }
    let mut curve = Vec::with_capacity(grid.len());
    for &tau in grid {
        let run = bootstrap_with(data, &kind.learner(tau)?, replicates, seed, opts)?;
        curve.push((tau, criterion.value(&run.report.normalized)));
    }
    let values: Vec<f64> = curve.iter().map(|c| c.1).collect();
    let (best_index, tie) = argmin(&values);
    Ok(TuningResult { kind, criterion, best_tau: grid[best_index], best_index, tie, curve })
}
