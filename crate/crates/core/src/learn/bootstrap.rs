use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edgedist::{self, EdgeSummary, Family};
use crate::graph::Graph;
use crate::learn::{Dataset, LearnerSpec, StructureLearner};
use crate::measures::{summary_report, MeasureOptions, VariabilityReport};
use crate::sampler::chain_rng;
use crate::{Error, Result};

/// Structures learned from `replicates` resamples of one dataset, with the
/// variability report of their edge distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapRun {
    pub learner: String,
    pub learner_spec: Option<LearnerSpec>,
    pub family: Family,
    pub replicates: usize,
    pub seed: u64,
    pub dataset_fingerprint: String,
    pub dataset_rows: usize,
    pub graphs: Vec<Graph>,
    pub report: VariabilityReport,
}

impl BootstrapRun {
    /// Refits the edge distribution of the learned graphs.
    pub fn summary(&self) -> Result<EdgeSummary> {
        edgedist::fit(&self.graphs, None)
    }
}

pub fn bootstrap(data: &Dataset, learner: &LearnerSpec, replicates: usize, seed: u64) -> Result<BootstrapRun> {
    learner.validate()?;
    bootstrap_with(data, learner, replicates, seed, &MeasureOptions::default())
}

/// Replicate `r` resamples the rows with generator stream `r` of `seed`, so
/// results do not depend on scheduling.
pub fn bootstrap_with(
    data: &Dataset,
    learner: &dyn StructureLearner,
    replicates: usize,
    seed: u64,
    opts: &MeasureOptions,
) -> Result<BootstrapRun> {
    if replicates < 1 {
        return Err(Error::InvalidArgument("at least one replicate is needed".into()));
    }
    let rows = data.n_rows();
    let graphs: Vec<Graph> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = chain_rng(seed, r as u64);
            let idx: Vec<usize> = (0..rows).map(|_| rng.gen_range(0..rows)).collect();
            let g = learner.learn(&data.resample(&idx), rng.gen())?;
            if g.nodes() != data.n_vars() || g.is_directed() != (learner.family() == Family::Trinomial) {
                return Err(Error::InvalidGraph(format!(
                    "learner {} returned a graph of the wrong shape",
                    learner.label()
                )));
            }
            Ok(g)
        })
        .collect::<Result<_>>()?;
    let summary = edgedist::fit(&graphs, None)?;
    let report = summary_report(&summary, opts)?;
    Ok(BootstrapRun {
        learner: learner.label(),
        learner_spec: learner.spec(),
        family: learner.family(),
        replicates,
        seed,
        dataset_fingerprint: data.fingerprint(),
        dataset_rows: rows,
        graphs,
        report,
    })
}
