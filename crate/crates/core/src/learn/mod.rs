//! Bootstrap estimation of edge distributions from data, and the choice of
//! learning algorithm or tuning parameter that minimises structural
//! variability.
//!
//! Two small learners are provided: a mutual-information skeleton (undirected)
//! and BIC hill climbing (DAGs). Anything implementing [`StructureLearner`]
//! can be bootstrapped.

mod bootstrap;
mod dataset;
mod hc;
mod mi;
mod select;

use serde::{Deserialize, Serialize};

use crate::edgedist::Family;
use crate::graph::Graph;
use crate::Result;

pub use bootstrap::{bootstrap, bootstrap_with, BootstrapRun};
pub use dataset::Dataset;
pub use hc::{hc_bic, hc_bic_detailed, BicScorer, HcConfig, HcResult, SCORE_TOLERANCE};
pub use mi::{mi_skeleton, mutual_information};
pub use select::{select_algorithm, select_tuning, Criterion, Selection, TuningKind, TuningResult};

/// A structure learner applied to one (resampled) dataset. `seed` is
/// derived per replicate for learners that need randomness.
pub trait StructureLearner: Sync {
    fn learn(&self, data: &Dataset, seed: u64) -> Result<Graph>;

    fn family(&self) -> Family;

    /// Short human-readable identifier.
    fn label(&self) -> String;

    /// Serializable description, when there is one.
    fn spec(&self) -> Option<LearnerSpec> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearnerSpec {
    MiSkeleton { threshold: f64 },
    HcBic(HcConfig),
}

impl LearnerSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            LearnerSpec::MiSkeleton { threshold } if threshold.is_nan() || *threshold < 0.0 => {
                Err(crate::Error::InvalidArgument(format!("threshold must be >= 0, got {threshold}")))
            }
            LearnerSpec::HcBic(c) if c.max_iter < 1 || c.restarts < 1 => {
                Err(crate::Error::InvalidArgument("max_iter and restarts must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }
}

impl StructureLearner for LearnerSpec {
    fn learn(&self, data: &Dataset, _seed: u64) -> Result<Graph> {
        match self {
            LearnerSpec::MiSkeleton { threshold } => mi_skeleton(data, *threshold),
            LearnerSpec::HcBic(cfg) => hc_bic(data, cfg),
        }
    }

    fn family(&self) -> Family {
        match self {
            LearnerSpec::MiSkeleton { .. } => Family::Bernoulli,
            LearnerSpec::HcBic(_) => Family::Trinomial,
        }
    }

    fn label(&self) -> String {
        match self {
            LearnerSpec::MiSkeleton { threshold } => format!("mi:{threshold}"),
            LearnerSpec::HcBic(c) => match c.max_parents {
                Some(m) => format!("hc:max_parents={m}"),
                None => "hc".to_string(),
            },
        }
    }

    fn spec(&self) -> Option<LearnerSpec> {
        Some(self.clone())
    }
}
