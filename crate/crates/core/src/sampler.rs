//! Random graph generation: an add/delete Markov chain whose stationary law
//! is uniform over labeled DAGs, i.i.d. uniform undirected graphs, and DAGs
//! with independent arcs along a fixed order.
//!
//! Every generator is seeded with ChaCha8. Multi-chain runs give chain `c` the
//! stream `c` of the master seed, so output depends on the seed and the
//! chain count but not on the number of threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{pair_count, EdgeIndexMap, Graph, IncrementalDag};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McmcConfig {
    pub n: usize,
    pub burn_in: u64,
    /// Steps between retained samples.
    pub thin: u64,
    pub seed: u64,
    pub sample_count: usize,
    /// Independent chains; samples are split between them as evenly as
    /// possible and concatenated in chain order.
    pub chains: usize,
}

impl McmcConfig {
    /// Default tuning: `⌈10 n² ln(n + 1)⌉` burn-in steps, thinning `n²`, one chain.
    pub fn new(n: usize, sample_count: usize, seed: u64) -> Self {
        McmcConfig { n, burn_in: default_burn_in(n), thin: default_thin(n), seed, sample_count, chains: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.thin < 1 {
            return Err(Error::InvalidArgument("thin must be at least 1".into()));
        }
        if self.sample_count < 1 {
            return Err(Error::InvalidArgument("sample count must be at least 1".into()));
        }
        if self.chains < 1 {
            return Err(Error::InvalidArgument("at least one chain is needed".into()));
        }
        if self.n == 0 || self.n > u32::MAX as usize {
            return Err(Error::InvalidArgument(format!("unsupported node count {}", self.n)));
        }
        Ok(())
    }

    /// Samples drawn by chain `c`.
    pub fn chain_share(&self, c: usize) -> usize {
        self.sample_count / self.chains + usize::from(c < self.sample_count % self.chains)
    }
}

pub fn default_burn_in(n: usize) -> u64 {
    let nf = n as f64;
    (10.0 * nf * nf * (nf + 1.0).ln()).ceil() as u64
}

pub fn default_thin(n: usize) -> u64 {
    (n * n).max(1) as u64
}

/// Outcome of one transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Added,
    Removed,
    /// The proposed arc would close a cycle.
    Rejected,
}

/// Deterministic part of the kernel: toggles `u -> v` unless adding it would
/// create a cycle.
pub fn apply_proposal(dag: &mut IncrementalDag, u: usize, v: usize) -> Move {
    if dag.remove_arc(u, v) {
        Move::Removed
    } else if dag.try_add_arc(u, v) {
        Move::Added
    } else {
        Move::Rejected
    }
}

/// Draws an ordered pair `(u, v)`, `u != v`, uniformly.
#[inline]
pub fn propose<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let u = rng.gen_range(0..n);
    let mut v = rng.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u, v)
}

/// One step of the chain in place. Graphs with fewer than two nodes have no
/// moves.
pub fn mcmc_step_in_place<R: Rng + ?Sized>(dag: &mut IncrementalDag, rng: &mut R) -> Move {
    if dag.nodes() < 2 {
        return Move::Rejected;
    }
    let (u, v) = propose(dag.nodes(), rng);
    apply_proposal(dag, u, v)
}

/// One step of the chain on an immutable graph.
pub fn mcmc_step<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<Graph> {
    let mut dag = IncrementalDag::from_graph(g)?;
    mcmc_step_in_place(&mut dag, rng);
    Ok(dag.to_graph())
}

/// A single chain started from the empty graph; each item is a retained
/// sample.
pub struct DagChain {
    dag: IncrementalDag,
    rng: ChaCha8Rng,
    thin: u64,
    remaining: usize,
}

impl DagChain {
    pub fn new(n: usize, burn_in: u64, thin: u64, rng: ChaCha8Rng, count: usize) -> Self {
        let mut chain = DagChain { dag: IncrementalDag::new(n), rng, thin: thin.max(1), remaining: count };
        for _ in 0..burn_in {
            mcmc_step_in_place(&mut chain.dag, &mut chain.rng);
        }
        chain
    }

    /// Chain `c` of a configuration.
    pub fn for_config(cfg: &McmcConfig, c: usize) -> Self {
        Self::new(cfg.n, cfg.burn_in, cfg.thin, chain_rng(cfg.seed, c as u64), cfg.chain_share(c))
    }

    /// Advances to the next retained state without materialising a graph.
    pub fn advance(&mut self) -> Option<&IncrementalDag> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        for _ in 0..self.thin {
            mcmc_step_in_place(&mut self.dag, &mut self.rng);
        }
        Some(&self.dag)
    }
}

impl Iterator for DagChain {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        self.advance().map(IncrementalDag::to_graph)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

/// Generator for stream `stream` of `seed`.
pub fn chain_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Approximately uniform DAGs from `cfg.chains` independent chains.
pub fn sample_uniform_dags(cfg: &McmcConfig) -> Result<Vec<Graph>> {
    cfg.validate()?;
    let parts: Vec<Vec<Graph>> =
        (0..cfg.chains).into_par_iter().map(|c| DagChain::for_config(cfg, c).collect()).collect();
    Ok(parts.concat())
}

/// Runs each chain in parallel, folding its retained states with `fold`
/// into a per-chain value. Results come back in chain order.
pub fn fold_uniform_dags<T, F>(cfg: &McmcConfig, init: impl Fn() -> T + Sync, fold: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut T, &IncrementalDag) + Sync,
{
    cfg.validate()?;
    Ok((0..cfg.chains)
        .into_par_iter()
        .map(|c| {
            let mut chain = DagChain::for_config(cfg, c);
            let mut acc = init();
            while let Some(dag) = chain.advance() {
                fold(&mut acc, dag);
            }
            acc
        })
        .collect())
}

/// Undirected graphs with each edge present independently with probability 1/2.
pub fn sample_uniform_ugs(n: usize, count: usize, seed: u64) -> Result<Vec<Graph>> {
    sample_independent_edges(n, 0.5, false, count, seed)
}

/// DAGs whose arcs `i -> j`, `i < j`, are present independently with
/// probability `beta`.
pub fn sample_independent_arcs(n: usize, beta: f64, count: usize, seed: u64) -> Result<Vec<Graph>> {
    sample_independent_edges(n, beta, true, count, seed)
}

fn sample_independent_edges(n: usize, p: f64, directed: bool, count: usize, seed: u64) -> Result<Vec<Graph>> {
    if count < 1 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("inclusion probability must lie in [0, 1], got {p}")));
    }
    let map = EdgeIndexMap::new(n);
    let pairs: Vec<(usize, usize)> = map.pairs().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let edges = pairs.iter().copied().filter(|_| rng.gen_bool(p));
        out.push(Graph::new(n, directed, edges)?);
    }
    debug_assert!(out.iter().all(|g| g.edge_count() <= pair_count(n)));
    Ok(out)
}
