use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::learn::Dataset;
use crate::sampler::chain_rng;
use crate::{Error, Result};

/// Score differences at or below this, relative to the score's magnitude,
/// are treated as ties. Score-equivalent moves differ only by rounding.
pub const SCORE_TOLERANCE: f64 = 1e-9;

fn tolerance(score: f64) -> f64 {
    SCORE_TOLERANCE * (1.0 + score.abs())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HcConfig {
    pub max_iter: usize,
    /// Runs in total; the first starts from the empty graph, the others from
    /// random DAGs.
    pub restarts: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_parents: Option<usize>,
}

impl Default for HcConfig {
    fn default() -> Self {
        HcConfig { max_iter: 1000, restarts: 1, seed: 0, max_parents: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HcResult {
    pub graph: Graph,
    pub score: f64,
    /// Score after each accepted move of the winning run, starting point first.
    pub trace: Vec<f64>,
}

/// BIC of node families with cached local scores.
pub struct BicScorer<'a> {
    data: &'a Dataset,
    cache: HashMap<(usize, Vec<usize>), f64>,
    log_n: f64,
}

impl<'a> BicScorer<'a> {
    pub fn new(data: &'a Dataset) -> Self {
        BicScorer { data, cache: HashMap::new(), log_n: (data.n_rows() as f64).ln() }
    }

    /// Log-likelihood of `v` given `parents` minus `ln(N)/2` per free parameter.
    pub fn local(&mut self, v: usize, parents: &[usize]) -> f64 {
        let mut key = parents.to_vec();
        key.sort_unstable();
        if let Some(&s) = self.cache.get(&(v, key.clone())) {
            return s;
        }
        let s = self.compute(v, &key);
        self.cache.insert((v, key), s);
        s
    }

    fn compute(&self, v: usize, parents: &[usize]) -> f64 {
        let d = self.data;
        let r = d.arity(v);
        let q: f64 = parents.iter().map(|&p| d.arity(p) as f64).product();
        let mut counts: HashMap<u64, Vec<u64>> = HashMap::new();
        let child = d.column(v);
        for row in 0..d.n_rows() {
            let mut cfg = 0u64;
            for &p in parents {
                cfg = cfg.wrapping_mul(d.arity(p) as u64).wrapping_add(u64::from(d.column(p)[row]));
            }
            counts.entry(cfg).or_insert_with(|| vec![0; r])[child[row] as usize] += 1;
        }
        let mut ll = 0.0;
        let mut keys: Vec<_> = counts.keys().copied().collect();
        keys.sort_unstable();
        for key in keys {
            let c = &counts[&key];
            let total: u64 = c.iter().sum();
            for &x in c {
                if x > 0 {
                    ll += x as f64 * (x as f64 / total as f64).ln();
                }
            }
        }
        ll - 0.5 * self.log_n * q * (r as f64 - 1.0)
    }

    pub fn score(&mut self, parents: &[Vec<usize>]) -> f64 {
        (0..parents.len()).map(|v| self.local(v, &parents[v])).sum()
    }
}

fn reaches(parents: &[Vec<usize>], from: usize, to: usize) -> bool {
    // Walk up from `to` through parents looking for `from`.
    let mut seen = vec![false; parents.len()];
    let mut stack = vec![to];
    while let Some(w) = stack.pop() {
        if w == from {
            return true;
        }
        for &p in &parents[w] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    false
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Add(usize, usize),
    Delete(usize, usize),
    Reverse(usize, usize),
}

fn climb(scorer: &mut BicScorer, mut parents: Vec<Vec<usize>>, cfg: &HcConfig) -> HcResult {
    let p = parents.len();
    let cap = cfg.max_parents.unwrap_or(usize::MAX);
    let mut score = scorer.score(&parents);
    let mut trace = vec![score];
    for _ in 0..cfg.max_iter {
        let tol = tolerance(score);
        let mut best: Option<(f64, Op)> = None;
        let consider = |delta: f64, op: Op, best: &mut Option<(f64, Op)>| {
            if best.map_or(true, |(b, _)| delta > b + tol) {
                *best = Some((delta, op));
            }
        };
        for u in 0..p {
            for v in 0..p {
                if u == v {
                    continue;
                }
                let base_v = scorer.local(v, &parents[v]);
                if parents[v].contains(&u) {
                    let without: Vec<usize> = parents[v].iter().copied().filter(|&x| x != u).collect();
                    let drop = scorer.local(v, &without) - base_v;
                    consider(drop, Op::Delete(u, v), &mut best);
                    if parents[u].len() < cap {
                        let mut trial = parents.clone();
                        trial[v] = without.clone();
                        if !reaches(&trial, u, v) {
                            let mut with = parents[u].clone();
                            with.push(v);
                            let delta = drop + scorer.local(u, &with) - scorer.local(u, &parents[u]);
                            consider(delta, Op::Reverse(u, v), &mut best);
                        }
                    }
                } else if !parents[u].contains(&v) && parents[v].len() < cap && !reaches(&parents, v, u) {
                    let mut with = parents[v].clone();
                    with.push(u);
                    consider(scorer.local(v, &with) - base_v, Op::Add(u, v), &mut best);
                }
            }
        }
        match best {
            Some((delta, op)) if delta > tol => {
                match op {
                    Op::Add(u, v) => parents[v].push(u),
                    Op::Delete(u, v) => parents[v].retain(|&x| x != u),
                    Op::Reverse(u, v) => {
                        parents[v].retain(|&x| x != u);
                        parents[u].push(v);
                    }
                }
                score = scorer.score(&parents);
                trace.push(score);
            }
            _ => break,
        }
    }
    let arcs = parents.iter().enumerate().flat_map(|(v, ps)| ps.iter().map(move |&u| (u, v)));
    let graph = Graph::directed(p, arcs).expect("hill climbing keeps the graph acyclic");
    HcResult { graph, score, trace }
}

fn random_start<R: Rng>(p: usize, cap: usize, rng: &mut R) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(rng);
    let mut parents = vec![Vec::new(); p];
    for (pos, &v) in order.iter().enumerate() {
        for &u in &order[..pos] {
            if parents[v].len() < cap && rng.gen_bool(0.5) {
                parents[v].push(u);
            }
        }
    }
    parents
}

/// Greedy hill climbing on BIC with add, delete and reverse moves.
pub fn hc_bic_detailed(d: &Dataset, cfg: &HcConfig) -> Result<HcResult> {
    if cfg.max_iter < 1 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    if cfg.restarts < 1 {
        return Err(Error::InvalidArgument("at least one restart is needed".into()));
    }
    let p = d.n_vars();
    let mut scorer = BicScorer::new(d);
    let mut best: Option<HcResult> = None;
    for r in 0..cfg.restarts {
        let start = if r == 0 {
            vec![Vec::new(); p]
        } else {
            random_start(p, cfg.max_parents.unwrap_or(usize::MAX), &mut chain_rng(cfg.seed, r as u64))
        };
        let res = climb(&mut scorer, start, cfg);
        if best.as_ref().map_or(true, |b| res.score > b.score + tolerance(b.score)) {
            best = Some(res);
        }
    }
    Ok(best.expect("at least one restart"))
}

pub fn hc_bic(d: &Dataset, cfg: &HcConfig) -> Result<Graph> {
    hc_bic_detailed(d, cfg).map(|r| r.graph)
}
