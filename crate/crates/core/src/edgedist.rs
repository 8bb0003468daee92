//! Multivariate Bernoulli and Trinomial distributions induced on the vertex
//! pairs by a (weighted) collection of graphs.
//!
//! Both are estimated from an [`EdgeTally`]: weighted counts of each pair's
//! nonzero states and of each pair-of-pairs' sign combinations. Zero-state
//! cells are recovered by subtraction, so a tally stays proportional to the
//! number of present edges rather than to `k`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{pair_count, ArcState, EdgeIndexMap, Graph};
use crate::matrix::SquareMatrix;
use crate::{Error, Result};

/// Largest `k` for which full pairwise joint tables are kept.
pub const DENSE_JOINT_LIMIT: usize = 2016;

const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Undirected graphs; one Bernoulli variable per pair.
    Bernoulli,
    /// DAGs; one `{-1, 0, +1}` variable per pair.
    Trinomial,
}

impl Family {
    pub fn for_graphs(directed: bool) -> Family {
        if directed {
            Family::Trinomial
        } else {
            Family::Bernoulli
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Family::Bernoulli => "bernoulli",
            Family::Trinomial => "trinomial",
        })
    }
}

// Sign cells of a pair-of-pairs (a, b), a < b: [(+,+), (+,-), (-,+), (-,-)].
#[inline]
fn sign_cell(sa: ArcState, sb: ArcState) -> usize {
    match (sa, sb) {
        (ArcState::Forward, ArcState::Forward) => 0,
        (ArcState::Forward, ArcState::Reverse) => 1,
        (ArcState::Reverse, ArcState::Forward) => 2,
        _ => 3,
    }
}

#[derive(Debug, Clone, PartialEq)]
enum JointTally {
    /// Upper triangle over pair indices, four sign cells each.
    Dense(Vec<[f64; 4]>),
    /// Upper triangle, `[same sign, opposite sign]` only.
    Compact(Vec<[f64; 2]>),
}

/// Weighted sufficient statistics for first and second moments.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeTally {
    map: EdgeIndexMap,
    directed: bool,
    graphs: u64,
    total_weight: f64,
    forward: Vec<f64>,
    reverse: Vec<f64>,
    joint: JointTally,
    scratch: Vec<(usize, ArcState)>,
}

impl EdgeTally {
    pub fn new(n: usize, directed: bool) -> Self {
        let k = pair_count(n);
        let tri = pair_count(k);
        let joint = if k <= DENSE_JOINT_LIMIT {
            JointTally::Dense(vec![[0.0; 4]; tri])
        } else {
            JointTally::Compact(vec![[0.0; 2]; tri])
        };
        EdgeTally {
            map: EdgeIndexMap::new(n),
            directed,
            graphs: 0,
            total_weight: 0.0,
            forward: vec![0.0; k],
            reverse: vec![0.0; k],
            joint,
            scratch: Vec::new(),
        }
    }

    pub fn map(&self) -> &EdgeIndexMap {
        &self.map
    }

    pub fn graphs(&self) -> u64 {
        self.graphs
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.joint, JointTally::Dense(_))
    }

    #[inline]
    fn tri(&self, a: usize, b: usize) -> usize {
        let k = self.map.len();
        a * (2 * k - a - 1) / 2 + (b - a - 1)
    }

    /// Adds one graph with the given non-negative weight. DAG tallies check
    /// acyclicity.
    pub fn push(&mut self, g: &Graph, weight: f64) -> Result<()> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidArgument(format!("weight must be finite and >= 0, got {weight}")));
        }
        if g.nodes() != self.map.nodes() {
            return Err(Error::SizeMismatch { expected: self.map.nodes(), found: g.nodes() });
        }
        if g.is_directed() != self.directed {
            return Err(if self.directed { Error::NotDirected } else { Error::NotUndirected });
        }
        if self.directed && !g.is_acyclic()? {
            return Err(Error::Cyclic);
        }
        let mut states = std::mem::take(&mut self.scratch);
        states.clear();
        states.extend(g.sparse_states(&self.map));
        states.sort_unstable_by_key(|&(idx, _)| idx);
        self.push_sparse(&states, weight);
        self.scratch = states;
        Ok(())
    }

    /// `states` must be sorted by pair index, nonzero entries only.
    pub(crate) fn push_sparse(&mut self, states: &[(usize, ArcState)], w: f64) {
        self.graphs += 1;
        self.total_weight += w;
        let k = self.map.len();
        for (pos, &(a, sa)) in states.iter().enumerate() {
            match sa {
                ArcState::Forward => self.forward[a] += w,
                ArcState::Reverse => self.reverse[a] += w,
                ArcState::Absent => continue,
            }
            let row = a * (2 * k - a - 1) / 2;
            match &mut self.joint {
                JointTally::Dense(cells) => {
                    for &(b, sb) in &states[pos + 1..] {
                        cells[row + b - a - 1][sign_cell(sa, sb)] += w;
                    }
                }
                JointTally::Compact(cells) => {
                    for &(b, sb) in &states[pos + 1..] {
                        cells[row + b - a - 1][usize::from(sa != sb)] += w;
                    }
                }
            }
        }
    }

    pub fn merge(&mut self, other: &EdgeTally) -> Result<()> {
        if self.map != other.map || self.directed != other.directed {
            return Err(Error::InvalidArgument("cannot merge tallies of different shapes".into()));
        }
        self.graphs += other.graphs;
        self.total_weight += other.total_weight;
        add_into(&mut self.forward, &other.forward);
        add_into(&mut self.reverse, &other.reverse);
        match (&mut self.joint, &other.joint) {
            (JointTally::Dense(a), JointTally::Dense(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    for c in 0..4 {
                        x[c] += y[c];
                    }
                }
            }
            (JointTally::Compact(a), JointTally::Compact(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    x[0] += y[0];
                    x[1] += y[1];
                }
            }
            _ => unreachable!("same k implies same joint layout"),
        }
        Ok(())
    }

    /// Folds a graph slice in fixed-size chunks (in parallel) and merges the
    /// chunk tallies in order, so the result does not depend on the thread count.
    pub fn from_graphs(graphs: &[Graph], weights: Option<&[f64]>, directed: bool) -> Result<Self> {
        let first = graphs.first().ok_or_else(|| Error::Empty("no graphs to fit".into()))?;
        let n = first.nodes();
        if let Some(w) = weights {
            if w.len() != graphs.len() {
                return Err(Error::InvalidArgument(format!("{} weights for {} graphs", w.len(), graphs.len())));
            }
        }
        let parts: Vec<Result<EdgeTally>> = graphs
            .par_chunks(CHUNK)
            .enumerate()
            .map(|(c, chunk)| {
                let mut t = EdgeTally::new(n, directed);
                for (i, g) in chunk.iter().enumerate() {
                    let w = weights.map_or(1.0, |w| w[c * CHUNK + i]);
                    t.push(g, w)?;
                }
                Ok(t)
            })
            .collect();
        let mut parts = parts.into_iter();
        let mut total = parts.next().expect("non-empty")?;
        for p in parts {
            total.merge(&p?)?;
        }
        Ok(total)
    }

    fn require_weight(&self) -> Result<f64> {
        if self.graphs == 0 {
            return Err(Error::Empty("no graphs in tally".into()));
        }
        if !(self.total_weight > 0.0) {
            return Err(Error::InvalidArgument("total weight must be positive".into()));
        }
        Ok(self.total_weight)
    }

    fn present_weight(&self, a: usize, b: usize) -> f64 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let t = self.tri(a, b);
        match &self.joint {
            JointTally::Dense(c) => c[t][0] + c[t][1] + c[t][2] + c[t][3],
            JointTally::Compact(c) => c[t][0] + c[t][1],
        }
    }

    /// Weighted `Σ w · t_a · t_b` for `a != b`.
    fn cross_weight(&self, a: usize, b: usize) -> f64 {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        let t = self.tri(a, b);
        match &self.joint {
            JointTally::Dense(c) => c[t][0] + c[t][3] - c[t][1] - c[t][2],
            JointTally::Compact(c) => c[t][0] - c[t][1],
        }
    }

    /// Loads exact counts: `nonzero` is `[forward, reverse]` per pair, `joint`
    /// the dense sign cells.
    pub(crate) fn load_counts(&mut self, graphs: u64, nonzero: &[[u64; 2]], joint: &[[u64; 4]]) {
        self.graphs = graphs;
        self.total_weight = graphs as f64;
        for (a, [f, r]) in nonzero.iter().enumerate() {
            self.forward[a] = *f as f64;
            self.reverse[a] = *r as f64;
        }
        self.joint = match &self.joint {
            JointTally::Dense(_) => JointTally::Dense(joint.iter().map(|c| c.map(|x| x as f64)).collect()),
            JointTally::Compact(_) => {
                JointTally::Compact(joint.iter().map(|c| [(c[0] + c[3]) as f64, (c[1] + c[2]) as f64]).collect())
            }
        };
    }

    /// Collapses directions: the tally of the skeletons.
    pub fn skeleton(&self) -> EdgeTally {
        let joint = match &self.joint {
            JointTally::Dense(c) => {
                JointTally::Dense(c.iter().map(|x| [x[0] + x[1] + x[2] + x[3], 0.0, 0.0, 0.0]).collect())
            }
            JointTally::Compact(c) => JointTally::Compact(c.iter().map(|x| [x[0] + x[1], 0.0]).collect()),
        };
        EdgeTally {
            map: self.map.clone(),
            directed: false,
            graphs: self.graphs,
            total_weight: self.total_weight,
            forward: self.forward.iter().zip(&self.reverse).map(|(f, r)| f + r).collect(),
            reverse: vec![0.0; self.map.len()],
            joint,
            scratch: Vec::new(),
        }
    }
}

fn add_into(a: &mut [f64], b: &[f64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// Moments of the multivariate Bernoulli distribution of the edges.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliSummary {
    tally: EdgeTally,
    p: Vec<f64>,
    sigma: SquareMatrix,
}

impl BernoulliSummary {
    pub fn from_tally(tally: EdgeTally) -> Result<Self> {
        if tally.directed {
            return Err(Error::NotUndirected);
        }
        let w = tally.require_weight()?;
        let k = tally.map.len();
        let p: Vec<f64> = tally.forward.iter().map(|f| f / w).collect();
        let mut sigma = SquareMatrix::zeros(k);
        for a in 0..k {
            sigma[(a, a)] = p[a] - p[a] * p[a];
            for b in (a + 1)..k {
                let s = tally.present_weight(a, b) / w - p[a] * p[b];
                sigma[(a, b)] = s;
                sigma[(b, a)] = s;
            }
        }
        Ok(BernoulliSummary { tally, p, sigma })
    }

    pub fn nodes(&self) -> usize {
        self.tally.map.nodes()
    }

    pub(crate) fn with_sigma(mut self, sigma: SquareMatrix) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    pub fn map(&self) -> &EdgeIndexMap {
        &self.tally.map
    }

    pub fn sample_count(&self) -> u64 {
        self.tally.graphs
    }

    pub fn total_weight(&self) -> f64 {
        self.tally.total_weight
    }

    /// Marginal success probabilities; also the mean vector.
    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn mean(&self) -> &[f64] {
        &self.p
    }

    /// `P(B_a = 1, B_b = 1)`; `p_a` on the diagonal.
    pub fn joint(&self, a: usize, b: usize) -> f64 {
        if a == b {
            self.p[a]
        } else {
            self.tally.present_weight(a, b) / self.tally.total_weight
        }
    }

    pub fn sigma(&self) -> &SquareMatrix {
        &self.sigma
    }

    pub fn correlation(&self, a: usize, b: usize) -> f64 {
        correlation(&self.sigma, a, b)
    }
}

/// Moments of the multivariate Trinomial distribution of the arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrinomialSummary {
    tally: EdgeTally,
    marginals: Vec<[f64; 3]>,
    mean: Vec<f64>,
    sigma: SquareMatrix,
}

impl TrinomialSummary {
    pub fn from_tally(tally: EdgeTally) -> Result<Self> {
        if !tally.directed {
            return Err(Error::NotDirected);
        }
        let w = tally.require_weight()?;
        let k = tally.map.len();
        let marginals: Vec<[f64; 3]> = (0..k)
            .map(|a| {
                let (f, r) = (tally.forward[a] / w, tally.reverse[a] / w);
                [r, (1.0 - f - r).max(0.0), f]
            })
            .collect();
        let mean: Vec<f64> = marginals.iter().map(|m| m[2] - m[0]).collect();
        let mut sigma = SquareMatrix::zeros(k);
        for a in 0..k {
            let [r, _, f] = marginals[a];
            sigma[(a, a)] = f + r - (f - r) * (f - r);
        }
        match &tally.joint {
            JointTally::Dense(cells) => {
                for a in 0..k {
                    for b in (a + 1)..k {
                        let c = &cells[tally.tri(a, b)];
                        let (pa, pb) = (&marginals[a], &marginals[b]);
                        let s = (c[0] / w - pa[2] * pb[2]) + (c[3] / w - pa[0] * pb[0])
                            - (c[2] / w - pa[0] * pb[2])
                            - (c[1] / w - pa[2] * pb[0]);
                        sigma[(a, b)] = s;
                        sigma[(b, a)] = s;
                    }
                }
            }
            JointTally::Compact(_) => {
                for a in 0..k {
                    for b in (a + 1)..k {
                        let s = tally.cross_weight(a, b) / w - mean[a] * mean[b];
                        sigma[(a, b)] = s;
                        sigma[(b, a)] = s;
                    }
                }
            }
        }
        Ok(TrinomialSummary { tally, marginals, mean, sigma })
    }

    pub fn nodes(&self) -> usize {
        self.tally.map.nodes()
    }

    pub(crate) fn with_sigma(mut self, sigma: SquareMatrix) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn k(&self) -> usize {
        self.marginals.len()
    }

    pub fn map(&self) -> &EdgeIndexMap {
        &self.tally.map
    }

    pub fn sample_count(&self) -> u64 {
        self.tally.graphs
    }

    pub fn total_weight(&self) -> f64 {
        self.tally.total_weight
    }

    /// `(p(-1), p(0), p(+1))` per pair.
    pub fn marginals(&self) -> &[[f64; 3]] {
        &self.marginals
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn sigma(&self) -> &SquareMatrix {
        &self.sigma
    }

    pub fn correlation(&self, a: usize, b: usize) -> f64 {
        correlation(&self.sigma, a, b)
    }

    /// 3x3 joint probability table of pairs `a` and `b`, rows indexed by the
    /// state of `a` in `(-1, 0, +1)` order. `None` above [`DENSE_JOINT_LIMIT`].
    pub fn pair_joint(&self, a: usize, b: usize) -> Option<[[f64; 3]; 3]> {
        let mut t = [[0.0; 3]; 3];
        if a == b {
            for (s, row) in t.iter_mut().enumerate() {
                row[s] = self.marginals[a][s];
            }
            return Some(t);
        }
        let JointTally::Dense(cells) = &self.tally.joint else {
            return None;
        };
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let w = self.tally.total_weight;
        let c = &cells[self.tally.tri(lo, hi)];
        // Rows: state of `lo`; columns: state of `hi`.
        t[2][2] = c[0] / w;
        t[2][0] = c[1] / w;
        t[0][2] = c[2] / w;
        t[0][0] = c[3] / w;
        let (ml, mh) = (&self.marginals[lo], &self.marginals[hi]);
        for s in [0, 2] {
            t[s][1] = (ml[s] - t[s][0] - t[s][2]).max(0.0);
            t[1][s] = (mh[s] - t[0][s] - t[2][s]).max(0.0);
        }
        t[1][1] = (1.0 - t.iter().flatten().sum::<f64>()).max(0.0);
        if a > b {
            let mut tr = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    tr[i][j] = t[j][i];
                }
            }
            t = tr;
        }
        Some(t)
    }
}

/// Either family's summary.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeSummary {
    Bernoulli(BernoulliSummary),
    Trinomial(TrinomialSummary),
}

impl EdgeSummary {
    pub fn family(&self) -> Family {
        match self {
            EdgeSummary::Bernoulli(_) => Family::Bernoulli,
            EdgeSummary::Trinomial(_) => Family::Trinomial,
        }
    }

    pub fn nodes(&self) -> usize {
        match self {
            EdgeSummary::Bernoulli(s) => s.nodes(),
            EdgeSummary::Trinomial(s) => s.nodes(),
        }
    }

    pub fn sigma(&self) -> &SquareMatrix {
        match self {
            EdgeSummary::Bernoulli(s) => s.sigma(),
            EdgeSummary::Trinomial(s) => s.sigma(),
        }
    }

    pub fn sample_count(&self) -> u64 {
        match self {
            EdgeSummary::Bernoulli(s) => s.sample_count(),
            EdgeSummary::Trinomial(s) => s.sample_count(),
        }
    }

    pub fn from_tally(tally: EdgeTally) -> Result<Self> {
        if tally.directed {
            TrinomialSummary::from_tally(tally).map(EdgeSummary::Trinomial)
        } else {
            BernoulliSummary::from_tally(tally).map(EdgeSummary::Bernoulli)
        }
    }
}

pub fn correlation(sigma: &SquareMatrix, a: usize, b: usize) -> f64 {
    let d = (sigma[(a, a)] * sigma[(b, b)]).sqrt();
    if d > 0.0 {
        sigma[(a, b)] / d
    } else {
        0.0
    }
}

/// Empirical multivariate Bernoulli of a collection of undirected graphs.
pub fn fit_bernoulli(graphs: &[Graph], weights: Option<&[f64]>) -> Result<BernoulliSummary> {
    BernoulliSummary::from_tally(EdgeTally::from_graphs(graphs, weights, false)?)
}

/// Empirical multivariate Trinomial of a collection of DAGs.
pub fn fit_trinomial(graphs: &[Graph], weights: Option<&[f64]>) -> Result<TrinomialSummary> {
    TrinomialSummary::from_tally(EdgeTally::from_graphs(graphs, weights, true)?)
}

/// Fits whichever family matches the graphs' directedness.
pub fn fit(graphs: &[Graph], weights: Option<&[f64]>) -> Result<EdgeSummary> {
    let first = graphs.first().ok_or_else(|| Error::Empty("no graphs to fit".into()))?;
    EdgeSummary::from_tally(EdgeTally::from_graphs(graphs, weights, first.is_directed())?)
}

/// `|T|`: the Bernoulli distribution of arc presence, ignoring direction.
pub fn abs_transform(t: &TrinomialSummary) -> BernoulliSummary {
    BernoulliSummary::from_tally(t.tally.skeleton()).expect("a valid trinomial summary has positive weight")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceParts {
    /// `VAR(|T_i|)`: uncertainty about presence.
    pub skeleton: f64,
    /// `4 p(+1) p(-1)`: uncertainty about direction.
    pub direction: f64,
}

impl VarianceParts {
    pub fn total(&self) -> f64 {
        self.skeleton + self.direction
    }
}

/// Splits `VAR(T_i)` into a presence part and a direction part.
pub fn variance_decomposition(t: &TrinomialSummary, pair: usize) -> Result<VarianceParts> {
    let m = t.marginals.get(pair).ok_or_else(|| Error::InvalidArgument(format!("pair index {pair} out of range")))?;
    Ok(variance_parts(m[0], m[2]))
}

pub fn variance_parts(reverse: f64, forward: f64) -> VarianceParts {
    let present = forward + reverse;
    VarianceParts { skeleton: present * (1.0 - present), direction: 4.0 * forward * reverse }
}
