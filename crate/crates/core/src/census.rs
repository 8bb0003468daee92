//! Exhaustive enumeration of labeled DAGs and undirected graphs with exact
//! integer moment accumulators.
//!
//! The enumerator walks the vertex pairs in index order and assigns each a
//! state, pruning assignments that would close a cycle. Descendant sets are
//! kept as bitmasks, so the feasibility test for `u -> v` is a single bit
//! lookup. Counts are accumulated per search-tree node from subtree sizes
//! rather than per leaf.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edgedist::{BernoulliSummary, EdgeSummary, EdgeTally, Family, TrinomialSummary};
use crate::graph::{pair_count, ArcState, EdgeIndexMap, Graph};
use crate::matrix::SquareMatrix;
use crate::{Error, Result};

/// Largest DAG census run without an explicit opt-in.
pub const DAG_DEFAULT_LIMIT: usize = 6;
/// Largest DAG census run at all.
pub const DAG_HARD_LIMIT: usize = 7;
/// Largest undirected census.
pub const UG_LIMIT: usize = 7;
/// Largest size accepted by the brute-force `3^k` oracle.
pub const NAIVE_LIMIT: usize = 5;

/// Number of labeled DAGs for `n = 0..=7`.
pub const DAG_COUNTS: [u64; 8] = [1, 1, 3, 25, 543, 29281, 3781503, 1138779265];

// Joint sign cells of (a, b), a < b: [(+,+), (+,-), (-,+), (-,-)].
#[inline]
fn cell(sa: ArcState, sb: ArcState) -> usize {
    match (sa, sb) {
        (ArcState::Forward, ArcState::Forward) => 0,
        (ArcState::Forward, ArcState::Reverse) => 1,
        (ArcState::Reverse, ArcState::Forward) => 2,
        _ => 3,
    }
}

/// Exact counts of pair states and of pair-of-pairs joint states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusAccumulator {
    pub n: usize,
    pub k: usize,
    pub directed: bool,
    pub graph_count: u64,
    /// `[forward, reverse]` per pair. Absent counts are implied.
    nonzero: Vec<[u64; 2]>,
    /// Upper triangle over pair indices, sign cells `[++, +-, -+, --]`.
    joint: Vec<[u64; 4]>,
}

impl CensusAccumulator {
    fn new(n: usize, directed: bool) -> Self {
        let k = pair_count(n);
        CensusAccumulator {
            n,
            k,
            directed,
            graph_count: 0,
            nonzero: vec![[0; 2]; k],
            joint: vec![[0; 4]; pair_count(k)],
        }
    }

    #[inline]
    fn tri(&self, a: usize, b: usize) -> usize {
        a * (2 * self.k - a - 1) / 2 + (b - a - 1)
    }

    /// Adds `c` graphs whose nonzero states are `states` (sorted by pair).
    fn add(&mut self, states: &[(usize, ArcState)], c: u64) {
        self.graph_count += c;
        for (pos, &(a, sa)) in states.iter().enumerate() {
            self.nonzero[a][usize::from(sa == ArcState::Reverse)] += c;
            for &(b, sb) in &states[pos + 1..] {
                let t = self.tri(a, b);
                self.joint[t][cell(sa, sb)] += c;
            }
        }
    }

    fn merge(&mut self, other: &CensusAccumulator) {
        self.graph_count += other.graph_count;
        for (x, y) in self.nonzero.iter_mut().zip(&other.nonzero) {
            x[0] += y[0];
            x[1] += y[1];
        }
        for (x, y) in self.joint.iter_mut().zip(&other.joint) {
            for c in 0..4 {
                x[c] += y[c];
            }
        }
    }

    pub fn family(&self) -> Family {
        Family::for_graphs(self.directed)
    }

    pub fn map(&self) -> EdgeIndexMap {
        EdgeIndexMap::new(self.n)
    }

    /// Counts of `(-1, 0, +1)` for pair `a`.
    pub fn marginal_counts(&self, a: usize) -> [u64; 3] {
        let [f, r] = self.nonzero[a];
        [r, self.graph_count - f - r, f]
    }

    /// 3x3 joint counts of pairs `a` and `b`, rows by the state of `a` in
    /// `(-1, 0, +1)` order.
    pub fn joint_counts(&self, a: usize, b: usize) -> [[u64; 3]; 3] {
        let mut t = [[0u64; 3]; 3];
        if a == b {
            let m = self.marginal_counts(a);
            for s in 0..3 {
                t[s][s] = m[s];
            }
            return t;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let c = self.joint[self.tri(lo, hi)];
        t[2][2] = c[0];
        t[2][0] = c[1];
        t[0][2] = c[2];
        t[0][0] = c[3];
        let (ml, mh) = (self.marginal_counts(lo), self.marginal_counts(hi));
        for s in [0, 2] {
            t[s][1] = ml[s] - t[s][0] - t[s][2];
            t[1][s] = mh[s] - t[0][s] - t[2][s];
        }
        t[1][1] = self.graph_count - t.iter().flatten().sum::<u64>();
        if a > b {
            let mut tr = [[0u64; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    tr[i][j] = t[j][i];
                }
            }
            t = tr;
        }
        t
    }

    /// `(p(-1), p(0), p(+1))` for pair `a`.
    pub fn frequencies(&self, a: usize) -> [f64; 3] {
        let n = self.graph_count as f64;
        self.marginal_counts(a).map(|c| c as f64 / n)
    }

    /// Covariance numerator `N^2 · cov(a, b)` as an exact integer.
    pub fn covariance_numerator(&self, a: usize, b: usize) -> i128 {
        let n = self.graph_count as i128;
        let [fa, ra] = self.nonzero[a].map(i128::from);
        if a == b {
            return if self.directed { n * (fa + ra) - (fa - ra) * (fa - ra) } else { n * fa - fa * fa };
        }
        let [fb, rb] = self.nonzero[b].map(i128::from);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let c = self.joint[self.tri(lo, hi)].map(i128::from);
        if self.directed {
            n * (c[0] + c[3] - c[1] - c[2]) - (fa - ra) * (fb - rb)
        } else {
            n * c[0] - fa * fb
        }
    }

    pub fn covariance(&self, a: usize, b: usize) -> f64 {
        let n = self.graph_count as f64;
        self.covariance_numerator(a, b) as f64 / n / n
    }

    /// Covariance matrix from exact integer numerators.
    pub fn sigma(&self) -> SquareMatrix {
        let mut s = SquareMatrix::zeros(self.k);
        for a in 0..self.k {
            for b in a..self.k {
                let v = self.covariance(a, b);
                s[(a, b)] = v;
                s[(b, a)] = v;
            }
        }
        s
    }

    /// Expected number of present edges.
    pub fn mean_edge_count(&self) -> f64 {
        let total: u64 = self.nonzero.iter().map(|[f, r]| f + r).sum();
        total as f64 / self.graph_count as f64
    }

    fn tally(&self) -> EdgeTally {
        let mut t = EdgeTally::new(self.n, self.directed);
        t.load_counts(self.graph_count, &self.nonzero, &self.joint);
        t
    }

    /// The uniform Trinomial over all DAGs, with the exact covariance matrix.
    pub fn to_trinomial(&self) -> Result<TrinomialSummary> {
        if !self.directed {
            return Err(Error::NotDirected);
        }
        Ok(TrinomialSummary::from_tally(self.tally())?.with_sigma(self.sigma()))
    }

    /// The uniform Bernoulli over all undirected graphs, or the skeleton
    /// distribution of a DAG census.
    pub fn to_bernoulli(&self) -> Result<BernoulliSummary> {
        let mut t = self.tally();
        if self.directed {
            t = t.skeleton();
        }
        let b = BernoulliSummary::from_tally(t)?;
        if self.directed {
            Ok(b)
        } else {
            Ok(b.with_sigma(self.sigma()))
        }
    }

    pub fn to_summary(&self) -> Result<EdgeSummary> {
        if self.directed {
            self.to_trinomial().map(EdgeSummary::Trinomial)
        } else {
            self.to_bernoulli().map(EdgeSummary::Bernoulli)
        }
    }
}

fn check_dag_size(n: usize, allow_huge: bool) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("census needs at least one node".into()));
    }
    if n > DAG_HARD_LIMIT {
        return Err(Error::Infeasible(format!("DAG enumeration is limited to n <= {DAG_HARD_LIMIT}; got n = {n}")));
    }
    if n > DAG_DEFAULT_LIMIT && !allow_huge {
        return Err(Error::Infeasible(format!(
            "n = {n} enumerates {} DAGs; pass the allow-huge option to run it",
            DAG_COUNTS[n]
        )));
    }
    Ok(())
}

type Reach = [u8; 8];

/// `Some(updated)` when `u -> v` keeps the graph acyclic.
#[inline]
fn add_arc(reach: &Reach, n: usize, u: usize, v: usize) -> Option<Reach> {
    if reach[v] & (1 << u) != 0 {
        return None;
    }
    let gain = (1u8 << v) | reach[v];
    let mut next = *reach;
    for w in 0..n {
        if w == u || reach[w] & (1 << u) != 0 {
            next[w] |= gain;
        }
    }
    Some(next)
}

#[inline]
fn arc_of(pair: (usize, usize), s: ArcState) -> (usize, usize) {
    if s == ArcState::Forward {
        pair
    } else {
        (pair.1, pair.0)
    }
}

struct Walker<'a> {
    n: usize,
    directed: bool,
    pairs: &'a [(usize, usize)],
    acc: CensusAccumulator,
    prefix: Vec<(usize, ArcState)>,
}

impl Walker<'_> {
    fn nonzero_states(&self) -> &'static [ArcState] {
        if self.directed {
            &[ArcState::Forward, ArcState::Reverse]
        } else {
            &[ArcState::Forward]
        }
    }

    /// Number of completions from `slot` on; records counts of every state
    /// chosen at or after `slot`.
    fn walk(&mut self, slot: usize, reach: &Reach) -> u64 {
        if slot == self.pairs.len() {
            return 1;
        }
        let mut total = self.walk(slot + 1, reach);
        for &s in self.nonzero_states() {
            let next = if self.directed {
                let (u, v) = arc_of(self.pairs[slot], s);
                match add_arc(reach, self.n, u, v) {
                    Some(r) => r,
                    None => continue,
                }
            } else {
                *reach
            };
            self.prefix.push((slot, s));
            let c = self.walk(slot + 1, &next);
            self.prefix.pop();
            self.acc.nonzero[slot][usize::from(s == ArcState::Reverse)] += c;
            for i in 0..self.prefix.len() {
                let (a, sa) = self.prefix[i];
                let t = self.acc.tri(a, slot);
                self.acc.joint[t][cell(sa, s)] += c;
            }
            total += c;
        }
        total
    }
}

struct Partition {
    states: Vec<(usize, ArcState)>,
    reach: Reach,
}

fn partitions(n: usize, directed: bool, pairs: &[(usize, usize)], depth: usize) -> Vec<Partition> {
    let mut parts = vec![Partition { states: Vec::new(), reach: [0; 8] }];
    for (slot, &pair) in pairs.iter().enumerate().take(depth) {
        let mut next = Vec::with_capacity(parts.len() * 3);
        for p in parts {
            let options: &[ArcState] = if directed {
                &[ArcState::Absent, ArcState::Forward, ArcState::Reverse]
            } else {
                &[ArcState::Absent, ArcState::Forward]
            };
            for &s in options {
                let reach = match s {
                    ArcState::Absent => p.reach,
                    _ if !directed => p.reach,
                    _ => {
                        let (u, v) = arc_of(pair, s);
                        match add_arc(&p.reach, n, u, v) {
                            Some(r) => r,
                            None => continue,
                        }
                    }
                };
                let mut states = p.states.clone();
                if s != ArcState::Absent {
                    states.push((slot, s));
                }
                next.push(Partition { states, reach });
            }
        }
        parts = next;
    }
    parts
}

fn run_census(n: usize, directed: bool) -> CensusAccumulator {
    let map = EdgeIndexMap::new(n);
    let pairs: Vec<(usize, usize)> = map.pairs().collect();
    let depth = pairs.len().min(4);
    let parts = partitions(n, directed, &pairs, depth);
    let accs: Vec<CensusAccumulator> = parts
        .into_par_iter()
        .map(|p| {
            let mut w = Walker {
                n,
                directed,
                pairs: &pairs,
                acc: CensusAccumulator::new(n, directed),
                prefix: p.states.clone(),
            };
            let c = w.walk(depth, &p.reach);
            let mut acc = w.acc;
            // Prefix states are shared by all `c` completions of this partition.
            acc.add(&p.states, c);
            acc
        })
        .collect();
    let mut total = CensusAccumulator::new(n, directed);
    for a in &accs {
        total.merge(a);
    }
    total
}

/// Census of all labeled DAGs on `n <= 6` nodes.
pub fn census_dags(n: usize) -> Result<CensusAccumulator> {
    census_dags_with(n, false)
}

/// As [`census_dags`]; `allow_huge` admits `n = 7` (about 1.1e9 DAGs).
pub fn census_dags_with(n: usize, allow_huge: bool) -> Result<CensusAccumulator> {
    check_dag_size(n, allow_huge)?;
    Ok(run_census(n, true))
}

/// Census of all `2^k` undirected graphs on `n <= 7` nodes.
pub fn census_ugs(n: usize) -> Result<CensusAccumulator> {
    if n == 0 {
        return Err(Error::InvalidArgument("census needs at least one node".into()));
    }
    if n > UG_LIMIT {
        return Err(Error::Infeasible(format!("undirected enumeration is limited to n <= {UG_LIMIT}; got n = {n}")));
    }
    Ok(run_census(n, false))
}

/// Iterator over every labeled DAG on `n` nodes.
pub struct DagEnumerator {
    n: usize,
    pairs: Vec<(usize, usize)>,
    map: EdgeIndexMap,
    /// Next state option to try at each depth: 0 absent, 1 forward, 2 reverse.
    trial: Vec<u8>,
    states: Vec<ArcState>,
    /// `reach[d]` holds descendant sets before slot `d` is assigned.
    reach: Vec<Reach>,
    depth: usize,
    done: bool,
}

impl DagEnumerator {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_limit(n, false)
    }

    pub fn with_limit(n: usize, allow_huge: bool) -> Result<Self> {
        check_dag_size(n, allow_huge)?;
        let map = EdgeIndexMap::new(n);
        let pairs: Vec<(usize, usize)> = map.pairs().collect();
        let k = pairs.len();
        Ok(DagEnumerator {
            n,
            pairs,
            map,
            trial: vec![0; k],
            states: vec![ArcState::Absent; k],
            reach: vec![[0; 8]; k + 1],
            depth: 0,
            done: false,
        })
    }

    fn emit(&self) -> Graph {
        Graph::from_states(&self.map, true, &self.states).expect("enumerated states are valid")
    }
}

impl Iterator for DagEnumerator {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.done {
            return None;
        }
        let k = self.pairs.len();
        if k == 0 {
            self.done = true;
            return Some(Graph::empty(self.n, true));
        }
        loop {
            let d = self.depth;
            let mut advanced = false;
            while self.trial[d] < 3 {
                let s = [ArcState::Absent, ArcState::Forward, ArcState::Reverse][self.trial[d] as usize];
                self.trial[d] += 1;
                let next = if s == ArcState::Absent {
                    Some(self.reach[d])
                } else {
                    let (u, v) = arc_of(self.pairs[d], s);
                    add_arc(&self.reach[d], self.n, u, v)
                };
                if let Some(r) = next {
                    self.states[d] = s;
                    self.reach[d + 1] = r;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                if d == 0 {
                    self.done = true;
                    return None;
                }
                self.depth -= 1;
                continue;
            }
            if d + 1 == k {
                return Some(self.emit());
            }
            self.depth += 1;
            self.trial[d + 1] = 0;
        }
    }
}

/// Every labeled DAG on `n <= 6` nodes (`n = 7` with `allow_huge`).
pub fn enumerate_dags(n: usize) -> Result<DagEnumerator> {
    DagEnumerator::new(n)
}

/// Brute-force oracle: all `3^k` state vectors filtered by a separate
/// acyclicity check.
pub fn naive_dags(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > NAIVE_LIMIT {
        return Err(Error::Infeasible(format!("naive enumeration supports 1 <= n <= {NAIVE_LIMIT}")));
    }
    let map = EdgeIndexMap::new(n);
    let k = map.len();
    let total = 3usize.pow(k as u32);
    let mut out = Vec::new();
    let mut states = vec![ArcState::Absent; k];
    for mut code in 0..total {
        for s in states.iter_mut() {
            *s = ArcState::ALL[code % 3];
            code /= 3;
        }
        let g = Graph::from_states(&map, true, &states)?;
        if g.is_acyclic()? {
            out.push(g);
        }
    }
    Ok(out)
}

/// Accumulates an arbitrary graph collection one graph at a time.
pub fn accumulate<'a>(
    n: usize,
    directed: bool,
    graphs: impl IntoIterator<Item = &'a Graph>,
) -> Result<CensusAccumulator> {
    let map = EdgeIndexMap::new(n);
    let mut acc = CensusAccumulator::new(n, directed);
    let mut states = Vec::new();
    for g in graphs {
        g.check_map(&map)?;
        if g.is_directed() != directed {
            return Err(if directed { Error::NotDirected } else { Error::NotUndirected });
        }
        states.clear();
        states.extend(g.sparse_states(&map));
        states.sort_unstable_by_key(|&(i, _)| i);
        acc.add(&states, 1);
    }
    Ok(acc)
}

/// Published decimal values of the uniform-DAG moments, as printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PublishedMoments {
    pub n: usize,
    pub p_arrow: &'static str,
    pub p_zero: &'static str,
    pub variance: &'static str,
    /// `|cov|` between two pairs sharing a node.
    pub shared_cov: &'static str,
}

/// Printed values for `n = 3..=7`. The n = 7 covariance appears in print
/// as "0.82410"; the leading zero after the point was lost and is restored here.
pub const PUBLISHED: [PublishedMoments; 5] = [
    PublishedMoments { n: 3, p_arrow: "0.32", p_zero: "0.36", variance: "0.64", shared_cov: "0.08" },
    PublishedMoments { n: 4, p_arrow: "0.309392", p_zero: "0.381215", variance: "0.618784", shared_cov: "0.081031" },
    PublishedMoments { n: 5, p_arrow: "0.301082", p_zero: "0.397834", variance: "0.602165", shared_cov: "0.081691" },
    PublishedMoments { n: 6, p_arrow: "0.294562", p_zero: "0.410875", variance: "0.589124", shared_cov: "0.082121" },
    PublishedMoments { n: 7, p_arrow: "0.289390", p_zero: "0.421220", variance: "0.578780", shared_cov: "0.082410" },
];

pub fn published(n: usize) -> Option<&'static PublishedMoments> {
    PUBLISHED.iter().find(|p| p.n == n)
}

/// True when `printed` is `exact` rounded or truncated to the printed number
/// of decimals.
pub fn matches_printed(exact: f64, printed: &str) -> bool {
    let Some(decimals) = printed.split_once('.').map(|(_, f)| f.len()) else {
        return format!("{exact:.0}") == printed;
    };
    if format!("{exact:.decimals$}") == printed {
        return true;
    }
    let long = format!("{:.*}", decimals + 8, exact);
    let cut = long.len() - 8;
    &long[..cut] == printed
}

/// One quantity of a census compared with its printed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedCheck {
    pub n: usize,
    pub quantity: String,
    pub printed: String,
    pub exact: f64,
    pub matches: bool,
}

/// Compares a DAG census with the printed values for its size.
pub fn check_published(census: &CensusAccumulator) -> Result<Vec<PrintedCheck>> {
    if !census.directed || census.n < 3 {
        return Err(Error::InvalidArgument("published values cover DAG censuses with n >= 3".into()));
    }
    let p = published(census.n)
        .ok_or_else(|| Error::InvalidArgument(format!("no published values for n = {}", census.n)))?;
    let [minus, zero, plus] = census.frequencies(0);
    let map = census.map();
    let shared = census.covariance(map.index(0, 1), map.index(0, 2)).abs();
    let rows = [
        ("p(-1)", minus, p.p_arrow),
        ("p(+1)", plus, p.p_arrow),
        ("p(0)", zero, p.p_zero),
        ("variance", census.covariance(0, 0), p.variance),
        ("shared_cov", shared, p.shared_cov),
    ];
    Ok(rows
        .iter()
        .map(|&(q, exact, printed)| PrintedCheck {
            n: census.n,
            quantity: q.to_string(),
            printed: printed.to_string(),
            exact,
            matches: matches_printed(exact, printed),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    #[test]
    fn printed_digit_matching() {
        assert!(matches_printed(0.3010826, "0.301082"));
        assert!(matches_printed(336.0 / 543.0, "0.618784"));
        assert!(matches_printed(336.0 / 543.0, "0.618785"));
        assert!(matches_printed(0.32, "0.32"));
        assert!(!matches_printed(0.3010826, "0.301084"));
        assert!(!matches_printed(0.0824111, "0.08410"));
    }

    #[test]
    fn published_small_sizes_match() {
        for n in 3..=5 {
            let checks = check_published(&census_dags(n).unwrap()).unwrap();
            assert_eq!(checks.len(), 5);
            assert!(checks.iter().all(|c| c.matches), "{checks:?}");
        }
    }

    use super::*;
    use std::collections::BTreeSet;

    fn key(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    #[test]
    fn small_counts() {
        for n in 1..=5 {
            assert_eq!(enumerate_dags(n).unwrap().count() as u64, DAG_COUNTS[n], "n = {n}");
            assert_eq!(census_dags(n).unwrap().graph_count, DAG_COUNTS[n]);
        }
        let two: BTreeSet<_> = enumerate_dags(2).unwrap().map(|g| key(&g)).collect();
        assert_eq!(two, BTreeSet::from([vec![], vec![(0, 1)], vec![(1, 0)]]));
    }

    #[test]
    fn enumerator_matches_naive_oracle() {
        for n in 1..=4 {
            let a: BTreeSet<_> = enumerate_dags(n).unwrap().map(|g| key(&g)).collect();
            let b: BTreeSet<_> = naive_dags(n).unwrap().iter().map(key).collect();
            assert_eq!(a.len() as u64, DAG_COUNTS[n]);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn accumulators_agree_with_per_graph_counts() {
        for n in 1..=5 {
            let graphs = naive_dags(n).unwrap();
            assert_eq!(accumulate(n, true, &graphs).unwrap(), census_dags(n).unwrap(), "n = {n}");
        }
        for n in 1..=4 {
            let map = EdgeIndexMap::new(n);
            let graphs: Vec<Graph> = (0..1u32 << map.len())
                .map(|mask| {
                    let st: Vec<ArcState> = (0..map.len())
                        .map(|b| if mask >> b & 1 == 1 { ArcState::Forward } else { ArcState::Absent })
                        .collect();
                    Graph::from_states(&map, false, &st).unwrap()
                })
                .collect();
            assert_eq!(accumulate(n, false, &graphs).unwrap(), census_ugs(n).unwrap());
        }
    }

    #[test]
    fn size_limits() {
        assert!(matches!(census_dags(7), Err(Error::Infeasible(_))));
        assert!(matches!(census_dags_with(8, true), Err(Error::Infeasible(_))));
        assert!(matches!(census_ugs(8), Err(Error::Infeasible(_))));
        assert!(census_dags(0).is_err());
        assert!(enumerate_dags(12).is_err());
    }

    #[test]
    fn three_node_frequencies() {
        let c = census_dags(3).unwrap();
        for a in 0..3 {
            assert_eq!(c.marginal_counts(a), [8, 9, 8]);
            let f = c.frequencies(a);
            assert!((f[0] - 0.32).abs() < 1e-15 && (f[1] - 0.36).abs() < 1e-15);
            assert_eq!(c.covariance_numerator(a, a), 25 * 16);
        }
        assert!((c.covariance(0, 1).abs() - 0.08).abs() < 1e-15);
    }

    #[test]
    fn table_invariants_and_symmetries() {
        for n in 2..=5 {
            let c = census_dags(n).unwrap();
            for a in 0..c.k {
                let m = c.marginal_counts(a);
                assert_eq!(m.iter().sum::<u64>(), c.graph_count);
                assert_eq!(m[0], m[2]);
                for b in 0..c.k {
                    let t = c.joint_counts(a, b);
                    assert_eq!(t.iter().flatten().sum::<u64>(), c.graph_count);
                    for s in 0..3 {
                        assert_eq!(t[s].iter().sum::<u64>(), m[s]);
                        assert_eq!((0..3).map(|r| t[r][s]).sum::<u64>(), c.marginal_counts(b)[s]);
                    }
                    assert_eq!(t[2][2], t[0][0]);
                    assert_eq!(t[2][0], t[0][2]);
                    assert_eq!(t[1][2], t[1][0]);
                }
            }
        }
    }

    #[test]
    fn undirected_census_is_independent() {
        let c = census_ugs(4).unwrap();
        assert_eq!(c.graph_count, 64);
        assert_eq!(c.sigma(), SquareMatrix::scaled_identity(6, 0.25));
        let c3 = census_ugs(3).unwrap();
        assert_eq!(c3.joint_counts(0, 1)[2][2], 2);
        assert_eq!(c3.frequencies(0)[2], 0.5);
    }

    #[test]
    fn summaries_carry_exact_sigma() {
        let c = census_dags(4).unwrap();
        let t = c.to_trinomial().unwrap();
        assert_eq!(t.sigma(), &c.sigma());
        let fitted = crate::edgedist::fit_trinomial(&naive_dags(4).unwrap(), None).unwrap();
        for (x, y) in fitted.sigma().as_slice().iter().zip(c.sigma().as_slice()) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!(census_ugs(3).unwrap().to_trinomial().is_err());
    }
}
