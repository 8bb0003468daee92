//! Graph representation, canonical pair indexing and acyclicity.
//!
//! Vertices are `0..n`. Undirected edges are stored as `(i, j)` with `i < j`;
//! directed arcs `(i, j)` mean `i -> j`. The vertex pairs `{i, j}`, `i < j`, are
//! numbered lexicographically by [`EdgeIndexMap`]; that order is also the sign
//! convention for arc states: for the pair `{i, j}` with `i < j`, `+1` is
//! `i -> j` and `-1` is `j -> i`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// State of a vertex pair: absent, or present in one of two directions.
///
/// Undirected graphs only use [`ArcState::Absent`] and [`ArcState::Forward`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(i8)]
pub enum ArcState {
    Reverse = -1,
    Absent = 0,
    Forward = 1,
}

impl ArcState {
    pub const ALL: [ArcState; 3] = [ArcState::Reverse, ArcState::Absent, ArcState::Forward];

    #[inline]
    pub fn value(self) -> i8 {
        self as i8
    }

    pub fn from_value(v: i8) -> Option<Self> {
        match v {
            -1 => Some(ArcState::Reverse),
            0 => Some(ArcState::Absent),
            1 => Some(ArcState::Forward),
            _ => None,
        }
    }

    /// Position of the state in `(-1, 0, +1)` order.
    #[inline]
    pub fn slot(self) -> usize {
        (self.value() + 1) as usize
    }

    #[inline]
    pub fn abs(self) -> ArcState {
        match self {
            ArcState::Absent => ArcState::Absent,
            _ => ArcState::Forward,
        }
    }
}

/// Lexicographic bijection between unordered pairs `{i, j}` and `0..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeIndexMap {
    n: usize,
    pairs: Vec<(u32, u32)>,
}

impl EdgeIndexMap {
    pub fn new(n: usize) -> Self {
        let k = pair_count(n);
        let mut pairs = Vec::with_capacity(k);
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i as u32, j as u32));
            }
        }
        EdgeIndexMap { n, pairs }
    }

    #[inline]
    pub fn nodes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Index of the unordered pair `{i, j}`; the argument order does not matter.
    ///
    /// Panics if `i == j` or either vertex is out of range.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        assert!(i != j && i < self.n && j < self.n, "invalid pair ({i}, {j})");
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    #[inline]
    pub fn pair(&self, idx: usize) -> (usize, usize) {
        let (i, j) = self.pairs[idx];
        (i as usize, j as usize)
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(i, j)| (i as usize, j as usize))
    }

    /// Whether two pairs share a vertex.
    pub fn incident(&self, a: usize, b: usize) -> bool {
        let (i, j) = self.pair(a);
        let (u, v) = self.pair(b);
        i == u || i == v || j == u || j == v
    }
}

/// `n(n-1)/2`.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Inverse of [`pair_count`], if `k` is a triangular number.
pub fn nodes_for_pairs(k: usize) -> Option<usize> {
    let n = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0).round() as usize;
    (pair_count(n) == k).then_some(n)
}

/// A simple labelled graph on `0..n`, directed or undirected.
///
/// The edge list is kept sorted and free of duplicates and self-loops. A
/// directed graph never holds both `(i, j)` and `(j, i)`. Acyclicity is not
/// part of the type; check it with [`Graph::is_acyclic`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<(u32, u32)>,
}

impl Graph {
    pub fn empty(n: usize, directed: bool) -> Self {
        Graph { n, directed, edges: Vec::new() }
    }

    pub fn directed<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(n, true, arcs)
    }

    pub fn undirected<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(n, false, edges)
    }

    pub fn new<I>(n: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(n, directed, edges)
    }

    fn build<I>(n: usize, directed: bool, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidGraph("a graph needs at least one vertex".into()));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidGraph(format!("too many vertices: {n}")));
        }
        let mut list = Vec::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("edge ({i}, {j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {i}")));
            }
            let e = if directed || i < j { (i as u32, j as u32) } else { (j as u32, i as u32) };
            list.push(e);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        if directed {
            for &(i, j) in &list {
                if i < j && list.binary_search(&(j, i)).is_ok() {
                    return Err(Error::InvalidGraph(format!("arcs {i}->{j} and {j}->{i} both present")));
                }
            }
        }
        Ok(Graph { n, directed, edges: list })
    }

    /// Builds a graph from a state vector indexed by `map`. Undirected graphs
    /// accept only `Absent` and `Forward`.
    pub fn from_states(map: &EdgeIndexMap, directed: bool, states: &[ArcState]) -> Result<Self> {
        if states.len() != map.len() {
            return Err(Error::InvalidArgument(format!(
                "state vector has length {}, expected {}",
                states.len(),
                map.len()
            )));
        }
        let mut edges = Vec::new();
        for (idx, &s) in states.iter().enumerate() {
            let (i, j) = map.pair(idx);
            match s {
                ArcState::Absent => {}
                ArcState::Forward => edges.push((i as u32, j as u32)),
                ArcState::Reverse if directed => edges.push((j as u32, i as u32)),
                ArcState::Reverse => return Err(Error::InvalidGraph("undirected graphs have no reverse state".into())),
            }
        }
        edges.sort_unstable();
        Ok(Graph { n: map.nodes().max(1), directed, edges })
    }

    #[inline]
    pub fn nodes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(i, j)| (i as usize, j as usize))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        let e = if self.directed || i < j { (i as u32, j as u32) } else { (j as u32, i as u32) };
        self.edges.binary_search(&e).is_ok()
    }

    /// True iff the digraph has a topological order (Kahn's algorithm).
    pub fn is_acyclic(&self) -> Result<bool> {
        if !self.directed {
            return Err(Error::NotDirected);
        }
        let mut indegree = vec![0usize; self.n];
        let mut children = vec![Vec::new(); self.n];
        for &(i, j) in &self.edges {
            indegree[j as usize] += 1;
            children[i as usize].push(j as usize);
        }
        let mut queue: VecDeque<usize> = (0..self.n).filter(|&v| indegree[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for &c in &children[v] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    queue.push_back(c);
                }
            }
        }
        Ok(seen == self.n)
    }

    /// Flips every arc.
    pub fn reverse_all(&self) -> Result<Graph> {
        if !self.directed {
            return Err(Error::NotDirected);
        }
        let mut edges: Vec<_> = self.edges.iter().map(|&(i, j)| (j, i)).collect();
        edges.sort_unstable();
        Ok(Graph { n: self.n, directed: true, edges })
    }

    /// Undirected graph with `{i, j}` wherever `i -> j` or `j -> i`.
    pub fn skeleton(&self) -> Result<Graph> {
        if !self.directed {
            return Err(Error::NotDirected);
        }
        let mut edges: Vec<_> = self.edges.iter().map(|&(i, j)| if i < j { (i, j) } else { (j, i) }).collect();
        edges.sort_unstable();
        Ok(Graph { n: self.n, directed: false, edges })
    }

    /// Dense state vector of length `k`.
    pub fn arc_state_vector(&self, map: &EdgeIndexMap) -> Result<Vec<ArcState>> {
        self.check_map(map)?;
        let mut out = vec![ArcState::Absent; map.len()];
        for (idx, s) in self.sparse_states(map) {
            out[idx] = s;
        }
        Ok(out)
    }

    /// `(pair index, state)` for each present edge, in edge-list order.
    pub fn sparse_states<'a>(&'a self, map: &'a EdgeIndexMap) -> impl Iterator<Item = (usize, ArcState)> + 'a {
        self.edges.iter().map(move |&(i, j)| {
            let (i, j) = (i as usize, j as usize);
            let s = if i < j { ArcState::Forward } else { ArcState::Reverse };
            (map.index(i, j), s)
        })
    }

    pub(crate) fn check_map(&self, map: &EdgeIndexMap) -> Result<()> {
        if map.nodes() != self.n {
            return Err(Error::SizeMismatch { expected: map.nodes(), found: self.n });
        }
        Ok(())
    }

    pub fn to_record(&self) -> GraphRecord {
        GraphRecord {
            n: self.n,
            directed: self.directed,
            edges: self.edges.iter().map(|&(i, j)| [i as usize, j as usize]).collect(),
        }
    }
}

/// One line of the graph JSONL interchange format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRecord {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRecord> for Graph {
    type Error = Error;

    fn try_from(r: GraphRecord) -> Result<Graph> {
        Graph::new(r.n, r.directed, r.edges.into_iter().map(|[i, j]| (i, j)))
    }
}

impl From<&Graph> for GraphRecord {
    fn from(g: &Graph) -> Self {
        g.to_record()
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GraphRecord::deserialize(d)?;
        Graph::try_from(r).map_err(serde::de::Error::custom)
    }
}

/// A DAG under single-arc insertions and deletions, with a dynamic
/// topological order (Pearce-Kelly) so that most insertion checks are O(1).
#[derive(Debug, Clone)]
pub struct IncrementalDag {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    out: Vec<Vec<u32>>,
    inc: Vec<Vec<u32>>,
    ord: Vec<u32>,
    arcs: usize,
    mark: Vec<u32>,
    epoch: u32,
    stack: Vec<usize>,
    fwd: Vec<usize>,
    back: Vec<usize>,
}

impl IncrementalDag {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        IncrementalDag {
            n,
            words,
            adj: vec![0; n * words],
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            ord: (0..n as u32).collect(),
            arcs: 0,
            mark: vec![0; n],
            epoch: 0,
            stack: Vec::new(),
            fwd: Vec::new(),
            back: Vec::new(),
        }
    }

    pub fn from_graph(g: &Graph) -> Result<Self> {
        if !g.is_directed() {
            return Err(Error::NotDirected);
        }
        let mut dag = IncrementalDag::new(g.nodes());
        for (i, j) in g.edges() {
            if !dag.try_add_arc(i, j) {
                return Err(Error::Cyclic);
            }
        }
        Ok(dag)
    }

    #[inline]
    pub fn nodes(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arcs
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn children(&self, u: usize) -> &[u32] {
        &self.out[u]
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) -> bool {
        if !self.has_arc(u, v) {
            return false;
        }
        self.adj[u * self.words + v / 64] &= !(1u64 << (v % 64));
        let p = self.out[u].iter().position(|&x| x as usize == v).unwrap();
        self.out[u].swap_remove(p);
        let p = self.inc[v].iter().position(|&x| x as usize == u).unwrap();
        self.inc[v].swap_remove(p);
        self.arcs -= 1;
        true
    }

    /// Inserts `u -> v` unless it would close a cycle. Returns whether the
    /// arc is present afterwards.
    pub fn try_add_arc(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v {
            return false;
        }
        if self.has_arc(u, v) {
            return true;
        }
        let (lb, ub) = (self.ord[v], self.ord[u]);
        if lb < ub && !self.reorder(u, v, lb, ub) {
            return false;
        }
        self.adj[u * self.words + v / 64] |= 1u64 << (v % 64);
        self.out[u].push(v as u32);
        self.inc[v].push(u as u32);
        self.arcs += 1;
        true
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    // Restores a valid order for the affected region ord[v]..=ord[u], or
    // reports that v reaches u.
    fn reorder(&mut self, u: usize, v: usize, lb: u32, ub: u32) -> bool {
        let epoch = self.next_epoch();
        self.fwd.clear();
        self.stack.clear();
        self.stack.push(v);
        self.mark[v] = epoch;
        while let Some(w) = self.stack.pop() {
            self.fwd.push(w);
            for &c in &self.out[w] {
                let c = c as usize;
                if c == u {
                    return false;
                }
                if self.mark[c] != epoch && self.ord[c] < ub {
                    self.mark[c] = epoch;
                    self.stack.push(c);
                }
            }
        }
        self.back.clear();
        self.stack.push(u);
        self.mark[u] = epoch;
        while let Some(w) = self.stack.pop() {
            self.back.push(w);
            for &p in &self.inc[w] {
                let p = p as usize;
                if self.mark[p] != epoch && self.ord[p] > lb {
                    self.mark[p] = epoch;
                    self.stack.push(p);
                }
            }
        }
        let ord = &self.ord;
        self.back.sort_unstable_by_key(|&w| ord[w]);
        self.fwd.sort_unstable_by_key(|&w| ord[w]);
        let mut slots: Vec<u32> = self.back.iter().chain(self.fwd.iter()).map(|&w| self.ord[w]).collect();
        slots.sort_unstable();
        for (w, slot) in self.back.iter().chain(self.fwd.iter()).zip(slots) {
            self.ord[*w] = slot;
        }
        true
    }

    pub fn to_graph(&self) -> Graph {
        let mut edges = Vec::with_capacity(self.arcs);
        for (u, children) in self.out.iter().enumerate() {
            edges.extend(children.iter().map(|&v| (u as u32, v)));
        }
        edges.sort_unstable();
        Graph { n: self.n, directed: true, edges }
    }

    /// Pair-state tallies are cheaper without materialising a [`Graph`].
    pub fn for_each_arc(&self, mut f: impl FnMut(usize, usize)) {
        for (u, children) in self.out.iter().enumerate() {
            for &v in children {
                f(u, v as usize);
            }
        }
    }

    #[cfg(test)]
    fn order_is_topological(&self) -> bool {
        self.out.iter().enumerate().all(|(u, cs)| cs.iter().all(|&v| self.ord[u] < self.ord[v as usize]))
    }
}
