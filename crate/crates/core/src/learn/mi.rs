use crate::graph::Graph;
use crate::learn::Dataset;
use crate::{Error, Result};

/// Empirical mutual information of two columns, in nats.
pub fn mutual_information(d: &Dataset, a: usize, b: usize) -> f64 {
    let (ra, rb) = (d.arity(a), d.arity(b));
    let mut joint = vec![0u64; ra * rb];
    for (&x, &y) in d.column(a).iter().zip(d.column(b)) {
        joint[x as usize * rb + y as usize] += 1;
    }
    let n = d.n_rows() as f64;
    let mut pa = vec![0u64; ra];
    let mut pb = vec![0u64; rb];
    for x in 0..ra {
        for y in 0..rb {
            pa[x] += joint[x * rb + y];
            pb[y] += joint[x * rb + y];
        }
    }
    let mut mi = 0.0;
    for x in 0..ra {
        for y in 0..rb {
            let c = joint[x * rb + y];
            if c > 0 {
                let c = c as f64;
                mi += c / n * (c * n / (pa[x] as f64 * pb[y] as f64)).ln();
            }
        }
    }
    mi.max(0.0)
}

/// Undirected graph with an edge wherever the mutual information exceeds
/// `threshold`.
pub fn mi_skeleton(d: &Dataset, threshold: f64) -> Result<Graph> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::InvalidArgument(format!("threshold must be >= 0, got {threshold}")));
    }
    let p = d.n_vars();
    let mut edges = Vec::new();
    for a in 0..p {
        for b in (a + 1)..p {
            if mutual_information(d, a, b) > threshold {
                edges.push((a, b));
            }
        }
    }
    Graph::undirected(p, edges)
}
