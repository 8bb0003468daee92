//! Structural-variability measures of an edge covariance matrix, their
//! normalisation, and maximum-entropy reference values.
//!
//! * total variance: the trace;
//! * generalised variance: the determinant, optionally after dropping
//!   never-varying pairs or shrinking towards a scaled identity;
//! * Frobenius variability: squared Frobenius distance from a target `Ψ`,
//!   `k` times the maximum-entropy covariance.
//!
//! Each is rescaled to `[0, 1]` so that `1` means "as uncertain as a flat
//! prior" and `0` means "a single structure".

use serde::{Deserialize, Serialize};

use crate::census::{census_dags, census_ugs};
use crate::edgedist::{EdgeSummary, Family};
use crate::graph::{nodes_for_pairs, pair_count};
use crate::matrix::SquareMatrix;
use crate::spectral::{family_bound, symmetric_eigenvalues};
use crate::{Error, Result};

/// Slack used when snapping normalised values onto `{0, 1}`.
pub const NORMALIZE_SLACK: f64 = 1e-12;
/// Default variance threshold for [`Reduction::DropBelow`].
pub const DEFAULT_DROP_THRESHOLD: f64 = 1e-12;

/// `p(+1) = p(-1) ≈ 1/4 + 1/(4(n-1))` for uniformly distributed DAGs.
pub fn approx_arc_probability(n: usize) -> f64 {
    0.25 + 0.25 / (n as f64 - 1.0)
}

/// Approximate `(p(-1), p(0), p(+1))` for uniformly distributed DAGs.
pub fn approx_marginals(n: usize) -> [f64; 3] {
    let p = approx_arc_probability(n);
    [p, 0.5 - 0.5 / (n as f64 - 1.0), p]
}

/// Approximate variance of one arc of a uniform DAG, `2 p(+1)`.
pub fn approx_arc_variance(n: usize) -> f64 {
    0.5 + 0.5 / (n as f64 - 1.0)
}

pub fn total_variance(sigma: &SquareMatrix) -> f64 {
    sigma.trace()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Reduction {
    /// Raw determinant.
    None,
    /// Drop pairs whose variance is at most the threshold.
    DropBelow(f64),
    /// `(1 - γ) Σ + γ μ I` with `μ = tr(Σ) / k`.
    Shrink(f64),
}

impl Default for Reduction {
    fn default() -> Self {
        Reduction::DropBelow(DEFAULT_DROP_THRESHOLD)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralisedVariance {
    pub value: f64,
    /// Dimension of the matrix whose determinant was taken.
    pub dim: usize,
}

pub fn generalised_variance(sigma: &SquareMatrix, reduction: Reduction) -> Result<GeneralisedVariance> {
    let reduced = match reduction {
        Reduction::None => sigma.clone(),
        Reduction::DropBelow(tau) => {
            if !(tau >= 0.0) {
                return Err(Error::InvalidArgument(format!("drop threshold must be >= 0, got {tau}")));
            }
            let keep: Vec<usize> = (0..sigma.dim()).filter(|&i| sigma[(i, i)] > tau).collect();
            sigma.principal(&keep)
        }
        Reduction::Shrink(gamma) => {
            if !(0.0..=1.0).contains(&gamma) {
                return Err(Error::InvalidArgument(format!("shrinkage must lie in [0, 1], got {gamma}")));
            }
            let k = sigma.dim();
            let mu = if k == 0 { 0.0 } else { sigma.trace() / k as f64 };
            let mut s = sigma.scale(1.0 - gamma);
            for i in 0..k {
                s[(i, i)] += gamma * mu;
            }
            s
        }
    };
    let dim = reduced.dim();
    if dim == 0 {
        return Ok(GeneralisedVariance { value: 0.0, dim });
    }
    let l = symmetric_eigenvalues(&reduced)?;
    let value = l.iter().map(|x| x.max(0.0)).product();
    Ok(GeneralisedVariance { value, dim })
}

pub fn frobenius_variability(sigma: &SquareMatrix, psi: &SquareMatrix) -> Result<f64> {
    Ok(sigma.sub(psi)?.frobenius_sq())
}

/// Smallest and largest `‖Σ - Ψ‖²_F` over covariance matrices whose
/// eigenvalues lie in `{λ >= 0, Σλ <= bound}`.
pub fn frobenius_range(psi: &SquareMatrix, bound: f64) -> Result<(f64, f64)> {
    let mut psi_l = symmetric_eigenvalues(psi)?;
    psi_l.sort_by(|a, b| b.total_cmp(a));
    let closest = project_capped_simplex(&psi_l, bound);
    let min: f64 = closest.iter().zip(&psi_l).map(|(l, p)| (l - p) * (l - p)).sum();
    // Convex in λ: the maximum sits on a vertex, the origin or `bound·e`
    // paired with the smallest eigenvalue of Ψ.
    let at_origin: f64 = psi_l.iter().map(|p| p * p).sum();
    let max = match psi_l.last() {
        Some(&smallest) => at_origin.max(at_origin - smallest * smallest + (bound - smallest).powi(2)),
        None => 0.0,
    };
    Ok((min, max))
}

/// Euclidean projection onto `{x >= 0, Σx <= bound}`.
fn project_capped_simplex(v: &[f64], bound: f64) -> Vec<f64> {
    let clipped: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    if clipped.iter().sum::<f64>() <= bound {
        return clipped;
    }
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let (mut cum, mut theta) = (0.0, 0.0);
    for (j, &x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - bound) / (j + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Where the maximum-entropy reference comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// Exhaustive enumeration (small `n` only).
    Exact,
    /// Closed-form approximation.
    Approximate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxEntReference {
    pub n: usize,
    pub k: usize,
    pub family: Family,
    pub source: Source,
    /// Per-pair state probabilities: `(p0, p1)` for the Bernoulli,
    /// `(p(-1), p(0), p(+1))` for the Trinomial.
    pub marginals: Vec<f64>,
    pub sigma_ref: SquareMatrix,
    /// Covariance and correlation bounds for arcs sharing a node (zero for
    /// undirected graphs, whose edges are independent).
    pub cov_bound: f64,
    pub cor_bound: f64,
}

/// Largest `n` for which an exact reference is computed.
pub const EXACT_REFERENCE_LIMIT: usize = 6;

pub fn maxent_reference(n: usize, family: Family, source: Source) -> Result<MaxEntReference> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("a reference needs n >= 2, got {n}")));
    }
    let k = pair_count(n);
    let (marginals, sigma_ref) = match (family, source) {
        (_, Source::Exact) if n > EXACT_REFERENCE_LIMIT => {
            return Err(Error::Infeasible(format!("exact references need n <= {EXACT_REFERENCE_LIMIT}; got n = {n}")))
        }
        (Family::Bernoulli, Source::Exact) => {
            let c = census_ugs(n)?;
            let f = c.frequencies(0);
            (vec![f[1], f[2]], c.sigma())
        }
        (Family::Trinomial, Source::Exact) => {
            let c = census_dags(n)?;
            (c.frequencies(0).to_vec(), c.sigma())
        }
        (Family::Bernoulli, Source::Approximate) => (vec![0.5, 0.5], SquareMatrix::scaled_identity(k, 0.25)),
        (Family::Trinomial, Source::Approximate) => {
            (approx_marginals(n).to_vec(), SquareMatrix::scaled_identity(k, approx_arc_variance(n)))
        }
    };
    let (cov_bound, cor_bound) = match family {
        Family::Bernoulli => (0.0, 0.0),
        Family::Trinomial => {
            let b = fmg_covariance_bound(n)?;
            (b.cov_bound, b.cor_bound)
        }
    };
    Ok(MaxEntReference { n, k, family, source, marginals, sigma_ref, cov_bound, cor_bound })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmgBound {
    pub n: usize,
    pub epsilon_magnitude: f64,
    /// Values of the arc distribution function on `(-1, 0]` and `(0, 1]`.
    pub marginal_cdf: [f64; 2],
    pub cov_bound: f64,
    pub cor_bound: f64,
    /// The same bounds assembled from the interval sums.
    pub cov_bound_sum: f64,
    pub cor_bound_sum: f64,
}

/// Limits of the covariance and correlation bounds as `n` grows.
pub const FMG_LIMITS: (f64, f64) = (0.140625, 0.28125);

/// Bounds on `|COV|` and `|COR|` of two arcs of a uniform DAG, from
/// Hoeffding's identity with a Farlie-Morgenstern-Gumbel joint law.
pub fn fmg_covariance_bound(n: usize) -> Result<FmgBound> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("bounds need n >= 2, got {n}")));
    }
    let low = approx_arc_probability(n);
    let high = 0.75 - 0.25 / (n as f64 - 1.0);
    let cov_bound = 4.0 * high * high * low * low;
    let cor_bound = 2.0 * high * high * low;
    Ok(FmgBound {
        n,
        epsilon_magnitude: 1.0,
        marginal_cdf: [low, high],
        cov_bound,
        cor_bound,
        cov_bound_sum: fmg_cov_sum(n, 1.0),
        cor_bound_sum: fmg_cov_sum(n, 1.0) / approx_arc_variance(n),
    })
}

/// `∬ |F(x, y) - F(x) F(y)|` for an FMG law with parameter `ε`, summed over
/// the two unit intervals where the arc distribution function is not 0 or 1.
pub fn fmg_cov_sum(n: usize, epsilon: f64) -> f64 {
    let f = [approx_arc_probability(n), 0.75 - 0.25 / (n as f64 - 1.0)];
    let mut total = 0.0;
    for &fx in &f {
        for &fy in &f {
            let joint = fx * fy * (1.0 + epsilon * (1.0 - fx) * (1.0 - fy));
            total += (joint - fx * fy).abs();
        }
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuntineAnalytics {
    pub arc_variance: f64,
    pub var_t: f64,
    pub var_g: f64,
}

/// Moments under independent arcs with inclusion probability `beta` along a
/// fixed topological order.
pub fn buntine_prior_analytics(n: usize, beta: f64) -> Result<BuntineAnalytics> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!("beta must lie in [0, 1], got {beta}")));
    }
    let k = pair_count(n);
    let v = beta - beta * beta;
    Ok(BuntineAnalytics { arc_variance: v, var_t: k as f64 * v, var_g: v.powi(k as i32) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceBounds {
    pub max_var_t: f64,
    pub max_var_g: f64,
    pub min_var_f: f64,
    pub max_var_f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalized {
    pub var_t: f64,
    pub var_g: f64,
    pub var_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariabilityReport {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub var_t: f64,
    pub var_g: f64,
    pub var_f: f64,
    pub reduction: Reduction,
    /// Dimension after the generalised-variance reduction.
    pub reduced_dim: usize,
    pub target: Source,
    pub target_description: String,
    pub normalized: Normalized,
    pub bounds_used: VarianceBounds,
    /// Total variance of the maximum-entropy reference itself.
    pub reference_var_t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureOptions {
    pub reduction: Reduction,
    pub target: Source,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions { reduction: Reduction::default(), target: Source::Approximate }
    }
}

/// Scales `value` into `[0, 1]`, snapping values within [`NORMALIZE_SLACK`]
/// of either end.
pub fn unit_clamp(value: f64) -> f64 {
    if value.is_nan() {
        return value;
    }
    if value.abs() <= NORMALIZE_SLACK {
        0.0
    } else if (value - 1.0).abs() <= NORMALIZE_SLACK {
        1.0
    } else {
        value.clamp(0.0, 1.0)
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        unit_clamp(num / den)
    } else {
        0.0
    }
}

pub fn normalize(var_t: f64, var_g: f64, var_f: f64, b: &VarianceBounds) -> Normalized {
    Normalized {
        var_t: ratio(var_t, b.max_var_t),
        var_g: ratio(var_g, b.max_var_g),
        var_f: ratio(b.max_var_f - var_f, b.max_var_f - b.min_var_f),
    }
}

/// All three measures of `sigma`, normalised against the family's bounds.
pub fn variability_report(sigma: &SquareMatrix, family: Family, opts: &MeasureOptions) -> Result<VariabilityReport> {
    let k = sigma.dim();
    let n = nodes_for_pairs(k)
        .filter(|&n| n >= 2)
        .ok_or_else(|| Error::InvalidArgument(format!("{k} is not the pair count of a graph with n >= 2")))?;
    let asym = sigma.max_asymmetry();
    if asym > crate::spectral::SYMMETRY_TOLERANCE {
        return Err(Error::NotSymmetric(asym));
    }
    let reference = match family {
        // The uniform Bernoulli is known in closed form.
        Family::Bernoulli => maxent_reference(n, family, Source::Approximate)?,
        Family::Trinomial => maxent_reference(n, family, opts.target)?,
    };
    let psi = reference.sigma_ref.scale(k as f64);
    let (min_var_f, max_var_f) = frobenius_range(&psi, family_bound(family, k))?;
    let gv = generalised_variance(sigma, opts.reduction)?;
    let max_var_g = match family {
        Family::Bernoulli => 0.25f64.powi(gv.dim as i32),
        Family::Trinomial => 1.0,
    };
    let bounds = VarianceBounds { max_var_t: family_bound(family, k), max_var_g, min_var_f, max_var_f };
    let var_t = total_variance(sigma);
    let var_f = frobenius_variability(sigma, &psi)?;
    let target_description = match (family, reference.source) {
        (Family::Bernoulli, _) => "k/4 I (uniform undirected graphs)".to_string(),
        (Family::Trinomial, Source::Approximate) => {
            format!("k v I with v = 1/2 + 1/(2(n-1)) = {}", approx_arc_variance(n))
        }
        (Family::Trinomial, Source::Exact) => "k times the exact uniform-DAG covariance".to_string(),
    };
    Ok(VariabilityReport {
        family,
        n,
        k,
        var_t,
        var_g: gv.value,
        var_f,
        reduction: opts.reduction,
        reduced_dim: gv.dim,
        target: reference.source,
        target_description,
        normalized: normalize(var_t, gv.value, var_f, &bounds),
        bounds_used: bounds,
        reference_var_t: reference.sigma_ref.trace(),
    })
}

pub fn summary_report(summary: &EdgeSummary, opts: &MeasureOptions) -> Result<VariabilityReport> {
    variability_report(summary.sigma(), summary.family(), opts)
}

/// Fraction of off-diagonal covariances between vertex-disjoint pairs:
/// the share of zero entries if disjoint arcs are uncorrelated.
pub fn disjoint_fraction(n: usize) -> f64 {
    let k = pair_count(n) as f64;
    if k < 2.0 {
        return 0.0;
    }
    k * pair_count(n.saturating_sub(2)) as f64 / (k * k - k)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvidenceRow {
    pub n: usize,
    pub source: String,
    /// Largest `|COV|` over vertex-disjoint pairs.
    pub disjoint_max_abs_cov: f64,
    pub shared_min_abs_cov: f64,
    pub shared_max_abs_cov: f64,
    pub shared_min_abs_cor: f64,
    pub shared_max_abs_cor: f64,
    /// Share of off-diagonal entries with `|σ| <= zero_tolerance`.
    pub zero_fraction: f64,
    pub disjoint_fraction: f64,
    pub cov_bound: f64,
    pub cor_bound: f64,
    pub within_bounds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureEvidence {
    pub rows: Vec<EvidenceRow>,
    pub zero_tolerance: f64,
    /// Shared-node `|COV|` strictly increases along the rows.
    pub cov_increasing: bool,
    pub cor_increasing: bool,
}

/// Empirical checks of the structure of uniform-DAG covariance matrices:
/// disjoint pairs uncorrelated, sparsity, and growth of shared-node
/// dependence. Rows are `(n, Σ, source label)`. Nothing here is proved;
/// the report only records what the data show.
pub fn conjecture_evidence(rows: &[(usize, SquareMatrix, String)], zero_tolerance: f64) -> Result<ConjectureEvidence> {
    let mut out = Vec::with_capacity(rows.len());
    for (n, sigma, source) in rows {
        let map = crate::graph::EdgeIndexMap::new(*n);
        if sigma.dim() != map.len() {
            return Err(Error::SizeMismatch { expected: map.len(), found: sigma.dim() });
        }
        let k = map.len();
        let mut disjoint = 0.0f64;
        let (mut cmin, mut cmax, mut rmin, mut rmax) = (f64::INFINITY, 0.0f64, f64::INFINITY, 0.0f64);
        let (mut zeros, mut off) = (0usize, 0usize);
        for a in 0..k {
            for b in 0..k {
                if a == b {
                    continue;
                }
                off += 1;
                let c = sigma[(a, b)].abs();
                if c <= zero_tolerance {
                    zeros += 1;
                }
                if map.incident(a, b) {
                    let r = crate::edgedist::correlation(sigma, a, b).abs();
                    cmin = cmin.min(c);
                    cmax = cmax.max(c);
                    rmin = rmin.min(r);
                    rmax = rmax.max(r);
                } else {
                    disjoint = disjoint.max(c);
                }
            }
        }
        if cmin.is_infinite() {
            cmin = 0.0;
            rmin = 0.0;
        }
        let bound = fmg_covariance_bound((*n).max(2))?;
        out.push(EvidenceRow {
            n: *n,
            source: source.clone(),
            disjoint_max_abs_cov: disjoint,
            shared_min_abs_cov: cmin,
            shared_max_abs_cov: cmax,
            shared_min_abs_cor: rmin,
            shared_max_abs_cor: rmax,
            zero_fraction: if off == 0 { 0.0 } else { zeros as f64 / off as f64 },
            disjoint_fraction: disjoint_fraction(*n),
            cov_bound: bound.cov_bound,
            cor_bound: bound.cor_bound,
            within_bounds: cmax < bound.cov_bound && rmax < bound.cor_bound,
        });
    }
    let increasing = |f: fn(&EvidenceRow) -> f64| out.windows(2).all(|w| f(&w[1]) > f(&w[0]));
    Ok(ConjectureEvidence {
        cov_increasing: increasing(|r| r.shared_max_abs_cov),
        cor_increasing: increasing(|r| r.shared_max_abs_cor),
        rows: out,
        zero_tolerance,
    })
}
