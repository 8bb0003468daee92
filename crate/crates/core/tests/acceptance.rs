//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; exits non-zero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use edgevar::census::{self, CensusAccumulator};
use edgevar::edgedist::{self, abs_transform, fit_bernoulli, fit_trinomial, Family};
use edgevar::graph::IncrementalDag;
use edgevar::learn::{self, BootstrapRun, Criterion, Dataset, HcConfig, LearnerSpec};
use edgevar::matrix::SquareMatrix;
use edgevar::measures::{self, MeasureOptions, Normalized};
use edgevar::sampler::{self, McmcConfig};
use edgevar::spectral;
use edgevar::{EdgeIndexMap, Graph};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn shared_and_disjoint(n: usize) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let map = EdgeIndexMap::new(n);
    let (mut shared, mut disjoint) = (Vec::new(), Vec::new());
    for a in 0..map.len() {
        for b in a + 1..map.len() {
            if map.incident(a, b) {
                shared.push((a, b));
            } else {
                disjoint.push((a, b));
            }
        }
    }
    (shared, disjoint)
}

fn check_census_tables(c: &CensusAccumulator) -> Result<(), String> {
    for check in census::check_published(c).map_err(|e| e.to_string())? {
        ensure(check.matches, || {
            format!("n={} {}: exact {:.9} vs printed {}", check.n, check.quantity, check.exact, check.printed)
        })?;
    }
    let printed = census::published(c.n).unwrap();
    let (shared, disjoint) = shared_and_disjoint(c.n);
    for &(a, b) in &disjoint {
        ensure(c.covariance_numerator(a, b) == 0, || format!("n={} disjoint pairs {a},{b} covary", c.n))?;
    }
    for &(a, b) in &shared {
        let v = c.covariance(a, b).abs();
        ensure(census::matches_printed(v, printed.shared_cov), || {
            format!("n={} shared pairs {a},{b}: |cov| {v:.9} vs {}", c.n, printed.shared_cov)
        })?;
    }
    for a in 0..c.k {
        ensure(census::matches_printed(c.covariance(a, a), printed.variance), || {
            format!("n={} pair {a} variance", c.n)
        })?;
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for n in 3..=5 {
        check_census_tables(&census::census_dags(n).map_err(|e| e.to_string())?)?;
    }
    let small = start.elapsed();
    ensure(small < Duration::from_secs(5), || format!("n = 3..5 took {small:?}"))?;
    let start = Instant::now();
    check_census_tables(&census::census_dags(6).map_err(|e| e.to_string())?)?;
    let six = start.elapsed();
    ensure(six < Duration::from_secs(600), || format!("n = 6 took {six:?}"))?;
    Ok(format!("n=3..5 in {small:.2?}, n=6 in {six:.2?}, all printed digits match"))
}

fn criterion_2() -> Outcome {
    let expected = [1u64, 3, 25, 543, 29281, 3781503];
    for (i, &want) in expected.iter().enumerate() {
        let n = i + 1;
        let got = census::census_dags(n).map_err(|e| e.to_string())?.graph_count;
        ensure(got == want, || format!("census n={n}: {got} != {want}"))?;
        if n <= 4 {
            let walked = census::enumerate_dags(n).map_err(|e| e.to_string())?.count() as u64;
            let naive = census::naive_dags(n).map_err(|e| e.to_string())?;
            ensure(walked == want && naive.len() as u64 == want, || {
                format!("n={n}: enumerator {walked}, naive {}", naive.len())
            })?;
            let mut a: Vec<Graph> = census::enumerate_dags(n).unwrap().collect();
            let mut b = naive;
            a.sort_by_key(|g| format!("{g:?}"));
            b.sort_by_key(|g| format!("{g:?}"));
            ensure(a == b, || format!("n={n}: enumerator and naive filter disagree on the graph set"))?;
        }
    }
    Ok("1, 3, 25, 543, 29281, 3781503; naive filter agrees for n <= 4".into())
}

fn ug(edges: &[(usize, usize)]) -> Graph {
    Graph::undirected(3, edges.iter().copied()).unwrap()
}

fn criterion_3() -> Outcome {
    // Edges e1 = {0,1} and e2 = {0,2}; cells (00, 01, 10, 11) over (e1, e2).
    let cells = [ug(&[]), ug(&[(0, 2)]), ug(&[(0, 1)]), ug(&[(0, 1), (0, 2)])];
    let fit = |w: [f64; 4]| -> Result<SquareMatrix, String> {
        let b = fit_bernoulli(&cells, Some(&w)).map_err(|e| e.to_string())?;
        Ok(b.sigma().principal(&[0, 1]))
    };
    let s1 = fit([0.2, 0.2, 0.2, 0.4])?;
    let s2 = fit([0.0, 0.12, 0.28, 0.6])?;
    let s3 = SquareMatrix::from_rows(&[vec![0.1056, 0.1456], vec![0.1456, 0.2016]]).unwrap();
    let tol = 1e-4;
    let expect = [
        (&s1, [0.24, 0.04, 0.24], [0.28, 0.20], 0.1666),
        (&s2, [0.1056, -0.0336, 0.2016], [0.2121, 0.095], -0.2303),
        (&s3, [0.1056, 0.1456, 0.2016], [0.3069, 0.0003], 0.9978),
    ];
    for (i, (s, entries, eig, cor)) in expect.iter().enumerate() {
        let got = [s[(0, 0)], s[(0, 1)], s[(1, 1)]];
        ensure(got.iter().zip(entries).all(|(a, b)| close(*a, *b, 1e-12)), || format!("Σ{} = {got:?}", i + 1))?;
        let l = spectral::symmetric_eigenvalues(s).map_err(|e| e.to_string())?;
        ensure(close(l[0], eig[0], tol) && close(l[1], eig[1], tol), || format!("λ{} = {l:?}", i + 1))?;
        let r = edgedist::correlation(s, 0, 1);
        ensure(close(r, *cor, tol), || format!("cor{} = {r}", i + 1))?;
    }
    Ok("Σ1/Σ2/Σ3, eigenvalues and correlations within 1e-4".into())
}

fn criterion_4() -> Outcome {
    let mut gaps = Vec::new();
    for n in 3..=6 {
        let c = census::census_dags(n).map_err(|e| e.to_string())?;
        gaps.push((measures::approx_arc_probability(n) - c.frequencies(0)[2]).abs());
    }
    ensure(gaps[3] <= 0.012, || format!("n=6 gap {}", gaps[3]))?;
    ensure(gaps.windows(2).all(|w| w[1] < w[0]), || format!("gaps not shrinking: {gaps:?}"))?;
    Ok(format!("gaps n=3..6: {:?}", gaps.iter().map(|g| format!("{g:.5}")).collect::<Vec<_>>()))
}

fn state_code(dag: &IncrementalDag, map: &EdgeIndexMap) -> usize {
    map.pairs().fold(0, |acc, (i, j)| {
        let s = if dag.has_arc(i, j) {
            2
        } else if dag.has_arc(j, i) {
            0
        } else {
            1
        };
        acc * 3 + s
    })
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let samples = 1_000_000;

    let mut cfg = McmcConfig::new(3, samples, 20240601);
    cfg.chains = 8;
    let map3 = EdgeIndexMap::new(3);
    let parts = sampler::fold_uniform_dags(&cfg, || vec![0u64; 27], |acc, dag| acc[state_code(dag, &map3)] += 1)
        .map_err(|e| e.to_string())?;
    let mut hist = vec![0u64; 27];
    for p in parts {
        hist.iter_mut().zip(p).for_each(|(h, c)| *h += c);
    }
    let seen: Vec<f64> = hist.iter().filter(|&&c| c > 0).map(|&c| c as f64 / samples as f64).collect();
    ensure(seen.len() == 25, || format!("{} distinct DAGs visited", seen.len()))?;
    let worst3 = seen.iter().map(|f| (f - 0.04).abs()).fold(0.0, f64::max);
    ensure(worst3 <= 0.002, || format!("n=3 frequency off by {worst3}"))?;

    let mut cfg = McmcConfig::new(4, samples, 20240602);
    cfg.chains = 8;
    let map4 = EdgeIndexMap::new(4);
    let parts = sampler::fold_uniform_dags(
        &cfg,
        || vec![[0u64; 3]; 6],
        |acc, dag| {
            for (idx, (i, j)) in map4.pairs().enumerate() {
                let s = if dag.has_arc(i, j) {
                    2
                } else if dag.has_arc(j, i) {
                    0
                } else {
                    1
                };
                acc[idx][s] += 1;
            }
        },
    )
    .map_err(|e| e.to_string())?;
    let printed = census::published(4).unwrap();
    let target = [printed.p_arrow, printed.p_zero, printed.p_arrow].map(|s| s.parse::<f64>().unwrap());
    let mut worst4: f64 = 0.0;
    for pair in 0..6 {
        for s in 0..3 {
            let count: u64 = parts.iter().map(|p| p[pair][s]).sum();
            worst4 = worst4.max((count as f64 / samples as f64 - target[s]).abs());
        }
    }
    ensure(worst4 <= 0.005, || format!("n=4 marginal off by {worst4}"))?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(120), || format!("took {took:?}"))?;
    Ok(format!("n=3 max |f-0.04| {worst3:.5}, n=4 max marginal error {worst4:.5}, {took:.1?}"))
}

fn criterion_6() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=1000 {
        let b = measures::fmg_covariance_bound(n).map_err(|e| e.to_string())?;
        worst = worst.max((b.cov_bound - b.cov_bound_sum).abs()).max((b.cor_bound - b.cor_bound_sum).abs());
    }
    ensure(worst <= 1e-12, || format!("closed form and double sum differ by {worst}"))?;
    for n in 3..=6 {
        let c = census::census_dags(n).map_err(|e| e.to_string())?;
        let b = measures::fmg_covariance_bound(n).map_err(|e| e.to_string())?;
        let (shared, _) = shared_and_disjoint(n);
        let var = c.covariance(0, 0);
        for (x, y) in shared {
            let cov = c.covariance(x, y).abs();
            let cor = cov / var;
            ensure(cov < b.cov_bound && cor < b.cor_bound, || {
                format!("n={n}: |cov| {cov} / |cor| {cor} vs bounds {} / {}", b.cov_bound, b.cor_bound)
            })?;
        }
    }
    let far = measures::fmg_covariance_bound(100_000_000_000_000).map_err(|e| e.to_string())?;
    ensure(close(far.cov_bound, 0.140625, 1e-12) && close(far.cor_bound, 0.28125, 1e-12), || {
        format!("limits {} / {}", far.cov_bound, far.cor_bound)
    })?;
    ensure(measures::FMG_LIMITS == (0.140625, 0.28125), || "limit constants".into())?;
    Ok(format!("max closed-form/double-sum gap {worst:.1e}; census below bounds for n=3..6; limits hold"))
}

fn criterion_7() -> Outcome {
    let opts = MeasureOptions::default();
    for n in 2..=10 {
        let k = n * (n - 1) / 2;
        let max = measures::variability_report(&SquareMatrix::scaled_identity(k, 0.25), Family::Bernoulli, &opts)
            .map_err(|e| e.to_string())?;
        let ones = Normalized { var_t: 1.0, var_g: 1.0, var_f: 1.0 };
        ensure(max.normalized == ones, || format!("n={n} maxent gives {:?}", max.normalized))?;
        for family in [Family::Bernoulli, Family::Trinomial] {
            let min =
                measures::variability_report(&SquareMatrix::zeros(k), family, &opts).map_err(|e| e.to_string())?;
            let zeros = Normalized { var_t: 0.0, var_g: 0.0, var_f: 0.0 };
            ensure(min.normalized == zeros, || format!("n={n} {family} minimum entropy gives {:?}", min.normalized))?;
        }
    }
    for k in 2..=50usize {
        let kf = k as f64;
        let psi = SquareMatrix::scaled_identity(k, kf / 4.0);
        let (lo, hi) = measures::frobenius_range(&psi, kf / 4.0).map_err(|e| e.to_string())?;
        let (want_lo, want_hi) = (kf * (kf - 1.0).powi(2) / 16.0, kf.powi(3) / 16.0);
        ensure((lo - want_lo).abs() <= 1e-10 * want_lo && (hi - want_hi).abs() <= 1e-10 * want_hi, || {
            format!("k={k}: ({lo}, {hi}) vs ({want_lo}, {want_hi})")
        })?;
    }
    Ok("extremes exact for n=2..10; VAR_F range matches closed forms for k=2..50".into())
}

fn criterion_8() -> Outcome {
    let collections = 1000;
    let results: Vec<Result<f64, String>> = {
        use rayon::prelude::*;
        (0..collections)
            .into_par_iter()
            .map(|c| {
                let n = 4 + c % 5;
                let cfg = McmcConfig::new(n, 40, 7000 + c as u64);
                let graphs = sampler::sample_uniform_dags(&cfg).map_err(|e| e.to_string())?;
                let t = fit_trinomial(&graphs, None).map_err(|e| e.to_string())?;
                let b = abs_transform(&t);
                let mut worst: f64 = 0.0;
                for i in 0..t.k() {
                    let [minus, _, plus] = t.marginals()[i];
                    let r = t.sigma()[(i, i)] - b.sigma()[(i, i)] - 4.0 * plus * minus;
                    worst = worst.max(r.abs());
                }
                let skeletons: Vec<Graph> = graphs.iter().map(|g| g.skeleton().unwrap()).collect();
                let refit = fit_bernoulli(&skeletons, None).map_err(|e| e.to_string())?;
                if refit.sigma() != b.sigma() || refit.p() != b.p() {
                    return Err(format!("collection {c}: abs transform differs from skeleton refit"));
                }
                Ok(worst)
            })
            .collect()
    };
    let mut worst: f64 = 0.0;
    for r in results {
        worst = worst.max(r?);
    }
    ensure(worst <= 1e-12, || format!("decomposition residual {worst:e}"))?;
    Ok(format!("{collections} collections, max residual {worst:.1e}, refit identical"))
}

fn criterion_9() -> Outcome {
    let mut cfg = McmcConfig::new(10, 100_000, 99);
    cfg.chains = 8;
    let bad = sampler::fold_uniform_dags(
        &cfg,
        || (0usize, 0usize),
        |acc, dag| {
            acc.0 += 1;
            let reversed = dag.to_graph().reverse_all().and_then(|g| g.is_acyclic());
            if !matches!(reversed, Ok(true)) {
                acc.1 += 1;
            }
        },
    )
    .map_err(|e| e.to_string())?;
    let total: usize = bad.iter().map(|b| b.0).sum();
    let cyclic: usize = bad.iter().map(|b| b.1).sum();
    ensure(total == 100_000 && cyclic == 0, || format!("{cyclic} of {total} reversed graphs are cyclic"))?;
    Ok(format!("{total} DAGs on 10 nodes, all reversals acyclic"))
}

fn criterion_10() -> Outcome {
    let (n, draws) = (4, 1_000_000usize);
    let k = n * (n - 1) / 2;
    let nf = draws as f64;
    let mut lines = Vec::new();
    for (i, beta) in [0.1, 0.3, 0.5, 0.9].into_iter().enumerate() {
        let expected = measures::buntine_prior_analytics(n, beta).map_err(|e| e.to_string())?.var_t;
        ensure(close(expected, k as f64 * (beta - beta * beta), 1e-15), || format!("analytic VAR_T at β={beta}"))?;
        let graphs = sampler::sample_independent_arcs(n, beta, draws, 500 + i as u64).map_err(|e| e.to_string())?;
        let fitted = fit_trinomial(&graphs, None).map_err(|e| e.to_string())?;
        // Unbiased sample variances; arcs are independent, so the standard
        // error of the sum combines the per-arc errors of p(1-p), estimated
        // to second order so it stays positive at p = 1/2.
        let var_t = fitted.sigma().trace() * nf / (nf - 1.0);
        let se = fitted
            .marginals()
            .iter()
            .map(|m| {
                let p = m[2];
                let q = p * (1.0 - p);
                (1.0 - 2.0 * p).powi(2) * q / nf + 2.0 * q * q / (nf * nf)
            })
            .sum::<f64>()
            .sqrt();
        let z = (var_t - expected).abs() / se;
        ensure(z <= 3.0, || format!("β={beta}: empirical {var_t}, expected {expected}, se {se:e}"))?;
        lines.push(format!("β={beta}: {z:.2} se"));
    }
    Ok(lines.join(", "))
}

fn run(label: &str, family: Family, normalized: Normalized, fingerprint: &str) -> BootstrapRun {
    let mut report = measures::variability_report(&SquareMatrix::zeros(3), family, &MeasureOptions::default()).unwrap();
    report.normalized = normalized;
    BootstrapRun {
        learner: label.into(),
        learner_spec: None,
        family,
        replicates: 1,
        seed: 0,
        dataset_fingerprint: fingerprint.into(),
        dataset_rows: 1,
        graphs: Vec::new(),
        report,
    }
}

fn criterion_11() -> Outcome {
    let learner = LearnerSpec::HcBic(HcConfig::default());
    let (small, large, replicates) = (200, 5000, 50);
    let mut decreasing = 0;
    let mut pairs = Vec::new();
    for seed in 0..10u64 {
        let vt = |rows: usize| -> Result<f64, String> {
            let data = Dataset::simulate_chain(4, rows, 0.3, 1000 + seed).map_err(|e| e.to_string())?;
            let run = learn::bootstrap(&data, &learner, replicates, seed).map_err(|e| e.to_string())?;
            Ok(run.report.normalized.var_t)
        };
        let (a, b) = (vt(small)?, vt(large)?);
        decreasing += usize::from(b <= a);
        pairs.push(format!("{a:.3}->{b:.3}"));
    }
    ensure(decreasing >= 8, || format!("only {decreasing}/10 decrease: {pairs:?}"))?;

    let nm = |t: f64| Normalized { var_t: t, var_g: 0.5, var_f: 0.5 };
    let runs = vec![
        run("a", Family::Trinomial, nm(0.4), "d"),
        run("b", Family::Trinomial, nm(0.2), "d"),
        run("c", Family::Trinomial, nm(0.2 + 1e-13), "d"),
        run("e", Family::Trinomial, nm(0.3), "d"),
    ];
    let sel = learn::select_algorithm(&runs, Criterion::Vt).map_err(|e| e.to_string())?;
    ensure(sel.index == 1 && sel.learner == "b" && sel.tie, || format!("tie selection {sel:?}"))?;
    let distinct = learn::select_algorithm(&runs[..2], Criterion::Vt).map_err(|e| e.to_string())?;
    ensure(distinct.index == 1 && !distinct.tie, || format!("plain selection {distinct:?}"))?;
    let mut mixed = runs.clone();
    mixed.push(run("u", Family::Bernoulli, nm(0.0), "d"));
    ensure(learn::select_algorithm(&mixed, Criterion::Vt).is_err(), || "mixed families accepted".into())?;
    let mut other = runs;
    other.push(run("x", Family::Trinomial, nm(0.0), "other"));
    ensure(learn::select_algorithm(&other, Criterion::Vt).is_err(), || "mixed datasets accepted".into())?;
    Ok(format!("{decreasing}/10 seeds decrease ({}); selection and tie-breaking correct", pairs.join(" ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("exact census tables", criterion_1),
        ("DAG counts", criterion_2),
        ("two-edge golden example", criterion_3),
        ("arc probability approximation", criterion_4),
        ("sampler calibration", criterion_5),
        ("covariance bounds", criterion_6),
        ("measure extremes", criterion_7),
        ("variance decomposition and skeleton transform", criterion_8),
        ("reversal keeps acyclicity", criterion_9),
        ("independent-arc total variance", criterion_10),
        ("bootstrap selection", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({took:.1?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({took:.1?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
