use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;
use tempfile::TempDir;

fn edgevar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgevar"))
        .args(args)
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .env_remove("GE_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = edgevar(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn stderr_line(out: &Output) -> String {
    let s = String::from_utf8_lossy(&out.stderr).to_string();
    assert_eq!(s.trim_end().lines().count(), 1, "expected one line, got {s:?}");
    s.trim_end().to_string()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn load(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

fn assert_schema(name: &str, doc: &Value) {
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas/v1").join(format!("{name}.schema.json"));
    let schema: Value = serde_json::from_slice(&std::fs::read(file).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{name} schema violations: {msgs:?}");
}

fn write_dataset(p: &Path) {
    let mut text = String::from("A,B,C\n");
    let mut state = 12345u64;
    for _ in 0..200 {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let a = (state >> 33) % 2;
        let b = if (state >> 20) % 5 == 0 { 1 - a } else { a };
        let c = if (state >> 10) % 4 == 0 { 1 - b } else { b };
        text.push_str(&format!("x{a},y{b},z{c}\n"));
    }
    std::fs::write(p, text).unwrap();
}

#[test]
fn census_of_three_nodes() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "r.json");
    ok(&["census", "--nodes", "3", "--out", s(&out)]);
    let r = load(&out);
    assert_eq!(r["graph_count"], 25);
    assert_eq!(r["marginal_counts"][0], serde_json::json!([8, 9, 8]));
    assert_eq!(r["joint_tables"].as_array().unwrap().len(), 3);
    assert_eq!(r["manifest"]["timestamp"], "2023-11-14T22:13:20Z");
    assert_schema("census", &r);
}

#[test]
fn undirected_census() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "r.json");
    ok(&["census", "--nodes", "4", "--undirected", "--out", s(&out)]);
    let r = load(&out);
    assert_eq!(r["graph_count"], 64);
    assert_eq!(r["family"], "bernoulli");
    assert_schema("census", &r);
}

#[test]
fn oversized_census_is_infeasible() {
    let out = edgevar(&["census", "--nodes", "12", "--out", "unused.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_line(&out).starts_with("error[infeasible]: "));
    let out = edgevar(&["census", "--nodes", "7", "--out", "unused.json"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn missing_summary_is_an_input_error() {
    let out = edgevar(&["measures", "--summary", "missing.json", "--out", "unused.json"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_line(&out).starts_with("error[input-format]: "));
}

#[test]
fn usage_errors() {
    for args in [
        &["census"][..],
        &["census", "--nodes", "three", "--out", "x.json"],
        &["frobnicate"],
        &["measures", "--summary", "s.json", "--reduction", "pca", "--out", "x.json"],
        &["learn-bootstrap", "--data", "d.csv", "--learner", "pc", "--out", "x.json"],
    ] {
        let out = edgevar(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr_line(&out).starts_with("error[usage]: "), "{args:?}");
    }
}

#[test]
fn malformed_graph_stream() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.jsonl");
    std::fs::write(
        &g,
        "{\"n\":3,\"directed\":true,\"edges\":[[0,1]]}\n{\"n\":3,\"directed\":true,\"edges\":[[0,1],[1,0]]}\n",
    )
    .unwrap();
    let out = edgevar(&["summarize", "--in", s(&g), "--out", s(&path(&dir, "s.json"))]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_line(&out).contains("line 2"));
}

#[test]
fn sample_summarize_round_trip() {
    let dir = TempDir::new().unwrap();
    for (extra, family) in
        [(&[][..], "trinomial"), (&["--undirected"][..], "bernoulli"), (&["--beta", "0.3"][..], "trinomial")]
    {
        let g = path(&dir, "g.jsonl");
        let summary = path(&dir, "s.json");
        let mut args = vec!["sample", "--nodes", "5", "--samples", "777", "--seed", "11", "--out", s(&g)];
        args.extend_from_slice(extra);
        ok(&args);
        let lines = std::fs::read_to_string(&g).unwrap().lines().count();
        assert_eq!(lines, 777);
        let manifest = load(&PathBuf::from(format!("{}.manifest.json", g.display())));
        assert_schema("manifest", &manifest);
        assert_eq!(manifest["seed"], 11);
        for line in std::fs::read_to_string(&g).unwrap().lines() {
            assert_schema("graph", &serde_json::from_str(line).unwrap());
        }

        ok(&["summarize", "--in", s(&g), "--out", s(&summary)]);
        let sm = load(&summary);
        assert_eq!(sm["sample_count"], 777, "record loss for {family}");
        assert_eq!(sm["family"], family);
        assert_eq!(sm["source_seed"], 11);
        assert_eq!(sm["k"], 10);
        assert_schema("summary", &sm);

        let report = path(&dir, "m.json");
        ok(&["measures", "--summary", s(&summary), "--out", s(&report)]);
        assert_schema("measures", &load(&report));
    }
}

#[test]
fn weighted_summary() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "g.jsonl");
    std::fs::write(&g, "{\"n\":2,\"directed\":false,\"edges\":[[0,1]]}\n{\"n\":2,\"directed\":false,\"edges\":[]}\n")
        .unwrap();
    let w = path(&dir, "w.csv");
    std::fs::write(&w, "weight\n3\n1\n").unwrap();
    let out = path(&dir, "s.json");
    ok(&["summarize", "--in", s(&g), "--weights", s(&w), "--out", s(&out)]);
    let sm = load(&out);
    assert_eq!(sm["mean"][0].as_f64().unwrap(), 0.75);
    assert_eq!(sm["sigma"]["data"][0].as_f64().unwrap(), 0.1875);
    assert_eq!(sm["manifest"]["input_digests"].as_object().unwrap().len(), 2);

    std::fs::write(&w, "1\n").unwrap();
    let bad = edgevar(&["summarize", "--in", s(&g), "--weights", s(&w), "--out", s(&out)]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn measures_of_a_census() {
    let dir = TempDir::new().unwrap();
    let census = path(&dir, "c.json");
    ok(&["census", "--nodes", "4", "--out", s(&census)]);
    for (family, target) in [("auto", "exact"), ("auto", "approx"), ("bernoulli", "exact"), ("trinomial", "approx")] {
        let out = path(&dir, "m.json");
        ok(&[
            "measures",
            "--summary",
            s(&census),
            "--family",
            family,
            "--target",
            target,
            "--reduction",
            "none",
            "--out",
            s(&out),
        ]);
        let m = load(&out);
        assert_schema("measures", &m);
        let expected = if family == "bernoulli" { "bernoulli" } else { "trinomial" };
        assert_eq!(m["family"], expected);
    }

    let ug = path(&dir, "u.json");
    ok(&["census", "--nodes", "3", "--undirected", "--out", s(&ug)]);
    let out = edgevar(&["measures", "--summary", s(&ug), "--family", "trinomial", "--out", s(&path(&dir, "x.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_reproducible_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let run = |threads: &str, tag: &str| -> (Vec<u8>, Vec<u8>) {
        let g = path(&dir, &format!("g{tag}.jsonl"));
        let sm = path(&dir, "s.json");
        ok(&[
            "--threads",
            threads,
            "sample",
            "--nodes",
            "6",
            "--samples",
            "3000",
            "--chains",
            "3",
            "--seed",
            "5",
            "--out",
            s(&g),
        ]);
        ok(&["--threads", threads, "summarize", "--in", s(&g), "--out", s(&sm)]);
        let mut summary = load(&sm);
        summary["manifest"]["input_digests"] = Value::Null;
        summary["manifest"]["flags"] = Value::Null;
        (std::fs::read(&g).unwrap(), serde_json::to_vec(&summary).unwrap())
    };
    let one = run("1", "a");
    let four = run("4", "b");
    assert_eq!(one.0, four.0);
    assert_eq!(one.1, four.1);
}

#[test]
fn seed_falls_back_to_environment() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.jsonl");
    let b = path(&dir, "b.jsonl");
    ok(&["sample", "--nodes", "4", "--samples", "50", "--seed", "42", "--out", s(&a)]);
    let out = Command::new(env!("CARGO_BIN_EXE_edgevar"))
        .args(["sample", "--nodes", "4", "--samples", "50", "--out", s(&b)])
        .env("GE_SEED", "42")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn maxent_and_bounds() {
    let dir = TempDir::new().unwrap();
    let m = path(&dir, "m.json");
    ok(&["maxent", "--nodes", "5", "--family", "trinomial", "--source", "exact", "--out", s(&m)]);
    let r = load(&m);
    assert_schema("maxent", &r);
    assert_eq!(r["k"], 10);

    let out = edgevar(&["maxent", "--nodes", "9", "--source", "exact", "--out", s(&m)]);
    assert_eq!(out.status.code(), Some(4));

    let b = path(&dir, "b.csv");
    ok(&["bounds", "--nodes", "2..30", "--out", s(&b)]);
    let text = std::fs::read_to_string(&b).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,cov_bound,cor_bound,p_arrow,p_zero"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 29);
    assert_eq!(rows[0], vec![2.0, 0.25, 0.25, 0.5, 0.0]);
    for r in &rows {
        assert!((2.0 * r[3] + r[4] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn bootstrap_compare_and_tune() {
    let dir = TempDir::new().unwrap();
    let data = path(&dir, "d.csv");
    write_dataset(&data);
    let hc = path(&dir, "hc.json");
    let hc1 = path(&dir, "hc1.json");
    let mi = path(&dir, "mi.json");
    ok(&[
        "learn-bootstrap",
        "--data",
        s(&data),
        "--learner",
        "hc",
        "--replicates",
        "12",
        "--seed",
        "3",
        "--out",
        s(&hc),
    ]);
    ok(&[
        "learn-bootstrap",
        "--data",
        s(&data),
        "--learner",
        "hc:1",
        "--replicates",
        "12",
        "--seed",
        "3",
        "--out",
        s(&hc1),
    ]);
    ok(&[
        "learn-bootstrap",
        "--data",
        s(&data),
        "--learner",
        "mi:0.01",
        "--replicates",
        "12",
        "--seed",
        "3",
        "--out",
        s(&mi),
    ]);
    for p in [&hc, &hc1, &mi] {
        let r = load(p);
        assert_schema("bootstrap", &r);
        assert_eq!(r["graphs"].as_array().unwrap().len(), 12);
    }

    let cmp = path(&dir, "cmp.json");
    let out = ok(&["compare", "--runs", s(&hc), s(&hc1), "--criterion", "vf", "--out", s(&cmp)]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("hc:max_parents=1"));
    let c = load(&cmp);
    assert_schema("compare", &c);
    assert_eq!(c["criterion"], "vf");

    let mixed = edgevar(&["compare", "--runs", s(&hc), s(&mi)]);
    assert_eq!(mixed.status.code(), Some(3));
    assert!(stderr_line(&mixed).contains("incomparable"));

    let curve = path(&dir, "t.csv");
    ok(&[
        "tune",
        "--data",
        s(&data),
        "--grid",
        "0.005,0.05,0.2",
        "--replicates",
        "8",
        "--seed",
        "1",
        "--out",
        s(&curve),
    ]);
    let text = std::fs::read_to_string(&curve).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert_eq!(text.lines().filter(|l| l.ends_with(",true")).count(), 1);
}

#[test]
fn census_verification_table() {
    let out = ok(&["verify-census"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches("PASS").count(), 15);
    assert!(!text.contains("FAIL"));
}
