use edgevar::census;

/// About a minute on one core with optimisations; run with `--ignored`.
#[test]
#[ignore]
fn seven_node_census_matches_published_values() {
    let c = census::census_dags_with(7, true).unwrap();
    assert_eq!(c.graph_count, census::DAG_COUNTS[7]);
    for check in census::check_published(&c).unwrap() {
        assert!(check.matches, "{check:?}");
    }
}
