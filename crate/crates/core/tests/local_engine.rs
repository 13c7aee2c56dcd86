use bipbis::{
    apply_local_pair, concentration_probe, estimate_gw_expectation, gamma_trim, is_gamma_balanced, one_local_pair,
    sample_bipartite_graph, Ball, LocalFunctionPair, RandomSeed, Side, VertexLabels,
};

#[test]
fn tree_expectations_match_closed_forms() {
    let (d, trials) = (6.0, 40_000);
    for p in [0.05, 0.2, 0.5] {
        let pair = one_local_pair(p).unwrap();
        let l = estimate_gw_expectation(&pair, Side::L, d, trials, RandomSeed::new(21, 0)).unwrap();
        let r = estimate_gw_expectation(&pair, Side::R, d, trials, RandomSeed::new(21, 1)).unwrap();
        assert!((l.mean - p).abs() <= l.ci99().max(1e-3), "p = {p}: {l:?}");
        let er = (-p * d).exp();
        assert!((r.mean - er).abs() <= r.ci99().max(1e-3), "p = {p}: {r:?} vs {er}");
    }
}

#[test]
fn finite_graph_matches_tree_limit() {
    let (n, d, p) = (20_000, 5.0, 0.3);
    let g = sample_bipartite_graph(n, d, RandomSeed::new(22, 0)).unwrap();
    let set = apply_local_pair(&g, &one_local_pair(p).unwrap(), RandomSeed::new(22, 0)).unwrap();
    assert!(set.is_independent(&g));
    assert!((set.count_l() as f64 / n as f64 - p).abs() < 0.015);
    assert!((set.count_r() as f64 / n as f64 - (-p * d).exp()).abs() < 0.015);
    let trimmed = gamma_trim(&set, 0.3).unwrap();
    assert!(is_gamma_balanced(&trimmed, 0.3).unwrap());
}

#[test]
fn variance_grows_linearly() {
    let pair = one_local_pair(0.2).unwrap();
    let rows = concentration_probe(&pair, &[500, 2000, 8000], 4.0, 40, RandomSeed::new(23, 0)).unwrap();
    // L-counts are Bin(n, p); R-counts pick up positive correlation through
    // shared neighbours but stay O(n).
    for row in &rows {
        assert!(row.var_l_over_n < 0.5 && row.var_r_over_n < 4.0, "{row:?}");
        assert!((row.mean_l / row.n as f64 - 0.2).abs() < 0.02);
    }
    assert!(concentration_probe(&pair, &[100], 4.0, 29, RandomSeed::new(23, 0)).is_err());
}

#[test]
fn labels_do_not_depend_on_n() {
    let small = VertexLabels::generate(10, RandomSeed::new(24, 3));
    let large = VertexLabels::generate(30, RandomSeed::new(24, 3));
    assert_eq!(&small.values()[..10], &large.values()[..10]);
    assert_eq!(&small.values()[10..], &large.values()[30..40]);
}

#[test]
fn custom_radius_two_pair() {
    // L joins on a low label; R joins when no neighbour joined. The R rule
    // only looks at depth-1 labels, so the pair is compatible.
    let p = 0.25;
    let pair = LocalFunctionPair::new(
        "custom",
        2,
        move |b: &Ball| b.root_label() <= p,
        move |b: &Ball| b.root_neighbor_labels().all(|x| x > p),
    );
    let g = sample_bipartite_graph(500, 3.0, RandomSeed::new(25, 0)).unwrap();
    let a = apply_local_pair(&g, &pair, RandomSeed::new(25, 0)).unwrap();
    let b = apply_local_pair(&g, &one_local_pair(p).unwrap(), RandomSeed::new(25, 0)).unwrap();
    assert_eq!(a, b);
}
