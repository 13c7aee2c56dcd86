use bipbis::ogp::{sigma, Selection};
use bipbis::{
    balance_inequality_probe, build_interpolation_path, check_forbidden_structure, detect_c_bad_edges,
    greedy_overlap_sequence, one_local_pair, round_polynomial, sample_bipartite_graph, stability_trial,
    BipartiteGraph, Degree1Polynomial, ForbiddenStructureParams, GraphPolynomial, LocalAlgorithmFunction,
    PolynomialOutput, RandomSeed, StabilityConfig, VertexSubset,
};

/// Hides the incremental shortcut so detection falls back to evaluation.
struct Opaque<P>(P);

impl<P: GraphPolynomial> GraphPolynomial for Opaque<P> {
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn evaluate(&self, graph: &BipartiteGraph) -> PolynomialOutput {
        self.0.evaluate(graph)
    }

    fn name(&self) -> String {
        self.0.name()
    }
}

fn naive_bad_steps<P: GraphPolynomial>(f: &P, path: &bipbis::InterpolationPath, threshold: f64) -> Vec<usize> {
    (1..=path.len())
        .filter(|&t| {
            let before = f.evaluate(&path.materialize(t - 1).unwrap());
            let after = f.evaluate(&path.materialize(t).unwrap());
            before.distance_sq(&after) >= threshold
        })
        .collect()
}

#[test]
fn incremental_and_naive_detection_agree() {
    let n = 8;
    let f = Degree1Polynomial::new(n, 3, RandomSeed::new(41, 0)).unwrap();
    for s in 0..5 {
        let seed = RandomSeed::new(41, s);
        let path = build_interpolation_path(sample_bipartite_graph(n, 3.0, seed).unwrap(), 2 * n * n, 3.0, seed).unwrap();
        let config = StabilityConfig {
            c: 0.1,
            gamma_steps: 2,
            degree: 1,
            norm_estimate: 5.0,
        };
        let fast = detect_c_bad_edges(&f, &path, &config).unwrap();
        let slow = detect_c_bad_edges(&Opaque(f.clone()), &path, &config).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(fast, naive_bad_steps(&f, &path, 0.5));
        // Bad steps flip an edge touching L₁.
        let l1 = f.l1();
        for &t in &fast {
            let delta = path.deltas()[t - 1];
            let (l, _) = bipbis::edge_index_roundtrip(n, delta.coordinate).unwrap();
            assert!(l1.contains(&l));
        }
    }
}

#[test]
fn local_algorithm_wrapper_detection() {
    let n = 10;
    let f = LocalAlgorithmFunction::new(one_local_pair(0.3).unwrap(), RandomSeed::new(42, 0));
    let seed = RandomSeed::new(42, 1);
    let path = build_interpolation_path(sample_bipartite_graph(n, 2.0, seed).unwrap(), n * n, 2.0, seed).unwrap();
    let config = StabilityConfig {
        c: 0.25,
        gamma_steps: 1,
        degree: 1,
        norm_estimate: 4.0,
    };
    let bad = detect_c_bad_edges(&f, &path, &config).unwrap();
    assert_eq!(bad, naive_bad_steps(&f, &path, 1.0));
    let out = f.evaluate(path.base());
    assert!(out.values().iter().all(|&x| x == 0.0 || x == 1.0));
}

#[test]
fn path_reproducibility_and_sweep() {
    let seed = RandomSeed::new(43, 0);
    let base = sample_bipartite_graph(6, 2.0, seed).unwrap();
    let a = build_interpolation_path(base.clone(), 100, 2.0, seed).unwrap();
    let b = build_interpolation_path(base.clone(), 100, 2.0, seed).unwrap();
    assert_eq!(a, b);
    for (i, delta) in a.deltas().iter().enumerate() {
        assert_eq!(delta.coordinate, sigma(i as u64 + 1, 36));
    }
    assert!(build_interpolation_path(base.clone(), 10, 6.0, seed).is_err());
    assert!(build_interpolation_path(base, 10, 0.0, seed).is_err());
}

#[test]
fn stability_trial_reports() {
    let f = Degree1Polynomial::new(12, 3, RandomSeed::new(44, 0)).unwrap();
    let config = StabilityConfig {
        c: 0.01,
        gamma_steps: 1,
        degree: 1,
        norm_estimate: 10.0,
    };
    let report = stability_trial(&f, 12, 3.0, &config, 40, RandomSeed::new(44, 1), 1000).unwrap();
    assert!(report.budget_exceeded);
    assert_eq!(report.steps_per_trial, 144);
    assert!(report.clean < 40, "threshold 0.1 flags every L₁ flip");
    assert!(report.interval.0 <= report.probability && report.probability <= report.interval.1);
    assert!(stability_trial(&f, 12, 3.0, &config, 0, RandomSeed::new(44, 1), 1000).is_err());
}

#[test]
fn greedy_on_a_rounded_path() {
    let (n, d) = (40, 4.0);
    let f = Degree1Polynomial::new(n, 8, RandomSeed::new(45, 0)).unwrap();
    let seed = RandomSeed::new(45, 1);
    let path = build_interpolation_path(sample_bipartite_graph(n, d, seed).unwrap(), n * n, d, seed).unwrap();
    let mut cursor = path.cursor();
    let mut sets = vec![round_polynomial(&f.evaluate(cursor.graph()), cursor.graph(), 1.0).unwrap().set()];
    while cursor.advance().is_some() {
        sets.push(round_polynomial(&f.evaluate(cursor.graph()), cursor.graph(), 1.0).unwrap().set());
    }
    let params = ForbiddenStructureParams::new(0.5, 3, n, d).unwrap();
    let outcome = greedy_overlap_sequence(&sets, &params);
    assert!(outcome.selected.windows(2).all(|w| w[0].t < w[1].t));
    let verdict = check_forbidden_structure(&outcome.selected, &path, &params).unwrap();
    // Rounded sets are independent in their own graph.
    assert!(verdict.condition1());
    assert_eq!(verdict.independence.len(), outcome.selected.len());

    let late = [Selection {
        t: path.len() + 1,
        set: VertexSubset::empty(),
    }];
    assert!(check_forbidden_structure(&late, &path, &params).is_err());
}

#[test]
fn balance_probe_runs() {
    let report = balance_inequality_probe(8, 4.0, 30, RandomSeed::new(46, 0)).unwrap();
    assert_eq!(report.trials, 30);
    assert!(report.interval.0 <= report.rate && report.rate <= report.interval.1);
    assert!(balance_inequality_probe(8, 1.0, 30, RandomSeed::new(46, 0)).is_err());
}
