use bipbis::{sample_bipartite_graph, BipartiteGraph, RandomSeed, Side, VertexId};
use proptest::prelude::*;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

#[test]
fn edge_counts_follow_the_binomial() {
    let (n, d, seeds) = (30usize, 3.0, 2000u64);
    let m = (n * n) as u64;
    let binom = Binomial::new(d / n as f64, m).unwrap();
    // Deciles of Bin(900, 0.1) as bins.
    let cuts: Vec<u64> = (1..10).map(|q| binom.inverse_cdf(q as f64 / 10.0)).collect();
    let mut observed = vec![0.0; cuts.len() + 1];
    let mut per_coordinate = vec![0u32; n * n];
    for s in 0..seeds {
        let g = sample_bipartite_graph(n, d, RandomSeed::new(11, s)).unwrap();
        let k = g.edge_count() as u64;
        observed[cuts.iter().position(|&c| k <= c).unwrap_or(cuts.len())] += 1.0;
        for (l, r) in g.edges() {
            per_coordinate[l as usize * n + r as usize] += 1;
        }
    }
    let mut expected = Vec::new();
    let mut prev = 0.0;
    for &c in &cuts {
        let cdf = binom.cdf(c);
        expected.push((cdf - prev) * seeds as f64);
        prev = cdf;
    }
    expected.push((1.0 - prev) * seeds as f64);
    let stat: f64 = observed.iter().zip(&expected).map(|(o, e)| (o - e).powi(2) / e).sum();
    let p_value = 1.0 - ChiSquared::new((expected.len() - 1) as f64).unwrap().cdf(stat);
    assert!(p_value > 0.001, "chi-square p-value {p_value}");

    let p = d / n as f64;
    let sd = (seeds as f64 * p * (1.0 - p)).sqrt();
    for (i, &c) in per_coordinate.iter().enumerate() {
        assert!((c as f64 - seeds as f64 * p).abs() < 5.0 * sd, "coordinate {i}: {c}");
    }
}

#[test]
fn degrees_average_to_d() {
    let (n, d) = (20_000, 7.5);
    let g = sample_bipartite_graph(n, d, RandomSeed::new(12, 0)).unwrap();
    let mean_l = (0..n as u32).map(|i| g.degree(VertexId::left(i))).sum::<usize>() as f64 / n as f64;
    let mean_r = (0..n as u32).map(|i| g.degree(VertexId::right(i))).sum::<usize>() as f64 / n as f64;
    assert_eq!(mean_l, mean_r);
    assert!((mean_l - d).abs() < 0.1, "{mean_l}");
}

#[test]
fn sampling_is_reproducible_and_stream_sensitive() {
    let a = sample_bipartite_graph(200, 4.0, RandomSeed::new(3, 1)).unwrap();
    let b = sample_bipartite_graph(200, 4.0, RandomSeed::new(3, 1)).unwrap();
    let c = sample_bipartite_graph(200, 4.0, RandomSeed::new(3, 2)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn malformed_text_is_rejected() {
    for text in ["", "0 0\n", "2 1\n0 2\n", "2 2\n0 0\n", "2 1\n0 0\n1 1\n", "2 1\n0\n", "2 1\n0 0 0\n", "2 x\n"] {
        assert!(BipartiteGraph::read_text(text.as_bytes()).is_err(), "{text:?}");
    }
    let g = BipartiteGraph::read_text("# header\n3 2\n\n0 1 # first\n2 0\n".as_bytes()).unwrap();
    assert!(g.has_edge(0, 1) && g.has_edge(2, 0));
    assert_eq!(g.neighbors(VertexId { side: Side::R, index: 0 }), &[2]);
}

proptest! {
    #[test]
    fn text_roundtrip(n in 1usize..12, d in 0.01f64..0.99, seed in any::<u64>()) {
        let g = sample_bipartite_graph(n, d * n as f64, RandomSeed::new(seed, 0)).unwrap();
        let back = BipartiteGraph::read_text(g.to_text().as_bytes()).unwrap();
        prop_assert_eq!(back, g);
    }
}
