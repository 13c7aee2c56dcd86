//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the criteria execute one at a
//! time and their wall-clock budgets are meaningful.

mod common;

use std::error::Error;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bipbis::ogp::Selection;
use bipbis::{
    algorithmic_threshold, build_interpolation_path, check_forbidden_structure, check_optimization, classify_phase,
    detect_c_bad_edges, existence_threshold, first_moment_exponent, greedy_overlap_sequence, lowdeg_targets,
    one_local_pair, round_polynomial, run_local_trial, sample_bipartite_graph, stability_trial, BipartiteGraph,
    ConstantPolynomial, Degree1Polynomial, Eta, ExactSolver, ForbiddenStructureParams, OptimizationTarget, Phase,
    PhasePoint, PolynomialOutput, RandomSeed, StabilityConfig, VertexSubset,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

type Outcome = Result<String, Box<dyn Error>>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+).into());
        }
    };
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("local-algorithm expectations", local_expectations),
        ("gamma-balanced value", balanced_value),
        ("degree-1 achievability", degree1_achievability),
        ("trivial optimizer", trivial_optimizer),
        ("exact solver vs enumeration", exact_oracle),
        ("rounding soundness", rounding_soundness),
        ("interpolation-path marginals", path_marginals),
        ("stability probe", stability_probe),
        ("forbidden-structure checker", forbidden_checker),
        ("thresholds and phases", thresholds_and_phases),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(Ok(detail)) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {detail}", i + 1),
            Ok(Err(e)) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {e}", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): panicked", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn local_expectations() -> Outcome {
    let start = Instant::now();
    let (n, d, p) = (100_000, 10.0, 0.1);
    let pair = one_local_pair(p)?;
    let (mut l, mut r) = (0.0, 0.0);
    for t in 0..20 {
        let trial = run_local_trial(n, d, &pair, 0.5, RandomSeed::new(1001, t))?;
        l += trial.count_l as f64 / n as f64 / 20.0;
        r += trial.count_r as f64 / n as f64 / 20.0;
    }
    let elapsed = start.elapsed();
    let target_r = (-p * d).exp();
    ensure!((l - p).abs() <= 0.005, "L-density {l:.5} outside {p} +- 0.005");
    ensure!((r - target_r).abs() <= 0.01, "R-density {r:.5} outside {target_r:.5} +- 0.01");
    ensure!(elapsed <= Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("L {l:.5} (target 0.1), R {r:.5} (target {target_r:.5})"))
}

fn balanced_value() -> Outcome {
    let (n, d) = (100_000, 10.0);
    let p_star = common::fixed_point(d);
    let pair = one_local_pair(p_star)?;
    let mut density = 0.0;
    for t in 0..20 {
        let trial = run_local_trial(n, d, &pair, 0.5, RandomSeed::new(1002, t))?;
        density += trial.trimmed_size as f64 / (2 * n) as f64 / 20.0;
    }
    let rel = (density - p_star).abs() / p_star;
    ensure!(rel <= 0.02, "trimmed density {density:.5} vs alpha {p_star:.5}: relative error {rel:.4}");
    Ok(format!("p* = {p_star:.5}, trimmed density {density:.5}, relative error {rel:.4}"))
}

fn degree1_achievability() -> Outcome {
    let (n, d, eps) = (10_000, 50.0, 0.5);
    let (k_l, k_r) = lowdeg_targets(n, d, eps)?;
    ensure!((k_l, k_r) == (391, 707), "targets ({k_l}, {k_r})");
    let poly = Degree1Polynomial::new(n, k_l, RandomSeed::new(1003, 0))?;
    let target = OptimizationTarget {
        k_l,
        k_r,
        xi: d,
        eta: Eta::Ratio { num: 0, den: 1 },
    };
    let report = check_optimization(&poly, n, d, target, 100, RandomSeed::new(1003, 1))?;
    let oracle = common::degree1_norm_oracle(n, d, k_l);
    let half = report.norm.ci99();
    ensure!(report.failures == 0, "{} rounding failures", report.failures);
    ensure!(report.success_rate >= 0.99, "success rate {}", report.success_rate);
    ensure!(
        (report.norm.mean - oracle).abs() <= half,
        "E|F|^2 = {:.1} +- {half:.1}, oracle {oracle:.1}",
        report.norm.mean
    );
    let min_r = report.rows.iter().map(|r| r.count_r).min().unwrap_or(0);
    Ok(format!(
        "success {:.2}, no failures, min R-yield {min_r}, E|F|^2 = {:.1} +- {half:.1} (oracle {oracle:.1})",
        report.success_rate, report.norm.mean
    ))
}

fn trivial_optimizer() -> Outcome {
    let mut tested = Vec::new();
    for n in [1usize, 2, 7, 64, 500, 2000] {
        let poly = ConstantPolynomial::left_indicator(n);
        let target = OptimizationTarget {
            k_l: n,
            k_r: 0,
            xi: 1.0,
            eta: Eta::Ratio { num: 0, den: 1 },
        };
        let d = (n as f64 / 2.0).min(3.0);
        let report = check_optimization(&poly, n, d, target, 20, RandomSeed::new(1004, n as u64))?;
        ensure!(report.success_rate == 1.0, "n = {n}: success rate {}", report.success_rate);
        ensure!(report.norm.mean == n as f64, "n = {n}: E|f|^2 = {}", report.norm.mean);
        ensure!(report.norm_bound_holds && report.failures == 0, "n = {n}: bound or rounding failed");
        tested.push(n);
    }
    Ok(format!("success 1 and E|f|^2 = n for n in {tested:?}"))
}

fn exact_oracle() -> Outcome {
    let start = Instant::now();
    let solver = ExactSolver::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let mut discrepancies = 0;
    for i in 0..500u64 {
        let n = rng.random_range(1..=8usize);
        let d = rng.random_range(0.05..n as f64 - 0.01).max(0.05).min(n as f64 - 0.01);
        let g = sample_bipartite_graph(n, d, RandomSeed::new(1005, i))?;
        for gamma in [0.1, 0.25, 0.5] {
            let sol = solver.max_gamma_balanced_is(&g, gamma)?;
            let (a, b) = common::brute_force_max(&g, gamma);
            let witness_ok = sol.witness.is_independent(&g)
                && sol.witness.len() == sol.size
                && (sol.witness.count_l() as f64 - gamma * sol.size as f64).abs() < 1.0;
            if sol.size != a + b || !witness_ok {
                discrepancies += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(discrepancies == 0, "{discrepancies} discrepancies");
    ensure!(elapsed <= Duration::from_secs(120), "took {elapsed:?}");
    Ok("500 graphs x 3 gammas, zero discrepancies".into())
}

fn rounding_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let palette = [-1.0, 0.0, 0.5, 0.500001, 0.75, 0.999999, 1.0, 1.5, 3.0];
    let (mut failures, mut successes) = (0, 0);
    for _ in 0..10_000 {
        let n = rng.random_range(1..=12usize);
        let q: f64 = rng.random();
        let edges: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|l| (0..n as u32).map(move |r| (l, r)))
            .filter(|_| rng.random::<f64>() < q)
            .collect();
        let g = BipartiteGraph::from_edges(n, edges)?;
        let values: Vec<f64> = (0..2 * n)
            .map(|_| {
                if rng.random::<f64>() < 0.2 {
                    rng.random_range(-1.0..2.0)
                } else {
                    palette[rng.random_range(0..palette.len())]
                }
            })
            .collect();
        let (eta, expected_threshold) = match rng.random_range(0..3) {
            0 => {
                let den = rng.random_range(1..=12u64);
                let num = rng.random_range(0..=den);
                (Eta::Ratio { num, den }, (num as usize * n) / den as usize)
            }
            1 => {
                let k = rng.random_range(0..=n);
                (Eta::Real(k as f64 / n as f64), k)
            }
            _ => {
                let x: f64 = rng.random_range(0.0..1.0);
                (Eta::Real(x), (x * n as f64 + 1e-9).floor() as usize)
            }
        };

        let selected: Vec<bool> = values.iter().map(|&x| x >= 1.0).collect();
        let conflicted: Vec<bool> = (0..2 * n)
            .map(|i| {
                selected[i]
                    && (0..n).any(|j| {
                        let (l, r, other) = if i < n { (i, j, n + j) } else { (j, i - n, j) };
                        g.has_edge(l as u32, r as u32) && selected[other]
                    })
            })
            .collect();
        let j = values.iter().filter(|&&x| x > 0.5 && x < 1.0).count();
        let bad = conflicted.iter().filter(|&&c| c).count();
        let expect_failure = bad + j > expected_threshold;

        let out = round_polynomial(&PolynomialOutput::new(values)?, &g, eta)?;
        ensure!(out.is_failure() == expect_failure, "failure flag mismatch: {out:?} vs threshold {expected_threshold}");
        if let Some(set) = out.result {
            let kept: Vec<bool> = (0..2 * n).map(|i| selected[i] && !conflicted[i]).collect();
            let expected = VertexSubset::new(
                (0..n as u32).filter(|&i| kept[i as usize]).collect(),
                (0..n as u32).filter(|&i| kept[n + i as usize]).collect(),
            );
            ensure!(set == expected, "rounded set {set:?} vs {expected:?}");
            let independent = set.in_l().iter().all(|&l| set.in_r().iter().all(|&r| !g.has_edge(l, r)));
            ensure!(independent, "rounded set is not independent");
            successes += 1;
        } else {
            failures += 1;
        }
    }
    Ok(format!("10000 triples: {successes} independent outputs, {failures} failures, all as predicted"))
}

fn path_marginals() -> Outcome {
    let (n, d, seeds) = (20usize, 4.0, 1000u64);
    let m = (n * n) as u64;
    let times = [0usize, 1, 37, 200, 399, 400, 401, 800, 1234, 2000];
    let mut counts = vec![Vec::new(); times.len()];
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy, mut total) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for s in 0..seeds {
        let seed = RandomSeed::new(1007, s);
        let path = build_interpolation_path(sample_bipartite_graph(n, d, seed)?, 2000, d, seed)?;
        for (k, &t) in times.iter().enumerate() {
            counts[k].push(path.materialize(t)?.edge_count());
        }
        let (a0, am) = (path.materialize(0)?, path.materialize(m as usize)?);
        for l in 0..n as u32 {
            for r in 0..n as u32 {
                let (x, y) = (a0.has_edge(l, r) as u8 as f64, am.has_edge(l, r) as u8 as f64);
                sx += x;
                sy += y;
                sxx += x * x;
                syy += y * y;
                sxy += x * y;
                total += 1.0;
            }
        }
    }

    let binom = Binomial::new(d / n as f64, m)?;
    let mut worst_p = 1.0_f64;
    for (k, &t) in times.iter().enumerate() {
        let p_value = chi_square_p_value(&counts[k], &binom, seeds as f64, m as usize)?;
        ensure!(p_value >= 0.01, "t = {t}: chi-square p-value {p_value:.4}");
        worst_p = worst_p.min(p_value);
    }

    let cov = sxy / total - (sx / total) * (sy / total);
    let var_x = sxx / total - (sx / total).powi(2);
    let var_y = syy / total - (sy / total).powi(2);
    let corr = cov / (var_x * var_y).sqrt();
    let sigma = 1.0 / total.sqrt();
    ensure!(corr.abs() <= 4.0 * sigma, "corr(A0, Am) = {corr:.5}, 4 sigma = {:.5}", 4.0 * sigma);
    Ok(format!("min chi-square p-value {worst_p:.3}, corr(A0, Am) = {corr:.5} (4 sigma {:.5})", 4.0 * sigma))
}

/// Goodness of fit of `samples` to `dist`, with adjacent outcomes pooled until
/// every bin expects at least 5 observations.
fn chi_square_p_value(samples: &[usize], dist: &Binomial, total: f64, max: usize) -> Result<f64, Box<dyn Error>> {
    let mut bins: Vec<(usize, f64)> = Vec::new();
    let mut acc = 0.0;
    for k in 0..=max {
        acc += dist.pmf(k as u64) * total;
        if acc >= 5.0 {
            bins.push((k, acc));
            acc = 0.0;
        }
    }
    if let Some(last) = bins.last_mut() {
        last.0 = max;
        last.1 += acc;
    }
    let mut observed = vec![0.0; bins.len()];
    for &x in samples {
        let b = bins.iter().position(|&(hi, _)| x <= hi).unwrap_or(bins.len() - 1);
        observed[b] += 1.0;
    }
    let stat: f64 = bins.iter().zip(&observed).map(|(&(_, e), &o)| (o - e).powi(2) / e).sum();
    let chi = ChiSquared::new((bins.len() - 1) as f64)?;
    Ok(1.0 - chi.cdf(stat))
}

fn stability_probe() -> Outcome {
    let d = 3.0;
    let mut paths = 0;
    for (n, c) in [(10usize, 0.2), (10, 0.5), (20, 0.1), (30, 0.5), (60, 0.05)] {
        ensure!((n as f64) > 1.0 / c, "grid point n = {n}, c = {c}");
        let k_l = lowdeg_targets(n, d, 0.5)?.0.max(1);
        let f = Degree1Polynomial::new(n, k_l, RandomSeed::new(1008, n as u64))?;
        let norm_estimate = common::degree1_norm_oracle(n, d, k_l);
        ensure!(c * norm_estimate > 1.0, "c E|F|^2 = {} does not exceed the flip bound 1", c * norm_estimate);
        let config = StabilityConfig {
            c,
            gamma_steps: 1,
            degree: 1,
            norm_estimate,
        };
        for s in 0..100 {
            let seed = RandomSeed::new(1008, 1000 * n as u64 + s);
            let path = build_interpolation_path(sample_bipartite_graph(n, d, seed)?, n * n, d, seed)?;
            let bad = detect_c_bad_edges(&f, &path, &config)?;
            ensure!(bad.is_empty(), "n = {n}, c = {c}, seed {s}: bad steps {bad:?}");
            paths += 1;
        }
    }

    let (n, c) = (30, 0.5);
    let k_l = lowdeg_targets(n, d, 0.5)?.0;
    let f = Degree1Polynomial::new(n, k_l, RandomSeed::new(1008, 1))?;
    let config = StabilityConfig {
        c,
        gamma_steps: 1,
        degree: 1,
        norm_estimate: common::degree1_norm_oracle(n, d, k_l),
    };
    let report = stability_trial(&f, n, d, &config, 100, RandomSeed::new(1008, 2), bipbis::ogp::DEFAULT_STEP_BUDGET)?;
    ensure!(report.meets_floor(), "probability {} below floor {:e}", report.probability, report.floor);
    Ok(format!(
        "{paths} paths without bad steps; stability probability {:.2} >= floor {:.1e}",
        report.probability, report.floor
    ))
}

fn forbidden_checker() -> Outcome {
    let n = 64usize;
    let phi = 20.0;
    let mut checked = 0;
    for eps in [0.3, 0.6] {
        for k in [2usize, 4] {
            let params = ForbiddenStructureParams::with_phi(eps, k, phi)?;
            let step = (params.step_lower()).floor() as usize;
            for s in 0..50u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(1009 + s);
                let mut members: Vec<bool> = (0..2 * n).map(|_| rng.random::<f64>() < 0.4).collect();
                let mut sets = vec![subset_of(&members, n)];
                for _ in 0..200 {
                    for _ in 0..rng.random_range(0..=step) {
                        let i = rng.random_range(0..2 * n);
                        members[i] = !members[i];
                    }
                    sets.push(subset_of(&members, n));
                }
                let outcome = greedy_overlap_sequence(&sets, &params);
                let path = build_interpolation_path(BipartiteGraph::empty(n), sets.len(), 1.0, RandomSeed::new(1009, s))?;
                let verdict = check_forbidden_structure(&outcome.selected, &path, &params)?;
                ensure!(verdict.condition3(), "eps {eps}, K {k}, seed {s}: greedy selection breaks condition (3)");
                checked += 1;
            }
            hand_built_violations(&params, n)?;
        }
    }
    Ok(format!("{checked} greedy sequences coherent; hand-built violations rejected"))
}

fn subset_of(members: &[bool], n: usize) -> VertexSubset {
    VertexSubset::new(
        (0..n as u32).filter(|&i| members[i as usize]).collect(),
        (0..n as u32).filter(|&i| members[n + i as usize]).collect(),
    )
}

fn hand_built_violations(params: &ForbiddenStructureParams, n: usize) -> Result<(), Box<dyn Error>> {
    let dense = params.density().ceil() as u32;
    let fresh = params.step_lower().ceil() as u32;
    // S_{k+1} adds `fresh` new L-vertices to S_k: a valid increment.
    let chain = |extra: &[u32]| -> Vec<Selection> {
        let mut sets = Vec::new();
        for i in 0..params.k as u32 {
            let mut l: Vec<u32> = (0..dense + i * fresh).collect();
            if i + 1 == params.k as u32 {
                l.extend(extra);
            }
            sets.push(Selection {
                t: 0,
                set: VertexSubset::new(l, (0..dense).collect()),
            });
        }
        sets
    };
    let empty = build_interpolation_path(BipartiteGraph::empty(n), 0, 1.0, RandomSeed::new(0, 0))?;
    let valid = check_forbidden_structure(&chain(&[]), &empty, params)?;
    ensure!(valid.present() && valid.bitmask() == 0b111, "valid chain rejected: {valid:?}");

    let edge = BipartiteGraph::from_edges(n, [(0, 1)])?;
    let edged = build_interpolation_path(edge, 0, 1.0, RandomSeed::new(0, 0))?;
    let v = check_forbidden_structure(&chain(&[]), &edged, params)?;
    ensure!(v.bitmask() == 0b110 && v.independence[0] == Some((0, 1)), "edge not caught: {v:?}");

    let mut sparse = chain(&[]);
    sparse[0].set = VertexSubset::new((0..dense).collect(), (0..dense - 1).collect());
    let v = check_forbidden_structure(&sparse, &empty, params)?;
    ensure!(!v.condition2() && v.condition1(), "thin side not caught: {v:?}");

    let jump: Vec<u32> = (60..60 + params.step_upper().ceil() as u32).collect();
    let v = check_forbidden_structure(&chain(&jump), &empty, params)?;
    ensure!(v.bitmask() == 0b011, "large increment not caught: {v:?}");

    let mut stalled = chain(&[]);
    let last = stalled.len() - 1;
    stalled[last].set = stalled[last - 1].set.clone();
    let v = check_forbidden_structure(&stalled, &empty, params)?;
    ensure!(v.bitmask() == 0b011, "empty increment not caught: {v:?}");

    let short = &chain(&[])[..1];
    let v = check_forbidden_structure(short, &empty, params)?;
    ensure!(!v.present(), "incomplete sequence accepted");
    Ok(())
}

fn thresholds_and_phases() -> Outcome {
    ensure!(existence_threshold(0.5)? == 2.0, "existence threshold at 1/2");
    ensure!(algorithmic_threshold(0.5)? == 1.0, "algorithmic threshold at 1/2");
    for i in 1..=50 {
        let gamma = i as f64 / 100.0;
        let ratio = existence_threshold(gamma)? / algorithmic_threshold(gamma)?;
        ensure!((ratio - 1.0 / (1.0 - gamma)).abs() <= 1e-12, "ratio at gamma {gamma}: {ratio}");
    }
    for (x, y, want) in [(0.5, 5.0, Phase::Easy), (1.5, 1.5, Phase::Hard), (3.0, 3.0, Phase::Nonexistent)] {
        let got = classify_phase(PhasePoint::new(x, y)?);
        ensure!(got == want, "({x}, {y}) classified {got}");
    }
    let lead = first_moment_exponent(2.0, 1e6, 0.5)?.leading_coefficient;
    ensure!(lead == 0.0, "leading coefficient {lead}");
    Ok("thresholds, gamma-grid ratios, exemplars and leading coefficient exact".into())
}
