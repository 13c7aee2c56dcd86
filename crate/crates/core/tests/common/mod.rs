//! Independent reference computations for the integration suites.
#![allow(dead_code)]

use bipbis::BipartiteGraph;

/// Largest γ-balanced independent set by enumerating all `4^n` pairs of side
/// subsets. Returns `(a, b)` of a maximiser.
pub fn brute_force_max(graph: &BipartiteGraph, gamma: f64) -> (usize, usize) {
    let n = graph.n();
    assert!(n <= 10, "enumeration oracle is for tiny graphs");
    let edges: Vec<(u32, u32)> = graph.edges().collect();
    let mut best = (0, 0);
    for lm in 0u32..1 << n {
        for rm in 0u32..1 << n {
            if edges.iter().any(|&(l, r)| lm >> l & 1 == 1 && rm >> r & 1 == 1) {
                continue;
            }
            let (a, b) = (lm.count_ones() as usize, rm.count_ones() as usize);
            let balanced = (a as f64 - gamma * (a + b) as f64).abs() < 1.0;
            if balanced && a + b > best.0 + best.1 {
                best = (a, b);
            }
        }
    }
    best
}

/// For each `a`, the largest `b` with an independent `(A, B)`, `|A| = a`.
pub fn brute_force_profile(graph: &BipartiteGraph) -> Vec<usize> {
    let n = graph.n();
    let mut best = vec![0; n + 1];
    for lm in 0u32..1 << n {
        let mut blocked = 0u32;
        for (l, r) in graph.edges() {
            if lm >> l & 1 == 1 {
                blocked |= 1 << r;
            }
        }
        let a = lm.count_ones() as usize;
        best[a] = best[a].max(n - blocked.count_ones() as usize);
    }
    best
}

/// Root of `p = e^{-dp}` by bisection.
pub fn fixed_point(d: f64) -> f64 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid < (-d * mid).exp() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `E‖F‖²` for the degree-1 polynomial: `k_l + n E[(1 − X)²]` with
/// `X ~ Bin(k_l, d/n)`, summed directly over the binomial pmf.
pub fn degree1_norm_oracle(n: usize, d: f64, k_l: usize) -> f64 {
    let p = d / n as f64;
    let mut ln_choose = 0.0_f64;
    let mut total = 0.0;
    for x in 0..=k_l {
        if x > 0 {
            ln_choose += ((k_l - x + 1) as f64).ln() - (x as f64).ln();
        }
        let ln_pmf = ln_choose + x as f64 * p.ln() + (k_l - x) as f64 * (-p).ln_1p();
        total += ln_pmf.exp() * (1.0 - x as f64).powi(2);
    }
    k_l as f64 + n as f64 * total
}
