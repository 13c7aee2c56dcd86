//! Polynomial algorithms in the edge indicators and their rounding to
//! independent sets.
//!
//! A [`GraphPolynomial`] maps a graph (its indicator vector `A ∈ {0,1}^{n²}`)
//! to one real per vertex. [`round_polynomial`] thresholds the output at 1,
//! drops vertices that conflict with another selected vertex, and fails when
//! conflicts plus ambiguous values in `(1/2, 1)` exceed `η·n`.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{sample_bipartite_graph, BipartiteGraph, Side, VertexId};
use crate::rng::{Domain, RandomSeed};
use crate::stats::MeanEstimate;
use crate::subset::VertexSubset;

/// One value per vertex, `L` in `0..n` then `R` in `n..2n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialOutput {
    values: Vec<f64>,
}

impl PolynomialOutput {
    /// `values.len()` must be even and every value finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() % 2 != 0 {
            return Err(invalid("values", format!("length {} is not 2n", values.len())));
        }
        if let Some(i) = values.iter().position(|x| !x.is_finite()) {
            return Err(invalid("values", format!("entry {i} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.len() / 2
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, v: VertexId) -> f64 {
        self.values[v.flat(self.n())]
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }

    pub fn distance_sq(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).powi(2)).sum()
    }
}

/// A (possibly random, with the randomness fixed at construction) polynomial
/// of the edge indicators.
pub trait GraphPolynomial: Send + Sync {
    fn degree(&self) -> usize;

    fn evaluate(&self, graph: &BipartiteGraph) -> PolynomialOutput;

    /// `‖f(A) − f(A')‖²` where `A'` toggles coordinate `(l, r)` of `graph`,
    /// when the polynomial can compute it without re-evaluating. `None` means
    /// "evaluate both sides".
    fn flip_change_sq(&self, _graph: &BipartiteGraph, _l: u32, _r: u32) -> Option<f64> {
        None
    }

    fn name(&self) -> String;
}

/// A degree-0 polynomial: the same vector for every graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantPolynomial {
    output: PolynomialOutput,
    name: String,
}

impl ConstantPolynomial {
    pub fn new(values: Vec<f64>, name: impl Into<String>) -> Result<Self> {
        Ok(Self {
            output: PolynomialOutput::new(values)?,
            name: name.into(),
        })
    }

    /// 1 on `L`, 0 on `R`: selects all of `L` for every graph.
    pub fn left_indicator(n: usize) -> Self {
        let values = (0..2 * n).map(|i| if i < n { 1.0 } else { 0.0 }).collect();
        Self {
            output: PolynomialOutput { values },
            name: "left-indicator".into(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            output: PolynomialOutput { values: vec![0.0; 2 * n] },
            name: "zero".into(),
        }
    }
}

impl GraphPolynomial for ConstantPolynomial {
    fn degree(&self) -> usize {
        0
    }

    fn evaluate(&self, graph: &BipartiteGraph) -> PolynomialOutput {
        assert_eq!(graph.n(), self.output.n(), "polynomial built for another n");
        self.output.clone()
    }

    fn flip_change_sq(&self, _: &BipartiteGraph, _: u32, _: u32) -> Option<f64> {
        Some(0.0)
    }

    fn name(&self) -> String {
        self.name.clone()
    }
}

/// The linear construction: a fixed set `L₁ ⊆ L` of size `k_l` gets value 1,
/// the rest of `L` gets 0, and each `u ∈ R` gets `1 − |N(u) ∩ L₁|`.
///
/// `L₁` is a seeded uniformly random `k_l`-subset, chosen independently of the
/// graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degree1Polynomial {
    n: usize,
    in_l1: Vec<bool>,
}

impl Degree1Polynomial {
    pub fn new(n: usize, k_l: usize, seed: RandomSeed) -> Result<Self> {
        if k_l > n {
            return Err(invalid("k_l", format!("{k_l} exceeds n = {n}")));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut seed.rng(Domain::Subset, 0));
        let mut in_l1 = vec![false; n];
        for &l in &order[..k_l] {
            in_l1[l] = true;
        }
        Ok(Self { n, in_l1 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l1(&self) -> Vec<u32> {
        (0..self.n as u32).filter(|&l| self.in_l1[l as usize]).collect()
    }

    pub fn k_l(&self) -> usize {
        self.in_l1.iter().filter(|&&b| b).count()
    }
}

/// Alias for [`Degree1Polynomial::new`].
pub fn degree1_polynomial(n: usize, k_l: usize, seed: RandomSeed) -> Result<Degree1Polynomial> {
    Degree1Polynomial::new(n, k_l, seed)
}

impl GraphPolynomial for Degree1Polynomial {
    fn degree(&self) -> usize {
        1
    }

    fn evaluate(&self, graph: &BipartiteGraph) -> PolynomialOutput {
        assert_eq!(graph.n(), self.n, "polynomial built for another n");
        let n = self.n;
        let mut values = Vec::with_capacity(2 * n);
        values.extend(self.in_l1.iter().map(|&b| b as u8 as f64));
        values.extend((0..n as u32).map(|u| {
            let hits = graph
                .neighbors(VertexId::right(u))
                .iter()
                .filter(|&&l| self.in_l1[l as usize])
                .count();
            1.0 - hits as f64
        }));
        PolynomialOutput { values }
    }

    fn flip_change_sq(&self, _: &BipartiteGraph, l: u32, _: u32) -> Option<f64> {
        Some(if self.in_l1[l as usize] { 1.0 } else { 0.0 })
    }

    fn name(&self) -> String {
        format!("degree-1(k_l={})", self.k_l())
    }
}

/// The error budget `η` of the rounding step.
///
/// A rational `num/den` gives an exact threshold `⌊num·n/den⌋`; a real value is
/// floored after adding `1e-9`, so that e.g. `0.3 · 10` counts as 3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Eta {
    Real(f64),
    Ratio { num: u64, den: u64 },
}

impl Eta {
    pub fn threshold(&self, n: usize) -> Result<usize> {
        match *self {
            Eta::Real(x) if x.is_finite() && x >= 0.0 => Ok((x * n as f64 + 1e-9).floor() as usize),
            Eta::Real(x) => Err(invalid("eta", format!("must be a finite non-negative real, got {x}"))),
            Eta::Ratio { den: 0, .. } => Err(invalid("eta", "zero denominator")),
            Eta::Ratio { num, den } => Ok((num as u128 * n as u128 / den as u128) as usize),
        }
    }
}

impl From<f64> for Eta {
    fn from(x: f64) -> Self {
        Eta::Real(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundingOutcome {
    /// `None` is FAILURE.
    pub result: Option<VertexSubset>,
    /// `|I \ Ĩ|`: selected vertices with a selected neighbour.
    pub conflicted: usize,
    /// `|J|`: vertices with value in `(1/2, 1)`.
    pub fractional: usize,
    /// `⌊η·n⌋`.
    pub threshold: usize,
}

impl RoundingOutcome {
    pub fn is_failure(&self) -> bool {
        self.result.is_none()
    }

    /// The rounded set, empty on failure.
    pub fn set(&self) -> VertexSubset {
        self.result.clone().unwrap_or_default()
    }
}

pub fn round_polynomial(values: &PolynomialOutput, graph: &BipartiteGraph, eta: impl Into<Eta>) -> Result<RoundingOutcome> {
    let n = graph.n();
    if values.n() != n {
        return Err(invalid("values", format!("length {} does not match 2n = {}", values.values.len(), 2 * n)));
    }
    let threshold = eta.into().threshold(n)?;
    let selected: Vec<bool> = values.values.iter().map(|&x| x >= 1.0).collect();
    let fractional = values.values.iter().filter(|&&x| x > 0.5 && x < 1.0).count();

    let mut keep_l = Vec::new();
    let mut keep_r = Vec::new();
    let mut conflicted = 0;
    for (i, _) in selected.iter().enumerate().filter(|(_, &s)| s) {
        let v = VertexId::from_flat(i, n);
        let other = match v.side {
            Side::L => n,
            Side::R => 0,
        };
        if graph.neighbors(v).iter().any(|&w| selected[other + w as usize]) {
            conflicted += 1;
        } else {
            match v.side {
                Side::L => keep_l.push(v.index),
                Side::R => keep_r.push(v.index),
            }
        }
    }
    let result = (conflicted + fractional <= threshold).then(|| VertexSubset::new(keep_l, keep_r));
    Ok(RoundingOutcome {
        result,
        conflicted,
        fractional,
        threshold,
    })
}

/// Side-size targets `(k_l, k_r)` of the linear algorithm at slack `ε`:
/// `⌊(1−ε)(log d / d) n⌋` and `⌊(1−ε) d^{ε−1} n⌋`.
pub fn lowdeg_targets(n: usize, d: f64, epsilon: f64) -> Result<(usize, usize)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")));
    }
    if !(d > 1.0 && d.is_finite()) {
        return Err(invalid("d", format!("must exceed 1, got {d}")));
    }
    let n = n as f64;
    Ok((
        ((1.0 - epsilon) * d.ln() / d * n).floor() as usize,
        ((1.0 - epsilon) * d.powf(epsilon - 1.0) * n).floor() as usize,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTarget {
    pub k_l: usize,
    pub k_r: usize,
    pub xi: f64,
    pub eta: Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrial {
    pub count_l: usize,
    pub count_r: usize,
    pub norm_sq: f64,
    pub failed: bool,
    pub success: bool,
}

/// Monte Carlo check of the two conditions of `(k_l, k_r, δ, ξ, η)`-optimization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationReport {
    pub target: OptimizationTarget,
    pub trials: usize,
    pub norm: MeanEstimate,
    /// `ξ (k_l + k_r)`.
    pub norm_threshold: f64,
    pub norm_bound_holds: bool,
    /// Fraction of trials with `|V ∩ L| ≥ k_l` and `|V ∩ R| ≥ k_r`.
    pub success_rate: f64,
    pub failures: usize,
    pub rows: Vec<OptimizationTrial>,
}

/// Runs `poly` on `trials` independent draws of `G^bip_{n,d}` (trial `t` uses
/// stream `seed.stream + t`).
pub fn check_optimization<P: GraphPolynomial + ?Sized>(
    poly: &P,
    n: usize,
    d: f64,
    target: OptimizationTarget,
    trials: usize,
    seed: RandomSeed,
) -> Result<OptimizationReport> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    target.eta.threshold(n)?;
    let rows: Vec<OptimizationTrial> = (0..trials as u64)
        .into_par_iter()
        .map(|t| -> Result<OptimizationTrial> {
            let graph = sample_bipartite_graph(n, d, seed.offset(t))?;
            let out = poly.evaluate(&graph);
            let rounded = round_polynomial(&out, &graph, target.eta)?;
            let set = rounded.set();
            Ok(OptimizationTrial {
                count_l: set.count_l(),
                count_r: set.count_r(),
                norm_sq: out.norm_sq(),
                failed: rounded.is_failure(),
                success: set.count_l() >= target.k_l && set.count_r() >= target.k_r,
            })
        })
        .collect::<Result<_>>()?;
    let norms: Vec<f64> = rows.iter().map(|r| r.norm_sq).collect();
    let norm = MeanEstimate::from_samples(&norms);
    let norm_threshold = target.xi * (target.k_l + target.k_r) as f64;
    Ok(OptimizationReport {
        target,
        trials,
        norm,
        norm_threshold,
        norm_bound_holds: norm.mean <= norm_threshold,
        success_rate: rows.iter().filter(|r| r.success).count() as f64 / trials as f64,
        failures: rows.iter().filter(|r| r.failed).count(),
        rows,
    })
}

/// Empirical `E‖f(A)‖²` over `trials ≥ 30` draws; use [`MeanEstimate::ci99`]
/// for the interval.
pub fn norm_second_moment<P: GraphPolynomial + ?Sized>(
    poly: &P,
    n: usize,
    d: f64,
    trials: usize,
    seed: RandomSeed,
) -> Result<MeanEstimate> {
    if trials < 30 {
        return Err(invalid("trials", format!("must be at least 30, got {trials}")));
    }
    let norms: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| Ok(poly.evaluate(&sample_bipartite_graph(n, d, seed.offset(t))?).norm_sq()))
        .collect::<Result<_>>()?;
    Ok(MeanEstimate::from_samples(&norms))
}
