//! Interpolation paths, stability probes and the forbidden overlap structure.
//!
//! An interpolation path starts from `A⁽⁰⁾ ~ G^bip_{n,d}` and at step `t`
//! resamples coordinate `σ(t) = ((t − 1) mod n²) + 1` from `Ber(d/n)`. Paths
//! are stored as `(coordinate, bit)` deltas; graphs along the path are
//! materialised on demand or walked incrementally with a [`PathCursor`].
//!
//! Everything here is diagnostic: the probes measure how algorithms behave
//! along correlated graph sequences and check candidate overlap structures,
//! they do not certify hardness.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exact::ExactSolver;
use crate::graph::{edge_index_roundtrip, sample_bipartite_graph, BipartiteGraph, VertexId};
use crate::local::{apply_with_labels, LocalFunctionPair, VertexLabels};
use crate::lowdeg::{GraphPolynomial, PolynomialOutput};
use crate::rng::{Domain, RandomSeed};
use crate::stats::{wilson_interval, Z_99};
use crate::subset::VertexSubset;

/// Steps above which [`stability_trial`] logs a warning.
pub const DEFAULT_STEP_BUDGET: u64 = 200_000_000;

/// The coordinate resampled at step `t ≥ 1` of a path over `m` coordinates.
pub fn sigma(t: u64, m: u64) -> u64 {
    assert!(t >= 1 && m >= 1, "sigma is defined for t, m >= 1");
    (t - 1) % m + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDelta {
    /// 1-based edge coordinate.
    pub coordinate: u64,
    /// The resampled indicator, stored even when it equals the previous value.
    pub bit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationPath {
    base: BipartiteGraph,
    d: f64,
    deltas: Vec<PathDelta>,
}

/// Builds a path of length `steps` from `base`. Step `t` draws its bit from
/// `(seed, t)`, independently of how `base` was sampled.
pub fn build_interpolation_path(base: BipartiteGraph, steps: usize, d: f64, seed: RandomSeed) -> Result<InterpolationPath> {
    let n = base.n();
    if !(d.is_finite() && d > 0.0 && d < n as f64) {
        return Err(invalid("d", format!("must lie in (0, n = {n}), got {d}")));
    }
    let p = d / n as f64;
    let m = (n * n) as u64;
    let deltas = (1..=steps as u64)
        .map(|t| PathDelta {
            coordinate: sigma(t, m),
            bit: seed.uniform(Domain::PathStep, t) < p,
        })
        .collect();
    Ok(InterpolationPath { base, d, deltas })
}

impl InterpolationPath {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// `T`.
    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn base(&self) -> &BipartiteGraph {
        &self.base
    }

    pub fn deltas(&self) -> &[PathDelta] {
        &self.deltas
    }

    /// `A⁽ᵗ⁾`.
    pub fn materialize(&self, t: usize) -> Result<BipartiteGraph> {
        if t > self.len() {
            return Err(invalid("t", format!("{t} exceeds path length {}", self.len())));
        }
        let n = self.n();
        let mut g = self.base.clone();
        for delta in &self.deltas[..t] {
            let (l, r) = edge_index_roundtrip(n, delta.coordinate)?;
            g.set_edge(l, r, delta.bit);
        }
        Ok(g)
    }

    pub fn cursor(&self) -> PathCursor<'_> {
        PathCursor {
            path: self,
            t: 0,
            graph: self.base.clone(),
        }
    }
}

/// What changed at one step of a walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepChange {
    pub t: usize,
    pub l: u32,
    pub r: u32,
    pub before: bool,
    pub after: bool,
}

impl StepChange {
    pub fn flipped(&self) -> bool {
        self.before != self.after
    }
}

/// Walks a path forward, holding `A⁽ᵗ⁾`.
#[derive(Debug, Clone)]
pub struct PathCursor<'a> {
    path: &'a InterpolationPath,
    t: usize,
    graph: BipartiteGraph,
}

impl PathCursor<'_> {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    /// The change the next step would make, without applying it.
    pub fn peek(&self) -> Option<StepChange> {
        let delta = self.path.deltas.get(self.t)?;
        let (l, r) = edge_index_roundtrip(self.path.n(), delta.coordinate).expect("path coordinates are in range");
        Some(StepChange {
            t: self.t + 1,
            l,
            r,
            before: self.graph.has_edge(l, r),
            after: delta.bit,
        })
    }

    pub fn advance(&mut self) -> Option<StepChange> {
        let change = self.peek()?;
        self.graph.set_edge(change.l, change.r, change.after);
        self.t += 1;
        Some(change)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub c: f64,
    /// `Γ`: the path has `Γ n²` steps.
    pub gamma_steps: usize,
    /// `D`.
    pub degree: usize,
    /// Stand-in for `E‖f(A)‖²`, usually from
    /// [`norm_second_moment`](crate::lowdeg::norm_second_moment).
    pub norm_estimate: f64,
}

impl StabilityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(invalid("c", format!("must be positive, got {}", self.c)));
        }
        if self.gamma_steps == 0 {
            return Err(invalid("gamma_steps", "must be positive"));
        }
        if self.degree == 0 {
            return Err(invalid("degree", "must be positive"));
        }
        if !(self.norm_estimate.is_finite() && self.norm_estimate > 0.0) {
            return Err(invalid("norm_estimate", format!("must be positive, got {}", self.norm_estimate)));
        }
        Ok(())
    }

    /// `c · norm_estimate`.
    pub fn bad_threshold(&self) -> f64 {
        self.c * self.norm_estimate
    }

    /// `(d/n)^{4ΓD/c}`.
    pub fn probability_floor(&self, n: usize, d: f64) -> f64 {
        (d / n as f64).powf(4.0 * self.gamma_steps as f64 * self.degree as f64 / self.c)
    }
}

/// Steps `t` with `‖f(A⁽ᵗ⁾) − f(A⁽ᵗ⁻¹⁾)‖² ≥ c · norm_estimate`.
pub fn detect_c_bad_edges<P: GraphPolynomial + ?Sized>(f: &P, path: &InterpolationPath, config: &StabilityConfig) -> Result<Vec<usize>> {
    config.validate()?;
    let threshold = config.bad_threshold();
    let mut bad = Vec::new();
    let mut cursor = path.cursor();
    let mut cached: Option<PolynomialOutput> = None;
    while let Some(change) = cursor.peek() {
        let diff = if !change.flipped() {
            0.0
        } else if let Some(x) = f.flip_change_sq(cursor.graph(), change.l, change.r) {
            cached = None;
            x
        } else {
            let before = cached.take().unwrap_or_else(|| f.evaluate(cursor.graph()));
            cursor.advance();
            let after = f.evaluate(cursor.graph());
            let diff = before.distance_sq(&after);
            cached = Some(after);
            if diff >= threshold {
                bad.push(change.t);
            }
            continue;
        };
        cursor.advance();
        if diff >= threshold {
            bad.push(change.t);
        }
    }
    Ok(bad)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub trials: usize,
    /// Paths with no c-bad step.
    pub clean: usize,
    pub probability: f64,
    /// 99% Wilson interval for `probability`.
    pub interval: (f64, f64),
    /// `(d/n)^{4ΓD/c}`.
    pub floor: f64,
    pub norm_estimate: f64,
    pub steps_per_trial: u64,
    pub budget_exceeded: bool,
    pub bad_counts: Vec<usize>,
}

impl StabilityReport {
    pub fn meets_floor(&self) -> bool {
        self.probability >= self.floor
    }
}

/// Fraction of length-`Γn²` paths with no c-bad step, against `(d/n)^{4ΓD/c}`.
///
/// Trial `t` samples `A⁽⁰⁾` and its path from stream `seed.stream + t`.
pub fn stability_trial<P: GraphPolynomial + ?Sized>(
    f: &P,
    n: usize,
    d: f64,
    config: &StabilityConfig,
    trials: usize,
    seed: RandomSeed,
    step_budget: u64,
) -> Result<StabilityReport> {
    config.validate()?;
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    let steps = config.gamma_steps as u64 * (n as u64) * (n as u64);
    let budget_exceeded = steps.saturating_mul(trials as u64) > step_budget;
    if budget_exceeded {
        log::warn!("stability probe walks {steps} steps x {trials} trials, above the budget of {step_budget}");
    }
    let bad_counts: Vec<usize> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let s = seed.offset(t);
            let base = sample_bipartite_graph(n, d, s)?;
            let path = build_interpolation_path(base, steps as usize, d, s)?;
            Ok(detect_c_bad_edges(f, &path, config)?.len())
        })
        .collect::<Result<_>>()?;
    let clean = bad_counts.iter().filter(|&&k| k == 0).count();
    Ok(StabilityReport {
        trials,
        clean,
        probability: clean as f64 / trials as f64,
        interval: wilson_interval(clean, trials, Z_99),
        floor: config.probability_floor(n, d),
        norm_estimate: config.norm_estimate,
        steps_per_trial: steps,
        budget_exceeded,
        bad_counts,
    })
}

/// A local pair with fixed labels, viewed as a 0/1-valued function of the
/// graph. Treated as degree 1 for stability purposes.
#[derive(Debug, Clone)]
pub struct LocalAlgorithmFunction {
    pair: LocalFunctionPair,
    seed: RandomSeed,
}

impl LocalAlgorithmFunction {
    pub fn new(pair: LocalFunctionPair, seed: RandomSeed) -> Self {
        Self { pair, seed }
    }
}

impl GraphPolynomial for LocalAlgorithmFunction {
    fn degree(&self) -> usize {
        1
    }

    fn evaluate(&self, graph: &BipartiteGraph) -> PolynomialOutput {
        let n = graph.n();
        let labels = VertexLabels::generate(n, self.seed);
        let set = apply_with_labels(graph, &self.pair, &labels).expect("local pair must be compatible");
        let mut values = vec![0.0; 2 * n];
        for v in set.vertices() {
            values[v.flat(n)] = 1.0;
        }
        PolynomialOutput::new(values).expect("0/1 values")
    }

    fn name(&self) -> String {
        self.pair.name.clone()
    }
}

/// `ε`, `K` and the scale `φ = (log d / d) n` of the forbidden structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForbiddenStructureParams {
    pub epsilon: f64,
    pub k: usize,
    pub phi: f64,
}

impl ForbiddenStructureParams {
    /// Any `K ≥ 2`; see [`Self::strict`] for the `K ≥ ⌈9/ε²⌉ + 1` regime.
    pub fn new(epsilon: f64, k: usize, n: usize, d: f64) -> Result<Self> {
        if !(d > 1.0 && d.is_finite()) {
            return Err(invalid("d", format!("must exceed 1, got {d}")));
        }
        Self::with_phi(epsilon, k, d.ln() / d * n as f64)
    }

    pub fn with_phi(epsilon: f64, k: usize, phi: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(invalid("epsilon", format!("must be positive, got {epsilon}")));
        }
        if k < 2 {
            return Err(invalid("K", format!("must be at least 2, got {k}")));
        }
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(invalid("phi", format!("must be positive, got {phi}")));
        }
        Ok(Self { epsilon, k, phi })
    }

    /// Requires `K ≥ ⌈9/ε²⌉ + 1`, the regime where the structure is provably
    /// rare for large `d`.
    pub fn strict(epsilon: f64, k: usize, n: usize, d: f64) -> Result<Self> {
        let params = Self::new(epsilon, k, n, d)?;
        let min = Self::min_k(epsilon);
        if k < min {
            return Err(invalid("K", format!("must be at least {min} for epsilon = {epsilon}, got {k}")));
        }
        Ok(params)
    }

    pub fn min_k(epsilon: f64) -> usize {
        (9.0 / (epsilon * epsilon)).ceil() as usize + 1
    }

    pub fn k_sufficient(&self) -> bool {
        self.k >= Self::min_k(self.epsilon)
    }

    /// `(ε/4) φ`.
    pub fn step_lower(&self) -> f64 {
        self.epsilon / 4.0 * self.phi
    }

    /// `(ε/2) φ`.
    pub fn step_upper(&self) -> f64 {
        self.epsilon / 2.0 * self.phi
    }

    /// `(1 + ε) φ`.
    pub fn density(&self) -> f64 {
        (1.0 + self.epsilon) * self.phi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Selection {
    /// Path time `t_k`.
    pub t: usize,
    pub set: VertexSubset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyOutcome {
    pub selected: Vec<Selection>,
    pub success: bool,
}

/// `S_1 = V_0`; then `S_k` is the first `V_t` after `t_{k−1}` with
/// `|V_t \ ∪_{i<k} S_i| ≥ (ε/4) φ`. Succeeds once `K` sets are selected.
pub fn greedy_overlap_sequence(path_sets: &[VertexSubset], params: &ForbiddenStructureParams) -> GreedyOutcome {
    let Some(first) = path_sets.first() else {
        return GreedyOutcome {
            selected: Vec::new(),
            success: false,
        };
    };
    let mut union: HashSet<VertexId> = first.vertices().collect();
    let mut selected = vec![Selection { t: 0, set: first.clone() }];
    let lower = params.step_lower();
    let mut t = 1;
    while selected.len() < params.k && t < path_sets.len() {
        let fresh = path_sets[t].vertices().filter(|v| !union.contains(v)).count();
        if fresh as f64 >= lower {
            union.extend(path_sets[t].vertices());
            selected.push(Selection {
                t,
                set: path_sets[t].clone(),
            });
        }
        t += 1;
    }
    GreedyOutcome {
        success: selected.len() == params.k,
        selected,
    }
}

/// Per-condition results for a candidate `S_1..S_K`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForbiddenVerdict {
    /// Condition (1): `None` if `S_k` is independent in `A^{(t_k)}`, else an
    /// offending edge.
    pub independence: Vec<Option<(u32, u32)>>,
    /// Condition (2): both sides of `S_k` have at least `(1+ε)φ` vertices.
    pub density: Vec<bool>,
    /// Condition (3) for `k = 2..K`: new mass in `[(ε/4)φ, (ε/2)φ]`.
    pub increments: Vec<bool>,
    /// Whether exactly `K` sets were supplied.
    pub complete: bool,
}

impl ForbiddenVerdict {
    pub fn condition1(&self) -> bool {
        self.independence.iter().all(Option::is_none)
    }

    pub fn condition2(&self) -> bool {
        self.density.iter().all(|&b| b)
    }

    pub fn condition3(&self) -> bool {
        self.increments.iter().all(|&b| b)
    }

    /// Bit 0: condition (1), bit 1: (2), bit 2: (3).
    pub fn bitmask(&self) -> u8 {
        self.condition1() as u8 | (self.condition2() as u8) << 1 | (self.condition3() as u8) << 2
    }

    pub fn present(&self) -> bool {
        self.complete && self.bitmask() == 0b111
    }
}

pub fn check_forbidden_structure(
    sets: &[Selection],
    path: &InterpolationPath,
    params: &ForbiddenStructureParams,
) -> Result<ForbiddenVerdict> {
    if let Some(s) = sets.iter().find(|s| s.t > path.len()) {
        return Err(invalid("t_k", format!("{} exceeds path length {}", s.t, path.len())));
    }
    let independence = sets
        .iter()
        .map(|s| Ok(s.set.first_violation(&path.materialize(s.t)?)))
        .collect::<Result<Vec<_>>>()?;
    let density = sets
        .iter()
        .map(|s| s.set.count_l() as f64 >= params.density() && s.set.count_r() as f64 >= params.density())
        .collect();
    let mut union: HashSet<VertexId> = HashSet::new();
    let mut increments = Vec::new();
    for (k, s) in sets.iter().enumerate() {
        if k > 0 {
            let fresh = s.set.vertices().filter(|v| !union.contains(v)).count() as f64;
            increments.push(fresh >= params.step_lower() && fresh <= params.step_upper());
        }
        union.extend(s.set.vertices());
    }
    Ok(ForbiddenVerdict {
        independence,
        density,
        increments,
        complete: sets.len() == params.k,
    })
}

/// A profile point `(a, b)` with `α_L + α_R < α_L α_R`, where
/// `a = α_L φ`, `b = α_R φ` and `φ = (log d / d) n`.
pub fn profile_violation(profile: &crate::exact::ParetoProfile, n: usize, d: f64) -> Option<(usize, usize)> {
    let phi = d.ln() / d * n as f64;
    profile
        .entries
        .iter()
        .map(|e| (e.a, e.b))
        .find(|&(a, b)| {
            let (x, y) = (a as f64 / phi, b as f64 / phi);
            x + y < x * y
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalanceProbeReport {
    pub trials: usize,
    pub violations: usize,
    pub rate: f64,
    /// 99% Wilson interval.
    pub interval: (f64, f64),
}

/// Fraction of sampled graphs with an independent set violating
/// `α_L + α_R ≥ α_L α_R`. Reports only; the inequality is asymptotic in `d`.
pub fn balance_inequality_probe(n: usize, d: f64, trials: usize, seed: RandomSeed) -> Result<BalanceProbeReport> {
    if !(d.is_finite() && d > 1.0) {
        return Err(invalid("d", format!("must exceed 1, got {d}")));
    }
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    let solver = ExactSolver::default();
    let flags: Vec<bool> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let g = sample_bipartite_graph(n, d, seed.offset(t))?;
            Ok(profile_violation(&solver.pareto_profile(&g)?, n, d).is_some())
        })
        .collect::<Result<_>>()?;
    let violations = flags.iter().filter(|&&b| b).count();
    Ok(BalanceProbeReport {
        trials,
        violations,
        rate: violations as f64 / trials as f64,
        interval: wilson_interval(violations, trials, Z_99),
    })
}
