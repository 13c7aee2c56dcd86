//! `s`-local algorithms on bipartite graphs.
//!
//! Every vertex receives an iid `Unif[0,1]` label. A [`LocalFunctionPair`]
//! decides membership of each vertex from its radius-`s` ball alone: the engine
//! cuts the ball out of the graph, attaches the labels, and hands the decision
//! function a [`Ball`] that carries no global vertex ids. The same `Ball` type is
//! produced from Poisson Galton–Watson trees, which is how expectations on the
//! local weak limit are estimated.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::balance::{check_gamma, trim_counts};
use crate::error::{invalid, Error, Result};
use crate::graph::{neighborhood, sample_bipartite_graph, BipartiteGraph, Side, VertexId};
use crate::rng::{Domain, RandomSeed};
use crate::stats::MeanEstimate;
use crate::subset::VertexSubset;

/// One iid uniform label per vertex, keyed by `(seed, vertex)`.
///
/// Keying by vertex means two algorithms run on the same graph with the same
/// seed see the same labels.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexLabels {
    n: usize,
    values: Vec<f64>,
}

impl VertexLabels {
    pub fn generate(n: usize, seed: RandomSeed) -> Self {
        let values = (0..2 * n)
            .into_par_iter()
            .map(|i| {
                let v = VertexId::from_flat(i, n);
                seed.uniform(Domain::Label, 2 * v.index as u64 + (v.side == Side::R) as u64)
            })
            .collect();
        Self { n, values }
    }

    pub fn get(&self, v: VertexId) -> f64 {
        self.values[v.flat(self.n)]
    }

    /// Flat layout: `L` then `R`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// A labelled rooted ball. Vertex 0 is the root.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub sides: Vec<Side>,
    pub depth: Vec<usize>,
    pub labels: Vec<f64>,
    pub adjacency: Vec<Vec<usize>>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn root_side(&self) -> Side {
        self.sides[0]
    }

    pub fn root_label(&self) -> f64 {
        self.labels[0]
    }

    /// Labels of the root's neighbours.
    pub fn root_neighbor_labels(&self) -> impl Iterator<Item = f64> + '_ {
        self.adjacency[0].iter().map(|&j| self.labels[j])
    }

    fn from_graph(graph: &BipartiteGraph, labels: &VertexLabels, v: VertexId, radius: usize) -> Self {
        let nb = neighborhood(graph, v, radius).expect("engine only asks for valid vertices");
        Self {
            sides: nb.vertices.iter().map(|u| u.side).collect(),
            labels: nb.vertices.iter().map(|&u| labels.get(u)).collect(),
            depth: nb.depth,
            adjacency: nb.adjacency,
        }
    }
}

pub type Decision = Arc<dyn Fn(&Ball) -> bool + Send + Sync>;

/// A pair `(decide_l, decide_r)` of radius-`s` decision functions.
///
/// The pair is meant to be compatible: applied to `L` and `R` respectively it
/// must always yield an independent set. That is a semantic property, so
/// [`apply_local_pair`] verifies the output instead of trusting it.
#[derive(Clone)]
pub struct LocalFunctionPair {
    pub radius: usize,
    pub decide_l: Decision,
    pub decide_r: Decision,
    pub name: String,
}

impl fmt::Debug for LocalFunctionPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalFunctionPair")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .finish_non_exhaustive()
    }
}

impl LocalFunctionPair {
    pub fn new(
        name: impl Into<String>,
        radius: usize,
        decide_l: impl Fn(&Ball) -> bool + Send + Sync + 'static,
        decide_r: impl Fn(&Ball) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            radius,
            decide_l: Arc::new(decide_l),
            decide_r: Arc::new(decide_r),
            name: name.into(),
        }
    }

    pub fn constant(l: bool, r: bool) -> Self {
        Self::new(format!("constant({}, {})", l as u8, r as u8), 0, move |_| l, move |_| r)
    }

    /// The 1-local pair: an `L`-vertex joins iff its label is `≤ p`; an
    /// `R`-vertex joins iff every neighbour has label `> p`.
    pub fn one_local(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(invalid("p", format!("must lie in [0, 1], got {p}")));
        }
        Ok(Self::new(
            format!("one-local(p={p})"),
            1,
            move |ball| ball.root_label() <= p,
            move |ball| ball.root_neighbor_labels().all(|x| x > p),
        ))
    }

    pub fn decide(&self, ball: &Ball) -> bool {
        match ball.root_side() {
            Side::L => (self.decide_l)(ball),
            Side::R => (self.decide_r)(ball),
        }
    }
}

/// Alias for [`LocalFunctionPair::one_local`].
pub fn one_local_pair(p: f64) -> Result<LocalFunctionPair> {
    LocalFunctionPair::one_local(p)
}

/// Decisions for every vertex with labels drawn from `seed`.
pub fn apply_local_pair(graph: &BipartiteGraph, pair: &LocalFunctionPair, seed: RandomSeed) -> Result<VertexSubset> {
    let labels = VertexLabels::generate(graph.n(), seed);
    apply_with_labels(graph, pair, &labels)
}

pub fn apply_with_labels(graph: &BipartiteGraph, pair: &LocalFunctionPair, labels: &VertexLabels) -> Result<VertexSubset> {
    let n = graph.n() as u32;
    let select = |side: Side| -> Vec<u32> {
        (0..n)
            .into_par_iter()
            .filter(|&i| {
                let ball = Ball::from_graph(graph, labels, VertexId { side, index: i }, pair.radius);
                pair.decide(&ball)
            })
            .collect()
    };
    let subset = VertexSubset::new(select(Side::L), select(Side::R));
    match subset.first_violation(graph) {
        Some((l, r)) => Err(Error::Compatibility { l, r }),
        None => Ok(subset),
    }
}

/// Largest γ-balanced subset obtained by dropping vertices from the surplus
/// side. Kept vertices are the lowest-indexed ones on each side.
pub fn gamma_trim(subset: &VertexSubset, gamma: f64) -> Result<VertexSubset> {
    check_gamma(gamma)?;
    let (a, b) = trim_counts(subset.count_l(), subset.count_r(), gamma);
    Ok(subset.truncated(a, b))
}

/// `½ · min(e_l / γ, e_r / (1 − γ))`.
pub fn alpha_value(e_l: f64, e_r: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    for (name, e) in [("e_l", e_l), ("e_r", e_r)] {
        if !(0.0..=1.0).contains(&e) {
            return Err(invalid(name, format!("must lie in [0, 1], got {e}")));
        }
    }
    Ok(0.5 * (e_l / gamma).min(e_r / (1.0 - gamma)))
}

/// A Poisson(`d`) Galton–Watson tree truncated at `depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaltonWatsonTree {
    pub offspring_mean: f64,
    pub depth: usize,
    /// `parent[0]` is `None`; nodes are in BFS order.
    pub parent: Vec<Option<usize>>,
    pub node_depth: Vec<usize>,
}

impl GaltonWatsonTree {
    pub fn sample<R: Rng + ?Sized>(d: f64, depth: usize, rng: &mut R) -> Result<Self> {
        let poisson = Poisson::new(d).map_err(|e| invalid("d", e.to_string()))?;
        let mut parent = vec![None];
        let mut node_depth = vec![0];
        let mut i = 0;
        while i < parent.len() {
            if node_depth[i] < depth {
                let kids = poisson.sample(rng) as usize;
                for _ in 0..kids {
                    parent.push(Some(i));
                    node_depth.push(node_depth[i] + 1);
                }
            }
            i += 1;
        }
        Ok(Self {
            offspring_mean: d,
            depth,
            parent,
            node_depth,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn children_of_root(&self) -> usize {
        self.parent.iter().filter(|p| **p == Some(0)).count()
    }

    /// The tree as a ball rooted on `root_side`, with fresh iid labels.
    pub fn to_ball<R: Rng + ?Sized>(&self, root_side: Side, rng: &mut R) -> Ball {
        let mut adjacency = vec![Vec::new(); self.len()];
        for (child, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                adjacency[p].push(child);
                adjacency[child].push(p);
            }
        }
        Ball {
            sides: self
                .node_depth
                .iter()
                .map(|&k| if k % 2 == 0 { root_side } else { root_side.other() })
                .collect(),
            depth: self.node_depth.clone(),
            labels: (0..self.len()).map(|_| rng.random::<f64>()).collect(),
            adjacency,
        }
    }
}

/// Monte Carlo estimate of `E[g_side(T, x)]` over Poisson(`d`) trees.
pub fn estimate_gw_expectation(
    pair: &LocalFunctionPair,
    side: Side,
    d: f64,
    trials: usize,
    seed: RandomSeed,
) -> Result<MeanEstimate> {
    if trials == 0 {
        return Err(invalid("trials", "must be at least 1"));
    }
    Poisson::new(d).map_err(|e| invalid("d", e.to_string()))?;
    let outcomes: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed.rng(Domain::GaltonWatson, t);
            let tree = GaltonWatsonTree::sample(d, pair.radius, &mut rng).expect("d validated");
            let ball = tree.to_ball(side, &mut rng);
            pair.decide(&ball) as u8 as f64
        })
        .collect();
    Ok(MeanEstimate::from_samples(&outcomes))
}

/// Side counts and trimmed size of one run on a fresh `G^bip_{n,d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTrial {
    pub count_l: usize,
    pub count_r: usize,
    pub trimmed_size: usize,
}

/// Samples a graph and labels from `seed` and runs `pair` on it.
pub fn run_local_trial(n: usize, d: f64, pair: &LocalFunctionPair, gamma: f64, seed: RandomSeed) -> Result<LocalTrial> {
    check_gamma(gamma)?;
    let graph = sample_bipartite_graph(n, d, seed)?;
    let set = apply_local_pair(&graph, pair, seed)?;
    let (a, b) = trim_counts(set.count_l(), set.count_r(), gamma);
    Ok(LocalTrial {
        count_l: set.count_l(),
        count_r: set.count_r(),
        trimmed_size: a + b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub mean_l: f64,
    pub mean_r: f64,
    /// Sample variance of `|X ∩ L|`, divided by `n`.
    pub var_l_over_n: f64,
    pub var_r_over_n: f64,
}

/// Sample variances of the side counts across trials, normalised by `n`.
pub fn concentration_probe(
    pair: &LocalFunctionPair,
    n_values: &[usize],
    d: f64,
    trials_per_n: usize,
    seed: RandomSeed,
) -> Result<Vec<ConcentrationRow>> {
    if trials_per_n < 30 {
        return Err(invalid("trials_per_n", format!("must be at least 30, got {trials_per_n}")));
    }
    n_values
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let trials: Vec<LocalTrial> = (0..trials_per_n)
                .map(|t| run_local_trial(n, d, pair, 0.5, seed.offset((k * trials_per_n + t) as u64)))
                .collect::<Result<_>>()?;
            let l: Vec<f64> = trials.iter().map(|t| t.count_l as f64).collect();
            let r: Vec<f64> = trials.iter().map(|t| t.count_r as f64).collect();
            let (el, er) = (MeanEstimate::from_samples(&l), MeanEstimate::from_samples(&r));
            Ok(ConcentrationRow {
                n,
                mean_l: el.mean,
                mean_r: er.mean,
                var_l_over_n: el.variance / n as f64,
                var_r_over_n: er.variance / n as f64,
            })
        })
        .collect()
}
