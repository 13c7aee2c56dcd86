//! Exact solvers for small instances.
//!
//! Once the `L`-part `S` of an independent set is fixed, the best `R`-part is
//! every `R`-vertex with no neighbour in `S` (followed by a γ-trim), so all
//! searches run over the `2^n` subsets of `L` rather than the `4^n` subsets of
//! `L ∪ R`. Subsets are `u64` bitmasks.
//!
//! The depth-first searches branch on the highest remaining `L`-index first and
//! try "exclude" before "include", which visits leaves in increasing bitmask
//! order. Accepting only strict improvements therefore returns the
//! numerically smallest optimal `L`-mask, which is the tie-break rule for
//! witnesses.

use serde::{Deserialize, Serialize};

use crate::balance::{check_gamma, is_balanced_counts, trim_counts};
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::subset::VertexSubset;

pub const DEFAULT_MAX_N: usize = 32;

/// Checks `| |in_l| − γ(|in_l| + |in_r|) | < 1`.
pub fn is_gamma_balanced(subset: &VertexSubset, gamma: f64) -> Result<bool> {
    check_gamma(gamma)?;
    Ok(is_balanced_counts(subset.count_l(), subset.count_r(), gamma))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedSolution {
    pub size: usize,
    pub witness: VertexSubset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    /// `|I ∩ L|`.
    pub a: usize,
    /// Largest `|I ∩ R|` over independent sets with `|I ∩ L| = a`.
    pub b: usize,
    pub witness: VertexSubset,
}

/// For each `a = 0..=n`, the largest `b` achievable by an independent set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParetoProfile {
    pub entries: Vec<ProfileEntry>,
}

impl ParetoProfile {
    /// Best trimmed size over the profile. Equals
    /// [`ExactSolver::max_gamma_balanced_is`] because every independent set is
    /// dominated by some profile point and trimming is monotone.
    pub fn best_trimmed(&self, gamma: f64) -> usize {
        self.entries
            .iter()
            .map(|e| {
                let (x, y) = trim_counts(e.a, e.b, gamma);
                x + y
            })
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactSolver {
    pub max_n: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        Self { max_n: DEFAULT_MAX_N }
    }
}

struct Instance {
    n: usize,
    masks: Vec<u64>,
    full: u64,
}

impl Instance {
    fn free(&self, blocked: u64) -> u64 {
        self.full & !blocked
    }
}

impl ExactSolver {
    pub fn with_limit(max_n: usize) -> Self {
        Self { max_n: max_n.min(64) }
    }

    fn instance(&self, graph: &BipartiteGraph) -> Result<Instance> {
        let n = graph.n();
        if n > self.max_n || n > 64 {
            return Err(Error::Capacity {
                n,
                limit: self.max_n.min(64),
            });
        }
        let masks = graph.left_masks().expect("n <= 64");
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(Instance { n, masks, full })
    }

    /// Largest γ-balanced independent set, with the lexicographically smallest
    /// witness by `(L-mask, R-mask)`.
    pub fn max_gamma_balanced_is(&self, graph: &BipartiteGraph, gamma: f64) -> Result<BalancedSolution> {
        check_gamma(gamma)?;
        let inst = self.instance(graph)?;

        struct Search<'a> {
            inst: &'a Instance,
            gamma: f64,
            best: Option<(usize, u64)>,
        }
        impl Search<'_> {
            fn value(&self, a: usize, b: usize) -> usize {
                let (x, y) = trim_counts(a, b, self.gamma);
                x + y
            }
            fn dfs(&mut self, remaining: usize, chosen: u64, count: usize, blocked: u64) {
                let free = self.inst.free(blocked).count_ones() as usize;
                if remaining == 0 {
                    let v = self.value(count, free);
                    if self.best.map_or(true, |(b, _)| v > b) {
                        self.best = Some((v, chosen));
                    }
                    return;
                }
                if let Some((best, _)) = self.best {
                    if self.value(count + remaining, free) <= best {
                        return;
                    }
                }
                let v = remaining - 1;
                self.dfs(v, chosen, count, blocked);
                self.dfs(v, chosen | 1 << v, count + 1, blocked | self.inst.masks[v]);
            }
        }

        let mut search = Search {
            inst: &inst,
            gamma,
            best: None,
        };
        search.dfs(inst.n, 0, 0, 0);
        let (size, l_mask) = search.best.expect("the empty set is always a leaf");
        let a = l_mask.count_ones() as usize;
        let b = size - a;
        let blocked = inst.masks.iter().enumerate().filter(|(i, _)| l_mask >> i & 1 == 1).fold(0, |m, (_, &x)| m | x);
        let r_mask = lowest_bits(inst.free(blocked), b);
        debug_assert!(is_balanced_counts(a, b, gamma));
        Ok(BalancedSolution {
            size,
            witness: VertexSubset::from_masks(l_mask, r_mask),
        })
    }

    pub fn pareto_profile(&self, graph: &BipartiteGraph) -> Result<ParetoProfile> {
        let inst = self.instance(graph)?;

        struct Search<'a> {
            inst: &'a Instance,
            best: Vec<Option<(usize, u64, u64)>>,
        }
        impl Search<'_> {
            fn dfs(&mut self, remaining: usize, chosen: u64, count: usize, blocked: u64) {
                let free_mask = self.inst.free(blocked);
                let free = free_mask.count_ones() as usize;
                if remaining == 0 {
                    if self.best[count].map_or(true, |(b, _, _)| free > b) {
                        self.best[count] = Some((free, chosen, free_mask));
                    }
                    return;
                }
                let dominated = self.best[count..=count + remaining]
                    .iter()
                    .all(|e| e.is_some_and(|(b, _, _)| b >= free));
                if dominated {
                    return;
                }
                let v = remaining - 1;
                self.dfs(v, chosen, count, blocked);
                self.dfs(v, chosen | 1 << v, count + 1, blocked | self.inst.masks[v]);
            }
        }

        let mut search = Search {
            inst: &inst,
            best: vec![None; inst.n + 1],
        };
        search.dfs(inst.n, 0, 0, 0);
        let entries = search
            .best
            .into_iter()
            .enumerate()
            .map(|(a, e)| {
                let (b, l, r) = e.expect("every L-subset size is achievable");
                ProfileEntry {
                    a,
                    b,
                    witness: VertexSubset::from_masks(l, r),
                }
            })
            .collect();
        Ok(ParetoProfile { entries })
    }

    /// `max` over independent `I` of `min(|I ∩ s ∩ L|, |I ∩ s ∩ R|)`.
    pub fn max_joint_intersection(&self, graph: &BipartiteGraph, s: &VertexSubset) -> Result<usize> {
        let inst = self.instance(graph)?;
        let (s_l, s_r) = s
            .masks()
            .filter(|(l, r)| (l | r) & !inst.full == 0)
            .ok_or_else(|| crate::error::invalid("s", "contains vertices outside the graph"))?;
        let candidates: Vec<usize> = (0..inst.n).filter(|&i| s_l >> i & 1 == 1).collect();

        fn dfs(inst: &Instance, cands: &[usize], s_r: u64, count: usize, blocked: u64, best: &mut usize) {
            let free = (s_r & !blocked).count_ones() as usize;
            let here = count.min(free);
            if here > *best {
                *best = here;
            }
            if (count + cands.len()).min(free) <= *best {
                return;
            }
            let (&v, rest) = cands.split_last().expect("non-empty, bound would have pruned");
            dfs(inst, rest, s_r, count + 1, blocked | inst.masks[v], best);
            dfs(inst, rest, s_r, count, blocked, best);
        }

        let mut best = 0;
        dfs(&inst, &candidates, s_r, 0, 0, &mut best);
        Ok(best)
    }
}

fn lowest_bits(mut mask: u64, k: usize) -> u64 {
    let mut out = 0;
    for _ in 0..k {
        let bit = mask & mask.wrapping_neg();
        out |= bit;
        mask &= !bit;
    }
    out
}

pub fn max_gamma_balanced_is(graph: &BipartiteGraph, gamma: f64) -> Result<BalancedSolution> {
    ExactSolver::default().max_gamma_balanced_is(graph, gamma)
}

pub fn pareto_profile(graph: &BipartiteGraph) -> Result<ParetoProfile> {
    ExactSolver::default().pareto_profile(graph)
}

pub fn max_joint_intersection(graph: &BipartiteGraph, s: &VertexSubset) -> Result<usize> {
    ExactSolver::default().max_joint_intersection(graph, s)
}
