use serde::{Deserialize, Serialize};

use crate::graph::{BipartiteGraph, Side, VertexId};

/// A set of vertices, stored per side as sorted index lists.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSubset {
    in_l: Vec<u32>,
    in_r: Vec<u32>,
}

impl VertexSubset {
    pub fn new(mut in_l: Vec<u32>, mut in_r: Vec<u32>) -> Self {
        in_l.sort_unstable();
        in_l.dedup();
        in_r.sort_unstable();
        in_r.dedup();
        Self { in_l, in_r }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Every vertex of a graph with `n` vertices per side.
    pub fn full(n: usize) -> Self {
        Self {
            in_l: (0..n as u32).collect(),
            in_r: (0..n as u32).collect(),
        }
    }

    pub fn from_vertices(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for v in vertices {
            match v.side {
                Side::L => l.push(v.index),
                Side::R => r.push(v.index),
            }
        }
        Self::new(l, r)
    }

    /// Bit `i` of each mask selects vertex `i` on that side.
    pub fn from_masks(l_mask: u64, r_mask: u64) -> Self {
        let bits = |mut m: u64| {
            let mut out = Vec::with_capacity(m.count_ones() as usize);
            while m != 0 {
                out.push(m.trailing_zeros());
                m &= m - 1;
            }
            out
        };
        Self {
            in_l: bits(l_mask),
            in_r: bits(r_mask),
        }
    }

    /// `None` if some index is ≥ 64.
    pub fn masks(&self) -> Option<(u64, u64)> {
        let mask = |v: &[u32]| {
            v.iter()
                .try_fold(0u64, |m, &i| if i < 64 { Some(m | 1 << i) } else { None })
        };
        Some((mask(&self.in_l)?, mask(&self.in_r)?))
    }

    pub fn in_l(&self) -> &[u32] {
        &self.in_l
    }

    pub fn in_r(&self) -> &[u32] {
        &self.in_r
    }

    pub fn side(&self, side: Side) -> &[u32] {
        match side {
            Side::L => &self.in_l,
            Side::R => &self.in_r,
        }
    }

    pub fn count_l(&self) -> usize {
        self.in_l.len()
    }

    pub fn count_r(&self) -> usize {
        self.in_r.len()
    }

    pub fn len(&self) -> usize {
        self.in_l.len() + self.in_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.side(v.side).binary_search(&v.index).is_ok()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.in_l
            .iter()
            .map(|&i| VertexId::left(i))
            .chain(self.in_r.iter().map(|&i| VertexId::right(i)))
    }

    /// Keeps the first `keep_l` and `keep_r` members (in index order).
    pub fn truncated(&self, keep_l: usize, keep_r: usize) -> Self {
        Self {
            in_l: self.in_l[..keep_l.min(self.in_l.len())].to_vec(),
            in_r: self.in_r[..keep_r.min(self.in_r.len())].to_vec(),
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        fn meet(a: &[u32], b: &[u32]) -> Vec<u32> {
            a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
        }
        Self {
            in_l: meet(&self.in_l, &other.in_l),
            in_r: meet(&self.in_r, &other.in_r),
        }
    }

    /// Some edge with both endpoints in the subset, if any.
    pub fn first_violation(&self, graph: &BipartiteGraph) -> Option<(u32, u32)> {
        let (small, large, small_side) = if self.in_l.len() <= self.in_r.len() {
            (&self.in_l, &self.in_r, Side::L)
        } else {
            (&self.in_r, &self.in_l, Side::R)
        };
        for &u in small {
            let v = VertexId { side: small_side, index: u };
            if let Some(&w) = graph.neighbors(v).iter().find(|w| large.binary_search(w).is_ok()) {
                return Some(match small_side {
                    Side::L => (u, w),
                    Side::R => (w, u),
                });
            }
        }
        None
    }

    pub fn is_independent(&self, graph: &BipartiteGraph) -> bool {
        self.first_violation(graph).is_none()
    }
}
