//! Exact BIC-minimizing DAG search.
//!
//! Two strategies over the same per-node best-parent-set tables: dynamic
//! programming over variable subsets (best-sink recursion) and A* over the
//! order graph with the relaxed per-node optimum as an admissible,
//! consistent heuristic. Both provably return a global optimum, so they are
//! cross-checked in tests.

use super::bic::ScatterScorer;
use super::{AlgorithmConfig, ScdError, SearchMethod};
use crate::datasets::TabularData;
use crate::graph::BinaryAdjacency;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Per-node tables: for every context set `S` (bitmask, node's own bit
/// clear), the best score achievable with parents ⊆ S, and the parent set
/// that achieves it.
struct BestParents {
    score: Vec<Vec<f64>>,
    choice: Vec<Vec<u32>>,
}

fn build_best_parents(
    scorer: &ScatterScorer,
    n: usize,
    candidates: &[u32],
    max_parents: usize,
) -> Result<BestParents, ScdError> {
    let full = 1u32 << n;
    let mut score = vec![vec![f64::INFINITY; full as usize]; n];
    let mut choice = vec![vec![0u32; full as usize]; n];
    for v in 0..n {
        for s in 0..full {
            if s & (1 << v) != 0 {
                continue;
            }
            let mut best = f64::INFINITY;
            let mut best_mask = 0u32;
            if s & !candidates[v] == 0 && (s.count_ones() as usize) <= max_parents {
                let parents: Vec<usize> = (0..n).filter(|&u| s & (1 << u) != 0).collect();
                best = scorer.local_score(v, &parents)?;
                best_mask = s;
            }
            for u in 0..n {
                if s & (1 << u) == 0 {
                    continue;
                }
                let sub = s & !(1 << u);
                if score[v][sub as usize] < best {
                    best = score[v][sub as usize];
                    best_mask = choice[v][sub as usize];
                }
            }
            score[v][s as usize] = best;
            choice[v][s as usize] = best_mask;
        }
    }
    Ok(BestParents { score, choice })
}

fn adjacency_from_parent_masks(labels: Vec<String>, parents: &[u32]) -> BinaryAdjacency {
    let n = parents.len();
    let mut adj = BinaryAdjacency::zeros(labels);
    for (v, &mask) in parents.iter().enumerate() {
        for u in 0..n {
            if mask & (1 << u) != 0 {
                adj.set(u, v, true);
            }
        }
    }
    adj
}

/// Dynamic programming over subsets: `m[s]` is the optimal total score of a
/// network on the variables in `s` whose parents all lie inside `s`.
fn search_dp(n: usize, bp: &BestParents, labels: Vec<String>) -> BinaryAdjacency {
    let full = (1u32 << n) - 1;
    let mut m = vec![f64::INFINITY; (full + 1) as usize];
    let mut sink = vec![usize::MAX; (full + 1) as usize];
    m[0] = 0.0;
    for s in 1..=full {
        let mut best = f64::INFINITY;
        let mut best_sink = usize::MAX;
        for v in 0..n {
            if s & (1 << v) == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            let total = m[rest as usize] + bp.score[v][rest as usize];
            if total < best {
                best = total;
                best_sink = v;
            }
        }
        m[s as usize] = best;
        sink[s as usize] = best_sink;
    }
    let mut parents = vec![0u32; n];
    let mut s = full;
    while s != 0 {
        let v = sink[s as usize];
        let rest = s & !(1 << v);
        parents[v] = bp.choice[v][rest as usize];
        s = rest;
    }
    adjacency_from_parent_masks(labels, &parents)
}

#[derive(PartialEq)]
struct QueueEntry {
    f: f64,
    mask: u32,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.f.total_cmp(&other.f).then(self.mask.cmp(&other.mask))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A* over the order graph from ∅ to the full variable set. The heuristic
/// relaxes ordering constraints: each missing variable contributes its best
/// score over unrestricted parent sets, which never overestimates and is
/// consistent, so the first arrival at the goal is optimal.
fn search_astar(n: usize, bp: &BestParents, labels: Vec<String>) -> BinaryAdjacency {
    let full = (1u32 << n) - 1;
    let hmin: Vec<f64> = (0..n)
        .map(|v| bp.score[v][(full & !(1 << v)) as usize])
        .collect();
    let h = |mask: u32| -> f64 {
        (0..n)
            .filter(|&v| mask & (1 << v) == 0)
            .map(|v| hmin[v])
            .sum()
    };
    let mut g = vec![f64::INFINITY; (full + 1) as usize];
    let mut came: Vec<(u32, usize)> = vec![(0, usize::MAX); (full + 1) as usize];
    let mut heap = BinaryHeap::new();
    g[0] = 0.0;
    heap.push(Reverse(QueueEntry { f: h(0), mask: 0 }));
    while let Some(Reverse(QueueEntry { f, mask })) = heap.pop() {
        if mask == full {
            break;
        }
        if f > g[mask as usize] + h(mask) + 1e-12 {
            continue; // stale entry
        }
        for v in 0..n {
            if mask & (1 << v) != 0 {
                continue;
            }
            let next = mask | (1 << v);
            let tentative = g[mask as usize] + bp.score[v][mask as usize];
            if tentative < g[next as usize] {
                g[next as usize] = tentative;
                came[next as usize] = (mask, v);
                heap.push(Reverse(QueueEntry {
                    f: tentative + h(next),
                    mask: next,
                }));
            }
        }
    }
    let mut parents = vec![0u32; n];
    let mut s = full;
    while s != 0 {
        let (prev, v) = came[s as usize];
        parents[v] = bp.choice[v][prev as usize];
        s = prev;
    }
    adjacency_from_parent_masks(labels, &parents)
}

/// Finds a DAG minimizing total BIC. When `super_structure` is given (a
/// symmetric adjacency), parents of `v` are restricted to its neighbors;
/// `config.max_parents` further caps parent-set size. Dispatches on
/// `config.search_method`; both methods return an optimal network.
pub fn exact_search(
    data: &TabularData,
    config: &AlgorithmConfig,
    super_structure: Option<&BinaryAdjacency>,
) -> Result<BinaryAdjacency, ScdError> {
    let n = data.n_cols();
    if n > config.max_exact_vars.min(31) {
        return Err(ScdError::TooManyVariables {
            n,
            max: config.max_exact_vars.min(31),
        });
    }
    let candidates: Vec<u32> = match super_structure {
        None => (0..n).map(|v| ((1u32 << n) - 1) & !(1 << v)).collect(),
        Some(s) => {
            if s.labels() != data.columns() {
                return Err(ScdError::InconsistentConstraints(
                    "super-structure labels do not match data columns".into(),
                ));
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    if s.get(i, j) != s.get(j, i) {
                        return Err(ScdError::AsymmetricSuperStructure(i, j));
                    }
                }
            }
            (0..n)
                .map(|v| {
                    let mut mask = 0u32;
                    for u in 0..n {
                        if u != v && s.get(u, v) == 1 {
                            mask |= 1 << u;
                        }
                    }
                    mask
                })
                .collect()
        }
    };
    let max_parents = config.max_parents.unwrap_or(n - 1).min(n - 1);
    let scorer = ScatterScorer::new(data);
    let bp = build_best_parents(&scorer, n, &candidates, max_parents)?;
    let labels = data.columns().to_vec();
    Ok(match config.search_method {
        SearchMethod::Dp => search_dp(n, &bp, labels),
        SearchMethod::Astar => search_astar(n, &bp, labels),
    })
}
