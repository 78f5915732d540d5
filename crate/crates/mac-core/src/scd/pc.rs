//! PC with the stable skeleton variant, v-structure orientation that keeps
//! earlier colliders on conflict, and Meek rules run to a fixpoint.
//! Hard edge constraints are honored throughout: a pair forbidden in both
//! directions never enters the skeleton, required edges are never removed
//! and end up oriented as given, and no orientation step may direct an edge
//! against a forbidden direction.

use super::{fisher_z, AlgorithmConfig, ScdError};
use crate::datasets::TabularData;
use crate::graph::{EdgeConstraints, PairState, PatternGraph};
use std::collections::BTreeMap;

struct Skeleton {
    n: usize,
    adjacent: Vec<Vec<bool>>,
    sepsets: BTreeMap<(usize, usize), Vec<usize>>,
}

/// Lexicographic k-subsets of `items`.
fn subsets_of_size(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k > items.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // Advance the combination.
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] != pos + items.len() - k {
                idx[pos] += 1;
                for later in (pos + 1)..k {
                    idx[later] = idx[later - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return out;
            }
        }
        if k == 0 {
            return out;
        }
    }
}

fn pair_locked(constraints: &EdgeConstraints, i: usize, j: usize) -> bool {
    constraints.is_required(i, j) || constraints.is_required(j, i)
}

fn discover_skeleton(
    data: &TabularData,
    config: &AlgorithmConfig,
    constraints: &EdgeConstraints,
) -> Result<Skeleton, ScdError> {
    let n = data.n_cols();
    let mut adjacent = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let both_forbidden = constraints.is_forbidden(i, j) && constraints.is_forbidden(j, i);
            adjacent[i][j] = !both_forbidden || pair_locked(constraints, i, j);
        }
    }
    let mut skel = Skeleton {
        n,
        adjacent,
        sepsets: BTreeMap::new(),
    };

    let max_level = config.max_cond_size.unwrap_or(n.saturating_sub(2));
    for level in 0..=max_level {
        // Stable variant: conditioning candidates come from the adjacency
        // as it stood when the level began.
        let snapshot = skel.adjacent.clone();
        let snapshot_neighbors = |v: usize, except: usize| -> Vec<usize> {
            (0..n)
                .filter(|&u| u != v && u != except && snapshot[v][u])
                .collect()
        };
        let mut any_candidate = false;
        for i in 0..n {
            for j in (i + 1)..n {
                if !skel.adjacent[i][j] || pair_locked(constraints, i, j) {
                    continue;
                }
                let mut separated = None;
                'search: for (a, b) in [(i, j), (j, i)] {
                    let pool = snapshot_neighbors(a, b);
                    if pool.len() >= level {
                        any_candidate = true;
                    }
                    for cond in subsets_of_size(&pool, level) {
                        let res = fisher_z(data, a, b, &cond, config.alpha)?;
                        if res.independent {
                            separated = Some(cond);
                            break 'search;
                        }
                    }
                }
                if let Some(cond) = separated {
                    skel.adjacent[i][j] = false;
                    skel.adjacent[j][i] = false;
                    skel.sepsets.insert((i, j), cond);
                }
            }
        }
        if !any_candidate {
            break;
        }
    }
    Ok(skel)
}

/// Can `cause -> effect` be drawn without violating `constraints`?
fn orientation_allowed(constraints: &EdgeConstraints, cause: usize, effect: usize) -> bool {
    !constraints.is_forbidden(cause, effect) && !constraints.is_required(effect, cause)
}

fn orient_v_structures(skel: &Skeleton, pattern: &mut PatternGraph, constraints: &EdgeConstraints) {
    let n = skel.n;
    // Unshielded triples (i, k, j) with i < j, scanned in index order so
    // ties always resolve toward the lowest variable indices.
    for i in 0..n {
        for j in (i + 1)..n {
            if skel.adjacent[i][j] {
                continue;
            }
            let Some(aside) = skel.sepsets.get(&(i, j)) else {
                continue;
            };
            for k in 0..n {
                if k == i || k == j || !skel.adjacent[i][k] || !skel.adjacent[j][k] {
                    continue;
                }
                if aside.contains(&k) {
                    continue;
                }
                // Collider i -> k <- j; keep pre-existing arrowheads on
                // conflict (collider-priority resolution), never override a
                // directed mark and never violate constraints.
                for (a, b) in [(i, k), (j, k)] {
                    if pattern.pair(a, b) == PairState::Undirected
                        && orientation_allowed(constraints, a, b)
                    {
                        pattern.orient(a, b);
                    }
                }
            }
        }
    }
}

/// Meek's orientation rules applied until no rule fires. Each rule only
/// upgrades an undirected pair to a directed one, and only when constraints
/// allow the direction.
fn apply_meek_rules(pattern: &mut PatternGraph, constraints: &EdgeConstraints) {
    let n = pattern.n();
    let directed = |p: &PatternGraph, a: usize, b: usize| p.pair(a, b) == PairState::Forward;
    let undirected = |p: &PatternGraph, a: usize, b: usize| p.pair(a, b) == PairState::Undirected;

    loop {
        let mut changed = false;
        let orient = |p: &mut PatternGraph, a: usize, b: usize| -> bool {
            if orientation_allowed(constraints, a, b) {
                p.orient(a, b);
                true
            } else {
                false
            }
        };
        for a in 0..n {
            for b in 0..n {
                if a == b || !undirected(pattern, a, b) {
                    continue;
                }
                // R1: c -> a, a - b, c and b non-adjacent  =>  a -> b.
                let r1 = (0..n).any(|c| {
                    c != a && c != b && directed(pattern, c, a) && !pattern.is_adjacent(c, b)
                });
                if r1 && orient(pattern, a, b) {
                    changed = true;
                    continue;
                }
                // R2: a -> c -> b with a - b  =>  a -> b.
                let r2 = (0..n).any(|c| {
                    c != a && c != b && directed(pattern, a, c) && directed(pattern, c, b)
                });
                if r2 && orient(pattern, a, b) {
                    changed = true;
                    continue;
                }
                // R3: a - c -> b and a - d -> b with c, d non-adjacent  =>  a -> b.
                let mut r3 = false;
                for c in 0..n {
                    if c == a || c == b || !undirected(pattern, a, c) || !directed(pattern, c, b) {
                        continue;
                    }
                    for d in (c + 1)..n {
                        if d == a
                            || d == b
                            || !undirected(pattern, a, d)
                            || !directed(pattern, d, b)
                            || pattern.is_adjacent(c, d)
                        {
                            continue;
                        }
                        r3 = true;
                        break;
                    }
                    if r3 {
                        break;
                    }
                }
                if r3 && orient(pattern, a, b) {
                    changed = true;
                    continue;
                }
                // R4: a - c, c -> d, d -> b, c and b non-adjacent, a and d
                // adjacent  =>  a -> b.
                let mut r4 = false;
                for c in 0..n {
                    if c == a || c == b || !undirected(pattern, a, c) || pattern.is_adjacent(c, b) {
                        continue;
                    }
                    for d in 0..n {
                        if d == a || d == b || d == c {
                            continue;
                        }
                        if directed(pattern, c, d)
                            && directed(pattern, d, b)
                            && pattern.is_adjacent(a, d)
                        {
                            r4 = true;
                            break;
                        }
                    }
                    if r4 {
                        break;
                    }
                }
                if r4 && orient(pattern, a, b) {
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Runs PC and returns a partially directed pattern.
///
/// Stages: stable skeleton discovery by level-wise Fisher-Z tests, required
/// edges pinned and oriented, v-structures on unshielded triples (collider
/// in iff the middle node is outside the recorded separating set), then
/// Meek rules R1-R4 to fixpoint. Undirected leftovers stay undirected.
pub fn pc(
    data: &TabularData,
    config: &AlgorithmConfig,
    constraints: &EdgeConstraints,
) -> Result<PatternGraph, ScdError> {
    config.validate()?;
    let n = data.n_cols();
    for &(i, j) in constraints
        .required
        .iter()
        .chain(constraints.forbidden.iter())
    {
        if i >= n || j >= n || i == j {
            return Err(ScdError::InconsistentConstraints(format!(
                "constraint pair ({i},{j}) out of range"
            )));
        }
    }
    for &(i, j) in &constraints.required {
        if constraints.is_forbidden(i, j) {
            return Err(ScdError::InconsistentConstraints(format!(
                "({i},{j}) both required and forbidden"
            )));
        }
        if constraints.is_required(j, i) {
            return Err(ScdError::InconsistentConstraints(format!(
                "both ({i},{j}) and ({j},{i}) required"
            )));
        }
    }

    let skel = discover_skeleton(data, config, constraints)?;
    let mut pattern = PatternGraph::empty(data.columns().to_vec());
    for i in 0..n {
        for j in (i + 1)..n {
            if skel.adjacent[i][j] {
                pattern.set_pair(i, j, PairState::Undirected);
            }
        }
    }
    for &(i, j) in &constraints.required {
        pattern.orient(i, j);
    }
    orient_v_structures(&skel, &mut pattern, constraints);
    apply_meek_rules(&mut pattern, constraints);
    Ok(pattern)
}
