//! Seeded synthetic inputs: linear structural equation models for exercising
//! the statistical algorithms, and well-formed agent responses for building
//! scripted debate fixtures. Everything here is a pure function of its seed,
//! which is what makes offline end-to-end runs reproducible.

use crate::datasets::TabularData;
use crate::graph::BinaryAdjacency;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};

/// Per-variable exogenous noise of a linear SEM.
#[derive(Debug, Clone, Copy)]
pub enum NoiseKind {
    /// Zero-mean Gaussian with the given standard deviation.
    Gaussian(f64),
    /// Uniform on `[-half_width, half_width]`.
    Uniform(f64),
}

/// A linear structural equation model `x_j = Σ_i weights[i][j] · x_i + e_j`.
/// `weights[i][j]` is the coefficient of cause `i` in the equation of effect
/// `j`, matching the row-is-cause adjacency convention.
#[derive(Debug, Clone)]
pub struct LinearSem {
    pub labels: Vec<String>,
    pub weights: Vec<Vec<f64>>,
    pub noise: Vec<NoiseKind>,
}

impl LinearSem {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// True-structure adjacency: an edge wherever a weight is non-zero.
    pub fn adjacency(&self) -> BinaryAdjacency {
        let mut adj = BinaryAdjacency::zeros(self.labels.clone());
        for i in 0..self.n() {
            for j in 0..self.n() {
                if i != j && self.weights[i][j] != 0.0 {
                    adj.set(i, j, true);
                }
            }
        }
        adj
    }

    /// Draws `rows` samples. Panics if the weight structure is cyclic —
    /// simulated models must be DAGs by construction.
    pub fn sample(&self, rows: usize, seed: u64) -> TabularData {
        let n = self.n();
        let order = topological_order(&self.adjacency()).expect("SEM weights must form a DAG");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = vec![vec![0.0f64; n]; rows];
        for row in data.iter_mut() {
            for &v in &order {
                let mut x = match self.noise[v] {
                    NoiseKind::Gaussian(sd) => Normal::new(0.0, sd).unwrap().sample(&mut rng),
                    NoiseKind::Uniform(hw) => Uniform::new_inclusive(-hw, hw).sample(&mut rng),
                };
                for p in 0..n {
                    if self.weights[p][v] != 0.0 {
                        x += self.weights[p][v] * row[p];
                    }
                }
                row[v] = x;
            }
        }
        TabularData::new(self.labels.clone(), data).expect("simulated table is well-formed")
    }
}

fn topological_order(adj: &BinaryAdjacency) -> Option<Vec<usize>> {
    let n = adj.n();
    let mut indeg = vec![0usize; n];
    for (_, j) in adj.edges() {
        indeg[j] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    ready.sort_unstable();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.first().copied() {
        ready.remove(0);
        order.push(v);
        for j in 0..n {
            if adj.get(v, j) == 1 {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                    ready.sort_unstable();
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("X{i}")).collect()
}

/// Columns of independent standard Gaussian noise (no causal structure).
pub fn gaussian_noise(cols: usize, rows: usize, seed: u64) -> TabularData {
    let sem = LinearSem {
        labels: default_labels(cols),
        weights: vec![vec![0.0; cols]; cols],
        noise: vec![NoiseKind::Gaussian(1.0); cols],
    };
    sem.sample(rows, seed)
}

/// Three variables X, Y, Z with X -> Z <- Y (`z = x + y + 0.5·e`).
pub fn collider(rows: usize, seed: u64) -> TabularData {
    let mut weights = vec![vec![0.0; 3]; 3];
    weights[0][2] = 1.0;
    weights[1][2] = 1.0;
    let sem = LinearSem {
        labels: vec!["X".into(), "Y".into(), "Z".into()],
        weights,
        noise: vec![
            NoiseKind::Gaussian(1.0),
            NoiseKind::Gaussian(1.0),
            NoiseKind::Gaussian(0.5),
        ],
    };
    sem.sample(rows, seed)
}

/// Linear chain `X0 -> X1 -> … -> X(n-1)` with coefficient `b` and unit
/// Gaussian noise.
pub fn chain(n: usize, b: f64, rows: usize, seed: u64) -> TabularData {
    chain_sem(n, b, NoiseKind::Gaussian(1.0)).sample(rows, seed)
}

/// Same chain with uniform (non-Gaussian) noise — the regime DirectLiNGAM
/// is built for.
pub fn chain_uniform(n: usize, b: f64, rows: usize, seed: u64) -> TabularData {
    chain_sem(n, b, NoiseKind::Uniform(1.0)).sample(rows, seed)
}

/// The chain model itself, for tests that need the ground truth too.
pub fn chain_sem(n: usize, b: f64, noise: NoiseKind) -> LinearSem {
    let mut weights = vec![vec![0.0; n]; n];
    for i in 0..n - 1 {
        weights[i][i + 1] = b;
    }
    LinearSem {
        labels: default_labels(n),
        weights,
        noise: vec![noise; n],
    }
}

/// Random DAG SEM: a random permutation fixes a topological order, each
/// forward pair becomes an edge with probability `edge_prob`, weights are
/// `±[0.5, 1.5]`, noise is Gaussian with sd in `[0.5, 1.5]`.
pub fn random_dag_sem(n: usize, edge_prob: f64, seed: u64) -> LinearSem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    // Fisher-Yates on the fixed stream keeps this reproducible.
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let mut weights = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen::<f64>() < edge_prob {
                let magnitude = rng.gen_range(0.5..1.5);
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                weights[order[a]][order[b]] = sign * magnitude;
            }
        }
    }
    let noise = (0..n)
        .map(|_| NoiseKind::Gaussian(rng.gen_range(0.5..1.5)))
        .collect();
    LinearSem {
        labels: default_labels(n),
        weights,
        noise,
    }
}

/// Uniformly random binary digraph over `labels` (each off-diagonal cell an
/// independent coin flip); may contain cycles, which is exactly what debate
/// outputs can look like.
pub fn random_digraph(labels: Vec<String>, edge_prob: f64, seed: u64) -> BinaryAdjacency {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = labels.len();
    let mut adj = BinaryAdjacency::zeros(labels);
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen::<f64>() < edge_prob {
                adj.set(i, j, true);
            }
        }
    }
    adj
}

// --- Synthetic agent responses -------------------------------------------
//
// Builders for scripted-backend fixtures. The texts follow the response
// grammar the parsers accept, so a script assembled from these plays through
// a whole debate offline.

/// A debater response answering `answers.len()` questions with the given
/// yes/no positions.
pub fn react_answers(answers: &[bool]) -> String {
    let mut out = String::new();
    for (idx, &yes) in answers.iter().enumerate() {
        let k = idx + 1;
        let (stance, finale) = if yes {
            ("supports a direct causal relationship", "Yes")
        } else {
            ("does not support a direct causal relationship", "No")
        };
        out.push_str(&format!(
            "Question number {k}:\n\
             -Thought: Consider the data-generating mechanism for question {k}.\n\
             -Action: Review the relationship described in question {k}.\n\
             -Action Input: the dataset description\n\
             -Observation: The evidence {stance}.\n\
             -Final answer: {finale}\n\
             End Question number {k}\n"
        ));
    }
    out
}

/// A judge response deciding every question immediately.
pub fn judge_decisive(answers: &[bool]) -> String {
    let mut out = String::new();
    for (idx, &yes) in answers.iter().enumerate() {
        let k = idx + 1;
        let verdict = if yes {
            "Yes, there is a direct causal relationship"
        } else {
            "No direct causal relationship"
        };
        out.push_str(&format!(
            "Question number {k}:\n\
             -Thought: Both sides have argued question {k}.\n\
             -Final Answer: {verdict} for question {k}.\n"
        ));
    }
    out
}

/// A judge response requesting clarification from both sides on every one of
/// `k` questions.
pub fn judge_followup(k: usize) -> String {
    let mut out = String::new();
    for q in 1..=k {
        out.push_str(&format!(
            "Question number {q}:\n\
             -Thought: The arguments on question {q} remain unsubstantiated.\n\
             -Action: I would like to ask both debaters to provide concrete evidence for question {q}.\n\
             -Observation: Waiting for additional information from the debaters.\n"
        ));
    }
    out
}

/// A plan statement naming `algorithm` in its final answer, with optional
/// numbered steps.
pub fn plan_statement(algorithm: &str, steps: &[&str]) -> String {
    let mut out = format!(
        "-Thought: Weigh the candidate algorithms against the dataset.\n\
         -Final Answer: The {algorithm} algorithm is the most suitable choice for this dataset.\n"
    );
    for (idx, step) in steps.iter().enumerate() {
        out.push_str(&format!("-Step {}: {step}\n", idx + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_seed_deterministic() {
        let a = chain(3, 1.0, 50, 42);
        let b = chain(3, 1.0, 50, 42);
        assert_eq!(a, b);
        let c = chain(3, 1.0, 50, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn chain_truth_has_expected_edges() {
        let sem = chain_sem(4, 0.9, NoiseKind::Gaussian(1.0));
        let adj = sem.adjacency();
        assert_eq!(adj.edges(), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn random_dag_sem_is_acyclic() {
        for seed in 0..20 {
            let sem = random_dag_sem(6, 0.5, seed);
            assert!(crate::graph::is_dag(&sem.adjacency()), "seed {seed}");
        }
    }

    #[test]
    fn sem_sample_respects_mechanism() {
        // y = 2x exactly (no noise on y) means corr(x, y) = 1.
        let sem = LinearSem {
            labels: vec!["x".into(), "y".into()],
            weights: vec![vec![0.0, 2.0], vec![0.0, 0.0]],
            noise: vec![NoiseKind::Gaussian(1.0), NoiseKind::Gaussian(0.0)],
        };
        let data = sem.sample(100, 9);
        for r in 0..100 {
            assert!((data.value(r, 1) - 2.0 * data.value(r, 0)).abs() < 1e-12);
        }
    }
}
