//! Graph containers and the conversions that glue debate verdicts,
//! statistical search output, and constraint inputs together.
//!
//! Convention used everywhere: `cells[i][j] = 1` means the directed edge
//! `i -> j` (row = cause, column = effect). Conversions from other encodings
//! normalize into this form.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("label order mismatch: expected {expected:?}, found {found:?}")]
    UnknownLabelOrder {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("cell at row {row}, col {col} is {value:?}, expected 0 or 1")]
    NonBinaryCell {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("diagonal cell ({0},{0}) must be 0")]
    NonZeroDiagonal(usize),
    #[error("verdicts missing for ordered pairs {0:?}")]
    IncompleteVerdicts(Vec<(usize, usize)>),
    #[error("required and forbidden sets overlap on {0:?}")]
    ConflictingConstraint(Vec<(usize, usize)>),
    #[error("value {value} at ({row},{col}) is not a valid prior entry (-1, 0, 1)")]
    InvalidPriorEntry { row: usize, col: usize, value: i8 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Directed graph as a binary matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryAdjacency {
    labels: Vec<String>,
    cells: Vec<Vec<u8>>,
}

impl BinaryAdjacency {
    /// Graph with no edges over `labels`.
    pub fn zeros(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            cells: vec![vec![0; n]; n],
        }
    }

    /// Validates squareness, zero diagonal, and {0,1} cells.
    pub fn from_cells(labels: Vec<String>, cells: Vec<Vec<u8>>) -> Result<Self, GraphError> {
        let n = labels.len();
        if cells.len() != n {
            return Err(GraphError::ShapeMismatch(format!(
                "{} rows for {} labels",
                cells.len(),
                n
            )));
        }
        for (i, row) in cells.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::ShapeMismatch(format!(
                    "row {i} has {} cells for {} labels",
                    row.len(),
                    n
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(GraphError::NonBinaryCell {
                        row: i,
                        col: j,
                        value: v.to_string(),
                    });
                }
                if i == j && v != 0 {
                    return Err(GraphError::NonZeroDiagonal(i));
                }
            }
        }
        Ok(Self { labels, cells })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.cells[i][j]
    }

    /// Sets `i -> j`. Setting a diagonal cell is a programming error.
    pub fn set(&mut self, i: usize, j: usize, present: bool) {
        assert_ne!(i, j, "diagonal cells are fixed at 0");
        self.cells[i][j] = u8::from(present);
    }

    pub fn cells(&self) -> &[Vec<u8>] {
        &self.cells
    }

    /// Directed edges `(cause, effect)` in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n() {
            for j in 0..self.n() {
                if self.cells[i][j] == 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.cells.iter().flatten().filter(|&&v| v == 1).count()
    }
}

/// How `pattern_to_binary` treats an undirected pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UndirectedPolicy {
    /// Keep both orientations: two 1-cells.
    Both,
    /// Drop the pair entirely.
    Drop,
}

/// State of one unordered variable pair in a partially directed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairState {
    /// Not adjacent.
    None,
    /// Directed low-index -> high-index.
    Forward,
    /// Directed high-index -> low-index.
    Backward,
    /// Adjacent, orientation unknown.
    Undirected,
    /// Two arrowheads (conflict / latent confounder marker).
    Bidirected,
}

/// Partially directed graph (PC-style output). Stores one state per
/// unordered pair, so the two endpoint marks of a pair can never disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternGraph {
    labels: Vec<String>,
    /// Upper-triangle pair states, row-major: pair (i,j) with i<j lives at
    /// index `i*n - i*(i+1)/2 + (j - i - 1)`.
    pairs: Vec<PairState>,
}

impl PatternGraph {
    pub fn empty(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self {
            labels,
            pairs: vec![PairState::None; n * n.saturating_sub(1) / 2],
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n());
        i * self.n() - i * (i + 1) / 2 + (j - i - 1)
    }

    /// State of the unordered pair {i,j}, normalized so `Forward` always
    /// means `min -> max`.
    pub fn pair(&self, i: usize, j: usize) -> PairState {
        assert_ne!(i, j);
        if i < j {
            self.pairs[self.slot(i, j)]
        } else {
            match self.pairs[self.slot(j, i)] {
                PairState::Forward => PairState::Backward,
                PairState::Backward => PairState::Forward,
                s => s,
            }
        }
    }

    /// Sets the pair {i,j}; a `Forward` argument is interpreted relative to
    /// the (i, j) order given by the caller.
    pub fn set_pair(&mut self, i: usize, j: usize, state: PairState) {
        assert_ne!(i, j);
        if i < j {
            let s = self.slot(i, j);
            self.pairs[s] = state;
        } else {
            let s = self.slot(j, i);
            self.pairs[s] = match state {
                PairState::Forward => PairState::Backward,
                PairState::Backward => PairState::Forward,
                other => other,
            };
        }
    }

    /// Directed edge helper: marks `cause -> effect`.
    pub fn orient(&mut self, cause: usize, effect: usize) {
        self.set_pair(cause, effect, PairState::Forward);
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.pair(i, j) != PairState::None
    }

    /// Builds a pattern from an endpoint-mark matrix in the convention used
    /// by constraint-based search libraries: `m[j][i] = 1 && m[i][j] = -1`
    /// encodes `i -> j`; `-1/-1` an undirected pair; `1/1` a bidirected pair.
    pub fn from_endpoint_matrix(labels: Vec<String>, m: &[Vec<i8>]) -> Result<Self, GraphError> {
        let n = labels.len();
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(GraphError::ShapeMismatch(format!(
                "{}x? for {} labels",
                m.len(),
                n
            )));
        }
        let mut g = Self::empty(labels);
        for i in 0..n {
            for j in (i + 1)..n {
                let s = match (m[i][j], m[j][i]) {
                    (0, 0) => PairState::None,
                    (-1, 1) => PairState::Forward,  // i -> j
                    (1, -1) => PairState::Backward, // j -> i
                    (-1, -1) => PairState::Undirected,
                    (1, 1) => PairState::Bidirected,
                    (a, b) => {
                        return Err(GraphError::ShapeMismatch(format!(
                            "unrecognized endpoint marks ({a},{b}) for pair ({i},{j})"
                        )))
                    }
                };
                g.set_pair(i, j, s);
            }
        }
        Ok(g)
    }
}

/// Collapses a pattern to a binary adjacency. Directed pairs keep their
/// orientation; bidirected pairs always become two 1-cells; undirected pairs
/// follow `policy`.
pub fn pattern_to_binary(pattern: &PatternGraph, policy: UndirectedPolicy) -> BinaryAdjacency {
    let mut adj = BinaryAdjacency::zeros(pattern.labels().to_vec());
    for i in 0..pattern.n() {
        for j in (i + 1)..pattern.n() {
            match pattern.pair(i, j) {
                PairState::None => {}
                PairState::Forward => adj.set(i, j, true),
                PairState::Backward => adj.set(j, i, true),
                PairState::Bidirected => {
                    adj.set(i, j, true);
                    adj.set(j, i, true);
                }
                PairState::Undirected => {
                    if policy == UndirectedPolicy::Both {
                        adj.set(i, j, true);
                        adj.set(j, i, true);
                    }
                }
            }
        }
    }
    adj
}

/// Builds an adjacency from per-ordered-pair yes/no answers. Every ordered
/// pair `i != j` must be present in `answers` as `((i, j), yes)`.
pub fn verdicts_to_adjacency(
    labels: Vec<String>,
    answers: &[((usize, usize), bool)],
) -> Result<BinaryAdjacency, GraphError> {
    let n = labels.len();
    let mut adj = BinaryAdjacency::zeros(labels);
    let mut seen = vec![vec![false; n]; n];
    for &((i, j), yes) in answers {
        if i >= n || j >= n || i == j {
            return Err(GraphError::ShapeMismatch(format!(
                "pair ({i},{j}) out of range"
            )));
        }
        seen[i][j] = true;
        adj.set(i, j, yes);
    }
    let mut missing = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && !seen[i][j] {
                missing.push((i, j));
            }
        }
    }
    if !missing.is_empty() {
        return Err(GraphError::IncompleteVerdicts(missing));
    }
    Ok(adj)
}

/// Directed-path prior knowledge: `entry(i, j)` concerns a directed path from
/// variable `i` to variable `j` — `1` required, `0` forbidden, `-1` unknown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorKnowledge {
    labels: Vec<String>,
    entries: Vec<Vec<i8>>,
}

impl PriorKnowledge {
    /// All-unknown prior.
    pub fn unknown(labels: Vec<String>) -> Self {
        let n = labels.len();
        let mut entries = vec![vec![-1i8; n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = -1;
        }
        Self { labels, entries }
    }

    pub fn from_entries(labels: Vec<String>, entries: Vec<Vec<i8>>) -> Result<Self, GraphError> {
        let n = labels.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(GraphError::ShapeMismatch(format!(
                "{}x? entries for {} labels",
                entries.len(),
                n
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(GraphError::InvalidPriorEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
                if i == j && v == 1 {
                    return Err(GraphError::NonZeroDiagonal(i));
                }
            }
        }
        Ok(Self { labels, entries })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[i][j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: i8) {
        assert!((-1..=1).contains(&v));
        self.entries[i][j] = v;
    }

    pub fn entries(&self) -> &[Vec<i8>] {
        &self.entries
    }
}

/// Hard edge constraints for constraint-based search, as ordered pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeConstraints {
    pub required: BTreeSet<(usize, usize)>,
    pub forbidden: BTreeSet<(usize, usize)>,
}

impl EdgeConstraints {
    /// Validates that no ordered pair is both required and forbidden.
    pub fn new(
        required: BTreeSet<(usize, usize)>,
        forbidden: BTreeSet<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        let overlap: Vec<(usize, usize)> = required.intersection(&forbidden).copied().collect();
        if !overlap.is_empty() {
            return Err(GraphError::ConflictingConstraint(overlap));
        }
        Ok(Self {
            required,
            forbidden,
        })
    }

    pub fn is_required(&self, i: usize, j: usize) -> bool {
        self.required.contains(&(i, j))
    }

    pub fn is_forbidden(&self, i: usize, j: usize) -> bool {
        self.forbidden.contains(&(i, j))
    }
}

/// Adjacency -> directed-path prior. A 1-cell becomes a required path. An
/// absent edge becomes unknown when `unknown_absent` is set (permissive), or
/// a forbidden path otherwise (strict).
pub fn adjacency_to_prior(adj: &BinaryAdjacency, unknown_absent: bool) -> PriorKnowledge {
    let n = adj.n();
    let mut prior = PriorKnowledge::unknown(adj.labels().to_vec());
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if adj.get(i, j) == 1 {
                prior.set_entry(i, j, 1);
            } else if !unknown_absent {
                prior.set_entry(i, j, 0);
            }
        }
    }
    prior
}

/// Adjacency -> hard edge constraints: 1-cells required, 0-cells forbidden.
pub fn adjacency_to_constraints(adj: &BinaryAdjacency) -> EdgeConstraints {
    let mut required = BTreeSet::new();
    let mut forbidden = BTreeSet::new();
    for i in 0..adj.n() {
        for j in 0..adj.n() {
            if i == j {
                continue;
            }
            if adj.get(i, j) == 1 {
                required.insert((i, j));
            } else {
                forbidden.insert((i, j));
            }
        }
    }
    EdgeConstraints {
        required,
        forbidden,
    }
}

/// Symmetric closure: `out[i][j] = out[j][i] = 1` iff either direction is
/// present in the input. Used as a super-structure for score-based search.
pub fn adjacency_to_super_structure(adj: &BinaryAdjacency) -> BinaryAdjacency {
    let mut out = BinaryAdjacency::zeros(adj.labels().to_vec());
    for i in 0..adj.n() {
        for j in 0..adj.n() {
            if i != j && (adj.get(i, j) == 1 || adj.get(j, i) == 1) {
                out.set(i, j, true);
            }
        }
    }
    out
}

/// True iff the graph has no directed cycle (Kahn peeling).
pub fn is_dag(adj: &BinaryAdjacency) -> bool {
    let n = adj.n();
    let mut indeg = vec![0usize; n];
    for (_, j) in adj.edges() {
        indeg[j] += 1;
    }
    let mut queue: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = queue.pop() {
        seen += 1;
        for j in 0..n {
            if adj.get(v, j) == 1 {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
    }
    seen == n
}

/// Writes the adjacency as CSV: a header of labels behind an empty index
/// cell, then one row per variable prefixed by its label. LF endings,
/// integer cells. The output is byte-stable for a given graph.
pub fn export_adjacency_csv(adj: &BinaryAdjacency) -> String {
    let mut out = String::new();
    out.push(',');
    out.push_str(&adj.labels().join(","));
    out.push('\n');
    for i in 0..adj.n() {
        out.push_str(&adj.labels()[i]);
        for j in 0..adj.n() {
            out.push(',');
            out.push_str(if adj.get(i, j) == 1 { "1" } else { "0" });
        }
        out.push('\n');
    }
    out
}

/// Parses the format written by [`export_adjacency_csv`]: square binary
/// body, row labels in exactly the header order.
pub fn import_adjacency_csv(text: &str) -> Result<BinaryAdjacency, GraphError> {
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let header = lines
        .next()
        .ok_or_else(|| GraphError::ShapeMismatch("empty file".into()))?;
    let mut fields = header.split(',');
    let first = fields.next().unwrap_or("");
    // Tolerate a missing leading index cell on import.
    let mut labels: Vec<String> = Vec::new();
    if !first.trim().is_empty() {
        labels.push(first.trim().to_string());
    }
    labels.extend(fields.map(|f| f.trim().to_string()));
    let n = labels.len();
    let mut row_labels = Vec::new();
    let mut cells = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let label = parts.next().unwrap_or("").trim().to_string();
        let row: Vec<&str> = parts.map(|p| p.trim()).collect();
        if row.len() != n {
            return Err(GraphError::ShapeMismatch(format!(
                "row {:?} has {} cells, expected {}",
                label,
                row.len(),
                n
            )));
        }
        let i = cells.len();
        let mut parsed = Vec::with_capacity(n);
        for (j, cell) in row.iter().enumerate() {
            match *cell {
                "0" => parsed.push(0u8),
                "1" => parsed.push(1u8),
                other => {
                    return Err(GraphError::NonBinaryCell {
                        row: i,
                        col: j,
                        value: other.to_string(),
                    })
                }
            }
        }
        row_labels.push(label);
        cells.push(parsed);
    }
    if row_labels != labels {
        return Err(GraphError::UnknownLabelOrder {
            expected: labels,
            found: row_labels,
        });
    }
    BinaryAdjacency::from_cells(labels, cells)
}
