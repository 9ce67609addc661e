//! Exact maximum-weight assignment over a masked rectangular matrix, plus the
//! exhaustive per-cluster oracle it is checked against.
//!
//! The solver runs successive shortest augmenting paths with dual potentials
//! (Hungarian/Jonker-Volgenant family), O(n^2 * m) for n rows and m columns.
//! Maximization is handled by negating weights internally; blocked cells are
//! simply absent edges, never large sentinel constants, which keeps
//! infeasibility detection exact: a failed augmentation yields the rows of
//! the alternating tree, a genuine Hall violator.

use crate::channel::CostTensor;
use crate::error::{Error, Result};
use crate::grid::Grant;

/// A masked n x m weight matrix: rows are vehicles, columns subframes.
/// Cells blocked by earlier allocations are removed from the edge set.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentProblem {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
    allowed: Vec<bool>,
}

impl AssignmentProblem {
    /// All-zero weights, every cell allowed.
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            weights: vec![0.0; rows * cols],
            allowed: vec![true; rows * cols],
        }
    }

    pub fn from_weights(weights: &[Vec<f64>]) -> Result<Self> {
        let rows = weights.len();
        let cols = weights.first().map_or(0, Vec::len);
        let mut p = Self::new(rows, cols);
        for (i, row) in weights.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::InvalidConfig(format!(
                    "ragged weight matrix: row {i} has {} columns, expected {cols}",
                    row.len()
                )));
            }
            for (j, &w) in row.iter().enumerate() {
                p.set_weight(i, j, w);
            }
        }
        Ok(p)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set_weight(&mut self, row: usize, col: usize, weight: f64) {
        self.weights[row * self.cols + col] = weight;
    }

    pub fn weight(&self, row: usize, col: usize) -> f64 {
        self.weights[row * self.cols + col]
    }

    pub fn block(&mut self, row: usize, col: usize) {
        self.allowed[row * self.cols + col] = false;
    }

    pub fn set_allowed(&mut self, row: usize, col: usize, allowed: bool) {
        self.allowed[row * self.cols + col] = allowed;
    }

    pub fn is_allowed(&self, row: usize, col: usize) -> bool {
        self.allowed[row * self.cols + col]
    }

    fn validate(&self) -> Result<()> {
        if self.rows == 0 {
            return Err(Error::InvalidConfig(
                "assignment problem needs at least one row".into(),
            ));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.is_allowed(i, j) && !self.weight(i, j).is_finite() {
                    return Err(Error::InvalidWeight { row: i, col: j });
                }
            }
        }
        Ok(())
    }
}

/// A row-perfect matching maximizing the total selected weight.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentSolution {
    /// Column assigned to each row.
    pub assigned_column: Vec<usize>,
    /// Sum of selected weights.
    pub objective: f64,
}

/// Best-effort matching: rows that admit no augmenting path stay unmatched.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialAssignment {
    pub assigned_column: Vec<Option<usize>>,
    pub unmatched_rows: Vec<usize>,
    /// Sum of weights over matched rows.
    pub objective: f64,
}

/// Solves for the maximum-weight row-perfect matching.
///
/// Deterministic: columns are scanned in ascending order and ties in the
/// augmenting search resolve toward the lowest column index. Errors with the
/// Hall violator (a set of rows jointly adjacent to fewer columns) when no
/// row-perfect matching exists.
pub fn solve_assignment(problem: &AssignmentProblem) -> Result<AssignmentSolution> {
    problem.validate()?;
    let mut state = SearchState::new(problem);
    for row in 0..problem.rows {
        if let Err(tree_rows) = state.augment(problem, row) {
            return Err(Error::Infeasible(tree_rows));
        }
    }
    let assigned = state.assigned_columns(problem);
    let assigned_column: Vec<usize> = assigned.iter().map(|c| c.unwrap()).collect();
    let objective = assigned_column
        .iter()
        .enumerate()
        .map(|(i, &j)| problem.weight(i, j))
        .sum();
    Ok(AssignmentSolution {
        assigned_column,
        objective,
    })
}

/// Like [`solve_assignment`] but skips rows that cannot be matched instead of
/// failing, processing rows in index order. The result covers a maximum
/// number of rows; matched weight is maximized greedily per augmentation, so
/// no global optimality claim is made when any row is skipped.
pub fn solve_assignment_partial(problem: &AssignmentProblem) -> Result<PartialAssignment> {
    problem.validate()?;
    let mut state = SearchState::new(problem);
    let mut unmatched_rows = Vec::new();
    for row in 0..problem.rows {
        if state.augment(problem, row).is_err() {
            unmatched_rows.push(row);
        }
    }
    let assigned_column = state.assigned_columns(problem);
    let objective = assigned_column
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|j| problem.weight(i, j)))
        .sum();
    Ok(PartialAssignment {
        assigned_column,
        unmatched_rows,
        objective,
    })
}

// Shortest-augmenting-path machinery shared by the strict and partial
// entry points. Minimizes negated weights; potentials keep reduced costs
// consistent across successive augmentations.
struct SearchState {
    // row occupying each column; index `cols` is the virtual start column
    row_at_col: Vec<Option<usize>>,
    row_potential: Vec<f64>,
    col_potential: Vec<f64>,
}

impl SearchState {
    fn new(problem: &AssignmentProblem) -> Self {
        Self {
            row_at_col: vec![None; problem.cols + 1],
            row_potential: vec![0.0; problem.rows],
            col_potential: vec![0.0; problem.cols + 1],
        }
    }

    // Grows the matching by one row, or reports the rows of the failed
    // alternating tree (a Hall violator containing `row`).
    fn augment(
        &mut self,
        problem: &AssignmentProblem,
        row: usize,
    ) -> std::result::Result<(), Vec<usize>> {
        let cols = problem.cols;
        let virtual_col = cols;
        self.row_at_col[virtual_col] = Some(row);
        let mut min_reduced = vec![f64::INFINITY; cols];
        let mut prev_col = vec![virtual_col; cols];
        let mut in_tree = vec![false; cols + 1];
        let mut cursor = virtual_col;
        loop {
            in_tree[cursor] = true;
            let occupant = self.row_at_col[cursor].expect("tree columns are matched");
            let mut delta = f64::INFINITY;
            let mut next = usize::MAX;
            for col in 0..cols {
                if in_tree[col] || !problem.is_allowed(occupant, col) {
                    continue;
                }
                let reduced = -problem.weight(occupant, col)
                    - self.row_potential[occupant]
                    - self.col_potential[col];
                if reduced < min_reduced[col] {
                    min_reduced[col] = reduced;
                    prev_col[col] = cursor;
                }
            }
            for col in 0..cols {
                if !in_tree[col] && min_reduced[col] < delta {
                    delta = min_reduced[col];
                    next = col;
                }
            }
            if next == usize::MAX {
                // no reachable free column: every edge out of the tree's rows
                // lands on a matched tree column
                let mut tree_rows: Vec<usize> = (0..=cols)
                    .filter(|&c| in_tree[c])
                    .filter_map(|c| self.row_at_col[c])
                    .collect();
                tree_rows.sort_unstable();
                self.row_at_col[virtual_col] = None;
                return Err(tree_rows);
            }
            for col in 0..=cols {
                if in_tree[col] {
                    let r = self.row_at_col[col].expect("tree columns are matched");
                    self.row_potential[r] += delta;
                    self.col_potential[col] -= delta;
                }
            }
            for col in 0..cols {
                if !in_tree[col] {
                    min_reduced[col] -= delta;
                }
            }
            cursor = next;
            if self.row_at_col[cursor].is_none() {
                break;
            }
        }
        // flip matched edges along the path back to the virtual column
        while cursor != virtual_col {
            let back = prev_col[cursor];
            self.row_at_col[cursor] = self.row_at_col[back];
            cursor = back;
        }
        self.row_at_col[virtual_col] = None;
        Ok(())
    }

    fn assigned_columns(&self, problem: &AssignmentProblem) -> Vec<Option<usize>> {
        let mut assigned = vec![None; problem.rows];
        for col in 0..problem.cols {
            if let Some(row) = self.row_at_col[col] {
                assigned[row] = Some(col);
            }
        }
        assigned
    }
}

/// Per-cluster grants with their total rate.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterSolution {
    pub grants: Vec<(usize, Grant)>,
    pub objective: f64,
}

/// Exhaustively enumerates every feasible per-cluster allocation: injective
/// subframe choices across members times independent subchannel choices per
/// member. Intended as a small-instance oracle; it refuses when the
/// enumeration would exceed `budget` leaves or the member count exceeds 8.
///
/// `allowed_subframes[l-1] = false` removes subframe `l` from the cluster's
/// choices. Ties between optima resolve to the first solution in (member
/// order, subframe ascending, subchannel ascending) exploration order.
pub fn brute_force_cluster(
    costs: &CostTensor,
    members: &[usize],
    allowed_subframes: &[bool],
    budget: u64,
) -> Result<ClusterSolution> {
    if members.is_empty() {
        return Err(Error::EmptyMemberList);
    }
    for &v in members {
        if v >= costs.vehicles() {
            return Err(Error::UnknownVehicle(v));
        }
    }
    if allowed_subframes.len() != costs.subframes() {
        return Err(Error::InvalidConfig(format!(
            "allowed_subframes has {} entries, grid has {} subframes",
            allowed_subframes.len(),
            costs.subframes()
        )));
    }
    let n = members.len();
    let available = allowed_subframes.iter().filter(|&&a| a).count();
    let estimate = enumeration_estimate(n, available, costs.subchannels());
    if n > 8 || estimate > budget as u128 {
        return Err(Error::BudgetExceeded {
            nodes: estimate.min(u64::MAX as u128) as u64,
        });
    }

    let mut search = ClusterSearch {
        costs,
        members,
        allowed_subframes,
        used: vec![false; costs.subframes()],
        current: Vec::with_capacity(n),
        best_objective: f64::NEG_INFINITY,
        best: None,
    };
    search.descend(0, 0.0);
    let best = search.best.ok_or_else(|| {
        // fewer usable subframes than members: no feasible allocation
        Error::Infeasible((0..n).collect())
    })?;
    let grants = members.iter().copied().zip(best).collect();
    Ok(ClusterSolution {
        grants,
        objective: search.best_objective,
    })
}

// (available choose n) * n! * K^n, saturating.
fn enumeration_estimate(n: usize, available: usize, subchannels: usize) -> u128 {
    if available < n {
        return 0;
    }
    let mut total: u128 = 1;
    for i in 0..n {
        total = total.saturating_mul((available - i) as u128);
        total = total.saturating_mul(subchannels as u128);
    }
    total
}

struct ClusterSearch<'a> {
    costs: &'a CostTensor,
    members: &'a [usize],
    allowed_subframes: &'a [bool],
    used: Vec<bool>,
    current: Vec<Grant>,
    best_objective: f64,
    best: Option<Vec<Grant>>,
}

impl ClusterSearch<'_> {
    fn descend(&mut self, depth: usize, sum: f64) {
        if depth == self.members.len() {
            if sum > self.best_objective {
                self.best_objective = sum;
                self.best = Some(self.current.clone());
            }
            return;
        }
        let vehicle = self.members[depth];
        for l in 1..=self.costs.subframes() {
            if !self.allowed_subframes[l - 1] || self.used[l - 1] {
                continue;
            }
            self.used[l - 1] = true;
            for k in 1..=self.costs.subchannels() {
                self.current.push(Grant {
                    subframe: l,
                    subchannel: k,
                });
                self.descend(depth + 1, sum + self.costs.value(vehicle, l, k));
                self.current.pop();
            }
            self.used[l - 1] = false;
        }
    }
}
