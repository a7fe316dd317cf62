//! Dense two-phase simplex for small linear programs.
//!
//! Problems are stated as
//!
//! ```text
//! minimize    c . x
//! subject to  row_i . x  (<= | >= | =)  rhs_i
//!             lower_j <= x_j <= upper_j
//! ```
//!
//! and rewritten internally into `A y <= b, y >= 0`. Phase one uses a single
//! artificial column (Chvatal's initialization), so the tableau never carries
//! more than one artificial variable. Pricing is Dantzig's rule; after a streak
//! of degenerate pivots the solver falls back to Bland's rule until progress
//! resumes.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

pub const FEASIBILITY_TOL: f64 = 1e-9;
pub const OPTIMALITY_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const DEGENERATE_STREAK: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub row: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    /// A program over `objective.len()` variables, each bounded below by 0.
    pub fn new(objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self { objective, constraints: Vec::new(), lower: vec![0.0; n], upper: vec![f64::INFINITY; n] }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn constrain(&mut self, row: Vec<f64>, relation: Relation, rhs: f64) -> &mut Self {
        self.constraints.push(Constraint { row, relation, rhs });
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> &mut Self {
        self.lower[var] = lower;
        self.upper[var] = upper;
        self
    }

    /// Largest amount by which `x` breaks a constraint or a variable bound.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            let lhs: f64 = c.row.iter().zip(x).map(|(a, v)| a * v).sum();
            let v = match c.relation {
                Relation::Le => lhs - c.rhs,
                Relation::Ge => c.rhs - lhs,
                Relation::Eq => (lhs - c.rhs).abs(),
            };
            worst = worst.max(v);
        }
        for ((&v, &lo), &hi) in x.iter().zip(&self.lower).zip(&self.upper) {
            worst = worst.max(lo - v).max(v - hi);
        }
        worst
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::DimensionMismatch { what: "variable bounds".into(), expected: n, found: self.lower.len().min(self.upper.len()) });
        }
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::NonFinite("objective".into()));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.row.len() != n {
                return Err(LpError::DimensionMismatch { what: format!("constraint {i}"), expected: n, found: c.row.len() });
            }
            if c.row.iter().any(|a| !a.is_finite()) || !c.rhs.is_finite() {
                return Err(LpError::NonFinite(format!("constraint {i}")));
            }
        }
        for j in 0..n {
            if self.lower[j].is_nan() || self.upper[j].is_nan() || self.lower[j] > self.upper[j] || self.lower[j] == f64::INFINITY || self.upper[j] == f64::NEG_INFINITY {
                return Err(LpError::InvalidBounds(j));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("{what}: expected length {expected}, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error("invalid bounds on variable {0}")]
    InvalidBounds(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Pivoting stalled or the final point failed the independent feasibility
    /// check. No solution is reported.
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal point; empty unless `status` is `Optimal`.
    pub x: Vec<f64>,
    pub objective_value: f64,
    pub max_constraint_violation: f64,
    /// Shadow price of each constraint: the rate of change of the optimal
    /// objective per unit increase of its right-hand side. Empty unless
    /// `status` is `Optimal`.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    fn without_point(status: LpStatus, iterations: usize) -> Self {
        let objective_value = match status {
            LpStatus::Unbounded => f64::NEG_INFINITY,
            _ => f64::NAN,
        };
        Self { status, x: Vec::new(), objective_value, max_constraint_violation: f64::NAN, duals: Vec::new(), iterations }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// How an original variable is recovered from the non-negative columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    Shift { col: usize, offset: f64 },
    Reflect { col: usize, offset: f64 },
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    maps: Vec<VarMap>,
    cols: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    // Original constraint and sign for each row; `None` for bound rows.
    origin: Vec<Option<(usize, f64)>>,
    cost: Vec<f64>,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> Self {
        let mut maps = Vec::with_capacity(lp.num_vars());
        let mut cols = 0;
        for j in 0..lp.num_vars() {
            let (lo, hi) = (lp.lower[j], lp.upper[j]);
            let m = if lo.is_finite() {
                VarMap::Shift { col: cols, offset: lo }
            } else if hi.is_finite() {
                VarMap::Reflect { col: cols, offset: hi }
            } else {
                cols += 1;
                VarMap::Split { pos: cols - 1, neg: cols }
            };
            cols += 1;
            maps.push(m);
        }

        let substitute = |row: &[f64]| -> (Vec<f64>, f64) {
            let mut out = vec![0.0; cols];
            let mut constant = 0.0;
            for (&a, m) in row.iter().zip(&maps) {
                match *m {
                    VarMap::Shift { col, offset } => {
                        out[col] += a;
                        constant += a * offset;
                    }
                    VarMap::Reflect { col, offset } => {
                        out[col] -= a;
                        constant += a * offset;
                    }
                    VarMap::Split { pos, neg } => {
                        out[pos] += a;
                        out[neg] -= a;
                    }
                }
            }
            (out, constant)
        };

        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut origin = Vec::new();
        for (ci, c) in lp.constraints.iter().enumerate() {
            let (row, constant) = substitute(&c.row);
            let b = c.rhs - constant;
            if matches!(c.relation, Relation::Le | Relation::Eq) {
                rows.push(row.clone());
                rhs.push(b);
                origin.push(Some((ci, 1.0)));
            }
            if matches!(c.relation, Relation::Ge | Relation::Eq) {
                rows.push(row.iter().map(|a| -a).collect());
                rhs.push(-b);
                origin.push(Some((ci, -1.0)));
            }
        }
        for (j, m) in maps.iter().enumerate() {
            if let VarMap::Shift { col, offset } = *m {
                if lp.upper[j].is_finite() {
                    let mut row = vec![0.0; cols];
                    row[col] = 1.0;
                    rows.push(row);
                    rhs.push(lp.upper[j] - offset);
                    origin.push(None);
                }
            }
        }
        let (cost, _) = substitute(&lp.objective);
        Self { maps, cols, rows, rhs, origin, cost }
    }

    fn recover(&self, y: &[f64]) -> Vec<f64> {
        self.maps
            .iter()
            .map(|m| match *m {
                VarMap::Shift { col, offset } => offset + y[col],
                VarMap::Reflect { col, offset } => offset - y[col],
                VarMap::Split { pos, neg } => y[pos] - y[neg],
            })
            .collect()
    }
}

enum Outcome {
    Optimal,
    Unbounded,
    Stalled,
}

/// Dense tableau over columns `[structural | slack | artificial]`.
struct Tableau {
    width: usize,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    basis: Vec<usize>,
    obj: Vec<f64>,
    obj_value: f64,
    blocked: Vec<bool>,
    iterations: usize,
    max_iterations: usize,
}

impl Tableau {
    fn pivot(&mut self, prow: usize, pcol: usize) {
        let inv = 1.0 / self.a[prow][pcol];
        for v in self.a[prow].iter_mut() {
            *v *= inv;
        }
        self.b[prow] *= inv;
        self.a[prow][pcol] = 1.0;
        let nz: Vec<usize> = (0..self.width).filter(|&j| self.a[prow][j] != 0.0).collect();
        let (pivot_row, pivot_b) = (self.a[prow].clone(), self.b[prow]);
        for i in 0..self.a.len() {
            if i == prow {
                continue;
            }
            let f = self.a[i][pcol];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[i];
            for &j in &nz {
                row[j] -= f * pivot_row[j];
            }
            row[pcol] = 0.0;
            self.b[i] -= f * pivot_b;
            if self.b[i].abs() < 1e-15 {
                self.b[i] = 0.0;
            }
        }
        let f = self.obj[pcol];
        if f != 0.0 {
            for &j in &nz {
                self.obj[j] -= f * pivot_row[j];
            }
            self.obj[pcol] = 0.0;
            self.obj_value -= f * pivot_b;
        }
        self.basis[prow] = pcol;
    }

    fn set_objective(&mut self, cost: &[f64]) {
        self.obj = cost.to_vec();
        self.obj_value = 0.0;
        for i in 0..self.a.len() {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..self.width {
                    self.obj[j] -= cb * self.a[i][j];
                }
                self.obj_value -= cb * self.b[i];
            }
        }
        for &j in &self.basis {
            self.obj[j] = 0.0;
        }
    }

    fn run(&mut self) -> Outcome {
        let mut degenerate = 0;
        loop {
            if self.iterations >= self.max_iterations {
                return Outcome::Stalled;
            }
            let bland = degenerate >= DEGENERATE_STREAK;
            let mut enter = None;
            let mut best = -OPTIMALITY_TOL;
            for j in 0..self.width {
                if self.blocked[j] {
                    continue;
                }
                let d = self.obj[j];
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(col) = enter else { return Outcome::Optimal };

            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for i in 0..self.a.len() {
                let aij = self.a[i][col];
                if aij <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.b[i].max(0.0) / aij;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let scale = 1e-12 * (1.0 + best_ratio.abs());
                        if ratio < best_ratio - scale {
                            true
                        } else if ratio <= best_ratio + scale {
                            if bland {
                                self.basis[i] < self.basis[l]
                            } else {
                                aij > self.a[l][col]
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    leave = Some(i);
                    best_ratio = best_ratio.min(ratio);
                }
            }
            let Some(row) = leave else { return Outcome::Unbounded };
            let ratio = self.b[row].max(0.0) / self.a[row][col];
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(row, col);
            self.iterations += 1;
        }
    }
}

/// Solves `lp`. Structural defects are errors; infeasibility, unboundedness
/// and numerical trouble are reported through [`LpStatus`].
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let sf = StandardForm::build(lp);
    let m = sf.rows.len();
    let n = sf.cols;
    let art = n + m;
    let width = n + m + 1;

    let mut a = Vec::with_capacity(m);
    for (i, row) in sf.rows.iter().enumerate() {
        let mut t = vec![0.0; width];
        t[..n].copy_from_slice(row);
        t[n + i] = 1.0;
        t[art] = -1.0;
        a.push(t);
    }
    let mut tab = Tableau {
        width,
        a,
        b: sf.rhs.clone(),
        basis: (n..n + m).collect(),
        obj: vec![0.0; width],
        obj_value: 0.0,
        blocked: vec![false; width],
        iterations: 0,
        max_iterations: 50 * (m + width) + 1000,
    };

    // Phase one: minimize the artificial after pivoting it in on the most
    // infeasible row.
    let most_negative = (0..m).min_by(|&i, &j| tab.b[i].total_cmp(&tab.b[j]));
    match most_negative {
        Some(r) if tab.b[r] < 0.0 => {
            tab.pivot(r, art);
            let mut cost = vec![0.0; width];
            cost[art] = 1.0;
            tab.set_objective(&cost);
            match tab.run() {
                Outcome::Optimal => {}
                Outcome::Unbounded | Outcome::Stalled => {
                    return Ok(LpSolution::without_point(LpStatus::NumericalFailure, tab.iterations));
                }
            }
            let scale = 1.0 + sf.rhs.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
            if -tab.obj_value > FEASIBILITY_TOL * scale {
                return Ok(LpSolution::without_point(LpStatus::Infeasible, tab.iterations));
            }
            if let Some(r) = tab.basis.iter().position(|&j| j == art) {
                let col = (0..art)
                    .filter(|&j| !tab.basis.contains(&j))
                    .max_by(|&x, &y| tab.a[r][x].abs().total_cmp(&tab.a[r][y].abs()));
                match col {
                    Some(j) if tab.a[r][j].abs() > PIVOT_TOL => tab.pivot(r, j),
                    _ => {
                        // Redundant row: the artificial stays basic at zero.
                    }
                }
            }
        }
        _ => {}
    }
    tab.blocked[art] = true;
    for row in tab.a.iter_mut() {
        row[art] = 0.0;
    }

    let mut cost = vec![0.0; width];
    cost[..n].copy_from_slice(&sf.cost);
    tab.set_objective(&cost);
    match tab.run() {
        Outcome::Optimal => {}
        Outcome::Unbounded => return Ok(LpSolution::without_point(LpStatus::Unbounded, tab.iterations)),
        Outcome::Stalled => return Ok(LpSolution::without_point(LpStatus::NumericalFailure, tab.iterations)),
    }

    let mut y = vec![0.0; n];
    for (i, &j) in tab.basis.iter().enumerate() {
        if j < n {
            y[j] = tab.b[i].max(0.0);
        }
    }
    let mut x = sf.recover(&y);
    let mut violation = lp.max_violation(&x);
    if let Some(y_refined) = refine_vertex(&sf, &tab.basis, n) {
        let x_refined = sf.recover(&y_refined);
        let v = lp.max_violation(&x_refined);
        if v <= violation {
            x = x_refined;
            violation = v;
        }
    }

    let scale = 1.0 + lp.constraints.iter().fold(0.0_f64, |acc, c| acc.max(c.rhs.abs()));
    if violation > FEASIBILITY_TOL * scale {
        return Ok(LpSolution::without_point(LpStatus::NumericalFailure, tab.iterations));
    }
    let objective_value = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    let mut duals = vec![0.0; lp.constraints.len()];
    for (i, o) in sf.origin.iter().enumerate() {
        if let Some((ci, sign)) = *o {
            duals[ci] -= sign * tab.obj[n + i];
        }
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        x,
        objective_value,
        max_constraint_violation: violation,
        duals,
        iterations: tab.iterations,
    })
}

/// Recomputes the basic structural values from the original rows that are
/// tight at the final basis (those whose slack is non-basic), washing out
/// rounding accumulated in the tableau.
fn refine_vertex(sf: &StandardForm, basis: &[usize], n: usize) -> Option<Vec<f64>> {
    let structural: Vec<usize> = basis.iter().copied().filter(|&j| j < n).collect();
    let tight: Vec<usize> = (0..sf.rows.len()).filter(|&i| !basis.contains(&(n + i))).collect();
    if structural.is_empty() || tight.len() != structural.len() {
        return None;
    }
    let k = structural.len();
    let mat = DMatrix::from_fn(k, k, |r, c| sf.rows[tight[r]][structural[c]]);
    let rhs = DVector::from_fn(k, |r, _| sf.rhs[tight[r]]);
    let sol = mat.lu().solve(&rhs)?;
    if sol.iter().any(|v| !v.is_finite() || *v < -FEASIBILITY_TOL) {
        return None;
    }
    let mut y = vec![0.0; n];
    for (c, &j) in structural.iter().enumerate() {
        y[j] = sol[c].max(0.0);
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_upper_bound() {
        let mut lp = LinearProgram::new(vec![-1.0]);
        lp.constrain(vec![1.0], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 1.0).abs() < 1e-12);
        assert!((sol.objective_value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_variable_covering() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.constrain(vec![1.0, 2.0], Relation::Ge, 2.0);
        lp.constrain(vec![2.0, 1.0], Relation::Ge, 2.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((sol.x[1] - 2.0 / 3.0).abs() < 1e-12);
        assert!((sol.objective_value - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn shadow_prices() {
        // Same covering program: both constraints bind with multiplier 1/3.
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.constrain(vec![1.0, 2.0], Relation::Ge, 2.0);
        lp.constrain(vec![2.0, 1.0], Relation::Ge, 2.0);
        lp.constrain(vec![1.0, 1.0], Relation::Le, 10.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.duals[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((sol.duals[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!(sol.duals[2].abs() < 1e-12);

        // Equality row: minimize x + 2y, x + y = 3.
        let mut lp = LinearProgram::new(vec![1.0, 2.0]);
        lp.constrain(vec![1.0, 1.0], Relation::Eq, 3.0);
        let sol = solve_lp(&lp).unwrap();
        assert!((sol.duals[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut lp = LinearProgram::new(vec![1.0]);
        lp.constrain(vec![1.0], Relation::Ge, 1.0);
        lp.constrain(vec![1.0], Relation::Le, 0.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut lp = LinearProgram::new(vec![-1.0, 0.0]);
        lp.constrain(vec![1.0, -1.0], Relation::Le, 1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_reflected_variables() {
        // minimize x - y with x free, y <= 3 (no lower bound), x + y >= -2, x >= y - 10; optimum -8 at (-5, 3)
        let mut lp = LinearProgram::new(vec![1.0, -1.0]);
        lp.set_bounds(0, f64::NEG_INFINITY, f64::INFINITY);
        lp.set_bounds(1, f64::NEG_INFINITY, 3.0);
        lp.constrain(vec![1.0, 1.0], Relation::Ge, -2.0);
        lp.constrain(vec![1.0, -1.0], Relation::Ge, -10.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value + 8.0).abs() < 1e-10);
        assert!(sol.max_constraint_violation <= 1e-12);
    }

    #[test]
    fn equality_and_boxed() {
        // minimize -x - 2y, x + y = 4, 1 <= x <= 3, 0 <= y <= 2
        let mut lp = LinearProgram::new(vec![-1.0, -2.0]);
        lp.set_bounds(0, 1.0, 3.0);
        lp.set_bounds(1, 0.0, 2.0);
        lp.constrain(vec![1.0, 1.0], Relation::Eq, 4.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.x[0] - 2.0).abs() < 1e-12 && (sol.x[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn no_variables() {
        let mut lp = LinearProgram::new(vec![]);
        lp.constrain(vec![], Relation::Le, -1.0);
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);
        let mut lp = LinearProgram::new(vec![]);
        lp.constrain(vec![], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective_value, 0.0);
    }

    #[test]
    fn structural_errors() {
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.constrain(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve_lp(&lp), Err(LpError::DimensionMismatch { .. })));

        let mut lp = LinearProgram::new(vec![1.0]);
        lp.set_bounds(0, 2.0, 1.0);
        assert_eq!(solve_lp(&lp), Err(LpError::InvalidBounds(0)));

        let lp = LinearProgram::new(vec![f64::NAN]);
        assert!(matches!(solve_lp(&lp), Err(LpError::NonFinite(_))));
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook Dantzig rule.
        let mut lp = LinearProgram::new(vec![-0.75, 150.0, -0.02, 6.0]);
        lp.constrain(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.constrain(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.constrain(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!((sol.objective_value + 0.05).abs() < 1e-10);
    }
}
