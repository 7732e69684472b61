//! Exact two-phase simplex over the rationals.
//!
//! Dense tableau, Bland's rule for both entering and leaving choices, so the
//! method terminates on degenerate problems. Intended for the small programs
//! that arise on coalition lattices, not for large sparse models.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Optimal point in the original variables; `None` unless optimal.
    pub point: Option<Vec<Rational>>,
    pub value: Option<Rational>,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub row: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `optimise c·x` subject to linear rows and per-variable bounds.
/// Variables default to `x ≥ 0` with no upper bound.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    sense: Sense,
    objective: Vec<Rational>,
    lower: Vec<Option<Rational>>,
    upper: Vec<Option<Rational>>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            num_vars,
            sense,
            objective: vec![Rational::zero(); num_vars],
            lower: vec![Some(Rational::zero()); num_vars],
            upper: vec![None; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_objective(&mut self, coeffs: Vec<Rational>) {
        assert_eq!(coeffs.len(), self.num_vars, "objective length");
        self.objective = coeffs;
    }

    pub fn set_objective_coeff(&mut self, k: usize, value: Rational) {
        self.objective[k] = value;
    }

    pub fn set_free(&mut self, k: usize) {
        self.lower[k] = None;
        self.upper[k] = None;
    }

    pub fn set_lower(&mut self, k: usize, bound: Option<Rational>) {
        self.lower[k] = bound;
    }

    pub fn set_upper(&mut self, k: usize, bound: Option<Rational>) {
        self.upper[k] = bound;
    }

    pub fn add_constraint(&mut self, row: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(row.len(), self.num_vars, "constraint length");
        self.constraints.push(Constraint { row, relation, rhs });
    }

    pub fn add_le(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.add_constraint(row, Relation::Le, rhs);
    }

    pub fn add_ge(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.add_constraint(row, Relation::Ge, rhs);
    }

    pub fn add_eq(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.add_constraint(row, Relation::Eq, rhs);
    }

    pub fn solve(&self) -> LpOutcome {
        solve_lp(self)
    }
}

/// How an original variable is expressed through nonnegative columns.
enum VarMap {
    /// `x = offset + y`
    Shift { col: usize, offset: Rational },
    /// `x = offset - y`
    Mirror { col: usize, offset: Rational },
    /// `x = y⁺ - y⁻`
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs; the last entry is minus the current objective value.
    obj: Vec<Rational>,
    width: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let mut obj = costs.to_vec();
        obj.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(&self.rows[i]) {
                *o -= cb * a;
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (v, pv) in self.obj.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn run(&mut self, allowed: &[bool]) -> Step {
        loop {
            let Some(enter) = (0..self.width).find(|&j| allowed[j] && self.obj[j].is_negative())
            else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return Step::Unbounded,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars;
    let mut maps = Vec::with_capacity(n);
    let mut cols = 0usize;
    // Extra rows `y ≤ u - l` for doubly bounded variables.
    let mut bound_rows: Vec<(usize, Rational)> = Vec::new();
    for k in 0..n {
        match (&lp.lower[k], &lp.upper[k]) {
            (Some(l), u) => {
                if let Some(u) = u {
                    if u < l {
                        return infeasible();
                    }
                    bound_rows.push((cols, u - l));
                }
                maps.push(VarMap::Shift { col: cols, offset: l.clone() });
                cols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Mirror { col: cols, offset: u.clone() });
                cols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: cols, neg: cols + 1 });
                cols += 2;
            }
        }
    }
    let structural = cols;

    // Rows over the structural columns, after substitution.
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![Rational::zero(); structural];
        let mut rhs = c.rhs.clone();
        for (k, a) in c.row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[k] {
                VarMap::Shift { col, offset } => {
                    row[*col] += a;
                    rhs -= a * offset;
                }
                VarMap::Mirror { col, offset } => {
                    row[*col] -= a;
                    rhs -= a * offset;
                }
                VarMap::Split { pos, neg } => {
                    row[*pos] += a;
                    row[*neg] -= a;
                }
            }
        }
        rows.push((row, c.relation, rhs));
    }
    for (col, cap) in bound_rows {
        let mut row = vec![Rational::zero(); structural];
        row[col] = Rational::one();
        rows.push((row, Relation::Le, cap));
    }

    let mut costs = vec![Rational::zero(); structural];
    for (k, c) in lp.objective.iter().enumerate() {
        let c = match lp.sense {
            Sense::Minimize => c.clone(),
            Sense::Maximize => -c.clone(),
        };
        match &maps[k] {
            VarMap::Shift { col, .. } => costs[*col] += &c,
            VarMap::Mirror { col, .. } => costs[*col] -= &c,
            VarMap::Split { pos, neg } => {
                costs[*pos] += &c;
                costs[*neg] -= &c;
            }
        }
    }
    let offset_value: Rational = lp
        .objective
        .iter()
        .zip(&maps)
        .map(|(c, m)| match m {
            VarMap::Shift { offset, .. } | VarMap::Mirror { offset, .. } => c * offset,
            VarMap::Split { .. } => Rational::zero(),
        })
        .sum();

    // Slacks for inequalities, then artificials where no slack can start basic.
    let m = rows.len();
    let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let mut needs_artificial = Vec::with_capacity(m);
    for (_, rel, rhs) in &rows {
        let slack_basic = match rel {
            Relation::Le => !rhs.is_negative(),
            Relation::Ge => !rhs.is_positive(),
            Relation::Eq => false,
        };
        needs_artificial.push(!slack_basic);
    }
    let artificials = needs_artificial.iter().filter(|&&b| b).count();
    let width = structural + slacks + artificials;

    let mut tab_rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_slack = structural;
    let mut next_art = structural + slacks;
    for (i, (row, rel, rhs)) in rows.into_iter().enumerate() {
        let mut full = row;
        full.resize(width + 1, Rational::zero());
        let mut slack_col = None;
        match rel {
            Relation::Le => {
                full[next_slack] = Rational::one();
                slack_col = Some(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                full[next_slack] = -Rational::one();
                slack_col = Some(next_slack);
                next_slack += 1;
            }
            Relation::Eq => {}
        }
        full[width] = rhs;
        let flip = if needs_artificial[i] {
            full[width].is_negative()
        } else {
            // The starting basic slack must carry coefficient +1.
            rel == Relation::Ge
        };
        if flip {
            for v in full.iter_mut() {
                *v = -v.clone();
            }
        }
        if needs_artificial[i] {
            full[next_art] = Rational::one();
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(slack_col.expect("slack-basic row has a slack"));
        }
        tab_rows.push(full);
    }

    let mut tab = Tableau {
        rows: tab_rows,
        basis,
        obj: Vec::new(),
        width,
    };
    let is_art = |j: usize| j >= structural + slacks && j < width;

    if artificials > 0 {
        let phase1: Vec<Rational> = (0..width)
            .map(|j| if is_art(j) { Rational::one() } else { Rational::zero() })
            .collect();
        tab.set_costs(&phase1);
        let all = vec![true; width];
        if let Step::Unbounded = tab.run(&all) {
            unreachable!("phase one is bounded below by zero");
        }
        if !tab.obj[width].is_zero() {
            return infeasible();
        }
        // Drive artificials out of the basis; rows where that fails are redundant.
        let mut i = 0;
        while i < tab.rows.len() {
            if is_art(tab.basis[i]) {
                if let Some(j) = (0..structural + slacks).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, j);
                } else {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
    }

    let mut phase2 = costs;
    phase2.resize(width, Rational::zero());
    tab.set_costs(&phase2);
    let allowed: Vec<bool> = (0..width).map(|j| !is_art(j)).collect();
    if let Step::Unbounded = tab.run(&allowed) {
        return LpOutcome {
            status: LpStatus::Unbounded,
            point: None,
            value: None,
        };
    }

    let mut y = vec![Rational::zero(); width];
    for (i, &b) in tab.basis.iter().enumerate() {
        y[b] = tab.rhs(i).clone();
    }
    let point: Vec<Rational> = maps
        .iter()
        .map(|m| match m {
            VarMap::Shift { col, offset } => offset + &y[*col],
            VarMap::Mirror { col, offset } => offset - &y[*col],
            VarMap::Split { pos, neg } => &y[*pos] - &y[*neg],
        })
        .collect();
    let value: Rational = lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    debug_assert_eq!(
        {
            let internal = -tab.obj[width].clone();
            match lp.sense {
                Sense::Minimize => internal + offset_value,
                Sense::Maximize => offset_value - internal,
            }
        },
        value
    );
    LpOutcome {
        status: LpStatus::Optimal,
        point: Some(point),
        value: Some(value),
    }
}

fn infeasible() -> LpOutcome {
    LpOutcome {
        status: LpStatus::Infeasible,
        point: None,
        value: None,
    }
}

/// True when `point` satisfies every row and bound of `lp` exactly.
pub fn is_feasible(lp: &LinearProgram, point: &[Rational]) -> bool {
    if point.len() != lp.num_vars {
        return false;
    }
    let bounds_ok = point.iter().enumerate().all(|(k, x)| {
        lp.lower[k].as_ref().is_none_or(|l| x >= l) && lp.upper[k].as_ref().is_none_or(|u| x <= u)
    });
    bounds_ok
        && lp.constraints.iter().all(|c| {
            let lhs: Rational = c.row.iter().zip(point).map(|(a, x)| a * x).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn maximise_single_bound() {
        let mut lp = LinearProgram::new(1, Sense::Maximize);
        lp.set_objective(vec![int(1)]);
        lp.add_le(vec![int(1)], int(3));
        let out = lp.solve();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Some(int(3)));
        assert_eq!(out.point, Some(vec![int(3)]));
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut lp = LinearProgram::new(1, Sense::Minimize);
        lp.add_ge(vec![int(1)], int(1));
        lp.add_le(vec![int(1)], int(0));
        assert_eq!(lp.solve().status, LpStatus::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(vec![int(1), int(1)]);
        lp.add_le(vec![int(1), int(-1)], int(1));
        assert_eq!(lp.solve().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_variables_go_negative() {
        let mut lp = LinearProgram::new(2, Sense::Minimize);
        lp.set_free(0);
        lp.set_free(1);
        lp.set_objective(vec![int(1), int(0)]);
        lp.add_ge(vec![int(1), int(1)], int(-4));
        lp.add_eq(vec![int(0), int(1)], frac(1, 2));
        let out = lp.solve();
        assert_eq!(out.value, Some(frac(-9, 2)));
        assert_eq!(out.point, Some(vec![frac(-9, 2), frac(1, 2)]));
    }

    #[test]
    fn shifted_and_mirrored_bounds() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_lower(0, Some(int(-2)));
        lp.set_upper(0, Some(int(5)));
        lp.set_lower(1, None);
        lp.set_upper(1, Some(int(-1)));
        lp.set_objective(vec![int(1), int(1)]);
        let out = lp.solve();
        assert_eq!(out.point, Some(vec![int(5), int(-1)]));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2, Sense::Minimize);
        lp.set_objective(vec![int(1), int(2)]);
        lp.add_eq(vec![int(1), int(1)], int(2));
        lp.add_eq(vec![int(2), int(2)], int(4));
        let out = lp.solve();
        assert_eq!(out.value, Some(int(2)));
        assert_eq!(out.point, Some(vec![int(2), int(0)]));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the textbook largest-coefficient rule.
        let mut lp = LinearProgram::new(4, Sense::Minimize);
        lp.set_objective(vec![frac(-3, 4), int(150), frac(-1, 50), int(6)]);
        lp.add_le(vec![frac(1, 4), int(-60), frac(-1, 25), int(9)], int(0));
        lp.add_le(vec![frac(1, 2), int(-90), frac(-1, 50), int(3)], int(0));
        lp.add_le(vec![int(0), int(0), int(1), int(0)], int(1));
        let out = lp.solve();
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Some(frac(-1, 20)));
    }
}
