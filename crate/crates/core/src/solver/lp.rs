//! Dense two-phase simplex for small linear programs.
//!
//! Variables are nonnegative, with optional finite upper bounds. Pivoting
//! follows Bland's rule, so degenerate problems terminate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex iteration limit {limit} reached")]
    IterationLimit { limit: usize },
    #[error("malformed linear program: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<f64>,
    pub kind: RowKind,
    pub rhs: f64,
}

impl LpRow {
    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, kind: RowKind::Le, rhs }
    }

    pub fn ge(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, kind: RowKind::Ge, rhs }
    }

    pub fn eq(coeffs: Vec<f64>, rhs: f64) -> Self {
        Self { coeffs, kind: RowKind::Eq, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub rows: Vec<LpRow>,
    /// Per-variable upper bounds; `f64::INFINITY` for none.
    pub upper: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    /// `d value / d rhs` for each row, in the problem's own sense.
    pub duals: Vec<f64>,
    pub pivots: usize,
}

struct Tableau {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
    limit: usize,
}

const PIVOT_TOL: f64 = 1e-11;

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        for v in self.a[r].iter_mut() {
            *v /= p;
        }
        self.b[r] /= p;
        let (prow, brow) = (self.a[r].clone(), self.b[r]);
        for i in 0..self.a.len() {
            if i == r {
                continue;
            }
            let f = self.a[i][c];
            if f == 0.0 {
                continue;
            }
            for (v, pv) in self.a[i].iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            self.a[i][c] = 0.0;
            self.b[i] -= f * brow;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    fn reduced_cost(&self, cost: &[f64], j: usize) -> f64 {
        let mut r = cost[j];
        for (i, &bi) in self.basis.iter().enumerate() {
            r -= cost[bi] * self.a[i][j];
        }
        r
    }

    /// Minimizes `cost . x` over the current basis with Bland's rule.
    fn run(&mut self, cost: &[f64], allowed: &[bool], tol: f64) -> Result<(), LpError> {
        let ncols = cost.len();
        loop {
            if self.pivots >= self.limit {
                return Err(LpError::IterationLimit { limit: self.limit });
            }
            let entering = (0..ncols)
                .find(|&j| allowed[j] && !self.basis.contains(&j) && self.reduced_cost(cost, j) < -tol);
            let Some(c) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.a.len() {
                let aij = self.a[i][c];
                if aij <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.b[i].max(0.0) / aij;
                best = match best {
                    None => Some((i, ratio)),
                    Some((k, rk)) => {
                        let tie = (ratio - rk).abs() <= 1e-12 * (1.0 + rk.abs());
                        if ratio < rk && !tie || tie && self.basis[i] < self.basis[k] {
                            Some((i, ratio))
                        } else {
                            Some((k, rk))
                        }
                    }
                };
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Err(LpError::Unbounded),
            }
        }
    }
}

/// Solves `problem`; `tol` is the reduced-cost and feasibility tolerance.
pub fn dense_lp(problem: &LpProblem, tol: f64) -> Result<LpSolution, LpError> {
    let n = problem.objective.len();
    if n == 0 {
        return Err(LpError::Shape("no variables".into()));
    }
    if problem.objective.iter().any(|c| !c.is_finite()) {
        return Err(LpError::Shape("non-finite objective".into()));
    }
    let mut rows = problem.rows.clone();
    let user_rows = rows.len();
    for (k, r) in rows.iter().enumerate() {
        if r.coeffs.len() != n {
            return Err(LpError::Shape(format!(
                "row {k} has {} coefficients, expected {n}",
                r.coeffs.len()
            )));
        }
        if !r.rhs.is_finite() || r.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Shape(format!("row {k} is not finite")));
        }
    }
    if let Some(upper) = &problem.upper {
        if upper.len() != n {
            return Err(LpError::Shape("upper bound length".into()));
        }
        for (j, &u) in upper.iter().enumerate() {
            if u.is_nan() || u < 0.0 {
                return Err(LpError::Shape(format!("upper bound {j} is {u}")));
            }
            if u.is_finite() {
                let mut coeffs = vec![0.0; n];
                coeffs[j] = 1.0;
                rows.push(LpRow::le(coeffs, u));
            }
        }
    }

    // Normalize to b >= 0; `flip[i]` remembers the sign change for the duals.
    let m = rows.len();
    let mut flip = vec![1.0; m];
    for (i, r) in rows.iter_mut().enumerate() {
        if r.rhs < 0.0 {
            flip[i] = -1.0;
            r.rhs = -r.rhs;
            r.coeffs.iter_mut().for_each(|c| *c = -*c);
            r.kind = match r.kind {
                RowKind::Le => RowKind::Ge,
                RowKind::Ge => RowKind::Le,
                RowKind::Eq => RowKind::Eq,
            };
        }
    }

    // Columns: structural, one slack/surplus per inequality, one artificial
    // per Ge/Eq row. `unit_col[i]` is a column that started as +e_i.
    let n_slack = rows.iter().filter(|r| r.kind != RowKind::Eq).count();
    let n_art = rows.iter().filter(|r| r.kind != RowKind::Le).count();
    let ncols = n + n_slack + n_art;
    let mut a = vec![vec![0.0; ncols]; m];
    let mut b = vec![0.0; m];
    let mut basis = vec![0; m];
    let mut unit_col = vec![0; m];
    let mut is_art = vec![false; ncols];
    let (mut s, mut t) = (n, n + n_slack);
    for (i, r) in rows.iter().enumerate() {
        a[i][..n].copy_from_slice(&r.coeffs);
        b[i] = r.rhs;
        match r.kind {
            RowKind::Le => {
                a[i][s] = 1.0;
                basis[i] = s;
                unit_col[i] = s;
                s += 1;
            }
            RowKind::Ge => {
                a[i][s] = -1.0;
                s += 1;
                a[i][t] = 1.0;
                is_art[t] = true;
                basis[i] = t;
                unit_col[i] = t;
                t += 1;
            }
            RowKind::Eq => {
                a[i][t] = 1.0;
                is_art[t] = true;
                basis[i] = t;
                unit_col[i] = t;
                t += 1;
            }
        }
    }
    let mut tab = Tableau {
        a,
        b,
        basis,
        pivots: 0,
        limit: 10_000 + 50 * (m + ncols),
    };

    let scale = 1.0 + tab.b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if n_art > 0 {
        let cost: Vec<f64> = is_art.iter().map(|&x| if x { 1.0 } else { 0.0 }).collect();
        let allowed = vec![true; ncols];
        tab.run(&cost, &allowed, tol)?;
        let infeas: f64 = (0..m)
            .filter(|&i| is_art[tab.basis[i]])
            .map(|i| tab.b[i])
            .sum();
        if infeas > tol * scale {
            return Err(LpError::Infeasible);
        }
        // Drive zero-level artificials out of the basis where possible.
        for i in 0..m {
            if !is_art[tab.basis[i]] {
                continue;
            }
            if let Some(j) = (0..ncols).find(|&j| !is_art[j] && tab.a[i][j].abs() > 1e-9) {
                tab.pivot(i, j);
            }
        }
    }

    let sign = match problem.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut cost = vec![0.0; ncols];
    for (c, o) in cost.iter_mut().zip(&problem.objective) {
        *c = sign * o;
    }
    let allowed: Vec<bool> = is_art.iter().map(|x| !x).collect();
    tab.run(&cost, &allowed, tol)?;

    let mut x = vec![0.0; n];
    for (i, &bi) in tab.basis.iter().enumerate() {
        if bi < n {
            x[bi] = tab.b[i].max(0.0);
        }
    }
    let value = problem.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    let duals = (0..user_rows)
        .map(|i| {
            let y: f64 = tab
                .basis
                .iter()
                .enumerate()
                .map(|(k, &bk)| cost[bk] * tab.a[k][unit_col[i]])
                .sum();
            sign * flip[i] * y
        })
        .collect();
    Ok(LpSolution {
        x,
        value,
        duals,
        pivots: tab.pivots,
    })
}
