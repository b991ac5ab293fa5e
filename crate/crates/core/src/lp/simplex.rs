use nalgebra::{DMatrix, DVector};

use super::{LinearProgram, LpError, LpSolution, LpStatus};

const PIVOT_EPS: f64 = 1e-11;
const COST_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;

/// How an original variable is expressed through nonnegative standard-form columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = lo + y
    Shift { col: usize, lo: f64 },
    /// x = hi - y
    Flip { col: usize, hi: f64 },
    /// x = y+ - y-
    Split { pos: usize, neg: usize },
}

struct StandardForm {
    maps: Vec<VarMap>,
    /// rows of `A y (<= or =) b` over the nonnegative columns
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    is_eq: Vec<bool>,
    cost: Vec<f64>,
    ncols: usize,
}

fn standardize(lp: &LinearProgram) -> StandardForm {
    let n = lp.num_vars();
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..n {
        let (lo, hi) = (lp.lower[j], lp.upper[j]);
        if lo.is_finite() {
            maps.push(VarMap::Shift { col: ncols, lo });
            if hi.is_finite() {
                upper_rows.push((ncols, hi - lo));
            }
            ncols += 1;
        } else if hi.is_finite() {
            maps.push(VarMap::Flip { col: ncols, hi });
            ncols += 1;
        } else {
            maps.push(VarMap::Split {
                pos: ncols,
                neg: ncols + 1,
            });
            ncols += 2;
        }
    }

    let translate = |coeffs: &[f64], rhs: f64| -> (Vec<f64>, f64) {
        let mut row = vec![0.0; ncols];
        let mut b = rhs;
        for (j, &a) in coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            match maps[j] {
                VarMap::Shift { col, lo } => {
                    row[col] += a;
                    b -= a * lo;
                }
                VarMap::Flip { col, hi } => {
                    row[col] -= a;
                    b -= a * hi;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += a;
                    row[neg] -= a;
                }
            }
        }
        (row, b)
    };

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut is_eq = Vec::new();
    for i in 0..lp.ineq_rhs.len() {
        let (r, b) = translate(lp.ineq_matrix.row(i), lp.ineq_rhs[i]);
        rows.push(r);
        rhs.push(b);
        is_eq.push(false);
    }
    for (col, bound) in upper_rows {
        let mut r = vec![0.0; ncols];
        r[col] = 1.0;
        rows.push(r);
        rhs.push(bound);
        is_eq.push(false);
    }
    for i in 0..lp.eq_rhs.len() {
        let (r, b) = translate(lp.eq_matrix.row(i), lp.eq_rhs[i]);
        rows.push(r);
        rhs.push(b);
        is_eq.push(true);
    }
    let (cost, _) = translate(&lp.objective, 0.0);
    StandardForm {
        maps,
        rows,
        rhs,
        is_eq,
        cost,
        ncols,
    }
}

struct Tableau {
    /// m rows of width `width + 1`; the last entry is the right-hand side
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    width: usize,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, obj: &mut [f64]) {
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f == 0.0 {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v -= f * pv;
                if v.abs() < 1e-15 {
                    *v = 0.0;
                }
            }
            row[c] = 0.0;
        }
        let f = obj[c];
        if f != 0.0 {
            for (v, pv) in obj.iter_mut().zip(&prow) {
                *v -= f * pv;
            }
            obj[c] = 0.0;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Runs simplex iterations with Bland's rule over columns where `allowed` is true.
    /// `obj` holds reduced costs and, in its last slot, minus the objective value.
    fn run(&mut self, obj: &mut [f64], allowed: &[bool]) -> Result<bool, LpError> {
        loop {
            if self.pivots >= MAX_PIVOTS {
                return Err(LpError::IterationLimit(MAX_PIVOTS));
            }
            let entering = (0..self.width).find(|&j| allowed[j] && obj[j] < -COST_EPS);
            let Some(c) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.t.iter().enumerate() {
                let a = row[c];
                if a > PIVOT_EPS {
                    let ratio = row[self.width].max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            let better = ratio < br - 1e-14
                                || ((ratio - br).abs() <= 1e-14 && self.basis[i] < self.basis[bi]);
                            if better {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match leave {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, c, obj),
            }
        }
    }
}

pub(super) fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let sf = standardize(lp);
    let m = sf.rows.len();
    let n = sf.ncols;

    // slack columns for inequality rows, then artificial columns where needed
    let slack_count = sf.is_eq.iter().filter(|e| !**e).count();
    let mut needs_art = vec![false; m];
    let mut sign = vec![1.0; m];
    for i in 0..m {
        if sf.rhs[i] < 0.0 {
            sign[i] = -1.0;
        }
        needs_art[i] = sf.is_eq[i] || sf.rhs[i] < 0.0;
    }
    let art_count = needs_art.iter().filter(|a| **a).count();
    let width = n + slack_count + art_count;

    let mut t = vec![vec![0.0; width + 1]; m];
    let mut basis = vec![usize::MAX; m];
    let mut slack = n;
    let mut art = n + slack_count;
    for i in 0..m {
        let s = sign[i];
        for j in 0..n {
            t[i][j] = s * sf.rows[i][j];
        }
        t[i][width] = s * sf.rhs[i];
        if !sf.is_eq[i] {
            t[i][slack] = s;
            if !needs_art[i] {
                basis[i] = slack;
            }
            slack += 1;
        }
        if needs_art[i] {
            t[i][art] = 1.0;
            basis[i] = art;
            art += 1;
        }
    }
    let is_art = |j: usize| j >= n + slack_count;

    let mut tab = Tableau {
        t,
        basis,
        width,
        pivots: 0,
    };

    // phase one: minimize the sum of artificials
    if art_count > 0 {
        let mut obj = vec![0.0; width + 1];
        for j in (n + slack_count)..width {
            obj[j] = 1.0;
        }
        for i in 0..m {
            if is_art(tab.basis[i]) {
                for (o, v) in obj.iter_mut().zip(&tab.t[i]) {
                    *o -= v;
                }
            }
        }
        let allowed = vec![true; width];
        tab.run(&mut obj, &allowed)?;
        let infeas = -obj[width];
        let scale = 1.0 + sf.rhs.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if infeas > 1e-9 * scale {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                point: Vec::new(),
                objective: f64::NAN,
                residual: infeas,
                pivots: tab.pivots,
            });
        }
        // drive zero-level artificials out of the basis; drop redundant rows
        let mut i = 0;
        while i < tab.t.len() {
            if is_art(tab.basis[i]) {
                let col = (0..n + slack_count)
                    .filter(|&j| tab.t[i][j].abs() > 1e-9)
                    .max_by(|&a, &b| tab.t[i][a].abs().total_cmp(&tab.t[i][b].abs()));
                match col {
                    Some(c) => {
                        let mut dummy = vec![0.0; width + 1];
                        tab.pivot(i, c, &mut dummy);
                    }
                    None => {
                        tab.t.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // phase two
    let mut cost = vec![0.0; width + 1];
    cost[..n].copy_from_slice(&sf.cost);
    let mut obj = cost.clone();
    for (i, &b) in tab.basis.iter().enumerate() {
        let cb = cost[b];
        if cb != 0.0 {
            for (o, v) in obj.iter_mut().zip(&tab.t[i]) {
                *o -= cb * v;
            }
        }
    }
    let allowed: Vec<bool> = (0..width).map(|j| !is_art(j)).collect();
    let bounded = tab.run(&mut obj, &allowed)?;
    if !bounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            point: Vec::new(),
            objective: f64::NEG_INFINITY,
            residual: 0.0,
            pivots: tab.pivots,
        });
    }

    let y = refine_basic_solution(&tab, &sf, n, slack_count)?;
    let point: Vec<f64> = sf
        .maps
        .iter()
        .map(|map| match *map {
            VarMap::Shift { col, lo } => lo + y[col],
            VarMap::Flip { col, hi } => hi - y[col],
            VarMap::Split { pos, neg } => y[pos] - y[neg],
        })
        .collect();
    let objective = crate::linalg::dot(&lp.objective, &point);
    let residual = lp.residual(&point);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        point,
        objective,
        residual,
        pivots: tab.pivots,
    })
}

/// Recomputes the basic variables from the original data of the final basis,
/// removing the rounding accumulated over the pivots.
fn refine_basic_solution(
    tab: &Tableau,
    sf: &StandardForm,
    n: usize,
    slack_count: usize,
) -> Result<Vec<f64>, LpError> {
    let mut tableau_values = vec![0.0; n + slack_count];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n + slack_count {
            tableau_values[b] = tab.t[i][tab.width];
        }
    }
    let m = sf.rows.len();
    let mut slack_of_row = vec![usize::MAX; m];
    let mut s = n;
    for i in 0..m {
        if !sf.is_eq[i] {
            slack_of_row[i] = s;
            s += 1;
        }
    }
    let column = |j: usize| -> Vec<f64> {
        (0..m)
            .map(|i| {
                if j < n {
                    sf.rows[i][j]
                } else if slack_of_row[i] == j {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    };
    let basic: Vec<usize> = tab
        .basis
        .iter()
        .copied()
        .filter(|&b| b < n + slack_count)
        .collect();
    if m == 0 {
        return Ok(tableau_values);
    }
    if basic.len() != m {
        // rows were dropped as redundant; use the least-squares solve of the full system
        return Ok(least_squares_refine(sf, &column, &basic, m).unwrap_or(tableau_values));
    }
    let mut bmat = DMatrix::<f64>::zeros(m, m);
    for (k, &j) in basic.iter().enumerate() {
        for (i, v) in column(j).into_iter().enumerate() {
            bmat[(i, k)] = v;
        }
    }
    let rhs = DVector::from_column_slice(&sf.rhs);
    let Some(xb) = bmat.lu().solve(&rhs) else {
        return Err(LpError::Singular(format!(
            "final basis of size {m} could not be factorized"
        )));
    };
    let mut y = vec![0.0; n + slack_count];
    for (k, &j) in basic.iter().enumerate() {
        y[j] = xb[k];
    }
    // fall back to tableau values if refinement disagrees wildly (ill-conditioned basis)
    let drift = y
        .iter()
        .zip(&tableau_values)
        .fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
    if !drift.is_finite() || drift > 1e-6 * (1.0 + tableau_values.iter().fold(0.0f64, |a, v| a.max(v.abs())))
    {
        return Ok(tableau_values);
    }
    Ok(y)
}

fn least_squares_refine(
    sf: &StandardForm,
    column: &dyn Fn(usize) -> Vec<f64>,
    basic: &[usize],
    m: usize,
) -> Option<Vec<f64>> {
    let k = basic.len();
    let mut bmat = DMatrix::<f64>::zeros(m, k);
    for (c, &j) in basic.iter().enumerate() {
        for (i, v) in column(j).into_iter().enumerate() {
            bmat[(i, c)] = v;
        }
    }
    let rhs = DVector::from_column_slice(&sf.rhs);
    let xb = bmat.svd(true, true).solve(&rhs, 1e-12).ok()?;
    let ncols = sf.ncols + sf.is_eq.iter().filter(|e| !**e).count();
    let mut y = vec![0.0; ncols];
    for (c, &j) in basic.iter().enumerate() {
        y[j] = xb[c];
    }
    Some(y)
}
