//! Exact linear programming over arbitrary-precision rationals.
//!
//! A dense two-phase simplex with Bland's rule: small, exact, and immune to
//! cycling.  Problem sizes here are tiny (tens of variables), so clarity wins
//! over sparsity.  On top of the solver sit the two cone queries used by
//! support classification: membership and relative-interior membership.

use num::{One, Signed, Zero};

use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Le,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn eq(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, rel: Rel::Eq, rhs }
    }
    pub fn le(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, rel: Rel::Le, rhs }
    }
    pub fn ge(coeffs: Vec<Rat>, rhs: Rat) -> Self {
        Constraint { coeffs, rel: Rel::Ge, rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rat, point: Vec<Rat> },
}

enum LoopEnd {
    Optimal,
    Unbounded,
}

fn pivot(t: &mut [Vec<Rat>], basis: &mut [usize], row: usize, col: usize) {
    let inv = t[row][col].clone();
    for x in t[row].iter_mut() {
        *x = &*x / &inv;
    }
    for i in 0..t.len() {
        if i == row || t[i][col].is_zero() {
            continue;
        }
        let factor = t[i][col].clone();
        for j in 0..t[i].len() {
            let delta = &factor * &t[row][j];
            t[i][j] = &t[i][j] - &delta;
        }
    }
    basis[row] = col;
}

/// Runs simplex iterations until optimality or unboundedness.  `width` is
/// the number of variable columns (the rhs sits at index `width`).
fn simplex_loop(t: &mut [Vec<Rat>], basis: &mut [usize], cost: &[Rat], width: usize) -> LoopEnd {
    loop {
        // Reduced costs, entering column by Bland's rule.
        let mut enter = None;
        for j in 0..width {
            let mut r = cost[j].clone();
            for (i, &b) in basis.iter().enumerate() {
                if !cost[b].is_zero() {
                    r -= &cost[b] * &t[i][j];
                }
            }
            if r.is_positive() {
                enter = Some(j);
                break;
            }
        }
        let Some(col) = enter else {
            return LoopEnd::Optimal;
        };
        // Ratio test, ties by smallest basic index (Bland).
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..t.len() {
            if !t[i][col].is_positive() {
                continue;
            }
            let ratio = &t[i][width] / &t[i][col];
            match &leave {
                None => leave = Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                        leave = Some((i, ratio));
                    }
                }
            }
        }
        let Some((row, _)) = leave else {
            return LoopEnd::Unbounded;
        };
        pivot(t, basis, row, col);
    }
}

fn objective_value(t: &[Vec<Rat>], basis: &[usize], cost: &[Rat], width: usize) -> Rat {
    let mut v = Rat::zero();
    for (i, &b) in basis.iter().enumerate() {
        if !cost[b].is_zero() {
            v += &cost[b] * &t[i][width];
        }
    }
    v
}

/// Maximizes `objective . x` over `x >= 0` subject to the constraints.
pub fn maximize(objective: &[Rat], constraints: &[Constraint]) -> Outcome {
    let n = objective.len();
    let mut prepared: Vec<(Vec<Rat>, Rel, Rat)> = Vec::with_capacity(constraints.len());
    for c in constraints {
        debug_assert_eq!(c.coeffs.len(), n);
        if c.rhs.is_negative() {
            let coeffs = c.coeffs.iter().map(|x| -x.clone()).collect();
            let rel = match c.rel {
                Rel::Le => Rel::Ge,
                Rel::Ge => Rel::Le,
                Rel::Eq => Rel::Eq,
            };
            prepared.push((coeffs, rel, -c.rhs.clone()));
        } else {
            prepared.push((c.coeffs.clone(), c.rel, c.rhs.clone()));
        }
    }
    let m = prepared.len();
    let n_slack = prepared.iter().filter(|r| r.1 != Rel::Eq).count();
    let n_art = prepared.iter().filter(|r| r.1 != Rel::Le).count();
    let art_start = n + n_slack;
    let total = art_start + n_art;

    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    let (mut si, mut ai) = (0usize, 0usize);
    for (ri, (coeffs, rel, rhs)) in prepared.into_iter().enumerate() {
        let mut row = vec![Rat::zero(); total + 1];
        row[..n].clone_from_slice(&coeffs);
        row[total] = rhs;
        match rel {
            Rel::Le => {
                row[n + si] = Rat::one();
                basis[ri] = n + si;
                si += 1;
            }
            Rel::Ge => {
                row[n + si] = -Rat::one();
                si += 1;
                row[art_start + ai] = Rat::one();
                basis[ri] = art_start + ai;
                ai += 1;
            }
            Rel::Eq => {
                row[art_start + ai] = Rat::one();
                basis[ri] = art_start + ai;
                ai += 1;
            }
        }
        t.push(row);
    }

    if n_art > 0 {
        let mut cost = vec![Rat::zero(); total];
        for c in cost.iter_mut().take(total).skip(art_start) {
            *c = -Rat::one();
        }
        match simplex_loop(&mut t, &mut basis, &cost, total) {
            // Phase 1 is bounded above by 0; unboundedness cannot occur.
            LoopEnd::Unbounded => return Outcome::Infeasible,
            LoopEnd::Optimal => {}
        }
        if objective_value(&t, &basis, &cost, total).is_negative() {
            return Outcome::Infeasible;
        }
        // Pivot remaining zero-valued artificials out; drop redundant rows.
        let mut i = 0;
        while i < t.len() {
            if basis[i] >= art_start {
                let col = (0..art_start).find(|&j| !t[i][j].is_zero());
                match col {
                    Some(j) => {
                        pivot(&mut t, &mut basis, i, j);
                        i += 1;
                    }
                    None => {
                        t.remove(i);
                        basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        for row in &mut t {
            row.drain(art_start..total);
        }
    }

    let width = art_start;
    let mut cost = vec![Rat::zero(); width];
    cost[..n].clone_from_slice(objective);
    match simplex_loop(&mut t, &mut basis, &cost, width) {
        LoopEnd::Unbounded => return Outcome::Unbounded,
        LoopEnd::Optimal => {}
    }
    let value = objective_value(&t, &basis, &cost, width);
    let mut point = vec![Rat::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            point[b] = t[i][width].clone();
        }
    }
    Outcome::Optimal { value, point }
}

/// A feasible point of the constraint system over `x >= 0`, if any.
pub fn feasible_point(n_vars: usize, constraints: &[Constraint]) -> Option<Vec<Rat>> {
    match maximize(&vec![Rat::zero(); n_vars], constraints) {
        Outcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

/// Nonnegative coefficients expressing `target` in the given generators,
/// or `None` when `target` lies outside the rational cone they span.
pub fn cone_membership(gens: &[Vec<i64>], target: &[i64]) -> Option<Vec<Rat>> {
    if gens.is_empty() {
        return if target.iter().all(|&x| x == 0) {
            Some(Vec::new())
        } else {
            None
        };
    }
    let dim = target.len();
    let constraints: Vec<Constraint> = (0..dim)
        .map(|d| {
            Constraint::eq(
                gens.iter().map(|g| crate::rat::rint(g[d])).collect(),
                crate::rat::rint(target[d]),
            )
        })
        .collect();
    feasible_point(gens.len(), &constraints)
}

pub fn cone_contains(gens: &[Vec<i64>], target: &[i64]) -> bool {
    cone_membership(gens, target).is_some()
}

/// Whether `target` lies in the relative interior of the cone: equivalently,
/// whether it is a strictly positive combination of all generators.
pub fn cone_relint_contains(gens: &[Vec<i64>], target: &[i64]) -> bool {
    if gens.is_empty() {
        return target.iter().all(|&x| x == 0);
    }
    let m = gens.len();
    let dim = target.len();
    // Variables: lambda_1..lambda_m, then t.  Maximize t subject to
    // G lambda = target, lambda_j - t >= 0, t <= 1.
    let mut constraints = Vec::new();
    for d in 0..dim {
        let mut coeffs: Vec<Rat> = gens.iter().map(|g| crate::rat::rint(g[d])).collect();
        coeffs.push(Rat::zero());
        constraints.push(Constraint::eq(coeffs, crate::rat::rint(target[d])));
    }
    for j in 0..m {
        let mut coeffs = vec![Rat::zero(); m + 1];
        coeffs[j] = Rat::one();
        coeffs[m] = -Rat::one();
        constraints.push(Constraint::ge(coeffs, Rat::zero()));
    }
    let mut cap = vec![Rat::zero(); m + 1];
    cap[m] = Rat::one();
    constraints.push(Constraint::le(cap, Rat::one()));
    let mut objective = vec![Rat::zero(); m + 1];
    objective[m] = Rat::one();
    matches!(maximize(&objective, &constraints),
        Outcome::Optimal { value, .. } if value.is_positive())
}

/// Unique exact solution of `A x = b`; `None` when the system is
/// inconsistent or does not determine `x` uniquely.
pub fn gauss_solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut rank = 0usize;
    let mut pivot_cols = Vec::new();
    for col in 0..n {
        let Some(pr) = (rank..m).find(|&i| !aug[i][col].is_zero()) else {
            continue;
        };
        aug.swap(rank, pr);
        let inv = aug[rank][col].clone();
        for x in aug[rank].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..m {
            if i == rank || aug[i][col].is_zero() {
                continue;
            }
            let f = aug[i][col].clone();
            for j in 0..=n {
                let delta = &f * &aug[rank][j];
                aug[i][j] = &aug[i][j] - &delta;
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == m {
            break;
        }
    }
    for row in aug.iter().skip(rank) {
        if !row[n].is_zero() {
            return None;
        }
    }
    if rank < n {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &col) in pivot_cols.iter().enumerate() {
        x[col] = aug[i][n].clone();
    }
    Some(x)
}

/// Rank over Q of a rational matrix.
pub fn rank_rat(rows: &[Vec<Rat>]) -> usize {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a = rows.to_vec();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pr) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = a[rank][col].clone();
        for x in a[rank].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..m {
            if i == rank || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..n {
                let delta = &f * &a[rank][j];
                a[i][j] = &a[i][j] - &delta;
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}
