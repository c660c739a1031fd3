//! Small exact linear algebra over the rationals: Gaussian elimination,
//! affine subspace parameterizations, orthogonal projections and a
//! Fourier-Motzkin feasibility solver that returns interior witness points.

use crate::rational::{dot, sub, QVec, Rat};
use num_traits::{One, Signed, Zero};

/// Row-reduces `m` in place and returns the pivot columns.
fn row_reduce(m: &mut Vec<QVec>) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for c2 in 0..cols {
                    let t = &m[r][c2] * &f;
                    m[i][c2] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Rank of the matrix given by `rows`.
pub fn rank(rows: &[QVec]) -> usize {
    let mut m: Vec<QVec> = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Solution set of `A x = b` as `(particular, nullspace basis)`,
/// or `None` when the system is inconsistent.
pub fn solve_affine(a: &[QVec], b: &[Rat]) -> Option<(QVec, Vec<QVec>)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    if rows == 0 {
        let dim = cols;
        let mut basis = Vec::new();
        for j in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[j] = Rat::one();
            basis.push(e);
        }
        return Some((vec![Rat::zero(); dim], basis));
    }
    let mut m: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut m);
    // Inconsistent if a pivot lands in the augmented column.
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut particular = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = m[r][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &f in &free {
        let mut v = vec![Rat::zero(); cols];
        v[f] = Rat::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][f].clone();
        }
        basis.push(v);
    }
    Some((particular, basis))
}

/// Solves the square-ish system `A x = b` expecting a unique solution.
pub fn solve_unique(a: &[QVec], b: &[Rat]) -> Option<QVec> {
    let (p, basis) = solve_affine(a, b)?;
    if basis.is_empty() {
        Some(p)
    } else {
        None
    }
}

/// Orthogonal projection of `x` onto the affine subspace `{ y : A y = b }`.
///
/// Returns `None` when the subspace is empty. The projection is computed
/// through the normal equations `A A^T lambda = b - A x`, using only the
/// independent rows of `A`.
pub fn project_affine(a: &[QVec], b: &[Rat], x: &[Rat]) -> Option<QVec> {
    if a.is_empty() {
        return Some(x.to_vec());
    }
    // Keep an independent subset of the rows (with matching rhs).
    let mut aug: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    let cols = a[0].len();
    if pivots.last() == Some(&cols) {
        return None; // inconsistent: empty subspace
    }
    let ind_rows: Vec<QVec> = aug[..pivots.len()].iter().map(|r| r[..cols].to_vec()).collect();
    let ind_rhs: Vec<Rat> = aug[..pivots.len()].iter().map(|r| r[cols].clone()).collect();

    let k = ind_rows.len();
    let mut gram = vec![vec![Rat::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = dot(&ind_rows[i], &ind_rows[j]);
        }
    }
    let rhs: Vec<Rat> = (0..k).map(|i| &ind_rhs[i] - dot(&ind_rows[i], x)).collect();
    let lambda = solve_unique(&gram, &rhs)?;
    let mut y = x.to_vec();
    for i in 0..k {
        for c in 0..cols {
            y[c] += &lambda[i] * &ind_rows[i][c];
        }
    }
    Some(y)
}

/// A linear constraint `coeffs . u (rel) rhs` in the feasibility solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    /// strict `<`
    Lt,
    /// strict `>`
    Gt,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: QVec,
    pub rhs: Rat,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(coeffs: QVec, rel: Rel, rhs: Rat) -> Self {
        Constraint { coeffs, rhs, rel }
    }
}

/// Finds a rational point satisfying all constraints, or `None` if the
/// system is infeasible. Equalities are eliminated by substitution and the
/// strict inequalities by Fourier-Motzkin; a witness is reconstructed by
/// back-substitution, picking interval midpoints.
pub fn feasible_point(constraints: &[Constraint], dim: usize) -> Option<QVec> {
    // Substitute out the equalities first.
    let eqs: Vec<&Constraint> = constraints.iter().filter(|c| c.rel == Rel::Eq).collect();
    let (origin, basis) = if eqs.is_empty() {
        let mut basis = Vec::new();
        for j in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[j] = Rat::one();
            basis.push(e);
        }
        (vec![Rat::zero(); dim], basis)
    } else {
        let eq_rows: Vec<QVec> = eqs.iter().map(|c| c.coeffs.clone()).collect();
        let eq_rhs: Vec<Rat> = eqs.iter().map(|c| c.rhs.clone()).collect();
        solve_affine(&eq_rows, &eq_rhs)?
    };
    debug_assert_eq!(origin.len(), dim);

    // Rewrite the strict constraints in the coordinates of the solution space.
    let k = basis.len();
    let mut strict: Vec<(QVec, Rat, bool)> = Vec::new(); // (coeffs, rhs, is_lt) meaning c.u < rhs / c.u > rhs
    for c in constraints {
        if c.rel == Rel::Eq {
            continue;
        }
        let shift = dot(&c.coeffs, &origin);
        let coeffs: QVec = basis.iter().map(|v| dot(&c.coeffs, v)).collect();
        let rhs = &c.rhs - shift;
        let lt = c.rel == Rel::Lt;
        if coeffs.iter().all(|x| x.is_zero()) {
            let ok = if lt { Rat::zero() < rhs } else { Rat::zero() > rhs };
            if !ok {
                return None;
            }
            continue;
        }
        strict.push((coeffs, rhs, lt));
    }

    let u = fm_feasible(strict, k)?;
    // Map back: x = origin + sum u_i basis_i
    let mut x = origin;
    for (ui, v) in u.iter().zip(&basis) {
        for c in 0..x.len() {
            x[c] += ui * &v[c];
        }
    }
    Some(x)
}

/// Fourier-Motzkin on strict inequalities only; returns a witness.
fn fm_feasible(mut sys: Vec<(QVec, Rat, bool)>, dim: usize) -> Option<QVec> {
    if dim == 0 {
        for (_, rhs, lt) in &sys {
            let ok = if *lt { Rat::zero() < *rhs } else { Rat::zero() > *rhs };
            if !ok {
                return None;
            }
        }
        return Some(vec![]);
    }
    // Normalize everything to `c . u < rhs`.
    for (c, rhs, lt) in sys.iter_mut() {
        if !*lt {
            for x in c.iter_mut() {
                *x = -x.clone();
            }
            *rhs = -rhs.clone();
            *lt = true;
        }
    }
    let mut levels: Vec<Vec<(QVec, Rat)>> = Vec::new();
    let mut current: Vec<(QVec, Rat)> = sys.into_iter().map(|(c, r, _)| (c, r)).collect();
    for var in (0..dim).rev() {
        levels.push(current.clone());
        // Split on the coefficient of `var`.
        let mut lows: Vec<(QVec, Rat)> = Vec::new(); // l(u') < u_var
        let mut highs: Vec<(QVec, Rat)> = Vec::new(); // u_var < h(u')
        let mut rest: Vec<(QVec, Rat)> = Vec::new();
        for (c, rhs) in current.into_iter() {
            let a = c[var].clone();
            if a.is_zero() {
                rest.push((c, rhs));
            } else {
                // a*u_var + c'.u' < rhs  =>  u_var (rel) (rhs - c'.u')/a
                let mut cp = c;
                cp[var] = Rat::zero();
                let inv = a.recip();
                let bound: QVec = cp.iter().map(|x| -(x * &inv)).collect();
                let brhs = &rhs * &inv;
                if a.is_positive() {
                    highs.push((bound, brhs)); // u_var < bound.u' + brhs
                } else {
                    lows.push((bound, brhs)); // u_var > bound.u' + brhs
                }
            }
        }
        // Combine: every low < every high.
        for (lc, lr) in &lows {
            for (hc, hr) in &highs {
                let c: QVec = lc.iter().zip(hc).map(|(l, h)| l - h).collect();
                let rhs = hr - lr;
                if c.iter().all(|x| x.is_zero()) {
                    if !(Rat::zero() < rhs) {
                        return None;
                    }
                } else {
                    rest.push((c, rhs));
                }
            }
        }
        current = rest;
    }
    for (_, rhs) in &current {
        if !(Rat::zero() < *rhs) {
            return None;
        }
    }
    // Back-substitute to build the witness.
    let mut u = vec![Rat::zero(); dim];
    for var in 0..dim {
        let level = &levels[dim - 1 - var];
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (c, rhs) in level {
            let a = c[var].clone();
            if a.is_zero() {
                continue;
            }
            // This level only involves vars 0..=var; vars below `var` were
            // assigned in earlier iterations.
            debug_assert!(c[var + 1..].iter().all(|x| x.is_zero()));
            let mut acc = rhs.clone();
            for j in 0..var {
                acc -= &c[j] * &u[j];
            }
            let bound = acc / a.clone();
            if a.is_positive() {
                hi = Some(match hi {
                    Some(h) if h <= bound => h,
                    _ => bound,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l >= bound => l,
                    _ => bound,
                });
            }
        }
        u[var] = match (lo, hi) {
            (Some(l), Some(h)) => {
                debug_assert!(l < h);
                (&l + &h) / crate::rational::rat(2)
            }
            (Some(l), None) => l + Rat::one(),
            (None, Some(h)) => h - Rat::one(),
            (None, None) => Rat::zero(),
        };
    }
    Some(u)
}

/// Exact comparison of plane vectors by angle in `[0, 2*pi)`.
///
/// Vectors must be nonzero. Ties (parallel same-direction vectors) compare equal.
pub fn angle_cmp(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    debug_assert!(a.len() == 2 && b.len() == 2);
    let half = |v: &[Rat]| -> u8 {
        // 0 for upper half (y > 0, or y = 0 and x > 0), 1 for lower.
        match crate::rational::sign_of(&v[1]) {
            1 => 0,
            -1 => 1,
            _ => {
                if v[0].is_positive() {
                    0
                } else {
                    1
                }
            }
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    let cross = &a[0] * &b[1] - &a[1] * &b[0];
    match crate::rational::sign_of(&cross) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Orthogonal projection of `x` onto the line through `p` with direction `d`.
pub fn project_onto_line(p: &[Rat], d: &[Rat], x: &[Rat]) -> QVec {
    let t = dot(&sub(x, p), d) / dot(d, d);
    p.iter().zip(d).map(|(pi, di)| pi + &t * di).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec, rat, rat_frac};

    #[test]
    fn solve_and_project() {
        // line x + y = 1 in R^2
        let a = vec![qvec(&[1, 1])];
        let b = vec![rat(1)];
        let (p, basis) = solve_affine(&a, &b).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(dot(&a[0], &p), rat(1));

        let proj = project_affine(&a, &b, &qvec(&[1, 1])).unwrap();
        assert_eq!(proj, vec![rat_frac(1, 2), rat_frac(1, 2)]);
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![qvec(&[1, 0]), qvec(&[1, 0])];
        let b = vec![rat(0), rat(1)];
        assert!(solve_affine(&a, &b).is_none());
        assert!(project_affine(&a, &b, &qvec(&[5, 5])).is_none());
    }

    #[test]
    fn feasibility_with_witness() {
        // open square 0 < u,v < 1 intersected with u + v = 1: infeasible strictly? no:
        // u + v = 1 with 0 < u,v < 1 is feasible (u = v = 1/2).
        let cs = vec![
            Constraint::new(qvec(&[1, 0]), Rel::Gt, rat(0)),
            Constraint::new(qvec(&[0, 1]), Rel::Gt, rat(0)),
            Constraint::new(qvec(&[1, 0]), Rel::Lt, rat(1)),
            Constraint::new(qvec(&[0, 1]), Rel::Lt, rat(1)),
            Constraint::new(qvec(&[1, 1]), Rel::Eq, rat(1)),
        ];
        let w = feasible_point(&cs, 2).unwrap();
        assert_eq!(&w[0] + &w[1], rat(1));
        assert!(w[0] > rat(0) && w[0] < rat(1));

        let cs = vec![
            Constraint::new(qvec(&[1, 0]), Rel::Gt, rat(2)),
            Constraint::new(qvec(&[1, 0]), Rel::Lt, rat(1)),
        ];
        assert!(feasible_point(&cs, 2).is_none());
    }

    #[test]
    fn unbounded_feasibility() {
        let cs = vec![Constraint::new(qvec(&[1, 0]), Rel::Gt, rat(10))];
        let w = feasible_point(&cs, 2).unwrap();
        assert!(w[0] > rat(10));
    }

    #[test]
    fn angles_sort_counterclockwise() {
        let dirs = [
            qvec(&[1, 0]),
            qvec(&[1, 1]),
            qvec(&[0, 1]),
            qvec(&[-1, 1]),
            qvec(&[-1, 0]),
            qvec(&[-1, -1]),
            qvec(&[0, -1]),
            qvec(&[1, -1]),
        ];
        for w in dirs.windows(2) {
            assert_eq!(angle_cmp(&w[0], &w[1]), std::cmp::Ordering::Less);
        }
    }
}
