//! Univariate polynomials over the rationals, Smith normal form over
//! `Q[t]`, and the presentation of first homology over the Laurent ring
//! `Q[t, t^-1]` (where `t^k` and nonzero constants are units).

use crate::laurent::LaurentPoly;
use crate::rational::Rat;
use num_traits::{One, Signed, Zero};

/// Polynomial in one variable with rational coefficients, low degree first,
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly { coeffs: vec![Rat::one()] }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    /// Number of factors `t` dividing the polynomial.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    /// A unit of `Q[t, t^-1]`: a nonzero constant times a power of `t`.
    pub fn is_laurent_unit(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UniPoly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        UniPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Euclidean division: `self = q * rhs + r` with `deg r < deg rhs`.
    pub fn divmod(&self, rhs: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dr = rhs.coeffs.len();
        if rem.len() < dr {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - dr + 1];
        let lead_inv = rhs.leading().recip();
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dr - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            quot[k] = c.clone();
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = &c * b;
                rem[k + j] -= t;
            }
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        self.scale(&self.leading().recip())
    }

    /// Monic gcd.
    pub fn gcd(&self, rhs: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Divides out `t^valuation` and normalizes monic: the canonical
    /// representative modulo Laurent units.
    pub fn laurent_normalize(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let v = self.valuation();
        UniPoly::from_coeffs(self.coeffs[v..].to_vec()).monic()
    }

    pub fn pow_t(k: usize) -> UniPoly {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = Rat::one();
        UniPoly::from_coeffs(coeffs)
    }
}

impl std::fmt::Display for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let body = if i == 0 {
                crate::rational::fmt_rat(&abs)
            } else {
                let var = if i == 1 { "t".to_string() } else { format!("t^{i}") };
                if abs.is_one() {
                    var
                } else {
                    format!("{}*{}", crate::rational::fmt_rat(&abs), var)
                }
            };
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else if c.is_negative() {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            s.push_str(&body);
        }
        write!(f, "{s}")
    }
}

pub type PolyMat = Vec<Vec<UniPoly>>;

/// Specializes a Laurent matrix via `t_i -> t` and clears the `t` shifts by
/// unit rescalings of the bases, so that all entries become polynomials.
///
/// `d2` is indexed `[2-cell][1-cell]`, `d1` is `[1-cell][0-cell]`; the
/// 1-cell basis is left unscaled while the 2-cell rows and 0-cell columns
/// absorb the shifts (a diagonal unit change of basis, harmless for
/// homology).
pub fn specialize_matrices(d2: &[Vec<LaurentPoly>], d1: &[Vec<LaurentPoly>]) -> (PolyMat, PolyMat) {
    let to_shifted = |p: &LaurentPoly| -> (i64, UniPoly) {
        let (shift, coeffs) = p.specialize_single();
        let coeffs: Vec<Rat> =
            coeffs.into_iter().map(Rat::from_integer).collect();
        (shift, UniPoly::from_coeffs(coeffs))
    };
    let s2: Vec<Vec<(i64, UniPoly)>> =
        d2.iter().map(|row| row.iter().map(to_shifted).collect()).collect();
    let s1: Vec<Vec<(i64, UniPoly)>> =
        d1.iter().map(|row| row.iter().map(to_shifted).collect()).collect();

    // Row scalings for d2: lift each row's most negative shift to zero.
    let p2: PolyMat = s2
        .iter()
        .map(|row| {
            let min = row
                .iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(s, _)| *s)
                .min()
                .unwrap_or(0)
                .min(0);
            row.iter()
                .map(|(s, p)| {
                    if p.is_zero() {
                        UniPoly::zero()
                    } else {
                        p.mul(&UniPoly::pow_t((s - min) as usize))
                    }
                })
                .collect()
        })
        .collect();

    // Column scalings for d1.
    let n0 = s1.first().map(|r| r.len()).unwrap_or(0);
    let mut col_min = vec![0i64; n0];
    for row in &s1 {
        for (k, (s, p)) in row.iter().enumerate() {
            if !p.is_zero() {
                col_min[k] = col_min[k].min(*s);
            }
        }
    }
    let p1: PolyMat = s1
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(k, (s, p))| {
                    if p.is_zero() {
                        UniPoly::zero()
                    } else {
                        p.mul(&UniPoly::pow_t((s - col_min[k]) as usize))
                    }
                })
                .collect()
        })
        .collect();
    (p2, p1)
}

/// Smith normal form over `Q[t]` with tracked left transform:
/// returns `(diag, u, u_inv)` with `u * a * v = diag(d)` for some untracked
/// unimodular `v`, `u * u_inv = 1`, and `d_1 | d_2 | ...` monic.
pub fn smith(a: &PolyMat) -> (Vec<UniPoly>, PolyMat, PolyMat) {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m: PolyMat = a.to_vec();
    let mut u: PolyMat = identity(rows);
    let mut u_inv: PolyMat = identity(rows);

    let swap_rows = |m: &mut PolyMat, u: &mut PolyMat, ui: &mut PolyMat, i: usize, j: usize| {
        m.swap(i, j);
        u.swap(i, j);
        // column op on u_inv: swap columns i, j
        for row in ui.iter_mut() {
            row.swap(i, j);
        }
    };
    // row_j -= q * row_i  (and u_inv column i += q * column j)
    let add_row = |m: &mut PolyMat, u: &mut PolyMat, ui: &mut PolyMat, i: usize, j: usize, q: &UniPoly| {
        for c in 0..m[0].len() {
            let t = q.mul(&m[i][c]);
            m[j][c] = m[j][c].sub(&t);
        }
        for c in 0..u[0].len() {
            let t = q.mul(&u[i][c]);
            u[j][c] = u[j][c].sub(&t);
        }
        for row in ui.iter_mut() {
            let t = q.mul(&row[j]);
            row[i] = row[i].add(&t);
        }
    };
    let scale_row = |m: &mut PolyMat, u: &mut PolyMat, ui: &mut PolyMat, i: usize, c: &Rat| {
        for x in m[i].iter_mut() {
            *x = x.scale(c);
        }
        for x in u[i].iter_mut() {
            *x = x.scale(c);
        }
        let inv = c.recip();
        for row in ui.iter_mut() {
            row[i] = row[i].scale(&inv);
        }
    };

    let mut t = 0;
    while t < rows && t < cols {
        // Find the minimal-degree nonzero entry in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| m[i][j].degree() < m[pi][pj].degree())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut m, &mut u, &mut u_inv, t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            // Clear the pivot column using division with remainder.
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let (q, r) = m[i][t].divmod(&m[t][t]);
                add_row(&mut m, &mut u, &mut u_inv, t, i, &q);
                debug_assert_eq!(m[i][t], r);
                if !r.is_zero() {
                    swap_rows(&mut m, &mut u, &mut u_inv, t, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Clear the pivot row with column operations (untracked v).
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let (q, r) = m[t][j].divmod(&m[t][t]);
                for i in 0..rows {
                    let s = q.mul(&m[i][t]);
                    m[i][j] = m[i][j].sub(&s);
                }
                if !r.is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                    break;
                }
            }
            if dirty {
                continue;
            }
            // Pivot must divide the remaining block for the divisibility chain.
            let mut offender: Option<usize> = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !m[i][j].divmod(&m[t][t]).1.is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // fold the offending row into the pivot row
                    let minus_one = UniPoly::one().neg();
                    add_row(&mut m, &mut u, &mut u_inv, i, t, &minus_one);
                }
                None => break,
            }
        }
        let lead = m[t][t].leading();
        if !lead.is_one() {
            scale_row(&mut m, &mut u, &mut u_inv, t, &lead.recip());
        }
        t += 1;
    }

    let mut diag = Vec::new();
    for i in 0..rows.min(cols) {
        if m[i][i].is_zero() {
            break;
        }
        diag.push(m[i][i].clone());
    }
    (diag, u, u_inv)
}

fn identity(n: usize) -> PolyMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { UniPoly::one() } else { UniPoly::zero() })
                .collect()
        })
        .collect()
}

/// Module invariants of `H1 = ker(d1) / im(d2)` over the Laurent ring:
/// the nontrivial invariant factors (monic, `t`-power units removed) and
/// the free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors {
    pub factors: Vec<UniPoly>,
    pub free_rank: usize,
}

impl std::fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> =
            self.factors.iter().map(|d| format!("Q[t±]/({d})")).collect();
        if self.free_rank == 1 {
            parts.push("Q[t±]".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Q[t±]^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Computes the invariant factors of `H1` from boundary matrices over the
/// multivariate Laurent ring, after specializing every `t_i` to `t`.
pub fn h1_invariants(d2: &[Vec<LaurentPoly>], d1: &[Vec<LaurentPoly>]) -> InvariantFactors {
    let (p2, p1) = specialize_matrices(d2, d1);
    let n1 = p1.len();
    if n1 == 0 {
        return InvariantFactors { factors: vec![], free_rank: 0 };
    }

    // Basis of the cycle module ker(d1) (rows acting on the left).
    let (diag1, u, u_inv) = smith(&p1);
    let rank1 = diag1.len();
    let kernel_rows: Vec<usize> = (rank1..n1).collect();

    // Express each boundary row of d2 in the kernel basis.
    let mut presentation: PolyMat = Vec::new();
    for row in &p2 {
        debug_assert_eq!(row.len(), n1);
        // y = row * u_inv
        let mut y = vec![UniPoly::zero(); n1];
        for (j, yj) in y.iter_mut().enumerate() {
            for (k, r) in row.iter().enumerate() {
                let t = r.mul(&u_inv[k][j]);
                *yj = yj.add(&t);
            }
        }
        for (j, yj) in y.iter().enumerate().take(rank1) {
            assert!(
                yj.is_zero(),
                "boundary row is not a cycle (chain condition violated at {j})"
            );
        }
        presentation.push(kernel_rows.iter().map(|&j| y[j].clone()).collect());
    }
    let _ = u;

    let cycles = kernel_rows.len();
    if presentation.is_empty() || cycles == 0 {
        return InvariantFactors { factors: vec![], free_rank: cycles };
    }
    let (diag, _, _) = smith(&presentation);
    let factors: Vec<UniPoly> = diag
        .iter()
        .map(|d| d.laurent_normalize())
        .filter(|d| !d.is_laurent_unit())
        .collect();
    let free_rank = cycles - diag.len();
    InvariantFactors { factors, free_rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn poly(cs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(cs.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = poly(&[-1, 0, 0, 1]); // t^3 - 1
        let b = poly(&[-1, 1]); // t - 1
        let (q, r) = a.divmod(&b);
        assert!(r.is_zero());
        assert_eq!(q, poly(&[1, 1, 1]));
        assert_eq!(a.gcd(&b), b.monic());
        let c = poly(&[1, 1]); // t + 1
        assert_eq!(a.gcd(&c), UniPoly::one());
    }

    #[test]
    fn laurent_normalization() {
        let p = poly(&[0, 0, -2, 2]); // 2t^3 - 2t^2 = 2t^2 (t - 1)
        assert_eq!(p.laurent_normalize(), poly(&[-1, 1]));
        assert!(poly(&[0, 5]).is_laurent_unit());
        assert!(!poly(&[1, 5]).is_laurent_unit());
        assert_eq!(format!("{}", poly(&[-1, 0, 0, 1])), "t^3 - 1");
    }

    #[test]
    fn smith_diagonal_chain() {
        // [[t-1, 0], [0, (t-1)(t+1)]] stays as is; crossed versions reduce.
        let tm1 = poly(&[-1, 1]);
        let t2m1 = poly(&[-1, 0, 1]);
        let m = vec![vec![t2m1.clone(), t2m1.clone()], vec![UniPoly::zero(), tm1.clone()]];
        let (d, u, u_inv) = smith(&m);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0], tm1);
        assert_eq!(d[1], t2m1);
        // chain: d0 | d1
        assert!(d[1].divmod(&d[0]).1.is_zero());
        // u * u_inv = identity
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = UniPoly::zero();
                for k in 0..2 {
                    acc = acc.add(&u[i][k].mul(&u_inv[k][j]));
                }
                assert_eq!(acc, if i == j { UniPoly::one() } else { UniPoly::zero() });
            }
        }
    }

    #[test]
    fn torus_h1() {
        // circle with monodromy t: single 1-cell, single 0-cell,
        // d1 = [1 - t], no 2-cells: H1 = ker = 0.
        let one = LaurentPoly::one(1);
        let t = LaurentPoly::var(1, 0);
        let d1 = vec![vec![&one - &t]];
        let inv = h1_invariants(&[], &d1);
        assert_eq!(inv.factors.len(), 0);
        assert_eq!(inv.free_rank, 0);
    }
}
