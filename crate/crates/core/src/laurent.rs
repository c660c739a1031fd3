//! Exact multivariate Laurent polynomials over the integers, one variable
//! per hyperplane. Units are the signed monomials. Supports the
//! all-variables-to-one specialization (integral boundary) and the
//! single-variable specialization used for homology computations.

use crate::rational::Int;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// A Laurent polynomial in `nvars` variables `t1 .. t_nvars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    pub nvars: usize,
    /// exponent vector -> nonzero integer coefficient
    pub terms: BTreeMap<Vec<i32>, Int>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Int::one())
    }

    pub fn constant(nvars: usize, c: Int) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The variable `t_{i+1}` (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, Int::one());
        LaurentPoly { nvars, terms }
    }

    /// Product of the variables indexed by `vars`.
    pub fn monomial_of(nvars: usize, vars: impl IntoIterator<Item = usize>) -> Self {
        let mut exp = vec![0; nvars];
        for i in vars {
            exp[i] += 1;
        }
        let mut terms = BTreeMap::new();
        terms.insert(exp, Int::one());
        LaurentPoly { nvars, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&vec![0; self.nvars])
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// A unit of the Laurent ring: a single term with coefficient +-1.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().next().unwrap().abs().is_one()
    }

    pub fn unit_inverse(&self) -> Option<LaurentPoly> {
        if !self.is_unit() {
            return None;
        }
        let (exp, coeff) = self.terms.iter().next().unwrap();
        let inv_exp: Vec<i32> = exp.iter().map(|e| -e).collect();
        let mut terms = BTreeMap::new();
        terms.insert(inv_exp, coeff.clone());
        Some(LaurentPoly { nvars: self.nvars, terms })
    }

    fn insert_term(&mut self, exp: Vec<i32>, coeff: Int) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Evaluation at `t_i = 1` for all `i`.
    pub fn eval_all_one(&self) -> Int {
        self.terms.values().fold(Int::zero(), |acc, c| acc + c)
    }

    /// Specialization `t_i -> t` for all `i`: returns the exponent shift and
    /// the coefficients of the resulting univariate polynomial `t^shift * p(t)`
    /// with nonzero constant term (shift 0 and empty coefficients for zero).
    pub fn specialize_single(&self) -> (i64, Vec<Int>) {
        if self.is_zero() {
            return (0, vec![]);
        }
        let mut acc: BTreeMap<i64, Int> = BTreeMap::new();
        for (exp, coeff) in &self.terms {
            let total: i64 = exp.iter().map(|&e| e as i64).sum();
            let entry = acc.entry(total).or_insert_with(Int::zero);
            *entry += coeff;
            if entry.is_zero() {
                acc.remove(&total);
            }
        }
        if acc.is_empty() {
            return (0, vec![]);
        }
        let min = *acc.keys().next().unwrap();
        let max = *acc.keys().last().unwrap();
        let mut coeffs = vec![Int::zero(); (max - min + 1) as usize];
        for (deg, c) in acc {
            coeffs[(deg - min) as usize] = c;
        }
        (min, coeffs)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (exp, coeff) in &rhs.terms {
            out.insert_term(exp.clone(), coeff.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (exp, coeff) in &rhs.terms {
            out.insert_term(exp.clone(), -coeff.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.nvars, rhs.nvars);
        let mut out = LaurentPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let exp: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert_term(exp, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect();
        LaurentPoly { nvars: self.nvars, terms }
    }
}

impl std::fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // ascending by total degree, then by exponent vector
        let mut terms: Vec<(&Vec<i32>, &Int)> = self.terms.iter().collect();
        terms.sort_by_key(|(e, _)| (e.iter().map(|&x| x as i64).sum::<i64>(), (*e).clone()));
        let mut s = String::new();
        for (k, (exp, coeff)) in terms.iter().enumerate() {
            let mono: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("t{}", i + 1)
                    } else {
                        format!("t{}^{}", i + 1, e)
                    }
                })
                .collect();
            let mono = mono.join("*");
            let abs = coeff.abs();
            let body = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono
            } else {
                format!("{abs}*{mono}")
            };
            if k == 0 {
                if coeff.is_negative() {
                    s.push('-');
                }
            } else if coeff.is_negative() {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            s.push_str(&body);
        }
        write!(f, "{s}")
    }
}
