//! The intersection poset of an arrangement: flats, the Mobius function
//! and the Poincare-polynomial oracle used to cross-check Betti numbers.

use crate::arrangement::Arrangement;
use crate::linalg::solve_affine;
use crate::rational::{dot, QVec, Rat};
use num_traits::Zero;
use std::collections::BTreeSet;

/// A flat: a nonempty intersection of hyperplanes, with its maximal support.
///
/// `support` contains every hyperplane index whose hyperplane contains the
/// flat, so flats that agree as subspaces share one record. The ambient
/// space is the flat with empty support.
#[derive(Clone, Debug)]
pub struct Flat {
    pub support: BTreeSet<usize>,
    pub codim: usize,
    /// A rational point on the flat.
    pub point: QVec,
    /// Basis of the direction space of the flat.
    pub directions: Vec<QVec>,
}

impl Flat {
    /// Does this flat contain `other` (as subspaces, `other` is finer)?
    pub fn contains_flat(&self, other: &Flat) -> bool {
        self.support.is_subset(&other.support)
    }

    pub fn dim(&self, ambient: usize) -> usize {
        ambient - self.codim
    }
}

/// All flats of the arrangement together with their Mobius values,
/// ordered by (codim, support).
#[derive(Clone, Debug)]
pub struct FlatPoset {
    pub flats: Vec<Flat>,
    /// Mobius value mu(ambient, X) for each flat, aligned with `flats`.
    pub mobius: Vec<i64>,
}

/// Intersects the hyperplanes in `support` and, if nonempty, returns the
/// flat with maximal support.
fn build_flat(arr: &Arrangement, seed: &BTreeSet<usize>) -> Option<Flat> {
    let (point, directions) = if seed.is_empty() {
        let mut basis = Vec::new();
        for j in 0..arr.dim {
            let mut e = vec![Rat::zero(); arr.dim];
            e[j] = num_traits::One::one();
            basis.push(e);
        }
        (vec![Rat::zero(); arr.dim], basis)
    } else {
        let rows: Vec<QVec> = seed.iter().map(|&i| arr.hyperplanes[i].normal_q()).collect();
        let rhs: Vec<Rat> = seed.iter().map(|&i| arr.hyperplanes[i].offset_q()).collect();
        solve_affine(&rows, &rhs)?
    };
    // Maximalize the support: every hyperplane containing the subspace.
    let mut support = BTreeSet::new();
    for (i, h) in arr.hyperplanes.iter().enumerate() {
        let n = h.normal_q();
        let on_point = (dot(&n, &point) - h.offset_q()).is_zero();
        let parallel = directions.iter().all(|d| dot(&n, d).is_zero());
        if on_point && parallel {
            support.insert(i);
        }
    }
    let codim = arr.dim - directions.len();
    Some(Flat { support, codim, point, directions })
}

/// Enumerates the intersection poset: the ambient space plus every nonempty
/// intersection of hyperplanes, closed under pairwise intersection.
pub fn enumerate_flats(arr: &Arrangement) -> Vec<Flat> {
    let mut flats: Vec<Flat> = Vec::new();
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let ambient = build_flat(arr, &BTreeSet::new()).expect("ambient space");
    seen.insert(ambient.support.clone());
    let mut queue: Vec<Flat> = vec![ambient];
    while let Some(flat) = queue.pop() {
        for i in 0..arr.size() {
            if flat.support.contains(&i) {
                continue;
            }
            let mut seed = flat.support.clone();
            seed.insert(i);
            if let Some(candidate) = build_flat(arr, &seed) {
                if !seen.contains(&candidate.support) {
                    seen.insert(candidate.support.clone());
                    queue.push(candidate);
                }
            }
        }
        flats.push(flat);
    }
    flats.sort_by(|a, b| (a.codim, &a.support).cmp(&(b.codim, &b.support)));
    flats
}

/// Mobius inversion over the flat poset ordered by reverse inclusion:
/// `mu(ambient) = 1` and `sum_{Z <= X} mu(Z) = 0` for `X` above the ambient.
pub fn mobius(flats: &[Flat]) -> Vec<i64> {
    let mut mu = vec![0i64; flats.len()];
    for (i, x) in flats.iter().enumerate() {
        if x.support.is_empty() {
            mu[i] = 1;
            continue;
        }
        let mut acc = 0i64;
        for (j, z) in flats.iter().enumerate() {
            if j != i && z.contains_flat(x) {
                acc += mu[j];
            }
        }
        mu[i] = -acc;
    }
    mu
}

impl FlatPoset {
    pub fn new(arr: &Arrangement) -> FlatPoset {
        let flats = enumerate_flats(arr);
        let mobius = mobius(&flats);
        FlatPoset { flats, mobius }
    }

    pub fn ambient_index(&self) -> usize {
        self.flats.iter().position(|f| f.support.is_empty()).expect("ambient flat")
    }

    /// Index of the flat whose maximal support is exactly `support`.
    pub fn flat_by_support(&self, support: &BTreeSet<usize>) -> Option<usize> {
        self.flats.iter().position(|f| &f.support == support)
    }

    /// Coefficients of the Whitney-number polynomial
    /// `sum_X |mu(X)| t^codim(X)`, indexed by codimension.
    pub fn poincare_oracle(&self) -> Vec<u64> {
        let max_codim = self.flats.iter().map(|f| f.codim).max().unwrap_or(0);
        let mut coeffs = vec![0u64; max_codim + 1];
        for (f, &m) in self.flats.iter().zip(&self.mobius) {
            coeffs[f.codim] += m.unsigned_abs();
        }
        coeffs
    }

    /// Zaslavsky count: the number of chambers equals `sum_X |mu(X)|`.
    pub fn chamber_count_oracle(&self) -> u64 {
        self.poincare_oracle().iter().sum()
    }

    /// Zaslavsky count for the restriction of the poset above the flat `x`
    /// (the flats contained in `x`), i.e. the chamber count of the
    /// arrangement contracted to `x`.
    pub fn chamber_count_above(&self, x: usize) -> u64 {
        let above: Vec<usize> = (0..self.flats.len())
            .filter(|&j| self.flats[x].contains_flat(&self.flats[j]))
            .collect();
        let mut mu = vec![0i64; above.len()];
        for (k, &j) in above.iter().enumerate() {
            if j == x {
                mu[k] = 1;
                continue;
            }
            let mut acc = 0i64;
            for (k2, &j2) in above.iter().enumerate() {
                if j2 != j && self.flats[j2].contains_flat(&self.flats[j]) {
                    acc += mu[k2];
                }
            }
            mu[k] = -acc;
        }
        mu.iter().map(|m| m.unsigned_abs()).sum()
    }
}
