//! Deterministic pseudo-random arrangements and base points for the
//! property suites. A fixed-seed xorshift generator keeps every run
//! byte-for-byte reproducible.

use crate::arrangement::{Arrangement, Hyperplane};
use crate::faces::Geometry;
use crate::rational::{rat, rat_frac, QVec};

/// xorshift64*; deterministic and dependency-free.
#[derive(Clone, Debug)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// uniform in `0..bound`
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// uniform integer in `[lo, hi]`
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// A random arrangement of `m` hyperplanes in dimension `dim` with integer
/// coefficients in `[-5, 5]`; degenerate and duplicate rows are re-rolled.
pub fn random_arrangement(rng: &mut Rng, dim: usize, m: usize) -> Arrangement {
    let mut planes: Vec<Hyperplane> = Vec::new();
    while planes.len() < m {
        let normal: QVec = (0..dim).map(|_| rat(rng.int(-5, 5))).collect();
        let offset = rat(rng.int(-5, 5));
        let Some(h) = Hyperplane::new(&normal, &offset) else { continue };
        if !planes.contains(&h) {
            planes.push(h);
        }
    }
    Arrangement::new(dim, planes).expect("sampled arrangement is valid")
}

/// A generic base point near a random small-coordinate hint. The fixed
/// perturbation ray can be trapped inside a degeneracy locus (say, the
/// midline of two parallel hyperplanes), so failed hints are redrawn.
pub fn random_generic_point(rng: &mut Rng, geom: &Geometry) -> QVec {
    for _ in 0..64 {
        let hint: QVec = (0..geom.arr.dim)
            .map(|_| rat(rng.int(-4, 4)) + rat_frac(rng.int(1, 6), 7))
            .collect();
        if let Ok(p) = geom.find_generic_point(&hint, 64) {
            return p;
        }
    }
    unreachable!("generic points are dense; 64 hints always suffice at this scale")
}

/// Convenience: arrangement plus geometry.
pub fn random_geometry(rng: &mut Rng, dim: usize, m: usize) -> Geometry {
    Geometry::new(random_arrangement(rng, dim, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..32 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn sampled_points_are_generic() {
        let mut rng = Rng::new(7);
        for _ in 0..5 {
            let geom = random_geometry(&mut rng, 2, 4);
            let x0 = random_generic_point(&mut rng, &geom);
            assert!(geom.is_generic(&x0));
        }
    }

    #[test]
    fn no_duplicate_hyperplanes() {
        let mut rng = Rng::new(11);
        for _ in 0..10 {
            let arr = random_arrangement(&mut rng, 3, 6);
            assert_eq!(arr.size(), 6);
        }
    }

    #[test]
    fn rat_helper_is_exact() {
        assert_eq!(rat_frac(3, 7) + rat_frac(4, 7), rat(1));
    }
}
