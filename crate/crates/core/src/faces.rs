//! Sign-vector faces of an arrangement and the exact geometric operations
//! on them: enumeration, the face partial order, separators, walls,
//! chamber projections and generic points.
//!
//! Faces are enumerated flat by flat: the faces spanning a flat `X` are the
//! chambers of the arrangement contracted to `X`, found by BFS over
//! wall-crossings with exact feasibility checks. Every face stores a
//! rational witness in its relative interior; all later geometry consumes
//! witnesses, never floats.

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::flats::{Flat, FlatPoset};
use crate::linalg::{feasible_point, project_affine, Constraint, Rel};
use crate::rational::{dist2, dot, rat_frac, sign_of, QVec, Rat};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// A closed face, encoded by the sign vector of its relative interior.
#[derive(Clone, Debug)]
pub struct Face {
    /// One entry per hyperplane: -1, 0 or +1.
    pub sign: Vec<i8>,
    /// Exact point in the relative interior.
    pub witness: QVec,
    /// Index of the flat spanned by this face.
    pub flat: usize,
    pub codim: usize,
}

impl Face {
    /// Indices of the hyperplanes containing the face.
    pub fn support(&self) -> BTreeSet<usize> {
        self.sign
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_chamber(&self) -> bool {
        self.sign.iter().all(|&s| s != 0)
    }

    pub fn sign_string(&self) -> String {
        self.sign
            .iter()
            .map(|s| match s {
                1 => '+',
                -1 => '-',
                _ => '0',
            })
            .collect()
    }
}

/// The whole combinatorial geometry of an arrangement: flats, faces,
/// chambers, and lookup by sign vector.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub arr: Arrangement,
    pub flats: FlatPoset,
    pub faces: Vec<Face>,
    /// All chamber indices, in the (codim, sign) enumeration order.
    pub chambers: Vec<usize>,
    by_sign: BTreeMap<Vec<i8>, usize>,
}

impl Geometry {
    pub fn new(arr: Arrangement) -> Geometry {
        let flats = FlatPoset::new(&arr);
        let mut faces: Vec<Face> = Vec::new();
        for (x, flat) in flats.flats.iter().enumerate() {
            faces.extend(faces_spanning_flat(&arr, flat, x));
        }
        faces.sort_by(|a, b| (a.codim, a.sign.clone()).cmp(&(b.codim, b.sign.clone())));
        let by_sign: BTreeMap<Vec<i8>, usize> =
            faces.iter().enumerate().map(|(i, f)| (f.sign.clone(), i)).collect();
        assert_eq!(by_sign.len(), faces.len(), "duplicate face sign vectors");
        let chambers: Vec<usize> =
            (0..faces.len()).filter(|&i| faces[i].is_chamber()).collect();
        Geometry { arr, flats, faces, chambers, by_sign }
    }

    pub fn face_by_sign(&self, sign: &[i8]) -> Option<usize> {
        self.by_sign.get(sign).copied()
    }

    /// The face partial order: `f <=: g` iff the closed face `f` contains
    /// the closed face `g`. In sign terms, `g` is obtained from `f` by
    /// zeroing entries.
    pub fn face_leq(&self, f: usize, g: usize) -> bool {
        self.faces[f]
            .sign
            .iter()
            .zip(&self.faces[g].sign)
            .all(|(&sf, &sg)| sg == 0 || sg == sf)
    }

    /// Hyperplanes separating two chambers.
    pub fn separators(&self, c1: usize, c2: usize) -> BTreeSet<usize> {
        self.faces[c1]
            .sign
            .iter()
            .zip(&self.faces[c2].sign)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect()
    }

    /// Walls of a chamber: hyperplanes meeting it in a codimension-1 face.
    pub fn walls(&self, c: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for (i, face) in self.faces.iter().enumerate() {
            if face.codim == 1 && self.face_leq(c, i) {
                let supp = face.support();
                debug_assert_eq!(supp.len(), 1);
                out.extend(supp);
            }
        }
        out
    }

    /// The chamber `c.f`: the unique chamber containing `f` and not
    /// separated from `c` by any hyperplane through `f`.
    pub fn project_face(&self, c: usize, f: usize) -> usize {
        let sign: Vec<i8> = self.faces[f]
            .sign
            .iter()
            .zip(&self.faces[c].sign)
            .map(|(&sf, &sc)| if sf != 0 { sf } else { sc })
            .collect();
        self.face_by_sign(&sign).expect("projected chamber must be realizable")
    }

    /// The chamber opposite to `c` across its face `f`: flips the entries
    /// supported on `f`. Requires `c <=: f`.
    pub fn opposite(&self, c: usize, f: usize) -> Result<usize> {
        if !self.face_leq(c, f) {
            return Err(Error::Usage("opposite: face does not belong to the chamber".into()));
        }
        let sign: Vec<i8> = self.faces[c]
            .sign
            .iter()
            .zip(&self.faces[f].sign)
            .map(|(&sc, &sf)| if sf == 0 { -sc } else { sc })
            .collect();
        Ok(self
            .face_by_sign(&sign)
            .expect("opposite chamber must be realizable"))
    }

    /// Faces of the chamber `c` (the chamber itself included).
    pub fn faces_of_chamber(&self, c: usize) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.face_leq(c, f)).collect()
    }

    /// Nearest point of the closed chamber `c` from `x0`, the face whose
    /// relative interior contains it, and the squared distance.
    pub fn project_chamber(&self, c: usize, x0: &[Rat]) -> (QVec, usize, Rat) {
        let mut best: Option<(QVec, usize, Rat)> = None;
        for f in self.faces_of_chamber(c) {
            let support = self.faces[f].support();
            let rows: Vec<QVec> =
                support.iter().map(|&i| self.arr.hyperplanes[i].normal_q()).collect();
            let rhs: Vec<Rat> =
                support.iter().map(|&i| self.arr.hyperplanes[i].offset_q()).collect();
            let Some(p) = project_affine(&rows, &rhs, x0) else { continue };
            if self.arr.signs_at(&p) != self.faces[f].sign {
                continue; // projection left the relative interior of f
            }
            let d2 = dist2(x0, &p);
            match &best {
                Some((_, _, b)) if *b <= d2 => {}
                _ => best = Some((p, f, d2)),
            }
        }
        best.expect("closed chamber always has a nearest point")
    }

    /// Squared distance from `x0` to each flat.
    pub fn flat_distances(&self, x0: &[Rat]) -> Vec<Rat> {
        self.flats
            .flats
            .iter()
            .map(|flat| {
                let rows: Vec<QVec> =
                    flat.support.iter().map(|&i| self.arr.hyperplanes[i].normal_q()).collect();
                let rhs: Vec<Rat> =
                    flat.support.iter().map(|&i| self.arr.hyperplanes[i].offset_q()).collect();
                let p = project_affine(&rows, &rhs, x0).expect("flat is nonempty");
                dist2(x0, &p)
            })
            .collect()
    }

    /// A point is generic when its squared distances to all flats are
    /// pairwise distinct.
    pub fn is_generic(&self, x0: &[Rat]) -> bool {
        let ds = self.flat_distances(x0);
        let mut sorted = ds.clone();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Returns `hint` if generic, otherwise walks the deterministic
    /// perturbation sequence `hint + 2^-k * (1, 1/3, 1/5, ...)`. When the
    /// hint is interior to a chamber, candidates are required to stay in
    /// that chamber.
    pub fn find_generic_point(&self, hint: &[Rat], max_attempts: usize) -> Result<QVec> {
        if hint.len() != self.arr.dim {
            return Err(Error::Usage("hint dimension mismatch".into()));
        }
        if self.is_generic(hint) {
            return Ok(hint.to_vec());
        }
        let hint_sign = self.arr.signs_at(hint);
        let interior = hint_sign.iter().all(|&s| s != 0);
        let dir = perturbation_direction(self.arr.dim);
        let mut step = rat_frac(1, 2);
        for _ in 0..max_attempts {
            let candidate: QVec =
                hint.iter().zip(&dir).map(|(h, d)| h + &step * d).collect();
            let ok_chamber = !interior || self.arr.signs_at(&candidate) == hint_sign;
            if ok_chamber && self.is_generic(&candidate) {
                return Ok(candidate);
            }
            step /= crate::rational::rat(2);
        }
        Err(Error::SearchExhausted(max_attempts))
    }
}

/// Direction `(1, 1/3, 1/5, 1/7, ...)`: reciprocals of 1 and the odd primes.
fn perturbation_direction(dim: usize) -> QVec {
    let mut out = Vec::with_capacity(dim);
    let mut p = 1i64;
    for i in 0..dim {
        if i == 0 {
            out.push(rat_frac(1, 1));
        } else {
            p = next_odd_prime(p);
            out.push(rat_frac(1, p));
        }
    }
    out
}

fn next_odd_prime(after: i64) -> i64 {
    let mut n = if after < 3 { 3 } else { after + 2 };
    loop {
        let mut is_prime = true;
        let mut d = 3;
        while d * d <= n {
            if n % d == 0 {
                is_prime = false;
                break;
            }
            d += 2;
        }
        if is_prime {
            return n;
        }
        n += 2;
    }
}

/// One induced wall of the contraction to a flat: the canonical constraint
/// together with the original hyperplanes inducing it (and their signs
/// relative to the canonical orientation).
struct InducedWall {
    coeffs: QVec,
    rhs: Rat,
    members: Vec<(usize, i8)>,
}

/// Enumerates the faces spanning the given flat: the chambers of the
/// arrangement contracted to the flat, found by BFS over wall-crossings.
fn faces_spanning_flat(arr: &Arrangement, flat: &Flat, flat_idx: usize) -> Vec<Face> {
    let dim = flat.directions.len();
    let support = &flat.support;

    // Constraints induced on the flat by the non-containing hyperplanes.
    let mut walls: Vec<InducedWall> = Vec::new();
    let mut wall_key: BTreeMap<(Vec<crate::rational::Int>, crate::rational::Int), usize> =
        BTreeMap::new();
    let mut constant_signs: Vec<(usize, i8)> = Vec::new();
    for (i, h) in arr.hyperplanes.iter().enumerate() {
        if support.contains(&i) {
            continue;
        }
        let n = h.normal_q();
        let coeffs: QVec = flat.directions.iter().map(|v| dot(&n, v)).collect();
        let rhs = h.offset_q() - dot(&n, &flat.point);
        if coeffs.iter().all(|c| c.is_zero()) {
            // Hyperplane misses the flat entirely: constant sign on it.
            debug_assert!(!rhs.is_zero());
            constant_signs.push((i, -sign_of(&rhs)));
            continue;
        }
        let (key, orient) = canonical_constraint(&coeffs, &rhs);
        match wall_key.get(&key) {
            Some(&w) => walls[w].members.push((i, orient)),
            None => {
                wall_key.insert(key, walls.len());
                let scale = Rat::from_integer(orient.into());
                let canon_coeffs: QVec = coeffs.iter().map(|c| c * &scale).collect();
                let canon_rhs = &rhs * &scale;
                walls.push(InducedWall {
                    coeffs: canon_coeffs,
                    rhs: canon_rhs,
                    members: vec![(i, orient)],
                });
            }
        }
    }

    let seed_u = seed_point(&walls, dim);
    let seed_sign: Vec<i8> = walls
        .iter()
        .map(|w| sign_of(&(dot(&w.coeffs, &seed_u) - &w.rhs)))
        .collect();
    debug_assert!(seed_sign.iter().all(|&s| s != 0));

    // BFS over the chamber graph of the contraction.
    let mut seen: BTreeSet<Vec<i8>> = BTreeSet::new();
    let mut out: Vec<(Vec<i8>, QVec)> = Vec::new();
    let mut queue: Vec<(Vec<i8>, QVec)> = vec![(seed_sign.clone(), seed_u)];
    seen.insert(seed_sign);
    while let Some((tau, u)) = queue.pop() {
        for w in 0..walls.len() {
            let mut neighbor = tau.clone();
            neighbor[w] = -neighbor[w];
            if seen.contains(&neighbor) {
                continue;
            }
            // A point in the relative interior of the shared wall, if the
            // crossing is real. Cheap attempt first: project the current
            // witness onto the wall and check the other constraints.
            let cc = dot(&walls[w].coeffs, &walls[w].coeffs);
            let val = dot(&walls[w].coeffs, &u) - &walls[w].rhs;
            let t = &val / &cc;
            let projected: QVec = u
                .iter()
                .zip(&walls[w].coeffs)
                .map(|(ui, ci)| ui - &t * ci)
                .collect();
            let strict_ok = |q: &QVec| {
                walls.iter().enumerate().all(|(w2, wall)| {
                    w2 == w || sign_of(&(dot(&wall.coeffs, q) - &wall.rhs)) == tau[w2]
                })
            };
            let on_wall = if strict_ok(&projected) {
                Some(projected)
            } else {
                let mut cs: Vec<Constraint> = vec![Constraint::new(
                    walls[w].coeffs.clone(),
                    Rel::Eq,
                    walls[w].rhs.clone(),
                )];
                for (w2, wall) in walls.iter().enumerate() {
                    if w2 == w {
                        continue;
                    }
                    let rel = if tau[w2] > 0 { Rel::Gt } else { Rel::Lt };
                    cs.push(Constraint::new(wall.coeffs.clone(), rel, wall.rhs.clone()));
                }
                feasible_point(&cs, dim)
            };
            let Some(q) = on_wall else { continue };
            // Step off the wall into the neighbor, far enough to stay exact
            // but short enough to keep every other strict constraint.
            let mut step = Rat::new(1.into(), 2.into());
            for (w2, wall) in walls.iter().enumerate() {
                if w2 == w {
                    continue;
                }
                let drift = dot(&wall.coeffs, &walls[w].coeffs);
                if drift.is_zero() {
                    continue;
                }
                // x = q + (sign * step / cc) * c_w changes this wall's value
                // by sign * step * drift / cc; keep it under the slack.
                let slack = dot(&wall.coeffs, &q) - &wall.rhs;
                let bound = (&slack * &cc / &drift).abs() / crate::rational::rat(2);
                if bound < step {
                    step = bound;
                }
            }
            let dir = Rat::from_integer(neighbor[w].into()) * step / &cc;
            let witness: QVec = q
                .iter()
                .zip(&walls[w].coeffs)
                .map(|(qi, ci)| qi + &dir * ci)
                .collect();
            debug_assert!(walls
                .iter()
                .enumerate()
                .all(|(w2, wall)| sign_of(&(dot(&wall.coeffs, &witness) - &wall.rhs))
                    == neighbor[w2]));
            seen.insert(neighbor.clone());
            queue.push((neighbor, witness));
        }
        out.push((tau, u));
    }

    // Assemble global sign vectors and ambient witnesses.
    let m = arr.size();
    out.into_iter()
        .map(|(tau, u)| {
            let mut sign = vec![0i8; m];
            for &(i, s) in &constant_signs {
                sign[i] = s;
            }
            for (w, wall) in walls.iter().enumerate() {
                for &(i, orient) in &wall.members {
                    sign[i] = tau[w] * orient;
                }
            }
            let mut witness = flat.point.clone();
            for (uj, v) in u.iter().zip(&flat.directions) {
                for c in 0..witness.len() {
                    witness[c] += uj * &v[c];
                }
            }
            debug_assert_eq!(arr.signs_at(&witness), sign);
            Face { sign, witness, flat: flat_idx, codim: flat.codim }
        })
        .collect()
}

/// Canonical integral form of `coeffs . u = rhs`, plus the sign relating
/// the original to the canonical representative.
fn canonical_constraint(
    coeffs: &[Rat],
    rhs: &Rat,
) -> ((Vec<crate::rational::Int>, crate::rational::Int), i8) {
    let mut denom_lcm = crate::rational::Int::from(1);
    for c in coeffs.iter().chain(std::iter::once(rhs)) {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let scaled: Vec<crate::rational::Int> = coeffs
        .iter()
        .chain(std::iter::once(rhs))
        .map(|c| c.numer() * (&denom_lcm / c.denom()))
        .collect();
    let mut content = crate::rational::Int::zero();
    for v in &scaled {
        content = content.gcd(v);
    }
    let lead = scaled[..scaled.len() - 1].iter().find(|v| !v.is_zero()).unwrap();
    let orient = if lead.is_negative() { -1i8 } else { 1i8 };
    if orient < 0 {
        content = -content;
    }
    let mut ints: Vec<crate::rational::Int> = scaled.iter().map(|v| v / &content).collect();
    let rhs_int = ints.pop().unwrap();
    ((ints, rhs_int), orient)
}

/// A point in the flat's coordinates avoiding every induced wall:
/// moment-curve candidates `(t, t^2, ..., t^d)` swept over small rationals.
fn seed_point(walls: &[InducedWall], dim: usize) -> QVec {
    if dim == 0 {
        return vec![];
    }
    let budget = walls.len() * dim + 2;
    let mut candidates: Vec<Rat> = vec![Rat::zero()];
    let mut k = 1i64;
    while candidates.len() < budget + 1 {
        candidates.push(crate::rational::rat(k));
        candidates.push(crate::rational::rat(-k));
        candidates.push(rat_frac(1, 2 * k + 1));
        candidates.push(rat_frac(-1, 2 * k + 1));
        k += 1;
    }
    for t in candidates {
        let mut u = Vec::with_capacity(dim);
        let mut pow = Rat::from_integer(1.into());
        for _ in 0..dim {
            pow = &pow * &t;
            u.push(pow.clone());
        }
        if walls.iter().all(|w| !(dot(&w.coeffs, &u) - &w.rhs).is_zero()) {
            return u;
        }
    }
    unreachable!("moment curve candidates exhausted");
}

/// Brute-force geometric oracle for the face order, independent of the
/// sign-vector rule: `f` contains `g` iff the witness of `g` lies in the
/// closed polyhedron of `f` (equalities on the zero set of `f`, closed
/// halfspaces elsewhere, all evaluated at the witness of `f`). Convexity is
/// spot-checked on the witness midpoint.
pub fn face_leq_oracle(geom: &Geometry, f: usize, g: usize) -> bool {
    let wf = &geom.faces[f].witness;
    let in_closed_region_of_f = |x: &[Rat]| -> bool {
        geom.arr.hyperplanes.iter().all(|h| {
            let at_f = h.eval_sign(wf);
            let at_x = h.eval_sign(x);
            if at_f == 0 {
                at_x == 0
            } else {
                at_x == 0 || at_x == at_f
            }
        })
    };
    let wg = &geom.faces[g].witness;
    let inside = in_closed_region_of_f(wg);
    if inside {
        debug_assert!(in_closed_region_of_f(&crate::rational::midpoint(wf, wg)));
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::parse_arrangement;
    use crate::rational::{qvec, rat};

    fn geom(text: &str) -> Geometry {
        Geometry::new(parse_arrangement(text).unwrap())
    }

    #[test]
    fn empty_arrangement_has_one_face() {
        let g = geom("dim 2\n");
        assert_eq!(g.faces.len(), 1);
        assert!(g.faces[0].is_chamber());
        assert_eq!(g.chambers.len(), 1);
    }

    #[test]
    fn bool2_faces() {
        let g = geom("dim 2\n1 0 0\n0 1 0\n");
        assert_eq!(g.faces.len(), 9);
        assert_eq!(g.chambers.len(), 4);
        let rays = g.faces.iter().filter(|f| f.codim == 1).count();
        assert_eq!(rays, 4);
        let vertices = g.faces.iter().filter(|f| f.codim == 2).count();
        assert_eq!(vertices, 1);
    }

    #[test]
    fn deconed_a3_counts() {
        let g = geom("dim 2\n2 2 13\n2 -2 7\n0 1 4\n2 2 23\n2 -2 -3\n");
        assert_eq!(g.chambers.len(), 12);
        assert_eq!(g.faces.len(), 31);
        // per-flat face counts match the Zaslavsky count of each contraction
        for (x, _) in g.flats.flats.iter().enumerate() {
            let have = g.faces.iter().filter(|f| f.flat == x).count() as u64;
            assert_eq!(have, g.flats.chamber_count_above(x));
        }
    }

    #[test]
    fn face_order_examples() {
        let g = geom("dim 2\n1 0 0\n0 1 0\n");
        let pp = g.face_by_sign(&[1, 1]).unwrap();
        let ray = g.face_by_sign(&[0, 1]).unwrap();
        assert!(g.face_leq(pp, pp));
        assert!(g.face_leq(pp, ray));
        assert!(!g.face_leq(ray, pp));
    }

    #[test]
    fn separators_and_walls() {
        let g = geom("dim 2\n1 0 0\n0 1 0\n");
        let pp = g.face_by_sign(&[1, 1]).unwrap();
        let mm = g.face_by_sign(&[-1, -1]).unwrap();
        assert_eq!(g.separators(pp, pp).len(), 0);
        assert_eq!(g.separators(pp, mm), BTreeSet::from([0, 1]));
        assert_eq!(g.walls(pp), BTreeSet::from([0, 1]));
    }

    #[test]
    fn chamber_projection_ops() {
        let g = geom("dim 2\n1 0 0\n0 1 0\n");
        let mm = g.face_by_sign(&[-1, -1]).unwrap();
        let ray = g.face_by_sign(&[0, 1]).unwrap();
        let mp = g.face_by_sign(&[-1, 1]).unwrap();
        assert_eq!(g.project_face(mm, ray), mp);
        let pp = g.face_by_sign(&[1, 1]).unwrap();
        let origin = g.face_by_sign(&[0, 0]).unwrap();
        assert_eq!(g.opposite(pp, origin).unwrap(), mm);
        assert!(g.opposite(pp, g.face_by_sign(&[-1, 0]).unwrap()).is_err());
        // projecting x0 = (1, 1/2) onto the opposite quadrant lands on the origin
        let x0 = vec![rat(1), rat_frac(1, 2)];
        let (p, f, d2) = g.project_chamber(mm, &x0);
        assert_eq!(p, qvec(&[0, 0]));
        assert_eq!(f, origin);
        assert_eq!(d2, rat_frac(5, 4));
        // x0 interior: projection is x0 itself
        let (p, f, d2) = g.project_chamber(pp, &x0);
        assert_eq!(p, x0);
        assert_eq!(f, pp);
        assert!(d2.is_zero());
    }

    #[test]
    fn genericity() {
        let g = geom("dim 2\n1 0 0\n0 1 0\n");
        assert!(g.is_generic(&[rat(1), rat_frac(1, 2)]));
        assert!(!g.is_generic(&qvec(&[1, 1])));
        let fixed = g.find_generic_point(&qvec(&[1, 1]), 64).unwrap();
        assert!(g.is_generic(&fixed));
        assert_eq!(g.arr.signs_at(&fixed), vec![1, 1]);
        // generic hints are returned unchanged
        let p = vec![rat(1), rat_frac(1, 2)];
        assert_eq!(g.find_generic_point(&p, 64).unwrap(), p);
    }

    #[test]
    fn deconed_a3_base_point_is_generic() {
        let g = geom("dim 2\n2 2 13\n2 -2 7\n0 1 4\n2 2 23\n2 -2 -3\n");
        assert!(g.is_generic(&[rat(6), rat_frac(18, 5)]));
    }
}
