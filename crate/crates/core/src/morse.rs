//! The Morse complex of a matched Salvetti complex: Betti numbers, per-flat
//! critical counts, and (for plane arrangements) the closed-form boundary
//! matrices with abelian local-system coefficients, the algebraic reduction
//! oracle, and the twisted homology invariants after specialization.

use crate::error::{Error, Result};
use crate::faces::Geometry;
use crate::laurent::LaurentPoly;
use crate::matching::{BasePoint, Matching};
use crate::rational::dist2;
use crate::salvetti::{loop_monomial, orient_cells, twisted_boundaries, CellComplex, OrientedComplex};
use crate::unipoly::{h1_invariants, InvariantFactors};
use std::collections::BTreeMap;

/// Betti numbers read off the matching: `b_k` counts the chambers whose
/// projection face has codimension `k`.
pub fn betti_numbers(geom: &Geometry, base: &BasePoint) -> Vec<usize> {
    let mut out = vec![0usize; geom.arr.dim + 1];
    for &c in &geom.chambers {
        out[geom.faces[base.proj[&c].f_c].codim] += 1;
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

/// One row of the per-flat critical-cell census.
#[derive(Clone, Debug)]
pub struct BrieskornRow {
    pub flat: usize,
    pub count: usize,
    pub mobius_abs: u64,
    /// Betti number of the subarrangement supported on the flat, computed
    /// recursively with the same base point.
    pub sub_betti: usize,
    pub passed: bool,
}

/// Counts the chambers attached to each flat and cross-checks the count
/// against the Mobius value and a recursive run on the subarrangement of
/// hyperplanes containing the flat.
pub fn brieskorn_counts(geom: &Geometry, base: &BasePoint) -> Result<Vec<BrieskornRow>> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in &geom.chambers {
        *counts.entry(base.proj[&c].x_c).or_default() += 1;
    }
    let mut rows = Vec::new();
    for (x, flat) in geom.flats.flats.iter().enumerate() {
        let count = counts.get(&x).copied().unwrap_or(0);
        let mobius_abs = geom.flats.mobius[x].unsigned_abs();
        let planes: Vec<crate::arrangement::Hyperplane> = flat
            .support
            .iter()
            .map(|&i| geom.arr.hyperplanes[i].clone())
            .collect();
        let sub = Geometry::new(crate::arrangement::Arrangement::new(geom.arr.dim, planes)?);
        let sub_base = BasePoint::new(&sub, &base.x0)?;
        let sub_betti_vec = betti_numbers(&sub, &sub_base);
        let sub_betti = sub_betti_vec.get(flat.codim).copied().unwrap_or(0);
        let passed = count as u64 == mobius_abs && count == sub_betti;
        rows.push(BrieskornRow { flat: x, count, mobius_abs, sub_betti, passed });
    }
    Ok(rows)
}

/// Critical cells organized for boundary computations, plus the oriented
/// incidence of the full complex (plane arrangements only).
pub struct MorseComplex {
    /// critical cells by dimension, each sorted by cell id
    pub critical: Vec<Vec<usize>>,
    pub oriented: OrientedComplex,
}

/// Picks, for every 2-cell, the boundary edge that receives incidence +1:
/// the matching partner for cells in the class of the first chamber,
/// otherwise the wall of the cell's chamber through the point that does
/// not separate it from the first chamber (falling back to the wall
/// closest to the base point).
pub fn designated_edges(
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
    matching: &Matching,
) -> BTreeMap<usize, usize> {
    let flat_d2 = &base.flat_dist2;
    let mut out = BTreeMap::new();
    if complex.by_dim.len() <= 2 {
        return out;
    }
    for &z in &complex.by_dim[2] {
        let cell = &complex.cells[z];
        let (class_c, _) = matching.eta[z];
        let edge = if class_c == base.c0 {
            matching.partner[z].expect("2-cells in the first class are matched")
        } else {
            // the two walls of D through p
            let wall_faces: Vec<usize> = (0..geom.faces.len())
                .filter(|&f| {
                    geom.faces[f].codim == 1
                        && geom.face_leq(cell.chamber, f)
                        && geom.face_leq(f, cell.face)
                })
                .collect();
            assert_eq!(wall_faces.len(), 2, "a chamber has two walls through a corner");
            let c0_sign = &geom.faces[base.c0].sign;
            let d_sign = &geom.faces[cell.chamber].sign;
            let non_separating: Vec<usize> = wall_faces
                .iter()
                .copied()
                .filter(|&f| {
                    let line = *geom.faces[f].support().iter().next().unwrap();
                    d_sign[line] == c0_sign[line]
                })
                .collect();
            let pick = match non_separating.len() {
                1 => non_separating[0],
                _ => {
                    let candidates =
                        if non_separating.is_empty() { &wall_faces } else { &non_separating };
                    candidates
                        .iter()
                        .copied()
                        .min_by(|&a, &b| {
                            flat_d2[geom.faces[a].flat].cmp(&flat_d2[geom.faces[b].flat])
                        })
                        .unwrap()
                }
            };
            complex.cell_id(cell.chamber, pick).expect("wall edge cell")
        };
        out.insert(z, edge);
    }
    out
}

impl MorseComplex {
    /// Builds orientations per the designated-edge rule; plane arrangements only.
    pub fn build(
        geom: &Geometry,
        complex: &CellComplex,
        base: &BasePoint,
        matching: &Matching,
    ) -> Result<MorseComplex> {
        if geom.arr.dim != 2 {
            return Err(Error::UnsupportedDimension(geom.arr.dim));
        }
        let edges = designated_edges(geom, complex, base, matching);
        let oriented = orient_cells(geom, complex, |z| edges[&z])?;
        let max_dim = complex.by_dim.len();
        let mut critical = vec![Vec::new(); max_dim];
        for &id in &matching.critical {
            critical[complex.cells[id].dim].push(id);
        }
        Ok(MorseComplex { critical, oriented })
    }

    pub fn critical_at(&self, dim: usize) -> &[usize] {
        self.critical.get(dim).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Closed form of the Morse boundary from critical 1-cells to the critical
/// 0-cell: the entry of `<C,F>` is `1 - t_{|F|}`.
pub fn d1_morse(geom: &Geometry, complex: &CellComplex, morse: &MorseComplex) -> Vec<Vec<LaurentPoly>> {
    let m = geom.arr.size();
    morse
        .critical_at(1)
        .iter()
        .map(|&id| {
            let f = complex.cells[id].face;
            let line = *geom.faces[f].support().iter().next().unwrap();
            let one = LaurentPoly::one(m);
            let t = LaurentPoly::var(m, line);
            vec![&one - &t]
        })
        .collect()
}

/// Morse boundary `1 -> 0` recomputed by explicit alternating-path
/// enumeration over the full twisted complex; audit for [`d1_morse`].
pub fn d1_morse_paths(
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
    matching: &Matching,
    morse: &MorseComplex,
) -> Vec<Vec<LaurentPoly>> {
    let m = geom.arr.size();
    let c0_cell = morse.critical_at(0)[0];
    let twisted = |upper: usize, lower: usize| -> LaurentPoly {
        let s = morse.oriented.incidence(upper, lower);
        debug_assert!(s != 0);
        let u = &complex.cells[upper];
        let rep_u = geom.opposite(u.chamber, u.face).unwrap();
        let l = &complex.cells[lower];
        let rep_l = geom.opposite(l.chamber, l.face).unwrap();
        let mono = loop_monomial(geom, rep_u, rep_l, base.c0);
        if s > 0 {
            mono
        } else {
            -&mono
        }
    };

    let mut rows = Vec::new();
    for &start in morse.critical_at(1) {
        // paths: sigma_0 \ tau_1 / sigma_1 \ ... \ tau_end
        let mut acc = LaurentPoly::zero(m);
        // stack entries: (sigma, accumulated coefficient, parity k)
        let mut stack: Vec<(usize, LaurentPoly, usize)> =
            vec![(start, LaurentPoly::one(m), 0)];
        while let Some((sigma, coeff, k)) = stack.pop() {
            for &tau in &complex.boundary[sigma] {
                if matching.partner[sigma] == Some(tau) {
                    continue;
                }
                if tau == c0_cell {
                    // terminal segment: m(path) picks up (-1)^k [sigma_k : tau]
                    let mut term = &coeff * &twisted(sigma, tau);
                    if k % 2 == 1 {
                        term = -&term;
                    }
                    acc = &acc + &term;
                } else if let Some(next) = matching.partner[tau] {
                    if complex.cells[next].dim == complex.cells[sigma].dim && next != sigma {
                        let step = &twisted(sigma, tau) * &twisted(next, tau);
                        stack.push((next, &coeff * &step, k + 1));
                    }
                }
            }
        }
        rows.push(vec![acc]);
    }
    rows
}

/// Precomputed pivot and owner tables for the arrow machinery on the
/// codimension-1 faces of a plane arrangement.
pub struct ArrowData {
    /// face id -> pivot vertex face, where defined
    pivots: BTreeMap<usize, Option<usize>>,
    /// face id -> chamber on the far side of the face's line
    owners: BTreeMap<usize, usize>,
    codim1: Vec<usize>,
}

impl ArrowData {
    pub fn new(geom: &Geometry, base: &BasePoint) -> ArrowData {
        let codim1: Vec<usize> =
            (0..geom.faces.len()).filter(|&f| geom.faces[f].codim == 1).collect();
        let mut pivots = BTreeMap::new();
        let mut owners = BTreeMap::new();
        for &f in &codim1 {
            let line_flat = geom.faces[f].flat;
            let rho = &base.flat_proj[line_flat];
            let piv = if base.flat_proj_signs[line_flat] == geom.faces[f].sign {
                None // the face contains its line's nearest point
            } else {
                (0..geom.faces.len())
                    .filter(|&v| geom.faces[v].codim == 2 && geom.face_leq(f, v))
                    .min_by(|&a, &b| {
                        dist2(&geom.faces[a].witness, rho)
                            .cmp(&dist2(&geom.faces[b].witness, rho))
                    })
            };
            pivots.insert(f, piv);
            let line = *geom.faces[f].support().iter().next().unwrap();
            let want = -geom.faces[base.c0].sign[line];
            let owner = geom
                .chambers
                .iter()
                .copied()
                .find(|&c| geom.face_leq(c, f) && geom.faces[c].sign[line] == want)
                .expect("every codim-1 face has a chamber on the far side");
            owners.insert(f, owner);
        }
        ArrowData { pivots, owners, codim1 }
    }

    pub fn pivot(&self, f: usize) -> Option<usize> {
        self.pivots.get(&f).copied().flatten()
    }

    pub fn owner(&self, f: usize) -> usize {
        self.owners[&f]
    }

    /// The arrow relation: `f -> g` when they meet exactly in the pivot of
    /// `f`, and either they span the same line or `f` lies on the base
    /// chamber's side of `|g|`.
    pub fn arrow(&self, geom: &Geometry, base: &BasePoint, f: usize, g: usize) -> bool {
        if f == g || geom.faces[f].codim != 1 || geom.faces[g].codim != 1 {
            return false;
        }
        let Some(p) = self.pivot(f) else { return false };
        if !geom.face_leq(g, p) {
            return false;
        }
        let line_f = *geom.faces[f].support().iter().next().unwrap();
        let line_g = *geom.faces[g].support().iter().next().unwrap();
        if line_f == line_g {
            return true;
        }
        geom.faces[f].sign[line_g] == geom.faces[base.c0].sign[line_g]
    }

    /// The Laurent value of an arrow step: a signed product of the
    /// variables of the lines through the pivot that separate `g` from the
    /// base chamber while keeping `f` weakly on the base side. The sign is
    /// positive exactly when both pivots are defined and equal.
    pub fn arrow_value(
        &self,
        geom: &Geometry,
        base: &BasePoint,
        f: usize,
        g: usize,
    ) -> LaurentPoly {
        debug_assert!(self.arrow(geom, base, f, g));
        let m = geom.arr.size();
        let p = self.pivot(f).expect("arrow source has a pivot");
        let line_g = *geom.faces[g].support().iter().next().unwrap();
        let c0_sign = &geom.faces[base.c0].sign;
        let lines: Vec<usize> = geom.faces[p]
            .support()
            .into_iter()
            .filter(|&l| {
                l != line_g
                    && geom.faces[g].sign[l] == -c0_sign[l]
                    && (geom.faces[f].sign[l] == 0 || geom.faces[f].sign[l] == c0_sign[l])
            })
            .collect();
        let mono = LaurentPoly::monomial_of(m, lines);
        if self.pivot(g) == Some(p) {
            mono
        } else {
            -&mono
        }
    }

    /// All arrow-step sequences from the boundary of the critical 2-cell
    /// `z` to each critical codimension-1 face, as lists of face ids.
    /// Enumeration is a DFS with an explicit cycle guard.
    pub fn sequences_from(
        &self,
        geom: &Geometry,
        complex: &CellComplex,
        base: &BasePoint,
        z: usize,
    ) -> Result<BTreeMap<usize, Vec<Vec<usize>>>> {
        let cell = &complex.cells[z];
        debug_assert_eq!(cell.dim, 2);
        // admissible starts: boundary cells of z of the form <C(F1), F1>
        let starts: Vec<usize> = self
            .codim1
            .iter()
            .copied()
            .filter(|&f| {
                geom.face_leq(f, cell.face)
                    && geom.project_face(cell.chamber, f) == self.owner(f)
            })
            .collect();
        let mut out: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        let mut path: Vec<usize> = Vec::new();
        for &s in &starts {
            self.dfs(geom, base, s, &mut path, &mut out)?;
        }
        Ok(out)
    }

    fn dfs(
        &self,
        geom: &Geometry,
        base: &BasePoint,
        f: usize,
        path: &mut Vec<usize>,
        out: &mut BTreeMap<usize, Vec<Vec<usize>>>,
    ) -> Result<()> {
        if path.contains(&f) {
            return Err(Error::Internal("cycle in the arrow digraph".into()));
        }
        path.push(f);
        if self.pivot(f).is_none() {
            // terminal: the face containing its line's projection is critical
            out.entry(f).or_default().push(path.clone());
        } else {
            for &g in &self.codim1 {
                if self.arrow(geom, base, f, g) {
                    self.dfs(geom, base, g, path, out)?;
                }
            }
        }
        path.pop();
        Ok(())
    }
}

/// Pivot of a codimension-1 face: the endpoint nearer to the projection of
/// the base point onto the face's line, defined only when the projection
/// falls outside the face. Returns the vertex face id.
pub fn pivot(geom: &Geometry, base: &BasePoint, f: usize) -> Result<usize> {
    debug_assert_eq!(geom.faces[f].codim, 1);
    ArrowData::new(geom, base).pivot(f).ok_or_else(|| {
        Error::Usage("pivot undefined: the face contains its line's nearest point".into())
    })
}

/// The chamber of `f` on the far side of `|f|` from the base chamber.
pub fn owner_chamber(geom: &Geometry, base: &BasePoint, f: usize) -> usize {
    ArrowData::new(geom, base).owner(f)
}

/// One-off form of [`ArrowData::arrow`].
pub fn arrow(geom: &Geometry, base: &BasePoint, f: usize, g: usize) -> bool {
    ArrowData::new(geom, base).arrow(geom, base, f, g)
}

/// One-off form of [`ArrowData::arrow_value`].
pub fn arrow_value(geom: &Geometry, base: &BasePoint, f: usize, g: usize) -> LaurentPoly {
    ArrowData::new(geom, base).arrow_value(geom, base, f, g)
}

/// One-off form of [`ArrowData::sequences_from`].
pub fn sequences_from(
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
    z: usize,
) -> Result<BTreeMap<usize, Vec<Vec<usize>>>> {
    ArrowData::new(geom, base).sequences_from(geom, complex, base, z)
}

/// Closed-form Morse boundary from critical 2-cells to critical 1-cells.
pub fn d2_morse(
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
    morse: &MorseComplex,
) -> Result<Vec<Vec<LaurentPoly>>> {
    let m = geom.arr.size();
    let crit1 = morse.critical_at(1);
    let col_of: BTreeMap<usize, usize> = crit1
        .iter()
        .enumerate()
        .map(|(k, &id)| (complex.cells[id].face, k))
        .collect();
    let arrows = ArrowData::new(geom, base);
    let mut rows = Vec::new();
    for &z in morse.critical_at(2) {
        let zc = &complex.cells[z];
        let rep_z = geom.opposite(zc.chamber, zc.face).unwrap();
        let mut row = vec![LaurentPoly::zero(m); crit1.len()];
        let sequences = arrows.sequences_from(geom, complex, base, z)?;
        for (target, seqs) in sequences {
            let Some(&col) = col_of.get(&target) else {
                return Err(Error::Internal(
                    "sequence terminated at a non-critical face".into(),
                ));
            };
            for seq in seqs {
                let f1 = seq[0];
                let c_f1 = arrows.owner(f1);
                let e1 = complex.cell_id(c_f1, f1).expect("boundary cell");
                let inc = morse.oriented.incidence(z, e1);
                debug_assert!(inc != 0, "start cell lies on the boundary polygon");
                let rep_e = geom.opposite(c_f1, f1).unwrap();
                let mut w = loop_monomial(geom, rep_z, rep_e, base.c0);
                if inc < 0 {
                    w = -&w;
                }
                if seq.len() % 2 == 1 {
                    w = -&w; // (-1)^n for a sequence of length n
                }
                for pair in seq.windows(2) {
                    w = &w * &arrows.arrow_value(geom, base, pair[0], pair[1]);
                }
                row[col] = &row[col] + &w;
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Reduces the full twisted complex by Gaussian elimination of the matched
/// pairs (pivots must be units); returns the boundary matrices on critical
/// cells. This is the generic oracle the closed forms are checked against.
pub fn algebraic_morse_reduce(
    geom: &Geometry,
    complex: &CellComplex,
    matching: &Matching,
    d1_full: &[Vec<LaurentPoly>],
    d2_full: &[Vec<LaurentPoly>],
) -> Result<(Vec<Vec<LaurentPoly>>, Vec<Vec<LaurentPoly>>)> {
    let m = geom.arr.size();
    let dim0 = &complex.by_dim[0];
    let empty: Vec<usize> = Vec::new();
    let dim1 = complex.by_dim.get(1).unwrap_or(&empty);
    let dim2 = complex.by_dim.get(2).unwrap_or(&empty);

    // sparse rows keyed by cell ids
    let mut rows1: BTreeMap<usize, BTreeMap<usize, LaurentPoly>> = BTreeMap::new();
    for (r, &e) in dim1.iter().enumerate() {
        let mut row = BTreeMap::new();
        for (c, &v) in dim0.iter().enumerate() {
            if !d1_full[r][c].is_zero() {
                row.insert(v, d1_full[r][c].clone());
            }
        }
        rows1.insert(e, row);
    }
    let mut rows2: BTreeMap<usize, BTreeMap<usize, LaurentPoly>> = BTreeMap::new();
    for (r, &z) in dim2.iter().enumerate() {
        let mut row = BTreeMap::new();
        for (c, &e) in dim1.iter().enumerate() {
            if !d2_full[r][c].is_zero() {
                row.insert(e, d2_full[r][c].clone());
            }
        }
        rows2.insert(z, row);
    }

    let eliminate = |rows: &mut BTreeMap<usize, BTreeMap<usize, LaurentPoly>>,
                     pairs: &[(usize, usize)]|
     -> Result<()> {
        let mut remaining: Vec<(usize, usize)> = pairs.to_vec();
        while !remaining.is_empty() {
            let at = remaining
                .iter()
                .position(|&(u, l)| {
                    rows.get(&u).and_then(|r| r.get(&l)).map(|p| p.is_unit()).unwrap_or(false)
                })
                .ok_or_else(|| {
                    Error::Internal("no unit pivot among remaining matched pairs".into())
                })?;
            let (u, l) = remaining.swap_remove(at);
            let pivot_row = rows.remove(&u).unwrap();
            let pivot_inv = pivot_row[&l].unit_inverse().unwrap();
            let others: Vec<usize> = rows
                .iter()
                .filter(|(_, row)| row.contains_key(&l))
                .map(|(&w, _)| w)
                .collect();
            for w in others {
                let factor = &rows[&w][&l] * &pivot_inv;
                let row = rows.get_mut(&w).unwrap();
                for (&col, val) in &pivot_row {
                    let delta = &factor * val;
                    let entry = row.entry(col).or_insert_with(|| LaurentPoly::zero(m));
                    *entry = &*entry - &delta;
                    if entry.is_zero() {
                        row.remove(&col);
                    }
                }
                debug_assert!(!row.contains_key(&l));
            }
        }
        Ok(())
    };

    // (2,1) pairs act on rows2; (1,0) pairs act on rows1
    let pairs21: Vec<(usize, usize)> = matching
        .pairs
        .iter()
        .copied()
        .filter(|&(u, _)| complex.cells[u].dim == 2)
        .collect();
    let pairs10: Vec<(usize, usize)> = matching
        .pairs
        .iter()
        .copied()
        .filter(|&(u, _)| complex.cells[u].dim == 1)
        .collect();
    eliminate(&mut rows2, &pairs21)?;
    eliminate(&mut rows1, &pairs10)?;

    // assemble critical-by-critical matrices
    let crit: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new(); complex.by_dim.len()];
        for &id in &matching.critical {
            v[complex.cells[id].dim].push(id);
        }
        v
    };
    let crit0 = &crit[0];
    let crit1 = crit.get(1).cloned().unwrap_or_default();
    let crit2 = crit.get(2).cloned().unwrap_or_default();
    let d1_red: Vec<Vec<LaurentPoly>> = crit1
        .iter()
        .map(|e| {
            crit0
                .iter()
                .map(|v| rows1[e].get(v).cloned().unwrap_or_else(|| LaurentPoly::zero(m)))
                .collect()
        })
        .collect();
    // The 2-level boundary is emitted in the sign convention that weights a
    // chain of n boundary faces by (-1)^n; elimination natively produces
    // (-1)^(n-1), so the rows flip (the complexes differ by negating the
    // critical 2-cell basis).
    let d2_red: Vec<Vec<LaurentPoly>> = crit2
        .iter()
        .map(|z| {
            crit1
                .iter()
                .map(|e| {
                    rows2[z]
                        .get(e)
                        .map(|p| -p)
                        .unwrap_or_else(|| LaurentPoly::zero(m))
                })
                .collect()
        })
        .collect();
    Ok((d1_red, d2_red))
}

/// Everything the local-homology pipeline produces for a plane arrangement.
pub struct LocalHomology {
    pub morse: MorseComplex,
    pub d1: Vec<Vec<LaurentPoly>>,
    pub d2: Vec<Vec<LaurentPoly>>,
    pub invariants: InvariantFactors,
}

/// Full pipeline: orientations, closed-form Morse boundaries, and the
/// invariant factors of first homology after `t_i -> t`.
pub fn local_homology(
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
    matching: &Matching,
) -> Result<LocalHomology> {
    let morse = MorseComplex::build(geom, complex, base, matching)?;
    let d1 = d1_morse(geom, complex, &morse);
    let d2 = d2_morse(geom, complex, base, &morse)?;
    let invariants = h1_invariants(&d2, &d1);
    Ok(LocalHomology { morse, d1, d2, invariants })
}

/// The full (unreduced) twisted complex of a plane arrangement, as an
/// independent route to the same homology.
pub fn full_twisted_complex(
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
    matching: &Matching,
) -> Result<(Vec<Vec<LaurentPoly>>, Vec<Vec<LaurentPoly>>, MorseComplex)> {
    let morse = MorseComplex::build(geom, complex, base, matching)?;
    let (d1, d2) = twisted_boundaries(geom, complex, &morse.oriented, base.c0);
    Ok((d1, d2, morse))
}

/// `d1 . d2 = 0` over the Laurent ring (matrices row-major:
/// `d2[2][1]`, `d1[1][0]`).
pub fn chain_condition(d2: &[Vec<LaurentPoly>], d1: &[Vec<LaurentPoly>], nvars: usize) -> bool {
    let n0 = d1.first().map(|r| r.len()).unwrap_or(0);
    for row2 in d2 {
        for k in 0..n0 {
            let mut acc = LaurentPoly::zero(nvars);
            for (j, v) in row2.iter().enumerate() {
                if !v.is_zero() && !d1[j][k].is_zero() {
                    acc = &acc + &(v * &d1[j][k]);
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Every entry of the matrix vanishes under `t_i -> 1`.
pub fn vanishes_at_one(mat: &[Vec<LaurentPoly>]) -> bool {
    mat.iter().flatten().all(|p| p.eval_all_one() == crate::rational::Int::from(0))
}

/// Entrywise equality of Laurent matrices.
pub fn matrices_equal(a: &[Vec<LaurentPoly>], b: &[Vec<LaurentPoly>]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(ra, rb)| {
            ra.len() == rb.len() && ra.iter().zip(rb).all(|(x, y)| x == y)
        })
}

/// Checks the arrow digraph over all codimension-1 faces for cycles.
pub fn arrow_digraph_acyclic(geom: &Geometry, base: &BasePoint) -> bool {
    let arrows = ArrowData::new(geom, base);
    let codim1: Vec<usize> =
        (0..geom.faces.len()).filter(|&f| geom.faces[f].codim == 1).collect();
    let mut edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &f in &codim1 {
        for &g in &codim1 {
            if arrows.arrow(geom, base, f, g) {
                edges.entry(f).or_default().push(g);
            }
        }
    }
    crate::matching::digraph_is_acyclic(&edges)
}

/// Matched pairs crossing dimensions 1/2 and 0/1 must have oriented
/// incidence exactly +1 under the chosen conventions.
pub fn matched_incidences_all_plus_one(matching: &Matching, morse: &MorseComplex) -> bool {
    matching.pairs.iter().all(|&(u, l)| morse.oriented.incidence(u, l) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rat;
    use std::collections::BTreeSet;
    use crate::arrangement::parse_arrangement;
    use crate::matching::assemble_matching;
    use crate::rational::{qvec, rat, rat_frac};
    use crate::salvetti::CellComplex;

    fn setup(text: &str, x0: &[Rat]) -> (Geometry, CellComplex, BasePoint, Matching) {
        let g = Geometry::new(parse_arrangement(text).unwrap());
        let cx = CellComplex::build(&g);
        let base = BasePoint::new(&g, x0).unwrap();
        let m = assemble_matching(&g, &cx, &base).unwrap();
        (g, cx, base, m)
    }

    #[test]
    fn betti_fixtures() {
        let (g, _, base, _) = setup("dim 2\n1 0 0\n0 1 0\n", &[rat(1), rat_frac(1, 2)]);
        assert_eq!(betti_numbers(&g, &base), vec![1, 2, 1]);

        let (g, _, base, _) = setup(
            "dim 2\n5 -12 -12\n6 -1 54\n5 12 60\n0 1 3\n",
            &[rat(8), rat_frac(7, 2)],
        );
        assert_eq!(betti_numbers(&g, &base), vec![1, 4, 5]);

        let (g, _, base, _) = setup(
            "dim 2\n2 2 13\n2 -2 7\n0 1 4\n2 2 23\n2 -2 -3\n",
            &[rat(6), rat_frac(18, 5)],
        );
        assert_eq!(betti_numbers(&g, &base), vec![1, 5, 6]);
    }

    #[test]
    fn brieskorn_deconed_a3() {
        let (g, _, base, _) = setup(
            "dim 2\n2 2 13\n2 -2 7\n0 1 4\n2 2 23\n2 -2 -3\n",
            &[rat(6), rat_frac(18, 5)],
        );
        let rows = brieskorn_counts(&g, &base).unwrap();
        assert!(rows.iter().all(|r| r.passed));
        // ambient flat: only the first chamber
        let ambient = g.flats.ambient_index();
        assert_eq!(rows.iter().find(|r| r.flat == ambient).unwrap().count, 1);
        // the triple point at (5/2, 4) owns two chambers
        let triple = g
            .flats
            .flats
            .iter()
            .position(|f| f.codim == 2 && f.support.len() == 3 && f.point[0] == rat_frac(5, 2))
            .unwrap();
        assert_eq!(rows.iter().find(|r| r.flat == triple).unwrap().count, 2);
    }

    #[test]
    fn loop_monomials() {
        let (g, _, base, _) = setup("dim 2\n1 0 0\n0 1 0\n", &[rat(1), rat_frac(1, 2)]);
        let pp = g.face_by_sign(&[1, 1]).unwrap();
        let mp = g.face_by_sign(&[-1, 1]).unwrap();
        let mm = g.face_by_sign(&[-1, -1]).unwrap();
        assert!(loop_monomial(&g, pp, pp, base.c0).is_one());
        // x = 0 separates both pairs
        assert_eq!(loop_monomial(&g, pp, mp, base.c0), LaurentPoly::var(2, 0));
        // adjacent chambers across a wall on the base side contribute 1
        assert!(loop_monomial(&g, mm, pp, base.c0).is_one());
    }

    #[test]
    fn bool2_chain_complex_and_reduction() {
        let (g, cx, base, m) = setup("dim 2\n1 0 0\n0 1 0\n", &[rat(1), rat_frac(1, 2)]);
        let (d1f, d2f, morse) = full_twisted_complex(&g, &cx, &base, &m).unwrap();
        assert!(chain_condition(&d2f, &d1f, 2));
        assert!(matched_incidences_all_plus_one(&m, &morse));

        let d1 = d1_morse(&g, &cx, &morse);
        let d2 = d2_morse(&g, &cx, &base, &morse).unwrap();
        assert!(chain_condition(&d2, &d1, 2));
        assert!(vanishes_at_one(&d1));
        assert!(vanishes_at_one(&d2));

        let (d1r, d2r) = algebraic_morse_reduce(&g, &cx, &m, &d1f, &d2f).unwrap();
        assert!(matrices_equal(&d1, &d1r));
        assert!(matrices_equal(&d2, &d2r));

        // specialized homology from the Morse complex and the full complex agree
        let inv_m = h1_invariants(&d2, &d1);
        let inv_f = h1_invariants(&d2f, &d1f);
        assert_eq!(inv_m, inv_f);
    }

    #[test]
    fn one_line_d1() {
        let (g, cx, base, m) = setup("dim 2\n1 0 0\n", &[rat(1), rat(0)]);
        let morse = MorseComplex::build(&g, &cx, &base, &m).unwrap();
        let d1 = d1_morse(&g, &cx, &morse);
        assert_eq!(d1.len(), 1);
        let one = LaurentPoly::one(1);
        let t = LaurentPoly::var(1, 0);
        assert_eq!(d1[0][0], &one - &t);
        let paths = d1_morse_paths(&g, &cx, &base, &m, &morse);
        assert!(matrices_equal(&d1, &paths));
    }

    #[test]
    fn d1_path_audit_bool2() {
        let (g, cx, base, m) = setup("dim 2\n1 0 0\n0 1 0\n", &[rat(1), rat_frac(1, 2)]);
        let morse = MorseComplex::build(&g, &cx, &base, &m).unwrap();
        let d1 = d1_morse(&g, &cx, &morse);
        let paths = d1_morse_paths(&g, &cx, &base, &m, &morse);
        assert!(matrices_equal(&d1, &paths));
    }

    #[test]
    fn bool2_sequences() {
        let (g, cx, base, m) = setup("dim 2\n1 0 0\n0 1 0\n", &[rat(1), rat_frac(1, 2)]);
        let _ = m;
        // the critical 2-cell is <(-,-), origin>
        let mm = g.face_by_sign(&[-1, -1]).unwrap();
        let origin = g.face_by_sign(&[0, 0]).unwrap();
        let z = cx.cell_id(mm, origin).unwrap();
        let seqs = sequences_from(&g, &cx, &base, z).unwrap();
        // target: the positive-x ray (the critical face on y = 0)
        let target = g.face_by_sign(&[1, 0]).unwrap();
        let to_target = &seqs[&target];
        assert_eq!(to_target.len(), 2);
        let lengths: BTreeSet<usize> = to_target.iter().map(|s| s.len()).collect();
        assert_eq!(lengths, BTreeSet::from([1, 2]));
        // the length-2 sequence passes through the negative-x ray
        let via = g.face_by_sign(&[-1, 0]).unwrap();
        assert!(to_target.iter().any(|s| s.as_slice() == [via, target]));
    }

    #[test]
    fn arrow_examples_bool2() {
        let (g, _, base, _) = setup("dim 2\n1 0 0\n0 1 0\n", &[rat(1), rat_frac(1, 2)]);
        let neg_x = g.face_by_sign(&[-1, 0]).unwrap();
        let pos_x = g.face_by_sign(&[1, 0]).unwrap();
        let pos_y = g.face_by_sign(&[0, 1]).unwrap();
        // collinear arrow across the origin
        assert!(arrow(&g, &base, neg_x, pos_x));
        // blocked: the negative-x ray is on the far side of x = 0
        assert!(!arrow(&g, &base, neg_x, pos_y));
        // pivot of the negative-x ray is the origin
        let origin = g.face_by_sign(&[0, 0]).unwrap();
        assert_eq!(pivot(&g, &base, neg_x).unwrap(), origin);
        assert!(pivot(&g, &base, pos_x).is_err());
        // empty product, pivot of target undefined: value is -1
        let v = arrow_value(&g, &base, neg_x, pos_x);
        assert_eq!(v, -&LaurentPoly::one(2));
        assert!(arrow_digraph_acyclic(&g, &base));
    }

    #[test]
    fn owner_chambers() {
        let (g, _, base, _) = setup("dim 2\n1 0 0\n0 1 0\n", &[rat(1), rat_frac(1, 2)]);
        let pos_x = g.face_by_sign(&[1, 0]).unwrap();
        // base chamber is (+,+); the owner of the positive-x ray is below
        assert_eq!(owner_chamber(&g, &base, pos_x), g.face_by_sign(&[1, -1]).unwrap());
    }

    #[test]
    fn unsupported_dimension() {
        let g = Geometry::new(parse_arrangement("dim 3\n1 0 0 0\n").unwrap());
        let cx = CellComplex::build(&g);
        let base = BasePoint::new(&g, &qvec(&[1, 2, 3])).unwrap();
        let m = assemble_matching(&g, &cx, &base).unwrap();
        assert!(matches!(
            MorseComplex::build(&g, &cx, &base, &m),
            Err(Error::UnsupportedDimension(3))
        ));
    }
}
