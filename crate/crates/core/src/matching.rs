//! Distance-based acyclic matchings on the Salvetti complex.
//!
//! Chambers are ordered by exact squared distance from a generic base
//! point. Every cell `<D,F>` belongs to the class of the unique chamber
//! `C` with `C.F = D` and `F` inside the flat generated by `C`'s
//! projection face; classes split further into fibers indexed by the
//! opposite chamber `E = D^F`. Non-special fibers are isomorphic to the
//! poset of faces of a polytope visible from an exterior point and carry a
//! perfect acyclic matching; the union over all fibers is the matching,
//! with one critical cell per chamber.

use crate::error::{Error, Result};
use crate::faces::Geometry;
use crate::rational::{QVec, Rat};
use crate::salvetti::CellComplex;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Projection data of one chamber relative to the base point.
#[derive(Clone, Debug)]
pub struct ChamberProj {
    /// nearest point of the closed chamber
    pub point: QVec,
    /// face whose relative interior contains the nearest point
    pub f_c: usize,
    pub dist2: Rat,
    /// flat spanned by `f_c`
    pub x_c: usize,
}

/// How equal-distance chambers are ordered. Any choice yields a valid
/// order; the matching data outside the fibers does not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    LexSign,
    RevLexSign,
}

/// A Euclidean chamber order with its per-chamber projection data.
#[derive(Clone, Debug)]
pub struct BasePoint {
    pub x0: QVec,
    /// chamber containing `x0`
    pub c0: usize,
    /// chamber face ids by increasing distance
    pub order: Vec<usize>,
    pub rank: BTreeMap<usize, usize>,
    pub proj: BTreeMap<usize, ChamberProj>,
    /// squared distance from `x0` to each flat
    pub flat_dist2: Vec<Rat>,
    /// nearest point of each flat
    pub flat_proj: Vec<QVec>,
    /// sign vector of each flat's nearest point
    pub flat_proj_signs: Vec<Vec<i8>>,
}

impl BasePoint {
    pub fn new(geom: &Geometry, x0: &[Rat]) -> Result<BasePoint> {
        Self::with_tiebreak(geom, x0, TieBreak::LexSign)
    }

    pub fn with_tiebreak(geom: &Geometry, x0: &[Rat], tb: TieBreak) -> Result<BasePoint> {
        // One projection per flat; every face on the flat reuses it.
        let flat_proj: Vec<(QVec, Vec<i8>, Rat)> = geom
            .flats
            .flats
            .iter()
            .map(|flat| {
                let rows: Vec<QVec> = flat
                    .support
                    .iter()
                    .map(|&i| geom.arr.hyperplanes[i].normal_q())
                    .collect();
                let rhs: Vec<Rat> = flat
                    .support
                    .iter()
                    .map(|&i| geom.arr.hyperplanes[i].offset_q())
                    .collect();
                let p = crate::linalg::project_affine(&rows, &rhs, x0)
                    .expect("flat is nonempty");
                let signs = geom.arr.signs_at(&p);
                let d2 = crate::rational::dist2(x0, &p);
                (p, signs, d2)
            })
            .collect();
        let flat_dist2: Vec<Rat> = flat_proj.iter().map(|(_, _, d)| d.clone()).collect();
        let flat_points: Vec<QVec> = flat_proj.iter().map(|(p, _, _)| p.clone()).collect();
        let flat_signs: Vec<Vec<i8>> = flat_proj.iter().map(|(_, s, _)| s.clone()).collect();
        let mut sorted = flat_dist2.clone();
        sorted.sort();
        if !sorted.windows(2).all(|w| w[0] != w[1]) {
            return Err(Error::NotGeneric(format!(
                "two flats are equidistant from ({})",
                x0.iter().map(crate::rational::fmt_rat).collect::<Vec<_>>().join(", ")
            )));
        }
        let mut proj = BTreeMap::new();
        for &c in &geom.chambers {
            let mut best: Option<(usize, &Rat)> = None;
            for f in geom.faces_of_chamber(c) {
                let (_, signs, d2) = &flat_proj[geom.faces[f].flat];
                if signs != &geom.faces[f].sign {
                    continue; // nearest point of the flat misses this face
                }
                match best {
                    Some((_, b)) if b <= d2 => {}
                    _ => best = Some((f, d2)),
                }
            }
            let (f_c, d2) = best.expect("closed chamber has a nearest point");
            let x_c = geom.faces[f_c].flat;
            proj.insert(
                c,
                ChamberProj {
                    point: flat_proj[x_c].0.clone(),
                    f_c,
                    dist2: d2.clone(),
                    x_c,
                },
            );
        }
        let mut order: Vec<usize> = geom.chambers.clone();
        order.sort_by(|&a, &b| {
            let da = &proj[&a].dist2;
            let db = &proj[&b].dist2;
            da.cmp(db).then_with(|| match tb {
                TieBreak::LexSign => geom.faces[a].sign.cmp(&geom.faces[b].sign),
                TieBreak::RevLexSign => geom.faces[b].sign.cmp(&geom.faces[a].sign),
            })
        });
        let rank: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let c0 = order[0];
        debug_assert!(proj[&c0].dist2.is_zero());
        Ok(BasePoint {
            x0: x0.to_vec(),
            c0,
            order,
            rank,
            proj,
            flat_dist2,
            flat_proj: flat_points,
            flat_proj_signs: flat_signs,
        })
    }

    /// Audit of the valid-order property: for every chamber `C`, the flats
    /// meeting every separator set `s(C, C')` with `C'` earlier are exactly
    /// the flats contained in `X_C`.
    pub fn audit_valid_order(&self, geom: &Geometry) -> Result<()> {
        for (pos, &c) in self.order.iter().enumerate() {
            let xc = self.proj[&c].x_c;
            let xc_supp = &geom.flats.flats[xc].support;
            for (x, flat) in geom.flats.flats.iter().enumerate() {
                let in_ideal = self.order[..pos].iter().all(|&earlier| {
                    let s = geom.separators(c, earlier);
                    flat.support.iter().any(|h| s.contains(h))
                });
                let principal = xc_supp.is_subset(&flat.support);
                if in_ideal != principal {
                    return Err(Error::Internal(format!(
                        "valid-order audit failed at chamber {} flat {}",
                        geom.faces[c].sign_string(),
                        x
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The class chamber of a cell `<D,F>`: the unique `C` with `C.F = D` and
/// `supp(X_C)` contained in `supp(F)`.
pub fn class_chamber(geom: &Geometry, base: &BasePoint, chamber_d: usize, face_f: usize) -> usize {
    let supp = geom.faces[face_f].support();
    let mut found: Option<usize> = None;
    for &c in &geom.chambers {
        let projects = supp
            .iter()
            .all(|&i| geom.faces[c].sign[i] == geom.faces[chamber_d].sign[i]);
        if !projects {
            continue;
        }
        let xc = base.proj[&c].x_c;
        if geom.flats.flats[xc].support.is_subset(&supp) {
            debug_assert!(found.is_none(), "class chamber must be unique");
            found = Some(c);
            #[cfg(not(debug_assertions))]
            break;
        }
    }
    found.expect("every cell has a class chamber")
}

/// First chamber in the Euclidean order whose projection through `F` is
/// `D`; agrees with [`class_chamber`] and serves as its audit.
pub fn class_chamber_by_scan(
    geom: &Geometry,
    base: &BasePoint,
    chamber_d: usize,
    face_f: usize,
) -> usize {
    let supp = geom.faces[face_f].support();
    *base
        .order
        .iter()
        .find(|&&c| {
            supp.iter().all(|&i| geom.faces[c].sign[i] == geom.faces[chamber_d].sign[i])
        })
        .expect("some chamber projects onto the cell")
}

/// An acyclic matching on the Salvetti complex together with the class and
/// fiber data it was assembled from.
#[derive(Clone, Debug)]
pub struct Matching {
    /// `(upper, lower)` cell pairs, `dim upper = dim lower + 1`
    pub pairs: Vec<(usize, usize)>,
    /// partner lookup by cell id
    pub partner: Vec<Option<usize>>,
    /// critical (unmatched) cell ids, sorted
    pub critical: Vec<usize>,
    /// cell id -> `(C, E)`: class chamber and opposite chamber
    pub eta: Vec<(usize, usize)>,
}

impl Matching {
    pub fn is_critical(&self, cell: usize) -> bool {
        self.partner[cell].is_none()
    }

    /// Cells of the fiber over the chamber pair `(c, e)`.
    pub fn fiber(&self, c: usize, e: usize) -> Vec<usize> {
        self.eta
            .iter()
            .enumerate()
            .filter(|(_, &key)| key == (c, e))
            .map(|(id, _)| id)
            .collect()
    }
}

/// Builds the matching for the given base point.
pub fn assemble_matching(
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
) -> Result<Matching> {
    // eta: cell -> (class chamber, opposite chamber)
    let mut eta = Vec::with_capacity(complex.len());
    for cell in &complex.cells {
        let c = class_chamber(geom, base, cell.chamber, cell.face);
        let e = geom.opposite(cell.chamber, cell.face)?;
        eta.push((c, e));
    }

    let mut fibers: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (id, &key) in eta.iter().enumerate() {
        fibers.entry(key).or_default().push(id);
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for ((c, _e), cells) in &fibers {
        if cells.len() == 1 {
            let cell = &complex.cells[cells[0]];
            let expected_face = base.proj[c].f_c;
            if cell.chamber != *c || cell.face != expected_face {
                return Err(Error::Internal(
                    "singleton fiber is not the special critical cell".into(),
                ));
            }
            continue;
        }
        pairs.extend(fiber_matching(geom, complex, base, *c, cells)?);
    }

    let mut partner = vec![None; complex.len()];
    for &(u, l) in &pairs {
        if partner[u].is_some() || partner[l].is_some() {
            return Err(Error::Internal("cell matched twice".into()));
        }
        partner[u] = Some(l);
        partner[l] = Some(u);
    }
    let critical: Vec<usize> =
        (0..complex.len()).filter(|&i| partner[i].is_none()).collect();
    Ok(Matching { pairs, partner, critical, eta })
}

/// Perfect acyclic matching on one non-special fiber.
///
/// The fiber is isomorphic to the poset of faces of a polytope of the
/// dimension of `X_C` that are visible from an exterior point. In
/// dimension <= 2 the visible proper faces form a path
/// `e1 v1 e2 ... v_{k-1} e_k`; ridges pair with the preceding facet and
/// the polytope itself pairs with the last facet. Higher-dimensional
/// fibers use a backtracking search.
fn fiber_matching(
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
    class_c: usize,
    cells: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let xc = base.proj[&class_c].x_c;
    let base_codim = geom.flats.flats[xc].codim;
    let polytope_dim = geom.arr.dim - base_codim;

    if polytope_dim <= 2 {
        path_rule_matching(geom, complex, base_codim, cells)
    } else {
        backtracking_matching(complex, cells)
    }
}

fn path_rule_matching(
    geom: &Geometry,
    complex: &CellComplex,
    base_codim: usize,
    cells: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let level = |id: usize| complex.cells[id].dim - base_codim;
    let bottom: Vec<usize> = cells.iter().copied().filter(|&c| level(c) == 0).collect();
    let facets: Vec<usize> = cells.iter().copied().filter(|&c| level(c) == 1).collect();
    let ridges: Vec<usize> = cells.iter().copied().filter(|&c| level(c) == 2).collect();
    if bottom.len() != 1 || bottom.len() + facets.len() + ridges.len() != cells.len() {
        return Err(Error::Internal("unexpected fiber shape for the path rule".into()));
    }
    let x_cell = bottom[0];

    if ridges.is_empty() {
        if facets.len() != 1 {
            return Err(Error::Internal("disconnected visible facets".into()));
        }
        return Ok(vec![(facets[0], x_cell)]);
    }

    // Ridge-facet adjacency inside the fiber, via the face order.
    let mut adj: BTreeMap<usize, Vec<usize>> = facets.iter().map(|&f| (f, vec![])).collect();
    let mut ridge_ends: Vec<(usize, [usize; 2])> = Vec::new();
    for &r in &ridges {
        let rf = complex.cells[r].face;
        let ends: Vec<usize> = facets
            .iter()
            .copied()
            .filter(|&f| geom.face_leq(complex.cells[f].face, rf))
            .collect();
        if ends.len() != 2 {
            return Err(Error::Internal("ridge not between two visible facets".into()));
        }
        adj.get_mut(&ends[0]).unwrap().push(r);
        adj.get_mut(&ends[1]).unwrap().push(r);
        ridge_ends.push((r, [ends[0], ends[1]]));
    }
    // Walk the path from the smallest-labelled loose end.
    let mut endpoints: Vec<usize> =
        facets.iter().copied().filter(|f| adj[f].len() < 2).collect();
    if endpoints.is_empty() || ridges.len() + 1 != facets.len() {
        return Err(Error::Internal("visible facets do not form a path".into()));
    }
    endpoints.sort_by(|&a, &b| {
        geom.faces[complex.cells[a].face].sign.cmp(&geom.faces[complex.cells[b].face].sign)
    });
    let mut path_facets = vec![endpoints[0]];
    let mut path_ridges: Vec<usize> = Vec::new();
    let mut used: BTreeSet<usize> = BTreeSet::new();
    while path_facets.len() < facets.len() {
        let here = *path_facets.last().unwrap();
        let Some(&next_ridge) =
            adj[&here].iter().find(|r| !used.contains(r))
        else {
            return Err(Error::Internal("visible path walk got stuck".into()));
        };
        used.insert(next_ridge);
        let ends = ridge_ends.iter().find(|(r, _)| *r == next_ridge).unwrap().1;
        let next = if ends[0] == here { ends[1] } else { ends[0] };
        path_ridges.push(next_ridge);
        path_facets.push(next);
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, &r) in path_ridges.iter().enumerate() {
        pairs.push((r, path_facets[i]));
    }
    pairs.push((*path_facets.last().unwrap(), x_cell));
    Ok(pairs)
}

fn backtracking_matching(
    complex: &CellComplex,
    cells: &[usize],
) -> Result<Vec<(usize, usize)>> {
    let in_fiber: BTreeSet<usize> = cells.iter().copied().collect();
    // cover relations inside the fiber, as (upper, lower)
    let mut covers: Vec<(usize, usize)> = Vec::new();
    for &u in cells {
        for &l in &complex.boundary[u] {
            if in_fiber.contains(&l) {
                covers.push((u, l));
            }
        }
    }
    let mut candidates: BTreeMap<usize, Vec<usize>> =
        cells.iter().map(|&c| (c, vec![])).collect();
    for &(u, l) in &covers {
        candidates.get_mut(&u).unwrap().push(l);
        candidates.get_mut(&l).unwrap().push(u);
    }
    for v in candidates.values_mut() {
        v.sort_unstable();
    }

    let mut partner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    if search(cells, &covers, &candidates, &mut partner, &mut pairs, complex) {
        Ok(pairs)
    } else {
        Err(Error::Internal(
            "no perfect acyclic matching on a fiber (should be impossible)".into(),
        ))
    }
}

fn search(
    cells: &[usize],
    covers: &[(usize, usize)],
    candidates: &BTreeMap<usize, Vec<usize>>,
    partner: &mut BTreeMap<usize, usize>,
    pairs: &mut Vec<(usize, usize)>,
    complex: &CellComplex,
) -> bool {
    let Some(&next) = cells.iter().find(|c| !partner.contains_key(c)) else {
        return matched_subgraph_acyclic(covers, partner);
    };
    for &cand in &candidates[&next] {
        if partner.contains_key(&cand) {
            continue;
        }
        let (u, l) = if complex.cells[next].dim > complex.cells[cand].dim {
            (next, cand)
        } else {
            (cand, next)
        };
        partner.insert(next, cand);
        partner.insert(cand, next);
        pairs.push((u, l));
        // pruning on the matched part stays sound: edges between matched
        // cells can no longer be reversed by later choices
        if matched_subgraph_acyclic(covers, partner)
            && search(cells, covers, candidates, partner, pairs, complex)
        {
            return true;
        }
        pairs.pop();
        partner.remove(&next);
        partner.remove(&cand);
    }
    false
}

fn matched_subgraph_acyclic(
    covers: &[(usize, usize)],
    partner: &BTreeMap<usize, usize>,
) -> bool {
    let mut edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, l) in covers {
        if !(partner.contains_key(&u) && partner.contains_key(&l)) {
            continue;
        }
        if partner.get(&u) == Some(&l) {
            edges.entry(l).or_default().push(u);
        } else {
            edges.entry(u).or_default().push(l);
        }
    }
    digraph_is_acyclic(&edges)
}

pub(crate) fn digraph_is_acyclic(edges: &BTreeMap<usize, Vec<usize>>) -> bool {
    // iterative three-color DFS
    let mut color: BTreeMap<usize, u8> = BTreeMap::new();
    let nodes: Vec<usize> = edges.keys().copied().collect();
    for &start in &nodes {
        if color.get(&start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        color.insert(start, 1);
        while let Some(&mut (node, ref mut idx)) = stack.last_mut() {
            let succ = edges.get(&node).map(|v| v.as_slice()).unwrap_or(&[]);
            if *idx < succ.len() {
                let next = succ[*idx];
                *idx += 1;
                match color.get(&next).copied().unwrap_or(0) {
                    0 => {
                        color.insert(next, 1);
                        stack.push((next, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                color.insert(node, 2);
                stack.pop();
            }
        }
    }
    true
}

/// Outcome of one verification check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

/// Result of the six-point matching verification.
#[derive(Clone, Debug)]
pub struct MatchingReport {
    pub checks: Vec<Check>,
}

impl MatchingReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl std::fmt::Display for MatchingReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "check {}: {}{}",
                c.name,
                if c.passed { "ok" } else { "FAIL" },
                if c.details.is_empty() { String::new() } else { format!(" ({})", c.details) }
            )?;
        }
        Ok(())
    }
}

/// Runs the six verification checks: cover pairs, injectivity, global
/// acyclicity, fiber homogeneity, the critical-cell census, and
/// finiteness of alternating paths.
pub fn verify_matching(
    geom: &Geometry,
    complex: &CellComplex,
    base: &BasePoint,
    matching: &Matching,
) -> MatchingReport {
    let mut checks = Vec::new();

    // 1: pairs are cover relations with dimension gap one
    let mut bad = 0usize;
    for &(u, l) in &matching.pairs {
        let du = complex.cells[u].dim;
        let dl = complex.cells[l].dim;
        if du != dl + 1 || !complex.boundary[u].contains(&l) {
            bad += 1;
        }
    }
    checks.push(Check {
        name: "cover-pairs",
        passed: bad == 0,
        details: if bad > 0 { format!("{bad} non-cover pairs") } else { String::new() },
    });

    // 2: every cell appears in at most one pair
    let mut seen = vec![0usize; complex.len()];
    for &(u, l) in &matching.pairs {
        seen[u] += 1;
        seen[l] += 1;
    }
    let dup = seen.iter().filter(|&&n| n > 1).count();
    checks.push(Check {
        name: "injective",
        passed: dup == 0,
        details: if dup > 0 { format!("{dup} cells matched twice") } else { String::new() },
    });

    // 3: the matched-edge-reversed Hasse diagram is acyclic
    let mut edges: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let matched: BTreeSet<(usize, usize)> = matching.pairs.iter().copied().collect();
    for u in 0..complex.len() {
        for &l in &complex.boundary[u] {
            if matched.contains(&(u, l)) {
                edges.entry(l).or_default().push(u);
            } else {
                edges.entry(u).or_default().push(l);
            }
        }
    }
    let acyclic = digraph_is_acyclic(&edges);
    checks.push(Check {
        name: "acyclic",
        passed: acyclic,
        details: if acyclic { String::new() } else { "directed cycle found".into() },
    });

    // 4: matched cells lie in the same fiber
    let mut inhomogeneous = 0usize;
    for &(u, l) in &matching.pairs {
        if matching.eta.get(u) != matching.eta.get(l) {
            inhomogeneous += 1;
        }
    }
    checks.push(Check {
        name: "fiber-homogeneous",
        passed: inhomogeneous == 0,
        details: if inhomogeneous > 0 {
            format!("{inhomogeneous} pairs cross fibers")
        } else {
            String::new()
        },
    });

    // 5: critical cells are exactly the <C, F_C>
    let mut expected: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &c in &geom.chambers {
        expected.insert((c, base.proj[&c].f_c));
    }
    let got: BTreeSet<(usize, usize)> = matching
        .critical
        .iter()
        .map(|&id| (complex.cells[id].chamber, complex.cells[id].face))
        .collect();
    checks.push(Check {
        name: "critical-census",
        passed: expected == got,
        details: if expected == got {
            format!("{} critical cells", got.len())
        } else {
            format!("expected {} critical cells, got {}", expected.len(), got.len())
        },
    });

    // 6: alternating paths are finite (counted over the acyclic digraph)
    let (finite, total) = count_alternating_paths(complex, matching, acyclic);
    checks.push(Check {
        name: "paths-finite",
        passed: finite,
        details: if finite {
            format!("{total} alternating path steps")
        } else {
            "path enumeration hit a cycle".into()
        },
    });

    MatchingReport { checks }
}

/// Counts descending alternating paths from every cell by dynamic
/// programming over the V-step digraph; returns `(finite, total)`.
fn count_alternating_paths(
    complex: &CellComplex,
    matching: &Matching,
    acyclic: bool,
) -> (bool, u128) {
    if !acyclic {
        return (false, 0);
    }
    // V-step: from cell p, descend to q in its boundary (q not p's partner),
    // then ascend to partner(q) if that partner has p's dimension.
    let mut memo: Vec<Option<u128>> = vec![None; complex.len()];
    fn go(
        p: usize,
        complex: &CellComplex,
        matching: &Matching,
        memo: &mut Vec<Option<u128>>,
    ) -> u128 {
        if let Some(v) = memo[p] {
            return v;
        }
        let mut acc: u128 = 0;
        for &q in &complex.boundary[p] {
            if matching.partner[p] == Some(q) {
                continue;
            }
            acc += 1;
            if let Some(r) = matching.partner[q] {
                if complex.cells[r].dim == complex.cells[p].dim && r != p {
                    acc = acc.saturating_add(go(r, complex, matching, memo));
                }
            }
        }
        memo[p] = Some(acc);
        acc
    }
    let mut total: u128 = 0;
    for p in 0..complex.len() {
        total = total.saturating_add(go(p, complex, matching, &mut memo, ));
    }
    (true, total)
}

/// Faces of the chamber `e` visible from the point `y`: a facet is visible
/// when its hyperplane separates `y` from the chamber, a face is visible
/// when all facets above it are, and the chamber itself is always visible.
///
/// With `audit`, the sign characterization (`supp(F)` inside the
/// separator set of `y`'s chamber and `e`) is computed independently and
/// compared.
pub fn visible_faces(
    geom: &Geometry,
    e: usize,
    y: &[Rat],
    audit: bool,
) -> Result<Vec<usize>> {
    let e_faces = geom.faces_of_chamber(e);
    let y_signs = geom.arr.signs_at(y);
    // precondition: y outside e, off the affine hulls of e's facets
    for &f in &e_faces {
        if geom.faces[f].codim == 1 {
            let line = *geom.faces[f].support().iter().next().unwrap();
            if y_signs[line] == 0 {
                return Err(Error::Usage(
                    "viewpoint lies on the affine hull of a facet".into(),
                ));
            }
        }
    }
    if y_signs
        .iter()
        .zip(&geom.faces[e].sign)
        .all(|(&sy, &se)| sy == 0 || sy == se)
    {
        return Err(Error::Usage("viewpoint lies in the closed chamber".into()));
    }

    let visible_facet = |f: usize| -> bool {
        let line = *geom.faces[f].support().iter().next().unwrap();
        y_signs[line] != geom.faces[e].sign[line]
    };
    let facets: Vec<usize> =
        e_faces.iter().copied().filter(|&f| geom.faces[f].codim == 1).collect();
    let mut out = Vec::new();
    for &f in &e_faces {
        if f == e {
            out.push(f); // the chamber itself is always visible
            continue;
        }
        let all_above_visible = facets
            .iter()
            .filter(|&&g| geom.face_leq(g, f))
            .all(|&g| visible_facet(g));
        if all_above_visible {
            out.push(f);
        }
    }

    if audit {
        // Lemma characterization relative to the chamber of y. Valid when y
        // lies in an actual chamber (no zero signs).
        if y_signs.iter().all(|&s| s != 0) {
            let cy = geom
                .face_by_sign(&y_signs)
                .expect("viewpoint chamber exists");
            let s = geom.separators(cy, e);
            let by_support: Vec<usize> = e_faces
                .iter()
                .copied()
                .filter(|&f| geom.faces[f].support().is_subset(&s))
                .collect();
            let mut a = out.clone();
            let mut b = by_support;
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::Internal(
                    "visible-face characterizations disagree".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Boxes an unbounded chamber: adds `2n` axis hyperplanes one unit beyond
/// the coordinate range of `required_points`, and returns the new geometry,
/// the boxed chamber, and the face map `visible face of e -> face of the
/// boxed chamber` (by sign-vector extension).
pub fn bounded_surrogate(
    geom: &Geometry,
    e: usize,
    required_points: &[QVec],
) -> Result<(Geometry, usize, Vec<(usize, usize)>)> {
    use crate::arrangement::{Arrangement, Hyperplane};
    let n = geom.arr.dim;
    assert!(!required_points.is_empty());
    let mut planes = geom.arr.hyperplanes.clone();
    let mut box_signs: Vec<i8> = Vec::new();
    for i in 0..n {
        let lo = required_points.iter().map(|p| p[i].clone()).min().unwrap()
            - Rat::from_integer(1.into());
        let hi = required_points.iter().map(|p| p[i].clone()).max().unwrap()
            + Rat::from_integer(1.into());
        let mut normal = vec![Rat::zero(); n];
        normal[i] = num_traits::One::one();
        planes.push(Hyperplane::new(&normal, &lo).expect("box plane"));
        box_signs.push(1); // interior is above the low wall
        planes.push(Hyperplane::new(&normal, &hi).expect("box plane"));
        box_signs.push(-1); // and below the high wall
    }
    let boxed = Geometry::new(Arrangement::new(n, planes)?);

    let mut target = geom.faces[e].sign.clone();
    target.extend(box_signs.iter().copied());
    let e_boxed = boxed
        .face_by_sign(&target)
        .ok_or_else(|| Error::Internal("boxed chamber not found".into()))?;
    // Face map by sign extension, for faces whose witness lies in the box.
    let mut map = Vec::new();
    for f in geom.faces_of_chamber(e) {
        let mut sign = geom.faces[f].sign.clone();
        sign.extend(box_signs.iter().copied());
        if let Some(nf) = boxed.face_by_sign(&sign) {
            map.push((f, nf));
        }
    }
    Ok((boxed, e_boxed, map))
}
