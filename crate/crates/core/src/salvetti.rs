//! The Salvetti complex of an arrangement: one cell `<C,F>` per chamber `C`
//! and face `F` of `C`, with `dim <C,F> = codim F`. For plane arrangements
//! the module also realizes each 2-cell as a polygon, assigns integral
//! orientations and assembles the boundary matrices with abelian
//! local-system coefficients.

use crate::faces::Geometry;
use crate::laurent::LaurentPoly;
use crate::linalg::angle_cmp;
use crate::rational::{midpoint, sub};
use std::collections::BTreeMap;

/// A cell `<chamber, face>` of the Salvetti complex; both entries are face
/// indices into the [`Geometry`], with `chamber <=: face`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub chamber: usize,
    pub face: usize,
    pub dim: usize,
}

/// The Salvetti cell poset with its boundary relation.
#[derive(Clone, Debug)]
pub struct CellComplex {
    pub cells: Vec<Cell>,
    /// cells grouped by dimension
    pub by_dim: Vec<Vec<usize>>,
    /// boundary cells one dimension down: `<C,F> in boundary of <D,G>` iff
    /// `F <: G` and `D.F = C`
    pub boundary: Vec<Vec<usize>>,
    pub coboundary: Vec<Vec<usize>>,
    index: BTreeMap<(usize, usize), usize>,
}

impl CellComplex {
    pub fn build(geom: &Geometry) -> CellComplex {
        let mut cells: Vec<Cell> = Vec::new();
        for &c in &geom.chambers {
            for f in geom.faces_of_chamber(c) {
                cells.push(Cell { chamber: c, face: f, dim: geom.faces[f].codim });
            }
        }
        cells.sort_by(|a, b| {
            (a.dim, &geom.faces[a.chamber].sign, &geom.faces[a.face].sign).cmp(&(
                b.dim,
                &geom.faces[b.chamber].sign,
                &geom.faces[b.face].sign,
            ))
        });
        let index: BTreeMap<(usize, usize), usize> =
            cells.iter().enumerate().map(|(i, c)| ((c.chamber, c.face), i)).collect();
        let max_dim = cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut by_dim = vec![Vec::new(); max_dim + 1];
        for (i, c) in cells.iter().enumerate() {
            by_dim[c.dim].push(i);
        }
        let mut boundary = vec![Vec::new(); cells.len()];
        let mut coboundary = vec![Vec::new(); cells.len()];
        for (i, cell) in cells.iter().enumerate() {
            if cell.dim == 0 {
                continue;
            }
            for f in 0..geom.faces.len() {
                if geom.faces[f].codim + 1 != cell.dim {
                    continue;
                }
                // F strictly below G in the face order, i.e. F contains G.
                if f != cell.face && geom.face_leq(f, cell.face) {
                    let c = geom.project_face(cell.chamber, f);
                    let b = index[&(c, f)];
                    boundary[i].push(b);
                    coboundary[b].push(i);
                }
            }
        }
        CellComplex { cells, by_dim, boundary, coboundary, index }
    }

    pub fn cell_id(&self, chamber: usize, face: usize) -> Option<usize> {
        self.index.get(&(chamber, face)).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, cs)| {
                let n = cs.len() as i64;
                if d % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    pub fn label(&self, geom: &Geometry, id: usize) -> String {
        let c = &self.cells[id];
        format!("C{}|F{}", geom.faces[c.chamber].sign_string(), geom.faces[c.face].sign_string())
    }
}

/// The boundary polygon of a 2-cell `<D,p>` in a plane arrangement:
/// `2k` vertex cells and `2k` edge cells in counterclockwise order around
/// `p`. `edges[i]` joins `vertices[i-1]` (cyclically) and `vertices[i]`.
#[derive(Clone, Debug)]
pub struct PolygonCycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

/// Computes the polygon boundary of the 2-cell `<D,p>`, using exact angular
/// sorting of the codimension-1 faces around the point `p`.
pub fn polygon_cycle(
    geom: &Geometry,
    complex: &CellComplex,
    cell2: usize,
) -> crate::error::Result<PolygonCycle> {
    let cell = &complex.cells[cell2];
    if geom.arr.dim != 2 || cell.dim != 2 {
        return Err(crate::error::Error::Usage(
            "polygon_cycle requires a 2-cell of a plane arrangement".into(),
        ));
    }
    let d = cell.chamber;
    let p_face = cell.face;
    let p = &geom.faces[p_face].witness;

    // The 2k rays around p: codimension-1 faces whose closure contains p.
    let mut rays: Vec<usize> = (0..geom.faces.len())
        .filter(|&f| geom.faces[f].codim == 1 && geom.face_leq(f, p_face))
        .collect();
    rays.sort_by(|&a, &b| {
        let da = sub(&geom.faces[a].witness, p);
        let db = sub(&geom.faces[b].witness, p);
        angle_cmp(&da, &db)
    });
    let k2 = rays.len();
    debug_assert!(k2 >= 4 && k2 % 2 == 0);

    // Chamber between consecutive rays: sign vector of the witness midpoint.
    let mut vertices = Vec::with_capacity(k2);
    let mut edges = Vec::with_capacity(k2);
    for i in 0..k2 {
        let next = (i + 1) % k2;
        let mid = midpoint(&geom.faces[rays[i]].witness, &geom.faces[rays[next]].witness);
        let sector = geom
            .face_by_sign(&geom.arr.signs_at(&mid))
            .expect("sector between consecutive rays is a chamber");
        vertices.push(
            complex
                .cell_id(sector, sector)
                .expect("vertex cell exists"),
        );
        let c = geom.project_face(d, rays[i]);
        edges.push(complex.cell_id(c, rays[i]).expect("edge cell exists"));
    }
    // Each edge must join its two neighboring vertex cells.
    for i in 0..k2 {
        let e = &complex.cells[edges[i]];
        let head = geom.opposite(e.chamber, e.face).unwrap();
        let tail = e.chamber;
        let prev = vertices[(i + k2 - 1) % k2];
        let curr = vertices[i];
        let got = [complex.cells[prev].chamber, complex.cells[curr].chamber];
        debug_assert!(
            (got[0] == tail && got[1] == head) || (got[0] == head && got[1] == tail),
            "polygon edge endpoints mismatch"
        );
    }
    Ok(PolygonCycle { vertices, edges })
}

/// Signed incidence data for a plane arrangement, dimension at most 2.
///
/// Every 1-cell `<C,F>` is oriented with `<C^F,C^F>` as head and `<C,C>`
/// as tail. A 2-cell receives `+1` on a designated boundary edge and the
/// rest of its polygon follows the induced traversal.
#[derive(Clone, Debug)]
pub struct OrientedComplex {
    /// 1-cell id -> [(0-cell id, sign)]
    pub inc1: BTreeMap<usize, Vec<(usize, i8)>>,
    /// 2-cell id -> [(1-cell id, sign)]
    pub inc2: BTreeMap<usize, Vec<(usize, i8)>>,
}

impl OrientedComplex {
    pub fn incidence(&self, upper: usize, lower: usize) -> i8 {
        let row = self.inc2.get(&upper).or_else(|| self.inc1.get(&upper));
        row.and_then(|r| r.iter().find(|(c, _)| *c == lower).map(|(_, s)| *s))
            .unwrap_or(0)
    }
}

/// Builds oriented incidence for the 1- and 2-cells.
///
/// `designated_edge` picks, per 2-cell, the boundary edge that receives
/// incidence `+1` (the wall-based convention of the matching module).
pub fn orient_cells(
    geom: &Geometry,
    complex: &CellComplex,
    designated_edge: impl Fn(usize) -> usize,
) -> crate::error::Result<OrientedComplex> {
    let mut inc1 = BTreeMap::new();
    if complex.by_dim.len() > 1 {
        for &e in &complex.by_dim[1] {
            let cell = &complex.cells[e];
            let head_ch = geom.opposite(cell.chamber, cell.face)?;
            let head = complex.cell_id(head_ch, head_ch).unwrap();
            let tail = complex.cell_id(cell.chamber, cell.chamber).unwrap();
            inc1.insert(e, vec![(head, 1), (tail, -1)]);
        }
    }
    let mut inc2 = BTreeMap::new();
    if complex.by_dim.len() > 2 {
        for &z in &complex.by_dim[2] {
            let poly = polygon_cycle(geom, complex, z)?;
            let k2 = poly.edges.len();
            let mut signs: Vec<i8> = Vec::with_capacity(k2);
            for i in 0..k2 {
                // counterclockwise traversal crosses edges[i] from
                // vertices[i-1] to vertices[i]
                let e = &complex.cells[poly.edges[i]];
                let tail = complex.cell_id(e.chamber, e.chamber).unwrap();
                let from = poly.vertices[(i + k2 - 1) % k2];
                signs.push(if from == tail { 1 } else { -1 });
            }
            let pick = designated_edge(z);
            let at = poly
                .edges
                .iter()
                .position(|&e| e == pick)
                .expect("designated edge lies on the polygon");
            if signs[at] < 0 {
                for s in signs.iter_mut() {
                    *s = -*s;
                }
            }
            inc2.insert(z, poly.edges.iter().copied().zip(signs).collect());
        }
    }
    Ok(OrientedComplex { inc1, inc2 })
}

/// The monodromy monomial of the based loop through chambers `d` and `c`:
/// the product of `t_l` over the hyperplanes separating both `c0` from `c`
/// and `d` from `c`.
pub fn loop_monomial(geom: &Geometry, d: usize, c: usize, c0: usize) -> LaurentPoly {
    let m = geom.arr.size();
    let s0: Vec<usize> = geom.separators(c0, c).into_iter().collect();
    let sd = geom.separators(d, c);
    LaurentPoly::monomial_of(m, s0.into_iter().filter(|l| sd.contains(l)))
}

/// The full twisted boundary matrices of the Salvetti complex of a plane
/// arrangement: `d1[1-cell][0-cell]` and `d2[2-cell][1-cell]`, with entries
/// `incidence * ubar(D^G, C^F)` where representative points follow the
/// opposite-chamber convention.
pub fn twisted_boundaries(
    geom: &Geometry,
    complex: &CellComplex,
    oriented: &OrientedComplex,
    c0: usize,
) -> (Vec<Vec<LaurentPoly>>, Vec<Vec<LaurentPoly>>) {
    let m = geom.arr.size();
    let n0 = complex.by_dim.first().map(|v| v.len()).unwrap_or(0);
    let n1 = complex.by_dim.get(1).map(|v| v.len()).unwrap_or(0);
    let n2 = complex.by_dim.get(2).map(|v| v.len()).unwrap_or(0);
    let pos0: BTreeMap<usize, usize> =
        complex.by_dim[0].iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let pos1: BTreeMap<usize, usize> = complex
        .by_dim
        .get(1)
        .map(|v| v.iter().enumerate().map(|(k, &c)| (c, k)).collect())
        .unwrap_or_default();

    let mut d1 = vec![vec![LaurentPoly::zero(m); n0]; n1];
    for (row, &e) in complex.by_dim.get(1).map(|v| v.as_slice()).unwrap_or(&[]).iter().enumerate() {
        let cell = &complex.cells[e];
        let rep = geom.opposite(cell.chamber, cell.face).unwrap();
        for &(v, s) in &oriented.inc1[&e] {
            let target = complex.cells[v].chamber;
            let mono = loop_monomial(geom, rep, target, c0);
            let signed = if s > 0 { mono } else { -&mono };
            d1[row][pos0[&v]] = signed;
        }
    }

    let mut d2 = vec![vec![LaurentPoly::zero(m); n1]; n2];
    for (row, &z) in complex.by_dim.get(2).map(|v| v.as_slice()).unwrap_or(&[]).iter().enumerate() {
        let zc = &complex.cells[z];
        let rep = geom.opposite(zc.chamber, zc.face).unwrap();
        for &(e, s) in &oriented.inc2[&z] {
            let ec = &complex.cells[e];
            let erep = geom.opposite(ec.chamber, ec.face).unwrap();
            let mono = loop_monomial(geom, rep, erep, c0);
            let signed = if s > 0 { mono } else { -&mono };
            d2[row][pos1[&e]] = signed;
        }
    }
    (d1, d2)
}
