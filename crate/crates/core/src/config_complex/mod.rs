//! Borel–Moore cellular chain complexes of unordered configuration spaces of
//! ribbon graphs, with Heisenberg deck coefficients.
//!
//! A cell is a set of occupied vertices together with a number of points on
//! each edge; its closure is a product of simplices. Coordinates are ordered
//! by edge index and, within an edge, by the edge parameter. Only faces where
//! an extreme point of an edge slides into a free endpoint are kept: collision
//! faces and faces into occupied (or, relatively, `A`-) vertices lie at
//! infinity.

pub mod planar;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heisenberg::{phi_eval, BraidWord, GroupRingElement, HeisenbergElement, SurfaceParams};
use crate::ribbon_graph::{standard_model, surface_invariants, RelativeSubgraph, RibbonGraph, A_EDGE, V0, V1};
use planar::{q, reverse, seg, Layout, Pt, Scene, Step, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConfigCell {
    /// Occupied vertices, ascending.
    pub vertices: Vec<usize>,
    /// Number of points in the interior of each edge.
    pub counts: Vec<usize>,
}

impl ConfigCell {
    pub fn dim(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn points(&self) -> usize {
        self.vertices.len() + self.dim()
    }

    /// Human-readable name such as `{v0,v1}`, `v0×e1` or `C2(a1)×b1`.
    pub fn describe(&self, graph: &RibbonGraph) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.dim() == 0 {
            let names: Vec<&str> = self.vertices.iter().map(|&v| graph.vertex_name(v)).collect();
            return format!("{{{}}}", names.join(","));
        }
        parts.extend(self.vertices.iter().map(|&v| graph.vertex_name(v).to_string()));
        for (e, &k) in self.counts.iter().enumerate() {
            let name = &graph.edge(e).name;
            match k {
                0 => {}
                1 => parts.push(name.clone()),
                _ => parts.push(format!("C{k}({name})")),
            }
        }
        parts.join("×")
    }
}

/// How deck coefficients are produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoefficientOracle {
    /// Every deck element is the identity.
    Trivial,
    /// Full Heisenberg coefficients on `standard_model(g, m)`, read off from
    /// braids in the planar picture.
    StandardWedge,
}

/// Sparse matrix with group-ring entries; entry `(row, col)` is the
/// coefficient of face `row` in the boundary of cell `col`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), GroupRingElement>,
}

impl BoundaryMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        BoundaryMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&GroupRingElement> {
        self.entries.get(&(r, c))
    }

    fn add_entry(&mut self, r: usize, c: usize, v: GroupRingElement) -> Result<()> {
        let sum = match self.entries.get(&(r, c)) {
            Some(old) => old.add(&v)?,
            None => v,
        };
        if sum.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), sum);
        }
        Ok(())
    }

    /// Matrix product `self · other` over the group ring.
    pub fn compose(&self, other: &BoundaryMatrix) -> Result<BoundaryMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut by_row: HashMap<usize, Vec<(usize, &GroupRingElement)>> = HashMap::new();
        for ((r, c), v) in &other.entries {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut out = BoundaryMatrix::zero(self.rows, other.cols);
        for ((i, k), a) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (j, b) in row {
                    out.add_entry(*i, *j, a.mul(b)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entrywise image under a map of group-ring elements.
    pub fn map_entries<F>(&self, mut f: F) -> Result<BoundaryMatrix>
    where
        F: FnMut(&GroupRingElement) -> Result<GroupRingElement>,
    {
        let mut out = BoundaryMatrix::zero(self.rows, self.cols);
        for ((r, c), v) in &self.entries {
            out.add_entry(*r, *c, f(v)?)?;
        }
        Ok(out)
    }
}

/// The graded Borel–Moore complex. `boundaries[k]` maps degree `k` to degree
/// `k - 1` (`boundaries[0]` is the empty map out of degree 0).
#[derive(Clone, Debug)]
pub struct BMComplex {
    pub params: SurfaceParams,
    pub n: usize,
    pub relative: bool,
    pub oracle: CoefficientOracle,
    pub cells: Vec<Vec<ConfigCell>>,
    pub boundaries: Vec<BoundaryMatrix>,
}

impl BMComplex {
    pub fn boundary_matrix(&self, k: usize) -> Result<&BoundaryMatrix> {
        self.boundaries.get(k).ok_or_else(|| Error::OutOfRange(format!("degree {k} (complex has degrees 0..={})", self.n)))
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(k, c)| if k % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }

    /// Composites `∂_{k-1} ∘ ∂_k` for `k = 2..=n`.
    pub fn boundary_composites(&self) -> Result<Vec<BoundaryMatrix>> {
        (2..=self.n).map(|k| self.boundaries[k - 1].compose(&self.boundaries[k])).collect()
    }

    pub fn is_chain_complex(&self) -> Result<bool> {
        Ok(self.boundary_composites()?.iter().all(|m| m.is_zero()))
    }
}

fn compositions(total: usize, slots: usize, out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>) {
    if cur.len() + 1 == slots {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for k in 0..=total {
        cur.push(k);
        compositions(total - k, slots, out, cur);
        cur.pop();
    }
}

/// All cells of the `n`-point configuration space, by dimension. In the
/// relative case vertices and edges of `A` carry no points.
pub fn enumerate_cells(graph: &RibbonGraph, rel: Option<&RelativeSubgraph>, n: usize) -> Vec<Vec<ConfigCell>> {
    let a_vertices = rel.map(|r| r.vertices(graph)).unwrap_or_default();
    let verts: Vec<usize> = (0..graph.vertex_count()).filter(|v| !a_vertices.contains(v)).collect();
    let edges: Vec<usize> = (0..graph.edge_count()).filter(|&e| !rel.is_some_and(|r| r.contains_edge(e))).collect();
    let mut by_dim: Vec<Vec<ConfigCell>> = vec![Vec::new(); n + 1];
    let nv = verts.len();
    for mask in 0u64..(1u64 << nv) {
        let chosen: Vec<usize> = (0..nv).filter(|&i| mask >> i & 1 == 1).map(|i| verts[i]).collect();
        if chosen.len() > n {
            continue;
        }
        let k = n - chosen.len();
        let mut comps = Vec::new();
        if edges.is_empty() {
            if k == 0 {
                comps.push(Vec::new());
            }
        } else {
            compositions(k, edges.len(), &mut comps, &mut Vec::new());
        }
        for comp in comps {
            let mut counts = vec![0; graph.edge_count()];
            for (i, &e) in edges.iter().enumerate() {
                counts[e] = comp[i];
            }
            by_dim[k].push(ConfigCell { vertices: chosen.clone(), counts });
        }
    }
    for cells in &mut by_dim {
        cells.sort_by(|a, b| b.counts.cmp(&a.counts).then_with(|| a.vertices.cmp(&b.vertices)));
    }
    by_dim
}

/// A codimension-one face of a cell: the first (`to_head == false`) or last
/// point of `edge` slides into the corresponding endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub cell: ConfigCell,
    pub edge: usize,
    pub to_head: bool,
    pub sign: i8,
}

/// Faces of `cell` that survive in the Borel–Moore complex.
pub fn faces(graph: &RibbonGraph, rel: Option<&RelativeSubgraph>, cell: &ConfigCell) -> Vec<Face> {
    let a_vertices = rel.map(|r| r.vertices(graph)).unwrap_or_default();
    let k = cell.dim();
    let mut out = Vec::new();
    let mut before = 0usize;
    for (e, &ke) in cell.counts.iter().enumerate() {
        if ke == 0 {
            continue;
        }
        for to_head in [false, true] {
            let v = if to_head { graph.edge(e).head } else { graph.edge(e).tail };
            if cell.vertices.contains(&v) || a_vertices.contains(&v) {
                continue;
            }
            let p = before + if to_head { ke } else { 1 };
            let eps: i8 = if to_head { 1 } else { -1 };
            let sign = if (k - p).is_multiple_of(2) { eps } else { -eps };
            let mut vertices = cell.vertices.clone();
            vertices.push(v);
            vertices.sort_unstable();
            let mut counts = cell.counts.clone();
            counts[e] -= 1;
            out.push(Face { cell: ConfigCell { vertices, counts }, edge: e, to_head, sign });
        }
        before += ke;
    }
    out
}

/// A cell with a preferred path from the base configuration to its marked
/// configuration: a sequence of single-point paths, applied in order.
#[derive(Clone, Debug)]
pub struct TetheredCell {
    pub cell: ConfigCell,
    /// Marked points, in site order.
    pub sites: Vec<Pt>,
    pub tether: Vec<Vec<Step>>,
}

/// Planar realisation of `standard_model(g, m)` with `n` base points on `A`.
#[derive(Clone, Debug)]
pub struct StandardWedge {
    pub layout: Layout,
    pub params: SurfaceParams,
    pub n: usize,
}

impl StandardWedge {
    pub fn new(g: usize, m: usize, n: usize) -> Result<Self> {
        Ok(StandardWedge { layout: Layout::new(g, m), params: SurfaceParams::new(g, m)?, n })
    }

    /// Accepts only graphs equal to `standard_model(g, m)` (and, if given, its
    /// relative structure).
    pub fn for_graph(graph: &RibbonGraph, rel: Option<&RelativeSubgraph>, n: usize) -> Result<Self> {
        let inv = surface_invariants(graph)?;
        let (model, model_rel) = standard_model(inv.genus, inv.boundary_components)?;
        if *graph != model {
            return Err(Error::OracleMismatch(format!(
                "graph is not standard_model({}, {})",
                inv.genus, inv.boundary_components
            )));
        }
        if let Some(r) = rel {
            if *r != model_rel {
                return Err(Error::OracleMismatch("relative structure differs from the standard interval".into()));
            }
        }
        StandardWedge::new(inv.genus, inv.boundary_components, n)
    }

    /// The base configuration: `n` points on `A`, left to right.
    pub fn base(&self) -> Vec<Pt> {
        let n = self.n as i64;
        (0..n).map(|i| self.layout.a_point(&(q(3, 10) + q(7 * i, 10 * n)))).collect()
    }

    /// Edge parameters of the marked points when `k` points lie on loop
    /// edge `e`.
    pub fn loop_anchors(&self, e: usize, k: usize) -> Vec<Q> {
        (0..k)
            .map(|j| {
                let mut t = q(3, 10) + q(e as i64, 50);
                if k > 1 {
                    t += q(2 * j as i64, 5 * (k as i64 - 1));
                }
                if t == q(1, 2) {
                    t += q(1, 97);
                }
                t
            })
            .collect()
    }

    /// Parameters on `A` of the marked points when `k` points lie on `A`.
    pub fn a_anchors(&self, k: usize) -> Vec<Q> {
        (0..k).map(|j| q(13 * j as i64 + 12, 13 * (k as i64 + 1))).collect()
    }

    fn edge_point(&self, e: usize, t: &Q) -> Pt {
        if e == A_EDGE {
            self.layout.a_point(t)
        } else {
            self.layout.epos(e - 1, t)
        }
    }

    fn anchors(&self, e: usize, k: usize) -> Vec<Q> {
        if e == A_EDGE {
            self.a_anchors(k)
        } else {
            self.loop_anchors(e - 1, k)
        }
    }

    /// Marked points in site order: `v0`, points on `A`, `v1`, then loop
    /// edges in index order with parameters ascending. The first three kinds
    /// lie on the bottom side.
    pub fn sites(&self, cell: &ConfigCell) -> Vec<Pt> {
        let mut out = Vec::new();
        if cell.vertices.contains(&V0) {
            out.push(self.layout.v0());
        }
        for t in self.a_anchors(cell.counts[A_EDGE]) {
            out.push(self.layout.a_point(&t));
        }
        if cell.vertices.contains(&V1) {
            out.push(self.layout.v1());
        }
        for e in 1..cell.counts.len() {
            for t in self.loop_anchors(e - 1, cell.counts[e]) {
                out.push(self.layout.epos(e - 1, &t));
            }
        }
        out
    }

    fn eloop(&self, e: usize, start: &Pt) -> Vec<Step> {
        let (t0, t1) = (q(1, 5), q(4, 5));
        let mut p = vec![seg(start.clone(), self.layout.epos(e, &t0))];
        p.extend(self.layout.edge_move(e, &t0, &t1));
        p.push(seg(self.layout.epos(e, &t1), start.clone()));
        p
    }

    /// The preferred tether of a cell: base points are matched with sites in
    /// order. Points bound for loop edges leave first, in straight lines;
    /// then the points staying on the bottom side slide there without
    /// overtaking each other. A cell with all points on one loop edge is
    /// reached after first running the leftmost base point once around that
    /// edge.
    pub fn tether(&self, cell: &ConfigCell) -> Result<TetheredCell> {
        if cell.points() != self.n || cell.counts.len() != self.layout.loop_count() + 1 {
            return Err(Error::OracleMismatch("cell does not belong to this model".into()));
        }
        let base = self.base();
        let sites = self.sites(cell);
        let bottom = sites.iter().take_while(|p| p.y.is_zero()).count();
        let mut tether = Vec::new();
        let on_loops: Vec<usize> = (1..cell.counts.len()).filter(|&e| cell.counts[e] > 0).collect();
        if on_loops.len() == 1 && cell.counts[on_loops[0]] == self.n {
            tether.push(self.eloop(on_loops[0] - 1, &base[0]));
        }
        for i in bottom..self.n {
            tether.push(vec![seg(base[i].clone(), sites[i].clone())]);
        }
        for i in 0..bottom {
            if sites[i].x < base[i].x {
                tether.push(vec![seg(base[i].clone(), sites[i].clone())]);
            }
        }
        for i in (0..bottom).rev() {
            if sites[i].x > base[i].x {
                tether.push(vec![seg(base[i].clone(), sites[i].clone())]);
            }
        }
        Ok(TetheredCell { cell: cell.clone(), sites, tether })
    }

    /// Path inside the closure of `cell` from its marked configuration to
    /// that of `face`: the exiting point runs to its vertex, then the points
    /// left on that edge slide to their new anchors without overtaking.
    pub fn internal_path(&self, cell: &ConfigCell, face: &Face) -> Vec<Vec<Step>> {
        let e = face.edge;
        let k = cell.counts[e];
        let old = self.anchors(e, k);
        let new = self.anchors(e, k - 1);
        let (exit_t, rest) = if face.to_head { (old[k - 1].clone(), old[..k - 1].to_vec()) } else { (old[0].clone(), old[1..].to_vec()) };
        let end = if face.to_head { Q::one() } else { Q::zero() };
        let mut moves = vec![self.edge_path(e, &exit_t, &end)];
        for j in 0..rest.len() {
            if new[j] < rest[j] {
                moves.push(self.edge_path(e, &rest[j], &new[j]));
            }
        }
        for j in (0..rest.len()).rev() {
            if new[j] > rest[j] {
                moves.push(self.edge_path(e, &rest[j], &new[j]));
            }
        }
        moves
    }

    fn edge_path(&self, e: usize, t0: &Q, t1: &Q) -> Vec<Step> {
        if e == A_EDGE {
            vec![seg(self.edge_point(e, t0), self.edge_point(e, t1))]
        } else {
            self.layout.edge_move(e - 1, t0, t1)
        }
    }

    /// Braid word of a loop of configurations starting and ending at the
    /// base configuration.
    pub fn loop_to_word(&self, moves: &[Vec<Step>]) -> Result<BraidWord> {
        let base = self.base();
        let mut scene = Scene::new(&self.layout, base.clone());
        for m in moves {
            scene.run(m)?;
        }
        let mut end = scene.positions().to_vec();
        end.sort();
        if end != base {
            return Err(Error::LoopNotClosed("motion does not return to the base configuration".into()));
        }
        Ok(scene.word())
    }

    /// Deck element of a face: φ of tether, internal path, reversed face tether.
    pub fn deck_coefficient(&self, cell: &ConfigCell, face: &Face) -> Result<HeisenbergElement> {
        let te = self.tether(cell)?;
        let tf = self.tether(&face.cell)?;
        let mut moves = te.tether.clone();
        moves.extend(self.internal_path(cell, face));
        for p in tf.tether.iter().rev() {
            moves.push(reverse(p));
        }
        let w = self.loop_to_word(&moves)?;
        phi_eval(&w, self.params, self.n)
    }
}

/// Tethers for a list of cells of a standard model.
pub fn assign_tethers(oracle: &StandardWedge, cells: &[ConfigCell]) -> Result<Vec<TetheredCell>> {
    cells.iter().map(|c| oracle.tether(c)).collect()
}

/// Deck coefficient of the face `face_cell` of `cell` under an oracle.
pub fn deck_coefficient(
    graph: &RibbonGraph,
    rel: Option<&RelativeSubgraph>,
    n: usize,
    cell: &ConfigCell,
    face_cell: &ConfigCell,
    oracle: CoefficientOracle,
) -> Result<HeisenbergElement> {
    let face = faces(graph, rel, cell)
        .into_iter()
        .find(|f| f.cell == *face_cell)
        .ok_or_else(|| Error::NotIncident(format!("{} is not a face of {}", face_cell.describe(graph), cell.describe(graph))))?;
    match oracle {
        CoefficientOracle::Trivial => Ok(HeisenbergElement::identity(surface_params(graph)?)),
        CoefficientOracle::StandardWedge => StandardWedge::for_graph(graph, rel, n)?.deck_coefficient(cell, &face),
    }
}

fn surface_params(graph: &RibbonGraph) -> Result<SurfaceParams> {
    let inv = surface_invariants(graph)?;
    SurfaceParams::new(inv.genus, inv.boundary_components)
}

/// Build the complex of `n` points in `graph` (relative to `rel` if given).
pub fn build_complex(
    graph: &RibbonGraph,
    rel: Option<&RelativeSubgraph>,
    n: usize,
    oracle: CoefficientOracle,
) -> Result<BMComplex> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let params = surface_params(graph)?;
    let wedge = match oracle {
        CoefficientOracle::Trivial => None,
        CoefficientOracle::StandardWedge => Some(StandardWedge::for_graph(graph, rel, n)?),
    };
    let cells = enumerate_cells(graph, rel, n);
    let index: Vec<HashMap<&ConfigCell, usize>> =
        cells.iter().map(|cs| cs.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect();
    let mut boundaries = vec![BoundaryMatrix::zero(0, cells[0].len())];
    for k in 1..=n {
        let mut d = BoundaryMatrix::zero(cells[k - 1].len(), cells[k].len());
        for (j, cell) in cells[k].iter().enumerate() {
            for face in faces(graph, rel, cell) {
                let i = *index[k - 1]
                    .get(&face.cell)
                    .ok_or_else(|| Error::MalformedGraph("face outside the enumerated cells".into()))?;
                let h = match &wedge {
                    None => HeisenbergElement::identity(params),
                    Some(w) => w.deck_coefficient(cell, &face)?,
                };
                d.add_entry(i, j, GroupRingElement::monomial(h, BigInt::from(face.sign)))?;
            }
        }
        boundaries.push(d);
    }
    Ok(BMComplex { params, n, relative: rel.is_some(), oracle, cells, boundaries })
}

impl fmt::Display for CoefficientOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientOracle::Trivial => "trivial",
            CoefficientOracle::StandardWedge => "standard-wedge",
        })
    }
}
