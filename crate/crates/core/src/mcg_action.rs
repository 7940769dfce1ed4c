//! Mapping classes acting on the Heisenberg group and on the relative
//! homology of two-point configurations of the one-holed torus.
//!
//! The relative complex of `standard_model(1, 1)` with two points is free on
//! `w(α) = C₂(α)`, `w(β) = C₂(β)` and `v(α, β) = α × β`. A twist moves these
//! cycles to cycles supported on the twisted arcs; cutting those arcs into
//! pieces parallel to `α` and `β` and following each piece back into a basis
//! cell gives the twist matrices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::config_complex::planar::{q, reverse, seg, Layout, Pt, Step, Q};
use crate::config_complex::{ConfigCell, StandardWedge};
use crate::error::{Error, Result};
use crate::heisenberg::{phi_eval, GroupRingElement, HeisenbergElement, LinearizedRepMatrix, SurfaceParams};

/// An automorphism of `H(Σ)` fixing `u`: generator `i` goes to
/// `(d[i], M e_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeisenbergAutomorphism {
    params: SurfaceParams,
    /// Columns are images of basis classes.
    pub m: Vec<Vec<BigInt>>,
    pub d: Vec<BigInt>,
}

impl HeisenbergAutomorphism {
    pub fn new(params: SurfaceParams, m: Vec<Vec<BigInt>>, d: Vec<BigInt>) -> Result<Self> {
        let r = params.rank();
        if m.len() != r || m.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, found: m.len() });
        }
        if d.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: d.len() });
        }
        let aut = HeisenbergAutomorphism { params, m, d };
        let j = params.intersection_matrix();
        for a in 0..r {
            for b in 0..r {
                let (ca, cb) = (aut.column(a), aut.column(b));
                let mut s = BigInt::zero();
                for i in 0..r {
                    for k in 0..r {
                        if j[i][k] != 0 {
                            s += &ca[i] * &cb[k] * j[i][k];
                        }
                    }
                }
                if s != BigInt::from(j[a][b]) {
                    return Err(Error::NotSymplectic);
                }
            }
        }
        Ok(aut)
    }

    pub fn from_ints(params: SurfaceParams, m: &[&[i64]], d: &[i64]) -> Result<Self> {
        Self::new(
            params,
            m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
            d.iter().map(|&v| BigInt::from(v)).collect(),
        )
    }

    pub fn identity(params: SurfaceParams) -> Self {
        let r = params.rank();
        let m = (0..r).map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        HeisenbergAutomorphism { params, m, d: vec![BigInt::zero(); r] }
    }

    pub fn params(&self) -> SurfaceParams {
        self.params
    }

    fn column(&self, j: usize) -> Vec<BigInt> {
        self.m.iter().map(|row| row[j].clone()).collect()
    }

    /// Image of the `i`-th generator.
    pub fn image(&self, i: usize) -> HeisenbergElement {
        HeisenbergElement::new(self.params, self.d[i].clone(), self.column(i)).expect("sizes checked")
    }

    /// Evaluate on the normal-form word `u^e a_1^{p_1} ... c^...` of `h`.
    pub fn apply(&self, h: &HeisenbergElement) -> Result<HeisenbergElement> {
        if h.params() != self.params {
            return Err(Error::DimensionMismatch { expected: self.params.rank(), found: h.x.len() });
        }
        let mut acc = HeisenbergElement::u(self.params).pow_big(&h.u_exponent());
        for (i, e) in h.x.iter().enumerate() {
            if !e.is_zero() {
                acc = acc.mul(&self.image(i).pow_big(e))?;
            }
        }
        Ok(acc)
    }

    pub fn apply_ring(&self, p: &GroupRingElement) -> Result<GroupRingElement> {
        p.map_elements(|h| self.apply(h))
    }

    pub fn apply_matrix(&self, m: &RingMatrix) -> Result<RingMatrix> {
        m.iter().map(|row| row.iter().map(|e| self.apply_ring(e)).collect()).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let r = self.params.rank();
        let mut m = vec![vec![BigInt::zero(); r]; r];
        let mut d = vec![BigInt::zero(); r];
        for i in 0..r {
            let h = self.apply(&other.image(i))?;
            d[i] = h.k.clone();
            for (row, v) in m.iter_mut().zip(h.x) {
                row[i] = v;
            }
        }
        Ok(HeisenbergAutomorphism { params: self.params, m, d })
    }

    pub fn inverse(&self) -> Result<Self> {
        // the inverse of a finite-order-free automorphism: solve on generators
        // by iterating compose until identity would be costly; instead invert
        // the linear map (k, x) ↦ (k + d·x, Mx) on L.
        let r = self.params.rank();
        let mi = invert_unimodular(&self.m).ok_or(Error::NotSymplectic)?;
        // τ⁻¹(e_i) = (k_i, M⁻¹e_i) with k_i + d·(M⁻¹ e_i) = 0
        let mut d = vec![BigInt::zero(); r];
        for (i, di) in d.iter_mut().enumerate() {
            let col: Vec<BigInt> = mi.iter().map(|row| row[i].clone()).collect();
            let s: BigInt = self.d.iter().zip(&col).map(|(a, b)| a * b).sum();
            *di = -s;
        }
        Self::new(self.params, mi, d)
    }

    /// The action on `L = H ⊕ Z` as an integer matrix on `(k, x, t)`. Since
    /// `M` preserves the form, `τ(k, x) = (k + d·x, Mx)` is linear.
    pub fn linear_matrix(&self) -> LinearizedRepMatrix {
        let r = self.params.rank();
        let mut out = LinearizedRepMatrix::identity(r + 2);
        for j in 0..r {
            out.rows[0][1 + j] = self.d[j].clone();
            for i in 0..r {
                out.rows[1 + i][1 + j] = self.m[i][j].clone();
            }
        }
        out
    }
}

fn invert_unimodular(m: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    use num_rational::BigRational;
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|v| BigRational::from_integer(v.clone())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.iter()
        .map(|row| row[n..].iter().map(|v| if v.is_integer() { Some(v.to_integer()) } else { None }).collect())
        .collect()
}

trait PowBig {
    fn pow_big(&self, e: &BigInt) -> HeisenbergElement;
}

impl PowBig for HeisenbergElement {
    fn pow_big(&self, e: &BigInt) -> HeisenbergElement {
        let e: i64 = e.to_string().parse().expect("exponent fits in i64");
        self.pow(e)
    }
}

/// The twists of `Σ_{1,1}` along `a = α ∪ A` and `b = β ∪ A`, and their
/// inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Twist {
    Ta,
    Tb,
    TaInv,
    TbInv,
}

impl Twist {
    fn curve_edge(self) -> usize {
        match self {
            Twist::Ta | Twist::TaInv => 0,
            Twist::Tb | Twist::TbInv => 1,
        }
    }

    fn power(self) -> i8 {
        match self {
            Twist::Ta | Twist::Tb => 1,
            Twist::TaInv | Twist::TbInv => -1,
        }
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Twist::Ta => "T_a",
            Twist::Tb => "T_b",
            Twist::TaInv => "T_a^-1",
            Twist::TbInv => "T_b^-1",
        })
    }
}

fn p11() -> SurfaceParams {
    SurfaceParams { g: 1, m: 1 }
}

/// `(T_a)_H: ã ↦ ã, b̃ ↦ (−1, a+b)`; `(T_b)_H: ã ↦ (1, a−b), b̃ ↦ b̃`.
pub fn aut_from_twist(t: Twist) -> HeisenbergAutomorphism {
    let p = p11();
    let a = HeisenbergAutomorphism::from_ints(p, &[&[1, 1], &[0, 1]], &[0, -1]).expect("symplectic");
    let b = HeisenbergAutomorphism::from_ints(p, &[&[1, 0], &[-1, 1]], &[1, 0]).expect("symplectic");
    match t {
        Twist::Ta => a,
        Twist::Tb => b,
        Twist::TaInv => a.inverse().expect("invertible"),
        Twist::TbInv => b.inverse().expect("invertible"),
    }
}

pub fn aut_apply(t: &HeisenbergAutomorphism, h: &HeisenbergElement) -> Result<HeisenbergElement> {
    t.apply(h)
}

pub fn aut_compose(t1: &HeisenbergAutomorphism, t2: &HeisenbergAutomorphism) -> Result<HeisenbergAutomorphism> {
    t1.compose(t2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Letter {
    Alpha,
    Beta,
}

/// A reduced word in `α^{±1}, β^{±1}`; consecutive letters are joined through
/// `A`, so `[β, α]` is the curve `βAα`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurveWord(pub Vec<(Letter, i8)>);

impl CurveWord {
    pub fn new(letters: Vec<(Letter, i8)>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidParams("curve word must be nonempty".into()));
        }
        let w = CurveWord(letters).reduced();
        if w.0.is_empty() {
            return Err(Error::InvalidParams("curve word reduces to the empty word".into()));
        }
        Ok(w)
    }

    pub fn alpha() -> Self {
        CurveWord(vec![(Letter::Alpha, 1)])
    }

    pub fn beta() -> Self {
        CurveWord(vec![(Letter::Beta, 1)])
    }

    fn reduced(self) -> Self {
        let mut out: Vec<(Letter, i8)> = Vec::new();
        for (l, e) in self.0 {
            if out.last().is_some_and(|&(l2, e2)| l2 == l && e2 == -e) {
                out.pop();
            } else {
                out.push((l, e));
            }
        }
        CurveWord(out)
    }

    fn inverse(&self) -> Self {
        CurveWord(self.0.iter().rev().map(|&(l, e)| (l, -e)).collect())
    }

    /// Parse forms like `βAα`, `β^-1Aα`, `b A a`, `b^-1 a`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 0, message: format!("bad curve word `{s}`") };
        let cleaned = s.replace("⁻¹", "^-1");
        let chars: Vec<char> = cleaned.chars().collect();
        let mut letters = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            i += 1;
            let l = match c {
                'α' | 'a' => Letter::Alpha,
                'β' | 'b' => Letter::Beta,
                'A' | ' ' | '·' => continue,
                _ => return Err(bad()),
            };
            let mut e = 1;
            let rest: String = chars[i..].iter().collect();
            if rest.starts_with("^-1") {
                e = -1;
                i += 3;
            } else if rest.starts_with("^1") {
                i += 2;
            }
            letters.push((l, e));
        }
        CurveWord::new(letters).map_err(|_| bad())
    }
}

impl fmt::Display for CurveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(l, e)| {
                let c = if l == Letter::Alpha { "α" } else { "β" };
                if e < 0 {
                    format!("{c}^-1")
                } else {
                    c.to_string()
                }
            })
            .collect();
        write!(f, "{}", parts.join("A"))
    }
}

/// Image of a curve word under a twist, by letterwise substitution.
pub fn twist_image(t: Twist, c: &CurveWord) -> CurveWord {
    let (a, b) = (Letter::Alpha, Letter::Beta);
    let sub = |l: Letter| -> Vec<(Letter, i8)> {
        match (t, l) {
            (Twist::Ta, Letter::Beta) => vec![(b, 1), (a, 1)],
            (Twist::TaInv, Letter::Beta) => vec![(b, 1), (a, -1)],
            (Twist::Tb, Letter::Alpha) => vec![(b, -1), (a, 1)],
            (Twist::TbInv, Letter::Alpha) => vec![(b, 1), (a, 1)],
            _ => vec![(l, 1)],
        }
    };
    let mut out = Vec::new();
    for &(l, e) in &c.0 {
        let img = CurveWord(sub(l));
        out.extend(if e > 0 { img.0 } else { img.inverse().0 });
    }
    CurveWord(out).reduced()
}

/// A relative two-point cycle built from arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CycleKind {
    /// Both points on one arc.
    W(CurveWord),
    /// One point on each of two disjoint arcs.
    V(CurveWord, CurveWord),
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleKind::W(c) => write!(f, "w({c})"),
            CycleKind::V(c, d) => write!(f, "v({c}, {d})"),
        }
    }
}

/// Names of the basis cycles, in matrix order.
pub const BASIS: [&str; 3] = ["w(α)", "w(β)", "v(α,β)"];

/// Coefficients of a chain in the basis `(w(α), w(β), v(α,β))`.
pub type Chain = [GroupRingElement; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Basis {
    Wa,
    Wb,
    V,
}

impl Basis {
    fn index(self) -> usize {
        match self {
            Basis::Wa => 0,
            Basis::Wb => 1,
            Basis::V => 2,
        }
    }

    fn cell(self) -> ConfigCell {
        let counts = match self {
            Basis::Wa => vec![0, 2, 0],
            Basis::Wb => vec![0, 0, 2],
            Basis::V => vec![0, 1, 1],
        };
        ConfigCell { vertices: vec![], counts }
    }
}

/// Index into a path: segment and fraction along it.
type PathPos = (usize, Q);

#[derive(Clone, Debug)]
struct Piece {
    edge: usize,
    dir: i8,
    steps: Vec<usize>,
}

/// Maximal runs of labelled segments along one edge in one direction.
fn pieces(x: &[Step]) -> Vec<Piece> {
    let mut out: Vec<Piece> = Vec::new();
    let mut open = false;
    for (i, s) in x.iter().enumerate() {
        match s {
            Step::Teleport { .. } => {
                if open {
                    out.last_mut().expect("open piece").steps.push(i);
                }
            }
            Step::Seg { label: None, .. } => open = false,
            Step::Seg { label: Some(l), .. } => {
                let dir = if l.t1 > l.t0 { 1 } else { -1 };
                match out.last_mut() {
                    Some(p) if open && p.edge == l.edge && p.dir == dir => p.steps.push(i),
                    _ => {
                        out.push(Piece { edge: l.edge, dir, steps: vec![i] });
                        open = true;
                    }
                }
            }
        }
    }
    out
}

fn locate(x: &[Step], idx: impl Iterator<Item = usize>, edge: usize, t: &Q) -> Vec<PathPos> {
    let mut res = Vec::new();
    for i in idx {
        if let Step::Seg { label: Some(l), .. } = &x[i] {
            let (lo, hi) = if l.t0 < l.t1 { (&l.t0, &l.t1) } else { (&l.t1, &l.t0) };
            if l.edge == edge && lo < t && t < hi {
                res.push((i, (t - &l.t0) / (&l.t1 - &l.t0)));
            }
        }
    }
    res
}

fn at(x: &[Step], pos: &PathPos) -> Pt {
    match &x[pos.0] {
        Step::Seg { from, to, .. } => from.lerp(to, &pos.1),
        Step::Teleport { .. } => unreachable!("positions lie on segments"),
    }
}

fn param_at(x: &[Step], pos: &PathPos) -> Q {
    match &x[pos.0] {
        Step::Seg { label: Some(l), .. } => &l.t0 + (&l.t1 - &l.t0) * &pos.1,
        _ => unreachable!("positions lie on labelled segments"),
    }
}

/// Sub-path of `x` between two positions.
fn slide(x: &[Step], p: &PathPos, r: &PathPos) -> Vec<Step> {
    use crate::config_complex::planar::sub;
    if p == r {
        return Vec::new();
    }
    if p > r {
        return reverse(&slide(x, r, p));
    }
    let (i, l) = p;
    let (j, m) = r;
    if i == j {
        return vec![sub(&x[*i], l, m)];
    }
    let mut out = vec![sub(&x[*i], l, &Q::one())];
    out.extend_from_slice(&x[i + 1..*j]);
    out.push(sub(&x[*j], &Q::zero(), m));
    out
}

/// How a supported cycle arises from the basis by one surgery.
struct Realisation {
    twist: Option<Twist>,
    basis: Basis,
}

fn realise(kind: &CycleKind) -> Result<Realisation> {
    let al = CurveWord::alpha();
    let be = CurveWord::beta();
    let options: Vec<(Option<Twist>, Basis)> = vec![
        (None, Basis::Wa),
        (None, Basis::Wb),
        (None, Basis::V),
        (Some(Twist::Ta), Basis::Wb),
        (Some(Twist::TaInv), Basis::Wb),
        (Some(Twist::Tb), Basis::Wa),
        (Some(Twist::Ta), Basis::V),
        (Some(Twist::TaInv), Basis::V),
        (Some(Twist::Tb), Basis::V),
        (Some(Twist::TbInv), Basis::V),
    ];
    for (t, b) in options {
        let img = |c: &CurveWord| match t {
            None => c.clone(),
            Some(t) => twist_image(t, c),
        };
        let candidate = match b {
            Basis::Wa => CycleKind::W(img(&al)),
            Basis::Wb => CycleKind::W(img(&be)),
            Basis::V => CycleKind::V(img(&al), img(&be)),
        };
        if candidate == *kind {
            return Ok(Realisation { twist: t, basis: b });
        }
    }
    Err(Error::Unsupported(format!(
        "{kind}: only basis cycles and single-twist images of them are decomposed"
    )))
}

/// Anchors of the basis cells on edges `0 = α`, `1 = β`, as (edge, t).
fn basis_anchors(w: &StandardWedge, b: Basis) -> [(usize, Q); 2] {
    match b {
        Basis::Wa => {
            let t = w.loop_anchors(0, 2);
            [(0, t[0].clone()), (0, t[1].clone())]
        }
        Basis::Wb => {
            let t = w.loop_anchors(1, 2);
            [(1, t[0].clone()), (1, t[1].clone())]
        }
        Basis::V => [(0, w.loop_anchors(0, 1)[0].clone()), (1, w.loop_anchors(1, 1)[0].clone())],
    }
}

/// Parameter offsets used to pick sample points on pieces.
fn piece_offset(edge: usize) -> Q {
    if edge == 0 {
        Q::zero()
    } else {
        q(1, 50)
    }
}

/// Decompose a two-point relative cycle of `Σ_{1,1}` in the basis
/// `(w(α), w(β), v(α,β))`.
///
/// Each region of the cycle (a pair of pieces of the supporting arcs) is
/// pushed onto a basis cell; its coefficient is the sign comparing the
/// orientations times φ of the loop that runs the tether of the source cell
/// (moved by the twist), slides along the arcs into the region, pushes the
/// points onto the edges, moves inside the basis cell to its marked
/// configuration and returns along that cell's tether.
pub fn decompose_cycle(kind: &CycleKind) -> Result<Chain> {
    let w = StandardWedge::new(1, 1, 2)?;
    let layout = &w.layout;
    let params = w.params;
    let real = realise(kind)?;
    let twist = |p: &[Step]| -> Vec<Step> {
        match real.twist {
            None => p.to_vec(),
            Some(t) => {
                let e = t.curve_edge();
                let dh = if e == 0 { q(1, 20) } else { q(1, 10) };
                layout.twist(p, &layout.twist_curve(e, &dh), t.power())
            }
        }
    };
    let src = real.basis;
    let src_tether: Vec<Vec<Step>> = w.tether(&src.cell())?.tether.iter().map(|p| twist(p)).collect();
    let anchors = basis_anchors(&w, src);
    let arcs: [Vec<Step>; 2] = match src {
        Basis::V => [twist(&layout.edge_arc(0)), twist(&layout.edge_arc(1))],
        Basis::Wa => {
            let a = twist(&layout.edge_arc(0));
            [a.clone(), a]
        }
        Basis::Wb => {
            let a = twist(&layout.edge_arc(1));
            [a.clone(), a]
        }
    };
    let mut start: Vec<PathPos> = Vec::new();
    for k in 0..2 {
        let found = locate(&arcs[k], 0..arcs[k].len(), anchors[k].0, &anchors[k].1);
        if found.len() != 1 {
            return Err(Error::Degenerate("tether anchor not found once on the twisted arc".into()));
        }
        start.push(found[0].clone());
    }
    let same_arc = src != Basis::V;
    let pcs = [pieces(&arcs[0]), pieces(&arcs[1])];
    let mut regions: Vec<(Piece, Piece, Q, Q)> = Vec::new();
    for (i, pi) in pcs[0].iter().enumerate() {
        for (j, pj) in pcs[1].iter().enumerate() {
            if same_arc && j < i {
                continue;
            }
            let (o1, o2) = (piece_offset(pi.edge), piece_offset(pj.edge));
            let params_list: Vec<(Q, Q)> = if same_arc && i == j {
                if pi.dir > 0 {
                    vec![(q(3, 10) + &o1, q(7, 10) + &o2)]
                } else {
                    vec![(q(7, 10) + &o1, q(3, 10) + &o2)]
                }
            } else if pi.edge != pj.edge {
                vec![(q(2, 5) + &o1, q(3, 5) + &o2)]
            } else {
                vec![(q(3, 10) + &o1, q(7, 10) + &o2), (q(7, 10) + &o1, q(3, 10) + &o2)]
            };
            for (r1, r2) in params_list {
                regions.push((pi.clone(), pj.clone(), r1, r2));
            }
        }
    }
    let mut chain: Chain = [GroupRingElement::zero(params), GroupRingElement::zero(params), GroupRingElement::zero(params)];
    for (pi, pj, r1, r2) in regions {
        let q1 = locate(&arcs[0], pi.steps.iter().copied(), pi.edge, &r1)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Degenerate("sample parameter outside its piece".into()))?;
        let q2 = locate(&arcs[1], pj.steps.iter().copied(), pj.edge, &r2)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Degenerate("sample parameter outside its piece".into()))?;
        let mut moves: Vec<Vec<Step>> = src_tether.clone();
        if !same_arc {
            moves.push(slide(&arcs[0], &start[0], &q1));
            moves.push(slide(&arcs[1], &start[1], &q2));
        } else if q2 >= start[1] {
            moves.push(slide(&arcs[0], &start[1], &q2));
            moves.push(slide(&arcs[0], &start[0], &q1));
        } else {
            moves.push(slide(&arcs[0], &start[0], &q1));
            moves.push(slide(&arcs[0], &start[1], &q2));
        }
        let (ta, tb) = (param_at(&arcs[0], &q1), param_at(&arcs[1], &q2));
        for (arc, pos, e, t) in [(&arcs[0], &q1, pi.edge, &ta), (&arcs[1], &q2, pj.edge, &tb)] {
            let p = at(arc, pos);
            let target = layout.epos(e, t);
            if p != target {
                moves.push(vec![seg(p, target)]);
            }
        }
        let d = pi.dir * pj.dir;
        let (tgt, sign) = if pi.edge == pj.edge {
            (if pi.edge == 0 { Basis::Wa } else { Basis::Wb }, if ta < tb { d } else { -d })
        } else {
            (Basis::V, if pi.edge == 0 { d } else { -d })
        };
        moves.extend(inner_moves(layout, &basis_anchors(&w, tgt), tgt, [(pi.edge, ta), (pj.edge, tb)]));
        for p in w.tether(&tgt.cell())?.tether.iter().rev() {
            moves.push(reverse(p));
        }
        let word = w.loop_to_word(&moves)?;
        let h = phi_eval(&word, params, 2)?;
        let idx = tgt.index();
        chain[idx] = chain[idx].add(&GroupRingElement::monomial(h, BigInt::from(sign)))?;
    }
    Ok(chain)
}

/// Moves inside a basis cell from the given points to its marked points.
fn inner_moves(layout: &Layout, target: &[(usize, Q); 2], b: Basis, mut cur: [(usize, Q); 2]) -> Vec<Vec<Step>> {
    if b == Basis::V {
        cur.sort();
        return (0..2)
            .filter(|&k| cur[k].1 != target[k].1)
            .map(|k| layout.edge_move(cur[k].0, &cur[k].1, &target[k].1))
            .collect();
    }
    let e = target[0].0;
    let (s, t) = if cur[0].1 < cur[1].1 { (cur[0].1.clone(), cur[1].1.clone()) } else { (cur[1].1.clone(), cur[0].1.clone()) };
    let (s2, t2) = (target[0].1.clone(), target[1].1.clone());
    let order = if t2 >= t { [(t, t2), (s, s2)] } else { [(s, s2), (t, t2)] };
    order.into_iter().filter(|(x, y)| x != y).map(|(x, y)| layout.edge_move(e, &x, &y)).collect()
}

/// Square matrix over `Z[H]`.
pub type RingMatrix = Vec<Vec<GroupRingElement>>;

pub fn ring_identity(params: SurfaceParams, n: usize) -> RingMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { GroupRingElement::one(params) } else { GroupRingElement::zero(params) }).collect())
        .collect()
}

pub fn ring_mul(a: &RingMatrix, b: &RingMatrix) -> Result<RingMatrix> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    if a.first().map_or(0, |r| r.len()) != b.len() {
        return Err(Error::DimensionMismatch { expected: a.first().map_or(0, |r| r.len()), found: b.len() });
    }
    let params = a.first().and_then(|r| r.first()).map(|e| e.params()).unwrap_or(SurfaceParams { g: 0, m: 1 });
    let mut out = vec![vec![GroupRingElement::zero(params); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = GroupRingElement::zero(params);
            for k in 0..b.len() {
                if a[i][k].is_zero() || b[k][j].is_zero() {
                    continue;
                }
                acc = acc.add(&a[i][k].mul(&b[k][j])?)?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

/// Render with rows on lines and entries separated by `&`.
pub fn render_matrix(m: &RingMatrix) -> String {
    m.iter().map(|row| row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" & ")).collect::<Vec<_>>().join("\n")
}

/// Matrix of a twist on `(w(α), w(β), v(α,β))`; column `j` is the image of
/// basis element `j`.
pub fn twist_matrix(t: Twist) -> Result<RingMatrix> {
    let (al, be) = (CurveWord::alpha(), CurveWord::beta());
    let images = [
        CycleKind::W(twist_image(t, &al)),
        CycleKind::W(twist_image(t, &be)),
        CycleKind::V(twist_image(t, &al), twist_image(t, &be)),
    ];
    let cols: Vec<Chain> = images.iter().map(decompose_cycle).collect::<Result<_>>()?;
    Ok((0..3).map(|i| (0..3).map(|j| cols[j][i].clone()).collect()).collect())
}

/// `M₁ · τ₁(M₂)`.
pub fn twisted_mul(m1: &RingMatrix, t1: &HeisenbergAutomorphism, m2: &RingMatrix) -> Result<RingMatrix> {
    ring_mul(m1, &t1.apply_matrix(m2)?)
}

/// A matrix together with the automorphism relabelling coefficients; pairs
/// compose as `(M₁, τ₁)(M₂, τ₂) = (M₁·τ₁(M₂), τ₁∘τ₂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMatrix {
    pub matrix: RingMatrix,
    pub aut: HeisenbergAutomorphism,
}

impl TwistedMatrix {
    pub fn of_twist(t: Twist) -> Result<Self> {
        Ok(TwistedMatrix { matrix: twist_matrix(t)?, aut: aut_from_twist(t) })
    }

    pub fn identity(params: SurfaceParams, n: usize) -> Self {
        TwistedMatrix { matrix: ring_identity(params, n), aut: HeisenbergAutomorphism::identity(params) }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(TwistedMatrix { matrix: twisted_mul(&self.matrix, &self.aut, &other.matrix)?, aut: self.aut.compose(&other.aut)? })
    }

    pub fn pow(&self, k: usize) -> Result<Self> {
        let p = self.aut.params();
        let mut acc = TwistedMatrix::identity(p, self.matrix.len());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
}

/// The braid relation between the twisted matrices of `T_a` and `T_b`, and
/// commutation of the boundary twist `(T_a T_b)⁶` with both.
pub fn verify_identities() -> Result<Vec<IdentityCheck>> {
    let a = TwistedMatrix::of_twist(Twist::Ta)?;
    let b = TwistedMatrix::of_twist(Twist::Tb)?;
    let lhs = a.mul(&b)?.mul(&a)?;
    let rhs = b.mul(&a)?.mul(&b)?;
    let mut out = vec![IdentityCheck {
        name: "braid relation M_a×(T_a)_H.M_b×(T_aT_b)_H.M_a = M_b×(T_b)_H.M_a×(T_bT_a)_H.M_b".into(),
        passed: lhs == rhs,
    }];
    let delta = a.mul(&b)?.pow(6)?;
    for (name, x) in [("M_a", &a), ("M_b", &b)] {
        out.push(IdentityCheck {
            name: format!("boundary twist (T_aT_b)^6 commutes with {name}"),
            passed: delta.mul(x)? == x.mul(&delta)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(k: i64, x: &[i64]) -> HeisenbergElement {
        HeisenbergElement::from_ints(p11(), k, x).unwrap()
    }

    #[test]
    fn generator_images() {
        let ta = aut_from_twist(Twist::Ta);
        let tb = aut_from_twist(Twist::Tb);
        assert_eq!(ta.apply(&el(0, &[1, 0])).unwrap(), el(0, &[1, 0]));
        assert_eq!(ta.apply(&el(0, &[0, 1])).unwrap(), el(-1, &[1, 1]));
        assert_eq!(tb.apply(&el(0, &[1, 0])).unwrap(), el(1, &[1, -1]));
        assert_eq!(ta.apply(&el(1, &[0, 0])).unwrap(), el(1, &[0, 0]));
        // u²a² is fixed by (T_a)_H
        let x = HeisenbergElement::from_normal_form(p11(), BigInt::from(2), vec![BigInt::from(2), BigInt::zero()]).unwrap();
        assert_eq!(ta.apply(&x).unwrap(), x);
    }

    #[test]
    fn inverses_compose_to_identity() {
        for t in [Twist::Ta, Twist::Tb] {
            let a = aut_from_twist(t);
            assert_eq!(a.compose(&a.inverse().unwrap()).unwrap(), HeisenbergAutomorphism::identity(p11()));
        }
    }

    #[test]
    fn non_symplectic_rejected() {
        assert_eq!(
            HeisenbergAutomorphism::from_ints(p11(), &[&[2, 0], &[0, 1]], &[0, 0]).unwrap_err(),
            Error::NotSymplectic
        );
    }

    #[test]
    fn curve_words() {
        let b = CurveWord::beta();
        let a = CurveWord::alpha();
        assert_eq!(twist_image(Twist::Ta, &b).to_string(), "βAα");
        assert_eq!(twist_image(Twist::Tb, &a).to_string(), "β^-1Aα");
        assert_eq!(twist_image(Twist::Ta, &a), a);
        assert_eq!(CurveWord::parse("β⁻¹Aα").unwrap(), twist_image(Twist::Tb, &a));
        assert_eq!(CurveWord::parse("b a a^-1").unwrap(), b);
    }

    #[test]
    fn basis_cycles_decompose_to_themselves() {
        let c = decompose_cycle(&CycleKind::W(CurveWord::alpha())).unwrap();
        assert_eq!(c[0], GroupRingElement::one(p11()));
        assert!(c[1].is_zero() && c[2].is_zero());
    }

    #[test]
    fn unsupported_words_error() {
        let w = CurveWord::parse("βAαAβ").unwrap();
        assert!(matches!(decompose_cycle(&CycleKind::W(w)), Err(Error::Unsupported(_))));
    }

    fn parse_matrix(rows: [[&str; 3]; 3]) -> RingMatrix {
        rows.iter().map(|r| r.iter().map(|e| GroupRingElement::parse(p11(), e).unwrap()).collect()).collect()
    }

    pub(super) fn expected_ma() -> RingMatrix {
        parse_matrix([["1", "1", "-u + 1"], ["0", "u^2 a1^2", "0"], ["0", "a1", "a1"]])
    }

    pub(super) fn expected_mb() -> RingMatrix {
        parse_matrix([
            ["1", "0", "0"],
            ["-u^7 a1^2 b1^-2", "1", "-u^4 a1 b1^-1 + u^3 a1 b1^-1"],
            ["-u^2 a1 b1^-1", "0", "1"],
        ])
    }

    #[test]
    fn twist_matrices_match_known_values() {
        assert_eq!(twist_matrix(Twist::Ta).unwrap(), expected_ma());
        assert_eq!(twist_matrix(Twist::Tb).unwrap(), expected_mb());
    }

    #[test]
    fn inverse_twists_cancel() {
        for (t, ti) in [(Twist::Ta, Twist::TaInv), (Twist::Tb, Twist::TbInv)] {
            let a = TwistedMatrix::of_twist(t).unwrap();
            let b = TwistedMatrix::of_twist(ti).unwrap();
            assert_eq!(a.mul(&b).unwrap(), TwistedMatrix::identity(p11(), 3), "{t}");
        }
    }

    #[test]
    fn identities_hold() {
        for c in verify_identities().unwrap() {
            assert!(c.passed, "{}", c.name);
        }
    }

    #[test]
    fn quoted_decompositions() {
        let ba = CurveWord::parse("βAα").unwrap();
        let w = decompose_cycle(&CycleKind::W(ba.clone())).unwrap();
        let expect = |e: &str| GroupRingElement::parse(p11(), e).unwrap();
        assert_eq!(w, [expect("1"), expect("u^2 a1^2"), expect("a1")]);
        let v = decompose_cycle(&CycleKind::V(CurveWord::alpha(), ba)).unwrap();
        assert_eq!(v, [expect("-u + 1"), GroupRingElement::zero(p11()), expect("a1")]);
    }

    #[test]
    fn rendering_of_twist_matrices() {
        let mb = render_matrix(&twist_matrix(Twist::Tb).unwrap());
        assert_eq!(mb.lines().nth(1).unwrap(), "-u^7·a1^2·b1^-2 & 1 & -u^4·a1·b1^-1 + u^3·a1·b1^-1");
    }
}
