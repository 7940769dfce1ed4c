//! Exact planar picture of the standard relative model.
//!
//! The surface is a rectangle `D` with bands glued along its left side. The
//! interval `A` is the bottom segment from `v0 = (4,0)` to `v1 = (8,0)`; loop
//! edge `i` runs straight from `v1` to the entry point `(0, in_i)` of its
//! band, through the band, and straight from `(0, out_i)` down to `v0`. A band
//! glues `(0, in_i + d)` to `(0, out_i - d)`.
//!
//! Braids are read off by projecting to the x-axis (ties broken by y, i.e. an
//! infinitesimally tilted projection): an exchange of two points in that
//! order is a half-twist, and the leftmost point passing through a band is a
//! surface generator.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::heisenberg::{BraidGenerator, BraidLetter, BraidWord};
use crate::ribbon_graph::band_slots;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn half() -> Q {
    q(1, 2)
}

/// Sign attached to a half-twist in which the moving point passes above a
/// point while moving right.
const SWAP_SIGN: i8 = -1;
/// Handedness of the twist surgery.
const HAND: i8 = -1;
/// Edge parameters within this distance of a vertex are left unlabelled in
/// the arcs used for surgery.
fn tau() -> Q {
    q(3, 50)
}

/// Points compare lexicographically; this is the tilted projection order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pt {
    pub x: Q,
    pub y: Q,
}

impl Pt {
    pub fn new(x: Q, y: Q) -> Self {
        Pt { x, y }
    }

    pub fn lerp(&self, other: &Pt, t: &Q) -> Pt {
        Pt { x: &self.x + (&other.x - &self.x) * t, y: &self.y + (&other.y - &self.y) * t }
    }

    fn shifted(&self, dy: &Q) -> Pt {
        Pt { x: self.x.clone(), y: &self.y + dy }
    }
}

/// Marks a segment lying along (or parallel to) loop edge `edge`, covering
/// parameters `t0 → t1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    pub edge: usize,
    pub t0: Q,
    pub t1: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Step {
    Seg { from: Pt, to: Pt, label: Option<Label> },
    Teleport { band: usize, dir: i8 },
}

pub fn seg(from: Pt, to: Pt) -> Step {
    Step::Seg { from, to, label: None }
}

pub fn reverse(path: &[Step]) -> Vec<Step> {
    path.iter()
        .rev()
        .map(|s| match s {
            Step::Teleport { band, dir } => Step::Teleport { band: *band, dir: -dir },
            Step::Seg { from, to, label } => Step::Seg {
                from: to.clone(),
                to: from.clone(),
                label: label.as_ref().map(|l| Label { edge: l.edge, t0: l.t1.clone(), t1: l.t0.clone() }),
            },
        })
        .collect()
}

/// The part of a segment between fractions `l0` and `l1`.
pub fn sub(step: &Step, l0: &Q, l1: &Q) -> Step {
    match step {
        Step::Seg { from, to, label } => Step::Seg {
            from: from.lerp(to, l0),
            to: from.lerp(to, l1),
            label: label.as_ref().map(|l| {
                let d = &l.t1 - &l.t0;
                Label { edge: l.edge, t0: &l.t0 + &d * l0, t1: &l.t0 + &d * l1 }
            }),
        },
        Step::Teleport { .. } => step.clone(),
    }
}

fn det(ax: &Q, ay: &Q, bx: &Q, by: &Q) -> Q {
    ax * by - ay * bx
}

/// Interior crossing of segments `p→q` and `a→b`: fractions along each and
/// the sign of the crossing.
pub fn intersect(p: &Pt, qq: &Pt, a: &Pt, b: &Pt) -> Option<(Q, Q, i8)> {
    let (dx, dy) = (&qq.x - &p.x, &qq.y - &p.y);
    let (cx, cy) = (&b.x - &a.x, &b.y - &a.y);
    let den = det(&dx, &dy, &cx, &cy);
    if den.is_zero() {
        return None;
    }
    let (wx, wy) = (&a.x - &p.x, &a.y - &p.y);
    let lam = det(&wx, &wy, &cx, &cy) / &den;
    let mu = det(&wx, &wy, &dx, &dy) / &den;
    let zero = Q::zero();
    let one = Q::one();
    if lam > zero && lam < one && mu > zero && mu < one {
        Some((lam, mu, if den.is_positive() { 1 } else { -1 }))
    } else {
        None
    }
}

/// Geometry of the standard relative model of `Σ_{g,m}`.
#[derive(Clone, Debug)]
pub struct Layout {
    pub g: usize,
    pub m: usize,
    bands: Vec<(Q, Q)>,
}

impl Layout {
    pub fn new(g: usize, m: usize) -> Self {
        let bands = band_slots(g, m)
            .into_iter()
            .map(|(i, o)| (q(i as i64 + 4, 1), q(o as i64 + 2, 1)))
            .collect();
        Layout { g, m, bands }
    }

    pub fn loop_count(&self) -> usize {
        self.bands.len()
    }

    pub fn v0(&self) -> Pt {
        Pt::new(q(4, 1), Q::zero())
    }

    pub fn v1(&self) -> Pt {
        Pt::new(q(8, 1), Q::zero())
    }

    /// Point of `A` at parameter `t ∈ [0,1]`.
    pub fn a_point(&self, t: &Q) -> Pt {
        Pt::new(q(4, 1) + q(4, 1) * t, Q::zero())
    }

    /// Point of loop edge `e` at parameter `t`; at `t = 1/2` the flag picks
    /// the exit side of the band.
    pub fn epos_side(&self, e: usize, t: &Q, second: bool) -> Pt {
        let (inn, out) = &self.bands[e];
        if !second {
            self.v1().lerp(&Pt::new(Q::zero(), inn.clone()), &(t * q(2, 1)))
        } else {
            Pt::new(Q::zero(), out.clone()).lerp(&self.v0(), &(t * q(2, 1) - Q::one()))
        }
    }

    pub fn epos(&self, e: usize, t: &Q) -> Pt {
        self.epos_side(e, t, *t > half())
    }

    pub fn teleport_target(&self, band: usize, y: &Q, dir: i8) -> Q {
        let (inn, out) = &self.bands[band];
        if dir > 0 {
            out - (y - inn)
        } else {
            inn - (y - out)
        }
    }

    fn in_band(&self, band: usize, y: &Q, dir: i8) -> bool {
        let (inn, out) = &self.bands[band];
        let c = if dir > 0 { inn } else { out };
        (y - c).abs() < half()
    }

    pub fn generator(&self, e: usize) -> BraidGenerator {
        if e < self.g {
            BraidGenerator::Alpha(e + 1)
        } else if e < 2 * self.g {
            BraidGenerator::Beta(e - self.g + 1)
        } else {
            BraidGenerator::Gamma(e - 2 * self.g + 1)
        }
    }

    /// Path along loop edge `e` from parameter `t0` to `t1`.
    pub fn edge_move(&self, e: usize, t0: &Q, t1: &Q) -> Vec<Step> {
        match t0.cmp(t1) {
            Ordering::Equal => Vec::new(),
            Ordering::Greater => reverse(&self.edge_move(e, t1, t0)),
            Ordering::Less => {
                let h = half();
                if *t1 <= h || *t0 >= h {
                    vec![seg(self.epos_side(e, t0, *t0 >= h && *t1 > h), self.epos(e, t1))]
                } else {
                    vec![
                        seg(self.epos(e, t0), self.epos_side(e, &h, false)),
                        Step::Teleport { band: e, dir: 1 },
                        seg(self.epos_side(e, &h, true), self.epos(e, t1)),
                    ]
                }
            }
        }
    }

    /// The whole of loop edge `e` from `v1` to `v0`, with the part away from
    /// the vertices labelled.
    pub fn edge_arc(&self, e: usize) -> Vec<Step> {
        let (t, h) = (tau(), half());
        let one_t = Q::one() - &t;
        vec![
            seg(self.v1(), self.epos(e, &t)),
            Step::Seg {
                from: self.epos(e, &t),
                to: self.epos_side(e, &h, false),
                label: Some(Label { edge: e, t0: t.clone(), t1: h.clone() }),
            },
            Step::Teleport { band: e, dir: 1 },
            Step::Seg {
                from: self.epos_side(e, &h, true),
                to: self.epos(e, &one_t),
                label: Some(Label { edge: e, t0: h, t1: one_t.clone() }),
            },
            seg(self.epos(e, &one_t), self.v0()),
        ]
    }

    /// Closed curve parallel to `e ∪ A`: along a copy of `A` at height `dh`,
    /// then beside `e` (below its first half, above its second half).
    pub fn twist_curve(&self, e: usize, dh: &Q) -> Vec<Step> {
        let dl = q(1, 20);
        let neg_dl = -dl.clone();
        let par1 = |t: &Q| self.epos_side(e, t, false).shifted(&neg_dl);
        let par2 = |t: &Q| self.epos_side(e, t, true).shifted(&dl);
        let (t, h) = (tau(), half());
        let one_t = Q::one() - &t;
        let qs = par1(&q(3, 100));
        let qe = par2(&q(97, 100));
        let s = Pt::new(q(43, 10), dh.clone());
        let tt = Pt::new(q(77, 10), dh.clone());
        vec![
            seg(s.clone(), tt.clone()),
            seg(tt, qs.clone()),
            seg(qs, par1(&t)),
            Step::Seg { from: par1(&t), to: par1(&h), label: Some(Label { edge: e, t0: t.clone(), t1: h.clone() }) },
            Step::Teleport { band: e, dir: 1 },
            Step::Seg { from: par2(&h), to: par2(&one_t), label: Some(Label { edge: e, t0: h, t1: one_t.clone() }) },
            seg(par2(&one_t), qe.clone()),
            seg(qe, s),
        ]
    }

    /// Dehn twist surgery of a path along a closed curve: at every crossing
    /// insert one full traversal of the curve, in the direction fixed by the
    /// crossing sign, the handedness, and `power = ±1`.
    pub fn twist(&self, path: &[Step], curve: &[Step], power: i8) -> Vec<Step> {
        let mut out = Vec::new();
        for step in path {
            let (from, to) = match step {
                Step::Seg { from, to, .. } => (from, to),
                Step::Teleport { .. } => {
                    out.push(step.clone());
                    continue;
                }
            };
            let mut hits: Vec<(Q, usize, Q, i8)> = Vec::new();
            for (k, c) in curve.iter().enumerate() {
                if let Step::Seg { from: a, to: b, .. } = c {
                    if let Some((lam, mu, sg)) = intersect(from, to, a, b) {
                        hits.push((lam, k, mu, sg));
                    }
                }
            }
            hits.sort_by(|x, y| x.0.cmp(&y.0));
            let mut l = Q::zero();
            for (lam, k, mu, sg) in hits {
                out.push(sub(step, &l, &lam));
                let fwd = sg * HAND * power > 0;
                out.extend(traverse(curve, k, &mu, fwd));
                l = lam;
            }
            out.push(sub(step, &l, &Q::one()));
        }
        out
    }
}

/// Go once around a closed curve starting at fraction `mu` of segment `k`.
fn traverse(curve: &[Step], k: usize, mu: &Q, fwd: bool) -> Vec<Step> {
    let mut out = vec![sub(&curve[k], mu, &Q::one())];
    out.extend_from_slice(&curve[k + 1..]);
    out.extend_from_slice(&curve[..k]);
    out.push(sub(&curve[k], &Q::zero(), mu));
    if fwd {
        out
    } else {
        reverse(&out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Event {
    /// Exchange of the points at positions `index`, `index + 1` (1-based) of
    /// the projection order.
    Swap { index: usize, sign: i8 },
    Band { band: usize, dir: i8 },
}

/// `n` labelled points in the planar picture, moved one at a time, with the
/// braid events recorded.
#[derive(Clone, Debug)]
pub struct Scene<'a> {
    layout: &'a Layout,
    pos: Vec<Pt>,
    events: Vec<Event>,
}

impl<'a> Scene<'a> {
    pub fn new(layout: &'a Layout, pos: Vec<Pt>) -> Self {
        Scene { layout, pos, events: Vec::new() }
    }

    pub fn positions(&self) -> &[Pt] {
        &self.pos
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    /// Move point `i` straight to `target`.
    pub fn go(&mut self, i: usize, target: &Pt) -> Result<()> {
        let p0 = self.pos[i].clone();
        if p0 == *target {
            return Ok(());
        }
        let right = target.x > p0.x;
        let mut crossings: Vec<(Q, Pt, i8)> = Vec::new();
        for (j, qp) in self.pos.iter().enumerate() {
            if j == i {
                continue;
            }
            if *target == *qp {
                return Err(Error::Degenerate(format!("move ends on another point ({}, {})", qp.x, qp.y)));
            }
            let s0 = p0.cmp(qp);
            let s1 = target.cmp(qp);
            if s0 == s1 {
                continue;
            }
            if p0.x == target.x {
                return Err(Error::Degenerate("vertical move through another point".into()));
            }
            let t = (&qp.x - &p0.x) / (&target.x - &p0.x);
            let y = &p0.y + (&target.y - &p0.y) * &t;
            if y == qp.y {
                return Err(Error::Degenerate(format!("move passes through ({}, {})", qp.x, qp.y)));
            }
            let above = y > qp.y;
            let sign = if right == above { SWAP_SIGN } else { -SWAP_SIGN };
            crossings.push((t, qp.clone(), sign));
        }
        crossings.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| if right { a.1.cmp(&b.1) } else { b.1.cmp(&a.1) }));
        for (_, qp, sign) in crossings {
            let index = 1 + self.pos.iter().enumerate().filter(|&(j, p)| j != i && *p < qp).count();
            self.events.push(Event::Swap { index, sign });
        }
        self.pos[i] = target.clone();
        Ok(())
    }

    pub fn teleport(&mut self, i: usize, band: usize, dir: i8) -> Result<()> {
        let p = &self.pos[i];
        if !p.x.is_zero() || !self.layout.in_band(band, &p.y, dir) {
            return Err(Error::Degenerate(format!("point ({}, {}) is not at the mouth of band {band}", p.x, p.y)));
        }
        if self.pos.iter().enumerate().any(|(j, o)| j != i && !o.x.is_positive()) {
            return Err(Error::Degenerate("band passage by a point that is not leftmost".into()));
        }
        let y = self.layout.teleport_target(band, &p.y, dir);
        self.pos[i] = Pt::new(Q::zero(), y);
        self.events.push(Event::Band { band, dir });
        Ok(())
    }

    pub fn follow(&mut self, i: usize, path: &[Step]) -> Result<()> {
        for s in path {
            match s {
                Step::Teleport { band, dir } => self.teleport(i, *band, *dir)?,
                Step::Seg { from, to, .. } => {
                    if self.pos[i] != *from {
                        return Err(Error::Degenerate("path does not continue from the point's position".into()));
                    }
                    self.go(i, to)?;
                }
            }
        }
        Ok(())
    }

    /// Move the unique point sitting at the start of `path` along it.
    pub fn run(&mut self, path: &[Step]) -> Result<()> {
        let start = match path.first() {
            None => return Ok(()),
            Some(Step::Seg { from, .. }) => from,
            Some(Step::Teleport { .. }) => return Err(Error::Degenerate("path starts with a band passage".into())),
        };
        let who: Vec<usize> = (0..self.pos.len()).filter(|&j| self.pos[j] == *start).collect();
        if who.len() != 1 {
            return Err(Error::Degenerate(format!("no unique point at ({}, {})", start.x, start.y)));
        }
        self.follow(who[0], path)
    }

    /// The recorded motion as a braid word. Loops compose from right to left,
    /// so the word lists events latest first.
    pub fn word(&self) -> BraidWord {
        BraidWord::new(
            self.events
                .iter()
                .rev()
                .map(|e| match *e {
                    Event::Swap { index, sign } => BraidLetter::new(BraidGenerator::Sigma(index), sign),
                    Event::Band { band, dir } => BraidLetter::new(self.layout.generator(band), dir),
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{phi_eval, SurfaceParams};

    #[test]
    fn layout_matches_handle_picture() {
        let l = Layout::new(1, 1);
        assert_eq!(l.bands, vec![(q(7, 1), q(3, 1)), (q(6, 1), q(2, 1))]);
        assert_eq!(l.epos(0, &Q::zero()), l.v1());
        assert_eq!(l.epos(0, &Q::one()), l.v0());
    }

    #[test]
    fn edge_loop_reads_as_generator() {
        let l = Layout::new(1, 1);
        let b = [l.a_point(&q(3, 10)), l.a_point(&q(13, 20))];
        let mut s = Scene::new(&l, b.to_vec());
        let (t0, t1) = (q(1, 5), q(4, 5));
        let mut path = vec![seg(b[0].clone(), l.epos(1, &t0))];
        path.extend(l.edge_move(1, &t0, &t1));
        path.push(seg(l.epos(1, &t1), b[0].clone()));
        s.run(&path).unwrap();
        assert_eq!(s.positions(), &b);
        let p = SurfaceParams::new(1, 1).unwrap();
        let h = phi_eval(&s.word(), p, 2).unwrap();
        assert_eq!((h.k.clone(), h.x.clone()), (BigInt::from(0), vec![BigInt::from(0), BigInt::from(1)]));
    }

    #[test]
    fn exchange_twice_is_full_twist() {
        let l = Layout::new(0, 1);
        let b = [l.a_point(&q(1, 4)), l.a_point(&q(3, 4))];
        let mut s = Scene::new(&l, b.to_vec());
        let top = Pt::new(q(6, 1), q(1, 1));
        // first point circles around the second one
        let path = vec![
            seg(b[0].clone(), Pt::new(q(5, 1), q(1, 1))),
            seg(Pt::new(q(5, 1), q(1, 1)), top.clone()),
            seg(top, Pt::new(q(15, 2), q(1, 1))),
            seg(Pt::new(q(15, 2), q(1, 1)), Pt::new(q(15, 2), q(-1, 1))),
            seg(Pt::new(q(15, 2), q(-1, 1)), Pt::new(q(5, 1), q(-1, 1))),
            seg(Pt::new(q(5, 1), q(-1, 1)), b[0].clone()),
        ];
        s.run(&path).unwrap();
        assert_eq!(s.events().len(), 2);
        let signs: Vec<i8> = s.events().iter().map(|e| if let Event::Swap { sign, .. } = e { *sign } else { 0 }).collect();
        assert_eq!(signs[0], signs[1]);
    }

    #[test]
    fn collisions_are_reported() {
        let l = Layout::new(0, 1);
        let b = [l.a_point(&q(1, 4)), l.a_point(&q(3, 4))];
        let mut s = Scene::new(&l, b.to_vec());
        assert!(matches!(s.go(0, &l.v1()), Err(Error::Degenerate(_))));
    }
}
