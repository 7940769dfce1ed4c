//! The discrete Heisenberg group of a surface, its integral group ring, the
//! braid-word evaluation map φ and the linearised regular representation.
//!
//! Coordinates of `H₁(Σ_{g,m})` are ordered `(a_1..a_g, b_1..b_g, c_1..c_{m-1})`
//! and the intersection form pairs `a_r·b_r = +1`; the `c_t` span the radical.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Genus and number of boundary components of `Σ_{g,m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SurfaceParams {
    pub g: usize,
    pub m: usize,
}

impl SurfaceParams {
    pub fn new(g: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("m must be at least 1".into()));
        }
        Ok(SurfaceParams { g, m })
    }

    /// Rank of `H₁(Σ_{g,m})`, i.e. `2g + m - 1`.
    pub fn rank(&self) -> usize {
        2 * self.g + self.m - 1
    }

    /// Printable name of the `i`-th basis class (`a1`, `b1`, `c1`, ...).
    pub fn basis_name(&self, i: usize) -> String {
        if i < self.g {
            format!("a{}", i + 1)
        } else if i < 2 * self.g {
            format!("b{}", i - self.g + 1)
        } else {
            format!("c{}", i - 2 * self.g + 1)
        }
    }

    /// Inverse of [`basis_name`](Self::basis_name).
    pub fn basis_index(&self, name: &str) -> Option<usize> {
        let (head, idx) = name.split_at(1);
        let r: usize = idx.parse().ok()?;
        if r == 0 {
            return None;
        }
        match head {
            "a" if r <= self.g => Some(r - 1),
            "b" if r <= self.g => Some(self.g + r - 1),
            "c" if r < self.m => Some(2 * self.g + r - 1),
            _ => None,
        }
    }

    /// `J[i][j] = e_i · e_j`.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut j = vec![vec![0; n]; n];
        for r in 0..self.g {
            j[r][self.g + r] = 1;
            j[self.g + r][r] = -1;
        }
        j
    }
}

/// `x·y` on `H₁(Σ_{g,m})`; only the `a_r`/`b_r` pairs contribute.
pub fn intersection_form(params: SurfaceParams, x: &[BigInt], y: &[BigInt]) -> Result<BigInt> {
    let n = params.rank();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x.len().max(y.len()) });
    }
    Ok(pair(params.g, x, y))
}

fn pair(g: usize, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for r in 0..g {
        s += &x[r] * &y[g + r];
        s -= &x[g + r] * &y[r];
    }
    s
}

/// An element `(k, x)` of `H(Σ_{g,m})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeisenbergElement {
    pub k: BigInt,
    pub x: Vec<BigInt>,
    g: usize,
}

impl HeisenbergElement {
    pub fn identity(params: SurfaceParams) -> Self {
        HeisenbergElement { k: BigInt::zero(), x: vec![BigInt::zero(); params.rank()], g: params.g }
    }

    pub fn new(params: SurfaceParams, k: BigInt, x: Vec<BigInt>) -> Result<Self> {
        if x.len() != params.rank() {
            return Err(Error::DimensionMismatch { expected: params.rank(), found: x.len() });
        }
        Ok(HeisenbergElement { k, x, g: params.g })
    }

    /// Convenience constructor from small integers.
    pub fn from_ints(params: SurfaceParams, k: i64, x: &[i64]) -> Result<Self> {
        Self::new(params, BigInt::from(k), x.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// The central generator `u = (1, 0)`.
    pub fn u(params: SurfaceParams) -> Self {
        let mut e = Self::identity(params);
        e.k = BigInt::one();
        e
    }

    /// `(0, e_i)`: the lift of the `i`-th basis class.
    pub fn generator(params: SurfaceParams, i: usize) -> Self {
        let mut e = Self::identity(params);
        e.x[i] = BigInt::one();
        e
    }

    pub fn params(&self) -> SurfaceParams {
        SurfaceParams { g: self.g, m: self.x.len() + 1 - 2 * self.g }
    }

    pub fn is_identity(&self) -> bool {
        self.k.is_zero() && self.x.iter().all(Zero::is_zero)
    }

    pub fn is_central(&self) -> bool {
        self.x.iter().all(Zero::is_zero)
    }

    /// `Δ = Σ_r p_r q_r`, the correction between `k` and the exponent of `u`
    /// in the ordered word `u^{k-Δ} a_1^{p_1} ... b_g^{q_g} c^...`.
    pub fn delta(&self) -> BigInt {
        (0..self.g).map(|r| &self.x[r] * &self.x[self.g + r]).sum()
    }

    /// Exponent of `u` in the normal-form word.
    pub fn u_exponent(&self) -> BigInt {
        &self.k - self.delta()
    }

    /// Inverse of [`u_exponent`](Self::u_exponent): the element whose normal
    /// form is `u^e · Π gens^{x}`.
    pub fn from_normal_form(params: SurfaceParams, e: BigInt, x: Vec<BigInt>) -> Result<Self> {
        let mut h = Self::new(params, BigInt::zero(), x)?;
        h.k = e + h.delta();
        Ok(h)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.x.len() != other.x.len() || self.g != other.g {
            return Err(Error::DimensionMismatch { expected: self.x.len(), found: other.x.len() });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let k = &self.k + &other.k + pair(self.g, &self.x, &other.x);
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect();
        HeisenbergElement { k, x, g: self.g }
    }

    pub fn inv(&self) -> Self {
        HeisenbergElement { k: -&self.k, x: self.x.iter().map(|v| -v).collect(), g: self.g }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut acc = HeisenbergElement { k: BigInt::zero(), x: vec![BigInt::zero(); self.x.len()], g: self.g };
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul_unchecked(&base);
        }
        acc
    }

    /// Normal-form factors `(name, exponent)` excluding `u`.
    fn factors(&self) -> Vec<(String, BigInt)> {
        let p = self.params();
        self.x
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (p.basis_name(i), v.clone()))
            .collect()
    }
}

pub fn h_mul(a: &HeisenbergElement, b: &HeisenbergElement) -> Result<HeisenbergElement> {
    a.mul(b)
}

pub fn h_inv(a: &HeisenbergElement) -> HeisenbergElement {
    a.inv()
}

fn fmt_pow(name: &str, e: &BigInt) -> String {
    if e.is_one() {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

impl fmt::Display for HeisenbergElement {
    /// Normal form `u^{k-Δ}·a1^p·b1^q·...`; the identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let e = self.u_exponent();
        if !e.is_zero() {
            parts.push(fmt_pow("u", &e));
        }
        for (n, v) in self.factors() {
            parts.push(fmt_pow(&n, &v));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// A finite formal sum `Σ c_h · h` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    params: SurfaceParams,
    terms: BTreeMap<HeisenbergElement, BigInt>,
}

impl GroupRingElement {
    pub fn zero(params: SurfaceParams) -> Self {
        GroupRingElement { params, terms: BTreeMap::new() }
    }

    pub fn one(params: SurfaceParams) -> Self {
        Self::monomial(HeisenbergElement::identity(params), BigInt::one())
    }

    pub fn monomial(h: HeisenbergElement, c: BigInt) -> Self {
        let params = h.params();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(h, c);
        }
        GroupRingElement { params, terms }
    }

    pub fn from_element(h: HeisenbergElement) -> Self {
        Self::monomial(h, BigInt::one())
    }

    pub fn params(&self) -> SurfaceParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HeisenbergElement, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, h: HeisenbergElement, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(h).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.params != other.params {
            return Err(Error::DimensionMismatch { expected: self.params.rank(), found: other.params.rank() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (h, c) in &other.terms {
            out.add_term(h.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            params: self.params,
            terms: self.terms.iter().map(|(h, c)| (h.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Noncommutative convolution; `self` on the left.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.params);
        for (h1, c1) in &self.terms {
            for (h2, c2) in &other.terms {
                out.add_term(h1.mul_unchecked(h2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.params);
        for (h, v) in &self.terms {
            out.add_term(h.clone(), &(v * c));
        }
        out
    }

    /// Apply a map on group elements termwise, extended linearly.
    pub fn map_elements<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&HeisenbergElement) -> Result<HeisenbergElement>,
    {
        let mut out = Self::zero(self.params);
        for (h, c) in &self.terms {
            out.add_term(f(h)?, c);
        }
        Ok(out)
    }

    /// Sum of coefficients (the augmentation `u, gens ↦ 1`).
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Parse the normal-form grammar used by [`Display`](fmt::Display).
    pub fn parse(params: SurfaceParams, s: &str) -> Result<Self> {
        parse_ring(params, s)
    }
}

pub fn gr_add(p: &GroupRingElement, q: &GroupRingElement) -> Result<GroupRingElement> {
    p.add(q)
}

pub fn gr_mul(p: &GroupRingElement, q: &GroupRingElement) -> Result<GroupRingElement> {
    p.mul(q)
}

impl fmt::Display for GroupRingElement {
    /// Terms are grouped by their `H₁` part; within a group, powers of `u`
    /// descend, so `(-u^4 + u^3)·a1·b1^-1` prints as `-u^4·a1·b1^-1 + u^3·a1·b1^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| a.x.cmp(&b.x).then_with(|| b.u_exponent().cmp(&a.u_exponent())));
        let mut out = String::new();
        for (i, (h, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = h.to_string();
            if mag.is_one() {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&mag.to_string());
            } else {
                out.push_str(&format!("{mag}·{body}"));
            }
        }
        write!(f, "{out}")
    }
}

fn parse_ring(params: SurfaceParams, s: &str) -> Result<GroupRingElement> {
    let bad = |msg: &str| Error::Parse { line: 0, message: format!("{msg} in `{s}`") };
    let cleaned: String = s.replace('−', "-").replace(['·', '*'], " ");
    let mut out = GroupRingElement::zero(params);
    // split into signed terms at top-level + / - (not those following '^')
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    let mut prev = ' ';
    for ch in cleaned.chars() {
        if (ch == '+' || ch == '-') && prev != '^' {
            if !cur.trim().is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if prev == '+' || prev == '-' {
                return Err(bad("repeated sign"));
            }
            cur.clear();
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = ch;
        }
    }
    if !cur.trim().is_empty() {
        terms.push((neg, cur));
    }
    if terms.is_empty() {
        return Err(bad("empty expression"));
    }
    for (neg, body) in terms {
        let toks = tokenize_factors(&body).ok_or_else(|| bad("malformed term"))?;
        let mut coeff = BigInt::one();
        let mut uexp = BigInt::zero();
        let mut x = vec![BigInt::zero(); params.rank()];
        let mut last_gen: Option<usize> = None;
        for (name, exp) in toks {
            if let Ok(c) = name.parse::<BigInt>() {
                if exp.is_some() {
                    return Err(bad("exponent on a coefficient"));
                }
                coeff *= c;
                continue;
            }
            let e = exp.unwrap_or_else(BigInt::one);
            if name == "u" {
                uexp += e;
            } else if name == "1" {
            } else {
                let i = params.basis_index(&name).ok_or_else(|| bad(&format!("unknown generator `{name}`")))?;
                if let Some(l) = last_gen {
                    if i <= l {
                        return Err(bad("generators must appear in normal-form order"));
                    }
                }
                last_gen = Some(i);
                x[i] += e;
            }
        }
        let h = HeisenbergElement::from_normal_form(params, uexp, x)?;
        out.add_term(h, &if neg { -coeff } else { coeff });
    }
    Ok(out)
}

/// Split `u^2 a1 b1^-1` / `u2a1` style factor strings into `(name, exponent)`.
fn tokenize_factors(body: &str) -> Option<Vec<(String, Option<BigInt>)>> {
    let chars: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        let name = if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            chars[st..i].iter().collect::<String>()
        } else if c == 'u' {
            i += 1;
            "u".to_string()
        } else if matches!(c, 'a' | 'b' | 'c') {
            let st = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i == st + 1 {
                return None;
            }
            chars[st..i].iter().collect::<String>()
        } else {
            return None;
        };
        let mut exp = None;
        if i < chars.len() && chars[i] == '^' {
            i += 1;
            let st = i;
            if i < chars.len() && chars[i] == '-' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = chars[st..i].iter().collect();
            exp = Some(txt.parse::<BigInt>().ok()?);
        }
        out.push((name, exp));
    }
    Some(out)
}

/// A generator of the surface braid group, as in the Scott/Bellingeri
/// presentation: `σ_i` (1-based), `α_r`, `β_s`, `γ_t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BraidGenerator {
    Sigma(usize),
    Alpha(usize),
    Beta(usize),
    Gamma(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BraidLetter {
    pub gen: BraidGenerator,
    pub exp: i8,
}

impl BraidLetter {
    pub fn new(gen: BraidGenerator, exp: i8) -> Self {
        BraidLetter { gen, exp }
    }

    pub fn inverse(self) -> Self {
        BraidLetter { gen: self.gen, exp: -self.exp }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (c, i) = match self.gen {
            BraidGenerator::Sigma(i) => ('s', i),
            BraidGenerator::Alpha(i) => ('a', i),
            BraidGenerator::Beta(i) => ('b', i),
            BraidGenerator::Gamma(i) => ('c', i),
        };
        if self.exp == 1 {
            write!(f, "{c}{i}")
        } else {
            write!(f, "{c}{i}^-1")
        }
    }
}

/// A braid word, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct BraidWord(pub Vec<BraidLetter>);

impl BraidWord {
    pub fn new(letters: Vec<BraidLetter>) -> Self {
        BraidWord(letters)
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        BraidWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BraidWord(v)
    }

    /// Parse whitespace-separated letters: `s1`, `a2^-1`, `b1`, `c1`, ...
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            let bad = || Error::Parse { line: 0, message: format!("bad braid letter `{tok}`") };
            let (body, exp) = match tok.strip_suffix("^-1") {
                Some(b) => (b, -1),
                None => (tok.strip_suffix("^1").unwrap_or(tok), 1),
            };
            let mut it = body.chars();
            let head = it.next().ok_or_else(bad)?;
            let idx: usize = it.as_str().parse().map_err(|_| bad())?;
            if idx == 0 {
                return Err(bad());
            }
            let gen = match head {
                's' => BraidGenerator::Sigma(idx),
                'a' => BraidGenerator::Alpha(idx),
                'b' => BraidGenerator::Beta(idx),
                'c' => BraidGenerator::Gamma(idx),
                _ => return Err(bad()),
            };
            out.push(BraidLetter::new(gen, exp));
        }
        Ok(BraidWord(out))
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Image of one generator under φ.
pub fn phi_generator(gen: BraidGenerator, params: SurfaceParams, n: usize) -> Result<HeisenbergElement> {
    let range = |what: &str, i: usize, max: usize| {
        if i == 0 || i > max {
            Err(Error::OutOfRange(format!("{what}{i} (valid 1..={max})")))
        } else {
            Ok(())
        }
    };
    Ok(match gen {
        BraidGenerator::Sigma(i) => {
            range("s", i, n.saturating_sub(1))?;
            HeisenbergElement::u(params)
        }
        BraidGenerator::Alpha(r) => {
            range("a", r, params.g)?;
            HeisenbergElement::generator(params, r - 1)
        }
        BraidGenerator::Beta(s) => {
            range("b", s, params.g)?;
            HeisenbergElement::generator(params, params.g + s - 1)
        }
        BraidGenerator::Gamma(t) => {
            range("c", t, params.m - 1)?;
            HeisenbergElement::generator(params, 2 * params.g + t - 1)
        }
    })
}

/// φ of a braid word on `n` strands: the left-to-right product of the images.
pub fn phi_eval(w: &BraidWord, params: SurfaceParams, n: usize) -> Result<HeisenbergElement> {
    let mut acc = HeisenbergElement::identity(params);
    for l in &w.0 {
        let h = phi_generator(l.gen, params, n)?;
        let h = if l.exp < 0 { h.inv() } else { h };
        acc = acc.mul_unchecked(&h);
    }
    Ok(acc)
}

/// Outcome of checking one relation family of the surface braid presentation.
#[derive(Clone, Debug, Serialize)]
pub struct RelationFamily {
    pub name: &'static str,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl RelationFamily {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub params: SurfaceParams,
    pub n: usize,
    pub families: Vec<RelationFamily>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.families.iter().all(RelationFamily::passed)
    }
}

fn word(letters: &[(BraidGenerator, i8)]) -> BraidWord {
    BraidWord(letters.iter().map(|&(g, e)| BraidLetter::new(g, e)).collect())
}

fn commutator(x: &BraidWord, y: &BraidWord) -> BraidWord {
    x.concat(y).concat(&x.inverse()).concat(&y.inverse())
}

/// Evaluate every instance of BR1, BR2, CR1, CR2, CR3 and SCR under φ.
pub fn check_relations(params: SurfaceParams, n: usize) -> Result<RelationReport> {
    if n < 2 {
        return Err(Error::InvalidParams("check_relations needs n >= 2".into()));
    }
    use BraidGenerator::*;
    let sig = |i: usize| Sigma(i);
    let mut surface: Vec<BraidGenerator> = Vec::new();
    surface.extend((1..=params.g).map(Alpha));
    surface.extend((1..=params.g).map(Beta));
    surface.extend((1..params.m).map(Gamma));

    let mut families = Vec::new();
    let mut check = |name: &'static str, pairs: Vec<(BraidWord, BraidWord)>| -> Result<()> {
        let mut fam = RelationFamily { name, instances: pairs.len(), failures: Vec::new() };
        for (l, r) in pairs {
            let (pl, pr) = (phi_eval(&l, params, n)?, phi_eval(&r, params, n)?);
            if pl != pr {
                fam.failures.push(format!("{l} = {r}: {pl} vs {pr}"));
            }
        }
        families.push(fam);
        Ok(())
    };
    let empty = BraidWord::default();

    let mut br1 = Vec::new();
    let mut br2 = Vec::new();
    for i in 1..n {
        for j in 1..n {
            let (si, sj) = (word(&[(sig(i), 1)]), word(&[(sig(j), 1)]));
            if i.abs_diff(j) >= 2 {
                br1.push((commutator(&si, &sj), empty.clone()));
            } else if i.abs_diff(j) == 1 {
                br2.push((si.concat(&sj).concat(&si), sj.concat(&si).concat(&sj)));
            }
        }
    }
    check("BR1", br1)?;
    check("BR2", br2)?;

    let mut cr1 = Vec::new();
    let mut cr2 = Vec::new();
    let mut scr = Vec::new();
    for &z in &surface {
        let zw = word(&[(z, 1)]);
        for i in 2..n {
            cr1.push((commutator(&zw, &word(&[(sig(i), 1)])), empty.clone()));
        }
        cr2.push((commutator(&zw, &word(&[(sig(1), 1), (z, 1), (sig(1), 1)])), empty.clone()));
    }
    let mut cr3 = Vec::new();
    for &z in &surface {
        for &e in &surface {
            if z == e {
                continue;
            }
            let handle_pair = matches!((z, e), (Alpha(r), Beta(s)) | (Beta(s), Alpha(r)) if r == s);
            if handle_pair {
                continue;
            }
            let conj = word(&[(sig(1), -1), (e, 1), (sig(1), 1)]);
            cr3.push((commutator(&word(&[(z, 1)]), &conj), empty.clone()));
        }
    }
    for r in 1..=params.g {
        let (a, b, s) = (Alpha(r), Beta(r), sig(1));
        scr.push((word(&[(s, 1), (b, 1), (s, 1), (a, 1), (s, 1)]), word(&[(a, 1), (s, 1), (b, 1)])));
    }
    check("CR1", cr1)?;
    check("CR2", cr2)?;
    check("CR3", cr3)?;
    check("SCR", scr)?;
    Ok(RelationReport { params, n, families })
}

/// Square integer matrix of size `2g+m+1` acting on columns `(k, x, t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearizedRepMatrix {
    pub rows: Vec<Vec<BigInt>>,
}

impl LinearizedRepMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut rows = vec![vec![BigInt::zero(); dim]; dim];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = BigInt::one();
        }
        LinearizedRepMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim();
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        for (out, row) in rows.iter_mut().zip(&self.rows) {
            for (a, brow) in row.iter().zip(&other.rows) {
                if a.is_zero() {
                    continue;
                }
                for (o, b) in out.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        LinearizedRepMatrix { rows }
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

/// The linearisation of left translation `l_h` on `L = H ⊕ Z`:
/// `(k, x, t) ↦ (k + k₀t + x₀·x, x + x₀t, t)`.
pub fn linearized_rep(h: &HeisenbergElement) -> LinearizedRepMatrix {
    let p = h.params();
    let r = p.rank();
    let dim = r + 2;
    let mut m = LinearizedRepMatrix::identity(dim);
    m.rows[0][dim - 1] = h.k.clone();
    for j in 0..r {
        // coefficient of x_j in x₀·x
        let mut c = BigInt::zero();
        if j >= p.g && j < 2 * p.g {
            c += &h.x[j - p.g];
        }
        if j < p.g {
            c -= &h.x[j + p.g];
        }
        m.rows[0][1 + j] = c;
        m.rows[1 + j][dim - 1] = h.x[j].clone();
    }
    m
}

/// Small integer view, used by renderers and FFI.
pub fn to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p11() -> SurfaceParams {
        SurfaceParams::new(1, 1).unwrap()
    }

    fn h(k: i64, x: &[i64]) -> HeisenbergElement {
        let p = SurfaceParams::new(1, x.len() - 1).unwrap();
        HeisenbergElement::from_ints(p, k, x).unwrap()
    }

    #[test]
    fn product_examples() {
        let p = p11();
        let u = HeisenbergElement::u(p);
        assert_eq!(u.mul(&u).unwrap(), h(2, &[0, 0]));
        let a = HeisenbergElement::generator(p, 0);
        let b = HeisenbergElement::generator(p, 1);
        assert_eq!(a.mul(&b).unwrap(), h(1, &[1, 1]));
        assert_eq!(b.mul(&a).unwrap(), h(-1, &[1, 1]));
        assert_eq!(b.mul(&a).unwrap().to_string(), "u^-2·a1·b1");
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(h(2, &[1, 0]).inv(), h(-2, &[-1, 0]));
        let x = h(-1, &[1, 1]);
        assert!(x.mul(&x.inv()).unwrap().is_identity());
        assert!(h(0, &[0, 0]).inv().is_identity());
    }

    #[test]
    fn intersection_examples() {
        let p = SurfaceParams::new(1, 2).unwrap();
        let e = |i: usize| {
            let mut v = vec![BigInt::zero(); 3];
            v[i] = BigInt::one();
            v
        };
        assert_eq!(intersection_form(p, &e(0), &e(1)).unwrap(), BigInt::one());
        assert_eq!(intersection_form(p, &e(2), &e(1)).unwrap(), BigInt::zero());
        assert_eq!(intersection_form(p, &e(0), &e(0)).unwrap(), BigInt::zero());
        assert!(intersection_form(p, &e(0), &[BigInt::one()]).is_err());
    }

    #[test]
    fn rendering_uses_normal_form() {
        assert_eq!(h(2, &[2, 0]).to_string(), "u^2·a1^2");
        assert_eq!(h(1, &[1, -1]).to_string(), "u^2·a1·b1^-1");
        assert_eq!(h(3, &[2, -2]).to_string(), "u^7·a1^2·b1^-2");
        assert_eq!(h(0, &[0, 0]).to_string(), "1");
    }

    #[test]
    fn ring_parse_round_trip() {
        let p = p11();
        for s in ["-u^4·a1·b1^-1 + u^3·a1·b1^-1", "-u + 1", "u^2·a1^2", "0", "3·u^-1 - 2·b1"] {
            let r = if s == "0" { GroupRingElement::zero(p) } else { GroupRingElement::parse(p, s).unwrap() };
            let again = if s == "0" { r.clone() } else { GroupRingElement::parse(p, &r.to_string()).unwrap() };
            assert_eq!(r, again, "{s}");
        }
        assert_eq!(GroupRingElement::parse(p, "-u+1").unwrap().to_string(), "-u + 1");
        assert!(GroupRingElement::parse(p, "b1 a1").is_err());
        assert!(GroupRingElement::parse(p, "x2").is_err());
    }

    #[test]
    fn ring_products() {
        let p = p11();
        let a = GroupRingElement::parse(p, "a1").unwrap();
        let b = GroupRingElement::parse(p, "b1").unwrap();
        let one_minus_u = GroupRingElement::parse(p, "1 - u").unwrap();
        assert_eq!(one_minus_u.mul(&a).unwrap(), GroupRingElement::parse(p, "a1 - u·a1").unwrap());
        assert_eq!(a.mul(&b).unwrap().to_string(), "a1·b1");
        let u2 = GroupRingElement::parse(p, "u^-2").unwrap();
        assert_eq!(b.mul(&a).unwrap(), u2.mul(&a.mul(&b).unwrap()).unwrap());
    }

    #[test]
    fn phi_examples() {
        let p = p11();
        assert!(phi_eval(&BraidWord::default(), p, 2).unwrap().is_identity());
        let w = BraidWord::parse("a1 s1 b1").unwrap();
        assert_eq!(phi_eval(&w, p, 2).unwrap(), h(2, &[1, 1]));
        let w = BraidWord::parse("s1 b1 s1 a1 s1").unwrap();
        assert_eq!(phi_eval(&w, p, 2).unwrap(), h(2, &[1, 1]));
        assert!(phi_eval(&BraidWord::parse("s2").unwrap(), p, 2).is_err());
        assert!(phi_eval(&BraidWord::parse("c1").unwrap(), p, 2).is_err());
    }

    #[test]
    fn relations_hold() {
        for g in 0..3 {
            for m in 1..4 {
                for n in 2..4 {
                    let r = check_relations(SurfaceParams::new(g, m).unwrap(), n).unwrap();
                    assert!(r.passed(), "{:?}", r);
                }
            }
        }
    }

    #[test]
    fn linearized_u_is_elementary() {
        let p = p11();
        let m = linearized_rep(&HeisenbergElement::u(p));
        let mut e = LinearizedRepMatrix::identity(4);
        e.rows[0][3] = BigInt::one();
        assert_eq!(m, e);
        assert_eq!(linearized_rep(&HeisenbergElement::identity(p)), LinearizedRepMatrix::identity(4));
    }

    #[test]
    fn linearized_is_left_translation() {
        let p = p11();
        let g = h(3, &[2, -1]);
        let x = h(-5, &[1, 4]);
        let v: Vec<BigInt> = std::iter::once(x.k.clone()).chain(x.x.iter().cloned()).chain([BigInt::one()]).collect();
        let gx = g.mul(&x).unwrap();
        let w: Vec<BigInt> = std::iter::once(gx.k.clone()).chain(gx.x.iter().cloned()).chain([BigInt::one()]).collect();
        assert_eq!(linearized_rep(&g).apply(&v), w);
        let _ = p;
    }
}
