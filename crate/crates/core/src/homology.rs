//! Homology of Borel–Moore complexes after specialising the Heisenberg group
//! ring to integers, a one-dimensional representation, or the linearised
//! representation `L`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::config_complex::{BMComplex, BoundaryMatrix};
use crate::error::{Error, Result};
use crate::heisenberg::{linearized_rep, GroupRingElement, HeisenbergElement, SurfaceParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Specialization {
    /// `u ↦ 1`, every generator `↦ 1`, over the integers.
    TrivialInt,
    /// One-dimensional: `u ↦ ±1` and generator `i ↦ values[i]` (nonzero
    /// rationals), over the rationals.
    Scalar { u: i8, values: Vec<BigRational> },
    /// Each group element acts by its integer matrix on `L = H ⊕ Z`.
    Linearized,
}

impl Specialization {
    /// Parse `trivial`, `linearized`, or `scalar:u=-1,a1=2,b1=1/3` (omitted
    /// generators map to 1).
    pub fn parse(params: SurfaceParams, s: &str) -> Result<Self> {
        let bad = |m: String| Error::BadSpecialization(m);
        match s {
            "trivial" => return Ok(Specialization::TrivialInt),
            "linearized" => return Ok(Specialization::Linearized),
            _ => {}
        }
        let body = s.strip_prefix("scalar").ok_or_else(|| bad(format!("unknown coefficients `{s}`")))?;
        let body = body.strip_prefix(':').unwrap_or(body);
        let mut u: Option<i8> = None;
        let mut values = vec![BigRational::one(); params.rank()];
        for part in body.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| bad(format!("expected name=value, got `{part}`")))?;
            let (k, v) = (k.trim(), v.trim());
            if k == "u" {
                u = Some(match v {
                    "1" | "+1" => 1,
                    "-1" | "−1" => -1,
                    _ => return Err(bad(format!("u must be +1 or -1 (u² = 1 is forced), got {v}"))),
                });
                continue;
            }
            let i = params.basis_index(k).ok_or_else(|| bad(format!("unknown generator {k}")))?;
            let val: BigRational = v.replace('−', "-").parse().map_err(|_| bad(format!("bad value {v}")))?;
            if val.is_zero() {
                return Err(bad(format!("value of {k} must be invertible")));
            }
            values[i] = val;
        }
        Ok(Specialization::Scalar { u: u.unwrap_or(1), values })
    }

    pub fn validate(&self, params: SurfaceParams) -> Result<()> {
        if let Specialization::Scalar { u, values } = self {
            if *u != 1 && *u != -1 {
                return Err(Error::BadSpecialization("u must map to +1 or -1".into()));
            }
            if values.len() != params.rank() {
                return Err(Error::DimensionMismatch { expected: params.rank(), found: values.len() });
            }
            if values.iter().any(Zero::is_zero) {
                return Err(Error::BadSpecialization("generator values must be invertible".into()));
            }
        }
        Ok(())
    }

    /// Dimension of the coefficient module `W`.
    pub fn dim(&self, params: SurfaceParams) -> usize {
        match self {
            Specialization::Linearized => params.rank() + 2,
            _ => 1,
        }
    }

    pub fn over_field(&self) -> bool {
        matches!(self, Specialization::Scalar { .. })
    }

    /// Value of a group element under a scalar specialization: `u` is sent
    /// to its sign and the ordered normal form is evaluated.
    pub fn scalar_value(u: i8, values: &[BigRational], h: &HeisenbergElement) -> BigRational {
        let mut acc = BigRational::one();
        if u < 0 && h.u_exponent().is_odd() {
            acc = -acc;
        }
        for (v, e) in values.iter().zip(&h.x) {
            let e = e.to_string().parse::<i32>().expect("exponent fits in i32");
            let p = num_traits::pow(v.clone(), e.unsigned_abs() as usize);
            acc *= if e < 0 { p.recip() } else { p };
        }
        acc
    }
}

impl fmt::Display for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Specialization::TrivialInt => f.write_str("trivial"),
            Specialization::Linearized => f.write_str("linearized"),
            Specialization::Scalar { u, values } => {
                let vs: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "scalar:u={u},[{}]", vs.join(","))
            }
        }
    }
}

/// A specialised boundary map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NumericMatrix {
    Integer(Vec<Vec<BigInt>>),
    Rational(Vec<Vec<BigRational>>),
}

impl NumericMatrix {
    pub fn rows(&self) -> usize {
        match self {
            NumericMatrix::Integer(m) => m.len(),
            NumericMatrix::Rational(m) => m.len(),
        }
    }
}

/// Map every group-ring entry of a boundary matrix through `s`. Linearized
/// entries become `(2g+m+1)`-square integer blocks.
pub fn specialize(d: &BoundaryMatrix, params: SurfaceParams, s: &Specialization) -> Result<NumericMatrix> {
    s.validate(params)?;
    let w = s.dim(params);
    match s {
        Specialization::TrivialInt => {
            let mut m = vec![vec![BigInt::zero(); d.cols]; d.rows];
            for ((r, c), v) in &d.entries {
                m[*r][*c] = v.augmentation();
            }
            Ok(NumericMatrix::Integer(m))
        }
        Specialization::Scalar { u, values } => {
            let mut m = vec![vec![BigRational::zero(); d.cols]; d.rows];
            for ((r, c), v) in &d.entries {
                m[*r][*c] = scalar_entry(*u, values, v);
            }
            Ok(NumericMatrix::Rational(m))
        }
        Specialization::Linearized => {
            let mut m = vec![vec![BigInt::zero(); d.cols * w]; d.rows * w];
            for ((r, c), v) in &d.entries {
                for (h, coef) in v.terms() {
                    let block = linearized_rep(h);
                    for i in 0..w {
                        for j in 0..w {
                            m[r * w + i][c * w + j] += coef * &block.rows[i][j];
                        }
                    }
                }
            }
            Ok(NumericMatrix::Integer(m))
        }
    }
}

fn scalar_entry(u: i8, values: &[BigRational], v: &GroupRingElement) -> BigRational {
    v.terms()
        .map(|(h, c)| Specialization::scalar_value(u, values, h) * BigRational::from_integer(c.clone()))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Invariant factors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmithForm {
    /// Nonzero diagonal entries, positive, each dividing the next.
    #[serde(serialize_with = "ser_bigints")]
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Smith normal form by elementary row and column operations.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> SmithForm {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: nonzero entry of least absolute value
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let qt = a[i][t].div_floor(&a[t][t]);
                let pivot_row = a[t].clone();
                for (x, p) in a[i][t..].iter_mut().zip(&pivot_row[t..]) {
                    *x -= &qt * p;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    changed = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let qt = a[t][j].div_floor(&a[t][t]);
                for row in a[t..].iter_mut() {
                    let p = row[t].clone();
                    row[j] -= &qt * p;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: fold a row with a non-multiple into the pivot row
            let p = a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|x| !(x % &p).is_zero()));
            match bad {
                Some(i) => {
                    let r = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(&r) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        factors.push(a[t][t].abs());
        t += 1;
    }
    let rank = factors.len();
    SmithForm { factors, rank }
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rational_rank(m: &[Vec<BigRational>]) -> usize {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][c].recip();
        let pivot: Vec<BigRational> = a[rank].iter().map(|x| x * &inv).collect();
        for row in a.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * y;
            }
        }
        a[rank] = pivot;
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub degree: usize,
    pub rank: usize,
    /// Invariant factors greater than one (integer specialisations only).
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub specialization: String,
    pub coefficient_dim: usize,
    pub over_field: bool,
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyReport {
    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.rank).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees.iter().map(|d| if d.degree % 2 == 0 { d.rank as i64 } else { -(d.rank as i64) }).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.rank == 0 && d.torsion.is_empty())
    }
}

/// Borel–Moore homology of a complex under a specialisation.
pub fn bm_homology(c: &BMComplex, s: &Specialization) -> Result<HomologyReport> {
    let w = s.dim(c.params);
    let n = c.n;
    // rank and torsion of ∂_k for k = 0..=n+1 (∂_0 and ∂_{n+1} are zero)
    let mut ranks = vec![0usize; n + 2];
    let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); n + 2];
    for k in 1..=n {
        match specialize(&c.boundaries[k], c.params, s)? {
            NumericMatrix::Integer(m) => {
                let snf = smith_normal_form(&m);
                ranks[k] = snf.rank;
                torsion[k] = snf.factors.into_iter().filter(|f| !f.is_one()).collect();
            }
            NumericMatrix::Rational(m) => ranks[k] = rational_rank(&m),
        }
    }
    let degrees = (0..=n)
        .map(|k| DegreeHomology {
            degree: k,
            rank: c.cells[k].len() * w - ranks[k] - ranks[k + 1],
            torsion: torsion[k + 1].clone(),
        })
        .collect();
    Ok(HomologyReport { specialization: s.to_string(), coefficient_dim: w, over_field: s.over_field(), degrees })
}

/// For a complex with all cells in top degree, its free rank over `Z[H]`.
pub fn concentration_report(c: &BMComplex) -> Result<usize> {
    for (k, cells) in c.cells.iter().enumerate() {
        if k != c.n && !cells.is_empty() {
            return Err(Error::NotConcentrated { expected: c.n, degree: k, cells: cells.len() });
        }
    }
    Ok(c.cells[c.n].len())
}
