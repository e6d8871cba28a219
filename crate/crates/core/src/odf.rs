//! Descriptors for positive ordinal-decreasing building blocks.
//!
//! Every descriptor is a finite or ω-indexed sequence of half-open affine pieces
//! `x ↦ a - b·x` with `b ≥ 0`. Nonincreasing pieces admit no bad pair inside a
//! piece, so the only bad chains jump between pieces, and the piece structure
//! keeps those finite.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::badseq::{self, Grid};
use crate::numerics::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OdfError {
    #[error("x = {x} is outside the domain of {desc}")]
    OutOfDomain { x: Rational, desc: String },
    #[error("invalid descriptor: {0}")]
    Invalid(String),
}

/// The interval families with ω-many pieces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StaircaseFamily {
    /// Domain `[0, 1)`, pieces `[1 - 2^-n, 1 - 2^-(n+1))` accumulating at 1.
    /// Profile on piece `n`: `(right_n - x) + scale·2^-n`.
    Example2,
    /// Domain `(0, 1]`, pieces `(2^-(n+1), 2^-n]` accumulating at 0.
    /// Profile on piece `n`: `(2^-n - x) + scale·(n+1)`.
    Example3,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Piece {
    pub left: Rational,
    /// `None` is `+∞`.
    #[serde(default, serialize_with = "ser_right", deserialize_with = "de_right")]
    pub right: Option<Rational>,
    pub a: Rational,
    pub b: Rational,
}

fn ser_right<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => r.serialize(s),
        None => s.serialize_str("inf"),
    }
}

fn de_right<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
    let s = String::deserialize(d)?;
    match s.as_str() {
        "inf" | "+inf" => Ok(None),
        _ => s.parse().map(Some).map_err(serde::de::Error::custom),
    }
}

/// An ordinal-decreasing function with exact rational values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawDesc", into = "RawDesc")]
pub enum FuncDesc {
    Const { value: Rational },
    /// `x ↦ a - b·x`.
    Affine { a: Rational, b: Rational },
    Piecewise { pieces: Vec<Piece> },
    Staircase { family: StaircaseFamily, scale: Rational },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawDesc {
    Const { value: Rational },
    Affine { a: Rational, b: Rational },
    Piecewise { pieces: Vec<Piece> },
    Staircase { family: StaircaseFamily, scale: Rational },
}

impl TryFrom<RawDesc> for FuncDesc {
    type Error = OdfError;

    fn try_from(raw: RawDesc) -> Result<Self, OdfError> {
        let d = match raw {
            RawDesc::Const { value } => FuncDesc::Const { value },
            RawDesc::Affine { a, b } => FuncDesc::Affine { a, b },
            RawDesc::Piecewise { pieces } => FuncDesc::Piecewise { pieces },
            RawDesc::Staircase { family, scale } => FuncDesc::Staircase { family, scale },
        };
        d.validate()?;
        Ok(d)
    }
}

impl From<FuncDesc> for RawDesc {
    fn from(d: FuncDesc) -> Self {
        match d {
            FuncDesc::Const { value } => RawDesc::Const { value },
            FuncDesc::Affine { a, b } => RawDesc::Affine { a, b },
            FuncDesc::Piecewise { pieces } => RawDesc::Piecewise { pieces },
            FuncDesc::Staircase { family, scale } => RawDesc::Staircase { family, scale },
        }
    }
}

/// One affine piece as seen by scanners: `a - b·x` on `[left, right)`, or on
/// `(left, right]` when `right_closed` is set. `None` bounds are infinite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePiece {
    pub left: Option<Rational>,
    pub right: Option<Rational>,
    pub right_closed: bool,
    pub a: Rational,
    pub b: Rational,
}

impl AffinePiece {
    pub fn eval(&self, x: &Rational) -> Rational {
        &self.a - &self.b * x
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Positivity {
    Ok,
    Counterexample(Rational),
}

impl FuncDesc {
    pub fn constant(value: Rational) -> Self {
        FuncDesc::Const { value }
    }

    /// `x ↦ a - b·x`; rejects `b < 0`.
    pub fn affine(a: Rational, b: Rational) -> Result<Self, OdfError> {
        let d = FuncDesc::Affine { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn piecewise(pieces: Vec<Piece>) -> Result<Self, OdfError> {
        let d = FuncDesc::Piecewise { pieces };
        d.validate()?;
        Ok(d)
    }

    pub fn staircase(family: StaircaseFamily, scale: Rational) -> Result<Self, OdfError> {
        let d = FuncDesc::Staircase { family, scale };
        d.validate()?;
        Ok(d)
    }

    /// Checks the structural invariants: nonincreasing pieces that tile an interval.
    pub fn validate(&self) -> Result<(), OdfError> {
        match self {
            FuncDesc::Const { .. } => Ok(()),
            FuncDesc::Affine { b, .. } => check_slope(b),
            FuncDesc::Piecewise { pieces } => {
                if pieces.is_empty() {
                    return Err(OdfError::Invalid("piecewise descriptor without pieces".into()));
                }
                for (i, p) in pieces.iter().enumerate() {
                    check_slope(&p.b)?;
                    match &p.right {
                        Some(r) if *r <= p.left => {
                            return Err(OdfError::Invalid(format!("empty piece [{}, {r})", p.left)))
                        }
                        None if i + 1 != pieces.len() => {
                            return Err(OdfError::Invalid("only the last piece may be unbounded".into()))
                        }
                        _ => {}
                    }
                    if let Some(next) = pieces.get(i + 1) {
                        if p.right.as_ref() != Some(&next.left) {
                            return Err(OdfError::Invalid(format!(
                                "pieces must be contiguous: gap or overlap at {}",
                                next.left
                            )));
                        }
                    }
                }
                Ok(())
            }
            FuncDesc::Staircase { scale, .. } => {
                if scale.is_positive() {
                    Ok(())
                } else {
                    Err(OdfError::Invalid("staircase scale must be positive".into()))
                }
            }
        }
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, FuncDesc::Const { .. } | FuncDesc::Affine { .. })
    }

    /// `(a, b)` with `f(x) = a - b·x` for descriptors with a single global piece.
    pub fn affine_coeffs(&self) -> Option<(Rational, Rational)> {
        match self {
            FuncDesc::Const { value } => Some((value.clone(), Rational::zero())),
            FuncDesc::Affine { a, b } => Some((a.clone(), b.clone())),
            _ => None,
        }
    }

    pub fn in_domain(&self, x: &Rational) -> bool {
        match self {
            FuncDesc::Const { .. } | FuncDesc::Affine { .. } => true,
            FuncDesc::Piecewise { pieces } => {
                let first = &pieces[0];
                let last = &pieces[pieces.len() - 1];
                *x >= first.left && last.right.as_ref().is_none_or(|r| x < r)
            }
            FuncDesc::Staircase { family: StaircaseFamily::Example2, .. } => {
                !x.is_negative() && *x < Rational::one()
            }
            FuncDesc::Staircase { family: StaircaseFamily::Example3, .. } => {
                x.is_positive() && *x <= Rational::one()
            }
        }
    }

    /// The piece containing `x`.
    pub fn piece_at(&self, x: &Rational) -> Result<AffinePiece, OdfError> {
        if !self.in_domain(x) {
            return Err(OdfError::OutOfDomain { x: x.clone(), desc: self.to_string() });
        }
        Ok(match self {
            FuncDesc::Const { value } => AffinePiece {
                left: None,
                right: None,
                right_closed: false,
                a: value.clone(),
                b: Rational::zero(),
            },
            FuncDesc::Affine { a, b } => AffinePiece {
                left: None,
                right: None,
                right_closed: false,
                a: a.clone(),
                b: b.clone(),
            },
            FuncDesc::Piecewise { pieces } => {
                let idx = pieces.partition_point(|p| p.left <= *x) - 1;
                piecewise_piece(&pieces[idx])
            }
            FuncDesc::Staircase { family, scale } => {
                let n = match family {
                    StaircaseFamily::Example2 => (Rational::one() - x).halving_level(),
                    StaircaseFamily::Example3 => x.halving_level(),
                }
                .expect("in domain");
                staircase_piece(*family, scale, n)
            }
        })
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, OdfError> {
        Ok(self.piece_at(x)?.eval(x))
    }

    /// Pieces in ascending order, starting with the one containing `x`.
    /// Infinite for the `Example2` staircase.
    pub fn pieces_from<'a>(
        &'a self,
        x: &Rational,
    ) -> Result<Box<dyn Iterator<Item = AffinePiece> + 'a>, OdfError> {
        let first = self.piece_at(x)?;
        Ok(match self {
            FuncDesc::Const { .. } | FuncDesc::Affine { .. } => Box::new(std::iter::once(first)),
            FuncDesc::Piecewise { pieces } => {
                let idx = pieces.partition_point(|p| p.left <= *x) - 1;
                Box::new(pieces[idx..].iter().map(piecewise_piece))
            }
            FuncDesc::Staircase { family: StaircaseFamily::Example2, scale } => {
                let n0 = (Rational::one() - x).halving_level().expect("in domain");
                Box::new((n0..).map(move |n| staircase_piece(StaircaseFamily::Example2, scale, n)))
            }
            FuncDesc::Staircase { family: StaircaseFamily::Example3, scale } => {
                let n0 = x.halving_level().expect("in domain");
                Box::new((0..=n0).rev().map(move |n| staircase_piece(StaircaseFamily::Example3, scale, n)))
            }
        })
    }

    /// Checks `d(x) > 0` on `[lo, hi)` piece by piece.
    pub fn check_positive(&self, lo: &Rational, hi: &Rational) -> Result<Positivity, OdfError> {
        self.check_positive_on(Some(lo), Some(hi))
    }

    /// As [`FuncDesc::check_positive`], with `None` bounds meaning `∓∞`.
    pub fn check_positive_on(
        &self,
        lo: Option<&Rational>,
        hi: Option<&Rational>,
    ) -> Result<Positivity, OdfError> {
        if let (Some(l), Some(h)) = (lo, hi) {
            if l >= h {
                return Ok(Positivity::Ok);
            }
        }
        // Every staircase piece stays above scale·2^-n > 0 or scale·(n+1) > 0.
        if matches!(self, FuncDesc::Staircase { .. }) {
            return Ok(Positivity::Ok);
        }
        let pieces: Vec<AffinePiece> = match (self, lo) {
            (FuncDesc::Piecewise { pieces }, None) => pieces.iter().map(piecewise_piece).collect(),
            (FuncDesc::Piecewise { pieces }, Some(l)) if *l < pieces[0].left => {
                return Err(OdfError::OutOfDomain { x: l.clone(), desc: self.to_string() })
            }
            (_, Some(l)) => self.pieces_from(l)?.collect(),
            (_, None) => self.pieces_from(&Rational::zero())?.collect(),
        };
        if let (FuncDesc::Piecewise { .. }, Some(h)) = (self, hi) {
            let last = pieces.last().expect("non-empty");
            if last.right.as_ref().is_some_and(|r| h > r) {
                return Err(OdfError::OutOfDomain { x: h.clone(), desc: self.to_string() });
            }
        }
        for p in &pieces {
            // segment [start, end) of this piece inside [lo, hi)
            let start = max_opt(p.left.as_ref(), lo);
            let end = min_opt(p.right.as_ref(), hi);
            if let (Some(s), Some(e)) = (&start, &end) {
                if s >= e {
                    continue;
                }
            }
            if p.b.is_zero() {
                if !p.a.is_positive() {
                    return Ok(Positivity::Counterexample(witness_point(start.as_ref(), end.as_ref())));
                }
                continue;
            }
            // a - b·x <= 0 iff x >= a/b
            let root = &p.a / &p.b;
            let first_bad = match &start {
                Some(s) if *s > root => s.clone(),
                _ => root,
            };
            if end.as_ref().is_none_or(|e| first_bad < *e) {
                return Ok(Positivity::Counterexample(first_bad));
            }
        }
        Ok(Positivity::Ok)
    }

    /// Longest strictly decreasing chain of values on a descending grid.
    pub fn grid_longest_bad(&self, xs: &[Rational]) -> Result<usize, OdfError> {
        let grid = self.grid(xs)?;
        Ok(badseq::longest_bad(&grid).length)
    }

    /// Samples the descriptor on descending points.
    pub fn grid(&self, xs: &[Rational]) -> Result<Grid, OdfError> {
        let points = xs
            .iter()
            .map(|x| Ok((x.clone(), self.eval(x)?)))
            .collect::<Result<Vec<_>, OdfError>>()?;
        Grid::new(points).map_err(|e| OdfError::Invalid(e.to_string()))
    }
}

fn check_slope(b: &Rational) -> Result<(), OdfError> {
    if b.is_negative() {
        Err(OdfError::Invalid(format!(
            "increasing piece (slope {}) admits infinite bad sequences",
            -b
        )))
    } else {
        Ok(())
    }
}

fn piecewise_piece(p: &Piece) -> AffinePiece {
    AffinePiece {
        left: Some(p.left.clone()),
        right: p.right.clone(),
        right_closed: false,
        a: p.a.clone(),
        b: p.b.clone(),
    }
}

fn staircase_piece(family: StaircaseFamily, scale: &Rational, n: u64) -> AffinePiece {
    match family {
        StaircaseFamily::Example2 => {
            let left = Rational::one() - Rational::half_pow(n);
            let right = Rational::one() - Rational::half_pow(n + 1);
            let a = &right + scale * &Rational::half_pow(n);
            AffinePiece { left: Some(left), right: Some(right), right_closed: false, a, b: Rational::one() }
        }
        StaircaseFamily::Example3 => {
            let left = Rational::half_pow(n + 1);
            let right = Rational::half_pow(n);
            let a = &right + scale * &Rational::from_integer(n + 1);
            AffinePiece { left: Some(left), right: Some(right), right_closed: true, a, b: Rational::one() }
        }
    }
}

fn max_opt(a: Option<&Rational>, b: Option<&Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b).clone()),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

fn min_opt(a: Option<&Rational>, b: Option<&Rational>) -> Option<Rational> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b).clone()),
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

fn witness_point(start: Option<&Rational>, end: Option<&Rational>) -> Rational {
    match (start, end) {
        (Some(s), _) => s.clone(),
        (None, Some(e)) => e - Rational::one(),
        (None, None) => Rational::zero(),
    }
}

impl fmt::Display for FuncDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncDesc::Const { value } => write!(f, "const:{value}"),
            FuncDesc::Affine { a, b } => write!(f, "affine:{a},{b}"),
            FuncDesc::Piecewise { pieces } => {
                write!(f, "piecewise:")?;
                for (i, p) in pieces.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    match &p.right {
                        Some(r) => write!(f, "{},{},{},{}", p.left, r, p.a, p.b)?,
                        None => write!(f, "{},inf,{},{}", p.left, p.a, p.b)?,
                    }
                }
                Ok(())
            }
            FuncDesc::Staircase { family, scale } => {
                let name = match family {
                    StaircaseFamily::Example2 => "example2",
                    StaircaseFamily::Example3 => "example3",
                };
                write!(f, "staircase:{name},{scale}")
            }
        }
    }
}

/// Short text forms: `const:V`, `affine:A,B`, `staircase:FAMILY[,SCALE]` and
/// `piecewise:L,R,A,B;L,R,A,B;...` (with `R = inf` allowed on the last piece).
impl FromStr for FuncDesc {
    type Err = OdfError;

    fn from_str(s: &str) -> Result<Self, OdfError> {
        let bad = |msg: &str| OdfError::Invalid(format!("{msg}: `{s}`"));
        let num = |t: &str| t.trim().parse::<Rational>().map_err(|e| OdfError::Invalid(e.to_string()));
        let (kind, body) = s.split_once(':').ok_or_else(|| bad("expected KIND:PARAMS"))?;
        match kind.trim() {
            "const" => Ok(FuncDesc::constant(num(body)?)),
            "affine" => {
                let (a, b) = body.split_once(',').ok_or_else(|| bad("affine needs A,B"))?;
                FuncDesc::affine(num(a)?, num(b)?)
            }
            "staircase" => {
                let (fam, scale) = match body.split_once(',') {
                    Some((f, sc)) => (f, num(sc)?),
                    None => (body, Rational::ratio(1, 4)),
                };
                let family = match fam.trim() {
                    "example2" => StaircaseFamily::Example2,
                    "example3" => StaircaseFamily::Example3,
                    _ => return Err(bad("unknown staircase family")),
                };
                FuncDesc::staircase(family, scale)
            }
            "piecewise" => {
                let pieces = body
                    .split(';')
                    .map(|chunk| {
                        let parts: Vec<&str> = chunk.split(',').collect();
                        let [l, r, a, b] = parts.as_slice() else {
                            return Err(bad("piecewise pieces need L,R,A,B"));
                        };
                        let right = match r.trim() {
                            "inf" | "+inf" => None,
                            other => Some(num(other)?),
                        };
                        Ok(Piece { left: num(l)?, right, a: num(a)?, b: num(b)? })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                FuncDesc::piecewise(pieces)
            }
            _ => Err(bad("unknown descriptor kind")),
        }
    }
}
