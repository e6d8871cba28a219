//! Interval partitions by the slope-1 climb.
//!
//! For a positive ordinal-decreasing `d` and a start `p_0`, the next endpoint is
//! `p_{α+1} = inf{x ≥ p_α : x - d(x) ≥ p_α}`: from the point `(p_α, 0)` move up and
//! right along a line of slope 1 until the graph of `d` is reached. The intervals
//! `[p_α, p_{α+1})` partition the domain.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::engine::{AlgoConfig, EvalError, SymbolicBuilder, DEFAULT_MAX_PIECES};
use crate::numerics::Rational;
use crate::odf::{AffinePiece, FuncDesc, OdfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("function is not positive at {0}")]
    NotPositive(Rational),
    #[error("empty range: start {start} is not below cap {cap}")]
    EmptyRange { start: Rational, cap: Rational },
    #[error("level {level} is outside 1..={k}")]
    Level { level: usize, k: usize },
    #[error("prefix must hold {expected} endpoints, got {got}")]
    Prefix { expected: usize, got: usize },
    #[error(transparent)]
    Odf(#[from] OdfError),
    #[error(transparent)]
    Engine(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndpointRun {
    pub source: String,
    pub start: Rational,
    /// `None` is `+∞`.
    pub cap: Option<Rational>,
    pub endpoints: Vec<Rational>,
    /// The cap was reached; it is then the last endpoint.
    pub exhausted: bool,
}

impl fmt::Display for EndpointRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.endpoints.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", cells.join(", "))
    }
}

/// First point of `[p, cap)` where `x - d(x) ≥ p`, scanning `pieces` in order, or
/// `cap` (the end of the scanned pieces when `cap` is `None`) if there is none.
fn climb<I>(pieces: I, p: &Rational, cap: Option<&Rational>) -> Result<Rational, PartitionError>
where
    I: IntoIterator<Item = Result<AffinePiece, PartitionError>>,
{
    let one = Rational::one();
    let mut reached = p.clone();
    for piece in pieces {
        let piece = piece?;
        let start = match &piece.left {
            Some(l) if l > p => l.clone(),
            _ => p.clone(),
        };
        if cap.is_some_and(|c| start >= *c) {
            break;
        }
        // x - (a - b·x) = p at x* = (p + a) / (1 + b)
        let cross = (p + &piece.a) / (&one + &piece.b);
        let hit = if cross > start { cross } else { start };
        if piece.right.as_ref().is_none_or(|r| hit < *r || (piece.right_closed && hit == *r)) {
            let hit = match cap {
                Some(c) if hit > *c => c.clone(),
                _ => hit,
            };
            if hit <= *p {
                return Err(PartitionError::NotPositive(p.clone()));
            }
            return Ok(hit);
        }
        reached = piece.right.clone().expect("bounded piece");
    }
    Ok(match cap {
        Some(c) => c.clone(),
        None => reached,
    })
}

/// `min(cap, inf{x ≥ p : x - d(x) ≥ p})`.
pub fn next_endpoint(d: &FuncDesc, p: &Rational, cap: Option<&Rational>) -> Result<Rational, PartitionError> {
    if let Some(c) = cap {
        if p >= c {
            return Err(PartitionError::EmptyRange { start: p.clone(), cap: c.clone() });
        }
    }
    climb(d.pieces_from(p)?.map(Ok), p, cap)
}

fn run_with<F>(source: String, start: &Rational, cap: Option<&Rational>, max_steps: usize, mut next: F) -> Result<EndpointRun, PartitionError>
where
    F: FnMut(&Rational) -> Result<Rational, PartitionError>,
{
    if let Some(c) = cap {
        if start >= c {
            return Err(PartitionError::EmptyRange { start: start.clone(), cap: c.clone() });
        }
    }
    let mut endpoints = vec![start.clone()];
    let mut exhausted = false;
    while endpoints.len() < max_steps {
        let p = endpoints.last().expect("non-empty");
        let q = next(p)?;
        let at_cap = cap.is_some_and(|c| q >= *c);
        endpoints.push(q);
        if at_cap {
            exhausted = true;
            break;
        }
    }
    Ok(EndpointRun { source, start: start.clone(), cap: cap.cloned(), endpoints, exhausted })
}

/// Endpoints `p_0 = start, p_1, ...` until `max_steps` endpoints exist or `cap` is reached.
pub fn iterate_endpoints(
    d: &FuncDesc,
    start: &Rational,
    cap: Option<&Rational>,
    max_steps: usize,
) -> Result<EndpointRun, PartitionError> {
    run_with(d.to_string(), start, cap, max_steps, |p| next_endpoint(d, p, cap))
    .map(|mut run| {
        // a run that leaves the declared domain stops at its end
        if run.cap.is_none() {
            if let Some(last) = run.endpoints.last() {
                if run.endpoints.len() > 1 && !d.in_domain(last) {
                    run.cap = Some(last.clone());
                    run.exhausted = true;
                }
            }
        }
        run
    })
}

/// Lazily built pieces of `M_level` starting at `p`.
fn symbolic_pieces_from<'a>(
    builder: &'a mut SymbolicBuilder,
    level: usize,
    p: &Rational,
    cap: Option<&'a Rational>,
) -> impl Iterator<Item = Result<AffinePiece, PartitionError>> + 'a {
    let mut from = p.clone();
    std::iter::from_fn(move || {
        if cap.is_some_and(|c| from >= *c) {
            return None;
        }
        while *builder.built() <= from {
            if let Err(e) = builder.step(cap) {
                return Some(Err(e.into()));
            }
        }
        let pieces = builder.level(level);
        let idx = pieces.partition_point(|q| q.left <= from) - 1;
        let q = &pieces[idx];
        // the last piece may still grow; expose only what is built
        let right = builder.built().clone().min(q.right.clone());
        let out = AffinePiece { left: Some(q.left.clone()), right: Some(right.clone()), right_closed: false, a: q.a.clone(), b: q.b.clone() };
        from = right;
        Some(Ok(out))
    })
}

/// Level-`i` endpoints of the nested partition of an affine configuration.
///
/// Level 1 climbs `s` from 0 with no cap; `prefix` must then be empty. Level
/// `i ≥ 2` climbs `M_{k-i+2}` from the last entry of `prefix`, which lists one
/// endpoint per coarser level, capped by the next coarser endpoint.
pub fn engine_partition(
    cfg: &AlgoConfig,
    level: usize,
    prefix: &[Rational],
    max_steps: usize,
) -> Result<EndpointRun, PartitionError> {
    if level == 0 || level > cfg.k {
        return Err(PartitionError::Level { level, k: cfg.k });
    }
    if prefix.len() != level - 1 {
        return Err(PartitionError::Prefix { expected: level - 1, got: prefix.len() });
    }
    let mut builder = SymbolicBuilder::new(cfg, DEFAULT_MAX_PIECES)?;
    if level == 1 {
        return iterate_endpoints(&cfg.s, &Rational::zero(), None, max_steps);
    }
    // caps of the coarser levels, outermost first
    let mut cap = next_endpoint(&cfg.s, &prefix[0], None)?;
    for (j, p) in prefix.iter().enumerate().skip(1) {
        let src = cfg.k - (j + 1) + 2;
        let q = p.clone();
        let next = climb(symbolic_pieces_from(&mut builder, src, &q, Some(&cap)), &q, Some(&cap))?;
        cap = next;
    }
    let src = cfg.k - level + 2;
    let start = prefix.last().expect("level >= 2").clone();
    let cap_ref = cap.clone();
    run_with(format!("M_{src}"), &start, Some(&cap), max_steps, |p| {
        climb(symbolic_pieces_from(&mut builder, src, p, Some(&cap_ref)), p, Some(&cap_ref))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn d(s: &str) -> FuncDesc {
        s.parse().unwrap()
    }

    #[test]
    fn next_endpoint_examples() {
        assert_eq!(next_endpoint(&d("const:1"), &q("0"), None).unwrap(), q("1"));
        assert_eq!(next_endpoint(&d("affine:1,1"), &q("0"), Some(&q("1"))).unwrap(), q("1/2"));
        assert_eq!(next_endpoint(&d("const:3/7"), &q("5/2"), None).unwrap(), q("5/2") + q("3/7"));
        assert!(matches!(next_endpoint(&d("const:0"), &q("0"), None), Err(PartitionError::NotPositive(_))));
        assert!(next_endpoint(&d("const:1"), &q("1"), Some(&q("1"))).is_err());
    }

    #[test]
    fn iterate_examples() {
        let run = iterate_endpoints(&d("const:1"), &q("0"), None, 4).unwrap();
        assert_eq!(run.endpoints, vec![q("0"), q("1"), q("2"), q("3")]);
        assert!(!run.exhausted);
        let run = iterate_endpoints(&d("affine:1,1"), &q("0"), Some(&q("1")), 3).unwrap();
        assert_eq!(run.endpoints, vec![q("0"), q("1/2"), q("3/4")]);
        let run = iterate_endpoints(&d("const:1"), &q("0"), Some(&q("5/2")), 10).unwrap();
        assert_eq!(run.endpoints, vec![q("0"), q("1"), q("2"), q("5/2")]);
        assert!(run.exhausted);
    }

    #[test]
    fn climb_jumps_to_a_lower_piece() {
        // d = 3 on [0, 1), then 1/4 on [1, ∞): from 0 the line meets the drop at x = 1
        let pw = d("piecewise:0,1,3,0;1,inf,1/4,0");
        assert_eq!(next_endpoint(&pw, &q("0"), None).unwrap(), q("1"));
        assert_eq!(next_endpoint(&pw, &q("1"), None).unwrap(), q("5/4"));
    }

    /// Smallest point of the `2^-20` lattice in `[p, 1)` with `x - d(x) ≥ p`.
    fn lattice_climb(d: &FuncDesc, p: &Rational) -> Rational {
        let h = Rational::half_pow(20);
        let mut x = (p / &h).floor();
        loop {
            let cand = Rational::from_integer(x.clone()) * &h;
            if cand >= *p && &cand - &d.eval(&cand).unwrap() >= *p {
                return cand;
            }
            x += 1;
        }
    }

    #[test]
    fn staircase_run_matches_lattice_search() {
        let st = d("staircase:example2,1/4");
        let run = iterate_endpoints(&st, &q("0"), Some(&q("1")), 12).unwrap();
        assert_eq!(run.endpoints.len(), 12);
        for w in run.endpoints.windows(2) {
            let grid = lattice_climb(&st, &w[0]);
            assert!(w[1] <= grid && grid < &w[1] + Rational::half_pow(20), "{} vs {grid}", w[1]);
        }
        // endpoints per piece [1 - 2^-n, 1 - 2^-(n+1))
        let per_piece: Vec<usize> = (0..4u64)
            .map(|n| {
                let lo = Rational::one() - Rational::half_pow(n);
                let hi = Rational::one() - Rational::half_pow(n + 1);
                run.endpoints.iter().filter(|p| **p >= lo && **p < hi).count()
            })
            .collect();
        assert_eq!(per_piece, vec![2, 1, 2, 1]);
    }

    #[test]
    fn engine_partition_examples() {
        let c = AlgoConfig::classic();
        let run = engine_partition(&c, 2, &[q("0")], 3).unwrap();
        assert_eq!(run.endpoints, vec![q("0"), q("1/2"), q("3/4")]);
        assert_eq!(run.cap, Some(q("1")));
        let run = engine_partition(&c, 1, &[], 3).unwrap();
        assert_eq!(run.endpoints, vec![q("0"), q("1"), q("2")]);
        let one = AlgoConfig::m_n(1).unwrap();
        assert_eq!(engine_partition(&one, 1, &[], 3).unwrap().endpoints, vec![q("0"), q("1"), q("2")]);
        assert!(engine_partition(&c, 3, &[q("0"), q("0")], 3).is_err());
        assert!(engine_partition(&c, 2, &[], 3).is_err());
    }

    #[test]
    fn symbolic_construction_stops_at_accumulation_points() {
        // M has infinitely many pieces below 1, so the climb on [1, 2) cannot be built
        let c = AlgoConfig::classic();
        let err = engine_partition(&c, 2, &[q("1")], 4).unwrap_err();
        assert_eq!(err, PartitionError::Engine(EvalError::PieceBudget(DEFAULT_MAX_PIECES)));
    }
}
