#![allow(dead_code)]

use num_bigint::BigUint;
use ordlab::ordinal::{nat_prod, nat_sum, veblen, Ordinal, Principal, Term};
use rand::Rng;

/// Coefficient vectors indexed by exponent: `v[e]` is the coefficient of `ω^e`.
/// Seven slots hold any natural product of two ordinals below `ω^4`.
pub type Coeffs = [u64; 7];

pub fn coeffs_to_ord(v: &Coeffs) -> Ordinal {
    let terms = (0..v.len())
        .rev()
        .filter(|&e| v[e] > 0)
        .map(|e| {
            let p = Principal::new(0, Ordinal::from_nat(e as u64)).expect("finite exponent");
            Term::new(p, BigUint::from(v[e]))
        })
        .collect();
    Ordinal::from_terms(terms).expect("descending exponents")
}

pub fn ord_to_coeffs(o: &Ordinal) -> Option<Coeffs> {
    let mut v = [0u64; 7];
    for t in o.terms() {
        if t.principal.level() != 0 {
            return None;
        }
        let e = usize::try_from(t.principal.arg().as_nat()?).ok()?;
        *v.get_mut(e)? = u64::try_from(&t.count).ok()?;
    }
    Some(v)
}

fn lead(v: &Coeffs) -> Option<usize> {
    (0..v.len()).rev().find(|&e| v[e] > 0)
}

pub fn oracle_nat_sum(a: &Coeffs, b: &Coeffs) -> Coeffs {
    std::array::from_fn(|e| a[e] + b[e])
}

/// Polynomial product with exponents added naturally.
pub fn oracle_nat_prod(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let mut out = [0u64; 7];
    for i in 0..7 {
        for j in 0..7 {
            if a[i] > 0 && b[j] > 0 {
                out[i + j] += a[i] * b[j];
            }
        }
    }
    out
}

/// Terms of `a` below the leading exponent of `b` are absorbed.
pub fn oracle_ord_sum(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let Some(lb) = lead(b) else { return *a };
    let mut out = *b;
    for e in lb..7 {
        out[e] += a[e];
    }
    out
}

/// `a·b` by left distributivity over the terms of `b`:
/// `a·ω^j = ω^(lead(a)+j)` for `j ≥ 1` and `a·c = ω^lead(a)·(a_lead·c) + (rest of a)`.
pub fn oracle_ord_prod(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let Some(la) = lead(a) else { return [0; 7] };
    let mut acc = [0u64; 7];
    for j in (0..7).rev() {
        if b[j] == 0 {
            continue;
        }
        let mut piece = [0u64; 7];
        if j >= 1 {
            piece[la + j] = b[j];
        } else {
            piece = *a;
            piece[la] = a[la] * b[0];
        }
        acc = oracle_ord_sum(&acc, &piece);
    }
    acc
}

pub fn oracle_cmp(a: &Coeffs, b: &Coeffs) -> std::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Random coefficients below `ω^4`, with frequent zeros.
pub fn random_coeffs<R: Rng>(rng: &mut R) -> Coeffs {
    let mut v = [0u64; 7];
    for c in v.iter_mut().take(4) {
        *c = if rng.random_bool(0.4) { 0 } else { rng.random_range(1..6) };
    }
    v
}

/// A random normal-form notation with Veblen levels up to `max_level`.
pub fn random_ordinal<R: Rng>(rng: &mut R, depth: u32, max_level: u32) -> Ordinal {
    let n = rng.random_range(0..=3);
    (0..n).fold(Ordinal::zero(), |acc, _| {
        let p = random_principal(rng, depth, max_level);
        let c = Ordinal::from_nat(rng.random_range(1..4u32));
        nat_sum(&acc, &nat_prod(&p, &c))
    })
}

pub fn random_principal<R: Rng>(rng: &mut R, depth: u32, max_level: u32) -> Ordinal {
    if depth == 0 {
        return veblen(0, &Ordinal::from_nat(rng.random_range(0..4u32)));
    }
    let level = rng.random_range(0..=max_level);
    let arg = random_ordinal(rng, depth - 1, max_level);
    veblen(level, &arg)
}
