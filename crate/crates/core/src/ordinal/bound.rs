//! Height bound for the generalized recursion.
//!
//! For `k = 1` the bound is `ω^(ω^(γ+1)·(o(s)+1))` with `γ` least such that the
//! largest input height is below `ω^(ω^γ)`. For `k ≥ 2` it is `φ_{k-1}(γ + o(s) + 1)`
//! with `γ` least such that the largest input height (o(f), o(s) and every o(g_i))
//! is below `φ_{k-1}(γ)`.

use std::cmp::Ordering;

use super::{omega_pow, ord_prod, ord_sum, veblen, Ordinal, OrdinalError, Principal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightBound {
    pub gamma: Ordinal,
    pub bound: Ordinal,
}

/// `B(γ)` for a given `k`: `ω^(ω^γ)` when `k = 1`, otherwise `φ_{k-1}(γ)`.
fn comparator(k: u32, gamma: &Ordinal) -> Ordinal {
    if k == 1 {
        omega_pow(&omega_pow(gamma))
    } else {
        veblen(k - 1, gamma)
    }
}

/// Least `γ` with `delta < B(γ)`.
pub fn minimal_gamma(k: u32, delta: &Ordinal) -> Result<Ordinal, OrdinalError> {
    if k == 0 {
        return Err(OrdinalError::InvalidBound("k must be at least 1".into()));
    }
    if *delta < comparator(k, &Ordinal::zero()) {
        return Ok(Ordinal::zero());
    }
    // B(γ) is additively principal, so only the leading principal matters.
    let lead = delta.leading().expect("delta > 0 here");
    Ok(if k == 1 {
        least_above_double_exp(lead)
    } else {
        least_above_veblen(k - 1, lead)
    })
}

/// Least `γ` with `p < φ_j(γ)`, `j ≥ 1`.
fn least_above_veblen(j: u32, p: &Principal) -> Ordinal {
    match p.level().cmp(&j) {
        // φ_j(α) < φ_j(γ) iff α < γ
        Ordering::Equal => p.arg().succ(),
        // p is a fixed point of φ_j, so p < φ_j(γ) iff p < γ
        Ordering::Greater => Ordinal::from_principal(p.clone()).succ(),
        // φ_m(α) < φ_j(γ) with m < j iff α < φ_j(γ)
        Ordering::Less => match p.arg().leading() {
            None => Ordinal::zero(),
            Some(q) => least_above_veblen(j, q),
        },
    }
}

/// Least `γ` with `p < ω^(ω^γ)`, for `p ≥ ω`.
fn least_above_double_exp(p: &Principal) -> Ordinal {
    if p.level() >= 1 {
        // epsilon numbers and above satisfy p = ω^(ω^p)
        return Ordinal::from_principal(p.clone()).succ();
    }
    // p = ω^α < ω^(ω^γ) iff lead(α) < ω^γ
    match p.arg().leading() {
        None => Ordinal::zero(),
        Some(q) if q.level() == 0 => q.arg().succ(),
        Some(q) => Ordinal::from_principal(q.clone()).succ(),
    }
}

/// Upper bound on the ordinal height of the recursion built from `k` inner
/// functions with heights `o_g`, base `o_f` and step `o_s`.
pub fn theorem2_bound(
    k: u32,
    o_f: &Ordinal,
    o_s: &Ordinal,
    o_g: &[Ordinal],
) -> Result<HeightBound, OrdinalError> {
    if k == 0 {
        return Err(OrdinalError::InvalidBound("k must be at least 1".into()));
    }
    if o_g.len() != k as usize {
        return Err(OrdinalError::InvalidBound(format!(
            "expected {k} inner heights, got {}",
            o_g.len()
        )));
    }
    let largest = std::iter::once(o_f)
        .chain(std::iter::once(o_s))
        .chain(o_g)
        .max()
        .expect("non-empty")
        .clone();
    let gamma = minimal_gamma(k, &largest)?;
    let bound = if k == 1 {
        let tower = omega_pow(&gamma.succ());
        omega_pow(&ord_prod(&tower, &o_s.succ()))
    } else {
        veblen(k - 1, &ord_sum(&ord_sum(&gamma, o_s), &Ordinal::one()))
    };
    Ok(HeightBound { gamma, bound })
}
