//! Ordinal notations below `φ_ω(0)`.
//!
//! An [`Ordinal`] is a strictly decreasing list of terms `p·c`, where each `p` is a
//! [`Principal`] `φ_n(α)` and `c` a positive natural. Finite Veblen levels are the
//! whole universe: `φ_0(α) = ω^α`, `φ_1(α) = ε_α`, and so on.
//!
//! Normal form: the argument of `φ_n(α)` is never a fixed point of `φ_n`, i.e. it is
//! not a lone `φ_m(β)` with `m > n`. Under that rule representations are unique, so
//! structural equality is ordinal equality.

mod bound;
mod parse;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

pub use bound::{minimal_gamma, theorem2_bound, HeightBound};
pub use parse::ParseOrdinalError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("argument {arg} is a fixed point of phi_{level}; write it without the outer function")]
    NotNormal { level: u32, arg: String },
    #[error("notation range exceeded: {0}")]
    Range(String),
    #[error("invalid bound request: {0}")]
    InvalidBound(String),
}

/// `φ_level(arg)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Principal {
    level: u32,
    arg: Ordinal,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub principal: Principal,
    pub count: BigUint,
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Principal {
    /// Builds `φ_level(arg)`, rejecting arguments that are fixed points of `φ_level`.
    pub fn new(level: u32, arg: Ordinal) -> Result<Self, OrdinalError> {
        if let Some(p) = arg.as_principal() {
            if p.level > level {
                return Err(OrdinalError::NotNormal { level, arg: arg.to_string() });
            }
        }
        Ok(Principal { level, arg })
    }

    /// `φ_0(0) = 1`.
    pub fn one() -> Self {
        Principal { level: 0, arg: Ordinal::zero() }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn arg(&self) -> &Ordinal {
        &self.arg
    }

    pub fn is_one(&self) -> bool {
        self.level == 0 && self.arg.is_zero()
    }

    /// The `β` with `ω^β = self`. Principals of level ≥ 1 are their own logarithm.
    pub fn log_omega(&self) -> Ordinal {
        if self.level == 0 {
            self.arg.clone()
        } else {
            Ordinal::from_principal(self.clone())
        }
    }
}

impl Ord for Principal {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.level.cmp(&other.level) {
            Ordering::Equal => self.arg.cmp(&other.arg),
            // φ_m(α) < φ_n(β) with m < n iff α < φ_n(β)
            Ordering::Less => self.arg.cmp_principal(other),
            Ordering::Greater => other.cmp(self).reverse(),
        }
    }
}

impl PartialOrd for Principal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Term {
    pub fn new(principal: Principal, count: BigUint) -> Self {
        debug_assert!(!count.is_zero());
        Term { principal, count }
    }
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::from_nat(1u32)
    }

    pub fn omega() -> Self {
        Ordinal::from_principal(Principal { level: 0, arg: Ordinal::one() })
    }

    pub fn from_nat<N: Into<BigUint>>(n: N) -> Self {
        let n = n.into();
        if n.is_zero() {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![Term::new(Principal::one(), n)] }
        }
    }

    pub fn from_principal(p: Principal) -> Self {
        Ordinal { terms: vec![Term::new(p, BigUint::one())] }
    }

    /// Builds an ordinal from terms, checking that principals strictly decrease.
    pub fn from_terms(terms: Vec<Term>) -> Option<Self> {
        let ordered = terms.windows(2).all(|w| w[0].principal > w[1].principal);
        let positive = terms.iter().all(|t| !t.count.is_zero());
        (ordered && positive).then_some(Ordinal { terms })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single principal when `self = p·1`.
    pub fn as_principal(&self) -> Option<&Principal> {
        match self.terms.as_slice() {
            [t] if t.count.is_one() => Some(&t.principal),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&Principal> {
        self.terms.first().map(|t| &t.principal)
    }

    pub fn as_nat(&self) -> Option<BigUint> {
        match self.terms.as_slice() {
            [] => Some(BigUint::zero()),
            [t] if t.principal.is_one() => Some(t.count.clone()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_nat().is_some()
    }

    /// Largest Veblen level mentioned anywhere in the notation.
    pub fn max_level(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.principal.level.max(t.principal.arg.max_level()))
            .max()
            .unwrap_or(0)
    }

    /// Compares against a single principal without allocating.
    fn cmp_principal(&self, q: &Principal) -> Ordering {
        match self.terms.first() {
            None => Ordering::Less,
            Some(t) => match t.principal.cmp(q) {
                Ordering::Equal if self.terms.len() == 1 && t.count.is_one() => Ordering::Equal,
                Ordering::Equal => Ordering::Greater,
                o => o,
            },
        }
    }

    pub fn succ(&self) -> Ordinal {
        ord_sum(self, &Ordinal::one())
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            match a.principal.cmp(&b.principal) {
                Ordering::Equal => {}
                o => return o,
            }
            match a.count.cmp(&b.count) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn ord_cmp(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

/// Hessenberg natural sum: merge term lists, adding counts of equal principals.
pub fn nat_sum(a: &Ordinal, b: &Ordinal) -> Ordinal {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        let (x, y) = (&a.terms[i], &b.terms[j]);
        match x.principal.cmp(&y.principal) {
            Ordering::Greater => {
                out.push(x.clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(y.clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push(Term::new(x.principal.clone(), &x.count + &y.count));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a.terms[i..]);
    out.extend_from_slice(&b.terms[j..]);
    Ordinal { terms: out }
}

/// Hessenberg natural product, distributing over term pairs with
/// `ω^α ⊗ ω^β = ω^(α ⊕ β)`.
pub fn nat_prod(a: &Ordinal, b: &Ordinal) -> Ordinal {
    let mut acc = Ordinal::zero();
    for x in &a.terms {
        let lx = x.principal.log_omega();
        for y in &b.terms {
            let exp = nat_sum(&lx, &y.principal.log_omega());
            let p = principal_of(omega_pow(&exp));
            let term = Ordinal { terms: vec![Term::new(p, &x.count * &y.count)] };
            acc = nat_sum(&acc, &term);
        }
    }
    acc
}

/// Ordinary (non-commutative) ordinal addition.
pub fn ord_sum(a: &Ordinal, b: &Ordinal) -> Ordinal {
    let Some(lead) = b.terms.first() else {
        return a.clone();
    };
    let mut out: Vec<Term> = Vec::with_capacity(a.terms.len() + b.terms.len());
    let mut rest = &b.terms[..];
    for t in &a.terms {
        match t.principal.cmp(&lead.principal) {
            Ordering::Greater => out.push(t.clone()),
            Ordering::Equal => {
                out.push(Term::new(t.principal.clone(), &t.count + &lead.count));
                rest = &b.terms[1..];
                break;
            }
            Ordering::Less => break,
        }
    }
    out.extend_from_slice(rest);
    Ordinal { terms: out }
}

/// Ordinary ordinal multiplication.
pub fn ord_prod(a: &Ordinal, b: &Ordinal) -> Ordinal {
    let Some(lead) = a.terms.first() else {
        return Ordinal::zero();
    };
    let lead_log = lead.principal.log_omega();
    let mut acc = Ordinal::zero();
    for t in &b.terms {
        let piece = if t.principal.is_one() {
            // a·n multiplies the leading count and keeps the tail
            let mut terms = a.terms.clone();
            terms[0].count = &lead.count * &t.count;
            Ordinal { terms }
        } else {
            // a·ω^β = ω^(log(lead a) + β) for β ≥ 1
            let exp = ord_sum(&lead_log, &t.principal.log_omega());
            let p = principal_of(omega_pow(&exp));
            Ordinal { terms: vec![Term::new(p, t.count.clone())] }
        };
        acc = ord_sum(&acc, &piece);
    }
    acc
}

/// `ω^a`, returning `a` itself when it is an epsilon number or higher.
pub fn omega_pow(a: &Ordinal) -> Ordinal {
    veblen(0, a)
}

/// `φ_n(a)`, normalized: a lone principal of level above `n` is a fixed point.
pub fn veblen(n: u32, a: &Ordinal) -> Ordinal {
    if let Some(p) = a.as_principal() {
        if p.level > n {
            return a.clone();
        }
    }
    Ordinal::from_principal(Principal { level: n, arg: a.clone() })
}

/// `a^[n]`: the n-fold natural product, with `a^[0] = 1`.
///
/// Transfinite exponents are not supported; for limit `β` the repeated natural
/// product coincides with ordinary exponentiation `a^β`.
pub fn nat_prod_iter(a: &Ordinal, n: u64) -> Ordinal {
    (0..n).fold(Ordinal::one(), |acc, _| nat_prod(&acc, a))
}

fn principal_of(o: Ordinal) -> Principal {
    let mut terms = o.terms;
    debug_assert!(terms.len() == 1 && terms[0].count.is_one());
    terms.swap_remove(0).principal
}

impl fmt::Display for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.level > 0 {
            return write!(f, "phi({},{})", self.level, self.arg);
        }
        if let Some(n) = self.arg.as_nat() {
            return match n.to_u64() {
                Some(0) => write!(f, "1"),
                Some(1) => write!(f, "w"),
                _ => write!(f, "w^{n}"),
            };
        }
        if self.arg == Ordinal::omega() {
            write!(f, "w^w")
        } else {
            write!(f, "w^({})", self.arg)
        }
    }
}

impl fmt::Debug for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.principal.is_one() {
                write!(f, "{}", t.count)?;
            } else if t.count.is_one() {
                write!(f, "{}", t.principal)?;
            } else {
                write!(f, "{}*{}", t.principal, t.count)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for Ordinal {
    type Err = ParseOrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn nat(n: u32) -> Ordinal {
        Ordinal::from_nat(n)
    }

    #[test]
    fn comparisons() {
        assert_eq!(ord_cmp(&Ordinal::omega(), &nat(3)), Ordering::Greater);
        assert_eq!(ord_cmp(&o("phi(1,0)"), &o("w^(w^w)")), Ordering::Greater);
        assert_eq!(ord_cmp(&o("phi(2,0)"), &o("phi(1,phi(1,0))")), Ordering::Greater);
        assert_eq!(ord_cmp(&o("w^2*3+w"), &o("w^2*3+5")), Ordering::Greater);
        assert_eq!(ord_cmp(&o("w^2*3"), &o("w^2*3+1")), Ordering::Less);
        assert_eq!(ord_cmp(&o("w^(phi(1,0)+1)"), &o("phi(1,1)")), Ordering::Less);
        assert_eq!(ord_cmp(&o("phi(1,w)"), &o("phi(2,0)")), Ordering::Less);
        assert_eq!(ord_cmp(&o("phi(1,phi(2,0)+1)"), &o("phi(2,0)")), Ordering::Greater);
    }

    #[test]
    fn natural_sum_examples() {
        assert_eq!(nat_sum(&o("w+1"), &o("w")), o("w*2+1"));
        assert_eq!(nat_sum(&o("w^w+3"), &Ordinal::zero()), o("w^w+3"));
        assert_eq!(nat_sum(&o("w^w"), &o("w^2*3")), o("w^w+w^2*3"));
        assert_eq!(nat_sum(&o("w^2*3"), &o("w^w")), o("w^w+w^2*3"));
    }

    #[test]
    fn natural_product_examples() {
        assert_eq!(nat_prod(&Ordinal::omega(), &Ordinal::omega()), o("w^2"));
        assert_eq!(nat_prod(&o("w+1"), &o("w+1")), o("w^2+w*2+1"));
        assert_eq!(nat_prod(&o("phi(1,0)"), &Ordinal::omega()), o("w^(phi(1,0)+1)"));
        assert_eq!(nat_prod(&o("phi(1,0)"), &nat(1)), o("phi(1,0)"));
        assert_eq!(nat_prod(&o("phi(1,0)"), &o("phi(1,0)")), o("w^(phi(1,0)*2)"));
        assert_eq!(nat_prod(&nat(3), &nat(4)), nat(12));
        assert_eq!(nat_prod(&o("w"), &Ordinal::zero()), Ordinal::zero());
    }

    #[test]
    fn ordinary_sum_examples() {
        assert_eq!(ord_sum(&Ordinal::omega(), &nat(1)), o("w+1"));
        assert_eq!(ord_sum(&nat(1), &Ordinal::omega()), o("w"));
        assert_eq!(ord_sum(&o("w^2+1"), &o("w")), o("w^2+w"));
        assert_eq!(ord_sum(&o("w^2+w*2+1"), &o("w*3+4")), o("w^2+w*5+4"));
        assert_eq!(ord_sum(&o("w^5"), &o("phi(1,0)")), o("phi(1,0)"));
    }

    #[test]
    fn ordinary_product_examples() {
        assert_eq!(ord_prod(&Ordinal::omega(), &nat(2)), o("w*2"));
        assert_eq!(ord_prod(&nat(2), &Ordinal::omega()), o("w"));
        assert_eq!(ord_prod(&o("w+1"), &Ordinal::omega()), o("w^2"));
        assert_eq!(ord_prod(&o("w+1"), &nat(3)), o("w*3+1"));
        assert_eq!(ord_prod(&o("w+1"), &o("w+1")), o("w^2+w+1"));
        assert_eq!(ord_prod(&o("w^2"), &o("w*2")), o("w^3*2"));
        assert_eq!(ord_prod(&Ordinal::omega(), &o("phi(1,0)")), o("phi(1,0)"));
        assert_eq!(ord_prod(&o("phi(1,0)"), &Ordinal::omega()), o("w^(phi(1,0)+1)"));
    }

    #[test]
    fn exponent_and_veblen() {
        assert_eq!(omega_pow(&Ordinal::zero()), nat(1));
        assert_eq!(omega_pow(&o("phi(1,0)")), o("phi(1,0)"));
        assert_eq!(omega_pow(&Ordinal::omega()).as_principal().unwrap().level(), 0);
        assert_eq!(veblen(0, &o("w+1")), omega_pow(&o("w+1")));
        let eps0 = veblen(1, &Ordinal::zero());
        assert_eq!(eps0.as_principal().map(|p| (p.level(), p.arg().is_zero())), Some((1, true)));
        assert_eq!(veblen(0, &o("phi(2,0)")), o("phi(2,0)"));
        assert_eq!(veblen(1, &o("phi(2,0)")), o("phi(2,0)"));
        assert_ne!(veblen(2, &o("phi(2,0)")), o("phi(2,0)"));
        assert!(veblen(2, &o("phi(2,0)")) > o("phi(2,0)"));
    }

    #[test]
    fn repeated_natural_product() {
        let a = o("w+1");
        assert_eq!(nat_prod_iter(&a, 0), nat(1));
        assert_eq!(nat_prod_iter(&a, 1), a);
        assert_eq!(nat_prod_iter(&a, 2), o("w^2+w*2+1"));
        assert_eq!(nat_prod_iter(&a, 3), o("w^3+w^2*3+w*3+1"));
    }

    #[test]
    fn principal_rejects_fixed_point_argument() {
        assert!(Principal::new(0, o("phi(1,0)")).is_err());
        assert!(Principal::new(1, o("phi(2,3)")).is_err());
        assert!(Principal::new(1, o("phi(1,0)")).is_ok());
        assert!(Principal::new(0, o("phi(1,0)*2")).is_ok());
    }

    #[test]
    fn from_terms_checks_order() {
        let w = Ordinal::omega().terms()[0].clone();
        let one = nat(1).terms()[0].clone();
        assert!(Ordinal::from_terms(vec![w.clone(), one.clone()]).is_some());
        assert!(Ordinal::from_terms(vec![one, w.clone()]).is_none());
        assert!(Ordinal::from_terms(vec![w.clone(), w]).is_none());
    }

    #[test]
    fn max_level_walks_arguments() {
        assert_eq!(o("w^(phi(3,0)+1)+2").max_level(), 3);
        assert_eq!(o("w^w").max_level(), 0);
    }
}
