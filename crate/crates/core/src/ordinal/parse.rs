//! Text grammar for ordinal notations.
//!
//! ```text
//! expr := term ("+" term)*
//! term := atom ("*" nat)?
//! atom := "0" | nat | "w" ("^" atom | "^(" expr ")")? | "phi(" nat "," expr ")"
//!       | "eps(" expr ")" | "(" expr ")"
//! ```
//!
//! Only normal forms are accepted: terms must strictly decrease and no Veblen
//! argument may be a fixed point of its function.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{Ordinal, OrdinalError, Principal, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseOrdinalError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("non-normal notation at position {pos}: {msg}")]
    NotNormal { pos: usize, msg: String },
    #[error("notation range exceeded at position {pos}: {msg}")]
    Range { pos: usize, msg: String },
}

impl ParseOrdinalError {
    pub fn position(&self) -> usize {
        match self {
            ParseOrdinalError::Syntax { pos, .. }
            | ParseOrdinalError::NotNormal { pos, .. }
            | ParseOrdinalError::Range { pos, .. } => *pos,
        }
    }
}

pub(super) fn parse(text: &str) -> Result<Ordinal, ParseOrdinalError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    let value = if p.peek() == Some(b'0') && p.is_lone_zero() {
        p.pos += 1;
        Ordinal::zero()
    } else {
        p.expr()?
    };
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> ParseOrdinalError {
        ParseOrdinalError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn not_normal(&self, pos: usize, msg: String) -> ParseOrdinalError {
        ParseOrdinalError::NotNormal { pos, msg }
    }

    fn skip_ws(&mut self) {
        while matches!(self.src.get(self.pos), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseOrdinalError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected `{lit}`")))
        }
    }

    /// A `0` that is the whole remaining expression.
    fn is_lone_zero(&self) -> bool {
        self.src[self.pos + 1..].iter().all(|b| *b == b' ' || *b == b'\t')
    }

    fn nat(&mut self) -> Result<BigUint, ParseOrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected a natural number"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut terms: Vec<Term> = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            let piece = self.term()?;
            if piece.is_zero() {
                return Err(self.not_normal(start, "zero summand".into()));
            }
            if let (Some(last), Some(first)) = (terms.last(), piece.terms.first()) {
                if last.principal <= first.principal {
                    return Err(self.not_normal(
                        start,
                        format!("term {} does not decrease after {}", first.principal, last.principal),
                    ));
                }
            }
            terms.extend(piece.terms);
            if !self.eat("+") {
                break;
            }
        }
        Ok(Ordinal { terms })
    }

    fn term(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let start = self.pos;
        let atom = self.atom()?;
        if !self.eat("*") {
            return Ok(atom);
        }
        let count = self.nat()?;
        if count.is_zero() {
            return Err(self.not_normal(start, "zero multiplier".into()));
        }
        match atom.terms.as_slice() {
            [t] => Ok(Ordinal { terms: vec![Term::new(t.principal.clone(), &t.count * count)] }),
            _ => Err(self.not_normal(start, "multiplier applied to a multi-term sum".into())),
        }
    }

    fn atom(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'0'..=b'9') => {
                let n = self.nat()?;
                if n.is_zero() {
                    return Err(self.not_normal(start, "zero inside a sum".into()));
                }
                Ok(Ordinal::from_nat(n))
            }
            Some(b'w') => {
                self.pos += 1;
                if !self.eat("^") {
                    return Ok(Ordinal::omega());
                }
                self.skip_ws();
                let exp_pos = self.pos;
                let exp = if self.eat("(") {
                    let e = self.inner_expr()?;
                    self.expect(")")?;
                    e
                } else if self.peek() == Some(b'0')
                    && !matches!(self.src.get(self.pos + 1), Some(b'0'..=b'9'))
                {
                    self.pos += 1;
                    Ordinal::zero()
                } else {
                    self.atom()?
                };
                self.principal(0, exp, exp_pos)
            }
            _ if self.eat("phi(") => {
                let level_pos = self.pos;
                let level = self.nat()?;
                let level = level.to_u32().ok_or(ParseOrdinalError::Range {
                    pos: level_pos,
                    msg: format!("Veblen level {level} is too large"),
                })?;
                self.expect(",")?;
                self.skip_ws();
                let arg_pos = self.pos;
                let arg = self.inner_expr()?;
                self.expect(")")?;
                self.principal(level, arg, arg_pos)
            }
            _ if self.eat("eps(") => {
                self.skip_ws();
                let arg_pos = self.pos;
                let arg = self.inner_expr()?;
                self.expect(")")?;
                self.principal(1, arg, arg_pos)
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            _ => Err(self.syntax("expected `w`, `phi(`, `eps(`, a number or `(`")),
        }
    }

    /// An expression in argument position, where a lone `0` is allowed.
    fn inner_expr(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        self.skip_ws();
        let save = self.pos;
        if self.peek() == Some(b'0') {
            self.pos += 1;
            self.skip_ws();
            if matches!(self.peek(), Some(b')')) {
                return Ok(Ordinal::zero());
            }
            self.pos = save;
        }
        self.expr()
    }

    fn principal(&self, level: u32, arg: Ordinal, pos: usize) -> Result<Ordinal, ParseOrdinalError> {
        match Principal::new(level, arg) {
            Ok(p) => Ok(Ordinal::from_principal(p)),
            Err(OrdinalError::NotNormal { level, arg }) => {
                Err(self.not_normal(pos, format!("{arg} is a fixed point of phi_{level}")))
            }
            Err(e) => Err(self.not_normal(pos, e.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{nat_sum, ord_sum, veblen};
    use super::*;

    fn o(s: &str) -> Ordinal {
        parse(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn parses_examples() {
        let w = Ordinal::omega();
        let w2 = veblen(0, &Ordinal::from_nat(2u32));
        let expected = ord_sum(&ord_sum(&nat_sum(&nat_sum(&w2, &w2), &w2), &w), &Ordinal::one());
        assert_eq!(o("w^2*3+w+1"), expected);
        assert_eq!(o("phi(1,0)"), veblen(1, &Ordinal::zero()));
        assert_eq!(o("eps(0)"), o("phi(1,0)"));
        assert_eq!(o("0"), Ordinal::zero());
        assert_eq!(o(" w ^ ( w + 1 ) "), veblen(0, &o("w+1")));
        assert_eq!(o("w^w^2"), veblen(0, &veblen(0, &Ordinal::from_nat(2u32))));
        assert_eq!(o("w^0"), Ordinal::one());
        assert_eq!(o("(w^2+1)"), o("w^2+1"));
    }

    #[test]
    fn rejects_non_normal() {
        for bad in ["w+w^2", "1+w", "w+w", "w^(phi(1,0))", "phi(1,phi(2,0))", "w+0", "w*0", "(w+1)*2"] {
            match parse(bad) {
                Err(ParseOrdinalError::NotNormal { .. }) => {}
                other => panic!("{bad}: {other:?}"),
            }
        }
    }

    #[test]
    fn rejects_bad_syntax_with_position() {
        let e = parse("w+").unwrap_err();
        assert!(matches!(e, ParseOrdinalError::Syntax { pos: 2, .. }), "{e:?}");
        let e = parse("phi(1 0)").unwrap_err();
        assert!(matches!(e, ParseOrdinalError::Syntax { pos: 6, .. }), "{e:?}");
        assert!(parse("").is_err());
        assert!(parse("x").is_err());
        assert!(parse("w)").is_err());
    }

    #[test]
    fn huge_level_is_a_range_error() {
        assert!(matches!(parse("phi(99999999999,0)"), Err(ParseOrdinalError::Range { pos: 4, .. })));
    }

    #[test]
    fn format_parse_round_trip() {
        for s in [
            "0",
            "7",
            "w",
            "w^w",
            "w^2*3+w+1",
            "w^(w+1)*2+w^w+5",
            "w^(w^w)",
            "phi(1,0)",
            "phi(2,phi(1,0)+1)*4+phi(1,w)+w^(phi(1,0)*2)",
            "w^(phi(1,0)+1)",
        ] {
            assert_eq!(o(s).to_string(), s);
        }
    }
}
