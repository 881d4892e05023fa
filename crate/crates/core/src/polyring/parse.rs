//! Polynomial text grammar:
//!
//! ```text
//! poly      ::= ["-"] term (("+" | "-") ["-"] term)*
//! term      ::= coeff | coeff "*" powerprod | powerprod
//! powerprod ::= var ["^" nat] ("*" var ["^" nat])*
//! coeff     ::= nat | nat "/" nat
//! ```
//!
//! Whitespace is insignificant and there is no implicit multiplication.

use std::sync::Arc;

use num_bigint::BigInt;

use super::monomial::Monomial;
use super::poly::{PolyRing, Polynomial};
use crate::error::{Error, Result};
use crate::exactnum::Scalar;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'/' => out.push((start, Tok::Slash)),
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..=i].parse().expect("ascii digits");
                out.push((start, Tok::Num(n)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..=i].to_string())));
            }
            _ => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character {:?}", c as char) })
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ring: &'a Arc<PolyRing>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.pos(), msg: msg.to_string() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.ring);
        let mut first = true;
        loop {
            let mut negate = false;
            if !first {
                match self.bump() {
                    Some(Tok::Plus) => {}
                    Some(Tok::Minus) => negate = true,
                    _ => {
                        self.at -= 1;
                        return self.err("expected `+` or `-`");
                    }
                }
            }
            if self.peek() == Some(&Tok::Minus) {
                self.bump();
                negate = !negate;
            }
            let t = self.term()?;
            acc = &acc + &if negate { t.neg() } else { t };
            first = false;
            if self.peek().is_none() {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let base = self.ring.base();
        match self.peek() {
            Some(Tok::Num(_)) => {
                let start = self.pos();
                let Some(Tok::Num(n)) = self.bump() else { unreachable!() };
                let coeff = if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Num(d)) => base.from_fraction(&n, &d).map_err(|e| Error::Syntax {
                            pos: start,
                            msg: format!("coefficient {n}/{d}: {e}"),
                        })?,
                        _ => {
                            self.at -= 1;
                            return self.err("expected denominator");
                        }
                    }
                } else {
                    base.from_bigint(&n)
                };
                if self.peek() == Some(&Tok::Star) {
                    self.bump();
                    let m = self.powerprod()?;
                    Ok(Polynomial::term(self.ring, m, coeff))
                } else {
                    Ok(Polynomial::constant(self.ring, coeff))
                }
            }
            Some(Tok::Ident(_)) => {
                let m = self.powerprod()?;
                Ok(Polynomial::term(self.ring, m, base.one()))
            }
            _ => self.err("expected a term"),
        }
    }

    fn powerprod(&mut self) -> Result<Monomial> {
        let mut ex = vec![0u32; self.ring.nvars()];
        loop {
            let Some(Tok::Ident(name)) = self.peek().cloned() else {
                return self.err("expected a variable");
            };
            self.bump();
            let idx = self.ring.var_index(&name).ok_or(Error::UnknownVariable(name))?;
            let mut e = 1u32;
            if self.peek() == Some(&Tok::Caret) {
                self.bump();
                match self.peek() {
                    Some(Tok::Num(n)) => {
                        e = u32::try_from(n).or_else(|_| self.err("exponent too large"))?;
                        self.bump();
                    }
                    Some(Tok::Minus) => return Err(Error::NegativeExponent { pos: self.pos() }),
                    _ => return self.err("expected exponent"),
                }
            }
            ex[idx] += e;
            if self.peek() == Some(&Tok::Star) {
                self.bump();
            } else {
                return Ok(Monomial::new(ex));
            }
        }
    }
}

/// Parses `text` as a polynomial in `ring`.
pub fn parse_poly(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "empty polynomial".into() });
    }
    let mut p = Parser { toks, at: 0, end: text.len(), ring };
    p.poly()
}

/// Convenience: parse a coefficient literal in the ring's base.
pub fn parse_scalar(text: &str, ring: &Arc<PolyRing>) -> Result<Scalar> {
    let p = parse_poly(text, ring)?;
    if !p.is_constant() {
        return Err(Error::Syntax { pos: 0, msg: "expected a constant".into() });
    }
    Ok(p.constant_coeff())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::BaseKind;
    use proptest::prelude::*;

    fn ring(vars: &[&str], base: BaseKind) -> Arc<PolyRing> {
        PolyRing::new(vars.iter().map(|s| s.to_string()).collect(), base)
    }

    #[test]
    fn parses_examples() {
        let q = ring(&["x"], BaseKind::Rat);
        let f = parse_poly("x^2 - 2", &q).unwrap();
        assert_eq!(f.to_string(), "x^2 - 2");
        let f5 = ring(&["x", "y"], BaseKind::Fp(5));
        let g = parse_poly("x*y + 3*x", &f5).unwrap();
        assert_eq!(g.to_string(), "x*y + 3*x");
        assert_eq!(parse_poly("x*y + 8*x", &f5).unwrap(), g);
    }

    #[test]
    fn rejects_malformed() {
        let r = ring(&["x", "y"], BaseKind::Rat);
        assert!(matches!(parse_poly("x + + y", &r), Err(Error::Syntax { pos: 4, .. })));
        assert_eq!(parse_poly("x + z", &r), Err(Error::UnknownVariable("z".into())));
        assert_eq!(parse_poly("x^-1", &r), Err(Error::NegativeExponent { pos: 2 }));
        assert!(matches!(parse_poly("2x", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x*", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("1/0*x", &r), Err(Error::Syntax { .. })));
    }

    #[test]
    fn rationals_and_unary_minus() {
        let r = ring(&["x", "y"], BaseKind::Rat);
        let f = parse_poly("-1/2*x^2*y + -3 - -y", &r).unwrap();
        assert_eq!(f.to_string(), "-1/2*x^2*y + y - 3");
        let f3 = ring(&["x"], BaseKind::Fp(3));
        assert_eq!(parse_poly("1/2*x", &f3).unwrap().to_string(), "2*x");
        assert!(parse_poly("1/3*x", &f3).is_err());
        let z = ring(&["x"], BaseKind::Int);
        assert!(parse_poly("1/2*x", &z).is_err());
        assert_eq!(parse_poly("4/2*x", &z).unwrap().to_string(), "2*x");
    }

    fn arb_text() -> impl Strategy<Value = String> {
        let term = (-9i64..10, 0u32..4, 0u32..4).prop_map(|(c, a, b)| format!("{c}*x^{a}*y^{b}"));
        proptest::collection::vec(term, 1..6).prop_map(|ts| ts.join(" + "))
    }

    proptest! {
        #[test]
        fn print_parse_idempotent(text in arb_text(), fp in any::<bool>()) {
            let base = if fp { BaseKind::Fp(7) } else { BaseKind::Rat };
            let r = ring(&["x", "y"], base);
            let f = parse_poly(&text, &r).unwrap();
            let printed = f.to_string();
            let g = parse_poly(&printed, &r).unwrap();
            prop_assert_eq!(&g, &f);
            prop_assert_eq!(g.to_string(), printed);
        }
    }
}
