//! Expression grammar for algebra and Lie elements.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := rational ['*' word] | word
//! word     := name ('*' name)*
//! rational := int ['/' int]
//! ```
//!
//! Whitespace is ignored. Positions in errors are byte offsets into the source.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cdga::{Element, FreeCDGA};
use crate::dgla::{lie_add_scaled, LieVec, FDGLA};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at {position}: unknown generator `{name}`")]
    UnknownGenerator { position: usize, name: String },
    #[error("at {position}: malformed rational")]
    MalformedRational { position: usize },
    #[error("at {position}: zero denominator")]
    ZeroDenominator { position: usize },
    #[error("at {position}: expected {expected}")]
    Unexpected { position: usize, expected: &'static str },
    #[error("at {position}: a Lie element term needs exactly one basis name")]
    NotLinear { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::UnknownGenerator { position, .. }
            | ParseError::MalformedRational { position }
            | ParseError::ZeroDenominator { position }
            | ParseError::Unexpected { position, .. }
            | ParseError::NotLinear { position } => *position,
        }
    }
}

/// A parsed term: coefficient and the names in the word, with positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coefficient: Rational,
    pub position: usize,
    pub names: Vec<(String, usize)>,
}

struct Cursor<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Cursor<'s> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'s str {
        let start = self.pos;
        while let Some(c) = self.peek_raw() {
            if !f(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(ParseError::MalformedRational { position: start });
        }
        if self.peek_raw().is_some_and(is_name_char) {
            return Err(ParseError::MalformedRational { position: start });
        }
        Ok(digits.parse().expect("ascii digits"))
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let numer = self.integer()?;
        if !self.eat('/') {
            return Ok(Rational::from_integer(numer));
        }
        let denom_at = {
            self.skip_ws();
            self.pos
        };
        let denom = self.integer().map_err(|_| ParseError::MalformedRational { position: start })?;
        if denom.is_zero() {
            return Err(ParseError::ZeroDenominator { position: denom_at });
        }
        Ok(Rational::new(numer, denom))
    }

    fn name(&mut self) -> Result<(String, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek_raw() {
            Some(c) if is_name_start(c) => {}
            _ => {
                return Err(ParseError::Unexpected {
                    position: start,
                    expected: "a generator name",
                })
            }
        }
        let name = self.take_while(is_name_char);
        Ok((name.to_string(), start))
    }

    fn word(&mut self, names: &mut Vec<(String, usize)>) -> Result<(), ParseError> {
        names.push(self.name()?);
        while self.eat('*') {
            names.push(self.name()?);
        }
        Ok(())
    }

    fn term(&mut self, sign: Rational) -> Result<Term, ParseError> {
        self.skip_ws();
        let position = self.pos;
        let mut names = Vec::new();
        let coefficient = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let q = self.rational()?;
                if self.eat('*') {
                    self.word(&mut names)?;
                }
                q
            }
            Some(c) if is_name_start(c) => {
                self.word(&mut names)?;
                Rational::one()
            }
            _ => {
                return Err(ParseError::Unexpected {
                    position,
                    expected: "a term",
                })
            }
        };
        Ok(Term {
            coefficient: coefficient * sign,
            position,
            names,
        })
    }
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits an expression into signed terms without resolving names.
pub fn parse_terms(src: &str) -> Result<Vec<Term>, ParseError> {
    let mut cur = Cursor { src, pos: 0 };
    let mut terms = Vec::new();
    let mut sign = if cur.eat('-') { -Rational::one() } else { Rational::one() };
    loop {
        terms.push(cur.term(sign)?);
        if cur.eat('+') {
            sign = Rational::one();
        } else if cur.eat('-') {
            sign = -Rational::one();
        } else if cur.peek().is_none() {
            return Ok(terms);
        } else {
            return Err(ParseError::Unexpected {
                position: cur.pos,
                expected: "'+', '-' or end of input",
            });
        }
    }
}

/// Parses an element of `A`; products are taken in `A`, so reordering and
/// repeated odd generators are normalized with Koszul signs.
pub fn parse_element(src: &str, a: &FreeCDGA) -> Result<Element, ParseError> {
    let mut out = Element::zero();
    for term in parse_terms(src)? {
        let mut x = Element::scalar(term.coefficient);
        for (name, position) in &term.names {
            let g = a.gen(name).map_err(|_| ParseError::UnknownGenerator {
                position: *position,
                name: name.clone(),
            })?;
            x = a.mul(&x, &g);
        }
        out.add_scaled(&x, &Rational::one());
    }
    Ok(out)
}

/// Parses a linear combination of basis elements of `g`.
pub fn parse_lie(src: &str, g: &FDGLA) -> Result<LieVec, ParseError> {
    let mut out = LieVec::new();
    for term in parse_terms(src)? {
        match term.names.as_slice() {
            [] if term.coefficient.is_zero() => {}
            [(name, position)] => {
                let i = g.index_of(name).map_err(|_| ParseError::UnknownGenerator {
                    position: *position,
                    name: name.clone(),
                })?;
                lie_add_scaled(&mut out, &LieVec::from([(i, Rational::one())]), &term.coefficient);
            }
            _ => {
                return Err(ParseError::NotLinear {
                    position: term.position,
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::models;

    #[test]
    fn zero_and_monomials() {
        let a = models::heisenberg(4);
        assert!(parse_element("0", &a).unwrap().is_zero());
        let ab = parse_element("a*b", &a).unwrap();
        assert_eq!(ab, a.mul(&a.gen("a").unwrap(), &a.gen("b").unwrap()));
        assert_eq!(a.format(&ab), "a*b");
    }

    #[test]
    fn koszul_normalization() {
        let a = models::heisenberg(4);
        let x = parse_element("b*a - 2/3*c*a", &a).unwrap();
        assert_eq!(a.format(&x), "-a*b + 2/3*a*c");
        assert!(parse_element("a*a", &a).unwrap().is_zero());
        let s = models::two_sphere(6);
        let u2 = parse_element(" u * u + 1/2", &s).unwrap();
        assert_eq!(s.format(&u2), "1/2 + u*u");
    }

    #[test]
    fn errors_carry_positions() {
        let a = models::heisenberg(4);
        assert_eq!(
            parse_element("a + q", &a),
            Err(ParseError::UnknownGenerator {
                position: 4,
                name: "q".into()
            })
        );
        assert_eq!(
            parse_element("a + 1/0*b", &a),
            Err(ParseError::ZeroDenominator { position: 6 })
        );
        assert_eq!(parse_element("3x", &a).unwrap_err().position(), 0);
        assert_eq!(parse_element("a +", &a).unwrap_err().position(), 3);
        assert_eq!(parse_element("a b", &a).unwrap_err().position(), 2);
        assert!(matches!(
            parse_element("1/*a", &a),
            Err(ParseError::MalformedRational { position: 0 })
        ));
    }

    #[test]
    fn lie_elements() {
        let g = crate::dgla::massey_data(2, &[1, 1]).unwrap();
        let l = g.total();
        let v = parse_lie("2*e1 - 1/2*eta", l).unwrap();
        assert_eq!(v[&l.index_of("e1").unwrap()], int(2));
        assert_eq!(v[&l.index_of("eta").unwrap()], rat(-1, 2));
        assert_eq!(parse_lie(&l.format_vec(&v), l).unwrap(), v);
        assert!(parse_lie("0", l).unwrap().is_empty());
        assert!(matches!(parse_lie("e1*e2", l), Err(ParseError::NotLinear { .. })));
    }
}
