//! Text form of polynomials.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-' factor | base ('^' natural)?
//! base     := rational | variable | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! There is no implicit multiplication and no decimal literal. `^` binds
//! tighter than unary minus, so `-x^2` is `-(x^2)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{Monomial, Polynomial, Rational, Ring};

pub const DEFAULT_MAX_DEPTH: usize = 256;
pub const DEFAULT_MAX_EXPONENT: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}, found {}",
            self.offset, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    /// Cap on nested parentheses and unary minus.
    pub max_depth: usize,
    pub max_exponent: u32,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_depth: DEFAULT_MAX_DEPTH,
            max_exponent: DEFAULT_MAX_EXPONENT,
        }
    }
}

pub fn parse_poly(text: &str, ring: &Arc<Ring>) -> Result<Polynomial, ParseError> {
    parse_poly_with(text, ring, ParseOptions::default())
}

pub fn parse_poly_with(
    text: &str,
    ring: &Arc<Ring>,
    options: ParseOptions,
) -> Result<Polynomial, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        depth: 0,
        ring,
        options,
    };
    let p = parser.expr()?;
    match parser.peek() {
        (Tok::End, _) => Ok(p),
        (tok, offset) => Err(ParseError {
            offset,
            expected: "operator or end of input".into(),
            found: tok.describe(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // digits are ASCII, so this slice is valid UTF-8
                Tok::Int(text[start..i].parse().expect("digit run"))
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..i].to_string())
            }
            _ => {
                i += 1;
                match b {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    _ => {
                        let ch = text[start..].chars().next().unwrap_or('\u{fffd}');
                        return Err(ParseError {
                            offset: start,
                            expected: "a number, variable, operator or parenthesis".into(),
                            found: format!("character {ch:?}"),
                        });
                    }
                }
            }
        };
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
    ring: &'a Arc<Ring>,
    options: ParseOptions,
}

impl Parser<'_> {
    fn peek(&self) -> (Tok, usize) {
        self.tokens[self.pos].clone()
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.tokens[self.pos].clone();
        if !matches!(t.0, Tok::End) {
            self.pos += 1;
        }
        t
    }

    fn enter(&mut self, offset: usize) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > self.options.max_depth {
            return Err(ParseError {
                offset,
                expected: format!("nesting depth at most {}", self.options.max_depth),
                found: "deeper nesting".into(),
            });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while let Tok::Star = self.peek().0 {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if let (Tok::Minus, offset) = self.peek() {
            self.bump();
            self.enter(offset)?;
            let inner = self.factor()?;
            self.depth -= 1;
            return Ok(-&inner);
        }
        let base = self.base()?;
        if let Tok::Caret = self.peek().0 {
            self.bump();
            let (tok, offset) = self.bump();
            let exponent = match &tok {
                Tok::Int(n) => n
                    .to_u32()
                    .filter(|&e| e <= self.options.max_exponent)
                    .ok_or_else(|| ParseError {
                        offset,
                        expected: format!("exponent at most {}", self.options.max_exponent),
                        found: tok.describe(),
                    })?,
                other => {
                    return Err(ParseError {
                        offset,
                        expected: "a natural-number exponent".into(),
                        found: other.describe(),
                    })
                }
            };
            return Ok(base.pow(exponent));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Int(n) => {
                let value = if let Tok::Slash = self.peek().0 {
                    self.bump();
                    let (den_tok, den_offset) = self.bump();
                    match den_tok {
                        Tok::Int(d) if !d.is_zero() => Rational::new(n, d),
                        Tok::Int(_) => {
                            return Err(ParseError {
                                offset: den_offset,
                                expected: "a positive integer denominator".into(),
                                found: "0".into(),
                            })
                        }
                        other => {
                            return Err(ParseError {
                                offset: den_offset,
                                expected: "a positive integer denominator".into(),
                                found: other.describe(),
                            })
                        }
                    }
                } else {
                    Rational::from_integer(n)
                };
                Ok(Polynomial::constant(self.ring, value))
            }
            Tok::Ident(name) => match self.ring.index_of(&name) {
                Some(i) => Ok(Polynomial::var(self.ring, i).expect("index from ring")),
                None => Err(ParseError {
                    offset,
                    expected: format!("a variable of the ring ({})", self.ring.var_names().join(", ")),
                    found: format!("identifier `{name}`"),
                }),
            },
            Tok::LParen => {
                self.enter(offset)?;
                let inner = self.expr()?;
                self.depth -= 1;
                match self.bump() {
                    (Tok::RParen, _) => Ok(inner),
                    (other, off) => Err(ParseError {
                        offset: off,
                        expected: "')'".into(),
                        found: other.describe(),
                    }),
                }
            }
            other => Err(ParseError {
                offset,
                expected: "a number, variable or '('".into(),
                found: other.describe(),
            }),
        }
    }
}

/// Canonical rendering: descending grevlex terms, explicit `*` and `^`.
pub fn format_poly(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let names = p.ring().var_names();
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().iter().enumerate() {
        let negative = c.is_negative();
        match (idx, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        let mono = format_monomial(m, names);
        if mono.is_empty() {
            out.push_str(&format_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_rational(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

/// `p/q` in lowest terms, or `p` when the denominator is one.
pub fn format_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Inverse of [`format_rational`].
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

fn format_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (name, &e) in names.iter().zip(m.exponents()) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Ring> {
        Ring::new(["x", "y", "z"]).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_example_entries() {
        let r = ring();
        let p = parse_poly("2*z+2", &r).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Monomial::new(vec![0, 0, 1])), q(2, 1));
        assert_eq!(p.coeff(&Monomial::one(3)), q(2, 1));
        assert!(parse_poly("0", &r).unwrap().is_zero());
        let f = parse_poly("1 - x^2 - y^2 - z^2", &r).unwrap();
        assert_eq!(f.coeff(&Monomial::new(vec![2, 0, 0])), q(-1, 1));
        assert_eq!(f.num_terms(), 4);
    }

    #[test]
    fn formats_canonically() {
        let r = ring();
        assert_eq!(format_poly(&Polynomial::zero(&r)), "0");
        assert_eq!(format_poly(&parse_poly("2+2*z", &r).unwrap()), "2*z + 2");
        assert_eq!(
            format_poly(&parse_poly("-24 - 75/2*z", &r).unwrap()),
            "-75/2*z - 24"
        );
        assert_eq!(
            format_poly(&parse_poly("x*z + y^2 - x", &r).unwrap()),
            "y^2 + x*z - x"
        );
        assert_eq!(format_poly(&parse_poly("-1", &r).unwrap()), "-1");
        assert_eq!(format_poly(&parse_poly("-x", &r).unwrap()), "-x");
    }

    #[test]
    fn precedence() {
        let r = ring();
        let minus_sq = parse_poly("-x^2", &r).unwrap();
        assert_eq!(minus_sq, -&parse_poly("x*x", &r).unwrap());
        assert_eq!(parse_poly("--x", &r).unwrap(), parse_poly("x", &r).unwrap());
        assert_eq!(parse_poly("1/2^2", &r).unwrap(), parse_poly("1/4", &r).unwrap());
        assert_eq!(parse_poly("2*(x - -y)", &r).unwrap(), parse_poly("2*x+2*y", &r).unwrap());
        assert_eq!(parse_poly("x^0", &r).unwrap(), parse_poly("1", &r).unwrap());
        assert_eq!(parse_poly(" 6 / 4 ", &r).unwrap(), Polynomial::constant(&r, q(3, 2)));
    }

    #[test]
    fn rejects_implicit_multiplication() {
        let r = ring();
        let e = parse_poly("2z", &r).unwrap_err();
        assert_eq!(e.offset, 1);
        assert_eq!(e.found, "identifier `z`");
    }

    #[test]
    fn error_offsets() {
        let r = ring();
        let e = parse_poly("x + w", &r).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.expected.contains("x, y, z"));
        let e = parse_poly("3/0", &r).unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse_poly("x/y", &r).unwrap_err();
        assert_eq!(e.offset, 1);
        let e = parse_poly("(x", &r).unwrap_err();
        assert_eq!((e.offset, e.found.as_str()), (2, "end of input"));
        let e = parse_poly("1.5", &r).unwrap_err();
        assert_eq!(e.offset, 1);
        let e = parse_poly("", &r).unwrap_err();
        assert_eq!(e.offset, 0);
        let e = parse_poly("x^-1", &r).unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse_poly("x^2^3", &r).unwrap_err();
        assert_eq!(e.offset, 3);
        assert!(parse_poly("é", &r).is_err());
    }

    #[test]
    fn depth_cap() {
        let r = ring();
        let deep = format!("{}x{}", "(".repeat(300), ")".repeat(300));
        let e = parse_poly(&deep, &r).unwrap_err();
        assert!(e.expected.contains("nesting depth"));
        let shallow = format!("{}x{}", "(".repeat(100), ")".repeat(100));
        assert!(parse_poly(&shallow, &r).is_ok());
        let minus = format!("{}x", "-".repeat(1000));
        assert!(parse_poly(&minus, &r).is_err());
        let opts = ParseOptions {
            max_depth: 2,
            ..ParseOptions::default()
        };
        assert!(parse_poly_with("((x))", &r, opts).is_ok());
        assert!(parse_poly_with("(((x)))", &r, opts).is_err());
    }

    #[test]
    fn exponent_cap() {
        let r = ring();
        assert!(parse_poly("x^1001", &r).is_err());
        assert!(parse_poly("x^99999999999999999999", &r).is_err());
        assert_eq!(parse_poly("x^1000", &r).unwrap().total_degree(), Some(1000));
    }

    #[test]
    fn rationals_round_trip() {
        for s in ["0", "-3", "7/2", "-1/3"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational("4/6"), Some(q(2, 3)));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("a").is_none());
    }
}
