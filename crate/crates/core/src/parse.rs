//! A small expression language for phase-space symbols, used by the
//! command-line surface to build custom symbol families.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! family := name | expr (';' expr)*
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*      division by constants only
//! unary  := '-' unary | power
//! power  := atom ['^' ['-'] integer]        negative exponents on 'r' only
//! atom   := integer | 'i' | 'mu' | 'p1'..'p3' | 'q1'..'q3' | 'r' | '(' expr ')'
//! ```
//!
//! `r` is the radius `|q|`; any integer power of it stays inside the exact
//! coefficient class. `mu` is the coupling parameter and `i` the imaginary
//! unit.

use crate::error::{Error, Result};
use crate::families;
use crate::radial::RadialFunction;
use crate::rational::GaussianRational;
use crate::symbol::SymbolFunction;

/// Largest allowed exponent magnitude, guarding against accidental blowup.
const MAX_EXPONENT: i64 = 64;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(i64),
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

struct Lexer<'a> {
    input: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Lexer {
            input,
            chars: input.char_indices().peekable(),
        }
    }

    fn next_token(&mut self) -> Result<(usize, Token)> {
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_whitespace() {
                self.chars.next();
            } else {
                break;
            }
        }
        let Some(&(pos, c)) = self.chars.peek() else {
            return Ok((self.input.len(), Token::End));
        };
        let simple = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '/' => Some(Token::Slash),
            '^' => Some(Token::Caret),
            '(' => Some(Token::LParen),
            ')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            self.chars.next();
            return Ok((pos, tok));
        }
        if c.is_ascii_digit() {
            let mut end = pos;
            while let Some(&(p, d)) = self.chars.peek() {
                if d.is_ascii_digit() {
                    end = p + d.len_utf8();
                    self.chars.next();
                } else {
                    break;
                }
            }
            let text = &self.input[pos..end];
            let value: i64 = text.parse().map_err(|_| {
                Error::InvalidInput(format!(
                    "integer literal too large at position {pos}: {text}"
                ))
            })?;
            return Ok((pos, Token::Int(value)));
        }
        if c.is_ascii_alphabetic() {
            let mut end = pos;
            while let Some(&(p, d)) = self.chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    end = p + d.len_utf8();
                    self.chars.next();
                } else {
                    break;
                }
            }
            return Ok((pos, Token::Ident(self.input[pos..end].to_string())));
        }
        Err(Error::InvalidInput(format!(
            "unexpected character '{c}' at position {pos}"
        )))
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    cursor: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Self> {
        let mut lexer = Lexer::new(input);
        let mut tokens = Vec::new();
        loop {
            let (pos, tok) = lexer.next_token()?;
            let done = tok == Token::End;
            tokens.push((pos, tok));
            if done {
                break;
            }
        }
        Ok(Parser { tokens, cursor: 0 })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.cursor].1
    }

    fn pos(&self) -> usize {
        self.tokens[self.cursor].0
    }

    fn advance(&mut self) -> Token {
        let tok = self.tokens[self.cursor].1.clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        tok
    }

    fn expect(&mut self, expected: &Token, what: &str) -> Result<()> {
        if self.peek() == expected {
            self.advance();
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "expected {what} at position {}",
                self.pos()
            )))
        }
    }

    fn expr(&mut self) -> Result<SymbolFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Token::Plus => {
                    self.advance();
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.advance();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SymbolFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Token::Star => {
                    self.advance();
                    acc = acc.mul(&self.unary()?);
                }
                Token::Slash => {
                    let pos = self.pos();
                    self.advance();
                    let divisor = self.unary()?;
                    let c = constant_of(&divisor).ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "division at position {pos} requires a constant divisor"
                        ))
                    })?;
                    let inv = invert(&c).ok_or_else(|| {
                        Error::InvalidInput(format!("division by zero at position {pos}"))
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<SymbolFunction> {
        if self.peek() == &Token::Minus {
            self.advance();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<SymbolFunction> {
        let pos = self.pos();
        let (base, is_radius) = self.atom()?;
        if self.peek() != &Token::Caret {
            return Ok(base);
        }
        self.advance();
        let negative = if self.peek() == &Token::Minus {
            self.advance();
            true
        } else {
            false
        };
        let exp_pos = self.pos();
        let Token::Int(raw) = self.advance() else {
            return Err(Error::InvalidInput(format!(
                "expected integer exponent at position {exp_pos}"
            )));
        };
        let exponent = if negative { -raw } else { raw };
        if exponent.abs() > MAX_EXPONENT {
            return Err(Error::InvalidInput(format!(
                "exponent {exponent} at position {exp_pos} exceeds the limit {MAX_EXPONENT}"
            )));
        }
        if is_radius {
            return Ok(radius_power(exponent));
        }
        if exponent < 0 {
            return Err(Error::InvalidInput(format!(
                "negative exponent at position {exp_pos} is only supported on r"
            )));
        }
        let mut acc = SymbolFunction::one();
        for _ in 0..exponent {
            acc = acc.mul(&base);
        }
        let _ = pos;
        Ok(acc)
    }

    /// Returns the parsed atom and whether it was the bare radius `r`,
    /// which admits negative exponents.
    fn atom(&mut self) -> Result<(SymbolFunction, bool)> {
        let pos = self.pos();
        match self.advance() {
            Token::Int(n) => Ok((
                SymbolFunction::constant(GaussianRational::from_int(n)),
                false,
            )),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(&Token::RParen, "')'")?;
                Ok((inner, false))
            }
            Token::Ident(name) => match name.as_str() {
                "i" => Ok((SymbolFunction::constant(GaussianRational::i()), false)),
                "mu" => Ok((SymbolFunction::from_radial(RadialFunction::mu()), false)),
                "r" => Ok((radius_power(1), true)),
                "p1" => Ok((SymbolFunction::p(0), false)),
                "p2" => Ok((SymbolFunction::p(1), false)),
                "p3" => Ok((SymbolFunction::p(2), false)),
                "q1" => Ok((SymbolFunction::q(0), false)),
                "q2" => Ok((SymbolFunction::q(1), false)),
                "q3" => Ok((SymbolFunction::q(2), false)),
                _ => Err(Error::InvalidInput(format!(
                    "unknown identifier '{name}' at position {pos}"
                ))),
            },
            _ => Err(Error::InvalidInput(format!(
                "expected a value at position {pos}"
            ))),
        }
    }
}

/// `|q|^k` for any integer `k`: even nonnegative powers are polynomials,
/// odd ones carry one factor of the inverse radius, negative powers are
/// inverse radii directly.
fn radius_power(k: i64) -> SymbolFunction {
    if k < 0 {
        return SymbolFunction::from_radial(RadialFunction::inverse_radius((-k) as u32));
    }
    let square = {
        let mut s = RadialFunction::zero();
        for axis in 0..3 {
            let mut alpha = [0u16; 3];
            alpha[axis] = 2;
            s = s.add(&RadialFunction::from_term(
                0,
                0,
                alpha,
                GaussianRational::one(),
            ));
        }
        s
    };
    let half = if k % 2 == 0 { k / 2 } else { (k + 1) / 2 };
    let mut acc = RadialFunction::one();
    for _ in 0..half {
        acc = acc.mul(&square);
    }
    if k % 2 != 0 {
        acc = acc.mul(&RadialFunction::inverse_radius(1));
    }
    SymbolFunction::from_radial(acc)
}

/// Extract the value of a constant symbol, if it is one.
fn constant_of(sym: &SymbolFunction) -> Option<GaussianRational> {
    if sym.is_zero() {
        return Some(GaussianRational::zero());
    }
    if sym.num_terms() != 1 {
        return None;
    }
    let (p_alpha, rf) = sym.terms().next()?;
    if *p_alpha != [0, 0, 0] || rf.num_terms() != 1 {
        return None;
    }
    let (key, c) = rf.terms().next()?;
    if key.mu == 0 && key.m == 0 && key.alpha == [0, 0, 0] {
        Some(c.clone())
    } else {
        None
    }
}

/// Multiplicative inverse in the Gaussian rationals.
fn invert(c: &GaussianRational) -> Option<GaussianRational> {
    if c.is_zero() {
        return None;
    }
    let norm = &c.re * &c.re + &c.im * &c.im;
    Some(GaussianRational::new(&c.re / &norm, -(&c.im / &norm)))
}

/// Parse one symbol expression.
pub fn parse_symbol(input: &str) -> Result<SymbolFunction> {
    let mut parser = Parser::new(input)?;
    let sym = parser.expr()?;
    if parser.peek() != &Token::End {
        return Err(Error::InvalidInput(format!(
            "unexpected trailing input at position {}",
            parser.pos()
        )));
    }
    Ok(sym)
}

/// Parse a family specification: a family name, or a `;`-separated list of
/// symbol expressions.
pub fn parse_family(input: &str) -> Result<Vec<SymbolFunction>> {
    let trimmed = input.trim();
    if let Some(family) = families::named_family(trimmed) {
        return Ok(family);
    }
    if trimmed.is_empty() {
        return Err(Error::InvalidInput(String::from(
            "empty family specification",
        )));
    }
    trimmed.split(';').map(parse_symbol).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex;

    #[test]
    fn coordinates_and_products() {
        assert_eq!(parse_symbol("p1").unwrap(), SymbolFunction::p(0));
        assert_eq!(
            parse_symbol("p1 * q2").unwrap(),
            SymbolFunction::p(0).mul(&SymbolFunction::q(1))
        );
    }

    #[test]
    fn precedence_and_parentheses() {
        let direct = parse_symbol("p1 + q1*q2").unwrap();
        let expected = SymbolFunction::p(0).add(&SymbolFunction::q(0).mul(&SymbolFunction::q(1)));
        assert_eq!(direct, expected);
        let square = parse_symbol("(p1 + q1)^2").unwrap();
        let p = SymbolFunction::p(0);
        let q = SymbolFunction::q(0);
        let expected = p
            .mul(&p)
            .add(&p.mul(&q).scale(&GaussianRational::from_int(2)))
            .add(&q.mul(&q));
        assert_eq!(square, expected);
    }

    #[test]
    fn rational_coefficients_and_units() {
        let f = parse_symbol("3/2 * mu * r^-3 * q1").unwrap();
        let expected = SymbolFunction::from_radial(RadialFunction::from_term(
            1,
            3,
            multiindex::unit(0),
            GaussianRational::from_ratio(3, 2),
        ));
        assert_eq!(f, expected);
        let ii = parse_symbol("i*i").unwrap();
        assert_eq!(ii, SymbolFunction::constant(GaussianRational::from_int(-1)));
    }

    #[test]
    fn radius_powers_are_consistent() {
        let r2 = parse_symbol("r^2").unwrap();
        let expected = parse_symbol("q1^2 + q2^2 + q3^2").unwrap();
        assert_eq!(r2, expected);
        assert_eq!(parse_symbol("r*r").unwrap(), expected);
        assert_eq!(parse_symbol("r * r^-1").unwrap(), SymbolFunction::one());
        assert_eq!(parse_symbol("r^0").unwrap(), SymbolFunction::one());
    }

    #[test]
    fn unary_minus_and_subtraction() {
        assert_eq!(parse_symbol("-p1").unwrap(), SymbolFunction::p(0).neg());
        assert_eq!(parse_symbol("p1 - p1").unwrap(), SymbolFunction::zero());
    }

    #[test]
    fn division_by_constants_only() {
        let f = parse_symbol("p1 / 2").unwrap();
        assert_eq!(
            f,
            SymbolFunction::p(0).scale(&GaussianRational::from_ratio(1, 2))
        );
        assert!(parse_symbol("p1 / q1").is_err());
        assert!(parse_symbol("p1 / 0").is_err());
    }

    #[test]
    fn rejected_inputs() {
        assert!(parse_symbol("x1").is_err());
        assert!(parse_symbol("p1 +").is_err());
        assert!(parse_symbol("p1^-1").is_err());
        assert!(parse_symbol("(p1").is_err());
        assert!(parse_symbol("p1 q1").is_err());
        assert!(parse_symbol("r^100").is_err());
    }

    #[test]
    fn family_specifications() {
        assert_eq!(parse_family("coordinate").unwrap().len(), 7);
        assert_eq!(parse_family("quadratic").unwrap().len(), 32);
        let custom = parse_family("p1; q2*r^-1; 1").unwrap();
        assert_eq!(custom.len(), 3);
        assert_eq!(custom[2], SymbolFunction::one());
        assert!(parse_family("").is_err());
        assert!(parse_family("p1;; q2").is_err());
    }
}
