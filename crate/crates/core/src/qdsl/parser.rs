//! Lexer and recursive-descent parser for theta expressions.
//!
//! ```text
//! expr := term (('+'|'-') term)* ;
//! term := atom ('*' atom)* ;
//! atom := INT | qpow | call ;
//! qpow := 'q' ('^' INT)? ;
//! call := ('phi'|'psi') '(' 'q' ('^' INT)? ')' ('^' INT)? ;
//! ```
//!
//! An integer written directly before `q` (as in `2q^4`) is read as a
//! product, and a single leading `-` negates the first term.

use std::fmt;

use thiserror::Error;

use super::ast::{Factor, Term, ThetaExpr};
use crate::seq::ThetaFunc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Unexpected {
        found: String,
        expected: Vec<&'static str>,
    },
    InvalidCharacter(char),
    UnknownIdentifier(String),
    IntegerOverflow,
    ZeroArgument,
    ZeroPower,
    ZeroCoefficient,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {}, found {found}", expected.join(" or "))
            }
            ParseErrorKind::InvalidCharacter(c) => write!(f, "invalid character {c:?}"),
            ParseErrorKind::UnknownIdentifier(s) => {
                write!(f, "unknown identifier {s:?} (expected phi, psi or q)")
            }
            ParseErrorKind::IntegerOverflow => f.write_str("integer literal out of range"),
            ParseErrorKind::ZeroArgument => f.write_str("theta argument exponent must be at least 1"),
            ParseErrorKind::ZeroPower => f.write_str("theta power must be at least 1"),
            ParseErrorKind::ZeroCoefficient => f.write_str("term coefficient must be nonzero"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Q,
    Phi,
    Psi,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("integer {v}"),
            Tok::Q => "'q'".into(),
            Tok::Phi => "'phi'".into(),
            Tok::Psi => "'psi'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, column);
        let err = |kind| ParseError { line: start_line, column: start_col, kind };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                column += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_digit() {
            let mut value: u64 = 0;
            while let Some(&d) = chars.peek() {
                let Some(digit) = d.to_digit(10) else { break };
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(digit as u64))
                    .ok_or_else(|| err(ParseErrorKind::IntegerOverflow))?;
                chars.next();
                column += 1;
            }
            Tok::Int(value)
        } else if c.is_ascii_alphabetic() {
            let mut ident = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_alphanumeric() {
                    break;
                }
                ident.push(d);
                chars.next();
                column += 1;
            }
            match ident.as_str() {
                "q" => Tok::Q,
                "phi" => Tok::Phi,
                "psi" => Tok::Psi,
                _ => return Err(err(ParseErrorKind::UnknownIdentifier(ident))),
            }
        } else {
            let tok = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => return Err(err(ParseErrorKind::InvalidCharacter(other))),
            };
            chars.next();
            column += 1;
            tok
        };
        tokens.push(Token { tok, line: start_line, column: start_col });
    }
    tokens.push(Token { tok: Tok::Eof, line, column });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, token: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError { line: token.line, column: token.column, kind }
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        let t = self.peek();
        self.error_at(t, ParseErrorKind::Unexpected { found: t.tok.describe(), expected })
    }

    fn expect(&mut self, want: Tok, label: &'static str) -> Result<Token, ParseError> {
        if self.peek().tok == want {
            Ok(self.bump())
        } else {
            Err(self.unexpected(vec![label]))
        }
    }

    fn expect_int(&mut self) -> Result<(u64, Token), ParseError> {
        match self.peek().tok {
            Tok::Int(v) => Ok((v, self.bump())),
            _ => Err(self.unexpected(vec!["integer"])),
        }
    }

    /// Optional `'^' INT`.
    fn exponent(&mut self) -> Result<Option<(u64, Token)>, ParseError> {
        if self.peek().tok == Tok::Caret {
            self.bump();
            Ok(Some(self.expect_int()?))
        } else {
            Ok(None)
        }
    }

    fn expr(&mut self) -> Result<ThetaExpr, ParseError> {
        let mut terms = Vec::new();
        let negate_first = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        terms.push(self.term(negate_first)?);
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term(false)?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(self.term(true)?);
                }
                Tok::Eof => break,
                _ => return Err(self.unexpected(vec!["'*'", "'+'", "'-'", "end of input"])),
            }
        }
        Ok(ThetaExpr { terms })
    }

    fn term(&mut self, negate: bool) -> Result<Term, ParseError> {
        let start = self.peek().clone();
        let mut coefficient: i128 = 1;
        let mut qexponent: u64 = 0;
        let mut factors = Vec::new();
        loop {
            let tok = self.peek().clone();
            match tok.tok {
                Tok::Int(v) => {
                    self.bump();
                    coefficient = coefficient
                        .checked_mul(v as i128)
                        .filter(|c| *c <= i64::MAX as i128 + 1)
                        .ok_or_else(|| self.error_at(&tok, ParseErrorKind::IntegerOverflow))?;
                    // `2q^4` reads as `2*q^4`
                    if self.peek().tok == Tok::Q {
                        continue;
                    }
                }
                Tok::Q => {
                    self.bump();
                    let e = self.exponent()?.map_or(1, |(e, _)| e);
                    qexponent = qexponent
                        .checked_add(e)
                        .ok_or_else(|| self.error_at(&tok, ParseErrorKind::IntegerOverflow))?;
                }
                Tok::Phi | Tok::Psi => {
                    factors.push(self.call()?);
                }
                _ => return Err(self.unexpected(vec!["integer", "'q'", "'phi'", "'psi'"])),
            }
            if self.peek().tok == Tok::Star {
                self.bump();
            } else {
                break;
            }
        }
        if coefficient == 0 {
            return Err(self.error_at(&start, ParseErrorKind::ZeroCoefficient));
        }
        let signed = if negate { -coefficient } else { coefficient };
        let coefficient = i64::try_from(signed)
            .map_err(|_| self.error_at(&start, ParseErrorKind::IntegerOverflow))?;
        Ok(Term { coefficient, qexponent, factors })
    }

    fn call(&mut self) -> Result<Factor, ParseError> {
        let head = self.bump();
        let func = match head.tok {
            Tok::Phi => ThetaFunc::Phi,
            _ => ThetaFunc::Psi,
        };
        self.expect(Tok::LParen, "'('")?;
        self.expect(Tok::Q, "'q'")?;
        let arg = match self.exponent()? {
            None => 1,
            Some((0, tok)) => return Err(self.error_at(&tok, ParseErrorKind::ZeroArgument)),
            Some((k, _)) => k,
        };
        if self.peek().tok != Tok::RParen {
            return Err(self.unexpected(vec!["'^'", "')'"]));
        }
        self.bump();
        let power = match self.exponent()? {
            None => 1,
            Some((0, tok)) => return Err(self.error_at(&tok, ParseErrorKind::ZeroPower)),
            Some((p, tok)) => {
                u32::try_from(p).map_err(|_| self.error_at(&tok, ParseErrorKind::IntegerOverflow))?
            }
        };
        Ok(Factor { func, arg, power })
    }
}

/// Parses a theta expression.
pub fn parse(text: &str) -> Result<ThetaExpr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    parser.expr()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(func: ThetaFunc, arg: u64, power: u32) -> Factor {
        Factor { func, arg, power }
    }

    #[test]
    fn two_term_sum() {
        let e = parse("phi(q^6)*psi(q^4) + q*phi(q^2)*psi(q^12)").unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(
            e.terms[1],
            Term {
                coefficient: 1,
                qexponent: 1,
                factors: vec![f(ThetaFunc::Phi, 2, 1), f(ThetaFunc::Psi, 12, 1)],
            }
        );
    }

    #[test]
    fn powers_and_coefficients() {
        let e = parse("psi(q)^2").unwrap();
        assert_eq!(e.terms, vec![Term { coefficient: 1, qexponent: 0, factors: vec![f(ThetaFunc::Psi, 1, 2)] }]);
        let e = parse("2q^4*psi(q^32)").unwrap();
        assert_eq!(e.terms, vec![Term { coefficient: 2, qexponent: 4, factors: vec![f(ThetaFunc::Psi, 32, 1)] }]);
        let e = parse("2 * 3 * q * q^2").unwrap();
        assert_eq!(e.terms, vec![Term { coefficient: 6, qexponent: 3, factors: vec![] }]);
        let e = parse("1").unwrap();
        assert_eq!(e.terms, vec![Term { coefficient: 1, qexponent: 0, factors: vec![] }]);
    }

    #[test]
    fn subtraction_folds_into_coefficients() {
        let e = parse("phi(q) - 2q*psi(q^8) - q^3").unwrap();
        let coeffs: Vec<i64> = e.terms.iter().map(|t| t.coefficient).collect();
        assert_eq!(coeffs, vec![1, -2, -1]);
        let e = parse("-psi(q)").unwrap();
        assert_eq!(e.terms[0].coefficient, -1);
    }

    #[test]
    fn whitespace_and_comments() {
        let a = parse("  phi( q ^ 2 ) ^3 # trailing\n + q").unwrap();
        let b = parse("phi(q^2)^3+q").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("phi(q) psi(q)").unwrap_err();
        assert_eq!((err.line, err.column), (1, 8));
        match err.kind {
            ParseErrorKind::Unexpected { expected, .. } => assert!(expected.contains(&"'*'")),
            other => panic!("unexpected error {other:?}"),
        }

        let err = parse("phi(q^0)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ZeroArgument);
        assert_eq!(err.column, 7);

        assert_eq!(parse("psi(q)^0").unwrap_err().kind, ParseErrorKind::ZeroPower);
        assert_eq!(parse("0*phi(q)").unwrap_err().kind, ParseErrorKind::ZeroCoefficient);
        assert!(matches!(parse("chi(q)").unwrap_err().kind, ParseErrorKind::UnknownIdentifier(_)));
        assert!(matches!(parse("phi(q").unwrap_err().kind, ParseErrorKind::Unexpected { .. }));
        assert!(matches!(parse("").unwrap_err().kind, ParseErrorKind::Unexpected { .. }));
        assert!(matches!(parse("1 +").unwrap_err().kind, ParseErrorKind::Unexpected { .. }));
        assert!(matches!(parse("phi(2)").unwrap_err().kind, ParseErrorKind::Unexpected { .. }));
        assert_eq!(
            parse("99999999999999999999").unwrap_err().kind,
            ParseErrorKind::IntegerOverflow
        );
        assert!(matches!(parse("phi(q)/2").unwrap_err().kind, ParseErrorKind::InvalidCharacter('/')));

        let err = parse("phi(q)\n  + psi(q^0)").unwrap_err();
        assert_eq!((err.line, err.column), (2, 11));
    }

    #[test]
    fn printing() {
        for text in [
            "phi(q^6)*psi(q^4) + q*phi(q^2)*psi(q^12)",
            "2q^4*psi(q^32)",
            "psi(q)^2",
            "8*psi(q)^3",
            "1",
            "q",
            "-3q^2 - 5",
            "phi(q) - 2q*psi(q^8)",
        ] {
            assert_eq!(parse(text).unwrap().to_string(), text);
        }
    }
}
