//! Recursive-descent parser for profile functions `f(t)`.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := '-' factor | base ('^' exponent)?
//! base     := rational | 't' | 'pi' | '(' expr ')' | func '(' expr ')'
//! func     := abs | ln | exp | sin | cos
//! exponent := integer | '(' integer '/' positive-integer ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! A rational literal binds tighter than `^`, so `6/2^2` is `(6/2)^2`.

use num::bigint::BigInt;
use num::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::{Expr, Func, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown identifier `{name}` at column {column}")]
    UnknownIdentifier { column: usize, name: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Num(digits.parse().expect("ascii digits")), column));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), column));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), column));
            i += 1;
        } else {
            return Err(ParseError::Syntax {
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

/// Parses the text of a profile function.
pub fn parse_f(text: &str) -> Result<Expr, ParseError> {
    let mut p = Lexer {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        other => Err(p.error(format!("unexpected {}", describe(other)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".into(),
    }
}

impl Lexer {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> ParseError {
        ParseError::Syntax {
            column: self.column(),
            message,
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", describe(self.peek()))))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = lhs.add(self.term()?);
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = lhs.sub(self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = lhs.mul(self.factor()?);
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = lhs.div(self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let e = self.exponent()?;
            return Ok(base.rational_pow(e));
        }
        Ok(base)
    }

    fn signed_integer(&mut self) -> Result<BigInt, ParseError> {
        let negative = if *self.peek() == Tok::Sym('-') {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(if negative { -n } else { n })
            }
            other => Err(self.error(format!("expected integer, found {}", describe(&other)))),
        }
    }

    fn positive_integer(&mut self) -> Result<BigInt, ParseError> {
        let column = self.column();
        match self.bump() {
            Tok::Num(n) if !n.is_zero() => Ok(n),
            other => Err(ParseError::Syntax {
                column,
                message: format!("expected positive integer, found {}", describe(&other)),
            }),
        }
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        let column = self.column();
        let r = if *self.peek() == Tok::Sym('(') {
            self.bump();
            let num = self.signed_integer()?;
            let den = if *self.peek() == Tok::Sym('/') {
                self.bump();
                self.positive_integer()?
            } else {
                BigInt::from(1)
            };
            self.expect(')')?;
            Rational::new(num, den)
        } else {
            Rational::from_integer(self.signed_integer()?)
        };
        if r.abs().to_integer().to_i64().is_none_or(|v| v > 64) {
            return Err(ParseError::Syntax {
                column,
                message: format!("exponent {r} out of range"),
            });
        }
        Ok(r)
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let column = self.column();
        let tok = self.peek().clone();
        if !matches!(tok, Tok::End | Tok::Sym(')' | '*' | '/' | '+' | '^')) {
            self.bump();
        }
        match tok {
            Tok::Num(n) => {
                let is_literal_fraction =
                    *self.peek() == Tok::Sym('/') && matches!(self.peek_at(1), Tok::Num(_));
                if is_literal_fraction {
                    self.bump();
                    let den = self.positive_integer()?;
                    Ok(Expr::Const(Rational::new(n, den)))
                } else {
                    Ok(Expr::Const(Rational::from_integer(n)))
                }
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if name == "t" {
                    return Ok(Expr::Var);
                }
                if name == "pi" {
                    return Ok(Expr::Pi);
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(ParseError::UnknownIdentifier { column, name });
                };
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::apply(func, arg))
            }
            other => {
                Err(ParseError::Syntax {
                    column,
                    message: format!("expected a number, `t`, `(` or a function, found {}", describe(&other)),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn grammar_productions() {
        assert_eq!(parse_f("t^-2").unwrap(), Expr::Pow(Box::new(Expr::Var), -2));
        assert_eq!(
            parse_f("abs(t)^(1/2)").unwrap(),
            Expr::RationalPow(Box::new(Expr::apply(Func::Abs, Expr::Var)), ratio(1, 2))
        );
        assert_eq!(
            parse_f("t^-2 * cos(ln(t))").unwrap(),
            Expr::Var
                .pow(-2)
                .mul(Expr::apply(Func::Cos, Expr::apply(Func::Ln, Expr::Var)))
        );
    }

    #[test]
    fn rational_literals_and_precedence() {
        assert_eq!(parse_f("3/4").unwrap(), Expr::Const(ratio(3, 4)));
        assert_eq!(parse_f("6/2^2").unwrap(), Expr::Const(int(3)).pow(2));
        assert_eq!(parse_f("t/2").unwrap(), Expr::Var.div(Expr::int(2)));
        assert_eq!(parse_f("2^(4/2)").unwrap(), Expr::int(2).pow(2));
        let e = parse_f("1 - 2*t + t^2").unwrap();
        assert_eq!(e.eval(&int(3)).unwrap(), int(4));
        assert_eq!(parse_f("-t^2").unwrap().eval(&int(3)).unwrap(), int(-9));
        assert_eq!(parse_f("2*pi").unwrap(), Expr::int(2).mul(Expr::Pi));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_f("t + foo(t)"),
            Err(ParseError::UnknownIdentifier {
                column: 5,
                name: "foo".into()
            })
        );
        match parse_f("t^") {
            Err(ParseError::Syntax { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_f("(t"), Err(ParseError::Syntax { column: 3, .. })));
        assert!(matches!(parse_f("t $ 2"), Err(ParseError::Syntax { column: 3, .. })));
        assert!(parse_f("t^(1/0)").is_err());
        assert!(parse_f("").is_err());
    }
}
