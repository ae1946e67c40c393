//! Infix syntax: `+ - * ^`, `sin( ) cos( ) exp( )`, variables `t x y z`,
//! the constant `pi` and scientific-notation literals. Exponents must be
//! integers, e.g. `x^2`, `(y-t)^-1`, `z^(-2)`.

use super::{ScalarExpr, Var};
use crate::error::{Error, Result};

pub fn parse(src: &str) -> Result<ScalarExpr> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            position: self.pos,
            message: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
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

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.peek() == Some('/') {
                return Err(self.error("division is not part of the expression vocabulary"));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ScalarExpr> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarExpr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = &self.src[start..self.pos];
        let mut n: i32 = digits
            .parse()
            .map_err(|_| self.error("exponent must be an integer literal"))?;
        if neg {
            n = -n;
        }
        if paren {
            self.expect(')')?;
        }
        Ok(base.powi(n))
    }

    fn atom(&mut self) -> Result<ScalarExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek_raw(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let ident = &self.src[start..self.pos];
                match ident {
                    "t" => Ok(ScalarExpr::var(Var::T)),
                    "x" => Ok(ScalarExpr::var(Var::X)),
                    "y" => Ok(ScalarExpr::var(Var::Y)),
                    "z" => Ok(ScalarExpr::var(Var::Z)),
                    "pi" => Ok(ScalarExpr::constant(std::f64::consts::PI)),
                    "sin" | "cos" | "exp" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        Ok(match ident {
                            "sin" => arg.sin(),
                            "cos" => arg.cos(),
                            _ => arg.exp(),
                        })
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error(format!("unknown identifier `{ident}`")))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected character `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<ScalarExpr> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = self.pos;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if j < bytes.len() && bytes[j].is_ascii_digit() {
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        self.pos = i;
        self.src[start..i]
            .parse::<f64>()
            .map(ScalarExpr::constant)
            .map_err(|_| Error::Parse {
                position: start,
                message: format!("malformed number `{}`", &self.src[start..i]),
            })
    }
}
