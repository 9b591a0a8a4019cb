//! Recursive-descent parser for metric-component expressions.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = "-" unary | power ;
//! power    = primary [ "^" exponent ] ;
//! exponent = [ "-" | "+" ] integer | "(" [ "-" | "+" ] integer ")" ;
//! primary  = number | "x1" | "x2" | "x3" | "pi"
//!          | function "(" expr ")" | "(" expr ")" ;
//! function = "sin" | "cos" | "tan" | "exp" | "log"
//!          | "sqrt" | "sinh" | "cosh" | "tanh" ;
//! number   = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
//!          | "." digits [ exponent part ] ;
//! ```
//!
//! Binding strength: `^` > unary minus > `*` `/` > `+` `-`; binary operators
//! associate to the left.

use crate::error::{Error, Result};
use crate::jets::expr::{Expr, Func};

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let n = self.exponent()?;
            Ok(Expr::Pow(Box::new(base), n))
        } else {
            Ok(base)
        }
    }

    fn exponent(&mut self) -> Result<i32> {
        let paren = self.eat(b'(');
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("exponent must be an integer literal"));
        }
        if matches!(self.src.get(self.pos), Some(b'.' | b'e' | b'E')) {
            return Err(self.error("exponent must be an integer literal"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let magnitude: i32 = digits.parse().map_err(|_| Error::Syntax {
            offset: start,
            message: "exponent out of range".into(),
        })?;
        if paren {
            self.expect(b')')?;
        }
        Ok(if negative { -magnitude } else { magnitude })
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(Error::Syntax {
                offset: start,
                message: "malformed number".into(),
            });
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                return Err(self.error("malformed exponent in number"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii number");
        text.parse::<f64>()
            .map(Expr::Const)
            .map_err(|_| Error::Syntax {
                offset: start,
                message: format!("malformed number `{text}`"),
            })
    }

    fn identifier(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        match name {
            "x1" => return Ok(Expr::Var(0)),
            "x2" => return Ok(Expr::Var(1)),
            "x3" => return Ok(Expr::Var(2)),
            "pi" => return Ok(Expr::Const(std::f64::consts::PI)),
            _ => {}
        }
        let Some(func) = Func::from_name(name) else {
            return Err(Error::UnknownSymbol {
                name: name.to_string(),
                offset: start,
            });
        };
        if !self.eat(b'(') {
            return Err(self.error(format!("expected `(` after function `{name}`")));
        }
        let arg = self.expr()?;
        self.expect(b')')?;
        Ok(Expr::Call(func, Box::new(arg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(k: usize) -> Box<Expr> {
        Box::new(Expr::Var(k))
    }

    #[test]
    fn reads_sum_of_product_and_call() {
        let e = parse("x1*x1 + sin(x2)").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Mul(var(0), var(0))),
                Box::new(Expr::Call(Func::Sin, var(1)))
            )
        );
        assert_eq!(parse("1").unwrap(), Expr::Const(1.0));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("-x1^2").unwrap(),
            Expr::Neg(Box::new(Expr::Pow(var(0), 2)))
        );
        assert_eq!(
            parse("x1 - x2 - x3").unwrap(),
            Expr::Sub(Box::new(Expr::Sub(var(0), var(1))), var(2))
        );
        assert_eq!(
            parse("x1 / x2 * x3").unwrap(),
            Expr::Mul(Box::new(Expr::Div(var(0), var(1))), var(2))
        );
        assert_eq!(
            parse("-x1*x2").unwrap(),
            Expr::Mul(Box::new(Expr::Neg(var(0))), var(1))
        );
        assert_eq!(parse("x3^(-2)").unwrap(), Expr::Pow(var(2), -2));
        assert_eq!(parse("x3^-2").unwrap(), Expr::Pow(var(2), -2));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("1.5e-3").unwrap(), Expr::Const(1.5e-3));
        assert_eq!(parse(".25").unwrap(), Expr::Const(0.25));
        assert_eq!(parse("2.").unwrap(), Expr::Const(2.0));
    }

    #[test]
    fn exp_example_value() {
        let v = parse("exp(2*(x1^2))")
            .unwrap()
            .eval(&[0.3, 0.0, 0.0])
            .unwrap();
        // e^0.18
        assert!((v - 1.197_217_363_121_810_3).abs() < 1e-15);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse("x1 + * x2").unwrap_err() {
            Error::Syntax { offset, .. } => assert_eq!(offset, 5),
            e => panic!("unexpected {e:?}"),
        }
        match parse("(x1 + x2").unwrap_err() {
            Error::Syntax { offset, .. } => assert_eq!(offset, 8),
            e => panic!("unexpected {e:?}"),
        }
        assert_eq!(parse("x1^2.5").unwrap_err().name(), "SyntaxError");
        assert_eq!(parse("x1^x2").unwrap_err().name(), "SyntaxError");
        assert_eq!(parse("sin x1").unwrap_err().name(), "SyntaxError");
        assert_eq!(parse("").unwrap_err().name(), "SyntaxError");
        assert_eq!(parse("x1 x2").unwrap_err().name(), "SyntaxError");
    }

    #[test]
    fn unknown_symbols() {
        match parse("2*y + 1").unwrap_err() {
            Error::UnknownSymbol { name, offset } => {
                assert_eq!(name, "y");
                assert_eq!(offset, 2);
            }
            e => panic!("unexpected {e:?}"),
        }
        assert_eq!(parse("x4").unwrap_err().name(), "UnknownSymbol");
        assert_eq!(parse("atan(x1)").unwrap_err().name(), "UnknownSymbol");
    }
}
