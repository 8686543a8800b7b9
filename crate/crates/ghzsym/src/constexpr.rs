//! Constant expressions for state parameters: decimals, `sqrtN`, `sqrt(…)`,
//! parentheses, `+ - * /` and unary signs, e.g. `-1/(4*sqrt3)`.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    /// Byte offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ExprError {}

/// Evaluates `text` to a finite `f64`.
pub fn eval(text: &str) -> Result<f64, ExprError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    if !value.is_finite() {
        return Err(ExprError {
            offset: 0,
            message: "value is not finite".into(),
        });
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ExprError {
        ExprError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<f64, ExprError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<f64, ExprError> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == b'*' { acc * rhs } else { acc / rhs };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<f64, ExprError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<f64, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_alphabetic) {
                    self.pos += 1;
                }
                let word = &self.src[start..self.pos];
                if word != b"sqrt" {
                    self.pos = start;
                    return Err(self.error("unknown identifier (only `sqrt` is supported)"));
                }
                let arg = match self.src.get(self.pos) {
                    Some(c) if c.is_ascii_digit() => self.integer()?,
                    _ => {
                        self.expect(b'(')?;
                        let v = self.expr()?;
                        self.expect(b')')?;
                        v
                    }
                };
                if arg < 0.0 {
                    return Err(ExprError {
                        offset: start,
                        message: "sqrt of a negative number".into(),
                    });
                }
                Ok(arg.sqrt())
            }
            Some(_) => Err(self.error("expected a number, `sqrt` or `(`")),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ExprError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", byte as char)))
        }
    }

    fn integer(&mut self) -> Result<f64, ExprError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        self.lexeme(start)
    }

    /// `digits [. digits] [e [±] digits]`, converted by the standard parser
    /// so decimal literals round correctly.
    fn number(&mut self) -> Result<f64, ExprError> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let from = p.pos;
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
            p.pos - from
        };
        let mut count = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            return Err(self.error("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
                return Err(self.error("malformed exponent"));
            }
        }
        self.lexeme(start)
    }

    fn lexeme(&self, start: usize) -> Result<f64, ExprError> {
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ASCII slice");
        text.parse::<f64>().map_err(|_| ExprError {
            offset: start,
            message: format!("malformed number `{text}`"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ghzsym_core::state::{Q_MAX, Q_MIN};
    use proptest::prelude::*;

    #[test]
    fn symbolic_corners() {
        assert_eq!(eval("sqrt3/4").unwrap(), Q_MAX);
        assert!((eval("-1/(4*sqrt3)").unwrap() - Q_MIN).abs() < 1e-17);
        assert!((eval("1/(2*sqrt2)").unwrap() - 0.353_553_390_593_273_8).abs() < 1e-16);
        assert_eq!(eval("1/2").unwrap(), 0.5);
        assert!((eval("(sqrt(10) - sqrt3)/4").unwrap() - 0.357_556_713_149_875_5).abs() < 1e-16);
    }

    #[test]
    fn precedence_and_signs() {
        assert_eq!(eval("1 + 2 * 3").unwrap(), 7.0);
        assert_eq!(eval("(1 + 2) * 3").unwrap(), 9.0);
        assert_eq!(eval("8 / 4 / 2").unwrap(), 1.0);
        assert_eq!(eval("--2").unwrap(), 2.0);
        assert_eq!(eval("-2e-1").unwrap(), -0.2);
        assert_eq!(eval(" .5 ").unwrap(), 0.5);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(eval("1 +").unwrap_err().offset, 3);
        assert_eq!(eval("2 x").unwrap_err().offset, 2);
        assert_eq!(eval("cos(1)").unwrap_err().offset, 0);
        assert!(eval("sqrt(-1)").is_err());
        assert!(eval("1/0").is_err());
        assert!(eval("1e").is_err());
        assert!(eval("(1").is_err());
        assert!(eval("").is_err());
    }

    proptest! {
        #[test]
        fn decimal_literals_parse_exactly(x in proptest::num::f64::NORMAL) {
            prop_assert_eq!(eval(&format!("{x}")).unwrap(), x);
            prop_assert_eq!(eval(&format!("{x:e}")).unwrap(), x);
        }
    }
}
