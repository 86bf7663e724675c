//! Exact arithmetic expressions in `k` for disc-area rules such as
//! `1/ceil(sqrt(k))`.
//!
//! `sqrt` of a non-square stays symbolic and may only feed `ceil` or
//! `floor`, which are computed exactly through integer square roots.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use orbiweyl_core::novikov::rational_sqrt;
use orbiweyl_core::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("unexpected {found} at position {pos}")]
    Syntax { pos: usize, found: String },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("sqrt({0}) is irrational and can only be passed to ceil or floor")]
    Irrational(Rational),
    #[error("sqrt of negative value {0}")]
    NegativeSqrt(Rational),
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Expr {
    K,
    Num(BigInt),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Func {
    Ceil,
    Floor,
    Sqrt,
}

/// A value that is rational, or the square root of a non-square rational.
enum Value {
    Exact(Rational),
    Sqrt(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    source: String,
    expr: Expr,
}

impl Rule {
    pub fn parse(text: &str) -> Result<Self, RuleError> {
        let mut p = Parser { chars: text.char_indices().collect(), at: 0 };
        let expr = p.expr()?;
        p.skip_ws();
        if let Some(&(pos, c)) = p.chars.get(p.at) {
            return Err(RuleError::Syntax { pos, found: format!("`{c}`") });
        }
        Ok(Rule { source: text.trim().to_string(), expr })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, k: usize) -> Result<Rational, RuleError> {
        match eval(&self.expr, &int(k as i64))? {
            Value::Exact(q) => Ok(q),
            Value::Sqrt(q) => Err(RuleError::Irrational(q)),
        }
    }
}

fn exact(v: Value) -> Result<Rational, RuleError> {
    match v {
        Value::Exact(q) => Ok(q),
        Value::Sqrt(q) => Err(RuleError::Irrational(q)),
    }
}

fn eval(e: &Expr, k: &Rational) -> Result<Value, RuleError> {
    Ok(match e {
        Expr::K => Value::Exact(k.clone()),
        Expr::Num(n) => Value::Exact(Rational::from_integer(n.clone())),
        Expr::Neg(x) => Value::Exact(-exact(eval(x, k)?)?),
        Expr::Bin(op, a, b) => {
            let (a, b) = (exact(eval(a, k)?)?, exact(eval(b, k)?)?);
            Value::Exact(match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
                Op::Div if b.is_zero() => return Err(RuleError::DivisionByZero),
                Op::Div => a / b,
            })
        }
        Expr::Call(Func::Sqrt, x) => {
            let q = exact(eval(x, k)?)?;
            if q.is_negative() {
                return Err(RuleError::NegativeSqrt(q));
            }
            match rational_sqrt(&q) {
                Some(r) => Value::Exact(r),
                None => Value::Sqrt(q),
            }
        }
        Expr::Call(f, x) => {
            let floor = match eval(x, k)? {
                Value::Exact(q) => {
                    return Ok(Value::Exact(Rational::from_integer(if *f == Func::Ceil { q.ceil() } else { q.floor() }.to_integer())))
                }
                // n² ≤ q iff n² ≤ ⌊q⌋ for integers n
                Value::Sqrt(q) => q.floor().to_integer().sqrt(),
            };
            // an irrational root is never an integer, so ceil = floor + 1
            let n = if *f == Func::Ceil { floor + 1 } else { floor };
            Value::Exact(Rational::from_integer(n))
        }
    })
}

struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.at).is_some_and(|(_, c)| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn error(&self) -> RuleError {
        match self.chars.get(self.at) {
            Some(&(pos, c)) => RuleError::Syntax { pos, found: format!("`{c}`") },
            None => RuleError::Syntax { pos: self.chars.last().map_or(0, |(p, c)| p + c.len_utf8()), found: "end of input".into() },
        }
    }

    fn expect(&mut self, want: char) -> Result<(), RuleError> {
        if self.peek() == Some(want) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn expr(&mut self) -> Result<Expr, RuleError> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.at += 1;
            let op = if c == '+' { Op::Add } else { Op::Sub };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, RuleError> {
        let mut lhs = self.factor()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.at += 1;
            let op = if c == '*' { Op::Mul } else { Op::Div };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, RuleError> {
        match self.peek() {
            Some('-') => {
                self.at += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.at;
                while self.chars.get(self.at).is_some_and(|(_, c)| c.is_ascii_digit()) {
                    self.at += 1;
                }
                let digits: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
                Ok(Expr::Num(digits.parse().expect("ascii digits")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.at;
                while self.chars.get(self.at).is_some_and(|(_, c)| c.is_ascii_alphanumeric() || *c == '_') {
                    self.at += 1;
                }
                let name: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
                if name == "k" {
                    return Ok(Expr::K);
                }
                let func = match name.as_str() {
                    "ceil" => Func::Ceil,
                    "floor" => Func::Floor,
                    "sqrt" => Func::Sqrt,
                    _ => return Err(RuleError::UnknownFunction(name)),
                };
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            _ => Err(self.error()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use orbiweyl_core::rat;

    fn eval(text: &str, k: usize) -> Result<Rational, RuleError> {
        Rule::parse(text)?.eval(k)
    }

    #[test]
    fn weyl_rule() {
        let rule = Rule::parse("1/ceil(sqrt(k))").unwrap();
        let got: Vec<Rational> = (1..=10).map(|k| rule.eval(k).unwrap()).collect();
        let want = [1, 2, 2, 2, 3, 3, 3, 3, 3, 4].map(|d| rat(1, d));
        assert_eq!(got, want);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(eval("1/2 + k*3 - (k - 1)/4", 3).unwrap(), rat(1, 2) + int(9) - rat(1, 2));
        assert_eq!(eval("-k/3", 2).unwrap(), rat(-2, 3));
        assert_eq!(eval("floor(sqrt(k))", 8).unwrap(), int(2));
        assert_eq!(eval("ceil(sqrt(k/4))", 9).unwrap(), int(2));
        assert_eq!(eval("sqrt(k)", 9).unwrap(), int(3));
        assert_eq!(eval("floor(7/2)", 1).unwrap(), int(3));
        assert_eq!(eval("ceil(-7/2)", 1).unwrap(), int(-3));
    }

    #[test]
    fn errors() {
        assert_eq!(eval("1/sqrt(k)", 2), Err(RuleError::Irrational(int(2))));
        assert_eq!(eval("1/(k-2)", 2), Err(RuleError::DivisionByZero));
        assert!(matches!(eval("log(k)", 2), Err(RuleError::UnknownFunction(_))));
        assert!(matches!(eval("1/(k", 2), Err(RuleError::Syntax { pos: 4, .. })));
        assert!(matches!(eval("sqrt(0-k)", 2), Err(RuleError::NegativeSqrt(_))));
    }
}
