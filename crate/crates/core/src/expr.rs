//! Minimal arithmetic/trig expression grammar for declarative chart files.
//!
//! Supports `+ - * / ^`, parentheses, numeric literals, named variables,
//! the constants `pi`, `tau`, `e`, and the usual one-argument functions.

use crate::{r64, Error, Real, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sec,
    Csc,
    Cot,
    Asin,
    Acos,
    Atan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sec" => Func::Sec,
            "csc" => Func::Csc,
            "cot" => Func::Cot,
            "asin" => Func::Asin,
            "acos" => Func::Acos,
            "atan" => Func::Atan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "log" | "ln" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn eval<T: Real>(self, x: T) -> T {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Sec => T::one() / x.cos(),
            Func::Csc => T::one() / x.sin(),
            Func::Cot => x.cos() / x.sin(),
            Func::Asin => x.asin(),
            Func::Acos => x.acos(),
            Func::Atan => x.atan(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Tanh => x.tanh(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        }
    }
}

impl Expr {
    /// Parse against an ordered variable list; every identifier must be a
    /// known variable, constant, or function name.
    pub fn parse(src: &str, vars: &[String]) -> Result<Expr> {
        let tokens = tokenize(src)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            vars,
            src,
        };
        let e = p.expression(0)?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!(
                "trailing input in expression `{src}`"
            )));
        }
        Ok(e)
    }

    pub fn eval<T: Real>(&self, values: &[T]) -> T {
        match self {
            Expr::Num(v) => r64(*v),
            Expr::Var(i) => values[*i],
            Expr::Neg(a) => -a.eval(values),
            Expr::Add(a, b) => a.eval(values) + b.eval(values),
            Expr::Sub(a, b) => a.eval(values) - b.eval(values),
            Expr::Mul(a, b) => a.eval(values) * b.eval(values),
            Expr::Div(a, b) => a.eval(values) / b.eval(values),
            Expr::Pow(a, b) => {
                let base = a.eval(values);
                let exp = b.eval(values);
                let rounded = exp.round();
                if (exp - rounded).abs() <= r64(1e-12) {
                    base.powi(rounded.to_i32().unwrap_or(0))
                } else {
                    base.powf(exp)
                }
            }
            Expr::Call(f, a) => f.eval(a.eval(values)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_digit()
                        || bytes[i] == '.'
                        || bytes[i] == 'e'
                        || bytes[i] == 'E'
                        || ((bytes[i] == '+' || bytes[i] == '-')
                            && i > start
                            && (bytes[i - 1] == 'e' || bytes[i - 1] == 'E')))
                {
                    i += 1;
                }
                let text: String = bytes[start..i].iter().collect();
                let v = text
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number `{text}` in `{src}`")))?;
                out.push(Token::Num(v));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(bytes[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character `{other}` in `{src}`"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [String],
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expression(&mut self, min_bp: u8) -> Result<Expr> {
        let mut lhs = self.prefix()?;
        loop {
            let (op, lbp, rbp) = match self.peek() {
                Some(Token::Plus) => ('+', 1, 2),
                Some(Token::Minus) => ('-', 1, 2),
                Some(Token::Star) => ('*', 3, 4),
                Some(Token::Slash) => ('/', 3, 4),
                Some(Token::Caret) => ('^', 6, 5), // right-associative
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            self.next();
            let rhs = self.expression(rbp)?;
            lhs = match op {
                '+' => Expr::Add(Box::new(lhs), Box::new(rhs)),
                '-' => Expr::Sub(Box::new(lhs), Box::new(rhs)),
                '*' => Expr::Mul(Box::new(lhs), Box::new(rhs)),
                '/' => Expr::Div(Box::new(lhs), Box::new(rhs)),
                _ => Expr::Pow(Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Expr::Num(v)),
            Some(Token::Minus) => Ok(Expr::Neg(Box::new(self.expression(5)?))),
            Some(Token::Plus) => self.expression(5),
            Some(Token::LParen) => {
                let e = self.expression(0)?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(Error::Parse(format!("missing `)` in `{}`", self.src))),
                }
            }
            Some(Token::Ident(name)) => {
                if let Some(f) = Func::from_name(&name) {
                    match self.next() {
                        Some(Token::LParen) => {
                            let arg = self.expression(0)?;
                            match self.next() {
                                Some(Token::RParen) => Ok(Expr::Call(f, Box::new(arg))),
                                _ => Err(Error::Parse(format!(
                                    "missing `)` after {name}(...) in `{}`",
                                    self.src
                                ))),
                            }
                        }
                        _ => Err(Error::Parse(format!(
                            "function `{name}` needs parentheses in `{}`",
                            self.src
                        ))),
                    }
                } else if let Some(i) = self.vars.iter().position(|v| v == &name) {
                    Ok(Expr::Var(i))
                } else {
                    match name.as_str() {
                        "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                        "tau" => Ok(Expr::Num(std::f64::consts::TAU)),
                        "e" => Ok(Expr::Num(std::f64::consts::E)),
                        _ => Err(Error::Parse(format!(
                            "unknown identifier `{name}` in `{}`",
                            self.src
                        ))),
                    }
                }
            }
            other => Err(Error::Parse(format!(
                "unexpected token {other:?} in `{}`",
                self.src
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn arithmetic_and_precedence() {
        let v = vars(&["x"]);
        let e = Expr::parse("2 + 3*x^2", &v).unwrap();
        assert_relative_eq!(e.eval(&[2.0f64]), 14.0);
        let e = Expr::parse("2^3^2", &v).unwrap(); // right-assoc
        assert_relative_eq!(e.eval(&[0.0f64]), 512.0);
        let e = Expr::parse("-x^2", &v).unwrap();
        assert_relative_eq!(e.eval(&[3.0f64]), -9.0);
    }

    #[test]
    fn trig_and_constants() {
        let v = vars(&["u", "r"]);
        let e = Expr::parse("(2 + r*cos(u))^2", &v).unwrap();
        assert_relative_eq!(e.eval(&[0.0f64, 1.0]), 9.0);
        let e = Expr::parse("sin(pi/2)", &v).unwrap();
        assert_relative_eq!(e.eval(&[0.0f64, 0.0]), 1.0, epsilon = 1e-15);
        let e = Expr::parse("sec(0) + cot(pi/4)", &v).unwrap();
        assert_relative_eq!(e.eval(&[0.0f64, 0.0]), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_unknowns() {
        let v = vars(&["x"]);
        assert!(Expr::parse("y + 1", &v).is_err());
        assert!(Expr::parse("sin x", &v).is_err());
        assert!(Expr::parse("(x", &v).is_err());
    }
}
