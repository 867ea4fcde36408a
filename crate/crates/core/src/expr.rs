//! Coefficient expressions: a small grammar for scalar functions of `x`.
//!
//! Supports `+ - * / ^` (with `^` right-associative and binding tighter
//! than unary minus on its base, so `-x^2` is `-(x^2)`), parentheses,
//! numeric literals, the variable `x`, and the functions
//! `sin cos tan sinh cosh tanh exp log sqrt abs`.
//! There is no implicit multiplication: `2x` is a syntax error.
//!
//! Parsed trees are immutable; evaluation either yields a finite real or
//! a domain error identifying the offending `x`.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdent { pos: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } => *pos,
            ParseError::UnknownIdent { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("{func} of invalid argument {arg} at x = {x}")]
    InvalidArgument { func: &'static str, arg: f64, x: f64 },
    #[error("non-finite result from `{op}` at x = {x}")]
    NonFinite { op: &'static str, x: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
    Abs,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

/// One node of a parsed expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// A parsed coefficient function of `x`, together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientExpr {
    root: Expr,
    source: String,
}

impl CoefficientExpr {
    pub fn parse(src: &str) -> Result<CoefficientExpr, ParseError> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens, pos: 0 };
        let root = parser.parse_expr(0)?;
        match parser.peek() {
            (Token::Eof, _) => Ok(CoefficientExpr {
                root,
                source: src.to_string(),
            }),
            (tok, pos) => Err(ParseError::Syntax {
                pos,
                msg: format!("unexpected {tok}"),
            }),
        }
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    /// The text this expression was parsed from.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        eval_node(&self.root, x)
    }
}

/// Prints the canonical serialization; reparsing it yields an identical tree.
impl fmt::Display for CoefficientExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root, 0)
    }
}

fn eval_node(e: &Expr, x: f64) -> Result<f64, EvalError> {
    let v = match e {
        Expr::Num(c) => *c,
        Expr::Var => x,
        Expr::Neg(a) => -eval_node(a, x)?,
        Expr::Bin(op, a, b) => {
            let a = eval_node(a, x)?;
            let b = eval_node(b, x)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b == 0.0 {
                        return Err(EvalError::DivisionByZero { x });
                    }
                    a / b
                }
                BinOp::Pow => a.powf(b),
            }
        }
        Expr::Call(func, a) => {
            let a = eval_node(a, x)?;
            match func {
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Tan => a.tan(),
                Func::Sinh => a.sinh(),
                Func::Cosh => a.cosh(),
                Func::Tanh => a.tanh(),
                Func::Exp => a.exp(),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(EvalError::InvalidArgument {
                            func: "log",
                            arg: a,
                            x,
                        });
                    }
                    a.ln()
                }
                Func::Sqrt => {
                    if a < 0.0 {
                        return Err(EvalError::InvalidArgument {
                            func: "sqrt",
                            arg: a,
                            x,
                        });
                    }
                    a.sqrt()
                }
                Func::Abs => a.abs(),
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite {
            op: op_name(e),
            x,
        })
    }
}

fn op_name(e: &Expr) -> &'static str {
    match e {
        Expr::Num(_) => "literal",
        Expr::Var => "x",
        Expr::Neg(_) => "negation",
        Expr::Bin(BinOp::Add, ..) => "+",
        Expr::Bin(BinOp::Sub, ..) => "-",
        Expr::Bin(BinOp::Mul, ..) => "*",
        Expr::Bin(BinOp::Div, ..) => "/",
        Expr::Bin(BinOp::Pow, ..) => "^",
        Expr::Call(f, _) => f.name(),
    }
}

// Printing precedence levels; a child is parenthesized when its level is
// below what its position requires.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Num(_) | Expr::Var | Expr::Call(..) => 10,
        Expr::Neg(_) => 5,
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 3,
        Expr::Bin(BinOp::Pow, ..) => 8,
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    let parens = prec(e) < min;
    if parens {
        write!(f, "(")?;
    }
    match e {
        Expr::Num(c) => write!(f, "{c}")?,
        Expr::Var => write!(f, "x")?,
        Expr::Neg(a) => {
            write!(f, "-")?;
            write_node(f, a, 5)?;
        }
        Expr::Bin(op, a, b) => {
            let (sym, lmin, rmin) = match op {
                BinOp::Add => ("+", 1, 2),
                BinOp::Sub => ("-", 1, 2),
                BinOp::Mul => ("*", 3, 4),
                BinOp::Div => ("/", 3, 4),
                BinOp::Pow => ("^", 9, 7),
            };
            write_node(f, a, lmin)?;
            write!(f, "{sym}")?;
            write_node(f, b, rmin)?;
        }
        Expr::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a, 0)?;
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
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
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(v) => write!(f, "number `{v}`"),
            Token::Ident(s) => write!(f, "identifier `{s}`"),
            Token::Plus => write!(f, "`+`"),
            Token::Minus => write!(f, "`-`"),
            Token::Star => write!(f, "`*`"),
            Token::Slash => write!(f, "`/`"),
            Token::Caret => write!(f, "`^`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Eof => write!(f, "end of input"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((Token::Plus, i));
                i += 1;
            }
            '-' => {
                out.push((Token::Minus, i));
                i += 1;
            }
            '*' => {
                out.push((Token::Star, i));
                i += 1;
            }
            '/' => {
                out.push((Token::Slash, i));
                i += 1;
            }
            '^' => {
                out.push((Token::Caret, i));
                i += 1;
            }
            '(' => {
                out.push((Token::LParen, i));
                i += 1;
            }
            ')' => {
                out.push((Token::RParen, i));
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    pos: start,
                    msg: format!("invalid number `{text}`"),
                })?;
                out.push((Token::Num(value), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((Token::Ident(src[start..i].to_string()), start));
            }
            other => {
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push((Token::Eof, src.len()));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

// Binding power of unary minus: below `^` so that `-x^2` parses as `-(x^2)`.
const NEG_BP: u8 = 5;

impl Parser {
    fn peek(&self) -> (Token, usize) {
        self.tokens[self.pos].clone()
    }

    fn advance(&mut self) -> (Token, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.advance() {
            (Token::RParen, _) => Ok(()),
            (tok, pos) => Err(ParseError::Syntax {
                pos,
                msg: format!("expected `)`, found {tok}"),
            }),
        }
    }

    fn parse_expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let mut lhs = match self.advance() {
            (Token::Num(v), _) => Expr::Num(v),
            (Token::Ident(name), pos) => {
                if name == "x" {
                    Expr::Var
                } else if let Some(func) = Func::from_name(&name) {
                    match self.advance() {
                        (Token::LParen, _) => {
                            let arg = self.parse_expr(0)?;
                            self.expect_rparen()?;
                            Expr::Call(func, Box::new(arg))
                        }
                        (tok, pos) => {
                            return Err(ParseError::Syntax {
                                pos,
                                msg: format!("expected `(` after `{name}`, found {tok}"),
                            })
                        }
                    }
                } else {
                    return Err(ParseError::UnknownIdent { pos, name });
                }
            }
            (Token::Minus, _) => {
                let operand = self.parse_expr(NEG_BP)?;
                Expr::Neg(Box::new(operand))
            }
            (Token::LParen, _) => {
                let inner = self.parse_expr(0)?;
                self.expect_rparen()?;
                inner
            }
            (tok, pos) => {
                return Err(ParseError::Syntax {
                    pos,
                    msg: format!("expected expression, found {tok}"),
                })
            }
        };
        loop {
            let (op, lbp, rbp) = match self.peek() {
                (Token::Plus, _) => (BinOp::Add, 1, 2),
                (Token::Minus, _) => (BinOp::Sub, 1, 2),
                (Token::Star, _) => (BinOp::Mul, 3, 4),
                (Token::Slash, _) => (BinOp::Div, 3, 4),
                (Token::Caret, _) => (BinOp::Pow, 8, 7),
                (Token::RParen, _) | (Token::Eof, _) => break,
                (tok, pos) => {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: format!("expected operator, found {tok}"),
                    })
                }
            };
            if lbp < min_bp {
                break;
            }
            self.advance();
            let rhs = self.parse_expr(rbp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> CoefficientExpr {
        CoefficientExpr::parse(src).unwrap()
    }

    fn eval(src: &str, x: f64) -> f64 {
        parse(src).eval(x).unwrap()
    }

    #[test]
    fn literal_is_constant_node() {
        assert_eq!(*parse("1").root(), Expr::Num(1.0));
    }

    #[test]
    fn product_of_calls_has_expected_shape() {
        let e = parse("sin(x)*exp(-x)");
        let expected = Expr::Bin(
            BinOp::Mul,
            Box::new(Expr::Call(Func::Sin, Box::new(Expr::Var))),
            Box::new(Expr::Call(Func::Exp, Box::new(Expr::Neg(Box::new(Expr::Var))))),
        );
        assert_eq!(*e.root(), expected);
    }

    #[test]
    fn unbalanced_paren_reports_position() {
        let err = CoefficientExpr::parse("2^(").unwrap_err();
        assert_eq!(err.position(), 3);
    }

    #[test]
    fn unknown_identifier_reports_name_and_position() {
        let err = CoefficientExpr::parse("1 + foo(x)").unwrap_err();
        match err {
            ParseError::UnknownIdent { pos, name } => {
                assert_eq!(pos, 4);
                assert_eq!(name, "foo");
            }
            other => panic!("expected UnknownIdent, got {other:?}"),
        }
    }

    #[test]
    fn implicit_multiplication_rejected() {
        assert!(CoefficientExpr::parse("2x").is_err());
        assert!(CoefficientExpr::parse("2 x").is_err());
    }

    #[test]
    fn empty_input_rejected() {
        assert!(CoefficientExpr::parse("").is_err());
        assert!(CoefficientExpr::parse("   ").is_err());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(eval("x^2", 3.0), 9.0);
        assert_eq!(eval("sin(x)", 0.0), 0.0);
        assert!((eval("exp(x)", 1.0) - std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn precedence_examples() {
        assert_eq!(eval("2+3*4", 0.0), 14.0);
        assert_eq!(eval("2^3^2", 0.0), 512.0);
        assert_eq!(eval("-x^2", 2.0), -4.0);
        assert_eq!(eval("(-x)^2", 2.0), 4.0);
        assert_eq!(eval("2*3^2", 0.0), 18.0);
        assert_eq!(eval("1-2-3", 0.0), -4.0);
        assert_eq!(eval("8/4/2", 0.0), 1.0);
    }

    #[test]
    fn domain_errors_identify_x() {
        let e = parse("1/x");
        match e.eval(0.0) {
            Err(EvalError::DivisionByZero { x }) => assert_eq!(x, 0.0),
            other => panic!("expected division by zero, got {other:?}"),
        }
        assert!(parse("log(x)").eval(-1.0).is_err());
        assert!(parse("sqrt(x)").eval(-4.0).is_err());
        assert!(parse("exp(x)").eval(1e9).is_err());
        match parse("x^x").eval(-0.5) {
            Err(EvalError::NonFinite { .. }) => {}
            other => panic!("expected non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn roundtrip_of_nested_expressions() {
        for src in [
            "1",
            "x",
            "-x^2",
            "(-x)^2",
            "sin(x)*exp(-x)",
            "2^3^2",
            "(2^3)^2",
            "1+2*3-4/5",
            "1-(2+3)",
            "sqrt(abs(x-1))",
            "1/(1+x^2)",
            "--x",
            "2*-3",
        ] {
            let tree = parse(src);
            let printed = tree.to_string();
            let reparsed = CoefficientExpr::parse(&printed).unwrap();
            assert_eq!(tree.root(), reparsed.root(), "roundtrip failed for `{src}` -> `{printed}`");
        }
    }
}
