//! Recursive-descent parsers for formulas and guards.
//!
//! Formulas: `+ - * /`, integer powers `e^k`, `abs(e)`, `exp(e)`, `pow(e, k)`, numbers,
//! `inf`, and variables `x, y, z` (or `x1, x2, x3`).
//!
//! Guards: interval literals `[a, b]`, `(-inf, b]`, singletons `{a}`, `all`, named sets,
//! linear comparisons such as `x + y <= 1` or `-1 < x <= 0`, combined with `&` and `|`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::expr::Expr;
use super::region::{LinCon, Region};
use crate::extreal::ExtReal;
use crate::interval::Interval;
use crate::sets::ClosedSet;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error in {input:?} at offset {pos}: {msg}")]
pub struct ParseError {
    pub input: String,
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(&'static str),
}

const SYMBOLS: [&str; 19] = [
    "<=", ">=", "==", "<", ">", "=", "+", "-", "*", "/", "^", "(", ")", "[", "]", "{", "}", ",", "&",
];

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let err = |pos: usize, msg: &str| ParseError { input: input.to_string(), pos, msg: msg.to_string() };
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit())) {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
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
            let v: f64 = input[start..i].parse().map_err(|_| err(start, "malformed number"))?;
            out.push((Tok::Num(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(input[start..i].to_string()), start));
            continue;
        }
        if c == '|' {
            out.push((Tok::Sym("|"), i));
            i += 1;
            continue;
        }
        match SYMBOLS.iter().find(|s| input[i..].starts_with(**s)) {
            Some(s) => {
                out.push((Tok::Sym(s), i));
                i += s.len();
            }
            None => return Err(err(i, &format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    dim: usize,
    sets: Option<&'a BTreeMap<String, ClosedSet>>,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, dim: usize) -> Result<Parser<'a>, ParseError> {
        Ok(Parser { input, toks: lex(input)?, pos: 0, dim, sets: None })
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let pos = self.toks.get(self.pos).map_or(self.input.len(), |t| t.1);
        Err(ParseError { input: self.input.to_string(), pos, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.peek_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat("+") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat("-") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat("*") {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat("/") {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat("-") {
            let inner = self.unary()?;
            return Ok(match inner {
                Expr::Const(c) => Expr::Const(-c),
                other => Expr::Neg(Box::new(other)),
            });
        }
        if self.eat("+") {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.eat("^") {
            let k = self.exponent()?;
            return Ok(Expr::PowInt(Box::new(base), k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v <= 64.0 => {
                self.pos += 1;
                Ok(v as u32)
            }
            _ => self.err("exponent must be an integer literal in 0..=64"),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::constant(v))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "inf" | "infinity" => Ok(Expr::Const(ExtReal::PosInf)),
                    "abs" | "exp" => {
                        self.expect("(")?;
                        let e = self.expr()?;
                        self.expect(")")?;
                        Ok(if name == "abs" { Expr::Abs(Box::new(e)) } else { Expr::Exp(Box::new(e)) })
                    }
                    "pow" => {
                        self.expect("(")?;
                        let e = self.expr()?;
                        self.expect(",")?;
                        let k = self.exponent()?;
                        self.expect(")")?;
                        Ok(Expr::PowInt(Box::new(e), k))
                    }
                    _ => {
                        let idx = var_index(&name);
                        match idx {
                            Some(i) if i < self.dim => Ok(Expr::Var(i)),
                            Some(_) => {
                                self.pos -= 1;
                                self.err(format!("variable {name} exceeds dimension {}", self.dim))
                            }
                            None => {
                                self.pos -= 1;
                                self.err(format!("unknown identifier {name}"))
                            }
                        }
                    }
                }
            }
            Some(_) => self.err("expected a number, variable, function or '('"),
            None => self.err("unexpected end of input"),
        }
    }

    fn constant(&mut self) -> Result<f64, ParseError> {
        let e = self.expr()?;
        if e.arity() > 0 {
            return self.err("endpoint must be a constant");
        }
        Ok(e.eval(&[]).map_err(|m| ParseError { input: self.input.to_string(), pos: 0, msg: m.to_string() })?)
    }

    // guard := conj ('|' conj)*
    fn guard(&mut self) -> Result<Region, ParseError> {
        let mut r = self.conj()?;
        while self.eat("|") {
            r = r.union(&self.conj()?);
        }
        Ok(r)
    }

    fn conj(&mut self) -> Result<Region, ParseError> {
        let mut r = self.atom()?;
        while self.eat("&") {
            r = r.intersect(&self.atom()?);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Region, ParseError> {
        let start = self.pos;
        if self.peek_sym("[") || self.peek_sym("(") {
            if let Ok(iv) = self.interval_literal() {
                return Ok(iv);
            }
            self.pos = start;
        }
        if self.peek_sym("(") {
            self.pos += 1;
            if let Ok(r) = self.guard() {
                if self.eat(")") && !self.at_comparison_or_arith() {
                    return Ok(r);
                }
            }
            self.pos = start;
        }
        if self.eat("{") {
            self.require_line("singleton")?;
            let v = self.constant()?;
            self.expect("}")?;
            return Ok(Region::from_interval_set(&crate::interval::IntervalSet::point(v)));
        }
        if let Some(Tok::Ident(name)) = self.peek().cloned() {
            let next_is_op = matches!(self.toks.get(self.pos + 1), Some((Tok::Sym(s), _)) if !matches!(*s, "&" | "|" | ")"));
            if !next_is_op {
                if name == "all" {
                    self.pos += 1;
                    return Ok(Region::all(self.dim));
                }
                if let Some(set) = self.sets.and_then(|m| m.get(&name)) {
                    if set.dim() != self.dim {
                        return self.err(format!("set {name} has dimension {}", set.dim()));
                    }
                    self.pos += 1;
                    return Ok(Region::from_closed_set(set));
                }
                if var_index(&name).is_none() {
                    return self.err(format!("unknown set {name}"));
                }
            }
        }
        self.comparison()
    }

    fn at_comparison_or_arith(&self) -> bool {
        matches!(self.peek(), Some(Tok::Sym(s)) if matches!(*s, "<=" | ">=" | "<" | ">" | "=" | "==" | "+" | "-" | "*" | "/" | "^"))
    }

    fn require_line(&self, what: &str) -> Result<(), ParseError> {
        if self.dim == 1 {
            Ok(())
        } else {
            self.err(format!("{what} literals are only allowed in one dimension"))
        }
    }

    fn interval_literal(&mut self) -> Result<Region, ParseError> {
        let lo_closed = if self.eat("[") {
            true
        } else {
            self.expect("(")?;
            false
        };
        let lo = self.constant()?;
        self.expect(",")?;
        let hi = self.constant()?;
        let hi_closed = if self.eat("]") {
            true
        } else {
            self.expect(")")?;
            false
        };
        self.require_line("interval")?;
        if lo > hi {
            return self.err("interval endpoints out of order");
        }
        let set = Interval::new(lo, hi, lo_closed, hi_closed)
            .map_or_else(crate::interval::IntervalSet::empty, crate::interval::IntervalSet::single);
        Ok(Region::from_interval_set(&set))
    }

    // comparison chain: e0 op e1 (op e2)*, each link a linear constraint
    fn comparison(&mut self) -> Result<Region, ParseError> {
        let mut lhs = self.expr()?;
        let mut region: Option<Region> = None;
        loop {
            let op = match self.peek() {
                Some(Tok::Sym(s)) if matches!(*s, "<=" | ">=" | "<" | ">" | "=" | "==") => *s,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.expr()?;
            let diff = Expr::Sub(Box::new(lhs.clone()), Box::new(rhs.clone()));
            let Some((a, c)) = diff.as_affine(self.dim) else {
                return self.err("guard comparisons must be linear");
            };
            // a·x + c  op  0
            let neg: Vec<f64> = a.iter().map(|v| -v).collect();
            let link = match op {
                "<=" => Region::constraint(LinCon { a, b: -c, strict: false }),
                "<" => Region::constraint(LinCon { a, b: -c, strict: true }),
                ">=" => Region::constraint(LinCon { a: neg, b: c, strict: false }),
                ">" => Region::constraint(LinCon { a: neg, b: c, strict: true }),
                _ => Region::constraint(LinCon { a: a.clone(), b: -c, strict: false })
                    .intersect(&Region::constraint(LinCon { a: neg, b: c, strict: false })),
            };
            region = Some(match region {
                Some(r) => r.intersect(&link),
                None => link,
            });
            lhs = rhs;
        }
        match region {
            Some(r) => Ok(r),
            None => self.err("expected a comparison, interval, set name or 'all'"),
        }
    }
}

fn var_index(name: &str) -> Option<usize> {
    match name {
        "x" | "x1" => Some(0),
        "y" | "x2" => Some(1),
        "z" | "x3" => Some(2),
        _ => None,
    }
}

/// Parses a formula over `dim` variables.
pub fn parse_expr(input: &str, dim: usize) -> Result<Expr, ParseError> {
    let mut p = Parser::new(input, dim)?;
    let e = p.expr()?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a guard over `dim` variables, resolving set names in `sets`.
pub fn parse_guard(input: &str, dim: usize, sets: &BTreeMap<String, ClosedSet>) -> Result<Region, ParseError> {
    let mut p = Parser::new(input, dim)?;
    p.sets = Some(sets);
    let r = p.guard()?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    Ok(r)
}

/// Parses an extended-real constant such as `inf`, `-inf` or `-1/2`.
pub fn parse_ext_constant(input: &str) -> Result<ExtReal, ParseError> {
    let e = parse_expr(input, 0)?;
    e.eval(&[])
        .map(ExtReal::from)
        .map_err(|m| ParseError { input: input.to_string(), pos: 0, msg: m.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> String {
        parse_guard(s, 1, &BTreeMap::new()).unwrap().to_interval_set().to_string()
    }

    #[test]
    fn formulas() {
        assert_eq!(parse_expr("x^3/3", 1).unwrap().to_string(), "x^3/3");
        assert_eq!(parse_expr("-abs(x)", 1).unwrap().eval(&[-2.0]).unwrap(), -2.0);
        assert_eq!(parse_expr("pow(x1 + x2, 2)", 2).unwrap().eval(&[1.0, 2.0]).unwrap(), 9.0);
        assert_eq!(parse_expr("-x^2", 1).unwrap().eval(&[3.0]).unwrap(), -9.0);
        assert_eq!(parse_expr("2e-1*x", 1).unwrap().eval(&[1.0]).unwrap(), 0.2);
        assert!(parse_expr("y", 1).is_err());
        assert!(parse_expr("sin(x)", 1).is_err());
        assert!(parse_expr("x^-1", 1).is_err());
        assert!(parse_expr("(x + 1", 1).is_err());
    }

    #[test]
    fn guards() {
        assert_eq!(g("[-1/2, 0]"), "[-0.5, 0]");
        assert_eq!(g("(-inf, 0]"), "(-inf, 0]");
        assert_eq!(g("x > -1"), "(-1, inf)");
        assert_eq!(g("-1 < x <= 0"), "(-1, 0]");
        assert_eq!(g("{0}"), "{0}");
        assert_eq!(g("x < 0 | x > 0"), "(-inf, 0) u (0, inf)");
        assert_eq!(g("(x < 0 | x > 1) & [-1, 2]"), "[-1, 0) u (1, 2]");
        assert_eq!(g("(x + 1) <= 2"), "(-inf, 1]");
        assert_eq!(g("all"), "(-inf, inf)");
        assert!(parse_guard("[0, 1", 1, &BTreeMap::new()).is_err());
        assert!(parse_guard("x*x <= 1", 1, &BTreeMap::new()).is_err());
        assert!(parse_guard("[0, 1]", 2, &BTreeMap::new()).is_err());
    }

    #[test]
    fn named_sets() {
        let mut sets = BTreeMap::new();
        sets.insert("C".to_string(), ClosedSet::interval_1d("[-0.5, 0]".parse().unwrap()).unwrap());
        let r = parse_guard("C & x < 0", 1, &sets).unwrap();
        assert_eq!(r.to_interval_set().to_string(), "[-0.5, 0)");
        assert!(parse_guard("D", 1, &sets).is_err());
    }

    #[test]
    fn constants() {
        assert_eq!(parse_ext_constant("-inf").unwrap(), ExtReal::NegInf);
        assert_eq!(parse_ext_constant("1/4").unwrap(), ExtReal::Finite(0.25));
    }
}
