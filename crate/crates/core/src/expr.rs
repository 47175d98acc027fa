//! Closed-form payoff expressions over grid variables.
//!
//! Grammar (whitespace insensitive, `n` = number of players):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' signed-number)?
//! atom   := number | var | func '(' expr (',' expr)? ')' | '(' expr ')'
//! var    := 's' | 't1'..'tn' | 'a1'..'an'
//! func   := 'min' | 'max' (two arguments)
//!         | 'abs' | 'exp' | 'log' | 'sqrt' | 'pos' | 'step' (one argument)
//! ```
//!
//! Exponents are numeric literals restricted to integers and half-integers.
//! Semantics of the partial operations: `x / 0` is a domain error, `log`
//! needs a strictly positive argument, `sqrt` a nonnegative one,
//! `pos(x) = max(x, 0)`, and `step(x)` is `1` for `x >= 0` (in particular
//! `step(0) = 1`) and `0` otherwise. Integer powers evaluate through
//! `f64::powi`; a half-integer power `x^(k + 1/2)` evaluates as
//! `x.powi(k) * x.sqrt()` and requires `x >= 0`. Zero raised to a negative
//! power is a domain error.
//!
//! Parse errors carry the byte offset of the offending token. Evaluation is
//! deterministic, so tabulating an expression onto grids is reproducible bit
//! for bit.

use std::fmt;

use crate::error::Error;
use crate::game::{Grid, Odometer};

/// A grid variable reference. Player indices are 0-based internally; the
/// surface syntax is 1-based (`t1` is `Type(0)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    State,
    Type(usize),
    Action(usize),
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Base raised to an integer or half-integer literal exponent.
    Pow(Box<Expr>, f64),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
    Sqrt(Box<Expr>),
    Pos(Box<Expr>),
    Step(Box<Expr>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n_players: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, n_players: usize) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            n_players,
        }
    }

    fn error(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            offset,
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

    fn expect(&mut self, c: u8) -> Result<(), Error> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.error(
                self.pos,
                format!("expected '{}', found '{}'", c as char, got as char),
            )),
            None => Err(self.error(self.pos, format!("expected '{}', found end of input", c as char))),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, Error> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, Error> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.parse_factor()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr, Error> {
        let base = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let negative = if self.src.get(self.pos) == Some(&b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let mag = self.parse_number_token()?;
            let q = if negative { -mag } else { mag };
            if (2.0 * q).fract() != 0.0 {
                return Err(self.error(
                    start,
                    format!("exponent {q} is not an integer or half-integer"),
                ));
            }
            return Ok(Expr::Pow(Box::new(base), q));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr, Error> {
        match self.peek() {
            None => Err(self.error(self.pos, "unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let value = self.parse_number_token()?;
                Ok(Expr::Num(value))
            }
            Some(c) if c.is_ascii_alphabetic() => self.parse_ident(),
            Some(c) => Err(self.error(self.pos, format!("unexpected character '{}'", c as char))),
        }
    }

    fn parse_number_token(&mut self) -> Result<f64, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if matches!(self.src.get(self.pos), Some(&b'e') | Some(&b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(&b'+') | Some(&b'-')) {
                self.pos += 1;
            }
            if self.src.get(self.pos).map_or(false, |c| c.is_ascii_digit()) {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                // Not an exponent suffix after all (e.g. `2e` would be
                // malformed; roll back so the error points at the 'e').
                self.pos = mark;
            }
        }
        if self.pos == start {
            return Err(self.error(start, "expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        text.parse::<f64>()
            .map_err(|_| self.error(start, format!("malformed number `{text}`")))
    }

    fn parse_ident(&mut self) -> Result<Expr, Error> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        match name {
            "s" => Ok(Expr::Var(Var::State)),
            "min" | "max" => {
                self.expect(b'(')?;
                let first = self.parse_expr()?;
                if self.peek() != Some(b',') {
                    return Err(self.error(
                        self.pos,
                        format!("`{name}` takes two arguments separated by a comma"),
                    ));
                }
                self.pos += 1;
                let second = self.parse_expr()?;
                self.expect(b')')?;
                let (a, b) = (Box::new(first), Box::new(second));
                Ok(if name == "min" {
                    Expr::Min(a, b)
                } else {
                    Expr::Max(a, b)
                })
            }
            "abs" | "exp" | "log" | "sqrt" | "pos" | "step" => {
                self.expect(b'(')?;
                let arg = self.parse_expr()?;
                if self.peek() == Some(b',') {
                    return Err(self.error(self.pos, format!("`{name}` takes one argument")));
                }
                self.expect(b')')?;
                let arg = Box::new(arg);
                Ok(match name {
                    "abs" => Expr::Abs(arg),
                    "exp" => Expr::Exp(arg),
                    "log" => Expr::Log(arg),
                    "sqrt" => Expr::Sqrt(arg),
                    "pos" => Expr::Pos(arg),
                    _ => Expr::Step(arg),
                })
            }
            _ => {
                let kind = name.as_bytes().first().copied();
                if matches!(kind, Some(b't') | Some(b'a')) && name.len() > 1 {
                    if let Ok(k) = name[1..].parse::<usize>() {
                        if k >= 1 && k <= self.n_players {
                            return Ok(Expr::Var(if kind == Some(b't') {
                                Var::Type(k - 1)
                            } else {
                                Var::Action(k - 1)
                            }));
                        }
                        return Err(self.error(
                            start,
                            format!("variable `{name}` is out of range for {} players", self.n_players),
                        ));
                    }
                }
                if name.is_empty() {
                    Err(self.error(start, "expected an identifier"))
                } else {
                    Err(self.error(start, format!("unknown identifier `{name}`")))
                }
            }
        }
    }
}

/// Parses an expression for a game with `n_players` players.
pub fn parse_expr(src: &str, n_players: usize) -> Result<Expr, Error> {
    let mut p = Parser::new(src, n_players);
    let e = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse {
            offset: p.pos,
            message: format!("unexpected trailing input `{}`", &src[p.pos..]),
        });
    }
    Ok(e)
}

fn domain(context: &str, message: String) -> Error {
    Error::Domain {
        context: context.to_string(),
        message,
    }
}

/// Evaluates at one grid point: state value `s`, type values `t` (one per
/// player), action values `a` (one per player).
pub fn eval(e: &Expr, s: f64, t: &[f64], a: &[f64]) -> Result<f64, Error> {
    Ok(match e {
        Expr::Num(x) => *x,
        Expr::Var(Var::State) => s,
        Expr::Var(Var::Type(i)) => t[*i],
        Expr::Var(Var::Action(i)) => a[*i],
        Expr::Neg(x) => -eval(x, s, t, a)?,
        Expr::Add(l, r) => eval(l, s, t, a)? + eval(r, s, t, a)?,
        Expr::Sub(l, r) => eval(l, s, t, a)? - eval(r, s, t, a)?,
        Expr::Mul(l, r) => eval(l, s, t, a)? * eval(r, s, t, a)?,
        Expr::Div(l, r) => {
            let num = eval(l, s, t, a)?;
            let den = eval(r, s, t, a)?;
            if den == 0.0 {
                return Err(domain("/", format!("division of {num} by zero")));
            }
            num / den
        }
        Expr::Pow(b, q) => {
            let x = eval(b, s, t, a)?;
            let is_integer = q.fract() == 0.0;
            if x == 0.0 && *q < 0.0 {
                return Err(domain("^", format!("zero raised to negative power {q}")));
            }
            if is_integer {
                x.powi(*q as i32)
            } else {
                if x < 0.0 {
                    return Err(domain(
                        "^",
                        format!("half-integer power {q} of negative base {x}"),
                    ));
                }
                x.powi(q.floor() as i32) * x.sqrt()
            }
        }
        Expr::Min(l, r) => eval(l, s, t, a)?.min(eval(r, s, t, a)?),
        Expr::Max(l, r) => eval(l, s, t, a)?.max(eval(r, s, t, a)?),
        Expr::Abs(x) => eval(x, s, t, a)?.abs(),
        Expr::Exp(x) => eval(x, s, t, a)?.exp(),
        Expr::Log(x) => {
            let v = eval(x, s, t, a)?;
            if v <= 0.0 {
                return Err(domain("log", format!("log of non-positive value {v}")));
            }
            v.ln()
        }
        Expr::Sqrt(x) => {
            let v = eval(x, s, t, a)?;
            if v < 0.0 {
                return Err(domain("sqrt", format!("sqrt of negative value {v}")));
            }
            v.sqrt()
        }
        Expr::Pos(x) => eval(x, s, t, a)?.max(0.0),
        Expr::Step(x) => {
            if eval(x, s, t, a)? >= 0.0 {
                1.0
            } else {
                0.0
            }
        }
    })
}

/// Tabulates an expression onto grids in canonical flat order: state
/// slowest, then types in player order, then actions with the last player's
/// action fastest. Errors propagate from the first failing grid point in
/// that order.
pub fn tabulate(
    e: &Expr,
    state_grid: &Grid,
    type_grids: &[Grid],
    action_grids: &[Grid],
) -> Result<Vec<f64>, Error> {
    let n = type_grids.len();
    assert_eq!(action_grids.len(), n, "one action grid per player");
    let mut dims = Vec::with_capacity(1 + 2 * n);
    dims.push(state_grid.len());
    dims.extend(type_grids.iter().map(|g| g.len()));
    dims.extend(action_grids.iter().map(|g| g.len()));
    let mut out = Vec::with_capacity(dims.iter().product());
    let mut odo = Odometer::new(dims);
    let mut tvals = vec![0.0; n];
    let mut avals = vec![0.0; n];
    while let Some(ix) = odo.next() {
        let s = state_grid.value(ix[0]);
        for j in 0..n {
            tvals[j] = type_grids[j].value(ix[1 + j]);
            avals[j] = action_grids[j].value(ix[1 + n + j]);
        }
        out.push(eval(e, s, &tvals, &avals)?);
    }
    Ok(out)
}

fn fmt_number(x: f64) -> String {
    format!("{x}")
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, min_prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        let need_parens = prec < min_prec;
        if need_parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Num(x) => write!(f, "{}", fmt_number(*x))?,
            Expr::Var(Var::State) => write!(f, "s")?,
            Expr::Var(Var::Type(i)) => write!(f, "t{}", i + 1)?,
            Expr::Var(Var::Action(i)) => write!(f, "a{}", i + 1)?,
            Expr::Neg(x) => {
                write!(f, "-")?;
                x.fmt_prec(3, f)?;
            }
            Expr::Add(l, r) => {
                l.fmt_prec(1, f)?;
                write!(f, " + ")?;
                r.fmt_prec(2, f)?;
            }
            Expr::Sub(l, r) => {
                l.fmt_prec(1, f)?;
                write!(f, " - ")?;
                r.fmt_prec(2, f)?;
            }
            Expr::Mul(l, r) => {
                l.fmt_prec(2, f)?;
                write!(f, "*")?;
                r.fmt_prec(3, f)?;
            }
            Expr::Div(l, r) => {
                l.fmt_prec(2, f)?;
                write!(f, "/")?;
                r.fmt_prec(3, f)?;
            }
            Expr::Pow(b, q) => {
                // Power bases must re-parse as atoms.
                b.fmt_prec(5, f)?;
                write!(f, "^{}", fmt_number(*q))?;
            }
            Expr::Min(a, b) => {
                write!(f, "min(")?;
                a.fmt_prec(1, f)?;
                write!(f, ", ")?;
                b.fmt_prec(1, f)?;
                write!(f, ")")?;
            }
            Expr::Max(a, b) => {
                write!(f, "max(")?;
                a.fmt_prec(1, f)?;
                write!(f, ", ")?;
                b.fmt_prec(1, f)?;
                write!(f, ")")?;
            }
            Expr::Abs(x) => write_call(f, "abs", x)?,
            Expr::Exp(x) => write_call(f, "exp", x)?,
            Expr::Log(x) => write_call(f, "log", x)?,
            Expr::Sqrt(x) => write_call(f, "sqrt", x)?,
            Expr::Pos(x) => write_call(f, "pos", x)?,
            Expr::Step(x) => write_call(f, "step", x)?,
        }
        if need_parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn write_call(f: &mut fmt::Formatter<'_>, name: &str, arg: &Expr) -> fmt::Result {
    write!(f, "{name}(")?;
    arg.fmt_prec(1, f)?;
    write!(f, ")")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(1, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse2(src: &str) -> Expr {
        parse_expr(src, 2).unwrap()
    }

    fn eval2(src: &str, s: f64, t: &[f64], a: &[f64]) -> f64 {
        eval(&parse2(src), s, t, a).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval2("1 + 2*3", 0.0, &[0.0; 2], &[0.0; 2]), 7.0);
        assert_eq!(eval2("2*3^2", 0.0, &[0.0; 2], &[0.0; 2]), 18.0);
        assert_eq!(eval2("-2^2", 0.0, &[0.0; 2], &[0.0; 2]), -4.0);
        assert_eq!(eval2("(1 + 2)*3", 0.0, &[0.0; 2], &[0.0; 2]), 9.0);
        assert_eq!(eval2("8 - 3 - 2", 0.0, &[0.0; 2], &[0.0; 2]), 3.0);
        assert_eq!(eval2("8/4/2", 0.0, &[0.0; 2], &[0.0; 2]), 1.0);
        assert_eq!(eval2("--3", 0.0, &[0.0; 2], &[0.0; 2]), 3.0);
    }

    #[test]
    fn variables_read_from_context() {
        let v = eval2("s + 10*t1 + 100*t2 + 1000*a1 + 10000*a2", 1.0, &[2.0, 3.0], &[4.0, 5.0]);
        assert_eq!(v, 1.0 + 20.0 + 300.0 + 4000.0 + 50000.0);
    }

    #[test]
    fn functions_match_their_definitions() {
        assert_eq!(eval2("max(a1, a2) - t1*a1", 0.0, &[3.0, 0.0], &[1.0, 2.0]), -1.0);
        assert_eq!(eval2("min(2, -3)", 0.0, &[0.0; 2], &[0.0; 2]), -3.0);
        assert_eq!(eval2("abs(-4)", 0.0, &[0.0; 2], &[0.0; 2]), 4.0);
        assert_eq!(eval2("pos(-4)", 0.0, &[0.0; 2], &[0.0; 2]), 0.0);
        assert_eq!(eval2("pos(4)", 0.0, &[0.0; 2], &[0.0; 2]), 4.0);
        assert_eq!(eval2("step(0)", 0.0, &[0.0; 2], &[0.0; 2]), 1.0);
        assert_eq!(eval2("step(-0.001)", 0.0, &[0.0; 2], &[0.0; 2]), 0.0);
        assert_eq!(eval2("step(5)", 0.0, &[0.0; 2], &[0.0; 2]), 1.0);
        assert_eq!(eval2("sqrt(9)", 0.0, &[0.0; 2], &[0.0; 2]), 3.0);
        let e = eval2("log(exp(2))", 0.0, &[0.0; 2], &[0.0; 2]);
        assert!((e - 2.0).abs() < 1e-15);
    }

    #[test]
    fn powers_integer_and_half_integer() {
        assert_eq!(eval2("(-2)^2", 0.0, &[0.0; 2], &[0.0; 2]), 4.0);
        assert_eq!(eval2("4^0.5", 0.0, &[0.0; 2], &[0.0; 2]), 2.0);
        assert_eq!(eval2("2^-1", 0.0, &[0.0; 2], &[0.0; 2]), 0.5);
        let v = eval2("8^1.5", 0.0, &[0.0; 2], &[0.0; 2]);
        assert_eq!(v, 8.0_f64.powi(1) * 8.0_f64.sqrt());
    }

    #[test]
    fn domain_errors() {
        let cases = [
            "1/0",
            "log(0)",
            "log(-1)",
            "sqrt(-1)",
            "0^-1",
            "(-2)^0.5",
        ];
        for src in cases {
            let e = parse2(src);
            assert!(
                matches!(eval(&e, 0.0, &[0.0; 2], &[0.0; 2]), Err(Error::Domain { .. })),
                "expected domain error for `{src}`"
            );
        }
        // The same expressions are fine on safe inputs.
        assert_eq!(eval2("1/t1", 0.0, &[4.0, 0.0], &[0.0; 2]), 0.25);
    }

    #[test]
    fn parse_errors_carry_byte_offsets() {
        match parse_expr("1 + ", 2) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("min(1)", 2) {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, 5);
                assert!(message.contains("two arguments"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("abs(1, 2)", 2) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("t3 + 1", 2) {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, 0);
                assert!(message.contains("out of range"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("2 + frob(1)", 2) {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, 4);
                assert!(message.contains("unknown identifier"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("1 2", 2) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_expr("t1^0.3", 2) {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, 3);
                assert!(message.contains("half-integer"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn variables_respect_player_count() {
        assert!(parse_expr("t3", 3).is_ok());
        assert!(parse_expr("a4", 3).is_err());
        assert!(parse_expr("t0", 3).is_err());
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        let samples = [
            "1 + 2*3",
            "-2^2",
            "-(1 + t1)",
            "max(a1, a2) - t1*a1",
            "(a1 + a2)^2 - 1/(1 + exp(-s))",
            "step(t1 - 0.5)*pos(s) + sqrt(abs(t2))",
            "a1*(10 + s - a1 - a2) - 2*a1",
            "min(1, 2)/max(3, 4)",
            "2^-1 + t1^1.5",
            "1/2/3 - 1 - 2 - 3",
        ];
        for src in samples {
            let ast = parse2(src);
            let printed = ast.to_string();
            let reparsed = parse_expr(&printed, 2)
                .unwrap_or_else(|e| panic!("reparse of `{printed}` failed: {e}"));
            assert_eq!(reparsed, ast, "round trip changed `{src}` -> `{printed}`");
        }
    }

    #[test]
    fn tabulate_canonical_order_matches_direct_loop() {
        let state = Grid::new(vec![0.0, 1.0]);
        let types = vec![Grid::new(vec![-1.0, 2.0]), Grid::new(vec![0.5])];
        let actions = vec![Grid::new(vec![0.0, 1.0]), Grid::new(vec![3.0, 4.0, 5.0])];
        let e = parse2("s + t1*t2 + a1 - a2^2");
        let table = tabulate(&e, &state, &types, &actions).unwrap();
        assert_eq!(table.len(), 2 * 2 * 1 * 2 * 3);
        let mut k = 0;
        for s in [0.0, 1.0] {
            for t1 in [-1.0, 2.0] {
                for a1 in [0.0, 1.0] {
                    for a2 in [3.0, 4.0, 5.0] {
                        let expected: f64 = s + t1 * 0.5 + a1 - a2 * a2;
                        assert_eq!(table[k].to_bits(), expected.to_bits(), "entry {k}");
                        k += 1;
                    }
                }
            }
        }
    }

    #[test]
    fn tabulate_surfaces_domain_errors() {
        let state = Grid::new(vec![0.0]);
        let types = vec![Grid::new(vec![0.0]), Grid::new(vec![0.0])];
        let actions = vec![Grid::new(vec![0.0, 1.0]), Grid::new(vec![1.0])];
        let e = parse2("1/a1");
        assert!(matches!(
            tabulate(&e, &state, &types, &actions),
            Err(Error::Domain { .. })
        ));
    }
}
