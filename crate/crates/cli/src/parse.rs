//! The problem-file language and its canonical printer.
//!
//! ```text
//! # comment
//! field QQ_t;
//! vars x:0 y:1;
//! eq t*D(y1) + S(y1);
//! target y1^2 - y1;
//! side N;
//! window y1 = [t^2, -2*t^2];
//! bdelta affine a=1 b=1 c=1 e=0;
//! ```
//!
//! Expressions use `+ - * / ^`, integer literals, `t`, unknowns `x<k>` and
//! `y<k>`, and `D(e)`, `S(e)`, `D^k(e)`, `S^k(e)`. Division is only by
//! nonzero constants.

use std::collections::BTreeMap;
use std::fmt;

use dselim::bounds::SyntheticBDelta;
use dselim::seq::{Component, SeqError, SequencePoint, Side};
use dselim::{DSPolynomial, Family, FieldElement, GroundField, Monomial, PolySystem, VarRef};
use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub ground: GroundField,
    pub num_x: u32,
    pub num_y: u32,
    pub equations: Vec<DSPolynomial>,
    pub target: Option<DSPolynomial>,
    pub side: Side,
    pub windows: BTreeMap<Component, Vec<FieldElement>>,
    pub bdelta: Option<SyntheticBDelta>,
}

impl ProblemFile {
    pub fn system(&self) -> PolySystem {
        PolySystem::new(self.ground, self.num_x, self.num_y, self.equations.clone())
    }

    /// The declared windows as one sequence point, if any were given.
    pub fn point(&self) -> Option<Result<SequencePoint, SeqError>> {
        if self.windows.is_empty() {
            return None;
        }
        Some(SequencePoint::new(self.side, self.windows.clone()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::Int(n) => write!(f, "`{}`", n),
            Tok::Sym(c) => write!(f, "`{}`", c),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Int(s.parse().expect("digits")), line: l0, col: c0 });
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line: l0, col: c0 });
        } else if "+-*/^()[];:=,".contains(c) {
            i += 1;
            col += 1;
            out.push(Spanned { tok: Tok::Sym(c), line: l0, col: c0 });
        } else {
            return Err(ParseError { line, col, message: format!("unexpected character `{}`", c) });
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    ground: Option<GroundField>,
    forced: Option<GroundField>,
    vars: Option<(u32, u32)>,
    seen_expr: bool,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here<T>(&self, message: impl Into<String>) -> PResult<T> {
        let s = &self.toks[self.pos];
        Err(ParseError { line: s.line, col: s.col, message: message.into() })
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            self.err_here(format!("expected `{}`, found {}", c, self.peek()))
        }
    }

    fn expect_ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => self.err_here(format!("expected a name, found {}", other)),
        }
    }

    fn expect_u32(&mut self) -> PResult<u32> {
        match self.peek().clone() {
            Tok::Int(n) => match u32::try_from(&n) {
                Ok(v) => {
                    self.next();
                    Ok(v)
                }
                Err(_) => self.err_here(format!("integer {} is too large here", n)),
            },
            other => self.err_here(format!("expected an integer, found {}", other)),
        }
    }

    fn expect_u64(&mut self) -> PResult<u64> {
        match self.peek().clone() {
            Tok::Int(n) => match u64::try_from(&n) {
                Ok(v) => {
                    self.next();
                    Ok(v)
                }
                Err(_) => self.err_here(format!("integer {} is too large here", n)),
            },
            other => self.err_here(format!("expected an integer, found {}", other)),
        }
    }

    fn ground(&self) -> GroundField {
        self.forced.or(self.ground).unwrap_or(GroundField::Q)
    }

    fn file(&mut self) -> PResult<ProblemFile> {
        let mut equations = Vec::new();
        let mut target = None;
        let mut side = None;
        let mut windows = BTreeMap::new();
        let mut bdelta = None;
        loop {
            let kw = match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(s) => s,
                other => return self.err_here(format!("expected a statement, found {}", other)),
            };
            match kw.as_str() {
                "field" => {
                    if self.ground.is_some() {
                        return self.err_here("field declared twice");
                    }
                    if self.seen_expr {
                        return self.err_here("field must be declared before any expression");
                    }
                    self.next();
                    let g = match self.expect_ident()?.as_str() {
                        "QQ" => GroundField::Q,
                        "QQ_t" => GroundField::Qt,
                        other => {
                            self.pos -= 1;
                            return self.err_here(format!("unknown field `{}`, expected QQ or QQ_t", other));
                        }
                    };
                    self.ground = Some(g);
                }
                "vars" => {
                    if self.vars.is_some() {
                        return self.err_here("vars declared twice");
                    }
                    self.next();
                    let (mut q, mut r) = (None, None);
                    while *self.peek() != Tok::Sym(';') {
                        let name = self.expect_ident()?;
                        let slot = match name.as_str() {
                            "x" => &mut q,
                            "y" => &mut r,
                            _ => {
                                self.pos -= 1;
                                return self.err_here(format!("unknown family `{}`, expected x or y", name));
                            }
                        };
                        if slot.is_some() {
                            self.pos -= 1;
                            return self.err_here(format!("family {} declared twice", name));
                        }
                        self.expect_sym(':')?;
                        *slot = Some(self.expect_u32()?);
                    }
                    self.vars = Some((q.unwrap_or(0), r.unwrap_or(0)));
                }
                "eq" => {
                    self.next();
                    equations.push(self.expr()?);
                }
                "target" => {
                    if target.is_some() {
                        return self.err_here("target given twice");
                    }
                    self.next();
                    target = Some(self.expr()?);
                }
                "side" => {
                    if side.is_some() {
                        return self.err_here("side given twice");
                    }
                    self.next();
                    side = Some(match self.expect_ident()?.as_str() {
                        "N" => Side::N,
                        "Z" => Side::Z,
                        other => {
                            self.pos -= 1;
                            return self.err_here(format!("unknown side `{}`, expected N or Z", other));
                        }
                    });
                }
                "window" => {
                    self.next();
                    let (fam, idx) = self.unknown_name()?;
                    if windows.contains_key(&(fam, idx)) {
                        return self.err_here(format!("window for {}{} given twice", fam.letter(), idx));
                    }
                    self.expect_sym('=')?;
                    self.expect_sym('[')?;
                    let mut entries = Vec::new();
                    if *self.peek() != Tok::Sym(']') {
                        loop {
                            entries.push(self.constant()?);
                            if *self.peek() == Tok::Sym(',') {
                                self.next();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect_sym(']')?;
                    windows.insert((fam, idx), entries);
                }
                "bdelta" => {
                    if bdelta.is_some() {
                        return self.err_here("bdelta given twice");
                    }
                    self.next();
                    bdelta = Some(self.bdelta()?);
                }
                other => return self.err_here(format!("unknown statement `{}`", other)),
            }
            self.expect_sym(';')?;
        }
        let (num_x, num_y) = self.vars.unwrap_or((0, 0));
        Ok(ProblemFile {
            ground: self.ground(),
            num_x,
            num_y,
            equations,
            target,
            side: side.unwrap_or_default(),
            windows,
            bdelta,
        })
    }

    fn bdelta(&mut self) -> PResult<SyntheticBDelta> {
        let name = self.expect_ident()?;
        let mut params: BTreeMap<String, u64> = BTreeMap::new();
        while *self.peek() != Tok::Sym(';') {
            let key = self.expect_ident()?;
            self.expect_sym('=')?;
            params.insert(key, self.expect_u64()?);
        }
        bdelta_from(&name, &params).or_else(|m| self.err_here(m))
    }

    /// `x<k>` or `y<k>` naming a declared unknown.
    fn unknown_name(&mut self) -> PResult<(Family, u32)> {
        let name = self.expect_ident()?;
        self.pos -= 1;
        match self.resolve_unknown(&name)? {
            Some(v) => {
                self.next();
                Ok(v)
            }
            None => self.err_here(format!("expected an unknown, found `{}`", name)),
        }
    }

    fn resolve_unknown(&self, name: &str) -> PResult<Option<(Family, u32)>> {
        let mut chars = name.chars();
        let family = match chars.next() {
            Some('x') => Family::X,
            Some('y') => Family::Y,
            _ => return Ok(None),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Ok(None);
        }
        let declared = match (self.vars, family) {
            (Some((q, _)), Family::X) => q,
            (Some((_, r)), Family::Y) => r,
            (None, _) => 0,
        };
        match digits.parse::<u32>() {
            Ok(k) if k >= 1 && k <= declared => Ok(Some((family, k))),
            _ => self.err_here(format!("undeclared unknown `{}`", name)),
        }
    }

    fn constant(&mut self) -> PResult<FieldElement> {
        let at = self.pos;
        let p = self.expr()?;
        if !p.is_constant() {
            self.pos = at;
            return self.err_here("window entries must be constants");
        }
        Ok(p.coefficient(&Monomial::one()))
    }

    fn expr(&mut self) -> PResult<DSPolynomial> {
        self.seen_expr = true;
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Sym('-') => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<DSPolynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.next();
                    acc = &acc * &self.unary()?;
                }
                Tok::Sym('/') => {
                    self.next();
                    let at = self.pos;
                    let d = self.unary()?;
                    if !d.is_constant() {
                        self.pos = at;
                        return self.err_here("division by a non-constant expression");
                    }
                    let Some(inv) = d.coefficient(&Monomial::one()).inv() else {
                        self.pos = at;
                        return self.err_here("division by zero");
                    };
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<DSPolynomial> {
        match self.peek() {
            Tok::Sym('-') => {
                self.next();
                Ok(-&self.unary()?)
            }
            Tok::Sym('+') => {
                self.next();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<DSPolynomial> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.next();
            let e = self.expect_u32()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<DSPolynomial> {
        let g = self.ground();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(DSPolynomial::constant(g, FieldElement::from_rational(BigRational::from_integer(n))))
            }
            Tok::Sym('(') => {
                self.next();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if name == "t" {
                    if g != GroundField::Qt {
                        return self.err_here("`t` is only available over QQ_t");
                    }
                    self.next();
                    return Ok(DSPolynomial::constant(g, FieldElement::t()));
                }
                if name == "D" || name == "S" {
                    self.next();
                    let mut times = 1;
                    if *self.peek() == Tok::Sym('^') {
                        self.next();
                        times = self.expect_u32()?;
                    }
                    self.expect_sym('(')?;
                    let e = self.expr()?;
                    self.expect_sym(')')?;
                    return Ok(if name == "D" { e.delta_derive_by(times) } else { e.sigma_shift_by(times) });
                }
                match self.resolve_unknown(&name)? {
                    Some((family, index)) => {
                        self.next();
                        Ok(DSPolynomial::var(g, VarRef::new(family, index, 0, 0)))
                    }
                    None => self.err_here(format!("unknown name `{}`", name)),
                }
            }
            other => self.err_here(format!("expected an expression, found {}", other)),
        }
    }
}

/// Builds a plug from its name and `key=value` parameters; missing keys are 0.
pub fn bdelta_from(name: &str, params: &BTreeMap<String, u64>) -> Result<SyntheticBDelta, String> {
    let allowed: &[&str] = match name {
        "zero" => &[],
        "constant" => &["c"],
        "affine" => &["a", "b", "c", "e"],
        "power" => &["coef", "exp"],
        other => return Err(format!("unknown bdelta `{}`, expected zero, constant, affine or power", other)),
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(format!("bdelta {} has no parameter `{}`", name, k));
    }
    let p = |k: &str| params.get(k).copied().unwrap_or(0);
    Ok(match name {
        "zero" => SyntheticBDelta::Zero,
        "constant" => SyntheticBDelta::Constant(p("c")),
        "affine" => SyntheticBDelta::Affine { a: p("a"), b: p("b"), c: p("c"), e: p("e") },
        _ => SyntheticBDelta::Power { coef: p("coef"), exp: p("exp") },
    })
}

/// Parses a problem. `field` overrides the declaration in the file.
pub fn parse(text: &str, field: Option<GroundField>) -> Result<ProblemFile, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, ground: None, forced: field, vars: None, seen_expr: false };
    p.file()
}

fn print_bdelta(b: &SyntheticBDelta) -> String {
    match b {
        SyntheticBDelta::Zero => "zero".into(),
        SyntheticBDelta::Constant(c) => format!("constant c={}", c),
        SyntheticBDelta::Affine { a, b, c, e } => format!("affine a={} b={} c={} e={}", a, b, c, e),
        SyntheticBDelta::Power { coef, exp } => format!("power coef={} exp={}", coef, exp),
    }
}

/// Canonical text for a problem; `parse` reads it back to the same value.
pub fn print(p: &ProblemFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("field {};\n", p.ground));
    out.push_str(&format!("vars x:{} y:{};\n", p.num_x, p.num_y));
    for e in &p.equations {
        out.push_str(&format!("eq {};\n", e));
    }
    if let Some(t) = &p.target {
        out.push_str(&format!("target {};\n", t));
    }
    if p.side != Side::N || !p.windows.is_empty() {
        out.push_str(&format!("side {};\n", if p.side == Side::N { "N" } else { "Z" }));
    }
    for ((fam, idx), entries) in &p.windows {
        let items: Vec<String> = entries.iter().map(|e| e.to_string()).collect();
        out.push_str(&format!("window {}{} = [{}];\n", fam.letter(), idx, items.join(", ")));
    }
    if let Some(b) = &p.bdelta {
        out.push_str(&format!("bdelta {};\n", print_bdelta(b)));
    }
    out
}
