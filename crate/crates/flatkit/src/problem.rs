//! Problem-file parsing.
//!
//! A problem file is a sequence of `;`-terminated statements. Variable
//! declarations come first, everything else refers to them:
//!
//! ```text
//! # blowup chart of the plane
//! base y1 y2;
//! fiber x;
//! ideal: x*y1 - y2;
//! point origin = 0, 0;
//! expect notflat;
//! firstpower 2;
//! oracle degree 1 multiplier 2;
//! ```
//!
//! Polynomials use `+ - * ^` and parentheses, with integer or `p/q`
//! rational coefficients; `^` binds tightest and implicit multiplication
//! is rejected with a pointed message. A `module rank k;` statement
//! followed by `row` statements (one polynomial per component, comma
//! separated) presents a module; without it the module is the algebra
//! itself. `expect`, `firstpower`, `oracle degree .. multiplier ..` and
//! `heavy` are corpus metadata. Errors carry line and column.

use flatkit_core::flatness::{FlatnessProblem, FlatnessStatus};
use flatkit_core::oracle::SearchBounds;
use flatkit_core::presentation::ModulePresentation;
use flatkit_core::tower::RingTower;
use flatkit_core::vector::FreeVector;
use flatkit_core::{Block, Coef, Polynomial, VarId, VarSet, Variable};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed and validated problem plus its corpus metadata.
#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub problem: FlatnessProblem,
    pub points: BTreeMap<String, Vec<Coef>>,
    pub expected: Option<FlatnessStatus>,
    pub expected_first_power: Option<u32>,
    pub oracle_bounds: Option<SearchBounds>,
    pub heavy: bool,
}

const KEYWORDS: &[&str] = &[
    "base",
    "fiber",
    "ideal",
    "module",
    "rank",
    "row",
    "point",
    "expect",
    "flat",
    "notflat",
    "oracle",
    "degree",
    "multiplier",
    "firstpower",
    "heavy",
];

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Equals,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Equals => write!(f, "`=`"),
        }
    }
}

#[derive(Clone, Debug)]
struct Sp {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Sp>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump(&mut chars);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    bump(&mut chars);
                    if c == '\n' {
                        break;
                    }
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                out.push(Sp {
                    tok: Tok::Ident(s),
                    line: tl,
                    col: tc,
                });
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(bump(&mut chars));
                    } else {
                        break;
                    }
                }
                out.push(Sp {
                    tok: Tok::Int(s),
                    line: tl,
                    col: tc,
                });
            }
            _ => {
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    ':' => Tok::Colon,
                    '=' => Tok::Equals,
                    other => {
                        return Err(ParseError::new(
                            tl,
                            tc,
                            format!("unexpected character `{other}`"),
                        ))
                    }
                };
                bump(&mut chars);
                out.push(Sp { tok, line: tl, col: tc });
            }
        }
    }
    Ok(out)
}

/// Degrees beyond this are a typo or an attack, not mathematics.
const MAX_EXPONENT: u32 = 10_000;
/// Recursion guard for pathological nesting.
const MAX_PAREN_DEPTH: usize = 200;

struct Parser {
    toks: Vec<Sp>,
    pos: usize,
    end: (usize, usize),
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Sp> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Sp> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.col)).unwrap_or(self.end)
    }

    fn err_here(&self, message: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, message)
    }

    fn expect(&mut self, want: &Tok) -> Result<Sp, ParseError> {
        match self.next() {
            Some(t) if &t.tok == want => Ok(t),
            Some(t) => Err(ParseError::new(
                t.line,
                t.col,
                format!("expected {want}, found {}", t.tok),
            )),
            None => {
                let (l, c) = self.end;
                Err(ParseError::new(l, c, format!("expected {want}, found end of input")))
            }
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<Sp, ParseError> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Ident(s) if s == word => Ok(t),
                other => Err(ParseError::new(
                    t.line,
                    t.col,
                    format!("expected `{word}`, found {other}"),
                )),
            },
            None => {
                let (l, c) = self.end;
                Err(ParseError::new(l, c, format!("expected `{word}`, found end of input")))
            }
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        match self.next() {
            Some(t) => match t.tok {
                Tok::Ident(s) => Ok((s, t.line, t.col)),
                other => Err(ParseError::new(
                    t.line,
                    t.col,
                    format!("expected an identifier, found {other}"),
                )),
            },
            None => {
                let (l, c) = self.end;
                Err(ParseError::new(l, c, "expected an identifier, found end of input"))
            }
        }
    }

    fn expect_u32(&mut self, what: &str) -> Result<u32, ParseError> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Int(s) => s.parse::<u32>().map_err(|_| {
                    ParseError::new(t.line, t.col, format!("{what} `{s}` out of range"))
                }),
                other => Err(ParseError::new(
                    t.line,
                    t.col,
                    format!("expected {what}, found {other}"),
                )),
            },
            None => {
                let (l, c) = self.end;
                Err(ParseError::new(l, c, format!("expected {what}, found end of input")))
            }
        }
    }
}

struct Universe {
    vars: VarSet,
    by_name: BTreeMap<String, VarId>,
}

impl Universe {
    fn build(
        base: &[(String, usize, usize)],
        fiber: &[(String, usize, usize)],
    ) -> Result<Universe, ParseError> {
        let mut list = Vec::new();
        for (n, _, _) in base {
            list.push(Variable::new(n.as_str(), Block::Base));
        }
        for (n, _, _) in fiber {
            list.push(Variable::new(n.as_str(), Block::Fiber(1)));
        }
        let vars = VarSet::new(list).map_err(|e| {
            // Duplicates are the only reachable failure; point at the
            // second occurrence.
            let dup = base.iter().chain(fiber.iter()).rev().find(|(n, _, _)| {
                base.iter().chain(fiber.iter()).filter(|(m, _, _)| m == n).count() > 1
            });
            let (l, c) = dup.map(|(_, l, c)| (*l, *c)).unwrap_or((1, 1));
            ParseError::new(l, c, e.to_string())
        })?;
        let by_name = vars
            .iter()
            .map(|(id, v)| (v.name.clone(), id))
            .collect();
        Ok(Universe { vars, by_name })
    }
}

/// Polynomial expression parser over a fixed universe.
fn parse_poly(p: &mut Parser, u: &Universe) -> Result<Polynomial, ParseError> {
    parse_expr(p, u)
}

fn parse_expr(p: &mut Parser, u: &Universe) -> Result<Polynomial, ParseError> {
    let mut acc = if matches!(p.peek().map(|t| &t.tok), Some(Tok::Minus)) {
        p.next();
        parse_term(p, u)?.neg()
    } else {
        parse_term(p, u)?
    };
    loop {
        match p.peek().map(|t| t.tok.clone()) {
            Some(Tok::Plus) => {
                p.next();
                acc = acc.add(&parse_term(p, u)?);
            }
            Some(Tok::Minus) => {
                p.next();
                acc = acc.sub(&parse_term(p, u)?);
            }
            Some(Tok::Ident(_) | Tok::Int(_) | Tok::LParen) => {
                return Err(p.err_here(
                    "missing operator; implicit multiplication is not allowed, write `*`",
                ));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(p: &mut Parser, u: &Universe) -> Result<Polynomial, ParseError> {
    let mut acc = parse_factor(p, u)?;
    while matches!(p.peek().map(|t| &t.tok), Some(Tok::Star)) {
        p.next();
        acc = acc.mul(&parse_factor(p, u)?);
    }
    Ok(acc)
}

fn parse_factor(p: &mut Parser, u: &Universe) -> Result<Polynomial, ParseError> {
    let base = parse_atom(p, u)?;
    if matches!(p.peek().map(|t| &t.tok), Some(Tok::Caret)) {
        p.next();
        let (el, ec) = p.here();
        let e = p.expect_u32("exponent")?;
        if e > MAX_EXPONENT {
            return Err(ParseError::new(
                el,
                ec,
                format!("exponent {e} exceeds the supported maximum {MAX_EXPONENT}"),
            ));
        }
        return Ok(base.pow(e, u.vars.len()));
    }
    Ok(base)
}

fn parse_atom(p: &mut Parser, u: &Universe) -> Result<Polynomial, ParseError> {
    let Some(t) = p.next() else {
        let (l, c) = p.end;
        return Err(ParseError::new(l, c, "expected a polynomial, found end of input"));
    };
    match t.tok {
        Tok::Int(s) => {
            let numer = BigInt::from_str(&s)
                .map_err(|_| ParseError::new(t.line, t.col, format!("bad integer `{s}`")))?;
            if matches!(p.peek().map(|x| &x.tok), Some(Tok::Slash)) {
                p.next();
                let Some(d) = p.next() else {
                    let (l, c) = p.end;
                    return Err(ParseError::new(l, c, "expected a denominator, found end of input"));
                };
                let Tok::Int(ds) = &d.tok else {
                    return Err(ParseError::new(
                        d.line,
                        d.col,
                        format!("expected a denominator, found {}", d.tok),
                    ));
                };
                let denom = BigInt::from_str(ds).map_err(|_| {
                    ParseError::new(d.line, d.col, format!("bad integer `{ds}`"))
                })?;
                if denom.is_zero() {
                    return Err(ParseError::new(d.line, d.col, "zero denominator"));
                }
                return Ok(Polynomial::constant(Coef::new(numer, denom), u.vars.len()));
            }
            Ok(Polynomial::constant(Coef::from(numer), u.vars.len()))
        }
        Tok::Ident(name) => match u.by_name.get(&name) {
            Some(id) => Ok(Polynomial::variable(*id, u.vars.len())),
            None => Err(ParseError::new(
                t.line,
                t.col,
                format!("undeclared variable `{name}`"),
            )),
        },
        Tok::LParen => {
            p.depth += 1;
            if p.depth > MAX_PAREN_DEPTH {
                return Err(ParseError::new(t.line, t.col, "parentheses nested too deeply"));
            }
            let inner = parse_expr(p, u)?;
            p.expect(&Tok::RParen)?;
            p.depth -= 1;
            Ok(inner)
        }
        other => Err(ParseError::new(
            t.line,
            t.col,
            format!("expected a polynomial, found {other}"),
        )),
    }
}

fn parse_rational(p: &mut Parser) -> Result<Coef, ParseError> {
    let negative = if matches!(p.peek().map(|t| &t.tok), Some(Tok::Minus)) {
        p.next();
        true
    } else {
        false
    };
    let Some(t) = p.next() else {
        let (l, c) = p.end;
        return Err(ParseError::new(l, c, "expected a rational number, found end of input"));
    };
    let Tok::Int(s) = &t.tok else {
        return Err(ParseError::new(
            t.line,
            t.col,
            format!("expected a rational number, found {}", t.tok),
        ));
    };
    let mut numer = BigInt::from_str(s)
        .map_err(|_| ParseError::new(t.line, t.col, format!("bad integer `{s}`")))?;
    let mut denom = BigInt::from(1);
    if matches!(p.peek().map(|x| &x.tok), Some(Tok::Slash)) {
        p.next();
        let Some(d) = p.next() else {
            let (l, c) = p.end;
            return Err(ParseError::new(l, c, "expected a denominator, found end of input"));
        };
        let Tok::Int(ds) = &d.tok else {
            return Err(ParseError::new(
                d.line,
                d.col,
                format!("expected a denominator, found {}", d.tok),
            ));
        };
        denom = BigInt::from_str(ds)
            .map_err(|_| ParseError::new(d.line, d.col, format!("bad integer `{ds}`")))?;
        if denom.is_zero() {
            return Err(ParseError::new(d.line, d.col, "zero denominator"));
        }
    }
    if negative {
        numer = -numer;
    }
    Ok(Coef::new(numer, denom))
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let toks = lex(text)?;
    let end = toks
        .last()
        .map(|t| (t.line, t.col + 1))
        .unwrap_or((1, 1));
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        depth: 0,
    };

    let mut base: Vec<(String, usize, usize)> = Vec::new();
    let mut fiber: Vec<(String, usize, usize)> = Vec::new();
    let mut universe: Option<Universe> = None;
    let mut ideal: Vec<Polynomial> = Vec::new();
    let mut seen_ideal = false;
    let mut module_rank: Option<usize> = None;
    let mut rows: Vec<FreeVector> = Vec::new();
    let mut points: BTreeMap<String, Vec<Coef>> = BTreeMap::new();
    let mut expected: Option<FlatnessStatus> = None;
    let mut oracle_bounds: Option<SearchBounds> = None;
    let mut expected_first_power: Option<u32> = None;
    let mut heavy = false;

    // Declarations first; the universe is frozen when the first
    // non-declaration statement arrives.
    fn freeze<'a>(
        universe: &'a mut Option<Universe>,
        base: &[(String, usize, usize)],
        fiber: &[(String, usize, usize)],
        at: (usize, usize),
    ) -> Result<&'a Universe, ParseError> {
        if universe.is_none() {
            if base.is_empty() {
                return Err(ParseError::new(
                    at.0,
                    at.1,
                    "no base variables declared; a `base` statement must come first",
                ));
            }
            *universe = Some(Universe::build(base, fiber)?);
        }
        Ok(universe.as_ref().unwrap())
    }

    while let Some(t) = p.next() {
        let (sl, sc) = (t.line, t.col);
        let word = match &t.tok {
            Tok::Ident(s) => s.clone(),
            other => {
                return Err(ParseError::new(
                    sl,
                    sc,
                    format!("expected a statement keyword, found {other}"),
                ))
            }
        };
        match word.as_str() {
            "base" | "fiber" => {
                if universe.is_some() {
                    return Err(ParseError::new(
                        sl,
                        sc,
                        "variable declarations must precede all other statements",
                    ));
                }
                let target_is_base = word == "base";
                if (target_is_base && !base.is_empty()) || (!target_is_base && !fiber.is_empty())
                {
                    return Err(ParseError::new(sl, sc, format!("duplicate `{word}` statement")));
                }
                loop {
                    match p.peek().map(|x| x.tok.clone()) {
                        Some(Tok::Semi) => {
                            p.next();
                            break;
                        }
                        Some(Tok::Ident(_)) => {
                            let (name, l, c) = p.expect_ident()?;
                            if KEYWORDS.contains(&name.as_str()) {
                                return Err(ParseError::new(
                                    l,
                                    c,
                                    format!("`{name}` is a reserved word and cannot name a variable"),
                                ));
                            }
                            if target_is_base {
                                base.push((name, l, c));
                            } else {
                                fiber.push((name, l, c));
                            }
                        }
                        _ => return Err(p.err_here("expected a variable name or `;`")),
                    }
                }
                if target_is_base && base.is_empty() {
                    return Err(ParseError::new(sl, sc, "`base` declares no variables"));
                }
                if !target_is_base && fiber.is_empty() {
                    return Err(ParseError::new(sl, sc, "`fiber` declares no variables"));
                }
            }
            "ideal" => {
                if seen_ideal {
                    return Err(ParseError::new(sl, sc, "duplicate `ideal` statement"));
                }
                seen_ideal = true;
                p.expect(&Tok::Colon)?;
                let u = freeze(&mut universe, &base, &fiber, (sl, sc))?;
                if !matches!(p.peek().map(|x| &x.tok), Some(Tok::Semi)) {
                    loop {
                        let (gl, gc) = p.here();
                        let g = parse_poly(&mut p, u)?;
                        if g.is_constant() && !g.is_zero() {
                            return Err(ParseError::new(
                                gl,
                                gc,
                                "relation is a non-zero constant; the algebra would be zero",
                            ));
                        }
                        ideal.push(g);
                        if matches!(p.peek().map(|x| &x.tok), Some(Tok::Comma)) {
                            p.next();
                        } else {
                            break;
                        }
                    }
                }
                p.expect(&Tok::Semi)?;
            }
            "module" => {
                if module_rank.is_some() {
                    return Err(ParseError::new(sl, sc, "duplicate `module` statement"));
                }
                p.expect_keyword("rank")?;
                let r = p.expect_u32("rank")?;
                if r == 0 {
                    return Err(ParseError::new(sl, sc, "module rank must be positive"));
                }
                freeze(&mut universe, &base, &fiber, (sl, sc))?;
                module_rank = Some(r as usize);
                p.expect(&Tok::Semi)?;
            }
            "row" => {
                let Some(rank) = module_rank else {
                    return Err(ParseError::new(
                        sl,
                        sc,
                        "`row` requires a preceding `module rank` statement",
                    ));
                };
                let u = freeze(&mut universe, &base, &fiber, (sl, sc))?;
                let mut entries = Vec::new();
                loop {
                    entries.push(parse_poly(&mut p, u)?);
                    if matches!(p.peek().map(|x| &x.tok), Some(Tok::Comma)) {
                        p.next();
                    } else {
                        break;
                    }
                }
                if entries.len() != rank {
                    return Err(ParseError::new(
                        sl,
                        sc,
                        format!("row has {} entries, module has rank {rank}", entries.len()),
                    ));
                }
                rows.push(FreeVector::new(entries));
                p.expect(&Tok::Semi)?;
            }
            "point" => {
                let (name, nl, nc) = p.expect_ident()?;
                if points.contains_key(&name) {
                    return Err(ParseError::new(nl, nc, format!("duplicate point `{name}`")));
                }
                p.expect(&Tok::Equals)?;
                let u = freeze(&mut universe, &base, &fiber, (sl, sc))?;
                let mut coords = Vec::new();
                loop {
                    coords.push(parse_rational(&mut p)?);
                    if matches!(p.peek().map(|x| &x.tok), Some(Tok::Comma)) {
                        p.next();
                    } else {
                        break;
                    }
                }
                let n = u.vars.n_base();
                if coords.len() != n {
                    return Err(ParseError::new(
                        sl,
                        sc,
                        format!("point has {} coordinates, base has {n} variables", coords.len()),
                    ));
                }
                points.insert(name, coords);
                p.expect(&Tok::Semi)?;
            }
            "expect" => {
                if expected.is_some() {
                    return Err(ParseError::new(sl, sc, "duplicate `expect` statement"));
                }
                let (v, vl, vc) = p.expect_ident()?;
                expected = Some(match v.as_str() {
                    "flat" => FlatnessStatus::Flat,
                    "notflat" => FlatnessStatus::NotFlat,
                    other => {
                        return Err(ParseError::new(
                            vl,
                            vc,
                            format!("expected `flat` or `notflat`, found `{other}`"),
                        ))
                    }
                });
                p.expect(&Tok::Semi)?;
            }
            "oracle" => {
                if oracle_bounds.is_some() {
                    return Err(ParseError::new(sl, sc, "duplicate `oracle` statement"));
                }
                p.expect_keyword("degree")?;
                let d = p.expect_u32("degree bound")?;
                p.expect_keyword("multiplier")?;
                let e = p.expect_u32("multiplier bound")?;
                oracle_bounds = Some(SearchBounds::new(d, e));
                p.expect(&Tok::Semi)?;
            }
            "firstpower" => {
                if expected_first_power.is_some() {
                    return Err(ParseError::new(sl, sc, "duplicate `firstpower` statement"));
                }
                expected_first_power = Some(p.expect_u32("power")?);
                p.expect(&Tok::Semi)?;
            }
            "heavy" => {
                heavy = true;
                p.expect(&Tok::Semi)?;
            }
            other => {
                return Err(ParseError::new(sl, sc, format!("unknown statement `{other}`")))
            }
        }
    }

    let u = freeze(&mut universe, &base, &fiber, (1, 1))?;
    let tower = RingTower::new(u.vars.clone(), ideal)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    let presentation = match module_rank {
        None => ModulePresentation::algebra(tower),
        Some(r) => ModulePresentation::new(tower, r, rows)
            .map_err(|e| ParseError::new(1, 1, e.to_string()))?,
    };
    Ok(ProblemFile {
        problem: FlatnessProblem::new(presentation),
        points,
        expected,
        expected_first_power,
        oracle_bounds,
        heavy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blowup_file_parses() {
        let f = parse_problem(
            "# comment\nbase y1 y2;\nfiber x;\nideal: x*y1 - y2;\npoint origin = 0, 0;\nexpect notflat;\nfirstpower 2;\noracle degree 1 multiplier 2;\n",
        )
        .unwrap();
        let pres = &f.problem.presentation;
        assert_eq!(pres.vars().len(), 3);
        assert_eq!(pres.vars().n_base(), 2);
        assert_eq!(
            pres.tower().relations()[0].to_display_string(pres.vars()),
            "y1*x - y2"
        );
        assert_eq!(f.expected, Some(FlatnessStatus::NotFlat));
        assert_eq!(f.expected_first_power, Some(2));
        assert_eq!(f.oracle_bounds, Some(SearchBounds::new(1, 2)));
        assert_eq!(f.points["origin"], vec![Coef::from(BigInt::from(0)); 2]);
        assert!(!f.heavy);
    }

    #[test]
    fn module_rows_parse() {
        let f = parse_problem("base y1 y2;\nmodule rank 2;\nrow y2, -y1;\n").unwrap();
        let pres = &f.problem.presentation;
        assert_eq!(pres.rank(), 2);
        assert_eq!(
            pres.relations()[0].to_display_string(pres.vars()),
            "[y2, -y1]"
        );
    }

    #[test]
    fn empty_ideal_is_free() {
        let f = parse_problem("base y1; fiber x; ideal: ;").unwrap();
        assert!(f.problem.presentation.tower().relations().is_empty());
    }

    #[test]
    fn undeclared_variable_is_reported_with_location() {
        let e = parse_problem("base y1;\nideal: y1*z;\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 11));
        assert!(e.message.contains("undeclared variable `z`"));
    }

    #[test]
    fn implicit_multiplication_is_rejected() {
        let e = parse_problem("base y1;\nideal: 2 y1;\n").unwrap_err();
        assert!(e.message.contains("implicit multiplication"));
        assert_eq!(e.line, 2);
    }

    #[test]
    fn rational_coefficients_and_parens() {
        let f = parse_problem("base y1 y2; ideal: 1/2*(y1 + y2)^2 - y1;").unwrap();
        let pres = &f.problem.presentation;
        assert_eq!(
            pres.tower().relations()[0].to_display_string(pres.vars()),
            "1/2*y1^2 + y1*y2 + 1/2*y2^2 - y1"
        );
    }

    #[test]
    fn caret_binds_tighter_than_star() {
        let f = parse_problem("base y1; fiber x; ideal: x^2 - y1;").unwrap();
        let pres = &f.problem.presentation;
        assert_eq!(
            pres.tower().relations()[0].to_display_string(pres.vars()),
            "x^2 - y1"
        );
    }

    #[test]
    fn row_arity_mismatch() {
        let e = parse_problem("base y1;\nmodule rank 2;\nrow y1;\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("row has 1 entries, module has rank 2"));
    }

    #[test]
    fn declarations_must_come_first() {
        let e = parse_problem("base y1; ideal: y1; fiber x;").unwrap_err();
        assert!(e.message.contains("must precede"));
    }

    #[test]
    fn reserved_words_rejected_as_variables() {
        let e = parse_problem("base row;").unwrap_err();
        assert!(e.message.contains("reserved word"));
    }

    #[test]
    fn point_arity_checked() {
        let e = parse_problem("base y1 y2; point p = 1;").unwrap_err();
        assert!(e.message.contains("point has 1 coordinates, base has 2 variables"));
    }

    #[test]
    fn constant_relation_rejected() {
        let e = parse_problem("base y1; ideal: 3;").unwrap_err();
        assert!(e.message.contains("non-zero constant"));
    }

    #[test]
    fn absurd_exponents_are_rejected() {
        let e = parse_problem("base y1; ideal: y1^999999999;").unwrap_err();
        assert!(e.message.contains("exceeds the supported maximum"));
    }

    #[test]
    fn deep_nesting_is_rejected_not_a_stack_overflow() {
        let mut src = String::from("base y1; ideal: ");
        for _ in 0..500 {
            src.push('(');
        }
        src.push_str("y1");
        for _ in 0..500 {
            src.push(')');
        }
        src.push(';');
        let e = parse_problem(&src).unwrap_err();
        assert!(e.message.contains("nested too deeply"));
    }

    #[test]
    fn negative_rational_point_coordinates() {
        let f = parse_problem("base y1 y2; point p = -1/2, 3;").unwrap();
        assert_eq!(f.points["p"][0], Coef::new(BigInt::from(-1), BigInt::from(2)));
    }

    #[test]
    fn printed_polynomials_reparse() {
        let src = "base y1 y2; fiber x; ideal: x^2*y1 - 1/3*y2 + 2, y1*y2 - x;";
        let f = parse_problem(src).unwrap();
        let pres = &f.problem.presentation;
        for g in pres.tower().relations() {
            let printed = g.to_display_string(pres.vars());
            let back = parse_problem(&format!("base y1 y2; fiber x; ideal: {printed};")).unwrap();
            assert_eq!(&back.problem.presentation.tower().relations()[0], g);
        }
    }
}
