//! Expression language for diagrams and their linear combinations.
//!
//! Grammar (precedence: superscript > tensor `*` > compose `.`):
//!
//! ```text
//! expr   := sum
//! sum    := ["-"] prod (("+" | "-") prod)*
//! prod   := scalar? tchain ("." tchain)*
//! tchain := atom ("*" atom)*
//! atom   := NAME superscript? | PERM | "(" expr ")"
//! scalar := (INT ("/" INT)? | "h" ("^" INT)?)+
//! superscript := "^{" INT ("," INT)* "}"
//! PERM   := "(" DIGITS ")" | "(" INT ("," INT)+ ")"
//! ```
//!
//! Composition is right to left: `g . f` applies `f` first. A product of
//! superscripted output-only atoms is a labeled tensor. A scalar with no
//! atom is a multiple of the empty diagram. `h` is the formal deformation
//! variable.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::diagram::{labeled_tensor, Diagram, Dst, Src};
use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::lincomb::LinComb;
use crate::perm::Permutation;
use crate::scalar::Rational;
use crate::signature::Signature;

pub type HRat = HSeries<Rational>;

// ---------------------------------------------------------------------------
// Tokens
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Int(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Dot,
    Star,
    Plus,
    Minus,
    Slash,
    Caret,
    Comma,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let here = (line, col);
        let mut push = |tok: Tok| {
            out.push(Spanned {
                tok,
                line: here.0,
                col: here.1,
            })
        };
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
                continue;
            }
            '(' => {
                chars.next();
                push(Tok::LParen);
            }
            ')' => {
                chars.next();
                push(Tok::RParen);
            }
            '{' => {
                chars.next();
                push(Tok::LBrace);
            }
            '}' => {
                chars.next();
                push(Tok::RBrace);
            }
            '.' => {
                chars.next();
                push(Tok::Dot);
            }
            '*' => {
                chars.next();
                push(Tok::Star);
            }
            '+' => {
                chars.next();
                push(Tok::Plus);
            }
            '-' => {
                chars.next();
                push(Tok::Minus);
            }
            '/' => {
                chars.next();
                push(Tok::Slash);
            }
            '^' => {
                chars.next();
                push(Tok::Caret);
            }
            ',' => {
                chars.next();
                push(Tok::Comma);
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let len = s.len();
                push(Tok::Int(s));
                col += len;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let len = s.len();
                push(Tok::Name(s));
                col += len;
                continue;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        }
        col += 1;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Abstract syntax
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// Generator or `id`/`id0`, with optional labeled-tensor superscript.
    Gen {
        name: String,
        labels: Option<Vec<usize>>,
    },
    /// One-line permutation word.
    Perm(Vec<usize>),
    /// Tensor chain, left to right.
    Tensor(Vec<Expr>),
    /// Composition chain as written: `[a, b]` for `a . b` (b applies
    /// first).
    Compose(Vec<Expr>),
    /// Scalar multiple; `inner = None` is a multiple of the empty diagram.
    Scaled {
        coef: Rational,
        hpow: i64,
        inner: Option<Box<Expr>>,
    },
    Sum(Vec<Expr>),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|s| &s.tok)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1));
        Err(Error::Parse {
            line,
            col,
            msg: msg.to_string(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected {what}"))
        }
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut negate = false;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            negate = true;
        }
        let first = self.parse_prod()?;
        terms.push(if negate { negate_expr(first) } else { first });
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    terms.push(self.parse_prod()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    terms.push(negate_expr(self.parse_prod()?));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Sum(terms)
        })
    }

    fn at_scalar(&self) -> bool {
        match self.peek() {
            Some(Tok::Int(_)) => true,
            Some(Tok::Name(n)) if n == "h" => true,
            _ => false,
        }
    }

    fn parse_scalar(&mut self) -> Result<(Rational, i64)> {
        let mut coef = Rational::one();
        let mut hpow = 0i64;
        while self.at_scalar() {
            match self.bump().unwrap() {
                Tok::Int(s) => {
                    let num: BigInt = s.parse().unwrap();
                    let mut den = BigInt::one();
                    if self.peek() == Some(&Tok::Slash) {
                        self.pos += 1;
                        match self.bump() {
                            Some(Tok::Int(d)) => den = d.parse().unwrap(),
                            _ => return self.err("expected denominator"),
                        }
                        if den.is_zero() {
                            return self.err("zero denominator");
                        }
                    }
                    coef *= Rational::new(num, den);
                }
                Tok::Name(_) => {
                    // `h`, optionally `h^k`
                    if self.peek() == Some(&Tok::Caret) {
                        self.pos += 1;
                        match self.bump() {
                            Some(Tok::Int(k)) => {
                                hpow += k.parse::<i64>().map_err(|_| Error::Parse {
                                    line: 0,
                                    col: 0,
                                    msg: "bad h power".into(),
                                })?;
                            }
                            _ => return self.err("expected integer power of h"),
                        }
                    } else {
                        hpow += 1;
                    }
                }
                _ => unreachable!(),
            }
        }
        Ok((coef, hpow))
    }

    fn parse_prod(&mut self) -> Result<Expr> {
        let (coef, hpow) = if self.at_scalar() {
            self.parse_scalar()?
        } else {
            (Rational::one(), 0)
        };
        let scalar_seen = !coef.is_one() || hpow != 0 || !self.at_atom();
        if !self.at_atom() {
            // a bare scalar is a multiple of the empty diagram
            return Ok(Expr::Scaled {
                coef,
                hpow,
                inner: None,
            });
        }
        let mut chains = vec![self.parse_tchain()?];
        while self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            chains.push(self.parse_tchain()?);
        }
        let body = if chains.len() == 1 {
            chains.pop().unwrap()
        } else {
            Expr::Compose(chains)
        };
        Ok(if scalar_seen && (!coef.is_one() || hpow != 0) {
            Expr::Scaled {
                coef,
                hpow,
                inner: Some(Box::new(body)),
            }
        } else {
            body
        })
    }

    fn at_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Name(n)) if n != "h")
            || matches!(self.peek(), Some(Tok::LParen))
    }

    fn parse_tchain(&mut self) -> Result<Expr> {
        let mut atoms = vec![self.parse_atom()?];
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            atoms.push(self.parse_atom()?);
        }
        Ok(if atoms.len() == 1 {
            atoms.pop().unwrap()
        } else {
            Expr::Tensor(atoms)
        })
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Name(n)) if n != "h" => {
                let name = n.clone();
                self.pos += 1;
                // labeled superscript `^{i,j,...}`
                if self.peek() == Some(&Tok::Caret) && self.peek2() == Some(&Tok::LBrace) {
                    self.pos += 2;
                    let mut labels = Vec::new();
                    loop {
                        match self.bump() {
                            Some(Tok::Int(s)) => match s.parse::<usize>() {
                                Ok(l) => labels.push(l),
                                Err(_) => return self.err("label index out of range"),
                            },
                            _ => return self.err("expected label index"),
                        }
                        match self.bump() {
                            Some(Tok::Comma) => continue,
                            Some(Tok::RBrace) => break,
                            _ => return self.err("expected `,` or `}` in superscript"),
                        }
                    }
                    return Ok(Expr::Gen {
                        name,
                        labels: Some(labels),
                    });
                }
                Ok(Expr::Gen { name, labels: None })
            }
            Some(Tok::LParen) => {
                // permutation literal or parenthesized expression
                if let Some(word) = self.try_perm()? {
                    return Ok(Expr::Perm(word));
                }
                self.pos += 1;
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.err("expected a generator, permutation, or `(`"),
        }
    }

    /// Lookahead for `( digits )` or `( int , int , ... )`.
    fn try_perm(&mut self) -> Result<Option<Vec<usize>>> {
        let start = self.pos;
        debug_assert_eq!(self.peek(), Some(&Tok::LParen));
        let mut i = self.pos + 1;
        let mut ints = Vec::new();
        let mut commas = false;
        loop {
            match self.toks.get(i).map(|s| &s.tok) {
                Some(Tok::Int(s)) => ints.push(s.clone()),
                Some(Tok::RParen) if !ints.is_empty() => {
                    i += 1;
                    break;
                }
                _ => return Ok(None),
            }
            i += 1;
            match self.toks.get(i).map(|s| &s.tok) {
                Some(Tok::Comma) => {
                    commas = true;
                    i += 1;
                }
                Some(Tok::RParen) => {
                    i += 1;
                    break;
                }
                _ => return Ok(None),
            }
        }
        let parsed: Option<Vec<usize>> = ints.iter().map(|s| s.parse().ok()).collect();
        let Some(parsed) = parsed else {
            return Ok(None);
        };
        let word: Vec<usize> = if commas || ints.len() > 1 {
            parsed
        } else {
            ints[0]
                .chars()
                .map(|c| c.to_digit(10).unwrap() as usize)
                .collect()
        };
        if Permutation::from_one_line(&word).is_err() {
            self.pos = start;
            return self.err("not a permutation word");
        }
        self.pos = i;
        Ok(Some(word))
    }
}

fn negate_expr(e: Expr) -> Expr {
    match e {
        Expr::Scaled { coef, hpow, inner } => Expr::Scaled {
            coef: -coef,
            hpow,
            inner,
        },
        other => Expr::Scaled {
            coef: -Rational::one(),
            hpow: 0,
            inner: Some(Box::new(other)),
        },
    }
}

/// Parse source text into an expression tree.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            line: 1,
            col: 1,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.parse_expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Lowering
// ---------------------------------------------------------------------------

impl Expr {
    /// Lower to a linear combination over the signature; `order` sets the
    /// `h` truncation.
    pub fn lower(&self, sig: &Signature, order: i64) -> Result<LinComb<HRat>> {
        match self {
            Expr::Gen { name, labels: None } => {
                let d = match name.as_str() {
                    "id" => Diagram::identity(1),
                    "id0" => Diagram::identity(0),
                    _ => Diagram::generator(sig.lookup(name)?),
                };
                Ok(LinComb::one_term(&d))
            }
            Expr::Gen {
                name,
                labels: Some(labels),
            } => {
                let d = match name.as_str() {
                    "id" | "id0" => {
                        return Err(Error::ArityMismatch(
                            "identity takes no superscript".into(),
                        ));
                    }
                    _ => Diagram::generator(sig.lookup(name)?),
                };
                let lab = labeled_tensor(&[d], std::slice::from_ref(labels))?;
                Ok(LinComb::one_term(&lab))
            }
            Expr::Perm(word) => {
                let sigma = Permutation::from_one_line(word)?;
                Ok(LinComb::one_term(&Diagram::permutation(&sigma)))
            }
            Expr::Tensor(atoms) => {
                let labeled = atoms.iter().filter(|a| is_labeled(a)).count();
                if labeled > 0 {
                    if labeled != atoms.len() {
                        return Err(Error::MalformedPartition(
                            "mixed labeled and plain tensor factors".into(),
                        ));
                    }
                    let mut factors = Vec::new();
                    let mut partition = Vec::new();
                    for a in atoms {
                        let Expr::Gen {
                            name,
                            labels: Some(labels),
                        } = a
                        else {
                            return Err(Error::MalformedPartition(
                                "labels only apply to generators".into(),
                            ));
                        };
                        factors.push(Diagram::generator(sig.lookup(name)?));
                        partition.push(labels.clone());
                    }
                    return Ok(LinComb::one_term(&labeled_tensor(&factors, &partition)?));
                }
                let mut out = atoms[0].lower(sig, order)?;
                for a in &atoms[1..] {
                    out = out.tensor(&a.lower(sig, order)?);
                }
                Ok(out)
            }
            Expr::Compose(chain) => {
                // written left to right, applied right to left
                let mut out = chain.last().unwrap().lower(sig, order)?;
                for part in chain.iter().rev().skip(1) {
                    out = out.compose(&part.lower(sig, order)?)?;
                }
                Ok(out)
            }
            Expr::Scaled { coef, hpow, inner } => {
                let c = HRat::monomial(coef.clone(), *hpow, order)?;
                match inner {
                    None => Ok(LinComb::from_diagram(&Diagram::identity(0), c)),
                    Some(e) => Ok(e.lower(sig, order)?.scale(&c)),
                }
            }
            Expr::Sum(terms) => {
                let mut out = terms[0].lower(sig, order)?;
                for t in &terms[1..] {
                    out = out.add(&t.lower(sig, order)?)?;
                }
                Ok(out)
            }
        }
    }
}

fn is_labeled(e: &Expr) -> bool {
    matches!(e, Expr::Gen { labels: Some(_), .. })
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

/// Canonical slice printing of a diagram: a right-to-left composition of
/// generator slices and permutations.
pub fn print_diagram(d: &Diagram) -> Result<String> {
    if d.vertices.is_empty() && d.n_in == 0 && d.n_out == 0 {
        return Ok("1".into());
    }
    d.validate()?;
    let topo = d.topo_order()?;
    let mut in_srcs: Vec<Vec<Src>> = d.vertices.iter().map(|g| vec![Src::In(0); g.n_in]).collect();
    let mut out_srcs: Vec<Option<Src>> = vec![None; d.n_out];
    for e in &d.edges {
        if let Dst::V(v, s) = e.dst {
            in_srcs[v][s] = e.src;
        }
        if let Dst::Out(j) = e.dst {
            out_srcs[j] = Some(e.src);
        }
    }
    let mut frontier: Vec<Src> = (0..d.n_in).map(Src::In).collect();
    let mut slices: Vec<String> = Vec::new();
    let emit_perm = |word: &[usize], slices: &mut Vec<String>| {
        let sigma = Permutation::from_one_line(word).expect("perm word");
        if !sigma.is_identity() {
            slices.push(sigma.to_string());
        }
    };
    for &v in &topo {
        let g = &d.vertices[v];
        // bring the vertex inputs together, in slot order, at the leftmost
        // of their current positions
        let positions: Vec<usize> = in_srcs[v]
            .iter()
            .map(|src| frontier.iter().position(|f| f == src).expect("live edge"))
            .collect();
        let anchor = positions.iter().copied().min().unwrap_or(frontier.len());
        // build the new frontier order: everything else keeps relative
        // order, vertex inputs inserted at the anchor
        let mut rest: Vec<Src> = frontier
            .iter()
            .filter(|f| !in_srcs[v].contains(f))
            .cloned()
            .collect();
        let anchor = anchor.min(rest.len());
        let mut target: Vec<Src> = Vec::with_capacity(frontier.len());
        target.extend(rest.drain(..anchor));
        target.extend(in_srcs[v].iter().cloned());
        target.extend(rest);
        let word: Vec<usize> = frontier
            .iter()
            .map(|f| target.iter().position(|t| t == f).unwrap() + 1)
            .collect();
        emit_perm(&word, &mut slices);
        // the generator slice
        let width = target.len();
        let mut parts: Vec<String> = Vec::new();
        for _ in 0..anchor {
            parts.push("id".into());
        }
        parts.push(g.name.clone());
        for _ in anchor + g.n_in..width {
            parts.push("id".into());
        }
        if parts.len() == 1 {
            slices.push(parts.pop().unwrap());
        } else {
            slices.push(format!("({})", parts.join(" * ")));
        }
        // splice the outputs in
        let mut new_frontier: Vec<Src> = Vec::with_capacity(width - g.n_in + g.n_out);
        new_frontier.extend(target[..anchor].iter().cloned());
        for s in 0..g.n_out {
            new_frontier.push(Src::V(v, s));
        }
        new_frontier.extend(target[anchor + g.n_in..].iter().cloned());
        frontier = new_frontier;
    }
    // final routing to the outputs
    let word: Vec<usize> = frontier
        .iter()
        .map(|f| {
            out_srcs
                .iter()
                .position(|o| o.as_ref() == Some(f))
                .expect("output edge")
                + 1
        })
        .collect();
    emit_perm(&word, &mut slices);
    if slices.is_empty() {
        return Ok(match d.n_in {
            0 => "1".to_string(),
            1 => "id".to_string(),
            n => vec!["id"; n].join(" * "),
        });
    }
    slices.reverse();
    Ok(slices.join(" . "))
}

/// Canonical printing of a linear combination, one summand per stored
/// `h`-power.
pub fn print_lincomb(x: &LinComb<HRat>) -> Result<String> {
    if x.is_zero() {
        return Ok("0".into());
    }
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (d, c) in x.terms() {
        let body = print_diagram(d.diagram())?;
        for (e, r) in c.iter_terms() {
            let neg = r.is_negative();
            let mag = if neg { -r.clone() } else { r.clone() };
            let mut s = String::new();
            if !mag.is_one() {
                s.push_str(&format!("{mag} "));
            }
            match e {
                0 => {}
                1 => s.push_str("h "),
                k => s.push_str(&format!("h^{k} ")),
            }
            s.push_str(&body);
            parts.push((neg, s));
        }
    }
    let mut out = String::new();
    for (i, (neg, s)) in parts.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push_str("- ");
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(s);
    }
    Ok(out)
}

/// Parse and lower in one step.
pub fn parse_lincomb(text: &str, sig: &Signature, order: i64) -> Result<LinComb<HRat>> {
    parse(text)?.lower(sig, order)
}
