//! Formal linear combinations of canonical diagrams, bidegree-homogeneous.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::{CanonicalDiagram, Diagram, Dst, Edge, Src};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct LinComb<S: Scalar> {
    n_in: usize,
    n_out: usize,
    terms: BTreeMap<CanonicalDiagram, S>,
}

impl<S: Scalar> LinComb<S> {
    pub fn zero(n_in: usize, n_out: usize) -> Self {
        Self {
            n_in,
            n_out,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_diagram(d: &Diagram, c: S) -> Self {
        let mut out = Self::zero(d.n_in, d.n_out);
        out.add_term(d.canonical_form(), c);
        out
    }

    pub fn one_term(d: &Diagram) -> Self {
        Self::from_diagram(d, S::one())
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.n_in, self.n_out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalDiagram, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, d: &CanonicalDiagram) -> S {
        self.terms.get(d).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, d: CanonicalDiagram, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(d.diagram().bidegree(), (self.n_in, self.n_out));
        let entry = self.terms.entry(d.clone()).or_insert_with(S::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.bidegree() != other.bidegree() {
            return Err(Error::BidegreeMismatch(
                self.n_in, self.n_out, other.n_in, other.n_out,
            ));
        }
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.add_term(d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&(S::zero() - S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n_in, self.n_out);
        for (d, x) in &self.terms {
            out.add_term(d.clone(), x.clone() * c.clone());
        }
        out
    }

    /// Bilinear composition: apply `self` first, then `other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n_out != other.n_in {
            return Err(Error::ArityMismatch(format!(
                "compose: {} outputs vs {} inputs",
                self.n_out, other.n_in
            )));
        }
        let mut out = Self::zero(self.n_in, other.n_out);
        for (d, c) in &self.terms {
            for (e, x) in &other.terms {
                let comp = d.diagram().compose(e.diagram())?;
                out.add_term(comp.canonical_form(), c.clone() * x.clone());
            }
        }
        Ok(out)
    }

    /// Bilinear tensor product.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n_in + other.n_in, self.n_out + other.n_out);
        for (d, c) in &self.terms {
            for (e, x) in &other.terms {
                let t = d.diagram().tensor(e.diagram());
                out.add_term(t.canonical_form(), c.clone() * x.clone());
            }
        }
        out
    }

    /// Replace every vertex named `gen` (an output-only generator) with a
    /// linear combination, multilinearly.
    pub fn substitute(&self, gen: &str, replacement: &LinComb<S>) -> Result<LinComb<S>> {
        if replacement.n_in != 0 {
            return Err(Error::ArityMismatch(
                "substitution target must have zero inputs".into(),
            ));
        }
        if replacement
            .terms()
            .any(|(d, _)| d.diagram().vertices.iter().any(|g| g.name == gen))
        {
            return Err(Error::ArityMismatch(format!(
                "replacement for `{gen}` mentions the generator itself"
            )));
        }
        let mut out = Self::zero(self.n_in, self.n_out);
        for (d, c) in &self.terms {
            let expanded = substitute_diagram(d.diagram(), gen, replacement)?;
            for (e, x) in expanded.terms {
                out.add_term(e, c.clone() * x);
            }
        }
        Ok(out)
    }
}

fn substitute_diagram<S: Scalar>(
    d: &Diagram,
    gen: &str,
    replacement: &LinComb<S>,
) -> Result<LinComb<S>> {
    let Some(v_del) = d.vertices.iter().position(|g| g.name == gen) else {
        return Ok(LinComb::one_term(d));
    };
    let arity = d.vertices[v_del].n_out;
    if replacement.bidegree() != (0, arity) {
        return Err(Error::BidegreeMismatch(0, arity, replacement.n_in, replacement.n_out));
    }
    // cut the vertex out: its out-slots become fresh global inputs appended
    // after the existing ones
    let mut vertices = d.vertices.clone();
    vertices.remove(v_del);
    let renum = |v: usize| if v > v_del { v - 1 } else { v };
    let mut edges = Vec::with_capacity(d.edges.len());
    for e in &d.edges {
        let src = match e.src {
            Src::V(v, s) if v == v_del => Src::In(d.n_in + s),
            Src::V(v, s) => Src::V(renum(v), s),
            s => s,
        };
        let dst = match e.dst {
            Dst::V(v, s) => Dst::V(renum(v), s),
            t => t,
        };
        edges.push(Edge { src, dst });
    }
    let cut = Diagram {
        n_in: d.n_in + arity,
        n_out: d.n_out,
        vertices,
        edges,
    };
    let mut out = LinComb::zero(d.n_in, d.n_out);
    for (r, c) in replacement.terms() {
        let plugged = Diagram::identity(d.n_in)
            .tensor(r.diagram())
            .compose(&cut)?;
        let rec = substitute_diagram(&plugged, gen, replacement)?;
        for (e, x) in rec.terms {
            out.add_term(e, c.clone() * x);
        }
    }
    Ok(out)
}

impl<S: Scalar> fmt::Display for LinComb<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) {}", d.diagram())?;
        }
        Ok(())
    }
}
