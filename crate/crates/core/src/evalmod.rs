//! Evaluation of diagrams on concrete modules: the free bialgebra on a
//! finite coalgebra, and the enveloping algebra of a free Lie algebra.
//!
//! Evaluation is a topological fold of the diagram with concrete payloads
//! and is independent of the rewrite engine; it is the soundness oracle for
//! normalization.

use std::collections::BTreeMap;
use std::fmt;

use crate::diagram::{Diagram, Dst, Src};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::pbw::{coproduct_monomial, monomial_degree, straighten, PBWElement, PbwMonomial};
use crate::scalar::{rat, Rational, Scalar};

/// Structure constants of a finite-dimensional coalgebra, with an optional
/// cobracket for the co-Poisson case.
#[derive(Debug, Clone)]
pub struct Coalgebra {
    pub dim: usize,
    pub counit: Vec<Rational>,
    /// `delta[c] = [(a, b, coeff)]` meaning `Delta(c) = sum coeff a (x) b`.
    pub delta: Vec<Vec<(usize, usize, Rational)>>,
    pub cobracket: Option<Vec<Vec<(usize, usize, Rational)>>>,
}

impl Coalgebra {
    /// Cocommutative three-dimensional example: a grouplike `g` and two
    /// `g`-primitives `x`, `y` with cobracket `x -> x ^ y`.
    pub fn cocommutative_example() -> Self {
        // basis 0 = g, 1 = x, 2 = y
        let one = || Rational::from_integer(1.into());
        Coalgebra {
            dim: 3,
            counit: vec![one(), Rational::from_integer(0.into()), Rational::from_integer(0.into())],
            delta: vec![
                vec![(0, 0, one())],
                vec![(1, 0, one()), (0, 1, one())],
                vec![(2, 0, one()), (0, 2, one())],
            ],
            cobracket: Some(vec![
                vec![],
                vec![(1, 2, one()), (2, 1, rat(-1, 1))],
                vec![],
            ]),
        }
    }

    /// Non-cocommutative three-dimensional example: the path coalgebra of
    /// one arrow (`e1`, `e2` grouplike, `Delta a = e1 (x) a + a (x) e2`).
    pub fn path_example() -> Self {
        let one = || Rational::from_integer(1.into());
        Coalgebra {
            dim: 3,
            counit: vec![one(), one(), Rational::from_integer(0.into())],
            delta: vec![
                vec![(0, 0, one())],
                vec![(1, 1, one())],
                vec![(0, 2, one()), (2, 1, one())],
            ],
            cobracket: None,
        }
    }
}

/// The modules the evaluator understands.
#[derive(Debug, Clone)]
pub enum ModuleSpec {
    /// Tensor algebra on a coalgebra, words truncated at `max_len`.
    FreeBialg { coalgebra: Coalgebra, max_len: usize },
    /// Enveloping algebra of the free Lie algebra on `n_gens` generators,
    /// truncated at total degree `max_deg`.
    Ue { n_gens: usize, max_deg: usize },
}

/// Element of a tensor power of the tensor algebra on the coalgebra basis.
#[derive(Debug, Clone, PartialEq)]
pub struct WordTensor<S: Scalar> {
    pub slots: usize,
    pub terms: BTreeMap<Vec<Vec<u8>>, S>,
}

impl<S: Scalar> WordTensor<S> {
    pub fn zero(slots: usize) -> Self {
        Self {
            slots,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(words: Vec<Vec<u8>>) -> Self {
        let slots = words.len();
        let mut terms = BTreeMap::new();
        terms.insert(words, S::one());
        Self { slots, terms }
    }

    pub fn add_term(&mut self, key: Vec<Vec<u8>>, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(S::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.slots);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: Scalar> fmt::Display for WordTensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, w) in k.iter().enumerate() {
                if i > 0 {
                    write!(f, "(x)")?;
                }
                if w.is_empty() {
                    write!(f, "1")?;
                } else {
                    for l in w {
                        write!(f, "c{l}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Evaluation result: words over the coalgebra basis or a PBW element.
#[derive(Debug, Clone, PartialEq)]
pub enum TensorValue<S: Scalar> {
    Words(WordTensor<S>),
    Pbw(PBWElement<S>),
}

/// Evaluate a linear combination of diagrams on a module.
pub fn eval_on_module<S: Scalar>(
    x: &LinComb<S>,
    module: &ModuleSpec,
    input: &TensorValue<S>,
) -> Result<TensorValue<S>> {
    match (module, input) {
        (ModuleSpec::FreeBialg { coalgebra, max_len }, TensorValue::Words(w)) => {
            if w.slots != x.bidegree().0 {
                return Err(Error::SizeMismatch(format!(
                    "input has {} slots, diagram wants {}",
                    w.slots,
                    x.bidegree().0
                )));
            }
            let mut out = WordTensor::zero(x.bidegree().1);
            for (d, c) in x.terms() {
                let v = eval_words(d.diagram(), coalgebra, *max_len, w)?;
                out = out.add(&v.scale(c));
            }
            Ok(TensorValue::Words(out))
        }
        (ModuleSpec::Ue { n_gens, max_deg }, TensorValue::Pbw(e)) => {
            if e.slots() != x.bidegree().0 {
                return Err(Error::SizeMismatch(format!(
                    "input has {} slots, diagram wants {}",
                    e.slots(),
                    x.bidegree().0
                )));
            }
            let mut out = PBWElement::zero(x.bidegree().1);
            for (d, c) in x.terms() {
                let v = eval_pbw(d.diagram(), *n_gens, *max_deg, e)?;
                out = out.add(&v.scale(c));
            }
            Ok(TensorValue::Pbw(out))
        }
        _ => Err(Error::SizeMismatch(
            "input value does not match the module".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Word fold (free bialgebra on a coalgebra)
// ---------------------------------------------------------------------------

type WordState = BTreeMap<Src, Vec<u8>>;

fn eval_words<S: Scalar>(
    d: &Diagram,
    c: &Coalgebra,
    max_len: usize,
    input: &WordTensor<S>,
) -> Result<WordTensor<S>> {
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
    let mut out = WordTensor::zero(d.n_out);
    for (words, coeff) in &input.terms {
        let mut states: BTreeMap<WordState, S> = BTreeMap::new();
        let mut init = WordState::new();
        for (i, w) in words.iter().enumerate() {
            if w.len() > max_len {
                return Err(Error::Truncation(format!("input word length {}", w.len())));
            }
            init.insert(Src::In(i), w.clone());
        }
        states.insert(init, coeff.clone());
        for &v in &topo {
            states = word_vertex(&d.vertices[v].name, v, &in_srcs[v], states, c, max_len)?;
        }
        for (st, coeff) in states {
            let mut key = Vec::with_capacity(d.n_out);
            for j in 0..d.n_out {
                let src = out_srcs[j].ok_or_else(|| Error::InvalidDiagram("output".into()))?;
                key.push(st.get(&src).cloned().ok_or_else(|| {
                    Error::InvalidDiagram("dangling output".into())
                })?);
            }
            out.add_term(key, coeff);
        }
    }
    Ok(out)
}

fn word_vertex<S: Scalar>(
    name: &str,
    v: usize,
    in_srcs: &[Src],
    states: BTreeMap<WordState, S>,
    c: &Coalgebra,
    max_len: usize,
) -> Result<BTreeMap<WordState, S>> {
    let mut out: BTreeMap<WordState, S> = BTreeMap::new();
    let mut push = |st: WordState, coeff: S| {
        if coeff.is_zero() {
            return;
        }
        let e = out.entry(st.clone()).or_insert_with(S::zero);
        *e += coeff;
        if e.is_zero() {
            out.remove(&st);
        }
    };
    for (mut st, coeff) in states {
        match name {
            "m" => {
                let mut w = st.remove(&in_srcs[0]).expect("slot");
                let w2 = st.remove(&in_srcs[1]).expect("slot");
                w.extend(w2);
                if w.len() > max_len {
                    return Err(Error::Truncation(format!("word length {}", w.len())));
                }
                st.insert(Src::V(v, 0), w);
                push(st, coeff);
            }
            "eta" => {
                st.insert(Src::V(v, 0), Vec::new());
                push(st, coeff);
            }
            "eps" => {
                let w = st.remove(&in_srcs[0]).expect("slot");
                let mut factor = Rational::from_integer(1.into());
                let mut dead = false;
                for &l in &w {
                    let e = &c.counit[l as usize];
                    if num_traits::Zero::is_zero(e) {
                        dead = true;
                        break;
                    }
                    factor *= e.clone();
                }
                if !dead {
                    push(st, coeff * S::from_rational(&factor));
                }
            }
            "Delta" => {
                let w = st.remove(&in_srcs[0]).expect("slot");
                // multiplicative extension of the coalgebra coproduct
                let mut items: Vec<(Vec<u8>, Vec<u8>, Rational)> =
                    vec![(Vec::new(), Vec::new(), Rational::from_integer(1.into()))];
                for &l in &w {
                    let mut next = Vec::new();
                    for (a, b, f) in &items {
                        for (x, y, coef) in &c.delta[l as usize] {
                            let mut a2 = a.clone();
                            let mut b2 = b.clone();
                            a2.push(*x as u8);
                            b2.push(*y as u8);
                            next.push((a2, b2, f.clone() * coef.clone()));
                        }
                    }
                    items = next;
                }
                for (a, b, f) in items {
                    let mut st2 = st.clone();
                    st2.insert(Src::V(v, 0), a);
                    st2.insert(Src::V(v, 1), b);
                    push(st2, coeff.clone() * S::from_rational(&f));
                }
            }
            "delta" => {
                let cob = c
                    .cobracket
                    .as_ref()
                    .ok_or(Error::NoCoproduct)?;
                let w = st.remove(&in_srcs[0]).expect("slot");
                // derivation along the coproduct
                for i in 0..w.len() {
                    let mut items: Vec<(Vec<u8>, Vec<u8>, Rational)> =
                        vec![(Vec::new(), Vec::new(), Rational::from_integer(1.into()))];
                    for (j, &l) in w.iter().enumerate() {
                        let pairs: Vec<(usize, usize, Rational)> = if j == i {
                            cob[l as usize].clone()
                        } else {
                            c.delta[l as usize].clone()
                        };
                        let mut next = Vec::new();
                        for (a, b, f) in &items {
                            for (x, y, coef) in &pairs {
                                let mut a2 = a.clone();
                                let mut b2 = b.clone();
                                a2.push(*x as u8);
                                b2.push(*y as u8);
                                next.push((a2, b2, f.clone() * coef.clone()));
                            }
                        }
                        items = next;
                    }
                    for (a, b, f) in items {
                        let mut st2 = st.clone();
                        st2.insert(Src::V(v, 0), a);
                        st2.insert(Src::V(v, 1), b);
                        push(st2, coeff.clone() * S::from_rational(&f));
                    }
                }
            }
            other => {
                return Err(Error::InertGenerator(other.to_string()));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// PBW fold (enveloping algebra module)
// ---------------------------------------------------------------------------

type PbwState = BTreeMap<Src, PbwMonomial>;

fn eval_pbw<S: Scalar>(
    d: &Diagram,
    _n_gens: usize,
    max_deg: usize,
    input: &PBWElement<S>,
) -> Result<PBWElement<S>> {
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
    let mut out = PBWElement::zero(d.n_out);
    for (monos, coeff) in input.terms() {
        let mut states: BTreeMap<PbwState, S> = BTreeMap::new();
        let mut init = PbwState::new();
        for (i, m) in monos.iter().enumerate() {
            init.insert(Src::In(i), m.clone());
        }
        states.insert(init, coeff.clone());
        for &v in &topo {
            states = pbw_vertex(&d.vertices[v].name, v, &in_srcs[v], states, max_deg)?;
        }
        for (st, c) in states {
            let mut key = Vec::with_capacity(d.n_out);
            for j in 0..d.n_out {
                let src = out_srcs[j].ok_or_else(|| Error::InvalidDiagram("output".into()))?;
                key.push(st.get(&src).cloned().ok_or_else(|| {
                    Error::InvalidDiagram("dangling output".into())
                })?);
            }
            out.add_term(key, c);
        }
    }
    Ok(out)
}

fn pbw_vertex<S: Scalar>(
    name: &str,
    v: usize,
    in_srcs: &[Src],
    states: BTreeMap<PbwState, S>,
    max_deg: usize,
) -> Result<BTreeMap<PbwState, S>> {
    let mut out: BTreeMap<PbwState, S> = BTreeMap::new();
    let mut push = |st: PbwState, coeff: S| {
        if coeff.is_zero() {
            return;
        }
        let e = out.entry(st.clone()).or_insert_with(S::zero);
        *e += coeff;
        if e.is_zero() {
            out.remove(&st);
        }
    };
    for (mut st, coeff) in states {
        match name {
            "m" => {
                let a = st.remove(&in_srcs[0]).expect("slot");
                let b = st.remove(&in_srcs[1]).expect("slot");
                if monomial_degree(&a) + monomial_degree(&b) > max_deg {
                    return Err(Error::Truncation(format!(
                        "degree {}",
                        monomial_degree(&a) + monomial_degree(&b)
                    )));
                }
                let mut f = a;
                f.extend(b);
                for (mono, c) in straighten::<S>(&f) {
                    let mut st2 = st.clone();
                    st2.insert(Src::V(v, 0), mono);
                    push(st2, coeff.clone() * c);
                }
            }
            "eta" => {
                st.insert(Src::V(v, 0), Vec::new());
                push(st, coeff);
            }
            "eps" => {
                let m = st.remove(&in_srcs[0]).expect("slot");
                if m.is_empty() {
                    push(st, coeff);
                }
            }
            "Delta" => {
                let m = st.remove(&in_srcs[0]).expect("slot");
                for (a, b) in coproduct_monomial(&m) {
                    let mut st2 = st.clone();
                    st2.insert(Src::V(v, 0), a);
                    st2.insert(Src::V(v, 1), b);
                    push(st2, coeff.clone());
                }
            }
            other => {
                return Err(Error::InertGenerator(other.to_string())); // no cobracket here
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::random_diagram;
    use crate::rewrite::normalize;
    use crate::scalar::int;
    use crate::signature::{Signature, Variant};
    use num_traits::Zero;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn check_coalgebra(c: &Coalgebra) {
        // coassociativity and counit on every basis element
        for b in 0..c.dim {
            // (Delta (x) id) Delta = (id (x) Delta) Delta
            let mut left: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
            let mut right: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
            for (x, y, f) in &c.delta[b] {
                for (u, w, g) in &c.delta[*x] {
                    *left.entry((*u, *w, *y)).or_insert_with(Rational::zero) +=
                        f.clone() * g.clone();
                }
                for (u, w, g) in &c.delta[*y] {
                    *right.entry((*x, *u, *w)).or_insert_with(Rational::zero) +=
                        f.clone() * g.clone();
                }
            }
            left.retain(|_, v| !v.is_zero());
            right.retain(|_, v| !v.is_zero());
            assert_eq!(left, right, "coassociativity at {b}");
            // counit
            let mut e_left: BTreeMap<usize, Rational> = BTreeMap::new();
            for (x, y, f) in &c.delta[b] {
                *e_left.entry(*y).or_insert_with(Rational::zero) +=
                    c.counit[*x].clone() * f.clone();
            }
            e_left.retain(|_, v| !v.is_zero());
            assert_eq!(e_left, BTreeMap::from([(b, int(1))]), "counit at {b}");
        }
        // co-Leibniz for the cobracket, when present:
        // (Delta (x) id) delta = ((123) + (213)) (id (x) delta) Delta
        if let Some(cob) = &c.cobracket {
            for b in 0..c.dim {
                let mut lhs: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
                for (x, y, f) in &cob[b] {
                    for (u, w, g) in &c.delta[*x] {
                        *lhs.entry((*u, *w, *y)).or_insert_with(Rational::zero) +=
                            f.clone() * g.clone();
                    }
                }
                let mut rhs: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
                for (x, y, f) in &c.delta[b] {
                    for (u, w, g) in &cob[*y] {
                        // identity placement
                        *rhs.entry((*x, *u, *w)).or_insert_with(Rational::zero) +=
                            f.clone() * g.clone();
                        // (213): content of slot 1 to 2, slot 2 to 1
                        *rhs.entry((*u, *x, *w)).or_insert_with(Rational::zero) +=
                            f.clone() * g.clone();
                    }
                }
                lhs.retain(|_, v| !v.is_zero());
                rhs.retain(|_, v| !v.is_zero());
                assert_eq!(lhs, rhs, "co-Leibniz at {b}");
            }
        }
    }

    #[test]
    fn example_coalgebras_are_coalgebras() {
        check_coalgebra(&Coalgebra::cocommutative_example());
        check_coalgebra(&Coalgebra::path_example());
        // cocommutativity of the first example
        let c = Coalgebra::cocommutative_example();
        for b in 0..c.dim {
            let mut direct: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            let mut flipped: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
            for (x, y, f) in &c.delta[b] {
                *direct.entry((*x, *y)).or_insert_with(Rational::zero) += f.clone();
                *flipped.entry((*y, *x)).or_insert_with(Rational::zero) += f.clone();
            }
            assert_eq!(direct, flipped);
        }
    }

    fn gen(name: &str) -> Diagram {
        let sig = Signature::for_variant(Variant::Cp);
        Diagram::generator(sig.lookup(name).unwrap())
    }

    #[test]
    fn identity_and_unit_law() {
        let module = ModuleSpec::FreeBialg {
            coalgebra: Coalgebra::path_example(),
            max_len: 4,
        };
        let input = TensorValue::Words(WordTensor::<Rational>::basis(vec![vec![2, 0]]));
        let id = LinComb::one_term(&Diagram::identity(1));
        assert_eq!(eval_on_module(&id, &module, &input).unwrap(), input);
        // m o (eta (x) id) acts as the identity
        let chain = gen("eta")
            .tensor(&Diagram::identity(1))
            .compose(&gen("m"))
            .unwrap();
        assert_eq!(
            eval_on_module(&LinComb::one_term(&chain), &module, &input).unwrap(),
            input
        );
    }

    #[test]
    fn unit_law_on_enveloping_module() {
        let module = ModuleSpec::Ue {
            n_gens: 1,
            max_deg: 4,
        };
        let x1 = PBWElement::<Rational>::generator(1);
        let input = TensorValue::Pbw(x1.clone());
        let chain = gen("eta")
            .tensor(&Diagram::identity(1))
            .compose(&gen("m"))
            .unwrap();
        let out = eval_on_module(&LinComb::one_term(&chain), &module, &input).unwrap();
        assert_eq!(out, TensorValue::Pbw(x1));
    }

    #[test]
    fn truncation_overflow_errors() {
        let module = ModuleSpec::FreeBialg {
            coalgebra: Coalgebra::path_example(),
            max_len: 2,
        };
        let input = TensorValue::Words(WordTensor::<Rational>::basis(vec![
            vec![2, 2],
            vec![2],
        ]));
        let m = LinComb::one_term(&gen("m"));
        assert!(matches!(
            eval_on_module(&m, &module, &input),
            Err(Error::Truncation(_))
        ));
    }

    #[test]
    fn normalization_soundness_oracle() {
        // evaluation factors through normalization on random diagrams
        let mut rng = StdRng::seed_from_u64(99);
        let cases = [
            (Variant::Bialg, Coalgebra::path_example()),
            (Variant::Coco, Coalgebra::cocommutative_example()),
            (Variant::Cp, Coalgebra::cocommutative_example()),
        ];
        for (variant, coalg) in cases {
            let sig = Signature::for_variant(variant);
            let module = ModuleSpec::FreeBialg {
                coalgebra: coalg,
                max_len: 10,
            };
            for _ in 0..25 {
                let d = random_diagram(&sig, 1, 2, 4, &mut rng).unwrap();
                let lc = LinComb::<Rational>::one_term(&d);
                let nf = normalize(&lc, variant).unwrap();
                let expanded = nf.to_lincomb().unwrap();
                for letter in 0..3u8 {
                    let input = TensorValue::Words(WordTensor::basis(vec![vec![letter]]));
                    let direct = eval_on_module(&lc, &module, &input).unwrap();
                    let via_nf = eval_on_module(&expanded, &module, &input).unwrap();
                    assert_eq!(direct, via_nf, "soundness broke on {d} ({variant:?})");
                }
                // one two-letter input as well
                let input = TensorValue::Words(WordTensor::basis(vec![vec![1, 2]]));
                let direct = eval_on_module(&lc, &module, &input).unwrap();
                let via_nf = eval_on_module(&expanded, &module, &input).unwrap();
                assert_eq!(direct, via_nf, "soundness broke on words for {d}");
            }
        }
    }

    #[test]
    fn pbw_module_soundness() {
        let mut rng = StdRng::seed_from_u64(17);
        let sig = Signature::for_variant(Variant::Coco);
        let module = ModuleSpec::Ue {
            n_gens: 2,
            max_deg: 8,
        };
        for _ in 0..15 {
            let d = random_diagram(&sig, 1, 1, 4, &mut rng).unwrap();
            let lc = LinComb::<Rational>::one_term(&d);
            let nf = normalize(&lc, Variant::Coco).unwrap();
            let expanded = nf.to_lincomb().unwrap();
            let x1x2 = PBWElement::<Rational>::generator(1)
                .product(&PBWElement::generator(2))
                .unwrap();
            let input = TensorValue::Pbw(x1x2);
            let direct = eval_on_module(&lc, &module, &input).unwrap();
            let via_nf = eval_on_module(&expanded, &module, &input).unwrap();
            assert_eq!(direct, via_nf, "pbw soundness broke on {d}");
        }
    }
}
