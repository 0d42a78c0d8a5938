//! Free Lie algebras in the Lyndon basis, free Poisson monomials, and the
//! multilinear dimension calculus for the Lie-type props.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::rank_rational;
use crate::lyndon::{is_lyndon, lyndon_multilinear, std_factorization, LyndonWord};
use crate::perm::all_permutations;
use crate::scalar::{Rational, Scalar};

/// Element of the free Lie algebra in the Lyndon basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement<S: Scalar = Rational> {
    terms: BTreeMap<LyndonWord, S>,
}

impl<S: Scalar> LieElement<S> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn generator(letter: usize) -> Self {
        Self::from_word(vec![letter], S::one())
    }

    pub fn from_word(w: LyndonWord, c: S) -> Self {
        debug_assert!(is_lyndon(&w));
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LyndonWord, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[usize]) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, w: LyndonWord, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(S::zero);
        *entry += c;
        if entry.is_zero() {
            // re-borrow to remove; key lookup is cheap at these sizes
            let dead: Vec<LyndonWord> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in dead {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&(S::zero() - S::one()))
    }
}

impl<S: Scalar> fmt::Display for LieElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let word: String = w.iter().map(|l| l.to_string()).collect();
            write!(f, "({c})[{word}]")?;
        }
        Ok(())
    }
}

/// Bracket of two Lyndon basis words, rewritten into the Lyndon basis.
///
/// For Lyndon `u < v` the concatenation `uv` is Lyndon; it equals the
/// standard bracketing `[b(u), b(v)]` exactly when `u` is a letter or the
/// right factor of `u` is `>= v`. Otherwise the Jacobi identity peels the
/// left factor.
pub fn bracket_lyndon<S: Scalar>(u: &[usize], v: &[usize]) -> LieElement<S> {
    match u.cmp(v) {
        std::cmp::Ordering::Equal => LieElement::zero(),
        std::cmp::Ordering::Greater => bracket_lyndon::<S>(v, u).neg(),
        std::cmp::Ordering::Less => {
            if u.len() == 1 {
                let mut w = u.to_vec();
                w.extend_from_slice(v);
                return LieElement::from_word(w, S::one());
            }
            let (u1, u2) = std_factorization(u);
            if u2.as_slice() >= v {
                let mut w = u.to_vec();
                w.extend_from_slice(v);
                return LieElement::from_word(w, S::one());
            }
            // [[u1,u2],v] = [u1,[u2,v]] + [[u1,v],u2]
            let a = lie_bracket(
                &LieElement::from_word(u1.clone(), S::one()),
                &bracket_lyndon::<S>(&u2, v),
            );
            let b = lie_bracket(
                &bracket_lyndon::<S>(&u1, v),
                &LieElement::from_word(u2, S::one()),
            );
            a.add(&b)
        }
    }
}

/// Bilinear bracket of Lie elements.
pub fn lie_bracket<S: Scalar>(a: &LieElement<S>, b: &LieElement<S>) -> LieElement<S> {
    let mut out = LieElement::zero();
    for (u, cu) in a.terms() {
        for (v, cv) in b.terms() {
            let br = bracket_lyndon::<S>(u, v);
            for (w, c) in br.terms() {
                out.add_term(w.clone(), c.clone() * cu.clone() * cv.clone());
            }
        }
    }
    out
}

/// Expand the standard bracketing of a Lyndon word after substituting a Lie
/// element for each letter.
pub fn tree_substitute<S: Scalar>(
    w: &[usize],
    subs: &dyn Fn(usize) -> LieElement<S>,
) -> LieElement<S> {
    if w.len() == 1 {
        return subs(w[0]);
    }
    let (u, v) = std_factorization(w);
    lie_bracket(&tree_substitute(&u, subs), &tree_substitute(&v, subs))
}

/// Relabel letters of a Lie element and re-expand in the Lyndon basis.
pub fn lie_relabel<S: Scalar>(a: &LieElement<S>, map: &dyn Fn(usize) -> usize) -> LieElement<S> {
    let mut out = LieElement::zero();
    for (w, c) in a.terms() {
        let expanded = tree_substitute(w, &|l| LieElement::<S>::generator(map(l)));
        for (u, d) in expanded.terms() {
            out.add_term(u.clone(), d.clone() * c.clone());
        }
    }
    out
}

/// Explicit binary bracketing trees (used by oracles and diagram builders).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LieTree {
    Leaf(usize),
    Node(Box<LieTree>, Box<LieTree>),
}

impl LieTree {
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            LieTree::Leaf(l) => vec![*l],
            LieTree::Node(a, b) => {
                let mut out = a.leaves();
                out.extend(b.leaves());
                out
            }
        }
    }

    pub fn expand<S: Scalar>(&self) -> LieElement<S> {
        match self {
            LieTree::Leaf(l) => LieElement::generator(*l),
            LieTree::Node(a, b) => lie_bracket(&a.expand(), &b.expand()),
        }
    }

    /// Standard bracketing tree of a Lyndon word.
    pub fn standard(w: &[usize]) -> LieTree {
        if w.len() == 1 {
            return LieTree::Leaf(w[0]);
        }
        let (u, v) = std_factorization(w);
        LieTree::Node(
            Box::new(LieTree::standard(&u)),
            Box::new(LieTree::standard(&v)),
        )
    }

    /// All full binary trees over the given leaf sequence.
    pub fn all_shapes(leaves: &[usize]) -> Vec<LieTree> {
        if leaves.len() == 1 {
            return vec![LieTree::Leaf(leaves[0])];
        }
        let mut out = Vec::new();
        for split in 1..leaves.len() {
            for l in Self::all_shapes(&leaves[..split]) {
                for r in Self::all_shapes(&leaves[split..]) {
                    out.push(LieTree::Node(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        out
    }
}

/// Image of a Lie element in the free associative algebra: brackets expand
/// to commutators. Keys are plain words.
pub fn expand_to_assoc<S: Scalar>(a: &LieElement<S>) -> BTreeMap<Vec<usize>, S> {
    let mut out: BTreeMap<Vec<usize>, S> = BTreeMap::new();
    for (w, c) in a.terms() {
        for (word, d) in assoc_of_word::<S>(w) {
            let entry = out.entry(word).or_insert_with(S::zero);
            *entry += d * c.clone();
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn assoc_of_word<S: Scalar>(w: &[usize]) -> BTreeMap<Vec<usize>, S> {
    let mut out = BTreeMap::new();
    if w.len() == 1 {
        out.insert(w.to_vec(), S::one());
        return out;
    }
    let (u, v) = std_factorization(w);
    let a = assoc_of_word::<S>(&u);
    let b = assoc_of_word::<S>(&v);
    for (x, cx) in &a {
        for (y, cy) in &b {
            let mut xy = x.clone();
            xy.extend_from_slice(y);
            let mut yx = y.clone();
            yx.extend_from_slice(x);
            let c = cx.clone() * cy.clone();
            *out.entry(xy).or_insert_with(S::zero) += c.clone();
            *out.entry(yx).or_insert_with(S::zero) += S::zero() - c;
        }
    }
    out.retain(|_, v: &mut S| !v.is_zero());
    out
}

// ---------------------------------------------------------------------------
// Free Poisson algebra: monomials are multisets of Lyndon words.
// ---------------------------------------------------------------------------

/// Monomial of the free Poisson algebra: a sorted multiset of Lyndon words.
pub type FpMonomial = Vec<LyndonWord>;

/// Element of the free Poisson algebra on `usize` letters.
#[derive(Debug, Clone, PartialEq)]
pub struct FPoly<S: Scalar = Rational> {
    terms: BTreeMap<FpMonomial, S>,
}

fn sorted_monomial(mut factors: Vec<LyndonWord>) -> FpMonomial {
    factors.sort();
    factors
}

impl<S: Scalar> FPoly<S> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_monomial(vec![], S::one())
    }

    pub fn generator(letter: usize) -> Self {
        Self::from_monomial(vec![vec![letter]], S::one())
    }

    pub fn from_monomial(factors: Vec<LyndonWord>, c: S) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(sorted_monomial(factors), c);
        }
        Self { terms }
    }

    pub fn from_lie(a: &LieElement<S>) -> Self {
        let mut out = Self::zero();
        for (w, c) in a.terms() {
            out.add_term(vec![w.clone()], c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FpMonomial, &S)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, factors: Vec<LyndonWord>, c: S) {
        if c.is_zero() {
            return;
        }
        let key = sorted_monomial(factors);
        let entry = self.terms.entry(key.clone()).or_insert_with(S::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x.clone() * c.clone());
        }
        out
    }

    /// Commutative product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                let mut fused = m.clone();
                fused.extend(n.iter().cloned());
                out.add_term(fused, c.clone() * d.clone());
            }
        }
        out
    }

    /// Poisson bracket, by the Leibniz rule on both sides and the free Lie
    /// bracket on factors.
    pub fn bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                let coeff = c.clone() * d.clone();
                for (i, u) in m.iter().enumerate() {
                    for (j, v) in n.iter().enumerate() {
                        let br = bracket_lyndon::<S>(u, v);
                        if br.is_zero() {
                            continue;
                        }
                        let mut rest: Vec<LyndonWord> = Vec::with_capacity(m.len() + n.len() - 1);
                        rest.extend(m.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, w)| w.clone()));
                        rest.extend(n.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, w)| w.clone()));
                        for (w, e) in br.terms() {
                            let mut factors = rest.clone();
                            factors.push(w.clone());
                            out.add_term(factors, coeff.clone() * e.clone());
                        }
                    }
                }
            }
        }
        out
    }

    /// Substitute a Poisson element for a letter in every factor, expanding
    /// bracketing trees by the Leibniz rule.
    pub fn substitute(&self, letter: usize, repl: &FPoly<S>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::from_monomial(vec![], c.clone());
            for factor in m {
                let expanded = fp_substitute_word(factor, letter, repl);
                acc = acc.mul(&expanded);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Relabel letters with an injective map.
    pub fn relabel(&self, map: &dyn Fn(usize) -> usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::from_monomial(vec![], c.clone());
            for factor in m {
                let lie = tree_substitute(factor, &|l| LieElement::generator(map(l)));
                acc = acc.mul(&Self::from_lie(&lie));
            }
            out = out.add(&acc);
        }
        out
    }
}

/// Expand the standard bracketing of `w` with `letter` replaced by `repl`
/// (a Poisson element) and every other letter by itself.
fn fp_substitute_word<S: Scalar>(w: &[usize], letter: usize, repl: &FPoly<S>) -> FPoly<S> {
    if !w.contains(&letter) {
        return FPoly::from_monomial(vec![w.to_vec()], S::one());
    }
    if w.len() == 1 {
        return repl.clone();
    }
    let (u, v) = std_factorization(w);
    fp_substitute_word(&u, letter, repl).bracket(&fp_substitute_word(&v, letter, repl))
}

// ---------------------------------------------------------------------------
// Multilinear bases and dimensions
// ---------------------------------------------------------------------------

/// Ordered partitions of `items` into `slots` (possibly empty) subsets,
/// preserving relative order inside each subset.
pub fn distributions(items: &[usize], slots: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = vec![Vec::new(); slots];
    fn rec(items: &[usize], slots: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        match items.split_first() {
            None => out.push(current.clone()),
            Some((&first, rest)) => {
                for s in 0..slots {
                    current[s].push(first);
                    rec(rest, slots, current, out);
                    current[s].pop();
                }
            }
        }
    }
    if slots == 0 {
        if items.is_empty() {
            out.push(vec![]);
        }
        return out;
    }
    rec(items, slots, &mut current, &mut out);
    out
}

/// Multilinear words in `n_letters` letters spread over `slots` ordered
/// slots: the basis of the multilinear part of a tensor power of the free
/// associative algebra. Each entry lists, per slot, the word it carries.
pub fn multilinear_words(n_letters: usize, slots: usize) -> Vec<Vec<Vec<usize>>> {
    let letters: Vec<usize> = (1..=n_letters).collect();
    multilinear_words_on(&letters, slots)
}

/// Same over an explicit letter set.
pub fn multilinear_words_on(letters: &[usize], slots: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for assignment in distributions(letters, slots) {
        // each slot's letters can be ordered arbitrarily
        let per_slot: Vec<Vec<Vec<usize>>> = assignment
            .iter()
            .map(|set| permutations_of(set))
            .collect();
        cartesian(&per_slot, &mut out);
    }
    out
}

/// Multilinear commutative words: per slot a sorted letter set.
pub fn multilinear_comm_on(letters: &[usize], slots: usize) -> Vec<Vec<Vec<usize>>> {
    distributions(letters, slots)
}

/// Multilinear Poisson tuples on an explicit letter set.
pub fn multilinear_poisson_on(letters: &[usize], slots: usize) -> Vec<Vec<FpMonomial>> {
    let mut out = Vec::new();
    for assignment in distributions(letters, slots) {
        let per_slot: Vec<Vec<FpMonomial>> = assignment
            .iter()
            .map(|set| poisson_monomials_on(set))
            .collect();
        cartesian(&per_slot, &mut out);
    }
    out
}

pub fn permutations_of(set: &[usize]) -> Vec<Vec<usize>> {
    if set.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in set.iter().enumerate() {
        let mut rest = set.to_vec();
        rest.remove(i);
        for mut tail in permutations_of(&rest) {
            let mut v = vec![x];
            v.append(&mut tail);
            out.push(v);
        }
    }
    out
}

fn cartesian<T: Clone>(per_slot: &[Vec<T>], out: &mut Vec<Vec<T>>) {
    let mut current = Vec::with_capacity(per_slot.len());
    fn rec<T: Clone>(per_slot: &[Vec<T>], current: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if current.len() == per_slot.len() {
            out.push(current.clone());
            return;
        }
        for item in &per_slot[current.len()] {
            current.push(item.clone());
            rec(per_slot, current, out);
            current.pop();
        }
    }
    rec(per_slot, &mut current, out);
}

/// Multilinear basis of a tensor power of the free Lie algebra: per slot one
/// Lyndon word, supports disjoint and covering `1..=n_letters`, all slots
/// nonempty.
pub fn multilinear_lie_tuples(n_letters: usize, slots: usize) -> Vec<Vec<LyndonWord>> {
    let letters: Vec<usize> = (1..=n_letters).collect();
    let mut out = Vec::new();
    for assignment in distributions(&letters, slots) {
        if assignment.iter().any(|set| set.is_empty()) {
            continue;
        }
        let per_slot: Vec<Vec<LyndonWord>> = assignment
            .iter()
            .map(|set| lyndon_multilinear(set))
            .collect();
        cartesian(&per_slot, &mut out);
    }
    out
}

/// Multilinear basis of a tensor power of the free Poisson algebra: per slot
/// a multiset of Lyndon words; all letter supports disjoint, covering the
/// alphabet. Slots may be empty (the Poisson unit).
pub fn multilinear_poisson_tuples(n_letters: usize, slots: usize) -> Vec<Vec<FpMonomial>> {
    let letters: Vec<usize> = (1..=n_letters).collect();
    multilinear_poisson_on(&letters, slots)
}

/// Multilinear Poisson monomials on a fixed letter set: set partitions with
/// a multilinear Lyndon word on each block.
pub fn poisson_monomials_on(letters: &[usize]) -> Vec<FpMonomial> {
    if letters.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    // first letter goes into a block with some subset of the rest
    let first = letters[0];
    let rest: Vec<usize> = letters[1..].to_vec();
    for mask in 0..(1u32 << rest.len()) {
        let mut block = vec![first];
        let mut remaining = Vec::new();
        for (i, &l) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                block.push(l);
            } else {
                remaining.push(l);
            }
        }
        for w in lyndon_multilinear(&block) {
            for mut tail in poisson_monomials_on(&remaining) {
                let mut m = vec![w.clone()];
                m.append(&mut tail);
                out.push(sorted_monomial(m));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The classical multilinear dimension tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalSpace {
    Alg,
    AlgComm,
    Poisson,
    La,
}

/// Dimension of the multilinear component with `n_letters` letters and `n`
/// tensor slots, by explicit basis enumeration.
pub fn classical_dims(space: ClassicalSpace, n_letters: usize, n: usize) -> Result<usize> {
    if n_letters > 8 || n > 6 {
        return Err(Error::CapExceeded(format!(
            "classical dimension for N={n_letters}, n={n}"
        )));
    }
    Ok(match space {
        ClassicalSpace::Alg => multilinear_words(n_letters, n).len(),
        ClassicalSpace::AlgComm => {
            // per letter, a slot choice
            n.pow(n_letters as u32)
        }
        ClassicalSpace::Poisson => multilinear_poisson_tuples(n_letters, n).len(),
        ClassicalSpace::La => multilinear_lie_tuples(n_letters, n).len(),
    })
}

// ---------------------------------------------------------------------------
// Lie bialgebra prop dimensions: coinvariants of tensor pairs
// ---------------------------------------------------------------------------

fn index_map<K: Ord + Clone>(basis: &[K]) -> BTreeMap<K, usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), i))
        .collect()
}

/// Expansion of a relabeled Lie tuple over the tuple basis.
fn relabel_lie_tuple(
    tuple: &[LyndonWord],
    map: &dyn Fn(usize) -> usize,
) -> Vec<(Vec<LyndonWord>, Rational)> {
    let mut acc: Vec<(Vec<LyndonWord>, Rational)> =
        vec![(Vec::new(), Rational::from_integer(1.into()))];
    for w in tuple {
        let lie: LieElement<Rational> =
            tree_substitute(w, &|l| LieElement::generator(map(l)));
        let mut next = Vec::new();
        for (prefix, c) in &acc {
            for (u, d) in lie.terms() {
                let mut t = prefix.clone();
                t.push(u.clone());
                next.push((t, c.clone() * d.clone()));
            }
        }
        acc = next;
    }
    acc
}

/// Exact dimension of the `N`-strand summand of the Lie bialgebra prop
/// component with `p` inputs and `q` outputs: coinvariants of the diagonal
/// symmetric group action on multilinear Lie tensor pairs, computed as the
/// rank of the group averaging operator.
pub fn lba_component_dim(p: usize, q: usize, n: usize) -> Result<usize> {
    if n > 5 || p > 3 || q > 3 {
        return Err(Error::CapExceeded(format!("lba component p={p},q={q},N={n}")));
    }
    if n == 0 {
        // no strands: only the empty pair when p = q = 0
        return Ok(usize::from(p == 0 && q == 0));
    }
    let left = multilinear_lie_tuples(n, p);
    let right = multilinear_lie_tuples(n, q);
    if left.is_empty() || right.is_empty() {
        return Ok(0);
    }
    let li = index_map(&left);
    let ri = index_map(&right);
    let dim = left.len() * right.len();
    let perms = all_permutations(n);
    let mut rows = Vec::with_capacity(dim);
    for a in &left {
        for b in &right {
            let mut row = vec![Rational::zero(); dim];
            for sigma in &perms {
                let map = |l: usize| sigma.apply(l - 1) + 1;
                for (ta, ca) in relabel_lie_tuple(a, &map) {
                    for (tb, cb) in relabel_lie_tuple(b, &map) {
                        let idx = li[&ta] * right.len() + ri[&tb];
                        row[idx] += ca.clone() * cb.clone();
                    }
                }
            }
            rows.push(row);
        }
    }
    Ok(rank_rational(rows))
}

/// Representatives of tensor pairs whose symmetrizations span the
/// coinvariants: a greedy independent subset in enumeration order.
pub fn lba_component_basis(
    p: usize,
    q: usize,
    n: usize,
) -> Result<Vec<(Vec<LyndonWord>, Vec<LyndonWord>)>> {
    let target = lba_component_dim(p, q, n)?;
    let left = multilinear_lie_tuples(n, p);
    let right = multilinear_lie_tuples(n, q);
    let li = index_map(&left);
    let ri = index_map(&right);
    let dim = left.len() * right.len();
    let perms = all_permutations(n);
    let mut picked = Vec::new();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    'outer: for a in &left {
        for b in &right {
            let mut row = vec![Rational::zero(); dim];
            for sigma in &perms {
                let map = |l: usize| sigma.apply(l - 1) + 1;
                for (ta, ca) in relabel_lie_tuple(a, &map) {
                    for (tb, cb) in relabel_lie_tuple(b, &map) {
                        row[li[&ta] * right.len() + ri[&tb]] += ca.clone() * cb.clone();
                    }
                }
            }
            let mut trial = rows.clone();
            trial.push(row.clone());
            if rank_rational(trial) > rows.len() {
                rows.push(row);
                picked.push((a.clone(), b.clone()));
                if picked.len() == target {
                    break 'outer;
                }
            }
        }
    }
    Ok(picked)
}
