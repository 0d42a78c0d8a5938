//! Truncated `h`-series with entries in tensor powers of a symbolic
//! carrier algebra: the free associative algebra on tagged symbols, or the
//! enveloping algebra of a free Lie algebra (which also carries the
//! coproduct needed by the twist calculus).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hseries::HSeries;
use crate::pbw::{coproduct_monomial, straighten_product_trunc, PbwMonomial};
use crate::perm::Permutation;
use crate::scalar::Rational;

/// Coefficient series used throughout the tensor calculus.
pub type HRat = HSeries<Rational>;

/// A carrier algebra with a distinguished basis.
pub trait Carrier {
    type Elem: Clone + Ord + fmt::Debug;

    fn one(&self) -> Self::Elem;

    /// Basis product, expanded over the basis; truncation drops terms.
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Vec<(Self::Elem, Rational)>;

    /// Coproduct, when the carrier has one.
    fn coproduct(&self, a: &Self::Elem) -> Option<Vec<(Self::Elem, Self::Elem, Rational)>>;

    fn display(&self, a: &Self::Elem) -> String;
}

/// Tagged symbol of the free carrier: `a_i`, `b_i`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym {
    pub tag: u8,
    pub idx: u32,
}

impl Sym {
    pub fn a(idx: u32) -> Self {
        Sym { tag: b'a', idx }
    }
    pub fn b(idx: u32) -> Self {
        Sym { tag: b'b', idx }
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.tag as char, self.idx)
    }
}

/// Free associative algebra on symbols, words truncated at `max_len`
/// (the span of longer words is a two-sided ideal).
#[derive(Debug, Clone)]
pub struct FreeSymbols {
    pub max_len: usize,
}

impl Carrier for FreeSymbols {
    type Elem = Vec<Sym>;

    fn one(&self) -> Self::Elem {
        Vec::new()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Vec<(Self::Elem, Rational)> {
        if a.len() + b.len() > self.max_len {
            return Vec::new();
        }
        let mut w = a.clone();
        w.extend(b);
        vec![(w, Rational::one())]
    }

    fn coproduct(&self, _a: &Self::Elem) -> Option<Vec<(Self::Elem, Self::Elem, Rational)>> {
        None
    }

    fn display(&self, a: &Self::Elem) -> String {
        if a.is_empty() {
            return "1".into();
        }
        a.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
    }
}

/// All symbols of a word sit with tag `a` left of every tag `b`.
pub fn word_normally_ordered(w: &[Sym]) -> bool {
    let mut seen_b = false;
    for s in w {
        match s.tag {
            b'b' => seen_b = true,
            _ if seen_b => return false,
            _ => {}
        }
    }
    true
}

/// The enveloping algebra of the free Lie algebra, truncated by total
/// degree; carries the cocommutative coproduct.
#[derive(Debug, Clone)]
pub struct Enveloping {
    pub n_gens: usize,
    pub max_deg: usize,
}

impl Carrier for Enveloping {
    type Elem = PbwMonomial;

    fn one(&self) -> Self::Elem {
        Vec::new()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Vec<(Self::Elem, Rational)> {
        straighten_product_trunc::<Rational>(a, b, self.max_deg)
    }

    fn coproduct(&self, a: &Self::Elem) -> Option<Vec<(Self::Elem, Self::Elem, Rational)>> {
        Some(
            coproduct_monomial(a)
                .into_iter()
                .map(|(l, r)| (l, r, Rational::one()))
                .collect(),
        )
    }

    fn display(&self, a: &Self::Elem) -> String {
        if a.is_empty() {
            return "1".into();
        }
        a.iter()
            .map(|w| {
                let word: String = w.iter().map(|l| l.to_string()).collect();
                format!("[{word}]")
            })
            .collect::<Vec<_>>()
            .join("")
    }
}

/// Injective placement of tensor legs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegEmbedding {
    pub legs: Vec<usize>, // zero-based target slots
    pub total: usize,
}

impl LegEmbedding {
    pub fn new(legs: &[usize], total: usize) -> Result<Self> {
        let mut seen = vec![false; total];
        for &l in legs {
            if l >= total {
                return Err(Error::SizeMismatch(format!("leg {l} out of {total}")));
            }
            if seen[l] {
                return Err(Error::SizeMismatch(format!("leg {l} repeated")));
            }
            seen[l] = true;
        }
        Ok(Self {
            legs: legs.to_vec(),
            total,
        })
    }
}

/// Formal series in `h` with coefficients in a tensor power of the carrier.
#[derive(Debug)]
pub struct TensorSeries<C: Carrier> {
    pub slots: usize,
    pub order: i64,
    terms: BTreeMap<Vec<C::Elem>, HRat>,
}

impl<C: Carrier> Clone for TensorSeries<C> {
    fn clone(&self) -> Self {
        Self {
            slots: self.slots,
            order: self.order,
            terms: self.terms.clone(),
        }
    }
}

impl<C: Carrier> PartialEq for TensorSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.slots == other.slots && self.terms == other.terms
    }
}

impl<C: Carrier> TensorSeries<C> {
    pub fn zero(slots: usize, order: i64) -> Self {
        Self {
            slots,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(carrier: &C, slots: usize, order: i64) -> Self {
        let mut out = Self::zero(slots, order);
        out.add_term(vec![carrier.one(); slots], HRat::one_at(order));
        out
    }

    pub fn from_terms(slots: usize, order: i64, terms: Vec<(Vec<C::Elem>, HRat)>) -> Self {
        let mut out = Self::zero(slots, order);
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<C::Elem>, &HRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &[C::Elem]) -> HRat {
        self.terms.get(key).cloned().unwrap_or_else(HRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: Vec<C::Elem>, c: HRat) {
        debug_assert_eq!(key.len(), self.slots);
        let c = c.retruncate(self.order);
        if c.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(HRat::zero);
        *entry = entry.add_ref(&c);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.slots != other.slots {
            return Err(Error::SizeMismatch("tensor slot mismatch".into()));
        }
        let mut out = Self::zero(self.slots, self.order.min(other.order));
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.clone());
        }
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.slots, self.order);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &HRat) -> Self {
        let mut out = Self::zero(self.slots, self.order);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x.mul_ref(c));
        }
        out
    }

    pub fn scale_h(&self, k: i64) -> Self {
        let mut out = Self::zero(self.slots, self.order);
        for (key, x) in &self.terms {
            out.add_term(key.clone(), x.shift(k));
        }
        out
    }

    /// Slotwise product.
    pub fn mul(&self, carrier: &C, other: &Self) -> Result<Self> {
        if self.slots != other.slots {
            return Err(Error::SizeMismatch("tensor slot mismatch".into()));
        }
        let mut out = Self::zero(self.slots, self.order.min(other.order));
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let coeff = c1.mul_ref(c2);
                if coeff.is_zero() {
                    continue;
                }
                let mut parts: Vec<(Vec<C::Elem>, Rational)> =
                    vec![(Vec::with_capacity(self.slots), Rational::one())];
                for s in 0..self.slots {
                    let expansions = carrier.mul(&k1[s], &k2[s]);
                    let mut next = Vec::with_capacity(parts.len() * expansions.len());
                    for (prefix, f) in &parts {
                        for (e, g) in &expansions {
                            let mut t = prefix.clone();
                            t.push(e.clone());
                            next.push((t, f.clone() * g.clone()));
                        }
                    }
                    parts = next;
                }
                for (key, f) in parts {
                    out.add_term(key, coeff.scale(&f));
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, carrier: &C, other: &Self) -> Result<Self> {
        self.mul(carrier, other)?.sub(&other.mul(carrier, self)?)
    }

    /// Place the series on the named legs, units elsewhere.
    pub fn embed(&self, carrier: &C, legs: &LegEmbedding) -> Result<Self> {
        if legs.legs.len() != self.slots {
            return Err(Error::SizeMismatch(format!(
                "{} legs for {} slots",
                legs.legs.len(),
                self.slots
            )));
        }
        let mut out = Self::zero(legs.total, self.order);
        for (k, c) in &self.terms {
            let mut key = vec![carrier.one(); legs.total];
            for (i, &slot) in legs.legs.iter().enumerate() {
                key[slot] = k[i].clone();
            }
            out.add_term(key, c.clone());
        }
        Ok(out)
    }

    /// Permute the slots: content of slot `i` moves to `sigma(i)`.
    pub fn permute(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.size() != self.slots {
            return Err(Error::SizeMismatch("permutation size".into()));
        }
        let mut out = Self::zero(self.slots, self.order);
        for (k, c) in &self.terms {
            let mut key = vec![None; self.slots];
            for (i, e) in k.iter().enumerate() {
                key[sigma.apply(i)] = Some(e.clone());
            }
            out.add_term(key.into_iter().map(|e| e.unwrap()).collect(), c.clone());
        }
        Ok(out)
    }

    /// Coproduct applied to one slot, splitting it in place.
    pub fn coproduct_slot(&self, carrier: &C, slot: usize) -> Result<Self> {
        if slot >= self.slots {
            return Err(Error::SizeMismatch("coproduct slot".into()));
        }
        let mut out = Self::zero(self.slots + 1, self.order);
        for (k, c) in &self.terms {
            let Some(pairs) = carrier.coproduct(&k[slot]) else {
                return Err(Error::NoCoproduct);
            };
            for (l, r, f) in pairs {
                let mut key = Vec::with_capacity(self.slots + 1);
                key.extend_from_slice(&k[..slot]);
                key.push(l);
                key.push(r);
                key.extend_from_slice(&k[slot + 1..]);
                out.add_term(key, c.scale(&f));
            }
        }
        Ok(out)
    }

    /// Inverse of a unit-leading series (constant term the unit tuple with
    /// coefficient 1): a finite geometric expansion modulo `h^order`.
    pub fn invert_unit(&self, carrier: &C) -> Result<Self> {
        let one_key = vec![carrier.one(); self.slots];
        let c0 = self.coeff(&one_key);
        if c0.coeff_at(0) != Rational::one() {
            return Err(Error::NonUnit("series is not unit-leading".into()));
        }
        let unit = Self::unit(carrier, self.slots, self.order);
        let nilpotent = unit.sub(self)?;
        if let Some(v) = nilpotent
            .terms()
            .filter_map(|(_, c)| c.valuation())
            .min()
        {
            if v < 1 {
                return Err(Error::NonUnit(
                    "non-unit part must vanish at order zero".into(),
                ));
            }
        }
        let mut inv = unit.clone();
        let mut power = unit.clone();
        for _ in 1..self.order.max(1) {
            power = power.mul(carrier, &nilpotent)?;
            if power.is_zero() {
                break;
            }
            inv = inv.add(&power)?;
        }
        Ok(inv)
    }

    /// Equality of all coefficients below `h^k`.
    pub fn eq_mod(&self, other: &Self, k: i64) -> bool {
        if self.slots != other.slots {
            return false;
        }
        let keys: std::collections::BTreeSet<&Vec<C::Elem>> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|key| self.coeff(key).eq_mod(&other.coeff(key), k))
    }

    pub fn display(&self, carrier: &C) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            let entry: Vec<String> = k.iter().map(|e| carrier.display(e)).collect();
            parts.push(format!("({c}) {}", entry.join(" (x) ")));
        }
        parts.join(" + ")
    }

    /// JSON per the wire schema: slot words plus coefficient windows.
    pub fn to_json(&self, carrier: &C) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                serde_json::json!({
                    "words": k.iter().map(|e| carrier.display(e)).collect::<Vec<_>>(),
                    "hcoeffs": c.iter_terms().map(|(_, x)| x.to_string()).collect::<Vec<_>>(),
                    "val": c.valuation().unwrap_or(0),
                })
            })
            .collect();
        serde_json::json!({ "slots": self.slots, "terms": terms })
    }
}

/// A tensor series over the free symbol carrier is normally ordered when
/// every entry word is.
pub fn normally_ordered(x: &TensorSeries<FreeSymbols>) -> bool {
    x.terms()
        .all(|(k, _)| k.iter().all(|w| word_normally_ordered(w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sy(c: &FreeSymbols, order: i64, entries: &[(&[Sym], &[Sym])]) -> TensorSeries<FreeSymbols> {
        let _ = c;
        TensorSeries::from_terms(
            2,
            order,
            entries
                .iter()
                .map(|(a, b)| {
                    (
                        vec![a.to_vec(), b.to_vec()],
                        HRat::one_at(order),
                    )
                })
                .collect(),
        )
    }

    #[test]
    fn embed_examples() {
        let c = FreeSymbols { max_len: 6 };
        let r = sy(&c, 4, &[(&[Sym::a(1)], &[Sym::b(1)])]);
        // identity embedding
        let e = r
            .embed(&c, &LegEmbedding::new(&[0, 1], 2).unwrap())
            .unwrap();
        assert_eq!(e, r);
        // unit stays unit
        let unit2 = TensorSeries::unit(&c, 2, 4);
        let e3 = unit2
            .embed(&c, &LegEmbedding::new(&[0, 2], 3).unwrap())
            .unwrap();
        assert_eq!(e3, TensorSeries::unit(&c, 3, 4));
        // a (x) b on legs (1,3) of 3
        let e13 = r
            .embed(&c, &LegEmbedding::new(&[0, 2], 3).unwrap())
            .unwrap();
        let expect = TensorSeries::from_terms(
            3,
            4,
            vec![(
                vec![vec![Sym::a(1)], vec![], vec![Sym::b(1)]],
                HRat::one_at(4),
            )],
        );
        assert_eq!(e13, expect);
        assert!(LegEmbedding::new(&[0, 0], 3).is_err());
    }

    #[test]
    fn unit_inversion() {
        let c = FreeSymbols { max_len: 8 };
        let one = TensorSeries::unit(&c, 2, 6);
        assert_eq!(one.invert_unit(&c).unwrap(), one);
        // (1 + h a(x)b)^{-1} multiplies back to 1
        let r = sy(&c, 6, &[(&[Sym::a(1)], &[Sym::b(1)])]).scale_h(1);
        let x = one.add(&r).unwrap();
        let inv = x.invert_unit(&c).unwrap();
        let prod = x.mul(&c, &inv).unwrap();
        assert!(prod.eq_mod(&one, 6));
        let prod2 = inv.mul(&c, &x).unwrap();
        assert!(prod2.eq_mod(&one, 6));
        // non-unit input is rejected
        assert!(r.invert_unit(&c).is_err());
    }

    #[test]
    fn normally_ordered_predicate() {
        let w1 = vec![Sym::a(1), Sym::a(2), Sym::b(1)];
        assert!(word_normally_ordered(&w1));
        let w2 = vec![Sym::b(1), Sym::a(1)];
        assert!(!word_normally_ordered(&w2));
    }

    #[test]
    fn enveloping_carrier_products() {
        let c = Enveloping {
            n_gens: 2,
            max_deg: 4,
        };
        // x2 * x1 = x1 x2 - [x1, x2]
        let x1 = vec![vec![1usize]];
        let x2 = vec![vec![2usize]];
        let prod = c.mul(&x2, &x1);
        assert_eq!(prod.len(), 2);
        // truncation
        let big = vec![vec![1], vec![1], vec![1]];
        assert!(c.mul(&big, &big).is_empty());
        // coproduct splits factors
        let pairs = c.coproduct(&x1).unwrap();
        assert_eq!(pairs.len(), 2);
    }
}
