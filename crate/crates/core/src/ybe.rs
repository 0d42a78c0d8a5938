//! Classical and quantum Yang-Baxter defects over symbolic carriers, and
//! the triangular inversion of perturbation series.

use crate::error::{Error, Result};
use crate::tensor::{Carrier, FreeSymbols, HRat, LegEmbedding, Sym, TensorSeries};

fn two_slot<C: Carrier>(x: &TensorSeries<C>) -> Result<()> {
    if x.slots != 2 {
        return Err(Error::SizeMismatch(format!(
            "expected 2 tensor slots, got {}",
            x.slots
        )));
    }
    Ok(())
}

/// The three standard embeddings of a two-slot series into three slots.
pub fn legs_12_13_23<C: Carrier>(
    carrier: &C,
    x: &TensorSeries<C>,
) -> Result<(TensorSeries<C>, TensorSeries<C>, TensorSeries<C>)> {
    two_slot(x)?;
    let x12 = x.embed(carrier, &LegEmbedding::new(&[0, 1], 3)?)?;
    let x13 = x.embed(carrier, &LegEmbedding::new(&[0, 2], 3)?)?;
    let x23 = x.embed(carrier, &LegEmbedding::new(&[1, 2], 3)?)?;
    Ok((x12, x13, x23))
}

/// Classical Yang-Baxter sum `[r12, r13] + [r12, r23] + [r13, r23]`.
pub fn cyb<C: Carrier>(carrier: &C, r: &TensorSeries<C>) -> Result<TensorSeries<C>> {
    let (r12, r13, r23) = legs_12_13_23(carrier, r)?;
    let mut out = r12.commutator(carrier, &r13)?;
    out = out.add(&r12.commutator(carrier, &r23)?)?;
    out.add(&r13.commutator(carrier, &r23)?)
}

/// Quantum Yang-Baxter defect `R12 R13 R23 - R23 R13 R12`.
pub fn qybe_defect<C: Carrier>(carrier: &C, r: &TensorSeries<C>) -> Result<TensorSeries<C>> {
    let (r12, r13, r23) = legs_12_13_23(carrier, r)?;
    let lhs = r12.mul(carrier, &r13)?.mul(carrier, &r23)?;
    let rhs = r23.mul(carrier, &r13)?.mul(carrier, &r12)?;
    lhs.sub(&rhs)
}

/// Deformed classical defect
/// `CYB(rho) + h (rho12 rho13 rho23 - rho23 rho13 rho12)`.
pub fn deformed_cybe_defect<C: Carrier>(
    carrier: &C,
    rho: &TensorSeries<C>,
) -> Result<TensorSeries<C>> {
    let (r12, r13, r23) = legs_12_13_23(carrier, rho)?;
    let cubic = r12
        .mul(carrier, &r13)?
        .mul(carrier, &r23)?
        .sub(&r23.mul(carrier, &r13)?.mul(carrier, &r12)?)?;
    cyb(carrier, rho)?.add(&cubic.scale_h(1))
}

/// A perturbation: the weight `k >= 1` of its `h`-power and the polynomial
/// map it applies.
pub struct Perturbation<'a, C: Carrier> {
    pub weight: i64,
    pub map: Box<dyn Fn(&TensorSeries<C>) -> Result<TensorSeries<C>> + 'a>,
}

/// Forward substitution `r + sum_k h^k P_k(r)`.
pub fn perturb_forward<C: Carrier>(
    _carrier: &C,
    perts: &[Perturbation<'_, C>],
    r: &TensorSeries<C>,
) -> Result<TensorSeries<C>> {
    let mut out = r.clone();
    for p in perts {
        if p.weight < 1 {
            return Err(Error::SizeMismatch("perturbation weight must be >= 1".into()));
        }
        out = out.add(&(p.map)(r)?.scale_h(p.weight))?;
    }
    Ok(out)
}

/// Triangular inversion: the `r` with `r + sum_k h^k P_k(r) = target`
/// modulo `h^order`, computed by iterated back-substitution
/// `r <- target - sum_k h^k P_k(r)`. Each pass freezes at least one more
/// `h`-order because every weight is >= 1.
pub fn triangular_invert<C: Carrier>(
    carrier: &C,
    perts: &[Perturbation<'_, C>],
    target: &TensorSeries<C>,
    order: i64,
) -> Result<TensorSeries<C>> {
    let mut r = target.clone();
    for _ in 0..=order.max(1) {
        let mut next = target.clone();
        for p in perts {
            if p.weight < 1 {
                return Err(Error::SizeMismatch(
                    "perturbation weight must be >= 1".into(),
                ));
            }
            next = next.sub(&(p.map)(&r)?.scale_h(p.weight))?;
        }
        if next.eq_mod(&r, order) {
            r = next;
            let check = perturb_forward(carrier, perts, &r)?;
            if !check.eq_mod(target, order) {
                return Err(Error::SizeMismatch(
                    "triangular inversion did not converge to the target".into(),
                ));
            }
            return Ok(r);
        }
        r = next;
    }
    Err(Error::CapExceeded(
        "triangular inversion exceeded its iteration budget (malformed perturbations?)".into(),
    ))
}

/// The generic element `sum_i a_i (x) b_i` with `terms` summands.
pub fn generic_r(order: i64, terms: u32) -> TensorSeries<FreeSymbols> {
    TensorSeries::from_terms(
        2,
        order,
        (1..=terms)
            .map(|i| {
                (
                    vec![vec![Sym::a(i)], vec![Sym::b(i)]],
                    HRat::one_at(order),
                )
            })
            .collect(),
    )
}

/// The sample perturbation `P(r) = sum_{i,j} a_i a_j b_i (x) b_j`,
/// expressed functorially: multiply the first legs of two copies of `r`
/// into slot one and keep the second leg of the second copy.
pub fn sample_p2<C: Carrier>(carrier: &C, r: &TensorSeries<C>) -> Result<TensorSeries<C>> {
    two_slot(r)?;
    // place copy 1 on (slot1, slot3) and copy 2 on (slot2, slot4) of a
    // 4-slot product, then multiply slot3 into slot1 and rename
    let c1 = r.embed(carrier, &LegEmbedding::new(&[0, 2], 4)?)?;
    let c2 = r.embed(carrier, &LegEmbedding::new(&[1, 3], 4)?)?;
    let prod = c1.mul(carrier, &c2)?; // a_i (x) a_j (x) b_i (x) b_j
    // contract slots (1,2,3) into the first output slot
    let mut out = TensorSeries::zero(2, prod.order);
    for (k, c) in prod.terms() {
        let mut firsts = Vec::new();
        for (first, f1) in carrier.mul(&k[0], &k[1]) {
            for (whole, f2) in carrier.mul(&first, &k[2]) {
                firsts.push((whole, f1.clone() * f2));
            }
        }
        for (w, f) in firsts {
            out.add_term(vec![w, k[3].clone()], c.scale(&f));
        }
    }
    Ok(out)
}


#[cfg(test)]
mod naturality_tests {
    use super::*;
    use crate::tensor::Carrier;

    #[test]
    fn cyb_equivariant_under_symbol_renaming() {
        let c = FreeSymbols { max_len: 6 };
        let r = generic_r(6, 2);
        let defect = cyb(&c, &r).unwrap();
        let rename = |s: &Sym| Sym {
            tag: s.tag,
            idx: s.idx + 7,
        };
        let rename_word = |w: &Vec<Sym>| -> Vec<Sym> { w.iter().map(&rename).collect() };
        let renamed_r = TensorSeries::from_terms(
            2,
            6,
            r.terms()
                .map(|(k, coeff)| (k.iter().map(rename_word).collect(), coeff.clone()))
                .collect(),
        );
        let defect_of_renamed = cyb(&c, &renamed_r).unwrap();
        let renamed_defect = TensorSeries::from_terms(
            3,
            6,
            defect
                .terms()
                .map(|(k, coeff)| (k.iter().map(rename_word).collect(), coeff.clone()))
                .collect(),
        );
        assert_eq!(defect_of_renamed, renamed_defect);
        let _ = c.one();
    }
}
