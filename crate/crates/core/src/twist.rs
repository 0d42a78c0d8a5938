//! Twist functional, twist action, and co-Hochschild differentials over a
//! carrier with a coproduct.

use crate::error::{Error, Result};
use crate::tensor::{Carrier, LegEmbedding, TensorSeries};

fn want_slots<C: Carrier>(x: &TensorSeries<C>, n: usize) -> Result<()> {
    if x.slots != n {
        return Err(Error::SizeMismatch(format!(
            "expected {n} tensor slots, got {}",
            x.slots
        )));
    }
    Ok(())
}

/// Twist functional `(J23 J1,23)^{-1} J12 J12,3` of a unit-leading
/// two-slot series; `J1,23` and `J12,3` apply the carrier coproduct.
pub fn twist_d<C: Carrier>(carrier: &C, j: &TensorSeries<C>) -> Result<TensorSeries<C>> {
    want_slots(j, 2)?;
    let j12 = j.embed(carrier, &LegEmbedding::new(&[0, 1], 3)?)?;
    let j23 = j.embed(carrier, &LegEmbedding::new(&[1, 2], 3)?)?;
    let j1_23 = j.coproduct_slot(carrier, 1)?;
    let j12_3 = j.coproduct_slot(carrier, 0)?;
    let prefix = j23.mul(carrier, &j1_23)?.invert_unit(carrier)?;
    prefix.mul(carrier, &j12)?.mul(carrier, &j12_3)
}

/// Twist action `u * J = u1 u2 J (u12)^{-1}` of a unit-leading one-slot
/// series on two-slot series.
pub fn twist_act<C: Carrier>(
    carrier: &C,
    u: &TensorSeries<C>,
    j: &TensorSeries<C>,
) -> Result<TensorSeries<C>> {
    want_slots(u, 1)?;
    want_slots(j, 2)?;
    let u1 = u.embed(carrier, &LegEmbedding::new(&[0], 2)?)?;
    let u2 = u.embed(carrier, &LegEmbedding::new(&[1], 2)?)?;
    let u12_inv = u.coproduct_slot(carrier, 0)?.invert_unit(carrier)?;
    u1.mul(carrier, &u2)?.mul(carrier, j)?.mul(carrier, &u12_inv)
}

/// Co-Hochschild differential on one-slot elements:
/// `d(kappa) = kappa1 + kappa2 - kappa12`.
pub fn cohochschild_d1<C: Carrier>(
    carrier: &C,
    kappa: &TensorSeries<C>,
) -> Result<TensorSeries<C>> {
    want_slots(kappa, 1)?;
    let k1 = kappa.embed(carrier, &LegEmbedding::new(&[0], 2)?)?;
    let k2 = kappa.embed(carrier, &LegEmbedding::new(&[1], 2)?)?;
    let k12 = kappa.coproduct_slot(carrier, 0)?;
    k1.add(&k2)?.sub(&k12)
}

/// Co-Hochschild differential on two-slot elements:
/// `d(K) = K12,3 - K1,23 - K23 + K12`.
pub fn cohochschild_d2<C: Carrier>(
    carrier: &C,
    k: &TensorSeries<C>,
) -> Result<TensorSeries<C>> {
    want_slots(k, 2)?;
    let k12_3 = k.coproduct_slot(carrier, 0)?;
    let k1_23 = k.coproduct_slot(carrier, 1)?;
    let k23 = k.embed(carrier, &LegEmbedding::new(&[1, 2], 3)?)?;
    let k12 = k.embed(carrier, &LegEmbedding::new(&[0, 1], 3)?)?;
    k12_3.sub(&k1_23)?.sub(&k23)?.add(&k12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};
    use crate::tensor::{Enveloping, HRat};
    use num_traits::One;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn carrier(max_deg: usize) -> Enveloping {
        Enveloping { n_gens: 2, max_deg }
    }

    fn x_tensor_x(order: i64, c: Rational) -> TensorSeries<Enveloping> {
        TensorSeries::from_terms(
            2,
            order,
            vec![(
                vec![vec![vec![1usize]], vec![vec![1usize]]],
                HRat::monomial(c, 1, order).unwrap(),
            )],
        )
    }

    fn random_unit_2slot(
        rng: &mut StdRng,
        order: i64,
        e: &Enveloping,
    ) -> TensorSeries<Enveloping> {
        let mut j = TensorSeries::unit(e, 2, order);
        for g1 in 1..=2usize {
            for g2 in 1..=2usize {
                let c = int(rng.gen_range(-2..=2));
                j.add_term(
                    vec![vec![vec![g1]], vec![vec![g2]]],
                    HRat::monomial(c, 1, order).unwrap(),
                );
            }
        }
        j
    }

    fn random_unit_1slot(
        rng: &mut StdRng,
        order: i64,
        e: &Enveloping,
    ) -> TensorSeries<Enveloping> {
        let mut u = TensorSeries::unit(e, 1, order);
        for g in 1..=2usize {
            let c = int(rng.gen_range(-2..=2));
            u.add_term(vec![vec![vec![g]]], HRat::monomial(c, 1, order).unwrap());
        }
        u
    }

    #[test]
    fn twist_of_unit_is_unit() {
        let e = carrier(6);
        let one = TensorSeries::unit(&e, 2, 4);
        let d = twist_d(&e, &one).unwrap();
        assert_eq!(d, TensorSeries::unit(&e, 3, 4));
    }

    #[test]
    fn twist_expansion_matches_hand_computation() {
        // J = 1 + h c x (x) x in the one-generator enveloping algebra:
        // d(J) = 1 + h^2 c^2 (x^2 (x) x (x) x - x (x) x (x) x^2) + O(h^3)
        let e = Enveloping {
            n_gens: 1,
            max_deg: 8,
        };
        let c = rat(1, 1);
        let j = TensorSeries::unit(&e, 2, 3)
            .add(&x_tensor_x(3, c))
            .unwrap();
        let d = twist_d(&e, &j).unwrap();
        let x = || vec![vec![1usize]];
        let xx = || vec![vec![1usize], vec![1usize]];
        let mut expect = TensorSeries::unit(&e, 3, 3);
        expect.add_term(vec![xx(), x(), x()], HRat::monomial(int(1), 2, 3).unwrap());
        expect.add_term(vec![x(), x(), xx()], HRat::monomial(int(-1), 2, 3).unwrap());
        assert_eq!(d, expect);
    }

    #[test]
    fn action_fixes_unit_and_unit_acts_trivially() {
        let e = carrier(6);
        let mut rng = StdRng::seed_from_u64(3);
        let j = random_unit_2slot(&mut rng, 4, &e);
        let one_u = TensorSeries::unit(&e, 1, 4);
        assert_eq!(twist_act(&e, &one_u, &j).unwrap(), j);
        // u * (1 (x) 1) = u1 u2 (u12)^{-1}
        let u = random_unit_1slot(&mut rng, 4, &e);
        let lhs = twist_act(&e, &u, &TensorSeries::unit(&e, 2, 4)).unwrap();
        let u1 = u.embed(&e, &LegEmbedding::new(&[0], 2).unwrap()).unwrap();
        let u2 = u.embed(&e, &LegEmbedding::new(&[1], 2).unwrap()).unwrap();
        let u12_inv = u
            .coproduct_slot(&e, 0)
            .unwrap()
            .invert_unit(&e)
            .unwrap();
        let rhs = u1.mul(&e, &u2).unwrap().mul(&e, &u12_inv).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn twist_action_is_a_group_action() {
        // (u v) * J = u * (v * J) mod h^4 on random truncated inputs
        let e = carrier(8);
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..5 {
            let u = random_unit_1slot(&mut rng, 4, &e);
            let v = random_unit_1slot(&mut rng, 4, &e);
            let j = random_unit_2slot(&mut rng, 4, &e);
            let uv = u.mul(&e, &v).unwrap();
            let lhs = twist_act(&e, &uv, &j).unwrap();
            let rhs = twist_act(&e, &u, &twist_act(&e, &v, &j).unwrap()).unwrap();
            assert!(lhs.eq_mod(&rhs, 4), "group action law failed");
        }
    }

    #[test]
    fn twist_invariance_in_commutative_carrier() {
        // with one generator everything is invariant, so the twist
        // functional is constant along orbits
        let e = Enveloping {
            n_gens: 1,
            max_deg: 10,
        };
        let j = TensorSeries::unit(&e, 2, 4)
            .add(&x_tensor_x(4, rat(2, 1)))
            .unwrap();
        let mut u = TensorSeries::unit(&e, 1, 4);
        u.add_term(vec![vec![vec![1usize]]], HRat::monomial(int(1), 1, 4).unwrap());
        let d_j = twist_d(&e, &j).unwrap();
        let d_uj = twist_d(&e, &twist_act(&e, &u, &j).unwrap()).unwrap();
        assert!(d_j.eq_mod(&d_uj, 4));
    }

    #[test]
    fn cohochschild_examples() {
        let e = carrier(6);
        // d1(1) = 1 (x) 1 + 1 (x) 1 - Delta(1) = 1 (x) 1
        let one = TensorSeries::unit(&e, 1, 4);
        let d1 = cohochschild_d1(&e, &one).unwrap();
        assert_eq!(d1, TensorSeries::unit(&e, 2, 4));
        // primitives are cocycles
        let x = TensorSeries::from_terms(
            1,
            4,
            vec![(vec![vec![vec![1usize]]], HRat::one_at(4))],
        );
        assert!(cohochschild_d1(&e, &x).unwrap().is_zero());
        // d2 o d1 = 0 on random elements, including non-primitive ones
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let mut kappa = TensorSeries::zero(1, 4);
            kappa.add_term(
                vec![vec![vec![1usize]]],
                HRat::monomial(int(rng.gen_range(-2..=2)), 0, 4).unwrap(),
            );
            kappa.add_term(
                vec![vec![vec![1usize], vec![2usize]]],
                HRat::monomial(int(rng.gen_range(-2..=2)), 1, 4).unwrap(),
            );
            kappa.add_term(
                vec![vec![vec![1usize, 2usize]]],
                HRat::monomial(int(1), 0, 4).unwrap(),
            );
            let k = cohochschild_d1(&e, &kappa).unwrap();
            let dd = cohochschild_d2(&e, &k).unwrap();
            assert!(dd.is_zero(), "d2 d1 != 0 on {}", kappa.display(&e));
        }
        // and the twist coboundary shape: d1(x y) = -x (x) y - y (x) x
        let xy = TensorSeries::from_terms(
            1,
            4,
            vec![(
                vec![vec![vec![1usize], vec![2usize]]],
                HRat::one_at(4),
            )],
        );
        let d = cohochschild_d1(&e, &xy).unwrap();
        let mut expect = TensorSeries::zero(2, 4);
        expect.add_term(
            vec![vec![vec![1usize]], vec![vec![2usize]]],
            HRat::constant(rat(-1, 1)),
        );
        expect.add_term(
            vec![vec![vec![2usize]], vec![vec![1usize]]],
            HRat::constant(rat(-1, 1)),
        );
        assert_eq!(d, expect);
        let _ = HRat::one();
    }
}
