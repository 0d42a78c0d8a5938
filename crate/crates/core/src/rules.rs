//! Defining relation lists per variant, as checkable pairs of linear
//! combinations, plus substitution-based verification for the variants
//! whose extra generator is inert under rewriting.

use crate::diagram::{labeled_tensor, Diagram};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::perm::Permutation;
use crate::rewrite::check_relation;
use crate::scalar::Scalar;
use crate::signature::{Gen, Signature, Variant};

#[derive(Debug, Clone)]
pub struct Relation<S: Scalar> {
    pub name: &'static str,
    pub lhs: LinComb<S>,
    pub rhs: LinComb<S>,
}

fn g(name: &str) -> Diagram {
    let sig = Signature::for_variant(Variant::Qt);
    match sig.lookup(name) {
        Ok(gen) => Diagram::generator(gen),
        Err(_) => match name {
            "delta" => Diagram::generator(&Gen::new("delta", 1, 2)),
            "deltat" => Diagram::generator(&Gen::new("deltat", 1, 2)),
            "rho" => Diagram::generator(&Gen::new("rho", 0, 2)),
            _ => unreachable!("generator {name}"),
        },
    }
}

fn id(n: usize) -> Diagram {
    Diagram::identity(n)
}

fn p(word: &[usize]) -> Diagram {
    Diagram::permutation(&Permutation::from_one_line(word).unwrap())
}

fn lc<S: Scalar>(d: &Diagram) -> LinComb<S> {
    LinComb::one_term(d)
}

fn chain(parts: &[&Diagram]) -> Diagram {
    let mut d = parts[0].clone();
    for part in &parts[1..] {
        d = d.compose(part).expect("relation chain");
    }
    d
}

/// Sum of permutation-twisted copies: `(sum of sigmas) o d`.
fn perm_sum<S: Scalar>(d: &Diagram, words: &[&[usize]]) -> LinComb<S> {
    let mut out = LinComb::zero(d.n_in, d.n_out);
    for w in words {
        let t = d.compose(&p(w)).expect("perm sum");
        out = out.add(&lc(&t)).expect("perm sum");
    }
    out
}

fn mu<S: Scalar>() -> LinComb<S> {
    // m - m o (21)
    lc(&g("m"))
        .sub(&lc(&chain(&[&p(&[2, 1]), &g("m")])))
        .expect("mu")
}

/// The classical Yang-Baxter sum `[r12,r13] + [r12,r23] + [r13,r23]` for a
/// `(0,2)` generator, written through labeled tensors and `mu = m - m(21)`.
fn cyb_sum<S: Scalar>(r_name: &str) -> LinComb<S> {
    let r = g(r_name);
    let r13_r24 = labeled_tensor(&[r.clone(), r.clone()], &[vec![1, 3], vec![2, 4]]).unwrap();
    let r12_r34 = labeled_tensor(&[r.clone(), r.clone()], &[vec![1, 2], vec![3, 4]]).unwrap();
    let mu_lc = mu::<S>();
    let i1 = lc(&id(1));
    let t1 = lc(&r13_r24)
        .compose(&mu_lc.tensor(&i1).tensor(&i1))
        .unwrap();
    let t2 = lc(&r12_r34)
        .compose(&i1.tensor(&mu_lc).tensor(&i1))
        .unwrap();
    let t3 = lc(&r13_r24)
        .compose(&i1.tensor(&i1).tensor(&mu_lc))
        .unwrap();
    t1.add(&t2).unwrap().add(&t3).unwrap()
}

fn bialg_relations<S: Scalar>() -> Vec<Relation<S>> {
    let m = g("m");
    let d = g("Delta");
    let eta = g("eta");
    let eps = g("eps");
    vec![
        Relation {
            name: "m-assoc",
            lhs: lc(&chain(&[&m.tensor(&id(1)), &m])),
            rhs: lc(&chain(&[&id(1).tensor(&m), &m])),
        },
        Relation {
            name: "m-unit-left",
            lhs: lc(&chain(&[&eta.tensor(&id(1)), &m])),
            rhs: lc(&id(1)),
        },
        Relation {
            name: "m-unit-right",
            lhs: lc(&chain(&[&id(1).tensor(&eta), &m])),
            rhs: lc(&id(1)),
        },
        Relation {
            name: "coassoc",
            lhs: lc(&chain(&[&d, &d.tensor(&id(1))])),
            rhs: lc(&chain(&[&d, &id(1).tensor(&d)])),
        },
        Relation {
            name: "counit-left",
            lhs: lc(&chain(&[&d, &eps.tensor(&id(1))])),
            rhs: lc(&id(1)),
        },
        Relation {
            name: "counit-right",
            lhs: lc(&chain(&[&d, &id(1).tensor(&eps)])),
            rhs: lc(&id(1)),
        },
        Relation {
            name: "compat",
            lhs: lc(&chain(&[&m, &d])),
            rhs: lc(&chain(&[
                &d.tensor(&d),
                &p(&[1, 3, 2, 4]),
                &m.tensor(&m),
            ])),
        },
        Relation {
            name: "delta-eta",
            lhs: lc(&chain(&[&eta, &d])),
            rhs: lc(&eta.tensor(&eta)),
        },
        Relation {
            name: "eps-m",
            lhs: lc(&chain(&[&m, &eps])),
            rhs: lc(&eps.tensor(&eps)),
        },
        Relation {
            name: "eps-eta",
            lhs: lc(&chain(&[&eta, &eps])),
            rhs: lc(&id(0)),
        },
    ]
}

fn cocomm_relation<S: Scalar>() -> Relation<S> {
    Relation {
        name: "cocomm",
        lhs: lc(&chain(&[&g("Delta"), &p(&[2, 1])])),
        rhs: lc(&g("Delta")),
    }
}

fn cp_relations<S: Scalar>() -> Vec<Relation<S>> {
    let d = g("Delta");
    let del = g("delta");
    let m = g("m");
    let eta = g("eta");
    let eps = g("eps");
    let dd = chain(&[&del, &del.tensor(&id(1))]);
    vec![
        Relation {
            name: "delta-anticocomm",
            lhs: lc(&del)
                .add(&lc(&chain(&[&del, &p(&[2, 1])])))
                .unwrap(),
            rhs: LinComb::zero(1, 2),
        },
        Relation {
            name: "co-jacobi",
            lhs: perm_sum(&dd, &[&[1, 2, 3], &[2, 3, 1], &[3, 1, 2]]),
            rhs: LinComb::zero(1, 3),
        },
        Relation {
            name: "co-leibniz",
            lhs: lc(&chain(&[&del, &d.tensor(&id(1))])),
            rhs: perm_sum(
                &chain(&[&d, &id(1).tensor(&del)]),
                &[&[1, 2, 3], &[2, 1, 3]],
            ),
        },
        Relation {
            name: "delta-m",
            lhs: lc(&chain(&[&m, &del])),
            rhs: {
                let route = |top: &Diagram| {
                    chain(&[top, &p(&[1, 3, 2, 4]), &m.tensor(&m)])
                };
                lc(&route(&del.tensor(&d)))
                    .add(&lc(&route(&d.tensor(&del))))
                    .unwrap()
            },
        },
        Relation {
            name: "delta-eta-zero",
            lhs: lc(&chain(&[&eta, &del])),
            rhs: LinComb::zero(0, 2),
        },
        Relation {
            name: "eps-delta-zero",
            lhs: lc(&chain(&[&del, &eps.tensor(&id(1))])),
            rhs: LinComb::zero(1, 1),
        },
    ]
}

fn qt_relations<S: Scalar>() -> Vec<Relation<S>> {
    let r = g("r");
    let d = g("Delta");
    let m = g("m");
    let eta = g("eta");
    // t = r + (21) o r
    let t = lc::<S>(&r)
        .add(&lc(&chain(&[&r, &p(&[2, 1])])))
        .unwrap();
    let route = |top: LinComb<S>| {
        top.compose(&lc(&p(&[1, 3, 2, 4])))
            .unwrap()
            .compose(&lc(&m.tensor(&m)))
            .unwrap()
    };
    vec![
        Relation {
            name: "r-primitive-left",
            lhs: lc(&chain(&[&r, &d.tensor(&id(1))])),
            rhs: lc(&labeled_tensor(&[r.clone(), eta.clone()], &[vec![1, 3], vec![2]]).unwrap())
                .add(&lc(
                    &labeled_tensor(&[eta.clone(), r.clone()], &[vec![1], vec![2, 3]]).unwrap(),
                ))
                .unwrap(),
        },
        Relation {
            name: "r-primitive-right",
            lhs: lc(&chain(&[&r, &id(1).tensor(&d)])),
            rhs: lc(&labeled_tensor(&[r.clone(), eta.clone()], &[vec![1, 3], vec![2]]).unwrap())
                .add(&lc(
                    &labeled_tensor(&[r.clone(), eta.clone()], &[vec![1, 2], vec![3]]).unwrap(),
                ))
                .unwrap(),
        },
        Relation {
            name: "t-invariance",
            lhs: route(t.tensor(&lc(&d))),
            rhs: route(lc::<S>(&d).tensor(&t)),
        },
        Relation {
            name: "cybe",
            lhs: cyb_sum("r"),
            rhs: LinComb::zero(0, 3),
        },
    ]
}

fn alg_relations<S: Scalar>() -> Vec<Relation<S>> {
    let m = g("m");
    let eta = g("eta");
    vec![
        Relation {
            name: "m-assoc",
            lhs: lc(&chain(&[&m.tensor(&id(1)), &m])),
            rhs: lc(&chain(&[&id(1).tensor(&m), &m])),
        },
        Relation {
            name: "m-unit-left",
            lhs: lc(&chain(&[&eta.tensor(&id(1)), &m])),
            rhs: lc(&id(1)),
        },
        Relation {
            name: "m-unit-right",
            lhs: lc(&chain(&[&id(1).tensor(&eta), &m])),
            rhs: lc(&id(1)),
        },
    ]
}

/// The oriented relation set of a variant, as left/right pairs. Relations
/// mentioning `h` require a series coefficient ring.
pub fn relations<S: Scalar>(variant: Variant) -> Result<Vec<Relation<S>>> {
    Ok(match variant {
        Variant::Bialg => bialg_relations(),
        Variant::Coco => {
            let mut rs = bialg_relations();
            rs.push(cocomm_relation());
            rs
        }
        Variant::Cp => {
            let mut rs = bialg_relations();
            rs.push(cocomm_relation());
            rs.extend(cp_relations());
            rs
        }
        Variant::Qcoco => {
            let mut rs = bialg_relations();
            let h = S::one().scale_h(1).ok_or_else(|| {
                Error::HbarRequired("qcoco relations need h-series coefficients".into())
            })?;
            rs.push(Relation {
                name: "quasi-cocomm",
                lhs: lc(&chain(&[&g("Delta"), &p(&[2, 1])])),
                rhs: lc(&g("Delta"))
                    .sub(&lc(&g("deltat")).scale(&h))
                    .unwrap(),
            });
            rs
        }
        Variant::Qt => {
            let mut rs = bialg_relations();
            rs.push(cocomm_relation());
            rs.extend(qt_relations());
            rs
        }
        Variant::Cyba => {
            let mut rs = alg_relations();
            rs.push(Relation {
                name: "cybe",
                lhs: cyb_sum("r"),
                rhs: LinComb::zero(0, 3),
            });
            rs
        }
        Variant::Qyba => {
            let mut rs = alg_relations();
            let h = S::one().scale_h(1).ok_or_else(|| {
                Error::HbarRequired("qyba relations need h-series coefficients".into())
            })?;
            let rho = g("rho");
            let m = g("m");
            let lab = |sets: [&[usize]; 3]| {
                labeled_tensor(
                    &[rho.clone(), rho.clone(), rho.clone()],
                    &[sets[0].to_vec(), sets[1].to_vec(), sets[2].to_vec()],
                )
                .unwrap()
            };
            let m3 = m.tensor(&m).tensor(&m);
            let cubic = lc::<S>(&chain(&[&lab([&[1, 3], &[2, 5], &[4, 6]]), &m3]))
                .sub(&lc(&chain(&[&lab([&[3, 5], &[1, 6], &[2, 4]]), &m3])))
                .unwrap();
            rs.push(Relation {
                name: "qybe-deformed",
                lhs: cyb_sum("rho").add(&cubic.scale(&h)).unwrap(),
                rhs: LinComb::zero(0, 3),
            });
            rs
        }
        Variant::Custom => Vec::new(),
    })
}

/// The oriented relation set of a variant: the data the rewrite engine
/// orients (compatibilities push coproducts toward the inputs, units and
/// counits absorb), exposed as checkable left/right pairs.
#[derive(Debug, Clone)]
pub struct RuleSet<S: Scalar> {
    pub variant: Variant,
    pub relations: Vec<Relation<S>>,
}

impl<S: Scalar> RuleSet<S> {
    pub fn for_variant(variant: Variant) -> Result<Self> {
        Ok(Self {
            variant,
            relations: relations(variant)?,
        })
    }
}

/// Variant whose rewrite engine checks substituted relations.
fn underlying(variant: Variant) -> Variant {
    match variant {
        Variant::Qt => Variant::Coco,
        other => other,
    }
}

/// Substitute a candidate for the named generator in every relation of the
/// variant and check them under the rewrite engine.
pub fn check_substitution<S: Scalar>(
    variant: Variant,
    gen: &str,
    candidate: &LinComb<S>,
) -> Result<Vec<(&'static str, bool)>> {
    let mut out = Vec::new();
    for rel in relations::<S>(variant)? {
        let lhs = rel.lhs.substitute(gen, candidate)?;
        let rhs = rel.rhs.substitute(gen, candidate)?;
        out.push((rel.name, check_relation(&lhs, &rhs, underlying(variant))?));
    }
    Ok(out)
}

/// A relation list restricted to the rewritable generators holds
/// identically under normalization.
pub fn verify_rewritable_relations<S: Scalar>(variant: Variant) -> Result<Vec<(&'static str, bool)>> {
    let mut out = Vec::new();
    for rel in relations::<S>(variant)? {
        out.push((rel.name, check_relation(&rel.lhs, &rel.rhs, variant)?));
    }
    Ok(out)
}
