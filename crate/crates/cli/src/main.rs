//! Command-line surface: normalization, dimension tables, structure bases,
//! module evaluation, relation checking, Eulerian coefficients, Yang-Baxter
//! defects and the quantum/classical equivalence, triangular inversion, and
//! the twist calculus.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use propcalc::error::Result;
use propcalc::evalmod::{eval_on_module, Coalgebra, ModuleSpec, TensorValue, WordTensor};
use propcalc::expr::parse_lincomb;
use propcalc::freelie::{classical_dims, lba_component_dim, ClassicalSpace};
use propcalc::pbw::{eulerian_coeffs, PBWElement};
use propcalc::rewrite::{component_dim, normalize, structure_basis};
use propcalc::tensor::{Enveloping, FreeSymbols, TensorSeries};
use propcalc::twist::{cohochschild_d1, cohochschild_d2, twist_act, twist_d};
use propcalc::ybe::{
    cyb, deformed_cybe_defect, generic_r, perturb_forward, qybe_defect, sample_p2,
    triangular_invert, Perturbation,
};
use propcalc::{HRat, Signature, Variant};

#[derive(Parser)]
#[command(name = "propcalc", version, about = "Symbolic calculus for props")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Relation set: bialg | coco | cp | qcoco | qt | cyba | qyba
    #[arg(long, default_value = "bialg")]
    variant: String,
    /// Truncation order for h-arithmetic
    #[arg(long, default_value_t = 8)]
    order: i64,
    /// Emit JSON
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite an expression to its ordered normal form
    Normalize {
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// Dimension tables keyed by (space, N, n) or (variant, p, q, N)
    Dim {
        /// alg | alg_comm | poisson | la | lba | bialg | coco | cp | qcoco
        #[arg(long)]
        space: String,
        #[arg(short, default_value_t = 1)]
        p: usize,
        #[arg(short, default_value_t = 1)]
        q: usize,
        /// Largest letter/strand count N
        #[arg(long = "maxN", default_value_t = 4)]
        max_n: usize,
        /// Tensor slots for the classical spaces
        #[arg(short, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// List the structure basis of one strand summand
    Basis {
        #[arg(long, default_value = "coco")]
        variant: String,
        #[arg(short, default_value_t = 1)]
        p: usize,
        #[arg(short, default_value_t = 1)]
        q: usize,
        #[arg(short = 'N', long = "strands", default_value_t = 2)]
        strands: usize,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate an expression on a module
    Eval {
        expr: String,
        /// ue (enveloping algebra) | free3 (free bialgebra on the built-in
        /// three-dimensional coalgebra)
        #[arg(long, default_value = "ue")]
        module: String,
        /// Generators of the free Lie algebra (module ue)
        #[arg(long, default_value_t = 2)]
        gens: usize,
        /// Degree / word-length cap of the module
        #[arg(long, default_value_t = 8)]
        max_deg: usize,
        /// Input tensor: per-slot digit words separated by `;`
        /// (generator indices for ue, basis indices for free3)
        #[arg(long)]
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check that two expressions have equal normal forms (exit 1 if not)
    Check {
        lhs: String,
        rhs: String,
        #[command(flatten)]
        common: Common,
    },
    /// Taylor coefficients of the Eulerian idempotent series
    Eulerian {
        #[arg(short, long)]
        m: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        json: bool,
    },
    /// Classical Yang-Baxter defect of the generic two-slot element
    Cybe {
        #[arg(long, default_value_t = 2)]
        terms: u32,
        #[arg(long, default_value_t = 6)]
        order: i64,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Quantum Yang-Baxter defect; with --check-equivalence, verify
    /// qybe_defect(1 + h rho) = h^2 deformed_cybe_defect(rho)
    Qybe {
        #[arg(long)]
        check_equivalence: bool,
        #[arg(long, default_value_t = 2)]
        terms: u32,
        #[arg(long, default_value_t = 6)]
        order: i64,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long)]
        json: bool,
    },
    /// Triangular inversion round trip with the sample quadratic
    /// perturbation
    Dequantize {
        #[arg(long, default_value_t = 5)]
        order: i64,
        #[arg(long, default_value_t = 2)]
        terms: u32,
        #[arg(long)]
        json: bool,
    },
    /// Twist-calculus checks: the twist of a sample element, the cocycle
    /// identity d2 d1 = 0, and the group-action law
    Twist {
        #[arg(long, default_value_t = 4)]
        order: i64,
        #[arg(long, default_value_t = 2)]
        gens: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn variant_of(s: &str) -> Result<Variant> {
    Variant::parse(s)
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Normalize { expr, common } => {
            let variant = variant_of(&common.variant)?;
            let sig = Signature::for_variant(variant);
            let lc = parse_lincomb(&expr, &sig, common.order)?;
            let nf = normalize(&lc, variant)?;
            if common.json {
                println!("{}", nf.to_json());
            } else {
                println!("{nf}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dim {
            space,
            p,
            q,
            max_n,
            n,
            json,
            csv,
        } => {
            let mut rows: Vec<(String, usize, usize, usize, usize)> = Vec::new();
            match space.as_str() {
                "alg" | "alg_comm" | "poisson" | "la" => {
                    let cs = match space.as_str() {
                        "alg" => ClassicalSpace::Alg,
                        "alg_comm" => ClassicalSpace::AlgComm,
                        "poisson" => ClassicalSpace::Poisson,
                        _ => ClassicalSpace::La,
                    };
                    for big_n in 0..=max_n {
                        rows.push((space.clone(), big_n, n, 0, classical_dims(cs, big_n, n)?));
                    }
                }
                "lba" => {
                    for big_n in 0..=max_n {
                        rows.push((space.clone(), p, q, big_n, lba_component_dim(p, q, big_n)?));
                    }
                }
                other => {
                    let variant = variant_of(other)?;
                    for big_n in 0..=max_n {
                        rows.push((
                            space.clone(),
                            p,
                            q,
                            big_n,
                            component_dim(p, q, big_n, variant)?,
                        ));
                    }
                }
            }
            let classical = matches!(space.as_str(), "alg" | "alg_comm" | "poisson" | "la");
            if json {
                let vals: Vec<serde_json::Value> = rows
                    .iter()
                    .map(|(s, a, b, c, d)| {
                        if classical {
                            serde_json::json!({"space": s, "N": a, "n": b, "dim": d})
                        } else {
                            serde_json::json!({"space": s, "p": a, "q": b, "N": c, "dim": d})
                        }
                    })
                    .collect();
                println!("{}", serde_json::json!(vals));
            } else if csv {
                if classical {
                    println!("space,N,n,dim");
                    for (s, a, b, _, d) in rows {
                        println!("{s},{a},{b},{d}");
                    }
                } else {
                    println!("space,p,q,N,dim");
                    for (s, a, b, c, d) in rows {
                        println!("{s},{a},{b},{c},{d}");
                    }
                }
            } else {
                for (s, a, b, c, d) in rows {
                    if classical {
                        println!("{s}(N={a}, n={b}) = {d}");
                    } else {
                        println!("{s}({a},{b}) at N={c}: {d}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Basis {
            variant,
            p,
            q,
            strands,
            json,
        } => {
            let variant = variant_of(&variant)?;
            let basis = structure_basis(p, q, strands, variant)?;
            if json {
                let items: Vec<serde_json::Value> = basis
                    .iter()
                    .map(|od| {
                        let mut nf = propcalc::RatNormalForm::zero(variant, p, q);
                        nf.add_term(od.clone(), propcalc::Rational::from_integer(1.into()));
                        nf.to_json()
                    })
                    .collect();
                println!("{}", serde_json::json!(items));
            } else {
                for od in &basis {
                    let mut nf = propcalc::RatNormalForm::zero(variant, p, q);
                    nf.add_term(od.clone(), propcalc::Rational::from_integer(1.into()));
                    println!("{nf}");
                }
                println!("total: {}", basis.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval {
            expr,
            module,
            gens,
            max_deg,
            input,
            common,
        } => {
            let variant = variant_of(&common.variant)?;
            let sig = Signature::for_variant(variant);
            let lc = parse_lincomb(&expr, &sig, common.order)?;
            let slots: Vec<Vec<u8>> = input
                .split(';')
                .map(|w| {
                    w.chars()
                        .filter(|c| c.is_ascii_digit())
                        .map(|c| c.to_digit(10).unwrap() as u8)
                        .collect()
                })
                .collect();
            match module.as_str() {
                "ue" => {
                    let spec = ModuleSpec::Ue {
                        n_gens: gens,
                        max_deg,
                    };
                    // build the input as a product of generators per slot
                    let mut tensor = PBWElement::<HRat>::one(slots.len());
                    for (i, word) in slots.iter().enumerate() {
                        for &l in word {
                            let mut factor = PBWElement::<HRat>::zero(slots.len());
                            let mut mono = vec![Vec::new(); slots.len()];
                            mono[i] = vec![vec![l as usize]];
                            factor.add_term(mono, propcalc::Scalar::from_rational(
                                &propcalc::Rational::from_integer(1.into()),
                            ));
                            tensor = tensor.product(&factor)?;
                        }
                    }
                    let out = eval_on_module(&lc, &spec, &TensorValue::Pbw(tensor))?;
                    let TensorValue::Pbw(e) = out else { unreachable!() };
                    if common.json {
                        let terms: Vec<serde_json::Value> = e
                            .terms()
                            .map(|(m, c)| {
                                serde_json::json!({
                                    "monomial": m,
                                    "coeff": propcalc::Scalar::to_json(c),
                                })
                            })
                            .collect();
                        println!("{}", serde_json::json!(terms));
                    } else {
                        println!("{e}");
                    }
                }
                "free3" => {
                    let spec = ModuleSpec::FreeBialg {
                        coalgebra: Coalgebra::cocommutative_example(),
                        max_len: max_deg,
                    };
                    let tensor = WordTensor::<HRat>::basis(slots);
                    let out = eval_on_module(&lc, &spec, &TensorValue::Words(tensor))?;
                    let TensorValue::Words(w) = out else { unreachable!() };
                    println!("{w}");
                }
                other => {
                    return Err(propcalc::Error::UnknownGenerator(format!(
                        "module {other}"
                    )));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { lhs, rhs, common } => {
            let variant = variant_of(&common.variant)?;
            let sig = Signature::for_variant(variant);
            let l = parse_lincomb(&lhs, &sig, common.order)?;
            let r = parse_lincomb(&rhs, &sig, common.order)?;
            let ok = propcalc::rewrite::check_relation(&l, &r, variant)?;
            println!("{}", if ok { "OK" } else { "FAIL" });
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Eulerian { m, nmax, json } => {
            let coeffs = eulerian_coeffs(m, nmax);
            if json {
                let vals: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                println!("{}", serde_json::json!({"m": m, "coeffs": vals}));
            } else {
                let vals: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                println!("{}", vals.join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cybe {
            terms,
            order,
            max_len,
            json,
        } => {
            let carrier = FreeSymbols { max_len };
            let r = generic_r(order, terms);
            let defect = cyb(&carrier, &r)?;
            if json {
                println!("{}", defect.to_json(&carrier));
            } else {
                println!("CYB(r) for r = sum of {terms} simple tensors:");
                println!("{}", defect.display(&carrier));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Qybe {
            check_equivalence,
            terms,
            order,
            max_len,
            json,
        } => {
            let carrier = FreeSymbols { max_len };
            let rho = generic_r(order, terms);
            if check_equivalence {
                let big_r = TensorSeries::unit(&carrier, 2, order).add(&rho.scale_h(1))?;
                let lhs = qybe_defect(&carrier, &big_r)?;
                let rhs = deformed_cybe_defect(&carrier, &rho)?.scale_h(2);
                let ok = lhs == rhs;
                println!("{}", if ok { "OK" } else { "FAIL" });
                return Ok(if ok {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                });
            }
            let big_r = TensorSeries::unit(&carrier, 2, order).add(&rho.scale_h(1))?;
            let defect = qybe_defect(&carrier, &big_r)?;
            if json {
                println!("{}", defect.to_json(&carrier));
            } else {
                println!("{}", defect.display(&carrier));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dequantize { order, terms, json } => {
            let carrier = FreeSymbols {
                max_len: 4 * order.max(1) as usize,
            };
            let r = generic_r(order, terms);
            let perts = vec![Perturbation {
                weight: 2,
                map: Box::new(move |x: &TensorSeries<FreeSymbols>| {
                    sample_p2(
                        &FreeSymbols {
                            max_len: 4 * order.max(1) as usize,
                        },
                        x,
                    )
                }),
            }];
            let rho = perturb_forward(&carrier, &perts, &r)?;
            let back = triangular_invert(&carrier, &perts, &rho, order)?;
            let ok = back.eq_mod(&r, order);
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "round_trip": ok,
                        "dequantized": back.to_json(&carrier),
                    })
                );
            } else {
                println!("forward series: {}", rho.display(&carrier));
                println!("dequantized:    {}", back.display(&carrier));
                println!("{}", if ok { "OK" } else { "FAIL" });
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Twist {
            order,
            gens,
            seed,
            json,
        } => {
            let e = Enveloping {
                n_gens: gens.max(1),
                max_deg: (2 * order.max(1)) as usize,
            };
            let mut rng = StdRng::seed_from_u64(seed);
            let random_1 = |rng: &mut StdRng| {
                let mut u = TensorSeries::unit(&e, 1, order);
                for g in 1..=e.n_gens {
                    let c = propcalc::Rational::from_integer(rng.gen_range(-2..=2i64).into());
                    u.add_term(
                        vec![vec![vec![g]]],
                        HRat::monomial(c, 1, order).unwrap(),
                    );
                }
                u
            };
            // d(1) = 1
            let unit2 = TensorSeries::unit(&e, 2, order);
            let d_unit_ok = twist_d(&e, &unit2)? == TensorSeries::unit(&e, 3, order);
            // sample twist
            let mut j = TensorSeries::unit(&e, 2, order);
            j.add_term(
                vec![vec![vec![1]], vec![vec![1]]],
                HRat::monomial(propcalc::Rational::from_integer(1.into()), 1, order).unwrap(),
            );
            let dj = twist_d(&e, &j)?;
            // cocycle identity on a random kappa
            let kappa = random_1(&mut rng);
            let dd = cohochschild_d2(&e, &cohochschild_d1(&e, &kappa)?)?;
            let cocycle_ok = dd.is_zero();
            // group action law
            let u = random_1(&mut rng);
            let v = random_1(&mut rng);
            let uv = u.mul(&e, &v)?;
            let lhs = twist_act(&e, &uv, &j)?;
            let rhs = twist_act(&e, &u, &twist_act(&e, &v, &j)?)?;
            let action_ok = lhs.eq_mod(&rhs, order);
            let ok = d_unit_ok && cocycle_ok && action_ok;
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "twist_of_unit": d_unit_ok,
                        "cocycle": cocycle_ok,
                        "group_action": action_ok,
                        "twist": dj.to_json(&e),
                    })
                );
            } else {
                println!("twist of the unit is the unit: {d_unit_ok}");
                println!("d2 d1 = 0: {cocycle_ok}");
                println!("group action law: {action_ok}");
                println!("twist of 1 + h x1 (x) x1:");
                println!("{}", dj.display(&e));
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}
