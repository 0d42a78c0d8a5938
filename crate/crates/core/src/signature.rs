//! Generator signatures for the props handled by the rewrite engine.

use crate::error::{Error, Result};

/// Generator declaration: name and bidegree (inputs, outputs).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub name: String,
    pub n_in: usize,
    pub n_out: usize,
}

impl Gen {
    pub fn new(name: &str, n_in: usize, n_out: usize) -> Self {
        Self {
            name: name.to_string(),
            n_in,
            n_out,
        }
    }
}

/// The presentations the library knows how to rewrite or check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Bialgebras: `m`, `Delta`, `eta`, `eps`.
    Bialg,
    /// Cocommutative bialgebras.
    Coco,
    /// Co-Poisson bialgebras: adds the cobracket `delta`.
    Cp,
    /// Quasi-cocommutative bialgebras over `h`: adds `deltat` with
    /// `Delta - (21) Delta = h deltat`.
    Qcoco,
    /// Cocommutative quasitriangular: adds the inert generator `r`.
    Qt,
    /// Unital algebra with a classical Yang-Baxter element `r`.
    Cyba,
    /// The deformed version over `h` with generator `rho`.
    Qyba,
    /// Free prop on a user signature; no relations.
    Custom,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Variant> {
        Ok(match s {
            "bialg" | "plain" => Variant::Bialg,
            "coco" => Variant::Coco,
            "cp" => Variant::Cp,
            "qcoco" => Variant::Qcoco,
            "qt" => Variant::Qt,
            "cyba" => Variant::Cyba,
            "qyba" => Variant::Qyba,
            _ => {
                return Err(Error::UnknownGenerator(format!("variant {s}")));
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Bialg => "bialg",
            Variant::Coco => "coco",
            Variant::Cp => "cp",
            Variant::Qcoco => "qcoco",
            Variant::Qt => "qt",
            Variant::Cyba => "cyba",
            Variant::Qyba => "qyba",
            Variant::Custom => "custom",
        }
    }
}

/// A signature: the generators available to diagrams of a given variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub variant: Variant,
    pub generators: Vec<Gen>,
}

impl Signature {
    pub fn for_variant(variant: Variant) -> Self {
        let bialg = || {
            vec![
                Gen::new("m", 2, 1),
                Gen::new("Delta", 1, 2),
                Gen::new("eta", 0, 1),
                Gen::new("eps", 1, 0),
            ]
        };
        let generators = match variant {
            Variant::Bialg | Variant::Coco => bialg(),
            Variant::Cp => {
                let mut g = bialg();
                g.push(Gen::new("delta", 1, 2));
                g
            }
            Variant::Qcoco => {
                let mut g = bialg();
                g.push(Gen::new("deltat", 1, 2));
                g
            }
            Variant::Qt => {
                let mut g = bialg();
                g.push(Gen::new("r", 0, 2));
                g
            }
            Variant::Cyba => vec![
                Gen::new("eta", 0, 1),
                Gen::new("m", 2, 1),
                Gen::new("r", 0, 2),
            ],
            Variant::Qyba => vec![
                Gen::new("eta", 0, 1),
                Gen::new("m", 2, 1),
                Gen::new("rho", 0, 2),
            ],
            Variant::Custom => Vec::new(),
        };
        Self {
            variant,
            generators,
        }
    }

    pub fn custom(generators: Vec<Gen>) -> Result<Self> {
        let mut names: Vec<&str> = generators.iter().map(|g| g.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != generators.len() {
            return Err(Error::UnknownGenerator("duplicate generator name".into()));
        }
        Ok(Self {
            variant: Variant::Custom,
            generators,
        })
    }

    pub fn lookup(&self, name: &str) -> Result<&Gen> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }
}
