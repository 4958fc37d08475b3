//! Reaction networks with polynomial rate laws.
//!
//! A [`ReactionNetwork`] is the nonlinearity `f: R_+^m -> R^m` of a
//! reaction-diffusion system. Every rate `f_i` is a finite sum of monomials
//! `c * u_1^{e_1} ... u_m^{e_m}`, so evaluation is cheap and the Jacobian is
//! exact. Mass-action kinetics, the built-in test networks and the network
//! description file all reduce to this representation.

mod checks;
mod file;

pub use checks::{
    check_9prime, check_entropy_dissipation, check_gradient_growth, check_mass_conservation,
    check_mass_dissipation, check_quasi_positivity, fit_entropy_alt_constant, pointwise_margin,
    structure_report, CheckResult, Condition, FittedConstant, SearchOptions, StructureReport,
};
pub use file::NetworkFile;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One term `coeff * prod_j u_j^{exponents[j]}` of a polynomial rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(coeff: f64, exponents: Vec<u32>) -> Self {
        Self { coeff, exponents }
    }

    fn eval(&self, u: &[f64]) -> f64 {
        self.exponents
            .iter()
            .zip(u)
            .fold(self.coeff, |acc, (&e, &x)| acc * pow(x, e))
    }

    fn partial(&self, u: &[f64], j: usize) -> f64 {
        let ej = self.exponents[j];
        if ej == 0 {
            return 0.0;
        }
        let mut acc = self.coeff * f64::from(ej);
        for (l, (&e, &x)) in self.exponents.iter().zip(u).enumerate() {
            acc *= if l == j { pow(x, e - 1) } else { pow(x, e) };
        }
        acc
    }
}

#[inline]
fn pow(x: f64, e: u32) -> f64 {
    match e {
        0 => 1.0,
        1 => x,
        2 => x * x,
        _ => x.powi(e as i32),
    }
}

/// A single reaction `sum_j reactants[j] A_j -> sum_j products[j] A_j` with
/// mass-action rate `rate * prod_j u_j^{reactants[j]}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reaction {
    pub reactants: Vec<u32>,
    pub products: Vec<u32>,
    pub rate: f64,
}

/// The vector field `f` of a reaction-diffusion system.
#[derive(Clone, Debug, PartialEq)]
pub struct ReactionNetwork {
    name: String,
    species: Vec<String>,
    rates: Vec<Vec<Monomial>>,
    growth_constant: f64,
}

impl ReactionNetwork {
    /// Builds a network from per-species polynomial rates.
    ///
    /// A single species is accepted so that scalar closed-form cases can be
    /// run through the same machinery; [`ReactionNetwork::is_system`] tells
    /// whether the network has the `m >= 2` shape of a genuine system.
    pub fn new(
        name: impl Into<String>,
        species: Vec<String>,
        rates: Vec<Vec<Monomial>>,
        growth_constant: f64,
    ) -> Result<Self> {
        let m = species.len();
        if m == 0 {
            return Err(Error::InvalidNetwork("species list is empty".into()));
        }
        if rates.len() != m {
            return Err(Error::InvalidNetwork(format!(
                "{} species but {} rate expressions",
                m,
                rates.len()
            )));
        }
        if !(growth_constant.is_finite() && growth_constant >= 0.0) {
            return Err(Error::InvalidNetwork(format!(
                "growth constant must be finite and nonnegative, got {growth_constant}"
            )));
        }
        for (i, terms) in rates.iter().enumerate() {
            for t in terms {
                if t.exponents.len() != m {
                    return Err(Error::InvalidNetwork(format!(
                        "term of f_{} has {} exponents, expected {}",
                        i + 1,
                        t.exponents.len(),
                        m
                    )));
                }
                if !t.coeff.is_finite() {
                    return Err(Error::InvalidNetwork(format!(
                        "non-finite coefficient in f_{}",
                        i + 1
                    )));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            species,
            rates,
            growth_constant,
        })
    }

    /// Mass-action network from a list of reactions.
    pub fn mass_action(
        name: impl Into<String>,
        species: Vec<String>,
        reactions: &[Reaction],
        growth_constant: f64,
    ) -> Result<Self> {
        let m = species.len();
        let mut rates = vec![Vec::new(); m];
        for r in reactions {
            if r.reactants.len() != m || r.products.len() != m {
                return Err(Error::InvalidNetwork(
                    "stoichiometric vector length differs from species count".into(),
                ));
            }
            for (i, rate) in rates.iter_mut().enumerate() {
                let net = i64::from(r.products[i]) - i64::from(r.reactants[i]);
                if net != 0 {
                    rate.push(Monomial::new(net as f64 * r.rate, r.reactants.clone()));
                }
            }
        }
        Self::new(name, species, rates, growth_constant)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn species_count(&self) -> usize {
        self.species.len()
    }

    /// True when the network has at least two species.
    pub fn is_system(&self) -> bool {
        self.species.len() >= 2
    }

    /// Declared constant `M` of the gradient growth bound.
    pub fn growth_constant(&self) -> f64 {
        self.growth_constant
    }

    pub fn with_growth_constant(mut self, m: f64) -> Self {
        self.growth_constant = m;
        self
    }

    pub fn rates(&self) -> &[Vec<Monomial>] {
        &self.rates
    }

    fn validate_state(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.species_count() {
            return Err(Error::DimensionMismatch {
                expected: self.species_count(),
                got: u.len(),
            });
        }
        if let Some((index, &value)) = u.iter().enumerate().find(|(_, &x)| !(x >= 0.0)) {
            return Err(Error::NegativeInput { index, value });
        }
        Ok(())
    }

    /// Evaluates `f(u)` for a nonnegative state.
    pub fn eval_f(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.validate_state(u)?;
        let mut out = vec![0.0; self.species_count()];
        self.eval_into(u, &mut out);
        Ok(out)
    }

    /// Evaluates `f(u)` into `out` without validation. Used in hot loops where
    /// the caller controls the state.
    pub fn eval_into(&self, u: &[f64], out: &mut [f64]) {
        for (o, terms) in out.iter_mut().zip(&self.rates) {
            *o = terms.iter().map(|t| t.eval(u)).sum();
        }
    }

    /// Jacobian `J[i][j] = df_i/du_j` at a nonnegative state.
    pub fn jacobian(&self, u: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.validate_state(u)?;
        Ok(self.jacobian_unchecked(u))
    }

    pub(crate) fn jacobian_unchecked(&self, u: &[f64]) -> Vec<Vec<f64>> {
        let m = self.species_count();
        self.rates
            .iter()
            .map(|terms| {
                (0..m)
                    .map(|j| terms.iter().map(|t| t.partial(u, j)).sum())
                    .collect()
            })
            .collect()
    }
}

fn names(prefix: &str, m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("{prefix}{i}")).collect()
}

/// Reversible binary reaction `A1 + A3 <-> A2 + A4`,
/// `f_i(u) = (-1)^i (u1 u3 - u2 u4)`, with `M = 1`.
pub fn four_species() -> ReactionNetwork {
    ReactionNetwork::mass_action(
        "four_species",
        names("A", 4),
        &[
            Reaction {
                reactants: vec![1, 0, 1, 0],
                products: vec![0, 1, 0, 1],
                rate: 1.0,
            },
            Reaction {
                reactants: vec![0, 1, 0, 1],
                products: vec![1, 0, 1, 0],
                rate: 1.0,
            },
        ],
        1.0,
    )
    .expect("built-in network is well formed")
}

/// [`four_species`] plus an extra sink `-u1 u3` on the first species, so that
/// `sum_i f_i = -u1 u3 <= 0`. Quasi-positive and mass dissipative, but not
/// mass conserving.
pub fn four_species_lossy() -> ReactionNetwork {
    let base = four_species();
    let mut rates = base.rates.clone();
    rates[0].push(Monomial::new(-1.0, vec![1, 0, 1, 0]));
    ReactionNetwork::new("four_species_lossy", base.species.clone(), rates, 2.0)
        .expect("built-in network is well formed")
}

/// Decoupled linear decay `f = (-u1, ..., -um)`.
pub fn linear_decay(m: usize) -> ReactionNetwork {
    let rates = (0..m)
        .map(|i| {
            let mut e = vec![0; m];
            e[i] = 1;
            vec![Monomial::new(-1.0, e)]
        })
        .collect();
    ReactionNetwork::new("linear_decay", names("A", m), rates, 1.0)
        .expect("built-in network is well formed")
}

/// Reversible isomerisation `A1 <-> A2`, `f = (u2 - u1, u1 - u2)`.
pub fn reversible_exchange() -> ReactionNetwork {
    ReactionNetwork::mass_action(
        "reversible_exchange",
        names("A", 2),
        &[
            Reaction {
                reactants: vec![1, 0],
                products: vec![0, 1],
                rate: 1.0,
            },
            Reaction {
                reactants: vec![0, 1],
                products: vec![1, 0],
                rate: 1.0,
            },
        ],
        1.0,
    )
    .expect("built-in network is well formed")
}

/// The zero field on `m` species.
pub fn zero_field(m: usize) -> ReactionNetwork {
    ReactionNetwork::new("zero", names("A", m), vec![Vec::new(); m], 0.0)
        .expect("built-in network is well formed")
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &[
    "four_species",
    "four_species_lossy",
    "linear_decay",
    "reversible_exchange",
    "scalar_decay",
    "zero",
];

/// Looks up a built-in network by name.
pub fn builtin(name: &str) -> Option<ReactionNetwork> {
    match name {
        "four_species" => Some(four_species()),
        "four_species_lossy" => Some(four_species_lossy()),
        "linear_decay" => Some(linear_decay(2)),
        "reversible_exchange" => Some(reversible_exchange()),
        "scalar_decay" => Some(linear_decay(1).renamed("scalar_decay")),
        "zero" => Some(zero_field(2)),
        _ => None,
    }
}

impl ReactionNetwork {
    fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }
}
