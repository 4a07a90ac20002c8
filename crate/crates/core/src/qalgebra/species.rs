//! Generalized boson species and their single-mode ladder operators.
//!
//! A species is fixed by its normalization sequence `f(n)`: the Fock state
//! `|n⟩ = (a†)^n |0⟩ / f(n)` is normalized, so `a†|n⟩ = f(n+1)/f(n) |n+1⟩`.
//! The same-site commutator is diagonal with eigenvalues
//! `F(n) = f(n+1)²/f(n)² - f(n)²/f(n-1)²`.
//!
//! For spin-S bosons this gives `F(n) = 2S - 2n`, which is the value implied
//! by `f(n) = √(n!(2S)!/(2S-n)!)`. A sign-flipped `n - 2S` also circulates in
//! the literature; it is inconsistent with that `f` and is not used here.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{q_number, Flavor, QDeformation};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Species {
    Standard,
    QBoson(QDeformation),
    /// Spin-S bosons, stored as `2S` so that half-integers are exact.
    Spin { two_s: u32 },
    Custom,
}

impl Species {
    pub fn q_boson(q: f64) -> Result<Self> {
        Ok(Species::QBoson(QDeformation::arik_coon(q)?))
    }

    pub fn spin(s: f64) -> Result<Self> {
        let two_s = 2.0 * s;
        if !(two_s.is_finite() && two_s >= 1.0 && two_s.fract() == 0.0 && two_s <= f64::from(u32::MAX)) {
            return Err(invalid("S", format!("spin must be a positive half-integer, got {s}")));
        }
        Ok(Species::Spin { two_s: two_s as u32 })
    }

    /// Highest occupation the species' Fock space admits, if finite.
    pub fn max_occupation(&self) -> Option<u32> {
        match self {
            Species::Spin { two_s } => Some(*two_s),
            _ => None,
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Species::Standard => write!(f, "standard"),
            Species::QBoson(d) => match d.flavor() {
                Flavor::ArikCoon => write!(f, "q:{}", d.q()),
                Flavor::Symmetric => write!(f, "qsym:{}", d.q()),
            },
            Species::Spin { two_s } if two_s % 2 == 0 => write!(f, "spin:{}", two_s / 2),
            Species::Spin { two_s } => write!(f, "spin:{two_s}/2"),
            Species::Custom => write!(f, "custom"),
        }
    }
}

/// Parses `standard`, `q:<float>`, `qsym:<float>` or `spin:<S>` where `S` is
/// written either as a decimal (`0.5`, `1`) or as a fraction (`3/2`).
impl FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("standard") {
            return Ok(Species::Standard);
        }
        let (kind, value) = s
            .split_once(':')
            .ok_or_else(|| invalid("species", format!("expected standard | q:<q> | spin:<S>, got `{s}`")))?;
        let number = |v: &str| -> Result<f64> {
            v.trim()
                .parse::<f64>()
                .map_err(|_| invalid("species", format!("`{v}` is not a number")))
        };
        match kind.trim().to_ascii_lowercase().as_str() {
            "q" => Species::q_boson(number(value)?),
            "qsym" => Ok(Species::QBoson(QDeformation::symmetric(number(value)?)?)),
            "spin" => {
                let spin = match value.split_once('/') {
                    Some((num, den)) => number(num)? / number(den)?,
                    None => number(value)?,
                };
                Species::spin(spin)
            }
            other => Err(invalid("species", format!("unknown species kind `{other}`"))),
        }
    }
}

/// Tabulated normalization function `f(0..=cutoff)` of a species.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacteristicF {
    species: Species,
    table: Vec<f64>,
    /// `steps[n] = f(n+1)² / f(n)²`, kept separately so that ladder elements
    /// do not inherit rounding from the cumulative table.
    steps: Vec<f64>,
}

/// Builds `f(0..=cutoff)` for one of the closed-form species.
pub fn characteristic_f(species: Species, cutoff: u32) -> Result<CharacteristicF> {
    if cutoff < 1 {
        return Err(invalid("cutoff", "must be at least 1"));
    }
    if let Species::Spin { two_s } = species {
        if cutoff > two_s {
            return Err(invalid(
                "cutoff",
                format!("spin-{} Fock space ends at n = {two_s}", Species::Spin { two_s }),
            ));
        }
    }
    let step = |n: u32| -> f64 {
        let next = f64::from(n + 1);
        match species {
            Species::Standard => next,
            Species::QBoson(d) => q_number(n + 1, &d),
            Species::Spin { two_s } => next * f64::from(two_s - n),
            Species::Custom => unreachable!(),
        }
    };
    if species == Species::Custom {
        return Err(invalid("species", "custom species are built with CharacteristicF::custom"));
    }
    let steps: Vec<f64> = (0..cutoff).map(step).collect();
    CharacteristicF::from_steps(species, steps)
}

impl CharacteristicF {
    /// A user-supplied table `f(0..=d)`; requires `f(0) = 1` and `f(n) > 0`.
    pub fn custom(table: Vec<f64>) -> Result<Self> {
        if table.len() < 2 {
            return Err(invalid("table", "need at least f(0) and f(1)"));
        }
        if table[0] != 1.0 {
            return Err(invalid("table", "f(0) must equal 1"));
        }
        if table.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(invalid("table", "every f(n) must be positive and finite"));
        }
        let steps = table.windows(2).map(|w| (w[1] / w[0]).powi(2)).collect();
        Ok(Self {
            species: Species::Custom,
            table,
            steps,
        })
    }

    fn from_steps(species: Species, steps: Vec<f64>) -> Result<Self> {
        let mut table = Vec::with_capacity(steps.len() + 1);
        table.push(1.0);
        let mut sq = 1.0_f64;
        for &s in &steps {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::Overflow("characteristic function table"));
            }
            sq *= s;
            if !sq.is_finite() {
                return Err(Error::Overflow("characteristic function table"));
            }
            table.push(sq.sqrt());
        }
        Ok(Self { species, table, steps })
    }

    /// Table long enough for an `n`-photon sector: cutoff `n` (at least 1),
    /// clipped to `2S` for spin species.
    pub fn for_photons(species: Species, n: u32) -> Result<Self> {
        let cutoff = match species.max_occupation() {
            Some(cap) => n.min(cap),
            None => n,
        };
        characteristic_f(species, cutoff.max(1))
    }

    pub fn species(&self) -> Species {
        self.species
    }

    pub fn cutoff(&self) -> u32 {
        (self.table.len() - 1) as u32
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn f(&self, n: u32) -> Option<f64> {
        self.table.get(n as usize).copied()
    }

    /// Whether the table ends because the Fock space ends (spin-S at `2S`)
    /// rather than because of truncation.
    pub fn is_hard_core_complete(&self) -> bool {
        matches!(self.species, Species::Spin { two_s } if two_s == self.cutoff())
    }

    /// `⟨n+1|a†|n⟩ = f(n+1)/f(n)`; `None` past the table.
    pub fn raise(&self, n: u32) -> Option<f64> {
        self.steps.get(n as usize).map(|s| s.sqrt())
    }

    /// `⟨n-1|a|n⟩ = f(n)/f(n-1)`; zero at `n = 0`, `None` past the table.
    pub fn lower(&self, n: u32) -> Option<f64> {
        if n == 0 {
            Some(0.0)
        } else {
            self.raise(n - 1)
        }
    }
}

/// Eigenvalue `F(n)` of the same-site commutator `[a, a†]` on `|n⟩`.
pub fn commutator_f(f: &CharacteristicF, n: u32) -> Result<f64> {
    if n + 1 > f.cutoff() {
        return Err(invalid("n", format!("F({n}) needs f({}) but the cutoff is {}", n + 1, f.cutoff())));
    }
    let up = f.steps[n as usize];
    let down = if n == 0 { 0.0 } else { f.steps[n as usize - 1] };
    Ok(up - down)
}

/// Truncated matrix representation of `a`, `a†` and `N` on `|0⟩..|d-1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderRep {
    pub dim: usize,
    pub lower: DMatrix<Complex64>,
    pub raise: DMatrix<Complex64>,
    pub number: DMatrix<Complex64>,
}

pub fn ladder_matrices(f: &CharacteristicF, dim: usize) -> Result<LadderRep> {
    if dim == 0 {
        return Err(invalid("dim", "must be positive"));
    }
    if dim > f.cutoff() as usize + 1 {
        return Err(invalid(
            "dim",
            format!("{dim} levels need f up to {} but the cutoff is {}", dim - 1, f.cutoff()),
        ));
    }
    let mut raise = DMatrix::zeros(dim, dim);
    for n in 0..dim - 1 {
        raise[(n + 1, n)] = Complex64::new(f.steps[n].sqrt(), 0.0);
    }
    let lower = raise.adjoint();
    let number = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(i as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(LadderRep {
        dim,
        lower,
        raise,
        number,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    #[test]
    fn standard_table_is_factorial_root() {
        let f = characteristic_f(Species::Standard, 4).unwrap();
        let expected = [1.0, 1.0, 2f64.sqrt(), 6f64.sqrt(), 24f64.sqrt()];
        for (got, want) in f.table().iter().zip(expected) {
            assert_relative_eq!(*got, want, max_relative = 1e-15);
        }
        let f = characteristic_f(Species::Standard, 20).unwrap();
        for n in 0..=20 {
            assert_relative_eq!(f.f(n).unwrap(), factorial(n).sqrt(), max_relative = 1e-14);
        }
    }

    #[test]
    fn q_boson_table() {
        let f = characteristic_f(Species::q_boson(2.0).unwrap(), 3).unwrap();
        let expected = [1.0, 1.0, 3f64.sqrt(), 21f64.sqrt()];
        for (got, want) in f.table().iter().zip(expected) {
            assert_relative_eq!(*got, want, max_relative = 1e-15);
        }
    }

    #[test]
    fn spin_tables() {
        let half = characteristic_f(Species::spin(0.5).unwrap(), 1).unwrap();
        assert_eq!(half.table(), &[1.0, 1.0]);
        assert!(characteristic_f(Species::spin(0.5).unwrap(), 2).is_err());

        let s = 1.5;
        let f = characteristic_f(Species::spin(s).unwrap(), 3).unwrap();
        for n in 0..=3u32 {
            let want = (factorial(n) * factorial(3) / factorial(3 - n)).sqrt();
            assert_relative_eq!(f.f(n).unwrap(), want, max_relative = 1e-14);
        }
    }

    #[test]
    fn commutator_values() {
        let std = characteristic_f(Species::Standard, 10).unwrap();
        for n in 0..10 {
            assert_eq!(commutator_f(&std, n).unwrap(), 1.0);
        }
        let qb = characteristic_f(Species::q_boson(2.0).unwrap(), 5).unwrap();
        assert_relative_eq!(commutator_f(&qb, 2).unwrap(), 4.0, max_relative = 1e-14);

        let spin1 = characteristic_f(Species::spin(1.0).unwrap(), 2).unwrap();
        assert_eq!(commutator_f(&spin1, 1).unwrap(), 0.0);
        assert_eq!(commutator_f(&spin1, 0).unwrap(), 2.0);

        let spin = characteristic_f(Species::spin(2.5).unwrap(), 5).unwrap();
        for n in 0..5u32 {
            assert_relative_eq!(commutator_f(&spin, n).unwrap(), 5.0 - 2.0 * f64::from(n), epsilon = 1e-12);
        }
        assert!(commutator_f(&spin, 5).is_err());
    }

    #[test]
    fn commutator_matches_q_power() {
        for q in [0.8, 0.9, 1.1, 1.7] {
            let f = characteristic_f(Species::q_boson(q).unwrap(), 30).unwrap();
            for n in 0..30u32 {
                let got = commutator_f(&f, n).unwrap();
                assert!((got - q.powi(n as i32)).abs() < 1e-12 * (1.0 + q.powi(n as i32)));
            }
        }
    }

    #[test]
    fn ladder_subdiagonals() {
        let f = characteristic_f(Species::Standard, 4).unwrap();
        let rep = ladder_matrices(&f, 3).unwrap();
        assert_relative_eq!(rep.raise[(1, 0)].re, 1.0);
        assert_relative_eq!(rep.raise[(2, 1)].re, 2f64.sqrt(), max_relative = 1e-15);
        assert_eq!(rep.lower, rep.raise.adjoint());

        let f = characteristic_f(Species::q_boson(2.0).unwrap(), 4).unwrap();
        let rep = ladder_matrices(&f, 3).unwrap();
        assert_relative_eq!(rep.raise[(2, 1)].re, 3f64.sqrt(), max_relative = 1e-15);
        assert!(ladder_matrices(&f, 6).is_err());
    }

    #[test]
    fn deformed_commutation_in_truncation() {
        for q in [0.5, 0.9, 2.0] {
            let f = characteristic_f(Species::q_boson(q).unwrap(), 8).unwrap();
            let rep = ladder_matrices(&f, 9).unwrap();
            let lhs = &rep.lower * &rep.raise - &rep.raise * &rep.lower * Complex64::new(q, 0.0);
            for i in 0..8 {
                for j in 0..8 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((lhs[(i, j)] - want).norm() < 1e-12);
                }
            }
            // [N, a†] = a† and [N, a] = -a hold exactly.
            let na = &rep.number * &rep.raise - &rep.raise * &rep.number;
            assert!((na - &rep.raise).norm() < 1e-12);
            let nl = &rep.number * &rep.lower - &rep.lower * &rep.number;
            assert!((nl + &rep.lower).norm() < 1e-12);
        }
    }

    #[test]
    fn species_grammar() {
        assert_eq!("standard".parse::<Species>().unwrap(), Species::Standard);
        assert_eq!("q:0.9".parse::<Species>().unwrap(), Species::q_boson(0.9).unwrap());
        assert_eq!("spin:1/2".parse::<Species>().unwrap(), Species::Spin { two_s: 1 });
        assert_eq!("spin:0.5".parse::<Species>().unwrap(), Species::Spin { two_s: 1 });
        assert_eq!("spin:1".parse::<Species>().unwrap(), Species::Spin { two_s: 2 });
        assert!("spin:0.3".parse::<Species>().is_err());
        assert!("q:-1".parse::<Species>().is_err());
        assert!("boson".parse::<Species>().is_err());
        for s in ["standard", "q:0.9", "spin:1/2", "spin:2", "qsym:1.1"] {
            let sp: Species = s.parse().unwrap();
            assert_eq!(sp.to_string().parse::<Species>().unwrap(), sp);
        }
    }

    #[test]
    fn custom_table_validation() {
        assert!(CharacteristicF::custom(vec![1.0, 2.0, 3.0]).is_ok());
        assert!(CharacteristicF::custom(vec![2.0, 2.0]).is_err());
        assert!(CharacteristicF::custom(vec![1.0, 0.0]).is_err());
    }
}
