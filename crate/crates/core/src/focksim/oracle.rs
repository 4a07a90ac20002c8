use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::evolve::{species_basis, StateVector};
use crate::error::{invalid, Error, Result};
use crate::permanent::ModeUnitary;
use crate::qalgebra::CharacteristicF;
use crate::sector::Occupation;

pub const ORACLE_MAX_PHOTONS: u32 = 5;
pub const ORACLE_MAX_MODES: usize = 6;

/// Output state defined by substituting `a_i† → Σ_j U_{ji} a_j†` in
/// `∏_i (a_i†)^{l_i} |0⟩` and acting with the species' ladder operators.
///
/// Off-site operators commute, so the product expands like a polynomial:
/// the coefficient `c_k` of `∏_j x_j^{k_j}` multiplies `∏_j (a_j†)^{k_j}|0⟩ =
/// ∏_j f(k_j) |k⟩`. Occupations past the end of a spin species' Fock space are
/// annihilated. The result is renormalized; for deformed species it need not
/// coincide with the mesh evolution.
pub fn substitution_oracle(u: &ModeUnitary, l: &Occupation, f: &CharacteristicF) -> Result<StateVector> {
    let m = u.dim();
    if l.modes() != m {
        return Err(Error::DimensionMismatch(format!(
            "input over {} modes for a {m}-mode unitary",
            l.modes()
        )));
    }
    let n = l.total();
    if n > ORACLE_MAX_PHOTONS {
        return Err(Error::SizeCap {
            what: "substitution oracle photon number",
            size: u128::from(n),
            cap: u128::from(ORACLE_MAX_PHOTONS),
        });
    }
    if m > ORACLE_MAX_MODES {
        return Err(Error::SizeCap {
            what: "substitution oracle mode count",
            size: m as u128,
            cap: ORACLE_MAX_MODES as u128,
        });
    }
    let basis = Arc::new(species_basis(m, n, f)?);
    if l.max() > basis.max_occupation() {
        return Err(Error::OccupationAboveCutoff {
            occupation: l.max(),
            limit: basis.max_occupation(),
        });
    }

    let mut poly: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
    poly.insert(vec![0; m], Complex64::new(1.0, 0.0));
    for (i, &li) in l.counts().iter().enumerate() {
        for _ in 0..li {
            let mut next = BTreeMap::new();
            for (mono, c) in &poly {
                for j in 0..m {
                    let mut k = mono.clone();
                    k[j] += 1;
                    *next.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c * u.matrix()[(j, i)];
                }
            }
            poly = next;
        }
    }

    let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.len()];
    for (k, c) in poly {
        let Some(weight) = k.iter().map(|&kj| f.f(kj)).product::<Option<f64>>() else {
            continue;
        };
        if let Some(idx) = basis.index_of(&Occupation::new(k)) {
            amplitudes[idx] = c * weight;
        }
    }
    let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(invalid("input", "every output term is annihilated by the species"));
    }
    for a in &mut amplitudes {
        *a /= norm;
    }
    StateVector::new(basis, amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::focksim::{evolve_unitary, haar_unitary, tv_distance};
    use crate::qalgebra::Species;

    fn occ(v: &[u32]) -> Occupation {
        Occupation::new(v.to_vec())
    }

    #[test]
    fn single_photon_is_a_column() {
        let u = haar_unitary(4, 9).unwrap();
        for species in [Species::Standard, Species::q_boson(0.7).unwrap(), Species::spin(0.5).unwrap()] {
            let f = CharacteristicF::for_photons(species, 1).unwrap();
            let out = substitution_oracle(&u, &Occupation::single(4, 2), &f).unwrap();
            for j in 0..4 {
                let a = out.amplitude(&Occupation::single(4, j));
                assert!((a - u.matrix()[(j, 2)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn identity_returns_input() {
        let f = CharacteristicF::for_photons(Species::q_boson(1.3).unwrap(), 3).unwrap();
        let l = occ(&[2, 0, 1]);
        let out = substitution_oracle(&ModeUnitary::identity(3), &l, &f).unwrap();
        assert!((out.amplitude(&l) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((out.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn standard_agrees_with_evolution() {
        let f = CharacteristicF::for_photons(Species::Standard, 2).unwrap();
        let u = haar_unitary(3, 4).unwrap();
        let l = occ(&[1, 1, 0]);
        let a = substitution_oracle(&u, &l, &f).unwrap();
        let b = evolve_unitary(&u, &l, &f).unwrap();
        assert!(a.phase_distance(&b).unwrap() < 1e-12);
        let tv = tv_distance(&a.probabilities().unwrap(), &b.probabilities().unwrap()).unwrap();
        assert!(tv < 1e-8);
    }

    #[test]
    fn deformed_definitions_differ() {
        let f = CharacteristicF::for_photons(Species::q_boson(0.6).unwrap(), 2).unwrap();
        let u = haar_unitary(2, 1).unwrap();
        let l = occ(&[1, 1]);
        let a = substitution_oracle(&u, &l, &f).unwrap().probabilities().unwrap();
        let b = evolve_unitary(&u, &l, &f).unwrap().probabilities().unwrap();
        assert!(tv_distance(&a, &b).unwrap() > 1e-6);
    }

    #[test]
    fn caps() {
        let f = CharacteristicF::for_photons(Species::Standard, 6).unwrap();
        let u = haar_unitary(2, 0).unwrap();
        assert!(matches!(substitution_oracle(&u, &occ(&[3, 3]), &f), Err(Error::SizeCap { .. })));
        let f = CharacteristicF::for_photons(Species::Standard, 1).unwrap();
        let u = haar_unitary(7, 0).unwrap();
        assert!(substitution_oracle(&u, &Occupation::single(7, 0), &f).is_err());
    }
}
