use rayon::prelude::*;
use serde::Serialize;

use super::{evolve_unitary, haar_unitary, substitution_oracle, tv_distance};
use crate::error::{invalid, Result};
use crate::permanent::distribution_permanent;
use crate::qalgebra::{CharacteristicF, Species};
use crate::sector::{Occupation, SectorBasis};

/// Tolerance the three standard-boson engines must meet pairwise.
pub const ENGINE_TV_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceCase {
    pub seed: u64,
    pub modes: usize,
    pub input: Occupation,
    pub tv_permanent_evolve: f64,
    pub tv_evolve_oracle: f64,
    pub tv_permanent_oracle: f64,
}

impl EquivalenceCase {
    pub fn max_tv(&self) -> f64 {
        self.tv_permanent_evolve
            .max(self.tv_evolve_oracle)
            .max(self.tv_permanent_oracle)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub cases: Vec<EquivalenceCase>,
    pub max_tv: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Cross-checks the permanent engine, mesh evolution and the substitution
/// oracle on standard bosons, over every `seed`, `m` in `2..=max_modes` and
/// `n` in `1..=max_photons`. The input for each case is the sector state at
/// index `seed mod |sector|`.
pub fn engine_equivalence(seeds: &[u64], max_modes: usize, max_photons: u32) -> Result<EquivalenceReport> {
    if max_modes < 2 || max_photons < 1 {
        return Err(invalid("engine_equivalence", "need at least 2 modes and 1 photon"));
    }
    let jobs: Vec<(u64, usize, u32)> = seeds
        .iter()
        .flat_map(|&s| (2..=max_modes).flat_map(move |m| (1..=max_photons).map(move |n| (s, m, n))))
        .collect();
    let cases = jobs
        .par_iter()
        .map(|&(seed, m, n)| run_case(seed, m, n))
        .collect::<Result<Vec<_>>>()?;
    let max_tv = cases.iter().map(EquivalenceCase::max_tv).fold(0.0, f64::max);
    Ok(EquivalenceReport {
        cases,
        max_tv,
        tolerance: ENGINE_TV_TOLERANCE,
        pass: max_tv < ENGINE_TV_TOLERANCE,
    })
}

fn run_case(seed: u64, m: usize, n: u32) -> Result<EquivalenceCase> {
    let u = haar_unitary(m, seed)?;
    let basis = SectorBasis::new(m, n)?;
    let input = basis.state((seed % basis.len() as u64) as usize).clone();
    let f = CharacteristicF::for_photons(Species::Standard, n)?;
    let perm = distribution_permanent(&u, &input)?;
    let evolved = evolve_unitary(&u, &input, &f)?.probabilities()?;
    let oracle = substitution_oracle(&u, &input, &f)?.probabilities()?;
    Ok(EquivalenceCase {
        seed,
        modes: m,
        tv_permanent_evolve: tv_distance(&perm, &evolved)?,
        tv_evolve_oracle: tv_distance(&evolved, &oracle)?,
        tv_permanent_oracle: tv_distance(&perm, &oracle)?,
        input,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let report = engine_equivalence(&[0, 1, 2], 3, 2).unwrap();
        assert_eq!(report.cases.len(), 3 * 2 * 2);
        assert!(report.pass, "max tv {}", report.max_tv);
        assert_eq!(report.cases[0].seed, 0);
        assert_eq!(report.cases[0].modes, 2);
    }

    #[test]
    fn rejects_degenerate_ranges() {
        assert!(engine_equivalence(&[0], 1, 2).is_err());
        assert!(engine_equivalence(&[0], 2, 0).is_err());
    }
}
