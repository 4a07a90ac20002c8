//! State-vector evolution of generalized bosons through a beamsplitter mesh.
//!
//! Each layer acts as `exp(-i g)` with `g = θ(e^{iφ} a_i† a_j + h.c.)` built
//! from the species' ladder elements. The generator only couples states that
//! agree outside modes `i, j` and share `n_i + n_j`, so the exponential is
//! taken block by block on these small tridiagonal chains.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::mesh::{clements_decompose, BeamsplitterLayer, MeshCircuit};
use crate::error::{invalid, Error, Result};
use crate::permanent::{ComplexMatrix, ModeUnitary};
use crate::qalgebra::CharacteristicF;
use crate::sector::{Occupation, OutcomeDistribution, SectorBasis};

/// Amplitudes over a fixed-photon-number sector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: Arc<SectorBasis>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: Arc<SectorBasis>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for a basis of {} states",
                amplitudes.len(),
                basis.len()
            )));
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn basis(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of `occ`; zero for states outside the basis.
    pub fn amplitude(&self, occ: &Occupation) -> Complex64 {
        self.basis
            .index_of(occ)
            .map_or(Complex64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Born-rule probabilities `|⟨k|ψ⟩|²`.
    pub fn probabilities(&self) -> Result<OutcomeDistribution> {
        let probs = self.amplitudes.iter().map(|a| a.norm_sqr()).collect();
        OutcomeDistribution::new((*self.basis).clone(), probs)
    }

    /// `|1 - |⟨ψ|φ⟩||`: zero iff two unit states agree up to a global phase.
    pub fn phase_distance(&self, other: &StateVector) -> Result<f64> {
        if self.basis.states() != other.basis.states() {
            return Err(Error::BasisMismatch);
        }
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok((1.0 - overlap.norm()).abs())
    }
}

/// The sector a species can populate with `n` quanta over `m` modes.
///
/// Spin species whose table ends at `2S` restrict occupations to `2S`;
/// every other table must reach `n` so that no hop leaves the table.
pub fn species_basis(m: usize, n: u32, f: &CharacteristicF) -> Result<SectorBasis> {
    let cap = occupation_cap(n, f)?;
    SectorBasis::with_cap(m, n, cap)
}

fn occupation_cap(n: u32, f: &CharacteristicF) -> Result<u32> {
    if f.is_hard_core_complete() {
        Ok(f.cutoff().min(n))
    } else if f.cutoff() >= n {
        Ok(n)
    } else {
        Err(invalid(
            "cutoff",
            format!("an {n}-photon sector needs f up to {n}, the table ends at {}", f.cutoff()),
        ))
    }
}

/// Unit vector at `l` in `basis`.
pub fn input_state(l: &Occupation, f: &CharacteristicF, basis: Arc<SectorBasis>) -> Result<StateVector> {
    if l.modes() != basis.modes() {
        return Err(Error::DimensionMismatch(format!(
            "input over {} modes for a {}-mode sector",
            l.modes(),
            basis.modes()
        )));
    }
    if l.total() != basis.photons() {
        return Err(Error::PhotonNumberMismatch {
            input: l.total(),
            output: basis.photons(),
        });
    }
    let limit = basis.max_occupation().min(f.cutoff());
    if l.max() > limit {
        return Err(Error::OccupationAboveCutoff {
            occupation: l.max(),
            limit,
        });
    }
    let i = basis
        .index_of(l)
        .ok_or_else(|| invalid("input", format!("({l}) is not in the sector")))?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.len()];
    amplitudes[i] = Complex64::new(1.0, 0.0);
    Ok(StateVector { basis, amplitudes })
}

fn hop_element(layer: &BeamsplitterLayer, f: &CharacteristicF, ni: u32, nj: u32) -> Result<Complex64> {
    // ⟨n_i+1, n_j-1| a_i† a_j |n_i, n_j⟩
    let up = f.raise(ni).ok_or(Error::OccupationAboveCutoff {
        occupation: ni + 1,
        limit: f.cutoff(),
    })?;
    let down = f.lower(nj).ok_or(Error::OccupationAboveCutoff {
        occupation: nj,
        limit: f.cutoff(),
    })?;
    Ok(Complex64::from_polar(layer.theta * up * down, layer.phi))
}

fn check_layer(layer: &BeamsplitterLayer, basis: &SectorBasis) -> Result<()> {
    let (i, j) = layer.modes;
    if i == j || i >= basis.modes() || j >= basis.modes() {
        return Err(Error::DimensionMismatch(format!(
            "layer on modes ({i}, {j}) for a {}-mode sector",
            basis.modes()
        )));
    }
    Ok(())
}

/// Dense matrix of the layer generator on the whole sector.
pub fn beamsplitter_generator(layer: &BeamsplitterLayer, f: &CharacteristicF, basis: &SectorBasis) -> Result<ComplexMatrix> {
    check_layer(layer, basis)?;
    let (i, j) = layer.modes;
    let dim = basis.len();
    let mut g = ComplexMatrix::zeros(dim, dim);
    for (col, s) in basis.states().iter().enumerate() {
        if s[j] == 0 {
            continue;
        }
        let mut t = s.counts().to_vec();
        t[i] += 1;
        t[j] -= 1;
        if let Some(row) = basis.index_of(&Occupation::new(t)) {
            let h = hop_element(layer, f, s[i], s[j])?;
            g[(row, col)] = h;
            g[(col, row)] = h.conj();
        }
    }
    Ok(g)
}

/// `exp(-i H)` for Hermitian `H` through its eigendecomposition.
pub fn hermitian_exp(h: &ComplexMatrix) -> ComplexMatrix {
    let eig = SymmetricEigen::new(h.clone());
    let phases = eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l));
    let v = &eig.eigenvectors;
    let mut vd = v.clone();
    for (mut col, p) in vd.column_iter_mut().zip(phases.iter()) {
        col *= *p;
    }
    vd * v.adjoint()
}

/// Chain exponential for local total `s`: rows/columns indexed by
/// `n_i = lo..=hi`.
fn chain_exp(layer: &BeamsplitterLayer, f: &CharacteristicF, s: u32, lo: u32, hi: u32) -> Result<ComplexMatrix> {
    let d = (hi - lo + 1) as usize;
    let mut h = ComplexMatrix::zeros(d, d);
    for p in lo..hi {
        let e = hop_element(layer, f, p, s - p)?;
        let k = (p - lo) as usize;
        h[(k + 1, k)] = e;
        h[(k, k + 1)] = e.conj();
    }
    Ok(hermitian_exp(&h))
}

fn apply_layer(layer: &BeamsplitterLayer, f: &CharacteristicF, basis: &SectorBasis, amps: &mut [Complex64]) -> Result<()> {
    check_layer(layer, basis)?;
    let (i, j) = layer.modes;
    let cap = basis.max_occupation();
    let mut cache: HashMap<u32, ComplexMatrix> = HashMap::new();
    let mut chain = Vec::new();
    let mut local = Vec::new();
    for s_state in basis.states() {
        let s = s_state[i] + s_state[j];
        let lo = s.saturating_sub(cap);
        let hi = s.min(cap);
        // Visit each chain once, from its lowest n_i.
        if s_state[i] != lo || lo == hi {
            continue;
        }
        chain.clear();
        let mut t = s_state.counts().to_vec();
        for p in lo..=hi {
            t[i] = p;
            t[j] = s - p;
            let idx = basis
                .index_of(&Occupation::new(t.clone()))
                .expect("chain states lie in the sector");
            chain.push(idx);
        }
        let e = match cache.entry(s) {
            Entry::Occupied(o) => o.into_mut(),
            Entry::Vacant(v) => v.insert(chain_exp(layer, f, s, lo, hi)?),
        };
        local.clear();
        local.extend(chain.iter().map(|&k| amps[k]));
        for (r, &k) in chain.iter().enumerate() {
            amps[k] = (0..chain.len()).map(|c| e[(r, c)] * local[c]).sum();
        }
    }
    Ok(())
}

/// Runs `state` through every layer of `mesh`, then the output phases
/// `exp(i Σ φ_k n_k)`.
pub fn evolve(state: &StateVector, mesh: &MeshCircuit, f: &CharacteristicF) -> Result<StateVector> {
    mesh.validate()?;
    let basis = &state.basis;
    if mesh.modes != basis.modes() {
        return Err(Error::DimensionMismatch(format!(
            "{}-mode mesh for a {}-mode state",
            mesh.modes,
            basis.modes()
        )));
    }
    occupation_cap(basis.photons(), f).and_then(|cap| {
        if basis.max_occupation() > cap {
            Err(Error::OccupationAboveCutoff {
                occupation: basis.max_occupation(),
                limit: cap,
            })
        } else {
            Ok(())
        }
    })?;
    let mut amps = state.amplitudes.clone();
    for layer in &mesh.layers {
        apply_layer(layer, f, basis, &mut amps)?;
    }
    for (a, occ) in amps.iter_mut().zip(basis.states()) {
        let phase: f64 = occ
            .counts()
            .iter()
            .zip(&mesh.output_phases)
            .map(|(&n, &p)| f64::from(n) * p)
            .sum();
        *a *= Complex64::from_polar(1.0, phase);
    }
    Ok(StateVector {
        basis: Arc::clone(basis),
        amplitudes: amps,
    })
}

/// Output distribution of the mesh realizing `u`, run with the generators of
/// species `f`, for input `l`.
pub fn outcome_distribution(u: &ModeUnitary, l: &Occupation, f: &CharacteristicF) -> Result<OutcomeDistribution> {
    evolve_unitary(u, l, f)?.probabilities()
}

/// Output state of the mesh realizing `u` for input `l`.
pub fn evolve_unitary(u: &ModeUnitary, l: &Occupation, f: &CharacteristicF) -> Result<StateVector> {
    if l.modes() != u.dim() {
        return Err(Error::DimensionMismatch(format!(
            "input over {} modes for a {}-mode unitary",
            l.modes(),
            u.dim()
        )));
    }
    let basis = Arc::new(species_basis(u.dim(), l.total(), f)?);
    let input = input_state(l, f, basis)?;
    let mesh = clements_decompose(u)?;
    evolve(&input, &mesh, f)
}
