//! Rectangular beamsplitter meshes.
//!
//! A layer on modes `(i, j)` is `exp(-i g)` with generator
//! `g = θ(e^{iφ} a_i† a_j + e^{-iφ} a_j† a_i)`. On the single-photon space it
//! acts through the 2×2 block (rows/columns `i, j`)
//!
//! ```text
//! [        cos θ        -i e^{iφ} sin θ ]
//! [ -i e^{-iφ} sin θ         cos θ      ]
//! ```
//!
//! so `θ = π/4, φ = 0` is the balanced beamsplitter `(1/√2)[[1, -i], [-i, 1]]`.
//! A mesh applies its layers in order and then the output phases
//! `diag(e^{iφ_k})`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::permanent::{ComplexMatrix, ModeUnitary};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamsplitterLayer {
    pub modes: (usize, usize),
    pub theta: f64,
    pub phi: f64,
}

impl BeamsplitterLayer {
    pub fn new(i: usize, j: usize, theta: f64, phi: f64) -> Result<Self> {
        if i == j {
            return Err(invalid("modes", "a beamsplitter needs two distinct modes"));
        }
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(invalid("theta", "angles must be finite"));
        }
        Ok(Self {
            modes: (i, j),
            theta,
            phi,
        })
    }

    /// Balanced 50:50 layer (`θ = π/4`, `φ = 0`).
    pub fn balanced(i: usize, j: usize) -> Result<Self> {
        Self::new(i, j, std::f64::consts::FRAC_PI_4, 0.0)
    }

    /// The 2×2 single-photon block `[[T_ii, T_ij], [T_ji, T_jj]]`.
    pub fn block(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        let minus_i = Complex64::new(0.0, -1.0);
        [
            [Complex64::new(c, 0.0), minus_i * Complex64::from_polar(s, self.phi)],
            [minus_i * Complex64::from_polar(s, -self.phi), Complex64::new(c, 0.0)],
        ]
    }

    fn apply_left(&self, u: &mut ComplexMatrix) {
        let (i, j) = self.modes;
        let t = self.block();
        for col in 0..u.ncols() {
            let a = u[(i, col)];
            let b = u[(j, col)];
            u[(i, col)] = t[0][0] * a + t[0][1] * b;
            u[(j, col)] = t[1][0] * a + t[1][1] * b;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshCircuit {
    pub modes: usize,
    pub layers: Vec<BeamsplitterLayer>,
    pub output_phases: Vec<f64>,
}

impl MeshCircuit {
    pub fn empty(modes: usize) -> Self {
        Self {
            modes,
            layers: Vec::new(),
            output_phases: vec![0.0; modes],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.output_phases.len() != self.modes {
            return Err(invalid("output_phases", "need one phase per mode"));
        }
        for l in &self.layers {
            let (i, j) = l.modes;
            if i == j || i >= self.modes || j >= self.modes {
                return Err(invalid("layers", format!("layer on modes ({i}, {j}) in a {}-mode mesh", self.modes)));
            }
        }
        Ok(())
    }
}

/// Product of the embedded 2×2 blocks (in layer order) and the output phases.
pub fn mesh_reconstruct(mesh: &MeshCircuit) -> Result<ModeUnitary> {
    mesh.validate()?;
    let mut u = ComplexMatrix::identity(mesh.modes, mesh.modes);
    for layer in &mesh.layers {
        layer.apply_left(&mut u);
    }
    for (k, &phase) in mesh.output_phases.iter().enumerate() {
        let p = Complex64::from_polar(1.0, phase);
        for col in 0..mesh.modes {
            u[(k, col)] *= p;
        }
    }
    ModeUnitary::new(u)
}

/// Rectangular nulling decomposition into `m(m-1)/2` nearest-neighbour layers.
///
/// Sub-diagonal entries are nulled along anti-diagonals, alternating between
/// column operations `W ← W T⁻¹` and row operations `W ← T W`, until `W` is
/// diagonal. With this block family `T⁻¹(θ, φ) D = D T(-θ, φ')` where
/// `e^{iφ'} = e^{iφ} d_j / d_i`, so the row operations pass through the final
/// diagonal without changing it.
pub fn clements_decompose(u: &ModeUnitary) -> Result<MeshCircuit> {
    let m = u.dim();
    let mut w = u.matrix().clone();
    let mut right: Vec<BeamsplitterLayer> = Vec::new();
    let mut left: Vec<BeamsplitterLayer> = Vec::new();

    for i in 0..m.saturating_sub(1) {
        if i % 2 == 0 {
            for j in 0..=i {
                let col = i - j;
                let row = m - 1 - j;
                let a = w[(row, col)];
                let b = w[(row, col + 1)];
                let layer = nulling_layer(col, col + 1, a, b, -FRAC_PI_2);
                // W ← W T⁻¹, and T⁻¹ = T(-θ, φ).
                let inv = BeamsplitterLayer { theta: -layer.theta, ..layer }.block();
                for r in 0..m {
                    let x = w[(r, col)];
                    let y = w[(r, col + 1)];
                    w[(r, col)] = x * inv[0][0] + y * inv[1][0];
                    w[(r, col + 1)] = x * inv[0][1] + y * inv[1][1];
                }
                w[(row, col)] = Complex64::new(0.0, 0.0);
                right.push(layer);
            }
        } else {
            for j in 1..=i + 1 {
                let row = m + j - i - 2;
                let col = j - 1;
                let a = w[(row, col)];
                let b = w[(row - 1, col)];
                let layer = nulling_layer(row - 1, row, a, b, FRAC_PI_2);
                layer.apply_left(&mut w);
                w[(row, col)] = Complex64::new(0.0, 0.0);
                left.push(layer);
            }
        }
    }

    let diag: Vec<Complex64> = (0..m).map(|k| w[(k, k)]).collect();
    let output_phases: Vec<f64> = diag.iter().map(|d| d.arg()).collect();

    let mut layers = right;
    for l in left.iter().rev() {
        let (p, r) = l.modes;
        let phi = l.phi + output_phases[r] - output_phases[p];
        layers.push(BeamsplitterLayer {
            modes: l.modes,
            theta: -l.theta,
            phi,
        });
    }
    Ok(MeshCircuit {
        modes: m,
        layers,
        output_phases,
    })
}

/// Angles of the layer that nulls `a` against its partner `b`:
/// `θ = atan2(|a|, |b|)`, `φ = arg b - arg a + offset`.
fn nulling_layer(i: usize, j: usize, a: Complex64, b: Complex64, offset: f64) -> BeamsplitterLayer {
    let theta = a.norm().atan2(b.norm());
    let phi = if a.norm() == 0.0 { 0.0 } else { b.arg() - a.arg() + offset };
    BeamsplitterLayer {
        modes: (i, j),
        theta,
        phi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::focksim::haar_unitary;
    use nalgebra::SymmetricEigen;

    fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn empty_mesh_is_identity() {
        let u = mesh_reconstruct(&MeshCircuit::empty(4)).unwrap();
        assert_eq!(*u.matrix(), ComplexMatrix::identity(4, 4));
    }

    #[test]
    fn balanced_layer_matches_generator_exponential() {
        let layer = BeamsplitterLayer::balanced(0, 1).unwrap();
        let mesh = MeshCircuit {
            modes: 2,
            layers: vec![layer],
            output_phases: vec![0.0, 0.0],
        };
        let u = mesh_reconstruct(&mesh).unwrap();
        // exp(-iG) through the eigendecomposition of G = θ σ_x.
        let g = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(layer.theta, 0.0),
                Complex64::new(layer.theta, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let eig = SymmetricEigen::new(g);
        let phases = ComplexMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l)));
        let expected = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
        assert!(max_diff(u.matrix(), &expected) < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let balanced = ComplexMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(s, 0.0), Complex64::new(0.0, -s), Complex64::new(0.0, -s), Complex64::new(s, 0.0)],
        );
        assert!(max_diff(u.matrix(), &balanced) < 1e-15);
    }

    #[test]
    fn identity_decomposes_to_trivial_angles() {
        let mesh = clements_decompose(&ModeUnitary::identity(5)).unwrap();
        assert_eq!(mesh.layers.len(), 10);
        for l in &mesh.layers {
            assert!(l.theta.sin().abs() < 1e-15);
        }
        assert!(mesh.output_phases.iter().all(|p| p.abs() < 1e-15));
    }

    #[test]
    fn two_mode_rotation_recovers_angle() {
        let t0: f64 = 0.37;
        let (s, c) = t0.sin_cos();
        let u = ModeUnitary::new(ComplexMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(c, 0.0), Complex64::new(-s, 0.0), Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ))
        .unwrap();
        let mesh = clements_decompose(&u).unwrap();
        assert_eq!(mesh.layers.len(), 1);
        assert!((mesh.layers[0].theta.sin().abs() - s).abs() < 1e-14);
        assert!(max_diff(mesh_reconstruct(&mesh).unwrap().matrix(), u.matrix()) < 1e-14);
    }

    #[test]
    fn haar_round_trip() {
        for m in 1..=8 {
            for seed in 0..10 {
                let u = haar_unitary(m, seed).unwrap();
                let mesh = clements_decompose(&u).unwrap();
                assert_eq!(mesh.layers.len(), m * (m - 1) / 2);
                let back = mesh_reconstruct(&mesh).unwrap();
                assert!(max_diff(back.matrix(), u.matrix()) < 1e-10, "m={m} seed={seed}");
            }
        }
    }

    #[test]
    fn layers_are_nearest_neighbour() {
        let mesh = clements_decompose(&haar_unitary(6, 3).unwrap()).unwrap();
        assert!(mesh.layers.iter().all(|l| l.modes.1 == l.modes.0 + 1));
    }

    #[test]
    fn validation() {
        assert!(BeamsplitterLayer::new(1, 1, 0.1, 0.0).is_err());
        let mesh = MeshCircuit {
            modes: 2,
            layers: vec![BeamsplitterLayer::new(0, 2, 0.1, 0.0).unwrap()],
            output_phases: vec![0.0, 0.0],
        };
        assert!(mesh_reconstruct(&mesh).is_err());
    }
}
