use num_complex::Complex64;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::rng::{seeded, HAAR_STREAM, MATRIX_STREAM};
use crate::error::{invalid, Result};
use crate::permanent::{ComplexMatrix, ModeUnitary};

/// Haar-random `m × m` unitary, deterministic in `seed`.
///
/// Entries of a Ginibre matrix are drawn row-major from ChaCha20 (stream
/// [`HAAR_STREAM`]); the QR factor `Q` is then multiplied by the phases of
/// `diag(R)` so that the result is Haar distributed rather than biased by the
/// Householder sign convention.
pub fn haar_unitary(m: usize, seed: u64) -> Result<ModeUnitary> {
    if m == 0 {
        return Err(invalid("modes", "must be at least 1"));
    }
    let mut rng: ChaCha20Rng = seeded(seed, HAAR_STREAM);
    haar_from_rng(m, &mut rng)
}

/// `n × n` matrix of i.i.d. standard complex Gaussians (`E|z|² = 1`), drawn
/// row-major from stream [`MATRIX_STREAM`].
pub fn ginibre_matrix(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng: ChaCha20Rng = seeded(seed, MATRIX_STREAM);
    ginibre_from_rng(n, &mut rng)
}

fn ginibre_from_rng<R: rand::Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        entries.push(Complex64::new(re * scale, im * scale));
    }
    ComplexMatrix::from_row_slice(n, n, &entries)
}

fn haar_from_rng<R: rand::Rng>(m: usize, rng: &mut R) -> Result<ModeUnitary> {
    let z = ginibre_from_rng(m, rng);
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    ModeUnitary::new(q)
}
