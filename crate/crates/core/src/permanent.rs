//! Permanent and q-permanent kernels and the Fock-state transition
//! probabilities they produce.
//!
//! For input occupation `l` and output occupation `k` over a mode unitary `U`
//! (column `i` = input mode `i`, row `j` = output mode `j`),
//!
//! ```text
//! Pr(k | l) = |Perm(Λ[k|l])|² / (∏ l_i! ∏ k_j!)
//! ```
//!
//! where `Λ[k|l]` repeats column `i` of `U` `l_i` times and row `j` `k_j` times.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sector::{sector_size, Occupation, OutcomeDistribution, SectorBasis, SECTOR_CAP};

pub type ComplexMatrix = DMatrix<Complex64>;

pub const NAIVE_CAP: usize = 14;
pub const RYSER_CAP: usize = 28;
pub const Q_PERMANENT_CAP: usize = 12;
/// Entrywise tolerance on `U†U = I`.
pub const UNITARITY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Largest entrywise deviation of `U†U` from the identity.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    let g = u.adjoint() * u;
    let mut worst = 0.0_f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

/// An `m × m` unitary acting on mode operators.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary(ComplexMatrix);

impl ModeUnitary {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(invalid("unitary", "needs at least one mode"));
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation.is_nan() || deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(matrix))
    }

    pub fn identity(modes: usize) -> Self {
        Self(ComplexMatrix::identity(modes, modes))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Sum over all `n!` permutations.
    Naive,
    /// Ryser's inclusion–exclusion formula over Gray-code ordered subsets.
    Ryser,
}

fn check_square(a: &ComplexMatrix, cap: usize) -> Result<usize> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let n = a.nrows();
    if n > cap {
        return Err(Error::SizeCap {
            what: "permanent matrix dimension",
            size: n as u128,
            cap: cap as u128,
        });
    }
    Ok(n)
}

pub fn permanent(a: &ComplexMatrix, algorithm: Algorithm) -> Result<Complex64> {
    match algorithm {
        Algorithm::Naive => permanent_naive(a),
        Algorithm::Ryser => permanent_ryser(a),
    }
}

/// `Σ_σ ∏_i A[i, σ(i)]` by depth-first enumeration of permutations.
pub fn permanent_naive(a: &ComplexMatrix) -> Result<Complex64> {
    let n = check_square(a, NAIVE_CAP)?;
    fn walk(a: &ComplexMatrix, row: usize, used: u32, prod: Complex64) -> Complex64 {
        let n = a.nrows();
        if row == n {
            return prod;
        }
        let mut acc = ZERO;
        for col in 0..n {
            if used & (1 << col) == 0 {
                acc += walk(a, row + 1, used | (1 << col), prod * a[(row, col)]);
            }
        }
        acc
    }
    if n == 0 {
        return Ok(ONE);
    }
    Ok(walk(a, 0, 0, ONE))
}

/// Ryser's formula with Gray-code subset updates, `O(2^n n)`.
pub fn permanent_ryser(a: &ComplexMatrix) -> Result<Complex64> {
    let n = check_square(a, RYSER_CAP)?;
    if n == 0 {
        return Ok(ONE);
    }
    Ok(ryser_range(a, 1, 1u64 << n) * parity(n))
}

/// Ryser's formula with the `2^n - 1` nonempty subsets split into
/// `partitions` contiguous Gray-code ranges evaluated in parallel. Partial sums
/// are combined in range order, so the result is bit-stable for a fixed
/// partition count.
pub fn permanent_ryser_parallel(a: &ComplexMatrix, partitions: usize) -> Result<Complex64> {
    let n = check_square(a, RYSER_CAP)?;
    if n == 0 {
        return Ok(ONE);
    }
    let total = (1u64 << n) - 1;
    let parts = (partitions.max(1) as u64).min(total);
    let bounds: Vec<(u64, u64)> = (0..parts)
        .map(|p| (1 + total * p / parts, 1 + total * (p + 1) / parts))
        .collect();
    let partials: Vec<Complex64> = bounds
        .par_iter()
        .map(|&(lo, hi)| ryser_range(a, lo, hi))
        .collect();
    let sum = partials.into_iter().fold(ZERO, |acc, x| acc + x);
    Ok(sum * parity(n))
}

fn parity(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `Σ_{k in [lo, hi)} (-1)^{|g(k)|} ∏_i Σ_{j ∈ g(k)} A[i, j]` with `g(k) = k ^ (k >> 1)`.
fn ryser_range(a: &ComplexMatrix, lo: u64, hi: u64) -> Complex64 {
    let n = a.nrows();
    if lo >= hi {
        return ZERO;
    }
    let gray = lo ^ (lo >> 1);
    let mut row_sums = vec![ZERO; n];
    for (j, col) in a.column_iter().enumerate() {
        if gray & (1 << j) != 0 {
            for (s, v) in row_sums.iter_mut().zip(col.iter()) {
                *s += v;
            }
        }
    }
    let term = |row_sums: &[Complex64], g: u64| -> Complex64 {
        let prod = row_sums.iter().fold(ONE, |acc, s| acc * s);
        if g.count_ones().is_multiple_of(2) {
            prod
        } else {
            -prod
        }
    };
    let mut acc = term(&row_sums, gray);
    for k in lo + 1..hi {
        let bit = k.trailing_zeros() as usize;
        let g = k ^ (k >> 1);
        let col = a.column(bit);
        if g & (1 << bit) != 0 {
            for (s, v) in row_sums.iter_mut().zip(col.iter()) {
                *s += v;
            }
        } else {
            for (s, v) in row_sums.iter_mut().zip(col.iter()) {
                *s -= v;
            }
        }
        acc += term(&row_sums, g);
    }
    acc
}

/// A permutation statistic `ℓ(σ)` that can be accumulated left to right.
pub trait PermutationStatistic: Sync {
    /// Increment when `σ(prefix.len()) = next` is appended to `prefix`;
    /// `used` has bit `v` set for every value already in `prefix`.
    fn step(&self, prefix: &[usize], next: usize, used: u32) -> u32;
}

/// Number of inversions: pairs `i < j` with `σ(i) > σ(j)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Inversions;

impl PermutationStatistic for Inversions {
    fn step(&self, _prefix: &[usize], next: usize, used: u32) -> u32 {
        (used >> (next + 1)).count_ones()
    }
}

/// Coefficients `c_s = Σ_{σ: ℓ(σ) = s} ∏_i A[i, σ(i)]`, so that
/// `Perm_q(A) = Σ_s c_s q^s`.
pub fn q_permanent_coefficients<S: PermutationStatistic>(a: &ComplexMatrix, statistic: &S) -> Result<Vec<Complex64>> {
    let n = check_square(a, Q_PERMANENT_CAP)?;
    let mut coeffs = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    fn walk<S: PermutationStatistic>(
        a: &ComplexMatrix,
        stat: &S,
        prefix: &mut Vec<usize>,
        used: u32,
        weight: u32,
        prod: Complex64,
        coeffs: &mut Vec<Complex64>,
    ) {
        let n = a.nrows();
        let row = prefix.len();
        if row == n {
            let w = weight as usize;
            if coeffs.len() <= w {
                coeffs.resize(w + 1, ZERO);
            }
            coeffs[w] += prod;
            return;
        }
        for col in 0..n {
            if used & (1 << col) == 0 {
                let inc = stat.step(prefix, col, used);
                prefix.push(col);
                walk(a, stat, prefix, used | (1 << col), weight + inc, prod * a[(row, col)], coeffs);
                prefix.pop();
            }
        }
    }
    walk(a, statistic, &mut prefix, 0, 0, ONE, &mut coeffs);
    Ok(coeffs)
}

/// `Σ_σ q^{ℓ(σ)} ∏_i A[i, σ(i)]` for a caller-chosen statistic.
pub fn q_permanent_with<S: PermutationStatistic>(a: &ComplexMatrix, q: f64, statistic: &S) -> Result<Complex64> {
    if !q.is_finite() {
        return Err(invalid("q", "must be finite"));
    }
    let coeffs = q_permanent_coefficients(a, statistic)?;
    // Horner; q^0 = 1 even at q = 0.
    Ok(coeffs.iter().rev().fold(ZERO, |acc, c| acc * q + c))
}

/// q-permanent weighted by the inversion number.
pub fn q_permanent(a: &ComplexMatrix, q: f64) -> Result<Complex64> {
    q_permanent_with(a, q, &Inversions)
}

/// Builds `Λ[k|l]`: row `j` of `U` repeated `k_j` times and column `i`
/// repeated `l_i` times, repeats adjacent in ascending mode order.
pub fn build_lambda(u: &ModeUnitary, k: &Occupation, l: &Occupation) -> Result<ComplexMatrix> {
    let m = u.dim();
    if k.modes() != m || l.modes() != m {
        return Err(Error::DimensionMismatch(format!(
            "occupations over {} and {} modes for a {m}-mode unitary",
            k.modes(),
            l.modes()
        )));
    }
    if k.total() != l.total() {
        return Err(Error::PhotonNumberMismatch {
            input: l.total(),
            output: k.total(),
        });
    }
    if l.total() == 0 {
        return Err(invalid("l", "needs at least one photon"));
    }
    let expand = |o: &Occupation| -> Vec<usize> {
        o.counts()
            .iter()
            .enumerate()
            .flat_map(|(mode, &c)| std::iter::repeat_n(mode, c as usize))
            .collect()
    };
    let rows = expand(k);
    let cols = expand(l);
    let n = rows.len();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| u.matrix()[(rows[r], cols[c])]))
}

fn factorial_product(o: &Occupation) -> f64 {
    o.counts()
        .iter()
        .map(|&c| (1..=c).map(f64::from).product::<f64>())
        .product()
}

/// Transition amplitude `Perm(Λ[k|l]) / √(∏ l_i! ∏ k_j!)`.
pub fn amplitude(u: &ModeUnitary, k: &Occupation, l: &Occupation) -> Result<Complex64> {
    let lambda = build_lambda(u, k, l)?;
    let perm = permanent_ryser(&lambda)?;
    Ok(perm / (factorial_product(k) * factorial_product(l)).sqrt())
}

/// `Pr(k | l) = |Perm(Λ[k|l])|² / (∏ l_i! ∏ k_j!)`.
pub fn prob_outcome(u: &ModeUnitary, k: &Occupation, l: &Occupation) -> Result<f64> {
    let lambda = build_lambda(u, k, l)?;
    let perm = permanent_ryser(&lambda)?;
    Ok(perm.norm_sqr() / (factorial_product(k) * factorial_product(l)))
}

/// `Pr(k | l)` for every `k` in the `n`-photon sector.
pub fn distribution_permanent(u: &ModeUnitary, l: &Occupation) -> Result<OutcomeDistribution> {
    let m = u.dim();
    if l.modes() != m {
        return Err(Error::DimensionMismatch(format!(
            "input over {} modes for a {m}-mode unitary",
            l.modes()
        )));
    }
    let n = l.total();
    let size = sector_size(m, n);
    if size > SECTOR_CAP {
        return Err(Error::SizeCap {
            what: "outcome space",
            size,
            cap: SECTOR_CAP,
        });
    }
    let basis = SectorBasis::new(m, n)?;
    if n == 0 {
        return OutcomeDistribution::point_mass(basis, l);
    }
    let probs = basis
        .states()
        .par_iter()
        .map(|k| prob_outcome(u, k, l))
        .collect::<Result<Vec<f64>>>()?;
    OutcomeDistribution::new(basis, probs)
}
