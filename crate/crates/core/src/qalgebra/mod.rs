//! q-deformed number systems and generalized boson species.
//!
//! Two q-number flavors are supported:
//!
//! * Arik–Coon: `[n]_q = (q^n - 1) / (q - 1)`, the spectrum of `a†a` when
//!   `a a† - q a† a = 1`.
//! * Symmetric (Biedenharn–Macfarlane): `[n]_q = (q^n - q^-n) / (q - q^-1)`,
//!   invariant under `q -> 1/q`.
//!
//! Both are evaluated through `expm1`/`sinh` so that they stay accurate close
//! to `q = 1`, where the naive quotient cancels catastrophically.

mod burban;
mod species;

pub use burban::{
    burban_f, default_delta_grid, theorem1_check, AdmissibilityReport, BurbanParams,
    BurbanStructure, GapFit, GapRow, Verdict,
};
pub use species::{characteristic_f, commutator_f, ladder_matrices, CharacteristicF, LadderRep, Species};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Below this distance from 1 every q-number dispatches to its `q = 1` limit.
pub const Q_ONE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Flavor {
    #[default]
    ArikCoon,
    Symmetric,
}

/// Deformation parameter `q > 0` together with the q-number flavor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QDeformation {
    q: f64,
    flavor: Flavor,
}

impl QDeformation {
    pub fn new(q: f64, flavor: Flavor) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(invalid("q", format!("must be a positive finite real, got {q}")));
        }
        Ok(Self { q, flavor })
    }

    pub fn arik_coon(q: f64) -> Result<Self> {
        Self::new(q, Flavor::ArikCoon)
    }

    pub fn symmetric(q: f64) -> Result<Self> {
        Self::new(q, Flavor::Symmetric)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// `δ = q - 1`.
    pub fn delta(&self) -> f64 {
        self.q - 1.0
    }

    pub fn is_undeformed(&self) -> bool {
        (self.q - 1.0).abs() < Q_ONE_TOLERANCE
    }
}

/// `[n]_q` in the flavor carried by `d`. Both flavors return exactly `n` at `q = 1`.
pub fn q_number(n: u32, d: &QDeformation) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if d.is_undeformed() {
        return f64::from(n);
    }
    let l = d.q.ln();
    let n = f64::from(n);
    match d.flavor {
        Flavor::ArikCoon => (n * l).exp_m1() / l.exp_m1(),
        Flavor::Symmetric => (n * l).sinh() / l.sinh(),
    }
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`; the empty product is 1.
pub fn q_factorial(n: u32, d: &QDeformation) -> Result<f64> {
    let mut acc = 1.0_f64;
    for k in 1..=n {
        acc *= q_number(k, d);
        if !acc.is_finite() {
            return Err(Error::Overflow("q-factorial"));
        }
    }
    Ok(acc)
}

/// Absolute and relative deviation of the Arik–Coon `[n]_q` from `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorMetrics {
    /// `Δ_q(n) = n - [n]_q`
    pub delta_abs: f64,
    /// `δ_q(n) = Δ_q(n) / n`
    pub delta_rel: f64,
}

pub fn error_metrics(n: u32, q: f64) -> Result<ErrorMetrics> {
    if n == 0 {
        return Err(invalid("n", "relative error is undefined at n = 0"));
    }
    let d = QDeformation::arik_coon(q)?;
    let delta_abs = f64::from(n) - q_number(n, &d);
    Ok(ErrorMetrics {
        delta_abs,
        delta_rel: delta_abs / f64::from(n),
    })
}

/// Upper bound `n(n-1)(1-q)/2` on `Δ_q(n)` for `0 < q < 1`: strict for
/// `n ≥ 3`, attained at `n = 2` where `Δ_q(2) = 1 - q`.
pub fn error_bound(n: u32, q: f64) -> f64 {
    let n = f64::from(n);
    n * (n - 1.0) * (1.0 - q) / 2.0
}

/// `[n]^sym_q - [n]_q`.
///
/// The symmetric q-number has no term linear in `δ = q - 1`, so the gap is
/// `-n(n-1)/2 · δ + O(δ²)`, i.e. the symmetric number sits *below* the
/// Arik–Coon one for `q > 1`.
pub fn symmetric_gap(n: u32, q: f64) -> Result<f64> {
    if (q - 1.0).abs() < Q_ONE_TOLERANCE {
        return Err(invalid("q", "q = 1 has no gap to evaluate (the limit value is 0)"));
    }
    let sym = QDeformation::symmetric(q)?;
    let ac = QDeformation::arik_coon(q)?;
    Ok(q_number(n, &sym) - q_number(n, &ac))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ac(q: f64) -> QDeformation {
        QDeformation::arik_coon(q).unwrap()
    }

    // Independent oracle: the geometric sum 1 + q + ... + q^(n-1).
    fn geometric(n: u32, q: f64) -> f64 {
        (0..n).map(|k| q.powi(k as i32)).sum()
    }

    #[test]
    fn q_number_examples() {
        assert_eq!(q_number(5, &ac(1.0)), 5.0);
        assert_relative_eq!(q_number(3, &ac(2.0)), 7.0, max_relative = 1e-14);
        assert_relative_eq!(q_number(4, &ac(0.99)), 3.940399, max_relative = 1e-14);
        assert_relative_eq!(q_number(2, &QDeformation::symmetric(2.0).unwrap()), 2.5, max_relative = 1e-14);
        assert_eq!(q_number(7, &QDeformation::symmetric(1.0).unwrap()), 7.0);
    }

    #[test]
    fn q_number_matches_geometric_sum() {
        for &q in &[0.3, 0.9, 0.999_999, 1.000_001, 1.1, 2.5] {
            for n in 0..25 {
                assert_relative_eq!(q_number(n, &ac(q)), geometric(n, q), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn q_factorial_examples() {
        assert_eq!(q_factorial(0, &ac(3.3)).unwrap(), 1.0);
        assert_eq!(q_factorial(3, &ac(1.0)).unwrap(), 6.0);
        assert_relative_eq!(q_factorial(3, &ac(2.0)).unwrap(), 21.0, max_relative = 1e-14);
        assert_eq!(q_factorial(400, &ac(3.0)), Err(Error::Overflow("q-factorial")));
    }

    #[test]
    fn error_metrics_examples() {
        let one = error_metrics(1, 0.7).unwrap();
        assert_eq!((one.delta_abs, one.delta_rel), (0.0, 0.0));

        let m = error_metrics(4, 0.99).unwrap();
        assert_relative_eq!(m.delta_abs, 0.059601, max_relative = 1e-10);
        assert_relative_eq!(m.delta_rel, 0.01490025, max_relative = 1e-10);
        assert!(m.delta_abs < error_bound(4, 0.99));
        assert_relative_eq!(error_bound(4, 0.99), 0.06, max_relative = 1e-12);

        assert!(error_metrics(0, 0.9).is_err());
    }

    #[test]
    fn symmetric_gap_values() {
        assert_eq!(symmetric_gap(0, 1.1).unwrap(), 0.0);
        assert!(symmetric_gap(1, 1.1).unwrap().abs() < 1e-15);
        // (q^2 + 1 + q^-2) - (1 + q + q^2) at q = 1.01
        let q: f64 = 1.01;
        let oracle = (q * q + 1.0 + 1.0 / (q * q)) - (1.0 + q + q * q);
        assert_relative_eq!(symmetric_gap(3, q).unwrap(), oracle, max_relative = 1e-10);
        assert_relative_eq!(oracle, -0.029_703_950_593, max_relative = 1e-9);
        assert!(symmetric_gap(3, 1.0).is_err());
    }

    #[test]
    fn symmetric_gap_slope() {
        for n in 1..8u32 {
            let expected = -f64::from(n * (n - 1)) / 2.0;
            for &delta in &[1e-1, 1e-2, 1e-3, 1e-4] {
                let ratio = symmetric_gap(n, 1.0 + delta).unwrap() / delta;
                let tol = 2.0 * f64::from(n).powi(3) * delta + 1e-9;
                assert!((ratio - expected).abs() <= tol, "n={n} δ={delta}: {ratio} vs {expected}");
            }
        }
    }

    #[test]
    fn symmetric_flavor_is_inversion_invariant() {
        for n in 0..15 {
            let a = q_number(n, &QDeformation::symmetric(1.7).unwrap());
            let b = q_number(n, &QDeformation::symmetric(1.0 / 1.7).unwrap());
            assert_relative_eq!(a, b, max_relative = 1e-13);
        }
    }

    #[test]
    fn rejects_nonpositive_q() {
        assert!(QDeformation::arik_coon(0.0).is_err());
        assert!(QDeformation::arik_coon(-1.0).is_err());
        assert!(QDeformation::arik_coon(f64::NAN).is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn bounds_hold_below_one(n in 3u32..60, q in 0.01f64..0.999) {
                let m = error_metrics(n, q).unwrap();
                prop_assert!(m.delta_abs > 0.0);
                prop_assert!(m.delta_abs < error_bound(n, q));
                prop_assert!(m.delta_rel > 0.0);
                prop_assert!(m.delta_rel < f64::from(n - 1) * (1.0 - q) / 2.0);
            }

            #[test]
            fn near_one_limit(n in 0u32..40, eps in 1e-9f64..1e-3, above in any::<bool>()) {
                let q = if above { 1.0 + eps } else { 1.0 - eps };
                let d = QDeformation::arik_coon(q).unwrap();
                let bound = error_bound(n, 1.0 - eps) + 10.0 * f64::from(n).powi(3) * eps * eps;
                prop_assert!((q_number(n, &d) - f64::from(n)).abs() <= bound);
            }

            #[test]
            fn two_saturates_the_bound(q in 0.01f64..0.999) {
                let m = error_metrics(2, q).unwrap();
                prop_assert!((m.delta_abs - error_bound(2, q)).abs() <= 4.0 * f64::EPSILON);
            }

            #[test]
            fn factorial_grows_for_q_above_one(n in 1u32..30, q in 1.0001f64..1.5) {
                let d = QDeformation::arik_coon(q).unwrap();
                let lo = q_factorial(n, &d).unwrap();
                let hi = q_factorial(n + 1, &d).unwrap();
                prop_assert!(hi > lo * f64::from(n));
            }
        }
    }
}
