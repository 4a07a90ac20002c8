//! Transmon, Kerr and q-boson level structures, and the Kerr ↔ q mapping.
//!
//! Energies are in arbitrary consistent units with ħ = 1.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::io::fmt_f64;
use crate::qalgebra::{characteristic_f, ladder_matrices, q_number, QDeformation, Species};

/// Below this `E_J/E_C` the device is outside the transmon regime.
pub const TRANSMON_REGIME_RATIO: f64 = 20.0;
/// Above this `|K|/ω` the Kerr and q-boson spectra visibly separate.
pub const WEAK_NONLINEARITY_RATIO: f64 = 0.1;
/// Largest `|K|/ω` accepted by [`map_kerr_to_q`].
pub const MAX_MAPPING_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmonParams {
    pub ej: f64,
    pub ec: f64,
    /// Offset charge. Recorded but unused: transmon levels are flat in `n_g`.
    #[serde(default)]
    pub ng: f64,
}

impl TransmonParams {
    pub fn new(ej: f64, ec: f64, ng: f64) -> Result<Self> {
        if !(ej.is_finite() && ej > 0.0) {
            return Err(invalid("ej", "must be positive"));
        }
        if !(ec.is_finite() && ec > 0.0) {
            return Err(invalid("ec", "must be positive"));
        }
        Ok(Self { ej, ec, ng })
    }

    pub fn in_transmon_regime(&self) -> bool {
        self.ej / self.ec >= TRANSMON_REGIME_RATIO
    }

    /// Plasma frequency `√(8 E_J E_C)`.
    pub fn plasma_frequency(&self) -> f64 {
        (8.0 * self.ej * self.ec).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KerrParams {
    pub omega: f64,
    /// Kerr strength; negative for transmons.
    pub kerr: f64,
}

impl KerrParams {
    pub fn new(omega: f64, kerr: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(invalid("omega", "must be positive"));
        }
        if !kerr.is_finite() {
            return Err(invalid("kerr", "must be finite"));
        }
        Ok(Self { omega, kerr })
    }

    pub fn ratio(&self) -> f64 {
        self.kerr / self.omega
    }

    pub fn is_weakly_nonlinear(&self) -> bool {
        self.ratio().abs() <= WEAK_NONLINEARITY_RATIO
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumModel {
    Transmon,
    Kerr,
    QBoson,
}

impl SpectrumModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumModel::Transmon => "transmon",
            SpectrumModel::Kerr => "kerr",
            SpectrumModel::QBoson => "qboson",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub index: u32,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub model: SpectrumModel,
    pub levels: Vec<Level>,
}

impl SpectrumTable {
    fn build(model: SpectrumModel, top: u32, energy: impl Fn(u32) -> f64) -> Self {
        let levels = (0..=top).map(|index| Level { index, energy: energy(index) }).collect();
        Self { model, levels }
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    /// Transition energies `ΔE_n = E_n - E_{n-1}` for `n >= 1`.
    pub fn spacings(&self) -> Vec<f64> {
        self.levels.windows(2).map(|w| w[1].energy - w[0].energy).collect()
    }

    /// Second difference `(E_2 - E_1) - (E_1 - E_0)`.
    pub fn anharmonicity(&self) -> Option<f64> {
        let s = self.spacings();
        (s.len() >= 2).then(|| s[1] - s[0])
    }

    /// CSV with header `index,energy,model`.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["index", "energy", "model"])?;
        for l in &self.levels {
            out.write_record([l.index.to_string(), fmt_f64(l.energy), self.model.as_str().to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `E_m = √(8E_JE_C)(m + ½) - (E_C/2)(m² + m + ½)`, the first-order
/// perturbative result for the quartic correction, with the constant `-E_J`
/// dropped.
///
/// The `E_C/2` coefficient is the one that produces the `-E_C` anharmonicity;
/// an `E_C/12` coefficient that also appears in print for this formula would
/// give `-E_C/6`.
pub fn transmon_levels(p: &TransmonParams, m_max: u32) -> Result<SpectrumTable> {
    if m_max < 2 {
        return Err(invalid("m_max", "need at least three levels"));
    }
    let w = p.plasma_frequency();
    let ec = p.ec;
    Ok(SpectrumTable::build(SpectrumModel::Transmon, m_max, |m| {
        let m = f64::from(m);
        w * (m + 0.5) - ec / 2.0 * (m * m + m + 0.5)
    }))
}

/// `E_n = ωn + (K/2)n(n-1)`.
pub fn kerr_levels(p: &KerrParams, n_max: u32) -> Result<SpectrumTable> {
    if n_max < 1 {
        return Err(invalid("n_max", "must be at least 1"));
    }
    Ok(SpectrumTable::build(SpectrumModel::Kerr, n_max, |n| kerr_energy(p, n)))
}

fn kerr_energy(p: &KerrParams, n: u32) -> f64 {
    let n = f64::from(n);
    p.omega * n + p.kerr / 2.0 * n * (n - 1.0)
}

/// `E_n = ω[n]_q`.
pub fn qboson_levels(omega: f64, d: &QDeformation, n_max: u32) -> Result<SpectrumTable> {
    if n_max < 1 {
        return Err(invalid("n_max", "must be at least 1"));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("omega", "must be positive"));
    }
    Ok(SpectrumTable::build(SpectrumModel::QBoson, n_max, |n| omega * q_number(n, d)))
}

/// First-order identification `q = 1 + K/ω` (Arik–Coon flavor).
pub fn map_kerr_to_q(p: &KerrParams) -> Result<QDeformation> {
    let r = p.ratio();
    if r.abs() > MAX_MAPPING_RATIO {
        return Err(invalid(
            "kerr",
            format!("|K|/ω = {:.3} exceeds {MAX_MAPPING_RATIO}; the first-order mapping q = 1 + K/ω is meaningless there", r.abs()),
        ));
    }
    QDeformation::arik_coon(1.0 + r)
}

/// `|K|/ω ≈ 1/(√(8E_J/E_C) - 1)`, using `|K| ≈ E_C` and `ω ≈ √(8E_JE_C) - E_C`.
pub fn kerr_ratio_from_ej_ec(ej: f64, ec: f64) -> Result<f64> {
    TransmonParams::new(ej, ec, 0.0)?;
    if ej / ec <= 1.0 {
        return Err(invalid("ej", "E_J/E_C must exceed 1"));
    }
    Ok(1.0 / ((8.0 * ej / ec).sqrt() - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub index: u32,
    pub energy_kerr: f64,
    pub energy_qboson: f64,
    pub gap: f64,
    /// `gap / |E_kerr|`, zero at the ground state.
    pub rel_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub omega: f64,
    pub kerr: f64,
    pub q: f64,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonTable {
    /// CSV with header `index,energy_kerr,energy_qboson,gap,rel_gap`.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["index", "energy_kerr", "energy_qboson", "gap", "rel_gap"])?;
        for r in &self.rows {
            out.write_record([
                r.index.to_string(),
                fmt_f64(r.energy_kerr),
                fmt_f64(r.energy_qboson),
                fmt_f64(r.gap),
                fmt_f64(r.rel_gap),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Kerr spectrum against the q-boson spectrum at `q = 1 + K/ω`.
///
/// The Kerr energies are written as `ω[n + ½(q-1)n(n-1)]`, so the gap is
/// `ω|[n]_q - n - ½δn(n-1)|`: identically zero for `n <= 2` and `O(δ²)` above.
pub fn spectrum_compare(omega: f64, kerr: f64, n_max: u32) -> Result<ComparisonTable> {
    if n_max < 2 {
        return Err(invalid("n_max", "must be at least 2"));
    }
    let p = KerrParams::new(omega, kerr)?;
    let d = map_kerr_to_q(&p)?;
    let delta = d.delta();
    let rows = (0..=n_max)
        .map(|index| {
            let n = f64::from(index);
            let qn = q_number(index, &d);
            let energy_kerr = omega * (n + 0.5 * delta * n * (n - 1.0));
            let energy_qboson = omega * qn;
            // Taking the difference in bracket form avoids the ω factor
            // magnifying rounding in E_kerr and E_q separately.
            let gap = omega * (qn - n - 0.5 * delta * n * (n - 1.0)).abs();
            let rel_gap = if energy_kerr == 0.0 { 0.0 } else { gap / energy_kerr.abs() };
            ComparisonRow {
                index,
                energy_kerr,
                energy_qboson,
                gap,
                rel_gap,
            }
        })
        .collect();
    Ok(ComparisonTable {
        omega,
        kerr,
        q: d.q(),
        rows,
    })
}

/// `⟨m|(a + a†)⁴|m⟩` two ways: the closed form `6m² + 6m + 3`, and explicit
/// fourth power of the truncated standard position operator.
pub fn phi4_moment(m: u32, oracle_dim: usize) -> Result<(f64, f64)> {
    if oracle_dim < m as usize + 5 {
        return Err(invalid("oracle_dim", format!("need at least m + 5 = {} levels", m + 5)));
    }
    let mf = f64::from(m);
    let closed = 6.0 * mf * mf + 6.0 * mf + 3.0;

    let f = characteristic_f(Species::Standard, oracle_dim as u32 - 1)?;
    let rep = ladder_matrices(&f, oracle_dim)?;
    let x: DMatrix<Complex64> = &rep.lower + &rep.raise;
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    Ok((closed, x4[(m as usize, m as usize)].re))
}
