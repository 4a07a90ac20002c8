//! Subcommand arguments. Every struct parses both from flags and from the
//! `params` object of a job file, where unknown keys are rejected.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer};

use qboson::io::MatrixJson;
use qboson::permanent::Algorithm;
use qboson::{Occupation, Species};

/// Parses a value from its command-line text form.
fn from_text<'de, D, T>(d: D) -> Result<T, D::Error>
where
    D: Deserializer<'de>,
    T: FromStr,
    T::Err: fmt::Display,
{
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

fn species_from_text<'de, D: Deserializer<'de>>(d: D) -> Result<Species, D::Error> {
    from_text(d)
}

fn default_species() -> Species {
    Species::Standard
}

/// An occupation given as `"1,0,2"` or `[1, 0, 2]`.
fn occupation_any<'de, D: Deserializer<'de>>(d: D) -> Result<Occupation, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Counts(Vec<u32>),
    }
    match Repr::deserialize(d)? {
        Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        Repr::Counts(v) => Ok(Occupation::new(v)),
    }
}

/// A mode unitary read from a JSON file, or given inline in a job file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum UnitaryArg {
    File(PathBuf),
    Inline(MatrixJson),
}

impl FromStr for UnitaryArg {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(UnitaryArg::File(PathBuf::from(s)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectrumKind {
    /// Perturbative transmon levels from E_J, E_C.
    Transmon,
    /// Kerr oscillator levels from ω, K.
    Kerr,
    /// q-boson levels ω[n]_q.
    Qboson,
    /// Kerr vs q-boson at q = 1 + K/ω.
    Compare,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectraArgs {
    #[arg(long, value_enum, default_value = "transmon")]
    #[serde(default = "default_model")]
    pub model: SpectrumKind,
    /// Josephson energy (transmon).
    #[arg(long)]
    pub ej: Option<f64>,
    /// Charging energy (transmon).
    #[arg(long)]
    pub ec: Option<f64>,
    /// Offset charge; ignored deep in the transmon regime.
    #[arg(long, default_value_t = 0.0)]
    #[serde(default)]
    pub ng: f64,
    /// Bare frequency (kerr, qboson, compare).
    #[arg(long)]
    pub omega: Option<f64>,
    /// Kerr coefficient K (kerr, compare).
    #[arg(long)]
    pub kerr: Option<f64>,
    /// Deformation parameter (qboson).
    #[arg(long)]
    pub q: Option<f64>,
    /// Number of levels, counting the ground state.
    #[arg(long, default_value_t = 6)]
    #[serde(default = "default_levels")]
    pub levels: u32,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn default_model() -> SpectrumKind {
    SpectrumKind::Transmon
}

fn default_levels() -> u32 {
    6
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QnumArgs {
    #[arg(long)]
    pub q: f64,
    /// Largest n tabulated.
    #[arg(long, default_value_t = 10)]
    #[serde(default = "default_n_max")]
    pub n_max: u32,
    /// Use the symmetric q-number instead of the Arik–Coon one.
    #[arg(long)]
    #[serde(default)]
    pub symmetric: bool,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn default_n_max() -> u32 {
    10
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Theorem1Args {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    #[serde(default)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    #[serde(default)]
    pub nu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    #[serde(default)]
    pub f0: f64,
    /// Comma-separated δ grid; nine log-spaced points over [1e-3, 1e-1] by default.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmArg {
    Naive,
    Ryser,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Naive => Algorithm::Naive,
            AlgorithmArg::Ryser => Algorithm::Ryser,
        }
    }
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermArgs {
    /// JSON file with the matrix as rows of [re, im] pairs.
    #[arg(long, conflicts_with = "random")]
    pub matrix: Option<UnitaryArg>,
    /// Use an n×n complex Gaussian matrix drawn from --seed.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, value_enum, default_value = "ryser")]
    #[serde(default = "default_algorithm")]
    pub algorithm: AlgorithmArg,
    /// Also evaluate the inversion-weighted q-permanent at this q.
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn default_algorithm() -> AlgorithmArg {
    AlgorithmArg::Ryser
}

/// Interferometer, input and species shared by `dist` and `sample`.
#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FockArgs {
    #[arg(long)]
    pub modes: Option<usize>,
    /// Seed of a Haar-random mode unitary.
    #[arg(long, conflicts_with = "unitary")]
    pub haar_seed: Option<u64>,
    /// JSON file with the mode unitary as rows of [re, im] pairs.
    #[arg(long)]
    pub unitary: Option<UnitaryArg>,
    /// Input occupation, e.g. 1,1,0.
    #[arg(long = "input")]
    #[serde(rename = "input_occupation", alias = "input", deserialize_with = "occupation_any")]
    pub input: Occupation,
    /// standard | q:<q> | qsym:<q> | spin:<S>
    #[arg(long, default_value = "standard")]
    #[serde(default = "default_species", deserialize_with = "species_from_text")]
    pub species: Species,
    /// Number of draws (sample only).
    #[arg(long)]
    pub shots: Option<usize>,
    /// Sampling seed (sample only).
    #[arg(long)]
    #[serde(skip)]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateArgs {
    /// Haar seeds 0..seeds.
    #[arg(long, default_value_t = 20)]
    #[serde(default = "default_seeds")]
    pub seeds: u64,
    #[arg(long, default_value_t = 4)]
    #[serde(default = "default_max_modes")]
    pub max_modes: usize,
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_max_photons")]
    pub max_photons: u32,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn default_seeds() -> u64 {
    20
}

fn default_max_modes() -> usize {
    4
}

fn default_max_photons() -> u32 {
    3
}

#[derive(Debug, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchArgs {
    /// Largest matrix dimension for Ryser (naive stops at 10).
    #[arg(long, default_value_t = 20)]
    #[serde(default = "default_bench_n")]
    pub max_n: usize,
    /// Timings are the minimum over this many runs.
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    pub seed: u64,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn default_bench_n() -> usize {
    20
}

fn default_repeats() -> usize {
    3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JobCommand {
    Spectra,
    Qnum,
    Theorem1,
    Perm,
    Dist,
    Sample,
    Validate,
    Bench,
}

/// A job file: `{"command": ..., "params": {...}, "out": ..., "seed": ...}`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: JobCommand,
    #[serde(default = "empty_params")]
    pub params: serde_json::Value,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

fn empty_params() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}
