//! Occupation vectors, fixed-photon-number sectors and distributions over them.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::io::fmt_f64;

/// Largest sector the enumerators will build.
pub const SECTOR_CAP: u128 = 100_000;

/// Photon counts `(n_1, ..., n_m)`, one per mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn max(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Unit vector with one photon in `mode`.
    pub fn single(modes: usize, mode: usize) -> Self {
        let mut v = vec![0; modes];
        v[mode] = 1;
        Self(v)
    }
}

impl From<Vec<u32>> for Occupation {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl std::ops::Index<usize> for Occupation {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

/// Comma-separated counts, e.g. `1,1,0`.
impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Occupation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| invalid("occupation", format!("`{t}` is not a nonnegative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self(counts))
    }
}

/// `C(n, k)` in 128-bit arithmetic, saturating.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(u128::from(n - i)) {
            Some(v) => v / u128::from(i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Number of states with `m` modes and `n` photons: `C(n + m - 1, n)`.
pub fn sector_size(m: usize, n: u32) -> u128 {
    binomial(n as u64 + m as u64 - 1, u64::from(n))
}

/// Lexicographically ordered basis of the `n`-photon sector over `m` modes,
/// optionally restricted to occupations `<= max_occupation`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    modes: usize,
    photons: u32,
    max_occupation: u32,
    states: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
}

impl SectorBasis {
    pub fn new(modes: usize, photons: u32) -> Result<Self> {
        Self::with_cap(modes, photons, photons)
    }

    /// Sector restricted to occupations `<= max_occupation` (hard-core species).
    pub fn with_cap(modes: usize, photons: u32, max_occupation: u32) -> Result<Self> {
        if modes == 0 {
            return Err(invalid("modes", "must be at least 1"));
        }
        let size = sector_size(modes, photons);
        if size > SECTOR_CAP {
            return Err(Error::SizeCap {
                what: "photon-number sector",
                size,
                cap: SECTOR_CAP,
            });
        }
        let cap = max_occupation.min(photons);
        let mut states = Vec::new();
        let mut current = vec![0u32; modes];
        enumerate(&mut current, 0, photons, cap, &mut states);
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(Self {
            modes,
            photons,
            max_occupation: cap,
            states,
            index,
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> u32 {
        self.photons
    }

    pub fn max_occupation(&self) -> u32 {
        self.max_occupation
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Occupation] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &Occupation {
        &self.states[i]
    }

    pub fn index_of(&self, occ: &Occupation) -> Option<usize> {
        self.index.get(occ).copied()
    }
}

// Fills modes left to right; ascending values at each position yield
// lexicographic order.
fn enumerate(current: &mut [u32], pos: usize, remaining: u32, cap: u32, out: &mut Vec<Occupation>) {
    let m = current.len();
    if pos == m - 1 {
        if remaining <= cap {
            current[pos] = remaining;
            out.push(Occupation(current.to_vec()));
        }
        return;
    }
    for v in 0..=remaining.min(cap) {
        current[pos] = v;
        enumerate(current, pos + 1, remaining - v, cap, out);
    }
    current[pos] = 0;
}

/// Output probabilities over a sector basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    basis: SectorBasis,
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(basis: SectorBasis, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} probabilities for a basis of {} states",
                probs.len(),
                basis.len()
            )));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(invalid("probs", "probabilities must be finite and nonnegative"));
        }
        Ok(Self { basis, probs })
    }

    pub fn point_mass(basis: SectorBasis, at: &Occupation) -> Result<Self> {
        let i = basis
            .index_of(at)
            .ok_or_else(|| invalid("occupation", format!("({at}) is not in the sector")))?;
        let mut probs = vec![0.0; basis.len()];
        probs[i] = 1.0;
        Ok(Self { basis, probs })
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Probability of `occ`; zero for states outside the basis.
    pub fn prob(&self, occ: &Occupation) -> f64 {
        self.basis.index_of(occ).map_or(0.0, |i| self.probs[i])
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, f64)> {
        self.basis.states().iter().zip(self.probs.iter().copied())
    }

    /// CSV with header `occupation,probability`; occupations are quoted
    /// comma-separated tuples.
    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::WriterBuilder::new()
            .quote_style(csv::QuoteStyle::Necessary)
            .from_writer(w);
        out.write_record(["occupation", "probability"])?;
        for (occ, p) in self.iter() {
            out.write_record([occ.to_string(), fmt_f64(p)])?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occ(v: &[u32]) -> Occupation {
        Occupation::new(v.to_vec())
    }

    #[test]
    fn sector_examples() {
        let b = SectorBasis::new(2, 2).unwrap();
        assert_eq!(b.states(), &[occ(&[0, 2]), occ(&[1, 1]), occ(&[2, 0])]);
        let b = SectorBasis::new(1, 5).unwrap();
        assert_eq!(b.states(), &[occ(&[5])]);
        let b = SectorBasis::new(3, 0).unwrap();
        assert_eq!(b.states(), &[occ(&[0, 0, 0])]);
        assert!(SectorBasis::new(0, 1).is_err());
        assert!(matches!(SectorBasis::new(20, 10), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn sizes_ordering_and_index() {
        for m in 1..6 {
            for n in 0..6 {
                let b = SectorBasis::new(m, n).unwrap();
                assert_eq!(b.len() as u128, sector_size(m, n));
                assert!(b.states().windows(2).all(|w| w[0] < w[1]));
                for (i, s) in b.states().iter().enumerate() {
                    assert_eq!(s.total(), n);
                    assert_eq!(b.index_of(s), Some(i));
                }
            }
        }
    }

    #[test]
    fn capped_sector() {
        let b = SectorBasis::with_cap(3, 2, 1).unwrap();
        assert_eq!(b.states(), &[occ(&[0, 1, 1]), occ(&[1, 0, 1]), occ(&[1, 1, 0])]);
        assert_eq!(b.index_of(&occ(&[2, 0, 0])), None);
        assert!(SectorBasis::with_cap(2, 3, 1).unwrap().is_empty());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn occupation_text() {
        let o: Occupation = "1, 0,2".parse().unwrap();
        assert_eq!(o, occ(&[1, 0, 2]));
        assert_eq!(o.to_string(), "1,0,2");
        assert_eq!("(2,0)".parse::<Occupation>().unwrap(), occ(&[2, 0]));
        assert!("1,-1".parse::<Occupation>().is_err());
        assert!("".parse::<Occupation>().is_err());
    }

    #[test]
    fn distribution_csv() {
        let b = SectorBasis::new(2, 1).unwrap();
        let d = OutcomeDistribution::new(b, vec![0.25, 0.75]).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "occupation,probability\n\"0,1\",2.5000000000000000e-1\n\"1,0\",7.5000000000000000e-1\n"
        );
        assert!(OutcomeDistribution::new(SectorBasis::new(2, 1).unwrap(), vec![1.0]).is_err());
        assert!(OutcomeDistribution::new(SectorBasis::new(2, 1).unwrap(), vec![-0.1, 1.1]).is_err());
    }
}
