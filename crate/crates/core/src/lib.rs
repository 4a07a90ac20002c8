//! q-deformed boson algebras, transmon and Kerr spectra, matrix permanents
//! and exact Fock-state sampling for generalized bosons.

pub mod error;
pub mod focksim;
pub mod io;
pub mod permanent;
pub mod qalgebra;
pub mod sector;
pub mod spectra;

pub use error::{Error, Result};
pub use permanent::{ComplexMatrix, ModeUnitary};
pub use qalgebra::{CharacteristicF, QDeformation, Species};
pub use sector::{Occupation, OutcomeDistribution, SectorBasis};
