//! Exact spectra and quasi-polynomial wavefunctions.

mod amplitude;
mod components;
mod spectrum;
mod wavefunction;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use amplitude::{Amplitude, HyperTerm, Variable};
pub use components::{assemble_components, AmplitudeMatrix};
pub use spectrum::{
    degeneracy_map, family_p_sq, levels_at_j, spectrum, spectrum_j, DegeneracyPair, LevelRef, SpectrumEntry,
};
pub use wavefunction::{
    check_grid, general_basis, open_grid, wavefunction_family, wavefunction_j0, BasisKind, Components,
    ModeFunction, RadialSolution, SolutionKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    F1,
    F2,
    F3,
    F4,
    J0,
    Dirac,
}

impl Family {
    /// The four j ≥ 1 Dirac–Kähler families.
    pub const DK: [Family; 4] = [Family::F1, Family::F2, Family::F3, Family::F4];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::F1 => "f1",
            Family::F2 => "f2",
            Family::F3 => "f3",
            Family::F4 => "f4",
            Family::J0 => "j0",
            Family::Dirac => "dirac",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(Family::F1),
            "f2" => Ok(Family::F2),
            "f3" => Ok(Family::F3),
            "f4" => Ok(Family::F4),
            "j0" => Ok(Family::J0),
            "dirac" => Ok(Family::Dirac),
            other => Err(format!("unknown family '{other}'")),
        }
    }
}
