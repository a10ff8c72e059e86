use num_rational::Rational64;
use serde::Serialize;

use super::Family;
use crate::error::{Error, Result};

/// Reference to a level by family and quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LevelRef {
    pub family: Family,
    pub j: u32,
    pub n: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub family: Family,
    /// Integer j for the Dirac–Kähler families, half-odd J for Dirac, 0 for J0.
    pub j_or_j: Rational64,
    pub n: u32,
    /// Exact ε² − m².
    pub p_sq: Rational64,
    /// ε² = p² + m² (the mass is a float, so this is not exact).
    pub eps_sq: f64,
    pub degenerate_partner: Option<LevelRef>,
}

impl SpectrumEntry {
    pub fn p_sq_f64(&self) -> f64 {
        *self.p_sq.numer() as f64 / *self.p_sq.denom() as f64
    }

    pub fn eps(&self, negative: bool) -> f64 {
        let e = self.eps_sq.sqrt();
        if negative {
            -e
        } else {
            e
        }
    }
}

/// Exact p² of an integer-j family level.
pub fn family_p_sq(family: Family, j: u32, n: u32) -> Result<i64> {
    let (j, n) = (j as i64, n as i64);
    match family {
        Family::F1 | Family::F2 | Family::F3 | Family::F4 if j < 1 => Err(
            Error::InvalidQuantumNumbers(format!("family {family} needs j >= 1")),
        ),
        Family::F1 => Ok((j + 2 + 2 * n).pow(2) - 1),
        Family::F2 => Ok((j + 1 + 2 * n).pow(2) - 1),
        Family::F3 if n == 0 => Err(Error::InvalidQuantumNumbers(
            "family F3 starts at n = 1 (n = 0 has no regular solution)".into(),
        )),
        Family::F3 => Ok((j + 2 * n).pow(2)),
        Family::F4 => Ok((j + 1 + 2 * n).pow(2)),
        Family::J0 => Ok((n + 2).pow(2) - 1),
        Family::Dirac => Err(Error::InvalidQuantumNumbers(
            "Dirac levels are labelled by half-odd J; use spectrum()".into(),
        )),
    }
}

fn partner(family: Family, j: u32, n: u32) -> Option<LevelRef> {
    let r = |family, j, n| Some(LevelRef { family, j, n });
    match family {
        Family::F1 => r(Family::F2, j + 1, n),
        Family::F2 if j >= 2 => r(Family::F1, j - 1, n),
        Family::F4 if n >= 1 => r(Family::F3, j + 1, n),
        Family::F3 if j >= 2 => r(Family::F4, j - 1, n),
        _ => None,
    }
}

pub fn spectrum(family: Family, j_or_j: Rational64, n: u32, m: f64) -> Result<SpectrumEntry> {
    if !(m.is_finite() && m >= 0.0) {
        return Err(Error::InvalidParameters(format!("mass must be finite and >= 0, got {m}")));
    }
    let (label, p_sq, partner) = match family {
        Family::Dirac => {
            let two_j = j_or_j * 2;
            if !two_j.is_integer() || two_j.to_integer() % 2 == 0 || two_j.to_integer() < 1 {
                return Err(Error::InvalidQuantumNumbers(format!(
                    "Dirac J must be a positive half-odd integer, got {j_or_j}"
                )));
            }
            let k = Rational64::from_integer(n as i64) + j_or_j + 1;
            (j_or_j, k * k, None)
        }
        Family::J0 => (
            Rational64::from_integer(0),
            Rational64::from_integer(family_p_sq(family, 0, n)?),
            None,
        ),
        _ => {
            if !j_or_j.is_integer() || j_or_j.to_integer() < 1 {
                return Err(Error::InvalidQuantumNumbers(format!(
                    "family {family} needs an integer j >= 1, got {j_or_j}"
                )));
            }
            let j = j_or_j.to_integer() as u32;
            (
                j_or_j,
                Rational64::from_integer(family_p_sq(family, j, n)?),
                partner(family, j, n),
            )
        }
    };
    let p = *p_sq.numer() as f64 / *p_sq.denom() as f64;
    Ok(SpectrumEntry {
        family,
        j_or_j: label,
        n,
        p_sq,
        eps_sq: p + m * m,
        degenerate_partner: partner,
    })
}

/// Convenience wrapper for integer-j families.
pub fn spectrum_j(family: Family, j: u32, n: u32, m: f64) -> Result<SpectrumEntry> {
    spectrum(family, Rational64::from_integer(j as i64), n, m)
}

/// All Dirac–Kähler levels at fixed j ≥ 1 with n ≤ n_max, sorted by p².
pub fn levels_at_j(j: u32, n_max: u32, m: f64) -> Result<Vec<SpectrumEntry>> {
    let mut out = Vec::new();
    for family in Family::DK {
        let lo = if family == Family::F3 { 1 } else { 0 };
        for n in lo..=n_max {
            out.push(spectrum_j(family, j, n, m)?);
        }
    }
    out.sort_by(|a, b| a.p_sq.cmp(&b.p_sq).then(a.family.cmp(&b.family)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyPair {
    pub first: LevelRef,
    pub second: LevelRef,
    pub p_sq: i64,
    /// The two states come from different constructors, so their
    /// wavefunctions differ even though the energies coincide.
    pub distinct_wavefunctions: bool,
}

/// Same-n pairs `(F1, j, n) ↔ (F2, j+1, n)` and `(F4, j, n) ↔ (F3, j+1, n)`
/// for `1 ≤ j < j_max`, checked in integer arithmetic.
pub fn degeneracy_map(j_max: u32, n_max: u32) -> Result<Vec<DegeneracyPair>> {
    if j_max < 2 {
        return Err(Error::InvalidQuantumNumbers("degeneracy_map needs j_max >= 2".into()));
    }
    let mut out = Vec::new();
    for (lo, hi) in [(Family::F1, Family::F2), (Family::F4, Family::F3)] {
        for j in 1..j_max {
            for n in 0..=n_max {
                if hi == Family::F3 && n == 0 {
                    continue;
                }
                let a = family_p_sq(lo, j, n)?;
                let b = family_p_sq(hi, j + 1, n)?;
                if a == b {
                    out.push(DegeneracyPair {
                        first: LevelRef { family: lo, j, n },
                        second: LevelRef { family: hi, j: j + 1, n },
                        p_sq: a,
                        distinct_wavefunctions: lo != hi,
                    });
                }
            }
        }
    }
    Ok(out)
}
