//! Text serialization: CSV tables with `#` comment headers and JSON reports.
//!
//! Floats are written in Rust's shortest round-trip form, so re-reading a
//! file reproduces the exact binary values.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Rational64;
use serde::Serialize;

use crate::closed_form::{DegeneracyPair, LevelRef, RadialSolution, SolutionKind, SpectrumEntry};
use crate::error::{Error, Result};

/// Shortest decimal string that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// `a` for integers, `a/b` otherwise.
pub fn fmt_rational(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_level(l: &LevelRef) -> String {
    format!("{}:j={}:n={}", l.family, l.j, l.n)
}

fn kind_label(kind: SolutionKind) -> String {
    match kind {
        SolutionKind::Family(f) => f.to_string(),
        SolutionKind::Basis(b) => format!("basis_{b:?}").to_lowercase(),
    }
}

/// Spectrum table; `negative_eps` selects the ε < 0 branch.
pub fn spectrum_csv(entries: &[SpectrumEntry], mass: f64, negative_eps: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# mass={}", fmt_f64(mass));
    let _ = writeln!(out, "# eps_sign={}", if negative_eps { -1 } else { 1 });
    out.push_str("family,j,n,p_sq,p_sq_float,eps,degenerate_partner\n");
    for e in entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            e.family,
            fmt_rational(e.j_or_j),
            e.n,
            fmt_rational(e.p_sq),
            fmt_f64(e.p_sq_f64()),
            fmt_f64(e.eps(negative_eps)),
            e.degenerate_partner.as_ref().map(fmt_level).unwrap_or_default()
        );
    }
    out
}

pub fn degeneracy_csv(pairs: &[DegeneracyPair]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# pairs={}", pairs.len());
    out.push_str("first,second,p_sq,distinct_wavefunctions\n");
    for p in pairs {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_level(&p.first),
            fmt_level(&p.second),
            p.p_sq,
            p.distinct_wavefunctions
        );
    }
    out
}

/// Sampled wavefunction; j = 0 tables carry only `M` and `N`.
pub fn wavefunction_csv(sol: &RadialSolution) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# family={}", kind_label(sol.kind));
    let _ = writeln!(out, "# j={}", sol.j);
    if let Some(n) = sol.radial_n {
        let _ = writeln!(out, "# n={n}");
    }
    let _ = writeln!(out, "# p_sq={}", fmt_f64(sol.p_sq));
    let _ = writeln!(out, "# mass={}", fmt_f64(sol.params.m()));
    let _ = writeln!(out, "# eps={}", fmt_f64(sol.params.eps()));
    let _ = writeln!(out, "# lambda={}", sol.params.lambda_sign.value());
    let _ = writeln!(out, "# delta={}", sol.params.delta_sign.value());
    let has_kl = !sol.k.is_empty();
    out.push_str(if has_kl { "r,x,K,L,M,N\n" } else { "r,x,M,N\n" });
    for i in 0..sol.grid.len() {
        let mut row = vec![sol.grid[i], sol.x[i]];
        if has_kl {
            row.extend([sol.k[i], sol.l[i]]);
        }
        row.extend([sol.m[i], sol.n[i]]);
        let cells: Vec<String> = row.into_iter().map(fmt_f64).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// A parsed CSV table: `key=value` comment headers and named float columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Reads a numeric CSV written by [`wavefunction_csv`].
pub fn parse_numeric_csv(text: &str) -> Result<Table> {
    let mut table = Table::default();
    for (lineno, line) in text.lines().enumerate() {
        if let Some(c) = line.strip_prefix('#') {
            if let Some((k, v)) = c.trim().split_once('=') {
                table.meta.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if table.columns.is_empty() {
            table.columns = line.split(',').map(|s| s.trim().to_string()).collect();
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidParameters(format!("line {}: {e}", lineno + 1)))?;
        if row.len() != table.columns.len() {
            return Err(Error::InvalidParameters(format!(
                "line {}: expected {} fields, got {}",
                lineno + 1,
                table.columns.len(),
                row.len()
            )));
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Pretty JSON with keys in declaration order.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
