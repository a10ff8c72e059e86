//! Command-line flags, plus an optional flat `key = value` file whose keys
//! are the long flag names. Flags given on the command line win.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "dksphere", version, about = "Dirac-Kahler radial solutions on the 3-sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form spectrum table.
    Spectrum(RunConfig),
    /// Sampled radial amplitudes of one level.
    Wavefunction(RunConfig),
    /// Residual, factorization, Wronskian and consistency checks.
    Verify(RunConfig),
    /// Levels from direct integration of the radial equations.
    Oracle(RunConfig),
    /// Level pairs shared by neighbouring j.
    Degeneracy(RunConfig),
}

impl Command {
    pub fn config_mut(&mut self) -> &mut RunConfig {
        match self {
            Command::Spectrum(c)
            | Command::Wavefunction(c)
            | Command::Verify(c)
            | Command::Oracle(c)
            | Command::Degeneracy(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunConfig {
    /// f1 | f2 | f3 | f4 | j0 | dirac | all-dk
    #[arg(long)]
    pub family: Option<String>,
    /// Integer angular momentum.
    #[arg(long = "j")]
    pub j: Option<u32>,
    /// Half-odd total angular momentum of the Dirac comparison, e.g. 3/2.
    #[arg(long = "J")]
    pub big_j: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long = "n-max")]
    pub n_max: Option<u32>,
    #[arg(long = "j-max")]
    pub j_max: Option<u32>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Energy of the requested level; must lie on the spectrum.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<i32>,
    #[arg(long = "eps-sign", allow_hyphen_values = true)]
    pub eps_sign: Option<i32>,
    /// Number of interior sample points.
    #[arg(long)]
    pub grid: Option<usize>,
    /// all | residuals | factorization | wronskian | consistency
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long = "eps-min", allow_hyphen_values = true)]
    pub eps_min: Option<f64>,
    #[arg(long = "eps-max", allow_hyphen_values = true)]
    pub eps_max: Option<f64>,
    #[arg(long = "eps-step")]
    pub eps_step: Option<f64>,
    #[arg(long = "r-offset")]
    pub r_offset: Option<f64>,
    #[arg(long = "match-point")]
    pub match_point: Option<f64>,
    #[arg(long = "ode-tol")]
    pub ode_tol: Option<f64>,
    #[arg(long = "det-tol")]
    pub det_tol: Option<f64>,
    /// Compare oracle levels with the closed-form spectrum.
    #[arg(long)]
    pub compare: bool,
    #[arg(long = "rel-tol")]
    pub rel_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn fill<T: FromStr>(slot: &mut Option<T>, map: &mut BTreeMap<String, String>, key: &str) -> Result<(), String> {
    if let Some(v) = map.remove(key) {
        if slot.is_none() {
            *slot = Some(v.parse().map_err(|_| format!("config key {key}: cannot parse '{v}'"))?);
        }
    }
    Ok(())
}

impl RunConfig {
    /// Fills unset fields from the config file entries; unknown keys are an error.
    pub fn merge_file(&mut self, mut map: BTreeMap<String, String>) -> Result<(), String> {
        fill(&mut self.family, &mut map, "family")?;
        fill(&mut self.j, &mut map, "j")?;
        fill(&mut self.big_j, &mut map, "J")?;
        fill(&mut self.n, &mut map, "n")?;
        fill(&mut self.n_max, &mut map, "n-max")?;
        fill(&mut self.j_max, &mut map, "j-max")?;
        fill(&mut self.mass, &mut map, "mass")?;
        fill(&mut self.eps, &mut map, "eps")?;
        fill(&mut self.lambda, &mut map, "lambda")?;
        fill(&mut self.delta, &mut map, "delta")?;
        fill(&mut self.eps_sign, &mut map, "eps-sign")?;
        fill(&mut self.grid, &mut map, "grid")?;
        fill(&mut self.suite, &mut map, "suite")?;
        fill(&mut self.eps_min, &mut map, "eps-min")?;
        fill(&mut self.eps_max, &mut map, "eps-max")?;
        fill(&mut self.eps_step, &mut map, "eps-step")?;
        fill(&mut self.r_offset, &mut map, "r-offset")?;
        fill(&mut self.match_point, &mut map, "match-point")?;
        fill(&mut self.ode_tol, &mut map, "ode-tol")?;
        fill(&mut self.det_tol, &mut map, "det-tol")?;
        fill(&mut self.rel_tol, &mut map, "rel-tol")?;
        fill(&mut self.format, &mut map, "format")?;
        fill(&mut self.out, &mut map, "out")?;
        if let Some(v) = map.remove("compare") {
            self.compare |= v.parse::<bool>().map_err(|_| format!("config key compare: cannot parse '{v}'"))?;
        }
        match map.keys().next() {
            Some(k) => Err(format!("unknown config key '{k}'")),
            None => Ok(()),
        }
    }
}
