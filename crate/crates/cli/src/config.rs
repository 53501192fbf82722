//! Flat `key = value` experiment configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use spinchain::{ChainConfig, Engine, LabelStrategy};

use crate::error::CliError;

/// Output scale for frequencies and energies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// Divided by the coupling `J`.
    Coupling,
    Absolute,
}

impl FromStr for Units {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "J" => Ok(Units::Coupling),
            "absolute" => Ok(Units::Absolute),
            other => Err(CliError::Config(format!("unknown units '{other}' (expected J or absolute)"))),
        }
    }
}

impl fmt::Display for Units {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Units::Coupling => "J",
            Units::Absolute => "absolute",
        })
    }
}

/// Rabi-frequency grid: an explicit list or `start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl Grid {
    /// Grid points; a range includes `stop` when it lies on the lattice.
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range { start, stop, step } => {
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| start + i as f64 * step).collect()
            }
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        match self {
            Grid::List(v) if v.is_empty() => Err(CliError::Config("empty grid".into())),
            Grid::List(v) => match v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                Some(x) => Err(CliError::Config(format!("grid value {x} must be positive"))),
                None => Ok(()),
            },
            Grid::Range { start, stop, step } => {
                if !(*step > 0.0 && step.is_finite()) {
                    Err(CliError::Config(format!("grid step {step} must be positive")))
                } else if !(*start > 0.0 && stop >= start && stop.is_finite()) {
                    Err(CliError::Config(format!("bad grid range {start}:{stop}")))
                } else {
                    Ok(())
                }
            }
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("{key}: '{value}' is not a number")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value.split(',').map(|v| parse_f64(key, v.trim())).collect()
}

fn format_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let grid = match parts.as_slice() {
            [list] => Grid::List(parse_list("rabi_grid", list)?),
            [a, b, c] => Grid::Range {
                start: parse_f64("rabi_grid", a)?,
                stop: parse_f64("rabi_grid", b)?,
                step: parse_f64("rabi_grid", c)?,
            },
            _ => return Err(CliError::Config(format!("bad grid '{s}'"))),
        };
        grid.validate()?;
        Ok(grid)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::List(v) => f.write_str(&format_list(v)),
            Grid::Range { start, stop, step } => write!(f, "{start:?}:{stop:?}:{step:?}"),
        }
    }
}

/// Everything a subcommand needs; input frequencies are absolute.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub spins: usize,
    pub coupling: f64,
    pub omega0: f64,
    /// Field gradient: `ω_k = ω0 + k·δω`.
    pub delta_omega: f64,
    pub rabi: f64,
    pub rabi_grid: Grid,
    pub delta_omegas: Vec<f64>,
    pub engine: Engine,
    pub strategy: LabelStrategy,
    pub units: Units,
    pub out: PathBuf,
}

impl ExperimentConfig {
    /// Two spins, `J = 1`, `ω0 = 100`, `δω = 50`, `Ω = 0.1`.
    pub fn two_spin() -> Self {
        ExperimentConfig {
            spins: 2,
            coupling: 1.0,
            omega0: 100.0,
            delta_omega: 50.0,
            rabi: 0.1,
            rabi_grid: Grid::Range {
                start: 0.02,
                stop: 0.5,
                step: 0.002,
            },
            delta_omegas: vec![10.0, 50.0, 250.0],
            engine: Engine::Exact,
            strategy: LabelStrategy::MaxOverlap,
            units: Units::Coupling,
            out: PathBuf::from("out"),
        }
    }

    /// Four spins, `J = 30`, `ω0 = 100`, `δω = 30`, `Ω = 0.5`.
    pub fn four_spin() -> Self {
        ExperimentConfig {
            spins: 4,
            coupling: 30.0,
            delta_omega: 30.0,
            rabi: 0.5,
            strategy: LabelStrategy::Matched,
            ..Self::two_spin()
        }
    }

    pub fn chain(&self) -> Result<ChainConfig, CliError> {
        Ok(ChainConfig::linear(
            self.spins,
            self.coupling,
            self.omega0,
            self.delta_omega,
            self.rabi,
        )?)
    }

    /// Divisor applied to frequencies on output.
    pub fn scale(&self) -> Result<f64, CliError> {
        match self.units {
            Units::Absolute => Ok(1.0),
            Units::Coupling if self.coupling > 0.0 => Ok(self.coupling),
            Units::Coupling => Err(CliError::Config("units of J need J > 0".into())),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.rabi_grid.validate()?;
        if self.delta_omegas.is_empty() {
            return Err(CliError::Config("empty delta_omegas list".into()));
        }
        Ok(())
    }

    /// Applies `key = value`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "spins" => {
                self.spins = value
                    .parse()
                    .map_err(|_| CliError::Config(format!("spins: '{value}' is not a count")))?
            }
            "coupling" => self.coupling = parse_f64(key, value)?,
            "omega0" => self.omega0 = parse_f64(key, value)?,
            "delta_omega" => self.delta_omega = parse_f64(key, value)?,
            "rabi" => self.rabi = parse_f64(key, value)?,
            "rabi_grid" => self.rabi_grid = value.parse()?,
            "delta_omegas" => self.delta_omegas = parse_list(key, value)?,
            "engine" => self.engine = value.parse()?,
            "strategy" => self.strategy = value.parse()?,
            "units" => self.units = value.parse()?,
            "out" => self.out = PathBuf::from(value),
            other => return Err(CliError::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines over the current values; `#` starts a
    /// comment.
    pub fn merge_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spins = {}", self.spins)?;
        writeln!(f, "coupling = {:?}", self.coupling)?;
        writeln!(f, "omega0 = {:?}", self.omega0)?;
        writeln!(f, "delta_omega = {:?}", self.delta_omega)?;
        writeln!(f, "rabi = {:?}", self.rabi)?;
        writeln!(f, "rabi_grid = {}", self.rabi_grid)?;
        writeln!(f, "delta_omegas = {}", format_list(&self.delta_omegas))?;
        writeln!(f, "engine = {}", self.engine)?;
        writeln!(f, "strategy = {}", self.strategy)?;
        writeln!(f, "units = {}", self.units)?;
        writeln!(f, "out = {}", self.out.display())
    }
}
