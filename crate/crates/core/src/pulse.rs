//! Rectangular RF pulses, schedules on a global clock, and their text form.
//!
//! One pulse per line:
//!
//! ```text
//! pulse ν=<f> phi=<f> omega=<f> tau=<f> [target=<label>-<label>]
//! ```
//!
//! `nu=` is accepted in place of `ν=`, `#` starts a comment, and floats are
//! written as the shortest decimal that round-trips.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Label, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub frequency: f64,
    pub phase: f64,
    pub rabi: f64,
    pub duration: f64,
    pub start_time: f64,
    /// Transition the pulse is tuned to; required by the rwa engine.
    pub target: Option<(Label, Label)>,
}

impl Pulse {
    pub fn new(frequency: f64, phase: f64, rabi: f64, duration: f64) -> Result<Self> {
        let p = Pulse {
            frequency,
            phase,
            rabi,
            duration,
            start_time: 0.0,
            target: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_target(mut self, from: Label, to: Label) -> Self {
        self.target = Some((from, to));
        self
    }

    pub fn with_start(mut self, start_time: f64) -> Self {
        self.start_time = start_time;
        self
    }

    pub fn end_time(&self) -> f64 {
        self.start_time + self.duration
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.frequency, self.phase, self.rabi, self.duration, self.start_time]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidPulse(format!("non-finite parameter in {self}")));
        }
        if self.frequency <= 0.0 {
            return Err(Error::InvalidPulse(format!(
                "frequency must be positive, got {}",
                self.frequency
            )));
        }
        if self.rabi < 0.0 {
            return Err(Error::InvalidPulse(format!("negative amplitude {}", self.rabi)));
        }
        if self.duration < 0.0 {
            return Err(Error::InvalidPulse(format!("negative duration {}", self.duration)));
        }
        Ok(())
    }
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pulse ν={:?} phi={:?} omega={:?} tau={:?}",
            self.frequency, self.phase, self.rabi, self.duration
        )?;
        if let Some((a, b)) = self.target {
            write!(f, " target={a}-{b}")?;
        }
        Ok(())
    }
}

fn parse_float(key: &str, value: &str) -> std::result::Result<f64, String> {
    value
        .parse::<f64>()
        .map_err(|_| format!("bad value '{value}' for {key}"))
}

fn parse_pulse_line(line: &str) -> std::result::Result<Pulse, String> {
    let mut words = line.split_whitespace();
    if words.next() != Some("pulse") {
        return Err("expected 'pulse'".into());
    }
    let (mut nu, mut phi, mut omega, mut tau, mut target) = (None, None, None, None, None);
    for word in words {
        let (key, value) = word
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got '{word}'"))?;
        match key {
            "ν" | "nu" => nu = Some(parse_float(key, value)?),
            "phi" => phi = Some(parse_float(key, value)?),
            "omega" => omega = Some(parse_float(key, value)?),
            "tau" => tau = Some(parse_float(key, value)?),
            "target" => {
                let (a, b) = value
                    .split_once('-')
                    .ok_or_else(|| format!("bad target '{value}'"))?;
                let a = a.parse().map_err(|_| format!("bad label '{a}'"))?;
                let b = b.parse().map_err(|_| format!("bad label '{b}'"))?;
                target = Some((Label(a), Label(b)));
            }
            other => return Err(format!("unknown key '{other}'")),
        }
    }
    let missing = |k: &str| format!("missing {k}");
    let pulse = Pulse {
        frequency: nu.ok_or_else(|| missing("ν"))?,
        phase: phi.ok_or_else(|| missing("phi"))?,
        rabi: omega.ok_or_else(|| missing("omega"))?,
        duration: tau.ok_or_else(|| missing("tau"))?,
        start_time: 0.0,
        target,
    };
    pulse.validate().map_err(|e| e.to_string())?;
    Ok(pulse)
}

/// Ordered pulses sharing one clock that starts at `t = 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PulseSequence {
    pulses: Vec<Pulse>,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends `pulse` at its own start time, which must not precede the end
    /// of the previous pulse.
    pub fn push(&mut self, pulse: Pulse) -> Result<()> {
        pulse.validate()?;
        let end = self.end_time();
        if pulse.start_time < end {
            return Err(Error::InvalidPulse(format!(
                "pulse starts at {} before the previous pulse ends at {end}",
                pulse.start_time
            )));
        }
        self.pulses.push(pulse);
        Ok(())
    }

    /// Appends `pulse` immediately after the previous one.
    pub fn append(&mut self, pulse: Pulse) -> Result<()> {
        let start = self.end_time();
        self.push(pulse.with_start(start))
    }

    /// Appends every pulse of `other` contiguously.
    pub fn extend(&mut self, other: &PulseSequence) -> Result<()> {
        for p in &other.pulses {
            self.append(*p)?;
        }
        Ok(())
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn end_time(&self) -> f64 {
        self.pulses.last().map_or(0.0, Pulse::end_time)
    }

    /// Sum of pulse durations.
    pub fn total_duration(&self) -> f64 {
        self.pulses.iter().map(|p| p.duration).sum()
    }
}

impl fmt::Display for PulseSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pulses {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for PulseSequence {
    type Err = Error;

    /// Parses the line format; pulses are placed contiguously.
    fn from_str(text: &str) -> Result<Self> {
        let mut seq = PulseSequence::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let pulse = parse_pulse_line(line).map_err(|message| Error::Parse {
                line: i + 1,
                message,
            })?;
            seq.append(pulse)?;
        }
        Ok(seq)
    }
}
