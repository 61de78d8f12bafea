//! Two-to-one recurrence purification (BBPSSW and DEJMPS) on Bell-diagonal
//! states, tracked as Pauli error distributions on one half of the pair.
//!
//! One round consumes two pairs, keeps one on a matching measurement and
//! renormalises. Discards compound over rounds as
//! `P_total <- P_total + (1 - P_total) * p_discard`, and after `i` rounds the
//! yield is `(1 - P_total) / 2^i`.

pub mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::Table;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Protocol1G {
    Bbpssw,
    Dejmps,
}

impl Protocol1G {
    pub const ALL: [Protocol1G; 2] = [Protocol1G::Bbpssw, Protocol1G::Dejmps];

    pub fn name(self) -> &'static str {
        match self {
            Protocol1G::Bbpssw => "bbpssw",
            Protocol1G::Dejmps => "dejmps",
        }
    }
}

impl fmt::Display for Protocol1G {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol1G {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bbpssw" => Ok(Protocol1G::Bbpssw),
            "dejmps" => Ok(Protocol1G::Dejmps),
            other => Err(Error::InvalidInput(format!(
                "unknown purification protocol {other:?} (expected bbpssw or dejmps)"
            ))),
        }
    }
}

/// Probabilities of I, X, Y, Z errors on the kept half of a Bell pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliDistribution<T> {
    pub p_i: T,
    pub p_x: T,
    pub p_y: T,
    pub p_z: T,
}

impl<T: Real> PauliDistribution<T> {
    /// Checked constructor: components non-negative and summing to one.
    pub fn new(p_i: T, p_x: T, p_y: T, p_z: T) -> Result<Self> {
        let d = PauliDistribution { p_i, p_x, p_y, p_z };
        if d.components().iter().any(|&p| !(p >= T::zero())) {
            return Err(Error::OutOfRange {
                what: "Pauli probability",
                value: d.components().iter().copied().fold(T::zero(), T::min).as_f64(),
                range: "[0, 1]",
            });
        }
        let tol = T::epsilon().sqrt();
        if (d.sum() - T::one()).abs() > tol {
            return Err(Error::OutOfRange {
                what: "Pauli probability sum",
                value: d.sum().as_f64(),
                range: "1",
            });
        }
        Ok(d)
    }

    /// Werner state of fidelity `f`: the error mass split evenly over X, Y, Z.
    pub fn depolarizing(f: T) -> Result<Self> {
        if !(f >= T::zero() && f <= T::one()) {
            return Err(Error::OutOfRange {
                what: "fidelity",
                value: f.as_f64(),
                range: "[0, 1]",
            });
        }
        let e = (T::one() - f) / T::lit(3.0);
        Ok(PauliDistribution {
            p_i: f,
            p_x: e,
            p_y: e,
            p_z: e,
        })
    }

    pub fn perfect() -> Self {
        PauliDistribution {
            p_i: T::one(),
            p_x: T::zero(),
            p_y: T::zero(),
            p_z: T::zero(),
        }
    }

    pub fn fidelity(&self) -> T {
        self.p_i
    }

    pub fn components(&self) -> [T; 4] {
        [self.p_i, self.p_x, self.p_y, self.p_z]
    }

    pub fn sum(&self) -> T {
        self.p_i + self.p_x + self.p_y + self.p_z
    }

    pub(crate) fn scaled(&self, s: T) -> Self {
        PauliDistribution {
            p_i: self.p_i * s,
            p_x: self.p_x * s,
            p_y: self.p_y * s,
            p_z: self.p_z * s,
        }
    }
}

impl FromStr for PauliDistribution<f64> {
    type Err = Error;

    /// Parses `p_i,p_x,p_y,p_z`.
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("not a probability: {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        match parts[..] {
            [a, b, c, d] => PauliDistribution::new(a, b, c, d),
            _ => Err(Error::InvalidInput(format!(
                "expected four comma-separated probabilities p_i,p_x,p_y,p_z, got {}",
                parts.len()
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepOutcome<T> {
    /// Joint probabilities of keeping the pair with each error.
    pub kept: PauliDistribution<T>,
    pub p_discard: T,
    pub normalized: PauliDistribution<T>,
}

impl<T: Real> StepOutcome<T> {
    fn from_kept(kept: PauliDistribution<T>) -> Self {
        let keep = kept.sum();
        StepOutcome {
            kept,
            p_discard: T::one() - keep,
            normalized: kept.scaled(T::one() / keep),
        }
    }
}

/// One purification round.
pub fn purify_step<T: Real>(protocol: Protocol1G, d: &PauliDistribution<T>) -> StepOutcome<T> {
    let two = T::lit(2.0);
    // DEJMPS is BBPSSW with the Y and Z inputs exchanged.
    let (i, x, y, z) = match protocol {
        Protocol1G::Bbpssw => (d.p_i, d.p_x, d.p_y, d.p_z),
        Protocol1G::Dejmps => (d.p_i, d.p_x, d.p_z, d.p_y),
    };
    StepOutcome::from_kept(PauliDistribution {
        p_i: i * i + z * z,
        p_x: x * x + y * y,
        p_y: two * x * y,
        p_z: two * i * z,
    })
}

pub fn twirl<T: Real>(d: &PauliDistribution<T>) -> PauliDistribution<T> {
    let e = (T::one() - d.p_i) / T::lit(3.0);
    PauliDistribution {
        p_i: d.p_i,
        p_x: e,
        p_y: e,
        p_z: e,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundRecord<T> {
    pub round: usize,
    pub dist: PauliDistribution<T>,
    pub p_discard: T,
    pub p_total_discard: T,
    pub rate: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurificationTrace<T> {
    pub protocol: Protocol1G,
    pub twirl: bool,
    pub input: PauliDistribution<T>,
    pub rounds: Vec<RoundRecord<T>>,
}

impl<T: Real> PurificationTrace<T> {
    /// State after the last round (the input if no rounds were run).
    pub fn final_dist(&self) -> PauliDistribution<T> {
        self.rounds.last().map_or(self.input, |r| r.dist)
    }

    pub fn final_fidelity(&self) -> T {
        self.final_dist().p_i
    }

    pub fn total_discard(&self) -> T {
        self.rounds.last().map_or(T::zero(), |r| r.p_total_discard)
    }

    pub fn rate(&self) -> T {
        self.rounds.last().map_or(T::one(), |r| r.rate)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new([
            "round",
            "p_i",
            "p_x",
            "p_y",
            "p_z",
            "p_discard_round",
            "p_total_discard",
            "rate",
        ]);
        for r in &self.rounds {
            let [a, b, c, d] = r.dist.components();
            t.push(vec![
                r.round.into(),
                a.as_f64().into(),
                b.as_f64().into(),
                c.as_f64().into(),
                d.as_f64().into(),
                r.p_discard.as_f64().into(),
                r.p_total_discard.as_f64().into(),
                r.rate.as_f64().into(),
            ]);
        }
        t
    }
}

/// Runs `rounds` purification rounds from `input`, twirling after each round
/// when `twirl_each` is set.
pub fn run_rounds<T: Real>(
    protocol: Protocol1G,
    twirl_each: bool,
    input: PauliDistribution<T>,
    rounds: usize,
) -> PurificationTrace<T> {
    let mut dist = input;
    let mut total = T::zero();
    let mut records = Vec::with_capacity(rounds);
    let mut scale = T::one();
    for round in 1..=rounds {
        let step = purify_step(protocol, &dist);
        dist = if twirl_each {
            twirl(&step.normalized)
        } else {
            step.normalized
        };
        total = total + (T::one() - total) * step.p_discard;
        scale = scale / T::lit(2.0);
        records.push(RoundRecord {
            round,
            dist,
            p_discard: step.p_discard,
            p_total_discard: total,
            rate: scale * (T::one() - total),
        });
    }
    PurificationTrace {
        protocol,
        twirl: twirl_each,
        input,
        rounds: records,
    }
}

/// Shorthand for a depolarizing start of fidelity `f_in`.
pub fn run_from_fidelity<T: Real>(
    protocol: Protocol1G,
    twirl_each: bool,
    f_in: T,
    rounds: usize,
) -> Result<PurificationTrace<T>> {
    Ok(run_rounds(
        protocol,
        twirl_each,
        PauliDistribution::depolarizing(f_in)?,
        rounds,
    ))
}

/// Final fidelities over a grid of depolarizing inputs; one column per round.
pub fn grid_table(protocol: Protocol1G, twirl_each: bool, rounds: usize, grid: &[f64]) -> Result<Table> {
    use rayon::prelude::*;
    let mut columns = vec!["F_in".to_string()];
    for r in 1..=rounds {
        columns.push(format!("F_out_{r}"));
        columns.push(format!("p_total_discard_{r}"));
        columns.push(format!("rate_{r}"));
    }
    let traces = grid
        .par_iter()
        .map(|&f| run_from_fidelity(protocol, twirl_each, f, rounds))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(columns);
    for (f, trace) in grid.iter().zip(traces) {
        let mut row = vec![(*f).into()];
        for r in &trace.rounds {
            row.extend([r.dist.p_i.into(), r.p_total_discard.into(), r.rate.into()]);
        }
        t.push(row);
    }
    Ok(t)
}
