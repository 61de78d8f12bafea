//! Three-round distillation over a linear repeater chain.
//!
//! With `n_R` repeaters there are `n_R + 1` elementary links of equal input
//! fidelity. The schedule is:
//!
//! 1. distill every elementary link with the round-1 code, then swap adjacent
//!    pairs of links, leaving `(n_R + 1) / 2` segments (one swap each);
//! 2. distill every segment with the round-2 code, then swap all segments into
//!    one end-to-end link (`(n_R + 1) / 2 - 1` swaps);
//! 3. distill end-to-end with the round-3 code.
//!
//! Every link in a round has the same fidelity, so a segment built from `m + 1`
//! links by `m` swaps has Werner parameter `W^(m + 1)`. A round marked `skip`
//! performs no distillation but keeps its swaps. `n_R = 0` means a single link
//! and no swaps at all.
//!
//! Rates follow the round-by-round matching recursion: the `K_out` pairs of
//! one round are grouped into `lcm(K_out, n_next)` so that they fill whole
//! blocks of the next code.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::codes::CodeId;
use crate::error::{Error, Result};
use crate::export::Table;
use crate::lut::builtin_polynomial;
use crate::scalar::{linspace, Real};
use crate::werner::swap_uniform_unchecked;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RoundSpec {
    Code(CodeId),
    Skip,
}

impl fmt::Display for RoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoundSpec::Code(c) => write!(f, "{c}"),
            RoundSpec::Skip => f.write_str("skip"),
        }
    }
}

impl FromStr for RoundSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "skip" | "x" | "-" => Ok(RoundSpec::Skip),
            other => Ok(RoundSpec::Code(other.parse()?)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ChainPlan {
    n_repeaters: u32,
    rounds: [RoundSpec; 3],
}

impl ChainPlan {
    pub fn new(n_repeaters: u32, rounds: [RoundSpec; 3]) -> Result<Self> {
        if n_repeaters != 0 && n_repeaters.is_multiple_of(2) {
            return Err(Error::InvalidPlan(format!(
                "repeater count must be 0 or odd, got {n_repeaters}"
            )));
        }
        Ok(ChainPlan { n_repeaters, rounds })
    }

    pub fn with_codes(n_repeaters: u32, codes: [CodeId; 3]) -> Result<Self> {
        Self::new(n_repeaters, codes.map(RoundSpec::Code))
    }

    pub fn n_repeaters(&self) -> u32 {
        self.n_repeaters
    }

    pub fn rounds(&self) -> &[RoundSpec; 3] {
        &self.rounds
    }

    /// Swaps each surviving segment absorbs after round `r` (last entry is 0).
    pub fn swap_schedule(&self) -> [u32; 3] {
        if self.n_repeaters == 0 {
            [0, 0, 0]
        } else {
            [1, self.n_repeaters.div_ceil(2) - 1, 0]
        }
    }

    /// End-to-end fidelity for a common elementary-link fidelity `f_in`.
    pub fn run<T: Real>(&self, f_in: T) -> Result<T> {
        if !(f_in >= T::zero() && f_in <= T::one()) {
            return Err(Error::OutOfRange {
                what: "fidelity",
                value: f_in.as_f64(),
                range: "[0, 1]",
            });
        }
        Ok(self.run_unchecked(f_in))
    }

    pub(crate) fn run_unchecked<T: Real>(&self, f_in: T) -> T {
        self.rounds
            .iter()
            .zip(self.swap_schedule())
            .fold(f_in, |f, (round, swaps)| {
                let distilled = match round {
                    RoundSpec::Code(c) => builtin_polynomial(*c).eval_unchecked(f),
                    RoundSpec::Skip => f,
                };
                swap_uniform_unchecked(distilled, swaps)
            })
    }

    pub fn rate_accounting(&self) -> Result<RoundAccounting> {
        let mut codes = [CodeId::Nine1; 3];
        for (i, r) in self.rounds.iter().enumerate() {
            match r {
                RoundSpec::Code(c) => codes[i] = *c,
                RoundSpec::Skip => return Err(Error::SkippedRound(i + 1)),
            }
        }
        let mut rounds = Vec::with_capacity(3);
        let mut n_in = (self.n_repeaters as u64 + 1) * codes[0].n();
        let mut k_out = codes[0].k();
        for next in &codes[1..] {
            let matching = k_out.lcm(&next.n());
            rounds.push(RoundCounts {
                n_in,
                k_out,
                matching: Some(matching),
            });
            n_in *= matching / k_out;
            k_out = matching / next.n() * next.k();
        }
        rounds.push(RoundCounts {
            n_in,
            k_out,
            matching: None,
        });
        Ok(RoundAccounting { rounds })
    }

    /// CSV rows `(F_in, F_out)` over a uniform grid.
    pub fn map_table(&self, lo: f64, hi: f64, points: usize) -> Result<Table> {
        let mut t = Table::new(["F_in", "F_out"]);
        for f in linspace(lo, hi, points) {
            t.push(vec![f.into(), self.run(f)?.into()]);
        }
        Ok(t)
    }
}

impl fmt::Display for ChainPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.rounds;
        write!(f, "repeaters={}; rounds={a},{b},{c}", self.n_repeaters)
    }
}

impl FromStr for ChainPlan {
    type Err = Error;

    /// Parses `repeaters=3; rounds=913,923,933`.
    fn from_str(s: &str) -> Result<Self> {
        let mut repeaters = None;
        let mut rounds = None;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidPlan(format!("expected key=value, got {part:?}")))?;
            match key.trim() {
                "repeaters" => {
                    repeaters = Some(value.trim().parse::<u32>().map_err(|_| {
                        Error::InvalidPlan(format!("repeaters must be a non-negative integer, got {value:?}"))
                    })?)
                }
                "rounds" => rounds = Some(parse_rounds(value)?),
                other => return Err(Error::InvalidPlan(format!("unknown key {other:?}"))),
            }
        }
        let repeaters = repeaters.ok_or_else(|| Error::InvalidPlan("missing repeaters=".into()))?;
        let rounds = rounds.ok_or_else(|| Error::InvalidPlan("missing rounds=".into()))?;
        ChainPlan::new(repeaters, rounds)
    }
}

/// Parses a comma-separated list of exactly three round specs.
pub fn parse_rounds(list: &str) -> Result<[RoundSpec; 3]> {
    let specs = list.split(',').map(str::parse).collect::<Result<Vec<RoundSpec>>>()?;
    specs
        .try_into()
        .map_err(|v: Vec<RoundSpec>| Error::InvalidPlan(format!("need exactly 3 rounds, got {}", v.len())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RoundCounts {
    /// Bell pairs consumed up to and including this round.
    pub n_in: u64,
    /// Pairs produced by this round.
    pub k_out: u64,
    /// `lcm(k_out, n_next)`, absent after the last round.
    pub matching: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundAccounting {
    pub rounds: Vec<RoundCounts>,
}

impl RoundAccounting {
    pub fn n_in(&self) -> u64 {
        self.rounds.last().map_or(0, |r| r.n_in)
    }

    pub fn n_out(&self) -> u64 {
        self.rounds.last().map_or(0, |r| r.k_out)
    }

    /// Overall rate `n_out / n_in`, reduced.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.n_out(), self.n_in())
    }

    pub fn rate_f64(&self) -> f64 {
        self.n_out() as f64 / self.n_in() as f64
    }
}

/// The four fixed code sequences compared by the efficiency study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Protocol {
    P1,
    P2,
    P3,
    P4,
}

impl Protocol {
    pub const ALL: [Protocol; 4] = [Protocol::P1, Protocol::P2, Protocol::P3, Protocol::P4];

    pub fn codes(self) -> [CodeId; 3] {
        use CodeId::{Nine1, Nine2, Nine3};
        match self {
            Protocol::P1 => [Nine1, Nine1, Nine1],
            Protocol::P2 => [Nine1, Nine2, Nine2],
            Protocol::P3 => [Nine1, Nine2, Nine3],
            Protocol::P4 => [Nine2, Nine2, Nine2],
        }
    }

    pub fn plan(self, n_repeaters: u32) -> Result<ChainPlan> {
        ChainPlan::with_codes(n_repeaters, self.codes())
    }

    pub fn label(self) -> &'static str {
        match self {
            Protocol::P1 => "P1",
            Protocol::P2 => "P2",
            Protocol::P3 => "P3",
            Protocol::P4 => "P4",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidPlan(format!("unknown protocol {s:?} (expected P1..P4)")))
    }
}
