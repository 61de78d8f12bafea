//! n-qubit Pauli operators in binary symplectic form.
//!
//! A [`PauliString`] stores one X bit and one Z bit per qubit plus a global
//! phase in `{+1, +i, -1, -i}`. Qubit `j` carries
//!
//! | (x, z) | letter |
//! |--------|--------|
//! | (0, 0) | I      |
//! | (1, 0) | X      |
//! | (0, 1) | Z      |
//! | (1, 1) | Y      |
//!
//! where each letter is the Hermitian single-qubit Pauli, so `Y` is stored as
//! the letter itself rather than as `iXZ`.
//!
//! Strings are written with qubit 0 leftmost, e.g. `"YIZIIIIXY"`, with an
//! optional sign prefix (`+`, `-`, `i`, `+i`, `-i`).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;

/// Global phase, stored as the exponent of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Phase {
    #[default]
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    #[inline]
    pub fn exponent(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    #[inline]
    pub fn from_exponent(e: u8) -> Self {
        match e & 3 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    #[inline]
    pub fn conj(self) -> Phase {
        Phase::from_exponent(4 - self.exponent())
    }

    fn prefix(self) -> &'static str {
        match self {
            Phase::PlusOne => "",
            Phase::PlusI => "+i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, other: Phase) -> Phase {
        Phase::from_exponent(self.exponent() + other.exponent())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Pauli operator on `n <= 64` qubits. Bit `j` of `x`/`z` belongs to qubit `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

#[inline]
fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::QubitCount(n))
    } else {
        Ok(())
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(PauliString {
            n,
            x: 0,
            z: 0,
            phase: Phase::PlusOne,
        })
    }

    /// Builds from raw symplectic bits; bits above `n` are rejected.
    pub fn from_bits(n: usize, x: u64, z: u64, phase: Phase) -> Result<Self> {
        check_n(n)?;
        let m = mask(n);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::PauliParse {
                input: format!("x={x:#b} z={z:#b}"),
                reason: format!("bits set beyond qubit {}", n - 1),
            });
        }
        Ok(PauliString { n, x, z, phase })
    }

    /// Unchecked constructor for hot loops where `n` and the bits are known valid.
    #[inline]
    pub(crate) fn from_raw(n: usize, x: u64, z: u64) -> Self {
        debug_assert!((1..=MAX_QUBITS).contains(&n));
        PauliString {
            n,
            x,
            z,
            phase: Phase::PlusOne,
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Self> {
        check_n(letters.len())?;
        let (mut x, mut z) = (0u64, 0u64);
        for (j, l) in letters.iter().enumerate() {
            let (xb, zb) = l.bits();
            x |= (xb as u64) << j;
            z |= (zb as u64) << j;
        }
        Ok(PauliString::from_raw(letters.len(), x, z))
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn x_bits(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn z_bits(&self) -> u64 {
        self.z
    }

    #[inline]
    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// Same operator with the phase reset to `+1`.
    #[inline]
    pub fn unsigned(self) -> Self {
        self.with_phase(Phase::PlusOne)
    }

    #[inline]
    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits((self.x >> qubit) & 1 == 1, (self.z >> qubit) & 1 == 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n).map(move |j| self.letter(j))
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of qubits acted on non-trivially.
    #[inline]
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    fn check_same_n(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    /// Symplectic inner product `x·z' + z·x' (mod 2)`, without the length check.
    #[inline]
    pub(crate) fn anticommutes_raw(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() & 1 == 1
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        self.check_same_n(other)?;
        Ok(!self.anticommutes_raw(other))
    }

    /// Group product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_same_n(other)?;
        // Per qubit, a·b for distinct non-identity letters is ±i times the third
        // letter: +i for the cyclic order X→Y→Z→X, −i otherwise.
        let both = (self.x | self.z) & (other.x | other.z);
        let differ = (self.x ^ other.x) | (self.z ^ other.z);
        let mut e = self.phase.exponent() + other.phase.exponent();
        let mut active = both & differ;
        while active != 0 {
            let j = active.trailing_zeros() as usize;
            active &= active - 1;
            let a = cyclic_index(self.letter(j));
            let b = cyclic_index(other.letter(j));
            e += if (a + 1) % 3 == b { 1 } else { 3 };
        }
        Ok(PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: Phase::from_exponent(e),
        })
    }

    /// Group inverse. Every letter is self-inverse, so only the phase is conjugated.
    pub fn inverse(&self) -> PauliString {
        self.with_phase(self.phase.conj())
    }

    /// Bits of the canonical ordering key: `(x_bits, z_bits)` concatenated with
    /// qubit 0 as the most significant bit.
    pub fn canonical_key(&self) -> u128 {
        let rev = |v: u64| (v.reverse_bits() >> (64 - self.n)) as u128;
        (rev(self.x) << self.n) | rev(self.z)
    }

    /// All `4^n` unsigned Paulis in canonical order (weight, then key).
    pub fn enumerate_canonical(n: usize) -> Result<Vec<PauliString>> {
        check_n(n)?;
        if n > 16 {
            return Err(Error::QubitCount(n));
        }
        let side = 1u64 << n;
        let mut all: Vec<PauliString> = (0..side)
            .flat_map(|x| (0..side).map(move |z| PauliString::from_raw(n, x, z)))
            .collect();
        all.sort_unstable_by_key(|p| (p.weight(), p.canonical_key()));
        Ok(all)
    }
}

#[inline]
fn cyclic_index(l: Letter) -> u8 {
    match l {
        Letter::X => 0,
        Letter::Y => 1,
        Letter::Z => 2,
        Letter::I => unreachable!("identity has no cyclic index"),
    }
}

impl Ord for PauliString {
    /// Canonical total order: weight ascending, then the symplectic key, then
    /// qubit count and phase so that the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.n.cmp(&other.n))
            .then_with(|| self.canonical_key().cmp(&other.canonical_key()))
            .then_with(|| self.phase.cmp(&other.phase))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.phase.prefix())?;
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::PauliParse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let t = s.trim();
        let (phase, body) = if let Some(rest) = t.strip_prefix("+i") {
            (Phase::PlusI, rest)
        } else if let Some(rest) = t.strip_prefix("-i") {
            (Phase::MinusI, rest)
        } else if let Some(rest) = t.strip_prefix('i') {
            (Phase::PlusI, rest)
        } else if let Some(rest) = t.strip_prefix('+') {
            (Phase::PlusOne, rest)
        } else if let Some(rest) = t.strip_prefix('-') {
            (Phase::MinusOne, rest)
        } else {
            (Phase::PlusOne, t)
        };
        if body.is_empty() {
            return Err(err("no qubits"));
        }
        let letters = body
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(err(&format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.len() > MAX_QUBITS {
            return Err(Error::QubitCount(letters.len()));
        }
        Ok(PauliString::from_letters(&letters)?.with_phase(phase))
    }
}
