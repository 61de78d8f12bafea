//! Werner-state algebra: fidelity/Werner-parameter conversion, hashing-bound
//! distillable entanglement and entanglement-swap composition.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fidelity at which the hashing yield crosses zero.
pub const HASHING_THRESHOLD: f64 = 0.81071;

/// A Werner state described by both coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerPoint<T> {
    pub fidelity: T,
    pub werner: T,
}

impl<T: Real> WernerPoint<T> {
    pub fn from_fidelity(f: T) -> Result<Self> {
        Ok(WernerPoint {
            fidelity: f,
            werner: fidelity_to_werner(f)?,
        })
    }

    pub fn from_werner(w: T) -> Result<Self> {
        Ok(WernerPoint {
            fidelity: werner_to_fidelity(w)?,
            werner: w,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    FidelityToWerner,
    WernerToFidelity,
}

pub fn convert<T: Real>(value: T, direction: Direction) -> Result<T> {
    match direction {
        Direction::FidelityToWerner => fidelity_to_werner(value),
        Direction::WernerToFidelity => werner_to_fidelity(value),
    }
}

/// `W = (4F - 1) / 3`.
pub fn fidelity_to_werner<T: Real>(f: T) -> Result<T> {
    if !(f >= T::zero() && f <= T::one()) {
        return Err(Error::OutOfRange {
            what: "fidelity",
            value: f.as_f64(),
            range: "[0, 1]",
        });
    }
    Ok(werner_of(f))
}

/// `F = (3W + 1) / 4`.
pub fn werner_to_fidelity<T: Real>(w: T) -> Result<T> {
    if !(w >= T::lit(-1.0 / 3.0) && w <= T::one()) {
        return Err(Error::OutOfRange {
            what: "Werner parameter",
            value: w.as_f64(),
            range: "[-1/3, 1]",
        });
    }
    Ok(fidelity_of(w))
}

#[inline]
pub(crate) fn werner_of<T: Real>(f: T) -> T {
    (T::lit(4.0) * f - T::one()) / T::lit(3.0)
}

#[inline]
pub(crate) fn fidelity_of<T: Real>(w: T) -> T {
    T::lit(0.25) + T::lit(0.75) * w
}

/// One-way hashing yield `1 + F log2 F + (1-F) log2((1-F)/3)`, unclamped.
/// Each `x log x` term is taken as 0 at `x = 0`.
pub fn distillable_entanglement<T: Real>(f: T) -> Result<T> {
    if !(f > T::zero() && f <= T::one()) {
        return Err(Error::OutOfRange {
            what: "fidelity",
            value: f.as_f64(),
            range: "(0, 1]",
        });
    }
    Ok(hashing_yield(f))
}

#[inline]
pub(crate) fn hashing_yield<T: Real>(f: T) -> T {
    let xlogx = |x: T| if x > T::zero() { x * x.log2() } else { T::zero() };
    let rest = T::one() - f;
    let tail = if rest > T::zero() {
        rest * (rest / T::lit(3.0)).log2()
    } else {
        T::zero()
    };
    T::one() + xlogx(f) + tail
}

/// End-to-end fidelity after swapping a chain of Werner links: the Werner
/// parameters multiply.
pub fn swap_fidelity<T: Real>(fidelities: &[T]) -> Result<T> {
    if fidelities.is_empty() {
        return Err(Error::InvalidInput("swap needs at least one link".into()));
    }
    let w = fidelities
        .iter()
        .map(|&f| fidelity_to_werner(f))
        .try_fold(T::one(), |acc, w| w.map(|w| acc * w))?;
    Ok(fidelity_of(w))
}

/// Uniform-link form: `n_swaps + 1` links of fidelity `f`.
pub fn swap_fidelity_uniform<T: Real>(f: T, n_swaps: u32) -> Result<T> {
    let w = fidelity_to_werner(f)?;
    Ok(fidelity_of(w.powi(n_swaps as i32 + 1)))
}

#[inline]
pub(crate) fn swap_uniform_unchecked<T: Real>(f: T, n_swaps: u32) -> T {
    fidelity_of(werner_of(f).powi(n_swaps as i32 + 1))
}
