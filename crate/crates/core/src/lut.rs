//! Minimum-weight lookup-table decoding and the exact single-round fidelity map.
//!
//! All `4^n` unsigned Pauli errors are visited in canonical order (weight,
//! then symplectic key); the first error seen for each syndrome becomes that
//! syndrome's correction. Under depolarizing noise the probability of an
//! error depends only on its weight, so the fraction of errors the decoder
//! fixes collapses to the integer weight histogram `A_w`, and
//!
//! ```text
//! F_out = Σ_w A_w · F^(n-w) · ((1-F)/3)^w
//! ```
//!
//! is exact. For `k > 1` a block counts as correct only if all `k` logical
//! pairs are error-free.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{builtin_code, validate_code, CodeId, StabilizerCode};
use crate::error::{Error, Result};
use crate::export::Table;
use crate::pauli::PauliString;
use crate::scalar::{linspace, Real};

/// Largest code the exhaustive table builder accepts (`4^10` errors).
pub const MAX_LUT_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Syndrome {
    bits: u64,
    len: usize,
}

impl Syndrome {
    pub fn of(code: &StabilizerCode, error: &PauliString) -> Result<Self> {
        if error.num_qubits() != code.n {
            return Err(Error::DimensionMismatch {
                left: error.num_qubits(),
                right: code.n,
            });
        }
        Ok(Syndrome {
            bits: code.syndrome_bits(error),
            len: code.num_stabilizers(),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `i` is set iff the error anticommutes with stabilizer `i`
    /// (measurement outcome −1).
    pub fn get(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.bits == 0
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Corrected,
    /// The residual `error · correction` is a nontrivial logical. Entry `i` is
    /// true when the residual anticommutes with logical X̄_i (resp. Z̄_i).
    LogicalFailure {
        anticommutes_x: Vec<bool>,
        anticommutes_z: Vec<bool>,
    },
}

impl Outcome {
    pub fn is_corrected(&self) -> bool {
        matches!(self, Outcome::Corrected)
    }
}

#[derive(Debug, Clone)]
pub struct LookupTable {
    code: StabilizerCode,
    entries: Vec<PauliString>,
}

impl LookupTable {
    /// Builds the complete syndrome table. The code must pass validation.
    pub fn build(code: &StabilizerCode) -> Result<Self> {
        let report = validate_code(code, false);
        if !report.passed() {
            let reasons: Vec<String> = report.failures().map(|c| format!("{}: {}", c.name, c.detail)).collect();
            return Err(Error::InvalidCode {
                name: code.name.clone(),
                reason: reasons.join("; "),
            });
        }
        if code.n > MAX_LUT_QUBITS {
            return Err(Error::InvalidCode {
                name: code.name.clone(),
                reason: format!("{} qubits exceeds the exhaustive limit of {MAX_LUT_QUBITS}", code.n),
            });
        }
        let size = 1usize << code.num_stabilizers();
        let mut entries: Vec<Option<PauliString>> = vec![None; size];
        let mut filled = 0;
        for e in PauliString::enumerate_canonical(code.n)? {
            let slot = &mut entries[code.syndrome_bits(&e) as usize];
            if slot.is_none() {
                *slot = Some(e);
                filled += 1;
                if filled == size {
                    break;
                }
            }
        }
        let entries = entries
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .expect("full-rank stabilizers reach every syndrome");
        Ok(LookupTable {
            code: code.clone(),
            entries,
        })
    }

    pub fn code(&self) -> &StabilizerCode {
        &self.code
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn correction(&self, syndrome: &Syndrome) -> &PauliString {
        &self.entries[syndrome.index()]
    }

    /// `(syndrome index, stored correction)` pairs in syndrome order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &PauliString)> {
        self.entries.iter().enumerate()
    }

    pub fn max_weight(&self) -> usize {
        self.entries.iter().map(PauliString::weight).max().unwrap_or(0)
    }

    #[inline]
    fn corrects_raw(&self, error: &PauliString) -> bool {
        let c = &self.entries[self.code.syndrome_bits(error) as usize];
        let residual = PauliString::from_raw(self.code.n, error.x_bits() ^ c.x_bits(), error.z_bits() ^ c.z_bits());
        !self.code.logicals().any(|l| residual.anticommutes_raw(l))
    }

    pub fn classify(&self, error: &PauliString) -> Result<Outcome> {
        let s = Syndrome::of(&self.code, error)?;
        let residual = error.multiply(self.correction(&s))?;
        let anticommutes_x: Vec<bool> = self
            .code
            .logical_x
            .iter()
            .map(|l| residual.anticommutes_raw(l))
            .collect();
        let anticommutes_z: Vec<bool> = self
            .code
            .logical_z
            .iter()
            .map(|l| residual.anticommutes_raw(l))
            .collect();
        if anticommutes_x.iter().chain(&anticommutes_z).any(|&b| b) {
            Ok(Outcome::LogicalFailure {
                anticommutes_x,
                anticommutes_z,
            })
        } else {
            Ok(Outcome::Corrected)
        }
    }

    /// Counts decoder-corrected errors by weight over all `4^n` errors.
    pub fn fidelity_polynomial(&self) -> LogicalFidelityPolynomial {
        let n = self.code.n;
        let side = 1u64 << n;
        let counts = (0..side)
            .into_par_iter()
            .map(|x| {
                let mut local = vec![0u64; n + 1];
                for z in 0..side {
                    let e = PauliString::from_raw(n, x, z);
                    if self.corrects_raw(&e) {
                        local[e.weight()] += 1;
                    }
                }
                local
            })
            .reduce(
                || vec![0u64; n + 1],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        LogicalFidelityPolynomial {
            n,
            k: self.code.k,
            counts,
        }
    }
}

/// Weight histogram of errors the decoder leaves logically clean.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogicalFidelityPolynomial {
    pub n: usize,
    pub k: usize,
    pub counts: Vec<u64>,
}

fn check_fidelity<T: Real>(f: T) -> Result<()> {
    if f >= T::zero() && f <= T::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "fidelity",
            value: f.as_f64(),
            range: "[0, 1]",
        })
    }
}

/// Probability of one specific weight-`w` error on `n` qubits under
/// independent depolarizing noise of fidelity `f`.
#[inline]
pub fn error_probability<T: Real>(n: usize, w: usize, f: T) -> T {
    let p = (T::one() - f) / T::lit(3.0);
    f.powi((n - w) as i32) * p.powi(w as i32)
}

impl LogicalFidelityPolynomial {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Evaluates the block fidelity after one round at input fidelity `f`.
    pub fn eval<T: Real>(&self, f: T) -> Result<T> {
        check_fidelity(f)?;
        Ok(self.eval_unchecked(f))
    }

    pub(crate) fn eval_unchecked<T: Real>(&self, f: T) -> T {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .fold(T::zero(), |acc, (w, &a)| {
                acc + T::from_count(a) * error_probability(self.n, w, f)
            })
    }

    /// Fixed point of the map below 1: the pseudo-threshold. Bisection of
    /// `eval(F) - F` on `[0.8, 0.999]`; `None` without a sign change there.
    pub fn pseudo_threshold<T: Real>(&self) -> Option<T> {
        let g = |f: T| self.eval_unchecked(f) - f;
        let (mut lo, mut hi) = (T::lit(0.8), T::lit(0.999));
        if g(lo) >= T::zero() || g(hi) <= T::zero() {
            return None;
        }
        for _ in 0..200 {
            let mid = (lo + hi) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) > T::zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some((lo + hi) / T::lit(2.0))
    }

    /// CSV rows `(w, A_w)`.
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["w", "A_w"]);
        for (w, &a) in self.counts.iter().enumerate() {
            t.push(vec![w.into(), a.into()]);
        }
        t
    }

    /// CSV rows `(F_in, F_out)` on `points` uniform samples of `[lo, hi]`.
    pub fn map_table(&self, lo: f64, hi: f64, points: usize) -> Result<Table> {
        check_fidelity(lo)?;
        check_fidelity(hi)?;
        let mut t = Table::new(["F_in", "F_out"]);
        for f in linspace(lo, hi, points) {
            t.push(vec![f.into(), self.eval_unchecked(f).into()]);
        }
        Ok(t)
    }
}

/// A validated code together with its table and fidelity polynomial.
#[derive(Debug, Clone)]
pub struct Decoder {
    pub table: LookupTable,
    pub polynomial: LogicalFidelityPolynomial,
}

impl Decoder {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        let table = LookupTable::build(code)?;
        let polynomial = table.fidelity_polynomial();
        Ok(Decoder { table, polynomial })
    }

    pub fn code(&self) -> &StabilizerCode {
        self.table.code()
    }
}

/// Lazily built, process-wide decoder for a builtin code.
pub fn builtin_decoder(id: CodeId) -> &'static Decoder {
    static CACHE: [OnceLock<Decoder>; 5] = [const { OnceLock::new() }; 5];
    let slot = CodeId::ALL.iter().position(|&c| c == id).expect("listed id");
    CACHE[slot].get_or_init(|| Decoder::new(&builtin_code(id)).expect("builtin codes are valid"))
}

pub fn builtin_polynomial(id: CodeId) -> &'static LogicalFidelityPolynomial {
    &builtin_decoder(id).polynomial
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::StabilizerCode;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn repetition_code_syndrome() {
        let code = StabilizerCode::new("rep3", 1, vec![p("ZZI"), p("IZZ")], vec![p("XXX")], vec![p("ZII")]).unwrap();
        let s = Syndrome::of(&code, &p("XII")).unwrap();
        assert_eq!(s.bits(), vec![true, false]);
        assert!(Syndrome::of(&code, &p("XI")).is_err());
    }

    #[test]
    fn five_qubit_table_is_perfect() {
        let d = builtin_decoder(CodeId::Five);
        assert_eq!(d.table.len(), 16);
        let mut weights: Vec<usize> = d.table.entries().map(|(_, e)| e.weight()).collect();
        weights.sort();
        assert_eq!(weights[0], 0);
        assert!(weights[1..].iter().all(|&w| w == 1));
        for q in 0..5 {
            for l in ["X", "Y", "Z"] {
                let mut s: Vec<char> = "IIIII".chars().collect();
                s[q] = l.chars().next().unwrap();
                let e: PauliString = s.iter().collect::<String>().parse().unwrap();
                assert!(d.table.classify(&e).unwrap().is_corrected());
            }
        }
    }

    #[test]
    fn table_sizes_and_leader_weights() {
        for (id, len, w) in [(CodeId::Nine1, 256, 5), (CodeId::Nine2, 128, 4), (CodeId::Nine3, 64, 3)] {
            let d = builtin_decoder(id);
            assert_eq!(d.table.len(), len);
            assert_eq!(d.table.max_weight(), w);
        }
        let d = builtin_decoder(CodeId::Nine1);
        assert!(d.table.entries().next().unwrap().1.is_identity());
    }

    #[test]
    fn identity_always_corrected() {
        for id in CodeId::ALL {
            let d = builtin_decoder(id);
            let id_err = PauliString::identity(d.code().n).unwrap();
            assert_eq!(d.table.classify(&id_err).unwrap(), Outcome::Corrected);
            assert_eq!(d.polynomial.counts[0], 1);
        }
    }

    #[test]
    fn invalid_code_rejected() {
        let bad = StabilizerCode::new("bad", 1, vec![p("XI"), p("ZI")], vec![], vec![]).unwrap();
        assert!(matches!(LookupTable::build(&bad), Err(Error::InvalidCode { .. })));
    }

    #[test]
    fn eval_endpoints_and_range() {
        let poly = builtin_polynomial(CodeId::Nine3);
        assert_eq!(poly.eval(1.0_f64).unwrap(), 1.0);
        assert!(poly.eval(1.5_f64).is_err());
        assert!(poly.eval(-0.1_f64).is_err());
        let t = poly.map_table(1.0, 1.0, 1).unwrap();
        assert_eq!(t.to_csv(), "F_in,F_out\n1.0,1.0\n");
    }

    #[test]
    fn f32_and_f64_agree() {
        let poly = builtin_polynomial(CodeId::Nine2);
        let a = poly.eval(0.95_f64).unwrap();
        let b = poly.eval(0.95_f32).unwrap();
        assert!((a - b as f64).abs() < 1e-5);
        let t32: f32 = poly.pseudo_threshold().unwrap();
        let t64: f64 = poly.pseudo_threshold().unwrap();
        assert!((t32 as f64 - t64).abs() < 1e-5);
    }

    #[test]
    fn coset_count_identity() {
        // One corrected coset (|S| elements) per syndrome.
        for id in CodeId::ALL {
            let d = builtin_decoder(id);
            let m = d.code().num_stabilizers() as u32;
            assert_eq!(d.polynomial.total(), 4u64.pow(m));
        }
    }
}
