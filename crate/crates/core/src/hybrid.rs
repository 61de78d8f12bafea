//! Recurrence purification up to a code's pseudo-threshold followed by one
//! round of code-based distillation, compared against purification alone.
//!
//! The purified state is twirled to depolarizing noise before decoding. Yields multiply: `(1 - P_total) / 2^i`
//! from the purification rounds and `k / n` from the code.
//!
//! Strategies are ranked by a refined efficiency whose baseline is the hashing
//! yield of the input, or, for inputs with yield below
//! [`DEFAULT_BASELINE_YIELD`], the yield after the fewest DEJMPS rounds that
//! reach it. Negative values are clamped to zero.

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::CodeId;
use crate::error::{Error, Result};
use crate::export::Table;
use crate::lut::builtin_polynomial;
use crate::purification::{purify_step, twirl, PauliDistribution, Protocol1G};
use crate::scalar::linspace;
use crate::werner::hashing_yield;

pub const DEFAULT_MAX_ROUNDS: usize = 40;
pub const DEFAULT_BASELINE_YIELD: f64 = 0.12;
/// Checkpoint scan grid: `(lo, hi, points)`.
pub const SCAN_GRID: (f64, f64, usize) = (0.501, 1.0, 10_000);

/// Result of running untwirled DEJMPS until a condition first holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PurifiedState {
    pub rounds: usize,
    pub dist: PauliDistribution<f64>,
    pub p_total_discard: f64,
}

impl PurifiedState {
    pub fn fidelity(&self) -> f64 {
        self.dist.p_i
    }

    /// `(1 - P_total) / 2^rounds`.
    pub fn rate(&self) -> f64 {
        (1.0 - self.p_total_discard) / 2f64.powi(self.rounds as i32)
    }
}

fn check_fidelity(what: &'static str, f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what,
            value: f,
            range: "[0, 1]",
        })
    }
}

/// Runs DEJMPS without twirling from a depolarizing start until `done` holds
/// for the fidelity, for at most `max_rounds` rounds.
pub fn dejmps_until(f_in: f64, max_rounds: usize, done: impl Fn(f64) -> bool) -> Option<PurifiedState> {
    let mut state = PurifiedState {
        rounds: 0,
        dist: PauliDistribution::depolarizing(f_in).ok()?,
        p_total_discard: 0.0,
    };
    loop {
        if done(state.fidelity()) {
            return Some(state);
        }
        if state.rounds == max_rounds {
            return None;
        }
        let step = purify_step(Protocol1G::Dejmps, &state.dist);
        state.dist = step.normalized;
        state.p_total_discard += (1.0 - state.p_total_discard) * step.p_discard;
        state.rounds += 1;
    }
}

/// Fewest untwirled DEJMPS rounds after which the fidelity is at least
/// `target`. `target` must lie strictly between 1/2 and 1.
pub fn min_rounds_to_fidelity(f_in: f64, target: f64, max_rounds: usize) -> Result<usize> {
    check_fidelity("input fidelity", f_in)?;
    if !(target > 0.5 && target < 1.0) {
        return Err(Error::OutOfRange {
            what: "target fidelity",
            value: target,
            range: "(0.5, 1)",
        });
    }
    dejmps_until(f_in, max_rounds, |f| f >= target)
        .map(|s| s.rounds)
        .ok_or(Error::Unreachable {
            start: f_in,
            target,
            max_rounds,
        })
}

pub fn code_threshold(code: CodeId) -> Result<f64> {
    builtin_polynomial(code)
        .pseudo_threshold::<f64>()
        .ok_or_else(|| Error::InvalidCode {
            name: code.name().into(),
            reason: "no pseudo-threshold in [0.8, 0.999]".into(),
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HybridResult {
    pub f_in: f64,
    pub code: CodeId,
    pub threshold: f64,
    /// Purification rounds needed to reach the threshold.
    pub i_pre: usize,
    pub f_at_threshold: f64,
    pub p_total_discard: f64,
    pub f_out: f64,
    pub rate_purification: f64,
    pub rate_code: f64,
    pub rate: f64,
    /// Fewest pure DEJMPS rounds matching `f_out`; `None` when `f_out` is
    /// not a valid target (it reaches 1) or is out of reach.
    pub i_match: Option<usize>,
}

pub fn hybrid_run(f_in: f64, code: CodeId) -> Result<HybridResult> {
    hybrid_run_with(f_in, code, code_threshold(code)?, DEFAULT_MAX_ROUNDS)
}

/// As [`hybrid_run`] with a precomputed threshold.
pub fn hybrid_run_with(f_in: f64, code: CodeId, threshold: f64, max_rounds: usize) -> Result<HybridResult> {
    check_fidelity("input fidelity", f_in)?;
    let pre = dejmps_until(f_in, max_rounds, |f| f >= threshold).ok_or(Error::Unreachable {
        start: f_in,
        target: threshold,
        max_rounds,
    })?;
    let twirled = twirl(&pre.dist);
    let f_out = builtin_polynomial(code).eval_unchecked(twirled.p_i);
    let rate_purification = pre.rate();
    let rate_code = code.k() as f64 / code.n() as f64;
    Ok(HybridResult {
        f_in,
        code,
        threshold,
        i_pre: pre.rounds,
        f_at_threshold: pre.fidelity(),
        p_total_discard: pre.p_total_discard,
        f_out,
        rate_purification,
        rate_code,
        rate: rate_purification * rate_code,
        i_match: min_rounds_to_fidelity(f_in, f_out, max_rounds).ok(),
    })
}

/// Hashing yield used as the efficiency denominator for input `f_in`.
pub fn baseline_yield(f_in: f64, min_yield: f64) -> Result<f64> {
    let d = hashing_yield(f_in);
    if d >= min_yield {
        return Ok(d);
    }
    dejmps_until(f_in, DEFAULT_MAX_ROUNDS, |f| hashing_yield(f) >= min_yield)
        .map(|s| hashing_yield(s.fidelity()))
        .ok_or(Error::Unreachable {
            start: f_in,
            target: min_yield,
            max_rounds: DEFAULT_MAX_ROUNDS,
        })
}

/// `max(rate * D(f_out) / baseline, 0)`, where `rate` already includes the
/// survival factor `1 - P_total`.
pub fn refined_efficiency(f_in: f64, f_out: f64, rate: f64, min_yield: f64) -> Result<f64> {
    check_fidelity("input fidelity", f_in)?;
    check_fidelity("output fidelity", f_out)?;
    let base = baseline_yield(f_in, min_yield)?;
    Ok((rate * hashing_yield(f_out) / base).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Winner {
    Dejmps,
    Hybrid,
    Tie,
}

impl Winner {
    pub fn label(self) -> &'static str {
        match self {
            Winner::Dejmps => "dejmps",
            Winner::Hybrid => "hybrid",
            Winner::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub hybrid: HybridResult,
    /// Pure DEJMPS with `i_match` rounds (no rounds when the input already
    /// meets the hybrid output).
    pub dejmps: Option<PurifiedState>,
    pub e_dejmps: Option<f64>,
    pub e_hybrid: f64,
    pub winner: Winner,
}

impl ScanRow {
    pub fn f_in(&self) -> f64 {
        self.hybrid.f_in
    }
}

fn scan_point(f_in: f64, code: CodeId, threshold: f64, min_yield: f64) -> Result<ScanRow> {
    let hybrid = hybrid_run_with(f_in, code, threshold, DEFAULT_MAX_ROUNDS)?;
    let dejmps = match hybrid.i_match {
        Some(_) => dejmps_until(f_in, DEFAULT_MAX_ROUNDS, |f| f >= hybrid.f_out),
        None if f_in >= hybrid.f_out => dejmps_until(f_in, 0, |_| true),
        None => None,
    };
    let e_hybrid = refined_efficiency(f_in, hybrid.f_out, hybrid.rate, min_yield)?;
    let e_dejmps = dejmps
        .map(|s| refined_efficiency(f_in, s.fidelity(), s.rate(), min_yield))
        .transpose()?;
    let winner = match e_dejmps {
        Some(e) if e > e_hybrid => Winner::Dejmps,
        Some(e) if e == e_hybrid => Winner::Tie,
        _ => Winner::Hybrid,
    };
    Ok(ScanRow {
        hybrid,
        dejmps,
        e_dejmps,
        e_hybrid,
        winner,
    })
}

/// Hybrid and pure-purification strategies on every grid point, in parallel.
pub fn checkpoint_scan(code: CodeId, grid: &[f64], min_yield: f64) -> Result<Vec<ScanRow>> {
    let threshold = code_threshold(code)?;
    grid.par_iter()
        .map(|&f| scan_point(f, code, threshold, min_yield))
        .collect()
}

pub fn scan_grid() -> Vec<f64> {
    let (lo, hi, n) = SCAN_GRID;
    linspace(lo, hi, n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckpointKind {
    Threshold,
    Match,
}

/// Grid indices where `i_pre` or `i_match` drops relative to the previous row.
pub fn checkpoints(rows: &[ScanRow]) -> Vec<(usize, CheckpointKind)> {
    let mut out = Vec::new();
    for (i, w) in rows.windows(2).enumerate() {
        if w[1].hybrid.i_pre < w[0].hybrid.i_pre {
            out.push((i + 1, CheckpointKind::Threshold));
        }
        if let (Some(a), Some(b)) = (w[0].hybrid.i_match, w[1].hybrid.i_match) {
            if b < a {
                out.push((i + 1, CheckpointKind::Match));
            }
        }
    }
    out
}

pub fn scan_table(rows: &[ScanRow]) -> Table {
    let mut t = Table::new([
        "F_in",
        "i_pre",
        "i_match",
        "F_out_dejmps",
        "F_out_hybrid",
        "rate_dejmps",
        "rate_hybrid",
        "E_dejmps",
        "E_hybrid",
        "D_out_dejmps",
        "D_out_hybrid",
        "winner",
    ]);
    for r in rows {
        let h = &r.hybrid;
        t.push(vec![
            h.f_in.into(),
            h.i_pre.into(),
            h.i_match.into(),
            r.dejmps.map(|s| s.fidelity()).into(),
            h.f_out.into(),
            r.dejmps.map(|s| s.rate()).into(),
            h.rate.into(),
            r.e_dejmps.into(),
            r.e_hybrid.into(),
            r.dejmps.map(|s| hashing_yield(s.fidelity())).into(),
            hashing_yield(h.f_out).into(),
            r.winner.label().into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::purification::run_from_fidelity;

    #[test]
    fn rounds_to_fidelity_edges() {
        assert_eq!(min_rounds_to_fidelity(0.97, 0.9563, 40).unwrap(), 0);
        assert!(matches!(
            min_rounds_to_fidelity(0.5, 0.6, 40),
            Err(Error::Unreachable { .. })
        ));
        assert!(min_rounds_to_fidelity(0.9, 1.0, 40).is_err());
        assert!(min_rounds_to_fidelity(0.9, 0.5, 40).is_err());
        assert!(min_rounds_to_fidelity(1.2, 0.9, 40).is_err());
    }

    #[test]
    fn rounds_from_point_eight_five() {
        let i = min_rounds_to_fidelity(0.85, 0.9563, 40).unwrap();
        // Independent count straight from the trace.
        let t = run_from_fidelity(Protocol1G::Dejmps, false, 0.85, 10).unwrap();
        let expected = t.rounds.iter().position(|r| r.dist.p_i >= 0.9563).unwrap() + 1;
        assert_eq!(i, expected);
        assert!(t.rounds[i - 2].dist.p_i < 0.9563);
        assert_eq!(i, 2);
    }

    #[test]
    fn threshold_characterization() {
        for code in [CodeId::Nine1, CodeId::Nine2, CodeId::Nine3] {
            let th = code_threshold(code).unwrap();
            let p = builtin_polynomial(code);
            assert!(p.eval(th - 1e-6).unwrap() < th - 1e-6);
            for f in linspace(th + 1e-6, 0.999_999, 200) {
                assert!(p.eval(f).unwrap() > f, "{code} at {f}");
            }
        }
        let th = code_threshold(CodeId::Nine3).unwrap();
        assert!((th - 0.9563).abs() < 2e-3);
    }

    #[test]
    fn above_threshold_is_one_code_round() {
        let r = hybrid_run(0.97, CodeId::Nine3).unwrap();
        assert_eq!(r.i_pre, 0);
        assert_eq!(r.rate, 1.0 / 3.0);
        assert_eq!(r.f_out, builtin_polynomial(CodeId::Nine3).eval(0.97).unwrap());
    }

    #[test]
    fn below_threshold_purifies_first() {
        let r = hybrid_run(0.7, CodeId::Nine3).unwrap();
        assert!(r.i_pre >= 1 && r.f_at_threshold >= r.threshold);
        let before = run_from_fidelity(Protocol1G::Dejmps, false, 0.7, r.i_pre - 1).unwrap();
        assert!(before.final_fidelity() < r.threshold);
        assert_eq!(r.rate, r.rate_purification * r.rate_code);
        assert!(r.rate > 0.0 && r.rate <= 1.0);
        assert!(hybrid_run(0.5, CodeId::Nine3).is_err());
    }

    #[test]
    fn refined_efficiency_cases() {
        assert_eq!(refined_efficiency(0.95, 0.8, 0.5, 0.12).unwrap(), 0.0);
        let f = 0.95;
        assert!((refined_efficiency(f, f, 1.0, 0.12).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(baseline_yield(0.95, 0.12).unwrap(), hashing_yield(0.95));
        let low = baseline_yield(0.7, 0.12).unwrap();
        assert!(low >= 0.12);
    }

    #[test]
    fn coarse_scan_properties() {
        let grid = linspace(0.501, 1.0, 500);
        let rows = checkpoint_scan(CodeId::Nine3, &grid, DEFAULT_BASELINE_YIELD).unwrap();
        assert!(rows.windows(2).all(|w| w[1].hybrid.i_pre <= w[0].hybrid.i_pre));
        for r in &rows {
            assert!((0.0..=1.0).contains(&r.e_hybrid));
            if let Some(e) = r.e_dejmps {
                assert!((0.0..=1.0).contains(&e));
                let expected = if e > r.e_hybrid {
                    Winner::Dejmps
                } else if e < r.e_hybrid {
                    Winner::Hybrid
                } else {
                    Winner::Tie
                };
                assert_eq!(r.winner, expected);
            }
            if let Some(m) = r.hybrid.i_match {
                assert!(m > r.hybrid.i_pre);
            }
        }
        let cps = checkpoints(&rows);
        let count = |lo: f64, hi: f64| cps.iter().filter(|(i, _)| grid[*i] >= lo && grid[*i] < hi).count();
        assert!(count(0.51, 0.6) > count(0.9, 0.9563));
        assert_eq!(scan_table(&rows).rows.len(), 500);
    }
}
