//! Long-run behaviour of untwirled BBPSSW and DEJMPS iterations.
//!
//! Components are written `(a, b, c, d)` for `(I, X, Y, Z)`. With `s` the
//! mass that survives into the identity channel (`a + d` for BBPSSW, `a + c`
//! for DEJMPS) and `t = 1 - s`:
//!
//! * BBPSSW: `u = s / t` squares every round, so `u_n = u_0^(2^n)`, and
//!   `q = (1 - r) / (1 + r)` with `r = d / a` also squares. Hence `a, d -> 1/2`.
//! * DEJMPS: `u` grows without bound and `a -> 1`.

use serde::Serialize;

use crate::codes::Check;
use crate::error::{Error, Result};
use crate::export::Table;
use crate::purification::Protocol1G;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceStep {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub s: f64,
    pub t: f64,
    pub u: f64,
    pub r: f64,
    pub q: f64,
}

impl ConvergenceStep {
    fn new(protocol: Protocol1G, n: usize, [a, b, c, d]: [f64; 4]) -> Self {
        let s = match protocol {
            Protocol1G::Bbpssw => a + d,
            Protocol1G::Dejmps => a + c,
        };
        let t = match protocol {
            Protocol1G::Bbpssw => b + c,
            Protocol1G::Dejmps => b + d,
        };
        let r = d / a;
        ConvergenceStep {
            n,
            a,
            b,
            c,
            d,
            s,
            t,
            u: s / t,
            r,
            q: (1.0 - r) / (1.0 + r),
        }
    }

    pub fn components(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn ln_u(&self) -> f64 {
        self.s.ln() - self.t.ln()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTrace {
    pub protocol: Protocol1G,
    pub steps: Vec<ConvergenceStep>,
}

/// Accepts starts with `a > 1/2`, `b, c, d > 0` summing to one, plus the
/// perfect state `(1, 0, 0, 0)`.
pub fn check_hypotheses(start: [f64; 4]) -> Result<()> {
    if start == [1.0, 0.0, 0.0, 0.0] {
        return Ok(());
    }
    let [a, b, c, d] = start;
    let mut problems = Vec::new();
    if !(a > 0.5) {
        problems.push(format!("a_0 = {a} must exceed 1/2"));
    }
    for (name, v) in [("b_0", b), ("c_0", c), ("d_0", d)] {
        if !(v > 0.0) {
            problems.push(format!("{name} = {v} must be positive"));
        }
    }
    let sum = a + b + c + d;
    if !((sum - 1.0).abs() <= 1e-12) {
        problems.push(format!("components sum to {sum}, not 1"));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Hypothesis(problems.join("; ")))
    }
}

fn next(protocol: Protocol1G, [a, b, c, d]: [f64; 4]) -> [f64; 4] {
    match protocol {
        Protocol1G::Bbpssw => {
            let norm = (a + d) * (a + d) + (b + c) * (b + c);
            [
                (a * a + d * d) / norm,
                (b * b + c * c) / norm,
                2.0 * b * c / norm,
                2.0 * a * d / norm,
            ]
        }
        Protocol1G::Dejmps => {
            let norm = (a + c) * (a + c) + (b + d) * (b + d);
            [
                (a * a + c * c) / norm,
                (b * b + d * d) / norm,
                2.0 * b * d / norm,
                2.0 * a * c / norm,
            ]
        }
    }
}

/// Iterates `n_max` rounds; the trace holds `n_max + 1` entries.
pub fn iterate(protocol: Protocol1G, start: [f64; 4], n_max: usize) -> Result<ConvergenceTrace> {
    check_hypotheses(start)?;
    let mut state = start;
    let mut steps = Vec::with_capacity(n_max + 1);
    steps.push(ConvergenceStep::new(protocol, 0, state));
    for n in 1..=n_max {
        state = next(protocol, state);
        steps.push(ConvergenceStep::new(protocol, n, state));
    }
    Ok(ConvergenceTrace { protocol, steps })
}

impl ConvergenceTrace {
    pub fn last(&self) -> &ConvergenceStep {
        self.steps.last().expect("trace holds the start")
    }

    /// First iteration with `|a_n - target| < tol`.
    pub fn first_within(&self, target: f64, tol: f64) -> Option<usize> {
        self.steps.iter().find(|s| (s.a - target).abs() < tol).map(|s| s.n)
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new(["n", "a", "b", "c", "d", "u", "r", "q"]);
        for s in &self.steps {
            t.push(vec![
                s.n.into(),
                s.a.into(),
                s.b.into(),
                s.c.into(),
                s.d.into(),
                s.u.into(),
                s.r.into(),
                s.q.into(),
            ]);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub protocol: Protocol1G,
    pub checks: Vec<Check>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Worst relative error of `u_n` against `u_0^(2^n)` over the usable part of
/// the trace. Directly while the prediction is finite, in log space after.
pub fn doubling_error(trace: &ConvergenceTrace) -> f64 {
    let ln_u0 = trace.steps[0].ln_u();
    let mut worst: f64 = 0.0;
    for s in &trace.steps {
        if !(s.t > f64::MIN_POSITIVE) || !ln_u0.is_finite() {
            break;
        }
        let predicted_ln = ln_u0 * 2f64.powi(s.n as i32);
        let predicted = predicted_ln.exp();
        let err = if predicted.is_finite() {
            ((s.u - predicted) / predicted).abs()
        } else {
            ((s.ln_u() - predicted_ln) / predicted_ln).abs()
        };
        worst = worst.max(err);
    }
    worst
}

/// Smallest `m <= 10` such that `u_{n+m} > u_n` for every `n` with both
/// entries in the finite part of the trace.
pub fn eventual_increase_lag(trace: &ConvergenceTrace) -> Option<usize> {
    let u: Vec<f64> = trace.steps.iter().map(|s| s.u).take_while(|u| u.is_finite()).collect();
    (1..=10).find(|&m| (0..u.len().saturating_sub(m)).all(|n| u[n + m] > u[n]))
}

pub fn check_identities(trace: &ConvergenceTrace) -> IdentityReport {
    let mut checks = Vec::new();
    let worst_norm = trace
        .steps
        .iter()
        .map(|s| (s.a + s.b + s.c + s.d - 1.0).abs())
        .fold(0.0, f64::max);
    checks.push(Check {
        name: "normalization",
        passed: worst_norm <= 1e-14,
        detail: format!("max |sum - 1| = {worst_norm:e}"),
    });
    let nonneg = trace.steps.iter().all(|s| s.components().iter().all(|&v| v >= 0.0));
    checks.push(Check {
        name: "non-negative",
        passed: nonneg,
        detail: String::new(),
    });
    match trace.protocol {
        Protocol1G::Bbpssw => {
            let err = doubling_error(trace);
            checks.push(Check {
                name: "u doubling",
                passed: err <= 1e-10,
                detail: format!("max relative error {err:e}"),
            });
            let worst_q = trace
                .steps
                .windows(2)
                .map(|w| (w[1].q - w[0].q * w[0].q).abs())
                .fold(0.0, f64::max);
            checks.push(Check {
                name: "q squaring",
                passed: worst_q <= 1e-12,
                detail: format!("max |q_(n+1) - q_n^2| = {worst_q:e}"),
            });
            let q_decreasing = trace.steps.windows(2).all(|w| w[1].q <= w[0].q);
            checks.push(Check {
                name: "q decreasing",
                passed: q_decreasing,
                detail: String::new(),
            });
        }
        Protocol1G::Dejmps => {
            let lag = eventual_increase_lag(trace);
            checks.push(Check {
                name: "u eventually increasing",
                passed: lag.is_some(),
                detail: match lag {
                    Some(m) => format!("u_(n+{m}) > u_n throughout"),
                    None => "counterexample candidate: no lag m <= 10 works".into(),
                },
            });
            let last = trace.last();
            checks.push(Check {
                name: "b + c vanishes",
                passed: last.b + last.c < 1e-8,
                detail: format!("b + c = {:e} at n = {}", last.b + last.c, last.n),
            });
        }
    }
    IdentityReport {
        protocol: trace.protocol,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::purification::{run_rounds, PauliDistribution};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const THIRD: f64 = 0.4 / 3.0;

    fn random_start(rng: &mut ChaCha8Rng) -> [f64; 4] {
        let a = rng.gen_range(0.51..0.95);
        let w: [f64; 3] = [
            rng.gen_range(0.05..1.0),
            rng.gen_range(0.05..1.0),
            rng.gen_range(0.05..1.0),
        ];
        let s: f64 = w.iter().sum();
        let rest = 1.0 - a;
        [a, rest * w[0] / s, rest * w[1] / s, rest * w[2] / s]
    }

    #[test]
    fn limits_from_point_six() {
        let start = [0.6, THIRD, THIRD, THIRD];
        let b = iterate(Protocol1G::Bbpssw, start, 50).unwrap();
        assert!((b.last().a - 0.5).abs() < 1e-6 && (b.last().d - 0.5).abs() < 1e-6);
        let d = iterate(Protocol1G::Dejmps, start, 50).unwrap();
        assert!((d.last().a - 1.0).abs() < 1e-6 && d.last().d < 1e-6);
    }

    #[test]
    fn perfect_state_is_fixed() {
        for p in Protocol1G::ALL {
            let t = iterate(p, [1.0, 0.0, 0.0, 0.0], 5).unwrap();
            assert!(t.steps.iter().all(|s| s.components() == [1.0, 0.0, 0.0, 0.0]));
        }
    }

    #[test]
    fn hypotheses_enforced() {
        for bad in [[0.5, 0.2, 0.2, 0.1], [0.6, 0.0, 0.2, 0.2], [0.6, 0.1, 0.1, 0.1]] {
            assert!(matches!(iterate(Protocol1G::Bbpssw, bad, 3), Err(Error::Hypothesis(_))));
        }
    }

    #[test]
    fn bbpssw_identities() {
        let t = iterate(Protocol1G::Bbpssw, [0.6, THIRD, THIRD, THIRD], 8).unwrap();
        let u0 = t.steps[0].u;
        for s in &t.steps {
            let expected = u0.powi(1 << s.n);
            assert!(((s.u - expected) / expected).abs() < 1e-12);
        }
        let report = check_identities(&iterate(Protocol1G::Bbpssw, [0.6, THIRD, THIRD, THIRD], 60).unwrap());
        assert!(report.passed(), "{:?}", report.checks);
    }

    #[test]
    fn dejmps_third_case_still_diverges() {
        let t = iterate(Protocol1G::Dejmps, [0.7, 0.1, 0.1, 0.1], 60).unwrap();
        assert!(t.steps[1].u < t.steps[0].u * t.steps[0].u);
        let report = check_identities(&t);
        assert!(report.passed(), "{:?}", report.checks);
    }

    #[test]
    fn random_starts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let start = random_start(&mut rng);
            let b = iterate(Protocol1G::Bbpssw, start, 60).unwrap();
            assert!(b.first_within(0.5, 1e-6).is_some());
            assert!(b.steps.windows(2).take(30).all(|w| w[1].t < w[0].t || w[0].t == 0.0));
            assert!(b.steps[30].t < 1e-8);
            assert!(
                check_identities(&b).passed(),
                "{start:?} {:?}",
                check_identities(&b).checks
            );
            let d = iterate(Protocol1G::Dejmps, start, 60).unwrap();
            assert!(d.first_within(1.0, 1e-6).is_some());
            assert!(
                check_identities(&d).passed(),
                "{start:?} {:?}",
                check_identities(&d).checks
            );
        }
    }

    #[test]
    fn dejmps_first_step_keeps_majority() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let start = random_start(&mut rng);
            assert!(iterate(Protocol1G::Dejmps, start, 1).unwrap().steps[1].a > 0.5);
        }
    }

    #[test]
    fn agrees_with_purification_engine() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let start = random_start(&mut rng);
            let [a, b, c, d] = start;
            for p in Protocol1G::ALL {
                let conv = iterate(p, start, 20).unwrap();
                let pur = run_rounds(
                    p,
                    false,
                    PauliDistribution {
                        p_i: a,
                        p_x: b,
                        p_y: c,
                        p_z: d,
                    },
                    20,
                );
                for (s, r) in conv.steps[1..].iter().zip(&pur.rounds) {
                    for (x, y) in s.components().iter().zip(r.dist.components()) {
                        assert!((x - y).abs() <= 1e-15, "{p} n={} {x} {y}", s.n);
                    }
                }
            }
        }
    }

    #[test]
    fn table_columns() {
        let t = iterate(Protocol1G::Bbpssw, [0.6, THIRD, THIRD, THIRD], 3)
            .unwrap()
            .to_table();
        assert_eq!(t.columns, ["n", "a", "b", "c", "d", "u", "r", "q"]);
        assert_eq!(t.rows.len(), 4);
    }
}
