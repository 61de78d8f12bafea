//! Rate-weighted efficiency of distillation plans, the optimal envelope over a
//! family of plans, and detection of the fidelities where the optimum changes.
//!
//! `E(F_in) = (n_out / n_in) * D(F_out) / D(F_in)` with `D` the hashing yield.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{ChainPlan, Protocol};
use crate::error::{Error, Result};
use crate::export::Table;
use crate::scalar::{linspace, Real};
use crate::werner::{hashing_yield, HASHING_THRESHOLD};

/// Grid used for switching-point work: `(lo, hi, points)`.
pub const DEFAULT_GRID: (f64, f64, usize) = (0.85, 1.0, 2000);

/// Efficiency from its ingredients. `f_in` must lie above the hashing threshold.
pub fn efficiency_from_parts<T: Real>(rate: T, f_in: T, f_out: T) -> Result<T> {
    if !(f_in > T::lit(HASHING_THRESHOLD) && f_in <= T::one()) {
        return Err(Error::BelowHashingThreshold(f_in.as_f64()));
    }
    if !(f_out >= T::zero() && f_out <= T::one()) {
        return Err(Error::OutOfRange {
            what: "output fidelity",
            value: f_out.as_f64(),
            range: "[0, 1]",
        });
    }
    Ok(rate * hashing_yield(f_out) / hashing_yield(f_in))
}

pub fn efficiency<T: Real>(plan: &ChainPlan, f_in: T) -> Result<T> {
    let rate = plan.rate_accounting()?.rate_f64();
    efficiency_from_parts(T::lit(rate), f_in, plan.run(f_in)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyCurve<T> {
    pub label: String,
    pub rate: Ratio<u64>,
    pub grid: Vec<T>,
    pub f_out: Vec<T>,
    pub efficiency: Vec<T>,
}

impl<T: Real> EfficiencyCurve<T> {
    /// Evaluates `plan` on every grid point (in parallel).
    pub fn compute(label: impl Into<String>, plan: &ChainPlan, grid: &[T]) -> Result<Self> {
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "efficiency grid must be strictly increasing".into(),
            ));
        }
        let acc = plan.rate_accounting()?;
        let rate = T::lit(acc.rate_f64());
        let pairs = grid
            .par_iter()
            .map(|&f| {
                let out = plan.run(f)?;
                Ok((out, efficiency_from_parts(rate, f, out)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let (f_out, efficiency) = pairs.into_iter().unzip();
        Ok(EfficiencyCurve {
            label: label.into(),
            rate: acc.rate(),
            grid: grid.to_vec(),
            f_out,
            efficiency,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// Curves for a set of fixed protocols at one repeater count.
pub fn protocol_curves<T: Real>(
    n_repeaters: u32,
    protocols: &[Protocol],
    grid: &[T],
) -> Result<Vec<EfficiencyCurve<T>>> {
    protocols
        .iter()
        .map(|p| EfficiencyCurve::compute(p.label(), &p.plan(n_repeaters)?, grid))
        .collect()
}

pub fn default_grid<T: Real>() -> Vec<T> {
    let (lo, hi, n) = DEFAULT_GRID;
    linspace(T::lit(lo), T::lit(hi), n)
}

fn check_shared_grid<T: Real>(curves: &[EfficiencyCurve<T>]) -> Result<()> {
    match curves.split_first() {
        Some((first, rest)) if rest.iter().all(|c| c.grid == first.grid) => Ok(()),
        Some(_) => Err(Error::GridMismatch),
        None => Err(Error::InvalidInput("no curves given".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchPoint<T> {
    pub from: String,
    pub to: String,
    /// `None` when `to` never overtakes `from` inside the grid.
    pub fidelity: Option<T>,
}

/// Crossing of each adjacent pair of curves, in the order given.
///
/// The crossing is the first grid cell where `E_to - E_from` goes from
/// non-positive to positive, refined by linear interpolation.
pub fn switching_points<T: Real>(curves: &[EfficiencyCurve<T>]) -> Result<Vec<SwitchPoint<T>>> {
    check_shared_grid(curves)?;
    Ok(curves
        .windows(2)
        .map(|pair| {
            let (from, to) = (&pair[0], &pair[1]);
            let diff: Vec<T> = to
                .efficiency
                .iter()
                .zip(&from.efficiency)
                .map(|(&a, &b)| a - b)
                .collect();
            let fidelity = (0..diff.len().saturating_sub(1))
                .find(|&j| diff[j] <= T::zero() && diff[j + 1] > T::zero())
                .map(|j| {
                    let (x0, x1) = (from.grid[j], from.grid[j + 1]);
                    x0 + (x1 - x0) * (-diff[j]) / (diff[j + 1] - diff[j])
                });
            SwitchPoint {
                from: from.label.clone(),
                to: to.label.clone(),
                fidelity,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Envelope<T> {
    pub grid: Vec<T>,
    pub value: Vec<T>,
    /// Index into the curve list of the maximising plan.
    pub active: Vec<usize>,
    pub labels: Vec<String>,
}

impl<T: Real> Envelope<T> {
    pub fn active_label(&self, i: usize) -> &str {
        &self.labels[self.active[i]]
    }

    /// Active plan at the grid point nearest to `f`.
    pub fn active_at(&self, f: T) -> &str {
        let i = (0..self.grid.len())
            .min_by(|&a, &b| {
                let da = (self.grid[a] - f).abs();
                let db = (self.grid[b] - f).abs();
                da.partial_cmp(&db).expect("finite grid")
            })
            .expect("non-empty envelope");
        self.active_label(i)
    }
}

/// Pointwise maximum. Curves are expected in increasing-`k` order; exact ties
/// go to the later curve.
pub fn optimal_envelope<T: Real>(curves: &[EfficiencyCurve<T>]) -> Result<Envelope<T>> {
    check_shared_grid(curves)?;
    let grid = curves[0].grid.clone();
    let mut value = Vec::with_capacity(grid.len());
    let mut active = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let mut best = 0;
        for (c, curve) in curves.iter().enumerate().skip(1) {
            if curve.efficiency[i] >= curves[best].efficiency[i] {
                best = c;
            }
        }
        value.push(curves[best].efficiency[i]);
        active.push(best);
    }
    Ok(Envelope {
        grid,
        value,
        active,
        labels: curves.iter().map(|c| c.label.clone()).collect(),
    })
}

/// Columns `F_in, E_<label>..., active_plan`.
pub fn curves_table<T: Real>(curves: &[EfficiencyCurve<T>]) -> Result<Table> {
    let env = optimal_envelope(curves)?;
    let mut columns = vec!["F_in".to_string()];
    columns.extend(curves.iter().map(|c| format!("E_{}", c.label)));
    columns.push("active_plan".into());
    let mut t = Table::new(columns);
    for i in 0..env.grid.len() {
        let mut row = vec![env.grid[i].as_f64().into()];
        row.extend(curves.iter().map(|c| c.efficiency[i].as_f64().into()));
        row.push(env.active_label(i).into());
        t.push(row);
    }
    Ok(t)
}

/// One row per repeater count, one column per adjacent pair.
pub fn switch_table<T: Real>(rows: &[(u32, Vec<SwitchPoint<T>>)]) -> Table {
    let mut columns = vec!["repeaters".to_string()];
    if let Some((_, first)) = rows.first() {
        columns.extend(first.iter().map(|s| format!("{}->{}", s.from, s.to)));
    }
    let mut t = Table::new(columns);
    for (n, points) in rows {
        let mut row = vec![(*n as u64).into()];
        row.extend(points.iter().map(|s| s.fidelity.map(|f| f.as_f64()).into()));
        t.push(row);
    }
    t
}
