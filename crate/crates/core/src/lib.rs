//! Entanglement distillation over repeater chains. Code-based rounds use
//! lookup-table decoders on Werner links; recurrence purification and a
//! purification-then-code hybrid are modelled alongside.
//!
//! Numerical routines are generic over [`Real`] (`f32` or `f64`); resource
//! counts and rates are exact integers and ratios.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod codes;
pub mod convergence;
pub mod efficiency;
pub mod error;
pub mod export;
pub mod hybrid;
pub mod lut;
pub mod pauli;
pub mod purification;
pub mod scalar;
pub mod werner;

pub use chain::{ChainPlan, Protocol, RoundAccounting, RoundSpec};
pub use codes::{builtin_code, builtin_code_by_name, validate_code, CodeId, StabilizerCode, ValidationReport};
pub use error::{Error, Result};
pub use export::{Cell, Table};
pub use hybrid::{checkpoint_scan, hybrid_run, refined_efficiency, HybridResult};
pub use lut::{
    builtin_decoder, builtin_polynomial, Decoder, LogicalFidelityPolynomial, LookupTable, Outcome, Syndrome,
};
pub use pauli::{Letter, PauliString, Phase};
pub use purification::oracle::circuit_oracle;
pub use purification::{purify_step, run_rounds, twirl, Protocol1G};
pub use scalar::Real;
pub use werner::HASHING_THRESHOLD;

pub type PauliDistributionF64 = purification::PauliDistribution<f64>;
pub type PauliDistributionF32 = purification::PauliDistribution<f32>;
pub type PurificationTraceF64 = purification::PurificationTrace<f64>;
pub type PurificationTraceF32 = purification::PurificationTrace<f32>;
pub type EfficiencyCurveF64 = efficiency::EfficiencyCurve<f64>;
pub type EfficiencyCurveF32 = efficiency::EfficiencyCurve<f32>;
pub type SwitchPointF64 = efficiency::SwitchPoint<f64>;
pub type WernerPointF64 = werner::WernerPoint<f64>;
pub type WernerPointF32 = werner::WernerPoint<f32>;
