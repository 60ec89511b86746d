//! Combinatorial Yamabe flow on triangulated 3-manifolds with sphere-packing
//! metrics.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

// negated float comparisons are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod complex;
pub mod curvature;
pub mod flow;
pub mod metric;
pub mod oracle;
pub mod scalar;

pub use complex::{Complex, ComplexError, FacetList};
pub use curvature::{CurvatureError, CurvatureField};
pub use flow::{FlowConfig, FlowError, FlowReport, FlowState, Termination};
pub use metric::{GeometryError, MetricStructure, TetGeometry};
pub use scalar::Real;

pub type MetricStructure64 = MetricStructure<f64>;
pub type TetGeometry64 = TetGeometry<f64>;
pub type CurvatureField64 = CurvatureField<f64>;
pub type FlowState64 = FlowState<f64>;
pub type FlowReport64 = FlowReport<f64>;
pub type MetricStructure32 = MetricStructure<f32>;
pub type TetGeometry32 = TetGeometry<f32>;
