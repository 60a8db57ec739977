//! Curve families: symbolic rational parameterizations and high-precision
//! numeric curves in a frame.

pub mod numeric;
pub mod symbolic;

pub use numeric::{Arc, CurveKind, CurveParams, CurveSpec, Frame, FrameSpec, NumericCurve, RigidMotion, Vec3};
pub use symbolic::{standard_first_curve, standard_second_curve, ConicKind, SymbolicCurve};
