//! Exact arithmetic and descent engines for Frobenius towers of function
//! fields in characteristic 2.

pub mod constructions;
pub mod curve;
pub mod document;
pub mod error;
pub mod expr;
pub mod field;
pub mod fixtures;
pub mod padic;
pub mod pencil;
pub mod perfect;
pub mod poly;
pub mod tower;

pub use constructions::{sharpness_sweep, FamilyParams, SweepReport};
pub use curve::{RatDifferential, RationalPrime};
pub use document::{load_tower, save_tower, ReportDocument};
pub use error::{
    CombinatoricsError, CurveError, FieldError, FormatError, GeometryError, ParseError, TowerError,
};
pub use field::{FiniteField, Gf2m, Ring, F16, F2, F4, F8};
pub use pencil::DualGraph;
pub use perfect::PerfectedScalar;
pub use poly::{BPoly, BivarRational, UPoly, URational};
pub use tower::{analyze, TowerSpec, TowerTrace};
