//! Bundled documents.

/// Three-step tower over the pencil's generic fibre, bottom prime at infinity.
pub const PENCIL_TOWER: &str = include_str!("../fixtures/pencil.tower");

/// Quasi-elliptic tower, family B with `i = 0`.
pub const FAMILY_B_I0_TOWER: &str = include_str!("../fixtures/familyB_i0.tower");

/// Dual graph of the degenerate fibre of the pencil's minimal regular model.
pub const A15_FIBER: &str = include_str!("../fixtures/a15_fiber.json");
