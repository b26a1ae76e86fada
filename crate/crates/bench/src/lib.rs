//! Shared inputs for the criterion benches.

use frobdesc_core::{fixtures, load_tower, TowerSpec};

pub fn pencil_spec() -> TowerSpec {
    load_tower(fixtures::PENCIL_TOWER).expect("bundled fixture loads")
}

pub fn quasi_elliptic_spec() -> TowerSpec {
    load_tower(fixtures::FAMILY_B_I0_TOWER).expect("bundled fixture loads")
}
