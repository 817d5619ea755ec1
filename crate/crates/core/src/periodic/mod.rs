//! Periodic presentations: one-sided infinite graphs built from a finite
//! stem and a block repeated at every level.

pub mod ideals;
pub mod left_infinite;
pub mod lift;
pub mod pure;
pub mod quotient;
pub mod stability;

pub use left_infinite::{Analysis, BlockClass, LeftFiniteCycle};
pub use lift::{Lift, State};
pub use quotient::{shift_quotient, ShiftQuotient};
pub use stability::{has_unital_quotient, periodic_is_stable, realized_cycle_exists, s0, S0Report, S0};
pub use pure::{periodic_is_purely_infinite, periodic_torus_corners};
