//! Concrete systems: a particle on a line, on a circle, a time-independent
//! Hamiltonian, and shifts in several dimensions.

pub mod circle;
pub mod lifetime;
pub mod line;
pub mod multi_axis;

pub use circle::{angular_momentum_operator, circle_certainty_demo, CircleDemo, CircleModel};
pub use lifetime::{lifetime_demo, LevelModel, LifetimeDemo};
pub use line::{
    bump_packet, bump_shift_check, gaussian_packet, line_certainty_demo, momentum_operator,
    pauli_weyl_check, position_operator, shift_state, BumpCheck, LineDemo, LineGrid,
};
pub use multi_axis::{multi_axis_demo, MultiAxisDemo};
