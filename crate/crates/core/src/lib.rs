//! Pressure of finite actions of the additive monoid `Z+^N`.
//!
//! A finite state set carries `N` commuting maps. Topological pressure is
//! estimated from covers (minimal weighted subcovers, separated and spanning
//! sets), measure pressure from partition entropy, and the full shift serves
//! as a closed-form reference.

pub mod bitset;
pub mod covers;
pub mod dynsys;
pub mod error;
pub mod fullshift;
pub mod lattice;
pub mod measure;
pub mod solver;
pub mod topological;

pub use error::{Error, Result};
pub use lattice::LatticePoint;
