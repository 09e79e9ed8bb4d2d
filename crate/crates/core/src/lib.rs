//! Finite topological spaces, neighborhood assignments and D-space checks.

pub mod assignment;
pub mod caps;
pub mod catalog;
pub mod category;
pub mod covering;
pub mod dspace;
pub mod error;
pub mod puf;
pub mod set;
pub mod space;
pub mod suite;

pub use caps::Caps;
pub use error::{Result, TopoError};
pub use set::PointSet;
pub use space::FiniteSpace;
