pub mod complex;
pub mod cone;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod monoid;
pub mod linalg;
pub mod num;
pub mod par;
pub mod scattering;
pub mod tropical;

pub use cone::LatticeCone;
pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeMap};
