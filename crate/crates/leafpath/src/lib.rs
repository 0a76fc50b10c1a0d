//! Root-to-leaf path random walks on double covers of graded signed graphs,
//! their specialization to simplicial complexes (normalized Hodge Laplacians)
//! and the associated Cheeger constants, in exact rational arithmetic.

pub mod audit;
pub mod cheeger;
pub mod complex;
pub mod cover;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod laplacians;
pub mod matrix;
pub mod operators;
pub mod surd;
pub mod walks;

pub use error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Up => "up",
            Direction::Down => "down",
        }
    }
}
