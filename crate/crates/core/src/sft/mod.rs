//! Shift spaces: transition matrices, words, eventually periodic points,
//! cylinder partitions and higher block presentations.

mod higher_block;
mod matrix;
mod partition;
mod point;
mod word;

pub use higher_block::HigherBlock;
pub use matrix::TransitionMatrix;
pub use partition::{complement, CylinderPartition};
pub use point::Point;
pub use word::{Symbol, Word};

pub(crate) use partition::check_antichain;
