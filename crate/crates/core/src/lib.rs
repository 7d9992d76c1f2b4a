//! Domino tableaux for the hyperoctahedral group acting on a type-D root
//! system: Garfinkle's domino Robinson–Schensted correspondence, cycle moves,
//! wall-crossing operators, and the reduction of a left tableau to the
//! tableau and nilpotent-orbit label of its orbital variety.

pub mod classify;
pub mod cycles;
pub mod garfinkle_rs;
pub mod operators;
pub mod partitions;
pub mod tableaux;
pub mod weyl;
pub mod verify;

pub use garfinkle_rs::{rs, rs_inverse, RsError, TableauPair};
pub use partitions::{Partition, PartitionError};
pub use tableaux::{Domino, DominoTableau, Square, TableauError};
pub use weyl::{SignedPermutation, SimpleRoot, WeylError};
