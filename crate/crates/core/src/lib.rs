pub mod closedforms;
pub mod error;
pub mod factorials;
pub mod intsets;
pub mod numerics;
pub mod ordering;
pub mod series;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
pub use intsets::{ResidueStatus, SetDescriptor};
pub use numerics::ExtNat;
