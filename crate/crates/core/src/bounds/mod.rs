//! The catalog of two-sided inequalities and the machinery that checks them.

mod catalog;
mod check;
mod extremal;
mod quasi;
mod sharpness;

pub use catalog::*;
pub use check::*;
pub use extremal::*;
pub use quasi::*;
pub use sharpness::*;
