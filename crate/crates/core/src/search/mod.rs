//! Quotient searches, the Möbius distortion scan and the quasiregular
//! distortion bounds.

mod mobius;
mod qr;
mod refine;

pub use mobius::*;
pub use qr::*;
pub use refine::*;
