//! Numerical evaluation of `D(s)`: zeta, the truncated Euler product, the
//! zeta-factor form, and the atlas of zeros and poles right of `beta`.

mod atlas;
mod euler;
mod zeta;

pub use atlas::*;
pub use euler::*;
pub use zeta::*;
