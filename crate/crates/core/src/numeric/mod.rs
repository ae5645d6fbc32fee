//! Numerical building blocks: quadrature, peak search, zeta values, log-gamma.

pub mod optimize;
pub mod quad;
pub mod special;
pub mod zeta;
