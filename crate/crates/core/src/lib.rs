//! Photon-cluster decomposition of Bose-Einstein blackbody statistics.
//!
//! Photons in a thermal mode arrive in clusters: the number of clusters in a
//! region is Poisson, the number of photons per cluster follows the
//! logarithmic law, and the compound of the two is the Bose-Einstein
//! (negative binomial) photon count. Sorting cavity radiation by cluster rank
//! splits Planck's law into a sum of Wien-shaped terms.
//!
//! Every closed form here has a numerical twin (quadrature, series
//! truncation, exact rational arithmetic or seeded sampling) and [`verify`]
//! runs them against each other.

pub mod distributions;
pub mod error;
pub mod gf;
pub mod montecarlo;
pub mod numeric;
pub mod spectra;
pub mod stirling;
pub mod thermo;
pub mod verify;

pub use distributions::{be_pmf, be_pmf_table, BernoulliParam, Degeneracy, PhaseVolume, PmfTable};
pub use error::{Error, Result};
pub use thermo::{ClusterRank, PhysicalConstants, ThermalMode};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/distributions.md")]
    pub struct Distributions;
    #[doc = include_str!("../../../book/src/generating-functions.md")]
    pub struct GeneratingFunctions;
    #[doc = include_str!("../../../book/src/stirling.md")]
    pub struct Stirling;
    #[doc = include_str!("../../../book/src/thermal-modes.md")]
    pub struct ThermalModes;
    #[doc = include_str!("../../../book/src/spectra.md")]
    pub struct Spectra;
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    pub struct MonteCarlo;
    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;
}
