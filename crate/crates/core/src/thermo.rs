//! Thermal parameterization of a single radiation mode.
//!
//! Everything here is a function of the reduced photon energy
//! `x = hν / (k_B T)`: the occupation `w = 1/(eˣ - 1)`, the ratio `b = e^(-x)`,
//! the cluster intensity `η = -ln(1 - e^(-x)) = ln Z`, and the per-rank
//! averages `k_m = e^(-m x)`.

use serde::{Deserialize, Serialize};

use crate::distributions::Degeneracy;
use crate::error::{domain, index, Result};

/// Planck constant, J·s (exact SI value).
pub const H: f64 = 6.626_070_15e-34;
/// Speed of light in vacuum, m/s (exact SI value).
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K (exact SI value).
pub const K_B: f64 = 1.380_649e-23;

/// The SI-defined constants used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub h: f64,
    pub c: f64,
    pub k_b: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants { h: H, c: C, k_b: K_B };
}

/// Below this reduced energy a mode is treated as unphysical.
pub const MIN_REDUCED_ENERGY: f64 = 1e-300;
/// Above this reduced energy `w` is evaluated as `e^(-x)`.
pub const LARGE_REDUCED_ENERGY: f64 = 700.0;

/// Cluster rank `m ≥ 1`: the number of photons in a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClusterRank(pub(crate) u32);

impl ClusterRank {
    pub fn new(m: u32) -> Result<Self> {
        if m >= 1 {
            Ok(ClusterRank(m))
        } else {
            Err(index("m", 0, "cluster ranks start at 1"))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }
}

/// A radiation mode at frequency `nu` (Hz) in equilibrium at `temperature` (K).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalMode {
    nu: f64,
    temperature: f64,
}

impl ThermalMode {
    pub fn new(nu: f64, temperature: f64) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(domain("nu", nu, "frequency must be finite and > 0"));
        }
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(domain("T", temperature, "temperature must be finite and > 0"));
        }
        let mode = ThermalMode { nu, temperature };
        check_reduced(mode.x())?;
        Ok(mode)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Photon energy `hν`, J.
    pub fn epsilon(&self) -> f64 {
        H * self.nu
    }

    /// Inverse temperature `1/(k_B T)`, 1/J.
    pub fn beta(&self) -> f64 {
        1.0 / (K_B * self.temperature)
    }

    /// Reduced energy `x = βε`.
    pub fn x(&self) -> f64 {
        H * self.nu / (K_B * self.temperature)
    }

    /// `b = e^(-x)`.
    pub fn b(&self) -> f64 {
        (-self.x()).exp()
    }
}

fn check_reduced(x: f64) -> Result<()> {
    if x.is_finite() && x >= MIN_REDUCED_ENERGY {
        Ok(())
    } else {
        Err(domain("x", x, "reduced energy hν/kT must be finite and >= 1e-300"))
    }
}

/// Occupation number `1/(eˣ - 1)` of a mode with reduced energy `x`.
pub fn occupation(x: f64) -> Result<f64> {
    check_reduced(x)?;
    if x > LARGE_REDUCED_ENERGY {
        return Ok((-x).exp());
    }
    Ok(1.0 / x.exp_m1())
}

/// `-ln(1 - e^(-x))`.
pub fn intensity_from_reduced(x: f64) -> Result<f64> {
    check_reduced(x)?;
    if x < std::f64::consts::LN_2 {
        // 1 - e^(-x) is small here; form it without cancellation.
        Ok(-(-(-x).exp_m1()).ln())
    } else {
        Ok(-(-(-x).exp()).ln_1p())
    }
}

/// `1/(1 - e^(-x))`.
pub fn partition_from_reduced(x: f64) -> Result<f64> {
    check_reduced(x)?;
    Ok(-1.0 / (-x).exp_m1())
}

/// Degeneracy parameter of the mode.
pub fn degeneracy(mode: &ThermalMode) -> Degeneracy {
    let w = occupation(mode.x()).expect("ThermalMode guarantees a valid reduced energy");
    Degeneracy::new(w).expect("occupation is finite and nonnegative")
}

/// Mean number of clusters per mode, `η = -ln(1 - e^(-x))`.
pub fn cluster_intensity(mode: &ThermalMode) -> f64 {
    intensity_from_reduced(mode.x()).expect("ThermalMode guarantees a valid reduced energy")
}

/// Single-mode partition function `Z = 1/(1 - e^(-x))`.
pub fn partition_function(mode: &ThermalMode) -> f64 {
    partition_from_reduced(mode.x()).expect("ThermalMode guarantees a valid reduced energy")
}

/// Mean mode energy `ε/(e^(βε) - 1)`, J.
pub fn mean_energy(mode: &ThermalMode) -> f64 {
    mode.epsilon() * occupation(mode.x()).expect("valid mode")
}

/// Mean mode energy as `-(1/Z) ∂Z/∂β`, by a central difference in β.
pub fn mean_energy_from_partition(mode: &ThermalMode) -> f64 {
    let eps = mode.epsilon();
    let beta = mode.beta();
    let h = 1e-6 * beta;
    let z = |b: f64| partition_from_reduced(b * eps).expect("valid mode");
    -(z(beta + h) - z(beta - h)) / (2.0 * h) / z(beta)
}

/// Mode averages carried by clusters of one rank.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankAverages {
    /// Mean number of rank-`m` clusters, `b^m / m`.
    pub eta_m: f64,
    /// Mean number of photons bound in rank-`m` clusters, `e^(-m x)`.
    pub k_m: f64,
    /// Mean energy carried by those photons, `ε e^(-m x)`, J.
    pub eps_m: f64,
}

pub fn rank_mode_averages(mode: &ThermalMode, m: ClusterRank) -> RankAverages {
    // e^(-mx) underflows to exactly 0 beyond mx ≈ 745, which is the intended value.
    let k_m = (-m.as_f64() * mode.x()).exp();
    RankAverages {
        eta_m: k_m / m.as_f64(),
        k_m,
        eps_m: mode.epsilon() * k_m,
    }
}

/// Number of modes per unit volume in the energy band `[ε, ε + Δε]`, both
/// polarizations: `8π ε² Δε / (c³ h³)`.
pub fn mode_density(epsilon: f64, delta_epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(domain("epsilon", epsilon, "energy must be finite and > 0"));
    }
    if !(delta_epsilon > 0.0 && delta_epsilon.is_finite()) {
        return Err(domain(
            "delta_epsilon",
            delta_epsilon,
            "energy band must be finite and > 0",
        ));
    }
    let hc = H * C;
    Ok(8.0 * std::f64::consts::PI * epsilon * epsilon * delta_epsilon / (hc * hc * hc))
}
