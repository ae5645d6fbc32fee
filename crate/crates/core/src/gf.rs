//! Probability generating functions of the three laws and the composition
//! identity `P(z) = G(F(z))` that ties them together.
//!
//! All functions are evaluated on `z ∈ [0, 1]` only.

use crate::distributions::{be_pmf_table, Degeneracy, PhaseVolume};
use crate::error::{domain, Result};

/// Central-difference step used by [`mean_from_gf`].
pub const DERIVATIVE_STEP: f64 = 1e-6;

fn check_z(z: f64) -> Result<()> {
    if (0.0..=1.0).contains(&z) {
        Ok(())
    } else {
        Err(domain("z", z, "z must lie in [0, 1]"))
    }
}

/// Photon-count generating function `P(z) = (1 + w - w z)^(-τ)`.
pub fn gf_be(z: f64, tau: PhaseVolume, w: Degeneracy) -> Result<f64> {
    check_z(z)?;
    let base = 1.0 + w.value() * (1.0 - z);
    if base <= 0.0 {
        return Err(domain("1+w-wz", base, "outside the radius of convergence"));
    }
    Ok((-tau.value() * (w.value() * (1.0 - z)).ln_1p()).exp())
}

/// Cluster-count generating function `G(z) = exp(η τ (z - 1))`.
pub fn gf_poisson(z: f64, tau: PhaseVolume, eta: f64) -> Result<f64> {
    check_z(z)?;
    if !(eta.is_finite() && eta >= 0.0) {
        return Err(domain("eta", eta, "eta must be finite and >= 0"));
    }
    Ok((eta * tau.value() * (z - 1.0)).exp())
}

/// Cluster-size generating function `F(z) = ln(1 - b z) / ln(1 - b)`.
pub fn gf_logarithmic(z: f64, w: Degeneracy) -> Result<f64> {
    check_z(z)?;
    if w.value() == 0.0 {
        return Err(domain("w", 0.0, "the logarithmic law needs w > 0"));
    }
    // 1 - b z = (1 + w(1-z)) / (1 + w)
    let eta = w.eta();
    Ok((eta - (w.value() * (1.0 - z)).ln_1p()) / eta)
}

/// `|P(z) - G(F(z))|`.
pub fn composition_residual(z: f64, tau: PhaseVolume, w: Degeneracy) -> Result<f64> {
    let lhs = gf_be(z, tau, w)?;
    let rhs = gf_poisson(gf_logarithmic(z, w)?, tau, w.eta())?;
    Ok((lhs - rhs).abs())
}

/// Largest composition residual over a grid of `(z, τ, w)`.
pub fn max_composition_residual(zs: &[f64], taus: &[f64], ws: &[f64]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in taus {
        let tau = PhaseVolume::new(t)?;
        for &w in ws {
            let w = Degeneracy::new(w)?;
            for &z in zs {
                worst = worst.max(composition_residual(z, tau, w)?);
            }
        }
    }
    Ok(worst)
}

/// `|Σ_{n ≤ n_max} p_n zⁿ - P(z)|` for `z ∈ [0, 1)`.
pub fn gf_series_check(z: f64, tau: PhaseVolume, w: Degeneracy, n_max: u64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(domain("z", z, "series check needs z in [0, 1)"));
    }
    let table = be_pmf_table(n_max, tau, w);
    // Entries run contiguously from n = 0.
    let mut zn = 1.0;
    let mut partial = 0.0;
    for p in table.probabilities() {
        partial += p * zn;
        zn *= z;
    }
    Ok((partial - gf_be(z, tau, w)?).abs())
}

/// Truncated series `Σ_{k ≤ k_max} (bz)^k / (k η)` for `F(z)`.
pub fn gf_logarithmic_series(z: f64, w: Degeneracy, k_max: u64) -> Result<f64> {
    check_z(z)?;
    if w.value() == 0.0 {
        return Err(domain("w", 0.0, "the logarithmic law needs w > 0"));
    }
    let bz = w.b() * z;
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 1..=k_max {
        power *= bz;
        sum += power / k as f64;
    }
    Ok(sum / w.eta())
}

/// Mean photon count `P'(1)`.
///
/// Central differences are taken at `1 - h` and `1 - 2h` (so no node leaves
/// the unit interval) and extrapolated linearly to `z = 1`, which removes the
/// O(h P'') offset of evaluating the slope inside the boundary.
pub fn mean_from_gf(tau: PhaseVolume, w: Degeneracy) -> Result<f64> {
    let h = DERIVATIVE_STEP;
    let central = |c: f64| -> Result<f64> { Ok((gf_be(c + h, tau, w)? - gf_be(c - h, tau, w)?) / (2.0 * h)) };
    let near = central(1.0 - h)?;
    let far = central(1.0 - 2.0 * h)?;
    Ok(2.0 * near - far)
}
