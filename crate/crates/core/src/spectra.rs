//! Cavity spectra of photon clusters, rank by rank.
//!
//! A rank-`m` cluster keeps the frequency of its photons, so per unit
//! frequency its energy density is `u_m(ν) = (8πhν³/c³) e^(-mhν/kT)` and the
//! ranks sum to Planck's law. Its wavelength, however, is `λ/m`; re-expressed
//! per unit wavelength the rank spectra become `u_m(λ) = 8πhc/(m⁴λ⁵) e^(-hc/λkT)`,
//! all of the same shape, which sum to a Wien-shaped law with amplitude
//! `ζ(4) = π⁴/90` instead of Planck's λ-law.
//!
//! Closed forms are paired with numerical routes: quadrature on the reduced
//! variable `x = hν/kT` (or `y = hc/λkT`) over `[1e-8, 60]`, and numerical
//! peak search.

use std::f64::consts::PI;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numeric::optimize::locate_peak_near;
use crate::numeric::quad::{integrate, Quadrature};
use crate::numeric::zeta::zeta;
use crate::thermo::{ClusterRank, C, H, K_B};

/// Lower end of the reduced-variable quadrature window.
pub const QUAD_LOWER: f64 = 1e-8;
/// Upper end of the reduced-variable quadrature window.
pub const QUAD_UPPER: f64 = 60.0;
/// Relative tolerance requested from the quadrature.
pub const QUAD_TOL: f64 = 1e-13;
/// Ranks tabulated in [`ClusterConstants`].
pub const TABULATED_RANKS: u32 = 10;

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(domain(name, v, "must be finite and > 0"))
    }
}

fn nu_prefactor(nu: f64) -> f64 {
    8.0 * PI * H * nu * nu * nu / (C * C * C)
}

/// Energy density of rank-`m` cluster radiation per unit frequency, J·m⁻³·Hz⁻¹.
pub fn u_m_nu(nu: f64, temperature: f64, m: ClusterRank) -> Result<f64> {
    check_positive("nu", nu)?;
    check_positive("T", temperature)?;
    Ok(nu_prefactor(nu) * (-m.as_f64() * H * nu / (K_B * temperature)).exp())
}

/// Planck's law per unit frequency, J·m⁻³·Hz⁻¹.
pub fn planck_u_nu(nu: f64, temperature: f64) -> Result<f64> {
    check_positive("nu", nu)?;
    check_positive("T", temperature)?;
    Ok(nu_prefactor(nu) / (H * nu / (K_B * temperature)).exp_m1())
}

/// Smallest `M` with `b^M ≤ tol (1 - b)`, so the rank series truncated at `M`
/// is within relative `tol` of its sum.
pub fn ranks_needed(b: f64, tol: f64) -> u32 {
    if b <= 0.0 {
        return 1;
    }
    let m = ((tol * (1.0 - b)).ln() / b.ln()).ceil();
    m.clamp(1.0, u32::MAX as f64) as u32
}

/// `Σ_{m ≤ M} u_m(ν)` with `M` from [`ranks_needed`]; returns the sum and `M`.
pub fn planck_from_ranks(nu: f64, temperature: f64, tol: f64) -> Result<(f64, u32)> {
    check_positive("nu", nu)?;
    check_positive("T", temperature)?;
    let b = (-H * nu / (K_B * temperature)).exp();
    let ranks = ranks_needed(b, tol);
    let mut sum = 0.0;
    for m in 1..=ranks {
        sum += u_m_nu(nu, temperature, ClusterRank::new(m)?)?;
    }
    Ok((sum, ranks))
}

/// Peak frequency of `u_m(ν)`, `3kT/(mh)`.
pub fn wien_cluster_peak(m: ClusterRank, temperature: f64) -> Result<f64> {
    check_positive("T", temperature)?;
    Ok(3.0 * K_B * temperature / (m.as_f64() * H))
}

/// Peak frequency of `u_m(ν)` found numerically, bracketed around `kT/(mh)`.
pub fn wien_cluster_peak_numeric(m: ClusterRank, temperature: f64) -> Result<f64> {
    check_positive("T", temperature)?;
    // A deliberately rough guess; the bracket is [0.1, 10] times it.
    let guess = 2.0 * K_B * temperature / (m.as_f64() * H);
    Ok(locate_peak_near(|nu| u_m_nu(nu, temperature, m).unwrap_or(0.0), guess))
}

/// Stefan-Boltzmann coefficient of rank `m`, `48πk⁴/(m⁴c³h³)`, J·m⁻³·K⁻⁴.
pub fn sigma_rank(m: ClusterRank) -> f64 {
    let hc = H * C;
    48.0 * PI * K_B.powi(4) / (m.as_f64().powi(4) * hc * hc * hc)
}

/// Full radiation constant `8π⁵k⁴/(15c³h³)`.
pub fn sigma_total() -> f64 {
    let hc = H * C;
    8.0 * PI.powi(5) * K_B.powi(4) / (15.0 * hc * hc * hc)
}

/// `∫ f(ν) dν` over the reduced window, with `ν = x kT/h`.
fn integrate_over_frequency<F: Fn(f64) -> f64>(f: F, temperature: f64) -> Quadrature {
    let scale = K_B * temperature / H;
    let q = integrate(|x| f(x * scale), QUAD_LOWER, QUAD_UPPER, QUAD_TOL);
    Quadrature {
        value: q.value * scale,
        error: q.error * scale,
        panels: q.panels,
    }
}

/// `∫ f(λ) dλ` over the reduced window, with `λ = hc/(y kT)`.
fn integrate_over_wavelength<F: Fn(f64) -> f64>(f: F, temperature: f64) -> Quadrature {
    let scale = H * C / (K_B * temperature);
    let q = integrate(|y| f(scale / y) * scale / (y * y), QUAD_LOWER, QUAD_UPPER, QUAD_TOL);
    Quadrature {
        value: q.value,
        error: q.error,
        panels: q.panels,
    }
}

/// Total energy density of rank-`m` radiation by quadrature of `u_m(ν)`.
pub fn energy_density_by_quadrature(m: ClusterRank, temperature: f64) -> Result<Quadrature> {
    check_positive("T", temperature)?;
    Ok(integrate_over_frequency(
        |nu| u_m_nu(nu, temperature, m).unwrap_or(0.0),
        temperature,
    ))
}

/// Photons per unit volume and frequency bound in rank-`m` clusters, `u_m(ν)/(hν)`.
pub fn rho_m_nu(nu: f64, temperature: f64, m: ClusterRank) -> Result<f64> {
    Ok(u_m_nu(nu, temperature, m)? / (H * nu))
}

/// Photons per unit volume bound in rank-`m` clusters, `16πk³T³/(m³c³h³)`.
pub fn photon_number_density(m: ClusterRank, temperature: f64) -> Result<f64> {
    check_positive("T", temperature)?;
    Ok(photon_coefficient(m) * temperature.powi(3))
}

fn photon_coefficient(m: ClusterRank) -> f64 {
    let hc = H * C;
    16.0 * PI * K_B.powi(3) / (m.as_f64().powi(3) * hc * hc * hc)
}

/// [`photon_number_density`] by quadrature of `ρ_m(ν)`.
pub fn photon_density_by_quadrature(m: ClusterRank, temperature: f64) -> Result<Quadrature> {
    check_positive("T", temperature)?;
    Ok(integrate_over_frequency(
        |nu| rho_m_nu(nu, temperature, m).unwrap_or(0.0),
        temperature,
    ))
}

/// Energy density of rank-`m` cluster radiation per unit wavelength, J·m⁻³·m⁻¹.
pub fn u_m_lambda(lambda: f64, temperature: f64, m: ClusterRank) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_positive("T", temperature)?;
    Ok(8.0 * PI * H * C / (m.as_f64().powi(4) * lambda.powi(5)) * (-H * C / (lambda * K_B * temperature)).exp())
}

/// Sum of all rank λ-spectra, `(4π⁵hc/(45λ⁵)) e^(-hc/λkT)`.
pub fn modified_planck_lambda(lambda: f64, temperature: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_positive("T", temperature)?;
    Ok(4.0 * PI.powi(5) * H * C / (45.0 * lambda.powi(5)) * (-H * C / (lambda * K_B * temperature)).exp())
}

/// Planck's law per unit wavelength, J·m⁻³·m⁻¹.
pub fn planck_lambda(lambda: f64, temperature: f64) -> Result<f64> {
    check_positive("lambda", lambda)?;
    check_positive("T", temperature)?;
    Ok(8.0 * PI * H * C / lambda.powi(5) / (H * C / (lambda * K_B * temperature)).exp_m1())
}

/// Peak wavelength of every `u_m(λ)`, `hc/(5kT)`.
pub fn cluster_lambda_peak(temperature: f64) -> Result<f64> {
    check_positive("T", temperature)?;
    Ok(H * C / (5.0 * K_B * temperature))
}

/// Integral of a λ-spectrum over all wavelengths by reduced-variable quadrature.
pub fn lambda_energy_by_quadrature<F: Fn(f64, f64) -> Result<f64>>(
    spectrum: F,
    temperature: f64,
) -> Result<Quadrature> {
    check_positive("T", temperature)?;
    Ok(integrate_over_wavelength(
        |l| spectrum(l, temperature).unwrap_or(0.0),
        temperature,
    ))
}

/// Modified versus standard λ-law, all quantities dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaComparison {
    /// max(modified) / max(Planck).
    pub peak_ratio: f64,
    /// (λ_Planck,max − λ_modified,max) / λ_Planck,max.
    pub peak_offset_rel: f64,
    /// |∫modified − ∫Planck| / ∫Planck.
    pub area_rel_diff: f64,
    pub lambda_peak_planck: f64,
    pub lambda_peak_modified: f64,
}

/// Compares the cluster-modified λ-law with Planck's λ-law at temperature `T`
/// using numerical peak search and quadrature.
pub fn compare_lambda_spectra(temperature: f64) -> Result<LambdaComparison> {
    let guess = cluster_lambda_peak(temperature)?;
    let planck = |l: f64| planck_lambda(l, temperature).unwrap_or(0.0);
    let modified = |l: f64| modified_planck_lambda(l, temperature).unwrap_or(0.0);
    let lp = locate_peak_near(planck, guess);
    let lm = locate_peak_near(modified, guess);
    let area_planck = lambda_energy_by_quadrature(planck_lambda, temperature)?.value;
    let area_modified = lambda_energy_by_quadrature(modified_planck_lambda, temperature)?.value;
    Ok(LambdaComparison {
        peak_ratio: modified(lm) / planck(lp),
        peak_offset_rel: (lp - lm) / lp,
        area_rel_diff: (area_modified - area_planck).abs() / area_planck,
        lambda_peak_planck: lp,
        lambda_peak_modified: lm,
    })
}

/// Temperature-independent constants of cluster radiation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterConstants {
    /// `σ_m` for `m = 1 … TABULATED_RANKS`.
    pub sigma_m: Vec<f64>,
    pub sigma_total: f64,
    /// Energy fraction carried by single photons, `σ_1/σ = 90/π⁴`.
    pub phi: f64,
    /// Energy fraction carried by clusters of rank ≥ 2, `1 − φ`.
    pub theta: f64,
    /// `N_m / T³` for `m = 1 … TABULATED_RANKS`, m⁻³·K⁻³.
    pub n_m_per_t3: Vec<f64>,
    /// `Σ N_m / N_1 = ζ(3)`.
    pub zeta3_ratio: f64,
    /// Fraction of photons bound in clusters of rank ≥ 2, `1 − 1/ζ(3)`.
    pub n_fraction: f64,
}

impl ClusterConstants {
    /// Partial sum `Σ_{m ≤ M} σ_m`.
    pub fn sigma_series(ranks: u32) -> f64 {
        (1..=ranks).rev().map(|m| sigma_rank(ClusterRank(m))).sum()
    }
}

static CONSTANTS: LazyLock<ClusterConstants> = LazyLock::new(|| {
    let ranks = || (1..=TABULATED_RANKS).map(ClusterRank);
    let sigma_total = sigma_total();
    let phi = sigma_rank(ClusterRank(1)) / sigma_total;
    let zeta3 = zeta(3.0);
    ClusterConstants {
        sigma_m: ranks().map(sigma_rank).collect(),
        sigma_total,
        phi,
        theta: 1.0 - phi,
        n_m_per_t3: ranks().map(photon_coefficient).collect(),
        zeta3_ratio: zeta3,
        n_fraction: 1.0 - 1.0 / zeta3,
    }
});

pub fn clusterization_constants() -> ClusterConstants {
    CONSTANTS.clone()
}

/// Abscissa of a [`SpectrumCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    /// Hz on the abscissa, J·m⁻³·Hz⁻¹ on the ordinate.
    PerFrequency,
    /// m on the abscissa, J·m⁻³·m⁻¹ on the ordinate.
    PerWavelength,
}

/// Which curve of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSeries {
    Rank(ClusterRank),
    /// Sum over all ranks: Planck per frequency, modified law per wavelength.
    Total,
    /// Planck's law in the requested variable.
    StandardPlanck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCurve {
    pub kind: SpectrumKind,
    pub series: SpectrumSeries,
    pub temperature: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn spectral_density(kind: SpectrumKind, series: SpectrumSeries, x: f64, temperature: f64) -> Result<f64> {
    match (kind, series) {
        (SpectrumKind::PerFrequency, SpectrumSeries::Rank(m)) => u_m_nu(x, temperature, m),
        (SpectrumKind::PerFrequency, _) => planck_u_nu(x, temperature),
        (SpectrumKind::PerWavelength, SpectrumSeries::Rank(m)) => u_m_lambda(x, temperature, m),
        (SpectrumKind::PerWavelength, SpectrumSeries::Total) => modified_planck_lambda(x, temperature),
        (SpectrumKind::PerWavelength, SpectrumSeries::StandardPlanck) => planck_lambda(x, temperature),
    }
}

impl SpectrumCurve {
    /// Samples one curve on a strictly increasing grid.
    pub fn sample(kind: SpectrumKind, series: SpectrumSeries, temperature: f64, grid: &[f64]) -> Result<Self> {
        if let Some(pair) = grid.windows(2).find(|p| p[1] <= p[0]) {
            return Err(domain("grid", pair[1], "abscissas must be strictly increasing"));
        }
        let points = grid
            .iter()
            .map(|&x| spectral_density(kind, series, x, temperature).map(|y| (x, y)))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectrumCurve {
            kind,
            series,
            temperature,
            points,
        })
    }

    /// Trapezoidal area under the sampled points.
    pub fn trapezoid_area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|p| 0.5 * (p[1].0 - p[0].0) * (p[0].1 + p[1].1))
            .sum()
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    check_positive("min", lo)?;
    check_positive("max", hi)?;
    if hi <= lo {
        return Err(domain("max", hi, "grid maximum must exceed its minimum"));
    }
    if n < 2 {
        return Err(domain("points", n as f64, "a grid needs at least 2 points"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (a + step * i as f64).exp(),
        })
        .collect())
}
