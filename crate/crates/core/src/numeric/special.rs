//! Log-gamma helpers.
//!
//! `ln_gamma` itself comes from `statrs`. What it cannot give us is an
//! accurate *difference* `ln Γ(x + d) - ln Γ(x)` when `x` is large: both
//! terms are O(x ln x) and their difference loses roughly `log10(x ln x)`
//! digits. [`ln_gamma_ratio`] evaluates the difference directly from the
//! Stirling series so the cancellation happens analytically.

use statrs::function::gamma;

/// Below this argument the Stirling difference is not used.
const STIRLING_MIN: f64 = 19.0;

/// Coefficients `B_{2k} / (2k (2k - 1))` of the Stirling series.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

/// Asymptotic correction `ln Γ(z) - [(z - 1/2) ln z - z + ln(2π)/2]`.
fn stirling_tail(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut term = inv;
    let mut sum = 0.0;
    for c in STIRLING_COEFFS {
        sum += c * term;
        term *= inv2;
    }
    sum
}

/// `ln Γ(x + d) - ln Γ(x)`.
///
/// Accurate to a few ulps of the result when `min(x, x + d) >= 19`; falls back
/// to a plain difference of `ln_gamma` values otherwise.
pub fn ln_gamma_ratio(x: f64, d: f64) -> f64 {
    let a = x + d;
    if x < STIRLING_MIN || a < STIRLING_MIN {
        return ln_gamma(a) - ln_gamma(x);
    }
    // (a - 1/2) ln a - (x - 1/2) ln x - d, rearranged so that the large
    // logarithms never get subtracted from each other.
    (a - 0.5) * (d / x).ln_1p() + d * x.ln() - d + (stirling_tail(a) - stirling_tail(x))
}

/// Natural log of the generalized binomial coefficient `C(τ + n - 1, n)`,
/// i.e. of `τ(τ+1)…(τ+n-1) / n!`, for real `τ > 0`.
pub fn ln_rising_binomial(n: u64, tau: f64) -> f64 {
    if n <= DIRECT_PRODUCT_MAX {
        return rising_binomial_direct(n, tau).ln();
    }
    let nf = n as f64;
    if tau >= nf {
        // Γ(τ+n)/Γ(τ) / n!
        ln_gamma_ratio(tau, nf) - ln_gamma(nf + 1.0)
    } else {
        // Γ(n+τ)/Γ(n+1) / Γ(τ)
        ln_gamma_ratio(nf + 1.0, tau - 1.0) - ln_gamma(tau)
    }
}

/// Largest `n` for which the rising binomial is formed as an explicit product.
pub const DIRECT_PRODUCT_MAX: u64 = 20;

/// `τ(τ+1)…(τ+n-1) / n!` by direct product. Intended for small `n`.
pub fn rising_binomial_direct(n: u64, tau: f64) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (tau + j as f64) / (j + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_matches_plain_difference_where_that_is_accurate() {
        for &(x, d) in &[(20.0, 0.5), (25.0, 3.0), (19.5, -0.5), (40.0, 10.0)] {
            let plain = ln_gamma(x + d) - ln_gamma(x);
            let fast = ln_gamma_ratio(x, d);
            assert!((plain - fast).abs() < 1e-12, "x={x} d={d}: {plain} vs {fast}");
        }
    }

    #[test]
    fn ratio_of_integers_is_log_of_falling_product() {
        // Γ(x + 3) / Γ(x) = x (x+1) (x+2)
        let x: f64 = 1000.0;
        let exact = (x * (x + 1.0) * (x + 2.0)).ln();
        assert!((ln_gamma_ratio(x, 3.0) - exact).abs() < 1e-13);
    }

    #[test]
    fn large_n_branch_agrees_with_direct_product_at_the_seam() {
        // n = 21 goes through log-gamma; compare with the product extended by one factor.
        for &tau in &[0.5, 1.0, 3.7, 30.0] {
            let direct = rising_binomial_direct(21, tau).ln();
            let lg = ln_rising_binomial(21, tau);
            assert!(((direct - lg) / direct.abs().max(1.0)).abs() < 1e-14, "tau={tau}");
        }
    }

    #[test]
    fn unit_tau_gives_unit_coefficient() {
        for n in [0, 1, 5, 20, 21, 100, 1000] {
            assert!(ln_rising_binomial(n, 1.0).abs() < 1e-12, "n={n}");
        }
    }
}
