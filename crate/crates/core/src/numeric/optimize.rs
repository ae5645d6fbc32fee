//! One-dimensional peak location for positive unimodal functions.
//!
//! Golden-section search on function values narrows the bracket, but only
//! down to `~sqrt(ε)` relative width: near a smooth maximum, neighbouring
//! values become indistinguishable in floating point. The final digits come
//! from a few Newton steps whose slope and curvature are read off central
//! differences of `ln(f/f_ref)`, with Richardson extrapolation over the
//! stencil width.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of `f` on `[lo, hi]`, stopping when the bracket
/// is narrower than `rel_tol` times its midpoint.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..500 {
        if hi - lo <= rel_tol * 0.5 * (lo + hi).abs() {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Relative bracket width reachable by comparing values alone.
const GOLDEN_TOL: f64 = 1e-7;
/// Relative stencil half-width for the Newton refinement.
const STENCIL: f64 = 1e-3;

/// Parabolic vertex of `g` from the three-point stencil `x0 - h, x0, x0 + h`.
fn vertex<G: Fn(f64) -> f64>(g: &G, x0: f64, h: f64) -> f64 {
    let (lo, mid, hi) = (g(x0 - h), g(x0), g(x0 + h));
    let curvature = lo - 2.0 * mid + hi;
    x0 - h * (hi - lo) / (2.0 * curvature)
}

/// Location of the maximum of a positive function `f` that is unimodal on
/// `[lo, hi]`.
pub fn locate_peak<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let mut x = golden_section_max(&f, lo, hi, GOLDEN_TOL);
    for _ in 0..4 {
        let reference = f(x);
        let g = |t: f64| (f(t) / reference).ln();
        let h = STENCIL * x;
        let coarse = vertex(&g, x, h);
        let fine = vertex(&g, x, 0.5 * h);
        let next = (4.0 * fine - coarse) / 3.0;
        if !next.is_finite() || next <= lo || next >= hi {
            break;
        }
        let settled = (next - x).abs() <= 1e-15 * x.abs();
        x = next;
        if settled {
            break;
        }
    }
    x
}

/// [`locate_peak`] on the bracket `[0.1, 10] × guess`.
pub fn locate_peak_near<F: Fn(f64) -> f64>(f: F, guess: f64) -> f64 {
    locate_peak(f, 0.1 * guess, 10.0 * guess)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_vertex_coarsely() {
        let x = golden_section_max(|x: f64| -(x - 2.5) * (x - 2.5), 0.0, 10.0, 1e-8);
        assert!((x - 2.5).abs() < 1e-7);
    }

    #[test]
    fn refined_peak_beats_golden_section_limit() {
        // x³ e^(-x) peaks at 3
        let x = locate_peak_near(|x: f64| x.powi(3) * (-x).exp(), 3.3);
        assert!((x / 3.0 - 1.0).abs() < 1e-12, "x = {x}");
        // x⁵ e^(-x) peaks at 5
        let x = locate_peak_near(|x: f64| x.powi(5) * (-x).exp(), 4.0);
        assert!((x / 5.0 - 1.0).abs() < 1e-12, "x = {x}");
    }

    #[test]
    fn works_on_tiny_function_values() {
        let scale = 1e-300;
        let x = locate_peak_near(|x: f64| scale * x.powi(3) * (-x).exp(), 3.0);
        assert!((x / 3.0 - 1.0).abs() < 1e-12);
    }
}
