//! Unsigned Stirling numbers of the first kind and the rising-factorial route
//! to the cluster-count law.
//!
//! Expanding `τ(τ+1)…(τ+n-1) = Σ_k S(n,k) τ^k` splits each relative photon
//! probability `q_n(τ)` into powers of the volume. Column `k` of the matrix
//! `c_nk = bⁿ S(n,k) / n!` then sums to `ln^k(1+w) / k!`, which is the
//! unnormalized Poisson weight of `k` clusters.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::distributions::{be_pmf, relative_prob, Degeneracy, PhaseVolume};
use crate::error::{domain, index, Error, Result};

/// Exact table of `S(n, k)` for `0 ≤ k ≤ n ≤ n_max`.
#[derive(Debug, Clone)]
pub struct StirlingTriangle {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTriangle {
    pub fn new(n_max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![BigUint::one()]);
        for n in 0..n_max {
            let prev = &rows[n];
            let mut next = vec![BigUint::zero(); n + 2];
            // S(n+1, k) = S(n, k-1) + n S(n, k)
            for k in 1..=n + 1 {
                let carry = &prev[k - 1];
                next[k] = match prev.get(k) {
                    Some(same) => carry + same * BigUint::from(n),
                    None => carry.clone(),
                };
            }
            rows.push(next);
        }
        StirlingTriangle { rows }
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S(n, k)`; `None` outside the stored triangle or for `k > n`.
    pub fn get(&self, n: usize, k: usize) -> Option<&BigUint> {
        self.rows.get(n).and_then(|row| row.get(k))
    }

    pub fn row(&self, n: usize) -> Option<&[BigUint]> {
        self.rows.get(n).map(Vec::as_slice)
    }

    pub fn row_sum(&self, n: usize) -> Option<BigUint> {
        self.row(n).map(|r| r.iter().sum())
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, j| acc * BigUint::from(j))
}

/// Nearest `f64` to `num / den` for arbitrarily large integers.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // Scale so the integer quotient carries ~64 significant bits.
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    q.to_f64().unwrap_or(f64::INFINITY) * 2f64.powi(-shift as i32)
}

/// Unsigned Stirling number of the first kind `S(n, k)`.
pub fn stirling_first(n: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Err(index("k", k as u64, "Stirling numbers need k <= n"));
    }
    let triangle = StirlingTriangle::new(n);
    Ok(triangle.rows[n][k].clone())
}

/// Coefficients `[S(n,1), …, S(n,n)]` of the rising factorial `τ(τ+1)…(τ+n-1)`.
pub fn rising_factorial_coeffs(n: usize) -> Result<Vec<BigUint>> {
    if n < 1 {
        return Err(index("n", n as u64, "rising factorial expansion needs n >= 1"));
    }
    let triangle = StirlingTriangle::new(n);
    Ok(triangle.rows[n][1..].to_vec())
}

/// Lower-triangular matrix `c_nk = bⁿ S(n,k) / n!` for `0 ≤ k ≤ n ≤ n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    b: f64,
    rows: Vec<Vec<f64>>,
}

impl CoefficientMatrix {
    pub fn new(triangle: &StirlingTriangle, b: f64) -> Result<Self> {
        check_b(b)?;
        let mut fact = BigUint::one();
        let mut bn = 1.0;
        let mut rows = Vec::with_capacity(triangle.n_max() + 1);
        for n in 0..=triangle.n_max() {
            if n > 0 {
                fact *= BigUint::from(n);
                bn *= b;
            }
            let row = triangle.rows[n].iter().map(|s| bn * ratio_to_f64(s, &fact)).collect();
            rows.push(row);
        }
        Ok(CoefficientMatrix { b, rows })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `c_nk`, zero above the diagonal.
    pub fn get(&self, n: usize, k: usize) -> f64 {
        self.rows.get(n).and_then(|r| r.get(k)).copied().unwrap_or(0.0)
    }

    pub fn column_sum(&self, k: usize) -> f64 {
        self.rows.iter().map(|r| r.get(k).copied().unwrap_or(0.0)).sum()
    }
}

fn check_b(b: f64) -> Result<()> {
    if b > 0.0 && b < 1.0 {
        Ok(())
    } else {
        Err(domain("b", b, "b must lie in (0, 1)"))
    }
}

/// Partial column sum `Σ_{n=k}^{n_max} bⁿ S(n,k) / n!`, which tends to
/// `ln^k(1/(1-b)) / k!`.
pub fn column_sum(k: usize, b: f64, n_max: usize) -> Result<f64> {
    if k < 1 {
        return Err(index("k", 0, "column sums start at k = 1"));
    }
    check_b(b)?;
    if n_max < k {
        return Ok(0.0);
    }
    let triangle = StirlingTriangle::new(n_max);
    let mut fact = factorial(k - 1);
    let mut sum = 0.0;
    for n in k..=n_max {
        fact *= BigUint::from(n);
        sum += b.powi(n as i32) * ratio_to_f64(&triangle.rows[n][k], &fact);
    }
    Ok(sum)
}

/// Probability of `k` clusters in volume `τ`, assembled as
/// `g_0 τ^k Σ_n c_nk` from the Stirling column sums.
pub fn cluster_stats_from_stirling(k: usize, tau: PhaseVolume, w: Degeneracy, n_max: usize) -> Result<f64> {
    let g0 = be_pmf(0, tau, w);
    if k == 0 {
        return Ok(g0);
    }
    let sum = column_sum(k, w.b(), n_max)?;
    Ok(g0 * tau.value().powi(k as i32) * sum)
}

/// Largest `n` accepted by [`recover_coefficients`].
pub const RECOVERY_MAX_N: usize = 8;

/// Recovers `c_n0 … c_nn` by sampling `q_n(τ)` at `τ = 1 … n+1` and solving
/// the Vandermonde system exactly over the rationals.
pub fn recover_coefficients(n: usize, w: Degeneracy) -> Result<Vec<f64>> {
    if n > RECOVERY_MAX_N {
        return Err(index("n", n as u64, "Vandermonde recovery is limited to n <= 8"));
    }
    let nodes: Vec<BigRational> = (1..=n + 1)
        .map(|t| BigRational::from_integer(BigInt::from(t)))
        .collect();
    let mut values = Vec::with_capacity(n + 1);
    for t in 1..=n + 1 {
        let q = relative_prob(n as u64, PhaseVolume::new(t as f64)?, w);
        values.push(BigRational::from_float(q).ok_or_else(|| Error::Config(format!("non-finite q_{n}({t})")))?);
    }
    let coeffs = solve_vandermonde(&nodes, &values);
    Ok(coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect())
}

/// Solves `Σ_j a_j x_i^j = y_i` exactly by Gaussian elimination.
pub fn solve_vandermonde(nodes: &[BigRational], values: &[BigRational]) -> Vec<BigRational> {
    let m = nodes.len();
    let mut rows: Vec<Vec<BigRational>> = nodes
        .iter()
        .zip(values)
        .map(|(x, y)| {
            let mut row = Vec::with_capacity(m + 1);
            let mut p = BigRational::one();
            for _ in 0..m {
                row.push(p.clone());
                p *= x;
            }
            row.push(y.clone());
            row
        })
        .collect();
    for col in 0..m {
        let pivot = (col..m)
            .find(|&r| !rows[r][col].is_zero())
            .expect("distinct nodes give a regular system");
        rows.swap(col, pivot);
        let head = rows[col][col].clone();
        for v in rows[col].iter_mut() {
            *v /= &head;
        }
        for r in 0..m {
            if r != col && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (v, p) in rows[r].iter_mut().zip(&pivot_row).skip(col) {
                    *v -= &factor * p;
                }
            }
        }
    }
    rows.into_iter().map(|mut r| r.pop().unwrap()).collect()
}
