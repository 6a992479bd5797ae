//! Coefficient recurrences for the scalar solutions' expansions at the
//! origin and for the slow manifold's expansion at infinity, plus series
//! evaluation with optimal truncation.
//!
//! Every scalar solution inside the trapping region has the asymptotic
//! Taylor expansion `y ~ sum_{n>=2} b_n x^n` as x -> 0+, generated uniquely
//! by the differential equation; the series has radius of convergence zero,
//! so evaluation truncates at the smallest term. At infinity the slow
//! manifold expands as `y ~ sum_{n>=-1} rho_n x^{-n}`.

use crate::error::{Error, Result};
use crate::kinetics::Params;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

/// Truncated origin expansion `sum_{n=2}^{order} b_n x^n` for fixed eps.
///
/// Invariants: `b_2 = 1`, `b_3 = 2 - eps`, and for n >= 4
/// `b_n = (n-1-eps) b_{n-1} - eps * sum_{m=2}^{n-2} (n-m) b_m b_{n-m}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OriginSeries {
    eps: f64,
    /// b_2 .. b_order
    coeffs: Vec<f64>,
    order: usize,
}

/// Truncated infinity expansion `sum_{n=-1}^{order} rho_n x^{-n}`.
///
/// Invariants: `rho_{-1} = 1/eps`, `rho_0 = -1/(eps(1+eps))`, and for n >= 1
/// `rho_n = -[rho_{n-1} - eps * sum_{m=1}^{n} (n-m) rho_{m-1} rho_{n-m}]/(1+eps)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfinitySeries {
    eps: f64,
    /// rho_{-1} .. rho_order
    coeffs: Vec<f64>,
    order: i64,
}

/// A partial sum together with where it was truncated and the magnitude of
/// the last included term, which serves as the error proxy for these
/// asymptotic series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticEstimate {
    pub value: f64,
    /// Index n of the last term kept.
    pub truncation_index: i64,
    pub last_term_magnitude: f64,
}

/// Origin coefficients b_2..b_order from the recurrence.
pub fn origin_coeffs(p: &Params, order: usize) -> Result<OriginSeries> {
    if order < 2 {
        return Err(Error::InvalidInput(format!(
            "origin series order must be >= 2, got {order}"
        )));
    }
    let e = p.eps();
    // b[n] holds b_n; indices 0 and 1 stay zero
    let mut b = vec![0.0f64; order + 1];
    b[2] = 1.0;
    if order >= 3 {
        b[3] = 2.0 - e;
    }
    for n in 4..=order {
        let mut conv = 0.0;
        for m in 2..=(n - 2) {
            conv += (n - m) as f64 * b[m] * b[n - m];
        }
        b[n] = (n as f64 - 1.0 - e) * b[n - 1] - e * conv;
    }
    Ok(OriginSeries {
        eps: e,
        coeffs: b[2..].to_vec(),
        order,
    })
}

impl OriginSeries {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// b_n for 2 <= n <= order.
    pub fn coeff(&self, n: usize) -> f64 {
        assert!((2..=self.order).contains(&n), "coefficient index {n}");
        self.coeffs[n - 2]
    }

    /// Partial sum at x with optimal truncation: summation stops before the
    /// first term whose magnitude exceeds the last nonzero term's magnitude.
    pub fn eval(&self, x: f64) -> AsymptoticEstimate {
        let mut value = 0.0;
        let mut last_mag = f64::INFINITY;
        let mut last_index = 2i64;
        let mut xn = x * x;
        for n in 2..=self.order {
            let term = self.coeffs[n - 2] * xn;
            let mag = term.abs();
            if mag > last_mag {
                break;
            }
            value += term;
            last_index = n as i64;
            if mag > 0.0 {
                last_mag = mag;
            }
            xn *= x;
        }
        AsymptoticEstimate {
            value,
            truncation_index: last_index,
            last_term_magnitude: if last_mag.is_finite() { last_mag } else { 0.0 },
        }
    }
}

/// Infinity coefficients rho_{-1}..rho_order from the recurrence.
pub fn infinity_coeffs(p: &Params, order: i64) -> Result<InfinitySeries> {
    if order < -1 {
        return Err(Error::InvalidInput(format!(
            "infinity series order must be >= -1, got {order}"
        )));
    }
    let e = p.eps();
    let len = (order + 2) as usize;
    // r[i] holds rho_{i-1}
    let mut r = vec![0.0f64; len];
    r[0] = 1.0 / e;
    if order >= 0 {
        r[1] = -1.0 / (e * (1.0 + e));
    }
    for n in 1..=order.max(0) as usize {
        if n + 1 >= len {
            break;
        }
        let mut conv = 0.0;
        for m in 1..=n {
            conv += (n - m) as f64 * r[m - 1] * r[n - m + 1];
        }
        r[n + 1] = -(r[n] - e * conv) / (1.0 + e);
    }
    Ok(InfinitySeries {
        eps: e,
        coeffs: r,
        order,
    })
}

impl InfinitySeries {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// rho_n for -1 <= n <= order.
    pub fn coeff(&self, n: i64) -> f64 {
        assert!((-1..=self.order).contains(&n), "coefficient index {n}");
        self.coeffs[(n + 1) as usize]
    }

    /// Partial sum `sum rho_n x^{-n}` with the same truncation rule as the
    /// origin series.
    pub fn eval(&self, x: f64) -> AsymptoticEstimate {
        let mut value = 0.0;
        let mut last_mag = f64::INFINITY;
        let mut last_index = -1i64;
        let mut xn = x; // x^{-n} starting at n = -1
        for n in -1..=self.order {
            let term = self.coeffs[(n + 1) as usize] * xn;
            let mag = term.abs();
            if mag > last_mag {
                break;
            }
            value += term;
            last_index = n;
            if mag > 0.0 {
                last_mag = mag;
            }
            xn /= x;
        }
        AsymptoticEstimate {
            value,
            truncation_index: last_index,
            last_term_magnitude: if last_mag.is_finite() { last_mag } else { 0.0 },
        }
    }
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Origin coefficients b_2..b_order over exact rationals, for a rational eps.
/// Used by the symbolic regeneration check and the CLI's exact rendering.
pub fn origin_coeffs_exact(eps: &BigRational, order: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::zero(); order + 1];
    if order >= 2 {
        b[2] = BigRational::one();
    }
    if order >= 3 {
        b[3] = big(2) - eps;
    }
    for n in 4..=order {
        let mut conv = BigRational::zero();
        for m in 2..=(n - 2) {
            conv += big((n - m) as i64) * &b[m] * &b[n - m];
        }
        b[n] = (big(n as i64 - 1) - eps) * &b[n - 1] - eps * conv;
    }
    b.drain(..2.min(b.len()));
    b
}

/// Infinity coefficients rho_{-1}..rho_order over exact rationals.
pub fn infinity_coeffs_exact(eps: &BigRational, order: i64) -> Vec<BigRational> {
    let len = (order.max(-1) + 2) as usize;
    let mut r = vec![BigRational::zero(); len];
    r[0] = eps.recip();
    if order >= 0 {
        r[1] = -(eps * (BigRational::one() + eps)).recip();
    }
    for n in 1..=order.max(0) as usize {
        if n + 1 >= len {
            break;
        }
        let mut conv = BigRational::zero();
        for m in 1..=n {
            conv += big((n - m) as i64) * &r[m - 1] * &r[n - m + 1];
        }
        r[n + 1] = -(&r[n] - eps * conv) / (BigRational::one() + eps);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn origin_ground_truth() {
        for eps in [0.3, 1.0, 2.0, 2.5] {
            let p = Params::new(eps).unwrap();
            let s = origin_coeffs(&p, 5).unwrap();
            assert_eq!(s.coeff(2), 1.0);
            assert_eq!(s.coeff(3), 2.0 - eps);
        }
        let p = Params::new(1.0).unwrap();
        let s = origin_coeffs(&p, 8).unwrap();
        assert!((s.coeff(4) - 0.0).abs() < 1e-12);
        assert!((s.coeff(5) + 5.0).abs() < 1e-12);
        // b6 = 4*b5 - [4 b2 b4 + 3 b3 b3 + 2 b4 b2] = -20 - 3 = -23
        assert!((s.coeff(6) + 23.0).abs() < 1e-12);
    }

    #[test]
    fn origin_matches_exact_recurrence() {
        let p = Params::new(2.0).unwrap();
        let s = origin_coeffs(&p, 12).unwrap();
        assert_eq!(s.coeff(3), 0.0); // b3 = 2 - eps
        let exact = origin_coeffs_exact(&big_ratio(2, 1), 12);
        for n in 2..=12 {
            let e = exact[n - 2].to_f64().unwrap();
            assert!(
                (s.coeff(n) - e).abs() <= 1e-12 * (1.0 + e.abs()),
                "b_{n}: {} vs {e}",
                s.coeff(n)
            );
        }
    }

    fn big_ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn infinity_ground_truth() {
        for eps in [0.5, 1.0, 2.0] {
            let p = Params::new(eps).unwrap();
            let s = infinity_coeffs(&p, 2).unwrap();
            assert!((s.coeff(-1) - 1.0 / eps).abs() < 1e-15);
            assert!((s.coeff(0) + 1.0 / (eps * (1.0 + eps))).abs() < 1e-15);
            // rho_1 = 1/(eps (1+eps)^2): the (n-m)=0 term drops out at n=1
            let rho1 = 1.0 / (eps * (1.0 + eps) * (1.0 + eps));
            assert!((s.coeff(1) - rho1).abs() < 1e-14);
        }
        let p = Params::new(1.0).unwrap();
        let s = infinity_coeffs(&p, 2).unwrap();
        assert!((s.coeff(-1) - 1.0).abs() < 1e-12);
        assert!((s.coeff(0) + 0.5).abs() < 1e-12);
        assert!((s.coeff(1) - 0.25).abs() < 1e-12);
        assert!((s.coeff(2) + 3.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn infinity_matches_exact_recurrence() {
        let p = Params::new(1.0).unwrap();
        let s = infinity_coeffs(&p, 10).unwrap();
        let exact = infinity_coeffs_exact(&big_ratio(1, 1), 10);
        for n in -1..=10i64 {
            let e = exact[(n + 1) as usize].to_f64().unwrap();
            assert!(
                (s.coeff(n) - e).abs() <= 1e-12 * (1.0 + e.abs()),
                "rho_{n}: {} vs {e}",
                s.coeff(n)
            );
        }
    }

    #[test]
    fn origin_eval_leading_term() {
        let p = Params::new(1.0).unwrap();
        let s = origin_coeffs(&p, 10).unwrap();
        let x = 1e-4;
        let est = s.eval(x);
        assert!((est.value / (x * x) - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn origin_eval_residual_slope() {
        // with the degree-6 truncation, the ODE residual decays like x^7:
        // fitted log-log slope over [1e-3, 1e-2] must exceed N + 0.9 = 6.9
        let p = Params::new(1.0).unwrap();
        let s = origin_coeffs(&p, 6).unwrap();
        let e = 1.0;
        let resid = |x: f64| {
            let y = s.eval(x).value;
            // term-wise derivative of the full stored sum
            let mut yp = 0.0;
            let mut xn = x; // x^{n-1} at n = 2
            for n in 2..=6usize {
                yp += n as f64 * s.coeff(n) * xn;
                xn *= x;
            }
            (e * x * y * yp - x * x * yp - x * x + y + e * x * y).abs()
        };
        let (x0, x1) = (1e-3, 1e-2);
        let slope = (resid(x1).ln() - resid(x0).ln()) / (x1.ln() - x0.ln());
        assert!(slope >= 6.9, "residual slope {slope}");
    }

    #[test]
    fn origin_eval_truncates_divergent_tail() {
        let p = Params::new(1.0).unwrap();
        let s = origin_coeffs(&p, 30).unwrap();
        let est = s.eval(0.5);
        assert!(est.truncation_index < 30, "kept all {} terms", est.truncation_index);
        assert!(est.last_term_magnitude > 0.0);
    }

    #[test]
    fn infinity_eval_limits() {
        let p = Params::new(1.0).unwrap();
        let s = infinity_coeffs(&p, 8).unwrap();
        // value - x/eps -> rho_0
        let est = s.eval(1e4);
        assert!((est.value - 1e4 - s.coeff(0)).abs() <= 1e-3);
        // inside the (Y, alpha) corridor at x = 50
        let y = crate::kinetics::inflection_curve(&p, 50.0).unwrap();
        let a = crate::kinetics::alpha(&p, 50.0);
        let v = s.eval(50.0).value;
        assert!(y < v && v < a, "{y} < {v} < {a}");
    }

    #[test]
    fn infinity_eval_residual_slope() {
        let p = Params::new(1.0).unwrap();
        let s = infinity_coeffs(&p, 5).unwrap();
        let e = 1.0;
        let resid = |x: f64| {
            let y = s.eval(x).value;
            let mut yp = 0.0;
            for n in -1..=5i64 {
                yp += -(n as f64) * s.coeff(n) * x.powi(-(n as i32) - 1);
            }
            (e * x * y * yp - x * x * yp - x * x + y + e * x * y).abs()
        };
        let (x0, x1) = (1e2, 1e3);
        let slope = (resid(x1).ln() - resid(x0).ln()) / (x1.ln() - x0.ln());
        assert!(slope <= -4.0, "residual slope {slope}");
    }

    #[test]
    fn order_validation() {
        let p = Params::new(1.0).unwrap();
        assert!(origin_coeffs(&p, 1).is_err());
        assert!(origin_coeffs(&p, 2).is_ok());
        assert!(infinity_coeffs(&p, -2).is_err());
        assert!(infinity_coeffs(&p, -1).is_ok());
    }
}
