//! Long-time machinery: the Lambert W function (principal branch), the
//! closed-form comparison solution of `u' = -u^2/(1+a*u)`, and the
//! leading-order decay law of planar solutions.

use crate::error::{Error, Result};
use crate::kinetics::Params;

/// Principal-branch Lambert W: the w >= -1 with `w * e^w = z`, defined for
/// z >= -1/e. Halley iteration from a two-regime initial guess: a series
/// start near zero, `ln z - ln ln z` for large z, and the branch-point
/// square-root expansion near -1/e.
pub fn lambert_w(z: f64) -> Result<f64> {
    let branch = -(-1.0f64).exp(); // -1/e
    if !(z >= branch) || !z.is_finite() {
        return Err(Error::OutOfDomain { what: "z", value: z });
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut w = if z > std::f64::consts::E {
        let l = z.ln();
        l - l.ln()
    } else if z > -0.25 {
        // w = z(1 - z + 3z^2/2 - ...) truncated; Halley cleans it up
        z * (1.0 - z + 1.5 * z * z) / (1.0 + z * z.abs().min(1.0))
    } else {
        // branch-point expansion w = -1 + p - p^2/3 + 11 p^3/72
        let p = (2.0 * (std::f64::consts::E * z + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    };
    for _ in 0..40 {
        let ew = w.exp();
        let f = w * ew - z;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * w.abs().max(1e-300) {
            break;
        }
    }
    Ok(w)
}

/// `W(e^l)` computed without forming `e^l`, i.e. the w > 0 solving
/// `w + ln w = l`. For moderate `l` it defers to [`lambert_w`]; for large
/// `l` it runs Halley directly on `g(w) = w + ln w - l`.
pub fn lambert_w_log(l: f64) -> Result<f64> {
    if !l.is_finite() {
        return Err(Error::OutOfDomain { what: "l", value: l });
    }
    if l <= 500.0 {
        return lambert_w(l.exp());
    }
    let mut w = l - l.ln();
    for _ in 0..40 {
        let g = w + w.ln() - l;
        if g == 0.0 {
            break;
        }
        let gp = 1.0 + 1.0 / w;
        let gpp = -1.0 / (w * w);
        let step = g / (gp - g * gpp / (2.0 * gp));
        w -= step;
        if step.abs() <= 1e-16 * w {
            break;
        }
    }
    Ok(w)
}

/// The comparison solution `phi(t; a, t0, u0)` of the scalar initial value
/// problem `u' = -u^2/(1 + a*u)`, `u(t0) = u0`:
///
/// ```text
/// phi = 1 / ( a * W( [1/(a*u0) * e^{1/(a*u0)}] * e^{(t-t0)/a} ) )
/// ```
///
/// The W argument is always assembled in the log domain, since `e^{(t-t0)/a}`
/// overflows for t - t0 around 700 a.
pub fn phi_comparison(t: f64, a: f64, t0: f64, u0: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::OutOfDomain { what: "a", value: a });
    }
    if !(u0 > 0.0) {
        return Err(Error::OutOfDomain { what: "u0", value: u0 });
    }
    if !(t >= t0) || t0 < 0.0 {
        return Err(Error::OutOfDomain { what: "t", value: t });
    }
    let au0 = a * u0;
    let l = -au0.ln() + 1.0 / au0 + (t - t0) / a;
    let w = lambert_w_log(l)?;
    Ok(1.0 / (a * w))
}

/// Leading-order behaviour of planar solutions with x0 > 0 as t -> infinity:
///
/// ```text
/// x(t) = 1/t + eps*ln(t)/t^2 + o(ln t / t^2)
/// y(t) = 1/t^2 + 2*eps*ln(t)/t^3 + o(ln t / t^3)
/// ```
///
/// Returns the two truncated leading expressions; callers supply t > 1.
pub fn longtime_leading(p: &Params, t: f64) -> (f64, f64) {
    let e = p.eps();
    let l = t.ln();
    (1.0 / t + e * l / (t * t), 1.0 / (t * t) + 2.0 * e * l / (t * t * t))
}
