//! Closed-form objects of the planar Lindemann system: the vector field, the
//! scalar slope field, the isocline family, the fence-switch function xi and
//! its inverse, the concavity auxiliaries h and p, the inflection curve, and
//! the slow-tangent eigenstructure.
//!
//! The dimensionless planar system is
//!
//! ```text
//! x' = -x^2 + eps*x*y
//! y' =  x^2 - (1 + eps*x)*y
//! ```
//!
//! restricted to the nonnegative quadrant. All operations here are pure
//! closed-form evaluations (plus one guarded root solve for the inverse of
//! xi); nothing is integrated.

use crate::error::{Error, Result};
use serde::Serialize;

/// The single dimensionless parameter of the system, `eps = k_{-1}/k_1 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    eps: f64,
}

impl Params {
    pub fn new(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps.is_finite() {
            Ok(Params { eps })
        } else {
            Err(Error::OutOfDomain {
                what: "eps",
                value: eps,
            })
        }
    }

    #[inline]
    pub fn eps(&self) -> f64 {
        self.eps
    }
}

/// A point (x, y) in the nonnegative quadrant: scaled reactant and complex
/// concentrations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x >= 0.0 && y >= 0.0 && x.is_finite() && y.is_finite() {
            Ok(PhasePoint { x, y })
        } else {
            Err(Error::InvalidInput(format!(
                "phase point ({x}, {y}) must lie in the nonnegative quadrant"
            )))
        }
    }
}

/// An isocline slope parameter c. The slope field equals c along the isocline
/// `y = F(x, c)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct SlopeValue(pub f64);

impl SlopeValue {
    #[inline]
    pub fn value(&self) -> f64 {
        self.0
    }
}

impl From<f64> for SlopeValue {
    fn from(c: f64) -> Self {
        SlopeValue(c)
    }
}

/// Linearization data at a phase point: trace, determinant, the two real
/// eigenvalues and the slopes of the corresponding eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentData {
    pub trace: f64,
    pub det: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub sigma_plus: f64,
    pub sigma_minus: f64,
}

/// Which named curve an isocline evaluation refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IsoclineKind {
    /// `H(x) = x^2/(1+eps*x)`, the y' = 0 locus (quasi-steady-state manifold).
    Horizontal,
    /// `V(x) = x/eps`, the x' = 0 locus (rapid-equilibrium manifold).
    Vertical,
    /// `alpha(x) = F(x, 1/eps)`, the thinnest strong lower fence.
    Alpha,
    /// `F(x, c) = x^2/(K(c)+eps*x)`, the isocline for slope c.
    Slope(SlopeValue),
}

/// Band classification of a point against the computable boundary curves
/// H, the inflection curve, alpha and V (ordered bottom to top).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionLabel {
    BelowH,
    OnH,
    BetweenHAndY,
    OnY,
    BetweenYAndAlpha,
    OnAlpha,
    BetweenAlphaAndV,
    OnV,
    AboveV,
}

/// Result of nondimensionalizing raw rate constants and concentrations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Nondimensionalized {
    pub params: Params,
    pub initial: PhasePoint,
    /// Dimensional time is recovered as `t = time_scale * tau`.
    pub time_scale: f64,
}

/// The planar vector field `(x', y')` at a point.
#[inline]
pub fn vector_field(p: &Params, pt: PhasePoint) -> (f64, f64) {
    let e = p.eps();
    let (x, y) = (pt.x, pt.y);
    (-x * x + e * x * y, x * x - (1.0 + e * x) * y)
}

/// Denominator of the scalar slope field, `-x^2 + eps*x*y = x*(eps*y - x)`.
#[inline]
fn slope_denominator(p: &Params, pt: PhasePoint) -> f64 {
    pt.x * (p.eps() * pt.y - pt.x)
}

/// The scalar slope field `f(x, y) = (x^2 - (1+eps*x)y)/(-x^2 + eps*x*y)`.
///
/// Singular on the vertical isocline and on the y-axis.
pub fn scalar_slope(p: &Params, pt: PhasePoint) -> Result<f64> {
    let den = slope_denominator(p, pt);
    if den == 0.0 {
        return Err(Error::DenominatorZero { x: pt.x, y: pt.y });
    }
    let num = pt.x * pt.x - (1.0 + p.eps() * pt.x) * pt.y;
    Ok(num / den)
}

/// `K(c) = 1/(1+c)`, strictly decreasing on (-1, inf).
pub fn k_of_c(c: SlopeValue) -> Result<f64> {
    if c.0 == -1.0 {
        return Err(Error::PoleAtMinusOne);
    }
    Ok(1.0 / (1.0 + c.0))
}

/// `H(x) = x^2/(1+eps*x)`.
#[inline]
pub fn horizontal(p: &Params, x: f64) -> f64 {
    x * x / (1.0 + p.eps() * x)
}

/// `V(x) = x/eps`.
#[inline]
pub fn vertical(p: &Params, x: f64) -> f64 {
    x / p.eps()
}

/// `K(1/eps) = eps/(1+eps)`, the K value of the alpha isocline.
#[inline]
pub fn k_alpha(p: &Params) -> f64 {
    p.eps() / (1.0 + p.eps())
}

/// `alpha(x) = x^2/(K(1/eps)+eps*x)`, the isocline for slope 1/eps.
#[inline]
pub fn alpha(p: &Params, x: f64) -> f64 {
    x * x / (k_alpha(p) + p.eps() * x)
}

/// `F(x, c) = x^2/(K(c)+eps*x)` for c != -1, away from the pole.
pub fn slope_isocline(p: &Params, c: SlopeValue, x: f64) -> Result<f64> {
    let k = k_of_c(c)?;
    let den = k + p.eps() * x;
    if den == 0.0 {
        return Err(Error::PoleAtX { c: c.0, x });
    }
    Ok(x * x / den)
}

/// Evaluate one of the named isoclines at x > 0.
pub fn isocline(p: &Params, kind: IsoclineKind, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::OutOfDomain { what: "x", value: x });
    }
    match kind {
        IsoclineKind::Horizontal => Ok(horizontal(p, x)),
        IsoclineKind::Vertical => Ok(vertical(p, x)),
        IsoclineKind::Alpha => Ok(alpha(p, x)),
        IsoclineKind::Slope(c) => slope_isocline(p, c, x),
    }
}

/// Closed-form x-derivative of the isocline for slope c:
/// `w'(x) = x*(2K + eps*x)/(K + eps*x)^2`.
pub fn isocline_derivative(p: &Params, c: SlopeValue, x: f64) -> Result<f64> {
    let k = k_of_c(c)?;
    let den = k + p.eps() * x;
    if den == 0.0 {
        return Err(Error::PoleAtX { c: c.0, x });
    }
    Ok(x * (2.0 * k + p.eps() * x) / (den * den))
}

/// The fence-switch location `xi(c) = (K(c)/eps)*(1/sqrt(1-eps*c) - 1)` for
/// c in (0, 1/eps). The isocline for slope c is a strong lower fence left of
/// x = xi(c) and a strong upper fence right of it.
///
/// Evaluated in the rationalized form `c*K(c)/(sqrt(s)*(1+sqrt(s)))` with
/// s = 1 - eps*c, which keeps full relative accuracy as c -> 0+.
pub fn xi(p: &Params, c: SlopeValue) -> Result<f64> {
    let e = p.eps();
    if !(c.0 > 0.0 && c.0 < 1.0 / e) {
        return Err(Error::OutOfDomain {
            what: "c",
            value: c.0,
        });
    }
    let k = 1.0 / (1.0 + c.0);
    let rs = (1.0 - e * c.0).sqrt();
    Ok(c.0 * k / (rs * (1.0 + rs)))
}

/// Analytic derivative of xi, used for Newton polishing of the inverse.
fn xi_derivative(p: &Params, c: f64) -> f64 {
    let e = p.eps();
    let k = 1.0 / (1.0 + c);
    let s = 1.0 - e * c;
    -k * k / e * (1.0 / s.sqrt() - 1.0) + k / 2.0 * s.powf(-1.5)
}

/// xi evaluated through s = 1 - eps*c, which is exact near the c -> 1/eps
/// endpoint where forming s from c would cancel.
fn xi_of_s(p: &Params, s: f64) -> f64 {
    let e = p.eps();
    let c = (1.0 - s) / e;
    let rs = s.sqrt();
    c / (1.0 + c) / (rs * (1.0 + rs))
}

/// Inverse of xi with the default relative tolerance 1e-12.
pub fn xi_inverse(p: &Params, x: f64) -> Result<SlopeValue> {
    xi_inverse_with_tol(p, x, 1e-12)
}

/// Unique c in (0, 1/eps) with xi(c) = x, to `|xi(c) - x| <= rel_tol * x`.
///
/// Bracketed bisection (run on ln(1 - eps*c) so both endpoints are resolved)
/// followed by Newton polish steps. xi is strictly increasing and analytic,
/// so the bracket is guaranteed.
pub fn xi_inverse_with_tol(p: &Params, x: f64, rel_tol: f64) -> Result<SlopeValue> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::OutOfDomain { what: "x", value: x });
    }
    let e = p.eps();
    // bracket (delta, 1/eps - delta) expressed in s = 1 - eps*c
    let delta = 1e-14 / e;
    let (mut lo, mut hi) = ((e * delta).ln(), (1.0 - e * delta).ln());
    // xi is decreasing in s: ln-s bisection on xi(s) - x
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if xi_of_s(p, mid.exp()) > x {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    let mut c = (1.0 - (0.5 * (lo + hi)).exp()) / e;
    for _ in 0..3 {
        let fx = xi(p, SlopeValue(c))? - x;
        let step = fx / xi_derivative(p, c);
        let next = c - step;
        if next > 0.0 && next < 1.0 / e {
            c = next;
        }
    }
    let residual = (xi(p, SlopeValue(c))? - x).abs();
    debug_assert!(
        residual <= rel_tol * x.max(1e-300) || residual <= f64::EPSILON,
        "xi_inverse residual {residual} at x = {x}"
    );
    Ok(SlopeValue(c))
}

/// Concavity auxiliary `h(x,y) = x^2 f(x,y) + y(eps*y - 2x)`. Off the
/// vertical isocline, sign(y'') = sign(h) along scalar solutions.
pub fn h_aux(p: &Params, pt: PhasePoint) -> Result<f64> {
    let f = scalar_slope(p, pt)?;
    Ok(pt.x * pt.x * f + pt.y * (p.eps() * pt.y - 2.0 * pt.x))
}

/// Concavity auxiliary `p(x,y) = 1/(x^2 (eps*y - x)^2) > 0`, the positive
/// factor in y'' = p*h.
pub fn p_aux(p: &Params, pt: PhasePoint) -> Result<f64> {
    let d = pt.x * (p.eps() * pt.y - pt.x);
    if d == 0.0 {
        return Err(Error::DenominatorZero { x: pt.x, y: pt.y });
    }
    Ok(1.0 / (d * d))
}

/// The inflection curve between H and the slow manifold:
/// `Y(x) = F(x, xi^{-1}(x))`. Satisfies H(x) < Y(x) < alpha(x) for x > 0.
pub fn inflection_curve(p: &Params, x: f64) -> Result<f64> {
    let c = xi_inverse(p, x)?;
    slope_isocline(p, c, x)
}

/// All real roots, ascending, of the inflection cubic
/// `eps^2 y^3 - 3 eps x y^2 + (2x^2 - eps x^2 - x) y + x^3 = 0`.
///
/// For x > 0 there are three distinct real roots: one negative (discarded by
/// callers), the inflection curve between H and alpha, and one branch above V.
/// Solved in closed form (trigonometric method on the depressed cubic), then
/// each root gets one Newton polish.
pub fn inflection_cubic_roots(p: &Params, x: f64) -> Result<[f64; 3]> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::OutOfDomain { what: "x", value: x });
    }
    let e = p.eps();
    // depressed form z^3 + a z + b with y = z + x/eps:
    //   a = -x(1 + (1+eps)x)/eps^2,  b = -x^2/eps^3
    let a = -x * (1.0 + (1.0 + e) * x) / (e * e);
    let b = -x * x / (e * e * e);

    let disc = -4.0 * a * a * a - 27.0 * b * b;
    let scale = 4.0 * a.abs().powi(3) + 27.0 * b * b;
    if disc <= 1e-12 * scale {
        return Err(Error::DegenerateRoots {
            x,
            discriminant: disc,
        });
    }

    let m = 2.0 * (-a / 3.0).sqrt();
    let arg = (3.0 * b / (a * m)).clamp(-1.0, 1.0);
    let theta = arg.acos() / 3.0;
    let mut roots = [0.0f64; 3];
    for (k, r) in roots.iter_mut().enumerate() {
        let z = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
        // one Newton step on the depressed cubic
        let g = z * z * z + a * z + b;
        let dg = 3.0 * z * z + a;
        let z = if dg != 0.0 { z - g / dg } else { z };
        *r = z + x / e;
    }
    roots.sort_by(|u, v| u.partial_cmp(v).unwrap());
    Ok(roots)
}

/// Trace, determinant, eigenvalues and eigenvector slopes of the Jacobian
/// at a point with x > 0. The discriminant satisfies
/// `tau^2 - 4 Delta >= 4 eps x > 0`, so the eigenvalues are real and distinct.
pub fn slow_tangent(p: &Params, pt: PhasePoint) -> Result<TangentData> {
    if !(pt.x > 0.0) {
        return Err(Error::OutOfDomain {
            what: "x",
            value: pt.x,
        });
    }
    let e = p.eps();
    let (x, y) = (pt.x, pt.y);
    let g11 = -2.0 * x + e * y;
    let g12 = e * x;
    let trace = -(e + 2.0) * x + e * y - 1.0;
    let det = 2.0 * x - e * y;
    let disc = trace * trace - 4.0 * det;
    debug_assert!(disc >= 4.0 * e * x - 1e-12 * (1.0 + trace * trace));
    let root = disc.sqrt();
    let lambda_plus = 0.5 * (trace + root);
    let lambda_minus = 0.5 * (trace - root);
    Ok(TangentData {
        trace,
        det,
        lambda_plus,
        lambda_minus,
        sigma_plus: (lambda_plus - g11) / g12,
        sigma_minus: (lambda_minus - g11) / g12,
    })
}

/// Nondimensionalize rate constants and initial concentrations:
/// `eps = km1/k1`, `x0 = (k1/k2) a0`, `y0 = (k1/k2) b0`, `t = k2 tau`.
pub fn nondimensionalize(
    k1: f64,
    km1: f64,
    k2: f64,
    a0: f64,
    b0: f64,
) -> Result<Nondimensionalized> {
    for (name, v) in [("k1", k1), ("km1", km1), ("k2", k2)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::NonpositiveRate { name, value: v });
        }
    }
    if a0 < 0.0 || b0 < 0.0 {
        return Err(Error::InvalidInput(format!(
            "concentrations must be nonnegative, got a0 = {a0}, b0 = {b0}"
        )));
    }
    Ok(Nondimensionalized {
        params: Params::new(km1 / k1)?,
        initial: PhasePoint::new(k1 / k2 * a0, k1 / k2 * b0)?,
        time_scale: k2,
    })
}

/// Classify a point against the boundary curves H, Y, alpha, V. Points within
/// `band` (absolute, in y) of a curve get the corresponding On* label; the
/// lowest matching curve wins.
pub fn classify_region(p: &Params, pt: PhasePoint, band: f64) -> Result<RegionLabel> {
    if !(pt.x > 0.0) {
        return Err(Error::OutOfDomain {
            what: "x",
            value: pt.x,
        });
    }
    let h = horizontal(p, pt.x);
    let yc = inflection_curve(p, pt.x)?;
    let a = alpha(p, pt.x);
    let v = vertical(p, pt.x);
    let y = pt.y;
    let label = if (y - h).abs() <= band {
        RegionLabel::OnH
    } else if (y - yc).abs() <= band {
        RegionLabel::OnY
    } else if (y - a).abs() <= band {
        RegionLabel::OnAlpha
    } else if (y - v).abs() <= band {
        RegionLabel::OnV
    } else if y < h {
        RegionLabel::BelowH
    } else if y < yc {
        RegionLabel::BetweenHAndY
    } else if y < a {
        RegionLabel::BetweenYAndAlpha
    } else if y < v {
        RegionLabel::BetweenAlphaAndV
    } else {
        RegionLabel::AboveV
    };
    Ok(label)
}
