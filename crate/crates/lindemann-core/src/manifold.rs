//! Numerical computation of the slow manifold with rigorous two-sided
//! brackets.
//!
//! The slow manifold is the unique scalar solution between the horizontal
//! isocline and the alpha isocline for all x > 0; it is bracketed below by
//! the inflection curve and above by alpha. Two independent methods compute
//! it: a backward sweep (every backward solution contracts onto the manifold
//! at rate at least eps^2 per unit x) and forward shooting classified by
//! which fence a candidate exits through. A blended evaluator splices the
//! origin series, a monotone-cubic table interpolant and the infinity series.

use crate::error::{Error, Result};
use crate::integrate::{scalar_drive, IntegratorConfig, SolveStatus};
use crate::kinetics::{self, Params};
use crate::series::{InfinitySeries, OriginSeries};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ManifoldMethod {
    Backward,
    Bisection,
    Blended,
}

/// Grid of slow-manifold estimates with per-point rigorous brackets
/// (inflection curve below, alpha isocline above) and error bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlowManifoldTable {
    pub eps: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Lower bracket: the inflection curve.
    pub lower: Vec<f64>,
    /// Upper bracket: the alpha isocline.
    pub upper: Vec<f64>,
    pub method: ManifoldMethod,
    pub est_error: Vec<f64>,
    /// True where the raw estimate was nudged back inside its bracket.
    pub clipped: Vec<bool>,
}

/// The default table grid: 200 log-spaced points on [1e-2, 1e2].
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-2, 1e2, 200)
}

/// n log-spaced points from a to b inclusive.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > a && n >= 2);
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Rigorous bracket for the slow manifold at x: (inflection curve, alpha).
pub fn bracket(p: &Params, x: f64) -> Result<(f64, f64)> {
    let lo = kinetics::inflection_curve(p, x)?;
    Ok((lo, kinetics::alpha(p, x)))
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("grid must be nonempty".into()));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidInput("grid must be strictly increasing".into()));
        }
    }
    if !(grid[0] > 0.0) {
        return Err(Error::InvalidInput("grid must be positive".into()));
    }
    Ok(())
}

/// Clip a raw estimate into its open bracket. Returns the stored value, the
/// clipped flag, or an error when the excursion exceeds the error bound.
fn clip_to_bracket(
    x: f64,
    raw: f64,
    lower: f64,
    upper: f64,
    est_error: f64,
) -> Result<(f64, bool)> {
    let width = upper - lower;
    // margin above ln/exp roundoff so interpolation at knots stays inside
    let nudge = (width * 1e-9).max(lower.abs() * 4.0 * f64::EPSILON).min(0.25 * width);
    if raw > lower && raw < upper {
        return Ok((raw.clamp(lower + nudge, upper - nudge), false));
    }
    let excess = if raw <= lower { lower - raw } else { raw - upper };
    if excess > est_error {
        return Err(Error::BracketViolation {
            x,
            value: raw,
            lower,
            upper,
            excess,
        });
    }
    Ok((raw.clamp(lower + nudge, upper - nudge), true))
}

/// Backward-sweep slow-manifold table over an ascending grid.
///
/// Starts at `X_s = max(grid) + max(10, 40/eps^2)` from the middle of the
/// (H, alpha) corridor and integrates the scalar equation leftward, landing
/// exactly on each grid point. The per-point error bound combines the
/// antifunnel contraction `(alpha - H)(X_s) * exp(-eps^2 (X_s - x))` with a
/// 10*rtol integration allowance. Values are clipped to their brackets and
/// flagged; an excursion beyond the bound is a BracketViolation.
pub fn compute_backward(
    p: &Params,
    grid: &[f64],
    cfg: &IntegratorConfig,
) -> Result<SlowManifoldTable> {
    compute_backward_from(p, grid, cfg, 0.5)
}

/// Backward sweep starting at `y = H + start_fraction * (alpha - H)`;
/// `compute_backward` uses 0.5. Start-point insensitivity is part of the
/// method's contract (the contraction factor is ~4e-18 by construction).
pub(crate) fn compute_backward_from(
    p: &Params,
    grid: &[f64],
    cfg: &IntegratorConfig,
    start_fraction: f64,
) -> Result<SlowManifoldTable> {
    validate_grid(grid)?;
    let e = p.eps();
    let x_max = *grid.last().unwrap();
    let x_start = x_max + (40.0 / (e * e)).max(10.0);
    let h_s = kinetics::horizontal(p, x_start);
    let a_s = kinetics::alpha(p, x_start);
    let y_start = h_s + start_fraction * (a_s - h_s);
    let corridor = a_s - h_s;

    let mut hits: Vec<(f64, f64)> = Vec::with_capacity(grid.len());
    let landings: Vec<f64> = grid.iter().rev().copied().collect();
    let curve = scalar_drive(
        p,
        x_start,
        y_start,
        grid[0],
        cfg,
        &landings,
        |x, y| hits.push((x, y)),
        |_, _, _, _| None,
    )?;
    match curve.status {
        SolveStatus::Completed => {}
        SolveStatus::MaxSteps => return Err(Error::MaxSteps { t: curve.last().0 }),
        SolveStatus::Diverged => return Err(Error::Diverged { t: curve.last().0 }),
        SolveStatus::SingularityApproached | SolveStatus::LeftDomain => {
            return Err(Error::SingularityApproached { x: curve.last().0 })
        }
    }
    if hits.len() != grid.len() {
        return Err(Error::InvalidInput(format!(
            "backward sweep recorded {} of {} grid points",
            hits.len(),
            grid.len()
        )));
    }
    hits.reverse();

    let mut table = SlowManifoldTable {
        eps: e,
        grid: grid.to_vec(),
        values: Vec::with_capacity(grid.len()),
        lower: Vec::with_capacity(grid.len()),
        upper: Vec::with_capacity(grid.len()),
        method: ManifoldMethod::Backward,
        est_error: Vec::with_capacity(grid.len()),
        clipped: Vec::with_capacity(grid.len()),
    };
    for (&x, &(hx, raw)) in grid.iter().zip(hits.iter()) {
        debug_assert_eq!(x, hx);
        let (lo, hi) = bracket(p, x)?;
        let est = corridor * (-e * e * (x_start - x)).exp() + 10.0 * cfg.rtol;
        let (v, was_clipped) = clip_to_bracket(x, raw, lo, hi, est)?;
        table.values.push(v);
        table.lower.push(lo);
        table.upper.push(hi);
        table.est_error.push(est);
        table.clipped.push(was_clipped);
    }
    Ok(table)
}

/// Which side of the slow manifold a shooting candidate falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Below,
    Above,
    Undecided,
}

/// Classify a candidate (x0, y0) by integrating rightward over `span`:
/// solutions below the manifold exit the antifunnel through H, solutions
/// above exit through alpha.
pub(crate) fn classify_candidate(
    p: &Params,
    x0: f64,
    y0: f64,
    span: f64,
    cfg: &IntegratorConfig,
) -> Result<Side> {
    if y0 <= kinetics::horizontal(p, x0) {
        return Ok(Side::Below);
    }
    if y0 >= kinetics::alpha(p, x0) {
        return Ok(Side::Above);
    }
    let mut side = Side::Undecided;
    let curve = scalar_drive(
        p,
        x0,
        y0,
        x0 + span,
        cfg,
        &[],
        |_, _| {},
        |_, _, x, y| {
            if y <= kinetics::horizontal(p, x) {
                side = Side::Below;
                Some(SolveStatus::Completed)
            } else if y >= kinetics::alpha(p, x) {
                side = Side::Above;
                Some(SolveStatus::Completed)
            } else {
                None
            }
        },
    )?;
    match curve.status {
        SolveStatus::Completed => Ok(side),
        SolveStatus::MaxSteps => Err(Error::Undecided { x: x0 }),
        SolveStatus::Diverged => Err(Error::Diverged { t: curve.last().0 }),
        // exits through H reach y = 0 territory only after classification
        SolveStatus::LeftDomain => Ok(Side::Below),
        SolveStatus::SingularityApproached => Ok(Side::Above),
    }
}

/// Slow-manifold value at x0 by bisection shooting to the requested
/// y-tolerance. Candidates start inside the rigorous bracket; an undecided
/// classification doubles the forward span (default `max(5, 10/eps)`), and
/// a tie at the largest span shrinks the interval toward its midpoint.
pub fn compute_bisection(
    p: &Params,
    x0: f64,
    tol: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    if !(x0 > 0.0) {
        return Err(Error::OutOfDomain { what: "x0", value: x0 });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol = {tol} must be positive")));
    }
    let base_span = (10.0 / p.eps()).max(5.0);
    let max_span = base_span * 256.0;
    let (mut lo, mut hi) = bracket(p, x0)?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let mut span = base_span;
        let side = loop {
            match classify_candidate(p, x0, mid, span, cfg)? {
                Side::Undecided if span < max_span => span *= 2.0,
                decided => break decided,
            }
        };
        match side {
            Side::Below => lo = mid,
            Side::Above => hi = mid,
            Side::Undecided => {
                // tie at max span: the midpoint is within contraction reach
                // of the manifold; shrink toward it
                lo = 0.5 * (lo + mid);
                hi = 0.5 * (hi + mid);
            }
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bisection-based table over an ascending grid (columns are independent and
/// run in parallel).
pub fn compute_bisection_table(
    p: &Params,
    grid: &[f64],
    tol: f64,
    cfg: &IntegratorConfig,
) -> Result<SlowManifoldTable> {
    validate_grid(grid)?;
    let raws: Vec<Result<f64>> = grid
        .par_iter()
        .map(|&x| compute_bisection(p, x, tol, cfg))
        .collect();
    let mut table = SlowManifoldTable {
        eps: p.eps(),
        grid: grid.to_vec(),
        values: Vec::with_capacity(grid.len()),
        lower: Vec::with_capacity(grid.len()),
        upper: Vec::with_capacity(grid.len()),
        method: ManifoldMethod::Bisection,
        est_error: Vec::with_capacity(grid.len()),
        clipped: Vec::with_capacity(grid.len()),
    };
    for (&x, raw) in grid.iter().zip(raws) {
        let raw = raw?;
        let (lo, hi) = bracket(p, x)?;
        let est = tol + 10.0 * cfg.rtol;
        let (v, was_clipped) = clip_to_bracket(x, raw, lo, hi, est)?;
        table.values.push(v);
        table.lower.push(lo);
        table.upper.push(hi);
        table.est_error.push(est);
        table.clipped.push(was_clipped);
    }
    Ok(table)
}

/// Monotone cubic (Fritsch-Carlson) interpolant on strictly increasing data.
#[derive(Debug, Clone, PartialEq, Serialize)]
struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    tangents: Vec<f64>,
}

impl MonotoneCubic {
    fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2);
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = ys
            .windows(2)
            .zip(&h)
            .map(|(w, &hi)| (w[1] - w[0]) / hi)
            .collect();
        let mut m = vec![0.0; n];
        m[0] = endpoint_tangent(h[0], h.get(1).copied().unwrap_or(h[0]), d[0], d.get(1).copied().unwrap_or(d[0]));
        m[n - 1] = endpoint_tangent(
            h[n - 2],
            if n >= 3 { h[n - 3] } else { h[n - 2] },
            d[n - 2],
            if n >= 3 { d[n - 3] } else { d[n - 2] },
        );
        for i in 1..n - 1 {
            if d[i - 1] * d[i] <= 0.0 {
                m[i] = 0.0;
            } else {
                // Fritsch-Butland weighted harmonic mean
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        MonotoneCubic {
            xs,
            ys,
            tangents: m,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(i) => return self.ys[i],
            Err(i) => i - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.tangents[i] * h, self.tangents[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }
}

/// One-sided three-point endpoint tangent with the usual shape-preserving
/// clamps.
fn endpoint_tangent(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if m.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        m
    }
}

/// Blended slow-manifold evaluator: origin series below `x_lo`, monotone
/// cubic interpolation of the table (in log-log coordinates) on
/// `[x_lo, x_hi]`, infinity series above `x_hi`. Construction verifies the
/// three representations agree to 1e-6 at the seams.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlowManifold {
    params: Params,
    table: SlowManifoldTable,
    origin: OriginSeries,
    infinity: InfinitySeries,
    x_lo: f64,
    x_hi: f64,
    interp: MonotoneCubic,
}

pub const SEAM_TOL: f64 = 1e-6;

impl SlowManifold {
    /// Default seams: 1e-2 and 1e2 (intersected with the table range).
    pub fn new(
        params: Params,
        table: SlowManifoldTable,
        origin: OriginSeries,
        infinity: InfinitySeries,
    ) -> Result<Self> {
        Self::with_seams(params, table, origin, infinity, 1e-2, 1e2)
    }

    pub fn with_seams(
        params: Params,
        table: SlowManifoldTable,
        origin: OriginSeries,
        infinity: InfinitySeries,
        x_lo: f64,
        x_hi: f64,
    ) -> Result<Self> {
        if table.grid.len() < 2 {
            return Err(Error::InvalidInput(
                "slow-manifold table needs at least two grid points".into(),
            ));
        }
        let x_lo = x_lo.max(table.grid[0]);
        let x_hi = x_hi.min(*table.grid.last().unwrap());
        if !(x_lo < x_hi) {
            return Err(Error::InvalidInput(format!(
                "seams must be ordered: x_lo = {x_lo}, x_hi = {x_hi}"
            )));
        }
        let interp = MonotoneCubic::new(
            table.grid.iter().map(|v| v.ln()).collect(),
            table.values.iter().map(|v| v.ln()).collect(),
        );
        let m = SlowManifold {
            params,
            table,
            origin,
            infinity,
            x_lo,
            x_hi,
            interp,
        };
        for (x, alt) in [
            (m.x_lo, m.origin.eval(m.x_lo).value),
            (m.x_hi, m.infinity.eval(m.x_hi).value),
        ] {
            let mismatch = (m.interp_at(x) - alt).abs();
            if mismatch > SEAM_TOL {
                return Err(Error::SeamMismatch {
                    x,
                    mismatch,
                    tol: SEAM_TOL,
                });
            }
        }
        Ok(m)
    }

    fn interp_at(&self, x: f64) -> f64 {
        self.interp.eval(x.ln()).exp()
    }

    /// Slow-manifold estimate at any x > 0.
    pub fn eval(&self, x: f64) -> f64 {
        if x < self.x_lo {
            self.origin.eval(x).value
        } else if x > self.x_hi {
            self.infinity.eval(x).value
        } else {
            self.interp_at(x)
        }
    }

    pub fn table(&self) -> &SlowManifoldTable {
        &self.table
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn seams(&self) -> (f64, f64) {
        (self.x_lo, self.x_hi)
    }
}

/// One-shot blended evaluation; builds the evaluator (with its seam checks)
/// and evaluates. Build a [`SlowManifold`] once when evaluating repeatedly.
pub fn evaluate(
    p: &Params,
    x: f64,
    table: &SlowManifoldTable,
    origin: &OriginSeries,
    infinity: &InfinitySeries,
) -> Result<f64> {
    let m = SlowManifold::new(*p, table.clone(), origin.clone(), infinity.clone())?;
    Ok(m.eval(x))
}

/// Convenience builder: backward table on the default grid plus series of
/// the given orders, blended.
pub fn build_default(p: &Params, cfg: &IntegratorConfig) -> Result<SlowManifold> {
    let table = compute_backward(p, &default_grid(), cfg)?;
    let origin = crate::series::origin_coeffs(p, 12)?;
    let infinity = crate::series::infinity_coeffs(p, 12)?;
    SlowManifold::new(*p, table, origin, infinity)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_at_one() {
        let p = Params::new(1.0).unwrap();
        let (lo, hi) = bracket(&p, 1.0).unwrap();
        assert!((lo - 0.652704).abs() < 1e-5);
        assert!((hi - 2.0 / 3.0).abs() < 1e-12);
        // trig oracle for the lower end
        let oracle = 1.0 + 2.0 * 100f64.to_radians().cos();
        assert!((lo - oracle).abs() < 1e-10);
    }

    #[test]
    fn bracket_width_asymptotics() {
        let p = Params::new(1.0).unwrap();
        // width vanishes like O(x^3) at the origin: below x^2 by x = 1e-2
        let (lo, hi) = bracket(&p, 1e-2).unwrap();
        assert!(hi - lo < 1e-4);
        // large x: width stays below alpha - H -> 1/(eps^2 (1+eps))
        let (lo, hi) = bracket(&p, 1e3).unwrap();
        assert!(hi - lo <= 0.5 + 1e-3);
    }

    #[test]
    fn backward_single_column() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let t = compute_backward(&p, &[1.0], &cfg).unwrap();
        assert!(t.values[0] > 0.652704 && t.values[0] < 0.666667);
        // reference value from an independent high-accuracy sweep
        assert!((t.values[0] - 0.6549052892306).abs() < 1e-6);
    }

    #[test]
    fn backward_matches_infinity_series_at_ten() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let t = compute_backward(&p, &[10.0], &cfg).unwrap();
        let s = crate::series::infinity_coeffs(&p, 8).unwrap();
        assert!(
            (t.values[0] - s.eval(10.0).value).abs() < 1e-6,
            "table {} vs series {}",
            t.values[0],
            s.eval(10.0).value
        );
    }

    #[test]
    fn backward_start_point_insensitive() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let grid = [0.5, 1.0, 5.0, 20.0];
        let a = compute_backward_from(&p, &grid, &cfg, 0.1).unwrap();
        let b = compute_backward_from(&p, &grid, &cfg, 0.9).unwrap();
        for i in 0..grid.len() {
            let allowed = 2.0 * a.est_error[i];
            assert!(
                (a.values[i] - b.values[i]).abs() <= allowed,
                "x = {}: spread {:e} vs {allowed:e}",
                grid[i],
                (a.values[i] - b.values[i]).abs()
            );
        }
    }

    #[test]
    fn backward_sandwich_on_default_grid() {
        for eps in [0.1, 1.0, 2.0] {
            let p = Params::new(eps).unwrap();
            let cfg = IntegratorConfig::default();
            let t = compute_backward(&p, &default_grid(), &cfg).unwrap();
            for i in 0..t.grid.len() {
                assert!(
                    t.lower[i] < t.values[i] && t.values[i] < t.upper[i],
                    "eps = {eps}, x = {}",
                    t.grid[i]
                );
            }
        }
    }

    #[test]
    fn bisection_agrees_with_backward() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::with_tols(1e-12, 1e-14);
        let m = compute_bisection(&p, 1.0, 1e-8, &cfg).unwrap();
        let t = compute_backward(&p, &[1.0], &cfg).unwrap();
        assert!(
            (m - t.values[0]).abs() <= 1e-7,
            "bisection {m} vs backward {}",
            t.values[0]
        );
    }

    #[test]
    fn classification_on_fences_is_immediate() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let h1 = kinetics::horizontal(&p, 1.0);
        let a1 = kinetics::alpha(&p, 1.0);
        assert_eq!(
            classify_candidate(&p, 1.0, h1, 5.0, &cfg).unwrap(),
            Side::Below
        );
        assert_eq!(
            classify_candidate(&p, 1.0, a1, 5.0, &cfg).unwrap(),
            Side::Above
        );
    }

    #[test]
    fn blended_evaluator_asymptotics() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let m = build_default(&p, &cfg).unwrap();

        // near the origin the manifold hugs H: (M - H)/x^3 -> 2
        let x = 1e-3;
        let ratio = (m.eval(x) - kinetics::horizontal(&p, x)) / x.powi(3);
        assert!((ratio - 2.0).abs() <= 0.4, "ratio {ratio}");

        // at infinity it hugs alpha: (alpha - M) x^2 stays bounded by 1
        for &x in &[1e2, 1e3, 1e4] {
            let d = (kinetics::alpha(&p, x) - m.eval(x)) * x * x;
            assert!(d.abs() <= 1.0, "x = {x}: (alpha-M)x^2 = {d}");
        }

        // slope limits: -> 0 at the origin and -> 1/eps at infinity
        let slope_origin = (m.eval(1.2e-4) - m.eval(0.8e-4)) / 0.4e-4;
        assert!(slope_origin.abs() <= 1e-3, "slope {slope_origin}");
        let slope_inf = (m.eval(1.0001e4) - m.eval(0.9999e4)) / 2e0;
        assert!((slope_inf - 1.0).abs() <= 1e-3, "slope {slope_inf}");
    }

    #[test]
    fn blended_evaluator_monotone() {
        let p = Params::new(0.5).unwrap();
        let cfg = IntegratorConfig::default();
        let m = build_default(&p, &cfg).unwrap();
        let grid = log_grid(1e-3, 1e3, 400);
        let mut prev = 0.0;
        for &x in &grid {
            let v = m.eval(x);
            assert!(v > prev, "not increasing at x = {x}");
            prev = v;
        }
    }

    #[test]
    fn evaluate_one_shot_matches_struct() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let grid = log_grid(1e-2, 1e2, 50);
        let table = compute_backward(&p, &grid, &cfg).unwrap();
        let origin = crate::series::origin_coeffs(&p, 10).unwrap();
        let infinity = crate::series::infinity_coeffs(&p, 10).unwrap();
        let v1 = evaluate(&p, 3.0, &table, &origin, &infinity).unwrap();
        let m = SlowManifold::new(p, table, origin, infinity).unwrap();
        assert_eq!(v1, m.eval(3.0));
    }
}
