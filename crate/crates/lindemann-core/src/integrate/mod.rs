//! Adaptive integration of the planar system (in time) and of the scalar
//! reduction (in x, both directions), with refined detection of crossings
//! of the named boundary curves.

mod rk45;

use crate::error::{Error, Result};
use crate::kinetics::{self, Params, PhasePoint};
use rk45::{Rk45, StepResult};
use serde::Serialize;

pub(crate) use self::scalar::scalar_drive;

/// Below this x the scalar integrator stops and callers switch to the
/// origin series: the slope field is 0/0 at the origin.
pub const SCALAR_X_MIN: f64 = 1e-6;

/// Tolerances and budgets for one integration run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step size; 0 means choose automatically.
    pub h_init: f64,
    /// Maximum step size; infinity means a tenth of the integration range.
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-9,
            atol: 1e-12,
            h_init: 0.0,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tols(rtol: f64, atol: f64) -> Self {
        IntegratorConfig {
            rtol,
            atol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be positive: rtol = {}, atol = {}",
                self.rtol, self.atol
            )));
        }
        if self.h_init < 0.0 || self.h_max <= 0.0 || (self.h_init > 0.0 && self.h_max < self.h_init)
        {
            return Err(Error::InvalidInput(format!(
                "step bounds must satisfy h_max >= h_init > 0: h_init = {}, h_max = {}",
                self.h_init, self.h_max
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidInput("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// Terminal state of an integration run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Completed,
    MaxSteps,
    Diverged,
    /// Scalar runs only: the solution came within tolerance of the vertical
    /// isocline (or x = 0), where the slope field is singular.
    SingularityApproached,
    /// Scalar runs only: y left the nonnegative quadrant.
    LeftDomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

/// Crossings that the planar integrator can watch for, plus arrival at the
/// requested end point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EventKind {
    CrossH,
    CrossAlpha,
    CrossV,
    CrossY,
    ReachTarget,
}

impl std::fmt::Display for EventKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EventKind::CrossH => "CrossH",
            EventKind::CrossAlpha => "CrossAlpha",
            EventKind::CrossV => "CrossV",
            EventKind::CrossY => "CrossY",
            EventKind::ReachTarget => "ReachTarget",
        };
        f.write_str(s)
    }
}

/// Signed distance proxy `y - C(x)` for the curve a kind refers to; the root
/// marks the crossing. `ReachTarget` has no curve and evaluates to 0.
pub fn event_function(p: &Params, kind: EventKind, pt: PhasePoint) -> f64 {
    match kind {
        EventKind::CrossH => pt.y - kinetics::horizontal(p, pt.x),
        EventKind::CrossAlpha => pt.y - kinetics::alpha(p, pt.x),
        EventKind::CrossV => pt.y - kinetics::vertical(p, pt.x),
        EventKind::CrossY => pt.y - kinetics::inflection_curve(p, pt.x).unwrap_or(f64::NAN),
        EventKind::ReachTarget => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub x: f64,
    pub y: f64,
}

/// A planar solution: accepted-step samples, refined crossing events and the
/// terminal status. `clamped` counts samples whose roundoff-negative
/// component was clamped back to the axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TimeSample>,
    pub events: Vec<Event>,
    pub status: SolveStatus,
    pub clamped: usize,
}

impl Trajectory {
    pub fn last(&self) -> TimeSample {
        *self.samples.last().expect("trajectory has at least the initial sample")
    }
}

/// A scalar solution y(x): samples with x strictly monotone in the stated
/// direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalarCurve {
    pub samples: Vec<(f64, f64)>,
    pub direction: Direction,
    pub status: SolveStatus,
}

impl ScalarCurve {
    pub fn last(&self) -> (f64, f64) {
        *self.samples.last().expect("scalar curve has at least the initial sample")
    }
}

/// Integrate the planar system from `init` to `t_max`, watching for the
/// requested crossings. Local error per step is kept at
/// `atol + rtol * |state|`; watched crossings are refined by bisection along
/// the step chord to `|event_function| <= atol`. Tiny negative components
/// (no worse than `-10 * atol`) are clamped to the axis and counted.
pub fn integrate_planar(
    p: &Params,
    init: PhasePoint,
    t_max: f64,
    cfg: &IntegratorConfig,
    watch: &[EventKind],
) -> Result<Trajectory> {
    let (traj, _) = integrate_planar_quad(p, init, t_max, cfg, watch, |_, _| 0.0)?;
    Ok(traj)
}

/// [`integrate_planar`] augmented with a quadrature component: returns the
/// trajectory together with `integral of g(t, (x,y)) dt` accumulated by the
/// same embedded pair (so the quadrature carries integrator-level accuracy,
/// not sample-level).
pub fn integrate_planar_quad(
    p: &Params,
    init: PhasePoint,
    t_max: f64,
    cfg: &IntegratorConfig,
    watch: &[EventKind],
    g: impl Fn(f64, PhasePoint) -> f64,
) -> Result<(Trajectory, f64)> {
    cfg.validate()?;
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidInput(format!("t_max = {t_max} must be positive")));
    }
    let eps = p.eps();
    let rhs = move |t: f64, s: &[f64; 3]| -> [f64; 3] {
        let (x, y) = (s[0], s[1]);
        [
            -x * x + eps * x * y,
            x * x - (1.0 + eps * x) * y,
            g(t, PhasePoint { x, y }),
        ]
    };

    let mut stepper = Rk45::new(&rhs, 0.0, [init.x, init.y, 0.0], t_max, cfg);
    let mut traj = Trajectory {
        samples: vec![TimeSample {
            t: 0.0,
            x: init.x,
            y: init.y,
        }],
        events: Vec::new(),
        status: SolveStatus::Completed,
        clamped: 0,
    };

    // a point exactly on a watched curve at t = 0 counts as a crossing
    for &kind in watch {
        if kind != EventKind::ReachTarget && init.x > 0.0 {
            let g0 = event_function(p, kind, init);
            if g0.abs() <= cfg.atol {
                traj.events.push(Event {
                    t: 0.0,
                    kind,
                    x: init.x,
                    y: init.y,
                });
            }
        }
    }

    loop {
        match stepper.step(None) {
            StepResult::Done => break,
            StepResult::Failed(status) => {
                traj.status = status;
                break;
            }
            StepResult::Accepted { t_prev, y_prev } => {
                let mut s = stepper.y;
                // clamp roundoff negatives onto the axes
                for v in s.iter_mut().take(2) {
                    if *v < 0.0 {
                        if *v >= -10.0 * cfg.atol {
                            *v = 0.0;
                            traj.clamped += 1;
                        } else {
                            traj.status = SolveStatus::Diverged;
                        }
                    }
                }
                if s != stepper.y {
                    stepper.set_state(s);
                }
                if traj.status == SolveStatus::Diverged {
                    traj.samples.push(TimeSample {
                        t: stepper.t,
                        x: s[0],
                        y: s[1],
                    });
                    break;
                }

                let prev = PhasePoint {
                    x: y_prev[0],
                    y: y_prev[1],
                };
                let new = PhasePoint { x: s[0], y: s[1] };
                let mut step_events: Vec<Event> = Vec::new();
                for &kind in watch {
                    if kind == EventKind::ReachTarget || prev.x <= 0.0 || new.x <= 0.0 {
                        continue;
                    }
                    let g0 = event_function(p, kind, prev);
                    let g1 = event_function(p, kind, new);
                    let crossed = (g0 < 0.0) != (g1 < 0.0) || (g1 == 0.0 && g0 != 0.0);
                    if crossed && g0 != 0.0 {
                        let (te, pe) =
                            refine_crossing(p, kind, t_prev, prev, stepper.t, new, cfg.atol);
                        step_events.push(Event {
                            t: te,
                            kind,
                            x: pe.x,
                            y: pe.y,
                        });
                    }
                }
                step_events.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
                traj.events.extend(step_events);

                traj.samples.push(TimeSample {
                    t: stepper.t,
                    x: s[0],
                    y: s[1],
                });
            }
        }
    }

    if traj.status == SolveStatus::Completed && watch.contains(&EventKind::ReachTarget) {
        let end = traj.last();
        traj.events.push(Event {
            t: end.t,
            kind: EventKind::ReachTarget,
            x: end.x,
            y: end.y,
        });
    }
    Ok((traj, stepper.y[2]))
}

/// Bisect along the step chord for the crossing of `kind`, stopping once the
/// event function at the midpoint is within `atol` of zero.
fn refine_crossing(
    p: &Params,
    kind: EventKind,
    t0: f64,
    p0: PhasePoint,
    t1: f64,
    p1: PhasePoint,
    atol: f64,
) -> (f64, PhasePoint) {
    let g0 = event_function(p, kind, p0);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let lerp = |s: f64| PhasePoint {
        x: p0.x + s * (p1.x - p0.x),
        y: p0.y + s * (p1.y - p0.y),
    };
    let mut best = (hi, p1);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let pm = lerp(mid);
        let gm = event_function(p, kind, pm);
        best = (mid, pm);
        if gm.abs() <= 0.5 * atol {
            break;
        }
        if (gm < 0.0) == (g0 < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (t0 + best.0 * (t1 - t0), best.1)
}

mod scalar {
    use super::*;

    /// Drive the scalar reduction y' = f(x, y) from `x_from` to `x_to`,
    /// landing exactly on each x in `landings` (which must be ordered in the
    /// direction of travel) and invoking `on_landing` there, and invoking
    /// `inspect` after every accepted step. `inspect` may stop the run early
    /// by returning a terminal status. Guards stop the run when the
    /// slope-field denominator shrinks below atol, when y turns negative, or
    /// (integrating leftward) at x = SCALAR_X_MIN.
    pub(crate) fn scalar_drive(
        p: &Params,
        x_from: f64,
        y_from: f64,
        x_to: f64,
        cfg: &IntegratorConfig,
        landings: &[f64],
        mut on_landing: impl FnMut(f64, f64),
        mut inspect: impl FnMut(f64, f64, f64, f64) -> Option<SolveStatus>,
    ) -> Result<ScalarCurve> {
        cfg.validate()?;
        if !(x_from > 0.0 && x_to > 0.0) || x_from == x_to {
            return Err(Error::InvalidInput(format!(
                "scalar integration needs distinct positive endpoints, got {x_from} -> {x_to}"
            )));
        }
        if y_from < 0.0 {
            return Err(Error::InvalidInput(format!("y_from = {y_from} must be >= 0")));
        }
        let eps = p.eps();
        let den0 = x_from * (eps * y_from - x_from);
        if den0.abs() <= cfg.atol {
            return Err(Error::SingularityApproached { x: x_from });
        }
        let direction = if x_to > x_from {
            Direction::Forward
        } else {
            Direction::Backward
        };
        let dir = if x_to > x_from { 1.0 } else { -1.0 };
        let x_stop = if x_to < x_from { x_to.max(SCALAR_X_MIN) } else { x_to };

        let rhs = move |x: f64, s: &[f64; 1]| -> [f64; 1] {
            let y = s[0];
            [(x * x - (1.0 + eps * x) * y) / (-x * x + eps * x * y)]
        };
        let mut stepper = Rk45::new(&rhs, x_from, [y_from], x_stop, cfg);
        let mut curve = ScalarCurve {
            samples: vec![(x_from, y_from)],
            direction,
            status: SolveStatus::Completed,
        };
        let mut next_landing = 0usize;
        // skip landings at or behind the start
        while next_landing < landings.len()
            && (landings[next_landing] - x_from) * dir <= 0.0
        {
            if landings[next_landing] == x_from {
                on_landing(x_from, y_from);
            }
            next_landing += 1;
        }
        loop {
            let cap = landings.get(next_landing).copied();
            match stepper.step(cap) {
                StepResult::Done => break,
                StepResult::Failed(status) => {
                    curve.status = status;
                    break;
                }
                StepResult::Accepted { t_prev, y_prev } => {
                    let (x, y) = (stepper.t, stepper.y[0]);
                    curve.samples.push((x, y));
                    if Some(x) == cap {
                        on_landing(x, y);
                        next_landing += 1;
                    }
                    if y < 0.0 {
                        curve.status = SolveStatus::LeftDomain;
                        break;
                    }
                    let den = x * (eps * y - x);
                    if den.abs() <= cfg.atol {
                        curve.status = SolveStatus::SingularityApproached;
                        break;
                    }
                    if let Some(status) = inspect(t_prev, y_prev[0], x, y) {
                        curve.status = status;
                        break;
                    }
                }
            }
        }
        Ok(curve)
    }
}

/// Integrate the scalar reduction y' = f(x, y) from `(x_from, y_from)` to
/// `x_to` (either direction). Refuses to start within atol of the vertical
/// isocline; terminates early with a status when the solution approaches the
/// singular set or leaves y >= 0. Leftward runs stop at x = [`SCALAR_X_MIN`],
/// where callers switch to the origin series.
pub fn integrate_scalar(
    p: &Params,
    x_from: f64,
    y_from: f64,
    x_to: f64,
    cfg: &IntegratorConfig,
) -> Result<ScalarCurve> {
    scalar_drive(p, x_from, y_from, x_to, cfg, &[], |_, _| {}, |_, _, _, _| None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(x: f64, y: f64) -> PhasePoint {
        PhasePoint::new(x, y).unwrap()
    }

    #[test]
    fn axis_solution_decays_exponentially() {
        let p = Params::new(3.0).unwrap();
        let cfg = IntegratorConfig::with_tols(1e-10, 1e-14);
        let traj = integrate_planar(&p, pp(0.0, 1.0), 1.0, &cfg, &[]).unwrap();
        assert_eq!(traj.status, SolveStatus::Completed);
        let end = traj.last();
        assert_eq!(end.x, 0.0);
        assert!((end.y - (-1.0f64).exp()).abs() < 1e-9, "y = {}", end.y);
    }

    #[test]
    fn tolerance_scaling_on_axis_problem() {
        // exact solution y0 e^{-t}: halving both tolerances must cut the
        // end-point error at least in half
        let p = Params::new(1.0).unwrap();
        let run = |rtol: f64, atol: f64| {
            let cfg = IntegratorConfig::with_tols(rtol, atol);
            let traj = integrate_planar(&p, pp(0.0, 1.0), 5.0, &cfg, &[]).unwrap();
            (traj.last().y - (-5.0f64).exp()).abs()
        };
        let e1 = run(1e-7, 1e-9);
        let e2 = run(0.5e-7, 0.5e-9);
        assert!(e2 <= 0.5 * e1, "e1 = {e1:e}, e2 = {e2:e}");
    }

    #[test]
    fn conservation_identity_via_quadrature() {
        // d(x+y)/dt = -y exactly, so x + y + int y dt is conserved; the
        // quadrature uses the integrator's own weights
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let (traj, q) = integrate_planar_quad(&p, pp(1.0, 1.0), 5.0, &cfg, &[], |_, pt| pt.y)
            .unwrap();
        let end = traj.last();
        let drift = (end.x + end.y + q - 2.0).abs();
        assert!(
            drift <= 10.0 * (cfg.atol + cfg.rtol) * 5.0,
            "drift = {drift:e}"
        );
    }

    #[test]
    fn events_in_order_from_above_v() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        // (1, 1) starts exactly on V, then crosses alpha on its way down
        let traj = integrate_planar(
            &p,
            pp(1.0, 1.0),
            20.0,
            &cfg,
            &[EventKind::CrossV, EventKind::CrossAlpha, EventKind::CrossH],
        )
        .unwrap();
        let kinds: Vec<EventKind> = traj.events.iter().map(|e| e.kind).collect();
        assert!(kinds.contains(&EventKind::CrossV));
        assert!(kinds.contains(&EventKind::CrossAlpha));
        assert!(!kinds.contains(&EventKind::CrossH), "never reaches H: {kinds:?}");
        let tv = traj.events.iter().find(|e| e.kind == EventKind::CrossV).unwrap().t;
        let ta = traj
            .events
            .iter()
            .find(|e| e.kind == EventKind::CrossAlpha)
            .unwrap()
            .t;
        assert!(tv < ta);
    }

    #[test]
    fn event_residuals_below_atol() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let traj = integrate_planar(
            &p,
            pp(1.0, 5.0),
            30.0,
            &cfg,
            &[EventKind::CrossV, EventKind::CrossAlpha, EventKind::CrossY],
        )
        .unwrap();
        assert!(!traj.events.is_empty());
        for e in &traj.events {
            if e.kind == EventKind::ReachTarget {
                continue;
            }
            let g = event_function(&p, e.kind, pp(e.x, e.y));
            assert!(g.abs() <= cfg.atol, "{:?} residual {g:e}", e.kind);
        }
        // events sorted by time
        for w in traj.events.windows(2) {
            assert!(w[0].t <= w[1].t);
        }
    }

    #[test]
    fn positivity_no_sample_below_tolerance_band() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        for init in [pp(0.0, 1.0), pp(1e-3, 0.0), pp(2.0, 0.0)] {
            let traj = integrate_planar(&p, init, 50.0, &cfg, &[]).unwrap();
            for s in &traj.samples {
                assert!(s.x >= -10.0 * cfg.atol && s.y >= -10.0 * cfg.atol);
            }
        }
    }

    #[test]
    fn monotone_decrease_inside_gamma0() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let traj = integrate_planar(&p, pp(1.0, 0.6), 10.0, &cfg, &[]).unwrap();
        for s in &traj.samples {
            if s.x > 0.0 {
                let inside = s.y >= kinetics::horizontal(&p, s.x) - 10.0 * cfg.atol
                    && s.y <= kinetics::vertical(&p, s.x) + 10.0 * cfg.atol;
                if inside {
                    let (dx, dy) = kinetics::vector_field(&p, pp(s.x, s.y.max(0.0)));
                    assert!(dx <= 1e-12 && dy <= 1e-12, "at t = {}", s.t);
                }
            }
        }
    }

    #[test]
    fn max_steps_reported() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig {
            max_steps: 10,
            ..Default::default()
        };
        let traj = integrate_planar(&p, pp(1.0, 1.0), 1e6, &cfg, &[]).unwrap();
        assert_eq!(traj.status, SolveStatus::MaxSteps);
    }

    #[test]
    fn scalar_starts_with_isocline_slope() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        for c in [0.3, 1.0, 2.5] {
            let w = kinetics::slope_isocline(&p, c.into(), 1.0).unwrap();
            let f0 = kinetics::scalar_slope(&p, pp(1.0, w)).unwrap();
            assert!((f0 - c).abs() <= 1e-10);
            let curve = integrate_scalar(&p, 1.0, w, 1.05, &cfg).unwrap();
            assert_eq!(curve.status, SolveStatus::Completed);
        }
        // starting on H: slope zero, so y barely moves over a short leg
        let curve = integrate_scalar(&p, 1.0, 0.5, 0.99, &cfg).unwrap();
        let (xe, ye) = curve.last();
        assert!((xe - 0.99).abs() < 1e-12);
        assert!((ye - 0.5).abs() <= 1e-2);
    }

    #[test]
    fn scalar_x_strictly_monotone() {
        let p = Params::new(0.5).unwrap();
        let cfg = IntegratorConfig::default();
        let fwd = integrate_scalar(&p, 1.0, 0.4, 3.0, &cfg).unwrap();
        assert_eq!(fwd.direction, Direction::Forward);
        for w in fwd.samples.windows(2) {
            assert!(w[1].0 > w[0].0);
        }
        let bwd = integrate_scalar(&p, 3.0, kinetics::horizontal(&p, 3.0), 1.0, &cfg).unwrap();
        assert_eq!(bwd.direction, Direction::Backward);
        for w in bwd.samples.windows(2) {
            assert!(w[1].0 < w[0].0);
        }
    }

    #[test]
    fn scalar_refuses_start_on_v() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let v = kinetics::vertical(&p, 1.0);
        assert!(matches!(
            integrate_scalar(&p, 1.0, v, 2.0, &cfg),
            Err(Error::SingularityApproached { .. })
        ));
    }

    #[test]
    fn backward_solutions_contract_toward_manifold() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::with_tols(1e-10, 1e-13);
        let h30 = kinetics::horizontal(&p, 30.0);
        let a30 = kinetics::alpha(&p, 30.0);
        let run = |y0: f64| {
            let c = integrate_scalar(&p, 30.0, y0, 5.0, &cfg).unwrap();
            assert_eq!(c.status, SolveStatus::Completed);
            c.last().1
        };
        let y1 = run(h30 + 1e-3);
        let y2 = run(a30 - 1e-3);
        let dy0 = (a30 - 1e-3) - (h30 + 1e-3);
        let bound = (-(25.0f64)).exp() * dy0 + 10.0 * cfg.rtol;
        assert!(
            (y1 - y2).abs() <= bound,
            "spread {:e} vs Gronwall bound {bound:e}",
            (y1 - y2).abs()
        );
    }
}
