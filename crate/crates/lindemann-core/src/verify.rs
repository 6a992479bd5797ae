//! Machine checks of the qualitative theory: the concavity table, fence
//! classification, trapping-region entry and invariance, global attraction
//! to the origin, and the long-time decay law.

use crate::error::{Error, Result};
use crate::integrate::{
    integrate_planar, integrate_planar_quad, EventKind, IntegratorConfig, SolveStatus,
};
use crate::kinetics::{self, Params, PhasePoint, SlopeValue};
use crate::manifold::SlowManifold;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Default seed for the randomized suites, recorded in every report.
pub const DEFAULT_SEED: u64 = 42;

/// Concavity verdict at a point, from the sign of the auxiliary function h.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConcavityVerdict {
    ConcaveUp,
    ConcaveDown,
    Inflection,
    UndefinedOnV,
}

/// Fence role of an isocline at a given x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FenceSide {
    StrongLowerFence,
    StrongUpperFence,
    Neutral,
}

/// One suite outcome. `passed` holds exactly when `worst_violation` is at or
/// below `tolerance`; violations are in suite-specific units described by
/// the details.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub samples_tested: u64,
    pub worst_violation: f64,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub details: Vec<Detail>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Detail {
    pub label: String,
    pub value: f64,
    pub violation: f64,
}

impl CheckReport {
    fn finish(name: &str, tolerance: f64, seed: Option<u64>, samples: u64, details: Vec<Detail>) -> Self {
        let worst = details.iter().map(|d| d.violation).fold(0.0, f64::max);
        CheckReport {
            name: name.to_string(),
            passed: worst <= tolerance,
            samples_tested: samples,
            worst_violation: worst,
            tolerance,
            seed,
            details,
        }
    }
}

/// Cap stored per-sample records so reports stay small; violations are
/// always kept in the worst_violation aggregate.
fn push_capped(details: &mut Vec<Detail>, d: Detail) {
    if d.violation > 0.0 || details.len() < 64 {
        if details.len() < 4096 {
            details.push(d);
        }
    }
}

/// Verdict from sign(h) with an absolute tolerance band; points within
/// `band` of the vertical isocline are undefined.
pub fn concavity_at(p: &Params, pt: PhasePoint, band: f64) -> ConcavityVerdict {
    if (pt.y - kinetics::vertical(p, pt.x)).abs() <= band {
        return ConcavityVerdict::UndefinedOnV;
    }
    match kinetics::h_aux(p, pt) {
        Err(_) => ConcavityVerdict::UndefinedOnV,
        Ok(h) if h.abs() <= band => ConcavityVerdict::Inflection,
        Ok(h) if h > 0.0 => ConcavityVerdict::ConcaveUp,
        Ok(_) => ConcavityVerdict::ConcaveDown,
    }
}

/// Compare the closed-form isocline slope against the field slope c: the
/// isocline for slope c is a strong lower fence where w' < c (x < xi(c)),
/// a strong upper fence where w' > c, and neutral within a small band.
pub fn fence_classify(p: &Params, c: SlopeValue, x: f64) -> Result<FenceSide> {
    if !(c.0 > 0.0 && c.0 < 1.0 / p.eps()) {
        return Err(Error::OutOfDomain { what: "c", value: c.0 });
    }
    if !(x > 0.0) {
        return Err(Error::OutOfDomain { what: "x", value: x });
    }
    let wp = kinetics::isocline_derivative(p, c, x)?;
    let band = 1e-9 * (1.0 + c.0.abs());
    Ok(if (wp - c.0).abs() <= band {
        FenceSide::Neutral
    } else if wp < c.0 {
        FenceSide::StrongLowerFence
    } else {
        FenceSide::StrongUpperFence
    })
}

/// Locate each slope's fence switch by bisection on the classifier and
/// compare with the closed form xi(c). Tolerance 1e-8 in x.
pub fn fences_suite(p: &Params, slopes: &[f64]) -> Result<CheckReport> {
    let tol = 1e-8;
    let mut details = Vec::new();
    for &c in slopes {
        let sv = SlopeValue(c);
        let expect = kinetics::xi(p, sv)?;
        // bracket the flip with doubling, then bisect the classifier
        let mut lo = 1e-9f64;
        let mut hi = 1.0f64.max(2.0 * lo);
        let mut guard = 0;
        while fence_classify(p, sv, hi)? == FenceSide::StrongLowerFence {
            hi *= 2.0;
            guard += 1;
            if guard > 200 {
                return Err(Error::Undecided { x: hi });
            }
        }
        while fence_classify(p, sv, lo)? != FenceSide::StrongLowerFence {
            lo *= 0.5;
            guard += 1;
            if guard > 400 {
                return Err(Error::Undecided { x: lo });
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if fence_classify(p, sv, mid)? == FenceSide::StrongLowerFence {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= f64::EPSILON * hi {
                break;
            }
        }
        let found = 0.5 * (lo + hi);
        details.push(Detail {
            label: format!("c = {c}: switch x vs xi(c)"),
            value: found,
            violation: (found - expect).abs(),
        });
    }
    Ok(CheckReport::finish(
        "fences",
        tol,
        None,
        slopes.len() as u64,
        details,
    ))
}

/// Cross-check sign(h) against a second-difference of the integrated scalar
/// solution through random points (excluding neighbourhoods of V and of the
/// inflection set, where the sign is not numerically resolvable).
pub fn concavity_suite(
    p: &Params,
    n_samples: usize,
    seed: u64,
    cfg: &IntegratorConfig,
) -> Result<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n_samples);
    while points.len() < n_samples {
        let x = 0.1 + 2.9 * rng.gen::<f64>();
        let y = 5.0 * rng.gen::<f64>();
        let v = kinetics::vertical(p, x);
        if (y - v).abs() < 0.07 * (1.0 + v) {
            continue;
        }
        let pt = PhasePoint::new(x, y).unwrap();
        let h = kinetics::h_aux(p, pt).unwrap();
        let pa = kinetics::p_aux(p, pt).unwrap();
        // skip points whose curvature is too small to measure by differences
        if (pa * h).abs() < 1e-2 || y < 1e-3 {
            continue;
        }
        points.push((pt, h, pa));
    }

    let results: Vec<Detail> = points
        .par_iter()
        .map(|&(pt, h, pa)| {
            let delta = 1e-3 * pt.x.min(1.0);
            let run = |x_to: f64| -> f64 {
                crate::integrate::integrate_scalar(p, pt.x, pt.y, x_to, cfg)
                    .map(|c| c.last().1)
                    .unwrap_or(f64::NAN)
            };
            let yp = run(pt.x + delta);
            let ym = run(pt.x - delta);
            let fd2 = (yp - 2.0 * pt.y + ym) / (delta * delta);
            let y2 = pa * h;
            let sign_match = fd2.is_finite() && (fd2 > 0.0) == (y2 > 0.0);
            Detail {
                label: format!("({:.4}, {:.4}) sign(y'')", pt.x, pt.y),
                value: fd2,
                violation: if sign_match { 0.0 } else { 1.0 },
            }
        })
        .collect();

    let mut details = Vec::new();
    for d in results {
        push_capped(&mut details, d);
    }
    Ok(CheckReport::finish(
        "concavity",
        0.0,
        Some(seed),
        n_samples as u64,
        details,
    ))
}

fn region_bounds(p: &Params, x: f64) -> Result<(f64, f64, f64, f64)> {
    Ok((
        kinetics::horizontal(p, x),
        kinetics::inflection_curve(p, x)?,
        kinetics::alpha(p, x),
        kinetics::vertical(p, x),
    ))
}

/// Sample each concavity band of the table and assert the sign of h:
/// below H negative, (H, Y) negative, (Y, alpha) positive, (M, V) positive,
/// (V, top root) negative, above the top cubic root positive.
pub fn table1_scan(
    p: &Params,
    n_per_region: usize,
    seed: u64,
    manifold: &SlowManifold,
) -> Result<CheckReport> {
    if n_per_region == 0 {
        return Err(Error::InvalidInput("n_per_region must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (x_min, x_max) = {
        let g = &manifold.table().grid;
        (g[0], *g.last().unwrap())
    };
    // (band label, expected sign of h, y sampler)
    type Sampler<'a> = Box<dyn Fn(&mut ChaCha8Rng, f64) -> Result<f64> + 'a>;
    let margin = |u: f64| 0.05 + 0.9 * u;
    let bands: Vec<(&str, f64, Sampler<'_>)> = vec![
        (
            "below H",
            -1.0,
            Box::new(move |rng, x| {
                let h = kinetics::horizontal(p, x);
                Ok(margin(rng.gen::<f64>()) * h)
            }),
        ),
        (
            "H to Y",
            -1.0,
            Box::new(move |rng, x| {
                let (h, y, _, _) = region_bounds(p, x)?;
                Ok(h + margin(rng.gen::<f64>()) * (y - h))
            }),
        ),
        (
            "Y to alpha",
            1.0,
            Box::new(move |rng, x| {
                let (_, y, a, _) = region_bounds(p, x)?;
                Ok(y + margin(rng.gen::<f64>()) * (a - y))
            }),
        ),
        (
            "M to V",
            1.0,
            Box::new(move |rng, x| {
                let m = manifold.eval(x);
                let v = kinetics::vertical(p, x);
                Ok(m + margin(rng.gen::<f64>()) * (v - m))
            }),
        ),
        (
            "V to top root",
            -1.0,
            Box::new(move |rng, x| {
                let v = kinetics::vertical(p, x);
                let r3 = kinetics::inflection_cubic_roots(p, x)?[2];
                Ok(v + margin(rng.gen::<f64>()) * (r3 - v))
            }),
        ),
        (
            "above top root",
            1.0,
            Box::new(move |rng, x| {
                let v = kinetics::vertical(p, x);
                let r3 = kinetics::inflection_cubic_roots(p, x)?[2];
                Ok(r3 + margin(rng.gen::<f64>()) * (r3 - v))
            }),
        ),
    ];

    let mut details = Vec::new();
    let mut tested = 0u64;
    for (label, expected_sign, sampler) in &bands {
        let mut worst = 0.0f64;
        let mut worst_at = (0.0, 0.0);
        for _ in 0..n_per_region {
            let u = rng.gen::<f64>();
            let x = (x_min.ln() + u * (x_max.ln() - x_min.ln())).exp();
            let y = sampler(&mut rng, x)?;
            let h = kinetics::h_aux(p, PhasePoint::new(x, y.max(0.0)).unwrap())?;
            tested += 1;
            if h * expected_sign < 0.0 && h.abs() > worst {
                worst = h.abs();
                worst_at = (x, y);
            }
        }
        push_capped(
            &mut details,
            Detail {
                label: if worst > 0.0 {
                    format!("{label}: wrong h sign at ({:.6e}, {:.6e})", worst_at.0, worst_at.1)
                } else {
                    format!("{label}: all signs correct")
                },
                value: worst,
                violation: worst,
            },
        );
    }
    Ok(CheckReport::finish(
        "table1",
        0.0,
        Some(seed),
        tested,
        details,
    ))
}

/// Per-trajectory record of when the three nested regions were entered.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntryTimes {
    pub gamma0: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
}

struct TrapOutcome {
    entry: EntryTimes,
    /// worst boundary breach after entry, per region, in band units
    breach: f64,
    failed: Option<String>,
}

fn trap_one(
    p: &Params,
    init: PhasePoint,
    t_max: f64,
    cfg: &IntegratorConfig,
) -> Result<TrapOutcome> {
    let traj = integrate_planar(
        p,
        init,
        t_max,
        cfg,
        &[EventKind::CrossV, EventKind::CrossAlpha, EventKind::CrossH, EventKind::CrossY],
    )?;
    if traj.status != SolveStatus::Completed {
        return Ok(TrapOutcome {
            entry: EntryTimes {
                gamma0: None,
                gamma1: None,
                gamma2: None,
            },
            breach: f64::MAX,
            failed: Some(format!("integrator status {:?}", traj.status)),
        });
    }
    let band = 10.0 * cfg.atol;
    let mut entry = EntryTimes {
        gamma0: None,
        gamma1: None,
        gamma2: None,
    };
    let mut breach = 0.0f64;
    for s in &traj.samples {
        if s.x <= 0.0 {
            continue;
        }
        let h = kinetics::horizontal(p, s.x);
        let v = kinetics::vertical(p, s.x);
        let a = kinetics::alpha(p, s.x);
        let yc = kinetics::inflection_curve(p, s.x)?;
        let mem = [
            (s.y >= h - band && s.y <= v + band, h - s.y, s.y - v),
            (s.y >= h - band && s.y <= a + band, h - s.y, s.y - a),
            (s.y >= yc - band && s.y <= a + band, yc - s.y, s.y - a),
        ];
        let slots = [&mut entry.gamma0, &mut entry.gamma1, &mut entry.gamma2];
        for ((inside, under, over), slot) in mem.into_iter().zip(slots) {
            match *slot {
                None if inside => *slot = Some(s.t),
                Some(_) if !inside => {
                    // exited after entry: record breach beyond the band
                    breach = breach.max(under.max(over) - band);
                }
                _ => {}
            }
        }
    }
    Ok(TrapOutcome {
        entry,
        breach,
        failed: None,
    })
}

/// Verify positive invariance and eventual entry of the nested regions
/// Gamma_0 (H..V), Gamma_1 (H..alpha) and Gamma_2 (Y..alpha) along each
/// trajectory: once a region is entered it is never exited (within a
/// 10*atol band), every trajectory enters all three by t_max, and entry
/// times are ordered.
pub fn trapping_suite(
    p: &Params,
    inits: &[PhasePoint],
    t_max: f64,
    cfg: &IntegratorConfig,
) -> Result<CheckReport> {
    for init in inits {
        if !(init.x > 0.0) {
            return Err(Error::InvalidInput(format!(
                "trapping inits need x > 0, got ({}, {})",
                init.x, init.y
            )));
        }
    }
    let outcomes: Vec<Result<TrapOutcome>> = inits
        .par_iter()
        .map(|&init| trap_one(p, init, t_max, cfg))
        .collect();
    let mut details = Vec::new();
    for (init, outcome) in inits.iter().zip(outcomes) {
        let o = outcome?;
        let label = format!("init ({:.6}, {:.6})", init.x, init.y);
        if let Some(msg) = o.failed {
            push_capped(
                &mut details,
                Detail {
                    label: format!("{label}: {msg}"),
                    value: f64::MAX,
                    violation: f64::MAX,
                },
            );
            continue;
        }
        let mut violation = o.breach;
        match (o.entry.gamma0, o.entry.gamma1, o.entry.gamma2) {
            (Some(t0), Some(t1), Some(t2)) => {
                if !(t0 <= t1 && t1 <= t2) {
                    violation = violation.max(1.0);
                }
                push_capped(
                    &mut details,
                    Detail {
                        label: format!("{label}: entries t0={t0:.4} t1={t1:.4} t2={t2:.4}"),
                        value: t2,
                        violation,
                    },
                );
            }
            _ => {
                push_capped(
                    &mut details,
                    Detail {
                        label: format!("{label}: region not entered by t_max"),
                        value: t_max,
                        violation: f64::MAX,
                    },
                );
            }
        }
    }
    Ok(CheckReport::finish(
        "trapping",
        0.0,
        None,
        inits.len() as u64,
        details,
    ))
}

/// Integrate each initial condition to t = 1e4 and check the end state lies
/// inside the attraction envelope `||(x,y)|| <= 2(1+eps)/t`.
pub fn attraction_suite(
    p: &Params,
    inits: &[PhasePoint],
    cfg: &IntegratorConfig,
) -> Result<CheckReport> {
    const T_END: f64 = 1e4;
    let envelope = 2.0 * (1.0 + p.eps()) / T_END;
    let ends: Vec<Result<(f64, f64, SolveStatus)>> = inits
        .par_iter()
        .map(|&init| {
            integrate_planar(p, init, T_END, cfg, &[]).map(|t| {
                let e = t.last();
                (e.x, e.y, t.status)
            })
        })
        .collect();
    let mut details = Vec::new();
    for (init, end) in inits.iter().zip(ends) {
        let (x, y, status) = end?;
        let label = format!("init ({:.6}, {:.6})", init.x, init.y);
        if status != SolveStatus::Completed {
            push_capped(
                &mut details,
                Detail {
                    label: format!("{label}: integrator status {status:?}"),
                    value: f64::MAX,
                    violation: f64::MAX,
                },
            );
            continue;
        }
        let norm = x.hypot(y);
        // an axis endpoint below e^-100 is numerically the origin
        let norm = if norm < (-100.0f64).exp() { 0.0 } else { norm };
        push_capped(
            &mut details,
            Detail {
                label: format!("{label}: ||state(1e4)||"),
                value: norm,
                violation: (norm - envelope).max(0.0),
            },
        );
    }
    Ok(CheckReport::finish(
        "attraction",
        0.0,
        None,
        inits.len() as u64,
        details,
    ))
}

/// Long-time decay checks along one trajectory, at log-spaced checkpoints up
/// to t = 1e6:
/// - `r_x = (x - 1/t) t^2 / ln t` vs eps (tolerance 0.05 at the final
///   checkpoint),
/// - `r_y = (y - 1/t^2) t^3 / (2 eps ln t)` vs 1 (tolerance 0.10),
/// - the integral-equation residual `|1/x - 1/x0 - t + eps * int y/x|`
///   vs 1e-3 * t at every checkpoint.
/// Violations are normalized excess ratios, so the report tolerance is 0.
pub fn longtime_suite(
    p: &Params,
    init: PhasePoint,
    cfg: &IntegratorConfig,
) -> Result<CheckReport> {
    if !(init.x > 0.0) {
        return Err(Error::InvalidInput("longtime needs x0 > 0".into()));
    }
    const DECADES: i32 = 6;
    const PER_DECADE: i32 = 4;
    let mut checkpoints: Vec<f64> = (0..=DECADES * PER_DECADE)
        .map(|i| 10f64.powf(i as f64 / PER_DECADE as f64))
        .collect();
    checkpoints.dedup();

    let mut details = Vec::new();
    let mut state = init;
    let mut t_prev = 0.0;
    let mut quad = 0.0; // accumulated int_0^t y/x ds
    let mut last = (0.0, 0.0, 0.0); // final-checkpoint (t, r_x, r_y)
    for &t in &checkpoints {
        let (traj, dq) = integrate_planar_quad(
            p,
            state,
            t - t_prev,
            cfg,
            &[],
            |_, pt| if pt.x > 0.0 { pt.y / pt.x } else { 0.0 },
        )?;
        if traj.status != SolveStatus::Completed {
            return Err(Error::MaxSteps { t: t_prev });
        }
        let end = traj.last();
        state = PhasePoint::new(end.x.max(0.0), end.y.max(0.0))?;
        quad += dq;
        t_prev = t;

        let l = t.ln().max(f64::MIN_POSITIVE);
        let r_x = (state.x - 1.0 / t) * t * t / l;
        let r_y = (state.y - 1.0 / (t * t)) * t * t * t / (2.0 * p.eps() * l);
        let residual = (1.0 / state.x - 1.0 / init.x - t + p.eps() * quad).abs();
        push_capped(
            &mut details,
            Detail {
                label: format!("t = {t:.3e}: integral residual / t"),
                value: residual / t,
                violation: (residual / (1e-3 * t) - 1.0).max(0.0),
            },
        );
        if t > 1.0 {
            push_capped(
                &mut details,
                Detail {
                    label: format!("t = {t:.3e}: r_x"),
                    value: r_x,
                    violation: 0.0,
                },
            );
            push_capped(
                &mut details,
                Detail {
                    label: format!("t = {t:.3e}: r_y"),
                    value: r_y,
                    violation: 0.0,
                },
            );
        }
        last = (t, r_x, r_y);
    }
    let (t_final, r_x, r_y) = last;
    details.push(Detail {
        label: format!("final t = {t_final:.3e}: |r_x - eps| vs 0.05"),
        value: r_x,
        violation: ((r_x - p.eps()).abs() / 0.05 - 1.0).max(0.0),
    });
    details.push(Detail {
        label: format!("final t = {t_final:.3e}: |r_y - 1| vs 0.10"),
        value: r_y,
        violation: ((r_y - 1.0).abs() / 0.10 - 1.0).max(0.0),
    });
    Ok(CheckReport::finish(
        "longtime",
        0.0,
        None,
        checkpoints.len() as u64,
        details,
    ))
}

/// Deterministic random initial conditions in (lo, hi]^2 (x strictly
/// positive), for the randomized suites.
pub fn random_inits(n: usize, seed: u64, lo: f64, hi: f64) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = lo + (hi - lo) * rng.gen::<f64>();
            let y = lo + (hi - lo) * rng.gen::<f64>();
            PhasePoint::new(x.max(1e-6), y.max(0.0)).unwrap()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold;

    fn pp(x: f64, y: f64) -> PhasePoint {
        PhasePoint::new(x, y).unwrap()
    }

    #[test]
    fn concavity_verdicts_match_table() {
        let p = Params::new(1.0).unwrap();
        assert_eq!(
            concavity_at(&p, pp(1.0, 0.3), 1e-9),
            ConcavityVerdict::ConcaveDown
        );
        assert_eq!(
            concavity_at(&p, pp(1.0, 0.66), 1e-9),
            ConcavityVerdict::ConcaveUp
        );
        assert_eq!(
            concavity_at(&p, pp(1.0, 2.0), 1e-9),
            ConcavityVerdict::ConcaveDown
        );
        assert_eq!(
            concavity_at(&p, pp(1.0, 1.0), 1e-9),
            ConcavityVerdict::UndefinedOnV
        );
        let yc = kinetics::inflection_curve(&p, 1.0).unwrap();
        assert_eq!(
            concavity_at(&p, pp(1.0, yc), 1e-8),
            ConcavityVerdict::Inflection
        );
    }

    #[test]
    fn fence_sides_around_xi() {
        let p = Params::new(1.0).unwrap();
        let c = SlopeValue(0.5);
        let switch = kinetics::xi(&p, c).unwrap();
        assert_eq!(
            fence_classify(&p, c, 0.1).unwrap(),
            FenceSide::StrongLowerFence
        );
        assert_eq!(
            fence_classify(&p, c, 1.0).unwrap(),
            FenceSide::StrongUpperFence
        );
        assert_eq!(fence_classify(&p, c, switch).unwrap(), FenceSide::Neutral);
    }

    #[test]
    fn fences_suite_locates_switches() {
        for eps in [0.5, 1.0, 2.0] {
            let p = Params::new(eps).unwrap();
            let slopes: Vec<f64> = [0.2, 0.5, 0.8].iter().map(|f| f / eps).collect();
            let r = fences_suite(&p, &slopes).unwrap();
            assert!(r.passed, "eps = {eps}: worst {}", r.worst_violation);
            assert!(r.worst_violation <= 1e-8);
        }
    }

    #[test]
    fn concavity_suite_signs_agree() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let r = concavity_suite(&p, 100, DEFAULT_SEED, &cfg).unwrap();
        assert!(r.passed, "worst {}", r.worst_violation);
        assert_eq!(r.samples_tested, 100);
    }

    #[test]
    fn trapping_on_h_from_start() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        // exactly on H at t = 0: inside Gamma_0 immediately, never exits
        let r = trapping_suite(&p, &[pp(1.0, 0.5)], 50.0, &cfg).unwrap();
        assert!(r.passed, "{:?}", r.details);
        let d = &r.details[0];
        assert!(d.label.contains("t0=0.0000"));
    }

    #[test]
    fn trapping_entry_from_above_and_below() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let r = trapping_suite(&p, &[pp(1.0, 5.0), pp(1.0, 0.0)], 100.0, &cfg).unwrap();
        assert!(r.passed, "{:?}", r.details);
    }

    #[test]
    fn attraction_examples() {
        let cfg = IntegratorConfig::default();
        let p = Params::new(1.0).unwrap();
        let r = attraction_suite(&p, &[pp(0.0, 1.0), pp(1.0, 1.0)], &cfg).unwrap();
        assert!(r.passed, "{:?}", r.details);
        // (1,1) endpoint norm is about 1/t
        let d = &r.details[1];
        assert!(d.value <= 4e-4, "norm {}", d.value);

        let p2 = Params::new(2.0).unwrap();
        let r2 = attraction_suite(&p2, &[pp(0.5, 3.0)], &cfg).unwrap();
        assert!(r2.passed);
    }

    #[test]
    fn table1_scan_no_misclassifications() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig::default();
        let m = manifold::build_default(&p, &cfg).unwrap();
        let r = table1_scan(&p, 1000, DEFAULT_SEED, &m).unwrap();
        assert!(r.passed, "{:?}", r.details);
        assert_eq!(r.samples_tested, 6000);
    }

    #[test]
    fn slope_bounds_below_h() {
        // below H and above y = 0 the slope field sits in (-1, 0)
        let p = Params::new(0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let x = 0.05 + 5.0 * rng.gen::<f64>();
            let h = kinetics::horizontal(&p, x);
            let y = h * (0.02 + 0.96 * rng.gen::<f64>());
            let f = kinetics::scalar_slope(&p, pp(x, y)).unwrap();
            assert!(f > -1.0 && f < 0.0, "f = {f} at ({x}, {y})");
        }
    }

    #[test]
    fn longtime_residual_passes_and_ratios_recorded() {
        let p = Params::new(1.0).unwrap();
        let cfg = IntegratorConfig {
            atol: 1e-300,
            ..Default::default()
        };
        let r = longtime_suite(&p, pp(1.0, 1.0), &cfg).unwrap();
        // integral-equation residuals hold everywhere
        for d in r.details.iter().filter(|d| d.label.contains("residual")) {
            assert_eq!(d.violation, 0.0, "{}", d.label);
        }
        // the finite-time ratio constants are known: r_x(1e6) ~ 1.068,
        // r_y(1e6) ~ 1.104 (the 0.05 / 0.10 windows are not reached by 1e6)
        let rx = r
            .details
            .iter()
            .find(|d| d.label.contains("final") && d.label.contains("r_x"))
            .unwrap();
        assert!((rx.value - 1.068).abs() < 5e-3, "r_x = {}", rx.value);
        let ry = r
            .details
            .iter()
            .find(|d| d.label.contains("final") && d.label.contains("r_y"))
            .unwrap();
        assert!((ry.value - 1.104).abs() < 2e-2, "r_y = {}", ry.value);
        assert!(!r.passed);
    }

    #[test]
    fn longtime_eps_to_zero_limit() {
        // with eps ~ 0 the closed form x = x0/(1 + x0 t) gives x*t -> 1
        let p = Params::new(1e-12).unwrap();
        let cfg = IntegratorConfig {
            atol: 1e-300,
            ..Default::default()
        };
        let traj = integrate_planar(&p, pp(1.0, 1.0), 1e4, &cfg, &[]).unwrap();
        let end = traj.last();
        assert!((end.x * 1e4 - 1.0).abs() <= 1e-3, "x*t = {}", end.x * 1e4);
    }
}
