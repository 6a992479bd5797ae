//! Embedded Dormand-Prince 5(4) stepper with PI step-size control and FSAL,
//! generic over the state dimension.

use super::{IntegratorConfig, SolveStatus};

// Butcher tableau
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// PI controller (Hairer's dopri5 settings)
const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_SHRINK: f64 = 5.0; // h may shrink by at most 1/5 per step
const FAC_GROW: f64 = 0.1; // h may grow by at most 10x per step

pub(crate) enum StepResult<const N: usize> {
    /// One accepted step; the stepper state has advanced. The previous
    /// point is returned for event bracketing.
    Accepted { t_prev: f64, y_prev: [f64; N] },
    /// Already at the end point.
    Done,
    Failed(SolveStatus),
}

pub(crate) struct Rk45<'a, const N: usize> {
    rhs: &'a dyn Fn(f64, &[f64; N]) -> [f64; N],
    pub t: f64,
    pub y: [f64; N],
    t_end: f64,
    dir: f64,
    h: f64,
    rtol: f64,
    atol: f64,
    h_max: f64,
    max_steps: usize,
    steps: usize,
    k1: [f64; N],
    fsal_valid: bool,
    err_old: f64,
}

impl<'a, const N: usize> Rk45<'a, N> {
    pub fn new(
        rhs: &'a dyn Fn(f64, &[f64; N]) -> [f64; N],
        t0: f64,
        y0: [f64; N],
        t_end: f64,
        cfg: &IntegratorConfig,
    ) -> Self {
        let range = (t_end - t0).abs();
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let h_max = if cfg.h_max.is_finite() {
            cfg.h_max
        } else {
            range / 10.0
        };
        let h0 = if cfg.h_init > 0.0 {
            cfg.h_init.min(h_max)
        } else {
            (range * 1e-4).min(h_max)
        };
        Rk45 {
            rhs,
            t: t0,
            y: y0,
            t_end,
            dir,
            h: h0.max(f64::MIN_POSITIVE) * dir,
            rtol: cfg.rtol,
            atol: cfg.atol,
            h_max,
            max_steps: cfg.max_steps,
            steps: 0,
            k1: [0.0; N],
            fsal_valid: false,
            err_old: 1e-4,
        }
    }

    /// Overwrite the current state (invalidates the FSAL derivative).
    pub fn set_state(&mut self, y: [f64; N]) {
        self.y = y;
        self.fsal_valid = false;
    }

    /// Advance by one accepted step, not beyond `cap` (if given) or `t_end`.
    /// Rejected trials are retried internally and count against the budget.
    pub fn step(&mut self, cap: Option<f64>) -> StepResult<N> {
        let mut limit = self.t_end;
        if let Some(c) = cap {
            if (c - limit) * self.dir < 0.0 {
                limit = c;
            }
        }
        if (limit - self.t) * self.dir <= 0.0 {
            return StepResult::Done;
        }
        if !self.fsal_valid {
            self.k1 = (self.rhs)(self.t, &self.y);
            self.fsal_valid = true;
        }

        loop {
            if self.steps >= self.max_steps {
                return StepResult::Failed(SolveStatus::MaxSteps);
            }
            self.steps += 1;

            let mut h = self.h.abs().min(self.h_max).max(f64::MIN_POSITIVE) * self.dir;
            let mut hit_limit = false;
            if (self.t + h - limit) * self.dir >= 0.0 {
                h = limit - self.t;
                hit_limit = true;
            }
            if h.abs() <= 16.0 * f64::EPSILON * self.t.abs().max(1.0) && !hit_limit {
                // step size underflow: cannot make progress
                return StepResult::Failed(SolveStatus::MaxSteps);
            }

            let (y_new, k7, err) = self.trial(h);

            if !err.is_finite() {
                // non-finite trial: shrink hard and retry
                self.h = h * 0.25;
                if self.h.abs() <= 16.0 * f64::EPSILON * self.t.abs().max(1.0) {
                    return StepResult::Failed(SolveStatus::Diverged);
                }
                continue;
            }

            let fac11 = err.powf(EXPO1);
            if err <= 1.0 {
                // accept
                let fac = (fac11 / self.err_old.powf(BETA) / SAFE)
                    .clamp(FAC_GROW, FAC_SHRINK);
                let h_new = (h / fac).abs().min(self.h_max);
                self.err_old = err.max(1e-4);
                let t_prev = self.t;
                let y_prev = self.y;
                self.t = if hit_limit { limit } else { self.t + h };
                self.y = y_new;
                self.k1 = k7;
                if !hit_limit {
                    self.h = h_new.max(f64::MIN_POSITIVE) * self.dir;
                }
                // on a clamped landing, keep the controller's standing
                // proposal so forced small steps don't stick
                if !self.y.iter().all(|v| v.is_finite()) {
                    return StepResult::Failed(SolveStatus::Diverged);
                }
                return StepResult::Accepted { t_prev, y_prev };
            }
            // reject
            self.h = h / (fac11 / SAFE).min(FAC_SHRINK);
        }
    }

    /// One trial step of size h: returns (y_new, k7, scaled error norm).
    fn trial(&self, h: f64) -> ([f64; N], [f64; N], f64) {
        let t = self.t;
        let y = &self.y;
        let k1 = &self.k1;
        let mut s = [0.0; N];

        for i in 0..N {
            s[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = (self.rhs)(t + C2 * h, &s);
        for i in 0..N {
            s[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = (self.rhs)(t + C3 * h, &s);
        for i in 0..N {
            s[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = (self.rhs)(t + C4 * h, &s);
        for i in 0..N {
            s[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = (self.rhs)(t + C5 * h, &s);
        for i in 0..N {
            s[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = (self.rhs)(t + h, &s);

        let mut y_new = [0.0; N];
        for i in 0..N {
            y_new[i] =
                y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let k7 = (self.rhs)(t + h, &y_new);

        let mut err = 0.0;
        for i in 0..N {
            let e = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                    + E7 * k7[i]);
            let sk = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sk) * (e / sk);
        }
        (y_new, k7, (err / N as f64).sqrt())
    }
}
