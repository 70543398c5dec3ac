//! PID wake-up-time controller.
//!
//! The fused error `ε = w_snr·ε_snr + w_vel·ε_vel` drives
//! `u = kp·ε + ki·∫ε dt + kd·dε/dt`, and the next wake-up interval is
//! `clamp(t_base + u, t_base, t_max)`. Positive errors (poor SNR, speed
//! disagreeing with the plan) lengthen the interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
    pub w_snr: f64,
    pub w_vel: f64,
}

impl Default for PidGains {
    fn default() -> Self {
        Self {
            kp: 0.75,
            ki: 0.08,
            kd: 0.195,
            w_snr: 0.6,
            w_vel: 0.4,
        }
    }
}

impl PidGains {
    pub fn validate(&self) -> Result<()> {
        if ![self.kp, self.ki, self.kd].iter().all(|g| g.is_finite()) {
            return Err(Error::Config("PID gains must be finite".into()));
        }
        if self.w_snr < 0.0 || self.w_vel < 0.0 || (self.w_snr + self.w_vel - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "weights w_snr = {} and w_vel = {} must be non-negative and sum to 1",
                self.w_snr, self.w_vel
            )));
        }
        Ok(())
    }
}

/// Ranges used to map raw SNR and speed discrepancy onto `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ErrorBounds {
    pub snr_lo_db: f64,
    pub snr_hi_db: f64,
    pub v_max_mps: f64,
}

impl Default for ErrorBounds {
    fn default() -> Self {
        Self {
            snr_lo_db: 5.0,
            snr_hi_db: 30.0,
            v_max_mps: 15.0 / 3.6,
        }
    }
}

impl ErrorBounds {
    pub fn validate(&self) -> Result<()> {
        if !(self.snr_hi_db > self.snr_lo_db) {
            return Err(Error::Config(format!(
                "snr_hi_db ({}) must exceed snr_lo_db ({})",
                self.snr_hi_db, self.snr_lo_db
            )));
        }
        if !(self.v_max_mps > 0.0) {
            return Err(Error::Config("v_max_mps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedErrors {
    pub eps_snr: f64,
    pub eps_vel: f64,
}

impl NormalizedErrors {
    pub const ZERO: Self = Self {
        eps_snr: 0.0,
        eps_vel: 0.0,
    };
}

pub fn normalize_errors(snr_db: f64, v_meas: f64, v_plan: f64, bounds: &ErrorBounds) -> Result<NormalizedErrors> {
    bounds.validate()?;
    let span = bounds.snr_hi_db - bounds.snr_lo_db;
    let eps_snr = (2.0 * (bounds.snr_hi_db - snr_db) / span - 1.0).clamp(-1.0, 1.0);
    let eps_vel = (2.0 * (v_plan - v_meas).abs() / bounds.v_max_mps - 1.0).clamp(-1.0, 1.0);
    Ok(NormalizedErrors { eps_snr, eps_vel })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AntiWindup {
    /// Skip the integral update when the output is saturated and the error
    /// pushes further into the limit.
    #[default]
    Conditional,
    /// Integrate unconditionally.
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WakeUpController {
    pub gains: PidGains,
    pub t_base_s: f64,
    pub t_max_s: f64,
    pub anti_windup: AntiWindup,
    eps_prev: f64,
    integral: f64,
}

impl WakeUpController {
    pub fn new(gains: PidGains, t_base_s: f64, t_max_s: f64) -> Result<Self> {
        gains.validate()?;
        if !(t_base_s > 0.0) || !(t_max_s >= t_base_s) {
            return Err(Error::Config(format!(
                "t_max_s ({t_max_s}) must be at least t_base_s ({t_base_s}) and both positive"
            )));
        }
        Ok(Self {
            gains,
            t_base_s,
            t_max_s,
            anti_windup: AntiWindup::default(),
            eps_prev: 0.0,
            integral: 0.0,
        })
    }

    pub fn with_anti_windup(mut self, mode: AntiWindup) -> Self {
        self.anti_windup = mode;
        self
    }

    pub fn eps_prev(&self) -> f64 {
        self.eps_prev
    }

    pub fn integral(&self) -> f64 {
        self.integral
    }

    /// One controller step; returns the next wake-up interval in seconds.
    pub fn calculate_wake_up_time(&mut self, eps: NormalizedErrors, dt_s: f64) -> Result<f64> {
        if !(dt_s > 0.0) {
            return Err(Error::Domain(format!("dt = {dt_s} s must be positive")));
        }
        let g = &self.gains;
        let combined = g.w_snr * eps.eps_snr + g.w_vel * eps.eps_vel;
        let integral = self.integral + combined * dt_s;
        let derivative = (combined - self.eps_prev) / dt_s;
        let mut u = g.kp * combined + g.ki * integral + g.kd * derivative;

        let raw = self.t_base_s + u;
        let winding = (raw > self.t_max_s && combined > 0.0) || (raw < self.t_base_s && combined < 0.0);
        if self.anti_windup == AntiWindup::Conditional && winding {
            u = g.kp * combined + g.ki * self.integral + g.kd * derivative;
        } else {
            self.integral = integral;
        }
        self.eps_prev = combined;

        Ok((self.t_base_s + u).max(self.t_base_s).min(self.t_max_s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctrl(t_base: f64, t_max: f64) -> WakeUpController {
        WakeUpController::new(PidGains::default(), t_base, t_max).unwrap()
    }

    #[test]
    fn normalization_cases() {
        let b = ErrorBounds::default();
        let best = normalize_errors(30.0, 3.0, 3.0, &b).unwrap();
        assert_eq!(
            best,
            NormalizedErrors {
                eps_snr: -1.0,
                eps_vel: -1.0
            }
        );
        assert_eq!(normalize_errors(17.5, 3.0, 3.0, &b).unwrap().eps_snr, 0.0);
        assert_eq!(normalize_errors(-40.0, 3.0, 3.0, &b).unwrap().eps_snr, 1.0);
        assert_eq!(normalize_errors(4.9, 3.0, 3.0, &b).unwrap().eps_snr, 1.0);
        let mismatch = normalize_errors(90.0, 0.0, 4.0, &b).unwrap();
        assert_eq!(mismatch.eps_snr, -1.0);
        assert!((mismatch.eps_vel - 0.92).abs() < 1e-12);
        let bad = ErrorBounds {
            snr_lo_db: 10.0,
            snr_hi_db: 10.0,
            ..b
        };
        assert!(matches!(normalize_errors(0.0, 0.0, 0.0, &bad), Err(Error::Config(_))));
    }

    #[test]
    fn zero_error_gives_base_interval() {
        let mut c = ctrl(0.08, 0.24);
        assert_eq!(c.calculate_wake_up_time(NormalizedErrors::ZERO, 0.1).unwrap(), 0.08);
    }

    #[test]
    fn worst_case_hand_evaluation() {
        let mut c = ctrl(0.08, 0.24).with_anti_windup(AntiWindup::None);
        let wt = c
            .calculate_wake_up_time(
                NormalizedErrors {
                    eps_snr: 1.0,
                    eps_vel: 1.0,
                },
                0.08,
            )
            .unwrap();
        assert_eq!(wt, 0.24);
        assert!((c.integral() - 0.08).abs() < 1e-15);
        assert_eq!(c.eps_prev(), 1.0);
        let u: f64 = 0.75 + 0.08 * 0.08 + 0.195 * 12.5;
        assert!((u - 3.194).abs() < 1e-3);

        let mut guarded = ctrl(0.08, 0.24);
        let wt = guarded
            .calculate_wake_up_time(
                NormalizedErrors {
                    eps_snr: 1.0,
                    eps_vel: 1.0,
                },
                0.08,
            )
            .unwrap();
        assert_eq!(wt, 0.24);
        assert_eq!(guarded.integral(), 0.0);
    }

    #[test]
    fn negative_error_clamps_low() {
        let mut c = ctrl(0.08, 0.24);
        let wt = c
            .calculate_wake_up_time(
                NormalizedErrors {
                    eps_snr: -1.0,
                    eps_vel: -1.0,
                },
                0.08,
            )
            .unwrap();
        assert_eq!(wt, 0.08);
    }

    #[test]
    fn rejects_bad_dt_and_bounds() {
        let mut c = ctrl(0.08, 0.24);
        assert!(matches!(
            c.calculate_wake_up_time(NormalizedErrors::ZERO, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(WakeUpController::new(PidGains::default(), 0.3, 0.24).is_err());
        let skewed = PidGains {
            w_snr: 0.7,
            ..PidGains::default()
        };
        assert!(WakeUpController::new(skewed, 0.08, 0.24).is_err());
    }

    #[test]
    fn integral_does_not_wind_up_while_saturated() {
        let mut c = ctrl(0.08, 0.24);
        for _ in 0..1000 {
            c.calculate_wake_up_time(
                NormalizedErrors {
                    eps_snr: -1.0,
                    eps_vel: -1.0,
                },
                0.08,
            )
            .unwrap();
        }
        assert!(c.integral() > -0.2, "{}", c.integral());
    }
}
