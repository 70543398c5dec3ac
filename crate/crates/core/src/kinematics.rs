//! Track geometry, ground-truth motion and heading recovery from the AoA.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }
}

/// Wraps an angle to `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut w = a.rem_euclid(TAU);
    if w > PI {
        w -= TAU;
    }
    w
}

/// Constant-curvature track: an arc of `length_m` turning left through
/// `cumulative_bend_rad`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrackModel {
    pub length_m: f64,
    pub cumulative_bend_rad: f64,
    pub start: Point2,
    pub initial_heading_rad: f64,
}

impl Default for TrackModel {
    fn default() -> Self {
        Self {
            length_m: 300.0,
            cumulative_bend_rad: 14.32f64.to_radians(),
            start: Point2::new(0.0, 0.0),
            initial_heading_rad: 0.0,
        }
    }
}

impl TrackModel {
    pub fn curvature(&self) -> f64 {
        self.cumulative_bend_rad / self.length_m
    }

    /// Position and heading at arc length `s`.
    pub fn pose_at(&self, s: f64) -> (Point2, f64) {
        let k = self.curvature();
        let turn = k * s;
        // local frame: x along the initial heading, y to its left
        let (lx, ly) = if turn.abs() < 1e-8 {
            // series of sin(ks)/k and (1 - cos ks)/k
            (s - k * k * s * s * s / 6.0, k * s * s / 2.0)
        } else {
            (turn.sin() / k, (1.0 - turn.cos()) / k)
        };
        let (sh, ch) = self.initial_heading_rad.sin_cos();
        let pos = Point2::new(self.start.x + ch * lx - sh * ly, self.start.y + sh * lx + ch * ly);
        (pos, self.initial_heading_rad + turn)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_m > 0.0) || !self.cumulative_bend_rad.is_finite() {
            return Err(Error::Config("track length must be positive and bend finite".into()));
        }
        Ok(())
    }
}

/// Trapezoidal speed profile (triangular when the track is too short to
/// reach `v_max`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpeedProfile {
    pub v_max_mps: f64,
    pub accel_mps2: f64,
    pub decel_mps2: f64,
}

impl Default for SpeedProfile {
    fn default() -> Self {
        Self {
            v_max_mps: 15.0 / 3.6,
            accel_mps2: 0.5,
            decel_mps2: 0.5,
        }
    }
}

/// Phase boundaries of a speed profile over a given distance.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Phases {
    peak: f64,
    t_accel: f64,
    t_cruise: f64,
    t_decel: f64,
    length: f64,
}

impl SpeedProfile {
    pub fn validate(&self) -> Result<()> {
        if !(self.v_max_mps > 0.0 && self.accel_mps2 > 0.0 && self.decel_mps2 > 0.0) {
            return Err(Error::Config(
                "speed profile needs positive v_max, accel and decel".into(),
            ));
        }
        Ok(())
    }

    fn phases(&self, length: f64) -> Phases {
        let (a, d) = (self.accel_mps2, self.decel_mps2);
        let ramps = self.v_max_mps * self.v_max_mps * (1.0 / (2.0 * a) + 1.0 / (2.0 * d));
        let peak = if ramps <= length {
            self.v_max_mps
        } else {
            (2.0 * length * a * d / (a + d)).sqrt()
        };
        let t_accel = peak / a;
        let t_decel = peak / d;
        let cruise_len = length - peak * peak / (2.0 * a) - peak * peak / (2.0 * d);
        Phases {
            peak,
            t_accel,
            t_cruise: (cruise_len / peak).max(0.0),
            t_decel,
            length,
        }
    }

    pub fn duration(&self, length: f64) -> f64 {
        let p = self.phases(length);
        p.t_accel + p.t_cruise + p.t_decel
    }

    /// Arc length and speed at time `t`, clamped to the profile's span.
    pub fn distance_and_speed(&self, length: f64, t: f64) -> (f64, f64) {
        let p = self.phases(length);
        let (a, d) = (self.accel_mps2, self.decel_mps2);
        let s_accel = 0.5 * a * p.t_accel * p.t_accel;
        let t_brake = p.t_accel + p.t_cruise;
        if t <= 0.0 {
            (0.0, 0.0)
        } else if t < p.t_accel {
            (0.5 * a * t * t, a * t)
        } else if t < t_brake {
            (s_accel + p.peak * (t - p.t_accel), p.peak)
        } else if t < t_brake + p.t_decel {
            let tau = t_brake + p.t_decel - t;
            (p.length - 0.5 * d * tau * tau, d * tau)
        } else {
            (p.length, 0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VehicleState {
    pub t_s: f64,
    pub pos: Point2,
    pub speed_mps: f64,
    /// Heading relative to +X.
    pub aoh_rad: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RrhSite {
    pub pos: Point2,
}

impl Default for RrhSite {
    fn default() -> Self {
        Self {
            pos: Point2::new(205.0, 100.0),
        }
    }
}

/// Ground-truth motion: a track driven with a speed profile.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Trajectory {
    pub track: TrackModel,
    pub profile: SpeedProfile,
}

impl Trajectory {
    pub fn duration(&self) -> f64 {
        self.profile.duration(self.track.length_m)
    }

    pub fn distance_at(&self, t: f64) -> f64 {
        self.profile.distance_and_speed(self.track.length_m, t).0
    }

    pub fn speed_at(&self, t: f64) -> f64 {
        self.profile.distance_and_speed(self.track.length_m, t).1
    }

    pub fn validate(&self) -> Result<()> {
        self.track.validate()?;
        self.profile.validate()
    }
}

pub fn true_state(track: &TrackModel, profile: &SpeedProfile, t_s: f64) -> Result<VehicleState> {
    let total = profile.duration(track.length_m);
    // a hair of slack so the end time itself, however it was rounded, is accepted
    if !(t_s >= 0.0 && t_s <= total + 1e-9) {
        return Err(Error::Domain(format!("t = {t_s} s outside [0, {total}]")));
    }
    let (s, v) = profile.distance_and_speed(track.length_m, t_s);
    let (pos, heading) = track.pose_at(s);
    Ok(VehicleState {
        t_s,
        pos,
        speed_mps: v,
        aoh_rad: heading,
    })
}

/// Bearing from `from` to the radio head relative to +X (AoIS).
pub fn compute_aois(from: Point2, rrh: &RrhSite) -> Result<f64> {
    let dx = rrh.pos.x - from.x;
    let dy = rrh.pos.y - from.y;
    if dx == 0.0 && dy == 0.0 {
        return Err(Error::SingularGeometry);
    }
    Ok(dy.atan2(dx))
}

/// Heading from bearing and arrival angle: `β − θ`, wrapped.
pub fn compute_aoh(beta_rad: f64, aoa_rad: f64) -> f64 {
    wrap_angle(beta_rad - aoa_rad)
}

/// Angle of arrival seen by a vehicle in `state`: bearing minus heading.
pub fn true_aoa(state: &VehicleState, rrh: &RrhSite) -> Result<f64> {
    Ok(wrap_angle(compute_aois(state.pos, rrh)? - state.aoh_rad))
}

/// The angle a ULA actually resolves: `asin(sin θ)`, i.e. `θ` mirrored
/// into the front half-plane.
pub fn fold_to_front(aoa_rad: f64) -> f64 {
    aoa_rad.sin().clamp(-1.0, 1.0).asin()
}

/// Resolves the front/back ambiguity of a folded ULA angle by picking the
/// candidate (`θ` or its mirror `±π − θ`) closest to `predicted_rad`.
pub fn unfold_aoa(folded_rad: f64, predicted_rad: f64) -> f64 {
    use std::f64::consts::PI;
    let mirror = wrap_angle(if folded_rad >= 0.0 {
        PI - folded_rad
    } else {
        -PI - folded_rad
    });
    let gap = |a: f64| wrap_angle(a - predicted_rad).abs();
    if gap(mirror) < gap(folded_rad) {
        mirror
    } else {
        folded_rad
    }
}

/// Advances a pose along its current heading. The heading itself only
/// changes at wake-ups.
pub fn dead_reckon(est: &VehicleState, v_odo_mps: f64, dt_s: f64) -> Result<VehicleState> {
    if !(dt_s > 0.0) {
        return Err(Error::Domain(format!("dt = {dt_s} s must be positive")));
    }
    if !(v_odo_mps >= 0.0) {
        return Err(Error::Domain(format!(
            "odometer speed {v_odo_mps} must be non-negative"
        )));
    }
    let (s, c) = est.aoh_rad.sin_cos();
    Ok(VehicleState {
        t_s: est.t_s + dt_s,
        pos: Point2::new(est.pos.x + v_odo_mps * c * dt_s, est.pos.y + v_odo_mps * s * dt_s),
        speed_mps: v_odo_mps,
        aoh_rad: est.aoh_rad,
    })
}
