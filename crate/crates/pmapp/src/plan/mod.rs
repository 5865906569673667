//! Periodic plan data model: discretized trajectories, the periodic residue
//! and collision-pair machinery, and an exact continuous-time validator.

mod file;
mod validate;

pub use file::{load_plan, plan_from_json, plan_to_json, save_plan, PlanFileError};
pub use validate::{validate_plan, ValidationReport, Violation, ViolationKind};

use crate::geometry::{Environment, Point};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("time {t} outside trajectory domain [0, {duration}]")]
    OutOfDomain { t: f64, duration: f64 },
    #[error("invalid plan: {0}")]
    Invalid(String),
}

/// One discretized trajectory: `K+1` waypoints visited at a fixed timestep.
///
/// The motion is piecewise linear with constant velocity on each segment, so
/// the trajectory spans `[0, K * dt]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Stream index `n` (0-based).
    pub stream: usize,
    /// Period slot `m` in `[0, M)`.
    pub slot: usize,
    pub points: Vec<Point>,
    /// Timestep between consecutive waypoints, > 0.
    pub dt: f64,
}

impl Trajectory {
    /// Number of segments `K`.
    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Total duration `K * dt`.
    pub fn duration(&self) -> f64 {
        self.segments() as f64 * self.dt
    }

    /// Piecewise-linear position at time `t` in `[0, duration]`.
    pub fn position_at(&self, t: f64) -> Result<Point, PlanError> {
        let duration = self.duration();
        if t < 0.0 || t > duration {
            return Err(PlanError::OutOfDomain { t, duration });
        }
        Ok(self.position_clamped(t))
    }

    pub(crate) fn position_clamped(&self, t: f64) -> Point {
        let k = self.segments();
        let idx = ((t / self.dt).floor() as usize).min(k.saturating_sub(1));
        let frac = (t - idx as f64 * self.dt) / self.dt;
        let frac = frac.clamp(0.0, 1.0);
        self.points[idx] + (self.points[idx + 1] - self.points[idx]) * frac
    }
}

/// A periodic plan: `M x N` trajectories reused every `M` periods of length
/// `tau`, for circular agents of radius `r` limited to speed `v_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPlan {
    pub env: Environment,
    /// Cycle length `M`.
    pub cycle: usize,
    /// Period between consecutive agent appearances at every start.
    pub tau: f64,
    /// Agent radius.
    pub r: f64,
    pub v_max: f64,
    /// Trajectories indexed by `n * M + m`.
    pub trajectories: Vec<Trajectory>,
}

impl PeriodicPlan {
    pub fn n_streams(&self) -> usize {
        self.env.n_streams()
    }

    /// Shared segment count `K` (identical across trajectories).
    pub fn k_segments(&self) -> usize {
        self.trajectories[0].segments()
    }

    pub fn trajectory(&self, stream: usize, slot: usize) -> &Trajectory {
        &self.trajectories[stream * self.cycle + slot]
    }

    pub fn check_invariants(&self) -> Result<(), PlanError> {
        let n = self.n_streams();
        if self.trajectories.len() != n * self.cycle {
            return Err(PlanError::Invalid(format!(
                "expected {} trajectories, found {}",
                n * self.cycle,
                self.trajectories.len()
            )));
        }
        if !(self.tau > 0.0) || !(self.v_max > 0.0) || self.r < 0.0 {
            return Err(PlanError::Invalid(
                "tau and v_max must be positive, r nonnegative".into(),
            ));
        }
        let k = self.k_segments();
        if k < 1 {
            return Err(PlanError::Invalid("trajectories need at least one segment".into()));
        }
        for stream in 0..n {
            for slot in 0..self.cycle {
                let traj = self.trajectory(stream, slot);
                if traj.stream != stream || traj.slot != slot {
                    return Err(PlanError::Invalid(format!(
                        "trajectory at ({stream},{slot}) is labeled ({},{})",
                        traj.stream, traj.slot
                    )));
                }
                if traj.segments() != k {
                    return Err(PlanError::Invalid(
                        "all trajectories must share the same K".into(),
                    ));
                }
                if !(traj.dt > 0.0) {
                    return Err(PlanError::Invalid("dt must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// `t` reduced modulo `q` into `[0, q)`, with exact floor semantics for
/// negative `t`.
pub fn residue(t: f64, q: f64) -> f64 {
    debug_assert!(q > 0.0);
    let r = t - (t / q).floor() * q;
    // Guard against rounding landing exactly on q.
    if r >= q {
        r - q
    } else if r < 0.0 {
        0.0
    } else {
        r
    }
}

/// One periodically interacting waypoint/segment pair: waypoint `k` of
/// trajectory `(n, m)` against segment `kp` of trajectory `(np, mp)`,
/// interpolated at the cached `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionPair {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub np: usize,
    pub mp: usize,
    pub kp: usize,
    pub alpha: f64,
}

/// The index set of periodically interacting waypoint/segment pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CollisionPairSet {
    pub pairs: Vec<CollisionPair>,
}

impl CollisionPairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Enumerates every pair whose periodic time offset lands the waypoint of one
/// trajectory inside a segment window of another (possibly the same)
/// trajectory, caching the interpolation coefficient.
pub fn collision_pairs(plan: &PeriodicPlan) -> CollisionPairSet {
    let n_streams = plan.n_streams();
    let m_cycle = plan.cycle;
    let k_segs = plan.k_segments();
    let period = m_cycle as f64 * plan.tau;
    let mut pairs = Vec::new();
    for n in 0..n_streams {
        for m in 0..m_cycle {
            let dt = plan.trajectory(n, m).dt;
            for k in 0..k_segs {
                for np in 0..n_streams {
                    for mp in 0..m_cycle {
                        let dtp = plan.trajectory(np, mp).dt;
                        let base = (m as f64 - mp as f64) * plan.tau + k as f64 * dt;
                        for kp in 0..k_segs {
                            if (n, m, k) == (np, mp, kp) {
                                continue;
                            }
                            let res = residue(base - kp as f64 * dtp, period);
                            if res < dtp {
                                pairs.push(CollisionPair {
                                    n,
                                    m,
                                    k,
                                    np,
                                    mp,
                                    kp,
                                    alpha: res / dtp,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    CollisionPairSet { pairs }
}

/// Distance between the waypoint and the interpolated point of a collision
/// pair, together with the cached interpolation coefficient.
pub fn pair_distance(plan: &PeriodicPlan, pair: &CollisionPair) -> (f64, f64) {
    let x = plan.trajectory(pair.n, pair.m).points[pair.k];
    let other = plan.trajectory(pair.np, pair.mp);
    let a = other.points[pair.kp];
    let b = other.points[pair.kp + 1];
    let interp = a * (1.0 - pair.alpha) + b * pair.alpha;
    (x.distance(interp), pair.alpha)
}
