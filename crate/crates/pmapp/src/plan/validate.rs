//! Exact continuous-time plan validation.
//!
//! Unlike the discretized collision-pair machinery, the validator checks the
//! plan conditions on the continuous motion: per-segment speed, clearance of
//! whole segments from the boundary, and the closest approach of every pair
//! of periodically shifted trajectory copies, solved in closed form per
//! overlapping segment window.

use super::{PeriodicPlan, Trajectory};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    Endpoint,
    Velocity,
    Clearance,
    Collision,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Endpoint => "endpoint",
            ViolationKind::Velocity => "velocity",
            ViolationKind::Clearance => "clearance",
            ViolationKind::Collision => "collision",
        };
        f.write_str(s)
    }
}

/// One violated constraint family instance. `ids` identifies the offender:
/// `[n, m, k]` for endpoint/velocity/clearance and `[n, m, n', m', shift]`
/// for collisions (`shift` counts whole plan periods between the copies).
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub ids: Vec<i64>,
    /// Constraint slack at the worst point; negative means violated.
    pub worst_margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Checks endpoints, per-segment speed, exact segment clearance, and exact
/// periodic collision-freeness, reporting the worst margin per offender.
pub fn validate_plan(plan: &PeriodicPlan, tol: f64) -> ValidationReport {
    let mut violations = Vec::new();
    check_endpoints(plan, tol, &mut violations);
    check_velocity(plan, tol, &mut violations);
    check_clearance(plan, tol, &mut violations);
    check_collisions(plan, tol, &mut violations);
    ValidationReport::from_violations(violations)
}

fn check_endpoints(plan: &PeriodicPlan, tol: f64, out: &mut Vec<Violation>) {
    for traj in &plan.trajectories {
        let ep = &plan.env.endpoints[traj.stream];
        let d_start = traj.points[0].distance(ep.start);
        let d_goal = traj.points[traj.segments()].distance(ep.goal);
        let worst = d_start.max(d_goal);
        if worst > tol {
            out.push(Violation {
                kind: ViolationKind::Endpoint,
                ids: vec![traj.stream as i64, traj.slot as i64, 0],
                worst_margin: -worst,
            });
        }
    }
}

fn check_velocity(plan: &PeriodicPlan, tol: f64, out: &mut Vec<Violation>) {
    for traj in &plan.trajectories {
        let mut worst = f64::INFINITY;
        let mut worst_k = 0;
        for k in 0..traj.segments() {
            let v = traj.points[k + 1].distance(traj.points[k]) / traj.dt;
            let margin = plan.v_max - v;
            if margin < worst {
                worst = margin;
                worst_k = k;
            }
        }
        if worst < -tol {
            out.push(Violation {
                kind: ViolationKind::Velocity,
                ids: vec![traj.stream as i64, traj.slot as i64, worst_k as i64],
                worst_margin: worst,
            });
        }
    }
}

fn check_clearance(plan: &PeriodicPlan, tol: f64, out: &mut Vec<Violation>) {
    let polygon = &plan.env.polygon;
    for traj in &plan.trajectories {
        let mut worst = f64::INFINITY;
        let mut worst_k = 0;
        for k in 0..traj.segments() {
            let (a, b) = (traj.points[k], traj.points[k + 1]);
            let clearance = if polygon.contains_segment(a, b) {
                polygon.segment_boundary_distance(a, b)
            } else {
                // The segment leaves the region; report the deepest sampled
                // excursion as a (negative) clearance.
                let mut min_signed: f64 = 0.0;
                for i in 0..=16 {
                    let p = a + (b - a) * (i as f64 / 16.0);
                    min_signed = min_signed.min(polygon.signed_distance(p));
                }
                min_signed
            };
            let margin = clearance - plan.r;
            if margin < worst {
                worst = margin;
                worst_k = k;
            }
        }
        if worst < -tol {
            out.push(Violation {
                kind: ViolationKind::Clearance,
                ids: vec![traj.stream as i64, traj.slot as i64, worst_k as i64],
                worst_margin: worst,
            });
        }
    }
}

fn check_collisions(plan: &PeriodicPlan, tol: f64, out: &mut Vec<Violation>) {
    let period = plan.cycle as f64 * plan.tau;
    let count = plan.trajectories.len();
    for i in 0..count {
        for j in i..count {
            let a = &plan.trajectories[i];
            let b = &plan.trajectories[j];
            let slot_shift = (b.slot as f64 - a.slot as f64) * plan.tau;
            // Copies of b appear shifted by slot_shift + w*period for all
            // integers w; only shifts with overlapping windows matter.
            let w_lo = ((-b.duration() - slot_shift) / period).floor() as i64;
            let w_hi = ((a.duration() - slot_shift) / period).ceil() as i64;
            for w in w_lo..=w_hi {
                if i == j && w <= 0 {
                    // Same trajectory: w=0 is the copy itself and negative
                    // shifts mirror positive ones.
                    continue;
                }
                let shift = slot_shift + w as f64 * period;
                if shift >= a.duration() || shift + b.duration() <= 0.0 {
                    continue;
                }
                let min_dist = copy_pair_min_distance(a, b, shift);
                let margin = min_dist - 2.0 * plan.r;
                if margin < -tol {
                    out.push(Violation {
                        kind: ViolationKind::Collision,
                        ids: vec![
                            a.stream as i64,
                            a.slot as i64,
                            b.stream as i64,
                            b.slot as i64,
                            w,
                        ],
                        worst_margin: margin,
                    });
                }
            }
        }
    }
}

/// Exact minimum distance between trajectory `a` started at time 0 and
/// trajectory `b` started at time `shift`, over their overlapping existence
/// window. Both motions are piecewise linear, so the squared distance is a
/// quadratic on each common segment window.
pub(crate) fn copy_pair_min_distance(a: &Trajectory, b: &Trajectory, shift: f64) -> f64 {
    let start = 0.0f64.max(shift);
    let end = a.duration().min(shift + b.duration());
    if end < start {
        return f64::INFINITY;
    }

    let mut breaks = vec![start, end];
    let ka = (start / a.dt).ceil() as i64;
    let mut k = ka;
    loop {
        let t = k as f64 * a.dt;
        if t >= end {
            break;
        }
        if t > start {
            breaks.push(t);
        }
        k += 1;
    }
    let kb = ((start - shift) / b.dt).ceil() as i64;
    let mut k = kb;
    loop {
        let t = shift + k as f64 * b.dt;
        if t >= end {
            break;
        }
        if t > start {
            breaks.push(t);
        }
        k += 1;
    }
    breaks.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let mut min_dist = f64::INFINITY;
    for w in breaks.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let mid = 0.5 * (t0 + t1);
        let seg_a = segment_index(a, mid);
        let seg_b = segment_index(b, mid - shift);
        let va = (a.points[seg_a + 1] - a.points[seg_a]) / a.dt;
        let vb = (b.points[seg_b + 1] - b.points[seg_b]) / b.dt;
        let pa = a.points[seg_a] + va * (t0 - seg_a as f64 * a.dt);
        let pb = b.points[seg_b] + vb * (t0 - shift - seg_b as f64 * b.dt);
        let p0 = pa - pb;
        let vel = va - vb;
        let span = t1 - t0;
        let v2 = vel.norm_squared();
        let u = if v2 > 0.0 {
            (-p0.dot(vel) / v2).clamp(0.0, span)
        } else {
            0.0
        };
        for cand in [0.0, u, span] {
            let d = (p0 + vel * cand).norm();
            if d < min_dist {
                min_dist = d;
            }
        }
    }
    min_dist
}

fn segment_index(traj: &Trajectory, t: f64) -> usize {
    let k = traj.segments();
    ((t / traj.dt).floor() as usize).min(k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Environment, EndpointPair, Point, Polygon};
    use crate::plan::PeriodicPlan;

    fn corridor_env(pairs: Vec<EndpointPair>) -> Environment {
        let polygon = Polygon::new(vec![
            Point::new(-10.0, -5.0),
            Point::new(10.0, -5.0),
            Point::new(10.0, 5.0),
            Point::new(-10.0, 5.0),
        ]);
        Environment::new("corridor", polygon, pairs).unwrap()
    }

    fn straight_trajectory(stream: usize, slot: usize, from: Point, to: Point, k: usize, dt: f64) -> Trajectory {
        let points = (0..=k)
            .map(|i| from + (to - from) * (i as f64 / k as f64))
            .collect();
        Trajectory { stream, slot, points, dt }
    }

    #[test]
    fn parallel_lanes_validate() {
        let env = corridor_env(vec![
            EndpointPair { start: Point::new(-8.0, -1.0), goal: Point::new(8.0, -1.0) },
            EndpointPair { start: Point::new(-8.0, 1.0), goal: Point::new(8.0, 1.0) },
        ]);
        let plan = PeriodicPlan {
            env,
            cycle: 1,
            tau: 2.0,
            r: 0.5,
            v_max: 1.0,
            trajectories: vec![
                straight_trajectory(0, 0, Point::new(-8.0, -1.0), Point::new(8.0, -1.0), 16, 1.0),
                straight_trajectory(1, 0, Point::new(-8.0, 1.0), Point::new(8.0, 1.0), 16, 1.0),
            ],
        };
        let report = validate_plan(&plan, 1e-6);
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn same_stream_spacing_depends_on_tau() {
        let env = corridor_env(vec![EndpointPair {
            start: Point::new(-2.0, 0.0),
            goal: Point::new(2.0, 0.0),
        }]);
        let make = |tau: f64| PeriodicPlan {
            env: env.clone(),
            cycle: 1,
            tau,
            r: 0.5,
            v_max: 1.0,
            trajectories: vec![straight_trajectory(
                0,
                0,
                Point::new(-2.0, 0.0),
                Point::new(2.0, 0.0),
                8,
                0.5,
            )],
        };
        // Successive agents on the shared line are spaced tau * v apart.
        let ok = validate_plan(&make(1.5), 1e-6);
        assert!(ok.ok, "{:?}", ok.violations);

        let bad = validate_plan(&make(0.9), 1e-6);
        assert!(!bad.ok);
        assert!(bad
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Collision && (v.worst_margin + 0.1).abs() < 1e-9));
    }

    #[test]
    fn speed_and_endpoint_violations_are_reported() {
        let env = corridor_env(vec![EndpointPair {
            start: Point::new(-8.0, 0.0),
            goal: Point::new(8.0, 0.0),
        }]);
        let mut plan = PeriodicPlan {
            env,
            cycle: 1,
            tau: 4.0,
            r: 0.5,
            v_max: 1.0,
            trajectories: vec![straight_trajectory(
                0,
                0,
                Point::new(-8.0, 0.0),
                Point::new(8.0, 0.0),
                8,
                1.0,
            )],
        };
        // 16 length units in 8 time units: speed 2.
        let report = validate_plan(&plan, 1e-6);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Velocity && (v.worst_margin + 1.0).abs() < 1e-9));

        plan.trajectories[0].points[8] = Point::new(7.0, 0.0);
        let report = validate_plan(&plan, 1e-6);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Endpoint));
    }

    #[test]
    fn clearance_checks_whole_segments() {
        // An L-shaped region where a segment chord cuts past the inner corner.
        let polygon = Polygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 10.0),
            Point::new(7.0, 10.0),
            Point::new(7.0, 3.0),
            Point::new(0.0, 3.0),
        ]);
        let env = Environment::new(
            "l",
            polygon,
            vec![EndpointPair { start: Point::new(1.0, 1.5), goal: Point::new(8.5, 8.0) }],
        )
        .unwrap();
        // Two segments bending exactly at the inner corner: clearance is zero
        // there even though other waypoints are well inside.
        let plan = PeriodicPlan {
            env,
            cycle: 1,
            tau: 100.0,
            r: 0.5,
            v_max: 10.0,
            trajectories: vec![Trajectory {
                stream: 0,
                slot: 0,
                points: vec![Point::new(1.0, 1.5), Point::new(7.0, 3.0), Point::new(8.5, 8.0)],
                dt: 4.0,
            }],
        };
        let report = validate_plan(&plan, 1e-6);
        assert!(report
            .violations
            .iter()
            .any(|v| v.kind == ViolationKind::Clearance && (v.worst_margin + 0.5).abs() < 1e-9));
    }

    /// Dense time-sampling oracle: sample every pair of shifted copies on a
    /// fine grid and return the worst pairwise distance margin.
    fn sampled_collision_margin(plan: &PeriodicPlan, step: f64) -> f64 {
        let period = plan.cycle as f64 * plan.tau;
        let mut worst = f64::INFINITY;
        let count = plan.trajectories.len();
        for i in 0..count {
            for j in i..count {
                let a = &plan.trajectories[i];
                let b = &plan.trajectories[j];
                let slot_shift = (b.slot as f64 - a.slot as f64) * plan.tau;
                let w_lo = ((-b.duration() - slot_shift) / period).floor() as i64 - 1;
                let w_hi = ((a.duration() - slot_shift) / period).ceil() as i64 + 1;
                for w in w_lo..=w_hi {
                    if i == j && w <= 0 {
                        continue;
                    }
                    let shift = slot_shift + w as f64 * period;
                    let start = 0.0f64.max(shift);
                    let end = a.duration().min(shift + b.duration());
                    if end <= start {
                        continue;
                    }
                    let steps = ((end - start) / step).ceil() as usize;
                    for s in 0..=steps {
                        let t = (start + s as f64 * step).min(end);
                        let pa = a.position_clamped(t);
                        let pb = b.position_clamped(t - shift);
                        worst = worst.min(pa.distance(pb) - 2.0 * plan.r);
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn validator_agrees_with_dense_sampling() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for case in 0..25 {
            let n_streams = rng.random_range(1..=2);
            let m_cycle = rng.random_range(1..=2);
            let k = 4;
            let mut endpoints = Vec::new();
            let mut trajectories = Vec::new();
            for n in 0..n_streams {
                let y0 = rng.random_range(-3.0..3.0);
                let y1 = rng.random_range(-3.0..3.0);
                let start = Point::new(-6.0, y0);
                let goal = Point::new(6.0, y1);
                endpoints.push(EndpointPair { start, goal });
                for m in 0..m_cycle {
                    let mut points: Vec<Point> = (0..=k)
                        .map(|i| start + (goal - start) * (i as f64 / k as f64))
                        .collect();
                    for p in points.iter_mut().take(k).skip(1) {
                        p.y += rng.random_range(-0.5..0.5);
                    }
                    trajectories.push(Trajectory {
                        stream: n,
                        slot: m,
                        points,
                        dt: rng.random_range(1.0..2.0),
                    });
                }
            }
            let plan = PeriodicPlan {
                env: corridor_env(endpoints),
                cycle: m_cycle,
                tau: rng.random_range(1.0..4.0),
                r: 0.5,
                v_max: 10.0,
                trajectories,
            };
            let report = validate_plan(&plan, 1e-6);
            let exact_collision_ok = !report
                .violations
                .iter()
                .any(|v| v.kind == ViolationKind::Collision);
            let sampled = sampled_collision_margin(&plan, 1e-3 * plan.tau);
            // Only compare when the sampled margin is clearly away from the
            // threshold; near-zero margins are resolution-limited.
            if sampled.abs() > 1e-3 {
                assert_eq!(exact_collision_ok, sampled > 0.0, "case {case}: margin {sampled}");
            }
        }
    }
}
