//! Plan file format: JSON with either a named built-in environment or the
//! environment inlined. Values round-trip exactly.

use super::{PeriodicPlan, Trajectory};
use crate::geometry::{Environment, Point, SceneKind, SceneSpec};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanFileError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("plan parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported plan version {0}")]
    Version(u32),
    #[error("plan file is inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EnvRef {
    Name(String),
    Inline(Environment),
}

#[derive(Serialize, Deserialize)]
struct TrajectoryDto {
    n: usize,
    m: usize,
    dt: f64,
    points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct PlanDto {
    version: u32,
    env: EnvRef,
    #[serde(rename = "M")]
    cycle: usize,
    #[serde(rename = "N")]
    n_streams: usize,
    #[serde(rename = "K")]
    k_segments: usize,
    tau: f64,
    r: f64,
    v_max: f64,
    trajectories: Vec<TrajectoryDto>,
}

pub fn plan_to_json(plan: &PeriodicPlan) -> String {
    // Use the short scene name when the environment is byte-identical to the
    // built-in it claims to be; otherwise inline it.
    let env = match plan.env.name.parse::<SceneKind>() {
        Ok(kind)
            if crate::geometry::build_environment(&SceneSpec::preset(kind)).ok().as_ref()
                == Some(&plan.env) =>
        {
            EnvRef::Name(plan.env.name.clone())
        }
        _ => EnvRef::Inline(plan.env.clone()),
    };
    let dto = PlanDto {
        version: 1,
        env,
        cycle: plan.cycle,
        n_streams: plan.n_streams(),
        k_segments: plan.k_segments(),
        tau: plan.tau,
        r: plan.r,
        v_max: plan.v_max,
        trajectories: plan
            .trajectories
            .iter()
            .map(|t| TrajectoryDto {
                n: t.stream,
                m: t.slot,
                dt: t.dt,
                points: t.points.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("plan serializes")
}

pub fn plan_from_json(text: &str) -> Result<PeriodicPlan, PlanFileError> {
    let dto: PlanDto = serde_json::from_str(text)?;
    if dto.version != 1 {
        return Err(PlanFileError::Version(dto.version));
    }
    let env = match dto.env {
        EnvRef::Name(name) => Environment::resolve(&name)?,
        EnvRef::Inline(env) => env,
    };
    if env.n_streams() != dto.n_streams {
        return Err(PlanFileError::Inconsistent(format!(
            "N={} but environment has {} streams",
            dto.n_streams,
            env.n_streams()
        )));
    }
    let mut trajectories: Vec<Trajectory> = dto
        .trajectories
        .into_iter()
        .map(|t| Trajectory {
            stream: t.n,
            slot: t.m,
            points: t.points,
            dt: t.dt,
        })
        .collect();
    trajectories.sort_by_key(|t| (t.stream, t.slot));
    let plan = PeriodicPlan {
        env,
        cycle: dto.cycle,
        tau: dto.tau,
        r: dto.r,
        v_max: dto.v_max,
        trajectories,
    };
    plan.check_invariants()
        .map_err(|e| PlanFileError::Inconsistent(e.to_string()))?;
    if plan.k_segments() != dto.k_segments {
        return Err(PlanFileError::Inconsistent(format!(
            "K={} but trajectories have {} segments",
            dto.k_segments,
            plan.k_segments()
        )));
    }
    Ok(plan)
}

pub fn save_plan(plan: &PeriodicPlan, path: impl AsRef<Path>) -> Result<(), PlanFileError> {
    std::fs::write(path, plan_to_json(plan))?;
    Ok(())
}

pub fn load_plan(path: impl AsRef<Path>) -> Result<PeriodicPlan, PlanFileError> {
    plan_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_environment, EndpointPair, Polygon};

    fn sample_plan() -> PeriodicPlan {
        let env = build_environment(&SceneSpec::preset(SceneKind::TwoOneWayCrossing)).unwrap();
        let endpoints = env.endpoints.clone();
        let mk = |stream: usize, slot: usize, ep: &EndpointPair| {
            let k = 4;
            let points = (0..=k)
                .map(|i| ep.start + (ep.goal - ep.start) * (i as f64 / k as f64))
                .collect();
            Trajectory { stream, slot, points, dt: 0.123456789012345 + slot as f64 }
        };
        PeriodicPlan {
            env,
            cycle: 2,
            tau: 2.0345678901234567,
            r: 0.5,
            v_max: 1.0,
            trajectories: vec![
                mk(0, 0, &endpoints[0]),
                mk(0, 1, &endpoints[0]),
                mk(1, 0, &endpoints[1]),
                mk(1, 1, &endpoints[1]),
            ],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let plan = sample_plan();
        let text = plan_to_json(&plan);
        let back = plan_from_json(&text).unwrap();
        assert_eq!(plan, back);
        // Builtin environments serialize by name.
        assert!(text.contains("\"env\": \"a\""));
    }

    #[test]
    fn inline_env_round_trips() {
        let mut plan = sample_plan();
        plan.env = Environment::new(
            "custom",
            Polygon::new(vec![
                Point::new(-10.0, -10.0),
                Point::new(10.0, -10.0),
                Point::new(10.0, 10.0),
                Point::new(-10.0, 10.0),
            ]),
            plan.env.endpoints.clone(),
        )
        .unwrap();
        let text = plan_to_json(&plan);
        let back = plan_from_json(&text).unwrap();
        assert_eq!(plan, back);
    }

    #[test]
    fn truncated_file_is_a_parse_error() {
        let text = plan_to_json(&sample_plan());
        let cut = &text[..text.len() / 2];
        assert!(matches!(plan_from_json(cut), Err(PlanFileError::Parse(_))));
    }

    #[test]
    fn inconsistent_counts_are_rejected() {
        let mut plan = sample_plan();
        plan.trajectories.pop();
        let mut dtoish = plan_to_json(&sample_plan());
        // Hand-edit K to mismatch.
        dtoish = dtoish.replace("\"K\": 4", "\"K\": 8");
        assert!(matches!(
            plan_from_json(&dtoish),
            Err(PlanFileError::Inconsistent(_))
        ));
    }
}
