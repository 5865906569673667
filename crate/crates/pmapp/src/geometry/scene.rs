//! Parametric construction of the built-in intersection scenes.

use super::{Environment, EndpointPair, GeometryError, Point, Polygon};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// The built-in intersection layouts, addressable as scenes `a`..`f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SceneKind {
    /// (a) Crossing of two one-way roads.
    TwoOneWayCrossing,
    /// (b) Crossing of a one-way and a two-way road.
    OneWayTwoWayCrossing,
    /// (c) Crossing of two two-way roads, small.
    TwoWayCrossingSmall,
    /// (d) Crossing of two two-way roads, large.
    TwoWayCrossingLarge,
    /// (e) T-junction, small.
    TJunctionSmall,
    /// (f) T-junction, large.
    TJunctionLarge,
}

impl SceneKind {
    pub const ALL: [SceneKind; 6] = [
        SceneKind::TwoOneWayCrossing,
        SceneKind::OneWayTwoWayCrossing,
        SceneKind::TwoWayCrossingSmall,
        SceneKind::TwoWayCrossingLarge,
        SceneKind::TJunctionSmall,
        SceneKind::TJunctionLarge,
    ];

    /// Single-letter scene id `a`..`f`.
    pub fn letter(self) -> char {
        match self {
            SceneKind::TwoOneWayCrossing => 'a',
            SceneKind::OneWayTwoWayCrossing => 'b',
            SceneKind::TwoWayCrossingSmall => 'c',
            SceneKind::TwoWayCrossingLarge => 'd',
            SceneKind::TJunctionSmall => 'e',
            SceneKind::TJunctionLarge => 'f',
        }
    }
}

impl FromStr for SceneKind {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" | "two-one-way-crossing" => Ok(SceneKind::TwoOneWayCrossing),
            "b" | "one-way-two-way-crossing" => Ok(SceneKind::OneWayTwoWayCrossing),
            "c" | "two-way-crossing-small" => Ok(SceneKind::TwoWayCrossingSmall),
            "d" | "two-way-crossing-large" => Ok(SceneKind::TwoWayCrossingLarge),
            "e" | "t-junction-small" => Ok(SceneKind::TJunctionSmall),
            "f" | "t-junction-large" => Ok(SceneKind::TJunctionLarge),
            other => Err(GeometryError::UnknownScene(other.to_string())),
        }
    }
}

/// Parameters for a built-in scene.
///
/// `arm_length` is measured from the intersection center to the arm tip.
/// Two-way roads place their lanes at `+-lane_offset` from the road axis.
/// Starts and goals are inset from each arm tip by `road_half_width` so that
/// endpoints keep full clearance from the closing edge of the arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub kind: SceneKind,
    pub road_half_width: f64,
    pub arm_length: f64,
    pub lane_offset: f64,
}

impl SceneSpec {
    /// The default parameterization for a scene kind. The two `large`
    /// variants scale the road cross-section by 1.5 and lengthen the arms.
    pub fn preset(kind: SceneKind) -> Self {
        match kind {
            SceneKind::TwoWayCrossingLarge | SceneKind::TJunctionLarge => SceneSpec {
                kind,
                road_half_width: 2.25,
                arm_length: 6.5,
                lane_offset: 1.125,
            },
            _ => SceneSpec {
                kind,
                road_half_width: 1.5,
                arm_length: 5.0,
                lane_offset: 0.75,
            },
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.road_half_width > 0.0) {
            return Err(GeometryError::InvalidSpec(
                "road_half_width must be positive".into(),
            ));
        }
        if !(self.arm_length > self.road_half_width) {
            return Err(GeometryError::InvalidSpec(
                "arm_length must exceed road_half_width".into(),
            ));
        }
        if !(self.lane_offset < self.road_half_width) {
            return Err(GeometryError::InvalidSpec(
                "lane_offset must be smaller than road_half_width".into(),
            ));
        }
        if self.lane_offset < 0.0 {
            return Err(GeometryError::InvalidSpec(
                "lane_offset must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Plus-shaped free space of two perpendicular roads crossing at the origin.
fn cross_polygon(w: f64, l: f64) -> Polygon {
    Polygon::new(vec![
        Point::new(l, -w),
        Point::new(l, w),
        Point::new(w, w),
        Point::new(w, l),
        Point::new(-w, l),
        Point::new(-w, w),
        Point::new(-l, w),
        Point::new(-l, -w),
        Point::new(-w, -w),
        Point::new(-w, -l),
        Point::new(w, -l),
        Point::new(w, -w),
    ])
}

/// T-shaped free space: a full west-east road plus a south arm.
fn tee_polygon(w: f64, l: f64) -> Polygon {
    Polygon::new(vec![
        Point::new(l, -w),
        Point::new(l, w),
        Point::new(-l, w),
        Point::new(-l, -w),
        Point::new(-w, -w),
        Point::new(-w, -l),
        Point::new(w, -l),
        Point::new(w, -w),
    ])
}

pub(super) fn build(spec: &SceneSpec) -> Result<Environment, GeometryError> {
    spec.validate()?;
    let w = spec.road_half_width;
    let l = spec.arm_length;
    let o = spec.lane_offset;
    // Endpoints sit one half-width away from the arm tip.
    let e = l - w;
    let pair = |sx: f64, sy: f64, gx: f64, gy: f64| EndpointPair {
        start: Point::new(sx, sy),
        goal: Point::new(gx, gy),
    };

    let (polygon, endpoints) = match spec.kind {
        SceneKind::TwoOneWayCrossing => (
            cross_polygon(w, l),
            vec![
                pair(-e, 0.0, e, 0.0), // west -> east
                pair(0.0, -e, 0.0, e), // south -> north
            ],
        ),
        SceneKind::OneWayTwoWayCrossing => (
            cross_polygon(w, l),
            vec![
                pair(-e, 0.0, e, 0.0), // west -> east (one-way road)
                pair(o, -e, o, e),     // south -> north
                pair(-o, e, -o, -e),   // north -> south
            ],
        ),
        SceneKind::TwoWayCrossingSmall | SceneKind::TwoWayCrossingLarge => (
            cross_polygon(w, l),
            vec![
                pair(-e, -o, e, -o), // west -> east
                pair(e, o, -e, o),   // east -> west
                pair(o, -e, o, e),   // south -> north
                pair(-o, e, -o, -e), // north -> south
            ],
        ),
        SceneKind::TJunctionSmall | SceneKind::TJunctionLarge => (
            tee_polygon(w, l),
            // Rotational pattern: each arm hosts one inbound and one
            // outbound lane (two-way traffic on every arm).
            vec![
                pair(-e, -o, e, -o), // west -> east, straight through
                pair(e, o, -o, -e),  // east -> south turn
                pair(o, -e, -e, o),  // south -> west turn
            ],
        ),
    };

    Environment::new(spec.kind.letter().to_string(), polygon, endpoints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_environment, distance_to_boundary};

    #[test]
    fn scene_a_layout() {
        let spec = SceneSpec::preset(SceneKind::TwoOneWayCrossing);
        let env = build_environment(&spec).unwrap();
        assert_eq!(env.n_streams(), 2);
        assert_eq!(env.name, "a");
        assert_eq!(env.endpoints[0].start, Point::new(-3.5, 0.0));
        assert_eq!(env.endpoints[1].start, Point::new(0.0, -3.5));
        assert_eq!(env.endpoints[0].goal, Point::new(3.5, 0.0));
    }

    #[test]
    fn stream_counts_per_scene() {
        let expect = [2usize, 3, 4, 4, 3, 3];
        for (kind, want) in SceneKind::ALL.iter().zip(expect) {
            let env = build_environment(&SceneSpec::preset(*kind)).unwrap();
            assert_eq!(env.n_streams(), want, "scene {}", kind.letter());
        }
    }

    #[test]
    fn endpoints_strictly_inside_with_clearance() {
        for kind in SceneKind::ALL {
            let env = build_environment(&SceneSpec::preset(kind)).unwrap();
            for ep in &env.endpoints {
                assert!(distance_to_boundary(&env, ep.start) >= 0.5);
                assert!(distance_to_boundary(&env, ep.goal) >= 0.5);
            }
        }
    }

    #[test]
    fn deterministic_construction() {
        let spec = SceneSpec::preset(SceneKind::TJunctionLarge);
        let a = build_environment(&spec).unwrap();
        let b = build_environment(&spec).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn rejects_bad_lane_offset() {
        let mut spec = SceneSpec::preset(SceneKind::TwoWayCrossingSmall);
        spec.lane_offset = spec.road_half_width;
        assert!(matches!(
            build_environment(&spec),
            Err(GeometryError::InvalidSpec(_))
        ));
    }

    #[test]
    fn scene_names_parse() {
        assert_eq!("a".parse::<SceneKind>().unwrap(), SceneKind::TwoOneWayCrossing);
        assert_eq!(
            "t-junction-large".parse::<SceneKind>().unwrap(),
            SceneKind::TJunctionLarge
        );
        assert!("z".parse::<SceneKind>().is_err());
    }
}
