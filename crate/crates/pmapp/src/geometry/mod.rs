//! 2D environment model: polygonal free space, boundary clearance queries,
//! shortest reference paths, and path-path crossing points.

mod paths;
mod scene;

pub use paths::{path_intersections, shortest_path, PathCrossing};
pub use scene::{SceneKind, SceneSpec};

use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("invalid scene spec: {0}")]
    InvalidSpec(String),
    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),
    #[error("stream {0} has no path from start to goal inside the free space")]
    Unreachable(usize),
    #[error("paths {0} and {1} overlap along a positive-length segment")]
    DegenerateOverlap(usize, usize),
    #[error("unknown scene name {0:?} (expected a..f or a scene kind)")]
    UnknownScene(String),
}

/// A point (or vector) in the plane. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product; positive when `other` is ccw of `self`.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_squared(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

impl From<Point> for (f64, f64) {
    fn from(p: Point) -> Self {
        (p.x, p.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, rhs: f64) -> Point {
        Point::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    p.distance(closest_on_segment(p, a, b))
}

/// Closest point to `p` on the closed segment `[a, b]`.
pub fn closest_on_segment(p: Point, a: Point, b: Point) -> Point {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return a;
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    a + ab * t
}

/// Minimum distance between closed segments `[a, b]` and `[c, d]`.
pub fn segment_segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    if segments_properly_cross(a, b, c, d).is_some() {
        return 0.0;
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Transversal interior crossing of `[a, b]` and `[c, d]`, if any.
///
/// Returns the parameters `(s, t)` of the crossing along each segment.
/// Touching at a shared endpoint or running collinear does not count.
pub fn segments_properly_cross(a: Point, b: Point, c: Point, d: Point) -> Option<(f64, f64)> {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let qp = c - a;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    let eps = 1e-12;
    if t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps {
        Some((t, u))
    } else {
        None
    }
}

/// Whether `[a, b]` and `[c, d]` are collinear and overlap over positive length.
fn segments_overlap_collinear(a: Point, b: Point, c: Point, d: Point) -> bool {
    let r = b - a;
    let eps = 1e-9;
    if r.cross(d - c).abs() > eps * r.norm().max(1.0) * (d - c).norm().max(1.0) {
        return false;
    }
    if r.cross(c - a).abs() > eps * r.norm().max(1.0) {
        return false;
    }
    // Collinear: compare parameter intervals along [a, b].
    let len2 = r.norm_squared();
    if len2 == 0.0 {
        return false;
    }
    let tc = (c - a).dot(r) / len2;
    let td = (d - a).dot(r) / len2;
    let (lo, hi) = if tc < td { (tc, td) } else { (td, tc) };
    lo.max(0.0) + 1e-9 < hi.min(1.0)
}

/// Simple polygon given by its vertex loop (implicitly closed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polygon {
    pub vertices: Vec<Point>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Self {
        Polygon { vertices }
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Unsigned distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Even-odd containment test; points on the boundary count as inside.
    pub fn contains(&self, p: Point) -> bool {
        if self.boundary_distance(p) <= 1e-12 {
            return true;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x_cross {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        let d = self.boundary_distance(p);
        if self.contains(p) {
            d
        } else {
            -d
        }
    }

    /// Closest boundary point to `p`.
    pub fn closest_boundary_point(&self, p: Point) -> Point {
        let mut best = self.vertices[0];
        let mut best_d = f64::INFINITY;
        for (a, b) in self.edges() {
            let q = closest_on_segment(p, a, b);
            let d = p.distance(q);
            if d < best_d {
                best_d = d;
                best = q;
            }
        }
        best
    }

    /// Minimum distance from the closed segment `[a, b]` to the boundary.
    pub fn segment_boundary_distance(&self, a: Point, b: Point) -> f64 {
        self.edges()
            .map(|(c, d)| segment_segment_distance(a, b, c, d))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether the closed segment `[a, b]` stays inside the closed region.
    pub fn contains_segment(&self, a: Point, b: Point) -> bool {
        // Collect crossing parameters with the boundary, then check that the
        // midpoint of every parameter gap lies inside. Collinear-on-boundary
        // stretches are allowed (the region is closed).
        let mut params = vec![0.0, 1.0];
        for (c, d) in self.edges() {
            if segments_properly_cross(a, b, c, d).is_some() {
                return false;
            }
            // Touch points (vertex contacts) split the segment for testing.
            let r = b - a;
            let len2 = r.norm_squared();
            if len2 > 0.0 {
                for v in [c, d] {
                    if point_segment_distance(v, a, b) < 1e-9 {
                        params.push(((v - a).dot(r) / len2).clamp(0.0, 1.0));
                    }
                }
            }
        }
        params.sort_by(|x, y| x.partial_cmp(y).unwrap());
        params.windows(2).all(|w| {
            let mid = a + (b - a) * ((w[0] + w[1]) * 0.5);
            self.contains(mid)
        })
    }
}

/// One start/goal pair for a stream of agents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointPair {
    pub start: Point,
    pub goal: Point,
}

/// A 2D environment: polygonal free space plus the start/goal pairs of the
/// agent streams that cross it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub name: String,
    pub polygon: Polygon,
    pub endpoints: Vec<EndpointPair>,
}

impl Environment {
    /// Builds an environment, checking that endpoints are strictly inside the
    /// free space and pairwise distinct.
    pub fn new(
        name: impl Into<String>,
        polygon: Polygon,
        endpoints: Vec<EndpointPair>,
    ) -> Result<Self, GeometryError> {
        let env = Environment {
            name: name.into(),
            polygon,
            endpoints,
        };
        env.check_invariants()?;
        Ok(env)
    }

    fn check_invariants(&self) -> Result<(), GeometryError> {
        if self.endpoints.is_empty() {
            return Err(GeometryError::InvalidEnvironment(
                "environment needs at least one start/goal pair".into(),
            ));
        }
        if self.polygon.vertices.len() < 3 {
            return Err(GeometryError::InvalidEnvironment(
                "free space polygon needs at least 3 vertices".into(),
            ));
        }
        for (i, ep) in self.endpoints.iter().enumerate() {
            if self.polygon.signed_distance(ep.start) <= 0.0 {
                return Err(GeometryError::InvalidEnvironment(format!(
                    "start of stream {i} is not strictly inside the free space"
                )));
            }
            if self.polygon.signed_distance(ep.goal) <= 0.0 {
                return Err(GeometryError::InvalidEnvironment(format!(
                    "goal of stream {i} is not strictly inside the free space"
                )));
            }
        }
        for i in 0..self.endpoints.len() {
            for j in i + 1..self.endpoints.len() {
                if self.endpoints[i].start == self.endpoints[j].start {
                    return Err(GeometryError::InvalidEnvironment(format!(
                        "streams {i} and {j} share a start location"
                    )));
                }
                if self.endpoints[i].goal == self.endpoints[j].goal {
                    return Err(GeometryError::InvalidEnvironment(format!(
                        "streams {i} and {j} share a goal location"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_streams(&self) -> usize {
        self.endpoints.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("environment serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let env: Environment = serde_json::from_str(text)
            .map_err(|e| GeometryError::InvalidEnvironment(format!("parse error: {e}")))?;
        env.check_invariants()?;
        Ok(env)
    }

    /// Resolves `"a"`..`"f"` (or a scene kind name) to a built-in scene,
    /// otherwise treats `name` as a path to an environment JSON file.
    pub fn resolve(name: &str) -> Result<Self, GeometryError> {
        if let Ok(kind) = name.parse::<SceneKind>() {
            return build_environment(&SceneSpec::preset(kind));
        }
        match std::fs::read_to_string(name) {
            Ok(text) => Environment::from_json(&text),
            Err(_) => Err(GeometryError::UnknownScene(name.to_string())),
        }
    }
}

/// Signed distance from `x` to the boundary of the free space: positive
/// inside, zero on the boundary, negative outside.
pub fn distance_to_boundary(env: &Environment, x: Point) -> f64 {
    env.polygon.signed_distance(x)
}

/// Builds one of the built-in intersection scenes from its parameters.
pub fn build_environment(spec: &SceneSpec) -> Result<Environment, GeometryError> {
    scene::build(spec)
}
