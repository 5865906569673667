//! Shortest reference paths inside the free space and their crossing points.

use super::{segments_overlap_collinear, segments_properly_cross, Environment, GeometryError, Point};
use serde::{Deserialize, Serialize};

/// Polyline a stream follows from its start to its goal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePath {
    pub vertices: Vec<Point>,
    pub length: f64,
}

impl ReferencePath {
    pub fn new(vertices: Vec<Point>) -> Self {
        let length = vertices.windows(2).map(|w| w[0].distance(w[1])).sum();
        ReferencePath { vertices, length }
    }

    /// Position at arc length `s` from the start, clamped to the path.
    pub fn point_at_arc(&self, s: f64) -> Point {
        let mut remaining = s.max(0.0);
        for w in self.vertices.windows(2) {
            let seg = w[0].distance(w[1]);
            if remaining <= seg {
                if seg == 0.0 {
                    return w[0];
                }
                return w[0] + (w[1] - w[0]) * (remaining / seg);
            }
            remaining -= seg;
        }
        *self.vertices.last().expect("path has vertices")
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn goal(&self) -> Point {
        *self.vertices.last().expect("path has vertices")
    }
}

/// Euclidean shortest path from the stream's start to its goal inside the
/// free-space polygon, via the visibility graph over polygon vertices.
///
/// The path may touch the boundary (zero inflation); keeping clearance is the
/// optimizer's job. Ties between equal-length paths break toward the
/// lexicographically smallest vertex sequence.
pub fn shortest_path(env: &Environment, stream: usize) -> Result<ReferencePath, GeometryError> {
    let ep = env
        .endpoints
        .get(stream)
        .ok_or(GeometryError::Unreachable(stream))?;
    if env.polygon.signed_distance(ep.start) < 0.0 || env.polygon.signed_distance(ep.goal) < 0.0 {
        return Err(GeometryError::Unreachable(stream));
    }

    let mut nodes = vec![ep.start, ep.goal];
    nodes.extend(env.polygon.vertices.iter().copied());
    let n = nodes.len();

    let mut visible = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if env.polygon.contains_segment(nodes[i], nodes[j]) {
                visible[i].push(j);
                visible[j].push(i);
            }
        }
    }

    // Dijkstra with full-path lexicographic tie-breaking. The graphs here are
    // tiny (polygon vertices plus the two endpoints), so candidate paths are
    // compared directly.
    #[derive(Clone)]
    struct Label {
        dist: f64,
        path: Vec<usize>,
    }
    let path_key = |path: &[usize], nodes: &[Point]| -> Vec<(f64, f64)> {
        path.iter().map(|&i| (nodes[i].x, nodes[i].y)).collect()
    };
    let better = |a: &Label, b: &Label, nodes: &[Point]| -> bool {
        if a.dist + 1e-12 < b.dist {
            return true;
        }
        if (a.dist - b.dist).abs() <= 1e-12 {
            return path_key(&a.path, nodes) < path_key(&b.path, nodes);
        }
        false
    };

    let mut labels: Vec<Option<Label>> = vec![None; n];
    let mut done = vec![false; n];
    labels[0] = Some(Label {
        dist: 0.0,
        path: vec![0],
    });
    loop {
        let mut current: Option<usize> = None;
        for i in 0..n {
            if done[i] || labels[i].is_none() {
                continue;
            }
            match current {
                None => current = Some(i),
                Some(c) => {
                    let li = labels[i].as_ref().unwrap();
                    let lc = labels[c].as_ref().unwrap();
                    if better(li, lc, &nodes) {
                        current = Some(i);
                    }
                }
            }
        }
        let Some(u) = current else { break };
        done[u] = true;
        if u == 1 {
            break;
        }
        let base = labels[u].clone().unwrap();
        for &v in &visible[u] {
            if done[v] {
                continue;
            }
            let mut cand = Label {
                dist: base.dist + nodes[u].distance(nodes[v]),
                path: base.path.clone(),
            };
            cand.path.push(v);
            let replace = match &labels[v] {
                None => true,
                Some(existing) => better(&cand, existing, &nodes),
            };
            if replace {
                labels[v] = Some(cand);
            }
        }
    }

    let label = labels[1].take().ok_or(GeometryError::Unreachable(stream))?;
    let mut vertices: Vec<Point> = label.path.iter().map(|&i| nodes[i]).collect();
    // Drop interior vertices that do not bend the path.
    let mut i = 1;
    while i + 1 < vertices.len() {
        let (a, b, c) = (vertices[i - 1], vertices[i], vertices[i + 1]);
        if (b - a).cross(c - a).abs() < 1e-12 && (b - a).dot(c - b) >= 0.0 {
            vertices.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(ReferencePath::new(vertices))
}

/// A transversal crossing between two reference paths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathCrossing {
    /// Stream index of the first path.
    pub n: usize,
    /// Stream index of the second path.
    pub n_other: usize,
    pub point: Point,
    /// Arc length from the start of path `n` to the crossing.
    pub arc_n: f64,
    /// Arc length from the start of path `n_other` to the crossing.
    pub arc_other: f64,
}

/// All transversal crossing points between distinct paths, with arc-length
/// offsets from both starts, sorted by `(n, arc_n)` with `n < n_other`.
pub fn path_intersections(paths: &[ReferencePath]) -> Result<Vec<PathCrossing>, GeometryError> {
    let mut crossings = Vec::new();
    for i in 0..paths.len() {
        for j in i + 1..paths.len() {
            let mut arc_i = 0.0;
            for si in paths[i].vertices.windows(2) {
                let mut arc_j = 0.0;
                for sj in paths[j].vertices.windows(2) {
                    if segments_overlap_collinear(si[0], si[1], sj[0], sj[1]) {
                        return Err(GeometryError::DegenerateOverlap(i, j));
                    }
                    if let Some((t, u)) = segments_properly_cross(si[0], si[1], sj[0], sj[1]) {
                        let p = si[0] + (si[1] - si[0]) * t;
                        crossings.push(PathCrossing {
                            n: i,
                            n_other: j,
                            point: p,
                            arc_n: arc_i + si[0].distance(si[1]) * t,
                            arc_other: arc_j + sj[0].distance(sj[1]) * u,
                        });
                    }
                    arc_j += sj[0].distance(sj[1]);
                }
                arc_i += si[0].distance(si[1]);
            }
        }
    }
    crossings.sort_by(|a, b| {
        (a.n, a.arc_n, a.n_other, a.arc_other)
            .partial_cmp(&(b.n, b.arc_n, b.n_other, b.arc_other))
            .unwrap()
    });
    Ok(crossings)
}
