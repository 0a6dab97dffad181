//! Orthogonal polygon model: validation, normalization and exact predicates.
//!
//! Rings are normalized so that the polygon interior always lies to the left of
//! every directed boundary edge: the outer ring runs counterclockwise and hole
//! rings run clockwise.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("no rings supplied")]
    NoRings,
    #[error("ring {ring}: edge {index} is not axis-aligned")]
    NonOrthogonalEdge { ring: usize, index: usize },
    #[error("ring {ring}: boundary intersects itself")]
    SelfIntersection { ring: usize },
    #[error("hole ring {ring} lies outside the outer ring or touches another ring")]
    HoleOutsideOrTouching { ring: usize },
    #[error("ring {ring} is degenerate: {reason}")]
    DegenerateRing { ring: usize, reason: &'static str },
}

/// A grid point with integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn scaled(self, factor: i64) -> Self {
        Point::new(self.x * factor, self.y * factor)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// An axis-aligned segment. Endpoints are stored in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    /// Builds a segment from two points differing in exactly one coordinate.
    pub fn new(p: Point, q: Point) -> Option<Self> {
        if (p.x == q.x) == (p.y == q.y) {
            return None;
        }
        let (a, b) = if p <= q { (p, q) } else { (q, p) };
        Some(Segment { a, b })
    }

    pub fn orientation(&self) -> Orientation {
        if self.a.y == self.b.y {
            Orientation::Horizontal
        } else {
            Orientation::Vertical
        }
    }

    pub fn len(&self) -> i64 {
        (self.b.x - self.a.x) + (self.b.y - self.a.y)
    }

    pub fn is_empty(&self) -> bool {
        self.a == self.b
    }

    /// Closed-segment intersection test for axis-aligned segments.
    pub fn touches(&self, other: &Segment) -> bool {
        self.a.x.max(other.a.x) <= self.b.x.min(other.b.x)
            && self.a.y.max(other.a.y) <= self.b.y.min(other.b.y)
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        (self.a.x as f64) <= x && x <= (self.b.x as f64) && (self.a.y as f64) <= y && y <= (self.b.y as f64)
    }
}

/// A closed, normalized boundary cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    vertices: Vec<Point>,
}

impl Ring {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed edges `(v[i], v[i+1])`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Twice the signed area (positive for counterclockwise rings).
    pub fn signed_area2(&self) -> i64 {
        self.edges().map(|(p, q)| p.x * q.y - q.x * p.y).sum()
    }

    fn reversed(mut self) -> Ring {
        self.vertices.reverse();
        self
    }
}

/// Classification of a query point against a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

impl Location {
    pub fn is_inside(self) -> bool {
        self != Location::Exterior
    }
}

/// Orthogonal polygon with holes. Construct through [`validate_polygon`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrthoPolygon {
    outer: Ring,
    holes: Vec<Ring>,
}

impl OrthoPolygon {
    pub fn outer(&self) -> &Ring {
        &self.outer
    }

    pub fn holes(&self) -> &[Ring] {
        &self.holes
    }

    pub fn rings(&self) -> impl Iterator<Item = &Ring> {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    /// Total vertex count over all rings.
    pub fn vertex_count(&self) -> usize {
        self.rings().map(Ring::len).sum()
    }

    pub fn boundary_segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.rings()
            .flat_map(|r| r.edges())
            .map(|(p, q)| Segment::new(p, q).expect("normalized rings are axis-aligned"))
    }

    /// Exact polygon area.
    pub fn area(&self) -> i64 {
        let a2: i64 = self.rings().map(Ring::signed_area2).sum();
        a2 / 2
    }

    /// Uniformly scales every coordinate. Normalization is preserved.
    pub fn scaled(&self, factor: i64) -> OrthoPolygon {
        assert!(factor > 0);
        let scale = |r: &Ring| Ring { vertices: r.vertices.iter().map(|p| p.scaled(factor)).collect() };
        OrthoPolygon { outer: scale(&self.outer), holes: self.holes.iter().map(scale).collect() }
    }

    /// Axis-aligned bounding box `(min, max)`.
    pub fn bbox(&self) -> (Point, Point) {
        let vs = self.outer.vertices();
        let minx = vs.iter().map(|p| p.x).min().unwrap();
        let maxx = vs.iter().map(|p| p.x).max().unwrap();
        let miny = vs.iter().map(|p| p.y).min().unwrap();
        let maxy = vs.iter().map(|p| p.y).max().unwrap();
        (Point::new(minx, miny), Point::new(maxx, maxy))
    }

    /// Even-odd classification. Comparisons only, so dyadic inputs are exact.
    pub fn classify(&self, x: f64, y: f64) -> Location {
        let mut inside = false;
        for s in self.boundary_segments() {
            if s.contains(x, y) {
                return Location::Boundary;
            }
            if s.orientation() == Orientation::Vertical
                && (s.a.x as f64) > x
                && (s.a.y as f64) <= y
                && y < (s.b.y as f64)
            {
                inside = !inside;
            }
        }
        if inside {
            Location::Interior
        } else {
            Location::Exterior
        }
    }

    /// Classifies the point `(qx / scale, qy / scale)`.
    pub fn classify_scaled(&self, qx: i64, qy: i64, scale: i64) -> Location {
        self.classify(qx as f64 / scale as f64, qy as f64 / scale as f64)
    }
}

/// Convenience wrapper around [`OrthoPolygon::classify`].
pub fn contains_point(polygon: &OrthoPolygon, x: f64, y: f64) -> Location {
    polygon.classify(x, y)
}

/// Vertices with a 270 degree interior angle, ring by ring.
pub fn reflex_vertices(polygon: &OrthoPolygon) -> Vec<Point> {
    let mut out = Vec::new();
    for ring in polygon.rings() {
        let vs = ring.vertices();
        let n = vs.len();
        for i in 0..n {
            let (p, c, q) = (vs[(i + n - 1) % n], vs[i], vs[(i + 1) % n]);
            // interior is on the left, so a right turn is reflex
            if cross(p, c, q) < 0 {
                out.push(c);
            }
        }
    }
    out
}

fn cross(p: Point, c: Point, q: Point) -> i64 {
    (c.x - p.x) * (q.y - c.y) - (c.y - p.y) * (q.x - c.x)
}

/// Validates and normalizes raw rings. The first ring is the outer boundary,
/// any further rings are holes.
pub fn validate_polygon(rings: &[Vec<Point>]) -> Result<OrthoPolygon, GeomError> {
    let (first, rest) = rings.split_first().ok_or(GeomError::NoRings)?;
    let mut outer = normalize_ring(first, 0)?;
    if outer.signed_area2() < 0 {
        outer = outer.reversed();
    }
    let mut holes = Vec::with_capacity(rest.len());
    for (i, raw) in rest.iter().enumerate() {
        let ring_idx = i + 1;
        let mut hole = normalize_ring(raw, ring_idx)?;
        if hole.signed_area2() > 0 {
            hole = hole.reversed();
        }
        holes.push(hole);
    }

    let outer_poly = OrthoPolygon { outer: outer.clone(), holes: Vec::new() };
    for (i, hole) in holes.iter().enumerate() {
        let ring = i + 1;
        let touching = segments_of(hole).any(|h| segments_of(&outer).any(|o| h.touches(&o)));
        let p = hole.vertices()[0];
        if touching || outer_poly.classify(p.x as f64, p.y as f64) != Location::Interior {
            return Err(GeomError::HoleOutsideOrTouching { ring });
        }
        for other in holes.iter().take(i) {
            let touch = segments_of(hole).any(|h| segments_of(other).any(|o| h.touches(&o)));
            let q = other.vertices()[0];
            let nested = ring_contains(other, p) || ring_contains(hole, q);
            if touch || nested {
                return Err(GeomError::HoleOutsideOrTouching { ring });
            }
        }
    }
    Ok(OrthoPolygon { outer, holes })
}

fn ring_contains(ring: &Ring, p: Point) -> bool {
    let poly = OrthoPolygon { outer: ring.clone(), holes: Vec::new() };
    poly.classify(p.x as f64, p.y as f64) == Location::Interior
}

fn segments_of(ring: &Ring) -> impl Iterator<Item = Segment> + '_ {
    ring.edges().map(|(p, q)| Segment::new(p, q).unwrap())
}

fn normalize_ring(raw: &[Point], ring: usize) -> Result<Ring, GeomError> {
    let mut vs: Vec<Point> = raw.to_vec();
    if vs.len() >= 2 && vs.first() == vs.last() {
        vs.pop();
    }
    if vs.len() < 4 {
        return Err(GeomError::DegenerateRing { ring, reason: "fewer than 4 vertices" });
    }
    let n = vs.len();
    for i in 0..n {
        let (p, q) = (vs[i], vs[(i + 1) % n]);
        if p == q {
            return Err(GeomError::DegenerateRing { ring, reason: "duplicate consecutive vertex" });
        }
        if p.x != q.x && p.y != q.y {
            return Err(GeomError::NonOrthogonalEdge { ring, index: i });
        }
    }

    // Collapse collinear runs; a direction reversal is a spike.
    let mut changed = true;
    while changed && vs.len() >= 3 {
        changed = false;
        let n = vs.len();
        for i in 0..n {
            let (p, c, q) = (vs[(i + n - 1) % n], vs[i], vs[(i + 1) % n]);
            if cross(p, c, q) == 0 {
                let dot = (c.x - p.x) * (q.x - c.x) + (c.y - p.y) * (q.y - c.y);
                if dot < 0 {
                    return Err(GeomError::SelfIntersection { ring });
                }
                vs.remove(i);
                changed = true;
                break;
            }
        }
    }
    if vs.len() < 4 {
        return Err(GeomError::DegenerateRing { ring, reason: "fewer than 4 vertices after normalization" });
    }
    let ring_out = Ring { vertices: vs };
    if ring_out.signed_area2() == 0 {
        return Err(GeomError::DegenerateRing { ring, reason: "zero area" });
    }

    let segs: Vec<Segment> = segments_of(&ring_out).collect();
    let m = segs.len();
    for i in 0..m {
        for j in i + 1..m {
            let adjacent = j == i + 1 || (i == 0 && j == m - 1);
            if !adjacent && segs[i].touches(&segs[j]) {
                return Err(GeomError::SelfIntersection { ring });
            }
        }
    }
    Ok(ring_out)
}

impl OrthoPolygon {
    /// Raw rings, outer first, suitable for re-validation or serialization.
    pub fn to_rings(&self) -> Vec<Vec<Point>> {
        self.rings().map(|r| r.vertices().to_vec()).collect()
    }
}
