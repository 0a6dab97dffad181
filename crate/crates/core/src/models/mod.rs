//! Guarding models and their reduction to (bounded) reachability cover on a
//! directed auxiliary graph.

mod builders;
mod oracle;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::geom::{OrthoPolygon, Point};
use crate::pixelate::{Level, Located, PixelateError, Pixelation, SCALE};
use crate::twd::Graph;

pub use builders::{
    build_directional, build_guard_graph, build_l1_graph, build_periscope_graph, build_s_graph,
    build_sliding_graph, enumerate_maximal_segments,
};
pub use oracle::{oracle_geo_reachable, oracle_sliding_sees, GeoOracle};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("point ({0}, {1}) lies outside the polygon")]
    OutsidePolygon(f64, f64),
    #[error("model {0} requires explicit guard and watch point lists")]
    ModelRequiresExplicitSets(Model),
    #[error("point ({0}, {1}) is not a vertex of the pixelation")]
    PointNotOnPixelationVertex(f64, f64),
    #[error("guard spec `segments` is only valid for SLIDING; SLIDING accepts only segment guards")]
    InvalidGuardSpec,
    #[error("point ({0}, {1}) is not on the quarter-unit grid")]
    OffGrid(f64, f64),
    #[error(transparent)]
    Pixelate(#[from] PixelateError),
}

/// Staircase direction: the two compass directions a path may move in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrant {
    NE,
    NW,
    SE,
    SW,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [Quadrant::NE, Quadrant::NW, Quadrant::SE, Quadrant::SW];

    /// Signs of the permitted x and y steps.
    pub fn signs(self) -> (i64, i64) {
        match self {
            Quadrant::NE => (1, 1),
            Quadrant::NW => (-1, 1),
            Quadrant::SE => (1, -1),
            Quadrant::SW => (-1, -1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Directional(Quadrant),
    S,
    /// Bend budget.
    Periscope { k: u32 },
    /// Length budget in half-units.
    L1 { d: u32 },
    Sliding,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Directional(Quadrant::NE) => "NE",
            Model::Directional(Quadrant::NW) => "NW",
            Model::Directional(Quadrant::SE) => "SE",
            Model::Directional(Quadrant::SW) => "SW",
            Model::S => "S",
            Model::Periscope { .. } => "PERISCOPE",
            Model::L1 { .. } => "L1",
            Model::Sliding => "SLIDING",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Periscope { k } => write!(f, "PERISCOPE(k={k})"),
            Model::L1 { d } => write!(f, "L1(D={d})"),
            m => f.write_str(m.name()),
        }
    }
}

/// Which points may hold guards, or must be watched. Coordinates are in
/// input units.
#[derive(Debug, Clone, PartialEq)]
pub enum GuardSpec {
    ExplicitPoints(Vec<[f64; 2]>),
    AllPoints,
    MaximalSegments,
}

/// A guard of the reduced instance, as vertex ids of the working pixelation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Guard {
    Vertex(usize),
    /// Sliding camera between two collinear vertices, west/south end first.
    Segment(usize, usize),
}

/// A finite instance on a concrete pixelation.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub model: Model,
    pub work: Pixelation,
    pub guards: Vec<Guard>,
    pub watch: Vec<usize>,
}

impl Reduced {
    /// Guard location(s) in input units.
    pub fn guard_coords(&self, g: usize) -> Vec<[f64; 2]> {
        let to_input = |v: usize| to_input_units(self.work.pos(v));
        match self.guards[g] {
            Guard::Vertex(v) => vec![to_input(v)],
            Guard::Segment(a, b) => vec![to_input(a), to_input(b)],
        }
    }

    pub fn watch_coords(&self, w: usize) -> [f64; 2] {
        to_input_units(self.work.pos(self.watch[w]))
    }
}

pub fn to_input_units(p: Point) -> [f64; 2] {
    [p.x as f64 / SCALE as f64, p.y as f64 / SCALE as f64]
}

/// Directed graph with integer arc weights, guard sources and watch sinks.
#[derive(Debug, Clone)]
pub struct GuardGraph {
    out: Vec<Vec<(usize, u32)>>,
    sources: Vec<usize>,
    sinks: Vec<usize>,
    bound: Option<u32>,
}

impl GuardGraph {
    pub fn new(num_vertices: usize, bound: Option<u32>) -> Self {
        GuardGraph { out: vec![Vec::new(); num_vertices], sources: Vec::new(), sinks: Vec::new(), bound }
    }

    pub(crate) fn from_parts(out: Vec<Vec<(usize, u32)>>, sources: Vec<usize>, sinks: Vec<usize>, bound: Option<u32>) -> Self {
        GuardGraph { out, sources, sinks, bound }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.out.push(Vec::new());
        self.out.len() - 1
    }

    pub fn add_arc(&mut self, from: usize, to: usize, weight: u32) {
        self.out[from].push((to, weight));
    }

    /// Adds a fresh source vertex with arcs of weight 0 to `targets`.
    pub fn add_source(&mut self, targets: impl IntoIterator<Item = usize>) -> usize {
        let s = self.add_vertex();
        for t in targets {
            self.add_arc(s, t, 0);
        }
        self.sources.push(s);
        s
    }

    /// Adds a fresh sink vertex with arcs of weight 0 from `origins`.
    pub fn add_sink(&mut self, origins: impl IntoIterator<Item = usize>) -> usize {
        let t = self.add_vertex();
        for o in origins {
            self.add_arc(o, t, 0);
        }
        self.sinks.push(t);
        t
    }

    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn num_arcs(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn out_arcs(&self, v: usize) -> &[(usize, u32)] {
        &self.out[v]
    }

    /// Source vertex of each guard id.
    pub fn sources(&self) -> &[usize] {
        &self.sources
    }

    /// Sink vertex of each watch id.
    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn bound(&self) -> Option<u32> {
        self.bound
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.out.len()];
        for arcs in &self.out {
            for &(t, _) in arcs {
                deg[t] += 1;
            }
        }
        deg
    }

    /// Underlying undirected graph, used for tree decompositions.
    pub fn undirected(&self) -> Graph {
        Graph::from_edges(
            self.out.len(),
            self.out.iter().enumerate().flat_map(|(u, a)| a.iter().map(move |&(v, _)| (u, v))),
        )
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, a)| a.iter().map(move |&(v, w)| (u, v, w)))
    }
}

fn check_inside(poly: &OrthoPolygon, p: [f64; 2]) -> Result<(), ModelError> {
    if poly.classify(p[0], p[1]).is_inside() {
        Ok(())
    } else {
        Err(ModelError::OutsidePolygon(p[0], p[1]))
    }
}

/// Maps a point of the polygon to the vertex of the 1-refinement that
/// represents it: itself if it is a pixelation vertex, the midpoint of the
/// edge it lies on, or the center of the pixel it lies in. The result is in
/// pixelation (half-unit) coordinates.
pub fn shift_point(standard: &Pixelation, x: f64, y: f64) -> Result<Point, ModelError> {
    match standard.locate(x, y) {
        Located::OnVertex(v) => Ok(standard.pos(v)),
        Located::OnEdge(e) => {
            let e = &standard.edges()[e];
            let (a, b) = (standard.pos(e.u), standard.pos(e.v));
            Ok(Point::new((a.x + b.x) / 2, (a.y + b.y) / 2))
        }
        Located::InPixel(p) => Ok(standard.pixels()[p].center()),
        Located::Outside => Err(ModelError::OutsidePolygon(x, y)),
    }
}

fn dedup<T: Copy + Eq + std::hash::Hash>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut seen = HashSet::new();
    items.into_iter().filter(|x| seen.insert(*x)).collect()
}

/// Exact half-unit coordinates of an input point, if it has them.
fn exact_half_units(p: [f64; 2]) -> Option<Point> {
    let (x, y) = (p[0] * SCALE as f64, p[1] * SCALE as f64);
    (x.fract() == 0.0 && y.fract() == 0.0).then(|| Point::new(x as i64, y as i64))
}

/// Reduces an instance with possibly infinite guard or watch sets to finite
/// vertex sets on a working pixelation.
pub fn reduce_instance(
    poly: &OrthoPolygon,
    standard: &Pixelation,
    model: Model,
    gamma: &GuardSpec,
    watch: &GuardSpec,
) -> Result<Reduced, ModelError> {
    assert_eq!(standard.level(), Level::Standard);
    for spec in [gamma, watch] {
        if let GuardSpec::ExplicitPoints(ps) = spec {
            for &p in ps {
                check_inside(poly, p)?;
            }
        }
    }
    let gamma_is_segments = matches!(gamma, GuardSpec::MaximalSegments);
    if matches!(watch, GuardSpec::MaximalSegments) || (gamma_is_segments && model != Model::Sliding) {
        return Err(ModelError::InvalidGuardSpec);
    }
    match model {
        // a straight-line guard on a pixel edge sees the pixel center but not
        // its other interior points, so points cannot be shifted when k = 0
        Model::Directional(_) | Model::L1 { .. } | Model::Periscope { k: 0 } => {
            let (GuardSpec::ExplicitPoints(gs), GuardSpec::ExplicitPoints(xs)) = (gamma, watch) else {
                return Err(ModelError::ModelRequiresExplicitSets(model));
            };
            let all: Vec<[f64; 2]> = gs.iter().chain(xs).copied().collect();
            let on = |px: &Pixelation| all.iter().all(|&p| exact_half_units(p).and_then(|q| px.vertex_at(q)).is_some());
            let work = if on(standard) {
                standard.clone()
            } else {
                let refined = standard.one_refinement()?;
                if let Some(&bad) =
                    all.iter().find(|&&p| exact_half_units(p).and_then(|q| refined.vertex_at(q)).is_none())
                {
                    return Err(ModelError::PointNotOnPixelationVertex(bad[0], bad[1]));
                }
                refined
            };
            let id = |p: &[f64; 2]| work.vertex_at(exact_half_units(*p).unwrap()).unwrap();
            let guards = dedup(gs.iter().map(|p| Guard::Vertex(id(p))));
            let watch = dedup(xs.iter().map(id));
            Ok(Reduced { model, work, guards, watch })
        }
        Model::S | Model::Periscope { .. } => {
            let all_standard = model == Model::S
                && [gamma, watch].iter().all(|spec| match spec {
                    GuardSpec::ExplicitPoints(ps) => {
                        ps.iter().all(|&p| exact_half_units(p).and_then(|q| standard.vertex_at(q)).is_some())
                    }
                    _ => false,
                });
            if all_standard {
                let (GuardSpec::ExplicitPoints(gs), GuardSpec::ExplicitPoints(xs)) = (gamma, watch) else {
                    unreachable!()
                };
                let id = |p: &[f64; 2]| standard.vertex_at(exact_half_units(*p).unwrap()).unwrap();
                let guards = dedup(gs.iter().map(|p| Guard::Vertex(id(p))));
                let watch = dedup(xs.iter().map(id));
                return Ok(Reduced { model, work: standard.clone(), guards, watch });
            }
            let refined = standard.one_refinement()?;
            let guards = shifted_vertices(standard, &refined, gamma)?.into_iter().map(Guard::Vertex).collect();
            let watch = shifted_vertices(standard, &refined, watch)?;
            Ok(Reduced { model, work: refined, guards, watch })
        }
        Model::Sliding => {
            if matches!(gamma, GuardSpec::ExplicitPoints(_)) {
                return Err(ModelError::InvalidGuardSpec);
            }
            let refined = standard.one_refinement()?;
            let guards = enumerate_maximal_segments(standard)
                .into_iter()
                .map(|s| {
                    let a = refined.vertex_at(s.a.scaled(SCALE)).expect("segment endpoint is a vertex");
                    let b = refined.vertex_at(s.b.scaled(SCALE)).expect("segment endpoint is a vertex");
                    Guard::Segment(a, b)
                })
                .collect();
            let watch = shifted_vertices(standard, &refined, watch)?;
            Ok(Reduced { model, work: refined, guards, watch })
        }
    }
}

fn shifted_vertices(standard: &Pixelation, refined: &Pixelation, spec: &GuardSpec) -> Result<Vec<usize>, ModelError> {
    match spec {
        GuardSpec::AllPoints => Ok((0..refined.num_vertices()).collect()),
        GuardSpec::ExplicitPoints(ps) => {
            let mut out = Vec::with_capacity(ps.len());
            for &p in ps {
                let q = shift_point(standard, p[0], p[1])?;
                out.push(refined.vertex_at(q).expect("shifted point is a refinement vertex"));
            }
            Ok(dedup(out))
        }
        GuardSpec::MaximalSegments => Err(ModelError::InvalidGuardSpec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fixtures::*;
    use crate::pixelate::standard_pixelation;

    #[test]
    fn shift_point_examples() {
        let px = standard_pixelation(&l_shape());
        assert_eq!(shift_point(&px, 1.0, 1.0).unwrap(), Point::new(2, 2));
        assert_eq!(shift_point(&px, 1.0, 0.4).unwrap(), Point::new(2, 1));
        assert_eq!(shift_point(&px, 0.3, 0.7).unwrap(), Point::new(1, 1));
        assert!(matches!(shift_point(&px, 1.5, 1.5), Err(ModelError::OutsidePolygon(..))));
    }

    #[test]
    fn reduce_examples() {
        let poly = l_shape();
        let px = standard_pixelation(&poly);
        let r = reduce_instance(&poly, &px, Model::S, &GuardSpec::AllPoints, &GuardSpec::AllPoints).unwrap();
        assert_eq!(r.work.level(), Level::Refined);
        assert_eq!(r.guards.len(), 21);
        assert_eq!(r.watch.len(), 21);
        let ne = Model::Directional(Quadrant::NE);
        assert_eq!(
            reduce_instance(&poly, &px, ne, &GuardSpec::AllPoints, &GuardSpec::AllPoints).unwrap_err(),
            ModelError::ModelRequiresExplicitSets(ne)
        );
        let r = reduce_instance(
            &poly,
            &px,
            Model::S,
            &GuardSpec::ExplicitPoints(vec![[0.3, 0.7]]),
            &GuardSpec::AllPoints,
        )
        .unwrap();
        assert_eq!(r.guard_coords(0), vec![[0.5, 0.5]]);
        let straight = Model::Periscope { k: 0 };
        assert_eq!(
            reduce_instance(&poly, &px, straight, &GuardSpec::AllPoints, &GuardSpec::AllPoints).unwrap_err(),
            ModelError::ModelRequiresExplicitSets(straight)
        );
        let mid = GuardSpec::ExplicitPoints(vec![[0.5, 0.0], [0.5, 0.5]]);
        assert!(reduce_instance(&poly, &px, straight, &mid, &mid).is_ok());
    }

    #[test]
    fn explicit_sets_pick_the_right_pixelation() {
        let poly = l_shape();
        let px = standard_pixelation(&poly);
        let std_pts = GuardSpec::ExplicitPoints(vec![[0.0, 0.0], [1.0, 1.0]]);
        let r = reduce_instance(&poly, &px, Model::L1 { d: 4 }, &std_pts, &std_pts).unwrap();
        assert_eq!(r.work.level(), Level::Standard);
        let mid = GuardSpec::ExplicitPoints(vec![[0.5, 0.5]]);
        let r = reduce_instance(&poly, &px, Model::L1 { d: 4 }, &mid, &std_pts).unwrap();
        assert_eq!(r.work.level(), Level::Refined);
        let off = GuardSpec::ExplicitPoints(vec![[0.25, 0.5]]);
        assert!(matches!(
            reduce_instance(&poly, &px, Model::Directional(Quadrant::SW), &off, &std_pts),
            Err(ModelError::PointNotOnPixelationVertex(..))
        ));
        let outside = GuardSpec::ExplicitPoints(vec![[2.0, 2.0]]);
        assert!(matches!(
            reduce_instance(&poly, &px, Model::S, &outside, &std_pts),
            Err(ModelError::OutsidePolygon(..))
        ));
        assert_eq!(
            reduce_instance(&poly, &px, Model::S, &GuardSpec::MaximalSegments, &std_pts).unwrap_err(),
            ModelError::InvalidGuardSpec
        );
    }

    #[test]
    fn sliding_reduction_uses_segments() {
        let poly = l_shape();
        let px = standard_pixelation(&poly);
        let r = reduce_instance(&poly, &px, Model::Sliding, &GuardSpec::MaximalSegments, &GuardSpec::AllPoints)
            .unwrap();
        assert_eq!(r.guards.len(), 6);
        assert_eq!(r.watch.len(), 21);
    }
}
