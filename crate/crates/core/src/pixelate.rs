//! Standard pixelation of an orthogonal polygon and its 1-refinement.
//!
//! All pixelation coordinates are in half-units: the input polygon is scaled by
//! [`SCALE`] once, so that edge midpoints and pixel centers of the standard
//! pixelation land on integer coordinates.

use std::collections::HashMap;

use thiserror::Error;

use crate::geom::{reflex_vertices, Location, Orientation, OrthoPolygon, Point};
use crate::twd::Graph;

/// Factor between input units and pixelation units.
pub const SCALE: i64 = 2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PixelateError {
    #[error("pixelation is already refined")]
    RefineTwice,
}

/// Compass direction, also used to index neighbor tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    N = 0,
    E = 1,
    S = 2,
    W = 3,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

    pub fn opposite(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::E => Dir::W,
            Dir::S => Dir::N,
            Dir::W => Dir::E,
        }
    }

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::N => (0, 1),
            Dir::E => (1, 0),
            Dir::S => (0, -1),
            Dir::W => (-1, 0),
        }
    }

    pub fn is_vertical(self) -> bool {
        matches!(self, Dir::N | Dir::S)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Standard,
    Refined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PVertex {
    pub pos: Point,
    pub boundary: bool,
}

/// Pixelation edge; `u` is the south or west endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PEdge {
    pub u: usize,
    pub v: usize,
    pub orientation: Orientation,
    pub boundary: bool,
}

impl PEdge {
    pub fn len(&self, vs: &[PVertex]) -> i64 {
        let (a, b) = (vs[self.u].pos, vs[self.v].pos);
        (b.x - a.x) + (b.y - a.y)
    }
}

/// Axis-aligned pixel with corners in order SW, SE, NE, NW.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pixel {
    pub min: Point,
    pub max: Point,
    pub corners: [usize; 4],
}

impl Pixel {
    pub fn area(&self) -> i64 {
        (self.max.x - self.min.x) * (self.max.y - self.min.y)
    }

    /// Exact for standard pixels (even coordinates); truncates on refined ones.
    pub fn center(&self) -> Point {
        Point::new((self.min.x + self.max.x) / 2, (self.min.y + self.max.y) / 2)
    }
}

/// Where a query point falls in a pixelation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Located {
    OnVertex(usize),
    OnEdge(usize),
    InPixel(usize),
    Outside,
}

#[derive(Debug, Clone)]
pub struct Pixelation {
    source: OrthoPolygon,
    scaled: OrthoPolygon,
    level: Level,
    vertices: Vec<PVertex>,
    edges: Vec<PEdge>,
    pixels: Vec<Pixel>,
    nbr: Vec<[Option<(usize, usize)>; 4]>,
    edge_pixels: Vec<Vec<usize>>,
    index: HashMap<Point, usize>,
    ray_chains: usize,
}

impl Pixelation {
    pub fn level(&self) -> Level {
        self.level
    }

    /// The input polygon in input units.
    pub fn source(&self) -> &OrthoPolygon {
        &self.source
    }

    /// The polygon in pixelation units.
    pub fn polygon(&self) -> &OrthoPolygon {
        &self.scaled
    }

    pub fn vertices(&self) -> &[PVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[PEdge] {
        &self.edges
    }

    pub fn pixels(&self) -> &[Pixel] {
        &self.pixels
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn pos(&self, v: usize) -> Point {
        self.vertices[v].pos
    }

    /// Neighbor of `v` in direction `d` together with the connecting edge.
    pub fn neighbor(&self, v: usize, d: Dir) -> Option<(usize, usize)> {
        self.nbr[v][d.index()]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbr[v].iter().flatten().count()
    }

    pub fn edge_pixels(&self, e: usize) -> &[usize] {
        &self.edge_pixels[e]
    }

    pub fn vertex_at(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }

    /// Maximal non-boundary straight chains inserted by reflex rays.
    pub fn ray_chains(&self) -> usize {
        self.ray_chains
    }

    pub fn graph(&self) -> Graph {
        Graph::from_edges(self.vertices.len(), self.edges.iter().map(|e| (e.u, e.v)))
    }

    pub fn pixel_area_sum(&self) -> i64 {
        self.pixels.iter().map(Pixel::area).sum()
    }

    /// Splits every pixel into four quadrants.
    pub fn one_refinement(&self) -> Result<Pixelation, PixelateError> {
        if self.level == Level::Refined {
            return Err(PixelateError::RefineTwice);
        }
        let mut verts: Vec<PVertex> = self.vertices.clone();
        let mut segs = Vec::with_capacity(2 * self.edges.len() + 4 * self.pixels.len());
        let mut midpoint = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let (a, b) = (self.pos(e.u), self.pos(e.v));
            let m = Point::new((a.x + b.x) / 2, (a.y + b.y) / 2);
            verts.push(PVertex { pos: m, boundary: e.boundary });
            midpoint.push(m);
            segs.push((a, m, e.boundary));
            segs.push((m, b, e.boundary));
        }
        let mut rects = Vec::with_capacity(4 * self.pixels.len());
        for px in &self.pixels {
            let c = px.center();
            verts.push(PVertex { pos: c, boundary: false });
            let [sw, se, _ne, nw] = px.corners;
            let sides = [
                self.neighbor(sw, Dir::E).expect("pixel bottom side").1,
                self.neighbor(se, Dir::N).expect("pixel right side").1,
                self.neighbor(nw, Dir::E).expect("pixel top side").1,
                self.neighbor(sw, Dir::N).expect("pixel left side").1,
            ];
            for e in sides {
                segs.push((c, midpoint[e], false));
            }
            let (lo, hi) = (px.min, px.max);
            rects.push((lo, c));
            rects.push((Point::new(c.x, lo.y), Point::new(hi.x, c.y)));
            rects.push((c, hi));
            rects.push((Point::new(lo.x, c.y), Point::new(c.x, hi.y)));
        }
        Ok(Pixelation::from_parts(
            self.source.clone(),
            self.scaled.clone(),
            Level::Refined,
            verts,
            segs,
            rects,
            self.ray_chains,
        ))
    }

    fn from_parts(
        source: OrthoPolygon,
        scaled: OrthoPolygon,
        level: Level,
        mut verts: Vec<PVertex>,
        segs: Vec<(Point, Point, bool)>,
        rects: Vec<(Point, Point)>,
        ray_chains: usize,
    ) -> Pixelation {
        verts.sort_by_key(|v| (v.pos.y, v.pos.x));
        let index: HashMap<Point, usize> = verts.iter().enumerate().map(|(i, v)| (v.pos, i)).collect();
        let mut edges: Vec<PEdge> = segs
            .into_iter()
            .map(|(a, b, boundary)| {
                let (a, b) = if (a.y, a.x) <= (b.y, b.x) { (a, b) } else { (b, a) };
                let orientation = if a.y == b.y { Orientation::Horizontal } else { Orientation::Vertical };
                PEdge { u: index[&a], v: index[&b], orientation, boundary }
            })
            .collect();
        edges.sort_by_key(|e| (e.u, e.v));
        let mut nbr = vec![[None; 4]; verts.len()];
        for (i, e) in edges.iter().enumerate() {
            let (fwd, back) = match e.orientation {
                Orientation::Horizontal => (Dir::E, Dir::W),
                Orientation::Vertical => (Dir::N, Dir::S),
            };
            nbr[e.u][fwd.index()] = Some((e.v, i));
            nbr[e.v][back.index()] = Some((e.u, i));
        }
        let mut pixels: Vec<Pixel> = rects
            .into_iter()
            .map(|(lo, hi)| Pixel {
                min: lo,
                max: hi,
                corners: [
                    index[&lo],
                    index[&Point::new(hi.x, lo.y)],
                    index[&hi],
                    index[&Point::new(lo.x, hi.y)],
                ],
            })
            .collect();
        pixels.sort_by_key(|p| (p.min.y, p.min.x));
        let mut edge_pixels = vec![Vec::new(); edges.len()];
        for (pi, px) in pixels.iter().enumerate() {
            let [sw, se, _ne, nw] = px.corners;
            for (v, d) in [(sw, Dir::E), (se, Dir::N), (nw, Dir::E), (sw, Dir::N)] {
                let (_, e) = nbr[v][d.index()].expect("pixel side must be a pixelation edge");
                edge_pixels[e].push(pi);
            }
        }
        Pixelation { source, scaled, level, vertices: verts, edges, pixels, nbr, edge_pixels, index, ray_chains }
    }

    /// Locates a point given in input units.
    pub fn locate(&self, x: f64, y: f64) -> Located {
        let (sx, sy) = (x * SCALE as f64, y * SCALE as f64);
        if sx.fract() == 0.0 && sy.fract() == 0.0 {
            if let Some(v) = self.vertex_at(Point::new(sx as i64, sy as i64)) {
                return Located::OnVertex(v);
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let (a, b) = (self.pos(e.u), self.pos(e.v));
            if (a.x as f64) <= sx && sx <= b.x as f64 && (a.y as f64) <= sy && sy <= b.y as f64 {
                return Located::OnEdge(i);
            }
        }
        for (i, p) in self.pixels.iter().enumerate() {
            if (p.min.x as f64) < sx && sx < p.max.x as f64 && (p.min.y as f64) < sy && sy < p.max.y as f64 {
                return Located::InPixel(i);
            }
        }
        Located::Outside
    }
}

/// Builds the subdivision induced by the boundary plus the inward
/// horizontal and vertical rays from every reflex vertex.
pub fn standard_pixelation(polygon: &OrthoPolygon) -> Pixelation {
    let scaled = polygon.scaled(SCALE);
    let mut xs: Vec<i64> = scaled.rings().flat_map(|r| r.vertices().iter().map(|p| p.x)).collect();
    let mut ys: Vec<i64> = scaled.rings().flat_map(|r| r.vertices().iter().map(|p| p.y)).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    let grid = Grid::new(&scaled, xs, ys);

    let mut hseg = grid.hseg_boundary.clone();
    let mut vseg = grid.vseg_boundary.clone();
    for r in reflex_vertices(&scaled) {
        let c = grid.cell_of(r);
        for d in ray_dirs(&scaled, r) {
            let mut cur = c;
            while let Some((seg, next)) = grid.step(cur, d) {
                let interior = match seg {
                    Seg::H(i) => grid.hseg_interior[i],
                    Seg::V(i) => grid.vseg_interior[i],
                };
                if !interior {
                    break;
                }
                match seg {
                    Seg::H(i) => hseg[i] = true,
                    Seg::V(i) => vseg[i] = true,
                }
                cur = next;
                if grid.boundary_pt[grid.pt(cur)] {
                    break;
                }
            }
        }
    }

    let present = |cur: (usize, usize), d: Dir| -> bool {
        match grid.step(cur, d) {
            Some((Seg::H(i), _)) => hseg[i],
            Some((Seg::V(i), _)) => vseg[i],
            None => false,
        }
    };
    let is_vertex = |cur: (usize, usize)| -> bool {
        let [n, e, s, w] = Dir::ALL.map(|d| present(cur, d));
        let deg = [n, e, s, w].iter().filter(|&&b| b).count();
        deg > 0 && !(deg == 2 && ((n && s) || (e && w)))
    };

    let mut verts = Vec::new();
    let mut segs = Vec::new();
    let mut ray_chains = 0;
    for j in 0..grid.ys.len() {
        for i in 0..grid.xs.len() {
            let cur = (i, j);
            if !is_vertex(cur) {
                continue;
            }
            verts.push(PVertex { pos: grid.point(cur), boundary: grid.boundary_pt[grid.pt(cur)] });
            for d in [Dir::E, Dir::N] {
                if !present(cur, d) {
                    continue;
                }
                let (first, _) = grid.step(cur, d).unwrap();
                let boundary = match first {
                    Seg::H(k) => grid.hseg_boundary[k],
                    Seg::V(k) => grid.vseg_boundary[k],
                };
                let mut end = cur;
                loop {
                    end = grid.step(end, d).unwrap().1;
                    if is_vertex(end) {
                        break;
                    }
                }
                segs.push((grid.point(cur), grid.point(end), boundary));
            }
        }
    }
    // an interior edge without an interior predecessor starts a ray chain
    let by_end: HashMap<(Point, bool), bool> = segs.iter().map(|&(a, b, bd)| ((b, a.y == b.y), bd)).collect();
    for &(a, b, bd) in &segs {
        if !bd && !matches!(by_end.get(&(a, a.y == b.y)), Some(false)) {
            ray_chains += 1;
        }
    }

    // pixels: union inside cells across absent elementary segments
    let (cw, ch) = (grid.xs.len() - 1, grid.ys.len() - 1);
    let mut uf = UnionFind::new(cw * ch);
    for j in 0..ch {
        for i in 0..cw {
            if !grid.cell_in[j * cw + i] {
                continue;
            }
            if i + 1 < cw && grid.cell_in[j * cw + i + 1] && !vseg[grid.vseg_idx(i + 1, j)] {
                uf.union(j * cw + i, j * cw + i + 1);
            }
            if j + 1 < ch && grid.cell_in[(j + 1) * cw + i] && !hseg[grid.hseg_idx(i, j + 1)] {
                uf.union(j * cw + i, (j + 1) * cw + i);
            }
        }
    }
    let mut comp: HashMap<usize, (usize, usize, usize, usize, usize)> = HashMap::new();
    for j in 0..ch {
        for i in 0..cw {
            if !grid.cell_in[j * cw + i] {
                continue;
            }
            let r = uf.find(j * cw + i);
            let e = comp.entry(r).or_insert((i, j, i, j, 0));
            e.0 = e.0.min(i);
            e.1 = e.1.min(j);
            e.2 = e.2.max(i);
            e.3 = e.3.max(j);
            e.4 += 1;
        }
    }
    let rects: Vec<(Point, Point)> = comp
        .values()
        .map(|&(i0, j0, i1, j1, count)| {
            debug_assert_eq!(count, (i1 - i0 + 1) * (j1 - j0 + 1), "pixel must be a rectangle");
            (grid.point((i0, j0)), grid.point((i1 + 1, j1 + 1)))
        })
        .collect();

    Pixelation::from_parts(polygon.clone(), scaled, Level::Standard, verts, segs, rects, ray_chains)
}

/// The two ray directions at a reflex vertex: continuations of its two edges.
fn ray_dirs(poly: &OrthoPolygon, r: Point) -> Vec<Dir> {
    for ring in poly.rings() {
        let vs = ring.vertices();
        let n = vs.len();
        if let Some(i) = vs.iter().position(|&p| p == r) {
            let (p, q) = (vs[(i + n - 1) % n], vs[(i + 1) % n]);
            return vec![dir_towards(p, r), dir_towards(q, r)];
        }
    }
    unreachable!("reflex vertex belongs to a ring")
}

fn dir_towards(from: Point, to: Point) -> Dir {
    match ((to.x - from.x).signum(), (to.y - from.y).signum()) {
        (0, 1) => Dir::N,
        (0, -1) => Dir::S,
        (1, 0) => Dir::E,
        (-1, 0) => Dir::W,
        _ => unreachable!("axis-aligned edge"),
    }
}

enum Seg {
    H(usize),
    V(usize),
}

/// Coordinate-compressed grid over the polygon's vertex coordinates.
struct Grid {
    xs: Vec<i64>,
    ys: Vec<i64>,
    cell_in: Vec<bool>,
    hseg_boundary: Vec<bool>,
    hseg_interior: Vec<bool>,
    vseg_boundary: Vec<bool>,
    vseg_interior: Vec<bool>,
    boundary_pt: Vec<bool>,
}

impl Grid {
    fn new(poly: &OrthoPolygon, xs: Vec<i64>, ys: Vec<i64>) -> Grid {
        let (nx, ny) = (xs.len(), ys.len());
        let (cw, ch) = (nx - 1, ny - 1);
        // cell membership by scanline parity over vertical boundary edges
        let mut cell_in = vec![false; cw * ch];
        let verticals: Vec<_> = poly
            .boundary_segments()
            .filter(|s| s.orientation() == Orientation::Vertical)
            .collect();
        for j in 0..ch {
            let (y0, y1) = (ys[j], ys[j + 1]);
            let mut crossings: Vec<i64> =
                verticals.iter().filter(|s| s.a.y <= y0 && y1 <= s.b.y).map(|s| s.a.x).collect();
            crossings.sort_unstable();
            for i in 0..cw {
                let xm2 = xs[i] + xs[i + 1];
                let count = crossings.iter().filter(|&&x| 2 * x > xm2).count();
                cell_in[j * cw + i] = count % 2 == 1;
            }
        }
        debug_assert!({
            let j = ch / 2;
            let i = cw / 2;
            let x = (xs[i] + xs[i + 1]) as f64 / 2.0;
            let y = (ys[j] + ys[j + 1]) as f64 / 2.0;
            (poly.classify(x, y) == Location::Interior) == cell_in[j * cw + i]
        });
        let cell = |i: isize, j: isize| -> bool {
            i >= 0 && j >= 0 && (i as usize) < cw && (j as usize) < ch && cell_in[j as usize * cw + i as usize]
        };
        let mut hseg_boundary = vec![false; cw * ny];
        let mut hseg_interior = vec![false; cw * ny];
        for j in 0..ny {
            for i in 0..cw {
                let below = cell(i as isize, j as isize - 1);
                let above = cell(i as isize, j as isize);
                hseg_boundary[j * cw + i] = below != above;
                hseg_interior[j * cw + i] = below && above;
            }
        }
        let mut vseg_boundary = vec![false; nx * ch];
        let mut vseg_interior = vec![false; nx * ch];
        for j in 0..ch {
            for i in 0..nx {
                let left = cell(i as isize - 1, j as isize);
                let right = cell(i as isize, j as isize);
                vseg_boundary[j * nx + i] = left != right;
                vseg_interior[j * nx + i] = left && right;
            }
        }
        let mut boundary_pt = vec![false; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let mut b = false;
                if i < cw {
                    b |= hseg_boundary[j * cw + i];
                }
                if i > 0 {
                    b |= hseg_boundary[j * cw + i - 1];
                }
                if j < ch {
                    b |= vseg_boundary[j * nx + i];
                }
                if j > 0 {
                    b |= vseg_boundary[(j - 1) * nx + i];
                }
                boundary_pt[j * nx + i] = b;
            }
        }
        Grid { xs, ys, cell_in, hseg_boundary, hseg_interior, vseg_boundary, vseg_interior, boundary_pt }
    }

    fn cw(&self) -> usize {
        self.xs.len() - 1
    }

    fn hseg_idx(&self, i: usize, j: usize) -> usize {
        j * self.cw() + i
    }

    fn vseg_idx(&self, i: usize, j: usize) -> usize {
        j * self.xs.len() + i
    }

    fn pt(&self, c: (usize, usize)) -> usize {
        c.1 * self.xs.len() + c.0
    }

    fn point(&self, c: (usize, usize)) -> Point {
        Point::new(self.xs[c.0], self.ys[c.1])
    }

    fn cell_of(&self, p: Point) -> (usize, usize) {
        (self.xs.binary_search(&p.x).unwrap(), self.ys.binary_search(&p.y).unwrap())
    }

    /// Elementary segment leaving grid point `c` in direction `d`.
    fn step(&self, c: (usize, usize), d: Dir) -> Option<(Seg, (usize, usize))> {
        let (i, j) = c;
        match d {
            Dir::E if i + 1 < self.xs.len() => Some((Seg::H(self.hseg_idx(i, j)), (i + 1, j))),
            Dir::W if i > 0 => Some((Seg::H(self.hseg_idx(i - 1, j)), (i - 1, j))),
            Dir::N if j + 1 < self.ys.len() => Some((Seg::V(self.vseg_idx(i, j)), (i, j + 1))),
            Dir::S if j > 0 => Some((Seg::V(self.vseg_idx(i, j - 1)), (i, j - 1))),
            _ => None,
        }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
