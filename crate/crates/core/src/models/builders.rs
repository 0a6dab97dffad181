use crate::geom::{Orientation, Point, Segment};
use crate::pixelate::{Dir, Level, Pixelation, SCALE};

use super::{Guard, GuardGraph, Model, Quadrant, Reduced};

fn point_guards(r: &Reduced) -> Vec<usize> {
    r.guards
        .iter()
        .map(|g| match *g {
            Guard::Vertex(v) => v,
            Guard::Segment(..) => panic!("point model with segment guards"),
        })
        .collect()
}

/// Builds the auxiliary graph for a reduced instance.
pub fn build_guard_graph(r: &Reduced) -> GuardGraph {
    match r.model {
        Model::Directional(q) => build_directional(&r.work, q, &point_guards(r), &r.watch),
        Model::S => build_s_graph(&r.work, &point_guards(r), &r.watch),
        Model::Periscope { k } => build_periscope_graph(&r.work, &point_guards(r), &r.watch, k),
        Model::L1 { d } => build_l1_graph(&r.work, &point_guards(r), &r.watch, d),
        Model::Sliding => {
            let cams: Vec<(usize, usize)> = r
                .guards
                .iter()
                .map(|g| match *g {
                    Guard::Segment(a, b) => (a, b),
                    Guard::Vertex(_) => panic!("sliding cameras need segment guards"),
                })
                .collect();
            build_sliding_graph(&r.work, &cams, &r.watch)
        }
    }
}

/// Arcs of the pixelation graph oriented along the two directions of `q`,
/// placed at vertex offset `base`.
fn add_directed_copy(g: &mut GuardGraph, px: &Pixelation, q: Quadrant, base: usize) {
    let (sx, sy) = q.signs();
    for e in px.edges() {
        let forward = match e.orientation {
            Orientation::Horizontal => sx > 0,
            Orientation::Vertical => sy > 0,
        };
        let (a, b) = if forward { (e.u, e.v) } else { (e.v, e.u) };
        g.add_arc(base + a, base + b, 0);
    }
}

/// Pixelation graph directed toward the quadrant's two compass directions.
pub fn build_directional(px: &Pixelation, q: Quadrant, guards: &[usize], watch: &[usize]) -> GuardGraph {
    let mut g = GuardGraph::new(px.num_vertices(), None);
    add_directed_copy(&mut g, px, q, 0);
    for &v in guards {
        g.add_source([v]);
    }
    for &p in watch {
        g.add_sink([p]);
    }
    g
}

/// Four disjoint directed copies; each guard feeds all four, each watch point
/// is reached from any of them.
pub fn build_s_graph(px: &Pixelation, guards: &[usize], watch: &[usize]) -> GuardGraph {
    let n = px.num_vertices();
    let mut g = GuardGraph::new(4 * n, None);
    for (c, q) in Quadrant::ALL.into_iter().enumerate() {
        add_directed_copy(&mut g, px, q, c * n);
    }
    for &v in guards {
        g.add_source((0..4).map(|c| c * n + v));
    }
    for &p in watch {
        g.add_sink((0..4).map(|c| c * n + p));
    }
    g
}

/// Replaces every vertex by its arms (one per incident edge direction).
/// Turning between perpendicular arms costs 1, going straight costs 0.
/// Returns the arm table indexed by `Dir::index`.
fn add_k4_gadgets(g: &mut GuardGraph, px: &Pixelation) -> Vec<[Option<usize>; 4]> {
    let mut arms = vec![[None; 4]; px.num_vertices()];
    for (v, slot) in arms.iter_mut().enumerate() {
        for d in Dir::ALL {
            if px.neighbor(v, d).is_some() {
                slot[d.index()] = Some(g.add_vertex());
            }
        }
    }
    for slot in &arms {
        for a in Dir::ALL {
            for b in Dir::ALL {
                if let (Some(x), Some(y), true) = (slot[a.index()], slot[b.index()], a != b) {
                    let w = if a.opposite() == b { 0 } else { 1 };
                    g.add_arc(x, y, w);
                }
            }
        }
    }
    for e in px.edges() {
        let (du, dv) = match e.orientation {
            Orientation::Horizontal => (Dir::E, Dir::W),
            Orientation::Vertical => (Dir::N, Dir::S),
        };
        let a = arms[e.u][du.index()].expect("arm exists for incident edge");
        let b = arms[e.v][dv.index()].expect("arm exists for incident edge");
        g.add_arc(a, b, 0);
        g.add_arc(b, a, 0);
    }
    arms
}

/// Bend-counting graph with bound `k`, clamped to the vertex count.
pub fn build_periscope_graph(px: &Pixelation, guards: &[usize], watch: &[usize], k: u32) -> GuardGraph {
    let w = k.min(px.num_vertices() as u32);
    let mut g = GuardGraph::new(0, Some(w));
    let arms = add_k4_gadgets(&mut g, px);
    for &v in guards {
        g.add_source(arms[v].iter().flatten().copied().collect::<Vec<_>>());
    }
    for &p in watch {
        g.add_sink(arms[p].iter().flatten().copied().collect::<Vec<_>>());
    }
    g
}

/// Length-weighted graph with bound `d` (half-units).
pub fn build_l1_graph(px: &Pixelation, guards: &[usize], watch: &[usize], d: u32) -> GuardGraph {
    let mut g = GuardGraph::new(px.num_vertices(), Some(d));
    for e in px.edges() {
        let w = e.len(px.vertices()) as u32;
        g.add_arc(e.u, e.v, w);
        g.add_arc(e.v, e.u, w);
    }
    for &v in guards {
        g.add_source([v]);
    }
    for &p in watch {
        g.add_sink([p]);
    }
    g
}

/// Sliding cameras on the refinement. A camera enters at one endpoint
/// through the arm that points along it, so one bend is allowed before
/// leaving the camera line.
pub fn build_sliding_graph(px: &Pixelation, cameras: &[(usize, usize)], watch: &[usize]) -> GuardGraph {
    assert_eq!(px.level(), Level::Refined);
    let mut g = GuardGraph::new(0, Some(1));
    let arms = add_k4_gadgets(&mut g, px);
    for &(a, b) in cameras {
        let (pa, pb) = (px.pos(a), px.pos(b));
        let entry = if pa.y == pb.y {
            let left = if pa.x <= pb.x { a } else { b };
            arms[left][Dir::E.index()]
        } else {
            let top = if pa.y >= pb.y { a } else { b };
            arms[top][Dir::S.index()]
        };
        g.add_source([entry.expect("camera runs along pixelation edges")]);
    }
    for &p in watch {
        g.add_sink(arms[p].iter().flatten().copied().collect::<Vec<_>>());
    }
    g
}

/// Maximal straight chains of pixelation edges, in input units. Horizontal
/// segments come first, each group ordered by its first endpoint.
pub fn enumerate_maximal_segments(px: &Pixelation) -> Vec<Segment> {
    let mut out = Vec::new();
    for (fwd, back) in [(Dir::E, Dir::W), (Dir::N, Dir::S)] {
        let mut group = Vec::new();
        for v in 0..px.num_vertices() {
            if px.neighbor(v, back).is_some() || px.neighbor(v, fwd).is_none() {
                continue;
            }
            let mut end = v;
            while let Some((w, _)) = px.neighbor(end, fwd) {
                end = w;
            }
            let (a, b) = (px.pos(v), px.pos(end));
            let unscale = |p: Point| Point::new(p.x / SCALE, p.y / SCALE);
            let seg = if px.level() == Level::Standard {
                Segment::new(unscale(a), unscale(b))
            } else {
                Segment::new(a, b)
            };
            group.push(seg.expect("segment has positive length"));
        }
        group.sort();
        out.extend(group);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fixtures::*;
    use crate::geom::validate_polygon;
    use crate::pixelate::standard_pixelation;
    use std::collections::VecDeque;

    fn reach(g: &GuardGraph, from: usize) -> Vec<bool> {
        let mut seen = vec![false; g.num_vertices()];
        seen[from] = true;
        let mut q = VecDeque::from([from]);
        while let Some(a) = q.pop_front() {
            for &(b, _) in g.out_arcs(a) {
                if !seen[b] {
                    seen[b] = true;
                    q.push_back(b);
                }
            }
        }
        seen
    }

    /// 0-1 / small-weight Dijkstra distances.
    fn dist(g: &GuardGraph, from: usize) -> Vec<Option<u32>> {
        let mut d = vec![None; g.num_vertices()];
        let mut heap = std::collections::BinaryHeap::new();
        heap.push(std::cmp::Reverse((0u32, from)));
        while let Some(std::cmp::Reverse((c, a))) = heap.pop() {
            if d[a].is_some() {
                continue;
            }
            d[a] = Some(c);
            for &(b, w) in g.out_arcs(a) {
                if d[b].is_none() {
                    heap.push(std::cmp::Reverse((c + w, b)));
                }
            }
        }
        d
    }

    fn vid(px: &Pixelation, x: i64, y: i64) -> usize {
        px.vertex_at(Point::new(x, y).scaled(SCALE)).unwrap()
    }

    #[test]
    fn directional_examples() {
        let px = standard_pixelation(&l_shape());
        let all: Vec<usize> = (0..px.num_vertices()).collect();
        let g = build_directional(&px, Quadrant::NE, &[vid(&px, 0, 0)], &all);
        let r = reach(&g, g.sources()[0]);
        assert!(g.sinks().iter().all(|&t| r[t]));
        let g = build_directional(&px, Quadrant::NE, &[vid(&px, 2, 1)], &[vid(&px, 1, 2)]);
        assert!(!reach(&g, g.sources()[0])[g.sinks()[0]]);
        for q in Quadrant::ALL {
            let g = build_directional(&px, q, &[], &[]);
            let (sx, sy) = q.signs();
            for (a, b, _) in g.arcs() {
                let (pa, pb) = (px.pos(a), px.pos(b));
                assert!((pb.x - pa.x) * sx >= 0 && (pb.y - pa.y) * sy >= 0);
            }
        }
    }

    #[test]
    fn s_graph_shape() {
        let px = standard_pixelation(&l_shape());
        let all: Vec<usize> = (0..px.num_vertices()).collect();
        let g = build_s_graph(&px, &all, &all);
        assert_eq!(g.num_vertices(), 48);
        let indeg = g.in_degrees();
        for &s in g.sources() {
            assert_eq!(g.out_arcs(s).len(), 4);
            assert_eq!(indeg[s], 0);
        }
        for &t in g.sinks() {
            assert_eq!(indeg[t], 4);
            assert!(g.out_arcs(t).is_empty());
        }
        let g = build_s_graph(&px, &[vid(&px, 1, 1)], &all);
        let r = reach(&g, g.sources()[0]);
        assert!(g.sinks().iter().all(|&t| r[t]));
    }

    #[test]
    fn periscope_examples() {
        let px = standard_pixelation(&l_shape());
        let g = build_periscope_graph(&px, &[vid(&px, 1, 1)], &[vid(&px, 0, 0)], 1);
        assert_eq!(dist(&g, g.sources()[0])[g.sinks()[0]], Some(1));
        let g = build_periscope_graph(&px, &[vid(&px, 2, 0)], &[vid(&px, 0, 2)], 1);
        assert_eq!(dist(&g, g.sources()[0])[g.sinks()[0]], Some(1));
        let corridor = standard_pixelation(&validate_polygon(&[pts(&[(0, 0), (5, 0), (5, 1), (0, 1)])]).unwrap());
        let g = build_periscope_graph(&corridor, &[vid(&corridor, 0, 0)], &[vid(&corridor, 5, 0)], 0);
        assert_eq!(dist(&g, g.sources()[0])[g.sinks()[0]], Some(0));
        assert_eq!(g.bound(), Some(0));
        let g = build_periscope_graph(&px, &[], &[], 1000);
        assert_eq!(g.bound(), Some(px.num_vertices() as u32));
    }

    #[test]
    fn l1_examples() {
        let px = standard_pixelation(&l_shape());
        let all: Vec<usize> = (0..px.num_vertices()).collect();
        let g = build_l1_graph(&px, &[vid(&px, 1, 1)], &all, 4);
        let d = dist(&g, g.sources()[0]);
        assert!(g.sinks().iter().all(|&t| d[t].unwrap() <= 4));
        assert_eq!(d[g.sinks()[vid(&px, 0, 0)]], Some(4));
    }

    #[test]
    fn segments() {
        assert_eq!(enumerate_maximal_segments(&standard_pixelation(&unit_square())).len(), 4);
        let segs = enumerate_maximal_segments(&standard_pixelation(&l_shape()));
        let expect = [
            ((0, 0), (2, 0)),
            ((0, 1), (2, 1)),
            ((0, 2), (1, 2)),
            ((0, 0), (0, 2)),
            ((1, 0), (1, 2)),
            ((2, 0), (2, 1)),
        ];
        let got: Vec<((i64, i64), (i64, i64))> = segs.iter().map(|s| ((s.a.x, s.a.y), (s.b.x, s.b.y))).collect();
        assert_eq!(got, expect);
        let corridor = validate_polygon(&[pts(&[(0, 0), (6, 0), (6, 1), (0, 1)])]).unwrap();
        assert_eq!(enumerate_maximal_segments(&standard_pixelation(&corridor)).len(), 4);
    }

    #[test]
    fn sliding_examples() {
        let poly = l_shape();
        let std_px = standard_pixelation(&poly);
        let px = std_px.one_refinement().unwrap();
        let rv = |x: i64, y: i64| px.vertex_at(Point::new(x, y)).unwrap();
        let all: Vec<usize> = (0..px.num_vertices()).collect();
        let g = build_sliding_graph(&px, &[(rv(2, 0), rv(2, 4))], &all);
        let d = dist(&g, g.sources()[0]);
        assert!(g.sinks().iter().all(|&t| d[t].is_some_and(|x| x <= 1)));
        let g = build_sliding_graph(&px, &[(rv(0, 4), rv(2, 4))], &[rv(4, 1)]);
        assert!(!dist(&g, g.sources()[0])[g.sinks()[0]].is_some_and(|x| x <= 1));
        let sq = standard_pixelation(&unit_square()).one_refinement().unwrap();
        let sv = |x: i64, y: i64| sq.vertex_at(Point::new(x, y)).unwrap();
        let g = build_sliding_graph(&sq, &[(sv(0, 0), sv(2, 0))], &[sv(0, 2)]);
        assert!(dist(&g, g.sources()[0])[g.sinks()[0]].is_some_and(|x| x <= 1));
    }
}
