//! Brute-force geometric decisions on a uniform quarter-unit grid. Nothing
//! here looks at pixelations or guard graphs.

use std::collections::VecDeque;

use crate::geom::{Orientation, OrthoPolygon, Segment};

use super::{Model, ModelError, Quadrant};

/// Grid steps per input unit.
const Q: i64 = 4;

/// Quarter-grid points inside the closed polygon, with the unit moves that
/// stay inside.
#[derive(Debug, Clone)]
pub struct GeoOracle {
    x0: i64,
    y0: i64,
    w: i64,
    h: i64,
    inside: Vec<bool>,
    /// `step[i][0]`: move from point i to i+(1,0) allowed; `[1]`: to i+(0,1).
    step: Vec<[bool; 2]>,
}

impl GeoOracle {
    pub fn new(poly: &OrthoPolygon) -> GeoOracle {
        let (lo, hi) = poly.bbox();
        let (x0, y0) = (lo.x * Q, lo.y * Q);
        let (w, h) = ((hi.x - lo.x) * Q + 1, (hi.y - lo.y) * Q + 1);
        let inside_at = |qx2: i64, qy2: i64| poly.classify_scaled(qx2, qy2, 2 * Q).is_inside();
        let mut inside = vec![false; (w * h) as usize];
        let mut step = vec![[false; 2]; (w * h) as usize];
        for j in 0..h {
            for i in 0..w {
                let (qx, qy) = (x0 + i, y0 + j);
                let idx = (j * w + i) as usize;
                inside[idx] = inside_at(2 * qx, 2 * qy);
            }
        }
        for j in 0..h {
            for i in 0..w {
                let idx = (j * w + i) as usize;
                if !inside[idx] {
                    continue;
                }
                let (qx, qy) = (x0 + i, y0 + j);
                if i + 1 < w && inside[idx + 1] {
                    step[idx][0] = inside_at(2 * qx + 1, 2 * qy);
                }
                if j + 1 < h && inside[idx + w as usize] {
                    step[idx][1] = inside_at(2 * qx, 2 * qy + 1);
                }
            }
        }
        GeoOracle { x0, y0, w, h, inside, step }
    }

    /// Grid index of a point given in input units.
    pub fn index(&self, x: f64, y: f64) -> Result<usize, ModelError> {
        let (qx, qy) = (x * Q as f64, y * Q as f64);
        if qx.fract() != 0.0 || qy.fract() != 0.0 {
            return Err(ModelError::OffGrid(x, y));
        }
        let (i, j) = (qx as i64 - self.x0, qy as i64 - self.y0);
        if i < 0 || j < 0 || i >= self.w || j >= self.h || !self.inside[(j * self.w + i) as usize] {
            return Err(ModelError::OutsidePolygon(x, y));
        }
        Ok((j * self.w + i) as usize)
    }

    pub fn num_points(&self) -> usize {
        self.inside.len()
    }

    /// Neighbor of grid point `i` one step in direction `d` (0=N,1=E,2=S,3=W).
    fn moved(&self, i: usize, d: usize) -> Option<usize> {
        let w = self.w as usize;
        match d {
            0 => self.step[i][1].then(|| i + w),
            1 => self.step[i][0].then(|| i + 1),
            2 => (i >= w && self.step[i - w][1]).then(|| i - w),
            _ => (!i.is_multiple_of(w) && self.step[i - 1][0]).then(|| i - 1),
        }
    }

    /// Points reachable from `g` by a staircase moving only in the
    /// quadrant's two directions.
    pub fn staircase_reach(&self, g: usize, q: Quadrant) -> Vec<bool> {
        let (sx, sy) = q.signs();
        let dirs = [if sy > 0 { 0 } else { 2 }, if sx > 0 { 1 } else { 3 }];
        let mut seen = vec![false; self.inside.len()];
        seen[g] = true;
        let mut queue = VecDeque::from([g]);
        while let Some(a) = queue.pop_front() {
            for &d in &dirs {
                if let Some(b) = self.moved(a, d) {
                    if !seen[b] {
                        seen[b] = true;
                        queue.push_back(b);
                    }
                }
            }
        }
        seen
    }

    /// Union of the four staircase reach sets.
    pub fn s_reach(&self, g: usize) -> Vec<bool> {
        let mut out = vec![false; self.inside.len()];
        for q in Quadrant::ALL {
            for (o, r) in out.iter_mut().zip(self.staircase_reach(g, q)) {
                *o |= r;
            }
        }
        out
    }

    /// Minimum number of bends of an orthogonal path from `g` to every point.
    pub fn bend_distances(&self, g: usize) -> Vec<Option<u32>> {
        let n = self.inside.len();
        let mut best = vec![u32::MAX; n * 4];
        let mut deque = VecDeque::new();
        for d in 0..4 {
            best[g * 4 + d] = 0;
            deque.push_back((g, d, 0u32));
        }
        while let Some((a, d, c)) = deque.pop_front() {
            if c > best[a * 4 + d] {
                continue;
            }
            if let Some(b) = self.moved(a, d) {
                if c < best[b * 4 + d] {
                    best[b * 4 + d] = c;
                    deque.push_front((b, d, c));
                }
            }
            for nd in [(d + 1) % 4, (d + 3) % 4] {
                if c + 1 < best[a * 4 + nd] {
                    best[a * 4 + nd] = c + 1;
                    deque.push_back((a, nd, c + 1));
                }
            }
        }
        (0..n).map(|i| best[i * 4..i * 4 + 4].iter().copied().min().filter(|&c| c != u32::MAX)).collect()
    }

    /// Geodesic orthogonal path length from `g`, in half-units.
    pub fn l1_distances(&self, g: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.inside.len()];
        dist[g] = Some(0u32);
        let mut queue = VecDeque::from([g]);
        while let Some(a) = queue.pop_front() {
            let da = dist[a].unwrap();
            for d in 0..4 {
                if let Some(b) = self.moved(a, d) {
                    if dist[b].is_none() {
                        dist[b] = Some(da + 1);
                        queue.push_back(b);
                    }
                }
            }
        }
        // quarter steps are half a half-unit; odd counts never occur between
        // half-unit points but round up for quarter points
        dist.into_iter().map(|d| d.map(|s| s.div_ceil(2))).collect()
    }

    /// Whether the axis-parallel segment from grid point `a` to `b` lies
    /// inside the closed polygon.
    fn straight_inside(&self, a: usize, b: usize) -> bool {
        let w = self.w as usize;
        let (ax, ay, bx, by) = (a % w, a / w, b % w, b / w);
        let (mut cur, dir, steps) = if ax == bx {
            let dir = if by >= ay { 0 } else { 2 };
            (a, dir, ay.abs_diff(by))
        } else if ay == by {
            let dir = if bx >= ax { 1 } else { 3 };
            (a, dir, ax.abs_diff(bx))
        } else {
            return false;
        };
        for _ in 0..steps {
            match self.moved(cur, dir) {
                Some(n) => cur = n,
                None => return false,
            }
        }
        true
    }

    /// Perpendicular-foot test for a camera given in input units.
    pub fn camera_sees(&self, cam: &Segment, p: usize) -> bool {
        let w = self.w as usize;
        let (px, py) = ((p % w) as i64 + self.x0, (p / w) as i64 + self.y0);
        let (ax, ay, bx, by) = (cam.a.x * Q, cam.a.y * Q, cam.b.x * Q, cam.b.y * Q);
        let foot = match cam.orientation() {
            Orientation::Horizontal => (ax.min(bx)..=ax.max(bx)).contains(&px).then_some((px, ay)),
            Orientation::Vertical => (ay.min(by)..=ay.max(by)).contains(&py).then_some((ax, py)),
        };
        let Some((fx, fy)) = foot else { return false };
        match self.index(fx as f64 / Q as f64, fy as f64 / Q as f64) {
            Ok(f) => self.straight_inside(f, p),
            Err(_) => false,
        }
    }
}

/// Decides whether point guard `g` sees `p` under a point-guard model.
/// Both points are in input units at quarter-unit resolution.
pub fn oracle_geo_reachable(poly: &OrthoPolygon, g: [f64; 2], p: [f64; 2], model: Model) -> Result<bool, ModelError> {
    let o = GeoOracle::new(poly);
    let (gi, pi) = (o.index(g[0], g[1])?, o.index(p[0], p[1])?);
    Ok(match model {
        Model::Directional(q) => o.staircase_reach(gi, q)[pi],
        Model::S => o.s_reach(gi)[pi],
        Model::Periscope { k } => o.bend_distances(gi)[pi].is_some_and(|b| b <= k),
        Model::L1 { d } => o.l1_distances(gi)[pi].is_some_and(|l| l <= d),
        Model::Sliding => return Err(ModelError::InvalidGuardSpec),
    })
}

/// Perpendicular-foot test for a sliding camera (input units).
pub fn oracle_sliding_sees(poly: &OrthoPolygon, camera: &Segment, p: [f64; 2]) -> Result<bool, ModelError> {
    let o = GeoOracle::new(poly);
    let pi = o.index(p[0], p[1])?;
    Ok(o.camera_sees(camera, pi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fixtures::*;
    use crate::geom::Point;

    #[test]
    fn staircase_examples() {
        let l = l_shape();
        assert!(oracle_geo_reachable(&l, [1.0, 1.0], [0.0, 2.0], Model::S).unwrap());
        assert!(!oracle_geo_reachable(&l, [2.0, 1.0], [1.0, 2.0], Model::Directional(Quadrant::NE)).unwrap());
        assert!(oracle_geo_reachable(&l, [0.0, 0.0], [0.75, 1.75], Model::Directional(Quadrant::NE)).unwrap());
        assert!(oracle_geo_reachable(&l, [2.0, 1.0], [1.0, 2.0], Model::S).unwrap());
        assert!(!oracle_geo_reachable(&l, [2.0, 1.0], [0.0, 2.0], Model::Directional(Quadrant::SE)).unwrap());
        assert!(matches!(
            oracle_geo_reachable(&l, [1.5, 1.5], [0.0, 0.0], Model::S),
            Err(ModelError::OutsidePolygon(..))
        ));
        assert!(matches!(
            oracle_geo_reachable(&l, [0.1, 0.0], [0.0, 0.0], Model::S),
            Err(ModelError::OffGrid(..))
        ));
    }

    #[test]
    fn bends_and_lengths() {
        let l = l_shape();
        assert!(oracle_geo_reachable(&l, [2.0, 0.0], [0.0, 2.0], Model::Periscope { k: 1 }).unwrap());
        assert!(!oracle_geo_reachable(&l, [2.0, 1.0], [1.0, 2.0], Model::Periscope { k: 0 }).unwrap());
        assert!(oracle_geo_reachable(&l, [2.0, 1.0], [1.0, 2.0], Model::Periscope { k: 1 }).unwrap());
        assert!(oracle_geo_reachable(&l, [1.0, 1.0], [0.0, 0.0], Model::L1 { d: 4 }).unwrap());
        assert!(!oracle_geo_reachable(&l, [1.0, 1.0], [0.0, 0.0], Model::L1 { d: 3 }).unwrap());
        let hole = square_with_hole();
        // around the hole
        assert!(!oracle_geo_reachable(&hole, [1.5, 0.5], [1.5, 2.5], Model::Periscope { k: 1 }).unwrap());
        assert!(oracle_geo_reachable(&hole, [1.5, 0.5], [1.5, 2.5], Model::Periscope { k: 2 }).unwrap());
        assert!(oracle_geo_reachable(&hole, [1.5, 0.5], [1.5, 2.5], Model::L1 { d: 6 }).unwrap());
        assert!(!oracle_geo_reachable(&hole, [1.5, 0.5], [1.5, 2.5], Model::L1 { d: 5 }).unwrap());
    }

    #[test]
    fn sliding_examples() {
        let l = l_shape();
        let cam = Segment::new(Point::new(1, 0), Point::new(1, 2)).unwrap();
        let o = GeoOracle::new(&l);
        for j in 0..=8 {
            for i in 0..=8 {
                if let Ok(p) = o.index(i as f64 / 4.0, j as f64 / 4.0) {
                    assert!(o.camera_sees(&cam, p));
                }
            }
        }
        let top = Segment::new(Point::new(0, 2), Point::new(1, 2)).unwrap();
        assert!(!oracle_sliding_sees(&l, &top, [2.0, 0.5]).unwrap());
        let sq = unit_square();
        let bottom = Segment::new(Point::new(0, 0), Point::new(1, 0)).unwrap();
        assert!(oracle_sliding_sees(&sq, &bottom, [0.0, 1.0]).unwrap());
    }
}
