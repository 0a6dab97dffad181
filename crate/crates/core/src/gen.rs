//! Seeded generators for orthogonal polygons built from unit grid cells.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{validate_polygon, GeomError, OrthoPolygon, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Polyomino,
    Staircase,
    Comb,
    Spiral,
    GridSlits,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Polyomino, Family::Staircase, Family::Comb, Family::Spiral, Family::GridSlits];

    pub fn name(self) -> &'static str {
        match self {
            Family::Polyomino => "polyomino",
            Family::Staircase => "staircase",
            Family::Comb => "comb",
            Family::Spiral => "spiral",
            Family::GridSlits => "grid-slits",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family `{s}` (expected polyomino, staircase, comb, spiral or grid-slits)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    /// Target number of unit cells (approximate for some families).
    pub cells: usize,
    #[serde(rename = "corridorWidth")]
    pub corridor_width: usize,
    pub holes: usize,
    pub family: Family,
}

impl GenConfig {
    pub fn new(family: Family, cells: usize, seed: u64) -> Self {
        GenConfig { seed, cells, corridor_width: 1, holes: 0, family }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("cells must be at least 1")]
    NoCells,
    #[error("corridor width must be at least 1")]
    ZeroWidth,
    #[error("cannot carve {wanted} holes; only {available} cells are surrounded on all sides")]
    Unsatisfiable { wanted: usize, available: usize },
    #[error("generated polygon is invalid: {0}")]
    Invalid(#[from] GeomError),
}

type Cell = (i64, i64);

/// Generates a polygon; identical configs give identical polygons.
pub fn generate(cfg: &GenConfig) -> Result<OrthoPolygon, GenError> {
    if cfg.cells == 0 {
        return Err(GenError::NoCells);
    }
    if cfg.corridor_width == 0 {
        return Err(GenError::ZeroWidth);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let w = cfg.corridor_width as i64;
    let mut cells = match cfg.family {
        Family::Polyomino => polyomino(cfg.cells.div_ceil((w * w) as usize), w, &mut rng),
        Family::Staircase => staircase(cfg.cells, w),
        Family::Comb => comb(cfg.cells, w, &mut rng),
        Family::Spiral => spiral(cfg.cells, w),
        Family::GridSlits => grid_slits(cfg.cells),
    };
    make_simple(&mut cells, cfg.family == Family::GridSlits);
    carve_holes(&mut cells, cfg.holes, &mut rng)?;
    Ok(cells_to_polygon(&cells)?)
}

fn polyomino(n: usize, w: i64, rng: &mut ChaCha8Rng) -> BTreeSet<Cell> {
    let mut coarse: BTreeSet<Cell> = BTreeSet::from([(0, 0)]);
    let mut frontier: Vec<Cell> = neighbors4((0, 0)).to_vec();
    while coarse.len() < n {
        let i = rng.gen_range(0..frontier.len());
        let c = frontier.swap_remove(i);
        if coarse.insert(c) {
            frontier.extend(neighbors4(c).into_iter().filter(|x| !coarse.contains(x)));
        }
    }
    let mut cells = BTreeSet::new();
    for &(x, y) in &coarse {
        for i in 0..w {
            for j in 0..w {
                cells.insert((x * w + i, y * w + j));
            }
        }
    }
    cells
}

/// Diagonal staircase: alternate right and up unit steps, thickened downward.
fn staircase(n: usize, w: i64) -> BTreeSet<Cell> {
    let mut cells = BTreeSet::new();
    let (mut x, mut y) = (0i64, 0i64);
    for i in 0..n {
        for t in 0..w {
            cells.insert((x, y - t));
        }
        if i % 2 == 0 {
            x += 1;
        } else {
            y += 1;
        }
    }
    cells
}

/// Horizontal spine with vertical teeth of random height on every other column block.
fn comb(n: usize, w: i64, rng: &mut ChaCha8Rng) -> BTreeSet<Cell> {
    let mut cells = BTreeSet::new();
    let mut col = 0i64;
    while cells.len() < n {
        for x in col..col + w {
            for y in 0..w {
                cells.insert((x, y));
            }
        }
        if (col / w) % 2 == 0 && cells.len() < n {
            let h: i64 = rng.gen_range(2..=5);
            for x in col..col + w {
                for y in w..w + h {
                    cells.insert((x, y));
                }
            }
        }
        col += w;
    }
    cells
}

/// Square spiral corridor of width `w` with one-cell walls between arms.
fn spiral(n: usize, w: i64) -> BTreeSet<Cell> {
    let mut cells = BTreeSet::new();
    let step = w + 1;
    let dirs = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    let (mut px, mut py) = (0i64, 0i64);
    let fill_block = |cells: &mut BTreeSet<Cell>, bx: i64, by: i64| {
        for i in 0..w {
            for j in 0..w {
                cells.insert((bx * step + i, by * step + j));
            }
        }
    };
    fill_block(&mut cells, 0, 0);
    let mut len = 1;
    let mut d = 0;
    'outer: loop {
        for _ in 0..2 {
            let (dx, dy) = dirs[d % 4];
            for _ in 0..len {
                // connector cells between consecutive blocks, then the next block
                let (bx, by) = (px + dx, py + dy);
                for i in 0..w {
                    let (cx, cy) = if dx != 0 {
                        (px * step + if dx > 0 { w } else { -1 }, py * step + i)
                    } else {
                        (px * step + i, py * step + if dy > 0 { w } else { -1 })
                    };
                    cells.insert((cx, cy));
                }
                fill_block(&mut cells, bx, by);
                px = bx;
                py = by;
                if cells.len() >= n {
                    break 'outer;
                }
            }
            d += 1;
        }
        len += 1;
    }
    cells
}

/// Solid m-by-m square with single-cell holes at odd coordinates.
fn grid_slits(n: usize) -> BTreeSet<Cell> {
    let m = ((n as f64).sqrt().round() as i64).max(3);
    let mut cells = BTreeSet::new();
    for x in 0..m {
        for y in 0..m {
            let hole = x % 2 == 1 && y % 2 == 1 && x < m - 1 && y < m - 1;
            if !hole {
                cells.insert((x, y));
            }
        }
    }
    cells
}

fn neighbors4((x, y): Cell) -> [Cell; 4] {
    [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
}

/// Fills enclosed empty regions that are not meant as holes and removes
/// corner-only contacts, so the boundary consists of disjoint simple rings.
/// With `keep_slits`, enclosed single cells with a full 8-neighborhood stay.
fn make_simple(cells: &mut BTreeSet<Cell>, keep_slits: bool) {
    loop {
        let mut changed = false;
        // corner-only contacts: a 2x2 window in checkerboard pattern
        let candidates: Vec<Cell> = cells.iter().copied().collect();
        for (x, y) in candidates {
            for (dx, dy) in [(1, 1), (1, -1)] {
                let diag = (x + dx, y + dy);
                let (a, b) = ((x + dx, y), (x, y + dy));
                if cells.contains(&diag) && !cells.contains(&a) && !cells.contains(&b) {
                    cells.insert(a);
                    changed = true;
                }
            }
        }
        // enclosed regions other than isolated single cells
        let (lo_x, hi_x) = (cells.iter().map(|c| c.0).min().unwrap() - 1, cells.iter().map(|c| c.0).max().unwrap() + 1);
        let (lo_y, hi_y) = (cells.iter().map(|c| c.1).min().unwrap() - 1, cells.iter().map(|c| c.1).max().unwrap() + 1);
        let mut outside: HashSet<Cell> = HashSet::from([(lo_x, lo_y)]);
        let mut queue = VecDeque::from([(lo_x, lo_y)]);
        while let Some(c) = queue.pop_front() {
            for nb in neighbors4(c) {
                if nb.0 < lo_x || nb.0 > hi_x || nb.1 < lo_y || nb.1 > hi_y {
                    continue;
                }
                if !cells.contains(&nb) && outside.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
        for x in lo_x..=hi_x {
            for y in lo_y..=hi_y {
                let c = (x, y);
                if !cells.contains(&c) && !outside.contains(&c) && !(keep_slits && isolated_hole(cells, c)) {
                    cells.insert(c);
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

fn isolated_hole(cells: &BTreeSet<Cell>, (x, y): Cell) -> bool {
    (-1..=1).all(|dx| (-1..=1).all(|dy| (dx == 0 && dy == 0) || cells.contains(&(x + dx, y + dy))))
}

fn carve_holes(cells: &mut BTreeSet<Cell>, holes: usize, rng: &mut ChaCha8Rng) -> Result<(), GenError> {
    if holes == 0 {
        return Ok(());
    }
    let mut candidates: Vec<Cell> = cells.iter().copied().filter(|&c| isolated_hole(cells, c)).collect();
    candidates.shuffle(rng);
    let available = candidates.len();
    let mut carved = 0;
    for c in candidates {
        if carved == holes {
            break;
        }
        if isolated_hole(cells, c) {
            cells.remove(&c);
            carved += 1;
        }
    }
    if carved < holes {
        return Err(GenError::Unsatisfiable { wanted: holes, available: available.min(carved) });
    }
    Ok(())
}

/// Traces the boundary rings of a cell set (interior on the left) and
/// validates the result; the ring of largest area is the outer one.
pub fn cells_to_polygon(cells: &BTreeSet<Cell>) -> Result<OrthoPolygon, GeomError> {
    let mut next: HashMap<Point, Point> = HashMap::new();
    for &(x, y) in cells {
        let empty = |dx: i64, dy: i64| !cells.contains(&(x + dx, y + dy));
        if empty(0, -1) {
            next.insert(Point::new(x, y), Point::new(x + 1, y));
        }
        if empty(1, 0) {
            next.insert(Point::new(x + 1, y), Point::new(x + 1, y + 1));
        }
        if empty(0, 1) {
            next.insert(Point::new(x + 1, y + 1), Point::new(x, y + 1));
        }
        if empty(-1, 0) {
            next.insert(Point::new(x, y + 1), Point::new(x, y));
        }
    }
    let mut starts: Vec<Point> = next.keys().copied().collect();
    starts.sort();
    let mut used: HashSet<Point> = HashSet::new();
    let mut rings: Vec<(i64, Vec<Point>)> = Vec::new();
    for s in starts {
        if used.contains(&s) {
            continue;
        }
        let mut ring = Vec::new();
        let mut cur = s;
        while used.insert(cur) {
            ring.push(cur);
            cur = next[&cur];
        }
        let area2: i64 = (0..ring.len())
            .map(|i| {
                let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
                a.x * b.y - b.x * a.y
            })
            .sum();
        rings.push((area2, ring));
    }
    rings.sort_by_key(|r| std::cmp::Reverse(r.0));
    let rings: Vec<Vec<Point>> = rings.into_iter().map(|(_, r)| r).collect();
    validate_polygon(&rings)
}
