//! SVG 1.1 drawings of polygons, pixelations, guards and coverage.

use std::fmt::Write as _;

use crate::geom::{OrthoPolygon, Point, Segment};
use crate::instance::GuardJson;
use crate::models::{GeoOracle, Model};
use crate::pixelate::{standard_pixelation, Pixelation, PixelateError, SCALE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Polygon,
    Pixelation,
    Refinement,
    Guards,
    Coverage,
}

impl Layer {
    pub const ALL: [Layer; 5] = [Layer::Polygon, Layer::Pixelation, Layer::Refinement, Layer::Guards, Layer::Coverage];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Polygon => "polygon",
            Layer::Pixelation => "pixelation",
            Layer::Refinement => "refinement",
            Layer::Guards => "guards",
            Layer::Coverage => "coverage",
        }
    }

    pub fn parse(s: &str) -> Option<Layer> {
        Layer::ALL.into_iter().find(|l| l.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    pub layers: Vec<Layer>,
    /// SVG pixels per input unit.
    pub scale: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig { layers: vec![Layer::Polygon, Layer::Pixelation, Layer::Guards], scale: 40.0 }
    }
}

/// Guards to draw and the model used to shade coverage.
#[derive(Debug, Clone, PartialEq)]
pub struct Overlay {
    pub model: Model,
    pub guards: Vec<GuardJson>,
}

struct Canvas {
    out: String,
    scale: f64,
    x0: f64,
    y1: f64,
}

impl Canvas {
    /// SVG coordinates of a point in half-units; y grows downward.
    fn map(&self, p: Point) -> (f64, f64) {
        let s = SCALE as f64;
        ((p.x as f64 / s - self.x0) * self.scale, (self.y1 - p.y as f64 / s) * self.scale)
    }

    fn map_input(&self, p: [f64; 2]) -> (f64, f64) {
        ((p[0] - self.x0) * self.scale, (self.y1 - p[1]) * self.scale)
    }

    fn rect(&mut self, class: &str, min: Point, max: Point) {
        let (x, y) = self.map(Point::new(min.x, max.y));
        let (x2, y2) = self.map(Point::new(max.x, min.y));
        let _ = writeln!(self.out, r#"  <rect class="{class}" x="{}" y="{}" width="{}" height="{}"/>"#, num(x), num(y), num(x2 - x), num(y2 - y));
    }
}

fn num(v: f64) -> String {
    let r = (v * 1000.0).round() / 1000.0;
    if r == r.trunc() {
        format!("{}", r as i64)
    } else {
        format!("{r}")
    }
}

/// Refinement pixels whose centers some guard covers.
pub fn covered_pixels(poly: &OrthoPolygon, refined: &Pixelation, overlay: &Overlay) -> Vec<usize> {
    let oracle = GeoOracle::new(poly);
    let n = oracle.num_points();
    let mut seen = vec![false; n];
    for g in &overlay.guards {
        let reach: Vec<bool> = match (g, overlay.model) {
            (GuardJson::Segment(a, b), Model::Sliding) => {
                let seg = Segment::new(Point::new(a[0] as i64, a[1] as i64), Point::new(b[0] as i64, b[1] as i64));
                match seg {
                    Some(seg) => (0..n).map(|p| oracle.camera_sees(&seg, p)).collect(),
                    None => continue,
                }
            }
            (GuardJson::Point(p), model) => {
                let Ok(i) = oracle.index(p[0], p[1]) else { continue };
                match model {
                    Model::S => oracle.s_reach(i),
                    Model::Directional(q) => oracle.staircase_reach(i, q),
                    Model::Periscope { k } => oracle.bend_distances(i).iter().map(|d| d.is_some_and(|d| d <= k)).collect(),
                    Model::L1 { d } => oracle.l1_distances(i).iter().map(|l| l.is_some_and(|l| l <= d)).collect(),
                    Model::Sliding => continue,
                }
            }
            _ => continue,
        };
        for (s, r) in seen.iter_mut().zip(reach) {
            *s |= r;
        }
    }
    let s = 2.0 * SCALE as f64;
    refined
        .pixels()
        .iter()
        .enumerate()
        .filter(|(_, px)| {
            let (cx, cy) = ((px.min.x + px.max.x) as f64 / s, (px.min.y + px.max.y) as f64 / s);
            oracle.index(cx, cy).is_ok_and(|i| seen[i])
        })
        .map(|(i, _)| i)
        .collect()
}

/// Renders the requested layers. Coverage and guards need an overlay.
pub fn render_svg(poly: &OrthoPolygon, cfg: &RenderConfig, overlay: Option<&Overlay>) -> Result<String, PixelateError> {
    let (lo, hi) = poly.bbox();
    let margin = 0.5;
    let (x0, y1) = (lo.x as f64 - margin, hi.y as f64 + margin);
    let w = (hi.x - lo.x) as f64 + 2.0 * margin;
    let h = (hi.y - lo.y) as f64 + 2.0 * margin;
    let mut c = Canvas { out: String::new(), scale: cfg.scale, x0, y1 };
    let _ = writeln!(c.out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(w * cfg.scale),
        num(h * cfg.scale),
        num(w * cfg.scale),
        num(h * cfg.scale)
    );
    let _ = writeln!(
        c.out,
        "<style>.polygon{{fill:#f4f1e8;stroke:#222;stroke-width:2}}.pixel{{fill:none;stroke:#4a6fa5;stroke-width:1}}\
         .refined-pixel{{fill:none;stroke:#9ab;stroke-width:0.5;stroke-dasharray:3 2}}.covered{{fill:#7bc47f;fill-opacity:0.55;stroke:none}}\
         .guard{{fill:#c0392b;stroke:#c0392b;stroke-width:3}}</style>"
    );
    let has = |l: Layer| cfg.layers.contains(&l);
    let standard = standard_pixelation(poly);
    let refined = if has(Layer::Refinement) || has(Layer::Coverage) { Some(standard.one_refinement()?) } else { None };

    if has(Layer::Polygon) {
        let mut d = String::new();
        for ring in poly.rings() {
            for (i, &p) in ring.vertices().iter().enumerate() {
                let (x, y) = c.map(p.scaled(SCALE));
                let _ = write!(d, "{}{},{} ", if i == 0 { "M" } else { "L" }, num(x), num(y));
            }
            d.push_str("Z ");
        }
        let _ = writeln!(c.out, r#"  <path class="polygon" fill-rule="evenodd" d="{}"/>"#, d.trim_end());
    }
    if let (true, Some(ov), Some(rf)) = (has(Layer::Coverage), overlay, &refined) {
        let _ = writeln!(c.out, r#"  <g id="coverage">"#);
        for i in covered_pixels(poly, rf, ov) {
            let px = rf.pixels()[i];
            c.rect("covered", px.min, px.max);
        }
        let _ = writeln!(c.out, "  </g>");
    }
    if let (true, Some(rf)) = (has(Layer::Refinement), &refined) {
        let _ = writeln!(c.out, r#"  <g id="refinement">"#);
        for px in rf.pixels() {
            c.rect("refined-pixel", px.min, px.max);
        }
        let _ = writeln!(c.out, "  </g>");
    }
    if has(Layer::Pixelation) {
        let _ = writeln!(c.out, r#"  <g id="pixelation">"#);
        for px in standard.pixels() {
            c.rect("pixel", px.min, px.max);
        }
        let _ = writeln!(c.out, "  </g>");
    }
    if let (true, Some(ov)) = (has(Layer::Guards), overlay) {
        let _ = writeln!(c.out, r#"  <g id="guards">"#);
        for g in &ov.guards {
            match g {
                GuardJson::Point(p) => {
                    let (x, y) = c.map_input(*p);
                    let _ = writeln!(c.out, r#"    <circle class="guard" cx="{}" cy="{}" r="5"/>"#, num(x), num(y));
                }
                GuardJson::Segment(a, b) => {
                    let (x1, y1) = c.map_input(*a);
                    let (x2, y2) = c.map_input(*b);
                    let _ = writeln!(
                        c.out,
                        r#"    <line class="guard" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        num(x1),
                        num(y1),
                        num(x2),
                        num(y2)
                    );
                }
            }
        }
        let _ = writeln!(c.out, "  </g>");
    }
    c.out.push_str("</svg>\n");
    Ok(c.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fixtures::l_shape;

    fn count(svg: &str, class: &str) -> usize {
        svg.matches(&format!(r#"class="{class}""#)).count()
    }

    #[test]
    fn l_shape_pixels() {
        let cfg = RenderConfig { layers: vec![Layer::Polygon, Layer::Pixelation], scale: 10.0 };
        let svg = render_svg(&l_shape(), &cfg, None).unwrap();
        assert_eq!(count(&svg, "pixel"), 3);
        assert_eq!(count(&svg, "polygon"), 1);
        assert!(svg.starts_with("<?xml") && svg.ends_with("</svg>\n"));
        assert_eq!(svg, render_svg(&l_shape(), &cfg, None).unwrap());
    }

    #[test]
    fn coverage_layer() {
        let cfg = RenderConfig { layers: vec![Layer::Coverage], scale: 10.0 };
        let empty = Overlay { model: Model::S, guards: vec![] };
        assert_eq!(count(&render_svg(&l_shape(), &cfg, Some(&empty)).unwrap(), "covered"), 0);
        let one = Overlay { model: Model::S, guards: vec![GuardJson::Point([0.5, 0.5])] };
        assert_eq!(count(&render_svg(&l_shape(), &cfg, Some(&one)).unwrap(), "covered"), 12);
        let corner = Overlay { model: Model::Periscope { k: 0 }, guards: vec![GuardJson::Point([2.0, 0.0])] };
        // the two straight lines from a corner miss every pixel center
        assert_eq!(count(&render_svg(&l_shape(), &cfg, Some(&corner)).unwrap(), "covered"), 0);
    }
}
