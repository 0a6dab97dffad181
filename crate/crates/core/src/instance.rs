//! JSON formats for polygons, instances, pixelations and solutions, plus the
//! parse → pixelate → reduce → build pipeline shared by the command line.

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::geom::{validate_polygon, GeomError, OrthoPolygon, Point};
use crate::models::{
    build_guard_graph, reduce_instance, to_input_units, GuardGraph, GuardSpec, Model, ModelError, Quadrant, Reduced,
};
use crate::pixelate::{standard_pixelation, Level, Pixelation};
use crate::solver::{CoverSolution, SolverKind, Stats, Status};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid polygon: {0}")]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Invalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, InstanceError> {
    Err(InstanceError::Invalid(msg.into()))
}

/// A coordinate written as an integer when it is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coord(pub f64);

impl Serialize for Coord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.fract() == 0.0 && self.0.abs() < 9.0e15 {
            s.serialize_i64(self.0 as i64)
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Coord)
    }
}

fn xy(p: [f64; 2]) -> [Coord; 2] {
    [Coord(p[0]), Coord(p[1])]
}

fn unxy(p: [Coord; 2]) -> [f64; 2] {
    [p[0].0, p[1].0]
}

#[derive(Debug, Serialize, Deserialize)]
struct PolygonJson {
    outer: Vec<[i64; 2]>,
    #[serde(default)]
    holes: Vec<Vec<[i64; 2]>>,
}

impl PolygonJson {
    fn from_polygon(p: &OrthoPolygon) -> Self {
        let ring = |r: &[Point]| r.iter().map(|q| [q.x, q.y]).collect::<Vec<_>>();
        PolygonJson {
            outer: ring(p.outer().vertices()),
            holes: p.holes().iter().map(|h| ring(h.vertices())).collect(),
        }
    }

    fn to_polygon(&self) -> Result<OrthoPolygon, GeomError> {
        let ring = |r: &[[i64; 2]]| r.iter().map(|q| Point::new(q[0], q[1])).collect::<Vec<_>>();
        let mut rings = vec![ring(&self.outer)];
        rings.extend(self.holes.iter().map(|h| ring(h)));
        validate_polygon(&rings)
    }
}

pub fn polygon_from_json(text: &str) -> Result<OrthoPolygon, InstanceError> {
    let raw: PolygonJson = serde_json::from_str(text)?;
    Ok(raw.to_polygon()?)
}

pub fn polygon_to_json(p: &OrthoPolygon) -> String {
    pretty(&PolygonJson::from_polygon(p))
}

/// Indented JSON; short values whose children hold only scalars (points,
/// edges, small objects) stay on one line.
fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = String::new();
    write_value(&mut s, &serde_json::to_value(v).expect("serializable"), 0);
    s.push('\n');
    s
}

fn children(v: &Value) -> Box<dyn Iterator<Item = &Value> + '_> {
    match v {
        Value::Array(a) => Box::new(a.iter()),
        Value::Object(o) => Box::new(o.values()),
        _ => Box::new(std::iter::empty()),
    }
}

fn write_inline(out: &mut String, v: &Value) {
    match v {
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_inline(out, x);
            }
            out.push(']');
        }
        Value::Object(o) => {
            out.push('{');
            for (i, (k, x)) in o.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_inline(out, x);
            }
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let mut line = String::new();
    write_inline(&mut line, v);
    let shallow = children(v).all(|c| children(c).all(|g| children(g).next().is_none()));
    if children(v).next().is_none() || (shallow && line.len() <= 64) {
        out.push_str(&line);
        return;
    }
    let (open, close) = if v.is_array() { ('[', ']') } else { ('{', '}') };
    out.push(open);
    let pad = "  ".repeat(depth + 1);
    let mut first = true;
    let mut item = |out: &mut String, key: Option<&String>, x: &Value| {
        out.push_str(if first { "\n" } else { ",\n" });
        first = false;
        out.push_str(&pad);
        if let Some(k) = key {
            out.push_str(&Value::String(k.clone()).to_string());
            out.push_str(": ");
        }
        write_value(out, x, depth + 1);
    };
    match v {
        Value::Array(a) => a.iter().for_each(|x| item(out, None, x)),
        Value::Object(o) => o.iter().for_each(|(k, x)| item(out, Some(k), x)),
        _ => unreachable!(),
    }
    out.push('\n');
    out.push_str(&"  ".repeat(depth));
    out.push(close);
}

/// Model as it appears in JSON files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u32>,
}

impl ModelJson {
    pub fn from_model(m: Model) -> Self {
        let (k, d) = match m {
            Model::Periscope { k } => (Some(k), None),
            Model::L1 { d } => (None, Some(d)),
            _ => (None, None),
        };
        ModelJson { kind: m.name().to_string(), k, d }
    }

    pub fn to_model(&self) -> Result<Model, InstanceError> {
        let m = match self.kind.to_ascii_uppercase().as_str() {
            "S" => Model::S,
            "NE" => Model::Directional(Quadrant::NE),
            "NW" => Model::Directional(Quadrant::NW),
            "SE" => Model::Directional(Quadrant::SE),
            "SW" => Model::Directional(Quadrant::SW),
            "SLIDING" => Model::Sliding,
            "PERISCOPE" => match self.k {
                Some(k) => Model::Periscope { k },
                None => return invalid("model PERISCOPE needs a bend budget \"k\""),
            },
            "L1" => match self.d {
                Some(d) => Model::L1 { d },
                None => return invalid("model L1 needs a length budget \"D\""),
            },
            other => return invalid(format!("unknown model kind `{other}`")),
        };
        Ok(m)
    }
}

/// Parses a model name such as `S`, `NE`, `PERISCOPE:2` or `L1:4`.
pub fn parse_model(s: &str) -> Result<Model, InstanceError> {
    let (kind, param) = match s.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let num = match param.map(|p| p.trim().parse::<u32>()) {
        Some(Ok(n)) => Some(n),
        Some(Err(_)) => return invalid(format!("bad model parameter in `{s}`")),
        None => None,
    };
    ModelJson { kind: kind.to_string(), k: num, d: num }.to_model()
}

/// Formats a model the way [`parse_model`] reads it.
pub fn model_label(m: Model) -> String {
    match m {
        Model::Periscope { k } => format!("PERISCOPE:{k}"),
        Model::L1 { d } => format!("L1:{d}"),
        _ => m.name().to_string(),
    }
}

fn spec_to_json(spec: &GuardSpec) -> Value {
    match spec {
        GuardSpec::AllPoints => Value::from("all"),
        GuardSpec::MaximalSegments => Value::from("segments"),
        GuardSpec::ExplicitPoints(ps) => {
            serde_json::to_value(ps.iter().map(|&p| xy(p)).collect::<Vec<_>>()).expect("serializable")
        }
    }
}

fn spec_from_json(v: &Value, field: &str) -> Result<GuardSpec, InstanceError> {
    match v {
        Value::String(s) if s == "all" => Ok(GuardSpec::AllPoints),
        Value::String(s) if s == "segments" && field == "guards" => Ok(GuardSpec::MaximalSegments),
        Value::Array(_) => {
            let ps: Vec<[Coord; 2]> = serde_json::from_value(v.clone())?;
            Ok(GuardSpec::ExplicitPoints(ps.into_iter().map(unxy).collect()))
        }
        _ => invalid(format!("field `{field}` must be \"all\"{} or a list of [x, y] points", if field == "guards" { ", \"segments\"" } else { "" })),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub polygon: OrthoPolygon,
    pub model: Model,
    pub guards: GuardSpec,
    pub watch: GuardSpec,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    polygon: PolygonJson,
    model: ModelJson,
    guards: Value,
    watch: Value,
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Instance, InstanceError> {
        let raw: InstanceJson = serde_json::from_str(text)?;
        Ok(Instance {
            polygon: raw.polygon.to_polygon()?,
            model: raw.model.to_model()?,
            guards: spec_from_json(&raw.guards, "guards")?,
            watch: spec_from_json(&raw.watch, "watch")?,
        })
    }

    pub fn to_json(&self) -> String {
        pretty(&InstanceJson {
            polygon: PolygonJson::from_polygon(&self.polygon),
            model: ModelJson::from_model(self.model),
            guards: spec_to_json(&self.guards),
            watch: spec_to_json(&self.watch),
        })
    }
}

/// Everything derived from an instance before solving.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub standard: Pixelation,
    pub reduced: Reduced,
    pub graph: GuardGraph,
}

pub fn prepare(inst: &Instance) -> Result<Prepared, InstanceError> {
    let standard = standard_pixelation(&inst.polygon);
    let reduced = reduce_instance(&inst.polygon, &standard, inst.model, &inst.guards, &inst.watch)?;
    let graph = build_guard_graph(&reduced);
    Ok(Prepared { standard, reduced, graph })
}

/// A guard in a solution file: a point, or the two ends of a camera segment.
#[derive(Debug, Clone, PartialEq)]
pub enum GuardJson {
    Point([f64; 2]),
    Segment([f64; 2], [f64; 2]),
}

impl Serialize for GuardJson {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            GuardJson::Point(p) => xy(*p).serialize(s),
            GuardJson::Segment(a, b) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&xy(*a))?;
                seq.serialize_element(&xy(*b))?;
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for GuardJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Point([Coord; 2]),
            Segment([[Coord; 2]; 2]),
        }
        Ok(match Raw::deserialize(d)? {
            Raw::Point(p) => GuardJson::Point(unxy(p)),
            Raw::Segment([a, b]) => GuardJson::Segment(unxy(a), unxy(b)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsJson {
    pub bags: usize,
    pub states: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub millis: Option<f64>,
}

/// Solution file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub status: Status,
    pub model: ModelJson,
    pub guards: Vec<GuardJson>,
    pub cardinality: usize,
    pub solver: String,
    /// Watch points no guard can see; present only when infeasible.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub unreachable: Vec<[Coord; 2]>,
    pub stats: StatsJson,
}

impl SolutionJson {
    /// Timing is left out unless asked for, so output is reproducible.
    pub fn new(prep: &Prepared, sol: &CoverSolution, solver: SolverKind, timings: bool) -> SolutionJson {
        let r = &prep.reduced;
        let guards = sol
            .guards
            .iter()
            .map(|&g| match r.guard_coords(g).as_slice() {
                [p] => GuardJson::Point(*p),
                [a, b] => GuardJson::Segment(*a, *b),
                _ => unreachable!("guards are points or segments"),
            })
            .collect();
        let Stats { bags, states, width, millis } = sol.stats;
        SolutionJson {
            status: sol.status,
            model: ModelJson::from_model(r.model),
            guards,
            cardinality: sol.cardinality,
            solver: solver.name().to_string(),
            unreachable: sol.unreachable.iter().map(|&w| xy(r.watch_coords(w))).collect(),
            stats: StatsJson { bags, states, width, millis: timings.then_some(millis) },
        }
    }

    pub fn from_json(text: &str) -> Result<SolutionJson, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        pretty(self)
    }

    /// Guard ids of the reduced instance matching the listed guards.
    pub fn guard_ids(&self, r: &Reduced) -> Result<Vec<usize>, InstanceError> {
        let mut ids = Vec::with_capacity(self.guards.len());
        for g in &self.guards {
            let want = match g {
                GuardJson::Point(p) => vec![*p],
                GuardJson::Segment(a, b) => vec![*a, *b],
            };
            match (0..r.guards.len()).find(|&i| r.guard_coords(i) == want) {
                Some(i) => ids.push(i),
                None => return invalid(format!("solution guard {want:?} is not a guard of the instance")),
            }
        }
        Ok(ids)
    }
}

#[derive(Serialize)]
struct VertexJson {
    pos: [Coord; 2],
    boundary: bool,
}

#[derive(Serialize)]
struct EdgeJson {
    u: usize,
    v: usize,
    boundary: bool,
}

#[derive(Serialize)]
struct PixelJson {
    min: [Coord; 2],
    max: [Coord; 2],
    corners: [usize; 4],
}

#[derive(Serialize)]
struct PixelationJson {
    level: &'static str,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
    pixels: Vec<PixelJson>,
}

/// Pixelation as JSON, coordinates in input units.
pub fn pixelation_to_json(px: &Pixelation) -> String {
    let c = |p: Point| xy(to_input_units(p));
    pretty(&PixelationJson {
        level: match px.level() {
            Level::Standard => "standard",
            Level::Refined => "refined",
        },
        vertices: px.vertices().iter().map(|v| VertexJson { pos: c(v.pos), boundary: v.boundary }).collect(),
        edges: px.edges().iter().map(|e| EdgeJson { u: e.u, v: e.v, boundary: e.boundary }).collect(),
        pixels: px.pixels().iter().map(|p| PixelJson { min: c(p.min), max: c(p.max), corners: p.corners }).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const L_SHAPE: &str = r#"{"outer": [[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]}"#;

    #[test]
    fn polygon_round_trip() {
        let p = polygon_from_json(L_SHAPE).unwrap();
        let text = polygon_to_json(&p);
        assert_eq!(polygon_to_json(&polygon_from_json(&text).unwrap()), text);
        assert!(text.contains("\"holes\": []"));
    }

    #[test]
    fn instance_round_trip() {
        let text = format!(
            r#"{{"polygon": {L_SHAPE}, "model": {{"kind": "periscope", "k": 2}}, "guards": [[0.5, 0.5], [1, 1]], "watch": "all"}}"#
        );
        let inst = Instance::from_json(&text).unwrap();
        assert_eq!(inst.model, Model::Periscope { k: 2 });
        assert_eq!(inst.guards, GuardSpec::ExplicitPoints(vec![[0.5, 0.5], [1.0, 1.0]]));
        let out = inst.to_json();
        assert!(out.contains("\"kind\": \"PERISCOPE\""));
        assert!(out.contains("[[0.5, 0.5], [1, 1]]"), "integral coordinates print as integers: {out}");
        assert_eq!(Instance::from_json(&out).unwrap().to_json(), out);
    }

    #[test]
    fn instance_errors() {
        let bad_model = format!(r#"{{"polygon": {L_SHAPE}, "model": {{"kind": "L1"}}, "guards": "all", "watch": "all"}}"#);
        assert!(matches!(Instance::from_json(&bad_model), Err(InstanceError::Invalid(_))));
        let bad_watch = format!(r#"{{"polygon": {L_SHAPE}, "model": {{"kind": "S"}}, "guards": "all", "watch": "segments"}}"#);
        assert!(matches!(Instance::from_json(&bad_watch), Err(InstanceError::Invalid(_))));
        assert!(matches!(Instance::from_json("{"), Err(InstanceError::Json(_))));
    }

    #[test]
    fn model_names() {
        for m in ["S", "NE", "SW", "PERISCOPE:3", "L1:4", "SLIDING"] {
            assert_eq!(model_label(parse_model(m).unwrap()), m);
        }
        assert!(parse_model("PERISCOPE").is_err());
        assert!(parse_model("XY").is_err());
    }
}
