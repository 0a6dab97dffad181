//! Benchmark sweep over generated families, reported as CSV.

use std::fmt::Write as _;
use std::time::Instant;

use crate::gen::{generate, Family, GenConfig, GenError};
use crate::instance::model_label;
use crate::models::{build_guard_graph, reduce_instance, to_input_units, GuardSpec, Model};
use crate::pixelate::{standard_pixelation, Pixelation};
use crate::solver::{solve, SolverKind};
use crate::twd::{decompose, Heuristic};

/// Column order of [`to_csv`].
pub const CSV_HEADER: &str = "family,cells,n,psi_vertices,width,model,solver,status,cardinality,time_ms";

/// Candidate guard and watch points for point-guard models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSet {
    /// Every point of the polygon (finite reduction on the refinement).
    /// Directional and L1 models always use standard vertices.
    All,
    /// Vertices of the standard pixelation.
    Standard,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    /// Generator cell counts.
    pub sizes: Vec<usize>,
    pub models: Vec<Model>,
    pub solvers: Vec<SolverKind>,
    pub seed: u64,
    pub points: PointSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub family: Family,
    pub cells: usize,
    /// Polygon vertex count.
    pub n: usize,
    pub psi_vertices: usize,
    pub width: usize,
    pub model: Model,
    pub solver: SolverKind,
    /// `optimal`, `approximate`, `infeasible`, or `error: ...`.
    pub status: String,
    pub cardinality: Option<usize>,
    pub millis: f64,
}

fn standard_points(px: &Pixelation) -> GuardSpec {
    GuardSpec::ExplicitPoints((0..px.num_vertices()).map(|v| to_input_units(px.pos(v))).collect())
}

/// Guard and watch specs used by the bench for a model.
pub fn bench_specs(px: &Pixelation, model: Model, points: PointSet) -> (GuardSpec, GuardSpec) {
    let all = points == PointSet::All;
    match model {
        Model::Sliding => (GuardSpec::MaximalSegments, if all { GuardSpec::AllPoints } else { standard_points(px) }),
        Model::S | Model::Periscope { .. } if all => (GuardSpec::AllPoints, GuardSpec::AllPoints),
        _ => (standard_points(px), standard_points(px)),
    }
}

/// Runs every (family, size, model, solver) combination; one row each.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, GenError> {
    let mut rows = Vec::new();
    for &family in &cfg.families {
        for &cells in &cfg.sizes {
            let poly = generate(&GenConfig::new(family, cells, cfg.seed))?;
            let px = standard_pixelation(&poly);
            let width = decompose(&px.graph(), Heuristic::MinFill).width();
            for &model in &cfg.models {
                let (gamma, watch) = bench_specs(&px, model, cfg.points);
                let prepared = reduce_instance(&poly, &px, model, &gamma, &watch).map(|r| build_guard_graph(&r));
                for &solver in &cfg.solvers {
                    let start = Instant::now();
                    let result = prepared.as_ref().map_err(|e| e.to_string()).and_then(|g| solve(g, solver).map_err(|e| e.to_string()));
                    let millis = start.elapsed().as_secs_f64() * 1e3;
                    let (status, cardinality) = match result {
                        Ok(s) => (s.status.name().to_string(), Some(s.cardinality)),
                        Err(e) => (format!("error: {e}"), None),
                    };
                    rows.push(BenchRow {
                        family,
                        cells,
                        n: poly.vertex_count(),
                        psi_vertices: px.num_vertices(),
                        width,
                        model,
                        solver,
                        status,
                        cardinality,
                        millis,
                    });
                }
            }
        }
    }
    Ok(rows)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.3}",
            r.family,
            r.cells,
            r.n,
            r.psi_vertices,
            r.width,
            csv_field(&model_label(r.model)),
            r.solver.name(),
            csv_field(&r.status),
            r.cardinality.map(|c| c.to_string()).unwrap_or_default(),
            r.millis
        );
    }
    out
}

/// Rows where dp and oracle both finished on the same instance but disagree.
pub fn disagreements(rows: &[BenchRow]) -> Vec<(&BenchRow, &BenchRow)> {
    let mut out = Vec::new();
    for a in rows.iter().filter(|r| r.solver == SolverKind::Dp) {
        for b in rows.iter().filter(|r| r.solver == SolverKind::Oracle) {
            let same = (a.family, a.cells, a.model) == (b.family, b.cells, b.model);
            if same && a.cardinality.is_some() && b.cardinality.is_some() && a.cardinality != b.cardinality {
                out.push((a, b));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep() {
        let cfg = BenchConfig {
            families: vec![Family::Staircase, Family::Comb],
            sizes: vec![4, 8],
            models: vec![Model::S, Model::Periscope { k: 1 }],
            solvers: vec![SolverKind::Dp, SolverKind::Oracle],
            seed: 3,
            points: PointSet::All,
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2 * 2);
        assert!(disagreements(&rows).is_empty());
        let csv = to_csv(&rows);
        assert_eq!(csv.lines().count(), 17);
        assert_eq!(csv.lines().next(), Some(CSV_HEADER));
        for line in csv.lines() {
            assert_eq!(line.split(',').count(), 10, "{line}");
        }
    }
}
