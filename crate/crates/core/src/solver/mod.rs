//! Solvers for (bounded) reachability cover on a [`GuardGraph`].

mod contract;
mod cover;
mod dp;
mod kernel;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::GuardGraph;
use crate::twd::{decompose, make_nice, Heuristic, NiceDecomposition};

pub use cover::{greedy_cover, min_set_cover, solve_oracle, ORACLE_CELL_CAP};
pub use contract::contract_zero_cycles;
pub use kernel::{kernelize, Kernel};
pub use dp::{solve_dp, solve_dp_auto, solve_dp_bounded, solve_dp_with, DpConfig, DEFAULT_STATE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Optimal,
    Approximate,
    Infeasible,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Approximate => "approximate",
            Status::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Stats {
    pub bags: usize,
    pub states: u64,
    pub width: Option<usize>,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverSolution {
    pub status: Status,
    /// Selected guard ids, ascending.
    pub guards: Vec<usize>,
    pub cardinality: usize,
    /// For each watch id, a vertex path from a selected guard source.
    pub witness: Option<Vec<Vec<usize>>>,
    /// Watch ids no guard can reach (set when infeasible).
    pub unreachable: Vec<usize>,
    pub stats: Stats,
}

impl CoverSolution {
    fn infeasible(g: &GuardGraph, stats: Stats) -> CoverSolution {
        let all: Vec<usize> = (0..g.sources().len()).collect();
        let unreachable = uncovered_by(g, &all);
        CoverSolution { status: Status::Infeasible, guards: vec![], cardinality: 0, witness: None, unreachable, stats }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("distance budget too large: {states} potential states per bag exceed the cap {cap}")]
    BudgetTooLarge { states: f64, cap: u64 },
    #[error("state cap of {0} exceeded; try --solver oracle")]
    StateCapExceeded(u64),
    #[error("instance too large for the exact oracle ({0} reach-matrix cells)")]
    InstanceTooLarge(u64),
    #[error("unknown guard id {0}")]
    UnknownGuardId(usize),
    #[error("graph has a distance bound; use the bounded solver")]
    UnexpectedBound,
    #[error("graph has no distance bound; use the unbounded solver")]
    MissingBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Uncovered(Vec<usize>),
}

/// Distances from a set of start vertices, respecting the graph's bound.
/// Without a bound every reachable vertex gets distance 0. Also returns the
/// predecessor of each reached vertex.
pub fn reach_from(g: &GuardGraph, starts: &[usize]) -> (Vec<Option<u32>>, Vec<Option<usize>>) {
    let n = g.num_vertices();
    let mut dist = vec![None; n];
    let mut pred = vec![None; n];
    match g.bound() {
        None => {
            let mut queue = VecDeque::new();
            for &s in starts {
                if dist[s].is_none() {
                    dist[s] = Some(0);
                    queue.push_back(s);
                }
            }
            while let Some(a) = queue.pop_front() {
                for &(b, _) in g.out_arcs(a) {
                    if dist[b].is_none() {
                        dist[b] = Some(0);
                        pred[b] = Some(a);
                        queue.push_back(b);
                    }
                }
            }
        }
        Some(w) => {
            let mut best = vec![u32::MAX; n];
            let mut heap = BinaryHeap::new();
            for &s in starts {
                best[s] = 0;
                heap.push(Reverse((0u32, s)));
            }
            while let Some(Reverse((c, a))) = heap.pop() {
                if dist[a].is_some() || c > best[a] {
                    continue;
                }
                dist[a] = Some(c);
                for &(b, wt) in g.out_arcs(a) {
                    let nc = c + wt;
                    if nc <= w && nc < best[b] {
                        best[b] = nc;
                        pred[b] = Some(a);
                        heap.push(Reverse((nc, b)));
                    }
                }
            }
        }
    }
    (dist, pred)
}

fn uncovered_by(g: &GuardGraph, guards: &[usize]) -> Vec<usize> {
    let starts: Vec<usize> = guards.iter().map(|&i| g.sources()[i]).collect();
    let (dist, _) = reach_from(g, &starts);
    g.sinks().iter().enumerate().filter(|(_, &t)| dist[t].is_none()).map(|(i, _)| i).collect()
}

/// Checks that every watch sink is reached from the chosen guards within the bound.
pub fn verify_cover(g: &GuardGraph, guards: &[usize]) -> Result<Verdict, SolveError> {
    if let Some(&bad) = guards.iter().find(|&&i| i >= g.sources().len()) {
        return Err(SolveError::UnknownGuardId(bad));
    }
    let missing = uncovered_by(g, guards);
    Ok(if missing.is_empty() { Verdict::Ok } else { Verdict::Uncovered(missing) })
}

/// Watch ids covered by each guard.
pub fn guard_reach_sets(g: &GuardGraph) -> Vec<Vec<usize>> {
    g.sources()
        .iter()
        .map(|&s| {
            let (dist, _) = reach_from(g, &[s]);
            g.sinks().iter().enumerate().filter(|(_, &t)| dist[t].is_some()).map(|(i, _)| i).collect()
        })
        .collect()
}

/// Shortest witness path for every watch sink from the chosen guards.
pub fn witness_paths(g: &GuardGraph, guards: &[usize]) -> Option<Vec<Vec<usize>>> {
    let starts: Vec<usize> = guards.iter().map(|&i| g.sources()[i]).collect();
    let (dist, pred) = reach_from(g, &starts);
    g.sinks()
        .iter()
        .map(|&t| {
            dist[t]?;
            let mut path = vec![t];
            let mut cur = t;
            while let Some(p) = pred[cur] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            Some(path)
        })
        .collect()
}

/// Min-fill decomposition of the guard graph in nice form.
pub fn nice_decomposition(g: &GuardGraph) -> NiceDecomposition {
    let ug = g.undirected();
    let td = decompose(&ug, Heuristic::MinFill);
    make_nice(&ug, &td)
}

/// Which algorithm to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Dp,
    Oracle,
    Greedy,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Dp => "dp",
            SolverKind::Oracle => "oracle",
            SolverKind::Greedy => "greedy",
        }
    }
}

/// Runs the chosen solver; the DP builds its own min-fill decomposition.
pub fn solve(g: &GuardGraph, kind: SolverKind) -> Result<CoverSolution, SolveError> {
    match kind {
        SolverKind::Dp => solve_dp_auto(g, &DpConfig::from_env()),
        SolverKind::Oracle => solve_oracle(g),
        SolverKind::Greedy => Ok(greedy_cover(g)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two guards, three sinks; only guard 0 reaches sink 0, only guard 1 reaches sink 2.
    pub(crate) fn toy() -> GuardGraph {
        let mut g = GuardGraph::new(2, None);
        g.add_arc(0, 1, 0);
        g.add_source([0]);
        g.add_source([1]);
        g.add_sink([0]);
        g.add_sink([1]);
        let s = g.add_sink([]);
        let src = g.sources()[1];
        g.add_arc(src, s, 0);
        g
    }

    #[test]
    fn verify_examples() {
        let g = toy();
        assert_eq!(verify_cover(&g, &[]).unwrap(), Verdict::Uncovered(vec![0, 1, 2]));
        assert_eq!(verify_cover(&g, &[0]).unwrap(), Verdict::Uncovered(vec![2]));
        assert_eq!(verify_cover(&g, &[0, 1]).unwrap(), Verdict::Ok);
        assert_eq!(verify_cover(&g, &[7]), Err(SolveError::UnknownGuardId(7)));
        let paths = witness_paths(&g, &[0, 1]).unwrap();
        assert_eq!(paths[0], vec![g.sources()[0], 0, g.sinks()[0]]);
        assert_eq!(paths[2].first(), Some(&g.sources()[1]));
        assert_eq!(paths[2].last(), Some(&g.sinks()[2]));
    }

    #[test]
    fn all_solvers_on_toy() {
        let g = toy();
        for kind in [SolverKind::Dp, SolverKind::Oracle, SolverKind::Greedy] {
            let s = solve(&g, kind).unwrap();
            assert_eq!(s.cardinality, 2, "{kind:?}");
            assert_eq!(s.guards, vec![0, 1]);
        }
    }

    #[test]
    fn bounded_reach() {
        let mut g = GuardGraph::new(3, Some(2));
        g.add_arc(0, 1, 1);
        g.add_arc(1, 2, 2);
        g.add_source([0]);
        g.add_sink([1]);
        g.add_sink([2]);
        assert_eq!(verify_cover(&g, &[0]).unwrap(), Verdict::Uncovered(vec![1]));
        assert_eq!(guard_reach_sets(&g), vec![vec![0]]);
    }
}
