//! Set-cover reductions applied before the DP on wide graphs.
//!
//! A watch point whose covering guards include all guards of another watch
//! point is covered whenever that one is; a guard whose reach set lies inside
//! another guard's can be swapped for it. Neither changes the optimum. After
//! the reductions, vertices on no source-to-sink path within the bound are
//! removed. Dropping them shortens no such path, so coverage is unchanged.
//!
//! With `paths_only`, the arcs are further cut down to one shortest path
//! per (guard, watch point) pair the guard covers, which again preserves
//! every coverage relation.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::models::GuardGraph;

use super::guard_reach_sets;

type Bits = Vec<u64>;

fn bits(items: impl IntoIterator<Item = usize>, words: usize) -> Bits {
    let mut b = vec![0u64; words];
    for i in items {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

fn subset(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn ones(a: &Bits) -> u32 {
    a.iter().map(|x| x.count_ones()).sum()
}

/// Keeps the items whose set is not dominated by a kept one. `smaller_wins`
/// keeps minimal sets (watch points), otherwise maximal ones (guards).
fn undominated(sets: &[Bits], alive: &[bool], smaller_wins: bool) -> Vec<bool> {
    let mut order: Vec<usize> = (0..sets.len()).filter(|&i| alive[i]).collect();
    if smaller_wins {
        order.sort_by_key(|&i| (ones(&sets[i]), i));
    } else {
        order.sort_by_key(|&i| (Reverse(ones(&sets[i])), i));
    }
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let dominated = kept.iter().any(|&k| if smaller_wins { subset(&sets[k], &sets[i]) } else { subset(&sets[i], &sets[k]) });
        if !dominated {
            kept.push(i);
        }
    }
    let mut out = vec![false; sets.len()];
    for k in kept {
        out[k] = true;
    }
    out
}

/// Minimum distance from any start vertex along arcs (or reversed arcs),
/// within the bound when there is one.
fn multi_source(adj: &[Vec<(usize, u32)>], starts: &[usize], bound: Option<u32>) -> Vec<Option<u32>> {
    let mut dist: Vec<Option<u32>> = vec![None; adj.len()];
    match bound {
        None => {
            let mut queue = VecDeque::new();
            for &s in starts {
                if dist[s].is_none() {
                    dist[s] = Some(0);
                    queue.push_back(s);
                }
            }
            while let Some(a) = queue.pop_front() {
                for &(b, _) in &adj[a] {
                    if dist[b].is_none() {
                        dist[b] = Some(0);
                        queue.push_back(b);
                    }
                }
            }
        }
        Some(w) => {
            let mut heap: BinaryHeap<Reverse<(u32, usize)>> = starts.iter().map(|&s| Reverse((0, s))).collect();
            while let Some(Reverse((c, a))) = heap.pop() {
                if dist[a].is_some() {
                    continue;
                }
                dist[a] = Some(c);
                for &(b, wt) in &adj[a] {
                    if dist[b].is_none() && c + wt <= w {
                        heap.push(Reverse((c + wt, b)));
                    }
                }
            }
        }
    }
    dist
}

/// Reduced graph and, for each of its guards, the original guard id.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub graph: GuardGraph,
    pub guards: Vec<usize>,
}

/// Shortest-path tree from `s` within the bound: parent of every reached
/// vertex. Ties go to the smaller predecessor id.
fn path_tree(adj: &[Vec<(usize, u32)>], s: usize, bound: Option<u32>) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut dist = vec![u32::MAX; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let limit = bound.unwrap_or(0);
    let weight = |w: u32| if bound.is_some() { w } else { 0 };
    let mut heap = BinaryHeap::from([Reverse((0u32, s))]);
    dist[s] = 0;
    while let Some(Reverse((c, a))) = heap.pop() {
        if done[a] {
            continue;
        }
        done[a] = true;
        for &(b, w) in &adj[a] {
            let nc = c + weight(w);
            if nc <= limit && !done[b] && (nc < dist[b] || (nc == dist[b] && parent[b].is_some_and(|p| a < p))) {
                dist[b] = nc;
                parent[b] = Some(a);
                heap.push(Reverse((nc, b)));
            }
        }
    }
    parent
}

/// Applies the reductions. Returns `None` when some watch point is
/// unreachable, since the instance is then infeasible as given.
pub fn kernelize(g: &GuardGraph, paths_only: bool) -> Option<Kernel> {
    let (ns, nt) = (g.sources().len(), g.sinks().len());
    let reach = guard_reach_sets(g);
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); nt];
    for (i, r) in reach.iter().enumerate() {
        for &t in r {
            covering[t].push(i);
        }
    }
    if covering.iter().any(Vec::is_empty) {
        return None;
    }
    let (sw, tw) = (ns.div_ceil(64).max(1), nt.div_ceil(64).max(1));
    let mut guard_alive = vec![true; ns];
    let mut watch_alive = vec![true; nt];
    loop {
        let by_watch: Vec<Bits> =
            covering.iter().map(|c| bits(c.iter().copied().filter(|&i| guard_alive[i]), sw)).collect();
        let watch_next = undominated(&by_watch, &watch_alive, true);
        let by_guard: Vec<Bits> = reach.iter().map(|r| bits(r.iter().copied().filter(|&t| watch_next[t]), tw)).collect();
        let guard_next = undominated(&by_guard, &guard_alive, false);
        let stable = watch_next == watch_alive && guard_next == guard_alive;
        watch_alive = watch_next;
        guard_alive = guard_next;
        if stable {
            break;
        }
    }
    for (alive, r) in guard_alive.iter_mut().zip(&reach) {
        *alive &= r.iter().any(|&t| watch_alive[t]);
    }

    let n = g.num_vertices();
    let kept_sources: Vec<usize> = (0..ns).filter(|&i| guard_alive[i]).map(|i| g.sources()[i]).collect();
    let kept_sinks: Vec<usize> = (0..nt).filter(|&t| watch_alive[t]).map(|t| g.sinks()[t]).collect();
    let mut is_source = vec![false; n];
    let mut is_sink = vec![false; n];
    for &s in g.sources() {
        is_source[s] = true;
    }
    for &t in g.sinks() {
        is_sink[t] = true;
    }
    for &s in &kept_sources {
        is_source[s] = false;
    }
    for &t in &kept_sinks {
        is_sink[t] = false;
    }
    // dropped source and sink vertices leave the graph with their arcs
    let dropped = |v: usize| is_source[v] || is_sink[v];
    let mut fwd: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    let mut bwd: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for (a, b, w) in g.arcs() {
        if !dropped(a) && !dropped(b) {
            fwd[a].push((b, w));
            bwd[b].push((a, w));
        }
    }
    if paths_only {
        let mut arcs: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
        for &s in &kept_sources {
            let parent = path_tree(&fwd, s, g.bound());
            let mut walked = vec![false; n];
            for &t in &kept_sinks {
                let mut v = t;
                while let (Some(p), false) = (parent[v], walked[v]) {
                    walked[v] = true;
                    let w = fwd[p].iter().filter(|a| a.0 == v).map(|a| a.1).min().expect("tree arc exists");
                    if !arcs[p].contains(&(v, w)) {
                        arcs[p].push((v, w));
                    }
                    v = p;
                }
            }
        }
        bwd = vec![Vec::new(); n];
        for (a, out) in arcs.iter().enumerate() {
            for &(b, w) in out {
                bwd[b].push((a, w));
            }
        }
        fwd = arcs;
    }
    let from = multi_source(&fwd, &kept_sources, g.bound());
    let to = multi_source(&bwd, &kept_sinks, g.bound());
    let keep: Vec<bool> = (0..n)
        .map(|v| match (from[v], to[v], g.bound()) {
            (Some(a), Some(b), Some(w)) => a + b <= w,
            (Some(_), Some(_), None) => true,
            _ => false,
        })
        .collect();
    let mut id = vec![usize::MAX; n];
    let mut next = 0;
    for v in 0..n {
        if keep[v] {
            id[v] = next;
            next += 1;
        }
    }
    let mut out = vec![Vec::new(); next];
    for (a, arcs) in fwd.iter().enumerate() {
        if keep[a] {
            out[id[a]] = arcs.iter().filter(|(b, _)| keep[*b]).map(|&(b, w)| (id[b], w)).collect();
        }
    }
    let graph = GuardGraph::from_parts(
        out,
        kept_sources.iter().map(|&s| id[s]).collect(),
        kept_sinks.iter().map(|&t| id[t]).collect(),
        g.bound(),
    );
    Some(Kernel { graph, guards: (0..ns).filter(|&i| guard_alive[i]).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{solve_oracle, tests::toy};

    #[test]
    fn keeps_the_optimum() {
        let g = toy();
        let k = kernelize(&g, false).unwrap();
        assert!(k.graph.sources().len() <= g.sources().len());
        assert_eq!(solve_oracle(&k.graph).unwrap().cardinality, solve_oracle(&g).unwrap().cardinality);
    }

    #[test]
    fn dominated_guard_and_watch_point_go() {
        // guard 0 reaches {a}, guard 1 reaches {a, b}; watch b implies a
        let mut g = GuardGraph::new(3, None);
        g.add_arc(2, 0, 0);
        g.add_arc(2, 1, 0);
        g.add_source([0]);
        g.add_source([2]);
        g.add_sink([0]);
        g.add_sink([1]);
        let k = kernelize(&g, false).unwrap();
        assert_eq!(k.guards, vec![1]);
        assert_eq!(k.graph.sinks().len(), 1);
        assert_eq!(solve_oracle(&k.graph).unwrap().cardinality, 1);
    }

    #[test]
    fn path_union_keeps_coverage() {
        use proptest::prelude::*;
        use proptest::test_runner::TestRunner;
        let mut runner = TestRunner::new(ProptestConfig::with_cases(200));
        let arcs = proptest::collection::vec((0usize..8, 0usize..8, 0u32..3), 0..20);
        let ends = proptest::collection::vec(0usize..8, 1..5);
        runner
            .run(&(arcs, ends.clone(), ends, proptest::option::of(0u32..4)), |(arcs, srcs, snks, bound)| {
                let mut g = GuardGraph::new(8, bound);
                for (a, b, w) in arcs {
                    g.add_arc(a, b, w);
                }
                for s in srcs {
                    g.add_source([s]);
                }
                for t in snks {
                    g.add_sink([t]);
                }
                let expect = solve_oracle(&g).unwrap();
                for paths in [false, true] {
                    match kernelize(&g, paths) {
                        None => prop_assert_eq!(expect.status, crate::solver::Status::Infeasible),
                        Some(k) => prop_assert_eq!(solve_oracle(&k.graph).unwrap().cardinality, expect.cardinality),
                    }
                }
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn unreachable_watch_point() {
        let mut g = GuardGraph::new(2, None);
        g.add_source([0]);
        g.add_sink([1]);
        assert!(kernelize(&g, false).is_none());
    }
}
