//! Exact and greedy set cover over guard reach sets.

use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::models::GuardGraph;

use super::{guard_reach_sets, witness_paths, CoverSolution, SolveError, Stats, Status};

/// Largest guards × watch-points matrix the exact oracle accepts.
pub const ORACLE_CELL_CAP: u64 = 50_000_000;

type Bits = Vec<u64>;

fn to_bits(items: &[usize], words: usize) -> Bits {
    let mut b = vec![0u64; words];
    for &i in items {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

fn count(b: &[u64]) -> u32 {
    b.iter().map(|w| w.count_ones()).sum()
}

fn and_count(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

struct Search<'a> {
    sets: &'a [Bits],
    ids: Vec<usize>,
    covering: Vec<Vec<usize>>,
    best: Vec<usize>,
    memo: FxHashMap<Bits, usize>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, uncovered: &mut Bits, chosen: &mut Vec<usize>) {
        self.nodes += 1;
        let left = count(uncovered);
        if left == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let max_gain = self.ids.iter().map(|&s| and_count(&self.sets[s], uncovered)).max().unwrap_or(0);
        if max_gain == 0 {
            return;
        }
        let lower = chosen.len() + left.div_ceil(max_gain) as usize;
        if lower >= self.best.len() {
            return;
        }
        match self.memo.get(uncovered) {
            Some(&d) if d <= chosen.len() => return,
            _ => {
                self.memo.insert(uncovered.clone(), chosen.len());
            }
        }
        // branch on the uncovered element with the fewest covering sets
        let mut pick = None;
        for (w, &word) in uncovered.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let e = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let c = self.covering[e].len();
                if pick.is_none_or(|(_, pc)| c < pc) {
                    pick = Some((e, c));
                }
            }
        }
        let (e, _) = pick.expect("uncovered element exists");
        let mut options: Vec<(u32, usize)> =
            self.covering[e].iter().map(|&s| (and_count(&self.sets[s], uncovered), s)).collect();
        options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, s) in options {
            let saved = uncovered.clone();
            for (u, x) in uncovered.iter_mut().zip(&self.sets[s]) {
                *u &= !x;
            }
            chosen.push(s);
            self.run(uncovered, chosen);
            chosen.pop();
            *uncovered = saved;
        }
    }
}

fn greedy_pick(sets: &[Bits], universe: &Bits) -> Option<Vec<usize>> {
    let mut uncovered = universe.clone();
    let mut chosen = Vec::new();
    while count(&uncovered) > 0 {
        let (gain, best) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (and_count(s, &uncovered), i))
            .fold((0, usize::MAX), |acc, x| if x.0 > acc.0 { x } else { acc });
        if gain == 0 {
            return None;
        }
        for (u, x) in uncovered.iter_mut().zip(&sets[best]) {
            *u &= !x;
        }
        chosen.push(best);
    }
    Some(chosen)
}

/// Minimum number of sets covering `0..universe`, or `None` if impossible.
/// Returned indices are ascending.
pub fn min_set_cover(sets: &[Vec<usize>], universe: usize) -> Option<Vec<usize>> {
    let words = universe.div_ceil(64).max(1);
    let bits: Vec<Bits> = sets.iter().map(|s| to_bits(s, words)).collect();
    let all = to_bits(&(0..universe).collect::<Vec<_>>(), words);
    let mut union = vec![0u64; words];
    for b in &bits {
        for (u, x) in union.iter_mut().zip(b) {
            *u |= x;
        }
    }
    if union != all {
        return None;
    }
    // drop sets contained in another set (keeping the lowest id among equals)
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(count(&bits[i])), i));
    let mut kept: Vec<usize> = Vec::new();
    for &i in &order {
        if count(&bits[i]) > 0 && !kept.iter().any(|&k| subset(&bits[i], &bits[k])) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    let mut covering = vec![Vec::new(); universe];
    for &s in &kept {
        for &e in &sets[s] {
            covering[e].push(s);
        }
    }
    let upper = greedy_pick(&bits, &all).expect("union covers universe");
    let mut search = Search {
        sets: &bits,
        ids: kept,
        covering,
        best: upper,
        memo: FxHashMap::default(),
        nodes: 0,
    };
    let mut uncovered = all;
    search.run(&mut uncovered, &mut Vec::new());
    let mut best = search.best;
    best.sort_unstable();
    Some(best)
}

/// Exact solver: reach sets by search from every guard, then exact set cover.
pub fn solve_oracle(g: &GuardGraph) -> Result<CoverSolution, SolveError> {
    let start = Instant::now();
    let cells = g.sources().len() as u64 * g.sinks().len() as u64;
    if cells > ORACLE_CELL_CAP {
        return Err(SolveError::InstanceTooLarge(cells));
    }
    let reach = guard_reach_sets(g);
    let stats = |start: Instant| Stats { millis: start.elapsed().as_secs_f64() * 1e3, ..Stats::default() };
    match min_set_cover(&reach, g.sinks().len()) {
        None => Ok(CoverSolution::infeasible(g, stats(start))),
        Some(guards) => Ok(CoverSolution {
            status: Status::Optimal,
            cardinality: guards.len(),
            witness: witness_paths(g, &guards),
            guards,
            unreachable: vec![],
            stats: stats(start),
        }),
    }
}

/// Greedy cover: repeatedly takes the guard covering the most uncovered
/// watch points, lowest id on ties.
pub fn greedy_cover(g: &GuardGraph) -> CoverSolution {
    let start = Instant::now();
    let reach = guard_reach_sets(g);
    let words = g.sinks().len().div_ceil(64).max(1);
    let bits: Vec<Bits> = reach.iter().map(|s| to_bits(s, words)).collect();
    let all = to_bits(&(0..g.sinks().len()).collect::<Vec<_>>(), words);
    let stats = Stats { millis: start.elapsed().as_secs_f64() * 1e3, ..Stats::default() };
    match greedy_pick(&bits, &all) {
        None => CoverSolution::infeasible(g, stats),
        Some(mut guards) => {
            guards.sort_unstable();
            CoverSolution {
                status: Status::Approximate,
                cardinality: guards.len(),
                witness: witness_paths(g, &guards),
                guards,
                unreachable: vec![],
                stats,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_cover_examples() {
        assert_eq!(min_set_cover(&[vec![0, 1, 2]], 3), Some(vec![0]));
        assert_eq!(min_set_cover(&[vec![0], vec![1]], 2), Some(vec![0, 1]));
        let sets = [vec![0, 1], vec![2, 3], vec![0, 2]];
        assert_eq!(min_set_cover(&sets, 4).map(|s| s.len()), Some(2));
        assert_eq!(min_set_cover(&[vec![0]], 2), None);
        assert_eq!(min_set_cover(&[], 0), Some(vec![]));
        // greedy's first pick {0..3} is a trap: optimum uses the two halves
        let sets = [vec![0, 1, 2, 3], vec![0, 2, 4, 6], vec![1, 3, 5, 7], vec![4, 5]];
        assert_eq!(min_set_cover(&sets, 8), Some(vec![1, 2]));
    }
}
