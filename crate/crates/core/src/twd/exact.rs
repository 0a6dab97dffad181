use std::collections::HashMap;

use super::Graph;

/// Largest graph the exact solver accepts.
pub const EXACT_LIMIT: usize = 30;

/// Exact treewidth by dynamic programming over eliminated vertex sets.
/// Returns `None` for graphs above [`EXACT_LIMIT`] vertices.
pub fn exact_treewidth(g: &Graph) -> Option<usize> {
    let n = g.num_vertices();
    if n > EXACT_LIMIT {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo = HashMap::new();
    Some(solve(&adj, full, 0, usize::MAX, &mut memo))
}

/// Vertices outside `s` reachable from `v` through paths whose interior lies in `s`.
fn q_size(adj: &[u32], s: u32, v: usize) -> usize {
    let mut visited = 1u32 << v;
    let mut stack = vec![v];
    let mut out = 0u32;
    while let Some(a) = stack.pop() {
        let mut nb = adj[a] & !visited;
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            visited |= 1 << w;
            if s & (1 << w) != 0 {
                stack.push(w);
            } else {
                out |= 1 << w;
            }
        }
    }
    out.count_ones() as usize
}

/// Minimum over orderings of the remaining vertices of the maximum
/// elimination degree. Results at or above `bound` are only lower bounds.
fn solve(adj: &[u32], full: u32, s: u32, bound: usize, memo: &mut HashMap<u32, usize>) -> usize {
    let remaining = (full & !s).count_ones() as usize;
    if remaining <= 1 {
        return 0;
    }
    if let Some(&r) = memo.get(&s) {
        return r;
    }
    let mut best = remaining - 1;
    let mut rest = full & !s;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let q = q_size(adj, s, v);
        if q >= best || q >= bound {
            continue;
        }
        let sub = solve(adj, full, s | 1 << v, best.min(bound), memo);
        best = best.min(q.max(sub));
    }
    if best < bound {
        memo.insert(s, best);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_families() {
        assert_eq!(exact_treewidth(&Graph::path(6)), Some(1));
        assert_eq!(exact_treewidth(&Graph::cycle(7)), Some(2));
        let k5 = Graph::from_edges(5, (0..5).flat_map(|a| (0..5).map(move |b| (a, b))));
        assert_eq!(exact_treewidth(&k5), Some(4));
        assert_eq!(exact_treewidth(&Graph::grid(4, 4)), Some(4));
        assert_eq!(exact_treewidth(&Graph::from_edges(3, [])), Some(0));
        assert_eq!(exact_treewidth(&Graph::path(31)), None);
    }
}
