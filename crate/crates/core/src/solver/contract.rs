//! Collapsing strongly connected components of weight-0 arcs.
//!
//! All vertices of such a component are reached together and share every
//! distance, so merging them changes no reach set. Afterwards the weight-0
//! arcs form a DAG, which keeps the DP out of its block-partition mode.

use rustc_hash::FxHashMap;

use crate::models::GuardGraph;

/// Graph with weight-0 cycles collapsed and the vertex map into it, or
/// `None` when there is nothing to collapse. Without a bound every arc counts
/// as weight 0. Sources and sinks keep their order.
pub fn contract_zero_cycles(g: &GuardGraph) -> Option<(GuardGraph, Vec<usize>)> {
    let n = g.num_vertices();
    let zero = |w: u32| g.bound().is_none() || w == 0;
    let comp = zero_sccs(n, |v| g.out_arcs(v).iter().filter(|a| zero(a.1)).map(|a| a.0));
    let count = comp.iter().copied().max().map_or(0, |c| c + 1);
    if count == n {
        return None;
    }
    let mut best: FxHashMap<(usize, usize), u32> = FxHashMap::default();
    for (a, b, w) in g.arcs() {
        let (ca, cb) = (comp[a], comp[b]);
        if ca != cb {
            let e = best.entry((ca, cb)).or_insert(w);
            *e = (*e).min(w);
        }
    }
    let mut arcs: Vec<_> = best.into_iter().collect();
    arcs.sort_unstable();
    let mut out = vec![Vec::new(); count];
    for ((a, b), w) in arcs {
        out[a].push((b, w));
    }
    let sources = g.sources().iter().map(|&s| comp[s]).collect();
    let sinks = g.sinks().iter().map(|&t| comp[t]).collect();
    Some((GuardGraph::from_parts(out, sources, sinks, g.bound()), comp))
}

/// Iterative Tarjan; components are numbered in order of discovery of their
/// lowest-indexed vertex.
fn zero_sccs<I: Iterator<Item = usize>>(n: usize, succ: impl Fn(usize) -> I) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut raw = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root).collect(), 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some((v, succs, i)) = call.last_mut() {
            let v = *v;
            if let Some(&w) = succs.get(*i) {
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, succ(w).collect(), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some((p, _, _)) = call.last() {
                low[*p] = low[*p].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = raw;
                    if w == v {
                        break;
                    }
                }
                raw += 1;
            }
        }
    }
    // renumber by smallest member
    let mut first = vec![UNSEEN; raw];
    let mut order = 0;
    for v in 0..n {
        if first[comp[v]] == UNSEEN {
            first[comp[v]] = order;
            order += 1;
        }
    }
    comp.iter().map(|&c| first[c]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapses_two_cycle() {
        let mut g = GuardGraph::new(3, Some(1));
        g.add_arc(0, 1, 0);
        g.add_arc(1, 0, 0);
        g.add_arc(1, 2, 1);
        g.add_arc(2, 1, 1);
        g.add_source([0]);
        g.add_sink([2]);
        let (h, map) = contract_zero_cycles(&g).unwrap();
        assert_eq!(map, vec![0, 0, 1, 2, 3]);
        assert_eq!(h.num_vertices(), 4);
        assert_eq!(h.out_arcs(0), &[(1, 1)]);
        assert_eq!(h.sources(), &[2]);
        assert_eq!(h.sinks(), &[3]);
    }

    #[test]
    fn acyclic_is_untouched() {
        let mut g = GuardGraph::new(2, None);
        g.add_arc(0, 1, 0);
        assert!(contract_zero_cycles(&g).is_none());
    }
}
