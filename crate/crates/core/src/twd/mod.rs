//! Tree decompositions: heuristic construction, validation, transfer to the
//! 1-refinement and normalization into nice form.

mod exact;
mod nice;
mod pace;

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::pixelate::{Level, Pixelation};

pub use exact::exact_treewidth;
pub use nice::{make_nice, NiceDecomposition, NiceNode};
pub use pace::{read_gr, read_td, write_gr, write_td, PaceError};

/// Simple undirected graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, dropping self-loops and parallel edges.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Graph {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Graph { adj }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, a)| a.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn grid(w: usize, h: usize) -> Graph {
        let id = |x: usize, y: usize| y * w + x;
        let mut edges = Vec::new();
        for y in 0..h {
            for x in 0..w {
                if x + 1 < w {
                    edges.push((id(x, y), id(x + 1, y)));
                }
                if y + 1 < h {
                    edges.push((id(x, y), id(x, y + 1)));
                }
            }
        }
        Graph::from_edges(w * h, edges)
    }
}

/// A tree of bags. Tree edges are kept in insertion order so that PACE files
/// round-trip exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    num_graph_vertices: usize,
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(num_graph_vertices: usize, bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        TreeDecomposition { num_graph_vertices, bags, tree_edges }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn num_graph_vertices(&self) -> usize {
        self.num_graph_vertices
    }

    /// Maximum bag size minus one; `-1` style empty decompositions report 0.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heuristic {
    MinFill,
    MinDegree,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Violation {
    #[error("decomposition tree is not a tree")]
    NotATree,
    #[error("bag refers to unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("vertex {0} is in no bag")]
    VertexMissing(usize),
    #[error("edge {0}-{1} is not covered by any bag")]
    EdgeUncovered(usize, usize),
    #[error("bags containing vertex {0} are not connected")]
    SubtreeDisconnected(usize),
}

/// Checks the tree-decomposition axioms and reports the first violation.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> Result<(), Violation> {
    let nb = td.bags.len();
    if nb == 0 {
        return if g.num_vertices() == 0 { Ok(()) } else { Err(Violation::VertexMissing(0)) };
    }
    let tadj = td.tree_adjacency();
    if td.tree_edges.len() + 1 != nb || td.tree_edges.iter().any(|&(a, b)| a >= nb || b >= nb) {
        return Err(Violation::NotATree);
    }
    if bfs_reach(&tadj, 0, |_| true).iter().filter(|&&r| r).count() != nb {
        return Err(Violation::NotATree);
    }
    let n = g.num_vertices();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Violation::UnknownVertex(v));
            }
            holders[v].push(i);
        }
    }
    if let Some(v) = (0..n).find(|&v| holders[v].is_empty()) {
        return Err(Violation::VertexMissing(v));
    }
    let sorted_bags: Vec<Vec<usize>> = td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    for (u, v) in g.edges() {
        let covered = holders[u].iter().any(|&i| sorted_bags[i].binary_search(&v).is_ok());
        if !covered {
            return Err(Violation::EdgeUncovered(u, v));
        }
    }
    let mut mark = vec![false; nb];
    for (v, held) in holders.iter().enumerate() {
        for &i in held {
            mark[i] = true;
        }
        let seen = bfs_reach(&tadj, held[0], |i| mark[i]);
        let connected = held.iter().all(|&i| seen[i]);
        for &i in held {
            mark[i] = false;
        }
        if !connected {
            return Err(Violation::SubtreeDisconnected(v));
        }
    }
    Ok(())
}

fn bfs_reach(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if !seen[b] && allowed(b) {
                seen[b] = true;
                queue.push_back(b);
            }
        }
    }
    seen
}

/// Greedy elimination ordering. Ties break on degree (min-fill) and then on
/// the lowest vertex id, so the result is deterministic.
pub fn elimination_order(g: &Graph, heuristic: Heuristic) -> Vec<usize> {
    let n = g.num_vertices();
    let mut adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let fill_of = |adj: &[Vec<usize>], v: usize| -> usize {
        let nb = &adj[v];
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if adj[a].binary_search(&b).is_err() {
                    missing += 1;
                }
            }
        }
        missing
    };
    let key = |adj: &[Vec<usize>], v: usize| -> (usize, usize, usize) {
        match heuristic {
            Heuristic::MinFill => (fill_of(adj, v), adj[v].len(), v),
            Heuristic::MinDegree => (adj[v].len(), 0, v),
        }
    };
    let mut keys: Vec<(usize, usize, usize)> = (0..n).map(|v| key(&adj, v)).collect();
    let mut queue: BTreeSet<(usize, usize, usize)> = keys.iter().copied().collect();
    let mut eliminated = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some(k) = queue.pop_first() {
        let v = k.2;
        eliminated[v] = true;
        order.push(v);
        let nb = std::mem::take(&mut adj[v]);
        for &a in &nb {
            if let Ok(pos) = adj[a].binary_search(&v) {
                adj[a].remove(pos);
            }
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if let Err(pos) = adj[a].binary_search(&b) {
                    adj[a].insert(pos, b);
                    let pb = adj[b].binary_search(&a).unwrap_err();
                    adj[b].insert(pb, a);
                }
            }
        }
        let mut touched: Vec<usize> = nb.clone();
        if heuristic == Heuristic::MinFill {
            for &a in &nb {
                touched.extend(adj[a].iter().copied());
            }
            touched.sort_unstable();
            touched.dedup();
        }
        for w in touched {
            if eliminated[w] {
                continue;
            }
            let nk = key(&adj, w);
            if nk != keys[w] {
                queue.remove(&keys[w]);
                keys[w] = nk;
                queue.insert(nk);
            }
        }
    }
    order
}

/// Tree decomposition from an elimination ordering.
pub fn decomposition_from_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.num_vertices();
    if n == 0 {
        return TreeDecomposition::new(0, vec![Vec::new()], Vec::new());
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&w| pos[w] > i).collect();
        for (a_i, &a) in later.iter().enumerate() {
            for &b in &later[a_i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        if let Some(&p) = later.iter().min_by_key(|&&w| pos[w]) {
            parent[i] = pos[p];
        }
        let mut bag = later;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    // link the roots of separate components into one tree
    let roots: Vec<usize> = (0..n).filter(|&i| parent[i] == usize::MAX).collect();
    for w in roots.windows(2) {
        parent[w[0]] = w[1];
    }
    compact(n, bags, parent)
}

/// Contracts tree edges whose child bag is contained in its parent's bag or
/// vice versa.
fn compact(n: usize, bags: Vec<Vec<usize>>, parent: Vec<usize>) -> TreeDecomposition {
    let m = bags.len();
    // rep[i]: bag that node i was merged into
    let mut rep: Vec<usize> = (0..m).collect();
    let mut bag_of: Vec<Vec<usize>> = bags;
    fn find(rep: &mut [usize], mut x: usize) -> usize {
        while rep[x] != x {
            rep[x] = rep[rep[x]];
            x = rep[x];
        }
        x
    }
    // nodes are in elimination order so parents come later
    for (i, &par) in parent.iter().enumerate() {
        if par == usize::MAX {
            continue;
        }
        let c = find(&mut rep, i);
        let p = find(&mut rep, par);
        let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.binary_search(x).is_ok());
        if subset(&bag_of[c], &bag_of[p]) {
            rep[c] = p;
        } else if subset(&bag_of[p], &bag_of[c]) {
            let moved = std::mem::take(&mut bag_of[c]);
            bag_of[p] = moved;
            rep[c] = p;
        }
    }
    let mut new_id = vec![usize::MAX; m];
    let mut out_bags = Vec::new();
    for i in 0..m {
        if find(&mut rep, i) == i {
            new_id[i] = out_bags.len();
            out_bags.push(std::mem::take(&mut bag_of[i]));
        }
    }
    let mut edges = Vec::new();
    for i in 0..m {
        if parent[i] == usize::MAX || find(&mut rep, i) != i {
            continue;
        }
        let p = find(&mut rep, parent[i]);
        edges.push((new_id[i], new_id[p]));
    }
    TreeDecomposition::new(n, out_bags, edges)
}

/// Heuristic tree decomposition.
pub fn decompose(g: &Graph, heuristic: Heuristic) -> TreeDecomposition {
    let order = elimination_order(g, heuristic);
    decomposition_from_order(g, &order)
}

/// Transfers a decomposition of the standard pixelation graph to its
/// 1-refinement: every bag vertex is joined by the refinement vertices it
/// shares a refined pixel with.
pub fn refine_decomposition(td: &TreeDecomposition, standard: &Pixelation, refined: &Pixelation) -> TreeDecomposition {
    assert_eq!(standard.level(), Level::Standard);
    assert_eq!(refined.level(), Level::Refined);
    let mut around: Vec<Vec<usize>> = vec![Vec::new(); refined.num_vertices()];
    for px in refined.pixels() {
        for &c in &px.corners {
            around[c].extend(px.corners.iter().copied());
        }
    }
    let map: Vec<usize> = (0..standard.num_vertices())
        .map(|v| refined.vertex_at(standard.pos(v)).expect("standard vertex survives refinement"))
        .collect();
    let bags = td
        .bags()
        .iter()
        .map(|bag| {
            let mut out: Vec<usize> = Vec::new();
            for &v in bag {
                out.extend(around[map[v]].iter().copied());
                out.push(map[v]);
            }
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    TreeDecomposition::new(refined.num_vertices(), bags, td.tree_edges().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fixtures::*;
    use crate::pixelate::standard_pixelation;
    use proptest::prelude::*;

    #[test]
    fn path_cycle_grid_widths() {
        for h in [Heuristic::MinFill, Heuristic::MinDegree] {
            let p = Graph::path(5);
            let td = decompose(&p, h);
            validate_decomposition(&p, &td).unwrap();
            assert_eq!(td.width(), 1);
            let c = standard_pixelation(&unit_square()).graph();
            let td = decompose(&c, h);
            validate_decomposition(&c, &td).unwrap();
            assert_eq!(td.width(), 2);
        }
        let g = Graph::grid(3, 3);
        let td = decompose(&g, Heuristic::MinFill);
        validate_decomposition(&g, &td).unwrap();
        assert_eq!(td.width(), 3);
        assert_eq!(exact_treewidth(&g), Some(3));
        assert_eq!(exact_treewidth(&Graph::cycle(4)), Some(2));
    }

    #[test]
    fn validator_violations() {
        let c4 = Graph::cycle(4);
        let td = TreeDecomposition::new(4, vec![vec![0, 1], vec![2, 3]], vec![(0, 1)]);
        assert_eq!(validate_decomposition(&c4, &td), Err(Violation::EdgeUncovered(0, 3)));
        let k3 = Graph::cycle(3);
        let td = TreeDecomposition::new(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]], vec![(0, 1), (1, 2)]);
        assert_eq!(validate_decomposition(&k3, &td), Err(Violation::SubtreeDisconnected(0)));
        let td = TreeDecomposition::new(3, vec![vec![0, 1]], vec![]);
        assert_eq!(validate_decomposition(&k3, &td), Err(Violation::VertexMissing(2)));
        let td = TreeDecomposition::new(3, vec![vec![0, 1, 2], vec![0]], vec![]);
        assert_eq!(validate_decomposition(&k3, &td), Err(Violation::NotATree));
    }

    #[test]
    fn disconnected_graph_still_decomposes() {
        let g = Graph::from_edges(5, [(0, 1), (2, 3)]);
        let td = decompose(&g, Heuristic::MinFill);
        validate_decomposition(&g, &td).unwrap();
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn refinement_transfer() {
        for poly in [unit_square(), l_shape(), square_with_hole()] {
            let std_px = standard_pixelation(&poly);
            let td = decompose(&std_px.graph(), Heuristic::MinFill);
            let refined = std_px.one_refinement().unwrap();
            let rtd = refine_decomposition(&td, &std_px, &refined);
            validate_decomposition(&refined.graph(), &rtd).unwrap();
            assert!(rtd.width() < 9 * (td.width() + 1));
        }
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (2usize..10).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(n * 2)).prop_map(move |es| Graph::from_edges(n, es))
        })
    }

    proptest! {
        #[test]
        fn heuristic_width_bounds_exact(g in arb_graph()) {
            let tw = exact_treewidth(&g).unwrap();
            for h in [Heuristic::MinFill, Heuristic::MinDegree] {
                let td = decompose(&g, h);
                prop_assert!(validate_decomposition(&g, &td).is_ok());
                prop_assert!(td.width() >= tw);
            }
        }
    }
}
