use std::collections::{HashSet, VecDeque};

use super::{Graph, TreeDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceNode {
    Leaf,
    Introduce(usize),
    IntroduceEdge(usize, usize),
    Forget(usize),
    Join,
}

/// Nice tree decomposition with an empty root and empty leaves. Nodes are
/// stored so that every child precedes its parent; the root is the last node.
#[derive(Debug, Clone)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
    pub children: Vec<Vec<usize>>,
    pub bags: Vec<Vec<usize>>,
    pub root: usize,
}

impl NiceDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Plain tree decomposition view, for validation.
    pub fn to_tree_decomposition(&self, num_graph_vertices: usize) -> TreeDecomposition {
        let mut edges = Vec::new();
        for (p, ch) in self.children.iter().enumerate() {
            for &c in ch {
                edges.push((c, p));
            }
        }
        TreeDecomposition::new(num_graph_vertices, self.bags.clone(), edges)
    }

    /// Structural check of the node kinds against their bags.
    pub fn check(&self) -> Result<(), String> {
        if !self.bags[self.root].is_empty() {
            return Err("root bag not empty".into());
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let ch = &self.children[i];
            let bag = &self.bags[i];
            let ok = match *node {
                NiceNode::Leaf => ch.is_empty() && bag.is_empty(),
                NiceNode::Introduce(v) => {
                    ch.len() == 1 && bag.contains(&v) && without(bag, v) == self.bags[ch[0]]
                }
                NiceNode::Forget(v) => {
                    ch.len() == 1 && !bag.contains(&v) && without(&self.bags[ch[0]], v) == *bag
                }
                NiceNode::IntroduceEdge(u, v) => {
                    ch.len() == 1 && bag.contains(&u) && bag.contains(&v) && self.bags[ch[0]] == *bag
                }
                NiceNode::Join => {
                    ch.len() == 2 && self.bags[ch[0]] == *bag && self.bags[ch[1]] == *bag
                }
            };
            if !ok {
                return Err(format!("node {i} ({node:?}) malformed"));
            }
            if ch.iter().any(|&c| c >= i) {
                return Err(format!("node {i} precedes a child"));
            }
        }
        Ok(())
    }
}

fn without(bag: &[usize], v: usize) -> Vec<usize> {
    bag.iter().copied().filter(|&x| x != v).collect()
}

struct Builder {
    nodes: Vec<NiceNode>,
    children: Vec<Vec<usize>>,
    bags: Vec<Vec<usize>>,
}

impl Builder {
    fn push(&mut self, node: NiceNode, children: Vec<usize>, bag: Vec<usize>) -> usize {
        self.nodes.push(node);
        self.children.push(children);
        self.bags.push(bag);
        self.nodes.len() - 1
    }
}

/// Converts a decomposition into nice form. Each graph edge gets exactly one
/// introduce-edge node, placed right after the first introduce node whose bag
/// holds both endpoints (or before a forget, if that comes first).
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> NiceDecomposition {
    let mut b = Builder { nodes: Vec::new(), children: Vec::new(), bags: Vec::new() };
    let mut introduced: HashSet<(usize, usize)> = HashSet::new();
    let tadj = td.tree_adjacency();
    let nb = td.bags().len();
    let sorted: Vec<Vec<usize>> = td
        .bags()
        .iter()
        .map(|bag| {
            let mut s = bag.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();

    // BFS order from bag 0; process deepest first.
    let mut order = Vec::with_capacity(nb);
    let mut parent = vec![usize::MAX; nb];
    let mut seen = vec![false; nb];
    if nb > 0 {
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(a) = queue.pop_front() {
            order.push(a);
            for &c in &tadj[a] {
                if !seen[c] {
                    seen[c] = true;
                    parent[c] = a;
                    queue.push_back(c);
                }
            }
        }
    }
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for &a in &order {
        if parent[a] != usize::MAX {
            kids[parent[a]].push(a);
        }
    }

    // result[t]: nice node whose bag equals bag t
    let mut result = vec![usize::MAX; nb];
    for &t in order.iter().rev() {
        let target = &sorted[t];
        let mut branches = Vec::new();
        if kids[t].is_empty() {
            let leaf = b.push(NiceNode::Leaf, vec![], vec![]);
            branches.push(transition(&mut b, g, &mut introduced, leaf, target));
        }
        for &c in &kids[t] {
            branches.push(transition(&mut b, g, &mut introduced, result[c], target));
        }
        let mut cur = branches[0];
        for &other in &branches[1..] {
            cur = b.push(NiceNode::Join, vec![cur, other], target.clone());
        }
        result[t] = cur;
    }
    let root = if nb == 0 {
        b.push(NiceNode::Leaf, vec![], vec![])
    } else {
        transition(&mut b, g, &mut introduced, result[0], &[])
    };
    NiceDecomposition { nodes: b.nodes, children: b.children, bags: b.bags, root }
}

fn transition(
    b: &mut Builder,
    g: &Graph,
    introduced: &mut HashSet<(usize, usize)>,
    mut cur: usize,
    target: &[usize],
) -> usize {
    let from = b.bags[cur].clone();
    for &v in from.iter().filter(|v| target.binary_search(v).is_err()) {
        let bag = b.bags[cur].clone();
        for &w in g.neighbors(v) {
            if bag.binary_search(&w).is_ok() {
                let key = (v.min(w), v.max(w));
                if introduced.insert(key) {
                    cur = b.push(NiceNode::IntroduceEdge(key.0, key.1), vec![cur], bag.clone());
                }
            }
        }
        cur = b.push(NiceNode::Forget(v), vec![cur], without(&bag, v));
    }
    for &v in target {
        let bag = &b.bags[cur];
        if let Err(pos) = bag.binary_search(&v) {
            let mut nbag = bag.clone();
            nbag.insert(pos, v);
            cur = b.push(NiceNode::Introduce(v), vec![cur], nbag.clone());
            for &w in g.neighbors(v) {
                if nbag.binary_search(&w).is_ok() {
                    let key = (v.min(w), v.max(w));
                    if introduced.insert(key) {
                        cur = b.push(NiceNode::IntroduceEdge(key.0, key.1), vec![cur], nbag.clone());
                    }
                }
            }
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twd::{decompose, validate_decomposition, Heuristic};

    #[test]
    fn nice_form_of_grid() {
        let g = Graph::grid(4, 3);
        let td = decompose(&g, Heuristic::MinFill);
        let nice = make_nice(&g, &td);
        nice.check().unwrap();
        assert_eq!(nice.width(), td.width());
        validate_decomposition(&g, &nice.to_tree_decomposition(g.num_vertices())).unwrap();
        let edges = nice.nodes.iter().filter(|n| matches!(n, NiceNode::IntroduceEdge(..))).count();
        assert_eq!(edges, g.num_edges());
        let forgets = nice.nodes.iter().filter(|n| matches!(n, NiceNode::Forget(_))).count();
        assert_eq!(forgets, g.num_vertices());
    }

    #[test]
    fn nice_form_of_disconnected_graph() {
        let g = Graph::from_edges(4, [(0, 1)]);
        let td = decompose(&g, Heuristic::MinDegree);
        let nice = make_nice(&g, &td);
        nice.check().unwrap();
        assert_eq!(nice.root, nice.len() - 1);
    }
}
