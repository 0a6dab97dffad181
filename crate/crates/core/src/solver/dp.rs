//! Dynamic programming over a nice tree decomposition.
//!
//! A solution is certified by a reachability forest: every vertex reached
//! from the chosen guards within the bound is "in", carries its exact
//! distance label, and is "settled" once it has a parent arc `a -> v` with
//! `d(a) + w = d(v)`. Guard sources that are in are roots. Because the in-set
//! is the full bounded reach set, every arc leaving an in-vertex within the
//! budget must land on an in-vertex with a label no larger than the arc
//! offers; these local checks prune most states. Parent arcs of weight 0 can
//! close cycles, so when the weight-0 subgraph is cyclic the state also keeps
//! a partition of the in-vertices into parent-connected blocks.
//!
//! A vertex stays "free" in a subtree until one of its edges is introduced
//! there; joins take its state from the other side. This keeps vertices that
//! are introduced on every branch of a join from multiplying the tables.

use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::models::GuardGraph;
use crate::twd::{decompose, make_nice, Heuristic, validate_decomposition, NiceDecomposition, NiceNode, TreeDecomposition};

use super::contract::contract_zero_cycles;
use super::kernel::{kernelize, Kernel};
use super::{witness_paths, CoverSolution, SolveError, Stats, Status};

pub const DEFAULT_STATE_CAP: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpConfig {
    /// Upper limit on the number of table entries created.
    pub state_cap: u64,
    /// Collapse weight-0 cycles before running.
    pub contract: bool,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig { state_cap: DEFAULT_STATE_CAP, contract: true }
    }
}

impl DpConfig {
    /// Default configuration, with the cap overridable by `ORTHOGUARD_STATE_CAP`.
    pub fn from_env() -> Self {
        let state_cap = std::env::var("ORTHOGUARD_STATE_CAP")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_STATE_CAP);
        DpConfig { state_cap, ..DpConfig::default() }
    }
}

/// Arcs between each unordered vertex pair, as (from, to, weight).
type ArcsByPair = FxHashMap<(usize, usize), Vec<(usize, usize, u32)>>;

const OUT: u8 = 0;
const PENDING: u8 = 1;
const SETTLED: u8 = 2;
const FREE: u8 = 3;

fn is_in(status: u8) -> bool {
    status == PENDING || status == SETTLED
}

/// Unbounded reachability cover.
pub fn solve_dp(g: &GuardGraph, nice: &NiceDecomposition) -> Result<CoverSolution, SolveError> {
    if g.bound().is_some() {
        return Err(SolveError::UnexpectedBound);
    }
    solve_dp_with(g, nice, &DpConfig::from_env())
}

/// Reachability cover with path weight at most the graph's bound.
pub fn solve_dp_bounded(g: &GuardGraph, nice: &NiceDecomposition) -> Result<CoverSolution, SolveError> {
    if g.bound().is_none() {
        return Err(SolveError::MissingBound);
    }
    solve_dp_with(g, nice, &DpConfig::from_env())
}

struct Table {
    cost: Vec<u32>,
    /// Child state indices; the second is used by joins only.
    back: Vec<(u32, u32)>,
}

struct Builder {
    index: FxHashMap<Box<[u8]>, u32>,
    keys: Vec<Box<[u8]>>,
    cost: Vec<u32>,
    back: Vec<(u32, u32)>,
}

impl Builder {
    fn new() -> Self {
        Builder { index: FxHashMap::default(), keys: Vec::new(), cost: Vec::new(), back: Vec::new() }
    }

    fn offer(&mut self, key: Box<[u8]>, cost: u32, back: (u32, u32)) {
        match self.index.get(&key) {
            Some(&i) => {
                if cost < self.cost[i as usize] {
                    self.cost[i as usize] = cost;
                    self.back[i as usize] = back;
                }
            }
            None => {
                self.index.insert(key.clone(), self.keys.len() as u32);
                self.keys.push(key);
                self.cost.push(cost);
                self.back.push(back);
            }
        }
    }
}

struct Engine {
    bound: Option<u32>,
    partition: bool,
    is_source: Vec<bool>,
    is_sink: Vec<bool>,
    in_degree: Vec<usize>,
    arcs: ArcsByPair,
}

/// Relabels blocks of in-positions in order of first appearance.
fn canonical(key: &mut [u8]) {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    for j in 0..key.len() / 3 {
        if !is_in(key[3 * j]) {
            key[3 * j + 2] = 0;
            continue;
        }
        let b = key[3 * j + 2] as usize;
        if map[b] == u8::MAX {
            map[b] = next;
            next += 1;
        }
        key[3 * j + 2] = map[b];
    }
}

impl Engine {
    fn max_label(&self) -> u8 {
        self.bound.unwrap_or(0) as u8
    }

    /// Concrete states a free vertex can take, with their cost.
    fn options(&self, v: usize) -> Vec<([u8; 3], u32)> {
        let mut options = vec![([OUT, 0, 0], 0)];
        let fresh = if self.partition { 255 } else { 0 };
        if self.is_source[v] {
            options.push(([SETTLED, 0, fresh], 1));
        } else if self.in_degree[v] > 0 {
            for d in 0..=self.max_label() {
                options.push(([PENDING, d, fresh], 0));
            }
        }
        options
    }

    /// Replaces the free entry at position `p` by each concrete option.
    fn expand(&self, key: &[u8], p: usize, v: usize, out: &mut Vec<(Box<[u8]>, u32)>) {
        for (triple, extra) in self.options(v) {
            let mut nk: Box<[u8]> = key.into();
            nk[3 * p..3 * p + 3].copy_from_slice(&triple);
            if self.partition {
                canonical(&mut nk);
            }
            out.push((nk, extra));
        }
    }

    fn introduce(&self, child: &[Box<[u8]>], child_cost: &[u32], bag: &[usize], v: usize, out: &mut Builder) {
        let p = bag.binary_search(&v).expect("introduced vertex in bag");
        for (i, k) in child.iter().enumerate() {
            let mut nk = Vec::with_capacity(k.len() + 3);
            nk.extend_from_slice(&k[..3 * p]);
            nk.extend_from_slice(&[FREE, 0, 0]);
            nk.extend_from_slice(&k[3 * p..]);
            out.offer(nk.into_boxed_slice(), child_cost[i], (i as u32, u32::MAX));
        }
    }

    /// Applies one arc to a state, pushing the resulting states.
    fn apply_arc(&self, key: &[u8], pa: usize, pb: usize, w: u32, out: &mut Vec<Box<[u8]>>) {
        if key[3 * pa] == OUT {
            out.push(key.into());
            return;
        }
        let offered = match self.bound {
            Some(bound) => {
                let nd = key[3 * pa + 1] as u32 + w;
                if nd > bound {
                    out.push(key.into());
                    return;
                }
                nd as u8
            }
            None => 0,
        };
        let (sb, db) = (key[3 * pb], key[3 * pb + 1]);
        if sb == OUT || db > offered {
            return;
        }
        if sb != PENDING || db != offered {
            out.push(key.into());
            return;
        }
        let mut taken: Box<[u8]> = key.into();
        taken[3 * pb] = SETTLED;
        if !self.partition {
            out.push(taken);
            return;
        }
        out.push(key.into());
        let zero = self.bound.is_none() || w == 0;
        if zero {
            let (ba, bb) = (key[3 * pa + 2], key[3 * pb + 2]);
            if ba == bb {
                return;
            }
            for j in 0..key.len() / 3 {
                if is_in(key[3 * j]) && key[3 * j + 2] == bb {
                    taken[3 * j + 2] = ba;
                }
            }
            canonical(&mut taken);
        }
        out.push(taken);
    }

    fn introduce_edge(&self, child: &[Box<[u8]>], child_cost: &[u32], bag: &[usize], u: usize, v: usize, out: &mut Builder) {
        let arcs = self.arcs.get(&(u.min(v), u.max(v))).map(Vec::as_slice).unwrap_or(&[]);
        let pos = |x: usize| bag.binary_search(&x).expect("edge endpoint in bag");
        let mut cur: Vec<(Box<[u8]>, u32)> = Vec::new();
        let mut tmp = Vec::new();
        for (i, k) in child.iter().enumerate() {
            cur.clear();
            cur.push((k.clone(), child_cost[i]));
            for x in [u, v] {
                let p = pos(x);
                if cur[0].0[3 * p] == FREE {
                    for (s, c) in std::mem::take(&mut cur) {
                        tmp.clear();
                        self.expand(&s, p, x, &mut tmp);
                        cur.extend(tmp.drain(..).map(|(nk, extra)| (nk, c + extra)));
                    }
                }
            }
            for (s, c) in cur.drain(..) {
                let mut states: Vec<Box<[u8]>> = vec![s];
                for &(a, b, w) in arcs {
                    let mut next = Vec::with_capacity(states.len() + 1);
                    for st in &states {
                        self.apply_arc(st, pos(a), pos(b), w, &mut next);
                    }
                    states = next;
                    if states.is_empty() {
                        break;
                    }
                }
                for st in states {
                    out.offer(st, c, (i as u32, u32::MAX));
                }
            }
        }
    }

    fn forget(&self, child: &[Box<[u8]>], child_cost: &[u32], child_bag: &[usize], v: usize, out: &mut Builder) {
        let p = child_bag.binary_search(&v).expect("forgotten vertex in bag");
        let mut expanded = Vec::new();
        for (i, k) in child.iter().enumerate() {
            expanded.clear();
            if k[3 * p] == FREE {
                self.expand(k, p, v, &mut expanded);
            } else {
                expanded.push((k.clone(), 0));
            }
            for (k, extra) in &expanded {
                let status = k[3 * p];
                if status == PENDING || (status == OUT && self.is_sink[v]) {
                    continue;
                }
                let mut nk = Vec::with_capacity(k.len() - 3);
                nk.extend_from_slice(&k[..3 * p]);
                nk.extend_from_slice(&k[3 * p + 3..]);
                if self.partition {
                    canonical(&mut nk);
                }
                out.offer(nk.into_boxed_slice(), child_cost[i] + extra, (i as u32, u32::MAX));
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn join(
        &self,
        left: &[Box<[u8]>],
        left_cost: &[u32],
        right: &[Box<[u8]>],
        right_cost: &[u32],
        bag: &[usize],
        out: &mut Builder,
    ) {
        let b = bag.len();
        let (Some(l0), Some(r0)) = (left.first(), right.first()) else { return };
        let free_l: Vec<bool> = (0..b).map(|j| l0[3 * j] == FREE).collect();
        let free_r: Vec<bool> = (0..b).map(|j| r0[3 * j] == FREE).collect();
        let shared: Vec<usize> = (0..b).filter(|&j| !free_l[j] && !free_r[j]).collect();
        let sig = |k: &[u8]| -> Vec<u8> { shared.iter().flat_map(|&j| [is_in(k[3 * j]) as u8, k[3 * j + 1]]).collect() };
        let mut groups: FxHashMap<Vec<u8>, Vec<usize>> = FxHashMap::default();
        for (i, k) in right.iter().enumerate() {
            groups.entry(sig(k)).or_default().push(i);
        }
        let roots_of = |k: &[u8]| shared.iter().filter(|&&j| is_in(k[3 * j]) && self.is_source[bag[j]]).count() as u32;
        for (li, lk) in left.iter().enumerate() {
            let Some(partners) = groups.get(&sig(lk)) else { continue };
            let roots = roots_of(lk);
            'pair: for &ri in partners {
                let rk = &right[ri];
                let mut nk: Vec<u8> = lk.to_vec();
                for j in 0..b {
                    if free_l[j] {
                        nk[3 * j..3 * j + 3].copy_from_slice(&rk[3 * j..3 * j + 3]);
                    } else if !free_r[j] && lk[3 * j] != OUT {
                        let (sl, sr) = (lk[3 * j], rk[3 * j]);
                        if self.partition && sl == SETTLED && sr == SETTLED && !self.is_source[bag[j]] {
                            continue 'pair;
                        }
                        nk[3 * j] = sl.max(sr);
                    }
                }
                if self.partition && !self.fuse_blocks(lk, rk, &free_l, &free_r, &mut nk) {
                    continue;
                }
                out.offer(nk.into_boxed_slice(), left_cost[li] + right_cost[ri] - roots, (li as u32, ri as u32));
            }
        }
    }

    /// Merges the block structures of two states into `out`. A position free
    /// on one side is a singleton there. Fails if the union of the two
    /// forests would contain a cycle.
    fn fuse_blocks(&self, l: &[u8], r: &[u8], free_l: &[bool], free_r: &[bool], out: &mut [u8]) -> bool {
        let b = l.len() / 3;
        let ins: Vec<usize> = (0..b).filter(|&j| is_in(out[3 * j])).collect();
        // block label per side; free positions get labels no real block uses
        let label = |k: &[u8], free: &[bool], j: usize| if free[j] { 128 + j } else { k[3 * j + 2] as usize };
        let mut parent: Vec<usize> = (0..b).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut blocks = [0usize; 2];
        for (side, (k, free)) in [(l, free_l), (r, free_r)].into_iter().enumerate() {
            let mut first = [usize::MAX; 256 + 128];
            for &j in &ins {
                let lab = label(k, free, j);
                if first[lab] == usize::MAX {
                    first[lab] = j;
                    blocks[side] += 1;
                } else {
                    let (x, y) = (find(&mut parent, first[lab]), find(&mut parent, j));
                    parent[x] = y;
                }
            }
        }
        let mut comps = 0;
        for &j in &ins {
            if find(&mut parent, j) == j {
                comps += 1;
            }
        }
        let n = ins.len();
        if (n - blocks[0]) + (n - blocks[1]) != n - comps {
            return false;
        }
        for &j in &ins {
            out[3 * j + 2] = find(&mut parent, j) as u8;
        }
        canonical(out);
        true
    }
}

/// Whether the subgraph of weight-0 arcs (all arcs when unbounded) has a cycle.
fn zero_subgraph_cyclic(g: &GuardGraph) -> bool {
    let n = g.num_vertices();
    let zero = |w: u32| g.bound().is_none() || w == 0;
    let mut indeg = vec![0usize; n];
    for (_, b, w) in g.arcs() {
        if zero(w) {
            indeg[b] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut done = 0;
    while let Some(a) = stack.pop() {
        done += 1;
        for &(b, w) in g.out_arcs(a) {
            if zero(w) {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    stack.push(b);
                }
            }
        }
    }
    done < n
}

/// Runs the DP on a given nice decomposition of the graph's underlying
/// undirected graph.
pub fn solve_dp_with(g: &GuardGraph, nice: &NiceDecomposition, cfg: &DpConfig) -> Result<CoverSolution, SolveError> {
    let start = Instant::now();
    check_decomposition(g, nice)?;
    if cfg.contract {
        if let Some((h, nice_h)) = contract_with(g, &nice.to_tree_decomposition(g.num_vertices())) {
            return finish(g, run(&h, &nice_h, cfg)?, start);
        }
    }
    finish(g, run(g, nice, cfg)?, start)
}

/// Collapses weight-0 cycles and maps the decomposition onto the result.
/// Decomposing first and mapping afterwards gives much smaller tables than
/// decomposing the collapsed graph.
fn contract_with(g: &GuardGraph, td: &TreeDecomposition) -> Option<(GuardGraph, NiceDecomposition)> {
    let (h, map) = contract_zero_cycles(g)?;
    let bags = td.bags().iter().map(|b| b.iter().map(|&v| map[v]).collect()).collect();
    let mapped = TreeDecomposition::new(h.num_vertices(), bags, td.tree_edges().to_vec());
    let nice = make_nice(&h.undirected(), &mapped);
    Some((h, nice))
}

/// Above this estimated table size the graph is shrunk first.
const KERNEL_ESTIMATE: f64 = 1.6e6;

/// Rough table size: per bag vertex, out or one of the in-states per distance.
fn estimate(g: &GuardGraph, nice: &NiceDecomposition) -> f64 {
    let per_vertex = g.bound().map_or(3.0, |w| 1.0 + 2.0 * (w as f64 + 1.0));
    per_vertex.powi(nice.width() as i32 + 1)
}

/// Runs the DP on its own min-fill decomposition. Wide instances are first
/// reduced with [`kernelize`].
pub fn solve_dp_auto(g: &GuardGraph, cfg: &DpConfig) -> Result<CoverSolution, SolveError> {
    let start = Instant::now();
    let (h, nice) = prepare_auto(g, cfg);
    if estimate(&h, &nice) > KERNEL_ESTIMATE {
        let mut best: Option<(Kernel, GuardGraph, NiceDecomposition)> = None;
        for paths_only in [false, true] {
            let Some(k) = kernelize(g, paths_only) else { break };
            let (kh, knice) = prepare_auto(&k.graph, cfg);
            if best.as_ref().is_none_or(|b| knice.width() < b.2.width()) {
                best = Some((k, kh, knice));
            }
            if best.as_ref().is_some_and(|b| estimate(&b.1, &b.2) <= KERNEL_ESTIMATE) {
                break;
            }
        }
        if let Some((k, kh, knice)) = best {
            let (chosen, stats) = run(&kh, &knice, cfg)?;
            let chosen = chosen.map(|c| c.into_iter().map(|i| k.guards[i]).collect());
            return finish(g, (chosen, stats), start);
        }
    }
    finish(g, run(&h, &nice, cfg)?, start)
}

/// The graph the DP runs on (weight-0 cycles collapsed if enabled) and a
/// min-fill nice decomposition of it.
fn prepare_auto(g: &GuardGraph, cfg: &DpConfig) -> (GuardGraph, NiceDecomposition) {
    let ug = g.undirected();
    let td = decompose(&ug, Heuristic::MinFill);
    match cfg.contract.then(|| contract_with(g, &td)).flatten() {
        Some(pair) => pair,
        None => (g.clone(), make_nice(&ug, &td)),
    }
}

fn check_decomposition(g: &GuardGraph, nice: &NiceDecomposition) -> Result<(), SolveError> {
    nice.check().map_err(SolveError::InvalidDecomposition)?;
    validate_decomposition(&g.undirected(), &nice.to_tree_decomposition(g.num_vertices()))
        .map_err(|e| SolveError::InvalidDecomposition(e.to_string()))
}

fn finish(g: &GuardGraph, (chosen, mut stats): (Option<Vec<usize>>, Stats), start: Instant) -> Result<CoverSolution, SolveError> {
    stats.millis = start.elapsed().as_secs_f64() * 1e3;
    Ok(match chosen {
        None => CoverSolution::infeasible(g, stats),
        Some(chosen) => CoverSolution {
            status: Status::Optimal,
            cardinality: chosen.len(),
            witness: witness_paths(g, &chosen),
            guards: chosen,
            unreachable: vec![],
            stats,
        },
    })
}

/// The DP proper: the chosen guard ids (`None` if infeasible) and statistics.
fn run(g: &GuardGraph, nice: &NiceDecomposition, cfg: &DpConfig) -> Result<(Option<Vec<usize>>, Stats), SolveError> {
    let n = g.num_vertices();
    check_decomposition(g, nice)?;
    let width = nice.width();
    if width + 1 > 84 {
        return Err(SolveError::StateCapExceeded(cfg.state_cap));
    }
    if let Some(w) = g.bound() {
        let potential = (w as f64 + 1.0).powi(width as i32 + 1);
        if potential > cfg.state_cap as f64 {
            return Err(SolveError::BudgetTooLarge { states: potential, cap: cfg.state_cap });
        }
    }
    let mut is_source = vec![false; n];
    let mut source_guard = vec![usize::MAX; n];
    for (i, &s) in g.sources().iter().enumerate() {
        is_source[s] = true;
        source_guard[s] = i;
    }
    let mut is_sink = vec![false; n];
    for &t in g.sinks() {
        is_sink[t] = true;
    }
    let mut arcs: ArcsByPair = FxHashMap::default();
    for (a, b, w) in g.arcs() {
        if a != b {
            arcs.entry((a.min(b), a.max(b))).or_default().push((a, b, w));
        }
    }
    let engine = Engine {
        bound: g.bound(),
        partition: zero_subgraph_cyclic(g),
        is_source,
        is_sink,
        in_degree: g.in_degrees(),
        arcs,
    };

    let m = nice.len();
    let mut keys: Vec<Option<Vec<Box<[u8]>>>> = (0..m).map(|_| None).collect();
    let mut tables: Vec<Table> = Vec::with_capacity(m);
    let mut total: u64 = 0;
    for t in 0..m {
        let mut out = Builder::new();
        let ch = &nice.children[t];
        let bag = &nice.bags[t];
        match nice.nodes[t] {
            NiceNode::Leaf => out.offer(Box::new([]), 0, (u32::MAX, u32::MAX)),
            NiceNode::Introduce(v) => {
                let k = keys[ch[0]].take().expect("child keys");
                engine.introduce(&k, &tables[ch[0]].cost, bag, v, &mut out);
            }
            NiceNode::IntroduceEdge(u, v) => {
                let k = keys[ch[0]].take().expect("child keys");
                engine.introduce_edge(&k, &tables[ch[0]].cost, bag, u, v, &mut out);
            }
            NiceNode::Forget(v) => {
                let k = keys[ch[0]].take().expect("child keys");
                engine.forget(&k, &tables[ch[0]].cost, &nice.bags[ch[0]], v, &mut out);
            }
            NiceNode::Join => {
                let l = keys[ch[0]].take().expect("child keys");
                let r = keys[ch[1]].take().expect("child keys");
                engine.join(&l, &tables[ch[0]].cost, &r, &tables[ch[1]].cost, bag, &mut out);
            }
        }
        total += out.keys.len() as u64;
        if total > cfg.state_cap {
            return Err(SolveError::StateCapExceeded(cfg.state_cap));
        }
        keys[t] = Some(out.keys);
        tables.push(Table { cost: out.cost, back: out.back });
    }
    let root = nice.root;
    let stats = Stats { bags: m, states: total, width: Some(width), millis: 0.0 };
    if tables[root].cost.is_empty() {
        return Ok((None, stats));
    }

    // a source is paid for where its free entry is expanded; at most one
    // endpoint of an edge is a source, since sources have no in-arcs
    let mut chosen = Vec::new();
    let mut stack = vec![(root, 0usize)];
    while let Some((t, i)) = stack.pop() {
        let ch = &nice.children[t];
        let (a, b) = tables[t].back[i];
        let paid = |vs: &[usize]| {
            let grew = tables[t].cost[i] > tables[ch[0]].cost[a as usize];
            vs.iter().copied().find(|&v| grew && engine.is_source[v])
        };
        match nice.nodes[t] {
            NiceNode::Leaf => {}
            NiceNode::Join => {
                stack.push((ch[0], a as usize));
                stack.push((ch[1], b as usize));
            }
            NiceNode::IntroduceEdge(u, v) => {
                chosen.extend(paid(&[u, v]).map(|s| source_guard[s]));
                stack.push((ch[0], a as usize));
            }
            NiceNode::Forget(v) | NiceNode::Introduce(v) => {
                chosen.extend(paid(&[v]).map(|s| source_guard[s]));
                stack.push((ch[0], a as usize));
            }
        }
    }
    chosen.sort_unstable();
    chosen.dedup();
    debug_assert_eq!(chosen.len() as u32, tables[root].cost[0]);
    Ok((Some(chosen), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{nice_decomposition, solve_oracle};

    fn check(g: &GuardGraph) {
        let nice = nice_decomposition(g);
        let dp = solve_dp_with(g, &nice, &DpConfig::default()).unwrap();
        let or = solve_oracle(g).unwrap();
        assert_eq!(dp.status, or.status);
        assert_eq!(dp.cardinality, or.cardinality);
        if dp.status == Status::Optimal {
            assert_eq!(super::super::verify_cover(g, &dp.guards).unwrap(), super::super::Verdict::Ok);
        }
    }

    #[test]
    fn zero_weight_cycle_cannot_self_support() {
        // a 0-weight 2-cycle with a sink, reachable only from guard 1
        let mut g = GuardGraph::new(3, Some(0));
        g.add_arc(0, 1, 0);
        g.add_arc(1, 0, 0);
        g.add_arc(2, 0, 0);
        g.add_source([2]);
        g.add_sink([1]);
        check(&g);
        let mut g = GuardGraph::new(2, None);
        g.add_arc(0, 1, 0);
        g.add_arc(1, 0, 0);
        g.add_sink([1]);
        let dp = solve_dp_with(&g, &nice_decomposition(&g), &DpConfig::default()).unwrap();
        assert_eq!(dp.status, Status::Infeasible);
    }

    #[test]
    fn bounded_path() {
        let mut g = GuardGraph::new(4, Some(2));
        g.add_arc(0, 1, 1);
        g.add_arc(1, 2, 1);
        g.add_arc(2, 3, 1);
        g.add_source([0]);
        g.add_source([2]);
        g.add_sink([1]);
        g.add_sink([3]);
        check(&g);
        let dp = solve_dp_bounded(&g, &nice_decomposition(&g)).unwrap();
        assert_eq!(dp.guards, vec![0, 1]);
    }

    #[test]
    fn budget_precheck() {
        let mut g = GuardGraph::new(3, Some(1000));
        g.add_arc(0, 1, 1);
        g.add_arc(1, 2, 1);
        g.add_arc(2, 0, 1);
        let cfg = DpConfig { state_cap: 1000, contract: false };
        assert!(matches!(
            solve_dp_with(&g, &nice_decomposition(&g), &cfg),
            Err(SolveError::BudgetTooLarge { .. })
        ));
        assert_eq!(solve_dp(&g, &nice_decomposition(&g)).unwrap_err(), SolveError::UnexpectedBound);
    }

    fn random_graph(n: usize, arcs: &[(usize, usize, u32)], bound: Option<u32>, sources: &[usize], sinks: &[usize]) -> GuardGraph {
        let mut g = GuardGraph::new(n, bound);
        for &(a, b, w) in arcs {
            if a != b {
                g.add_arc(a, b, w);
            }
        }
        for &s in sources {
            g.add_source([s]);
        }
        for &t in sinks {
            g.add_sink([t]);
        }
        g
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn matches_oracle_with_and_without_contraction(
            arcs in proptest::collection::vec((0..7usize, 0..7usize, 0..3u32), 0..16),
            bound in proptest::option::of(0..4u32),
            sources in proptest::collection::vec(0..7usize, 1..4),
            sinks in proptest::collection::vec(0..7usize, 1..5),
        ) {
            let g = random_graph(7, &arcs, bound, &sources, &sinks);
            let or = solve_oracle(&g).unwrap();
            let nice = nice_decomposition(&g);
            for contract in [true, false] {
                let cfg = DpConfig { contract, ..DpConfig::default() };
                let dp = solve_dp_with(&g, &nice, &cfg).unwrap();
                prop_assert_eq!(dp.status, or.status);
                prop_assert_eq!(dp.cardinality, or.cardinality);
                if dp.status == Status::Optimal {
                    prop_assert_eq!(super::super::verify_cover(&g, &dp.guards).unwrap(), super::super::Verdict::Ok);
                }
            }
        }
    }
}
