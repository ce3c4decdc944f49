//! Alignment and conflict graphs.
//!
//! Two messages share an alignment edge when some destination sees both as
//! interference; a conflict edge joins each desired message to every
//! interferer at its destination. Alignment sets are the connected
//! components of the alignment graph and the minimum internal conflict
//! distance is the smallest alignment-graph hop count between two
//! conflicting messages of the same alignment set.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::instance::Instance;
use crate::set::MessageSet;
use crate::Rational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("no internal conflicts: the instance is half-rate feasible and the conflict bound does not apply")]
    HalfRateFeasible,
}

/// Undirected edge with `lo < hi`.
pub type Edge = (u32, u32);

fn edge(a: u32, b: u32) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentGraph {
    n: usize,
    /// Edge to the (0-based) destinations that demand it.
    edges: BTreeMap<Edge, Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    n: usize,
    edges: BTreeSet<Edge>,
}

pub fn build_alignment_graph(inst: &Instance) -> AlignmentGraph {
    let mut edges: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    for (k, d) in inst.destinations().iter().enumerate() {
        let ids: Vec<u32> = d.interferers.iter().collect();
        for (x, &i) in ids.iter().enumerate() {
            for &j in &ids[x + 1..] {
                edges.entry(edge(i, j)).or_default().push(k);
            }
        }
    }
    AlignmentGraph { n: inst.message_count(), edges }
}

pub fn build_conflict_graph(inst: &Instance) -> ConflictGraph {
    let mut edges = BTreeSet::new();
    for d in inst.destinations() {
        for w in d.desired.iter() {
            for j in d.interferers.iter() {
                edges.insert(edge(w, j));
            }
        }
    }
    ConflictGraph { n: inst.message_count(), edges }
}

impl AlignmentGraph {
    pub fn message_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains_key(&edge(a, b))
    }

    /// Destinations (0-based) that demand the edge.
    pub fn witnesses(&self, a: u32, b: u32) -> &[usize] {
        self.edges.get(&edge(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn neighbors(&self, v: u32) -> MessageSet {
        self.edges
            .keys()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect()
    }

    /// Hop distances from `src`; `None` when unreachable.
    pub fn distances_from(&self, src: u32) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.n + 1];
        dist[src as usize] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize].unwrap();
            for &w in &adj[v as usize] {
                if dist[w as usize].is_none() {
                    dist[w as usize] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, a: u32, b: u32) -> Option<usize> {
        self.distances_from(a)[b as usize]
    }

    fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(a, b) in self.edges.keys() {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        adj
    }

    /// Biconnected blocks (each a set of edges), found with Tarjan's edge stack.
    pub fn blocks(&self) -> Vec<Block> {
        let adj = self.adjacency();
        let mut st = BlockSearch {
            adj: &adj,
            disc: vec![0; self.n + 1],
            low: vec![0; self.n + 1],
            timer: 0,
            stack: Vec::new(),
            blocks: Vec::new(),
        };
        for v in 1..=self.n as u32 {
            if st.disc[v as usize] == 0 && !adj[v as usize].is_empty() {
                st.visit(v, 0);
            }
        }
        let mut blocks = st.blocks;
        blocks.sort_by(|a, b| a.edges.cmp(&b.edges));
        blocks
    }

    /// Triangles `{a,b,c}` as sorted triples.
    pub fn triangles(&self) -> Vec<[u32; 3]> {
        let mut out = Vec::new();
        for &(a, b) in self.edges.keys() {
            for c in self.neighbors(a).intersection(self.neighbors(b)).iter() {
                if c > b {
                    out.push([a, b, c]);
                }
            }
        }
        out
    }

    /// One `a b` pair per line, followed by the demanding destinations.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (&(a, b), w) in &self.edges {
            let ds: Vec<String> = w.iter().map(|k| (k + 1).to_string()).collect();
            writeln!(out, "{a} {b} # dest {}", ds.join(",")).unwrap();
        }
        out
    }
}

impl ConflictGraph {
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn message_count(&self) -> usize {
        self.n
    }

    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|(a, b)| format!("{a} {b}\n")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub edges: Vec<Edge>,
    pub nodes: MessageSet,
}

impl Block {
    /// Independent cycles in the block: `edges - nodes + 1`.
    pub fn cyclomatic_number(&self) -> usize {
        self.edges.len() + 1 - self.nodes.len()
    }

    pub fn is_bridge(&self) -> bool {
        self.edges.len() == 1
    }

    /// For a simple-cycle block, its nodes in cyclic order starting at `start`.
    pub fn cycle_from(&self, start: u32) -> Option<Vec<u32>> {
        if self.cyclomatic_number() != 1 || self.is_bridge() || !self.nodes.contains(start) {
            return None;
        }
        let nbrs = |v: u32| -> Vec<u32> {
            let mut out: Vec<u32> = self
                .edges
                .iter()
                .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
                .collect();
            out.sort_unstable();
            out
        };
        let mut order = vec![start];
        let mut prev = start;
        let mut cur = nbrs(start)[0];
        while cur != start {
            order.push(cur);
            let next = nbrs(cur).into_iter().find(|&w| w != prev)?;
            prev = cur;
            cur = next;
        }
        Some(order)
    }
}

struct BlockSearch<'a> {
    adj: &'a [Vec<u32>],
    disc: Vec<usize>,
    low: Vec<usize>,
    timer: usize,
    stack: Vec<Edge>,
    blocks: Vec<Block>,
}

impl BlockSearch<'_> {
    fn visit(&mut self, v: u32, parent: u32) {
        self.timer += 1;
        self.disc[v as usize] = self.timer;
        self.low[v as usize] = self.timer;
        for &w in &self.adj[v as usize] {
            if w == parent {
                continue;
            }
            if self.disc[w as usize] == 0 {
                self.stack.push(edge(v, w));
                self.visit(w, v);
                self.low[v as usize] = self.low[v as usize].min(self.low[w as usize]);
                if self.low[w as usize] >= self.disc[v as usize] {
                    let mut edges = Vec::new();
                    while let Some(e) = self.stack.pop() {
                        edges.push(e);
                        if e == edge(v, w) {
                            break;
                        }
                    }
                    edges.sort_unstable();
                    let nodes = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
                    self.blocks.push(Block { edges, nodes });
                }
            } else if self.disc[w as usize] < self.disc[v as usize] {
                self.stack.push(edge(v, w));
                self.low[v as usize] = self.low[v as usize].min(self.disc[w as usize]);
            }
        }
    }
}

/// Connected components through alignment edges; isolated messages are singletons.
pub fn alignment_sets(g: &AlignmentGraph) -> Vec<MessageSet> {
    let mut seen = MessageSet::EMPTY;
    let mut sets = Vec::new();
    for v in 1..=g.n as u32 {
        if seen.contains(v) {
            continue;
        }
        let comp: MessageSet = g
            .distances_from(v)
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|_| i as u32))
            .collect();
        seen = seen.union(comp);
        sets.push(comp);
    }
    sets
}

/// Conflict edges whose endpoints lie in the same alignment set.
pub fn internal_conflicts(a: &AlignmentGraph, c: &ConflictGraph) -> Vec<(Edge, usize)> {
    c.edges()
        .filter_map(|(x, y)| a.distance(x, y).map(|d| ((x, y), d)))
        .collect()
}

/// Minimum internal conflict distance; `None` means no internal conflict.
pub fn internal_conflict_distance(a: &AlignmentGraph, c: &ConflictGraph) -> Option<usize> {
    internal_conflicts(a, c).into_iter().map(|(_, d)| d).min()
}

/// Per alignment set, whether some edge lies on two distinct cycles.
pub fn has_overlapping_cycles(a: &AlignmentGraph) -> Vec<(MessageSet, bool)> {
    let blocks = a.blocks();
    alignment_sets(a)
        .into_iter()
        .map(|set| {
            let overlapping = blocks.iter().any(|b| b.nodes.is_subset(set) && b.cyclomatic_number() > 1);
            (set, overlapping)
        })
        .collect()
}

/// The conflict bound `Δ/(2Δ+1)`.
pub fn conflict_bound(delta: Option<usize>) -> Result<Rational, GraphError> {
    match delta {
        Some(d) if d >= 1 => Ok(Rational::new(d as i128, 2 * d as i128 + 1)),
        _ => Err(GraphError::HalfRateFeasible),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::builtin_fixture;
    use crate::instance::Destination;
    use crate::ratio;

    fn inst(n: usize, dests: &[(u32, &[u32])]) -> Instance {
        Instance::new(n, dests.iter().map(|(w, i)| Destination::unicast(*w, i.iter().copied())).collect(), "t").unwrap()
    }

    #[test]
    fn unicast11_alignment_edges() {
        let g = build_alignment_graph(&builtin_fixture("unicast11").unwrap());
        let edges: Vec<Edge> = g.edges().collect();
        assert_eq!(edges, vec![(1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5), (4, 6)]);
        assert_eq!(g.witnesses(3, 1), &[6]);
    }

    #[test]
    fn clique_rule_for_three_interferers() {
        let g = build_alignment_graph(&inst(4, &[(1, &[2, 3, 4])]));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(2, 3), (2, 4), (3, 4)]);
        assert_eq!(has_overlapping_cycles(&g), vec![(MessageSet::singleton(1), false), (MessageSet::from_ids([2, 3, 4]), false)]);
    }

    #[test]
    fn empty_interferers_give_edgeless_graphs() {
        let i = inst(3, &[(1, &[]), (2, &[]), (3, &[])]);
        let a = build_alignment_graph(&i);
        let c = build_conflict_graph(&i);
        assert_eq!(a.edge_count(), 0);
        assert_eq!(c.edges().count(), 0);
        assert_eq!(alignment_sets(&a).len(), 3);
        assert_eq!(internal_conflict_distance(&a, &c), None);
    }

    #[test]
    fn unicast11_conflicts_and_sets() {
        let i = builtin_fixture("unicast11").unwrap();
        let a = build_alignment_graph(&i);
        let c = build_conflict_graph(&i);
        for (x, y) in [(1, 4), (1, 5), (2, 5), (2, 6), (3, 6)] {
            assert!(c.has_edge(x, y), "{x}-{y}");
        }
        let sets = alignment_sets(&a);
        assert_eq!(sets[0], MessageSet::from_ids(1..=6));
        assert_eq!(sets.len(), 6);
        assert!(sets[1..].iter().all(|s| s.len() == 1));
        assert_eq!(internal_conflict_distance(&a, &c), Some(2));
        assert_eq!(has_overlapping_cycles(&a)[0], (MessageSet::from_ids(1..=6), true));
    }

    #[test]
    fn groupcast6_structure() {
        let i = builtin_fixture("groupcast6").unwrap();
        let a = build_alignment_graph(&i);
        let c = build_conflict_graph(&i);
        assert_eq!(a.edge_count(), 6);
        assert!(c.has_edge(2, 5));
        assert_eq!(internal_conflict_distance(&a, &c), Some(2));
    }

    #[test]
    fn fig7_distance_three() {
        let i = builtin_fixture("fig7").unwrap();
        let a = build_alignment_graph(&i);
        let c = build_conflict_graph(&i);
        assert_eq!(internal_conflict_distance(&a, &c), Some(3));
        assert!(has_overlapping_cycles(&a).iter().all(|(_, o)| !o));
    }

    #[test]
    fn cycles_and_trees_do_not_overlap() {
        let tree = build_alignment_graph(&inst(5, &[(5, &[1, 2]), (5, &[2, 3]), (5, &[2, 4])]));
        assert!(has_overlapping_cycles(&tree).iter().all(|(_, o)| !o));
        let cycle = build_alignment_graph(&inst(5, &[(5, &[1, 2]), (5, &[2, 3]), (5, &[3, 4]), (5, &[4, 1])]));
        assert!(has_overlapping_cycles(&cycle).iter().all(|(_, o)| !o));
        let sets = alignment_sets(&cycle);
        assert_eq!(sets[0], MessageSet::from_ids(1..=4));
        let blocks = cycle.blocks();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].cycle_from(3).unwrap().len(), 4);
    }

    #[test]
    fn bowtie_shares_a_node_not_an_edge() {
        let g = build_alignment_graph(&inst(6, &[(6, &[1, 2]), (6, &[2, 3]), (6, &[1, 3]), (6, &[3, 4]), (6, &[4, 5]), (6, &[3, 5])]));
        assert!(has_overlapping_cycles(&g).iter().all(|(_, o)| !o));
        assert_eq!(g.blocks().len(), 2);
    }

    #[test]
    fn conflict_bound_values() {
        assert_eq!(conflict_bound(Some(2)), Ok(ratio(2, 5)));
        assert_eq!(conflict_bound(Some(3)), Ok(ratio(3, 7)));
        assert_eq!(conflict_bound(Some(1)), Ok(ratio(1, 3)));
        assert_eq!(conflict_bound(None), Err(GraphError::HalfRateFeasible));
    }
}
