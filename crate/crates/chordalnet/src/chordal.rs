//! Support graphs, chordal completions, cliques and elimination trees.
//!
//! Vertices are the ring variables; vertex `i` stands for `x_i`, and
//! `x0 > x1 > ... > x(n-1)`, so smaller indices are larger vertices.

use crate::ring::Poly;
use std::collections::BTreeSet;

/// Simple undirected graph with sorted adjacency sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    pub n: usize,
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph { n, adj: vec![BTreeSet::new(); n] }
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a < self.n && b < self.n);
        if a == b {
            return;
        }
        self.adj[a].insert(b);
        self.adj[b].insert(a);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for &b in &self.adj[a] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.edges().iter().all(|&(a, b)| other.has_edge(a, b))
    }
}

/// The support graph of a polynomial set: an edge joins two variables
/// whenever some polynomial contains both, i.e. each polynomial
/// contributes a clique on its variables.
pub fn support_graph(n: usize, polys: &[Poly]) -> Graph {
    let mut g = Graph::new(n);
    for f in polys {
        let vars = f.vars();
        for (i, &a) in vars.iter().enumerate() {
            for &b in &vars[i + 1..] {
                g.add_edge(a, b);
            }
        }
    }
    g
}

/// A chordal completion together with its cliques and elimination tree.
///
/// Vertices are relabeled so that the requested elimination order becomes
/// the natural one: internal vertex `i` is original vertex `order[i]`,
/// processed at step `i`. For the identity order no relabeling happens.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChordalStructure {
    /// Completed (chordal) graph in internal labels.
    pub g: Graph,
    /// `order[i]` = original vertex that internal vertex `i` stands for.
    pub order: Vec<usize>,
    /// Cliques `X_l = {l} + smaller neighbors of l`, each sorted ascending.
    pub cliques: Vec<Vec<usize>>,
    /// Elimination tree parent of each vertex; the root `n-1` has none.
    pub parent: Vec<Option<usize>>,
    /// Children lists, derived from `parent`, each sorted ascending.
    pub children: Vec<Vec<usize>>,
}

impl ChordalStructure {
    pub fn n(&self) -> usize {
        self.g.n
    }

    /// Size of the largest clique (the clique number).
    pub fn clique_number(&self) -> usize {
        self.cliques.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    /// Check the perfect-elimination property: each restriction to X_l is
    /// a clique.
    pub fn is_perfect_elimination(&self) -> bool {
        self.cliques.iter().all(|cl| {
            cl.iter()
                .enumerate()
                .all(|(i, &a)| cl[i + 1..].iter().all(|&b| self.g.has_edge(a, b)))
        })
    }
}

/// Complete `g` chordally for the given elimination order.
///
/// Vertices are relabeled so the order becomes natural, then fill edges
/// are added processing vertices largest-first so that every smaller
/// neighborhood becomes a clique.
pub fn complete_with_order(g: &Graph, order: &[usize]) -> ChordalStructure {
    let n = g.n;
    assert_eq!(order.len(), n, "order must be a permutation of 0..n");
    let mut seen = vec![false; n];
    for &v in order {
        assert!(v < n && !seen[v], "order must be a permutation of 0..n");
        seen[v] = true;
    }
    // position[original] = internal index
    let mut position = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut h = Graph::new(n);
    for (a, b) in g.edges() {
        h.add_edge(position[a], position[b]);
    }
    // Elimination game: make each vertex's smaller neighborhood a clique.
    let mut cliques = Vec::with_capacity(n);
    for l in 0..n {
        let higher: Vec<usize> = h.neighbors(l).filter(|&m| m > l).collect();
        for (i, &a) in higher.iter().enumerate() {
            for &b in &higher[i + 1..] {
                h.add_edge(a, b);
            }
        }
        let mut clique = vec![l];
        clique.extend(&higher);
        clique.sort_unstable();
        cliques.push(clique);
    }
    let parent = elim_parents(&h);
    let mut children = vec![Vec::new(); n];
    for (l, &par) in parent.iter().enumerate() {
        if let Some(p) = par {
            children[p].push(l);
        }
    }
    ChordalStructure { g: h, order: order.to_vec(), cliques, parent, children }
}

/// Elimination-tree parents: the largest smaller neighbor. Vertices with
/// no smaller neighbor attach to the next vertex so the tree spans
/// disconnected graphs; the root `n-1` has no parent.
fn elim_parents(g: &Graph) -> Vec<Option<usize>> {
    let n = g.n;
    (0..n)
        .map(|l| {
            if l == n - 1 {
                return None;
            }
            Some(g.neighbors(l).filter(|&m| m > l).min().unwrap_or(l + 1))
        })
        .collect()
}

/// Public view of the elimination-tree parent map of a structure.
pub fn elim_tree(cs: &ChordalStructure) -> &[Option<usize>] {
    &cs.parent
}

/// Greedy minimum-degree elimination order. The first vertex picked is
/// eliminated first (it becomes `x0`); ties break on the smallest
/// original index.
pub fn suggest_order(g: &Graph) -> Vec<usize> {
    let n = g.n;
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(&best) = alive
        .iter()
        .min_by_key(|&&v| (adj[v].len(), v))
    {
        order.push(best);
        alive.remove(&best);
        let nb: Vec<usize> = adj[best].iter().copied().collect();
        for &u in &nb {
            adj[u].remove(&best);
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    order
}

/// Number of fill edges a completion added relative to the original graph
/// under the same relabeling.
pub fn fill_count(original: &Graph, cs: &ChordalStructure) -> usize {
    cs.g.edge_count() - original.edge_count()
}
