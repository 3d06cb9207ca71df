//! The chordal network store and the triangularization driver.
//!
//! A network is a ranked DAG whose nodes hold polynomial systems
//! supported on the cliques X_l and whose arcs follow the elimination
//! tree. Triangularization runs in rounds: triangulate every node of the
//! current rank, merge, eliminate into the parent rank, merge again.

use crate::chordal::ChordalStructure;
use crate::decomp::{self, DecompError};
use crate::ring::{text::parse_poly_at, Poly, PolySystem, Ring};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// Plain storage; no backend has run.
    Raw,
    ZeroDim,
    Monomial,
    Binomial,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Raw => "raw",
            Mode::ZeroDim => "zerodim",
            Mode::Monomial => "monomial",
            Mode::Binomial => "binomial",
        }
    }

    pub fn from_str(s: &str) -> Option<Mode> {
        Some(match s {
            "raw" => Mode::Raw,
            "zerodim" => Mode::ZeroDim,
            "monomial" => Mode::Monomial,
            "binomial" => Mode::Binomial,
            _ => return None,
        })
    }

    /// Pick a backend from the shape of the input: all single-term
    /// equations run the monomial backend, at most two terms the binomial
    /// one, anything else the zero-dimensional one.
    pub fn sniff(polys: &[Poly]) -> Mode {
        if polys.iter().all(|f| f.num_terms() <= 1) {
            Mode::Monomial
        } else if polys.iter().all(|f| f.num_terms() <= 2) {
            Mode::Binomial
        } else {
            Mode::ZeroDim
        }
    }
}

#[derive(Clone, Debug)]
pub struct Node {
    pub id: usize,
    pub rank: usize,
    pub content: PolySystem,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NetError {
    UnsupportedPolynomial { poly: String },
    Backend { rank: usize, source: DecompError },
    Parse { line: usize, msg: String },
}

impl fmt::Display for NetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetError::UnsupportedPolynomial { poly } => {
                write!(f, "polynomial not supported on any clique: {poly}")
            }
            NetError::Backend { rank, source } => write!(f, "rank {rank}: {source}"),
            NetError::Parse { line, msg } => write!(f, "network parse error at line {line}: {msg}"),
        }
    }
}

impl std::error::Error for NetError {}

impl From<crate::ring::RingError> for NetError {
    fn from(e: crate::ring::RingError) -> Self {
        NetError::Backend { rank: usize::MAX, source: DecompError::Ring(e) }
    }
}

/// Ranked DAG of polynomial-system nodes following an elimination tree.
#[derive(Clone, Debug)]
pub struct ChordalNetwork {
    pub ring: Ring,
    /// Elimination-tree parent of each rank (the root has none).
    pub parent: Vec<Option<usize>>,
    /// Children of each rank, ascending.
    pub children: Vec<Vec<usize>>,
    nodes: BTreeMap<usize, Node>,
    rank_ids: Vec<Vec<usize>>,
    outgoing: BTreeMap<usize, BTreeSet<usize>>,
    incoming: BTreeMap<usize, BTreeSet<usize>>,
    next_id: usize,
    pub mode: Mode,
    pub squarefree: bool,
    /// Largest per-rank node count observed while building.
    pub peak_width: usize,
    /// Smallest rank present; larger for elimination subnetworks.
    pub min_rank: usize,
}

impl ChordalNetwork {
    pub fn new(ring: Ring, parent: Vec<Option<usize>>) -> ChordalNetwork {
        let n = ring.n;
        assert_eq!(parent.len(), n);
        let mut children = vec![Vec::new(); n];
        for (l, &p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[p].push(l);
            }
        }
        ChordalNetwork {
            ring,
            parent,
            children,
            nodes: BTreeMap::new(),
            rank_ids: vec![Vec::new(); n],
            outgoing: BTreeMap::new(),
            incoming: BTreeMap::new(),
            next_id: 0,
            mode: Mode::Raw,
            squarefree: false,
            peak_width: 0,
            min_rank: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.ring.n
    }

    pub fn root_rank(&self) -> usize {
        self.ring.n - 1
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[&id]
    }

    pub fn node_ids(&self, rank: usize) -> &[usize] {
        &self.rank_ids[rank]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arc_count(&self) -> usize {
        self.outgoing.values().map(|s| s.len()).sum()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (&u, targets) in &self.outgoing {
            for &v in targets {
                out.push((u, v));
            }
        }
        out
    }

    /// Width: the largest number of nodes of any single rank.
    pub fn width(&self) -> usize {
        self.rank_ids.iter().map(|r| r.len()).max().unwrap_or(0)
    }

    pub fn out_arcs(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.outgoing.get(&id).into_iter().flatten().copied()
    }

    pub fn in_arcs(&self, id: usize) -> impl Iterator<Item = usize> + '_ {
        self.incoming.get(&id).into_iter().flatten().copied()
    }

    /// In-arc sources of `id` restricted to one child rank, ascending.
    pub fn in_arcs_from_rank(&self, id: usize, rank: usize) -> Vec<usize> {
        self.in_arcs(id).filter(|&u| self.nodes[&u].rank == rank).collect()
    }

    /// Child ranks of `rank` that the network still covers.
    pub fn active_children(&self, rank: usize) -> Vec<usize> {
        self.children[rank]
            .iter()
            .copied()
            .filter(|&c| c >= self.min_rank)
            .collect()
    }

    pub fn add_node(&mut self, rank: usize, content: PolySystem) -> usize {
        let id = self.next_id;
        self.next_id += 1;
        self.nodes.insert(id, Node { id, rank, content });
        self.rank_ids[rank].push(id);
        self.outgoing.insert(id, BTreeSet::new());
        self.incoming.insert(id, BTreeSet::new());
        id
    }

    pub fn add_arc(&mut self, child: usize, parent: usize) {
        debug_assert_eq!(
            Some(self.nodes[&parent].rank),
            self.parent[self.nodes[&child].rank],
            "arcs must follow the elimination tree"
        );
        self.outgoing.get_mut(&child).unwrap().insert(parent);
        self.incoming.get_mut(&parent).unwrap().insert(child);
    }

    pub fn remove_arc(&mut self, child: usize, parent: usize) {
        self.outgoing.get_mut(&child).map(|s| s.remove(&parent));
        self.incoming.get_mut(&parent).map(|s| s.remove(&child));
    }

    pub fn remove_node(&mut self, id: usize) {
        let node = self.nodes.remove(&id).expect("node exists");
        self.rank_ids[node.rank].retain(|&x| x != id);
        for v in self.outgoing.remove(&id).unwrap_or_default() {
            self.incoming.get_mut(&v).map(|s| s.remove(&id));
        }
        for u in self.incoming.remove(&id).unwrap_or_default() {
            self.outgoing.get_mut(&u).map(|s| s.remove(&id));
        }
    }

    fn record_width(&mut self) {
        self.peak_width = self.peak_width.max(self.width());
    }

    /// Remove nodes that cannot lie on any chain: non-root nodes without
    /// outgoing arcs, and nodes missing an in-arc from some covered child
    /// rank. Deletion cascades to a fixed point.
    pub fn prune_dead(&mut self) {
        loop {
            let mut dead = Vec::new();
            for (&id, node) in &self.nodes {
                if node.rank != self.root_rank() && self.outgoing[&id].is_empty() {
                    dead.push(id);
                    continue;
                }
                for c in self.active_children(node.rank) {
                    if self.in_arcs_from_rank(id, c).is_empty() {
                        dead.push(id);
                        break;
                    }
                }
            }
            if dead.is_empty() {
                break;
            }
            for id in dead {
                self.remove_node(id);
            }
        }
    }
}

/// The induced network: one node per rank holding `F` intersected with
/// the clique's polynomial subring (literal variable-support test), arcs
/// mirroring the elimination tree.
pub fn induced_network(polys: &[Poly], cs: &ChordalStructure) -> Result<ChordalNetwork, NetError> {
    let ring = match polys.first() {
        Some(f) => f.ring,
        None => panic!("induced network needs at least one polynomial"),
    };
    assert_eq!(ring.n, cs.n());
    let mut net = ChordalNetwork::new(ring, cs.parent.clone());
    for f in polys {
        if f.is_zero() {
            continue;
        }
        if let Some(m) = f.mvar() {
            let clique = &cs.cliques[m];
            if !f.vars().iter().all(|v| clique.contains(v)) {
                return Err(NetError::UnsupportedPolynomial { poly: f.to_string() });
            }
        }
    }
    let mut ids = Vec::with_capacity(ring.n);
    for l in 0..ring.n {
        let clique: BTreeSet<usize> = cs.cliques[l].iter().copied().collect();
        let eqs: Vec<Poly> = polys
            .iter()
            .filter(|f| !f.is_zero() && f.vars().iter().all(|v| clique.contains(v)))
            .cloned()
            .collect();
        ids.push(net.add_node(l, PolySystem::new(eqs, Vec::new())));
    }
    for l in 0..ring.n {
        if let Some(p) = cs.parent[l] {
            net.add_arc(ids[l], ids[p]);
        }
    }
    net.record_width();
    Ok(net)
}

/// Replace a node by the nodes of its triangular decomposition, copying
/// all former arcs to each replacement. An empty decomposition (unit
/// ideal) deletes the node and everything that depended on it.
pub fn triangulate_node(
    net: &mut ChordalNetwork,
    id: usize,
    clique: &[usize],
    mode: Mode,
    squarefree: bool,
    budget: usize,
) -> Result<(), NetError> {
    let node = net.nodes[&id].clone();
    if node.content.eqs.is_empty() {
        return Ok(());
    }
    let rank = node.rank;
    let wrap = |source: DecompError| NetError::Backend { rank, source };
    let replacements: Vec<PolySystem> = match mode {
        Mode::Raw => return Ok(()),
        Mode::ZeroDim => {
            let sets = decomp::tri_zero_dim(&node.content.eqs, clique, squarefree, budget)
                .map_err(wrap)?;
            sets.into_iter().map(|t| PolySystem::new(t.to_vec(), Vec::new())).collect()
        }
        Mode::Monomial => decomp::tri_monomial(&node.content.eqs)
            .into_iter()
            .map(|t| PolySystem::new(t.to_vec(), Vec::new()))
            .collect(),
        Mode::Binomial => {
            let systems = decomp::tri_binomial(&node.content).map_err(wrap)?;
            systems.into_iter().map(|s| s.to_system()).collect()
        }
    };
    if replacements.len() == 1 && replacements[0] == node.content {
        return Ok(());
    }
    let ins: Vec<usize> = net.in_arcs(id).collect();
    let outs: Vec<usize> = net.out_arcs(id).collect();
    net.remove_node(id);
    for content in replacements {
        let new_id = net.add_node(rank, content);
        for &u in &ins {
            net.add_arc(u, new_id);
        }
        for &v in &outs {
            net.add_arc(new_id, v);
        }
    }
    net.prune_dead();
    Ok(())
}

/// Eliminate one triangular node into its parents: the part of the
/// content free of `x_rank` moves into a fresh copy of each parent node
/// (which inherits all the parent's other arcs), the arc is retargeted
/// to the copy, and the node keeps only its main-variable part. The
/// exhausted original parents are cleaned up by the rank-level driver.
pub fn eliminate_node(net: &mut ChordalNetwork, id: usize) {
    let node = net.nodes[&id].clone();
    let l = node.rank;
    let p = match net.parent[l] {
        Some(p) => p,
        None => return,
    };
    let keep_eqs: Vec<Poly> =
        node.content.eqs.iter().filter(|f| f.mvar() == Some(l)).cloned().collect();
    let push_eqs: Vec<Poly> =
        node.content.eqs.iter().filter(|f| f.mvar() != Some(l)).cloned().collect();
    let keep_ineqs: Vec<Poly> =
        node.content.ineqs.iter().filter(|f| f.mvar() == Some(l)).cloned().collect();
    let push_ineqs: Vec<Poly> =
        node.content.ineqs.iter().filter(|f| f.mvar() != Some(l)).cloned().collect();
    let targets: Vec<usize> = net.out_arcs(id).collect();
    for fp in targets {
        let mut eqs = net.nodes[&fp].content.eqs.clone();
        eqs.extend(push_eqs.iter().cloned());
        let mut ineqs = net.nodes[&fp].content.ineqs.clone();
        ineqs.extend(push_ineqs.iter().cloned());
        let parent_ins: Vec<usize> =
            net.in_arcs(fp).filter(|&u| net.nodes[&u].rank != l).collect();
        let parent_outs: Vec<usize> = net.out_arcs(fp).collect();
        let fresh = net.add_node(p, PolySystem::new(eqs, ineqs));
        // Retarget this arc; the copy inherits every other arc of fp.
        net.outgoing.get_mut(&id).unwrap().remove(&fp);
        net.incoming.get_mut(&fp).unwrap().remove(&id);
        net.add_arc(id, fresh);
        for u in parent_ins {
            net.add_arc(u, fresh);
        }
        for w in parent_outs {
            net.add_arc(fresh, w);
        }
    }
    net.nodes.get_mut(&id).unwrap().content = PolySystem::new(keep_eqs, keep_ineqs);
}

/// Eliminate every node of rank `l`, then drop the exhausted parent-rank
/// originals (every live parent is now a per-arc copy).
pub fn eliminate_rank(net: &mut ChordalNetwork, l: usize) {
    let p = match net.parent[l] {
        Some(p) => p,
        None => return,
    };
    let old_parents: Vec<usize> = net.rank_ids[p].clone();
    for t in net.rank_ids[l].clone() {
        eliminate_node(net, t);
    }
    for fp in old_parents {
        net.remove_node(fp);
    }
    net.prune_dead();
}

/// Merge rank-`l` nodes with identical content and identical incoming
/// arc sets, unioning their outgoing arcs.
pub fn merge_in(net: &mut ChordalNetwork, l: usize) {
    merge_rank(net, l, true);
}

/// Merge rank-`l` nodes with identical content and identical outgoing
/// arc sets, unioning their incoming arcs.
pub fn merge_out(net: &mut ChordalNetwork, l: usize) {
    merge_rank(net, l, false);
}

fn merge_rank(net: &mut ChordalNetwork, l: usize, by_incoming: bool) {
    loop {
        let mut groups: BTreeMap<(PolySystem, Vec<usize>), Vec<usize>> = BTreeMap::new();
        for &id in &net.rank_ids[l] {
            let key_arcs: Vec<usize> = if by_incoming {
                net.in_arcs(id).collect()
            } else {
                net.out_arcs(id).collect()
            };
            groups
                .entry((net.nodes[&id].content.clone(), key_arcs))
                .or_default()
                .push(id);
        }
        let mut changed = false;
        for (_, mut ids) in groups {
            if ids.len() < 2 {
                continue;
            }
            changed = true;
            ids.sort_unstable();
            let keep = ids[0];
            for &other in &ids[1..] {
                let ins: Vec<usize> = net.in_arcs(other).collect();
                let outs: Vec<usize> = net.out_arcs(other).collect();
                net.remove_node(other);
                for u in ins {
                    if net.nodes.contains_key(&u) {
                        net.add_arc(u, keep);
                    }
                }
                for v in outs {
                    if net.nodes.contains_key(&v) {
                        net.add_arc(keep, v);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Run the full triangularization: rounds `l = 0..n-1` of
/// triangulate-merge-eliminate-merge over the induced network.
///
/// In binomial mode the inequations carried through the run are removed
/// at termination and the network remerged, unless `keep_ineqs` asks for
/// the annotated form.
pub fn chordal_triangularize(
    polys: &[Poly],
    cs: &ChordalStructure,
    mode: Mode,
    squarefree: bool,
    keep_ineqs: bool,
    budget: usize,
) -> Result<ChordalNetwork, NetError> {
    let mode = if mode == Mode::Raw { Mode::sniff(polys) } else { mode };
    let mut net = induced_network(polys, cs)?;
    let n = net.n();
    for l in 0..n {
        for id in net.rank_ids[l].clone() {
            if net.nodes.contains_key(&id) {
                triangulate_node(&mut net, id, &cs.cliques[l], mode, squarefree, budget)?;
            }
        }
        merge_out(&mut net, l);
        net.record_width();
        if l < n - 1 {
            eliminate_rank(&mut net, l);
            if let Some(p) = net.parent[l] {
                merge_out(&mut net, p);
            }
        }
        merge_in(&mut net, l);
        net.record_width();
    }
    net.mode = mode;
    net.squarefree = squarefree && mode == Mode::ZeroDim;
    if mode == Mode::Binomial && !keep_ineqs {
        let mut stripped = strip_inequations(&net);
        merge_to_fixpoint(&mut stripped);
        net = stripped;
    }
    Ok(net)
}

/// Run in- and out-merges over all ranks until nothing changes. Used
/// after stripping inequations, which can make previously distinct nodes
/// identical.
pub fn merge_to_fixpoint(net: &mut ChordalNetwork) {
    loop {
        let before = (net.node_count(), net.arc_count());
        for l in net.min_rank..net.n() {
            merge_out(net, l);
            merge_in(net, l);
        }
        if (net.node_count(), net.arc_count()) == before {
            break;
        }
    }
}

/// Copy of the network with every node's inequations removed.
pub fn strip_inequations(net: &ChordalNetwork) -> ChordalNetwork {
    let mut out = net.clone();
    for node in out.nodes.values_mut() {
        node.content = PolySystem::new(node.content.eqs.clone(), Vec::new());
    }
    out
}

/// A chain: one node per covered rank, consecutive picks joined by arcs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Chain {
    /// `(rank, node id)` pairs, ascending by rank.
    pub nodes: Vec<(usize, usize)>,
}

impl Chain {
    pub fn node_at(&self, rank: usize) -> Option<usize> {
        self.nodes.iter().find(|&&(r, _)| r == rank).map(|&(_, id)| id)
    }

    /// All equations along the chain; for triangular networks this is a
    /// triangular set.
    pub fn equations(&self, net: &ChordalNetwork) -> Vec<Poly> {
        let mut out = Vec::new();
        for &(_, id) in &self.nodes {
            out.extend(net.node(id).content.eqs.iter().cloned());
        }
        out
    }

    pub fn triangular_set(&self, net: &ChordalNetwork) -> crate::decomp::TriangularSet {
        self.try_triangular_set(net).expect("chain of a triangular network")
    }

    /// `None` when the chain's equations are not a triangular set (a
    /// constant member or a duplicated main variable), which can happen
    /// on hand-written network files.
    pub fn try_triangular_set(&self, net: &ChordalNetwork) -> Option<crate::decomp::TriangularSet> {
        let mut t = crate::decomp::TriangularSet::new(net.ring);
        for f in self.equations(net) {
            let rank = f.mvar()?;
            if t.get(rank).is_some() {
                return None;
            }
            t.insert(f);
        }
        Some(t)
    }
}

/// Depth-first enumeration of all chains, deterministic order.
///
/// Ranks are assigned from the root downward; since every rank's parent
/// is larger, the parent's pick is always known when a rank is reached.
pub fn chains(net: &ChordalNetwork) -> Vec<Chain> {
    let root = net.root_rank();
    if root < net.min_rank || net.node_ids(root).is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut picks: BTreeMap<usize, usize> = BTreeMap::new();
    assign_rank(net, root as isize, &mut picks, &mut out);
    out
}

fn assign_rank(
    net: &ChordalNetwork,
    l: isize,
    picks: &mut BTreeMap<usize, usize>,
    out: &mut Vec<Chain>,
) {
    if l < net.min_rank as isize {
        out.push(Chain { nodes: picks.iter().map(|(&r, &i)| (r, i)).collect() });
        return;
    }
    let rank = l as usize;
    let candidates: Vec<usize> = if rank == net.root_rank() {
        net.node_ids(rank).to_vec()
    } else {
        match net.parent[rank] {
            Some(p) if p >= net.min_rank => match picks.get(&p) {
                Some(&pid) => net.in_arcs_from_rank(pid, rank),
                None => Vec::new(),
            },
            _ => net.node_ids(rank).to_vec(),
        }
    };
    for u in candidates {
        picks.insert(rank, u);
        assign_rank(net, l - 1, picks, out);
        picks.remove(&rank);
    }
}

/// Line-oriented text dump. Round-trips bit-exactly through `parse_network`.
pub fn print_network(net: &ChordalNetwork) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "ranks={} p={} mode={} squarefree={}\n",
        net.n(),
        net.ring.p,
        net.mode.as_str(),
        net.squarefree
    ));
    for (&id, node) in &net.nodes {
        let eqs: Vec<String> = node.content.eqs.iter().map(|f| f.to_string()).collect();
        let ineqs: Vec<String> = node.content.ineqs.iter().map(|f| f.to_string()).collect();
        out.push_str(&format!(
            "node {id} rank={} eqs={} ineqs={}\n",
            node.rank,
            eqs.join(";"),
            ineqs.join(";")
        ));
    }
    for (u, v) in net.arcs() {
        out.push_str(&format!("arc {u} {v}\n"));
    }
    out
}

/// Parse the text dump produced by `print_network`. The elimination tree
/// is reconstructed from the arc ranks.
pub fn parse_network(text: &str) -> Result<ChordalNetwork, NetError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or(NetError::Parse { line: 1, msg: "empty file".into() })?;
    let mut n = None;
    let mut p = None;
    let mut mode = Mode::Raw;
    let mut squarefree = false;
    for field in header.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| NetError::Parse {
            line: 1,
            msg: format!("bad header field '{field}'"),
        })?;
        match key {
            "ranks" => n = value.parse::<usize>().ok(),
            "p" => p = value.parse::<u64>().ok(),
            "mode" => {
                mode = Mode::from_str(value).ok_or_else(|| NetError::Parse {
                    line: 1,
                    msg: format!("unknown mode '{value}'"),
                })?
            }
            "squarefree" => squarefree = value == "true",
            _ => {
                return Err(NetError::Parse { line: 1, msg: format!("unknown header key '{key}'") })
            }
        }
    }
    let (n, p) = match (n, p) {
        (Some(n), Some(p)) if n > 0 => (n, p),
        _ => return Err(NetError::Parse { line: 1, msg: "header needs ranks=<n> p=<prime>".into() }),
    };
    if n > crate::cli::MAX_VARIABLES {
        return Err(NetError::Parse {
            line: 1,
            msg: format!("rank count {n} exceeds the supported maximum"),
        });
    }
    if !crate::gf::is_prime(p) || p < 3 || p >= crate::gf::MAX_MODULUS {
        return Err(NetError::Parse { line: 1, msg: format!("modulus {p} is not an odd prime") });
    }
    let ring = Ring::new(n, p);
    struct RawNode {
        id: usize,
        rank: usize,
        content: PolySystem,
    }
    let mut raw_nodes = Vec::new();
    let mut raw_arcs = Vec::new();
    for (lineno, line) in lines {
        let line_no = lineno + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| NetError::Parse { line: line_no, msg };
        if let Some(rest) = line.strip_prefix("node ") {
            let (id_str, rest) = rest
                .split_once(' ')
                .ok_or_else(|| err("expected 'node <id> rank=<l> eqs=... ineqs=...'".into()))?;
            let id: usize = id_str.parse().map_err(|_| err(format!("bad node id '{id_str}'")))?;
            let rest = rest
                .strip_prefix("rank=")
                .ok_or_else(|| err("expected rank=".into()))?;
            let (rank_str, rest) =
                rest.split_once(" eqs=").ok_or_else(|| err("expected eqs=".into()))?;
            let rank: usize =
                rank_str.parse().map_err(|_| err(format!("bad rank '{rank_str}'")))?;
            if rank >= n {
                return Err(err(format!("rank {rank} out of range")));
            }
            let (eqs_str, ineqs_str) =
                rest.split_once(" ineqs=").ok_or_else(|| err("expected ineqs=".into()))?;
            let parse_list = |s: &str| -> Result<Vec<Poly>, NetError> {
                s.split(';')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        parse_poly_at(ring, t, line_no)
                            .map_err(|e| err(format!("{e}")))
                    })
                    .collect()
            };
            let content = PolySystem::new(parse_list(eqs_str)?, parse_list(ineqs_str)?);
            raw_nodes.push(RawNode { id, rank, content });
        } else if let Some(rest) = line.strip_prefix("arc ") {
            let mut it = rest.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("expected 'arc <child> <parent>'".into()))?;
            let v: usize = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("expected 'arc <child> <parent>'".into()))?;
            raw_arcs.push((u, v, line_no));
        } else {
            return Err(err(format!("unrecognized line '{line}'")));
        }
    }
    // Reconstruct the elimination tree from arc ranks.
    let rank_of: BTreeMap<usize, usize> = raw_nodes.iter().map(|r| (r.id, r.rank)).collect();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for &(u, v, line_no) in &raw_arcs {
        let (ru, rv) = match (rank_of.get(&u), rank_of.get(&v)) {
            (Some(&a), Some(&b)) => (a, b),
            _ => {
                return Err(NetError::Parse {
                    line: line_no,
                    msg: format!("arc references unknown node {u} or {v}"),
                })
            }
        };
        if rv <= ru {
            return Err(NetError::Parse {
                line: line_no,
                msg: format!("arc must point from rank {ru} to a higher rank, found {rv}"),
            });
        }
        match parent[ru] {
            None => parent[ru] = Some(rv),
            Some(prev) if prev == rv => {}
            Some(prev) => {
                return Err(NetError::Parse {
                    line: line_no,
                    msg: format!("rank {ru} has conflicting parents {prev} and {rv}"),
                })
            }
        }
    }
    // Ranks without arcs (other than the root) default to the chain rule.
    for l in 0..n - 1 {
        if parent[l].is_none() {
            parent[l] = Some(l + 1);
        }
    }
    let mut net = ChordalNetwork::new(ring, parent);
    net.mode = mode;
    net.squarefree = squarefree;
    for raw in raw_nodes {
        if net.nodes.contains_key(&raw.id) {
            return Err(NetError::Parse { line: 1, msg: format!("duplicate node id {}", raw.id) });
        }
        net.nodes.insert(raw.id, Node { id: raw.id, rank: raw.rank, content: raw.content });
        net.rank_ids[raw.rank].push(raw.id);
        net.outgoing.insert(raw.id, BTreeSet::new());
        net.incoming.insert(raw.id, BTreeSet::new());
        net.next_id = net.next_id.max(raw.id.saturating_add(1));
    }
    for rank in net.rank_ids.iter_mut() {
        rank.sort_unstable();
    }
    for (u, v, _) in raw_arcs {
        net.outgoing.get_mut(&u).unwrap().insert(v);
        net.incoming.get_mut(&v).unwrap().insert(u);
    }
    net.min_rank = (0..n).find(|&l| !net.rank_ids[l].is_empty()).unwrap_or(0);
    Ok(net)
}
