//! Queries over finished chordal networks: solution counting, sampling,
//! radical membership, dimension, equidimensional parts, minimal primes.
//!
//! All of them are dynamic programs over the ranked DAG; at an
//! elimination-tree join the per-child-rank results combine by products
//! (weights), sums (shortest chains) or convolution (census vectors).

use crate::decomp::{is_prime_form, sat_generators, DecompError, Primality, TriangularSet};
use crate::gf;
use crate::network::{Chain, ChordalNetwork};
use crate::ring::{prem, subst_eval, uni_rational_roots, Poly};
use crate::rng::Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::ControlFlow;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QueryError {
    NotZeroDimensionalNetwork,
    NotTriangularNetwork,
    NonSplittingSpecialization { rank: usize },
    FieldTooSmall { p: u64, required: u64 },
    PrimalityUnknown { chain: String },
    Overflow,
    Decomp(DecompError),
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::NotZeroDimensionalNetwork => {
                write!(f, "network is not zero-dimensional (a chain passes through an empty or inequation node)")
            }
            QueryError::NotTriangularNetwork => write!(f, "network is not triangular"),
            QueryError::NonSplittingSpecialization { rank } => write!(
                f,
                "specialized polynomial at rank {rank} does not split over GF(p); retry with another prime"
            ),
            QueryError::FieldTooSmall { p, required } => {
                write!(f, "field GF({p}) too small; need at least {required} elements")
            }
            QueryError::PrimalityUnknown { chain } => {
                write!(f, "cannot certify primality of chain {chain}")
            }
            QueryError::Overflow => write!(f, "count exceeds 128 bits"),
            QueryError::Decomp(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for QueryError {}

impl From<DecompError> for QueryError {
    fn from(e: DecompError) -> Self {
        QueryError::Decomp(e)
    }
}

/// The elimination subnetwork: nodes of rank at least `l`, representing
/// the projection of the variety onto the trailing coordinates.
pub fn eliminate_below(net: &ChordalNetwork, l: usize) -> ChordalNetwork {
    let mut out = net.clone();
    for rank in 0..l.min(out.n()) {
        for id in out.node_ids(rank).to_vec() {
            out.remove_node(id);
        }
    }
    out.min_rank = out.min_rank.max(l);
    out
}

fn single_equation(net: &ChordalNetwork, id: usize) -> Result<Option<&Poly>, QueryError> {
    let node = net.node(id);
    match node.content.eqs.len() {
        0 => Ok(None),
        1 => {
            let f = &node.content.eqs[0];
            if f.mvar() == Some(node.rank) {
                Ok(Some(f))
            } else {
                Err(QueryError::NotTriangularNetwork)
            }
        }
        _ => Err(QueryError::NotTriangularNetwork),
    }
}

/// Per-node subtree weights: the number of closure points of the subtree
/// below each node, by `w = mdeg * prod over child ranks of (sum of child
/// weights)`.
fn subtree_weights(net: &ChordalNetwork) -> Result<BTreeMap<usize, u128>, QueryError> {
    let mut w: BTreeMap<usize, u128> = BTreeMap::new();
    for rank in net.min_rank..net.n() {
        for &id in net.node_ids(rank) {
            let node = net.node(id);
            if !node.content.ineqs.is_empty() {
                return Err(QueryError::NotZeroDimensionalNetwork);
            }
            let f = single_equation(net, id)?.ok_or(QueryError::NotZeroDimensionalNetwork)?;
            let mut acc: u128 = f.mdeg() as u128;
            for c in net.active_children(rank) {
                let mut s: u128 = 0;
                for u in net.in_arcs_from_rank(id, c) {
                    s = s.checked_add(w[&u]).ok_or(QueryError::Overflow)?;
                }
                acc = acc.checked_mul(s).ok_or(QueryError::Overflow)?;
            }
            w.insert(id, acc);
        }
    }
    Ok(w)
}

/// Result of a solution count; `exact` is false when the network was not
/// built squarefree, in which case the value is only an upper bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ZeroCount {
    pub value: u128,
    pub exact: bool,
}

/// Number of solutions over the algebraic closure, by the per-arc
/// dynamic program over main degrees.
pub fn zero_count(net: &ChordalNetwork) -> Result<ZeroCount, QueryError> {
    let w = subtree_weights(net)?;
    let mut total: u128 = 0;
    for &id in net.node_ids(net.root_rank()) {
        total = total.checked_add(w[&id]).ok_or(QueryError::Overflow)?;
    }
    Ok(ZeroCount { value: total, exact: net.squarefree })
}

/// Per-rank weight vectors (ascending node id), for reports.
pub fn weight_vectors(net: &ChordalNetwork) -> Result<Vec<Vec<u128>>, QueryError> {
    let w = subtree_weights(net)?;
    Ok((0..net.n())
        .map(|rank| net.node_ids(rank).iter().map(|id| w[id]).collect())
        .collect())
}

/// Uniformly sample a rational point of the variety. Requires every
/// specialized node polynomial along the walk to split completely over
/// GF(p); the weights make node choices proportional to subtree counts.
pub fn sample(net: &ChordalNetwork, rng: &mut Rng) -> Result<Vec<u64>, QueryError> {
    let w = subtree_weights(net)?;
    let n = net.n();
    let mut point = vec![0u64; n];
    let root = net.root_rank();
    let total: u128 = net.node_ids(root).iter().map(|id| w[id]).sum();
    if total == 0 {
        return Err(QueryError::NotZeroDimensionalNetwork);
    }
    let root_id = pick_weighted(net.node_ids(root), &w, rng);
    let mut stack = vec![root_id];
    while let Some(id) = stack.pop() {
        let node = net.node(id);
        let rank = node.rank;
        let f = single_equation(net, id)?.expect("checked by weights");
        // All non-main variables are ancestors, already assigned.
        let mut g = f.clone();
        for v in f.vars() {
            if v != rank {
                g = subst_eval(&g, v, point[v]);
            }
        }
        if g.is_zero() {
            // Degenerate specialization; cannot pick a root uniformly.
            return Err(QueryError::NonSplittingSpecialization { rank });
        }
        let roots = uni_rational_roots(&g);
        if roots.len() < f.mdeg() as usize {
            return Err(QueryError::NonSplittingSpecialization { rank });
        }
        point[rank] = roots[rng.below(roots.len() as u64) as usize];
        for c in net.active_children(rank) {
            let sources = net.in_arcs_from_rank(id, c);
            stack.push(pick_weighted(&sources, &w, rng));
        }
    }
    Ok(point)
}

fn pick_weighted(ids: &[usize], w: &BTreeMap<usize, u128>, rng: &mut Rng) -> usize {
    let total: u128 = ids.iter().map(|id| w[id]).sum();
    debug_assert!(total > 0);
    let mut ticket = below_u128(rng, total);
    for &id in ids {
        if ticket < w[&id] {
            return id;
        }
        ticket -= w[&id];
    }
    *ids.last().unwrap()
}

fn below_u128(rng: &mut Rng, bound: u128) -> u128 {
    if bound <= u64::MAX as u128 {
        return rng.below(bound as u64) as u128;
    }
    let zone = u128::MAX - u128::MAX % bound;
    loop {
        let v = ((rng.next_u64() as u128) << 64) | rng.next_u64() as u128;
        if v < zone {
            return v % bound;
        }
    }
}

/// Monte Carlo radical-membership test: does `h` vanish on the variety
/// of the network? `True` answers are wrong with probability at most
/// `2^-trials`; `False` answers are certificates.
pub fn radical_member(
    net: &ChordalNetwork,
    h: &Poly,
    trials: u32,
    rng: &mut Rng,
) -> Result<bool, QueryError> {
    let n = net.n();
    let p = net.ring.p;
    let mut q: u64 = 1;
    for rank in net.min_rank..n {
        if net.node_ids(rank).is_empty() {
            // Empty network: the variety is empty, everything vanishes.
            return Ok(true);
        }
        for &id in net.node_ids(rank) {
            if let Some(f) = single_equation(net, id)? {
                q = q.max(f.mdeg() as u64);
            }
        }
    }
    let required = 2 * n as u64 * q;
    if p < required {
        return Err(QueryError::FieldTooSmall { p, required });
    }
    if h.is_zero() {
        return Ok(true);
    }
    let ancestors_of = |rank: usize| -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        let mut cur = Some(rank);
        while let Some(r) = cur {
            set.insert(r);
            cur = net.parent[r];
        }
        set
    };
    // Splitting h by main variable is only coherent when reductions are
    // plain divisions: pseudo-division by a non-monic node scales each
    // piece by a different initial power, which would break cancellation
    // between the pieces. Monic networks take the per-rank split; others
    // carry h whole from its main variable's rank when h lives on that
    // path; anything else is answered exactly, chain by chain.
    let all_monic = (net.min_rank..net.n()).all(|rank| {
        net.node_ids(rank).iter().all(|&id| {
            net.node(id)
                .content
                .eqs
                .first()
                .map(|f| f.initial().is_constant())
                .unwrap_or(true)
        })
    });
    let mut buckets: BTreeMap<usize, Poly> = BTreeMap::new();
    if all_monic {
        for (m, c) in h.terms_desc() {
            let rank = m.vars().next().unwrap_or(net.root_rank());
            let rank = rank.max(net.min_rank);
            buckets
                .entry(rank)
                .or_insert_with(|| Poly::zero(net.ring))
                .add_term(m.clone(), c);
        }
    } else {
        let rank = h.mvar().unwrap_or(net.root_rank()).max(net.min_rank);
        buckets.insert(rank, h.clone());
    }
    let on_paths = buckets.iter().all(|(&rank, part)| {
        let ancestors = ancestors_of(rank);
        part.vars().iter().all(|v| ancestors.contains(v))
    });
    if !on_paths {
        for chain in crate::network::chains(net) {
            let t = chain
                .try_triangular_set(net)
                .ok_or(QueryError::NotTriangularNetwork)?;
            if !t.prem(h).is_zero() {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    for _ in 0..trials {
        if !member_trial(net, &buckets, rng)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn member_trial(
    net: &ChordalNetwork,
    buckets: &BTreeMap<usize, Poly>,
    rng: &mut Rng,
) -> Result<bool, QueryError> {
    let p = net.ring.p;
    let mut acc: BTreeMap<usize, Poly> = BTreeMap::new();
    for (&rank, part) in buckets {
        for &id in net.node_ids(rank) {
            acc.insert(id, part.clone());
        }
    }
    for rank in net.min_rank..net.n() {
        let point = rng.field_element(p);
        let mut outputs: BTreeMap<usize, Poly> = BTreeMap::new();
        for &id in net.node_ids(rank) {
            let mut value = match acc.remove(&id) {
                Some(v) => v,
                None => Poly::zero(net.ring),
            };
            if !value.is_zero() {
                if let Some(f) = single_equation(net, id)? {
                    value = prem(&value, f);
                }
                value = subst_eval(&value, rank, point);
            }
            outputs.insert(id, value);
        }
        if rank == net.root_rank() {
            return Ok(outputs.values().all(|v| v.is_zero()));
        }
        // Push into parents with an affine combination per receiving node.
        let parent_rank = net.parent[rank].expect("non-root rank has a parent");
        for &v in net.node_ids(parent_rank) {
            let sources = net.in_arcs_from_rank(v, rank);
            if sources.is_empty() {
                continue;
            }
            let scalars = affine_scalars(sources.len(), p, rng);
            let mut sum = Poly::zero(net.ring);
            for (u, r) in sources.iter().zip(scalars) {
                sum = &sum + &outputs[u].scale(r);
            }
            let entry = acc.entry(v).or_insert_with(|| Poly::zero(net.ring));
            *entry = &*entry + &sum;
        }
    }
    unreachable!("root rank returns inside the loop")
}

/// Random scalars summing to one (the affine-combination normalization).
fn affine_scalars(k: usize, p: u64, rng: &mut Rng) -> Vec<u64> {
    loop {
        let raw: Vec<u64> = (0..k).map(|_| rng.field_element(p)).collect();
        let sum = raw.iter().fold(0u64, |a, &b| gf::add(a, b, p));
        if sum == 0 {
            continue;
        }
        let inv = gf::inv(sum, p);
        return raw.into_iter().map(|r| gf::mul(r, inv, p)).collect();
    }
}

/// Number of equations a node contributes to a chain's cardinality.
fn eq_count(net: &ChordalNetwork, id: usize) -> usize {
    net.node(id).content.eqs.len()
}

/// Shortest-chain lengths per node (number of equation-carrying nodes in
/// the best subtree selection through this node).
fn shortest(net: &ChordalNetwork) -> BTreeMap<usize, usize> {
    let mut ell: BTreeMap<usize, usize> = BTreeMap::new();
    for rank in net.min_rank..net.n() {
        for &id in net.node_ids(rank) {
            let mut acc = eq_count(net, id);
            for c in net.active_children(rank) {
                let m = net
                    .in_arcs_from_rank(id, c)
                    .iter()
                    .map(|u| ell[u])
                    .min()
                    .unwrap_or(UNREACHABLE);
                acc = acc.saturating_add(m);
            }
            ell.insert(id, acc);
        }
    }
    ell
}

/// Sentinel length for nodes with no selectable subtree; saturating
/// arithmetic keeps sums of sentinels from wrapping on malformed input.
const UNREACHABLE: usize = usize::MAX / 4;

/// Ambient coordinate count covered by the network.
fn ambient(net: &ChordalNetwork) -> usize {
    net.n() - net.min_rank
}

/// Dimension of the represented variety: ambient dimension minus the
/// minimum chain cardinality.
pub fn dimension(net: &ChordalNetwork) -> usize {
    let ell = shortest(net);
    let best = net
        .node_ids(net.root_rank())
        .iter()
        .map(|id| ell[id])
        .min()
        .unwrap_or(0);
    ambient(net).saturating_sub(best)
}

/// Exact chain counts per dimension.
pub fn dim_census(net: &ChordalNetwork) -> BTreeMap<usize, u128> {
    let cv = census_vectors(net);
    let mut out: BTreeMap<usize, u128> = BTreeMap::new();
    for &id in net.node_ids(net.root_rank()) {
        for (k, &count) in cv[&id].iter().enumerate() {
            if count > 0 {
                let entry = out.entry(ambient(net).saturating_sub(k)).or_insert(0);
                *entry = entry.saturating_add(count);
            }
        }
    }
    out
}

/// Per-node census vectors: entry `k` counts subtree selections through
/// the node with exactly `k` equation-carrying members.
fn census_vectors(net: &ChordalNetwork) -> BTreeMap<usize, Vec<u128>> {
    let mut cv: BTreeMap<usize, Vec<u128>> = BTreeMap::new();
    for rank in net.min_rank..net.n() {
        for &id in net.node_ids(rank) {
            let mut acc = vec![1u128];
            for c in net.active_children(rank) {
                let mut summed: Vec<u128> = Vec::new();
                for u in net.in_arcs_from_rank(id, c) {
                    add_into(&mut summed, &cv[&u]);
                }
                acc = convolve(&acc, &summed);
            }
            let shift = eq_count(net, id);
            let mut shifted = vec![0u128; shift];
            shifted.extend(acc);
            cv.insert(id, shifted);
        }
    }
    cv
}

// Census counts saturate instead of overflowing: chain counts grow like
// Fibonacci numbers in the rank count, so very long networks exceed any
// fixed width.
fn add_into(target: &mut Vec<u128>, src: &[u128]) {
    if target.len() < src.len() {
        target.resize(src.len(), 0);
    }
    for (t, &s) in target.iter_mut().zip(src) {
        *t = t.saturating_add(s);
    }
}

fn convolve(a: &[u128], b: &[u128]) -> Vec<u128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j].saturating_add(x.saturating_mul(y));
        }
    }
    out
}

/// Total number of chains (the census totalled over dimensions).
pub fn chain_count(net: &ChordalNetwork) -> u128 {
    dim_census(net).values().fold(0u128, |a, &b| a.saturating_add(b))
}

/// The subnetwork of arcs and nodes lying on some minimum-cardinality
/// chain: the top-dimensional part.
pub fn top_component(net: &ChordalNetwork) -> ChordalNetwork {
    let ell = shortest(net);
    let root = net.root_rank();
    let global = match net.node_ids(root).iter().map(|id| ell[id]).min() {
        Some(m) => m,
        None => return net.clone(),
    };
    // Upward slack: best completion above each node.
    let mut up: BTreeMap<usize, usize> = BTreeMap::new();
    for &id in net.node_ids(root) {
        up.insert(id, 0);
    }
    for rank in (net.min_rank..root).rev() {
        for &id in net.node_ids(rank) {
            let mut best = UNREACHABLE;
            for v in net.out_arcs(id) {
                let vnode = net.node(v);
                let mut through = eq_count(net, v).saturating_add(up[&v]);
                for c in net.active_children(vnode.rank) {
                    if c == rank {
                        continue;
                    }
                    let m = net
                        .in_arcs_from_rank(v, c)
                        .iter()
                        .map(|u| ell[u])
                        .min()
                        .unwrap_or(UNREACHABLE);
                    through = through.saturating_add(m);
                }
                best = best.min(through);
            }
            up.insert(id, best);
        }
    }
    let mut out = net.clone();
    // Drop root nodes off the optimum, then arcs that cannot lie on a
    // minimal chain.
    for &id in net.node_ids(root) {
        if ell[&id] != global {
            out.remove_node(id);
        }
    }
    for (u, v) in net.arcs() {
        if !out.node_ids(net.node(u).rank).contains(&u) {
            continue;
        }
        let vnode = net.node(v);
        let mut through = ell[&u].saturating_add(eq_count(net, v)).saturating_add(up[&v]);
        for c in net.active_children(vnode.rank) {
            if c == net.node(u).rank {
                continue;
            }
            let m = net
                .in_arcs_from_rank(v, c)
                .iter()
                .map(|u| ell[u])
                .min()
                .unwrap_or(UNREACHABLE);
            through = through.saturating_add(m);
        }
        if through != global {
            out.remove_arc(u, v);
        }
    }
    out.prune_dead();
    out
}

/// Visit every chain of cardinality `k`, lazily, with early exit.
fn for_each_chain_of_cardinality(
    net: &ChordalNetwork,
    k: usize,
    f: &mut dyn FnMut(Chain) -> ControlFlow<()>,
) {
    let cv = census_vectors(net);
    let mut picks: BTreeMap<usize, usize> = BTreeMap::new();
    let root = net.root_rank();
    if root < net.min_rank {
        return;
    }
    // Budgets per pending node: how many equation nodes its subtree must
    // still contribute.
    fn walk(
        net: &ChordalNetwork,
        cv: &BTreeMap<usize, Vec<u128>>,
        stack: &mut Vec<(usize, usize)>, // (node, subtree budget)
        picks: &mut BTreeMap<usize, usize>,
        f: &mut dyn FnMut(Chain) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (id, budget) = match stack.pop() {
            Some(top) => top,
            None => {
                let chain = Chain { nodes: picks.iter().map(|(&r, &i)| (r, i)).collect() };
                return f(chain);
            }
        };
        let rank = net.node(id).rank;
        picks.insert(rank, id);
        let remaining = budget - eq_count(net, id).min(budget);
        if eq_count(net, id) > budget {
            picks.remove(&rank);
            stack.push((id, budget));
            return ControlFlow::Continue(());
        }
        let children = net.active_children(rank);
        let result = assign_children(net, cv, &children, 0, id, remaining, stack, picks, f);
        picks.remove(&rank);
        stack.push((id, budget));
        result
    }
    #[allow(clippy::too_many_arguments)]
    fn assign_children(
        net: &ChordalNetwork,
        cv: &BTreeMap<usize, Vec<u128>>,
        children: &[usize],
        idx: usize,
        parent: usize,
        remaining: usize,
        stack: &mut Vec<(usize, usize)>,
        picks: &mut BTreeMap<usize, usize>,
        f: &mut dyn FnMut(Chain) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if idx == children.len() {
            if remaining != 0 {
                return ControlFlow::Continue(());
            }
            return walk(net, cv, stack, picks, f);
        }
        let c = children[idx];
        for u in net.in_arcs_from_rank(parent, c) {
            let vec = &cv[&u];
            for take in 0..=remaining.min(vec.len().saturating_sub(1)) {
                if vec.get(take).copied().unwrap_or(0) == 0 {
                    continue;
                }
                stack.push((u, take));
                let r = assign_children(
                    net,
                    cv,
                    children,
                    idx + 1,
                    parent,
                    remaining - take,
                    stack,
                    picks,
                    f,
                );
                stack.pop();
                if r.is_break() {
                    return r;
                }
            }
        }
        ControlFlow::Continue(())
    }
    for &rid in net.node_ids(root) {
        if cv[&rid].get(k).copied().unwrap_or(0) == 0 {
            continue;
        }
        let mut stack = vec![(rid, k)];
        if walk(net, &cv, &mut stack, &mut picks, f).is_break() {
            return;
        }
    }
}

/// All chains of the stated dimension, in deterministic order.
pub fn isolate_dim(net: &ChordalNetwork, d: isize) -> Vec<Chain> {
    let amb = ambient(net) as isize;
    if d < 0 || d > amb {
        return Vec::new();
    }
    let k = (amb - d) as usize;
    let mut out = Vec::new();
    for_each_chain_of_cardinality(net, k, &mut |chain| {
        out.push(chain);
        ControlFlow::Continue(())
    });
    out
}

/// One minimal prime of the represented ideal.
#[derive(Clone, Debug)]
pub struct MinimalPrime {
    pub dimension: usize,
    pub basis: Vec<Poly>,
    pub chain: TriangularSet,
}

/// Minimal primes by decreasing dimension: iterate chains, gate them
/// through the structural primality test, discard chains whose saturated
/// ideal contains an earlier prime, and emit Groebner bases of the rest.
pub fn minimal_primes(
    net: &ChordalNetwork,
    max_count: Option<usize>,
    min_dim: Option<usize>,
    budget: usize,
) -> Result<Vec<MinimalPrime>, QueryError> {
    let census = dim_census(net);
    let mut dims: Vec<usize> = census.keys().copied().collect();
    dims.sort_unstable_by(|a, b| b.cmp(a));
    let amb = ambient(net);
    let mut found: Vec<MinimalPrime> = Vec::new();
    let mut failure: Option<QueryError> = None;
    for d in dims {
        if let Some(floor) = min_dim {
            if d < floor {
                break;
            }
        }
        if max_count.map(|m| found.len() >= m).unwrap_or(false) {
            break;
        }
        let k = amb - d;
        let mut stop = false;
        for_each_chain_of_cardinality(net, k, &mut |chain| {
            let t = match chain.try_triangular_set(net) {
                Some(t) => t,
                None => {
                    failure = Some(QueryError::NotTriangularNetwork);
                    stop = true;
                    return ControlFlow::Break(());
                }
            };
            match is_prime_form(&t) {
                Primality::Prime => {}
                Primality::Unknown => {
                    failure = Some(QueryError::PrimalityUnknown { chain: t.to_string() });
                    stop = true;
                    return ControlFlow::Break(());
                }
            }
            let contained = found
                .iter()
                .any(|prime| prime.basis.iter().all(|g| t.prem(g).is_zero()));
            if !contained {
                match sat_generators(&t, budget) {
                    Ok(basis) => found.push(MinimalPrime { dimension: d, basis, chain: t }),
                    Err(e) => {
                        failure = Some(QueryError::Decomp(e));
                        stop = true;
                        return ControlFlow::Break(());
                    }
                }
            }
            if max_count.map(|m| found.len() >= m).unwrap_or(false) {
                stop = true;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if stop {
            break;
        }
    }
    Ok(found)
}
