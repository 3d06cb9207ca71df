//! Zero-dimensional triangular decomposition.
//!
//! A lex Groebner basis is split from the smallest variable upward into
//! monic triangular towers. Whenever a leading coefficient turns out to
//! be a zero divisor modulo the partial tower, the tower is split by the
//! corresponding gcd factor pair and both branches continue (D5-style
//! case analysis), which keeps the output varieties pairwise disjoint.

use super::{DecompError, TriangularSet};
use crate::ring::{buchberger_lex, normal_form, Monomial, Poly, RingError};
use std::collections::BTreeMap;

/// Monic triangular tower over a subset of variables, every member fully
/// reduced modulo the deeper ones. Leading monomials are pure powers, so
/// `normal_form` by the tower is canonical reduction.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Tower {
    polys: BTreeMap<usize, Poly>,
}

impl Tower {
    fn new() -> Tower {
        Tower { polys: BTreeMap::new() }
    }

    fn members(&self) -> Vec<Poly> {
        self.polys.values().cloned().collect()
    }

    fn reduce(&self, f: &Poly) -> Poly {
        if self.polys.is_empty() {
            return f.clone();
        }
        normal_form(f, &self.members())
    }

    /// Replace the polynomial at `var` and re-reduce shallower members.
    fn replace(&self, var: usize, poly: Poly) -> Tower {
        let mut t = Tower { polys: self.polys.clone() };
        t.polys.insert(var, poly);
        // Renormalize members above `var` (smaller indices), deepest first.
        let shallower: Vec<usize> =
            t.polys.keys().copied().filter(|&v| v < var).collect();
        for &v in shallower.iter().rev() {
            let f = t.polys.remove(&v).unwrap();
            let r = t.reduce(&f);
            t.polys.insert(v, r);
        }
        t
    }

    fn extend(&self, var: usize, poly: Poly) -> Tower {
        debug_assert!(!self.polys.contains_key(&var));
        let mut t = Tower { polys: self.polys.clone() };
        t.polys.insert(var, poly);
        t
    }
}

/// Result of a quasi-inversion: on each branch the element is either
/// invertible (with its inverse) or identically zero.
type Branches<T> = Vec<(Tower, T)>;

/// The strictly deeper part of a tower: entries for variables with index
/// greater than `z`. Work in the variable `z` must reduce only against
/// these, never against a `z` entry itself.
fn deeper_of(tw: &Tower, z: usize) -> Tower {
    Tower {
        polys: tw.polys.iter().filter(|(&v, _)| v > z).map(|(&v, f)| (v, f.clone())).collect(),
    }
}

/// Division with quotient by a divisor monic in `z` (its `z`-leading
/// coefficient is literally 1). No inversions are needed. Reduction uses
/// only the part of the tower deeper than `z`.
fn divmod_monic(f: &Poly, g: &Poly, z: usize, tw: &Tower) -> (Poly, Poly) {
    let tw = deeper_of(tw, z);
    let ring = f.ring;
    let e = g.degree_in(z);
    debug_assert_eq!(g.coeff_of(z, e).constant_value(), Some(1));
    let mut r = tw.reduce(f);
    let mut q = Poly::zero(ring);
    loop {
        let d = r.degree_in(z);
        if r.is_zero() || d < e {
            break;
        }
        let lc = r.coeff_of(z, d);
        let term = lc.mul_monomial(&Monomial::var(ring.n, z, d - e));
        q = &q + &term;
        r = tw.reduce(&(&r - &(&term * g)));
    }
    (q, r)
}

/// Extended gcd of `a` and `b` as univariate polynomials in `z` over the
/// tower: returns branches `(tower, g, s)` with `g` monic (or zero) and
/// `g = s*a mod <b> + tower ideal` on that branch.
///
/// The Euclid runs over the strictly deeper part of the tower (larger
/// variable indices than `z`); entries at or above `z` ride along and
/// are merged back into the refined branch towers.
fn egcd(
    a: &Poly,
    b: &Poly,
    z: usize,
    tw: &Tower,
    sf_guard: bool,
) -> Result<Vec<(Tower, Poly, Poly)>, DecompError> {
    let deeper = deeper_of(tw, z);
    let shallow: Vec<(usize, Poly)> =
        tw.polys.iter().filter(|(&v, _)| v <= z).map(|(&v, f)| (v, f.clone())).collect();
    let branches = egcd_deeper(a, b, z, &deeper, sf_guard)?;
    Ok(branches
        .into_iter()
        .map(|(refined, g, s)| {
            let mut merged = refined;
            // Re-attach the entries at or above z, deepest first, keeping
            // them reduced against the refined base.
            for (v, f) in shallow.iter().rev() {
                let r = merged.reduce(f);
                merged.polys.insert(*v, r);
            }
            (merged, g, s)
        })
        .collect())
}

fn egcd_deeper(
    a: &Poly,
    b: &Poly,
    z: usize,
    tw: &Tower,
    sf_guard: bool,
) -> Result<Vec<(Tower, Poly, Poly)>, DecompError> {
    let ring = a.ring;
    let mut out = Vec::new();
    // State: (tower, r0, s0, r1, s1) with r_i = s_i * a modulo <b>.
    let mut stack = vec![(
        tw.clone(),
        tw.reduce(a),
        Poly::one(ring),
        tw.reduce(b),
        Poly::zero(ring),
    )];
    while let Some((tw, r0, s0, r1, s1)) = stack.pop() {
        if r1.is_zero() {
            // Normalize the leading coefficient of r0, splitting as needed.
            if r0.is_zero() {
                out.push((tw, Poly::zero(ring), Poly::zero(ring)));
                continue;
            }
            let d = r0.degree_in(z);
            let lc = r0.coeff_of(z, d);
            for (tw2, inv) in quasi_inv(&lc, &tw, sf_guard)? {
                match inv {
                    Some(inv) => {
                        let g = tw2.reduce(&(&r0 * &inv));
                        let s = tw2.reduce(&(&s0 * &inv));
                        out.push((tw2, g, s));
                    }
                    None => {
                        // Drop the vanished leading block and retry.
                        let dropped = &r0 - &lc.mul_monomial(&Monomial::var(ring.n, z, d));
                        stack.push((tw2.clone(), tw2.reduce(&dropped), s0.clone(), Poly::zero(ring), s1.clone()));
                    }
                }
            }
            continue;
        }
        if r0.degree_in(z) < r1.degree_in(z) {
            stack.push((tw, r1, s1, r0, s0));
            continue;
        }
        let d1 = r1.degree_in(z);
        let lc1 = r1.coeff_of(z, d1);
        for (tw2, inv) in quasi_inv(&lc1, &tw, sf_guard)? {
            match inv {
                Some(inv) => {
                    let r1m = tw2.reduce(&(&r1 * &inv));
                    let s1m = tw2.reduce(&(&s1 * &inv));
                    let (q, r) = divmod_monic(&r0, &r1m, z, &tw2);
                    let s = tw2.reduce(&(&s0 - &(&q * &s1m)));
                    stack.push((tw2, r1m, s1m, r, s));
                }
                None => {
                    let dropped = &r1 - &lc1.mul_monomial(&Monomial::var(ring.n, z, d1));
                    stack.push((
                        tw2.clone(),
                        tw2.reduce(&r0),
                        s0.clone(),
                        tw2.reduce(&dropped),
                        s1.clone(),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Quasi-inverse of `c` modulo the tower. Branches where `c` vanishes
/// yield `None`; elsewhere `Some(c^-1)`. Splits the tower when `c` is a
/// zero divisor. With `sf_guard`, non-squarefree tower members are
/// replaced by their squarefree parts before a degenerate split (shared
/// roots between gcd and cofactor), keeping branch varieties disjoint.
fn quasi_inv(c: &Poly, tw: &Tower, sf_guard: bool) -> Result<Branches<Option<Poly>>, DecompError> {
    let c = tw.reduce(c);
    if c.is_zero() {
        return Ok(vec![(tw.clone(), None)]);
    }
    if let Some(v) = c.constant_value() {
        return Ok(vec![(tw.clone(), Some(Poly::constant(c.ring, crate::gf::inv(v, c.ring.p))))]);
    }
    let z = c.mvar().expect("non-constant");
    let tz = tw
        .polys
        .get(&z)
        .unwrap_or_else(|| panic!("variable x{z} not in tower"))
        .clone();
    let mut out = Vec::new();
    for (tw2, g, s) in egcd(&c, &tz, z, tw, sf_guard)? {
        let dg = g.degree_in(z);
        let dtz = tw2.polys[&z].degree_in(z);
        if g.is_zero() {
            out.push((tw2, None));
        } else if dg == 0 {
            // gcd is 1: s is the inverse of c modulo tz.
            out.push((tw2.clone(), Some(tw2.reduce(&s))));
        } else if dg == dtz {
            out.push((tw2, None));
        } else {
            // Proper split tz = g * h.
            let tz2 = tw2.polys[&z].clone();
            let (h, rem) = divmod_monic(&tz2, &g, z, &tw2);
            debug_assert!(deeper_of(&tw2, z).reduce(&rem).is_zero(), "inexact tower split");
            if sf_guard && !shared_roots_empty(&g, &h, z, &tw2)? {
                // Degenerate (multiplicity) split: refine tz to its
                // squarefree part, which preserves the branch variety,
                // then retry.
                for (tw3, tz_sf) in squarefree_over(&tz2, z, &tw2)? {
                    let refined = tw3.replace(z, tz_sf);
                    out.extend(quasi_inv(&c, &refined, sf_guard)?);
                }
                continue;
            }
            for branch in [g.clone(), h] {
                if branch.degree_in(z) == 0 {
                    continue;
                }
                let refined = tw2.replace(z, branch);
                out.extend(quasi_inv(&c, &refined, sf_guard)?);
            }
        }
    }
    Ok(out)
}

/// Do `g` and `h` (monic in `z`) share roots over every branch? Returns
/// true only if the shared-root locus is empty on all branches.
fn shared_roots_empty(g: &Poly, h: &Poly, z: usize, tw: &Tower) -> Result<bool, DecompError> {
    for (_, d) in gcd_pair(g, h, z, tw)? {
        if d.degree_in(z) > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic gcd (no Bezout data) of two polynomials in `z` over the tower.
fn gcd_pair(a: &Poly, b: &Poly, z: usize, tw: &Tower) -> Result<Branches<Poly>, DecompError> {
    Ok(egcd(a, b, z, tw, true)?
        .into_iter()
        .map(|(tw, g, _)| (tw, g))
        .collect())
}

/// Squarefree part of `g` (monic in `z`) over the tower: `g / gcd(g, g')`.
///
/// In characteristic p this drops factors of multiplicity divisible by
/// p, which happens only when the derivative vanishes or the gcd reaches
/// degree p; both cases raise `InseparableDegree` instead of silently
/// losing roots.
fn squarefree_over(g: &Poly, z: usize, tw: &Tower) -> Result<Branches<Poly>, DecompError> {
    let p = g.ring.p;
    let d = g.degree_in(z);
    let dg = g.derivative(z);
    if dg.is_zero() {
        return Err(DecompError::Ring(RingError::InseparableDegree { degree: d, p }));
    }
    let mut out = Vec::new();
    for (tw2, common) in gcd_pair(g, &dg, z, tw)? {
        let g2 = deeper_of(&tw2, z).reduce(g);
        let dc = common.degree_in(z);
        if dc == 0 {
            out.push((tw2, g2));
            continue;
        }
        if dc as u64 >= p {
            return Err(DecompError::Ring(RingError::InseparableDegree { degree: d, p }));
        }
        // Exact division g / common; the divisor is monic in z.
        let (q, rem) = divmod_monic(&g2, &common, z, &tw2);
        debug_assert!(deeper_of(&tw2, z).reduce(&rem).is_zero(), "inexact squarefree division");
        out.push((tw2, q));
    }
    Ok(out)
}

/// Fold a monic gcd over several generators of the same main variable.
/// Branches where the gcd collapses to a unit mark an inconsistent
/// (empty-variety) branch and yield `None`.
fn gcd_many(gens: &[Poly], z: usize, tw: &Tower, sf_guard: bool) -> Result<Branches<Option<Poly>>, DecompError> {
    let mut states: Branches<Option<Poly>> = vec![(tw.clone(), None)];
    for gen in gens {
        let mut next = Vec::new();
        for (tw, acc) in states {
            let g = tw.reduce(gen);
            if g.is_zero() {
                next.push((tw, acc));
                continue;
            }
            if g.degree_in(z) == 0 {
                // Constraint free of z: consistent only where it vanishes.
                for (tw2, inv) in quasi_inv(&g, &tw, sf_guard)? {
                    if inv.is_none() {
                        next.push((tw2, acc.clone()));
                    }
                    // Invertible branches are inconsistent: drop them.
                }
                continue;
            }
            match acc {
                None => next.push((tw, Some(g))),
                Some(acc) => {
                    for (tw2, d, _) in egcd(&acc, &g, z, &tw, sf_guard)? {
                        if d.is_zero() {
                            next.push((tw2, None));
                        } else if d.degree_in(z) == 0 {
                            // Unit ideal on this branch: no points.
                        } else {
                            next.push((tw2, Some(d)));
                        }
                    }
                }
            }
        }
        states = next;
    }
    Ok(states)
}

/// Zero-dimensional triangular decomposition of the ideal generated by
/// `gens` in the polynomial ring on `clique` variables.
///
/// Returns pairwise-disjoint monic triangular sets covering the variety;
/// the empty list signals the unit ideal. With `squarefree`, every
/// output generates a radical ideal.
pub fn tri_zero_dim(
    gens: &[Poly],
    clique: &[usize],
    squarefree: bool,
    budget: usize,
) -> Result<Vec<TriangularSet>, DecompError> {
    let ring = match gens.first() {
        Some(g) => g.ring,
        None => return Ok(Vec::new()),
    };
    let gb = buchberger_lex(gens, budget)?;
    if gb.iter().any(|f| f.is_constant() && !f.is_zero()) {
        return Ok(Vec::new());
    }
    // Zero-dimensionality: every clique variable needs a pure-power head.
    for &v in clique {
        let has_head = gb.iter().any(|f| {
            let lm = f.leading_monomial().unwrap();
            lm.0[v] > 0 && lm.vars().all(|u| u == v)
        });
        if !has_head {
            return Err(DecompError::NotZeroDimensional { variable: v });
        }
    }
    // Fold generators per variable, smallest variable first. The raw
    // generators ride along with the basis so that their initials steer
    // the case splits.
    let mut vars: Vec<usize> = clique.to_vec();
    vars.sort_unstable();
    let mut towers = vec![Tower::new()];
    for &v in vars.iter().rev() {
        let mut gens_v: Vec<Poly> = gb
            .iter()
            .chain(gens.iter())
            .filter(|f| f.mvar() == Some(v))
            .map(|f| f.monic())
            .collect();
        gens_v.sort_by(|a, b| {
            b.degree_in(v)
                .cmp(&a.degree_in(v))
                .then_with(|| b.cmp(a))
        });
        gens_v.dedup();
        assert!(!gens_v.is_empty(), "zero-dimensional check guaranteed a head for x{v}");
        let mut next = Vec::new();
        for tw in towers {
            for (tw2, acc) in gcd_many(&gens_v, v, &tw, true)? {
                let g = match acc {
                    Some(g) => g,
                    None => {
                        // All generators vanished on this branch; the
                        // pure-power head cannot vanish, so this branch
                        // is unreachable.
                        unreachable!("no generator left for x{v}")
                    }
                };
                if squarefree {
                    for (tw3, g_sf) in squarefree_over(&g, v, &tw2)? {
                        next.push(tw3.extend(v, tw3.reduce(&g_sf)));
                    }
                } else {
                    next.push(tw2.extend(v, g));
                }
            }
        }
        towers = next;
    }
    let mut sets: Vec<TriangularSet> = towers
        .into_iter()
        .map(|tw| TriangularSet::from_polys(ring, tw.polys.into_values()))
        .collect();
    sets.sort_by(|a, b| b.cmp(a));
    Ok(sets)
}
