//! Buchberger's algorithm for reduced lexicographic Groebner bases.
//!
//! Normal selection (smallest lcm first) with the coprimality and chain
//! criteria, full inter-reduction at the end. Pair ordering is
//! deterministic so repeated runs produce identical bases.

use super::{div::normal_form, Monomial, Poly, RingError};
use std::collections::BTreeSet;

pub const DEFAULT_SPAIR_BUDGET: usize = 200_000;

/// Reduced lex Groebner basis of the ideal generated by `gens`.
/// Returns `[1]` exactly when the ideal is the unit ideal. The basis is
/// sorted by decreasing leading monomial and every member is monic.
pub fn buchberger_lex(gens: &[Poly], budget: usize) -> Result<Vec<Poly>, RingError> {
    let mut basis: Vec<Poly> = Vec::new();
    let ring = match gens.first() {
        Some(g) => g.ring,
        None => return Ok(Vec::new()),
    };
    for g in gens {
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return Ok(vec![Poly::one(ring)]);
        }
        let g = g.monic();
        if !basis.contains(&g) {
            basis.push(g);
        }
    }
    if basis.is_empty() {
        return Ok(Vec::new());
    }

    // Pair queue keyed by (lcm, i, j): normal selection pops the smallest lcm.
    let mut queue: BTreeSet<(Monomial, usize, usize)> = BTreeSet::new();
    let mut enqueued = 0usize;
    let push_pairs = |queue: &mut BTreeSet<(Monomial, usize, usize)>,
                          basis: &[Poly],
                          j: usize,
                          enqueued: &mut usize|
     -> Result<(), RingError> {
        for i in 0..j {
            let lcm = basis[i]
                .leading_monomial()
                .unwrap()
                .lcm(basis[j].leading_monomial().unwrap());
            queue.insert((lcm, i, j));
            *enqueued += 1;
            if *enqueued > budget {
                return Err(RingError::BudgetExceeded { budget });
            }
        }
        Ok(())
    };
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        push_pairs(&mut queue, &basis, j, &mut enqueued)?;
    }

    while let Some((lcm, i, j)) = queue.iter().next().cloned() {
        queue.remove(&(lcm.clone(), i, j));
        done.insert((i, j));
        let lm_i = basis[i].leading_monomial().unwrap();
        let lm_j = basis[j].leading_monomial().unwrap();
        // Coprimality criterion.
        if lm_i.mul(lm_j) == lcm {
            continue;
        }
        // Chain criterion: some processed k with lm_k | lcm and both
        // (i,k) and (j,k) already handled.
        let mut skip = false;
        for k in 0..basis.len() {
            if k == i || k == j {
                continue;
            }
            if basis[k].leading_monomial().unwrap().divides(&lcm) {
                let a = (i.min(k), i.max(k));
                let b = (j.min(k), j.max(k));
                if done.contains(&a) && done.contains(&b) {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            continue;
        }
        let s = spoly(&basis[i], &basis[j], &lcm);
        let r = normal_form(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return Ok(vec![Poly::one(ring)]);
        }
        basis.push(r.monic());
        push_pairs(&mut queue, &basis, basis.len() - 1, &mut enqueued)?;
    }

    Ok(reduce_basis(basis))
}

fn spoly(f: &Poly, g: &Poly, lcm: &Monomial) -> Poly {
    // Both inputs are monic.
    let mf = f.leading_monomial().unwrap().div_into(lcm);
    let mg = g.leading_monomial().unwrap().div_into(lcm);
    &f.mul_monomial(&mf) - &g.mul_monomial(&mg)
}

/// Minimize and tail-reduce a basis; output monic, sorted by decreasing
/// leading monomial.
fn reduce_basis(mut basis: Vec<Poly>) -> Vec<Poly> {
    // Drop members whose leading monomial is divisible by another's.
    super::sort_polys(&mut basis);
    let mut keep: Vec<Poly> = Vec::new();
    for (idx, f) in basis.iter().enumerate() {
        let lm = f.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(jdx, g)| {
            jdx != idx
                && g.leading_monomial().unwrap().divides(lm)
                && !(g.leading_monomial().unwrap() == lm && jdx > idx)
        });
        if !redundant {
            keep.push(f.clone());
        }
    }
    // Tail-reduce each member by the rest until stable.
    loop {
        let mut changed = false;
        for i in 0..keep.len() {
            let others: Vec<Poly> = keep
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let r = normal_form(&keep[i], &others).monic();
            if r != keep[i] {
                keep[i] = r;
                changed = true;
            }
        }
        keep.retain(|f| !f.is_zero());
        if !changed {
            break;
        }
    }
    super::sort_polys(&mut keep);
    keep
}
