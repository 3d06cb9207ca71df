//! Binomial systems with monomial inequations, decomposed into regular
//! systems that preserve the binomial structure.
//!
//! Zero cases are split off variable by variable; the toral part is
//! triangularized by integer row reduction of the exponent matrix to
//! Hermite normal form, with one field scalar tracked per row. Pivot
//! rows become binomial equations with monomial initials; non-pivot and
//! denominator variables become inequations.

use super::{DecompError, RegularSystem, TriangularSet};
use crate::gf;
use crate::ring::{Monomial, Poly, PolySystem, Ring, RingError};
use std::collections::BTreeSet;

/// Decompose the quasi-variety of `sys` (binomial/monomial equations,
/// monomial inequations) into regular systems with pairwise-disjoint
/// quasi-varieties.
pub fn tri_binomial(sys: &PolySystem) -> Result<Vec<RegularSystem>, DecompError> {
    let ring = match sys.eqs.first().or(sys.ineqs.first()) {
        Some(f) => f.ring,
        None => return Ok(Vec::new()),
    };
    for f in &sys.eqs {
        if f.num_terms() > 2 {
            return Err(DecompError::NotBinomial);
        }
    }
    let mut nonzero: BTreeSet<usize> = BTreeSet::new();
    for h in &sys.ineqs {
        if h.num_terms() != 1 {
            return Err(DecompError::NotBinomial);
        }
        nonzero.extend(h.vars());
    }
    let mut out = Vec::new();
    decompose(ring, &sys.eqs, nonzero, BTreeSet::new(), &mut out)?;
    Ok(out)
}

fn decompose(
    ring: Ring,
    eqs: &[Poly],
    nonzero: BTreeSet<usize>,
    zero: BTreeSet<usize>,
    out: &mut Vec<RegularSystem>,
) -> Result<(), DecompError> {
    // Substitute the zero pattern.
    let mut work: Vec<Poly> = Vec::new();
    for f in eqs {
        let mut g = f.clone();
        for &v in &zero {
            g = crate::ring::subst_eval(&g, v, 0);
        }
        match g.constant_value() {
            Some(0) => {}
            Some(_) => return Ok(()), // inconsistent branch
            None => work.push(g.monic()),
        }
    }
    work.sort();
    work.dedup();

    // Case-split on a monomial equation: some variable of it vanishes.
    // Zeros are assigned smallest variable first, each later branch
    // keeping the earlier candidates nonzero, so the cells are disjoint.
    if let Some(m) = work.iter().find(|f| f.num_terms() == 1).cloned() {
        let rest: Vec<Poly> = work.iter().filter(|f| **f != m).cloned().collect();
        let mut free: Vec<usize> =
            m.vars().into_iter().filter(|v| !nonzero.contains(v)).collect();
        free.sort_unstable_by(|a, b| b.cmp(a)); // smallest variable first
        if free.is_empty() {
            return Ok(()); // all factors forced nonzero: inconsistent
        }
        for (i, &v) in free.iter().enumerate() {
            let mut nz = nonzero.clone();
            nz.extend(free[..i].iter().copied());
            let mut z = zero.clone();
            z.insert(v);
            decompose(ring, &rest, nz, z, out)?;
        }
        return Ok(());
    }

    // Pure binomials now. Factor out shared monomials first: the factor
    // either vanishes or the cofactor relation holds on its torus.
    for f in &work {
        let (m1, m2) = binomial_parts(f);
        let g = m1.gcd(&m2);
        if !g.is_one() {
            let rest: Vec<Poly> = work.iter().filter(|h| *h != f).cloned().collect();
            let mut eqs1 = rest.clone();
            eqs1.push(divide_out(f, &g));
            let mut nz = nonzero.clone();
            nz.extend(g.vars());
            decompose(ring, &eqs1, nz, zero.clone(), out)?;
            let mut eqs2 = rest;
            let mut gp = Poly::zero(ring);
            gp.add_term(g, 1);
            eqs2.push(gp);
            decompose(ring, &eqs2, nonzero, zero, out)?;
            return Ok(());
        }
    }

    // Determine which variables must be invertible before the toral step.
    let components = var_components(&work);
    let mut needed: BTreeSet<usize> = BTreeSet::new();
    for comp in &components {
        if comp.rows.len() >= 2 {
            needed.extend(comp.vars.iter().copied());
        } else {
            let f = &work[comp.rows[0]];
            let (m1, m2) = binomial_parts(f);
            let mv = f.mvar().unwrap();
            needed.extend(m1.vars().filter(|&v| v != mv));
            if nonzero.contains(&mv) {
                needed.extend(m2.vars());
            }
        }
    }
    if let Some(&w) = needed.iter().find(|v| !nonzero.contains(v) && !zero.contains(v)) {
        // Binary split, nonzero branch first.
        let mut nz = nonzero.clone();
        nz.insert(w);
        decompose(ring, &work, nz, zero.clone(), out)?;
        let mut z = zero.clone();
        z.insert(w);
        decompose(ring, &work, nonzero, z, out)?;
        return Ok(());
    }

    // Toral part: Hermite normal form of the exponent matrix.
    let cols: Vec<usize> = {
        let mut s = BTreeSet::new();
        for f in &work {
            s.extend(f.vars());
        }
        s.into_iter().collect()
    };
    let mut rows: Vec<(Vec<i64>, u64)> = Vec::new();
    for f in &work {
        let (m1, m2) = binomial_parts(f);
        let c = coeff_of_part(f, &m2);
        let v: Vec<i64> = cols.iter().map(|&u| m1.0[u] as i64 - m2.0[u] as i64).collect();
        rows.push((v, c));
    }
    let hnf = hermite_rows(rows, ring.p);
    let mut t = TriangularSet::new(ring);
    let mut pivot_vars: BTreeSet<usize> = BTreeSet::new();
    for (v, c) in hnf {
        if v.iter().all(|&e| e == 0) {
            if c != 1 {
                return Ok(()); // 1 = c with c != 1: inconsistent
            }
            continue;
        }
        let pivot_col = v.iter().position(|&e| e != 0).unwrap();
        let pivot = cols[pivot_col];
        let e = v[pivot_col];
        debug_assert!(e > 0);
        if e as u64 % ring.p == 0 {
            return Err(DecompError::Ring(RingError::InseparableDegree {
                degree: e as u32,
                p: ring.p,
            }));
        }
        let mut pos = Monomial::one(ring.n);
        let mut neg = Monomial::one(ring.n);
        for (i, &exp) in v.iter().enumerate() {
            if exp > 0 {
                pos.0[cols[i]] = exp as u32;
            } else if exp < 0 {
                neg.0[cols[i]] = (-exp) as u32;
            }
        }
        let mut f = Poly::zero(ring);
        f.add_term(pos, 1);
        f.add_term(neg, gf::neg(c, ring.p));
        debug_assert_eq!(f.mvar(), Some(pivot));
        t.insert(f);
        pivot_vars.insert(pivot);
    }
    for &v in &zero {
        t.insert(Poly::var(ring, v));
    }
    let ineqs: Vec<Poly> = nonzero
        .iter()
        .filter(|v| !pivot_vars.contains(v))
        .map(|&v| Poly::var(ring, v))
        .collect();
    out.push(RegularSystem::new(t, ineqs));
    Ok(())
}

fn binomial_parts(f: &Poly) -> (Monomial, Monomial) {
    let mut it = f.terms_desc();
    let m1 = it.next().expect("nonzero binomial").0.clone();
    let m2 = it.next().map(|(m, _)| m.clone()).unwrap_or_else(|| Monomial::one(f.ring.n));
    (m1, m2)
}

/// Scalar `c` in the normalized relation `m1 - c*m2` (f is monic).
fn coeff_of_part(f: &Poly, m2: &Monomial) -> u64 {
    if f.num_terms() == 1 {
        return 0;
    }
    let c = f
        .terms_desc()
        .find(|(m, _)| m == &m2)
        .map(|(_, c)| c)
        .expect("second term");
    gf::neg(c, f.ring.p)
}

fn divide_out(f: &Poly, g: &Monomial) -> Poly {
    Poly::from_terms(f.ring, f.terms_desc().map(|(m, c)| (g.div_into(m), c)))
}

struct Component {
    rows: Vec<usize>,
    vars: BTreeSet<usize>,
}

/// Group binomials into components that share variables.
fn var_components(eqs: &[Poly]) -> Vec<Component> {
    let mut comps: Vec<Component> = Vec::new();
    for (i, f) in eqs.iter().enumerate() {
        let vars: BTreeSet<usize> = f.vars().into_iter().collect();
        let mut merged = Component { rows: vec![i], vars };
        let mut keep = Vec::new();
        for c in comps.into_iter() {
            if c.vars.is_disjoint(&merged.vars) {
                keep.push(c);
            } else {
                merged.rows.extend(c.rows);
                merged.vars.extend(c.vars);
            }
        }
        merged.rows.sort_unstable();
        keep.push(merged);
        comps = keep;
    }
    comps
}

/// Row Hermite normal form with a tracked field scalar per relation.
/// Row `(v, c)` encodes `x^(v+) = c * x^(v-)` on the torus of its
/// variables; integer row operations multiply the relations accordingly.
fn hermite_rows(mut rows: Vec<(Vec<i64>, u64)>, p: u64) -> Vec<(Vec<i64>, u64)> {
    let ncols = rows.first().map(|(v, _)| v.len()).unwrap_or(0);
    let mut pivot_row = 0usize;
    for col in 0..ncols {
        loop {
            let nz: Vec<usize> = (pivot_row..rows.len())
                .filter(|&i| rows[i].0[col] != 0)
                .collect();
            match nz.len() {
                0 => break,
                1 => {
                    rows.swap(pivot_row, nz[0]);
                    if rows[pivot_row].0[col] < 0 {
                        negate_row(&mut rows[pivot_row], p);
                    }
                    // Reduce entries above the pivot.
                    let pe = rows[pivot_row].0[col];
                    for i in 0..pivot_row {
                        let k = rows[i].0[col].div_euclid(pe);
                        if k != 0 {
                            row_subtract(&mut rows, i, pivot_row, k, p);
                        }
                    }
                    pivot_row += 1;
                    break;
                }
                _ => {
                    // Euclidean reduction among the candidate rows.
                    let &best = nz
                        .iter()
                        .min_by_key(|&&i| (rows[i].0[col].unsigned_abs(), i))
                        .unwrap();
                    for &i in &nz {
                        if i == best {
                            continue;
                        }
                        let k = rows[i].0[col] / rows[best].0[col];
                        row_subtract(&mut rows, i, best, k, p);
                    }
                }
            }
        }
    }
    rows
}

fn negate_row(row: &mut (Vec<i64>, u64), p: u64) {
    for e in row.0.iter_mut() {
        *e = -*e;
    }
    row.1 = gf::inv(row.1, p);
}

/// `rows[i] -= k * rows[j]`, scalars multiplying as `c_i * c_j^-k`.
fn row_subtract(rows: &mut [(Vec<i64>, u64)], i: usize, j: usize, k: i64, p: u64) {
    let (vj, cj) = rows[j].clone();
    let row = &mut rows[i];
    for (a, b) in row.0.iter_mut().zip(&vj) {
        *a -= k * b;
    }
    let factor = if k >= 0 {
        gf::pow(gf::inv(cj, p), k as u64, p)
    } else {
        gf::pow(cj, (-k) as u64, p)
    };
    row.1 = gf::mul(row.1, factor, p);
}
