//! Multivariate division, pseudo-division and evaluation.

use super::Poly;
use crate::gf;

/// Remainder of `f` under multivariate lex division by `divisors`.
/// No term of the result is divisible by any leading monomial of the
/// divisors. Divisor leading coefficients are field units, so the
/// reduction always terminates.
pub fn normal_form(f: &Poly, divisors: &[Poly]) -> Poly {
    let ring = f.ring;
    let heads: Vec<_> = divisors
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let (m, c) = g.leading().expect("nonzero divisor");
            (m.clone(), c, g)
        })
        .collect();
    if heads.is_empty() {
        return f.clone();
    }
    let mut rem = Poly::zero(ring);
    let mut work = f.clone();
    'outer: while let Some((m, c)) = work.leading().map(|(m, c)| (m.clone(), c)) {
        for (lm, lc, g) in &heads {
            if lm.divides(&m) {
                let q = lm.div_into(&m);
                let scale = gf::mul(c, gf::inv(*lc, ring.p), ring.p);
                work = &work - &g.mul_monomial(&q).scale(scale);
                continue 'outer;
            }
        }
        // Leading term irreducible: move it to the remainder.
        rem.add_term(m.clone(), c);
        let mut lead = Poly::zero(ring);
        lead.add_term(m, c);
        work = &work - &lead;
    }
    rem
}

/// Pseudo-remainder `prem(f, g) = init(g)^(d-e+1) * f mod g`, reducing in
/// the main variable of `g`. Uses the exact exponent `d - e + 1`.
pub fn prem(f: &Poly, g: &Poly) -> Poly {
    let x = g.mvar().expect("prem divisor must be non-constant");
    let e = g.degree_in(x);
    let d = f.degree_in(x);
    if d < e {
        return f.clone();
    }
    let init = g.initial();
    let mut r = f.clone();
    let mut steps = 0u32;
    while !r.is_zero() {
        let dr = r.degree_in(x);
        if dr < e {
            break;
        }
        let lc = r.coeff_of(x, dr);
        let shift = super::Monomial::var(f.ring.n, x, dr - e);
        r = &(&init * &r) - &(&lc * &g.mul_monomial(&shift));
        steps += 1;
    }
    // Match the exact exponent d - e + 1 even when degrees dropped fast.
    for _ in steps..(d - e + 1) {
        r = &init * &r;
    }
    r
}

/// Iterated pseudo-remainder by the members of a triangular set, reducing
/// by decreasing main variable. Zero iff `f` lies in the saturated ideal
/// when the set is a regular chain.
pub fn prem_chain(f: &Poly, members: &[Poly]) -> Poly {
    let mut polys: Vec<&Poly> = members.iter().filter(|g| !g.is_constant()).collect();
    polys.sort_by_key(|g| g.mvar().unwrap_or(usize::MAX));
    let mut r = f.clone();
    for g in polys {
        if r.is_zero() {
            return r;
        }
        r = prem(&r, g);
    }
    r
}

/// Substitute `x_l := v`. Acts as the evaluation functional of one rank.
pub fn subst_eval(f: &Poly, l: usize, v: u64) -> Poly {
    let ring = f.ring;
    let mut out = Poly::zero(ring);
    for (m, c) in f.terms_desc() {
        let e = m.0[l];
        let mut t = m.clone();
        t.0[l] = 0;
        let c = if e > 0 { gf::mul(c, gf::pow(v, e as u64, ring.p), ring.p) } else { c };
        out.add_term(t, c);
    }
    out
}
