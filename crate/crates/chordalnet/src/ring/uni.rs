//! Univariate helpers: squarefree part and rational root extraction.
//!
//! Polynomials are converted to dense coefficient vectors in their single
//! variable; roots come from gcd with x^p - x followed by equal-degree
//! splitting into linear factors.

use super::{Monomial, Poly, Ring, RingError};
use crate::{gf, rng::Rng};

/// Dense coefficients `c[0] + c[1] x + ...` of a polynomial that involves
/// only the variable `var`. Panics if other variables occur.
pub fn to_univariate(f: &Poly, var: usize) -> Vec<u64> {
    let d = f.degree_in(var) as usize;
    let mut coeffs = vec![0u64; d + 1];
    for (m, c) in f.terms_desc() {
        for (i, &e) in m.0.iter().enumerate() {
            assert!(e == 0 || i == var, "polynomial is not univariate in x{var}");
        }
        coeffs[m.0[var] as usize] = c;
    }
    coeffs
}

pub fn from_univariate(ring: Ring, var: usize, coeffs: &[u64]) -> Poly {
    let mut f = Poly::zero(ring);
    for (e, &c) in coeffs.iter().enumerate() {
        f.add_term(Monomial::var(ring.n, var, e as u32), c);
    }
    f
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

fn uni_monic(v: &[u64], p: u64) -> Vec<u64> {
    let lc = *v.last().expect("nonzero");
    if lc == 1 {
        return v.to_vec();
    }
    let inv = gf::inv(lc, p);
    v.iter().map(|&c| gf::mul(c, inv, p)).collect()
}

/// Remainder of `a` divided by `b` (b nonzero).
fn uni_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = deg(b).expect("division by zero");
    let inv_lc = gf::inv(b[db], p);
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let q = gf::mul(r[dr], inv_lc, p);
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = gf::sub(r[idx], gf::mul(q, b[i], p), p);
        }
        trim(&mut r);
    }
    r
}

/// Exact quotient `a / b`; panics if the division is not exact.
fn uni_div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = deg(b).expect("division by zero");
    let inv_lc = gf::inv(b[db], p);
    let mut r = a.to_vec();
    trim(&mut r);
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let c = gf::mul(r[dr], inv_lc, p);
        q[dr - db] = c;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = gf::sub(r[idx], gf::mul(c, b[i], p), p);
        }
        trim(&mut r);
    }
    assert!(r.is_empty(), "inexact univariate division");
    trim(&mut q);
    q
}

fn uni_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = uni_rem(&a, &b, p);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        uni_monic(&a, p)
    }
}

fn uni_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ca) in a.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (j, &cb) in b.iter().enumerate() {
            prod[i + j] = gf::add(prod[i + j], gf::mul(ca, cb, p), p);
        }
    }
    trim(&mut prod);
    uni_rem(&prod, m, p)
}

/// `x^e mod m` by square and multiply.
fn uni_powmod_x(e: u64, m: &[u64], p: u64) -> Vec<u64> {
    uni_powmod(&[0, 1], e, m, p)
}

fn uni_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = uni_rem(&[1], m, p);
    let mut b = uni_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = uni_mulmod(&acc, &b, m, p);
        }
        b = uni_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// Monic generator of the radical of `<f>` in one variable: `f / gcd(f, f')`.
pub fn uni_squarefree_part(f: &Poly) -> Result<Poly, RingError> {
    let p = f.ring.p;
    let var = f.mvar().ok_or(RingError::ConstantPolynomial)?;
    let d = f.degree_in(var);
    if d as u64 >= p {
        return Err(RingError::InseparableDegree { degree: d, p });
    }
    let coeffs = uni_monic(&to_univariate(f, var), p);
    let deriv: Vec<u64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(e, &c)| gf::mul(c, e as u64 % p, p))
        .collect();
    let g = uni_gcd(&coeffs, &deriv, p);
    let sf = if deg(&g) == Some(0) { coeffs } else { uni_div_exact(&coeffs, &g, p) };
    Ok(from_univariate(f.ring, var, &uni_monic(&sf, p)))
}

/// All roots of a nonzero univariate polynomial in GF(p), ascending.
pub fn uni_rational_roots(f: &Poly) -> Vec<u64> {
    assert!(!f.is_zero(), "roots of the zero polynomial");
    let p = f.ring.p;
    let var = match f.mvar() {
        Some(v) => v,
        None => return Vec::new(),
    };
    let coeffs = uni_monic(&to_univariate(f, var), p);
    // gcd(f, x^p - x) is squarefree with exactly the rational roots.
    let xp = uni_powmod_x(p, &coeffs, p);
    let mut xp_minus_x = xp;
    while xp_minus_x.len() < 2 {
        xp_minus_x.push(0);
    }
    xp_minus_x[1] = gf::sub(xp_minus_x[1], 1, p);
    trim(&mut xp_minus_x);
    let core = uni_gcd(&coeffs, &xp_minus_x, p);
    let mut roots = Vec::new();
    if !core.is_empty() && deg(&core) > Some(0) {
        let mut rng = Rng::new(0x524f4f54);
        split_linear(&core, p, &mut rng, &mut roots);
    }
    roots.sort_unstable();
    roots
}

/// Equal-degree splitting specialized to products of distinct linear factors.
fn split_linear(f: &[u64], p: u64, rng: &mut Rng, roots: &mut Vec<u64>) {
    match deg(f) {
        None | Some(0) => {}
        Some(1) => {
            // x + c -> root -c (f is monic).
            roots.push(gf::neg(f[0], p));
        }
        Some(_) => loop {
            let a = rng.field_element(p);
            // gcd(f, (x+a)^((p-1)/2) - 1) splits the roots into halves.
            let mut half = uni_powmod(&[a, 1], (p - 1) / 2, f, p);
            if half.is_empty() {
                half = vec![0];
            }
            half[0] = gf::sub(half[0], 1, p);
            trim(&mut half);
            if half.is_empty() {
                continue;
            }
            let g = uni_gcd(f, &half, p);
            let dg = deg(&g);
            if dg == Some(0) || dg == deg(f) {
                continue;
            }
            let h = uni_div_exact(f, &g, p);
            split_linear(&g, p, rng, roots);
            split_linear(&h, p, rng, roots);
            break;
        },
    }
}
