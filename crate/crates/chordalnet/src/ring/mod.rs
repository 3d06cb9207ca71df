//! Sparse multivariate polynomial arithmetic over GF(p) in lexicographic
//! order, with the fixed variable ordering `x0 > x1 > ... > x(n-1)`.
//! Smaller indices are larger variables.

mod arith;
pub mod buchberger;
pub mod div;
pub mod text;
pub mod uni;

pub use buchberger::{buchberger_lex, DEFAULT_SPAIR_BUDGET};
pub use div::{normal_form, prem, prem_chain, subst_eval};
pub use text::{parse_poly, PolyParseError};
pub use uni::{uni_rational_roots, uni_squarefree_part};

use crate::gf;
use std::collections::BTreeMap;
use std::fmt;

/// The ambient polynomial ring: `n` variables over GF(p), lex order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Ring {
    pub n: usize,
    pub p: u64,
}

impl Ring {
    pub fn new(n: usize, p: u64) -> Ring {
        assert!(p >= 3 && p < gf::MAX_MODULUS && gf::is_prime(p), "modulus must be an odd prime below 2^31");
        Ring { n, p }
    }
}

/// A power product, stored as a dense exponent vector. The derived `Ord`
/// compares the exponent of `x0` first, which is exactly lex order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Monomial {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, idx: usize, exp: u32) -> Monomial {
        let mut e = vec![0; n];
        e[idx] = exp;
        Monomial(e)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller must ensure divisibility.
    pub fn div_into(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }
}

/// Sparse polynomial: nonzero coefficients keyed by monomial.
/// The zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Poly {
    pub ring: Ring,
    terms: BTreeMap<Monomial, u64>,
}

impl Poly {
    pub fn zero(ring: Ring) -> Poly {
        Poly { ring, terms: BTreeMap::new() }
    }

    pub fn constant(ring: Ring, c: u64) -> Poly {
        let mut f = Poly::zero(ring);
        f.add_term(Monomial::one(ring.n), c % ring.p);
        f
    }

    pub fn one(ring: Ring) -> Poly {
        Poly::constant(ring, 1)
    }

    pub fn var(ring: Ring, idx: usize) -> Poly {
        assert!(idx < ring.n);
        let mut f = Poly::zero(ring);
        f.add_term(Monomial::var(ring.n, idx, 1), 1);
        f
    }

    pub fn from_terms(ring: Ring, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Poly {
        let mut f = Poly::zero(ring);
        for (m, c) in terms {
            f.add_term(m, c % ring.p);
        }
        f
    }

    /// Add `c * m` into the term map, keeping coefficients nonzero.
    pub fn add_term(&mut self, m: Monomial, c: u64) {
        let c = c % self.ring.p;
        if c == 0 {
            return;
        }
        debug_assert_eq!(m.0.len(), self.ring.n);
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = gf::add(*o.get(), c, self.ring.p);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<u64> {
        if self.is_zero() {
            Some(0)
        } else if self.is_constant() {
            Some(*self.terms.values().next().unwrap())
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in decreasing lex order (the canonical listing order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    /// Leading (lex-greatest) term.
    pub fn leading(&self) -> Option<(&Monomial, u64)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> u64 {
        self.leading().map(|(_, c)| c).unwrap_or(0)
    }

    /// Variables occurring in the polynomial, ascending index.
    pub fn vars(&self) -> Vec<usize> {
        let mut present = vec![false; self.ring.n];
        for m in self.terms.keys() {
            for v in m.vars() {
                present[v] = true;
            }
        }
        present.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    }

    /// Index of the greatest variable present, i.e. the main variable.
    pub fn mvar(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.vars().next()).min()
    }

    /// Degree in variable `idx`.
    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    /// Main degree: degree in the main variable.
    pub fn mdeg(&self) -> u32 {
        match self.mvar() {
            Some(v) => self.degree_in(v),
            None => 0,
        }
    }

    /// Coefficient of `x_idx^k`, viewed univariately in `x_idx`.
    pub fn coeff_of(&self, idx: usize, k: u32) -> Poly {
        let mut out = Poly::zero(self.ring);
        for (m, &c) in &self.terms {
            if m.0[idx] == k {
                let mut e = m.clone();
                e.0[idx] = 0;
                out.add_term(e, c);
            }
        }
        out
    }

    /// The initial: leading coefficient w.r.t. the main variable.
    pub fn initial(&self) -> Poly {
        match self.mvar() {
            Some(v) => self.coeff_of(v, self.degree_in(v)),
            None => self.clone(),
        }
    }

    /// Scale so the lex-leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.leading_coeff();
        if c == 1 {
            return self.clone();
        }
        self.scale(gf::inv(c, self.ring.p))
    }

    pub fn scale(&self, c: u64) -> Poly {
        let c = c % self.ring.p;
        let mut out = Poly::zero(self.ring);
        for (m, &a) in &self.terms {
            out.add_term(m.clone(), gf::mul(a, c, self.ring.p));
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let mut out = Poly::zero(self.ring);
        for (t, &c) in &self.terms {
            out.add_term(t.mul(m), c);
        }
        out
    }

    /// Formal derivative with respect to `x_idx`.
    pub fn derivative(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(self.ring);
        for (m, &c) in &self.terms {
            let e = m.0[idx];
            if e > 0 {
                let mut t = m.clone();
                t.0[idx] = e - 1;
                out.add_term(t, gf::mul(c, e as u64 % self.ring.p, self.ring.p));
            }
        }
        out
    }

    /// Evaluate at a full point.
    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.ring.p;
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = gf::mul(t, gf::pow(point[i], e as u64, p), p);
                }
            }
            acc = gf::add(acc, t, p);
        }
        acc
    }

    /// Rename variables: new variable `i` is old variable `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Poly {
        let mut out = Poly::zero(self.ring);
        for (m, &c) in &self.terms {
            let mut e = vec![0u32; self.ring.n];
            for (new, &old) in perm.iter().enumerate() {
                e[new] = m.0[old];
            }
            out.add_term(Monomial(e), c);
        }
        out
    }
}

/// Errors surfaced by ring-level operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RingError {
    ConstantPolynomial,
    BudgetExceeded { budget: usize },
    InseparableDegree { degree: u32, p: u64 },
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::ConstantPolynomial => write!(f, "operation requires a non-constant polynomial"),
            RingError::BudgetExceeded { budget } => {
                write!(f, "S-pair budget of {budget} exceeded; clique subproblem too large")
            }
            RingError::InseparableDegree { degree, p } => {
                write!(f, "main degree {degree} >= modulus {p}; squarefree part unreliable")
            }
        }
    }
}

impl std::error::Error for RingError {}

/// `(rank, initial, mdeg)` of a non-constant polynomial.
pub fn mvar_init_mdeg(f: &Poly) -> Result<(usize, Poly, u32), RingError> {
    let rank = f.mvar().ok_or(RingError::ConstantPolynomial)?;
    let mdeg = f.degree_in(rank);
    Ok((rank, f.coeff_of(rank, mdeg), mdeg))
}

/// A pair of equation and inequation sets; its zero set is the
/// quasi-variety Z(eqs, ineqs). Contents are kept in canonical form:
/// monic, sorted by decreasing leading monomial, deduplicated.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PolySystem {
    pub eqs: Vec<Poly>,
    pub ineqs: Vec<Poly>,
}

impl PolySystem {
    pub fn new(eqs: Vec<Poly>, ineqs: Vec<Poly>) -> PolySystem {
        let mut sys = PolySystem { eqs, ineqs };
        sys.canonicalize();
        sys
    }

    pub fn empty() -> PolySystem {
        PolySystem { eqs: Vec::new(), ineqs: Vec::new() }
    }

    pub fn canonicalize(&mut self) {
        self.eqs.retain(|f| !f.is_zero());
        for f in self.eqs.iter_mut() {
            *f = f.monic();
        }
        sort_polys(&mut self.eqs);
        self.eqs.dedup();
        // A nonzero constant inequation is vacuous.
        self.ineqs.retain(|f| !f.is_constant());
        for f in self.ineqs.iter_mut() {
            *f = f.monic();
        }
        sort_polys(&mut self.ineqs);
        self.ineqs.dedup();
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty() && self.ineqs.is_empty()
    }

    /// Union of the variables of all members.
    pub fn vars(&self) -> Vec<usize> {
        let mut present = std::collections::BTreeSet::new();
        for f in self.eqs.iter().chain(&self.ineqs) {
            present.extend(f.vars());
        }
        present.into_iter().collect()
    }
}

/// Canonical listing order: decreasing leading monomial, then full compare.
pub fn sort_polys(polys: &mut [Poly]) {
    polys.sort_by(|a, b| {
        let la = a.leading_monomial();
        let lb = b.leading_monomial();
        lb.cmp(&la).then_with(|| b.cmp(a))
    });
}
