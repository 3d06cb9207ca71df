//! Triangular-decomposition backends: zero-dimensional (with squarefree
//! refinement), monomial, and binomial with monomial inequations. These
//! are the black boxes the network driver calls on each node.

pub mod binomial;
pub mod zerodim;

pub use binomial::tri_binomial;
pub use zerodim::tri_zero_dim;

use crate::gf;
use crate::ring::{
    buchberger_lex, normal_form, prem, prem_chain, sort_polys, uni::to_univariate, Monomial, Poly,
    PolySystem, Ring, RingError,
};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Rank-indexed polynomials with distinct main variables; the rank of a
/// member equals the index of its main variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TriangularSet {
    pub ring: Ring,
    polys: BTreeMap<usize, Poly>,
}

impl TriangularSet {
    pub fn new(ring: Ring) -> TriangularSet {
        TriangularSet { ring, polys: BTreeMap::new() }
    }

    pub fn from_polys(ring: Ring, polys: impl IntoIterator<Item = Poly>) -> TriangularSet {
        let mut t = TriangularSet::new(ring);
        for f in polys {
            t.insert(f);
        }
        t
    }

    pub fn insert(&mut self, f: Poly) {
        let rank = f.mvar().expect("triangular members are non-constant");
        let prev = self.polys.insert(rank, f.monic());
        assert!(prev.is_none(), "duplicate main variable x{rank}");
    }

    pub fn get(&self, rank: usize) -> Option<&Poly> {
        self.polys.get(&rank)
    }

    pub fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.polys.keys().copied()
    }

    /// Members in increasing rank order (decreasing main variable is the
    /// reverse; `prem_chain` sorts for itself).
    pub fn members(&self) -> impl Iterator<Item = &Poly> {
        self.polys.values()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Product of main degrees: the Bezout bound on the variety size,
    /// exact (with multiplicity) for zero-dimensional sets.
    pub fn degree(&self) -> u128 {
        self.polys.values().map(|f| f.mdeg() as u128).product()
    }

    /// Iterated pseudo-remainder by the members, largest main variable
    /// first.
    pub fn prem(&self, f: &Poly) -> Poly {
        let members: Vec<Poly> = self.polys.values().cloned().collect();
        prem_chain(f, &members)
    }

    /// Product of the initials of all members.
    pub fn initial_product(&self) -> Poly {
        let mut h = Poly::one(self.ring);
        for f in self.polys.values() {
            let init = f.initial();
            if init.constant_value() != Some(1) {
                h = &h * &init;
            }
        }
        h
    }

    pub fn to_vec(&self) -> Vec<Poly> {
        self.polys.values().cloned().collect()
    }
}

impl fmt::Display for TriangularSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.polys.values().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A triangular set plus inequations. Condition (i) of regular systems:
/// no rank carries both an equation of the set and an inequation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RegularSystem {
    pub t: TriangularSet,
    pub ineqs: Vec<Poly>,
}

impl RegularSystem {
    pub fn new(t: TriangularSet, mut ineqs: Vec<Poly>) -> RegularSystem {
        ineqs.retain(|f| !f.is_constant());
        for f in ineqs.iter_mut() {
            *f = f.monic();
        }
        sort_polys(&mut ineqs);
        ineqs.dedup();
        let sys = RegularSystem { t, ineqs };
        debug_assert!(sys.rank_exclusive(), "regular system condition (i) violated");
        sys
    }

    /// Condition (i): for each rank, not both an equation and an
    /// inequation with that main variable.
    pub fn rank_exclusive(&self) -> bool {
        let eq_ranks: BTreeSet<usize> = self.t.ranks().collect();
        self.ineqs
            .iter()
            .filter_map(|f| f.mvar())
            .all(|r| !eq_ranks.contains(&r))
    }

    pub fn to_system(&self) -> PolySystem {
        PolySystem::new(self.t.to_vec(), self.ineqs.clone())
    }
}

/// Errors raised by the decomposition backends.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DecompError {
    NotZeroDimensional { variable: usize },
    NotBinomial,
    Ring(RingError),
}

impl fmt::Display for DecompError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompError::NotZeroDimensional { variable } => {
                write!(f, "ideal is not zero-dimensional: no univariate head for x{variable}")
            }
            DecompError::NotBinomial => write!(f, "equation with three or more terms in binomial mode"),
            DecompError::Ring(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DecompError {}

impl From<RingError> for DecompError {
    fn from(e: RingError) -> Self {
        DecompError::Ring(e)
    }
}

/// Minimal primes of a monomial ideal, as triangular sets of variables.
/// Empty input yields the single trivial (empty) set; an inconsistent
/// input (a constant generator) yields the empty list.
pub fn tri_monomial(gens: &[Poly]) -> Vec<TriangularSet> {
    let ring = match gens.first() {
        Some(g) => g.ring,
        None => return Vec::new(),
    };
    let mut supports: Vec<BTreeSet<usize>> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        assert_eq!(g.num_terms(), 1, "monomial backend requires single-term equations");
        let vars: BTreeSet<usize> = g.vars().into_iter().collect();
        if vars.is_empty() {
            return Vec::new(); // constant generator: unit ideal
        }
        supports.push(vars);
    }
    if supports.is_empty() {
        return vec![TriangularSet::new(ring)];
    }
    // Drop generators implied by a subset generator.
    supports.sort_by_key(|s| s.len());
    let mut reduced: Vec<BTreeSet<usize>> = Vec::new();
    for s in supports {
        if !reduced.iter().any(|t| t.is_subset(&s)) {
            reduced.push(s);
        }
    }
    let mut covers: Vec<BTreeSet<usize>> = Vec::new();
    hitting_sets(&reduced, BTreeSet::new(), &mut covers);
    // Keep only minimal covers, sorted by (size, contents).
    covers.sort();
    covers.dedup();
    let minimal: Vec<BTreeSet<usize>> = covers
        .iter()
        .filter(|c| !covers.iter().any(|d| d.len() < c.len() && d.is_subset(c)))
        .cloned()
        .collect();
    let mut minimal = minimal;
    minimal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    minimal
        .into_iter()
        .map(|vars| TriangularSet::from_polys(ring, vars.into_iter().map(|v| Poly::var(ring, v))))
        .collect()
}

fn hitting_sets(gens: &[BTreeSet<usize>], chosen: BTreeSet<usize>, out: &mut Vec<BTreeSet<usize>>) {
    match gens.iter().find(|s| s.is_disjoint(&chosen)) {
        None => out.push(chosen),
        Some(next) => {
            for &v in next {
                let mut c = chosen.clone();
                c.insert(v);
                hitting_sets(gens, c, out);
            }
        }
    }
}

/// Reduced lex Groebner basis of `sat(T) = <T> : h^inf`, computed by
/// adjoining an auxiliary variable above the order and eliminating it.
pub fn sat_generators(t: &TriangularSet, budget: usize) -> Result<Vec<Poly>, DecompError> {
    for f in t.members() {
        debug_assert!(t.prem(f).is_zero());
    }
    let ring = t.ring;
    let h = t.initial_product();
    if h.constant_value() == Some(1) {
        return Ok(buchberger_lex(&t.to_vec(), budget)?);
    }
    let aux = Ring { n: ring.n + 1, p: ring.p };
    let mut gens: Vec<Poly> = t.members().map(|f| shift_up(f, aux)).collect();
    // y * h - 1 with y the new largest variable.
    let mut inverter = shift_up(&h, aux).mul_monomial(&Monomial::var(aux.n, 0, 1));
    inverter.add_term(Monomial::one(aux.n), aux.p - 1);
    gens.push(inverter);
    let gb = buchberger_lex(&gens, budget)?;
    let mut out: Vec<Poly> = gb
        .iter()
        .filter(|f| f.degree_in(0) == 0)
        .map(|f| shift_down(f, ring))
        .collect();
    sort_polys(&mut out);
    Ok(out)
}

fn shift_up(f: &Poly, aux: Ring) -> Poly {
    Poly::from_terms(
        aux,
        f.terms_desc().map(|(m, c)| {
            let mut e = vec![0u32; aux.n];
            e[1..].copy_from_slice(&m.0);
            (Monomial(e), c)
        }),
    )
}

fn shift_down(f: &Poly, ring: Ring) -> Poly {
    Poly::from_terms(
        ring,
        f.terms_desc().map(|(m, c)| {
            debug_assert_eq!(m.0[0], 0);
            (Monomial(m.0[1..].to_vec()), c)
        }),
    )
}

/// Outcome of the structural primality test for a regular chain.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Primality {
    Prime,
    Unknown,
}

/// Structural primality of `sat(T)`: all members except the one with the
/// smallest main variable must be linear in their main variables, and
/// that remaining member must be irreducible. Degree <= 2 is decided
/// exactly; higher degrees only in the univariate case.
pub fn is_prime_form(t: &TriangularSet) -> Primality {
    if t.is_empty() {
        return Primality::Prime; // the zero ideal
    }
    let last_rank = t.ranks().max().unwrap();
    for f in t.members() {
        if f.mvar() != Some(last_rank) && f.mdeg() != 1 {
            return Primality::Unknown;
        }
    }
    let last = t.get(last_rank).unwrap();
    match irreducible(last) {
        Some(true) => Primality::Prime,
        _ => Primality::Unknown,
    }
}

/// Irreducibility over GF(p), decided where feasible.
fn irreducible(f: &Poly) -> Option<bool> {
    let vars = f.vars();
    if vars.is_empty() {
        return Some(false); // constants are units, not irreducible
    }
    if vars.len() == 1 {
        return Some(uni_irreducible(f, vars[0]));
    }
    let v = f.mvar().unwrap();
    let mdeg = f.degree_in(v);
    if mdeg == 1 {
        // f = A*v + B: irreducible iff gcd(A, B) = 1.
        let a = f.coeff_of(v, 1);
        let b = f.coeff_of(v, 0);
        return coprime(&a, &b);
    }
    let tdeg = f.terms_desc().map(|(m, _)| m.total_degree()).max().unwrap();
    if mdeg == 2 && tdeg == 2 {
        // a*v^2 + b*v + c with a constant: factors iff b^2 - 4ac is a
        // square in the polynomial ring.
        let a = f.coeff_of(v, 2).constant_value()?;
        let b = f.coeff_of(v, 1);
        let c = f.coeff_of(v, 0);
        let p = f.ring.p;
        let disc = &(&b * &b) - &c.scale(gf::mul(4 % p, a, p));
        return Some(poly_sqrt_deg2(&disc).is_none());
    }
    None
}

fn coprime(a: &Poly, b: &Poly) -> Option<bool> {
    if a.is_constant() {
        return Some(if a.is_zero() { b.is_constant() && !b.is_zero() } else { true });
    }
    if b.is_constant() {
        return coprime(b, a);
    }
    if a.num_terms() == 1 {
        // gcd != 1 iff some variable of a divides every term of b.
        let shared = a.vars().into_iter().any(|v| b.terms_desc().all(|(m, _)| m.0[v] > 0));
        return Some(!shared);
    }
    if b.num_terms() == 1 {
        return coprime(b, a);
    }
    // If a is linear, a | b is decidable via prem (init(a) is scalar when
    // a's main-variable coefficient is constant).
    let tdeg_a = a.terms_desc().map(|(m, _)| m.total_degree()).max().unwrap();
    if tdeg_a == 1 {
        return Some(!prem(b, a).is_zero());
    }
    None
}

/// Irreducibility of a univariate polynomial by the distinct-degree
/// criterion: `x^(p^d) = x mod f` and `gcd(x^(p^(d/r)) - x, f) = 1` for
/// every prime `r` dividing `d`.
fn uni_irreducible(f: &Poly, var: usize) -> bool {
    let p = f.ring.p;
    let coeffs = to_univariate(f, var);
    let d = coeffs.len() - 1;
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // Frobenius iterates x^(p^k) mod f.
    let uni = Ring::new(1, p);
    let fu = Poly::from_terms(
        uni,
        coeffs.iter().enumerate().map(|(e, &c)| (Monomial::var(1, 0, e as u32), c)),
    )
    .monic();
    let x = Poly::var(uni, 0);
    let mut frob = vec![x.clone()];
    for _ in 0..d {
        let prev = frob.last().unwrap();
        frob.push(poly_powmod(prev, p, &fu));
    }
    if frob[d] != x {
        return false;
    }
    let mut m = d;
    let mut primes = Vec::new();
    let mut q = 2;
    while q * q <= m {
        if m % q == 0 {
            primes.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    for r in primes {
        let g = &frob[d / r] - &x;
        let coeffs_g = to_univariate(&g, 0);
        let coeffs_f = to_univariate(&fu, 0);
        let gcd = uni_gcd_raw(&coeffs_f, &coeffs_g, p);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

fn poly_powmod(base: &Poly, mut e: u64, modulus: &Poly) -> Poly {
    let mods = [modulus.clone()];
    let mut acc = Poly::one(base.ring);
    let mut b = normal_form(base, &mods);
    while e > 0 {
        if e & 1 == 1 {
            acc = normal_form(&(&acc * &b), &mods);
        }
        b = normal_form(&(&b * &b), &mods);
        e >>= 1;
    }
    acc
}

fn uni_gcd_raw(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let db = b.len() - 1;
        let inv = gf::inv(b[db], p);
        while a.len() > db {
            let da = a.len() - 1;
            if da < db {
                break;
            }
            let q = gf::mul(a[da], inv, p);
            for i in 0..=db {
                let idx = da - db + i;
                a[idx] = gf::sub(a[idx], gf::mul(q, b[i], p), p);
            }
            trim(&mut a);
            if a.len() <= db {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
        trim(&mut b);
    }
    a
}

/// Square root of a polynomial of total degree <= 2, if one exists.
fn poly_sqrt_deg2(d: &Poly) -> Option<Poly> {
    let ring = d.ring;
    let p = ring.p;
    if let Some(c) = d.constant_value() {
        return gf::sqrt(c, p).map(|r| Poly::constant(ring, r));
    }
    // A square of a linear polynomial s = sum a_i x_i + b.
    let v = d.mvar().unwrap();
    let lead = d.coeff_of(v, 2).constant_value()?;
    let alpha = gf::sqrt(lead, p)?;
    if alpha == 0 {
        return None;
    }
    let inv2a = gf::inv(gf::mul(2, alpha, p), p);
    // Coefficients of s on the other variables come from cross terms v*u.
    let mut s = Poly::from_terms(ring, [(Monomial::var(ring.n, v, 1), alpha)]);
    let dv = d.coeff_of(v, 1); // alpha' terms: 2*alpha*(rest of s)
    for (m, c) in dv.terms_desc() {
        s.add_term(m.clone(), gf::mul(c, inv2a, p));
    }
    if &(&s * &s) == d {
        Some(s)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::text::parse_poly;

    fn ring() -> Ring {
        Ring::new(8, 65521)
    }

    #[test]
    fn monomial_edge_ideal_of_an_edge() {
        let r = ring();
        let out = tri_monomial(&[parse_poly(r, "x0*x1").unwrap()]);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].to_string(), "(x0)");
        assert_eq!(out[1].to_string(), "(x1)");
    }

    #[test]
    fn monomial_two_path() {
        let r = ring();
        let out = tri_monomial(&[
            parse_poly(r, "x0*x1").unwrap(),
            parse_poly(r, "x1*x2").unwrap(),
        ]);
        let strs: Vec<String> = out.iter().map(|t| t.to_string()).collect();
        assert_eq!(strs, vec!["(x1)", "(x0, x2)"]);
    }

    #[test]
    fn monomial_minimality_matches_brute_force() {
        // Edge ideals of random graphs: minimal primes = minimal vertex covers.
        let r = Ring::new(10, 65521);
        let mut rng = crate::rng::Rng::new(0xC0DE);
        for _ in 0..30 {
            let nv = 4 + rng.below(5) as usize;
            let mut edges = Vec::new();
            for a in 0..nv {
                for b in a + 1..nv {
                    if rng.below(3) == 0 {
                        edges.push((a, b));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let gens: Vec<Poly> = edges
                .iter()
                .map(|&(a, b)| {
                    parse_poly(r, &format!("x{a}*x{b}")).unwrap()
                })
                .collect();
            let out = tri_monomial(&gens);
            // No output contains another.
            for (i, t) in out.iter().enumerate() {
                let ti: BTreeSet<usize> = t.ranks().collect();
                for (j, u) in out.iter().enumerate() {
                    if i != j {
                        let uj: BTreeSet<usize> = u.ranks().collect();
                        assert!(!ti.is_subset(&uj) || ti == uj);
                    }
                }
            }
            // Compare against brute-force minimal vertex covers.
            let mut covers: Vec<BTreeSet<usize>> = Vec::new();
            for mask in 0u32..(1 << nv) {
                let set: BTreeSet<usize> = (0..nv).filter(|&v| mask >> v & 1 == 1).collect();
                if edges.iter().all(|&(a, b)| set.contains(&a) || set.contains(&b)) {
                    covers.push(set);
                }
            }
            let minimal: BTreeSet<BTreeSet<usize>> = covers
                .iter()
                .filter(|c| !covers.iter().any(|d| d.len() < c.len() && d.is_subset(c)))
                .cloned()
                .collect();
            let got: BTreeSet<BTreeSet<usize>> =
                out.iter().map(|t| t.ranks().collect()).collect();
            assert_eq!(got, minimal);
        }
    }

    #[test]
    fn sat_of_monic_chain_is_the_chain_ideal() {
        let r = ring();
        let t = TriangularSet::from_polys(
            r,
            [parse_poly(r, "x1 - x2").unwrap(), parse_poly(r, "x2^2 - x2").unwrap()],
        );
        let gb = sat_generators(&t, crate::ring::DEFAULT_SPAIR_BUDGET).unwrap();
        for f in t.members() {
            assert!(normal_form(f, &gb).is_zero());
        }
        assert_eq!(gb.len(), 2);
    }

    #[test]
    fn sat_of_variable_chain_is_itself() {
        let r = ring();
        let t = TriangularSet::from_polys(
            r,
            ["x1", "x3", "x4", "x5"].iter().map(|s| parse_poly(r, s).unwrap()),
        );
        let gb = sat_generators(&t, crate::ring::DEFAULT_SPAIR_BUDGET).unwrap();
        assert_eq!(gb, t.to_vec());
    }

    #[test]
    fn sat_of_adjacent_minor_chain_contains_all_minors() {
        let r = ring();
        let t = TriangularSet::from_polys(
            r,
            [
                parse_poly(r, "x0*x3 - x1*x2").unwrap(),
                parse_poly(r, "x2*x5 - x3*x4").unwrap(),
                parse_poly(r, "x4*x7 - x5*x6").unwrap(),
            ],
        );
        let gb = sat_generators(&t, crate::ring::DEFAULT_SPAIR_BUDGET).unwrap();
        // On the saturated cell the 2x4 matrix has rank one, so every
        // 2x2 minor of it reduces to zero.
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            let m = parse_poly(
                r,
                &format!("x{}*x{} - x{}*x{}", 2 * i, 2 * j + 1, 2 * i + 1, 2 * j),
            )
            .unwrap();
            assert!(normal_form(&m, &gb).is_zero(), "minor ({i},{j}) not in sat");
            assert!(prem_chain(&m, &t.to_vec()).is_zero());
        }
    }

    #[test]
    fn prime_form_examples() {
        let r = ring();
        let single = TriangularSet::from_polys(r, [parse_poly(r, "x0*x3 - x1*x2").unwrap()]);
        assert_eq!(is_prime_form(&single), Primality::Prime);

        let linear = TriangularSet::from_polys(
            r,
            [parse_poly(r, "x2").unwrap(), parse_poly(r, "x3").unwrap()],
        );
        assert_eq!(is_prime_form(&linear), Primality::Prime);

        let two_quadrics = TriangularSet::from_polys(
            r,
            [parse_poly(r, "x0^2 - x1").unwrap(), parse_poly(r, "x1^2 - x2").unwrap()],
        );
        assert_eq!(is_prime_form(&two_quadrics), Primality::Unknown);
    }

    #[test]
    fn irreducibility_of_quadratic_forms() {
        let r = Ring::new(9, 13);
        // x0^2 + x0*x8 + x8^2: discriminant x8^2 - 4x8^2 = -3x8^2;
        // -3 is a QR mod 13 (it is 10 = 6^2), so this factors.
        let f = parse_poly(r, "x0^2 + x0*x8 + x8^2").unwrap();
        assert_eq!(irreducible(&f), Some(false));
        // Over p = 5, -3 = 2 is a non-residue: irreducible.
        let r5 = Ring::new(9, 5);
        let f5 = parse_poly(r5, "x0^2 + x0*x8 + x8^2").unwrap();
        assert_eq!(irreducible(&f5), Some(true));
    }

    fn uni_check(s: &str, p: u64, expect: bool) {
        let r = Ring::new(1, p);
        let f = parse_poly(r, s).unwrap();
        assert_eq!(irreducible(&f), Some(expect), "{s} mod {p}");
    }

    #[test]
    fn univariate_irreducibility() {
        uni_check("x0^2 + 1", 7, true);
        uni_check("x0^2 - 1", 7, false);
        uni_check("x0^3 + x0 + 1", 5, true); // no roots mod 5 and cubic
        uni_check("x0^4 + x0 + 1", 5, false); // root at 3
    }

    #[test]
    fn univariate_irreducibility_matches_trial_division() {
        // Quartics and below: f is reducible iff some monic polynomial of
        // degree 1 or 2 divides it.
        for &p in &[3u64, 5] {
            let r = Ring::new(1, p);
            let mut rng = crate::rng::Rng::new(0x1DEA + p);
            for _ in 0..80 {
                let d = 2 + rng.below(3) as u32;
                let mut f = Poly::from_terms(r, [(Monomial::var(1, 0, d), 1)]);
                for e in 0..d {
                    f.add_term(Monomial::var(1, 0, e), rng.below(p));
                }
                let got = irreducible(&f).unwrap();
                let mut divisible = false;
                'outer: for d2 in 1..=2u32.min(d - 1) {
                    let count = (p as usize).pow(d2);
                    for mask in 0..count {
                        let mut g = Poly::from_terms(r, [(Monomial::var(1, 0, d2), 1)]);
                        let mut k = mask;
                        for e in 0..d2 {
                            g.add_term(Monomial::var(1, 0, e), (k % p as usize) as u64);
                            k /= p as usize;
                        }
                        if prem(&f, &g).is_zero() {
                            divisible = true;
                            break 'outer;
                        }
                    }
                }
                assert_eq!(got, !divisible, "{f} mod {p}");
            }
        }
    }
}
