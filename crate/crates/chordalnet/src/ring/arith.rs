use super::{Poly, Ring};
use crate::gf;
use std::ops::{Add, Mul, Neg, Sub};

impl Poly {
    fn checked_ring(&self, other: &Poly) -> Ring {
        debug_assert_eq!(self.ring, other.ring, "mixed rings");
        self.ring
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_ring(rhs);
        let mut out = self.clone();
        for (m, c) in rhs.terms_desc() {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_ring(rhs);
        let p = self.ring.p;
        let mut out = self.clone();
        for (m, c) in rhs.terms_desc() {
            out.add_term(m.clone(), gf::neg(c, p));
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let p = self.ring.p;
        self.scale(p - 1)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let ring = self.checked_ring(rhs);
        let mut out = Poly::zero(ring);
        for (ma, ca) in self.terms_desc() {
            for (mb, cb) in rhs.terms_desc() {
                out.add_term(ma.mul(mb), gf::mul(ca, cb, ring.p));
            }
        }
        out
    }
}
