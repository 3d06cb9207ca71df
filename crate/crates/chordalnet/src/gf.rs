//! Scalar arithmetic in the prime field GF(p).
//!
//! Elements are stored as `u64` values in `[0, p)`. The modulus is kept
//! below `2^31` so that products fit in `u64` without widening.

/// Largest admissible modulus (exclusive). Keeps `a * b` inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    debug_assert!(p < MAX_MODULUS);
    a * b % p
}

pub fn pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse by Fermat's little theorem. Panics on zero.
pub fn inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero in GF({p})");
    pow(a, p - 2, p)
}

/// Reduce a signed integer into `[0, p)`.
pub fn from_i64(v: i64, p: u64) -> u64 {
    let m = v.rem_euclid(p as i64);
    m as u64
}

/// Euler's criterion: is `a` a square in GF(p)? Zero counts as a square.
pub fn is_square(a: u64, p: u64) -> bool {
    if a % p == 0 {
        return true;
    }
    pow(a, (p - 1) / 2, p) == 1
}

/// Square root in GF(p) via Tonelli-Shanks. Returns `None` for non-residues.
pub fn sqrt(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if !is_square(a, p) {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow(a, (p + 1) / 4, p));
    }
    // Tonelli-Shanks for p = 1 mod 4.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while is_square(z, p) {
        z += 1;
    }
    let mut m = s;
    let mut c = pow(z, q, p);
    let mut t = pow(a, q, p);
    let mut r = pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt, p);
            i += 1;
        }
        let b = pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mul(b, b, p);
        t = mul(t, c, p);
        r = mul(r, b, p);
    }
    Some(r)
}

/// Trial-division primality check, sufficient for moduli below `2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
