//! Arithmetic in the prime field `Z_p` for odd primes `p`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted by [`Prime::new`].
pub const MAX_PRIME: u64 = 1 << 31;

/// An odd prime, validated at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if p < 3 || p > MAX_PRIME || p % 2 == 0 {
            return Err(Error::Domain(format!("{p} is not an odd prime in [3, 2^31]")));
        }
        let mut d = 3;
        while d * d <= p {
            if p % d == 0 {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            d += 2;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn zp(self, v: i64) -> Zp {
        Zp::new(v, self)
    }

    pub fn zero(self) -> Zp {
        Zp { v: 0, p: self.0 }
    }

    pub fn one(self) -> Zp {
        Zp { v: 1, p: self.0 }
    }

    /// Iterate over all of `Z_p`.
    pub fn elements(self) -> impl Iterator<Item = Zp> {
        (0..self.0).map(move |v| Zp { v, p: self.0 })
    }

    /// Iterate over `Z_p^*`.
    pub fn units(self) -> impl Iterator<Item = Zp> {
        (1..self.0).map(move |v| Zp { v, p: self.0 })
    }

    /// `p mod 4 == 1`.
    pub fn is_one_mod_four(self) -> bool {
        self.0 % 4 == 1
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Prime> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `Z_p`, stored as its representative in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zp {
    v: u64,
    p: u64,
}

impl Zp {
    pub fn new(v: i64, p: Prime) -> Zp {
        let m = p.0 as i128;
        Zp { v: (v as i128).rem_euclid(m) as u64, p: p.0 }
    }

    pub fn value(self) -> u64 {
        self.v
    }

    pub fn prime(self) -> Prime {
        Prime(self.p)
    }

    pub fn is_zero(self) -> bool {
        self.v == 0
    }

    /// Representative in `(-p/2, p/2]`.
    pub fn signed(self) -> i64 {
        if self.v > self.p / 2 {
            self.v as i64 - self.p as i64
        } else {
            self.v as i64
        }
    }

    pub fn pow(self, mut e: u64) -> Zp {
        let mut base = self;
        let mut acc = Zp { v: 1, p: self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn same(self, o: Zp) {
        assert_eq!(self.p, o.p, "mixed moduli in Z_p arithmetic");
    }
}

impl fmt::Display for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Zp {
    type Output = Zp;
    fn add(self, o: Zp) -> Zp {
        self.same(o);
        let s = self.v + o.v;
        Zp { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
}

impl Sub for Zp {
    type Output = Zp;
    fn sub(self, o: Zp) -> Zp {
        self + (-o)
    }
}

impl Neg for Zp {
    type Output = Zp;
    fn neg(self) -> Zp {
        Zp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
}

impl Mul for Zp {
    type Output = Zp;
    fn mul(self, o: Zp) -> Zp {
        self.same(o);
        Zp { v: ((self.v as u128 * o.v as u128) % self.p as u128) as u64, p: self.p }
    }
}

impl AddAssign for Zp {
    fn add_assign(&mut self, o: Zp) {
        *self = *self + o;
    }
}

impl SubAssign for Zp {
    fn sub_assign(&mut self, o: Zp) {
        *self = *self - o;
    }
}

impl MulAssign for Zp {
    fn mul_assign(&mut self, o: Zp) {
        *self = *self * o;
    }
}

/// Multiplicative inverse; errors on zero.
pub fn inv(x: Zp) -> Result<Zp> {
    if x.v == 0 {
        return Err(Error::Domain("inverse of zero in Z_p".into()));
    }
    Ok(x.pow(x.p - 2))
}

/// Inverse of a value known to be nonzero.
pub(crate) fn inv_nz(x: Zp) -> Zp {
    inv(x).expect("nonzero element")
}

/// `2^{-1}` in `Z_p`.
pub fn half(p: Prime) -> Zp {
    Zp { v: (p.0 + 1) / 2, p: p.0 }
}

/// 1 if `x` is a non-square, 0 otherwise (0 counts as a square).
pub fn chi(x: Zp) -> u8 {
    if legendre(x) == -1 {
        1
    } else {
        0
    }
}

/// Legendre symbol via Euler's criterion.
pub fn legendre(x: Zp) -> i8 {
    if x.v == 0 {
        return 0;
    }
    if x.pow((x.p - 1) / 2).v == 1 {
        1
    } else {
        -1
    }
}

/// Smallest square root of `x`, if one exists.
pub fn sqrt_mod(x: Zp) -> Option<Zp> {
    if x.v == 0 {
        return Some(x);
    }
    if legendre(x) != 1 {
        return None;
    }
    let p = x.p;
    if p <= 10_000 {
        return (1..p).map(|v| Zp { v, p }).find(|a| *a * *a == x);
    }
    let r = tonelli_shanks(x);
    Some(if r.v <= p - r.v { r } else { -r })
}

fn tonelli_shanks(n: Zp) -> Zp {
    let p = n.p;
    let one = Zp { v: 1, p };
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = Zp { v: 2, p };
    while legendre(z) != -1 {
        z = z + one;
    }
    let mut m = s;
    let mut c = z.pow(q);
    let mut t = n.pow(q);
    let mut r = n.pow(q.div_ceil(2));
    while t != one {
        let mut i = 0;
        let mut tt = t;
        while tt != one {
            tt = tt * tt;
            i += 1;
        }
        let b = c.pow(1 << (m - i - 1));
        m = i;
        c = b * b;
        t = t * c;
        r = r * b;
    }
    r
}

/// True iff `-1` is a square mod `p`, i.e. `p ≡ 1 mod 4`.
pub fn minus_one_is_square(p: Prime) -> bool {
    p.0 % 4 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_moduli() {
        for p in [0, 1, 2, 4, 9, 15, 21] {
            assert!(Prime::new(p).is_err());
        }
        assert!(Prime::new(2147483647).is_ok());
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(inv(pr(5).zp(2)).unwrap().value(), 3);
        assert_eq!(inv(pr(3).zp(2)).unwrap().value(), 2);
        assert_eq!(inv(pr(7).zp(3)).unwrap().value(), 5);
        assert!(inv(pr(7).zero()).is_err());
    }

    #[test]
    fn inverse_exhaustive() {
        for p in [3, 5, 7, 11, 13] {
            let p = pr(p);
            for x in p.units() {
                assert_eq!(x * inv(x).unwrap(), p.one());
            }
        }
    }

    fn squares(p: Prime) -> Vec<Zp> {
        p.elements().map(|y| y * y).collect()
    }

    #[test]
    fn chi_and_legendre_examples() {
        assert_eq!(chi(pr(5).zp(4)), 0);
        assert_eq!(chi(pr(5).zp(2)), 1);
        assert_eq!(chi(pr(3).zp(0)), 0);
        assert_eq!(legendre(pr(5).zp(1)), 1);
        assert_eq!(legendre(pr(5).zp(2)), -1);
        assert_eq!(legendre(pr(11).zp(0)), 0);
    }

    #[test]
    fn chi_matches_enumeration() {
        for p in [3, 5, 7, 11, 13] {
            let p = pr(p);
            let sq = squares(p);
            for x in p.elements() {
                assert_eq!(chi(x) == 0, sq.contains(&x));
            }
        }
    }

    #[test]
    fn legendre_multiplicative() {
        for p in [3, 5, 7, 11, 13] {
            let p = pr(p);
            for x in p.units() {
                for y in p.units() {
                    assert_eq!(legendre(x * y), legendre(x) * legendre(y));
                }
            }
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(sqrt_mod(pr(7).zp(2)).unwrap().value(), 3);
        assert_eq!(sqrt_mod(pr(5).zp(2)), None);
        assert_eq!(sqrt_mod(pr(3).zp(1)).unwrap().value(), 1);
    }

    #[test]
    fn sqrt_iff_square() {
        for p in [3, 5, 7, 11, 13, 10007] {
            let p = pr(p);
            for x in p.elements().take(200) {
                match sqrt_mod(x) {
                    Some(a) => {
                        assert_eq!(a * a, x);
                        assert_eq!(chi(x), 0);
                    }
                    None => assert_eq!(chi(x), 1),
                }
            }
        }
    }

    #[test]
    fn tonelli_agrees_with_search() {
        let p = pr(1_000_003);
        for v in [2, 3, 5, 10, 12345, 999_999] {
            let x = p.zp(v);
            if let Some(a) = sqrt_mod(x) {
                assert_eq!(a * a, x);
                assert!(a.value() <= p.get() - a.value());
            }
        }
    }

    #[test]
    fn minus_one() {
        assert!(minus_one_is_square(pr(5)));
        assert!(!minus_one_is_square(pr(3)));
        assert!(!minus_one_is_square(pr(7)));
        for p in [3, 5, 7, 11, 13, 17] {
            let p = pr(p);
            assert_eq!(minus_one_is_square(p), sqrt_mod(-p.one()).is_some());
        }
    }

    #[test]
    fn one_of_three_is_square() {
        for p in [3, 5, 7, 11, 13] {
            let p = pr(p);
            for x in p.elements() {
                assert!(chi(-p.one()) == 0 || chi(x) == 0 || chi(-x) == 0);
            }
        }
    }

    #[test]
    fn negative_literals_normalize() {
        assert_eq!(pr(5).zp(-1).value(), 4);
        assert_eq!(pr(5).zp(-12).value(), 3);
        assert_eq!(pr(7).zp(6).signed(), -1);
    }
}
