//! Exact arithmetic in `Q(i, ω_p)` and dense matrices over it.
//!
//! Elements are stored in the basis `i^a ω^b` with `a ∈ {0,1}` and
//! `b ∈ {0, …, p-2}`, as integer numerators over one positive common
//! denominator kept in lowest terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modp::{half, legendre, Prime, Zp};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo {
    p: Prime,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclo {
    fn width(p: Prime) -> usize {
        p.get() as usize - 1
    }

    fn raw(p: Prime, num: Vec<BigInt>, den: BigInt) -> Cyclo {
        let mut c = Cyclo { p, num, den };
        c.normalize();
        c
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            for x in self.num.iter_mut() {
                *x = -x.clone();
            }
        }
        if self.num.iter().all(|x| x.is_zero()) {
            self.den = BigInt::one();
            return;
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for x in &self.num {
            if !x.is_zero() {
                g = g.gcd(x);
                if g.is_one() {
                    return;
                }
            }
        }
        for x in self.num.iter_mut() {
            *x = &*x / &g;
        }
        self.den = &self.den / &g;
    }

    pub fn zero(p: Prime) -> Cyclo {
        Cyclo { p, num: vec![BigInt::zero(); 2 * Self::width(p)], den: BigInt::one() }
    }

    pub fn one(p: Prime) -> Cyclo {
        Cyclo::from_int(p, 1)
    }

    pub fn from_int(p: Prime, n: i64) -> Cyclo {
        let mut c = Cyclo::zero(p);
        c.num[0] = BigInt::from(n);
        c
    }

    pub fn from_rational(p: Prime, r: &BigRational) -> Cyclo {
        let mut num = vec![BigInt::zero(); 2 * Self::width(p)];
        num[0] = r.numer().clone();
        Cyclo::raw(p, num, r.denom().clone())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// `ω^k`.
    pub fn omega_pow(k: Zp) -> Cyclo {
        let p = k.prime();
        let mut arr = vec![BigInt::zero(); p.get() as usize];
        arr[k.value() as usize] = BigInt::one();
        let zero = vec![BigInt::zero(); p.get() as usize];
        Cyclo::from_cyclic(p, &arr, &zero, BigInt::one())
    }

    /// `i^s`.
    pub fn i_pow(p: Prime, s: i64) -> Cyclo {
        let mut c = Cyclo::zero(p);
        let w = Self::width(p);
        match s.rem_euclid(4) {
            0 => c.num[0] = BigInt::one(),
            1 => c.num[w] = BigInt::one(),
            2 => c.num[0] = -BigInt::one(),
            _ => c.num[w] = -BigInt::one(),
        }
        c
    }

    /// Coefficient of `i^a ω^b`.
    pub fn coeff(&self, a: usize, b: usize) -> BigRational {
        BigRational::new(self.num[a * Self::width(self.p) + b].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        *self == Cyclo::one(self.p)
    }

    /// The value as a rational, if it has no `i` or `ω` component.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num.iter().skip(1).all(|x| x.is_zero()) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Build from unreduced cyclic coefficient arrays of length `p`
    /// (`re + i·im`, with `ω^p = 1`).
    fn from_cyclic(p: Prime, re: &[BigInt], im: &[BigInt], den: BigInt) -> Cyclo {
        let w = Self::width(p);
        let mut num = Vec::with_capacity(2 * w);
        for part in [re, im] {
            let last = &part[w];
            for x in &part[..w] {
                num.push(x - last);
            }
        }
        Cyclo::raw(p, num, den)
    }

    fn cyclic_parts(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let w = Self::width(self.p);
        let mut re = self.num[..w].to_vec();
        re.push(BigInt::zero());
        let mut im = self.num[w..].to_vec();
        im.push(BigInt::zero());
        (re, im)
    }

    /// Exact element from a raw integer vector `Σ c_k ω^k` (length `p`).
    pub fn from_zomega(p: Prime, c: &[i128]) -> Cyclo {
        let re: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let im = vec![BigInt::zero(); c.len()];
        Cyclo::from_cyclic(p, &re, &im, BigInt::one())
    }

    fn check(&self, o: &Cyclo) {
        assert_eq!(self.p, o.p, "mixed moduli in cyclotomic arithmetic");
    }

    pub fn try_add(&self, o: &Cyclo) -> Result<Cyclo> {
        if self.p != o.p {
            return Err(Error::Modulus(self.p.get(), o.p.get()));
        }
        Ok(self + o)
    }

    pub fn try_mul(&self, o: &Cyclo) -> Result<Cyclo> {
        if self.p != o.p {
            return Err(Error::Modulus(self.p.get(), o.p.get()));
        }
        Ok(self * o)
    }

    /// Complex conjugation: `ω ↦ ω^{-1}`, `i ↦ -i`.
    pub fn conj(&self) -> Cyclo {
        let (re, im) = self.cyclic_parts();
        let n = re.len();
        let mut cre = vec![BigInt::zero(); n];
        let mut cim = vec![BigInt::zero(); n];
        for k in 0..n {
            let j = (n - k) % n;
            cre[j] = re[k].clone();
            cim[j] = -im[k].clone();
        }
        Cyclo::from_cyclic(self.p, &cre, &cim, self.den.clone())
    }

    pub fn scale_int(&self, k: i64) -> Cyclo {
        let k = BigInt::from(k);
        Cyclo::raw(self.p, self.num.iter().map(|x| x * &k).collect(), self.den.clone())
    }

    pub fn scale_rational(&self, r: &BigRational) -> Cyclo {
        Cyclo::raw(
            self.p,
            self.num.iter().map(|x| x * r.numer()).collect(),
            &self.den * r.denom(),
        )
    }

    pub fn pow(&self, mut e: u64) -> Cyclo {
        let mut base = self.clone();
        let mut acc = Cyclo::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Inverse of an element whose norm `x·conj(x)` is a nonzero rational.
    /// This covers every nonzero element of the scalar monoid `G_p`.
    pub fn inv_unit(&self) -> Result<Cyclo> {
        let n = self * &self.conj();
        match n.as_rational() {
            Some(r) if !r.is_zero() => Ok(self.conj().scale_rational(&r.recip())),
            _ => Err(Error::Domain("element is not an invertible scalar of the fragment".into())),
        }
    }

    /// Numeric embedding with `ω = e^{2πi/p}`; for inspection only.
    pub fn to_complex(&self) -> (f64, f64) {
        let p = self.p.get() as f64;
        let w = Self::width(self.p);
        let den = self.den.to_f64().unwrap_or(f64::NAN);
        let (mut re, mut im) = (0.0, 0.0);
        for a in 0..2 {
            for b in 0..w {
                let c = &self.num[a * w + b];
                if c.is_zero() {
                    continue;
                }
                let c = c.to_f64().unwrap_or(f64::NAN) / den;
                let t = 2.0 * std::f64::consts::PI * b as f64 / p;
                let (x, y) = (c * t.cos(), c * t.sin());
                if a == 0 {
                    re += x;
                    im += y;
                } else {
                    re -= y;
                    im += x;
                }
            }
        }
        (re, im)
    }

    pub fn to_decimal(&self) -> String {
        let (re, im) = self.to_complex();
        format!("{re:.6}{}{:.6}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = Self::width(self.p);
        let mut terms = Vec::new();
        for a in 0..2 {
            for b in 0..w {
                let c = self.coeff(a, b);
                if c.is_zero() {
                    continue;
                }
                let mut t = c.to_string();
                if a == 1 {
                    t.push_str("*i");
                }
                if b > 0 {
                    t.push_str(&format!("*w^{b}"));
                }
                terms.push(t);
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, o: &Cyclo) -> Cyclo {
        self.check(o);
        if self.den == o.den {
            return Cyclo::raw(
                self.p,
                self.num.iter().zip(&o.num).map(|(a, b)| a + b).collect(),
                self.den.clone(),
            );
        }
        let num = self.num.iter().zip(&o.num).map(|(a, b)| a * &o.den + b * &self.den).collect();
        Cyclo::raw(self.p, num, &self.den * &o.den)
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        self + &(-o)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { p: self.p, num: self.num.iter().map(|x| -x).collect(), den: self.den.clone() }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        self.check(o);
        if self.is_zero() || o.is_zero() {
            return Cyclo::zero(self.p);
        }
        let n = self.p.get() as usize;
        let (a0, a1) = self.cyclic_parts();
        let (b0, b1) = o.cyclic_parts();
        let mut re = vec![BigInt::zero(); n];
        let mut im = vec![BigInt::zero(); n];
        for j in 0..n {
            let (x0, x1) = (&a0[j], &a1[j]);
            if x0.is_zero() && x1.is_zero() {
                continue;
            }
            for k in 0..n {
                let (y0, y1) = (&b0[k], &b1[k]);
                if y0.is_zero() && y1.is_zero() {
                    continue;
                }
                let t = (j + k) % n;
                if !x0.is_zero() {
                    if !y0.is_zero() {
                        re[t] += x0 * y0;
                    }
                    if !y1.is_zero() {
                        im[t] += x0 * y1;
                    }
                }
                if !x1.is_zero() {
                    if !y0.is_zero() {
                        im[t] += x1 * y0;
                    }
                    if !y1.is_zero() {
                        re[t] -= x1 * y1;
                    }
                }
            }
        }
        Cyclo::from_cyclic(self.p, &re, &im, &self.den * &o.den)
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl $tr for Cyclo {
            type Output = Cyclo;
            fn $f(self, o: Cyclo) -> Cyclo {
                (&self).$f(&o)
            }
        }
        impl $tr<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $f(self, o: &Cyclo) -> Cyclo {
                (&self).$f(o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

/// `Σ_j ω^{c j²}` over `j ∈ Z_p`, by direct summation.
fn quadratic_sum(c: Zp) -> Cyclo {
    let p = c.prime();
    let mut arr = vec![0i128; p.get() as usize];
    for j in p.elements() {
        arr[(c * j * j).value() as usize] += 1;
    }
    Cyclo::from_zomega(p, &arr)
}

/// The positive real square root of `p`.
pub fn sqrt_p(p: Prime) -> Cyclo {
    let g = quadratic_sum(p.one());
    if p.is_one_mod_four() {
        g
    } else {
        &Cyclo::i_pow(p, 3) * &g
    }
}

/// `√p^r` for any integer `r`.
pub fn sqrt_p_pow(p: Prime, r: i64) -> Cyclo {
    let pp = BigInt::from(p.get());
    let whole = r.div_euclid(2);
    let rat = if whole >= 0 {
        BigRational::from_integer(pp.pow(whole as u32))
    } else {
        BigRational::new(BigInt::one(), pp.pow((-whole) as u32))
    };
    let base = Cyclo::from_rational(p, &rat);
    if r.rem_euclid(2) == 1 {
        &base * &sqrt_p(p)
    } else {
        base
    }
}

/// `Σ_j ω^{2^{-1} z j²}` for `z ≠ 0`.
pub fn quadratic_gauss_sum(z: Zp) -> Result<Cyclo> {
    if z.is_zero() {
        return Err(Error::Domain("quadratic Gauss sum needs z ≠ 0".into()));
    }
    Ok(quadratic_sum(half(z.prime()) * z))
}

/// Closed form `ℓ(2z)·ε_p·√p` of [`quadratic_gauss_sum`], where `ε_p` is 1
/// for `p ≡ 1 mod 4` and `i` for `p ≡ 3 mod 4`.
pub fn gauss_sum_closed_form(z: Zp) -> Result<Cyclo> {
    if z.is_zero() {
        return Err(Error::Domain("quadratic Gauss sum needs z ≠ 0".into()));
    }
    let p = z.prime();
    let sign = legendre(p.zp(2) * z) as i64;
    let eps = if p.is_one_mod_four() { Cyclo::one(p) } else { Cyclo::i_pow(p, 1) };
    Ok((&eps * &sqrt_p(p)).scale_int(sign))
}

/// `Σ_j ω^{2^{-1} z j²}` including `z = 0`, where the sum is `p`.
pub fn gauss_sum_or_p(z: Zp) -> Cyclo {
    if z.is_zero() {
        Cyclo::from_int(z.prime(), z.prime().get() as i64)
    } else {
        quadratic_sum(half(z.prime()) * z)
    }
}

/// Dense matrix over `Q(i, ω_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloMatrix {
    pub p: Prime,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Cyclo>,
}

impl CycloMatrix {
    pub fn new(p: Prime, rows: usize, cols: usize, entries: Vec<Cyclo>) -> Result<CycloMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{rows}x{cols} needs {} entries", rows * cols)));
        }
        Ok(CycloMatrix { p, rows, cols, entries })
    }

    pub fn zeros(p: Prime, rows: usize, cols: usize) -> CycloMatrix {
        CycloMatrix { p, rows, cols, entries: vec![Cyclo::zero(p); rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> CycloMatrix {
        let mut m = CycloMatrix::zeros(p, n, n);
        for k in 0..n {
            m.entries[k * n + k] = Cyclo::one(p);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Cyclo {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Cyclo) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mat_mul(&self, o: &CycloMatrix) -> Result<CycloMatrix> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = CycloMatrix::zeros(self.p, self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * o.cols + c;
                    out.entries[idx] = &out.entries[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, o: &CycloMatrix) -> CycloMatrix {
        let rows = self.rows * o.rows;
        let cols = self.cols * o.cols;
        let mut out = CycloMatrix::zeros(self.p, rows, cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..o.rows {
                    for c2 in 0..o.cols {
                        let b = o.get(r2, c2);
                        if !b.is_zero() {
                            out.set(r1 * o.rows + r2, c1 * o.cols + c2, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CycloMatrix {
        let mut out = CycloMatrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> CycloMatrix {
        CycloMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x.conj()).collect(),
        }
    }

    pub fn scalar_mul(&self, s: &Cyclo) -> CycloMatrix {
        CycloMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    /// Scalar `c` with `self = c·o`, if one exists.
    pub fn proportionality(&self, o: &CycloMatrix) -> Option<Cyclo> {
        if self.rows != o.rows || self.cols != o.cols {
            return None;
        }
        let k = o.entries.iter().position(|x| !x.is_zero())?;
        let c = &self.entries[k] * &o.entries[k].inv_unit().ok()?;
        self.entries.iter().zip(&o.entries).all(|(a, b)| *a == b * &c).then_some(c)
    }
}

impl fmt::Display for CycloMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "{}", row.join(" | "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn omega_relations() {
        let p = pr(3);
        let w = Cyclo::omega_pow(p.one());
        assert!((&(&w * &w) * &w).is_one());
        let w2 = &w * &w;
        let expect = &(-&Cyclo::one(p)) - &w;
        assert_eq!(w2, expect);
        assert_eq!(Cyclo::i_pow(p, 2), Cyclo::from_int(p, -1));
    }

    #[test]
    fn sqrt_p_squares() {
        for p in [3, 5, 7, 11, 13] {
            let p = pr(p);
            let s = sqrt_p(p);
            assert_eq!(&s * &s, Cyclo::from_int(p, p.get() as i64));
            let (re, im) = s.to_complex();
            assert!((re - (p.get() as f64).sqrt()).abs() < 1e-9 && im.abs() < 1e-9);
        }
    }

    #[test]
    fn sqrt_p_three() {
        let p = pr(3);
        let (re, _) = sqrt_p(p).to_complex();
        assert!((re - 1.7320508).abs() < 1e-6);
    }

    #[test]
    fn gauss_examples() {
        let p = pr(5);
        assert_eq!(quadratic_gauss_sum(p.zp(2)).unwrap(), sqrt_p(p));
        let p = pr(3);
        let g = quadratic_gauss_sum(p.zp(2)).unwrap();
        let expect = &Cyclo::one(p) + &Cyclo::omega_pow(p.one()).scale_int(2);
        assert_eq!(g, expect);
        assert_eq!(g, &Cyclo::i_pow(p, 1) * &sqrt_p(p));
        assert!(quadratic_gauss_sum(p.zero()).is_err());
    }

    #[test]
    fn gauss_closed_form() {
        for p in [3, 5, 7, 11, 13] {
            let p = pr(p);
            for z in p.units() {
                let g = quadratic_gauss_sum(z).unwrap();
                assert_eq!(g, gauss_sum_closed_form(z).unwrap());
                assert_eq!(&g * &g.conj(), Cyclo::from_int(p, p.get() as i64));
            }
        }
    }

    #[test]
    fn conj_and_inverse() {
        let p = pr(7);
        let x = &(&Cyclo::i_pow(p, 1) * &Cyclo::omega_pow(p.zp(3))) * &sqrt_p_pow(p, -3);
        let y = x.inv_unit().unwrap();
        assert!((&x * &y).is_one());
        assert_eq!(x.conj().conj(), x);
        assert!(Cyclo::zero(p).inv_unit().is_err());
    }

    #[test]
    fn sqrt_powers() {
        let p = pr(5);
        for r in -4..5 {
            let a = sqrt_p_pow(p, r);
            let b = sqrt_p_pow(p, -r);
            assert!((&a * &b).is_one());
        }
        assert_eq!(sqrt_p_pow(p, 2), Cyclo::from_int(p, 5));
    }

    #[test]
    fn complex_embedding() {
        let p = pr(3);
        let (re, im) = Cyclo::omega_pow(p.one()).to_complex();
        assert!((re + 0.5).abs() < 1e-12 && (im - 0.8660254).abs() < 1e-6);
        assert_eq!(Cyclo::zero(p).to_complex(), (0.0, 0.0));
        let (re, im) = sqrt_p(pr(5)).to_complex();
        assert!((re - 2.2360679).abs() < 1e-6 && im.abs() < 1e-9);
    }

    fn hadamard(p: Prime) -> CycloMatrix {
        let n = p.get() as usize;
        let s = sqrt_p_pow(p, -1);
        let mut m = CycloMatrix::zeros(p, n, n);
        for j in 0..n {
            for k in 0..n {
                m.set(k, j, &Cyclo::omega_pow(p.zp((j * k) as i64)) * &s);
            }
        }
        m
    }

    #[test]
    fn matrix_ops() {
        let p = pr(3);
        let i = CycloMatrix::identity(p, 3);
        assert_eq!(i.kron(&i), CycloMatrix::identity(p, 9));
        let h = hadamard(p);
        assert_eq!(h.dagger().dagger(), h);
        assert_eq!(h.mat_mul(&h.dagger()).unwrap(), i);
        assert!(h.mat_mul(&i.kron(&i)).is_err());
    }

    #[test]
    fn display_format() {
        let p = pr(3);
        assert_eq!(Cyclo::zero(p).to_string(), "0");
        let x = &Cyclo::from_rational(p, &BigRational::new(1.into(), 2.into()))
            * &Cyclo::omega_pow(p.one());
        assert_eq!(x.to_string(), "1/2*w^1");
    }
}
