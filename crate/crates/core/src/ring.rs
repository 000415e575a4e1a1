//! Coefficient rings for the algebra kernels.
//!
//! One trait serves four regimes: exact rationals, rational-coefficient
//! polynomials in a formal variable mu, residues mod p, and high-precision
//! fixed-point reals/complexes (the latter live in [`crate::numeric`]).
//! All operations are exact in their ring; equality is decidable.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Exact arbitrary-precision rational, the workhorse coefficient type.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

/// Commutative coefficient ring with exact equality.
///
/// `inv` is partial (None when the element is not a unit); `div_int` divides by a
/// nonzero integer and must be exact in rings of characteristic zero.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn from_i64(n: i64) -> Self;
    fn inv(&self) -> Option<Self>;
    fn div_int(&self, n: i64) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul_i64(&self, n: i64) -> Self {
        self.mul(&Self::from_i64(n))
    }
}

impl Coeff for Rat {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn from_i64(n: i64) -> Self {
        rat_int(n)
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn div_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero");
        self / rat_int(n)
    }
}

/// Polynomial in the formal coupling constant mu, with rational coefficients.
/// Degree-0 polynomials double as plain rationals (the mu = 0 regime).
#[derive(Clone, PartialEq, Eq)]
pub struct MuPoly {
    /// coeffs[k] multiplies mu^k; no trailing zeros.
    coeffs: Vec<Rat>,
}

impl MuPoly {
    pub fn constant(c: Rat) -> MuPoly {
        let mut p = MuPoly { coeffs: vec![c] };
        p.normalize();
        p
    }

    /// c * mu^k.
    pub fn monomial(c: Rat, k: usize) -> MuPoly {
        let mut coeffs = vec![rat_int(0); k + 1];
        coeffs[k] = c;
        let mut p = MuPoly { coeffs };
        p.normalize();
        p
    }

    pub fn mu() -> MuPoly {
        MuPoly::monomial(rat_int(1), 1)
    }

    fn normalize(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if Zero::is_zero(last) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(|| rat_int(0))
    }

    pub fn iter_monomials(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !Zero::is_zero(*c))
    }

    /// Is this a constant (degree <= 0) polynomial?
    pub fn as_constant(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(rat_int(0)),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Evaluate at an exact rational value of mu.
    pub fn eval_rat(&self, mu: &Rat) -> Rat {
        let mut acc = rat_int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * mu + c;
        }
        acc
    }
}

impl fmt::Debug for MuPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.iter_monomials() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*mu")?,
                _ => write!(f, "{c}*mu^{k}")?,
            }
        }
        Ok(())
    }
}

impl Coeff for MuPoly {
    fn zero() -> Self {
        MuPoly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        MuPoly::constant(rat_int(1))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        let mut p = MuPoly { coeffs };
        p.normalize();
        p
    }
    fn neg(&self) -> Self {
        MuPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return MuPoly::zero();
        }
        let mut coeffs = vec![rat_int(0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !Zero::is_zero(b) {
                    coeffs[i + j] += a * b;
                }
            }
        }
        let mut p = MuPoly { coeffs };
        p.normalize();
        p
    }
    fn from_i64(n: i64) -> Self {
        MuPoly::constant(rat_int(n))
    }
    fn inv(&self) -> Option<Self> {
        // only constants are units in Q[mu]
        match self.as_constant() {
            Some(c) if !Zero::is_zero(&c) => Some(MuPoly::constant(c.recip())),
            _ => None,
        }
    }
    fn div_int(&self, n: i64) -> Self {
        assert!(n != 0);
        MuPoly {
            coeffs: self.coeffs.iter().map(|c| c / rat_int(n)).collect(),
        }
    }
}

/// Residues mod an odd prime p < 2^31. `p == 0` is a neutral sentinel produced by
/// `zero`/`one`/`from_i64`; binary ops adopt the nonzero modulus of either side.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Fp {
        let m = v.rem_euclid(p as i64) as u64;
        Fp { v: m, p }
    }

    fn unify(a: &Fp, b: &Fp) -> u64 {
        match (a.p, b.p) {
            (0, q) => q,
            (q, 0) => q,
            (q, r) => {
                assert_eq!(q, r, "mixed moduli");
                q
            }
        }
    }

    fn reduced(v: u64, p: u64) -> Fp {
        if p == 0 {
            Fp { v, p }
        } else {
            Fp { v: v % p, p }
        }
    }

    pub fn pow(&self, mut e: u64) -> Fp {
        let p = self.p;
        assert!(p > 0);
        let mut base = self.v % p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp { v: acc, p }
    }
}

impl Coeff for Fp {
    fn zero() -> Self {
        Fp { v: 0, p: 0 }
    }
    fn one() -> Self {
        Fp { v: 1, p: 0 }
    }
    fn is_zero(&self) -> bool {
        if self.p == 0 {
            self.v == 0
        } else {
            self.v % self.p == 0
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        let p = Fp::unify(self, rhs);
        Fp::reduced(self.v + rhs.v, p)
    }
    fn neg(&self) -> Self {
        if self.p == 0 {
            panic!("cannot negate modulus-free residue");
        }
        Fp {
            v: (self.p - self.v % self.p) % self.p,
            p: self.p,
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let p = Fp::unify(self, rhs);
        Fp::reduced(self.v * rhs.v, p)
    }
    fn from_i64(n: i64) -> Self {
        assert!(n >= 0, "use Fp::new for negative values");
        Fp { v: n as u64, p: 0 }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() || self.p == 0 {
            return None;
        }
        // Fermat
        Some(self.pow(self.p - 2))
    }
    fn div_int(&self, n: i64) -> Self {
        assert!(self.p > 0, "div_int needs a modulus");
        let inv = Fp::new(n, self.p).inv().expect("divisor not invertible mod p");
        self.mul(&inv)
    }
}

/// Affine-linear expression c + sum lin[i] * x_i over the rationals, the solver's
/// degree-by-degree linearization ring. Multiplication panics if both factors carry
/// linear parts: the weight grading guarantees such products never survive truncation,
/// so their appearance is a bug.
#[derive(Clone, PartialEq, Debug)]
pub struct AffLin {
    pub constant: Rat,
    pub lin: BTreeMap<u32, Rat>,
}

impl AffLin {
    pub fn constant(c: Rat) -> AffLin {
        AffLin {
            constant: c,
            lin: BTreeMap::new(),
        }
    }

    pub fn unknown(i: u32) -> AffLin {
        let mut lin = BTreeMap::new();
        lin.insert(i, rat_int(1));
        AffLin {
            constant: rat_int(0),
            lin,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.lin.is_empty()
    }

    fn prune(mut self) -> AffLin {
        self.lin.retain(|_, c| !Zero::is_zero(c));
        self
    }
}

impl Coeff for AffLin {
    fn zero() -> Self {
        AffLin::constant(rat_int(0))
    }
    fn one() -> Self {
        AffLin::constant(rat_int(1))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.constant) && self.lin.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut lin = self.lin.clone();
        for (i, c) in &rhs.lin {
            *lin.entry(*i).or_insert_with(|| rat_int(0)) += c;
        }
        AffLin {
            constant: &self.constant + &rhs.constant,
            lin,
        }
        .prune()
    }
    fn neg(&self) -> Self {
        AffLin {
            constant: -&self.constant,
            lin: self.lin.iter().map(|(i, c)| (*i, -c)).collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        if !self.lin.is_empty() && !rhs.lin.is_empty() {
            panic!("quadratic term in affine-linear ring: grading violated");
        }
        let (aff, k) = if self.lin.is_empty() {
            (rhs, &self.constant)
        } else {
            (self, &rhs.constant)
        };
        AffLin {
            constant: &aff.constant * k,
            lin: aff.lin.iter().map(|(i, c)| (*i, c * k)).collect(),
        }
        .prune()
    }
    fn from_i64(n: i64) -> Self {
        AffLin::constant(rat_int(n))
    }
    fn inv(&self) -> Option<Self> {
        // (c + l)^{-1} = c^{-1} - c^{-2} l  exactly, since l^2 = 0 under the grading
        if Zero::is_zero(&self.constant) {
            return None;
        }
        let ci = self.constant.recip();
        let ci2 = &ci * &ci;
        Some(AffLin {
            constant: ci,
            lin: self.lin.iter().map(|(i, c)| (*i, -(c * &ci2))).collect(),
        })
    }
    fn div_int(&self, n: i64) -> Self {
        assert!(n != 0);
        let d = rat_int(n);
        AffLin {
            constant: &self.constant / &d,
            lin: self.lin.iter().map(|(i, c)| (*i, c / &d)).collect(),
        }
    }
}

/// Exact integrality test for a rational.
pub fn is_integer(r: &Rat) -> bool {
    r.denom().abs() == BigInt::one()
}

/// Exact factorial as a rational.
pub fn factorial(n: usize) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from(acc)
}

/// Signed binomial C(n, k) for integer n (possibly negative), k >= 0, exact.
pub fn binomial(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(n - j);
    }
    let mut den = BigInt::one();
    for j in 1..=k as i64 {
        den *= BigInt::from(j);
    }
    // exact division: product of k consecutive integers is divisible by k!
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_poly_arith() {
        let mu = MuPoly::mu();
        let p = mu.mul(&mu).add(&MuPoly::from_i64(3)); // mu^2 + 3
        assert_eq!(p.coeff(0), rat_int(3));
        assert_eq!(p.coeff(2), rat_int(1));
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval_rat(&rat_int(2)), rat_int(7));
        assert!(p.inv().is_none());
        assert_eq!(
            MuPoly::constant(rat(1, 2)).inv().unwrap(),
            MuPoly::from_i64(2)
        );
    }

    #[test]
    fn fp_arith() {
        let a = Fp::new(3, 7);
        let b = Fp::new(5, 7);
        assert_eq!(a.mul(&b).v, 1);
        assert_eq!(a.inv().unwrap().v, 5);
        assert_eq!(Fp::new(-1, 7).v, 6);
        assert_eq!(Fp::new(1, 7).div_int(6).v, 6); // 1/6 = 6 mod 7
    }

    #[test]
    fn afflin_inverse() {
        let x = AffLin::unknown(0);
        let f = AffLin::constant(rat_int(2)).add(&x); // 2 + x
        let g = f.inv().unwrap(); // 1/2 - x/4, the inverse modulo quadratic terms
        assert_eq!(g.constant, rat(1, 2));
        assert_eq!(g.lin[&0], rat(-1, 4));
    }

    #[test]
    #[should_panic(expected = "quadratic")]
    fn afflin_quadratic_panics() {
        let x = AffLin::unknown(0);
        let _ = x.mul(&x);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 2), BigInt::from(1));
        assert_eq!(binomial(-2, 1), BigInt::from(-2));
        assert_eq!(binomial(-1, 1), BigInt::from(-1));
        assert_eq!(binomial(-3, 3), BigInt::from(-10));
    }
}
