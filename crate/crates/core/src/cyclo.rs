//! Exact sums of roots of unity.
//!
//! A [`CycSum`] is an element of `Z[ζ_L]` stored in the power basis
//! `1, ζ, …, ζ^{φ(L)-1}` obtained by reducing modulo the cyclotomic
//! polynomial `Φ_L`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use parking_lot::RwLock;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};

static MODULUS_CAP: AtomicU64 = AtomicU64::new(1_000_000);

/// Largest modulus a binary operation may produce.
pub fn modulus_cap() -> u64 {
    MODULUS_CAP.load(Ordering::Relaxed)
}

pub fn set_modulus_cap(cap: u64) {
    MODULUS_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// A reduced fraction `num/den` read modulo 1, with `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalAngle {
    num: u64,
    den: u64,
}

impl RationalAngle {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let (num, den) = if den < 0 {
            (-(num as i128), -(den as i128))
        } else {
            (num as i128, den as i128)
        };
        let r = num.rem_euclid(den);
        let g = r.gcd(&den);
        Ok(Self {
            num: (r / g) as u64,
            den: (den / g) as u64,
        })
    }

    pub fn zero() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn from_ratio(r: &BigRational) -> Result<Self> {
        let den = r.denom().clone();
        let num = r.numer().mod_floor(&den);
        let den = den.to_i64().ok_or(Error::Overflow)?;
        let num = num.to_i64().ok_or(Error::Overflow)?;
        Self::new(num, den)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = self.den.lcm(&other.den);
        let a = self.num as u128 * (den / self.den) as u128;
        let b = other.num as u128 * (den / other.den) as u128;
        Self::new(((a + b) % den as u128) as i64, den as i64).unwrap()
    }

    pub fn scale(&self, k: i64) -> Self {
        let r = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Self::new(r as i64, self.den as i64).unwrap()
    }

    /// Exponent of `ζ_l` representing this angle; `l` must be a multiple of the denominator.
    pub fn exponent_in(&self, l: u64) -> Result<u64> {
        if l % self.den != 0 {
            return Err(Error::NotMultiple(l, self.den));
        }
        Ok(self.num * (l / self.den))
    }
}

struct Cyclotomic {
    degree: usize,
    /// Nonzero coefficients below the leading term, as `(index, coeff)`.
    tail: Vec<(usize, i64)>,
}

static CYCLOTOMIC: Lazy<RwLock<HashMap<u64, Arc<Cyclotomic>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

fn cyclotomic_dense(l: u64) -> Vec<i64> {
    let mut p = vec![0i64; l as usize + 1];
    p[0] = -1;
    p[l as usize] = 1;
    for d in arith::divisors(l as i64).unwrap() {
        if d as u64 == l {
            continue;
        }
        let q = cyclotomic(d as u64);
        let mut divisor = vec![0i64; q.degree + 1];
        divisor[q.degree] = 1;
        for &(i, c) in &q.tail {
            divisor[i] = c;
        }
        p = divide_monic(&p, &divisor);
    }
    p
}

fn divide_monic(p: &[i64], d: &[i64]) -> Vec<i64> {
    let n = p.len() - 1;
    let m = d.len() - 1;
    let mut rem = p.to_vec();
    let mut quot = vec![0i64; n - m + 1];
    for i in (0..=n - m).rev() {
        let c = rem[i + m];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in d.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn cyclotomic(l: u64) -> Arc<Cyclotomic> {
    if let Some(c) = CYCLOTOMIC.read().get(&l) {
        return c.clone();
    }
    let dense = cyclotomic_dense(l);
    let degree = dense.len() - 1;
    let tail = dense[..degree]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c))
        .collect();
    let c = Arc::new(Cyclotomic { degree, tail });
    CYCLOTOMIC.write().entry(l).or_insert(c).clone()
}

/// Coefficients of `Φ_l`, constant term first.
pub fn cyclotomic_polynomial(l: u64) -> Vec<i64> {
    let c = cyclotomic(l);
    let mut p = vec![0; c.degree + 1];
    p[c.degree] = 1;
    for &(i, a) in &c.tail {
        p[i] = a;
    }
    p
}

trait Coef: Clone + Zero + CheckedAdd + CheckedSub + CheckedMul + From<i64> {}
impl Coef for i128 {}
impl Coef for BigInt {}

/// Reduce a vector indexed by `Z/l` modulo `Φ_l`, truncating to `φ(l)` entries.
fn reduce<T: Coef>(mut full: Vec<T>, phi: &Cyclotomic) -> Option<Vec<T>> {
    let deg = phi.degree;
    for i in (deg..full.len()).rev() {
        let c = std::mem::replace(&mut full[i], T::zero());
        if c.is_zero() {
            continue;
        }
        for &(j, a) in &phi.tail {
            let t = c.checked_mul(&T::from(a))?;
            let k = i - deg + j;
            full[k] = full[k].checked_sub(&t)?;
        }
    }
    full.truncate(deg);
    Some(full)
}

fn to_i128_vec(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(|c| c.to_i64().map(i128::from)).collect()
}

/// An element of `Z[ζ_L]` in canonical form.
#[derive(Debug, Clone)]
pub struct CycSum {
    l: u64,
    coeffs: Vec<BigInt>,
}

impl CycSum {
    pub fn zero(l: u64) -> Self {
        let l = l.max(1);
        let deg = cyclotomic(l).degree;
        Self {
            l,
            coeffs: vec![BigInt::zero(); deg],
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self {
            l: 1,
            coeffs: vec![n.into()],
        }
    }

    fn check_cap(l: u64) -> Result<()> {
        let cap = modulus_cap();
        if l > cap {
            Err(Error::ModulusCap(l, cap))
        } else {
            Ok(())
        }
    }

    /// Build from multiplicities of each exponent: `Σ counts[j] ζ_l^j`.
    pub fn from_counts(l: u64, counts: &[i64]) -> Result<Self> {
        if l == 0 {
            return Err(Error::ZeroDenominator);
        }
        Self::check_cap(l)?;
        let mut full = vec![0i128; l as usize];
        for (j, &c) in counts.iter().enumerate() {
            full[j % l as usize] += c as i128;
        }
        Ok(Self::from_full_i128(l, full))
    }

    /// Build from arbitrary coefficients indexed by exponent (taken mod `l`).
    pub fn from_coeffs(l: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if l == 0 {
            return Err(Error::ZeroDenominator);
        }
        Self::check_cap(l)?;
        let mut full = vec![BigInt::zero(); l as usize];
        for (j, c) in coeffs.into_iter().enumerate() {
            full[j % l as usize] += c;
        }
        Ok(Self::from_full(l, full))
    }

    fn from_full_i128(l: u64, full: Vec<i128>) -> Self {
        let phi = cyclotomic(l);
        match reduce(full.clone(), &phi) {
            Some(v) => Self {
                l,
                coeffs: v.into_iter().map(BigInt::from).collect(),
            },
            None => Self::from_full(l, full.into_iter().map(BigInt::from).collect()),
        }
    }

    fn from_full(l: u64, full: Vec<BigInt>) -> Self {
        if let Some(small) = to_i128_vec(&full) {
            return Self::from_full_i128(l, small);
        }
        let phi = cyclotomic(l);
        let coeffs = reduce(full, &phi).expect("bigint arithmetic does not overflow");
        Self { l, coeffs }
    }

    /// `e(a/q) = ζ_q^a`.
    pub fn root_of_unity(a: i64, q: i64) -> Result<Self> {
        Self::from_angle(&RationalAngle::new(a, q)?)
    }

    pub fn from_angle(t: &RationalAngle) -> Result<Self> {
        let mut counts = vec![0i64; t.den() as usize];
        counts[t.num() as usize] = 1;
        Self::from_counts(t.den(), &counts)
    }

    pub fn modulus(&self) -> u64 {
        self.l
    }

    /// Canonical coefficients; length `φ(L)`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Re-express in `Z[ζ_m]` for a multiple `m` of the current modulus.
    pub fn rebase(&self, m: u64) -> Result<Self> {
        if m == 0 || m % self.l != 0 {
            return Err(Error::NotMultiple(m, self.l));
        }
        Self::check_cap(m)?;
        Ok(self.rebase_unchecked(m))
    }

    fn rebase_unchecked(&self, m: u64) -> Self {
        if m == self.l {
            return self.clone();
        }
        let k = (m / self.l) as usize;
        let mut full = vec![BigInt::zero(); m as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            full[j * k] = c.clone();
        }
        Self::from_full(m, full)
    }

    fn common(&self, other: &Self) -> Result<(Self, Self)> {
        let m = self.l.lcm(&other.l);
        Self::check_cap(m)?;
        Ok((self.rebase_unchecked(m), other.rebase_unchecked(m)))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(Self { l: a.l, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.common(other)?;
        let l = a.l as usize;
        if let (Some(x), Some(y)) = (to_i128_vec(&a.coeffs), to_i128_vec(&b.coeffs)) {
            if let Some(full) = convolve(&x, &y, l) {
                return Ok(Self::from_full_i128(a.l, full));
            }
        }
        let mut full = vec![BigInt::zero(); l];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                full[(i + j) % l] += x * y;
            }
        }
        Ok(Self::from_full(a.l, full))
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        Self {
            l: self.l,
            coeffs: self.coeffs.iter().map(|c| c * &k).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            l: self.l,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Complex conjugate, `ζ^j -> ζ^{-j}`.
    pub fn conj(&self) -> Self {
        let l = self.l as usize;
        let mut full = vec![BigInt::zero(); l];
        for (j, c) in self.coeffs.iter().enumerate() {
            full[(l - j) % l] = c.clone();
        }
        Self::from_full(self.l, full)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational integer this sum equals, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.as_integer().is_some()
    }

    /// Floating point value and a bound on its rounding error.
    pub fn to_complex(&self) -> (Complex64, f64) {
        let mut z = Complex64::zero();
        let mut mass = 0.0;
        let step = std::f64::consts::TAU / self.l as f64;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_f64().unwrap_or(f64::INFINITY);
            z += Complex64::from_polar(c, step * j as f64);
            mass += c.abs();
        }
        let err = (mass + 1.0) * 16.0 * f64::EPSILON * (self.coeffs.len() as f64 + 1.0);
        (z, err)
    }
}

fn convolve(x: &[i128], y: &[i128], l: usize) -> Option<Vec<i128>> {
    let mut full = vec![0i128; l];
    for (i, a) in x.iter().enumerate() {
        if *a == 0 {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            let k = (i + j) % l;
            full[k] = i128::checked_add(full[k], i128::checked_mul(*a, *b)?)?;
        }
    }
    Some(full)
}

impl PartialEq for CycSum {
    fn eq(&self, other: &Self) -> bool {
        if self.l == other.l {
            return self.coeffs == other.coeffs;
        }
        let m = self.l.lcm(&other.l);
        self.rebase_unchecked(m).coeffs == other.rebase_unchecked(m).coeffs
    }
}

impl Eq for CycSum {}

impl PartialEq<i64> for CycSum {
    fn eq(&self, other: &i64) -> bool {
        self.as_integer() == Some(BigInt::from(*other))
    }
}

impl From<i64> for CycSum {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&CycSum> for &CycSum {
            type Output = CycSum;
            fn $m(self, rhs: &CycSum) -> CycSum {
                self.$f(rhs).expect("cyclotomic modulus cap exceeded")
            }
        }
        impl std::ops::$tr for CycSum {
            type Output = CycSum;
            fn $m(self, rhs: CycSum) -> CycSum {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::AddAssign<&CycSum> for CycSum {
    fn add_assign(&mut self, rhs: &CycSum) {
        *self = &*self + rhs;
    }
}

impl std::ops::Neg for CycSum {
    type Output = CycSum;
    fn neg(self) -> CycSum {
        CycSum::neg(&self)
    }
}

impl std::iter::Sum for CycSum {
    fn sum<I: Iterator<Item = CycSum>>(iter: I) -> Self {
        iter.fold(CycSum::zero(1), |a, b| a + b)
    }
}

impl fmt::Display for CycSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z{}^{j}", self.l)?,
                _ => write!(f, "{mag}*z{}^{j}", self.l)?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct CycRepr {
    #[serde(rename = "L")]
    l: u64,
    coeffs: Vec<IntRepr>,
}

impl Serialize for CycSum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => IntRepr::Small(v),
                None => IntRepr::Big(c.to_string()),
            })
            .collect();
        CycRepr { l: self.l, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycSum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CycRepr::deserialize(d)?;
        let coeffs = r
            .coeffs
            .into_iter()
            .map(|c| match c {
                IntRepr::Small(v) => Ok(BigInt::from(v)),
                IntRepr::Big(s) => s.parse::<BigInt>().map_err(D::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycSum::from_coeffs(r.l, coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len(), 49);
        assert_eq!(p105[7], -2);
    }

    #[test]
    fn sum_of_all_roots_vanishes() {
        for l in 2..40u64 {
            let s = CycSum::from_counts(l, &vec![1; l as usize]).unwrap();
            assert!(s.is_zero(), "L = {l}");
        }
    }

    #[test]
    fn primitive_roots_sum_to_moebius() {
        for l in 1..60i64 {
            let counts: Vec<i64> = (0..l).map(|a| (arith::gcd(a, l) == 1) as i64).collect();
            let s = CycSum::from_counts(l as u64, &counts).unwrap();
            assert_eq!(s, arith::moebius(l).unwrap(), "L = {l}");
        }
    }

    #[test]
    fn cross_modulus_equality() {
        let a = CycSum::root_of_unity(1, 3).unwrap();
        let b = CycSum::root_of_unity(2, 6).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rebase(12).unwrap(), b);
        let minus_one = CycSum::root_of_unity(1, 2).unwrap();
        assert_eq!(minus_one, -1);
    }

    #[test]
    fn conjugate_and_norm() {
        let z = CycSum::root_of_unity(2, 7).unwrap();
        assert_eq!(&z * &z.conj(), 1);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(CycSum::root_of_unity(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn cap_enforced() {
        let a = CycSum::root_of_unity(1, 999_983).unwrap();
        let b = CycSum::root_of_unity(1, 7).unwrap();
        assert!(matches!(a.try_add(&b), Err(Error::ModulusCap(..))));
    }

    #[test]
    fn json_roundtrip() {
        let z = CycSum::root_of_unity(1, 5).unwrap().scale(3) + CycSum::integer(2);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"L":5,"coeffs":[2,3,0,0]}"#);
        let back: CycSum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
    }
}
