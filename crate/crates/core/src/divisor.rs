//! The two-variable divisor sums `σ_{ν1,ν2}(n1, n2)` and truncated checks of
//! the Dirichlet series identities that produce them from Ramanujan sums.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, ramanujan_c, tau};
use crate::error::{Error, Result};

const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

fn npow(x: f64, s: Complex64) -> Complex64 {
    (s * x.ln()).exp()
}

/// Riemann zeta for `s != 1` with `Re(s) > 0`, by Euler–Maclaurin summation
/// with eight correction terms.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    if s.re <= 0.0 || (s - 1.0).norm() < 1e-12 {
        return Err(Error::Domain(format!("zeta needs Re(s) > 0 and s != 1, got {s}")));
    }
    let n = 20.0 + s.im.abs();
    let nn = n as u64;
    let n = nn as f64;
    let mut acc: Complex64 = (1..nn).map(|k| npow(k as f64, -s)).sum();
    acc += npow(n, 1.0 - s) / (s - 1.0) + npow(n, -s) * 0.5;
    let mut rising = s;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = k as i32 + 1;
        acc += rising * (*b / fact) * npow(n, -s - (2 * k - 1) as f64);
        rising *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
        fact *= ((2 * k + 1) * (2 * k + 2)) as f64;
    }
    Ok(acc)
}

fn rpow(p: u64, e: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p)).pow(e as i32)
}

/// `det[a^{k1+k2+2}; a^{k1+1}; 1] / det[a^2; a; 1]` over `(a, b, c)`; `None`
/// when two of the variables coincide.
pub fn schur_ratio(k1: u32, k2: u32, v: &[BigRational; 3]) -> Option<BigRational> {
    let det = |e: [u32; 3]| {
        let m: Vec<Vec<BigRational>> = e.iter().map(|&k| v.iter().map(|x| x.pow(k as i32)).collect()).collect();
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    let den = det([2, 1, 0]);
    if den.is_zero() {
        return None;
    }
    Some(det([k1 + k2 + 2, k1 + 1, 0]) / den)
}

/// `Σ_{i ≤ k1} Σ_{j ≤ k2} β^{i+j} α^i Σ_{l ≤ k1-i+j} α^l`.
pub fn schur_monomial(k1: u32, k2: u32, alpha: &BigRational, beta: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 0..=k1 {
        for j in 0..=k2 {
            let inner: BigRational = (0..=(k1 - i + j)).map(|l| alpha.pow(l as i32)).fold(BigRational::zero(), |a, b| a + b);
            acc += beta.pow((i + j) as i32) * alpha.pow(i as i32) * inner;
        }
    }
    acc
}

fn check_args(n1: i64, n2: i64) -> Result<()> {
    if n1 < 1 || n2 < 1 {
        return Err(Error::Domain(format!("σ needs n1, n2 >= 1, got ({n1}, {n2})")));
    }
    Ok(())
}

fn multiplicative(n1: i64, n2: i64, local: impl Fn(u64, u32, u32) -> BigRational) -> Result<BigRational> {
    check_args(n1, n2)?;
    let mut primes: Vec<u64> = factorize(n1)?.into_iter().chain(factorize(n2)?).map(|(p, _)| p).collect();
    primes.sort_unstable();
    primes.dedup();
    let val = |n: i64, p: u64| factorize(n).map(|f| f.iter().find(|q| q.0 == p).map_or(0, |q| q.1));
    let mut acc = BigRational::one();
    for p in primes {
        acc *= local(p, val(n1, p)?, val(n2, p)?);
    }
    Ok(acc)
}

/// Prime by prime through the determinant ratio `β^{-k1} S_{k1,k2}(1, β, αβ)`,
/// `α = p^{ν1}`, `β = p^{ν2}`; degenerate parameters use the monomial form.
pub fn sigma2_schur(nu: [i64; 2], n1: i64, n2: i64) -> Result<BigRational> {
    multiplicative(n1, n2, |p, k1, k2| {
        let (a, b) = (rpow(p, nu[0]), rpow(p, nu[1]));
        let v = [BigRational::one(), b.clone(), &a * &b];
        match schur_ratio(k1, k2, &v) {
            Some(s) => s / b.pow(k1 as i32),
            None => schur_monomial(k1, k2, &a, &b),
        }
    })
}

/// Prime by prime through the monomial expansion.
pub fn sigma2_monomial(nu: [i64; 2], n1: i64, n2: i64) -> Result<BigRational> {
    multiplicative(n1, n2, |p, k1, k2| schur_monomial(k1, k2, &rpow(p, nu[0]), &rpow(p, nu[1])))
}

/// `Σ_{e1 | n1} Σ_{e2 | n2} Σ_{e3 | n1 e2 / e1} e1^{ν1+ν2} e2^{ν2} e3^{ν1}`.
pub fn sigma2_expansion(nu: [i64; 2], n1: i64, n2: i64) -> Result<BigRational> {
    check_args(n1, n2)?;
    let pw = |x: i64, e: i64| BigRational::from_integer(BigInt::from(x)).pow(e as i32);
    let mut acc = BigRational::zero();
    for e1 in divisors(n1)? {
        for e2 in divisors(n2)? {
            for e3 in divisors(n1 / e1 * e2)? {
                acc += pw(e1, nu[0] + nu[1]) * pw(e2, nu[1]) * pw(e3, nu[0]);
            }
        }
    }
    Ok(acc)
}

/// `σ_{ν1,ν2}(n1, n2)` for integer exponents, exact; all three routes must agree.
pub fn sigma2(nu: [i64; 2], n1: i64, n2: i64) -> Result<BigRational> {
    let a = sigma2_expansion(nu, n1, n2)?;
    let b = sigma2_schur(nu, n1, n2)?;
    let c = sigma2_monomial(nu, n1, n2)?;
    if a != b || a != c {
        return Err(Error::Mismatch(format!("σ_{nu:?}({n1}, {n2}): {a} / {b} / {c}")));
    }
    Ok(a)
}

/// `σ_{ν1,ν2}(n1, n2)` for complex exponents through the divisor expansion.
pub fn sigma2_complex(nu: [Complex64; 2], n1: i64, n2: i64) -> Result<Complex64> {
    check_args(n1, n2)?;
    let mut acc = Complex64::zero();
    for e1 in divisors(n1)? {
        for e2 in divisors(n2)? {
            for e3 in divisors(n1 / e1 * e2)? {
                acc += npow(e1 as f64, nu[0] + nu[1]) * npow(e2 as f64, nu[1]) * npow(e3 as f64, nu[0]);
            }
        }
    }
    Ok(acc)
}

fn sigma1(alpha: i64, n: i64) -> Result<BigRational> {
    Ok(divisors(n)?.into_iter().map(|d| rpow(d as u64, alpha)).fold(BigRational::zero(), |a, b| a + b))
}

/// `σ_α(np) = σ_α(n) σ_α(p) - p^α σ_α(n/p)` for `p | n`, exactly.
pub fn hecke_check(alpha: i64, n: i64, p: i64) -> Result<bool> {
    if p < 2 || n < 1 || n % p != 0 {
        return Err(Error::Precondition(format!("{p} does not divide {n}")));
    }
    let lhs = sigma1(alpha, n * p)?;
    let rhs = sigma1(alpha, n)? * sigma1(alpha, p)? - rpow(p as u64, alpha) * sigma1(alpha, n / p)?;
    Ok(lhs == rhs)
}

/// The same relation for a real exponent, up to relative tolerance `tol`.
pub fn hecke_check_real(alpha: f64, n: i64, p: i64, tol: f64) -> Result<bool> {
    if p < 2 || n < 1 || n % p != 0 {
        return Err(Error::Precondition(format!("{p} does not divide {n}")));
    }
    let s = |m: i64| -> Result<f64> { Ok(divisors(m)?.into_iter().map(|d| (d as f64).powf(alpha)).sum()) };
    let lhs = s(n * p)?;
    let rhs = s(n)? * s(p)? - (p as f64).powf(alpha) * s(n / p)?;
    Ok((lhs - rhs).abs() <= tol * lhs.abs().max(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(with = "crate::sums::complex_pair")]
    pub lhs: Complex64,
    #[serde(with = "crate::sums::complex_pair")]
    pub rhs: Complex64,
    pub abs_err: f64,
    #[serde(rename = "D")]
    pub d: u64,
    pub tail_bound: f64,
}

fn mobius_sieve(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut composite = vec![false; n + 1];
    mu[0] = 0;
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        for k in (p..=n).step_by(p) {
            if k > p {
                composite[k] = true;
            }
            mu[k] = -mu[k];
        }
        for k in (p * p..=n).step_by(p * p) {
            mu[k] = 0;
        }
    }
    mu
}

/// `M(x) = Σ_{r ≤ x} μ(r) r^{-s}` for every `0 <= x <= n`.
fn mertens_prefix(mu: &[i8], s: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(mu.len());
    let mut acc = Complex64::zero();
    out.push(acc);
    for (r, &m) in mu.iter().enumerate().skip(1) {
        if m != 0 {
            acc += npow(r as f64, -s) * m as f64;
        }
        out.push(acc);
    }
    out
}

fn require_half_plane(s: Complex64) -> Result<()> {
    if s.re <= 1.0 {
        return Err(Error::Domain(format!("need Re(s) > 1, got {s}")));
    }
    Ok(())
}

/// `f μ(d1) c_f(n) c_{d2}(n d1 / f)` when `f | n d1`, else 0: the integer
/// coefficient of `d1^{-s1} d2^{-s2} f^{1-s1-s2}` in the double series.
pub fn inner_term(d1: i64, d2: i64, f: i64, n: i64) -> Result<i64> {
    if (n * d1) % f != 0 {
        return Ok(0);
    }
    Ok(f * crate::arith::moebius(d1)? * ramanujan_c(f, n)? * ramanujan_c(d2, n * d1 / f)?)
}

/// `∫_D^∞ (log t)^3 t^{-1-a} dt`.
fn log_cubed_tail(d: f64, a: f64) -> f64 {
    let l = d.ln();
    d.powf(-a) * (l.powi(3) / a + 3.0 * l * l / (a * a) + 6.0 * l / a.powi(3) + 6.0 / a.powi(4))
}

/// Truncation `d1, d2 <= D` of
/// `ζ(s1) ζ(s2) ζ(s1+s2-1) Σ μ(d1) d1^{-s1} d2^{-s2} Σ_{f | d1 n} c_f(n) c_{d2}(n d1/f) f^{1-s1-s2}`
/// against `σ_{1-s1, 1-s2}(1, n)`.
///
/// `tail_bound` is exact for the `d2 > D` part and uses the mean order of
/// `τ²` for the `d1 > D` part.
pub fn verify_divisor_identity(s1: Complex64, s2: Complex64, n: i64, d: u64) -> Result<Report> {
    require_half_plane(s1)?;
    require_half_plane(s2)?;
    if d == 0 || n < 1 {
        return Err(Error::Domain("need D >= 1 and n >= 1".into()));
    }
    let mu = mobius_sieve(d as usize);
    let m2 = mertens_prefix(&mu, s2);
    let s3 = s1 + s2 - 1.0;
    let (sg1, sg2) = (s1.re, s2.re);
    let mut acc = Complex64::zero();
    let mut d2_tail = 0.0;
    for d1 in 1..=d as i64 {
        if mu[d1 as usize] == 0 {
            continue;
        }
        let w1 = npow(d1 as f64, -s1) * mu[d1 as usize] as f64;
        for f in divisors(n * d1)? {
            let cf = ramanujan_c(f, n)?;
            if cf == 0 {
                continue;
            }
            let k = n * d1 / f;
            let mut inner = Complex64::zero();
            let gs = divisors(k)?;
            for &g in &gs {
                inner += npow(g as f64, 1.0 - s2) * m2[(d / g as u64) as usize];
            }
            acc += w1 * inner * cf as f64 * npow(f as f64, -s3);
            d2_tail += (cf.abs() as f64) * gs.len() as f64 * (d as f64).powf(1.0 - sg2) / (sg2 - 1.0)
                / ((d1 as f64).powf(sg1) * (f as f64).powf(s3.re));
        }
    }
    let z = zeta(s1)? * zeta(s2)? * zeta(s3)?;
    let lhs = z * acc;
    let rhs = sigma2_complex([1.0 - s1, 1.0 - s2], 1, n)?;
    let zeta2 = zeta(Complex64::new(sg2, 0.0))?.re;
    let tn = tau(n)? as f64;
    let d1_tail = n as f64 * tn * tn * zeta2 * log_cubed_tail(d as f64, sg1 - 1.0) / std::f64::consts::PI.powi(2);
    Ok(Report {
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
        d,
        tail_bound: z.norm() * (d2_tail + d1_tail),
    })
}

/// Truncation `q <= D` of `ζ(s) Σ_q c_q(n) q^{-s}` against `σ_{1-s}(n)`.
pub fn ramanujan_classical_check(s: Complex64, n: i64, d: u64) -> Result<Report> {
    require_half_plane(s)?;
    if d == 0 || n < 1 {
        return Err(Error::Domain("need D >= 1 and n >= 1".into()));
    }
    let mu = mobius_sieve(d as usize);
    let m = mertens_prefix(&mu, s);
    let mut acc = Complex64::zero();
    let mut tail = 0.0;
    for g in divisors(n)? {
        acc += npow(g as f64, 1.0 - s) * m[(d / g as u64) as usize];
        tail += (g as f64).powf(1.0 - s.re) * (d as f64 / g as f64).powf(1.0 - s.re) / (s.re - 1.0);
    }
    let z = zeta(s)?;
    let lhs = z * acc;
    let rhs: Complex64 = divisors(n)?.into_iter().map(|g| npow(g as f64, 1.0 - s)).sum();
    Ok(Report {
        lhs,
        rhs,
        abs_err: (lhs - rhs).norm(),
        d,
        tail_bound: z.norm() * tail,
    })
}
