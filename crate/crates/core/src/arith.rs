//! Elementary number theory: gcds, inverses, multiplicative functions,
//! Ramanujan and Kloosterman sums.

use std::cell::RefCell;
use std::collections::HashMap;

use num_integer::Integer;

use crate::cyclo::CycSum;
use crate::error::{Error, Result};

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// `(g, s, t)` with `g = gcd(a, b) >= 0` and `s a + t b = g`.
pub fn egcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Inverse of `a` modulo `|q|` in `[0, |q|)`. Returns 0 for `|q| = 1`.
pub fn inv_mod(a: i64, q: i64) -> Result<i64> {
    if q == 0 {
        return Err(Error::ZeroDenominator);
    }
    let q = q.abs();
    if q == 1 {
        return Ok(0);
    }
    let (g, s, _) = egcd(a.rem_euclid(q), q);
    if g != 1 {
        return Err(Error::NotInvertible { a, q });
    }
    Ok(s.rem_euclid(q))
}

pub fn mul_mod(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

fn pow_mod_u64(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut r = 1u128 % m;
    let mut b = b as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Prime factorization as `(p, e)` pairs in increasing order of `p`.
pub type Factorization = Vec<(u64, u32)>;

thread_local! {
    static FACTOR_CACHE: RefCell<HashMap<u64, Factorization>> = RefCell::new(HashMap::new());
}

pub fn factorize(n: i64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Domain("cannot factor 0".into()));
    }
    let n = n.unsigned_abs();
    if let Some(f) = FACTOR_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return Ok(f);
    }
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        if m > 1 && is_prime(m) {
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    FACTOR_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() > 1 << 16 {
            c.clear();
        }
        c.insert(n, out.clone());
    });
    Ok(out)
}

pub fn euler_phi(n: i64) -> Result<i64> {
    if n <= 0 {
        return Err(Error::Domain(format!("phi({n}) is undefined")));
    }
    Ok(factorize(n)?
        .iter()
        .fold(n, |acc, &(p, _)| acc / p as i64 * (p as i64 - 1)))
}

pub fn moebius(n: i64) -> Result<i64> {
    if n <= 0 {
        return Err(Error::Domain(format!("mu({n}) is undefined")));
    }
    let f = factorize(n)?;
    if f.iter().any(|&(_, e)| e > 1) {
        Ok(0)
    } else if f.len() % 2 == 0 {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// Number of positive divisors of `|n|`.
pub fn tau(n: i64) -> Result<i64> {
    Ok(factorize(n)?.iter().map(|&(_, e)| e as i64 + 1).product())
}

/// Positive divisors of `|n|` in increasing order.
pub fn divisors(n: i64) -> Result<Vec<i64>> {
    let mut ds = vec![1i64];
    for (p, e) in factorize(n)? {
        let len = ds.len();
        let mut pk = 1i64;
        for _ in 0..e {
            pk *= p as i64;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    Ok(ds)
}

/// Largest divisor of `n` supported on the primes dividing `m`.
pub fn primary_part(n: i64, m: i64) -> Result<i64> {
    let mut out = 1;
    for (p, e) in factorize(n)? {
        if m % p as i64 == 0 {
            out *= (p as i64).pow(e);
        }
    }
    Ok(out)
}

/// Reduced residues modulo `|c|` in `[0, |c|)`; `{0}` when `|c| = 1`.
pub fn units(c: i64) -> impl Iterator<Item = i64> {
    let c = c.abs().max(1);
    (0..c).filter(move |&a| gcd(a, c) == 1)
}

/// Ramanujan's sum `c_q(n) = Σ_{g | (q,n)} μ(q/g) g`.
pub fn ramanujan_c(q: i64, n: i64) -> Result<i64> {
    if q <= 0 {
        return Err(Error::Domain(format!("c_q needs q >= 1, got {q}")));
    }
    let g = gcd(q, n);
    let mut s = 0;
    for d in divisors(g)? {
        s += moebius(q / d)? * d;
    }
    Ok(s)
}

/// `Σ_{a mod q, (a,q)=1} e(an/q)` computed as an exact cyclotomic sum.
pub fn ramanujan_c_direct(q: i64, n: i64) -> Result<CycSum> {
    if q <= 0 {
        return Err(Error::Domain(format!("c_q needs q >= 1, got {q}")));
    }
    let mut counts = vec![0i64; q as usize];
    for a in units(q) {
        counts[mul_mod(a, n, q) as usize] += 1;
    }
    CycSum::from_counts(q as u64, &counts)
}

/// Classical Kloosterman sum `S(m, n; c) = Σ_{ad ≡ 1 (c)} e((ma + nd)/c)`.
///
/// A negative modulus gives the same value as `|c|`.
pub fn kloosterman(m: i64, n: i64, c: i64) -> Result<CycSum> {
    if c == 0 {
        return Err(Error::ZeroDenominator);
    }
    let c = c.abs();
    let mut counts = vec![0i64; c as usize];
    for a in units(c) {
        let d = inv_mod(a, c)?;
        let e = (mul_mod(m, a, c) + mul_mod(n, d, c)) % c;
        counts[e as usize] += 1;
    }
    CycSum::from_counts(c as u64, &counts)
}

/// `τ(c) (m, n, c)^{1/2} c^{1/2}`.
pub fn weil_bound(m: i64, n: i64, c: i64) -> f64 {
    let c = c.abs();
    let g = gcd(gcd(m, n), c);
    tau(c).unwrap() as f64 * (g as f64).sqrt() * (c as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        let (g, s, t) = egcd(6, 4);
        assert_eq!(g, 2);
        assert_eq!(6 * s + 4 * t, 2);
        assert_eq!(inv_mod(3, 7), Ok(5));
        assert_eq!(inv_mod(5, 1), Ok(0));
        assert!(inv_mod(2, 4).is_err());
        assert_eq!(ramanujan_c(6, 4), Ok(-1));
        assert_eq!(kloosterman(1, 1, 3).unwrap(), -1);
        assert_eq!(kloosterman(7, -3, 1).unwrap(), 1);
        assert!(divisors(0).is_err());
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
        assert_eq!(factorize(600_851_475_143).unwrap(), vec![(71, 1), (839, 1), (1471, 1), (6857, 1)]);
    }

    #[test]
    fn ramanujan_routes_agree() {
        for q in 1..40 {
            for n in -30..30 {
                assert_eq!(ramanujan_c_direct(q, n).unwrap(), ramanujan_c(q, n).unwrap(), "c_{q}({n})");
            }
        }
    }

    #[test]
    fn kloosterman_is_real_and_weil_bounded() {
        for c in 1..40 {
            for m in -4..5 {
                for n in -4..5 {
                    let s = kloosterman(m, n, c).unwrap();
                    assert_eq!(s, s.conj());
                    let (z, _) = s.to_complex();
                    assert!(z.norm() <= weil_bound(m, n, c) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn kloosterman_degenerates_to_ramanujan() {
        for c in 1..30 {
            for n in -6..7 {
                assert_eq!(kloosterman(0, n, c).unwrap(), ramanujan_c(c, n).unwrap());
            }
        }
    }
}
