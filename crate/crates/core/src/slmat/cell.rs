use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{bruhat_coords_w0, stratum_invariants, IntMat3, RatMat3, StratumKey};
use crate::arith::{gcd, inv_mod};
use crate::error::{Error, Result};

/// Parameters of a double coset in a fixed stratum.
///
/// `x2` and `y1` are the smallest positive lifts (of classes mod `|d2|`,
/// `|d1|`) coprime to `d1 d2 f`; `x3, y3 ∈ (f, 2f]` with `x3 y3 ≡ 1 (mod f)`;
/// `0 <= k < f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellParams {
    pub d1: i64,
    pub d2: i64,
    pub f: i64,
    pub x2: i64,
    pub y1: i64,
    pub x3: i64,
    pub y3: i64,
    pub k: i64,
}

impl CellParams {
    pub fn key(&self) -> StratumKey {
        StratumKey {
            d1: self.d1,
            d2: self.d2,
            f: self.f,
        }
    }
}

/// The lift of `r mod f` lying in `(f, 2f]`.
pub fn canonical_lift(r: i64, f: i64) -> i64 {
    let r = r.rem_euclid(f);
    if r == 0 {
        2 * f
    } else {
        r + f
    }
}

/// Smallest positive integer `≡ r (mod |m|)` that is coprime to `n`.
pub fn smallest_coprime_lift(r: i64, m: i64, n: i64) -> i64 {
    let m = m.abs();
    let mut x = r.rem_euclid(m);
    if x == 0 {
        x = m;
    }
    while gcd(x, n) != 1 {
        x += m;
    }
    x
}

fn wide_div(num: i128, den: i128) -> Result<i64> {
    if num % den != 0 {
        return Err(Error::Precondition(format!("{den} does not divide {num}")));
    }
    i64::try_from(num / den).map_err(|_| Error::Overflow)
}

/// The matrix with prescribed `(x2, y1, x3, y3, u, v)` in stratum `(d1, d2, f)`;
/// its entries are rational in general.
#[allow(clippy::too_many_arguments)]
pub fn corollary_matrix(key: StratumKey, x2: i64, y1: i64, x3: i64, y3: i64, u: i64, v: i64) -> RatMat3 {
    let q = |n: i128, d: i128| BigRational::new(BigInt::from(n), BigInt::from(d));
    let (d1, d2, f) = (key.d1 as i128, key.d2 as i128, key.f as i128);
    let (x2, y1, x3, y3, u, v) = (x2 as i128, y1 as i128, x3 as i128, y3 as i128, u as i128, v as i128);
    RatMat3([
        [
            q(u * x2 - d1 * x3, d2),
            q(u * x2 * y1 - d1 * x3 * y1 - x2 * d2, d1 * d2),
            q(-v * x2 + u * x2 * y3 + d1 * (1 - x3 * y3), d1 * d2 * f),
        ],
        [q(u, 1), q(u * y1 - d2, d1), q(u * y3 - v, d1 * f)],
        [q(d1 * f, 1), q(f * y1, 1), q(y3, 1)],
    ])
}

/// The five congruences on `(u, v)` that make [`corollary_matrix`] integral.
#[allow(clippy::too_many_arguments)]
pub fn integrality_congruences(key: StratumKey, x2: i64, y1: i64, x3: i64, y3: i64, u: i64, v: i64) -> [bool; 5] {
    let (d1, d2, f) = (key.d1 as i128, key.d2 as i128, key.f as i128);
    let (x2, y1, x3, y3, u, v) = (x2 as i128, y1 as i128, x3 as i128, y3 as i128, u as i128, v as i128);
    let cong = |a: i128, b: i128, m: i128| (a - b).rem_euclid(m.abs()) == 0;
    [
        cong(u * x2, d1 * x3, d2),
        cong(u * y1, d2, d1),
        cong(u * x2 * y1, d1 * x3 * y1 + d2 * x2, d1 * d2),
        cong(v, u * y3, d1 * f),
        cong(v * x2, u * y3 * x2 + d1 * (1 - x3 * y3), d1 * d2 * f),
    ]
}

fn u_v_of(p: &CellParams) -> Result<(i128, i128)> {
    let (d1, d2) = (p.d1 as i128, p.d2 as i128);
    let x2b = inv_mod(p.x2, p.d2)? as i128;
    let y1b = inv_mod(p.y1, p.d1)? as i128;
    let k = p.k as i128;
    let u = d1 * p.x3 as i128 * x2b + d2 * y1b + d1 * d2 * k;
    let v = d2 * y1b * p.y3 as i128 + d1 * x2b + d1 * d2 * p.y3 as i128 * k;
    Ok((u, v))
}

/// The integral representative attached to a parameter tuple.
pub fn canonical_rep(p: &CellParams) -> Result<IntMat3> {
    let key = StratumKey::new(p.d1, p.d2, p.f)?;
    let (d1, d2, f) = (key.d1 as i128, key.d2 as i128, key.f as i128);
    let (x2, y1, x3, y3) = (p.x2 as i128, p.y1 as i128, p.x3 as i128, p.y3 as i128);
    if (x3 * y3 - 1).rem_euclid(f) != 0 {
        return Err(Error::Precondition(format!("x3 y3 = {} is not 1 mod {f}", x3 * y3)));
    }
    let (u, v) = u_v_of(p)?;
    let rows = [
        [
            wide_div(u * x2 - d1 * x3, d2)?,
            wide_div(u * x2 * y1 - d1 * x3 * y1 - x2 * d2, d1 * d2)?,
            wide_div(-v * x2 + u * x2 * y3 + d1 * (1 - x3 * y3), d1 * d2 * f)?,
        ],
        [
            i64::try_from(u).map_err(|_| Error::Overflow)?,
            wide_div(u * y1 - d2, d1)?,
            wide_div(u * y3 - v, d1 * f)?,
        ],
        [p.d1 * p.f, p.f * p.y1, p.y3],
    ];
    IntMat3::new(rows)
}

/// A complete invariant of the double coset `Γ∞ A Γ∞` for `A` in the big cell.
///
/// `u, v` are normalized to the canonical lifts of `x3, y3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetKey {
    pub key: StratumKey,
    pub x2: i64,
    pub y1: i64,
    pub x3: i64,
    pub y3: i64,
    pub u: i64,
    pub v: i64,
}

pub fn coset_key(a: &IntMat3) -> Result<CosetKey> {
    let key = stratum_invariants(a)?;
    let (d1, d2, f) = (key.d1 as i128, key.d2 as i128, key.f as i128);
    let big = (d1 * d2 * f).abs();
    let x2 = a.minor(2, 3) / key.f;
    let y1 = a.a(3, 2) / key.f;
    let (x3, y3) = (a.minor(3, 3), a.a(3, 3));
    let (cx3, cy3) = (canonical_lift(x3, key.f), canonical_lift(y3, key.f));
    let x2b = inv_mod(x2, key.d2)? as i128;
    let y1b = inv_mod(y1, key.d1)? as i128;
    let t = (cx3 - x3) as i128 / f;
    let s = (cy3 - y3) as i128 / f;
    let u = (a.a(2, 1) as i128 + d1 * f * t * x2b).rem_euclid(big);
    let v = (a.minor(1, 2) as i128 + d2 * f * s * y1b).rem_euclid(big);
    Ok(CosetKey {
        key,
        x2: x2.rem_euclid(key.d2.abs()),
        y1: y1.rem_euclid(key.d1.abs()),
        x3: cx3,
        y3: cy3,
        u: u as i64,
        v: v as i64,
    })
}

/// Stratum and canonical parameters of `A`; inverse to [`canonical_rep`] on cosets.
pub fn classify(a: &IntMat3) -> Result<(StratumKey, CellParams)> {
    let ck = coset_key(a)?;
    let key = ck.key;
    let n = key.d1 * key.d2 * key.f;
    let x2 = smallest_coprime_lift(ck.x2, key.d2, n);
    let y1 = smallest_coprime_lift(ck.y1, key.d1, n);
    let (d1, d2, f) = (key.d1 as i128, key.d2 as i128, key.f as i128);
    let x2b = inv_mod(x2, key.d2)? as i128;
    let y1b = inv_mod(y1, key.d1)? as i128;
    let num = ck.u as i128 - d1 * ck.x3 as i128 * x2b - d2 * y1b;
    if num % (d1 * d2) != 0 {
        return Err(Error::Precondition(format!("coset parameter u = {} is inconsistent", ck.u)));
    }
    let k = (num / (d1 * d2)).rem_euclid(f) as i64;
    Ok((
        key,
        CellParams {
            d1: key.d1,
            d2: key.d2,
            f: key.f,
            x2,
            y1,
            x3: ck.x3,
            y3: ck.y3,
            k,
        },
    ))
}

/// Decide `Γ∞ A Γ∞ = Γ∞ B Γ∞` for matrices in the big cell by comparing
/// Bruhat coordinates: equal torus parts and integral unipotent quotients.
pub fn coset_equal(a: &IntMat3, b: &IntMat3) -> Result<bool> {
    let ba = bruhat_coords_w0(a)?;
    let bb = bruhat_coords_w0(b)?;
    if ba.t != bb.t {
        return Ok(false);
    }
    let left = ba.u_left.mul(&bb.u_left.unipotent_inverse());
    let right = bb.u_right.unipotent_inverse().mul(&ba.u_right);
    Ok(left.is_integral() && right.is_integral())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::units;

    fn all_params(key: StratumKey) -> Vec<CellParams> {
        let n = key.d1 * key.d2 * key.f;
        let mut out = Vec::new();
        for r2 in units(key.d2) {
            for r1 in units(key.d1) {
                for r3 in units(key.f) {
                    for k in 0..key.f {
                        let x3 = canonical_lift(r3, key.f);
                        out.push(CellParams {
                            d1: key.d1,
                            d2: key.d2,
                            f: key.f,
                            x2: smallest_coprime_lift(r2, key.d2, n),
                            y1: smallest_coprime_lift(r1, key.d1, n),
                            x3,
                            y3: canonical_lift(inv_mod(x3, key.f).unwrap(), key.f),
                            k,
                        });
                    }
                }
            }
        }
        out
    }

    #[test]
    fn canonical_reps_roundtrip() {
        for d1 in [-3i64, -1, 1, 2, 3, 4] {
            for d2 in [-2i64, 1, 2, 3, 5] {
                for f in 1..=4 {
                    let key = StratumKey::new(d1, d2, f).unwrap();
                    let params = all_params(key);
                    let mut keys = std::collections::HashSet::new();
                    for p in &params {
                        let a = canonical_rep(p).unwrap();
                        assert_eq!(stratum_invariants(&a).unwrap(), key);
                        assert_eq!(classify(&a).unwrap(), (key, *p), "{a}");
                        keys.insert(coset_key(&a).unwrap());
                    }
                    assert_eq!(keys.len(), params.len());
                }
            }
        }
    }

    #[test]
    fn coset_key_agrees_with_bruhat_test() {
        let key = StratumKey::new(2, 2, 2).unwrap();
        let reps: Vec<IntMat3> = all_params(key).iter().map(|p| canonical_rep(p).unwrap()).collect();
        for a in &reps {
            for b in &reps {
                let same = coset_equal(a, b).unwrap();
                assert_eq!(same, coset_key(a).unwrap() == coset_key(b).unwrap());
                assert_eq!(same, a == b);
            }
        }
    }

    #[test]
    fn canonical_lifts() {
        assert_eq!(canonical_lift(0, 1), 2);
        assert_eq!(canonical_lift(1, 5), 6);
        assert_eq!(canonical_lift(0, 5), 10);
        assert_eq!(smallest_coprime_lift(0, 1, 6), 1);
        assert_eq!(smallest_coprime_lift(1, 2, 6), 1);
        assert_eq!(smallest_coprime_lift(2, 3, 6), 5);
    }
}
