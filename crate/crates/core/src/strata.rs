//! Strata of the big cell and enumeration of their double cosets.

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, euler_phi, gcd, inv_mod, units};
use crate::cyclo::{CycSum, RationalAngle};
use crate::error::{Error, Result};
use crate::slmat::{canonical_lift, smallest_coprime_lift, stratum_invariants, CellParams, IntMat3, RatMat3};

pub use crate::slmat::{classify, StratumKey};

/// Canonical parameters of every double coset in the stratum, ordered
/// lexicographically by `(x2, y1, x3, k)`.
pub fn enumerate_cosets(key: StratumKey) -> Vec<CellParams> {
    let StratumKey { d1, d2, f } = key;
    let n = d1 * d2 * f;
    let x3s: Vec<(i64, i64)> = units(f)
        .map(|r| {
            let x3 = canonical_lift(r, f);
            (x3, canonical_lift(inv_mod(x3, f).unwrap(), f))
        })
        .collect();
    let mut out = Vec::new();
    for r2 in units(d2) {
        let x2 = smallest_coprime_lift(r2, d2, n);
        for r1 in units(d1) {
            let y1 = smallest_coprime_lift(r1, d1, n);
            for &(x3, y3) in &x3s {
                for k in 0..f {
                    out.push(CellParams { d1, d2, f, x2, y1, x3, y3, k });
                }
            }
        }
    }
    out.sort_by_key(|c| (c.x2, c.y1, c.x3, c.k));
    out
}

/// `φ(|d1|) φ(|d2|) φ(f) f`.
pub fn stratum_size(key: StratumKey) -> i64 {
    euler_phi(key.d1.abs()).unwrap() * euler_phi(key.d2.abs()).unwrap() * euler_phi(key.f).unwrap() * key.f
}

/// The strata making up the coarse set with moduli `(c1, c2)`.
pub fn strata_of(c1: i64, c2: i64) -> Result<Vec<StratumKey>> {
    if c1 == 0 || c2 == 0 {
        return Err(Error::Domain("moduli must be nonzero".into()));
    }
    divisors(gcd(c1, c2))?
        .into_iter()
        .map(|f| StratumKey::new(c1 / f, c2 / f, f))
        .collect()
}

/// Number of double cosets with moduli `(c1, c2)`.
pub fn coset_count(c1: i64, c2: i64) -> Result<i64> {
    Ok(strata_of(c1, c2)?.into_iter().map(stratum_size).sum())
}

/// Labels of the intersection of one standard and one braid stratum:
/// `gcd(A31, A32) = f1 e`, `gcd(A31, A21) = f2 e`, `gcd(f1, f2) = 1`,
/// `A31 = d1 f1 f2 e`, `M(1,3) = d2 f1 f2 e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RefinedKey {
    pub d1: i64,
    pub d2: i64,
    pub f1: i64,
    pub f2: i64,
    pub e: i64,
}

pub fn classify_refined(a: &IntMat3) -> Result<RefinedKey> {
    stratum_invariants(a)?;
    let g1 = gcd(a.a(3, 1), a.a(3, 2));
    let g2 = gcd(a.a(3, 1), a.a(2, 1));
    let e = gcd(g1, g2);
    let (f1, f2) = (g1 / e, g2 / e);
    let m = f1 * f2 * e;
    Ok(RefinedKey {
        d1: a.a(3, 1) / m,
        d2: a.minor(1, 3) / m,
        f1,
        f2,
        e,
    })
}

/// Strata surviving the level-`N` restriction: those with `N | f`.
pub fn level_filter(keys: &[StratumKey], level: i64) -> Vec<StratumKey> {
    keys.iter().copied().filter(|k| k.f % level == 0).collect()
}

/// The angle `n1 u12 + n2 u23` mod 1.
pub fn psi_angle(n: [i64; 2], u: &RatMat3) -> Result<RationalAngle> {
    let a = RationalAngle::from_ratio(u.get(1, 2))?.scale(n[0]);
    let b = RationalAngle::from_ratio(u.get(2, 3))?.scale(n[1]);
    Ok(a.add(&b))
}

/// `ψ_n(u) = e(n1 u12 + n2 u23)`.
pub fn psi(n: [i64; 2], u: &RatMat3) -> Result<CycSum> {
    CycSum::from_angle(&psi_angle(n, u)?)
}
