//! Brute-force evaluation of Kloosterman sums from Plücker coordinates.
//!
//! Double cosets are listed by their Plücker sextuples, realized as integer
//! matrices, and the characters are read off exact Bruhat coordinates. Nothing
//! here uses the closed-form evaluators.

use serde::{Deserialize, Serialize};

use crate::arith::{egcd, gcd};
use crate::cyclo::{CycSum, RationalAngle};
use crate::error::{Error, Result};
use crate::slmat::{bruhat_coords_w0, stratum_invariants, IntMat3, StratumKey};
use crate::strata::{classify_refined, RefinedKey};
use crate::sums::{Characters, SumResult};

/// `(A1, B1, C1, A2, B2, C2)`: the bottom row and the bottom-left minors
/// `A2 = M(1,3)`, `B2 = -M(1,2)`, `C2 = M(1,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Plucker {
    pub a1: i64,
    pub b1: i64,
    pub c1: i64,
    pub a2: i64,
    pub b2: i64,
    pub c2: i64,
}

impl Plucker {
    pub fn new(t: [i64; 6]) -> Self {
        Self {
            a1: t[0],
            b1: t[1],
            c1: t[2],
            a2: t[3],
            b2: t[4],
            c2: t[5],
        }
    }

    pub fn is_valid(&self) -> bool {
        self.a1 as i128 * self.c2 as i128 + self.b1 as i128 * self.b2 as i128 + self.c1 as i128 * self.a2 as i128 == 0
            && gcd(gcd(self.a1, self.b1), self.c1) == 1
            && gcd(gcd(self.a2, self.b2), self.c2) == 1
    }

    /// Residues `(B1, C1 mod A1; B2, C2 mod A2)`.
    pub fn residues(&self) -> [i64; 4] {
        [
            self.b1.rem_euclid(self.a1),
            self.c1.rem_euclid(self.a1),
            self.b2.rem_euclid(self.a2),
            self.c2.rem_euclid(self.a2),
        ]
    }
}

/// One representative per double coset with `A1 = c1`, `A2 = c2 > 0`.
///
/// `B1 ∈ [0, A1)` and `B2 ∈ [0, A2)` are fixed as integers first; then
/// `C1 ∈ [0, A1)` and `C2` is the integer forced by the Plücker relation.
pub fn enumerate_plucker(c1: i64, c2: i64) -> Result<Vec<Plucker>> {
    if c1 <= 0 || c2 <= 0 {
        return Err(Error::Domain("Plücker enumeration needs positive moduli".into()));
    }
    let mut out = Vec::new();
    for b1 in 0..c1 {
        for b2 in 0..c2 {
            for cc1 in 0..c1 {
                let num = -(b1 as i128 * b2 as i128) - cc1 as i128 * c2 as i128;
                if num % c1 as i128 != 0 {
                    continue;
                }
                let p = Plucker::new([c1, b1, cc1, c2, b2, (num / c1 as i128) as i64]);
                if p.is_valid() {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// Test-only variant that lets `B1, B2` range over `[0, A]` and keeps one tuple
/// per residue class of all four entries at once. It double counts cosets.
pub fn enumerate_plucker_naive(c1: i64, c2: i64) -> Result<Vec<Plucker>> {
    if c1 <= 0 || c2 <= 0 {
        return Err(Error::Domain("Plücker enumeration needs positive moduli".into()));
    }
    let mut seen = std::collections::BTreeMap::new();
    for b1 in 0..=c1 {
        for b2 in 0..=c2 {
            for cc1 in 0..c1 {
                let num = -(b1 as i128 * b2 as i128) - cc1 as i128 * c2 as i128;
                if num % c1 as i128 != 0 {
                    continue;
                }
                let p = Plucker::new([c1, b1, cc1, c2, b2, (num / c1 as i128) as i64]);
                if p.is_valid() {
                    seen.entry(p.residues()).or_insert(p);
                }
            }
        }
    }
    Ok(seen.into_values().collect())
}

fn cross(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// An integer vector `w` with `w · v = 1`; `v` must be primitive.
fn dual_vector(v: [i64; 3]) -> Option<[i64; 3]> {
    let (g, s, t) = egcd(v[0], v[1]);
    let (h, p, q) = egcd(g, v[2]);
    (h == 1).then_some([p * s, p * t, q])
}

/// A matrix in `SL(3, Z)` whose bottom row and minors match the sextuple.
pub fn realize_matrix(p: &Plucker) -> Result<IntMat3> {
    let bad = || Error::Precondition(format!("{p:?} is not a valid Plücker sextuple"));
    if !p.is_valid() {
        return Err(bad());
    }
    let r3 = [p.a1, p.b1, p.c1];
    let target = [p.c2, p.b2, p.a2];
    let r2 = cross(dual_vector(r3).ok_or_else(bad)?, target);
    let r1 = dual_vector(target).ok_or_else(bad)?;
    IntMat3::new([r1, r2, r3])
}

#[derive(Debug, Clone)]
pub struct OracleCoset {
    pub plucker: Plucker,
    pub matrix: IntMat3,
    /// Exponents of `ζ_L` for `u12, u23` of `u_left` and `u12, u23` of `u_right`.
    pub exps: [u64; 4],
}

/// All double cosets for one pair of moduli with their character data.
#[derive(Debug, Clone)]
pub struct OracleTable {
    pub c1: i64,
    pub c2: i64,
    pub l: u64,
    pub cosets: Vec<OracleCoset>,
}

impl OracleTable {
    pub fn build(c1: i64, c2: i64) -> Result<Self> {
        let l = (c1 as u64).max(1) * (c2 as u64).max(1) / gcd(c1, c2) as u64;
        let mut cosets = Vec::new();
        for p in enumerate_plucker(c1, c2)? {
            let matrix = realize_matrix(&p)?;
            let bc = bruhat_coords_w0(&matrix)?;
            let ang = |x| RationalAngle::from_ratio(x).and_then(|a: RationalAngle| a.exponent_in(l));
            let exps = [
                ang(bc.u_left.get(1, 2))?,
                ang(bc.u_left.get(2, 3))?,
                ang(bc.u_right.get(1, 2))?,
                ang(bc.u_right.get(2, 3))?,
            ];
            cosets.push(OracleCoset { plucker: p, matrix, exps });
        }
        Ok(Self { c1, c2, l, cosets })
    }

    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn filter(&self, keep: impl Fn(&IntMat3) -> bool) -> Self {
        Self {
            cosets: self.cosets.iter().filter(|c| keep(&c.matrix)).cloned().collect(),
            ..*self
        }
    }

    pub fn eval(&self, ch: &Characters) -> Result<SumResult> {
        let l = self.l as i128;
        let w = [ch.m[0], ch.m[1], ch.n[0], ch.n[1]].map(i128::from);
        let mut counts = vec![0i64; self.l as usize];
        for c in &self.cosets {
            let e: i128 = (0..4).map(|i| w[i] * c.exps[i] as i128).sum();
            counts[e.rem_euclid(l) as usize] += 1;
        }
        let exact = CycSum::from_counts(self.l, &counts)?;
        Ok(SumResult::new(exact, "oracle", self.cosets.len() as u64))
    }
}

/// Which cosets of a table a restricted oracle keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleTableFilter {
    Stratum(StratumKey),
    Refined(RefinedKey),
    Level(i64),
}

impl OracleTableFilter {
    pub fn keeps(&self, a: &IntMat3) -> bool {
        match self {
            Self::Stratum(k) => stratum_invariants(a).map(|s| s == *k).unwrap_or(false),
            Self::Refined(k) => classify_refined(a).map(|s| s == *k).unwrap_or(false),
            Self::Level(n) => a.a(3, 1) % n == 0 && a.a(3, 2) % n == 0,
        }
    }
}

pub fn oracle_coarse(ch: &Characters, c1: i64, c2: i64) -> Result<SumResult> {
    OracleTable::build(c1, c2)?.eval(ch)
}

pub fn oracle_fine(ch: &Characters, key: StratumKey) -> Result<SumResult> {
    let filter = OracleTableFilter::Stratum(key);
    OracleTable::build(key.c1(), key.c2())?.filter(|a| filter.keeps(a)).eval(ch)
}

pub fn oracle_refined(ch: &Characters, key: RefinedKey) -> Result<SumResult> {
    let m = key.f1 * key.f2 * key.e;
    let filter = OracleTableFilter::Refined(key);
    OracleTable::build(key.d1 * m, key.d2 * m)?.filter(|a| filter.keeps(a)).eval(ch)
}

/// Coarse oracle restricted to cosets with bottom row `≡ (0, 0, *) mod N`.
pub fn oracle_level(ch: &Characters, c1: i64, c2: i64, level: i64) -> Result<SumResult> {
    let filter = OracleTableFilter::Level(level);
    OracleTable::build(c1, c2)?.filter(|a| filter.keeps(a)).eval(ch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slmat::{coset_equal, coset_key};

    #[test]
    fn realized_matrices_match_coordinates() {
        for c1 in 1..=9 {
            for c2 in 1..=9 {
                for p in enumerate_plucker(c1, c2).unwrap() {
                    let a = realize_matrix(&p).unwrap();
                    assert_eq!([a.a(3, 1), a.a(3, 2), a.a(3, 3)], [p.a1, p.b1, p.c1]);
                    assert_eq!(a.minor(1, 3), p.a2);
                    assert_eq!(-a.minor(1, 2), p.b2);
                    assert_eq!(a.minor(1, 1), p.c2);
                }
            }
        }
    }

    #[test]
    fn distinct_sextuples_are_distinct_cosets() {
        for c1 in 1..=8 {
            for c2 in 1..=8 {
                let ps = enumerate_plucker(c1, c2).unwrap();
                let keys: std::collections::HashSet<_> =
                    ps.iter().map(|p| coset_key(&realize_matrix(p).unwrap()).unwrap()).collect();
                assert_eq!(keys.len(), ps.len(), "({c1}, {c2})");
            }
        }
    }

    #[test]
    fn collision_pair() {
        let p = Plucker::new([2, 1, 0, 2, 2, -1]);
        let q = Plucker::new([2, 1, 1, 2, 0, -1]);
        assert!(p.is_valid() && q.is_valid());
        assert!(coset_equal(&realize_matrix(&p).unwrap(), &realize_matrix(&q).unwrap()).unwrap());
        let naive = enumerate_plucker_naive(2, 2).unwrap();
        assert!(naive.len() > enumerate_plucker(2, 2).unwrap().len());
    }

    #[test]
    fn trivial_character_counts_cosets() {
        let ch = Characters::new([0, 0], [0, 0]);
        assert_eq!(oracle_coarse(&ch, 2, 2).unwrap().exact, 3);
        assert_eq!(oracle_coarse(&ch, 5, 5).unwrap().exact, 4 * 9);
    }
}
