use crate::arith::{euler_phi, gcd, inv_mod, kloosterman, primary_part, units};
use crate::cyclo::CycSum;
use crate::error::{Error, Result};
use crate::slmat::StratumKey;
use crate::strata::strata_of;

use super::{Characters, SumResult};

/// Which reduced word of `w0` the stratification follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Word {
    /// `s_α s_β s_α`, strata by `gcd(A31, A32)`.
    #[default]
    Aba,
    /// `s_β s_α s_β`, strata by `gcd(A31, A21)`.
    Bab,
}

fn exact_div(num: i128, den: i128, what: &str) -> Result<i128> {
    if num % den != 0 {
        return Err(Error::Inconsistent(format!("{what}: {den} does not divide {num}")));
    }
    Ok(num / den)
}

fn residue(x: i128, m: i64) -> i64 {
    x.rem_euclid(m.abs() as i128) as i64
}

fn accumulate(terms: impl IntoIterator<Item = Result<CycSum>>) -> Result<(CycSum, u64)> {
    let mut acc = CycSum::zero(1);
    let mut n = 0;
    for t in terms {
        acc = acc.try_add(&t?)?;
        n += 1;
    }
    Ok((acc, n))
}

/// The fine sum over `Ω(d1, d2, f)` with `x3, y3` taken as `x + sx f`, `y + sy f`
/// for `x, y ∈ [0, f)`. The value does not depend on the shifts.
pub fn fine_kloosterman_lifted(ch: &Characters, key: StratumKey, shift: [i64; 2]) -> Result<SumResult> {
    let StratumKey { d1, d2, f } = key;
    let [m1, m2] = ch.m;
    let [n1, n2] = ch.n;
    let (a, b) = (m2 as i128 * d2 as i128, n2 as i128 * d1 as i128);
    let fw = f as i128;
    if gcd(residue(a, f), f) != gcd(residue(b, f), f) {
        return Ok(SumResult::new(CycSum::zero(1), "fine", 0));
    }
    let terms = units(f).filter(|&y| (a + b * y as i128) % fw == 0).map(|y| {
        let x = inv_mod(y, f)? as i128 + shift[0] as i128 * fw;
        let y = y as i128 + shift[1] as i128 * fw;
        let n = exact_div(a + b * y, fw, "N(y3)")?;
        let m = exact_div(a * x + b, fw, "M(x3)")?;
        kloosterman(n1, residue(n, d1), d1)?.try_mul(&kloosterman(m1, residue(m, d2), d2)?)
    });
    let (acc, n) = accumulate(terms)?;
    Ok(SumResult::new(acc.scale(f), "fine", n))
}

/// `f Σ S(N(y3), ... )`: the fine sum over the stratum `Ω(d1, d2, f)`.
pub fn fine_kloosterman(ch: &Characters, key: StratumKey) -> Result<SumResult> {
    fine_kloosterman_lifted(ch, key, [0, 0])
}

/// The fine sum over the stratum of the other reduced word.
pub fn fine_kloosterman_braid(ch: &Characters, key: StratumKey) -> Result<SumResult> {
    let StratumKey { d1, d2, f } = key;
    let [m1, m2] = ch.m;
    let [n1, n2] = ch.n;
    let (a, b) = (n1 as i128 * d2 as i128, m1 as i128 * d1 as i128);
    let fw = f as i128;
    if gcd(residue(a, f), f) != gcd(residue(b, f), f) {
        return Ok(SumResult::new(CycSum::zero(1), "fine-braid", 0));
    }
    let terms = units(f).filter(|&x| (a + b * x as i128) % fw == 0).map(|x| {
        let y = inv_mod(x, f)? as i128;
        let p = exact_div(a + b * x as i128, fw, "braid first argument")?;
        let q = exact_div(a * y + b, fw, "braid second argument")?;
        kloosterman(residue(p, d1), m2, d1)?.try_mul(&kloosterman(residue(q, d2), n2, d2)?)
    });
    let (acc, n) = accumulate(terms)?;
    Ok(SumResult::new(acc.scale(f), "fine-braid", n))
}

pub fn fine_by_word(ch: &Characters, key: StratumKey, word: Word) -> Result<SumResult> {
    match word {
        Word::Aba => fine_kloosterman(ch, key),
        Word::Bab => fine_kloosterman_braid(ch, key),
    }
}

/// `S_{w0}(m, n; (c1, c2)) = Σ_{f | (c1, c2)} fine(c1/f, c2/f, f)`.
pub fn coarse_kloosterman(ch: &Characters, c1: i64, c2: i64, word: Word) -> Result<SumResult> {
    if c1 <= 0 || c2 <= 0 {
        return Err(Error::Domain(format!("coarse moduli must be positive, got ({c1}, {c2})")));
    }
    let mut acc = CycSum::zero(1);
    let mut terms = 0;
    for key in strata_of(c1, c2)? {
        let r = fine_by_word(ch, key, word)?;
        acc = acc.try_add(&r.exact)?;
        terms += r.terms;
    }
    let name = match word {
        Word::Aba => "coarse",
        Word::Bab => "coarse-braid",
    };
    Ok(SumResult::new(acc, name, terms))
}

/// Restriction of the coarse sum to strata with `N | f`.
pub fn level_kloosterman(ch: &Characters, c1: i64, c2: i64, level: i64) -> Result<SumResult> {
    if level <= 0 {
        return Err(Error::Domain(format!("level must be positive, got {level}")));
    }
    let mut acc = CycSum::zero(1);
    let mut terms = 0;
    for key in strata_of(c1, c2)?.into_iter().filter(|k| k.f % level == 0) {
        let r = fine_kloosterman(ch, key)?;
        acc = acc.try_add(&r.exact)?;
        terms += r.terms;
    }
    Ok(SumResult::new(acc, "level", terms))
}

/// Closed form for strata with `gcd(f, d1 d2) = 1`; other strata go through
/// [`fine_kloosterman`].
pub fn coprime_fast_path(ch: &Characters, key: StratumKey) -> Result<SumResult> {
    let StratumKey { d1, d2, f } = key;
    if gcd(f, d1 * d2) != 1 {
        return fine_kloosterman(ch, key);
    }
    let [m1, m2] = ch.m;
    let [n1, n2] = ch.n;
    let e = gcd(n2, f);
    if gcd(m2, f) != e {
        return Ok(SumResult::new(CycSum::zero(1), "coprime", 0));
    }
    let h = f / e;
    let hs = primary_part(f, h)?;
    let fbar = inv_mod(f, d1 * d2)? as i128;
    let a = residue(m2 as i128 * d2 as i128 * fbar, d1);
    let b = residue(n2 as i128 * d1 as i128 * fbar, d2);
    let prod = kloosterman(n1, a, d1)?.try_mul(&kloosterman(m1, b, d2)?)?;
    let factor = f * euler_phi(f / hs)? * (hs / h);
    Ok(SumResult::new(prod.scale(factor), "coprime", 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(d1: i64, d2: i64, f: i64) -> StratumKey {
        StratumKey::new(d1, d2, f).unwrap()
    }

    #[test]
    fn f_one_is_a_product() {
        let ch = Characters::new([2, 3], [1, -1]);
        let v = fine_kloosterman(&ch, key(5, 7, 1)).unwrap().exact;
        let w = kloosterman(1, 3 * 7, 5).unwrap() * kloosterman(2, -5, 7).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn sharp_example() {
        for p in [3i64, 5, 7] {
            let ch = Characters::new([1, p], [1, p]);
            let v = fine_kloosterman(&ch, key(p, 1, p)).unwrap().exact;
            assert_eq!(v, kloosterman(1, 1, p).unwrap().scale(p * (p - 1)));
        }
    }

    #[test]
    fn gcd_mismatch_vanishes() {
        let ch = Characters::new([1, 2], [1, 1]);
        let r = fine_kloosterman(&ch, key(1, 1, 4)).unwrap();
        assert!(r.exact.is_zero());
        assert_eq!(r.terms, 0);
    }

    #[test]
    fn prime_square_examples() {
        for p in [3i64, 5, 7, 11] {
            let ch = Characters::new([1, 1], [p, p]);
            assert_eq!(coarse_kloosterman(&ch, p, p, Word::Aba).unwrap().exact, 1 - p);
            let ch = Characters::new([1, 2], [3, 1]);
            if p != 3 {
                assert_eq!(coarse_kloosterman(&ch, p, p, Word::Aba).unwrap().exact, p + 1);
            }
        }
    }

    #[test]
    fn lifts_do_not_matter() {
        let ch = Characters::new([1, 2], [-1, 2]);
        for f in 1..=6 {
            let k = key(2, 3, f);
            let base = fine_kloosterman(&ch, k).unwrap().exact;
            for s in [[1, 0], [0, 1], [-2, 3]] {
                assert_eq!(fine_kloosterman_lifted(&ch, k, s).unwrap().exact, base);
            }
        }
    }

    #[test]
    fn coprime_agrees() {
        let ch = Characters::new([1, 3], [2, 6]);
        for (d1, d2, f) in [(2, 5, 3), (5, 7, 9), (1, 1, 6), (4, 1, 9)] {
            let k = key(d1, d2, f);
            assert_eq!(coprime_fast_path(&ch, k).unwrap().exact, fine_kloosterman(&ch, k).unwrap().exact);
        }
    }

    #[test]
    fn words_agree_on_coarse() {
        let ch = Characters::new([1, -2], [2, 1]);
        for (c1, c2) in [(4, 6), (8, 4), (9, 3), (12, 12)] {
            assert_eq!(
                coarse_kloosterman(&ch, c1, c2, Word::Aba).unwrap().exact,
                coarse_kloosterman(&ch, c1, c2, Word::Bab).unwrap().exact
            );
        }
    }
}
