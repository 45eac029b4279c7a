use log::warn;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, inv_mod, mul_mod, ramanujan_c, units};
use crate::cyclo::CycSum;
use crate::error::{Error, Result};

use super::SumResult;

/// What to do when the divisibility hidden in the hyper-Kloosterman notation fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConditionPolicy {
    Ignore,
    #[default]
    Warn,
    Error,
}

impl ConditionPolicy {
    fn apply(self, holds: bool, what: &str) -> Result<()> {
        match (holds, self) {
            (true, _) | (false, ConditionPolicy::Ignore) => Ok(()),
            (false, ConditionPolicy::Warn) => {
                warn!("{what} fails; the value depends on the chosen lifts");
                Ok(())
            }
            (false, ConditionPolicy::Error) => Err(Error::Inconsistent(what.to_string())),
        }
    }
}

fn check_moduli(d1: i64, d2: i64) -> Result<()> {
    if d1 <= 0 || d2 <= 0 {
        return Err(Error::Domain(format!("moduli must be positive, got ({d1}, {d2})")));
    }
    Ok(())
}

/// `Σ* e(a x1/d1 + b x̄1 x2 / d1 + c x̄2/d2)` with `x2` lifted to `x2 + lift d2`
/// and `x̄2` to `x̄2 + lift d2`.
fn hyper_raw(a: i64, b: i64, c: i64, d1: i64, d2: i64, lift: i64) -> Result<CycSum> {
    let l = d1 / gcd(d1, d2) * d2;
    let (s1, s2) = (l / d1, l / d2);
    let mut counts = vec![0i64; l as usize];
    for x1 in units(d1) {
        let x1b = inv_mod(x1, d1)?;
        for x2 in units(d2) {
            let x2b = inv_mod(x2, d2)? + lift * d2;
            let x2 = x2 + lift * d2;
            let e = mul_mod(a, x1, d1) as i128 * s1 as i128
                + mul_mod(mul_mod(b, x1b, d1), x2, d1) as i128 * s1 as i128
                + mul_mod(c, x2b, d2) as i128 * s2 as i128;
            counts[e.rem_euclid(l as i128) as usize] += 1;
        }
    }
    CycSum::from_counts(l as u64, &counts)
}

/// `S_{s_α s_β}(m1, n1, n2; d1, d1 d2)`, summing over units `x1 mod d1`, `x2 mod d2`.
/// Well defined when `d1 | d2 n1`.
pub fn hyper_kloosterman_ab(m1: i64, n1: i64, n2: i64, d1: i64, d2: i64, policy: ConditionPolicy) -> Result<SumResult> {
    check_moduli(d1, d2)?;
    policy.apply((d2 as i128 * n1 as i128) % d1 as i128 == 0, &format!("d1 = {d1} | d2 n1 = {}", d2 * n1))?;
    let v = hyper_raw(m1, n1, n2, d1, d2, 0)?;
    Ok(SumResult::new(v, "hyper-ab", (d1 * d2) as u64))
}

/// `S_{s_β s_α}(m1, m2, n1; d1 d2, d1) = Σ* e(m1 x2 x̄1/d2 + m2 x1/d1 + n1 x̄2/d2)`.
/// Well defined when `d2 | d1 m1`.
pub fn hyper_kloosterman_ba(m1: i64, m2: i64, n1: i64, d1: i64, d2: i64, policy: ConditionPolicy) -> Result<SumResult> {
    check_moduli(d1, d2)?;
    policy.apply((d1 as i128 * m1 as i128) % d2 as i128 == 0, &format!("d2 = {d2} | d1 m1 = {}", d1 * m1))?;
    let l = d1 / gcd(d1, d2) * d2;
    let (s1, s2) = (l / d1, l / d2);
    let mut counts = vec![0i64; l as usize];
    for x1 in units(d1) {
        let x1b = inv_mod(x1, d1)?;
        for x2 in units(d2) {
            let x2b = inv_mod(x2, d2)?;
            let e = mul_mod(mul_mod(m1, x2, d2), x1b, d2) as i128 * s2 as i128
                + mul_mod(m2, x1, d1) as i128 * s1 as i128
                + mul_mod(n1, x2b, d2) as i128 * s2 as i128;
            counts[e.rem_euclid(l as i128) as usize] += 1;
        }
    }
    Ok(SumResult::new(CycSum::from_counts(l as u64, &counts)?, "hyper-ba", (d1 * d2) as u64))
}

/// `R_{c1,c2}(n1, n2) = Σ_{f | (c1,c2), f | n2 c1/f} f c_{c1/f}(n1) c_f(n2) c_{c2/f}(c1 n2/f²)`.
pub fn ramanujan_general(c1: i64, c2: i64, n1: i64, n2: i64) -> Result<SumResult> {
    check_moduli(c1, c2)?;
    let mut total: i128 = 0;
    let mut terms = 0;
    for f in crate::arith::divisors(gcd(c1, c2))? {
        let t = n2 as i128 * (c1 / f) as i128;
        if t % f as i128 != 0 {
            continue;
        }
        let arg = (t / f as i128).rem_euclid((c2 / f) as i128) as i64;
        total += f as i128
            * ramanujan_c(c1 / f, n1)? as i128
            * ramanujan_c(f, n2)? as i128
            * ramanujan_c(c2 / f, arg)? as i128;
        terms += 1;
    }
    Ok(SumResult::new(CycSum::integer(total), "ramanujan", terms))
}
