use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm, tau};
use crate::error::{Error, Result};
use crate::strata::strata_of;

use super::Characters;

fn g(a: i64, b: i64) -> f64 {
    (gcd(a, b) as f64).sqrt()
}

fn positive(c1: i64, c2: i64) -> Result<()> {
    if c1 <= 0 || c2 <= 0 {
        return Err(Error::Domain(format!("moduli must be positive, got ({c1}, {c2})")));
    }
    Ok(())
}

/// `τ(c1) τ(c2) (m1 n2, C)^{1/2} (m2 n1, C)^{1/2} (c1, c2)^{1/2} (c1 c2)^{1/2}`, `C = [c1, c2]`.
pub fn bound_stevens(ch: &Characters, c1: i64, c2: i64) -> Result<f64> {
    positive(c1, c2)?;
    let c = lcm(c1, c2);
    let [m1, m2] = ch.m;
    let [n1, n2] = ch.n;
    Ok((tau(c1)? * tau(c2)?) as f64 * g(m1 * n2, c) * g(m2 * n1, c) * g(c1, c2) * ((c1 * c2) as f64).sqrt())
}

/// `(c1 c2)^{1/2} (c1, c2)^{1/2} τ((c1, c2)) τ(c1) τ(c2) min{A, B}`.
pub fn bound_paper(ch: &Characters, c1: i64, c2: i64) -> Result<f64> {
    positive(c1, c2)?;
    let [m1, m2] = ch.m;
    let [n1, n2] = ch.n;
    let a = g(m2 * n1, c1) * g(n2 * m1, c2);
    let b = g(m2 * n1, c2) * g(n2 * m1, c1);
    let gc = gcd(c1, c2);
    Ok(((c1 * c2) as f64).sqrt() * (gc as f64).sqrt() * (tau(gc)? * tau(c1)? * tau(c2)?) as f64 * a.min(b))
}

/// Per-stratum majorants from the Weil bound, for either reduced word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepBound {
    pub standard: Vec<(i64, f64)>,
    pub braid: Vec<(i64, f64)>,
}

impl SweepBound {
    pub fn standard_total(&self) -> f64 {
        self.standard.iter().map(|t| t.1).sum()
    }

    pub fn braid_total(&self) -> f64 {
        self.braid.iter().map(|t| t.1).sum()
    }

    pub fn best(&self) -> f64 {
        self.standard_total().min(self.braid_total())
    }
}

pub fn bound_fine_sweep(ch: &Characters, c1: i64, c2: i64) -> Result<SweepBound> {
    positive(c1, c2)?;
    let [m1, m2] = ch.m;
    let [n1, n2] = ch.n;
    let root = ((c1 * c2) as f64).sqrt();
    let mut out = SweepBound {
        standard: Vec::new(),
        braid: Vec::new(),
    };
    for k in strata_of(c1, c2)? {
        let (d1, d2, f) = (k.d1, k.d2, k.f);
        let tt = (tau(d1)? * tau(d2)?) as f64 * root;
        if gcd(m2 * d2, f) == gcd(n2 * d1, f) {
            out.standard.push((f, gcd(f, m2 * d2) as f64 * g(n1, d1) * g(m1, d2) * tt));
        }
        if gcd(n1 * d2, f) == gcd(m1 * d1, f) {
            out.braid.push((f, gcd(f, m1 * d1) as f64 * g(m2, d1) * g(n2, d2) * tt));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sharp_case_scaling() {
        for p in [3i64, 5, 7, 11] {
            let ch = Characters::new([1, p], [1, p]);
            let paper = bound_paper(&ch, p * p, p).unwrap();
            let stevens = bound_stevens(&ch, p * p, p).unwrap();
            assert!(paper <= stevens * tau(p).unwrap() as f64 + 1e-9);
        }
    }
}
