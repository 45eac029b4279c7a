use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::slmat::StratumKey;

use super::{fine_kloosterman, hyper_kloosterman_ab, Characters, ConditionPolicy, SumResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TermKind {
    Sigma4,
    Sigma5,
    Sigma6,
}

/// One index of the geometric side with its exponential sum and the
/// arguments at which the weight function would be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KuznetsovTerm {
    pub kind: TermKind,
    pub eps: Vec<i64>,
    pub moduli: Vec<i64>,
    pub value: SumResult,
    pub weight_args: Vec<f64>,
}

/// All geometric-side indices of level `N` with every modulus at most `cutoff`:
/// `d1 d2 ≤ cutoff` for the two hyper-Kloosterman families and
/// `d1 f, d2 f ≤ cutoff` for the long-word family.
pub fn kuznetsov_geometric_indices(level: i64, m: [i64; 2], n: [i64; 2], cutoff: i64) -> Result<Vec<KuznetsovTerm>> {
    if level < 1 || cutoff < 1 || m.iter().chain(&n).any(|&x| x < 1) {
        return Err(Error::Domain("level, cutoff and characters must be positive".into()));
    }
    let [m1, m2] = m;
    let [n1, n2] = n;
    let sq = |x: i64| (x as f64).sqrt();
    let mut out = Vec::new();
    for eps in [1i64, -1] {
        for d1 in 1..=cutoff {
            for d2 in 1..=cutoff / d1 {
                if d2 * n1 == d1 * m2 && d2 % level == 0 {
                    out.push(KuznetsovTerm {
                        kind: TermKind::Sigma4,
                        eps: vec![eps],
                        moduli: vec![d1, d2],
                        value: hyper_kloosterman_ab(eps * m1, n1, n2, d1, d2, ConditionPolicy::Error)?,
                        weight_args: vec![sq(n1 * n2 * m1) / (d1 as f64 * sq(d2))],
                    });
                }
                if d2 * n2 == d1 * m1 && d1 % level == 0 {
                    out.push(KuznetsovTerm {
                        kind: TermKind::Sigma5,
                        eps: vec![eps],
                        moduli: vec![d1, d2],
                        value: hyper_kloosterman_ab(eps * m2, n2, n1, d1, d2, ConditionPolicy::Error)?,
                        weight_args: vec![sq(n1 * n2 * m2) / (d1 as f64 * sq(d2))],
                    });
                }
            }
        }
    }
    for eps in [[1i64, 1], [1, -1], [-1, 1], [-1, -1]] {
        let ch = Characters::new(m, n).twist(eps);
        for f in (level..=cutoff).step_by(level as usize) {
            for d1 in 1..=cutoff / f {
                for d2 in 1..=cutoff / f {
                    out.push(KuznetsovTerm {
                        kind: TermKind::Sigma6,
                        eps: eps.to_vec(),
                        moduli: vec![d1, d2, f],
                        value: fine_kloosterman(&ch, StratumKey::new(d1, d2, f)?)?,
                        weight_args: vec![
                            sq(n2 * m1 * d1) / (d2 as f64 * sq(f)),
                            sq(n1 * m2 * d2) / (d1 as f64 * sq(f)),
                        ],
                    });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_two_has_even_f() {
        let terms = kuznetsov_geometric_indices(2, [1, 1], [1, 1], 6).unwrap();
        assert!(terms.iter().filter(|t| t.kind == TermKind::Sigma6).all(|t| t.moduli[2] % 2 == 0));
        assert!(terms.iter().any(|t| t.kind == TermKind::Sigma6));
    }

    #[test]
    fn level_one_sigma6_indices() {
        let cutoff = 4;
        let terms = kuznetsov_geometric_indices(1, [1, 2], [2, 1], cutoff).unwrap();
        let six: Vec<_> = terms.iter().filter(|t| t.kind == TermKind::Sigma6 && t.eps == [1, 1]).collect();
        let expected = (1..=cutoff).map(|f| (cutoff / f) * (cutoff / f)).sum::<i64>();
        assert_eq!(six.len() as i64, expected);
        let (n1, m2) = (2, 2);
        for t in terms.iter().filter(|t| t.kind == TermKind::Sigma4) {
            assert_eq!(t.moduli[1] * n1, t.moduli[0] * m2);
        }
    }
}
