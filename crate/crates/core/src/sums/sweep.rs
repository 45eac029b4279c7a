use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::par::{self, Mode};

use super::{coarse_kloosterman, Characters, SumResult, Word};

/// All `(m, n)` with every entry in `[-r, r]`.
pub fn character_grid(r: i64) -> Vec<Characters> {
    let vals: Vec<i64> = (-r..=r).collect();
    let mut out = Vec::with_capacity(vals.len().pow(4));
    for &m1 in &vals {
        for &m2 in &vals {
            for &n1 in &vals {
                for &n2 in &vals {
                    out.push(Characters::new([m1, m2], [n1, n2]));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub c: [i64; 2],
    pub ch: Characters,
    pub result: SumResult,
}

/// Coarse sums for every `1 <= c1, c2 <= cmax` and every character in `chars`.
pub fn coarse_sweep(cmax: i64, chars: &[Characters], word: Word, mode: Mode) -> Result<Vec<GridPoint>> {
    let moduli: Vec<[i64; 2]> = (1..=cmax).flat_map(|a| (1..=cmax).map(move |b| [a, b])).collect();
    let blocks = par::map(&moduli, mode, |&c| {
        chars
            .iter()
            .map(|ch| {
                Ok(GridPoint {
                    c,
                    ch: *ch,
                    result: coarse_kloosterman(ch, c[0], c[1], word)?,
                })
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut out = Vec::new();
    for b in blocks {
        out.extend(b?);
    }
    Ok(out)
}
