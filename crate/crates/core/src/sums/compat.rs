use serde::{Deserialize, Serialize};

use crate::slmat::Weyl;

use super::Characters;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Compatibility {
    pub ok: bool,
    pub reason: String,
}

/// Whether `S_w(m, n; c)` is well defined: the left and right characters must
/// agree on `U_w` after conjugation by `w t`.
pub fn compatibility_check(w: Weyl, ch: &Characters, c1: i64, c2: i64) -> Compatibility {
    let p = w.perm();
    let mut inv = [0usize; 3];
    for (j, &i) in p.iter().enumerate() {
        inv[i - 1] = j + 1;
    }
    let c = [1i128, c1 as i128, c2 as i128, 1];
    let mut failed = Vec::new();
    for k in 1..=2usize {
        if p[k - 1] < p[k] {
            let n = ch.n[k - 1] as i128;
            if p[k] != p[k - 1] + 1 {
                if n != 0 {
                    failed.push(format!("n{k} = 0"));
                }
            } else {
                let m = ch.m[p[k - 1] - 1] as i128;
                if c[k] * c[k] * m != n * c[k - 1] * c[k + 1] {
                    failed.push(format!("n{k} = c{k}^2 m{} / (c{} c{})", p[k - 1], k - 1, k + 1));
                }
            }
        }
        if inv[k - 1] < inv[k] && inv[k] != inv[k - 1] + 1 && ch.m[k - 1] != 0 {
            failed.push(format!("m{k} = 0"));
        }
    }
    Compatibility {
        ok: failed.is_empty(),
        reason: if failed.is_empty() {
            format!("{w}: no condition violated")
        } else {
            format!("{w}: requires {}", failed.join(", "))
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let ch = |m, n| Characters::new(m, n);
        assert!(compatibility_check(Weyl::W0, &ch([1, 2], [3, 4]), 5, 7).ok);
        assert!(compatibility_check(Weyl::Sa, &ch([1, 0], [3, 0]), 5, 1).ok);
        assert!(!compatibility_check(Weyl::Sa, &ch([1, 1], [3, 0]), 5, 1).ok);
        assert!(!compatibility_check(Weyl::Sa, &ch([1, 0], [3, 1]), 5, 1).ok);
        assert!(compatibility_check(Weyl::Sb, &ch([0, 2], [0, 4]), 1, 5).ok);
        assert!(!compatibility_check(Weyl::Sb, &ch([1, 2], [0, 4]), 1, 5).ok);
        // n1 = c1^2 m2 / c2 with c = (d1, d1 d2) = (2, 6)
        assert!(compatibility_check(Weyl::SaSb, &ch([5, 3], [2, 7]), 2, 6).ok);
        assert!(!compatibility_check(Weyl::SaSb, &ch([5, 3], [1, 7]), 2, 6).ok);
        // n2 = c2^2 m1 / c1 with c = (d1 d2, d1) = (6, 2)
        assert!(compatibility_check(Weyl::SbSa, &ch([3, 1], [5, 2]), 6, 2).ok);
        assert!(!compatibility_check(Weyl::SbSa, &ch([3, 1], [5, 3]), 6, 2).ok);
        assert!(compatibility_check(Weyl::E, &ch([1, 2], [1, 2]), 1, 1).ok);
        assert!(!compatibility_check(Weyl::E, &ch([1, 2], [1, 3]), 1, 1).ok);
    }
}
