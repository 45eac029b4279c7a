use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{IntMat3, RatMat3, Sl2, Weyl};
use crate::arith::{egcd, gcd};
use crate::error::{Error, Result};

/// Stratum labels `(d1, d2, f)` with `A31 = d1 f`, `M(1,3) = d2 f` and `f > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StratumKey {
    pub d1: i64,
    pub d2: i64,
    pub f: i64,
}

impl StratumKey {
    pub fn new(d1: i64, d2: i64, f: i64) -> Result<Self> {
        if d1 == 0 || d2 == 0 || f <= 0 {
            return Err(Error::Domain(format!("invalid stratum ({d1}, {d2}, {f})")));
        }
        Ok(Self { d1, d2, f })
    }

    pub fn c1(&self) -> i64 {
        self.d1 * self.f
    }

    pub fn c2(&self) -> i64 {
        self.d2 * self.f
    }
}

fn require_w0(a: &IntMat3) -> Result<()> {
    match a.cell() {
        Weyl::W0 => Ok(()),
        w => Err(Error::WrongCell {
            expected: "w0".into(),
            found: w.to_string(),
        }),
    }
}

/// `f = gcd(A31, A32)`, `d1 = A31/f`, `d2 = M(1,3)/f`.
pub fn stratum_invariants(a: &IntMat3) -> Result<StratumKey> {
    require_w0(a)?;
    let f = gcd(a.a(3, 1), a.a(3, 2));
    debug_assert_eq!(f, gcd(a.minor(1, 3), a.minor(2, 3)));
    StratumKey::new(a.a(3, 1) / f, a.minor(1, 3) / f, f)
}

/// `f = gcd(A31, A21)`, `d1 = A31/f`, `d2 = M(1,3)/f`.
pub fn stratum_invariants_braid(a: &IntMat3) -> Result<StratumKey> {
    require_w0(a)?;
    let f = gcd(a.a(3, 1), a.a(2, 1));
    debug_assert_eq!(f, gcd(a.minor(1, 3), a.minor(1, 2)));
    StratumKey::new(a.a(3, 1) / f, a.minor(1, 3) / f, f)
}

/// A shifted representative `matrix = left · A · right` of the same double coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shifted {
    pub matrix: IntMat3,
    pub left: IntMat3,
    pub right: IntMat3,
}

/// Move along the double coset: `A32 += A31 n1`, `A33 += f n2`,
/// `M(3,3) += f n3`, `M(2,3) += d2 f n4`, leaving the other invariants alone.
pub fn shift_representative(a: &IntMat3, n: [i64; 4]) -> Result<Shifted> {
    let key = stratum_invariants(a)?;
    let f = key.f;

    let r1 = IntMat3::unipotent(n[0], 0, 0)?;
    let m = a.checked_mul(&r1)?;
    let (g, k, l) = egcd(m.a(3, 1), m.a(3, 2));
    debug_assert_eq!(g, f);
    let r2 = IntMat3::unipotent(0, n[1] * k, n[1] * l)?;
    let m = m.checked_mul(&r2)?;
    let right = r1.checked_mul(&r2)?;

    let l1 = IntMat3::unipotent(n[3], 0, 0)?;
    let m = l1.checked_mul(&m)?;
    let (g, r, s) = egcd(m.minor(1, 3), m.minor(2, 3));
    debug_assert_eq!(g, f);
    let l2 = IntMat3::unipotent(0, -n[2] * r, n[2] * s)?;
    let m = l2.checked_mul(&m)?;
    let left = l2.checked_mul(&l1)?;
    Ok(Shifted {
        matrix: m,
        left,
        right,
    })
}

fn d_value(a: &IntMat3, f: i64) -> i64 {
    let num = a.a(3, 3) as i128 * a.minor(3, 3) as i128 - 1;
    debug_assert_eq!(num % f as i128, 0);
    (num / f as i128) as i64
}

/// Shift so that `D = (A33 M(3,3) - 1)/f` is nonzero.
pub fn ensure_d_nonzero(a: &IntMat3) -> Result<IntMat3> {
    let key = stratum_invariants(a)?;
    if d_value(a, key.f) != 0 {
        return Ok(*a);
    }
    Ok(shift_representative(a, [0, 1, 0, 0])?.matrix)
}

/// `A = ι_α(γ2) ι_β(γ3) ι_α(γ1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BsFactors {
    pub gamma2: Sl2,
    pub gamma3: Sl2,
    pub gamma1: Sl2,
}

impl BsFactors {
    pub fn product(&self) -> RatMat3 {
        self.gamma2.iota_alpha().mul(&self.gamma3.iota_beta()).mul(&self.gamma1.iota_alpha())
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn qf(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn bott_samelson(a: &IntMat3) -> Result<BsFactors> {
    let key = stratum_invariants(a)?;
    let (d1, d2, f) = (key.d1, key.d2, key.f);
    let d = d_value(a, f);
    if d == 0 {
        return Err(Error::Precondition("D = 0; shift the representative first".into()));
    }
    Ok(BsFactors {
        gamma2: Sl2::complete(q(a.minor(2, 3) / f), q(d2), qf(a.a(2, 3), d))?,
        gamma3: Sl2::complete(q(a.minor(3, 3)), q(f), q(a.a(3, 3)))?,
        gamma1: Sl2::complete(qf(a.minor(3, 2), d), q(d1), q(a.a(3, 2) / f))?,
    })
}

/// `A = ι_β(γ1) ι_α(γ3) ι_β(γ2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidFactors {
    pub gamma1: Sl2,
    pub gamma3: Sl2,
    pub gamma2: Sl2,
}

impl BraidFactors {
    pub fn product(&self) -> RatMat3 {
        self.gamma1.iota_beta().mul(&self.gamma3.iota_alpha()).mul(&self.gamma2.iota_beta())
    }
}

pub fn braid_factorization(a: &IntMat3) -> Result<BraidFactors> {
    let key = stratum_invariants_braid(a)?;
    let (d1, d2, f) = (key.d1, key.d2, key.f);
    let num = a.a(1, 1) as i128 * a.minor(1, 1) as i128 - 1;
    let d = (num / f as i128) as i64;
    if d == 0 {
        return Err(Error::Precondition("D = 0 in the braid factorization".into()));
    }
    Ok(BraidFactors {
        gamma1: Sl2::complete(q(a.a(2, 1) / f), q(d1), qf(a.minor(2, 1), d))?,
        gamma3: Sl2::complete(q(a.a(1, 1)), q(f), q(a.minor(1, 1)))?,
        gamma2: Sl2::complete(qf(a.a(1, 2), d), q(d2), q(a.minor(1, 2) / f))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slmat::{bruhat_coords_w0, coset_equal};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_w0(rng: &mut ChaCha8Rng) -> IntMat3 {
        loop {
            let mut m = IntMat3::identity();
            for _ in 0..7 {
                let i = rng.gen_range(0..3);
                let j = (i + rng.gen_range(1..3)) % 3;
                let mut e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
                e[i][j] = rng.gen_range(-3..=3);
                m = m.checked_mul(&IntMat3::new(e).unwrap()).unwrap();
            }
            if m.cell() == Weyl::W0 {
                return m;
            }
        }
    }

    #[test]
    fn shifts_act_as_documented() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let a = random_w0(&mut rng);
            let key = stratum_invariants(&a).unwrap();
            let n = [0; 4].map(|_| rng.gen_range(-3..=3));
            let s = shift_representative(&a, n).unwrap();
            let b = s.matrix;
            assert_eq!(s.left.checked_mul(&a).unwrap().checked_mul(&s.right).unwrap(), b);
            assert_eq!(b.a(3, 1), a.a(3, 1));
            assert_eq!(b.minor(1, 3), a.minor(1, 3));
            assert_eq!(b.a(3, 2), a.a(3, 2) + a.a(3, 1) * n[0]);
            assert_eq!(b.a(3, 3), a.a(3, 3) + key.f * n[1]);
            assert_eq!(b.minor(3, 3), a.minor(3, 3) + key.f * n[2]);
            assert_eq!(b.minor(2, 3), a.minor(2, 3) + key.d2 * key.f * n[3]);
            assert_eq!(stratum_invariants(&b).unwrap(), key);
            assert!(coset_equal(&a, &b).unwrap());
        }
    }

    #[test]
    fn bott_samelson_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let a = ensure_d_nonzero(&random_w0(&mut rng)).unwrap();
            let bs = bott_samelson(&a).unwrap();
            assert_eq!(bs.product(), a.to_rat(), "{a}");
            let key = stratum_invariants(&a).unwrap();
            assert_eq!((bs.gamma1.d.clone(), bs.gamma2.d.clone(), bs.gamma3.d.clone()), (q(key.d1), q(key.d2), q(key.f)));
            assert!(bs.gamma3.is_integral());
        }
    }

    #[test]
    fn braid_agrees_with_dagger_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        for _ in 0..300 {
            let a = random_w0(&mut rng);
            let Ok(br) = braid_factorization(&a) else { continue };
            checked += 1;
            assert_eq!(br.product(), a.to_rat(), "{a}");
            let bs = bott_samelson(&a.dagger()).unwrap();
            assert_eq!((bs.gamma2, bs.gamma3, bs.gamma1), (br.gamma1, br.gamma3, br.gamma2));
            let k = stratum_invariants_braid(&a).unwrap();
            let kd = stratum_invariants(&a.dagger()).unwrap();
            assert_eq!((k.d1, k.d2, k.f), (kd.d2, kd.d1, kd.f));
        }
        assert!(checked > 100);
    }

    #[test]
    fn common_gcd_of_minors() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..300 {
            let a = random_w0(&mut rng);
            assert_eq!(gcd(a.a(3, 1), a.a(3, 2)), gcd(a.minor(1, 3), a.minor(2, 3)));
            assert_eq!(gcd(a.a(3, 1), a.a(2, 1)), gcd(a.minor(1, 3), a.minor(1, 2)));
            let key = stratum_invariants(&a).unwrap();
            let d = (a.a(3, 3) as i128 * a.minor(3, 3) as i128 - 1) % key.f as i128;
            assert_eq!(d, 0);
            let bc = bruhat_coords_w0(&a).unwrap();
            assert_eq!(bc.c().0, num_rational::BigRational::from_integer(key.c1().into()));
        }
    }
}
