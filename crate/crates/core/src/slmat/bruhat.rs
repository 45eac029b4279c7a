use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{IntMat3, RatMat3, Weyl};
use crate::error::{Error, Result};

/// `A = u_left · w · diag(t) · u_right` with `u_right ∈ U^w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruhatCoords {
    pub w: Weyl,
    pub u_left: RatMat3,
    pub t: [BigRational; 3],
    pub u_right: RatMat3,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

impl BruhatCoords {
    pub fn reconstruct(&self) -> RatMat3 {
        self.u_left
            .mul(&self.w.matrix().to_rat())
            .mul(&RatMat3::diag(&self.t))
            .mul(&self.u_right)
    }

    /// `c1 = t1`, `c2 = t1 t2`.
    pub fn c(&self) -> (BigRational, BigRational) {
        (self.t[0].clone(), &self.t[0] * &self.t[1])
    }
}

/// Bruhat coordinates in the big cell, from the minor formulas.
pub fn bruhat_coords_w0(a: &IntMat3) -> Result<BruhatCoords> {
    let (a31, m13) = (a.a(3, 1), a.minor(1, 3));
    if a31 == 0 || m13 == 0 {
        return Err(Error::WrongCell {
            expected: "w0".into(),
            found: a.cell().to_string(),
        });
    }
    let mut ul = RatMat3::identity();
    ul.0[0][1] = frac(a.minor(2, 3), m13);
    ul.0[0][2] = frac(a.a(1, 1), a31);
    ul.0[1][2] = frac(a.a(2, 1), a31);
    let mut ur = RatMat3::identity();
    ur.0[0][1] = frac(a.a(3, 2), a31);
    ur.0[0][2] = frac(a.a(3, 3), a31);
    ur.0[1][2] = frac(a.minor(1, 2), m13);
    Ok(BruhatCoords {
        w: Weyl::W0,
        u_left: ul,
        t: [rat(a31), frac(m13, a31), frac(1, m13)],
        u_right: ur,
    })
}

/// Bruhat coordinates for any cell by two-sided unipotent elimination.
pub fn bruhat_coords_generic(a: &IntMat3) -> BruhatCoords {
    let mut m = a.to_rat();
    let mut ul = RatMat3::identity();
    let mut ur = RatMat3::identity();
    let mut used = [false; 3];
    for j in 0..3 {
        let p = (0..3)
            .rev()
            .find(|&i| !used[i] && !m.0[i][j].is_zero())
            .expect("invertible matrix has a pivot in every column");
        used[p] = true;
        let pivot = m.0[p][j].clone();
        for i in 0..p {
            if m.0[i][j].is_zero() {
                continue;
            }
            let c = &m.0[i][j] / &pivot;
            for k in 0..3 {
                let v = &c * &m.0[p][k];
                m.0[i][k] -= v;
            }
            // A = ul · m stays invariant: ul ← ul (I + c e_ip).
            for r in 0..3 {
                let v = &ul.0[r][i] * &c;
                ul.0[r][p] += v;
            }
        }
        for k in j + 1..3 {
            if m.0[p][k].is_zero() {
                continue;
            }
            let c = &m.0[p][k] / &pivot;
            for r in 0..3 {
                let v = &c * &m.0[r][j];
                m.0[r][k] -= v;
            }
            // ur ← (I + c e_jk) ur.
            for s in 0..3 {
                let v = &c * &ur.0[k][s];
                ur.0[j][s] += v;
            }
        }
    }
    let rows: Vec<usize> = (0..3).map(|j| (0..3).find(|&i| !m.0[i][j].is_zero()).unwrap()).collect();
    let w = Weyl::ALL
        .into_iter()
        .find(|w| w.perm().iter().zip(&rows).all(|(&p, &r)| p == r + 1))
        .unwrap();
    let wm = w.matrix();
    let t: [BigRational; 3] =
        std::array::from_fn(|j| &m.0[rows[j]][j] / rat(wm.a(rows[j] + 1, j + 1)));

    // Split ur = lo · hi with lo ∈ U_w, hi ∈ U^w, then move lo across w·t.
    let lower = w.u_lower_free();
    let free = |i: usize, j: usize| lower.contains(&(i, j));
    let mut lo = RatMat3::identity();
    let mut hi = RatMat3::identity();
    for (i, j) in [(1, 2), (2, 3)] {
        let target = if free(i, j) { &mut lo } else { &mut hi };
        target.0[i - 1][j - 1] = ur.get(i, j).clone();
    }
    let rest = ur.get(1, 3) - lo.get(1, 2) * hi.get(2, 3);
    if free(1, 3) {
        lo.0[0][2] = rest;
    } else {
        hi.0[0][2] = rest;
    }
    let wt = wm.to_rat().mul(&RatMat3::diag(&t));
    let t_inv: [BigRational; 3] = std::array::from_fn(|i| t[i].recip());
    let wt_inv = RatMat3::diag(&t_inv).mul(&wm.inverse().to_rat());
    let u_left = ul.mul(&wt).mul(&lo).mul(&wt_inv);
    BruhatCoords {
        w,
        u_left,
        t,
        u_right: hi,
    }
}

/// Bruhat coordinates of `A`; the big cell uses the minor formulas.
pub fn bruhat_coords(a: &IntMat3) -> BruhatCoords {
    match a.cell() {
        Weyl::W0 => bruhat_coords_w0(a).unwrap(),
        _ => bruhat_coords_generic(a),
    }
}

impl BruhatCoords {
    /// True when `u_right` lies in `U^w` and `u_left` in `U`.
    pub fn is_normalized(&self) -> bool {
        let upper = self.w.u_upper_free();
        self.u_left.is_upper_unipotent()
            && self.u_right.is_upper_unipotent()
            && [(1, 2), (1, 3), (2, 3)]
                .into_iter()
                .all(|(i, j)| upper.contains(&(i, j)) || self.u_right.get(i, j).is_zero())
    }

    pub fn t_is_positive(&self) -> bool {
        self.t.iter().all(|x| x.is_positive())
    }

    pub fn t_product_is_one(&self) -> bool {
        (&self.t[0] * &self.t[1] * &self.t[2]).is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_sl3(rng: &mut ChaCha8Rng, steps: usize) -> IntMat3 {
        let mut m = IntMat3::identity();
        for _ in 0..steps {
            let (i, j) = loop {
                let i = rng.gen_range(0..3);
                let j = rng.gen_range(0..3);
                if i != j {
                    break (i, j);
                }
            };
            let mut e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
            e[i][j] = rng.gen_range(-2..=2);
            m = m.checked_mul(&IntMat3::new(e).unwrap()).unwrap();
        }
        m
    }

    #[test]
    fn w0_formulas_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = 0;
        for _ in 0..400 {
            let a = random_sl3(&mut rng, 6);
            if a.cell() != Weyl::W0 {
                continue;
            }
            seen += 1;
            let bc = bruhat_coords_w0(&a).unwrap();
            assert_eq!(bc.reconstruct(), a.to_rat(), "{a}");
            assert_eq!(bruhat_coords_generic(&a), bc, "{a}");
        }
        assert!(seen > 100);
    }

    #[test]
    fn generic_reconstructs_every_cell() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut cells = std::collections::HashSet::new();
        for steps in 0..6 {
            for _ in 0..200 {
                let a = random_sl3(&mut rng, steps);
                let bc = bruhat_coords_generic(&a);
                assert_eq!(bc.w, a.cell(), "{a}");
                assert!(bc.is_normalized(), "{a}");
                assert!(bc.t_product_is_one());
                assert_eq!(bc.reconstruct(), a.to_rat(), "{a}");
                cells.insert(bc.w);
            }
        }
        assert_eq!(cells.len(), 6);
    }
}
