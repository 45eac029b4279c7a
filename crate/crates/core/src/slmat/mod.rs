//! Integer and rational 3×3 matrices, Weyl group elements and Bruhat cells.
//!
//! Indices in the public API are 1-based. `minor(i, j)` is the determinant
//! left after deleting row `i` and column `j`, without cofactor sign.

mod bruhat;
mod cell;
mod factor;

pub use bruhat::{bruhat_coords, bruhat_coords_generic, bruhat_coords_w0, BruhatCoords};
pub use cell::{
    canonical_lift, canonical_rep, classify, corollary_matrix, coset_equal, coset_key,
    integrality_congruences, smallest_coprime_lift, CellParams, CosetKey,
};
pub use factor::{
    bott_samelson, braid_factorization, ensure_d_nonzero, shift_representative,
    stratum_invariants, stratum_invariants_braid, BraidFactors, BsFactors, Shifted, StratumKey,
};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ENTRY_BOUND: i64 = 1 << 31;

/// A matrix in `SL(3, Z)` with entries below `2^31` in absolute value, so that
/// every 2×2 minor fits in an `i64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 3]; 3]", into = "[[i64; 3]; 3]")]
pub struct IntMat3([[i64; 3]; 3]);

impl TryFrom<[[i64; 3]; 3]> for IntMat3 {
    type Error = Error;
    fn try_from(rows: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<IntMat3> for [[i64; 3]; 3] {
    fn from(m: IntMat3) -> Self {
        m.0
    }
}

fn det3(r: &[[i128; 3]; 3]) -> i128 {
    r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
        + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
}

impl IntMat3 {
    pub fn new(rows: [[i64; 3]; 3]) -> Result<Self> {
        if rows.iter().flatten().any(|x| x.abs() >= ENTRY_BOUND) {
            return Err(Error::Overflow);
        }
        let wide = rows.map(|r| r.map(i128::from));
        let d = det3(&wide);
        if d != 1 {
            return Err(Error::NotUnimodular(d));
        }
        Ok(Self(rows))
    }

    fn from_wide(rows: [[i128; 3]; 3]) -> Result<Self> {
        let mut out = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = i64::try_from(rows[i][j]).map_err(|_| Error::Overflow)?;
            }
        }
        Self::new(out)
    }

    pub fn identity() -> Self {
        Self([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    /// Upper unipotent matrix with superdiagonal entries `a12, a13, a23`.
    pub fn unipotent(a12: i64, a13: i64, a23: i64) -> Result<Self> {
        Self::new([[1, a12, a13], [0, 1, a23], [0, 0, 1]])
    }

    pub fn rows(&self) -> [[i64; 3]; 3] {
        self.0
    }

    /// Entry `A_ij`, 1-based.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.0[i - 1][j - 1]
    }

    /// Determinant of the 2×2 matrix left after deleting row `i` and column `j`.
    pub fn minor(&self, i: usize, j: usize) -> i64 {
        let rs: Vec<usize> = (0..3).filter(|&r| r != i - 1).collect();
        let cs: Vec<usize> = (0..3).filter(|&c| c != j - 1).collect();
        let m = &self.0;
        m[rs[0]][cs[0]] * m[rs[1]][cs[1]] - m[rs[0]][cs[1]] * m[rs[1]][cs[0]]
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = [[0i128; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.0[i][k] as i128 * other.0[k][j] as i128).sum();
            }
        }
        Self::from_wide(out)
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([0, 1, 2].map(|i| [m[0][i], m[1][i], m[2][i]]))
    }

    /// Inverse via the adjugate (det is 1).
    pub fn inverse(&self) -> Self {
        let mut out = [[0i64; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                *x = sign * self.minor(j + 1, i + 1);
            }
        }
        Self(out)
    }

    /// `w0 (Aᵀ)^{-1} w0^{-1}`; entrywise `A†_ij = M(4-i, 4-j)`.
    pub fn dagger(&self) -> Self {
        Self([1, 2, 3].map(|i| [1, 2, 3].map(|j| self.minor(4 - i, 4 - j))))
    }

    pub fn to_rat(&self) -> RatMat3 {
        RatMat3(self.0.map(|r| r.map(|x| BigRational::from_integer(BigInt::from(x)))))
    }

    /// The Bruhat cell containing this matrix, read off the vanishing pattern
    /// of the lower-left entries and minors.
    pub fn cell(&self) -> Weyl {
        if self.a(3, 1) != 0 {
            if self.minor(1, 3) != 0 {
                Weyl::W0
            } else {
                Weyl::SbSa
            }
        } else if self.a(2, 1) != 0 {
            if self.a(3, 2) != 0 {
                Weyl::SaSb
            } else {
                Weyl::Sa
            }
        } else if self.a(3, 2) != 0 {
            Weyl::Sb
        } else {
            Weyl::E
        }
    }
}

impl fmt::Display for IntMat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.0;
        write!(
            f,
            "[[{}, {}, {}], [{}, {}, {}], [{}, {}, {}]]",
            r[0][0], r[0][1], r[0][2], r[1][0], r[1][1], r[1][2], r[2][0], r[2][1], r[2][2]
        )
    }
}

/// A 3×3 matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat3(pub [[BigRational; 3]; 3]);

impl RatMat3 {
    pub fn identity() -> Self {
        IntMat3::identity().to_rat()
    }

    pub fn diag(t: &[BigRational; 3]) -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = t[i].clone();
        }
        m
    }

    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| std::array::from_fn(|_| BigRational::zero())))
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.0[i - 1][j - 1]
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(BigRational::zero(), |acc, k| acc + &self.0[i][k] * &other.0[k][j])
            })
        }))
    }

    pub fn transpose(&self) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].clone())))
    }

    /// Inverse of an upper unipotent matrix.
    pub fn unipotent_inverse(&self) -> Self {
        let a = self.get(1, 2);
        let b = self.get(1, 3);
        let c = self.get(2, 3);
        let mut m = Self::identity();
        m.0[0][1] = -a.clone();
        m.0[1][2] = -c.clone();
        m.0[0][2] = a * c - b;
        m
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMat3> {
        if !self.is_integral() {
            return None;
        }
        let mut out = [[0i64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = i64::try_from(self.0[i][j].to_integer()).ok()?;
            }
        }
        IntMat3::new(out).ok()
    }

    pub fn is_upper_unipotent(&self) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => self.0[i][j].is_one(),
                std::cmp::Ordering::Greater => self.0[i][j].is_zero(),
                std::cmp::Ordering::Less => true,
            })
        })
    }
}

/// Elements of the Weyl group `S_3`, written as reduced words in the simple
/// reflections `sa = (12)` and `sb = (23)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weyl {
    E,
    Sa,
    Sb,
    SaSb,
    SbSa,
    W0,
}

impl Weyl {
    pub const ALL: [Weyl; 6] = [Weyl::E, Weyl::Sa, Weyl::Sb, Weyl::SaSb, Weyl::SbSa, Weyl::W0];

    pub fn name(self) -> &'static str {
        match self {
            Weyl::E => "e",
            Weyl::Sa => "sa",
            Weyl::Sb => "sb",
            Weyl::SaSb => "sasb",
            Weyl::SbSa => "sbsa",
            Weyl::W0 => "w0",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|w| w.name() == s)
    }

    pub fn matrix(self) -> IntMat3 {
        let sa = IntMat3([[0, -1, 0], [1, 0, 0], [0, 0, 1]]);
        let sb = IntMat3([[1, 0, 0], [0, 0, -1], [0, 1, 0]]);
        let mul = |a: IntMat3, b: IntMat3| a.checked_mul(&b).unwrap();
        match self {
            Weyl::E => IntMat3::identity(),
            Weyl::Sa => sa,
            Weyl::Sb => sb,
            Weyl::SaSb => mul(sa, sb),
            Weyl::SbSa => mul(sb, sa),
            Weyl::W0 => mul(mul(sa, sb), sa),
        }
    }

    /// The permutation `w(1), w(2), w(3)` with `w e_j = ± e_{w(j)}`.
    pub fn perm(self) -> [usize; 3] {
        let m = self.matrix();
        [1, 2, 3].map(|j| (1..=3).find(|&i| m.a(i, j) != 0).unwrap())
    }

    pub fn length(self) -> usize {
        let p = self.perm();
        (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count()
    }

    /// Free positions `(i, j)` of `U_w`: `i < j` and `w(i) < w(j)`.
    pub fn u_lower_free(self) -> Vec<(usize, usize)> {
        let p = self.perm();
        [(1, 2), (1, 3), (2, 3)].into_iter().filter(|&(i, j)| p[i - 1] < p[j - 1]).collect()
    }

    /// Free positions of the complementary group `U^w`: `w(i) > w(j)`.
    pub fn u_upper_free(self) -> Vec<(usize, usize)> {
        let p = self.perm();
        [(1, 2), (1, 3), (2, 3)].into_iter().filter(|&(i, j)| p[i - 1] > p[j - 1]).collect()
    }
}

impl fmt::Display for Weyl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A matrix `[[x, b], [d, y]]` in `SL(2, Q)`; factor blocks may be non-integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2 {
    pub x: BigRational,
    pub b: BigRational,
    pub d: BigRational,
    pub y: BigRational,
}

impl Sl2 {
    /// Complete `(x, ·; d, y)` using `b = (xy - 1)/d`.
    pub fn complete(x: BigRational, d: BigRational, y: BigRational) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let b = (&x * &y - BigRational::one()) / &d;
        Ok(Self { x, b, d, y })
    }

    pub fn is_integral(&self) -> bool {
        [&self.x, &self.b, &self.d, &self.y].iter().all(|v| v.is_integer())
    }

    pub fn iota_alpha(&self) -> RatMat3 {
        let mut m = RatMat3::identity();
        m.0[0][0] = self.x.clone();
        m.0[0][1] = self.b.clone();
        m.0[1][0] = self.d.clone();
        m.0[1][1] = self.y.clone();
        m
    }

    pub fn iota_beta(&self) -> RatMat3 {
        let mut m = RatMat3::identity();
        m.0[1][1] = self.x.clone();
        m.0[1][2] = self.b.clone();
        m.0[2][1] = self.d.clone();
        m.0[2][2] = self.y.clone();
        m
    }
}
