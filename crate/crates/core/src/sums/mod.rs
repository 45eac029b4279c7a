//! Closed-form evaluation of fine and coarse Kloosterman sums, the shorter
//! Weyl element sums, Ramanujan-type sums and the standard bounds.

mod bounds;
mod compat;
mod fine;
mod hyper;
mod kuznetsov;
mod sweep;

pub use bounds::{bound_fine_sweep, bound_paper, bound_stevens, SweepBound};
pub use compat::{compatibility_check, Compatibility};
pub use fine::{
    coarse_kloosterman, coprime_fast_path, fine_by_word, fine_kloosterman, fine_kloosterman_braid,
    fine_kloosterman_lifted, level_kloosterman, Word,
};
pub use hyper::{hyper_kloosterman_ab, hyper_kloosterman_ba, ramanujan_general, ConditionPolicy};
pub use kuznetsov::{kuznetsov_geometric_indices, KuznetsovTerm, TermKind};
pub use sweep::{character_grid, coarse_sweep, GridPoint};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycSum;

/// Character data `ψ_m` on the left and `ψ_n` on the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Characters {
    pub m: [i64; 2],
    pub n: [i64; 2],
}

impl Characters {
    pub fn new(m: [i64; 2], n: [i64; 2]) -> Self {
        Self { m, n }
    }

    /// `(ε1 m1, ε2 m2)` with signs `ε`.
    pub fn twist(&self, eps: [i64; 2]) -> Self {
        Self {
            m: [eps[0] * self.m[0], eps[1] * self.m[1]],
            n: self.n,
        }
    }

    /// Swap the roles of the two simple roots: `(m2, m1), (n2, n1)`.
    pub fn swapped(&self) -> Self {
        Self {
            m: [self.m[1], self.m[0]],
            n: [self.n[1], self.n[0]],
        }
    }
}

/// An exact value together with its floating point approximation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumResult {
    pub exact: CycSum,
    #[serde(with = "complex_pair")]
    pub approx: Complex64,
    pub formula: String,
    pub terms: u64,
}

impl SumResult {
    pub fn new(exact: CycSum, formula: &str, terms: u64) -> Self {
        let (approx, _) = exact.to_complex();
        Self {
            exact,
            approx,
            formula: formula.to_string(),
            terms,
        }
    }
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}
