use std::io::Write;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sl3_kloosterman::arith::divisors;
use sl3_kloosterman::divisor::{hecke_check, hecke_check_real, verify_divisor_identity};
use sl3_kloosterman::oracle::{enumerate_plucker, enumerate_plucker_naive, realize_matrix, OracleTable, Plucker};
use sl3_kloosterman::par;
use sl3_kloosterman::slmat::coset_equal;
use sl3_kloosterman::strata::{coset_count, enumerate_cosets, strata_of};
use sl3_kloosterman::sums::{bound_paper, character_grid, coarse_kloosterman, level_kloosterman, Characters, Word};

use crate::config::positive;
use crate::output::{Format, record, Emitter};
use crate::{CliError, Ctx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Braid,
    Bounds,
    Count,
    Divisor,
    Hecke,
    PluckerCollision,
    Level,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub cmax: Option<i64>,
    #[arg(long)]
    pub charmax: Option<i64>,
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<i64>,
    /// Bounds suite: skip characters with a zero entry.
    #[arg(long)]
    pub nonzero: bool,
    /// Divisor suite: real parts of `(s1, s2)`.
    #[arg(long, value_delimiter = ',', default_value = "2,2")]
    pub s: Vec<f64>,
    #[arg(long, default_value_t = 12)]
    pub nmax: i64,
    #[arg(long = "D", default_value_t = 2000)]
    pub d: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Hecke suite: random real exponents drawn from `--seed`.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

struct Tally {
    checks: u64,
    failures: Vec<Value>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

fn moduli(cmax: i64) -> Vec<[i64; 2]> {
    (1..=cmax).flat_map(|a| (1..=cmax).map(move |b| [a, b])).collect()
}

fn sweep(ctx: &Ctx, cmax: i64, per: impl Fn([i64; 2]) -> Result<Tally, CliError> + Sync + Send) -> Result<Tally, CliError> {
    let mut t = Tally::new();
    for r in par::map(&moduli(cmax), ctx.mode(), |&c| per(c)) {
        t.merge(r?);
    }
    Ok(t)
}

fn ch_json(ch: &Characters) -> Value {
    json!({"m": ch.m, "n": ch.n})
}

pub fn run(ctx: &Ctx, a: &VerifyArgs, out: impl Write) -> Result<(), CliError> {
    let cmax = a.cmax.or(ctx.cfg.cmax).unwrap_or(12);
    let charmax = a.charmax.or(ctx.cfg.charmax).unwrap_or(2);
    positive("cmax", cmax)?;
    if charmax < 0 {
        return Err(CliError::Usage(format!("charmax must be nonnegative, got {charmax}")));
    }
    let levels = if a.levels.is_empty() {
        ctx.cfg.levels.clone().unwrap_or_else(|| vec![2, 3, 4])
    } else {
        a.levels.clone()
    };
    for &l in &levels {
        positive("level", l)?;
    }
    let chars = character_grid(charmax);

    let t = match a.suite {
        Suite::Oracle => sweep(ctx, cmax, |[c1, c2]| {
            let table = OracleTable::build(c1, c2)?;
            let mut t = Tally::new();
            for ch in &chars {
                let o = table.eval(ch)?.exact;
                let s = coarse_kloosterman(ch, c1, c2, Word::Aba)?.exact;
                t.check(o == s, || json!({"c": [c1, c2], "ch": ch_json(ch), "oracle": o, "closed": s}));
            }
            Ok(t)
        })?,
        Suite::Braid => sweep(ctx, cmax, |[c1, c2]| {
            let mut t = Tally::new();
            for ch in &chars {
                let x = coarse_kloosterman(ch, c1, c2, Word::Aba)?.exact;
                let y = coarse_kloosterman(ch, c1, c2, Word::Bab)?.exact;
                t.check(x == y, || json!({"c": [c1, c2], "ch": ch_json(ch), "aba": x, "bab": y}));
            }
            Ok(t)
        })?,
        Suite::Bounds => sweep(ctx, cmax, |[c1, c2]| {
            let mut t = Tally::new();
            for ch in chars.iter().filter(|ch| !a.nonzero || ch.m.iter().chain(&ch.n).all(|&x| x != 0)) {
                let v = coarse_kloosterman(ch, c1, c2, Word::Aba)?.approx.norm();
                let b = bound_paper(ch, c1, c2)?;
                t.check(v <= b * (1.0 + 1e-6), || json!({"c": [c1, c2], "ch": ch_json(ch), "abs": v, "bound": b}));
            }
            Ok(t)
        })?,
        Suite::Count => {
            let mut t = Tally::new();
            for [c1, c2] in moduli(cmax) {
                let formula = coset_count(c1, c2)?;
                let strata: i64 = strata_of(c1, c2)?.into_iter().map(|k| enumerate_cosets(k).len() as i64).sum();
                let plucker = enumerate_plucker(c1, c2)?.len() as i64;
                t.check(formula == strata && strata == plucker, || {
                    json!({"c": [c1, c2], "formula": formula, "strata": strata, "plucker": plucker})
                });
            }
            t
        }
        Suite::Divisor => {
            let [s1, s2]: [f64; 2] =
                a.s.as_slice().try_into().map_err(|_| CliError::Usage("--s needs two comma-separated numbers".into()))?;
            positive("nmax", a.nmax)?;
            let mut t = Tally::new();
            for n in 1..=a.nmax {
                let r = verify_divisor_identity(Complex64::new(s1, 0.0), Complex64::new(s2, 0.0), n, a.d)?;
                t.check(r.abs_err < a.tol, || json!({"n": n, "report": r}));
            }
            t
        }
        Suite::Hecke => {
            positive("nmax", a.nmax)?;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            let mut t = Tally::new();
            for n in 1..=a.nmax {
                for p in divisors(n)?.into_iter().filter(|&p| p > 1 && divisors(p).map(|d| d.len() == 2).unwrap_or(false)) {
                    for alpha in 0..=3 {
                        let ok = hecke_check(alpha, n, p)?;
                        t.check(ok, || json!({"n": n, "p": p, "alpha": alpha}));
                    }
                    for _ in 0..a.samples {
                        let alpha: f64 = rng.gen_range(-2.0..2.0);
                        let ok = hecke_check_real(alpha, n, p, 1e-9)?;
                        t.check(ok, || json!({"n": n, "p": p, "alpha": alpha}));
                    }
                }
            }
            t
        }
        Suite::PluckerCollision => {
            let mut t = Tally::new();
            let p = Plucker::new([2, 1, 0, 2, 2, -1]);
            let q = Plucker::new([2, 1, 1, 2, 0, -1]);
            let same = coset_equal(&realize_matrix(&p)?, &realize_matrix(&q)?)?;
            t.check(same, || json!({"pair": [[2, 1, 0, 2, 2, -1], [2, 1, 1, 2, 0, -1]], "same_coset": same}));
            for c in 1..=cmax.min(6) {
                let naive = enumerate_plucker_naive(c, c)?.len() as i64;
                let ordered = enumerate_plucker(c, c)?.len() as i64;
                let count = coset_count(c, c)?;
                t.check(ordered == count && naive >= ordered, || {
                    json!({"c": [c, c], "naive": naive, "ordered": ordered, "count": count})
                });
            }
            t
        }
        Suite::Level => sweep(ctx, cmax, |[c1, c2]| {
            let table = OracleTable::build(c1, c2)?;
            let mut t = Tally::new();
            for &l in &levels {
                let sub = table.filter(|m| m.a(3, 1) % l == 0 && m.a(3, 2) % l == 0);
                for ch in &chars {
                    let o = sub.eval(ch)?.exact;
                    let s = level_kloosterman(ch, c1, c2, l)?.exact;
                    t.check(o == s, || json!({"level": l, "c": [c1, c2], "ch": ch_json(ch), "oracle": o, "closed": s}));
                }
            }
            Ok(t)
        })?,
    };

    let pass = t.failures.is_empty();
    let suite = a.suite.to_possible_value().expect("named variant").get_name().to_string();
    let rec = record([
        ("suite", Value::String(suite)),
        ("pass", Value::Bool(pass)),
        ("checks", json!(t.checks)),
        ("failures", json!(t.failures.len())),
        ("counterexample", t.failures.first().cloned().unwrap_or(Value::Null)),
    ]);
    Emitter::new(ctx.format_or(Format::Json), out).emit(&rec)?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}
