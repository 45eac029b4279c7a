use std::io::Write;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use sl3_kloosterman::arith::kloosterman;
use sl3_kloosterman::oracle::{oracle_coarse, oracle_fine, oracle_level};
use sl3_kloosterman::slmat::{StratumKey, Weyl};
use sl3_kloosterman::sums::{
    coarse_kloosterman, compatibility_check, fine_kloosterman, fine_kloosterman_braid, hyper_kloosterman_ab,
    hyper_kloosterman_ba, level_kloosterman, ramanujan_general, Characters, ConditionPolicy, SumResult, Word,
};

use crate::config::positive;
use crate::output::{Format, record, sum_fields, Emitter};
use crate::{CliError, Ctx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SumKind {
    Classical,
    Fine,
    FineBraid,
    Coarse,
    HyperAb,
    HyperBa,
    Ramanujan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Ignore,
    Warn,
    Error,
}

impl From<Policy> for ConditionPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Ignore => ConditionPolicy::Ignore,
            Policy::Warn => ConditionPolicy::Warn,
            Policy::Error => ConditionPolicy::Error,
        }
    }
}

#[derive(Args, Debug)]
pub struct SumArgs {
    #[arg(value_enum)]
    pub kind: SumKind,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub m: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub n: Vec<i64>,
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<i64>,
    #[arg(long)]
    pub d1: Option<i64>,
    #[arg(long)]
    pub d2: Option<i64>,
    #[arg(long)]
    pub f: Option<i64>,
    /// Restrict a coarse sum to the congruence subgroup of this level.
    #[arg(long)]
    pub level: Option<i64>,
    #[arg(long, value_enum, default_value = "aba")]
    pub word: WordArg,
    /// Evaluate by direct enumeration of double cosets instead of the closed form.
    #[arg(long)]
    pub oracle: bool,
    /// Handling of the divisibility condition of the hyper-Kloosterman sums.
    #[arg(long, value_enum, default_value = "error")]
    pub policy: Policy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WordArg {
    Aba,
    Bab,
}

impl From<WordArg> for Word {
    fn from(w: WordArg) -> Self {
        match w {
            WordArg::Aba => Word::Aba,
            WordArg::Bab => Word::Bab,
        }
    }
}

fn take<const N: usize>(name: &str, v: &[i64]) -> Result<[i64; N], CliError> {
    v.try_into()
        .map_err(|_| CliError::Usage(format!("--{name} needs {N} comma-separated integer(s), got {}", v.len())))
}

fn need(name: &str, v: Option<i64>) -> Result<i64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required")))
}

fn key(a: &SumArgs) -> Result<StratumKey, CliError> {
    let (d1, d2, f) = (need("d1", a.d1)?, need("d2", a.d2)?, need("f", a.f)?);
    positive("d1", d1)?;
    positive("d2", d2)?;
    positive("f", f)?;
    Ok(StratumKey::new(d1, d2, f)?)
}

pub fn evaluate(a: &SumArgs) -> Result<(SumResult, Value), CliError> {
    Ok(match a.kind {
        SumKind::Classical => {
            let ([m], [n], [c]) = (take("m", &a.m)?, take("n", &a.n)?, take("c", &a.c)?);
            positive("c", c)?;
            let exact = kloosterman(m, n, c)?;
            (SumResult::new(exact, "classical", c as u64), json!({"m": m, "n": n, "c": c}))
        }
        SumKind::Fine | SumKind::FineBraid => {
            let ch = Characters::new(take("m", &a.m)?, take("n", &a.n)?);
            let k = key(a)?;
            let r = match (a.kind, a.oracle) {
                (_, true) => oracle_fine(&ch, k)?,
                (SumKind::Fine, _) => fine_kloosterman(&ch, k)?,
                _ => fine_kloosterman_braid(&ch, k)?,
            };
            (r, json!({"m": ch.m, "n": ch.n, "d1": k.d1, "d2": k.d2, "f": k.f}))
        }
        SumKind::Coarse => {
            let ch = Characters::new(take("m", &a.m)?, take("n", &a.n)?);
            let [c1, c2] = take("c", &a.c)?;
            positive("c1", c1)?;
            positive("c2", c2)?;
            if let Some(l) = a.level {
                positive("level", l)?;
            }
            let compat = compatibility_check(Weyl::W0, &ch, c1, c2);
            if !compat.ok {
                return Err(CliError::Usage(format!("incompatible characters: {}", compat.reason)));
            }
            let r = match (a.level, a.oracle) {
                (Some(l), true) => oracle_level(&ch, c1, c2, l)?,
                (Some(l), false) => level_kloosterman(&ch, c1, c2, l)?,
                (None, true) => oracle_coarse(&ch, c1, c2)?,
                (None, false) => coarse_kloosterman(&ch, c1, c2, a.word.into())?,
            };
            (r, json!({"m": ch.m, "n": ch.n, "c": [c1, c2], "level": a.level}))
        }
        SumKind::HyperAb => {
            let ([m1], [n1, n2]) = (take("m", &a.m)?, take("n", &a.n)?);
            let (d1, d2) = (need("d1", a.d1)?, need("d2", a.d2)?);
            let r = hyper_kloosterman_ab(m1, n1, n2, d1, d2, a.policy.into())?;
            (r, json!({"m": [m1], "n": [n1, n2], "d1": d1, "d2": d2}))
        }
        SumKind::HyperBa => {
            let ([m1, m2], [n1]) = (take("m", &a.m)?, take("n", &a.n)?);
            let (d1, d2) = (need("d1", a.d1)?, need("d2", a.d2)?);
            let r = hyper_kloosterman_ba(m1, m2, n1, d1, d2, a.policy.into())?;
            (r, json!({"m": [m1, m2], "n": [n1], "d1": d1, "d2": d2}))
        }
        SumKind::Ramanujan => {
            let ([n1, n2], [c1, c2]) = (take("n", &a.n)?, take("c", &a.c)?);
            let r = ramanujan_general(c1, c2, n1, n2)?;
            (r, json!({"n": [n1, n2], "c": [c1, c2]}))
        }
    })
}

pub fn run(ctx: &Ctx, a: &SumArgs, out: impl Write) -> Result<(), CliError> {
    let (r, inputs) = evaluate(a)?;
    let kind = a.kind.to_possible_value().expect("named variant").get_name().to_string();
    let mut rec = record([("kind", Value::String(kind)), ("input", inputs)]);
    rec.extend(sum_fields(&r, ctx.exact));
    Emitter::new(ctx.format_or(Format::Json), out).emit(&rec)?;
    Ok(())
}
