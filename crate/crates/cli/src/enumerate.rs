use std::io::Write;

use clap::{Args, ValueEnum};
use serde_json::json;
use sl3_kloosterman::oracle::{enumerate_plucker, enumerate_plucker_naive, realize_matrix};
use sl3_kloosterman::slmat::{canonical_rep, CellParams, StratumKey};
use sl3_kloosterman::strata::{enumerate_cosets, level_filter, strata_of};
use sl3_kloosterman::sums::kuznetsov_geometric_indices;

use crate::config::positive;
use crate::output::{Format, record, sum_fields, Emitter, Record};
use crate::{CliError, Ctx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnumKind {
    Stratum,
    Cosets,
    Plucker,
    KuznetsovIndices,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(value_enum)]
    pub kind: EnumKind,
    #[arg(long)]
    pub d1: Option<i64>,
    #[arg(long)]
    pub d2: Option<i64>,
    #[arg(long)]
    pub f: Option<i64>,
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<i64>,
    /// Keep only strata with `level | f`.
    #[arg(long, alias = "N", short = 'N')]
    pub level: Option<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub m: Vec<i64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub n: Vec<i64>,
    #[arg(long)]
    pub cutoff: Option<i64>,
    /// Plücker enumeration choosing all residues at once (overcounts).
    #[arg(long)]
    pub naive: bool,
}

fn req(name: &str, v: Option<i64>) -> Result<i64, CliError> {
    let x = v.ok_or_else(|| CliError::Usage(format!("--{name} is required")))?;
    positive(name, x)?;
    Ok(x)
}

fn pair(name: &str, v: &[i64]) -> Result<[i64; 2], CliError> {
    v.try_into().map_err(|_| CliError::Usage(format!("--{name} needs two comma-separated integers")))
}

fn coset_record(p: &CellParams) -> Result<Record, CliError> {
    let a = canonical_rep(p)?;
    Ok(record([
        ("d1", json!(p.d1)),
        ("d2", json!(p.d2)),
        ("f", json!(p.f)),
        ("x2", json!(p.x2)),
        ("y1", json!(p.y1)),
        ("x3", json!(p.x3)),
        ("y3", json!(p.y3)),
        ("k", json!(p.k)),
        ("matrix", json!(a.rows())),
    ]))
}

pub fn run(ctx: &Ctx, a: &EnumerateArgs, out: impl Write) -> Result<(), CliError> {
    let mut em = Emitter::new(ctx.format_or(Format::Json), out);
    match a.kind {
        EnumKind::Stratum => {
            let key = StratumKey::new(req("d1", a.d1)?, req("d2", a.d2)?, req("f", a.f)?)?;
            for p in enumerate_cosets(key) {
                em.emit(&coset_record(&p)?)?;
            }
        }
        EnumKind::Cosets => {
            let [c1, c2] = pair("c", &a.c)?;
            positive("c1", c1)?;
            positive("c2", c2)?;
            let mut keys = strata_of(c1, c2)?;
            if let Some(l) = a.level {
                positive("level", l)?;
                keys = level_filter(&keys, l);
            }
            for key in keys {
                for p in enumerate_cosets(key) {
                    em.emit(&coset_record(&p)?)?;
                }
            }
        }
        EnumKind::Plucker => {
            let [c1, c2] = pair("c", &a.c)?;
            let ps = if a.naive {
                enumerate_plucker_naive(c1, c2)?
            } else {
                enumerate_plucker(c1, c2)?
            };
            for p in ps {
                let keep = match a.level {
                    Some(l) => {
                        positive("level", l)?;
                        p.a1 % l == 0 && p.b1 % l == 0
                    }
                    None => true,
                };
                if keep {
                    let m = realize_matrix(&p)?;
                    em.emit(&record([
                        ("sextuple", json!([p.a1, p.b1, p.c1, p.a2, p.b2, p.c2])),
                        ("matrix", json!(m.rows())),
                    ]))?;
                }
            }
        }
        EnumKind::KuznetsovIndices => {
            let level = req("N", a.level)?;
            let cutoff = req("cutoff", a.cutoff)?;
            let terms = kuznetsov_geometric_indices(level, pair("m", &a.m)?, pair("n", &a.n)?, cutoff)?;
            for t in terms {
                let mut rec = record([
                    ("term", serde_json::to_value(t.kind).expect("serializable")),
                    ("eps", json!(t.eps)),
                    ("moduli", json!(t.moduli)),
                    ("weight_args", json!(t.weight_args)),
                ]);
                rec.extend(sum_fields(&t.value, ctx.exact));
                em.emit(&rec)?;
            }
        }
    }
    Ok(())
}
