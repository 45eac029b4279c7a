use std::io::Write;

use clap::{Args, ValueEnum};
use serde_json::json;
use sl3_kloosterman::par;
use sl3_kloosterman::slmat::StratumKey;
use sl3_kloosterman::sums::{
    character_grid, coarse_sweep, fine_kloosterman, level_kloosterman, Characters, GridPoint, SumResult, Word,
};

use crate::config::positive;
use crate::output::{record, sum_fields, Emitter, Format, Record};
use crate::sum::WordArg;
use crate::{CliError, Ctx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Coarse,
    Fine,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(value_enum, default_value = "coarse")]
    pub kind: TableKind,
    #[arg(long)]
    pub cmax: Option<i64>,
    #[arg(long)]
    pub charmax: Option<i64>,
    #[arg(long)]
    pub level: Option<i64>,
    #[arg(long, value_enum, default_value = "aba")]
    pub word: WordArg,
    #[arg(long, value_delimiter = ',')]
    pub d1: Vec<i64>,
    #[arg(long, value_delimiter = ',')]
    pub d2: Vec<i64>,
    #[arg(long, value_delimiter = ',')]
    pub f: Vec<i64>,
}

fn row(ctx: &Ctx, c: String, ch: &Characters, r: &SumResult) -> Record {
    let mut rec = record([
        ("c", json!(c)),
        ("m1", json!(ch.m[0])),
        ("m2", json!(ch.m[1])),
        ("n1", json!(ch.n[0])),
        ("n2", json!(ch.n[1])),
    ]);
    rec.extend(sum_fields(r, ctx.exact));
    rec
}

fn range(flag: &[i64], cfg: &Option<Vec<i64>>, default: i64) -> Vec<i64> {
    if !flag.is_empty() {
        flag.to_vec()
    } else {
        cfg.clone().unwrap_or_else(|| (1..=default).collect())
    }
}

pub fn run(ctx: &Ctx, a: &TableArgs, out: impl Write) -> Result<(), CliError> {
    let cmax = a.cmax.or(ctx.cfg.cmax).unwrap_or(6);
    let charmax = a.charmax.or(ctx.cfg.charmax).unwrap_or(1);
    positive("cmax", cmax)?;
    if charmax < 0 {
        return Err(CliError::Usage(format!("charmax must be nonnegative, got {charmax}")));
    }
    let chars = character_grid(charmax);
    let mut em = Emitter::new(ctx.format_or(Format::Csv), out);
    match a.kind {
        TableKind::Coarse => {
            let points = match a.level {
                None => coarse_sweep(cmax, &chars, Word::from(a.word), ctx.mode())?,
                Some(l) => {
                    positive("level", l)?;
                    let moduli: Vec<[i64; 2]> = (1..=cmax).flat_map(|x| (1..=cmax).map(move |y| [x, y])).collect();
                    let blocks = par::map(&moduli, ctx.mode(), |&c| {
                        chars
                            .iter()
                            .map(|ch| {
                                Ok(GridPoint {
                                    c,
                                    ch: *ch,
                                    result: level_kloosterman(ch, c[0], c[1], l)?,
                                })
                            })
                            .collect::<sl3_kloosterman::Result<Vec<_>>>()
                    });
                    let mut points = Vec::new();
                    for b in blocks {
                        points.extend(b?);
                    }
                    points
                }
            };
            for p in points {
                em.emit(&row(ctx, format!("{}x{}", p.c[0], p.c[1]), &p.ch, &p.result))?;
            }
        }
        TableKind::Fine => {
            let (d1s, d2s, fs) = (range(&a.d1, &ctx.cfg.d1, 3), range(&a.d2, &ctx.cfg.d2, 3), range(&a.f, &ctx.cfg.f, 3));
            let mut keys = Vec::new();
            for &d1 in &d1s {
                for &d2 in &d2s {
                    for &f in &fs {
                        positive("d1", d1)?;
                        positive("d2", d2)?;
                        positive("f", f)?;
                        keys.push(StratumKey::new(d1, d2, f)?);
                    }
                }
            }
            let blocks = par::map(&keys, ctx.mode(), |&k| {
                chars.iter().map(|ch| Ok((*ch, fine_kloosterman(ch, k)?))).collect::<sl3_kloosterman::Result<Vec<_>>>()
            });
            for (k, b) in keys.iter().zip(blocks) {
                for (ch, r) in b? {
                    em.emit(&row(ctx, format!("{}x{}x{}", k.d1, k.d2, k.f), &ch, &r))?;
                }
            }
        }
    }
    Ok(())
}
