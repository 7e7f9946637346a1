use clap::Subcommand;
use serde_json::Value;
use subspace_core::bounds::{a_closed_form, ledger_lookup, table_ledger, BoundEntry};
use subspace_core::{Error, Result};

use crate::report::Report;

#[derive(Subcommand, Debug)]
pub enum BoundsCmd {
    /// Known values and bounds of A_2(v,d) for v <= 8.
    Table,
    /// One ledger cell, with the closed form where one applies.
    Lookup {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        d: usize,
    },
}

fn row(e: &BoundEntry) -> Vec<Value> {
    vec![
        e.q.into(),
        e.v.into(),
        e.d.into(),
        e.lower.to_string().into(),
        e.upper.to_string().into(),
        e.exact.into(),
        e.types.map_or(Value::Null, Value::from),
    ]
}

const HEADER: [&str; 7] = ["q", "v", "d", "lower", "upper", "exact", "types"];

pub fn run(c: BoundsCmd) -> Result<Report> {
    match c {
        BoundsCmd::Table => {
            let ledger = table_ledger();
            let mut r = Report::new("bounds table");
            r.line(format!("{:>2} {:>2} {:>7} {:>7}  {}", "v", "d", "lower", "upper", "cell"));
            for e in &ledger {
                r.line(format!("{:>2} {:>2} {:>7} {:>7}  {e}", e.v, e.d, e.lower, e.upper));
            }
            r.table(&HEADER, ledger.iter().map(row).collect());
            Ok(r)
        }
        BoundsCmd::Lookup { v, d } => {
            let entry = ledger_lookup(v, d).ok_or_else(|| {
                Error::OutOfScope(format!("no ledger cell for v={v}, d={d}"))
            })?;
            let mut r = Report::new("bounds lookup");
            r.line(format!("A_2({v},{d}) = {entry}"));
            let mut rows = vec![row(&entry)];
            match a_closed_form(2, v, d) {
                Ok(cf) => {
                    r.line(format!("closed form: {cf} ({})", cf.provenance));
                    let agrees = cf.lower <= entry.upper && entry.lower <= cf.upper;
                    if !agrees {
                        r.line("closed form disagrees with the ledger").fail();
                    }
                    r.field("closed_form", cf.to_string());
                    rows.push(row(&cf));
                }
                Err(Error::OutOfScope(_)) => {
                    r.line("closed form: none");
                }
                Err(e) => return Err(e),
            }
            r.field("cell", entry.to_string());
            r.table(&HEADER, rows);
            Ok(r)
        }
    }
}
