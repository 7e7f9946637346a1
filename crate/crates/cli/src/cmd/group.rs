use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Subcommand;
use serde_json::json;
use subspace_core::group::{fixed_subspaces, orbits, read_generators, MatrixGroup};
use subspace_core::Result;

use crate::report::Report;

/// Default bound on the order of a generated group.
const DEFAULT_CAP: usize = 1 << 20;

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Order of the group generated by a generator file.
    Closure {
        generators: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Orbits on the k-subspaces.
    Orbits {
        generators: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// k-subspaces fixed by the whole group.
    Fixed {
        generators: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
}

pub fn load_group(path: &PathBuf, cap: usize) -> Result<MatrixGroup> {
    let (v, gens) = read_generators(path)?;
    MatrixGroup::closure(v, &gens, cap)
}

pub fn run(c: GroupCmd) -> Result<Report> {
    match c {
        GroupCmd::Closure { generators, cap } => {
            let g = load_group(&generators, cap)?;
            let mut r = Report::new("group closure");
            r.line(format!("v={} generators={} order={}", g.ambient(), g.generators().len(), g.order()));
            r.field("v", g.ambient()).field("order", g.order());
            Ok(r)
        }
        GroupCmd::Orbits { generators, k, cap } => {
            let g = load_group(&generators, cap)?;
            let dec = orbits(&g, k)?;
            let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
            for s in dec.sizes() {
                *by_size.entry(s).or_default() += 1;
            }
            let mut r = Report::new("group orbits");
            let text: Vec<String> = by_size.iter().map(|(s, n)| format!("{n}x{s}")).collect();
            r.line(format!("order={} k={k} orbits={} ({})", g.order(), dec.orbits.len(), text.join(" ")));
            r.field("order", g.order())
                .field("k", k)
                .field("orbits", dec.orbits.len())
                .field("sizes", by_size.iter().map(|(s, n)| json!([s, n])).collect::<Vec<_>>());
            r.table(
                &["representative", "size"],
                dec.orbits.iter().map(|o| vec![o[0].to_string().into(), o.len().into()]).collect(),
            );
            Ok(r)
        }
        GroupCmd::Fixed { generators, k, cap } => {
            let g = load_group(&generators, cap)?;
            let fixed = fixed_subspaces(&g, k)?;
            let mut r = Report::new("group fixed");
            r.line(format!("order={} k={k} fixed={}", g.order(), fixed.len()));
            for s in &fixed {
                r.line(format!("  {s}"));
            }
            r.field("order", g.order())
                .field("k", k)
                .field("fixed", fixed.iter().map(|s| s.to_string()).collect::<Vec<_>>());
            r.table(&["subspace"], fixed.iter().map(|s| vec![s.to_string().into()]).collect());
            Ok(r)
        }
    }
}
