use std::path::PathBuf;

use clap::{ArgGroup, Subcommand};
use subspace_core::code::SubspaceCode;
use subspace_core::construct::special_subspace;
use subspace_core::divis::{
    complement, is_divisible, lmrd_extend, points_of_code, read_multiset, recognize_subspace,
    verify_theorem_extensions, write_multiset, PointMultiset,
};
use subspace_core::{Result, Subspace};

use super::{load_code, save_code};
use crate::report::Report;
use crate::OutArg;

#[derive(Subcommand, Debug)]
pub enum DivisCmd {
    /// Divisibility of a multiset file or of the point multiset of a code.
    #[command(group(ArgGroup::new("input").required(true).args(["multiset", "code"])))]
    Check {
        multiset: Option<PathBuf>,
        #[arg(long)]
        code: Option<PathBuf>,
        /// Required exponent: check 2^r-divisibility and fail otherwise.
        #[arg(long)]
        r: Option<u32>,
    },
    /// The lambda-complement of a multiset.
    Complement {
        multiset: PathBuf,
        #[arg(long)]
        lambda: u64,
        /// Write the complement to this multiset file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The (r+1)-subspace formed by a 2^r-divisible multiset of 2^{r+1}-1 points.
    Recognize {
        multiset: PathBuf,
        #[arg(long)]
        r: u32,
    },
    /// Complete 254 or 255 solids of F_2^8 disjoint from a special solid.
    LmrdExtend {
        code: PathBuf,
        /// Special solid (default: the last four coordinates).
        #[arg(long)]
        special: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check the listed extensions of G_{8,4,3}.
    TheoremCheck,
}

/// Largest r <= 16 with the multiset 2^r-divisible.
fn divisibility_exponent(p: &PointMultiset) -> u32 {
    (0..=16).rev().find(|&r| is_divisible(p, r)).unwrap_or(0)
}

pub fn run(c: DivisCmd) -> Result<Report> {
    match c {
        DivisCmd::Check { multiset, code, r } => {
            let mut rep = Report::new("divis check");
            let p = match (multiset, code) {
                (Some(path), _) => read_multiset(&path)?,
                (None, Some(path)) => points_of_code(&load_code(&path, &mut rep)?),
                (None, None) => unreachable!("clap enforces an input"),
            };
            let e = divisibility_exponent(&p);
            rep.line(format!(
                "v={} cardinality={} max_multiplicity={} divisible_by=2^{e}",
                p.ambient(),
                p.cardinality(),
                p.max_multiplicity()
            ));
            rep.field("v", p.ambient())
                .field("cardinality", p.cardinality())
                .field("max_multiplicity", p.max_multiplicity())
                .field("exponent", e);
            if let Some(r) = r {
                let ok = is_divisible(&p, r);
                rep.line(format!("2^{r}-divisible: {ok}"));
                rep.field("divisible", ok);
                if !ok {
                    rep.fail();
                }
            }
            Ok(rep)
        }
        DivisCmd::Complement { multiset, lambda, out } => {
            let p = read_multiset(&multiset)?;
            let q = complement(&p, lambda)?;
            let mut rep = Report::new("divis complement");
            rep.line(format!(
                "cardinality {} -> {}; divisible_by=2^{}",
                p.cardinality(),
                q.cardinality(),
                divisibility_exponent(&q)
            ));
            rep.field("cardinality", q.cardinality())
                .field("exponent", divisibility_exponent(&q));
            if let Some(path) = out {
                write_multiset(&q, &path)?;
                rep.line(format!("wrote {}", path.display()));
            }
            Ok(rep)
        }
        DivisCmd::Recognize { multiset, r } => {
            let p = read_multiset(&multiset)?;
            let mut rep = Report::new("divis recognize");
            match recognize_subspace(&p, r)? {
                Some(s) => {
                    rep.line(format!("subspace of dimension {}: {s}", s.dim()));
                    rep.field("subspace", s.to_string());
                }
                None => {
                    rep.line("support is not a subspace").fail();
                }
            }
            Ok(rep)
        }
        DivisCmd::LmrdExtend { code, special, out } => {
            let mut rep = Report::new("divis lmrd-extend");
            let c = load_code(&code, &mut rep)?;
            let s = match special {
                Some(text) => Subspace::parse(8, &text)?,
                None => special_subspace(8, 4)?,
            };
            let found = lmrd_extend(&c, &s)?;
            for u in &found {
                rep.line(format!("completing solid: {u}"));
            }
            let mut full: Vec<Subspace> = c.words().to_vec();
            full.extend(found.iter().cloned());
            let completed = SubspaceCode::from_subspaces(8, full)?;
            rep.line(format!("M={} d={}", completed.len(), completed.min_distance()));
            rep.field("found", found.iter().map(|u| u.to_string()).collect::<Vec<_>>())
                .field("size", completed.len());
            save_code(&completed, &out.out, &mut rep)?;
            Ok(rep)
        }
        DivisCmd::TheoremCheck => {
            let report = verify_theorem_extensions()?;
            let mut rep = Report::new("divis theorem-check");
            let mut rows = Vec::new();
            for c in &report.checks {
                rep.line(format!(
                    "dim={} min_distance={} meet_special={} {} {}",
                    c.subspace.dim(),
                    c.min_distance,
                    c.meet_special,
                    if c.ok { "ok" } else { "FAILED" },
                    c.subspace
                ));
                rows.push(vec![
                    c.subspace.to_string().into(),
                    c.subspace.dim().into(),
                    c.min_distance.into(),
                    c.meet_special.into(),
                    c.ok.into(),
                ]);
            }
            rep.table(&["subspace", "dim", "min_distance", "meet_special", "ok"], rows);
            if !report.all_ok() {
                rep.fail();
            }
            Ok(rep)
        }
    }
}
