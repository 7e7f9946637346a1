use std::path::PathBuf;

use clap::{Args, Subcommand};
use subspace_core::code::SubspaceCode;
use subspace_core::construct::{
    cover_count, echelon_ferrers, extend_greedy, extension_candidates, gabidulin, special_subspace,
    spread, GabidulinSpec, PivotProfile,
};
use subspace_core::linalg2::meet_dim;
use subspace_core::{Error, Result};

use super::{dims_json, dims_or_all, load_code, save_code, set_text};
use crate::report::Report;
use crate::OutArg;

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    /// Lifted Gabidulin code G_{v,k,delta}; parameters as flags or `V K DELTA`.
    Gabidulin(GabidulinArgs),
    /// Desarguesian spread of F_2^v (v even).
    Spread {
        #[arg(long)]
        v: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Union of lifted Ferrers-diagram codes over pivot vectors.
    EchelonFerrers {
        /// Minimum subspace distance.
        #[arg(long)]
        d: usize,
        /// Pivot vector and wanted size, e.g. `11110000:256`; repeatable.
        #[arg(long = "profile", required = true)]
        profiles: Vec<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Subspaces compatible with a code, and its greedy extension.
    Extend {
        code: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
pub struct GabidulinArgs {
    #[arg(long, conflicts_with = "params")]
    v: Option<usize>,
    #[arg(long, conflicts_with = "params")]
    k: Option<usize>,
    #[arg(long, conflicts_with = "params")]
    delta: Option<usize>,
    #[arg(value_name = "V K DELTA", num_args = 3)]
    params: Option<Vec<usize>>,
    #[command(flatten)]
    out: OutArg,
}

pub fn run(c: ConstructCmd) -> Result<Report> {
    match c {
        ConstructCmd::Gabidulin(a) => gabidulin_cmd(a),
        ConstructCmd::Spread { v, out } => {
            let code = spread(v)?;
            let mut r = Report::new("construct spread");
            summary(&mut r, &code);
            save_code(&code, &out.out, &mut r)?;
            Ok(r)
        }
        ConstructCmd::EchelonFerrers { d, profiles, out } => echelon_cmd(d, &profiles, out),
        ConstructCmd::Extend { code, d, dims, out } => extend_cmd(code, d, dims, out),
    }
}

fn summary(r: &mut Report, code: &SubspaceCode) {
    let md = code.min_distance();
    r.line(format!("M={} d={md}", code.len()));
    r.field("size", code.len())
        .field("min_distance", md.to_string())
        .field("dims", dims_json(&code.dim_distribution()));
}

fn gabidulin_cmd(a: GabidulinArgs) -> Result<Report> {
    let (v, k, delta) = match (&a.params, a.v, a.k, a.delta) {
        (Some(p), ..) => (p[0], p[1], p[2]),
        (None, Some(v), Some(k), Some(delta)) => (v, k, delta),
        _ => {
            return Err(Error::InvalidParameter(
                "give --v, --k and --delta or the three positional values".into(),
            ))
        }
    };
    let spec = GabidulinSpec::new(v, k, delta)?;
    let code = gabidulin(&spec)?;
    let s = special_subspace(v, k)?;
    let disjoint = code.words().iter().all(|w| meet_dim(w, &s) == 0);
    let mut r = Report::new("construct gabidulin");
    summary(&mut r, &code);
    r.line(format!("special subspace {s}; all codewords disjoint: {disjoint}"));
    r.field("special", s.to_string()).field("disjoint_from_special", disjoint);
    if k >= 2 {
        for t in [1, 2] {
            let counts = cover_count(&code, &s, t)?;
            let text: Vec<String> = counts.iter().map(|(m, n)| format!("{m}x{n}")).collect();
            r.line(format!("{t}-subspaces outside the special subspace covered: {}", text.join(" ")));
            r.field(
                &format!("cover_{t}"),
                counts.iter().map(|(m, n)| serde_json::json!([m, n])).collect::<Vec<_>>(),
            );
        }
    }
    save_code(&code, &a.out.out, &mut r)?;
    Ok(r)
}

fn echelon_cmd(d: usize, profiles: &[String], out: OutArg) -> Result<Report> {
    let parsed = profiles
        .iter()
        .map(|p| {
            let (pivots, size) = p.split_once(':').ok_or_else(|| {
                Error::InvalidParameter(format!("profile {p:?} should look like 11110000:256"))
            })?;
            let size = size
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad profile size in {p:?}")))?;
            PivotProfile::parse(pivots, size)
        })
        .collect::<Result<Vec<_>>>()?;
    let ef = echelon_ferrers(&parsed, d)?;
    let mut r = Report::new("construct echelon-ferrers");
    for (p, got) in profiles.iter().zip(&ef.sizes) {
        r.line(format!("{p} -> {got}"));
    }
    summary(&mut r, &ef.code);
    r.field("sizes", ef.sizes.clone());
    let short = parsed.iter().zip(&ef.sizes).any(|(p, &got)| got < p.target);
    if short {
        r.line("some profile fell short of its target");
        r.fail();
    }
    save_code(&ef.code, &out.out, &mut r)?;
    Ok(r)
}

fn extend_cmd(path: PathBuf, d: usize, dims: Option<Vec<usize>>, out: OutArg) -> Result<Report> {
    let mut r = Report::new("construct extend");
    let code = load_code(&path, &mut r)?;
    let dims = dims_or_all(&dims, code.ambient())?;
    let candidates = extension_candidates(&code, d, &dims)?;
    let extended = extend_greedy(&code, d, &dims)?;
    r.line(format!(
        "compatible subspaces (dims {}, d>={d}): {}",
        set_text(&dims),
        candidates.len()
    ));
    r.line(format!("greedy extension: M={} (+{})", extended.len(), extended.len() - code.len()));
    r.field("candidates", candidates.len())
        .field("size", extended.len())
        .field("added", extended.len() - code.len());
    save_code(&extended, &out.out, &mut r)?;
    Ok(r)
}
