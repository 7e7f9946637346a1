use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Subcommand};
use subspace_core::ilp::{
    add_even_d_cuts, add_incidence_cuts, auto_incidence_set, build_base_model, build_hyperplane_model,
    export_lp, max_clique, reduce_kramer_mesner, relax, solve_exact, HyperplaneMode, IlpModel,
    SolveResult, SolveStatus,
};
use subspace_core::{Error, Result};

use super::group::load_group;
use super::{dims_json, dims_or_all, load_code, save_code, set_text};
use crate::report::Report;
use crate::OutArg;

#[derive(Subcommand, Debug)]
pub enum IlpCmd {
    /// Build a model and report its size.
    Build(ModelArgs),
    /// Build a model and write it in LP format (requires --export).
    Export(ModelArgs),
    /// Build a model and solve it with the exact packing solver.
    Solve(ModelArgs),
    /// Maximum clique in the distance graph of the subspaces.
    Clique(CliqueArgs),
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    #[arg(long)]
    v: Option<usize>,
    /// Minimum distance; even values add the even-distance inequalities.
    #[arg(long)]
    d: Option<usize>,
    /// Allowed codeword dimensions (default: all).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Cut families to add: `ie_add`, `even`.
    #[arg(long, value_delimiter = ',')]
    cuts: Vec<String>,
    /// Generator file of a prescribed automorphism group.
    #[arg(long)]
    group: Option<PathBuf>,
    /// Code file of prescribed solids (F_2^8: ambient model, F_2^7: hyperplane model).
    #[arg(long)]
    prescribe: Option<PathBuf>,
    /// Codewords allowed through a point (ambient model).
    #[arg(long)]
    cap_point: Option<u64>,
    /// Codewords allowed inside a hyperplane (ambient model).
    #[arg(long)]
    cap_hyperplane: Option<u64>,
    /// Solver time limit in seconds.
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    /// Write the model in LP format.
    #[arg(long)]
    export: Option<PathBuf>,
    /// Also run the exact solver.
    #[arg(long)]
    solve: bool,
    /// Also solve the LP relaxation.
    #[arg(long)]
    relax: bool,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args, Debug)]
pub struct CliqueArgs {
    #[arg(long)]
    v: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, default_value_t = 600.0)]
    time_limit: f64,
    #[command(flatten)]
    out: OutArg,
}

fn need(x: Option<usize>, flag: &str) -> Result<usize> {
    x.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")))
}

fn build(a: &ModelArgs, r: &mut Report) -> Result<IlpModel> {
    for c in &a.cuts {
        if c != "ie_add" && c != "even" {
            return Err(Error::InvalidParameter(format!("unknown cut family {c:?}")));
        }
    }
    let mut m = if let Some(path) = &a.prescribe {
        let f = load_code(path, r)?;
        let mode = match f.ambient() {
            8 => HyperplaneMode::Ambient8 {
                point_cap: a.cap_point.unwrap_or(17),
                hyperplane_cap: a.cap_hyperplane.unwrap_or(17),
            },
            7 if a.cap_point.is_none() && a.cap_hyperplane.is_none() => HyperplaneMode::Hyperplane7,
            7 => {
                return Err(Error::InvalidParameter(
                    "caps only apply to prescriptions in F_2^8".into(),
                ))
            }
            v => {
                return Err(Error::InvalidParameter(format!(
                    "prescribed solids must live in F_2^7 or F_2^8, not F_2^{v}"
                )))
            }
        };
        if !a.cuts.is_empty() {
            return Err(Error::Unsupported("cuts are not combined with prescriptions".into()));
        }
        build_hyperplane_model(&f, mode)?
    } else {
        let v = need(a.v, "v")?;
        let d = need(a.d, "d")?;
        let dims = dims_or_all(&a.dims, v)?;
        let mut m = if d % 2 == 1 {
            if a.cuts.iter().any(|c| c == "even") {
                return Err(Error::InvalidParameter("even cuts need an even --d".into()));
            }
            build_base_model(v, d, &dims)?
        } else {
            add_even_d_cuts(build_base_model(v, d - 1, &dims)?, d)?
        };
        if a.cuts.iter().any(|c| c == "ie_add") {
            let set = auto_incidence_set(v, d);
            let text: Vec<String> = set.iter().map(|(k, l, x)| format!("({k},{l},{x})")).collect();
            r.line(format!("incidence triples: {}", text.join(" ")));
            m = add_incidence_cuts(m, &set)?;
        }
        m
    };
    if let Some(path) = &a.group {
        let g = load_group(path, 1 << 20)?;
        m = reduce_kramer_mesner(&m, &g)?;
    }
    Ok(m)
}

/// Row family of a constraint name: the name without a trailing `_<index>`.
fn family(name: &str) -> &str {
    match name.rsplit_once('_') {
        Some((head, tail)) if tail.chars().all(|c| c.is_ascii_digit()) => head,
        _ => name,
    }
}

fn describe(m: &IlpModel, r: &mut Report) {
    let fixed = m.vars.iter().filter(|v| v.is_binary() && v.upper == 0).count();
    let mut families: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &m.constraints {
        *families.entry(family(&c.name)).or_default() += 1;
    }
    let meta = &m.meta;
    r.line(format!(
        "model v={} d={} dims={} group={}",
        meta.v,
        meta.d,
        set_text(&meta.dims),
        meta.group_order.map_or("-".into(), |g| g.to_string())
    ));
    r.line(format!(
        "variables={} binaries={} fixed_zero={} constraints={}",
        m.vars.len(),
        m.binary_count(),
        fixed,
        m.constraints.len()
    ));
    let text: Vec<String> = families.iter().map(|(f, n)| format!("{f}={n}")).collect();
    r.line(format!("families {}", text.join(" ")));
    r.field("variables", m.vars.len())
        .field("binaries", m.binary_count())
        .field("fixed_zero", fixed)
        .field("constraints", m.constraints.len())
        .field("families", serde_json::to_value(&families).expect("plain map"));
}

fn limit(secs: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(secs)
        .map_err(|_| Error::InvalidParameter(format!("bad time limit {secs}")))
}

fn report_solution(res: &SolveResult, d: usize, r: &mut Report, out: &OutArg) -> Result<()> {
    let value = res.value.map_or("-".into(), |v| v.to_string());
    r.line(format!("optimum={value} status={} nodes={}", res.status, res.nodes));
    eprintln!("solver time {:.2}s", res.elapsed.as_secs_f64());
    r.field("status", res.status.to_string())
        .field("value", res.value)
        .field("nodes", res.nodes);
    if let Some(code) = &res.code {
        r.line(format!(
            "code M={} d={} dims={:?}",
            code.len(),
            code.min_distance(),
            code.dim_distribution()
        ));
        r.field("code_dims", dims_json(&code.dim_distribution()));
        if d > 0 && !code.min_distance().at_least(d) {
            r.line("incumbent fails the distance check").fail();
        }
        save_code(code, &out.out, r)?;
    }
    if res.status == SolveStatus::Unknown {
        r.line("no feasible point found within the time limit");
    }
    Ok(())
}

fn model_cmd(a: ModelArgs, name: &str, solve: bool) -> Result<Report> {
    if name == "ilp export" && a.export.is_none() {
        return Err(Error::InvalidParameter("ilp export needs --export <path>".into()));
    }
    let mut r = Report::new(name);
    let m = build(&a, &mut r)?;
    describe(&m, &mut r);
    if let Some(path) = &a.export {
        export_lp(&m, path)?;
        r.line(format!("wrote {}", path.display()));
        r.field("export", path.display().to_string());
    }
    if a.relax {
        match relax(&m)? {
            Some(x) => {
                r.line(format!("lp_relaxation={x:.6}"));
                r.field("lp_relaxation", x);
            }
            None => {
                r.line("lp_relaxation=infeasible");
                r.field("lp_relaxation", "infeasible");
            }
        }
    }
    if solve || a.solve {
        let res = solve_exact(&m, Some(limit(a.time_limit)?))?;
        report_solution(&res, m.meta.d, &mut r, &a.out)?;
    }
    Ok(r)
}

pub fn run(c: IlpCmd) -> Result<Report> {
    match c {
        IlpCmd::Build(a) => model_cmd(a, "ilp build", false),
        IlpCmd::Export(a) => model_cmd(a, "ilp export", false),
        IlpCmd::Solve(a) => model_cmd(a, "ilp solve", true),
        IlpCmd::Clique(a) => {
            let dims = dims_or_all(&a.dims, a.v)?;
            let res = max_clique(a.v, a.d, &dims, Some(limit(a.time_limit)?))?;
            let mut r = Report::new("ilp clique");
            report_solution(&res, a.d, &mut r, &a.out)?;
            Ok(r)
        }
    }
}
