use std::path::PathBuf;

use clap::Args;
use serde_json::json;
use subspace_core::linalg2::{join_dim, meet_dim, subspace_distance};
use subspace_core::{Error, Result, Subspace};

use super::{dims_json, dims_or_all, load_code, set_text};
use crate::report::Report;

#[derive(Args, Debug)]
pub struct DistanceArgs {
    /// Ambient dimension; inferred from the row length when omitted.
    #[arg(long)]
    v: Option<usize>,
    /// First subspace as rows joined by `;`, or `-` for the zero space.
    a: String,
    b: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    code: PathBuf,
    /// Required minimum distance.
    #[arg(long)]
    d: usize,
    /// Allowed codeword dimensions (default: all).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct FingerprintArgs {
    code: PathBuf,
}

fn infer_v(v: Option<usize>, a: &str, b: &str) -> Result<usize> {
    if let Some(v) = v {
        return Ok(v);
    }
    [a, b]
        .iter()
        .find(|s| **s != "-")
        .and_then(|s| s.split(';').next())
        .map(|r| r.trim().len())
        .ok_or_else(|| Error::InvalidParameter("pass --v when both subspaces are zero".into()))
}

pub fn distance(a: DistanceArgs) -> Result<Report> {
    let v = infer_v(a.v, &a.a, &a.b)?;
    let x = Subspace::parse(v, &a.a)?;
    let y = Subspace::parse(v, &a.b)?;
    let d = subspace_distance(&x, &y)?;
    let mut r = Report::new("distance");
    r.line(format!(
        "d={d} dim={},{} meet={} join={}",
        x.dim(),
        y.dim(),
        meet_dim(&x, &y),
        join_dim(&x, &y)
    ));
    r.field("distance", d)
        .field("dims", json!([x.dim(), y.dim()]))
        .field("meet", meet_dim(&x, &y))
        .field("join", join_dim(&x, &y));
    Ok(r)
}

pub fn verify(a: VerifyArgs) -> Result<Report> {
    let mut r = Report::new("verify");
    let code = load_code(&a.code, &mut r)?;
    let dims = dims_or_all(&a.dims, code.ambient())?;
    let rep = code.verify(a.d, &dims);
    r.line(format!(
        "M={} min_distance={} required={} dims={}",
        rep.size,
        rep.min_distance,
        a.d,
        set_text(&dims)
    ));
    for (x, y, d) in &rep.distance_violations {
        r.line(format!("  distance {d}: {x} | {y}"));
    }
    for w in &rep.dimension_violations {
        r.line(format!("  dimension {}: {w}", w.dim()));
    }
    if rep.is_ok() {
        r.line("ok");
    } else {
        r.line(format!(
            "FAILED: {} distance and {} dimension violations",
            rep.distance_violation_count,
            rep.dimension_violations.len()
        ));
    }
    r.field("size", rep.size)
        .field("min_distance", rep.min_distance.to_string())
        .field("required", a.d)
        .field("distance_violations", rep.distance_violation_count)
        .field("dimension_violations", rep.dimension_violations.len());
    if !rep.is_ok() {
        r.fail();
    }
    Ok(r)
}

fn histogram(xs: &[u32]) -> Vec<(u32, usize)> {
    let mut out: Vec<(u32, usize)> = Vec::new();
    for &x in xs {
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn hist_text(h: &[(u32, usize)]) -> String {
    h.iter().map(|(x, n)| format!("{x}^{n}")).collect::<Vec<_>>().join(" ")
}

pub fn fingerprint(a: FingerprintArgs) -> Result<Report> {
    let mut r = Report::new("fingerprint");
    let code = load_code(&a.code, &mut r)?;
    let f = code.fingerprint();
    let points = histogram(&f.point_degrees);
    let hyperplanes = histogram(&f.hyperplane_degrees);
    let dist: Vec<String> = f.distances.iter().map(|(d, n)| format!("{d}:{n}")).collect();
    r.line(format!("v={} M={}", f.v, f.size));
    r.line(format!("dimensions {:?}", f.dims));
    r.line(format!("distances {}", dist.join(" ")));
    r.line(format!("point degrees {}", hist_text(&points)));
    r.line(format!("hyperplane degrees {}", hist_text(&hyperplanes)));
    r.field("v", f.v)
        .field("size", f.size)
        .field("dims", dims_json(&f.dims))
        .field(
            "distances",
            f.distances.iter().map(|(d, n)| json!([d, n])).collect::<Vec<_>>(),
        )
        .field("point_degrees", points.iter().map(|(x, n)| json!([x, n])).collect::<Vec<_>>())
        .field(
            "hyperplane_degrees",
            hyperplanes.iter().map(|(x, n)| json!([x, n])).collect::<Vec<_>>(),
        );
    Ok(r)
}
