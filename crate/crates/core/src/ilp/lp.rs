//! LP-format export and re-import of models.
//!
//! The file is plain CPLEX LP text. Comment lines starting with `\` carry
//! what the format cannot: model metadata and what each variable stands for.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg2::Subspace;

use super::model::{Constraint, IlpModel, ModelMeta, Sense, VarKind, Variable};

const TERMS_PER_LINE: usize = 12;

fn write_terms(out: &mut String, terms: impl Iterator<Item = (i64, String)>) {
    let mut n = 0;
    for (a, name) in terms {
        if a == 0 {
            continue;
        }
        if n > 0 && n % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if a < 0 { "-" } else if n > 0 { "+" } else { "" };
        let sep = if n > 0 { " " } else { "" };
        match a.abs() {
            1 => write!(out, "{sep}{sign}{}{name}", if sign.is_empty() { "" } else { " " }),
            c => write!(out, "{sep}{sign}{}{c} {name}", if sign.is_empty() { "" } else { " " }),
        }
        .expect("string write");
        n += 1;
    }
    if n == 0 {
        out.push('0');
    }
}

fn kind_text(v: usize, kind: &VarKind) -> String {
    match kind {
        VarKind::Subspace(s) => format!("s {s}"),
        VarKind::Orbit(members) => {
            let parts: Vec<String> = members.iter().map(|s| s.to_string()).collect();
            format!("o {}", parts.join("|"))
        }
        VarKind::DimCount(k) => {
            let _ = v;
            format!("n {k}")
        }
    }
}

fn join<T: ToString>(xs: impl Iterator<Item = T>) -> String {
    let parts: Vec<String> = xs.map(|x| x.to_string()).collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(",")
    }
}

/// Renders a model as LP text; the output depends only on the model.
pub fn format_lp(m: &IlpModel) -> String {
    let meta = &m.meta;
    let mut out = String::new();
    out.push_str("\\ subspace code model\n");
    writeln!(
        out,
        "\\ meta v={} d={} dims={} group={} gl={} cuts={}",
        meta.v,
        meta.d,
        join(meta.dims.iter()),
        meta.group_order.map_or("-".into(), |g| g.to_string()),
        u8::from(meta.gl_invariant),
        join(meta.cuts.iter()),
    )
    .expect("string write");
    writeln!(out, "\\ offset {}", m.objective_offset).expect("string write");
    for var in &m.vars {
        writeln!(out, "\\ var {} {}", var.name, kind_text(meta.v, &var.kind)).expect("string write");
    }

    out.push_str("Maximize\n obj: ");
    write_terms(
        &mut out,
        m.vars.iter().map(|v| (v.objective, v.name.clone())),
    );
    if m.objective_offset != 0 {
        let c = m.objective_offset;
        write!(out, " {} {}", if c < 0 { "-" } else { "+" }, c.abs()).expect("string write");
    }
    out.push_str("\nSubject To\n");
    for c in &m.constraints {
        write!(out, " {}: ", c.name).expect("string write");
        write_terms(&mut out, c.terms.iter().map(|&(i, a)| (a, m.vars[i].name.clone())));
        writeln!(out, " {} {}", c.sense.symbol(), c.rhs).expect("string write");
    }
    out.push_str("Bounds\n");
    for var in &m.vars {
        if var.is_binary() {
            if (var.lower, var.upper) != (0, 1) {
                if var.lower == var.upper {
                    writeln!(out, " {} = {}", var.name, var.lower).expect("string write");
                } else {
                    writeln!(out, " {} <= {} <= {}", var.lower, var.name, var.upper)
                        .expect("string write");
                }
            }
        } else {
            writeln!(out, " {} <= {} <= {}", var.lower, var.name, var.upper).expect("string write");
        }
    }
    let names = |binary: bool| m.vars.iter().filter(move |v| v.is_binary() == binary).map(|v| v.name.as_str());
    for (title, binary) in [("Binary", true), ("General", false)] {
        let list: Vec<&str> = names(binary).collect();
        if list.is_empty() {
            continue;
        }
        writeln!(out, "{title}").expect("string write");
        for chunk in list.chunks(TERMS_PER_LINE) {
            writeln!(out, " {}", chunk.join(" ")).expect("string write");
        }
    }
    out.push_str("End\n");
    out
}

pub fn export_lp(m: &IlpModel, path: &Path) -> Result<()> {
    std::fs::write(path, format_lp(m)).map_err(|e| Error::io(path, e))
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseLine {
        line,
        msg: msg.into(),
    }
}

/// Linear expression parsed from tokens: terms plus a constant.
fn parse_expr(tokens: &[&str], index: &HashMap<String, usize>, line: usize) -> Result<(Vec<(usize, i64)>, i64)> {
    let mut terms: Vec<(usize, i64)> = Vec::new();
    let mut constant = 0i64;
    let mut sign = 1i64;
    let mut coef: Option<i64> = None;
    for &t in tokens {
        match t {
            "+" => sign = 1,
            "-" => sign = -1,
            _ => {
                if let Ok(x) = t.parse::<i64>() {
                    if let Some(c) = coef {
                        constant += sign * c;
                        sign = 1;
                    }
                    coef = Some(x);
                } else {
                    let i = *index
                        .get(t)
                        .ok_or_else(|| perr(line, format!("unknown variable {t}")))?;
                    terms.push((i, sign * coef.unwrap_or(1)));
                    coef = None;
                    sign = 1;
                }
            }
        }
    }
    if let Some(c) = coef {
        constant += sign * c;
    }
    let mut merged: Vec<(usize, i64)> = Vec::new();
    terms.sort_by_key(|t| t.0);
    for (i, a) in terms {
        match merged.last_mut() {
            Some(last) if last.0 == i => last.1 += a,
            _ => merged.push((i, a)),
        }
    }
    Ok((merged, constant))
}

fn parse_kind(v: usize, text: &str, line: usize) -> Result<VarKind> {
    let (tag, rest) = text.split_once(' ').ok_or_else(|| perr(line, "missing variable kind"))?;
    Ok(match tag {
        "s" => VarKind::Subspace(Subspace::parse(v, rest)?),
        "o" => VarKind::Orbit(
            rest.split('|')
                .map(|s| Subspace::parse(v, s))
                .collect::<Result<Vec<_>>>()?,
        ),
        "n" => VarKind::DimCount(rest.trim().parse().map_err(|_| perr(line, "bad dimension"))?),
        _ => return Err(perr(line, format!("unknown variable kind {tag}"))),
    })
}

fn parse_list<T: std::str::FromStr>(s: &str, line: usize) -> Result<Vec<T>> {
    if s == "-" {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.parse().map_err(|_| perr(line, format!("bad list item {x}"))))
        .collect()
}

fn parse_meta(text: &str, line: usize) -> Result<ModelMeta> {
    let mut meta = ModelMeta::default();
    for field in text.split_whitespace() {
        let (k, val) = field
            .split_once('=')
            .ok_or_else(|| perr(line, format!("bad meta field {field}")))?;
        let num = |s: &str| s.parse::<usize>().map_err(|_| perr(line, format!("bad number {s}")));
        match k {
            "v" => meta.v = num(val)?,
            "d" => meta.d = num(val)?,
            "dims" => meta.dims = parse_list::<usize>(val, line)?.into_iter().collect::<BTreeSet<_>>(),
            "group" => meta.group_order = if val == "-" { None } else { Some(num(val)?) },
            "gl" => meta.gl_invariant = val == "1",
            "cuts" => meta.cuts = parse_list::<String>(val, line)?,
            _ => return Err(perr(line, format!("unknown meta field {k}"))),
        }
    }
    Ok(meta)
}

#[derive(PartialEq)]
enum Section {
    Header,
    Objective,
    Constraints,
    Bounds,
    Binary,
    General,
    End,
}

/// Parses LP text written by [`format_lp`].
pub fn parse_lp(text: &str) -> Result<IlpModel> {
    let mut meta: Option<ModelMeta> = None;
    let mut offset = 0i64;
    let mut vars: Vec<Variable> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut section = Section::Header;
    // logical statements: (first line number, text)
    let mut statements: Vec<(usize, Section, String)> = Vec::new();

    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        if let Some(c) = raw.strip_prefix('\\') {
            let c = c.trim();
            if let Some(rest) = c.strip_prefix("meta ") {
                meta = Some(parse_meta(rest, line)?);
            } else if let Some(rest) = c.strip_prefix("offset ") {
                offset = rest.trim().parse().map_err(|_| perr(line, "bad offset"))?;
            } else if let Some(rest) = c.strip_prefix("var ") {
                let v = meta.as_ref().ok_or_else(|| perr(line, "variable before meta line"))?.v;
                let (name, kind) = rest.split_once(' ').ok_or_else(|| perr(line, "bad var line"))?;
                index.insert(name.to_string(), vars.len());
                let kind = parse_kind(v, kind, line)?;
                vars.push(Variable {
                    name: name.to_string(),
                    lower: 0,
                    upper: if matches!(kind, VarKind::DimCount(_)) { 0 } else { 1 },
                    kind,
                    objective: 0,
                });
            }
            continue;
        }
        let t = raw.trim();
        if t.is_empty() {
            continue;
        }
        let next = match t.to_ascii_lowercase().as_str() {
            "maximize" | "maximum" | "max" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binary" | "binaries" => Some(Section::Binary),
            "general" | "generals" => Some(Section::General),
            "end" => Some(Section::End),
            "minimize" | "minimum" | "min" => {
                return Err(perr(line, "only maximization models are supported"))
            }
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let continuation = raw.starts_with("   ") && !statements.is_empty();
        match section {
            Section::Header | Section::End => return Err(perr(line, format!("unexpected text {t}"))),
            Section::Objective | Section::Constraints if continuation => {
                let last = statements.last_mut().expect("checked");
                last.2.push(' ');
                last.2.push_str(t);
            }
            _ => {
                let s = match section {
                    Section::Objective => Section::Objective,
                    Section::Constraints => Section::Constraints,
                    Section::Bounds => Section::Bounds,
                    Section::Binary => Section::Binary,
                    Section::General => Section::General,
                    _ => unreachable!(),
                };
                statements.push((line, s, t.to_string()));
            }
        }
    }
    let meta = meta.ok_or_else(|| Error::Parse("missing meta comment line".into()))?;
    if section != Section::End {
        return Err(Error::Parse("missing End".into()));
    }

    let mut constraints = Vec::new();
    for (line, s, t) in statements {
        match s {
            Section::Objective => {
                let body = t.split_once(':').map_or(t.as_str(), |x| x.1);
                let tokens: Vec<&str> = body.split_whitespace().collect();
                let (terms, constant) = parse_expr(&tokens, &index, line)?;
                for (i, a) in terms {
                    vars[i].objective = a;
                }
                if constant != offset {
                    return Err(perr(line, "objective constant disagrees with offset comment"));
                }
            }
            Section::Constraints => {
                let (name, body) = t.split_once(':').ok_or_else(|| perr(line, "unnamed constraint"))?;
                let tokens: Vec<&str> = body.split_whitespace().collect();
                let pos = tokens
                    .iter()
                    .position(|x| matches!(*x, "<=" | ">=" | "=" | "=<" | "=>"))
                    .ok_or_else(|| perr(line, "constraint without sense"))?;
                let sense = match tokens[pos] {
                    "<=" | "=<" => Sense::Le,
                    ">=" | "=>" => Sense::Ge,
                    _ => Sense::Eq,
                };
                let (terms, constant) = parse_expr(&tokens[..pos], &index, line)?;
                let (_, rhs) = parse_expr(&tokens[pos + 1..], &index, line)?;
                constraints.push(Constraint {
                    name: name.trim().to_string(),
                    terms,
                    sense,
                    rhs: rhs - constant,
                });
            }
            Section::Bounds => {
                let tokens: Vec<&str> = t.split_whitespace().collect();
                let num = |s: &str| s.parse::<i64>().map_err(|_| perr(line, format!("bad bound {s}")));
                let var = |s: &str| index.get(s).copied().ok_or_else(|| perr(line, format!("unknown variable {s}")));
                match tokens.as_slice() {
                    [lo, "<=", name, "<=", hi] => {
                        let i = var(name)?;
                        vars[i].lower = num(lo)?;
                        vars[i].upper = num(hi)?;
                    }
                    [name, "=", val] => {
                        let i = var(name)?;
                        let x = num(val)?;
                        vars[i].lower = x;
                        vars[i].upper = x;
                    }
                    _ => return Err(perr(line, format!("unsupported bound {t}"))),
                }
            }
            Section::Binary | Section::General => {
                for name in t.split_whitespace() {
                    let i = *index
                        .get(name)
                        .ok_or_else(|| perr(line, format!("unknown variable {name}")))?;
                    if vars[i].is_binary() != (s == Section::Binary) {
                        return Err(perr(line, format!("variable {name} declared with the wrong type")));
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(IlpModel {
        vars,
        constraints,
        objective_offset: offset,
        meta,
    })
}

pub fn read_lp(path: &Path) -> Result<IlpModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_lp(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::MatrixGroup;
    use crate::ilp::build::build_base_model;
    use crate::ilp::km::reduce_kramer_mesner;
    use crate::linalg2::BitMatrix;

    fn all(v: usize) -> BTreeSet<usize> {
        (0..=v).collect()
    }

    #[test]
    fn base_model_round_trip() {
        let m = build_base_model(4, 3, &all(4)).unwrap();
        let text = format_lp(&m);
        assert_eq!(text.lines().filter(|l| l.starts_with("\\ var x_")).count(), 67);
        assert_eq!(parse_lp(&text).unwrap(), m);
        assert_eq!(format_lp(&m), text);
    }

    #[test]
    fn orbit_model_round_trip() {
        let c = BitMatrix::from_strings(&["0100", "0010", "0001", "1100"]).unwrap();
        let g = MatrixGroup::closure(4, &[c], 100).unwrap();
        let mut m = reduce_kramer_mesner(&build_base_model(4, 3, &all(4)).unwrap(), &g).unwrap();
        m.objective_offset = 3;
        m.vars[0].lower = 1;
        let back = parse_lp(&format_lp(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn empty_model() {
        let m = IlpModel {
            meta: ModelMeta {
                v: 3,
                ..ModelMeta::default()
            },
            ..IlpModel::default()
        };
        let text = format_lp(&m);
        assert!(text.contains("Subject To\nBounds\nEnd\n"));
        assert_eq!(parse_lp(&text).unwrap(), m);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_lp("Maximize\n obj: x\nEnd\n").is_err());
        let m = build_base_model(3, 3, &all(3)).unwrap();
        let text = format_lp(&m).replace("ball_0: ", "ball_0: nosuchvar + ");
        assert!(matches!(parse_lp(&text), Err(Error::ParseLine { .. })));
    }
}
