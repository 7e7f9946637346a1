use std::collections::BTreeSet;

use subspace_core::bounds::a_closed_form;
use subspace_core::code::SubspaceCode;
use subspace_core::construct::{gabidulin, spread, GabidulinSpec};
use subspace_core::grassmann::enumerate;
use subspace_core::group::MatrixGroup;
use subspace_core::ilp::hyperplane::hyperplane_section;
use subspace_core::ilp::{
    add_even_d_cuts, add_incidence_cuts, auto_incidence_set, build_base_model, build_hyperplane_model,
    export_lp, max_clique, read_lp, reduce_kramer_mesner, relax, solve_exact, HyperplaneMode, IlpModel,
    SolveStatus, VarKind,
};
use subspace_core::{BitMatrix, Subspace};

fn all(v: usize) -> BTreeSet<usize> {
    (0..=v).collect()
}

/// The model for (v, d): odd d directly, even d as the d-1 model plus the
/// even-distance rows. Incidence cuts are added before the even rows.
fn model(v: usize, d: usize, dims: &BTreeSet<usize>, incidence: bool) -> IlpModel {
    let odd = if d % 2 == 1 { d } else { d - 1 };
    let mut m = build_base_model(v, odd, dims).unwrap();
    if incidence {
        m = add_incidence_cuts(m, &auto_incidence_set(v, d)).unwrap();
    }
    if d % 2 == 0 {
        m = add_even_d_cuts(m, d).unwrap();
    }
    m
}

/// Assignment selecting exactly the codewords of `c`.
fn indicator(m: &IlpModel, c: &SubspaceCode) -> Vec<i64> {
    m.vars
        .iter()
        .map(|var| match &var.kind {
            VarKind::Subspace(s) => i64::from(c.contains(s)),
            VarKind::Orbit(o) => i64::from(o.iter().all(|s| c.contains(s))),
            VarKind::DimCount(k) => c.words().iter().filter(|w| w.dim() == *k).count() as i64,
        })
        .collect()
}

fn exact(v: usize, d: usize) -> i64 {
    let e = a_closed_form(2, v, d).unwrap();
    assert!(e.exact, "A(v={v},d={d}) has a closed form");
    e.upper_u64().unwrap() as i64
}

#[test]
fn solver_matches_closed_forms() {
    for v in 1..=4 {
        for d in 1..=v {
            let r = solve_exact(&model(v, d, &all(v), false), None).unwrap();
            assert_eq!(r.status, SolveStatus::Optimal, "v={v} d={d}");
            assert_eq!(r.value, Some(exact(v, d)), "v={v} d={d}");
            let code = r.code.unwrap();
            assert_eq!(code.len() as i64, exact(v, d));
            assert!(code.verify(d, &all(v)).is_ok());
        }
    }
}

#[test]
fn relaxation_dominates_integer_optimum() {
    for (v, d) in [(3, 1), (3, 2), (4, 2), (4, 3), (4, 4)] {
        for incidence in [false, true] {
            let m = model(v, d, &all(v), incidence);
            let lp = relax(&m).unwrap().expect("feasible relaxation");
            assert!(lp + 1e-6 >= exact(v, d) as f64, "v={v} d={d}: {lp}");
        }
    }
}

#[test]
fn cuts_keep_known_codes_feasible() {
    let c = max_clique(4, 2, &all(4), None).unwrap();
    assert_eq!(c.value, Some(37));
    let code = c.code.unwrap();
    for incidence in [false, true] {
        let m = model(4, 2, &all(4), incidence);
        let x = indicator(&m, &code);
        assert!(m.is_feasible(&x));
        assert_eq!(m.objective_value(&x), 37);
    }

    let s = spread(4).unwrap();
    let m = model(4, 4, &all(4), true);
    let x = indicator(&m, &s);
    assert!(m.is_feasible(&x));
    assert_eq!(m.objective_value(&x), 5);

    let g = gabidulin(&GabidulinSpec::new(6, 3, 2).unwrap()).unwrap();
    let m = model(6, 4, &BTreeSet::from([3]), true);
    let x = indicator(&m, &g);
    assert!(m.is_feasible(&x));
    assert_eq!(m.objective_value(&x), 64);
}

#[test]
fn infeasible_assignments_are_rejected() {
    let m = model(4, 3, &all(4), false);
    let lines: Vec<Subspace> = enumerate(4, 2).unwrap().take(2).collect();
    let two = SubspaceCode::from_subspaces(4, lines).unwrap();
    assert!(!m.is_feasible(&indicator(&m, &two)));
}

#[test]
fn orbit_model_counts() {
    let parse = |rows: &[&str]| BitMatrix::from_strings(rows).unwrap();
    let a = parse(&["100000", "010000", "000100", "001100", "000001", "000011"]);
    let b = parse(&["010000", "110000", "001010", "000101", "001000", "000100"]);
    let g = MatrixGroup::closure(6, &[a, b], 1 << 10).unwrap();
    assert_eq!(g.order(), 9);

    let m = model(6, 3, &all(6), false);
    let km = reduce_kramer_mesner(&m, &g).unwrap();
    // Burnside: the number of line orbits is the mean number of fixed lines
    let lines: Vec<Subspace> = enumerate(6, 2).unwrap().collect();
    let fixed: usize = g
        .elements()
        .iter()
        .map(|h| lines.iter().filter(|l| l.transform(h).unwrap() == **l).count())
        .sum();
    let line_orbits = km
        .vars
        .iter()
        .filter(|v| matches!(&v.kind, VarKind::Orbit(o) if o[0].dim() == 2))
        .count();
    assert_eq!(line_orbits * 9, fixed);
    assert_eq!(km.meta.group_order, Some(9));
}

#[test]
fn lp_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.lp");
    let m = model(4, 4, &all(4), true);
    export_lp(&m, &p).unwrap();
    let back = read_lp(&p).unwrap();
    assert_eq!(back, m);
}

#[test]
fn lifted_mrd_hyperplane_sections_are_feasible() {
    let g = gabidulin(&GabidulinSpec::new(8, 4, 3).unwrap()).unwrap();
    let hyperplanes: Vec<Subspace> = enumerate(8, 7).unwrap().collect();
    let mut checked = 0;
    for h in &hyperplanes {
        let (inside, traces) = hyperplane_section(&g, h).unwrap();
        if !(16..=17).contains(&inside.len()) {
            continue;
        }
        assert!(traces.words().iter().all(|t| t.dim() == 3));
        let m = build_hyperplane_model(&inside, HyperplaneMode::Hyperplane7).unwrap();
        let x = indicator(&m, &traces);
        assert_eq!(x.iter().sum::<i64>() as usize, traces.len(), "every trace is a variable");
        assert!(m.is_feasible(&x));
        assert_eq!(m.objective_value(&x), 256);
        checked += 1;
        if checked == 2 {
            break;
        }
    }
    assert!(checked > 0, "no hyperplane holds 16 or 17 codewords");
}
