use subspace_core::code::SubspaceCode;
use subspace_core::construct::{gabidulin, special_subspace, GabidulinSpec};
use subspace_core::divis::{
    is_divisible, lmrd_extend, parse_multiset, points_of_code, recognize_subspace, PointMultiset,
};
use subspace_core::grassmann::enumerate;
use subspace_core::linalg2::Row;
use subspace_core::{Error, Subspace};

fn g843() -> SubspaceCode {
    gabidulin(&GabidulinSpec::new(8, 4, 3).unwrap()).unwrap()
}

fn rank_distance_oracle(x: &Subspace, y: &Subspace) -> usize {
    let mut rows: Vec<Row> = x.rows().to_vec();
    rows.extend_from_slice(y.rows());
    let join = Subspace::span(x.ambient(), &rows).unwrap().dim();
    2 * join - x.dim() - y.dim()
}

#[test]
fn only_lines_of_the_special_solid_extend() {
    let g = g843();
    let s = special_subspace(8, 4).unwrap();
    let mut inside = 0;
    for line in enumerate(8, 2).unwrap() {
        let far = g.words().iter().all(|w| rank_distance_oracle(w, &line) >= 6);
        assert_eq!(far, line.is_subspace_of(&s), "line {line}");
        inside += usize::from(far);
    }
    assert_eq!(inside, 35);
}

#[test]
fn planes_and_solids_are_recognized() {
    for k in [3, 4] {
        for u in enumerate(8, k).unwrap().step_by(997).take(40) {
            let p = PointMultiset::of_subspace(&u, 1).unwrap();
            assert!(is_divisible(&p, k as u32 - 1));
            assert_eq!(recognize_subspace(&p, k as u32 - 1).unwrap(), Some(u));
        }
    }
}

#[test]
fn recognition_rejects_bad_hypotheses() {
    // two skew lines and a stray point: 7 points, not 4-divisible
    let p = parse_multiset("00011000 1\n00010000 1\n00001000 1\n00000011 1\n00000010 1\n00000001 1\n10000000 1\n")
        .unwrap();
    assert_eq!(p.cardinality(), 7);
    assert!(matches!(recognize_subspace(&p, 2), Err(Error::Precondition(_))));
    let seven = parse_multiset("0001 7\n").unwrap();
    assert!(!is_divisible(&seven, 2));
    assert!(matches!(recognize_subspace(&seven, 2), Err(Error::Precondition(_))));
    let line = parse_multiset("0001 1\n0010 1\n0011 1\n").unwrap();
    assert!(matches!(recognize_subspace(&line, 2), Err(Error::Precondition(_))));
}

#[test]
fn removed_codewords_are_recovered() {
    let g = g843();
    let s = special_subspace(8, 4).unwrap();
    let words = g.words();
    for (i, j) in [(0, 1), (3, 200), (17, 255), (128, 129)] {
        let rest = words
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != i && t != j)
            .map(|(_, w)| w.clone());
        let cut = SubspaceCode::from_subspaces(8, rest).unwrap();
        let mut found = lmrd_extend(&cut, &s).unwrap();
        found.sort();
        assert_eq!(found, vec![words[i].clone(), words[j].clone()]);

        let one = SubspaceCode::from_subspaces(8, cut.words().iter().cloned().chain([words[i].clone()])).unwrap();
        assert_eq!(lmrd_extend(&one, &s).unwrap(), vec![words[j].clone()]);
    }
}

#[test]
fn code_multiset_without_the_special_solid_is_uniform() {
    let g = g843();
    let s = special_subspace(8, 4).unwrap();
    let p = points_of_code(&g);
    for x in 1..=255 as Row {
        assert_eq!(p.get(x), if s.contains_vector(x) { 0 } else { 16 });
    }
    assert!(is_divisible(&p, 3));
    assert!(!is_divisible(&p, 8));
}
