use proptest::prelude::*;

use sculpt::bulk::make_bulk;
use sculpt::corpus::{empty_square, filled_square, fixtures, inconsistent_loop, pinched_square, ab_loop};
use sculpt::euclid::make_grid;
use sculpt::path::{elementary_homotopies, homotopy_class, is_acyclic, is_connected, normalize_path, rooted_paths, Path};
use sculpt::precubical::{validate_precubical, Dir, Hda, RawPrecubical};
use sculpt::pv::{parse_pv, pv_to_complex};

fn square_raw() -> RawPrecubical {
    let mut raw = RawPrecubical::default();
    for v in ["00", "10", "01", "11"] {
        raw.vertex(v);
    }
    raw.edge("x0", "00", "10").edge("x1", "01", "11").edge("0x", "00", "01").edge("1x", "10", "11");
    raw.add("xx", &["0x", "x0"], &["1x", "x1"]);
    raw.with_initial("00")
}

#[test]
fn square_with_four_corners_is_valid() {
    assert!(validate_precubical(&square_raw()).is_ok());
}

#[test]
fn lone_vertex_is_valid() {
    let mut raw = RawPrecubical::default();
    raw.vertex("v");
    assert!(validate_precubical(&raw).is_ok());
}

#[test]
fn miswired_corner_gives_one_violation() {
    let mut raw = square_raw();
    // bottom edge now starts at 01, so s1 s2 q = 01 but s1 s1 q = 00
    raw.s.insert("x0".into(), vec!["01".into()]);
    raw.t.insert("x0".into(), vec!["11".into()]);
    let report = validate_precubical(&raw);
    assert!(!report.is_ok());
    assert!(!report.violations.is_empty());
}

#[test]
fn selflinking() {
    assert!(make_bulk(2, 12).unwrap().is_non_selflinked());
    assert!(!pinched_square().is_non_selflinked());
    assert!(!inconsistent_loop().is_non_selflinked());
}

#[test]
fn pinched_square_witness_is_the_doubled_vertex() {
    let h = pinched_square();
    let (face, cell, w1, w2) = h.non_selflinked().unwrap_err();
    assert_eq!(h.id(face), "v");
    assert_eq!(h.id(cell), "q");
    assert_ne!(w1, w2);
}

#[test]
fn connectivity_and_cycles() {
    let sq = empty_square();
    assert!(is_connected(&sq).is_ok());
    assert!(is_acyclic(&sq).is_ok());
    let lp = ab_loop();
    assert!(is_connected(&lp).is_ok());
    assert!(is_acyclic(&lp).is_err());
    let mut raw = sq.to_raw();
    raw.vertex("stray");
    assert!(is_connected(&Hda::from_raw(&raw).unwrap()).is_err());
}

fn path_of(h: &Hda, steps: &[(Dir, usize, &str)]) -> Path {
    let mut p = Path::empty(h.initial);
    for &(d, k, id) in steps {
        p.push(d, k, h.cell(id).unwrap());
    }
    p
}

#[test]
fn normal_form_examples() {
    let b2 = make_bulk(2, 12).unwrap();
    let p = path_of(&b2, &[(Dir::S, 1, "x0"), (Dir::S, 2, "xx")]);
    let n = normalize_path(&b2, &p).unwrap();
    assert_eq!(n.end(), p.end());
    assert_eq!(n.indexed_kind(), "s1 s2");

    let empty = Path::empty(b2.initial);
    assert_eq!(normalize_path(&b2, &empty).unwrap(), empty);

    let b3 = make_bulk(3, 12).unwrap();
    let p = path_of(&b3, &[(Dir::S, 1, "x00"), (Dir::S, 2, "xx0"), (Dir::T, 1, "1x0")]);
    let n = normalize_path(&b3, &p).unwrap();
    assert_eq!(n.end(), p.end());
    let class = homotopy_class(&b3, &p, 10_000).unwrap().unwrap();
    assert!(class.contains(&n));
}

#[test]
fn normalize_is_homotopic_on_small_bulks() {
    for d in 1..=3 {
        let b = make_bulk(d, 12).unwrap();
        let paths = rooted_paths(&b, 200_000).unwrap();
        for p in paths.iter().filter(|p| p.len() <= 5) {
            let n = normalize_path(&b, p).unwrap();
            assert_eq!(n.end(), p.end());
            let class = homotopy_class(&b, p, 200).unwrap();
            if let Some(class) = class {
                assert!(class.contains(&n), "{} vs {}", p.describe(&b), n.describe(&b));
            }
        }
    }
}

#[test]
fn elementary_moves() {
    let b2 = make_bulk(2, 12).unwrap();
    let p = path_of(&b2, &[(Dir::S, 1, "x0"), (Dir::S, 2, "xx")]);
    let moves = elementary_homotopies(&b2, &p).unwrap();
    assert!(moves.iter().any(|m| m.indexed_kind() == "s1 s1"), "{:?}", moves.iter().map(|m| m.indexed_kind()).collect::<Vec<_>>());
    for m in &moves {
        assert_eq!((m.start, m.end()), (p.start, p.end()));
    }

    let sq = empty_square();
    let seq = path_of(&sq, &[(Dir::S, 1, "q1"), (Dir::T, 1, "10")]);
    assert!(elementary_homotopies(&sq, &seq).unwrap().is_empty());
}

#[test]
fn filled_square_maximal_paths_meet_in_four_moves() {
    let h = filled_square();
    let paths = rooted_paths(&h, 10_000).unwrap();
    let top = h.cell("11").unwrap();
    let maximal: Vec<&Path> = paths.iter().filter(|p| p.end() == top && p.kind() == "stst").collect();
    assert_eq!(maximal.len(), 2);
    // breadth first over moves
    let mut frontier = vec![maximal[0].clone()];
    let mut found = None;
    for depth in 1..=6 {
        let mut next = Vec::new();
        for p in &frontier {
            next.extend(elementary_homotopies(&h, p).unwrap());
        }
        if next.contains(maximal[1]) {
            found = Some(depth);
            break;
        }
        frontier = next;
    }
    // dive into the square, swap entry face, swap exit face, leave
    assert_eq!(found, Some(4));
}

#[test]
fn generated_structures_validate() {
    for d in 0..=5 {
        assert!(validate_precubical(&make_bulk(d, 12).unwrap().to_raw()).is_ok());
    }
    for sizes in [vec![1], vec![2, 1], vec![1, 1, 1], vec![3, 2]] {
        assert!(validate_precubical(&make_grid(&sizes).unwrap().hda.to_raw()).is_ok());
    }
    let m = pv_to_complex(&parse_pv("P(a) P(b) V(b) V(a)\nP(b) P(a) V(a) V(b)").unwrap()).unwrap();
    assert!(validate_precubical(&m.hda.to_raw()).is_ok());
    for f in fixtures() {
        assert!(validate_precubical(&f.hda.to_raw()).is_ok(), "{}", f.name);
    }
}

#[test]
fn paths_from_operations_are_legal() {
    for f in fixtures() {
        if let Some(paths) = rooted_paths(&f.hda, 2_000) {
            for p in paths {
                assert!(sculpt::path::check_path(&f.hda, &p).is_ok());
            }
        }
    }
}

#[test]
fn json_roundtrip_is_exact_on_corpus() {
    for f in fixtures() {
        let text = f.hda.to_json();
        let back = Hda::from_json(&text).unwrap();
        assert_eq!(back, f.hda);
        assert_eq!(back.to_json(), text);
    }
}

proptest! {
    #[test]
    fn bulk_json_roundtrip(d in 0usize..5) {
        let b = make_bulk(d, 12).unwrap();
        let text = b.to_json();
        prop_assert_eq!(Hda::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn moves_keep_endpoints(d in 2usize..4, pick in 0usize..10_000) {
        let b = make_bulk(d, 12).unwrap();
        let paths = rooted_paths(&b, 100_000).unwrap();
        let p = &paths[pick % paths.len()];
        for m in elementary_homotopies(&b, p).unwrap() {
            prop_assert_eq!(m.start, p.start);
            prop_assert_eq!(m.end(), p.end());
            prop_assert!(sculpt::path::check_path(&b, &m).is_ok());
        }
    }
}
