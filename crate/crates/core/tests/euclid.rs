use proptest::prelude::*;

use sculpt::bulk::validate_sculpture;
use sculpt::corpus::{l_shape_complex, matchbox, TWO_MUTEX_PV};
use sculpt::decide::{decide_sculptable, SearchConfig};
use sculpt::euclid::{complex_to_hda, grid_to_bulk, make_grid, sculpture_to_complex, AxisPos, ComplexJson, Cube, EuclideanComplex};
use sculpt::events::universal_events;
use sculpt::path::is_connected;
use sculpt::pv::{parse_pv, pv_to_complex};

#[test]
fn grid_sizes() {
    let g = make_grid(&[2, 3]).unwrap();
    assert_eq!(g.hda.len(), 5 * 7);
    assert_eq!(g.hda.of_dim(2).len(), 6);
    assert_eq!(g.hda.of_dim(1).len(), 2 * 4 + 3 * 3);
    assert_eq!(g.hda.of_dim(0).len(), 12);
    g.check_gluing().unwrap();
    assert!(g.top(&[1, 2]).is_some());
    assert!(g.top(&[2, 0]).is_none());
    assert!(make_grid(&[]).unwrap().hda.len() == 1);
    assert!(make_grid(&[3, 0]).is_err());
}

#[test]
fn grid_events_are_columns() {
    let g = make_grid(&[2, 3]).unwrap();
    let ev = universal_events(&g.hda);
    assert_eq!(ev.len(), 5);
    let d = decide_sculptable(&g.hda, &SearchConfig::default()).unwrap();
    assert_eq!(d.verdict.dimension(), Some(5));
}

#[test]
fn long_line_in_the_bulk() {
    let sc = grid_to_bulk(&make_grid(&[3]).unwrap()).unwrap();
    let mut img: Vec<String> = sc.em.iter().map(|x| sculpt::st::tuple_string(x)).collect();
    img.sort();
    assert_eq!(img, ["000", "100", "110", "111", "11x", "1x0", "x00"]);
}

/// Whether a cell of the 4×4 board lies in the gray cross of two processes
/// taking two locks in opposite order: the open rectangles `]1,4[ × ]2,3[`
/// (both hold `a`) and `]2,3[ × ]1,4[` (both hold `b`). A cell is tested by
/// its midpoint.
fn in_forbidden_cross(x: AxisPos, y: AxisPos) -> bool {
    let mid = |p: AxisPos| match p {
        AxisPos::At(j) => j as f64,
        AxisPos::Span(j) => j as f64 + 0.5,
    };
    let inside = |v: f64, lo: f64, hi: f64| lo < v && v < hi;
    let (x, y) = (mid(x), mid(y));
    (inside(x, 1.0, 4.0) && inside(y, 2.0, 3.0)) || (inside(x, 2.0, 3.0) && inside(y, 1.0, 4.0))
}

#[test]
fn two_mutex_board_minus_the_cross() {
    let m = pv_to_complex(&parse_pv(TWO_MUTEX_PV).unwrap()).unwrap();
    let axis: Vec<AxisPos> = (0..=4).map(AxisPos::At).chain((0..4).map(AxisPos::Span)).collect();
    let mut kept = std::collections::BTreeSet::new();
    for &x in &axis {
        for &y in &axis {
            if !in_forbidden_cross(x, y) {
                kept.insert(Cube::from_positions(&[x, y]));
            }
        }
    }
    assert_eq!(m.complex.cubes, kept);
    // three plus three squares sharing the middle one, and four inner edges
    assert_eq!(m.complex.top_count(2), 16 - 5);
    assert_eq!(m.complex.top_count(1), 40 - 4);
    assert_eq!(m.complex.top_count(0), 25);
    assert!(is_connected(&m.hda).is_ok());
    // (3,3) is only entered through the cross
    assert_eq!(m.hda.of_dim(0).len(), 24);
    // the first step of each process runs before any lock is taken; the
    // other three are cut in two by the cross
    assert_eq!(universal_events(&m.hda).len(), 2 * (1 + 3 * 2));
    let d = decide_sculptable(&m.hda, &SearchConfig::default()).unwrap();
    assert!(d.verdict.is_sculptable());
}

#[test]
fn l_shape_is_sculptable_in_its_grid() {
    let c = complex_to_hda(&l_shape_complex(), &[0, 0]).unwrap();
    assert!(c.added.len() > 0);
    assert_eq!(c.sizes, vec![2, 2]);
    let sc = c.to_sculpture().unwrap();
    assert_eq!(sc.d, 4);
    assert!(validate_sculpture(&sc.hda, sc.d, &sc.em).is_empty());
    let d = decide_sculptable(&c.hda, &SearchConfig::default()).unwrap();
    assert_eq!(d.verdict.dimension(), Some(4));

    let off = complex_to_hda(&l_shape_complex(), &[1, 0]).unwrap();
    assert!(off.to_sculpture().is_err());
    assert!(complex_to_hda(&l_shape_complex(), &[0]).is_err());
}

#[test]
fn complex_json_roundtrip() {
    let c = l_shape_complex();
    let json: ComplexJson = serde_json::from_str(&serde_json::to_string(&c.to_json(&[0, 0])).unwrap()).unwrap();
    assert_eq!(EuclideanComplex::new(json.dim, json.cubes).unwrap(), c);
    assert!(EuclideanComplex::new(2, [Cube { a: vec![0, 0], b: vec![2, 1] }]).is_err());
}

#[test]
fn matchbox_as_a_complex() {
    let mb = matchbox();
    let c = sculpture_to_complex(&mb);
    assert_eq!(c.cubes.len(), mb.hda.len());
    let back = complex_to_hda(&c, &[0, 0, 0]).unwrap();
    assert!(back.added.is_empty());
    assert_eq!(back.hda.len(), mb.hda.len());
    let sc = back.to_sculpture().unwrap();
    assert_eq!(sc.d, 3);
}

fn sizes() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=4, 1..=3).prop_filter("at most nine events", |s| s.iter().sum::<usize>() <= 9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn grids_embed_in_the_bulk(s in sizes()) {
        let g = make_grid(&s).unwrap();
        let cells: usize = s.iter().map(|m| 2 * m + 1).product();
        prop_assert_eq!(g.hda.len(), cells);
        prop_assert_eq!(g.hda.of_dim(s.len()).len(), s.iter().product::<usize>());
        prop_assert!(g.check_gluing().is_ok());
        let sc = grid_to_bulk(&g).unwrap();
        prop_assert_eq!(sc.d, s.iter().sum::<usize>());
        prop_assert!(validate_sculpture(&sc.hda, sc.d, &sc.em).is_empty());
        prop_assert!(sc.is_simplistic());
        prop_assert_eq!(universal_events(&g.hda).len(), sc.d);
    }
}
