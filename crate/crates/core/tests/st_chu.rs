use proptest::prelude::*;

use sculpt::bulk::bulk_tuples;
use sculpt::corpus::{asym_conflict_st, empty_square, st_fixtures};
use sculpt::hintost::hintost;
use sculpt::partition::Partition;
use sculpt::st::{chu_to_st, config_to_tuple, parse_tuple, st_to_chu, tuple_to_config, ChuSpace, StConfig, StStructure, Tri};

#[test]
fn regularity_examples() {
    assert!(asym_conflict_st().is_regular());
    for f in st_fixtures().unwrap() {
        assert_eq!(f.st.is_regular(), f.regular, "{}", f.name);
    }

    let unrooted = StStructure::from_names(&["a"], &[(&["a"], &[]), (&["a"], &["a"])]).unwrap();
    assert!(!unrooted.check_regular().rooted);

    let stuck = StStructure::from_names(&["a"], &[(&[], &[]), (&["a"], &[])]).unwrap();
    let r = stuck.check_regular();
    assert!(r.rooted && r.connected());
    let gap = r.not_closed.unwrap();
    assert_eq!(gap.missing, StConfig::new([0], [0]));

    let jump = StStructure::from_names(&["a"], &[(&[], &[]), (&["a"], &["a"])]).unwrap();
    let r = jump.check_regular();
    assert!(!r.connected());
    assert!(r.closed());
}

#[test]
fn empty_square_covering_and_its_quotient() {
    let lab = hintost(&empty_square()).unwrap();
    let st = lab.to_st();
    assert_eq!(st.events().len(), 4);
    assert_eq!(st.len(), 9);
    assert!(st.is_regular());

    let h = empty_square();
    let l = |id: &str| lab.events.label(h.cell(id).unwrap());
    let mut p = Partition::discrete(4);
    p.merge(l("q1"), l("q3"));
    p.merge(l("q2"), l("q4"));
    assert!(!st.is_collapsing(&p));
    let q = st.quotient(&p).unwrap();
    assert_eq!(q.events().len(), 2);
    assert_eq!(q.len(), 8);

    // q1 then q4 reaches the far corner with both events done
    let mut bad = Partition::discrete(4);
    bad.merge(l("q1"), l("q4"));
    assert!(st.is_collapsing(&bad));
    // q1 and q2 never share a configuration
    let mut bad = Partition::discrete(4);
    bad.merge(l("q1"), l("q2"));
    assert!(!st.is_collapsing(&bad));
    bad.merge(l("q2"), l("q3"));
    assert!(st.is_collapsing(&bad));
}

#[test]
fn state_with_two_running_events() {
    let x = parse_tuple("1xx0").unwrap();
    let c = tuple_to_config(&x);
    assert_eq!(c, StConfig::new([0, 1, 2], [0]));
    assert_eq!(c.running(), [1, 2].into_iter().collect());
    assert_eq!(config_to_tuple(&c, 4), x);
}

#[test]
fn complete_structure_is_separable() {
    let st = StStructure::new(vec!["a".into(), "b".into()], bulk_tuples(2).iter().map(|x| tuple_to_config(x))).unwrap();
    assert_eq!(st.len(), 9);
    assert!(st_to_chu(&st).is_separable());
    // a and b always take the same value
    let twins = StStructure::new(
        vec!["a".into(), "b".into()],
        ["00", "xx", "11"].iter().map(|s| tuple_to_config(&parse_tuple(s).unwrap())),
    )
    .unwrap();
    assert!(!st_to_chu(&twins).is_separable());
}

#[test]
fn fixture_chu_roundtrips() {
    for f in st_fixtures().unwrap() {
        let chu = st_to_chu(&f.st);
        assert_eq!(chu_to_st(&chu).unwrap(), f.st);
        assert_eq!(ChuSpace::from_text(&chu.to_text()).unwrap(), chu);
        assert_eq!(ChuSpace::from_json(&chu.to_json()).unwrap(), chu);
        assert_eq!(StStructure::from_json(&f.st.to_json()).unwrap(), f.st);
    }
}

#[test]
fn malformed_chu_text() {
    assert!(ChuSpace::from_text("").is_err());
    assert!(ChuSpace::from_text("states\n00\n").is_err());
    assert!(ChuSpace::from_text("events a b\n0\n").is_err());
    assert!(ChuSpace::from_text("events a\n2\n").is_err());
}

fn tri() -> impl Strategy<Value = Tri> {
    prop_oneof![Just(Tri::Zero), Just(Tri::Half), Just(Tri::One)]
}

fn structure() -> impl Strategy<Value = StStructure> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(tri(), n), 1..12).prop_map(move |rows| {
            let names = (0..n).map(|i| format!("e{i}")).collect();
            StStructure::new(names, rows.iter().map(|x| tuple_to_config(x))).unwrap()
        })
    })
}

fn partition(n: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0usize..n, n).prop_map(|l| Partition::from_labels(&l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chu_roundtrip(st in structure()) {
        let chu = st_to_chu(&st);
        prop_assert_eq!(&chu_to_st(&chu).unwrap(), &st);
        prop_assert_eq!(ChuSpace::from_text(&chu.to_text()).unwrap(), chu);
    }

    #[test]
    fn collapsing_means_two_merged_events_started_together(
        (st, p) in structure().prop_flat_map(|st| { let n = st.events().len(); (Just(st), partition(n)) })
    ) {
        let direct = st.configs().iter().any(|c| {
            c.s.iter().any(|&e| c.s.iter().any(|&f| e != f && p.same(e, f)))
        });
        prop_assert_eq!(st.is_collapsing(&p), direct);
        if !direct {
            // a non-collapsing quotient keeps the number of started events per configuration
            let q = st.quotient(&p).unwrap();
            for c in st.configs() {
                prop_assert!(q.contains(&c.map(|e| p.block_of(e))));
                prop_assert_eq!(c.map(|e| p.block_of(e)).s.len(), c.s.len());
            }
        }
    }

    #[test]
    fn regular_means_reachable_and_closed(st in structure()) {
        let r = st.check_regular();
        if r.is_regular() {
            for c in st.configs() {
                for e in c.running() {
                    let mut up = c.clone();
                    up.t.insert(e);
                    prop_assert!(st.contains(&up));
                }
            }
        }
    }
}
