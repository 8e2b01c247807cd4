use std::collections::BTreeSet;

use sculpt::bulk::{make_bulk, sculpture_isomorphism, validate_sculpture};
use sculpt::corpus::{broken_box, empty_square, empty_square_sculpture, filled_square, fixture, fixtures, matchbox, triangle};
use sculpt::decide::{
    build_embedding, check_proper, decide_sculptable, decide_with, length_mismatch, Engine, ProperViolation, SearchConfig,
    Verdict, Witness,
};
use sculpt::events::repeating_events;
use sculpt::hintost::{hintost, path_config, Labeling};
use sculpt::partition::Partition;
use sculpt::path::{elementary_homotopies, is_acyclic, rooted_paths};
use sculpt::precubical::{Dir, Hda};
use sculpt::random::{random_hdas, RandomHdaConfig};
use sculpt::st::{config_to_tuple, StConfig};
use sculpt::Error;

fn labelled(h: &Hda) -> Option<Labeling> {
    hintost(h).ok()
}

#[test]
fn covering_sizes() {
    assert_eq!(hintost(&empty_square()).unwrap().to_st().len(), 9);
    let filled = hintost(&filled_square()).unwrap();
    assert_eq!(filled.to_st().len(), 9);
    let mb = hintost(&matchbox().hda).unwrap();
    assert!(mb.cells.iter().all(|c| c.len() == 1));
    assert_eq!(mb.to_st().len(), 25);
}

#[test]
fn hintost_refuses_bad_input() {
    assert!(matches!(hintost(&fixture("ab_loop").unwrap().hda), Err(Error::Cyclic(_))));
    assert!(matches!(hintost(&fixture("pinched_square").unwrap().hda), Err(Error::RepeatingEvents(_))));
}

#[test]
fn broken_box_corners_share_a_configuration() {
    let h = broken_box();
    let lab = hintost(&h).unwrap();
    assert_eq!(lab.events.len(), 3);
    let (a, b) = (h.cell("011a").unwrap(), h.cell("011b").unwrap());
    assert_eq!(lab.configs(a).len(), 1);
    assert_eq!(lab.configs(a)[0].config, lab.configs(b)[0].config);
    assert!(matches!(check_proper(&lab, &Partition::discrete(3)), Err(ProperViolation::NotInjective { .. })));

    let d = decide_sculptable(&h, &SearchConfig::default()).unwrap();
    match d.verdict {
        Verdict::NotSculptable(Witness::LabelClash { a: x, b: y, .. }) => {
            assert_eq!(BTreeSet::from([x, y]), BTreeSet::from([a, b]));
        }
        v => panic!("unexpected {v:?}"),
    }
}

#[test]
fn triangle_has_mismatched_lengths() {
    let h = triangle();
    let lab = hintost(&h).unwrap();
    match length_mismatch(&h, &lab) {
        Some(Witness::LengthMismatch { cell, a, b, .. }) => {
            assert_eq!(h.id(cell), "2");
            assert_ne!(a.s.len(), b.s.len());
        }
        w => panic!("unexpected {w:?}"),
    }
}

#[test]
fn properness_clauses() {
    let h = empty_square();
    let lab = hintost(&h).unwrap();
    let l = |id: &str| lab.events.label(h.cell(id).unwrap());
    assert!(matches!(check_proper(&lab, &Partition::discrete(4)), Err(ProperViolation::NotFunctional { .. })));
    let mut p = Partition::discrete(4);
    p.merge(l("q1"), l("q3"));
    p.merge(l("q2"), l("q4"));
    assert!(check_proper(&lab, &p).is_ok());
    assert!(check_proper(&lab, &Partition::single(4)).is_err());

    let b3 = make_bulk(3, 12).unwrap();
    let lab = hintost(&b3).unwrap();
    let axis = |id: &str| lab.events.label(b3.cell(id).unwrap());
    assert!(check_proper(&lab, &Partition::discrete(3)).is_ok());
    // first and last coordinates merged: 1 ⋖ 2 ⋖ 3 becomes a cycle
    let mut p = Partition::discrete(3);
    p.merge(axis("x00"), axis("00x"));
    assert!(matches!(check_proper(&lab, &p), Err(ProperViolation::Antisymmetry { .. })));
}

#[test]
fn embedding_from_a_proper_identification() {
    let h = empty_square();
    let lab = hintost(&h).unwrap();
    let l = |id: &str| lab.events.label(h.cell(id).unwrap());
    let mut p = Partition::discrete(4);
    p.merge(l("q1"), l("q3"));
    p.merge(l("q2"), l("q4"));
    let sc = build_embedding(&h, &lab, &p).unwrap();
    assert_eq!(sc.d, 2);
    assert!(sculpture_isomorphism(&sc, &empty_square_sculpture()).is_some());
    assert!(build_embedding(&h, &lab, &Partition::discrete(4)).is_err());
}

#[test]
fn corpus_verdicts_and_engines_agree() {
    let cfg = SearchConfig::default();
    for f in fixtures() {
        let repair = decide_with(&f.hda, &cfg, Engine::Repair).unwrap();
        f.check(&repair.verdict).unwrap();
        let brute = decide_with(&f.hda, &cfg, Engine::BruteForce).unwrap();
        assert_eq!(repair.verdict.is_sculptable(), brute.verdict.is_sculptable(), "{}", f.name);
        for v in [&repair.verdict, &brute.verdict] {
            if let Verdict::Sculptable { sculpture, .. } = v {
                assert!(validate_sculpture(&sculpture.hda, sculpture.d, &sculpture.em).is_empty());
                assert!(sculpture.is_simplistic(), "{}", f.name);
            }
        }
    }
}

#[test]
fn random_verdicts_agree_with_the_oracle() {
    let cfg = SearchConfig::default();
    let mut sculptable = 0;
    for h in random_hdas(2024, 200, &RandomHdaConfig::default()).unwrap() {
        let repair = decide_with(&h, &cfg, Engine::Repair).unwrap();
        let brute = decide_with(&h, &cfg, Engine::BruteForce).unwrap();
        assert_eq!(repair.verdict.is_sculptable(), brute.verdict.is_sculptable(), "{}", h.to_json());
        if let Verdict::Sculptable { sculpture, .. } = &repair.verdict {
            sculptable += 1;
            assert!(validate_sculpture(&sculpture.hda, sculpture.d, &sculpture.em).is_empty());
        }
    }
    assert!(sculptable > 0 && sculptable < 200, "{sculptable}");
}

#[test]
fn disconnected_input_is_an_error() {
    let mut raw = empty_square().to_raw();
    raw.vertex("stray");
    let h = Hda::from_raw(&raw).unwrap();
    assert!(matches!(decide_sculptable(&h, &SearchConfig::default()), Err(Error::NotConnected(_))));
}

/// Fixtures and random HDA on which the labelling is defined.
fn labelled_corpus() -> Vec<(String, Hda, Labeling)> {
    let mut out: Vec<(String, Hda, Labeling)> = fixtures()
        .into_iter()
        .filter_map(|f| labelled(&f.hda).map(|l| (f.name.to_string(), f.hda, l)))
        .collect();
    for (i, h) in random_hdas(11, 40, &RandomHdaConfig::default()).unwrap().into_iter().enumerate() {
        let l = hintost(&h).unwrap();
        out.push((format!("random {i}"), h, l));
    }
    out
}

#[test]
fn labels_are_homotopy_invariant() {
    for (name, h, lab) in labelled_corpus() {
        let Some(paths) = rooted_paths(&h, 500) else { continue };
        for p in &paths {
            let c = path_config(&h, &lab.events, p);
            for m in elementary_homotopies(&h, p).unwrap() {
                assert_eq!(path_config(&h, &lab.events, &m), c, "{name}: {}", p.describe(&h));
            }
            assert!(lab.configs(p.end()).iter().any(|l| l.config == c), "{name}");
        }
    }
}

#[test]
fn running_events_are_the_multilabel() {
    for (name, h, lab) in labelled_corpus() {
        for q in h.cells() {
            let want: BTreeSet<usize> = lab.events.multilabel(&h, q).into_iter().collect();
            for l in lab.configs(q) {
                assert_eq!(l.config.running(), want, "{name} {}", h.id(q));
                assert_eq!(l.witness.end(), q);
                assert_eq!(path_config(&h, &lab.events, &l.witness), l.config);
            }
        }
    }
}

#[test]
fn each_step_starts_or_ends_one_new_event() {
    for (name, h, lab) in labelled_corpus() {
        let Some(paths) = rooted_paths(&h, 500) else { continue };
        for p in paths.iter().filter(|p| !p.steps.is_empty()) {
            let mut prefix = p.clone();
            let last = prefix.steps.pop().unwrap();
            let before = path_config(&h, &lab.events, &prefix);
            let after = path_config(&h, &lab.events, p);
            match last.dir {
                Dir::S => {
                    assert_eq!(after.s.len(), before.s.len() + 1, "{name}");
                    assert_eq!(after.t, before.t);
                }
                Dir::T => {
                    assert_eq!(after.t.len(), before.t.len() + 1, "{name}");
                    assert_eq!(after.s, before.s);
                }
            }
        }
    }
}

#[test]
fn sculptures_read_back_the_labels() {
    for (name, h, lab) in labelled_corpus() {
        let d = decide_sculptable(&h, &SearchConfig::default()).unwrap();
        let Verdict::Sculptable { partition, sculpture } = d.verdict else { continue };
        let coords = sculpture.class_coordinates();
        for (class, &c) in coords.iter().enumerate() {
            assert_eq!(coords[partition.blocks()[partition.block_of(class)][0]], c, "{name}");
        }
        for q in h.cells() {
            for l in lab.configs(q) {
                let image: StConfig = l.config.map(|e| coords[e]);
                assert_eq!(config_to_tuple(&image, sculpture.d), sculpture.image(q), "{name} {}", h.id(q));
            }
        }
    }
}

#[test]
fn labelled_inputs_are_acyclic_and_non_repeating() {
    for (name, h, lab) in labelled_corpus() {
        assert!(is_acyclic(&h).is_ok(), "{name}");
        assert!(repeating_events(&h, &lab.events).is_none(), "{name}");
    }
}

#[test]
fn tiny_budget_is_a_resource_error() {
    let cfg = SearchConfig { node_budget: 1, ..SearchConfig::default() };
    let h = fixture("backtrack_wheel").unwrap().hda;
    let r = decide_with(&h, &cfg, Engine::BruteForce);
    assert!(matches!(r, Err(Error::ResourceLimit(_))), "{r:?}");
    let small = SearchConfig { max_events: 2, ..SearchConfig::default() };
    assert!(matches!(decide_with(&h, &small, Engine::BruteForce), Err(Error::ResourceLimit(_))));
}
