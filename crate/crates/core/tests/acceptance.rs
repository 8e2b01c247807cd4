//! One PASS/FAIL line per acceptance criterion, with its time limit.
//!
//! Run with `cargo test -p sculpt --test acceptance`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sculpt::bulk::{
    bulk_count, bulk_sculpture, event_equiv_sculpt, make_bulk, sculpture_isomorphism, sculpture_to_st, st_to_sculpture,
    validate_sculpture, Sculpture,
};
use sculpt::corpus::{
    cyclic_fan, fixture, fixtures, inconsistent_loop, l_shape_complex, matchbox, ordered_fan, pinched_square, st_fixtures,
    twisted_strip, verdict_summary, TWO_MUTEX_PV,
};
use sculpt::decide::{decide_sculptable, decide_with, Engine, SearchConfig, Verdict};
use sculpt::euclid::{complex_to_hda, grid_to_bulk, make_grid, sculpture_to_complex, AxisPos, Cube, EuclideanComplex};
use sculpt::events::{is_consistent, is_ordered, repeating_events, symmetric_variant, universal_events};
use sculpt::export::verdict_json;
use sculpt::hintost::{hintost, path_config};
use sculpt::path::{elementary_homotopies, is_connected, rooted_paths};
use sculpt::precubical::{Dir, Hda};
use sculpt::pv::{parse_pv, pv_to_complex};
use sculpt::random::{random_hdas, RandomHdaConfig};
use sculpt::st::{chu_to_st, st_to_chu, ChuSpace, StStructure};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn corpus_verdicts() -> Outcome {
    let want = [
        ("matchbox", "Sculptable d=3"),
        ("broken_box", "NotSculptable LabelClash"),
        ("speed_game", "NotSculptable LabelClash"),
        ("triangle", "NotSculptable LengthMismatch"),
        ("split_triangle", "Sculptable d=3"),
        ("wheel", "NotSculptable LabelClash"),
        ("backtrack_wheel", "Sculptable d=4"),
        ("empty_square", "Sculptable d=2"),
    ];
    for (name, summary) in want {
        let f = fixture(name).ok_or(format!("missing fixture {name}"))?;
        let d = decide_sculptable(&f.hda, &cfg()).map_err(|e| format!("{name}: {e}"))?;
        let got = verdict_summary(&d.verdict);
        ensure(got == summary, || format!("{name}: got {got}, want {summary}"))?;
    }
    let sq = fixture("empty_square").unwrap();
    let v = verdict_json(&sq.hda, &decide_sculptable(&sq.hda, &cfg()).unwrap());
    let mut blocks = v.partition.unwrap();
    blocks.iter_mut().for_each(|b| b.sort());
    blocks.sort();
    ensure(blocks == [["q1", "q3"], ["q2", "q4"]], || format!("empty square partition {blocks:?}"))?;
    let bw = decide_sculptable(&fixture("backtrack_wheel").unwrap().hda, &cfg()).unwrap();
    if let Verdict::Sculptable { partition, .. } = &bw.verdict {
        ensure(partition.num_blocks() == 4, || format!("backtracking wheel has {} classes", partition.num_blocks()))?;
    }
    let mut n = 0;
    for f in fixtures() {
        f.check(&decide_sculptable(&f.hda, &cfg()).unwrap().verdict)?;
        n += 1;
    }
    Ok(format!("{} named verdicts, {n} fixtures", want.len()))
}

/// Every sculpture the corpus knows: shipped ones and decided ones.
fn corpus_sculptures() -> Vec<(String, Sculpture)> {
    let mut out = Vec::new();
    for f in fixtures() {
        for sc in &f.sculptures {
            out.push((format!("{} (shipped)", f.name), sc.clone()));
        }
        if let Ok(d) = decide_sculptable(&f.hda, &cfg()) {
            if let Verdict::Sculptable { sculpture, .. } = d.verdict {
                out.push((format!("{} (decided)", f.name), sculpture));
            }
        }
    }
    out
}

fn corpus_structures() -> Vec<(String, StStructure)> {
    let mut out: Vec<(String, StStructure)> =
        st_fixtures().unwrap().into_iter().map(|f| (f.name.to_string(), f.st)).collect();
    for f in fixtures() {
        if let Ok(lab) = hintost(&f.hda) {
            out.push((format!("{} covering", f.name), lab.to_st()));
        }
    }
    out
}

fn roundtrips() -> Outcome {
    let structures = corpus_structures();
    for (name, st) in &structures {
        let chu = st_to_chu(st);
        ensure(chu_to_st(&chu).ok().as_ref() == Some(st), || format!("{name}: chu to st"))?;
        ensure(ChuSpace::from_text(&chu.to_text()).ok().as_ref() == Some(&chu), || format!("{name}: chu text"))?;
        if st.is_regular() {
            let sc = st_to_sculpture(st).map_err(|e| format!("{name}: {e}"))?;
            let back = sculpture_to_st(&sc).rename(st.events().to_vec()).unwrap();
            ensure(&back == st, || format!("{name}: st to sculpture and back"))?;
        }
    }
    let sculptures = corpus_sculptures();
    for (name, sc) in &sculptures {
        let again = st_to_sculpture(&sculpture_to_st(sc)).map_err(|e| format!("{name}: {e}"))?;
        ensure(sculpture_isomorphism(sc, &again).is_some(), || format!("{name}: sculpture to st and back"))?;
    }
    Ok(format!("{} structures, {} sculptures", structures.len(), sculptures.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut hdas: Vec<(String, Hda)> = fixtures().into_iter().map(|f| (f.name.to_string(), f.hda)).collect();
    let random = random_hdas(2024, 200, &RandomHdaConfig::default()).map_err(|e| e.to_string())?;
    for (i, h) in random.into_iter().enumerate() {
        ensure(universal_events(&h).len() <= 6, || format!("random {i} has too many events"))?;
        hdas.push((format!("random {i}"), h));
    }
    let mut sculptable = 0;
    for (name, h) in &hdas {
        let a = decide_with(h, &cfg(), Engine::Repair).map_err(|e| format!("{name}: {e}"))?;
        let b = decide_with(h, &cfg(), Engine::BruteForce).map_err(|e| format!("{name}: {e}"))?;
        ensure(a.verdict.is_sculptable() == b.verdict.is_sculptable(), || {
            format!("{name}: repair {} against oracle {}", verdict_summary(&a.verdict), verdict_summary(&b.verdict))
        })?;
        sculptable += usize::from(a.verdict.is_sculptable());
    }
    Ok(format!("{} HDA, {sculptable} sculptable", hdas.len()))
}

fn hintost_laws() -> Outcome {
    let mut checked = 0;
    let mut paths_seen = 0;
    for f in fixtures() {
        let Ok(lab) = hintost(&f.hda) else { continue };
        let h = &f.hda;
        let paths = rooted_paths(h, 100_000).ok_or(format!("{}: too many paths", f.name))?;
        for p in &paths {
            let c = path_config(h, &lab.events, p);
            for m in elementary_homotopies(h, p).unwrap() {
                ensure(path_config(h, &lab.events, &m) == c, || format!("{}: homotopy changes {}", f.name, p.describe(h)))?;
            }
            let running: std::collections::BTreeSet<usize> = lab.events.multilabel(h, p.end()).into_iter().collect();
            ensure(c.running() == running, || format!("{}: running events at end of {}", f.name, p.describe(h)))?;
            if let Some(last) = p.steps.last() {
                let mut prefix = p.clone();
                prefix.steps.pop();
                let before = path_config(h, &lab.events, &prefix);
                let fresh = match last.dir {
                    Dir::S => c.s.len() == before.s.len() + 1 && c.t == before.t,
                    Dir::T => c.t.len() == before.t.len() + 1 && c.s == before.s,
                };
                ensure(fresh, || format!("{}: last step of {} adds no new event", f.name, p.describe(h)))?;
            }
        }
        paths_seen += paths.len();
        checked += 1;
    }
    Ok(format!("{checked} fixtures, {paths_seen} paths, 0 violations"))
}

fn bulk_and_grids() -> Outcome {
    for d in 0..=6 {
        let b = make_bulk(d, 12).map_err(|e| e.to_string())?;
        for n in 0..=d {
            let choose = (0..n).fold(1u64, |c, i| c * (d - i) as u64 / (i + 1) as u64);
            let want = choose << (d - n);
            ensure(bulk_count(d, n) == want && b.of_dim(n).len() as u64 == want, || format!("B^{d} has wrong {n}-cell count"))?;
        }
    }
    for d in 1..=5 {
        let g = grid_to_bulk(&make_grid(&vec![1; d]).unwrap()).unwrap();
        ensure(sculpture_isomorphism(&g, &bulk_sculpture(d, 12).unwrap()).is_some(), || format!("unit grid of dim {d}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut grids = 0;
    while grids < 20 {
        let dim = rng.gen_range(1..=3);
        let sizes: Vec<usize> = (0..dim).map(|_| rng.gen_range(1..=4)).collect();
        if sizes.iter().sum::<usize>() > 9 {
            continue;
        }
        let g = make_grid(&sizes).map_err(|e| e.to_string())?;
        g.check_gluing().map_err(|e| format!("{sizes:?}: {e}"))?;
        let sc = grid_to_bulk(&g).map_err(|e| format!("{sizes:?}: {e}"))?;
        ensure(validate_sculpture(&sc.hda, sc.d, &sc.em).is_empty(), || format!("{sizes:?}: invalid embedding"))?;
        grids += 1;
    }
    Ok("bulks up to d=6, unit grids up to d=5, 20 random grids".into())
}

fn random_complex(rng: &mut ChaCha8Rng, box_sizes: &[i64]) -> EuclideanComplex {
    let mut tops = vec![vec![0i64; box_sizes.len()]];
    let mut all = vec![Vec::new()];
    for &m in box_sizes {
        all = all.into_iter().flat_map(|x: Vec<i64>| (0..m).map(move |p| [x.clone(), vec![p]].concat())).collect();
    }
    for x in all {
        if x.iter().any(|&p| p != 0) && rng.gen_bool(0.6) {
            tops.push(x);
        }
    }
    let cubes = tops.into_iter().map(|a| Cube { b: a.iter().map(|p| p + 1).collect(), a });
    EuclideanComplex::new(box_sizes.len(), cubes).unwrap()
}

fn euclidean_bridge() -> Outcome {
    let mut complexes: Vec<(String, EuclideanComplex)> =
        vec![("l_shape".into(), l_shape_complex()), ("matchbox".into(), sculpture_to_complex(&matchbox()))];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..30 {
        let sizes: &[i64] = if i % 3 == 0 { &[2, 2, 2] } else { &[3, 3] };
        complexes.push((format!("random complex {i}"), random_complex(&mut rng, sizes)));
    }
    let mut decided = 0;
    for (name, c) in &complexes {
        let ch = complex_to_hda(c, &vec![0; c.dim]).map_err(|e| format!("{name}: {e}"))?;
        if is_connected(&ch.hda).is_err() {
            continue;
        }
        let d = decide_sculptable(&ch.hda, &cfg()).map_err(|e| format!("{name}: {e}"))?;
        ensure(d.verdict.is_sculptable(), || format!("{name}: {}", verdict_summary(&d.verdict)))?;
        ch.to_sculpture().map_err(|e| format!("{name}: {e}"))?;
        decided += 1;
    }
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/pv");
    let mut programs = vec![("two_mutex (built in)".to_string(), TWO_MUTEX_PV.to_string())];
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        programs.push((path.display().to_string(), std::fs::read_to_string(&path).map_err(|e| e.to_string())?));
    }
    for (name, text) in &programs {
        let m = pv_to_complex(&parse_pv(text).map_err(|e| format!("{name}: {e}"))?).map_err(|e| format!("{name}: {e}"))?;
        let d = decide_sculptable(&m.hda, &cfg()).map_err(|e| format!("{name}: {e}"))?;
        ensure(d.verdict.is_sculptable(), || format!("{name}: {}", verdict_summary(&d.verdict)))?;
    }
    // top squares of the two-mutex board: unit squares whose centre avoids
    // the open cross ]1,4[ x ]2,3[ and ]2,3[ x ]1,4[
    let m = pv_to_complex(&parse_pv(TWO_MUTEX_PV).unwrap()).unwrap();
    let inside = |v: f64, lo: f64, hi: f64| lo < v && v < hi;
    let mut squares = 0;
    for x in 0..4 {
        for y in 0..4 {
            let (cx, cy) = (x as f64 + 0.5, y as f64 + 0.5);
            let cross = (inside(cx, 1.0, 4.0) && inside(cy, 2.0, 3.0)) || (inside(cx, 2.0, 3.0) && inside(cy, 1.0, 4.0));
            squares += usize::from(!cross);
        }
    }
    ensure(m.complex.top_count(2) == squares, || format!("two mutex has {} squares, direct count {squares}", m.complex.top_count(2)))?;
    let forbidden = 16 - squares;
    let spans = m.complex.cubes.iter().filter(|c| c.dirr().len() == 2).all(|c| {
        let x = c.positions().unwrap();
        matches!((x[0], x[1]), (AxisPos::Span(_), AxisPos::Span(_)))
    });
    ensure(spans, || "two mutex squares are not unit squares".into())?;
    Ok(format!("{decided} complexes, {} programs, two mutex board 16 - {forbidden} = {squares} squares", programs.len()))
}

fn classifications() -> Outcome {
    let lp = inconsistent_loop();
    ensure(!is_consistent(&lp) && !lp.is_non_selflinked(), || "single loop square".into())?;
    let strip = twisted_strip();
    ensure(!is_consistent(&strip) && strip.is_non_selflinked(), || "twisted strip".into())?;
    let pinched = pinched_square();
    ensure(is_consistent(&pinched) && !pinched.is_non_selflinked(), || "pinched square".into())?;
    ensure(repeating_events(&pinched, &universal_events(&pinched)).is_some(), || "pinched square repeats no event".into())?;

    let fan = cyclic_fan();
    ensure(is_consistent(&fan) && !is_ordered(&fan), || "cyclic fan".into())?;
    let ev = universal_events(&fan);
    let names: Vec<String> = ev.orderedness().unwrap_err().into_iter().map(|c| ev.name(c).to_string()).collect();
    let start = names.iter().position(|n| n == "a").unwrap();
    let cycle: Vec<&str> = (0..3).map(|i| names[(start + i) % 3].as_str()).collect();
    ensure(cycle == ["a", "c", "b"], || format!("cycle {names:?}"))?;
    let rank = |order: [&str; 3]| -> Vec<usize> {
        (0..ev.len()).map(|c| order.iter().position(|n| *n == ev.name(c)).unwrap()).collect()
    };
    for order in [["a", "c", "b"], ["c", "b", "a"]] {
        let v = symmetric_variant(&fan, &rank(order)).map_err(|e| e.to_string())?;
        ensure(is_ordered(&v), || format!("variant for {order:?} is not ordered"))?;
    }
    ensure(is_ordered(&ordered_fan()), || "reoriented fan".into())?;
    Ok("three consistency examples, cyclic fan and its variants".into())
}

fn quotient_of_covering() -> Outcome {
    let mut checked = 0;
    for (name, sc) in corpus_sculptures() {
        if !sc.is_simplistic() {
            continue;
        }
        let lab = hintost(&sc.hda).map_err(|e| format!("{name}: {e}"))?;
        let p = event_equiv_sculpt(&sc);
        let q = lab.to_st().quotient(&p).map_err(|e| format!("{name}: {e}"))?;
        let coords = sc.class_coordinates();
        let perm: Vec<usize> = p.blocks().iter().map(|b| coords[b[0]]).collect();
        ensure(q.isomorphic_via(&sculpture_to_st(&sc), &perm), || format!("{name}: quotient differs from image"))?;
        checked += 1;
    }
    Ok(format!("{checked} simplistic sculptures"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("corpus verdicts", Duration::from_secs(5), corpus_verdicts),
        ("chu and sculpture round trips", Duration::from_secs(1), roundtrips),
        ("repair search agrees with the oracle", Duration::from_secs(60), oracle_equivalence),
        ("labelling laws", Duration::from_secs(60), hintost_laws),
        ("bulk and grid counts", Duration::from_secs(60), bulk_and_grids),
        ("Euclidean complexes and PV programs", Duration::from_secs(60), euclidean_bridge),
        ("consistency and orderedness examples", Duration::from_secs(60), classifications),
        ("image structure is the quotient covering", Duration::from_secs(60), quotient_of_covering),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let line = match outcome {
            Ok(detail) if took <= *limit => format!("PASS {} {name}: {detail} ({took:.2?} <= {limit:?})", i + 1),
            Ok(_) => format!("FAIL {} {name}: took {took:.2?}, limit {limit:?}", i + 1),
            Err(why) => format!("FAIL {} {name}: {why}", i + 1),
        };
        failed += usize::from(line.starts_with("FAIL"));
        println!("{line}");
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
}
