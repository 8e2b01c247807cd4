//! Hand-built fixtures with their expected verdicts.

use serde::{Deserialize, Serialize};

use crate::bulk::{bulk_sculpture, hda_from_tuples, Sculpture};
use crate::decide::Verdict;
use crate::error::Result;
use crate::euclid::{complex_to_hda, Cube, EuclideanComplex};
use crate::precubical::{Hda, RawPrecubical};
use crate::pv::{parse_pv, pv_to_complex};
use crate::st::{parse_tuple, StStructure, Tri};

/// Verdict class a fixture is expected to get.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Sculptable { d: usize },
    NotSculptable { witness: &'static str },
}

impl Expected {
    pub fn is_sculptable(self) -> bool {
        matches!(self, Expected::Sculptable { .. })
    }

    /// `Sculptable d=3` or `NotSculptable LabelClash`.
    pub fn summary(self) -> String {
        match self {
            Expected::Sculptable { d } => format!("Sculptable d={d}"),
            Expected::NotSculptable { witness } => format!("NotSculptable {witness}"),
        }
    }
}

pub fn verdict_summary(v: &Verdict) -> String {
    match v {
        Verdict::Sculptable { sculpture, .. } => format!("Sculptable d={}", sculpture.d),
        Verdict::NotSculptable(w) => format!("NotSculptable {}", w.kind()),
    }
}

/// Expectations as shipped next to the fixture files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectationJson {
    pub name: String,
    pub description: String,
    pub source: String,
    pub sculptable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unfolding: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub source: &'static str,
    pub hda: Hda,
    pub expected: Expected,
    /// Name of the fixture encoding this HDA's unfolding, if any.
    pub unfolding: Option<&'static str>,
    /// Known embeddings of `hda` into a bulk.
    pub sculptures: Vec<Sculpture>,
}

impl Fixture {
    pub fn expectation(&self) -> ExpectationJson {
        let (d, witness) = match self.expected {
            Expected::Sculptable { d } => (Some(d), None),
            Expected::NotSculptable { witness } => (None, Some(witness.to_string())),
        };
        ExpectationJson {
            name: self.name.into(),
            description: self.description.into(),
            source: self.source.into(),
            sculptable: self.expected.is_sculptable(),
            d,
            witness,
            unfolding: self.unfolding.map(String::from),
        }
    }

    /// Compares a verdict with the expectation; the error names both.
    pub fn check(&self, v: &Verdict) -> std::result::Result<(), String> {
        let (got, want) = (verdict_summary(v), self.expected.summary());
        if got == want {
            Ok(())
        } else {
            Err(format!("{}: got {got}, want {want}", self.name))
        }
    }
}

/// An ST-structure fixture.
#[derive(Debug, Clone)]
pub struct StFixture {
    pub name: &'static str,
    pub source: &'static str,
    pub st: StStructure,
    pub regular: bool,
}

/// Builds a one-dimensional HDA from `(edge, from, to)` triples; vertices are
/// declared in order of first appearance.
pub fn graph(edges: &[(&str, &str, &str)], initial: &str) -> RawPrecubical {
    let mut raw = RawPrecubical::default();
    let mut seen: Vec<&str> = vec![initial];
    raw.vertex(initial);
    for (_, a, b) in edges {
        for v in [a, b] {
            if !seen.contains(v) {
                seen.push(v);
                raw.vertex(v);
            }
        }
    }
    for (e, a, b) in edges {
        raw.edge(e, a, b);
    }
    raw.with_initial(initial)
}

fn hda(raw: &RawPrecubical) -> Hda {
    Hda::from_raw(raw).expect("fixture is a valid HDA")
}

fn tuples(list: &[&str]) -> Vec<Vec<Tri>> {
    list.iter().map(|s| parse_tuple(s).expect("fixture tuple")).collect()
}

/// `B^3` without its interior and its bottom face `0xx`, so that the
/// open side faces down.
pub fn matchbox_tuples() -> Vec<Vec<Tri>> {
    crate::bulk::bulk_tuples(3)
        .into_iter()
        .filter(|x| {
            let s = crate::st::tuple_string(x);
            s != "xxx" && s != "0xx"
        })
        .collect()
}

pub fn matchbox() -> Sculpture {
    let (hda, em) = hda_from_tuples(&matchbox_tuples(), None).expect("matchbox tuples are face closed");
    Sculpture::new(hda, 3, em).expect("matchbox embeds in the bulk")
}

/// Five square faces of a box glued along their edges, with corner `011`
/// and edge `x11` split apart when `broken`.
fn box_faces(broken: bool) -> RawPrecubical {
    let (ra, rb, ea, eb) = if broken { ("011a", "011b", "x11a", "x11b") } else { ("011", "011", "x11", "x11") };
    let mut raw = RawPrecubical::default();
    for v in ["000", "001", "010", "100", ra, rb, "101", "110", "111"] {
        if !raw.cells.get("0").is_some_and(|c| c.iter().any(|x| x == v)) {
            raw.vertex(v);
        }
    }
    let mut edges = vec![
        ("x00", "000", "100"),
        ("x01", "001", "101"),
        ("x10", "010", "110"),
        (ea, ra, "111"),
        ("0x0", "000", "010"),
        ("0x1", "001", ra),
        ("1x0", "100", "110"),
        ("1x1", "101", "111"),
        ("00x", "000", "001"),
        ("01x", "010", rb),
        ("10x", "100", "101"),
        ("11x", "110", "111"),
    ];
    if broken {
        edges.push((eb, rb, "111"));
    }
    for (e, a, b) in edges {
        raw.edge(e, a, b);
    }
    raw.add("xx0", &["0x0", "x00"], &["1x0", "x10"]);
    raw.add("xx1", &["0x1", "x01"], &["1x1", ea]);
    raw.add("x0x", &["00x", "x00"], &["10x", "x01"]);
    raw.add("x1x", &["01x", "x10"], &["11x", eb]);
    raw.add("1xx", &["10x", "1x0"], &["11x", "1x1"]);
    raw.with_initial("000")
}

pub fn broken_box() -> Hda {
    hda(&box_faces(true))
}

pub fn triangle() -> Hda {
    hda(&graph(&[("a", "0", "2"), ("b", "0", "1"), ("c", "1", "2")], "0"))
}

pub fn split_triangle() -> Hda {
    hda(&graph(&[("a", "0", "2b"), ("b", "0", "1"), ("c", "1", "2a")], "0"))
}

pub fn ab_loop() -> Hda {
    hda(&graph(&[("a", "0", "1"), ("b", "1", "0")], "0"))
}

/// The unfolding of the a/b loop cut off after `depth` transitions.
pub fn ab_chain(depth: usize) -> Hda {
    let names: Vec<(String, String, String)> = (0..depth)
        .map(|i| {
            let l = if i % 2 == 0 { "a" } else { "b" };
            (format!("{l}{}", i + 1), i.to_string(), (i + 1).to_string())
        })
        .collect();
    let edges: Vec<(&str, &str, &str)> = names.iter().map(|(e, a, b)| (e.as_str(), a.as_str(), b.as_str())).collect();
    hda(&graph(&edges, "0"))
}

/// Two agents `a` and `d`; `d` leads to a choice of `b` or `c`, made either
/// when `d` starts (two lower `d` transitions) or after `a` ends.
pub fn speed_game() -> Hda {
    let mut raw = graph(
        &[
            ("d:00-10a", "00", "10a"),
            ("b:10a-20a", "10a", "20a"),
            ("d:00-10b", "00", "10b"),
            ("c:10b-20b", "10b", "20b"),
            ("d:01-11", "01", "11"),
            ("b:11-21a", "11", "21a"),
            ("c:11-21b", "11", "21b"),
            ("a:00-01", "00", "01"),
            ("a:10a-11", "10a", "11"),
            ("a:10b-11", "10b", "11"),
            ("a:20a-21a", "20a", "21a"),
            ("a:20b-21b", "20b", "21b"),
        ],
        "00",
    );
    raw.add("da", &["a:00-01", "d:00-10a"], &["a:10a-11", "d:01-11"]);
    raw.add("ba", &["a:10a-11", "b:10a-20a"], &["a:20a-21a", "b:11-21a"]);
    raw.add("db", &["a:00-01", "d:00-10b"], &["a:10b-11", "d:01-11"]);
    raw.add("cb", &["a:10b-11", "c:10b-20b"], &["a:20b-21b", "c:11-21b"]);
    hda(&raw)
}

/// Asymmetric conflict read with one `a` event: `a` and `b` interleave but
/// `b` cannot start after `a`.
pub fn asym_conflict_b2() -> Sculpture {
    let (hda, em) = hda_from_tuples(&tuples(&["00", "x0", "10", "0x", "01", "x1", "11"]), None).unwrap();
    Sculpture::new(hda, 2, em).unwrap()
}

/// Asymmetric conflict with the two `a` transitions as distinct events.
pub fn asym_conflict_b3() -> Sculpture {
    let (hda, em) = hda_from_tuples(&tuples(&["000", "00x", "001", "0x0", "010", "x10", "110"]), None).unwrap();
    Sculpture::new(hda, 3, em).unwrap()
}

pub fn asym_conflict_st() -> StStructure {
    StStructure::from_names(
        &["a", "b"],
        &[
            (&[], &[]),
            (&["a"], &[]),
            (&["a"], &["a"]),
            (&["b"], &[]),
            (&["b"], &["b"]),
            (&["a", "b"], &["b"]),
            (&["a", "b"], &["a", "b"]),
        ],
    )
    .unwrap()
}

pub fn empty_square() -> Hda {
    hda(&graph(&[("q1", "00", "10"), ("q2", "00", "01"), ("q3", "01", "11"), ("q4", "10", "11")], "00"))
}

pub fn empty_square_sculpture() -> Sculpture {
    let h = empty_square();
    let img = |id: &str| -> &str {
        match id {
            "00" => "00",
            "10" => "10",
            "01" => "01",
            "11" => "11",
            "q1" => "x0",
            "q2" => "0x",
            "q3" => "x1",
            "q4" => "1x",
            _ => unreachable!(),
        }
    };
    let em = h.cells().map(|q| parse_tuple(img(h.id(q))).unwrap()).collect();
    Sculpture::new(h, 2, em).unwrap()
}

pub fn filled_square() -> Hda {
    let mut raw = graph(&[("q1", "00", "10"), ("q2", "00", "01"), ("q3", "01", "11"), ("q4", "10", "11")], "00");
    raw.add("q", &["q2", "q1"], &["q4", "q3"]);
    hda(&raw)
}

/// Twelve states: an inner interleaving square and four `a` transitions to
/// an outer frame whose upper-right corners only meet through a shared state.
pub fn wheel() -> Hda {
    hda(&graph(
        &[
            ("9-5", "9", "5"),
            ("5-6", "5", "6"),
            ("9-10", "9", "10"),
            ("10-6", "10", "6"),
            ("11-1", "11", "1"),
            ("1-2", "1", "2"),
            ("2-3", "2", "3"),
            ("7-3", "7", "3"),
            ("11-12", "11", "12"),
            ("12-7", "12", "7"),
            ("5-1", "5", "1"),
            ("6-2", "6", "2"),
            ("6-7", "6", "7"),
            ("9-11", "9", "11"),
            ("10-12", "10", "12"),
        ],
        "9",
    ))
}

/// A variation of the wheel that is sculptable, but only after the search
/// revises its first choice.
pub fn backtrack_wheel() -> Hda {
    hda(&graph(
        &[
            ("1-2", "1", "2"),
            ("5-1", "5", "1"),
            ("6-2", "6", "2"),
            ("2-3", "2", "3"),
            ("7-3", "7", "3"),
            ("1-4", "1", "4"),
            ("5-6", "5", "6"),
            ("6-7", "6", "7"),
            ("8-4", "8", "4"),
            ("11-8", "11", "8"),
            ("9-5", "9", "5"),
            ("9-10", "9", "10"),
            ("10-6", "10", "6"),
            ("9-11", "9", "11"),
            ("11-12", "11", "12"),
            ("12-7", "12", "7"),
            ("10-12", "10", "12"),
        ],
        "9",
    ))
}

/// The event names the intended labelling gives the backtracking example.
pub const BACKTRACK_LABELS: [(&str, &[&str]); 4] = [
    ("a", &["2-3", "1-4", "6-7", "9-11", "10-12"]),
    ("b", &["5-1", "6-2", "7-3", "11-8"]),
    ("c", &["8-4", "9-5", "10-6", "12-7"]),
    ("d", &["1-2", "5-6", "9-10", "11-12"]),
];

/// One vertex, one loop, one square with all four faces on the loop.
pub fn inconsistent_loop() -> Hda {
    let mut raw = RawPrecubical::default();
    raw.vertex("q0").edge("q1", "q0", "q0").add("q2", &["q1", "q1"], &["q1", "q1"]);
    hda(&raw.with_initial("q0"))
}

/// Three squares in a row where the first square's left edge is also the
/// third square's bottom edge.
pub fn twisted_strip() -> Hda {
    let mut raw = graph(
        &[
            ("e", "00", "01"),
            ("b1", "00", "10"),
            ("u1", "01", "11"),
            ("m1", "10", "11"),
            ("b2", "10", "00"),
            ("u2", "11", "21"),
            ("m2", "00", "21"),
            ("u3", "21", "31"),
            ("m3", "01", "31"),
        ],
        "00",
    );
    raw.add("q", &["e", "b1"], &["m1", "u1"]);
    raw.add("q'", &["m1", "b2"], &["m2", "u2"]);
    raw.add("q''", &["m2", "e"], &["m3", "u3"]);
    hda(&raw)
}

/// A square whose lower-right and upper-left corners are one state.
pub fn pinched_square() -> Hda {
    let mut raw = graph(&[("c", "x", "v"), ("a", "x", "v"), ("b", "v", "y"), ("d", "v", "y")], "x");
    raw.add("q", &["a", "c"], &["b", "d"]);
    hda(&raw)
}

/// Three squares around the initial state, with face indices that make the
/// event order cyclic.
pub fn cyclic_fan() -> Hda {
    let mut raw = graph(
        &[
            ("a", "0", "1"),
            ("b", "0", "5"),
            ("c", "0", "3"),
            ("d", "1", "2"),
            ("e", "3", "2"),
            ("f", "3", "4"),
            ("g", "5", "4"),
            ("h", "5", "6"),
            ("i", "1", "6"),
        ],
        "0",
    );
    raw.add("A", &["c", "a"], &["d", "e"]);
    raw.add("B", &["a", "b"], &["h", "i"]);
    raw.add("C", &["b", "c"], &["f", "g"]);
    hda(&raw)
}

/// The cyclic fan with the face indices of `A` swapped.
pub fn ordered_fan() -> Hda {
    let mut raw = graph(
        &[
            ("a", "0", "1"),
            ("b", "0", "5"),
            ("c", "0", "3"),
            ("d", "1", "2"),
            ("e", "3", "2"),
            ("f", "3", "4"),
            ("g", "5", "4"),
            ("h", "5", "6"),
            ("i", "1", "6"),
        ],
        "0",
    );
    raw.add("A", &["a", "c"], &["e", "d"]);
    raw.add("B", &["a", "b"], &["h", "i"]);
    raw.add("C", &["b", "c"], &["f", "g"]);
    hda(&raw)
}

pub const TWO_MUTEX_PV: &str = "\
# two processes taking two locks in opposite order
P(a) P(b) V(b) V(a)
P(b) P(a) V(a) V(b)
";

pub fn two_mutex() -> Hda {
    pv_to_complex(&parse_pv(TWO_MUTEX_PV).expect("fixture program parses"))
        .expect("fixture program is small")
        .hda
}

/// Three unit squares forming an L inside a 2×2 box.
pub fn l_shape_complex() -> EuclideanComplex {
    let sq = |x: i64, y: i64| Cube { a: vec![x, y], b: vec![x + 1, y + 1] };
    EuclideanComplex::new(2, [sq(0, 0), sq(1, 0), sq(0, 1)]).unwrap()
}

pub fn l_shape() -> Hda {
    complex_to_hda(&l_shape_complex(), &[0, 0]).expect("L shape is a complex").hda
}

/// Every fixture, in a fixed order.
pub fn fixtures() -> Vec<Fixture> {
    let mb = matchbox();
    let b3 = bulk_sculpture(3, 3).expect("small bulk");
    let ab2 = asym_conflict_b2();
    let ab3 = asym_conflict_b3();
    let sq = empty_square_sculpture();
    use Expected::*;
    let f = |name, description, source, hda: Hda, expected, unfolding, sculptures| Fixture {
        name,
        description,
        source,
        hda,
        expected,
        unfolding,
        sculptures,
    };
    vec![
        f("matchbox", "open box, five faces of a cube", "matchbox drawing in the sculpting overview", mb.hda.clone(), Sculptable { d: 3 }, Some("broken_box"), vec![mb]),
        f("broken_box", "the matchbox with one corner split", "broken box drawing and its corner annotations", broken_box(), NotSculptable { witness: "LabelClash" }, Some("broken_box"), vec![]),
        f("ab_loop", "a then b, forever", "two state loop among the unsculptable pairs", ab_loop(), NotSculptable { witness: "RepeatingEvents" }, Some("ab_chain"), vec![]),
        f("ab_chain", "a b a, the loop unrolled three times", "unfolding of the two state loop", ab_chain(3), Sculptable { d: 3 }, Some("ab_chain"), vec![]),
        f("triangle", "a against b then c", "triangle among the unsculptable pairs", triangle(), NotSculptable { witness: "LengthMismatch" }, Some("split_triangle"), vec![]),
        f("split_triangle", "the triangle with its end state split", "unfolding of the triangle", split_triangle(), Sculptable { d: 3 }, Some("split_triangle"), vec![]),
        f("speed_game", "angelic against demonic choice", "speed game of angelic against demonic choice", speed_game(), NotSculptable { witness: "LabelClash" }, Some("speed_game"), vec![]),
        f("asym_conflict_b2", "asymmetric conflict, one a event", "HDA readings of the asymmetric conflict", ab2.hda.clone(), Sculptable { d: 3 }, None, vec![ab2]),
        f("asym_conflict_b3", "asymmetric conflict, two a events", "HDA readings of the asymmetric conflict", ab3.hda.clone(), Sculptable { d: 3 }, None, vec![ab3]),
        f("empty_square", "two interleavings without a square", "empty square and its path covering", empty_square(), Sculptable { d: 2 }, None, vec![sq]),
        f("filled_square", "one square with its boundary", "single filled square", filled_square(), Sculptable { d: 2 }, None, vec![]),
        f("wheel", "one dimensional, forced merges end in a clash", "wheel whose forced merges clash", wheel(), NotSculptable { witness: "LabelClash" }, None, vec![]),
        f("backtrack_wheel", "sculptable variation of the wheel", "wheel variant that needs backtracking", backtrack_wheel(), Sculptable { d: 4 }, None, vec![]),
        f("inconsistent_loop", "a square on a single loop", "inconsistent loop among the consistency examples", inconsistent_loop(), NotSculptable { witness: "NotOrdered" }, None, vec![]),
        f("twisted_strip", "three squares sharing an extra edge", "strip among the consistency examples", twisted_strip(), NotSculptable { witness: "NotOrdered" }, None, vec![]),
        f("pinched_square", "a square with two opposite corners identified", "pinched square among the consistency examples", pinched_square(), NotSculptable { witness: "RepeatingEvents" }, None, vec![]),
        f("cyclic_fan", "three squares with a cyclic event order", "fan among the orderedness examples", cyclic_fan(), NotSculptable { witness: "NotOrdered" }, None, vec![]),
        f("ordered_fan", "the cyclic fan with one square reoriented", "fan among the orderedness examples", ordered_fan(), Sculptable { d: 3 }, None, vec![]),
        f("two_mutex", "two processes sharing two locks", "two mutex PV program", two_mutex(), Sculptable { d: 8 }, None, vec![]),
        f("l_shape", "three unit squares in a 2x2 box", "Euclidean complex that is not a grid", l_shape(), Sculptable { d: 4 }, None, vec![]),
        f("bulk3", "the whole three dimensional bulk", "the bulk itself", b3.hda.clone(), Sculptable { d: 3 }, Some("bulk3"), vec![b3]),
    ]
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|f| f.name == name)
}

/// ST-structure fixtures.
pub fn st_fixtures() -> Result<Vec<StFixture>> {
    let complete = StStructure::new(
        vec!["1".into(), "2".into()],
        crate::bulk::bulk_tuples(2).iter().map(|x| crate::st::tuple_to_config(x)),
    )?;
    let covering = crate::hintost::hintost(&empty_square())?.to_st();
    Ok(vec![
        StFixture { name: "asym_conflict", source: "asymmetric conflict as configurations", st: asym_conflict_st(), regular: true },
        StFixture { name: "complete_two", source: "all configurations on two events", st: complete, regular: true },
        StFixture { name: "empty_square_covering", source: "covering of the empty square", st: covering, regular: true },
    ])
}

/// Sculptability table: (fixture, its unfolding) for each combination of
/// sculptable and not sculptable.
pub const UNFOLDING_CASES: [(&str, &str, &str); 5] = [
    ("acyclic, not sculptable", "broken_box", "broken_box"),
    ("not sculptable, unfolding sculptable", "triangle", "split_triangle"),
    ("sculptable, unfolding not sculptable", "matchbox", "broken_box"),
    ("sculptable, unfolding sculptable", "split_triangle", "split_triangle"),
    ("neither sculptable", "speed_game", "speed_game"),
];


#[cfg(test)]
mod verdicts {
    use super::*;
    use crate::decide::{decide_sculptable, SearchConfig};

    #[test]
    fn expected_verdicts() {
        let mut bad = Vec::new();
        for f in fixtures() {
            let t = std::time::Instant::now();
            let d = decide_sculptable(&f.hda, &SearchConfig::default()).unwrap();
            eprintln!("{:20} {:30} {:?} {:?}", f.name, verdict_summary(&d.verdict), t.elapsed(), d.stats);
            if let Err(e) = f.check(&d.verdict) {
                bad.push(e);
            }
        }
        assert!(bad.is_empty(), "{bad:#?}");
    }
}
