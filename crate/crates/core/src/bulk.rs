//! The bulk `B^d`, sculptures, and their correspondence with ST-structures.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::universal_events;
use crate::partition::Partition;
use crate::precubical::{Cell, Dir, Hda, Morphism, PrecubicalSet, RawPrecubical};
use crate::st::{config_to_tuple, parse_tuple, tuple_string, tuple_to_config, StStructure, Tri};

/// Default largest bulk dimension that is materialized.
pub const DEFAULT_BULK_BOUND: usize = 12;

pub fn half_count(x: &[Tri]) -> usize {
    x.iter().filter(|&&v| v == Tri::Half).count()
}

/// `α_k` on a tuple: the `k`-th `½` becomes 0 (`s`) or 1 (`t`).
pub fn tuple_face(x: &[Tri], dir: Dir, k: usize) -> Option<Vec<Tri>> {
    let pos = x.iter().enumerate().filter(|(_, &v)| v == Tri::Half).nth(k.checked_sub(1)?)?.0;
    let mut y = x.to_vec();
    y[pos] = if dir == Dir::S { Tri::Zero } else { Tri::One };
    Some(y)
}

/// Id of a bulk cell: its tuple string (`()` for the single cell of `B^0`).
pub fn bulk_id(x: &[Tri]) -> String {
    if x.is_empty() {
        "()".into()
    } else {
        tuple_string(x)
    }
}

/// Builds an HDA from a face-closed set of tuples, named by [`bulk_id`] unless
/// `names` is given. Cells are ordered by dimension, then tuple.
pub fn hda_from_tuples(tuples: &[Vec<Tri>], names: Option<&HashMap<Vec<Tri>, String>>) -> Result<(Hda, Vec<Vec<Tri>>)> {
    let mut sorted: Vec<Vec<Tri>> = tuples.to_vec();
    sorted.sort_by(|a, b| (half_count(a), a).cmp(&(half_count(b), b)));
    sorted.dedup();
    let index: HashMap<&Vec<Tri>, usize> = sorted.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut s = Vec::new();
    let mut t = Vec::new();
    for x in &sorted {
        let n = half_count(x);
        let mut fs = Vec::new();
        let mut ft = Vec::new();
        for k in 1..=n {
            for (dir, out) in [(Dir::S, &mut fs), (Dir::T, &mut ft)] {
                let f = tuple_face(x, dir, k).unwrap();
                let i = index.get(&f).ok_or_else(|| Error::InvalidSculpture(format!("face {} of {} missing", tuple_string(&f), tuple_string(x))))?;
                out.push(Cell(*i));
            }
        }
        s.push(fs);
        t.push(ft);
    }
    let ids = sorted
        .iter()
        .map(|x| names.and_then(|m| m.get(x).cloned()).unwrap_or_else(|| bulk_id(x)))
        .collect();
    let dims = sorted.iter().map(|x| half_count(x)).collect();
    let set = PrecubicalSet::from_tables(ids, dims, s, t);
    let zero = sorted.first().cloned().unwrap_or_default();
    let init = index
        .get(&vec![Tri::Zero; zero.len()])
        .copied()
        .ok_or_else(|| Error::BadInitial("no all-zero cell".into()))?;
    Ok((Hda::new(set, Cell(init))?, sorted))
}

/// All tuples of `B^d`.
pub fn bulk_tuples(d: usize) -> Vec<Vec<Tri>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|x| {
                [Tri::Zero, Tri::Half, Tri::One].into_iter().map(move |v| {
                    let mut y = x.clone();
                    y.push(v);
                    y
                })
            })
            .collect();
    }
    out
}

pub fn make_bulk(d: usize, bound: usize) -> Result<Hda> {
    if d > bound {
        return Err(Error::ResourceLimit(format!("bulk dimension {d} exceeds bound {bound}")));
    }
    Ok(hda_from_tuples(&bulk_tuples(d), None)?.0)
}

/// Number of n-cells of `B^d`: `C(d, n) · 2^(d-n)`.
pub fn bulk_count(d: usize, n: usize) -> u64 {
    if n > d {
        return 0;
    }
    let mut c: u64 = 1;
    for i in 0..n {
        c = c * (d - i) as u64 / (i + 1) as u64;
    }
    c << (d - n)
}

/// Image of a tuple under the embedding `B^d → B^d'` along a strictly
/// increasing coordinate map `b` (0-based), padding with 0.
pub fn embed_tuple(x: &[Tri], b: &[usize], target: usize) -> Vec<Tri> {
    let mut y = vec![Tri::Zero; target];
    for (i, &v) in x.iter().enumerate() {
        y[b[i]] = v;
    }
    y
}

/// The embedding as a morphism between materialized bulks.
pub fn bulk_embedding(b: &[usize], source: &Hda, target: &Hda, d_target: usize) -> Result<Morphism> {
    if b.windows(2).any(|w| w[0] >= w[1]) || b.last().is_some_and(|&m| m >= d_target) {
        return Err(Error::Unsupported("coordinate map must be strictly increasing and in range".into()));
    }
    let mut map = Vec::new();
    for q in source.cells() {
        let x = parse_bulk_id(source.id(q))?;
        map.push(target.cell(&bulk_id(&embed_tuple(&x, b, d_target)))?);
    }
    Ok(Morphism { map })
}

pub fn parse_bulk_id(id: &str) -> Result<Vec<Tri>> {
    if id == "()" {
        Ok(Vec::new())
    } else {
        parse_tuple(id)
    }
}

/// An HDA together with an injective, initial-preserving morphism into `B^d`,
/// given cell by cell as tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sculpture {
    pub hda: Hda,
    pub d: usize,
    pub em: Vec<Vec<Tri>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum SculptureDefect {
    Width { cell: String },
    Dimension { cell: String },
    Face { cell: String, dir: Dir, k: usize },
    Initial,
    NotInjective { a: String, b: String },
}

pub fn validate_sculpture(hda: &Hda, d: usize, em: &[Vec<Tri>]) -> Vec<SculptureDefect> {
    let mut out = Vec::new();
    if em.len() != hda.len() {
        out.push(SculptureDefect::Width { cell: "<embedding size>".into() });
        return out;
    }
    for q in hda.cells() {
        let x = &em[q.0];
        let id = hda.id(q).to_string();
        if x.len() != d {
            out.push(SculptureDefect::Width { cell: id });
            continue;
        }
        if half_count(x) != hda.dim(q) {
            out.push(SculptureDefect::Dimension { cell: id });
            continue;
        }
        for k in 1..=hda.dim(q) {
            for dir in [Dir::S, Dir::T] {
                let f = hda.face(dir, k, q).unwrap();
                if tuple_face(x, dir, k).as_ref() != Some(&em[f.0]) {
                    out.push(SculptureDefect::Face { cell: id.clone(), dir, k });
                }
            }
        }
    }
    if em[hda.initial.0].iter().any(|&v| v != Tri::Zero) {
        out.push(SculptureDefect::Initial);
    }
    let mut seen: HashMap<&Vec<Tri>, Cell> = HashMap::new();
    for q in hda.cells() {
        if let Some(&p) = seen.get(&em[q.0]) {
            out.push(SculptureDefect::NotInjective { a: hda.id(p).into(), b: hda.id(q).into() });
        } else {
            seen.insert(&em[q.0], q);
        }
    }
    out
}

/// JSON form of a sculpture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SculptureJson {
    pub hda: RawPrecubical,
    pub d: usize,
    pub embedding: IndexMap<String, String>,
}

impl Sculpture {
    pub fn new(hda: Hda, d: usize, em: Vec<Vec<Tri>>) -> Result<Self> {
        let defects = validate_sculpture(&hda, d, &em);
        if let Some(first) = defects.first() {
            return Err(Error::InvalidSculpture(format!("{first:?} ({} defects)", defects.len())));
        }
        Ok(Self { hda, d, em })
    }

    pub fn image(&self, q: Cell) -> &[Tri] {
        &self.em[q.0]
    }

    pub fn to_json(&self) -> SculptureJson {
        SculptureJson {
            hda: self.hda.to_raw(),
            d: self.d,
            embedding: self.hda.cells().map(|q| (self.hda.id(q).to_string(), tuple_string(&self.em[q.0]))).collect(),
        }
    }

    pub fn from_json(json: &SculptureJson) -> Result<Self> {
        let hda = Hda::from_raw(&json.hda)?;
        let mut em = Vec::new();
        for q in hda.cells() {
            let s = json
                .embedding
                .get(hda.id(q))
                .ok_or_else(|| Error::InvalidSculpture(format!("no image for {}", hda.id(q))))?;
            em.push(parse_tuple(s)?);
        }
        Self::new(hda, json.d, em)
    }

    /// Drops bulk coordinates that are 0 in every image cell.
    pub fn simplify(&self) -> Sculpture {
        let keep: Vec<usize> = (0..self.d).filter(|&i| self.em.iter().any(|x| x[i] != Tri::Zero)).collect();
        let em = self.em.iter().map(|x| keep.iter().map(|&i| x[i]).collect()).collect();
        Sculpture { hda: self.hda.clone(), d: keep.len(), em }
    }

    pub fn is_simplistic(&self) -> bool {
        self.simplify().d == self.d
    }

    /// Bulk coordinate (0-based) of every universal event class.
    pub fn class_coordinates(&self) -> Vec<usize> {
        let ev = universal_events(&self.hda);
        (0..ev.len())
            .map(|c| {
                let e = ev.members(c)[0];
                self.em[e.0].iter().position(|&v| v == Tri::Half).unwrap()
            })
            .collect()
    }
}

/// Identifies universal events whose images occupy the same bulk coordinate.
pub fn event_equiv_sculpt(sc: &Sculpture) -> Partition {
    Partition::from_labels(&sc.class_coordinates())
}

/// The configurations of a regular ST-structure as cells of the bulk
/// indexed by its events in list order.
pub fn st_to_sculpture(st: &StStructure) -> Result<Sculpture> {
    let report = st.check_regular();
    if !report.is_regular() {
        let why = if !report.rooted {
            "not rooted"
        } else if !report.connected() {
            "not connected"
        } else {
            "not closed under single events"
        };
        return Err(Error::NotRegular(why.into()));
    }
    let n = st.events().len();
    let tuples: Vec<Vec<Tri>> = st.configs().iter().map(|c| config_to_tuple(c, n)).collect();
    let (hda, sorted) = hda_from_tuples(&tuples, None)?;
    Sculpture::new(hda, n, sorted)
}

/// Events are named `1 … d` after the bulk coordinates.
pub fn sculpture_to_st(sc: &Sculpture) -> StStructure {
    let events = (1..=sc.d).map(|i| i.to_string()).collect();
    StStructure::new(events, sc.em.iter().map(|x| tuple_to_config(x))).expect("bulk tuples give valid configurations")
}

/// The unique cell bijection `f` with `em_b ∘ f = em_a`, if it is an isomorphism.
pub fn sculpture_isomorphism(a: &Sculpture, b: &Sculpture) -> Option<Morphism> {
    if a.d != b.d || a.hda.len() != b.hda.len() {
        return None;
    }
    let lookup: BTreeMap<&Vec<Tri>, Cell> = b.hda.cells().map(|q| (&b.em[q.0], q)).collect();
    let map: Vec<Cell> = a.hda.cells().map(|q| lookup.get(&a.em[q.0]).copied()).collect::<Option<_>>()?;
    let f = Morphism { map };
    (f.is_injective() && f.check_hda(&a.hda, &b.hda).is_ok()).then_some(f)
}

/// The inclusion of the bulk into itself.
pub fn bulk_sculpture(d: usize, bound: usize) -> Result<Sculpture> {
    let hda = make_bulk(d, bound)?;
    let em = hda.cells().map(|q| parse_bulk_id(hda.id(q))).collect::<Result<_>>()?;
    Sculpture::new(hda, d, em)
}
