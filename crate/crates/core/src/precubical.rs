//! Precubical sets, face words and higher dimensional automata.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of a cube a face map selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    #[serde(rename = "s")]
    S,
    #[serde(rename = "t")]
    T,
}

impl Dir {
    pub fn letter(self) -> char {
        match self {
            Dir::S => 's',
            Dir::T => 't',
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Index of a cell inside its [`PrecubicalSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell(pub usize);

/// One letter `α_i` of a face word, with a 1-based index.
pub type Face = (Dir, usize);

/// Unvalidated, string-keyed precubical set as it appears in JSON files.
///
/// `cells` maps a dimension (as a decimal string) to the ids of that
/// dimension; `s` and `t` list the faces `α_1 … α_n` of every cell of
/// dimension `n ≥ 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPrecubical {
    pub cells: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub s: IndexMap<String, Vec<String>>,
    #[serde(default)]
    pub t: IndexMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<String>,
}

impl RawPrecubical {
    /// Adds a cell with its face lists; convenient for hand-built fixtures.
    pub fn add(&mut self, id: &str, s: &[&str], t: &[&str]) -> &mut Self {
        let dim = s.len().to_string();
        self.cells.entry(dim).or_default().push(id.to_string());
        if !s.is_empty() || !t.is_empty() {
            self.s.insert(id.to_string(), s.iter().map(|x| x.to_string()).collect());
            self.t.insert(id.to_string(), t.iter().map(|x| x.to_string()).collect());
        }
        self
    }

    pub fn vertex(&mut self, id: &str) -> &mut Self {
        self.add(id, &[], &[])
    }

    pub fn edge(&mut self, id: &str, from: &str, to: &str) -> &mut Self {
        self.add(id, &[from], &[to])
    }

    pub fn with_initial(mut self, id: &str) -> Self {
        self.initial = Some(id.to_string());
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("raw precubical serializes")
    }
}

/// A single problem found by [`validate_precubical`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    BadDimension { key: String },
    DuplicateId { id: String },
    UnknownCell { cell: String, referenced: String },
    FacesOnUndeclared { cell: String },
    WrongArity { cell: String, dir: Dir, expected: usize, found: usize },
    WrongFaceDimension { cell: String, dir: Dir, index: usize, face: String },
    Identity { cell: String, k: usize, l: usize, alpha: Dir, beta: Dir, lhs: String, rhs: String },
    UnknownInitial { id: String },
    InitialNotVertex { id: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadDimension { key } => write!(f, "dimension key {key:?} is not a number"),
            Violation::DuplicateId { id } => write!(f, "cell {id} declared twice"),
            Violation::UnknownCell { cell, referenced } => {
                write!(f, "cell {cell} refers to undeclared cell {referenced}")
            }
            Violation::FacesOnUndeclared { cell } => write!(f, "faces given for undeclared cell {cell}"),
            Violation::WrongArity { cell, dir, expected, found } => {
                write!(f, "cell {cell} has {found} {dir}-faces, expected {expected}")
            }
            Violation::WrongFaceDimension { cell, dir, index, face } => {
                write!(f, "{dir}_{index}({cell}) = {face} has the wrong dimension")
            }
            Violation::Identity { cell, k, l, alpha, beta, lhs, rhs } => write!(
                f,
                "{alpha}_{k} {beta}_{l} {cell} = {lhs} but {beta}_{} {alpha}_{k} {cell} = {rhs}",
                l - 1
            ),
            Violation::UnknownInitial { id } => write!(f, "initial cell {id} is not declared"),
            Violation::InitialNotVertex { id } => write!(f, "initial cell {id} is not a 0-cell"),
        }
    }
}

/// Outcome of validating a raw precubical set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks arities, dimensions, dangling references and the cubical identities.
pub fn validate_precubical(raw: &RawPrecubical) -> ValidationReport {
    let mut out = Vec::new();
    let mut dim_of: HashMap<&str, usize> = HashMap::new();
    for (key, ids) in &raw.cells {
        let Ok(dim) = key.parse::<usize>() else {
            out.push(Violation::BadDimension { key: key.clone() });
            continue;
        };
        for id in ids {
            if dim_of.insert(id.as_str(), dim).is_some() {
                out.push(Violation::DuplicateId { id: id.clone() });
            }
        }
    }
    for map in [&raw.s, &raw.t] {
        for id in map.keys() {
            if !dim_of.contains_key(id.as_str()) {
                out.push(Violation::FacesOnUndeclared { cell: id.clone() });
            }
        }
    }

    let mut arity_ok = true;
    for ids in raw.cells.values() {
        for id in ids {
            let dim = dim_of[id.as_str()];
            for (dir, map) in [(Dir::S, &raw.s), (Dir::T, &raw.t)] {
                let faces = map.get(id).map(Vec::as_slice).unwrap_or(&[]);
                if faces.len() != dim {
                    arity_ok = false;
                    out.push(Violation::WrongArity {
                        cell: id.clone(),
                        dir,
                        expected: dim,
                        found: faces.len(),
                    });
                    continue;
                }
                for (k, face) in faces.iter().enumerate() {
                    match dim_of.get(face.as_str()) {
                        None => {
                            arity_ok = false;
                            out.push(Violation::UnknownCell { cell: id.clone(), referenced: face.clone() });
                        }
                        Some(&fd) if fd + 1 != dim => {
                            arity_ok = false;
                            out.push(Violation::WrongFaceDimension {
                                cell: id.clone(),
                                dir,
                                index: k + 1,
                                face: face.clone(),
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }

    if arity_ok {
        let face = |dir: Dir, k: usize, id: &str| -> String {
            let map = if dir == Dir::S { &raw.s } else { &raw.t };
            map[id][k - 1].clone()
        };
        for ids in raw.cells.values() {
            for id in ids {
                let n = dim_of[id.as_str()];
                for l in 2..=n {
                    for k in 1..l {
                        for alpha in [Dir::S, Dir::T] {
                            for beta in [Dir::S, Dir::T] {
                                let lhs = face(alpha, k, &face(beta, l, id));
                                let rhs = face(beta, l - 1, &face(alpha, k, id));
                                if lhs != rhs {
                                    out.push(Violation::Identity {
                                        cell: id.clone(),
                                        k,
                                        l,
                                        alpha,
                                        beta,
                                        lhs,
                                        rhs,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    if let Some(init) = &raw.initial {
        match dim_of.get(init.as_str()) {
            None => out.push(Violation::UnknownInitial { id: init.clone() }),
            Some(&d) if d != 0 => out.push(Violation::InitialNotVertex { id: init.clone() }),
            Some(_) => {}
        }
    }
    ValidationReport { violations: out }
}

/// A validated precubical set with integer cell handles.
///
/// Cells are stored by dimension, and within a dimension in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecubicalSet {
    ids: Vec<String>,
    dims: Vec<usize>,
    s: Vec<Vec<Cell>>,
    t: Vec<Vec<Cell>>,
    by_dim: Vec<Vec<Cell>>,
    index: HashMap<String, Cell>,
    cofaces: Vec<Vec<(Dir, usize, Cell)>>,
}

impl PrecubicalSet {
    pub fn from_raw(raw: &RawPrecubical) -> Result<Self> {
        let mut report = validate_precubical(raw);
        report.violations.retain(|v| {
            !matches!(v, Violation::UnknownInitial { .. } | Violation::InitialNotVertex { .. })
        });
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        let mut keyed: Vec<(usize, &Vec<String>)> =
            raw.cells.iter().map(|(k, v)| (k.parse().unwrap(), v)).collect();
        keyed.sort_by_key(|(d, _)| *d);
        let mut ids = Vec::new();
        let mut dims = Vec::new();
        for (d, list) in keyed {
            for id in list {
                ids.push(id.clone());
                dims.push(d);
            }
        }
        let index: HashMap<String, Cell> =
            ids.iter().enumerate().map(|(i, id)| (id.clone(), Cell(i))).collect();
        let lookup = |map: &IndexMap<String, Vec<String>>, id: &str| -> Vec<Cell> {
            map.get(id).map(|v| v.iter().map(|f| index[f]).collect()).unwrap_or_default()
        };
        let s = ids.iter().map(|id| lookup(&raw.s, id)).collect();
        let t = ids.iter().map(|id| lookup(&raw.t, id)).collect();
        Ok(Self::assemble(ids, dims, s, t, index))
    }

    fn assemble(
        ids: Vec<String>,
        dims: Vec<usize>,
        s: Vec<Vec<Cell>>,
        t: Vec<Vec<Cell>>,
        index: HashMap<String, Cell>,
    ) -> Self {
        let top = dims.iter().copied().max().map_or(0, |d| d + 1);
        let mut by_dim = vec![Vec::new(); top];
        for (i, &d) in dims.iter().enumerate() {
            by_dim[d].push(Cell(i));
        }
        let mut cofaces = vec![Vec::new(); ids.len()];
        for q in 0..ids.len() {
            for (dir, faces) in [(Dir::S, &s[q]), (Dir::T, &t[q])] {
                for (k, f) in faces.iter().enumerate() {
                    cofaces[f.0].push((dir, k + 1, Cell(q)));
                }
            }
        }
        Self { ids, dims, s, t, by_dim, index, cofaces }
    }

    /// Builds a set directly from face tables; the caller guarantees validity.
    pub(crate) fn from_tables(ids: Vec<String>, dims: Vec<usize>, s: Vec<Vec<Cell>>, t: Vec<Vec<Cell>>) -> Self {
        let index = ids.iter().enumerate().map(|(i, id)| (id.clone(), Cell(i))).collect();
        Self::assemble(ids, dims, s, t, index)
    }

    pub fn to_raw(&self) -> RawPrecubical {
        let mut raw = RawPrecubical::default();
        for (d, cells) in self.by_dim.iter().enumerate() {
            raw.cells.insert(d.to_string(), cells.iter().map(|&c| self.id(c).to_string()).collect());
        }
        for c in self.cells() {
            if self.dim(c) > 0 {
                raw.s.insert(self.id(c).into(), self.s[c.0].iter().map(|&f| self.id(f).into()).collect());
                raw.t.insert(self.id(c).into(), self.t[c.0].iter().map(|&f| self.id(f).into()).collect());
            }
        }
        raw
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.ids.len()).map(Cell)
    }

    pub fn id(&self, c: Cell) -> &str {
        &self.ids[c.0]
    }

    pub fn lookup(&self, id: &str) -> Option<Cell> {
        self.index.get(id).copied()
    }

    pub fn cell(&self, id: &str) -> Result<Cell> {
        self.lookup(id).ok_or_else(|| Error::UnknownCell(id.to_string()))
    }

    pub fn dim(&self, c: Cell) -> usize {
        self.dims[c.0]
    }

    /// Largest dimension of a cell, 0 for the empty set.
    pub fn max_dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn of_dim(&self, d: usize) -> &[Cell] {
        self.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `α_k(c)` with a 1-based index, or `None` when `k` is out of range.
    pub fn face(&self, dir: Dir, k: usize, c: Cell) -> Option<Cell> {
        let faces = match dir {
            Dir::S => &self.s[c.0],
            Dir::T => &self.t[c.0],
        };
        k.checked_sub(1).and_then(|i| faces.get(i)).copied()
    }

    pub fn src(&self, k: usize, c: Cell) -> Cell {
        self.face(Dir::S, k, c).expect("face index in range")
    }

    pub fn tgt(&self, k: usize, c: Cell) -> Cell {
        self.face(Dir::T, k, c).expect("face index in range")
    }

    /// All `(dir, k, q)` with `dir_k(q) = c`.
    pub fn cofaces(&self, c: Cell) -> &[(Dir, usize, Cell)] {
        &self.cofaces[c.0]
    }

    /// Applies a face word written left to right, so its last letter acts first.
    pub fn apply_word(&self, word: &[Face], c: Cell) -> Option<Cell> {
        word.iter().rev().try_fold(c, |cur, &(dir, k)| self.face(dir, k, cur))
    }

    /// The iterated face selected by a tuple over `{0, ½, 1}`: coordinate
    /// `j` set to `Some(S)`/`Some(T)` is collapsed, `None` is kept.
    pub fn face_by_tuple(&self, c: Cell, tuple: &[Option<Dir>]) -> Cell {
        self.apply_word(&tuple_word(tuple), c).expect("tuple length matches dimension")
    }

    /// Every vertex reached by going down through `t` faces only.
    pub fn top_corner(&self, c: Cell) -> Cell {
        (0..self.dim(c)).fold(c, |cur, _| self.tgt(1, cur))
    }

    pub fn bottom_corner(&self, c: Cell) -> Cell {
        (0..self.dim(c)).fold(c, |cur, _| self.src(1, cur))
    }

    /// Checks that every cell's iterated faces are pairwise distinct.
    ///
    /// On failure returns `(face, cell, word, other_word)` with both words in
    /// increasing form and `face = word(cell) = other_word(cell)`.
    pub fn non_selflinked(&self) -> std::result::Result<(), (Cell, Cell, Vec<Face>, Vec<Face>)> {
        for q in self.cells() {
            let n = self.dim(q);
            let mut seen: HashMap<Cell, Vec<Face>> = HashMap::new();
            for tuple in all_face_tuples(n) {
                let word = tuple_word(&tuple);
                let f = self.apply_word(&word, q).expect("tuple word applies");
                if let Some(prev) = seen.get(&f) {
                    return Err((f, q, prev.clone(), word));
                }
                seen.insert(f, word);
            }
        }
        Ok(())
    }

    pub fn is_non_selflinked(&self) -> bool {
        self.non_selflinked().is_ok()
    }
}

/// Increasing face word selecting the face described by `tuple`.
pub fn tuple_word(tuple: &[Option<Dir>]) -> Vec<Face> {
    tuple.iter().enumerate().filter_map(|(j, d)| d.map(|d| (d, j + 1))).collect()
}

/// All `3^n` face tuples of an n-cube in lexicographic order (kept < s < t).
pub fn all_face_tuples(n: usize) -> impl Iterator<Item = Vec<Option<Dir>>> {
    let total = 3usize.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut tuple = vec![None; n];
        for slot in tuple.iter_mut().rev() {
            *slot = match code % 3 {
                0 => None,
                1 => Some(Dir::S),
                _ => Some(Dir::T),
            };
            code /= 3;
        }
        tuple
    })
}

/// Rewrites a face word with `β_m α_k = α_k β_{m+1}` (for `m ≥ k`) until
/// its indices strictly increase.
pub fn canonical_face_word(word: &[Face]) -> Vec<Face> {
    let mut w = word.to_vec();
    loop {
        let Some(p) = (0..w.len().saturating_sub(1)).find(|&p| w[p].1 >= w[p + 1].1) else {
            return w;
        };
        let (beta, m) = w[p];
        let (alpha, k) = w[p + 1];
        w[p] = (alpha, k);
        w[p + 1] = (beta, m + 1);
    }
}

pub fn format_word(word: &[Face]) -> String {
    word.iter().map(|(d, k)| format!("{d}{k}")).collect::<Vec<_>>().join(" ")
}

/// A precubical set with a designated initial 0-cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hda {
    pub set: PrecubicalSet,
    pub initial: Cell,
}

impl std::ops::Deref for Hda {
    type Target = PrecubicalSet;

    fn deref(&self) -> &PrecubicalSet {
        &self.set
    }
}

impl Hda {
    pub fn new(set: PrecubicalSet, initial: Cell) -> Result<Self> {
        if initial.0 >= set.len() || set.dim(initial) != 0 {
            return Err(Error::BadInitial(format!("{initial:?}")));
        }
        Ok(Self { set, initial })
    }

    pub fn from_raw(raw: &RawPrecubical) -> Result<Self> {
        let report = validate_precubical(raw);
        if !report.is_ok() {
            return Err(Error::Invalid(report));
        }
        let set = PrecubicalSet::from_raw(raw)?;
        let init = raw.initial.as_deref().ok_or_else(|| Error::BadInitial("missing".into()))?;
        let initial = set.cell(init)?;
        Self::new(set, initial)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_raw(&RawPrecubical::from_json(text)?)
    }

    pub fn to_raw(&self) -> RawPrecubical {
        let mut raw = self.set.to_raw();
        raw.initial = Some(self.id(self.initial).to_string());
        raw
    }

    pub fn to_json(&self) -> String {
        self.to_raw().to_json()
    }
}

/// A dimension-preserving map of cells, checked against two sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub map: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismDefect {
    Arity,
    Dimension(Cell),
    Face { cell: Cell, dir: Dir, k: usize },
    Initial,
}

impl Morphism {
    pub fn check(&self, src: &PrecubicalSet, dst: &PrecubicalSet) -> std::result::Result<(), MorphismDefect> {
        if self.map.len() != src.len() || self.map.iter().any(|c| c.0 >= dst.len()) {
            return Err(MorphismDefect::Arity);
        }
        for q in src.cells() {
            let fq = self.map[q.0];
            if dst.dim(fq) != src.dim(q) {
                return Err(MorphismDefect::Dimension(q));
            }
            for k in 1..=src.dim(q) {
                for dir in [Dir::S, Dir::T] {
                    let lhs = self.map[src.face(dir, k, q).unwrap().0];
                    if dst.face(dir, k, fq) != Some(lhs) {
                        return Err(MorphismDefect::Face { cell: q, dir, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn check_hda(&self, src: &Hda, dst: &Hda) -> std::result::Result<(), MorphismDefect> {
        self.check(&src.set, &dst.set)?;
        if self.map[src.initial.0] != dst.initial {
            return Err(MorphismDefect::Initial);
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.map.iter().all(|c| seen.insert(*c))
    }
}
