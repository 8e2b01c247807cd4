//! Grids, Euclidean cubical complexes and their passage to the bulk.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bulk::Sculpture;
use crate::error::{Error, Result};
use crate::precubical::{Cell, Dir, Hda, PrecubicalSet};
use crate::st::Tri;

/// Position of a cell along one axis: on the integer `p`, or spanning `[p, p+1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxisPos {
    At(i64),
    Span(i64),
}

impl AxisPos {
    pub fn lo(self) -> i64 {
        match self {
            AxisPos::At(p) | AxisPos::Span(p) => p,
        }
    }

    pub fn hi(self) -> i64 {
        match self {
            AxisPos::At(p) => p,
            AxisPos::Span(p) => p + 1,
        }
    }
}

impl fmt::Display for AxisPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisPos::At(p) => write!(f, "{p}"),
            AxisPos::Span(p) => write!(f, "{p}+"),
        }
    }
}

pub fn position_id(x: &[AxisPos]) -> String {
    if x.is_empty() {
        return "()".into();
    }
    x.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
}

fn spans(x: &[AxisPos]) -> usize {
    x.iter().filter(|p| matches!(p, AxisPos::Span(_))).count()
}

/// `α_k` on an elementary cube: its `k`-th spanning axis collapses to the
/// lower (`s`) or upper (`t`) end.
pub fn position_face(x: &[AxisPos], dir: Dir, k: usize) -> Option<Vec<AxisPos>> {
    let axis = x.iter().enumerate().filter(|(_, p)| matches!(p, AxisPos::Span(_))).nth(k.checked_sub(1)?)?.0;
    let mut y = x.to_vec();
    let p = x[axis].lo();
    y[axis] = if dir == Dir::S { AxisPos::At(p) } else { AxisPos::At(p + 1) };
    Some(y)
}

/// Builds an HDA whose cells are face-closed elementary cubes.
pub fn hda_from_positions(cells: &[Vec<AxisPos>], initial: &[AxisPos]) -> Result<(Hda, Vec<Vec<AxisPos>>)> {
    let mut sorted = cells.to_vec();
    sorted.sort_by(|a, b| (spans(a), a).cmp(&(spans(b), b)));
    sorted.dedup();
    let index: HashMap<&Vec<AxisPos>, usize> = sorted.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut s = Vec::new();
    let mut t = Vec::new();
    for x in &sorted {
        let mut fs = Vec::new();
        let mut ft = Vec::new();
        for k in 1..=spans(x) {
            for (dir, out) in [(Dir::S, &mut fs), (Dir::T, &mut ft)] {
                let f = position_face(x, dir, k).unwrap();
                let i = index
                    .get(&f)
                    .ok_or_else(|| Error::InvalidComplex(format!("face {} of {} missing", position_id(&f), position_id(x))))?;
                out.push(Cell(*i));
            }
        }
        s.push(fs);
        t.push(ft);
    }
    let ids = sorted.iter().map(|x| position_id(x)).collect();
    let dims = sorted.iter().map(|x| spans(x)).collect();
    let set = PrecubicalSet::from_tables(ids, dims, s, t);
    let init = index
        .get(&initial.to_vec())
        .copied()
        .ok_or_else(|| Error::BadInitial(format!("{} is not a cell", position_id(initial))))?;
    Ok((Hda::new(set, Cell(init))?, sorted))
}

/// The regular grid with `M_k` top cells along axis `k`.
#[derive(Debug, Clone)]
pub struct Grid {
    pub sizes: Vec<usize>,
    pub hda: Hda,
    pub cells: Vec<Vec<AxisPos>>,
}

fn product(ranges: &[Vec<AxisPos>]) -> Vec<Vec<AxisPos>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|x| {
                r.iter().map(move |&p| {
                    let mut y = x.clone();
                    y.push(p);
                    y
                })
            })
            .collect();
    }
    out
}

fn axis_positions(m: usize) -> Vec<AxisPos> {
    let m = m as i64;
    (0..=m).map(AxisPos::At).chain((0..m).map(AxisPos::Span)).collect()
}

/// Largest number of grid cells materialized.
pub const GRID_CELL_BOUND: usize = 2_000_000;

pub fn make_grid(sizes: &[usize]) -> Result<Grid> {
    if sizes.contains(&0) {
        return Err(Error::InvalidGrid("every axis needs at least one top cell".into()));
    }
    let total = sizes.iter().try_fold(1usize, |acc, &m| acc.checked_mul(2 * m + 1));
    if total.is_none_or(|t| t > GRID_CELL_BOUND) {
        return Err(Error::ResourceLimit(format!("grid {sizes:?} has too many cells")));
    }
    let ranges: Vec<Vec<AxisPos>> = sizes.iter().map(|&m| axis_positions(m)).collect();
    let cells = product(&ranges);
    let origin = vec![AxisPos::At(0); sizes.len()];
    let (hda, cells) = hda_from_positions(&cells, &origin)?;
    Ok(Grid { sizes: sizes.to_vec(), hda, cells })
}

impl Grid {
    /// Top cell `Φ(i)` for a 0-based multi-index.
    pub fn top(&self, i: &[usize]) -> Option<Cell> {
        let x: Vec<AxisPos> = i.iter().map(|&p| AxisPos::Span(p as i64)).collect();
        self.hda.lookup(&position_id(&x))
    }

    fn top_indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &m in &self.sizes {
            out = out
                .into_iter()
                .flat_map(|x: Vec<usize>| {
                    (0..m).map(move |p| {
                        let mut y = x.clone();
                        y.push(p);
                        y
                    })
                })
                .collect();
        }
        out
    }

    /// Checks that neighbouring top cells share exactly their common face and
    /// that no other faces of top cells coincide.
    pub fn check_gluing(&self) -> std::result::Result<(), String> {
        let d = self.sizes.len();
        let mut sources: BTreeMap<Cell, Vec<(Vec<usize>, Dir, usize)>> = BTreeMap::new();
        for i in self.top_indices() {
            let q = self.top(&i).ok_or("missing top cell")?;
            for k in 1..=d {
                for dir in [Dir::S, Dir::T] {
                    sources.entry(self.hda.face(dir, k, q).unwrap()).or_default().push((i.clone(), dir, k));
                }
            }
            for k in 0..d {
                if i[k] + 1 < self.sizes[k] {
                    let mut j = i.clone();
                    j[k] += 1;
                    let r = self.top(&j).ok_or("missing top cell")?;
                    if self.hda.tgt(k + 1, q) != self.hda.src(k + 1, r) {
                        return Err(format!("t{} of {:?} differs from s{} of {:?}", k + 1, i, k + 1, j));
                    }
                }
            }
        }
        for (face, src) in sources {
            match src.as_slice() {
                [_] => {}
                [(i, Dir::T, k), (j, Dir::S, l)] | [(j, Dir::S, l), (i, Dir::T, k)] if k == l => {
                    let mut next = i.clone();
                    next[k - 1] += 1;
                    if &next != j {
                        return Err(format!("unexpected gluing at {}", self.hda.id(face)));
                    }
                }
                _ => return Err(format!("unexpected gluing at {}", self.hda.id(face))),
            }
        }
        Ok(())
    }
}

/// Bulk tuple of a cell on the grid `sizes` (axes in order, events
/// `e_k^1 … e_k^{M_k}` per axis).
pub fn grid_tuple(x: &[AxisPos], sizes: &[usize]) -> Vec<Tri> {
    let mut out = Vec::with_capacity(sizes.iter().sum());
    for (p, &m) in x.iter().zip(sizes) {
        for i in 1..=m as i64 {
            out.push(match *p {
                AxisPos::At(q) if i <= q => Tri::One,
                AxisPos::At(_) => Tri::Zero,
                AxisPos::Span(q) if i <= q => Tri::One,
                AxisPos::Span(q) if i == q + 1 => Tri::Half,
                AxisPos::Span(_) => Tri::Zero,
            });
        }
    }
    out
}

pub fn grid_to_bulk(grid: &Grid) -> Result<Sculpture> {
    let em = grid.cells.iter().map(|x| grid_tuple(x, &grid.sizes)).collect();
    Sculpture::new(grid.hda.clone(), grid.sizes.iter().sum(), em)
}

/// An elementary cube `[a, b]` with `b_i - a_i ∈ {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cube {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl Cube {
    pub fn positions(&self) -> Result<Vec<AxisPos>> {
        if self.a.len() != self.b.len() {
            return Err(Error::InvalidComplex("cube corners differ in length".into()));
        }
        self.a
            .iter()
            .zip(&self.b)
            .map(|(&a, &b)| match b - a {
                0 => Ok(AxisPos::At(a)),
                1 => Ok(AxisPos::Span(a)),
                _ => Err(Error::InvalidComplex(format!("[{a}, {b}] is not elementary"))),
            })
            .collect()
    }

    pub fn from_positions(x: &[AxisPos]) -> Self {
        Self { a: x.iter().map(|p| p.lo()).collect(), b: x.iter().map(|p| p.hi()).collect() }
    }

    /// Ascending spanning axes.
    pub fn dirr(&self) -> Vec<usize> {
        (0..self.a.len()).filter(|&i| self.b[i] > self.a[i]).collect()
    }
}

/// A finite set of elementary cubes in `R^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EuclideanComplex {
    pub dim: usize,
    pub cubes: BTreeSet<Cube>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub dim: usize,
    pub cubes: Vec<Cube>,
    pub initial: Vec<i64>,
}

impl EuclideanComplex {
    pub fn new(dim: usize, cubes: impl IntoIterator<Item = Cube>) -> Result<Self> {
        let cubes: BTreeSet<Cube> = cubes.into_iter().collect();
        for c in &cubes {
            if c.a.len() != dim {
                return Err(Error::InvalidComplex(format!("cube of dimension {} in R^{dim}", c.a.len())));
            }
            c.positions()?;
        }
        Ok(Self { dim, cubes })
    }

    /// Adds all missing faces; returns the cubes that had to be added.
    pub fn close(&mut self) -> Vec<Cube> {
        let mut added = Vec::new();
        let mut stack: Vec<Cube> = self.cubes.iter().cloned().collect();
        while let Some(c) = stack.pop() {
            let x = c.positions().expect("validated cube");
            for k in 1..=spans(&x) {
                for dir in [Dir::S, Dir::T] {
                    let f = Cube::from_positions(&position_face(&x, dir, k).unwrap());
                    if self.cubes.insert(f.clone()) {
                        added.push(f.clone());
                        stack.push(f);
                    }
                }
            }
        }
        added.sort();
        added
    }

    pub fn top_count(&self, dim: usize) -> usize {
        self.cubes.iter().filter(|c| c.dirr().len() == dim).count()
    }

    pub fn to_json(&self, initial: &[i64]) -> ComplexJson {
        ComplexJson { dim: self.dim, cubes: self.cubes.iter().cloned().collect(), initial: initial.to_vec() }
    }
}

/// An HDA read off a complex, with its place in the bounding grid.
#[derive(Debug, Clone)]
pub struct ComplexHda {
    pub hda: Hda,
    pub positions: Vec<Vec<AxisPos>>,
    /// Faces added to make the complex face-closed.
    pub added: Vec<Cube>,
    pub origin: Vec<i64>,
    pub sizes: Vec<usize>,
}

pub fn complex_to_hda(complex: &EuclideanComplex, initial: &[i64]) -> Result<ComplexHda> {
    if initial.len() != complex.dim {
        return Err(Error::InvalidComplex("initial vertex has the wrong dimension".into()));
    }
    let mut closed = complex.clone();
    let added = closed.close();
    let cells: Vec<Vec<AxisPos>> = closed.cubes.iter().map(|c| c.positions()).collect::<Result<_>>()?;
    let init: Vec<AxisPos> = initial.iter().map(|&p| AxisPos::At(p)).collect();
    let (hda, positions) = hda_from_positions(&cells, &init)?;
    let origin: Vec<i64> = (0..complex.dim).map(|i| cells.iter().map(|x| x[i].lo()).min().unwrap_or(0)).collect();
    let sizes = (0..complex.dim)
        .map(|i| (cells.iter().map(|x| x[i].hi()).max().unwrap_or(0) - origin[i]) as usize)
        .collect();
    Ok(ComplexHda { hda, positions, added, origin, sizes })
}

impl ComplexHda {
    /// Composes the grid embedding with the grid's bulk embedding. Needs the
    /// initial vertex at the lower corner of the bounding box, which holds
    /// whenever the HDA is connected.
    pub fn to_sculpture(&self) -> Result<Sculpture> {
        let init = &self.positions[self.hda.initial.0];
        if init.iter().zip(&self.origin).any(|(p, &o)| p.lo() != o) {
            return Err(Error::InvalidComplex("initial vertex is not the lower corner of the bounding box".into()));
        }
        let axes: Vec<usize> = (0..self.sizes.len()).filter(|&i| self.sizes[i] > 0).collect();
        let sizes: Vec<usize> = axes.iter().map(|&i| self.sizes[i]).collect();
        let em = self
            .positions
            .iter()
            .map(|x| {
                let rel: Vec<AxisPos> = axes
                    .iter()
                    .map(|&i| match x[i] {
                        AxisPos::At(p) => AxisPos::At(p - self.origin[i]),
                        AxisPos::Span(p) => AxisPos::Span(p - self.origin[i]),
                    })
                    .collect();
                grid_tuple(&rel, &sizes)
            })
            .collect();
        Sculpture::new(self.hda.clone(), sizes.iter().sum(), em)
    }
}

/// Reads bulk tuples as cubes in `[0, 1]^d`.
pub fn sculpture_to_complex(sc: &Sculpture) -> EuclideanComplex {
    let cubes = sc.em.iter().map(|x| {
        let pos: Vec<AxisPos> = x
            .iter()
            .map(|v| match v {
                Tri::Zero => AxisPos::At(0),
                Tri::Half => AxisPos::Span(0),
                Tri::One => AxisPos::At(1),
            })
            .collect();
        Cube::from_positions(&pos)
    });
    EuclideanComplex::new(sc.d, cubes).expect("bulk tuples are elementary cubes")
}
