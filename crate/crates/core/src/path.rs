//! Paths, elementary homotopies, normal forms and reachability.

use std::collections::{HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::precubical::{Cell, Dir, Hda, PrecubicalSet};

/// An `s_i` step goes up from `s_i(to)` into `to`; a `t_i` step goes down
/// from the current cell `c` to `to = t_i(c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub dir: Dir,
    pub index: usize,
    pub to: Cell,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: Cell,
    pub steps: Vec<Step>,
}

impl Path {
    pub fn empty(start: Cell) -> Self {
        Self { start, steps: Vec::new() }
    }

    pub fn end(&self) -> Cell {
        self.steps.last().map_or(self.start, |s| s.to)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Cell before step `p`.
    pub fn before(&self, p: usize) -> Cell {
        if p == 0 {
            self.start
        } else {
            self.steps[p - 1].to
        }
    }

    /// The letters `s`/`t` of the path.
    pub fn kind(&self) -> String {
        self.steps.iter().map(|s| s.dir.letter()).collect()
    }

    /// Letters with indices, e.g. `s1 t1 s2`.
    pub fn indexed_kind(&self) -> String {
        self.steps.iter().map(|s| format!("{}{}", s.dir, s.index)).collect::<Vec<_>>().join(" ")
    }

    pub fn push(&mut self, dir: Dir, index: usize, to: Cell) {
        self.steps.push(Step { dir, index, to });
    }

    pub fn describe(&self, set: &PrecubicalSet) -> String {
        let mut out = set.id(self.start).to_string();
        for s in &self.steps {
            out.push_str(&format!(" -{}{}-> {}", s.dir, s.index, set.id(s.to)));
        }
        out
    }

    /// For a sequential path, the 1-cells entered by its `s` steps.
    pub fn edges(&self) -> Vec<Cell> {
        self.steps.iter().filter(|s| s.dir == Dir::S).map(|s| s.to).collect()
    }
}

/// Whether one step from `from` is legal.
pub fn step_ok(set: &PrecubicalSet, from: Cell, step: &Step) -> bool {
    match step.dir {
        Dir::S => set.dim(step.to) == set.dim(from) + 1 && set.face(Dir::S, step.index, step.to) == Some(from),
        Dir::T => set.face(Dir::T, step.index, from) == Some(step.to),
    }
}

pub fn check_path(set: &PrecubicalSet, path: &Path) -> Result<()> {
    if path.start.0 >= set.len() {
        return Err(Error::IllegalPath("start outside the set".into()));
    }
    for (p, step) in path.steps.iter().enumerate() {
        if step.to.0 >= set.len() || !step_ok(set, path.before(p), step) {
            return Err(Error::IllegalPath(format!("step {} ({}{}) is not a face relation", p + 1, step.dir, step.index)));
        }
    }
    Ok(())
}

/// The legal single steps out of `c`, ordered by target then letter.
pub fn steps_from(set: &PrecubicalSet, c: Cell) -> Vec<Step> {
    let mut out: Vec<Step> = set
        .cofaces(c)
        .iter()
        .filter(|(d, _, _)| *d == Dir::S)
        .map(|&(_, k, q)| Step { dir: Dir::S, index: k, to: q })
        .collect();
    for k in 1..=set.dim(c) {
        out.push(Step { dir: Dir::T, index: k, to: set.tgt(k, c) });
    }
    out
}

/// Replacement letter pairs for a two-step segment.
fn rewrites(a: (Dir, usize), b: (Dir, usize)) -> Vec<[(Dir, usize); 2]> {
    use Dir::{S, T};
    let ((d1, i1), (d2, i2)) = (a, b);
    let mut out = Vec::new();
    match (d1, d2) {
        (S, S) => {
            if i1 < i2 {
                out.push([(S, i2 - 1), (S, i1)]);
            } else {
                out.push([(S, i2), (S, i1 + 1)]);
            }
        }
        (T, T) => {
            if i2 < i1 {
                out.push([(T, i2), (T, i1 - 1)]);
            } else {
                out.push([(T, i2 + 1), (T, i1)]);
            }
        }
        (S, T) => {
            if i1 < i2 {
                out.push([(T, i2 - 1), (S, i1)]);
            }
            if i2 < i1 {
                out.push([(T, i2), (S, i1 - 1)]);
            }
        }
        (T, S) => {
            if i2 <= i1 {
                out.push([(S, i2), (T, i1 + 1)]);
            }
            if i1 <= i2 {
                out.push([(S, i2 + 1), (T, i1)]);
            }
        }
    }
    out
}

/// All paths obtained from `path` by one elementary homotopy, in either direction.
pub fn elementary_homotopies(set: &PrecubicalSet, path: &Path) -> Result<Vec<Path>> {
    check_path(set, path)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for p in 0..path.len().saturating_sub(1) {
        let a = path.before(p);
        let r = path.steps[p + 1].to;
        let (x, y) = (&path.steps[p], &path.steps[p + 1]);
        for [(d1, j1), (d2, j2)] in rewrites((x.dir, x.index), (y.dir, y.index)) {
            let middles: Vec<Cell> = if d1 == Dir::T {
                set.face(Dir::T, j1, a).into_iter().collect()
            } else if d2 == Dir::S {
                set.face(Dir::S, j2, r).into_iter().collect()
            } else {
                set.cofaces(a)
                    .iter()
                    .filter(|&&(d, k, _)| d == Dir::S && k == j1)
                    .map(|&(_, _, q)| q)
                    .collect()
            };
            for m in middles {
                let s1 = Step { dir: d1, index: j1, to: m };
                let s2 = Step { dir: d2, index: j2, to: r };
                if !step_ok(set, a, &s1) || !step_ok(set, m, &s2) {
                    continue;
                }
                let mut q = path.clone();
                q.steps[p] = s1;
                q.steps[p + 1] = s2;
                if q != *path && seen.insert(q.clone()) {
                    out.push(q);
                }
            }
        }
    }
    Ok(out)
}

/// The homotopy class of `path`, or `None` if it has more than `limit` members.
pub fn homotopy_class(set: &PrecubicalSet, path: &Path, limit: usize) -> Result<Option<HashSet<Path>>> {
    let mut seen = HashSet::from([path.clone()]);
    let mut queue = VecDeque::from([path.clone()]);
    while let Some(p) = queue.pop_front() {
        for q in elementary_homotopies(set, &p)? {
            if seen.insert(q.clone()) {
                if seen.len() > limit {
                    return Ok(None);
                }
                queue.push_back(q);
            }
        }
    }
    Ok(Some(seen))
}

/// Rewrites a path from a 0-cell into the form `(s1 t1)^l s1 s2 … s(n-1) s(last)`,
/// where `n` is the dimension of its end.
pub fn normalize_path_ending(set: &PrecubicalSet, path: &Path, last: usize) -> Result<Path> {
    check_path(set, path)?;
    if set.dim(path.start) != 0 {
        return Err(Error::IllegalPath("normal forms need a path starting at a 0-cell".into()));
    }
    let n = set.dim(path.end());
    if n > 0 && !(1..=n).contains(&last) {
        return Err(Error::IllegalPath(format!("final index {last} out of range 1..={n}")));
    }
    let mut p = path.clone();
    while let Some(i) = (0..p.len().saturating_sub(2))
        .find(|&i| p.steps[i].dir == Dir::S && p.steps[i + 1].dir == Dir::S && p.steps[i + 2].dir == Dir::T)
    {
        push_t_left(set, &mut p, i);
    }
    // now of kind (st)^l s^n; rebuild the trailing ascent canonically
    let ascent = p.steps.iter().rev().take_while(|s| s.dir == Dir::S).count();
    debug_assert_eq!(ascent, n);
    p.steps.truncate(p.len() - ascent);
    if n > 0 {
        let q = path.end();
        let mut cells = vec![q];
        let mut cur = set.src(last, q);
        for j in (1..n).rev() {
            cells.push(cur);
            cur = set.src(j, cur);
        }
        debug_assert_eq!(cur, p.end());
        cells.reverse();
        for (j, &c) in cells.iter().enumerate() {
            let index = if j + 1 == n { last } else { j + 1 };
            p.push(Dir::S, index, c);
        }
    }
    debug_assert!(check_path(set, &p).is_ok());
    Ok(p)
}

/// Normal form ending in `s_n` for an end cell of dimension `n`.
pub fn normalize_path(set: &PrecubicalSet, path: &Path) -> Result<Path> {
    let n = set.dim(path.end());
    normalize_path_ending(set, path, n.max(1))
}

/// Turns `s_i s_j t_k` at position `i` into a segment `s t s`.
fn push_t_left(set: &PrecubicalSet, p: &mut Path, at: usize) {
    let r = p.steps[at + 1].to;
    let (i, j, k) = (p.steps[at].index, p.steps[at + 1].index, p.steps[at + 2].index);
    let mut j = j;
    if j == k {
        let (a, b) = if i < j { (j - 1, i) } else { (j, i + 1) };
        let m = set.src(b, r);
        p.steps[at] = Step { dir: Dir::S, index: a, to: m };
        p.steps[at + 1] = Step { dir: Dir::S, index: b, to: r };
        j = b;
    }
    let y = p.steps[at].to;
    let z = p.steps[at + 2].to;
    let (tk, sj) = if j < k { (k - 1, j) } else { (k, j - 1) };
    let m = set.tgt(tk, y);
    p.steps[at + 1] = Step { dir: Dir::T, index: tk, to: m };
    p.steps[at + 2] = Step { dir: Dir::S, index: sj, to: z };
}

/// Directed graph whose arcs are the legal steps.
pub fn step_graph(set: &PrecubicalSet) -> DiGraph<(), ()> {
    let mut g = DiGraph::with_capacity(set.len(), 0);
    for _ in set.cells() {
        g.add_node(());
    }
    for c in set.cells() {
        for st in steps_from(set, c) {
            g.add_edge(NodeIndex::new(c.0), NodeIndex::new(st.to.0), ());
        }
    }
    g
}

/// Cells reachable from the initial cell, with a shortest witness path for each.
pub fn reachable(hda: &Hda) -> Vec<Option<Path>> {
    let mut out: Vec<Option<Path>> = vec![None; hda.len()];
    out[hda.initial.0] = Some(Path::empty(hda.initial));
    let mut queue = VecDeque::from([hda.initial]);
    while let Some(c) = queue.pop_front() {
        for st in steps_from(hda, c) {
            if out[st.to.0].is_none() {
                let mut p = out[c.0].clone().unwrap();
                p.steps.push(st);
                out[st.to.0] = Some(p);
                queue.push_back(st.to);
            }
        }
    }
    out
}

/// The sub-HDA on the reachable cells; also returns the old cell of each new one.
pub fn reachable_part(hda: &Hda) -> (Hda, Vec<Cell>) {
    let mut keep: Vec<bool> = reachable(hda).iter().map(Option::is_some).collect();
    for d in (1..=hda.max_dim()).rev() {
        for &c in hda.of_dim(d) {
            if keep[c.0] {
                for k in 1..=d {
                    keep[hda.src(k, c).0] = true;
                    keep[hda.tgt(k, c).0] = true;
                }
            }
        }
    }
    let old: Vec<Cell> = hda.cells().filter(|c| keep[c.0]).collect();
    let mut new_of = vec![usize::MAX; hda.len()];
    for (i, c) in old.iter().enumerate() {
        new_of[c.0] = i;
    }
    let remap = |v: &[Cell]| v.iter().map(|c| Cell(new_of[c.0])).collect::<Vec<_>>();
    let ids = old.iter().map(|&c| hda.id(c).to_string()).collect();
    let dims = old.iter().map(|&c| hda.dim(c)).collect();
    let s = old.iter().map(|&c| remap(&(1..=hda.dim(c)).map(|k| hda.src(k, c)).collect::<Vec<_>>())).collect();
    let t = old.iter().map(|&c| remap(&(1..=hda.dim(c)).map(|k| hda.tgt(k, c)).collect::<Vec<_>>())).collect();
    let set = PrecubicalSet::from_tables(ids, dims, s, t);
    let hda = Hda::new(set, Cell(new_of[hda.initial.0])).expect("initial cell is kept");
    (hda, old)
}

/// `Err(cell)` names the first unreachable cell in declaration order.
pub fn is_connected(hda: &Hda) -> std::result::Result<(), Cell> {
    match reachable(hda).iter().position(Option::is_none) {
        None => Ok(()),
        Some(i) => Err(Cell(i)),
    }
}

/// `Err(cycle)` returns a closed walk `c0 → … → c0` (first cell repeated at the end).
pub fn is_acyclic(set: &PrecubicalSet) -> std::result::Result<(), Vec<Cell>> {
    let g = step_graph(set);
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| c.into_iter().map(|n| n.index()).collect())
        .collect();
    if comps.is_empty() {
        return Ok(());
    }
    for c in &mut comps {
        c.sort();
    }
    comps.sort();
    let comp: HashSet<usize> = comps[0].iter().copied().collect();
    let root = comps[0][0];
    // shortest walk back to root inside the component
    let mut parent: Vec<Option<usize>> = vec![None; set.len()];
    let mut queue = VecDeque::from([root]);
    let mut seen = HashSet::from([root]);
    while let Some(c) = queue.pop_front() {
        for st in steps_from(set, Cell(c)) {
            let n = st.to.0;
            if n == root {
                let mut walk = Vec::new();
                let mut cur = c;
                while cur != root {
                    walk.push(Cell(cur));
                    cur = parent[cur].unwrap();
                }
                walk.push(Cell(root));
                walk.reverse();
                walk.push(Cell(root));
                return Err(walk);
            }
            if comp.contains(&n) && seen.insert(n) {
                parent[n] = Some(c);
                queue.push_back(n);
            }
        }
    }
    unreachable!("strongly connected component without a cycle")
}

/// Every path from the initial cell (including the empty one), or `None`
/// when there are more than `limit`. Only meaningful for acyclic HDA.
pub fn rooted_paths(hda: &Hda, limit: usize) -> Option<Vec<Path>> {
    let mut out = vec![Path::empty(hda.initial)];
    let mut i = 0;
    while i < out.len() {
        let p = out[i].clone();
        for st in steps_from(hda, p.end()) {
            let mut q = p.clone();
            q.steps.push(st);
            out.push(q);
            if out.len() > limit {
                return None;
            }
        }
        i += 1;
    }
    Some(out)
}
