//! Universal event labels, their order and the event-level properties of an HDA.

use std::collections::{HashSet, VecDeque};

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::path::{is_acyclic, Path};
use crate::precubical::{Cell, Dir, Hda, PrecubicalSet};

/// Equivalence classes of 1-cells generated by opposite edges of squares,
/// together with the order `⋖` they inherit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalEvents {
    class_of: Vec<Option<usize>>,
    classes: Vec<Vec<Cell>>,
    names: Vec<String>,
    relation: Vec<(usize, usize)>,
    closure: Vec<Vec<bool>>,
}

pub fn universal_events(set: &PrecubicalSet) -> UniversalEvents {
    let edges = set.of_dim(1);
    let mut local = vec![usize::MAX; set.len()];
    for (i, &e) in edges.iter().enumerate() {
        local[e.0] = i;
    }
    let mut uf = UnionFind::<usize>::new(edges.len());
    for &q in set.of_dim(2) {
        for k in 1..=2 {
            uf.union(local[set.src(k, q).0], local[set.tgt(k, q).0]);
        }
    }
    let mut class_of = vec![None; set.len()];
    let mut classes: Vec<Vec<Cell>> = Vec::new();
    let mut root_class = std::collections::HashMap::new();
    for &e in edges {
        let root = uf.find(local[e.0]);
        let next = classes.len();
        let c = *root_class.entry(root).or_insert(next);
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(e);
        class_of[e.0] = Some(c);
    }
    let names = classes.iter().map(|m| set.id(m[0]).to_string()).collect();
    let mut relation = Vec::new();
    for &q in set.of_dim(2) {
        let pair = (class_of[set.src(2, q).0].unwrap(), class_of[set.src(1, q).0].unwrap());
        if !relation.contains(&pair) {
            relation.push(pair);
        }
    }
    let closure = transitive_closure(classes.len(), &relation);
    UniversalEvents { class_of, classes, names, relation, closure }
}

/// Reachability matrix of a relation (not reflexive unless forced by a cycle).
pub fn transitive_closure(n: usize, relation: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for &(a, b) in relation {
        m[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    m
}

impl UniversalEvents {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class of a 1-cell.
    pub fn label(&self, edge: Cell) -> usize {
        self.class_of[edge.0].expect("label of a 1-cell")
    }

    pub fn try_label(&self, edge: Cell) -> Option<usize> {
        self.class_of.get(edge.0).copied().flatten()
    }

    /// Members of a class in declaration order.
    pub fn members(&self, class: usize) -> &[Cell] {
        &self.classes[class]
    }

    pub fn classes(&self) -> &[Vec<Cell>] {
        &self.classes
    }

    /// A class is named after its first declared member.
    pub fn name(&self, class: usize) -> &str {
        &self.names[class]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Generating pairs `(λ(s2 q), λ(s1 q))` of the order, without repeats.
    pub fn relation(&self) -> &[(usize, usize)] {
        &self.relation
    }

    /// `a ⋖ b` in the transitive closure.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.closure[a][b]
    }

    /// `λ_i(q) = λ(s_1 … s_{i-1} s_{i+1} … s_n q)` for `i = 1..n`.
    pub fn multilabel(&self, set: &PrecubicalSet, q: Cell) -> Vec<usize> {
        let n = set.dim(q);
        (1..=n)
            .map(|i| {
                let tuple: Vec<Option<Dir>> =
                    (1..=n).map(|j| if j == i { None } else { Some(Dir::S) }).collect();
                self.label(set.face_by_tuple(q, &tuple))
            })
            .collect()
    }

    /// Same as [`Self::multilabel`] but reading the labels off `t` faces.
    pub fn multilabel_t(&self, set: &PrecubicalSet, q: Cell) -> Vec<usize> {
        let n = set.dim(q);
        (1..=n)
            .map(|i| {
                let tuple: Vec<Option<Dir>> =
                    (1..=n).map(|j| if j == i { None } else { Some(Dir::T) }).collect();
                self.label(set.face_by_tuple(q, &tuple))
            })
            .collect()
    }

    /// `Err(q)` names the first 2-cell with `λ(s1 q) = λ(s2 q)`.
    pub fn consistency(&self, set: &PrecubicalSet) -> std::result::Result<(), Cell> {
        match set.of_dim(2).iter().find(|&&q| self.label(set.src(1, q)) == self.label(set.src(2, q))) {
            Some(&q) => Err(q),
            None => Ok(()),
        }
    }

    /// `Err(cycle)` gives classes `c0 ⋖ c1 ⋖ … ⋖ c0` of minimal length from
    /// the first class lying on a cycle (the first class is repeated at the end).
    pub fn orderedness(&self) -> std::result::Result<(), Vec<usize>> {
        let Some(start) = (0..self.len()).find(|&a| self.closure[a][a]) else {
            return Ok(());
        };
        let mut parent = vec![None; self.len()];
        let mut queue = VecDeque::from([start]);
        let mut seen = HashSet::from([start]);
        while let Some(a) = queue.pop_front() {
            for &(x, b) in &self.relation {
                if x != a {
                    continue;
                }
                if b == start {
                    let mut cyc = vec![];
                    let mut cur = a;
                    while cur != start {
                        cyc.push(cur);
                        cur = parent[cur].unwrap();
                    }
                    cyc.push(start);
                    cyc.reverse();
                    cyc.push(start);
                    return Err(cyc);
                }
                if seen.insert(b) {
                    parent[b] = Some(a);
                    queue.push_back(b);
                }
            }
        }
        unreachable!("reflexive closure entry without a cycle")
    }

    pub fn is_ordered(&self) -> bool {
        self.orderedness().is_ok()
    }
}

pub fn is_consistent(set: &PrecubicalSet) -> bool {
    universal_events(set).consistency(set).is_ok()
}

pub fn is_ordered(set: &PrecubicalSet) -> bool {
    universal_events(set).is_ordered()
}

/// Reorders the faces of every cell so that its labels increase along a
/// total order given as `rank[class]`.
pub fn symmetric_variant(set: &PrecubicalSet, rank: &[usize]) -> Result<PrecubicalSet> {
    let ev = universal_events(set);
    if rank.len() != ev.len() {
        return Err(Error::Unsupported(format!("order ranks {} classes, set has {}", rank.len(), ev.len())));
    }
    let mut s = Vec::with_capacity(set.len());
    let mut t = Vec::with_capacity(set.len());
    for q in set.cells() {
        let labels = ev.multilabel(set, q);
        let mut sigma: Vec<usize> = (0..labels.len()).collect();
        sigma.sort_by_key(|&i| rank[labels[i]]);
        if sigma.windows(2).any(|w| rank[labels[w[0]]] == rank[labels[w[1]]]) {
            return Err(Error::NotConsistent(set.id(q).to_string()));
        }
        s.push(sigma.iter().map(|&i| set.src(i + 1, q)).collect());
        t.push(sigma.iter().map(|&i| set.tgt(i + 1, q)).collect());
    }
    let ids = set.cells().map(|c| set.id(c).to_string()).collect();
    let dims = set.cells().map(|c| set.dim(c)).collect();
    Ok(PrecubicalSet::from_tables(ids, dims, s, t))
}

/// A sequential path whose labels repeat, if one exists.
///
/// Cyclic HDA always have one: the loop is walked once and its first edge
/// taken again. Acyclic ones are searched breadth first, so the witness
/// is as short as possible.
pub fn repeating_events(hda: &Hda, ev: &UniversalEvents) -> Option<Path> {
    let set = &hda.set;
    let out_edges = |v: Cell| -> Vec<Cell> {
        set.cofaces(v).iter().filter(|(d, k, q)| *d == Dir::S && *k == 1 && set.dim(*q) == 1).map(|x| x.2).collect()
    };
    let seq = |v: Cell, edges: &[Cell]| -> Path {
        let mut p = Path::empty(v);
        for &e in edges {
            p.push(Dir::S, 1, e);
            p.push(Dir::T, 1, set.tgt(1, e));
        }
        p
    };
    if is_acyclic(set).is_err() {
        // depth first over vertices until a vertex on the stack is met again
        let mut stack: Vec<(Cell, Vec<Cell>, usize)> = vec![(hda.initial, out_edges(hda.initial), 0)];
        let mut on_stack = vec![false; set.len()];
        let mut done = vec![false; set.len()];
        on_stack[hda.initial.0] = true;
        let mut trail: Vec<Cell> = Vec::new();
        while let Some((v, outs, i)) = stack.last_mut() {
            if *i == outs.len() {
                on_stack[v.0] = false;
                done[v.0] = true;
                stack.pop();
                trail.pop();
                continue;
            }
            let e = outs[*i];
            *i += 1;
            let w = set.tgt(1, e);
            if on_stack[w.0] {
                let mut edges = trail.clone();
                edges.push(e);
                let start = edges.iter().position(|&x| set.src(1, x) == w).unwrap();
                edges.push(edges[start]);
                return Some(seq(hda.initial, &edges));
            }
            if !done[w.0] {
                on_stack[w.0] = true;
                trail.push(e);
                let next = out_edges(w);
                stack.push((w, next, 0));
            }
        }
        return None;
    }
    let mut seen: HashSet<(Cell, Vec<usize>)> = HashSet::new();
    let mut queue: VecDeque<(Cell, Vec<usize>, Vec<Cell>)> = VecDeque::from([(hda.initial, Vec::new(), Vec::new())]);
    while let Some((v, labels, edges)) = queue.pop_front() {
        for e in out_edges(v) {
            let l = ev.label(e);
            let mut path = edges.clone();
            path.push(e);
            if labels.contains(&l) {
                return Some(seq(hda.initial, &path));
            }
            let mut next = labels.clone();
            next.push(l);
            next.sort();
            let w = set.tgt(1, e);
            if seen.insert((w, next.clone())) {
                queue.push_back((w, next, path));
            }
        }
    }
    None
}

pub fn has_non_repeating_events(hda: &Hda) -> bool {
    repeating_events(hda, &universal_events(hda)).is_none()
}
