//! Deciding sculptability: proper event identifications, the repair search,
//! an exhaustive oracle, and the embedding built from a proper identification.

use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;

use itertools::Itertools;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::bulk::Sculpture;
use crate::error::{Error, Result};
use crate::events::{repeating_events, universal_events, UniversalEvents};
use crate::hintost::{hintost_unchecked, Labeling};
use crate::partition::Partition;
use crate::path::{is_connected, normalize_path, Path};
use crate::precubical::{Cell, Hda};
use crate::st::{StConfig, Tri};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest number of universal events the exhaustive oracle accepts.
    pub max_events: usize,
    /// Largest number of search nodes before giving up.
    pub node_budget: u64,
    /// Exhausted repair verdicts are confirmed by the oracle up to this many events.
    pub cross_check_bound: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { max_events: 20, node_budget: 1_000_000, cross_check_bound: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Repair,
    BruteForce,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub branch_points: u64,
    pub backtracks: u64,
}

/// Why an HDA cannot be sculpted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A sequential path on which a label occurs twice.
    RepeatingEvents { path: Path },
    /// Classes `c0 ⋖ c1 ⋖ … ⋖ c0`.
    NotOrdered { cycle: Vec<usize> },
    /// A 0-cell reached by sequential paths of different lengths.
    LengthMismatch { cell: Cell, a: StConfig, b: StConfig, path_a: Path, path_b: Path },
    /// Two cells labelled alike once all forced identifications are made.
    LabelClash { a: Cell, b: Cell, config: StConfig, partition: Partition },
    /// Every branch of the search failed.
    Exhausted { nodes: u64, branch_points: u64, cross_checked: bool },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::RepeatingEvents { .. } => "RepeatingEvents",
            Witness::NotOrdered { .. } => "NotOrdered",
            Witness::LengthMismatch { .. } => "LengthMismatch",
            Witness::LabelClash { .. } => "LabelClash",
            Witness::Exhausted { .. } => "Exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sculptable { partition: Partition, sculpture: Sculpture },
    NotSculptable(Witness),
}

impl Verdict {
    pub fn is_sculptable(&self) -> bool {
        matches!(self, Verdict::Sculptable { .. })
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            Verdict::Sculptable { sculpture, .. } => Some(sculpture.d),
            Verdict::NotSculptable(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::NotSculptable(w) => Some(w),
            Verdict::Sculptable { .. } => None,
        }
    }
}

/// A verdict with the event classes it refers to.
#[derive(Debug, Clone)]
pub struct Decision {
    pub verdict: Verdict,
    pub events: UniversalEvents,
    pub stats: SearchStats,
}

/// The clause of properness an identification breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProperViolation {
    /// Blocks forming a cycle of the quotient order.
    Antisymmetry { blocks: Vec<usize> },
    /// A cell with two different quotient configurations.
    NotFunctional { cell: Cell, a: StConfig, b: StConfig },
    /// Two cells sharing a quotient configuration.
    NotInjective { a: Cell, b: Cell, config: StConfig },
}

/// Blocks lying on a cycle of the order induced on `p`'s blocks.
pub fn quotient_cycle(events: &UniversalEvents, p: &Partition) -> Option<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::new();
    for _ in 0..p.num_blocks() {
        g.add_node(());
    }
    for &(a, b) in events.relation() {
        let (x, y) = (p.block_of(a), p.block_of(b));
        if x != y {
            g.update_edge(NodeIndex::new(x), NodeIndex::new(y), ());
        }
    }
    tarjan_scc(&g).into_iter().find(|c| c.len() > 1).map(|c| {
        let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
        v.sort();
        v
    })
}

fn quotients(lab: &Labeling, p: &Partition) -> Vec<BTreeSet<StConfig>> {
    lab.cells.iter().map(|cs| cs.iter().map(|l| l.config.map(|e| p.block_of(e))).collect()).collect()
}

fn find_clash(q: &[BTreeSet<StConfig>]) -> Option<(Cell, Cell, StConfig)> {
    let mut owner: HashMap<&StConfig, usize> = HashMap::new();
    for (c, set) in q.iter().enumerate() {
        for x in set {
            if let Some(&o) = owner.get(x) {
                if o != c {
                    return Some((Cell(o), Cell(c), x.clone()));
                }
            } else {
                owner.insert(x, c);
            }
        }
    }
    None
}

pub fn check_proper(lab: &Labeling, p: &Partition) -> std::result::Result<(), ProperViolation> {
    if let Some(blocks) = quotient_cycle(&lab.events, p) {
        return Err(ProperViolation::Antisymmetry { blocks });
    }
    let q = quotients(lab, p);
    for (c, set) in q.iter().enumerate() {
        if set.len() > 1 {
            let mut it = set.iter();
            let a = it.next().unwrap().clone();
            let b = it.next().unwrap().clone();
            return Err(ProperViolation::NotFunctional { cell: Cell(c), a, b });
        }
    }
    if let Some((a, b, config)) = find_clash(&q) {
        return Err(ProperViolation::NotInjective { a, b, config });
    }
    Ok(())
}

/// A 0-cell whose configurations differ in size, if any.
pub fn length_mismatch(hda: &Hda, lab: &Labeling) -> Option<Witness> {
    for &v in hda.of_dim(0) {
        let cs = lab.configs(v);
        if let Some(other) = cs.iter().find(|l| l.config.s.len() != cs[0].config.s.len()) {
            return Some(Witness::LengthMismatch {
                cell: v,
                a: cs[0].config.clone(),
                b: other.config.clone(),
                path_a: cs[0].witness.clone(),
                path_b: other.witness.clone(),
            });
        }
    }
    None
}

/// The cubical embedding given by a proper identification: blocks are
/// numbered along the quotient order, smallest block first among ties.
pub fn build_embedding(hda: &Hda, lab: &Labeling, p: &Partition) -> Result<Sculpture> {
    check_proper(lab, p).map_err(|v| Error::NotProper(format!("{v:?}")))?;
    let n = p.num_blocks();
    let mut succ = vec![BTreeSet::new(); n];
    let mut indeg = vec![0usize; n];
    for &(a, b) in lab.events.relation() {
        let (x, y) = (p.block_of(a), p.block_of(b));
        if x != y && succ[x].insert(y) {
            indeg[y] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = (0..n).filter(|&b| indeg[b] == 0).map(Reverse).collect();
    let mut coord = vec![0; n];
    let mut next = 0;
    while let Some(Reverse(b)) = heap.pop() {
        coord[b] = next;
        next += 1;
        for &y in &succ[b] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                heap.push(Reverse(y));
            }
        }
    }
    let em = hda
        .cells()
        .map(|q| {
            let config = &lab.configs(q)[0].config;
            let mut x = vec![Tri::Zero; n];
            for &e in &config.s {
                x[coord[p.block_of(e)]] = if config.t.contains(&e) { Tri::One } else { Tri::Half };
            }
            x
        })
        .collect();
    Sculpture::new(hda.clone(), n, em)
}

/// Sequential edge lists reaching each configuration of each 0-cell.
fn sequential_witnesses(hda: &Hda, lab: &Labeling) -> Result<Vec<Vec<Vec<Cell>>>> {
    hda.cells()
        .map(|q| {
            if hda.dim(q) != 0 {
                return Ok(Vec::new());
            }
            lab.configs(q).iter().map(|l| Ok(normalize_path(hda, &l.witness)?.edges())).collect()
        })
        .collect()
}

enum Outcome {
    Found(Partition),
    Clash(Cell, Cell, StConfig, Partition),
    Dead,
}

struct Repair<'a> {
    lab: &'a Labeling,
    seq: Vec<Vec<Vec<Cell>>>,
    /// 0-cells in the order their conflicts are treated.
    vertices: Vec<Cell>,
    cfg: SearchConfig,
    stats: SearchStats,
}

impl Repair<'_> {
    /// Differing middle parts of two equally long sequential paths.
    fn strip(a: &[Cell], b: &[Cell]) -> (Vec<Cell>, Vec<Cell>) {
        let pre = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        let (a, b) = (&a[pre..], &b[pre..]);
        let suf = a.iter().rev().zip(b.iter().rev()).take_while(|(x, y)| x == y).count();
        (a[..a.len() - suf].to_vec(), b[..b.len() - suf].to_vec())
    }

    fn run(&mut self, mut p: Partition) -> Result<Outcome> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.cfg.node_budget {
            return Err(Error::ResourceLimit(format!("repair search exceeded {} nodes", self.cfg.node_budget)));
        }
        let ev = &self.lab.events;
        'propagate: loop {
            if quotient_cycle(ev, &p).is_some() {
                return Ok(Outcome::Dead);
            }
            let q = quotients(self.lab, &p);
            if let Some((a, b, c)) = find_clash(&q) {
                return Ok(Outcome::Clash(a, b, c, p));
            }
            let mut pending: Option<(Vec<Cell>, Vec<Cell>)> = None;
            for &v in &self.vertices {
                if q[v.0].len() < 2 {
                    continue;
                }
                let cs = self.lab.configs(v);
                for (i, j) in (0..cs.len()).tuple_combinations() {
                    let qi = cs[i].config.map(|e| p.block_of(e));
                    let qj = cs[j].config.map(|e| p.block_of(e));
                    if qi == qj {
                        continue;
                    }
                    let (a, b) = Self::strip(&self.seq[v.0][i], &self.seq[v.0][j]);
                    if a.len() == 2 {
                        p.merge(ev.label(a[0]), ev.label(b[1]));
                        p.merge(ev.label(b[0]), ev.label(a[1]));
                        continue 'propagate;
                    }
                    if pending.is_none() {
                        pending = Some((a, b));
                    }
                }
            }
            let Some((a, b)) = pending else {
                return Ok(Outcome::Found(p));
            };
            let n = a.len();
            self.stats.branch_points += 1;
            for tau in (0..n).permutations(n) {
                if tau[0] == 0 || tau[n - 1] == n - 1 {
                    continue;
                }
                let mut next = p.clone();
                for i in 0..n {
                    next.merge(ev.label(a[i]), ev.label(b[tau[i]]));
                }
                if next == p || quotient_cycle(ev, &next).is_some() {
                    continue;
                }
                match self.run(next)? {
                    Outcome::Found(f) => return Ok(Outcome::Found(f)),
                    _ => self.stats.backtracks += 1,
                }
            }
            return Ok(Outcome::Dead);
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

/// Repair search from the identity identification.
pub fn repair_search(hda: &Hda, lab: &Labeling, cfg: &SearchConfig) -> Result<SearchResult> {
    repair_search_from(hda, lab, cfg, Partition::discrete(lab.events.len()))
}

/// Repair search starting from a given identification.
pub fn repair_search_from(hda: &Hda, lab: &Labeling, cfg: &SearchConfig, start: Partition) -> Result<SearchResult> {
    repair_search_prioritized(hda, lab, cfg, start, &[])
}

/// Repair search treating conflicts at the 0-cells in `first` before all others.
pub fn repair_search_prioritized(
    hda: &Hda,
    lab: &Labeling,
    cfg: &SearchConfig,
    start: Partition,
    first: &[Cell],
) -> Result<SearchResult> {
    if let Some(w) = length_mismatch(hda, lab) {
        return Ok(SearchResult { verdict: Verdict::NotSculptable(w), stats: SearchStats::default() });
    }
    let mut vertices: Vec<Cell> = first.iter().copied().filter(|&v| hda.dim(v) == 0).collect();
    vertices.extend(hda.of_dim(0).iter().filter(|v| !first.contains(v)));
    let mut r = Repair {
        lab,
        seq: sequential_witnesses(hda, lab)?,
        vertices,
        cfg: *cfg,
        stats: SearchStats::default(),
    };
    let outcome = r.run(start)?;
    let stats = r.stats;
    let verdict = match outcome {
        Outcome::Found(p) => {
            let sculpture = build_embedding(hda, lab, &p)?;
            Verdict::Sculptable { partition: p, sculpture }
        }
        Outcome::Clash(a, b, config, partition) if stats.branch_points == 0 => {
            Verdict::NotSculptable(Witness::LabelClash { a, b, config, partition })
        }
        _ => Verdict::NotSculptable(Witness::Exhausted {
            nodes: stats.nodes,
            branch_points: stats.branch_points,
            cross_checked: false,
        }),
    };
    Ok(SearchResult { verdict, stats })
}

/// Constraints of properness that only involve events below some index.
struct Constraints {
    /// Configurations whose started events must stay pairwise apart.
    apart: Vec<Vec<Vec<usize>>>,
    /// Pairs of configurations at one 0-cell that must become equal.
    equal: Vec<Vec<(StConfig, StConfig)>>,
    /// Pairs of configurations at distinct cells that must stay different.
    differ: Vec<Vec<(StConfig, StConfig)>>,
    /// Whether the order gains a generating pair at this depth.
    order: Vec<bool>,
}

fn depth_of(c: &StConfig) -> usize {
    c.s.iter().next_back().map_or(0, |&m| m + 1)
}

fn constraints(hda: &Hda, lab: &Labeling) -> Constraints {
    let n = lab.events.len();
    let mut k = Constraints {
        apart: vec![Vec::new(); n + 1],
        equal: vec![Vec::new(); n + 1],
        differ: vec![Vec::new(); n + 1],
        order: vec![false; n + 1],
    };
    let mut seen = BTreeSet::new();
    let all: Vec<(Cell, &StConfig)> =
        hda.cells().flat_map(|q| lab.configs(q).iter().map(move |l| (q, &l.config))).collect();
    for (_, c) in &all {
        if c.s.len() > 1 && seen.insert(c.s.clone()) {
            k.apart[depth_of(c)].push(c.s.iter().copied().collect());
        }
    }
    for &v in hda.of_dim(0) {
        for (a, b) in lab.configs(v).iter().tuple_combinations() {
            k.equal[depth_of(&a.config).max(depth_of(&b.config))].push((a.config.clone(), b.config.clone()));
        }
    }
    for (i, j) in (0..all.len()).tuple_combinations() {
        let ((qa, a), (qb, b)) = (all[i], all[j]);
        if qa != qb && a.s.len() == b.s.len() && a.t.len() == b.t.len() {
            k.differ[depth_of(a).max(depth_of(b))].push((a.clone(), b.clone()));
        }
    }
    for &(a, b) in lab.events.relation() {
        k.order[a.max(b) + 1] = true;
    }
    k
}

struct Brute<'a> {
    lab: &'a Labeling,
    k: Constraints,
    rgs: Vec<usize>,
    budget: u64,
    nodes: u64,
}

impl Brute<'_> {
    fn ok_at(&self, depth: usize) -> bool {
        let b = |e: usize| self.rgs[e];
        let qc = |c: &StConfig| c.map(b);
        if self.k.apart[depth].iter().any(|s| s.iter().map(|&e| b(e)).collect::<BTreeSet<_>>().len() < s.len()) {
            return false;
        }
        if self.k.equal[depth].iter().any(|(x, y)| qc(x) != qc(y)) {
            return false;
        }
        if self.k.differ[depth].iter().any(|(x, y)| qc(x) == qc(y)) {
            return false;
        }
        if self.k.order[depth] {
            let mut g = DiGraph::<(), ()>::new();
            let top = self.rgs[..depth].iter().max().map_or(0, |m| m + 1);
            for _ in 0..top {
                g.add_node(());
            }
            for &(x, y) in self.lab.events.relation() {
                if x < depth && y < depth && b(x) != b(y) {
                    g.update_edge(NodeIndex::new(b(x)), NodeIndex::new(b(y)), ());
                }
            }
            if petgraph::algo::is_cyclic_directed(&g) {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self, depth: usize) -> Result<Option<Partition>> {
        let n = self.lab.events.len();
        if depth == n {
            let p = Partition::from_labels(&self.rgs);
            return Ok(check_proper(self.lab, &p).is_ok().then_some(p));
        }
        let top = self.rgs[..depth].iter().max().map_or(0, |m| m + 1);
        for v in 0..=top {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::ResourceLimit(format!("exhaustive search exceeded {} nodes", self.budget)));
            }
            self.rgs[depth] = v;
            if self.ok_at(depth + 1) {
                if let Some(p) = self.dfs(depth + 1)? {
                    return Ok(Some(p));
                }
            }
        }
        Ok(None)
    }
}

/// The first proper identification in restricted-growth order, found by
/// enumerating all partitions of the universal events. Prefixes are cut
/// only once a constraint among their own events fails.
pub fn brute_force_search(hda: &Hda, lab: &Labeling, cfg: &SearchConfig) -> Result<SearchResult> {
    let n = lab.events.len();
    if n > cfg.max_events {
        return Err(Error::ResourceLimit(format!("{n} events exceed the exhaustive bound {}", cfg.max_events)));
    }
    let mut b = Brute { lab, k: constraints(hda, lab), rgs: vec![0; n], budget: cfg.node_budget, nodes: 0 };
    let found = if b.ok_at(0) { b.dfs(0)? } else { None };
    let stats = SearchStats { nodes: b.nodes, ..SearchStats::default() };
    let verdict = match found {
        Some(p) => {
            let sculpture = build_embedding(hda, lab, &p)?;
            Verdict::Sculptable { partition: p, sculpture }
        }
        None => Verdict::NotSculptable(Witness::Exhausted { nodes: b.nodes, branch_points: 0, cross_checked: true }),
    };
    Ok(SearchResult { verdict, stats })
}

/// The full decision: connectivity, order, repeating events, labelling, search.
pub fn decide_with(hda: &Hda, cfg: &SearchConfig, engine: Engine) -> Result<Decision> {
    if let Err(c) = is_connected(hda) {
        return Err(Error::NotConnected(hda.id(c).to_string()));
    }
    let events = universal_events(hda);
    let early = |w: Witness, events: UniversalEvents| Decision {
        verdict: Verdict::NotSculptable(w),
        events,
        stats: SearchStats::default(),
    };
    if let Err(cycle) = events.orderedness() {
        return Ok(early(Witness::NotOrdered { cycle }, events));
    }
    if let Some(path) = repeating_events(hda, &events) {
        return Ok(early(Witness::RepeatingEvents { path }, events));
    }
    let lab = hintost_unchecked(hda, events);
    let result = match engine {
        Engine::BruteForce => brute_force_search(hda, &lab, cfg)?,
        Engine::Repair => {
            let mut r = repair_search(hda, &lab, cfg)?;
            if let Verdict::NotSculptable(Witness::Exhausted { cross_checked, .. }) = &mut r.verdict {
                if lab.events.len() <= cfg.cross_check_bound {
                    if brute_force_search(hda, &lab, cfg)?.verdict.is_sculptable() {
                        return Err(Error::Disagreement("repair search missed a proper identification".into()));
                    }
                    *cross_checked = true;
                }
            }
            r
        }
    };
    Ok(Decision { verdict: result.verdict, events: lab.events, stats: result.stats })
}

pub fn decide_sculptable(hda: &Hda, cfg: &SearchConfig) -> Result<Decision> {
    decide_with(hda, cfg, Engine::Repair)
}
