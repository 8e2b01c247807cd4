//! ST-structures, their quotients and Chu spaces over 3.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A set of event indices.
pub type Events = BTreeSet<usize>;

/// A configuration `(S, T)` with `T ⊆ S`: started and terminated events.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StConfig {
    pub s: Events,
    pub t: Events,
}

impl StConfig {
    pub fn new(s: impl IntoIterator<Item = usize>, t: impl IntoIterator<Item = usize>) -> Self {
        Self { s: s.into_iter().collect(), t: t.into_iter().collect() }
    }

    /// Events that are running: `S \ T`.
    pub fn running(&self) -> Events {
        self.s.difference(&self.t).copied().collect()
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        Self { s: self.s.iter().map(|&e| f(e)).collect(), t: self.t.iter().map(|&e| f(e)).collect() }
    }

    pub fn show(&self, names: &[String]) -> String {
        let set = |x: &Events| x.iter().map(|&e| names[e].as_str()).collect::<Vec<_>>().join(",");
        format!("({{{}}}, {{{}}})", set(&self.s), set(&self.t))
    }
}

/// A set of configurations over named events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StStructure {
    events: Vec<String>,
    configs: BTreeSet<StConfig>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureGap {
    pub config: StConfig,
    pub event: usize,
    pub missing: StConfig,
}

/// Regularity of an ST-structure, with the first counterexample of each kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityReport {
    pub rooted: bool,
    pub unreachable: Option<StConfig>,
    pub not_closed: Option<ClosureGap>,
}

impl RegularityReport {
    pub fn connected(&self) -> bool {
        self.unreachable.is_none()
    }

    pub fn closed(&self) -> bool {
        self.not_closed.is_none()
    }

    pub fn is_regular(&self) -> bool {
        self.rooted && self.connected() && self.closed()
    }
}

impl StStructure {
    pub fn new(events: Vec<String>, configs: impl IntoIterator<Item = StConfig>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &events {
            if !seen.insert(e) {
                return Err(Error::InvalidSt(format!("event {e} listed twice")));
            }
        }
        let configs: BTreeSet<StConfig> = configs.into_iter().collect();
        for c in &configs {
            if !c.t.is_subset(&c.s) {
                return Err(Error::InvalidSt("T is not contained in S".into()));
            }
            if c.s.iter().any(|&e| e >= events.len()) {
                return Err(Error::InvalidSt("configuration uses an unknown event".into()));
            }
        }
        Ok(Self { events, configs })
    }

    /// Builds from event names; configurations list names too.
    pub fn from_names(events: &[&str], configs: &[(&[&str], &[&str])]) -> Result<Self> {
        let ev: Vec<String> = events.iter().map(|s| s.to_string()).collect();
        let idx = |n: &str| ev.iter().position(|e| e == n).ok_or_else(|| Error::InvalidSt(format!("unknown event {n}")));
        let mut cs = Vec::new();
        for (s, t) in configs {
            let s = s.iter().map(|n| idx(n)).collect::<Result<Events>>()?;
            let t = t.iter().map(|n| idx(n)).collect::<Result<Events>>()?;
            cs.push(StConfig { s, t });
        }
        Self::new(ev, cs)
    }

    pub fn events(&self) -> &[String] {
        &self.events
    }

    pub fn configs(&self) -> &BTreeSet<StConfig> {
        &self.configs
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn contains(&self, c: &StConfig) -> bool {
        self.configs.contains(c)
    }

    /// Single steps: start one event not yet started, or terminate one running event.
    pub fn successors(&self, c: &StConfig) -> Vec<StConfig> {
        let mut out = Vec::new();
        for e in 0..self.events.len() {
            if !c.s.contains(&e) {
                let mut n = c.clone();
                n.s.insert(e);
                out.push(n);
            } else if !c.t.contains(&e) {
                let mut n = c.clone();
                n.t.insert(e);
                out.push(n);
            }
        }
        out.retain(|n| self.configs.contains(n));
        out
    }

    pub fn check_regular(&self) -> RegularityReport {
        let root = StConfig::default();
        let rooted = self.configs.contains(&root);
        let mut seen = HashSet::new();
        if rooted {
            let mut queue = VecDeque::from([root.clone()]);
            seen.insert(root);
            while let Some(c) = queue.pop_front() {
                for n in self.successors(&c) {
                    if seen.insert(n.clone()) {
                        queue.push_back(n);
                    }
                }
            }
        }
        let unreachable = self.configs.iter().find(|c| !seen.contains(*c)).cloned();
        let mut not_closed = None;
        'outer: for c in &self.configs {
            for e in c.running() {
                let mut up = c.clone();
                up.t.insert(e);
                let mut down = c.clone();
                down.s.remove(&e);
                for missing in [up, down] {
                    if !self.configs.contains(&missing) {
                        not_closed = Some(ClosureGap { config: c.clone(), event: e, missing });
                        break 'outer;
                    }
                }
            }
        }
        RegularityReport { rooted, unreachable, not_closed }
    }

    pub fn is_regular(&self) -> bool {
        self.check_regular().is_regular()
    }

    /// Whether some configuration contains two distinct equivalent events.
    pub fn is_collapsing(&self, p: &Partition) -> bool {
        self.configs.iter().any(|c| {
            let blocks: BTreeSet<usize> = c.s.iter().map(|&e| p.block_of(e)).collect();
            blocks.len() < c.s.len()
        })
    }

    /// Quotient by an event partition; events of the result are its blocks.
    pub fn quotient(&self, p: &Partition) -> Result<StStructure> {
        if p.len() != self.events.len() {
            return Err(Error::InvalidSt("partition size differs from event count".into()));
        }
        let names = p
            .blocks()
            .iter()
            .map(|b| b.iter().map(|&e| self.events[e].as_str()).collect::<Vec<_>>().join("~"))
            .collect();
        let configs = self.configs.iter().map(|c| c.map(|e| p.block_of(e)));
        StStructure::new(names, configs)
    }

    /// Same structure with events renamed by position.
    pub fn rename(&self, events: Vec<String>) -> Result<StStructure> {
        if events.len() != self.events.len() {
            return Err(Error::InvalidSt("renaming changes the event count".into()));
        }
        StStructure::new(events, self.configs.iter().cloned())
    }

    /// Whether `perm` (old index → new index) maps `self` onto `other`.
    pub fn isomorphic_via(&self, other: &StStructure, perm: &[usize]) -> bool {
        perm.len() == self.events.len()
            && self.events.len() == other.events.len()
            && self.configs.len() == other.configs.len()
            && self.configs.iter().all(|c| other.configs.contains(&c.map(|e| perm[e])))
    }

    pub fn to_json(&self) -> StJson {
        StJson {
            events: self.events.clone(),
            configs: self
                .configs
                .iter()
                .map(|c| {
                    let names = |x: &Events| x.iter().map(|&e| self.events[e].clone()).collect();
                    (names(&c.s), names(&c.t))
                })
                .collect(),
        }
    }

    pub fn from_json(json: &StJson) -> Result<Self> {
        let idx = |n: &String| {
            json.events.iter().position(|e| e == n).ok_or_else(|| Error::InvalidSt(format!("unknown event {n}")))
        };
        let mut configs = Vec::new();
        for (s, t) in &json.configs {
            configs.push(StConfig {
                s: s.iter().map(idx).collect::<Result<_>>()?,
                t: t.iter().map(idx).collect::<Result<_>>()?,
            });
        }
        Self::new(json.events.clone(), configs)
    }
}

impl fmt::Display for StStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.configs.iter().map(|c| c.show(&self.events)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// JSON form: events plus configurations as `[S, T]` pairs of name lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StJson {
    pub events: Vec<String>,
    pub configs: Vec<(Vec<String>, Vec<String>)>,
}

/// A value of the three-element Chu alphabet: not started, running, done.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tri {
    Zero,
    Half,
    One,
}

impl Tri {
    pub fn to_char(self) -> char {
        match self {
            Tri::Zero => '0',
            Tri::Half => 'x',
            Tri::One => '1',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Tri::Zero),
            'x' | 'X' => Some(Tri::Half),
            '1' => Some(Tri::One),
            _ => None,
        }
    }
}

pub fn tuple_string(x: &[Tri]) -> String {
    x.iter().map(|t| t.to_char()).collect()
}

pub fn parse_tuple(s: &str) -> Result<Vec<Tri>> {
    s.chars().map(|c| Tri::from_char(c).ok_or_else(|| Error::Parse(format!("bad tuple character {c:?} in {s:?}")))).collect()
}

/// A Chu space over `{0, ½, 1}`: each state is a row indexed by events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChuSpace {
    pub events: Vec<String>,
    pub states: Vec<Vec<Tri>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChuJson {
    pub events: Vec<String>,
    pub states: Vec<String>,
}

impl ChuSpace {
    /// Events are separable when no two of them take equal values in every state.
    pub fn is_separable(&self) -> bool {
        let mut cols = HashSet::new();
        (0..self.events.len()).all(|e| cols.insert(self.states.iter().map(|x| x[e]).collect::<Vec<_>>()))
    }

    pub fn to_json(&self) -> ChuJson {
        ChuJson { events: self.events.clone(), states: self.states.iter().map(|x| tuple_string(x)).collect() }
    }

    pub fn from_json(json: &ChuJson) -> Result<Self> {
        let states = json.states.iter().map(|s| parse_tuple(s)).collect::<Result<Vec<_>>>()?;
        let chu = ChuSpace { events: json.events.clone(), states };
        chu.check_widths()?;
        Ok(chu)
    }

    fn check_widths(&self) -> Result<()> {
        match self.states.iter().find(|x| x.len() != self.events.len()) {
            Some(x) => Err(Error::Parse(format!("state {} has the wrong width", tuple_string(x)))),
            None => Ok(()),
        }
    }

    /// Text grid: an `events` header line, then one `0x1` row per state.
    pub fn to_text(&self) -> String {
        let mut out = format!("events {}\n", self.events.join(" "));
        for x in &self.states {
            out.push_str(&tuple_string(x));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty Chu grid".into()))?;
        let mut words = header.split_whitespace();
        if words.next() != Some("events") {
            return Err(Error::Parse("Chu grid must start with an `events` line".into()));
        }
        let events: Vec<String> = words.map(String::from).collect();
        let states = lines.map(parse_tuple).collect::<Result<Vec<_>>>()?;
        let chu = ChuSpace { events, states };
        chu.check_widths()?;
        Ok(chu)
    }
}

pub fn config_to_tuple(c: &StConfig, n: usize) -> Vec<Tri> {
    (0..n)
        .map(|e| {
            if c.t.contains(&e) {
                Tri::One
            } else if c.s.contains(&e) {
                Tri::Half
            } else {
                Tri::Zero
            }
        })
        .collect()
}

pub fn tuple_to_config(x: &[Tri]) -> StConfig {
    let mut c = StConfig::default();
    for (e, &v) in x.iter().enumerate() {
        match v {
            Tri::Zero => {}
            Tri::Half => {
                c.s.insert(e);
            }
            Tri::One => {
                c.s.insert(e);
                c.t.insert(e);
            }
        }
    }
    c
}

/// States follow the configuration order of the structure.
pub fn st_to_chu(st: &StStructure) -> ChuSpace {
    let n = st.events().len();
    ChuSpace { events: st.events().to_vec(), states: st.configs().iter().map(|c| config_to_tuple(c, n)).collect() }
}

pub fn chu_to_st(chu: &ChuSpace) -> Result<StStructure> {
    let mut seen = HashSet::new();
    for x in &chu.states {
        if !seen.insert(x) {
            return Err(Error::NonExtensional(tuple_string(x)));
        }
    }
    StStructure::new(chu.events.clone(), chu.states.iter().map(|x| tuple_to_config(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_conversion() {
        let c = tuple_to_config(&[Tri::One, Tri::Half, Tri::Half, Tri::Zero]);
        assert_eq!(c, StConfig::new([0, 1, 2], [0]));
        assert_eq!(config_to_tuple(&c, 4), vec![Tri::One, Tri::Half, Tri::Half, Tri::Zero]);
    }

    #[test]
    fn lone_terminated_event_is_not_regular() {
        let st = StStructure::from_names(&["a"], &[(&[], &[]), (&["a"], &["a"])]).unwrap();
        let r = st.check_regular();
        assert!(r.rooted);
        assert!(!r.connected());
        // nothing is running in ({a},{a}), so closure holds vacuously
        assert!(r.closed());
    }

    #[test]
    fn duplicate_state_is_rejected() {
        let chu = ChuSpace { events: vec!["a".into()], states: vec![vec![Tri::Zero], vec![Tri::Zero]] };
        assert!(matches!(chu_to_st(&chu), Err(Error::NonExtensional(_))));
    }

    #[test]
    fn text_grid_roundtrip() {
        let chu = ChuSpace {
            events: vec!["a".into(), "b".into()],
            states: vec![vec![Tri::Zero, Tri::Zero], vec![Tri::Half, Tri::Zero], vec![Tri::One, Tri::Half]],
        };
        assert_eq!(ChuSpace::from_text(&chu.to_text()).unwrap(), chu);
        assert!(chu.is_separable());
    }

    #[test]
    fn bad_config_rejected() {
        assert!(StStructure::new(vec!["a".into()], [StConfig::new([], [0])]).is_err());
    }
}
