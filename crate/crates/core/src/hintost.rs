//! ST-labelling of the cells of an HDA by configurations of universal events.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::events::{repeating_events, universal_events, UniversalEvents};
use crate::path::{is_acyclic, is_connected, steps_from, Path};
use crate::precubical::{Cell, Dir, Hda, PrecubicalSet};
use crate::st::{StConfig, StStructure};

/// A configuration reached at a cell, with the first path found reaching it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelled {
    pub config: StConfig,
    pub witness: Path,
}

/// Every configuration of every cell, ordered by configuration.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub events: UniversalEvents,
    pub cells: Vec<Vec<Labelled>>,
}

impl Labeling {
    pub fn configs(&self, q: Cell) -> &[Labelled] {
        &self.cells[q.0]
    }

    /// The union of all configurations, over events named after their classes.
    pub fn to_st(&self) -> StStructure {
        let configs = self.cells.iter().flatten().map(|l| l.config.clone());
        StStructure::new(self.events.names().to_vec(), configs).expect("labels are valid configurations")
    }
}

/// Configuration reached along a path: `s_i` into `q` starts `λ_i(q)`,
/// `t_i` out of `q` terminates `λ_i(q)`.
pub fn path_config(set: &PrecubicalSet, ev: &UniversalEvents, path: &Path) -> StConfig {
    let mut c = StConfig::default();
    for (p, step) in path.steps.iter().enumerate() {
        match step.dir {
            Dir::S => {
                c.s.insert(ev.multilabel(set, step.to)[step.index - 1]);
            }
            Dir::T => {
                c.t.insert(ev.multilabel(set, path.before(p))[step.index - 1]);
            }
        }
    }
    c
}

/// Labels every cell of a connected, acyclic HDA without repeating events.
pub fn hintost(hda: &Hda) -> Result<Labeling> {
    if let Err(c) = is_connected(hda) {
        return Err(Error::NotConnected(hda.id(c).to_string()));
    }
    if let Err(cycle) = is_acyclic(hda) {
        return Err(Error::Cyclic(hda.id(cycle[0]).to_string()));
    }
    let events = universal_events(hda);
    if let Some(p) = repeating_events(hda, &events) {
        return Err(Error::RepeatingEvents(p.describe(hda)));
    }
    Ok(hintost_unchecked(hda, events))
}

/// The fixpoint without precondition checks; it terminates on acyclic input.
pub fn hintost_unchecked(hda: &Hda, events: UniversalEvents) -> Labeling {
    let labels: Vec<Vec<usize>> = hda.cells().map(|q| events.multilabel(hda, q)).collect();
    let mut found: Vec<BTreeMap<StConfig, Path>> = vec![BTreeMap::new(); hda.len()];
    let root = StConfig::default();
    found[hda.initial.0].insert(root.clone(), Path::empty(hda.initial));
    let mut queue = VecDeque::from([(hda.initial, root)]);
    while let Some((c, config)) = queue.pop_front() {
        let path = found[c.0][&config].clone();
        for step in steps_from(hda, c) {
            let mut next = config.clone();
            match step.dir {
                Dir::S => next.s.insert(labels[step.to.0][step.index - 1]),
                Dir::T => next.t.insert(labels[c.0][step.index - 1]),
            };
            if !found[step.to.0].contains_key(&next) {
                let mut p = path.clone();
                p.steps.push(step);
                found[step.to.0].insert(next.clone(), p);
                queue.push_back((step.to, next));
            }
        }
    }
    let cells = found
        .into_iter()
        .map(|m| m.into_iter().map(|(config, witness)| Labelled { config, witness }).collect())
        .collect();
    Labeling { events, cells }
}
