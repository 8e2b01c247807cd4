//! PV programs and the cubical complex of their safe states.

use std::fmt;

use thiserror::Error;

use crate::error::Error as CoreError;
use crate::euclid::{complex_to_hda, AxisPos, Cube, EuclideanComplex, GRID_CELL_BOUND};
use crate::path::reachable_part;
use crate::precubical::Hda;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PvError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}, column {col}: V({resource}) without a matching P")]
    UnmatchedV { line: usize, col: usize, resource: String },
    #[error("line {line}: process ends holding {resource}")]
    HeldAtEnd { line: usize, resource: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Capacity {
    Finite(u32),
    Unbounded,
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(k) => write!(f, "{k}"),
            Capacity::Unbounded => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resource {
    pub name: String,
    pub capacity: Capacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    P,
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Action {
    pub op: Op,
    pub resource: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PvProgram {
    pub resources: Vec<Resource>,
    pub processes: Vec<Vec<Action>>,
}

fn is_ident(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn parse_pv(text: &str) -> Result<PvProgram, PvError> {
    let mut prog = PvProgram::default();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        if words[0] == "resource" {
            let syntax = |message: &str| PvError::Syntax { line, col: 1, message: message.to_string() };
            if !prog.processes.is_empty() {
                return Err(syntax("resource lines must come before the processes"));
            }
            let [_, name, kw, cap] = words.as_slice() else {
                return Err(syntax("expected `resource <name> capacity <k>`"));
            };
            if *kw != "capacity" || !name.chars().all(is_ident) {
                return Err(syntax("expected `resource <name> capacity <k>`"));
            }
            let capacity = match *cap {
                "inf" => Capacity::Unbounded,
                k => match k.parse::<u32>() {
                    Ok(n) if n > 0 => Capacity::Finite(n),
                    _ => return Err(syntax("capacity must be a positive integer or `inf`")),
                },
            };
            if prog.resources.iter().any(|r| r.name == *name) {
                return Err(syntax("resource declared twice"));
            }
            prog.resources.push(Resource { name: name.to_string(), capacity });
            continue;
        }
        prog.processes.push(parse_process(&mut prog.resources, content, line)?);
    }
    Ok(prog)
}

fn parse_process(resources: &mut Vec<Resource>, content: &str, line: usize) -> Result<Vec<Action>, PvError> {
    let chars: Vec<char> = content.chars().collect();
    let mut i = 0;
    let mut actions = Vec::new();
    let mut held: Vec<i64> = vec![0; resources.len()];
    let err = |col: usize, message: &str| PvError::Syntax { line, col: col + 1, message: message.to_string() };
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let op = match chars[i] {
            'P' => Op::P,
            'V' => Op::V,
            _ => return Err(err(i, "expected P(..) or V(..)")),
        };
        i += 1;
        if chars.get(i) != Some(&'(') {
            return Err(err(i, "expected `(`"));
        }
        i += 1;
        let name_start = i;
        while i < chars.len() && is_ident(chars[i]) {
            i += 1;
        }
        if i == name_start {
            return Err(err(i, "expected a resource name"));
        }
        let name: String = chars[name_start..i].iter().collect();
        if chars.get(i) != Some(&')') {
            return Err(err(i, "expected `)`"));
        }
        i += 1;
        let r = match resources.iter().position(|x| x.name == name) {
            Some(r) => r,
            None => {
                resources.push(Resource { name: name.clone(), capacity: Capacity::Finite(1) });
                resources.len() - 1
            }
        };
        held.resize(resources.len(), 0);
        match op {
            Op::P => held[r] += 1,
            Op::V => {
                if held[r] == 0 {
                    return Err(PvError::UnmatchedV { line, col: start + 1, resource: name });
                }
                held[r] -= 1;
            }
        }
        actions.push(Action { op, resource: r });
    }
    if let Some(r) = held.iter().position(|&h| h > 0) {
        return Err(PvError::HeldAtEnd { line, resource: resources[r].name.clone() });
    }
    Ok(actions)
}

impl PvProgram {
    /// Whether process `k` holds resource `r` after its first `j` actions.
    pub fn holds_at(&self, k: usize, r: usize, j: usize) -> bool {
        let mut n = 0i64;
        for a in &self.processes[k][..j] {
            if a.resource == r {
                n += if a.op == Op::P { 1 } else { -1 };
            }
        }
        n > 0
    }

    /// Holding on the interior of a cell along one axis. A process holds `r`
    /// on the open interval from the state after its `P(r)` to the state
    /// after its `V(r)`, so the forbidden regions are open: a span holds if
    /// its lower end does, a state only if the span before it holds too.
    pub fn holds(&self, k: usize, r: usize, pos: AxisPos) -> bool {
        match pos {
            AxisPos::At(0) => false,
            AxisPos::At(j) => self.holds_at(k, r, j as usize - 1) && self.holds_at(k, r, j as usize),
            AxisPos::Span(j) => self.holds_at(k, r, j as usize),
        }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.processes.iter().map(Vec::len).collect()
    }

    /// Whether a grid cell respects every capacity.
    pub fn allowed(&self, x: &[AxisPos]) -> bool {
        self.resources.iter().enumerate().all(|(r, res)| match res.capacity {
            Capacity::Unbounded => true,
            Capacity::Finite(cap) => {
                (0..x.len()).filter(|&k| self.holds(k, r, x[k])).count() as u64 <= u64::from(cap)
            }
        })
    }
}

/// The safe complex of a program and the HDA of its part reachable from
/// the start corner.
#[derive(Debug, Clone)]
pub struct PvModel {
    pub complex: EuclideanComplex,
    pub hda: Hda,
}

pub fn pv_to_complex(prog: &PvProgram) -> Result<PvModel, CoreError> {
    let sizes = prog.sizes();
    let total = sizes.iter().try_fold(1usize, |acc, &m| acc.checked_mul(2 * m + 1));
    if total.is_none_or(|t| t > GRID_CELL_BOUND) {
        return Err(CoreError::ResourceLimit("program state space is too large".into()));
    }
    let mut cells: Vec<Vec<AxisPos>> = vec![Vec::new()];
    for &m in &sizes {
        let m = m as i64;
        let axis: Vec<AxisPos> = (0..=m).map(AxisPos::At).chain((0..m).map(AxisPos::Span)).collect();
        cells = cells
            .into_iter()
            .flat_map(|x| {
                axis.iter().map(move |&p| {
                    let mut y = x.clone();
                    y.push(p);
                    y
                })
            })
            .collect();
    }
    let kept = cells.iter().filter(|x| prog.allowed(x)).map(|x| Cube::from_positions(x));
    let complex = EuclideanComplex::new(sizes.len(), kept)?;
    let full = complex_to_hda(&complex, &vec![0; sizes.len()])?;
    debug_assert!(full.added.is_empty());
    let (hda, _) = reachable_part(&full.hda);
    Ok(PvModel { complex, hda })
}
