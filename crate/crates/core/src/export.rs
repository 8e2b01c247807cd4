//! Verdict JSON and DOT/TikZ renderings of HDA.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decide::{Decision, Verdict, Witness};
use crate::error::{Error, Result};
use crate::events::{universal_events, UniversalEvents};
use crate::partition::Partition;
use crate::precubical::{Cell, Hda};
use crate::st::{tuple_string, StConfig};

/// Machine-readable verdict, the stable output of `check` and `oracle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub sculptable: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub partition: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub embedding: Option<IndexMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Value>,
}

fn partition_names(events: &UniversalEvents, p: &Partition) -> Vec<Vec<String>> {
    p.blocks().iter().map(|b| b.iter().map(|&e| events.name(e).to_string()).collect()).collect()
}

/// A block is shown by the name of its first member.
fn block_names(events: &UniversalEvents, p: &Partition) -> Vec<String> {
    p.blocks().iter().map(|b| events.name(b[0]).to_string()).collect()
}

fn show_config(config: &StConfig, names: &[String]) -> String {
    config.show(names)
}

pub fn witness_json(hda: &Hda, events: &UniversalEvents, w: &Witness) -> Value {
    let names = events.names();
    let id = |c: Cell| hda.id(c).to_string();
    match w {
        Witness::RepeatingEvents { path } => json!({ "kind": w.kind(), "path": path.describe(hda) }),
        Witness::NotOrdered { cycle } => {
            json!({ "kind": w.kind(), "cycle": cycle.iter().map(|&e| names[e].clone()).collect::<Vec<_>>() })
        }
        Witness::LengthMismatch { cell, a, b, path_a, path_b } => json!({
            "kind": w.kind(),
            "cell": id(*cell),
            "configs": [show_config(a, names), show_config(b, names)],
            "paths": [path_a.describe(hda), path_b.describe(hda)],
        }),
        Witness::LabelClash { a, b, config, partition } => json!({
            "kind": w.kind(),
            "cells": [id(*a), id(*b)],
            "config": show_config(config, &block_names(events, partition)),
            "partition": partition_names(events, partition),
        }),
        Witness::Exhausted { nodes, branch_points, cross_checked } => json!({
            "kind": w.kind(),
            "nodes": nodes,
            "branch_points": branch_points,
            "cross_checked": cross_checked,
        }),
    }
}

pub fn verdict_json(hda: &Hda, decision: &Decision) -> VerdictJson {
    match &decision.verdict {
        Verdict::Sculptable { partition, sculpture } => VerdictJson {
            sculptable: true,
            d: Some(sculpture.d),
            partition: Some(partition_names(&decision.events, partition)),
            embedding: Some(sculpture.to_json().embedding),
            witness: None,
        },
        Verdict::NotSculptable(w) => VerdictJson {
            sculptable: false,
            d: None,
            partition: None,
            embedding: None,
            witness: Some(witness_json(hda, &decision.events, w)),
        },
    }
}

/// Error object printed on exit code 2.
pub fn error_json(e: &Error) -> Value {
    json!({ "error": e.kind(), "message": e.to_string() })
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering: 0-cells as points, 1-cells as arrows labelled by
/// their universal event, 2-cells as gray boxes tied to their corners.
pub fn to_dot(hda: &Hda) -> String {
    let ev = universal_events(hda);
    let mut out = String::from("digraph hda {\n  rankdir=LR;\n  node [shape=circle, width=0.25, fixedsize=true, label=\"\"];\n");
    for &v in hda.of_dim(0) {
        let extra = if v == hda.initial { ", style=filled, fillcolor=black" } else { "" };
        let _ = writeln!(out, "  {} [xlabel={}{extra}];", quote(hda.id(v)), quote(hda.id(v)));
    }
    for &e in hda.of_dim(1) {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(hda.id(hda.src(1, e))),
            quote(hda.id(hda.tgt(1, e))),
            quote(ev.name(ev.label(e)))
        );
    }
    for &q in hda.of_dim(2) {
        let id = format!("sq:{}", hda.id(q));
        let _ = writeln!(
            out,
            "  {} [shape=box, style=filled, fillcolor=gray85, color=gray60, fixedsize=false, label={}];",
            quote(&id),
            quote(hda.id(q))
        );
        for corner in [hda.bottom_corner(q), hda.top_corner(q)] {
            let _ = writeln!(out, "  {} -> {} [style=dotted, arrowhead=none, constraint=false];", quote(&id), quote(hda.id(corner)));
        }
    }
    out.push_str("}\n");
    out
}

/// Layered coordinates: column by longest path from the initial cell,
/// row by order of appearance within the column.
fn layout(hda: &Hda) -> Vec<(f64, f64)> {
    let vs = hda.of_dim(0);
    let mut depth = vec![0usize; hda.len()];
    // relax edges until stable; the graph of an acyclic HDA has no positive cycles
    for _ in 0..vs.len() {
        let mut changed = false;
        for &e in hda.of_dim(1) {
            let (a, b) = (hda.src(1, e), hda.tgt(1, e));
            if depth[b.0] < depth[a.0] + 1 && depth[a.0] < vs.len() {
                depth[b.0] = depth[a.0] + 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut rows: IndexMap<usize, usize> = IndexMap::new();
    let mut pos = vec![(0.0, 0.0); hda.len()];
    for &v in vs {
        let r = rows.entry(depth[v.0]).or_insert(0);
        pos[v.0] = (depth[v.0] as f64 * 1.5, *r as f64 * 1.5);
        *r += 1;
    }
    pos
}

/// TikZ picture in the usual style: black dots, labelled arrows, gray squares.
pub fn to_tikz(hda: &Hda) -> Result<String> {
    if hda.max_dim() > 2 {
        return Err(Error::Unsupported("TikZ export draws at most 2-dimensional HDA".into()));
    }
    let ev = universal_events(hda);
    let pos = layout(hda);
    let node = |c: Cell| format!("v{}", c.0);
    let mut out = String::from("\\begin{tikzpicture}[x=1cm, y=1cm, >=stealth]\n");
    for &q in hda.of_dim(2) {
        let (b, t) = (hda.bottom_corner(q), hda.top_corner(q));
        let l = hda.tgt(1, hda.src(1, q));
        let pts: Vec<String> = [b, hda.tgt(1, hda.src(2, q)), t, l]
            .iter()
            .map(|&c| format!("({:.2},{:.2})", pos[c.0].0, pos[c.0].1))
            .collect();
        let _ = writeln!(out, "  \\fill[gray!25] {} -- cycle;", pts.join(" -- "));
    }
    for &v in hda.of_dim(0) {
        let (x, y) = pos[v.0];
        let style = if v == hda.initial { "circle, fill, inner sep=1.8pt" } else { "circle, fill, inner sep=1.2pt" };
        let _ = writeln!(out, "  \\node[{style}, label=below:{{\\scriptsize {}}}] ({}) at ({x:.2},{y:.2}) {{}};", hda.id(v), node(v));
    }
    for &e in hda.of_dim(1) {
        let _ = writeln!(
            out,
            "  \\draw[->] ({}) -- node[auto, font=\\scriptsize] {{${}$}} ({});",
            node(hda.src(1, e)),
            ev.name(ev.label(e)),
            node(hda.tgt(1, e))
        );
    }
    out.push_str("\\end{tikzpicture}\n");
    Ok(out)
}

/// The embedding as `id -> tuple` lines, for eyeballing.
pub fn embedding_text(sc: &crate::bulk::Sculpture) -> String {
    sc.hda.cells().map(|q| format!("{} {}\n", sc.hda.id(q), tuple_string(sc.image(q)))).collect()
}
