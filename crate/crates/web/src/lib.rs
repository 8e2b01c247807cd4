//! Bindings behind the browser demo in `www/`.
//!
//! Every operation is a plain function from text to JSON text so it can be
//! tested natively; the `wasm` module only forwards to them.

use std::collections::HashSet;

use serde::Serialize;
use serde_json::{json, Value};

use sculpt::corpus::{fixture, fixtures};
use sculpt::decide::{decide_with, Engine, SearchConfig};
use sculpt::euclid::{grid_to_bulk, make_grid, position_id, AxisPos};
use sculpt::export::verdict_json;
use sculpt::precubical::Hda;
use sculpt::pv::{parse_pv, pv_to_complex, PvError};
use sculpt::st::tuple_string;

#[derive(Debug, thiserror::Error)]
pub enum WebError {
    #[error(transparent)]
    Core(#[from] sculpt::Error),
    #[error("program: {0}")]
    Pv(#[from] PvError),
    #[error("{0}")]
    Input(String),
}

/// Grids drawn in the page stay small.
const MAX_GRID_TOPS: usize = 64;

fn text<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("values built here serialize")
}

/// Name, description and expected verdict of every built-in fixture.
pub fn fixture_list() -> String {
    let list: Vec<Value> = fixtures()
        .iter()
        .map(|f| json!({ "name": f.name, "description": f.description, "expected": f.expected.summary() }))
        .collect();
    text(&list)
}

pub fn fixture_hda(name: &str) -> Result<String, WebError> {
    let f = fixture(name).ok_or_else(|| WebError::Input(format!("no fixture named {name}")))?;
    Ok(f.hda.to_json())
}

/// Decides an HDA given as JSON. The answer carries the verdict object of
/// the CLI plus cell counts per dimension.
pub fn check(hda_json: &str, oracle: bool) -> Result<String, WebError> {
    let hda = Hda::from_json(hda_json)?;
    let engine = if oracle { Engine::BruteForce } else { Engine::Repair };
    let d = decide_with(&hda, &SearchConfig::default(), engine)?;
    let cells: Vec<usize> = (0..=hda.max_dim()).map(|n| hda.of_dim(n).len()).collect();
    Ok(text(&json!({
        "cells": cells,
        "events": d.events.len(),
        "verdict": verdict_json(&hda, &d),
    })))
}

fn extent(p: AxisPos) -> [i64; 2] {
    [p.lo(), p.hi()]
}

/// The state space of a two process program as a board: every cell of the
/// surrounding grid, whether it is safe and whether it is reachable from
/// the start, and the verdict on the reachable part.
pub fn pv_board(program: &str) -> Result<String, WebError> {
    let prog = parse_pv(program)?;
    let sizes = prog.sizes();
    if sizes.len() != 2 {
        return Err(WebError::Input(format!("the board shows two processes, the program has {}", sizes.len())));
    }
    let model = pv_to_complex(&prog)?;
    let reachable: HashSet<&str> = model.hda.cells().map(|c| model.hda.id(c)).collect();
    let axis = |m: usize| -> Vec<AxisPos> {
        let m = m as i64;
        (0..=m).map(AxisPos::At).chain((0..m).map(AxisPos::Span)).collect()
    };
    let mut cells = Vec::new();
    let mut squares = 0;
    for &x in &axis(sizes[0]) {
        for &y in &axis(sizes[1]) {
            let id = position_id(&[x, y]);
            let allowed = prog.allowed(&[x, y]);
            let dim = [x, y].iter().filter(|p| matches!(p, AxisPos::Span(_))).count();
            squares += usize::from(allowed && dim == 2);
            cells.push(json!({
                "id": id,
                "x": extent(x),
                "y": extent(y),
                "dim": dim,
                "allowed": allowed,
                "reachable": reachable.contains(id.as_str()),
            }));
        }
    }
    let d = decide_with(&model.hda, &SearchConfig::default(), Engine::Repair)?;
    let names: Vec<&str> = prog.resources.iter().map(|r| r.name.as_str()).collect();
    Ok(text(&json!({
        "sizes": sizes,
        "resources": names,
        "squares": squares,
        "cells": cells,
        "verdict": verdict_json(&model.hda, &d),
    })))
}

/// A grid with one or two axes and the tuple of every cell in its bulk
/// embedding. `sizes` is a comma separated list such as `3,2`.
pub fn grid_embedding(sizes: &str) -> Result<String, WebError> {
    let sizes: Vec<usize> = sizes
        .split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| WebError::Input(format!("bad axis size {s:?}"))))
        .collect::<Result<_, _>>()?;
    if sizes.is_empty() || sizes.len() > 2 {
        return Err(WebError::Input("give one or two axis sizes".into()));
    }
    if sizes.iter().product::<usize>() > MAX_GRID_TOPS {
        return Err(WebError::Input(format!("at most {MAX_GRID_TOPS} top cells")));
    }
    let grid = make_grid(&sizes)?;
    let sc = grid_to_bulk(&grid)?;
    let cells: Vec<Value> = grid
        .hda
        .cells()
        .map(|c| {
            let x = &grid.cells[c.0];
            let y = x.get(1).copied().unwrap_or(AxisPos::At(0));
            json!({
                "id": grid.hda.id(c),
                "x": extent(x[0]),
                "y": extent(y),
                "dim": grid.hda.dim(c),
                "tuple": tuple_string(sc.image(c)),
            })
        })
        .collect();
    Ok(text(&json!({ "sizes": sizes, "d": sc.d, "cells": cells })))
}

#[cfg(target_arch = "wasm32")]
mod wasm {
    use wasm_bindgen::prelude::*;

    fn js(r: Result<String, super::WebError>) -> Result<String, JsError> {
        r.map_err(|e| JsError::new(&e.to_string()))
    }

    #[wasm_bindgen(js_name = fixtureList)]
    pub fn fixture_list() -> String {
        super::fixture_list()
    }

    #[wasm_bindgen(js_name = fixtureHda)]
    pub fn fixture_hda(name: &str) -> Result<String, JsError> {
        js(super::fixture_hda(name))
    }

    #[wasm_bindgen]
    pub fn check(hda_json: &str, oracle: bool) -> Result<String, JsError> {
        js(super::check(hda_json, oracle))
    }

    #[wasm_bindgen(js_name = pvBoard)]
    pub fn pv_board(program: &str) -> Result<String, JsError> {
        js(super::pv_board(program))
    }

    #[wasm_bindgen(js_name = gridEmbedding)]
    pub fn grid_embedding(sizes: &str) -> Result<String, JsError> {
        js(super::grid_embedding(sizes))
    }
}
