//! Seeded random HDA for property tests and oracle cross-checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::events::{has_non_repeating_events, universal_events};
use crate::path::{is_acyclic, is_connected};
use crate::precubical::{Hda, RawPrecubical};

#[derive(Debug, Clone, Copy)]
pub struct RandomHdaConfig {
    pub max_vertices: usize,
    pub edge_probability: f64,
    pub square_probability: f64,
    /// Share of draws whose edges only join consecutive levels.
    pub graded_fraction: f64,
    pub max_events: usize,
    /// Draws before giving up on meeting the constraints.
    pub attempts: usize,
}

impl Default for RandomHdaConfig {
    fn default() -> Self {
        Self { max_vertices: 10, edge_probability: 0.5, square_probability: 0.8, graded_fraction: 0.7, max_events: 6, attempts: 10_000 }
    }
}

/// A random DAG on vertices `v0 … vn` with edges going up in index, every
/// vertex reachable from `v0`, and some diamonds `a→b→d`, `a→c→d` filled
/// by squares in a random orientation. Graded draws put the vertices on
/// levels and only join consecutive ones.
pub fn random_candidate(rng: &mut impl Rng, cfg: &RandomHdaConfig) -> Hda {
    let n = rng.gen_range(2..=cfg.max_vertices.max(2));
    let graded = rng.gen_bool(cfg.graded_fraction);
    let level: Vec<usize> = if graded {
        let mut l = vec![0];
        for _ in 1..n {
            let top = *l.last().unwrap();
            l.push(if top == 0 || rng.gen_bool(0.5) { top + 1 } else { top });
        }
        l
    } else {
        (0..n).collect()
    };
    let joins = |i: usize, j: usize| if graded { level[j] == level[i] + 1 } else { i < j };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for j in 1..n {
        let preds: Vec<usize> = (0..j).filter(|&i| joins(i, j)).collect();
        edges.push((*preds.choose(rng).unwrap(), j));
        for &i in &preds {
            if !edges.contains(&(i, j)) && rng.gen_bool(cfg.edge_probability) {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    let mut raw = RawPrecubical::default();
    for v in 0..n {
        raw.vertex(&format!("v{v}"));
    }
    let ename = |&(a, b): &(usize, usize)| format!("e{a}_{b}");
    for e in &edges {
        raw.edge(&ename(e), &format!("v{}", e.0), &format!("v{}", e.1));
    }
    let mut squares = Vec::new();
    for a in 0..n {
        for d in a + 1..n {
            let mids: Vec<usize> = (a + 1..d).filter(|&m| edges.contains(&(a, m)) && edges.contains(&(m, d))).collect();
            for (x, &b) in mids.iter().enumerate() {
                for &c in &mids[x + 1..] {
                    if rng.gen_bool(cfg.square_probability) {
                        let (b, c) = if rng.gen_bool(0.5) { (b, c) } else { (c, b) };
                        squares.push((a, b, c, d));
                    }
                }
            }
        }
    }
    squares.shuffle(rng);
    for (k, &(a, b, c, d)) in squares.iter().enumerate() {
        // bottom a→b, left a→c, right b→d, top c→d
        let s = [ename(&(a, c)), ename(&(a, b))];
        let t = [ename(&(b, d)), ename(&(c, d))];
        raw.add(&format!("q{k}"), &[&s[0], &s[1]], &[&t[0], &t[1]]);
    }
    Hda::from_raw(&raw.with_initial("v0")).expect("diamond fillings are valid squares")
}

/// A connected acyclic HDA without repeating events and with at most
/// `cfg.max_events` universal events.
pub fn random_hda(rng: &mut impl Rng, cfg: &RandomHdaConfig) -> Result<Hda> {
    for _ in 0..cfg.attempts {
        let h = random_candidate(rng, cfg);
        if is_connected(&h).is_ok()
            && is_acyclic(&h).is_ok()
            && universal_events(&h).len() <= cfg.max_events
            && has_non_repeating_events(&h)
        {
            return Ok(h);
        }
    }
    Err(Error::ResourceLimit(format!("no admissible HDA in {} draws", cfg.attempts)))
}

pub fn random_hdas(seed: u64, count: usize, cfg: &RandomHdaConfig) -> Result<Vec<Hda>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_hda(&mut rng, cfg)).collect()
}
