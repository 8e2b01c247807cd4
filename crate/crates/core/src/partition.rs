//! Set partitions in restricted-growth form.

use std::fmt;

/// A partition of `0..n`, stored as the block of each element with blocks
/// numbered by first occurrence (a restricted-growth string).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    block: Vec<usize>,
}

impl Partition {
    pub fn discrete(n: usize) -> Self {
        Self { block: (0..n).collect() }
    }

    pub fn single(n: usize) -> Self {
        Self { block: vec![0; n] }
    }

    /// Any labelling of elements; renumbered into restricted-growth form.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let block = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Self { block }
    }

    /// Blocks given as element lists; elements not mentioned become singletons.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Self {
        let mut labels: Vec<usize> = (0..n).map(|i| n + i).collect();
        for (b, members) in blocks.iter().enumerate() {
            for &m in members {
                labels[m] = b;
            }
        }
        Self::from_labels(&labels)
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn rgs(&self) -> &[usize] {
        &self.block
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block[x]
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.block[a] == self.block[b]
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &b) in self.block.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    /// Joins the blocks of `a` and `b`; returns whether anything changed.
    pub fn merge(&mut self, a: usize, b: usize) -> bool {
        let (ba, bb) = (self.block[a], self.block[b]);
        if ba == bb {
            return false;
        }
        let (keep, drop) = (ba.min(bb), ba.max(bb));
        let labels: Vec<usize> = self.block.iter().map(|&x| if x == drop { keep } else { x }).collect();
        *self = Self::from_labels(&labels);
        true
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        (0..self.len()).all(|x| (0..self.len()).all(|y| !self.same(x, y) || other.same(x, y)))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", blocks.join(" "))
    }
}

/// All partitions of `0..n` in lexicographic restricted-growth order.
pub fn all_partitions(n: usize) -> impl Iterator<Item = Partition> {
    let mut cur: Option<Vec<usize>> = Some(vec![0; n]);
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        cur = next_rgs(&out);
        Some(Partition { block: out })
    })
}

fn next_rgs(s: &[usize]) -> Option<Vec<usize>> {
    let mut s = s.to_vec();
    for i in (1..s.len()).rev() {
        let max_before = s[..i].iter().copied().max().unwrap_or(0);
        if s[i] <= max_before {
            s[i] += 1;
            for x in &mut s[i + 1..] {
                *x = 0;
            }
            return Some(s);
        }
    }
    None
}
