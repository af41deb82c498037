//! Exact rigidity test by colour refinement plus individualization.
//!
//! Colour refinement assigns each vertex the rank of
//! `(own colour, sorted multiset of neighbour colours)` until the number of
//! colours stops growing. Ranks are taken over the sorted set of signatures,
//! so refinement commutes with relabeling. When searching for an automorphism
//! two colourings are refined in lockstep and a branch is pruned as soon as
//! their signature multisets differ.
//!
//! The outer loop picks the first non-singleton cell and its smallest member
//! `v`, then searches for an automorphism mapping `v` to each other member. If
//! none exists every automorphism fixes `v`, so `v` is individualized and the
//! loop continues; a discrete colouring at that point proves rigidity. Every
//! automorphism reported is checked edge by edge.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::mag::Mag;

/// Search-node budget used by [`is_rigid`].
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Rigidity {
    Rigid,
    /// `witness[x]` is the image of composite vertex `x`.
    NonRigid {
        witness: Vec<usize>,
    },
    /// The node budget ran out before a decision.
    Undecided {
        nodes: u64,
    },
}

impl Rigidity {
    pub fn is_rigid(&self) -> Option<bool> {
        match self {
            Rigidity::Rigid => Some(true),
            Rigidity::NonRigid { .. } => Some(false),
            Rigidity::Undecided { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&[usize]> {
        match self {
            Rigidity::NonRigid { witness } => Some(witness),
            _ => None,
        }
    }
}

pub fn is_rigid(g: &Mag) -> Rigidity {
    is_rigid_with_budget(g, DEFAULT_NODE_BUDGET)
}

pub fn is_rigid_with_budget(g: &Mag, budget: u64) -> Rigidity {
    let n = g.n_composite();
    let adj: Vec<Vec<usize>> = (0..n).map(|a| g.neighbors(a).collect()).collect();
    let mut s = Search {
        adj: &adj,
        rows: g.rows(),
        budget,
        nodes: 0,
    };

    let mut colors = vec![0u32; n];
    s.refine(&mut [&mut colors]);
    while let Some(cell) = first_open_cell(&colors) {
        let members = members_of(&colors, cell);
        let v = members[0];
        for &w in &members[1..] {
            match s.search(individualize(&colors, v), individualize(&colors, w)) {
                Ok(Some(witness)) => return Rigidity::NonRigid { witness },
                Ok(None) => {}
                Err(Exhausted) => return Rigidity::Undecided { nodes: s.nodes },
            }
        }
        colors = individualize(&colors, v);
        s.refine(&mut [&mut colors]);
    }
    Rigidity::Rigid
}

/// Checks that `perm` is a permutation preserving adjacency.
pub fn is_automorphism(g: &Mag, perm: &[usize]) -> bool {
    let n = g.n_composite();
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    let rows = g.rows();
    g.index_edges()
        .all(|(a, b)| rows[perm[a]].contains(perm[b]))
}

struct Exhausted;

struct Search<'a> {
    adj: &'a [Vec<usize>],
    rows: &'a [FixedBitSet],
    budget: u64,
    nodes: u64,
}

type Signature = (u32, Vec<(u32, u32)>);

impl Search<'_> {
    fn signatures(&self, colors: &[u32]) -> Vec<Signature> {
        self.adj
            .iter()
            .enumerate()
            .map(|(v, nbrs)| {
                let mut nc: Vec<u32> = nbrs.iter().map(|&w| colors[w]).collect();
                nc.sort_unstable();
                let mut counts: Vec<(u32, u32)> = Vec::new();
                for c in nc {
                    match counts.last_mut() {
                        Some((last, k)) if *last == c => *k += 1,
                        _ => counts.push((c, 1)),
                    }
                }
                (colors[v], counts)
            })
            .collect()
    }

    /// Refines all colourings in lockstep. Returns false as soon as their
    /// signature multisets disagree.
    fn refine(&self, colorings: &mut [&mut Vec<u32>]) -> bool {
        let mut n_colors = distinct(colorings[0]);
        loop {
            let sigs: Vec<Vec<Signature>> = colorings.iter().map(|c| self.signatures(c)).collect();
            let mut sorted: Vec<Vec<&Signature>> = sigs
                .iter()
                .map(|s| {
                    let mut v: Vec<&Signature> = s.iter().collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            if sorted.windows(2).any(|w| w[0] != w[1]) {
                return false;
            }
            let mut keys = sorted.swap_remove(0);
            keys.dedup();
            for (c, s) in colorings.iter_mut().zip(&sigs) {
                for (v, sig) in s.iter().enumerate() {
                    c[v] = keys.binary_search(&sig).expect("signature present") as u32;
                }
            }
            if keys.len() == n_colors {
                return true;
            }
            n_colors = keys.len();
        }
    }

    fn search(
        &mut self,
        mut c1: Vec<u32>,
        mut c2: Vec<u32>,
    ) -> Result<Option<Vec<usize>>, Exhausted> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Exhausted);
        }
        if !self.refine(&mut [&mut c1, &mut c2]) {
            return Ok(None);
        }
        let Some(cell) = first_open_cell(&c1) else {
            let mut by_color = vec![0usize; c2.len()];
            for (y, &c) in c2.iter().enumerate() {
                by_color[c as usize] = y;
            }
            let perm: Vec<usize> = c1.iter().map(|&c| by_color[c as usize]).collect();
            let ok = (0..perm.len()).all(|a| {
                self.adj[a]
                    .iter()
                    .all(|&b| self.rows[perm[a]].contains(perm[b]))
            });
            return Ok(ok.then_some(perm));
        };
        let x = members_of(&c1, cell)[0];
        for y in members_of(&c2, cell) {
            if let Some(p) = self.search(individualize(&c1, x), individualize(&c2, y))? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Smallest colour shared by more than one vertex.
fn first_open_cell(colors: &[u32]) -> Option<u32> {
    let mut counts = vec![0u32; colors.len() + 1];
    for &c in colors {
        counts[c as usize] += 1;
    }
    counts.iter().position(|&k| k > 1).map(|c| c as u32)
}

fn members_of(colors: &[u32], cell: u32) -> Vec<usize> {
    (0..colors.len()).filter(|&v| colors[v] == cell).collect()
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let mut c = colors.to_vec();
    c[v] = colors.iter().max().map_or(0, |m| m + 1);
    c
}
