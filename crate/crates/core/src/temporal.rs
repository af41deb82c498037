//! Transtemporal and crosslayer edges.
//!
//! An edge is noncontiguous in aspect `h >= 2` when the aspect-`h`
//! coordinates of its endpoints differ by at least 2 (aspect coordinates are
//! ordered linearly, without wraparound). On the time aspect such an edge is
//! transtemporal; on any other non-vertex aspect it is crosslayer.
//!
//! For endpoints with coordinates `j > i + 2` the windows `{i-1, i, i+1}` and
//! `{j-1, j, j+1}` are disjoint. So either the direct edge exists (and is
//! noncontiguous), or any common neighbour `w` yields a noncontiguous edge on
//! one side of the path `u - w - v`. A witness therefore exists whenever the
//! endpoints are at distance at most 2.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genlab::uniform_below;
use crate::mag::{CompositeEdge, CompositeVertex, Mag, MagSignature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeKind {
    Transtemporal,
    Crosslayer,
}

impl EdgeKind {
    pub fn for_aspect(sig: &MagSignature, h: usize) -> Self {
        if sig.time_aspect() == Some(h) {
            EdgeKind::Transtemporal
        } else {
            EdgeKind::Crosslayer
        }
    }
}

fn gap(x: usize, y: usize) -> usize {
    x.abs_diff(y)
}

pub fn is_noncontiguous_edge(e: &CompositeEdge, sig: &MagSignature, h: usize) -> Result<bool> {
    sig.check_aspect(h, 2)?;
    sig.validate(&e.a)?;
    sig.validate(&e.b)?;
    Ok(gap(e.a.coord(h), e.b.coord(h)) >= 2)
}

/// A query satisfying the witness theorems' hypothesis: the aspect-`h`
/// coordinates satisfy `j > i + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoncontiguityQuery {
    u: CompositeVertex,
    v: CompositeVertex,
    aspect: usize,
    i: usize,
    j: usize,
}

impl NoncontiguityQuery {
    pub fn new(
        sig: &MagSignature,
        u: CompositeVertex,
        v: CompositeVertex,
        h: usize,
    ) -> Result<Self> {
        sig.check_aspect(h, 2)?;
        sig.validate(&u)?;
        sig.validate(&v)?;
        let (i, j) = (u.coord(h), v.coord(h));
        if j <= i + 2 {
            return Err(Error::Hypothesis { i, j });
        }
        Ok(NoncontiguityQuery {
            u,
            v,
            aspect: h,
            i,
            j,
        })
    }

    pub fn u(&self) -> &CompositeVertex {
        &self.u
    }

    pub fn v(&self) -> &CompositeVertex {
        &self.v
    }

    pub fn aspect(&self) -> usize {
        self.aspect
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Direct,
    ViaIntermediate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessResult {
    pub edge: CompositeEdge,
    pub kind: WitnessKind,
    pub intermediate: Option<CompositeVertex>,
    pub aspect: usize,
    pub edge_kind: EdgeKind,
}

/// Composite-index form of a witness: the edge and the intermediate, if any.
type IndexWitness = ((usize, usize), Option<usize>);

fn index_witness(g: &Mag, a: usize, b: usize, h: usize, i: usize) -> Option<IndexWitness> {
    let rows = g.rows();
    if rows[a].contains(b) {
        return Some(((a, b), None));
    }
    let w = rows[a].intersection(&rows[b]).next()?;
    let sig = g.signature();
    if gap(sig.coord_of(w, h), i) >= 2 {
        Some(((a, w), Some(w)))
    } else {
        Some(((w, b), Some(w)))
    }
}

/// Finds the noncontiguous edge guaranteed when `u` and `v` are within
/// distance 2. Common neighbours are scanned in ascending composite index;
/// when both path edges qualify the `u - w` edge is reported.
pub fn find_noncontiguous_witness(g: &Mag, q: &NoncontiguityQuery) -> Result<WitnessResult> {
    let sig = g.signature();
    let (a, b) = (sig.index_of(&q.u)?, sig.index_of(&q.v)?);
    let ((x, y), w) = index_witness(g, a, b, q.aspect, q.i).ok_or(Error::NoWitness)?;
    Ok(WitnessResult {
        edge: CompositeEdge::from_indices(sig, x, y),
        kind: if w.is_some() {
            WitnessKind::ViaIntermediate
        } else {
            WitnessKind::Direct
        },
        intermediate: w.map(|w| sig.vertex_at(w).expect("neighbour index")),
        aspect: q.aspect,
        edge_kind: EdgeKind::for_aspect(sig, q.aspect),
    })
}

/// Whether aspect `h` is large enough for the witness theorems: `τ_h > 8`.
pub fn check_size_hypothesis(sig: &MagSignature, h: usize) -> Result<bool> {
    sig.check_aspect(h, 2)?;
    Ok(sig.aspect_sizes()[h - 1] > 8)
}

/// Counting diagnostic: composite vertices sharing the endpoints' aspect-`h`
/// values (`2 N / τ_h`) against the `N / 4` length-2 path count. The former is
/// strictly smaller exactly when `τ_h > 8`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowBudget {
    pub same_value_vertices: usize,
    pub path_budget: f64,
    pub within_budget: bool,
}

pub fn window_budget(sig: &MagSignature, h: usize) -> Result<WindowBudget> {
    sig.check_aspect(h, 2)?;
    let n = sig.n_composite();
    let same = 2 * (n / sig.aspect_sizes()[h - 1]);
    let budget = n as f64 / 4.0;
    Ok(WindowBudget {
        same_value_vertices: same,
        path_budget: budget,
        within_budget: (same as f64) < budget,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnapshotLoss {
    pub aspect: usize,
    pub total_edges: usize,
    pub noncontiguous_edges: usize,
    pub fraction: f64,
}

/// Edges a per-value snapshot sequence along aspect `h` cannot represent.
pub fn snapshot_loss(g: &Mag, h: usize) -> Result<SnapshotLoss> {
    let sig = g.signature();
    sig.check_aspect(h, 2)?;
    let (total, noncontiguous) = g.index_edges().fold((0, 0), |(t, nc), (a, b)| {
        let far = gap(sig.coord_of(a, h), sig.coord_of(b, h)) >= 2;
        (t + 1, nc + far as usize)
    });
    Ok(SnapshotLoss {
        aspect: h,
        total_edges: total,
        noncontiguous_edges: noncontiguous,
        fraction: if total == 0 {
            0.0
        } else {
            noncontiguous as f64 / total as f64
        },
    })
}

/// Sweep sizing: exhaustive up to `exhaustive_limit` hypothesis pairs,
/// otherwise a seeded uniform sample of `sample_size` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub exhaustive_limit: u64,
    pub sample_size: u64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            exhaustive_limit: 1_000_000,
            sample_size: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessSweep {
    pub aspect: usize,
    pub edge_kind: EdgeKind,
    pub size_hypothesis: bool,
    pub window_budget: WindowBudget,
    /// Number of unordered composite-vertex pairs satisfying `j > i + 2`.
    pub hypothesis_pairs: u64,
    pub queried: u64,
    pub sampled: bool,
    pub found: u64,
    pub failures: u64,
    /// Smallest failing `(u, v)` in composite-index order.
    pub first_failure: Option<(CompositeVertex, CompositeVertex)>,
}

/// Coordinate pairs `(i, j)` with `j >= i + 3` below `tau`.
fn far_coordinate_pairs(tau: usize) -> Vec<(usize, usize)> {
    (0..tau)
        .flat_map(|i| (i + 3..tau).map(move |j| (i, j)))
        .collect()
}

/// Runs witness queries over all (or a sample of) hypothesis pairs for
/// aspect `h`, re-checking every witness independently.
pub fn witness_sweep(g: &Mag, h: usize, cfg: &SweepConfig) -> Result<WitnessSweep> {
    let sig = g.signature();
    sig.check_aspect(h, 2)?;
    let tau = sig.aspect_sizes()[h - 1];
    let mut by_coord: Vec<Vec<usize>> = vec![Vec::new(); tau];
    for idx in 0..sig.n_composite() {
        by_coord[sig.coord_of(idx, h)].push(idx);
    }
    let per_value = by_coord[0].len() as u64;
    let coord_pairs = far_coordinate_pairs(tau);
    let hypothesis_pairs = coord_pairs.len() as u64 * per_value * per_value;
    let rows = g.rows();

    let check = |a: usize, b: usize, i: usize| -> bool {
        match index_witness(g, a, b, h, i) {
            Some(((x, y), _)) => {
                rows[x].contains(y) && gap(sig.coord_of(x, h), sig.coord_of(y, h)) >= 2
            }
            None => false,
        }
    };

    let sampled = hypothesis_pairs > cfg.exhaustive_limit;
    let pairs: Vec<(usize, usize, usize)> = if sampled {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..cfg.sample_size)
            .map(|_| {
                let (i, j) =
                    coord_pairs[uniform_below(&mut rng, coord_pairs.len() as u64) as usize];
                let a = by_coord[i][uniform_below(&mut rng, per_value) as usize];
                let b = by_coord[j][uniform_below(&mut rng, per_value) as usize];
                (a, b, i)
            })
            .collect()
    } else {
        Vec::new()
    };

    let (queried, found, first_failure) = if sampled {
        pairs
            .par_iter()
            .map(|&(a, b, i)| outcome(check(a, b, i), a, b))
            .reduce(Outcome::zero, Outcome::merge)
    } else {
        coord_pairs
            .par_iter()
            .map(|&(i, j)| {
                let mut acc = Outcome::zero();
                for &a in &by_coord[i] {
                    for &b in &by_coord[j] {
                        acc = Outcome::merge(acc, outcome(check(a, b, i), a, b));
                    }
                }
                acc
            })
            .reduce(Outcome::zero, Outcome::merge)
    };

    Ok(WitnessSweep {
        aspect: h,
        edge_kind: EdgeKind::for_aspect(sig, h),
        size_hypothesis: tau > 8,
        window_budget: window_budget(sig, h)?,
        hypothesis_pairs,
        queried,
        sampled,
        found,
        failures: queried - found,
        first_failure: first_failure.map(|(a, b)| {
            (
                sig.vertex_at(a).expect("index"),
                sig.vertex_at(b).expect("index"),
            )
        }),
    })
}

type Outcome = (u64, u64, Option<(usize, usize)>);

fn outcome(ok: bool, a: usize, b: usize) -> Outcome {
    (1, ok as u64, (!ok).then_some((a, b)))
}

trait Merge {
    fn zero() -> Self;
    fn merge(x: Self, y: Self) -> Self;
}

impl Merge for Outcome {
    fn zero() -> Self {
        (0, 0, None)
    }

    fn merge(x: Self, y: Self) -> Self {
        let first = match (x.2, y.2) {
            (Some(p), Some(q)) => Some(p.min(q)),
            (p, q) => p.or(q),
        };
        (x.0 + y.0, x.1 + y.1, first)
    }
}

/// Brute-force path oracle used by tests: every edge on every path of length
/// at most 2 from `a` to `b` that is noncontiguous in aspect `h`.
#[doc(hidden)]
pub fn noncontiguous_path_edges(g: &Mag, a: usize, b: usize, h: usize) -> Vec<(usize, usize)> {
    let sig = g.signature();
    let n = g.n_composite();
    let far = |x: usize, y: usize| gap(sig.coord_of(x, h), sig.coord_of(y, h)) >= 2;
    let edge = |x: usize, y: usize| x != y && g.has_index_edge(x, y).unwrap_or(false);
    let mut out = Vec::new();
    if edge(a, b) && far(a, b) {
        out.push((a.min(b), a.max(b)));
    }
    for w in 0..n {
        if w != a && w != b && edge(a, w) && edge(w, b) {
            for (x, y) in [(a, w), (w, b)] {
                if far(x, y) {
                    out.push((x.min(y), x.max(y)));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}
