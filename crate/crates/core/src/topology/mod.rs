//! Topological measurements on frozen MAGs: degree concentration, common
//! neighbours (internally disjoint length-2 paths), composite diameter, a
//! connectivity lower bound and rigidity.
//!
//! Per-source and per-pair loops run on rayon; every reduction is a min or
//! max, so results do not depend on scheduling.

mod rigidity;

pub use rigidity::{
    is_automorphism, is_rigid, is_rigid_with_budget, Rigidity, DEFAULT_NODE_BUDGET,
};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mag::{CompositeVertex, Mag};

fn require_two(g: &Mag) -> Result<usize> {
    let n = g.n_composite();
    if n < 2 {
        return Err(Error::TooFewVertices { needed: 2, got: n });
    }
    Ok(n)
}

/// `sqrt(N log2 N)`, the common scale of the degree and path-count slack.
pub fn log_scale(n: usize) -> f64 {
    let n = n as f64;
    (n * n.log2()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeConcentration {
    /// `max_v |d(v) - (N-1)/2|`.
    pub max_deviation: f64,
    /// `c * sqrt(N log2 N)`.
    pub bound: f64,
    pub holds: bool,
    pub min_degree: usize,
    pub max_degree: usize,
}

pub fn degree_concentration(g: &Mag, c: f64) -> Result<DegreeConcentration> {
    let n = require_two(g)?;
    let center = (n - 1) as f64 / 2.0;
    let (min_degree, max_degree) = (0..n)
        .map(|v| g.index_degree(v))
        .fold((usize::MAX, 0), |(lo, hi), d| (lo.min(d), hi.max(d)));
    let max_deviation = (min_degree as f64 - center)
        .abs()
        .max((max_degree as f64 - center).abs());
    let bound = c * log_scale(n);
    Ok(DegreeConcentration {
        max_deviation,
        bound,
        holds: max_deviation <= bound,
        min_degree,
        max_degree,
    })
}

/// Number of common neighbours of `u` and `v`, which equals the number of
/// internally vertex-disjoint length-2 paths between them.
pub fn common_neighbor_count(g: &Mag, u: &CompositeVertex, v: &CompositeVertex) -> Result<usize> {
    let sig = g.signature();
    let (a, b) = (sig.index_of(u)?, sig.index_of(v)?);
    if a == b {
        return Err(Error::SelfLoop(a));
    }
    Ok(index_common_neighbors(g, a, b))
}

pub(crate) fn index_common_neighbors(g: &Mag, a: usize, b: usize) -> usize {
    let rows = g.rows();
    rows[a].intersection_count(&rows[b])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct PairMinima {
    common: usize,
    common_plus_edge: usize,
}

fn pair_minima(g: &Mag) -> Result<PairMinima> {
    let n = require_two(g)?;
    let rows = g.rows();
    Ok((1..n)
        .into_par_iter()
        .map(|b| {
            (0..b).fold(
                PairMinima {
                    common: usize::MAX,
                    common_plus_edge: usize::MAX,
                },
                |m, a| {
                    let cn = rows[a].intersection_count(&rows[b]);
                    PairMinima {
                        common: m.common.min(cn),
                        common_plus_edge: m.common_plus_edge.min(cn + rows[a].contains(b) as usize),
                    }
                },
            )
        })
        .reduce(
            || PairMinima {
                common: usize::MAX,
                common_plus_edge: usize::MAX,
            },
            |x, y| PairMinima {
                common: x.common.min(y.common),
                common_plus_edge: x.common_plus_edge.min(y.common_plus_edge),
            },
        ))
}

/// Minimum common-neighbour count over all unordered pairs.
pub fn min_common_neighbors(g: &Mag) -> Result<usize> {
    Ok(pair_minima(g)?.common)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diameter {
    Finite(usize),
    /// The graph is disconnected.
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }
}

impl Serialize for Diameter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Diameter::Finite(d) => s.serialize_u64(*d as u64),
            Diameter::Infinite => s.serialize_str("infinite"),
        }
    }
}

fn eccentricity(rows: &[FixedBitSet], source: usize) -> Diameter {
    let n = rows.len();
    let mut visited = FixedBitSet::with_capacity(n);
    visited.insert(source);
    let mut frontier = vec![source];
    let mut reached = 1;
    let mut depth = 0;
    while reached < n {
        let mut next = FixedBitSet::with_capacity(n);
        for &f in &frontier {
            next.union_with(&rows[f]);
        }
        next.difference_with(&visited);
        if next.is_clear() {
            return Diameter::Infinite;
        }
        visited.union_with(&next);
        reached += next.count_ones(..);
        frontier = next.ones().collect();
        depth += 1;
    }
    Diameter::Finite(depth)
}

/// Exact composite diameter via one breadth-first traversal per vertex.
pub fn composite_diameter(g: &Mag) -> Result<Diameter> {
    let n = require_two(g)?;
    let rows = g.rows();
    Ok((0..n)
        .into_par_iter()
        .map(|s| eccentricity(rows, s))
        .max()
        .expect("at least two sources"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConnectivityBound {
    /// `min over pairs of (common neighbours + [adjacent])`.
    pub value: usize,
    /// True when the diameter is at most 2, so `value` bounds vertex
    /// connectivity from below. Otherwise it is not a connectivity bound.
    pub is_connectivity_bound: bool,
}

pub fn connectivity_lower_bound(g: &Mag) -> Result<ConnectivityBound> {
    let diameter = composite_diameter(g)?;
    Ok(ConnectivityBound {
        value: pair_minima(g)?.common_plus_edge,
        is_connectivity_bound: diameter <= Diameter::Finite(2),
    })
}

/// Scalar summary of the topological properties of a MAG.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyReport {
    pub n_composite: usize,
    pub min_degree: usize,
    pub max_degree: usize,
    pub max_degree_deviation: f64,
    pub degree_bound: f64,
    pub degree_c: f64,
    pub min_common_neighbors: usize,
    pub diameter: Diameter,
    pub connectivity_lb: usize,
    pub connectivity_is_bound: bool,
    /// `None` when the rigidity search ran out of budget.
    pub is_rigid: Option<bool>,
    pub rigidity: Rigidity,
}

pub fn topology_report(g: &Mag, degree_c: f64, rigidity_budget: u64) -> Result<TopologyReport> {
    let degrees = degree_concentration(g, degree_c)?;
    let minima = pair_minima(g)?;
    let diameter = composite_diameter(g)?;
    let rigidity = is_rigid_with_budget(g, rigidity_budget);
    Ok(TopologyReport {
        n_composite: g.n_composite(),
        min_degree: degrees.min_degree,
        max_degree: degrees.max_degree,
        max_degree_deviation: degrees.max_deviation,
        degree_bound: degrees.bound,
        degree_c,
        min_common_neighbors: minima.common,
        diameter,
        connectivity_lb: minima.common_plus_edge,
        connectivity_is_bound: diameter <= Diameter::Finite(2),
        is_rigid: rigidity.is_rigid(),
        rigidity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mag::MagSignature;

    fn sig(n: usize) -> MagSignature {
        MagSignature::new(vec![n]).unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> Mag {
        Mag::from_index_edges(sig(n), edges.iter().copied()).unwrap()
    }

    #[test]
    fn degree_examples() {
        let k9 = Mag::complete(sig(9));
        let d = degree_concentration(&k9, 2.0).unwrap();
        assert_eq!((d.min_degree, d.max_degree, d.max_deviation), (8, 8, 4.0));
        let e9 = Mag::empty(sig(9));
        assert_eq!(degree_concentration(&e9, 2.0).unwrap().max_deviation, 4.0);
        assert!(degree_concentration(&Mag::empty(sig(1)), 2.0).is_err());
    }

    #[test]
    fn common_neighbor_examples() {
        let k5 = Mag::complete(sig(5));
        let s = k5.signature().clone();
        let (u, v) = (s.vertex_at(0).unwrap(), s.vertex_at(4).unwrap());
        assert_eq!(common_neighbor_count(&k5, &u, &v).unwrap(), 3);
        assert_eq!(
            common_neighbor_count(&Mag::empty(s.clone()), &u, &v).unwrap(),
            0
        );
        assert_eq!(common_neighbor_count(&k5, &u, &u), Err(Error::SelfLoop(0)));

        let g = graph(6, &[(0, 2), (1, 2), (0, 3), (1, 3), (0, 1)]);
        let s = g.signature().clone();
        let (u, v) = (s.vertex_at(0).unwrap(), s.vertex_at(1).unwrap());
        // Brute force: w in {2, 3, 4, 5} adjacent to both 0 and 1.
        let brute = (2..6)
            .filter(|&w| g.has_index_edge(0, w).unwrap() && g.has_index_edge(w, 1).unwrap())
            .count();
        assert_eq!(brute, 2);
        assert_eq!(common_neighbor_count(&g, &u, &v).unwrap(), brute);
        assert_eq!(common_neighbor_count(&g, &v, &u).unwrap(), brute);
    }

    #[test]
    fn diameter_examples() {
        assert_eq!(
            composite_diameter(&Mag::complete(sig(7))).unwrap(),
            Diameter::Finite(1)
        );
        assert_eq!(
            composite_diameter(&graph(4, &[(0, 1), (1, 2), (2, 3)])).unwrap(),
            Diameter::Finite(3)
        );
        assert_eq!(
            composite_diameter(&graph(4, &[(0, 1), (2, 3)])).unwrap(),
            Diameter::Infinite
        );
        assert_eq!(
            serde_json::to_string(&Diameter::Infinite).unwrap(),
            "\"infinite\""
        );
    }

    #[test]
    fn connectivity_examples() {
        let b = connectivity_lower_bound(&Mag::complete(sig(5))).unwrap();
        assert_eq!(b.value, 4);
        assert!(b.is_connectivity_bound);
        let e = connectivity_lower_bound(&Mag::empty(sig(5))).unwrap();
        assert_eq!(e.value, 0);
        assert!(!e.is_connectivity_bound);
        for n in 2..=64 {
            assert_eq!(
                connectivity_lower_bound(&Mag::complete(sig(n)))
                    .unwrap()
                    .value,
                n - 1
            );
        }
    }

    #[test]
    fn report_on_complete_graph() {
        let r = topology_report(&Mag::complete(sig(6)), 2.0, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(r.diameter, Diameter::Finite(1));
        assert_eq!(r.is_rigid, Some(false));
        assert_eq!(r.min_common_neighbors, 4);
        assert_eq!(r.connectivity_lb, 5);
    }
}
