//! MAG domain types and the composite-vertex labeling.
//!
//! Composite vertices are labeled by a mixed-radix number with aspect 1
//! varying fastest: `idx = c1 + t1 * (c2 + t2 * (c3 + ...))`. With this
//! order, all composite vertices sharing a value on aspect `h` form
//! contiguous blocks of size `t1 * ... * t(h-1)`.

use std::fmt;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::codec::{pair_from_index_unchecked, pair_index_unchecked, pair_space_len};
use crate::error::{Error, Result};

/// Default ceiling on the number of composite vertices (pair space about 2^31 bits).
pub const DEFAULT_MAX_COMPOSITE: usize = 1 << 16;

/// Ordered aspect sizes plus the position of the time aspect, if any.
///
/// Aspect positions are 1-based throughout the crate; aspect 1 is always the
/// vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MagSignature {
    aspect_sizes: Vec<usize>,
    time_aspect: Option<usize>,
    #[serde(skip)]
    n_composite: usize,
}

impl MagSignature {
    /// Builds a signature with the default time aspect (2 when the order is at
    /// least 2) and the default composite-vertex ceiling.
    pub fn new(aspect_sizes: impl Into<Vec<usize>>) -> Result<Self> {
        let sizes = aspect_sizes.into();
        let time = if sizes.len() >= 2 { Some(2) } else { None };
        Self::with_limit(sizes, time, DEFAULT_MAX_COMPOSITE)
    }

    pub fn with_time_aspect(
        aspect_sizes: impl Into<Vec<usize>>,
        time_aspect: Option<usize>,
    ) -> Result<Self> {
        Self::with_limit(aspect_sizes, time_aspect, DEFAULT_MAX_COMPOSITE)
    }

    pub fn with_limit(
        aspect_sizes: impl Into<Vec<usize>>,
        time_aspect: Option<usize>,
        max_composite: usize,
    ) -> Result<Self> {
        let aspect_sizes = aspect_sizes.into();
        if aspect_sizes.is_empty() {
            return Err(Error::EmptySignature);
        }
        let mut n: usize = 1;
        for (i, &tau) in aspect_sizes.iter().enumerate() {
            if tau == 0 {
                return Err(Error::ZeroAspect { aspect: i + 1 });
            }
            n = n.checked_mul(tau).filter(|&n| n <= max_composite).ok_or(
                Error::TooManyVertices {
                    limit: max_composite,
                },
            )?;
        }
        // The pair space must be addressable as well.
        if n.checked_mul(n.saturating_sub(1)).is_none() {
            return Err(Error::TooManyVertices {
                limit: max_composite,
            });
        }
        if let Some(h) = time_aspect {
            if h < 2 || h > aspect_sizes.len() {
                return Err(Error::InvalidAspect {
                    aspect: h,
                    order: aspect_sizes.len(),
                });
            }
        }
        Ok(MagSignature {
            aspect_sizes,
            time_aspect,
            n_composite: n,
        })
    }

    pub fn aspect_sizes(&self) -> &[usize] {
        &self.aspect_sizes
    }

    /// Number of aspects `p`.
    pub fn order(&self) -> usize {
        self.aspect_sizes.len()
    }

    pub fn time_aspect(&self) -> Option<usize> {
        self.time_aspect
    }

    /// Number of composite vertices `N`, the product of all aspect sizes.
    pub fn n_composite(&self) -> usize {
        self.n_composite
    }

    /// Length of the characteristic bitstring, `C(N, 2)`.
    pub fn pair_space_len(&self) -> usize {
        pair_space_len(self.n_composite)
    }

    /// Size of the (1-based) aspect `h`.
    pub fn aspect_size(&self, h: usize) -> Result<usize> {
        self.check_aspect(h, 1)?;
        Ok(self.aspect_sizes[h - 1])
    }

    /// Product of the sizes of aspects before `h`: the index stride of aspect `h`.
    pub fn stride(&self, h: usize) -> usize {
        self.aspect_sizes[..h - 1].iter().product()
    }

    /// Coordinate on aspect `h` of the composite vertex with index `idx`.
    #[inline]
    pub fn coord_of(&self, idx: usize, h: usize) -> usize {
        (idx / self.stride(h)) % self.aspect_sizes[h - 1]
    }

    pub(crate) fn check_aspect(&self, h: usize, min: usize) -> Result<()> {
        if h < min || h > self.order() {
            return Err(Error::InvalidAspect {
                aspect: h,
                order: self.order(),
            });
        }
        Ok(())
    }

    pub fn vertex(&self, coords: impl Into<Vec<usize>>) -> Result<CompositeVertex> {
        let v = CompositeVertex(coords.into());
        self.validate(&v)?;
        Ok(v)
    }

    pub fn validate(&self, v: &CompositeVertex) -> Result<()> {
        if v.0.len() != self.order() {
            return Err(Error::InvalidVertex {
                coords: v.0.clone(),
                reason: format!("expected {} coordinates", self.order()),
            });
        }
        for (i, (&c, &tau)) in v.0.iter().zip(&self.aspect_sizes).enumerate() {
            if c >= tau {
                return Err(Error::InvalidVertex {
                    coords: v.0.clone(),
                    reason: format!("coordinate {} is {c}, aspect size is {tau}", i + 1),
                });
            }
        }
        Ok(())
    }

    /// Mixed-radix index of `v`, aspect 1 fastest.
    pub fn index_of(&self, v: &CompositeVertex) -> Result<usize> {
        self.validate(v)?;
        Ok(v.0
            .iter()
            .zip(&self.aspect_sizes)
            .rev()
            .fold(0, |acc, (&c, &tau)| acc * tau + c))
    }

    /// Inverse of [`MagSignature::index_of`].
    pub fn vertex_at(&self, mut idx: usize) -> Result<CompositeVertex> {
        if idx >= self.n_composite {
            return Err(Error::IndexOutOfRange {
                index: idx,
                n: self.n_composite,
            });
        }
        let coords = self
            .aspect_sizes
            .iter()
            .map(|&tau| {
                let c = idx % tau;
                idx /= tau;
                c
            })
            .collect();
        Ok(CompositeVertex(coords))
    }
}

impl fmt::Display for MagSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.aspect_sizes.iter().map(|t| t.to_string()).collect();
        write!(f, "({})", sizes.join(", "))
    }
}

/// `composite_vertex_index`: free-function form of [`MagSignature::index_of`].
pub fn composite_vertex_index(v: &CompositeVertex, sig: &MagSignature) -> Result<usize> {
    sig.index_of(v)
}

/// `composite_vertex_from_index`: free-function form of [`MagSignature::vertex_at`].
pub fn composite_vertex_from_index(i: usize, sig: &MagSignature) -> Result<CompositeVertex> {
    sig.vertex_at(i)
}

/// A `p`-tuple of per-aspect coordinates, aspect 1 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CompositeVertex(pub Vec<usize>);

impl CompositeVertex {
    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    /// Coordinate on the 1-based aspect `h`.
    pub fn coord(&self, h: usize) -> usize {
        self.0[h - 1]
    }
}

impl fmt::Display for CompositeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", c.join(","))
    }
}

/// An undirected composite edge, stored with `index(a) < index(b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompositeEdge {
    pub a: CompositeVertex,
    pub b: CompositeVertex,
}

impl CompositeEdge {
    pub fn new(sig: &MagSignature, u: CompositeVertex, v: CompositeVertex) -> Result<Self> {
        let (iu, iv) = (sig.index_of(&u)?, sig.index_of(&v)?);
        if iu == iv {
            return Err(Error::SelfLoop(iu));
        }
        Ok(if iu < iv {
            CompositeEdge { a: u, b: v }
        } else {
            CompositeEdge { a: v, b: u }
        })
    }

    pub(crate) fn from_indices(sig: &MagSignature, a: usize, b: usize) -> Self {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        CompositeEdge {
            a: sig.vertex_at(a).expect("index in range"),
            b: sig.vertex_at(b).expect("index in range"),
        }
    }
}

/// A frozen simple MAG.
///
/// The edge set lives in the characteristic bitstring; bit `k` is the pair
/// with colex pair index `k`. Adjacency rows are derived lazily on first use.
#[derive(Clone)]
pub struct Mag {
    signature: MagSignature,
    bits: FixedBitSet,
    rows: OnceLock<Vec<FixedBitSet>>,
}

impl PartialEq for Mag {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature && self.bits == other.bits
    }
}

impl Eq for Mag {}

impl fmt::Debug for Mag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mag")
            .field("signature", &self.signature)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Mag {
    pub(crate) fn from_bits_unchecked(signature: MagSignature, bits: FixedBitSet) -> Self {
        debug_assert_eq!(bits.len(), signature.pair_space_len());
        Mag {
            signature,
            bits,
            rows: OnceLock::new(),
        }
    }

    pub fn empty(signature: MagSignature) -> Self {
        let bits = FixedBitSet::with_capacity(signature.pair_space_len());
        Self::from_bits_unchecked(signature, bits)
    }

    pub fn complete(signature: MagSignature) -> Self {
        let mut bits = FixedBitSet::with_capacity(signature.pair_space_len());
        bits.insert_range(..);
        Self::from_bits_unchecked(signature, bits)
    }

    /// Builds a MAG from composite-index pairs.
    pub fn from_index_edges(
        signature: MagSignature,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut b = MagBuilder::new(signature);
        for (u, v) in edges {
            b.add_index_edge(u, v)?;
        }
        Ok(b.freeze())
    }

    pub fn signature(&self) -> &MagSignature {
        &self.signature
    }

    pub fn n_composite(&self) -> usize {
        self.signature.n_composite
    }

    /// The characteristic bitstring of the edge set.
    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn edge_count(&self) -> usize {
        self.bits.count_ones(..)
    }

    /// Edges as `(a, b)` composite-index pairs with `a < b`, in pair-index order.
    pub fn index_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits.ones().map(pair_from_index_unchecked)
    }

    pub fn edges(&self) -> impl Iterator<Item = CompositeEdge> + '_ {
        self.index_edges()
            .map(|(a, b)| CompositeEdge::from_indices(&self.signature, a, b))
    }

    pub fn has_edge(&self, u: &CompositeVertex, v: &CompositeVertex) -> Result<bool> {
        let (a, b) = (self.signature.index_of(u)?, self.signature.index_of(v)?);
        self.has_index_edge(a, b)
    }

    pub fn has_index_edge(&self, a: usize, b: usize) -> Result<bool> {
        let n = self.n_composite();
        for idx in [a, b] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, n });
            }
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        Ok(self.bits.contains(pair_index_unchecked(a, b)))
    }

    pub fn degree(&self, v: &CompositeVertex) -> Result<usize> {
        let a = self.signature.index_of(v)?;
        Ok(self.index_degree(a))
    }

    /// Degree of the composite vertex with index `a` (must be `< N`).
    pub fn index_degree(&self, a: usize) -> usize {
        self.rows()[a].count_ones(..)
    }

    /// Adjacency rows indexed by composite index; row `a` never contains `a`.
    pub fn rows(&self) -> &[FixedBitSet] {
        self.rows.get_or_init(|| {
            let n = self.n_composite();
            let mut rows = vec![FixedBitSet::with_capacity(n); n];
            for (a, b) in self.index_edges() {
                rows[a].insert(b);
                rows[b].insert(a);
            }
            rows
        })
    }

    /// Neighbours of `a` in ascending index order.
    pub fn neighbors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows()[a].ones()
    }

    /// Applies a permutation of composite indices: edge `{a, b}` becomes
    /// `{perm[a], perm[b]}`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Mag> {
        let n = self.n_composite();
        if perm.len() != n {
            return Err(Error::Config(format!(
                "permutation has {} entries, expected {n}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Config("not a permutation".into()));
            }
        }
        Mag::from_index_edges(
            self.signature.clone(),
            self.index_edges().map(|(a, b)| (perm[a], perm[b])),
        )
    }
}

/// Accumulates edges, then freezes into an immutable [`Mag`].
#[derive(Debug, Clone)]
pub struct MagBuilder {
    signature: MagSignature,
    bits: FixedBitSet,
}

impl MagBuilder {
    pub fn new(signature: MagSignature) -> Self {
        let bits = FixedBitSet::with_capacity(signature.pair_space_len());
        MagBuilder { signature, bits }
    }

    pub fn signature(&self) -> &MagSignature {
        &self.signature
    }

    pub fn add_edge(&mut self, u: &CompositeVertex, v: &CompositeVertex) -> Result<&mut Self> {
        let (a, b) = (self.signature.index_of(u)?, self.signature.index_of(v)?);
        self.add_index_edge(a, b)
    }

    pub fn add_index_edge(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        let n = self.signature.n_composite();
        for idx in [a, b] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, n });
            }
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        self.bits.insert(pair_index_unchecked(a, b));
        Ok(self)
    }

    /// Whether `{a, b}` was already added; indices must be valid and distinct.
    pub fn has_index_edge(&self, a: usize, b: usize) -> bool {
        self.bits.contains(pair_index_unchecked(a, b))
    }

    pub fn freeze(self) -> Mag {
        Mag::from_bits_unchecked(self.signature, self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(s: &[usize]) -> MagSignature {
        MagSignature::new(s.to_vec()).unwrap()
    }

    #[test]
    fn index_examples() {
        let s = sig(&[3, 4]);
        assert_eq!(s.index_of(&CompositeVertex(vec![0, 0])).unwrap(), 0);
        assert_eq!(s.index_of(&CompositeVertex(vec![2, 1])).unwrap(), 5);
        assert_eq!(
            sig(&[2, 3, 2])
                .index_of(&CompositeVertex(vec![1, 2, 1]))
                .unwrap(),
            11
        );
        assert_eq!(s.vertex_at(0).unwrap(), CompositeVertex(vec![0, 0]));
        assert_eq!(s.vertex_at(5).unwrap(), CompositeVertex(vec![2, 1]));
    }

    #[test]
    fn index_errors() {
        let s = sig(&[3, 4]);
        assert!(matches!(
            s.index_of(&CompositeVertex(vec![3, 0])),
            Err(Error::InvalidVertex { .. })
        ));
        assert!(matches!(
            s.index_of(&CompositeVertex(vec![0])),
            Err(Error::InvalidVertex { .. })
        ));
        assert_eq!(
            s.vertex_at(12),
            Err(Error::IndexOutOfRange { index: 12, n: 12 })
        );
    }

    #[test]
    fn signature_validation() {
        assert_eq!(MagSignature::new(vec![]), Err(Error::EmptySignature));
        assert_eq!(
            MagSignature::new(vec![3, 0]),
            Err(Error::ZeroAspect { aspect: 2 })
        );
        assert!(matches!(
            MagSignature::new(vec![1 << 9, 1 << 8]),
            Err(Error::TooManyVertices { .. })
        ));
        assert!(MagSignature::with_limit(vec![1 << 9, 1 << 8], None, 1 << 17).is_ok());
        assert!(matches!(
            MagSignature::new(vec![usize::MAX, 3]),
            Err(Error::TooManyVertices { .. })
        ));
        assert!(matches!(
            MagSignature::with_time_aspect(vec![4, 4], Some(1)),
            Err(Error::InvalidAspect { .. })
        ));
        assert_eq!(sig(&[4]).time_aspect(), None);
        assert_eq!(sig(&[4, 5, 6]).time_aspect(), Some(2));
    }

    #[test]
    fn bands_are_contiguous() {
        let s = sig(&[3, 4, 2]);
        assert_eq!(s.stride(2), 3);
        for idx in 0..s.n_composite() {
            let v = s.vertex_at(idx).unwrap();
            for h in 1..=3 {
                assert_eq!(s.coord_of(idx, h), v.coord(h));
            }
        }
    }

    #[test]
    fn edge_queries() {
        let s = sig(&[3, 3]);
        let (u, v) = (s.vertex(vec![0, 1]).unwrap(), s.vertex(vec![2, 2]).unwrap());
        let empty = Mag::empty(s.clone());
        let complete = Mag::complete(s.clone());
        assert!(!empty.has_edge(&u, &v).unwrap());
        assert!(complete.has_edge(&u, &v).unwrap());
        assert_eq!(empty.has_edge(&u, &u), Err(Error::SelfLoop(3)));

        let mut b = MagBuilder::new(s.clone());
        b.add_edge(&u, &v).unwrap();
        let g = b.freeze();
        assert!(g.has_edge(&v, &u).unwrap());
        assert_eq!(g.degree(&u).unwrap(), 1);
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![CompositeEdge::new(&s, v.clone(), u.clone()).unwrap()]
        );

        for x in 0..9 {
            let w = s.vertex_at(x).unwrap();
            assert_eq!(complete.degree(&w).unwrap(), 8);
            assert_eq!(empty.degree(&w).unwrap(), 0);
        }
    }

    #[test]
    fn builder_rejects_loops_and_out_of_range() {
        let mut b = MagBuilder::new(sig(&[4]));
        assert_eq!(b.add_index_edge(2, 2).unwrap_err(), Error::SelfLoop(2));
        assert!(matches!(
            b.add_index_edge(0, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
