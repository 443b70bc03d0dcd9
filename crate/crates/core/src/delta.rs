//! Monotone maps between finite ordinals `[m] = {0 < 1 < ... < m}`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("values {0:?} are not monotone")]
    NotMonotone(Vec<usize>),
    #[error("value {0} exceeds codomain [{1}]")]
    OutOfRange(usize, usize),
    #[error("maps do not compose: [{0}] vs [{1}]")]
    Mismatch(usize, usize),
    #[error("subset is empty or not contained in [{0}]")]
    BadSubset(usize),
}

/// A monotone map `[m] -> [n]`, stored as the list of values `mu(0..=m)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaMap {
    values: Vec<usize>,
    codomain: usize,
}

impl fmt::Debug for DeltaMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->[{}]", self.values, self.codomain)
    }
}

impl DeltaMap {
    pub fn new(values: Vec<usize>, codomain: usize) -> Result<Self, DeltaError> {
        assert!(!values.is_empty(), "a map out of [m] has m + 1 values");
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(DeltaError::NotMonotone(values));
        }
        if let Some(&v) = values.iter().find(|&&v| v > codomain) {
            return Err(DeltaError::OutOfRange(v, codomain));
        }
        Ok(DeltaMap { values, codomain })
    }

    pub fn identity(n: usize) -> Self {
        DeltaMap {
            values: (0..=n).collect(),
            codomain: n,
        }
    }

    /// `m` for a map out of `[m]`.
    pub fn source_dim(&self) -> usize {
        self.values.len() - 1
    }

    /// `n` for a map into `[n]`.
    pub fn target_dim(&self) -> usize {
        self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_mono(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_epi(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.codomain
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// `second o first`.
    pub fn compose(second: &DeltaMap, first: &DeltaMap) -> Result<DeltaMap, DeltaError> {
        if first.codomain != second.source_dim() {
            return Err(DeltaError::Mismatch(first.codomain, second.source_dim()));
        }
        Ok(DeltaMap {
            values: first.values.iter().map(|&i| second.values[i]).collect(),
            codomain: second.codomain,
        })
    }

    /// The image as a vertex set.
    pub fn image(&self) -> VertexSet {
        VertexSet::from_iter(self.values.iter().copied())
    }

    /// Splits into `(sigma, nu)` with `self = nu o sigma`, `sigma` epi and `nu` mono.
    pub fn epi_mono_factor(&self) -> (DeltaMap, DeltaMap) {
        let mut image = self.values.clone();
        image.dedup();
        let mut sigma = Vec::with_capacity(self.values.len());
        let mut k = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if i > 0 && v != self.values[i - 1] {
                k += 1;
            }
            sigma.push(k);
        }
        let top = image.len() - 1;
        (
            DeltaMap {
                values: sigma,
                codomain: top,
            },
            DeltaMap {
                values: image,
                codomain: self.codomain,
            },
        )
    }

    /// The mono `[|S| - 1] -> [n]` with image `S`.
    pub fn from_subset(subset: VertexSet, n: usize) -> Result<DeltaMap, DeltaError> {
        if subset.is_empty() || subset.max().unwrap() > n {
            return Err(DeltaError::BadSubset(n));
        }
        Ok(DeltaMap {
            values: subset.iter().collect(),
            codomain: n,
        })
    }

    /// The image of a mono. Panics if `self` is not mono.
    pub fn to_subset(&self) -> VertexSet {
        assert!(self.is_mono(), "{self:?} is not mono");
        self.image()
    }

    /// The conjugate by order reversal on both ends: `mu'(m - i) = n - mu(i)`.
    pub fn prime_dual(&self) -> DeltaMap {
        let m = self.source_dim();
        DeltaMap {
            values: (0..=m).map(|i| self.codomain - self.values[m - i]).collect(),
            codomain: self.codomain,
        }
    }

    /// Fibers of an epi as consecutive intervals `(first, last)`, one per target.
    pub fn epi_fibers(&self) -> Vec<(usize, usize)> {
        assert!(self.is_epi(), "{self:?} is not epi");
        let mut out: Vec<(usize, usize)> = Vec::with_capacity(self.codomain + 1);
        for (i, &v) in self.values.iter().enumerate() {
            if v == out.len() {
                out.push((i, i));
            } else {
                out[v].1 = i;
            }
        }
        out
    }
}

/// A set of vertices of a simplex, as a bitmask over `0..64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(pub u64);

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl VertexSet {
    /// `{0, ..., n}`.
    pub fn full(n: usize) -> VertexSet {
        assert!(n < 64);
        VertexSet((1u64 << (n + 1)) - 1)
    }

    pub fn singleton(i: usize) -> VertexSet {
        VertexSet(1 << i)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// `{n - i : i in self}`.
    pub fn reflect(self, n: usize) -> VertexSet {
        VertexSet::from_iter(self.iter().map(|i| n - i))
    }

    /// The image under a map of vertices.
    pub fn map(self, f: impl Fn(usize) -> usize) -> VertexSet {
        VertexSet::from_iter(self.iter().map(f))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet(iter.into_iter().fold(0, |acc, i| {
            assert!(i < 64, "vertex {i} out of range");
            acc | 1 << i
        }))
    }
}
