use std::fmt;
use std::sync::Arc;

use super::Amplitude;

/// What the entries of a family are supposed to look like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Complex entries, columns orthonormal.
    Unitary,
    /// Real entries in [0, 1]; for every source the outgoing mass sums to 1.
    Stochastic,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Unitary => write!(f, "unitary"),
            FamilyKind::Stochastic => write!(f, "stochastic"),
        }
    }
}

type DimensionFn = dyn Fn(u32) -> u64 + Send + Sync;
type EntryFn = dyn Fn(u64, u64, u32) -> Amplitude + Send + Sync;

/// A matrix family given implicitly by an entry oracle.
///
/// The oracle answers `entry(from, to, n) = ⟨to| T_n |from⟩`: `from` is the
/// source configuration (matrix column), `to` the destination (matrix row),
/// `n` the size parameter. Nothing is ever materialized unless a caller asks
/// for it, so families of moderate exponential dimension stay cheap to hold.
///
/// Entry oracles must be pure: same arguments, same answer, no interior
/// mutability. Every consumer in this crate relies on that.
#[derive(Clone)]
pub struct MatrixFamily {
    name: String,
    kind: FamilyKind,
    dimension: Arc<DimensionFn>,
    entry: Arc<EntryFn>,
}

impl fmt::Debug for MatrixFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixFamily")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl MatrixFamily {
    pub fn new<D, E>(name: impl Into<String>, kind: FamilyKind, dimension: D, entry: E) -> Self
    where
        D: Fn(u32) -> u64 + Send + Sync + 'static,
        E: Fn(u64, u64, u32) -> Amplitude + Send + Sync + 'static,
    {
        MatrixFamily {
            name: name.into(),
            kind,
            dimension: Arc::new(dimension),
            entry: Arc::new(entry),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn dimension(&self, n: u32) -> u64 {
        (self.dimension)(n)
    }

    /// `⟨to| T_n |from⟩`.
    pub fn entry(&self, from: u64, to: u64, n: u32) -> Amplitude {
        (self.entry)(from, to, n)
    }

    /// The identity family: dimension `n`, `entry(i, j, n) = δ_ij`.
    pub fn identity() -> Self {
        MatrixFamily::new("identity", FamilyKind::Unitary, u64::from, |from, to, _| {
            if from == to {
                Amplitude::new(1.0, 0.0)
            } else {
                Amplitude::new(0.0, 0.0)
            }
        })
    }

    /// A fixed permutation matrix: column `i` has its 1 in row `perm[i]`.
    /// The size parameter is ignored; the dimension is `perm.len()`.
    pub fn permutation(perm: Vec<u64>) -> Self {
        let dim = perm.len() as u64;
        MatrixFamily::new(
            "permutation",
            FamilyKind::Unitary,
            move |_| dim,
            move |from, to, _| {
                if perm.get(from as usize) == Some(&to) {
                    Amplitude::new(1.0, 0.0)
                } else {
                    Amplitude::new(0.0, 0.0)
                }
            },
        )
    }

    /// The doubly stochastic 2×2 matrix with every entry ½.
    pub fn uniform_pair() -> Self {
        MatrixFamily::new(
            "uniform-pair",
            FamilyKind::Stochastic,
            |_| 2,
            |_, _, _| Amplitude::new(0.5, 0.0),
        )
    }

    /// Deliberately broken: diag(1, ½, ¼, …) declared unitary. Column `i` has
    /// norm `2^-i`, so any honest unitarity check must reject it.
    pub fn diagonal_decay() -> Self {
        MatrixFamily::new(
            "diagonal-decay",
            FamilyKind::Unitary,
            u64::from,
            |from, to, _| {
                if from == to {
                    Amplitude::new(0.5f64.powi(from.min(1023) as i32), 0.0)
                } else {
                    Amplitude::new(0.0, 0.0)
                }
            },
        )
    }

    /// Deliberately broken: a copy of this family with one row forced to zero.
    pub fn with_zeroed_row(&self, row: u64) -> Self {
        let inner = self.clone();
        MatrixFamily::new(
            format!("{}+zeroed-row-{row}", self.name),
            self.kind,
            {
                let inner = inner.clone();
                move |n| inner.dimension(n)
            },
            move |from, to, n| {
                if to == row {
                    Amplitude::new(0.0, 0.0)
                } else {
                    inner.entry(from, to, n)
                }
            },
        )
    }

    /// Deliberately broken: declared stochastic, but source 0 emits total
    /// mass 1.5.
    pub fn overweight_source() -> Self {
        MatrixFamily::new(
            "overweight-source",
            FamilyKind::Stochastic,
            |_| 2,
            |from, to, _| match (from, to) {
                (0, 0) => Amplitude::new(1.0, 0.0),
                (0, 1) => Amplitude::new(0.5, 0.0),
                (1, 0) => Amplitude::new(0.5, 0.0),
                (1, 1) => Amplitude::new(0.5, 0.0),
                _ => Amplitude::new(0.0, 0.0),
            },
        )
    }
}
