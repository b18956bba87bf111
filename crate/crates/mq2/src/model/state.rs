use std::collections::BTreeMap;

use super::Amplitude;

/// How the numbers stored in a [`StateVector`] are to be read.
///
/// A unitary family evolves amplitudes and a measurement weighs a
/// configuration by the squared norm of its amplitude; a stochastic family
/// evolves probabilities directly and a configuration's weight is the stored
/// (real) value itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    AmplitudeVector,
    ProbabilityVector,
}

/// A sparse vector over configuration indices.
///
/// Canonical form: entries that are exactly zero are never stored. Iteration
/// is always in increasing index order, which keeps floating-point sums
/// reproducible run to run.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    size_param: u32,
    semantics: Semantics,
    entries: BTreeMap<u64, Amplitude>,
}

impl StateVector {
    /// The basis vector `|index⟩`.
    pub fn basis(size_param: u32, semantics: Semantics, index: u64) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(index, Amplitude::new(1.0, 0.0));
        StateVector {
            size_param,
            semantics,
            entries,
        }
    }

    /// Builds a vector from `(index, value)` pairs. Duplicate indices are
    /// summed; exact zeros are dropped so the result is canonical.
    pub fn from_entries<I>(size_param: u32, semantics: Semantics, pairs: I) -> Self
    where
        I: IntoIterator<Item = (u64, Amplitude)>,
    {
        let mut entries: BTreeMap<u64, Amplitude> = BTreeMap::new();
        for (index, value) in pairs {
            let slot = entries.entry(index).or_insert(Amplitude::new(0.0, 0.0));
            *slot += value;
        }
        entries.retain(|_, v| v.re != 0.0 || v.im != 0.0);
        StateVector {
            size_param,
            semantics,
            entries,
        }
    }

    pub fn size_param(&self) -> u32 {
        self.size_param
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    /// The stored value at `index`, zero if absent.
    pub fn get(&self, index: u64) -> Amplitude {
        self.entries
            .get(&index)
            .copied()
            .unwrap_or(Amplitude::new(0.0, 0.0))
    }

    /// Entries in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Amplitude)> + '_ {
        self.entries.iter().map(|(&i, &a)| (i, a))
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest stored index, if any.
    pub fn max_index(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    /// Σ |v_i|² over the support.
    pub fn norm_sqr(&self) -> f64 {
        self.entries.values().map(|a| a.norm_sqr()).sum()
    }

    /// Σ Re(v_i) over the support; the total mass of a probability vector.
    pub fn mass(&self) -> f64 {
        self.entries.values().map(|a| a.re).sum()
    }

    /// The measurement weight of one configuration under this vector's
    /// semantics: |v_i|² for amplitudes, Re(v_i) for probabilities.
    pub fn weight(&self, index: u64) -> f64 {
        match self.semantics {
            Semantics::AmplitudeVector => self.get(index).norm_sqr(),
            Semantics::ProbabilityVector => self.get(index).re,
        }
    }

    /// True when no stored entry is exactly zero.
    pub fn is_canonical(&self) -> bool {
        self.entries.values().all(|v| v.re != 0.0 || v.im != 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_vector_has_single_unit_entry() {
        let v = StateVector::basis(3, Semantics::AmplitudeVector, 5);
        assert_eq!(v.support_size(), 1);
        assert_eq!(v.get(5), Amplitude::new(1.0, 0.0));
        assert_eq!(v.get(0), Amplitude::new(0.0, 0.0));
        assert_eq!(v.norm_sqr(), 1.0);
    }

    #[test]
    fn from_entries_drops_exact_zeros_and_sums_duplicates() {
        let v = StateVector::from_entries(
            2,
            Semantics::AmplitudeVector,
            vec![
                (0, Amplitude::new(0.5, 0.0)),
                (0, Amplitude::new(-0.5, 0.0)),
                (1, Amplitude::new(0.0, 0.0)),
                (2, Amplitude::new(0.25, -0.25)),
            ],
        );
        assert_eq!(v.support_size(), 1);
        assert!(v.is_canonical());
        assert_eq!(v.get(2), Amplitude::new(0.25, -0.25));
    }

    #[test]
    fn iteration_is_sorted_by_index() {
        let v = StateVector::from_entries(
            1,
            Semantics::ProbabilityVector,
            vec![
                (9, Amplitude::new(0.25, 0.0)),
                (1, Amplitude::new(0.5, 0.0)),
                (4, Amplitude::new(0.25, 0.0)),
            ],
        );
        let indices: Vec<u64> = v.iter().map(|(i, _)| i).collect();
        assert_eq!(indices, vec![1, 4, 9]);
        assert_eq!(v.mass(), 1.0);
        assert_eq!(v.max_index(), Some(9));
    }

    #[test]
    fn weight_dispatches_on_semantics() {
        let amp = StateVector::from_entries(
            1,
            Semantics::AmplitudeVector,
            vec![(0, Amplitude::new(0.6, 0.8))],
        );
        assert!((amp.weight(0) - 1.0).abs() < 1e-15);

        let prob = StateVector::from_entries(
            1,
            Semantics::ProbabilityVector,
            vec![(0, Amplitude::new(0.3, 0.0))],
        );
        assert_eq!(prob.weight(0), 0.3);
    }
}
