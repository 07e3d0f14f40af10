//! Finite carriers and their subsets.
//!
//! A `Carrier` is a non-empty ordered list of distinct string labels; the
//! declared order is the canonical element order used for every
//! deterministic tie-break in the crate. A `Subset` is a bitmask over carrier
//! indices, which keeps exhaustive sweeps cheap and bounds carriers at 64
//! elements.

use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Hard limit imposed by the bitmask subset representation.
pub const MAX_CARRIER: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CarrierError {
    #[error("carrier must be non-empty")]
    Empty,
    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error("carrier has {0} elements, limit is {MAX_CARRIER}")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Carrier {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl Carrier {
    pub fn new<I, S>(labels: I) -> Result<Self, CarrierError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(CarrierError::Empty);
        }
        if labels.len() > MAX_CARRIER {
            return Err(CarrierError::TooLarge(labels.len()));
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(CarrierError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Carrier { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn indices(&self) -> std::ops::Range<usize> {
        0..self.labels.len()
    }

    /// The subset holding every element.
    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn subset_labels(&self, s: Subset) -> Vec<String> {
        s.iter().map(|i| self.labels[i].clone()).collect()
    }
}

/// Subset of a carrier, stored as a bitmask over element indices.
///
/// The `Ord` instance is the canonical family order: smaller subsets first,
/// ties broken by the ascending list of member indices. Sorting a family
/// therefore yields a stable, human-readable enumeration starting at the
/// empty set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        assert!(n <= MAX_CARRIER);
        if n == MAX_CARRIER {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        assert!(i < MAX_CARRIER);
        Subset(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Subset {
        let mut s = Subset::EMPTY;
        for i in iter {
            s = s.with(i);
        }
        s
    }

    pub fn from_bits(bits: u64) -> Subset {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_CARRIER && self.0 & (1u64 << i) != 0
    }

    #[must_use]
    pub fn with(self, i: usize) -> Subset {
        assert!(i < MAX_CARRIER);
        Subset(self.0 | (1u64 << i))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn inter(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // The side holding the lowest differing index has the lexicographically
        // smaller ascending index list.
        let low = diff.trailing_zeros() as usize;
        if self.contains(low) {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
