//! Finite topologies and preorders on a shared carrier.
//!
//! A [`FiniteTopology`] stores its open sets in a canonical sorted order so
//! that equality, printing, and serialization are deterministic. Construction
//! never silently completes a family to a topology: [`FiniteTopology::validate`]
//! reports exactly which closure axioms fail, and [`union_closure`] is the
//! explicit way to saturate a basis.
//!
//! A [`Preorder`] is a reflexive transitive relation. The two directions of
//! the classical finite correspondence are provided: [`Preorder::alexandrov`]
//! builds the topology whose opens are the up-closed sets, and
//! [`FiniteTopology::specialization`] recovers the preorder; on preorders the
//! round trip is the identity.

use crate::carrier::{Carrier, Subset};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("subset uses bit {bit}, beyond a carrier of size {size}")]
    OutOfRange { bit: usize, size: usize },
    #[error("relation pair ({x},{y}) is out of range for a carrier of size {size}")]
    PairOutOfRange { x: usize, y: usize, size: usize },
    #[error("relation is not reflexive at element index {0}")]
    NotReflexive(usize),
    #[error("relation is not transitive: {x} <= {y} and {y} <= {z} but not {x} <= {z}")]
    NotTransitive { x: usize, y: usize, z: usize },
}

/// Per-axiom account of how a family of subsets fails to be a topology.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopologyReport {
    pub missing_empty: bool,
    pub missing_full: bool,
    /// Pairs of opens (by position) whose union is not in the family.
    pub union_violations: Vec<(usize, usize)>,
    /// Pairs of opens (by position) whose intersection is not in the family.
    pub intersection_violations: Vec<(usize, usize)>,
}

impl TopologyReport {
    pub fn is_topology(&self) -> bool {
        !self.missing_empty
            && !self.missing_full
            && self.union_violations.is_empty()
            && self.intersection_violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct FiniteTopology {
    carrier: Carrier,
    /// Sorted by (size, lowest differing element) and deduplicated.
    opens: Vec<Subset>,
}

impl PartialEq for FiniteTopology {
    fn eq(&self, other: &Self) -> bool {
        self.carrier.labels() == other.carrier.labels() && self.opens == other.opens
    }
}

impl Eq for FiniteTopology {}

impl FiniteTopology {
    /// Wraps a family of subsets as given (sorted and deduplicated, but not
    /// closed under anything). Use [`FiniteTopology::validate`] to test the
    /// axioms, or [`union_closure`] to build from a basis.
    pub fn from_masks(carrier: Carrier, masks: Vec<Subset>) -> Result<Self, TopologyError> {
        let size = carrier.len();
        for m in &masks {
            if let Some(bit) = m.iter().find(|&b| b >= size) {
                return Err(TopologyError::OutOfRange { bit, size });
            }
        }
        let mut opens = masks;
        opens.sort();
        opens.dedup();
        Ok(FiniteTopology { carrier, opens })
    }

    pub fn discrete(carrier: Carrier) -> Self {
        let n = carrier.len();
        let all: Vec<Subset> = (0..(1u64 << n)).map(Subset::from_bits).collect();
        FiniteTopology::from_masks(carrier, all).expect("bits in range")
    }

    pub fn indiscrete(carrier: Carrier) -> Self {
        let full = carrier.full();
        FiniteTopology::from_masks(carrier, vec![Subset::EMPTY, full]).expect("bits in range")
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn is_open(&self, s: Subset) -> bool {
        self.opens.binary_search(&s).is_ok()
    }

    /// Checks the four finite topology axioms, reporting every violation.
    pub fn validate(&self) -> TopologyReport {
        let mut report = TopologyReport {
            missing_empty: !self.is_open(Subset::EMPTY),
            missing_full: !self.is_open(self.carrier.full()),
            ..TopologyReport::default()
        };
        let n = self.opens.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let u = self.opens[i].union(self.opens[j]);
                if !self.is_open(u) {
                    report.union_violations.push((i, j));
                }
                let v = self.opens[i].inter(self.opens[j]);
                if !self.is_open(v) {
                    report.intersection_violations.push((i, j));
                }
            }
        }
        report
    }

    /// The preorder `x <= y` iff every open containing `x` contains `y`.
    pub fn specialization(&self) -> Preorder {
        let n = self.carrier.len();
        let mut up = vec![self.carrier.full(); n];
        for o in &self.opens {
            for x in o.iter() {
                up[x] = up[x].inter(*o);
            }
        }
        Preorder::from_up_masks(self.carrier.clone(), up).expect("intersection of opens is reflexive and transitive")
    }
}

/// Closes a basis under arbitrary unions (the empty union included, so the
/// empty set is always present). The result is a topology whenever the basis
/// covers the carrier and is closed under pairwise intersection where it
/// matters; callers validate when that is not guaranteed.
pub fn union_closure(carrier: Carrier, basis: &[Subset]) -> FiniteTopology {
    /// Resource guard: a closure this large (4M opens) is far beyond anything
    /// the finite queries here are for, and would only exhaust memory.
    const MAX_OPENS: usize = 1 << 22;
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(Subset::EMPTY);
    let mut frontier: Vec<Subset> = vec![Subset::EMPTY];
    while let Some(u) = frontier.pop() {
        for b in basis {
            let v = u.union(*b);
            if seen.insert(v) {
                assert!(
                    seen.len() <= MAX_OPENS,
                    "union closure exceeds {MAX_OPENS} open sets; reduce the carrier"
                );
                frontier.push(v);
            }
        }
    }
    FiniteTopology::from_masks(carrier, seen.into_iter().collect()).expect("basis already checked by caller")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preorder {
    carrier: Carrier,
    /// `up[x]` = set of all `y` with `x <= y`.
    up: Vec<Subset>,
}

impl Preorder {
    /// Builds a preorder from the full list of related pairs `(x, y)` meaning
    /// `x <= y`. Reflexive pairs may be omitted; transitivity is checked, not
    /// completed.
    pub fn from_pairs(carrier: Carrier, pairs: &[(usize, usize)]) -> Result<Self, TopologyError> {
        let n = carrier.len();
        let mut up: Vec<Subset> = (0..n).map(Subset::singleton).collect();
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(TopologyError::PairOutOfRange { x, y, size: n });
            }
            up[x] = up[x].with(y);
        }
        Self::from_up_masks(carrier, up)
    }

    /// Builds a preorder from up-set masks, checking reflexivity and
    /// transitivity.
    pub fn from_up_masks(carrier: Carrier, up: Vec<Subset>) -> Result<Self, TopologyError> {
        let n = carrier.len();
        assert_eq!(up.len(), n, "one up-set per element");
        for (x, u) in up.iter().enumerate() {
            if let Some(bit) = u.iter().find(|&b| b >= n) {
                return Err(TopologyError::OutOfRange { bit, size: n });
            }
            if !u.contains(x) {
                return Err(TopologyError::NotReflexive(x));
            }
        }
        for x in 0..n {
            for y in up[x].iter() {
                if !up[y].is_subset_of(up[x]) {
                    let z = up[y]
                        .iter()
                        .find(|&z| !up[x].contains(z))
                        .expect("subset check failed, so a witness exists");
                    return Err(TopologyError::NotTransitive { x, y, z });
                }
            }
        }
        Ok(Preorder { carrier, up })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    /// All `y` with `x <= y`.
    pub fn up_set(&self, x: usize) -> Subset {
        self.up[x]
    }

    /// The topology whose opens are exactly the up-closed sets, realized as
    /// the union closure of the principal up-sets.
    pub fn alexandrov(&self) -> FiniteTopology {
        union_closure(self.carrier.clone(), &self.up)
    }
}

/// Enumerates every preorder on `n` fresh elements labeled `x0..x{n-1}`.
/// Intended for small `n`: the scan ranges over all reflexive relations.
pub fn enumerate_preorders(n: usize) -> Vec<Preorder> {
    assert!(n >= 1 && n <= 4, "exhaustive preorder scan is for tiny carriers");
    let carrier = Carrier::new((0..n).map(|i| format!("x{i}"))).expect("small fresh carrier");
    let offdiag: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let m = offdiag.len();
    let mut out = Vec::new();
    for bits in 0..(1u64 << m) {
        let mut up: Vec<Subset> = (0..n).map(Subset::singleton).collect();
        for (k, &(x, y)) in offdiag.iter().enumerate() {
            if bits >> k & 1 == 1 {
                up[x] = up[x].with(y);
            }
        }
        if let Ok(p) = Preorder::from_up_masks(carrier.clone(), up) {
            out.push(p);
        }
    }
    out
}
