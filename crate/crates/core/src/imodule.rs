//! Modules over a monoid indexed by a unitary magma: scaled-subset families,
//! the three equivalent subset conditions, the induced topology, and the
//! decomposition checks for the derived neighborhood structure.

use crate::carrier::{Carrier, Subset};
use crate::fibrous::{AxiomReport, FibrousError, FibrousPreorder};
use crate::magma::UnitaryMagma;
use crate::repr::{EtaGammaRep, NeighborhoodMap, NmapReport, ReprError};
use crate::topology::{union_closure, FiniteTopology};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonoidError {
    #[error("monoid must have at least one element")]
    Empty,
    #[error("duplicate element label '{0}'")]
    DuplicateLabel(String),
    #[error("unknown element label '{0}'")]
    UnknownLabel(String),
    #[error("addition table must be {expected}x{expected}, row {row} has {got} entries")]
    BadShape {
        expected: usize,
        row: usize,
        got: usize,
    },
    #[error("addition is not associative at ({a},{b},{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("zero laws fail at element {x}")]
    ZeroLawFailed { x: usize },
}

/// A finite additive monoid given by its table; associativity and the
/// two-sided zero laws are verified exhaustively. Commutativity is not
/// required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoidData {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    add: Vec<usize>,
    zero: usize,
}

impl FiniteMonoidData {
    pub fn new(
        labels: Vec<String>,
        zero_label: &str,
        add_rows: Vec<Vec<String>>,
    ) -> Result<Self, MonoidError> {
        if labels.is_empty() {
            return Err(MonoidError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(MonoidError::DuplicateLabel(l.clone()));
            }
        }
        let zero = *index
            .get(zero_label)
            .ok_or_else(|| MonoidError::UnknownLabel(zero_label.to_string()))?;
        let n = labels.len();
        if add_rows.len() != n {
            return Err(MonoidError::BadShape {
                expected: n,
                row: add_rows.len(),
                got: 0,
            });
        }
        let mut add = Vec::with_capacity(n * n);
        for (i, row) in add_rows.iter().enumerate() {
            if row.len() != n {
                return Err(MonoidError::BadShape {
                    expected: n,
                    row: i,
                    got: row.len(),
                });
            }
            for entry in row {
                let k = *index
                    .get(entry)
                    .ok_or_else(|| MonoidError::UnknownLabel(entry.clone()))?;
                add.push(k);
            }
        }
        for x in 0..n {
            if add[zero * n + x] != x || add[x * n + zero] != x {
                return Err(MonoidError::ZeroLawFailed { x });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = add[a * n + b];
                for c in 0..n {
                    if add[ab * n + c] != add[a * n + add[b * n + c]] {
                        return Err(MonoidError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(FiniteMonoidData {
            labels,
            index,
            add,
            zero,
        })
    }

    /// Addition modulo `n`, elements labeled `"0".."n-1"`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let labels: Vec<String> = (0..n).map(|v| v.to_string()).collect();
        let rows = (0..n)
            .map(|a| (0..n).map(|b| ((a + b) % n).to_string()).collect())
            .collect();
        FiniteMonoidData::new(labels, "0", rows).expect("modular addition is a monoid")
    }

    /// Addition truncated at `top`, elements labeled `"0".."top"`.
    pub fn truncated_add(top: usize) -> Self {
        let labels: Vec<String> = (0..=top).map(|v| v.to_string()).collect();
        let rows = (0..=top)
            .map(|a| {
                (0..=top)
                    .map(|b| (a + b).min(top).to_string())
                    .collect()
            })
            .collect();
        FiniteMonoidData::new(labels, "0", rows).expect("truncated addition is a monoid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.labels.len() + b]
    }

    /// `n`-fold sum of `u`; `scalar(0, u)` is the zero element.
    pub fn scalar(&self, n: u64, u: usize) -> usize {
        let mut acc = self.zero;
        for _ in 0..n {
            acc = self.add(acc, u);
        }
        acc
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

    pub fn carrier(&self) -> Carrier {
        Carrier::new(self.labels.iter().cloned()).expect("monoid labels are valid")
    }
}

/// The three conditions on an indexed family of subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyCondition {
    /// (i) each set contains zero.
    ZeroMembership,
    /// (ii) `a` in the `n`-th set and `a'` in the set at `alpha_n(a)` imply
    /// `a + a'` in the `n`-th set.
    AdditionCompatibility,
    /// (iii) the set at `n * m` is contained in the intersection of the sets
    /// at `n` and at `m`.
    ProductRefinement,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("index {value} out of range for {role} of size {size}")]
    IndexOutOfRange {
        role: &'static str,
        value: usize,
        size: usize,
    },
    #[error("malformed {what}")]
    BadShape { what: &'static str },
    #[error("alpha is missing a value for subset element {element}")]
    MissingAlpha { element: usize },
    #[error("alpha defined at {element}, which is not in the subset")]
    AlphaOffSubset { element: usize },
    #[error("alpha has conflicting values for element {element}")]
    DuplicateAlpha { element: usize },
    #[error("family condition {condition:?} fails at witness {witness:?}")]
    FamilyConditionFailed {
        condition: FamilyCondition,
        witness: Vec<usize>,
    },
    #[error("this check needs a topology")]
    MissingTopology,
    #[error("the supplied topology is over a different carrier")]
    CarrierMismatch,
    #[error("malformed gamma table: {reason}")]
    MalformedGamma { reason: &'static str },
    #[error("neither the scaled-shift-closure nor the self-interior condition holds")]
    PreconditionFailed {
        closure: ConditionFailure,
        interior: ConditionFailure,
    },
    #[error("the translate family does not generate a topology: {missing:?} is a missing intersection")]
    NotATopology { missing: Subset },
    #[error("carrier of size {size} exceeds the exhaustive-scan bound {bound}")]
    CarrierTooLarge { size: usize, bound: usize },
    #[error(transparent)]
    Fibrous(#[from] FibrousError),
}

/// An indexed family of subsets of a monoid with per-set scale maps,
/// subject to the three [`FamilyCondition`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnFamily {
    monoid: FiniteMonoidData,
    magma: UnitaryMagma,
    sets: Vec<Subset>,
    /// `alpha[n * |X| + a]` for `a` in `sets[n]`, else unset.
    alpha: Vec<Option<usize>>,
}

impl SnFamily {
    pub fn new(
        monoid: FiniteMonoidData,
        magma: UnitaryMagma,
        sets: Vec<Subset>,
        alpha_entries: &[(usize, usize, usize)],
    ) -> Result<Self, ModuleError> {
        let x_count = monoid.len();
        let i_count = magma.len();
        if sets.len() != i_count {
            return Err(ModuleError::BadShape {
                what: "subset family",
            });
        }
        for set in &sets {
            if let Some(bit) = set.iter().find(|&v| v >= x_count) {
                return Err(ModuleError::IndexOutOfRange {
                    role: "monoid",
                    value: bit,
                    size: x_count,
                });
            }
        }
        let mut alpha = vec![None; i_count * x_count];
        for &(n, a, value) in alpha_entries {
            if n >= i_count {
                return Err(ModuleError::IndexOutOfRange {
                    role: "index set",
                    value: n,
                    size: i_count,
                });
            }
            if a >= x_count {
                return Err(ModuleError::IndexOutOfRange {
                    role: "monoid",
                    value: a,
                    size: x_count,
                });
            }
            if value >= i_count {
                return Err(ModuleError::IndexOutOfRange {
                    role: "index set",
                    value,
                    size: i_count,
                });
            }
            if !sets[n].contains(a) {
                return Err(ModuleError::AlphaOffSubset { element: a });
            }
            let slot = &mut alpha[n * x_count + a];
            if let Some(old) = *slot {
                if old != value {
                    return Err(ModuleError::DuplicateAlpha { element: a });
                }
            }
            *slot = Some(value);
        }
        for (n, set) in sets.iter().enumerate() {
            for a in set.iter() {
                if alpha[n * x_count + a].is_none() {
                    return Err(ModuleError::MissingAlpha { element: a });
                }
            }
        }
        Ok(SnFamily {
            monoid,
            magma,
            sets,
            alpha,
        })
    }

    pub fn monoid(&self) -> &FiniteMonoidData {
        &self.monoid
    }

    pub fn magma(&self) -> &UnitaryMagma {
        &self.magma
    }

    pub fn set(&self, n: usize) -> Subset {
        self.sets[n]
    }

    pub fn alpha(&self, n: usize, a: usize) -> Option<usize> {
        self.alpha[n * self.monoid.len() + a]
    }

    /// The translate `x + S_n`.
    pub fn neighborhood(&self, n: usize, x: usize) -> Subset {
        Subset::from_indices(self.sets[n].iter().map(|a| self.monoid.add(x, a)))
    }

    /// Checks the three family conditions in order; first failure wins.
    pub fn validate(&self) -> Result<(), ModuleError> {
        for (n, set) in self.sets.iter().enumerate() {
            if !set.contains(self.monoid.zero()) {
                return Err(ModuleError::FamilyConditionFailed {
                    condition: FamilyCondition::ZeroMembership,
                    witness: vec![n],
                });
            }
        }
        for (n, set) in self.sets.iter().enumerate() {
            for a in set.iter() {
                let scale = self.alpha(n, a).expect("alpha covers each set");
                for a2 in self.sets[scale].iter() {
                    if !set.contains(self.monoid.add(a, a2)) {
                        return Err(ModuleError::FamilyConditionFailed {
                            condition: FamilyCondition::AdditionCompatibility,
                            witness: vec![n, a, a2],
                        });
                    }
                }
            }
        }
        for n in 0..self.sets.len() {
            for m in 0..self.sets.len() {
                let product = self.sets[self.magma.op(n, m)];
                let both = self.sets[n].inter(self.sets[m]);
                if !product.is_subset_of(both) {
                    let escapee = product
                        .iter()
                        .find(|&v| !both.contains(v))
                        .expect("subset check failed");
                    return Err(ModuleError::FamilyConditionFailed {
                        condition: FamilyCondition::ProductRefinement,
                        witness: vec![n, m, escapee],
                    });
                }
            }
        }
        Ok(())
    }
}

/// Realizes a validated subset family as a fibrous preorder:
/// `x <=[n] y` iff `y = x + a` for some `a` in the `n`-th set, with
/// successor `alpha_n(a) * n` for the first such `a`.
pub fn fp_from_sn_family(family: &SnFamily) -> Result<FibrousPreorder, ModuleError> {
    family.validate()?;
    let witness = |n: usize, x: usize, y: usize| -> Option<usize> {
        family.sets[n]
            .iter()
            .find(|&a| family.monoid.add(x, a) == y)
    };
    let fp = FibrousPreorder::from_fn(
        family.monoid.carrier(),
        family.magma.clone(),
        |n, x, y| witness(n, x, y).is_some(),
        |n, x, y| {
            let a = witness(n, x, y).expect("relation membership implies a witness");
            let scale = family.alpha(n, a).expect("alpha covers each set");
            family.magma.op(scale, n)
        },
    )?;
    Ok(fp)
}

/// The three equivalent conditions on the distinguished subset of a module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    /// (a) zero belongs to the subset and each element admits a scale whose
    /// scaled translates of the subset stay inside it.
    ScaledShiftClosure,
    /// (b) every element of the subset has a scaled translate of the subset
    /// contained in the subset.
    SelfInterior,
    /// (c) the scaled translates form an open neighborhood basis for a given
    /// topology.
    NeighborhoodBasis,
}

/// Why a module condition check came out negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionFailure {
    /// Zero is not in the subset.
    MissingZero,
    /// No scale works for subset element `a` under first-witness
    /// reconstruction.
    NoScaleFor { a: usize },
    /// The supplied scale map fails at `a` with addend `addend`.
    AlphaNotWitnessing { a: usize, addend: usize },
    /// Subset element `y` has no scaled translate inside the subset.
    NotInterior { y: usize },
    /// The translate at `(n, x)` does not contain `x`.
    BaseEscape { n: usize, x: usize },
    /// The translate at `(n, x)` is not open.
    TranslateNotOpen { n: usize, x: usize },
    /// No scale shrinks a translate of `x` into the open set.
    NoNeighborhoodScale { open: Subset, x: usize },
    /// The supplied gamma value at `(open, x)` does not witness containment.
    GammaNotWitnessing { open: Subset, x: usize },
}

/// Verdict of a module condition check, with the first failure when
/// negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionOutcome {
    pub holds: bool,
    pub failure: Option<ConditionFailure>,
}

impl ConditionOutcome {
    fn pass() -> Self {
        ConditionOutcome {
            holds: true,
            failure: None,
        }
    }

    fn fail(failure: ConditionFailure) -> Self {
        ConditionOutcome {
            holds: false,
            failure: Some(failure),
        }
    }
}

/// Violations of the module action laws; empty vectors mean the action is
/// lawful. Construction does not require lawfulness — every check that
/// consumes the data spells out what it needs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ActionReport {
    /// `x` with `xi(unit, x) != x`.
    pub unit_violations: Vec<usize>,
    /// `n` with `xi(n, 0) != 0`.
    pub zero_violations: Vec<usize>,
    /// `(n, x, y)` with `xi(n, x + y) != xi(n, x) + xi(n, y)`.
    pub additivity_violations: Vec<(usize, usize, usize)>,
    /// `(n, m, x)` with `xi(n * m, x) != xi(n, xi(m, x))`.
    pub composition_violations: Vec<(usize, usize, usize)>,
    /// `(n, m, x)` with `xi(n, xi(m, x)) != xi(m, xi(n, x))`.
    pub commutation_violations: Vec<(usize, usize, usize)>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.unit_violations.is_empty()
            && self.zero_violations.is_empty()
            && self.additivity_violations.is_empty()
            && self.composition_violations.is_empty()
            && self.commutation_violations.is_empty()
    }
}

/// A monoid with a magma-indexed scaling map, a distinguished subset, and
/// optional scale and neighborhood-witness tables. The scaled subsets
/// `S_n = xi(n, S)` are always recomputed from `xi` and `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleData {
    monoid: FiniteMonoidData,
    magma: UnitaryMagma,
    /// `xi[n * |X| + x]`.
    xi: Vec<usize>,
    s: Subset,
    /// Optional scale map on the subset, as element-indexed slots.
    alpha: Option<Vec<Option<usize>>>,
    /// Optional neighborhood witnesses keyed by (open set, point).
    gamma: Option<BTreeMap<(Subset, usize), usize>>,
}

impl ModuleData {
    pub fn new(
        monoid: FiniteMonoidData,
        magma: UnitaryMagma,
        xi_rows: Vec<Vec<usize>>,
        s: Subset,
        alpha_entries: Option<&[(usize, usize)]>,
        gamma_entries: Option<&[(Subset, usize, usize)]>,
    ) -> Result<Self, ModuleError> {
        let x_count = monoid.len();
        let i_count = magma.len();
        if xi_rows.len() != i_count || xi_rows.iter().any(|r| r.len() != x_count) {
            return Err(ModuleError::BadShape {
                what: "scaling table",
            });
        }
        let mut xi = Vec::with_capacity(i_count * x_count);
        for row in &xi_rows {
            for &v in row {
                if v >= x_count {
                    return Err(ModuleError::IndexOutOfRange {
                        role: "monoid",
                        value: v,
                        size: x_count,
                    });
                }
                xi.push(v);
            }
        }
        if let Some(bit) = s.iter().find(|&v| v >= x_count) {
            return Err(ModuleError::IndexOutOfRange {
                role: "monoid",
                value: bit,
                size: x_count,
            });
        }
        let alpha = match alpha_entries {
            None => None,
            Some(entries) => {
                let mut slots = vec![None; x_count];
                for &(a, value) in entries {
                    if a >= x_count {
                        return Err(ModuleError::IndexOutOfRange {
                            role: "monoid",
                            value: a,
                            size: x_count,
                        });
                    }
                    if value >= i_count {
                        return Err(ModuleError::IndexOutOfRange {
                            role: "index set",
                            value,
                            size: i_count,
                        });
                    }
                    if !s.contains(a) {
                        return Err(ModuleError::AlphaOffSubset { element: a });
                    }
                    if let Some(old) = slots[a] {
                        if old != value {
                            return Err(ModuleError::DuplicateAlpha { element: a });
                        }
                    }
                    slots[a] = Some(value);
                }
                for a in s.iter() {
                    if slots[a].is_none() {
                        return Err(ModuleError::MissingAlpha { element: a });
                    }
                }
                Some(slots)
            }
        };
        let gamma = match gamma_entries {
            None => None,
            Some(entries) => {
                let mut map = BTreeMap::new();
                for &(open, x, n) in entries {
                    if let Some(bit) = open.iter().find(|&v| v >= x_count) {
                        return Err(ModuleError::IndexOutOfRange {
                            role: "monoid",
                            value: bit,
                            size: x_count,
                        });
                    }
                    if x >= x_count {
                        return Err(ModuleError::IndexOutOfRange {
                            role: "monoid",
                            value: x,
                            size: x_count,
                        });
                    }
                    if n >= i_count {
                        return Err(ModuleError::IndexOutOfRange {
                            role: "index set",
                            value: n,
                            size: i_count,
                        });
                    }
                    if !open.contains(x) {
                        return Err(ModuleError::MalformedGamma {
                            reason: "entry's point lies outside its set",
                        });
                    }
                    if map.insert((open, x), n).is_some_and(|old| old != n) {
                        return Err(ModuleError::MalformedGamma {
                            reason: "conflicting values for the same pointed set",
                        });
                    }
                }
                Some(map)
            }
        };
        Ok(ModuleData {
            monoid,
            magma,
            xi,
            s,
            alpha,
            gamma,
        })
    }

    pub fn monoid(&self) -> &FiniteMonoidData {
        &self.monoid
    }

    pub fn magma(&self) -> &UnitaryMagma {
        &self.magma
    }

    pub fn xi(&self, n: usize, x: usize) -> usize {
        self.xi[n * self.monoid.len() + x]
    }

    pub fn subset(&self) -> Subset {
        self.s
    }

    /// The scaled subset `S_n = xi(n, S)`, recomputed on each call.
    pub fn s_n(&self, n: usize) -> Subset {
        Subset::from_indices(self.s.iter().map(|a| self.xi(n, a)))
    }

    /// The translate `x + S_n`.
    pub fn translate(&self, x: usize, n: usize) -> Subset {
        Subset::from_indices(self.s_n(n).iter().map(|v| self.monoid.add(x, v)))
    }

    pub fn supplied_alpha(&self, a: usize) -> Option<usize> {
        self.alpha.as_ref().and_then(|slots| slots[a])
    }

    pub fn supplied_gamma(&self, open: Subset, x: usize) -> Option<usize> {
        self.gamma.as_ref().and_then(|m| m.get(&(open, x)).copied())
    }

    pub fn has_alpha(&self) -> bool {
        self.alpha.is_some()
    }

    pub fn has_gamma(&self) -> bool {
        self.gamma.is_some()
    }

    /// Reports every violated action law; all scans are exhaustive.
    pub fn validate_action(&self) -> ActionReport {
        let mut report = ActionReport::default();
        let x_count = self.monoid.len();
        let i_count = self.magma.len();
        let unit = self.magma.unit();
        for x in 0..x_count {
            if self.xi(unit, x) != x {
                report.unit_violations.push(x);
            }
        }
        for n in 0..i_count {
            if self.xi(n, self.monoid.zero()) != self.monoid.zero() {
                report.zero_violations.push(n);
            }
        }
        for n in 0..i_count {
            for x in 0..x_count {
                for y in 0..x_count {
                    let lhs = self.xi(n, self.monoid.add(x, y));
                    let rhs = self.monoid.add(self.xi(n, x), self.xi(n, y));
                    if lhs != rhs {
                        report.additivity_violations.push((n, x, y));
                    }
                }
            }
        }
        for n in 0..i_count {
            for m in 0..i_count {
                for x in 0..x_count {
                    let product = self.xi(self.magma.op(n, m), x);
                    let nested = self.xi(n, self.xi(m, x));
                    if product != nested {
                        report.composition_violations.push((n, m, x));
                    }
                    let swapped = self.xi(m, self.xi(n, x));
                    if nested != swapped {
                        report.commutation_violations.push((n, m, x));
                    }
                }
            }
        }
        report
    }

    /// The scale map condition (a) relies on: supplied when present,
    /// otherwise reconstructed by taking, for each subset element, the first
    /// index whose scaled translates stay in the subset.
    fn effective_alpha(&self) -> Result<Vec<Option<usize>>, ConditionFailure> {
        if let Some(slots) = &self.alpha {
            return Ok(slots.clone());
        }
        let mut slots = vec![None; self.monoid.len()];
        for a in self.s.iter() {
            let found = (0..self.magma.len()).find(|&n| {
                self.s
                    .iter()
                    .all(|a2| self.s.contains(self.monoid.add(a, self.xi(n, a2))))
            });
            match found {
                Some(n) => slots[a] = Some(n),
                None => return Err(ConditionFailure::NoScaleFor { a }),
            }
        }
        Ok(slots)
    }
}

/// Checks one of the three module conditions. The neighborhood-basis kind
/// needs the topology to check against; the other two ignore it.
pub fn check_module_condition(
    md: &ModuleData,
    kind: ModuleKind,
    topology: Option<&FiniteTopology>,
) -> Result<ConditionOutcome, ModuleError> {
    match kind {
        ModuleKind::ScaledShiftClosure => {
            if !md.subset().contains(md.monoid().zero()) {
                return Ok(ConditionOutcome::fail(ConditionFailure::MissingZero));
            }
            if md.has_alpha() {
                for a in md.subset().iter() {
                    let n = md.supplied_alpha(a).expect("alpha covers the subset");
                    for a2 in md.subset().iter() {
                        let moved = md.monoid().add(a, md.xi(n, a2));
                        if !md.subset().contains(moved) {
                            return Ok(ConditionOutcome::fail(
                                ConditionFailure::AlphaNotWitnessing { a, addend: a2 },
                            ));
                        }
                    }
                }
                Ok(ConditionOutcome::pass())
            } else {
                match md.effective_alpha() {
                    Ok(_) => Ok(ConditionOutcome::pass()),
                    Err(failure) => Ok(ConditionOutcome::fail(failure)),
                }
            }
        }
        ModuleKind::SelfInterior => {
            for y in md.subset().iter() {
                let found = (0..md.magma().len())
                    .any(|n| md.translate(y, n).is_subset_of(md.subset()));
                if !found {
                    return Ok(ConditionOutcome::fail(ConditionFailure::NotInterior { y }));
                }
            }
            Ok(ConditionOutcome::pass())
        }
        ModuleKind::NeighborhoodBasis => {
            let topology = topology.ok_or(ModuleError::MissingTopology)?;
            if topology.carrier().labels() != md.monoid().labels() {
                return Err(ModuleError::CarrierMismatch);
            }
            for n in 0..md.magma().len() {
                for x in 0..md.monoid().len() {
                    if !md.translate(x, n).contains(x) {
                        return Ok(ConditionOutcome::fail(ConditionFailure::BaseEscape {
                            n,
                            x,
                        }));
                    }
                }
            }
            for n in 0..md.magma().len() {
                for x in 0..md.monoid().len() {
                    if !topology.is_open(md.translate(x, n)) {
                        return Ok(ConditionOutcome::fail(
                            ConditionFailure::TranslateNotOpen { n, x },
                        ));
                    }
                }
            }
            for &open in topology.opens() {
                for x in open.iter() {
                    if md.has_gamma() {
                        match md.supplied_gamma(open, x) {
                            None => {
                                return Err(ModuleError::MalformedGamma {
                                    reason: "missing at a pointed open set of the topology",
                                })
                            }
                            Some(n) => {
                                if !md.translate(x, n).is_subset_of(open) {
                                    return Ok(ConditionOutcome::fail(
                                        ConditionFailure::GammaNotWitnessing { open, x },
                                    ));
                                }
                            }
                        }
                    } else {
                        let found = (0..md.magma().len())
                            .any(|n| md.translate(x, n).is_subset_of(open));
                        if !found {
                            return Ok(ConditionOutcome::fail(
                                ConditionFailure::NoNeighborhoodScale { open, x },
                            ));
                        }
                    }
                }
            }
            Ok(ConditionOutcome::pass())
        }
    }
}

fn require_closure_or_interior(md: &ModuleData) -> Result<(), ModuleError> {
    let closure = check_module_condition(md, ModuleKind::ScaledShiftClosure, None)?;
    if closure.holds {
        return Ok(());
    }
    let interior = check_module_condition(md, ModuleKind::SelfInterior, None)?;
    if interior.holds {
        return Ok(());
    }
    Err(ModuleError::PreconditionFailed {
        closure: closure.failure.expect("negative outcome has a failure"),
        interior: interior.failure.expect("negative outcome has a failure"),
    })
}

/// The topology generated by the translates `x + S_n` as a basis, after
/// verifying that the subset satisfies the closure or interior condition.
/// The result is validated: if the translate family is not closed under
/// intersection — possible when the scaling map violates its laws — the
/// first missing intersection is reported instead of a broken topology.
pub fn module_topology(md: &ModuleData) -> Result<FiniteTopology, ModuleError> {
    require_closure_or_interior(md)?;
    let carrier = md.monoid().carrier();
    let mut basis = Vec::new();
    for n in 0..md.magma().len() {
        for x in 0..md.monoid().len() {
            basis.push(md.translate(x, n));
        }
    }
    let topology = union_closure(carrier, &basis);
    let report = topology.validate();
    if let Some(&(i, j)) = report.intersection_violations.first() {
        return Err(ModuleError::NotATopology {
            missing: topology.opens()[i].inter(topology.opens()[j]),
        });
    }
    debug_assert!(report.is_topology());
    Ok(topology)
}

/// Bound on the carrier size for the exhaustive membership scan below.
pub const MODULE_SCAN_BOUND: usize = 20;

/// The family of all subsets `B` satisfying the membership rule "every
/// point of `B` has some translate `x + S_n` inside `B`", computed by
/// scanning all `2^|X|` subsets. This is the independent oracle for
/// [`module_topology`]; the two agree for lawful scaling maps. The result
/// is returned as collected masks and is not forced to be a topology.
pub fn module_rule_topology(md: &ModuleData) -> Result<FiniteTopology, ModuleError> {
    let x_count = md.monoid().len();
    if x_count > MODULE_SCAN_BOUND {
        return Err(ModuleError::CarrierTooLarge {
            size: x_count,
            bound: MODULE_SCAN_BOUND,
        });
    }
    let carrier = md.monoid().carrier();
    let i_count = md.magma().len();
    let translates: Vec<Vec<Subset>> = (0..i_count)
        .map(|n| (0..x_count).map(|x| md.translate(x, n)).collect())
        .collect();
    let mut opens = Vec::new();
    for bits in 0u64..(1u64 << x_count) {
        let candidate = Subset::from_bits(bits);
        let ok = candidate.iter().all(|x| {
            (0..i_count).any(|n| translates[n][x].is_subset_of(candidate))
        });
        if ok {
            opens.push(candidate);
        }
    }
    Ok(FiniteTopology::from_masks(carrier, opens).expect("masks are in range"))
}

/// Outcome of the strengthened clause: whether the subset is closed under
/// every scaling, and whether the translate structure is itself a valid
/// indexed preorder with a valid neighborhood family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoreoverReport {
    /// First `(n, a)` with `xi(n, a)` outside the subset, if any.
    pub closure_violation: Option<(usize, usize)>,
    pub axioms: AxiomReport,
    pub neighborhoods: NmapReport,
}

impl MoreoverReport {
    pub fn closure_holds(&self) -> bool {
        self.closure_violation.is_none()
    }

    pub fn cartesian_holds(&self) -> bool {
        self.axioms.passed() && self.neighborhoods.passed()
    }
}

/// The candidate fibrous preorder of a module whose subset passes the
/// closure condition: `x <=[n] y` iff `y = x + xi(n, a)` for some `a` in
/// the subset, with successor `alpha(a) * n` for the first such `a`.
pub fn module_fibrous_candidate(md: &ModuleData) -> Result<FibrousPreorder, ModuleError> {
    let closure = check_module_condition(md, ModuleKind::ScaledShiftClosure, None)?;
    if !closure.holds {
        let interior = check_module_condition(md, ModuleKind::SelfInterior, None)?;
        return Err(ModuleError::PreconditionFailed {
            closure: closure.failure.expect("negative outcome has a failure"),
            interior: interior.failure.unwrap_or(ConditionFailure::MissingZero),
        });
    }
    let alpha = md
        .effective_alpha()
        .expect("closure condition implies a scale map");
    let witness = |n: usize, x: usize, y: usize| -> Option<usize> {
        md.subset()
            .iter()
            .find(|&a| md.monoid().add(x, md.xi(n, a)) == y)
    };
    let fp = FibrousPreorder::from_fn(
        md.monoid().carrier(),
        md.magma().clone(),
        |n, x, y| witness(n, x, y).is_some(),
        |n, x, y| {
            let a = witness(n, x, y).expect("relation membership implies a witness");
            let scale = alpha[a].expect("alpha covers the subset");
            md.magma().op(scale, n)
        },
    )?;
    Ok(fp)
}

/// Checks the strengthened clause for a module passing the closure
/// condition: (1) the subset is closed under every scaling, and (2) the
/// translate relation passes the indexed-preorder axioms while the
/// translates pass the neighborhood-family conditions.
pub fn check_moreover_clause(md: &ModuleData) -> Result<MoreoverReport, ModuleError> {
    let fp = module_fibrous_candidate(md)?;
    let closure_violation = (0..md.magma().len())
        .flat_map(|n| md.subset().iter().map(move |a| (n, a)))
        .find(|&(n, a)| !md.subset().contains(md.xi(n, a)));
    let axioms = fp.check_axioms();
    let sets: Vec<Vec<Subset>> = (0..md.magma().len())
        .map(|n| (0..md.monoid().len()).map(|x| md.translate(x, n)).collect())
        .collect();
    let nmap = NeighborhoodMap::new(md.monoid().carrier(), md.magma().clone(), sets)
        .expect("translate sets have the right shape");
    let neighborhoods = nmap.validate();
    Ok(MoreoverReport {
        closure_violation,
        axioms,
        neighborhoods,
    })
}

/// Violations of the successor decomposition: the witness at scale `n`
/// should be the unit-scale witness multiplied by `n`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BetaReport {
    /// `(n, x, y)` with `gamma(eta(n,x), y) != gamma(eta(unit,x), y) * n`.
    pub violations: Vec<(usize, usize, usize)>,
}

impl BetaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks whether the neighborhood-witness map decomposes through the unit
/// scale: for every `n`, `x`, and `y` in `eta(n, x)`,
/// `gamma(eta(n,x), y) = gamma(eta(unit,x), y) * n`. The structure must
/// validate first.
pub fn check_beta_decomposition(eg: &EtaGammaRep) -> Result<BetaReport, ReprError> {
    if !eg.validate().passed() {
        return Err(ReprError::ValidationFailed);
    }
    let unit = eg.magma().unit();
    let mut report = BetaReport::default();
    for n in eg.magma().indices() {
        for x in 0..eg.carrier().len() {
            let at_n = eg.eta(n, x);
            let at_unit = eg.eta(unit, x);
            for y in at_n.iter() {
                let lhs = eg
                    .gamma(at_n, y)
                    .expect("validated structure has total gamma on pointed opens");
                let base = eg
                    .gamma(at_unit, y)
                    .expect("product condition keeps the point inside the unit translate");
                if lhs != eg.magma().op(base, n) {
                    report.violations.push((n, x, y));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::fp_to_nmap;

    fn mask(indices: &[usize]) -> Subset {
        Subset::from_indices(indices.iter().copied())
    }

    #[test]
    fn monoid_validation() {
        let m = FiniteMonoidData::cyclic(4);
        assert_eq!(m.add(3, 2), 1);
        let t = FiniteMonoidData::truncated_add(2);
        assert_eq!(t.add(1, 2), 2);
        assert_eq!(t.add(1, 1), 2);
        let bad = FiniteMonoidData::new(
            vec!["0".into(), "1".into()],
            "0",
            vec![vec!["0".into(), "0".into()], vec!["1".into(), "0".into()]],
        );
        assert_eq!(bad.unwrap_err(), MonoidError::ZeroLawFailed { x: 1 });
        let nonassoc = FiniteMonoidData::new(
            vec!["0".into(), "1".into(), "2".into()],
            "0",
            vec![
                vec!["0".into(), "1".into(), "2".into()],
                vec!["1".into(), "2".into(), "0".into()],
                vec!["2".into(), "2".into(), "1".into()],
            ],
        );
        assert_eq!(
            nonassoc.unwrap_err(),
            MonoidError::NotAssociative { a: 1, b: 1, c: 1 }
        );
    }

    fn coset_family() -> SnFamily {
        // Over Z4 with two scales: the full set at scale 1 and the even
        // subgroup at scale 2, with constant scale maps.
        let monoid = FiniteMonoidData::cyclic(4);
        let magma = UnitaryMagma::capped_nat_mult(2).unwrap();
        let sets = vec![mask(&[0, 1, 2, 3]), mask(&[0, 2])];
        let alpha: Vec<(usize, usize, usize)> = (0..4)
            .map(|a| (0, a, 0))
            .chain([(1, 0, 1), (1, 2, 1)])
            .collect();
        SnFamily::new(monoid, magma, sets, &alpha).unwrap()
    }

    #[test]
    fn coset_family_gives_coset_topology() {
        let family = coset_family();
        family.validate().unwrap();
        let fp = fp_from_sn_family(&family).unwrap();
        assert!(fp.check_axioms().passed());
        for n in 0..2 {
            for x in 0..4 {
                assert_eq!(fp.neighborhood(n, x), family.neighborhood(n, x));
            }
        }
        let t = fp.induced_topology().unwrap();
        assert_eq!(
            t.opens(),
            &[
                Subset::EMPTY,
                mask(&[0, 2]),
                mask(&[1, 3]),
                mask(&[0, 1, 2, 3])
            ]
        );
    }

    #[test]
    fn family_conditions_report_first_failure() {
        let monoid = FiniteMonoidData::cyclic(4);
        let magma = UnitaryMagma::capped_nat_mult(2).unwrap();
        // (i): the set at scale 1 misses zero.
        let family = SnFamily::new(
            monoid.clone(),
            magma.clone(),
            vec![mask(&[1]), mask(&[0])],
            &[(0, 1, 0), (1, 0, 0)],
        )
        .unwrap();
        assert_eq!(
            family.validate().unwrap_err(),
            ModuleError::FamilyConditionFailed {
                condition: FamilyCondition::ZeroMembership,
                witness: vec![0]
            }
        );
        // (ii): 1 is in the set at scale 1, its scale map points back at
        // scale 1, and 1 + 1 = 2 escapes.
        let family = SnFamily::new(
            monoid.clone(),
            magma.clone(),
            vec![mask(&[0, 1]), mask(&[0, 1])],
            &[(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)],
        )
        .unwrap();
        assert_eq!(
            family.validate().unwrap_err(),
            ModuleError::FamilyConditionFailed {
                condition: FamilyCondition::AdditionCompatibility,
                witness: vec![0, 1, 1]
            }
        );
        // (iii): the set at 1*2 = 2 is not inside the set at scale 1.
        let family = SnFamily::new(
            monoid,
            magma,
            vec![mask(&[0]), mask(&[0, 2])],
            &[(0, 0, 0), (1, 0, 0), (1, 2, 0)],
        )
        .unwrap();
        assert_eq!(
            family.validate().unwrap_err(),
            ModuleError::FamilyConditionFailed {
                condition: FamilyCondition::ProductRefinement,
                witness: vec![0, 1, 2]
            }
        );
    }

    #[test]
    fn alpha_domain_checked_at_construction() {
        let monoid = FiniteMonoidData::cyclic(2);
        let magma = UnitaryMagma::trivial();
        assert_eq!(
            SnFamily::new(monoid.clone(), magma.clone(), vec![mask(&[0])], &[])
                .unwrap_err(),
            ModuleError::MissingAlpha { element: 0 }
        );
        assert_eq!(
            SnFamily::new(
                monoid,
                magma,
                vec![mask(&[0])],
                &[(0, 0, 0), (0, 1, 0)]
            )
            .unwrap_err(),
            ModuleError::AlphaOffSubset { element: 1 }
        );
    }

    /// Z4 with the zero map at scale 2 and the even subgroup as subset.
    fn annihilator_module() -> ModuleData {
        let monoid = FiniteMonoidData::cyclic(4);
        let magma = UnitaryMagma::capped_nat_mult(2).unwrap();
        let xi = vec![vec![0, 1, 2, 3], vec![0, 0, 0, 0]];
        ModuleData::new(
            monoid,
            magma,
            xi,
            mask(&[0, 2]),
            Some(&[(0, 1), (2, 1)]),
            None,
        )
        .unwrap()
    }

    #[test]
    fn lawful_action_passes_validation() {
        let md = annihilator_module();
        let report = md.validate_action();
        assert!(report.passed(), "violations: {report:?}");
        assert_eq!(md.s_n(0), mask(&[0, 2]));
        assert_eq!(md.s_n(1), mask(&[0]));
        assert_eq!(md.translate(1, 0), mask(&[1, 3]));
        assert_eq!(md.translate(1, 1), mask(&[1]));
    }

    #[test]
    fn all_three_conditions_agree_on_the_annihilator_module() {
        let md = annihilator_module();
        let a = check_module_condition(&md, ModuleKind::ScaledShiftClosure, None).unwrap();
        assert!(a.holds);
        let b = check_module_condition(&md, ModuleKind::SelfInterior, None).unwrap();
        assert!(b.holds);
        let t = module_topology(&md).unwrap();
        assert_eq!(t.opens().len(), 16, "singleton translates force discrete");
        let c =
            check_module_condition(&md, ModuleKind::NeighborhoodBasis, Some(&t)).unwrap();
        assert!(c.holds, "failure: {:?}", c.failure);
        let scanned = module_rule_topology(&md).unwrap();
        assert_eq!(t, scanned);
    }

    #[test]
    fn missing_topology_and_carrier_mismatch_are_hard_errors() {
        let md = annihilator_module();
        assert_eq!(
            check_module_condition(&md, ModuleKind::NeighborhoodBasis, None).unwrap_err(),
            ModuleError::MissingTopology
        );
        let other = FiniteTopology::discrete(Carrier::new(["p", "q"]).unwrap());
        assert_eq!(
            check_module_condition(&md, ModuleKind::NeighborhoodBasis, Some(&other))
                .unwrap_err(),
            ModuleError::CarrierMismatch
        );
    }

    #[test]
    fn moreover_clause_holds_for_the_annihilator_module() {
        let md = annihilator_module();
        let report = check_moreover_clause(&md).unwrap();
        assert!(report.closure_holds());
        assert!(report.cartesian_holds());
        let fp = module_fibrous_candidate(&md).unwrap();
        assert_eq!(fp.neighborhood(0, 1), mask(&[1, 3]));
        assert_eq!(fp.neighborhood(1, 1), mask(&[1]));
        assert_eq!(fp.delta(0, 1, 3), Some(1), "alpha is constantly scale 2");
    }

    #[test]
    fn unlawful_scaling_fails_both_moreover_parts() {
        // Z4 scaled by x -> 3x at index 2: the composition law fails, the
        // subset {0,1} is not scaling-closed, and the translate relation
        // breaks the product axiom.
        let monoid = FiniteMonoidData::cyclic(4);
        let magma = UnitaryMagma::capped_nat_mult(2).unwrap();
        let xi = vec![vec![0, 1, 2, 3], vec![0, 3, 2, 1]];
        let md = ModuleData::new(
            monoid,
            magma,
            xi,
            mask(&[0, 1]),
            Some(&[(0, 0), (1, 1)]),
            None,
        )
        .unwrap();
        let action = md.validate_action();
        assert!(!action.passed());
        assert!(action.composition_violations.contains(&(1, 1, 1)));
        assert!(action.unit_violations.is_empty());
        assert!(action.zero_violations.is_empty());
        assert!(action.additivity_violations.is_empty());
        let a = check_module_condition(&md, ModuleKind::ScaledShiftClosure, None).unwrap();
        assert!(a.holds, "failure: {:?}", a.failure);
        let report = check_moreover_clause(&md).unwrap();
        assert_eq!(report.closure_violation, Some((1, 1)), "3*1 = 3 escapes");
        assert!(!report.cartesian_holds());
        assert!(
            !report.axioms.c3_violations.is_empty(),
            "x + S_2 contains x+3, which x + S_1 misses"
        );
    }

    #[test]
    fn failing_subset_fails_both_scale_conditions() {
        // Z4 with the identity action at both scales and subset {0,1}: no
        // scale can keep 1 + S inside S, and 1 has no interior translate.
        let monoid = FiniteMonoidData::cyclic(4);
        let magma = UnitaryMagma::capped_nat_mult(2).unwrap();
        let xi = vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3]];
        let md =
            ModuleData::new(monoid, magma, xi, mask(&[0, 1]), None, None).unwrap();
        let a = check_module_condition(&md, ModuleKind::ScaledShiftClosure, None).unwrap();
        assert_eq!(a.failure, Some(ConditionFailure::NoScaleFor { a: 1 }));
        let b = check_module_condition(&md, ModuleKind::SelfInterior, None).unwrap();
        assert_eq!(b.failure, Some(ConditionFailure::NotInterior { y: 1 }));
        assert!(matches!(
            module_topology(&md).unwrap_err(),
            ModuleError::PreconditionFailed { .. }
        ));
    }

    #[test]
    fn supplied_gamma_is_checked_against_the_topology() {
        let md = annihilator_module();
        let t = module_topology(&md).unwrap();
        // A correct gamma: scale 2 always works because its translates are
        // singletons.
        let mut good = Vec::new();
        for &open in t.opens() {
            for x in open.iter() {
                good.push((open, x, 1));
            }
        }
        let with_good = ModuleData::new(
            md.monoid().clone(),
            md.magma().clone(),
            vec![
                (0..4).map(|x| md.xi(0, x)).collect(),
                (0..4).map(|x| md.xi(1, x)).collect(),
            ],
            md.subset(),
            None,
            Some(&good),
        )
        .unwrap();
        let c = check_module_condition(&with_good, ModuleKind::NeighborhoodBasis, Some(&t))
            .unwrap();
        assert!(c.holds);
        // A wrong gamma: scale 1 translates are cosets, too big for
        // singleton opens.
        let bad: Vec<(Subset, usize, usize)> = good
            .iter()
            .map(|&(open, x, _)| (open, x, 0))
            .collect();
        let with_bad = ModuleData::new(
            md.monoid().clone(),
            md.magma().clone(),
            vec![
                (0..4).map(|x| md.xi(0, x)).collect(),
                (0..4).map(|x| md.xi(1, x)).collect(),
            ],
            md.subset(),
            None,
            Some(&bad),
        )
        .unwrap();
        let c = check_module_condition(&with_bad, ModuleKind::NeighborhoodBasis, Some(&t))
            .unwrap();
        assert_eq!(
            c.failure,
            Some(ConditionFailure::GammaNotWitnessing {
                open: mask(&[0]),
                x: 0
            })
        );
    }

    #[test]
    fn beta_decomposition_fails_for_constant_gamma_over_two_scales() {
        // Discrete structure over two points with singleton translates at
        // every scale, and gamma constantly the unit: the decomposition
        // demands gamma-at-scale-2 = unit * 2 = 2, but gamma returns 1.
        let md = {
            let monoid = FiniteMonoidData::cyclic(2);
            let magma = UnitaryMagma::capped_nat_mult(2).unwrap();
            let xi = vec![vec![0, 1], vec![0, 0]];
            ModuleData::new(monoid, magma, xi, mask(&[0]), None, None).unwrap()
        };
        let fp = module_fibrous_candidate(&md).unwrap();
        let nmap = fp_to_nmap(&fp).unwrap();
        let t = fp.induced_topology().unwrap();
        let mut gamma_entries = Vec::new();
        for (pos, &open) in t.opens().iter().enumerate() {
            for x in open.iter() {
                gamma_entries.push((pos, x, 0));
            }
        }
        let eg = crate::repr::EtaGammaRep::new(
            fp.carrier().clone(),
            fp.magma().clone(),
            t,
            (0..md.magma().len())
                .map(|n| (0..2).map(|x| nmap.n(n, x)).collect())
                .collect(),
            &gamma_entries,
        )
        .unwrap();
        assert!(eg.validate().passed());
        let report = check_beta_decomposition(&eg).unwrap();
        assert!(!report.holds());
        assert_eq!(report.violations[0], (1, 0, 0));
    }

    #[test]
    fn beta_decomposition_holds_for_a_faithful_gamma() {
        // Same structure, but gamma picks the scale honestly: every
        // singleton open can use its own scale. Choosing gamma = 2
        // everywhere satisfies the decomposition because 2 * n saturates
        // at 2.
        let md = {
            let monoid = FiniteMonoidData::cyclic(2);
            let magma = UnitaryMagma::capped_nat_mult(2).unwrap();
            let xi = vec![vec![0, 1], vec![0, 0]];
            ModuleData::new(monoid, magma, xi, mask(&[0]), None, None).unwrap()
        };
        let fp = module_fibrous_candidate(&md).unwrap();
        let nmap = fp_to_nmap(&fp).unwrap();
        let t = fp.induced_topology().unwrap();
        let mut gamma_entries = Vec::new();
        for (pos, &open) in t.opens().iter().enumerate() {
            for x in open.iter() {
                gamma_entries.push((pos, x, 1));
            }
        }
        let eg = crate::repr::EtaGammaRep::new(
            fp.carrier().clone(),
            fp.magma().clone(),
            t,
            (0..md.magma().len())
                .map(|n| (0..2).map(|x| nmap.n(n, x)).collect())
                .collect(),
            &gamma_entries,
        )
        .unwrap();
        assert!(eg.validate().passed());
        let report = check_beta_decomposition(&eg).unwrap();
        assert!(report.holds(), "violations: {:?}", report.violations);
    }
}
