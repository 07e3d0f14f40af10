//! Unitary magmas: finite index sets with a binary operation and two-sided
//! unit. Associativity is never required; it is tracked as a derived flag so
//! callers can tell monoid-like indexes apart from genuinely non-associative
//! ones.
//!
//! Two integer-flavored families are built in: natural numbers from 1 under
//! multiplication capped at `M`, and naturals from 0 under addition capped at
//! `M`. These carry a numeric view of each element, used by constructors that
//! need actual arithmetic (scalar multiples, unit fractions). Arbitrary
//! operation tables and endo-map families cover the rest.

use std::collections::BTreeMap;
use thiserror::Error;

/// Elements beyond this rule out the exhaustive associativity scan.
pub const MAX_TABLE_MAGMA: usize = 256;
/// Caps beyond this are refused outright; ops are computed, not tabled.
pub const MAX_CAPPED: u64 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MagmaError {
    #[error("magma must have at least one element")]
    Empty,
    #[error("duplicate element label '{0}'")]
    DuplicateLabel(String),
    #[error("unknown element label '{0}'")]
    UnknownLabel(String),
    #[error("operation table must be {expected}x{expected}, row {row} has {got} entries")]
    BadTableShape {
        expected: usize,
        row: usize,
        got: usize,
    },
    #[error("table entry at ({row},{col}) is '{entry}', not an element")]
    NotClosed {
        row: String,
        col: String,
        entry: String,
    },
    #[error("unit laws fail at element '{element}'")]
    UnitLawViolation { element: String },
    #[error("cap must be at least {min}")]
    InvalidCap { min: u64 },
    #[error("magma with {0} elements exceeds the supported size")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MagmaKind {
    Table,
    CappedMult { cap: u64 },
    CappedAdd { cap: u64 },
    Endomap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Op {
    Table(Vec<usize>),
    CappedMult { cap: u64 },
    CappedAdd { cap: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitaryMagma {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    unit: usize,
    op: Op,
    kind: MagmaKind,
    associative: bool,
}

impl UnitaryMagma {
    /// Builds a magma from an explicit operation table given as labels;
    /// `table[i][j]` is the label of `element_i * element_j`.
    pub fn from_table(
        labels: Vec<String>,
        unit_label: &str,
        table: Vec<Vec<String>>,
    ) -> Result<Self, MagmaError> {
        let index = build_index(&labels)?;
        if labels.len() > MAX_TABLE_MAGMA {
            return Err(MagmaError::TooLarge(labels.len()));
        }
        let unit = *index
            .get(unit_label)
            .ok_or_else(|| MagmaError::UnknownLabel(unit_label.to_string()))?;
        let n = labels.len();
        if table.len() != n {
            return Err(MagmaError::BadTableShape {
                expected: n,
                row: table.len(),
                got: 0,
            });
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(MagmaError::BadTableShape {
                    expected: n,
                    row: i,
                    got: row.len(),
                });
            }
            for (j, entry) in row.iter().enumerate() {
                let k = *index.get(entry).ok_or_else(|| MagmaError::NotClosed {
                    row: labels[i].clone(),
                    col: labels[j].clone(),
                    entry: entry.clone(),
                })?;
                flat.push(k);
            }
        }
        let m = UnitaryMagma {
            labels,
            index,
            unit,
            op: Op::Table(flat),
            kind: MagmaKind::Table,
            associative: false,
        };
        m.check_unit_laws()?;
        Ok(Self {
            associative: m.scan_associative(),
            ..m
        })
    }

    /// `{1..cap}` under multiplication capped at `cap`.
    pub fn capped_nat_mult(cap: u64) -> Result<Self, MagmaError> {
        if cap < 1 {
            return Err(MagmaError::InvalidCap { min: 1 });
        }
        if cap > MAX_CAPPED {
            return Err(MagmaError::TooLarge(cap as usize));
        }
        let labels: Vec<String> = (1..=cap).map(|v| v.to_string()).collect();
        let index = build_index(&labels)?;
        Ok(UnitaryMagma {
            labels,
            index,
            unit: 0,
            op: Op::CappedMult { cap },
            kind: MagmaKind::CappedMult { cap },
            // min(i*j, cap) is saturating multiplication, which is associative.
            associative: true,
        })
    }

    /// `{0..cap}` under addition capped at `cap`.
    pub fn capped_nat_add(cap: u64) -> Result<Self, MagmaError> {
        if cap > MAX_CAPPED {
            return Err(MagmaError::TooLarge(cap as usize));
        }
        let labels: Vec<String> = (0..=cap).map(|v| v.to_string()).collect();
        let index = build_index(&labels)?;
        Ok(UnitaryMagma {
            labels,
            index,
            unit: 0,
            op: Op::CappedAdd { cap },
            kind: MagmaKind::CappedAdd { cap },
            associative: true,
        })
    }

    /// Builds a magma from a family of endo-maps, one per element:
    /// `maps[m][n]` is the label of `element_m * element_n`. The unit's map
    /// must be the identity and every map must send the unit to its own
    /// index, which together are exactly the two unit laws.
    pub fn from_endomaps(
        labels: Vec<String>,
        unit_label: &str,
        maps: Vec<Vec<String>>,
    ) -> Result<Self, MagmaError> {
        let m = Self::from_table(labels, unit_label, maps)?;
        Ok(UnitaryMagma {
            kind: MagmaKind::Endomap,
            ..m
        })
    }

    fn check_unit_laws(&self) -> Result<(), MagmaError> {
        for i in 0..self.len() {
            if self.op(self.unit, i) != i || self.op(i, self.unit) != i {
                return Err(MagmaError::UnitLawViolation {
                    element: self.labels[i].clone(),
                });
            }
        }
        Ok(())
    }

    fn scan_associative(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                let ab = self.op(a, b);
                for c in 0..n {
                    if self.op(ab, c) != self.op(a, self.op(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn op(&self, i: usize, j: usize) -> usize {
        match &self.op {
            Op::Table(t) => t[i * self.labels.len() + j],
            Op::CappedMult { cap } => {
                let a = (i as u64) + 1;
                let b = (j as u64) + 1;
                (a.saturating_mul(b).min(*cap) - 1) as usize
            }
            Op::CappedAdd { cap } => {
                let a = i as u64;
                let b = j as u64;
                (a.saturating_add(b).min(*cap)) as usize
            }
        }
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

    pub fn kind(&self) -> MagmaKind {
        self.kind
    }

    pub fn is_associative(&self) -> bool {
        self.associative
    }

    /// Numeric view of an element; present only for the capped families.
    pub fn numeric_value(&self, i: usize) -> Option<u64> {
        match self.kind {
            MagmaKind::CappedMult { .. } => Some(i as u64 + 1),
            MagmaKind::CappedAdd { .. } => Some(i as u64),
            _ => None,
        }
    }

    /// Same labels, same unit, same operation; kind and flags not compared.
    pub fn same_structure(&self, other: &UnitaryMagma) -> bool {
        if self.labels != other.labels || self.unit != other.unit {
            return false;
        }
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if self.op(i, j) != other.op(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// The one-element magma; indexes plain preorders.
    pub fn trivial() -> Self {
        UnitaryMagma::from_table(
            vec!["1".to_string()],
            "1",
            vec![vec!["1".to_string()]],
        )
        .expect("one-element table is valid")
    }
}

fn build_index(labels: &[String]) -> Result<BTreeMap<String, usize>, MagmaError> {
    if labels.is_empty() {
        return Err(MagmaError::Empty);
    }
    let mut index = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(MagmaError::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}
