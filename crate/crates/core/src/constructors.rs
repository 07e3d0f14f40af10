//! Constructors that realize classical structures as fibrous preorders:
//! plain preorders, rational pseudometrics, groups with a distinguished
//! subset, and lax Mal'tsev operations with a linking map.
//!
//! Every constructor validates its input's own conditions before building,
//! and every output passes the three fibrous-preorder axioms; the tests
//! assert both.

use crate::carrier::{Carrier, Subset};
use crate::fibrous::{FibrousError, FibrousPreorder};
use crate::magma::{MagmaError, MagmaKind, UnitaryMagma};
use crate::rational::{ceil_to_int, unit_fraction, Rational};
use crate::topology::Preorder;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricError {
    #[error("distance matrix must be {expected}x{expected}, row {row} has {got} entries")]
    BadShape {
        expected: usize,
        row: usize,
        got: usize,
    },
    #[error("negative distance at ({x},{y})")]
    Negative { x: usize, y: usize },
    #[error("nonzero distance on the diagonal at {x}")]
    NonzeroDiagonal { x: usize },
    #[error("asymmetric distances at ({x},{y})")]
    Asymmetric { x: usize, y: usize },
    #[error("triangle inequality fails: d({x},{z}) > d({x},{y}) + d({y},{z})")]
    TriangleViolation { x: usize, y: usize, z: usize },
}

/// A symmetric rational distance with zero diagonal and the triangle
/// inequality. Distinct points at distance zero are allowed — on a finite
/// carrier a genuine metric only ever induces the discrete topology, so the
/// interesting instances are pseudometrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPseudometric {
    carrier: Carrier,
    d: Vec<Rational>,
}

impl RationalPseudometric {
    pub fn new(carrier: Carrier, rows: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let n = carrier.len();
        if rows.len() != n {
            return Err(MetricError::BadShape {
                expected: n,
                row: rows.len(),
                got: 0,
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::BadShape {
                    expected: n,
                    row: i,
                    got: row.len(),
                });
            }
        }
        for x in 0..n {
            for y in 0..n {
                if rows[x][y].is_negative() {
                    return Err(MetricError::Negative { x, y });
                }
                if x == y && !rows[x][y].is_zero() {
                    return Err(MetricError::NonzeroDiagonal { x });
                }
                if rows[x][y] != rows[y][x] {
                    return Err(MetricError::Asymmetric { x, y });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if rows[x][z] > &rows[x][y] + &rows[y][z] {
                        return Err(MetricError::TriangleViolation { x, y, z });
                    }
                }
            }
        }
        let d = rows.into_iter().flatten().collect();
        Ok(RationalPseudometric { carrier, d })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn d(&self, x: usize, y: usize) -> &Rational {
        &self.d[x * self.carrier.len() + y]
    }

    /// The open ball `{y : d(x,y) < radius}`.
    pub fn ball(&self, x: usize, radius: &Rational) -> Subset {
        Subset::from_indices((0..self.carrier.len()).filter(|&y| self.d(x, y) < radius))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group must have at least one element")]
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
    #[error("element {x} has no two-sided inverse")]
    NoInverse { x: usize },
}

/// A finite group given by its addition table. The inverse of each element
/// is derived from the table (it is unique once the axioms hold), and all
/// group axioms are verified exhaustively at construction. Commutativity is
/// deliberately not required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupData {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    add: Vec<usize>,
    zero: usize,
    neg: Vec<usize>,
}

impl FiniteGroupData {
    pub fn new(
        labels: Vec<String>,
        zero_label: &str,
        add_rows: Vec<Vec<String>>,
    ) -> Result<Self, GroupError> {
        if labels.is_empty() {
            return Err(GroupError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GroupError::DuplicateLabel(l.clone()));
            }
        }
        let zero = *index
            .get(zero_label)
            .ok_or_else(|| GroupError::UnknownLabel(zero_label.to_string()))?;
        let n = labels.len();
        if add_rows.len() != n {
            return Err(GroupError::BadShape {
                expected: n,
                row: add_rows.len(),
                got: 0,
            });
        }
        let mut add = Vec::with_capacity(n * n);
        for (i, row) in add_rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::BadShape {
                    expected: n,
                    row: i,
                    got: row.len(),
                });
            }
            for entry in row {
                let k = *index
                    .get(entry)
                    .ok_or_else(|| GroupError::UnknownLabel(entry.clone()))?;
                add.push(k);
            }
        }
        for x in 0..n {
            if add[zero * n + x] != x || add[x * n + zero] != x {
                return Err(GroupError::ZeroLawFailed { x });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = add[a * n + b];
                for c in 0..n {
                    if add[ab * n + c] != add[a * n + add[b * n + c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let mut neg = vec![usize::MAX; n];
        for x in 0..n {
            match (0..n).find(|&y| add[x * n + y] == zero && add[y * n + x] == zero) {
                Some(y) => neg[x] = y,
                None => return Err(GroupError::NoInverse { x }),
            }
        }
        Ok(FiniteGroupData {
            labels,
            index,
            add,
            zero,
            neg,
        })
    }

    /// The cyclic group of order `n` with elements labeled `"0".."n-1"`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let labels: Vec<String> = (0..n).map(|v| v.to_string()).collect();
        let rows: Vec<Vec<String>> = (0..n)
            .map(|a| (0..n).map(|b| ((a + b) % n).to_string()).collect())
            .collect();
        FiniteGroupData::new(labels, "0", rows).expect("modular addition is a group")
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

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    /// `a - b`, that is `a + (-b)`.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
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
}

/// The three conditions a distinguished subset must satisfy for the
/// group-with-subset construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetCondition {
    /// (i) the zero element belongs to the subset.
    ContainsZero,
    /// (ii) for `x` in the subset: if `alpha(x) * u` is in the subset then so
    /// is `u + x`.
    ShiftClosure,
    /// (iii) if `n * u` is in the subset then so is `u`.
    ScaleCancellation,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructorError {
    #[error("this construction requires a saturating-multiplication index magma")]
    WrongMagmaKind,
    #[error("no index up to the cap works at scale {index} between points {base} and {target}; increase the cap to at least {required}")]
    CapTooSmall {
        index: u64,
        base: usize,
        target: usize,
        required: BigInt,
    },
    #[error("alpha is missing a value for subset element {element}")]
    MissingAlpha { element: usize },
    #[error("alpha defined at {element}, which is not in the subset")]
    AlphaOffSubset { element: usize },
    #[error("alpha has conflicting values for element {element}")]
    DuplicateAlpha { element: usize },
    #[error("index {value} out of range for {role} of size {size}")]
    IndexOutOfRange {
        role: &'static str,
        value: usize,
        size: usize,
    },
    #[error("subset condition {condition:?} fails at witness {witness:?}")]
    ConditionFailed {
        condition: SubsetCondition,
        witness: Vec<usize>,
    },
    #[error("value relation is not transitive: {a} <= {b} and {b} <= {c} but not {a} <= {c}")]
    NotTransitive { a: usize, b: usize, c: usize },
    #[error("lax operation axiom {axiom} fails at witness {witness:?}")]
    LaxAxiomFailed { axiom: u8, witness: [usize; 4] },
    #[error("linking condition fails at indexes ({n},{k},{m})")]
    LinkingFailed { n: usize, k: usize, m: usize },
    #[error("offset table axiom fails ({reason}) at ({x},{y},{z})")]
    DeltaAxiomFailed {
        reason: &'static str,
        x: usize,
        y: usize,
        z: usize,
    },
    #[error("subadditivity fails at elements ({u},{v})")]
    SubadditivityFailed { u: usize, v: usize },
    #[error("the weight of the zero element must be 0, got {value}")]
    ZeroWeightViolation { value: i64 },
    #[error("window [{lo},{hi}] is invalid or too large")]
    BadWindow { lo: i64, hi: i64 },
    #[error("value {value} lies outside the window")]
    ValueOutsideWindow { value: i64 },
    #[error("malformed {what}")]
    BadShape { what: &'static str },
    #[error(transparent)]
    Fibrous(#[from] FibrousError),
    #[error(transparent)]
    Magma(#[from] MagmaError),
}

/// Realizes a plain preorder over the one-element index magma: the single
/// relation is the preorder itself and the successor map is constant.
pub fn from_preorder(p: &Preorder) -> FibrousPreorder {
    FibrousPreorder::from_fn(
        p.carrier().clone(),
        UnitaryMagma::trivial(),
        |_, x, y| p.le(x, y),
        |_, _, _| 0,
    )
    .expect("carrier is bounded and the single index is the unit")
}

/// Realizes a rational pseudometric over the saturating-multiplication magma
/// `{1..cap}`: `x <=[n] y` iff `d(x,y) < 1/n`, and the successor at
/// `(n,x,y)` is the smallest `k` with `1/k <= 1/n - d(x,y)`. When no `k` up
/// to the cap satisfies that, the error reports the minimal sufficient cap.
pub fn from_pseudometric(
    m: &RationalPseudometric,
    cap: u64,
) -> Result<FibrousPreorder, ConstructorError> {
    let magma = UnitaryMagma::capped_nat_mult(cap)?;
    let n_points = m.carrier().len();
    let mut triples = Vec::new();
    let mut deltas = Vec::new();
    for idx in magma.indices() {
        let scale = idx as u64 + 1;
        let radius = unit_fraction(scale);
        for x in 0..n_points {
            for y in 0..n_points {
                if m.d(x, y) < &radius {
                    // Smallest k with 1/k <= 1/n - d is ceil of the margin's
                    // reciprocal; the margin is positive on related pairs.
                    let margin = &radius - m.d(x, y);
                    let required = ceil_to_int(&(Rational::one() / margin));
                    if required > BigInt::from(cap) {
                        return Err(ConstructorError::CapTooSmall {
                            index: scale,
                            base: x,
                            target: y,
                            required,
                        });
                    }
                    let k_numeric: u64 = required.try_into().expect("bounded by cap");
                    triples.push((idx, x, y));
                    deltas.push((idx, x, y, (k_numeric - 1) as usize));
                }
            }
        }
    }
    Ok(FibrousPreorder::new(
        m.carrier().clone(),
        magma,
        &triples,
        &deltas,
    )?)
}

/// Realizes a group with a distinguished subset `b` over a
/// saturating-multiplication magma: `x <=[n] y` iff `n(y-x)` is in `b`, with
/// successor `alpha(n(y-x)) * n`. The subset must satisfy the three
/// [`SubsetCondition`]s, checked exhaustively with the scale `n` ranging
/// over the magma's numeric elements.
pub fn from_group_subset(
    group: &FiniteGroupData,
    b: Subset,
    alpha: &[(usize, usize)],
    magma: &UnitaryMagma,
) -> Result<FibrousPreorder, ConstructorError> {
    if !matches!(magma.kind(), MagmaKind::CappedMult { .. }) {
        return Err(ConstructorError::WrongMagmaKind);
    }
    let n_points = group.len();
    if let Some(bit) = b.iter().find(|&v| v >= n_points) {
        return Err(ConstructorError::IndexOutOfRange {
            role: "group",
            value: bit,
            size: n_points,
        });
    }
    let mut alpha_map = vec![None; n_points];
    for &(element, index) in alpha {
        if element >= n_points {
            return Err(ConstructorError::IndexOutOfRange {
                role: "group",
                value: element,
                size: n_points,
            });
        }
        if index >= magma.len() {
            return Err(ConstructorError::IndexOutOfRange {
                role: "index set",
                value: index,
                size: magma.len(),
            });
        }
        if !b.contains(element) {
            return Err(ConstructorError::AlphaOffSubset { element });
        }
        if let Some(old) = alpha_map[element] {
            if old != index {
                return Err(ConstructorError::DuplicateAlpha { element });
            }
        }
        alpha_map[element] = Some(index);
    }
    for x in b.iter() {
        if alpha_map[x].is_none() {
            return Err(ConstructorError::MissingAlpha { element: x });
        }
    }

    if !b.contains(group.zero()) {
        return Err(ConstructorError::ConditionFailed {
            condition: SubsetCondition::ContainsZero,
            witness: vec![group.zero()],
        });
    }
    for idx in magma.indices() {
        let n = magma.numeric_value(idx).expect("checked kind");
        for u in 0..n_points {
            if b.contains(group.scalar(n, u)) && !b.contains(u) {
                return Err(ConstructorError::ConditionFailed {
                    condition: SubsetCondition::ScaleCancellation,
                    witness: vec![idx, u],
                });
            }
        }
    }
    for x in b.iter() {
        let ax = magma
            .numeric_value(alpha_map[x].expect("covered above"))
            .expect("saturating-multiplication magma");
        for u in 0..n_points {
            if b.contains(group.scalar(ax, u)) && !b.contains(group.add(u, x)) {
                return Err(ConstructorError::ConditionFailed {
                    condition: SubsetCondition::ShiftClosure,
                    witness: vec![x, u],
                });
            }
        }
    }

    let fp = FibrousPreorder::from_fn(
        Carrier::new(group.labels().iter().cloned())
            .expect("group labels are nonempty and distinct"),
        magma.clone(),
        |idx, x, y| {
            let n = magma.numeric_value(idx).expect("checked kind");
            b.contains(group.scalar(n, group.sub(y, x)))
        },
        |idx, x, y| {
            let n = magma.numeric_value(idx).expect("checked kind");
            let scaled = group.scalar(n, group.sub(y, x));
            magma.op(alpha_map[scaled].expect("scaled difference is in b"), idx)
        },
    )?;
    Ok(fp)
}

/// A ternary operation on an integer window `[lo, hi]`, built by subtracting
/// a point-pair weight from the first argument with saturation at the window
/// ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaltsevOperation {
    lo: i64,
    hi: i64,
    carrier: Carrier,
    /// `p[(a - lo) * n^2 + x * n + y]` as a window value.
    p: Vec<i64>,
}

impl MaltsevOperation {
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn p(&self, a: i64, x: usize, y: usize) -> i64 {
        assert!(a >= self.lo && a <= self.hi, "first argument in window");
        let n = self.carrier.len();
        self.p[((a - self.lo) as usize) * n * n + x * n + y]
    }
}

const MAX_WINDOW: i64 = 64;

fn check_window(lo: i64, hi: i64) -> Result<usize, ConstructorError> {
    if lo > hi || hi - lo + 1 > MAX_WINDOW {
        return Err(ConstructorError::BadWindow { lo, hi });
    }
    Ok((hi - lo + 1) as usize)
}

/// Verifies the three lax operation axioms for a window-valued table under
/// the usual integer order: the first argument is a lower bound for
/// `p(a,x,x)`, composing along a middle point never overtakes the direct
/// value, and `p` is monotone in its first argument.
fn check_lax_axioms_on_window(op: &MaltsevOperation) -> Result<(), ConstructorError> {
    let (lo, hi) = op.window();
    let n = op.carrier.len();
    for a in lo..=hi {
        for x in 0..n {
            if !(a <= op.p(a, x, x)) {
                return Err(ConstructorError::LaxAxiomFailed {
                    axiom: 1,
                    witness: [(a - lo) as usize, x, x, x],
                });
            }
        }
    }
    for a in lo..=hi {
        for x in 0..n {
            for y in 0..n {
                let axy = op.p(a, x, y);
                for z in 0..n {
                    if !(op.p(axy, y, z) <= op.p(a, x, z)) {
                        return Err(ConstructorError::LaxAxiomFailed {
                            axiom: 2,
                            witness: [(a - lo) as usize, x, y, z],
                        });
                    }
                }
            }
        }
    }
    for a in lo..=hi {
        for b in a..=hi {
            for x in 0..n {
                for y in 0..n {
                    if !(op.p(a, x, y) <= op.p(b, x, y)) {
                        return Err(ConstructorError::LaxAxiomFailed {
                            axiom: 3,
                            witness: [(a - lo) as usize, (b - lo) as usize, x, y],
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Builds `p(a,x,y) = a - delta(x,y)` (saturated to the window) from a
/// point-pair offset table with zero diagonal and the triangle inequality.
/// The lax axioms are re-verified exhaustively afterwards because saturation
/// — or a negative offset — can break them.
pub fn maltsev_from_delta(
    carrier: Carrier,
    delta: Vec<Vec<i64>>,
    lo: i64,
    hi: i64,
) -> Result<MaltsevOperation, ConstructorError> {
    let window = check_window(lo, hi)?;
    let n = carrier.len();
    if delta.len() != n || delta.iter().any(|r| r.len() != n) {
        return Err(ConstructorError::BadShape {
            what: "offset table",
        });
    }
    for x in 0..n {
        if delta[x][x] != 0 {
            return Err(ConstructorError::DeltaAxiomFailed {
                reason: "nonzero diagonal",
                x,
                y: x,
                z: x,
            });
        }
        for y in 0..n {
            for z in 0..n {
                if delta[x][y] + delta[y][z] < delta[x][z] {
                    return Err(ConstructorError::DeltaAxiomFailed {
                        reason: "triangle inequality",
                        x,
                        y,
                        z,
                    });
                }
            }
        }
    }
    let mut p = Vec::with_capacity(window * n * n);
    for a in lo..=hi {
        for x in 0..n {
            for y in 0..n {
                p.push((a - delta[x][y]).clamp(lo, hi));
            }
        }
    }
    let op = MaltsevOperation { lo, hi, carrier, p };
    check_lax_axioms_on_window(&op)?;
    Ok(op)
}

/// Builds `p(a,x,y) = a - t(y - x)` (saturated to the window) from a
/// subadditive weight on a group: `t(0) = 0` and `t(u) + t(v) >= t(u + v)`.
/// The lax axioms are re-verified exhaustively after saturation.
pub fn maltsev_from_subadditive(
    group: &FiniteGroupData,
    t: &[i64],
    lo: i64,
    hi: i64,
) -> Result<MaltsevOperation, ConstructorError> {
    let window = check_window(lo, hi)?;
    let n = group.len();
    if t.len() != n {
        return Err(ConstructorError::BadShape {
            what: "weight table",
        });
    }
    if t[group.zero()] != 0 {
        return Err(ConstructorError::ZeroWeightViolation {
            value: t[group.zero()],
        });
    }
    for u in 0..n {
        for v in 0..n {
            if t[u] + t[v] < t[group.add(u, v)] {
                return Err(ConstructorError::SubadditivityFailed { u, v });
            }
        }
    }
    let carrier =
        Carrier::new(group.labels().iter().cloned()).expect("group labels are valid");
    let mut p = Vec::with_capacity(window * n * n);
    for a in lo..=hi {
        for x in 0..n {
            for y in 0..n {
                p.push((a - t[group.sub(y, x)]).clamp(lo, hi));
            }
        }
    }
    let op = MaltsevOperation { lo, hi, carrier, p };
    check_lax_axioms_on_window(&op)?;
    Ok(op)
}

/// Which linking condition [`LaxMaltsevData::check_linking`] scans for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinkingVariant {
    /// `g(n * (k * m)) <= g(n * m)` for all `n, k, m` — the condition the
    /// construction relies on.
    #[default]
    Nested,
    /// `g(n * m) <= g(n)` and `g(n * m) <= g(m)` — implied by the nested
    /// form via the unit; selectable for inspection, equivalence not
    /// asserted.
    Factorwise,
}

/// A lax ternary operation over a transitively ordered value set, together
/// with a linking map from the index magma into the values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaxMaltsevData {
    e_labels: Vec<String>,
    /// `e_le[a]` = all `b` with `a <= b`; only transitivity is required.
    e_le: Vec<Subset>,
    carrier: Carrier,
    /// `p[a * n^2 + x * n + y]` as a value index.
    p: Vec<usize>,
    magma: UnitaryMagma,
    /// `g[i]` = value index assigned to magma element `i`.
    g: Vec<usize>,
}

impl LaxMaltsevData {
    pub fn new(
        e_labels: Vec<String>,
        e_le_pairs: &[(usize, usize)],
        carrier: Carrier,
        p_table: Vec<Vec<Vec<usize>>>,
        magma: UnitaryMagma,
        g: Vec<usize>,
    ) -> Result<Self, ConstructorError> {
        let e = e_labels.len();
        if e == 0 || e > 64 {
            return Err(ConstructorError::BadShape { what: "value set" });
        }
        let mut e_le = vec![Subset::EMPTY; e];
        for &(a, b) in e_le_pairs {
            if a >= e || b >= e {
                return Err(ConstructorError::IndexOutOfRange {
                    role: "value set",
                    value: a.max(b),
                    size: e,
                });
            }
            e_le[a] = e_le[a].with(b);
        }
        let n = carrier.len();
        if p_table.len() != e
            || p_table.iter().any(|m| m.len() != n)
            || p_table.iter().flatten().any(|r| r.len() != n)
        {
            return Err(ConstructorError::BadShape {
                what: "operation table",
            });
        }
        let mut p = Vec::with_capacity(e * n * n);
        for plane in &p_table {
            for row in plane {
                for &v in row {
                    if v >= e {
                        return Err(ConstructorError::IndexOutOfRange {
                            role: "value set",
                            value: v,
                            size: e,
                        });
                    }
                    p.push(v);
                }
            }
        }
        if g.len() != magma.len() {
            return Err(ConstructorError::BadShape { what: "linking map" });
        }
        for &v in &g {
            if v >= e {
                return Err(ConstructorError::IndexOutOfRange {
                    role: "value set",
                    value: v,
                    size: e,
                });
            }
        }
        Ok(LaxMaltsevData {
            e_labels,
            e_le,
            carrier,
            p,
            magma,
            g,
        })
    }

    /// Wraps a window-valued operation: the value set is the window under
    /// the usual integer order, and the linking map sends each magma element
    /// to the given window value.
    pub fn from_operation(
        op: &MaltsevOperation,
        magma: UnitaryMagma,
        g_values: &[i64],
    ) -> Result<Self, ConstructorError> {
        let (lo, hi) = op.window();
        let size = (hi - lo + 1) as usize;
        let e_labels: Vec<String> = (lo..=hi).map(|v| v.to_string()).collect();
        let mut e_le = vec![Subset::EMPTY; size];
        for (a, slot) in e_le.iter_mut().enumerate() {
            *slot = Subset::from_indices(a..size);
        }
        let n = op.carrier().len();
        let mut p = Vec::with_capacity(size * n * n);
        for a in lo..=hi {
            for x in 0..n {
                for y in 0..n {
                    p.push((op.p(a, x, y) - lo) as usize);
                }
            }
        }
        if g_values.len() != magma.len() {
            return Err(ConstructorError::BadShape { what: "linking map" });
        }
        let g = g_values
            .iter()
            .map(|&v| {
                if v < lo || v > hi {
                    Err(ConstructorError::ValueOutsideWindow { value: v })
                } else {
                    Ok((v - lo) as usize)
                }
            })
            .collect::<Result<Vec<usize>, _>>()?;
        Ok(LaxMaltsevData {
            e_labels,
            e_le,
            carrier: op.carrier().clone(),
            p,
            magma,
            g,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn magma(&self) -> &UnitaryMagma {
        &self.magma
    }

    pub fn value_labels(&self) -> &[String] {
        &self.e_labels
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.e_le[a].contains(b)
    }

    pub fn p(&self, a: usize, x: usize, y: usize) -> usize {
        let n = self.carrier.len();
        self.p[a * n * n + x * n + y]
    }

    pub fn g(&self, i: usize) -> usize {
        self.g[i]
    }

    /// Checks transitivity of the value order, the three lax axioms, and the
    /// nested linking condition; first failure wins.
    pub fn validate(&self) -> Result<(), ConstructorError> {
        let e = self.e_labels.len();
        for a in 0..e {
            for b in self.e_le[a].iter() {
                if !self.e_le[b].is_subset_of(self.e_le[a]) {
                    let c = self.e_le[b]
                        .iter()
                        .find(|&c| !self.e_le[a].contains(c))
                        .expect("subset check failed");
                    return Err(ConstructorError::NotTransitive { a, b, c });
                }
            }
        }
        let n = self.carrier.len();
        for a in 0..e {
            for x in 0..n {
                if !self.le(a, self.p(a, x, x)) {
                    return Err(ConstructorError::LaxAxiomFailed {
                        axiom: 1,
                        witness: [a, x, x, x],
                    });
                }
            }
        }
        for a in 0..e {
            for x in 0..n {
                for y in 0..n {
                    let axy = self.p(a, x, y);
                    for z in 0..n {
                        if !self.le(self.p(axy, y, z), self.p(a, x, z)) {
                            return Err(ConstructorError::LaxAxiomFailed {
                                axiom: 2,
                                witness: [a, x, y, z],
                            });
                        }
                    }
                }
            }
        }
        for a in 0..e {
            for b in self.e_le[a].iter() {
                for x in 0..n {
                    for y in 0..n {
                        if !self.le(self.p(a, x, y), self.p(b, x, y)) {
                            return Err(ConstructorError::LaxAxiomFailed {
                                axiom: 3,
                                witness: [a, b, x, y],
                            });
                        }
                    }
                }
            }
        }
        if let Some((n_, k, m)) = self.check_linking(LinkingVariant::Nested).first().copied() {
            return Err(ConstructorError::LinkingFailed { n: n_, k, m });
        }
        Ok(())
    }

    /// All `(n, k, m)` violating the selected linking condition. For the
    /// factorwise variant the third component reports which factor escaped:
    /// `(n, m, 0)` for the left factor, `(n, m, 1)` for the right.
    pub fn check_linking(&self, variant: LinkingVariant) -> Vec<(usize, usize, usize)> {
        let k_count = self.magma.len();
        let mut out = Vec::new();
        match variant {
            LinkingVariant::Nested => {
                for n in 0..k_count {
                    for k in 0..k_count {
                        for m in 0..k_count {
                            let lhs = self.g[self.magma.op(n, self.magma.op(k, m))];
                            let rhs = self.g[self.magma.op(n, m)];
                            if !self.le(lhs, rhs) {
                                out.push((n, k, m));
                            }
                        }
                    }
                }
            }
            LinkingVariant::Factorwise => {
                for n in 0..k_count {
                    for m in 0..k_count {
                        let nm = self.g[self.magma.op(n, m)];
                        if !self.le(nm, self.g[n]) {
                            out.push((n, m, 0));
                        }
                        if !self.le(nm, self.g[m]) {
                            out.push((n, m, 1));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Realizes a validated lax operation with linking map as a fibrous
/// preorder: `x <=[n] y` iff some `m` has `g(m) <= p(g(n), x, y)`, with the
/// successor the first such `m` in magma element order.
pub fn from_lax_maltsev(data: &LaxMaltsevData) -> Result<FibrousPreorder, ConstructorError> {
    data.validate()?;
    let k = data.magma.len();
    let witness = |n: usize, x: usize, y: usize| -> Option<usize> {
        let target = data.p(data.g(n), x, y);
        (0..k).find(|&m| data.le(data.g(m), target))
    };
    let fp = FibrousPreorder::from_fn(
        data.carrier.clone(),
        data.magma.clone(),
        |n, x, y| witness(n, x, y).is_some(),
        |n, x, y| witness(n, x, y).expect("relation membership implies a witness"),
    )?;
    Ok(fp)
}
