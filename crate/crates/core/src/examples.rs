//! Worked instances over concrete carriers: rational interval sets with the
//! half-open-interval openness test, scale assignments on the unit interval,
//! scaled subsets of a natural-number-indexed monoid, and a function-space
//! membership test driven by an endomorphism.

use crate::carrier::Subset;
use crate::imodule::FiniteMonoidData;
use crate::rational::{half_pow, Rational};
use num::{One, Signed};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExampleError {
    #[error("interval bounds are reversed: {lower} > {upper}")]
    ReversedBounds { lower: Rational, upper: Rational },
    #[error("a one-point interval needs both endpoints closed, got one open at {point}")]
    DegenerateOpen { point: Rational },
    #[error("value {value} lies outside [0, 1)")]
    OutOfDomain { value: Rational },
    #[error("scale condition {condition:?} fails at witness {witness:?}")]
    ConditionFailed {
        condition: NatCondition,
        witness: Vec<usize>,
    },
    #[error("alpha is missing a value for subset element {element}")]
    MissingAlpha { element: usize },
    #[error("alpha defined at {element}, which is not in the subset")]
    AlphaOffSubset { element: usize },
    #[error("alpha has conflicting values for element {element}")]
    DuplicateAlpha { element: usize },
    #[error("alpha value {value} is not in 1..={cap}")]
    AlphaOutOfRange { value: u64, cap: u64 },
    #[error("index {value} out of range for {role} of size {size}")]
    IndexOutOfRange {
        role: &'static str,
        value: usize,
        size: usize,
    },
    #[error("map is not an endomorphism ({reason}) at ({x},{y})")]
    NotEndomorphism {
        reason: &'static str,
        x: usize,
        y: usize,
    },
    #[error("the base subset must contain zero")]
    ZeroNotInP,
    #[error("malformed {what}")]
    BadShape { what: &'static str },
}

/// A nonempty rational interval; a one-point interval must be closed on
/// both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    lower: Rational,
    upper: Rational,
    lower_closed: bool,
    upper_closed: bool,
}

impl RationalInterval {
    pub fn new(
        lower: Rational,
        upper: Rational,
        lower_closed: bool,
        upper_closed: bool,
    ) -> Result<Self, ExampleError> {
        if lower > upper {
            return Err(ExampleError::ReversedBounds { lower, upper });
        }
        if lower == upper && !(lower_closed && upper_closed) {
            return Err(ExampleError::DegenerateOpen { point: lower });
        }
        Ok(RationalInterval {
            lower,
            upper,
            lower_closed,
            upper_closed,
        })
    }

    pub fn point(value: Rational) -> Self {
        RationalInterval::new(value.clone(), value, true, true).expect("points are valid")
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    pub fn lower_closed(&self) -> bool {
        self.lower_closed
    }

    pub fn upper_closed(&self) -> bool {
        self.upper_closed
    }

    pub fn contains(&self, q: &Rational) -> bool {
        let above = q > &self.lower || (q == &self.lower && self.lower_closed);
        let below = q < &self.upper || (q == &self.upper && self.upper_closed);
        above && below
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lower == self.upper {
            return write!(f, "{{{}}}", self.lower);
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lower_closed { '[' } else { '(' },
            self.lower,
            self.upper,
            if self.upper_closed { ']' } else { ')' },
        )
    }
}

/// A finite union of rational intervals kept in canonical form: components
/// are sorted, pairwise disjoint, and non-adjacent. Two builds of the same
/// point set compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    components: Vec<RationalInterval>,
}

impl IntervalSet {
    pub fn new(mut intervals: Vec<RationalInterval>) -> Self {
        intervals.sort_by(|a, b| {
            a.lower
                .cmp(&b.lower)
                .then_with(|| b.lower_closed.cmp(&a.lower_closed))
        });
        let mut components: Vec<RationalInterval> = Vec::new();
        for next in intervals {
            match components.last_mut() {
                None => components.push(next),
                Some(cur) => {
                    let overlaps = next.lower < cur.upper
                        || (next.lower == cur.upper
                            && (cur.upper_closed || next.lower_closed));
                    if !overlaps {
                        components.push(next);
                        continue;
                    }
                    if next.upper > cur.upper {
                        cur.upper = next.upper;
                        cur.upper_closed = next.upper_closed;
                    } else if next.upper == cur.upper {
                        cur.upper_closed = cur.upper_closed || next.upper_closed;
                    }
                }
            }
        }
        IntervalSet { components }
    }

    pub fn components(&self) -> &[RationalInterval] {
        &self.components
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.components.iter().any(|c| c.contains(q))
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " u ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Verdict of the half-open-interval openness test, with the offending
/// point when negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SorgenfreyVerdict {
    pub open: bool,
    pub witness: Option<Rational>,
}

/// Decides openness in the topology generated by half-open intervals
/// `[x, x + eps)`: a set is open iff every point has such an interval
/// inside the set. On a canonical interval set this reduces to endpoint
/// analysis — a component violates exactly when its upper end is closed
/// (one-point components included), since that point has no room to the
/// right, while every other point does.
pub fn sorgenfrey_is_open(s: &IntervalSet) -> SorgenfreyVerdict {
    for c in s.components() {
        if c.upper_closed() {
            return SorgenfreyVerdict {
                open: false,
                witness: Some(c.upper().clone()),
            };
        }
    }
    SorgenfreyVerdict {
        open: true,
        witness: None,
    }
}

fn check_unit_domain(a: &Rational) -> Result<(), ExampleError> {
    if a.is_negative() || a >= &Rational::one() {
        return Err(ExampleError::OutOfDomain { value: a.clone() });
    }
    Ok(())
}

/// The smallest `n >= 0` with `a + 2^-n <= 1`, for `a` in `[0, 1)`.
pub fn semiring_alpha(a: &Rational) -> Result<u32, ExampleError> {
    check_unit_domain(a)?;
    let mut n = 0u32;
    loop {
        if a + half_pow(n) <= Rational::one() {
            return Ok(n);
        }
        n += 1;
    }
}

/// The smallest `n >= 0` with `e + 2^-n < 1` (strictly), for `e` in
/// `[0, 1)`.
pub fn sqrt_example_alpha(e: &Rational) -> Result<u32, ExampleError> {
    check_unit_domain(e)?;
    let mut n = 0u32;
    loop {
        if e + half_pow(n) < Rational::one() {
            return Ok(n);
        }
        n += 1;
    }
}

/// The three conditions on a scaled subset of a monoid indexed by the
/// natural numbers `1..=cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NatCondition {
    /// (i) zero belongs to the subset.
    ZeroMembership,
    /// (ii) `a + alpha(a) * a'` stays in the subset for `a, a'` in it.
    ScaledShift,
    /// (iii) `n * a` stays in the subset for every scale `n` and `a` in it.
    ScaleClosure,
}

/// A monoid subset that passed [`nat_monoid_check`], exposing the
/// neighborhoods `N(n, x) = {x + n * a}` it generates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatMonoidSystem {
    monoid: FiniteMonoidData,
    s: Subset,
    cap: u64,
}

impl NatMonoidSystem {
    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn subset(&self) -> Subset {
        self.s
    }

    /// `N(n, x) = {x + n*a : a in the subset}` for `n` in `1..=cap`.
    pub fn neighborhood(&self, n: u64, x: usize) -> Subset {
        assert!(n >= 1 && n <= self.cap, "scale in 1..=cap");
        Subset::from_indices(
            self.s
                .iter()
                .map(|a| self.monoid.add(x, self.monoid.scalar(n, a))),
        )
    }
}

/// Checks the three [`NatCondition`]s for a subset of a monoid with a scale
/// map `alpha` into `1..=cap`, exhaustively.
pub fn nat_monoid_check(
    monoid: &FiniteMonoidData,
    s: Subset,
    alpha: &[(usize, u64)],
    cap: u64,
) -> Result<NatMonoidSystem, ExampleError> {
    let x_count = monoid.len();
    if let Some(bit) = s.iter().find(|&v| v >= x_count) {
        return Err(ExampleError::IndexOutOfRange {
            role: "monoid",
            value: bit,
            size: x_count,
        });
    }
    let mut alpha_map = vec![None; x_count];
    for &(element, value) in alpha {
        if element >= x_count {
            return Err(ExampleError::IndexOutOfRange {
                role: "monoid",
                value: element,
                size: x_count,
            });
        }
        if !s.contains(element) {
            return Err(ExampleError::AlphaOffSubset { element });
        }
        if value < 1 || value > cap {
            return Err(ExampleError::AlphaOutOfRange { value, cap });
        }
        if let Some(old) = alpha_map[element] {
            if old != value {
                return Err(ExampleError::DuplicateAlpha { element });
            }
        }
        alpha_map[element] = Some(value);
    }
    for a in s.iter() {
        if alpha_map[a].is_none() {
            return Err(ExampleError::MissingAlpha { element: a });
        }
    }
    if !s.contains(monoid.zero()) {
        return Err(ExampleError::ConditionFailed {
            condition: NatCondition::ZeroMembership,
            witness: vec![monoid.zero()],
        });
    }
    for a in s.iter() {
        let scale = alpha_map[a].expect("alpha covers the subset");
        for a2 in s.iter() {
            if !s.contains(monoid.add(a, monoid.scalar(scale, a2))) {
                return Err(ExampleError::ConditionFailed {
                    condition: NatCondition::ScaledShift,
                    witness: vec![a, a2],
                });
            }
        }
    }
    for n in 1..=cap {
        for a in s.iter() {
            if !s.contains(monoid.scalar(n, a)) {
                return Err(ExampleError::ConditionFailed {
                    condition: NatCondition::ScaleClosure,
                    witness: vec![n as usize, a],
                });
            }
        }
    }
    Ok(NatMonoidSystem {
        monoid: monoid.clone(),
        s,
        cap,
    })
}

/// Default iteration bound for [`function_space_alpha`].
pub const FUNCTION_SPACE_DEFAULT_BOUND: usize = 64;

/// Whether the membership scan found a witness scale within the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionMembership {
    /// The smallest `n` such that `f(x) + t^n(y)` stays in the subset for
    /// all `x` and all `y` in the subset.
    Member { alpha: usize },
    /// No `n` up to the bound worked — inconclusive, not a refutation.
    Inconclusive { bound: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSpaceOutcome {
    pub membership: FunctionMembership,
    /// Whether `t` maps the subset into itself — a sufficient condition for
    /// composing with `t` to preserve membership.
    pub t_preserves_p: bool,
}

/// Scans for the smallest `n <= n_max` with `f(x) + t^n(y)` in `p` for all
/// `x` and all `y` in `p`, where `t` must be a monoid endomorphism and `p`
/// must contain zero. `f` is an arbitrary self-map of the carrier.
pub fn function_space_alpha(
    monoid: &FiniteMonoidData,
    t: &[usize],
    p: Subset,
    f: &[usize],
    n_max: usize,
) -> Result<FunctionSpaceOutcome, ExampleError> {
    let x_count = monoid.len();
    if t.len() != x_count {
        return Err(ExampleError::BadShape {
            what: "endomorphism table",
        });
    }
    if f.len() != x_count {
        return Err(ExampleError::BadShape {
            what: "function table",
        });
    }
    for &v in t.iter().chain(f.iter()) {
        if v >= x_count {
            return Err(ExampleError::IndexOutOfRange {
                role: "monoid",
                value: v,
                size: x_count,
            });
        }
    }
    if let Some(bit) = p.iter().find(|&v| v >= x_count) {
        return Err(ExampleError::IndexOutOfRange {
            role: "monoid",
            value: bit,
            size: x_count,
        });
    }
    if t[monoid.zero()] != monoid.zero() {
        return Err(ExampleError::NotEndomorphism {
            reason: "does not fix zero",
            x: monoid.zero(),
            y: monoid.zero(),
        });
    }
    for x in 0..x_count {
        for y in 0..x_count {
            if t[monoid.add(x, y)] != monoid.add(t[x], t[y]) {
                return Err(ExampleError::NotEndomorphism {
                    reason: "not additive",
                    x,
                    y,
                });
            }
        }
    }
    if !p.contains(monoid.zero()) {
        return Err(ExampleError::ZeroNotInP);
    }
    let t_preserves_p = p.iter().all(|y| p.contains(t[y]));
    // t^n applied pointwise, starting from the identity.
    let mut power: Vec<usize> = (0..x_count).collect();
    let mut membership = FunctionMembership::Inconclusive { bound: n_max };
    for n in 0..=n_max {
        let ok = (0..x_count).all(|x| {
            p.iter()
                .all(|y| p.contains(monoid.add(f[x], power[y])))
        });
        if ok {
            membership = FunctionMembership::Member { alpha: n };
            break;
        }
        for slot in power.iter_mut() {
            *slot = t[*slot];
        }
    }
    Ok(FunctionSpaceOutcome {
        membership,
        t_preserves_p,
    })
}
