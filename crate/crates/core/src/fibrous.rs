//! The central structure: a family of relations on one carrier, indexed by a
//! unitary magma, together with a partial "successor index" map defined
//! exactly on the related pairs.
//!
//! Writing `x <=[i] y` for "(i, x, y) is in the relation" and `d(i,x,y)` for
//! the successor index, the three axioms checked by
//! [`FibrousPreorder::check_axioms`] are:
//!
//! * **C1** (reflexivity): `x <=[i] x` for every index `i` and point `x`.
//! * **C2** (relay transitivity): if `x <=[i] y`, `d(i,x,y) = j`, and
//!   `y <=[j] z`, then `x <=[i] z`.
//! * **C3** (factor compatibility): if `x <=[i*j] y` then both `x <=[i] y`
//!   and `x <=[j] y`.
//!
//! Each point `x` and index `i` determine a basis set
//! `N(i,x) = {y : x <=[i] y}`; a subset `O` is open when every `x` in `O`
//! admits some `i` with `N(i,x)` inside `O`. For a structure passing C1–C3
//! these opens form a topology equal to the union closure of the basis sets
//! plus the empty set, which is how [`FibrousPreorder::induced_topology`]
//! computes it; [`FibrousPreorder::induced_topology_exhaustive`] is the
//! direct all-subsets scan kept as an independent oracle.

use crate::carrier::{Carrier, Subset};
use crate::magma::UnitaryMagma;
use crate::topology::{union_closure, FiniteTopology};
use thiserror::Error;

/// Upper bound on `|I| * |X|^2` cells; protects against runaway allocation
/// when a huge capped magma meets a wide carrier.
pub const MAX_FP_CELLS: usize = 1 << 24;

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FibrousError {
    #[error("index {value} out of range for {role} of size {size}")]
    IndexOutOfRange {
        role: &'static str,
        value: usize,
        size: usize,
    },
    #[error("successor map defined at ({index},{base},{target}) which is not in the relation")]
    SuccessorOffRelation {
        index: usize,
        base: usize,
        target: usize,
    },
    #[error("relation contains ({index},{base},{target}) but the successor map is undefined there")]
    SuccessorMissing {
        index: usize,
        base: usize,
        target: usize,
    },
    #[error("conflicting successor values at ({index},{base},{target})")]
    ConflictingSuccessor {
        index: usize,
        base: usize,
        target: usize,
    },
    #[error("structure with {cells} relation cells exceeds the supported size")]
    TooLarge { cells: usize },
    #[error("structure violates the axioms; run the axiom check for witnesses")]
    AxiomsFailed,
    #[error("source and destination are indexed by different magmas")]
    MagmaMismatch,
    #[error("map has {got} entries, expected {expected}")]
    WrongMapLength { expected: usize, got: usize },
}

/// Every axiom violation found by an exhaustive scan, with witnesses.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AxiomReport {
    /// `(i, x)` such that `x <=[i] x` fails.
    pub c1_violations: Vec<(usize, usize)>,
    /// `(i, x, y, z)`: `x <=[i] y`, `d(i,x,y) = j`, `y <=[j] z`, but not `x <=[i] z`.
    pub c2_violations: Vec<(usize, usize, usize, usize)>,
    /// `(i, j, x, y)`: `x <=[i*j] y` but `x <=[i] y` or `x <=[j] y` fails.
    pub c3_violations: Vec<(usize, usize, usize, usize)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.c1_violations.is_empty()
            && self.c2_violations.is_empty()
            && self.c3_violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrousPreorder {
    carrier: Carrier,
    magma: UnitaryMagma,
    /// `rel[i * n + x]` = the basis set `N(i, x)`.
    rel: Vec<Subset>,
    /// `delta[(i * n + x) * n + y]` = successor index, or `UNDEF` off the relation.
    delta: Vec<u32>,
}

impl FibrousPreorder {
    /// Builds the structure from explicit relation triples `(i, x, y)` and
    /// successor entries `(i, x, y, j)`. The successor map must be defined
    /// exactly on the relation: entries off the relation and related pairs
    /// without an entry are both construction errors, as are conflicting
    /// duplicate entries.
    pub fn new(
        carrier: Carrier,
        magma: UnitaryMagma,
        rel_triples: &[(usize, usize, usize)],
        delta_entries: &[(usize, usize, usize, usize)],
    ) -> Result<Self, FibrousError> {
        let n = carrier.len();
        let k = magma.len();
        check_cells(k, n)?;
        let mut rel = vec![Subset::EMPTY; k * n];
        for &(i, x, y) in rel_triples {
            check_range(i, k, "index set")?;
            check_range(x, n, "carrier")?;
            check_range(y, n, "carrier")?;
            rel[i * n + x] = rel[i * n + x].with(y);
        }
        let mut delta = vec![UNDEF; k * n * n];
        for &(i, x, y, j) in delta_entries {
            check_range(i, k, "index set")?;
            check_range(x, n, "carrier")?;
            check_range(y, n, "carrier")?;
            check_range(j, k, "index set")?;
            if !rel[i * n + x].contains(y) {
                return Err(FibrousError::SuccessorOffRelation {
                    index: i,
                    base: x,
                    target: y,
                });
            }
            let cell = &mut delta[(i * n + x) * n + y];
            if *cell != UNDEF && *cell != j as u32 {
                return Err(FibrousError::ConflictingSuccessor {
                    index: i,
                    base: x,
                    target: y,
                });
            }
            *cell = j as u32;
        }
        for i in 0..k {
            for x in 0..n {
                for y in rel[i * n + x].iter() {
                    if delta[(i * n + x) * n + y] == UNDEF {
                        return Err(FibrousError::SuccessorMissing {
                            index: i,
                            base: x,
                            target: y,
                        });
                    }
                }
            }
        }
        Ok(FibrousPreorder {
            carrier,
            magma,
            rel,
            delta,
        })
    }

    /// Builds the structure from predicates: `rel_fn(i, x, y)` decides the
    /// relation and `delta_fn(i, x, y)` gives the successor index on related
    /// pairs (it is never consulted off them).
    pub fn from_fn(
        carrier: Carrier,
        magma: UnitaryMagma,
        rel_fn: impl Fn(usize, usize, usize) -> bool,
        delta_fn: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self, FibrousError> {
        let n = carrier.len();
        let k = magma.len();
        check_cells(k, n)?;
        let mut rel = vec![Subset::EMPTY; k * n];
        let mut delta = vec![UNDEF; k * n * n];
        for i in 0..k {
            for x in 0..n {
                for y in 0..n {
                    if rel_fn(i, x, y) {
                        rel[i * n + x] = rel[i * n + x].with(y);
                        let j = delta_fn(i, x, y);
                        check_range(j, k, "index set")?;
                        delta[(i * n + x) * n + y] = j as u32;
                    }
                }
            }
        }
        Ok(FibrousPreorder {
            carrier,
            magma,
            rel,
            delta,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn magma(&self) -> &UnitaryMagma {
        &self.magma
    }

    /// Whether `x <=[i] y`.
    pub fn le(&self, i: usize, x: usize, y: usize) -> bool {
        self.rel[i * self.carrier.len() + x].contains(y)
    }

    /// The basis set `N(i, x) = {y : x <=[i] y}`.
    pub fn neighborhood(&self, i: usize, x: usize) -> Subset {
        self.rel[i * self.carrier.len() + x]
    }

    /// The successor index at `(i, x, y)`, defined exactly on the relation.
    pub fn delta(&self, i: usize, x: usize, y: usize) -> Option<usize> {
        let n = self.carrier.len();
        match self.delta[(i * n + x) * n + y] {
            UNDEF => None,
            j => Some(j as usize),
        }
    }

    /// All relation triples `(i, x, y)` in deterministic order.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.carrier.len();
        let mut out = Vec::new();
        for i in self.magma.indices() {
            for x in 0..n {
                for y in self.rel[i * n + x].iter() {
                    out.push((i, x, y));
                }
            }
        }
        out
    }

    /// Exhaustive scan for violations of the three axioms.
    pub fn check_axioms(&self) -> AxiomReport {
        let n = self.carrier.len();
        let k = self.magma.len();
        let mut report = AxiomReport::default();
        for i in 0..k {
            for x in 0..n {
                if !self.le(i, x, x) {
                    report.c1_violations.push((i, x));
                }
            }
        }
        for i in 0..k {
            for x in 0..n {
                let nx = self.rel[i * n + x];
                for y in nx.iter() {
                    let j = self.delta(i, x, y).expect("defined on the relation");
                    let ny = self.rel[j * n + y];
                    if !ny.is_subset_of(nx) {
                        for z in ny.iter() {
                            if !nx.contains(z) {
                                report.c2_violations.push((i, x, y, z));
                            }
                        }
                    }
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let ij = self.magma.op(i, j);
                for x in 0..n {
                    let prod = self.rel[ij * n + x];
                    let both = self.rel[i * n + x].inter(self.rel[j * n + x]);
                    if !prod.is_subset_of(both) {
                        for y in prod.iter() {
                            if !both.contains(y) {
                                report.c3_violations.push((i, j, x, y));
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// Whether `O` is open under the membership rule: every point of `O` has
    /// some basis set `N(i, x)` inside `O`.
    pub fn is_open_by_rule(&self, o: Subset) -> bool {
        let n = self.carrier.len();
        o.iter().all(|x| {
            self.magma
                .indices()
                .any(|i| self.rel[i * n + x].is_subset_of(o))
        })
    }

    /// The induced topology: union closure of the basis sets plus the empty
    /// set. Refuses to build when the axioms fail, since the closure is only
    /// guaranteed to agree with the membership rule on valid structures.
    pub fn induced_topology(&self) -> Result<FiniteTopology, FibrousError> {
        if !self.check_axioms().passed() {
            return Err(FibrousError::AxiomsFailed);
        }
        Ok(self.induced_topology_unchecked())
    }

    /// Union closure of the basis sets without re-checking the axioms.
    pub fn induced_topology_unchecked(&self) -> FiniteTopology {
        union_closure(self.carrier.clone(), &self.rel)
    }

    /// Independent oracle: scans all `2^|X|` subsets with the membership
    /// rule. Exponential; intended for cross-checking on small carriers.
    pub fn induced_topology_exhaustive(&self) -> FiniteTopology {
        let n = self.carrier.len();
        assert!(n <= 25, "exhaustive open-set scan is for small carriers");
        let opens: Vec<Subset> = (0..(1u64 << n))
            .map(Subset::from_bits)
            .filter(|&o| self.is_open_by_rule(o))
            .collect();
        FiniteTopology::from_masks(self.carrier.clone(), opens).expect("bits in range")
    }
}

fn check_range(value: usize, size: usize, role: &'static str) -> Result<(), FibrousError> {
    if value >= size {
        Err(FibrousError::IndexOutOfRange { role, value, size })
    } else {
        Ok(())
    }
}

fn check_cells(k: usize, n: usize) -> Result<(), FibrousError> {
    let cells = k.saturating_mul(n).saturating_mul(n);
    if cells > MAX_FP_CELLS {
        Err(FibrousError::TooLarge { cells })
    } else {
        Ok(())
    }
}

/// Outcome of the structure-map check, with the first counterexample when it
/// fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub holds: bool,
    /// `(x, y, j)` with `x <=[g_j(x)] y` in the source but not
    /// `f(x) <=[j] f(y)` in the destination.
    pub counterexample: Option<(usize, usize, usize)>,
}

/// Checks the structure-map condition for `f` between two structures over
/// the same magma, relative to a family `g` of index reassignments: for all
/// points `x, y` and indexes `j`, `x <=[g[j][x]] y` must imply
/// `f(x) <=[j] f(y)`. When it holds, `f` is continuous between the induced
/// topologies.
pub fn check_morphism(
    src: &FibrousPreorder,
    dst: &FibrousPreorder,
    f: &[usize],
    g: &[Vec<usize>],
) -> Result<MorphismReport, FibrousError> {
    if !src.magma.same_structure(&dst.magma) {
        return Err(FibrousError::MagmaMismatch);
    }
    let n_src = src.carrier.len();
    let n_dst = dst.carrier.len();
    let k = src.magma.len();
    if f.len() != n_src {
        return Err(FibrousError::WrongMapLength {
            expected: n_src,
            got: f.len(),
        });
    }
    for &v in f {
        check_range(v, n_dst, "carrier")?;
    }
    if g.len() != k {
        return Err(FibrousError::WrongMapLength {
            expected: k,
            got: g.len(),
        });
    }
    for row in g {
        if row.len() != n_src {
            return Err(FibrousError::WrongMapLength {
                expected: n_src,
                got: row.len(),
            });
        }
        for &v in row {
            check_range(v, k, "index set")?;
        }
    }
    for x in 0..n_src {
        for y in 0..n_src {
            for j in 0..k {
                if src.le(g[j][x], x, y) && !dst.le(j, f[x], f[y]) {
                    return Ok(MorphismReport {
                        holds: false,
                        counterexample: Some((x, y, j)),
                    });
                }
            }
        }
    }
    Ok(MorphismReport {
        holds: true,
        counterexample: None,
    })
}
