//! Equivalent presentations of a fibrous preorder, and the lossless
//! conversions among them.
//!
//! The same data can be packaged four ways:
//!
//! 1. [`FibrousPreorder`] — relation family plus successor map;
//! 2. [`NeighborhoodMap`] — a total map `N : I x X -> P(X)`;
//! 3. [`TernaryRep`] — a triple relation `R` with a witness map `p` defined
//!    exactly on `R`;
//! 4. [`EtaGammaRep`] — a topology together with maps `eta : I x X -> opens`
//!    and `gamma : {(U, x) : x in U open} -> I`.
//!
//! The conversion cycle `fp -> nmap -> ternary -> etagamma -> fp` preserves
//! the induced topology exactly. It does **not** promise to reproduce the
//! successor/witness maps pointwise: every existential choice along the way
//! is resolved deterministically as "first index in magma element order", so
//! round trips are reproducible but may legitimately pick different
//! witnesses than the input carried.

use crate::carrier::{Carrier, Subset};
use crate::fibrous::{AxiomReport, FibrousError, FibrousPreorder};
use crate::magma::UnitaryMagma;
use crate::topology::{union_closure, FiniteTopology};
use thiserror::Error;

const UNDEF: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReprError {
    #[error("input violates its validation conditions; run the validator for witnesses")]
    ValidationFailed,
    #[error("input fibrous preorder violates its axioms")]
    AxiomsFailed,
    #[error("no index k works at ({index},{base},{target}); input cannot have been valid")]
    NoWitnessK {
        index: usize,
        base: usize,
        target: usize,
    },
    #[error("index {value} out of range for {role} of size {size}")]
    IndexOutOfRange {
        role: &'static str,
        value: usize,
        size: usize,
    },
    #[error("gamma is malformed at open set #{open} and point {point}: {reason}")]
    MalformedGamma {
        open: usize,
        point: usize,
        reason: &'static str,
    },
    #[error("stored topology disagrees with the one generated by the neighborhood sets")]
    InconsistentTopology,
    #[error("structure with {cells} cells exceeds the supported size")]
    TooLarge { cells: usize },
}

impl From<FibrousError> for ReprError {
    fn from(e: FibrousError) -> Self {
        match e {
            FibrousError::AxiomsFailed => ReprError::AxiomsFailed,
            FibrousError::IndexOutOfRange { role, value, size } => {
                ReprError::IndexOutOfRange { role, value, size }
            }
            FibrousError::TooLarge { cells } => ReprError::TooLarge { cells },
            _ => ReprError::ValidationFailed,
        }
    }
}

/// Which witness point condition (ii) of the neighborhood-map validation
/// quantifies over.
///
/// The meaningful reading asks each `y` in `N(n,x)` for a refining index `k`
/// with `N(k,y)` inside `N(n,x)`; that is what the conversions rely on and
/// what [`NeighborhoodMap::validate`] uses. The alternative reading with the
/// witness set based at `x` itself (`N(k,x)` inside `N(n,x)`) is satisfied
/// by taking `k = n`, so it rejects nothing; it is kept selectable for
/// completeness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefinementWitness {
    /// For every `y` in `N(n,x)`: some `k` has `N(k,y)` inside `N(n,x)`.
    #[default]
    AtTarget,
    /// Some `k` has `N(k,x)` inside `N(n,x)` (vacuously true via `k = n`).
    AtBase,
}

/// Violations of the three neighborhood-map conditions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NmapReport {
    /// (i) `(n, x)` with `x` not in `N(n,x)`.
    pub missing_base: Vec<(usize, usize)>,
    /// (ii) `(n, x, y)` with `y` in `N(n,x)` but no refining `k`.
    pub no_refinement: Vec<(usize, usize, usize)>,
    /// (iii) `(n, m, x, y)` with `y` in `N(n*m, x)` escaping `N(n,x) ∩ N(m,x)`.
    pub product_escape: Vec<(usize, usize, usize, usize)>,
}

impl NmapReport {
    pub fn passed(&self) -> bool {
        self.missing_base.is_empty()
            && self.no_refinement.is_empty()
            && self.product_escape.is_empty()
    }
}

/// Presentation 2: a total map `N : I x X -> P(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodMap {
    carrier: Carrier,
    magma: UnitaryMagma,
    /// `n_sets[i * |X| + x]` = `N(i, x)`.
    n_sets: Vec<Subset>,
}

impl NeighborhoodMap {
    /// `sets[i][x]` = `N(i, x)`; one row per magma element, one entry per point.
    pub fn new(
        carrier: Carrier,
        magma: UnitaryMagma,
        sets: Vec<Vec<Subset>>,
    ) -> Result<Self, ReprError> {
        let n = carrier.len();
        let k = magma.len();
        if sets.len() != k {
            return Err(ReprError::IndexOutOfRange {
                role: "index set",
                value: sets.len(),
                size: k,
            });
        }
        let mut flat = Vec::with_capacity(k * n);
        for row in &sets {
            if row.len() != n {
                return Err(ReprError::IndexOutOfRange {
                    role: "carrier",
                    value: row.len(),
                    size: n,
                });
            }
            for s in row {
                if let Some(bit) = s.iter().find(|&b| b >= n) {
                    return Err(ReprError::IndexOutOfRange {
                        role: "carrier",
                        value: bit,
                        size: n,
                    });
                }
                flat.push(*s);
            }
        }
        Ok(NeighborhoodMap {
            carrier,
            magma,
            n_sets: flat,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn magma(&self) -> &UnitaryMagma {
        &self.magma
    }

    pub fn n(&self, i: usize, x: usize) -> Subset {
        self.n_sets[i * self.carrier.len() + x]
    }

    /// Checks conditions (i)-(iii) with the default witness reading.
    pub fn validate(&self) -> NmapReport {
        self.validate_with(RefinementWitness::AtTarget)
    }

    pub fn validate_with(&self, witness: RefinementWitness) -> NmapReport {
        let n = self.carrier.len();
        let k = self.magma.len();
        let mut report = NmapReport::default();
        for i in 0..k {
            for x in 0..n {
                if !self.n(i, x).contains(x) {
                    report.missing_base.push((i, x));
                }
            }
        }
        for i in 0..k {
            for x in 0..n {
                let nx = self.n(i, x);
                match witness {
                    RefinementWitness::AtTarget => {
                        for y in nx.iter() {
                            if !(0..k).any(|w| self.n(w, y).is_subset_of(nx)) {
                                report.no_refinement.push((i, x, y));
                            }
                        }
                    }
                    RefinementWitness::AtBase => {
                        if !(0..k).any(|w| self.n(w, x).is_subset_of(nx)) {
                            report.no_refinement.push((i, x, x));
                        }
                    }
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let ij = self.magma.op(i, j);
                for x in 0..n {
                    let prod = self.n(ij, x);
                    let both = self.n(i, x).inter(self.n(j, x));
                    for y in prod.iter() {
                        if !both.contains(y) {
                            report.product_escape.push((i, j, x, y));
                        }
                    }
                }
            }
        }
        report
    }

    /// Union closure of the `N` sets; equals the membership-rule topology
    /// whenever the validation passes.
    pub fn induced_topology(&self) -> Result<FiniteTopology, ReprError> {
        if !self.validate().passed() {
            return Err(ReprError::ValidationFailed);
        }
        Ok(union_closure(self.carrier.clone(), &self.n_sets))
    }
}

/// Presentation 3: a ternary relation with a witness map defined exactly on
/// it. Structurally this is the same shape as [`FibrousPreorder`] — the
/// conditions it must satisfy are word-for-word the three axioms — so it
/// wraps one and exposes the relation/witness vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryRep(FibrousPreorder);

impl TernaryRep {
    pub fn new(
        carrier: Carrier,
        magma: UnitaryMagma,
        triples: &[(usize, usize, usize)],
        witnesses: &[(usize, usize, usize, usize)],
    ) -> Result<Self, ReprError> {
        Ok(TernaryRep(FibrousPreorder::new(
            carrier, magma, triples, witnesses,
        )?))
    }

    pub fn carrier(&self) -> &Carrier {
        self.0.carrier()
    }

    pub fn magma(&self) -> &UnitaryMagma {
        self.0.magma()
    }

    pub fn contains(&self, n: usize, x: usize, y: usize) -> bool {
        self.0.le(n, x, y)
    }

    /// `{y : (n, x, y) in R}`.
    pub fn related_set(&self, n: usize, x: usize) -> Subset {
        self.0.neighborhood(n, x)
    }

    /// The witness map, defined exactly on the relation.
    pub fn p(&self, n: usize, x: usize, y: usize) -> Option<usize> {
        self.0.delta(n, x, y)
    }

    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        self.0.triples()
    }

    /// The three conditions are exactly the fibrous-preorder axioms.
    pub fn validate(&self) -> AxiomReport {
        self.0.check_axioms()
    }

    pub fn induced_topology(&self) -> Result<FiniteTopology, ReprError> {
        self.0.induced_topology().map_err(ReprError::from)
    }

    pub fn as_fibrous(&self) -> &FibrousPreorder {
        &self.0
    }
}

/// Violations of the open-neighborhood-assignment conditions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EtaGammaReport {
    /// (i) `(n, x)` with `x` not in `eta(n,x)`.
    pub missing_base: Vec<(usize, usize)>,
    /// (ii) `(open position, x)` with `eta(gamma(U,x), x)` escaping `U`.
    pub gamma_escape: Vec<(usize, usize)>,
    /// (iii) `(n, m, x, y)` with `y` in `eta(n*m, x)` escaping the intersection.
    pub product_escape: Vec<(usize, usize, usize, usize)>,
    /// `(n, x)` whose `eta(n,x)` is not an open of the stored topology.
    pub not_open: Vec<(usize, usize)>,
}

impl EtaGammaReport {
    pub fn passed(&self) -> bool {
        self.missing_base.is_empty()
            && self.gamma_escape.is_empty()
            && self.product_escape.is_empty()
            && self.not_open.is_empty()
    }
}

/// Presentation 4: a topology with an open-neighborhood assignment `eta` and
/// an index recovery map `gamma` defined exactly on pointed opens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaGammaRep {
    carrier: Carrier,
    magma: UnitaryMagma,
    topology: FiniteTopology,
    /// `eta[i * |X| + x]` = the assigned open.
    eta: Vec<Subset>,
    /// `gamma[u * |X| + x]` for `opens[u]` containing `x`; `UNDEF` elsewhere.
    gamma: Vec<u32>,
}

impl EtaGammaRep {
    /// `eta_sets[i][x]` is the open assigned to `(i, x)`; `gamma_entries` are
    /// `(open position in canonical order, point, index)` and must cover the
    /// pointed opens exactly.
    pub fn new(
        carrier: Carrier,
        magma: UnitaryMagma,
        topology: FiniteTopology,
        eta_sets: Vec<Vec<Subset>>,
        gamma_entries: &[(usize, usize, usize)],
    ) -> Result<Self, ReprError> {
        let nm = NeighborhoodMap::new(carrier, magma, eta_sets)?;
        let NeighborhoodMap {
            carrier,
            magma,
            n_sets: eta,
        } = nm;
        let n = carrier.len();
        let k = magma.len();
        let u_count = topology.opens().len();
        let mut gamma = vec![UNDEF; u_count * n];
        for &(u, x, idx) in gamma_entries {
            if u >= u_count {
                return Err(ReprError::IndexOutOfRange {
                    role: "open set list",
                    value: u,
                    size: u_count,
                });
            }
            if x >= n {
                return Err(ReprError::IndexOutOfRange {
                    role: "carrier",
                    value: x,
                    size: n,
                });
            }
            if idx >= k {
                return Err(ReprError::IndexOutOfRange {
                    role: "index set",
                    value: idx,
                    size: k,
                });
            }
            if !topology.opens()[u].contains(x) {
                return Err(ReprError::MalformedGamma {
                    open: u,
                    point: x,
                    reason: "defined at a point outside the open set",
                });
            }
            let cell = &mut gamma[u * n + x];
            if *cell != UNDEF && *cell != idx as u32 {
                return Err(ReprError::MalformedGamma {
                    open: u,
                    point: x,
                    reason: "conflicting values",
                });
            }
            *cell = idx as u32;
        }
        for (u, open) in topology.opens().iter().enumerate() {
            for x in open.iter() {
                if gamma[u * n + x] == UNDEF {
                    return Err(ReprError::MalformedGamma {
                        open: u,
                        point: x,
                        reason: "missing at a point of the open set",
                    });
                }
            }
        }
        Ok(EtaGammaRep {
            carrier,
            magma,
            topology,
            eta,
            gamma,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn magma(&self) -> &UnitaryMagma {
        &self.magma
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    pub fn eta(&self, i: usize, x: usize) -> Subset {
        self.eta[i * self.carrier.len() + x]
    }

    /// `gamma` looked up by open-set position in the canonical order.
    pub fn gamma_at(&self, open_pos: usize, x: usize) -> Option<usize> {
        match self.gamma[open_pos * self.carrier.len() + x] {
            UNDEF => None,
            v => Some(v as usize),
        }
    }

    /// `gamma` looked up by the open set itself.
    pub fn gamma(&self, u: Subset, x: usize) -> Option<usize> {
        let pos = self.topology.opens().binary_search(&u).ok()?;
        self.gamma_at(pos, x)
    }

    pub fn validate(&self) -> EtaGammaReport {
        let n = self.carrier.len();
        let k = self.magma.len();
        let mut report = EtaGammaReport::default();
        for i in 0..k {
            for x in 0..n {
                let e = self.eta(i, x);
                if !e.contains(x) {
                    report.missing_base.push((i, x));
                }
                if !self.topology.is_open(e) {
                    report.not_open.push((i, x));
                }
            }
        }
        for (u, open) in self.topology.opens().iter().enumerate() {
            for x in open.iter() {
                let g = self.gamma_at(u, x).expect("gamma total on pointed opens");
                if !self.eta(g, x).is_subset_of(*open) {
                    report.gamma_escape.push((u, x));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let ij = self.magma.op(i, j);
                for x in 0..n {
                    let prod = self.eta(ij, x);
                    let both = self.eta(i, x).inter(self.eta(j, x));
                    for y in prod.iter() {
                        if !both.contains(y) {
                            report.product_escape.push((i, j, x, y));
                        }
                    }
                }
            }
        }
        report
    }

    /// The stored topology, after checking it against the one the `eta` sets
    /// generate by union closure.
    pub fn induced_topology(&self) -> Result<FiniteTopology, ReprError> {
        if !self.validate().passed() {
            return Err(ReprError::ValidationFailed);
        }
        let generated = union_closure(self.carrier.clone(), &self.eta);
        if generated != self.topology {
            return Err(ReprError::InconsistentTopology);
        }
        Ok(self.topology.clone())
    }
}

/// Reads the basis sets of a valid fibrous preorder off as a neighborhood
/// map: `N(n,x) = {y : x <=[n] y}`.
pub fn fp_to_nmap(fp: &FibrousPreorder) -> Result<NeighborhoodMap, ReprError> {
    if !fp.check_axioms().passed() {
        return Err(ReprError::AxiomsFailed);
    }
    let n = fp.carrier().len();
    let sets: Vec<Vec<Subset>> = fp
        .magma()
        .indices()
        .map(|i| (0..n).map(|x| fp.neighborhood(i, x)).collect())
        .collect();
    NeighborhoodMap::new(fp.carrier().clone(), fp.magma().clone(), sets)
}

/// Turns a valid neighborhood map into the ternary presentation:
/// `R = {(n,x,y) : y in N(n,x)}` and `p(n,x,y)` = the first `k` in magma
/// element order with `N(k,y)` inside `N(n,x)`.
pub fn nmap_to_ternary(nm: &NeighborhoodMap) -> Result<TernaryRep, ReprError> {
    if !nm.validate().passed() {
        return Err(ReprError::ValidationFailed);
    }
    let n = nm.carrier().len();
    let k = nm.magma().len();
    let mut triples = Vec::new();
    let mut witnesses = Vec::new();
    for i in 0..k {
        for x in 0..n {
            let nx = nm.n(i, x);
            for y in nx.iter() {
                triples.push((i, x, y));
                let w = (0..k)
                    .find(|&w| nm.n(w, y).is_subset_of(nx))
                    .ok_or(ReprError::NoWitnessK {
                        index: i,
                        base: x,
                        target: y,
                    })?;
                witnesses.push((i, x, y, w));
            }
        }
    }
    TernaryRep::new(nm.carrier().clone(), nm.magma().clone(), &triples, &witnesses)
}

/// Turns a valid ternary presentation into the topological one: the sets
/// `{y : (n,x,y) in R}` become `eta`, the topology is their union closure,
/// and `gamma(U, x)` is the first `k` in magma element order with the `k`-th
/// set at `x` inside `U`.
pub fn ternary_to_etagamma(tr: &TernaryRep) -> Result<EtaGammaRep, ReprError> {
    if !tr.validate().passed() {
        return Err(ReprError::ValidationFailed);
    }
    let n = tr.carrier().len();
    let k = tr.magma().len();
    let basis: Vec<Subset> = (0..k)
        .flat_map(|i| (0..n).map(move |x| (i, x)))
        .map(|(i, x)| tr.related_set(i, x))
        .collect();
    let topology = union_closure(tr.carrier().clone(), &basis);
    let eta_sets: Vec<Vec<Subset>> = (0..k)
        .map(|i| (0..n).map(|x| tr.related_set(i, x)).collect())
        .collect();
    let mut gamma_entries = Vec::new();
    for (u, open) in topology.opens().iter().enumerate() {
        for x in open.iter() {
            let w = (0..k)
                .find(|&w| tr.related_set(w, x).is_subset_of(*open))
                .ok_or(ReprError::NoWitnessK {
                    index: u,
                    base: x,
                    target: x,
                })?;
            gamma_entries.push((u, x, w));
        }
    }
    EtaGammaRep::new(
        tr.carrier().clone(),
        tr.magma().clone(),
        topology,
        eta_sets,
        &gamma_entries,
    )
}

/// Closes the cycle: `x <=[i] y` iff `y` is in `eta(i,x)`, with the
/// successor map `d(i,x,y) = gamma(eta(i,x), y)`.
pub fn etagamma_to_fp(eg: &EtaGammaRep) -> Result<FibrousPreorder, ReprError> {
    if !eg.validate().passed() {
        return Err(ReprError::ValidationFailed);
    }
    let fp = FibrousPreorder::from_fn(
        eg.carrier().clone(),
        eg.magma().clone(),
        |i, x, y| eg.eta(i, x).contains(y),
        |i, x, y| {
            eg.gamma(eg.eta(i, x), y)
                .expect("eta sets are open and contain their points, so gamma is defined")
        },
    )?;
    Ok(fp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carrier(labels: &[&str]) -> Carrier {
        Carrier::new(labels.iter().copied()).unwrap()
    }

    fn mask(indices: &[usize]) -> Subset {
        Subset::from_indices(indices.iter().copied())
    }

    fn chain_fp() -> FibrousPreorder {
        FibrousPreorder::from_fn(
            carrier(&["a", "b"]),
            UnitaryMagma::trivial(),
            |_, x, y| x == y || (x == 0 && y == 1),
            |_, _, _| 0,
        )
        .unwrap()
    }

    #[test]
    fn discrete_and_indiscrete_maps_validate() {
        let c = carrier(&["a", "b", "c"]);
        let m = UnitaryMagma::capped_nat_mult(2).unwrap();
        let discrete = NeighborhoodMap::new(
            c.clone(),
            m.clone(),
            (0..2)
                .map(|_| (0..3).map(Subset::singleton).collect())
                .collect(),
        )
        .unwrap();
        assert!(discrete.validate().passed());
        let full = c.full();
        let indiscrete =
            NeighborhoodMap::new(c, m, (0..2).map(|_| vec![full; 3]).collect()).unwrap();
        assert!(indiscrete.validate().passed());
        assert_eq!(
            indiscrete.induced_topology().unwrap().opens(),
            &[Subset::EMPTY, full]
        );
    }

    #[test]
    fn missing_base_point_reported() {
        let c = carrier(&["a", "b"]);
        let m = UnitaryMagma::trivial();
        let nm = NeighborhoodMap::new(c, m, vec![vec![mask(&[1]), mask(&[1])]]).unwrap();
        let r = nm.validate();
        assert_eq!(r.missing_base, vec![(0, 0)]);
        assert!(!r.passed());
    }

    #[test]
    fn refinement_failure_depends_on_witness_reading() {
        // Three overlapping two-element sets arranged in a cycle: each leaks
        // outside the previous one, so no refining index ever exists.
        let c = carrier(&["a", "b", "c"]);
        let m = UnitaryMagma::trivial();
        let nm = NeighborhoodMap::new(
            c,
            m,
            vec![vec![mask(&[0, 1]), mask(&[1, 2]), mask(&[0, 2])]],
        )
        .unwrap();
        let strict = nm.validate();
        assert_eq!(strict.missing_base, vec![]);
        // y=b in N(1,a): N(1,b)={b,c} not inside {a,b} and there is no other
        // index, so (0,0,1) is a violation; similarly around the cycle.
        assert_eq!(strict.no_refinement, vec![(0, 0, 1), (0, 1, 2), (0, 2, 0)]);
        let lax = nm.validate_with(RefinementWitness::AtBase);
        assert!(
            lax.passed(),
            "base-point reading accepts anything reflexive via k = n"
        );
    }

    #[test]
    fn product_escape_reported() {
        let c = carrier(&["a", "b"]);
        let m = UnitaryMagma::capped_nat_mult(2).unwrap();
        // N(2,a) = {a,b} escapes N(1,a) = {a} on the products 1*2, 2*1.
        let nm = NeighborhoodMap::new(
            c,
            m,
            vec![
                vec![mask(&[0]), mask(&[1])],
                vec![mask(&[0, 1]), mask(&[1])],
            ],
        )
        .unwrap();
        let r = nm.validate();
        assert_eq!(r.product_escape, vec![(0, 1, 0, 1), (1, 0, 0, 1)]);
    }

    #[test]
    fn chain_converts_around_the_full_cycle() {
        let fp = chain_fp();
        let nm = fp_to_nmap(&fp).unwrap();
        assert!(nm.validate().passed());
        assert_eq!(nm.n(0, 0), mask(&[0, 1]));
        assert_eq!(nm.n(0, 1), mask(&[1]));

        let tr = nmap_to_ternary(&nm).unwrap();
        assert!(tr.validate().passed());
        // Relation matches pointwise, and the witness at (1,a,b) is the unit
        // since N(1,b)={b} refines {a,b}.
        assert_eq!(tr.related_set(0, 0), nm.n(0, 0));
        assert_eq!(tr.p(0, 0, 1), Some(0));

        let eg = ternary_to_etagamma(&tr).unwrap();
        assert!(eg.validate().passed());
        assert_eq!(
            eg.topology().opens(),
            &[Subset::EMPTY, mask(&[1]), mask(&[0, 1])]
        );
        assert_eq!(eg.gamma(mask(&[1]), 1), Some(0));

        let back = etagamma_to_fp(&eg).unwrap();
        assert!(back.check_axioms().passed());
        assert_eq!(
            back.induced_topology().unwrap(),
            fp.induced_topology().unwrap()
        );
    }

    #[test]
    fn conversions_refuse_invalid_input() {
        // A neighborhood map failing (i).
        let c = carrier(&["a"]);
        let m = UnitaryMagma::trivial();
        let nm = NeighborhoodMap::new(c.clone(), m.clone(), vec![vec![Subset::EMPTY]]).unwrap();
        assert_eq!(nmap_to_ternary(&nm).unwrap_err(), ReprError::ValidationFailed);
        // A fibrous preorder failing C1.
        let fp = FibrousPreorder::from_fn(c, m, |_, _, _| false, |_, _, _| 0).unwrap();
        assert_eq!(fp_to_nmap(&fp).unwrap_err(), ReprError::AxiomsFailed);
    }

    #[test]
    fn gamma_domain_is_checked_at_construction() {
        let c = carrier(&["a", "b"]);
        let m = UnitaryMagma::trivial();
        let fp = chain_fp();
        let topology = fp.induced_topology().unwrap();
        let eta = vec![vec![mask(&[0, 1]), mask(&[1])]];
        // opens: [{}, {b}, {a,b}] — gamma must cover ({b},b), ({a,b},a), ({a,b},b).
        let full_gamma = [(1usize, 1usize, 0usize), (2, 0, 0), (2, 1, 0)];
        assert!(EtaGammaRep::new(
            c.clone(),
            m.clone(),
            topology.clone(),
            eta.clone(),
            &full_gamma
        )
        .is_ok());
        let missing = [(1usize, 1usize, 0usize), (2, 0, 0)];
        assert_eq!(
            EtaGammaRep::new(c.clone(), m.clone(), topology.clone(), eta.clone(), &missing)
                .unwrap_err(),
            ReprError::MalformedGamma {
                open: 2,
                point: 1,
                reason: "missing at a point of the open set"
            }
        );
        let off_domain = [
            (1usize, 1usize, 0usize),
            (2, 0, 0),
            (2, 1, 0),
            (1, 0, 0), // a is not in {b}
        ];
        assert_eq!(
            EtaGammaRep::new(c, m, topology, eta, &off_domain).unwrap_err(),
            ReprError::MalformedGamma {
                open: 1,
                point: 0,
                reason: "defined at a point outside the open set"
            }
        );
    }

    #[test]
    fn stored_topology_must_match_generated_one() {
        let c = carrier(&["a", "b"]);
        let m = UnitaryMagma::trivial();
        // eta sets generate {∅,{b},{a,b}} but we store the discrete topology.
        let topology = FiniteTopology::discrete(c.clone());
        let eta = vec![vec![mask(&[0, 1]), mask(&[1])]];
        let gamma: Vec<(usize, usize, usize)> = topology
            .opens()
            .iter()
            .enumerate()
            .flat_map(|(u, o)| o.iter().map(move |x| (u, x, 0)))
            .collect();
        let eg = EtaGammaRep::new(c, m, topology, eta, &gamma).unwrap();
        // Condition (ii) catches the mismatch: at the open {a} the chosen
        // index's eta set {a,b} escapes.
        let report = eg.validate();
        assert!(!report.passed());
        assert!(report.gamma_escape.contains(&(1, 0)));
    }

    #[test]
    fn inconsistent_but_valid_topology_detected() {
        // Singleton eta sets satisfy every pointwise condition against a
        // stored family that omits the two-element unions, yet their union
        // closure is the full power set — only the consistency check of
        // induced_topology can notice the gap.
        let c = carrier(&["a", "b", "c"]);
        let m = UnitaryMagma::trivial();
        let store = FiniteTopology::from_masks(
            c.clone(),
            vec![
                Subset::EMPTY,
                mask(&[0]),
                mask(&[1]),
                mask(&[2]),
                mask(&[0, 1, 2]),
            ],
        )
        .unwrap();
        let eta = vec![vec![mask(&[0]), mask(&[1]), mask(&[2])]];
        let gamma: Vec<(usize, usize, usize)> = store
            .opens()
            .iter()
            .enumerate()
            .flat_map(|(u, o)| o.iter().map(move |x| (u, x, 0)))
            .collect();
        let eg = EtaGammaRep::new(c, m, store, eta, &gamma).unwrap();
        assert!(eg.validate().passed());
        assert_eq!(
            eg.induced_topology().unwrap_err(),
            ReprError::InconsistentTopology
        );
    }

    #[test]
    fn discrete_ternary_witnesses_pick_first_index() {
        let c = carrier(&["a", "b"]);
        let m = UnitaryMagma::capped_nat_mult(2).unwrap();
        let nm = NeighborhoodMap::new(
            c,
            m,
            (0..2)
                .map(|_| (0..2).map(Subset::singleton).collect())
                .collect(),
        )
        .unwrap();
        let tr = nmap_to_ternary(&nm).unwrap();
        // Any k works at a reflexive triple; the tie-break picks the first.
        assert_eq!(tr.p(1, 0, 0), Some(0));
        let eg = ternary_to_etagamma(&tr).unwrap();
        assert_eq!(eg.topology().opens().len(), 4, "full power set");
        assert_eq!(eg.gamma(mask(&[0, 1]), 0), Some(0));
    }
}
