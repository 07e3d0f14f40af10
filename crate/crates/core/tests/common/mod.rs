//! Shared corpus generators and independent oracles for the integration
//! tests. Everything here is deliberately written against the public API
//! only, and the oracles recompute results by definitions (subset scans,
//! sampling) rather than by the library's own algorithms.

#![allow(dead_code)]

use ftk_core::constructors::RationalPseudometric;
use ftk_core::examples::RationalInterval;
use ftk_core::rational::{ceil_to_int, parse_ratio, unit_fraction, Rational};
use ftk_core::{Carrier, FibrousPreorder, FiniteTopology, Preorder, Subset, UnitaryMagma};
use num::{BigInt, One, Zero};
use rand::Rng;

pub fn carrier_n(n: usize) -> Carrier {
    Carrier::new((0..n).map(|i| format!("x{i}"))).expect("labels are distinct")
}

pub fn r(s: &str) -> Rational {
    parse_ratio(s).expect("literal rational")
}

/// A small random index magma: saturating multiplication or saturating
/// addition, at most four elements.
pub fn random_magma(rng: &mut impl Rng) -> UnitaryMagma {
    if rng.gen_bool(0.5) {
        UnitaryMagma::capped_nat_mult(rng.gen_range(1..=4)).expect("valid cap")
    } else {
        UnitaryMagma::capped_nat_add(rng.gen_range(0..=3)).expect("valid cap")
    }
}

/// Builds a random structure that provably satisfies all three axioms:
/// seed the relations with the diagonal plus random pairs, then grow to a
/// fixpoint under (1) product-index containment (the set at `i*j` is pushed
/// into the sets at `i` and `j`) and (2) per-index transitivity. The
/// successor map picks the first index whose neighborhood at the target
/// fits, which exists because per-index transitivity makes the index itself
/// a witness.
pub fn random_valid_fp(rng: &mut impl Rng, max_points: usize) -> FibrousPreorder {
    let n = rng.gen_range(2..=max_points);
    let carrier = carrier_n(n);
    let magma = random_magma(rng);
    let k = magma.len();
    let density = rng.gen_range(0.05..0.4);
    let mut nb: Vec<Vec<Subset>> = (0..k)
        .map(|_| (0..n).map(Subset::singleton).collect())
        .collect();
    for row in nb.iter_mut() {
        for set in row.iter_mut() {
            for y in 0..n {
                if rng.gen_bool(density) {
                    *set = set.with(y);
                }
            }
        }
    }
    loop {
        let mut changed = false;
        for i in 0..k {
            for j in 0..k {
                let t = magma.op(i, j);
                for x in 0..n {
                    let product = nb[t][x];
                    for target in [i, j] {
                        let grown = nb[target][x].union(product);
                        if grown != nb[target][x] {
                            nb[target][x] = grown;
                            changed = true;
                        }
                    }
                }
            }
        }
        for i in 0..k {
            for x in 0..n {
                let mut acc = nb[i][x];
                for y in nb[i][x].iter() {
                    acc = acc.union(nb[i][y]);
                }
                if acc != nb[i][x] {
                    nb[i][x] = acc;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let fp = FibrousPreorder::from_fn(
        carrier,
        magma,
        |i, x, y| nb[i][x].contains(y),
        |i, x, y| {
            (0..k)
                .find(|&j| nb[j][y].is_subset_of(nb[i][x]))
                .expect("per-index transitivity makes the index itself a witness")
        },
    )
    .expect("bounded size");
    assert!(
        fp.check_axioms().passed(),
        "generator must produce valid structures"
    );
    fp
}

/// A random preorder: random pairs closed under reflexivity and
/// transitivity.
pub fn random_preorder(rng: &mut impl Rng, n: usize) -> Preorder {
    let density = rng.gen_range(0.1..0.5);
    let mut up: Vec<Subset> = (0..n).map(Subset::singleton).collect();
    for set in up.iter_mut() {
        for y in 0..n {
            if rng.gen_bool(density) {
                *set = set.with(y);
            }
        }
    }
    loop {
        let mut changed = false;
        for x in 0..n {
            let mut acc = up[x];
            for y in up[x].iter() {
                acc = acc.union(up[y]);
            }
            if acc != up[x] {
                up[x] = acc;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Preorder::from_up_masks(carrier_n(n), up).expect("closed to a preorder")
}

// ---------------------------------------------------------------------------
// Pseudometric corpus and oracles
// ---------------------------------------------------------------------------

/// All symmetric distance assignments over `n` points drawn from `dists`
/// that satisfy the triangle inequality, enumerated depth-first with
/// incremental pruning.
pub fn all_pseudometrics(n: usize, dists: &[Rational]) -> Vec<RationalPseudometric> {
    let pairs: Vec<(usize, usize)> = (1..n)
        .flat_map(|v| (0..v).map(move |i| (i, v)))
        .collect();
    let mut d = vec![vec![Rational::zero(); n]; n];
    let mut out = Vec::new();
    fn rec(
        pairs: &[(usize, usize)],
        pos: usize,
        dists: &[Rational],
        d: &mut Vec<Vec<Rational>>,
        carrier_size: usize,
        out: &mut Vec<RationalPseudometric>,
    ) {
        if pos == pairs.len() {
            let rows: Vec<Vec<Rational>> = d.clone();
            out.push(
                RationalPseudometric::new(carrier_for(carrier_size), rows)
                    .expect("triangle-pruned assignment is a pseudometric"),
            );
            return;
        }
        let (i, v) = pairs[pos];
        'next: for value in dists {
            // Check the triangles (i, j, v) whose other two sides are
            // already assigned: j < v, j != i, and (j, v) assigned means
            // j < i (pairs for v are assigned in ascending i).
            for j in 0..i {
                let a = value; // d(i, v)
                let b = &d[j][v_idx(j, v, d)]; // d(j, v)
                let c = &d[i][j]; // d(i, j)
                if a > &(b + c) || b > &(a + c) || c > &(a + b) {
                    continue 'next;
                }
            }
            // Also triangles through earlier full vertices via (i, j) with
            // j < v and j > i are not yet assigned for v; nothing else to
            // check at this step.
            d[i][v] = value.clone();
            d[v][i] = value.clone();
            rec(pairs, pos + 1, dists, d, carrier_size, out);
        }
        d[i][v] = Rational::zero();
        d[v][i] = Rational::zero();
    }
    fn v_idx(_j: usize, v: usize, _d: &[Vec<Rational>]) -> usize {
        v
    }
    fn carrier_for(n: usize) -> Carrier {
        Carrier::new((0..n).map(|i| format!("x{i}"))).expect("labels are distinct")
    }
    rec(&pairs, 0, dists, &mut d, n, &mut out);
    out
}

/// The smallest cap for which the pseudometric construction succeeds:
/// for each pair at positive distance `d < 1`, the largest admissible
/// scale is `n_max = ceil(1/d) - 1` and it demands
/// `ceil(1 / (1/n_max - d))`.
pub fn minimal_sufficient_cap(m: &RationalPseudometric) -> u64 {
    let n = m.carrier().len();
    let mut cap = BigInt::one();
    for x in 0..n {
        for y in 0..n {
            let d = m.d(x, y);
            if d.is_zero() || d >= &Rational::one() {
                continue;
            }
            let n_max = ceil_to_int(&(Rational::one() / d)) - 1;
            let n_max: u64 = n_max.clone().try_into().expect("small scale");
            let margin = unit_fraction(n_max) - d;
            let required = ceil_to_int(&(Rational::one() / margin));
            cap = cap.max(required);
        }
    }
    cap.try_into().expect("grid caps are small")
}

/// Independent topology oracle for a pseudometric: scans all `2^n` subsets
/// and keeps those where every point has a ball of radius `1/k`, `k <=
/// cap`, inside the subset.
pub fn metric_rule_topology(m: &RationalPseudometric, cap: u64) -> FiniteTopology {
    let n = m.carrier().len();
    assert!(n <= 20, "scan bound");
    let radii: Vec<Rational> = (1..=cap).map(unit_fraction).collect();
    let balls: Vec<Vec<Subset>> = (0..n)
        .map(|x| radii.iter().map(|r| m.ball(x, r)).collect())
        .collect();
    let mut opens = Vec::new();
    for bits in 0u64..(1 << n) {
        let candidate = Subset::from_bits(bits);
        let ok = candidate
            .iter()
            .all(|x| balls[x].iter().any(|b| b.is_subset_of(candidate)));
        if ok {
            opens.push(candidate);
        }
    }
    FiniteTopology::from_masks(m.carrier().clone(), opens).expect("masks in range")
}

// ---------------------------------------------------------------------------
// Morphism corpus
// ---------------------------------------------------------------------------

pub struct MorphismCase {
    pub src: FibrousPreorder,
    pub dst: FibrousPreorder,
    pub f: Vec<usize>,
    pub g: Vec<Vec<usize>>,
}

/// The structure-preserving index family `g_j(x) = j`.
pub fn identity_g(fp: &FibrousPreorder) -> Vec<Vec<usize>> {
    (0..fp.magma().len())
        .map(|j| vec![j; fp.carrier().len()])
        .collect()
}

/// One random tuple that must satisfy the morphism condition, drawn from
/// five designed families.
pub fn random_true_morphism(rng: &mut impl Rng) -> MorphismCase {
    let fp = random_valid_fp(rng, 5);
    let n = fp.carrier().len();
    let k = fp.magma().len();
    match rng.gen_range(0..5) {
        // Identity.
        0 => MorphismCase {
            src: fp.clone(),
            dst: fp.clone(),
            f: (0..n).collect(),
            g: identity_g(&fp),
        },
        // Constant map: lands on the diagonal, which is related at every
        // index.
        1 => {
            let c = rng.gen_range(0..n);
            MorphismCase {
                src: fp.clone(),
                dst: fp.clone(),
                f: vec![c; n],
                g: identity_g(&fp),
            }
        }
        // Relabeling along a permutation.
        2 => {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                let j = rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            let mut inv = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            let dst = FibrousPreorder::from_fn(
                fp.carrier().clone(),
                fp.magma().clone(),
                |i, x, y| fp.le(i, inv[x], inv[y]),
                |i, x, y| fp.delta(i, inv[x], inv[y]).expect("pair is related"),
            )
            .expect("same size as the source");
            MorphismCase {
                src: fp.clone(),
                dst,
                f: perm,
                g: identity_g(&fp),
            }
        }
        // Collapse into the indiscrete structure: every pair is related
        // there, so any carrier map works.
        3 => {
            let dst = FibrousPreorder::from_fn(
                fp.carrier().clone(),
                fp.magma().clone(),
                |_, _, _| true,
                |_, _, _| fp.magma().unit(),
            )
            .expect("same size as the source");
            let f = (0..n).map(|_| rng.gen_range(0..n)).collect();
            MorphismCase {
                src: fp.clone(),
                dst,
                f,
                g: identity_g(&fp),
            }
        }
        // Identity with a product-twisted index family: g_j(x) = j * r, so
        // the hypothesis relation is contained in the conclusion relation.
        _ => {
            let rfac = rng.gen_range(0..k);
            let g = (0..k)
                .map(|j| vec![fp.magma().op(j, rfac); n])
                .collect();
            MorphismCase {
                src: fp.clone(),
                dst: fp.clone(),
                f: (0..n).collect(),
                g,
            }
        }
    }
}

/// Definitional continuity check: every open of the target pulls back to an
/// open of the source.
pub fn is_continuous(src: &FiniteTopology, dst: &FiniteTopology, f: &[usize]) -> bool {
    dst.opens().iter().all(|open| {
        let preimage =
            Subset::from_indices((0..f.len()).filter(|&x| open.contains(f[x])));
        src.is_open(preimage)
    })
}

// ---------------------------------------------------------------------------
// Interval corpus and sampling oracle
// ---------------------------------------------------------------------------

/// All rationals `p/q` in `[0, 1]` with `q <= q_max`, ascending.
pub fn farey(q_max: u64) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::new();
    for q in 1..=q_max {
        for p in 0..=q {
            out.push(Rational::new(BigInt::from(p), BigInt::from(q)));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Every valid interval with endpoints in `points`: all one-point intervals
/// plus all four closedness combinations over ordered endpoint pairs.
pub fn all_intervals(points: &[Rational]) -> Vec<RationalInterval> {
    let mut out = Vec::new();
    for p in points {
        out.push(RationalInterval::point(p.clone()));
    }
    for (i, lo) in points.iter().enumerate() {
        for hi in &points[i + 1..] {
            for lc in [false, true] {
                for uc in [false, true] {
                    out.push(
                        RationalInterval::new(lo.clone(), hi.clone(), lc, uc)
                            .expect("ordered endpoints"),
                    );
                }
            }
        }
    }
    out
}

/// Sampling oracle for right-openness of a finite union of intervals,
/// working on the raw component list. A violation can only happen at an
/// endpoint value (between consecutive endpoints membership is constant),
/// so it checks, for every endpoint in the set, one sample point half a
/// minimal gap to the right.
pub fn sampling_right_open(raw: &[RationalInterval]) -> bool {
    let in_s = |q: &Rational| raw.iter().any(|c| c.contains(q));
    let mut endpoints: Vec<Rational> = raw
        .iter()
        .flat_map(|c| [c.lower().clone(), c.upper().clone()])
        .collect();
    endpoints.sort();
    endpoints.dedup();
    let mut eps = Rational::one();
    for w in endpoints.windows(2) {
        let gap = &w[1] - &w[0];
        if !gap.is_zero() && gap < eps {
            eps = gap;
        }
    }
    let half = eps * r("1/2");
    endpoints.iter().all(|v| !in_s(v) || in_s(&(v + &half)))
}
