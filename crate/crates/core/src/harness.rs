//! Helly-property sweeps over operator families and seeded generators for
//! property testing.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::extremal::build_family;
use crate::field::{FieldSpec, Scalar};
use crate::invariant::{brute_force_common_invariant, distinct_spectrum_basis};
use crate::matrix::{express_in_span, Matrix};
use crate::spectra::{refine_indices, NamedOperator, OperatorFamily};
use crate::subspace::Subspace;

/// Which common structure a sweep looks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepKind {
    Eigenvector,
    InvariantSubspace,
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepKind::Eigenvector => "eigenvector",
            SweepKind::InvariantSubspace => "invariant_subspace",
        })
    }
}

/// Common structure found for one subset: basis vectors of the line or
/// subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetWitness {
    pub subset: Vec<usize>,
    pub basis: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HellyReport {
    /// Fingerprint of the family contents.
    pub family_id: String,
    pub kind: SweepKind,
    /// The Helly parameter `k` (or `l`) that was asked for.
    pub k: usize,
    /// Size of the subsets actually checked, `min(k, n)`.
    pub subset_size: usize,
    pub subsets_checked: u128,
    /// `n <= k`: only the full family is examined.
    pub degenerate: bool,
    /// The full family has the structure, so every subset does and the
    /// sweep was skipped.
    pub sweep_skipped: bool,
    /// Subsets (0-based, lexicographic) lacking the structure.
    pub failures: Vec<Vec<usize>>,
    pub full_family: Option<Vec<Vec<Scalar>>>,
    /// Every checked subset has the structure but the full family does not.
    pub implication_fails: bool,
    /// Smallest parameter at which a failing implication contradicts the
    /// known Helly bound, when one applies.
    pub contradiction_threshold: Option<usize>,
    /// The implication fails at a parameter where it is known to hold.
    pub contradiction: bool,
    /// Witnesses for every subset when the implication fails.
    pub counterexample: Option<Vec<SubsetWitness>>,
}

/// 64-bit FNV-1a over the canonical text of the family.
pub fn family_fingerprint(fam: &OperatorFamily) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |s: &str| {
        for b in s.bytes().chain(std::iter::once(0)) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    };
    feed(&fam.field().to_string());
    feed(&fam.dim().to_string());
    for op in fam.operators() {
        feed(&op.name);
        for row in op.matrix.to_strings() {
            for x in row {
                feed(&x);
            }
        }
    }
    format!("{h:016x}")
}

fn subsets_of(n: usize, m: usize, budget: &Budget) -> Result<Vec<Vec<usize>>> {
    let count = num_integer::binomial(n as u128, m as u128);
    Budget::check("operator subsets", count, budget.subsets)?;
    Ok((0..n).combinations(m).collect())
}

fn sweep<F>(
    fam: &OperatorFamily,
    kind: SweepKind,
    k: usize,
    threshold: Option<usize>,
    budget: &Budget,
    check: F,
) -> Result<HellyReport>
where
    F: Fn(&[usize]) -> Result<Option<Vec<Vec<Scalar>>>> + Sync,
{
    if k == 0 {
        return Err(Error::Precondition(
            "Helly parameter must be at least 1".into(),
        ));
    }
    let n = fam.len();
    let m = k.min(n);
    let all: Vec<usize> = (0..n).collect();
    let full_family = check(&all)?;
    let degenerate = n <= k;
    let mut report = HellyReport {
        family_id: family_fingerprint(fam),
        kind,
        k,
        subset_size: m,
        subsets_checked: 0,
        degenerate,
        sweep_skipped: false,
        failures: Vec::new(),
        full_family: None,
        implication_fails: false,
        contradiction_threshold: threshold,
        contradiction: false,
        counterexample: None,
    };
    if let Some(w) = full_family {
        report.full_family = Some(w);
        report.sweep_skipped = !degenerate;
        return Ok(report);
    }
    if degenerate {
        report.subsets_checked = 1;
        report.failures.push(all);
        return Ok(report);
    }
    let subsets = subsets_of(n, m, budget)?;
    let verdicts = subsets
        .par_iter()
        .map(|s| check(s))
        .collect::<Result<Vec<_>>>()?;
    report.subsets_checked = subsets.len() as u128;
    let mut witnesses = Vec::new();
    for (s, v) in subsets.into_iter().zip(verdicts) {
        match v {
            Some(basis) => witnesses.push(SubsetWitness { subset: s, basis }),
            None => report.failures.push(s),
        }
    }
    if report.failures.is_empty() {
        report.implication_fails = true;
        report.contradiction = threshold.is_some_and(|t| k >= t);
        report.counterexample = Some(witnesses);
    }
    Ok(report)
}

/// Checks whether every `min(k, n)`-subset having a common eigenvector
/// forces one for the whole family. The contradiction threshold is
/// `floor(3d/2)`.
pub fn helly_check_eigenvectors(
    fam: &OperatorFamily,
    k: usize,
    budget: &Budget,
) -> Result<HellyReport> {
    let table = fam.eigen_table()?;
    let threshold = 3 * fam.dim() / 2;
    sweep(
        fam,
        SweepKind::Eigenvector,
        k,
        Some(threshold),
        budget,
        |idx| {
            Ok(refine_indices(fam, &table, idx)?.first().map(|l| {
                l.subspace
                    .basis()
                    .row_vectors()
                    .take(1)
                    .map(<[Scalar]>::to_vec)
                    .collect()
            }))
        },
    )
}

/// Same sweep for common non-trivial invariant subspaces, by brute force
/// over a prime field. The contradiction threshold is `2d - 1` when some
/// member has `d` distinct eigenvalues in the field, and `d^2` otherwise.
pub fn helly_check_invariant(
    fam: &OperatorFamily,
    l: usize,
    budget: &Budget,
) -> Result<HellyReport> {
    if fam.field().order().is_none() {
        return Err(Error::RequiresPrimeField(fam.field()));
    }
    let d = fam.dim();
    let mut distinct = false;
    for op in fam.operators() {
        if distinct_spectrum_basis(&op.name, &op.matrix)?.is_some() {
            distinct = true;
            break;
        }
    }
    let threshold = if distinct { 2 * d - 1 } else { d * d };
    sweep(
        fam,
        SweepKind::InvariantSubspace,
        l,
        Some(threshold),
        budget,
        |idx| {
            let sub = fam.subfamily(idx)?;
            Ok(brute_force_common_invariant(&sub, budget)?.map(|s| s.basis_vectors()))
        },
    )
}

/// Random family generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Independent uniform matrices.
    Uniform,
    /// Matrices whose first column is `(c, 0, ..., 0)`, conjugated by one
    /// random change of basis `P`; `P e_1` is a common eigenvector.
    PlantedEigenvector,
    /// Block upper-triangular matrices with a random `s x s` leading block,
    /// `1 <= s < d`, conjugated by `P`; `P span(e_1..e_s)` is invariant.
    PlantedInvariant,
    /// Operators acting as a scalar on each block of one random partition of
    /// a random basis; the family commutes.
    BlockScalar,
    /// The sharpness family of dimension `d` conjugated by `P`, truncated or
    /// padded with uniform matrices to `n` members, with one member replaced
    /// by a uniform matrix.
    PerturbedSharpness,
}

impl Strategy {
    pub const ALL: [Strategy; 5] = [
        Strategy::Uniform,
        Strategy::PlantedEigenvector,
        Strategy::PlantedInvariant,
        Strategy::BlockScalar,
        Strategy::PerturbedSharpness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Uniform => "uniform",
            Strategy::PlantedEigenvector => "planted_eigenvector",
            Strategy::PlantedInvariant => "planted_invariant",
            Strategy::BlockScalar => "block_scalar",
            Strategy::PerturbedSharpness => "perturbed_sharpness",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        Strategy::ALL
            .into_iter()
            .find(|st| st.as_str() == key)
            .ok_or_else(|| Error::Precondition(format!("unknown strategy {s:?}")))
    }
}

fn conjugate(p: &Matrix, p_inv: &Matrix, m: &Matrix) -> Result<Matrix> {
    p.mul(m)?.mul(p_inv)
}

fn named(matrices: Vec<Matrix>, first: usize) -> Vec<NamedOperator> {
    matrices
        .into_iter()
        .enumerate()
        .map(|(i, matrix)| NamedOperator {
            name: format!("A{}", i + first),
            matrix,
        })
        .collect()
}

/// Deterministic family of `n` operators on K^d from `seed`.
pub fn generate_family(
    d: usize,
    field: FieldSpec,
    n: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<OperatorFamily> {
    if d < 2 || n == 0 {
        return Err(Error::Precondition(format!(
            "need d >= 2 and n >= 1, got d = {d}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ops = match strategy {
        Strategy::Uniform => (0..n)
            .map(|_| Matrix::random(field, d, d, &mut rng))
            .collect(),
        Strategy::PlantedEigenvector => {
            let p = Matrix::random_invertible(field, d, &mut rng);
            let p_inv = p.inverse()?;
            (0..n)
                .map(|_| {
                    let m = Matrix::from_fn(field, d, d, |r, c| {
                        if c == 0 && r > 0 {
                            field.zero()
                        } else {
                            field.random(&mut rng)
                        }
                    });
                    conjugate(&p, &p_inv, &m)
                })
                .collect::<Result<Vec<_>>>()?
        }
        Strategy::PlantedInvariant => {
            let s = rng.gen_range(1..d);
            let p = Matrix::random_invertible(field, d, &mut rng);
            let p_inv = p.inverse()?;
            (0..n)
                .map(|_| {
                    let m = Matrix::from_fn(field, d, d, |r, c| {
                        if c < s && r >= s {
                            field.zero()
                        } else {
                            field.random(&mut rng)
                        }
                    });
                    conjugate(&p, &p_inv, &m)
                })
                .collect::<Result<Vec<_>>>()?
        }
        Strategy::BlockScalar => {
            let p = Matrix::random_invertible(field, d, &mut rng);
            let p_inv = p.inverse()?;
            let blocks = rng.gen_range(1..=d);
            let mut block_of: Vec<usize> = (0..d).map(|i| i % blocks).collect();
            block_of.shuffle(&mut rng);
            (0..n)
                .map(|_| {
                    let scalars: Vec<Scalar> =
                        (0..blocks).map(|_| field.random(&mut rng)).collect();
                    let diag: Vec<Scalar> = block_of.iter().map(|&b| scalars[b].clone()).collect();
                    conjugate(&p, &p_inv, &Matrix::diagonal(field, &diag))
                })
                .collect::<Result<Vec<_>>>()?
        }
        Strategy::PerturbedSharpness => {
            let base = build_family(d, field, &Budget::default())?;
            let p = Matrix::random_invertible(field, d, &mut rng);
            let p_inv = p.inverse()?;
            let mut ops = Vec::with_capacity(n);
            for i in 0..n {
                ops.push(if i < base.len() {
                    conjugate(&p, &p_inv, base.matrix(i))?
                } else {
                    Matrix::random(field, d, d, &mut rng)
                });
            }
            let j = rng.gen_range(0..n);
            ops[j] = Matrix::random(field, d, d, &mut rng);
            ops
        }
    };
    OperatorFamily::new(field, d, named(ops, 1))
}

/// Connected components of `vectors` under linear dependence: two vectors
/// are joined when they lie on a common circuit.
fn dependence_components(field: FieldSpec, vectors: &[Vec<Scalar>]) -> Vec<Vec<usize>> {
    let k = vectors.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..k {
        let span: Vec<&[Scalar]> = basis.iter().map(|&b| vectors[b].as_slice()).collect();
        match express_in_span(field, &span, &vectors[i]) {
            None => basis.push(i),
            Some(coeffs) => {
                for (&b, c) in basis.iter().zip(&coeffs) {
                    if !c.is_zero() {
                        let (x, y) = (root(&mut parent, i), root(&mut parent, b));
                        parent[x] = y;
                    }
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..k {
        let r = root(&mut parent, i);
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups.into_iter().map(|(_, m)| m).collect()
}

/// A family together with leave-one-out common eigenvectors.
#[derive(Clone, Debug)]
pub struct LeaveOneOutInstance {
    pub family: OperatorFamily,
    /// `witnesses[i]` is an eigenvector of every operator except the i-th.
    pub witnesses: Vec<Vec<Scalar>>,
}

/// Random family of `n` operators on K^d with leave-one-out witnesses.
///
/// Witnesses are sparse vectors (one to three nonzero coordinates) in a
/// random basis. Operator `i` must have every `v_j`, `j != i`, as an
/// eigenvector, so it takes one random scalar per dependence component of
/// those vectors and acts randomly on a complement of their span.
pub fn leave_one_out_instance(
    d: usize,
    field: FieldSpec,
    n: usize,
    seed: u64,
) -> Result<LeaveOneOutInstance> {
    if d < 2 || n < 2 {
        return Err(Error::Precondition(format!(
            "need d >= 2 and n >= 2, got d = {d}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = Matrix::random_invertible(field, d, &mut rng);
    let witnesses: Vec<Vec<Scalar>> = (0..n)
        .map(|_| {
            let weight = rng.gen_range(1..=d.min(3));
            let mut coords: Vec<usize> = (0..d).collect();
            coords.shuffle(&mut rng);
            let mut u = vec![field.zero(); d];
            for &c in &coords[..weight] {
                u[c] = field.random_nonzero(&mut rng);
            }
            p.apply(&u)
        })
        .collect::<Result<_>>()?;
    let mut ops = Vec::with_capacity(n);
    for i in 0..n {
        let others: Vec<Vec<Scalar>> = (0..n)
            .filter(|&j| j != i)
            .map(|j| witnesses[j].clone())
            .collect();
        let mut cols: Vec<Vec<Scalar>> = Vec::new();
        let mut images: Vec<Vec<Scalar>> = Vec::new();
        for comp in dependence_components(field, &others) {
            let members: Vec<Vec<Scalar>> = comp.iter().map(|&j| others[j].clone()).collect();
            let c = field.random(&mut rng);
            for v in Subspace::span(field, d, &members)?.basis_vectors() {
                images.push(v.iter().map(|x| &c * x).collect());
                cols.push(v);
            }
        }
        let mut w = Subspace::span(field, d, &cols)?;
        for k in 0..d {
            let mut e = vec![field.zero(); d];
            e[k] = field.one();
            if !w.contains_vector(&e)? {
                cols.push(e);
                images.push((0..d).map(|_| field.random(&mut rng)).collect());
                w = Subspace::span(field, d, &cols)?;
            }
        }
        let b = Matrix::from_columns(field, d, &cols);
        let img = Matrix::from_columns(field, d, &images);
        ops.push(img.mul(&b.inverse()?)?);
    }
    let family = OperatorFamily::new(field, d, named(ops, 1))?;
    for (i, v) in witnesses.iter().enumerate() {
        for j in (0..n).filter(|&j| j != i) {
            if family.matrix(j).is_eigenvector(v)?.is_none() {
                return Err(Error::Internal(format!(
                    "generated witness {i} fails for operator {j}"
                )));
            }
        }
    }
    Ok(LeaveOneOutInstance { family, witnesses })
}

/// Input for the distinct-spectrum invariant-subspace pipeline.
#[derive(Clone, Debug)]
pub struct InvariantInstance {
    /// Operator `A0` first, then `A1 .. Ap`.
    pub family: OperatorFamily,
    pub a0_index: usize,
    /// 1-based coordinate sets in the eigenbasis of `A0`, one per `Aj`.
    pub supports: Vec<Vec<usize>>,
    /// `leave_one_out[j]` is invariant under every operator except `A{j+1}`.
    pub leave_one_out: Vec<Subspace>,
}

/// Builds an instance from explicit support sets.
///
/// In the eigenbasis `P` of `A0 = P diag(1..d) P^-1`, operator `A_m` may
/// have entry `(r, c)` nonzero only when every other support containing `c`
/// also contains `r`, so each `span(P e_i : i in M_j)` is invariant under
/// every operator but `A_j`. Allowed entries are random.
pub fn invariant_instance_from_supports(
    d: usize,
    field: FieldSpec,
    supports: &[Vec<usize>],
    seed: u64,
) -> Result<InvariantInstance> {
    if let Some(q) = field.order() {
        if q < d as u64 {
            return Err(Error::FieldTooSmall {
                field,
                reason: format!("need {d} distinct eigenvalues"),
            });
        }
    }
    for s in supports {
        if s.is_empty() || s.len() >= d || s.iter().any(|&i| i == 0 || i > d) {
            return Err(Error::InvalidSetFamily(format!(
                "{s:?} is not a non-empty proper subset of [{d}]"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = Matrix::random_invertible(field, d, &mut rng);
    let p_inv = p.inverse()?;
    let diag: Vec<Scalar> = (0..d).map(|i| field.from_i64(i as i64 + 1)).collect();
    let mut ops = vec![conjugate(&p, &p_inv, &Matrix::diagonal(field, &diag))?];
    for m in 0..supports.len() {
        let allowed = |r: usize, c: usize| {
            supports
                .iter()
                .enumerate()
                .all(|(j, s)| j == m || !s.contains(&(c + 1)) || s.contains(&(r + 1)))
        };
        let local = Matrix::from_fn(field, d, d, |r, c| {
            if allowed(r, c) {
                field.random(&mut rng)
            } else {
                field.zero()
            }
        });
        ops.push(conjugate(&p, &p_inv, &local)?);
    }
    let mut named_ops = named(ops, 0);
    named_ops[0].name = "A0".into();
    let family = OperatorFamily::new(field, d, named_ops)?;
    let leave_one_out = supports
        .iter()
        .map(|s| {
            let cols: Vec<Vec<Scalar>> = s.iter().map(|&i| p.column(i - 1)).collect();
            Subspace::span(field, d, &cols)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(InvariantInstance {
        family,
        a0_index: 0,
        supports: supports.to_vec(),
        leave_one_out,
    })
}

/// Instance with `2d - 1` random support sets.
pub fn invariant_instance(d: usize, field: FieldSpec, seed: u64) -> Result<InvariantInstance> {
    if d < 2 {
        return Err(Error::Precondition(format!(
            "dimension must be at least 2, got {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5e75);
    let supports: Vec<Vec<usize>> = (0..2 * d - 1)
        .map(|_| {
            let size = rng.gen_range(1..d);
            let mut idx: Vec<usize> = (1..=d).collect();
            idx.shuffle(&mut rng);
            let mut s = idx[..size].to_vec();
            s.sort_unstable();
            s
        })
        .collect();
    invariant_instance_from_supports(d, field, &supports, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::build_even_family;
    use crate::invariant::common_invariant_via_theorem4;
    use crate::spectra::{construct_from_leave_one_out, has_common_eigenvector};

    const Q: FieldSpec = FieldSpec::Rationals;
    const GF2: FieldSpec = FieldSpec::Prime(2);
    const GF3: FieldSpec = FieldSpec::Prime(3);

    #[test]
    fn sharpness_family_sweeps() {
        let fam = build_even_family(1, Q).unwrap();
        let b = Budget::default();
        let r = helly_check_eigenvectors(&fam, 2, &b).unwrap();
        assert!(r.failures.is_empty());
        assert!(r.full_family.is_none());
        assert!(r.implication_fails);
        assert!(!r.contradiction);
        assert_eq!(r.counterexample.as_ref().unwrap().len(), 3);

        let r = helly_check_eigenvectors(&fam, 3, &b).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.failures, vec![vec![0, 1, 2]]);
        assert!(!r.implication_fails && !r.contradiction);
    }

    #[test]
    fn upper_triangular_invariant_sweep() {
        let f = FieldSpec::Prime(3);
        let ops = vec![
            Matrix::from_i64s(f, &[&[1, 2], &[0, 1]]),
            Matrix::from_i64s(f, &[&[0, 1], &[0, 2]]),
            Matrix::from_i64s(f, &[&[2, 2], &[0, 0]]),
        ];
        let fam = OperatorFamily::from_matrices(f, 2, ops).unwrap();
        for l in 1..=4 {
            let r = helly_check_invariant(&fam, l, &Budget::default()).unwrap();
            assert!(r.failures.is_empty());
            assert!(r.full_family.is_some());
            assert_eq!(r.degenerate, l >= 3);
        }
        assert!(matches!(
            helly_check_invariant(&build_even_family(1, Q).unwrap(), 3, &Budget::default()),
            Err(Error::RequiresPrimeField(_))
        ));
    }

    #[test]
    fn generators_are_deterministic() {
        for st in Strategy::ALL {
            let a = generate_family(3, GF3, 4, 7, st).unwrap();
            let b = generate_family(3, GF3, 4, 7, st).unwrap();
            assert_eq!(a, b, "{st}");
            assert_eq!(st.as_str().parse::<Strategy>().unwrap(), st);
        }
        assert!("spiral".parse::<Strategy>().is_err());
    }

    #[test]
    fn planted_structure_present() {
        for seed in 0..20 {
            let f = generate_family(3, GF2, 5, seed, Strategy::PlantedEigenvector).unwrap();
            assert!(has_common_eigenvector(&f).unwrap().is_some());
            let f = generate_family(3, GF2, 5, seed, Strategy::PlantedInvariant).unwrap();
            assert!(brute_force_common_invariant(&f, &Budget::default())
                .unwrap()
                .is_some());
            let f = generate_family(3, Q, 4, seed, Strategy::BlockScalar).unwrap();
            assert!(has_common_eigenvector(&f).unwrap().is_some());
        }
    }

    #[test]
    fn leave_one_out_instances_feed_constructor() {
        for seed in 0..10 {
            for (d, f) in [(2, Q), (3, FieldSpec::Prime(7)), (4, Q)] {
                let n = 3 * d / 2 + 1;
                let inst = leave_one_out_instance(d, f, n, seed).unwrap();
                let out = construct_from_leave_one_out(&inst.family, &inst.witnesses).unwrap();
                assert!(inst.family.is_common_eigenvector(&out.vector).unwrap());
            }
        }
    }

    #[test]
    fn invariant_instances_feed_pipeline() {
        for seed in 0..10 {
            let inst = invariant_instance(3, FieldSpec::Prime(5), seed).unwrap();
            let cert = common_invariant_via_theorem4(
                &inst.family,
                inst.a0_index,
                &inst.leave_one_out,
                &Budget::default(),
            )
            .unwrap();
            assert!(cert.subspace.is_nontrivial());
        }
    }
}
