//! Common eigenvectors of operator families.
//!
//! Three routes live here: the refinement algorithm, which decides
//! existence and returns every maximal simultaneous eigenspace; a
//! projective brute-force oracle over prime fields; and the constructive
//! combination of leave-one-out witnesses into a global common eigenvector.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{express_in_span, Eigenpair, Matrix};
use crate::subspace::Subspace;

/// A square matrix with a name unique within its family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedOperator {
    pub name: String,
    pub matrix: Matrix,
}

/// A non-empty ordered list of named d x d operators over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFamily {
    field: FieldSpec,
    dim: usize,
    operators: Vec<NamedOperator>,
}

impl OperatorFamily {
    pub fn new(field: FieldSpec, dim: usize, operators: Vec<NamedOperator>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidFamily(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        if operators.is_empty() {
            return Err(Error::InvalidFamily("family is empty".into()));
        }
        let mut seen = HashSet::new();
        for op in &operators {
            if !seen.insert(op.name.as_str()) {
                return Err(Error::InvalidFamily(format!(
                    "duplicate operator name {:?}",
                    op.name
                )));
            }
            if op.matrix.field() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: op.matrix.field(),
                });
            }
            if op.matrix.rows() != dim || op.matrix.cols() != dim {
                return Err(Error::InvalidFamily(format!(
                    "operator {:?} is {}x{}, expected {dim}x{dim}",
                    op.name,
                    op.matrix.rows(),
                    op.matrix.cols()
                )));
            }
        }
        Ok(OperatorFamily {
            field,
            dim,
            operators,
        })
    }

    /// Names the matrices `A1, A2, ...`.
    pub fn from_matrices(field: FieldSpec, dim: usize, matrices: Vec<Matrix>) -> Result<Self> {
        let ops = matrices
            .into_iter()
            .enumerate()
            .map(|(i, matrix)| NamedOperator {
                name: format!("A{}", i + 1),
                matrix,
            })
            .collect();
        Self::new(field, dim, ops)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[NamedOperator] {
        &self.operators
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.operators[i].matrix
    }

    pub fn name(&self, i: usize) -> &str {
        &self.operators[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.operators.iter().position(|o| o.name == name)
    }

    /// The operators at `indices`, in the given order.
    pub fn subfamily(&self, indices: &[usize]) -> Result<OperatorFamily> {
        let ops = indices
            .iter()
            .map(|&i| {
                self.operators
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidFamily(format!("operator index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.field, self.dim, ops)
    }

    /// The family with operator `j` removed.
    pub fn without(&self, j: usize) -> Result<OperatorFamily> {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| i != j).collect();
        self.subfamily(&idx)
    }

    /// Eigen-decompositions of every operator, computed once.
    pub fn eigen_table(&self) -> Result<EigenTable> {
        let entries = self
            .operators
            .iter()
            .map(|o| o.matrix.eigen_decomposition())
            .collect::<Result<Vec<_>>>()?;
        Ok(EigenTable { entries })
    }

    /// Whether `v` is an eigenvector of every operator.
    pub fn is_common_eigenvector(&self, v: &[Scalar]) -> Result<bool> {
        for op in &self.operators {
            if op.matrix.is_eigenvector(v)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Cached in-field eigen-decompositions, indexed like the family.
#[derive(Clone, Debug)]
pub struct EigenTable {
    entries: Vec<Vec<Eigenpair>>,
}

impl EigenTable {
    pub fn get(&self, i: usize) -> &[Eigenpair] {
        &self.entries[i]
    }
}

/// A maximal simultaneous eigenspace: every nonzero vector is an eigenvector
/// of each operator with the recorded eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonEigenLine {
    pub subspace: Subspace,
    /// Operator name and eigenvalue, in processing order.
    pub assignment: Vec<(String, Scalar)>,
}

impl CommonEigenLine {
    pub fn eigenvalue_of(&self, name: &str) -> Option<&Scalar> {
        self.assignment
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    /// Checks each basis vector against each operator.
    pub fn verify(&self, fam: &OperatorFamily) -> Result<bool> {
        if self.subspace.dim() == 0 {
            return Ok(false);
        }
        for op in fam.operators() {
            let Some(lambda) = self.eigenvalue_of(&op.name) else {
                return Ok(false);
            };
            for b in self.subspace.basis().row_vectors() {
                if op.matrix.is_eigenvector(b)?.as_ref() != Some(lambda) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for CommonEigenLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.subspace)?;
        for (i, (n, v)) in self.assignment.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}: {v}")?;
        }
        write!(f, "]")
    }
}

/// Refines the full space by the eigenspaces of each operator in turn.
/// The family has a common eigenvector iff the result is non-empty.
pub fn common_eigen_refinement(fam: &OperatorFamily) -> Result<Vec<CommonEigenLine>> {
    let table = fam.eigen_table()?;
    let all: Vec<usize> = (0..fam.len()).collect();
    refine_indices(fam, &table, &all)
}

/// Refinement restricted to the operators at `indices`, reusing a
/// precomputed eigen table.
pub fn refine_indices(
    fam: &OperatorFamily,
    table: &EigenTable,
    indices: &[usize],
) -> Result<Vec<CommonEigenLine>> {
    let mut lines = vec![CommonEigenLine {
        subspace: Subspace::full(fam.field(), fam.dim()),
        assignment: Vec::new(),
    }];
    for &i in indices {
        let mut next = Vec::new();
        for line in &lines {
            for pair in table.get(i) {
                let meet = line.subspace.intersect(&pair.space)?;
                if meet.dim() == 0 {
                    continue;
                }
                let mut assignment = line.assignment.clone();
                assignment.push((fam.name(i).to_string(), pair.value.clone()));
                next.push(CommonEigenLine {
                    subspace: meet,
                    assignment,
                });
            }
        }
        lines = next;
        if lines.is_empty() {
            break;
        }
    }
    Ok(lines)
}

/// First maximal common eigenspace, if any.
pub fn has_common_eigenvector(fam: &OperatorFamily) -> Result<Option<CommonEigenLine>> {
    Ok(common_eigen_refinement(fam)?.into_iter().next())
}

/// Number of projective points of GF(p)^d.
pub fn projective_point_count(p: u64, d: usize) -> u128 {
    let p = p as u128;
    (p.pow(d as u32) - 1) / (p - 1)
}

/// The `index`-th projective point of GF(p)^d, ordered by the position of
/// the leading 1 and then lexicographically on the trailing coordinates.
pub fn projective_point_at(field: FieldSpec, d: usize, mut index: u128) -> Vec<Scalar> {
    let p = field.order().expect("prime field") as u128;
    for lead in 0..d {
        let block = p.pow((d - lead - 1) as u32);
        if index < block {
            let mut v = vec![field.zero(); d];
            v[lead] = field.one();
            for slot in (lead + 1..d).rev() {
                v[slot] = field.element((index % p) as u64);
                index /= p;
            }
            return v;
        }
        index -= block;
    }
    panic!("projective point index out of range");
}

/// Every projective point that is an eigenvector of all operators.
/// Enumeration may be split across rayon workers; order is preserved.
pub fn brute_force_common_eigenvectors(
    fam: &OperatorFamily,
    budget: &Budget,
) -> Result<Vec<Vec<Scalar>>> {
    let field = fam.field();
    let Some(p) = field.order() else {
        return Err(Error::RequiresPrimeField(field));
    };
    let d = fam.dim();
    let total = (p as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    Budget::check(
        "projective enumeration p^d",
        total,
        budget.projective_points,
    )?;
    let count = projective_point_count(p, d);
    let hits: Vec<Option<Vec<Scalar>>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let v = projective_point_at(field, d, i as u128);
            match fam.is_common_eigenvector(&v) {
                Ok(true) => Some(v),
                _ => None,
            }
        })
        .collect();
    Ok(hits.into_iter().flatten().collect())
}

/// Canonical projective points covered by a set of refinement lines,
/// sorted in enumeration order.
pub fn points_of_lines(lines: &[CommonEigenLine]) -> Result<Vec<Vec<Scalar>>> {
    let mut pts = Vec::new();
    for l in lines {
        pts.extend(l.subspace.projective_points()?);
    }
    pts.sort_by(|a, b| projective_order(a, b));
    pts.dedup();
    Ok(pts)
}

fn projective_order(a: &[Scalar], b: &[Scalar]) -> std::cmp::Ordering {
    let lead = |v: &[Scalar]| v.iter().position(|x| !x.is_zero()).unwrap_or(v.len());
    lead(a).cmp(&lead(b)).then_with(|| a.cmp(b))
}

/// One dependent witness expressed in the independent block:
/// `v_index = sum over terms (j, mu) of mu * v_j`, every `mu` nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessDecomposition {
    pub index: usize,
    pub terms: Vec<(usize, Scalar)>,
}

impl WitnessDecomposition {
    /// Indices with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.terms.iter().map(|(j, _)| *j).collect()
    }

    pub fn coefficient(&self, j: usize) -> Option<&Scalar> {
        self.terms.iter().find(|(k, _)| *k == j).map(|(_, c)| c)
    }
}

/// Leave-one-out witnesses and their decomposition over a maximal
/// linearly independent subset. Indices are 0-based family positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeaveOneOutCertificate {
    pub witnesses: Vec<Vec<Scalar>>,
    pub independent: Vec<usize>,
    pub decompositions: Vec<WitnessDecomposition>,
}

impl LeaveOneOutCertificate {
    /// Re-checks every stored claim exactly.
    pub fn verify(&self, fam: &OperatorFamily) -> Result<bool> {
        for (i, v) in self.witnesses.iter().enumerate() {
            if v.iter().all(Scalar::is_zero) {
                return Ok(false);
            }
            for j in (0..fam.len()).filter(|&j| j != i) {
                if fam.matrix(j).is_eigenvector(v)?.is_none() {
                    return Ok(false);
                }
            }
        }
        let field = fam.field();
        for dec in &self.decompositions {
            let mut sum = vec![field.zero(); fam.dim()];
            for (j, mu) in &dec.terms {
                if mu.is_zero() || !self.independent.contains(j) {
                    return Ok(false);
                }
                for (s, x) in sum.iter_mut().zip(&self.witnesses[*j]) {
                    *s = &*s + &(mu * x);
                }
            }
            if sum != self.witnesses[dec.index] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// How the common eigenvector was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructionRoute {
    /// Some dependent witness was a multiple of a single independent one.
    Singleton {
        dependent: usize,
        independent: usize,
    },
    /// Two dependent witnesses with overlapping supports were combined.
    Combination {
        pair: (usize, usize),
        pivot: usize,
        zero_set: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeaveOneOutConstruction {
    pub vector: Vec<Scalar>,
    pub route: ConstructionRoute,
    pub certificate: LeaveOneOutCertificate,
}

/// Combines leave-one-out witnesses (`witnesses[i]` is a common eigenvector
/// of every operator except the i-th) into a common eigenvector of the
/// whole family. Requires `n >= floor(3d/2) + 1`.
pub fn construct_from_leave_one_out(
    fam: &OperatorFamily,
    witnesses: &[Vec<Scalar>],
) -> Result<LeaveOneOutConstruction> {
    let n = fam.len();
    let d = fam.dim();
    let threshold = 3 * d / 2 + 1;
    if n < threshold {
        return Err(Error::Precondition(format!(
            "family has {n} operators, need at least {threshold} for d = {d}"
        )));
    }
    if witnesses.len() != n {
        return Err(Error::InvalidWitness(format!(
            "{} witnesses for {n} operators",
            witnesses.len()
        )));
    }
    for (i, v) in witnesses.iter().enumerate() {
        if v.len() != d {
            return Err(Error::InvalidWitness(format!(
                "witness {i} has length {}",
                v.len()
            )));
        }
        if v.iter().all(Scalar::is_zero) {
            return Err(Error::InvalidWitness(format!(
                "witness {i} is the zero vector"
            )));
        }
        for j in (0..n).filter(|&j| j != i) {
            if fam.matrix(j).is_eigenvector(v)?.is_none() {
                return Err(Error::InvalidWitness(format!(
                    "witness for {} is not an eigenvector of {}",
                    fam.name(i),
                    fam.name(j)
                )));
            }
        }
    }
    let field = fam.field();

    // Maximal independent subset, scanning from the back so the block is a
    // suffix whenever the witnesses allow it.
    let mut independent: Vec<usize> = Vec::new();
    let mut span = Subspace::zero(field, d);
    for i in (0..n).rev() {
        if !span.contains_vector(&witnesses[i])? {
            span = span.sum(&Subspace::span(field, d, &[witnesses[i].clone()])?)?;
            independent.push(i);
        }
    }
    independent.reverse();
    let basis: Vec<&[Scalar]> = independent
        .iter()
        .map(|&j| witnesses[j].as_slice())
        .collect();

    let mut decompositions = Vec::new();
    for i in (0..n).filter(|i| !independent.contains(i)) {
        let mu = express_in_span(field, &basis, &witnesses[i])
            .ok_or_else(|| Error::Internal("dependent witness outside the span".into()))?;
        let terms: Vec<(usize, Scalar)> = independent
            .iter()
            .zip(mu)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&j, c)| (j, c))
            .collect();
        decompositions.push(WitnessDecomposition { index: i, terms });
    }
    let certificate = LeaveOneOutCertificate {
        witnesses: witnesses.to_vec(),
        independent,
        decompositions,
    };

    let verified =
        |vector: Vec<Scalar>, route: ConstructionRoute, certificate: LeaveOneOutCertificate| {
            if vector.iter().any(|x| !x.is_zero()) && fam.is_common_eigenvector(&vector)? {
                Ok(LeaveOneOutConstruction {
                    vector,
                    route,
                    certificate,
                })
            } else {
                Err(Error::HypothesisViolated(
                    "combined vector is not a common eigenvector".into(),
                ))
            }
        };

    for dec in &certificate.decompositions {
        match dec.terms.as_slice() {
            [] => {
                return Err(Error::HypothesisViolated(format!(
                    "witness {} has empty support",
                    dec.index
                )))
            }
            [(m, _)] => {
                let route = ConstructionRoute::Singleton {
                    dependent: dec.index,
                    independent: *m,
                };
                let v = witnesses[*m].clone();
                return verified(v, route, certificate.clone());
            }
            _ => {}
        }
    }

    let decs = &certificate.decompositions;
    let mut chosen = None;
    'scan: for a in 0..decs.len() {
        for b in a + 1..decs.len() {
            let sb = decs[b].support();
            if let Some(l) = decs[a]
                .support()
                .into_iter()
                .filter(|j| sb.contains(j))
                .min()
            {
                chosen = Some((a, b, l));
                break 'scan;
            }
        }
    }
    let Some((a, b, l)) = chosen else {
        return Err(Error::HypothesisViolated(
            "no two dependent witnesses share a support index".into(),
        ));
    };
    let (first, second) = (&decs[a], &decs[b]);
    let mu1 = |j: usize| {
        first
            .coefficient(j)
            .cloned()
            .unwrap_or_else(|| field.zero())
    };
    let mu2 = |j: usize| {
        second
            .coefficient(j)
            .cloned()
            .unwrap_or_else(|| field.zero())
    };
    let (mu1_l, mu2_l) = (mu1(l), mu2(l));
    let shared: Vec<usize> = first
        .support()
        .into_iter()
        .filter(|j| second.support().contains(j))
        .collect();
    // Indices where the combination mu2_l * v1 - mu1_l * v2 cancels.
    let zero_set: Vec<usize> = shared
        .into_iter()
        .filter(|&j| &mu2_l * &mu1(j) == &mu1_l * &mu2(j))
        .collect();
    let mut w = vec![field.zero(); d];
    for &j in &zero_set {
        let c = &mu2_l * &mu1(j);
        for (s, x) in w.iter_mut().zip(&witnesses[j]) {
            *s = &*s + &(&c * x);
        }
    }
    let route = ConstructionRoute::Combination {
        pair: (first.index, second.index),
        pivot: l,
        zero_set,
    };
    verified(w, route, certificate.clone())
}
