//! Common invariant subspaces.
//!
//! For an operator with `d` distinct eigenvalues in the field, every
//! invariant subspace is spanned by a subset of its eigenvectors. The
//! pipeline here turns leave-one-out invariant subspaces into support sets
//! over that eigenbasis, finds a redundant union among them and returns the
//! corresponding coordinate span, which is then invariant under the whole
//! family.

use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::{express_in_span, Matrix};
use crate::set_family::{find_redundant_union_witness, mask_elements, RedundantUnion, SetFamily};
use crate::spectra::OperatorFamily;
use crate::subspace::Subspace;

/// Eigenbasis of an operator with `d` pairwise distinct eigenvalues in K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctSpectrumBasis {
    pub operator: String,
    pub matrix: Matrix,
    /// `(eigenvalue, eigenvector)` sorted by the scalar ordering.
    pub eigenpairs: Vec<(Scalar, Vec<Scalar>)>,
    /// Columns are the eigenvectors.
    pub change_of_basis: Matrix,
    pub inverse: Matrix,
}

impl DistinctSpectrumBasis {
    pub fn dim(&self) -> usize {
        self.eigenpairs.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.matrix.field()
    }

    /// `span(v_i : i in support)`.
    pub fn span_of(&self, support: &SupportSet) -> Subspace {
        let vectors: Vec<Vec<Scalar>> = support
            .indices()
            .iter()
            .map(|&i| self.eigenpairs[i - 1].1.clone())
            .collect();
        Subspace::span(self.field(), self.dim(), &vectors).expect("eigenvectors have length d")
    }
}

/// Returns the eigenbasis when `a` has `d` distinct eigenvalues in K.
pub fn distinct_spectrum_basis(name: &str, a: &Matrix) -> Result<Option<DistinctSpectrumBasis>> {
    let eig = a.eigen_decomposition()?;
    let d = a.rows();
    if eig.len() != d {
        return Ok(None);
    }
    let eigenpairs: Vec<(Scalar, Vec<Scalar>)> = eig
        .into_iter()
        .map(|e| {
            debug_assert_eq!(e.space.dim(), 1);
            (e.value, e.space.basis().row(0).to_vec())
        })
        .collect();
    let cols: Vec<Vec<Scalar>> = eigenpairs.iter().map(|(_, v)| v.clone()).collect();
    let change_of_basis = Matrix::from_columns(a.field(), d, &cols);
    let inverse = change_of_basis.inverse()?;
    Ok(Some(DistinctSpectrumBasis {
        operator: name.to_string(),
        matrix: a.clone(),
        eigenpairs,
        change_of_basis,
        inverse,
    }))
}

/// A non-empty set of 1-based eigenbasis indices, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportSet(Vec<usize>);

impl SupportSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        SupportSet(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// The index set `I` with `h = span(v_i : i in I)`.
///
/// Coordinates of h's basis in the eigenbasis are read off and their
/// nonzero positions collected; the result is then checked to span exactly
/// `h`, which holds for every invariant subspace of a distinct-spectrum
/// operator.
pub fn invariant_support(basis: &DistinctSpectrumBasis, h: &Subspace) -> Result<SupportSet> {
    if !h.is_nontrivial() {
        return Err(Error::TrivialSubspace {
            dim: h.dim(),
            ambient: h.ambient_dim(),
        });
    }
    if !basis.matrix.is_invariant(h)? {
        return Err(Error::NotInvariant(basis.operator.clone()));
    }
    let mut support = Vec::new();
    for b in h.basis().row_vectors() {
        let coords = basis.inverse.apply(b)?;
        support.extend(
            coords
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, _)| i + 1),
        );
    }
    let support = SupportSet::new(support);
    if support.len() != h.dim() || basis.span_of(&support) != *h {
        return Err(Error::Internal(format!(
            "invariant subspace {h} is not a coordinate span of the eigenbasis"
        )));
    }
    Ok(support)
}

/// Output of [`common_invariant_via_theorem4`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonInvariantCertificate {
    pub subspace: Subspace,
    pub basis: DistinctSpectrumBasis,
    /// Operator index (into the family) and support set of each
    /// leave-one-out subspace.
    pub supports: Vec<(usize, SupportSet)>,
    /// Family operator indices forming the redundant union.
    pub witness_operators: Vec<usize>,
    pub union: SupportSet,
}

/// Builds a common non-trivial invariant subspace from leave-one-out data.
///
/// `leave_one_out` lists, in family order, one subspace per operator other
/// than `a0_index`; the subspace listed for operator `j` must be
/// non-trivial and invariant under every operator except `j`. When no
/// redundant union exists among the support sets the error
/// [`Error::NoRedundantUnion`] is returned; with `2d - 1` or more
/// subspaces that cannot happen.
pub fn common_invariant_via_theorem4(
    fam: &OperatorFamily,
    a0_index: usize,
    leave_one_out: &[Subspace],
    budget: &Budget,
) -> Result<CommonInvariantCertificate> {
    let n = fam.len();
    let d = fam.dim();
    if a0_index >= n {
        return Err(Error::Precondition(format!(
            "operator index {a0_index} out of range"
        )));
    }
    let others: Vec<usize> = (0..n).filter(|&j| j != a0_index).collect();
    if leave_one_out.len() != others.len() {
        return Err(Error::Precondition(format!(
            "{} leave-one-out subspaces for {} operators besides {}",
            leave_one_out.len(),
            others.len(),
            fam.name(a0_index)
        )));
    }
    let basis =
        distinct_spectrum_basis(fam.name(a0_index), fam.matrix(a0_index))?.ok_or_else(|| {
            Error::Precondition(format!(
                "{} does not have {d} distinct eigenvalues in {}",
                fam.name(a0_index),
                fam.field()
            ))
        })?;

    let mut supports = Vec::with_capacity(others.len());
    for (&j, h) in others.iter().zip(leave_one_out) {
        if h.field() != fam.field() || h.ambient_dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "subspace for {} is not a subspace of {}^{d}",
                fam.name(j),
                fam.field()
            )));
        }
        if !h.is_nontrivial() {
            return Err(Error::TrivialSubspace {
                dim: h.dim(),
                ambient: d,
            });
        }
        for m in (0..n).filter(|&m| m != j) {
            if !fam.matrix(m).is_invariant(h)? {
                return Err(Error::Precondition(format!(
                    "subspace left out for {} is not invariant under {}",
                    fam.name(j),
                    fam.name(m)
                )));
            }
        }
        supports.push((j, invariant_support(&basis, h)?));
    }

    let members: Vec<Vec<usize>> = supports.iter().map(|(_, s)| s.indices().to_vec()).collect();
    let set_family = SetFamily::new(d, &members)?;
    let Some(RedundantUnion {
        members: picked,
        union,
    }) = find_redundant_union_witness(&set_family, budget)?
    else {
        return Err(Error::NoRedundantUnion {
            members: set_family.len(),
            ground: d,
        });
    };
    let union = SupportSet::new(mask_elements(union));
    let subspace = basis.span_of(&union);
    if !subspace.is_nontrivial() {
        return Err(Error::Internal(
            "redundant union produced a trivial span".into(),
        ));
    }
    for op in fam.operators() {
        if !op.matrix.is_invariant(&subspace)? {
            return Err(Error::HypothesisViolated(format!(
                "combined span is not invariant under {}",
                op.name
            )));
        }
    }
    Ok(CommonInvariantCertificate {
        subspace,
        basis,
        witness_operators: picked.iter().map(|&k| supports[k].0).collect(),
        supports,
        union,
    })
}

/// Operators whose matrices span every family matrix, chosen greedily, with
/// the coefficients reconstructing each member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearBasis {
    pub indices: Vec<usize>,
    /// `coefficients[i][k]` multiplies operator `indices[k]` in the
    /// expression for operator `i`.
    pub coefficients: Vec<Vec<Scalar>>,
}

/// Greedy rank extension over vectorized matrices: at most `d^2` operators
/// whose span contains the whole family.
pub fn operator_family_linear_basis(fam: &OperatorFamily) -> Result<LinearBasis> {
    let field = fam.field();
    let d = fam.dim();
    let vecs: Vec<Vec<Scalar>> = fam
        .operators()
        .iter()
        .map(|o| o.matrix.vectorize())
        .collect();
    let mut span = Subspace::zero(field, d * d);
    let mut indices = Vec::new();
    for (i, v) in vecs.iter().enumerate() {
        if !span.contains_vector(v)? {
            span = span.sum(&Subspace::span(field, d * d, std::slice::from_ref(v))?)?;
            indices.push(i);
        }
    }
    let chosen: Vec<&[Scalar]> = indices.iter().map(|&i| vecs[i].as_slice()).collect();
    let coefficients = vecs
        .iter()
        .map(|v| {
            express_in_span(field, &chosen, v)
                .ok_or_else(|| Error::Internal("family member outside the greedy span".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LinearBasis {
        indices,
        coefficients,
    })
}

/// Gaussian binomial `[d choose k]_p`: the number of k-dimensional
/// subspaces of GF(p)^d.
pub fn gaussian_binomial(p: u64, d: usize, k: usize) -> u128 {
    if k > d {
        return 0;
    }
    let p = p as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(p.pow((d - i) as u32) - 1);
        den = den.saturating_mul(p.pow((i + 1) as u32) - 1);
    }
    num / den
}

/// Number of non-trivial subspaces of GF(p)^d.
pub fn nontrivial_subspace_count(p: u64, d: usize) -> u128 {
    (1..d).map(|k| gaussian_binomial(p, d, k)).sum()
}

/// RREF shapes of k-dimensional subspaces with fixed pivot columns.
struct PivotPattern {
    field: FieldSpec,
    d: usize,
    pivots: Vec<usize>,
    /// (row, column) slots right of each row's pivot, excluding pivot columns.
    free: Vec<(usize, usize)>,
}

impl PivotPattern {
    fn new(field: FieldSpec, d: usize, pivots: Vec<usize>) -> Self {
        let free = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                (pc + 1..d)
                    .filter(|c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        PivotPattern {
            field,
            d,
            pivots,
            free,
        }
    }

    fn count(&self) -> u64 {
        let p = self.field.order().expect("prime field");
        p.pow(self.free.len() as u32)
    }

    /// The `idx`-th subspace; the first free slot is the most significant digit.
    fn build(&self, mut idx: u64) -> Subspace {
        let p = self.field.order().expect("prime field");
        let mut rows = vec![vec![self.field.zero(); self.d]; self.pivots.len()];
        for (r, &pc) in self.pivots.iter().enumerate() {
            rows[r][pc] = self.field.one();
        }
        for &(r, c) in self.free.iter().rev() {
            rows[r][c] = self.field.element(idx % p);
            idx /= p;
        }
        Subspace::span(self.field, self.d, &rows).expect("rows have length d")
    }
}

/// Pivot patterns of non-trivial subspaces, by dimension and then
/// lexicographically on pivot columns.
fn patterns(field: FieldSpec, d: usize) -> impl Iterator<Item = PivotPattern> {
    (1..d).flat_map(move |k| {
        (0..d)
            .combinations(k)
            .map(move |pv| PivotPattern::new(field, d, pv))
    })
}

/// First non-trivial subspace (in enumeration order) invariant under every
/// operator, over a prime field.
pub fn brute_force_common_invariant(
    fam: &OperatorFamily,
    budget: &Budget,
) -> Result<Option<Subspace>> {
    let field = fam.field();
    let Some(p) = field.order() else {
        return Err(Error::RequiresPrimeField(field));
    };
    let total = nontrivial_subspace_count(p, fam.dim());
    Budget::check("non-trivial subspace enumeration", total, budget.subspaces)?;
    let invariant = |s: &Subspace| {
        fam.operators()
            .iter()
            .all(|o| o.matrix.is_invariant(s).unwrap_or(false))
    };
    for pattern in patterns(field, fam.dim()) {
        let hit = (0..pattern.count())
            .into_par_iter()
            .map(|i| pattern.build(i))
            .find_first(|s| invariant(s));
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Every non-trivial subspace of GF(p)^d in enumeration order.
pub fn all_nontrivial_subspaces(
    field: FieldSpec,
    d: usize,
    budget: &Budget,
) -> Result<Vec<Subspace>> {
    let Some(p) = field.order() else {
        return Err(Error::RequiresPrimeField(field));
    };
    Budget::check(
        "non-trivial subspace enumeration",
        nontrivial_subspace_count(p, d),
        budget.subspaces,
    )?;
    Ok(patterns(field, d)
        .flat_map(|pattern| (0..pattern.count()).map(move |i| pattern.build(i)))
        .collect())
}
