//! Families of `floor(3d/2)` operators in which every operator but one
//! shares an eigenvector while the whole family has none.
//!
//! Even dimension `d = 2n`: take vectors `e_1, ..., e_{3n}` where the
//! `e_j` with `3 ∤ j` are the standard basis of K^{2n} and
//! `e_{3i} = e_{3i-2} + e_{3i-1}`. Operator `A_j` fixes
//! `H_j = span(e_i : i ≠ j, j + f(j))` pointwise and kills `e_j`, with
//! `f(j) = 1` for `j ≡ 1, 2 (mod 3)` and `f(j) = -2` for `j ≡ 0`. Then
//! `e_{j+f(j)}` is an eigenvector of every operator except `A_j`.

use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;
use crate::spectra::{
    brute_force_common_eigenvectors, points_of_lines, refine_indices, OperatorFamily,
};
use crate::subspace::Subspace;

/// The index shift `f(j)` (1-based `j`).
pub fn index_shift(j: usize) -> isize {
    if j.is_multiple_of(3) {
        -2
    } else {
        1
    }
}

/// `j + f(j)`, the index of the shared eigenvector of all operators but `A_j`.
pub fn partner(j: usize) -> usize {
    (j as isize + index_shift(j)) as usize
}

/// The vector system and eigenspace pairs of the even construction.
#[derive(Clone, Debug)]
pub struct SharpnessSpec {
    field: FieldSpec,
    n: usize,
    vectors: Vec<Vec<Scalar>>,
}

impl SharpnessSpec {
    pub fn new(n: usize, field: FieldSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("sharpness family needs n >= 1".into()));
        }
        let d = 2 * n;
        let unit = |k: usize| {
            let mut v = vec![field.zero(); d];
            v[k] = field.one();
            v
        };
        let mut vectors = Vec::with_capacity(3 * n);
        for i in 0..n {
            let a = unit(2 * i);
            let b = unit(2 * i + 1);
            let c = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            vectors.extend([a, b, c]);
        }
        Ok(SharpnessSpec { field, n, vectors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// `e_j`, 1-based.
    pub fn e(&self, j: usize) -> &[Scalar] {
        &self.vectors[j - 1]
    }

    /// `H_j`, the eigenvalue-1 eigenspace of `A_j`.
    pub fn h_space(&self, j: usize) -> Subspace {
        let skip = [j, partner(j)];
        let vs: Vec<Vec<Scalar>> = (1..=3 * self.n)
            .filter(|i| !skip.contains(i))
            .map(|i| self.e(i).to_vec())
            .collect();
        Subspace::span(self.field, self.dim(), &vs).expect("vectors of length 2n")
    }

    /// `L_j = span(e_j)`, the kernel of `A_j`.
    pub fn l_space(&self, j: usize) -> Subspace {
        Subspace::span(self.field, self.dim(), &[self.e(j).to_vec()]).expect("vector of length 2n")
    }

    /// The operator acting as 1 on `H_j` and 0 on `L_j`, as `B D B^-1` with
    /// `B` holding a basis of `H_j` followed by `e_j`.
    pub fn operator(&self, j: usize) -> Result<Matrix> {
        let d = self.dim();
        let h = self.h_space(j);
        let l = self.l_space(j);
        if h.dim() + l.dim() != d || h.intersect(&l)?.dim() != 0 {
            return Err(Error::ConstructionFailed(format!(
                "H_{j} and L_{j} do not form a direct sum"
            )));
        }
        let mut cols = h.basis_vectors();
        cols.push(self.e(j).to_vec());
        let b = Matrix::from_columns(self.field, d, &cols);
        let diag: Vec<Scalar> = (0..d)
            .map(|k| {
                if k + 1 < d {
                    self.field.one()
                } else {
                    self.field.zero()
                }
            })
            .collect();
        b.mul(&Matrix::diagonal(self.field, &diag))?
            .mul(&b.inverse()?)
    }
}

/// The `3n` operators on K^{2n}, named `A1 .. A{3n}`.
pub fn build_even_family(n: usize, field: FieldSpec) -> Result<OperatorFamily> {
    let spec = SharpnessSpec::new(n, field)?;
    let ops = (1..=3 * n)
        .map(|j| spec.operator(j))
        .collect::<Result<Vec<_>>>()?;
    OperatorFamily::from_matrices(field, 2 * n, ops)
}

/// Eigenvalue given to `e_{2n+1}` under the embedded even operators; it must
/// differ from 0 and 1.
const EXTRA_EIGENVALUE: i64 = 2;

/// `3n + 1` operators on K^{2n+1}.
///
/// The even operators are embedded block-diagonally with `e_{2n+1}` as an
/// eigenvector of eigenvalue 2, so a common eigenvector with a nonzero last
/// coordinate would need eigenvalue 2 on the first block too, which the
/// even operators (eigenvalues 0 and 1) do not have. The extra operator acts
/// as the scalar `i` on each pair block `span(e_{3i-2}, e_{3i-1})` and sends
/// `e_{2n+1}` to `e_{2n+1} + e_1`. The result is verified before returning.
pub fn build_odd_family(n: usize, field: FieldSpec, budget: &Budget) -> Result<OperatorFamily> {
    if n == 0 {
        return Err(Error::Precondition(
            "odd sharpness family needs n >= 1".into(),
        ));
    }
    if let Some(p) = field.order() {
        if p < 3 {
            return Err(Error::FieldTooSmall {
                field,
                reason: "no eigenvalue outside {0, 1} for the extra coordinate".into(),
            });
        }
        if (n as u64) >= p {
            return Err(Error::FieldTooSmall {
                field,
                reason: format!("cannot choose {n} distinct nonzero block scalars"),
            });
        }
    }
    let spec = SharpnessSpec::new(n, field)?;
    let d = 2 * n + 1;
    let mut ops = Vec::with_capacity(3 * n + 1);
    let extra = field.from_i64(EXTRA_EIGENVALUE);
    for j in 1..=3 * n {
        let a = spec.operator(j)?;
        ops.push(Matrix::from_fn(field, d, d, |r, c| {
            if r < d - 1 && c < d - 1 {
                a[(r, c)].clone()
            } else if r == d - 1 && c == d - 1 {
                extra.clone()
            } else {
                field.zero()
            }
        }));
    }
    ops.push(Matrix::from_fn(field, d, d, |r, c| {
        if r == c && r < d - 1 {
            field.from_i64((r / 2 + 1) as i64)
        } else if r == c || (r == 0 && c == d - 1) {
            field.one()
        } else {
            field.zero()
        }
    }));
    let fam = OperatorFamily::from_matrices(field, d, ops)?;
    let report = verify_sharpness(&fam, budget)?;
    if !report.sharp || report.oracle_agrees == Some(false) {
        return Err(Error::ConstructionFailed(format!(
            "odd family for n = {n} over {field} is not sharp"
        )));
    }
    Ok(fam)
}

/// Sharpness family for any `d >= 2`: even or odd construction.
pub fn build_family(d: usize, field: FieldSpec, budget: &Budget) -> Result<OperatorFamily> {
    match d {
        0 | 1 => Err(Error::Precondition(format!(
            "dimension must be at least 2, got {d}"
        ))),
        d if d % 2 == 0 => build_even_family(d / 2, field),
        d => build_odd_family(d / 2, field, budget),
    }
}

/// Result of checking one subfamily.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubfamilyCheck {
    /// Name of the removed operator (`None` for the full family).
    pub left_out: Option<String>,
    /// A common eigenvector of the subfamily, when one exists.
    pub witness: Option<Vec<Scalar>>,
    /// Brute-force agreement on the exact common-eigenvector set, when the
    /// oracle ran.
    pub oracle_agrees: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessReport {
    pub dim: usize,
    pub operators: usize,
    pub leave_one_out: Vec<SubfamilyCheck>,
    pub full_family: SubfamilyCheck,
    /// Every leave-one-out subfamily has a common eigenvector and the full
    /// family does not.
    pub sharp: bool,
    /// `None` when the oracle was not applicable (rationals or over budget).
    pub oracle_agrees: Option<bool>,
}

/// Checks every leave-one-out subfamily and the full family with the
/// refinement algorithm, cross-checking against projective brute force over
/// prime fields within budget.
pub fn verify_sharpness(fam: &OperatorFamily, budget: &Budget) -> Result<SharpnessReport> {
    let table = fam.eigen_table()?;
    let n = fam.len();
    let use_oracle = match fam.field().order() {
        Some(p) => (p as u128)
            .checked_pow(fam.dim() as u32)
            .is_some_and(|t| t <= budget.projective_points),
        None => false,
    };
    let check = |left_out: Option<usize>| -> Result<SubfamilyCheck> {
        let idx: Vec<usize> = (0..n).filter(|&i| Some(i) != left_out).collect();
        let lines = refine_indices(fam, &table, &idx)?;
        let witness = lines.first().map(|l| l.subspace.basis().row(0).to_vec());
        let oracle_agrees = if use_oracle {
            let sub = fam.subfamily(&idx)?;
            let brute = brute_force_common_eigenvectors(&sub, budget)?;
            Some(brute == points_of_lines(&lines)?)
        } else {
            None
        };
        Ok(SubfamilyCheck {
            left_out: left_out.map(|i| fam.name(i).to_string()),
            witness,
            oracle_agrees,
        })
    };
    let leave_one_out = if n > 1 {
        (0..n)
            .into_par_iter()
            .map(|i| check(Some(i)))
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let full_family = check(None)?;
    let sharp =
        n > 1 && leave_one_out.iter().all(|c| c.witness.is_some()) && full_family.witness.is_none();
    let oracle_agrees = use_oracle.then(|| {
        leave_one_out
            .iter()
            .chain(std::iter::once(&full_family))
            .all(|c| c.oracle_agrees == Some(true))
    });
    Ok(SharpnessReport {
        dim: fam.dim(),
        operators: n,
        leave_one_out,
        full_family,
        sharp,
        oracle_agrees,
    })
}
