//! Subspaces stored by their canonical reduced-row-echelon basis.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::Matrix;

/// A subspace of K^d. The basis rows are in reduced row echelon form with
/// no zero rows, so two subspaces are equal exactly when their stored
/// bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors, canonicalized.
    pub fn span(field: FieldSpec, ambient: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in K^{ambient}",
                v.len()
            )));
        }
        let m = Matrix::from_rows(field, vectors.to_vec())?;
        let m = if vectors.is_empty() {
            Matrix::zeros(field, 0, ambient)
        } else {
            m
        };
        Ok(Self::from_row_space(&m))
    }

    /// Row space of a matrix.
    pub fn from_row_space(m: &Matrix) -> Self {
        let red = m.rref();
        let field = m.field();
        let basis = Matrix::from_fn(field, red.rank, m.cols(), |r, c| red.matrix[(r, c)].clone());
        Subspace {
            ambient: m.cols(),
            basis,
            pivots: red.pivots,
        }
    }

    /// Standard coordinate span `span(e_i : i in indices)` (0-based).
    pub fn coordinate_span(field: FieldSpec, ambient: usize, indices: &[usize]) -> Self {
        let vectors: Vec<Vec<Scalar>> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![field.zero(); ambient];
                v[i] = field.one();
                v
            })
            .collect();
        Self::span(field, ambient, &vectors).expect("indices within ambient dimension")
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        self.basis.to_rows()
    }

    /// `0 < dim < ambient`.
    pub fn is_nontrivial(&self) -> bool {
        self.dim() > 0 && self.dim() < self.ambient
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch {
                left: self.field(),
                right: other.field(),
            });
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of K^{} and K^{}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Coordinates of `v` in the canonical basis, or `None` when `v` is not
    /// in the subspace. With an RREF basis the coordinates are just the
    /// entries of `v` at the pivot columns.
    pub fn coordinates(&self, v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in K^{}",
                v.len(),
                self.ambient
            )));
        }
        if let Some(x) = v.iter().find(|x| x.field() != self.field()) {
            return Err(Error::FieldMismatch {
                left: self.field(),
                right: x.field(),
            });
        }
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (r, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, b) in self.basis.row(r).iter().enumerate() {
                if !b.is_zero() {
                    residual[k] = &residual[k] - &(c * b);
                }
            }
        }
        Ok(residual.iter().all(Scalar::is_zero).then_some(coords))
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// Linear combination of the basis rows.
    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let field = self.field();
        let mut v = vec![field.zero(); self.ambient];
        for (r, c) in coords.iter().enumerate() {
            for (k, b) in self.basis.row(r).iter().enumerate() {
                v[k] = &v[k] + &(c * b);
            }
        }
        v
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows = self.basis.to_rows();
        rows.extend(other.basis.to_rows());
        Subspace::span(self.field(), self.ambient, &rows)
    }

    /// Annihilator `{x : <b, x> = 0 for every basis row b}`.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.field(), self.ambient);
        }
        self.basis.kernel_basis()
    }

    /// Intersection as the kernel of the stacked annihilator constraints.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows = self.annihilator().basis_vectors();
        rows.extend(other.annihilator().basis_vectors());
        if rows.is_empty() {
            return Ok(Subspace::full(self.field(), self.ambient));
        }
        let constraints = Matrix::from_rows(self.field(), rows)?;
        Ok(constraints.kernel_basis())
    }

    /// Whether `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        for b in other.basis.row_vectors() {
            if !self.contains_vector(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Canonical projective representatives (first nonzero coordinate 1) of
    /// every line in the subspace, for prime fields.
    pub fn projective_points(&self) -> Result<Vec<Vec<Scalar>>> {
        let field = self.field();
        let Some(p) = field.order() else {
            return Err(Error::RequiresPrimeField(field));
        };
        let k = self.dim();
        let mut out = Vec::new();
        // Coefficient vectors whose first nonzero entry is 1; with an RREF
        // basis the combination then has first nonzero coordinate 1 too.
        for lead in 0..k {
            let free = k - lead - 1;
            let count = p.pow(free as u32);
            for idx in 0..count {
                let mut coeffs = vec![field.zero(); k];
                coeffs[lead] = field.one();
                let mut rest = idx;
                for slot in (lead + 1..k).rev() {
                    coeffs[slot] = field.element(rest % p);
                    rest /= p;
                }
                out.push(self.combine(&coeffs));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, row) in self.basis.row_vectors().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn lattice_examples() {
        let s = Subspace::coordinate_span(Q, 3, &[0, 1]);
        let t = Subspace::coordinate_span(Q, 3, &[1, 2]);
        assert_eq!(
            s.intersect(&t).unwrap(),
            Subspace::coordinate_span(Q, 3, &[1])
        );
        assert_eq!(s.sum(&t).unwrap(), Subspace::full(Q, 3));
        assert_eq!(s.intersect(&s).unwrap(), s);
        assert_eq!(s.sum(&s).unwrap(), s);
        let line = Subspace::span(Q, 3, &[v(&[1, 1, 0])]).unwrap();
        assert!(s.contains(&line).unwrap());
        assert!(!t.contains(&line).unwrap());
    }

    #[test]
    fn canonical_form() {
        let a = Subspace::span(Q, 3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        let b = Subspace::span(Q, 3, &[v(&[2, 3, 1]), v(&[1, 0, -1]), v(&[3, 3, 0])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.pivots(), &[0, 1]);
    }

    #[test]
    fn zero_and_full_edge_cases() {
        let z = Subspace::zero(Q, 2);
        let f = Subspace::full(Q, 2);
        assert_eq!(z.intersect(&f).unwrap(), z);
        assert_eq!(z.sum(&f).unwrap(), f);
        assert!(f.contains(&z).unwrap());
        assert!(!z.is_nontrivial() && !f.is_nontrivial());
        assert_eq!(Subspace::span(Q, 2, &[]).unwrap(), z);
        assert!(matches!(
            z.intersect(&Subspace::zero(Q, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn projective_points_count() {
        let f = FieldSpec::Prime(3);
        let s = Subspace::full(f, 3);
        let pts = s.projective_points().unwrap();
        assert_eq!(pts.len(), 13);
        for p in &pts {
            let lead = p.iter().find(|x| !x.is_zero()).unwrap();
            assert!(lead.is_one());
        }
        assert!(Subspace::full(Q, 2).projective_points().is_err());
    }
}
