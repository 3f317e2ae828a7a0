//! The algebra `M_n(F, ρ)`: square matrices vanishing off the pairs of a
//! quasi-order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::DenseMatrix;
use crate::relation::Relation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructMatrix {
    relation: Arc<Relation>,
    dense: DenseMatrix,
}

/// Returns true if every entry of `m` outside `rel` is zero.
pub fn is_member(rel: &Relation, m: &DenseMatrix) -> bool {
    first_off_pattern(rel, m).is_none()
}

fn first_off_pattern(rel: &Relation, m: &DenseMatrix) -> Option<(usize, usize)> {
    m.support().find(|&(i, j)| !rel.contains(i, j))
}

impl StructMatrix {
    /// Wraps a dense matrix, rejecting any nonzero entry off the pattern.
    pub fn new(relation: Arc<Relation>, dense: DenseMatrix) -> Result<Self> {
        let n = relation.n();
        if dense.rows() != n || dense.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: dense.rows().max(dense.cols()) });
        }
        if let Some((i, j)) = first_off_pattern(&relation, &dense) {
            return Err(Error::OffPattern(i + 1, j + 1));
        }
        Ok(StructMatrix { relation, dense })
    }

    pub fn zero(relation: Arc<Relation>, field: Field) -> Self {
        let n = relation.n();
        StructMatrix { relation, dense: DenseMatrix::zeros(field, n, n) }
    }

    pub fn identity(relation: Arc<Relation>, field: Field) -> Self {
        let n = relation.n();
        StructMatrix { relation, dense: DenseMatrix::identity(field, n) }
    }

    /// `E^ij` for a 0-based pair of the relation.
    pub fn matrix_unit(relation: Arc<Relation>, field: Field, i: usize, j: usize) -> Result<Self> {
        if !relation.contains(i, j) {
            return Err(Error::OffPattern(i + 1, j + 1));
        }
        let mut m = Self::zero(relation, field);
        m.dense[(i, j)] = field.one();
        Ok(m)
    }

    /// Diagonal matrix; diagonal pairs are always in a quasi-order.
    pub fn diagonal(relation: Arc<Relation>, diag: &[Scalar]) -> Result<Self> {
        let n = relation.n();
        if diag.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: diag.len() });
        }
        let field = diag.first().map_or(Field::Rational, Scalar::field);
        let mut dense = DenseMatrix::zeros(field, n, n);
        for (i, s) in diag.iter().enumerate() {
            dense[(i, i)] = s.clone();
        }
        Self::new(relation, dense)
    }

    pub fn relation(&self) -> &Arc<Relation> {
        &self.relation
    }

    pub fn field(&self) -> Field {
        self.dense.field()
    }

    pub fn n(&self) -> usize {
        self.dense.rows()
    }

    pub fn dense(&self) -> &DenseMatrix {
        &self.dense
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.dense
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.dense[(i, j)]
    }

    /// Sets a 0-based entry; off-pattern nonzero values are rejected.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) -> Result<()> {
        if v.field() != self.field() {
            return Err(Error::FieldMismatch(self.field(), v.field()));
        }
        if !v.is_zero() && !self.relation.contains(i, j) {
            return Err(Error::OffPattern(i + 1, j + 1));
        }
        self.dense[(i, j)] = v;
        Ok(())
    }

    fn check_compatible(&self, other: &StructMatrix) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        if !Arc::ptr_eq(&self.relation, &other.relation) && *self.relation != *other.relation {
            return Err(Error::PatternMismatch);
        }
        Ok(())
    }

    fn wrap(&self, dense: DenseMatrix) -> StructMatrix {
        let out = StructMatrix { relation: Arc::clone(&self.relation), dense };
        debug_assert!(
            is_member(&out.relation, &out.dense),
            "result left the structural pattern"
        );
        out
    }

    pub fn multiply(&self, other: &StructMatrix) -> Result<StructMatrix> {
        self.check_compatible(other)?;
        Ok(self.wrap(self.dense.mul(&other.dense)?))
    }

    pub fn add(&self, other: &StructMatrix) -> Result<StructMatrix> {
        self.check_compatible(other)?;
        Ok(self.wrap(self.dense.add(&other.dense)?))
    }

    pub fn sub(&self, other: &StructMatrix) -> Result<StructMatrix> {
        self.check_compatible(other)?;
        Ok(self.wrap(self.dense.sub(&other.dense)?))
    }

    pub fn scale(&self, c: &Scalar) -> StructMatrix {
        self.wrap(self.dense.scale(c))
    }

    /// Exact inverse. The inverse of an invertible element of a finite
    /// dimensional unital algebra lies in the algebra; this is checked, and a
    /// violation is reported as [`Error::OffPattern`].
    pub fn invert(&self) -> Result<StructMatrix> {
        let inv = self.dense.inverse()?;
        StructMatrix::new(Arc::clone(&self.relation), inv)
    }

    /// `A^-1 X A`.
    pub fn conjugate(&self, x: &StructMatrix) -> Result<StructMatrix> {
        self.invert()?.multiply(x)?.multiply(self)
    }

    /// Coordinates over the matrix-unit basis, in `Relation::pairs` order.
    pub fn coordinates(&self) -> Vec<Scalar> {
        self.relation.pairs().into_iter().map(|(i, j)| self.dense[(i, j)].clone()).collect()
    }
}

impl fmt::Display for StructMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.dense.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn unit(rel: &Arc<Relation>, f: Field, i: usize, j: usize) -> StructMatrix {
        StructMatrix::matrix_unit(Arc::clone(rel), f, i - 1, j - 1).unwrap()
    }

    #[test]
    fn matrix_unit_products() {
        let q = Field::Rational;
        let chain = Arc::new(Relation::quasi_order(3, [(1, 1), (2, 2), (3, 3), (1, 2), (2, 3), (1, 3)]).unwrap());
        let p = unit(&chain, q, 1, 2).multiply(&unit(&chain, q, 2, 3)).unwrap();
        assert_eq!(p, unit(&chain, q, 1, 3));
        let z = unit(&chain, q, 2, 3).multiply(&unit(&chain, q, 1, 2)).unwrap();
        assert!(z.dense().is_zero());
    }

    #[test]
    fn matrix_unit_off_pattern() {
        let rel = Arc::new(examples::example2_block());
        assert_eq!(
            StructMatrix::matrix_unit(Arc::clone(&rel), Field::Rational, 2, 0),
            Err(Error::OffPattern(3, 1))
        );
        let e14 = StructMatrix::matrix_unit(Arc::new(examples::example3_block()), Field::Rational, 0, 3).unwrap();
        assert!(e14.get(0, 3).is_one());
        let e11 = StructMatrix::matrix_unit(rel, Field::Rational, 0, 0).unwrap();
        assert!(e11.get(0, 0).is_one());
    }

    #[test]
    fn membership() {
        let q = Field::Rational;
        let rel = examples::example1();
        assert!(is_member(&rel, &DenseMatrix::zeros(q, 6, 6)));
        let mut all_ones = DenseMatrix::zeros(q, 6, 6);
        for (i, j) in rel.pairs() {
            all_ones[(i, j)] = q.one();
        }
        assert!(is_member(&rel, &all_ones));
        let mut e13 = DenseMatrix::zeros(q, 6, 6);
        e13[(0, 2)] = q.one();
        assert!(!is_member(&rel, &e13));
        assert_eq!(StructMatrix::new(Arc::new(rel), e13), Err(Error::OffPattern(1, 3)));
    }

    /// Upper unitriangular `I + a E^13 + b E^23` on the Example 2 block form.
    fn unitriangular(rel: &Arc<Relation>, a: i64, b: i64) -> StructMatrix {
        let q = Field::Rational;
        let mut m = StructMatrix::identity(Arc::clone(rel), q);
        m.set(0, 2, q.from_i64(a)).unwrap();
        m.set(1, 2, q.from_i64(b)).unwrap();
        m
    }

    /// Plain triple-loop product, independent of `DenseMatrix::mul`.
    fn naive_product(x: &DenseMatrix, y: &DenseMatrix) -> Vec<Vec<Scalar>> {
        let n = x.rows();
        let f = x.field();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(f.zero(), |acc, k| &acc + &(&x[(i, k)] * &y[(k, j)])))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn square_of_unitriangular() {
        let rel = Arc::new(examples::example2_block());
        let a = unitriangular(&rel, 7, -3);
        let sq = a.multiply(&a).unwrap();
        assert_eq!(sq, unitriangular(&rel, 14, -6));
        assert_eq!(sq.dense().to_rows(), naive_product(a.dense(), a.dense()));
    }

    #[test]
    fn inverse_of_unitriangular() {
        let rel = Arc::new(examples::example2_block());
        let a = unitriangular(&rel, 5, 9);
        assert_eq!(a.invert().unwrap(), unitriangular(&rel, -5, -9));
        let id = StructMatrix::identity(Arc::clone(&rel), Field::Rational);
        assert_eq!(id.invert().unwrap(), id);
        assert_eq!(id.multiply(&a).unwrap(), a);
    }

    #[test]
    fn singular_and_mismatch() {
        let rel = Arc::new(examples::example2_block());
        let z = StructMatrix::zero(Arc::clone(&rel), Field::Rational);
        assert_eq!(z.invert(), Err(Error::Singular));
        let gf = StructMatrix::identity(Arc::clone(&rel), Field::Prime(5));
        assert!(matches!(z.multiply(&gf), Err(Error::FieldMismatch(..))));
        let other = StructMatrix::identity(Arc::new(Relation::full(3)), Field::Rational);
        assert_eq!(z.multiply(&other), Err(Error::PatternMismatch));
    }
}
