//! Automorphisms of `M_n(F, ρ)`: the factored form `Ψ_A ∘ G ∘ P_τ` and
//! arbitrary maps given by the images of the matrix units.
//!
//! Conventions:
//! * `P_τ(B)[i][j] = B[τ(i)][τ(j)]`, so `P_τ(E^ij) = E^{τ⁻¹(i) τ⁻¹(j)}` and
//!   `P_σ ∘ P_τ = P_{τ∘σ}`.
//! * `G(E^ij) = g(i,j) E^ij`.
//! * `Ψ_A(B) = A⁻¹ B A`, so `Ψ_A ∘ Ψ_C = Ψ_{CA}`.
//! * `(Φ₁ ∘ Φ₂)(X) = Φ₁(Φ₂(X))`.
//!
//! Two specs are equal as maps when all basis images agree exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{is_member, StructMatrix};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::DenseMatrix;
use crate::perm::Permutation;
use crate::relation::Relation;
use crate::transitive::TransitiveFn;

/// Default bound on `n` for automorphism enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 10;

#[derive(Debug, Clone)]
pub enum AutForm {
    Factored {
        a: StructMatrix,
        g: TransitiveFn,
        tau: Permutation,
    },
    /// `E^ij ↦ image`, keyed by 0-based pairs; exactly the pairs of ρ.
    BasisImages(BTreeMap<(usize, usize), DenseMatrix>),
}

#[derive(Debug, Clone)]
pub struct AutomorphismSpec {
    relation: Arc<Relation>,
    field: Field,
    form: AutForm,
}

impl AutomorphismSpec {
    /// `Ψ_A ∘ G ∘ P_τ`. Requires `A` invertible, `g` transitive and `τ` an
    /// automorphism of the relation.
    pub fn factored(a: StructMatrix, g: TransitiveFn, tau: Permutation) -> Result<Self> {
        let relation = Arc::clone(a.relation());
        let field = a.field();
        if **g.relation() != *relation {
            return Err(Error::Mismatch("g and A live on different relations".into()));
        }
        if g.field() != field {
            return Err(Error::FieldMismatch(field, g.field()));
        }
        a.invert()?;
        g.ensure_transitive()?;
        if !is_relation_automorphism(&relation, &tau) {
            return Err(Error::NotRelationAutomorphism(tau.cycle_notation()));
        }
        Ok(AutomorphismSpec { relation, field, form: AutForm::Factored { a, g, tau } })
    }

    /// A map given by the images of all matrix units. Only shapes and the
    /// domain are checked here; [`verify_automorphism`] decides whether the
    /// map is an automorphism.
    pub fn basis_images(
        relation: Arc<Relation>,
        field: Field,
        images: BTreeMap<(usize, usize), DenseMatrix>,
    ) -> Result<Self> {
        let n = relation.n();
        for (&(i, j), m) in &images {
            if i >= n || j >= n || !relation.contains(i, j) {
                return Err(Error::DomainMismatch(format!("E^{},{} is not a basis element", i + 1, j + 1)));
            }
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
            }
            if m.field() != field {
                return Err(Error::FieldMismatch(field, m.field()));
            }
        }
        if let Some((i, j)) = relation.pairs().into_iter().find(|p| !images.contains_key(p)) {
            return Err(Error::DomainMismatch(format!("no image for E^{},{}", i + 1, j + 1)));
        }
        Ok(AutomorphismSpec { relation, field, form: AutForm::BasisImages(images) })
    }

    pub fn identity(relation: Arc<Relation>, field: Field) -> Self {
        let a = StructMatrix::identity(Arc::clone(&relation), field);
        let g = TransitiveFn::one(Arc::clone(&relation), field);
        let tau = Permutation::identity(relation.n());
        AutomorphismSpec { relation, field, form: AutForm::Factored { a, g, tau } }
    }

    pub fn relation(&self) -> &Arc<Relation> {
        &self.relation
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn form(&self) -> &AutForm {
        &self.form
    }

    pub fn is_factored(&self) -> bool {
        matches!(self.form, AutForm::Factored { .. })
    }

    fn unit(&self, i: usize, j: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.relation.n(), self.relation.n());
        m[(i, j)] = self.field.one();
        m
    }

    /// Image of `E^ij` for a 0-based pair of ρ.
    pub fn image(&self, i: usize, j: usize) -> Result<DenseMatrix> {
        if !self.relation.contains(i, j) {
            return Err(Error::OffPattern(i + 1, j + 1));
        }
        match &self.form {
            AutForm::BasisImages(map) => Ok(map[&(i, j)].clone()),
            AutForm::Factored { .. } => self.apply_dense(&self.unit(i, j)),
        }
    }

    /// All basis images in `Relation::pairs` order.
    pub fn images(&self) -> Result<BTreeMap<(usize, usize), DenseMatrix>> {
        match &self.form {
            AutForm::BasisImages(map) => Ok(map.clone()),
            AutForm::Factored { a, g, tau } => {
                let a_inv = a.invert()?;
                let tau_inv = tau.inverse();
                self.relation
                    .pairs()
                    .into_iter()
                    .map(|(i, j)| {
                        let (k, l) = (tau_inv.apply(i), tau_inv.apply(j));
                        let x = self.unit(k, l).scale(g.get(k, l));
                        let img = a_inv.dense().mul(&x)?.mul(a.dense())?;
                        Ok(((i, j), img))
                    })
                    .collect()
            }
        }
    }

    pub fn to_basis_images(&self) -> Result<AutomorphismSpec> {
        Ok(AutomorphismSpec {
            relation: Arc::clone(&self.relation),
            field: self.field,
            form: AutForm::BasisImages(self.images()?),
        })
    }

    fn check_input(&self, m: &DenseMatrix) -> Result<()> {
        if m.field() != self.field {
            return Err(Error::FieldMismatch(self.field, m.field()));
        }
        let n = self.relation.n();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
        }
        if let Some((i, j)) = m.support().find(|&(i, j)| !self.relation.contains(i, j)) {
            return Err(Error::OffPattern(i + 1, j + 1));
        }
        Ok(())
    }

    fn apply_dense(&self, m: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_input(m)?;
        let n = self.relation.n();
        match &self.form {
            AutForm::BasisImages(map) => {
                let mut out = DenseMatrix::zeros(self.field, n, n);
                for ((i, j), img) in map {
                    let c = &m[(*i, *j)];
                    if !c.is_zero() {
                        out = out.add(&img.scale(c))?;
                    }
                }
                Ok(out)
            }
            AutForm::Factored { a, g, tau } => {
                let mut y = DenseMatrix::zeros(self.field, n, n);
                for (i, j) in self.relation.pairs() {
                    let (k, l) = (tau.apply(i), tau.apply(j));
                    y[(i, j)] = &m[(k, l)] * g.get(i, j);
                }
                a.invert()?.dense().mul(&y)?.mul(a.dense())
            }
        }
    }

    /// Applies the map to an element of the algebra. The result must again
    /// lie in the algebra.
    pub fn apply(&self, m: &StructMatrix) -> Result<StructMatrix> {
        if **m.relation() != *self.relation {
            return Err(Error::Mismatch("matrix belongs to a different algebra".into()));
        }
        let out = self.apply_dense(m.dense())?;
        StructMatrix::new(Arc::clone(&self.relation), out)
    }

    /// Equality as maps: all basis images agree exactly.
    pub fn same_map(&self, other: &AutomorphismSpec) -> Result<bool> {
        if self.field != other.field || *self.relation != *other.relation {
            return Ok(false);
        }
        Ok(self.images()? == other.images()?)
    }
}

impl fmt::Display for AutomorphismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            AutForm::Factored { a, g, tau } => {
                writeln!(f, "Ψ_A ∘ G ∘ P_τ over {}", self.field)?;
                writeln!(f, "τ = {} = {}", tau, tau.cycle_notation())?;
                writeln!(f, "g: {g}")?;
                write!(f, "A =\n{a}")
            }
            AutForm::BasisImages(map) => {
                writeln!(f, "basis images over {}", self.field)?;
                for ((i, j), m) in map {
                    writeln!(f, "E^{},{} ↦", i + 1, j + 1)?;
                    write!(f, "{m}")?;
                }
                Ok(())
            }
        }
    }
}

/// Returns true if `(i,j) ∈ ρ ⟺ (τ(i),τ(j)) ∈ ρ` for all `i, j`.
pub fn is_relation_automorphism(rel: &Relation, tau: &Permutation) -> bool {
    let n = rel.n();
    tau.n() == n
        && (0..n).all(|i| (0..n).all(|j| rel.contains(i, j) == rel.contains(tau.apply(i), tau.apply(j))))
}

/// First pair witnessing that `tau` is not a relation automorphism, 1-based:
/// `((i, j), (τ(i), τ(j)))` with exactly one of them in ρ.
pub fn automorphism_obstruction(rel: &Relation, tau: &Permutation) -> Option<((usize, usize), (usize, usize))> {
    let n = rel.n();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| rel.contains(i, j) != rel.contains(tau.apply(i), tau.apply(j)))
        .map(|(i, j)| ((i + 1, j + 1), (tau.apply(i) + 1, tau.apply(j) + 1)))
}

/// All automorphisms of the relation in lexicographic order of their image
/// sequences. Candidates are pruned by class size and in/out degree.
pub fn enumerate_relation_automorphisms(rel: &Relation, bound: usize) -> Result<Vec<Permutation>> {
    rel.ensure_valid()?;
    let n = rel.n();
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    let signature: Vec<(usize, usize, usize)> = (0..n)
        .map(|v| {
            let out = (0..n).filter(|&w| rel.contains(v, w)).count();
            let inn = (0..n).filter(|&w| rel.contains(w, v)).count();
            let class = (0..n).filter(|&w| rel.contains(v, w) && rel.contains(w, v)).count();
            (class, inn, out)
        })
        .collect();
    let mut found = Vec::new();
    let mut image = Vec::with_capacity(n);
    let mut used = vec![false; n];
    backtrack(rel, &signature, &mut image, &mut used, &mut found);
    Ok(found)
}

fn backtrack(
    rel: &Relation,
    signature: &[(usize, usize, usize)],
    image: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut Vec<Permutation>,
) {
    let n = rel.n();
    let v = image.len();
    if v == n {
        found.push(Permutation::from_images(image.clone()).expect("injective assignment"));
        return;
    }
    for w in 0..n {
        if used[w] || signature[w] != signature[v] {
            continue;
        }
        let consistent = (0..v).all(|u| {
            let tu = image[u];
            rel.contains(u, v) == rel.contains(tu, w) && rel.contains(v, u) == rel.contains(w, tu)
        });
        if !consistent {
            continue;
        }
        used[w] = true;
        image.push(w);
        backtrack(rel, signature, image, used, found);
        image.pop();
        used[w] = false;
    }
}

/// `P_τ`: `B ↦ (B[τ(i)][τ(j)])`.
pub fn permutation_similarity(rel: Arc<Relation>, field: Field, tau: Permutation) -> Result<AutomorphismSpec> {
    if !is_relation_automorphism(&rel, &tau) {
        return Err(Error::NotRelationAutomorphism(tau.cycle_notation()));
    }
    let a = StructMatrix::identity(Arc::clone(&rel), field);
    let g = TransitiveFn::one(rel, field);
    AutomorphismSpec::factored(a, g, tau)
}

/// `Ψ_A`: `B ↦ A⁻¹ B A`.
pub fn inner_automorphism(a: StructMatrix) -> Result<AutomorphismSpec> {
    let rel = Arc::clone(a.relation());
    let g = TransitiveFn::one(Arc::clone(&rel), a.field());
    AutomorphismSpec::factored(a, g, Permutation::identity(rel.n()))
}

/// `G`: `E^ij ↦ g(i,j) E^ij`.
pub fn induced_automorphism(g: TransitiveFn) -> Result<AutomorphismSpec> {
    let rel = Arc::clone(g.relation());
    let a = StructMatrix::identity(Arc::clone(&rel), g.field());
    AutomorphismSpec::factored(a, g, Permutation::identity(rel.n()))
}

/// `outer ∘ inner` as basis images.
pub fn compose(outer: &AutomorphismSpec, inner: &AutomorphismSpec) -> Result<AutomorphismSpec> {
    if *outer.relation != *inner.relation {
        return Err(Error::Mismatch("automorphisms of different algebras".into()));
    }
    if outer.field != inner.field {
        return Err(Error::FieldMismatch(outer.field, inner.field));
    }
    let images = inner
        .images()?
        .into_iter()
        .map(|(p, img)| Ok((p, outer.apply_dense(&img)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    AutomorphismSpec::basis_images(Arc::clone(&outer.relation), outer.field, images)
}

/// The first defining identity that fails, with 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerifyFailure {
    /// The image of `unit` has a nonzero entry at `entry`, outside ρ.
    OffPattern { unit: (usize, usize), entry: (usize, usize) },
    /// `Φ(left) Φ(right) != δ_jk Φ(E^il)`.
    Multiplicative { left: (usize, usize), right: (usize, usize) },
    /// `Φ(I) != I`.
    Unit,
    /// The images span a space of dimension `rank < dim`.
    NotBijective { rank: usize, dim: usize },
    /// The map could not be evaluated.
    Evaluation { message: String },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::OffPattern { unit, entry } => write!(
                f,
                "Φ(E^{},{}) has a nonzero entry at ({},{}) outside the relation",
                unit.0, unit.1, entry.0, entry.1
            ),
            VerifyFailure::Multiplicative { left, right } => {
                let target = if left.1 == right.0 {
                    format!("Φ(E^{},{})", left.0, right.1)
                } else {
                    "0".to_string()
                };
                write!(
                    f,
                    "Φ(E^{},{})·Φ(E^{},{}) != {target}",
                    left.0, left.1, right.0, right.1
                )
            }
            VerifyFailure::Unit => write!(f, "Φ(I) != I"),
            VerifyFailure::NotBijective { rank, dim } => {
                write!(f, "images span dimension {rank} of {dim}")
            }
            VerifyFailure::Evaluation { message } => write!(f, "{message}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    fn fail(f: VerifyFailure) -> Self {
        VerifyReport { ok: false, failure: Some(f) }
    }
}

/// Checks, in order: (a) images lie in the algebra, (b) the matrix-unit
/// multiplication table is preserved, (c) the identity is fixed, (d) the
/// linear map is bijective.
pub fn verify_automorphism(phi: &AutomorphismSpec) -> VerifyReport {
    let images = match phi.images() {
        Ok(m) => m,
        Err(e) => return VerifyReport::fail(VerifyFailure::Evaluation { message: e.to_string() }),
    };
    let rel = &phi.relation;
    let n = rel.n();

    for (&(i, j), img) in &images {
        if let Some((k, l)) = img.support().find(|&(k, l)| !rel.contains(k, l)) {
            return VerifyReport::fail(VerifyFailure::OffPattern {
                unit: (i + 1, j + 1),
                entry: (k + 1, l + 1),
            });
        }
    }

    let zero = DenseMatrix::zeros(phi.field, n, n);
    for (&(i, j), left) in &images {
        for (&(k, l), right) in &images {
            let prod = left.mul(right).expect("images are n×n over one field");
            let expected = if j == k { &images[&(i, l)] } else { &zero };
            if &prod != expected {
                return VerifyReport::fail(VerifyFailure::Multiplicative {
                    left: (i + 1, j + 1),
                    right: (k + 1, l + 1),
                });
            }
        }
    }

    let mut sum = DenseMatrix::zeros(phi.field, n, n);
    for i in 0..n {
        sum = sum.add(&images[&(i, i)]).expect("same shape");
    }
    if sum != DenseMatrix::identity(phi.field, n) {
        return VerifyReport::fail(VerifyFailure::Unit);
    }

    let pairs = rel.pairs();
    let dim = pairs.len();
    let coords: Vec<Vec<_>> = pairs
        .iter()
        .map(|&(k, l)| pairs.iter().map(|p| images[p][(k, l)].clone()).collect())
        .collect();
    let rank = DenseMatrix::from_rows(phi.field, coords).expect("square coordinate matrix").rank();
    if rank != dim {
        return VerifyReport::fail(VerifyFailure::NotBijective { rank, dim });
    }
    debug_assert!(images.values().all(|m| is_member(rel, m)));
    VerifyReport { ok: true, failure: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn q() -> Field {
        Field::Rational
    }

    /// `B` with `(a11, a13, a22, a23, a33)` on the Example 2 block form.
    fn ex2_b(rel: &Arc<Relation>, v: [i64; 5]) -> StructMatrix {
        let f = q();
        let mut b = StructMatrix::zero(Arc::clone(rel), f);
        for ((i, j), x) in [(0, 0), (0, 2), (1, 1), (1, 2), (2, 2)].into_iter().zip(v) {
            b.set(i, j, f.from_i64(x)).unwrap();
        }
        b
    }

    #[test]
    fn relation_automorphism_examples() {
        let ex2 = examples::example2_block();
        assert!(is_relation_automorphism(&ex2, &Permutation::transposition(3, 0, 1)));
        let ex3 = examples::example3_block();
        let swap14 = Permutation::transposition(6, 0, 3);
        assert!(!is_relation_automorphism(&ex3, &swap14));
        assert_eq!(automorphism_obstruction(&ex3, &swap14), Some(((1, 4), (4, 1))));
        for rel in [examples::example1(), ex2, ex3] {
            assert!(is_relation_automorphism(&rel, &Permutation::identity(rel.n())));
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_relation_automorphisms(&examples::example1(), 10).unwrap().len(), 12);
        let ex2 = enumerate_relation_automorphisms(&examples::example2_block(), 10).unwrap();
        assert_eq!(ex2, vec![Permutation::identity(3), Permutation::transposition(3, 0, 1)]);
        assert_eq!(enumerate_relation_automorphisms(&Relation::identity(3), 10).unwrap().len(), 6);
        assert_eq!(
            enumerate_relation_automorphisms(&Relation::identity(11), 10),
            Err(Error::BoundExceeded { n: 11, bound: 10 })
        );
    }

    #[test]
    fn permutation_similarity_entry_rule() {
        let rel = Arc::new(examples::example2_block());
        let p = permutation_similarity(Arc::clone(&rel), q(), Permutation::transposition(3, 0, 1)).unwrap();
        // (a11, a13, a22, a23, a33) = (1, 2, 3, 4, 5) ↦ (a22, a23, a11, a13, a33)
        let out = p.apply(&ex2_b(&rel, [1, 2, 3, 4, 5])).unwrap();
        assert_eq!(out, ex2_b(&rel, [3, 4, 1, 2, 5]));
        let twice = compose(&p, &p).unwrap();
        assert!(twice.same_map(&AutomorphismSpec::identity(rel, q())).unwrap());
        assert!(matches!(
            permutation_similarity(Arc::new(examples::example3_block()), q(), Permutation::transposition(6, 0, 3)),
            Err(Error::NotRelationAutomorphism(_))
        ));
    }

    #[test]
    fn permutation_similarities_compose_contravariantly() {
        let rel = Arc::new(Relation::identity(3));
        let s = Permutation::from_one_based(&[2, 3, 1]).unwrap();
        let t = Permutation::transposition(3, 0, 1);
        let ps = permutation_similarity(Arc::clone(&rel), q(), s.clone()).unwrap();
        let pt = permutation_similarity(Arc::clone(&rel), q(), t.clone()).unwrap();
        let lhs = compose(&ps, &pt).unwrap();
        let rhs = permutation_similarity(rel, q(), t.compose(&s)).unwrap();
        assert!(lhs.same_map(&rhs).unwrap());
    }

    #[test]
    fn example2_inner_after_permutation() {
        let rel = Arc::new(examples::example2_block());
        let f = q();
        let (a, b) = (7, 11);
        let mut am = StructMatrix::identity(Arc::clone(&rel), f);
        am.set(0, 2, f.from_i64(a)).unwrap();
        am.set(1, 2, f.from_i64(b)).unwrap();
        let psi = inner_automorphism(am.clone()).unwrap();
        let p = permutation_similarity(Arc::clone(&rel), f, Permutation::transposition(3, 0, 1)).unwrap();
        let phi = compose(&psi, &p).unwrap();
        let [a11, a13, a22, a23, a33] = [1, 2, 3, 4, 5];
        let out = phi.apply(&ex2_b(&rel, [a11, a13, a22, a23, a33])).unwrap();
        let expected = ex2_b(
            &rel,
            [a22, a23 + a * a22 - a * a33, a11, a13 + b * a11 - b * a33, a33],
        );
        assert_eq!(out, expected);

        let back = compose(&psi, &inner_automorphism(am.invert().unwrap()).unwrap()).unwrap();
        assert!(back.same_map(&AutomorphismSpec::identity(rel, f)).unwrap());
    }

    #[test]
    fn induced_automorphism_of_example3() {
        let rel = Arc::new(examples::example3_block());
        let f = q();
        let g = TransitiveFn::with_defaults(Arc::clone(&rel), f, [((0, 3), f.from_i64(2))]).unwrap();
        let big_g = induced_automorphism(g).unwrap();
        assert!(verify_automorphism(&big_g).ok);
        for (i, j) in rel.pairs() {
            let unit = StructMatrix::matrix_unit(Arc::clone(&rel), f, i, j).unwrap();
            let img = big_g.apply(&unit).unwrap();
            let factor = if (i, j) == (0, 3) { f.from_i64(2) } else { f.one() };
            assert_eq!(img, unit.scale(&factor));
        }
    }

    #[test]
    fn coboundary_induces_diagonal_conjugation() {
        let rel = Arc::new(examples::example2_block());
        let f = q();
        let s = crate::transitive::ScalingVector::new(vec![f.from_i64(2), f.one(), f.one()]).unwrap();
        let g = TransitiveFn::coboundary(Arc::clone(&rel), &s).unwrap();
        let big_g = induced_automorphism(g).unwrap();
        // G(E^ij) = s(i)/s(j) E^ij = D⁻¹ E^ij D with D = diag(s)⁻¹
        let d = StructMatrix::diagonal(Arc::clone(&rel), s.inverse().values()).unwrap();
        let psi = inner_automorphism(d).unwrap();
        assert!(big_g.same_map(&psi).unwrap());
    }

    #[test]
    fn compose_of_induced_is_pointwise_product() {
        let rel = Arc::new(examples::example3_block());
        let f = Field::Prime(5);
        let g = TransitiveFn::with_defaults(Arc::clone(&rel), f, [((0, 3), f.from_i64(2))]).unwrap();
        let s = crate::transitive::ScalingVector::new([1, 2, 3, 4, 1, 2].map(|k| f.from_i64(k)).to_vec()).unwrap();
        let h = TransitiveFn::coboundary(Arc::clone(&rel), &s).unwrap();
        let lhs = compose(&induced_automorphism(g.clone()).unwrap(), &induced_automorphism(h.clone()).unwrap()).unwrap();
        let rhs = induced_automorphism(g.product(&h).unwrap()).unwrap();
        assert!(lhs.same_map(&rhs).unwrap());
    }

    #[test]
    fn verify_rejects_non_multiplicative_map() {
        let rel = Arc::new(examples::example2_block());
        let f = q();
        let id = AutomorphismSpec::identity(Arc::clone(&rel), f);
        assert!(verify_automorphism(&id).ok);
        let mut images = id.images().unwrap();
        let bad = images[&(0, 2)].add(&images[&(1, 2)]).unwrap();
        images.insert((0, 2), bad);
        let phi = AutomorphismSpec::basis_images(rel, f, images).unwrap();
        let report = verify_automorphism(&phi);
        assert_eq!(
            report.failure,
            Some(VerifyFailure::Multiplicative { left: (1, 1), right: (1, 3) })
        );
    }

    #[test]
    fn verify_reports_each_failure_kind() {
        let rel = Arc::new(examples::example2_block());
        let f = q();
        let id = AutomorphismSpec::identity(Arc::clone(&rel), f);

        let mut off = id.images().unwrap();
        let mut m = off[&(0, 2)].clone();
        m[(2, 0)] = f.one();
        off.insert((0, 2), m);
        let r = verify_automorphism(&AutomorphismSpec::basis_images(Arc::clone(&rel), f, off).unwrap());
        assert_eq!(r.failure, Some(VerifyFailure::OffPattern { unit: (1, 3), entry: (3, 1) }));

        let zero = DenseMatrix::zeros(f, 3, 3);
        let all_zero = rel.pairs().into_iter().map(|p| (p, zero.clone())).collect();
        let r = verify_automorphism(&AutomorphismSpec::basis_images(Arc::clone(&rel), f, all_zero).unwrap());
        assert_eq!(r.failure, Some(VerifyFailure::Unit));
    }

    #[test]
    fn apply_is_linear() {
        let rel = Arc::new(examples::example2_block());
        let f = q();
        let mut am = StructMatrix::identity(Arc::clone(&rel), f);
        am.set(0, 2, f.from_i64(3)).unwrap();
        let phi = compose(
            &inner_automorphism(am).unwrap(),
            &permutation_similarity(Arc::clone(&rel), f, Permutation::transposition(3, 0, 1)).unwrap(),
        )
        .unwrap();
        let x = ex2_b(&rel, [1, -2, 3, 5, 7]);
        let y = ex2_b(&rel, [0, 4, -1, 2, 9]);
        let c = f.parse("-5/3").unwrap();
        let lhs = phi.apply(&x.add(&y.scale(&c)).unwrap()).unwrap();
        let rhs = phi.apply(&x).unwrap().add(&phi.apply(&y).unwrap().scale(&c)).unwrap();
        assert_eq!(lhs, rhs);
        let basis = phi.to_basis_images().unwrap();
        assert_eq!(basis.apply(&x).unwrap(), phi.apply(&x).unwrap());
    }
}
