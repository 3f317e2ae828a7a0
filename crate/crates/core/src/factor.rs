//! Constructive factorization of an automorphism as `Ψ_A ∘ G ∘ P_τ`.
//!
//! The construction works on any quasi-order, block form or not:
//!
//! 1. The images of the class idempotents `ē_k`, read on the diagonal
//!    blocks, are again class idempotents. This gives a bijection `f` on
//!    classes.
//! 2. `τ` maps the ascending elements of class `f(k)` to the ascending
//!    elements of class `k`, so that `Θ = Φ ∘ P_τ⁻¹` fixes every class
//!    modulo the radical.
//! 3. On each diagonal block, `Θ` acts as conjugation by some invertible
//!    block. It is found as the one-dimensional solution space of
//!    `B · Θ(X) = X · B` over the block's matrix units, normalized so the
//!    first nonzero coordinate is 1. These blocks form `A₀`.
//! 4. `Θ₁ = Ψ_{A₀}⁻¹ ∘ Θ` induces the identity modulo the radical, so its
//!    images `h_i = Θ₁(E^ii)` are orthogonal idempotents congruent to
//!    `E^ii`. `U = Σ E^ii h_i` is unipotent with `U h_i = E^ii U`, and
//!    `Θ₂ = Ψ_U⁻¹ ∘ Θ₁` fixes every `E^ii`. Then `Θ₂(E^ij)` lies in
//!    `E^ii M E^jj`, i.e. `Θ₂(E^ij) = c(i,j) E^ij`.
//! 5. `c = δs · g` with `g` canonical; `G_δs = Ψ_{diag(s)⁻¹}`, so
//!    `A = diag(s)⁻¹ · U · A₀`.

use std::sync::Arc;

use crate::algebra::StructMatrix;
use crate::automorphism::{is_relation_automorphism, verify_automorphism, AutForm, AutomorphismSpec};
use crate::blockform::is_semisimple;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::DenseMatrix;
use crate::perm::Permutation;
use crate::relation::{ClassPartition, Relation};
use crate::transitive::TransitiveFn;

#[derive(Debug, Clone)]
pub struct Factorization {
    pub a: StructMatrix,
    /// Canonical representative: 1 on the canonical spanning forest.
    pub g: TransitiveFn,
    pub tau: Permutation,
}

impl Factorization {
    pub fn to_spec(&self) -> Result<AutomorphismSpec> {
        AutomorphismSpec::factored(self.a.clone(), self.g.clone(), self.tau.clone())
    }
}

/// Images of every matrix unit under a map, as dense matrices.
struct Images {
    rel: Arc<Relation>,
    field: Field,
    map: std::collections::BTreeMap<(usize, usize), DenseMatrix>,
}

impl Images {
    fn unit_image(&self, i: usize, j: usize) -> &DenseMatrix {
        &self.map[&(i, j)]
    }

    fn sum_diagonal(&self, class: &[usize]) -> DenseMatrix {
        let n = self.rel.n();
        class.iter().fold(DenseMatrix::zeros(self.field, n, n), |acc, &i| {
            acc.add(self.unit_image(i, i)).expect("same shape")
        })
    }

    /// `X ↦ L · Θ(X) · R` for every basis image.
    fn sandwich(&self, left: &DenseMatrix, right: &DenseMatrix) -> Result<Images> {
        let map = self
            .map
            .iter()
            .map(|(&p, m)| Ok((p, left.mul(m)?.mul(right)?)))
            .collect::<Result<_>>()?;
        Ok(Images { rel: Arc::clone(&self.rel), field: self.field, map })
    }
}

pub fn factor_automorphism(phi: &AutomorphismSpec) -> Result<Factorization> {
    let report = verify_automorphism(phi);
    if let Some(failure) = report.failure {
        return Err(Error::NotAutomorphism(failure.to_string()));
    }
    let rel = Arc::clone(phi.relation());
    let field = phi.field();
    let n = rel.n();
    let part = ClassPartition::of(&rel)?;
    let phi_images = Images { rel: Arc::clone(&rel), field, map: phi.images()? };

    // (1) class bijection from the diagonal blocks of Φ(ē_k)
    let f = class_bijection(&phi_images, &part)?;

    // (2) ascending lift: τ maps class f(k) onto class k
    let mut tau_img = vec![0; n];
    for (k, &fk) in f.iter().enumerate() {
        for (&d, &c) in part.class(fk).iter().zip(part.class(k)) {
            tau_img[d] = c;
        }
    }
    let tau = Permutation::from_images(tau_img).expect("classes partition the ground set");
    if !is_relation_automorphism(&rel, &tau) {
        return Err(Error::NotAutomorphism(format!(
            "class bijection does not lift to a relation automorphism ({})",
            tau.cycle_notation()
        )));
    }

    // Θ = Φ ∘ P_τ⁻¹: Θ(E^ij) = Φ(E^{τ(i) τ(j)})
    let theta = Images {
        rel: Arc::clone(&rel),
        field,
        map: rel
            .pairs()
            .into_iter()
            .map(|(i, j)| ((i, j), phi_images.unit_image(tau.apply(i), tau.apply(j)).clone()))
            .collect(),
    };

    // (3) block-diagonal A₀ with Θ ≡ Ψ_{A₀} on the diagonal blocks
    let a0 = block_conjugator(&theta, &part)?;
    let a0_inv = a0.inverse()?;

    // (4) Θ₁ = Ψ_{A₀}⁻¹ ∘ Θ, then straighten the diagonal idempotents
    let theta1 = theta.sandwich(&a0, &a0_inv)?;
    let mut u = DenseMatrix::zeros(field, n, n);
    for i in 0..n {
        let h = theta1.unit_image(i, i);
        for j in 0..n {
            u[(i, j)] = h[(i, j)].clone();
        }
    }
    let u_inv = u
        .inverse()
        .map_err(|_| Error::NonScalarBlockAction("idempotent images are not conjugate to E^ii".into()))?;
    let theta2 = theta1.sandwich(&u, &u_inv)?;

    let mut scalars = Vec::with_capacity(theta2.map.len());
    for (&(i, j), img) in &theta2.map {
        let c = img[(i, j)].clone();
        let mut rest = img.clone();
        rest[(i, j)] = field.zero();
        if c.is_zero() || !rest.is_zero() {
            return Err(Error::NonScalarBlockAction(format!(
                "image of E^{},{} is not a nonzero multiple of itself",
                i + 1,
                j + 1
            )));
        }
        scalars.push(((i, j), c));
    }
    let c = TransitiveFn::new(Arc::clone(&rel), field, scalars)?;
    if let Err(e) = c.ensure_transitive() {
        return Err(Error::NonScalarBlockAction(format!("diagonal scalars are not transitive: {e}")));
    }

    // (5) c = δs · g, G_δs = Ψ_{diag(s)⁻¹}
    let (s, g) = c.canonical_split()?;
    let d = DenseMatrix::from_rows(
        field,
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { s.get(i).inv().expect("nonzero") } else { field.zero() })
                    .collect()
            })
            .collect(),
    )?;
    let a = d.mul(&u)?.mul(&a0)?;
    let a = StructMatrix::new(Arc::clone(&rel), a)?;

    let out = Factorization { a, g, tau };
    let recomposed = out.to_spec()?;
    if !recomposed.same_map(phi)? {
        return Err(Error::NonScalarBlockAction("recomposition differs from the input".into()));
    }
    Ok(out)
}

/// `f[k]` = the class whose diagonal block carries the identity in
/// `Φ(ē_k)`.
fn class_bijection(images: &Images, part: &ClassPartition) -> Result<Vec<usize>> {
    let p = part.len();
    let mut f = Vec::with_capacity(p);
    let mut hit = vec![false; p];
    for k in 0..p {
        let img = images.sum_diagonal(part.class(k));
        let mut target = None;
        for l in 0..p {
            let block = part.class(l);
            let is_identity = block.iter().all(|&a| {
                block.iter().all(|&b| {
                    let v = &img[(a, b)];
                    if a == b { v.is_one() } else { v.is_zero() }
                })
            });
            let is_zero = block.iter().all(|&a| block.iter().all(|&b| img[(a, b)].is_zero()));
            match (is_identity, is_zero) {
                (true, _) if target.is_none() => target = Some(l),
                (false, true) => {}
                _ => {
                    return Err(Error::SizeObstruction(format!(
                        "image of the idempotent of class {} is not a class idempotent",
                        k + 1
                    )))
                }
            }
        }
        let l = target.ok_or_else(|| {
            Error::SizeObstruction(format!("idempotent of class {} maps to no class", k + 1))
        })?;
        if hit[l] || part.class(l).len() != part.class(k).len() {
            return Err(Error::SizeObstruction(format!(
                "classes {} and {} cannot correspond",
                k + 1,
                l + 1
            )));
        }
        hit[l] = true;
        f.push(l);
    }
    Ok(f)
}

/// Block-diagonal `A₀` with `A₀ Θ(X) ≡ X A₀` on every diagonal block.
fn block_conjugator(theta: &Images, part: &ClassPartition) -> Result<DenseMatrix> {
    let field = theta.field;
    let n = theta.rel.n();
    let mut a0 = DenseMatrix::zeros(field, n, n);
    for class in part.classes() {
        let m = class.len();
        let var = |r: usize, c: usize| r * m + c;
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (xa, &ga) in class.iter().enumerate() {
            for (xb, &gb) in class.iter().enumerate() {
                let img = theta.unit_image(ga, gb);
                let y = |r: usize, c: usize| img[(class[r], class[c])].clone();
                // (B·Y − X·B)[r][c] = Σ_t B[r][t] Y[t][c] − [r = xa] B[xb][c]
                for r in 0..m {
                    for c in 0..m {
                        let mut row = vec![field.zero(); m * m];
                        for t in 0..m {
                            row[var(r, t)] = &row[var(r, t)] + &y(t, c);
                        }
                        if r == xa {
                            row[var(xb, c)] = &row[var(xb, c)] - &field.one();
                        }
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = DenseMatrix::from_rows(field, rows)?.nullspace();
        if kernel.len() != 1 {
            return Err(Error::NonScalarBlockAction(format!(
                "block {:?} admits a {}-dimensional space of intertwiners",
                class.iter().map(|v| v + 1).collect::<Vec<_>>(),
                kernel.len()
            )));
        }
        let v = &kernel[0];
        let lead = v.iter().find(|s| !s.is_zero()).expect("kernel vector is nonzero").inv().expect("nonzero");
        for r in 0..m {
            for c in 0..m {
                a0[(class[r], class[c])] = &v[var(r, c)] * &lead;
            }
        }
    }
    Ok(a0)
}

/// Factorization when the algebra is semisimple: `Φ = Ψ_A ∘ P_τ`.
pub fn factor_semisimple(phi: &AutomorphismSpec) -> Result<(StructMatrix, Permutation)> {
    if !is_semisimple(phi.relation())? {
        return Err(Error::NotSemisimple);
    }
    let fac = factor_automorphism(phi)?;
    assert!(
        fac.g.is_identically_one(),
        "a symmetric relation has no cross-class pairs, so the canonical g is trivial"
    );
    Ok((fac.a, fac.tau))
}

impl AutomorphismSpec {
    /// Factored parts, when the spec is stored in factored form.
    pub fn factors(&self) -> Option<(&StructMatrix, &TransitiveFn, &Permutation)> {
        match self.form() {
            AutForm::Factored { a, g, tau } => Some((a, g, tau)),
            AutForm::BasisImages(_) => None,
        }
    }
}
