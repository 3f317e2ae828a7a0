//! Transitive functions `g: ρ → F*` (multiplicative 1-cocycles on a
//! quasi-order), their coboundary test, and the rank of the cocycle space
//! modulo coboundaries.
//!
//! All spanning-forest based normalizations use one deterministic forest of
//! the comparability graph: each component is rooted at its largest vertex
//! and explored breadth-first with neighbors in descending order. A
//! coboundary witness `s` therefore satisfies `s(root) = 1`.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::DenseMatrix;
use crate::relation::Relation;

const MAX_REPORTED_TRIPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitiveFn {
    relation: Arc<Relation>,
    field: Field,
    values: Vec<Option<Scalar>>,
}

impl TransitiveFn {
    /// Builds `g` from 0-based values covering exactly the pairs of the
    /// relation. Diagonal values may be omitted and are set to 1; a supplied
    /// diagonal value other than 1 is rejected.
    pub fn new<I>(relation: Arc<Relation>, field: Field, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Scalar)>,
    {
        let n = relation.n();
        let mut slots: Vec<Option<Scalar>> = vec![None; n * n];
        for ((i, j), v) in values {
            if i >= n || j >= n || !relation.contains(i, j) {
                return Err(Error::DomainMismatch(format!("({},{}) is not in the relation", i + 1, j + 1)));
            }
            if v.field() != field {
                return Err(Error::FieldMismatch(field, v.field()));
            }
            if v.is_zero() {
                return Err(Error::DomainMismatch(format!("g({},{}) = 0", i + 1, j + 1)));
            }
            if i == j && !v.is_one() {
                return Err(Error::DomainMismatch(format!("g({},{}) must be 1", i + 1, i + 1)));
            }
            slots[i * n + j] = Some(v);
        }
        for i in 0..n {
            slots[i * n + i] = Some(field.one());
        }
        if let Some((i, j)) = relation.pairs().into_iter().find(|&(i, j)| slots[i * n + j].is_none()) {
            return Err(Error::DomainMismatch(format!("no value for ({},{})", i + 1, j + 1)));
        }
        Ok(TransitiveFn { relation, field, values: slots })
    }

    /// Values default to 1 on every pair not listed.
    pub fn with_defaults<I>(relation: Arc<Relation>, field: Field, overrides: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), Scalar)>,
    {
        let mut values: std::collections::BTreeMap<(usize, usize), Scalar> =
            relation.pairs().into_iter().map(|p| (p, field.one())).collect();
        for (p, v) in overrides {
            if !values.contains_key(&p) {
                return Err(Error::DomainMismatch(format!("({},{}) is not in the relation", p.0 + 1, p.1 + 1)));
            }
            values.insert(p, v);
        }
        Self::new(relation, field, values)
    }

    pub fn one(relation: Arc<Relation>, field: Field) -> Self {
        Self::with_defaults(relation, field, []).expect("constant function is well formed")
    }

    /// `g(i, j) = s(i) s(j)^-1`.
    pub fn coboundary(relation: Arc<Relation>, s: &ScalingVector) -> Result<Self> {
        let field = s.field();
        let values: Vec<_> = relation
            .pairs()
            .into_iter()
            .map(|(i, j)| ((i, j), s.ratio(i, j)))
            .collect();
        Self::new(relation, field, values)
    }

    pub fn relation(&self) -> &Arc<Relation> {
        &self.relation
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// `g(i, j)` for a 0-based pair of the relation.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        self.values[i * self.relation.n() + j]
            .as_ref()
            .unwrap_or_else(|| panic!("({},{}) is outside the domain", i + 1, j + 1))
    }

    /// `(pair, value)` in lexicographic pair order.
    pub fn entries(&self) -> Vec<((usize, usize), Scalar)> {
        self.relation.pairs().into_iter().map(|(i, j)| ((i, j), self.get(i, j).clone())).collect()
    }

    pub fn is_identically_one(&self) -> bool {
        self.relation.pairs().into_iter().all(|(i, j)| self.get(i, j).is_one())
    }

    pub fn check_transitive(&self) -> TransitivityReport {
        let n = self.relation.n();
        let rel = &self.relation;
        let mut violations = Vec::new();
        let mut total = 0;
        for j in 0..n {
            for i in (0..n).filter(|&i| rel.contains(i, j)) {
                for k in (0..n).filter(|&k| rel.contains(j, k)) {
                    if &(self.get(i, j) * self.get(j, k)) != self.get(i, k) {
                        total += 1;
                        if violations.len() < MAX_REPORTED_TRIPLES {
                            violations.push((i + 1, j + 1, k + 1));
                        }
                    }
                }
            }
        }
        violations.sort_unstable();
        TransitivityReport { ok: total == 0, total, violations }
    }

    pub(crate) fn ensure_transitive(&self) -> Result<()> {
        let report = self.check_transitive();
        match report.violations.first() {
            None => Ok(()),
            Some(&(i, j, k)) => Err(Error::NotTransitive(i, j, k)),
        }
    }

    /// Pointwise product.
    pub fn product(&self, other: &TransitiveFn) -> Result<TransitiveFn> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if *self.relation != *other.relation {
            return Err(Error::PatternMismatch);
        }
        let values: Vec<_> = self
            .relation
            .pairs()
            .into_iter()
            .map(|(i, j)| ((i, j), self.get(i, j) * other.get(i, j)))
            .collect();
        Self::new(Arc::clone(&self.relation), self.field, values)
    }

    /// Splits `g = δs · h` where `h` is 1 on every edge of the canonical
    /// spanning forest. `h` depends only on the coboundary class of `g`.
    pub fn canonical_split(&self) -> Result<(ScalingVector, TransitiveFn)> {
        self.ensure_transitive()?;
        let forest = SpanningForest::of(&self.relation);
        let s = forest.propagate(self);
        let values: Vec<_> = self
            .relation
            .pairs()
            .into_iter()
            .map(|(i, j)| ((i, j), &(self.get(i, j) * &s.get(j)) * &s.get(i).inv().expect("nonzero")))
            .collect();
        let canonical = Self::new(Arc::clone(&self.relation), self.field, values)?;
        Ok((s, canonical))
    }

    pub fn canonical_form(&self) -> Result<TransitiveFn> {
        self.canonical_split().map(|(_, h)| h)
    }

    /// Oriented product of `g` along a closed walk: a step `a → b` with
    /// `(a, b) ∈ ρ` contributes `g(a, b)`, otherwise `g(b, a)^-1`.
    pub fn walk_product(&self, walk: &[usize]) -> Scalar {
        walk.windows(2).fold(self.field.one(), |acc, w| {
            let (a, b) = (w[0], w[1]);
            let step = if self.relation.contains(a, b) {
                self.get(a, b).clone()
            } else {
                self.get(b, a).inv().expect("transitive values are nonzero")
            };
            &acc * &step
        })
    }
}

impl fmt::Display for TransitiveFn {
    /// Lists the pairs where `g` differs from 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nontrivial: Vec<String> = self
            .entries()
            .into_iter()
            .filter(|(_, v)| !v.is_one())
            .map(|((i, j), v)| format!("g({},{})={v}", i + 1, j + 1))
            .collect();
        if nontrivial.is_empty() {
            write!(f, "g ≡ 1")
        } else {
            write!(f, "{} (1 elsewhere)", nontrivial.join(", "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityReport {
    pub ok: bool,
    pub total: usize,
    /// 1-based `(i, j, k)` with `g(i,j) g(j,k) != g(i,k)`.
    pub violations: Vec<(usize, usize, usize)>,
}

/// Nonzero scalars indexed by element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalingVector(Vec<Scalar>);

impl ScalingVector {
    pub fn new(values: Vec<Scalar>) -> Result<Self> {
        if values.iter().any(Scalar::is_zero) {
            return Err(Error::DomainMismatch("scaling vector has a zero entry".into()));
        }
        if let Some(first) = values.first() {
            if let Some(other) = values.iter().find(|v| v.field() != first.field()) {
                return Err(Error::FieldMismatch(first.field(), other.field()));
            }
        }
        Ok(ScalingVector(values))
    }

    pub fn ones(field: Field, n: usize) -> Self {
        ScalingVector(vec![field.one(); n])
    }

    pub fn field(&self) -> Field {
        self.0.first().map_or(Field::Rational, Scalar::field)
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.0[i].clone()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.0
    }

    /// `s(i) s(j)^-1`.
    pub fn ratio(&self, i: usize, j: usize) -> Scalar {
        &self.0[i] * &self.0[j].inv().expect("nonzero")
    }

    pub fn inverse(&self) -> ScalingVector {
        ScalingVector(self.0.iter().map(|v| v.inv().expect("nonzero")).collect())
    }
}

/// A closed walk in the comparability graph (0-based, first = last) whose
/// oriented `g`-product is not 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolatingCycle {
    pub walk: Vec<usize>,
    pub product: Scalar,
}

impl fmt::Display for ViolatingCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.walk.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "{} (product {})", pts.join("–"), self.product)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Triviality {
    /// `g(i, j) = s(i) s(j)^-1` on all of ρ.
    Coboundary(ScalingVector),
    Nontrivial(ViolatingCycle),
}

/// Decides whether `g` is a coboundary and returns the evidence either way.
pub fn triviality_witness(g: &TransitiveFn) -> Result<Triviality> {
    g.ensure_transitive()?;
    let forest = SpanningForest::of(&g.relation);
    let s = forest.propagate(g);
    for (i, j) in g.relation.pairs() {
        if i == j || forest.is_tree_edge(i, j) {
            continue;
        }
        if g.get(i, j) != &s.ratio(i, j) {
            let walk = forest.cycle_through(i, j);
            let product = g.walk_product(&walk);
            debug_assert!(!product.is_one());
            return Ok(Triviality::Nontrivial(ViolatingCycle { walk, product }));
        }
    }
    Ok(Triviality::Coboundary(s))
}

/// Breadth-first spanning forest of the undirected comparability graph.
#[derive(Debug, Clone)]
pub struct SpanningForest {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    /// Vertices in visiting order; roots start each component.
    order: Vec<usize>,
    components: usize,
}

impl SpanningForest {
    pub fn of(rel: &Relation) -> Self {
        let n = rel.n();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut components = 0;
        for root in (0..n).rev() {
            if seen[root] {
                continue;
            }
            components += 1;
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for w in rel.comparability_neighbors(v).rev() {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(v);
                        depth[w] = depth[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        SpanningForest { parent, depth, order, components }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn is_tree_edge(&self, a: usize, b: usize) -> bool {
        self.parent[a] == Some(b) || self.parent[b] == Some(a)
    }

    /// Tree edges as `(parent, child)`.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.order
            .iter()
            .filter_map(|&v| self.parent[v].map(|p| (p, v)))
            .collect()
    }

    /// The unique `s` with `s(root) = 1` and `g(i,j) = s(i)/s(j)` on every
    /// tree edge.
    fn propagate(&self, g: &TransitiveFn) -> ScalingVector {
        let field = g.field;
        let mut s = vec![field.one(); self.parent.len()];
        for &v in &self.order {
            let Some(p) = self.parent[v] else { continue };
            s[v] = if g.relation.contains(p, v) {
                // g(p,v) = s(p)/s(v)
                &s[p] * &g.get(p, v).inv().expect("nonzero")
            } else {
                // g(v,p) = s(v)/s(p)
                &s[p] * g.get(v, p)
            };
        }
        ScalingVector(s)
    }

    /// Closed walk `a → b → ... → a` made of the edge `{a, b}` and the tree
    /// path from `b` back to `a`.
    fn cycle_through(&self, a: usize, b: usize) -> Vec<usize> {
        let (mut up_a, mut up_b) = (vec![a], vec![b]);
        let (mut x, mut y) = (a, b);
        while self.depth[x] > self.depth[y] {
            x = self.parent[x].expect("deeper vertex has a parent");
            up_a.push(x);
        }
        while self.depth[y] > self.depth[x] {
            y = self.parent[y].expect("deeper vertex has a parent");
            up_b.push(y);
        }
        while x != y {
            x = self.parent[x].expect("same component");
            y = self.parent[y].expect("same component");
            up_a.push(x);
            up_b.push(y);
        }
        let mut walk = vec![a];
        walk.extend(&up_b);
        walk.extend(up_a.iter().rev().skip(1));
        walk
    }
}

/// Integer exponent vectors spanning the cocycles modulo coboundaries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleBasis {
    pub rank: usize,
    /// Off-diagonal pairs of the relation (0-based), indexing every generator.
    pub pairs: Vec<(usize, usize)>,
    /// Each generator is an additive cocycle vanishing on the canonical
    /// spanning forest.
    pub generators: Vec<Vec<i64>>,
    pub solution_dim: usize,
    pub coboundary_dim: usize,
}

impl CocycleBasis {
    /// `g(i, j) = Π_t base_t^(k_t · x_t(i, j))` for `powers = [(base_t, k_t)]`.
    pub fn power_function(
        &self,
        relation: Arc<Relation>,
        field: Field,
        powers: &[(Scalar, i64)],
    ) -> Result<TransitiveFn> {
        if powers.len() != self.generators.len() {
            return Err(Error::DimensionMismatch { expected: self.generators.len(), got: powers.len() });
        }
        let mut values = Vec::with_capacity(self.pairs.len());
        for (idx, &(i, j)) in self.pairs.iter().enumerate() {
            let mut v = field.one();
            for ((base, k), gen) in powers.iter().zip(&self.generators) {
                let term = base
                    .pow(k * gen[idx])
                    .ok_or_else(|| Error::DomainMismatch("zero base for a cocycle power".into()))?;
                v = &v * &term;
            }
            values.push(((i, j), v));
        }
        TransitiveFn::new(relation, field, values)
    }

    /// Generator `t` as a map from 1-based pairs to nonzero exponents.
    pub fn support(&self, t: usize) -> Vec<((usize, usize), i64)> {
        self.pairs
            .iter()
            .zip(&self.generators[t])
            .filter(|(_, &e)| e != 0)
            .map(|(&(i, j), &e)| ((i + 1, j + 1), e))
            .collect()
    }
}

/// Dimension and canonical generators of the additive cocycles on ρ modulo
/// coboundaries, over the rationals.
///
/// One variable per comparable unordered pair, oriented along ρ (or `i < j`
/// when both directions are present, the reverse being its negative). The
/// constraints are `x(i,j) + x(j,k) = x(i,k)` over distinct composable
/// triples.
pub fn cocycle_rank(rel: &Relation) -> Result<CocycleBasis> {
    rel.ensure_valid()?;
    let n = rel.n();
    let q = Field::Rational;

    // var_of[i*n+j] = Some((variable, sign)) for off-diagonal (i,j) in ρ
    let mut var_of: Vec<Option<(usize, i64)>> = vec![None; n * n];
    let mut nvars = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (fwd, bwd) = (rel.contains(i, j), rel.contains(j, i));
            if !(fwd || bwd) {
                continue;
            }
            if fwd {
                var_of[i * n + j] = Some((nvars, 1));
            }
            if bwd {
                var_of[j * n + i] = Some((nvars, if fwd { -1 } else { 1 }));
            }
            nvars += 1;
        }
    }

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..n {
        for i in (0..n).filter(|&i| i != j && rel.contains(i, j)) {
            for k in (0..n).filter(|&k| k != j && k != i && rel.contains(j, k)) {
                let mut row = vec![0i64; nvars];
                for (pair, coeff) in [((i, j), 1), ((j, k), 1), ((i, k), -1)] {
                    let (v, sign) = var_of[pair.0 * n + pair.1].expect("pair is in the relation");
                    row[v] += coeff * sign;
                }
                rows.push(row.into_iter().map(|c| q.from_i64(c)).collect());
            }
        }
    }
    let constraint_rank = if rows.is_empty() || nvars == 0 {
        0
    } else {
        DenseMatrix::from_rows(q, rows.clone())?.rank()
    };
    let solution_dim = nvars - constraint_rank;

    let forest = SpanningForest::of(rel);
    let coboundary_dim = n - forest.components();
    let mut normalized = rows;
    for (p, c) in forest.tree_edges() {
        let (a, b) = (p.min(c), p.max(c));
        let (v, _) = var_of[a * n + b].or(var_of[b * n + a]).expect("tree edge is comparable");
        let mut row = vec![q.zero(); nvars];
        row[v] = q.one();
        normalized.push(row);
    }
    let kernel = if nvars == 0 {
        Vec::new()
    } else {
        DenseMatrix::from_rows(q, normalized)?.nullspace()
    };
    let rank = solution_dim - coboundary_dim;
    assert_eq!(kernel.len(), rank, "forest-normalized cocycles must complement the coboundaries");

    let pairs: Vec<(usize, usize)> = rel.pairs().into_iter().filter(|&(i, j)| i != j).collect();
    let generators = kernel
        .into_iter()
        .map(|v| {
            let ints = integer_direction(&v);
            pairs
                .iter()
                .map(|&(i, j)| {
                    let (var, sign) = var_of[i * n + j].expect("off-diagonal pair has a variable");
                    sign * ints[var]
                })
                .collect()
        })
        .collect();
    Ok(CocycleBasis { rank, pairs, generators, solution_dim, coboundary_dim })
}

/// Scales a rational vector to coprime integers with a positive leading entry.
fn integer_direction(v: &[Scalar]) -> Vec<i64> {
    let rats: Vec<_> = v.iter().map(|s| s.as_rational().expect("rational").clone()).collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut ints: Vec<BigInt> = rats.iter().map(|r| (r * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut ints {
            *x = -&*x;
        }
    }
    ints.iter().map(|x| x.to_i64().expect("cocycle exponent fits in i64")).collect()
}
