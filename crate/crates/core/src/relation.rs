//! Quasi-orders on `{1..n}`, their equivalence classes and the order
//! induced between classes.
//!
//! Elements are 0-based inside the library; every constructor that accepts
//! external pairs and every message or report meant for users is 1-based.

use std::collections::{BTreeSet, BinaryHeap};
use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cap on the number of violations a [`ValidationReport`] carries.
pub const MAX_REPORTED_VIOLATIONS: usize = 100;

/// A binary relation on `{0..n}`, stored as a dense boolean grid. Nothing
/// forces it to be a quasi-order; see [`Relation::validate`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    /// Builds a relation from 1-based pairs. Out-of-range indices fail.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::InvalidRelation("ground set must be nonempty".into()));
        }
        let mut rel = Relation::empty(n);
        for (i, j) in pairs {
            for v in [i, j] {
                if v == 0 || v > n {
                    return Err(Error::IndexOutOfRange { index: v, n });
                }
            }
            rel.insert(i - 1, j - 1);
        }
        Ok(rel)
    }

    /// Like [`Relation::from_pairs`] but fails unless the result is a quasi-order.
    pub fn quasi_order<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let rel = Self::from_pairs(n, pairs)?;
        rel.ensure_valid()?;
        Ok(rel)
    }

    pub fn empty(n: usize) -> Self {
        Relation { n, bits: vec![false; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        Relation { n, bits: vec![true; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits[i * self.n + j] = true;
    }

    /// All pairs in lexicographic order, 0-based. This order indexes the
    /// matrix-unit basis everywhere in the crate.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.contains(i, j))
            .collect()
    }

    /// Pairs as 1-based tuples, for output.
    pub fn pairs_one_based(&self) -> Vec<(usize, usize)> {
        self.pairs().into_iter().map(|(i, j)| (i + 1, j + 1)).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().into_iter().all(|(i, j)| self.contains(j, i))
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut total = 0usize;
        let mut push = |v: Violation| {
            total += 1;
            if violations.len() < MAX_REPORTED_VIOLATIONS {
                violations.push(v);
            }
        };
        for i in 0..self.n {
            if !self.contains(i, i) {
                push(Violation::MissingDiagonal(i + 1));
            }
        }
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j || !self.contains(i, j) {
                    continue;
                }
                for k in 0..self.n {
                    if j != k && self.contains(j, k) && !self.contains(i, k) {
                        push(Violation::NotTransitive {
                            first: (i + 1, j + 1),
                            second: (j + 1, k + 1),
                        });
                    }
                }
            }
        }
        ValidationReport { ok: total == 0, total, violations }
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.ok {
            Ok(())
        } else {
            Err(Error::InvalidRelation(report.violations[0].to_string()))
        }
    }

    /// Smallest quasi-order containing `self` (Warshall).
    pub fn transitive_reflexive_closure(&self) -> Relation {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            out.insert(i, i);
        }
        for k in 0..n {
            for i in 0..n {
                if !out.contains(i, k) {
                    continue;
                }
                for j in 0..n {
                    if out.contains(k, j) {
                        out.insert(i, j);
                    }
                }
            }
        }
        out
    }

    /// Conjugate by `perm`: `(i, j)` is in the result iff
    /// `(perm^-1(i), perm^-1(j))` is in `self`.
    pub fn permuted(&self, perm: &crate::perm::Permutation) -> Relation {
        let mut out = Relation::empty(self.n);
        for (i, j) in self.pairs() {
            out.insert(perm.apply(i), perm.apply(j));
        }
        out
    }

    /// Undirected comparability adjacency, off the diagonal.
    pub fn comparability_neighbors(&self, v: usize) -> impl DoubleEndedIterator<Item = usize> + '_ {
        (0..self.n).filter(move |&w| w != v && (self.contains(v, w) || self.contains(w, v)))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("n", &self.n)
            .field("pairs", &self.pairs_one_based())
            .finish()
    }
}

impl fmt::Display for Relation {
    /// ASCII incidence grid: `F` where the pair is present, `0` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<&str> = (0..self.n)
                .map(|j| if self.contains(i, j) { "F" } else { "0" })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `(i, i)` is absent.
    MissingDiagonal(usize),
    /// `first` and `second` compose but their composite is absent.
    NotTransitive {
        first: (usize, usize),
        second: (usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingDiagonal(i) => write!(f, "missing reflexive pair ({i},{i})"),
            Violation::NotTransitive { first, second } => write!(
                f,
                "({},{}) and ({},{}) present but ({},{}) missing",
                first.0, first.1, second.0, second.1, first.0, second.1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    /// Number of violations found, including any beyond the reporting cap.
    pub total: usize,
    pub violations: Vec<Violation>,
}

/// The equivalence classes of mutual relatedness, ordered by their minimum
/// element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ClassPartition {
    /// Strongly connected components of the relation digraph.
    pub fn of(rel: &Relation) -> Result<Self> {
        rel.ensure_valid()?;
        let mut comps = tarjan(rel);
        for c in &mut comps {
            c.sort_unstable();
        }
        comps.sort_unstable_by_key(|c| c[0]);
        let mut class_of = vec![0; rel.n()];
        for (k, c) in comps.iter().enumerate() {
            for &v in c {
                class_of[v] = k;
            }
        }
        Ok(ClassPartition { classes: comps, class_of })
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class(&self, k: usize) -> &[usize] {
        &self.classes[k]
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn representative(&self, k: usize) -> usize {
        self.classes[k][0]
    }

    /// Class index whose minimum element is `rep` (0-based).
    pub fn class_with_representative(&self, rep: usize) -> Option<usize> {
        self.classes.iter().position(|c| c[0] == rep)
    }
}

struct Tarjan<'a> {
    rel: &'a Relation,
    counter: usize,
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    comps: Vec<Vec<usize>>,
}

fn tarjan(rel: &Relation) -> Vec<Vec<usize>> {
    let n = rel.n();
    let mut t = Tarjan {
        rel,
        counter: 0,
        index: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if t.index[v].is_none() {
            t.visit(v);
        }
    }
    t.comps
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.index[v] = Some(self.counter);
        self.low[v] = self.counter;
        self.counter += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for w in 0..self.rel.n() {
            if w == v || !self.rel.contains(v, w) {
                continue;
            }
            match self.index[w] {
                None => {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                }
                Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(self.low[v]) == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("component root is on the stack");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.comps.push(comp);
        }
    }
}

/// The partial order between classes: `(a, b)` with `a != b` means every
/// element of class `a` is related to every element of class `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensationDag {
    p: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CondensationDag {
    pub fn of(rel: &Relation, part: &ClassPartition) -> Self {
        let p = part.len();
        let mut edges = BTreeSet::new();
        for a in 0..p {
            for b in 0..p {
                if a != b && rel.contains(part.representative(a), part.representative(b)) {
                    edges.insert((a, b));
                }
            }
        }
        CondensationDag { p, edges }
    }

    pub fn class_count(&self) -> usize {
        self.p
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.edges.contains(&(a, b))
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// Classes that take part in no edge.
    pub fn isolated_classes(&self) -> BTreeSet<usize> {
        (0..self.p)
            .filter(|&a| !self.edges.iter().any(|&(x, y)| x == a || y == a))
            .collect()
    }

    /// Kahn's algorithm restricted to `subset`, always taking the available
    /// class with the smallest index (classes are indexed by minimum
    /// element). `None` if the subset contains a cycle.
    pub fn topological_order(&self, subset: &BTreeSet<usize>) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.p];
        for &(a, b) in &self.edges {
            if subset.contains(&a) && subset.contains(&b) {
                indeg[b] += 1;
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> = subset
            .iter()
            .copied()
            .filter(|&a| indeg[a] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(subset.len());
        while let Some(Reverse(a)) = ready.pop() {
            order.push(a);
            for &(x, b) in self.edges.range((a, 0)..(a + 1, 0)) {
                debug_assert_eq!(x, a);
                if subset.contains(&b) {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.push(Reverse(b));
                    }
                }
            }
        }
        (order.len() == subset.len()).then_some(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn validate_reports_witnesses() {
        let ok = Relation::identity(3).validate();
        assert!(ok.ok && ok.violations.is_empty());

        let broken = Relation::from_pairs(3, [(1, 1), (2, 2), (3, 3), (1, 2), (2, 3)]).unwrap();
        let report = broken.validate();
        assert!(!report.ok);
        assert_eq!(
            report.violations,
            vec![Violation::NotTransitive { first: (1, 2), second: (2, 3) }]
        );
        assert_eq!(report.violations[0].to_string(), "(1,2) and (2,3) present but (1,3) missing");

        let no_diag = Relation::from_pairs(2, [(1, 1)]).unwrap().validate();
        assert_eq!(no_diag.violations, vec![Violation::MissingDiagonal(2)]);
    }

    #[test]
    fn violations_are_capped() {
        // three layers of ten, each layer below the next, no closure
        let mut rel = Relation::identity(30);
        for a in 0..20 {
            for b in (a / 10 + 1) * 10..(a / 10 + 2) * 10 {
                rel.insert(a, b);
            }
        }
        let report = rel.validate();
        assert!(report.total > MAX_REPORTED_VIOLATIONS);
        assert_eq!(report.violations.len(), MAX_REPORTED_VIOLATIONS);
    }

    #[test]
    fn out_of_range_pairs_rejected() {
        assert_eq!(
            Relation::from_pairs(3, [(1, 4)]),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        );
        assert!(Relation::from_pairs(3, [(0, 1)]).is_err());
        assert!(Relation::from_pairs(0, []).is_err());
    }

    #[test]
    fn closure_examples() {
        let chain = Relation::from_pairs(3, [(1, 2), (2, 3)]).unwrap();
        let closed = chain.transitive_reflexive_closure();
        assert_eq!(
            closed.pairs_one_based(),
            vec![(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]
        );
        assert_eq!(closed.transitive_reflexive_closure(), closed);

        let mutual = Relation::from_pairs(2, [(1, 2), (2, 1)]).unwrap();
        assert_eq!(mutual.transitive_reflexive_closure(), Relation::full(2));

        let ex1 = examples::example1();
        assert_eq!(ex1.transitive_reflexive_closure(), ex1);
    }

    #[test]
    fn classes_of_examples() {
        let one_based = |p: &ClassPartition| -> Vec<Vec<usize>> {
            p.classes().iter().map(|c| c.iter().map(|v| v + 1).collect()).collect()
        };
        let p1 = ClassPartition::of(&examples::example1()).unwrap();
        assert_eq!(one_based(&p1), vec![vec![1, 5, 6], vec![2, 3], vec![4]]);
        let p3 = ClassPartition::of(&examples::example3()).unwrap();
        assert_eq!(one_based(&p3), vec![vec![1], vec![2, 3], vec![4], vec![5, 6]]);
        let id = ClassPartition::of(&Relation::identity(4)).unwrap();
        assert_eq!(id.len(), 4);
        assert!(matches!(
            ClassPartition::of(&Relation::from_pairs(2, [(1, 2)]).unwrap()),
            Err(Error::InvalidRelation(_))
        ));
    }

    #[test]
    fn condensation_of_examples() {
        let dag_of = |rel: &Relation| {
            let part = ClassPartition::of(rel).unwrap();
            CondensationDag::of(rel, &part)
        };
        let d1 = dag_of(&examples::example1());
        assert!(d1.edges().is_empty());
        assert_eq!(d1.isolated_classes().len(), 3);

        // classes {1},{2},{3}: [1] <= [2] and [3] <= [2]
        let d2 = dag_of(&examples::example2());
        assert_eq!(d2.edges().iter().copied().collect::<Vec<_>>(), vec![(0, 1), (2, 1)]);

        // classes {1},{2,3},{4},{5,6} indexed 0..4
        let d3 = dag_of(&examples::example3());
        assert_eq!(
            d3.edges().iter().copied().collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (3, 1), (3, 2)]
        );
        assert!(d3.isolated_classes().is_empty());

        let single = dag_of(&Relation::full(3));
        assert_eq!(single.isolated_classes(), BTreeSet::from([0]));
    }
}
