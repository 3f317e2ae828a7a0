//! Block upper triangular normal form of a structural matrix algebra.
//!
//! Classes are laid out along the diagonal in a linear extension of the
//! condensation, comparable classes first and classes comparable to nothing
//! last. Inside a class, elements keep their ascending order.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::relation::{ClassPartition, CondensationDag, Relation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockForm {
    pub source: Relation,
    pub partition: ClassPartition,
    pub dag: CondensationDag,
    /// Linear extension of the condensation over all classes.
    pub stage_one: Permutation,
    /// Moves the isolated blocks to the end; identity when they already are.
    pub isolation: Permutation,
    /// `isolation ∘ stage_one`.
    pub pi: Permutation,
    pub permuted: Relation,
    /// Class indices in diagonal order.
    pub class_order: Vec<usize>,
    pub block_sizes: Vec<usize>,
    pub num_comparable: usize,
    pub num_isolated: usize,
}

impl BlockForm {
    /// Block index (position on the diagonal) of each permuted index.
    pub fn block_of_position(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &m)| std::iter::repeat_n(b, m))
            .collect()
    }

    pub fn pattern(&self) -> BlockPattern {
        block_pattern(self)
    }

    /// Returns true if every pair of the permuted relation lies on or above
    /// the block diagonal.
    pub fn is_block_upper_triangular(&self) -> bool {
        let block = self.block_of_position();
        self.permuted.pairs().into_iter().all(|(i, j)| block[i] <= block[j])
    }
}

/// Builds the block form. `class_order_override`, when given, lists every
/// class index exactly once; it must be a linear extension of the
/// condensation with the isolated classes last.
pub fn build_block_form(rel: &Relation, class_order_override: Option<&[usize]>) -> Result<BlockForm> {
    let partition = ClassPartition::of(rel)?;
    let dag = CondensationDag::of(rel, &partition);
    let p = partition.len();
    let isolated = dag.isolated_classes();

    let (stage_order, class_order) = match class_order_override {
        Some(order) => {
            check_override(order, &dag, &isolated)?;
            (order.to_vec(), order.to_vec())
        }
        None => {
            let all: BTreeSet<usize> = (0..p).collect();
            let stage = dag
                .topological_order(&all)
                .ok_or_else(|| Error::InvalidRelation("condensation has a cycle".into()))?;
            let mut order: Vec<usize> = stage.iter().copied().filter(|c| !isolated.contains(c)).collect();
            order.extend(stage.iter().copied().filter(|c| isolated.contains(c)));
            (stage, order)
        }
    };

    let stage_one = layout(&partition, &stage_order, rel.n());
    let pi = layout(&partition, &class_order, rel.n());
    let isolation = pi.compose(&stage_one.inverse());
    let permuted = rel.permuted(&pi);
    let block_sizes = class_order.iter().map(|&c| partition.class(c).len()).collect();

    Ok(BlockForm {
        source: rel.clone(),
        partition,
        dag,
        stage_one,
        isolation,
        pi,
        permuted,
        class_order,
        block_sizes,
        num_comparable: p - isolated.len(),
        num_isolated: isolated.len(),
    })
}

/// `pi(r_kj) = m_1 + ... + m_{k-1} + j` for the classes in `order`.
fn layout(part: &ClassPartition, order: &[usize], n: usize) -> Permutation {
    let mut image = vec![0; n];
    let mut next = 0;
    for &c in order {
        for &v in part.class(c) {
            image[v] = next;
            next += 1;
        }
    }
    Permutation::from_images(image).expect("classes partition the ground set")
}

fn check_override(order: &[usize], dag: &CondensationDag, isolated: &BTreeSet<usize>) -> Result<()> {
    let p = dag.class_count();
    let mut pos = vec![usize::MAX; p];
    if order.len() != p {
        return Err(Error::InvalidOverride(format!("expected {p} classes, got {}", order.len())));
    }
    for (k, &c) in order.iter().enumerate() {
        if c >= p || pos[c] != usize::MAX {
            return Err(Error::InvalidOverride(format!("class index {c} invalid or repeated")));
        }
        pos[c] = k;
    }
    for &(a, b) in dag.edges() {
        if pos[a] > pos[b] {
            return Err(Error::InvalidOverride(format!(
                "class {} precedes class {} in the order but lies above it",
                b + 1,
                a + 1
            )));
        }
    }
    let tail = p - isolated.len();
    if let Some(&c) = order[..tail].iter().find(|c| isolated.contains(c)) {
        return Err(Error::InvalidOverride(format!(
            "isolated class {} must be placed after all comparable classes",
            c + 1
        )));
    }
    Ok(())
}

/// Converts a class order written as 1-based class representatives
/// (`1,5,4,2`) to class indices.
pub fn class_order_from_representatives(rel: &Relation, reps: &[usize]) -> Result<Vec<usize>> {
    let part = ClassPartition::of(rel)?;
    reps.iter()
        .map(|&r| {
            r.checked_sub(1)
                .and_then(|r0| part.class_with_representative(r0))
                .ok_or_else(|| Error::InvalidOverride(format!("{r} is not the minimum of a class")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cell {
    #[serde(rename = "F")]
    Full,
    #[serde(rename = "0")]
    Zero,
}

/// `p × p` grid of block cells in diagonal order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPattern {
    pub cells: Vec<Vec<Cell>>,
}

impl BlockPattern {
    pub fn size(&self) -> usize {
        self.cells.len()
    }

    pub fn full_above_diagonal(&self) -> Vec<(usize, usize)> {
        let p = self.size();
        (0..p)
            .flat_map(|a| (a + 1..p).map(move |b| (a, b)))
            .filter(|&(a, b)| self.cells[a][b] == Cell::Full)
            .collect()
    }
}

pub fn block_pattern(bf: &BlockForm) -> BlockPattern {
    let p = bf.class_order.len();
    let cells = (0..p)
        .map(|a| {
            (0..p)
                .map(|b| {
                    let full = a == b || (a < b && bf.dag.le(bf.class_order[a], bf.class_order[b]));
                    if full { Cell::Full } else { Cell::Zero }
                })
                .collect()
        })
        .collect();
    BlockPattern { cells }
}

/// The algebra is semisimple exactly when the relation is symmetric.
pub fn is_semisimple(rel: &Relation) -> Result<bool> {
    rel.ensure_valid()?;
    Ok(rel.is_symmetric())
}

/// ASCII rendering of the permuted pattern with block separators.
pub struct PatternGrid<'a>(pub &'a BlockForm);

impl fmt::Display for PatternGrid<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bf = self.0;
        let n = bf.permuted.n();
        let mut bounds = Vec::new();
        let mut acc = 0;
        for &m in &bf.block_sizes[..bf.block_sizes.len().saturating_sub(1)] {
            acc += m;
            bounds.push(acc);
        }
        let rule: String = {
            let mut s = String::new();
            for j in 0..n {
                if bounds.contains(&j) {
                    s.push_str("-+");
                }
                s.push_str(if j == 0 { "-" } else { "--" });
            }
            s
        };
        for i in 0..n {
            if bounds.contains(&i) {
                writeln!(f, "{rule}")?;
            }
            let mut line = String::new();
            for j in 0..n {
                if bounds.contains(&j) {
                    line.push_str(" |");
                }
                if j > 0 {
                    line.push(' ');
                }
                line.push(if bf.permuted.contains(i, j) { 'F' } else { '0' });
            }
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
