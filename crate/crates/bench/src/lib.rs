//! Workload generators for the benchmarks.

use sma_core::Relation;

/// `k` layers of `width` points; every point is below every point of the
/// next layer. Points inside a layer are incomparable.
pub fn layered(k: usize, width: usize) -> Relation {
    let n = k * width;
    let mut pairs: Vec<(usize, usize)> = (1..=n).map(|i| (i, i)).collect();
    for a in 0..n {
        for b in 0..n {
            if a / width < b / width {
                pairs.push((a + 1, b + 1));
            }
        }
    }
    Relation::quasi_order(n, pairs).expect("layers form a partial order")
}

/// `blocks` full blocks of size `size` arranged in a chain, listed in
/// reverse so the block form has work to do.
pub fn reversed_block_chain(blocks: usize, size: usize) -> Relation {
    let n = blocks * size;
    let level = |v: usize| blocks - 1 - v / size;
    let pairs = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| level(a) <= level(b))
        .map(|(a, b)| (a + 1, b + 1));
    Relation::quasi_order(n, pairs).expect("a chain of blocks is a quasi-order")
}
