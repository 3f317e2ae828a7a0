//! The three worked relations used throughout the tests, together with the
//! block-form relations they normalize to.

use crate::relation::Relation;

/// n = 6, classes {1,5,6}, {2,3}, {4}, no relations between classes.
pub fn example1() -> Relation {
    Relation::quasi_order(
        6,
        [
            (1, 1), (1, 5), (1, 6), (2, 2), (2, 3), (3, 2), (3, 3),
            (4, 4), (5, 1), (5, 5), (5, 6), (6, 1), (6, 5), (6, 6),
        ],
    )
    .expect("valid quasi-order")
}

/// n = 3, singletons with 1 ≤ 2 and 3 ≤ 2.
pub fn example2() -> Relation {
    Relation::quasi_order(3, [(1, 1), (1, 2), (2, 2), (3, 2), (3, 3)]).expect("valid quasi-order")
}

/// Block form of [`example2`]: upper triangular with (1,3) and (2,3).
pub fn example2_block() -> Relation {
    Relation::quasi_order(3, [(1, 1), (1, 3), (2, 2), (2, 3), (3, 3)]).expect("valid quasi-order")
}

/// n = 6, classes {1}, {2,3}, {4}, {5,6}.
pub fn example3() -> Relation {
    Relation::quasi_order(
        6,
        [
            (1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2), (3, 3), (4, 4), (5, 2),
            (5, 3), (5, 4), (5, 5), (5, 6), (6, 2), (6, 3), (6, 4), (6, 5), (6, 6),
        ],
    )
    .expect("valid quasi-order")
}

/// Block form of [`example3`] under the class order [1], [5,6], [4], [2,3].
pub fn example3_block() -> Relation {
    Relation::quasi_order(
        6,
        [
            (1, 1), (1, 4), (1, 5), (1, 6),
            (2, 2), (2, 3), (2, 4), (2, 5), (2, 6),
            (3, 2), (3, 3), (3, 4), (3, 5), (3, 6),
            (4, 4),
            (5, 5), (5, 6),
            (6, 5), (6, 6),
        ],
    )
    .expect("valid quasi-order")
}
