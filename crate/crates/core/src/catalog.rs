//! A catalog of named small semigroups used throughout tests and docs.

use crate::tables::SemigroupTable;

/// The one-element semigroup.
pub fn trivial() -> SemigroupTable {
    SemigroupTable::new(1, vec![0]).expect("trivial table")
}

/// The cyclic group of order `n` under addition mod `n`; `0` is the identity.
pub fn cyclic(n: usize) -> SemigroupTable {
    SemigroupTable::from_fn(n, |a, b| (a + b) % n).expect("modular addition is associative")
}

/// The Klein four-group `Z2 x Z2` under componentwise XOR.
pub fn klein_four() -> SemigroupTable {
    SemigroupTable::from_fn(4, |a, b| a ^ b).expect("xor is associative")
}

/// The chain meet-semilattice `0 < 1 < ... < n-1` with `a * b = min(a, b)`.
pub fn chain_semilattice(n: usize) -> SemigroupTable {
    SemigroupTable::from_fn(n, |a, b| a.min(b)).expect("min is associative")
}

/// The semilattice with a bottom `0` and `k` pairwise incomparable atoms
/// `1..=k`: distinct elements meet to the bottom.
pub fn antichain_with_bottom(k: usize) -> SemigroupTable {
    SemigroupTable::from_fn(k + 1, |a, b| if a == b { a } else { 0 })
        .expect("meet table is associative")
}

/// The diamond semilattice: subsets of a 2-element set under intersection,
/// encoded bitwise (`0` bottom, `1` and `2` atoms, `3` top).
pub fn diamond_semilattice() -> SemigroupTable {
    SemigroupTable::from_fn(4, |a, b| a & b).expect("bitwise and is associative")
}

/// The five-element combinatorial Brandt semigroup: elements `(i, j)` with
/// `i, j` in `{1, 2}` plus a zero. Indices: `0 = (1,1)`, `1 = (1,2)`,
/// `2 = (2,1)`, `3 = (2,2)`, `4 = zero`; `(i,j)(k,l) = (i,l)` when `j == k`,
/// zero otherwise.
pub fn brandt_b2() -> SemigroupTable {
    let pair = |i: usize, j: usize| (i - 1) * 2 + (j - 1);
    SemigroupTable::from_fn(5, |a, b| {
        if a == 4 || b == 4 {
            return 4;
        }
        let (i, j) = (a / 2 + 1, a % 2 + 1);
        let (k, l) = (b / 2 + 1, b % 2 + 1);
        if j == k {
            pair(i, l)
        } else {
            4
        }
    })
    .expect("the Brandt table is associative")
}

/// The left-zero semigroup on `n` elements (`a * b = a`). For `n >= 2` it is
/// not an inverse semigroup: every element is an inverse of every other.
pub fn left_zero(n: usize) -> SemigroupTable {
    SemigroupTable::from_fn(n, |a, _| a).expect("projection is associative")
}

/// The symmetric group on three letters, elements indexed by the
/// lexicographic rank of their one-line notation; `a * b` applies `b` first.
pub fn symmetric_3() -> SemigroupTable {
    let perms: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let rank = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    SemigroupTable::from_fn(6, |a, b| {
        let compose = [perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]];
        rank(compose)
    })
    .expect("permutation composition is associative")
}
