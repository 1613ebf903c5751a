//! Raw finite semigroup multiplication tables.
//!
//! A [`SemigroupTable`] is an `n x n` row-major table over elements `0..n`
//! whose operation has been verified associative. This module also provides
//! the plain-text table format, closure computation, identity adjunction,
//! direct products, element deletion, exhaustive subsemigroup enumeration and
//! element orders, plus the [`Partition`] utility shared by Green's relations
//! and congruences.

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Default size cap for subsemigroup enumeration and related exhaustive walks.
pub const DEFAULT_CAP: usize = 24;

/// Errors for table construction and table-level computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    /// A table entry names an element outside `0..size`.
    #[error("entry at row {row}, column {col} is {value}, outside 0..{size}")]
    OutOfRange {
        row: usize,
        col: usize,
        value: usize,
        size: usize,
    },
    /// The operation fails associativity; the witness is the first failing
    /// triple in lexicographic order.
    #[error("not associative at ({a}, {b}, {c}): ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    /// The empty semigroup is not supported.
    #[error("a table must have at least one element")]
    Empty,
    /// A closure was requested from no generators.
    #[error("generator set is empty")]
    EmptyGeneratorSet,
    /// A subset is not closed under the operation; `{a}*{b}` escapes it.
    #[error("subset is not closed: {a}*{b} lands outside the subset")]
    NotClosed { a: usize, b: usize },
    /// An enumeration or construction exceeded its size cap.
    #[error("size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    /// The plain-text form could not be parsed.
    #[error("malformed table text: {0}")]
    Malformed(String),
}

/// A verified finite semigroup multiplication table.
///
/// Construction checks that every entry is in range and that the operation is
/// associative, so holding a `SemigroupTable` is proof of semigroup-ness.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SemigroupTable {
    size: usize,
    entries: Vec<usize>,
}

impl fmt::Debug for SemigroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SemigroupTable(n={}; {})", self.size, self.to_text().replace('\n', " / "))
    }
}

impl SemigroupTable {
    /// Builds a table from row-major entries, verifying range and
    /// associativity. The associativity witness, if any, is the first failing
    /// triple `(a, b, c)` in lexicographic order.
    pub fn new(size: usize, entries: Vec<usize>) -> Result<Self, TableError> {
        if size == 0 {
            return Err(TableError::Empty);
        }
        assert_eq!(
            entries.len(),
            size * size,
            "entry vector must hold size*size values"
        );
        for (i, &v) in entries.iter().enumerate() {
            if v >= size {
                return Err(TableError::OutOfRange {
                    row: i / size,
                    col: i % size,
                    value: v,
                    size,
                });
            }
        }
        let t = SemigroupTable { size, entries };
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if t.op(t.op(a, b), c) != t.op(a, t.op(b, c)) {
                        return Err(TableError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(t)
    }

    /// Builds a table from an operation closure (for generated constructions).
    pub fn from_fn(size: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self, TableError> {
        let mut entries = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                entries.push(op(a, b));
            }
        }
        Self::new(size, entries)
    }

    /// Number of elements.
    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// The product `a * b`.
    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.entries[a * self.size + b]
    }

    /// Row of `a`: all products `a * b` for `b` ascending.
    pub fn row(&self, a: usize) -> &[usize] {
        &self.entries[a * self.size..(a + 1) * self.size]
    }

    /// Raw row-major entries.
    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Rows as nested vectors (the JSON shape used by reports).
    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.size).map(|a| self.row(a).to_vec()).collect()
    }

    /// Whether `a * a == a`.
    #[inline]
    pub fn is_idempotent(&self, a: usize) -> bool {
        self.op(a, a) == a
    }

    /// All idempotent elements, ascending.
    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.size).filter(|&a| self.is_idempotent(a)).collect()
    }

    /// Whether the operation is commutative.
    pub fn is_commutative(&self) -> bool {
        (0..self.size)
            .all(|a| (a + 1..self.size).all(|b| self.op(a, b) == self.op(b, a)))
    }

    /// Parses the plain-text format: optional `#` comment lines, then the
    /// element count `n`, then `n` rows of `n` whitespace-separated 0-based
    /// entries. Token boundaries may fall anywhere; only the token stream
    /// matters.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut tokens = Vec::new();
        for line in text.lines() {
            let body = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            };
            for tok in body.split_whitespace() {
                tokens.push(tok);
            }
        }
        let mut it = tokens.into_iter();
        let n_tok = it
            .next()
            .ok_or_else(|| TableError::Malformed("no tokens: expected the element count".into()))?;
        let n: usize = n_tok
            .parse()
            .map_err(|_| TableError::Malformed(format!("invalid element count '{n_tok}'")))?;
        if n == 0 {
            return Err(TableError::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for tok in it.by_ref() {
            let v: usize = tok
                .parse()
                .map_err(|_| TableError::Malformed(format!("invalid table entry '{tok}'")))?;
            entries.push(v);
            if entries.len() == n * n {
                break;
            }
        }
        if entries.len() < n * n {
            return Err(TableError::Malformed(format!(
                "expected {} entries, found {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(extra) = it.next() {
            return Err(TableError::Malformed(format!(
                "unexpected trailing token '{extra}'"
            )));
        }
        Self::new(n, entries)
    }

    /// Writes the canonical plain-text form: the element count line, then one
    /// row per line with single-space separators and a trailing newline.
    /// `parse` of the output reproduces the table byte-exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.size.to_string());
        out.push('\n');
        for a in 0..self.size {
            let row: Vec<String> = self.row(a).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Restricts the table to a closed subset. `elements` must be strictly
    /// ascending; entries are reindexed by position. Fails with
    /// [`TableError::NotClosed`] naming the first escaping product (in
    /// original indices).
    pub fn subtable(&self, elements: &[usize]) -> Result<SemigroupTable, TableError> {
        assert!(
            elements.windows(2).all(|w| w[0] < w[1]),
            "subtable elements must be strictly ascending"
        );
        assert!(
            elements.iter().all(|&x| x < self.size),
            "subtable elements must be in range"
        );
        if elements.is_empty() {
            return Err(TableError::Empty);
        }
        let pos = |x: usize| elements.binary_search(&x).ok();
        let k = elements.len();
        let mut entries = Vec::with_capacity(k * k);
        for &a in elements {
            for &b in elements {
                match pos(self.op(a, b)) {
                    Some(p) => entries.push(p),
                    None => return Err(TableError::NotClosed { a, b }),
                }
            }
        }
        // Associativity is inherited; `new` re-checks cheaply at these sizes.
        SemigroupTable::new(k, entries)
    }
}

/// A subset together with the closure evidence that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetClosure {
    /// A generating set for `elements` (not necessarily minimal), ascending.
    pub generators: Vec<usize>,
    /// The closed subset, ascending.
    pub elements: Vec<usize>,
    /// Whether the subset is closed under the supplied inverse map.
    pub inverse_closed: bool,
}

/// Closes a generator set under the operation (and under `inv` when
/// `use_inverses` is set; `inv` must then be supplied and total).
pub fn generate_closure(
    table: &SemigroupTable,
    generators: &[usize],
    use_inverses: bool,
    inv: Option<&[usize]>,
) -> Result<SubsetClosure, TableError> {
    if generators.is_empty() {
        return Err(TableError::EmptyGeneratorSet);
    }
    assert!(
        generators.iter().all(|&g| g < table.size()),
        "generators must be in range"
    );
    let inv = if use_inverses {
        let inv = inv.expect("use_inverses requires an inverse map");
        assert_eq!(inv.len(), table.size(), "inverse map must be total");
        Some(inv)
    } else {
        None
    };

    let n = table.size();
    let mut member = vec![false; n];
    let mut order: Vec<usize> = Vec::new();
    let mut gens: Vec<usize> = generators.to_vec();
    gens.sort_unstable();
    gens.dedup();
    for &g in &gens {
        if !member[g] {
            member[g] = true;
            order.push(g);
        }
    }
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        if let Some(inv) = inv {
            let y = inv[x];
            if !member[y] {
                member[y] = true;
                order.push(y);
            }
        }
        for j in 0..=i {
            let y = order[j];
            for p in [table.op(x, y), table.op(y, x)] {
                if !member[p] {
                    member[p] = true;
                    order.push(p);
                }
            }
        }
        i += 1;
    }
    let mut elements = order;
    elements.sort_unstable();
    let inverse_closed = match inv {
        Some(inv) => elements.iter().all(|&x| member[inv[x]]),
        None => {
            // Report closure under inverses when a map was supplied even if
            // it was not used for generation.
            true
        }
    };
    Ok(SubsetClosure {
        generators: gens,
        elements,
        inverse_closed,
    })
}

/// The order of element `a`: the size of the subsemigroup generated by `a`
/// together with its inverse (`inv` must be the table's inverse map).
pub fn element_order(table: &SemigroupTable, inv: &[usize], a: usize) -> usize {
    generate_closure(table, &[a], true, Some(inv))
        .expect("singleton generator set is never empty")
        .elements
        .len()
}

/// Adjoins a new identity element at index `size`, whether or not the table
/// already has one.
pub fn adjoin_identity(table: &SemigroupTable) -> SemigroupTable {
    let n = table.size();
    let m = n + 1;
    let mut entries = vec![0usize; m * m];
    for a in 0..n {
        for b in 0..n {
            entries[a * m + b] = table.op(a, b);
        }
    }
    for a in 0..m {
        entries[a * m + n] = a;
        entries[n * m + a] = a;
    }
    SemigroupTable::new(m, entries).expect("adjoining an identity preserves associativity")
}

/// Direct product; `(a, b)` is encoded as `a * |T| + b` where `T` is `right`.
pub fn direct_product(left: &SemigroupTable, right: &SemigroupTable) -> SemigroupTable {
    let n = left.size();
    let m = right.size();
    SemigroupTable::from_fn(n * m, |x, y| {
        let (xa, xb) = (x / m, x % m);
        let (ya, yb) = (y / m, y % m);
        left.op(xa, ya) * m + right.op(xb, yb)
    })
    .expect("a direct product of semigroups is associative")
}

/// Deletes one element, keeping the rest as a semigroup. Fails with
/// [`TableError::NotClosed`] if some remaining product equals the deleted
/// element, and [`TableError::Empty`] when deleting the only element.
pub fn delete_element_subsemigroup(
    table: &SemigroupTable,
    victim: usize,
) -> Result<SemigroupTable, TableError> {
    assert!(victim < table.size(), "victim must be in range");
    let keep: Vec<usize> = (0..table.size()).filter(|&x| x != victim).collect();
    table.subtable(&keep)
}

/// Enumerates every subsemigroup (inverse subsemigroup when `use_inverses`)
/// as closures of growing generator sets, returned sorted by size then
/// lexicographically by element list. The full semigroup is included; the
/// empty set is not. Fails with [`TableError::SizeCapExceeded`] when the
/// table itself is larger than `cap`.
pub fn enumerate_subsemigroups(
    table: &SemigroupTable,
    use_inverses: bool,
    inv: Option<&[usize]>,
    cap: usize,
) -> Result<Vec<SubsetClosure>, TableError> {
    let n = table.size();
    if n > cap {
        return Err(TableError::SizeCapExceeded { size: n, cap });
    }
    // BFS over closed subsets: close each singleton, then repeatedly extend
    // each discovered subset by one new element and close again.
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut first_gens: Vec<(Vec<usize>, Vec<usize>, bool)> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for g in 0..n {
        let c = generate_closure(table, &[g], use_inverses, inv)?;
        if seen.insert(c.elements.clone()) {
            first_gens.push((c.elements.clone(), c.generators.clone(), c.inverse_closed));
            frontier.push(c.elements);
        }
    }
    while let Some(base) = frontier.pop() {
        for g in 0..n {
            if base.binary_search(&g).is_ok() {
                continue;
            }
            let mut gens = base.clone();
            gens.push(g);
            let c = generate_closure(table, &gens, use_inverses, inv)?;
            if seen.insert(c.elements.clone()) {
                first_gens.push((c.elements.clone(), c.generators.clone(), c.inverse_closed));
                frontier.push(c.elements);
            }
        }
    }
    let mut out: Vec<SubsetClosure> = first_gens
        .into_iter()
        .map(|(elements, generators, inverse_closed)| SubsetClosure {
            generators,
            elements,
            inverse_closed,
        })
        .collect();
    out.sort_by(|a, b| {
        (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements))
    });
    Ok(out)
}

/// A partition of `0..n` with classes identified by their least member and
/// listed in ascending order of that least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition from any labeling (equal label = same class);
    /// labels are normalized to class indices ordered by least member.
    pub fn from_labels(labels: &[usize]) -> Partition {
        let n = labels.len();
        let mut first_seen: Vec<(usize, usize)> = Vec::new(); // (label, class idx)
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let lbl = labels[x];
            let idx = match first_seen.iter().find(|(l, _)| *l == lbl) {
                Some(&(_, idx)) => idx,
                None => {
                    let idx = classes.len();
                    first_seen.push((lbl, idx));
                    classes.push(Vec::new());
                    idx
                }
            };
            class_of[x] = idx;
            classes[idx].push(x);
        }
        Partition { class_of, classes }
    }

    /// Number of underlying elements.
    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    /// Index of the class containing `x` (classes ordered by least member).
    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    /// The classes, each ascending, ordered by least member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Whether `a` and `b` lie in the same class.
    pub fn same(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    /// Independent associativity oracle: brute force over all triples.
    fn assoc_witness(size: usize, entries: &[usize]) -> Option<(usize, usize, usize)> {
        let op = |a: usize, b: usize| entries[a * size + b];
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    if op(op(a, b), c) != op(a, op(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Independent subsemigroup oracle: filter all nonempty subsets for
    /// closure (and inverse-closure when requested).
    fn subsets_closed(
        t: &SemigroupTable,
        use_inverses: bool,
        inv: Option<&[usize]>,
    ) -> Vec<Vec<usize>> {
        let n = t.size();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let has = |x: usize| mask & (1 << x) != 0;
            let closed = set.iter().all(|&a| set.iter().all(|&b| has(t.op(a, b))))
                && (!use_inverses || set.iter().all(|&a| has(inv.unwrap()[a])));
            if closed {
                out.push(set);
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    #[test]
    fn singleton_table_is_valid() {
        let t = SemigroupTable::new(1, vec![0]).unwrap();
        assert_eq!(t.size(), 1);
        assert_eq!(t.op(0, 0), 0);
    }

    #[test]
    fn left_zero_is_a_semigroup() {
        let t = catalog::left_zero(2);
        assert_eq!(assoc_witness(2, t.entries()), None);
        assert!(!t.is_commutative());
    }

    #[test]
    fn non_associative_table_reports_first_lex_witness() {
        // rows [1,0],[0,0]: the oracle and the validator must agree on the
        // first failing triple in lexicographic order.
        let entries = vec![1, 0, 0, 0];
        let expected = assoc_witness(2, &entries).expect("this table is not associative");
        match SemigroupTable::new(2, entries) {
            Err(TableError::NotAssociative { a, b, c }) => assert_eq!((a, b, c), expected),
            other => panic!("expected NotAssociative, got {other:?}"),
        }
    }

    #[test]
    fn out_of_range_entry_is_reported_with_position() {
        let err = SemigroupTable::new(2, vec![0, 1, 1, 5]).unwrap_err();
        assert_eq!(
            err,
            TableError::OutOfRange { row: 1, col: 1, value: 5, size: 2 }
        );
    }

    #[test]
    fn empty_table_is_rejected() {
        assert_eq!(SemigroupTable::new(0, vec![]).unwrap_err(), TableError::Empty);
    }

    #[test]
    fn closures_in_the_cyclic_group_of_order_four() {
        let z4 = catalog::cyclic(4);
        let inv: Vec<usize> = (0..4).map(|i| (4 - i) % 4).collect();
        let c1 = generate_closure(&z4, &[1], false, None).unwrap();
        assert_eq!(c1.elements, vec![0, 1, 2, 3]);
        let c2 = generate_closure(&z4, &[2], false, None).unwrap();
        assert_eq!(c2.elements, vec![0, 2]);
        let ci = generate_closure(&z4, &[2], true, Some(&inv)).unwrap();
        assert_eq!(ci.elements, vec![0, 2]);
        assert!(ci.inverse_closed);
        assert_eq!(
            generate_closure(&z4, &[], false, None).unwrap_err(),
            TableError::EmptyGeneratorSet
        );
    }

    #[test]
    fn closure_of_an_idempotent_is_itself() {
        let chain = catalog::chain_semilattice(2);
        let c = generate_closure(&chain, &[1], false, None).unwrap();
        assert_eq!(c.elements, vec![1]);
    }

    #[test]
    fn adjoin_identity_adds_a_fresh_identity() {
        let t = catalog::trivial();
        let m = adjoin_identity(&t);
        assert_eq!(m.size(), 2);
        for a in 0..2 {
            assert_eq!(m.op(a, 1), a);
            assert_eq!(m.op(1, a), a);
        }
        // Adjoining to a monoid: the old identity stops being an identity for
        // the new element.
        let z2 = catalog::cyclic(2);
        let m2 = adjoin_identity(&z2);
        assert_eq!(m2.size(), 3);
        assert_eq!(m2.op(0, 2), 0, "old identity absorbs nothing new");
        assert_ne!(m2.op(0, 2), 2, "0 is no longer an identity for the new element");
        for a in 0..3 {
            assert_eq!(m2.op(a, 2), a);
            assert_eq!(m2.op(2, a), a);
        }
    }

    #[test]
    fn direct_product_encodes_pairs_row_major() {
        let z2 = catalog::cyclic(2);
        let z3 = catalog::cyclic(3);
        let p = direct_product(&z2, &z3);
        assert_eq!(p.size(), 6);
        assert!(p.is_commutative());
        // (1,2)*(1,2) = (0,1): 1*3+2=5, result 0*3+1=1.
        assert_eq!(p.op(5, 5), 1);
        // Product with the trivial semigroup on the left is the identity map
        // on indices.
        let t = catalog::trivial();
        let q = direct_product(&t, &z3);
        assert_eq!(q, z3);
    }

    #[test]
    fn product_of_chains_is_a_square_semilattice() {
        let c = catalog::chain_semilattice(2);
        let p = direct_product(&c, &c);
        assert_eq!(p.size(), 4);
        assert!(p.is_commutative());
        assert!((0..4).all(|a| p.is_idempotent(a)));
    }

    #[test]
    fn delete_element_requires_closure() {
        let z2 = catalog::cyclic(2);
        // Deleting the identity leaves {1} with 1*1 = 0 escaping.
        assert_eq!(
            delete_element_subsemigroup(&z2, 0).unwrap_err(),
            TableError::NotClosed { a: 1, b: 1 }
        );
        // Adjoin-then-delete restores the original table.
        let chain = catalog::chain_semilattice(3);
        let m = adjoin_identity(&chain);
        let back = delete_element_subsemigroup(&m, 3).unwrap();
        assert_eq!(back, chain);
    }

    #[test]
    fn monoid_product_minus_identity_pair_has_expected_size() {
        // |T^1 x T'^1| - 1 with T = T' = Z2: 3*3 - 1 = 8.
        let z2 = catalog::cyclic(2);
        let m = adjoin_identity(&z2);
        let p = direct_product(&m, &m);
        let w = delete_element_subsemigroup(&p, p.size() - 1).unwrap();
        assert_eq!(w.size(), 8);
    }

    #[test]
    fn subsemigroup_enumeration_matches_subset_filter_oracle() {
        for (t, use_inv, inv) in [
            (catalog::cyclic(4), true, Some((0..4).map(|i| (4 - i) % 4).collect::<Vec<_>>())),
            (catalog::cyclic(4), false, None),
            (catalog::chain_semilattice(2), false, None),
            (catalog::brandt_b2(), false, None),
            (catalog::brandt_b2(), true, Some(vec![0, 2, 1, 3, 4])),
        ] {
            let got = enumerate_subsemigroups(&t, use_inv, inv.as_deref(), DEFAULT_CAP).unwrap();
            let got_sets: Vec<Vec<usize>> = got.iter().map(|c| c.elements.clone()).collect();
            let expected = subsets_closed(&t, use_inv, inv.as_deref());
            assert_eq!(got_sets, expected);
            // Each reported generating set actually generates its subset.
            for c in &got {
                let re = generate_closure(&t, &c.generators, use_inv, inv.as_deref()).unwrap();
                assert_eq!(re.elements, c.elements);
            }
        }
    }

    #[test]
    fn known_subsemigroup_counts() {
        let z4 = catalog::cyclic(4);
        let inv: Vec<usize> = (0..4).map(|i| (4 - i) % 4).collect();
        assert_eq!(
            enumerate_subsemigroups(&z4, true, Some(&inv), DEFAULT_CAP).unwrap().len(),
            3,
            "Z4 has subgroups 1, Z2, Z4"
        );
        let chain = catalog::chain_semilattice(2);
        assert_eq!(
            enumerate_subsemigroups(&chain, false, None, DEFAULT_CAP).unwrap().len(),
            3,
            "a 2-chain has two singletons and itself"
        );
        let trivial = catalog::trivial();
        assert_eq!(
            enumerate_subsemigroups(&trivial, false, None, DEFAULT_CAP).unwrap().len(),
            1
        );
    }

    #[test]
    fn enumeration_respects_the_cap() {
        let t = catalog::cyclic(5);
        assert_eq!(
            enumerate_subsemigroups(&t, false, None, 4).unwrap_err(),
            TableError::SizeCapExceeded { size: 5, cap: 4 }
        );
    }

    #[test]
    fn element_orders() {
        let b2 = catalog::brandt_b2();
        let inv = vec![0, 2, 1, 3, 4];
        // The closure of a non-idempotent Brandt element under product and
        // inverse is the whole 5-element semigroup.
        assert_eq!(element_order(&b2, &inv, 1), 5);
        assert_eq!(element_order(&b2, &inv, 0), 1, "idempotents have order 1");
        let z6 = catalog::cyclic(6);
        let inv6: Vec<usize> = (0..6).map(|i| (6 - i) % 6).collect();
        assert_eq!(element_order(&z6, &inv6, 1), 6);
        assert_eq!(element_order(&z6, &inv6, 2), 3);
        assert_eq!(element_order(&z6, &inv6, 3), 2);
        assert_eq!(element_order(&z6, &inv6, 0), 1);
    }

    #[test]
    fn parse_accepts_comments_and_loose_whitespace() {
        let text = "# a 2-chain\n2\n0 0   # bottom row\n0 1\n";
        let t = SemigroupTable::parse(text).unwrap();
        assert_eq!(t, catalog::chain_semilattice(2));
    }

    #[test]
    fn parse_rejects_malformed_inputs() {
        assert!(matches!(
            SemigroupTable::parse(""),
            Err(TableError::Malformed(_))
        ));
        assert!(matches!(
            SemigroupTable::parse("2\n0 0 0\n"),
            Err(TableError::Malformed(_))
        ));
        assert!(matches!(
            SemigroupTable::parse("2\n0 0 0 1 7\n"),
            Err(TableError::Malformed(_))
        ));
        assert!(matches!(
            SemigroupTable::parse("1\nx\n"),
            Err(TableError::Malformed(_))
        ));
        assert!(matches!(
            SemigroupTable::parse("0\n"),
            Err(TableError::Empty)
        ));
        assert!(matches!(
            SemigroupTable::parse("2\n0 3 0 1\n"),
            Err(TableError::OutOfRange { .. })
        ));
    }

    #[test]
    fn text_round_trip_is_byte_exact() {
        for t in [
            catalog::trivial(),
            catalog::cyclic(6),
            catalog::brandt_b2(),
            catalog::chain_semilattice(4),
            catalog::klein_four(),
        ] {
            let text = t.to_text();
            let back = SemigroupTable::parse(&text).unwrap();
            assert_eq!(back, t);
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn subtable_reindexes_and_reports_escapes() {
        let z4 = catalog::cyclic(4);
        let sub = z4.subtable(&[0, 2]).unwrap();
        assert_eq!(sub, catalog::cyclic(2));
        assert_eq!(
            z4.subtable(&[0, 1]).unwrap_err(),
            TableError::NotClosed { a: 1, b: 1 }
        );
    }

    #[test]
    fn partition_normalizes_labels_by_least_member() {
        let p = Partition::from_labels(&[7, 3, 7, 1]);
        assert_eq!(p.class_count(), 3);
        assert_eq!(p.classes(), &[vec![0, 2], vec![1], vec![3]]);
        assert!(p.same(0, 2));
        assert!(!p.same(0, 1));
        assert_eq!(p.class_of(3), 2);
    }
}
