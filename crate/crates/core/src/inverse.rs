//! Inverse semigroups: unique generalized inverses, Green's relations, the
//! natural partial order, maximal subgroups, element orders and structural
//! classification.
//!
//! An element `b` is a generalized inverse of `a` when `aba = a` and
//! `bab = b`. A semigroup is *inverse* when every element has exactly one
//! generalized inverse; equivalently, idempotents commute and every element
//! has at least one generalized inverse.

use crate::tables::{self, Partition, SemigroupTable};
use serde::Serialize;
use thiserror::Error;

/// Errors for inverse-semigroup construction and analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InverseError {
    /// An element with no generalized inverse.
    #[error("element {0} has no generalized inverse")]
    NoInverse(usize),
    /// An element with two distinct generalized inverses.
    #[error("element {a} has two generalized inverses, {b1} and {b2}")]
    MultipleInverses { a: usize, b1: usize, b2: usize },
    /// An operation required an idempotent.
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    /// A subset was required to be closed under products and inverses.
    #[error("subset is not closed under products and inverses")]
    NotClosed,
}

/// A finite inverse semigroup: a verified table together with its (unique)
/// inverse map and idempotent list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseSemigroup {
    table: SemigroupTable,
    inv: Vec<usize>,
    idempotents: Vec<usize>,
}

/// Checks that every element has a unique generalized inverse and packages
/// the result. On success the standard identities are verified as internal
/// sanity checks: `(a^-1)^-1 = a`, `(ab)^-1 = b^-1 a^-1`, and idempotents
/// commute.
pub fn try_inverse(table: &SemigroupTable) -> Result<InverseSemigroup, InverseError> {
    let n = table.size();
    let mut inv = Vec::with_capacity(n);
    for a in 0..n {
        let mut found: Option<usize> = None;
        for b in 0..n {
            if table.op(table.op(a, b), a) == a && table.op(table.op(b, a), b) == b {
                match found {
                    None => found = Some(b),
                    Some(b1) => {
                        return Err(InverseError::MultipleInverses { a, b1, b2: b });
                    }
                }
            }
        }
        match found {
            Some(b) => inv.push(b),
            None => return Err(InverseError::NoInverse(a)),
        }
    }
    for a in 0..n {
        assert_eq!(inv[inv[a]], a, "inversion must be an involution");
        for b in 0..n {
            assert_eq!(
                inv[table.op(a, b)],
                table.op(inv[b], inv[a]),
                "inversion must anti-distribute over products"
            );
        }
    }
    let idempotents = table.idempotents();
    for &e in &idempotents {
        for &f in &idempotents {
            assert_eq!(
                table.op(e, f),
                table.op(f, e),
                "idempotents of an inverse semigroup must commute"
            );
        }
    }
    Ok(InverseSemigroup {
        table: table.clone(),
        inv,
        idempotents,
    })
}

/// Green's equivalences on an inverse semigroup. `R` is keyed by `a a^-1`,
/// `L` by `a^-1 a`, `H = R ∩ L`, and `D = R ∘ L` (verified symmetric).
#[derive(Debug, Clone)]
pub struct GreensData {
    pub r: Partition,
    pub l: Partition,
    pub h: Partition,
    pub d: Partition,
}

/// The natural partial order: `a <= b` iff `a = e b` for some idempotent `e`.
#[derive(Debug, Clone)]
pub struct NaturalOrder {
    n: usize,
    leq: Vec<bool>,
}

impl NaturalOrder {
    /// Whether `a <= b`.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    /// Whether `a < b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Number of elements `x` with `x <= a` (including `a`).
    pub fn below_count(&self, a: usize) -> usize {
        (0..self.n).filter(|&x| self.leq(x, a)).count()
    }

    /// Whether neither `a <= b` nor `b <= a`.
    pub fn incomparable(&self, a: usize, b: usize) -> bool {
        !self.leq(a, b) && !self.leq(b, a)
    }
}

/// Structural classification flags and summary counts, in report order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// Every element commutes with its inverse (`a a^-1 = a^-1 a`).
    pub is_clifford: bool,
    /// There is a single `D`-class.
    pub is_bisimple: bool,
    /// No two distinct comparable idempotents are `D`-related.
    pub is_completely_semisimple: bool,
    pub is_commutative: bool,
    /// Every element is idempotent (and the operation commutes).
    pub is_semilattice: bool,
    /// Exactly one idempotent.
    pub is_group: bool,
    /// The idempotents form an antichain in the natural partial order.
    pub is_primitive: bool,
    pub idempotent_count: usize,
    pub d_class_count: usize,
    /// Sorted distinct element orders.
    pub order_spectrum: Vec<usize>,
}

impl InverseSemigroup {
    /// Number of elements.
    pub fn size(&self) -> usize {
        self.table.size()
    }

    /// The underlying multiplication table.
    pub fn table(&self) -> &SemigroupTable {
        &self.table
    }

    /// The product `a * b`.
    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table.op(a, b)
    }

    /// The unique generalized inverse of `a`.
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// The full inverse map.
    pub fn inv_map(&self) -> &[usize] {
        &self.inv
    }

    /// The idempotents, ascending.
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    /// Green's relations `R`, `L`, `H`, `D`.
    ///
    /// `D` is computed as the composition `R ∘ L` (`a D b` iff some `c` has
    /// `a R c` and `c L b`) and verified symmetric, which also makes it the
    /// join of `R` and `L`.
    pub fn greens(&self) -> GreensData {
        let n = self.size();
        let rkey: Vec<usize> = (0..n).map(|a| self.op(a, self.inv[a])).collect();
        let lkey: Vec<usize> = (0..n).map(|a| self.op(self.inv[a], a)).collect();
        let hkey: Vec<usize> = (0..n).map(|a| rkey[a] * n + lkey[a]).collect();
        let r = Partition::from_labels(&rkey);
        let l = Partition::from_labels(&lkey);
        let h = Partition::from_labels(&hkey);

        // a D b iff the pair (rkey(a), lkey(b)) is realized by some element.
        let mut realized = vec![false; n * n];
        for c in 0..n {
            realized[rkey[c] * n + lkey[c]] = true;
        }
        let d_rel = |a: usize, b: usize| realized[rkey[a] * n + lkey[b]];
        for a in 0..n {
            for b in 0..n {
                assert_eq!(d_rel(a, b), d_rel(b, a), "D = R∘L must be symmetric");
            }
        }
        // Label each element by the least element D-related to it.
        let mut dlabel = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if d_rel(a, b) {
                    dlabel[a] = b;
                    break;
                }
            }
        }
        let d = Partition::from_labels(&dlabel);
        // Transitivity check: equal labels iff related.
        for a in 0..n {
            for b in 0..n {
                assert_eq!(
                    dlabel[a] == dlabel[b],
                    d_rel(a, b),
                    "D must be an equivalence"
                );
            }
        }
        GreensData { r, l, h, d }
    }

    /// The natural partial order, verified reflexive, antisymmetric,
    /// transitive and compatible with multiplication.
    pub fn natural_order(&self) -> NaturalOrder {
        let n = self.size();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = self
                    .idempotents
                    .iter()
                    .any(|&e| self.op(e, b) == a);
            }
        }
        let ord = NaturalOrder { n, leq };
        for a in 0..n {
            assert!(ord.leq(a, a), "the natural order must be reflexive");
            for b in 0..n {
                if ord.leq(a, b) && ord.leq(b, a) {
                    assert_eq!(a, b, "the natural order must be antisymmetric");
                }
                for c in 0..n {
                    if ord.leq(a, b) && ord.leq(b, c) {
                        assert!(ord.leq(a, c), "the natural order must be transitive");
                    }
                    if ord.leq(a, b) {
                        assert!(
                            ord.leq(self.op(a, c), self.op(b, c))
                                && ord.leq(self.op(c, a), self.op(c, b)),
                            "the natural order must be compatible with products"
                        );
                    }
                }
            }
        }
        ord
    }

    /// The maximal subgroup at an idempotent `e`: its `H`-class
    /// `{a : a a^-1 = a^-1 a = e}`, as an ascending element list.
    pub fn maximal_subgroup(&self, e: usize) -> Result<Vec<usize>, InverseError> {
        if !self.table.is_idempotent(e) {
            return Err(InverseError::NotIdempotent(e));
        }
        let h: Vec<usize> = (0..self.size())
            .filter(|&a| self.op(a, self.inv[a]) == e && self.op(self.inv[a], a) == e)
            .collect();
        debug_assert!(h.contains(&e));
        for &a in &h {
            for &b in &h {
                debug_assert!(h.contains(&self.op(a, b)), "H-classes of idempotents are groups");
            }
        }
        Ok(h)
    }

    /// The order of `a`: the size of the inverse subsemigroup generated by
    /// `a` alone.
    pub fn element_order(&self, a: usize) -> usize {
        tables::element_order(&self.table, &self.inv, a)
    }

    /// Sorted distinct orders of the elements in `subset`.
    pub fn order_spectrum(&self, subset: &[usize]) -> Vec<usize> {
        let mut orders: Vec<usize> = subset.iter().map(|&a| self.element_order(a)).collect();
        orders.sort_unstable();
        orders.dedup();
        orders
    }

    /// Sorted distinct orders over the whole semigroup.
    pub fn spectrum(&self) -> Vec<usize> {
        let all: Vec<usize> = (0..self.size()).collect();
        self.order_spectrum(&all)
    }

    /// Whether every element commutes with its inverse.
    pub fn is_clifford(&self) -> bool {
        (0..self.size()).all(|a| self.op(a, self.inv[a]) == self.op(self.inv[a], a))
    }

    /// Full structural classification.
    pub fn classify(&self) -> StructureReport {
        let n = self.size();
        let greens = self.greens();
        let ord = self.natural_order();
        let is_commutative = self.table.is_commutative();
        let is_semilattice = is_commutative && (0..n).all(|a| self.table.is_idempotent(a));
        let is_completely_semisimple = self.idempotents.iter().all(|&e| {
            self.idempotents
                .iter()
                .all(|&f| e == f || !greens.d.same(e, f) || !ord.leq(e, f))
        });
        let is_primitive = self
            .idempotents
            .iter()
            .all(|&e| self.idempotents.iter().all(|&f| e == f || ord.incomparable(e, f)));
        StructureReport {
            is_clifford: self.is_clifford(),
            is_bisimple: greens.d.class_count() == 1,
            is_completely_semisimple,
            is_commutative,
            is_semilattice,
            is_group: self.idempotents.len() == 1,
            is_primitive,
            idempotent_count: self.idempotents.len(),
            d_class_count: greens.d.class_count(),
            order_spectrum: self.spectrum(),
        }
    }

    /// Restricts to a subset closed under products and inverses (ascending
    /// original indices), returning the induced inverse semigroup.
    pub fn subsemigroup(&self, elements: &[usize]) -> Result<InverseSemigroup, InverseError> {
        let sub = self
            .table
            .subtable(elements)
            .map_err(|_| InverseError::NotClosed)?;
        try_inverse(&sub).map_err(|_| InverseError::NotClosed)
    }
}

/// Whether the order spectra of `a_set` and `b_set` share no order except
/// possibly 1.
pub fn coprime_order(s: &InverseSemigroup, a_set: &[usize], b_set: &[usize]) -> bool {
    let sa = s.order_spectrum(a_set);
    let sb = s.order_spectrum(b_set);
    sa.iter().all(|o| *o == 1 || !sb.contains(o))
}

/// Checks the order-characteristic property of a closed subset `t`: for every
/// order `n` realized inside `t`, *every* element of `s` of order `n` already
/// lies in `t`. Fails with [`InverseError::NotClosed`] if `t` is not closed
/// under products and inverses.
pub fn order_characteristic_check(
    s: &InverseSemigroup,
    t: &[usize],
) -> Result<bool, InverseError> {
    let member = |x: usize| t.contains(&x);
    if t.is_empty() {
        return Err(InverseError::NotClosed);
    }
    for &a in t {
        if !member(s.inv(a)) {
            return Err(InverseError::NotClosed);
        }
        for &b in t {
            if !member(s.op(a, b)) {
                return Err(InverseError::NotClosed);
            }
        }
    }
    let spectrum = s.order_spectrum(t);
    for x in 0..s.size() {
        if spectrum.contains(&s.element_order(x)) && !member(x) {
            return Ok(false);
        }
    }
    Ok(true)
}
