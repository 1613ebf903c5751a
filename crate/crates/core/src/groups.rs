//! Finite abelian groups as building blocks: direct sums of cyclic groups,
//! subgroup enumeration, the homogeneous normal form, and internal direct
//! sums of cyclic subgroups.

use crate::inverse::{try_inverse, InverseSemigroup};
use crate::tables::{generate_closure, SemigroupTable};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Default cap on the order of a constructed abelian group.
pub const DEFAULT_GROUP_CAP: usize = 64;

/// Errors for group construction and subgroup machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    /// Cyclic orders must be at least 2.
    #[error("invalid cyclic order {0} (orders must be at least 2)")]
    InvalidOrder(usize),
    /// The realized group would exceed the configured cap.
    #[error("group order {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    /// The operation requires a group (exactly one idempotent).
    #[error("the semigroup is not a group")]
    NotAGroup,
    /// The operation requires a commutative group.
    #[error("the group is not abelian")]
    NotAbelian,
}

/// A direct sum of cyclic groups, given by the list of cyclic orders
/// (each at least 2; the empty list is the trivial group). The order of the
/// list fixes the mixed-radix element encoding, so `[2, 3]` and `[3, 2]`
/// are distinct (isomorphic) values. Serializes as a bare integer array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct AbelianGroupSpec {
    cyclic_orders: Vec<usize>,
}

impl AbelianGroupSpec {
    /// Validates that every order is at least 2.
    pub fn new(cyclic_orders: Vec<usize>) -> Result<Self, GroupError> {
        if let Some(&bad) = cyclic_orders.iter().find(|&&k| k < 2) {
            return Err(GroupError::InvalidOrder(bad));
        }
        Ok(AbelianGroupSpec { cyclic_orders })
    }

    /// The list of cyclic orders.
    pub fn cyclic_orders(&self) -> &[usize] {
        &self.cyclic_orders
    }

    /// The order of the realized group (1 for the empty spec).
    pub fn order(&self) -> usize {
        self.cyclic_orders.iter().product()
    }
}

impl TryFrom<Vec<usize>> for AbelianGroupSpec {
    type Error = GroupError;
    fn try_from(orders: Vec<usize>) -> Result<Self, GroupError> {
        AbelianGroupSpec::new(orders)
    }
}

impl From<AbelianGroupSpec> for Vec<usize> {
    fn from(spec: AbelianGroupSpec) -> Vec<usize> {
        spec.cyclic_orders
    }
}

/// Builds the direct sum with the default order cap.
pub fn build_abelian(spec: &AbelianGroupSpec) -> Result<InverseSemigroup, GroupError> {
    build_abelian_with_cap(spec, DEFAULT_GROUP_CAP)
}

/// Builds the direct sum of cyclic groups as a multiplication table with
/// mixed-radix element encoding (first listed order is the most significant
/// digit) and componentwise addition.
pub fn build_abelian_with_cap(
    spec: &AbelianGroupSpec,
    cap: usize,
) -> Result<InverseSemigroup, GroupError> {
    let size = spec.order();
    if size > cap {
        return Err(GroupError::SizeCapExceeded { size, cap });
    }
    let orders = spec.cyclic_orders();
    let table = SemigroupTable::from_fn(size, |a, b| {
        let mut result = 0;
        let (mut ra, mut rb) = (a, b);
        let mut stride = size;
        for &n in orders {
            stride /= n;
            let (da, db) = (ra / stride, rb / stride);
            ra %= stride;
            rb %= stride;
            result += ((da + db) % n) * stride;
        }
        result
    })
    .expect("componentwise modular addition is associative");
    Ok(try_inverse(&table).expect("abelian group tables are inverse semigroups"))
}

/// Enumerates all subgroups of a finite group as ascending element lists,
/// sorted by size then lexicographically. Every subgroup arises as the
/// closure of a generating subset, so breadth-first extension from the
/// trivial subgroup finds them all.
pub fn subgroups(g: &InverseSemigroup) -> Result<Vec<Vec<usize>>, GroupError> {
    if g.idempotents().len() != 1 {
        return Err(GroupError::NotAGroup);
    }
    let identity = g.idempotents()[0];
    let inv_map = g.inv_map();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: Vec<Vec<usize>> = vec![vec![identity]];
    seen.insert(vec![identity]);
    while let Some(h) = queue.pop() {
        for x in 0..g.size() {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = h.clone();
            gens.push(x);
            let closure = generate_closure(g.table(), &gens, true, Some(inv_map))
                .expect("nonempty generator sets close");
            if seen.insert(closure.elements.clone()) {
                queue.push(closure.elements);
            }
        }
    }
    let mut result: Vec<Vec<usize>> = seen.into_iter().collect();
    result.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(result)
}

/// Splits `n` into its prime-power components, e.g. `12 -> [(2, 2), (3, 1)]`
/// (prime, exponent), primes ascending.
fn prime_power_components(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Whether the spec realizes a homogeneous abelian group: decompose every
/// cyclic order into prime-power factors; the group is homogeneous exactly
/// when, for each prime, all of its factors share one exponent — that is,
/// the group is a direct sum over primes `p` of `Z_{p^{m_p}}^{n_p}`.
pub fn is_homogeneous_abelian_form(spec: &AbelianGroupSpec) -> bool {
    let mut exponents: BTreeMap<usize, BTreeSet<u32>> = BTreeMap::new();
    for &order in spec.cyclic_orders() {
        for (p, e) in prime_power_components(order) {
            exponents.entry(p).or_default().insert(e);
        }
    }
    exponents.values().all(|es| es.len() == 1)
}

/// Whether the subgroup generated by `a` is the internal direct sum of the
/// cyclic subgroups of the listed elements: each `<a_i>` meets the closure
/// of the remaining elements trivially, and the orders multiply up. An
/// empty list vacuously generates the trivial subgroup and passes.
pub fn disjoint_subset_check(g: &InverseSemigroup, a: &[usize]) -> Result<bool, GroupError> {
    if g.idempotents().len() != 1 {
        return Err(GroupError::NotAGroup);
    }
    if !g.table().is_commutative() {
        return Err(GroupError::NotAbelian);
    }
    assert!(a.iter().all(|&x| x < g.size()), "elements must index the group");
    if a.is_empty() {
        return Ok(true);
    }
    let identity = g.idempotents()[0];
    let closure_of = |gens: &[usize]| -> Vec<usize> {
        if gens.is_empty() {
            vec![identity]
        } else {
            generate_closure(g.table(), gens, true, Some(g.inv_map()))
                .expect("nonempty generator sets close")
                .elements
        }
    };
    let cyclics: Vec<Vec<usize>> = a.iter().map(|&x| closure_of(&[x])).collect();
    for i in 0..a.len() {
        let rest: Vec<usize> = a
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &x)| x)
            .collect();
        let rest_closure = closure_of(&rest);
        let meets_trivially = cyclics[i]
            .iter()
            .all(|x| *x == identity || rest_closure.binary_search(x).is_err());
        if !meets_trivially {
            return Ok(false);
        }
    }
    let whole = closure_of(a);
    let product: usize = cyclics.iter().map(|c| c.len()).product();
    Ok(whole.len() == product)
}
