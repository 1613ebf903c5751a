//! Congruences, quotients, amalgamated free products, and class-level
//! closure properties (hereditary, joint embedding, amalgamation).
//!
//! The amalgamated product of two commutative inverse semigroups `T`, `T'`
//! over matched subalgebras is realized inside the direct product of their
//! monoid extensions with the doubled identity removed, modulo the least
//! congruence identifying the two copies of the shared subalgebra. Both
//! factor embeddings and the exactness of the shared image are verified on
//! every call, never assumed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clifford::{CliffordError, CliffordSystem};
use crate::groups::{build_abelian, AbelianGroupSpec};
use crate::inverse::{try_inverse, InverseSemigroup};
use crate::morphisms::{
    embeddings_with_seed, find_embeddings, find_homomorphisms, find_isomorphisms, Morphism,
};
use crate::semilattice::{enumerate_semilattices_up_to, Semilattice};
use crate::tables::{
    adjoin_identity, direct_product, enumerate_subsemigroups, Partition, SemigroupTable,
};

/// Largest size bound accepted by [`enumerate_members`]; enumeration is
/// exhaustive up to isomorphism and grows steeply past this point.
pub const MEMBER_ENUMERATION_CAP: usize = 6;

/// Errors from amalgamation and class-property machinery.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FraisseError {
    /// Both factors of an amalgamated product must be commutative.
    #[error("both factors of the amalgam must be commutative")]
    NotCommutative,
    /// The quotient of the amalgam failed to have unique generalized
    /// inverses (defensive; commutative inverse factors never trigger it).
    #[error("the amalgam quotient is not an inverse semigroup")]
    NotInverse,
    /// The designated subalgebras are not matched isomorphically.
    #[error("the designated subalgebras do not match: {0}")]
    NotMatchingSubalgebras(String),
    /// A factor failed to embed injectively, or the factor images overlap
    /// outside the shared subalgebra.
    #[error("amalgam embedding collapsed: {0}")]
    EmbeddingCollapsed(String),
    /// A listed structure does not satisfy the class description.
    #[error("member {member} does not satisfy the class description")]
    SpecViolation { member: usize },
    /// The requested computation is not available for this class shape.
    #[error("unsupported class: {0}")]
    UnsupportedClass(String),
    /// An enumeration bound exceeds the supported cap.
    #[error("size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
}

/// A congruence on a semigroup: a partition of its elements into blocks
/// compatible with the operation on both sides. Block ids follow the least
/// member of each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    /// The underlying partition of `0..n`.
    pub partition: Partition,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true when the call actually merged two distinct classes.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        true
    }
}

/// The least congruence on `t` containing the given pairs: a union-find is
/// seeded with the pairs and every merge is propagated through left and
/// right translation by all elements until a fixpoint is reached.
pub fn congruence_closure(t: &SemigroupTable, pairs: &[(usize, usize)]) -> Congruence {
    let n = t.size();
    let mut uf = UnionFind::new(n);
    let mut pending: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in pairs {
        assert!(a < n && b < n, "congruence generator out of range");
        if uf.union(a, b) {
            pending.push((a, b));
        }
    }
    while let Some((a, b)) = pending.pop() {
        for c in 0..n {
            for (x, y) in [(t.op(c, a), t.op(c, b)), (t.op(a, c), t.op(b, c))] {
                if uf.union(x, y) {
                    pending.push((x, y));
                }
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    Congruence { partition: Partition::from_labels(&labels) }
}

/// The quotient table on the blocks of `c` together with the projection
/// labels (element -> block id). The projection is checked to be a
/// well-defined surjective homomorphism; the call panics if the partition
/// is not actually a congruence on `t`.
pub fn quotient(t: &SemigroupTable, c: &Congruence) -> (SemigroupTable, Vec<usize>) {
    let n = t.size();
    assert_eq!(c.partition.n(), n, "the congruence must partition exactly the table's elements");
    let k = c.partition.class_count();
    let reps: Vec<usize> = c.partition.classes().iter().map(|class| class[0]).collect();
    let labels: Vec<usize> = (0..n).map(|x| c.partition.class_of(x)).collect();
    let table = SemigroupTable::from_fn(k, |i, j| labels[t.op(reps[i], reps[j])])
        .expect("the quotient of a semigroup is a semigroup");
    for a in 0..n {
        for b in 0..n {
            assert_eq!(
                labels[t.op(a, b)],
                table.op(labels[a], labels[b]),
                "the partition is not a congruence on the table"
            );
        }
    }
    (table, labels)
}

/// Result of an amalgamated free product: the quotient semigroup together
/// with the two factor embeddings (as element maps into `result`) and the
/// common image of the shared subalgebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamResult {
    /// The amalgam itself.
    pub result: InverseSemigroup,
    /// Image of each left-factor element in `result`.
    pub embed_left: Vec<usize>,
    /// Image of each right-factor element in `result`.
    pub embed_right: Vec<usize>,
    /// The (sorted) intersection of the two factor images, verified to be
    /// exactly the image of the shared subalgebra.
    pub shared_image: Vec<usize>,
}

/// Checks that `set` lists distinct, in-range elements closed under the
/// operation and inverses of `s`; returns a description of the first
/// failure.
fn subalgebra_error(s: &InverseSemigroup, set: &[usize], side: &str) -> Option<String> {
    if let Some(&bad) = set.iter().find(|&&a| a >= s.size()) {
        return Some(format!("{side} element {bad} is out of range"));
    }
    let lookup: BTreeSet<usize> = set.iter().copied().collect();
    if lookup.len() != set.len() {
        return Some(format!("{side} subalgebra lists an element twice"));
    }
    for &a in set {
        if !lookup.contains(&s.inv(a)) {
            return Some(format!("{side} subalgebra is not closed under inverses at {a}"));
        }
        for &b in set {
            if !lookup.contains(&s.op(a, b)) {
                return Some(format!(
                    "{side} subalgebra is not closed under the operation at ({a}, {b})"
                ));
            }
        }
    }
    None
}

/// Amalgamated free product of two commutative inverse semigroups over a
/// designated pair of matching subalgebras (`u_left[i]` corresponds to
/// `u_right[i]`).
///
/// The carrier is `W`, the direct product of the two monoid extensions
/// with the doubled identity removed, and the result is `W` modulo the
/// least congruence identifying `(u, 1)` with `(1, u')` for every matched
/// pair. Injectivity of both factor embeddings and exactness of the shared
/// image are verified; a violation is reported as
/// [`FraisseError::EmbeddingCollapsed`] rather than assumed away.
pub fn imaoka_amalgam(
    t: &InverseSemigroup,
    tp: &InverseSemigroup,
    u_left: &[usize],
    u_right: &[usize],
) -> Result<AmalgamResult, FraisseError> {
    if !t.table().is_commutative() || !tp.table().is_commutative() {
        return Err(FraisseError::NotCommutative);
    }
    if u_left.len() != u_right.len() {
        return Err(FraisseError::NotMatchingSubalgebras(
            "the matched subalgebra lists have different lengths".into(),
        ));
    }
    if u_left.is_empty() {
        return Err(FraisseError::NotMatchingSubalgebras(
            "the shared subalgebra must be nonempty".into(),
        ));
    }
    if let Some(msg) = subalgebra_error(t, u_left, "left") {
        return Err(FraisseError::NotMatchingSubalgebras(msg));
    }
    if let Some(msg) = subalgebra_error(tp, u_right, "right") {
        return Err(FraisseError::NotMatchingSubalgebras(msg));
    }
    let mut matched: Vec<(usize, usize)> =
        u_left.iter().copied().zip(u_right.iter().copied()).collect();
    matched.sort_unstable();
    let mut rights: Vec<usize> = matched.iter().map(|p| p.1).collect();
    rights.sort_unstable();
    if rights.windows(2).any(|w| w[0] == w[1]) {
        return Err(FraisseError::NotMatchingSubalgebras(
            "the matching repeats an element on the right".into(),
        ));
    }
    // The correspondence must be an isomorphism of the two subalgebras.
    for &(a, fa) in &matched {
        for &(b, fb) in &matched {
            let ab = t.op(a, b);
            let idx = matched
                .binary_search_by_key(&ab, |p| p.0)
                .expect("left subalgebra is closed under the operation");
            if tp.op(fa, fb) != matched[idx].1 {
                return Err(FraisseError::NotMatchingSubalgebras(format!(
                    "the matching is not an isomorphism: products at ({a}, {b}) disagree"
                )));
            }
        }
    }

    let n = t.size();
    let m = tp.size();
    let t1 = adjoin_identity(t.table());
    let tp1 = adjoin_identity(tp.table());
    let prod = direct_product(&t1, &tp1);
    // The doubled identity is the last product index; no product of other
    // pairs reaches it, so dropping it leaves a closed subsemigroup.
    let w_elems: Vec<usize> = (0..prod.size() - 1).collect();
    let w = prod
        .subtable(&w_elems)
        .expect("removing the doubled identity keeps the product closed");
    let left_in_w = |x: usize| x * (m + 1) + m;
    let right_in_w = |x: usize| n * (m + 1) + x;
    let glue: Vec<(usize, usize)> =
        matched.iter().map(|&(u, v)| (left_in_w(u), right_in_w(v))).collect();
    let cong = congruence_closure(&w, &glue);
    let (q, proj) = quotient(&w, &cong);
    let result = try_inverse(&q).map_err(|_| FraisseError::NotInverse)?;

    let embed_left: Vec<usize> = (0..n).map(|x| proj[left_in_w(x)]).collect();
    let embed_right: Vec<usize> = (0..m).map(|x| proj[right_in_w(x)]).collect();
    for (map, side) in [(&embed_left, "left"), (&embed_right, "right")] {
        let distinct: BTreeSet<usize> = map.iter().copied().collect();
        if distinct.len() != map.len() {
            return Err(FraisseError::EmbeddingCollapsed(format!(
                "the {side} factor is not embedded injectively"
            )));
        }
    }
    let left_morph = Morphism::new(t.table(), result.table(), embed_left.clone());
    let right_morph = Morphism::new(tp.table(), result.table(), embed_right.clone());
    if !left_morph.is_embedding() || !right_morph.is_embedding() {
        return Err(FraisseError::EmbeddingCollapsed(
            "a factor map fails to be an embedding".into(),
        ));
    }
    for &(u, v) in &matched {
        assert_eq!(embed_left[u], embed_right[v], "glued pairs must share their image");
    }
    let left_image: BTreeSet<usize> = embed_left.iter().copied().collect();
    let right_image: BTreeSet<usize> = embed_right.iter().copied().collect();
    let shared: Vec<usize> = left_image.intersection(&right_image).copied().collect();
    let mut u_image: Vec<usize> = matched.iter().map(|&(u, _)| embed_left[u]).collect();
    u_image.sort_unstable();
    if shared != u_image {
        return Err(FraisseError::EmbeddingCollapsed(
            "the factor images intersect outside the shared subalgebra".into(),
        ));
    }
    Ok(AmalgamResult { result, embed_left, embed_right, shared_image: u_image })
}

/// Description of a class of finite semigroups, serialized as
/// `{"commutative": bool, "inverse": bool, "allowed_orders": [..] | null,
/// "max_size": int}`. `max_size` bounds searches and generator lists, not
/// membership itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSpec {
    /// Members must be commutative.
    #[serde(rename = "commutative")]
    pub require_commutative: bool,
    /// Members must have unique generalized inverses.
    #[serde(rename = "inverse")]
    pub require_inverse: bool,
    /// When present, every element order must come from this set (which
    /// forces members to be inverse so that orders are defined).
    pub allowed_orders: Option<Vec<usize>>,
    /// Bound for joint-embedding targets, member enumeration, and chain
    /// extension candidates.
    pub max_size: usize,
}

impl ClassSpec {
    /// Whether the table satisfies the class description. Size is not part
    /// of membership; `max_size` only bounds searches.
    pub fn is_member(&self, table: &SemigroupTable) -> bool {
        if self.require_commutative && !table.is_commutative() {
            return false;
        }
        if self.require_inverse || self.allowed_orders.is_some() {
            let s = match try_inverse(table) {
                Ok(s) => s,
                Err(_) => return false,
            };
            if let Some(allowed) = &self.allowed_orders {
                if s.spectrum().iter().any(|o| !allowed.contains(o)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Outcome of checking one closure property over a finite generator list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PropertyVerdict {
    /// Every instance within the bound was verified.
    Holds {
        /// Number of instances checked.
        instances: usize,
    },
    /// A definite counterexample: no structure in the class can complete
    /// the instance. Only produced when the amalgam construction is
    /// universal for the class (commutative inverse classes), so that a
    /// collapse there propagates to every candidate amalgam.
    FailureWitness {
        /// Human-readable description of the witnessing instance.
        detail: String,
    },
    /// An instance could not be completed within the search bound; no
    /// conclusion about the unbounded class is drawn.
    BoundExhausted {
        /// Human-readable description of the first stuck instance.
        detail: String,
    },
}

/// Hereditary, joint-embedding, and amalgamation verdicts for a class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    /// Every subalgebra of a member stays in the class.
    pub hp: PropertyVerdict,
    /// Every two members embed jointly into some member of the class.
    pub jep: PropertyVerdict,
    /// Every two members amalgamate over each shared subalgebra.
    pub ap: PropertyVerdict,
}

/// Element lists of all subalgebras of `table`, honoring the class mode:
/// closure under inverses is required exactly when the class is inverse.
fn member_subalgebras(table: &SemigroupTable, require_inverse: bool) -> Vec<Vec<usize>> {
    let closures = if require_inverse {
        let s = try_inverse(table).expect("validated member of an inverse class");
        let inv = s.inv_map().to_vec();
        enumerate_subsemigroups(table, true, Some(&inv), table.size())
    } else {
        enumerate_subsemigroups(table, false, None, table.size())
    }
    .expect("the enumeration cap equals the table size");
    closures.into_iter().map(|c| c.elements).collect()
}

/// Searches the generator list for an amalgam of `t` and `tp` over the
/// matched subalgebra: some member `d` with embeddings of both factors
/// that agree on the shared part.
fn bounded_amalgam_search(
    gen: &[SemigroupTable],
    t: &SemigroupTable,
    tp: &SemigroupTable,
    u_left: &[usize],
    u_right: &[usize],
) -> bool {
    for d in gen {
        for phi in find_embeddings(t, d, None) {
            let seed: Vec<(usize, usize)> =
                u_left.iter().zip(u_right.iter()).map(|(&u, &v)| (v, phi.map[u])).collect();
            if !embeddings_with_seed(tp, d, &seed, Some(1)).is_empty() {
                return true;
            }
        }
    }
    false
}

/// Checks the hereditary, joint-embedding, and amalgamation properties of
/// the class described by `spec` over the finite generator list `gen`
/// (members of the class up to the search bound). Every listed member must
/// satisfy the description and fit within `max_size`.
///
/// Verdicts are bounded claims: `Holds` means every instance assembled
/// from the generator list was completed, `BoundExhausted` names the first
/// instance that was not, and `FailureWitness` is reserved for definite
/// counterexamples (an amalgam collapse in a commutative inverse class,
/// where the construction is universal).
pub fn check_class_properties(
    gen: &[SemigroupTable],
    spec: &ClassSpec,
) -> Result<ClassReport, FraisseError> {
    for (i, g) in gen.iter().enumerate() {
        if g.size() > spec.max_size || !spec.is_member(g) {
            return Err(FraisseError::SpecViolation { member: i });
        }
    }
    let subalgebras: Vec<Vec<Vec<usize>>> =
        gen.iter().map(|g| member_subalgebras(g, spec.require_inverse)).collect();
    let inverses: Vec<Option<InverseSemigroup>> =
        gen.iter().map(|g| try_inverse(g).ok()).collect();

    // Hereditary property: subalgebras of members stay in the class.
    let hp = {
        let mut instances = 0usize;
        let mut witness = None;
        'hp: for (i, g) in gen.iter().enumerate() {
            for sub in &subalgebras[i] {
                let table = g.subtable(sub).expect("closures are subsemigroups");
                instances += 1;
                if !spec.is_member(&table) {
                    witness =
                        Some(format!("subalgebra {sub:?} of member {i} leaves the class"));
                    break 'hp;
                }
            }
        }
        match witness {
            Some(detail) => PropertyVerdict::FailureWitness { detail },
            None => PropertyVerdict::Holds { instances },
        }
    };

    // Joint embedding: the direct product is tried first (both factors
    // embed beside an idempotent of the other), then members of the list.
    let jep = {
        let mut instances = 0usize;
        let mut exhausted = None;
        for i in 0..gen.len() {
            for j in i..gen.len() {
                instances += 1;
                let prod = direct_product(&gen[i], &gen[j]);
                if spec.is_member(&prod) {
                    continue;
                }
                let found = gen.iter().any(|d| {
                    !find_embeddings(&gen[i], d, Some(1)).is_empty()
                        && !find_embeddings(&gen[j], d, Some(1)).is_empty()
                });
                if !found && exhausted.is_none() {
                    exhausted = Some(format!(
                        "no joint embedding target for members {i} and {j} within size {}",
                        spec.max_size
                    ));
                }
            }
        }
        match exhausted {
            Some(detail) => PropertyVerdict::BoundExhausted { detail },
            None => PropertyVerdict::Holds { instances },
        }
    };

    // Amalgamation: every instance is a subalgebra of one member together
    // with an embedding of it into another (this covers all instances up
    // to renaming, since any embedding factors through its image). The
    // free construction is tried first where it applies; a collapse there
    // is a definite failure exactly when the class is commutative and
    // inverse, because the construction is universal for that variety.
    let variety_universal = spec.require_commutative && spec.require_inverse;
    let ap = {
        let mut instances = 0usize;
        let mut exhausted: Option<String> = None;
        let mut witness: Option<String> = None;
        'ap: for i in 0..gen.len() {
            for sub in &subalgebras[i] {
                for j in i..gen.len() {
                    let u_table = gen[i].subtable(sub).expect("closures are subsemigroups");
                    for emb in find_embeddings(&u_table, &gen[j], None) {
                        instances += 1;
                        let u_right: Vec<usize> = emb.map.clone();
                        let mut completed = false;
                        let mut collapse: Option<String> = None;
                        if let (Some(si), Some(sj)) = (&inverses[i], &inverses[j]) {
                            if gen[i].is_commutative() && gen[j].is_commutative() {
                                match imaoka_amalgam(si, sj, sub, &u_right) {
                                    Ok(am) => {
                                        completed = spec.is_member(am.result.table());
                                    }
                                    Err(FraisseError::EmbeddingCollapsed(msg)) => {
                                        collapse = Some(msg);
                                    }
                                    Err(FraisseError::NotMatchingSubalgebras(_)) => {}
                                    Err(e) => return Err(e),
                                }
                            }
                        }
                        if let Some(msg) = collapse {
                            if variety_universal {
                                witness = Some(format!(
                                    "members {i} and {j} over subalgebra {sub:?}: {msg}"
                                ));
                                break 'ap;
                            }
                        }
                        if !completed && exhausted.is_none() {
                            let found = bounded_amalgam_search(
                                gen, &gen[i], &gen[j], sub, &u_right,
                            );
                            if !found {
                                exhausted = Some(format!(
                                    "no amalgam of members {i} and {j} over subalgebra {sub:?} within size {}",
                                    spec.max_size
                                ));
                            }
                        }
                        if exhausted.is_some() && !variety_universal {
                            // No definite failure can appear later; the
                            // verdict is already settled.
                            break 'ap;
                        }
                    }
                }
            }
        }
        if let Some(detail) = witness {
            PropertyVerdict::FailureWitness { detail }
        } else if let Some(detail) = exhausted {
            PropertyVerdict::BoundExhausted { detail }
        } else {
            PropertyVerdict::Holds { instances }
        }
    };

    Ok(ClassReport { hp, jep, ap })
}

/// All compositions of `total` into exactly `parts` positive summands, in
/// lexicographic order.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, idx: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let parts = cur.len();
        if idx == parts {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let remaining_slots = parts - idx - 1;
        let mut v = 1;
        while v + remaining_slots <= total {
            cur[idx] = v;
            rec(total - v, idx + 1, cur, out);
            v += 1;
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; parts];
    rec(total, 0, &mut cur, &mut out);
    out
}

/// Multiplication tables of all abelian groups of the given order up to
/// isomorphism (orders up to the enumeration cap).
fn abelian_tables(size: usize) -> Vec<SemigroupTable> {
    let component_orders: Vec<Vec<usize>> = match size {
        1 => vec![vec![]],
        2 => vec![vec![2]],
        3 => vec![vec![3]],
        4 => vec![vec![4], vec![2, 2]],
        5 => vec![vec![5]],
        6 => vec![vec![6]],
        _ => unreachable!("member enumeration is capped at {MEMBER_ENUMERATION_CAP}"),
    };
    component_orders
        .into_iter()
        .map(|orders| {
            let spec = AbelianGroupSpec::new(orders).expect("component orders are at least 2");
            build_abelian(&spec).expect("sizes fit the group cap").table().clone()
        })
        .collect()
}

/// Cartesian product of the choice lists, in lexicographic order of the
/// choices. Empty when any list is empty.
fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for list in choices {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for partial in &out {
            for item in list {
                let mut row = partial.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// A cheap isomorphism-invariant key: size, idempotent count, and the
/// sorted per-element profiles (order, idempotency, elements below in the
/// natural order). Equal keys still require an explicit isomorphism.
fn iso_fingerprint(table: &SemigroupTable) -> Vec<usize> {
    let s = try_inverse(table).expect("fingerprinted tables are inverse");
    let n = s.size();
    let order = s.natural_order();
    let mut rows: Vec<[usize; 3]> = (0..n)
        .map(|a| {
            [s.element_order(a), usize::from(table.is_idempotent(a)), order.below_count(a)]
        })
        .collect();
    rows.sort_unstable();
    let mut key = vec![n, s.idempotents().len()];
    key.extend(rows.into_iter().flatten());
    key
}

/// All members of a commutative inverse class up to isomorphism with at
/// most `up_to` elements, ordered by (size, table entries).
///
/// Commutative inverse semigroups are exactly the flattenings of systems
/// of abelian groups over a semilattice with coherent connecting
/// homomorphisms, so the enumeration assembles every such system over
/// every semilattice and deduplicates the flattened tables up to
/// isomorphism. Classes that are not both commutative and inverse are
/// rejected as [`FraisseError::UnsupportedClass`].
pub fn enumerate_members(
    spec: &ClassSpec,
    up_to: usize,
) -> Result<Vec<SemigroupTable>, FraisseError> {
    if !(spec.require_commutative && spec.require_inverse) {
        return Err(FraisseError::UnsupportedClass(
            "member enumeration covers commutative inverse classes only".into(),
        ));
    }
    if up_to > MEMBER_ENUMERATION_CAP {
        return Err(FraisseError::SizeCapExceeded { size: up_to, cap: MEMBER_ENUMERATION_CAP });
    }
    let semis: Vec<Semilattice> =
        enumerate_semilattices_up_to(up_to).expect("the enumeration cap was checked");
    let mut raw: Vec<SemigroupTable> = Vec::new();
    for y in &semis {
        let k = y.size();
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (0..k).filter(move |&b| a != b).map(move |b| (a, b)))
            .filter(|&(a, b)| y.lt(b, a))
            .collect();
        for n in k..=up_to {
            for sizes in compositions(n, k) {
                let slot_choices: Vec<Vec<SemigroupTable>> =
                    sizes.iter().map(|&s| abelian_tables(s)).collect();
                for fibers in cartesian(&slot_choices) {
                    let hom_lists: Vec<Vec<Vec<usize>>> = pairs
                        .iter()
                        .map(|&(a, b)| {
                            find_homomorphisms(&fibers[a], &fibers[b], None)
                                .into_iter()
                                .map(|m| m.map)
                                .collect()
                        })
                        .collect();
                    for assignment in cartesian(&hom_lists) {
                        let psi: BTreeMap<(usize, usize), Vec<usize>> =
                            pairs.iter().copied().zip(assignment).collect();
                        match CliffordSystem::new(y.clone(), fibers.clone(), psi) {
                            Ok(sys) => raw.push(sys.flatten_table().clone()),
                            Err(CliffordError::CompositionFails { .. }) => {}
                            Err(e) => {
                                unreachable!("enumerated systems are structurally valid: {e}")
                            }
                        }
                    }
                }
            }
        }
    }
    raw.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.entries().cmp(b.entries())));
    let mut kept: Vec<SemigroupTable> = Vec::new();
    let mut keys: Vec<Vec<usize>> = Vec::new();
    'next: for table in raw {
        if !spec.is_member(&table) {
            continue;
        }
        let key = iso_fingerprint(&table);
        for (i, old) in kept.iter().enumerate() {
            if keys[i] == key && !find_isomorphisms(old, &table, Some(1)).is_empty() {
                continue 'next;
            }
        }
        keys.push(key);
        kept.push(table);
    }
    Ok(kept)
}

/// A chain of amalgamations over a seed, each stage embedded in the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainResult {
    /// The stages, starting with the seed.
    pub chain: Vec<InverseSemigroup>,
    /// For each step, the verified embedding of stage `i` into stage
    /// `i + 1` as an element map.
    pub step_embeddings: Vec<Vec<usize>>,
    /// The next stage would have exceeded the element budget; the chain
    /// stops at the last stage within budget.
    pub budget_exceeded: bool,
    /// Every enumerable member already embeds into the final stage.
    pub saturated: bool,
}

/// Iteratively amalgamates the seed with missing extensions from the
/// class: at each step the first enumerated member (by size, then table
/// entries) that does not yet embed into the current stage is glued on
/// over the largest common subalgebra. Each step's result is verified to
/// contain the previous stage via an explicit embedding. Stops after
/// `steps` steps, when every candidate already embeds (`saturated`), or
/// when the next stage would exceed `budget` elements (`budget_exceeded`,
/// returning the chain built so far).
pub fn amalgamation_chain(
    seed: &InverseSemigroup,
    spec: &ClassSpec,
    steps: usize,
    budget: usize,
) -> Result<ChainResult, FraisseError> {
    if !(spec.require_commutative && spec.require_inverse) {
        return Err(FraisseError::UnsupportedClass(
            "chain construction requires a commutative inverse class".into(),
        ));
    }
    if !spec.is_member(seed.table()) {
        return Err(FraisseError::SpecViolation { member: 0 });
    }
    let bound = spec.max_size.min(MEMBER_ENUMERATION_CAP).max(1);
    let members = enumerate_members(spec, bound)?;
    let mut chain = vec![seed.clone()];
    let mut step_embeddings: Vec<Vec<usize>> = Vec::new();
    let mut budget_exceeded = false;
    let mut saturated = false;
    for _ in 0..steps {
        let current = chain.last().expect("the chain starts nonempty").clone();
        let missing =
            members.iter().find(|m| find_embeddings(m, current.table(), Some(1)).is_empty());
        let Some(target) = missing else {
            saturated = true;
            break;
        };
        let target_inv = try_inverse(target).expect("members are inverse");
        let mut subs = member_subalgebras(current.table(), true);
        subs.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut glue: Option<(Vec<usize>, Vec<usize>)> = None;
        for sub in &subs {
            let u_table = current.table().subtable(sub).expect("closures are subsemigroups");
            if let Some(e) = find_embeddings(&u_table, target, Some(1)).first() {
                glue = Some((sub.clone(), e.map.clone()));
                break;
            }
        }
        let (u_left, u_right) =
            glue.expect("a one-element idempotent subalgebra always embeds");
        let am = imaoka_amalgam(&current, &target_inv, &u_left, &u_right)?;
        if am.result.size() > budget {
            budget_exceeded = true;
            break;
        }
        if !spec.is_member(am.result.table()) {
            return Err(FraisseError::SpecViolation { member: chain.len() });
        }
        let morph = Morphism::new(current.table(), am.result.table(), am.embed_left.clone());
        assert!(morph.is_embedding(), "each stage must embed into the next");
        step_embeddings.push(am.embed_left.clone());
        chain.push(am.result);
    }
    Ok(ChainResult { chain, step_embeddings, budget_exceeded, saturated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use serde_json::json;

    /// All partitions of `0..n` as label vectors, via restricted growth
    /// strings.
    fn all_partition_labels(n: usize) -> Vec<Vec<usize>> {
        fn rec(idx: usize, next_label: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if idx == cur.len() {
                out.push(cur.clone());
                return;
            }
            for l in 0..=next_label {
                cur[idx] = l;
                rec(idx + 1, next_label.max(l + 1), cur, out);
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            return vec![vec![]];
        }
        let mut cur = vec![0usize; n];
        rec(1, 1, &mut cur, &mut out);
        out
    }

    fn is_congruence(t: &SemigroupTable, labels: &[usize]) -> bool {
        let n = t.size();
        for a in 0..n {
            for b in (a + 1)..n {
                if labels[a] != labels[b] {
                    continue;
                }
                for c in 0..n {
                    if labels[t.op(c, a)] != labels[t.op(c, b)]
                        || labels[t.op(a, c)] != labels[t.op(b, c)]
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn congruence_count(t: &SemigroupTable) -> usize {
        all_partition_labels(t.size()).into_iter().filter(|l| is_congruence(t, l)).count()
    }

    #[test]
    fn closure_of_no_pairs_is_the_identity_partition() {
        let z4 = catalog::cyclic(4);
        let c = congruence_closure(&z4, &[]);
        assert_eq!(c.partition.class_count(), 4);
        assert_eq!(c.partition.classes(), &[vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn closure_examples_on_the_cyclic_group() {
        let z4 = catalog::cyclic(4);
        let c = congruence_closure(&z4, &[(0, 2)]);
        assert_eq!(c.partition.classes(), &[vec![0, 2], vec![1, 3]]);
        let c = congruence_closure(&z4, &[(0, 1)]);
        assert_eq!(c.partition.classes(), &[vec![0, 1, 2, 3]]);
    }

    #[test]
    fn closure_agrees_with_the_brute_force_congruence_lattice() {
        let cases: Vec<(SemigroupTable, Vec<(usize, usize)>)> = vec![
            (catalog::cyclic(4), vec![(0, 2)]),
            (catalog::cyclic(4), vec![(1, 3)]),
            (catalog::cyclic(6), vec![(0, 3)]),
            (catalog::brandt_b2(), vec![(0, 3)]),
            (catalog::chain_semilattice(3), vec![(0, 1)]),
            (catalog::diamond_semilattice(), vec![(1, 2)]),
        ];
        for (table, pairs) in cases {
            let c = congruence_closure(&table, &pairs);
            let labels: Vec<usize> =
                (0..table.size()).map(|x| c.partition.class_of(x)).collect();
            assert!(is_congruence(&table, &labels), "closure must be a congruence");
            for &(a, b) in &pairs {
                assert!(c.partition.same(a, b), "closure must contain the generators");
            }
            let mut containing = 0;
            for cand in all_partition_labels(table.size()) {
                if !is_congruence(&table, &cand) {
                    continue;
                }
                if pairs.iter().any(|&(a, b)| cand[a] != cand[b]) {
                    continue;
                }
                containing += 1;
                for class in c.partition.classes() {
                    assert!(
                        class.iter().all(|&x| cand[x] == cand[class[0]]),
                        "the closure must refine every congruence containing the pairs"
                    );
                }
            }
            assert!(containing >= 1, "the closure itself is a containing congruence");
        }
    }

    #[test]
    fn congruence_lattice_sizes_of_known_semigroups() {
        // Congruences of a finite cyclic group correspond to its subgroups.
        assert_eq!(congruence_count(&catalog::cyclic(4)), 3);
        assert_eq!(congruence_count(&catalog::cyclic(6)), 4);
        // The five-element combinatorial Brandt semigroup is congruence-free.
        assert_eq!(congruence_count(&catalog::brandt_b2()), 2);
    }

    #[test]
    fn quotient_by_the_identity_congruence_returns_the_table() {
        let b2 = catalog::brandt_b2();
        let c = congruence_closure(&b2, &[]);
        let (q, labels) = quotient(&b2, &c);
        assert_eq!(q, b2);
        assert_eq!(labels, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn quotient_of_the_cyclic_group_by_its_halving_is_cyclic() {
        let z4 = catalog::cyclic(4);
        let c = congruence_closure(&z4, &[(0, 2)]);
        let (q, labels) = quotient(&z4, &c);
        assert_eq!(q, catalog::cyclic(2));
        assert_eq!(labels, vec![0, 1, 0, 1]);
        let proj = Morphism::new(&z4, &q, labels);
        assert!(proj.is_homomorphism());
    }

    #[test]
    fn quotient_by_the_universal_congruence_is_trivial() {
        let z4 = catalog::cyclic(4);
        let c = congruence_closure(&z4, &[(0, 1)]);
        let (q, labels) = quotient(&z4, &c);
        assert_eq!(q, catalog::trivial());
        assert_eq!(labels, vec![0, 0, 0, 0]);
    }

    #[test]
    fn amalgam_of_coprime_cyclic_groups_is_the_cyclic_group_of_the_product_order() {
        let z2 = try_inverse(&catalog::cyclic(2)).unwrap();
        let z3 = try_inverse(&catalog::cyclic(3)).unwrap();
        let am = imaoka_amalgam(&z2, &z3, &[0], &[0]).unwrap();
        assert_eq!(am.result.size(), 6);
        assert!(!find_isomorphisms(am.result.table(), &catalog::cyclic(6), Some(1)).is_empty());
        assert_eq!(am.shared_image.len(), 1);
        assert_eq!(am.embed_left[0], am.embed_right[0]);
        assert_eq!(am.shared_image, vec![am.embed_left[0]]);
        assert!(am.result.table().is_commutative());
    }

    #[test]
    fn amalgam_over_the_whole_factor_collapses_onto_the_other_factor() {
        let z2 = try_inverse(&catalog::cyclic(2)).unwrap();
        let am = imaoka_amalgam(&z2, &z2, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(am.result.size(), 2);
        assert!(!find_isomorphisms(am.result.table(), &catalog::cyclic(2), Some(1)).is_empty());
        assert_eq!(am.shared_image.len(), 2);
        assert_eq!(am.embed_left, am.embed_right);
    }

    #[test]
    fn amalgam_of_two_chains_over_the_bottom_is_the_four_element_tree() {
        let c2 = try_inverse(&catalog::chain_semilattice(2)).unwrap();
        let am = imaoka_amalgam(&c2, &c2, &[0], &[0]).unwrap();
        assert_eq!(am.result.size(), 4);
        assert!(am.result.classify().is_semilattice);
        // The two tops stay distinct and their meet is a fourth element
        // strictly between them and the glued bottom: the amalgam is free,
        // so nothing forces the meet down onto the bottom. The result is
        // the Y-shaped tree bottom < stem < {left top, right top}, not the
        // diamond (whose incomparable pair meets at the bottom).
        let bottom = am.embed_left[0];
        let top_left = am.embed_left[1];
        let top_right = am.embed_right[1];
        assert_eq!(am.embed_right[0], bottom);
        assert_ne!(top_left, top_right);
        let mid = am.result.op(top_left, top_right);
        assert!(mid != bottom && mid != top_left && mid != top_right);
        assert_eq!(am.result.op(mid, bottom), bottom);
        let y_tree = SemigroupTable::new(
            4,
            vec![0, 0, 0, 0, 0, 1, 1, 1, 0, 1, 2, 1, 0, 1, 1, 3],
        )
        .unwrap();
        assert!(!find_isomorphisms(am.result.table(), &y_tree, Some(1)).is_empty());
        assert!(
            find_isomorphisms(am.result.table(), &catalog::diamond_semilattice(), Some(1))
                .is_empty()
        );
    }

    #[test]
    fn amalgam_rejects_noncommutative_factors() {
        let s3 = try_inverse(&catalog::symmetric_3()).unwrap();
        let t = try_inverse(&catalog::trivial()).unwrap();
        assert_eq!(imaoka_amalgam(&s3, &t, &[0], &[0]).unwrap_err(), FraisseError::NotCommutative);
        assert_eq!(imaoka_amalgam(&t, &s3, &[0], &[0]).unwrap_err(), FraisseError::NotCommutative);
    }

    #[test]
    fn amalgam_rejects_mismatched_subalgebras() {
        let z2 = try_inverse(&catalog::cyclic(2)).unwrap();
        let z4 = try_inverse(&catalog::cyclic(4)).unwrap();
        let k4 = try_inverse(&catalog::klein_four()).unwrap();
        assert!(matches!(
            imaoka_amalgam(&z2, &z4, &[0], &[0, 2]),
            Err(FraisseError::NotMatchingSubalgebras(_))
        ));
        assert!(matches!(
            imaoka_amalgam(&z2, &z2, &[], &[]),
            Err(FraisseError::NotMatchingSubalgebras(_))
        ));
        // {0, 1} is not closed in the four-element cyclic group.
        assert!(matches!(
            imaoka_amalgam(&z4, &z2, &[0, 1], &[0, 1]),
            Err(FraisseError::NotMatchingSubalgebras(_))
        ));
        // The matching must be an isomorphism, not just a bijection of
        // closed subsets: swapping the identity with the involution fails.
        assert!(matches!(
            imaoka_amalgam(&k4, &k4, &[0, 1], &[1, 0]),
            Err(FraisseError::NotMatchingSubalgebras(_))
        ));
    }

    fn lcm(a: usize, b: usize) -> usize {
        fn gcd(mut a: usize, mut b: usize) -> usize {
            while b != 0 {
                let r = a % b;
                a = b;
                b = r;
            }
            a
        }
        a / gcd(a, b) * b
    }

    fn lcm_closure(start: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = start.clone();
        loop {
            let mut grew = false;
            let snapshot: Vec<usize> = out.iter().copied().collect();
            for &a in &snapshot {
                for &b in &snapshot {
                    if out.insert(lcm(a, b)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return out;
            }
        }
    }

    #[test]
    fn amalgam_spectrum_stays_in_the_lcm_closure_of_the_factor_spectra() {
        let cases: Vec<(SemigroupTable, SemigroupTable, Vec<usize>, Vec<usize>)> = vec![
            (catalog::cyclic(4), catalog::cyclic(2), vec![0], vec![0]),
            (catalog::cyclic(2), catalog::cyclic(3), vec![0], vec![0]),
            (catalog::klein_four(), catalog::cyclic(2), vec![0], vec![0]),
            (catalog::chain_semilattice(2), catalog::cyclic(2), vec![0], vec![0]),
            (catalog::klein_four(), catalog::klein_four(), vec![0, 1], vec![0, 1]),
        ];
        for (ta, tb, ul, ur) in cases {
            let a = try_inverse(&ta).unwrap();
            let b = try_inverse(&tb).unwrap();
            let am = imaoka_amalgam(&a, &b, &ul, &ur).unwrap();
            let mut union: BTreeSet<usize> = a.spectrum().into_iter().collect();
            union.extend(b.spectrum());
            let closure = lcm_closure(&union);
            for o in am.result.spectrum() {
                assert!(closure.contains(&o), "order {o} escapes the lcm closure {closure:?}");
            }
            assert!(am.result.table().is_commutative());
        }
    }

    #[test]
    fn amalgams_of_semilattices_are_semilattices() {
        let cases: Vec<(SemigroupTable, SemigroupTable, Vec<usize>, Vec<usize>)> = vec![
            (catalog::chain_semilattice(2), catalog::chain_semilattice(3), vec![0], vec![0]),
            (
                catalog::chain_semilattice(3),
                catalog::antichain_with_bottom(2),
                vec![0],
                vec![0],
            ),
            (
                catalog::antichain_with_bottom(2),
                catalog::antichain_with_bottom(2),
                vec![0, 1],
                vec![0, 1],
            ),
        ];
        for (ta, tb, ul, ur) in cases {
            let a = try_inverse(&ta).unwrap();
            let b = try_inverse(&tb).unwrap();
            let am = imaoka_amalgam(&a, &b, &ul, &ur).unwrap();
            assert!(am.result.classify().is_semilattice);
        }
    }

    #[test]
    fn class_spec_serialization_matches_the_wire_format() {
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1, 2]),
            max_size: 8,
        };
        let v = serde_json::to_value(&spec).unwrap();
        assert_eq!(
            v,
            json!({"commutative": true, "inverse": true, "allowed_orders": [1, 2], "max_size": 8})
        );
        let back: ClassSpec = serde_json::from_value(v).unwrap();
        assert_eq!(back, spec);
        let parsed: ClassSpec = serde_json::from_str(
            r#"{"commutative":false,"inverse":true,"allowed_orders":null,"max_size":6}"#,
        )
        .unwrap();
        assert!(!parsed.require_commutative);
        assert!(parsed.require_inverse);
        assert_eq!(parsed.allowed_orders, None);
        assert_eq!(parsed.max_size, 6);
    }

    #[test]
    fn class_membership_checks_shape_orders_and_inverses_but_not_size() {
        let commutative_inverse = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: None,
            max_size: 4,
        };
        assert!(!commutative_inverse.is_member(&catalog::brandt_b2()));
        assert!(commutative_inverse.is_member(&catalog::cyclic(6)));
        let inverse_only = ClassSpec { require_commutative: false, ..commutative_inverse.clone() };
        assert!(inverse_only.is_member(&catalog::brandt_b2()));
        assert!(!inverse_only.is_member(&catalog::left_zero(2)));
        let two_torsion = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1, 2]),
            max_size: 8,
        };
        assert!(!two_torsion.is_member(&catalog::cyclic(4)));
        assert!(two_torsion.is_member(&catalog::klein_four()));
        assert!(two_torsion.is_member(&catalog::chain_semilattice(4)));
    }

    #[test]
    fn property_verdicts_serialize_with_tagged_shapes() {
        assert_eq!(
            serde_json::to_value(PropertyVerdict::Holds { instances: 3 }).unwrap(),
            json!({"verdict": "holds", "instances": 3})
        );
        assert_eq!(
            serde_json::to_value(PropertyVerdict::FailureWitness { detail: "x".into() }).unwrap(),
            json!({"verdict": "failure_witness", "detail": "x"})
        );
        assert_eq!(
            serde_json::to_value(PropertyVerdict::BoundExhausted { detail: "y".into() }).unwrap(),
            json!({"verdict": "bound_exhausted", "detail": "y"})
        );
        let back: PropertyVerdict =
            serde_json::from_value(json!({"verdict": "holds", "instances": 7})).unwrap();
        assert_eq!(back, PropertyVerdict::Holds { instances: 7 });
    }

    #[test]
    fn member_enumeration_of_idempotent_classes_matches_semilattice_counts() {
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1]),
            max_size: 5,
        };
        let members = enumerate_members(&spec, 5).unwrap();
        let mut by_size = [0usize; 6];
        for m in &members {
            by_size[m.size()] += 1;
            assert!(try_inverse(m).unwrap().classify().is_semilattice);
        }
        assert_eq!(by_size[1..].to_vec(), vec![1, 1, 2, 5, 15]);
    }

    #[test]
    fn member_enumeration_counts_small_commutative_inverse_semigroups() {
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: None,
            max_size: 4,
        };
        let members = enumerate_members(&spec, 4).unwrap();
        let mut by_size = [0usize; 5];
        for m in &members {
            by_size[m.size()] += 1;
            assert!(m.is_commutative());
            assert!(try_inverse(m).is_ok());
        }
        assert_eq!(by_size[1..].to_vec(), vec![1, 2, 5, 16]);
        // The list is canonical: ordered by (size, entries) and free of
        // isomorphic duplicates.
        assert!(members
            .windows(2)
            .all(|w| (w[0].size(), w[0].entries()) <= (w[1].size(), w[1].entries())));
        for i in 0..members.len() {
            for j in (i + 1)..members.len() {
                if members[i].size() == members[j].size() {
                    assert!(find_isomorphisms(&members[i], &members[j], Some(1)).is_empty());
                }
            }
        }
        // Expected members are all present.
        let z2 = catalog::cyclic(2);
        let z2_with_zero = SemigroupTable::from_fn(3, |a, b| {
            if a == 2 || b == 2 {
                2
            } else {
                z2.op(a, b)
            }
        })
        .unwrap();
        let expected = vec![
            catalog::cyclic(4),
            catalog::klein_four(),
            adjoin_identity(&catalog::cyclic(2)),
            z2_with_zero,
            catalog::diamond_semilattice(),
            catalog::chain_semilattice(4),
        ];
        for want in expected {
            assert!(
                members
                    .iter()
                    .any(|m| m.size() == want.size()
                        && !find_isomorphisms(m, &want, Some(1)).is_empty()),
                "a known member of size {} is missing",
                want.size()
            );
        }
    }

    #[test]
    fn member_enumeration_rejects_unsupported_classes_and_bounds() {
        let not_inverse = ClassSpec {
            require_commutative: true,
            require_inverse: false,
            allowed_orders: None,
            max_size: 4,
        };
        assert!(matches!(
            enumerate_members(&not_inverse, 3),
            Err(FraisseError::UnsupportedClass(_))
        ));
        let fine = ClassSpec { require_inverse: true, ..not_inverse };
        assert_eq!(
            enumerate_members(&fine, 7).unwrap_err(),
            FraisseError::SizeCapExceeded { size: 7, cap: MEMBER_ENUMERATION_CAP }
        );
    }

    #[test]
    fn semilattice_class_has_all_three_properties() {
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1]),
            max_size: 4,
        };
        let gen = enumerate_members(&spec, 4).unwrap();
        assert_eq!(gen.len(), 9);
        let report = check_class_properties(&gen, &spec).unwrap();
        assert!(matches!(report.hp, PropertyVerdict::Holds { instances } if instances > 0));
        assert!(matches!(report.jep, PropertyVerdict::Holds { instances } if instances > 0));
        assert!(matches!(report.ap, PropertyVerdict::Holds { instances } if instances > 0));
    }

    #[test]
    fn two_torsion_commutative_class_amalgamates_via_the_free_construction() {
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1, 2]),
            max_size: 4,
        };
        let gen = enumerate_members(&spec, 4).unwrap();
        assert!(gen.len() > 9, "the class properly extends the semilattices");
        let report = check_class_properties(&gen, &spec).unwrap();
        assert!(matches!(report.hp, PropertyVerdict::Holds { .. }));
        assert!(matches!(report.jep, PropertyVerdict::Holds { .. }));
        assert!(matches!(report.ap, PropertyVerdict::Holds { .. }));
        // The report is deterministic.
        let again = check_class_properties(&gen, &spec).unwrap();
        assert_eq!(serde_json::to_value(&report).unwrap(), serde_json::to_value(&again).unwrap());
    }

    #[test]
    fn general_inverse_class_reports_an_exhausted_bound_for_amalgamation() {
        let spec = ClassSpec {
            require_commutative: false,
            require_inverse: true,
            allowed_orders: None,
            max_size: 6,
        };
        let gen = vec![
            catalog::trivial(),
            catalog::cyclic(2),
            catalog::cyclic(3),
            catalog::symmetric_3(),
            catalog::brandt_b2(),
        ];
        let report = check_class_properties(&gen, &spec).unwrap();
        assert!(matches!(report.hp, PropertyVerdict::Holds { .. }));
        assert!(matches!(report.jep, PropertyVerdict::Holds { .. }));
        assert!(
            matches!(report.ap, PropertyVerdict::BoundExhausted { .. }),
            "gluing the two-element group to the Brandt semigroup needs a target outside the list"
        );
    }

    #[test]
    fn generator_lists_are_validated_against_the_class() {
        let two_torsion = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1, 2]),
            max_size: 8,
        };
        assert_eq!(
            check_class_properties(&[catalog::cyclic(2), catalog::cyclic(4)], &two_torsion)
                .unwrap_err(),
            FraisseError::SpecViolation { member: 1 }
        );
        let commutative = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: None,
            max_size: 8,
        };
        assert_eq!(
            check_class_properties(&[catalog::brandt_b2()], &commutative).unwrap_err(),
            FraisseError::SpecViolation { member: 0 }
        );
        let small = ClassSpec { max_size: 4, ..commutative };
        assert_eq!(
            check_class_properties(&[catalog::cyclic(6)], &small).unwrap_err(),
            FraisseError::SpecViolation { member: 0 }
        );
    }

    #[test]
    fn a_zero_step_chain_is_just_the_seed() {
        let seed = try_inverse(&catalog::cyclic(2)).unwrap();
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1, 2]),
            max_size: 4,
        };
        let res = amalgamation_chain(&seed, &spec, 0, 64).unwrap();
        assert_eq!(res.chain.len(), 1);
        assert_eq!(res.chain[0], seed);
        assert!(res.step_embeddings.is_empty());
        assert!(!res.budget_exceeded);
        assert!(!res.saturated);
    }

    #[test]
    fn chain_over_the_semilattice_class_grows_one_shape_at_a_time() {
        let seed = try_inverse(&catalog::trivial()).unwrap();
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1]),
            max_size: 5,
        };
        let res = amalgamation_chain(&seed, &spec, 2, 64).unwrap();
        assert_eq!(res.chain.iter().map(|s| s.size()).collect::<Vec<_>>(), vec![1, 2, 3]);
        for stage in &res.chain {
            assert!(stage.classify().is_semilattice);
        }
        assert_eq!(res.step_embeddings.len(), 2);
        for (i, emb) in res.step_embeddings.iter().enumerate() {
            let m = Morphism::new(res.chain[i].table(), res.chain[i + 1].table(), emb.clone());
            assert!(m.is_embedding());
        }
        assert!(!res.saturated);
        assert!(!res.budget_exceeded);
    }

    #[test]
    fn chain_from_a_group_seed_acquires_a_new_idempotent() {
        let seed = try_inverse(&catalog::cyclic(2)).unwrap();
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1, 2]),
            max_size: 4,
        };
        let res = amalgamation_chain(&seed, &spec, 1, 64).unwrap();
        assert_eq!(res.chain.len(), 2);
        let stage = &res.chain[1];
        assert_eq!(stage.size(), 3);
        assert_eq!(stage.idempotents().len(), 2);
        assert_eq!(stage.spectrum(), vec![1, 2]);
        assert!(
            !find_embeddings(&catalog::cyclic(2), stage.table(), Some(1)).is_empty(),
            "the seed still embeds"
        );
        assert!(!res.saturated);
        assert!(!res.budget_exceeded);
    }

    #[test]
    fn chain_saturates_when_every_candidate_embeds() {
        let seed = try_inverse(&catalog::trivial()).unwrap();
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1]),
            max_size: 1,
        };
        let res = amalgamation_chain(&seed, &spec, 3, 64).unwrap();
        assert_eq!(res.chain.len(), 1);
        assert!(res.saturated);
        assert!(!res.budget_exceeded);
        assert!(res.step_embeddings.is_empty());
    }

    #[test]
    fn chain_stops_and_flags_when_the_budget_is_hit() {
        let seed = try_inverse(&catalog::cyclic(2)).unwrap();
        let spec = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1, 2]),
            max_size: 4,
        };
        let res = amalgamation_chain(&seed, &spec, 3, 3).unwrap();
        assert_eq!(res.chain.len(), 2, "the second amalgam would exceed the budget");
        assert!(res.budget_exceeded);
        assert!(!res.saturated);
        assert_eq!(res.chain[1].size(), 3);
    }

    #[test]
    fn chain_rejects_unsupported_classes_and_bad_seeds() {
        let seed = try_inverse(&catalog::cyclic(4)).unwrap();
        let noncommutative = ClassSpec {
            require_commutative: false,
            require_inverse: true,
            allowed_orders: None,
            max_size: 4,
        };
        assert!(matches!(
            amalgamation_chain(&seed, &noncommutative, 1, 64),
            Err(FraisseError::UnsupportedClass(_))
        ));
        let two_torsion = ClassSpec {
            require_commutative: true,
            require_inverse: true,
            allowed_orders: Some(vec![1, 2]),
            max_size: 4,
        };
        assert_eq!(
            amalgamation_chain(&seed, &two_torsion, 1, 64).unwrap_err(),
            FraisseError::SpecViolation { member: 0 }
        );
    }
}
