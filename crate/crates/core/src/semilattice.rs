//! Finite meet-semilattices as both algebras and posets.
//!
//! A semilattice here is a commutative semigroup of idempotents; the derived
//! order is `a <= b` iff `a * b = a`, and the product of two elements is their
//! meet (greatest lower bound). The module provides validation, diamond
//! detection, powerset semilattices, an embedding-extension search, and
//! exhaustive enumeration up to isomorphism for small sizes.

use crate::morphisms;
use crate::tables::SemigroupTable;
use std::sync::OnceLock;
use thiserror::Error;

/// Largest `n` for which [`enumerate_semilattices`] and
/// [`powerset_semilattice`] will run (the searches beyond are exponential).
pub const ENUMERATION_CAP: usize = 6;

/// Errors for semilattice validation and searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemilatticeError {
    /// An element with `a * a != a`.
    #[error("element {0} is not idempotent")]
    NotIdempotent(usize),
    /// A witness pair with `a * b != b * a`.
    #[error("operation is not commutative at ({a}, {b})")]
    NotCommutative { a: usize, b: usize },
    /// A subset was required to be meet-closed but is not.
    #[error("subset is not closed under meets: {a} * {b} escapes it")]
    NotMeetClosed { a: usize, b: usize },
    /// A supplied map was required to be an embedding but is not.
    #[error("map is not an embedding: {0}")]
    NotEmbedding(String),
    /// A construction or enumeration exceeded its size cap.
    #[error("size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
}

/// A validated meet-semilattice: commutative, idempotent, with the meet
/// property of the derived order verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semilattice {
    table: SemigroupTable,
    leq: Vec<bool>,
}

/// Four elements witnessing a non-linear "diamond" shape:
/// `delta > alpha`, `delta > gamma`, `alpha` and `gamma` incomparable with
/// meet `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Diamond {
    pub delta: usize,
    pub alpha: usize,
    pub gamma: usize,
    pub beta: usize,
}

/// Validates a table as a semilattice and derives its order.
pub fn validate_semilattice(table: &SemigroupTable) -> Result<Semilattice, SemilatticeError> {
    let n = table.size();
    for a in 0..n {
        if !table.is_idempotent(a) {
            return Err(SemilatticeError::NotIdempotent(a));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if table.op(a, b) != table.op(b, a) {
                return Err(SemilatticeError::NotCommutative { a, b });
            }
        }
    }
    let mut leq = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            leq[a * n + b] = table.op(a, b) == a;
        }
    }
    let s = Semilattice {
        table: table.clone(),
        leq,
    };
    // The product must be the greatest lower bound of the derived order.
    for a in 0..n {
        for b in 0..n {
            let m = table.op(a, b);
            assert!(s.leq(m, a) && s.leq(m, b), "product must be a lower bound");
            for c in 0..n {
                if s.leq(c, a) && s.leq(c, b) {
                    assert!(s.leq(c, m), "product must be the greatest lower bound");
                }
            }
        }
    }
    Ok(s)
}

impl Semilattice {
    /// Number of elements.
    pub fn size(&self) -> usize {
        self.table.size()
    }

    /// The underlying table.
    pub fn table(&self) -> &SemigroupTable {
        &self.table
    }

    /// The meet `a ∧ b`.
    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.table.op(a, b)
    }

    /// Whether `a <= b` in the derived order.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size() + b]
    }

    /// Whether `a < b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Whether `a` and `b` are incomparable.
    pub fn incomparable(&self, a: usize, b: usize) -> bool {
        !self.leq(a, b) && !self.leq(b, a)
    }

    /// The global minimum (the meet of everything).
    pub fn bottom(&self) -> usize {
        let mut m = 0;
        for a in 1..self.size() {
            m = self.meet(m, a);
        }
        m
    }

    /// Whether the order is total.
    pub fn is_chain(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    /// Comparable ordered pairs `a > b`, lexicographic.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.size();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(b, a) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Finds the lexicographically least diamond `(delta, alpha, gamma, beta)`
/// (with `alpha < gamma` as written), or `None`. A `None` result is
/// equivalent to every principal downset being a chain.
pub fn find_diamond(y: &Semilattice) -> Option<Diamond> {
    let n = y.size();
    for delta in 0..n {
        for alpha in 0..n {
            if !y.lt(alpha, delta) {
                continue;
            }
            for gamma in alpha + 1..n {
                if !y.lt(gamma, delta) || !y.incomparable(alpha, gamma) {
                    continue;
                }
                let beta = y.meet(alpha, gamma);
                return Some(Diamond {
                    delta,
                    alpha,
                    gamma,
                    beta,
                });
            }
        }
    }
    None
}

/// The semilattice of all subsets of a `k`-element set (including the empty
/// set) under intersection; a subset is indexed by its bitmask.
pub fn powerset_semilattice(k: usize) -> Result<Semilattice, SemilatticeError> {
    if k > ENUMERATION_CAP {
        return Err(SemilatticeError::SizeCapExceeded {
            size: k,
            cap: ENUMERATION_CAP,
        });
    }
    let table = SemigroupTable::from_fn(1 << k, |a, b| a & b)
        .expect("bitwise intersection is associative");
    validate_semilattice(&table)
}

/// Searches for `X ⊆ Y∖Z` with `Z ∪ X` isomorphic to `Zp` by an isomorphism
/// extending `theta` (which maps `z[i]` to `theta[i]` in `Zp`). Returns the
/// lexicographically least such `X`, or `None` when the bounded search finds
/// nothing. `z` must be meet-closed in `y` and `theta` injective and
/// meet-preserving.
pub fn embed_and_extend(
    y: &Semilattice,
    z: &[usize],
    zp: &Semilattice,
    theta: &[usize],
) -> Result<Option<Vec<usize>>, SemilatticeError> {
    assert!(
        z.windows(2).all(|w| w[0] < w[1]),
        "z must be strictly ascending"
    );
    assert!(z.iter().all(|&x| x < y.size()), "z must index into y");
    assert_eq!(theta.len(), z.len(), "theta must be total on z");
    assert!(
        theta.iter().all(|&x| x < zp.size()),
        "theta must map into zp"
    );
    let zpos = |x: usize| z.binary_search(&x).ok();
    for (i, &a) in z.iter().enumerate() {
        for (j, &b) in z.iter().enumerate() {
            let m = y.meet(a, b);
            let k = match zpos(m) {
                Some(k) => k,
                None => return Err(SemilatticeError::NotMeetClosed { a, b }),
            };
            if zp.meet(theta[i], theta[j]) != theta[k] {
                return Err(SemilatticeError::NotEmbedding(format!(
                    "meet of images of {a} and {b} is not the image of their meet"
                )));
            }
            if i != j && theta[i] == theta[j] {
                return Err(SemilatticeError::NotEmbedding(format!(
                    "elements {a} and {b} share the image {}",
                    theta[i]
                )));
            }
        }
    }
    // Search for embeddings of Zp into Y that send theta[i] back to z[i]; the
    // image of such an embedding is Z ∪ X.
    let seed: Vec<(usize, usize)> = theta.iter().copied().zip(z.iter().copied()).collect();
    let embeddings = morphisms::embeddings_with_seed(zp.table(), y.table(), &seed, None);
    let mut best: Option<Vec<usize>> = None;
    for map in embeddings {
        let mut x: Vec<usize> = map
            .iter()
            .copied()
            .filter(|img| zpos(*img).is_none())
            .collect();
        x.sort_unstable();
        x.dedup();
        if best.as_ref().is_none_or(|b| x < *b) {
            best = Some(x);
        }
    }
    Ok(best)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// The lexicographically least relabeling of a table (its canonical form
/// under isomorphism). Exponential in `n`; callers keep `n` small.
fn canonical_entries(t: &SemigroupTable) -> Vec<usize> {
    let n = t.size();
    let mut best: Option<Vec<usize>> = None;
    for sigma in permutations(n) {
        let mut inv = vec![0; n];
        for (i, &v) in sigma.iter().enumerate() {
            inv[v] = i;
        }
        let mut entries = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                entries.push(sigma[t.op(inv[a], inv[b])]);
            }
        }
        if best.as_ref().is_none_or(|b| entries < *b) {
            best = Some(entries);
        }
    }
    best.expect("at least the identity permutation exists")
}

/// All semilattices with exactly `n` elements up to isomorphism, in a fixed
/// canonical order (ascending canonical table). Capped at
/// [`ENUMERATION_CAP`].
pub fn enumerate_semilattices(n: usize) -> Result<Vec<Semilattice>, SemilatticeError> {
    if n > ENUMERATION_CAP {
        return Err(SemilatticeError::SizeCapExceeded {
            size: n,
            cap: ENUMERATION_CAP,
        });
    }
    static CACHE: OnceLock<Vec<Vec<Vec<usize>>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        // Level k holds the canonical entry vectors of all semilattices of
        // size k+1. Every semilattice of size m+1 arises from one of size m
        // by adding a maximal element whose strict downset D is a downset of
        // the smaller semilattice such that D ∩ down(y) has a greatest
        // element for every y (D is then the new element's meet data).
        let mut levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(ENUMERATION_CAP);
        levels.push(vec![vec![0]]);
        for m in 1..ENUMERATION_CAP {
            let mut next: std::collections::BTreeSet<Vec<usize>> = Default::default();
            for entries in &levels[m - 1] {
                let t = SemigroupTable::new(m, entries.clone()).expect("cached tables are valid");
                let s = validate_semilattice(&t).expect("cached tables are semilattices");
                for mask in 1u32..(1 << m) {
                    let in_d = |x: usize| mask & (1 << x) != 0;
                    // D must be down-closed.
                    if !(0..m).all(|d| !in_d(d) || (0..m).all(|x| !s.leq(x, d) || in_d(x))) {
                        continue;
                    }
                    // For every y, D ∩ down(y) needs a greatest element.
                    let mut meets = vec![0usize; m];
                    let mut ok = true;
                    'outer: for y in 0..m {
                        let cands: Vec<usize> =
                            (0..m).filter(|&d| in_d(d) && s.leq(d, y)).collect();
                        if cands.is_empty() {
                            ok = false;
                            break;
                        }
                        for &g in &cands {
                            if cands.iter().all(|&c| s.leq(c, g)) {
                                meets[y] = g;
                                continue 'outer;
                            }
                        }
                        ok = false;
                        break;
                    }
                    if !ok {
                        continue;
                    }
                    let big = SemigroupTable::from_fn(m + 1, |a, b| {
                        if a < m && b < m {
                            s.meet(a, b)
                        } else if a == m && b == m {
                            m
                        } else {
                            meets[a.min(b)]
                        }
                    })
                    .expect("extension by a maximal element stays associative");
                    debug_assert!(validate_semilattice(&big).is_ok());
                    next.insert(canonical_entries(&big));
                }
            }
            levels.push(next.into_iter().collect());
        }
        levels
    });
    if n == 0 {
        return Ok(Vec::new());
    }
    Ok(all[n - 1]
        .iter()
        .map(|entries| {
            let t = SemigroupTable::new(n, entries.clone()).expect("cached tables are valid");
            validate_semilattice(&t).expect("cached tables are semilattices")
        })
        .collect())
}

/// All semilattices with `1..=n` elements up to isomorphism, smallest first.
pub fn enumerate_semilattices_up_to(n: usize) -> Result<Vec<Semilattice>, SemilatticeError> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(enumerate_semilattices(k)?);
    }
    Ok(out)
}
