//! Morphism machinery: homomorphism checking, backtracking search for
//! homomorphisms / embeddings / isomorphisms, automorphism groups, exact
//! automorphism counting, and the decomposition of isomorphisms between
//! flattened strong semilattices of groups into `(pi, [theta_alpha])` data.
//!
//! The search engine assigns images in ascending domain-index order and tries
//! candidate images in ascending order, with unit propagation of forced
//! products; result lists are therefore deterministic and lexicographically
//! ordered by their map vectors. Candidates are pruned by cheap sound
//! invariants (idempotency, monogenic subsemigroup sizes, Green's class
//! sizes, natural-order degrees).

use crate::clifford::CliffordSystem;
use crate::inverse::try_inverse;
use crate::tables::{self, SemigroupTable};
use thiserror::Error;

/// Default size cap for automorphism-group materialization.
pub const DEFAULT_AUT_CAP: usize = 24;

/// Errors for morphism-level operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    /// A table exceeded the size cap of an exhaustive operation.
    #[error("size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    /// A map that was required to be an isomorphism is not one.
    #[error("map is not an isomorphism: {0}")]
    NotIsomorphism(String),
    /// A fiber-square of a decomposed isomorphism fails to commute. This
    /// signals an internal inconsistency: the decomposition theorem
    /// guarantees commuting squares for genuine isomorphisms.
    #[error("fiber square ({alpha}, {beta}) does not commute")]
    SquareFails { alpha: usize, beta: usize },
}

/// A total map between two tables, with homomorphism checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism<'a> {
    pub dom: &'a SemigroupTable,
    pub cod: &'a SemigroupTable,
    pub map: Vec<usize>,
}

impl<'a> Morphism<'a> {
    /// Wraps a map, asserting totality and range.
    pub fn new(dom: &'a SemigroupTable, cod: &'a SemigroupTable, map: Vec<usize>) -> Self {
        assert_eq!(map.len(), dom.size(), "map must be total on the domain");
        assert!(
            map.iter().all(|&y| y < cod.size()),
            "map must land in the codomain"
        );
        Morphism { dom, cod, map }
    }

    /// The first pair `(a, b)` in lexicographic order with
    /// `map(a*b) != map(a)*map(b)`, if any.
    pub fn violation(&self) -> Option<(usize, usize)> {
        for a in 0..self.dom.size() {
            for b in 0..self.dom.size() {
                if self.map[self.dom.op(a, b)] != self.cod.op(self.map[a], self.map[b]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Whether the map respects all products.
    pub fn is_homomorphism(&self) -> bool {
        self.violation().is_none()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    /// Injective homomorphism.
    pub fn is_embedding(&self) -> bool {
        self.is_homomorphism() && self.is_injective()
    }

    /// Bijective homomorphism.
    pub fn is_isomorphism(&self) -> bool {
        self.dom.size() == self.cod.size() && self.is_embedding()
    }
}

/// Exhaustive homomorphism-law check; true iff no violating pair exists.
pub fn check_morphism(m: &Morphism) -> bool {
    m.is_homomorphism()
}

/// Per-element pruning invariants. All fields are preserved by isomorphisms;
/// under embeddings the first three are preserved exactly and the last three
/// can only grow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Profile {
    idem: bool,
    mono_plain: u32,
    mono_inv: u32,
    r_size: u32,
    l_size: u32,
    below: u32,
}

/// Precomputed search data for one table.
pub(crate) struct Prepared {
    profiles: Vec<Profile>,
    inverse: bool,
}

/// Computes pruning profiles; detects inverse-semigroup structure
/// automatically and enriches profiles when present.
pub(crate) fn prepare(t: &SemigroupTable) -> Prepared {
    let n = t.size();
    match try_inverse(t) {
        Ok(s) => {
            let ord = s.natural_order();
            let rkey: Vec<usize> = (0..n).map(|a| s.op(a, s.inv(a))).collect();
            let lkey: Vec<usize> = (0..n).map(|a| s.op(s.inv(a), a)).collect();
            let profiles = (0..n)
                .map(|a| Profile {
                    idem: t.is_idempotent(a),
                    mono_plain: tables::generate_closure(t, &[a], false, None)
                        .expect("singleton generators")
                        .elements
                        .len() as u32,
                    mono_inv: s.element_order(a) as u32,
                    r_size: rkey.iter().filter(|&&k| k == rkey[a]).count() as u32,
                    l_size: lkey.iter().filter(|&&k| k == lkey[a]).count() as u32,
                    below: ord.below_count(a) as u32,
                })
                .collect();
            Prepared {
                profiles,
                inverse: true,
            }
        }
        Err(_) => {
            let profiles = (0..n)
                .map(|a| Profile {
                    idem: t.is_idempotent(a),
                    mono_plain: tables::generate_closure(t, &[a], false, None)
                        .expect("singleton generators")
                        .elements
                        .len() as u32,
                    mono_inv: 0,
                    r_size: 0,
                    l_size: 0,
                    below: 0,
                })
                .collect();
            Prepared {
                profiles,
                inverse: false,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SearchKind {
    Isomorphism,
    Embedding,
    Homomorphism,
}

struct Search<'a> {
    dom: &'a SemigroupTable,
    cod: &'a SemigroupTable,
    dom_p: &'a Prepared,
    cod_p: &'a Prepared,
    kind: SearchKind,
    /// Use the inverse-enriched invariants only when both sides have them.
    both_inverse: bool,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    limit: Option<usize>,
    results: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn injective(&self) -> bool {
        matches!(self.kind, SearchKind::Isomorphism | SearchKind::Embedding)
    }

    fn compatible(&self, x: usize, y: usize) -> bool {
        let d = &self.dom_p.profiles[x];
        let c = &self.cod_p.profiles[y];
        match self.kind {
            SearchKind::Isomorphism => d == c,
            SearchKind::Embedding => {
                d.idem == c.idem
                    && d.mono_plain == c.mono_plain
                    && (!self.both_inverse
                        || (d.mono_inv == c.mono_inv
                            && d.r_size <= c.r_size
                            && d.l_size <= c.l_size
                            && d.below <= c.below))
            }
            SearchKind::Homomorphism => !d.idem || c.idem,
        }
    }

    /// Assigns `x ↦ y` and propagates all forced products. Returns false on
    /// contradiction; the caller unwinds via the trail mark.
    fn push_assign(&mut self, x: usize, y: usize) -> bool {
        if let Some(w) = self.map[x] {
            return w == y;
        }
        if !self.compatible(x, y) || (self.injective() && self.used[y]) {
            return false;
        }
        self.map[x] = Some(y);
        self.used[y] = true;
        self.assigned.push(x);
        let mut qi = self.assigned.len() - 1;
        while qi < self.assigned.len() {
            let a = self.assigned[qi];
            let fa = self.map[a].expect("queued elements are assigned");
            let mut j = 0;
            while j < self.assigned.len() {
                let b = self.assigned[j];
                let fb = self.map[b].expect("trail elements are assigned");
                for (p, fp) in [
                    (self.dom.op(a, b), self.cod.op(fa, fb)),
                    (self.dom.op(b, a), self.cod.op(fb, fa)),
                ] {
                    match self.map[p] {
                        Some(w) => {
                            if w != fp {
                                return false;
                            }
                        }
                        None => {
                            if !self.compatible(p, fp) || (self.injective() && self.used[fp]) {
                                return false;
                            }
                            self.map[p] = Some(fp);
                            self.used[fp] = true;
                            self.assigned.push(p);
                        }
                    }
                }
                j += 1;
            }
            qi += 1;
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let x = self.assigned.pop().expect("trail is non-empty");
            let y = self.map[x].take().expect("trail elements are assigned");
            self.used[y] = false;
        }
    }

    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.results.len() >= l)
    }

    fn dfs(&mut self) {
        if self.done() {
            return;
        }
        let next = self.map.iter().position(|m| m.is_none());
        let x = match next {
            None => {
                let full: Vec<usize> = self.map.iter().map(|m| m.unwrap()).collect();
                debug_assert!(
                    Morphism::new(self.dom, self.cod, full.clone()).is_homomorphism(),
                    "propagation must certify the homomorphism law"
                );
                self.results.push(full);
                return;
            }
            Some(x) => x,
        };
        for y in 0..self.cod.size() {
            if self.done() {
                return;
            }
            let mark = self.assigned.len();
            if self.push_assign(x, y) {
                self.dfs();
            }
            self.undo_to(mark);
        }
    }
}

/// Core seeded search over total maps `dom -> cod` of the requested kind.
/// Results are in lexicographic order of their map vectors.
pub(crate) fn seeded_search(
    dom: &SemigroupTable,
    dom_p: &Prepared,
    cod: &SemigroupTable,
    cod_p: &Prepared,
    kind: SearchKind,
    seed: &[(usize, usize)],
    limit: Option<usize>,
) -> Vec<Vec<usize>> {
    if kind == SearchKind::Isomorphism
        && (dom.size() != cod.size() || dom_p.inverse != cod_p.inverse)
    {
        return Vec::new();
    }
    if kind == SearchKind::Embedding && dom.size() > cod.size() {
        return Vec::new();
    }
    if kind == SearchKind::Isomorphism {
        // An isomorphism induces a bijection matching profiles exactly.
        let mut a: Vec<Profile> = dom_p.profiles.clone();
        let mut b: Vec<Profile> = cod_p.profiles.clone();
        let key = |p: &Profile| (p.idem, p.mono_plain, p.mono_inv, p.r_size, p.l_size, p.below);
        a.sort_by_key(key);
        b.sort_by_key(key);
        if a != b {
            return Vec::new();
        }
    }
    let mut search = Search {
        dom,
        cod,
        dom_p,
        cod_p,
        kind,
        both_inverse: dom_p.inverse && cod_p.inverse,
        map: vec![None; dom.size()],
        used: vec![false; cod.size()],
        assigned: Vec::new(),
        limit,
        results: Vec::new(),
    };
    for &(x, y) in seed {
        if !search.push_assign(x, y) {
            return Vec::new();
        }
    }
    search.dfs();
    search.results
}

fn wrap<'a>(
    dom: &'a SemigroupTable,
    cod: &'a SemigroupTable,
    maps: Vec<Vec<usize>>,
) -> Vec<Morphism<'a>> {
    maps.into_iter().map(|m| Morphism::new(dom, cod, m)).collect()
}

/// All isomorphisms `a -> b` (up to `limit` when given), lexicographic by map
/// vector. Empty iff the tables are non-isomorphic (when `limit` is `None`).
pub fn find_isomorphisms<'a>(
    a: &'a SemigroupTable,
    b: &'a SemigroupTable,
    limit: Option<usize>,
) -> Vec<Morphism<'a>> {
    let pa = prepare(a);
    let pb = prepare(b);
    wrap(a, b, seeded_search(a, &pa, b, &pb, SearchKind::Isomorphism, &[], limit))
}

/// All embeddings (injective homomorphisms) `a -> b`, lexicographic.
pub fn find_embeddings<'a>(
    a: &'a SemigroupTable,
    b: &'a SemigroupTable,
    limit: Option<usize>,
) -> Vec<Morphism<'a>> {
    let pa = prepare(a);
    let pb = prepare(b);
    wrap(a, b, seeded_search(a, &pa, b, &pb, SearchKind::Embedding, &[], limit))
}

/// All homomorphisms `a -> b`, lexicographic.
pub fn find_homomorphisms<'a>(
    a: &'a SemigroupTable,
    b: &'a SemigroupTable,
    limit: Option<usize>,
) -> Vec<Morphism<'a>> {
    let pa = prepare(a);
    let pb = prepare(b);
    wrap(a, b, seeded_search(a, &pa, b, &pb, SearchKind::Homomorphism, &[], limit))
}

/// Embeddings constrained to extend the given partial assignment.
pub(crate) fn embeddings_with_seed(
    dom: &SemigroupTable,
    cod: &SemigroupTable,
    seed: &[(usize, usize)],
    limit: Option<usize>,
) -> Vec<Vec<usize>> {
    let pd = prepare(dom);
    let pc = prepare(cod);
    seeded_search(dom, &pd, cod, &pc, SearchKind::Embedding, seed, limit)
}

/// The full automorphism group of a table, verified to be a group under
/// composition. Guarded by `cap` since the list can be huge.
pub fn automorphism_group(
    t: &SemigroupTable,
    cap: usize,
) -> Result<Vec<Morphism<'_>>, MorphismError> {
    if t.size() > cap {
        return Err(MorphismError::SizeCapExceeded { size: t.size(), cap });
    }
    let auts = find_isomorphisms(t, t, None);
    let n = t.size();
    let identity: Vec<usize> = (0..n).collect();
    assert!(
        auts.iter().any(|m| m.map == identity),
        "automorphism group must contain the identity"
    );
    let contains = |map: &[usize]| auts.iter().any(|m| m.map == map);
    for f in &auts {
        for g in &auts {
            let comp: Vec<usize> = (0..n).map(|x| g.map[f.map[x]]).collect();
            assert!(contains(&comp), "automorphisms must be closed under composition");
        }
        let mut inv = vec![0; n];
        for (x, &y) in f.map.iter().enumerate() {
            inv[y] = x;
        }
        assert!(contains(&inv), "automorphisms must be closed under inversion");
    }
    Ok(auts)
}

/// Exact `|Aut(t)|` without materializing the group, via a stabilizer chain:
/// the product over `k` of the number of images `c` such that some
/// automorphism fixes `0..k` pointwise and sends `k` to `c`.
pub fn count_automorphisms(t: &SemigroupTable) -> u64 {
    let p = prepare(t);
    let n = t.size();
    let mut total: u64 = 1;
    let mut seed: Vec<(usize, usize)> = Vec::with_capacity(n);
    for k in 0..n {
        let mut orbit = 0u64;
        for c in 0..n {
            seed.clear();
            seed.extend((0..k).map(|i| (i, i)));
            seed.push((k, c));
            if !seeded_search(t, &p, t, &p, SearchKind::Isomorphism, &seed, Some(1)).is_empty() {
                orbit += 1;
            }
        }
        debug_assert!(orbit >= 1, "the identity always extends");
        total *= orbit;
    }
    total
}

/// Whether some automorphism of `t` extends the partial map given by `seed`.
pub(crate) fn extends_to_automorphism(
    t: &SemigroupTable,
    p: &Prepared,
    seed: &[(usize, usize)],
) -> bool {
    !seeded_search(t, p, t, p, SearchKind::Isomorphism, seed, Some(1)).is_empty()
}

/// An isomorphism between flattened strong semilattices of groups, split into
/// a semilattice isomorphism `pi` and per-fiber group isomorphisms
/// `thetas[alpha]: G_alpha -> H_{pi(alpha)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordIso {
    pub pi: Vec<usize>,
    pub thetas: Vec<Vec<usize>>,
}

impl CliffordIso {
    /// Rebuilds the flat element map `(alpha, g) ↦ (pi(alpha), thetas[alpha](g))`.
    pub fn reconstruct(&self, sys_a: &CliffordSystem, sys_b: &CliffordSystem) -> Vec<usize> {
        let mut map = vec![0usize; sys_a.size()];
        for alpha in 0..sys_a.semilattice().size() {
            for g in 0..sys_a.fiber(alpha).size() {
                map[sys_a.flat_index(alpha, g)] =
                    sys_b.flat_index(self.pi[alpha], self.thetas[alpha][g]);
            }
        }
        map
    }
}

/// Splits an isomorphism between the flattened tables of `sys_a` and `sys_b`
/// into `(pi, [theta_alpha])`, verifying that every comparable-pair square
/// commutes: `theta_beta ∘ psi_{alpha,beta} = phi_{pi(alpha),pi(beta)} ∘
/// theta_alpha`.
pub fn decompose_clifford_iso(
    theta: &Morphism,
    sys_a: &CliffordSystem,
    sys_b: &CliffordSystem,
) -> Result<CliffordIso, MorphismError> {
    if theta.dom != sys_a.flatten_table() {
        return Err(MorphismError::NotIsomorphism(
            "domain table is not the flattening of the first system".into(),
        ));
    }
    if theta.cod != sys_b.flatten_table() {
        return Err(MorphismError::NotIsomorphism(
            "codomain table is not the flattening of the second system".into(),
        ));
    }
    if !theta.is_isomorphism() {
        return Err(MorphismError::NotIsomorphism(
            "map is not a bijective homomorphism".into(),
        ));
    }
    let ny = sys_a.semilattice().size();
    let mut pi = vec![0usize; ny];
    let mut thetas: Vec<Vec<usize>> = Vec::with_capacity(ny);
    for alpha in 0..ny {
        let e = sys_a.flat_index(alpha, sys_a.fiber_identity(alpha));
        let (beta, h) = sys_b.flat_parts(theta.map[e]);
        if h != sys_b.fiber_identity(beta) {
            return Err(MorphismError::NotIsomorphism(format!(
                "image of the identity of fiber {alpha} is not a fiber identity"
            )));
        }
        pi[alpha] = beta;
    }
    // pi must be a semilattice isomorphism.
    {
        let mut seen = vec![false; ny];
        for &b in &pi {
            if std::mem::replace(&mut seen[b], true) {
                return Err(MorphismError::NotIsomorphism(
                    "induced idempotent map is not injective".into(),
                ));
            }
        }
        let ya = sys_a.semilattice();
        let yb = sys_b.semilattice();
        for a in 0..ny {
            for b in 0..ny {
                if yb.meet(pi[a], pi[b]) != pi[ya.meet(a, b)] {
                    return Err(MorphismError::NotIsomorphism(
                        "induced idempotent map does not preserve meets".into(),
                    ));
                }
            }
        }
    }
    for alpha in 0..ny {
        let ga = sys_a.fiber(alpha).size();
        let mut th = Vec::with_capacity(ga);
        for g in 0..ga {
            let (beta, h) = sys_b.flat_parts(theta.map[sys_a.flat_index(alpha, g)]);
            if beta != pi[alpha] {
                return Err(MorphismError::NotIsomorphism(format!(
                    "fiber {alpha} is not mapped into a single fiber"
                )));
            }
            th.push(h);
        }
        thetas.push(th);
    }
    // Verify all commuting squares over comparable pairs.
    let ya = sys_a.semilattice();
    for alpha in 0..ny {
        for beta in 0..ny {
            if alpha == beta || !ya.lt(beta, alpha) {
                continue;
            }
            for g in 0..sys_a.fiber(alpha).size() {
                let lhs = thetas[beta][sys_a.psi_apply(alpha, beta, g)];
                let rhs = sys_b.psi_apply(pi[alpha], pi[beta], thetas[alpha][g]);
                if lhs != rhs {
                    return Err(MorphismError::SquareFails { alpha, beta });
                }
            }
        }
    }
    let iso = CliffordIso { pi, thetas };
    debug_assert_eq!(
        iso.reconstruct(sys_a, sys_b),
        theta.map,
        "reconstruction must reproduce the original map"
    );
    Ok(iso)
}
