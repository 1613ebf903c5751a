//! Strong semilattices of groups (Clifford systems).
//!
//! A system `[Y; G_alpha; psi_{alpha,beta}]` consists of a meet-semilattice
//! `Y`, a group fiber `G_alpha` per element, and a connecting group
//! homomorphism `psi_{alpha,beta}: G_alpha -> G_beta` per comparable pair
//! `alpha > beta`, subject to the composition law
//! `psi_{beta,gamma} ∘ psi_{alpha,beta} = psi_{alpha,gamma}`. Flattening
//! multiplies `(alpha, g) * (beta, h)` by pushing both arguments down to the
//! meet; the result is always a Clifford (inverse, centralizing) semigroup,
//! and every Clifford table decomposes back into such a system.

use crate::inverse::{try_inverse, InverseSemigroup};
use crate::semilattice::{validate_semilattice, Semilattice, SemilatticeError};
use crate::tables::{SemigroupTable, TableError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Errors for system validation, construction and restriction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    /// A comparable pair `from > to` has no connecting map.
    #[error("missing connecting morphism for the comparable pair ({from}, {to})")]
    MissingMorphism { from: usize, to: usize },
    /// A connecting map was supplied for a pair that is not comparable
    /// (or not distinct).
    #[error("unexpected connecting morphism for the pair ({from}, {to})")]
    UnexpectedMorphism { from: usize, to: usize },
    /// A connecting map breaks the homomorphism law at `(g, h)`.
    #[error("psi({from},{to}) is not a homomorphism: fails at ({g}, {h})")]
    NotHomomorphism {
        from: usize,
        to: usize,
        g: usize,
        h: usize,
    },
    /// Composition along `a > b > c` disagrees with the direct map at `g`.
    #[error("psi({a},{c}) differs from psi({b},{c})∘psi({a},{b}) at element {g}")]
    CompositionFails { a: usize, b: usize, c: usize, g: usize },
    /// A fiber table is not a group.
    #[error("fiber {0} is not a group table")]
    NotAGroupFiber(usize),
    /// A table submitted for decomposition is not Clifford.
    #[error("table is not a Clifford semigroup (some element does not centralize its inverse)")]
    NotClifford,
    /// Spined products require the two systems to share one semilattice.
    #[error("spined product requires identical semilattice tables")]
    SemilatticeMismatch,
    /// A restriction subset of `Y` is not meet-closed.
    #[error("restriction index set is not a sub-semilattice")]
    NotSubSemilattice,
    /// A restriction fiber subset is not a subgroup.
    #[error("restriction subset in fiber {0} is not a subgroup")]
    NotSubgroup(usize),
    /// A restriction fiber subset escapes under a connecting map.
    #[error("restriction subsets are not preserved by psi({from},{to})")]
    NotPreserved { from: usize, to: usize },
    /// The JSON form could not be parsed or has the wrong shape.
    #[error("malformed system JSON: {0}")]
    BadFormat(String),
    /// An embedded table failed validation.
    #[error("invalid table ({context}): {source}")]
    InvalidTable {
        context: String,
        #[source]
        source: TableError,
    },
    /// The semilattice table failed validation.
    #[error("invalid semilattice: {0}")]
    InvalidSemilattice(#[from] SemilatticeError),
}

/// A validated strong semilattice of groups, with its flattening precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordSystem {
    y: Semilattice,
    fibers: Vec<SemigroupTable>,
    identities: Vec<usize>,
    psi: BTreeMap<(usize, usize), Vec<usize>>,
    offsets: Vec<usize>,
    flat: InverseSemigroup,
}

/// The order of `g` in a group table with the given identity.
fn group_element_order(table: &SemigroupTable, identity: usize, g: usize) -> usize {
    let mut k = 1;
    let mut x = g;
    while x != identity {
        x = table.op(x, g);
        k += 1;
        assert!(k <= table.size(), "element order exceeds the group order");
    }
    k
}

/// Whether `set` (ascending) is a subgroup of a group table: nonempty and
/// closed under the operation (finiteness supplies identity and inverses).
fn is_subgroup(table: &SemigroupTable, set: &[usize]) -> bool {
    !set.is_empty()
        && set
            .iter()
            .all(|&a| set.iter().all(|&b| set.binary_search(&table.op(a, b)).is_ok()))
}

impl CliffordSystem {
    /// Validates and builds a system: fibers must be groups, `psi` must be
    /// defined exactly on the comparable pairs `alpha > beta`, each map must
    /// be a homomorphism, and composition along chains must commute. The
    /// flattening is computed and verified to be an inverse semigroup.
    pub fn new(
        y: Semilattice,
        fibers: Vec<SemigroupTable>,
        psi: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self, CliffordError> {
        let ny = y.size();
        assert_eq!(fibers.len(), ny, "one fiber per semilattice element");
        let mut identities = Vec::with_capacity(ny);
        for (alpha, fiber) in fibers.iter().enumerate() {
            let inv = try_inverse(fiber).map_err(|_| CliffordError::NotAGroupFiber(alpha))?;
            if inv.idempotents().len() != 1 {
                return Err(CliffordError::NotAGroupFiber(alpha));
            }
            identities.push(inv.idempotents()[0]);
        }
        for (&(a, b), map) in &psi {
            if a >= ny || b >= ny || a == b || !y.lt(b, a) {
                return Err(CliffordError::UnexpectedMorphism { from: a, to: b });
            }
            if map.len() != fibers[a].size() || map.iter().any(|&v| v >= fibers[b].size()) {
                return Err(CliffordError::BadFormat(format!(
                    "psi({a},{b}) must map all of fiber {a} into fiber {b}"
                )));
            }
        }
        for a in 0..ny {
            for b in 0..ny {
                if a != b && y.lt(b, a) && !psi.contains_key(&(a, b)) {
                    return Err(CliffordError::MissingMorphism { from: a, to: b });
                }
            }
        }
        for (&(a, b), map) in &psi {
            for g in 0..fibers[a].size() {
                for h in 0..fibers[a].size() {
                    if map[fibers[a].op(g, h)] != fibers[b].op(map[g], map[h]) {
                        return Err(CliffordError::NotHomomorphism { from: a, to: b, g, h });
                    }
                }
            }
        }
        for a in 0..ny {
            for b in 0..ny {
                if !(a != b && y.lt(b, a)) {
                    continue;
                }
                for c in 0..ny {
                    if !(b != c && y.lt(c, b)) {
                        continue;
                    }
                    let ab = &psi[&(a, b)];
                    let bc = &psi[&(b, c)];
                    let ac = &psi[&(a, c)];
                    for g in 0..fibers[a].size() {
                        if bc[ab[g]] != ac[g] {
                            return Err(CliffordError::CompositionFails { a, b, c, g });
                        }
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(ny);
        let mut total = 0;
        for fiber in &fibers {
            offsets.push(total);
            total += fiber.size();
        }
        // Flatten: (alpha, g) * (beta, h) lands in the meet fiber.
        let parts = |idx: usize| -> (usize, usize) {
            let alpha = match offsets.binary_search(&idx) {
                Ok(exact) => exact,
                Err(ins) => ins - 1,
            };
            (alpha, idx - offsets[alpha])
        };
        let apply = |a: usize, b: usize, g: usize| -> usize {
            if a == b {
                g
            } else {
                psi[&(a, b)][g]
            }
        };
        let flat_table = SemigroupTable::from_fn(total, |x, yv| {
            let (alpha, g) = parts(x);
            let (beta, h) = parts(yv);
            let gamma = y.meet(alpha, beta);
            offsets[gamma] + fibers[gamma].op(apply(alpha, gamma, g), apply(beta, gamma, h))
        })
        .expect("flattening a validated system is associative");
        let flat = try_inverse(&flat_table)
            .expect("the flattening of a validated system is an inverse semigroup");
        debug_assert!(flat.is_clifford());
        Ok(CliffordSystem {
            y,
            fibers,
            identities,
            psi,
            offsets,
            flat,
        })
    }

    /// The underlying semilattice.
    pub fn semilattice(&self) -> &Semilattice {
        &self.y
    }

    /// The group table of fiber `alpha`.
    pub fn fiber(&self, alpha: usize) -> &SemigroupTable {
        &self.fibers[alpha]
    }

    /// All fibers.
    pub fn fibers(&self) -> &[SemigroupTable] {
        &self.fibers
    }

    /// The identity element index of fiber `alpha`.
    pub fn fiber_identity(&self, alpha: usize) -> usize {
        self.identities[alpha]
    }

    /// The connecting maps, keyed by comparable pair `(from, to)`.
    pub fn psi(&self) -> &BTreeMap<(usize, usize), Vec<usize>> {
        &self.psi
    }

    /// Applies `psi_{a,b}` (the identity when `a == b`).
    pub fn psi_apply(&self, a: usize, b: usize, g: usize) -> usize {
        if a == b {
            g
        } else {
            self.psi[&(a, b)][g]
        }
    }

    /// Total number of flattened elements.
    pub fn size(&self) -> usize {
        self.flat.size()
    }

    /// Flat index of `(alpha, g)`: fibers are laid out in ascending `Y`
    /// order, each in ascending fiber order.
    pub fn flat_index(&self, alpha: usize, g: usize) -> usize {
        debug_assert!(g < self.fibers[alpha].size());
        self.offsets[alpha] + g
    }

    /// Inverse of [`flat_index`](Self::flat_index).
    pub fn flat_parts(&self, idx: usize) -> (usize, usize) {
        let alpha = match self.offsets.binary_search(&idx) {
            Ok(exact) => exact,
            Err(ins) => ins - 1,
        };
        (alpha, idx - self.offsets[alpha])
    }

    /// The flattened inverse semigroup.
    pub fn flatten(&self) -> InverseSemigroup {
        self.flat.clone()
    }

    /// The flattened multiplication table.
    pub fn flatten_table(&self) -> &SemigroupTable {
        self.flat.table()
    }

    /// Serializes to the system JSON form (semilattice rows, fiber tables,
    /// morphisms sorted by `(from, to)`).
    pub fn to_json(&self) -> String {
        let json = SystemJson {
            semilattice: self.y.table().rows(),
            fibers: self.fibers.iter().map(|f| f.rows()).collect(),
            morphisms: self
                .psi
                .iter()
                .map(|(&(from, to), map)| MorphismEntry {
                    from,
                    to,
                    map: map.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&json).expect("system JSON serialization cannot fail")
    }

    /// Parses and validates the system JSON form.
    pub fn from_json(text: &str) -> Result<Self, CliffordError> {
        let json: SystemJson =
            serde_json::from_str(text).map_err(|e| CliffordError::BadFormat(e.to_string()))?;
        let y_table = table_from_rows(&json.semilattice, "semilattice")?;
        let y = validate_semilattice(&y_table)?;
        if json.fibers.len() != y.size() {
            return Err(CliffordError::BadFormat(format!(
                "expected {} fibers, found {}",
                y.size(),
                json.fibers.len()
            )));
        }
        let fibers = json
            .fibers
            .iter()
            .enumerate()
            .map(|(i, rows)| table_from_rows(rows, &format!("fiber {i}")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut psi = BTreeMap::new();
        for entry in json.morphisms {
            if psi
                .insert((entry.from, entry.to), entry.map)
                .is_some()
            {
                return Err(CliffordError::BadFormat(format!(
                    "duplicate morphism entry for ({}, {})",
                    entry.from, entry.to
                )));
            }
        }
        CliffordSystem::new(y, fibers, psi)
    }
}

#[derive(Serialize, Deserialize)]
struct MorphismEntry {
    from: usize,
    to: usize,
    map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    semilattice: Vec<Vec<usize>>,
    fibers: Vec<Vec<Vec<usize>>>,
    morphisms: Vec<MorphismEntry>,
}

fn table_from_rows(rows: &[Vec<usize>], context: &str) -> Result<SemigroupTable, CliffordError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliffordError::BadFormat(format!(
            "{context}: expected an {n}x{n} table"
        )));
    }
    let entries: Vec<usize> = rows.iter().flatten().copied().collect();
    SemigroupTable::new(n, entries).map_err(|source| CliffordError::InvalidTable {
        context: context.to_string(),
        source,
    })
}

/// A decomposition of a Clifford table: the recovered system plus the map
/// from flat indices of the system back to the original element indices.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub system: CliffordSystem,
    /// `element_map[flat_index] = original index`; an isomorphism
    /// `flatten(system) -> original`.
    pub element_map: Vec<usize>,
}

/// Decomposes a Clifford inverse semigroup into a strong semilattice of
/// groups: `Y` is the idempotent semilattice, the fiber at `e` is its maximal
/// subgroup, and the connecting maps multiply by the lower identity.
pub fn decompose(s: &InverseSemigroup) -> Result<Decomposition, CliffordError> {
    if !s.is_clifford() {
        return Err(CliffordError::NotClifford);
    }
    let idems = s.idempotents().to_vec();
    let y_table = s
        .table()
        .subtable(&idems)
        .expect("idempotents of an inverse semigroup are product-closed");
    let y = validate_semilattice(&y_table)
        .expect("commuting idempotents form a semilattice");
    let mut fibers = Vec::with_capacity(idems.len());
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(idems.len());
    for &e in &idems {
        let h = s.maximal_subgroup(e).expect("idempotents index subgroups");
        let table = s
            .table()
            .subtable(&h)
            .expect("maximal subgroups are closed");
        fibers.push(table);
        members.push(h);
    }
    let mut psi = BTreeMap::new();
    for a in 0..idems.len() {
        for b in 0..idems.len() {
            if a == b || !y.lt(b, a) {
                continue;
            }
            let map: Vec<usize> = members[a]
                .iter()
                .map(|&g| {
                    let img = s.op(g, idems[b]);
                    members[b]
                        .binary_search(&img)
                        .expect("multiplying into a lower idempotent lands in its subgroup")
                })
                .collect();
            psi.insert((a, b), map);
        }
    }
    let element_map: Vec<usize> = members.into_iter().flatten().collect();
    let system = CliffordSystem::new(y, fibers, psi)?;
    debug_assert_eq!(system.size(), s.size());
    Ok(Decomposition { system, element_map })
}

/// Image/kernel data for one connecting map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub from: usize,
    pub to: usize,
    /// Whether `from` covers `to` (nothing strictly between).
    pub covering: bool,
    /// Image of `psi_{from,to}` in fiber `to`, ascending.
    pub image: Vec<usize>,
    /// Kernel of `psi_{from,to}` in fiber `from`, ascending.
    pub kernel: Vec<usize>,
}

/// Absolute (all-lower-neighbors) kernel/image data for one fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub alpha: usize,
    /// Intersection of all kernels out of `alpha` (the whole fiber when
    /// `alpha` is minimal).
    pub absolute_kernel: Vec<usize>,
    /// Union of all kernels out of `alpha` (the identity alone when `alpha`
    /// is minimal); always a subgroup.
    pub kernel_union: Vec<usize>,
    /// Elements whose order is preserved by every map out of `alpha`
    /// (the whole fiber when `alpha` is minimal). Not a subgroup in general.
    pub absolute_image: Vec<usize>,
    /// Whether `absolute_image` happens to be a subgroup.
    pub absolute_image_is_subgroup: bool,
}

/// Exhaustive kernel/image analysis of a system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelImageReport {
    pub pairs: Vec<PairReport>,
    pub fibers: Vec<FiberReport>,
    /// Every connecting map is surjective (vacuously true with no pairs).
    pub is_surjective_system: bool,
    /// Every connecting map collapses to the identity element.
    pub is_image_trivial: bool,
}

/// Computes images, kernels, absolute kernels/images and union-of-kernels
/// for every comparable pair and fiber, with normality and monotonicity
/// verified on the way.
pub fn kernel_image_analysis(sys: &CliffordSystem) -> KernelImageReport {
    let y = sys.semilattice();
    let ny = y.size();
    let mut pairs = Vec::new();
    for a in 0..ny {
        for b in 0..ny {
            if a == b || !y.lt(b, a) {
                continue;
            }
            let map = &sys.psi()[&(a, b)];
            let mut image: Vec<usize> = map.to_vec();
            image.sort_unstable();
            image.dedup();
            let kernel: Vec<usize> = (0..sys.fiber(a).size())
                .filter(|&g| map[g] == sys.fiber_identity(b))
                .collect();
            debug_assert!(is_subgroup(sys.fiber(b), &image));
            debug_assert!(is_subgroup(sys.fiber(a), &kernel));
            // Kernels are normal: g k g^-1 stays in the kernel.
            debug_assert!({
                let fa = sys.fiber(a);
                let inv = try_inverse(fa).expect("fibers are groups");
                kernel.iter().all(|&k| {
                    (0..fa.size()).all(|g| {
                        kernel
                            .binary_search(&fa.op(fa.op(g, k), inv.inv(g)))
                            .is_ok()
                    })
                })
            });
            let covering = (0..ny).all(|c| c == a || c == b || !(y.lt(c, a) && y.lt(b, c)));
            pairs.push(PairReport {
                from: a,
                to: b,
                covering,
                image,
                kernel,
            });
        }
    }
    // Monotonicity along chains a > b > c: kernels shrink upward, images
    // shrink as the source rises.
    for p1 in &pairs {
        for p2 in &pairs {
            if p1.from == p2.from && y.lt(p2.to, p1.to) {
                // p1: a>b, p2: a>c with c<b: K_{a,b} ⊆ K_{a,c}.
                assert!(
                    p1.kernel.iter().all(|k| p2.kernel.binary_search(k).is_ok()),
                    "kernel monotonicity must hold"
                );
            }
            if p1.to == p2.to && y.lt(p2.from, p1.from) {
                // p1: a>c, p2: b>c with b<a: I_{a,c} ⊆ I_{b,c}.
                assert!(
                    p1.image.iter().all(|i| p2.image.binary_search(i).is_ok()),
                    "image monotonicity must hold"
                );
            }
        }
    }
    let mut fibers = Vec::with_capacity(ny);
    for alpha in 0..ny {
        let ga = sys.fiber(alpha);
        let identity = sys.fiber_identity(alpha);
        let lower: Vec<usize> = (0..ny).filter(|&b| b != alpha && y.lt(b, alpha)).collect();
        let absolute_kernel: Vec<usize> = (0..ga.size())
            .filter(|&g| {
                lower
                    .iter()
                    .all(|&b| sys.psi_apply(alpha, b, g) == sys.fiber_identity(b))
            })
            .collect();
        let kernel_union: Vec<usize> = if lower.is_empty() {
            vec![identity]
        } else {
            (0..ga.size())
                .filter(|&g| {
                    lower
                        .iter()
                        .any(|&b| sys.psi_apply(alpha, b, g) == sys.fiber_identity(b))
                })
                .collect()
        };
        assert!(
            is_subgroup(ga, &kernel_union),
            "the union of kernels out of one fiber must be a subgroup"
        );
        let absolute_image: Vec<usize> = (0..ga.size())
            .filter(|&g| {
                lower.iter().all(|&b| {
                    group_element_order(sys.fiber(b), sys.fiber_identity(b), sys.psi_apply(alpha, b, g))
                        == group_element_order(ga, identity, g)
                })
            })
            .collect();
        let absolute_image_is_subgroup = is_subgroup(ga, &absolute_image);
        fibers.push(FiberReport {
            alpha,
            absolute_kernel,
            kernel_union,
            absolute_image,
            absolute_image_is_subgroup,
        });
    }
    let is_surjective_system = pairs
        .iter()
        .all(|p| p.image.len() == sys.fiber(p.to).size());
    let is_image_trivial = pairs.iter().all(|p| p.image.len() == 1);
    KernelImageReport {
        pairs,
        fibers,
        is_surjective_system,
        is_image_trivial,
    }
}

/// The spined product of two systems over the *same* semilattice: fibers are
/// componentwise direct products, maps act componentwise.
pub fn spined_product(
    s1: &CliffordSystem,
    s2: &CliffordSystem,
) -> Result<CliffordSystem, CliffordError> {
    if s1.semilattice().table() != s2.semilattice().table() {
        return Err(CliffordError::SemilatticeMismatch);
    }
    let y = s1.semilattice().clone();
    let ny = y.size();
    let fibers: Vec<SemigroupTable> = (0..ny)
        .map(|a| crate::tables::direct_product(s1.fiber(a), s2.fiber(a)))
        .collect();
    let mut psi = BTreeMap::new();
    for a in 0..ny {
        for b in 0..ny {
            if a == b || !y.lt(b, a) {
                continue;
            }
            let m2 = s2.fiber(b).size();
            let n2 = s2.fiber(a).size();
            let map: Vec<usize> = (0..fibers[a].size())
                .map(|x| {
                    let (g, h) = (x / n2, x % n2);
                    sys_pair_index(s1.psi_apply(a, b, g), s2.psi_apply(a, b, h), m2)
                })
                .collect();
            psi.insert((a, b), map);
        }
    }
    CliffordSystem::new(y, fibers, psi)
}

fn sys_pair_index(g: usize, h: usize, m2: usize) -> usize {
    g * m2 + h
}

/// The system with constant fiber `g` and *trivial* connecting maps: the
/// flattened product follows the four-case law — same component multiplies in
/// the group, strictly comparable components keep the lower element,
/// incomparable components collapse to the identity at the meet.
pub fn trivial_system(y: &Semilattice, g: &SemigroupTable) -> Result<CliffordSystem, CliffordError> {
    let inv = try_inverse(g).map_err(|_| CliffordError::NotAGroupFiber(0))?;
    if inv.idempotents().len() != 1 {
        return Err(CliffordError::NotAGroupFiber(0));
    }
    let identity = inv.idempotents()[0];
    let ny = y.size();
    let mut psi = BTreeMap::new();
    for a in 0..ny {
        for b in 0..ny {
            if a != b && y.lt(b, a) {
                psi.insert((a, b), vec![identity; g.size()]);
            }
        }
    }
    CliffordSystem::new(y.clone(), vec![g.clone(); ny], psi)
}

/// The system with constant fiber `g` and *identity* connecting maps: the
/// flattening is isomorphic to the direct product `Y x G`.
pub fn product_system(y: &Semilattice, g: &SemigroupTable) -> Result<CliffordSystem, CliffordError> {
    let inv = try_inverse(g).map_err(|_| CliffordError::NotAGroupFiber(0))?;
    if inv.idempotents().len() != 1 {
        return Err(CliffordError::NotAGroupFiber(0));
    }
    let ny = y.size();
    let identity_map: Vec<usize> = (0..g.size()).collect();
    let mut psi = BTreeMap::new();
    for a in 0..ny {
        for b in 0..ny {
            if a != b && y.lt(b, a) {
                psi.insert((a, b), identity_map.clone());
            }
        }
    }
    CliffordSystem::new(y.clone(), vec![g.clone(); ny], psi)
}

/// Restricts a system to a sub-semilattice `yp` (ascending `Y`-indices) and a
/// subgroup `subs[i]` of each fiber `yp[i]` (ascending fiber indices), which
/// must be carried into each other by the connecting maps.
pub fn restrict_system(
    sys: &CliffordSystem,
    yp: &[usize],
    subs: &[Vec<usize>],
) -> Result<CliffordSystem, CliffordError> {
    let y = sys.semilattice();
    assert_eq!(yp.len(), subs.len(), "one subgroup per kept fiber");
    assert!(
        yp.windows(2).all(|w| w[0] < w[1]) && yp.iter().all(|&a| a < y.size()),
        "yp must be ascending indices into Y"
    );
    let y_sub = match y.table().subtable(yp) {
        Ok(t) => t,
        Err(_) => return Err(CliffordError::NotSubSemilattice),
    };
    let new_y = validate_semilattice(&y_sub).expect("meet-closed subsets are semilattices");
    let mut fibers = Vec::with_capacity(yp.len());
    for (i, &alpha) in yp.iter().enumerate() {
        let set = &subs[i];
        assert!(
            set.windows(2).all(|w| w[0] < w[1]) && set.iter().all(|&g| g < sys.fiber(alpha).size()),
            "subgroup lists must be ascending fiber indices"
        );
        if !is_subgroup(sys.fiber(alpha), set) {
            return Err(CliffordError::NotSubgroup(alpha));
        }
        fibers.push(
            sys.fiber(alpha)
                .subtable(set)
                .expect("subgroups are closed"),
        );
    }
    let mut psi = BTreeMap::new();
    for i in 0..yp.len() {
        for j in 0..yp.len() {
            let (a, b) = (yp[i], yp[j]);
            if a == b || !y.lt(b, a) {
                continue;
            }
            let mut map = Vec::with_capacity(subs[i].len());
            for &g in &subs[i] {
                let img = sys.psi_apply(a, b, g);
                match subs[j].binary_search(&img) {
                    Ok(pos) => map.push(pos),
                    Err(_) => return Err(CliffordError::NotPreserved { from: a, to: b }),
                }
            }
            psi.insert((i, j), map);
        }
    }
    CliffordSystem::new(new_y, fibers, psi)
}
