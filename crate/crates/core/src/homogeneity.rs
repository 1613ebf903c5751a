//! Homogeneity checking: a structure is homogeneous when every isomorphism
//! between substructures extends to an automorphism of the whole.
//!
//! The check reduces the all-pairs-all-isomorphisms definition to one
//! representative `R` per isomorphism class of subalgebras: the whole is
//! homogeneous iff every copy `A` of `R` admits *some* extendable
//! isomorphism `R -> A` (a transporter) and every automorphism of `R`
//! extends. Any failed candidate found along the way is already a genuine
//! counterexample and is reported as a defect.

use crate::inverse::InverseSemigroup;
use crate::morphisms::{
    self, automorphism_group, count_automorphisms, find_isomorphisms, MorphismError, SearchKind,
};
use crate::tables::{enumerate_subsemigroups, SemigroupTable};
use serde::Serialize;
use thiserror::Error;

/// Which subalgebras count: closed under products and inverses, or under
/// products alone. Extending automorphisms are table automorphisms either
/// way (inversion is definable from the table).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Inverse,
    Plain,
}

/// Size cap and the maximum number of defects to collect before stopping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomogOptions {
    pub cap: usize,
    pub defect_limit: usize,
}

impl Default for HomogOptions {
    fn default() -> Self {
        HomogOptions {
            cap: 24,
            defect_limit: 10,
        }
    }
}

/// Errors for homogeneity-level checks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomogeneityError {
    #[error("size {size} exceeds the cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    /// The supplied element set is not closed under products and inverses.
    #[error("the element set is not closed under products and inverses")]
    NotClosed,
}

/// A witness of non-homogeneity: an isomorphism between the subalgebras `A`
/// and `B` (ascending global element lists; `map[i]` is the image of `A[i]`)
/// that extends to no automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Defect {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    pub map: Vec<usize>,
}

/// The full verdict, with the side statistics that accompany it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    pub mode: Mode,
    pub holds: bool,
    pub defect_count: usize,
    pub defects: Vec<Defect>,
    pub aut_count: u64,
    pub idempotent_transitive: bool,
    pub max_subgroups_isomorphic: bool,
}

/// Decides homogeneity of `s` in the given mode, collecting up to
/// `opts.defect_limit` defects.
pub fn is_homogeneous(
    s: &InverseSemigroup,
    mode: Mode,
    opts: &HomogOptions,
) -> Result<HomogeneityReport, HomogeneityError> {
    let n = s.size();
    if n > opts.cap {
        return Err(HomogeneityError::SizeCapExceeded { size: n, cap: opts.cap });
    }
    let limit = opts.defect_limit.max(1);
    let closures = match mode {
        Mode::Inverse => enumerate_subsemigroups(s.table(), true, Some(s.inv_map()), opts.cap),
        Mode::Plain => enumerate_subsemigroups(s.table(), false, None, opts.cap),
    }
    .expect("size was checked against the cap");
    let members: Vec<(Vec<usize>, SemigroupTable)> = closures
        .into_iter()
        .map(|c| {
            let t = s
                .table()
                .subtable(&c.elements)
                .expect("closures are product-closed");
            (c.elements, t)
        })
        .collect();
    // Bucket into isomorphism classes; the first member (least size, then
    // lexicographically least element list) represents its class.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, (_, t)) in members.iter().enumerate() {
        let found = classes.iter_mut().find(|class| {
            let rep = &members[class[0]].1;
            rep.size() == t.size() && !find_isomorphisms(t, rep, Some(1)).is_empty()
        });
        match found {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    let prep = morphisms::prepare(s.table());
    let mut defects: Vec<Defect> = Vec::new();
    'classes: for class in &classes {
        let (r_elems, r_table) = &members[class[0]];
        if r_elems.len() == n {
            continue; // isomorphisms of the whole are the automorphisms
        }
        let pr = morphisms::prepare(r_table);
        // Every copy needs some extendable isomorphism from the
        // representative; candidates are tried in emission order and each
        // failure is a defect in its own right.
        for &ai in &class[1..] {
            let (a_elems, a_table) = &members[ai];
            let pa = morphisms::prepare(a_table);
            let mut k = 1;
            loop {
                let isos = morphisms::seeded_search(
                    r_table,
                    &pr,
                    a_table,
                    &pa,
                    SearchKind::Isomorphism,
                    &[],
                    Some(k),
                );
                if isos.len() < k {
                    break; // every candidate failed and was recorded
                }
                let iso = &isos[k - 1];
                let global: Vec<usize> = iso.iter().map(|&j| a_elems[j]).collect();
                let seed: Vec<(usize, usize)> = r_elems
                    .iter()
                    .zip(global.iter())
                    .map(|(&x, &y)| (x, y))
                    .collect();
                if morphisms::extends_to_automorphism(s.table(), &prep, &seed) {
                    break;
                }
                defects.push(Defect {
                    a: r_elems.clone(),
                    b: a_elems.clone(),
                    map: global,
                });
                if defects.len() >= limit {
                    break 'classes;
                }
                k += 1;
            }
        }
        // Every non-identity automorphism of the representative must extend.
        let autos = morphisms::seeded_search(
            r_table,
            &pr,
            r_table,
            &pr,
            SearchKind::Isomorphism,
            &[],
            None,
        );
        for tau in &autos {
            if tau.iter().enumerate().all(|(i, &j)| i == j) {
                continue;
            }
            let global: Vec<usize> = tau.iter().map(|&j| r_elems[j]).collect();
            let seed: Vec<(usize, usize)> = r_elems
                .iter()
                .zip(global.iter())
                .map(|(&x, &y)| (x, y))
                .collect();
            if !morphisms::extends_to_automorphism(s.table(), &prep, &seed) {
                defects.push(Defect {
                    a: r_elems.clone(),
                    b: r_elems.clone(),
                    map: global,
                });
                if defects.len() >= limit {
                    break 'classes;
                }
            }
        }
    }
    let idempotent_transitive = idempotent_transitive_with(s, &prep);
    Ok(HomogeneityReport {
        mode,
        holds: defects.is_empty(),
        defect_count: defects.len(),
        defects,
        aut_count: count_automorphisms(s.table()),
        idempotent_transitive,
        max_subgroups_isomorphic: maximal_subgroups_pairwise_isomorphic(s),
    })
}

fn idempotent_transitive_with(s: &InverseSemigroup, prep: &morphisms::Prepared) -> bool {
    let idems = s.idempotents();
    let e0 = idems[0];
    idems
        .iter()
        .skip(1)
        .all(|&f| morphisms::extends_to_automorphism(s.table(), prep, &[(e0, f)]))
}

/// Whether the automorphism group acts transitively on the idempotents.
pub fn idempotent_transitivity(s: &InverseSemigroup, cap: usize) -> Result<bool, HomogeneityError> {
    if s.size() > cap {
        return Err(HomogeneityError::SizeCapExceeded { size: s.size(), cap });
    }
    let prep = morphisms::prepare(s.table());
    Ok(idempotent_transitive_with(s, &prep))
}

/// Whether all maximal subgroups (one per idempotent) are isomorphic.
pub fn maximal_subgroups_pairwise_isomorphic(s: &InverseSemigroup) -> bool {
    let idems = s.idempotents();
    let subgroup_table = |e: usize| {
        let h = s.maximal_subgroup(e).expect("idempotents index subgroups");
        s.table().subtable(&h).expect("maximal subgroups are closed")
    };
    let first = subgroup_table(idems[0]);
    idems.iter().skip(1).all(|&f| {
        let other = subgroup_table(f);
        other.size() == first.size() && !find_isomorphisms(&first, &other, Some(1)).is_empty()
    })
}

/// Whether the subalgebra on `a` is quasi-characteristic: every automorphism
/// that maps some element of `a` back into `a` fixes `a` setwise. The set
/// must be closed under products and inverses.
pub fn is_quasi_characteristic(
    s: &InverseSemigroup,
    a: &[usize],
    cap: usize,
) -> Result<bool, HomogeneityError> {
    let mut set = a.to_vec();
    set.sort_unstable();
    set.dedup();
    assert!(
        set.iter().all(|&x| x < s.size()),
        "elements must index the semigroup"
    );
    let closed = set.iter().all(|&x| {
        set.binary_search(&s.inv(x)).is_ok()
            && set.iter().all(|&y| set.binary_search(&s.op(x, y)).is_ok())
    });
    if !closed {
        return Err(HomogeneityError::NotClosed);
    }
    let autos = automorphism_group(s.table(), cap).map_err(|e| match e {
        MorphismError::SizeCapExceeded { size, cap } => {
            HomogeneityError::SizeCapExceeded { size, cap }
        }
        other => unreachable!("automorphism enumeration cannot fail with {other}"),
    })?;
    for phi in &autos {
        let meets = set.iter().any(|&x| set.binary_search(&phi.map[x]).is_ok());
        if meets {
            let mut image: Vec<usize> = set.iter().map(|&x| phi.map[x]).collect();
            image.sort_unstable();
            if image != set {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether homogeneity as a plain semigroup and as an inverse semigroup
/// agree on `s`.
pub fn hs_iff_his_check(
    s: &InverseSemigroup,
    opts: &HomogOptions,
) -> Result<bool, HomogeneityError> {
    let plain = is_homogeneous(s, Mode::Plain, opts)?;
    let inverse = is_homogeneous(s, Mode::Inverse, opts)?;
    Ok(plain.holds == inverse.holds)
}
