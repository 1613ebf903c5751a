//! Shared fixtures for the integration suites: the structure corpus, the
//! named system-of-groups fixtures, brute-force oracles, and a CLI runner.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;

use invsemi::catalog;
use invsemi::clifford::CliffordSystem;
use invsemi::homogeneity::{is_homogeneous, HomogOptions, HomogeneityReport, Mode};
use invsemi::inverse::{try_inverse, InverseSemigroup};
use invsemi::morphisms::{find_homomorphisms, find_isomorphisms};
use invsemi::semilattice::{enumerate_semilattices_up_to, validate_semilattice, Semilattice};
use invsemi::tables::SemigroupTable;

/// One corpus structure: a verified inverse semigroup with a stable name.
pub struct CorpusMember {
    pub name: String,
    pub semigroup: InverseSemigroup,
}

/// The five abelian groups of order at most 4, the fiber pool for corpus
/// systems.
fn fiber_pool() -> Vec<SemigroupTable> {
    vec![
        catalog::trivial(),
        catalog::cyclic(2),
        catalog::cyclic(3),
        catalog::cyclic(4),
        catalog::klein_four(),
    ]
}

fn hom_maps(from: &SemigroupTable, to: &SemigroupTable) -> Vec<Vec<usize>> {
    find_homomorphisms(from, to, None).into_iter().map(|m| m.map).collect()
}

fn compose(later: &[usize], first: &[usize]) -> Vec<usize> {
    first.iter().map(|&x| later[x]).collect()
}

/// Every coherent system of groups over the two-element chain.
fn chain2_tables(out: &mut Vec<SemigroupTable>) {
    let y = validate_semilattice(&catalog::chain_semilattice(2)).unwrap();
    let pool = fiber_pool();
    for bottom in &pool {
        for top in &pool {
            for psi in hom_maps(top, bottom) {
                let mut morphisms = BTreeMap::new();
                morphisms.insert((1, 0), psi);
                let sys =
                    CliffordSystem::new(y.clone(), vec![bottom.clone(), top.clone()], morphisms)
                        .expect("single-pair systems are always coherent");
                out.push(sys.flatten_table().clone());
            }
        }
    }
}

/// Every coherent system of groups over the three-element chain; the long
/// connecting map is the composite of the two short ones.
fn chain3_tables(out: &mut Vec<SemigroupTable>) {
    let y = validate_semilattice(&catalog::chain_semilattice(3)).unwrap();
    let pool = fiber_pool();
    for g0 in &pool {
        for g1 in &pool {
            for g2 in &pool {
                for psi21 in hom_maps(g2, g1) {
                    for psi10 in hom_maps(g1, g0) {
                        let mut morphisms = BTreeMap::new();
                        morphisms.insert((2, 0), compose(&psi10, &psi21));
                        morphisms.insert((2, 1), psi21.clone());
                        morphisms.insert((1, 0), psi10.clone());
                        let sys = CliffordSystem::new(
                            y.clone(),
                            vec![g0.clone(), g1.clone(), g2.clone()],
                            morphisms,
                        )
                        .expect("composite-closed chains are coherent");
                        out.push(sys.flatten_table().clone());
                    }
                }
            }
        }
    }
}

/// Every coherent system of groups over the diamond (elements: 0 bottom,
/// 1 and 2 incomparable, 3 top). The two composite paths from the top to
/// the bottom must agree.
fn diamond_tables(out: &mut Vec<SemigroupTable>) {
    let y = validate_semilattice(&catalog::diamond_semilattice()).unwrap();
    let pool = fiber_pool();
    for g0 in &pool {
        for g1 in &pool {
            for g2 in &pool {
                for g3 in &pool {
                    for psi31 in hom_maps(g3, g1) {
                        for psi10 in hom_maps(g1, g0) {
                            let via_left = compose(&psi10, &psi31);
                            for psi32 in hom_maps(g3, g2) {
                                for psi20 in hom_maps(g2, g0) {
                                    if compose(&psi20, &psi32) != via_left {
                                        continue;
                                    }
                                    let mut morphisms = BTreeMap::new();
                                    morphisms.insert((1, 0), psi10.clone());
                                    morphisms.insert((2, 0), psi20.clone());
                                    morphisms.insert((3, 0), via_left.clone());
                                    morphisms.insert((3, 1), psi31.clone());
                                    morphisms.insert((3, 2), psi32.clone());
                                    let sys = CliffordSystem::new(
                                        y.clone(),
                                        vec![g0.clone(), g1.clone(), g2.clone(), g3.clone()],
                                        morphisms,
                                    )
                                    .expect("path-agreeing diamonds are coherent");
                                    out.push(sys.flatten_table().clone());
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Cheap isomorphism invariant used to prefilter deduplication.
fn fingerprint(s: &InverseSemigroup) -> Vec<usize> {
    let order = s.natural_order();
    let mut rows: Vec<[usize; 3]> = (0..s.size())
        .map(|a| {
            [
                s.element_order(a),
                usize::from(s.table().is_idempotent(a)),
                order.below_count(a),
            ]
        })
        .collect();
    rows.sort_unstable();
    let mut key = vec![s.size(), s.idempotents().len()];
    key.extend(rows.into_iter().flatten());
    key
}

/// The structure corpus: all semilattices with at most 5 elements, the
/// five-element Brandt semigroup, and all flattened systems of groups over
/// the 2-chain, the 3-chain, and the diamond with fibers of order at most
/// 4 — deduplicated up to isomorphism.
pub fn corpus() -> &'static Vec<CorpusMember> {
    static CORPUS: OnceLock<Vec<CorpusMember>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut raw: Vec<SemigroupTable> = Vec::new();
        for y in enumerate_semilattices_up_to(5).unwrap() {
            raw.push(y.table().clone());
        }
        raw.push(catalog::brandt_b2());
        chain2_tables(&mut raw);
        chain3_tables(&mut raw);
        diamond_tables(&mut raw);
        raw.retain(|t| t.size() <= 24);
        raw.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.entries().cmp(b.entries())));

        let mut members: Vec<CorpusMember> = Vec::new();
        let mut keys: Vec<Vec<usize>> = Vec::new();
        'next: for table in raw {
            let semigroup = try_inverse(&table).expect("corpus members are inverse semigroups");
            let key = fingerprint(&semigroup);
            for (i, kept) in members.iter().enumerate() {
                if keys[i] == key
                    && !find_isomorphisms(kept.semigroup.table(), &table, Some(1)).is_empty()
                {
                    continue 'next;
                }
            }
            let name = format!("corpus-{:02}-{:03}", table.size(), members.len());
            keys.push(key);
            members.push(CorpusMember { name, semigroup });
        }
        members
    })
}

/// Inverse-mode homogeneity reports for the whole corpus, computed once.
pub fn corpus_inverse_reports() -> &'static Vec<HomogeneityReport> {
    static REPORTS: OnceLock<Vec<HomogeneityReport>> = OnceLock::new();
    REPORTS.get_or_init(|| {
        let opts = HomogOptions { cap: 24, defect_limit: 1 };
        corpus()
            .iter()
            .map(|m| {
                is_homogeneous(&m.semigroup, Mode::Inverse, &opts)
                    .expect("corpus members fit the cap")
            })
            .collect()
    })
}

fn chain2_semilattice() -> Semilattice {
    validate_semilattice(&catalog::chain_semilattice(2)).unwrap()
}

fn chain3_semilattice() -> Semilattice {
    validate_semilattice(&catalog::chain_semilattice(3)).unwrap()
}

fn diamond() -> Semilattice {
    validate_semilattice(&catalog::diamond_semilattice()).unwrap()
}

fn system(
    y: Semilattice,
    fibers: Vec<SemigroupTable>,
    morphisms: Vec<((usize, usize), Vec<usize>)>,
) -> CliffordSystem {
    CliffordSystem::new(y, fibers, morphisms.into_iter().collect())
        .expect("fixtures are valid systems")
}

/// Named system-of-groups fixtures covering chains and the diamond with
/// collapsing, identity, surjective, and mixed connecting maps.
pub fn clifford_fixtures() -> Vec<(String, CliffordSystem)> {
    let t = catalog::trivial();
    let z2 = catalog::cyclic(2);
    let z3 = catalog::cyclic(3);
    let z4 = catalog::cyclic(4);
    let k4 = catalog::klein_four();
    let mut out: Vec<(String, CliffordSystem)> = Vec::new();

    out.push((
        "chain2-collapse-z2".into(),
        system(
            chain2_semilattice(),
            vec![t.clone(), z2.clone()],
            vec![((1, 0), vec![0, 0])],
        ),
    ));
    out.push((
        "chain2-identity-z2".into(),
        system(
            chain2_semilattice(),
            vec![z2.clone(), z2.clone()],
            vec![((1, 0), vec![0, 1])],
        ),
    ));
    out.push((
        "chain2-trivialmap-z2".into(),
        system(
            chain2_semilattice(),
            vec![z2.clone(), z2.clone()],
            vec![((1, 0), vec![0, 0])],
        ),
    ));
    out.push((
        "chain2-z4-onto-z2".into(),
        system(
            chain2_semilattice(),
            vec![z2.clone(), z4.clone()],
            vec![((1, 0), vec![0, 1, 0, 1])],
        ),
    ));
    out.push((
        "chain2-z3-twist".into(),
        system(
            chain2_semilattice(),
            vec![z3.clone(), z3.clone()],
            vec![((1, 0), vec![0, 2, 1])],
        ),
    ));
    out.push((
        "chain3-identities-z2".into(),
        system(
            chain3_semilattice(),
            vec![z2.clone(), z2.clone(), z2.clone()],
            vec![((1, 0), vec![0, 1]), ((2, 0), vec![0, 1]), ((2, 1), vec![0, 1])],
        ),
    ));
    out.push((
        "chain3-k4-to-z2-to-1".into(),
        system(
            chain3_semilattice(),
            vec![t.clone(), z2.clone(), k4.clone()],
            vec![
                ((1, 0), vec![0, 0]),
                ((2, 0), vec![0, 0, 0, 0]),
                ((2, 1), vec![0, 1, 0, 1]),
            ],
        ),
    ));
    out.push((
        "chain3-z4-mod2-chain".into(),
        system(
            chain3_semilattice(),
            vec![z2.clone(), z2.clone(), z4.clone()],
            vec![
                ((1, 0), vec![0, 1]),
                ((2, 0), vec![0, 1, 0, 1]),
                ((2, 1), vec![0, 1, 0, 1]),
            ],
        ),
    ));
    out.push((
        "diamond-identities-z2".into(),
        system(
            diamond(),
            vec![z2.clone(), z2.clone(), z2.clone(), z2.clone()],
            vec![
                ((1, 0), vec![0, 1]),
                ((2, 0), vec![0, 1]),
                ((3, 0), vec![0, 1]),
                ((3, 1), vec![0, 1]),
                ((3, 2), vec![0, 1]),
            ],
        ),
    ));
    out.push((
        "diamond-mixed-k4-top".into(),
        system(
            diamond(),
            vec![t.clone(), z2.clone(), z3.clone(), k4.clone()],
            vec![
                ((1, 0), vec![0, 0]),
                ((2, 0), vec![0, 0, 0]),
                ((3, 0), vec![0, 0, 0, 0]),
                ((3, 1), vec![0, 1, 0, 1]),
                ((3, 2), vec![0, 0, 0, 0]),
            ],
        ),
    ));
    out.push((
        "chain3-all-collapse-z4".into(),
        invsemi::clifford::trivial_system(&chain3_semilattice(), &z4)
            .expect("groups make valid constant systems"),
    ));
    out.push((
        "diamond-product-z3".into(),
        invsemi::clifford::product_system(&diamond(), &z3)
            .expect("groups make valid product systems"),
    ));
    out
}

/// All partitions of `0..n` as label vectors, via restricted growth strings.
pub fn all_partition_labels(n: usize) -> Vec<Vec<usize>> {
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
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut cur = vec![0usize; n];
    rec(1, 1, &mut cur, &mut out);
    out
}

/// Whether the labeling is compatible with the operation on both sides.
pub fn is_congruence_labeling(t: &SemigroupTable, labels: &[usize]) -> bool {
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

/// Absolute path of a fixture file under `tests/data`.
pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Runs the CLI binary; returns (stdout, stderr, exit code).
pub fn run_cli(args: &[&str]) -> (String, String, i32) {
    let output = Command::new(env!("CARGO_BIN_EXE_invsemi"))
        .args(args)
        .output()
        .expect("the CLI binary runs");
    (
        String::from_utf8(output.stdout).expect("stdout is UTF-8"),
        String::from_utf8(output.stderr).expect("stderr is UTF-8"),
        output.status.code().expect("the CLI exits normally"),
    )
}
