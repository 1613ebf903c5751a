//! Command-line front end: parse tables and systems, dispatch analyses,
//! emit JSON reports on standard output.
//!
//! Exit codes: 0 = computation completed (a negative verdict is still 0),
//! 2 = parse/format error, 3 = structural precondition failure,
//! 4 = size cap or budget exceeded. Failures print a one-line JSON object
//! `{"error": "parse"|"structure"|"cap", "message": "..."}` on standard
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use invsemi::clifford::{
    decompose, kernel_image_analysis, product_system, spined_product, trivial_system,
    CliffordError, CliffordSystem,
};
use invsemi::fraisse::{
    amalgamation_chain, check_class_properties, enumerate_members, imaoka_amalgam, ClassSpec,
    FraisseError, MEMBER_ENUMERATION_CAP,
};
use invsemi::homogeneity::{hs_iff_his_check, is_homogeneous, HomogOptions, HomogeneityError, Mode};
use invsemi::inverse::{try_inverse, InverseSemigroup};
use invsemi::morphisms::{automorphism_group, find_isomorphisms, MorphismError, DEFAULT_AUT_CAP};
use invsemi::semilattice::{validate_semilattice, Semilattice, SemilatticeError};
use invsemi::tables::{SemigroupTable, TableError};

#[derive(Parser)]
#[command(
    name = "invsemi",
    version,
    about = "Construct, analyze, and test finite inverse semigroups"
)]
struct Cli {
    /// Override the default size cap for automorphism-based checks.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Subalgebras closed under products and inverses.
    Inverse,
    /// Subalgebras closed under products alone.
    Plain,
}

#[derive(Subcommand)]
enum Verb {
    /// Classify an inverse semigroup table (Clifford, bisimple, ...).
    Analyze {
        /// Table file (plain-text Cayley rows).
        table: PathBuf,
    },
    /// Decide homogeneity: every subalgebra isomorphism extends to an
    /// automorphism.
    Homog {
        table: PathBuf,
        /// Which subalgebras count.
        #[arg(long, value_enum, default_value_t = ModeArg::Inverse)]
        mode: ModeArg,
        /// Collect every defect instead of the first few.
        #[arg(long)]
        all_defects: bool,
    },
    /// List the automorphisms of a table.
    Aut { table: PathBuf },
    /// Search for isomorphisms between two tables.
    Iso {
        left: PathBuf,
        right: PathBuf,
        /// Stop after this many isomorphisms (default: all).
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Flatten a system-of-groups JSON file to its multiplication table.
    CliffordFlatten { system: PathBuf },
    /// Decompose a table into a system of groups over a semilattice.
    CliffordDecompose { table: PathBuf },
    /// Kernel/image analysis of a system's connecting homomorphisms.
    Kernels { system: PathBuf },
    /// Spined (fiber) product of two systems over the same semilattice.
    Spined { left: PathBuf, right: PathBuf },
    /// System over a semilattice with all-collapsing connecting maps.
    TrivialSystem { semilattice: PathBuf, group: PathBuf },
    /// System over a semilattice with identity connecting maps.
    ProductSystem { semilattice: PathBuf, group: PathBuf },
    /// Amalgamated free product of two commutative inverse semigroups.
    Amalgamate {
        left: PathBuf,
        right: PathBuf,
        /// Matched subalgebra elements, as comma-separated index lists.
        /// Given once, the same indices are glued on both sides; given
        /// twice, the first list names left elements and the second their
        /// right partners in order.
        #[arg(long)]
        shared: Vec<String>,
    },
    /// Check hereditary, joint-embedding, and amalgamation properties of a
    /// class described by a JSON file.
    FraisseCheck {
        class: PathBuf,
        /// Enumerate class members up to this size (default: the class's
        /// max_size, clamped to the enumeration cap).
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Iterated amalgamation chain over a class, starting from a seed.
    Chain {
        seed: PathBuf,
        class: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Largest stage size before the chain stops flagged.
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ErrorKind {
    Parse,
    Structure,
    Cap,
}

impl ErrorKind {
    fn code(self) -> u8 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::Structure => 3,
            ErrorKind::Cap => 4,
        }
    }

    fn label(self) -> &'static str {
        match self {
            ErrorKind::Parse => "parse",
            ErrorKind::Structure => "structure",
            ErrorKind::Cap => "cap",
        }
    }
}

struct Failure {
    kind: ErrorKind,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure { kind: ErrorKind::Parse, message: message.into() }
    }

    fn structure(message: impl Into<String>) -> Self {
        Failure { kind: ErrorKind::Structure, message: message.into() }
    }

    fn cap(message: impl Into<String>) -> Self {
        Failure { kind: ErrorKind::Cap, message: message.into() }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display())))
}

fn table_failure(context: &str, e: TableError) -> Failure {
    let message = format!("{context}: {e}");
    match e {
        TableError::NotAssociative { .. }
        | TableError::NotClosed { .. }
        | TableError::EmptyGeneratorSet => Failure::structure(message),
        TableError::SizeCapExceeded { .. } => Failure::cap(message),
        _ => Failure::parse(message),
    }
}

fn load_table(path: &Path) -> Result<SemigroupTable, Failure> {
    let text = read_file(path)?;
    SemigroupTable::parse(&text).map_err(|e| table_failure(&path.display().to_string(), e))
}

fn load_inverse(path: &Path) -> Result<InverseSemigroup, Failure> {
    let table = load_table(path)?;
    try_inverse(&table).map_err(|e| {
        Failure::structure(format!("{} is not an inverse semigroup: {e}", path.display()))
    })
}

fn clifford_failure(context: &str, e: CliffordError) -> Failure {
    let message = format!("{context}: {e}");
    match &e {
        CliffordError::BadFormat(_) => Failure::parse(message),
        CliffordError::InvalidTable { source, .. } => match source {
            TableError::NotAssociative { .. } => Failure::structure(message),
            _ => Failure::parse(message),
        },
        _ => Failure::structure(message),
    }
}

fn load_system(path: &Path) -> Result<CliffordSystem, Failure> {
    let text = read_file(path)?;
    CliffordSystem::from_json(&text)
        .map_err(|e| clifford_failure(&path.display().to_string(), e))
}

fn load_semilattice(path: &Path) -> Result<Semilattice, Failure> {
    let table = load_table(path)?;
    validate_semilattice(&table).map_err(|e: SemilatticeError| {
        Failure::structure(format!("{} is not a semilattice: {e}", path.display()))
    })
}

fn load_class(path: &Path) -> Result<ClassSpec, Failure> {
    let text = read_file(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::parse(format!("{}: invalid class JSON: {e}", path.display())))
}

fn fraisse_failure(e: FraisseError) -> Failure {
    match e {
        FraisseError::SizeCapExceeded { .. } => Failure::cap(e.to_string()),
        _ => Failure::structure(e.to_string()),
    }
}

fn homogeneity_failure(e: HomogeneityError) -> Failure {
    match e {
        HomogeneityError::SizeCapExceeded { .. } => Failure::cap(e.to_string()),
        HomogeneityError::NotClosed => Failure::structure(e.to_string()),
    }
}

/// Parses one or two `--shared` comma lists into matched element lists.
fn parse_shared(values: &[String]) -> Result<(Vec<usize>, Vec<usize>), Failure> {
    let parse_list = |text: &str| -> Result<Vec<usize>, Failure> {
        text.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::parse(format!("invalid --shared index {tok:?}")))
            })
            .collect()
    };
    match values {
        [] => Err(Failure::parse("--shared is required: list the matched subalgebra elements")),
        [both] => {
            let list = parse_list(both)?;
            Ok((list.clone(), list))
        }
        [left, right] => Ok((parse_list(left)?, parse_list(right)?)),
        _ => Err(Failure::parse("--shared may be given at most twice (left list, right list)")),
    }
}

fn system_value(sys: &CliffordSystem) -> Value {
    serde_json::from_str(&sys.to_json()).expect("system JSON is well-formed")
}

fn run(cli: Cli) -> Result<String, Failure> {
    let out = match cli.verb {
        Verb::Analyze { table } => {
            let s = load_inverse(&table)?;
            serde_json::to_string(&s.classify()).expect("reports serialize")
        }
        Verb::Homog { table, mode, all_defects } => {
            let s = load_inverse(&table)?;
            let opts = HomogOptions {
                cap: cli.cap.unwrap_or(HomogOptions::default().cap),
                defect_limit: if all_defects {
                    usize::MAX
                } else {
                    HomogOptions::default().defect_limit
                },
            };
            let mode = match mode {
                ModeArg::Inverse => Mode::Inverse,
                ModeArg::Plain => Mode::Plain,
            };
            let report = is_homogeneous(&s, mode, &opts).map_err(homogeneity_failure)?;
            let agree = hs_iff_his_check(&s, &opts).map_err(homogeneity_failure)?;
            let mut value = serde_json::to_value(&report).expect("reports serialize");
            value
                .as_object_mut()
                .expect("reports are objects")
                .insert("hs_iff_his".into(), Value::Bool(agree));
            value.to_string()
        }
        Verb::Aut { table } => {
            let t = load_table(&table)?;
            let autos = automorphism_group(&t, cli.cap.unwrap_or(DEFAULT_AUT_CAP))
                .map_err(|e: MorphismError| match e {
                    MorphismError::SizeCapExceeded { .. } => Failure::cap(e.to_string()),
                    _ => Failure::structure(e.to_string()),
                })?;
            let maps: Vec<Vec<usize>> = autos.into_iter().map(|m| m.map).collect();
            json!({ "aut_count": maps.len(), "automorphisms": maps }).to_string()
        }
        Verb::Iso { left, right, limit } => {
            if limit == Some(0) {
                return Err(Failure::parse("--limit must be at least 1"));
            }
            let a = load_table(&left)?;
            let b = load_table(&right)?;
            let morphs = find_isomorphisms(&a, &b, limit);
            let maps: Vec<Vec<usize>> = morphs.into_iter().map(|m| m.map).collect();
            json!({ "isomorphic": !maps.is_empty(), "morphisms": maps }).to_string()
        }
        Verb::CliffordFlatten { system } => {
            let sys = load_system(&system)?;
            sys.flatten_table().to_text()
        }
        Verb::CliffordDecompose { table } => {
            let s = load_inverse(&table)?;
            let d = decompose(&s)
                .map_err(|e| clifford_failure(&table.display().to_string(), e))?;
            json!({ "system": system_value(&d.system), "element_map": d.element_map })
                .to_string()
        }
        Verb::Kernels { system } => {
            let sys = load_system(&system)?;
            serde_json::to_string(&kernel_image_analysis(&sys)).expect("reports serialize")
        }
        Verb::Spined { left, right } => {
            let s1 = load_system(&left)?;
            let s2 = load_system(&right)?;
            let product = spined_product(&s1, &s2)
                .map_err(|e| clifford_failure("spined product", e))?;
            system_value(&product).to_string()
        }
        Verb::TrivialSystem { semilattice, group } => {
            let y = load_semilattice(&semilattice)?;
            let g = load_table(&group)?;
            let sys = trivial_system(&y, &g)
                .map_err(|e| clifford_failure("trivial system", e))?;
            system_value(&sys).to_string()
        }
        Verb::ProductSystem { semilattice, group } => {
            let y = load_semilattice(&semilattice)?;
            let g = load_table(&group)?;
            let sys = product_system(&y, &g)
                .map_err(|e| clifford_failure("product system", e))?;
            system_value(&sys).to_string()
        }
        Verb::Amalgamate { left, right, shared } => {
            let t = load_inverse(&left)?;
            let tp = load_inverse(&right)?;
            let (u_left, u_right) = parse_shared(&shared)?;
            let am = imaoka_amalgam(&t, &tp, &u_left, &u_right).map_err(fraisse_failure)?;
            json!({
                "size": am.result.size(),
                "table": am.result.table().to_text(),
                "embed_left": am.embed_left,
                "embed_right": am.embed_right,
                "shared_image": am.shared_image,
            })
            .to_string()
        }
        Verb::FraisseCheck { class, max_size } => {
            let spec = load_class(&class)?;
            // An explicit bound is honored (and may exceed the cap, which
            // errors); the default clamps to what enumeration supports.
            let bound = match max_size {
                Some(b) => b.min(spec.max_size),
                None => spec.max_size.min(MEMBER_ENUMERATION_CAP),
            };
            let gen = enumerate_members(&spec, bound).map_err(fraisse_failure)?;
            let report = check_class_properties(&gen, &spec).map_err(fraisse_failure)?;
            json!({
                "class": serde_json::to_value(&spec).expect("specs serialize"),
                "gen_bound": bound,
                "gen_count": gen.len(),
                "hp": serde_json::to_value(&report.hp).expect("verdicts serialize"),
                "jep": serde_json::to_value(&report.jep).expect("verdicts serialize"),
                "ap": serde_json::to_value(&report.ap).expect("verdicts serialize"),
            })
            .to_string()
        }
        Verb::Chain { seed, class, steps, budget } => {
            let s = load_inverse(&seed)?;
            let spec = load_class(&class)?;
            let res = amalgamation_chain(&s, &spec, steps, budget).map_err(fraisse_failure)?;
            let tables: Vec<String> =
                res.chain.iter().map(|stage| stage.table().to_text()).collect();
            let sizes: Vec<usize> = res.chain.iter().map(|stage| stage.size()).collect();
            json!({
                "chain": tables,
                "sizes": sizes,
                "embeddings": res.step_embeddings,
                "budget_exceeded": res.budget_exceeded,
                "saturated": res.saturated,
            })
            .to_string()
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message: String =
                e.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
            eprintln!("{}", json!({ "error": "parse", "message": message }));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", json!({ "error": f.kind.label(), "message": f.message }));
            ExitCode::from(f.kind.code())
        }
    }
}
