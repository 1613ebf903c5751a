//! Finite inverse semigroups: multiplication tables, Green's relations and the
//! natural partial order, strong semilattices of groups (Clifford semigroups),
//! morphism search, homogeneity testing, and amalgamation / Fraïssé-class
//! machinery.
//!
//! Everything operates on small finite semigroups given by explicit
//! multiplication tables. Elements are `0..n`; a table stores `n * n` entries
//! row-major, so `table.op(a, b)` is the product `a * b`.
//!
//! Module map:
//!
//! * [`tables`] — raw multiplication tables: validation, closures, direct
//!   products, subsemigroup enumeration, the plain-text table format.
//! * [`inverse`] — inverse semigroups: unique generalized inverses, Green's
//!   relations, the natural partial order, structural classification.
//! * [`semilattice`] — commutative idempotent semigroups (meet-semilattices),
//!   diamond detection, enumeration up to isomorphism, embedding extension.
//! * [`groups`] — finite abelian groups from invariant-factor style specs,
//!   subgroup enumeration, homogeneity form, independence checks.
//! * [`clifford`] — strong semilattices of groups: validation, flattening to a
//!   single table, decomposition of a Clifford table back into a system,
//!   kernel/image analysis, spined and trivial/product constructions.
//! * [`morphisms`] — backtracking search for homomorphisms, embeddings and
//!   isomorphisms; automorphism groups and exact automorphism counts;
//!   decomposition of isomorphisms between flattened systems.
//! * [`homogeneity`] — does every isomorphism between subalgebras extend to an
//!   automorphism? Plus idempotent transitivity and related invariants.
//! * [`fraisse`] — congruences and quotients, amalgamated products of
//!   commutative inverse semigroups, class property checks (HP / JEP / AP),
//!   member enumeration and amalgamation chains.
//! * [`catalog`] — named small semigroups used in tests, docs and demos.

pub mod catalog;
pub mod clifford;
pub mod fraisse;
pub mod groups;
pub mod homogeneity;
pub mod inverse;
pub mod morphisms;
pub mod semilattice;
pub mod tables;
