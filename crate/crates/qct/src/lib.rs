//! Workbench for weak composition tables of qualitative spatial/temporal
//! calculi.
//!
//! The crate computes composition tables two ways — by random sampling of
//! concrete element triples ([`generator`]) and by exhaustive enumeration of a
//! finite subdomain ([`oracle`]) — and consumes them through a weak-composition
//! path-consistency reasoner ([`reasoner`]). Tables serialize to a line-based
//! text format ([`io`]) so runs can be diffed and verified against references.
//!
//! Supported calculi live in [`calculi`]: the Point Algebra, Allen's Interval
//! Algebra, INDU, RCC-8 over axis-parallel rectangles and closed disks, and
//! the oriented-point algebras OPRA_m over Cartesian and polar grids.

pub mod calculi;
pub mod generator;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod reasoner;
pub mod schema;
pub mod table;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("schema mismatch: `{0}` vs `{1}`")]
    SchemaMismatch(String, String),
    #[error("unknown calculus `{0}`")]
    UnknownCalculus(String),
    #[error("unknown relation symbol `{0}` for calculus `{1}`")]
    UnknownSymbol(String, String),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),
    #[error("enumeration budget exceeded: {needed} triples > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid termination condition: {0}")]
    InvalidTermination(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("network too large: {0} variables (limit {1})")]
    TooManyVariables(usize, usize),
    #[error("incomplete input table: {0}")]
    IncompleteTable(String),
    #[error("nothing to merge")]
    EmptyMerge,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
