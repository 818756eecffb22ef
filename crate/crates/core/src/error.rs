use thiserror::Error;

use crate::quantale::Elem;

/// Everything that can go wrong while building or checking the finite models.
///
/// Variants carry the witnesses (object or element indices) that make a
/// failure reproducible; names are resolved only when reporting.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order relation is not antisymmetric: {0} and {1} are mutually below each other")]
    NotAPartialOrder(usize, usize),
    #[error("carrier is not a lattice: {0} and {1} have no least upper bound or greatest lower bound")]
    NotALattice(usize, usize),
    #[error("empty carrier is not a complete lattice")]
    EmptyCarrier,
    #[error("multiplication table has no entry for {0}*{1}")]
    MultIncomplete(usize, usize),
    #[error("multiplication is not associative at ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("multiplication is not commutative at ({0},{1})")]
    NotCommutative(usize, usize),
    #[error("declared unit fails at {0}")]
    WrongUnit(usize),
    #[error("multiplication by {v} does not preserve the join of {pair:?} (None = empty join)")]
    NotJoinPreserving { v: usize, pair: Option<(usize, usize)> },
    #[error("unknown builtin quantale `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid monoid description: {0}")]
    MonoidSpecInvalid(String),

    #[error("reflexivity fails at object {0}")]
    ReflexivityFail(usize),
    #[error("composition inequality fails at ({0},{1},{2})")]
    TransitivityFail(usize, usize, usize),
    #[error("hom entry {0} is not an element of the quantale")]
    BadElement(usize),
    #[error("hom matrix has {got} entries, expected {expected}")]
    BadShape { expected: usize, got: usize },
    #[error("duplicate name `{0}`")]
    DuplicateName(String),

    #[error("map is not a V-functor: hom({0},{1}) is not below the image hom")]
    NotAFunctor(usize, usize),
    #[error("distributor condition fails at ({0},{1},{2},{3})")]
    NotADistributor(usize, usize, usize, usize),
    #[error("operands live over different quantales")]
    QuantaleMismatch,
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("2-cell hypothesis fails at object {0}")]
    NotA2Cell(usize),

    #[error("size cap exceeded: {what} needs at least {needed} (cap {cap})")]
    SizeExceeded { what: String, needed: usize, cap: usize },

    #[error("V-category is not separated: objects {0} and {1} are isomorphic")]
    NotSeparated(usize, usize),
    #[error("no colimit for weight {weight:?}")]
    NoSuchColimit {
        weight: Vec<Elem>,
        /// For each candidate object, the first test object at which its hom row
        /// disagrees with the required one.
        defects: Vec<usize>,
    },
    #[error("input is not cocomplete: weight {0:?} has no supremum")]
    NotCocompleteInput(Vec<Elem>),
    #[error("functor is not cocontinuous at weight {0:?}")]
    NotCocontinuous(Vec<Elem>),
    #[error("not completely distributive: object {0} has no totally-below presheaf")]
    NotCcd(usize),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
