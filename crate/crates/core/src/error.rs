use thiserror::Error;

use crate::antiflags::RelationKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field order {0}: expected a prime power in 2..=16")]
    UnsupportedOrder(u32),
    #[error("dimension n = {n} is out of range for q = {q}")]
    Dimension { n: usize, q: u32 },
    #[error("the two points must be distinct")]
    IdenticalPoints,
    #[error("the hyperplanes must be mutually distinct")]
    RepeatedHyperplanes,
    #[error("target point {0} is not a member of the set")]
    TargetNotInSet(usize),
    #[error("requires odd characteristic, field has characteristic 2")]
    EvenCharacteristic,
    #[error("the anti-flags must be distinct")]
    IdenticalAntiFlags,
    #[error("{0:?} does not define a relation graph")]
    NotARelation(RelationKind),
    #[error("expected a graph of relation {expected:?}, got {found:?}")]
    WrongGraph {
        expected: RelationKind,
        found: RelationKind,
    },
    #[error("the given set is not a coclique")]
    NotCoclique,
    #[error("expected a set of {expected} vertices, got {found}")]
    SetSize { expected: usize, found: usize },
    #[error("vector {0:#b} is singular")]
    SingularPoint(u32),
    #[error("matrix is not invertible")]
    SingularMatrix,
    #[error("a generator does not preserve the graph")]
    NotAutomorphism,
    #[error("operation requires q = {required}, got q = {found}")]
    FieldOrder { required: u32, found: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
