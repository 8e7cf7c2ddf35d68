use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("cycle order k={0} out of range (1..=30)")]
    OrderOutOfRange(u32),
    #[error("residue {residue} out of range for Z_{modulus}")]
    ResidueOutOfRange { residue: u32, modulus: u32 },
    #[error("sets over Z_{left} and Z_{right} cannot be combined")]
    OrderMismatch { left: u32, right: u32 },
    #[error("set is not closed under negation")]
    Asymmetric,
    #[error("shift set must be nonempty")]
    EmptyShift,
    #[error("cannot parse set: {0}")]
    SetSyntax(String),
    #[error("parallel sum would create a multi-edge")]
    MultiEdge,
    #[error("graph is not series-parallel with the given terminals")]
    NotSeriesParallel,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph has {vertices} vertices, above the limit of {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("invalid family tag: {0}")]
    InvalidTag(String),
    #[error("operation requires k={expected}, got k={got}")]
    WrongOrder { expected: u32, got: u32 },
    #[error("atlas anchor failed: {0}")]
    Atlas(String),
}

pub type Result<T> = core::result::Result<T, Error>;
