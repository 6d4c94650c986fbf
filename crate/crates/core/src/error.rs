use thiserror::Error;

/// Everything that can go wrong while validating inputs or running the pipeline.
///
/// Each variant names the invariant it protects; [`Error::kind`] gives a stable
/// machine-readable tag for diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("missing or non-unique meet/join: {0}")]
    NoMeetOrJoin(String),
    #[error("bad metric: {0}")]
    BadMetric(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("not a bounded lattice map: {0}")]
    NotALatticeMap(String),

    #[error("empty simplex")]
    EmptySimplex,
    #[error("duplicate vertex {0} in simplex")]
    DuplicateVertexInSimplex(u32),
    #[error("not a subcomplex: {0}")]
    NotASubcomplex(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not a prime modulus")]
    InvalidField(u32),

    #[error("filtration is not monotone: {0}")]
    NotMonotone(String),
    #[error("filtration does not reach the full complex at the top element")]
    TopNotFull,
    #[error("no subcomplex assigned to element `{0}`")]
    MissingAssignment(String),
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),
    #[error("morphisms are not composable: {0}")]
    NotComposable(String),
    #[error("interval map is not induced by a lattice map: {0}")]
    MapNotLifted(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("invalid step {index}: {reason}")]
    InvalidStep { index: usize, reason: String },
    #[error("path is broken at step {0}: endpoints do not match")]
    BrokenChain(usize),

    #[error("negative mass on interval {0}")]
    NegativeMass(String),
    #[error("lattice is not totally ordered")]
    NotTotallyOrdered,
    #[error("no valid real embedding: {0}")]
    NoEmbedding(String),
    #[error("trajectory mixes a finite and an infinite endpoint: {0}")]
    InfiniteMixing(String),
    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("filtration values are not strictly increasing")]
    NotIncreasing,
    #[error("empty input")]
    Empty,
    #[error("index lattice is not a classical chain: {0}")]
    NotClassicalIndex(String),

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotAPoset(_) => "NotAPoset",
            Error::NoMeetOrJoin(_) => "NoMeetOrJoin",
            Error::BadMetric(_) => "BadMetric",
            Error::UnknownElement(_) => "UnknownElement",
            Error::NotALatticeMap(_) => "NotALatticeMap",
            Error::EmptySimplex => "EmptySimplex",
            Error::DuplicateVertexInSimplex(_) => "DuplicateVertexInSimplex",
            Error::NotASubcomplex(_) => "NotASubcomplex",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InvalidField(_) => "InvalidField",
            Error::NotMonotone(_) => "NotMonotone",
            Error::TopNotFull => "TopNotFull",
            Error::MissingAssignment(_) => "MissingAssignment",
            Error::LatticeMismatch(_) => "LatticeMismatch",
            Error::NotComposable(_) => "NotComposable",
            Error::MapNotLifted(_) => "MapNotLifted",
            Error::InvalidMorphism(_) => "InvalidMorphism",
            Error::Overflow(_) => "Overflow",
            Error::InvalidStep { .. } => "InvalidStep",
            Error::BrokenChain(_) => "BrokenChain",
            Error::NegativeMass(_) => "NegativeMass",
            Error::NotTotallyOrdered => "NotTotallyOrdered",
            Error::NoEmbedding(_) => "NoEmbedding",
            Error::InfiniteMixing(_) => "InfiniteMixing",
            Error::InvalidMatching(_) => "InvalidMatching",
            Error::NotIncreasing => "NotIncreasing",
            Error::Empty => "Empty",
            Error::NotClassicalIndex(_) => "NotClassicalIndex",
            Error::Format(_) => "Format",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
