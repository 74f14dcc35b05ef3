use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("gate matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("gate `{0}` is not a basis permutation")]
    NotPermutation(String),
    #[error("{what} exceeds guard: {value} > {limit}")]
    Guard {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("prefix length {t} out of range (circuit has {m} gates)")]
    PrefixOutOfRange { t: usize, m: usize },
    #[error("marginals unsupported by the {0} backend")]
    MarginalsUnsupported(&'static str),
    #[error("unsupported gate for this backend: {0}")]
    UnsupportedGate(String),
    #[error("branch mass {mass:.3e} below threshold at gate {t}: inconsistent oracle")]
    ZeroBranchMass { t: usize, mass: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate ground space: gap {gap:.3e} below threshold")]
    DegenerateGroundState { gap: f64 },
    #[error("not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("state {0} is outside the support of the target distribution")]
    OutsideSupport(String),
    #[error("no projector family connects {x} and {y}")]
    NoConnectingFamily { x: String, y: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("face {face} is not a cycle")]
    FaceNotCycle { face: usize },
    #[error("face boundaries span dimension {rank}, cycle space has dimension {dim}")]
    RankDeficient { rank: usize, dim: usize },
    #[error("insufficient samples: {have} < {need}")]
    InsufficientSamples { have: usize, need: usize },
    #[error("reduction produced non-integral count {0}")]
    NonIntegral(f64),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
