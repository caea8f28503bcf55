use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not in the kernel of the equality matrix")]
    NotInKernel,
    #[error("cap exceeded: {cap} limit {limit}, requested {requested}")]
    CapExceeded { cap: &'static str, limit: usize, requested: usize },
    #[error("empty circuit set")]
    EmptySet,
    #[error("point is infeasible")]
    InfeasiblePoint,
    #[error("direction is not feasible at the point")]
    InfeasibleDirection,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("the system has a nonzero lineality direction; its circuits are not finitely many")]
    LinealitySpace,
    #[error("no walk exists in the explored state space")]
    NotFound,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bad instance: {0}")]
    BadInstance(String),
    #[error("coloring is not proper")]
    ImproperColoring,
    #[error("colorings are equal")]
    EqualColorings,
    #[error("vector is not integral")]
    NotIntegral,
    #[error("bad color set: {0}")]
    BadColorSet(String),
    #[error("invalid generalized swap: {0}")]
    SwapInvalid(SwapCondition),
    #[error("target coloring is unreachable")]
    Unreachable,
    #[error("edge set is not a forest")]
    NotAForest,
    #[error("the vector is a circuit")]
    IsActuallyCircuit,
    #[error("vector is not mixed-sign")]
    NotMixedSign,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("loop edge at line {line}")]
    LoopEdge { line: usize },
    #[error("duplicate edge at line {line}")]
    DuplicateEdge { line: usize },
    #[error("unknown claim {0:?}")]
    UnknownClaim(String),
    #[error("io: {0}")]
    Io(String),
}

/// Which requirement of a generalized Kempe swap is violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwapCondition {
    /// A vertex outside the chain changed color.
    OutsideChanged,
    /// A chain vertex kept its color.
    ChainUnchanged,
    /// A chain edge passes neither endpoint's old color to the other.
    EdgeInheritance,
    /// The result is not a proper coloring.
    Properness,
}

impl SwapCondition {
    /// Condition index as numbered in the definition; properness has none.
    pub fn index(self) -> Option<u8> {
        match self {
            SwapCondition::OutsideChanged => Some(1),
            SwapCondition::ChainUnchanged => Some(2),
            SwapCondition::EdgeInheritance => Some(3),
            SwapCondition::Properness => None,
        }
    }
}

impl std::fmt::Display for SwapCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.index() {
            Some(i) => write!(f, "condition {i}"),
            None => write!(f, "properness"),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
