use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("{y} is not coprime to {n} (gcd = {gcd}); the gcd is already a factor")]
    NotCoprime { y: u64, n: u64, gcd: u64 },

    #[error("modulus {n} exceeds the order-search bound {bound}")]
    ModulusTooLarge { n: u64, bound: u64 },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid error model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch for {what}: expected {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("qubit index {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    Unnormalized(f64),

    #[error("register of {0} qubits exceeds the simulation cap")]
    TooManyQubits(u32),

    #[error("instance has no (N, y) pair; order recovery needs one")]
    NoFactoringTarget,
}

pub type Result<T> = std::result::Result<T, Error>;
