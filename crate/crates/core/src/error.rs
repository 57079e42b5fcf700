//! Error types shared across the crate.

use thiserror::Error;

/// The arithmetic identity that a tensor failed during validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomIdentity {
    /// p_0x^y = p_x0^y = delta_xy
    Delta,
    /// exactly one j with p_ij^0 > 0, and i** = i
    Involution,
    /// k_i = k_{i*}
    InvolutionValency,
    /// sum_u p_iu^j = k_i
    RowSum,
    /// k_i k_j = sum_u p_ij^u k_u
    ProductValency,
    /// k_l p_ij^l = k_i p_{l j*}^i = k_j p_{i* l}^j
    TripleSymmetry,
    /// sum_i k_i = |X|
    ValencySum,
}

impl std::fmt::Display for AxiomIdentity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            AxiomIdentity::Delta => "delta identity (p_0x^y = p_x0^y = delta_xy)",
            AxiomIdentity::Involution => "involution (unique j with p_ij^0 > 0)",
            AxiomIdentity::InvolutionValency => "involution valency (k_i = k_i*)",
            AxiomIdentity::RowSum => "row sum (sum_u p_iu^j = k_i)",
            AxiomIdentity::ProductValency => "product valency (k_i k_j = sum_u p_ij^u k_u)",
            AxiomIdentity::TripleSymmetry => {
                "triple symmetry (k_l p_ij^l = k_i p_lj*^i = k_j p_i*l^j)"
            }
            AxiomIdentity::ValencySum => "valency sum (sum_i k_i = |X|)",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("not an association scheme: {0}")]
    NotAScheme(String),

    #[error("malformed relation matrix: {0}")]
    MalformedMatrix(String),

    #[error("axiom violation: {identity} at indices {indices:?}: {lhs} != {rhs}")]
    AxiomViolation {
        identity: AxiomIdentity,
        indices: Vec<usize>,
        lhs: u64,
        rhs: u64,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate catalog id: {0}")]
    DuplicateId(String),

    #[error("tensor shape mismatch: {0}")]
    TensorShape(String),

    #[error("empty operand")]
    EmptyOperand,

    #[error("subset is not closed")]
    NotClosed,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("enumeration too large: {needed} free indices exceed the cap of {cap}")]
    TooLarge { needed: usize, cap: usize },

    #[error("structural method not applicable: {0}")]
    NotApplicable(String),

    #[error("scheme is not quasi-thin: k_{index} = {valency}")]
    NotQuasiThin { index: usize, valency: u64 },

    #[error("relation {index} has valency {valency}, expected 2")]
    ValencyNotTwo { index: usize, valency: u64 },

    #[error("product A_{a} A_{b} matches no quasi-thin case")]
    NoCaseMatches { a: usize, b: usize },

    #[error("dimension mismatch: got {got} coordinates, scheme has {want}")]
    DimensionMismatch { got: usize, want: usize },

    #[error("relation index {index} out of range (scheme has {len} relations)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
