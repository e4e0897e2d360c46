use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    GeneratorOutOfRange { index: usize, available: usize },
    NotInvertible,
    ChartMismatch,
    DegreeMismatch { expected: usize, found: usize },
    NotHomogeneous,
    NotConstant(String),
    NotSymplectic(String),
    NotHamiltonian(String),
    Unsupported(String),
    InvalidAlgebra(String),
    InvalidComplex(String),
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GeneratorOutOfRange { index, available } => {
                write!(f, "generator th{} out of range (1..={})", index, available)
            }
            Error::NotInvertible => f.write_str("element has zero body and is not invertible"),
            Error::ChartMismatch => f.write_str("operands live on different charts"),
            Error::DegreeMismatch { expected, found } => {
                write!(f, "expected degree {}, found {}", expected, found)
            }
            Error::NotHomogeneous => f.write_str("operand is not homogeneous"),
            Error::NotConstant(s) => write!(f, "expected a constant: {}", s),
            Error::NotSymplectic(s) => write!(f, "not symplectic: {}", s),
            Error::NotHamiltonian(s) => write!(f, "not hamiltonian: {}", s),
            Error::Unsupported(s) => write!(f, "unsupported: {}", s),
            Error::InvalidAlgebra(s) => write!(f, "invalid algebra: {}", s),
            Error::InvalidComplex(s) => write!(f, "invalid simplicial complex: {}", s),
            Error::Invalid(s) => f.write_str(s),
        }
    }
}

#[cfg(feature = "std")]
extern crate std;

#[cfg(feature = "std")]
impl std::error::Error for Error {}
