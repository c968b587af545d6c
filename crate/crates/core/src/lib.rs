//! Exact arithmetic in `Q(zeta_{q-1}, zeta_p)`, Gauss sums over finite fields,
//! and the cyclotomic matrices `A_q(k)`, `B_q(k)`, `C_q(k)`, `D_q(k)` together
//! with exact determinant machinery and executable checks for the closed-form
//! determinant identities.

pub mod characters;
pub mod cyclo;
pub mod finite_field;
pub mod matrix;
pub mod poly;
pub mod scalar;
pub mod verify;

pub use characters::{Character, GaussCtx, LocalElem};
pub use cyclo::{CycloCtx, CycloElem};
pub use finite_field::{FqCtx, FqElem};
pub use matrix::{EigenData, SquareMatrix};
pub use verify::VerificationReport;

/// Exact rational scalar used for all cyclotomic coefficients.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Matrix of exact cyclotomic field elements.
pub type CycloMatrix = SquareMatrix<CycloElem>;
/// Matrix of exact integers (Legendre-symbol and factorial matrices).
pub type IntMatrix = SquareMatrix<Int>;
/// Matrix of exact rationals (reciprocal-factorial matrices).
pub type RatMatrix = SquareMatrix<Rat>;

/// Errors raised by field construction and exact arithmetic.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {0} exceeds the configured bound {1}")]
    FieldTooLarge(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete log of zero is undefined")]
    DlogOfZero,
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(u64, u64),
    #[error("{0} does not divide {1}")]
    NotDivisor(u64, u64),
    #[error("exponent {0} out of range [0, {1}]")]
    ExponentOutOfRange(u64, u64),
    #[error("even modulus {0} for Jacobi symbol")]
    EvenModulus(u64),
    #[error("coefficient denominator divisible by p={0}")]
    DenominatorDivisibleByP(u64),
    #[error("character has order {0}, expected {1}")]
    WrongCharacterOrder(u64, u64),
    #[error("cache i/o: {0}")]
    CacheIo(#[from] std::io::Error),
    #[error("inconsistent field data: {0}")]
    BadFieldData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
