use thiserror::Error;

/// Everything that can go wrong while building or checking an algebraic object.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("invalid modulus {0}: must be a prime below 65536")]
    InvalidModulus(u64),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent at byte {pos}")]
    NegativeExponent { pos: usize },
    #[error("operands live in different polynomial rings")]
    MixedContext,
    #[error("operation requires a field base (Q or F_p)")]
    NonFieldBase,
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("free module ranks do not match")]
    RankMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relation uses a variable outside the generator list: {0}")]
    UnknownVariableInRelation(String),
    #[error("quotient ring is infinite dimensional")]
    InfiniteDimensional,
    #[error("base ring admits no finite tables")]
    NonFiniteBase,
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("map is not surjective")]
    NotSurjective,
    #[error("map is not a ring homomorphism: {0}")]
    NotARingHom(String),
    #[error("kernel does not square to zero: {a} * {b} = {product} != 0")]
    KernelSquareNonzero { a: usize, b: usize, product: usize },
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("no witness available: the algebra is not finite dimensional")]
    WitnessUnavailable,
    #[error("object is not finite")]
    NonFinite,

    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("kernel is not abelian: {a} and {b} do not commute")]
    KernelNonAbelian { a: usize, b: usize },
    #[error("conjugation action does not descend: {0}")]
    ActionIllDefined(String),
    #[error("map is not a group homomorphism: {0}")]
    NotAGroupHom(String),

    #[error("malformed input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}
