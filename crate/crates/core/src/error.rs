use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A documented precondition does not hold; the message names the failing inequality.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("no irreducible polynomial of degree {m} over F_{p} (this is a bug)")]
    NoIrreducible { p: u64, m: u32 },

    #[error("unsupported oracle combination: {0}")]
    Unsupported(String),

    #[error("size guard exceeded: q^N = {q}^{n} = {total} > {guard}")]
    SizeGuard { q: u64, n: usize, total: u128, guard: u128 },

    #[error("malformed input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(what()))
    }
}
