use thiserror::Error;

/// Failures raised by the library.
///
/// Resource errors are never silently turned into truncated output; callers
/// that want partial results must raise the corresponding cap explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("resource cap exceeded: {what} = {requested} is above the configured cap {cap}")]
    Resource {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn internal<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Internal(msg.into()))
}

/// Enumeration limits. Every exhaustive routine checks the relevant field
/// before doing any work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Caps {
    /// Largest `n` for which a full poset is materialised.
    pub poset_n: usize,
    /// Largest `n` for which Möbius values over the whole poset are computed.
    pub mobius_n: usize,
    /// Largest label-set size for rooted tree enumeration.
    pub rooted_n: usize,
    /// Largest `n` for materialising every labeled bicolored tree.
    pub bicolored_n: usize,
    /// Largest `n` for the comb / Lyndon / Liu-Lyndon generators.
    pub family_n: usize,
    /// Largest `n` for order-complex (co)homology.
    pub homology_n: usize,
    /// Upper bound on the number of poset elements.
    pub max_elements: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            poset_n: 9,
            mobius_n: 6,
            rooted_n: 8,
            bicolored_n: 6,
            family_n: 8,
            homology_n: 5,
            max_elements: 2_000_000,
        }
    }
}

impl Caps {
    pub fn check(what: &'static str, requested: usize, cap: usize) -> Result<()> {
        if requested > cap {
            Err(Error::Resource {
                what,
                requested,
                cap,
            })
        } else {
            Ok(())
        }
    }
}
