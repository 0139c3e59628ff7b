use thiserror::Error;

/// Errors raised by the analytical and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "closed-form bounds need T > 2/(Ka-2) and (K, T) != (1, 1); got K = {k}, T = {t}, Ka = {ka}"
    )]
    BoundDomain { k: u32, t: u64, ka: f64 },

    #[error("blocking threshold {0} must lie in ({min:e}, 1)", min = crate::dimensioning::MIN_THRESHOLD)]
    Threshold(f64),

    #[error(
        "multiplexing gain is undefined: an unshared link needs zero capacity at threshold {0}"
    )]
    UndefinedGain(f64),

    #[error("capacity search exceeded T = {0} without meeting the threshold")]
    SearchExhausted(u64),

    #[error("cannot assign users: the RRU set is empty")]
    NoRrus,

    #[error("cannot form clusters of size {k} from {n_rrus} RRUs")]
    TooFewRrus { n_rrus: usize, k: u32 },

    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
