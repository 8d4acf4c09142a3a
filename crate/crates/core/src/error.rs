use alloc::string::String;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Bad sizes, out-of-range hyper-parameters, inconsistent inputs.
    #[error("configuration error: {0}")]
    Config(String),

    /// A gate that cannot be placed on the given register.
    #[error("circuit construction error: {0}")]
    Circuit(String),

    /// A feature vector that cannot be amplitude encoded.
    #[error("encoding error: {0}")]
    Encoding(String),

    /// NaN/Inf or a broken normalisation surfaced during simulation.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! config_err {
    ($($arg:tt)*) => { $crate::error::Error::Config(alloc::format!($($arg)*)) };
}
macro_rules! circuit_err {
    ($($arg:tt)*) => { $crate::error::Error::Circuit(alloc::format!($($arg)*)) };
}

pub(crate) use circuit_err;
pub(crate) use config_err;
