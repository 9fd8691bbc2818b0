use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("{name} = {value} is outside the domain ({constraint})")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// A channel or configuration parameter violates its constraints.
    #[error("{0}")]
    InvalidParameter(String),

    /// The operation has no meaning for this channel family.
    #[error("{operation} is not defined for the {family} model")]
    Unsupported {
        operation: &'static str,
        family: &'static str,
    },

    #[error("quadrature did not converge within {subdivisions} subdivisions (estimate {estimate}, residual {residual:e})")]
    NoConvergence {
        subdivisions: usize,
        estimate: f64,
        residual: f64,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, constraint: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            constraint,
        }
    }
}
