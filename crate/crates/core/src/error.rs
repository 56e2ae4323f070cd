use std::fmt;

/// Errors raised by the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("productivity {0} is outside [0, 1]")]
    OutOfRangeProductivity(f64),
    #[error("lifetime {0} is negative or not finite")]
    NegativeOrNonFiniteLifetime(f64),
    #[error("a distribution needs at least one profile")]
    EmptyDistribution,
    #[error("health state labels must be non-empty")]
    EmptyStateLabel,

    #[error("full health state {state} must have weight 1 in table {table}, found {value}")]
    FullHealthWeightNotOne {
        table: &'static str,
        state: String,
        value: f64,
    },
    #[error("weight {value} for state {state} in table {table} is outside [0, 1]")]
    WeightOutOfRange {
        table: &'static str,
        state: String,
        value: f64,
    },
    #[error("r/s constraint violated at state {state}: {detail}")]
    RSConstraintViolated { state: String, detail: String },
    #[error("full health state {state} is missing from table {table}")]
    MissingFullHealth { table: &'static str, state: String },

    #[error("unknown health state {0:?}")]
    UnknownHealthState(String),
    #[error("family {0} cannot compute this without a user-supplied HPYE function")]
    UnsupportedFamily(String),
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("family {family} needs a {table} table")]
    MissingTable { family: String, table: &'static str },
    #[error("weight function rejected: {0}")]
    InvalidWeightFunction(String),
    #[error("HPYE function rejected: {0}")]
    InvalidHpyeFunction(String),
    #[error("lifetime {0} must be strictly positive")]
    NonPositiveLifetime(f64),

    #[error("unknown axiom {0:?}")]
    UnknownAxiom(String),
    #[error("axiom {axiom} cannot be exercised against {family}: {reason}")]
    UnsupportedAxiomForFamily {
        axiom: String,
        family: String,
        reason: &'static str,
    },

    #[error("{param} = {value} lies outside its admissible range")]
    ParameterOutOfRange { param: String, value: f64 },
    #[error("free parameter {param} does not apply to family {family}")]
    UnsupportedParameter { param: String, family: String },
    #[error(
        "sign pattern unstable: {coarse} roots on the coarse grid, {fine} on the refined grid"
    )]
    RootCountUnstable { coarse: usize, fine: usize },
    #[error("invalid solver setting: {0}")]
    InvalidSolverSetting(&'static str),

    #[error("malformed document at {locus}: {message}")]
    MalformedDocument { locus: String, message: String },
    #[error("could not write output: {0}")]
    Output(String),
    #[error("at {locus}: {source}")]
    Located { locus: String, source: Box<Error> },
}

impl Error {
    /// Strips any `Located` wrappers.
    pub fn kind(&self) -> &Error {
        match self {
            Error::Located { source, .. } => source.kind(),
            other => other,
        }
    }

    pub(crate) fn at(self, locus: impl fmt::Display) -> Error {
        Error::Located {
            locus: locus.to_string(),
            source: Box::new(self),
        }
    }

    /// True for failures of the numerical machinery rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(self.kind(), Error::RootCountUnstable { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
