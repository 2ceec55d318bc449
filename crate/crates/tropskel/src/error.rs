use std::fmt;

/// Errors shared by every module of the crate.
///
/// Geometry errors carry enough context to point at the offending object;
/// parse errors keep the underlying message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Constraint vectors or operands disagree on ambient rank.
    DimensionMismatch { expected: usize, got: usize, context: String },
    /// Operation requires a nonempty polyhedron.
    EmptyInput(String),
    /// The given point does not lie in the polyhedron.
    PointNotInPolyhedron,
    /// The given point lies in no cell of the stratum.
    PointNotInSupport,
    /// A cone id that is not a member of the fan.
    UnknownCone(String),
    /// A cone that contains a line where a pointed cone is required.
    NotPointed(String),
    /// Cone intersections are not common faces.
    NotAFan(String),
    /// A Laurent polynomial with fewer than two terms cannot be tropicalized.
    TooFewTerms,
    /// Initial forms at points of a proper orbit stratum are refused.
    OrbitPointUnsupported(String),
    /// A stratum fails the purity validation required by a criterion.
    NotEquidimensional(String),
    /// A criterion needs a stratum for which the complex has no cells.
    MissingStratumData(String),
    /// relevant_cells was called with a point disagreeing with the data's base point.
    BasePointMismatch,
    /// Supplied component data contradicts a consequence the criterion enforces.
    DataInconsistent(String),
    /// A facet relation in a Helm-Katz input has no component inclusion.
    MissingInclusion { facet: String, component: String },
    /// A face relation whose dimensions do not drop by exactly one.
    NotGraded { facet: String, cell: String },
    /// A supplied lattice does not have full rank inside the reference lattice.
    IndexInfinite(String),
    /// Two routes that must agree produced different answers.
    InternalConsistency(String),
    /// Malformed input data (JSON shape, duplicate ids, bad rationals, ...).
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got, context } => {
                write!(f, "DIMENSION_MISMATCH: expected rank {expected}, got {got} ({context})")
            }
            Error::EmptyInput(ctx) => write!(f, "EMPTY_INPUT: {ctx}"),
            Error::PointNotInPolyhedron => write!(f, "POINT_NOT_IN_POLYHEDRON"),
            Error::PointNotInSupport => write!(f, "POINT_NOT_IN_SUPPORT"),
            Error::UnknownCone(id) => write!(f, "UNKNOWN_CONE: {id}"),
            Error::NotPointed(id) => write!(f, "NOT_POINTED: cone {id} contains a line"),
            Error::NotAFan(msg) => write!(f, "NOT_A_FAN: {msg}"),
            Error::TooFewTerms => write!(f, "TOO_FEW_TERMS"),
            Error::OrbitPointUnsupported(id) => {
                write!(f, "ORBIT_POINT_UNSUPPORTED: initial forms at points of stratum {id} must be supplied as data")
            }
            Error::NotEquidimensional(msg) => write!(f, "NOT_EQUIDIMENSIONAL: {msg}"),
            Error::MissingStratumData(id) => write!(f, "MISSING_STRATUM_DATA: stratum {id}"),
            Error::BasePointMismatch => write!(f, "BASE_POINT_MISMATCH"),
            Error::DataInconsistent(msg) => write!(f, "DATA_INCONSISTENT: {msg}"),
            Error::MissingInclusion { facet, component } => {
                write!(f, "MISSING_INCLUSION: facet {facet} has no inclusion for component {component}")
            }
            Error::NotGraded { facet, cell } => {
                write!(f, "NOT_GRADED: {facet} is listed as a facet of {cell} but dimensions do not drop by one")
            }
            Error::IndexInfinite(msg) => write!(f, "INDEX_INFINITE: {msg}"),
            Error::InternalConsistency(msg) => write!(f, "INTERNAL_CONSISTENCY: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
