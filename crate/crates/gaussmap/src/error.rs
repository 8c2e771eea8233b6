use thiserror::Error;

/// Errors raised by the geometry kernel and the analyses built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector has zero length")]
    ZeroVector,
    #[error("degenerate wedge: an arm coincides with the apex or its antipode")]
    DegenerateWedge,
    #[error("polygon is not simple")]
    NotSimple,
    #[error("degenerate edge {0}: endpoints equal or antipodal")]
    DegenerateEdge(usize),
    #[error("non-transversal intersection between edges {0} and {1}")]
    NonTransversal(usize, usize),
    #[error("arcs lie on a shared great circle")]
    SharedGreatCircle,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("invalid vertex star: {0}")]
    InvalidStar(String),
    #[error("consecutive face normals {0} and {1} are equal or antipodal")]
    AntipodalNormals(usize, usize),
    #[error("ring vertex {0} coincides with the center")]
    ZeroLengthEdge(usize),
    #[error("outer vertex of a neighbor of face {0} lies on its plane")]
    NeighborOnPlane(usize),
    #[error("direction is not general (margin {0:e})")]
    NotGeneral(f64),
    #[error("direction is not admissible for the polygon")]
    NotAdmissible,
    #[error("polygon vertex {0} lies on a non-incident edge")]
    DegenerateVertexOnEdge(usize),
    #[error("relative winding is inconsistent around a cycle")]
    InconsistentCycle,
    #[error("three consecutive vertices around index {0} lie on one great circle")]
    StraightVertex(usize),
    #[error("no winding shift satisfies the shape formula")]
    NoConsistentShift,
    #[error("Gauss image is self-intersecting")]
    SelfIntersectingGaussImage,
    #[error("curvature is zero")]
    ZeroCurvature,
    #[error("chord {0} is not a free chord of the upper hemisphere")]
    AnchorNotFree(usize),
    #[error("chord diagram cannot be realized: {0}")]
    Unrealizable(String),
    #[error("pair (i={0}, d={1}) is not realizable by a simple polygon")]
    InadmissiblePair(i64, i64),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("mesh is not a manifold: {0}")]
    NonManifold(String),
    #[error("mesh is not closed: {0}")]
    NotClosed(String),
    #[error("mesh orientation is inconsistent: {0}")]
    InconsistentOrientation(String),
    #[error("height function has {0} critical points, not three")]
    NotThreeCritical(usize),
}

impl Error {
    /// Stable machine readable code used in JSON envelopes.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZeroVector",
            Error::DegenerateWedge => "DegenerateWedge",
            Error::NotSimple => "NotSimple",
            Error::DegenerateEdge(_) => "DegenerateEdge",
            Error::NonTransversal(..) => "NonTransversal",
            Error::SharedGreatCircle => "SharedGreatCircle",
            Error::TooFewVertices(_) => "TooFewVertices",
            Error::InvalidStar(_) => "InvalidStar",
            Error::AntipodalNormals(..) => "AntipodalNormals",
            Error::ZeroLengthEdge(_) => "ZeroLengthEdge",
            Error::NeighborOnPlane(_) => "NeighborOnPlane",
            Error::NotGeneral(_) => "NotGeneral",
            Error::NotAdmissible => "NotAdmissible",
            Error::DegenerateVertexOnEdge(_) => "DegenerateVertexOnEdge",
            Error::InconsistentCycle => "InconsistentCycle",
            Error::StraightVertex(_) => "StraightVertex",
            Error::NoConsistentShift => "NoConsistentShift",
            Error::SelfIntersectingGaussImage => "SelfIntersectingGaussImage",
            Error::ZeroCurvature => "ZeroCurvature",
            Error::AnchorNotFree(_) => "AnchorNotFree",
            Error::Unrealizable(_) => "Unrealizable",
            Error::InadmissiblePair(..) => "InadmissiblePair",
            Error::IdentityViolation(_) => "IdentityViolation",
            Error::ParseError(_) => "ParseError",
            Error::NonManifold(_) => "NonManifold",
            Error::NotClosed(_) => "NotClosed",
            Error::InconsistentOrientation(_) => "InconsistentOrientation",
            Error::NotThreeCritical(_) => "NotThreeCritical",
        }
    }

    /// True for errors that report a failed identity or precondition on
    /// otherwise well-formed input, as opposed to malformed input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::IdentityViolation(_) | Error::NotThreeCritical(_) | Error::NoConsistentShift
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
