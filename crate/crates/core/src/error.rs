use std::fmt;

use thiserror::Error;

/// Hypotheses of the hypersurface rank formulas. A failed one is reported
/// by name instead of producing a rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    /// The ambient toric variety has dimension at least four.
    DimensionAtLeastFour,
    /// The support function of the divisor class is convex.
    ConvexRho,
    /// The Newton polytope of the section is the whole section polytope.
    NewtonPolytopeFull,
    /// No lifted ray lies in the relative interior of a facet.
    NoRayInFacetInterior,
    /// The graph fan refines a fan on the boundary of the epigraph cone
    /// whose rays are the 1-faces of that cone.
    RefinesBoundaryFan,
    /// The convex hull of the rays is a reflexive polytope.
    Reflexive,
    /// The union of the fan simplices is convex.
    ConvexRegion,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::DimensionAtLeastFour => "lattice rank is at least 4",
            Hypothesis::ConvexRho => "rho is convex",
            Hypothesis::NewtonPolytopeFull => "Newton polytope equals the section polytope",
            Hypothesis::NoRayInFacetInterior => "no ray in a facet interior (condition i)",
            Hypothesis::RefinesBoundaryFan => "fan refines the boundary face fan (condition ii)",
            Hypothesis::Reflexive => "polytope is reflexive",
            Hypothesis::ConvexRegion => "the fan polytope is convex",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero vector has no primitive part")]
    ZeroVector,
    #[error("generators do not span a full-rank sublattice of Z^{0}")]
    NotFiniteIndex(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ambient dimension {0} exceeds the supported maximum of 6")]
    DimensionTooLarge(usize),
    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),
    #[error("ray {0} appears more than once")]
    DuplicateRay(usize),
    #[error("cone {0} is not simplicial of full dimension")]
    NonSimplicialCone(usize),
    #[error("cone index {index} out of range in cone {cone}")]
    RayIndexOutOfRange { cone: usize, index: usize },
    #[error("cones {0} and {1} overlap")]
    OverlappingCones(usize, usize),
    #[error("fan is not complete")]
    IncompleteFan,
    #[error("cone is not strongly convex")]
    NotStronglyConvex,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("fans live in lattices of different rank")]
    AmbientMismatch,
    #[error("star point lies inside the support")]
    QInsideSupport,
    #[error("the point q_L lies on the graph of the support function")]
    QOnGraph,
    #[error("point lies outside the fan support")]
    OutsideSupport,

    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("polytope is not reflexive")]
    NotReflexive,
    #[error("region is unbounded")]
    Unbounded,
    #[error("dual cone generator has non-positive height; cross-section is unbounded")]
    UnboundedSection,

    #[error("rho has {got} coefficients, fan has {expected} rays")]
    RhoLength { expected: usize, got: usize },
    #[error("rho coefficient for ray {0} is negative")]
    NegativeRho(usize),
    #[error("rho is identically zero")]
    ZeroRho,
    #[error("rho is not convex")]
    NotConvexRho,
    #[error("section point {0:?} is not in the section basis")]
    SectionOutsideBasis(Vec<String>),
    #[error("section has no nonzero coefficients")]
    EmptySection,
    #[error("point is not a vertex of the section polytope")]
    NotAVertex,
    #[error("vertex is not in the support of the section")]
    VertexNotInSupport,
    #[error("max cone index {0} out of range")]
    ConeIndexOutOfRange(usize),

    #[error("hypothesis failed: {0}")]
    PreconditionFailed(Hypothesis),
    #[error("lattice rank must be 4, got {0}")]
    WrongDimension(usize),

    #[error("weights violate gcd(n_j : j != i) = 1")]
    BadWeights,
    #[error("group generator is not a finite-order diagonal element")]
    NotFiniteGroup,
    #[error("inconsistent rays: {0}")]
    InconsistentRays(String),
    #[error("ray {0} lies outside the support of the base fan")]
    RayOutsideSupport(usize),
    #[error("expected exactly {expected} weights, got {got}")]
    WrongArity { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
