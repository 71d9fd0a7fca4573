//! Surface types, pants decompositions, words in π₁, curve and arc classes,
//! and the topological double.

mod decomposition;
mod double;
mod enumerate;
mod word;

pub use decomposition::{
    default_pants_decomposition, Family, Hole, PantsDecomposition, Presentation, Slot, SlotRole,
    SurfaceType,
};
pub use double::{double, double_arc, DoubledSurface};
pub use enumerate::{
    boundary_words, canonical_arc, christoffel, double_coset_canonical, enumerate_arcs,
    enumerate_curves, geometric_simplicity, is_primitive_rank2, is_simple, slope_word, slopes,
    ArcClass, CurveClass, CurveTag, Simplicity, WordImage, SIMPLICITY_CONJUGATOR_BOUND,
};
pub use word::{reduced_words, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("surface {0} is not hyperbolic (needs χ < 0)")]
    NonHyperbolicType(SurfaceType),
    #[error("surface {0} has no boundary")]
    NoBoundary(SurfaceType),
    #[error("no enumeration is available for surface {0}")]
    UnsupportedFamily(SurfaceType),
    #[error("invalid pants decomposition: {0}")]
    InvalidDecomposition(String),
}
