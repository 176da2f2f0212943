//! An exact-arithmetic laboratory for the geometry of the Coble cubic and
//! sextic hypersurfaces in P⁸, their projective duality, and the classical
//! surfaces that appear in their linear sections: the Segre cubic and
//! Igusa–Segre quartic, the hexahedron, the Weddle quartic, and the 16-nodal
//! Kummer quartic.
//!
//! The toolkit works over exact fields only (ℚ, F_p, F_{p^k}). Dual
//! hypersurfaces are produced by finite-field interpolation: sample smooth
//! points of a hypersurface, push them through the gradient (Gauss) map,
//! and find the lowest-degree form vanishing on the images. All structural
//! identities are verified either symbolically (exact polynomial equality)
//! or by exhaustive enumeration over small finite fields.
//!
//! Module map:
//! - [`fields`]: rationals, prime fields, small extensions, root finding.
//! - [`multipoly`]: sparse homogeneous polynomials and linear substitution.
//! - [`linalg`]: dense exact linear algebra (rank, nullspace, solving).
//! - [`heis`]: the Schrödinger action of (F₃)⁴ on the nine coordinates,
//!   the involution τ, and invariant subspaces.
//! - [`coble`]: the cubic family, its polar map, fixed-locus embeddings,
//!   restriction identities, and the two closed-form degree computations.
//! - [`dualscan`]: sampling, dual interpolation, Gauss-class counting,
//!   exhaustive singular scans, and the derived parameter search.
//! - [`weddle`]: the six-point pipeline in P³ (quadric web, Weddle quartic,
//!   Kummer branch quartic, secant contractions) and the (15₃) incidence
//!   check.

pub mod coble;
pub mod dualscan;
pub mod fields;
pub mod heis;
pub mod linalg;
pub mod multipoly;
pub mod pipelines;
pub mod weddle;
