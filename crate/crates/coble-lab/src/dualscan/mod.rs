//! The finite-field dual-variety laboratory: sampling points on
//! hypersurfaces, interpolating dual hypersurfaces by a degree sweep,
//! Gauss-class counting, exhaustive singular-locus scans, and the derived
//! parameter search.

mod cache;
mod interp;
mod sample;
mod scan;
mod search;

pub use cache::{dual_cache_key, CacheDir, CACHE_ENV};
pub use interp::{
    biduality_check, dual_interpolate, fit_dominant_hyperplane, hyperplane_fit, BidualityReport,
    DualInterpolation, DualOutcome,
};
pub use sample::{gauss_classes, normalize_projective, sample_points, HypersurfaceSamples, SampleStream};
pub use scan::{singular_scan, singular_scan_bruteforce};
pub use search::{find_special_alpha, find_special_alpha_large, jacobian_hilbert_value};

use crate::coble::{build_cubic, CobleParams};
use crate::fields::{FieldElem, FieldError};
use crate::multipoly::{MultiPoly, PolyError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DualScanError {
    #[error("sampling budget exhausted: {delivered} of {requested} smooth points")]
    SamplingBudget { delivered: usize, requested: usize },
    #[error("operation requires a finite field")]
    NotFinite,
    #[error("operation requires a prime field")]
    PrimeFieldRequired,
    #[error("zero polynomial has no hypersurface")]
    ZeroPolynomial,
    #[error("exhaustive budget exceeded: needs {needed}, budget {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("scans support prime fields and quadratic extensions, not degree {0}")]
    UnsupportedExtension(u32),
    #[error("ambient projective space must have 2..=5 homogeneous coordinates, got {0}")]
    AmbientUnsupported(usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("interpolated form fails on held-out images at degree {degree}")]
    HoldoutFailed { degree: usize },
    #[error("no common hyperplane through the sample points")]
    NoCommonHyperplane,
    #[error("points are degenerate: hyperplane fit has nullity {nullity}")]
    DegeneratePoints { nullity: usize },
    #[error("p = {p} has p mod 3 = {rem}, need p ≡ 1 (mod 3)")]
    CongruenceObstruction { p: u64, rem: u64 },
    #[error("search exhausted {cap} candidates")]
    SearchExhausted { cap: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Interpolate the dual sextic of the cubic for the given parameters, with
/// optional disk caching keyed by (α, p, seed).
pub fn coble_sextic(
    params: &CobleParams,
    seed: u64,
    oversample: f64,
    cache: Option<&CacheDir>,
) -> Result<DualInterpolation, DualScanError> {
    let p = params
        .field
        .order()
        .ok_or(DualScanError::NotFinite)?;
    let alpha_u64: [u64; 5] = std::array::from_fn(|i| match &params.alpha[i] {
        FieldElem::Fp(x) => *x,
        _ => panic!("prime-field parameters expected"),
    });
    let key = dual_cache_key("sextic", &alpha_u64, p, seed);
    if let Some(c) = cache {
        if let Some((poly, meta)) = c.load(&key) {
            return Ok(DualInterpolation {
                degree: poly.degree(),
                dual: poly,
                nullity: meta["nullity"].as_u64().unwrap_or(1) as usize,
                prev_degree_nullity: meta["prev_degree_nullity"].as_u64().map(|x| x as usize),
                rows_used: meta["rows_used"].as_u64().unwrap_or(0) as usize,
                holdout_checked: meta["holdout_checked"].as_u64().unwrap_or(0) as usize,
            });
        }
    }
    let g = build_cubic(params);
    let outcome = dual_interpolate(&g, 6, oversample, seed)?;
    let DualOutcome::Found(found) = outcome else {
        return Err(DualScanError::DegenerateInput(format!(
            "dual interpolation of the cubic did not settle: {outcome:?}"
        )));
    };
    if let Some(c) = cache {
        let meta = serde_json::json!({
            "field": params.field.format_spec(),
            "alpha": alpha_u64,
            "seed": seed,
            "oversample": oversample,
            "degree": found.degree,
            "nullity": found.nullity,
            "prev_degree_nullity": found.prev_degree_nullity,
            "rows_used": found.rows_used,
            "holdout_checked": found.holdout_checked,
        });
        c.store(&key, &found.dual, &meta)
            .map_err(|e| DualScanError::DegenerateInput(format!("cache write failed: {e}")))?;
    }
    Ok(found)
}

/// A `MultiPoly` whose coefficients and support make it a plausible dual of
/// the cubic: used by pipelines to sanity-check cached artifacts.
pub fn looks_like_sextic(f: &MultiPoly) -> bool {
    f.nvars() == 9 && f.homogeneous_degree() == Some(6)
}
