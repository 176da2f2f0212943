//! The cubic family on the nine coordinates, its polar map, the fixed-locus
//! embeddings of τ, the restriction identities connecting them, and two
//! closed-form degree computations.
//!
//! Coordinate order is fixed once and used everywhere:
//! (X₀₀, X₀₁, X₀₂, X₁₀, X₁₁, X₁₂, X₂₀, X₂₁, X₂₂).
//!
//! The two embeddings of the τ-fixed loci are
//!   γ₋(Z₀,Z₁,Z₂,Z₃) = (0, Z₀, −Z₀, Z₁, Z₂, Z₃, −Z₁, −Z₃, −Z₂),
//!   γ₊(Y₀,…,Y₄)     = (Y₀, Y₁, Y₁, Y₂, Y₃, Y₄, Y₂, Y₄, Y₃),
//! with P³₋ cut out by X₀₀, X₀₁+X₀₂, X₁₀+X₂₀, X₁₁+X₂₂, X₁₂+X₂₁ and P⁴₊ by
//! the four differences X₀₁−X₀₂, X₁₀−X₂₀, X₁₁−X₂₂, X₁₂−X₂₁.

use crate::fields::{FieldElem, FieldSpec};
use crate::heis::{self, coord_index, index_coord};
use crate::linalg::MatrixF;
use crate::multipoly::{monomial_basis, LinearChange, MultiPoly, PolyError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CobleError {
    #[error("alpha parameters are all zero")]
    ZeroAlpha,
    #[error("3 is not invertible in this field")]
    CharThree,
    #[error("input polynomial is not τ-invariant")]
    NotTauInvariant,
    #[error("expected a form in 9 variables")]
    NotNineVars,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The five parameters of the invariant cubic family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobleParams {
    pub alpha: [FieldElem; 5],
    pub field: FieldSpec,
}

impl CobleParams {
    pub fn new(field: FieldSpec, alpha: [FieldElem; 5]) -> Result<Self, CobleError> {
        if alpha.iter().all(|a| field.is_zero(a)) {
            return Err(CobleError::ZeroAlpha);
        }
        if field.characteristic() == Some(3) {
            return Err(CobleError::CharThree);
        }
        Ok(CobleParams { alpha, field })
    }

    pub fn from_i64(field: FieldSpec, alpha: [i64; 5]) -> Result<Self, CobleError> {
        let a = alpha.map(|x| field.from_i64(x));
        Self::new(field, a)
    }
}

/// The four triple-product orbits of the cubic family, grouped as rows,
/// columns, diagonals and antidiagonals of the 3×3 index square.
pub const TRIPLE_GROUPS: [[[(u8, u8); 3]; 3]; 4] = [
    [
        [(0, 0), (0, 1), (0, 2)],
        [(1, 0), (1, 1), (1, 2)],
        [(2, 0), (2, 1), (2, 2)],
    ],
    [
        [(0, 0), (1, 0), (2, 0)],
        [(0, 1), (1, 1), (2, 1)],
        [(0, 2), (1, 2), (2, 2)],
    ],
    [
        [(0, 0), (1, 1), (2, 2)],
        [(0, 1), (1, 2), (2, 0)],
        [(1, 0), (2, 1), (0, 2)],
    ],
    [
        [(0, 0), (1, 2), (2, 1)],
        [(0, 1), (1, 0), (2, 2)],
        [(0, 2), (1, 1), (2, 0)],
    ],
];

/// The 21-monomial invariant cubic: (α₀/3)·Σ X_b³ plus 2αᵢ times the four
/// orbit sums of triple products.
pub fn build_cubic(params: &CobleParams) -> MultiPoly {
    let f = &params.field;
    let mut g = MultiPoly::zero(9, f.clone());
    let third = f.inv(&f.from_i64(3)).expect("3 invertible by construction");
    let cube_coeff = f.mul(&params.alpha[0], &third);
    if !f.is_zero(&cube_coeff) {
        for i in 0..9 {
            let mut e = vec![0u8; 9];
            e[i] = 3;
            g = g.add(&MultiPoly::term(9, f.clone(), e, cube_coeff.clone()).unwrap());
        }
    }
    for (gi, group) in TRIPLE_GROUPS.iter().enumerate() {
        let coeff = f.mul(&f.from_i64(2), &params.alpha[gi + 1]);
        if f.is_zero(&coeff) {
            continue;
        }
        for triple in group {
            let mut e = vec![0u8; 9];
            for &b in triple {
                e[coord_index(b)] += 1;
            }
            g = g.add(&MultiPoly::term(9, f.clone(), e, coeff.clone()).unwrap());
        }
    }
    g
}

/// γ₋ : 4 variables into the 9 coordinates. Full column rank by construction.
pub fn gamma_minus(field: &FieldSpec) -> LinearChange {
    LinearChange::from_i64(
        field.clone(),
        &[
            &[0, 0, 0, 0],
            &[1, 0, 0, 0],
            &[-1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[0, -1, 0, 0],
            &[0, 0, 0, -1],
            &[0, 0, -1, 0],
        ],
    )
}

/// γ₊ : 5 variables into the 9 coordinates.
pub fn gamma_plus(field: &FieldSpec) -> LinearChange {
    LinearChange::from_i64(
        field.clone(),
        &[
            &[1, 0, 0, 0, 0],
            &[0, 1, 0, 0, 0],
            &[0, 1, 0, 0, 0],
            &[0, 0, 1, 0, 0],
            &[0, 0, 0, 1, 0],
            &[0, 0, 0, 0, 1],
            &[0, 0, 1, 0, 0],
            &[0, 0, 0, 0, 1],
            &[0, 0, 0, 1, 0],
        ],
    )
}

/// The linear forms cutting out the two fixed loci, as coefficient rows on
/// the nine coordinates.
pub struct FixedLoci {
    pub gamma_minus: LinearChange,
    pub gamma_plus: LinearChange,
    pub p3_minus_forms: Vec<Vec<FieldElem>>,
    pub p4_plus_forms: Vec<Vec<FieldElem>>,
}

impl FixedLoci {
    pub fn new(field: &FieldSpec) -> Self {
        let row = |coeffs: [i64; 9]| -> Vec<FieldElem> {
            coeffs.iter().map(|&c| field.from_i64(c)).collect()
        };
        let loci = FixedLoci {
            gamma_minus: gamma_minus(field),
            gamma_plus: gamma_plus(field),
            p3_minus_forms: vec![
                row([1, 0, 0, 0, 0, 0, 0, 0, 0]),
                row([0, 1, 1, 0, 0, 0, 0, 0, 0]),
                row([0, 0, 0, 1, 0, 0, 1, 0, 0]),
                row([0, 0, 0, 0, 1, 0, 0, 0, 1]),
                row([0, 0, 0, 0, 0, 1, 0, 1, 0]),
            ],
            p4_plus_forms: vec![
                row([0, 1, -1, 0, 0, 0, 0, 0, 0]),
                row([0, 0, 0, 1, 0, 0, -1, 0, 0]),
                row([0, 0, 0, 0, 1, 0, 0, 0, -1]),
                row([0, 0, 0, 0, 0, 1, 0, -1, 0]),
            ],
        };
        debug_assert!(loci.verify(field));
        loci
    }

    /// τ∘γ₋ = −γ₋, τ∘γ₊ = γ₊, and the linear forms vanish on the images.
    pub fn verify(&self, field: &FieldSpec) -> bool {
        let perm = heis::Involution::permutation();
        for j in 0..4 {
            for i in 0..9 {
                let tau_entry = self.gamma_minus.get(perm[i], j);
                if *tau_entry != field.neg(self.gamma_minus.get(i, j)) {
                    return false;
                }
            }
        }
        for j in 0..5 {
            for i in 0..9 {
                if self.gamma_plus.get(perm[i], j) != self.gamma_plus.get(i, j) {
                    return false;
                }
            }
        }
        let vanish = |forms: &[Vec<FieldElem>], gamma: &LinearChange| -> bool {
            forms.iter().all(|l| {
                (0..gamma.n_in).all(|j| {
                    let mut acc = field.zero();
                    for i in 0..9 {
                        let t = field.mul(&l[i], gamma.get(i, j));
                        acc = field.add(&acc, &t);
                    }
                    field.is_zero(&acc)
                })
            })
        };
        vanish(&self.p3_minus_forms, &self.gamma_minus)
            && vanish(&self.p4_plus_forms, &self.gamma_plus)
    }
}

/// The polar (dual) map of a cubic: its nine partial derivatives.
pub fn polar_map(g: &MultiPoly) -> Vec<MultiPoly> {
    assert_eq!(g.nvars(), 9, "polar map lives on the nine coordinates");
    g.gradient()
}

/// Outcome of a symbolic identity check; `failing` names the first index
/// where the identity broke.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub failing: Option<(u8, u8)>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict { pass: true, failing: None }
    }
    fn fail(b: (u8, u8)) -> Self {
        Verdict { pass: false, failing: Some(b) }
    }
}

/// Verify the nine identities (∂G/∂X_b)∘τ = ∂G/∂X_{−b}.
pub fn check_tau_equivariance(g: &MultiPoly) -> Result<Verdict, CobleError> {
    if g.nvars() != 9 {
        return Err(CobleError::NotNineVars);
    }
    let grads = g.gradient();
    for i in 0..9 {
        let b = index_coord(i);
        let neg_b = coord_index(((3 - b.0) % 3, (3 - b.1) % 3));
        if heis::tau_act(&grads[i]) != grads[neg_b] {
            return Ok(Verdict::fail(b));
        }
    }
    Ok(Verdict::pass())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaSign {
    Plus,
    Minus,
}

/// Restricted partials F'_b = (∂F/∂X_b)∘γ, indexed by coordinate.
fn restricted_partials(f: &MultiPoly, gamma: &LinearChange) -> Result<Vec<MultiPoly>, PolyError> {
    f.gradient()
        .iter()
        .map(|g| g.substitute_linear(gamma))
        .collect()
}

/// The parity-driven pattern of the restricted polar map of a τ-invariant
/// form.
///
/// - γ₋, even degree: F'₀₀ = 0 and F'_{−b} = −F'_b — the image lands in the
///   dual copy of P³₋.
/// - γ₋, odd degree: F'_{−b} = F'_b — the image lands in P⁴₊.
/// - γ₊, any degree: F'_{−b} = F'_b — the image lands in P⁴₊ (dual side).
pub fn check_fixed_locus_mapping(f: &MultiPoly, sign: GammaSign) -> Result<Verdict, CobleError> {
    if f.nvars() != 9 {
        return Err(CobleError::NotNineVars);
    }
    if heis::tau_act(f) != *f {
        return Err(CobleError::NotTauInvariant);
    }
    let field = f.field().clone();
    let gamma = match sign {
        GammaSign::Minus => gamma_minus(&field),
        GammaSign::Plus => gamma_plus(&field),
    };
    let parts = restricted_partials(f, &gamma)?;
    let degree = f.degree();
    let antisym = sign == GammaSign::Minus && degree % 2 == 0;
    if antisym && !parts[coord_index((0, 0))].is_zero() {
        return Ok(Verdict::fail((0, 0)));
    }
    for i in 0..9 {
        let b = index_coord(i);
        let nb = coord_index(((3 - b.0) % 3, (3 - b.1) % 3));
        if nb < i {
            continue;
        }
        let expected = if antisym { parts[nb].neg() } else { parts[nb].clone() };
        if parts[i] != expected {
            return Ok(Verdict::fail(b));
        }
    }
    Ok(Verdict::pass())
}

/// The extra linear relation cutting the image of the restricted polar map
/// of the cubic down to a P³ inside P⁴₊:
/// α₀·G'₀₀ + 2α₁·G'₀₁ + 2α₂·G'₁₀ + 2α₃·G'₁₁ + 2α₄·G'₁₂ = 0 with
/// G'_b = (∂G/∂X_b)∘γ₋. (The relation is quadratic in α: the αᵢ weights
/// multiply partials of the full α-dependent cubic, and all cross terms
/// cancel.)
pub fn check_polar_image_hyperplane(params: &CobleParams) -> Result<Verdict, CobleError> {
    let f = &params.field;
    let g = build_cubic(params);
    let gamma = gamma_minus(f);
    let parts = restricted_partials(&g, &gamma)?;
    let weights = expected_image_hyperplane(params);
    let order = [(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)];
    let mut acc = MultiPoly::zero(4, f.clone());
    for (ai, &b) in order.iter().enumerate() {
        acc = acc.add(&parts[coord_index(b)].scale(&weights[ai]));
    }
    Ok(if acc.is_zero() {
        Verdict::pass()
    } else {
        Verdict { pass: false, failing: None }
    })
}

/// The coefficient vector of that hyperplane in the P⁴₊ coordinates
/// (Y₀,…,Y₄) = (X₀₀, X₀₁, X₁₀, X₁₁, X₁₂):
/// V₀ = α₀Y₀ + 2α₁Y₁ + 2α₂Y₂ + 2α₃Y₃ + 2α₄Y₄.
pub fn expected_image_hyperplane(params: &CobleParams) -> Vec<FieldElem> {
    let f = &params.field;
    let a = &params.alpha;
    let two = f.from_i64(2);
    vec![
        a[0].clone(),
        f.mul(&two, &a[1]),
        f.mul(&two, &a[2]),
        f.mul(&two, &a[3]),
        f.mul(&two, &a[4]),
    ]
}

/// Verify that the restricted polar map agrees with the polar map of the
/// restriction: for γ₋ and even degree, ∂(F∘γ₋)/∂Z_i = 2·F'_{bᵢ} with
/// b = (01, 10, 11, 12); for γ₊, ∂(F∘γ₊)/∂Y₀ = F'₀₀ and ∂/∂Y_i = 2·F'_{bᵢ}.
pub fn check_restricted_dual_commutes(
    f: &MultiPoly,
    sign: GammaSign,
) -> Result<Verdict, CobleError> {
    if f.nvars() != 9 {
        return Err(CobleError::NotNineVars);
    }
    if heis::tau_act(f) != *f {
        return Err(CobleError::NotTauInvariant);
    }
    let field = f.field().clone();
    let two = field.from_i64(2);
    match sign {
        GammaSign::Minus => {
            let gamma = gamma_minus(&field);
            let h = f.substitute_linear(&gamma)?;
            let hg = h.gradient();
            let parts = restricted_partials(f, &gamma)?;
            let table = [(0, 1), (1, 0), (1, 1), (1, 2)];
            for (zi, &b) in table.iter().enumerate() {
                if hg[zi] != parts[coord_index(b)].scale(&two) {
                    return Ok(Verdict::fail(b));
                }
            }
            Ok(Verdict::pass())
        }
        GammaSign::Plus => {
            let gamma = gamma_plus(&field);
            let s = f.substitute_linear(&gamma)?;
            let sg = s.gradient();
            let parts = restricted_partials(f, &gamma)?;
            if sg[0] != parts[coord_index((0, 0))] {
                return Ok(Verdict::fail((0, 0)));
            }
            let table = [(0, 1), (1, 0), (1, 1), (1, 2)];
            for (yi, &b) in table.iter().enumerate() {
                if sg[yi + 1] != parts[coord_index(b)].scale(&two) {
                    return Ok(Verdict::fail(b));
                }
            }
            Ok(Verdict::pass())
        }
    }
}

/// G∘γ₊ expanded in the five P⁴₊ coordinates.
pub fn segre_restriction(params: &CobleParams) -> MultiPoly {
    build_cubic(params)
        .substitute_linear(&gamma_plus(&params.field))
        .expect("shape fixed")
}

/// The five restriction groups written out directly:
/// (1/3)(Y₀³+2Y₁³+2Y₂³+2Y₃³+2Y₄³), 2(Y₀Y₁²+2Y₂Y₃Y₄), 2(Y₀Y₂²+2Y₁Y₃Y₄),
/// 2(Y₀Y₃²+2Y₁Y₂Y₄), 2(Y₀Y₄²+2Y₁Y₂Y₃). `segre_restriction` must equal the
/// α-weighted sum of these coefficient-by-coefficient.
pub fn segre_restriction_groups(field: &FieldSpec) -> Vec<MultiPoly> {
    let t = |e: [u8; 5], c: i64| -> MultiPoly {
        MultiPoly::term(5, field.clone(), e.to_vec(), field.from_i64(c)).unwrap()
    };
    let third = field.inv(&field.from_i64(3)).expect("3 invertible");
    let g0 = t([3, 0, 0, 0, 0], 1)
        .add(&t([0, 3, 0, 0, 0], 2))
        .add(&t([0, 0, 3, 0, 0], 2))
        .add(&t([0, 0, 0, 3, 0], 2))
        .add(&t([0, 0, 0, 0, 3], 2))
        .scale(&third);
    let g1 = t([1, 2, 0, 0, 0], 2).add(&t([0, 0, 1, 1, 1], 4));
    let g2 = t([1, 0, 2, 0, 0], 2).add(&t([0, 1, 0, 1, 1], 4));
    let g3 = t([1, 0, 0, 2, 0], 2).add(&t([0, 1, 1, 0, 1], 4));
    let g4 = t([1, 0, 0, 0, 2], 2).add(&t([0, 1, 1, 1, 0], 4));
    vec![g0, g1, g2, g3, g4]
}

/// Rank of the five groups as vectors in the 35-dimensional space of cubics
/// in five variables.
pub fn segre_groups_rank(field: &FieldSpec) -> usize {
    let groups = segre_restriction_groups(field);
    let basis = monomial_basis(5, 3);
    let rows: Vec<Vec<FieldElem>> = groups
        .iter()
        .map(|g| basis.iter().map(|m| g.coeff(&m.0)).collect())
        .collect();
    MatrixF::from_rows(field.clone(), rows).rank()
}

/// deg Σ from the three intersection numbers: C(5,0)·t₅ + C(5,1)·t₄₁ +
/// C(5,2)·t₃₂ (the cube of the pulled-back polarization kills the rest).
pub fn sigma_degree(t5: i64, t41: i64, t32: i64) -> i64 {
    t5 + 5 * t41 + 10 * t32
}

/// Degree of the secant threefold of a curve spanning P⁴, from the plane
/// projection: nodes of the image = arithmetic genus of a plane curve of
/// that degree minus the geometric genus.
pub fn secant_threefold_degree(curve_deg: i64, genus: i64) -> i64 {
    (curve_deg - 1) * (curve_deg - 2) / 2 - genus
}

/// The shipped derived-parameter fixture: field, residues, provenance.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlphaFixture {
    pub p: u64,
    pub alpha: [u64; 5],
    pub seed: u64,
    pub search_criteria: String,
    pub candidates_tried: u64,
    /// Node counts from the exhaustive scans; None when the scan is out of
    /// budget (large primes).
    pub nodes_over_fp: Option<usize>,
    pub nodes_over_fp2: Option<usize>,
}

impl AlphaFixture {
    pub fn params(&self) -> CobleParams {
        let field = FieldSpec::prime(self.p).expect("fixture prime");
        let alpha = self.alpha.map(|a| FieldElem::Fp(a % self.p));
        CobleParams::new(field, alpha).expect("fixture alpha nonzero")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::{
        check_invariant, in_span, invariant_subspace, tau_act, HeisenbergElement, Invariance,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn f31() -> FieldSpec {
        FieldSpec::prime(31).unwrap()
    }

    fn random_params(field: &FieldSpec, rng: &mut impl Rng) -> CobleParams {
        loop {
            let alpha = [
                field.random(rng),
                field.random(rng),
                field.random(rng),
                field.random(rng),
                field.random(rng),
            ];
            if let Ok(p) = CobleParams::new(field.clone(), alpha) {
                return p;
            }
        }
    }

    #[test]
    fn build_cubic_special_cases() {
        let f = f31();
        // α = (3,0,0,0,0) → Σ X_b³
        let p = CobleParams::from_i64(f.clone(), [3, 0, 0, 0, 0]).unwrap();
        let g = build_cubic(&p);
        assert_eq!(g.num_terms(), 9);
        for (m, c) in g.terms() {
            assert_eq!(m.degree(), 3);
            assert_eq!(m.0.iter().filter(|&&e| e == 3).count(), 1);
            assert_eq!(*c, f.one());
        }
        // α = (0,1,0,0,0) → 2(X₀₀X₀₁X₀₂ + X₁₀X₁₁X₁₂ + X₂₀X₂₁X₂₂)
        let p = CobleParams::from_i64(f.clone(), [0, 1, 0, 0, 0]).unwrap();
        let g = build_cubic(&p);
        assert_eq!(g.num_terms(), 3);
        assert_eq!(g.coeff(&[1, 1, 1, 0, 0, 0, 0, 0, 0]), f.from_i64(2));
        assert_eq!(g.coeff(&[0, 0, 0, 1, 1, 1, 0, 0, 0]), f.from_i64(2));
        assert_eq!(g.coeff(&[0, 0, 0, 0, 0, 0, 1, 1, 1]), f.from_i64(2));
        // 21 monomials for generic α
        let p = CobleParams::from_i64(f.clone(), [3, 1, 7, 11, 13]).unwrap();
        assert_eq!(build_cubic(&p).num_terms(), 21);
    }

    #[test]
    fn cubic_is_invariant_and_tau_fixed() {
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let basis = invariant_subspace(3, &f).unwrap();
        for _ in 0..10 {
            let params = random_params(&f, &mut rng);
            let g = build_cubic(&params);
            assert_eq!(tau_act(&g), g);
            assert!(in_span(&g, &basis));
            for gen in HeisenbergElement::generators() {
                assert_eq!(check_invariant(&g, &gen).unwrap(), Invariance::Strict);
            }
        }
        // the degree-3 invariant span equals the span of the five groups:
        // each orbit-sum basis element is a specialization of build_cubic
        let five = [
            CobleParams::from_i64(f.clone(), [3, 0, 0, 0, 0]).unwrap(),
            CobleParams::from_i64(f.clone(), [0, 1, 0, 0, 0]).unwrap(),
            CobleParams::from_i64(f.clone(), [0, 0, 1, 0, 0]).unwrap(),
            CobleParams::from_i64(f.clone(), [0, 0, 0, 1, 0]).unwrap(),
            CobleParams::from_i64(f.clone(), [0, 0, 0, 0, 1]).unwrap(),
        ];
        let span: Vec<MultiPoly> = five.iter().map(build_cubic).collect();
        for b in &basis {
            assert!(in_span(b, &span));
        }
        for s in &span {
            assert!(in_span(s, &basis));
        }
    }

    #[test]
    fn polar_map_and_euler() {
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let params = random_params(&f, &mut rng);
        let g = build_cubic(&params);
        let quadrics = polar_map(&g);
        assert_eq!(quadrics.len(), 9);
        let mut euler = MultiPoly::zero(9, f.clone());
        for (i, q) in quadrics.iter().enumerate() {
            assert_eq!(q.homogeneous_degree(), Some(2));
            euler = euler.add(&MultiPoly::variable(9, f.clone(), i).mul(q).unwrap());
        }
        assert_eq!(euler, g.scale(&f.from_i64(3)));
    }

    #[test]
    fn tau_equivariance_verdicts() {
        let f = f31();
        let q = FieldSpec::rationals();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for field in [f.clone(), q] {
            let params = random_params(&field, &mut rng);
            let g = build_cubic(&params);
            assert!(check_tau_equivariance(&g).unwrap().pass);
        }
        // X₀₁³ is not τ-invariant: the check fails at b = (0,1)
        let bad =
            MultiPoly::term(9, f.clone(), vec![0, 3, 0, 0, 0, 0, 0, 0, 0], f.one()).unwrap();
        let v = check_tau_equivariance(&bad).unwrap();
        assert!(!v.pass);
        assert_eq!(v.failing, Some((0, 1)));
    }

    #[test]
    fn fixed_locus_mapping_cubic() {
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..5 {
            let params = random_params(&f, &mut rng);
            let g = build_cubic(&params);
            // odd degree, both embeddings give the symmetric pattern
            assert!(check_fixed_locus_mapping(&g, GammaSign::Minus).unwrap().pass);
            assert!(check_fixed_locus_mapping(&g, GammaSign::Plus).unwrap().pass);
            // and the image of γ̌₋ satisfies the α-hyperplane
            assert!(check_polar_image_hyperplane(&params).unwrap().pass);
            // commuting square on the γ₊ side
            assert!(check_restricted_dual_commutes(&g, GammaSign::Plus).unwrap().pass);
        }
        // non-invariant input is a precondition error
        let bad =
            MultiPoly::term(9, f.clone(), vec![0, 3, 0, 0, 0, 0, 0, 0, 0], f.one()).unwrap();
        assert!(matches!(
            check_fixed_locus_mapping(&bad, GammaSign::Minus),
            Err(CobleError::NotTauInvariant)
        ));
    }

    #[test]
    fn fixed_loci_structure() {
        for field in [f31(), FieldSpec::rationals()] {
            let loci = FixedLoci::new(&field);
            assert!(loci.verify(&field));
            // X₀₀ ∘ γ₋ = 0 and (X₀₁+X₀₂) ∘ γ₋ = 0
            let x00 = MultiPoly::variable(9, field.clone(), 0);
            assert!(x00.substitute_linear(&loci.gamma_minus).unwrap().is_zero());
            let x01px02 =
                MultiPoly::linear_form(9, field.clone(), &loci.p3_minus_forms[1]);
            assert!(x01px02
                .substitute_linear(&loci.gamma_minus)
                .unwrap()
                .is_zero());
            // (X₀₁−X₀₂) ∘ γ₊ = 0
            let diff = MultiPoly::linear_form(9, field.clone(), &loci.p4_plus_forms[0]);
            assert!(diff.substitute_linear(&loci.gamma_plus).unwrap().is_zero());
        }
    }

    #[test]
    fn segre_restriction_matches_display() {
        // the restriction is linear in α, so checking the five basis vectors
        // proves the identity for symbolic α
        for field in [f31(), FieldSpec::rationals()] {
            let groups = segre_restriction_groups(&field);
            let basis_params = [
                [1i64, 0, 0, 0, 0],
                [0, 1, 0, 0, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 0, 0, 1],
            ];
            for (i, a) in basis_params.iter().enumerate() {
                let p = CobleParams::from_i64(field.clone(), *a).unwrap();
                assert_eq!(segre_restriction(&p), groups[i], "group {i}");
            }
            // and on a random α as a redundant spot check
            let mut rng = ChaCha20Rng::seed_from_u64(11);
            let params = random_params(&field, &mut rng);
            let mut expect = MultiPoly::zero(5, field.clone());
            for (i, g) in groups.iter().enumerate() {
                expect = expect.add(&g.scale(&params.alpha[i]));
            }
            assert_eq!(segre_restriction(&params), expect);
            assert_eq!(segre_groups_rank(&field), 5);
        }
    }

    #[test]
    fn segre_special_values() {
        let f = f31();
        // α = (3,0,0,0,0) → Y₀³ + 2Y₁³ + 2Y₂³ + 2Y₃³ + 2Y₄³
        let p = CobleParams::from_i64(f.clone(), [3, 0, 0, 0, 0]).unwrap();
        let s = segre_restriction(&p);
        assert_eq!(s.coeff(&[3, 0, 0, 0, 0]), f.one());
        assert_eq!(s.coeff(&[0, 3, 0, 0, 0]), f.from_i64(2));
        assert_eq!(s.num_terms(), 5);
        // α = (0,1,0,0,0) → 2(Y₀Y₁² + 2Y₂Y₃Y₄)
        let p = CobleParams::from_i64(f.clone(), [0, 1, 0, 0, 0]).unwrap();
        let s = segre_restriction(&p);
        assert_eq!(s.coeff(&[1, 2, 0, 0, 0]), f.from_i64(2));
        assert_eq!(s.coeff(&[0, 0, 1, 1, 1]), f.from_i64(4));
        assert_eq!(s.num_terms(), 2);
        // nonzero for every nonzero α (checked on a seeded sample)
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        for _ in 0..50 {
            let params = random_params(&f, &mut rng);
            assert!(!segre_restriction(&params).is_zero());
        }
    }

    #[test]
    fn closed_form_degrees() {
        assert_eq!(sigma_degree(5, 4, 2), 45);
        assert_eq!(sigma_degree(1, 0, 0), 1);
        assert_eq!(sigma_degree(0, 0, 0), 0);
        assert_eq!(secant_threefold_degree(6, 2), 8);
        assert_eq!(secant_threefold_degree(3, 1), 0);
        assert_eq!(secant_threefold_degree(4, 3), 0);
    }

    #[test]
    fn gradient_tau_composite_identity() {
        // (∇F)∘τ = τ∘(∇F) as polynomial identities, odd and even degree
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        let params = random_params(&f, &mut rng);
        let g = build_cubic(&params);
        let perm = heis::Involution::permutation();
        let tau_lc = {
            let mut rows = vec![vec![f.zero(); 9]; 9];
            for (i, row) in rows.iter_mut().enumerate() {
                row[perm[i]] = f.one();
            }
            LinearChange::new(f.clone(), rows)
        };
        let grads = g.gradient();
        for i in 0..9 {
            let lhs = grads[i].substitute_linear(&tau_lc).unwrap();
            assert_eq!(lhs, grads[perm[i]]);
        }
        // even-degree case via the square of the cubic
        let sextic = g.mul(&g).unwrap();
        let sg = sextic.gradient();
        for i in 0..9 {
            let lhs = sg[i].substitute_linear(&tau_lc).unwrap();
            assert_eq!(lhs, sg[perm[i]]);
        }
        // the sextic also satisfies the even-degree restriction pattern
        assert!(check_fixed_locus_mapping(&sextic, GammaSign::Minus).unwrap().pass);
        assert!(check_restricted_dual_commutes(&sextic, GammaSign::Minus).unwrap().pass);
    }

    #[test]
    fn alpha_fixture_round_trip() {
        let fx = AlphaFixture {
            p: 31,
            alpha: [1, 2, 3, 4, 5],
            seed: 99,
            search_criteria: "test".into(),
            candidates_tried: 10,
            nodes_over_fp: Some(4),
            nodes_over_fp2: Some(10),
        };
        let j = fx.to_json();
        assert_eq!(AlphaFixture::from_json(&j).unwrap(), fx);
        let params = fx.params();
        assert!(!build_cubic(&params).is_zero());
    }
}
