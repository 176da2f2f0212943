//! The projective action of (F₃)⁴ on the nine coordinates X_b, b ∈ (F₃)²,
//! by index translation and cube-root-of-unity characters, the coordinate
//! involution τ : X_b ↦ X_{−b}, and invariant subspaces of forms.
//!
//! Convention (fixed once): the element g = (a, a*) sends X_b to
//! ω^⟨a*, b⟩ · X_{b+a} with ⟨u, v⟩ = u₁v₁ + u₂v₂ mod 3. Any symplectically
//! equivalent convention produces the same invariant subspaces; reports
//! should quote this formula when the convention matters.

use crate::fields::{FieldElem, FieldError, FieldSpec};
use crate::linalg::MatrixF;
use crate::multipoly::{monomial_basis, Monomial, MultiPoly};

/// Index of coordinate X_b for b = (i, j) in the fixed order
/// (X₀₀, X₀₁, X₀₂, X₁₀, X₁₁, X₁₂, X₂₀, X₂₁, X₂₂).
#[inline]
pub fn coord_index(b: (u8, u8)) -> usize {
    (b.0 as usize) * 3 + (b.1 as usize)
}

#[inline]
pub fn index_coord(i: usize) -> (u8, u8) {
    ((i / 3) as u8, (i % 3) as u8)
}

/// A pair (a, a*) ∈ (F₃)² × (F₃)², components reduced mod 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeisenbergElement {
    pub a: (u8, u8),
    pub astar: (u8, u8),
}

impl HeisenbergElement {
    pub fn new(a: (u8, u8), astar: (u8, u8)) -> Self {
        HeisenbergElement { a: (a.0 % 3, a.1 % 3), astar: (astar.0 % 3, astar.1 % 3) }
    }

    /// Group product (translations and characters compose additively; the
    /// central phase is not tracked, the action is projective).
    pub fn compose(&self, other: &Self) -> Self {
        HeisenbergElement::new(
            ((self.a.0 + other.a.0) % 3, (self.a.1 + other.a.1) % 3),
            ((self.astar.0 + other.astar.0) % 3, (self.astar.1 + other.astar.1) % 3),
        )
    }

    /// The four generators: two translations, two characters.
    pub fn generators() -> [HeisenbergElement; 4] {
        [
            HeisenbergElement::new((1, 0), (0, 0)),
            HeisenbergElement::new((0, 1), (0, 0)),
            HeisenbergElement::new((0, 0), (1, 0)),
            HeisenbergElement::new((0, 0), (0, 1)),
        ]
    }

    /// All 81 elements of (F₃)⁴.
    pub fn all() -> Vec<HeisenbergElement> {
        let mut v = Vec::with_capacity(81);
        for a0 in 0..3u8 {
            for a1 in 0..3u8 {
                for s0 in 0..3u8 {
                    for s1 in 0..3u8 {
                        v.push(HeisenbergElement::new((a0, a1), (s0, s1)));
                    }
                }
            }
        }
        v
    }
}

/// The coordinate involution b ↦ −b on indices (F₃)².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Involution;

impl Involution {
    /// The permutation on the 9 coordinate indices.
    pub fn permutation() -> [usize; 9] {
        let mut perm = [0usize; 9];
        for i in 0..9 {
            let (x, y) = index_coord(i);
            perm[i] = coord_index(((3 - x) % 3, (3 - y) % 3));
        }
        perm
    }
}

/// Apply g = (a, a*): X_b ↦ ω^⟨a*,b⟩ X_{b+a}, extended multiplicatively.
/// Requires a field with a primitive cube root of unity.
pub fn act(g: &HeisenbergElement, f: &MultiPoly) -> Result<MultiPoly, FieldError> {
    assert_eq!(f.nvars(), 9, "Heisenberg action needs 9 coordinates");
    let field = f.field().clone();
    let omega = field.cube_root_of_unity()?;
    let omega_pows = [field.one(), omega.clone(), field.mul(&omega, &omega)];
    let mut out = MultiPoly::zero(9, field.clone());
    for (m, c) in f.terms() {
        let mut e2 = vec![0u8; 9];
        let mut phase: u32 = 0;
        for i in 0..9 {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let b = index_coord(i);
            let pairing = (g.astar.0 * b.0 + g.astar.1 * b.1) % 3;
            phase += e as u32 * pairing as u32;
            let tgt = coord_index(((b.0 + g.a.0) % 3, (b.1 + g.a.1) % 3));
            e2[tgt] = e;
        }
        let coeff = field.mul(c, &omega_pows[(phase % 3) as usize]);
        out = out.add(&MultiPoly::term(9, field.clone(), e2, coeff).expect("degree preserved"));
    }
    Ok(out)
}

/// τ · F: substitutes X_b ↦ X_{−b}. An involution, no phases, any field.
pub fn tau_act(f: &MultiPoly) -> MultiPoly {
    assert_eq!(f.nvars(), 9, "τ acts on 9 coordinates");
    let field = f.field().clone();
    let perm = Involution::permutation();
    let mut out = MultiPoly::zero(9, field.clone());
    for (m, c) in f.terms() {
        let mut e2 = vec![0u8; 9];
        for i in 0..9 {
            e2[perm[i]] = m.0[i];
        }
        out = out.add(&MultiPoly::term(9, field.clone(), e2, c.clone()).expect("degree preserved"));
    }
    out
}

/// Outcome of an invariance check under one group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invariance {
    Strict,
    /// Proportional but not equal: the scalar factor is reported.
    UpToPhase(FieldElem),
    No,
}

pub fn check_invariant(f: &MultiPoly, g: &HeisenbergElement) -> Result<Invariance, FieldError> {
    let moved = act(g, f)?;
    if &moved == f {
        Ok(Invariance::Strict)
    } else if moved.proportional_to(f) {
        let (m, c) = moved.leading().expect("nonzero");
        let base = f.coeff(&m.0);
        let factor = f.field().div(c, &base).expect("leading coefficient nonzero");
        Ok(Invariance::UpToPhase(factor))
    } else {
        Ok(Invariance::No)
    }
}

/// Index sum Σ e_b · b ∈ (F₃)² of a monomial on the 9 coordinates.
pub fn monomial_index_sum(m: &Monomial) -> (u8, u8) {
    let mut s = (0u32, 0u32);
    for i in 0..9 {
        let (x, y) = index_coord(i);
        s.0 += m.0[i] as u32 * x as u32;
        s.1 += m.0[i] as u32 * y as u32;
    }
    ((s.0 % 3) as u8, (s.1 % 3) as u8)
}

/// Basis of the degree-d forms strictly fixed by all four generators (and
/// hence by the whole 81-element projective family when any invariants
/// exist at all).
///
/// Structure used: the two character generators are diagonal and force the
/// support into index-sum-zero monomials; the two translations permute that
/// set freely when 3 | d and move it off itself otherwise. The basis is the
/// set of translation-orbit sums, ordered by their graded-lex leading
/// monomials. Each element is re-verified against all four generators.
pub fn invariant_subspace(d: usize, field: &FieldSpec) -> Result<Vec<MultiPoly>, FieldError> {
    assert!(d <= 6, "degree cap for invariant subspaces");
    // ω must exist for the action to make sense at all
    let _ = field.cube_root_of_unity()?;
    if d == 0 {
        return Ok(vec![MultiPoly::term(9, field.clone(), vec![0; 9], field.one()).unwrap()]);
    }
    if d % 3 != 0 {
        return Ok(Vec::new());
    }
    let basis = monomial_basis(9, d);
    let zero_sum: Vec<&Monomial> = basis
        .iter()
        .filter(|m| monomial_index_sum(m) == (0, 0))
        .collect();
    // orbit sums under the 9 translations
    let mut seen: std::collections::BTreeSet<Monomial> = Default::default();
    let mut out = Vec::new();
    for m in zero_sum {
        if seen.contains(m) {
            continue;
        }
        let mut orbit: std::collections::BTreeSet<Monomial> = Default::default();
        for a0 in 0..3u8 {
            for a1 in 0..3u8 {
                let mut e2 = vec![0u8; 9];
                for i in 0..9 {
                    let b = index_coord(i);
                    e2[coord_index(((b.0 + a0) % 3, (b.1 + a1) % 3))] = m.0[i];
                }
                orbit.insert(Monomial(e2));
            }
        }
        let poly = MultiPoly::from_terms(
            9,
            field.clone(),
            orbit.iter().map(|mm| (mm.0.clone(), field.one())),
        )
        .expect("orbit sums stay within degree");
        for mm in orbit {
            seen.insert(mm);
        }
        out.push(poly);
    }
    // deterministic order by leading monomial
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    for p in &out {
        for g in HeisenbergElement::generators() {
            debug_assert_eq!(check_invariant(p, &g)?, Invariance::Strict);
        }
    }
    Ok(out)
}

/// The same subspace computed literally as the joint nullspace of the
/// stacked (ρ(g) − id) matrices over the degree-d monomial basis. Quadratic
/// in the basis size; used as an independent oracle for small d.
pub fn invariant_subspace_nullspace(
    d: usize,
    field: &FieldSpec,
) -> Result<Vec<MultiPoly>, FieldError> {
    let omega = field.cube_root_of_unity()?;
    let omega_pows = [field.one(), omega.clone(), field.mul(&omega, &omega)];
    let basis = monomial_basis(9, d);
    let idx: std::collections::BTreeMap<&Monomial, usize> =
        basis.iter().enumerate().map(|(j, m)| (m, j)).collect();
    let n = basis.len();
    let mut rows: Vec<Vec<FieldElem>> = Vec::with_capacity(4 * n);
    for g in HeisenbergElement::generators() {
        // ρ(g) acts on monomials by permutation-with-phase
        for (j, m) in basis.iter().enumerate() {
            let mut e2 = vec![0u8; 9];
            let mut phase: u32 = 0;
            for i in 0..9 {
                let e = m.0[i];
                if e == 0 {
                    continue;
                }
                let b = index_coord(i);
                phase += e as u32 * ((g.astar.0 * b.0 + g.astar.1 * b.1) % 3) as u32;
                e2[coord_index(((b.0 + g.a.0) % 3, (b.1 + g.a.1) % 3))] = e;
            }
            let tgt = idx[&Monomial(e2)];
            let mut row = vec![field.zero(); n];
            row[tgt] = field.add(&row[tgt], &omega_pows[(phase % 3) as usize]);
            row[j] = field.sub(&row[j], &field.one());
            if row.iter().any(|c| !field.is_zero(c)) {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![field.zero(); n]);
    }
    let mat = MatrixF::from_rows(field.clone(), rows);
    let ns = mat.nullspace();
    Ok(ns
        .into_iter()
        .map(|v| {
            MultiPoly::from_terms(
                9,
                field.clone(),
                basis
                    .iter()
                    .zip(&v)
                    .filter(|(_, c)| !field.is_zero(c))
                    .map(|(m, c)| (m.0.clone(), c.clone())),
            )
            .unwrap()
        })
        .collect())
}

/// Exact membership of `f` in the span of `basis` (all same nvars/field).
pub fn in_span(f: &MultiPoly, basis: &[MultiPoly]) -> bool {
    if basis.is_empty() {
        return f.is_zero();
    }
    let field = f.field().clone();
    // columns: basis polys; rows: union support
    let mut support: std::collections::BTreeSet<Monomial> = Default::default();
    for p in basis.iter().chain(std::iter::once(f)) {
        for (m, _) in p.terms() {
            support.insert(m.clone());
        }
    }
    let rows: Vec<Vec<FieldElem>> = support
        .iter()
        .map(|m| basis.iter().map(|p| p.coeff(&m.0)).collect())
        .collect();
    let b: Vec<FieldElem> = support.iter().map(|m| f.coeff(&m.0)).collect();
    MatrixF::from_rows(field, rows).solve(&b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn f31() -> FieldSpec {
        FieldSpec::prime(31).unwrap()
    }

    fn mono(e: [u8; 9]) -> MultiPoly {
        let f = f31();
        MultiPoly::term(9, f.clone(), e.to_vec(), f.one()).unwrap()
    }

    #[test]
    fn translation_preserves_cyclic_products() {
        // a = (0,1) permutes X₀₀X₀₁X₀₂ into itself
        let p = mono([1, 1, 1, 0, 0, 0, 0, 0, 0]);
        let g = HeisenbergElement::new((0, 1), (0, 0));
        assert_eq!(act(&g, &p).unwrap(), p);
    }

    #[test]
    fn character_phases() {
        // a* = (0,1) on X₀₀X₁₁X₂₂: phase ω^{0+1+2} = 1
        let p = mono([1, 0, 0, 0, 1, 0, 0, 0, 1]);
        let g = HeisenbergElement::new((0, 0), (0, 1));
        assert_eq!(act(&g, &p).unwrap(), p);
        // a* = (0,1) on X₀₁³: phase ω³ = 1
        let q = mono([0, 3, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(act(&g, &q).unwrap(), q);
        // but on X₀₁ alone the phase is ω
        let lin = mono([0, 1, 0, 0, 0, 0, 0, 0, 0]);
        let f = f31();
        let w = f.cube_root_of_unity().unwrap();
        assert_eq!(act(&g, &lin).unwrap(), lin.scale(&w));
    }

    #[test]
    fn tau_examples() {
        // X₀₁ ↦ X₀₂ since −(0,1) = (0,2)
        let p = mono([0, 1, 0, 0, 0, 0, 0, 0, 0]);
        let q = mono([0, 0, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(tau_act(&p), q);
        // X₀₀ fixed
        let r = mono([3, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(tau_act(&r), r);
        // involution on random polynomials
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..20 {
            let basis = monomial_basis(9, 3);
            let mut p = MultiPoly::zero(9, f.clone());
            for _ in 0..6 {
                let m = basis[rng.gen_range(0..basis.len())].clone();
                p = p.add(&MultiPoly::term(9, f.clone(), m.0, f.random(&mut rng)).unwrap());
            }
            assert_eq!(tau_act(&tau_act(&p)), p);
        }
    }

    #[test]
    fn projective_group_law() {
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        let basis = monomial_basis(9, 2);
        for _ in 0..200 {
            let g = HeisenbergElement::new(
                (rng.gen_range(0..3), rng.gen_range(0..3)),
                (rng.gen_range(0..3), rng.gen_range(0..3)),
            );
            let h = HeisenbergElement::new(
                (rng.gen_range(0..3), rng.gen_range(0..3)),
                (rng.gen_range(0..3), rng.gen_range(0..3)),
            );
            let mut p = MultiPoly::zero(9, f.clone());
            for _ in 0..4 {
                let m = basis[rng.gen_range(0..basis.len())].clone();
                p = p.add(&MultiPoly::term(9, f.clone(), m.0, f.random(&mut rng)).unwrap());
            }
            if p.is_zero() {
                continue;
            }
            let lhs = act(&g, &act(&h, &p).unwrap()).unwrap();
            let rhs = act(&g.compose(&h), &p).unwrap();
            assert!(lhs.proportional_to(&rhs), "projective group law failed");
        }
    }

    #[test]
    fn invariant_dimensions() {
        let f = f31();
        assert_eq!(invariant_subspace(1, &f).unwrap().len(), 0);
        assert_eq!(invariant_subspace(2, &f).unwrap().len(), 0);
        let cubics = invariant_subspace(3, &f).unwrap();
        assert_eq!(cubics.len(), 5);
        for p in &cubics {
            for (m, _) in p.terms() {
                assert_eq!(monomial_index_sum(m), (0, 0));
            }
        }
    }

    #[test]
    fn orbit_method_matches_nullspace_oracle() {
        let f = f31();
        for d in 1..=4usize {
            let fast = invariant_subspace(d, &f).unwrap();
            let slow = invariant_subspace_nullspace(d, &f).unwrap();
            assert_eq!(fast.len(), slow.len(), "dimension at degree {d}");
            for p in &fast {
                assert!(in_span(p, &slow), "orbit basis inside nullspace span");
            }
            for p in &slow {
                assert!(in_span(p, &fast), "nullspace basis inside orbit span");
            }
        }
    }

    #[test]
    fn action_errors_without_omega() {
        let f29 = FieldSpec::prime(29).unwrap();
        let p = MultiPoly::variable(9, f29, 0);
        let g = HeisenbergElement::generators()[0];
        assert!(act(&g, &p).is_err());
    }
}
