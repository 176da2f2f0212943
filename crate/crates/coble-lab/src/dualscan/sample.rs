//! Seeded, reproducible sampling of smooth points on a hypersurface over a
//! finite field, and Gauss-class counting of gradient directions.
//!
//! A sample line pins every coordinate but one to random field values and
//! collects the roots of the resulting univariate, so each line costs one
//! root-finding call and yields up to deg(F) points. Points whose gradient
//! vanishes are discarded. The stream deduplicates by normalized projective
//! point, so (F, field, seed, count) fully determines the output sequence.

use super::DualScanError;
use crate::fields::{univariate_roots, FieldElem, FieldError, FieldSpec};
use crate::multipoly::MultiPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeSet;

/// Sampling-line budget per requested point.
const LINES_PER_POINT: u64 = 10;

/// A seeded collection of (point, gradient-image) pairs on {F = 0}, both
/// stored as normalized projective coordinate vectors (first nonzero
/// coordinate scaled to 1).
#[derive(Debug, Clone)]
pub struct HypersurfaceSamples {
    pub field: FieldSpec,
    pub seed: u64,
    pub pairs: Vec<(Vec<FieldElem>, Vec<FieldElem>)>,
}

/// First-nonzero-to-1 normalization; None for the zero vector.
pub fn normalize_projective(field: &FieldSpec, v: &[FieldElem]) -> Option<Vec<FieldElem>> {
    let piv = v.iter().position(|x| !field.is_zero(x))?;
    let inv = field.inv(&v[piv]).expect("pivot nonzero");
    Some(v.iter().map(|x| field.mul(x, &inv)).collect())
}

pub struct SampleStream {
    field: FieldSpec,
    poly: MultiPoly,
    grads: Vec<MultiPoly>,
    rng: ChaCha20Rng,
    line: u64,
    seen: BTreeSet<Vec<FieldElem>>,
    queue: Vec<(Vec<FieldElem>, Vec<FieldElem>)>,
}

impl SampleStream {
    pub fn new(f: &MultiPoly, field: &FieldSpec, seed: u64) -> Result<Self, DualScanError> {
        if !field.is_finite() {
            return Err(DualScanError::NotFinite);
        }
        if f.is_zero() {
            return Err(DualScanError::ZeroPolynomial);
        }
        let lifted = f.lift_to(field);
        let grads = lifted.gradient();
        Ok(SampleStream {
            field: field.clone(),
            poly: lifted,
            grads,
            rng: ChaCha20Rng::seed_from_u64(seed),
            line: 0,
            seen: BTreeSet::new(),
            queue: Vec::new(),
        })
    }

    /// Exactly `count` fresh smooth points, or an error when the line
    /// budget (10·count) is exhausted first.
    pub fn take(
        &mut self,
        count: usize,
    ) -> Result<Vec<(Vec<FieldElem>, Vec<FieldElem>)>, DualScanError> {
        let mut out = Vec::with_capacity(count);
        let mut lines_used = 0u64;
        let budget = LINES_PER_POINT * count as u64;
        while out.len() < count {
            if let Some(pair) = self.queue.pop() {
                out.push(pair);
                continue;
            }
            if lines_used >= budget {
                return Err(DualScanError::SamplingBudget {
                    delivered: out.len(),
                    requested: count,
                });
            }
            lines_used += 1;
            self.draw_line()?;
        }
        Ok(out)
    }

    fn draw_line(&mut self) -> Result<(), DualScanError> {
        let n = self.poly.nvars();
        let q = self.field.order().expect("finite");
        let free = (self.line % n as u64) as usize;
        self.line += 1;
        let mut pt: Vec<FieldElem> = (0..n)
            .map(|_| self.field.elem_from_index(self.rng.gen_range(0..q)))
            .collect();
        // univariate in the free coordinate
        let deg = self.poly.degree();
        let mut coeffs = vec![self.field.zero(); deg + 1];
        for (m, c) in self.poly.terms() {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if i != free {
                    for _ in 0..e {
                        t = self.field.mul(&t, &pt[i]);
                    }
                }
            }
            let ef = m.0[free] as usize;
            coeffs[ef] = self.field.add(&coeffs[ef], &t);
        }
        if coeffs.iter().all(|c| self.field.is_zero(c)) {
            return Ok(()); // line lies inside the hypersurface; skip it
        }
        let roots = match univariate_roots(&coeffs, &self.field) {
            Ok(r) => r,
            Err(FieldError::ZeroPolynomial) => unreachable!(),
            Err(e) => return Err(DualScanError::Field(e)),
        };
        // deterministic root order; push candidates in reverse so the queue
        // pops them in canonical order
        let mut fresh = Vec::new();
        for r in roots {
            pt[free] = r;
            let Some(norm) = normalize_projective(&self.field, &pt) else {
                continue;
            };
            if self.seen.contains(&norm) {
                continue;
            }
            let gv: Vec<FieldElem> = self
                .grads
                .iter()
                .map(|g| g.evaluate(&norm).expect("length matches"))
                .collect();
            let Some(gnorm) = normalize_projective(&self.field, &gv) else {
                continue; // singular point of the hypersurface
            };
            debug_assert!(self
                .field
                .is_zero(&self.poly.evaluate(&norm).unwrap()));
            self.seen.insert(norm.clone());
            fresh.push((norm, gnorm));
        }
        fresh.reverse();
        self.queue.extend(fresh);
        Ok(())
    }
}

/// Draw exactly `count` smooth points of {F = 0} with their gradient
/// images, deterministically per seed.
pub fn sample_points(
    f: &MultiPoly,
    field: &FieldSpec,
    count: usize,
    seed: u64,
) -> Result<HypersurfaceSamples, DualScanError> {
    let mut stream = SampleStream::new(f, field, seed)?;
    let pairs = stream.take(count)?;
    Ok(HypersurfaceSamples { field: field.clone(), seed, pairs })
}

/// Distinct projective gradient directions among `samples` smooth points of
/// {F = 0} over F_{p^ext_degree}. For a union of m hyperplanes this is m
/// once the sample count comfortably exceeds 50·m.
pub fn gauss_classes(
    f: &MultiPoly,
    samples: usize,
    seed: u64,
    ext_degree: u32,
) -> Result<Vec<Vec<FieldElem>>, DualScanError> {
    let p = f
        .field()
        .characteristic()
        .ok_or(DualScanError::NotFinite)?;
    let field = FieldSpec::extension(p, ext_degree).map_err(DualScanError::Field)?;
    let mut stream = SampleStream::new(f, &field, seed)?;
    let pairs = stream.take(samples)?;
    let classes: BTreeSet<Vec<FieldElem>> = pairs.into_iter().map(|(_, g)| g).collect();
    Ok(classes.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::MultiPoly;

    fn f31() -> FieldSpec {
        FieldSpec::prime(31).unwrap()
    }

    fn poly(f: &FieldSpec, n: usize, terms: &[(&[u8], i64)]) -> MultiPoly {
        let mut p = MultiPoly::zero(n, f.clone());
        for (e, c) in terms {
            p = p.add(&MultiPoly::term(n, f.clone(), e.to_vec(), f.from_i64(*c)).unwrap());
        }
        p
    }

    #[test]
    fn conic_samples_satisfy_equation() {
        let f = f31();
        let c = poly(&f, 3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        let s = sample_points(&c, &f, 10, 7).unwrap();
        assert_eq!(s.pairs.len(), 10);
        for (pt, gv) in &s.pairs {
            assert!(f.is_zero(&c.evaluate(pt).unwrap()));
            assert!(gv.iter().any(|x| !f.is_zero(x)));
        }
        // determinism
        let s2 = sample_points(&c, &f, 10, 7).unwrap();
        assert_eq!(s.pairs, s2.pairs);
    }

    #[test]
    fn everywhere_singular_input_errors() {
        // x² in P²: the zero locus is the double line x = 0, gradient 2x
        // vanishes on it
        let f = f31();
        let c = poly(&f, 3, &[(&[2, 0, 0], 1)]);
        assert!(matches!(
            sample_points(&c, &f, 5, 1),
            Err(DualScanError::SamplingBudget { .. })
        ));
    }

    #[test]
    fn gauss_classes_of_line_unions() {
        let f = f31();
        // xy in P²: two lines, gradients (y, x, 0) take two directions
        let c = poly(&f, 3, &[(&[1, 1, 0], 1)]);
        let cl = gauss_classes(&c, 60, 3, 1).unwrap();
        assert_eq!(cl.len(), 2);
        // xyz(x+y+z): four lines. P²(F_31) carries only ~116 smooth points
        // of the arrangement, so sample within the supply; the quadratic
        // extension has plenty.
        let four = poly(
            &f,
            3,
            &[(&[2, 1, 1], 1), (&[1, 2, 1], 1), (&[1, 1, 2], 1)],
        );
        let cl4 = gauss_classes(&four, 100, 3, 1).unwrap();
        assert_eq!(cl4.len(), 4);
        let cl4e = gauss_classes(&four, 250, 3, 2).unwrap();
        assert_eq!(cl4e.len(), 4);
    }

    #[test]
    fn random_hyperplane_arrangements_have_m_classes() {
        use rand::{Rng, SeedableRng};
        let f = f31();
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(17);
        for m in 2..=8usize {
            // product of m random distinct planes in P³, where each plane
            // carries ~10³ rational points
            let mut forms: Vec<Vec<FieldElem>> = Vec::new();
            while forms.len() < m {
                let l: Vec<FieldElem> = (0..4).map(|_| f.random(&mut rng)).collect();
                if let Some(norm) = normalize_projective(&f, &l) {
                    if !forms.contains(&norm) {
                        forms.push(norm);
                    }
                }
            }
            let mut prod = MultiPoly::term(4, f.clone(), vec![0, 0, 0, 0], f.one()).unwrap();
            for l in &forms {
                prod = prod.mul(&MultiPoly::linear_form(4, f.clone(), l)).unwrap();
            }
            let classes = gauss_classes(&prod, 50 * m, 23, 1).unwrap();
            assert_eq!(classes.len(), m, "arrangement of {m} planes");
        }
    }
}
