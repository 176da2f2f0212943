//! Dual-hypersurface interpolation: find the lowest degree d such that some
//! degree-d form vanishes on the gradient images of sampled smooth points,
//! by a nullspace computation on the monomial-evaluation matrix.

use super::sample::SampleStream;
use super::DualScanError;
use crate::fields::{FieldElem, FieldSpec};
use crate::linalg::FpMat;
use crate::multipoly::{monomial_basis, Monomial, MultiPoly};
use std::collections::BTreeMap;
use std::collections::BTreeSet;

/// Held-out gradient images used to confirm an interpolated form.
const HOLDOUT: usize = 500;
/// Oversampling used for the degree-(d−1) triviality diagnostic.
const PREV_DEGREE_OVERSAMPLE: f64 = 1.2;

#[derive(Debug, Clone)]
pub struct DualInterpolation {
    pub degree: usize,
    pub dual: MultiPoly,
    /// Nullspace dimension of the accepting system (1 by construction).
    pub nullity: usize,
    /// Nullity of the degree-(d−1) system at 1.2× oversampling; 0 certifies
    /// that no lower-degree form fits. None when d = 1.
    pub prev_degree_nullity: Option<usize>,
    pub rows_used: usize,
    pub holdout_checked: usize,
}

#[derive(Debug, Clone)]
pub enum DualOutcome {
    Found(DualInterpolation),
    /// Nullspace dimension > 1 at the first degree with any solution:
    /// samples insufficient or the dual is not a hypersurface.
    Ambiguous { degree: usize, nullity: usize },
    /// No form of degree ≤ d_max vanishes on the sampled gradient images.
    NoneThrough { d_max: usize },
}

/// Incremental evaluator of all monomials of degree ≤ d at u64 points:
/// values at degree k are values at k−1 times one coordinate.
struct MonomialTables {
    nvars: usize,
    /// per degree k ≥ 2: (index of predecessor monomial at degree k−1,
    /// multiplying variable)
    preds: Vec<Vec<(usize, usize)>>,
    sizes: Vec<usize>,
}

impl MonomialTables {
    fn new(nvars: usize, dmax: usize) -> Self {
        let mut preds = Vec::new();
        let mut sizes = vec![nvars];
        let mut prev_index: BTreeMap<Monomial, usize> = monomial_basis(nvars, 1)
            .into_iter()
            .enumerate()
            .map(|(j, m)| (m, j))
            .collect();
        for d in 2..=dmax {
            let basis = monomial_basis(nvars, d);
            sizes.push(basis.len());
            let mut table = Vec::with_capacity(basis.len());
            let mut next_index: BTreeMap<Monomial, usize> = BTreeMap::new();
            for (j, m) in basis.iter().enumerate() {
                let i = m.0.iter().position(|&e| e > 0).expect("degree ≥ 1");
                let mut pe = m.0.clone();
                pe[i] -= 1;
                table.push((prev_index[&Monomial(pe)], i));
                next_index.insert(m.clone(), j);
            }
            preds.push(table);
            prev_index = next_index;
        }
        MonomialTables { nvars, preds, sizes }
    }

    /// Values of all degree-d monomials at `pt`.
    fn eval(&self, fp: crate::fields::Fp, pt: &[u64], d: usize) -> Vec<u64> {
        assert_eq!(pt.len(), self.nvars);
        let mut level: Vec<u64> = pt.to_vec();
        for k in 2..=d {
            let table = &self.preds[k - 2];
            let mut next = Vec::with_capacity(self.sizes[k - 1]);
            for &(pj, var) in table {
                next.push(fp.mul(level[pj], pt[var]));
            }
            level = next;
        }
        level
    }
}

fn to_u64_point(pt: &[FieldElem]) -> Vec<u64> {
    pt.iter()
        .map(|e| match e {
            FieldElem::Fp(x) => *x,
            _ => panic!("prime-field point expected"),
        })
        .collect()
}

/// Interpolate the dual hypersurface of {F = 0} by a degree sweep
/// d = 1..d_max over a prime field. For each degree the system uses
/// ⌈oversample·C(n+d−1,d)⌉ distinct gradient images; a 1-dimensional
/// nullspace is accepted after the candidate vanishes on 500 held-out
/// images.
pub fn dual_interpolate(
    f: &MultiPoly,
    d_max: usize,
    oversample: f64,
    seed: u64,
) -> Result<DualOutcome, DualScanError> {
    let field = f.field().clone();
    let FieldSpec::Prime { p } = field else {
        return Err(DualScanError::PrimeFieldRequired);
    };
    assert!(oversample >= 1.05, "oversampling factor must be at least 1.05");
    let n = f.nvars();
    let fp = crate::fields::Fp::new(p);
    let tables = MonomialTables::new(n, d_max);
    let mut stream = SampleStream::new(f, &field, seed)?;
    // distinct normalized gradient images, in draw order
    let mut pool: Vec<Vec<u64>> = Vec::new();
    let mut pool_set: BTreeSet<Vec<u64>> = BTreeSet::new();
    let extend_pool = |pool: &mut Vec<Vec<u64>>,
                           pool_set: &mut BTreeSet<Vec<u64>>,
                           stream: &mut SampleStream,
                           target: usize|
     -> Result<(), DualScanError> {
        while pool.len() < target {
            let want = (target - pool.len()).max(32);
            for (_, img) in stream.take(want)? {
                let v = to_u64_point(&img);
                if pool_set.insert(v.clone()) {
                    pool.push(v);
                }
            }
        }
        Ok(())
    };

    for d in 1..=d_max {
        let cols = monomial_basis(n, d).len();
        let rows = (oversample * cols as f64).ceil() as usize;
        extend_pool(&mut pool, &mut pool_set, &mut stream, rows)?;
        let mat_rows: Vec<Vec<u64>> = pool[..rows]
            .iter()
            .map(|pt| tables.eval(fp, pt, d))
            .collect();
        let mat = FpMat::from_rows(p, mat_rows);
        let ns = mat.nullspace();
        if ns.is_empty() {
            continue;
        }
        if ns.len() > 1 {
            return Ok(DualOutcome::Ambiguous { degree: d, nullity: ns.len() });
        }
        let basis = monomial_basis(n, d);
        let dual = MultiPoly::from_terms(
            n,
            field.clone(),
            basis
                .iter()
                .zip(&ns[0])
                .filter(|(_, &c)| c != 0)
                .map(|(m, &c)| (m.0.clone(), FieldElem::Fp(c))),
        )?;
        // holdout verification on fresh distinct images
        let mut checked = 0usize;
        while checked < HOLDOUT {
            let want = (HOLDOUT - checked).max(32);
            for (_, img) in stream.take(want)? {
                let v = to_u64_point(&img);
                if !pool_set.insert(v.clone()) {
                    continue;
                }
                pool.push(v.clone());
                let vals = tables.eval(fp, &v, d);
                let mut acc = 0u64;
                for (x, &c) in vals.iter().zip(&ns[0]) {
                    acc = fp.mul_add(*x, c, acc);
                }
                if acc != 0 {
                    return Err(DualScanError::HoldoutFailed { degree: d });
                }
                checked += 1;
                if checked >= HOLDOUT {
                    break;
                }
            }
        }
        // degree-(d−1) triviality at 1.2× oversampling
        let prev = if d > 1 {
            let cols_prev = monomial_basis(n, d - 1).len();
            let rows_prev = (PREV_DEGREE_OVERSAMPLE * cols_prev as f64).ceil() as usize;
            extend_pool(&mut pool, &mut pool_set, &mut stream, rows_prev)?;
            let m2: Vec<Vec<u64>> = pool[..rows_prev]
                .iter()
                .map(|pt| tables.eval(fp, pt, d - 1))
                .collect();
            Some(FpMat::from_rows(p, m2).nullspace().len())
        } else {
            None
        };
        return Ok(DualOutcome::Found(DualInterpolation {
            degree: d,
            dual,
            nullity: 1,
            prev_degree_nullity: prev,
            rows_used: rows,
            holdout_checked: checked,
        }));
    }
    Ok(DualOutcome::NoneThrough { d_max })
}

#[derive(Debug, Clone)]
pub struct BidualityReport {
    pub first_degree: usize,
    pub second_degree: usize,
    pub proportional: bool,
}

/// Interpolate the dual, then the dual of the dual, and compare with the
/// input up to scalar.
pub fn biduality_check(
    f: &MultiPoly,
    d_max: usize,
    seed: u64,
) -> Result<BidualityReport, DualScanError> {
    let DualOutcome::Found(first) = dual_interpolate(f, d_max, 1.1, seed)? else {
        return Err(DualScanError::DegenerateInput("no dual form found".into()));
    };
    let DualOutcome::Found(second) = dual_interpolate(&first.dual, d_max, 1.1, seed ^ 0x9e3779b97f4a7c15)?
    else {
        return Err(DualScanError::DegenerateInput("no bidual form found".into()));
    };
    Ok(BidualityReport {
        first_degree: first.degree,
        second_degree: second.degree,
        proportional: second.dual.proportional_to(f),
    })
}

/// Find a hyperplane containing at least `min_count` of the given points,
/// by seeded trials of (n+1)-subsets. Deterministic per seed; None when no
/// trial succeeds within 400 attempts.
pub fn fit_dominant_hyperplane(
    points: &[Vec<FieldElem>],
    field: &FieldSpec,
    seed: u64,
    min_count: usize,
) -> Option<Vec<FieldElem>> {
    use rand::{Rng, SeedableRng};
    let n1 = points.first()?.len();
    if points.len() < n1 {
        return None;
    }
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    let on_plane = |l: &[FieldElem], p: &[FieldElem]| {
        let mut acc = field.zero();
        for (c, x) in l.iter().zip(p) {
            acc = field.add(&acc, &field.mul(c, x));
        }
        field.is_zero(&acc)
    };
    for _ in 0..400 {
        let mut idx: Vec<usize> = Vec::with_capacity(n1);
        while idx.len() < n1 {
            let k = rng.gen_range(0..points.len());
            if !idx.contains(&k) {
                idx.push(k);
            }
        }
        let subset: Vec<Vec<FieldElem>> = idx.iter().map(|&k| points[k].clone()).collect();
        let Ok(l) = hyperplane_fit(&subset, field) else {
            continue;
        };
        let count = points.iter().filter(|p| on_plane(&l, p)).count();
        if count >= min_count {
            return Some(l);
        }
    }
    None
}

/// The unique hyperplane through ≥ n+1 projective points in Pⁿ, as the
/// nullspace of the point-evaluation matrix on linear monomials.
pub fn hyperplane_fit(
    points: &[Vec<FieldElem>],
    field: &FieldSpec,
) -> Result<Vec<FieldElem>, DualScanError> {
    let Some(n1) = points.first().map(|p| p.len()) else {
        return Err(DualScanError::DegenerateInput("no points".into()));
    };
    if points.len() < n1 {
        return Err(DualScanError::DegenerateInput(format!(
            "need at least {n1} points, got {}",
            points.len()
        )));
    }
    let mat = crate::linalg::MatrixF::from_rows(field.clone(), points.to_vec());
    let ns = mat.nullspace();
    match ns.len() {
        0 => Err(DualScanError::NoCommonHyperplane),
        1 => Ok(ns.into_iter().next().unwrap()),
        d => Err(DualScanError::DegeneratePoints { nullity: d }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldSpec;

    fn poly(f: &FieldSpec, n: usize, terms: &[(&[u8], i64)]) -> MultiPoly {
        let mut p = MultiPoly::zero(n, f.clone());
        for (e, c) in terms {
            p = p.add(&MultiPoly::term(n, f.clone(), e.to_vec(), f.from_i64(*c)).unwrap());
        }
        p
    }

    #[test]
    fn conic_is_self_dual() {
        let f = FieldSpec::prime(10009).unwrap();
        let c = poly(&f, 3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        let DualOutcome::Found(r) = dual_interpolate(&c, 3, 1.1, 5).unwrap() else {
            panic!("dual not found");
        };
        assert_eq!(r.degree, 2);
        assert!(r.dual.proportional_to(&c), "x²+y²+z² is self-dual");
        assert_eq!(r.prev_degree_nullity, Some(0));
    }

    #[test]
    fn weighted_conic_dual_inverts_the_diagonal() {
        // dual of Σ aᵢxᵢ² is Σ uᵢ²/aᵢ
        let f = FieldSpec::prime(10009).unwrap();
        let c = poly(&f, 3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 2), (&[0, 0, 2], 1)]);
        let DualOutcome::Found(r) = dual_interpolate(&c, 3, 1.1, 5).unwrap() else {
            panic!();
        };
        assert_eq!(r.degree, 2);
        let inv2 = f.inv(&f.from_i64(2)).unwrap();
        let expect = poly(&f, 3, &[(&[2, 0, 0], 1), (&[0, 0, 2], 1)])
            .add(&MultiPoly::term(3, f.clone(), vec![0, 2, 0], inv2).unwrap());
        assert!(r.dual.proportional_to(&expect));
    }

    #[test]
    fn fermat_cubic_dual_has_degree_six() {
        // Plücker: a smooth plane cubic has class d(d−1) = 6
        let f = FieldSpec::prime(10009).unwrap();
        let c = poly(&f, 3, &[(&[3, 0, 0], 1), (&[0, 3, 0], 1), (&[0, 0, 3], 1)]);
        let DualOutcome::Found(r) = dual_interpolate(&c, 6, 1.1, 11).unwrap() else {
            panic!();
        };
        assert_eq!(r.degree, 6);
        assert_eq!(r.prev_degree_nullity, Some(0));
    }

    #[test]
    fn biduality_for_quadrics() {
        let f = FieldSpec::prime(10009).unwrap();
        // diagonal quadric in P³
        let q = poly(
            &f,
            4,
            &[(&[2, 0, 0, 0], 1), (&[0, 2, 0, 0], 3), (&[0, 0, 2, 0], 1), (&[0, 0, 0, 2], 7)],
        );
        let rep = biduality_check(&q, 3, 21).unwrap();
        assert_eq!(rep.first_degree, 2);
        assert_eq!(rep.second_degree, 2);
        assert!(rep.proportional);
    }

    #[test]
    fn hyperplane_fit_cases() {
        let f = FieldSpec::prime(31).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        // points with last coordinate zero in P⁴ fit the form Y₄
        let pts: Vec<Vec<FieldElem>> = (0..7)
            .map(|_| {
                let mut v: Vec<FieldElem> = (0..4).map(|_| f.random(&mut rng)).collect();
                v.push(f.zero());
                v
            })
            .collect();
        let l = hyperplane_fit(&pts, &f).unwrap();
        for (i, c) in l.iter().enumerate() {
            if i < 4 {
                assert!(f.is_zero(c));
            } else {
                assert!(!f.is_zero(c));
            }
        }
        // 6 general points of P³ admit no common hyperplane
        let pts: Vec<Vec<FieldElem>> = (0..6)
            .map(|_| (0..4).map(|_| f.random(&mut rng)).collect())
            .collect();
        assert!(matches!(
            hyperplane_fit(&pts, &f),
            Err(DualScanError::NoCommonHyperplane)
        ));
    }
}
