//! Six points in P³ and everything they generate: the web of quadrics
//! through them, the 2:1 map it defines, the Weddle quartic (ramification),
//! the Kummer branch quartic with its 15 secant-contraction nodes and the
//! sixteenth node, the twisted-cubic contraction, and the (15₃) incidence
//! check used for the Igusa-type quartics in P⁴.

use crate::dualscan::{
    normalize_projective, sample_points, singular_scan, DualScanError,
};
use crate::fields::{FieldElem, FieldSpec};
use crate::linalg::{FpMat, MatrixF};
use crate::multipoly::{monomial_basis, LinearChange, MultiPoly, PolyError};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeddleError {
    #[error("need six pairwise distinct points, duplicates at indices {0} and {1}")]
    Duplicate(usize, usize),
    #[error("four coplanar points at indices {0:?}")]
    Coplanar([usize; 4]),
    #[error("quadric web has dimension {0}, expected 4")]
    WebDimension(usize),
    #[error("web Jacobian determinant vanishes identically")]
    DegenerateWeb,
    #[error("fiber histogram budget: p = {0} exceeds 64")]
    FiberBudget(u64),
    #[error("secant {0}-{1} maps to no point (all quadrics vanish on it)")]
    SecantInBaseLocus(usize, usize),
    #[error("secant contraction points {0} and {1} coincide")]
    CoincidentContractions(usize, usize),
    #[error("parameters must be distinct, repeat at {0} and {1}")]
    RepeatedParameter(usize, usize),
    #[error("restrictions to the twisted cubic are not proportional")]
    NotProportional,
    #[error("branch interpolation: nullity {0} at degree 4")]
    BranchNullity(usize),
    #[error("branch interpolation failed on a held-out image")]
    BranchHoldout,
    #[error(transparent)]
    Scan(#[from] DualScanError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Six points of P³ in verified general position: pairwise distinct and no
/// four coplanar, which makes the quadric web exactly 4-dimensional.
#[derive(Debug, Clone)]
pub struct SixPoints {
    pub pts: Vec<Vec<FieldElem>>,
    pub field: FieldSpec,
}

impl SixPoints {
    pub fn new(field: FieldSpec, pts: Vec<Vec<FieldElem>>) -> Result<Self, WeddleError> {
        assert_eq!(pts.len(), 6, "exactly six points");
        let pts: Vec<Vec<FieldElem>> = pts
            .iter()
            .map(|p| normalize_projective(&field, p).expect("nonzero point"))
            .collect();
        for i in 0..6 {
            for j in i + 1..6 {
                if pts[i] == pts[j] {
                    return Err(WeddleError::Duplicate(i, j));
                }
            }
        }
        // no 4 coplanar: every 4×4 minor of the 6×4 coordinate matrix
        for a in 0..6 {
            for b in a + 1..6 {
                for c in b + 1..6 {
                    for d in c + 1..6 {
                        let m = MatrixF::from_rows(
                            field.clone(),
                            vec![pts[a].clone(), pts[b].clone(), pts[c].clone(), pts[d].clone()],
                        );
                        if m.rank() < 4 {
                            return Err(WeddleError::Coplanar([a, b, c, d]));
                        }
                    }
                }
            }
        }
        Ok(SixPoints { pts, field })
    }

    /// Points on the standard twisted cubic (1 : t : t² : t³).
    pub fn on_twisted_cubic(field: FieldSpec, ts: &[FieldElem; 6]) -> Result<Self, WeddleError> {
        for i in 0..6 {
            for j in i + 1..6 {
                if ts[i] == ts[j] {
                    return Err(WeddleError::RepeatedParameter(i, j));
                }
            }
        }
        let pts = ts
            .iter()
            .map(|t| {
                let t2 = field.mul(t, t);
                let t3 = field.mul(&t2, t);
                vec![field.one(), t.clone(), t2, t3]
            })
            .collect();
        Self::new(field, pts)
    }

    /// Seeded general-position points (rejection sampling).
    pub fn seeded_random(field: FieldSpec, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let q = field.order().expect("finite field");
        loop {
            let pts: Vec<Vec<FieldElem>> = (0..6)
                .map(|_| (0..4).map(|_| field.elem_from_index(rng.gen_range(0..q))).collect())
                .collect();
            if pts.iter().any(|p| p.iter().all(|x| field.is_zero(x))) {
                continue;
            }
            if let Ok(s) = Self::new(field.clone(), pts) {
                return s;
            }
        }
    }
}

/// The 4-dimensional space of quadrics through six general points.
#[derive(Debug, Clone)]
pub struct QuadricWeb {
    pub basis: Vec<MultiPoly>,
    pub source: SixPoints,
}

/// Nullspace of the 6×10 evaluation matrix of quadric monomials at the six
/// points; dimension is exactly 4 in general position.
pub fn quadrics_through(pts: &SixPoints) -> Result<QuadricWeb, WeddleError> {
    let field = &pts.field;
    let basis = monomial_basis(4, 2);
    let rows: Vec<Vec<FieldElem>> = pts
        .pts
        .iter()
        .map(|p| {
            basis
                .iter()
                .map(|m| {
                    let mut t = field.one();
                    for (i, &e) in m.0.iter().enumerate() {
                        for _ in 0..e {
                            t = field.mul(&t, &p[i]);
                        }
                    }
                    t
                })
                .collect()
        })
        .collect();
    let ns = MatrixF::from_rows(field.clone(), rows).nullspace();
    if ns.len() != 4 {
        return Err(WeddleError::WebDimension(ns.len()));
    }
    let quadrics = ns
        .into_iter()
        .map(|v| {
            MultiPoly::from_terms(
                4,
                field.clone(),
                basis
                    .iter()
                    .zip(v)
                    .filter(|(_, c)| !field.is_zero(c))
                    .map(|(m, c)| (m.0.clone(), c)),
            )
            .expect("degree 2")
        })
        .collect();
    Ok(QuadricWeb { basis: quadrics, source: pts.clone() })
}

impl QuadricWeb {
    /// Image of a point under the web map, or None on the base locus.
    pub fn map(&self, pt: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let field = &self.source.field;
        let img: Vec<FieldElem> = self
            .basis
            .iter()
            .map(|q| q.evaluate(pt).expect("four coordinates"))
            .collect();
        normalize_projective(field, &img)
    }
}

/// The ramification quartic of the web map: the determinant of the 4×4
/// Jacobian matrix (∂Q_i/∂x_j), which has linear entries.
pub fn weddle_quartic(web: &QuadricWeb) -> Result<MultiPoly, WeddleError> {
    let field = &web.source.field;
    let grads: Vec<Vec<MultiPoly>> = web.basis.iter().map(|q| q.gradient()).collect();
    let det = det4(&grads, field)?;
    if det.is_zero() {
        return Err(WeddleError::DegenerateWeb);
    }
    Ok(det)
}

fn det4(m: &[Vec<MultiPoly>], field: &FieldSpec) -> Result<MultiPoly, PolyError> {
    // Laplace expansion over the 24 permutations of S₄
    const PERMS: [([usize; 4], i64); 24] = [
        ([0, 1, 2, 3], 1),
        ([0, 1, 3, 2], -1),
        ([0, 2, 1, 3], -1),
        ([0, 2, 3, 1], 1),
        ([0, 3, 1, 2], 1),
        ([0, 3, 2, 1], -1),
        ([1, 0, 2, 3], -1),
        ([1, 0, 3, 2], 1),
        ([1, 2, 0, 3], 1),
        ([1, 2, 3, 0], -1),
        ([1, 3, 0, 2], -1),
        ([1, 3, 2, 0], 1),
        ([2, 0, 1, 3], 1),
        ([2, 0, 3, 1], -1),
        ([2, 1, 0, 3], -1),
        ([2, 1, 3, 0], 1),
        ([2, 3, 0, 1], 1),
        ([2, 3, 1, 0], -1),
        ([3, 0, 1, 2], -1),
        ([3, 0, 2, 1], 1),
        ([3, 1, 0, 2], 1),
        ([3, 1, 2, 0], -1),
        ([3, 2, 0, 1], -1),
        ([3, 2, 1, 0], 1),
    ];
    let mut det = MultiPoly::zero(4, field.clone());
    for (perm, sign) in PERMS {
        let mut prod = MultiPoly::term(4, field.clone(), vec![0; 4], field.from_i64(sign))?;
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul(&m[i][j])?;
        }
        det = det.add(&prod);
    }
    Ok(det)
}

/// Histogram of fiber sizes of the web map over all of P³(F_p).
#[derive(Debug, Clone)]
pub struct FiberHistogram {
    /// fiber size → number of image points with that fiber size
    pub counts: BTreeMap<usize, usize>,
    /// source points in fibers of size 1
    pub size_one_points: Vec<Vec<FieldElem>>,
    /// source points on the base locus (all four quadrics vanish)
    pub base_points: usize,
    pub distinct_images: usize,
}

pub fn fiber_histogram(web: &QuadricWeb) -> Result<FiberHistogram, WeddleError> {
    let field = &web.source.field;
    let q = field.order().expect("finite");
    if q > 64 {
        return Err(WeddleError::FiberBudget(q));
    }
    let mut fibers: BTreeMap<Vec<FieldElem>, Vec<Vec<FieldElem>>> = BTreeMap::new();
    let mut base = 0usize;
    let total = q * q * q + q * q + q + 1;
    for idx in 0..total {
        let pt = projective_point(field, 4, idx);
        match web.map(&pt) {
            Some(img) => fibers.entry(img).or_default().push(pt),
            None => base += 1,
        }
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut size_one = Vec::new();
    for (_, pts) in &fibers {
        *counts.entry(pts.len()).or_insert(0) += 1;
        if pts.len() == 1 {
            size_one.push(pts[0].clone());
        }
    }
    Ok(FiberHistogram {
        counts,
        size_one_points: size_one,
        base_points: base,
        distinct_images: fibers.len(),
    })
}

/// k-th point of P^{n−1}(F_q) in chart order (first nonzero coordinate 1).
pub fn projective_point(field: &FieldSpec, n: usize, mut idx: u64) -> Vec<FieldElem> {
    let q = field.order().expect("finite");
    let mut lead = 0usize;
    loop {
        let chart: u64 = q.pow((n - 1 - lead) as u32);
        if idx < chart {
            let mut v = vec![field.zero(); n];
            v[lead] = field.one();
            for j in (lead + 1)..n {
                v[j] = field.elem_from_index(idx % q);
                idx /= q;
            }
            return v;
        }
        idx -= chart;
        lead += 1;
    }
}

/// Interpolate the branch quartic: the degree-4 form vanishing on images of
/// sampled smooth ramification (Weddle) points. Also reports the trivial
/// degree-3 nullity.
#[derive(Debug, Clone)]
pub struct BranchQuartic {
    pub quartic: MultiPoly,
    pub cubic_nullity: usize,
    pub images_used: usize,
}

pub fn branch_quartic(web: &QuadricWeb, seed: u64) -> Result<BranchQuartic, WeddleError> {
    let field = &web.source.field;
    let FieldSpec::Prime { p } = *field else {
        return Err(WeddleError::Scan(DualScanError::PrimeFieldRequired));
    };
    let w = weddle_quartic(web)?;
    let samples = sample_points(&w, field, 70, seed)?;
    let mut images: Vec<Vec<u64>> = Vec::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for (pt, _) in &samples.pairs {
        if let Some(img) = web.map(pt) {
            let v: Vec<u64> = img
                .iter()
                .map(|e| match e {
                    FieldElem::Fp(x) => *x,
                    _ => unreachable!(),
                })
                .collect();
            if seen.insert(v.clone()) {
                images.push(v);
            }
        }
    }
    if images.len() < 60 {
        return Err(WeddleError::Scan(DualScanError::SamplingBudget {
            delivered: images.len(),
            requested: 60,
        }));
    }
    let fp = crate::fields::Fp::new(p);
    let eval_row = |pt: &[u64], basis: &[crate::multipoly::Monomial]| -> Vec<u64> {
        basis
            .iter()
            .map(|m| {
                let mut t = 1u64;
                for (i, &e) in m.0.iter().enumerate() {
                    for _ in 0..e {
                        t = fp.mul(t, pt[i]);
                    }
                }
                t
            })
            .collect()
    };
    // degree-3 sweep first: trivial nullspace expected
    let basis3 = monomial_basis(4, 3);
    let rows3: Vec<Vec<u64>> = images[..40].iter().map(|pt| eval_row(pt, &basis3)).collect();
    let cubic_nullity = FpMat::from_rows(p, rows3).nullspace().len();
    // degree 4 on the first 40 images, holdout on the next 20
    let basis4 = monomial_basis(4, 4);
    let rows4: Vec<Vec<u64>> = images[..40].iter().map(|pt| eval_row(pt, &basis4)).collect();
    let ns = FpMat::from_rows(p, rows4).nullspace();
    if ns.len() != 1 {
        return Err(WeddleError::BranchNullity(ns.len()));
    }
    for pt in &images[40..60] {
        let row = eval_row(pt, &basis4);
        let mut acc = 0u64;
        for (x, c) in row.iter().zip(&ns[0]) {
            acc = fp.mul_add(*x, *c, acc);
        }
        if acc != 0 {
            return Err(WeddleError::BranchHoldout);
        }
    }
    let quartic = MultiPoly::from_terms(
        4,
        field.clone(),
        basis4
            .iter()
            .zip(&ns[0])
            .filter(|(_, &c)| c != 0)
            .map(|(m, &c)| (m.0.clone(), FieldElem::Fp(c))),
    )?;
    Ok(BranchQuartic { quartic, cubic_nullity, images_used: images.len() })
}

/// The 15 points the secants P_iP_j contract to: each quadric restricts to
/// a multiple of s·t on the secant, so the image is a single point.
pub fn secant_contractions(web: &QuadricWeb) -> Result<Vec<Vec<FieldElem>>, WeddleError> {
    let field = &web.source.field;
    let mut out = Vec::with_capacity(15);
    for i in 0..6 {
        for j in i + 1..6 {
            let a = &web.source.pts[i];
            let b = &web.source.pts[j];
            let param = LinearChange::new(
                field.clone(),
                (0..4).map(|k| vec![a[k].clone(), b[k].clone()]).collect(),
            );
            let mut coeffs = Vec::with_capacity(4);
            for qd in &web.basis {
                let r = qd.substitute_linear(&param)?;
                // binary quadratic vanishing at (1,0) and (0,1): only the
                // st coefficient survives
                debug_assert!(field.is_zero(&r.coeff(&[2, 0])));
                debug_assert!(field.is_zero(&r.coeff(&[0, 2])));
                coeffs.push(r.coeff(&[1, 1]));
            }
            let img = normalize_projective(field, &coeffs)
                .ok_or(WeddleError::SecantInBaseLocus(i, j))?;
            out.push(img);
        }
    }
    for i in 0..15 {
        for j in i + 1..15 {
            if out[i] == out[j] {
                return Err(WeddleError::CoincidentContractions(i, j));
            }
        }
    }
    Ok(out)
}

/// Singular points of the branch quartic over F_p and F_{p²}; the expected
/// total over the extension is 16 (15 secant nodes plus one).
#[derive(Debug, Clone)]
pub struct NodeCount {
    pub over_fp: Vec<Vec<FieldElem>>,
    pub over_fp2: Vec<Vec<FieldElem>>,
}

pub fn sixteenth_node(k: &MultiPoly) -> Result<NodeCount, WeddleError> {
    let field = k.field().clone();
    let p = field.characteristic().expect("finite");
    let ext = FieldSpec::extension(p, 2).map_err(DualScanError::Field)?;
    Ok(NodeCount {
        over_fp: singular_scan(k, &field)?,
        over_fp2: singular_scan(k, &ext)?,
    })
}

/// Restrict the web to the standard twisted cubic (s³ : s²t : st² : t³):
/// all four restrictions are binary sextics through the six parameter
/// points, hence pairwise proportional, and the whole curve contracts to
/// one point.
#[derive(Debug, Clone)]
pub struct TwistedCubicContraction {
    pub image: Vec<FieldElem>,
    pub restrictions_proportional: bool,
}

pub fn twisted_cubic_contraction(
    field: &FieldSpec,
    ts: &[FieldElem; 6],
) -> Result<TwistedCubicContraction, WeddleError> {
    let pts = SixPoints::on_twisted_cubic(field.clone(), ts)?;
    let web = quadrics_through(&pts)?;
    // x₀ = s³, x₁ = s²t, x₂ = st², x₃ = t³ as 2-variable cubics
    let mono = |e: [u8; 2]| {
        MultiPoly::term(2, field.clone(), e.to_vec(), field.one()).expect("degree 3")
    };
    let param = [mono([3, 0]), mono([2, 1]), mono([1, 2]), mono([0, 3])];
    let restrictions: Vec<MultiPoly> = web
        .basis
        .iter()
        .map(|q| q.substitute(&param))
        .collect::<Result<_, _>>()?;
    // each must vanish at the six parameter points (s : t) = (1 : tᵢ)
    for r in &restrictions {
        for t in ts.iter() {
            let v = r.evaluate(&[field.one(), t.clone()]).expect("two vars");
            debug_assert!(field.is_zero(&v));
            let _ = v;
        }
    }
    let reference = restrictions
        .iter()
        .find(|r| !r.is_zero())
        .ok_or(WeddleError::NotProportional)?;
    let proportional = restrictions
        .iter()
        .all(|r| r.is_zero() || r.proportional_to(reference));
    if !proportional {
        return Err(WeddleError::NotProportional);
    }
    // image coordinates: λ_k with R_k = λ_k · reference
    let (m0, c0) = reference.leading().expect("nonzero");
    let c0inv = field.inv(c0).expect("leading nonzero");
    let image_raw: Vec<FieldElem> = restrictions
        .iter()
        .map(|r| field.mul(&r.coeff(&m0.0), &c0inv))
        .collect();
    let image = normalize_projective(field, &image_raw).ok_or(WeddleError::NotProportional)?;
    Ok(TwistedCubicContraction { image, restrictions_proportional: proportional })
}

/// The (15₃) incidence report for a quartic threefold in P⁴: lines inside
/// the singular locus (verified by substituting a parametrization into all
/// partials), the points where lines meet, and the incidence counts.
#[derive(Debug, Clone)]
pub struct IgusaReport {
    pub singular_points_scanned: usize,
    pub lines: usize,
    pub nodes: usize,
    pub nodes_per_line: Vec<usize>,
    pub lines_per_node: Vec<usize>,
    pub pass: bool,
}

pub fn igusa_config_check(
    quartic: &MultiPoly,
    field: &FieldSpec,
) -> Result<IgusaReport, WeddleError> {
    assert_eq!(quartic.nvars(), 5, "Igusa check lives in P⁴");
    let pts = singular_scan(quartic, field)?;
    let lifted = quartic.lift_to(field);
    let grads = lifted.gradient();
    let ptset: BTreeSet<Vec<FieldElem>> = pts.iter().cloned().collect();

    let canon_line = |a: &[FieldElem], b: &[FieldElem]| -> Vec<Vec<FieldElem>> {
        let m = MatrixF::from_rows(field.clone(), vec![a.to_vec(), b.to_vec()]);
        rref_rows(&m, field)
    };
    let line_in_singular = |a: &[FieldElem], b: &[FieldElem]| -> bool {
        let param = LinearChange::new(
            field.clone(),
            (0..5).map(|k| vec![a[k].clone(), b[k].clone()]).collect(),
        );
        grads
            .iter()
            .all(|g| g.substitute_linear(&param).map(|r| r.is_zero()).unwrap_or(false))
    };
    let line_points = |a: &[FieldElem], b: &[FieldElem]| -> BTreeSet<Vec<FieldElem>> {
        let q = field.order().unwrap();
        let mut set = BTreeSet::new();
        if let Some(na) = normalize_projective(field, a) {
            set.insert(na);
        }
        for i in 0..q {
            let t = field.elem_from_index(i);
            let v: Vec<FieldElem> = (0..5)
                .map(|k| field.add(&field.mul(&a[k], &t), &b[k]))
                .collect();
            if let Some(nv) = normalize_projective(field, &v) {
                set.insert(nv);
            }
        }
        set
    };

    let mut lines: BTreeMap<Vec<Vec<FieldElem>>, BTreeSet<Vec<FieldElem>>> = BTreeMap::new();
    let mut covered: BTreeSet<Vec<FieldElem>> = BTreeSet::new();
    for a in &pts {
        if covered.contains(a) {
            continue;
        }
        let mut buckets: BTreeMap<Vec<Vec<FieldElem>>, Vec<&Vec<FieldElem>>> = BTreeMap::new();
        for b in &pts {
            if b == a {
                continue;
            }
            buckets.entry(canon_line(a, b)).or_default().push(b);
        }
        for (key, members) in buckets {
            if members.len() >= 2 && !lines.contains_key(&key) && line_in_singular(a, members[0]) {
                let lp = line_points(a, members[0]);
                for p in lp.intersection(&ptset) {
                    covered.insert(p.clone());
                }
                lines.insert(key, lp);
            }
        }
        covered.insert(a.clone());
    }

    let mut node_incidence: BTreeMap<Vec<FieldElem>, usize> = BTreeMap::new();
    for p in &pts {
        let c = lines.values().filter(|lp| lp.contains(p)).count();
        if c >= 2 {
            node_incidence.insert(p.clone(), c);
        }
    }
    let nodes: BTreeSet<Vec<FieldElem>> = node_incidence.keys().cloned().collect();
    let nodes_per_line: Vec<usize> = lines
        .values()
        .map(|lp| lp.intersection(&nodes).count())
        .collect();
    let lines_per_node: Vec<usize> = node_incidence.values().cloned().collect();
    let pass = lines.len() == 15
        && nodes.len() == 15
        && nodes_per_line.iter().all(|&c| c == 3)
        && lines_per_node.iter().all(|&c| c == 3);
    Ok(IgusaReport {
        singular_points_scanned: pts.len(),
        lines: lines.len(),
        nodes: nodes.len(),
        nodes_per_line,
        lines_per_node,
        pass,
    })
}

fn rref_rows(m: &MatrixF, field: &FieldSpec) -> Vec<Vec<FieldElem>> {
    // reduced echelon of a 2×n matrix, used as a canonical line key
    let mut rows: Vec<Vec<FieldElem>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect())
        .collect();
    let mut r = 0usize;
    for c in 0..m.cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(pr, r);
        let inv = field.inv(&rows[r][c]).unwrap();
        for j in 0..m.cols {
            rows[r][j] = field.mul(&rows[r][j], &inv);
        }
        for i in 0..rows.len() {
            if i != r && !field.is_zero(&rows[i][c]) {
                let f = rows[i][c].clone();
                for j in 0..m.cols {
                    let t = field.mul(&f, &rows[r][j]);
                    rows[i][j] = field.sub(&rows[i][j], &t);
                }
            }
        }
        r += 1;
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f31() -> FieldSpec {
        FieldSpec::prime(31).unwrap()
    }

    fn standard_six(field: &FieldSpec) -> SixPoints {
        let ts: [FieldElem; 6] = std::array::from_fn(|i| field.from_i64(i as i64));
        SixPoints::on_twisted_cubic(field.clone(), &ts).unwrap()
    }

    #[test]
    fn web_dimension_is_four() {
        let f = f31();
        let web = quadrics_through(&standard_six(&f)).unwrap();
        assert_eq!(web.basis.len(), 4);
        for q in &web.basis {
            assert_eq!(q.homogeneous_degree(), Some(2));
            for pt in &web.source.pts {
                assert!(f.is_zero(&q.evaluate(pt).unwrap()));
            }
        }
        // seeded general points too
        let web2 = quadrics_through(&SixPoints::seeded_random(f.clone(), 11)).unwrap();
        assert_eq!(web2.basis.len(), 4);
    }

    #[test]
    fn coplanar_points_are_rejected() {
        let f = f31();
        let mk = |coords: [i64; 4]| -> Vec<FieldElem> {
            coords.iter().map(|&c| f.from_i64(c)).collect()
        };
        // first four points on the plane x3 = 0
        let pts = vec![
            mk([1, 0, 0, 0]),
            mk([0, 1, 0, 0]),
            mk([0, 0, 1, 0]),
            mk([1, 1, 1, 0]),
            mk([1, 2, 4, 8]),
            mk([1, 3, 9, 27]),
        ];
        assert!(matches!(
            SixPoints::new(f.clone(), pts),
            Err(WeddleError::Coplanar([0, 1, 2, 3]))
        ));
    }

    #[test]
    fn weddle_quartic_has_nodes_at_base_points() {
        let f = f31();
        for six in [standard_six(&f), SixPoints::seeded_random(f.clone(), 23)] {
            let web = quadrics_through(&six).unwrap();
            let w = weddle_quartic(&web).unwrap();
            assert_eq!(w.homogeneous_degree(), Some(4));
            let grads = w.gradient();
            for pt in &six.pts {
                assert!(f.is_zero(&w.evaluate(pt).unwrap()), "W vanishes at base point");
                for g in &grads {
                    assert!(f.is_zero(&g.evaluate(pt).unwrap()), "∇W vanishes at base point");
                }
            }
        }
    }

    #[test]
    fn weddle_contains_twisted_cubic_for_cubic_fixture() {
        // restricted to (s³:s²t:st²:t³) the quartic is a binary form of
        // degree 12; vanishing at all 32 points of P¹(F₃₁) certifies it is
        // identically zero (32 > 12 zeros)
        let f = f31();
        let web = quadrics_through(&standard_six(&f)).unwrap();
        let w = weddle_quartic(&web).unwrap();
        for idx in 0..32u64 {
            let st = projective_point(&f, 2, idx);
            let (s, t) = (&st[0], &st[1]);
            let s2 = f.mul(s, s);
            let t2 = f.mul(t, t);
            let pt = vec![
                f.mul(&s2, s),
                f.mul(&s2, t),
                f.mul(s, &t2),
                f.mul(&t2, t),
            ];
            assert!(f.is_zero(&w.evaluate(&pt).unwrap()));
        }
    }

    #[test]
    fn weddle_independent_of_basis_choice() {
        let f = f31();
        let six = standard_six(&f);
        let web = quadrics_through(&six).unwrap();
        let w1 = weddle_quartic(&web).unwrap();
        // permute + remix the basis by an invertible transformation
        let mut basis2 = web.basis.clone();
        basis2.swap(0, 3);
        basis2[1] = basis2[1].add(&basis2[2].scale(&f.from_i64(5)));
        let web2 = QuadricWeb { basis: basis2, source: six };
        let w2 = weddle_quartic(&web2).unwrap();
        assert!(w1.proportional_to(&w2));
    }

    #[test]
    fn secant_contraction_points() {
        let f = f31();
        let web = quadrics_through(&standard_six(&f)).unwrap();
        let nodes = secant_contractions(&web).unwrap();
        assert_eq!(nodes.len(), 15);
        // degenerate fixture: force a coincidence by pushing two points
        // together is impossible in general position, so instead check the
        // error path with a web built from a *near*-degenerate config is
        // exercised at the pipeline level; here distinctness passed.
    }

    #[test]
    fn twisted_cubic_contracts() {
        let f = f31();
        let ts: [FieldElem; 6] = std::array::from_fn(|i| f.from_i64(i as i64));
        let tc = twisted_cubic_contraction(&f, &ts).unwrap();
        assert!(tc.restrictions_proportional);
        assert_eq!(tc.image.len(), 4);
        // repeated parameter errors
        let bad: [FieldElem; 6] = std::array::from_fn(|i| f.from_i64((i as i64).min(4)));
        assert!(matches!(
            twisted_cubic_contraction(&f, &bad),
            Err(WeddleError::RepeatedParameter(4, 5))
        ));
    }

    #[test]
    fn squaring_map_fiber_sanity() {
        // (x : y) ↦ (x² : y²) on P¹ over F₇: fibers of size 2 except over
        // (1:0) and (0:1); mirrored here by the histogram of a 2-variable
        // web {x², y²} (the P¹ analogue of the construction)
        let f7 = FieldSpec::prime(7).unwrap();
        let mut fibers: BTreeMap<Vec<FieldElem>, usize> = BTreeMap::new();
        for idx in 0..8u64 {
            let pt = projective_point(&f7, 2, idx);
            let img = vec![
                f7.mul(&pt[0], &pt[0]),
                f7.mul(&pt[1], &pt[1]),
            ];
            let img = normalize_projective(&f7, &img).unwrap();
            *fibers.entry(img).or_insert(0) += 1;
        }
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (_, c) in fibers {
            *counts.entry(c).or_insert(0) += 1;
        }
        assert_eq!(counts.get(&1), Some(&2), "ramified over 0 and ∞");
        assert_eq!(counts.get(&2), Some(&3), "three 2-point fibers");
    }

    #[test]
    fn fiber_budget_guard() {
        let f101 = FieldSpec::prime(101).unwrap();
        let six = SixPoints::seeded_random(f101.clone(), 5);
        let web = quadrics_through(&six).unwrap();
        assert!(matches!(
            fiber_histogram(&web),
            Err(WeddleError::FiberBudget(101))
        ));
    }

    #[test]
    fn smooth_quartic_has_no_igusa_structure() {
        // Fermat quartic in P⁴ is smooth: no singular points at all
        let f = f31();
        let mut fermat = MultiPoly::zero(5, f.clone());
        for i in 0..5 {
            let mut e = vec![0u8; 5];
            e[i] = 4;
            fermat = fermat.add(&MultiPoly::term(5, f.clone(), e, f.one()).unwrap());
        }
        let rep = igusa_config_check(&fermat, &f).unwrap();
        assert_eq!(rep.lines, 0);
        assert_eq!(rep.nodes, 0);
        assert!(!rep.pass);
        assert_eq!(rep.singular_points_scanned, 0);
    }
}
