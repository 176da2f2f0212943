//! Exhaustive singular-locus scans over P^n(F_q), n ≤ 4.
//!
//! The scan enumerates the standard charts (first nonzero coordinate = 1)
//! and, inside each chart, iterates all but the last free coordinate. The
//! last coordinate is handled algebraically: the candidate values are the
//! common roots of the first two nonvanishing restricted partials, obtained
//! from their univariate gcd. Every candidate is then verified against all
//! partials, so the result is exact and exhaustive while the enumeration
//! volume stays at q^(n−2) instead of q^n.
//!
//! A second, independently coded brute-force loop walks the charts in the
//! opposite order and evaluates every partial at every point; tests compare
//! the two on budget-feasible instances.

use super::DualScanError;
use crate::fields::{Fp, Fp2, FieldElem, FieldSpec};
use crate::multipoly::MultiPoly;
use rayon::prelude::*;

/// Enumeration budget for the optimized scan (prefix tuples).
const SCAN_BUDGET: u64 = 1 << 30;
/// Budget for the brute-force oracle (full point count).
const BRUTE_BUDGET: u64 = 1 << 27;
/// Square-root tables are precomputed per scan; cap the field order.
const TABLE_CAP: u64 = 1 << 20;

/// Minimal scalar-field interface for the scan kernels.
pub(crate) trait ScalarField: Copy + Send + Sync {
    type El: Copy + Eq + std::fmt::Debug + Send + Sync;
    fn order(&self) -> u64;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: Self::El) -> bool;
    fn add(&self, a: Self::El, b: Self::El) -> Self::El;
    fn sub(&self, a: Self::El, b: Self::El) -> Self::El;
    fn mul(&self, a: Self::El, b: Self::El) -> Self::El;
    fn neg(&self, a: Self::El) -> Self::El;
    fn inv(&self, a: Self::El) -> Self::El;
    fn from_index(&self, i: u64) -> Self::El;
    fn index(&self, a: Self::El) -> u64;
    fn from_fieldelem(&self, e: &FieldElem) -> Self::El;
    fn to_fieldelem(&self, a: Self::El) -> FieldElem;
}

impl ScalarField for Fp {
    type El = u64;
    fn order(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: u64) -> bool {
        a == 0
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        Fp::add(self, a, b)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        Fp::sub(self, a, b)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        Fp::mul(self, a, b)
    }
    fn neg(&self, a: u64) -> u64 {
        Fp::neg(self, a)
    }
    fn inv(&self, a: u64) -> u64 {
        Fp::inv(self, a)
    }
    fn from_index(&self, i: u64) -> u64 {
        i % self.p
    }
    fn index(&self, a: u64) -> u64 {
        a
    }
    fn from_fieldelem(&self, e: &FieldElem) -> u64 {
        match e {
            FieldElem::Fp(x) => *x,
            _ => panic!("expected prime-field element"),
        }
    }
    fn to_fieldelem(&self, a: u64) -> FieldElem {
        FieldElem::Fp(a)
    }
}

impl ScalarField for Fp2 {
    type El = [u64; 2];
    fn order(&self) -> u64 {
        Fp2::order(self)
    }
    fn zero(&self) -> [u64; 2] {
        [0, 0]
    }
    fn one(&self) -> [u64; 2] {
        [1, 0]
    }
    fn is_zero(&self, a: [u64; 2]) -> bool {
        a == [0, 0]
    }
    fn add(&self, a: [u64; 2], b: [u64; 2]) -> [u64; 2] {
        Fp2::add(self, a, b)
    }
    fn sub(&self, a: [u64; 2], b: [u64; 2]) -> [u64; 2] {
        Fp2::sub(self, a, b)
    }
    fn mul(&self, a: [u64; 2], b: [u64; 2]) -> [u64; 2] {
        Fp2::mul(self, a, b)
    }
    fn neg(&self, a: [u64; 2]) -> [u64; 2] {
        Fp2::neg(self, a)
    }
    fn inv(&self, a: [u64; 2]) -> [u64; 2] {
        Fp2::inv(self, a)
    }
    fn from_index(&self, i: u64) -> [u64; 2] {
        Fp2::from_index(self, i)
    }
    fn index(&self, a: [u64; 2]) -> u64 {
        Fp2::index(self, a)
    }
    fn from_fieldelem(&self, e: &FieldElem) -> [u64; 2] {
        match e {
            FieldElem::Fp(x) => [*x, 0],
            FieldElem::Ext(v) if v.len() == 2 => [v[0], v[1]],
            _ => panic!("expected degree-2 extension element"),
        }
    }
    fn to_fieldelem(&self, a: [u64; 2]) -> FieldElem {
        FieldElem::Ext(vec![a[0], a[1]])
    }
}

/// Sparse term list with scalar coefficients; fast full-point evaluation.
pub(crate) struct TermPoly<F: ScalarField> {
    pub nvars: usize,
    pub terms: Vec<(Vec<u8>, F::El)>,
}

impl<F: ScalarField> TermPoly<F> {
    pub fn from_multipoly(f: F, p: &MultiPoly) -> Self {
        TermPoly {
            nvars: p.nvars(),
            terms: p
                .terms()
                .map(|(m, c)| (m.0.clone(), f.from_fieldelem(c)))
                .collect(),
        }
    }

    pub fn eval(&self, f: F, pt: &[F::El]) -> F::El {
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    t = f.mul(t, pt[i]);
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Substitute a fixed prefix (values for the first `prefix.len()`
    /// variables), producing a term list in the remaining variables.
    pub fn restrict_prefix(&self, f: F, prefix: &[F::El]) -> TermPoly<F> {
        let k = prefix.len();
        let m = self.nvars - k;
        let mut terms: Vec<(Vec<u8>, F::El)> = Vec::new();
        'term: for (e, c) in &self.terms {
            let mut coeff = *c;
            for i in 0..k {
                for _ in 0..e[i] {
                    coeff = f.mul(coeff, prefix[i]);
                    if f.is_zero(coeff) {
                        continue 'term;
                    }
                }
            }
            let tail = e[k..].to_vec();
            if let Some(slot) = terms.iter_mut().find(|(t, _)| *t == tail) {
                slot.1 = f.add(slot.1, coeff);
            } else {
                terms.push((tail, coeff));
            }
        }
        terms.retain(|(_, c)| !f.is_zero(*c));
        TermPoly { nvars: m, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Dense multi-dimensional coefficient box; axis 0 is collapsed first.
pub(crate) struct DenseBox<F: ScalarField> {
    dims: Vec<usize>,
    data: Vec<F::El>,
}

impl<F: ScalarField> DenseBox<F> {
    pub fn from_terms(f: F, t: &TermPoly<F>) -> Self {
        let m = t.nvars;
        let mut dims = vec![1usize; m];
        for (e, _) in &t.terms {
            for i in 0..m {
                dims[i] = dims[i].max(e[i] as usize + 1);
            }
        }
        let size: usize = dims.iter().product();
        let mut data = vec![f.zero(); size];
        let mut strides = vec![1usize; m];
        for i in (0..m.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        for (e, c) in &t.terms {
            let idx: usize = e
                .iter()
                .enumerate()
                .map(|(i, &ei)| ei as usize * strides[i])
                .sum();
            data[idx] = f.add(data[idx], *c);
        }
        DenseBox { dims, data }
    }

    pub fn nvars(&self) -> usize {
        self.dims.len()
    }

    /// Horner-collapse axis 0 at value v.
    pub fn eval_first(&self, f: F, v: F::El) -> DenseBox<F> {
        let block = self.data.len() / self.dims[0];
        let mut out = self.data[(self.dims[0] - 1) * block..].to_vec();
        for k in (0..self.dims[0] - 1).rev() {
            let src = &self.data[k * block..(k + 1) * block];
            for (o, s) in out.iter_mut().zip(src) {
                *o = f.add(f.mul(*o, v), *s);
            }
        }
        DenseBox { dims: self.dims[1..].to_vec(), data: out }
    }

    pub fn univariate(&self) -> &[F::El] {
        debug_assert_eq!(self.dims.len(), 1);
        &self.data
    }
}

/// Table of square roots by element index; entry is the root with the
/// smaller index, when the element is a square.
pub(crate) struct SqrtTable<F: ScalarField> {
    roots: Vec<Option<F::El>>,
}

impl<F: ScalarField> SqrtTable<F> {
    pub fn build(f: F) -> Self {
        let q = f.order();
        assert!(q <= TABLE_CAP, "sqrt table capped at 2^20 elements");
        let mut roots: Vec<Option<F::El>> = vec![None; q as usize];
        for i in 0..q {
            let x = f.from_index(i);
            let s = f.index(f.mul(x, x));
            if roots[s as usize].is_none() {
                roots[s as usize] = Some(x);
            }
        }
        SqrtTable { roots }
    }

    pub fn sqrt(&self, f: F, a: F::El) -> Option<F::El> {
        self.roots[f.index(a) as usize]
    }
}

fn trim<F: ScalarField>(f: F, v: &mut Vec<F::El>) {
    while v.len() > 1 && f.is_zero(*v.last().unwrap()) {
        v.pop();
    }
}

fn poly_gcd_scalar<F: ScalarField>(f: F, a: &[F::El], b: &[F::El]) -> Vec<F::El> {
    let mut a: Vec<F::El> = a.to_vec();
    let mut b: Vec<F::El> = b.to_vec();
    trim(f, &mut a);
    trim(f, &mut b);
    while !(b.len() == 1 && f.is_zero(b[0])) {
        if b.len() == 1 {
            return b; // nonzero constant: the gcd is a unit
        }
        // a mod b
        let db = b.len() - 1;
        let lead_inv = f.inv(b[db]);
        while a.len() > db && !(a.len() == 1 && f.is_zero(a[0])) {
            let da = a.len() - 1;
            let c = f.mul(a[da], lead_inv);
            if !f.is_zero(c) {
                for i in 0..db {
                    a[da - db + i] = f.sub(a[da - db + i], f.mul(c, b[i]));
                }
            }
            a.pop();
            trim(f, &mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Roots of a scalar univariate: formulas through degree 2, exhaustive scan
/// beyond. Returns distinct roots ordered by element index.
fn roots_scalar<F: ScalarField>(f: F, coeffs: &[F::El], sqrt: &SqrtTable<F>) -> Vec<F::El> {
    let mut v: Vec<F::El> = coeffs.to_vec();
    trim(f, &mut v);
    let deg = v.len() - 1;
    let mut out: Vec<F::El> = Vec::new();
    match deg {
        0 => {}
        1 => out.push(f.neg(f.mul(v[0], f.inv(v[1])))),
        2 => {
            let disc = f.sub(f.mul(v[1], v[1]), f.mul(f.from_index(4), f.mul(v[2], v[0])));
            if let Some(s) = sqrt.sqrt(f, disc) {
                let half_inv = f.inv(f.mul(f.from_index(2), v[2]));
                out.push(f.mul(f.add(f.neg(v[1]), s), half_inv));
                out.push(f.mul(f.sub(f.neg(v[1]), s), half_inv));
            }
        }
        _ => {
            let q = f.order();
            debug_assert!(q <= TABLE_CAP);
            for i in 0..q {
                let x = f.from_index(i);
                let mut acc = f.zero();
                for c in v.iter().rev() {
                    acc = f.add(f.mul(acc, x), *c);
                }
                if f.is_zero(acc) {
                    out.push(x);
                }
            }
        }
    }
    out.sort_by_key(|&r| f.index(r));
    out.dedup();
    out
}

fn integer_pow_capped(q: u64, e: u32) -> u64 {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(q);
    }
    acc
}

/// All projective points of P^{n−1}(F_q) where every partial derivative of
/// `poly` vanishes. Points come back in chart order with the leading
/// coordinate normalized to 1.
pub(crate) fn scan_scalar<F: ScalarField>(
    f: F,
    poly: &MultiPoly,
) -> Result<Vec<Vec<FieldElem>>, DualScanError> {
    let n = poly.nvars();
    if n < 2 || n > 5 {
        return Err(DualScanError::AmbientUnsupported(n));
    }
    let q = f.order();
    let needed = integer_pow_capped(q, n as u32 - 2);
    if needed > SCAN_BUDGET {
        return Err(DualScanError::BudgetExceeded { needed, budget: SCAN_BUDGET });
    }
    let partials: Vec<TermPoly<F>> = poly
        .gradient()
        .iter()
        .map(|g| TermPoly::from_multipoly(f, g))
        .collect();
    let sqrt = SqrtTable::build(f);
    let mut found: Vec<Vec<FieldElem>> = Vec::new();

    for lead in 0..n {
        let m = n - 1 - lead;
        // prefix: lead zeros then 1
        let mut prefix_vals: Vec<F::El> = vec![f.zero(); lead];
        prefix_vals.push(f.one());
        if m == 0 {
            let pt: Vec<F::El> = prefix_vals.clone();
            if partials.iter().all(|g| f.is_zero(g.eval(f, &pt))) {
                found.push(pt.iter().map(|&x| f.to_fieldelem(x)).collect());
            }
            continue;
        }
        let restricted: Vec<TermPoly<F>> = partials
            .iter()
            .map(|g| g.restrict_prefix(f, &prefix_vals))
            .collect();
        let drivers: Vec<usize> = (0..n).filter(|&i| !restricted[i].is_zero()).take(2).collect();
        if drivers.is_empty() {
            // every point of this chart kills all partials; positive-
            // dimensional degenerate input
            return Err(DualScanError::DegenerateInput(
                "all partial derivatives vanish identically on a chart".into(),
            ));
        }
        let box_a = DenseBox::from_terms(f, &restricted[drivers[0]]);
        let box_b = drivers.get(1).map(|&i| DenseBox::from_terms(f, &restricted[i]));

        let leaf = |univ_a: &[F::El], univ_b: Option<&[F::El]>, outer: &[F::El]| -> Vec<Vec<FieldElem>> {
            let mut local = Vec::new();
            let a_zero = univ_a.iter().all(|&c| f.is_zero(c));
            let b_zero = univ_b.map_or(true, |u| u.iter().all(|&c| f.is_zero(c)));
            let mut full = Vec::with_capacity(n);
            full.extend_from_slice(&prefix_vals);
            full.extend_from_slice(outer);
            full.push(f.zero());
            let last = full.len() - 1;
            let mut check_candidate = |x: F::El, local: &mut Vec<Vec<FieldElem>>| {
                full[last] = x;
                if partials.iter().all(|g| f.is_zero(g.eval(f, &full))) {
                    local.push(full.iter().map(|&y| f.to_fieldelem(y)).collect());
                }
            };
            if a_zero && b_zero {
                for i in 0..q {
                    check_candidate(f.from_index(i), &mut local);
                }
            } else {
                let roots = if !a_zero && !b_zero {
                    let g = poly_gcd_scalar(f, univ_a, univ_b.unwrap());
                    if g.len() == 1 {
                        Vec::new()
                    } else {
                        roots_scalar(f, &g, &sqrt)
                    }
                } else if !a_zero {
                    roots_scalar(f, univ_a, &sqrt)
                } else {
                    roots_scalar(f, univ_b.unwrap(), &sqrt)
                };
                for x in roots {
                    check_candidate(x, &mut local);
                }
            }
            local
        };

        if m == 1 {
            let ua = box_a.univariate().to_vec();
            let ub = box_b.as_ref().map(|b| b.univariate().to_vec());
            found.extend(leaf(&ua, ub.as_deref(), &[]));
            continue;
        }

        // parallelize over the first free coordinate; slices are merged in
        // index order so the output is independent of the thread count
        let slices: Vec<Vec<Vec<FieldElem>>> = (0..q)
            .into_par_iter()
            .map(|i0| {
                let v0 = f.from_index(i0);
                let a1 = box_a.eval_first(f, v0);
                let b1 = box_b.as_ref().map(|b| b.eval_first(f, v0));
                let mut outer: Vec<F::El> = vec![v0];
                let mut local = Vec::new();
                descend(f, q, &a1, b1.as_ref(), &mut outer, &leaf, &mut local);
                local
            })
            .collect();
        for s in slices {
            found.extend(s);
        }
    }
    Ok(found)
}

fn descend<F: ScalarField>(
    f: F,
    q: u64,
    a: &DenseBox<F>,
    b: Option<&DenseBox<F>>,
    outer: &mut Vec<F::El>,
    leaf: &impl Fn(&[F::El], Option<&[F::El]>, &[F::El]) -> Vec<Vec<FieldElem>>,
    out: &mut Vec<Vec<FieldElem>>,
) {
    if a.nvars() == 1 {
        let ua = a.univariate().to_vec();
        let ub = b.map(|x| x.univariate().to_vec());
        out.extend(leaf(&ua, ub.as_deref(), outer));
        return;
    }
    for i in 0..q {
        let v = f.from_index(i);
        let a2 = a.eval_first(f, v);
        let b2 = b.map(|x| x.eval_first(f, v));
        outer.push(v);
        descend(f, q, &a2, b2.as_ref(), outer, leaf, out);
        outer.pop();
    }
}

/// Exhaustive scan dispatcher over a prime field or its quadratic extension.
pub fn singular_scan(
    poly: &MultiPoly,
    field: &FieldSpec,
) -> Result<Vec<Vec<FieldElem>>, DualScanError> {
    match field {
        FieldSpec::Prime { p } => {
            let lifted = poly.lift_to(field);
            scan_scalar(Fp::new(*p), &lifted)
        }
        FieldSpec::Extension { p, k: 2, modulus } => {
            let fp2 = Fp2::from_modulus(*p, modulus)
                .ok_or(DualScanError::UnsupportedExtension(2))?;
            let lifted = poly.lift_to(field);
            scan_scalar(fp2, &lifted)
        }
        FieldSpec::Extension { k, .. } => Err(DualScanError::UnsupportedExtension(*k)),
        FieldSpec::Rational => Err(DualScanError::NotFinite),
    }
}

/// Independently coded brute-force twin: walks charts in the opposite order
/// and evaluates every partial at every point.
pub fn singular_scan_bruteforce(
    poly: &MultiPoly,
    field: &FieldSpec,
) -> Result<Vec<Vec<FieldElem>>, DualScanError> {
    match field {
        FieldSpec::Prime { p } => brute_scalar(Fp::new(*p), &poly.lift_to(field)),
        FieldSpec::Extension { p, k: 2, modulus } => {
            let fp2 = Fp2::from_modulus(*p, modulus)
                .ok_or(DualScanError::UnsupportedExtension(2))?;
            brute_scalar(fp2, &poly.lift_to(field))
        }
        FieldSpec::Extension { k, .. } => Err(DualScanError::UnsupportedExtension(*k)),
        FieldSpec::Rational => Err(DualScanError::NotFinite),
    }
}

fn brute_scalar<F: ScalarField>(
    f: F,
    poly: &MultiPoly,
) -> Result<Vec<Vec<FieldElem>>, DualScanError> {
    let n = poly.nvars();
    let q = f.order();
    let total = integer_pow_capped(q, n as u32 - 1);
    if total > BRUTE_BUDGET {
        return Err(DualScanError::BudgetExceeded { needed: total, budget: BRUTE_BUDGET });
    }
    let partials: Vec<TermPoly<F>> = poly
        .gradient()
        .iter()
        .map(|g| TermPoly::from_multipoly(f, g))
        .collect();
    let mut found = Vec::new();
    // charts from the last coordinate backwards, free digits descending
    for lead in (0..n).rev() {
        let m = n - 1 - lead;
        let count = integer_pow_capped(q, m as u32);
        let mut pt: Vec<F::El> = vec![f.zero(); n];
        pt[lead] = f.one();
        for raw in (0..count).rev() {
            let mut r = raw;
            for j in 0..m {
                pt[lead + 1 + j] = f.from_index(r % q);
                r /= q;
            }
            if partials.iter().all(|g| f.is_zero(g.eval(f, &pt))) {
                found.push(pt.iter().map(|&x| f.to_fieldelem(x)).collect());
            }
        }
    }
    Ok(found)
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
    fn smooth_conic_has_no_singular_points() {
        let f = f31();
        let c = poly(&f, 3, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        assert!(singular_scan(&c, &f).unwrap().is_empty());
    }

    #[test]
    fn xy_is_singular_at_a_point() {
        let f7 = FieldSpec::prime(7).unwrap();
        let c = poly(&f7, 3, &[(&[1, 1, 0], 1)]);
        let s = singular_scan(&c, &f7).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(
            s[0],
            vec![f7.zero(), f7.zero(), f7.one()],
            "the only singular point of xy is (0:0:1)"
        );
    }

    #[test]
    fn optimized_matches_bruteforce() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(31);
        let f = f31();
        let ext = FieldSpec::extension(31, 2).unwrap();
        let basis3: Vec<_> = crate::multipoly::monomial_basis(4, 3);
        for trial in 0..10 {
            let mut p = MultiPoly::zero(4, f.clone());
            for _ in 0..5 {
                let m = basis3[rng.gen_range(0..basis3.len())].clone();
                p = p.add(&MultiPoly::term(4, f.clone(), m.0, f.random(&mut rng)).unwrap());
            }
            if p.is_zero() {
                continue;
            }
            let mut a = singular_scan(&p, &f).unwrap();
            let mut b = singular_scan_bruteforce(&p, &f).unwrap();
            a.sort();
            b.sort();
            assert_eq!(a, b, "trial {trial} over F_31");
            // and over the quadratic extension on a P² slice to keep the
            // brute side cheap
            let slice = poly(
                &f,
                3,
                &[(&[2, 1, 0], 1), (&[0, 0, 3], 2), (&[1, 1, 1], 5)],
            );
            let mut a2 = singular_scan(&slice, &ext).unwrap();
            let mut b2 = singular_scan_bruteforce(&slice, &ext).unwrap();
            a2.sort();
            b2.sort();
            assert_eq!(a2, b2);
        }
    }

    #[test]
    fn budget_guard() {
        let big = FieldSpec::prime(10009).unwrap();
        let c = poly(&big, 5, &[(&[3, 0, 0, 0, 0], 1), (&[0, 3, 0, 0, 0], 1)]);
        assert!(matches!(
            singular_scan(&c, &big),
            Err(DualScanError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn nodal_cubic_surface_counts() {
        // x³ + y³ + z³ + w³ − 3(x+y+z+w)... keep it simple: the cone
        // x² + y² + z² over F_31 in P³ is singular exactly at (0:0:0:1)
        let f = f31();
        let cone = poly(&f, 4, &[(&[2, 0, 0, 0], 1), (&[0, 2, 0, 0], 1), (&[0, 0, 2, 0], 1)]);
        let s = singular_scan(&cone, &f).unwrap();
        assert_eq!(s.len(), 1);
        let ext = FieldSpec::extension(31, 2).unwrap();
        let s2 = singular_scan(&cone, &ext).unwrap();
        assert_eq!(s2.len(), 1, "vertex is the only singular point over F_{{31²}} too");
    }
}
