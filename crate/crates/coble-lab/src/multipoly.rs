//! Sparse multivariate polynomials over an exact field, with the linear
//! substitution, differentiation, and factor-extraction utilities the
//! restriction identities are built on.
//!
//! Terms live in a BTreeMap keyed by graded-lex monomials, so every
//! iteration order (printing, interpolation columns, equality) is canonical.
//! Coefficients are never zero. A hard guard caps the degree at 8 and the
//! variable count at 10; everything in this crate fits well inside.

use crate::fields::{FieldElem, FieldSpec};
use crate::linalg::MatrixF;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

pub const MAX_DEGREE: usize = 8;
pub const MAX_VARS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("degree {0} exceeds the hard cap {MAX_DEGREE}")]
    DegreeGuard(usize),
    #[error("{0} variables exceed the hard cap {MAX_VARS}")]
    VarGuard(usize),
    #[error("point has {got} coordinates, polynomial has {want} variables")]
    PointLength { want: usize, got: usize },
    #[error("substitution maps {got} variables, polynomial has {want}")]
    SubstShape { want: usize, got: usize },
    #[error("linear form divides only to order {valuation}, requested {requested}")]
    NotDivisible { valuation: usize, requested: usize },
    #[error("zero linear form")]
    ZeroForm,
    #[error("embedding matrix does not have full column rank")]
    NotInjective,
    #[error("malformed polynomial text: {0}")]
    Parse(String),
    #[error("field error: {0}")]
    Field(#[from] crate::fields::FieldError),
}

/// Exponent vector with graded-lex ordering: higher total degree first,
/// ties broken lexicographically (earlier variables weigh more).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors of total degree d in n variables, in graded-lex
/// order with the first variable dominant: (d,0,…,0) first, (0,…,0,d) last.
/// Count is C(n+d−1, d).
pub fn monomial_basis(n: usize, d: usize) -> Vec<Monomial> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut cur = vec![0u8; n];
    fn rec(cur: &mut Vec<u8>, pos: usize, rem: usize, out: &mut Vec<Monomial>) {
        if pos == cur.len() - 1 {
            cur[pos] = rem as u8;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=rem).rev() {
            cur[pos] = e as u8;
            rec(cur, pos + 1, rem - e, out);
        }
        cur[pos] = 0;
    }
    rec(&mut cur, 0, d, &mut out);
    out
}

/// Sparse polynomial; invariant: no zero coefficients, all exponent vectors
/// of length `nvars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    field: FieldSpec,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl MultiPoly {
    pub fn zero(nvars: usize, field: FieldSpec) -> Self {
        MultiPoly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn from_terms<I>(nvars: usize, field: FieldSpec, it: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u8>, FieldElem)>,
    {
        if nvars > MAX_VARS {
            return Err(PolyError::VarGuard(nvars));
        }
        let mut p = MultiPoly::zero(nvars, field);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(Monomial(e), c)?;
        }
        Ok(p)
    }

    /// Single term c·x^e.
    pub fn term(nvars: usize, field: FieldSpec, e: Vec<u8>, c: FieldElem) -> Result<Self, PolyError> {
        Self::from_terms(nvars, field, [(e, c)])
    }

    /// The coordinate x_i.
    pub fn variable(nvars: usize, field: FieldSpec, i: usize) -> Self {
        let mut e = vec![0u8; nvars];
        e[i] = 1;
        let one = field.one();
        Self::term(nvars, field, e, one).expect("degree 1 is always legal")
    }

    /// A linear form Σ c_i x_i.
    pub fn linear_form(nvars: usize, field: FieldSpec, coeffs: &[FieldElem]) -> Self {
        assert_eq!(coeffs.len(), nvars);
        let mut p = MultiPoly::zero(nvars, field);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0u8; nvars];
            e[i] = 1;
            p.add_term(Monomial(e), c.clone()).unwrap();
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: FieldElem) -> Result<(), PolyError> {
        if self.field.is_zero(&c) {
            return Ok(());
        }
        let d = m.degree();
        if d > MAX_DEGREE {
            return Err(PolyError::DegreeGuard(d));
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = self.field.add(o.get(), &c);
                if self.field.is_zero(&s) {
                    o.remove();
                } else {
                    o.insert(s);
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u8]) -> FieldElem {
        self.terms
            .get(&Monomial(e.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Some(d) when every monomial has total degree d (zero counts as
    /// homogeneous of degree 0).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Some(0) };
        let d = first.degree();
        it.all(|m| m.degree() == d).then_some(d)
    }

    pub fn leading(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone()).expect("degrees already guarded");
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg(c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        if self.field.is_zero(k) {
            return MultiPoly::zero(self.nvars, self.field.clone());
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.mul(c, k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MultiPoly::zero(self.nvars, self.field.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e: Vec<u8> = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), self.field.mul(c1, c2))?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: usize) -> Result<Self, PolyError> {
        let mut acc = MultiPoly::term(
            self.nvars,
            self.field.clone(),
            vec![0; self.nvars],
            self.field.one(),
        )?;
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn evaluate(&self, pt: &[FieldElem]) -> Result<FieldElem, PolyError> {
        if pt.len() != self.nvars {
            return Err(PolyError::PointLength { want: self.nvars, got: pt.len() });
        }
        let f = &self.field;
        // power tables per coordinate
        let maxe: Vec<u8> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        let pows: Vec<Vec<FieldElem>> = pt
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let mut v = vec![f.one()];
                for k in 1..=maxe[i] as usize {
                    let t = f.mul(&v[k - 1], x);
                    v.push(t);
                }
                v
            })
            .collect();
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = f.mul(&t, &pows[i][e as usize]);
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// (∂F/∂x_0, …, ∂F/∂x_{n−1}).
    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars)
            .map(|i| {
                let mut g = MultiPoly::zero(self.nvars, self.field.clone());
                for (m, c) in &self.terms {
                    let e = m.0[i];
                    if e > 0 {
                        let mut e2 = m.0.clone();
                        e2[i] -= 1;
                        let k = self.field.from_i64(e as i64);
                        g.add_term(Monomial(e2), self.field.mul(c, &k)).unwrap();
                    }
                }
                g
            })
            .collect()
    }

    /// F(A·z): substitute x_i = Σ_j A[i][j] z_j.
    pub fn substitute_linear(&self, a: &LinearChange) -> Result<MultiPoly, PolyError> {
        if a.n_out != self.nvars {
            return Err(PolyError::SubstShape { want: self.nvars, got: a.n_out });
        }
        let rows: Vec<MultiPoly> = (0..a.n_out)
            .map(|i| {
                MultiPoly::linear_form(
                    a.n_in,
                    self.field.clone(),
                    &(0..a.n_in).map(|j| a.get(i, j).clone()).collect::<Vec<_>>(),
                )
            })
            .collect();
        self.substitute(&rows)
    }

    /// General composition: x_i ↦ subs[i]; all subs share a variable count.
    pub fn substitute(&self, subs: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        if subs.len() != self.nvars {
            return Err(PolyError::SubstShape { want: self.nvars, got: subs.len() });
        }
        let m = subs.first().map_or(0, |s| s.nvars);
        assert!(subs.iter().all(|s| s.nvars == m), "substitution variable mismatch");
        let f = &self.field;
        let maxe: Vec<u8> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|mm| mm.0[i]).max().unwrap_or(0))
            .collect();
        // memoized powers of each substituted coordinate
        let mut pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(self.nvars);
        for (i, s) in subs.iter().enumerate() {
            let mut v = vec![MultiPoly::term(m, f.clone(), vec![0; m], f.one())?];
            for k in 1..=maxe[i] as usize {
                let t = v[k - 1].mul(s)?;
                v.push(t);
            }
            pows.push(v);
        }
        let mut out = MultiPoly::zero(m, f.clone());
        for (mm, c) in &self.terms {
            let mut t = MultiPoly::term(m, f.clone(), vec![0; m], c.clone())?;
            for (i, &e) in mm.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&pows[i][e as usize])?;
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Projective proportionality: F ∝ G iff the supports agree and all
    /// cross-products of coefficients match. Works over any field, no
    /// divisions.
    pub fn proportional_to(&self, other: &Self) -> bool {
        if self.nvars != other.nvars {
            return false;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let f = &self.field;
        // reference pair from the leading monomial of the union support
        let (m0, a0) = self.leading().unwrap();
        let b0 = other.coeff(&m0.0);
        if f.is_zero(&b0) {
            return false;
        }
        let keys: std::collections::BTreeSet<&Monomial> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|m| {
            let a = self.coeff(&m.0);
            let b = other.coeff(&m.0);
            f.mul(&a, &b0) == f.mul(&b, a0)
        })
    }

    /// Scale so the graded-lex leading coefficient is 1.
    pub fn normalize_leading(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.field.inv(c).expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Reinterpret prime-field coefficients in an extension of the same
    /// characteristic (or return self for the identity lift).
    pub fn lift_to(&self, target: &FieldSpec) -> MultiPoly {
        if target == &self.field {
            return self.clone();
        }
        assert_eq!(
            self.field.characteristic(),
            target.characteristic(),
            "lift must preserve characteristic"
        );
        let mut out = MultiPoly::zero(self.nvars, target.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), target.embed_base(c)).unwrap();
        }
        out
    }

    /// Peel L^m off F: succeed iff L divides F to order ≥ m, returning
    /// F/L^m in the original coordinates. On failure reports the maximal
    /// valuation found. Implemented by an invertible change of coordinates
    /// sending L to the first variable.
    pub fn extract_coordinate_power(
        &self,
        l: &[FieldElem],
        m: usize,
    ) -> Result<MultiPoly, PolyError> {
        let f = &self.field;
        if l.len() != self.nvars {
            return Err(PolyError::PointLength { want: self.nvars, got: l.len() });
        }
        let Some(pivot) = l.iter().position(|c| !f.is_zero(c)) else {
            return Err(PolyError::ZeroForm);
        };
        let n = self.nvars;
        // W = M·X with first row L, other rows unit vectors skipping pivot
        let mut rows: Vec<Vec<FieldElem>> = vec![l.to_vec()];
        for j in 0..n {
            if j != pivot {
                let mut r = vec![f.zero(); n];
                r[j] = f.one();
                rows.push(r);
            }
        }
        let mmat = MatrixF::from_rows(f.clone(), rows);
        let minv = mmat.inverse().expect("completion matrix is invertible");
        let to_w = LinearChange::from_matrix(&minv);
        let transformed = self.substitute_linear(&to_w)?;
        let val = transformed
            .terms
            .keys()
            .map(|mm| mm.0[0] as usize)
            .min()
            .unwrap_or(m);
        if transformed.is_zero() {
            // zero is divisible by anything
            return Ok(MultiPoly::zero(n, f.clone()));
        }
        if val < m {
            return Err(PolyError::NotDivisible { valuation: val, requested: m });
        }
        let mut quot = MultiPoly::zero(n, f.clone());
        for (mm, c) in &transformed.terms {
            let mut e = mm.0.clone();
            e[0] -= m as u8;
            quot.add_term(Monomial(e), c.clone()).unwrap();
        }
        let back = LinearChange::from_matrix(&mmat);
        quot.substitute_linear(&back)
    }

    /// Text format, bit-exact round-trip. Header then one term per line in
    /// descending graded-lex order:
    /// `vars=<n> degree=<d> field=<spec>` / `e_0 … e_{n−1} : c`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "vars={} degree={} field={}",
            self.nvars,
            self.degree(),
            self.field.format_spec()
        )
        .unwrap();
        for (m, c) in self.terms.iter().rev() {
            let es: Vec<String> = m.0.iter().map(|e| e.to_string()).collect();
            writeln!(s, "{} : {}", es.join(" "), self.field.format_elem(c)).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, PolyError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| PolyError::Parse("empty".into()))?;
        let mut nvars = None;
        let mut field = None;
        for part in header.split_whitespace() {
            if let Some(v) = part.strip_prefix("vars=") {
                nvars = Some(v.parse::<usize>().map_err(|e| PolyError::Parse(e.to_string()))?);
            } else if let Some(v) = part.strip_prefix("field=") {
                field = Some(FieldSpec::parse_spec(v)?);
            }
        }
        let nvars = nvars.ok_or_else(|| PolyError::Parse("missing vars=".into()))?;
        let field = field.ok_or_else(|| PolyError::Parse("missing field=".into()))?;
        let mut out = MultiPoly::zero(nvars, field.clone());
        for line in lines {
            let (es, cs) = line
                .rsplit_once(':')
                .ok_or_else(|| PolyError::Parse(format!("bad term line: {line}")))?;
            let e: Vec<u8> = es
                .split_whitespace()
                .map(|t| t.parse::<u8>().map_err(|e| PolyError::Parse(e.to_string())))
                .collect::<Result<_, _>>()?;
            if e.len() != nvars {
                return Err(PolyError::Parse(format!("expected {nvars} exponents")));
            }
            let c = field.parse_elem(cs.trim())?;
            out.add_term(Monomial(e), c)?;
        }
        Ok(out)
    }
}

/// A matrix over a field encoding a linear substitution X = A·Z (columns
/// are the images of the source basis vectors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearChange {
    pub n_out: usize,
    pub n_in: usize,
    pub field: FieldSpec,
    entries: Vec<FieldElem>,
}

impl LinearChange {
    pub fn new(field: FieldSpec, rows: Vec<Vec<FieldElem>>) -> Self {
        let n_out = rows.len();
        let n_in = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == n_in), "ragged rows");
        LinearChange { n_out, n_in, field, entries: rows.into_iter().flatten().collect() }
    }

    /// An embedding must have full column rank; verified at construction.
    pub fn embedding(field: FieldSpec, rows: Vec<Vec<FieldElem>>) -> Result<Self, PolyError> {
        let lc = Self::new(field.clone(), rows.clone());
        let m = MatrixF::from_rows(field, rows);
        if m.rank() < lc.n_in {
            return Err(PolyError::NotInjective);
        }
        Ok(lc)
    }

    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        Self::new(
            field.clone(),
            rows.iter()
                .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn from_matrix(m: &MatrixF) -> Self {
        Self::new(
            m.field.clone(),
            (0..m.rows)
                .map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect())
                .collect(),
        )
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.n_in + j]
    }

    /// Apply to a point: X = A·z.
    pub fn apply(&self, z: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(z.len(), self.n_in);
        let f = &self.field;
        (0..self.n_out)
            .map(|i| {
                let mut acc = f.zero();
                for j in 0..self.n_in {
                    let t = f.mul(self.get(i, j), &z[j]);
                    acc = f.add(&acc, &t);
                }
                acc
            })
            .collect()
    }

    /// Composition A·B as substitutions: (F∘A)∘B = F∘(A·B).
    pub fn compose(&self, b: &LinearChange) -> LinearChange {
        assert_eq!(self.n_in, b.n_out);
        let f = &self.field;
        LinearChange::new(
            f.clone(),
            (0..self.n_out)
                .map(|i| {
                    (0..b.n_in)
                        .map(|j| {
                            let mut acc = f.zero();
                            for k in 0..self.n_in {
                                let t = f.mul(self.get(i, k), b.get(k, j));
                                acc = f.add(&acc, &t);
                            }
                            acc
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn f31() -> FieldSpec {
        FieldSpec::prime(31).unwrap()
    }

    fn random_poly(
        f: &FieldSpec,
        nvars: usize,
        deg: usize,
        terms: usize,
        rng: &mut impl Rng,
    ) -> MultiPoly {
        let basis = monomial_basis(nvars, deg);
        let mut p = MultiPoly::zero(nvars, f.clone());
        for _ in 0..terms {
            let m = basis[rng.gen_range(0..basis.len())].clone();
            p = p
                .add(&MultiPoly::term(nvars, f.clone(), m.0, f.random(rng)).unwrap());
        }
        p
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_basis(9, 6).len(), 3003);
        assert_eq!(monomial_basis(9, 3).len(), 165);
        assert_eq!(monomial_basis(9, 5).len(), 1287);
        assert_eq!(monomial_basis(4, 4).len(), 35);
        // graded-lex: first variable dominant
        let b = monomial_basis(3, 2);
        assert_eq!(b[0].0, vec![2, 0, 0]);
        assert_eq!(b.last().unwrap().0, vec![0, 0, 2]);
    }

    #[test]
    fn evaluate_examples() {
        let f = f31();
        // sum of cubes at a unit vector
        let mut p = MultiPoly::zero(9, f.clone());
        for i in 0..9 {
            let mut e = vec![0u8; 9];
            e[i] = 3;
            p = p.add(&MultiPoly::term(9, f.clone(), e, f.one()).unwrap());
        }
        let mut pt = vec![f.zero(); 9];
        pt[0] = f.one();
        assert_eq!(p.evaluate(&pt).unwrap(), f.one());
        let ones = vec![f.one(); 9];
        assert_eq!(p.evaluate(&ones).unwrap(), f.from_i64(9));
        assert!(matches!(
            p.evaluate(&ones[..5]),
            Err(PolyError::PointLength { .. })
        ));
    }

    #[test]
    fn euler_identity_on_random_homogeneous() {
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        for _ in 0..20 {
            let p = random_poly(&f, 5, 3, 8, &mut rng);
            let grads = p.gradient();
            let mut acc = MultiPoly::zero(5, f.clone());
            for (i, g) in grads.iter().enumerate() {
                let xi = MultiPoly::variable(5, f.clone(), i);
                acc = acc.add(&xi.mul(g).unwrap());
            }
            assert_eq!(acc, p.scale(&f.from_i64(3)));
        }
    }

    #[test]
    fn homogeneity_scaling_property() {
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        for _ in 0..20 {
            let p = random_poly(&f, 4, 4, 6, &mut rng);
            let pt: Vec<FieldElem> = (0..4).map(|_| f.random(&mut rng)).collect();
            let lam = f.random(&mut rng);
            let scaled: Vec<FieldElem> = pt.iter().map(|x| f.mul(x, &lam)).collect();
            let lhs = p.evaluate(&scaled).unwrap();
            let rhs = f.mul(&f.pow(&lam, 4), &p.evaluate(&pt).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn chain_rule_gradient_of_substitution() {
        // ∇(F∘A) = Aᵀ·(∇F ∘ A) on random cubics
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(29);
        for _ in 0..10 {
            let p = random_poly(&f, 4, 3, 6, &mut rng);
            let rows: Vec<Vec<FieldElem>> = (0..4)
                .map(|_| (0..3).map(|_| f.random(&mut rng)).collect())
                .collect();
            let a = LinearChange::new(f.clone(), rows);
            let comp = p.substitute_linear(&a).unwrap();
            let lhs = comp.gradient();
            let gsub: Vec<MultiPoly> = p
                .gradient()
                .iter()
                .map(|g| g.substitute_linear(&a).unwrap())
                .collect();
            for j in 0..3 {
                let mut rhs = MultiPoly::zero(3, f.clone());
                for i in 0..4 {
                    rhs = rhs.add(&gsub[i].scale(a.get(i, j)));
                }
                assert_eq!(lhs[j], rhs, "column {j}");
            }
        }
    }

    #[test]
    fn substitution_composition_law() {
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let p = random_poly(&f, 3, 3, 5, &mut rng);
        let a = LinearChange::new(
            f.clone(),
            (0..3).map(|_| (0..4).map(|_| f.random(&mut rng)).collect()).collect(),
        );
        let b = LinearChange::new(
            f.clone(),
            (0..4).map(|_| (0..2).map(|_| f.random(&mut rng)).collect()).collect(),
        );
        let lhs = p.substitute_linear(&a).unwrap().substitute_linear(&b).unwrap();
        let rhs = p.substitute_linear(&a.compose(&b)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn extract_power_examples() {
        let f = f31();
        // x²y / x² = y
        let x2y = MultiPoly::term(3, f.clone(), vec![2, 1, 0], f.one()).unwrap();
        let lx = [f.one(), f.zero(), f.zero()];
        let q = x2y.extract_coordinate_power(&lx, 2).unwrap();
        assert_eq!(q, MultiPoly::variable(3, f.clone(), 1));
        // requesting order 3 fails with valuation 2
        assert_eq!(
            x2y.extract_coordinate_power(&lx, 3),
            Err(PolyError::NotDivisible { valuation: 2, requested: 3 })
        );
        // (x+y)²(x²+z²) / (x+y)² = x²+z²
        let xy = MultiPoly::linear_form(3, f.clone(), &[f.one(), f.one(), f.zero()]);
        let x2z2 = MultiPoly::term(3, f.clone(), vec![2, 0, 0], f.one())
            .unwrap()
            .add(&MultiPoly::term(3, f.clone(), vec![0, 0, 2], f.one()).unwrap());
        let prod = xy.pow(2).unwrap().mul(&x2z2).unwrap();
        let got = prod
            .extract_coordinate_power(&[f.one(), f.one(), f.zero()], 2)
            .unwrap();
        assert_eq!(got, x2z2);
    }

    #[test]
    fn extract_power_roundtrip_random() {
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(37);
        for _ in 0..20 {
            let p = random_poly(&f, 4, 2, 5, &mut rng);
            if p.is_zero() {
                continue;
            }
            let l: Vec<FieldElem> = (0..4).map(|_| f.random(&mut rng)).collect();
            if l.iter().all(|c| f.is_zero(c)) {
                continue;
            }
            let lp = MultiPoly::linear_form(4, f.clone(), &l);
            let prod = lp.pow(2).unwrap().mul(&p).unwrap();
            let got = prod.extract_coordinate_power(&l, 2).unwrap();
            assert_eq!(got, p);
        }
    }

    #[test]
    fn proportionality() {
        let f = f31();
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        let p = random_poly(&f, 4, 3, 6, &mut rng);
        assert!(p.proportional_to(&p.scale(&f.from_i64(17))));
        let q = p.add(&MultiPoly::term(4, f.clone(), vec![3, 0, 0, 0], f.one()).unwrap());
        // adding a term breaks proportionality unless it cancelled
        if !p.proportional_to(&q) {
            assert!(!q.proportional_to(&p));
        }
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        for f in [f31(), FieldSpec::rationals(), FieldSpec::extension(31, 2).unwrap()] {
            for _ in 0..10 {
                let p = random_poly(&f, 4, 3, 6, &mut rng);
                let text = p.to_text();
                let q = MultiPoly::from_text(&text).unwrap();
                assert_eq!(p, q);
                assert_eq!(text, q.to_text());
            }
        }
    }

    #[test]
    fn degree_guard_enforced() {
        let f = f31();
        let x = MultiPoly::variable(2, f.clone(), 0);
        let mut acc = x.clone();
        for _ in 0..7 {
            acc = acc.mul(&x).unwrap();
        }
        assert!(matches!(acc.mul(&x), Err(PolyError::DegreeGuard(9))));
    }
}
