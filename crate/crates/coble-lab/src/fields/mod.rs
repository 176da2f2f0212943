//! Exact computable fields: arbitrary-precision rationals, prime fields F_p
//! and small extensions F_{p^k}, together with the univariate root finding
//! that the hypersurface sampling engine is built on.
//!
//! Everything here is exact; there is no floating point anywhere in this
//! crate. Prime moduli are capped below 2^31 so that products of two
//! residues fit comfortably in a `u64`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod fp;
mod roots;

pub use fp::{Fp, Fp2};
pub use roots::univariate_roots;

/// Largest admissible prime modulus (exclusive).
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the 2^31 cap")]
    PrimeTooLarge(u64),
    #[error("modulus of degree {0} is not irreducible over F_{1}")]
    ReducibleModulus(usize, u64),
    #[error("no cube root of unity: p = {0} with p mod 3 = {1}, need p ≡ 1 (mod 3)")]
    NoCubeRoot(u64, u64),
    #[error("the zero polynomial has every element as a root")]
    ZeroPolynomial,
    #[error("univariate degree {0} exceeds the supported cap of 6")]
    DegreeTooLarge(usize),
    #[error("operation requires a finite field")]
    NotFinite,
    #[error("element does not belong to this field")]
    WrongField,
    #[error("extension degree must be at least 1")]
    BadExtensionDegree,
}

/// A computational field: ℚ, F_p, or F_{p^k}.
///
/// Extension fields are polynomial residue class rings F_p[t]/(m(t)) with a
/// monic irreducible modulus, stored with ascending coefficients. Specs are
/// immutable after construction and cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rational,
    Prime { p: u64 },
    Extension { p: u64, k: u32, modulus: Vec<u64> },
}

/// An element of some [`FieldSpec`]. The element does not carry its field;
/// the spec acts as the arithmetic context, as is usual for ring-context
/// designs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElem {
    /// Reduced fraction, positive denominator (normalized by `BigRational`).
    Rat(BigRational),
    /// Canonical residue in [0, p).
    Fp(u64),
    /// Coefficient vector of length k, ascending powers of t.
    Ext(Vec<u64>),
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub fn rationals() -> Self {
        FieldSpec::Rational
    }

    /// F_p. Primality is checked by trial division up to √p; p < 2^31.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        if !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldSpec::Prime { p })
    }

    /// F_{p^k} with the canonical modulus: the first monic irreducible
    /// polynomial of degree k in the ordering that compares coefficient
    /// tuples (b_{k-1}, …, b_1, b_0) lexicographically. For k = 2 this is
    /// always of the form t² + b₀, which the fast `Fp2` kernel relies on.
    pub fn extension(p: u64, k: u32) -> Result<Self, FieldError> {
        let base = FieldSpec::prime(p)?;
        if k == 0 {
            return Err(FieldError::BadExtensionDegree);
        }
        if k == 1 {
            return Ok(base);
        }
        let fp = Fp::new(p);
        let kk = k as usize;
        let mut coeffs = vec![0u64; kk];
        loop {
            let mut m: Vec<u64> = coeffs.clone();
            m.push(1);
            if roots::is_irreducible(&m, fp) {
                return Ok(FieldSpec::Extension { p, k, modulus: m });
            }
            // increment (b_{k-1}, ..., b_0) with b_0 as the fastest digit
            let mut i = 0usize;
            loop {
                coeffs[i] += 1;
                if coeffs[i] < p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
                if i == kk {
                    // cannot happen: irreducibles of every degree exist
                    return Err(FieldError::ReducibleModulus(kk, p));
                }
            }
        }
    }

    /// F_{p^k} with an explicit monic modulus (ascending coefficients,
    /// length k+1). The modulus is checked for irreducibility.
    pub fn extension_with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        FieldSpec::prime(p)?;
        let k = modulus.len().saturating_sub(1);
        if k < 2 || modulus[k] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::BadExtensionDegree);
        }
        if !roots::is_irreducible(&modulus, Fp::new(p)) {
            return Err(FieldError::ReducibleModulus(k, p));
        }
        Ok(FieldSpec::Extension { p, k: k as u32, modulus })
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, FieldSpec::Rational)
    }

    pub fn characteristic(&self) -> Option<u64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime { p } | FieldSpec::Extension { p, .. } => Some(*p),
        }
    }

    pub fn ext_degree(&self) -> u32 {
        match self {
            FieldSpec::Extension { k, .. } => *k,
            _ => 1,
        }
    }

    /// Field size p^k for finite fields, None for ℚ. Saturates at u64::MAX.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime { p } => Some(*p),
            FieldSpec::Extension { p, k, .. } => {
                let mut q: u64 = 1;
                for _ in 0..*k {
                    q = q.saturating_mul(*p);
                }
                Some(q)
            }
        }
    }

    /// Whether `e` structurally belongs to this field.
    pub fn contains(&self, e: &FieldElem) -> bool {
        match (self, e) {
            (FieldSpec::Rational, FieldElem::Rat(_)) => true,
            (FieldSpec::Prime { p }, FieldElem::Fp(x)) => x < p,
            (FieldSpec::Extension { p, k, .. }, FieldElem::Ext(v)) => {
                v.len() == *k as usize && v.iter().all(|c| c < p)
            }
            _ => false,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match self {
            FieldSpec::Rational => FieldElem::Rat(BigRational::zero()),
            FieldSpec::Prime { .. } => FieldElem::Fp(0),
            FieldSpec::Extension { k, .. } => FieldElem::Ext(vec![0; *k as usize]),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match self {
            FieldSpec::Rational => FieldElem::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime { p } => FieldElem::Fp(n.rem_euclid(*p as i64) as u64),
            FieldSpec::Extension { p, k, .. } => {
                let mut v = vec![0u64; *k as usize];
                v[0] = n.rem_euclid(*p as i64) as u64;
                FieldElem::Ext(v)
            }
        }
    }

    pub fn is_zero(&self, a: &FieldElem) -> bool {
        match a {
            FieldElem::Rat(r) => r.is_zero(),
            FieldElem::Fp(x) => *x == 0,
            FieldElem::Ext(v) => v.iter().all(|&c| c == 0),
        }
    }

    fn fp(&self) -> Fp {
        match self {
            FieldSpec::Prime { p } | FieldSpec::Extension { p, .. } => Fp::new(*p),
            FieldSpec::Rational => unreachable!("fp() on ℚ"),
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (a, b) {
            (FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x + y),
            (FieldElem::Fp(x), FieldElem::Fp(y)) => FieldElem::Fp(self.fp().add(*x, *y)),
            (FieldElem::Ext(x), FieldElem::Ext(y)) => {
                let fp = self.fp();
                FieldElem::Ext(x.iter().zip(y).map(|(&u, &v)| fp.add(u, v)).collect())
            }
            _ => panic!("mixed-field operands"),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        match a {
            FieldElem::Rat(x) => FieldElem::Rat(-x),
            FieldElem::Fp(x) => FieldElem::Fp(self.fp().neg(*x)),
            FieldElem::Ext(v) => {
                let fp = self.fp();
                FieldElem::Ext(v.iter().map(|&c| fp.neg(c)).collect())
            }
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        match (a, b) {
            (FieldElem::Rat(x), FieldElem::Rat(y)) => FieldElem::Rat(x * y),
            (FieldElem::Fp(x), FieldElem::Fp(y)) => FieldElem::Fp(self.fp().mul(*x, *y)),
            (FieldElem::Ext(x), FieldElem::Ext(y)) => {
                let FieldSpec::Extension { modulus, .. } = self else {
                    panic!("mixed-field operands");
                };
                FieldElem::Ext(roots::ext_mul(x, y, modulus, self.fp()))
            }
            _ => panic!("mixed-field operands"),
        }
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match a {
            FieldElem::Rat(x) => FieldElem::Rat(x.recip()),
            FieldElem::Fp(x) => FieldElem::Fp(self.fp().inv(*x)),
            FieldElem::Ext(v) => {
                let FieldSpec::Extension { modulus, .. } = self else {
                    return Err(FieldError::WrongField);
                };
                FieldElem::Ext(roots::ext_inv(v, modulus, self.fp()))
            }
        })
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// The checked arithmetic entry point: validates that both operands
    /// belong to this field and reports division by zero explicitly.
    pub fn arith(&self, a: &FieldElem, b: &FieldElem, op: ArithOp) -> Result<FieldElem, FieldError> {
        if !self.contains(a) || !self.contains(b) {
            return Err(FieldError::MixedFields);
        }
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
        }
    }

    /// Canonical enumeration of a finite field: index ↦ element, where an
    /// extension element (c₀, …, c_{k-1}) has index Σ cᵢ pⁱ.
    pub fn elem_from_index(&self, idx: u64) -> FieldElem {
        match self {
            FieldSpec::Rational => panic!("enumeration of ℚ"),
            FieldSpec::Prime { p } => FieldElem::Fp(idx % p),
            FieldSpec::Extension { p, k, .. } => {
                let mut v = vec![0u64; *k as usize];
                let mut r = idx;
                for c in v.iter_mut() {
                    *c = r % p;
                    r /= p;
                }
                FieldElem::Ext(v)
            }
        }
    }

    pub fn elem_index(&self, e: &FieldElem) -> u64 {
        match (self, e) {
            (FieldSpec::Prime { .. }, FieldElem::Fp(x)) => *x,
            (FieldSpec::Extension { p, .. }, FieldElem::Ext(v)) => {
                v.iter().rev().fold(0u64, |acc, &c| acc * p + c)
            }
            _ => panic!("elem_index on non-finite field"),
        }
    }

    /// Uniform random element.
    pub fn random(&self, rng: &mut impl rand::Rng) -> FieldElem {
        match self {
            FieldSpec::Rational => {
                // small random rationals for tests
                let n = rng.gen_range(-50i64..=50);
                let d = rng.gen_range(1i64..=20);
                FieldElem::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            _ => {
                let q = self.order().expect("finite");
                self.elem_from_index(rng.gen_range(0..q))
            }
        }
    }

    /// ω with ω ≠ 1 and ω³ = 1, the smallest such canonical residue.
    /// Requires p ≡ 1 (mod 3); for extensions the root is taken in the
    /// prime subfield.
    pub fn cube_root_of_unity(&self) -> Result<FieldElem, FieldError> {
        let p = self.characteristic().ok_or(FieldError::NotFinite)?;
        if p % 3 != 1 {
            return Err(FieldError::NoCubeRoot(p, p % 3));
        }
        let fp = Fp::new(p);
        // ω = (−1 ± √−3)/2; take the smaller residue of the two.
        let s = fp.sqrt(fp.neg(3 % p)).expect("−3 is a square when p ≡ 1 mod 3");
        let half = fp.inv(2);
        let w1 = fp.mul(fp.add(fp.neg(1), s), half);
        let w2 = fp.mul(fp.sub(fp.neg(1), s), half);
        let w = w1.min(w2);
        debug_assert_eq!(fp.mul(fp.mul(w, w), w), 1);
        debug_assert!(w != 1);
        Ok(match self {
            FieldSpec::Prime { .. } => FieldElem::Fp(w),
            FieldSpec::Extension { k, .. } => {
                let mut v = vec![0u64; *k as usize];
                v[0] = w;
                FieldElem::Ext(v)
            }
            FieldSpec::Rational => unreachable!(),
        })
    }

    /// Embed an element of the prime subfield into this field.
    pub fn embed_base(&self, e: &FieldElem) -> FieldElem {
        match (self, e) {
            (FieldSpec::Extension { k, .. }, FieldElem::Fp(x)) => {
                let mut v = vec![0u64; *k as usize];
                v[0] = *x;
                FieldElem::Ext(v)
            }
            _ => e.clone(),
        }
    }

    /// Compact display used by the polynomial text format and reports.
    pub fn format_spec(&self) -> String {
        match self {
            FieldSpec::Rational => "Q".to_string(),
            FieldSpec::Prime { p } => format!("F{p}"),
            FieldSpec::Extension { p, k, modulus } => {
                let m: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                format!("F{p}^{k}[{}]", m.join(","))
            }
        }
    }

    pub fn parse_spec(s: &str) -> Result<Self, FieldError> {
        if s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        let body = s.strip_prefix('F').ok_or(FieldError::NotFinite)?;
        if let Some((pk, m)) = body.split_once('[') {
            let (ps, _ks) = pk.split_once('^').ok_or(FieldError::NotFinite)?;
            let p: u64 = ps.parse().map_err(|_| FieldError::NotFinite)?;
            let m = m.strip_suffix(']').ok_or(FieldError::NotFinite)?;
            let modulus: Vec<u64> = m
                .split(',')
                .map(|c| c.parse().map_err(|_| FieldError::NotFinite))
                .collect::<Result<_, _>>()?;
            FieldSpec::extension_with_modulus(p, modulus)
        } else {
            let p: u64 = body.parse().map_err(|_| FieldError::NotFinite)?;
            FieldSpec::prime(p)
        }
    }

    /// Format a single element for the text format: integer residue,
    /// `num/den`, or `[c0,c1,...]` for extension coefficients.
    pub fn format_elem(&self, e: &FieldElem) -> String {
        match e {
            FieldElem::Fp(x) => x.to_string(),
            FieldElem::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Ext(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<FieldElem, FieldError> {
        match self {
            FieldSpec::Rational => {
                let r = if let Some((n, d)) = s.split_once('/') {
                    let n: BigInt = n.parse().map_err(|_| FieldError::WrongField)?;
                    let d: BigInt = d.parse().map_err(|_| FieldError::WrongField)?;
                    if d.is_zero() {
                        return Err(FieldError::DivisionByZero);
                    }
                    BigRational::new(n, d)
                } else {
                    let n: BigInt = s.parse().map_err(|_| FieldError::WrongField)?;
                    BigRational::from(n)
                };
                Ok(FieldElem::Rat(r))
            }
            FieldSpec::Prime { p } => {
                let x: i64 = s.parse().map_err(|_| FieldError::WrongField)?;
                Ok(FieldElem::Fp(x.rem_euclid(*p as i64) as u64))
            }
            FieldSpec::Extension { p, k, .. } => {
                let body = s
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .ok_or(FieldError::WrongField)?;
                let v: Vec<u64> = body
                    .split(',')
                    .map(|c| {
                        c.parse::<i64>()
                            .map(|x| x.rem_euclid(*p as i64) as u64)
                            .map_err(|_| FieldError::WrongField)
                    })
                    .collect::<Result<_, _>>()?;
                if v.len() != *k as usize {
                    return Err(FieldError::WrongField);
                }
                Ok(FieldElem::Ext(v))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}
