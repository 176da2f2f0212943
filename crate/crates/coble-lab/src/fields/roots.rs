//! Univariate polynomial arithmetic over finite fields: extension-field
//! multiplication/inversion, irreducibility testing, and root finding.
//!
//! Root finding is exhaustive for fields with at most 2^16 elements and
//! switches to a gcd-with-Frobenius split (Cantor–Zassenhaus restricted to
//! linear factors) above that. The splitting elements are drawn from the
//! canonical field enumeration, so the whole procedure is deterministic.

use super::fp::Fp;
use super::{FieldElem, FieldError, FieldSpec};

/// Exhaustive-scan threshold on the field order.
const EXHAUSTIVE_LIMIT: u128 = 1 << 16;
/// Degree cap on inputs, matching the polynomial layer's degree guard.
const DEGREE_CAP: usize = crate::multipoly::MAX_DEGREE;

// ---- dense univariate arithmetic over F_p (u64 coefficients) ----

fn fp_trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn fp_rem(mut a: Vec<u64>, b: &[u64], fp: Fp) -> Vec<u64> {
    let db = b.len() - 1;
    let lead_inv = fp.inv(b[db]);
    while a.len() > db {
        let da = a.len() - 1;
        let c = fp.mul(a[da], lead_inv);
        if c != 0 {
            for i in 0..db {
                a[da - db + i] = fp.sub(a[da - db + i], fp.mul(c, b[i]));
            }
        }
        a.pop();
        fp_trim(&mut a);
        if a.iter().all(|&x| x == 0) {
            return vec![0];
        }
    }
    a
}

fn fp_gcd(mut a: Vec<u64>, mut b: Vec<u64>, fp: Fp) -> Vec<u64> {
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = fp_rem(a, &b, fp);
        a = b;
        b = r;
    }
    // monic
    let lead = *a.last().unwrap();
    if lead != 0 && lead != 1 {
        let inv = fp.inv(lead);
        for c in a.iter_mut() {
            *c = fp.mul(*c, inv);
        }
    }
    a
}

fn fp_mulmod(a: &[u64], b: &[u64], m: &[u64], fp: Fp) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = fp.mul_add(x, y, prod[i + j]);
        }
    }
    fp_rem(prod, m, fp)
}

/// x^(p^i) mod m, by repeated squaring i·log₂(p) times.
fn fp_frobenius_power(m: &[u64], i: u32, fp: Fp) -> Vec<u64> {
    let mut x = vec![0u64, 1];
    x = fp_rem(x, m, fp);
    for _ in 0..i {
        // x ← x^p mod m
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut e = fp.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, m, fp);
            }
            base = fp_mulmod(&base, &base, m, fp);
            e >>= 1;
        }
        x = acc;
    }
    x
}

/// Rabin-style irreducibility over F_p: a reducible monic polynomial of
/// degree k has an irreducible factor of degree ≤ k/2, and such a factor
/// divides gcd(m, x^(p^i) − x) for its degree i.
pub(crate) fn is_irreducible(m: &[u64], fp: Fp) -> bool {
    let k = m.len() - 1;
    debug_assert!(k >= 2 && m[k] == 1);
    if m[0] == 0 {
        return false; // x divides
    }
    for i in 1..=(k / 2) as u32 {
        let mut xq = fp_frobenius_power(m, i, fp);
        // xq − x
        if xq.len() < 2 {
            xq.resize(2, 0);
        }
        xq[1] = fp.sub(xq[1], 1);
        let g = fp_gcd(m.to_vec(), xq, fp);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

pub(crate) fn ext_mul(a: &[u64], b: &[u64], modulus: &[u64], fp: Fp) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut r = fp_mulmod(a, b, modulus, fp);
    r.resize(k, 0);
    r
}

pub(crate) fn ext_inv(a: &[u64], modulus: &[u64], fp: Fp) -> Vec<u64> {
    // extended Euclid in F_p[x]: s·a + t·m = gcd = 1
    let k = modulus.len() - 1;
    let mut r0: Vec<u64> = modulus.to_vec();
    let mut r1: Vec<u64> = a.to_vec();
    fp_trim(&mut r1);
    let mut s0: Vec<u64> = vec![0];
    let mut s1: Vec<u64> = vec![1];
    while !(r1.len() == 1 && r1[0] == 0) {
        // division with quotient
        let (q, r) = fp_divmod(&r0, &r1, fp);
        let qs1 = fp_mul(&q, &s1, fp);
        let s2 = fp_sub(&s0, &qs1, fp);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    debug_assert_eq!(r0.len(), 1, "input not invertible");
    let inv_lead = fp.inv(r0[0]);
    let mut out: Vec<u64> = s0.iter().map(|&c| fp.mul(c, inv_lead)).collect();
    out.resize(k, 0);
    out
}

fn fp_mul(a: &[u64], b: &[u64], fp: Fp) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = fp.mul_add(x, y, prod[i + j]);
        }
    }
    fp_trim(&mut prod);
    prod
}

fn fp_sub(a: &[u64], b: &[u64], fp: Fp) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = fp.sub(x, y);
    }
    fp_trim(&mut out);
    out
}

fn fp_divmod(a: &[u64], b: &[u64], fp: Fp) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let mut rem: Vec<u64> = a.to_vec();
    fp_trim(&mut rem);
    if rem.len() <= db {
        return (vec![0], rem);
    }
    let mut quot = vec![0u64; rem.len() - db];
    let lead_inv = fp.inv(b[db]);
    while rem.len() > db && !(rem.len() == 1 && rem[0] == 0) {
        let da = rem.len() - 1;
        let c = fp.mul(rem[da], lead_inv);
        quot[da - db] = c;
        if c != 0 {
            for i in 0..=db {
                rem[da - db + i] = fp.sub(rem[da - db + i], fp.mul(c, b[i]));
            }
        }
        fp_trim(&mut rem);
        if rem.iter().all(|&x| x == 0) {
            rem = vec![0];
            break;
        }
    }
    (quot, rem)
}

// ---- generic univariate arithmetic over any FieldSpec ----

type UPoly = Vec<FieldElem>;

fn trim(f: &FieldSpec, v: &mut UPoly) {
    while v.len() > 1 && f.is_zero(v.last().unwrap()) {
        v.pop();
    }
}

fn is_zero_poly(f: &FieldSpec, v: &UPoly) -> bool {
    v.iter().all(|c| f.is_zero(c))
}

fn monic(f: &FieldSpec, mut v: UPoly) -> UPoly {
    let lead = v.last().unwrap().clone();
    if !f.is_zero(&lead) && lead != f.one() {
        let inv = f.inv(&lead).unwrap();
        for c in v.iter_mut() {
            *c = f.mul(c, &inv);
        }
    }
    v
}

fn poly_rem(f: &FieldSpec, mut a: UPoly, b: &UPoly) -> UPoly {
    let db = b.len() - 1;
    let lead_inv = f.inv(b.last().unwrap()).unwrap();
    while a.len() > db {
        let da = a.len() - 1;
        let c = f.mul(&a[da], &lead_inv);
        if !f.is_zero(&c) {
            for i in 0..db {
                let t = f.mul(&c, &b[i]);
                a[da - db + i] = f.sub(&a[da - db + i], &t);
            }
        }
        a.pop();
        trim(f, &mut a);
        if is_zero_poly(f, &a) {
            return vec![f.zero()];
        }
    }
    a
}

fn poly_gcd(f: &FieldSpec, mut a: UPoly, mut b: UPoly) -> UPoly {
    trim(f, &mut a);
    trim(f, &mut b);
    while !is_zero_poly(f, &b) {
        let r = poly_rem(f, a, &b);
        a = b;
        b = r;
    }
    monic(f, a)
}

fn poly_mulmod(f: &FieldSpec, a: &UPoly, b: &UPoly, m: &UPoly) -> UPoly {
    let mut prod = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = f.mul(x, y);
            prod[i + j] = f.add(&prod[i + j], &t);
        }
    }
    poly_rem(f, prod, m)
}

fn poly_powmod(f: &FieldSpec, base: &UPoly, mut e: u128, m: &UPoly) -> UPoly {
    let mut acc = vec![f.one()];
    let mut b = poly_rem(f, base.clone(), m);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(f, &acc, &b, m);
        }
        b = poly_mulmod(f, &b, &b, m);
        e >>= 1;
    }
    acc
}

fn order_u128(f: &FieldSpec) -> u128 {
    match f {
        FieldSpec::Rational => unreachable!(),
        FieldSpec::Prime { p } => *p as u128,
        FieldSpec::Extension { p, k, .. } => (*p as u128).pow(*k),
    }
}

/// All roots in `f` of the polynomial with ascending coefficients `coeffs`,
/// multiplicity discarded, ordered by canonical element index.
pub fn univariate_roots(coeffs: &[FieldElem], f: &FieldSpec) -> Result<Vec<FieldElem>, FieldError> {
    if !f.is_finite() {
        return Err(FieldError::NotFinite);
    }
    if coeffs.iter().any(|c| !f.contains(c)) {
        return Err(FieldError::WrongField);
    }
    let mut v: UPoly = coeffs.to_vec();
    trim(f, &mut v);
    if is_zero_poly(f, &v) {
        return Err(FieldError::ZeroPolynomial);
    }
    let deg = v.len() - 1;
    if deg > DEGREE_CAP {
        return Err(FieldError::DegreeTooLarge(deg));
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    let q = order_u128(f);
    let mut roots = if q <= EXHAUSTIVE_LIMIT {
        exhaustive_roots(f, &v, q as u64)
    } else {
        cz_roots(f, v, q)
    };
    roots.sort_by_key(|r| f.elem_index(r));
    roots.dedup();
    Ok(roots)
}

fn exhaustive_roots(f: &FieldSpec, v: &UPoly, q: u64) -> Vec<FieldElem> {
    // fast Horner for the prime case
    if let FieldSpec::Prime { p } = f {
        let fp = Fp::new(*p);
        let cs: Vec<u64> = v
            .iter()
            .map(|c| match c {
                FieldElem::Fp(x) => *x,
                _ => unreachable!(),
            })
            .collect();
        let mut out = Vec::new();
        for x in 0..*p {
            let mut acc = 0u64;
            for &c in cs.iter().rev() {
                acc = fp.mul_add(acc, x, c);
            }
            if acc == 0 {
                out.push(FieldElem::Fp(x));
            }
        }
        return out;
    }
    let mut out = Vec::new();
    for idx in 0..q {
        let x = f.elem_from_index(idx);
        let mut acc = f.zero();
        for c in v.iter().rev() {
            acc = f.add(&f.mul(&acc, &x), c);
        }
        if f.is_zero(&acc) {
            out.push(x);
        }
    }
    out
}

fn cz_roots(f: &FieldSpec, v: UPoly, q: u128) -> Vec<FieldElem> {
    let m = monic(f, v);
    // g = gcd(m, x^q − x): the product of (x − r) over the distinct roots
    let x = vec![f.zero(), f.one()];
    let mut xq = poly_powmod(f, &x, q, &m);
    // xq − x
    if xq.len() < 2 {
        xq.resize(2, f.zero());
    }
    xq[1] = f.sub(&xq[1], &f.one());
    let g = poly_gcd(f, m, xq);
    let mut roots = Vec::new();
    split_linear(f, g, q, &mut roots);
    roots
}

fn split_linear(f: &FieldSpec, g: UPoly, q: u128, out: &mut Vec<FieldElem>) {
    let deg = g.len() - 1;
    if deg == 0 {
        return;
    }
    if deg == 1 {
        // monic x + g0 → root −g0
        out.push(f.neg(&g[0]));
        return;
    }
    // deterministic splitting: try shifts from the canonical enumeration
    let half = (q - 1) / 2;
    for trial in 0u64.. {
        let c = f.elem_from_index(trial);
        let shifted = vec![c, f.one()];
        let mut h = poly_powmod(f, &shifted, half, &g);
        h[0] = f.sub(&h[0], &f.one());
        let d = poly_gcd(f, g.clone(), h);
        let dd = d.len() - 1;
        if dd > 0 && dd < deg {
            let (quot, rem) = poly_divmod(f, &g, &d);
            debug_assert!(is_zero_poly(f, &rem));
            split_linear(f, d, q, out);
            split_linear(f, monic(f, quot), q, out);
            return;
        }
    }
}

fn poly_divmod(f: &FieldSpec, a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let db = b.len() - 1;
    let mut rem = a.clone();
    trim(f, &mut rem);
    if rem.len() <= db {
        return (vec![f.zero()], rem);
    }
    let mut quot = vec![f.zero(); rem.len() - db];
    let lead_inv = f.inv(b.last().unwrap()).unwrap();
    while rem.len() > db && !is_zero_poly(f, &rem) {
        let da = rem.len() - 1;
        let c = f.mul(&rem[da], &lead_inv);
        quot[da - db] = c.clone();
        if !f.is_zero(&c) {
            for i in 0..=db {
                let t = f.mul(&c, &b[i]);
                rem[da - db + i] = f.sub(&rem[da - db + i], &t);
            }
        }
        trim(f, &mut rem);
        if is_zero_poly(f, &rem) {
            rem = vec![f.zero()];
            break;
        }
    }
    (quot, rem)
}
