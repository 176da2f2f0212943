//! Fast copyable arithmetic contexts for F_p (p < 2^31) and F_{p²}.
//!
//! These back every hot kernel: interpolation matrices, exhaustive scans,
//! fiber histograms. Reduction is Barrett-style (one 128-bit multiply and a
//! conditional subtract) and is valid for inputs below 2^62.

/// Prime-field context. `p < 2^31`, elements are canonical residues in a u64.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp {
    pub p: u64,
    m: u64, // floor(2^64 / p)
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2 && p < (1 << 31));
        Fp { p, m: ((1u128 << 64) / p as u128) as u64 }
    }

    /// Reduce a < 2^62 modulo p.
    #[inline(always)]
    pub fn reduce(&self, a: u64) -> u64 {
        let q = ((a as u128 * self.m as u128) >> 64) as u64;
        let r = a - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline(always)]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }

    /// a*b + c reduced; the unreduced value stays below 2^62.
    #[inline(always)]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        self.reduce(a * b + c)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        // extended Euclid on signed 128-bit accumulators
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        t0.rem_euclid(self.p as i128) as u64
    }

    pub fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    /// Legendre symbol: 1, p−1 (for −1), or 0.
    pub fn legendre(&self, a: u64) -> u64 {
        self.pow(a, (self.p - 1) / 2)
    }

    /// Tonelli–Shanks square root, deterministic (smallest nonresidue as the
    /// auxiliary generator; returns the smaller of the two roots).
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        if a == 0 {
            return Some(0);
        }
        if p == 2 {
            return Some(a);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let r = if p % 4 == 3 {
            self.pow(a, (p + 1) / 4)
        } else {
            let mut q = p - 1;
            let mut s = 0u32;
            while q % 2 == 0 {
                q /= 2;
                s += 1;
            }
            let z = (2..p).find(|&z| self.legendre(z) == p - 1).unwrap();
            let mut m = s;
            let mut c = self.pow(z, q);
            let mut t = self.pow(a, q);
            let mut r = self.pow(a, (q + 1) / 2);
            while t != 1 {
                let mut i = 0u32;
                let mut tt = t;
                while tt != 1 {
                    tt = self.mul(tt, tt);
                    i += 1;
                }
                let b = self.pow(c, 1 << (m - i - 1));
                m = i;
                c = self.mul(b, b);
                t = self.mul(t, c);
                r = self.mul(r, b);
            }
            r
        };
        Some(r.min(self.p - r))
    }
}

/// Quadratic extension F_{p²} = F_p[t]/(t² − c). The canonical degree-2
/// modulus produced by [`super::FieldSpec::extension`] always has this shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp2 {
    pub fp: Fp,
    pub c: u64, // t² = c
}

pub type Fp2El = [u64; 2];

impl Fp2 {
    /// Build from a monic degree-2 modulus m = t² + m₁t + m₀ with m₁ = 0.
    pub fn from_modulus(p: u64, modulus: &[u64]) -> Option<Self> {
        if modulus.len() != 3 || modulus[2] != 1 || modulus[1] != 0 {
            return None;
        }
        let fp = Fp::new(p);
        Some(Fp2 { fp, c: fp.neg(modulus[0]) })
    }

    #[inline(always)]
    pub fn zero(&self) -> Fp2El {
        [0, 0]
    }

    #[inline(always)]
    pub fn one(&self) -> Fp2El {
        [1, 0]
    }

    #[inline(always)]
    pub fn embed(&self, a: u64) -> Fp2El {
        [a, 0]
    }

    #[inline(always)]
    pub fn is_zero(&self, a: Fp2El) -> bool {
        a == [0, 0]
    }

    #[inline(always)]
    pub fn add(&self, a: Fp2El, b: Fp2El) -> Fp2El {
        [self.fp.add(a[0], b[0]), self.fp.add(a[1], b[1])]
    }

    #[inline(always)]
    pub fn sub(&self, a: Fp2El, b: Fp2El) -> Fp2El {
        [self.fp.sub(a[0], b[0]), self.fp.sub(a[1], b[1])]
    }

    #[inline(always)]
    pub fn neg(&self, a: Fp2El) -> Fp2El {
        [self.fp.neg(a[0]), self.fp.neg(a[1])]
    }

    #[inline(always)]
    pub fn mul(&self, a: Fp2El, b: Fp2El) -> Fp2El {
        let f = self.fp;
        let a0b0 = a[0] * b[0];
        let a1b1 = f.reduce(a[1] * b[1]);
        let cross = f.reduce(a[0] * b[1] + a[1] * b[0]);
        [f.reduce(a0b0 + a1b1 * self.c), cross]
    }

    pub fn inv(&self, a: Fp2El) -> Fp2El {
        let f = self.fp;
        // norm = a0² − c·a1²
        let n = f.sub(f.mul(a[0], a[0]), f.mul(self.c, f.mul(a[1], a[1])));
        let ni = f.inv(n);
        [f.mul(a[0], ni), f.neg(f.mul(a[1], ni))]
    }

    pub fn pow(&self, mut a: Fp2El, mut e: u64) -> Fp2El {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Canonical enumeration index: a₀ + a₁·p.
    #[inline(always)]
    pub fn index(&self, a: Fp2El) -> u64 {
        a[0] + a[1] * self.fp.p
    }

    #[inline(always)]
    pub fn from_index(&self, idx: u64) -> Fp2El {
        [idx % self.fp.p, (idx / self.fp.p) % self.fp.p]
    }

    pub fn order(&self) -> u64 {
        self.fp.p * self.fp.p
    }
}
