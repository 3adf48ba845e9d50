//! The prime field F_p and its quadratic extension F_{p^2}.
//!
//! F_{p^2} is realised as F_p[x]/(x^2 + a x + b) for the fixed modulus chosen
//! by [`PrimeConfig::new`]: the lexicographically smallest irreducible monic
//! quadratic over F_p. All elements are stored as coefficient pairs in that
//! basis, so values are canonical and hashable.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Global arithmetic parameters: the odd prime, the Witt precision N
/// (number of p-digits carried by `WittElem`) and the derived pi-adic
/// precision K = N * (p^2 - 1) used by `EisensteinElem`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeConfig {
    pub p: u64,
    /// Witt precision: elements of Z_{p^2} are carried modulo p^N.
    pub n: u32,
    /// pi-adic precision: elements of O_F are exact modulo pi^K.
    pub k: u32,
    /// Coefficients (a, b) of the fixed irreducible modulus x^2 + a x + b.
    pub modulus: (u64, u64),
}

impl PrimeConfig {
    /// Build the configuration for an odd prime with the given Witt precision.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidParameter(format!("p = {p} must be an odd prime")));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!("precision n = {n} must be >= 2")));
        }
        let modulus = smallest_irreducible(p);
        Ok(PrimeConfig { p, n, k: n * (p * p - 1) as u32, modulus })
    }

    /// Default precision used throughout: N = 4.
    pub fn with_default_precision(p: u64) -> Result<Self> {
        Self::new(p, 4)
    }

    pub fn p2(&self) -> u64 {
        self.p * self.p
    }

    /// Order of the multiplicative group of F_{p^2}.
    pub fn group_order(&self) -> u64 {
        self.p * self.p - 1
    }

    /// p^n as u64 (n bounded so this never overflows for the desk-scale primes).
    pub fn pn(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// The mod-p view of the same configuration: coefficients carry a single
    /// p-digit. Used for residue computations that must not see higher digits.
    pub fn residue_view(&self) -> PrimeConfig {
        PrimeConfig { p: self.p, n: 1, k: (self.p * self.p - 1) as u32, modulus: self.modulus }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Lexicographically smallest (a, b) with x^2 + a x + b irreducible over F_p.
fn smallest_irreducible(p: u64) -> (u64, u64) {
    for a in 0..p {
        for b in 0..p {
            let mut irreducible = true;
            for x in 0..p {
                if (x * x + a * x + b) % p == 0 {
                    irreducible = false;
                    break;
                }
            }
            if irreducible {
                return (a, b);
            }
        }
    }
    unreachable!("a quadratic non-residue exists for every odd prime")
}

/// Element of F_p, stored reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fp {
    pub val: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(val: i64, p: u64) -> Self {
        Fp { val: val.rem_euclid(p as i64) as u64, p }
    }

    pub fn zero(p: u64) -> Self {
        Fp { val: 0, p }
    }

    pub fn one(p: u64) -> Self {
        Fp { val: 1, p }
    }

    pub fn add(self, o: Fp) -> Fp {
        Fp { val: (self.val + o.val) % self.p, p: self.p }
    }

    pub fn sub(self, o: Fp) -> Fp {
        Fp { val: (self.val + self.p - o.val) % self.p, p: self.p }
    }

    pub fn mul(self, o: Fp) -> Fp {
        Fp { val: self.val * o.val % self.p, p: self.p }
    }

    pub fn neg(self) -> Fp {
        Fp { val: (self.p - self.val) % self.p, p: self.p }
    }

    pub fn inv(self) -> Result<Fp> {
        if self.val == 0 {
            return Err(Error::Singular);
        }
        Ok(self.pow(self.p - 2))
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(self) -> bool {
        self.val == 0
    }
}

/// Element of F_{p^2} = F_p[x]/(x^2 + a x + b), stored as c0 + c1 x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fq2 {
    pub c0: u64,
    pub c1: u64,
    pub p: u64,
    pub modulus: (u64, u64),
}

impl Fq2 {
    pub fn new(cfg: &PrimeConfig, c0: i64, c1: i64) -> Self {
        let p = cfg.p as i64;
        Fq2 {
            c0: c0.rem_euclid(p) as u64,
            c1: c1.rem_euclid(p) as u64,
            p: cfg.p,
            modulus: cfg.modulus,
        }
    }

    pub fn zero(cfg: &PrimeConfig) -> Self {
        Self::new(cfg, 0, 0)
    }

    pub fn one(cfg: &PrimeConfig) -> Self {
        Self::new(cfg, 1, 0)
    }

    pub fn from_fp(cfg: &PrimeConfig, a: Fp) -> Self {
        Self::new(cfg, a.val as i64, 0)
    }

    /// Scalar from an integer, reduced mod p (the prime subfield).
    pub fn from_int(cfg: &PrimeConfig, v: i64) -> Self {
        Self::new(cfg, v, 0)
    }

    pub fn is_zero(self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    /// True when the element lies in the prime subfield F_p.
    pub fn is_in_fp(self) -> bool {
        self.c1 == 0
    }

    pub fn add(self, o: Fq2) -> Fq2 {
        Fq2 { c0: (self.c0 + o.c0) % self.p, c1: (self.c1 + o.c1) % self.p, ..self }
    }

    pub fn sub(self, o: Fq2) -> Fq2 {
        Fq2 {
            c0: (self.c0 + self.p - o.c0) % self.p,
            c1: (self.c1 + self.p - o.c1) % self.p,
            ..self
        }
    }

    pub fn neg(self) -> Fq2 {
        Fq2 { c0: (self.p - self.c0) % self.p, c1: (self.p - self.c1) % self.p, ..self }
    }

    pub fn mul(self, o: Fq2) -> Fq2 {
        // (c0 + c1 x)(d0 + d1 x) with x^2 = -a x - b.
        let p = self.p;
        let (a, b) = self.modulus;
        let t0 = self.c0 * o.c0 % p;
        let t1 = (self.c0 * o.c1 + self.c1 * o.c0) % p;
        let t2 = self.c1 * o.c1 % p;
        let c0 = (t0 + t2 * (p - b)) % p;
        let c1 = (t1 + t2 * (p - a)) % p;
        Fq2 { c0, c1, ..self }
    }

    pub fn scale(self, k: i64) -> Fq2 {
        let k = k.rem_euclid(self.p as i64) as u64;
        Fq2 { c0: self.c0 * k % self.p, c1: self.c1 * k % self.p, ..self }
    }

    pub fn pow(self, e: i64) -> Fq2 {
        let order = (self.p * self.p - 1) as i64;
        if self.is_zero() {
            assert!(e > 0, "0 cannot be raised to a non-positive power");
            return self;
        }
        let mut e = e.rem_euclid(order) as u64;
        let mut base = self;
        let mut acc = Fq2 { c0: 1, c1: 0, ..self };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<Fq2> {
        if self.is_zero() {
            return Err(Error::Singular);
        }
        Ok(self.pow((self.p * self.p - 2) as i64))
    }

    /// The field automorphism a -> a^p (order 2).
    pub fn frobenius(self) -> Fq2 {
        self.pow(self.p as i64)
    }

    /// Norm to F_p.
    pub fn norm(self) -> Fp {
        let n = self.mul(self.frobenius());
        debug_assert_eq!(n.c1, 0);
        Fp { val: n.c0, p: self.p }
    }

    /// Flat index c0 + p*c1, used for deterministic enumeration.
    pub fn index(self) -> u64 {
        self.c0 + self.p * self.c1
    }
}

/// Deterministic enumeration of all of F_{p^2} in flat-index order.
pub fn all_fq2(cfg: &PrimeConfig) -> Vec<Fq2> {
    let mut out = Vec::with_capacity((cfg.p * cfg.p) as usize);
    for c1 in 0..cfg.p {
        for c0 in 0..cfg.p {
            out.push(Fq2::new(cfg, c0 as i64, c1 as i64));
        }
    }
    out.sort_by_key(|z| z.index());
    out
}

/// The fixed multiplicative generator: the smallest element (by flat index)
/// of order p^2 - 1.
pub fn multiplicative_generator(cfg: &PrimeConfig) -> Fq2 {
    let order = cfg.group_order();
    'outer: for z in all_fq2(cfg) {
        if z.is_zero() {
            continue;
        }
        // z generates iff z^(order/q) != 1 for every prime divisor q.
        let mut m = order;
        let mut divisors = Vec::new();
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                divisors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            divisors.push(m);
        }
        for q in divisors {
            if z.pow((order / q) as i64) == Fq2::one(cfg) {
                continue 'outer;
            }
        }
        return z;
    }
    unreachable!("F_{{p^2}}^x is cyclic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_choices() {
        assert_eq!(PrimeConfig::new(3, 2).unwrap().modulus, (0, 1));
        assert_eq!(PrimeConfig::new(5, 2).unwrap().modulus, (0, 2));
        assert_eq!(PrimeConfig::new(7, 2).unwrap().modulus, (0, 1));
    }

    #[test]
    fn field_axioms_smoke() {
        for p in [3u64, 5, 7] {
            let cfg = PrimeConfig::new(p, 2).unwrap();
            let g = multiplicative_generator(&cfg);
            assert_eq!(g.pow(cfg.group_order() as i64), Fq2::one(&cfg));
            assert_ne!(g.pow((cfg.group_order() / 2) as i64), Fq2::one(&cfg));
            // Frobenius has order 2 and fixes F_p.
            for z in all_fq2(&cfg) {
                assert_eq!(z.frobenius().frobenius(), z);
                if z.is_in_fp() {
                    assert_eq!(z.frobenius(), z);
                }
            }
        }
    }

    #[test]
    fn inverse_and_norm() {
        let cfg = PrimeConfig::new(5, 2).unwrap();
        for z in all_fq2(&cfg) {
            if z.is_zero() {
                continue;
            }
            assert_eq!(z.mul(z.inv().unwrap()), Fq2::one(&cfg));
            assert_eq!(z.norm().val, z.mul(z.frobenius()).c0);
        }
    }
}
