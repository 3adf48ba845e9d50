//! Truncated Witt vectors: Z_{p^2} modulo p^N.
//!
//! Z_{p^2} = W(F_{p^2}) is realised as Z_p[x]/(x^2 + a x + b) with the same
//! modulus coefficients as the residue field, lifted to integers. An element
//! is a pair of residues mod p^N. The Frobenius lift is the nontrivial ring
//! automorphism over Z_p; it reduces to a -> a^p on residues.

use serde::{Deserialize, Serialize};

use crate::arith::fp::{Fq2, PrimeConfig};
use crate::error::{Error, Result};

/// Element of Z_{p^2}/p^N in the basis {1, x}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WittElem {
    pub c0: u64,
    pub c1: u64,
    pub p: u64,
    /// Declared precision: the element is known modulo p^n.
    pub n: u32,
    pub modulus: (u64, u64),
}

impl WittElem {
    pub fn new(cfg: &PrimeConfig, c0: i64, c1: i64) -> Self {
        let m = cfg.pn() as i64;
        WittElem {
            c0: c0.rem_euclid(m) as u64,
            c1: c1.rem_euclid(m) as u64,
            p: cfg.p,
            n: cfg.n,
            modulus: cfg.modulus,
        }
    }

    pub fn zero(cfg: &PrimeConfig) -> Self {
        Self::new(cfg, 0, 0)
    }

    pub fn one(cfg: &PrimeConfig) -> Self {
        Self::new(cfg, 1, 0)
    }

    pub fn from_int(cfg: &PrimeConfig, v: i64) -> Self {
        Self::new(cfg, v, 0)
    }

    fn pn(&self) -> u64 {
        self.p.pow(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }

    pub fn add(self, o: WittElem) -> WittElem {
        debug_assert_eq!(self.n, o.n);
        let m = self.pn();
        WittElem { c0: (self.c0 + o.c0) % m, c1: (self.c1 + o.c1) % m, ..self }
    }

    pub fn sub(self, o: WittElem) -> WittElem {
        debug_assert_eq!(self.n, o.n);
        let m = self.pn();
        WittElem { c0: (self.c0 + m - o.c0) % m, c1: (self.c1 + m - o.c1) % m, ..self }
    }

    pub fn neg(self) -> WittElem {
        let m = self.pn();
        WittElem { c0: (m - self.c0) % m, c1: (m - self.c1) % m, ..self }
    }

    pub fn mul(self, o: WittElem) -> WittElem {
        debug_assert_eq!(self.n, o.n);
        let m = self.pn() as u128;
        let (a, b) = self.modulus;
        let t0 = (self.c0 as u128) * (o.c0 as u128) % m;
        let t1 = ((self.c0 as u128) * (o.c1 as u128) + (self.c1 as u128) * (o.c0 as u128)) % m;
        let t2 = (self.c1 as u128) * (o.c1 as u128) % m;
        // x^2 = -a x - b
        let c0 = (t0 + t2 * ((m - b as u128) % m)) % m;
        let c1 = (t1 + t2 * ((m - a as u128) % m)) % m;
        WittElem { c0: c0 as u64, c1: c1 as u64, ..self }
    }

    pub fn scale(self, k: i64) -> WittElem {
        let m = self.pn();
        let k = (k.rem_euclid(m as i64)) as u128;
        let mm = m as u128;
        WittElem {
            c0: ((self.c0 as u128) * k % mm) as u64,
            c1: ((self.c1 as u128) * k % mm) as u64,
            ..self
        }
    }

    pub fn pow(self, e: u64) -> WittElem {
        let mut acc = WittElem { c0: 1, c1: 0, ..self };
        let mut base = self;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius lift: the unique nontrivial automorphism over Z_p.
    /// Sends x to -a - x; reduces to the p-power map on residues.
    pub fn frobenius(self) -> WittElem {
        // c0 + c1 x |-> c0 + c1(-a - x) = (c0 - a c1) - c1 x
        let m = self.pn() as u128;
        let a = self.modulus.0 as u128;
        let c1 = self.c1 as u128;
        let c0 = ((self.c0 as u128) + m - (a * c1 % m)) % m;
        WittElem { c0: c0 as u64, c1: ((m - c1) % m) as u64, ..self }
    }

    /// p-adic valuation, capped at the precision n. Returns n for 0.
    pub fn valuation(&self) -> u32 {
        if self.is_zero() {
            return self.n;
        }
        let mut v = 0;
        let mut c0 = self.c0;
        let mut c1 = self.c1;
        while v < self.n && c0 % self.p == 0 && c1 % self.p == 0 {
            c0 /= self.p;
            c1 /= self.p;
            v += 1;
        }
        v
    }

    /// True iff the element is a unit (nonzero mod p).
    pub fn is_unit(&self) -> bool {
        self.c0 % self.p != 0 || self.c1 % self.p != 0
    }

    /// Exact division by p^k; errors when the element is not divisible.
    /// The result keeps the same declared precision (digits above n - k are
    /// garbage-free only because callers divide exactly-divisible values).
    pub fn div_exact_p(self, k: u32) -> Result<WittElem> {
        if self.valuation() < k && !self.is_zero() {
            return Err(Error::Domain(format!(
                "element with valuation {} not divisible by p^{k}",
                self.valuation()
            )));
        }
        let pk = self.p.pow(k);
        Ok(WittElem { c0: self.c0 / pk, c1: self.c1 / pk, ..self })
    }

    pub fn inv(self) -> Result<WittElem> {
        if !self.is_unit() {
            return Err(Error::Singular);
        }
        // z^-1 = frob(z) / norm(z) with norm in Z_p.
        let conj = self.frobenius();
        let nrm = self.mul(conj);
        debug_assert_eq!(nrm.c1, 0);
        let m = self.pn();
        let ninv = mod_inverse(nrm.c0, m)?;
        Ok(conj.scale(ninv as i64))
    }

    /// Reduction mod p to the residue field.
    pub fn reduce(&self, cfg: &PrimeConfig) -> Fq2 {
        Fq2::new(cfg, (self.c0 % self.p) as i64, (self.c1 % self.p) as i64)
    }

    /// Equal at the declared precision (both operands share n).
    pub fn eq_at_precision(&self, o: &WittElem, digits: u32) -> bool {
        let pk = self.p.pow(digits.min(self.n));
        self.c0 % pk == o.c0 % pk && self.c1 % pk == o.c1 % pk
    }

    /// Little-endian p-digit arrays of the two coordinates.
    pub fn digits(&self) -> (Vec<u64>, Vec<u64>) {
        let mut d0 = Vec::new();
        let mut d1 = Vec::new();
        let (mut c0, mut c1) = (self.c0, self.c1);
        for _ in 0..self.n {
            d0.push(c0 % self.p);
            d1.push(c1 % self.p);
            c0 /= self.p;
            c1 /= self.p;
        }
        (d0, d1)
    }
}

fn mod_inverse(a: u64, m: u64) -> Result<u64> {
    // extended Euclid; m is a prime power and a is a unit mod p.
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::Singular);
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

/// The Teichmueller lift: for a != 0 the unique root of t^(p^2-1) = 1
/// reducing to a; teichmuller(0) = 0. Computed by iterating t -> t^(p^2),
/// which gains at least one p-digit per step.
pub fn teichmuller(cfg: &PrimeConfig, a: Fq2) -> WittElem {
    if a.is_zero() {
        return WittElem::zero(cfg);
    }
    let mut t = WittElem::new(cfg, a.c0 as i64, a.c1 as i64);
    for _ in 0..cfg.n {
        t = t.pow(cfg.p2());
    }
    t
}

/// All Teichmueller lifts t with t^(p+1) = -1, in ascending order of the
/// residue's flat index. There are exactly p+1 of them.
pub fn w1_candidates(cfg: &PrimeConfig) -> Vec<WittElem> {
    let mut out = Vec::new();
    let minus_one = Fq2::one(cfg).neg();
    for z in crate::arith::fp::all_fq2(cfg) {
        if !z.is_zero() && z.pow((cfg.p + 1) as i64) == minus_one {
            out.push(teichmuller(cfg, z));
        }
    }
    debug_assert_eq!(out.len(), (cfg.p + 1) as usize);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fp::{all_fq2, multiplicative_generator};

    #[test]
    fn teichmuller_identity_cases() {
        for p in [3u64, 5, 7] {
            let cfg = PrimeConfig::new(p, 4).unwrap();
            let one = teichmuller(&cfg, Fq2::one(&cfg));
            assert_eq!(one, WittElem::one(&cfg));
            let m1 = teichmuller(&cfg, Fq2::one(&cfg).neg());
            assert_eq!(m1, WittElem::one(&cfg).neg());
            assert_eq!(teichmuller(&cfg, Fq2::zero(&cfg)), WittElem::zero(&cfg));
        }
    }

    #[test]
    fn teichmuller_generator_p3() {
        // p = 3, N = 3: the lift of a generator of F_9^x satisfies t^8 = 1
        // exactly mod 27 (unramified), and t reduces to the generator.
        let cfg = PrimeConfig::new(3, 3).unwrap();
        let g = multiplicative_generator(&cfg);
        let t = teichmuller(&cfg, g);
        assert_eq!(t.pow(8), WittElem::one(&cfg));
        assert_eq!(t.reduce(&cfg), g);
        // Newton/Hensel uniqueness: no other 8th root of 1 reduces to g.
        let mut count = 0;
        for z in all_fq2(&cfg) {
            if z.is_zero() {
                continue;
            }
            let u = teichmuller(&cfg, z);
            if u.reduce(&cfg) == g {
                count += 1;
                assert_eq!(u, t);
            }
        }
        assert_eq!(count, 1);
    }

    #[test]
    fn teichmuller_multiplicative() {
        for p in [3u64, 5] {
            let cfg = PrimeConfig::new(p, 4).unwrap();
            for a in all_fq2(&cfg) {
                for b in [multiplicative_generator(&cfg), Fq2::new(&cfg, 1, 1)] {
                    let lhs = teichmuller(&cfg, a).mul(teichmuller(&cfg, b));
                    let rhs = teichmuller(&cfg, a.mul(b));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn frobenius_lift_properties() {
        for p in [3u64, 5, 7] {
            let cfg = PrimeConfig::new(p, 4).unwrap();
            for c0 in [0i64, 1, 2, 17, -5] {
                for c1 in [0i64, 1, 3, -7] {
                    let z = WittElem::new(&cfg, c0, c1);
                    // order 2
                    assert_eq!(z.frobenius().frobenius(), z);
                    // reduces to p-power on residues
                    assert_eq!(z.frobenius().reduce(&cfg), z.reduce(&cfg).frobenius());
                    // ring homomorphism
                    let w = WittElem::new(&cfg, 5, 11);
                    assert_eq!(z.mul(w).frobenius(), z.frobenius().mul(w.frobenius()));
                    assert_eq!(z.add(w).frobenius(), z.frobenius().add(w.frobenius()));
                }
            }
        }
    }

    #[test]
    fn w1_candidate_count_and_orders() {
        for p in [3u64, 5, 7] {
            let cfg = PrimeConfig::new(p, 4).unwrap();
            let cands = w1_candidates(&cfg);
            assert_eq!(cands.len(), (p + 1) as usize);
            for c in &cands {
                assert_eq!(c.pow(p + 1), WittElem::one(&cfg).neg());
                assert_eq!(c.pow(2 * (p + 1)), WittElem::one(&cfg));
            }
        }
    }

    #[test]
    fn units_invert() {
        let cfg = PrimeConfig::new(5, 4).unwrap();
        for c0 in 0..10i64 {
            for c1 in 0..10i64 {
                let z = WittElem::new(&cfg, c0, c1);
                if z.is_unit() {
                    assert_eq!(z.mul(z.inv().unwrap()), WittElem::one(&cfg));
                }
            }
        }
    }
}
