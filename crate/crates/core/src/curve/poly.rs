//! Polynomial carriers for the curve cohomology: Laurent polynomials in eta
//! over W = Z_{p^2}/p^N, and the localization at eta^p - eta used on the
//! chart that removes the edge points.

use std::collections::BTreeMap;

use crate::arith::fp::PrimeConfig;
use crate::arith::witt::WittElem;

/// Laurent polynomial in eta with WittElem coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentW {
    pub coeffs: BTreeMap<i64, WittElem>,
}

impl LaurentW {
    pub fn zero() -> Self {
        LaurentW { coeffs: BTreeMap::new() }
    }

    pub fn constant(w: WittElem) -> Self {
        let mut l = Self::zero();
        l.set(0, w);
        l
    }

    pub fn monomial(exp: i64, w: WittElem) -> Self {
        let mut l = Self::zero();
        l.set(exp, w);
        l
    }

    pub fn set(&mut self, exp: i64, w: WittElem) {
        if w.is_zero() {
            self.coeffs.remove(&exp);
        } else {
            self.coeffs.insert(exp, w);
        }
    }

    pub fn get(&self, exp: i64, cfg: &PrimeConfig) -> WittElem {
        self.coeffs.get(&exp).copied().unwrap_or_else(|| WittElem::zero(cfg))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &LaurentW) -> LaurentW {
        let mut out = self.clone();
        for (e, w) in &o.coeffs {
            let cur = out.coeffs.get(e).copied();
            match cur {
                Some(c) => out.set(*e, c.add(*w)),
                None => out.set(*e, *w),
            }
        }
        out
    }

    pub fn sub(&self, o: &LaurentW) -> LaurentW {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> LaurentW {
        LaurentW { coeffs: self.coeffs.iter().map(|(e, w)| (*e, w.neg())).collect() }
    }

    pub fn scale(&self, w: WittElem) -> LaurentW {
        let mut out = LaurentW::zero();
        for (e, c) in &self.coeffs {
            out.set(*e, c.mul(w));
        }
        out
    }

    pub fn mul(&self, o: &LaurentW) -> LaurentW {
        let mut out = LaurentW::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                let e = e1 + e2;
                let cur = out.coeffs.get(&e).copied();
                let add = c1.mul(*c2);
                match cur {
                    Some(c) => out.set(e, c.add(add)),
                    None => out.set(e, add),
                }
            }
        }
        out
    }

    /// Formal derivative d/d eta.
    pub fn derivative(&self) -> LaurentW {
        let mut out = LaurentW::zero();
        for (e, c) in &self.coeffs {
            if *e != 0 {
                out.set(*e - 1, c.scale(*e));
            }
        }
        out
    }

    /// Coefficient Frobenius plus eta -> eta^p.
    pub fn frobenius_substitute(&self) -> LaurentW {
        let mut out = LaurentW::zero();
        for (e, c) in &self.coeffs {
            out.set(*e * self.coeffs_p() as i64, c.frobenius());
        }
        out
    }

    fn coeffs_p(&self) -> u64 {
        self.coeffs.values().next().map(|w| w.p).unwrap_or(0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn has_negative_exp(&self) -> bool {
        self.min_exp().map_or(false, |e| e < 0)
    }

    /// The part with exponents satisfying the predicate.
    pub fn filter<F: Fn(i64) -> bool>(&self, pred: F) -> LaurentW {
        LaurentW {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| pred(**e))
                .map(|(e, w)| (*e, *w))
                .collect(),
        }
    }

    /// Reduce every coefficient to precision `digits` (drop what vanishes).
    pub fn truncate_precision(&self, cfg: &PrimeConfig, digits: u32) -> LaurentW {
        let pk = cfg.p.pow(digits.min(cfg.n));
        let mut out = LaurentW::zero();
        for (e, c) in &self.coeffs {
            let mut c = *c;
            c.c0 %= pk;
            c.c1 %= pk;
            out.set(*e, c);
        }
        out
    }
}

/// eta^p - eta as a Laurent polynomial.
pub fn eta_p_minus_eta(cfg: &PrimeConfig) -> LaurentW {
    let mut l = LaurentW::zero();
    l.set(cfg.p as i64, WittElem::one(cfg));
    l.set(1, WittElem::one(cfg).neg());
    l
}

/// (p eta^(p-1) - 1)^{-1} as a polynomial mod p^N (finite geometric series).
pub fn lead_unit_inverse(cfg: &PrimeConfig) -> LaurentW {
    // (p x - 1)^-1 = -(1 + p x + p^2 x^2 + ...) with x = eta^(p-1)
    let mut out = LaurentW::zero();
    let mut coeff = WittElem::one(cfg).neg();
    for n in 0..cfg.n as i64 {
        out.set(n * (cfg.p as i64 - 1), coeff);
        coeff = coeff.scale(cfg.p as i64);
    }
    out
}

/// Element of W[eta][1/(eta^p - eta)]: num / (eta^p - eta)^t with num a
/// plain polynomial (nonnegative exponents).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RElem {
    pub num: LaurentW,
    pub t: u32,
}

impl RElem {
    pub fn zero() -> Self {
        RElem { num: LaurentW::zero(), t: 0 }
    }

    pub fn from_poly(num: LaurentW) -> Self {
        debug_assert!(!num.has_negative_exp());
        RElem { num, t: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Convert a Laurent polynomial: eta^-1 = (eta^(p-1) - 1)/(eta^p - eta).
    pub fn from_laurent(cfg: &PrimeConfig, l: &LaurentW) -> RElem {
        let s = (-l.min_exp().unwrap_or(0)).max(0) as u32;
        if s == 0 {
            return RElem::from_poly(l.clone());
        }
        // multiply by (eta^p - eta)^s / (eta^p - eta)^s; numerator becomes
        // l * eta^s * (eta^(p-1) - 1)^s ... more directly: l * (eta^p-eta)^s
        // has nonnegative exponents since min_exp(l) >= -s.
        let mut num = l.clone();
        let d = eta_p_minus_eta(cfg);
        for _ in 0..s {
            num = num.mul(&d);
        }
        debug_assert!(!num.has_negative_exp());
        RElem { num, t: s }.normalize(cfg)
    }

    pub fn add(&self, o: &RElem, cfg: &PrimeConfig) -> RElem {
        let t = self.t.max(o.t);
        let d = eta_p_minus_eta(cfg);
        let mut a = self.num.clone();
        for _ in 0..(t - self.t) {
            a = a.mul(&d);
        }
        let mut b = o.num.clone();
        for _ in 0..(t - o.t) {
            b = b.mul(&d);
        }
        RElem { num: a.add(&b), t }.normalize(cfg)
    }

    pub fn sub(&self, o: &RElem, cfg: &PrimeConfig) -> RElem {
        self.add(&o.neg(), cfg)
    }

    pub fn neg(&self) -> RElem {
        RElem { num: self.num.neg(), t: self.t }
    }

    pub fn mul(&self, o: &RElem, cfg: &PrimeConfig) -> RElem {
        RElem { num: self.num.mul(&o.num), t: self.t + o.t }.normalize(cfg)
    }

    pub fn mul_laurent(&self, l: &LaurentW, cfg: &PrimeConfig) -> RElem {
        self.mul(&RElem::from_laurent(cfg, l), cfg)
    }

    pub fn scale(&self, w: WittElem) -> RElem {
        RElem { num: self.num.scale(w), t: self.t }
    }

    /// Remove common (eta^p - eta) factors when the division is exact.
    pub fn normalize(&self, cfg: &PrimeConfig) -> RElem {
        let mut cur = self.clone();
        if cur.num.is_zero() {
            return RElem::zero();
        }
        let d = eta_p_minus_eta(cfg);
        while cur.t > 0 {
            match poly_divrem(cfg, &cur.num, &d) {
                Some((q, r)) if r.is_zero() => {
                    cur = RElem { num: q, t: cur.t - 1 };
                }
                _ => break,
            }
        }
        cur
    }

    /// Window coordinates: pole parts r_s (degree < p) for s = 1..t, plus the
    /// polynomial part. Keys: (s, a) with s = 0 for the polynomial part.
    pub fn window_coords(&self, cfg: &PrimeConfig) -> BTreeMap<(u32, i64), WittElem> {
        let mut out = BTreeMap::new();
        let d = eta_p_minus_eta(cfg);
        let mut cur = self.num.clone();
        for s in (1..=self.t).rev() {
            let (q, r) = poly_divrem(cfg, &cur, &d).expect("monic divisor");
            for (a, w) in &r.coeffs {
                out.insert((s, *a), *w);
            }
            cur = q;
        }
        for (a, w) in &cur.coeffs {
            out.insert((0, *a), *w);
        }
        out
    }
}

/// Division with remainder by a monic polynomial (here eta^p - eta).
pub fn poly_divrem(
    cfg: &PrimeConfig,
    num: &LaurentW,
    den: &LaurentW,
) -> Option<(LaurentW, LaurentW)> {
    if num.has_negative_exp() {
        return None;
    }
    let dd = den.max_exp()?;
    debug_assert_eq!(den.get(dd, cfg), WittElem::one(cfg), "divisor must be monic");
    let mut rem = num.clone();
    let mut quot = LaurentW::zero();
    while let Some(top) = rem.max_exp() {
        if top < dd {
            break;
        }
        let c = rem.get(top, cfg);
        let shift = top - dd;
        quot.set(shift, quot.get(shift, cfg).add(c));
        for (e, w) in den.coeffs.clone() {
            let cur = rem.get(e + shift, cfg);
            rem.set(e + shift, cur.sub(w.mul(c)));
        }
    }
    Some((quot, rem))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(cfg: &PrimeConfig, v: i64) -> WittElem {
        WittElem::from_int(cfg, v)
    }

    #[test]
    fn divrem_roundtrip() {
        let cfg = PrimeConfig::new(3, 3).unwrap();
        let d = eta_p_minus_eta(&cfg);
        let mut num = LaurentW::zero();
        for (e, c) in [(0, 2), (1, 5), (4, 1), (7, 3)] {
            num.set(e, w(&cfg, c));
        }
        let (q, r) = poly_divrem(&cfg, &num, &d).unwrap();
        assert!(r.max_exp().unwrap_or(-1) < 3);
        assert_eq!(q.mul(&d).add(&r), num);
    }

    #[test]
    fn laurent_to_relem() {
        let cfg = PrimeConfig::new(3, 3).unwrap();
        let l = LaurentW::monomial(-2, w(&cfg, 1)).add(&LaurentW::monomial(1, w(&cfg, 4)));
        let r = RElem::from_laurent(&cfg, &l);
        // multiply back: r.num should equal l * (eta^p - eta)^t
        let d = eta_p_minus_eta(&cfg);
        let mut rhs = l.clone();
        for _ in 0..r.t {
            rhs = rhs.mul(&d);
        }
        assert!(!r.num.has_negative_exp());
        assert_eq!(r.num, rhs);
    }

    #[test]
    fn window_coordinates_faithful() {
        let cfg = PrimeConfig::new(3, 3).unwrap();
        let d = eta_p_minus_eta(&cfg);
        // build (eta + 2)/(d)^2 + eta^4 and check coordinates reassemble
        let num = LaurentW::monomial(1, w(&cfg, 1))
            .add(&LaurentW::constant(w(&cfg, 2)))
            .add(&LaurentW::monomial(4, w(&cfg, 1)).mul(&d).mul(&d));
        let r = RElem { num, t: 2 };
        let coords = r.window_coords(&cfg);
        // reassemble
        let mut acc = RElem::zero();
        for ((s, a), c) in &coords {
            let term = if *s == 0 {
                RElem::from_poly(LaurentW::monomial(*a, *c))
            } else {
                RElem { num: LaurentW::monomial(*a, *c), t: *s }
            };
            acc = acc.add(&term, &cfg);
        }
        let diff = acc.sub(&r, &cfg);
        assert!(diff.is_zero());
    }

    #[test]
    fn lead_unit_inverse_is_inverse() {
        let cfg = PrimeConfig::new(5, 4).unwrap();
        let inv = lead_unit_inverse(&cfg);
        let mut lead = LaurentW::zero();
        lead.set(cfg.p as i64 - 1, w(&cfg, cfg.p as i64));
        lead.set(0, w(&cfg, -1));
        let prod = inv.mul(&lead);
        // equals 1 modulo p^N
        assert_eq!(prod.get(0, &cfg), WittElem::one(&cfg));
        for (e, c) in &prod.coeffs {
            if *e != 0 {
                assert!(c.is_zero(), "residual term at {e}: {c:?}");
            }
        }
    }
}
