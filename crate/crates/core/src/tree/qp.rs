//! Scalars of Q_p with explicit precision semantics.
//!
//! A scalar is either an exact rational n / p^k (the common case for group
//! elements fed to the tree), or an approximate value p^val * unit with the
//! unit carried to a fixed number of significant digits, or an element of
//! p^k Z_p whose digits have all cancelled ("unknown"). Any operation that
//! needs a digit beyond the carried precision fails loudly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative precision carried by approximate scalars (p-digits).
pub const QP_DIGITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Qp {
    /// num / p^den_pow, exactly.
    Exact { p: u64, num: i64, den_pow: u32 },
    /// p^val * unit with unit a p-adic unit known modulo p^prec.
    Approx { p: u64, val: i64, unit: u64, prec: u32 },
    /// Unknown element of p^abs_prec Z_p.
    Unknown { p: u64, abs_prec: i64 },
}

impl Qp {
    fn pk(p: u64, k: u32) -> u64 {
        p.pow(k)
    }

    pub fn zero(p: u64) -> Qp {
        Qp::Exact { p, num: 0, den_pow: 0 }
    }

    pub fn one(p: u64) -> Qp {
        Qp::Exact { p, num: 1, den_pow: 0 }
    }

    pub fn from_int(p: u64, n: i64) -> Qp {
        Qp::Exact { p, num: n, den_pow: 0 }
    }

    /// n / p^k.
    pub fn from_int_div_p(p: u64, n: i64, k: u32) -> Qp {
        Qp::Exact { p, num: n, den_pow: k }.reduced()
    }

    pub fn p_pow(p: u64, k: i64) -> Qp {
        if k >= 0 {
            Qp::Exact { p, num: (p as i64).pow(k as u32), den_pow: 0 }
        } else {
            Qp::Exact { p, num: 1, den_pow: (-k) as u32 }
        }
    }

    pub fn p(&self) -> u64 {
        match *self {
            Qp::Exact { p, .. } | Qp::Approx { p, .. } | Qp::Unknown { p, .. } => p,
        }
    }

    fn reduced(self) -> Qp {
        match self {
            Qp::Exact { p, mut num, mut den_pow } => {
                if num == 0 {
                    return Qp::Exact { p, num: 0, den_pow: 0 };
                }
                while den_pow > 0 && num % p as i64 == 0 {
                    num /= p as i64;
                    den_pow -= 1;
                }
                Qp::Exact { p, num, den_pow }
            }
            z => z,
        }
    }

    /// Demote an exact value to the approximate representation.
    fn approx(self) -> Qp {
        match self {
            Qp::Exact { p, num, den_pow } => {
                if num == 0 {
                    // exact zero has no approximate form; callers guard this
                    return Qp::Exact { p, num: 0, den_pow: 0 };
                }
                let mut u = num.unsigned_abs();
                let mut val = -(den_pow as i64);
                while u % p == 0 {
                    u /= p;
                    val += 1;
                }
                let m = Self::pk(p, QP_DIGITS);
                let mut unit = (u as u128 % m as u128) as u64;
                if num < 0 {
                    unit = (m - unit) % m;
                }
                Qp::Approx { p, val, unit, prec: QP_DIGITS }
            }
            z => z,
        }
    }

    pub fn is_zero_exact(&self) -> bool {
        matches!(self, Qp::Exact { num: 0, .. })
    }

    /// The valuation, when decidable. Exact zero and unknowns are errors.
    pub fn valuation(&self) -> Result<i64> {
        match *self {
            Qp::Exact { p, num, den_pow } => {
                if num == 0 {
                    return Err(Error::Domain("valuation of exact zero".into()));
                }
                let mut v = -(den_pow as i64);
                let mut u = num.unsigned_abs();
                while u % p == 0 {
                    u /= p;
                    v += 1;
                }
                Ok(v)
            }
            Qp::Approx { val, .. } => Ok(val),
            Qp::Unknown { abs_prec, .. } => Err(Error::Precision {
                context: format!("valuation undecidable, element lies in p^{abs_prec} Z_p"),
                needed: QP_DIGITS + 1,
            }),
        }
    }

    /// Valuation with exact zero treated as +infinity (i64::MAX).
    pub fn valuation_or_inf(&self) -> Result<i64> {
        if self.is_zero_exact() {
            Ok(i64::MAX)
        } else {
            self.valuation()
        }
    }

    pub fn neg(self) -> Qp {
        match self {
            Qp::Exact { p, num, den_pow } => Qp::Exact { p, num: -num, den_pow },
            Qp::Approx { p, val, unit, prec } => {
                let m = Self::pk(p, prec);
                Qp::Approx { p, val, unit: (m - unit) % m, prec }
            }
            z => z,
        }
    }

    pub fn mul(self, o: Qp) -> Qp {
        let p = self.p();
        if self.is_zero_exact() || o.is_zero_exact() {
            return Qp::zero(p);
        }
        match (self, o) {
            (Qp::Exact { num: n1, den_pow: d1, .. }, Qp::Exact { num: n2, den_pow: d2, .. }) => {
                if let Some(num) = n1.checked_mul(n2) {
                    return Qp::Exact { p, num, den_pow: d1 + d2 }.reduced();
                }
                self.approx().mul(o.approx())
            }
            (Qp::Unknown { abs_prec, .. }, other) | (other, Qp::Unknown { abs_prec, .. }) => {
                match other.valuation() {
                    Ok(v) => Qp::Unknown { p, abs_prec: abs_prec + v },
                    Err(_) => {
                        // unknown * unknown
                        let b = match other {
                            Qp::Unknown { abs_prec, .. } => abs_prec,
                            _ => unreachable!(),
                        };
                        Qp::Unknown { p, abs_prec: abs_prec + b }
                    }
                }
            }
            _ => {
                let (a, b) = (self.approx(), o.approx());
                match (a, b) {
                    (
                        Qp::Approx { val: v1, unit: u1, prec: p1, .. },
                        Qp::Approx { val: v2, unit: u2, prec: p2, .. },
                    ) => {
                        let prec = p1.min(p2);
                        let m = Self::pk(p, prec) as u128;
                        let unit = ((u1 as u128 % m) * (u2 as u128 % m) % m) as u64;
                        Qp::Approx { p, val: v1 + v2, unit, prec }
                    }
                    _ => unreachable!(),
                }
            }
        }
    }

    pub fn inv(self) -> Result<Qp> {
        let p = self.p();
        match self {
            Qp::Exact { num: 0, .. } => Err(Error::Singular),
            Qp::Exact { num, den_pow, .. } => {
                // exact inverse exists when num = +/- p^t
                let v = self.valuation().unwrap();
                let sign = if num < 0 { -1 } else { 1 };
                if num.unsigned_abs() == (p as i64).pow((v + den_pow as i64) as u32) as u64 {
                    return Ok(Qp::Exact { p, num: sign, den_pow: 0 }
                        .mul(Qp::p_pow(p, -v)));
                }
                self.approx().inv()
            }
            Qp::Approx { val, unit, prec, .. } => {
                let m = Self::pk(p, prec);
                let unit = mod_inverse_pk(unit, m)?;
                Ok(Qp::Approx { p, val: -val, unit, prec })
            }
            Qp::Unknown { .. } => Err(Error::Precision {
                context: "inverting a value of undecided valuation".into(),
                needed: QP_DIGITS + 1,
            }),
        }
    }

    pub fn add(self, o: Qp) -> Qp {
        let p = self.p();
        if self.is_zero_exact() {
            return o;
        }
        if o.is_zero_exact() {
            return self;
        }
        match (self, o) {
            (Qp::Exact { num: n1, den_pow: d1, .. }, Qp::Exact { num: n2, den_pow: d2, .. }) => {
                let d = d1.max(d2);
                let s1 = (p as i64).checked_pow(d - d1);
                let s2 = (p as i64).checked_pow(d - d2);
                if let (Some(s1), Some(s2)) = (s1, s2) {
                    if let (Some(a), Some(b)) = (n1.checked_mul(s1), n2.checked_mul(s2)) {
                        if let Some(num) = a.checked_add(b) {
                            return Qp::Exact { p, num, den_pow: d }.reduced();
                        }
                    }
                }
                self.approx().add(o.approx())
            }
            (Qp::Unknown { abs_prec: a, .. }, Qp::Unknown { abs_prec: b, .. }) => {
                Qp::Unknown { p, abs_prec: a.min(b) }
            }
            (Qp::Unknown { abs_prec, .. }, v) | (v, Qp::Unknown { abs_prec, .. }) => {
                // keep the digits of v below abs_prec
                let va = v.approx();
                match va {
                    Qp::Approx { val, unit, prec, .. } => {
                        if val >= abs_prec {
                            Qp::Unknown { p, abs_prec }
                        } else {
                            let keep = (((abs_prec - val) as u64) as u32).min(prec);
                            Qp::Approx { p, val, unit: unit % Self::pk(p, keep), prec: keep }
                                .strip(abs_prec)
                        }
                    }
                    _ => Qp::Unknown { p, abs_prec },
                }
            }
            _ => {
                let (a, b) = (self.approx(), o.approx());
                match (a, b) {
                    (
                        Qp::Approx { val: v1, unit: u1, prec: p1, .. },
                        Qp::Approx { val: v2, unit: u2, prec: p2, .. },
                    ) => {
                        let (lo, ul, pl, hi, uh, ph) = if v1 <= v2 {
                            (v1, u1, p1, v2, u2, p2)
                        } else {
                            (v2, u2, p2, v1, u1, p1)
                        };
                        let abs = (lo + pl as i64).min(hi + ph as i64);
                        let prec = (abs - lo) as u32;
                        let shift = (hi - lo) as u32;
                        if shift >= prec {
                            return Qp::Approx {
                                p,
                                val: lo,
                                unit: ul % Self::pk(p, prec),
                                prec,
                            }
                            .strip(abs);
                        }
                        let m = Self::pk(p, prec) as u128;
                        let unit = ((ul as u128 % m)
                            + (Self::pk(p, shift) as u128 % m) * (uh as u128 % m))
                            % m;
                        Qp::Approx { p, val: lo, unit: unit as u64, prec }.strip(abs)
                    }
                    _ => unreachable!(),
                }
            }
        }
    }

    pub fn sub(self, o: Qp) -> Qp {
        self.add(o.neg())
    }

    /// Remove p-divisibility from the unit; degrade to Unknown when all
    /// carried digits have cancelled.
    fn strip(self, abs_prec: i64) -> Qp {
        match self {
            Qp::Approx { p, mut val, mut unit, mut prec } => {
                if unit == 0 {
                    return Qp::Unknown { p, abs_prec };
                }
                while unit % p == 0 {
                    unit /= p;
                    val += 1;
                    prec -= 1;
                    if prec == 0 {
                        return Qp::Unknown { p, abs_prec };
                    }
                }
                Qp::Approx { p, val, unit, prec }
            }
            z => z,
        }
    }

    /// The residue of a p-adic integer modulo p^k.
    pub fn residue_mod_pk(&self, k: u32) -> Result<u64> {
        let p = self.p();
        if k == 0 {
            return Ok(0);
        }
        let m = Self::pk(p, k);
        match *self {
            Qp::Exact { num, den_pow, .. } => {
                if num == 0 {
                    return Ok(0);
                }
                let mut n = num as i128;
                for _ in 0..den_pow {
                    if n % p as i128 != 0 {
                        return Err(Error::Domain("residue of a non-integral value".into()));
                    }
                    n /= p as i128;
                }
                Ok(n.rem_euclid(m as i128) as u64)
            }
            Qp::Unknown { abs_prec, .. } => {
                if abs_prec >= k as i64 {
                    Ok(0)
                } else {
                    Err(Error::Precision { context: "residue of undecided value".into(), needed: k })
                }
            }
            Qp::Approx { val, unit, prec, .. } => {
                if val < 0 {
                    return Err(Error::Domain("residue of a non-integral value".into()));
                }
                if val >= k as i64 {
                    return Ok(0);
                }
                let digits = k - val as u32;
                if digits > prec {
                    return Err(Error::Precision { context: "residue".into(), needed: digits });
                }
                Ok(unit % Self::pk(p, digits) * Self::pk(p, val as u32) % m)
            }
        }
    }

    /// Is this a p-adic integer? Errors when undecidable.
    pub fn is_integral(&self) -> Result<bool> {
        match self {
            Qp::Exact { num: 0, .. } => Ok(true),
            Qp::Unknown { abs_prec, .. } => {
                if *abs_prec >= 0 {
                    Ok(true)
                } else {
                    Err(Error::Precision { context: "integrality".into(), needed: QP_DIGITS })
                }
            }
            _ => Ok(self.valuation()? >= 0),
        }
    }
}

fn mod_inverse_pk(a: u64, m: u64) -> Result<u64> {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_cancellation() {
        let p = 3;
        let a = Qp::from_int(p, 6);
        assert!(a.add(a.neg()).is_zero_exact());
        assert_eq!(a.valuation().unwrap(), 1);
    }

    #[test]
    fn residues_and_negatives() {
        let p = 5;
        assert_eq!(Qp::from_int(p, -1).residue_mod_pk(2).unwrap(), 24);
        assert_eq!(Qp::from_int_div_p(p, 35, 1).residue_mod_pk(1).unwrap(), 2);
        assert!(Qp::from_int_div_p(p, 7, 1).residue_mod_pk(1).is_err());
    }

    #[test]
    fn mixed_precision() {
        let p = 3;
        // 1 + 3^19 - 1 resolves exactly
        let x = Qp::from_int(p, 1).add(Qp::p_pow(p, 19));
        let d = x.sub(Qp::from_int(p, 1));
        assert_eq!(d.valuation().unwrap(), 19);
        // inverse of a non-p-power is approximate but consistent
        let y = Qp::from_int(p, 7).inv().unwrap();
        let prod = y.mul(Qp::from_int(p, 7));
        assert_eq!(prod.residue_mod_pk(10).unwrap(), 1);
    }
}
