//! The totally ramified extension O_F = Z_{p^2}[pi]/(pi^(p^2-1) + p).
//!
//! Elements are polynomials in pi of degree < p^2 - 1 with `WittElem`
//! coefficients; the relation pi^(p^2-1) = -p is applied on reduction.
//! The normalized valuation gives v(pi) = 1, v(p) = p^2 - 1.

use serde::{Deserialize, Serialize};

use crate::arith::fp::{Fq2, PrimeConfig};
use crate::arith::witt::{teichmuller, WittElem};
use crate::error::{Error, Result};

/// Element of O_F modulo pi^K (K = N * (p^2 - 1)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EisensteinElem {
    /// Coefficient of pi^k at index k, length exactly p^2 - 1.
    pub coeffs: Vec<WittElem>,
    pub p: u64,
}

impl EisensteinElem {
    pub fn zero(cfg: &PrimeConfig) -> Self {
        EisensteinElem {
            coeffs: vec![WittElem::zero(cfg); (cfg.p2() - 1) as usize],
            p: cfg.p,
        }
    }

    pub fn one(cfg: &PrimeConfig) -> Self {
        let mut z = Self::zero(cfg);
        z.coeffs[0] = WittElem::one(cfg);
        z
    }

    pub fn from_witt(cfg: &PrimeConfig, w: WittElem) -> Self {
        let mut z = Self::zero(cfg);
        z.coeffs[0] = w;
        z
    }

    /// pi^k for 0 <= k; multiples of p^2 - 1 fold into powers of -p.
    pub fn pi_pow(cfg: &PrimeConfig, k: u64) -> Self {
        let e = (cfg.p2() - 1) as u64;
        let q = k / e;
        let r = (k % e) as usize;
        let mut z = Self::zero(cfg);
        let mut c = WittElem::one(cfg);
        for _ in 0..q {
            c = c.scale(-(cfg.p as i64));
        }
        z.coeffs[r] = c;
        z
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &EisensteinElem) -> EisensteinElem {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a.add(*b))
            .collect();
        EisensteinElem { coeffs, p: self.p }
    }

    pub fn sub(&self, o: &EisensteinElem) -> EisensteinElem {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| a.sub(*b))
            .collect();
        EisensteinElem { coeffs, p: self.p }
    }

    pub fn neg(&self) -> EisensteinElem {
        EisensteinElem { coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), p: self.p }
    }

    pub fn mul(&self, o: &EisensteinElem) -> EisensteinElem {
        let e = self.coeffs.len();
        let zero = self.coeffs[0].sub(self.coeffs[0]);
        let mut acc = vec![zero; 2 * e];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc[i + j] = acc[i + j].add(a.mul(*b));
            }
        }
        // pi^(e + k) = -p * pi^k
        let mut coeffs: Vec<WittElem> = acc[..e].to_vec();
        for k in 0..e {
            let hi = acc[e + k];
            if !hi.is_zero() {
                coeffs[k] = coeffs[k].add(hi.scale(-(self.p as i64)));
            }
        }
        EisensteinElem { coeffs, p: self.p }
    }

    pub fn scale_witt(&self, w: WittElem) -> EisensteinElem {
        EisensteinElem { coeffs: self.coeffs.iter().map(|c| c.mul(w)).collect(), p: self.p }
    }

    /// Normalized valuation: v(pi) = 1, capped at the precision K.
    pub fn valuation(&self, cfg: &PrimeConfig) -> u32 {
        let e = cfg.p2() as u32 - 1;
        let mut best = cfg.k;
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let v = k as u32 + e * c.valuation();
                best = best.min(v);
            }
        }
        best
    }

    /// Multiply by pi^k (k >= 0).
    pub fn mul_pi_pow(&self, cfg: &PrimeConfig, k: u64) -> EisensteinElem {
        self.mul(&Self::pi_pow(cfg, k))
    }

    /// Exact division by pi^k. Errors when the valuation is too small.
    pub fn div_pi_pow(&self, cfg: &PrimeConfig, k: u64) -> Result<EisensteinElem> {
        let e = (cfg.p2() - 1) as u64;
        let mut cur = self.clone();
        let mut k = k;
        // divide p-powers first when k >= e: pi^e = -p
        while k >= e {
            cur = cur.neg().div_p(cfg)?;
            k -= e;
        }
        if k == 0 {
            return Ok(cur);
        }
        // shift down by k: coefficients 0..k must vanish, and the top fills
        // from the p-divisible part via pi^e = -p.
        let k = k as usize;
        for c in &cur.coeffs[..k] {
            if !c.is_zero() {
                return Err(Error::Domain("division by pi^k with insufficient valuation".into()));
            }
        }
        let mut coeffs = vec![WittElem::zero(cfg); e as usize];
        for i in k..e as usize {
            coeffs[i - k] = cur.coeffs[i];
        }
        // there is no carry: elements are truncated at pi^K, so the digits
        // entering from above are zero by convention.
        Ok(EisensteinElem { coeffs, p: self.p })
    }

    fn div_p(&self, _cfg: &PrimeConfig) -> Result<EisensteinElem> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.div_exact_p(1))
            .collect::<Result<Vec<_>>>()?;
        Ok(EisensteinElem { coeffs, p: self.p })
    }

    /// Inverse of a unit (valuation 0 element).
    pub fn inv(&self, cfg: &PrimeConfig) -> Result<EisensteinElem> {
        if !self.coeffs[0].is_unit() {
            return Err(Error::Singular);
        }
        // Newton iteration: z_{k+1} = z_k (2 - a z_k) converges pi-adically.
        let mut z = Self::from_witt(cfg, self.coeffs[0].inv()?);
        let two = Self::from_witt(cfg, WittElem::from_int(cfg, 2));
        // K doublings are more than enough.
        let mut steps = 1u32;
        while steps < cfg.k {
            z = z.mul(&two.sub(&self.mul(&z)));
            steps *= 2;
        }
        Ok(z)
    }

    /// Reduction modulo pi to the residue field F_{p^2}.
    pub fn reduce(&self, cfg: &PrimeConfig) -> Fq2 {
        self.coeffs[0].reduce(cfg)
    }

    /// Equality at a given pi-adic precision.
    pub fn eq_at_pi_precision(&self, cfg: &PrimeConfig, o: &EisensteinElem, prec: u32) -> bool {
        self.sub(o).valuation(cfg) >= prec.min(cfg.k)
    }

    /// The F_0-linear Galois action of Gal(F/F_0) = mu_{p^2-1}: sends
    /// pi -> zeta^g_index * pi, where zeta is the Teichmueller lift of the
    /// fixed multiplicative generator.
    pub fn galois_act(&self, cfg: &PrimeConfig, g_index: u64) -> EisensteinElem {
        let zeta = omega2_value(cfg, g_index);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut zk = WittElem::one(cfg);
        for c in &self.coeffs {
            coeffs.push(c.mul(zk));
            zk = zk.mul(zeta);
        }
        EisensteinElem { coeffs, p: self.p }
    }

    /// The element g_phi of Gal(F/Q_p): fixes pi, acts as the Frobenius lift
    /// on the Witt coefficients.
    pub fn g_phi(&self) -> EisensteinElem {
        EisensteinElem { coeffs: self.coeffs.iter().map(|c| c.frobenius()).collect(), p: self.p }
    }
}

/// omega2 evaluated at the group element indexed by g_index: the Teichmueller
/// lift of gen^g_index, so that composition corresponds to index addition.
pub fn omega2_value(cfg: &PrimeConfig, g_index: u64) -> WittElem {
    let gen = crate::arith::fp::multiplicative_generator(cfg);
    teichmuller(cfg, gen.pow(g_index as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_power_relation() {
        let cfg = PrimeConfig::new(3, 4).unwrap();
        let e = (cfg.p2() - 1) as u64;
        let pi = EisensteinElem::pi_pow(&cfg, 1);
        let mut z = EisensteinElem::one(&cfg);
        for _ in 0..e {
            z = z.mul(&pi);
        }
        let minus_p = EisensteinElem::from_witt(&cfg, WittElem::from_int(&cfg, -3));
        assert_eq!(z, minus_p);
        assert_eq!(z.valuation(&cfg), e as u32);
    }

    #[test]
    fn galois_action_rules() {
        let cfg = PrimeConfig::new(3, 3).unwrap();
        let pi = EisensteinElem::pi_pow(&cfg, 1);
        // identity element acts trivially
        assert_eq!(pi.galois_act(&cfg, 0), pi);
        // pi |-> omega2(g) pi by definition
        let g = 3u64;
        let lhs = pi.galois_act(&cfg, g);
        let rhs = pi.scale_witt(omega2_value(&cfg, g));
        assert_eq!(lhs, rhs);
        // -p = pi^(p^2-1) is rational, fixed by everything
        let mp = EisensteinElem::from_witt(&cfg, WittElem::from_int(&cfg, -3));
        for g in 0..8 {
            assert_eq!(mp.galois_act(&cfg, g), mp);
        }
        // composition law = index addition
        let z = EisensteinElem::pi_pow(&cfg, 5).add(&EisensteinElem::one(&cfg));
        assert_eq!(z.galois_act(&cfg, 3).galois_act(&cfg, 6), z.galois_act(&cfg, (3 + 6) % 8));
    }

    #[test]
    fn valuation_additive_and_inverse() {
        let cfg = PrimeConfig::new(3, 4).unwrap();
        let a = EisensteinElem::pi_pow(&cfg, 3).add(&EisensteinElem::pi_pow(&cfg, 5));
        let b = EisensteinElem::pi_pow(&cfg, 2).scale_witt(WittElem::from_int(&cfg, 2));
        assert_eq!(a.valuation(&cfg), 3);
        assert_eq!(b.valuation(&cfg), 2);
        assert_eq!(a.mul(&b).valuation(&cfg), 5);

        let u = EisensteinElem::one(&cfg).add(&EisensteinElem::pi_pow(&cfg, 1));
        let ui = u.inv(&cfg).unwrap();
        // units invert exactly at full precision
        assert_eq!(u.mul(&ui), EisensteinElem::one(&cfg));
    }

    #[test]
    fn division_by_pi() {
        let cfg = PrimeConfig::new(3, 4).unwrap();
        let z = EisensteinElem::pi_pow(&cfg, 7);
        let w = z.div_pi_pow(&cfg, 7).unwrap();
        assert_eq!(w, EisensteinElem::one(&cfg));
        let err = EisensteinElem::one(&cfg).div_pi_pow(&cfg, 1);
        assert!(err.is_err());
    }
}
