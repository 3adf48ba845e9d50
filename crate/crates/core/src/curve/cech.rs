//! The Artin-Schreier curves e^(p+1) = c (eta^p - eta), their Cech
//! hypercocycles on the two-chart covering, and the isotypic bases of
//! H^0(Omega^1) and H^1(O).
//!
//! Chart V_0 is the complement of the point at infinity, with coordinate
//! ring W[eta, e]/(relation); chart V_inf is the complement of (0,0). In the
//! primed coordinates eta' = 1/eta, e' = e/eta the second chart carries the
//! same kind of curve with constant -c. Every object in the mu_{p+1}-isotypic
//! block i is (Laurent coefficient) * e^k0 * de/e with k0 = p + 1 - i.


use crate::arith::fp::{Fq2, PrimeConfig};
use crate::arith::witt::{teichmuller, WittElem};
use crate::curve::poly::{eta_p_minus_eta, lead_unit_inverse, LaurentW, RElem};
use crate::error::{Error, Result};

/// Which curve of the family: an isotypic component label xi with
/// xi^(p-1) = -1 and the end-parity convention fixing the constant c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSpec {
    pub cfg: PrimeConfig,
    pub xi_index: usize,
    pub xi: Fq2,
    /// Fixed (p-1)-th root of -1 (Teichmueller lift).
    pub v1: WittElem,
    /// The unit with w1^(p+1) = -1 picked by calibration.
    pub w1: WittElem,
    /// Even-vertex convention: c = v1 w1^-1 xi; odd: c = v1^-1 w1 xi.
    pub even: bool,
    pub c: WittElem,
}

impl CurveSpec {
    pub fn new(cfg: &PrimeConfig, w1: WittElem, xi_index: usize, even: bool) -> Result<Self> {
        let labels = crate::tree::chart::component_labels(cfg);
        let xi = *labels
            .get(xi_index)
            .ok_or_else(|| Error::InvalidParameter(format!("xi index {xi_index} out of range")))?;
        let v1 = teichmuller(cfg, labels[0]);
        let xi_lift = teichmuller(cfg, xi);
        let c = if even {
            v1.mul(w1.inv()?).mul(xi_lift)
        } else {
            v1.inv()?.mul(w1).mul(xi_lift)
        };
        Ok(CurveSpec { cfg: *cfg, xi_index, xi, v1, w1, even, c })
    }

    pub fn genus(&self) -> u64 {
        self.cfg.p * (self.cfg.p - 1) / 2
    }

    /// The block weight k0 = p + 1 - i of the chi^(-i)-isotypic component.
    pub fn k0(&self, i: u64) -> u64 {
        self.cfg.p + 1 - i
    }
}

/// d log eta as a multiple of de/e: Lambda = (p+1)(p eta^(p-1) - 1)^-1 (eta^(p-1) - 1).
pub fn dlog_eta(cfg: &PrimeConfig) -> LaurentW {
    let mut em1 = LaurentW::zero();
    em1.set(cfg.p as i64 - 1, WittElem::one(cfg));
    em1.set(0, WittElem::one(cfg).neg());
    lead_unit_inverse(cfg)
        .mul(&em1)
        .scale(WittElem::from_int(cfg, cfg.p as i64 + 1))
}

/// d(g * e^k0) as (coefficient of e^k0 de/e), for Laurent g.
pub fn d_fn(cfg: &PrimeConfig, k0: u64, g: &LaurentW) -> LaurentW {
    // g'(eta) (p+1)(p eta^(p-1)-1)^-1 (eta^p - eta) + k0 g
    let lead_inv = lead_unit_inverse(cfg);
    let term1 = g
        .derivative()
        .mul(&lead_inv)
        .mul(&eta_p_minus_eta(cfg))
        .scale(WittElem::from_int(cfg, cfg.p as i64 + 1));
    term1.add(&g.scale(WittElem::from_int(cfg, k0 as i64)))
}

/// d(q * e^k0) for q in the localized ring.
pub fn d_fn_r(cfg: &PrimeConfig, k0: u64, q: &RElem) -> RElem {
    let p1 = WittElem::from_int(cfg, cfg.p as i64 + 1);
    let lead_inv = lead_unit_inverse(cfg);
    // (p+1)(lead)^-1 num' (eta^p-eta)^(1-t)
    let dnum = q.num.derivative().mul(&lead_inv).scale(p1);
    let term1 = if q.t == 0 {
        RElem::from_poly(dnum.mul(&eta_p_minus_eta(cfg)))
    } else {
        RElem { num: dnum, t: q.t - 1 }
    };
    // (k0 - t(p+1)) num (eta^p-eta)^(-t)
    let s = WittElem::from_int(cfg, k0 as i64 - (q.t as i64) * (cfg.p as i64 + 1));
    let term2 = RElem { num: q.num.scale(s), t: q.t };
    term1.add(&term2, cfg).normalize(cfg)
}

/// Rewrite a block-k0 form written on the unprimed chart into the primed
/// coordinates: Q(eta) e^k0 de/e = Q(1/eta') eta'^(-k0) (1 - Lambda(eta'))
/// e'^k0 de'/e'.
pub fn form_to_primed(cfg: &PrimeConfig, k0: u64, coeff: &LaurentW) -> LaurentW {
    let mut inverted = LaurentW::zero();
    for (e, w) in &coeff.coeffs {
        inverted.set(-e, *w);
    }
    let mut one_minus_lambda = LaurentW::constant(WittElem::one(cfg));
    one_minus_lambda = one_minus_lambda.sub(&dlog_eta(cfg));
    inverted
        .mul(&LaurentW::monomial(-(k0 as i64), WittElem::one(cfg)))
        .mul(&one_minus_lambda)
}

/// Functions transform without the Lambda factor.
pub fn fn_to_primed(cfg: &PrimeConfig, k0: u64, g: &LaurentW) -> LaurentW {
    let mut inverted = LaurentW::zero();
    for (e, w) in &g.coeffs {
        inverted.set(-e, *w);
    }
    inverted.mul(&LaurentW::monomial(-(k0 as i64), WittElem::one(cfg)))
}

/// A class of the two-chart Cech model in the isotypic block i. Either an
/// honest 1-hypercocycle (omega_0 - omega_inf = d f on the overlap), or a
/// structure-sheaf cocycle carried by f alone with both omegas zero; the
/// hypercocycle completion is recomputed on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CechClass {
    pub i: u64,
    pub k0: u64,
    /// Coefficient of e^k0 de/e on V_0 (nonnegative exponents).
    pub omega0: LaurentW,
    /// Coefficient of e^k0 de/e for the V_inf form, written on the unprimed
    /// chart (conversion checks regularity).
    pub omega_inf: LaurentW,
    /// Overlap function coefficient of e^k0.
    pub f: LaurentW,
}

impl CechClass {
    pub fn zero(i: u64, k0: u64) -> Self {
        CechClass {
            i,
            k0,
            omega0: LaurentW::zero(),
            omega_inf: LaurentW::zero(),
            f: LaurentW::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.omega0.is_zero() && self.omega_inf.is_zero() && self.f.is_zero()
    }

    pub fn add(&self, o: &CechClass) -> CechClass {
        assert_eq!((self.i, self.k0), (o.i, o.k0));
        CechClass {
            i: self.i,
            k0: self.k0,
            omega0: self.omega0.add(&o.omega0),
            omega_inf: self.omega_inf.add(&o.omega_inf),
            f: self.f.add(&o.f),
        }
    }

    pub fn scale(&self, w: WittElem) -> CechClass {
        CechClass {
            i: self.i,
            k0: self.k0,
            omega0: self.omega0.scale(w),
            omega_inf: self.omega_inf.scale(w),
            f: self.f.scale(w),
        }
    }

    /// The hypercocycle identity at working precision, together with chart
    /// regularity. Regularity of omega_inf is checked on the special fibre:
    /// integral lifts of holomorphic forms acquire p-divisible tails at
    /// infinity, so the honest integral statement lives in the completed
    /// classes produced by the reduction engine.
    pub fn is_hypercocycle(&self, spec: &CurveSpec) -> bool {
        let cfg = &spec.cfg;
        let df = d_fn(cfg, self.k0, &self.f);
        let diff = self.omega0.sub(&self.omega_inf).sub(&df);
        diff.is_zero()
            && !self.omega0.has_negative_exp()
            && !form_to_primed(cfg, self.k0, &self.omega_inf)
                .truncate_precision(cfg, 1)
                .has_negative_exp()
    }

    /// Full integral chart regularity (used for engine-produced completions).
    pub fn is_integral_hypercocycle(&self, spec: &CurveSpec) -> bool {
        let cfg = &spec.cfg;
        let df = d_fn(cfg, self.k0, &self.f);
        let diff = self.omega0.sub(&self.omega_inf).sub(&df);
        diff.is_zero()
            && !self.omega0.has_negative_exp()
            && !form_to_primed(cfg, self.k0, &self.omega_inf).has_negative_exp()
    }

    /// A pure structure-sheaf cocycle: both forms zero.
    pub fn is_f_cocycle(&self) -> bool {
        self.omega0.is_zero() && self.omega_inf.is_zero()
    }
}

/// The holomorphic basis of the block i: eta^r e^(p+1-i) de/e, r = 0..i-2.
/// Empty for i = 1 (the zero space convention).
pub fn h0_basis(spec: &CurveSpec, i: u64) -> Result<Vec<CechClass>> {
    let p = spec.cfg.p;
    if i < 1 || i > p {
        return Err(Error::InvalidParameter(format!("isotypic label i = {i} out of 1..=p")));
    }
    let k0 = spec.k0(i);
    let mut out = Vec::new();
    if i < 2 {
        return Ok(out);
    }
    for r in 0..=(i - 2) {
        let coeff = LaurentW::monomial(r as i64, WittElem::one(&spec.cfg));
        out.push(CechClass {
            i,
            k0,
            omega0: coeff.clone(),
            omega_inf: coeff,
            f: LaurentW::zero(),
        });
    }
    Ok(out)
}

/// The H^1(O) basis of the block i: pure cocycles e^(p+1-i)/eta^k,
/// k = 1..p-i. Empty for i = p.
pub fn h1o_basis(spec: &CurveSpec, i: u64) -> Result<Vec<CechClass>> {
    let p = spec.cfg.p;
    if i < 1 || i > p {
        return Err(Error::InvalidParameter(format!("isotypic label i = {i} out of 1..=p")));
    }
    let k0 = spec.k0(i);
    let mut out = Vec::new();
    for k in 1..=(p - i) {
        out.push(CechClass {
            i,
            k0,
            omega0: LaurentW::zero(),
            omega_inf: LaurentW::zero(),
            f: LaurentW::monomial(-(k as i64), WittElem::one(&spec.cfg)),
        });
    }
    Ok(out)
}

/// Convert a star-cover structure cocycle supported at the vertex above
/// eta = 0, with potential e^(-i) u(eta) (u regular at 0), into a two-chart
/// cocycle. Mod-p computation: relies on the partial fraction
/// u/(eta^p - eta) = -u(0)/eta + (regular at the other edge points).
pub fn star_to_two_chart(spec: &CurveSpec, i: u64, u: &LaurentW) -> Result<CechClass> {
    let cfg = &spec.cfg;
    if u.has_negative_exp() {
        return Err(Error::Domain("potential must be regular at eta = 0".into()));
    }
    let k0 = spec.k0(i);
    let a = u.get(0, cfg).neg(); // residue-style constant: A = -u(0)
    // f = -(A / c) eta^-1 e^k0
    let coeff = a.neg().mul(spec.c.inv()?);
    Ok(CechClass {
        i,
        k0,
        omega0: LaurentW::zero(),
        omega_inf: LaurentW::zero(),
        f: LaurentW::monomial(-1, coeff).truncate_precision(cfg, 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec3() -> CurveSpec {
        let cfg = PrimeConfig::new(3, 3).unwrap();
        let w1 = crate::arith::witt::w1_candidates(&cfg)[0];
        CurveSpec::new(&cfg, w1, 0, true).unwrap()
    }

    #[test]
    fn basis_dimensions() {
        let spec = spec3();
        let p = spec.cfg.p;
        let mut total_h0 = 0;
        let mut total_h1 = 0;
        for i in 1..=p {
            let h0 = h0_basis(&spec, i).unwrap();
            let h1 = h1o_basis(&spec, i).unwrap();
            assert_eq!(h0.len() as u64, i - 1);
            assert_eq!(h1.len() as u64, p - i);
            if i <= p - 1 {
                assert_eq!((h0.len() + h1.len()) as u64, p - 1);
            }
            total_h0 += h0.len();
            total_h1 += h1.len();
        }
        assert_eq!(total_h0 as u64, spec.genus());
        assert_eq!(total_h1 as u64, spec.genus());
        // i = 1 has no holomorphic part, i = p no H^1(O) part
        assert!(h0_basis(&spec, 1).unwrap().is_empty());
        assert!(h1o_basis(&spec, p).unwrap().is_empty());
    }

    #[test]
    fn holomorphic_classes_are_hypercocycles() {
        let spec = spec3();
        for i in 2..=spec.cfg.p {
            for cls in h0_basis(&spec, i).unwrap() {
                assert!(cls.is_hypercocycle(&spec));
            }
        }
        for i in 1..=(spec.cfg.p - 1) {
            for cls in h1o_basis(&spec, i).unwrap() {
                assert!(cls.is_f_cocycle());
            }
        }
    }

    #[test]
    fn kex_conversion() {
        // the star cocycle with potential e^-i at the eta = 0 vertex becomes
        // e^(p+1-i)/(c eta) on the two-chart cover
        let spec = spec3();
        let cfg = spec.cfg;
        for i in 1..=(cfg.p - 1) {
            let cls = star_to_two_chart(&spec, i, &LaurentW::constant(WittElem::one(&cfg)))
                .unwrap();
            let expect = LaurentW::monomial(-1, spec.c.inv().unwrap())
                .truncate_precision(&cfg, 1);
            assert_eq!(cls.f, expect);
        }
    }

    #[test]
    fn d_fn_matches_relem_version() {
        let cfg = PrimeConfig::new(3, 3).unwrap();
        let g = LaurentW::monomial(2, WittElem::from_int(&cfg, 1))
            .add(&LaurentW::monomial(0, WittElem::from_int(&cfg, 5)));
        let a = d_fn(&cfg, 2, &g);
        let b = d_fn_r(&cfg, 2, &RElem::from_poly(g.clone()));
        let diff = RElem::from_laurent(&cfg, &a).sub(&b, &cfg);
        assert!(diff.is_zero(), "{diff:?}");
    }
}
