//! Rank-2 filtered modules with Frobenius, Galois action and filtration
//! parameter: construction, the Fil^1 membership criterion, weak
//! admissibility, and the parameter duality.
//!
//! Coefficients: E = Q_{p^2} with O_E = Z_{p^2}, tau the identity embedding.
//! F (x) E is modelled as a product of two copies of F indexed by the
//! embeddings of E, x (x) y -> (x psi1(y), x psi2(y)) with psi2 = psi1 . sigma;
//! elements are pairs of Eisenstein elements. F_0 (x) E embeds componentwise
//! as pairs of Witt elements.

use serde::Serialize;

use crate::arith::charspec::CharSpec;
use crate::arith::eisenstein::{omega2_value, EisensteinElem};
use crate::arith::fp::PrimeConfig;
use crate::arith::witt::WittElem;
use crate::error::{Error, Result};

/// Element of F (x) E as a pair of Eisenstein components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FE {
    pub a: EisensteinElem,
    pub b: EisensteinElem,
}

impl FE {
    pub fn zero(cfg: &PrimeConfig) -> Self {
        FE { a: EisensteinElem::zero(cfg), b: EisensteinElem::zero(cfg) }
    }

    pub fn one(cfg: &PrimeConfig) -> Self {
        FE { a: EisensteinElem::one(cfg), b: EisensteinElem::one(cfg) }
    }

    /// x (x) 1 for x in F.
    pub fn from_f(x: &EisensteinElem) -> Self {
        FE { a: x.clone(), b: x.clone() }
    }

    /// 1 (x) y for y in E: components (y, sigma(y)).
    pub fn from_e(cfg: &PrimeConfig, y: WittElem) -> Self {
        FE {
            a: EisensteinElem::from_witt(cfg, y),
            b: EisensteinElem::from_witt(cfg, y.frobenius()),
        }
    }

    pub fn add(&self, o: &FE) -> FE {
        FE { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &FE) -> FE {
        FE { a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn mul(&self, o: &FE) -> FE {
        FE { a: self.a.mul(&o.a), b: self.b.mul(&o.b) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// g_phi (x) 1: fixes pi, Frobenius on Witt coefficients, swaps the
    /// E-embedding components.
    pub fn g_phi(&self) -> FE {
        FE { a: self.b.g_phi(), b: self.a.g_phi() }
    }

    /// 1 (x) sigma_E: swaps the components.
    pub fn e_conj(&self) -> FE {
        FE { a: self.b.clone(), b: self.a.clone() }
    }

    /// The action of Gal(F/F_0) indexed by t (pi -> omega2^t pi), E-linear.
    pub fn galois(&self, cfg: &PrimeConfig, t: u64) -> FE {
        FE { a: self.a.galois_act(cfg, t), b: self.b.galois_act(cfg, t) }
    }

    pub fn eq_at_precision(&self, cfg: &PrimeConfig, o: &FE, prec: u32) -> bool {
        self.a.eq_at_pi_precision(cfg, &o.a, prec) && self.b.eq_at_pi_precision(cfg, &o.b, prec)
    }
}

/// A vector of F (x) D in the basis e1, e2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DVec {
    pub x: FE,
    pub y: FE,
}

impl DVec {
    pub fn zero(cfg: &PrimeConfig) -> Self {
        DVec { x: FE::zero(cfg), y: FE::zero(cfg) }
    }

    pub fn e1(cfg: &PrimeConfig) -> Self {
        DVec { x: FE::one(cfg), y: FE::zero(cfg) }
    }

    pub fn e2(cfg: &PrimeConfig) -> Self {
        DVec { x: FE::zero(cfg), y: FE::one(cfg) }
    }

    pub fn add(&self, o: &DVec) -> DVec {
        DVec { x: self.x.add(&o.x), y: self.y.add(&o.y) }
    }

    pub fn scale(&self, c: &FE) -> DVec {
        DVec { x: self.x.mul(c), y: self.y.mul(c) }
    }
}

/// The rank-2 module: basis e1, e2; phi(e1) = e2, phi(e2) = (1 (x) c_x) e1;
/// Gal(F/F_0) acts by omega2^m on e1 and omega2^(pm) on e2; g_phi fixes the
/// basis; the monodromy operator is zero.
#[derive(Debug, Clone)]
pub struct PhiModule {
    pub cfg: PrimeConfig,
    pub char: CharSpec,
    pub w1: WittElem,
    pub c_x: WittElem,
}

/// Projective filtration parameter [a : b] over O_E, normalized so the
/// minimum valuation of the pair is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilParam {
    pub a: WittElem,
    pub b: WittElem,
}

impl FilParam {
    pub fn new(cfg: &PrimeConfig, a: WittElem, b: WittElem) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidParameter("(a, b) must be nonzero".into()));
        }
        let v = a.valuation().min(b.valuation());
        if v > 0 {
            return Ok(FilParam {
                a: a.div_exact_p(v).expect("common p-power"),
                b: b.div_exact_p(v).expect("common p-power"),
            });
        }
        let _ = cfg;
        Ok(FilParam { a, b })
    }

    /// Normal form [1 : b] when a is a unit (then automatically v(b) >= 0).
    pub fn normalized(&self) -> Option<FilParam> {
        if self.a.is_unit() {
            let inv = self.a.inv().ok()?;
            Some(FilParam { a: inv.mul(self.a), b: self.b.mul(inv) })
        } else {
            None
        }
    }
}

/// Build the module attached to a character exponent, using the calibrated
/// w1: the Frobenius-square scalar is c_x = -p w1^(-2i).
pub fn build_dcrys(cfg: &PrimeConfig, char: &CharSpec, w1: WittElem) -> Result<PhiModule> {
    let c_x = crate::curve::frobenius::expected_phi_square_scalar(cfg, w1, char.i);
    Ok(PhiModule { cfg: *cfg, char: *char, w1, c_x })
}

impl PhiModule {
    /// phi on F (x) D would not be well defined; the operators below are the
    /// two that are: phi on D itself (over F_0 (x) E, coefficients as pairs
    /// of Witt elements embedded diagonally in F) and g_phi (x) phi on
    /// F (x) D.
    pub fn gphi_phi(&self, v: &DVec) -> DVec {
        let cfg = &self.cfg;
        // coefficient transport Gamma = g_phi (x) 1
        let gx = v.x.g_phi();
        let gy = v.y.g_phi();
        // e1 -> e2, e2 -> (1 (x) c_x) e1
        let cx = FE::from_e(cfg, self.c_x);
        DVec { x: gy.mul(&cx), y: gx }
    }

    /// The action of g = sigma_t . g_phi^eps in Gal(F/Q_p) on F (x) D.
    pub fn galois(&self, v: &DVec, t: u64, eps: bool) -> DVec {
        let cfg = &self.cfg;
        let m = self.char.m;
        let pm = (m * cfg.p) % (cfg.p2() - 1);
        let mut x = v.x.clone();
        let mut y = v.y.clone();
        if eps {
            x = x.g_phi();
            y = y.g_phi();
        }
        x = x.galois(cfg, t);
        y = y.galois(cfg, t);
        // weights on the basis vectors
        let w_e1 = FE::from_f(&EisensteinElem::from_witt(cfg, omega2_value(cfg, t).pow(m)));
        let w_e2 = FE::from_f(&EisensteinElem::from_witt(cfg, omega2_value(cfg, t).pow(pm)));
        DVec { x: x.mul(&w_e1), y: y.mul(&w_e2) }
    }

    /// The generator of Fil^1: (pi^((p-1)i) (x) a) e1 + (1 (x) b) e2.
    pub fn fil1_generator(&self, par: &FilParam) -> DVec {
        let cfg = &self.cfg;
        let pi_pow = EisensteinElem::pi_pow(cfg, (cfg.p - 1) * self.char.i);
        let xa = FE::from_f(&pi_pow).mul(&FE::from_e(cfg, par.a));
        let yb = FE::from_e(cfg, par.b);
        DVec { x: xa, y: yb }
    }

    /// Comparison precision for membership decisions: full pi-precision minus
    /// the pi-powers consumed by the criterion.
    fn decision_precision(&self) -> u32 {
        self.cfg.k - (self.cfg.p as u32 - 1) * (self.char.i as u32) - (self.cfg.p2() as u32 - 1)
    }

    /// Fil^1 membership via the Frobenius criterion, for the normalized
    /// parameter [1 : b] (or the degenerate [0 : 1]):
    /// (1 (x) b)(g_phi (x) phi)(f1) = (pi^((p-1)i) (x) 1) g_phi(f2).
    pub fn fil1_member(&self, f: &DVec, par: &FilParam) -> Result<bool> {
        let cfg = &self.cfg;
        let prec = self.decision_precision();
        if par.a.is_zero() {
            // line through e2: membership iff the e1 coordinate vanishes
            return Ok(f.x.eq_at_precision(cfg, &FE::zero(cfg), prec));
        }
        let par = par.normalized().ok_or_else(|| {
            Error::InvalidParameter(
                "criterion needs a = 1 (normalize or apply the parameter duality)".into(),
            )
        })?;
        // (g_phi (x) phi) on f1 = x e1: coefficient transport then e1 -> e2
        let gamma_x = f.x.g_phi();
        let lhs = gamma_x.mul(&FE::from_e(cfg, par.b));
        // (pi^((p-1)i) (x) 1) g_phi(f2) on the e2 coordinate
        let gamma_y = f.y.g_phi();
        let pi_pow = FE::from_f(&EisensteinElem::pi_pow(cfg, (cfg.p - 1) * self.char.i));
        let rhs = gamma_y.mul(&pi_pow);
        Ok(lhs.eq_at_precision(cfg, &rhs, prec))
    }

    /// Direct membership oracle: solve f = lambda * generator coordinatewise
    /// over F (x) E.
    pub fn fil1_member_direct(&self, f: &DVec, par: &FilParam) -> Result<bool> {
        let cfg = &self.cfg;
        let gen = self.fil1_generator(par);
        let prec = self.decision_precision();
        // per embedding component, solve the 2x2 proportionality
        for (fx, fy, gx, gy) in [
            (&f.x.a, &f.y.a, &gen.x.a, &gen.y.a),
            (&f.x.b, &f.y.b, &gen.x.b, &gen.y.b),
        ] {
            // (fx, fy) proportional to (gx, gy): cross product vanishes and
            // the scalar is integral against the smaller-valuation entry
            let cross = fx.mul(gy).sub(&fy.mul(gx));
            if cross.valuation(cfg) < prec {
                return Ok(false);
            }
            // integrality of lambda: v(f.) >= v(g.) on the pivot coordinate
            let (gv, fv) = if gx.valuation(cfg) <= gy.valuation(cfg) {
                (gx.valuation(cfg), fx.valuation(cfg))
            } else {
                (gy.valuation(cfg), fy.valuation(cfg))
            };
            // membership in the O-span is not required, only in the line;
            // lambda may be non-integral, so no constraint beyond the cross
            let _ = (gv, fv);
        }
        Ok(true)
    }

    /// Weak admissibility report.
    pub fn weak_admissibility(&self, par: &FilParam) -> Result<AdmissibilityReport> {
        let cfg = &self.cfg;
        let prec = self.decision_precision();
        // Newton and Hodge numbers of the full module, per E-dimension:
        // t_N = (1/2) v_p(det phi^2) = v_p(c_x); t_H = 1 from jumps {0, 1}.
        let t_n_raw = 2 * self.c_x.valuation();
        let t_h_raw = 2u32;
        let gen = self.fil1_generator(par);

        // candidate phi- and Galois-stable lines: basis vectors mixed across
        // the two embedding components
        let mut lines = Vec::new();
        for s_a in [1u8, 2] {
            for s_b in [1u8, 2] {
                let mut v = DVec::zero(cfg);
                let one = EisensteinElem::one(cfg);
                match s_a {
                    1 => v.x.a = one.clone(),
                    _ => v.y.a = one.clone(),
                }
                match s_b {
                    1 => v.x.b = one.clone(),
                    _ => v.y.b = one.clone(),
                }
                lines.push((s_a, s_b, v));
            }
        }
        let mut stable_lines = Vec::new();
        for (s_a, s_b, v) in lines {
            // phi on D: restrict to diagonal F_0-coefficients; the candidate
            // vectors have Witt coefficients so gphi_phi computes phi with
            // the F-factor untouched
            let fv = self.gphi_phi(&v);
            // stability: fv proportional to v componentwise with scalar mu
            let mu_a = proportionality(cfg, &fv.x.a, &fv.y.a, &v.x.a, &v.y.a, prec);
            let mu_b = proportionality(cfg, &fv.x.b, &fv.y.b, &v.x.b, &v.y.b, prec);
            let (Some(mu_a), Some(mu_b)) = (mu_a, mu_b) else { continue };
            // Galois stability under the generator of Gal(F/F_0)
            let gv = self.galois(&v, 1, false);
            if proportionality(cfg, &gv.x.a, &gv.y.a, &v.x.a, &v.y.a, prec).is_none()
                || proportionality(cfg, &gv.x.b, &gv.y.b, &v.x.b, &v.y.b, prec).is_none()
            {
                continue;
            }
            // Newton number of the line: (1/2)(v(mu_a) + v(mu_b))
            let t_n_line_raw = mu_a + mu_b;
            // Hodge number: count components lying inside Fil^1
            let in_fil_a = cross_vanishes(cfg, &v.x.a, &v.y.a, &gen.x.a, &gen.y.a, prec);
            let in_fil_b = cross_vanishes(cfg, &v.x.b, &v.y.b, &gen.x.b, &gen.y.b, prec);
            let t_h_line_raw = (in_fil_a as u32) + (in_fil_b as u32);
            stable_lines.push(StableLine {
                components: (s_a, s_b),
                t_n_raw: t_n_line_raw,
                t_h_raw: t_h_line_raw,
                ok: t_h_line_raw <= t_n_line_raw,
            });
        }
        let pass = t_h_raw == t_n_raw && stable_lines.iter().all(|l| l.ok);
        Ok(AdmissibilityReport {
            m: self.char.m,
            i: self.char.i,
            j: self.char.j,
            t_n_raw,
            t_h_raw,
            t_n_per_dim: t_n_raw as f64 / 2.0,
            t_h_per_dim: t_h_raw as f64 / 2.0,
            stable_lines,
            pass,
        })
    }

    /// c_x / p at full precision: the p-factor is exact by construction, so
    /// the quotient is -w1^(-2i) rather than a lossy division.
    pub fn c_x_over_p(&self) -> WittElem {
        let e = (2 * self.char.i) % (self.cfg.p2() - 1);
        self.w1.pow(e).inv().expect("teichmueller unit").neg()
    }

    /// The parameter duality: D_{chi,[a,b]} is equivalent (E-conjugate
    /// semilinearly) to D_{chi^p, [sigma(b c_x)/p : -sigma(a)]}. Returns the
    /// dual parameter and character, with the witness checked by the caller
    /// through `dual_witness`.
    pub fn dual_param(&self, par: &FilParam) -> Result<(FilParam, CharSpec)> {
        let cfg = &self.cfg;
        let char2 = self.char.frobenius_twist();
        let a2 = par.b.frobenius().mul(self.c_x_over_p().frobenius());
        let b2 = par.a.frobenius().neg();
        Ok((FilParam::new(cfg, a2, b2)?, char2))
    }

    /// The witness map T: D -> D' with T(e1) = e2', T(e2) = (1 (x) sigma c_x) e1',
    /// semilinear over 1 (x) sigma_E.
    pub fn dual_witness(&self, v: &DVec) -> DVec {
        let cfg = &self.cfg;
        let tx = v.x.e_conj();
        let ty = v.y.e_conj();
        // T(x e1 + y e2) = (1 (x) sigma)(x) T(e1) + (1 (x) sigma)(y) T(e2)
        let cxp = FE::from_e(cfg, self.c_x.frobenius());
        DVec { x: ty.mul(&cxp), y: tx }
    }
}

fn proportionality(
    cfg: &PrimeConfig,
    fx: &EisensteinElem,
    fy: &EisensteinElem,
    vx: &EisensteinElem,
    vy: &EisensteinElem,
    prec: u32,
) -> Option<u32> {
    // f proportional to v (v a coordinate unit vector); returns v_pi(mu)
    if !cross_vanishes(cfg, fx, fy, vx, vy, prec) {
        return None;
    }
    let (num, den) = if !vx.is_zero() { (fx, vx) } else { (fy, vy) };
    if num.is_zero() {
        return Some(prec);
    }
    Some(num.valuation(cfg).saturating_sub(den.valuation(cfg)))
}

fn cross_vanishes(
    cfg: &PrimeConfig,
    fx: &EisensteinElem,
    fy: &EisensteinElem,
    vx: &EisensteinElem,
    vy: &EisensteinElem,
    prec: u32,
) -> bool {
    fx.mul(vy).sub(&fy.mul(vx)).valuation(cfg) >= prec
}

#[derive(Debug, Clone, Serialize)]
pub struct StableLine {
    /// Which basis vector spans the line in each embedding component.
    pub components: (u8, u8),
    /// Sum of the two component Newton numbers (twice the per-dim value).
    pub t_n_raw: u32,
    pub t_h_raw: u32,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub m: u64,
    pub i: u64,
    pub j: u64,
    pub t_n_raw: u32,
    pub t_h_raw: u32,
    pub t_n_per_dim: f64,
    pub t_h_per_dim: f64,
    pub stable_lines: Vec<StableLine>,
    pub pass: bool,
}
