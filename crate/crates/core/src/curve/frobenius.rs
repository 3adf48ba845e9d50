//! Crystalline Frobenius on the two-chart model, computed by naive lifting
//! on the chart that removes the edge points (where the lift
//! eta -> eta^p, e -> e^p (1 + p h)^(1/(p+1)) exists), followed by exact
//! reduction against the fixed block bases.
//!
//! The certificate for the whole engine is the scalar check: the square of
//! the operator acts on every isotypic block as -p w1^(-2i) at precision 2.

use std::collections::BTreeMap;

use crate::arith::fp::PrimeConfig;
use crate::arith::witt::WittElem;
use crate::curve::cech::{
    d_fn, d_fn_r, form_to_primed, h0_basis, h1o_basis, CechClass, CurveSpec,
};
use crate::curve::poly::{eta_p_minus_eta, lead_unit_inverse, LaurentW, RElem};
use crate::error::{Error, Result};
use crate::linalg::{MatW, SmithSolver};

/// p eta^(p-1) - 1.
fn lead_poly(cfg: &PrimeConfig) -> LaurentW {
    let mut l = LaurentW::zero();
    l.set(cfg.p as i64 - 1, WittElem::from_int(cfg, cfg.p as i64));
    l.set(0, WittElem::one(cfg).neg());
    l
}

/// Formal eta-derivative of a localized element.
fn rel_derivative(cfg: &PrimeConfig, q: &RElem) -> RElem {
    let a = RElem { num: q.num.derivative(), t: q.t };
    if q.t == 0 {
        return a;
    }
    let b = RElem {
        num: q.num.mul(&lead_poly(cfg)).scale(WittElem::from_int(cfg, q.t as i64)),
        t: q.t + 1,
    };
    a.sub(&b, cfg).normalize(cfg)
}

/// The Frobenius lifting data shared by all blocks of one curve.
pub struct FrobeniusEngine {
    pub spec: CurveSpec,
    h: RElem,
    /// p + d log u as a multiple of de/e.
    p_plus_dlog_u: RElem,
}

impl FrobeniusEngine {
    pub fn new(spec: &CurveSpec) -> Result<Self> {
        let cfg = &spec.cfg;
        if cfg.n < 2 {
            return Err(Error::Precision {
                context: "the Frobenius engine needs at least two p-digits".into(),
                needed: 2,
            });
        }
        let h = Self::correction_h(cfg);
        // d log u = p h' (p eta^(p-1)-1)^-1 (1+ph)^-1 (eta^p - eta)
        let hp = rel_derivative(cfg, &h);
        let inv_1ph = Self::binom_series_static(cfg, &h, -(cfg.p as i64 + 1));
        let dlog_u = hp
            .mul_laurent(&lead_unit_inverse(cfg), cfg)
            .mul(&inv_1ph, cfg)
            .mul_laurent(&eta_p_minus_eta(cfg), cfg)
            .scale(WittElem::from_int(cfg, cfg.p as i64));
        let p_plus_dlog_u = RElem::from_poly(LaurentW::constant(WittElem::from_int(
            cfg,
            cfg.p as i64,
        )))
        .add(&dlog_u, cfg);
        Ok(FrobeniusEngine { spec: spec.clone(), h, p_plus_dlog_u })
    }

    /// h = -Psi / (eta^p - eta)^p with
    /// Psi = [(eta^p - eta)^p - eta^(p^2) + eta^p] / p, so that
    /// (eta^(p^2) - eta^p) = (eta^p - eta)^p (1 + p h).
    fn correction_h(cfg: &PrimeConfig) -> RElem {
        let p = cfg.p as i64;
        let mut psi = LaurentW::zero();
        let mut binom: i64 = 1; // C(p, t)
        for t in 1..p {
            binom = binom * (p - t + 1) / t;
            let coeff = (binom / p) * if (p - t) % 2 == 0 { 1 } else { -1 };
            let e = t * (p - 1) + p;
            psi.set(e, psi.get(e, cfg).add(WittElem::from_int(cfg, coeff)));
        }
        RElem { num: psi.neg(), t: cfg.p as u32 }
    }

    /// (1 + p h)^(a / (p+1)) as a finite binomial series mod p^N.
    fn binom_series_static(cfg: &PrimeConfig, h: &RElem, a: i64) -> RElem {
        let p = cfg.p as i64;
        let alpha = WittElem::from_int(cfg, a)
            .mul(WittElem::from_int(cfg, p + 1).inv().expect("p+1 is a unit"));
        let n_stop = (cfg.n as i64 * (p - 1)) / (p - 2).max(1) + 2;
        let mut acc = RElem::from_poly(LaurentW::constant(WittElem::one(cfg)));
        let mut h_pow = RElem::from_poly(LaurentW::constant(WittElem::one(cfg)));
        let mut prod = WittElem::one(cfg); // alpha (alpha-1) ... (alpha-n+1)
        let mut fact_val: u32 = 0; // v_p(n!)
        let mut fact_unit = WittElem::one(cfg); // n! / p^v
        for n in 1..=n_stop {
            h_pow = h_pow.mul(h, cfg);
            prod = prod.mul(alpha.sub(WittElem::from_int(cfg, n - 1)));
            let mut m = n as u64;
            while m % cfg.p == 0 {
                fact_val += 1;
                m /= cfg.p;
            }
            fact_unit = fact_unit.mul(WittElem::from_int(cfg, m as i64));
            let pow = n as u32 - fact_val; // v_p(p^n / n!)
            if pow >= cfg.n {
                continue;
            }
            let scalar = prod
                .mul(fact_unit.inv().expect("unit"))
                .mul(WittElem::from_int(cfg, (cfg.p as i64).pow(pow)));
            acc = acc.add(&h_pow.scale(scalar), cfg);
        }
        acc.normalize(cfg)
    }

    pub fn binom_series(&self, a: i64) -> RElem {
        Self::binom_series_static(&self.spec.cfg, &self.h, a)
    }

    /// The semilinear operator on a block form: input lives in block weight
    /// k0 (coefficient of e^k0 de/e); output in weight p + 1 - k0.
    pub fn apply(&self, k0: u64, q: &RElem) -> (u64, RElem) {
        let cfg = &self.spec.cfg;
        let p = cfg.p;
        // sigma coefficients, eta -> eta^p
        let num_sub = q.num.frobenius_substitute();
        let base = RElem { num: num_sub, t: p as u32 * q.t };
        // (eta^(p^2) - eta^p)^-t = (eta^p - eta)^(-pt) (1+ph)^-t
        let corr = self.binom_series(-(q.t as i64) * (p as i64 + 1));
        // e^(p k0) = (c (eta^p - eta))^(k0 - 1) e^(p+1-k0)
        let c_pow = {
            let mut w = WittElem::one(cfg);
            for _ in 0..(k0 - 1) {
                w = w.mul(self.spec.c);
            }
            w
        };
        let mut d_pow = LaurentW::constant(WittElem::one(cfg));
        for _ in 0..(k0 - 1) {
            d_pow = d_pow.mul(&eta_p_minus_eta(cfg));
        }
        let u_pow = self.binom_series(k0 as i64);
        let out = base
            .mul(&corr, cfg)
            .mul_laurent(&d_pow, cfg)
            .scale(c_pow)
            .mul(&u_pow, cfg)
            .mul(&self.p_plus_dlog_u, cfg)
            .normalize(cfg);
        (p + 1 - k0, out)
    }
}

/// The integral hypercocycle completion of a seed (omega_seed, f_seed) in
/// block i. The unknowns are chart functions a0 (on V_0), a_inf (on V_inf)
/// entering the overlap function F = f + a0 - a_inf, together with a
/// V_0-regular form correction rho shared by both chart forms:
/// omega_0 = omega_seed + pos(dF) + rho, omega_inf = omega_0 - dF. The
/// constraint is integral regularity of omega_inf on the primed chart.
/// Naive integral lifts of the special-fibre bases fail that regularity by
/// p-divisible tails at infinity, so even holomorphic seeds need completing.
pub fn complete_class(
    spec: &CurveSpec,
    i: u64,
    omega_seed: &LaurentW,
    f: &LaurentW,
) -> Result<CechClass> {
    let cfg = &spec.cfg;
    let k0 = spec.k0(i);
    let d0 = (cfg.n as i64 + 2) * (cfg.p as i64 - 1) + cfg.p as i64;
    let dinf = k0 as i64 + d0;

    #[derive(Clone, Copy)]
    enum Unknown {
        ChartFn { exp: i64, sign: i64 },
        FormCorrection { exp: i64 },
    }
    let mut unknowns: Vec<Unknown> = Vec::new();
    for a in 0..=d0 {
        unknowns.push(Unknown::ChartFn { exp: a, sign: 1 });
    }
    for s in k0 as i64..=dinf {
        unknowns.push(Unknown::ChartFn { exp: -s, sign: -1 });
    }
    for b in 0..=d0 {
        unknowns.push(Unknown::FormCorrection { exp: b });
    }

    // negative primed exponents of the V_inf form candidate
    let neg_primed = |form: &LaurentW| -> BTreeMap<i64, WittElem> {
        form_to_primed(cfg, k0, form)
            .coeffs
            .into_iter()
            .filter(|(e, _)| *e < 0)
            .collect()
    };
    // contribution of an overlap-function term u with sign s:
    // omega_inf picks up -neg(d(s u)) = -s neg(d u)
    let chart_contrib = |exp: i64, sign: i64| -> BTreeMap<i64, WittElem> {
        let du = d_fn(cfg, k0, &LaurentW::monomial(exp, WittElem::one(cfg)));
        let m = neg_primed(&du.filter(|e| e < 0));
        m.into_iter()
            .map(|(e, w)| (e, if sign > 0 { w.neg() } else { w }))
            .collect()
    };

    let df = d_fn(cfg, k0, f);
    // omega_inf before corrections: omega_seed - neg(dF)
    let base = neg_primed(&omega_seed.sub(&df.filter(|e| e < 0)));

    let col_maps: Vec<BTreeMap<i64, WittElem>> = unknowns
        .iter()
        .map(|u| match u {
            Unknown::ChartFn { exp, sign } => chart_contrib(*exp, *sign),
            Unknown::FormCorrection { exp } => {
                neg_primed(&LaurentW::monomial(*exp, WittElem::one(cfg)))
            }
        })
        .collect();
    let mut keys: std::collections::BTreeSet<i64> = base.keys().cloned().collect();
    for m in &col_maps {
        keys.extend(m.keys().cloned());
    }
    let keys: Vec<i64> = keys.into_iter().collect();
    let mut mat = MatW::zeros(cfg, keys.len(), unknowns.len());
    for (cidx, m) in col_maps.iter().enumerate() {
        for (ridx, key) in keys.iter().enumerate() {
            if let Some(w) = m.get(key) {
                mat.set(ridx, cidx, *w);
            }
        }
    }
    let target: Vec<WittElem> = keys
        .iter()
        .map(|k| base.get(k).copied().unwrap_or_else(|| WittElem::zero(cfg)).neg())
        .collect();
    let solver = SmithSolver::new(cfg, &mat);
    let x = solver.solve(&target).ok_or_else(|| Error::Precision {
        context: "hypercocycle completion window exhausted".into(),
        needed: cfg.n + 1,
    })?;

    let mut big_f = f.clone();
    let mut rho = LaurentW::zero();
    for (u, c) in unknowns.iter().zip(&x) {
        if c.is_zero() {
            continue;
        }
        match u {
            Unknown::ChartFn { exp, sign } => {
                let term = LaurentW::monomial(*exp, *c);
                big_f = if *sign > 0 { big_f.add(&term) } else { big_f.sub(&term) };
            }
            Unknown::FormCorrection { exp } => {
                rho = rho.add(&LaurentW::monomial(*exp, *c));
            }
        }
    }
    let dbig = d_fn(cfg, k0, &big_f);
    let omega0 = omega_seed.add(&dbig.filter(|e| e >= 0)).add(&rho);
    let omega_inf = omega0.sub(&dbig);
    let cls = CechClass { i, k0, omega0, omega_inf, f: big_f };
    debug_assert!(cls.is_integral_hypercocycle(spec));
    Ok(cls)
}

/// Completion of a pure structure cocycle (no form seed).
pub fn complete_f_cocycle(spec: &CurveSpec, i: u64, f: &LaurentW) -> Result<CechClass> {
    complete_class(spec, i, &LaurentW::zero(), f)
}

/// One isotypic block with its chosen basis and the exact reduction data.
pub struct BlockSpace {
    pub i: u64,
    pub k0: u64,
    /// The public basis classes: h0 basis then h1O basis.
    pub basis: Vec<CechClass>,
    /// Completed versions (hypercocycles) matching `basis`.
    pub completed: Vec<CechClass>,
    basis_uforms: Vec<RElem>,
    keys: Vec<(u32, i64)>,
    solver: SmithSolver,
    n_cols: usize,
}

/// The U-chart form representing the integral class attached to a (possibly
/// only residually regular) Cech class: classes that are already integral
/// hypercocycles restrict directly; anything else is completed first.
fn uform_of_class(spec: &CurveSpec, class: &CechClass) -> Result<RElem> {
    let cfg = &spec.cfg;
    if class.is_integral_hypercocycle(spec) {
        Ok(RElem::from_laurent(cfg, &class.omega0))
    } else {
        let completed = complete_class(spec, class.i, &class.omega0, &class.f)?;
        Ok(RElem::from_laurent(cfg, &completed.omega0))
    }
}

impl BlockSpace {
    /// Build the block space, with the reduction window wide enough for the
    /// given extra targets.
    pub fn new(spec: &CurveSpec, i: u64, extra_targets: &[RElem]) -> Result<Self> {
        let cfg = &spec.cfg;
        let p = cfg.p;
        let k0 = spec.k0(i);
        let mut basis = h0_basis(spec, i)?;
        let h1 = h1o_basis(spec, i)?;
        let mut completed: Vec<CechClass> = Vec::new();
        let mut basis_uforms: Vec<RElem> = Vec::new();
        for cls in basis.iter().chain(h1.iter()) {
            let comp = complete_class(spec, i, &cls.omega0, &cls.f)?;
            basis_uforms.push(RElem::from_laurent(cfg, &comp.omega0));
            completed.push(comp);
        }
        basis.extend(h1);

        // window bounds from the basis and the expected targets; the slack
        // (n+1)(p-1) absorbs the p-divisible tails that the exact generators
        // spread above their head degree
        let mut t_max: u32 = 1;
        let mut a_max: i64 = (2 * p) as i64;
        for q in basis_uforms.iter().chain(extra_targets.iter()) {
            t_max = t_max.max(q.t + cfg.n + 2);
            for ((s, a), _) in q.window_coords(cfg) {
                if s == 0 {
                    a_max = a_max.max(a + 1);
                }
            }
        }
        a_max += (cfg.n as i64 + 1) * (p as i64 - 1) + p as i64;

        // generators of the exact subspace
        let mut gens: Vec<RElem> = Vec::new();
        for a in 0..=a_max {
            gens.push(d_fn_r(cfg, k0, &RElem::from_poly(LaurentW::monomial(a, WittElem::one(cfg)))));
        }
        for s in 1..=t_max {
            for b in 0..p as i64 {
                gens.push(d_fn_r(
                    cfg,
                    k0,
                    &RElem { num: LaurentW::monomial(b, WittElem::one(cfg)), t: s },
                ));
            }
        }

        // assemble the solve matrix [basis | gens]
        let mut key_set: std::collections::BTreeSet<(u32, i64)> = Default::default();
        let col_coords: Vec<BTreeMap<(u32, i64), WittElem>> = basis_uforms
            .iter()
            .chain(gens.iter())
            .map(|q| q.window_coords(cfg))
            .collect();
        for m in &col_coords {
            key_set.extend(m.keys().cloned());
        }
        for q in extra_targets {
            key_set.extend(q.window_coords(cfg).keys().cloned());
        }
        let keys: Vec<(u32, i64)> = key_set.into_iter().collect();
        let mut mat = MatW::zeros(cfg, keys.len(), col_coords.len());
        for (cidx, m) in col_coords.iter().enumerate() {
            for (ridx, key) in keys.iter().enumerate() {
                if let Some(w) = m.get(key) {
                    mat.set(ridx, cidx, *w);
                }
            }
        }
        let solver = SmithSolver::new(cfg, &mat);
        Ok(BlockSpace {
            i,
            k0,
            basis,
            completed,
            basis_uforms,
            keys,
            solver,
            n_cols: col_coords.len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a block form in the chosen basis, modulo exact forms.
    pub fn express(&self, spec: &CurveSpec, q: &RElem) -> Result<Vec<WittElem>> {
        let cfg = &spec.cfg;
        let coords = q.window_coords(cfg);
        for key in coords.keys() {
            if !self.keys.contains(key) {
                return Err(Error::Precision {
                    context: format!("reduction window missed key {key:?}"),
                    needed: cfg.n,
                });
            }
        }
        let target: Vec<WittElem> = self
            .keys
            .iter()
            .map(|k| coords.get(k).copied().unwrap_or_else(|| WittElem::zero(cfg)))
            .collect();
        let x = self.solver.solve(&target).ok_or_else(|| Error::Precision {
            context: "class not expressible in the reduction window".into(),
            needed: cfg.n + 1,
        })?;
        debug_assert_eq!(x.len(), self.n_cols);
        Ok(x[..self.dim()].to_vec())
    }

    /// Rebuild a class from basis coordinates.
    pub fn from_coords(&self, coords: &[WittElem]) -> CechClass {
        let mut acc = CechClass::zero(self.i, self.k0);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(*c));
            }
        }
        acc
    }

    pub fn uform_for_basis(&self, idx: usize) -> &RElem {
        &self.basis_uforms[idx]
    }
}

/// The full cohomology of one curve: all blocks, the Frobenius matrices, and
/// the derived certificates.
pub struct CurveCohomology {
    pub spec: CurveSpec,
    pub engine: FrobeniusEngine,
    pub blocks: Vec<BlockSpace>,
    /// matrices[i-1]: coordinates of phi(basis of block i) in the basis of
    /// block p+1-i; column-major (one column per basis vector).
    pub matrices: Vec<Vec<Vec<WittElem>>>,
}

impl CurveCohomology {
    pub fn new(spec: &CurveSpec) -> Result<Self> {
        let cfg = &spec.cfg;
        let p = cfg.p;
        let engine = FrobeniusEngine::new(spec)?;
        // pass 1: basis u-forms per block (without reduction windows yet)
        let mut pre_blocks: Vec<Vec<RElem>> = Vec::new();
        for i in 1..=p {
            let mut ufs = Vec::new();
            for cls in h0_basis(spec, i)?.iter().chain(h1o_basis(spec, i)?.iter()) {
                let comp = complete_class(spec, i, &cls.omega0, &cls.f)?;
                ufs.push(RElem::from_laurent(cfg, &comp.omega0));
            }
            pre_blocks.push(ufs);
        }
        // pass 2: images
        let mut images: Vec<Vec<RElem>> = vec![Vec::new(); p as usize];
        for i in 1..=p {
            let k0 = spec.k0(i);
            for q in &pre_blocks[(i - 1) as usize] {
                let (k0_target, img) = engine.apply(k0, q);
                let target_i = p + 1 - k0_target;
                debug_assert_eq!(target_i, p + 1 - i);
                images[(target_i - 1) as usize].push(img);
            }
        }
        // pass 3: block spaces wide enough for the incoming images
        let mut blocks = Vec::new();
        for i in 1..=p {
            blocks.push(BlockSpace::new(spec, i, &images[(i - 1) as usize])?);
        }
        // pass 4: matrices
        let mut matrices = Vec::new();
        for i in 1..=p {
            let src = &blocks[(i - 1) as usize];
            let dst = &blocks[(p - i) as usize]; // block p+1-i
            let mut cols = Vec::new();
            for idx in 0..src.dim() {
                let (_, img) = engine.apply(src.k0, src.uform_for_basis(idx));
                cols.push(dst.express(spec, &img)?);
            }
            matrices.push(cols);
        }
        Ok(CurveCohomology { spec: spec.clone(), engine, blocks, matrices })
    }

    pub fn block(&self, i: u64) -> &BlockSpace {
        &self.blocks[(i - 1) as usize]
    }

    /// phi as a map from block i to block p+1-i, column-major coordinates.
    pub fn phi_matrix(&self, i: u64) -> &Vec<Vec<WittElem>> {
        &self.matrices[(i - 1) as usize]
    }

    /// The matrix of phi^2 on block i: M_{p+1-i} . sigma(M_i).
    pub fn phi_square_matrix(&self, i: u64) -> Vec<Vec<WittElem>> {
        let cfg = &self.spec.cfg;
        let p = self.spec.cfg.p;
        let m1 = self.phi_matrix(i); // block i -> block i'
        let m2 = self.phi_matrix(p + 1 - i); // block i' -> block i
        let dim_src = m1.len();
        let dim_mid = if dim_src > 0 { m1[0].len() } else { 0 };
        let dim_out = if m2.is_empty() { 0 } else { m2[0].len() };
        // column l of the product: sum_j sigma(m1[l][j]) * m2[j]
        let mut out = vec![vec![WittElem::zero(cfg); dim_out]; dim_src];
        for l in 0..dim_src {
            for j in 0..dim_mid {
                let c = m1[l][j].frobenius();
                if c.is_zero() {
                    continue;
                }
                for r in 0..dim_out {
                    out[l][r] = out[l][r].add(m2[j][r].mul(c));
                }
            }
        }
        out
    }

    /// Apply Frobenius to a class: semilinear, maps block i to block p+1-i.
    pub fn frobenius(&self, class: &CechClass) -> Result<CechClass> {
        let spec = &self.spec;
        let q = uform_of_class(spec, class)?;
        let (k0t, img) = self.engine.apply(class.k0, &q);
        let ti = spec.cfg.p + 1 - k0t;
        let dst = self.block(ti);
        let coords = dst.express(spec, &img)?;
        Ok(dst.from_coords(&coords))
    }

    /// Coordinates of an arbitrary class in its block basis (h0 part first,
    /// then the H^1(O) part).
    pub fn reduce(&self, class: &CechClass) -> Result<Vec<WittElem>> {
        let spec = &self.spec;
        let blk = self.block(class.i);
        let q = uform_of_class(spec, class)?;
        blk.express(spec, &q)
    }

    /// Trace of phi^2 over the whole H^1: sums over every isotypic block.
    pub fn phi_square_trace(&self) -> WittElem {
        let cfg = &self.spec.cfg;
        let mut acc = WittElem::zero(cfg);
        for i in 1..=self.spec.cfg.p {
            let m = self.phi_square_matrix(i);
            for (l, col) in m.iter().enumerate() {
                acc = acc.add(col[l]);
            }
        }
        acc
    }
}

/// The scalar -p tau(w1^(-2i)) of phi^2 on block i, for a given w1.
pub fn expected_phi_square_scalar(cfg: &PrimeConfig, w1: WittElem, i: u64) -> WittElem {
    let e = (2 * i) % (cfg.p2() - 1);
    let mut w = WittElem::one(cfg);
    for _ in 0..e {
        w = w.mul(w1);
    }
    w.inv().expect("teichmueller unit").scale(-(cfg.p as i64))
}

/// Check phi^2 = -p w1^(-2i) Id on every block at precision 2.
pub fn check_phi_square(coh: &CurveCohomology, w1: WittElem) -> bool {
    let cfg = &coh.spec.cfg;
    for i in 1..=cfg.p {
        let expected = expected_phi_square_scalar(cfg, w1, i);
        let m = coh.phi_square_matrix(i);
        for (l, col) in m.iter().enumerate() {
            for (r, entry) in col.iter().enumerate() {
                let want = if r == l { expected } else { WittElem::zero(cfg) };
                if !entry.eq_at_precision(&want, 2) {
                    return false;
                }
            }
        }
    }
    true
}

/// Select w1: the first Teichmueller candidate with w1^(p+1) = -1 whose
/// curve reproduces the Frobenius-square scalar on every block of every
/// component; errors when none does.
pub fn calibrate_w1(cfg: &PrimeConfig) -> Result<WittElem> {
    let candidates = crate::arith::witt::w1_candidates(cfg);
    'cand: for w1 in candidates {
        let labels = crate::tree::chart::component_labels(cfg);
        for xi_index in 0..labels.len() {
            let spec = CurveSpec::new(cfg, w1, xi_index, true)?;
            let coh = CurveCohomology::new(&spec)?;
            if !check_phi_square(&coh, w1) {
                continue 'cand;
            }
        }
        return Ok(w1);
    }
    Err(Error::Calibration(
        "no w1 candidate reproduces the Frobenius-square scalar".into(),
    ))
}

/// The mod-p Frobenius H^1(O) -> H^0(Omega^1): p-th power of the cocycle,
/// split into chart functions, and the resulting global holomorphic form.
/// Returns the polynomial coefficient of e^(p+1-i') de/e in the target block
/// i' = p+1-i.
pub fn frobenius_h1o_mod_p(spec: &CurveSpec, i: u64, k: u64) -> Result<LaurentW> {
    let cfg = &spec.cfg.residue_view();
    let p = cfg.p;
    let k0 = spec.k0(i);
    if k < 1 || k > p - i {
        return Err(Error::InvalidParameter(format!("k = {k} out of 1..=p-i")));
    }
    // F = (e^k0 / eta^k)^p = c^(k0-1) (eta^p - eta)^(k0-1) eta^(-pk) e^(p+1-k0)
    let c = WittElem::new(cfg, (spec.c.c0 % p) as i64, (spec.c.c1 % p) as i64);
    let mut c_pow = WittElem::one(cfg);
    for _ in 0..(k0 - 1) {
        c_pow = c_pow.mul(c);
    }
    let mut coeff = LaurentW::monomial(-((p * k) as i64), c_pow);
    for _ in 0..(k0 - 1) {
        coeff = coeff.mul(&eta_p_minus_eta(cfg));
    }
    // target function block: e-weight i
    let new_weight = p + 1 - k0; // = i
    debug_assert_eq!(new_weight, i);
    // split: nonnegative part -> g0; exponents <= -i -> chart at infinity;
    // the gap must vanish (the Hasse-Witt matrix of these curves is zero)
    for e in (-(i as i64) + 1)..0 {
        if !coeff.get(e, cfg).is_zero() {
            return Err(Error::Domain(format!(
                "gap coefficient at eta^{e} does not vanish; p-th power not splittable"
            )));
        }
    }
    let g0 = coeff.filter(|e| e >= 0);
    // the holomorphic representative is -d(g0 e^i)
    let omega = d_fn(cfg, i, &g0).neg();
    // must be polynomial of degree <= i'-2 with i' = p+1-i
    if omega.has_negative_exp() || omega.max_exp().unwrap_or(0) > (p + 1 - i) as i64 - 2 {
        return Err(Error::Domain("mod-p image is not in the holomorphic basis span".into()));
    }
    Ok(omega)
}

/// The closed-form right-hand side: (c)^(p-i) (-1)^(p-i-k) k C(p-i, k)
/// eta^(p-i-k) in block p+1-i (coefficient of e^(p+1-i) ... de/e written on
/// the holomorphic basis).
pub fn closed_form_h1o_image(spec: &CurveSpec, i: u64, k: u64) -> LaurentW {
    let cfg = &spec.cfg.residue_view();
    let p = cfg.p;
    let c = WittElem::new(cfg, (spec.c.c0 % p) as i64, (spec.c.c1 % p) as i64);
    let mut w = WittElem::one(cfg);
    for _ in 0..(p - i) {
        w = w.mul(c);
    }
    let binom = binomial_mod_p(p, p - i, k);
    let sign = if (p - i - k) % 2 == 0 { 1i64 } else { -1 };
    let scalar = w.scale(sign * (k as i64) * (binom as i64));
    LaurentW::monomial((p - i - k) as i64, scalar)
}

fn binomial_mod_p(p: u64, n: u64, k: u64) -> u64 {
    // small n: exact integer binomial then reduce
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for t in 0..k {
        num *= (n - t) as u128;
        den *= (t + 1) as u128;
    }
    ((num / den) % p as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u64, n: u32, xi: usize) -> CurveSpec {
        let cfg = PrimeConfig::new(p, n).unwrap();
        let w1 = crate::arith::witt::w1_candidates(&cfg)[0];
        CurveSpec::new(&cfg, w1, xi, true).unwrap()
    }

    #[test]
    fn correction_h_identity() {
        // (eta^(p^2) - eta^p) = (eta^p - eta)^p (1 + p h)
        for p in [3u64, 5] {
            let cfg = PrimeConfig::new(p, 3).unwrap();
            let h = FrobeniusEngine::correction_h(&cfg);
            let d = eta_p_minus_eta(&cfg);
            let mut dp = LaurentW::constant(WittElem::one(&cfg));
            for _ in 0..p {
                dp = dp.mul(&d);
            }
            // lhs: (eta^(p^2) - eta^p)
            let mut lhs = LaurentW::zero();
            lhs.set((p * p) as i64, WittElem::one(&cfg));
            lhs.set(p as i64, WittElem::one(&cfg).neg());
            // rhs: dp * (1 + p h) = dp + p dp h
            let ph = RElem { num: h.num.scale(WittElem::from_int(&cfg, p as i64)), t: h.t };
            let rhs = RElem::from_poly(dp.clone()).add(
                &RElem::from_poly(dp).mul(&ph, &cfg),
                &cfg,
            );
            let diff = rhs.sub(&RElem::from_poly(lhs), &cfg);
            assert!(diff.is_zero(), "p={p}: {diff:?}");
        }
    }

    #[test]
    fn binom_series_squares() {
        // u = (1+ph)^(1/(p+1)) satisfies u^(p+1) = 1 + p h
        let cfg = PrimeConfig::new(3, 3).unwrap();
        let h = FrobeniusEngine::correction_h(&cfg);
        let u = FrobeniusEngine::binom_series_static(&cfg, &h, 1);
        let mut upow = RElem::from_poly(LaurentW::constant(WittElem::one(&cfg)));
        for _ in 0..(cfg.p + 1) {
            upow = upow.mul(&u, &cfg);
        }
        let one_ph = RElem::from_poly(LaurentW::constant(WittElem::one(&cfg))).add(
            &RElem { num: h.num.scale(WittElem::from_int(&cfg, cfg.p as i64)), t: h.t },
            &cfg,
        );
        let diff = upow.sub(&one_ph, &cfg);
        assert!(diff.is_zero(), "{diff:?}");
    }

    #[test]
    fn mod_p_frobenius_matches_closed_form_p3() {
        let spec = spec(3, 2, 0);
        for i in 1..=2u64 {
            for k in 1..=(3 - i) {
                let got = frobenius_h1o_mod_p(&spec, i, k).unwrap();
                let want = closed_form_h1o_image(&spec, i, k);
                assert_eq!(got, want, "i={i} k={k}");
            }
        }
    }

    #[test]
    fn completion_produces_hypercocycles() {
        let spec = spec(3, 3, 0);
        for i in 1..=2u64 {
            for cls in h1o_basis(&spec, i).unwrap() {
                let comp = complete_f_cocycle(&spec, i, &cls.f).unwrap();
                assert!(comp.is_integral_hypercocycle(&spec));
            }
        }
    }

    #[test]
    fn phi_square_scalar_p3() {
        let cfg = PrimeConfig::new(3, 3).unwrap();
        for w1 in crate::arith::witt::w1_candidates(&cfg).into_iter().take(1) {
            let spec = CurveSpec::new(&cfg, w1, 0, true).unwrap();
            let coh = CurveCohomology::new(&spec).unwrap();
            assert!(check_phi_square(&coh, w1));
        }
    }
}
