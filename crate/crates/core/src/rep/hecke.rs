//! The Hecke operator T on induced representations, built from the function
//! phi_r supported on the double coset of diag(1, p^-1).

use crate::arith::fp::{Fq2, PrimeConfig};
use crate::error::{Error, Result};
use crate::rep::ind::{IndElem, Side, Support};
use crate::rep::{sym_matrix_dense, SymVec};
use crate::tree::{ball, neighbors, GMatrix, Qp, Vertex};

/// The value of phi_r at a group element: a linear endomorphism of
/// Sym^r (x) det^j, or the zero map off the double coset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiRMap {
    pub matrix: Option<Vec<Vec<Fq2>>>,
}

impl PhiRMap {
    pub fn zero() -> Self {
        PhiRMap { matrix: None }
    }

    pub fn apply(&self, cfg: &PrimeConfig, v: &SymVec) -> SymVec {
        match &self.matrix {
            None => SymVec::zero(cfg, v.r, v.j),
            Some(m) => {
                let dim = v.dim();
                let mut out = SymVec::zero(cfg, v.r, v.j);
                for row in 0..dim {
                    let mut acc = Fq2::zero(cfg);
                    for col in 0..dim {
                        acc = acc.add(m[row][col].mul(v.coeffs[col]));
                    }
                    out.coeffs[row] = acc;
                }
                out
            }
        }
    }
}

/// Elementary-divisor factorization g = k1 * diag(p^a, p^b) * k2 with
/// k1, k2 in GL_2(Z_p) and a <= b.
pub fn smith_gl2(g: &GMatrix) -> Result<(GMatrix, i64, i64, GMatrix)> {
    let p = g.p();
    let mut m = *g;
    let mut k1 = GMatrix::identity(p);
    let mut k2 = GMatrix::identity(p);
    let swap = GMatrix::from_ints(p, 0, 1, 1, 0);

    // place a minimal-valuation entry at (1,1)
    let vals = [
        m.a.valuation_or_inf()?,
        m.b.valuation_or_inf()?,
        m.c.valuation_or_inf()?,
        m.d.valuation_or_inf()?,
    ];
    let (mut best, mut best_v) = (0usize, vals[0]);
    for (idx, v) in vals.iter().enumerate() {
        if *v < best_v {
            best = idx;
            best_v = *v;
        }
    }
    if best_v == i64::MAX {
        return Err(Error::Singular);
    }
    if best >= 2 {
        // swap rows: m <- swap * m, so k1 <- k1 * swap
        m = swap.mul(&m);
        k1 = k1.mul(&swap);
        best -= 2;
    }
    if best == 1 {
        m = m.mul(&swap);
        k2 = swap.mul(&k2);
    }
    // clear the rest of the first column and row
    let pivot_inv = m.a.inv()?;
    if !m.c.is_zero_exact() {
        let q = m.c.mul(pivot_inv);
        // row2 <- row2 - q row1 : left mult by E = [[1,0],[-q,1]], k1 <- k1 E^-1
        let e_inv = GMatrix::new(Qp::one(p), Qp::zero(p), q, Qp::one(p));
        m = GMatrix::new(m.a, m.b, Qp::zero(p), m.d.sub(q.mul(m.b)));
        k1 = k1.mul(&e_inv);
    }
    if !m.b.is_zero_exact() {
        let q = m.b.mul(pivot_inv);
        // col2 <- col2 - q col1 : right mult by F = [[1,-q],[0,1]], k2 <- F^-1 k2
        let f_inv = GMatrix::new(Qp::one(p), q, Qp::zero(p), Qp::one(p));
        m = GMatrix::new(m.a, Qp::zero(p), m.c, m.d);
        k2 = f_inv.mul(&k2);
    }
    // normalize units on the diagonal into k1
    let a_val = m.a.valuation()?;
    let d_val = m.d.valuation()?;
    let u1 = m.a.mul(Qp::p_pow(p, -a_val));
    let u2 = m.d.mul(Qp::p_pow(p, -d_val));
    let units = GMatrix::new(u1, Qp::zero(p), Qp::zero(p), u2);
    k1 = k1.mul(&units);
    let (mut a_val, mut d_val) = (a_val, d_val);
    if a_val > d_val {
        // diag(p^a, p^d) = swap diag(p^d, p^a) swap
        k1 = k1.mul(&swap);
        k2 = swap.mul(&k2);
        std::mem::swap(&mut a_val, &mut d_val);
    }
    Ok((k1, a_val, d_val, k2))
}

/// phi_r(g) on Sym^r (x) det^j: zero off GL_2(Z_p) Q_p^x diag(1,p^-1) GL_2(Z_p);
/// on the coset, sigma(h1) . phi0 . sigma(h2) for any factorization, where
/// phi0 kills x^k y^(r-k) for k != 0 and fixes y^r.
pub fn phi_r(cfg: &PrimeConfig, r: i64, j: i64, g: &GMatrix) -> Result<PhiRMap> {
    let (k1, a, b, k2) = smith_gl2(g)?;
    if b - a != 1 {
        return Ok(PhiRMap::zero());
    }
    if r < 0 {
        return Ok(PhiRMap { matrix: Some(vec![]) });
    }
    // diag(p^a, p^(a+1)) = p^(a+1) * J diag(1, p^-1) J with J the swap;
    // h1 = k1 * J (times a central p-power, acting trivially), h2 = J * k2.
    let p = cfg.p;
    let swap = [0u64, 1, 1, 0];
    let m1 = mat_mul_mod_p(p, k1.residues_mod_pk(1)?, swap);
    let m2 = mat_mul_mod_p(p, swap, k2.residues_mod_pk(1)?);
    let s1 = sym_matrix_dense(cfg, r, j, m1)?;
    let s2 = sym_matrix_dense(cfg, r, j, m2)?;
    let dim = (r + 1) as usize;
    // phi0: projector onto the k = 0 monomial y^r
    let mut m = vec![vec![Fq2::zero(cfg); dim]; dim];
    for row in 0..dim {
        for col in 0..dim {
            // (s1 . phi0 . s2)[row][col] = s1[row][0] * s2[0][col]
            m[row][col] = s1[row][0].mul(s2[0][col]);
        }
    }
    Ok(PhiRMap { matrix: Some(m) })
}

fn mat_mul_mod_p(p: u64, x: [u64; 4], y: [u64; 4]) -> [u64; 4] {
    [
        (x[0] * y[0] + x[1] * y[2]) % p,
        (x[0] * y[1] + x[1] * y[3]) % p,
        (x[2] * y[0] + x[3] * y[2]) % p,
        (x[2] * y[1] + x[3] * y[3]) % p,
    ]
}

/// The Hecke operator. Pointwise, (T f)(t) = sum over support vertices s of
/// phi_r(T_t T_s^-1) f(T_s); the map vanishes unless d(t, s) = 1, so only
/// neighbors contribute.
pub fn hecke_t(x: &IndElem) -> Result<IndElem> {
    if x.side == Side::Dual {
        return Err(Error::Domain("the Hecke operator acts on the std side".into()));
    }
    let cfg = x.cfg;
    let out_support = match x.support {
        Support::Compact => Support::Compact,
        Support::Truncated { radius } => {
            if radius == 0 {
                return Err(Error::Domain(
                    "truncated input of radius 0: the operator output is nowhere defined".into(),
                ));
            }
            Support::Truncated { radius: radius - 1 }
        }
    };
    let mut out = IndElem {
        cfg,
        r: x.r,
        j: x.j,
        side: x.side,
        support: out_support.clone(),
        values: Default::default(),
    };
    // target vertices: neighbors of the support (compact) or the smaller ball
    let targets: Vec<Vertex> = match out_support {
        Support::Compact => {
            let mut set = std::collections::BTreeSet::new();
            for s in x.support_vertices() {
                for n in neighbors(&s) {
                    set.insert(n);
                }
            }
            set.into_iter().collect()
        }
        Support::Truncated { radius } => ball(&Vertex::base(cfg.p), radius),
    };
    for t in targets {
        let mut acc = SymVec::zero(&cfg, x.r, x.j);
        let t_rep = t.rep_matrix();
        for n in neighbors(&t) {
            let v = x.value_at(&n);
            if v.is_zero() {
                continue;
            }
            let h = t_rep.mul(&n.rep_matrix().inv()?);
            let phi = phi_r(&cfg, x.r, x.j, &h)?;
            acc = acc.add(&phi.apply(&cfg, &v));
        }
        out.add_value(t, &acc);
    }
    Ok(out)
}

/// The invariant pairing of a compactly supported element on the dual side
/// with an arbitrary element: the finite sum of the pointwise dual pairings.
pub fn pairing(f1: &IndElem, f2: &IndElem) -> Result<Fq2> {
    if f1.side != Side::Dual || f2.side != Side::Std {
        return Err(Error::Domain("pairing takes (dual side, std side)".into()));
    }
    if (f1.r, f1.j) != (f2.r, f2.j) {
        return Err(Error::Domain("pairing with mismatched (r, j) parameters".into()));
    }
    if f1.support != Support::Compact {
        return Err(Error::Domain("the left pairing argument must have compact support".into()));
    }
    if let Support::Truncated { radius } = f2.support {
        let base = Vertex::base(f1.cfg.p);
        for s in f1.support_vertices() {
            if crate::tree::distance(&base, &s) > radius {
                return Err(Error::Domain(
                    "pairing against a truncated element outside its valid ball".into(),
                ));
            }
        }
    }
    let cfg = f1.cfg;
    let mut acc = Fq2::zero(&cfg);
    for (s, v1) in &f1.values {
        let v2 = f2.value_at(s);
        for (a, b) in v1.coeffs.iter().zip(&v2.coeffs) {
            acc = acc.add(a.mul(*b));
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::canonical_form;

    fn cfg3() -> PrimeConfig {
        PrimeConfig::new(3, 2).unwrap()
    }

    #[test]
    fn phi0_rules() {
        let cfg = cfg3();
        let p = cfg.p;
        let g = GMatrix::new(
            Qp::one(p),
            Qp::zero(p),
            Qp::zero(p),
            Qp::from_int_div_p(p, 1, 1),
        );
        let r = 2;
        let phi = phi_r(&cfg, r, 0, &g).unwrap();
        // y^r fixed
        let yr = SymVec::monomial(&cfg, r, 0, 0);
        assert_eq!(phi.apply(&cfg, &yr), yr);
        // x^k y^(r-k) killed for k != 0
        for k in 1..=r as usize {
            let v = SymVec::monomial(&cfg, r, 0, k);
            assert!(phi.apply(&cfg, &v).is_zero());
        }
        // identity is off the double coset
        let z = phi_r(&cfg, r, 0, &GMatrix::identity(p)).unwrap();
        assert_eq!(z, PhiRMap::zero());
    }

    #[test]
    fn phi_r_factorization_independence() {
        let cfg = PrimeConfig::new(5, 2).unwrap();
        let p = cfg.p;
        // the same double coset element written two ways
        let g = GMatrix::new(
            Qp::one(p),
            Qp::zero(p),
            Qp::zero(p),
            Qp::from_int_div_p(p, 1, 1),
        );
        let k = GMatrix::from_ints(p, 2, 1, 3, 5);
        let gk = g.mul(&k);
        let kg = k.mul(&g);
        for h in [gk, kg] {
            let phi = phi_r(&cfg, 3, 1, &h).unwrap();
            assert!(phi.matrix.is_some());
            // well-definedness: compare against the defining composition
            let (k1, a, b, k2) = smith_gl2(&h).unwrap();
            assert_eq!(b - a, 1);
            let recomposed = k1
                .mul(&GMatrix::new(
                    Qp::p_pow(p, a),
                    Qp::zero(p),
                    Qp::zero(p),
                    Qp::p_pow(p, b),
                ))
                .mul(&k2);
            // the factorization reproduces h up to the carried precision
            for (x, y) in [
                (recomposed.a, h.a),
                (recomposed.b, h.b),
                (recomposed.c, h.c),
                (recomposed.d, h.d),
            ] {
                let d = x.sub(y);
                if !d.is_zero_exact() {
                    assert!(d.valuation().map(|v| v >= 10).unwrap_or(true));
                }
            }
        }
    }

    #[test]
    fn hecke_lemma_t_terms() {
        // T([Id, y^(p-1-i)]) has the term [w, x^(p-1-i)]; the coefficient at w
        // vanishes for the other monomials.
        for p in [3u64, 5] {
            let cfg = PrimeConfig::new(p, 2).unwrap();
            for i in 1..=(p - 1) as i64 {
                let r = (p as i64 - 1) - i;
                let j = 0;
                let w = GMatrix::w(p);
                let s0 = canonical_form(&w).unwrap();
                for k in 0..=r as usize {
                    let v = SymVec::monomial(&cfg, r, j, k);
                    let x =
                        IndElem::basis_element(&cfg, Side::Std, &GMatrix::identity(p), &v)
                            .unwrap();
                    let tx = hecke_t(&x).unwrap();
                    let at_s0 = tx.value_at(&s0);
                    if k == 0 {
                        // [w, x^r] normalized at the canonical representative
                        let expect = IndElem::basis_element(
                            &cfg,
                            Side::Std,
                            &w,
                            &SymVec::monomial(&cfg, r, j, r as usize),
                        )
                        .unwrap();
                        assert_eq!(at_s0, expect.value_at(&s0));
                        assert!(!at_s0.is_zero());
                    } else {
                        assert!(at_s0.is_zero(), "p={p} i={i} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn hecke_lemma_tt_term() {
        // T^2([Id, y^(p-2)]) contains [[[1,1/p],[0,1]], -x^(p-2)].
        for p in [3u64, 5] {
            let cfg = PrimeConfig::new(p, 2).unwrap();
            let r = p as i64 - 2;
            let v = SymVec::monomial(&cfg, r, 0, 0); // y^(p-2)
            let x = IndElem::basis_element(&cfg, Side::Std, &GMatrix::identity(p), &v).unwrap();
            let ttx = hecke_t(&hecke_t(&x).unwrap()).unwrap();
            let u = GMatrix::new(
                Qp::one(p),
                Qp::from_int_div_p(p, 1, 1),
                Qp::zero(p),
                Qp::one(p),
            );
            let s = canonical_form(&u.inv().unwrap()).unwrap();
            let expect = IndElem::basis_element(
                &cfg,
                Side::Std,
                &u,
                &SymVec::monomial(&cfg, r, 0, r as usize).scale(Fq2::one(&cfg).neg()),
            )
            .unwrap();
            assert_eq!(ttx.value_at(&s), expect.value_at(&s));
            assert!(!ttx.value_at(&s).is_zero());
        }
    }

    #[test]
    fn hecke_support_contract() {
        let cfg = cfg3();
        let p = cfg.p;
        let v = SymVec::monomial(&cfg, 1, 0, 1);
        let x = IndElem::basis_element(&cfg, Side::Std, &GMatrix::w(p), &v).unwrap();
        let tx = hecke_t(&x).unwrap();
        let allowed: std::collections::BTreeSet<_> = x
            .support_vertices()
            .iter()
            .flat_map(neighbors)
            .collect();
        for s in tx.support_vertices() {
            assert!(allowed.contains(&s));
        }
        // for generic v, the p+1 nonzero terms of T([Id, v]) sit exactly on
        // the p+1 neighbors of the base vertex (special monomials can drop a
        // term, which is what the k != 0 cases above record)
        let nb: std::collections::BTreeSet<_> =
            neighbors(&Vertex::base(p)).into_iter().collect();
        let mut found_generic = false;
        for c1 in crate::arith::fp::all_fq2(&cfg) {
            let mut v = SymVec::monomial(&cfg, 1, 0, 0);
            v.coeffs[1] = c1;
            let y = IndElem::basis_element(&cfg, Side::Std, &GMatrix::identity(p), &v).unwrap();
            let ty = hecke_t(&y).unwrap();
            let supp: std::collections::BTreeSet<_> =
                ty.support_vertices().into_iter().collect();
            assert!(supp.is_subset(&nb));
            if supp == nb {
                found_generic = true;
            }
        }
        assert!(found_generic);
    }

    #[test]
    fn pairing_dual_basis() {
        let cfg = cfg3();
        let p = cfg.p;
        let r = 2;
        let id = GMatrix::identity(p);
        // f1 = [Id, delta dual to y^r], f2 = [Id, y^r] -> 1
        let f1 = IndElem::basis_element(&cfg, Side::Dual, &id, &SymVec::monomial(&cfg, r, 0, 0))
            .unwrap();
        let f2 = IndElem::basis_element(&cfg, Side::Std, &id, &SymVec::monomial(&cfg, r, 0, 0))
            .unwrap();
        assert_eq!(pairing(&f1, &f2).unwrap(), Fq2::one(&cfg));
        // disjoint supports -> 0
        let f3 = IndElem::basis_element(&cfg, Side::Std, &GMatrix::w(p), &SymVec::monomial(&cfg, r, 0, 0))
            .unwrap();
        assert!(pairing(&f1, &f3).unwrap().is_zero());
    }

    #[test]
    fn pairing_invariance() {
        let cfg = cfg3();
        let p = cfg.p;
        let r = 2;
        let id = GMatrix::identity(p);
        let f1 = IndElem::basis_element(&cfg, Side::Dual, &id, &SymVec::monomial(&cfg, r, 1, 1))
            .unwrap();
        let f2v = SymVec::monomial(&cfg, r, 1, 1).add(&SymVec::monomial(&cfg, r, 1, 2));
        let f2 = IndElem::basis_element(&cfg, Side::Std, &id, &f2v).unwrap();
        let before = pairing(&f1, &f2).unwrap();
        for g in [
            GMatrix::w(p),
            GMatrix::from_ints(p, 1, 1, 1, 2),
            GMatrix::from_ints(p, 0, 1, 3, 0).mul(&GMatrix::w(p)),
        ] {
            let after = pairing(&f1.act(&g).unwrap(), &f2.act(&g).unwrap()).unwrap();
            assert_eq!(after, before);
        }
    }
}
