//! Sym^r F_{p^2}^2 (x) det^j representations of GL_2(Z_p) Q_p^x and the
//! (compactly) induced spaces on the tree, with Breuil's Hecke operator.

pub mod hecke;
pub mod ind;

pub use hecke::{hecke_t, pairing, phi_r, PhiRMap};
pub use ind::{IndElem, Side, Support};

use serde::{Deserialize, Serialize};

use crate::arith::fp::{Fq2, PrimeConfig};
use crate::error::{Error, Result};
use crate::tree::GMatrix;

/// A vector of Sym^r (x) det^j with F_{p^2} coefficients in the monomial
/// basis x^k y^(r-k), k = 0..r. A degree of -1 encodes the zero space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymVec {
    pub r: i64,
    pub j: i64,
    pub coeffs: Vec<Fq2>,
}

impl SymVec {
    pub fn zero(cfg: &PrimeConfig, r: i64, j: i64) -> Self {
        let dim = if r < 0 { 0 } else { (r + 1) as usize };
        SymVec { r, j, coeffs: vec![Fq2::zero(cfg); dim] }
    }

    /// The basis monomial x^k y^(r-k).
    pub fn monomial(cfg: &PrimeConfig, r: i64, j: i64, k: usize) -> Self {
        assert!(r >= 0 && k <= r as usize);
        let mut v = Self::zero(cfg, r, j);
        v.coeffs[k] = Fq2::one(cfg);
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &SymVec) -> SymVec {
        assert_eq!((self.r, self.j), (o.r, o.j));
        SymVec {
            r: self.r,
            j: self.j,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(*b)).collect(),
        }
    }

    pub fn sub(&self, o: &SymVec) -> SymVec {
        assert_eq!((self.r, self.j), (o.r, o.j));
        SymVec {
            r: self.r,
            j: self.j,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(*b)).collect(),
        }
    }

    pub fn scale(&self, c: Fq2) -> SymVec {
        SymVec { r: self.r, j: self.j, coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }
}

/// Matrix of the action of g (mod p residues [a, b, c, d]) on Sym^r (x) det^j:
/// the substitution x -> a x + c y, y -> b x + d y, times det(g)^j.
/// Returned column-major: column k is the image of x^k y^(r-k).
pub fn sym_matrix(cfg: &PrimeConfig, r: i64, j: i64, abcd: [u64; 4]) -> Result<Vec<SymVec>> {
    let _p = cfg.p;
    let [a, b, c, d] = abcd.map(|t| Fq2::from_int(cfg, t as i64));
    let det = a.mul(d).sub(b.mul(c));
    if det.is_zero() {
        return Err(Error::Singular);
    }
    if r < 0 {
        return Ok(vec![]);
    }
    let r_us = r as usize;
    let detj = det.pow(j);
    // powers of (a x + c y) and (b x + d y) as coefficient vectors
    let mut pow_ac: Vec<Vec<Fq2>> = vec![vec![Fq2::one(cfg)]];
    let mut pow_bd: Vec<Vec<Fq2>> = vec![vec![Fq2::one(cfg)]];
    for k in 1..=r_us {
        pow_ac.push(poly_mul_linear(cfg, &pow_ac[k - 1], a, c));
        pow_bd.push(poly_mul_linear(cfg, &pow_bd[k - 1], b, d));
    }
    let mut cols = Vec::with_capacity(r_us + 1);
    for k in 0..=r_us {
        // (a x + c y)^k (b x + d y)^(r-k)
        let prod = poly_mul(cfg, &pow_ac[k], &pow_bd[r_us - k]);
        let mut v = SymVec::zero(cfg, r, j);
        for (deg_x, coeff) in prod.into_iter().enumerate() {
            v.coeffs[deg_x] = coeff.mul(detj);
        }
        cols.push(v);
    }
    Ok(cols)
}

/// Multiply a homogeneous poly (coeff of x^t y^(deg-t) at index t) by (ux + vy).
fn poly_mul_linear(cfg: &PrimeConfig, poly: &[Fq2], u: Fq2, v: Fq2) -> Vec<Fq2> {
    let mut out = vec![Fq2::zero(cfg); poly.len() + 1];
    for (t, &c) in poly.iter().enumerate() {
        out[t + 1] = out[t + 1].add(c.mul(u));
        out[t] = out[t].add(c.mul(v));
    }
    out
}

fn poly_mul(cfg: &PrimeConfig, a: &[Fq2], b: &[Fq2]) -> Vec<Fq2> {
    let mut out = vec![Fq2::zero(cfg); a.len() + b.len() - 1];
    for (s, &x) in a.iter().enumerate() {
        for (t, &y) in b.iter().enumerate() {
            out[s + t] = out[s + t].add(x.mul(y));
        }
    }
    out
}

/// Apply the Sym^r (x) det^j action of a mod-p invertible matrix.
pub fn sym_act_residues(cfg: &PrimeConfig, abcd: [u64; 4], v: &SymVec) -> Result<SymVec> {
    let cols = sym_matrix(cfg, v.r, v.j, abcd)?;
    let mut out = SymVec::zero(cfg, v.r, v.j);
    for (k, c) in v.coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&cols[k].scale(*c));
        }
    }
    Ok(out)
}

/// Apply the action of g in GL_2(Z_p) (p in the center acts trivially).
pub fn sym_act(cfg: &PrimeConfig, g: &GMatrix, v: &SymVec) -> Result<SymVec> {
    if !g.is_in_gl2_zp()? {
        return Err(Error::InvalidParameter("sym_act requires GL_2(Z_p)".into()));
    }
    sym_act_residues(cfg, g.residues_mod_pk(1)?, v)
}

/// The matrix of sym_act as a dense dim x dim array (row-major), used by the
/// dual action and by kernel assembly.
pub fn sym_matrix_dense(cfg: &PrimeConfig, r: i64, j: i64, abcd: [u64; 4]) -> Result<Vec<Vec<Fq2>>> {
    let cols = sym_matrix(cfg, r, j, abcd)?;
    let dim = if r < 0 { 0 } else { (r + 1) as usize };
    let mut m = vec![vec![Fq2::zero(cfg); dim]; dim];
    for (k, col) in cols.iter().enumerate() {
        for (row, c) in col.coeffs.iter().enumerate() {
            m[row][k] = *c;
        }
    }
    Ok(m)
}
