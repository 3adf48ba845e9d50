//! Exact arithmetic in Z[x, y]/(Phi_p(x), Phi_{p^2-1}(y)), where x is a
//! primitive p-th root of unity and y a primitive (p^2-1)-th root of unity.
//!
//! Using the full cyclotomic polynomials as moduli (rather than x^n - 1)
//! makes "lies in Z[y]" a coordinate test on the integral basis
//! { x^i y^j : 0 <= i <= p-2, 0 <= j < phi(p^2-1) }.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer polynomials are dense little-endian coefficient vectors.
fn poly_trim(v: &mut Vec<i64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}


/// Exact division of integer polynomials (panics if not exact: only used on
/// products of cyclotomics where divisibility is guaranteed).
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut num = num.to_vec();
    poly_trim(&mut num);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    assert!(!den.is_empty());
    assert_eq!(*den.last().unwrap(), 1, "divisor must be monic");
    if num.len() < den.len() {
        assert!(num.is_empty());
        return vec![];
    }
    let mut q = vec![0i64; num.len() - den.len() + 1];
    for k in (0..q.len()).rev() {
        let c = num[k + den.len() - 1];
        q[k] = c;
        for (i, &d) in den.iter().enumerate() {
            num[k + i] -= c * d;
        }
    }
    poly_trim(&mut num);
    assert!(num.is_empty(), "inexact polynomial division");
    q
}

/// The n-th cyclotomic polynomial, computed by dividing x^n - 1 by the
/// cyclotomic polynomials of the proper divisors.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    let mut rem = num;
    for d in 1..n {
        if n % d == 0 {
            rem = poly_div_exact(&rem, &cyclotomic_poly(d));
        }
    }
    rem
}

/// Element of Z[x, y]/(Phi_p(x), Phi_{p^2-1}(y)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloElem {
    pub p: u64,
    /// coeffs[i][j] multiplies x^i y^j; i < p-1, j < phi(p^2-1).
    pub coeffs: Vec<Vec<i64>>,
}

/// Shared reduction tables for a fixed p.
#[derive(Debug, Clone)]
pub struct CycloRing {
    pub p: u64,
    pub phi_x: Vec<i64>,
    pub phi_y: Vec<i64>,
    pub dim_x: usize,
    pub dim_y: usize,
    /// x^k for k in [0, 2p) expressed on the basis 1..x^(p-2).
    x_reductions: Vec<Vec<i64>>,
    /// y^k for k in [0, 2(p^2-1)) expressed on the basis 1..y^(phi-1).
    y_reductions: Vec<Vec<i64>>,
}

impl CycloRing {
    pub fn new(p: u64) -> Self {
        let phi_x = cyclotomic_poly(p);
        let phi_y = cyclotomic_poly(p * p - 1);
        let dim_x = phi_x.len() - 1;
        let dim_y = phi_y.len() - 1;
        let x_reductions = power_table(&phi_x, 2 * p as usize);
        let y_reductions = power_table(&phi_y, 2 * (p * p - 1) as usize);
        CycloRing { p, phi_x, phi_y, dim_x, dim_y, x_reductions, y_reductions }
    }

    pub fn zero(&self) -> CycloElem {
        CycloElem { p: self.p, coeffs: vec![vec![0; self.dim_y]; self.dim_x] }
    }

    pub fn one(&self) -> CycloElem {
        let mut z = self.zero();
        z.coeffs[0][0] = 1;
        z
    }

    pub fn from_int(&self, v: i64) -> CycloElem {
        let mut z = self.zero();
        z.coeffs[0][0] = v;
        z
    }

    /// The monomial x^a y^b with arbitrary exponents (reduced mod the root
    /// orders first, then into the integral basis).
    pub fn monomial(&self, a: i64, b: i64) -> CycloElem {
        let a = a.rem_euclid(self.p as i64) as usize;
        let b = b.rem_euclid((self.p * self.p - 1) as i64) as usize;
        let xr = &self.x_reductions[a];
        let yr = &self.y_reductions[b];
        let mut z = self.zero();
        for (i, &xc) in xr.iter().enumerate() {
            for (j, &yc) in yr.iter().enumerate() {
                z.coeffs[i][j] += xc * yc;
            }
        }
        z
    }

    pub fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let mut z = a.clone();
        for i in 0..self.dim_x {
            for j in 0..self.dim_y {
                z.coeffs[i][j] += b.coeffs[i][j];
            }
        }
        z
    }

    pub fn sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        let mut z = a.clone();
        for i in 0..self.dim_x {
            for j in 0..self.dim_y {
                z.coeffs[i][j] -= b.coeffs[i][j];
            }
        }
        z
    }

    pub fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        // multiply as plain polynomials, then reduce both variables
        let mut acc = vec![vec![0i64; 2 * self.dim_y - 1]; 2 * self.dim_x - 1];
        for i in 0..self.dim_x {
            for j in 0..self.dim_y {
                let c = a.coeffs[i][j];
                if c == 0 {
                    continue;
                }
                for k in 0..self.dim_x {
                    for l in 0..self.dim_y {
                        let d = b.coeffs[k][l];
                        if d == 0 {
                            continue;
                        }
                        acc[i + k][j + l] = acc[i + k][j + l]
                            .checked_add(c.checked_mul(d).expect("overflow"))
                            .expect("overflow");
                    }
                }
            }
        }
        let mut z = self.zero();
        for (i, row) in acc.iter().enumerate() {
            let xr = &self.x_reductions[i];
            for (j, &c) in row.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let yr = &self.y_reductions[j];
                for (ii, &xc) in xr.iter().enumerate() {
                    if xc == 0 {
                        continue;
                    }
                    for (jj, &yc) in yr.iter().enumerate() {
                        z.coeffs[ii][jj] += c * xc * yc;
                    }
                }
            }
        }
        z
    }

    /// Complex conjugation: x -> x^(p-1), y -> y^(p^2-2).
    pub fn conj(&self, a: &CycloElem) -> CycloElem {
        let mut z = self.zero();
        for i in 0..self.dim_x {
            for j in 0..self.dim_y {
                let c = a.coeffs[i][j];
                if c == 0 {
                    continue;
                }
                let m = self.monomial(-(i as i64), -(j as i64));
                for ii in 0..self.dim_x {
                    for jj in 0..self.dim_y {
                        z.coeffs[ii][jj] += c * m.coeffs[ii][jj];
                    }
                }
            }
        }
        z
    }

    /// True when the element lies in the subring Z[y] (all coordinates with
    /// a nonzero x-exponent vanish in the integral basis).
    pub fn in_y_subring(&self, a: &CycloElem) -> bool {
        a.coeffs[1..].iter().all(|row| row.iter().all(|&c| c == 0))
    }

    /// Exact division by an integer; errors if any coordinate is not divisible.
    pub fn div_int(&self, a: &CycloElem, d: i64) -> Result<CycloElem> {
        let mut z = a.clone();
        for row in &mut z.coeffs {
            for c in row.iter_mut() {
                if *c % d != 0 {
                    return Err(Error::Domain(format!("coordinate {c} not divisible by {d}")));
                }
                *c /= d;
            }
        }
        Ok(z)
    }

    pub fn pow(&self, a: &CycloElem, e: u64) -> CycloElem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// True when a is a (p^2-1)-st or smaller root of unity of order dividing
    /// p+1 living in Z[y], i.e. an element of mu_{p+1}(Z[zeta_{p^2-1}]).
    pub fn is_mu_p_plus_1(&self, a: &CycloElem) -> bool {
        self.in_y_subring(a) && self.pow(a, self.p + 1) == self.one()
    }
}

fn power_table(modulus: &[i64], upto: usize) -> Vec<Vec<i64>> {
    let dim = modulus.len() - 1;
    let mut out: Vec<Vec<i64>> = Vec::with_capacity(upto);
    // k-th entry: x^k reduced; maintain a working vector
    let mut cur = vec![0i64; dim.max(1)];
    cur[0] = 1;
    for _ in 0..upto {
        out.push(cur.clone());
        // multiply by x
        let mut next = vec![0i64; dim + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] = c;
        }
        // reduce the top coefficient via the monic modulus
        let top = next[dim];
        if top != 0 {
            for i in 0..dim {
                next[i] -= top * modulus[i];
            }
        }
        next.pop();
        cur = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(24), vec![1, 0, 0, 0, -1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(48), {
            let mut v = vec![0i64; 17];
            v[0] = 1;
            v[8] = -1;
            v[16] = 1;
            v
        });
    }

    #[test]
    fn root_relations() {
        for p in [3u64, 5] {
            let ring = CycloRing::new(p);
            // 1 + x + ... + x^(p-1) = 0
            let mut s = ring.zero();
            for k in 0..p as i64 {
                s = ring.add(&s, &ring.monomial(k, 0));
            }
            assert_eq!(s, ring.zero());
            // y^(p^2-1) = 1
            assert_eq!(ring.monomial(0, (p * p - 1) as i64), ring.one());
        }
    }

    #[test]
    fn conjugation_involution() {
        let ring = CycloRing::new(3);
        let z = ring.add(&ring.monomial(1, 3), &ring.monomial(2, 5));
        let z = ring.add(&z, &ring.from_int(7));
        assert_eq!(ring.conj(&ring.conj(&z)), z);
        // conj is a ring map
        let w = ring.monomial(1, 1);
        assert_eq!(ring.conj(&ring.mul(&z, &w)), ring.mul(&ring.conj(&z), &ring.conj(&w)));
    }

    #[test]
    fn y_subring_detection() {
        let ring = CycloRing::new(5);
        assert!(ring.in_y_subring(&ring.monomial(0, 7)));
        assert!(!ring.in_y_subring(&ring.monomial(1, 7)));
        assert!(ring.in_y_subring(&ring.from_int(-12)));
    }
}
