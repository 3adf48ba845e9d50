//! The Bruhat-Tits tree of PGL_2(Q_p).
//!
//! Vertices are the cosets GL_2(Z_p) Q_p^x \ GL_2(Q_p), identified with
//! homothety classes of row lattices in Q_p^2. The canonical representative
//! of a class is upper triangular [[p^alpha, b], [0, p^gamma]] with
//! 0 <= b < p^gamma and min(alpha, gamma, v(b)) = 0.

pub mod chart;
pub mod fibre;
pub mod qp;

use serde::{Deserialize, Serialize};

pub use chart::{act_central_chart, act_component, ChartSubstitution, EdgeChart};
pub use fibre::{build_special_fibre, FibreNode, SpecialFibreGraph};
pub use qp::Qp;

use crate::error::{Error, Result};

/// 2x2 matrix over Q_p, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GMatrix {
    pub a: Qp,
    pub b: Qp,
    pub c: Qp,
    pub d: Qp,
}

impl GMatrix {
    pub fn new(a: Qp, b: Qp, c: Qp, d: Qp) -> Self {
        GMatrix { a, b, c, d }
    }

    pub fn from_ints(p: u64, a: i64, b: i64, c: i64, d: i64) -> Self {
        GMatrix {
            a: Qp::from_int(p, a),
            b: Qp::from_int(p, b),
            c: Qp::from_int(p, c),
            d: Qp::from_int(p, d),
        }
    }

    pub fn identity(p: u64) -> Self {
        Self::from_ints(p, 1, 0, 0, 1)
    }

    /// w = [[0, -1], [p, 0]].
    pub fn w(p: u64) -> Self {
        Self::from_ints(p, 0, -1, p as i64, 0)
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    pub fn mul(&self, o: &GMatrix) -> GMatrix {
        GMatrix {
            a: self.a.mul(o.a).add(self.b.mul(o.c)),
            b: self.a.mul(o.b).add(self.b.mul(o.d)),
            c: self.c.mul(o.a).add(self.d.mul(o.c)),
            d: self.c.mul(o.b).add(self.d.mul(o.d)),
        }
    }

    pub fn det(&self) -> Qp {
        self.a.mul(self.d).sub(self.b.mul(self.c))
    }

    pub fn inv(&self) -> Result<GMatrix> {
        let det = self.det();
        let di = det.inv()?;
        Ok(GMatrix {
            a: self.d.mul(di),
            b: self.b.neg().mul(di),
            c: self.c.neg().mul(di),
            d: self.a.mul(di),
        })
    }

    /// The adjugate [[d, -b], [-c, a]]: a scalar multiple of the inverse with
    /// exact entries, hence the same vertex coset.
    pub fn adjugate(&self) -> GMatrix {
        GMatrix { a: self.d, b: self.b.neg(), c: self.c.neg(), d: self.a }
    }

    pub fn scale(&self, s: Qp) -> GMatrix {
        GMatrix { a: self.a.mul(s), b: self.b.mul(s), c: self.c.mul(s), d: self.d.mul(s) }
    }

    /// v_p(det), decided exactly or an error.
    pub fn det_valuation(&self) -> Result<i64> {
        self.det().valuation()
    }

    /// True if all entries are integral and the determinant is a unit.
    pub fn is_in_gl2_zp(&self) -> Result<bool> {
        for e in [self.a, self.b, self.c, self.d] {
            if !e.is_integral()? {
                return Ok(false);
            }
        }
        Ok(self.det_valuation()? == 0)
    }

    /// Residues of the entries mod p^k; requires integrality.
    pub fn residues_mod_pk(&self, k: u32) -> Result<[u64; 4]> {
        Ok([
            self.a.residue_mod_pk(k)?,
            self.b.residue_mod_pk(k)?,
            self.c.residue_mod_pk(k)?,
            self.d.residue_mod_pk(k)?,
        ])
    }
}

/// Canonical vertex of the Bruhat-Tits tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex {
    pub alpha: u32,
    pub gamma: u32,
    /// Residue modulo p^gamma.
    pub b: u64,
    pub p: u64,
}

impl Vertex {
    /// The central (base) vertex.
    pub fn base(p: u64) -> Vertex {
        Vertex { alpha: 0, gamma: 0, b: 0, p }
    }

    /// Level n = alpha + gamma; parity = n mod 2.
    pub fn level(&self) -> u32 {
        self.alpha + self.gamma
    }

    pub fn is_even(&self) -> bool {
        self.level() % 2 == 0
    }

    /// The canonical coset representative [[p^alpha, b], [0, p^gamma]].
    pub fn rep_matrix(&self) -> GMatrix {
        let p = self.p;
        GMatrix {
            a: Qp::p_pow(p, self.alpha as i64),
            b: Qp::from_int(p, self.b as i64),
            c: Qp::zero(p),
            d: Qp::p_pow(p, self.gamma as i64),
        }
    }

    /// A stable identifier string, e.g. "v(1,2,7)".
    pub fn id(&self) -> String {
        format!("v({},{},{})", self.alpha, self.gamma, self.b)
    }
}

/// Canonical form of the coset GL_2(Z_p) Q_p^x g: left-K and scalar invariant.
pub fn canonical_form(g: &GMatrix) -> Result<Vertex> {
    let p = g.p();
    // rows r1 = (a, b), r2 = (c, d)
    let (mut r1, mut r2) = ((g.a, g.b), (g.c, g.d));
    let va = r1.0.valuation_or_inf()?;
    let vc = r2.0.valuation_or_inf()?;
    if va == i64::MAX && vc == i64::MAX {
        return Err(Error::Singular);
    }
    if vc < va {
        std::mem::swap(&mut r1, &mut r2);
    }
    // kill the (2,1) entry: r2 <- r2 - (r2.0 / r1.0) r1; exact zero there
    if !r2.0.is_zero_exact() {
        let q = r2.0.mul(r1.0.inv()?);
        r2 = (Qp::zero(p), r2.1.sub(q.mul(r1.1)));
    }
    // valuations of the triangular entries
    let alpha_raw = r1.0.valuation()?;
    let gamma_raw = r2.1.valuation()?;
    let vb = r1.1.valuation_or_inf()?;
    // homothety normalization: common scale so the minimum equals 0
    let t = alpha_raw.min(gamma_raw).min(vb);
    let alpha = (alpha_raw - t) as u32;
    let gamma = (gamma_raw - t) as u32;
    // normalize diagonal units: b <- b * p^alpha / r1.0, reduced mod p^gamma
    // (left multiplication by diag(u^-1, w^-1) with units u, w)
    let u_inv = r1.0.inv()?.mul(Qp::p_pow(p, alpha_raw));
    let b_scaled = r1.1.mul(u_inv).mul(Qp::p_pow(p, -t));
    let b = if gamma == 0 { 0 } else { b_scaled.residue_mod_pk(gamma)? };
    Ok(Vertex { alpha, gamma, b, p })
}

/// Right action of GL_2(Q_p) on vertices.
pub fn act(v: &Vertex, g: &GMatrix) -> Result<Vertex> {
    canonical_form(&v.rep_matrix().mul(g))
}

/// The p+1 neighbors of a vertex: index-p sublattices up to homothety.
pub fn neighbors(v: &Vertex) -> Vec<Vertex> {
    let p = v.p;
    let rep = v.rep_matrix();
    let (r1, r2) = ((rep.a, rep.b), (rep.c, rep.d));
    let mut out = Vec::with_capacity(p as usize + 1);
    for t in 0..p {
        // span{ r1 + t r2, p r2 }
        let row1 = (r1.0, r1.1.add(Qp::from_int(p, t as i64).mul(r2.1)));
        let m = GMatrix::new(row1.0, row1.1, Qp::zero(p), r2.1.mul(Qp::from_int(p, p as i64)));
        out.push(canonical_form(&m).expect("exact representative"));
    }
    // span{ r2, p r1 }
    let m = GMatrix::new(
        r1.0.mul(Qp::from_int(p, p as i64)),
        r1.1.mul(Qp::from_int(p, p as i64)),
        r2.0,
        r2.1,
    );
    out.push(canonical_form(&m).expect("exact representative"));
    debug_assert_eq!(
        out.iter().collect::<std::collections::BTreeSet<_>>().len(),
        out.len(),
        "neighbors must be distinct"
    );
    out
}

/// Tree distance: elementary-divisor gap of the change-of-lattice matrix.
pub fn distance(u: &Vertex, v: &Vertex) -> u32 {
    let c = v.rep_matrix().mul(&u.rep_matrix().inv().expect("canonical reps are invertible"));
    let det_val = c.det().valuation().expect("nonzero determinant");
    let min_entry = [c.a, c.b, c.c, c.d]
        .iter()
        .map(|e| e.valuation_or_inf().expect("exact entries"))
        .min()
        .unwrap();
    (det_val - 2 * min_entry) as u32
}

/// All vertices within distance radius of v, sorted canonically.
pub fn ball(v: &Vertex, radius: u32) -> Vec<Vertex> {
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(*v);
    let mut frontier = vec![*v];
    for _ in 0..radius {
        let mut next = Vec::new();
        for u in &frontier {
            for n in neighbors(u) {
                if seen.insert(n) {
                    next.push(n);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

/// Expected ball cardinality 1 + (p+1)(p^R - 1)/(p - 1).
pub fn ball_size_formula(p: u64, radius: u32) -> u64 {
    1 + (p + 1) * (p.pow(radius) - 1) / (p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s0(p: u64) -> Vertex {
        canonical_form(&GMatrix::w(p)).unwrap()
    }

    #[test]
    fn canonical_form_examples() {
        let p = 3;
        // identity -> central vertex
        assert_eq!(canonical_form(&GMatrix::identity(p)).unwrap(), Vertex::base(p));
        // w -> the odd vertex adjacent to the base
        let s0 = s0(p);
        assert_eq!(s0, Vertex { alpha: 1, gamma: 0, b: 0, p });
        assert!(!s0.is_even());
        assert_eq!(distance(&Vertex::base(p), &s0), 1);
        // scalars act trivially
        let pp = GMatrix::from_ints(p, p as i64, 0, 0, p as i64);
        assert_eq!(canonical_form(&pp).unwrap(), Vertex::base(p));
    }

    #[test]
    fn left_coset_invariance() {
        let p = 5;
        let g = GMatrix::from_ints(p, 7, 3, 25, 2);
        let v = canonical_form(&g).unwrap();
        // multiply by elements of GL_2(Z_p) and powers of p on the left
        let k = GMatrix::from_ints(p, 2, 1, 1, 1);
        assert_eq!(canonical_form(&k.mul(&g)).unwrap(), v);
        let kg = GMatrix::from_ints(p, 1, 0, 5, 1).mul(&g).scale(Qp::p_pow(p, -2));
        assert_eq!(canonical_form(&kg).unwrap(), v);
    }

    #[test]
    fn action_examples_from_the_geometry() {
        let p = 3;
        let base = Vertex::base(p);
        let w = GMatrix::w(p);
        let s0 = s0(p);
        // stabilizer
        let k = GMatrix::from_ints(p, 1, 1, 1, 2);
        assert_eq!(act(&base, &k).unwrap(), base);
        // base * w = s0
        assert_eq!(act(&base, &w).unwrap(), s0);
        // u = [[1, 1/p], [0, 1]] fixes s0 and sends s''0 = vertex(u^-1) to base
        let u = GMatrix::new(
            Qp::one(p),
            Qp::from_int_div_p(p, 1, 1),
            Qp::zero(p),
            Qp::one(p),
        );
        assert_eq!(act(&s0, &u).unwrap(), s0);
        let s2 = canonical_form(&u.inv().unwrap()).unwrap();
        assert_ne!(s2, base);
        assert_eq!(distance(&s2, &s0), 1);
        assert_eq!(distance(&base, &s2), 2);
        assert_eq!(act(&s2, &u).unwrap(), base);
    }

    #[test]
    fn ball_sizes() {
        for p in [3u64, 5] {
            for r in 0..=3 {
                let b = ball(&Vertex::base(p), r);
                assert_eq!(b.len() as u64, ball_size_formula(p, r));
            }
        }
        assert_eq!(ball_size_formula(3, 1), 5);
        assert_eq!(ball_size_formula(3, 2), 17);
    }

    #[test]
    fn parity_flips_across_edges() {
        let p = 3;
        for v in ball(&Vertex::base(p), 2) {
            for n in neighbors(&v) {
                assert_ne!(v.is_even(), n.is_even());
                assert_eq!(distance(&v, &n), 1);
            }
        }
    }

    #[test]
    fn action_composition() {
        let p = 3;
        let g = GMatrix::from_ints(p, 1, 2, 3, 1);
        let h = GMatrix::w(p);
        for v in ball(&Vertex::base(p), 2) {
            let lhs = act(&act(&v, &g).unwrap(), &h).unwrap();
            let rhs = act(&v, &g.mul(&h)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
