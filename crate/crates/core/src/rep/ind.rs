//! Elements of (compactly) induced representations on the tree.
//!
//! An element is stored through its values at the canonical coset
//! representatives: the pair [g, v] is normalized to the value at the
//! canonical representative of its support vertex via [gh, v] = [g, sigma(h) v].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::fp::{Fq2, PrimeConfig};
use crate::error::{Error, Result};
use crate::rep::{sym_matrix_dense, SymVec};
use crate::tree::{act, ball, canonical_form, GMatrix, Qp, Vertex};

/// Which action transports values: the representation itself or its dual
/// (contragredient), used on the pairing side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Std,
    Dual,
}

/// Support descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Support {
    /// Finitely supported (compact induction).
    Compact,
    /// Truncated full induction: values are valid exactly on the ball of
    /// this radius around the base vertex.
    Truncated { radius: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndElem {
    pub cfg: PrimeConfig,
    pub r: i64,
    pub j: i64,
    pub side: Side,
    pub support: Support,
    pub values: BTreeMap<Vertex, SymVec>,
}

/// Factor h in GL_2(Z_p) Q_p^x as p^t k and return the residues of k mod p.
/// Errors when h is not in that subgroup at the carried precision.
pub fn factor_scalar_k(h: &GMatrix) -> Result<[u64; 4]> {
    let dv = h.det_valuation()?;
    if dv.rem_euclid(2) != 0 {
        return Err(Error::Domain("matrix not in GL_2(Z_p) Q_p^x: odd det valuation".into()));
    }
    let t = dv / 2;
    let k = h.scale(Qp::p_pow(h.p(), -t));
    if !k.is_in_gl2_zp()? {
        return Err(Error::Domain("matrix not in GL_2(Z_p) Q_p^x".into()));
    }
    k.residues_mod_pk(1)
}

/// Apply the transport sigma(k) (or its contragredient) to a value.
pub fn transport(
    cfg: &PrimeConfig,
    side: Side,
    abcd: [u64; 4],
    v: &SymVec,
) -> Result<SymVec> {
    match side {
        Side::Std => crate::rep::sym_act_residues(cfg, abcd, v),
        Side::Dual => {
            // contragredient: apply the transpose of sigma(k^-1)
            let p = cfg.p;
            let [a, b, c, d] = abcd;
            let det = ((a * d) as i64 - (b * c) as i64).rem_euclid(p as i64) as u64;
            let det_inv = crate::arith::fp::Fp { val: det, p }.inv()?.val;
            let inv = [
                d * det_inv % p,
                (p - b % p) % p * det_inv % p,
                (p - c % p) % p * det_inv % p,
                a * det_inv % p,
            ];
            let m = sym_matrix_dense(cfg, v.r, v.j, inv)?;
            let dim = v.dim();
            let mut out = SymVec::zero(cfg, v.r, v.j);
            for row in 0..dim {
                let mut acc = Fq2::zero(cfg);
                for col in 0..dim {
                    // transpose application
                    acc = acc.add(m[col][row].mul(v.coeffs[col]));
                }
                out.coeffs[row] = acc;
            }
            Ok(out)
        }
    }
}

impl IndElem {
    pub fn zero_compact(cfg: &PrimeConfig, r: i64, j: i64, side: Side) -> Self {
        IndElem { cfg: *cfg, r, j, side, support: Support::Compact, values: BTreeMap::new() }
    }

    pub fn zero_truncated(cfg: &PrimeConfig, r: i64, j: i64, side: Side, radius: u32) -> Self {
        IndElem {
            cfg: *cfg,
            r,
            j,
            side,
            support: Support::Truncated { radius },
            values: BTreeMap::new(),
        }
    }

    /// The element [g, v]: supported on the vertex of g^-1, with the value
    /// transported to the canonical representative.
    pub fn basis_element(
        cfg: &PrimeConfig,
        side: Side,
        g: &GMatrix,
        v: &SymVec,
    ) -> Result<Self> {
        let mut x = Self::zero_compact(cfg, v.r, v.j, side);
        x.add_term(g, v)?;
        Ok(x)
    }

    /// Add the term [g, v] into this element.
    pub fn add_term(&mut self, g: &GMatrix, v: &SymVec) -> Result<()> {
        assert_eq!((v.r, v.j), (self.r, self.j));
        let s = canonical_form(&g.adjugate())?;
        // value at the canonical representative T_s = (T_s g) g^-1:
        // f(T_s) = sigma(T_s g) v
        let h = s.rep_matrix().mul(g);
        let k = factor_scalar_k(&h)?;
        let val = transport(&self.cfg, self.side, k, v)?;
        self.add_value(s, &val);
        Ok(())
    }

    pub fn add_value(&mut self, s: Vertex, v: &SymVec) {
        if let Some(cur) = self.values.get(&s) {
            let sum = cur.add(v);
            if sum.is_zero() {
                self.values.remove(&s);
            } else {
                self.values.insert(s, sum);
            }
        } else if !v.is_zero() {
            self.values.insert(s, v.clone());
        }
    }

    /// The stored value at a vertex (zero when absent).
    pub fn value_at(&self, s: &Vertex) -> SymVec {
        self.values
            .get(s)
            .cloned()
            .unwrap_or_else(|| SymVec::zero(&self.cfg, self.r, self.j))
    }

    pub fn support_vertices(&self) -> Vec<Vertex> {
        self.values.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add_elem(&self, o: &IndElem) -> IndElem {
        assert_eq!(self.support, o.support);
        let mut out = self.clone();
        for (s, v) in &o.values {
            out.add_value(*s, v);
        }
        out
    }

    pub fn scale(&self, c: Fq2) -> IndElem {
        let mut out = self.clone();
        if c.is_zero() {
            out.values.clear();
            return out;
        }
        for v in out.values.values_mut() {
            *v = v.scale(c);
        }
        out
    }

    /// The left translation action (g . f)(x) = f(x g).
    pub fn act(&self, g: &GMatrix) -> Result<IndElem> {
        if let Support::Truncated { .. } = self.support {
            // require g to stabilize the base vertex so the ball is preserved
            let base = Vertex::base(self.cfg.p);
            if act(&base, g)? != base {
                return Err(Error::Domain(
                    "truncated elements only carry the action of the ball stabilizer".into(),
                ));
            }
        }
        // the adjugate spans the same coset as the inverse with exact entries
        let gadj = g.adjugate();
        let mut out = IndElem { values: BTreeMap::new(), ..self.clone() };
        for (s, v) in &self.values {
            let t = act(s, &gadj)?;
            // (g f)(T_t) = f(T_t g) = sigma(T_t g T_s^-1) f(T_s)
            let h = t.rep_matrix().mul(g).mul(&s.rep_matrix().inv()?);
            let k = factor_scalar_k(&h)?;
            let val = transport(&self.cfg, self.side, k, v)?;
            out.add_value(t, &val);
        }
        Ok(out)
    }

    /// Restrict a truncated element to a smaller radius.
    pub fn restrict(&self, radius: u32) -> IndElem {
        let base = Vertex::base(self.cfg.p);
        let keep: std::collections::BTreeSet<_> = ball(&base, radius).into_iter().collect();
        let values = self
            .values
            .iter()
            .filter(|(s, _)| keep.contains(s))
            .map(|(s, v)| (*s, v.clone()))
            .collect();
        IndElem { support: Support::Truncated { radius }, values, ..self.clone() }
    }

    /// Canonical JSON form: list of (vertex id, coefficient vector).
    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .values
            .iter()
            .map(|(s, v)| {
                serde_json::json!({
                    "vertex": s.id(),
                    "coeffs": v.coeffs.iter().map(|c| [c.c0, c.c1]).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "r": self.r,
            "j": self.j,
            "support": match self.support {
                Support::Compact => serde_json::json!("compact"),
                Support::Truncated { radius } => serde_json::json!({"radius": radius}),
            },
            "values": entries,
        })
    }
}
