//! Exact linear algebra over F_{p^2} (a field) and over the local ring
//! Z_{p^2}/p^N, where pivots are restricted to units and p-divisions are
//! explicit.

use crate::arith::fp::{Fq2, PrimeConfig};
use crate::arith::witt::WittElem;
use crate::error::{Error, Result};

/// Dense matrix over F_{p^2}, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatFq2 {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fq2>,
}

impl MatFq2 {
    pub fn zeros(cfg: &PrimeConfig, rows: usize, cols: usize) -> Self {
        MatFq2 { rows, cols, data: vec![Fq2::zero(cfg); rows * cols] }
    }

    pub fn at(&self, i: usize, j: usize) -> Fq2 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fq2) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, v: &[Fq2], cfg: &PrimeConfig) -> Vec<Fq2> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Fq2::zero(cfg); self.rows];
        for i in 0..self.rows {
            let mut acc = Fq2::zero(cfg);
            for j in 0..self.cols {
                acc = acc.add(self.at(i, j).mul(v[j]));
            }
            out[i] = acc;
        }
        out
    }

    /// In-place row echelon; returns pivot column per pivot row.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r >= self.rows {
                break;
            }
            let mut pr = None;
            for i in r..self.rows {
                if !self.at(i, c).is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            // swap rows
            for j in 0..self.cols {
                let t = self.at(r, j);
                self.set(r, j, self.at(pr, j));
                self.set(pr, j, t);
            }
            let inv = self.at(r, c).inv().expect("pivot nonzero");
            for j in 0..self.cols {
                self.set(r, j, self.at(r, j).mul(inv));
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c);
                    for j in 0..self.cols {
                        let v = self.at(i, j).sub(f.mul(self.at(r, j)));
                        self.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// A basis of the right kernel.
    pub fn kernel_basis(&self, cfg: &PrimeConfig) -> Vec<Vec<Fq2>> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().cloned().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Fq2::zero(cfg); self.cols];
            v[free] = Fq2::one(cfg);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve self * x = b, least structure: returns any solution.
    pub fn solve(&self, b: &[Fq2], cfg: &PrimeConfig) -> Option<Vec<Fq2>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = MatFq2::zeros(cfg, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.row_reduce();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![Fq2::zero(cfg); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, self.cols);
        }
        Some(x)
    }
}

/// Dense matrix over W = Z_{p^2}/p^N.
#[derive(Debug, Clone)]
pub struct MatW {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<WittElem>,
}

impl MatW {
    pub fn zeros(cfg: &PrimeConfig, rows: usize, cols: usize) -> Self {
        MatW { rows, cols, data: vec![WittElem::zero(cfg); rows * cols] }
    }

    pub fn at(&self, i: usize, j: usize) -> WittElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: WittElem) {
        self.data[i * self.cols + j] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Solve A x = b over W by Smith reduction with unit pivots only. Every
/// element of W is p^k * unit, so the diagonal becomes p-power times unit and
/// divisions are explicit: a solution exists iff each reduced coordinate is
/// divisible by the matching diagonal p-power at the carried precision.
pub struct SmithSolver {
    cfg: PrimeConfig,
    /// Diagonalized matrix (diagonal entries in the leading positions).
    d: Vec<WittElem>,
    rank: usize,
    /// Row transform: applied to the target.
    u: MatW,
    /// Column transform: applied to recover the solution.
    v: MatW,
    n_cols: usize,
}

impl SmithSolver {
    pub fn new(cfg: &PrimeConfig, a: &MatW) -> Self {
        let mut m = a.clone();
        let mut u = MatW::zeros(cfg, a.rows, a.rows);
        let mut v = MatW::zeros(cfg, a.cols, a.cols);
        for i in 0..a.rows {
            u.set(i, i, WittElem::one(cfg));
        }
        for j in 0..a.cols {
            v.set(j, j, WittElem::one(cfg));
        }
        let mut d = Vec::new();
        let mut k = 0;
        while k < m.rows.min(m.cols) {
            // find the entry of minimal valuation in the remaining block
            let mut best: Option<(usize, usize, u32)> = None;
            for i in k..m.rows {
                for j in k..m.cols {
                    let e = m.at(i, j);
                    if e.is_zero() {
                        continue;
                    }
                    let val = e.valuation();
                    if best.map_or(true, |(_, _, bv)| val < bv) {
                        best = Some((i, j, val));
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            m.swap_rows(k, pi);
            u.swap_rows(k, pi);
            m.swap_cols(k, pj);
            v.swap_cols(k, pj);
            let pivot = m.at(k, k);
            let val = pivot.valuation();
            // pivot = p^val * unit; scale the row by unit^-1
            let unit = pivot.div_exact_p(val).expect("valuation computed");
            let unit_inv = unit.inv().expect("unit by construction");
            for j in 0..m.cols {
                m.set(k, j, m.at(k, j).mul(unit_inv));
            }
            for j in 0..u.cols {
                u.set(k, j, u.at(k, j).mul(unit_inv));
            }
            // clear the column below (quotients are integral: min valuation)
            for i in (k + 1)..m.rows {
                let e = m.at(i, k);
                if e.is_zero() {
                    continue;
                }
                let q = e.div_exact_p(val).expect("minimal pivot valuation");
                for j in 0..m.cols {
                    let t = m.at(i, j).sub(q.mul(m.at(k, j)));
                    m.set(i, j, t);
                }
                for j in 0..u.cols {
                    let t = u.at(i, j).sub(q.mul(u.at(k, j)));
                    u.set(i, j, t);
                }
            }
            // clear the row to the right via column operations
            for j in (k + 1)..m.cols {
                let e = m.at(k, j);
                if e.is_zero() {
                    continue;
                }
                let q = e.div_exact_p(val).expect("minimal pivot valuation");
                for i in 0..m.rows {
                    let t = m.at(i, j).sub(m.at(i, k).mul(q));
                    m.set(i, j, t);
                }
                for i in 0..v.rows {
                    let t = v.at(i, j).sub(v.at(i, k).mul(q));
                    v.set(i, j, t);
                }
            }
            d.push(m.at(k, k));
            k += 1;
        }
        SmithSolver { cfg: *cfg, d, rank: k, u, v, n_cols: a.cols }
    }

    /// Any solution of A x = b, or None (either genuinely inconsistent or
    /// inconsistent at the carried precision).
    pub fn solve(&self, b: &[WittElem]) -> Option<Vec<WittElem>> {
        let cfg = &self.cfg;
        assert_eq!(b.len(), self.u.rows);
        // c = U b
        let mut c = vec![WittElem::zero(cfg); self.u.rows];
        for i in 0..self.u.rows {
            let mut acc = WittElem::zero(cfg);
            for j in 0..self.u.cols {
                acc = acc.add(self.u.at(i, j).mul(b[j]));
            }
            c[i] = acc;
        }
        let mut y = vec![WittElem::zero(cfg); self.n_cols];
        for i in 0..self.u.rows {
            if i < self.rank {
                let val = self.d[i].valuation();
                match c[i].div_exact_p(val) {
                    Ok(q) => y[i] = q,
                    Err(_) => return None,
                }
            } else if !c[i].is_zero() {
                return None;
            }
        }
        // x = V y
        let mut x = vec![WittElem::zero(cfg); self.n_cols];
        for i in 0..self.n_cols {
            let mut acc = WittElem::zero(cfg);
            for j in 0..self.n_cols {
                acc = acc.add(self.v.at(i, j).mul(y[j]));
            }
            x[i] = acc;
        }
        Some(x)
    }

    /// Diagonal valuations (the p-power elementary divisors found).
    pub fn divisor_valuations(&self) -> Vec<u32> {
        self.d.iter().map(|e| e.valuation()).collect()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Convenience: verify A x = b exactly.
pub fn check_solution(cfg: &PrimeConfig, a: &MatW, x: &[WittElem], b: &[WittElem]) -> bool {
    for i in 0..a.rows {
        let mut acc = WittElem::zero(cfg);
        for j in 0..a.cols {
            acc = acc.add(a.at(i, j).mul(x[j]));
        }
        if acc != b[i] {
            return false;
        }
    }
    true
}

/// Assert that the claimed error type for division shows up where expected.
pub fn require_unit(cfg: &PrimeConfig, w: &WittElem, context: &str) -> Result<()> {
    let _ = cfg;
    if w.is_unit() {
        Ok(())
    } else {
        Err(Error::Precision { context: context.to_string(), needed: w.n + 1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fq2_kernel_and_rank() {
        let cfg = PrimeConfig::new(3, 2).unwrap();
        let mut m = MatFq2::zeros(&cfg, 2, 3);
        m.set(0, 0, Fq2::from_int(&cfg, 1));
        m.set(0, 1, Fq2::from_int(&cfg, 2));
        m.set(1, 2, Fq2::from_int(&cfg, 1));
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis(&cfg);
        assert_eq!(ker.len(), 1);
        for v in &ker {
            for e in m.mul_vec(v, &cfg) {
                assert!(e.is_zero());
            }
        }
    }

    #[test]
    fn smith_solver_with_p_divisions() {
        let cfg = PrimeConfig::new(3, 4).unwrap();
        // A = [[3, 1], [0, 3]] over W: solving A x = (1, 3) needs a p-division
        let mut a = MatW::zeros(&cfg, 2, 2);
        a.set(0, 0, WittElem::from_int(&cfg, 3));
        a.set(0, 1, WittElem::from_int(&cfg, 1));
        a.set(1, 1, WittElem::from_int(&cfg, 3));
        let solver = SmithSolver::new(&cfg, &a);
        let b = vec![WittElem::from_int(&cfg, 1), WittElem::from_int(&cfg, 3)];
        let x = solver.solve(&b).unwrap();
        assert!(check_solution(&cfg, &a, &x, &b));
        // and an unsolvable target: A x = (0, 1) forces 3 | 1
        let b2 = vec![WittElem::from_int(&cfg, 0), WittElem::from_int(&cfg, 1)];
        assert!(solver.solve(&b2).is_none());
    }
}
