//! Key-value config files mirroring the command-line flags.
//!
//! Grammar: one `key = value` pair per line; blank lines and lines starting
//! with `#` are ignored. Keys are the long flag names (p, m, i, j, b,
//! radius, precision, format, seed, out). Explicit command-line flags win
//! over config values.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    pub values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {path}"))?;
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("config line {} is not `key = value`: {line:?}", lineno + 1);
            };
            values.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn get_u64(&self, key: &str) -> Result<Option<u64>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => Ok(Some(v.parse().with_context(|| format!("config key {key}"))?)),
        }
    }

    pub fn get_string(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }
}

/// Parse a p-adic digit string for an element of O_E = Z_{p^2} along the
/// little-endian base-p expansion. Each digit is either an integer in
/// 0..p (the diagonal embedding of Z_p) or `a+bx` with the fixed basis
/// element x of F_{p^2} lifted multiplicatively digit by digit.
/// Examples for p = 3: `1`, `2,0,1` (= 2 + 0*3 + 1*9), `1+2x,0`.
pub fn parse_padic_digits(
    cfg: &sigma1_core::arith::PrimeConfig,
    s: &str,
) -> Result<sigma1_core::arith::WittElem> {
    use sigma1_core::arith::WittElem;
    let mut acc = WittElem::zero(cfg);
    let mut scale = WittElem::one(cfg);
    let p_elem = WittElem::from_int(cfg, cfg.p as i64);
    for (idx, raw) in s.split(',').enumerate() {
        let raw = raw.trim();
        let digit = if let Some((a, rest)) = raw.split_once('+') {
            let Some(b) = rest.strip_suffix('x') else {
                bail!("digit {idx}: expected `a+bx`, got {raw:?}");
            };
            let a: i64 = a.trim().parse().context("digit a-part")?;
            let b: i64 = b.trim().parse().context("digit b-part")?;
            if !(0..cfg.p as i64).contains(&a) || !(0..cfg.p as i64).contains(&b) {
                bail!("digit {idx}: parts must lie in 0..p");
            }
            WittElem::new(cfg, a, b)
        } else {
            let a: i64 = raw.parse().with_context(|| format!("digit {idx}"))?;
            if !(0..cfg.p as i64).contains(&a) {
                bail!("digit {idx}: must lie in 0..p");
            }
            WittElem::from_int(cfg, a)
        };
        acc = acc.add(digit.mul(scale));
        scale = scale.mul(p_elem);
    }
    Ok(acc)
}
