//! Character bookkeeping: the exponent m of a character of F_{p^2}^x and its
//! decomposition m = i + (p+1) j.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A character exponent m in {1, ..., p^2-2} with (p+1) not dividing m,
/// together with the derived quantities used everywhere downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSpec {
    pub p: u64,
    pub m: u64,
    /// i in {1, ..., p}
    pub i: u64,
    /// j in {0, ..., p-2}
    pub j: u64,
    /// [-mp]: the representative of -mp in {0, ..., p^2-2}
    pub bracket_minus_mp: u64,
}

impl CharSpec {
    pub fn new(p: u64, m: i64) -> Result<Self> {
        let order = (p * p - 1) as i64;
        if m < 1 || m > order - 1 {
            return Err(Error::InvalidParameter(format!(
                "m = {m} out of range 1..{}",
                order - 1
            )));
        }
        let m = m as u64;
        if m % (p + 1) == 0 {
            return Err(Error::FrobeniusFixedCharacter { m: m as i64 });
        }
        let i = m % (p + 1);
        let j = (m - i) / (p + 1);
        debug_assert!((1..=p).contains(&i));
        debug_assert!(j <= p - 2);
        let bracket_minus_mp = bracket(p, -((m * p) as i64));
        Ok(CharSpec { p, m, i, j, bracket_minus_mp })
    }

    /// All valid exponents for the prime, in ascending order.
    pub fn all(p: u64) -> Vec<CharSpec> {
        (1..p * p - 1)
            .filter(|m| m % (p + 1) != 0)
            .map(|m| CharSpec::new(p, m as i64).unwrap())
            .collect()
    }

    /// The Frobenius-twisted character chi^p, with exponent [pm].
    pub fn frobenius_twist(&self) -> CharSpec {
        CharSpec::new(self.p, bracket(self.p, (self.m * self.p) as i64) as i64).unwrap()
    }

    /// p^2 - 1 - m, the pi-power weight attached to the chi'-side.
    pub fn co_exponent(&self) -> u64 {
        self.p * self.p - 1 - self.m
    }
}

/// [n]: the representative of n modulo p^2 - 1 in {0, ..., p^2-2}.
pub fn bracket(p: u64, n: i64) -> u64 {
    n.rem_euclid((p * p - 1) as i64) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_arithmetic() {
        let c = CharSpec::new(5, 13).unwrap();
        assert_eq!((c.i, c.j), (1, 2));
        assert_eq!(c.bracket_minus_mp, 7); // [-65] mod 24

        let c = CharSpec::new(3, 7).unwrap();
        assert_eq!((c.i, c.j), (3, 1));
        assert_eq!(c.bracket_minus_mp, 3); // [-21] mod 8
    }

    #[test]
    fn frobenius_fixed_rejected() {
        assert!(matches!(
            CharSpec::new(3, 4),
            Err(Error::FrobeniusFixedCharacter { m: 4 })
        ));
    }

    #[test]
    fn decomposition_bijective() {
        for p in [3u64, 5, 7] {
            let all = CharSpec::all(p);
            let expected = (p * p - 2) - (p - 2); // remove multiples of p+1 in range
            assert_eq!(all.len(), expected as usize);
            let mut seen = std::collections::BTreeSet::new();
            for c in &all {
                assert_eq!(c.m, c.i + (p + 1) * c.j);
                assert!((1..=p).contains(&c.i));
                assert!(c.j <= p - 2);
                assert!(seen.insert((c.i, c.j)));
            }
        }
    }
}
