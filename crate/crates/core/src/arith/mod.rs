//! Exact arithmetic: F_p, F_{p^2}, truncated Witt vectors Z_{p^2}/p^N, the
//! ramified extension O_F/pi^K, cyclotomic integers for Gauss sums, and
//! character bookkeeping.

pub mod charspec;
pub mod cyclo;
pub mod eisenstein;
pub mod fp;
pub mod witt;

pub use charspec::{bracket, CharSpec};
pub use cyclo::{cyclotomic_poly, CycloElem, CycloRing};
pub use eisenstein::{omega2_value, EisensteinElem};
pub use fp::{all_fq2, multiplicative_generator, Fp, Fq2, PrimeConfig};
pub use witt::{teichmuller, w1_candidates, WittElem};
