//! Exact de Rham / crystalline cohomology of the Artin-Schreier curves
//! y^(p+1) = c (x^p - x) over F_{p^2}: isotypic bases, Cech hypercocycle
//! reduction, the lifted Frobenius, Gauss sums, and point counts.

pub mod cech;
pub mod count;
pub mod frobenius;
pub mod gauss;
pub mod poly;

pub use cech::{
    d_fn, d_fn_r, h0_basis, h1o_basis, star_to_two_chart, CechClass, CurveSpec,
};
pub use count::point_count;
pub use frobenius::{
    calibrate_w1, check_phi_square, closed_form_h1o_image, complete_f_cocycle,
    expected_phi_square_scalar, frobenius_h1o_mod_p, BlockSpace, CurveCohomology,
    FrobeniusEngine,
};
pub use gauss::{certify_gauss_sum, gauss_sum, GaussReport};
pub use poly::{LaurentW, RElem};
