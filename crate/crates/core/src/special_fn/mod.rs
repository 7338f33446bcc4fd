//! Special functions and the bracketing root finder shared by the solvers.

mod erf;
mod lambert;
mod normal;
mod root;

pub use erf::{erfc, erfcx};
pub use lambert::{lambert_w0, lambert_w_minus1};
pub use normal::{mills_ratio, std_normal_cdf, std_normal_pdf, std_normal_sf};
pub use root::{expand_bracket_up, find_root, find_root_with, Bracket, RootOptions};
