//! Exact ground truth for piecewise-polynomial functions on dyadic boxes.

pub mod corpus;
mod func;
mod poly;
mod pw;
mod spec;

pub use func::{
    cell_average, convolve_mollifier, exact_integral, exact_lp_norm, mollifier_1d, mollifier_constant,
    mollifier_grad_sup, mollifier_integral, pow2q, shift_diff_norm, weak_derivative, Func, MollifierScale,
};
pub use poly::{bernstein, q, qi, rational_roots, rational_sqrt, Poly, Q};
pub use pw::{Enclosure, Prefix1, Pw};
pub use spec::{format_rational, parse_rational, FunctionSpec, Piece, RBox};
