//! Buchi arithmetic: formulas over `<N, 0, 1, +, V_p>`, bounded evaluation
//! and the builders of the tiling formulas.

mod ast;
mod build;
mod eval;
mod prefix;
mod witness;

pub use ast::{Formula, Name, Opaque, OpaqueSem, OpaqueSolve, Term};
pub use build::{
    build_formula, comb_ruler_value, digit_at, etiling_prime_witness, etiling_witness,
    num_at_value, tile_bits, toy_instance, Builder, Params, FORMULA_NAMES,
};
pub use eval::{eval_bounded, eval_with_witness, is_power, largest_power_dividing, vp_eval};
pub use prefix::{prefix_shape, shortest_shape};
pub use witness::{format_env, parse_env};
