//! Corridor tilings and their reduction to universal projection.

mod corridor;
mod encoding;
mod reduction;

pub use corridor::{
    check_tiling, counter_instance, counter_values, enumerate_tilings, enumerate_tilings_with,
    is_valid_tiling, solve_corridor, solve_corridor_with, Colour, CorridorInstance, RowGraph, Tile,
    Tiling, Violation, ROW_BUDGET,
};
pub use encoding::{
    comb, comb_mark, comb_regexes, comb_word, cond1_regex, cond2_regex, cond3_nfa, cond4_filter,
    cond5_filter, cond6_filter, cond_check, digit_alphabet, encode_tiling, in_li, Checker, SigmaI,
    CELL_CLOSE, CELL_OPEN, FORALL, ROW_CLOSE, ROW_OPEN,
};
pub use reduction::{
    allsuf, build_reduction, catch_all_tags, comb_automaton, condition_automata, filtered_product,
    guard_no_cell, guard_no_row, lift_to_pairs, preimages, rho_forall_member, rho_inverse,
    tag_dispatch, Reduction,
};
