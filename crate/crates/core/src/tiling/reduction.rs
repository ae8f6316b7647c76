//! The reduction automaton: a tiling instance becomes an NFA over pairs
//! whose universal projection is the language of valid encodings.

use std::collections::{HashMap, HashSet};

use crate::convolution::padded_alphabet;
use crate::error::TilingError;
use crate::filters::{filter_nfa, unmark, Mark};
use crate::nfa::{Nfa, NfaBuilder, StateId};
use crate::ops::{inverse_hom_with, regex_to_nfa, relabel_hom, union_all, SubsetTable};
use crate::regex::Regex;
use crate::symbol::{Alphabet, Atom, Symbol};

use super::corridor::CorridorInstance;
use super::encoding::{
    comb_regexes, cond1_regex, cond2_regex, cond3_nfa, cond4_filter, cond5_filter, cond6_filter,
    SigmaI,
};

/// `rho^-1(a)`: the automaton over `Sigma_I x N_n` that ignores the
/// annotation.
pub fn rho_inverse(s: &SigmaI, a: &Nfa) -> Nfa {
    inverse_hom_with(a, &s.annotated(), |g| Some(g.prefix(1)))
        .expect("annotation of a known letter")
}

/// The single-letter automaton for `(x, d)`.
fn letter(s: &SigmaI, x: &Symbol, d: u32) -> Nfa {
    Nfa::word(s.annotated(), &[s.annotate(x, d)]).expect("annotated letter")
}

/// Copies transitions and final states of `a`, but not its initial states.
fn append_body(out: &mut NfaBuilder, a: &Nfa) -> StateId {
    let off = out.add_states(a.num_states());
    for (p, sym, q) in a.transitions() {
        out.add_transition(p + off, sym, q + off);
    }
    for q in a.finals() {
        out.set_final(q + off, true);
    }
    off
}

/// `C_n`: for each `i`, `rho^-1(A(E_i))` followed by the letter `(A, i)`.
pub fn comb_automaton(s: &SigmaI) -> Result<Nfa, TilingError> {
    let alpha = s.alphabet();
    let mut parts = Vec::new();
    for (i, e) in comb_regexes(s.n()).iter().enumerate() {
        let ei = rho_inverse(s, &regex_to_nfa(e, alpha)?);
        parts.push(crate::ops::concat(&ei, &letter(s, &s.mark(), i as u32))?);
    }
    let refs: Vec<&Nfa> = parts.iter().collect();
    Ok(union_all(&s.annotated(), &refs))
}

/// The product that runs `c_n` on the letters a filter automaton keeps and
/// ignores the letters it drops. Only reachable pairs are built.
pub fn filtered_product(s: &SigmaI, c_n: &Nfa, filter: &Nfa) -> Nfa {
    let ann = s.annotated();
    let base = s.alphabet();
    let digits = s.n() as usize + 1;
    let ann_idx: Vec<Vec<u32>> = base
        .iter()
        .map(|x| {
            (0..digits as u32)
                .map(|d| ann.index_of(&s.annotate(x, d)).expect("annotated"))
                .collect()
        })
        .collect();
    let fsym: Vec<(usize, Mark)> = filter
        .alphabet()
        .iter()
        .map(|m| {
            let (x, mk) = unmark(m).expect("marked letter");
            (base.index_of(&x).expect("base letter") as usize, mk)
        })
        .collect();
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut out = NfaBuilder::new(ann.clone());
    let mut get =
        |p: (StateId, StateId), out: &mut NfaBuilder, pairs: &mut Vec<(StateId, StateId)>| {
            *ids.entry(p).or_insert_with(|| {
                pairs.push(p);
                let q = out.add_state();
                out.set_final(q, c_n.is_final(p.0) && filter.is_final(p.1));
                q
            })
        };
    for &p in c_n.initial() {
        for &q in filter.initial() {
            let id = get((p, q), &mut out, &mut pairs);
            out.set_initial(id);
        }
    }
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for &(fs, q2) in filter.edges(q) {
            let (x, mk) = fsym[fs as usize];
            for &g in &ann_idx[x] {
                match mk {
                    Mark::Top => {
                        for p2 in c_n.successors(p, g) {
                            let id = get((p2, q2), &mut out, &mut pairs);
                            out.add_transition(i as StateId, g, id);
                        }
                    }
                    Mark::Bot => {
                        let id = get((p, q2), &mut out, &mut pairs);
                        out.add_transition(i as StateId, g, id);
                    }
                }
            }
        }
        i += 1;
    }
    if out.num_states() == 0 {
        return Nfa::empty(ann);
    }
    out.build()
}

/// `ALLSUF(a)`: one fresh state that reads annotation-0 letters in place
/// and enters `a` on any letter with a positive annotation. It is the only
/// initial state and is final.
pub fn allsuf(a: &Nfa) -> Nfa {
    let ann = a.alphabet().clone();
    let mut out = NfaBuilder::new(ann.clone());
    append_body(&mut out, a);
    let fresh = out.add_state();
    out.set_initial(fresh);
    out.set_final(fresh, true);
    for (gi, sym) in ann.iter().enumerate() {
        let g = gi as u32;
        if sym.atom(1).numeral() == Some(0) {
            out.add_transition(fresh, g, fresh);
        } else {
            for &q in a.initial() {
                out.add_transition(fresh, g, q);
            }
        }
    }
    out.build()
}

/// `G_not<`: words that are empty or do not start with `<`.
pub fn guard_no_cell(s: &SigmaI) -> Regex {
    let rest = s
        .alphabet()
        .iter()
        .filter(|&x| *x != s.cell_open())
        .cloned();
    let all = Regex::class(s.alphabet().iter().cloned()).star();
    Regex::alt([Regex::epsilon(), Regex::seq([Regex::class(rest), all])])
}

/// `G_not[`: words without `[`.
pub fn guard_no_row(s: &SigmaI) -> Regex {
    Regex::class(s.alphabet().iter().filter(|&x| *x != s.row_open()).cloned()).star()
}

/// Every automaton of the construction, in build order.
pub struct Reduction {
    pub sigma: SigmaI,
    pub c_n: Nfa,
    /// `C-hat^4, C-hat^5, C-hat^6`.
    pub c_hat: Vec<Nfa>,
    /// `C^1 .. C^6`.
    pub conds: Vec<Nfa>,
    pub a_prime: Nfa,
    pub a_i: Nfa,
}

impl Reduction {
    /// `(name, states, transitions)` for every stage.
    pub fn report(&self) -> Vec<(String, usize, usize)> {
        let mut out = vec![(
            "C_n".to_string(),
            self.c_n.num_states(),
            self.c_n.num_transitions(),
        )];
        for (i, c) in self.c_hat.iter().enumerate() {
            out.push((
                format!("Chat^{}", i + 4),
                c.num_states(),
                c.num_transitions(),
            ));
        }
        for (i, c) in self.conds.iter().enumerate() {
            out.push((format!("C^{}", i + 1), c.num_states(), c.num_transitions()));
        }
        out.push((
            "A'_I".to_string(),
            self.a_prime.num_states(),
            self.a_prime.num_transitions(),
        ));
        out.push((
            "A_I".to_string(),
            self.a_i.num_states(),
            self.a_i.num_transitions(),
        ));
        out
    }
}

/// `C_n`, the three filtered products and `C^1 .. C^6`, for any `n`.
pub fn condition_automata(
    inst: &CorridorInstance,
) -> Result<(Nfa, Vec<Nfa>, Vec<Nfa>), TilingError> {
    for c in [inst.top_left, inst.bottom_right] {
        if c >= inst.tiles.len() {
            return Err(TilingError::BadCorner(c));
        }
    }
    let s = SigmaI::of(inst);
    let alpha = s.alphabet().clone();
    let c_n = comb_automaton(&s)?;
    let filters = [cond4_filter(&s), cond5_filter(&s), cond6_filter(&s, inst)];
    let mut c_hat = Vec::new();
    for f in &filters {
        c_hat.push(filtered_product(&s, &c_n, &filter_nfa(f, &alpha)?));
    }
    let mut conds = vec![
        rho_inverse(&s, &regex_to_nfa(&cond1_regex(&s), &alpha)?),
        rho_inverse(&s, &regex_to_nfa(&cond2_regex(&s, inst), &alpha)?),
        rho_inverse(&s, &cond3_nfa(&s, inst)),
    ];
    let no_cell = rho_inverse(&s, &regex_to_nfa(&guard_no_cell(&s), &alpha)?);
    let either = Regex::alt([guard_no_cell(&s), guard_no_row(&s)]);
    let no_cell_or_row = rho_inverse(&s, &regex_to_nfa(&either, &alpha)?);
    let ann = s.annotated();
    for (i, ch) in c_hat.iter().enumerate() {
        let guard = if i == 2 { &no_cell_or_row } else { &no_cell };
        conds.push(allsuf(&union_all(&ann, &[ch, guard])));
    }
    Ok((c_n, c_hat, conds))
}

/// Builds `A_I` and its parts. Needs `n >= 6`.
pub fn build_reduction(inst: &CorridorInstance) -> Result<Reduction, TilingError> {
    if inst.n < 6 {
        return Err(TilingError::SmallN(inst.n));
    }
    let (c_n, c_hat, conds) = condition_automata(inst)?;
    let s = SigmaI::of(inst);
    let a_prime = tag_dispatch(&s, &conds);
    let a_i = lift_to_pairs(&s, &a_prime)?;
    Ok(Reduction {
        sigma: s,
        c_n,
        c_hat,
        conds,
        a_prime,
        a_i,
    })
}

/// `A'_I`: the first letter `(A, i)` selects `C^i` for `i` in `1..=6`; any
/// other annotation of the mark accepts everything.
pub fn tag_dispatch(s: &SigmaI, conds: &[Nfa]) -> Nfa {
    let ann = s.annotated();
    let mut out = NfaBuilder::new(ann.clone());
    let start = out.add_state();
    out.set_initial(start);
    let sym = |d: u32| ann.index_of(&s.annotate(&s.mark(), d)).expect("tag");
    for (i, c) in conds.iter().enumerate() {
        let off = append_body(&mut out, c);
        let mid = out.add_state();
        out.add_transition(start, sym(i as u32 + 1), mid);
        for &q in c.initial() {
            out.add_epsilon(mid, q + off);
        }
    }
    let sink = out.add_state();
    out.set_final(sink, true);
    for g in 0..ann.len() as u32 {
        out.add_transition(sink, g, sink);
    }
    for d in (0..=s.n()).filter(|d| !(1..=6).contains(d)) {
        out.add_transition(start, sym(d), sink);
    }
    out.build()
}

/// The tags that the catch-all component accepts: `{A} x (N_n minus 1..6)`.
pub fn catch_all_tags(s: &SigmaI) -> Vec<Symbol> {
    (0..=s.n())
        .filter(|d| !(1..=6).contains(d))
        .map(|d| s.annotate(&s.mark(), d))
        .collect()
}

/// `A_I = A'_I + A(E_1) + A(E_2)` over `Sigma_{I,#}^2`: adds every pair of
/// different lengths and every pair whose second row leaves `N_n`.
pub fn lift_to_pairs(s: &SigmaI, a_prime: &Nfa) -> Result<Nfa, TilingError> {
    let gamma = padded_alphabet(s.alphabet(), 2);
    let lifted = relabel_hom(a_prime, &gamma, Symbol::clone)?;
    let pad = Atom::pad();
    let digits: HashSet<Atom> = s.digits().iter().map(|d| d.atom(0).clone()).collect();
    let pick = |f: &dyn Fn(&Atom, &Atom) -> bool| {
        Regex::class(gamma.iter().filter(|g| f(g.atom(0), g.atom(1))).cloned())
    };
    let both = pick(&|a, b| !a.is_pad() && !b.is_pad()).star();
    let first_only = pick(&|a, b| !a.is_pad() && b.is_pad());
    let second_only = pick(&|a, b| a.is_pad() && !b.is_pad());
    let e1 = Regex::alt([
        Regex::seq([both.clone(), first_only.plus()]),
        Regex::seq([both.clone(), second_only.plus()]),
    ]);
    let e2 = Regex::seq([
        both.clone(),
        pick(&|a, b| !a.is_pad() && *b != pad && !digits.contains(b)),
        both,
    ]);
    let n1 = regex_to_nfa(&e1, &gamma)?;
    let n2 = regex_to_nfa(&e2, &gamma)?;
    Ok(union_all(&gamma, &[&lifted, &n1, &n2]))
}

/// Decides `rho^-1(w) ⊆ L(a)` for an automaton over `Sigma_I x N_n` by
/// tracking, position by position, the subsets of states the annotations
/// of the prefix reach. A superset accepts whenever its subset does, so
/// only the inclusion-minimal subsets are kept.
pub fn rho_forall_member(w: &[Symbol], a: &Nfa) -> bool {
    let alpha = a.alphabet();
    let mut pre: HashMap<&Atom, Vec<u32>> = HashMap::new();
    for (gi, g) in alpha.iter().enumerate() {
        pre.entry(g.atom(0)).or_default().push(gi as u32);
    }
    let mut table = SubsetTable::new(a);
    let mut memo: HashMap<(Vec<u32>, usize), Vec<u32>> = HashMap::new();
    let mut layer = vec![table.intern(a.initial().to_vec())];
    for x in w {
        let Some(gs) = pre.get(x.atom(0)) else {
            return true;
        };
        let key = (layer, gs[0] as usize);
        if let Some(next) = memo.get(&key) {
            layer = next.clone();
        } else {
            let mut next: Vec<u32> = key
                .0
                .iter()
                .flat_map(|&id| gs.iter().map(move |&g| (id, g)))
                .map(|(id, g)| table.step(id, g))
                .collect();
            next.sort_unstable();
            next.dedup();
            let next = minimal_sets(&table, next);
            memo.insert(key, next.clone());
            layer = next;
        }
        if layer.iter().any(|&id| table.set(id).is_empty()) {
            return false;
        }
    }
    layer.iter().all(|&id| table.accepting(id))
}

/// Drops every interned set that strictly contains another one.
fn minimal_sets(table: &SubsetTable, mut ids: Vec<u32>) -> Vec<u32> {
    ids.sort_by_key(|&id| (table.set(id).len(), id));
    let mut keep: Vec<u32> = Vec::with_capacity(ids.len());
    for id in ids {
        let set = table.set(id);
        if !keep.iter().any(|&k| is_subset(table.set(k), set)) {
            keep.push(id);
        }
    }
    keep.sort_unstable();
    keep
}

fn is_subset(small: &[StateId], big: &[StateId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// The annotated alphabet restricted to letters with first component `x`.
pub fn preimages(alpha: &Alphabet, x: &Symbol) -> Vec<Symbol> {
    alpha
        .iter()
        .filter(|g| g.atom(0) == x.atom(0))
        .cloned()
        .collect()
}
