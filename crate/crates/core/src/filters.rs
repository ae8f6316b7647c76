//! Filters: regular languages over `Sigma x {top, bottom}` read as relations
//! between an input word and the subsequence of its top-marked letters.

use crate::error::AutomataError;
use crate::nfa::{Nfa, NfaBuilder, StateId};
use crate::ops::regex_to_nfa;
use crate::regex::Regex;
use crate::symbol::{Alphabet, Atom, Symbol, Word};

/// Atom of the kept (underlined) mark.
pub const TOP: &str = "⊤";
/// Atom of the dropped mark.
pub const BOT: &str = "⊥";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Top,
    Bot,
}

impl Mark {
    fn atom(self) -> Atom {
        match self {
            Mark::Top => Atom::new(TOP),
            Mark::Bot => Atom::new(BOT),
        }
    }
}

/// Appends a mark component to a base symbol.
pub fn mark(base: &Symbol, m: Mark) -> Symbol {
    Symbol::tuple(
        base.atoms()
            .iter()
            .cloned()
            .chain(std::iter::once(m.atom())),
    )
}

/// Splits a marked symbol into base and mark.
pub fn unmark(s: &Symbol) -> Option<(Symbol, Mark)> {
    let k = s.arity();
    if k < 2 {
        return None;
    }
    let m = match s.atom(k - 1).as_str() {
        TOP => Mark::Top,
        BOT => Mark::Bot,
        _ => return None,
    };
    Some((s.prefix(k - 1), m))
}

/// `Sigma x {top, bottom}`.
pub fn marked_alphabet(base: &Alphabet) -> Alphabet {
    Alphabet::new(
        base.iter()
            .flat_map(|s| [mark(s, Mark::Top), mark(s, Mark::Bot)]),
    )
    .expect("uniform arity")
}

/// Marks every literal of a base expression with `m`.
pub fn lift(e: &Regex, m: Mark) -> Regex {
    e.map_symbols(&|s| mark(s, m))
}

/// Underlined copy of an expression.
pub fn top(e: &Regex) -> Regex {
    lift(e, Mark::Top)
}

/// Plain (not underlined) copy of an expression.
pub fn bot(e: &Regex) -> Regex {
    lift(e, Mark::Bot)
}

/// Drops the marks.
pub fn psi_in(w: &[Symbol]) -> Word {
    w.iter().filter_map(|s| unmark(s).map(|(b, _)| b)).collect()
}

/// Keeps the bases of top-marked letters.
pub fn psi_out(w: &[Symbol]) -> Word {
    w.iter()
        .filter_map(|s| match unmark(s) {
            Some((b, Mark::Top)) => Some(b),
            _ => None,
        })
        .collect()
}

/// Marks a word letter by letter.
pub fn mark_word(u: &[Symbol], marks: &[Mark]) -> Word {
    u.iter().zip(marks).map(|(s, &m)| mark(s, m)).collect()
}

/// The automaton of a filter expression over the marked alphabet.
pub fn filter_nfa(f: &Regex, base: &Alphabet) -> Result<Nfa, AutomataError> {
    regex_to_nfa(f, &marked_alphabet(base))
}

/// An epsilon-free automaton for `F(u)`: the product of the filter automaton
/// with the spine of `u`, where top-marked steps emit their base letter and
/// bottom-marked steps are silent.
pub fn filter_outputs(f: &Regex, base: &Alphabet, u: &[Symbol]) -> Result<Nfa, AutomataError> {
    let a = filter_nfa(f, base)?;
    filter_outputs_nfa(&a, base, u)
}

/// [`filter_outputs`] for an already compiled filter automaton.
pub fn filter_outputs_nfa(a: &Nfa, base: &Alphabet, u: &[Symbol]) -> Result<Nfa, AutomataError> {
    let letters = marked_letters(a, base, u)?;
    let q = a.num_states();
    let mut b = NfaBuilder::with_states(base.clone(), (u.len() + 1) * q);
    let id = |i: usize, s: StateId| (i * q) as StateId + s;
    for &s in a.initial() {
        b.set_initial(id(0, s));
    }
    for s in a.finals() {
        b.set_final(id(u.len(), s), true);
    }
    for (i, &(base_idx, top_idx, bot_idx)) in letters.iter().enumerate() {
        for s in 0..q as StateId {
            for t in a.successors(s, top_idx) {
                b.add_transition(id(i, s), base_idx, id(i + 1, t));
            }
            for t in a.successors(s, bot_idx) {
                b.add_epsilon(id(i, s), id(i + 1, t));
            }
        }
    }
    Ok(b.build().trim_unreachable())
}

fn marked_letters(
    a: &Nfa,
    base: &Alphabet,
    u: &[Symbol],
) -> Result<Vec<(u32, u32, u32)>, AutomataError> {
    u.iter()
        .map(|s| {
            let bi = base
                .index_of(s)
                .ok_or_else(|| AutomataError::UnknownSymbol(s.to_string()))?;
            let ti = a
                .alphabet()
                .index_of(&mark(s, Mark::Top))
                .ok_or_else(|| AutomataError::UnknownSymbol(s.to_string()))?;
            let fi = a
                .alphabet()
                .index_of(&mark(s, Mark::Bot))
                .ok_or_else(|| AutomataError::UnknownSymbol(s.to_string()))?;
            Ok((bi, ti, fi))
        })
        .collect()
}

/// Decides `v ∈ F(u)`.
pub fn filter_contains(
    f: &Regex,
    base: &Alphabet,
    u: &[Symbol],
    v: &[Symbol],
) -> Result<bool, AutomataError> {
    let a = filter_nfa(f, base)?;
    filter_contains_nfa(&a, base, u, v)
}

/// Membership of `v` in the output automaton of `u`, run on the fly: the
/// configurations are pairs of a position in `v` and a filter state, which
/// is the product [`filter_outputs_nfa`] materializes, read along `v`.
pub fn filter_contains_nfa(
    a: &Nfa,
    base: &Alphabet,
    u: &[Symbol],
    v: &[Symbol],
) -> Result<bool, AutomataError> {
    let letters = marked_letters(a, base, u)?;
    let target = base.encode(v)?;
    Ok(filter_contains_indexed(a, &letters, &target))
}

/// Core of [`filter_contains_nfa`] on pre-encoded letters: each input letter
/// is `(base index, top-marked index, bottom-marked index)`.
pub(crate) fn filter_contains_indexed(
    a: &Nfa,
    letters: &[(u32, u32, u32)],
    target: &[u32],
) -> bool {
    let q = a.num_states();
    let width = target.len() + 1;
    let mut seen = vec![usize::MAX; width * q];
    let mut cur: Vec<(usize, StateId)> = Vec::new();
    for &s in a.initial() {
        if seen[s as usize] != 0 {
            seen[s as usize] = 0;
            cur.push((0, s));
        }
    }
    for (i, &(b, t, f)) in letters.iter().enumerate() {
        let stamp = i + 1;
        let mut next = Vec::new();
        for &(j, s) in &cur {
            if j < target.len() && target[j] == b {
                for r in a.successors(s, t) {
                    let key = (j + 1) * q + r as usize;
                    if seen[key] != stamp {
                        seen[key] = stamp;
                        next.push((j + 1, r));
                    }
                }
            }
            for r in a.successors(s, f) {
                let key = j * q + r as usize;
                if seen[key] != stamp {
                    seen[key] = stamp;
                    next.push((j, r));
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        cur = next;
    }
    cur.iter().any(|&(j, s)| j == target.len() && a.is_final(s))
}
