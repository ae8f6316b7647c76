//! Convolutions of word tuples, padding languages, existential and universal
//! projection, and the emptiness deciders for universal projections.

use std::collections::{HashMap, VecDeque};

use crate::error::ConvError;
use crate::nfa::{Nfa, NfaBuilder, StateId};
use crate::ops::{complement_bounded, contains_lazy, intersect, relabel_hom, SubsetTable};
use crate::symbol::{Alphabet, Atom, Symbol, Word};

/// A word over k-tuples of padded atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleWord {
    pub arity: usize,
    pub letters: Word,
}

/// Aligns plain words into one word of tuples, padding shorter ones.
pub fn convolve(words: &[Word]) -> Result<TupleWord, ConvError> {
    for (i, w) in words.iter().enumerate() {
        for s in w {
            if s.arity() != 1 {
                return Err(ConvError::NotPlain(i + 1));
            }
            if s.atom(0).is_pad() {
                return Err(ConvError::PadInWord(i + 1));
            }
        }
    }
    let len = words.iter().map(Vec::len).max().unwrap_or(0);
    let letters = (0..len)
        .map(|j| {
            Symbol::tuple(
                words
                    .iter()
                    .map(|w| w.get(j).map_or_else(Atom::pad, |s| s.atom(0).clone())),
            )
        })
        .collect();
    Ok(TupleWord {
        arity: words.len(),
        letters,
    })
}

/// Splits a valid convolution back into its rows.
pub fn deconvolve(t: &TupleWord) -> Result<Vec<Word>, ConvError> {
    let k = t.arity;
    let mut out = vec![Vec::new(); k];
    let mut ended = vec![false; k];
    for (j, s) in t.letters.iter().enumerate() {
        if s.arity() != k {
            return Err(ConvError::Arity {
                position: j + 1,
                expected: k,
                found: s.arity(),
            });
        }
        if s.is_all_pad() {
            return Err(ConvError::AllPadLetter(j + 1));
        }
        for (r, a) in s.atoms().iter().enumerate() {
            if a.is_pad() {
                ended[r] = true;
            } else if ended[r] {
                return Err(ConvError::InvalidPadding {
                    row: r + 1,
                    position: j + 1,
                });
            } else {
                out[r].push(Symbol::plain(a.clone()));
            }
        }
    }
    Ok(out)
}

/// `Sigma_#^k`: every k-tuple over the plain atoms and the pad.
pub fn padded_alphabet(sigma: &Alphabet, k: usize) -> Alphabet {
    let mut atoms: Vec<Atom> = sigma.base_atoms();
    atoms.push(Atom::pad());
    atoms.sort();
    Alphabet::product(&vec![atoms; k])
}

/// `L_x`, the words over `Sigma_#^k` that are not convolutions: some letter
/// is all pads, or some row has a pad followed by a non-pad. States: 0
/// waits, `i` in `1..=k` has just seen a pad in row `i`, `k+1` accepts.
pub fn bad_pad_nfa(k: usize, sigma: &Alphabet) -> Nfa {
    assert!(k >= 1, "arity must be positive");
    let alpha = padded_alphabet(sigma, k);
    let acc = (k + 1) as StateId;
    let mut b = NfaBuilder::with_states(alpha.clone(), k + 2);
    b.set_initial(0);
    b.set_final(acc, true);
    for (ai, s) in alpha.iter().enumerate() {
        let a = ai as u32;
        b.add_transition(0, a, 0);
        b.add_transition(acc, a, acc);
        if s.is_all_pad() {
            b.add_transition(0, a, acc);
        }
        for r in 0..k {
            if s.atom(r).is_pad() {
                b.add_transition(0, a, (r + 1) as StateId);
            } else {
                b.add_transition((r + 1) as StateId, a, acc);
            }
        }
    }
    b.build()
}

/// `L_✓`, the valid convolutions, as a deterministic complement of `L_x`.
pub fn good_pad_nfa(k: usize, sigma: &Alphabet) -> Nfa {
    complement_bounded(&bad_pad_nfa(k, sigma), usize::MAX).expect("unbounded")
}

/// Makes final every state that reaches a final state on all-pad letters,
/// so the language becomes closed under removing trailing all-pad letters.
pub fn strip(a: &Nfa) -> Nfa {
    let alpha = a.alphabet();
    let pads: Vec<u32> = (0..alpha.len() as u32)
        .filter(|&i| alpha.symbol(i).is_all_pad())
        .collect();
    let n = a.num_states();
    let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for (p, s, q) in a.transitions() {
        if pads.contains(&s) {
            rev[q as usize].push(p);
        }
    }
    let mut fin: Vec<bool> = (0..n).map(|q| a.is_final(q as StateId)).collect();
    let mut stack: Vec<StateId> = a.finals().collect();
    while let Some(q) = stack.pop() {
        for &p in &rev[q as usize] {
            if !fin[p as usize] {
                fin[p as usize] = true;
                stack.push(p);
            }
        }
    }
    let mut b = a.clone().into_builder();
    for (q, f) in fin.into_iter().enumerate() {
        b.set_final(q as StateId, f);
    }
    b.build()
}

/// A relation automaton over `Sigma_#^(d+k)` whose last `k` components are
/// projected away.
#[derive(Clone, Debug)]
pub struct RelationAutomaton {
    pub nfa: Nfa,
    pub d: usize,
    pub k: usize,
    sigma: Alphabet,
}

/// Explicit resource limits for the projection pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_states: usize,
    pub max_nodes: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_states: 1 << 20,
            max_nodes: 1 << 24,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Naive,
    OnTheFly,
}

/// Result of [`decide_forall_nonempty`] with the sizes of the intermediate
/// automata it built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForallVerdict {
    pub witness: Option<Word>,
    pub stats: Vec<(String, usize)>,
}

impl RelationAutomaton {
    pub fn new(nfa: Nfa, d: usize, k: usize) -> Result<RelationAutomaton, ConvError> {
        let sigma = Alphabet::plain(nfa.alphabet().base_atoms());
        if d == 0 || nfa.alphabet() != &padded_alphabet(&sigma, d + k) {
            return Err(ConvError::NotPadded(d + k));
        }
        Ok(RelationAutomaton { nfa, d, k, sigma })
    }

    /// Plain alphabet of the relation.
    pub fn sigma(&self) -> &Alphabet {
        &self.sigma
    }

    /// Alphabet of the projected words.
    pub fn projected_alphabet(&self) -> Alphabet {
        padded_alphabet(&self.sigma, self.d)
    }

    /// The same relation with the automaton replaced.
    fn with_nfa(&self, nfa: Nfa) -> RelationAutomaton {
        RelationAutomaton {
            nfa,
            d: self.d,
            k: self.k,
            sigma: self.sigma.clone(),
        }
    }

    /// The relation complemented within all words over the padded alphabet.
    pub fn complemented(&self, budget: Budget) -> Result<RelationAutomaton, ConvError> {
        Ok(self.with_nfa(complement_bounded(&self.nfa, budget.max_states)?))
    }
}

/// Keeps the first `d` components of every letter.
pub fn h(r: &RelationAutomaton) -> Nfa {
    let d = r.d;
    relabel_hom(&r.nfa, &r.projected_alphabet(), |s| s.prefix(d))
        .expect("prefixes lie in the projected alphabet")
}

/// `STRIP(h(L ∩ L_✓)) ∩ L_✓`.
pub fn project_exists(r: &RelationAutomaton) -> Nfa {
    let valid = intersect(&r.nfa, &good_pad_nfa(r.d + r.k, &r.sigma)).expect("same alphabet");
    let good = good_pad_nfa(r.d, &r.sigma);
    intersect(&strip(&h(&r.with_nfa(valid))), &good).expect("same alphabet")
}

/// `complement(STRIP(h(complement L ∩ L_✓)) ∩ L_✓) ∩ L_✓`.
pub fn project_forall(r: &RelationAutomaton, budget: Budget) -> Result<Nfa, ConvError> {
    let b = forall_core(r, budget)?;
    let outer = complement_bounded(&b, budget.max_states)?;
    let good = good_pad_nfa(r.d, &r.sigma);
    Ok(intersect(&outer, &good)?)
}

/// `STRIP(h(complement L ∩ L_✓)) ∩ L_✓`, the words with a bad extension.
/// Invalid convolutions are dropped from the complement first, so words
/// outside `L_✓` never count as missing tuples.
fn forall_core(r: &RelationAutomaton, budget: Budget) -> Result<Nfa, ConvError> {
    let comp = r.complemented(budget)?;
    let valid = intersect(&comp.nfa, &good_pad_nfa(r.d + r.k, &r.sigma))?;
    let good = good_pad_nfa(r.d, &r.sigma);
    Ok(intersect(&strip(&h(&r.with_nfa(valid))), &good)?)
}

/// `log2` of the state bound `2^((2^(|Q|+d+2))+d+2)`, saturating.
pub fn forall_state_bound_log2(q: usize, d: usize) -> u128 {
    let e = q + d + 2;
    if e >= 127 {
        return u128::MAX;
    }
    (1u128 << e).saturating_add((d + 2) as u128)
}

/// Decides whether the universal projection is nonempty, returning its
/// shortest, then least, word.
pub fn decide_forall_nonempty(
    r: &RelationAutomaton,
    mode: Mode,
    budget: Budget,
) -> Result<ForallVerdict, ConvError> {
    let mut stats = vec![("input".to_string(), r.nfa.num_states())];
    match mode {
        Mode::Naive => {
            let b = forall_core(r, budget)?;
            stats.push(("bad-extension".to_string(), b.num_states()));
            let outer = complement_bounded(&b, budget.max_states)?;
            stats.push(("complement".to_string(), outer.num_states()));
            let good = good_pad_nfa(r.d, &r.sigma);
            let p = intersect(&outer, &good)?;
            stats.push(("projection".to_string(), p.num_states()));
            Ok(ForallVerdict {
                witness: p.shortest_accepted(),
                stats,
            })
        }
        Mode::OnTheFly => {
            let b = forall_core(r, budget)?;
            stats.push(("bad-extension".to_string(), b.num_states()));
            let good = good_pad_nfa(r.d, &r.sigma);
            let (witness, nodes) = search_avoiding(&b, &good, budget.max_nodes)?;
            stats.push(("configurations".to_string(), nodes));
            if let Some(w) = &witness {
                let bound = forall_state_bound_log2(r.nfa.num_states(), r.d);
                assert!(bound >= 64 || (w.len() as u128) < (1u128 << bound));
            }
            Ok(ForallVerdict { witness, stats })
        }
    }
}

/// Breadth-first search over pairs (subset of `b`, state of the
/// deterministic `good`) for a word `b` rejects and `good` accepts.
fn search_avoiding(
    b: &Nfa,
    good: &Nfa,
    max_nodes: usize,
) -> Result<(Option<Word>, usize), ConvError> {
    let mut table = SubsetTable::new(b);
    let start = (table.intern(b.initial().to_vec()), good.initial()[0]);
    let mut parent: HashMap<(u32, StateId), Option<((u32, StateId), u32)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    let nsym = b.alphabet().len() as u32;
    while let Some(cfg) = queue.pop_front() {
        if !table.accepting(cfg.0) && good.is_final(cfg.1) {
            let mut w = Vec::new();
            let mut cur = cfg;
            while let Some(Some((prev, a))) = parent.get(&cur) {
                w.push(b.alphabet().symbol(*a).clone());
                cur = *prev;
            }
            w.reverse();
            return Ok((Some(w), parent.len()));
        }
        for a in 0..nsym {
            let g = match good.successors(cfg.1, a).next() {
                Some(g) => g,
                None => continue,
            };
            let next = (table.step(cfg.0, a), g);
            if !parent.contains_key(&next) {
                if parent.len() >= max_nodes {
                    return Err(ConvError::NodeBudget { limit: max_nodes });
                }
                parent.insert(next, Some((cfg, a)));
                queue.push_back(next);
            }
        }
    }
    Ok((None, parent.len()))
}

/// Automaton for `{ u ⊗ v : v ∈ (Sigma*)^k }` over the relation's alphabet.
/// States are `(position, set of finished rows)` along `u` followed by the
/// tail where the `u` rows are all pads.
pub fn spine_nfa(u: &[Word], r: &RelationAutomaton) -> Result<Nfa, ConvError> {
    if u.len() != r.d {
        return Err(ConvError::Arity {
            position: 0,
            expected: r.d,
            found: u.len(),
        });
    }
    let cu = convolve(u)?;
    let len = cu.letters.len();
    let k = r.k;
    let masks = 1usize << k;
    let alpha = r.nfa.alphabet().clone();
    let id = |pos: usize, mask: usize| (pos * masks + mask) as StateId;
    let mut b = NfaBuilder::with_states(alpha.clone(), (len + 2) * masks);
    b.set_initial(id(0, 0));
    for mask in 0..masks {
        b.set_final(id(len, mask), true);
        b.set_final(id(len + 1, mask), true);
    }
    for (ai, s) in alpha.iter().enumerate() {
        let head = s.prefix(r.d);
        let tail = &s.atoms()[r.d..];
        let tail_mask: usize = tail
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_pad())
            .fold(0, |m, (i, _)| m | (1 << i));
        let head_pad = head.is_all_pad();
        for mask in 0..masks {
            if mask & !tail_mask != 0 {
                continue;
            }
            for pos in 0..len {
                if head == cu.letters[pos] {
                    b.add_transition(id(pos, mask), ai as u32, id(pos + 1, tail_mask));
                }
            }
            if head_pad && tail_mask != masks - 1 {
                b.add_transition(id(len, mask), ai as u32, id(len + 1, tail_mask));
                b.add_transition(id(len + 1, mask), ai as u32, id(len + 1, tail_mask));
            }
        }
    }
    Ok(b.build())
}

/// Decides whether every extension of `u` lies in the relation.
pub fn forall_member(u: &[Word], r: &RelationAutomaton) -> Result<bool, ConvError> {
    let spine = spine_nfa(u, r)?;
    Ok(contains_lazy(&r.nfa, &spine)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{chars, word};

    fn ab() -> Alphabet {
        Alphabet::of_chars("ab")
    }

    #[test]
    fn convolve_pads_shorter_words() {
        let t = convolve(&[chars("ab"), chars("a")]).unwrap();
        assert_eq!(t.letters, word("a|a b|#"));
        let t = convolve(&[chars("ab"), chars("ba")]).unwrap();
        assert!(t.letters.iter().all(|s| !s.has_pad()));
        assert_eq!(deconvolve(&t).unwrap(), vec![chars("ab"), chars("ba")]);
    }

    #[test]
    fn convolve_rejects_pad_inside() {
        assert_eq!(convolve(&[chars("a#")]), Err(ConvError::PadInWord(1)));
    }

    #[test]
    fn deconvolve_reports_row() {
        let t = TupleWord {
            arity: 2,
            letters: word("a|# b|a"),
        };
        assert_eq!(
            deconvolve(&t),
            Err(ConvError::InvalidPadding {
                row: 2,
                position: 2
            })
        );
        let t = TupleWord {
            arity: 3,
            letters: Vec::new(),
        };
        assert_eq!(deconvolve(&t).unwrap(), vec![Vec::new(); 3]);
    }

    #[test]
    fn bad_pad_sizes_and_language() {
        let sa = Alphabet::of_chars("a");
        for k in 1..=3 {
            let b = bad_pad_nfa(k, &sa);
            assert_eq!(b.num_states(), k + 2);
            assert!(good_pad_nfa(k, &sa).num_states() <= 1 << (k + 2));
        }
        let b = bad_pad_nfa(2, &sa);
        assert!(b.accepts(&word("a|# a|a")).unwrap());
        assert!(b.accepts(&word("#|#")).unwrap());
        assert!(!b.accepts(&word("a|a a|#")).unwrap());
    }

    #[test]
    fn strip_closes_trailing_pads() {
        let alpha = padded_alphabet(&ab(), 1);
        let n = Nfa::word(alpha, &word("a b # #")).unwrap();
        let s = strip(&n);
        let got: Vec<String> = s
            .enumerate_upto(5)
            .iter()
            .map(|w| crate::symbol::show_word(w))
            .collect();
        assert_eq!(got, vec!["a b", "a b #", "a b # #"]);
    }

    #[test]
    fn h_projects_componentwise() {
        let alpha = padded_alphabet(&Alphabet::of_chars("abc"), 2);
        let w = word("a|a b|a #|c #|a");
        let r = RelationAutomaton::new(Nfa::word(alpha, &w).unwrap(), 1, 1).unwrap();
        let img = h(&r);
        assert_eq!(img.enumerate_upto(4), vec![word("a b # #")]);
    }

    #[test]
    fn relation_alphabet_is_checked() {
        assert!(RelationAutomaton::new(Nfa::universal(ab()), 1, 1).is_err());
    }
}
