//! Closure operations on NFAs.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::error::AutomataError;
use crate::nfa::{Nfa, NfaBuilder, StateId};
use crate::regex::Regex;
use crate::symbol::{Alphabet, Symbol};

/// Thompson construction followed by epsilon elimination and removal of
/// unreachable states.
pub fn regex_to_nfa(e: &Regex, sigma: &Alphabet) -> Result<Nfa, AutomataError> {
    let mut b = NfaBuilder::new(sigma.clone());
    let (s, t) = thompson(e, &mut b)?;
    b.set_initial(s);
    b.set_final(t, true);
    Ok(b.build().trim_unreachable())
}

fn thompson(e: &Regex, b: &mut NfaBuilder) -> Result<(StateId, StateId), AutomataError> {
    let s = b.add_state();
    match e {
        Regex::Empty => {
            let t = b.add_state();
            Ok((s, t))
        }
        Regex::Lit(sym) => {
            let t = b.add_state();
            b.add_symbol_transition(s, sym, t)?;
            Ok((s, t))
        }
        Regex::Class(v) => {
            let t = b.add_state();
            for sym in v {
                b.add_symbol_transition(s, sym, t)?;
            }
            Ok((s, t))
        }
        Regex::Concat(v) => {
            let mut cur = s;
            for part in v {
                let (ps, pt) = thompson(part, b)?;
                b.add_epsilon(cur, ps);
                cur = pt;
            }
            Ok((s, cur))
        }
        Regex::Union(v) => {
            let t = b.add_state();
            for part in v {
                let (ps, pt) = thompson(part, b)?;
                b.add_epsilon(s, ps);
                b.add_epsilon(pt, t);
            }
            Ok((s, t))
        }
        Regex::Star(inner) => {
            let t = b.add_state();
            let (ps, pt) = thompson(inner, b)?;
            b.add_epsilon(s, ps);
            b.add_epsilon(pt, ps);
            b.add_epsilon(pt, t);
            b.add_epsilon(s, t);
            Ok((s, t))
        }
        Regex::Power(inner, k) => {
            let mut cur = s;
            for _ in 0..*k {
                let (ps, pt) = thompson(inner, b)?;
                b.add_epsilon(cur, ps);
                cur = pt;
            }
            Ok((s, cur))
        }
    }
}

fn same_alphabet(a: &Nfa, b: &Nfa) -> Result<(), AutomataError> {
    if a.alphabet() == b.alphabet() {
        Ok(())
    } else {
        Err(AutomataError::AlphabetMismatch)
    }
}

/// Disjoint union; the states of `b` follow those of `a`.
pub fn union(a: &Nfa, b: &Nfa) -> Result<Nfa, AutomataError> {
    same_alphabet(a, b)?;
    Ok(union_all(a.alphabet(), &[a, b]))
}

/// Disjoint union of any number of automata over `sigma`.
pub fn union_all(sigma: &Alphabet, parts: &[&Nfa]) -> Nfa {
    let mut out = NfaBuilder::new(sigma.clone());
    for part in parts {
        append(&mut out, part);
    }
    if out.num_states() == 0 {
        return Nfa::empty(sigma.clone());
    }
    out.build()
}

/// Copies `a` into the builder, keeping its initial and final states.
/// Returns the offset of the copied states.
pub(crate) fn append(out: &mut NfaBuilder, a: &Nfa) -> StateId {
    let off = out.add_states(a.num_states());
    for (p, s, q) in a.transitions() {
        out.add_transition(p + off, s, q + off);
    }
    for &q in a.initial() {
        out.set_initial(q + off);
    }
    for q in a.finals() {
        out.set_final(q + off, true);
    }
    off
}

/// Concatenation without epsilon edges: every final state of `a` also gets
/// the outgoing edges of the initial states of `b`.
pub fn concat(a: &Nfa, b: &Nfa) -> Result<Nfa, AutomataError> {
    same_alphabet(a, b)?;
    let mut out = NfaBuilder::new(a.alphabet().clone());
    out.add_states(a.num_states() + b.num_states());
    let off = a.num_states() as StateId;
    for (p, s, q) in a.transitions() {
        out.add_transition(p, s, q);
    }
    for (p, s, q) in b.transitions() {
        out.add_transition(p + off, s, q + off);
    }
    let b_eps = b.initial().iter().any(|&q| b.is_final(q));
    for f in a.finals() {
        for &i in b.initial() {
            for &(s, q) in b.edges(i) {
                out.add_transition(f, s, q + off);
            }
        }
        if b_eps {
            out.set_final(f, true);
        }
    }
    for &q in a.initial() {
        out.set_initial(q);
    }
    for q in b.finals() {
        out.set_final(q + off, true);
    }
    Ok(out.build())
}

/// Inverse homomorphic image under a letter-to-letter map; the new alphabet
/// is the key set of `rho`.
pub fn inverse_hom(a: &Nfa, rho: &BTreeMap<Symbol, Symbol>) -> Result<Nfa, AutomataError> {
    let gamma = Alphabet::new(rho.keys().cloned())?;
    inverse_hom_with(a, &gamma, |g| rho.get(g).cloned())
}

/// Inverse homomorphic image where `rho` is given as a function on `gamma`.
pub fn inverse_hom_with(
    a: &Nfa,
    gamma: &Alphabet,
    rho: impl Fn(&Symbol) -> Option<Symbol>,
) -> Result<Nfa, AutomataError> {
    let mut pre: Vec<Vec<u32>> = vec![Vec::new(); a.alphabet().len()];
    for (gi, g) in gamma.iter().enumerate() {
        let img = rho(g).ok_or_else(|| AutomataError::IncompleteMap(g.to_string()))?;
        let si = a
            .alphabet()
            .index_of(&img)
            .ok_or_else(|| AutomataError::IncompleteMap(g.to_string()))?;
        pre[si as usize].push(gi as u32);
    }
    let mut out = NfaBuilder::with_states(gamma.clone(), a.num_states());
    for (p, s, q) in a.transitions() {
        for &g in &pre[s as usize] {
            out.add_transition(p, g, q);
        }
    }
    for &q in a.initial() {
        out.set_initial(q);
    }
    for q in a.finals() {
        out.set_final(q, true);
    }
    Ok(out.build())
}

/// Letter-to-letter image into the target alphabet `gamma`.
pub fn relabel_hom(
    a: &Nfa,
    gamma: &Alphabet,
    h: impl Fn(&Symbol) -> Symbol,
) -> Result<Nfa, AutomataError> {
    let mut img = Vec::with_capacity(a.alphabet().len());
    for s in a.alphabet().iter() {
        let t = h(s);
        img.push(
            gamma
                .index_of(&t)
                .ok_or_else(|| AutomataError::UnknownSymbol(t.to_string()))?,
        );
    }
    let mut out = NfaBuilder::with_states(gamma.clone(), a.num_states());
    for (p, s, q) in a.transitions() {
        out.add_transition(p, img[s as usize], q);
    }
    for &q in a.initial() {
        out.set_initial(q);
    }
    for q in a.finals() {
        out.set_final(q, true);
    }
    Ok(out.build())
}

/// Relabels through an explicit table.
pub fn relabel_map(
    a: &Nfa,
    gamma: &Alphabet,
    h: &BTreeMap<Symbol, Symbol>,
) -> Result<Nfa, AutomataError> {
    for s in a.alphabet().iter() {
        if !h.contains_key(s) {
            return Err(AutomataError::IncompleteMap(s.to_string()));
        }
    }
    relabel_hom(a, gamma, |s| h[s].clone())
}

/// Interns sorted state sets as dense ids and memoizes their successors.
pub struct SubsetTable<'a> {
    nfa: &'a Nfa,
    ids: HashMap<Vec<StateId>, u32>,
    sets: Vec<Vec<StateId>>,
    post: HashMap<(u32, u32), u32>,
}

impl<'a> SubsetTable<'a> {
    pub fn new(nfa: &'a Nfa) -> SubsetTable<'a> {
        SubsetTable {
            nfa,
            ids: HashMap::new(),
            sets: Vec::new(),
            post: HashMap::new(),
        }
    }

    pub fn intern(&mut self, set: Vec<StateId>) -> u32 {
        if let Some(&id) = self.ids.get(&set) {
            return id;
        }
        let id = self.sets.len() as u32;
        self.sets.push(set.clone());
        self.ids.insert(set, id);
        id
    }

    pub fn set(&self, id: u32) -> &[StateId] {
        &self.sets[id as usize]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn step(&mut self, id: u32, a: u32) -> u32 {
        if let Some(&r) = self.post.get(&(id, a)) {
            return r;
        }
        let next = self.nfa.post(&self.sets[id as usize], a);
        let r = self.intern(next);
        self.post.insert((id, a), r);
        r
    }

    pub fn accepting(&self, id: u32) -> bool {
        self.nfa.any_final(&self.sets[id as usize])
    }
}

/// Subset construction over the reachable sets, total (the empty set is the
/// dead state and is always present) with final states inverted.
pub fn complement(a: &Nfa) -> Nfa {
    complement_bounded(a, usize::MAX).expect("unbounded")
}

/// As [`complement`], failing once more than `max_states` subsets appear.
pub fn complement_bounded(a: &Nfa, max_states: usize) -> Result<Nfa, AutomataError> {
    let det = determinize(a, max_states)?;
    let finals: Vec<StateId> = (0..det.num_states() as StateId)
        .filter(|&q| !det.is_final(q))
        .collect();
    let initial = det.initial().to_vec();
    let edges: Vec<_> = det.transitions().collect();
    Nfa::from_parts(
        det.alphabet().clone(),
        det.num_states(),
        edges,
        initial,
        finals,
    )
}

/// Deterministic total automaton for the same language.
pub fn determinize(a: &Nfa, max_states: usize) -> Result<Nfa, AutomataError> {
    let sigma = a.alphabet().clone();
    let nsym = sigma.len();
    let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut sets: Vec<Vec<StateId>> = Vec::new();
    let mut edges: Vec<(StateId, u32, StateId)> = Vec::new();
    let mut buckets: Vec<Vec<StateId>> = vec![Vec::new(); nsym];
    let intern = |set: Vec<StateId>,
                  ids: &mut HashMap<Vec<StateId>, StateId>,
                  sets: &mut Vec<Vec<StateId>>| {
        if let Some(&id) = ids.get(&set) {
            return (id, false);
        }
        let id = sets.len() as StateId;
        ids.insert(set.clone(), id);
        sets.push(set);
        (id, true)
    };
    intern(a.initial().to_vec(), &mut ids, &mut sets);
    intern(Vec::new(), &mut ids, &mut sets);
    let mut i = 0;
    while i < sets.len() {
        if sets.len() > max_states {
            return Err(AutomataError::BudgetExceeded { limit: max_states });
        }
        for &q in &sets[i] {
            for &(s, t) in a.edges(q) {
                buckets[s as usize].push(t);
            }
        }
        for s in 0..nsym {
            let mut set = std::mem::take(&mut buckets[s]);
            set.sort_unstable();
            set.dedup();
            let (id, _) = intern(set, &mut ids, &mut sets);
            edges.push((i as StateId, s as u32, id));
        }
        i += 1;
    }
    if sets.len() > max_states {
        return Err(AutomataError::BudgetExceeded { limit: max_states });
    }
    let finals: Vec<StateId> = (0..sets.len())
        .filter(|&i| a.any_final(&sets[i]))
        .map(|i| i as StateId)
        .collect();
    Nfa::from_parts(sigma, sets.len(), edges, [0], finals)
}

/// Reachable product automaton.
pub fn intersect(a: &Nfa, b: &Nfa) -> Result<Nfa, AutomataError> {
    same_alphabet(a, b)?;
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs: Vec<(StateId, StateId)> = Vec::new();
    let mut out = NfaBuilder::new(a.alphabet().clone());
    let mut get =
        |p: (StateId, StateId), out: &mut NfaBuilder, pairs: &mut Vec<(StateId, StateId)>| {
            *ids.entry(p).or_insert_with(|| {
                pairs.push(p);
                let q = out.add_state();
                out.set_final(q, a.is_final(p.0) && b.is_final(p.1));
                q
            })
        };
    for &p in a.initial() {
        for &q in b.initial() {
            let id = get((p, q), &mut out, &mut pairs);
            out.set_initial(id);
        }
    }
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let (ea, eb) = (a.edges(p), b.edges(q));
        let (mut x, mut y) = (0, 0);
        while x < ea.len() && y < eb.len() {
            let (sa, sb) = (ea[x].0, eb[y].0);
            if sa < sb {
                x += 1;
            } else if sb < sa {
                y += 1;
            } else {
                let xe = x + ea[x..].iter().take_while(|e| e.0 == sa).count();
                let ye = y + eb[y..].iter().take_while(|e| e.0 == sa).count();
                for &(_, ta) in &ea[x..xe] {
                    for &(_, tb) in &eb[y..ye] {
                        let id = get((ta, tb), &mut out, &mut pairs);
                        out.add_transition(i as StateId, sa, id);
                    }
                }
                x = xe;
                y = ye;
            }
        }
        i += 1;
    }
    if out.num_states() == 0 {
        return Ok(Nfa::empty(a.alphabet().clone()));
    }
    Ok(out.build())
}

/// Decides `L(b) ⊆ L(a)` by searching pairs of a `b`-state and the subset
/// of `a`-states reached on the same word.
pub fn contains_lazy(a: &Nfa, b: &Nfa) -> Result<bool, AutomataError> {
    same_alphabet(a, b)?;
    let mut table = SubsetTable::new(a);
    let start = table.intern(a.initial().to_vec());
    let mut seen: HashSet<(StateId, u32)> = HashSet::new();
    let mut queue = VecDeque::new();
    for &q in b.initial() {
        if seen.insert((q, start)) {
            queue.push_back((q, start));
        }
    }
    while let Some((q, s)) = queue.pop_front() {
        if b.is_final(q) && !table.accepting(s) {
            return Ok(false);
        }
        for &(sym, q2) in b.edges(q) {
            let s2 = table.step(s, sym);
            if seen.insert((q2, s2)) {
                queue.push_back((q2, s2));
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{chars, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::of_chars("ab")
    }

    fn lit(c: &str) -> Regex {
        Regex::lit(Symbol::plain(c))
    }

    fn re(e: &Regex) -> Nfa {
        regex_to_nfa(e, &ab()).unwrap()
    }

    #[test]
    fn single_literal() {
        let a = re(&lit("a"));
        assert!(a.accepts(&chars("a")).unwrap());
        assert_eq!(a.enumerate_upto(4), vec![chars("a")]);
    }

    #[test]
    fn empty_regex_accepts_nothing() {
        assert!(re(&Regex::Empty).enumerate_upto(6).is_empty());
    }

    #[test]
    fn symbol_outside_alphabet_is_rejected() {
        assert!(regex_to_nfa(&lit("c"), &ab()).is_err());
    }

    #[test]
    fn power_zero_is_epsilon() {
        let a = re(&lit("a").power(0));
        assert_eq!(a.enumerate_upto(3), vec![vec![]]);
        let a3 = re(&lit("a").power(3));
        assert_eq!(a3.enumerate_upto(4), vec![chars("aaa")]);
    }

    #[test]
    fn union_and_concat_small() {
        let a = re(&lit("a"));
        let b = re(&lit("b"));
        let u = union(&a, &b).unwrap();
        assert!(u.accepts(&chars("a")).unwrap() && u.accepts(&chars("b")).unwrap());
        assert!(!u.accepts(&chars("ab")).unwrap());
        let c = concat(&a, &b).unwrap();
        assert_eq!(c.enumerate_upto(4), vec![chars("ab")]);
        let eps = re(&Regex::Empty.star());
        assert_eq!(
            concat(&c, &eps).unwrap().enumerate_upto(4),
            vec![chars("ab")]
        );
        assert_eq!(
            concat(&eps, &c).unwrap().enumerate_upto(4),
            vec![chars("ab")]
        );
    }

    #[test]
    fn alphabet_mismatch() {
        let a = Nfa::universal(ab());
        let b = Nfa::universal(Alphabet::of_chars("abc"));
        assert_eq!(union(&a, &b).unwrap_err(), AutomataError::AlphabetMismatch);
        assert_eq!(
            intersect(&a, &b).unwrap_err(),
            AutomataError::AlphabetMismatch
        );
    }

    #[test]
    fn inverse_hom_marks() {
        let a = Nfa::word(ab(), &chars("ab")).unwrap();
        let mut rho = BTreeMap::new();
        for c in ["a", "b"] {
            for i in ["0", "1"] {
                rho.insert(Symbol::parse(&format!("{}|{}", c, i)), Symbol::plain(c));
            }
        }
        let r = inverse_hom(&a, &rho).unwrap();
        assert_eq!(r.num_states(), a.num_states());
        let words = r.enumerate_upto(3);
        assert_eq!(words.len(), 4);
        assert!(words
            .iter()
            .all(|w| w.len() == 2 && w[0].atom(0).as_str() == "a" && w[1].atom(0).as_str() == "b"));
    }

    #[test]
    fn inverse_hom_incomplete_map() {
        let a = Nfa::universal(ab());
        let mut rho = BTreeMap::new();
        rho.insert(Symbol::plain("x"), Symbol::plain("z"));
        assert!(matches!(
            inverse_hom(&a, &rho),
            Err(AutomataError::IncompleteMap(_))
        ));
    }

    #[test]
    fn complement_basics() {
        let empty = Nfa::empty(Alphabet::of_chars("a"));
        let c = complement(&empty);
        for w in ["", "a", "aa"] {
            assert!(c.accepts(&chars(w)).unwrap());
        }
        let all = Nfa::universal(ab());
        assert!(complement(&all).enumerate_upto(5).is_empty());
    }

    #[test]
    fn complement_budget() {
        let a = re(&Regex::seq([
            Regex::class([Symbol::plain("a"), Symbol::plain("b")]).star(),
            lit("a"),
            Regex::class([Symbol::plain("a"), Symbol::plain("b")]).power(3),
        ]));
        assert!(matches!(
            complement_bounded(&a, 4),
            Err(AutomataError::BudgetExceeded { limit: 4 })
        ));
        assert!(complement_bounded(&a, 1 << 10).is_ok());
    }

    #[test]
    fn intersect_small() {
        let sig = Regex::class([Symbol::plain("a"), Symbol::plain("b")]);
        let x = re(&Regex::seq([sig.clone().star(), lit("a")]));
        let y = re(&Regex::seq([lit("a"), sig.star()]));
        let i = intersect(&x, &y).unwrap();
        let got: Vec<String> = i
            .enumerate_upto(3)
            .iter()
            .map(|w| crate::symbol::show_compact(w))
            .collect();
        assert_eq!(got, vec!["a", "aa", "aaa", "aba"]);
    }

    #[test]
    fn containment() {
        let all = Nfa::universal(ab());
        let a = re(&lit("a"));
        let b = re(&lit("b"));
        assert!(contains_lazy(&all, &a).unwrap());
        assert!(!contains_lazy(&b, &a).unwrap());
        assert!(contains_lazy(&a, &a).unwrap());
    }
}
