//! The NFA carrier type, its builder and the basic queries.

use std::collections::VecDeque;

use crate::error::AutomataError;
use crate::symbol::{Alphabet, Symbol, Word};

pub type StateId = u32;

/// An epsilon-free NFA with dense state ids.
///
/// Transitions are stored per source state as `(symbol index, target)`
/// pairs sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    trans: Vec<Vec<(u32, StateId)>>,
    initial: Vec<StateId>,
    finals: Vec<bool>,
}

/// Incremental construction with optional epsilon edges.
#[derive(Clone, Debug)]
pub struct NfaBuilder {
    alphabet: Alphabet,
    trans: Vec<Vec<(u32, StateId)>>,
    eps: Vec<Vec<StateId>>,
    initial: Vec<StateId>,
    finals: Vec<bool>,
    has_eps: bool,
}

impl NfaBuilder {
    pub fn new(alphabet: Alphabet) -> NfaBuilder {
        NfaBuilder {
            alphabet,
            trans: Vec::new(),
            eps: Vec::new(),
            initial: Vec::new(),
            finals: Vec::new(),
            has_eps: false,
        }
    }

    pub fn with_states(alphabet: Alphabet, n: usize) -> NfaBuilder {
        let mut b = NfaBuilder::new(alphabet);
        b.add_states(n);
        b
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn add_state(&mut self) -> StateId {
        self.trans.push(Vec::new());
        self.eps.push(Vec::new());
        self.finals.push(false);
        (self.trans.len() - 1) as StateId
    }

    pub fn add_states(&mut self, n: usize) -> StateId {
        let first = self.trans.len() as StateId;
        for _ in 0..n {
            self.add_state();
        }
        first
    }

    pub fn add_transition(&mut self, p: StateId, sym: u32, q: StateId) {
        self.trans[p as usize].push((sym, q));
    }

    pub fn add_symbol_transition(
        &mut self,
        p: StateId,
        sym: &Symbol,
        q: StateId,
    ) -> Result<(), AutomataError> {
        let idx = self
            .alphabet
            .index_of(sym)
            .ok_or_else(|| AutomataError::UnknownSymbol(sym.to_string()))?;
        self.add_transition(p, idx, q);
        Ok(())
    }

    pub fn add_epsilon(&mut self, p: StateId, q: StateId) {
        if p != q {
            self.eps[p as usize].push(q);
            self.has_eps = true;
        }
    }

    pub fn set_initial(&mut self, q: StateId) {
        self.initial.push(q);
    }

    pub fn set_final(&mut self, q: StateId, fin: bool) {
        self.finals[q as usize] = fin;
    }

    /// Eliminates epsilon edges and freezes the automaton. States and their
    /// numbering are kept.
    pub fn build(mut self) -> Nfa {
        if self.has_eps {
            let n = self.trans.len();
            let mut trans = vec![Vec::new(); n];
            let mut finals = vec![false; n];
            let mut mark = vec![usize::MAX; n];
            let mut stack = Vec::new();
            for q in 0..n {
                let mut closure = Vec::new();
                stack.push(q);
                mark[q] = q;
                while let Some(p) = stack.pop() {
                    closure.push(p);
                    for &r in &self.eps[p] {
                        if mark[r as usize] != q {
                            mark[r as usize] = q;
                            stack.push(r as usize);
                        }
                    }
                }
                for &p in &closure {
                    finals[q] |= self.finals[p];
                    trans[q].extend_from_slice(&self.trans[p]);
                }
            }
            self.trans = trans;
            self.finals = finals;
        }
        for t in &mut self.trans {
            t.sort_unstable();
            t.dedup();
        }
        self.initial.sort_unstable();
        self.initial.dedup();
        Nfa {
            alphabet: self.alphabet,
            trans: self.trans,
            initial: self.initial,
            finals: self.finals,
        }
    }
}

impl Nfa {
    /// Assembles an automaton from explicit parts, validating every index.
    pub fn from_parts(
        alphabet: Alphabet,
        num_states: usize,
        transitions: impl IntoIterator<Item = (StateId, u32, StateId)>,
        initial: impl IntoIterator<Item = StateId>,
        finals: impl IntoIterator<Item = StateId>,
    ) -> Result<Nfa, AutomataError> {
        let check = |q: StateId| {
            if (q as usize) < num_states {
                Ok(q)
            } else {
                Err(AutomataError::InvalidState {
                    state: q,
                    count: num_states,
                })
            }
        };
        let mut b = NfaBuilder::with_states(alphabet, num_states);
        for (p, a, q) in transitions {
            check(p)?;
            check(q)?;
            if a as usize >= b.alphabet.len() {
                return Err(AutomataError::UnknownSymbol(format!("#{}", a)));
            }
            b.add_transition(p, a, q);
        }
        for q in initial {
            b.set_initial(check(q)?);
        }
        for q in finals {
            b.set_final(check(q)?, true);
        }
        Ok(b.build())
    }

    /// The automaton accepting nothing, with one state.
    pub fn empty(alphabet: Alphabet) -> Nfa {
        let mut b = NfaBuilder::with_states(alphabet, 1);
        b.set_initial(0);
        b.build()
    }

    /// The one-state automaton accepting every word.
    pub fn universal(alphabet: Alphabet) -> Nfa {
        let mut b = NfaBuilder::with_states(alphabet.clone(), 1);
        b.set_initial(0);
        b.set_final(0, true);
        for a in 0..alphabet.len() as u32 {
            b.add_transition(0, a, 0);
        }
        b.build()
    }

    /// Accepts exactly the given word.
    pub fn word(alphabet: Alphabet, w: &[Symbol]) -> Result<Nfa, AutomataError> {
        let idx = alphabet.encode(w)?;
        let mut b = NfaBuilder::with_states(alphabet, w.len() + 1);
        b.set_initial(0);
        b.set_final(w.len() as StateId, true);
        for (i, &a) in idx.iter().enumerate() {
            b.add_transition(i as StateId, a, i as StateId + 1);
        }
        Ok(b.build())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    /// The size measure `|Q| + |Q|^2 * |Sigma|`.
    pub fn size_metric(&self) -> u128 {
        let q = self.num_states() as u128;
        q + q * q * self.alphabet.len() as u128
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q as usize]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(q, _)| q as StateId)
    }

    /// Outgoing edges of `q` as `(symbol index, target)`, sorted.
    pub fn edges(&self, q: StateId) -> &[(u32, StateId)] {
        &self.trans[q as usize]
    }

    /// Targets of `q` under symbol index `a`.
    pub fn successors(&self, q: StateId, a: u32) -> impl Iterator<Item = StateId> + '_ {
        let e = &self.trans[q as usize];
        let lo = e.partition_point(|&(s, _)| s < a);
        e[lo..]
            .iter()
            .take_while(move |&&(s, _)| s == a)
            .map(|&(_, t)| t)
    }

    /// All transitions as `(p, symbol index, q)` in sorted order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, u32, StateId)> + '_ {
        self.trans
            .iter()
            .enumerate()
            .flat_map(|(p, e)| e.iter().map(move |&(a, q)| (p as StateId, a, q)))
    }

    pub fn into_builder(self) -> NfaBuilder {
        let n = self.trans.len();
        NfaBuilder {
            alphabet: self.alphabet,
            trans: self.trans,
            eps: vec![Vec::new(); n],
            initial: self.initial,
            finals: self.finals,
            has_eps: false,
        }
    }

    /// Sorted deduplicated successor set of a sorted state set.
    pub fn post(&self, set: &[StateId], a: u32) -> Vec<StateId> {
        let mut out: Vec<StateId> = set.iter().flat_map(|&q| self.successors(q, a)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn any_final(&self, set: &[StateId]) -> bool {
        set.iter().any(|&q| self.is_final(q))
    }

    pub fn accepts(&self, w: &[Symbol]) -> Result<bool, AutomataError> {
        let idx = self.alphabet.encode(w)?;
        Ok(self.accepts_indices(&idx))
    }

    pub fn accepts_indices(&self, w: &[u32]) -> bool {
        let mut cur = self.initial.clone();
        for &a in w {
            if cur.is_empty() {
                return false;
            }
            cur = self.post(&cur, a);
        }
        self.any_final(&cur)
    }

    /// Restricts to states reachable from the initial states, renumbering in
    /// breadth-first discovery order.
    pub fn trim_unreachable(&self) -> Nfa {
        let n = self.num_states();
        let mut id = vec![u32::MAX; n];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if id[q as usize] == u32::MAX {
                id[q as usize] = order.len() as u32;
                order.push(q);
                queue.push_back(q);
            }
        }
        while let Some(p) = queue.pop_front() {
            for &(_, q) in self.edges(p) {
                if id[q as usize] == u32::MAX {
                    id[q as usize] = order.len() as u32;
                    order.push(q);
                    queue.push_back(q);
                }
            }
        }
        if order.is_empty() {
            return Nfa::empty(self.alphabet.clone());
        }
        let mut b = NfaBuilder::with_states(self.alphabet.clone(), order.len());
        for (new, &old) in order.iter().enumerate() {
            for &(a, q) in self.edges(old) {
                b.add_transition(new as StateId, a, id[q as usize]);
            }
            b.set_final(new as StateId, self.is_final(old));
        }
        for &q in &self.initial {
            b.set_initial(id[q as usize]);
        }
        b.build()
    }

    /// Length of a shortest path from each state to a final state.
    pub fn distance_to_final(&self) -> Vec<Option<u32>> {
        let n = self.num_states();
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (p, _, q) in self.transitions() {
            rev[q as usize].push(p);
        }
        let mut dist = vec![None; n];
        let mut queue = VecDeque::new();
        for q in self.finals() {
            dist[q as usize] = Some(0);
            queue.push_back(q);
        }
        while let Some(q) = queue.pop_front() {
            let d = dist[q as usize].unwrap();
            for &p in &rev[q as usize] {
                if dist[p as usize].is_none() {
                    dist[p as usize] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        dist
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_accepted().is_none()
    }

    /// A shortest accepted word, the least one in alphabet order among those.
    pub fn shortest_accepted(&self) -> Option<Word> {
        let dist = self.distance_to_final();
        let len = self
            .initial
            .iter()
            .filter_map(|&q| dist[q as usize])
            .min()?;
        let mut cur: Vec<StateId> = self
            .initial
            .iter()
            .copied()
            .filter(|&q| dist[q as usize] == Some(len))
            .collect();
        let mut out = Vec::with_capacity(len as usize);
        for step in 0..len {
            let want = Some(len - step - 1);
            let mut best: Option<(u32, Vec<StateId>)> = None;
            for &q in &cur {
                for &(a, r) in self.edges(q) {
                    if dist[r as usize] != want {
                        continue;
                    }
                    match &mut best {
                        Some((b, set)) if *b == a => set.push(r),
                        Some((b, _)) if *b < a => {}
                        _ => best = Some((a, vec![r])),
                    }
                }
            }
            let (a, mut set) = best.expect("distance labels guarantee a successor");
            set.sort_unstable();
            set.dedup();
            out.push(self.alphabet.symbol(a).clone());
            cur = set;
        }
        Some(out)
    }

    /// Every accepted word of length at most `maxlen`, shortest first and
    /// lexicographic within a length.
    pub fn enumerate_upto(&self, maxlen: usize) -> Vec<Word> {
        let dist = self.distance_to_final();
        let prune = |set: Vec<StateId>, remaining: usize| -> Vec<StateId> {
            set.into_iter()
                .filter(|&q| dist[q as usize].map_or(false, |d| d as usize <= remaining))
                .collect()
        };
        let mut out = Vec::new();
        let start = prune(self.initial.clone(), maxlen);
        if start.is_empty() {
            return out;
        }
        let mut layer: Vec<(Vec<u32>, Vec<StateId>)> = vec![(Vec::new(), start)];
        for len in 0..=maxlen {
            for (w, set) in &layer {
                if self.any_final(set) {
                    out.push(self.alphabet.decode(w));
                }
            }
            if len == maxlen {
                break;
            }
            let mut next = Vec::new();
            for (w, set) in &layer {
                for a in 0..self.alphabet.len() as u32 {
                    let s = prune(self.post(set, a), maxlen - len - 1);
                    if !s.is_empty() {
                        let mut w2 = w.clone();
                        w2.push(a);
                        next.push((w2, s));
                    }
                }
            }
            layer = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{chars, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::of_chars("ab")
    }

    #[test]
    fn epsilon_elimination_keeps_language() {
        let mut b = NfaBuilder::with_states(ab(), 3);
        b.set_initial(0);
        b.add_epsilon(0, 1);
        b.add_transition(1, 0, 2);
        b.add_epsilon(2, 0);
        b.set_final(2, true);
        let a = b.build();
        assert!(a.accepts(&chars("a")).unwrap());
        assert!(a.accepts(&chars("aaa")).unwrap());
        assert!(!a.accepts(&chars("")).unwrap());
        assert!(!a.accepts(&chars("b")).unwrap());
    }

    #[test]
    fn accepts_epsilon_iff_initial_final() {
        let u = Nfa::universal(ab());
        assert!(u.accepts(&[]).unwrap());
        let e = Nfa::empty(ab());
        assert!(!e.accepts(&[]).unwrap());
    }

    #[test]
    fn unknown_symbol_is_an_error() {
        let u = Nfa::universal(ab());
        assert!(u.accepts(&chars("c")).is_err());
    }

    #[test]
    fn shortest_prefers_alphabet_order() {
        let mut b = NfaBuilder::with_states(ab(), 2);
        b.set_initial(0);
        b.set_final(1, true);
        b.add_transition(0, 1, 1);
        b.add_transition(0, 0, 1);
        assert_eq!(b.build().shortest_accepted(), Some(chars("a")));
        let w = Nfa::word(ab(), &chars("ab")).unwrap();
        assert_eq!(w.shortest_accepted(), Some(chars("ab")));
        assert_eq!(Nfa::empty(ab()).shortest_accepted(), None);
    }

    #[test]
    fn enumerate_orders_by_length_then_lex() {
        let u = Nfa::universal(ab());
        let words: Vec<String> = u
            .enumerate_upto(2)
            .iter()
            .map(|w| crate::symbol::show_compact(w))
            .collect();
        assert_eq!(words, vec!["", "a", "b", "aa", "ab", "ba", "bb"]);
        let one = Nfa::word(ab(), &chars("a")).unwrap();
        assert!(one.enumerate_upto(0).is_empty());
    }

    #[test]
    fn from_parts_validates() {
        assert!(Nfa::from_parts(ab(), 1, [(0, 0, 1)], [0], [0]).is_err());
        assert!(Nfa::from_parts(ab(), 1, [(0, 5, 0)], [0], [0]).is_err());
    }

    #[test]
    fn size_metric() {
        let a = Nfa::universal(ab());
        assert_eq!(a.size_metric(), 1 + 2);
    }
}
