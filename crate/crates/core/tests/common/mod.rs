//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use autrel::nfa::{Nfa, NfaBuilder};
use autrel::regex::Regex;
use autrel::symbol::{Alphabet, Symbol, Word};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Positions reachable after matching `e` from position `i`.
fn ends(e: &Regex, w: &[Symbol], i: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    match e {
        Regex::Empty => {}
        Regex::Lit(s) => {
            if w.get(i) == Some(s) {
                out.insert(i + 1);
            }
        }
        Regex::Class(v) => {
            if let Some(x) = w.get(i) {
                if v.contains(x) {
                    out.insert(i + 1);
                }
            }
        }
        Regex::Concat(parts) => {
            out.insert(i);
            for p in parts {
                out = out.iter().flat_map(|&j| ends(p, w, j)).collect();
            }
        }
        Regex::Union(parts) => {
            for p in parts {
                out.extend(ends(p, w, i));
            }
        }
        Regex::Star(inner) => {
            out.insert(i);
            let mut frontier = vec![i];
            while let Some(j) = frontier.pop() {
                for k in ends(inner, w, j) {
                    if out.insert(k) {
                        frontier.push(k);
                    }
                }
            }
        }
        Regex::Power(inner, k) => {
            out.insert(i);
            for _ in 0..*k {
                out = out.iter().flat_map(|&j| ends(inner, w, j)).collect();
            }
        }
    }
    out
}

/// Recursive-descent regex matcher.
pub fn regex_matches(e: &Regex, w: &[Symbol]) -> bool {
    ends(e, w, 0).contains(&w.len())
}

/// All words over `sigma` of length at most `n`, shortest first then in
/// alphabet order.
pub fn all_words(sigma: &Alphabet, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for s in sigma.iter() {
                let mut w2 = w.clone();
                w2.push(s.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Membership by explicit depth-first search over runs.
pub fn run_accepts(a: &Nfa, w: &[Symbol]) -> bool {
    let idx: Vec<u32> = w
        .iter()
        .map(|s| a.alphabet().index_of(s).unwrap())
        .collect();
    fn go(a: &Nfa, q: u32, rest: &[u32]) -> bool {
        match rest.split_first() {
            None => a.is_final(q),
            Some((&s, tail)) => a.edges(q).iter().any(|&(x, t)| x == s && go(a, t, tail)),
        }
    }
    a.initial().iter().any(|&q| go(a, q, &idx))
}

/// Bounded language by filtering every word through the run oracle.
pub fn bounded_language(a: &Nfa, n: usize) -> BTreeSet<Word> {
    all_words(a.alphabet(), n)
        .into_iter()
        .filter(|w| run_accepts(a, w))
        .collect()
}

/// Random NFA: every possible edge present with probability `density`.
pub fn random_nfa(r: &mut impl Rng, sigma: &Alphabet, states: usize, density: f64) -> Nfa {
    let mut b = NfaBuilder::with_states(sigma.clone(), states);
    let mut has_initial = false;
    for p in 0..states as u32 {
        for a in 0..sigma.len() as u32 {
            for q in 0..states as u32 {
                if r.gen_bool(density) {
                    b.add_transition(p, a, q);
                }
            }
        }
        if r.gen_bool(0.4) {
            b.set_initial(p);
            has_initial = true;
        }
        if r.gen_bool(0.4) {
            b.set_final(p, true);
        }
    }
    if states > 0 && !has_initial {
        b.set_initial(0);
    }
    b.build()
}

/// Random regular expression of bounded depth over `sigma`.
pub fn random_regex(r: &mut impl Rng, sigma: &Alphabet, depth: u32) -> Regex {
    let pick = |r: &mut dyn rand::RngCore| sigma.symbol(r.gen_range(0..sigma.len() as u32)).clone();
    if depth == 0 {
        return match r.gen_range(0..6) {
            0 => Regex::Empty,
            1 => Regex::epsilon(),
            2 => Regex::class((0..2).map(|_| pick(r))),
            _ => Regex::lit(pick(r)),
        };
    }
    match r.gen_range(0..6) {
        0 => Regex::seq(
            (0..r.gen_range(0..3))
                .map(|_| random_regex(r, sigma, depth - 1))
                .collect::<Vec<_>>(),
        ),
        1 => Regex::alt(
            (0..r.gen_range(1..3))
                .map(|_| random_regex(r, sigma, depth - 1))
                .collect::<Vec<_>>(),
        ),
        2 => random_regex(r, sigma, depth - 1).star(),
        3 => {
            let k = r.gen_range(0..3);
            random_regex(r, sigma, depth - 1).power(k)
        }
        _ => Regex::seq([
            random_regex(r, sigma, depth - 1),
            random_regex(r, sigma, depth - 1),
        ]),
    }
}
