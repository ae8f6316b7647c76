//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use autrel::buchi::{
    build_formula, etiling_witness, eval_bounded, eval_with_witness, format_env, parse_env,
    prefix_shape, toy_instance, Params,
};
use autrel::convolution::{
    bad_pad_nfa, decide_forall_nonempty, padded_alphabet, project_forall, Budget, Mode,
    RelationAutomaton,
};
use autrel::filters::{bot, filter_outputs, top};
use autrel::nfa::Nfa;
use autrel::ops::{complement, intersect, regex_to_nfa};
use autrel::regex::Regex;
use autrel::symbol::{chars, show_compact, Alphabet, Atom, Symbol, Word};
use autrel::tiling::*;
use common::{all_words, random_nfa, rng, run_accepts};
use num_bigint::BigUint;
use rand::Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn comb_values() -> Check {
    let s: String = comb(4).iter().map(|d| d.to_string()).collect();
    ensure(s == "40102010301020104", || format!("comb(4) = {s}"))?;
    for n in 1..=16 {
        let len = comb(n).len();
        ensure(len == (1 << n) + 1, || format!("|comb({n})| = {len}"))?;
    }
    Ok(())
}

fn comb_regex_intersection() -> Check {
    for n in 2..=4u32 {
        let sigma = digit_alphabet(n);
        let es = comb_regexes(n);
        let mut acc = regex_to_nfa(&es[0], &sigma).map_err(|e| e.to_string())?;
        for e in &es[1..] {
            let b = regex_to_nfa(e, &sigma).map_err(|e| e.to_string())?;
            acc = intersect(&acc, &b).map_err(|e| e.to_string())?;
        }
        let got = acc.enumerate_upto((1 << n) + 2);
        ensure(got == vec![comb_word(n)], || {
            format!("n = {n}: {} words", got.len())
        })?;
    }
    Ok(())
}

fn filter_example() -> Check {
    let base = Alphabet::of_chars("abcdefghijklmnopqrstuvwxyz_");
    let letter = Regex::class(base.iter().filter(|s| s.atom(0).as_str() != "_").cloned());
    let word = Regex::seq([top(&letter), bot(&letter).star()]);
    let f = Regex::seq([
        Regex::seq([word.clone(), bot(&Regex::lit(Symbol::plain("_")))]).star(),
        word,
    ]);
    let u = chars("nondeterministic_finite_automaton");
    let out = filter_outputs(&f, &base, &u).map_err(|e| e.to_string())?;
    let got: Vec<String> = out
        .enumerate_upto(u.len())
        .iter()
        .map(|w| show_compact(w))
        .collect();
    ensure(got == vec!["nfa"], || format!("outputs {got:?}"))
}

fn counter_family() -> Check {
    for (width, rows) in [(5, 8usize), (4, 4)] {
        let inst = counter_instance(width);
        let ts = enumerate_tilings(&inst, width, 10).map_err(|e| e.to_string())?;
        ensure(ts.len() == 1, || {
            format!("width {width}: {} tilings", ts.len())
        })?;
        let t = &ts[0];
        ensure(t.height() == rows, || {
            format!("width {width}: {} rows", t.height())
        })?;
        let vals = counter_values(&inst, t);
        let want: Vec<u64> = (0..rows as u64).collect();
        ensure(vals == want, || format!("width {width}: values {vals:?}"))?;
    }
    Ok(())
}

fn bad_pad_sizes() -> Check {
    let sigma = Alphabet::of_chars("ab");
    for k in 1..=3 {
        let l = bad_pad_nfa(k, &sigma);
        ensure(l.num_states() == k + 2, || {
            format!("k = {k}: {} states", l.num_states())
        })?;
        let c = complement(&l);
        ensure(c.num_states() <= 1 << (k + 2), || {
            format!("k = {k}: complement has {} states", c.num_states())
        })?;
    }
    Ok(())
}

/// `forall v. (u, v) in L` by enumerating every `v` up to `|u| + 2^|Q|`,
/// simulating state sets as bit masks along a shared prefix tree.
struct PairOracle {
    /// successor masks by state, then by letter `(x, y)` over `#, a, b`
    next: Vec<[[u8; 3]; 3]>,
    init: u8,
    fin: u8,
}

impl PairOracle {
    fn new(a: &Nfa) -> PairOracle {
        let atoms = [Atom::pad(), Atom::new("a"), Atom::new("b")];
        let mut next = vec![[[0u8; 3]; 3]; a.num_states()];
        for (q, row) in next.iter_mut().enumerate() {
            for x in 0..3 {
                for y in 0..3 {
                    let s = Symbol::tuple([atoms[x].clone(), atoms[y].clone()]);
                    if let Some(i) = a.alphabet().index_of(&s) {
                        for t in a.successors(q as u32, i) {
                            row[x][y] |= 1 << t;
                        }
                    }
                }
            }
        }
        let init = a.initial().iter().fold(0, |m, &q| m | 1 << q);
        let fin = a.finals().fold(0, |m, q| m | 1 << q);
        PairOracle { next, init, fin }
    }

    fn step(&self, m: u8, x: usize, y: usize) -> u8 {
        (0..self.next.len())
            .filter(|q| m >> q & 1 == 1)
            .fold(0, |acc, q| acc | self.next[q][x][y])
    }

    /// `u` as letter codes 1 (a) and 2 (b).
    fn forall(&self, u: &[usize], tail: usize) -> bool {
        self.walk(u, self.init, 0, u.len() + tail)
    }

    /// `m` is the set after the first `i` letters of `(u, v)` with `|v| = i`.
    fn walk(&self, u: &[usize], m: u8, i: usize, max: usize) -> bool {
        let mut end = m;
        for &x in &u[i.min(u.len())..] {
            end = self.step(end, x, 0);
        }
        if end & self.fin == 0 {
            return false;
        }
        if i == max {
            return true;
        }
        let x = u.get(i).copied().unwrap_or(0);
        (1..3).all(|y| self.walk(u, self.step(m, x, y), i + 1, max))
    }
}

fn projection_duality() -> Check {
    let mut r = rng(601);
    let ab = Alphabet::of_chars("ab");
    let alpha = padded_alphabet(&ab, 2);
    let us: Vec<Word> = (0..=4).flat_map(|n| all_words(&ab, n)).collect();
    let mut nonempty = 0;
    for case in 0..200 {
        let states = r.gen_range(1..=3);
        let density = [0.35, 0.5, 0.7][case % 3];
        let rel = RelationAutomaton::new(random_nfa(&mut r, &alpha, states, density), 1, 1)
            .map_err(|e| e.to_string())?;
        let naive = decide_forall_nonempty(&rel, Mode::Naive, Budget::default())
            .map_err(|e| e.to_string())?;
        let fly = decide_forall_nonempty(&rel, Mode::OnTheFly, Budget::default())
            .map_err(|e| e.to_string())?;
        ensure(naive.witness == fly.witness, || {
            format!("case {case}: {:?} vs {:?}", naive.witness, fly.witness)
        })?;
        let p = project_forall(&rel, Budget::default()).map_err(|e| e.to_string())?;
        let oracle = PairOracle::new(&rel.nfa);
        let tail = 1 << states;
        for u in &us {
            let code: Vec<usize> = u
                .iter()
                .map(|s| if s.atom(0).as_str() == "a" { 1 } else { 2 })
                .collect();
            let want = oracle.forall(&code, tail);
            let got = run_accepts(&p, u);
            ensure(got == want, || {
                format!("case {case}: u = {} gives {got}", show_compact(u))
            })?;
        }
        nonempty += usize::from(naive.witness.is_some());
    }
    ensure(nonempty > 0, || "every projection was empty".into())
}

fn comb_automaton_check() -> Check {
    let mut r = rng(607);
    for n in [2u32, 3, 6] {
        let s = SigmaI::new(n, 1);
        let c = comb_automaton(&s).map_err(|e| e.to_string())?;
        let good = comb_mark(&s);
        ensure(rho_forall_member(&good, &c), || {
            format!("n = {n}: comb rejected")
        })?;
        for _ in 0..10 {
            let mut bad = good.clone();
            let i = r.gen_range(0..good.len() - 1);
            let d = (s.digit_of(&bad[i]).unwrap() + r.gen_range(1..=n)) % (n + 1);
            bad[i] = s.digit(d);
            ensure(!rho_forall_member(&bad, &c), || {
                format!("n = {n}: mutation at {i} accepted")
            })?;
        }
    }
    Ok(())
}

fn reduction_spot_check() -> Check {
    let mut r = rng(613);
    let inst = CorridorInstance::monochrome(6);
    let red = build_reduction(&inst).map_err(|e| e.to_string())?;
    let checker = Checker::new(&inst).map_err(|e| e.to_string())?;
    let s = &red.sigma;
    let good = encode_tiling(&inst, &Tiling::new(vec![vec![0; 64]; 2]).unwrap())
        .map_err(|e| e.to_string())?;
    let mut words = vec![good.clone()];
    while words.len() < 21 {
        let mut bad = good.clone();
        let i = r.gen_range(0..bad.len());
        let x = s
            .alphabet()
            .symbol(r.gen_range(0..s.alphabet().len() as u32))
            .clone();
        if x != bad[i] {
            bad[i] = x;
            words.push(bad);
        }
    }
    for (k, w) in words.iter().enumerate() {
        let direct = checker.in_li(w).map_err(|e| e.to_string())?;
        let auto = rho_forall_member(w, &red.a_prime);
        ensure(direct == auto, || {
            format!("word {k}: in_LI {direct}, automaton {auto}")
        })?;
        ensure(direct == (k == 0), || format!("word {k}: verdict {direct}"))?;
    }
    Ok(())
}

fn reduction_size() -> Check {
    let states = |n: u32| -> Result<usize, String> {
        Ok(build_reduction(&CorridorInstance::monochrome(n))
            .map_err(|e| e.to_string())?
            .a_i
            .num_states())
    };
    let c = states(6)? as f64 / 216.0;
    for n in 7..=10 {
        let q = states(n)?;
        ensure(q as f64 <= c * f64::from(n).powi(3), || {
            format!("n = {n}: {q} states > {c:.2} n^3")
        })?;
    }
    Ok(())
}

/// Every annotation of `w` is accepted.
fn brute_rho_forall(s: &SigmaI, w: &[Symbol], a: &Nfa) -> bool {
    let k = (s.n() + 1) as usize;
    (0..k.pow(w.len() as u32)).all(|mut code| {
        let v: Word = w
            .iter()
            .map(|x| {
                let d = (code % k) as u32;
                code /= k;
                s.annotate(x, d)
            })
            .collect();
        run_accepts(a, &v)
    })
}

fn allsuf_suite() -> Check {
    let mut r = rng(619);
    let s = SigmaI::new(1, 1);
    let ann = s.annotated();
    let words: Vec<Word> = (0..=4).flat_map(|n| all_words(s.alphabet(), n)).collect();
    for case in 0..100 {
        let a = random_nfa(&mut r, &ann, 3, 0.08);
        let all = allsuf(&a);
        let single: Vec<bool> = words.iter().map(|w| brute_rho_forall(&s, w, &a)).collect();
        let index: std::collections::HashMap<&[Symbol], usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        for w in &words {
            let want = (1..=w.len()).all(|k| single[index[&w[k..]]]);
            ensure(rho_forall_member(w, &all) == want, || {
                format!("case {case}: {}", show_compact(w))
            })?;
        }
    }
    Ok(())
}

fn big(k: u64) -> BigUint {
    BigUint::from(k)
}

fn buchi_oracles() -> Check {
    let env = |pairs: &[(&str, u64)]| -> std::collections::BTreeMap<String, BigUint> {
        pairs
            .iter()
            .map(|&(k, v)| (k.to_string(), big(v)))
            .collect()
    };
    let bit_at = build_formula("BitAt", &Params::default()).map_err(|e| e.to_string())?;
    for v in 0..32u64 {
        for x in [1u64, 2, 4, 8, 16] {
            for b in 0..2 {
                let want = (v / x) % 2 == b;
                // pre <= v, suf < x, y divides pre
                let got = eval_bounded(&bit_at, &env(&[("v", v), ("x", x), ("b", b)]), &big(32))
                    .map_err(|e| e.to_string())?;
                ensure(got == want, || format!("BitAt({v}, {x}, {b}) = {got}"))?;
            }
        }
    }
    let num_at = build_formula(
        "NumAt",
        &Params {
            k: 2,
            ..Params::default()
        },
    )
    .map_err(|e| e.to_string())?;
    for u1 in 0..16u64 {
        for u2 in 0..16u64 {
            for x in 0..=8u64 {
                for a in 0..4u64 {
                    let want = x.is_power_of_two() && 2 * (u1 / x % 2) + u2 / x % 2 == a;
                    let e = env(&[("u1", u1), ("u2", u2), ("x", x), ("a", a)]);
                    let got = eval_bounded(&num_at, &e, &big(16)).map_err(|e| e.to_string())?;
                    ensure(got == want, || {
                        format!("NumAt({u1}, {u2}, {x}, {a}) = {got}")
                    })?;
                }
            }
        }
    }
    for (name, want) in [("ETiling", "∃∀∃"), ("ETiling'", "∃∀∃∀")] {
        let f = build_formula(name, &Params::default()).map_err(|e| e.to_string())?;
        let got = prefix_shape(&f);
        ensure(got == want, || format!("{name}: {got}"))?;
    }
    Ok(())
}

fn witness_mode() -> Check {
    let inst = toy_instance();
    let t = Tiling::new(vec![vec![0, 1], vec![2, 3]]).unwrap();
    let f = build_formula(
        "ETiling",
        &Params {
            opaque: true,
            ..Params::default()
        },
    )
    .map_err(|e| e.to_string())?;
    let text = format_env(&etiling_witness(2, &inst, &t).map_err(|e| e.to_string())?);
    let w = parse_env(&text).map_err(|e| e.to_string())?;
    // positions reach 2F = 16; tiles and ruler values are smaller
    let bound = big(16);
    ensure(
        eval_with_witness(&f, &w, &bound).map_err(|e| e.to_string())?,
        || format!("{text} rejected"),
    )?;
    let mut bad = w.clone();
    *bad.get_mut("w1").unwrap() ^= big(1);
    ensure(
        !eval_with_witness(&f, &bad, &bound).map_err(|e| e.to_string())?,
        || format!("{} accepted", format_env(&bad)),
    )
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 12] = [
        ("comb values and lengths", 1, comb_values),
        (
            "comb regexes intersect to the comb",
            30,
            comb_regex_intersection,
        ),
        ("filter outputs of the phrase", 1, filter_example),
        ("counter tilings at widths 5 and 4", 10, counter_family),
        ("bad-padding automaton sizes", 1, bad_pad_sizes),
        (
            "projection duality and mode agreement",
            300,
            projection_duality,
        ),
        ("comb automaton spot check", 60, comb_automaton_check),
        ("reduction spot check at n = 6", 600, reduction_spot_check),
        ("reduction size is cubic", 60, reduction_size),
        ("ALLSUF property suite", 120, allsuf_suite),
        ("Buchi oracles and prefixes", 300, buchi_oracles),
        ("witness-mode evaluation", 600, witness_mode),
    ];
    let only: BTreeSet<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let result = result.and_then(|()| {
            ensure(took <= Duration::from_secs(*limit), || {
                format!("took longer than {limit} s")
            })
        });
        match result {
            Ok(()) => println!("PASS {id:>2} {name} ({:.2} s)", took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL {id:>2} {name} ({:.2} s): {e}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
