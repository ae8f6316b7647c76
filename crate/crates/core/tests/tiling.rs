mod common;

use std::collections::BTreeSet;

use autrel::filters::{mark, Mark};
use autrel::nfa::Nfa;
use autrel::ops::{intersect, regex_to_nfa};
use autrel::regex::Regex;
use autrel::symbol::{show_compact, word, Symbol, Word};
use autrel::tiling::*;
use common::*;
use rand::Rng;

fn show(w: &[Symbol]) -> String {
    show_compact(w)
}

fn intersection(regexes: &[Regex], sigma: &autrel::Alphabet) -> Nfa {
    let mut acc = regex_to_nfa(&regexes[0], sigma).unwrap();
    for e in &regexes[1..] {
        acc = intersect(&acc, &regex_to_nfa(e, sigma).unwrap()).unwrap();
    }
    acc
}

#[test]
fn comb_regexes_two_single_word() {
    let es = comb_regexes(2);
    assert_eq!(es.len(), 3);
    let sigma = digit_alphabet(2);
    let oracle: Vec<Word> = all_words(&sigma, 6)
        .into_iter()
        .filter(|w| es.iter().all(|e| regex_matches(e, w)))
        .collect();
    assert_eq!(oracle, vec![word("2 0 1 0 2")]);
    assert_eq!(intersection(&es, &sigma).enumerate_upto(6), oracle);
    let w = word("2 0 2");
    assert!(regex_matches(&es[2], &w));
    assert!(!intersection(&es, &sigma).accepts(&w).unwrap());
}

#[test]
fn comb_regexes_four_unique_word() {
    let es = comb_regexes(4);
    let sigma = digit_alphabet(4);
    let c = comb_word(4);
    assert!(es.iter().all(|e| regex_matches(e, &c)));
    assert_eq!(intersection(&es, &sigma).enumerate_upto(18), vec![c]);
}

fn comb_prime(k: u32) -> Vec<u32> {
    if k == 0 {
        return vec![0];
    }
    let inner = comb_prime(k - 1);
    let mut out = inner.clone();
    out.push(k);
    out.extend(inner);
    out
}

#[test]
fn partial_intersections_are_comb_prime_blocks() {
    let n = 3;
    let es = comb_regexes(n);
    let sigma = digit_alphabet(n);
    let words = all_words(&sigma, (1 << n) + 1);
    for k in 0..n - 1 {
        let cp = comb_prime(k);
        let gt: Vec<Symbol> = (k + 1..=n)
            .map(|d| Symbol::plain(d.to_string().as_str()))
            .collect();
        let block = Regex::seq(
            cp.iter()
                .map(|d| Regex::lit(Symbol::plain(d.to_string().as_str())))
                .collect::<Vec<_>>(),
        );
        let target = Regex::seq([
            Regex::class(gt.clone()),
            Regex::seq([block, Regex::class(gt)]).star(),
        ]);
        let lhs: BTreeSet<Word> = words
            .iter()
            .filter(|w| es[..=k as usize].iter().all(|e| regex_matches(e, w)))
            .cloned()
            .collect();
        let rhs: BTreeSet<Word> = words
            .iter()
            .filter(|w| regex_matches(&target, w))
            .cloned()
            .collect();
        assert_eq!(lhs, rhs, "k = {k}");
    }
}

#[test]
fn validity_examples() {
    let mono = CorridorInstance::monochrome(1);
    assert!(is_valid_tiling(
        &mono,
        &Tiling::new(vec![vec![0; 5]; 3]).unwrap()
    ));
    let two =
        CorridorInstance::new(vec![Tile::new(0, 1, 0, 0), Tile::new(0, 0, 0, 2)], 0, 1, 1).unwrap();
    assert_eq!(
        check_tiling(&two, &Tiling::new(vec![vec![0, 1]]).unwrap()),
        Some(Violation::Horizontal { row: 1, col: 1 })
    );
    let inst = counter_instance(5);
    let t = solve_corridor(&inst, 5).unwrap().unwrap();
    assert!(is_valid_tiling(&inst, &t));
}

#[test]
fn solver_examples() {
    let mono = CorridorInstance::monochrome(1);
    assert_eq!(solve_corridor(&mono, 3).unwrap().unwrap().height(), 1);
    let stuck = CorridorInstance::new(vec![Tile::new(0, 7, 0, 0), Tile::mono(0)], 0, 1, 1).unwrap();
    assert_eq!(solve_corridor(&stuck, 2).unwrap(), None);
    let inst = counter_instance(5);
    let t = solve_corridor(&inst, 5).unwrap().unwrap();
    assert_eq!(t.height(), 8);
    assert_eq!(counter_values(&inst, &t), (0..8).collect::<Vec<u64>>());
}

#[test]
fn enumeration_examples() {
    let empty = CorridorInstance {
        tiles: vec![],
        top_left: 0,
        bottom_right: 0,
        n: 1,
    };
    assert!(enumerate_tilings(&empty, 2, 3).unwrap().is_empty());
    let mono = CorridorInstance::monochrome(1);
    let all = enumerate_tilings(&mono, 2, 3).unwrap();
    assert_eq!(
        all.iter().map(Tiling::height).collect::<Vec<_>>(),
        vec![1, 2, 3]
    );
    assert_eq!(
        enumerate_tilings(&counter_instance(5), 5, 10)
            .unwrap()
            .len(),
        1
    );
}

#[test]
fn counter_is_unique_and_counts() {
    for width in [3usize, 4, 5, 6] {
        let inst = counter_instance(width);
        let h = 1usize << (width - 2);
        let all = enumerate_tilings(&inst, width, h + 2).unwrap();
        assert_eq!(all.len(), 1, "width {width}");
        assert_eq!(all[0].height(), h);
        assert!(is_valid_tiling(&inst, &all[0]));
        assert_eq!(
            counter_values(&inst, &all[0]),
            (0..h as u64).collect::<Vec<_>>()
        );
    }
}

#[test]
fn width_four_rows_read_in_order() {
    let inst = counter_instance(4);
    let t = &enumerate_tilings(&inst, 4, 6).unwrap()[0];
    let bits: Vec<String> = t
        .rows()
        .iter()
        .map(|r| {
            r[1..3]
                .iter()
                .rev()
                .map(|&x| inst.tiles[x].top.to_string())
                .collect()
        })
        .collect();
    assert_eq!(bits, vec!["00", "01", "10", "11"]);
}

#[test]
fn encoding_examples() {
    let inst = CorridorInstance::monochrome(2);
    let t = Tiling::new(vec![vec![0; 4]]).unwrap();
    let w = encode_tiling(&inst, &t).unwrap();
    assert_eq!(show(&w[2..11]), "<2t00102A>");
    assert!(cond_check(1, &inst, &w).unwrap());
    let inst4 = CorridorInstance::monochrome(4);
    let t4 = Tiling::new(vec![vec![0; 16]; 2]).unwrap();
    let w4 = encode_tiling(&inst4, &t4).unwrap();
    assert_eq!(show(&w4[2..21]), "<4t00102010301020104");
    let fifth = w4.iter().position(|x| *x == Symbol::plain("t0")).unwrap();
    assert_eq!(fifth, 4);
}

/// Two tiles of one colour: every placement is valid.
fn plain_pair(n: u32) -> CorridorInstance {
    CorridorInstance::new(vec![Tile::mono(0), Tile::mono(0)], 0, 0, n).unwrap()
}

/// Tiles with equal sides except the second one's top and bottom.
fn striped(n: u32) -> CorridorInstance {
    CorridorInstance::new(vec![Tile::mono(0), Tile::new(1, 0, 1, 0)], 0, 0, n).unwrap()
}

fn random_tiling(r: &mut impl Rng, inst: &CorridorInstance, h: usize) -> Tiling {
    let w = inst.width();
    let mut rows: Vec<Vec<usize>> = (0..h)
        .map(|_| (0..w).map(|_| r.gen_range(0..inst.tiles.len())).collect())
        .collect();
    rows[0][0] = inst.top_left;
    rows[h - 1][w - 1] = inst.bottom_right;
    Tiling::new(rows).unwrap()
}

fn mutate(r: &mut impl Rng, s: &SigmaI, w: &[Symbol]) -> Word {
    let mut out = w.to_vec();
    let i = r.gen_range(0..out.len());
    loop {
        let x = s
            .alphabet()
            .symbol(r.gen_range(0..s.alphabet().len() as u32))
            .clone();
        if x != out[i] {
            out[i] = x;
            return out;
        }
    }
}

#[test]
fn checker_examples_at_six() {
    let inst = CorridorInstance::monochrome(6);
    let c = Checker::new(&inst).unwrap();
    let w = encode_tiling(&inst, &Tiling::new(vec![vec![0; 64]; 2]).unwrap()).unwrap();
    for i in 1..=6 {
        assert!(c.check(i, &w).unwrap(), "condition {i}");
    }
    let mut bad = w.clone();
    bad[1] = c.sigma().cell_open();
    assert!(!c.check(1, &bad).unwrap());
    assert!(!c.in_li(&[]).unwrap());

    let st = striped(6);
    let cs = Checker::new(&st).unwrap();
    let broken = Tiling::new(vec![vec![0; 64]; 2]).unwrap().with(1, 2, 1);
    let wb = encode_tiling(&st, &broken).unwrap();
    assert!(!cs.check(6, &wb).unwrap());
    assert!(cs.check(3, &wb).unwrap());
    assert!(!cs.in_li(&wb).unwrap());
}

/// The comb spelled by a row: the first cell's prefix followed by the
/// first digit of each cell suffix.
fn spelled_combs(s: &SigmaI, w: &[Symbol]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur: Option<Vec<u32>> = None;
    let mut i = 0;
    while i < w.len() {
        let x = &w[i];
        if *x == s.row_open() {
            cur = Some(Vec::new());
        } else if *x == s.row_close() {
            out.extend(cur.take());
        } else if *x == s.cell_open() {
            let mut j = i + 1;
            let mut prefix = Vec::new();
            while let Some(d) = w.get(j).and_then(|y| s.digit_of(y)) {
                prefix.push(d);
                j += 1;
            }
            if let Some(c) = cur.as_mut() {
                if c.is_empty() {
                    c.extend(prefix);
                }
                if let Some(d) = w.get(j + 1).and_then(|y| s.digit_of(y)) {
                    c.push(d);
                }
            }
            i = j;
        }
        i += 1;
    }
    out
}

#[test]
fn rows_spell_the_comb() {
    let mut r = rng(31);
    let inst = plain_pair(3);
    let s = SigmaI::of(&inst);
    let c = Checker::new(&inst).unwrap();
    let comb3 = comb(3);
    for h in 1..=3 {
        let w = encode_tiling(&inst, &random_tiling(&mut r, &inst, h)).unwrap();
        assert!(c.check(1, &w).unwrap() && c.check(5, &w).unwrap());
        assert!(spelled_combs(&s, &w[1..]).iter().all(|x| *x == comb3));
    }
    let base = encode_tiling(&inst, &random_tiling(&mut r, &inst, 2)).unwrap();
    let mut negatives = 0;
    while negatives < 20 {
        let m = mutate(&mut r, &s, &base);
        if c.check(1, &m).unwrap() && c.check(5, &m).unwrap() {
            assert!(
                spelled_combs(&s, &m[1..]).iter().all(|x| *x == comb3),
                "{}",
                show(&m)
            );
        } else {
            negatives += 1;
        }
    }
}

#[test]
fn valid_encodings_are_in_li_and_mutations_are_not() {
    let mut r = rng(37);
    let inst = plain_pair(6);
    let c = Checker::new(&inst).unwrap();
    for h in [1, 2, 3, 1, 2] {
        let t = random_tiling(&mut r, &inst, h);
        assert!(is_valid_tiling(&inst, &t));
        assert!(c.in_li(&encode_tiling(&inst, &t).unwrap()).unwrap());
    }
    let mono = CorridorInstance::monochrome(6);
    let cm = Checker::new(&mono).unwrap();
    let s = SigmaI::of(&mono);
    let w = encode_tiling(&mono, &Tiling::new(vec![vec![0; 64]; 2]).unwrap()).unwrap();
    for _ in 0..20 {
        assert!(!cm.in_li(&mutate(&mut r, &s, &w)).unwrap());
    }
}

#[test]
fn allsuf_checks_every_proper_suffix() {
    let mut r = rng(41);
    let s = SigmaI::new(1, 1);
    let ann = s.annotated();
    let words: Vec<Word> = all_words(s.alphabet(), 3)
        .into_iter()
        .chain((0..60).map(|_| {
            (0..4)
                .map(|_| s.alphabet().symbol(r.gen_range(0..8)).clone())
                .collect()
        }))
        .collect();
    for _ in 0..25 {
        let a = random_nfa(&mut r, &ann, 3, 0.08);
        let all = allsuf(&a);
        assert_eq!(all.num_states(), a.num_states() + 1);
        for w in &words {
            let want = (1..=w.len()).all(|k| brute_rho_forall(&s, &w[k..], &a));
            assert_eq!(rho_forall_member(w, &all), want, "{}", show(w));
            assert_eq!(rho_forall_member(w, &a), brute_rho_forall(&s, w, &a));
        }
    }
}

/// Every annotation of `w`, checked with the run oracle.
fn brute_rho_forall(s: &SigmaI, w: &[Symbol], a: &Nfa) -> bool {
    let k = s.n() + 1;
    let total = (k as usize).pow(w.len() as u32);
    (0..total).all(|mut code| {
        let v: Word = w
            .iter()
            .map(|x| {
                let d = (code % k as usize) as u32;
                code /= k as usize;
                s.annotate(x, d)
            })
            .collect();
        run_accepts(a, &v)
    })
}

/// `C_n` membership by its definition: the last letter `(A, i)` and the
/// rest matching `E_i` after dropping annotations.
fn comb_oracle(n: u32, v: &[Symbol]) -> bool {
    let Some((last, rest)) = v.split_last() else {
        return false;
    };
    if last.atom(0).as_str() != FORALL {
        return false;
    }
    let Some(i) = last.atom(1).numeral() else {
        return false;
    };
    let base: Word = rest.iter().map(|x| x.prefix(1)).collect();
    regex_matches(&comb_regexes(n)[i as usize], &base)
}

fn fact_oracle(f: &Regex, n: u32, w: &[Symbol]) -> bool {
    (0u64..1 << w.len()).any(|bits| {
        let marks: Vec<Mark> = (0..w.len())
            .map(|i| {
                if bits >> i & 1 == 1 {
                    Mark::Top
                } else {
                    Mark::Bot
                }
            })
            .collect();
        let marked: Word = w
            .iter()
            .zip(&marks)
            .map(|(x, &m)| mark(&x.prefix(1), m))
            .collect();
        if !regex_matches(f, &marked) {
            return false;
        }
        let kept: Word = w
            .iter()
            .zip(&marks)
            .filter(|(_, &m)| m == Mark::Top)
            .map(|(x, _)| x.clone())
            .collect();
        comb_oracle(n, &kept)
    })
}

fn annotate_word(r: &mut impl Rng, s: &SigmaI, w: &[Symbol], tail: u32) -> Word {
    let mut out: Word = w
        .iter()
        .map(|x| s.annotate(x, r.gen_range(0..=s.n())))
        .collect();
    let last = out.len() - 1;
    out[last] = s.annotate(&w[last].prefix(1), tail);
    out
}

#[test]
fn filtered_products_match_their_definition() {
    let mut r = rng(43);
    let inst = CorridorInstance::monochrome(1);
    let s = SigmaI::of(&inst);
    let (c_n, c_hat, _) = condition_automata(&inst).unwrap();
    let cell = word("< 1 t0 0 1 A >");
    let last_cell = word("< 1 0 t0 1 A > ]");
    let cases: Vec<(usize, Regex, Word)> = vec![
        (0, cond4_filter(&s), cell.clone()),
        (0, cond4_filter(&s), word("< 1 t0 1 0 A > <")),
        (
            1,
            cond5_filter(&s),
            [cell.clone(), last_cell.clone()].concat(),
        ),
        (1, cond5_filter(&s), last_cell.clone()),
        (
            2,
            cond6_filter(&s, &inst),
            [cell.clone(), word("] [ < 1 t0 0 1 A > ]")].concat(),
        ),
        (
            2,
            cond6_filter(&s, &inst),
            [cell.clone(), word("] [ < 1 0 t0 1 A > ]")].concat(),
        ),
    ];
    for (k, f, w) in cases {
        for tail in 0..=1 {
            for _ in 0..3 {
                let v = annotate_word(&mut r, &s, &w, tail);
                assert_eq!(
                    run_accepts(&c_hat[k], &v),
                    fact_oracle(&f, 1, &v),
                    "filter {} on {}",
                    k + 4,
                    show(&v)
                );
            }
        }
    }
    assert!(rho_forall_member(&comb_mark(&s), &c_n));
}

#[test]
fn comb_automaton_membership() {
    let mut r = rng(47);
    for n in [2, 3, 6] {
        let s = SigmaI::new(n, 1);
        let c = comb_automaton(&s).unwrap();
        assert!(rho_forall_member(&comb_mark(&s), &c), "n = {n}");
    }
    let s = SigmaI::new(6, 1);
    let c = comb_automaton(&s).unwrap();
    let good = comb_mark(&s);
    for _ in 0..10 {
        let mut bad = good.clone();
        let i = r.gen_range(0..good.len() - 1);
        let d = (s.digit_of(&bad[i]).unwrap() + r.gen_range(1..=6)) % 7;
        bad[i] = s.digit(d);
        assert!(!rho_forall_member(&bad, &c), "{}", show(&bad));
    }
}

#[test]
fn condition_automata_agree_with_checkers() {
    let mut r = rng(53);
    for inst in [striped(2), counter_like(2)] {
        let s = SigmaI::of(&inst);
        let (_, _, conds) = condition_automata(&inst).unwrap();
        let c = Checker::new(&inst).unwrap();
        let mut words = Vec::new();
        for h in 1..=2 {
            for _ in 0..2 {
                let w = encode_tiling(&inst, &random_tiling(&mut r, &inst, h)).unwrap();
                for _ in 0..6 {
                    words.push(mutate(&mut r, &s, &w));
                }
                words.push(w);
            }
        }
        for w in &words {
            let body = if w[0] == s.mark() { &w[1..] } else { &w[..] };
            for i in 1..=6 {
                assert_eq!(
                    rho_forall_member(body, &conds[i - 1]),
                    c.check(i, w).unwrap(),
                    "C^{i} on {}",
                    show(w)
                );
            }
        }
    }
}

/// Four tiles with two colours in each direction.
fn counter_like(n: u32) -> CorridorInstance {
    let tiles = vec![
        Tile::new(0, 0, 1, 0),
        Tile::new(1, 0, 0, 0),
        Tile::new(0, 1, 0, 0),
        Tile::new(1, 0, 1, 1),
    ];
    CorridorInstance::new(tiles, 0, 1, n).unwrap()
}

#[test]
fn reduction_sizes_grow_cubically_at_most() {
    let measure = |n: u32| {
        build_reduction(&CorridorInstance::monochrome(n))
            .unwrap()
            .a_i
            .num_states() as f64
    };
    let c = measure(6) / 216.0;
    for n in 7..=10 {
        assert!(measure(n) <= c * f64::from(n).powi(3), "n = {n}");
    }
}

#[test]
fn catch_all_tags_exclude_one_to_six() {
    for n in 6..=8 {
        let s = SigmaI::new(n, 1);
        let tags = catch_all_tags(&s);
        let want: Vec<u32> = std::iter::once(0).chain(7..=n).collect();
        let got: Vec<u32> = tags
            .iter()
            .map(|t| t.atom(1).numeral().unwrap() as u32)
            .collect();
        assert_eq!(got, want);
    }
}

#[test]
fn reduction_accepts_encodings_and_rejects_mutations() {
    let mut r = rng(59);
    let inst = CorridorInstance::monochrome(6);
    let red = build_reduction(&inst).unwrap();
    let s = &red.sigma;
    let w = encode_tiling(&inst, &Tiling::new(vec![vec![0; 64]; 2]).unwrap()).unwrap();
    assert!(rho_forall_member(&w, &red.a_prime));
    for _ in 0..5 {
        assert!(!rho_forall_member(&mutate(&mut r, s, &w), &red.a_prime));
    }
}

#[test]
fn pair_automaton_matches_annotation_view_on_short_words() {
    use autrel::convolution::{forall_member, RelationAutomaton};
    let inst = CorridorInstance::monochrome(6);
    let red = build_reduction(&inst).unwrap();
    let rel = RelationAutomaton::new(red.a_i.clone(), 1, 1).unwrap();
    let s = &red.sigma;
    let samples = [
        word(""),
        word("A"),
        word("A ["),
        word("A [ ]"),
        word("<"),
        word("A A"),
    ];
    for u in samples {
        let want = rho_forall_member(&u, &red.a_prime);
        assert_eq!(
            forall_member(&[u.clone()], &rel).unwrap(),
            want,
            "{}",
            show(&u)
        );
    }
    assert!(!s.alphabet().is_empty());
}
