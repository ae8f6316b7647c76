//! The instance alphabet, comb words, tiling encodings, the six condition
//! languages and their direct checkers.

use crate::error::TilingError;
use crate::filters::{bot, filter_contains_indexed, filter_nfa, mark, top, Mark};
use crate::nfa::{Nfa, NfaBuilder, StateId};
use crate::ops::regex_to_nfa;
use crate::regex::Regex;
use crate::symbol::{Alphabet, Atom, Symbol, Word};

use super::corridor::{CorridorInstance, Tiling};

pub const FORALL: &str = "A";
pub const ROW_OPEN: &str = "[";
pub const ROW_CLOSE: &str = "]";
pub const CELL_OPEN: &str = "<";
pub const CELL_CLOSE: &str = ">";

/// `Sigma_I`: tile atoms `t0, t1, ...`, digits `0..=n`, the mark and the
/// four brackets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaI {
    n: u32,
    tiles: usize,
    alphabet: Alphabet,
}

impl SigmaI {
    pub fn new(n: u32, tiles: usize) -> SigmaI {
        let mut atoms: Vec<String> = (0..tiles).map(|i| format!("t{i}")).collect();
        atoms.extend((0..=n).map(|d| d.to_string()));
        atoms.extend([FORALL, ROW_OPEN, ROW_CLOSE, CELL_OPEN, CELL_CLOSE].map(String::from));
        let alphabet = Alphabet::plain(atoms.iter().map(String::as_str));
        SigmaI { n, tiles, alphabet }
    }

    pub fn of(inst: &CorridorInstance) -> SigmaI {
        SigmaI::new(inst.n, inst.tiles.len())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn num_tiles(&self) -> usize {
        self.tiles
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn tile(&self, i: usize) -> Symbol {
        Symbol::plain(format!("t{i}").as_str())
    }

    pub fn digit(&self, d: u32) -> Symbol {
        Symbol::plain(d.to_string().as_str())
    }

    pub fn mark(&self) -> Symbol {
        Symbol::plain(FORALL)
    }

    pub fn row_open(&self) -> Symbol {
        Symbol::plain(ROW_OPEN)
    }

    pub fn row_close(&self) -> Symbol {
        Symbol::plain(ROW_CLOSE)
    }

    pub fn cell_open(&self) -> Symbol {
        Symbol::plain(CELL_OPEN)
    }

    pub fn cell_close(&self) -> Symbol {
        Symbol::plain(CELL_CLOSE)
    }

    pub fn digits(&self) -> Vec<Symbol> {
        (0..=self.n).map(|d| self.digit(d)).collect()
    }

    pub fn tile_symbols(&self) -> Vec<Symbol> {
        (0..self.tiles).map(|i| self.tile(i)).collect()
    }

    pub fn digit_of(&self, s: &Symbol) -> Option<u32> {
        let v = s.atom(0).numeral()?;
        (v <= u64::from(self.n)).then_some(v as u32)
    }

    pub fn tile_of(&self, s: &Symbol) -> Option<usize> {
        let i: usize = s.atom(0).as_str().strip_prefix('t')?.parse().ok()?;
        (i < self.tiles).then_some(i)
    }

    /// `Sigma_I x N_n`.
    pub fn annotated(&self) -> Alphabet {
        let digits: Vec<Atom> = (0..=self.n).map(|d| Atom::new(&d.to_string())).collect();
        Alphabet::product(&[self.alphabet.base_atoms(), digits])
    }

    pub fn annotate(&self, x: &Symbol, d: u32) -> Symbol {
        x.concat(&self.digit(d))
    }

    fn class(&self, f: impl Fn(u32) -> bool) -> Regex {
        Regex::class((0..=self.n).filter(|&d| f(d)).map(|d| self.digit(d)))
    }

    /// `N_n`.
    pub fn n_all(&self) -> Regex {
        self.class(|_| true)
    }

    /// `N_n^{>i}`.
    pub fn n_gt(&self, i: u32) -> Regex {
        self.class(|d| d > i)
    }

    /// `N_n^{<i}`.
    pub fn n_lt(&self, i: u32) -> Regex {
        self.class(|d| d < i)
    }

    fn any(&self) -> Regex {
        Regex::class(self.alphabet.iter().cloned())
    }

    fn any_tile(&self) -> Regex {
        Regex::class(self.tile_symbols())
    }
}

/// `COMB_n` as a list of digit values.
pub fn comb(n: u32) -> Vec<u32> {
    assert!(n >= 1, "comb needs n >= 1");
    let mut inner = vec![0];
    for i in 1..n {
        let mut next = inner.clone();
        next.push(i);
        next.extend_from_slice(&inner);
        inner = next;
    }
    let mut out = Vec::with_capacity(inner.len() + 2);
    out.push(n);
    out.extend(inner);
    out.push(n);
    out
}

/// `COMB_n` as a word of digit symbols.
pub fn comb_word(n: u32) -> Word {
    comb(n)
        .into_iter()
        .map(|d| Symbol::plain(d.to_string().as_str()))
        .collect()
}

/// The digits `0..=n` as a plain alphabet.
pub fn digit_alphabet(n: u32) -> Alphabet {
    let atoms: Vec<String> = (0..=n).map(|d| d.to_string()).collect();
    Alphabet::plain(atoms.iter().map(String::as_str))
}

/// `E_0, ..., E_n`, whose intersection is `{COMB_n}`.
pub fn comb_regexes(n: u32) -> Vec<Regex> {
    assert!(n >= 1, "comb needs n >= 1");
    let s = SigmaI::new(n, 0);
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Regex::seq([
        s.n_gt(0),
        Regex::seq([Regex::lit(s.digit(0)), s.n_gt(0)]).star(),
    ]));
    for i in 1..n {
        let lt = s.n_lt(i).star();
        let block = Regex::seq([lt.clone(), Regex::lit(s.digit(i)), lt, s.n_gt(i)]);
        out.push(Regex::seq([s.n_gt(i), block.star()]));
    }
    out.push(Regex::seq([
        Regex::lit(s.digit(n)),
        s.n_lt(n).star(),
        Regex::lit(s.digit(n)),
    ]));
    out
}

/// `A [ <cells> ] [ <cells> ] ...` with each cell
/// `< COMB[1,j] t_ij COMB[j+1, 2^n+1] A >`.
pub fn encode_tiling(inst: &CorridorInstance, t: &Tiling) -> Result<Word, TilingError> {
    let w = inst.width();
    if t.width() != w {
        return Err(TilingError::WidthMismatch {
            expected: w,
            found: t.width(),
        });
    }
    let s = SigmaI::of(inst);
    let c = comb_word(inst.n);
    let mut out = vec![s.mark()];
    for row in t.rows() {
        out.push(s.row_open());
        for (j, &tile) in row.iter().enumerate() {
            out.push(s.cell_open());
            out.extend_from_slice(&c[..=j]);
            out.push(s.tile(tile));
            out.extend_from_slice(&c[j + 1..]);
            out.push(s.mark());
            out.push(s.cell_close());
        }
        out.push(s.row_close());
    }
    Ok(out)
}

/// Base-alphabet pieces shared by the condition expressions.
struct Pieces {
    lt: Regex,
    gt: Regex,
    a: Regex,
    ro: Regex,
    rc: Regex,
    nstar: Regex,
    tile: Regex,
}

impl Pieces {
    fn new(s: &SigmaI) -> Pieces {
        Pieces {
            lt: Regex::lit(s.cell_open()),
            gt: Regex::lit(s.cell_close()),
            a: Regex::lit(s.mark()),
            ro: Regex::lit(s.row_open()),
            rc: Regex::lit(s.row_close()),
            nstar: s.n_all().star(),
            tile: s.any_tile(),
        }
    }

    /// `< N* t N* A >` for the given tile class.
    fn cell(&self, t: Regex) -> Regex {
        Regex::seq([
            self.lt.clone(),
            self.nstar.clone(),
            t,
            self.nstar.clone(),
            self.a.clone(),
            self.gt.clone(),
        ])
    }

    fn cells(&self) -> Regex {
        self.cell(self.tile.clone()).star()
    }
}

/// Condition 1: every row is `[ < n T N* A > (< N* T N* A >)* < N* T n A > ]`.
pub fn cond1_regex(s: &SigmaI) -> Regex {
    let p = Pieces::new(s);
    let n = Regex::lit(s.digit(s.n));
    let first = Regex::seq([
        p.lt.clone(),
        n.clone(),
        p.tile.clone(),
        p.nstar.clone(),
        p.a.clone(),
        p.gt.clone(),
    ]);
    let last = Regex::seq([
        p.lt.clone(),
        p.nstar.clone(),
        p.tile.clone(),
        n,
        p.a.clone(),
        p.gt.clone(),
    ]);
    Regex::seq([p.ro.clone(), first, p.cells(), last, p.rc.clone()]).star()
}

/// Condition 2: the first row starts with the top-left tile and the last
/// row ends with the bottom-right tile.
pub fn cond2_regex(s: &SigmaI, inst: &CorridorInstance) -> Regex {
    let p = Pieces::new(s);
    let tl = p.cell(Regex::lit(s.tile(inst.top_left)));
    let br = p.cell(Regex::lit(s.tile(inst.bottom_right)));
    let first = Regex::seq([p.ro.clone(), tl.clone(), p.cells(), p.rc.clone()]);
    let last = Regex::seq([p.ro.clone(), p.cells(), br.clone(), p.rc.clone()]);
    let single = Regex::seq([p.ro.clone(), tl, p.cells(), br, p.rc.clone()]);
    Regex::alt([Regex::seq([first, s.any().star(), last]), single])
}

/// Condition 3: horizontal colour matching. States are colours, all
/// initial and final; a tile moves from its left to its right colour, row
/// brackets jump anywhere, other letters loop.
pub fn cond3_nfa(s: &SigmaI, inst: &CorridorInstance) -> Nfa {
    let colours = inst.colours();
    let idx = |c: u32| colours.binary_search(&c).expect("colour") as StateId;
    let q = colours.len().max(1);
    let alpha = s.alphabet();
    let mut b = NfaBuilder::with_states(alpha.clone(), q);
    for p in 0..q as StateId {
        b.set_initial(p);
        b.set_final(p, true);
    }
    for (ai, sym) in alpha.iter().enumerate() {
        let a = ai as u32;
        if let Some(t) = s.tile_of(sym) {
            let tile = inst.tiles[t];
            b.add_transition(idx(tile.left), a, idx(tile.right));
        } else if *sym == s.row_open() || *sym == s.row_close() {
            for p in 0..q as StateId {
                for r in 0..q as StateId {
                    b.add_transition(p, a, r);
                }
            }
        } else {
            for p in 0..q as StateId {
                b.add_transition(p, a, p);
            }
        }
    }
    b.build()
}

/// Condition 4: `< N* T N* A > Sigma*` keeping the digits and the mark.
pub fn cond4_filter(s: &SigmaI) -> Regex {
    let p = Pieces::new(s);
    Regex::seq([
        bot(&p.lt),
        top(&p.nstar),
        bot(&p.tile),
        top(&p.nstar),
        top(&p.a),
        bot(&p.gt),
        bot(&s.any().star()),
    ])
}

/// Condition 5: keeps the prefix of the first cell and the first suffix
/// digit of it and every following cell in the row, then the mark of the
/// row's last cell.
pub fn cond5_filter(s: &SigmaI) -> Regex {
    let p = Pieces::new(s);
    let n = s.n_all();
    let head = Regex::seq([
        bot(&p.lt),
        top(&p.nstar),
        bot(&p.tile),
        top(&n),
        bot(&p.nstar),
    ]);
    let mid = Regex::seq([
        bot(&Regex::seq([p.lt.clone(), p.nstar.clone(), p.tile.clone()])),
        top(&n),
        bot(&p.nstar),
        bot(&p.a),
        bot(&p.gt),
    ]);
    let last = Regex::seq([
        bot(&Regex::seq([p.lt.clone(), p.nstar.clone(), p.tile.clone()])),
        top(&n),
        bot(&p.nstar),
        top(&p.a),
        bot(&p.gt),
        bot(&p.rc),
    ]);
    let alone = Regex::seq([top(&p.a), bot(&p.gt), bot(&p.rc)]);
    let more = Regex::seq([bot(&p.a), bot(&p.gt), mid.star(), last]);
    Regex::seq([head, Regex::alt([alone, more]), bot(&s.any().star())])
}

/// Condition 6: keeps the prefix of the first cell and the suffix and mark
/// of a cell in the next row whose tile fits below it.
pub fn cond6_filter(s: &SigmaI, inst: &CorridorInstance) -> Regex {
    let p = Pieces::new(s);
    let cells = bot(&p.cells());
    let alts = (0..inst.tiles.len()).map(|t| {
        let below = Regex::class(inst.below(t).into_iter().map(|x| s.tile(x)));
        Regex::seq([
            bot(&p.lt),
            top(&p.nstar),
            bot(&Regex::seq([
                Regex::lit(s.tile(t)),
                p.nstar.clone(),
                p.a.clone(),
                p.gt.clone(),
            ])),
            cells.clone(),
            bot(&Regex::seq([p.rc.clone(), p.ro.clone()])),
            cells.clone(),
            bot(&Regex::seq([p.lt.clone(), p.nstar.clone(), below])),
            top(&p.nstar),
            top(&p.a),
            bot(&p.gt),
            cells.clone(),
            bot(&p.rc),
        ])
    });
    Regex::seq([Regex::alt(alts.collect::<Vec<_>>()), bot(&s.any().star())])
}

/// `COMB_n A`.
pub fn comb_mark(s: &SigmaI) -> Word {
    let mut w = comb_word(s.n);
    w.push(s.mark());
    w
}

/// Compiled checkers for the six conditions of one instance.
pub struct Checker {
    sigma: SigmaI,
    structural: [Nfa; 3],
    filters: [Nfa; 3],
    target: Vec<u32>,
}

impl Checker {
    pub fn new(inst: &CorridorInstance) -> Result<Checker, TilingError> {
        let s = SigmaI::of(inst);
        let alpha = s.alphabet().clone();
        let structural = [
            regex_to_nfa(&cond1_regex(&s), &alpha)?,
            regex_to_nfa(&cond2_regex(&s, inst), &alpha)?,
            cond3_nfa(&s, inst),
        ];
        let filters = [
            filter_nfa(&cond4_filter(&s), &alpha)?,
            filter_nfa(&cond5_filter(&s), &alpha)?,
            filter_nfa(&cond6_filter(&s, inst), &alpha)?,
        ];
        let target = alpha.encode(&comb_mark(&s))?;
        Ok(Checker {
            sigma: s,
            structural,
            filters,
            target,
        })
    }

    pub fn sigma(&self) -> &SigmaI {
        &self.sigma
    }

    /// Skips one leading mark: the conditions speak about what follows it.
    fn body<'w>(&self, w: &'w [Symbol]) -> &'w [Symbol] {
        match w.first() {
            Some(x) if *x == self.sigma.mark() => &w[1..],
            _ => w,
        }
    }

    /// Membership of the word after its leading mark in condition `i`.
    /// Letters outside `Sigma_I` fail every condition.
    pub fn check(&self, i: usize, w: &[Symbol]) -> Result<bool, TilingError> {
        if !(1..=6).contains(&i) {
            return Err(TilingError::BadCondition(i));
        }
        let body = self.body(w);
        let alpha = self.sigma.alphabet();
        let Ok(idx) = alpha.encode(body) else {
            return Ok(false);
        };
        if i <= 3 {
            return Ok(self.structural[i - 1].accepts_indices(&idx));
        }
        let f = &self.filters[i - 4];
        let fa = f.alphabet();
        let letters: Vec<(u32, u32, u32)> = body
            .iter()
            .zip(&idx)
            .map(|(x, &b)| {
                let t = fa.index_of(&mark(x, Mark::Top)).expect("marked");
                let o = fa.index_of(&mark(x, Mark::Bot)).expect("marked");
                (b, t, o)
            })
            .collect();
        let open = alpha.index_of(&self.sigma.cell_open()).expect("bracket");
        let ro = alpha.index_of(&self.sigma.row_open()).expect("bracket");
        let mut has_row_open = vec![false; idx.len() + 1];
        for k in (0..idx.len()).rev() {
            has_row_open[k] = has_row_open[k + 1] || idx[k] == ro;
        }
        for k in 1..idx.len() {
            if idx[k] != open || (i == 6 && !has_row_open[k]) {
                continue;
            }
            if !filter_contains_indexed(f, &letters[k..], &self.target) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `w` starts with the mark and satisfies all six conditions.
    pub fn in_li(&self, w: &[Symbol]) -> Result<bool, TilingError> {
        if w.first() != Some(&self.sigma.mark()) {
            return Ok(false);
        }
        for i in 1..=6 {
            if !self.check(i, w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One-shot [`Checker::check`].
pub fn cond_check(i: usize, inst: &CorridorInstance, w: &[Symbol]) -> Result<bool, TilingError> {
    Checker::new(inst)?.check(i, w)
}

/// One-shot [`Checker::in_li`].
pub fn in_li(inst: &CorridorInstance, w: &[Symbol]) -> Result<bool, TilingError> {
    Checker::new(inst)?.in_li(w)
}
