//! Text formats: automata, alphabets, symbol maps, tiling instances,
//! tilings, words and regular expressions.
//!
//! Automaton files are line oriented:
//!
//! ```text
//! arity 2
//! alphabet # a b
//! alphabet # a b
//! state 0
//! state 1
//! initial 0
//! final 1
//! trans 0 a|# 1
//! ```
//!
//! One `alphabet` line per component gives the product of the listed
//! atoms. An alphabet that is not a full product is written as `symbol`
//! lines instead. Blank lines and lines starting with `%` are ignored.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use autrel::nfa::Nfa;
use autrel::regex::Regex;
use autrel::symbol::{Alphabet, Atom, Symbol, Word};
use autrel::tiling::{CorridorInstance, Tile, Tiling};

use crate::error::CliError;

/// Largest width exponent accepted in tiling files.
pub const MAX_N: u32 = 16;

fn parse_err(line: usize, reason: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        reason: reason.into(),
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
}

fn parse_symbol(line: usize, text: &str) -> Result<Symbol, CliError> {
    if text.split('|').any(str::is_empty) {
        return Err(parse_err(line, format!("empty atom in symbol {text}")));
    }
    Ok(Symbol::parse(text))
}

fn parse_num<T: std::str::FromStr>(line: usize, text: &str, what: &str) -> Result<T, CliError> {
    text.parse()
        .map_err(|_| parse_err(line, format!("bad {what} {text}")))
}

#[derive(Default)]
struct AlphabetLines {
    arity: Option<(usize, usize)>,
    components: Vec<Vec<Atom>>,
    symbols: Vec<(usize, Symbol)>,
}

impl AlphabetLines {
    /// Consumes `arity`, `alphabet` and `symbol` lines; false for others.
    fn take(&mut self, line: usize, words: &[&str]) -> Result<bool, CliError> {
        match words[0] {
            "arity" => {
                if words.len() != 2 {
                    return Err(parse_err(line, "expected arity <k>"));
                }
                if self.arity.is_some() {
                    return Err(parse_err(line, "duplicate arity"));
                }
                let k: usize = parse_num(line, words[1], "arity")?;
                if k == 0 {
                    return Err(parse_err(line, "arity must be positive"));
                }
                self.arity = Some((line, k));
            }
            "alphabet" => {
                let mut atoms = Vec::new();
                for w in &words[1..] {
                    if w.contains('|') {
                        return Err(parse_err(line, format!("atom {w} contains |")));
                    }
                    atoms.push(Atom::new(w));
                }
                atoms.sort();
                atoms.dedup();
                if atoms.is_empty() {
                    return Err(parse_err(line, "empty alphabet component"));
                }
                self.components.push(atoms);
            }
            "symbol" => {
                if words.len() != 2 {
                    return Err(parse_err(line, "expected symbol <sym>"));
                }
                self.symbols.push((line, parse_symbol(line, words[1])?));
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn finish(self) -> Result<Alphabet, CliError> {
        let (aline, k) = self
            .arity
            .ok_or_else(|| parse_err(0, "missing arity line"))?;
        if !self.components.is_empty() && !self.symbols.is_empty() {
            return Err(parse_err(
                self.symbols[0].0,
                "both alphabet and symbol lines",
            ));
        }
        if !self.symbols.is_empty() {
            for (line, s) in &self.symbols {
                if s.arity() != k {
                    return Err(parse_err(
                        *line,
                        format!("symbol {s} has arity {}, expected {k}", s.arity()),
                    ));
                }
            }
            return Alphabet::new(self.symbols.into_iter().map(|(_, s)| s))
                .map_err(|e| parse_err(aline, e.to_string()));
        }
        if self.components.len() != k {
            return Err(parse_err(
                aline,
                format!("{} alphabet lines for arity {k}", self.components.len()),
            ));
        }
        Ok(Alphabet::product(&self.components))
    }
}

fn write_alphabet(out: &mut String, a: &Alphabet) {
    let k = a.arity().max(1);
    writeln!(out, "arity {k}").unwrap();
    if a.is_product() {
        for comp in a.component_atoms() {
            let atoms: Vec<&str> = comp.iter().map(Atom::as_str).collect();
            writeln!(out, "alphabet {}", atoms.join(" ")).unwrap();
        }
    } else {
        for s in a.iter() {
            writeln!(out, "symbol {s}").unwrap();
        }
    }
}

/// Reads an alphabet given by `arity` plus `alphabet` or `symbol` lines.
pub fn parse_alphabet(text: &str) -> Result<Alphabet, CliError> {
    let mut al = AlphabetLines::default();
    for (line, words) in lines(text) {
        if !al.take(line, &words)? {
            return Err(parse_err(line, format!("unexpected {}", words[0])));
        }
    }
    al.finish()
}

pub fn serialize_alphabet(a: &Alphabet) -> String {
    let mut out = String::new();
    write_alphabet(&mut out, a);
    out
}

pub fn parse_nfa(text: &str) -> Result<Nfa, CliError> {
    let mut al = AlphabetLines::default();
    let mut states: BTreeMap<u64, usize> = BTreeMap::new();
    let mut initial = Vec::new();
    let mut finals = Vec::new();
    let mut trans = Vec::new();
    for (line, words) in lines(text) {
        if al.take(line, &words)? {
            continue;
        }
        match (words[0], words.len()) {
            ("state", 2) => {
                let id: u64 = parse_num(line, words[1], "state id")?;
                if states.insert(id, line).is_some() {
                    return Err(parse_err(line, format!("duplicate state {id}")));
                }
            }
            ("initial", 2) => initial.push((line, parse_num::<u64>(line, words[1], "state id")?)),
            ("final", 2) => finals.push((line, parse_num::<u64>(line, words[1], "state id")?)),
            ("trans", 4) => {
                let p: u64 = parse_num(line, words[1], "state id")?;
                let q: u64 = parse_num(line, words[3], "state id")?;
                trans.push((line, p, parse_symbol(line, words[2])?, q));
            }
            (w, _) => return Err(parse_err(line, format!("malformed {w} line"))),
        }
    }
    let alphabet = al.finish()?;
    let dense: BTreeMap<u64, u32> = states
        .keys()
        .enumerate()
        .map(|(i, &id)| (id, i as u32))
        .collect();
    let state = |line: usize, id: u64| {
        dense
            .get(&id)
            .copied()
            .ok_or_else(|| parse_err(line, format!("unknown state {id}")))
    };
    let mut edges = Vec::new();
    for (line, p, s, q) in trans {
        let a = alphabet
            .index_of(&s)
            .ok_or_else(|| parse_err(line, format!("symbol {s} is not in the alphabet")))?;
        edges.push((state(line, p)?, a, state(line, q)?));
    }
    let init = initial
        .into_iter()
        .map(|(l, q)| state(l, q))
        .collect::<Result<Vec<_>, _>>()?;
    let fin = finals
        .into_iter()
        .map(|(l, q)| state(l, q))
        .collect::<Result<Vec<_>, _>>()?;
    Nfa::from_parts(alphabet, dense.len(), edges, init, fin)
        .map_err(|e| parse_err(0, e.to_string()))
}

/// Canonical text: states `0..n`, then sorted initial, final and
/// transition lines, symbols in alphabet order.
pub fn serialize_nfa(a: &Nfa) -> String {
    let mut out = String::new();
    write_alphabet(&mut out, a.alphabet());
    for q in 0..a.num_states() {
        writeln!(out, "state {q}").unwrap();
    }
    let init: BTreeSet<u32> = a.initial().iter().copied().collect();
    for q in init {
        writeln!(out, "initial {q}").unwrap();
    }
    for q in a.finals().collect::<BTreeSet<_>>() {
        writeln!(out, "final {q}").unwrap();
    }
    let mut t: Vec<(u32, u32, u32)> = a.transitions().collect();
    t.sort_unstable();
    t.dedup();
    for (p, s, q) in t {
        writeln!(out, "trans {p} {} {q}", a.alphabet().symbol(s)).unwrap();
    }
    out
}

/// `map <from> <to>` lines.
pub fn parse_map(text: &str) -> Result<BTreeMap<Symbol, Symbol>, CliError> {
    let mut out = BTreeMap::new();
    for (line, words) in lines(text) {
        if words.len() != 3 || words[0] != "map" {
            return Err(parse_err(line, "expected map <from> <to>"));
        }
        let from = parse_symbol(line, words[1])?;
        if out
            .insert(from.clone(), parse_symbol(line, words[2])?)
            .is_some()
        {
            return Err(parse_err(line, format!("duplicate image for {from}")));
        }
    }
    Ok(out)
}

/// Space-separated letters, tuple letters as `|`-joined atoms.
pub fn parse_word(text: &str) -> Result<Word, CliError> {
    text.split_whitespace()
        .map(|s| parse_symbol(1, s))
        .collect()
}

pub fn parse_instance(text: &str) -> Result<CorridorInstance, CliError> {
    let mut tiles: BTreeMap<usize, (usize, Tile)> = BTreeMap::new();
    let (mut tl, mut br, mut n) = (None, None, None);
    for (line, words) in lines(text) {
        match (words[0], words.len()) {
            ("tile", 6) => {
                let id: usize = parse_num(line, words[1], "tile id")?;
                let c: Vec<u32> = words[2..]
                    .iter()
                    .map(|w| parse_num(line, w, "colour"))
                    .collect::<Result<_, _>>()?;
                if tiles
                    .insert(id, (line, Tile::new(c[0], c[1], c[2], c[3])))
                    .is_some()
                {
                    return Err(parse_err(line, format!("duplicate tile {id}")));
                }
            }
            ("topleft", 2) => tl = Some((line, parse_num::<usize>(line, words[1], "tile id")?)),
            ("bottomright", 2) => br = Some((line, parse_num::<usize>(line, words[1], "tile id")?)),
            ("n", 2) => {
                let v: u32 = parse_num(line, words[1], "n")?;
                if v == 0 || v > MAX_N {
                    return Err(parse_err(line, format!("n must be in 1..={MAX_N}")));
                }
                n = Some(v);
            }
            (w, _) => return Err(parse_err(line, format!("malformed {w} line"))),
        }
    }
    for (i, (&id, &(line, _))) in tiles.iter().enumerate() {
        if id != i {
            return Err(parse_err(
                line,
                format!("tile ids must be 0..{}", tiles.len()),
            ));
        }
    }
    let corner = |c: Option<(usize, usize)>, what: &str| -> Result<usize, CliError> {
        let (line, id) = c.ok_or_else(|| parse_err(0, format!("missing {what} line")))?;
        if !tiles.contains_key(&id) {
            return Err(parse_err(line, format!("{what} {id} is not a tile")));
        }
        Ok(id)
    };
    let tl = corner(tl, "topleft")?;
    let br = corner(br, "bottomright")?;
    let n = n.ok_or_else(|| parse_err(0, "missing n line"))?;
    CorridorInstance::new(tiles.into_values().map(|(_, t)| t).collect(), tl, br, n)
        .map_err(|e| parse_err(0, e.to_string()))
}

pub fn serialize_instance(inst: &CorridorInstance) -> String {
    let mut out = String::new();
    for (i, t) in inst.tiles.iter().enumerate() {
        writeln!(
            out,
            "tile {i} {} {} {} {}",
            t.top, t.right, t.bottom, t.left
        )
        .unwrap();
    }
    writeln!(out, "topleft {}", inst.top_left).unwrap();
    writeln!(out, "bottomright {}", inst.bottom_right).unwrap();
    writeln!(out, "n {}", inst.n).unwrap();
    out
}

/// One row of tile ids per line, top row first.
pub fn parse_tiling(text: &str) -> Result<Tiling, CliError> {
    let mut rows = Vec::new();
    for (line, words) in lines(text) {
        rows.push(
            words
                .iter()
                .map(|w| parse_num(line, w, "tile id"))
                .collect::<Result<Vec<usize>, _>>()?,
        );
    }
    if rows.is_empty() {
        return Err(parse_err(0, "empty tiling"));
    }
    Tiling::new(rows).map_err(|e| parse_err(0, e.to_string()))
}

/// Regular expressions: `+` is union, juxtaposition concatenation, postfix
/// `*` star and `^k` power, `.` any letter, `@e` the empty word, `@0` the
/// empty language. Letters are maximal runs of other characters, with `|`
/// joining the atoms of tuple letters.
pub fn parse_regex(text: &str, sigma: &Alphabet) -> Result<Regex, CliError> {
    let mut p = RegexParser {
        toks: tokenize(text)?,
        pos: 0,
        sigma,
    };
    let e = p.alt()?;
    if p.pos != p.toks.len() {
        return Err(parse_err(1, format!("unexpected {}", p.toks[p.pos].show())));
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Plus,
    Star,
    Pow(u32),
    Any,
    Eps,
    Nothing,
    Sym(String),
}

impl Tok {
    fn show(&self) -> String {
        match self {
            Tok::Open => "(".into(),
            Tok::Close => ")".into(),
            Tok::Plus => "+".into(),
            Tok::Star => "*".into(),
            Tok::Pow(k) => format!("^{k}"),
            Tok::Any => ".".into(),
            Tok::Eps => "@e".into(),
            Tok::Nothing => "@0".into(),
            Tok::Sym(s) => s.clone(),
        }
    }
}

const SPECIAL: &str = "()+*^.@";

fn tokenize(text: &str) -> Result<Vec<Tok>, CliError> {
    let cs: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        i += 1;
        match c {
            c if c.is_whitespace() => {}
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            '+' => out.push(Tok::Plus),
            '*' => out.push(Tok::Star),
            '.' => out.push(Tok::Any),
            '^' => {
                let start = i;
                while i < cs.len() && cs[i].is_ascii_digit() {
                    i += 1;
                }
                let k: String = cs[start..i].iter().collect();
                out.push(Tok::Pow(parse_num(1, &k, "exponent")?));
            }
            '@' => match cs.get(i) {
                Some('e') => {
                    i += 1;
                    out.push(Tok::Eps);
                }
                Some('0') => {
                    i += 1;
                    out.push(Tok::Nothing);
                }
                _ => return Err(parse_err(1, "expected @e or @0")),
            },
            _ => {
                let start = i - 1;
                while i < cs.len() && !cs[i].is_whitespace() && !SPECIAL.contains(cs[i]) {
                    i += 1;
                }
                out.push(Tok::Sym(cs[start..i].iter().collect()));
            }
        }
    }
    Ok(out)
}

struct RegexParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    sigma: &'a Alphabet,
}

impl RegexParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn alt(&mut self) -> Result<Regex, CliError> {
        let mut parts = vec![self.seq()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            parts.push(self.seq()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Regex::alt(parts)
        })
    }

    fn seq(&mut self) -> Result<Regex, CliError> {
        let mut parts = Vec::new();
        while matches!(
            self.peek(),
            Some(Tok::Open | Tok::Any | Tok::Eps | Tok::Nothing | Tok::Sym(_))
        ) {
            parts.push(self.postfix()?);
        }
        if parts.is_empty() {
            let found = self.peek().map_or("end of input".to_string(), Tok::show);
            return Err(parse_err(
                1,
                format!("expected an expression before {found}"),
            ));
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Regex::seq(parts)
        })
    }

    fn postfix(&mut self) -> Result<Regex, CliError> {
        let mut e = self.primary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => e = e.star(),
                Some(&Tok::Pow(k)) => e = e.power(k),
                _ => return Ok(e),
            }
            self.pos += 1;
        }
    }

    fn primary(&mut self) -> Result<Regex, CliError> {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        match t {
            Tok::Open => {
                let e = self.alt()?;
                if self.peek() != Some(&Tok::Close) {
                    return Err(parse_err(1, "missing )"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Any => Ok(Regex::class(self.sigma.iter().cloned())),
            Tok::Eps => Ok(Regex::epsilon()),
            Tok::Nothing => Ok(Regex::Empty),
            Tok::Sym(s) => {
                let sym = parse_symbol(1, &s)?;
                if !self.sigma.contains(&sym) {
                    return Err(parse_err(1, format!("symbol {sym} is not in the alphabet")));
                }
                Ok(Regex::lit(sym))
            }
            other => Err(parse_err(1, format!("unexpected {}", other.show()))),
        }
    }
}
