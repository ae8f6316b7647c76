//! Atoms, tuple symbols, alphabets and words.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::AutomataError;

/// Text of the reserved padding atom.
pub const PAD: &str = "#";

/// An interned token. Atoms order the pad first, then decimal numerals by
/// value, then everything else lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(text: &str) -> Atom {
        Atom(Arc::from(text))
    }

    pub fn pad() -> Atom {
        Atom::new(PAD)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_pad(&self) -> bool {
        &*self.0 == PAD
    }

    /// Numeric value when the atom is a decimal numeral.
    pub fn numeral(&self) -> Option<u64> {
        let s = self.as_str();
        if s.is_empty() || s.len() > 18 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    }

    fn rank(&self) -> (u8, u64) {
        if self.is_pad() {
            (0, 0)
        } else if let Some(v) = self.numeral() {
            (1, v)
        } else {
            (2, 0)
        }
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.as_str().cmp(other.as_str()))
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Atom {
        Atom::new(s)
    }
}

/// A fixed-arity tuple of atoms. Plain symbols have arity one.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<[Atom]>);

impl Symbol {
    pub fn plain(atom: impl Into<Atom>) -> Symbol {
        Symbol(Arc::from(vec![atom.into()]))
    }

    pub fn tuple<I: IntoIterator<Item = Atom>>(atoms: I) -> Symbol {
        let v: Vec<Atom> = atoms.into_iter().collect();
        assert!(!v.is_empty(), "symbols have arity at least one");
        Symbol(Arc::from(v))
    }

    /// Parses `a|b|#` style text.
    pub fn parse(text: &str) -> Symbol {
        Symbol::tuple(text.split('|').map(Atom::new))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.0[i]
    }

    pub fn is_all_pad(&self) -> bool {
        self.0.iter().all(Atom::is_pad)
    }

    pub fn has_pad(&self) -> bool {
        self.0.iter().any(Atom::is_pad)
    }

    /// The first `n` components.
    pub fn prefix(&self, n: usize) -> Symbol {
        Symbol::tuple(self.0[..n].iter().cloned())
    }

    pub fn concat(&self, other: &Symbol) -> Symbol {
        Symbol::tuple(self.0.iter().chain(other.0.iter()).cloned())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            f.write_str(a.as_str())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

pub type Word = Vec<Symbol>;

/// Builds a word of plain symbols from a whitespace-separated atom list.
pub fn word(text: &str) -> Word {
    text.split_whitespace().map(Symbol::parse).collect()
}

/// Builds a word of plain single-character symbols.
pub fn chars(text: &str) -> Word {
    text.chars()
        .map(|c| Symbol::plain(c.to_string().as_str()))
        .collect()
}

/// Renders a word as space-separated letters.
pub fn show_word(w: &[Symbol]) -> String {
    w.iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders a word of plain single-character symbols without separators.
pub fn show_compact(w: &[Symbol]) -> String {
    w.iter().map(|s| s.to_string()).collect()
}

/// A finite, ordered, duplicate-free set of symbols of uniform arity.
#[derive(Clone)]
pub struct Alphabet {
    symbols: Arc<[Symbol]>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = Symbol>>(symbols: I) -> Result<Alphabet, AutomataError> {
        let mut v: Vec<Symbol> = symbols.into_iter().collect();
        v.sort();
        v.dedup();
        if let Some(first) = v.first() {
            let k = first.arity();
            if let Some(bad) = v.iter().find(|s| s.arity() != k) {
                return Err(AutomataError::ArityMismatch(bad.to_string()));
            }
        }
        Ok(Alphabet {
            symbols: Arc::from(v),
        })
    }

    /// Plain alphabet over the given atoms.
    pub fn plain<I, A>(atoms: I) -> Alphabet
    where
        I: IntoIterator<Item = A>,
        A: Into<Atom>,
    {
        Alphabet::new(atoms.into_iter().map(|a| Symbol::plain(a)))
            .expect("plain symbols share arity")
    }

    /// Plain alphabet of single characters.
    pub fn of_chars(text: &str) -> Alphabet {
        Alphabet::plain(text.chars().map(|c| Atom::new(&c.to_string())))
    }

    /// Cartesian product of per-component atom lists.
    pub fn product(components: &[Vec<Atom>]) -> Alphabet {
        let mut out: Vec<Vec<Atom>> = vec![Vec::new()];
        for comp in components {
            let mut next = Vec::with_capacity(out.len() * comp.len());
            for prefix in &out {
                for a in comp {
                    let mut p = prefix.clone();
                    p.push(a.clone());
                    next.push(p);
                }
            }
            out = next;
        }
        if components.is_empty() {
            out.clear();
        }
        Alphabet::new(out.into_iter().map(Symbol::tuple)).expect("uniform arity")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Arity of the symbols, or zero for the empty alphabet.
    pub fn arity(&self) -> usize {
        self.symbols.first().map_or(0, Symbol::arity)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, idx: u32) -> &Symbol {
        &self.symbols[idx as usize]
    }

    pub fn index_of(&self, s: &Symbol) -> Option<u32> {
        self.symbols.binary_search(s).ok().map(|i| i as u32)
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.index_of(s).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter()
    }

    /// Maps a word to symbol indices.
    pub fn encode(&self, w: &[Symbol]) -> Result<Vec<u32>, AutomataError> {
        w.iter()
            .map(|s| {
                self.index_of(s)
                    .ok_or_else(|| AutomataError::UnknownSymbol(s.to_string()))
            })
            .collect()
    }

    pub fn decode(&self, w: &[u32]) -> Word {
        w.iter().map(|&i| self.symbol(i).clone()).collect()
    }

    /// Sorted distinct atoms of every component.
    pub fn component_atoms(&self) -> Vec<Vec<Atom>> {
        let k = self.arity();
        let mut comps: Vec<Vec<Atom>> = vec![Vec::new(); k];
        for s in self.symbols.iter() {
            for (i, a) in s.atoms().iter().enumerate() {
                comps[i].push(a.clone());
            }
        }
        for c in &mut comps {
            c.sort();
            c.dedup();
        }
        comps
    }

    /// True when the alphabet equals the product of its component atom sets.
    pub fn is_product(&self) -> bool {
        let comps = self.component_atoms();
        let total: usize = comps.iter().map(Vec::len).product();
        !self.is_empty() && total == self.len()
    }

    /// Distinct non-pad atoms occurring anywhere in the alphabet.
    pub fn base_atoms(&self) -> Vec<Atom> {
        let mut v: Vec<Atom> = self
            .symbols
            .iter()
            .flat_map(|s| s.atoms().iter().cloned())
            .filter(|a| !a.is_pad())
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.symbols, &other.symbols) || self.symbols[..] == other.symbols[..]
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.symbols.iter()).finish()
    }
}
