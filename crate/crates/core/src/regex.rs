//! Regular expression syntax trees over (possibly tuple) symbols.

use std::fmt;

use crate::symbol::Symbol;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Empty,
    Lit(Symbol),
    Class(Vec<Symbol>),
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
    Power(Box<Regex>, u32),
}

impl Regex {
    pub fn lit(s: Symbol) -> Regex {
        Regex::Lit(s)
    }

    pub fn class<I: IntoIterator<Item = Symbol>>(symbols: I) -> Regex {
        let mut v: Vec<Symbol> = symbols.into_iter().collect();
        v.sort();
        v.dedup();
        if v.is_empty() {
            Regex::Empty
        } else {
            Regex::Class(v)
        }
    }

    pub fn epsilon() -> Regex {
        Regex::Concat(Vec::new())
    }

    pub fn seq<I: IntoIterator<Item = Regex>>(parts: I) -> Regex {
        Regex::Concat(parts.into_iter().collect())
    }

    pub fn alt<I: IntoIterator<Item = Regex>>(parts: I) -> Regex {
        Regex::Union(parts.into_iter().collect())
    }

    pub fn star(self) -> Regex {
        Regex::Star(Box::new(self))
    }

    /// `e e*`
    pub fn plus(self) -> Regex {
        Regex::seq([self.clone(), self.star()])
    }

    pub fn power(self, k: u32) -> Regex {
        Regex::Power(Box::new(self), k)
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            Regex::Empty | Regex::Lit(_) | Regex::Class(_) => 0,
            Regex::Concat(v) | Regex::Union(v) => v.iter().map(Regex::size).sum(),
            Regex::Star(e) | Regex::Power(e, _) => e.size(),
        }
    }

    /// Every symbol mentioned in the expression.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_symbols(&self, out: &mut Vec<Symbol>) {
        match self {
            Regex::Empty => {}
            Regex::Lit(s) => out.push(s.clone()),
            Regex::Class(v) => out.extend(v.iter().cloned()),
            Regex::Concat(v) | Regex::Union(v) => v.iter().for_each(|e| e.collect_symbols(out)),
            Regex::Star(e) | Regex::Power(e, _) => e.collect_symbols(out),
        }
    }

    /// Rewrites every literal through `f`.
    pub fn map_symbols(&self, f: &impl Fn(&Symbol) -> Symbol) -> Regex {
        match self {
            Regex::Empty => Regex::Empty,
            Regex::Lit(s) => Regex::Lit(f(s)),
            Regex::Class(v) => Regex::class(v.iter().map(f)),
            Regex::Concat(v) => Regex::Concat(v.iter().map(|e| e.map_symbols(f)).collect()),
            Regex::Union(v) => Regex::Union(v.iter().map(|e| e.map_symbols(f)).collect()),
            Regex::Star(e) => Regex::Star(Box::new(e.map_symbols(f))),
            Regex::Power(e, k) => Regex::Power(Box::new(e.map_symbols(f)), *k),
        }
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::Empty => f.write_str("%empty"),
            Regex::Lit(s) => write!(f, "{}", s),
            Regex::Class(v) => {
                f.write_str("{")?;
                for (i, s) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{}", s)?;
                }
                f.write_str("}")
            }
            Regex::Concat(v) if v.is_empty() => f.write_str("%eps"),
            Regex::Concat(v) => {
                f.write_str("(")?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{}", e)?;
                }
                f.write_str(")")
            }
            Regex::Union(v) if v.is_empty() => f.write_str("%empty"),
            Regex::Union(v) => {
                f.write_str("(")?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{}", e)?;
                }
                f.write_str(")")
            }
            Regex::Star(e) => write!(f, "{}*", e),
            Regex::Power(e, k) => write!(f, "{}^{}", e, k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_counts_nodes() {
        let a = Regex::lit(Symbol::plain("a"));
        let e = Regex::seq([a.clone(), a.clone().star()]);
        assert_eq!(e.size(), 4);
        assert_eq!(Regex::Empty.size(), 1);
    }

    #[test]
    fn empty_class_is_empty() {
        assert_eq!(Regex::class(Vec::new()), Regex::Empty);
    }
}
