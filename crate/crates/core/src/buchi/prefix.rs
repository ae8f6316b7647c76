//! Quantifier-prefix patterns of prenex forms.

use super::ast::Formula;

const EX: char = '∃';
const ALL: char = '∀';

/// Shortest prenex patterns starting with `∃` and with `∀`, as block
/// counts. A pattern starting with one quantifier embeds into one starting
/// with the other after one more (empty) block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Lens {
    ex: usize,
    all: usize,
}

impl Lens {
    fn flat() -> Lens {
        Lens { ex: 0, all: 0 }
    }

    fn of_pattern(p: &str) -> Lens {
        let len = collapse(p).chars().count();
        match p.chars().next() {
            None => Lens::flat(),
            Some(EX) => Lens {
                ex: len,
                all: len + 1,
            },
            Some(_) => Lens {
                ex: len + 1,
                all: len,
            },
        }
    }

    fn neg(self) -> Lens {
        Lens {
            ex: self.all,
            all: self.ex,
        }
    }

    fn join(self, o: Lens) -> Lens {
        Lens {
            ex: self.ex.max(o.ex),
            all: self.all.max(o.all),
        }
    }
}

fn lens(f: &Formula) -> Lens {
    match f {
        Formula::Eq(..) | Formula::Lt(..) | Formula::Gt(..) | Formula::Vp(..) | Formula::Pp(..) => {
            Lens::flat()
        }
        Formula::Not(g) => lens(g).neg(),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().map(lens).fold(Lens::flat(), Lens::join),
        Formula::Implies(a, b) => lens(a).neg().join(lens(b)),
        Formula::Exists(_, g) => {
            let ex = lens(g).ex.max(1);
            Lens { ex, all: ex + 1 }
        }
        Formula::Forall(_, g) => {
            let all = lens(g).all.max(1);
            Lens { ex: all + 1, all }
        }
        Formula::Opaque(o) => Lens::of_pattern(&o.shape),
    }
}

fn alternating(start: char, len: usize) -> String {
    let other = if start == EX { ALL } else { EX };
    (0..len)
        .map(|i| if i % 2 == 0 { start } else { other })
        .collect()
}

fn collapse(p: &str) -> String {
    let mut out = String::new();
    for c in p.chars() {
        if !out.ends_with(c) {
            out.push(c);
        }
    }
    out
}

/// Block pattern of the prenex form after rewriting `a → b` as `¬a ∨ b`,
/// pushing negations inward and pulling quantifiers out with fresh names.
/// Independent quantifier blocks are interleaved to minimise alternations,
/// and the pattern is anchored at `∃`: the leading block is existential
/// whenever the formula has a quantifier, possibly as the earliest place
/// an inner `∀`-led part could start. A quantifier-free formula yields "".
pub fn prefix_shape(f: &Formula) -> String {
    alternating(EX, lens(f).ex)
}

/// The shortest pattern regardless of the leading quantifier, preferring
/// `∃` on ties.
pub fn shortest_shape(f: &Formula) -> String {
    let l = lens(f);
    if l.all < l.ex {
        alternating(ALL, l.all)
    } else {
        alternating(EX, l.ex)
    }
}
