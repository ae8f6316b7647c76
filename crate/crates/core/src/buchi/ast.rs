//! Terms and formulas over `<N, 0, 1, +, V_p>`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

pub type Name = Arc<str>;

/// Semantics of an opaque leaf on its evaluated arguments.
pub type OpaqueSem = Arc<dyn Fn(&[BigUint]) -> bool + Send + Sync>;
/// Computes the last argument of an opaque leaf from the others when it is
/// a function of them; `None` means no value satisfies the leaf.
pub type OpaqueSolve = Arc<dyn Fn(&[BigUint]) -> Option<BigUint> + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(Name),
    /// A numeral; `k` abbreviates `1 + ... + 1`.
    Const(BigUint),
    Sum(Vec<Term>),
    /// `c * x` with `c >= 1`, short for `x + ... + x`.
    Scaled(u32, Name),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn num(k: u64) -> Term {
        Term::Const(BigUint::from(k))
    }

    pub fn zero() -> Term {
        Term::num(0)
    }

    pub fn one() -> Term {
        Term::num(1)
    }

    pub fn scaled(c: u32, name: &Name) -> Term {
        assert!(c >= 1, "coefficients are positive");
        if c == 1 {
            Term::Var(name.clone())
        } else {
            Term::Scaled(c, name.clone())
        }
    }

    pub fn sum<I: IntoIterator<Item = Term>>(parts: I) -> Term {
        Term::Sum(parts.into_iter().collect())
    }

    /// `c * t`: scales variables, multiplies numerals, distributes over sums.
    pub fn times(&self, c: u32) -> Term {
        match self {
            Term::Var(v) => Term::scaled(c, v),
            Term::Const(k) => Term::Const(k * c),
            Term::Sum(ts) => Term::Sum(ts.iter().map(|t| t.times(c)).collect()),
            Term::Scaled(d, v) => Term::Scaled(d * c, v.clone()),
        }
    }

    pub fn vars(&self, out: &mut Vec<Name>) {
        match self {
            Term::Var(v) | Term::Scaled(_, v) => out.push(v.clone()),
            Term::Const(_) => {}
            Term::Sum(ts) => ts.iter().for_each(|t| t.vars(out)),
        }
    }

    pub(crate) fn mentions(&self, names: &[Name]) -> bool {
        match self {
            Term::Var(v) | Term::Scaled(_, v) => names.contains(v),
            Term::Const(_) => false,
            Term::Sum(ts) => ts.iter().any(|t| t.mentions(names)),
        }
    }
}

impl From<&Name> for Term {
    fn from(n: &Name) -> Term {
        Term::Var(n.clone())
    }
}

/// An opaque leaf: a named predicate evaluated by a function, carrying the
/// quantifier pattern of the subformula it stands for.
#[derive(Clone)]
pub struct Opaque {
    pub name: String,
    pub args: Vec<Term>,
    pub sem: OpaqueSem,
    pub solve: Option<OpaqueSolve>,
    pub shape: String,
}

impl fmt::Debug for Opaque {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Opaque")
            .field("name", &self.name)
            .field("args", &self.args)
            .finish()
    }
}

#[derive(Clone, Debug)]
pub enum Formula {
    Eq(Term, Term),
    Lt(Term, Term),
    Gt(Term, Term),
    /// `V_p(x, y)`: `x` is the largest power of `p` dividing `y`.
    Vp(u32, Term, Term),
    /// `P_p(x)`, short for `V_p(x, x)`.
    Pp(u32, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Name, Box<Formula>),
    Forall(Name, Box<Formula>),
    Opaque(Opaque),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn lt(a: Term, b: Term) -> Formula {
        Formula::Lt(a, b)
    }

    pub fn gt(a: Term, b: Term) -> Formula {
        Formula::Gt(a, b)
    }

    /// `a >= b` as `a > b or a = b`.
    pub fn ge(a: Term, b: Term) -> Formula {
        Formula::Or(vec![Formula::Gt(a.clone(), b.clone()), Formula::Eq(a, b)])
    }

    /// `a <= b` as `a < b or a = b`.
    pub fn le(a: Term, b: Term) -> Formula {
        Formula::Or(vec![Formula::Lt(a.clone(), b.clone()), Formula::Eq(a, b)])
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        Formula::And(fs.into_iter().collect())
    }

    pub fn or<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        Formula::Or(fs.into_iter().collect())
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &Name, body: Formula) -> Formula {
        Formula::Exists(v.clone(), Box::new(body))
    }

    pub fn forall(v: &Name, body: Formula) -> Formula {
        Formula::Forall(v.clone(), Box::new(body))
    }

    pub fn exists_all(vs: &[Name], body: Formula) -> Formula {
        vs.iter().rev().fold(body, |b, v| Formula::exists(v, b))
    }

    pub fn forall_all(vs: &[Name], body: Formula) -> Formula {
        vs.iter().rev().fold(body, |b, v| Formula::forall(v, b))
    }

    pub fn truth() -> Formula {
        Formula::And(Vec::new())
    }

    pub fn falsity() -> Formula {
        Formula::Or(Vec::new())
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
        let push_term = |t: &Term, bound: &Vec<Name>, out: &mut Vec<Name>| {
            let mut vs = Vec::new();
            t.vars(&mut vs);
            for v in vs {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) | Formula::Gt(a, b) | Formula::Vp(_, a, b) => {
                push_term(a, bound, out);
                push_term(b, bound, out);
            }
            Formula::Pp(_, a) => push_term(a, bound, out),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
            Formula::Opaque(o) => o.args.iter().for_each(|t| push_term(t, bound, out)),
        }
    }

    /// Whether any of `names` occurs in the formula. Bound names are unique
    /// in built formulas, so shadowing is not tracked.
    pub(crate) fn mentions(&self, names: &[Name]) -> bool {
        match self {
            Formula::Eq(a, b) | Formula::Lt(a, b) | Formula::Gt(a, b) | Formula::Vp(_, a, b) => {
                a.mentions(names) || b.mentions(names)
            }
            Formula::Pp(_, a) => a.mentions(names),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.mentions(names),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(|f| f.mentions(names)),
            Formula::Implies(a, b) => a.mentions(names) || b.mentions(names),
            Formula::Opaque(o) => o.args.iter().any(|t| t.mentions(names)),
        }
    }

    /// Number of quantifiers in the formula, opaque leaves counting none.
    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Not(f) => f.quantifier_count(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_count).sum(),
            Formula::Implies(a, b) => a.quantifier_count() + b.quantifier_count(),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_count(),
            _ => 0,
        }
    }

    /// The variables of the leading block of existential quantifiers and the
    /// formula below it.
    pub fn leading_exists(&self) -> (Vec<Name>, &Formula) {
        let mut vs = Vec::new();
        let mut f = self;
        while let Formula::Exists(v, body) = f {
            vs.push(v.clone());
            f = body;
        }
        (vs, f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(k) => write!(f, "{k}"),
            Term::Scaled(c, v) => write!(f, "{c}{v}"),
            Term::Sum(ts) if ts.is_empty() => write!(f, "0"),
            Term::Sum(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, fs: &[Formula], sep: &str, empty: &str) -> fmt::Result {
    if fs.is_empty() {
        return write!(f, "{empty}");
    }
    write!(f, "(")?;
    for (i, g) in fs.iter().enumerate() {
        if i > 0 {
            write!(f, " {sep} ")?;
        }
        write!(f, "{g}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Lt(a, b) => write!(f, "{a} < {b}"),
            Formula::Gt(a, b) => write!(f, "{a} > {b}"),
            Formula::Vp(p, a, b) => write!(f, "V_{p}({a}, {b})"),
            Formula::Pp(p, a) => write!(f, "P_{p}({a})"),
            Formula::Not(g) => write!(f, "¬{g}"),
            Formula::And(fs) => join(f, fs, "∧", "true"),
            Formula::Or(fs) => join(f, fs, "∨", "false"),
            Formula::Implies(a, b) => write!(f, "({a} → {b})"),
            Formula::Exists(v, g) => write!(f, "∃{v}. {g}"),
            Formula::Forall(v, g) => write!(f, "∀{v}. {g}"),
            Formula::Opaque(o) => {
                write!(f, "{}[", o.name)?;
                for (i, t) in o.args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, "]")
            }
        }
    }
}
