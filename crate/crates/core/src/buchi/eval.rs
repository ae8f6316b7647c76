//! Bounded evaluation: quantifiers range over `[0, bound]`.
//!
//! A block of quantifiers is decided as one existential search over the
//! conjuncts of its body (a universal block searches for a counterexample
//! to the negated body). Before enumerating a variable the search assigns
//! values forced by equations, `V_p` atoms and functional opaque leaves,
//! splits on disjunctions, and narrows ranges with comparisons. All of
//! these only skip candidates that cannot satisfy the body, so the result
//! equals plain enumeration over the bounded domain.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ast::{Formula, Name, Term};
use crate::error::BuchiError;

/// `V_p(x, y)`: `x = p^k`, `x | y` and `p * x` does not divide `y`.
pub fn vp_eval(p: u32, x: &BigUint, y: &BigUint) -> bool {
    if p < 2 || y.is_zero() || !is_power(p, x) {
        return false;
    }
    y.is_multiple_of(x) && !y.is_multiple_of(&(x * p))
}

/// Whether `x = p^k` for some `k >= 0`.
pub fn is_power(p: u32, x: &BigUint) -> bool {
    if x.is_zero() {
        return false;
    }
    let mut x = x.clone();
    let p = BigUint::from(p);
    while x.is_multiple_of(&p) {
        x /= &p;
    }
    x.is_one()
}

/// Largest power of `p` dividing `y > 0`.
pub fn largest_power_dividing(p: u32, y: &BigUint) -> Option<BigUint> {
    if y.is_zero() || p < 2 {
        return None;
    }
    let p = BigUint::from(p);
    let mut x = BigUint::one();
    while y.is_multiple_of(&(&x * &p)) {
        x *= &p;
    }
    Some(x)
}

/// Evaluates `f` with quantifiers relativised to `[0, bound]`.
pub fn eval_bounded(
    f: &Formula,
    env: &BTreeMap<String, BigUint>,
    bound: &BigUint,
) -> Result<bool, BuchiError> {
    let mut e = Eval {
        bound: bound.clone(),
        stack: env
            .iter()
            .map(|(k, v)| (Name::from(k.as_str()), v.clone()))
            .collect(),
    };
    e.eval(f)
}

/// Fixes the leading existential block from `witness` and evaluates the
/// rest with [`eval_bounded`].
pub fn eval_with_witness(
    f: &Formula,
    witness: &BTreeMap<String, BigUint>,
    bound: &BigUint,
) -> Result<bool, BuchiError> {
    let (vars, body) = f.leading_exists();
    for v in &vars {
        if !witness.contains_key(&**v) {
            return Err(BuchiError::Unbound(v.to_string()));
        }
    }
    eval_bounded(body, witness, bound)
}

struct Eval {
    bound: BigUint,
    stack: Vec<(Name, BigUint)>,
}

/// A conjunct of a search: `pos` says whether the formula must hold or fail.
#[derive(Clone, Copy)]
struct Item<'a> {
    pos: bool,
    f: &'a Formula,
}

fn flatten<'a>(pos: bool, f: &'a Formula, out: &mut Vec<Item<'a>>) {
    match (pos, f) {
        (true, Formula::And(fs)) | (false, Formula::Or(fs)) => {
            fs.iter().for_each(|g| flatten(pos, g, out));
        }
        (false, Formula::Implies(a, b)) => {
            flatten(true, a, out);
            flatten(false, b, out);
        }
        (_, Formula::Not(g)) => flatten(!pos, g, out),
        _ => out.push(Item { pos, f }),
    }
}

/// The alternatives of a disjunctive item, each as a list of conjuncts.
fn branches<'a>(it: Item<'a>) -> Option<Vec<Vec<Item<'a>>>> {
    let split = |parts: Vec<(bool, &'a Formula)>| {
        parts
            .into_iter()
            .map(|(p, g)| {
                let mut v = Vec::new();
                flatten(p, g, &mut v);
                v
            })
            .collect()
    };
    match (it.pos, it.f) {
        (true, Formula::Or(fs)) | (false, Formula::And(fs)) => {
            Some(split(fs.iter().map(|g| (it.pos, g)).collect()))
        }
        (true, Formula::Implies(a, b)) => Some(split(vec![(false, &**a), (true, &**b)])),
        _ => None,
    }
}

enum Step {
    Assign(Name, BigUint),
    Fail,
    Nothing,
}

impl Eval {
    fn lookup(&self, v: &str) -> Option<&BigUint> {
        self.stack
            .iter()
            .rev()
            .find(|(k, _)| &**k == v)
            .map(|(_, x)| x)
    }

    fn term(&self, t: &Term) -> Result<BigUint, BuchiError> {
        match t {
            Term::Var(v) => self
                .lookup(v)
                .cloned()
                .ok_or_else(|| BuchiError::Unbound(v.to_string())),
            Term::Const(k) => Ok(k.clone()),
            Term::Sum(ts) => ts
                .iter()
                .try_fold(BigUint::zero(), |acc, t| Ok(acc + self.term(t)?)),
            Term::Scaled(c, v) => Ok(self.term(&Term::Var(v.clone()))? * *c),
        }
    }

    fn eval(&mut self, f: &Formula) -> Result<bool, BuchiError> {
        Ok(match f {
            Formula::Eq(a, b) => self.term(a)? == self.term(b)?,
            Formula::Lt(a, b) => self.term(a)? < self.term(b)?,
            Formula::Gt(a, b) => self.term(a)? > self.term(b)?,
            Formula::Vp(p, a, b) => vp_eval(*p, &self.term(a)?, &self.term(b)?),
            Formula::Pp(p, a) => is_power(*p, &self.term(a)?),
            Formula::Not(g) => !self.eval(g)?,
            Formula::And(fs) => {
                for g in fs {
                    if !self.eval(g)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for g in fs {
                    if self.eval(g)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            Formula::Exists(..) => {
                let mut vars = Vec::new();
                let mut body = f;
                while let Formula::Exists(v, g) = body {
                    vars.push(v.clone());
                    body = g;
                }
                let mut items = Vec::new();
                flatten(true, body, &mut items);
                self.search(vars, items)?
            }
            Formula::Forall(..) => {
                let mut vars = Vec::new();
                let mut body = f;
                while let Formula::Forall(v, g) = body {
                    vars.push(v.clone());
                    body = g;
                }
                let mut items = Vec::new();
                flatten(false, body, &mut items);
                !self.search(vars, items)?
            }
            Formula::Opaque(o) => {
                let args = o
                    .args
                    .iter()
                    .map(|t| self.term(t))
                    .collect::<Result<Vec<_>, _>>()?;
                (o.sem)(&args)
            }
        })
    }

    /// Whether some assignment of `open` within the bound satisfies every
    /// item. The stack is restored on return.
    fn search<'a>(&mut self, open: Vec<Name>, items: Vec<Item<'a>>) -> Result<bool, BuchiError> {
        let mark = self.stack.len();
        let r = self.search_inner(open, items);
        self.stack.truncate(mark);
        r
    }

    fn search_inner<'a>(
        &mut self,
        mut open: Vec<Name>,
        mut items: Vec<Item<'a>>,
    ) -> Result<bool, BuchiError> {
        loop {
            let mut i = 0;
            while i < items.len() {
                if items[i].f.mentions(&open) {
                    i += 1;
                } else {
                    let it = items.swap_remove(i);
                    if self.eval(it.f)? != it.pos {
                        return Ok(false);
                    }
                }
            }
            let mut progressed = false;
            for i in 0..items.len() {
                match self.propagate(items[i], &open)? {
                    Step::Fail => return Ok(false),
                    Step::Assign(v, x) => {
                        if x > self.bound {
                            return Ok(false);
                        }
                        open.retain(|o| *o != v);
                        self.stack.push((v, x));
                        progressed = true;
                        break;
                    }
                    Step::Nothing => {}
                }
            }
            if !progressed {
                break;
            }
        }
        if items.is_empty() {
            return Ok(true);
        }
        if let Some(i) = items.iter().position(|it| branches(*it).is_some()) {
            let it = items.swap_remove(i);
            for alt in branches(it).expect("checked") {
                let mut next = items.clone();
                next.extend(alt);
                if self.search(open.clone(), next)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        let Some(v) = open
            .iter()
            .find(|v| {
                items
                    .iter()
                    .any(|it| it.f.mentions(std::slice::from_ref(*v)))
            })
            .cloned()
        else {
            return Ok(true);
        };
        let (lo, hi, power) = self.range(&v, &items, &open)?;
        let rest: Vec<Name> = open.iter().filter(|o| **o != v).cloned().collect();
        let mut x = lo;
        if let Some(p) = power {
            x = if x.is_zero() { BigUint::one() } else { x };
            let mut k = BigUint::one();
            while k < x {
                k *= p;
            }
            x = k;
        }
        while x <= hi {
            self.stack.push((v.clone(), x.clone()));
            let ok = self.search(rest.clone(), items.clone())?;
            self.stack.pop();
            if ok {
                return Ok(true);
            }
            match power {
                Some(p) => x *= p,
                None => x += 1u32,
            }
        }
        Ok(false)
    }

    /// Value of `t` if it mentions no open variable.
    fn known(&self, t: &Term, open: &[Name]) -> Result<Option<BigUint>, BuchiError> {
        if t.mentions(open) {
            Ok(None)
        } else {
            self.term(t).map(Some)
        }
    }

    /// `t` as `coef * v + rest` when exactly one open variable occurs.
    fn linear(
        &self,
        t: &Term,
        open: &[Name],
        acc: &mut (Option<Name>, u64, BigUint),
    ) -> Result<bool, BuchiError> {
        match t {
            Term::Var(v) | Term::Scaled(_, v) if open.contains(v) => {
                let c = if let Term::Scaled(c, _) = t {
                    u64::from(*c)
                } else {
                    1
                };
                match &acc.0 {
                    Some(w) if w != v => return Ok(false),
                    _ => acc.0 = Some(v.clone()),
                }
                acc.1 += c;
            }
            Term::Sum(ts) => {
                for t in ts {
                    if !self.linear(t, open, acc)? {
                        return Ok(false);
                    }
                }
            }
            _ => acc.2 += self.term(t)?,
        }
        Ok(true)
    }

    fn propagate(&self, it: Item<'_>, open: &[Name]) -> Result<Step, BuchiError> {
        if !it.pos {
            return Ok(Step::Nothing);
        }
        match it.f {
            Formula::Eq(a, b) => {
                let mut l = (None, 0, BigUint::zero());
                let mut r = (None, 0, BigUint::zero());
                if !self.linear(a, open, &mut l)? || !self.linear(b, open, &mut r)? {
                    return Ok(Step::Nothing);
                }
                let v = match (&l.0, &r.0) {
                    (Some(x), Some(y)) if x != y => return Ok(Step::Nothing),
                    (Some(x), _) | (None, Some(x)) => x.clone(),
                    (None, None) => return Ok(Step::Nothing),
                };
                let (cl, cr) = (l.1, r.1);
                // cl * v + l.2 = cr * v + r.2
                let (coef, num) = if cl > cr {
                    if r.2 < l.2 {
                        return Ok(Step::Fail);
                    }
                    (cl - cr, &r.2 - &l.2)
                } else if cr > cl {
                    if l.2 < r.2 {
                        return Ok(Step::Fail);
                    }
                    (cr - cl, &l.2 - &r.2)
                } else {
                    return Ok(Step::Nothing);
                };
                let (q, rem) = num.div_rem(&BigUint::from(coef));
                if rem.is_zero() {
                    Ok(Step::Assign(v, q))
                } else {
                    Ok(Step::Fail)
                }
            }
            Formula::Vp(p, Term::Var(v), y) if open.contains(v) => match self.known(y, open)? {
                Some(y) => Ok(match largest_power_dividing(*p, &y) {
                    Some(x) => Step::Assign(v.clone(), x),
                    None => Step::Fail,
                }),
                None => Ok(Step::Nothing),
            },
            Formula::Opaque(o) => {
                let (Some(solve), Some(Term::Var(v))) = (&o.solve, o.args.last()) else {
                    return Ok(Step::Nothing);
                };
                if !open.contains(v) {
                    return Ok(Step::Nothing);
                }
                let mut args = Vec::with_capacity(o.args.len() - 1);
                for t in &o.args[..o.args.len() - 1] {
                    match self.known(t, open)? {
                        Some(x) => args.push(x),
                        None => return Ok(Step::Nothing),
                    }
                }
                Ok(match solve(&args) {
                    Some(x) => Step::Assign(v.clone(), x),
                    None => Step::Fail,
                })
            }
            _ => Ok(Step::Nothing),
        }
    }

    /// Candidate range for `v` from comparisons against known terms, and
    /// the base if `v` must be a power.
    fn range(
        &self,
        v: &Name,
        items: &[Item<'_>],
        open: &[Name],
    ) -> Result<(BigUint, BigUint, Option<u32>), BuchiError> {
        let mut lo = BigUint::zero();
        let mut hi = self.bound.clone();
        let mut power = None;
        let is_v = |t: &Term| matches!(t, Term::Var(w) if w == v);
        for it in items {
            // below: v < t (strict) or v <= t; above: v > t or v >= t
            let (small, big, strict) = match (it.pos, it.f) {
                (true, Formula::Lt(a, b)) | (true, Formula::Gt(b, a)) => (a, b, true),
                (false, Formula::Lt(a, b)) | (false, Formula::Gt(b, a)) => (b, a, false),
                (true, Formula::Pp(p, a)) if is_v(a) => {
                    power = Some(*p);
                    continue;
                }
                _ => continue,
            };
            if is_v(small) {
                if let Some(k) = self.known(big, open)? {
                    if strict {
                        if k.is_zero() {
                            return Ok((BigUint::one(), BigUint::zero(), power));
                        }
                        hi = hi.min(k - 1u32);
                    } else {
                        hi = hi.min(k);
                    }
                }
            } else if is_v(big) {
                if let Some(k) = self.known(small, open)? {
                    lo = lo.max(if strict { k + 1u32 } else { k });
                }
            }
        }
        Ok((lo, hi, power))
    }
}
