//! Builders for the tiling formulas of Buchi arithmetic.
//!
//! Positions in binary expansions are powers of `p`; a tuple `u_1..u_k`
//! carries at position `x` the number whose `i`-th digit (most significant
//! first) is the digit of `u_i` at weight `x`. Bound variables get fresh
//! names (`pre_3`), so builders compose without capture.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use super::ast::{Formula, Name, Opaque, Term};
use super::eval::is_power;
use crate::error::BuchiError;
use crate::tiling::{CorridorInstance, Tile, Tiling};

/// Digit of `v` at weight `x`, if `x` is a power of `p`.
pub fn digit_at(p: u32, v: &BigUint, x: &BigUint) -> Option<BigUint> {
    if !is_power(p, x) {
        return None;
    }
    Some((v / x).mod_floor(&BigUint::from(p)))
}

/// The number the digits of `us` at weight `x` spell, most significant
/// first, if `x` is a power of `p`.
pub fn num_at_value(p: u32, us: &[BigUint], x: &BigUint) -> Option<BigUint> {
    if !is_power(p, x) {
        return None;
    }
    Some(us.iter().fold(BigUint::zero(), |a, u| {
        a * p + digit_at(p, u, x).expect("power")
    }))
}

/// Bits needed to index `count` tiles, at least one.
pub fn tile_bits(count: usize) -> usize {
    let mut m = 1;
    while (1usize << m) < count {
        m += 1;
    }
    m
}

pub struct Builder {
    p: u32,
    opaque: bool,
    fresh: Cell<u32>,
}

impl Builder {
    pub fn new(p: u32) -> Result<Builder, BuchiError> {
        if p < 2 {
            return Err(BuchiError::Base(p));
        }
        Ok(Builder {
            p,
            opaque: false,
            fresh: Cell::new(0),
        })
    }

    /// Replaces `BitAt` and `NumAt` subformulas by opaque oracle leaves.
    pub fn with_opaque(mut self, on: bool) -> Builder {
        self.opaque = on;
        self
    }

    pub fn base(&self) -> u32 {
        self.p
    }

    fn fresh(&self, base: &str) -> Name {
        let k = self.fresh.get();
        self.fresh.set(k + 1);
        Arc::from(format!("{base}_{k}").as_str())
    }

    fn v(&self, n: &Name) -> Term {
        Term::Var(n.clone())
    }

    /// `p * t`, the next position to the left.
    fn left(&self, t: &Term) -> Term {
        t.times(self.p)
    }

    fn pw(&self, t: Term) -> Formula {
        Formula::Pp(self.p, t)
    }

    /// `BitAt(v, x, b)`: `x` is a power of `p` and the digit of `v` at
    /// weight `x` is `b`.
    pub fn bit_at(&self, v: &Term, x: &Term, b: &Term) -> Formula {
        if self.opaque {
            let p = self.p;
            return Formula::Opaque(Opaque {
                name: "BitAt".into(),
                args: vec![v.clone(), x.clone(), b.clone()],
                sem: Arc::new(move |a: &[BigUint]| {
                    digit_at(p, &a[0], &a[1]).as_ref() == Some(&a[2])
                }),
                solve: Some(Arc::new(move |a: &[BigUint]| digit_at(p, &a[0], &a[1]))),
                shape: "∃".into(),
            });
        }
        let (pre, y, suf) = (self.fresh("pre"), self.fresh("y"), self.fresh("suf"));
        let digits = (0..self.p).map(|d| {
            let mut parts = vec![self.v(&pre)];
            if d > 0 {
                parts.push(x.times(d));
            }
            parts.push(self.v(&suf));
            Formula::and([
                Formula::eq(b.clone(), Term::num(d.into())),
                Formula::eq(v.clone(), Term::sum(parts)),
            ])
        });
        Formula::exists_all(
            &[pre.clone(), y.clone(), suf.clone()],
            Formula::and([
                self.pw(x.clone()),
                Formula::or([
                    Formula::and([
                        Formula::Vp(self.p, self.v(&y), self.v(&pre)),
                        Formula::gt(self.v(&y), x.clone()),
                    ]),
                    Formula::eq(self.v(&pre), Term::zero()),
                ]),
                Formula::gt(x.clone(), self.v(&suf)),
                Formula::or(digits),
            ]),
        )
    }

    /// `NumAt_k(u, x, a)` with `k = us.len()`.
    pub fn num_at(&self, us: &[Term], x: &Term, a: &Term) -> Formula {
        if self.opaque {
            let p = self.p;
            let k = us.len();
            let mut args = us.to_vec();
            args.push(x.clone());
            args.push(a.clone());
            return Formula::Opaque(Opaque {
                name: format!("NumAt_{k}"),
                args,
                sem: Arc::new(move |v: &[BigUint]| {
                    num_at_value(p, &v[..k], &v[k]).as_ref() == Some(&v[k + 1])
                }),
                solve: Some(Arc::new(move |v: &[BigUint]| {
                    num_at_value(p, &v[..k], &v[k])
                })),
                shape: "∃".into(),
            });
        }
        let k = us.len();
        let a_s: Vec<Name> = (0..=k).map(|i| self.fresh(&format!("a{i}"))).collect();
        let b_s: Vec<Name> = (1..=k).map(|i| self.fresh(&format!("b{i}"))).collect();
        let mut parts = vec![
            Formula::eq(self.v(&a_s[0]), Term::zero()),
            Formula::eq(self.v(&a_s[k]), a.clone()),
        ];
        for i in 1..=k {
            parts.push(Formula::eq(
                self.v(&a_s[i]),
                Term::sum([Term::scaled(self.p, &a_s[i - 1]), self.v(&b_s[i - 1])]),
            ));
            parts.push(self.bit_at(&us[i - 1], x, &self.v(&b_s[i - 1])));
        }
        let vars: Vec<Name> = a_s.into_iter().chain(b_s).collect();
        Formula::exists_all(&vars, Formula::and(parts))
    }

    /// `MaxNum_k(N) := NumAt_k(1, ..., 1, 1, N)`.
    pub fn max_num(&self, k: usize, nn: &Term) -> Formula {
        self.num_at(&vec![Term::one(); k], &Term::one(), nn)
    }

    pub fn top_left(&self, inst: &CorridorInstance, t: &Term) -> Formula {
        Formula::eq(t.clone(), Term::num(inst.top_left as u64))
    }

    pub fn bottom_right(&self, inst: &CorridorInstance, t: &Term) -> Formula {
        Formula::eq(t.clone(), Term::num(inst.bottom_right as u64))
    }

    fn matching(
        &self,
        inst: &CorridorInstance,
        t: &Term,
        t2: &Term,
        ok: impl Fn(&Tile, &Tile) -> bool,
    ) -> Formula {
        let mut alts = Vec::new();
        for (i, a) in inst.tiles.iter().enumerate() {
            for (j, b) in inst.tiles.iter().enumerate() {
                if ok(a, b) {
                    alts.push(Formula::and([
                        Formula::eq(t.clone(), Term::num(i as u64)),
                        Formula::eq(t2.clone(), Term::num(j as u64)),
                    ]));
                }
            }
        }
        Formula::or(alts)
    }

    /// `right(t) = left(t2)`.
    pub fn match_h(&self, inst: &CorridorInstance, t: &Term, t2: &Term) -> Formula {
        self.matching(inst, t, t2, |a, b| a.right == b.left)
    }

    /// `bottom(t) = top(t2)`.
    pub fn match_v(&self, inst: &CorridorInstance, t: &Term, t2: &Term) -> Formula {
        self.matching(inst, t, t2, |a, b| a.bottom == b.top)
    }

    /// Positions `1, p, ..., pF` carry `0, 1, ..., N, 0, 1, ...` from the
    /// right, so position `p^i` holds `i mod (N + 1)`.
    pub fn is_a_ruler(&self, us: &[Term], f: &Term, nn: &Term) -> Formula {
        let x = self.fresh("x");
        let (v2, v) = (self.fresh("v'"), self.fresh("v"));
        let step = Formula::exists_all(
            &[v2.clone(), v.clone()],
            Formula::and([
                self.num_at(us, &self.left(&self.v(&x)), &self.v(&v2)),
                self.num_at(us, &self.v(&x), &self.v(&v)),
                Formula::or([
                    Formula::eq(self.v(&v2), Term::sum([self.v(&v), Term::one()])),
                    Formula::and([
                        Formula::eq(self.v(&v2), Term::zero()),
                        Formula::eq(self.v(&v), nn.clone()),
                    ]),
                ]),
            ]),
        );
        Formula::and([
            self.num_at(us, &Term::one(), &Term::zero()),
            self.num_at(us, &self.left(f), &Term::zero()),
            Formula::forall(
                &x,
                Formula::implies(
                    Formula::and([
                        Formula::gt(f.clone(), self.v(&x)),
                        Formula::ge(self.v(&x), Term::one()),
                        self.pw(self.v(&x)),
                    ]),
                    step,
                ),
            ),
        ])
    }

    /// `WidthMul_n(u, x, N) := NumAt_n(u, x, 0)`.
    pub fn width_mul(&self, us: &[Term], x: &Term, _nn: &Term) -> Formula {
        self.num_at(us, x, &Term::zero())
    }

    /// `x` and `y` carry the same ruler value with no repetition between.
    pub fn width(&self, us: &[Term], x: &Term, y: &Term, _nn: &Term) -> Formula {
        let v = self.fresh("v");
        let z = self.fresh("y");
        Formula::exists(
            &v,
            Formula::and([
                self.num_at(us, x, &self.v(&v)),
                self.num_at(us, y, &self.v(&v)),
                Formula::forall(
                    &z,
                    Formula::implies(
                        Formula::and([
                            Formula::gt(x.clone(), self.v(&z)),
                            Formula::gt(self.v(&z), y.clone()),
                        ]),
                        Formula::not(self.num_at(us, &self.v(&z), &self.v(&v))),
                    ),
                ),
            ]),
        )
    }

    /// Ruler of the comb shape: positions `pF` and `1` carry `N` and
    /// between any two positions with values `v, v'` there is a value at
    /// least `min(v, v')`, or exactly one `min(v, v') - 1` above all others,
    /// or one of the values is `0`.
    pub fn is_a_ruler_prime(&self, us: &[Term], f: &Term, nn: &Term) -> Formula {
        let (x, x2, v, v2) = (
            self.fresh("x"),
            self.fresh("x'"),
            self.fresh("v"),
            self.fresh("v'"),
        );
        let (x, x2, v, v2) = (self.v(&x), self.v(&x2), self.v(&v), self.v(&v2));
        let names: Vec<Name> = [&x, &x2, &v, &v2]
            .iter()
            .map(|t| match t {
                Term::Var(n) => n.clone(),
                _ => unreachable!(),
            })
            .collect();
        let between = |y: &Term| {
            Formula::and([
                Formula::gt(x.clone(), y.clone()),
                Formula::gt(y.clone(), x2.clone()),
            ])
        };
        let at_least_min = |w: &Term| {
            Formula::or([
                Formula::and([
                    Formula::le(v.clone(), v2.clone()),
                    Formula::ge(w.clone(), v.clone()),
                ]),
                Formula::and([
                    Formula::lt(v2.clone(), v.clone()),
                    Formula::ge(w.clone(), v2.clone()),
                ]),
            ])
        };
        let min_minus_one = |w: &Term| {
            let w1 = Term::sum([w.clone(), Term::one()]);
            Formula::or([
                Formula::and([
                    Formula::le(v.clone(), v2.clone()),
                    Formula::eq(w1.clone(), v.clone()),
                ]),
                Formula::and([
                    Formula::lt(v2.clone(), v.clone()),
                    Formula::eq(w1, v2.clone()),
                ]),
            ])
        };
        let (y1, vy1) = (self.fresh("y"), self.fresh("v_y"));
        let higher = Formula::exists_all(
            &[y1.clone(), vy1.clone()],
            Formula::and([
                between(&self.v(&y1)),
                self.num_at(us, &self.v(&y1), &self.v(&vy1)),
                at_least_min(&self.v(&vy1)),
            ]),
        );
        let (y2, vy2, y3, vy3) = (
            self.fresh("y"),
            self.fresh("v_y"),
            self.fresh("y'"),
            self.fresh("v'_y"),
        );
        let others_lower = Formula::forall_all(
            &[y3.clone(), vy3.clone()],
            Formula::implies(
                Formula::and([
                    between(&self.v(&y3)),
                    Formula::not(Formula::eq(self.v(&y3), self.v(&y2))),
                    self.num_at(us, &self.v(&y3), &self.v(&vy3)),
                ]),
                Formula::lt(self.v(&vy3), self.v(&vy2)),
            ),
        );
        let unique_gap = Formula::exists_all(
            &[y2.clone(), vy2.clone()],
            Formula::and([
                between(&self.v(&y2)),
                self.num_at(us, &self.v(&y2), &self.v(&vy2)),
                min_minus_one(&self.v(&vy2)),
                others_lower,
            ]),
        );
        let zero = Formula::or([
            Formula::eq(v.clone(), Term::zero()),
            Formula::eq(v2.clone(), Term::zero()),
        ]);
        Formula::and([
            self.num_at(us, &self.left(f), nn),
            self.num_at(us, &Term::one(), nn),
            Formula::forall_all(
                &names,
                Formula::implies(
                    Formula::and([
                        Formula::ge(self.left(f), x.clone()),
                        Formula::gt(x.clone(), x2.clone()),
                        Formula::ge(x2.clone(), Term::one()),
                        self.num_at(us, &x, &v),
                        self.num_at(us, &x2, &v2),
                    ]),
                    Formula::or([higher, unique_gap, zero]),
                ),
            ),
        ])
    }

    /// `WidthMul'_n(u, x, N) := NumAt_n(u, x, N)`.
    pub fn width_mul_prime(&self, us: &[Term], x: &Term, nn: &Term) -> Formula {
        self.num_at(us, x, nn)
    }

    /// `x` and `y` lie in consecutive rows delimited by `p > q > r` and the
    /// counters the comb ruler implies at `x` and `y`, read from the start
    /// of their rows, agree on every bit `B <= N`.
    pub fn width_prime(&self, us: &[Term], x: &Term, y: &Term, nn: &Term) -> Formula {
        let (pp, qq, rr, s) = (
            self.fresh("p"),
            self.fresh("q"),
            self.fresh("r"),
            self.fresh("s"),
        );
        let (p, q, r) = (self.v(&pp), self.v(&qq), self.v(&rr));
        let wm = |t: &Term| self.width_mul_prime(us, t, nn);
        let rows = Formula::and([
            Formula::gt(p.clone(), q.clone()),
            Formula::gt(q.clone(), r.clone()),
            wm(&p),
            wm(&q),
            wm(&r),
            Formula::forall(
                &s,
                Formula::implies(
                    Formula::and([
                        Formula::gt(p.clone(), self.v(&s)),
                        Formula::gt(self.v(&s), r.clone()),
                        wm(&self.v(&s)),
                    ]),
                    Formula::eq(self.v(&s), q.clone()),
                ),
            ),
            Formula::gt(p.clone(), x.clone()),
            Formula::ge(x.clone(), q.clone()),
            Formula::gt(q.clone(), y.clone()),
            Formula::ge(y.clone(), r.clone()),
            self.pw(x.clone()),
            self.pw(y.clone()),
        ]);
        let bb = self.fresh("B");
        let b = self.v(&bb);
        // z in [lo, hi) carrying B
        let occ = |z: &Term, lo: &Term, hi: &Term| {
            Formula::and([
                Formula::gt(hi.clone(), z.clone()),
                Formula::ge(z.clone(), lo.clone()),
                self.num_at(us, z, &b),
            ])
        };
        // some value above B in [lo, z)
        let larger_after = |z: &Term, lo: &Term| {
            let (w, v) = (self.fresh("z"), self.fresh("v"));
            Formula::exists_all(
                &[w.clone(), v.clone()],
                Formula::and([
                    Formula::gt(z.clone(), self.v(&w)),
                    Formula::ge(self.v(&w), lo.clone()),
                    self.num_at(us, &self.v(&w), &self.v(&v)),
                    Formula::gt(self.v(&v), b.clone()),
                ]),
            )
        };
        // only values below B in [lo, z)
        let smaller_after = |z: &Term, lo: &Term| {
            let (w, v) = (self.fresh("z"), self.fresh("v"));
            Formula::forall(
                &w,
                Formula::implies(
                    Formula::and([
                        Formula::gt(z.clone(), self.v(&w)),
                        Formula::ge(self.v(&w), lo.clone()),
                        self.pw(self.v(&w)),
                    ]),
                    Formula::exists(
                        &v,
                        Formula::and([
                            self.num_at(us, &self.v(&w), &self.v(&v)),
                            Formula::lt(self.v(&v), b.clone()),
                        ]),
                    ),
                ),
            )
        };
        // B occurs again in [lo, z)
        let repeated = |z: &Term, lo: &Term| {
            let w = self.fresh("z");
            Formula::exists(
                &w,
                Formula::and([
                    Formula::gt(z.clone(), self.v(&w)),
                    Formula::ge(self.v(&w), lo.clone()),
                    self.num_at(us, &self.v(&w), &b),
                ]),
            )
        };
        // the bit is 0 on one side whenever B is absent from the other
        let one_sided = |lo: &Term, hi: &Term, lo2: &Term, hi2: &Term| {
            let (o, z) = (self.fresh("o"), self.fresh("x'"));
            Formula::or([
                Formula::exists(&o, occ(&self.v(&o), lo2, hi2)),
                Formula::forall(
                    &z,
                    Formula::implies(occ(&self.v(&z), lo, hi), larger_after(&self.v(&z), lo)),
                ),
            ])
        };
        let (xo, yo) = (self.fresh("x'"), self.fresh("y'"));
        let (xv, yv) = (self.v(&xo), self.v(&yo));
        let both = Formula::forall_all(
            &[xo.clone(), yo.clone()],
            Formula::implies(
                Formula::and([occ(&xv, x, &p), occ(&yv, y, &q)]),
                Formula::or([
                    repeated(&xv, x),
                    repeated(&yv, y),
                    Formula::and([smaller_after(&xv, x), smaller_after(&yv, y)]),
                    Formula::and([larger_after(&xv, x), larger_after(&yv, y)]),
                ]),
            ),
        );
        let bits = Formula::forall(
            &bb,
            Formula::implies(
                Formula::le(b.clone(), nn.clone()),
                Formula::and([one_sided(x, &p, y, &q), one_sided(y, &q, x, &p), both]),
            ),
        );
        Formula::exists_all(&[pp, qq, rr], Formula::and([rows, bits]))
    }

    fn tiling(&self, inst: &CorridorInstance, primed: bool) -> Formula {
        let n = inst.n as usize;
        let m = tile_bits(inst.tiles.len());
        let f: Name = Arc::from("F");
        let nn: Name = Arc::from("N");
        let u_names: Vec<Name> = (1..=n)
            .map(|i| Arc::from(format!("u{i}").as_str()))
            .collect();
        let w_names: Vec<Name> = (1..=m)
            .map(|i| Arc::from(format!("w{i}").as_str()))
            .collect();
        let us: Vec<Term> = u_names.iter().map(Term::from).collect();
        let ws: Vec<Term> = w_names.iter().map(Term::from).collect();
        let (ft, nt) = (self.v(&f), self.v(&nn));
        let ruler = if primed {
            self.is_a_ruler_prime(&us, &ft, &nt)
        } else {
            self.is_a_ruler(&us, &ft, &nt)
        };
        let a = Formula::and([self.max_num(n, &nt), ruler]);
        let corner = |at: Term, which: &dyn Fn(&Term) -> Formula| {
            let t = self.fresh("t");
            Formula::exists(
                &t,
                Formula::and([self.num_at(&ws, &at, &self.v(&t)), which(&self.v(&t))]),
            )
        };
        let b = corner(ft.clone(), &|t| self.top_left(inst, t));
        let c = corner(Term::one(), &|t| self.bottom_right(inst, t));
        let x = self.fresh("x");
        let xt = self.v(&x);
        let (t1, t2) = (self.fresh("t'"), self.fresh("t"));
        let row_break = if primed {
            self.width_mul_prime(&us, &self.left(&xt), &nt)
        } else {
            self.width_mul(&us, &self.left(&xt), &nt)
        };
        let d = Formula::forall(
            &x,
            Formula::implies(
                Formula::and([
                    Formula::gt(ft.clone(), xt.clone()),
                    self.pw(xt.clone()),
                    Formula::not(row_break),
                ]),
                Formula::exists_all(
                    &[t1.clone(), t2.clone()],
                    Formula::and([
                        self.num_at(&ws, &self.left(&xt), &self.v(&t1)),
                        self.num_at(&ws, &xt, &self.v(&t2)),
                        self.match_h(inst, &self.v(&t1), &self.v(&t2)),
                    ]),
                ),
            ),
        );
        let (xa, xb) = (self.fresh("x"), self.fresh("x'"));
        let (xa_t, xb_t) = (self.v(&xa), self.v(&xb));
        let (t3, t4) = (self.fresh("t"), self.fresh("t'"));
        let below = if primed {
            self.width_prime(&us, &xa_t, &xb_t, &nt)
        } else {
            self.width(&us, &xa_t, &xb_t, &nt)
        };
        let e = Formula::forall_all(
            &[xa.clone(), xb.clone()],
            Formula::implies(
                Formula::and([
                    Formula::gt(self.left(&ft), xa_t.clone()),
                    Formula::gt(xa_t.clone(), xb_t.clone()),
                    below,
                ]),
                Formula::exists_all(
                    &[t3.clone(), t4.clone()],
                    Formula::and([
                        self.num_at(&ws, &xa_t, &self.v(&t3)),
                        self.num_at(&ws, &xb_t, &self.v(&t4)),
                        self.match_v(inst, &self.v(&t3), &self.v(&t4)),
                    ]),
                ),
            ),
        );
        let outer: Vec<Name> = [f, nn].into_iter().chain(u_names).chain(w_names).collect();
        Formula::exists_all(&outer, Formula::and([a, b, c, d, e]))
    }

    /// Holds iff the instance has a valid tiling of width `2^n`.
    pub fn etiling(&self, inst: &CorridorInstance) -> Formula {
        self.tiling(inst, false)
    }

    /// The variant of [`Builder::etiling`] for width `2^(2^n - 1)`, the
    /// length of the comb ruler period.
    pub fn etiling_prime(&self, inst: &CorridorInstance) -> Formula {
        self.tiling(inst, true)
    }
}

/// Four tiles of width-2 whose only valid tiling is `[[0, 1], [2, 3]]`.
pub fn toy_instance() -> CorridorInstance {
    CorridorInstance::new(
        vec![
            Tile::new(0, 1, 2, 0),
            Tile::new(0, 0, 3, 1),
            Tile::new(2, 4, 0, 0),
            Tile::new(3, 0, 0, 4),
        ],
        0,
        3,
        1,
    )
    .expect("corners exist")
}

/// The leading witness of `ETiling` for a tiling of width `p^n`: `F` is
/// the position of the top-left tile, `u` carries the ruler and `w` the
/// tile indices, most significant digit first, one tile per position.
pub fn etiling_witness(
    p: u32,
    inst: &CorridorInstance,
    t: &Tiling,
) -> Result<BTreeMap<String, BigUint>, BuchiError> {
    let n = inst.n as usize;
    let width = (p as usize)
        .checked_pow(n as u32)
        .ok_or_else(|| BuchiError::Params("width overflow".into()))?;
    if t.width() != width || t.height() == 0 {
        return Err(BuchiError::Params(format!(
            "tiling width {} is not {p}^{n}",
            t.width()
        )));
    }
    etiling_witness_with(p, inst, t, width, n, |e| e % width)
}

fn etiling_witness_with(
    p: u32,
    inst: &CorridorInstance,
    t: &Tiling,
    width: usize,
    n: usize,
    ruler: impl Fn(usize) -> usize,
) -> Result<BTreeMap<String, BigUint>, BuchiError> {
    let m = tile_bits(inst.tiles.len());
    let cells = t.height() * width;
    let pos = |e: usize| BigUint::from(p).pow(e as u32);
    let digit = |value: usize, i: usize, len: usize| {
        (value / (p as usize).pow((len - 1 - i) as u32)) % p as usize
    };
    let mut us = vec![BigUint::zero(); n];
    for e in 0..=cells {
        let value = ruler(e);
        for (i, u) in us.iter_mut().enumerate() {
            *u += pos(e) * digit(value, i, n);
        }
    }
    let mut ws = vec![BigUint::zero(); m];
    for (r, row) in t.rows().iter().enumerate() {
        for (c, &tile) in row.iter().enumerate() {
            if tile >= inst.tiles.len() {
                return Err(BuchiError::Params(format!("tile {tile} out of range")));
            }
            let e = (t.height() - 1 - r) * width + (width - 1 - c);
            for (i, w) in ws.iter_mut().enumerate() {
                *w += pos(e) * digit(tile, i, m);
            }
        }
    }
    let mut out = BTreeMap::new();
    out.insert("F".to_string(), pos(cells - 1));
    out.insert("N".to_string(), BigUint::from(width - 1));
    for (i, u) in us.into_iter().enumerate() {
        out.insert(format!("u{}", i + 1), u);
    }
    for (i, w) in ws.into_iter().enumerate() {
        out.insert(format!("w{}", i + 1), w);
    }
    Ok(out)
}

/// Ruler value of `ETiling'` at exponent `e`: `N` at multiples of the
/// period `P = 2^N`, the 2-adic valuation of `e mod P` elsewhere.
pub fn comb_ruler_value(nn: u32, e: usize) -> usize {
    let period = 1usize << nn;
    match e % period {
        0 => nn as usize,
        r => r.trailing_zeros() as usize,
    }
}

/// The leading witness of `ETiling'` (base 2) for a tiling of width
/// `2^N`, `N = 2^n - 1`: like [`etiling_witness`] with the comb ruler.
pub fn etiling_prime_witness(
    inst: &CorridorInstance,
    t: &Tiling,
) -> Result<BTreeMap<String, BigUint>, BuchiError> {
    let n = inst.n as usize;
    if n > 4 {
        return Err(BuchiError::Params("n too large for a comb witness".into()));
    }
    let nn = (1u32 << n) - 1;
    let width = 1usize << nn;
    if t.width() != width || t.height() == 0 {
        return Err(BuchiError::Params(format!(
            "tiling width {} is not 2^{nn}",
            t.width()
        )));
    }
    let mut out = etiling_witness_with(2, inst, t, width, n, |e| comb_ruler_value(nn, e))?;
    out.insert("N".to_string(), BigUint::from(nn));
    Ok(out)
}

/// Parameters of [`build_formula`].
#[derive(Clone, Debug)]
pub struct Params {
    pub p: u32,
    pub k: usize,
    pub n: usize,
    pub opaque: bool,
    pub instance: Option<CorridorInstance>,
}

impl Default for Params {
    fn default() -> Params {
        Params {
            p: 2,
            k: 2,
            n: 1,
            opaque: false,
            instance: None,
        }
    }
}

pub const FORMULA_NAMES: &[&str] = &[
    "BitAt",
    "NumAt",
    "MaxNum",
    "TopLeft",
    "BottomRight",
    "MatchH",
    "MatchV",
    "IsARuler",
    "WidthMul",
    "Width",
    "ETiling",
    "IsARuler'",
    "WidthMul'",
    "Width'",
    "ETiling'",
];

/// Builds a named formula over the standard free variables: `v, x, b` for
/// `BitAt`; `u1..uk, x, a` for `NumAt`; `N` for `MaxNum`; `t` and `t'` for
/// the tile predicates; `u1..un, F, N` for the rulers, with `x` (and `y`)
/// for the width formulas. The tiling formulas are closed.
pub fn build_formula(name: &str, params: &Params) -> Result<Formula, BuchiError> {
    let b = Builder::new(params.p)?.with_opaque(params.opaque);
    let var = |s: &str| Term::var(s);
    let tuple = |k: usize| (1..=k).map(|i| var(&format!("u{i}"))).collect::<Vec<_>>();
    if params.k == 0 || params.n == 0 {
        return Err(BuchiError::Params("k and n must be positive".into()));
    }
    let inst = params.instance.clone().unwrap_or_else(toy_instance);
    let (un, f, nn, x, y) = (tuple(params.n), var("F"), var("N"), var("x"), var("y"));
    Ok(match name {
        "BitAt" => b.bit_at(&var("v"), &x, &var("b")),
        "NumAt" => b.num_at(&tuple(params.k), &x, &var("a")),
        "MaxNum" => b.max_num(params.k, &nn),
        "TopLeft" => b.top_left(&inst, &var("t")),
        "BottomRight" => b.bottom_right(&inst, &var("t")),
        "MatchH" => b.match_h(&inst, &var("t"), &var("t'")),
        "MatchV" => b.match_v(&inst, &var("t"), &var("t'")),
        "IsARuler" => b.is_a_ruler(&un, &f, &nn),
        "WidthMul" => b.width_mul(&un, &x, &nn),
        "Width" => b.width(&un, &x, &y, &nn),
        "ETiling" => b.etiling(&inst),
        "IsARuler'" => b.is_a_ruler_prime(&un, &f, &nn),
        "WidthMul'" => b.width_mul_prime(&un, &x, &nn),
        "Width'" => b.width_prime(&un, &x, &y, &nn),
        "ETiling'" => b.etiling_prime(&inst),
        other => return Err(BuchiError::UnknownFormula(other.to_string())),
    })
}
