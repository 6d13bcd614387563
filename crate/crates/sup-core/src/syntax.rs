//! Propositions, proof terms, binding, substitution and alpha-equivalence.

use std::collections::{BTreeSet, HashMap};

use crate::scalar::Scalar;

/// Variable and binder names. Plain strings; fresh names are generated by
/// suffixing a counter when a capture would otherwise occur.
pub type Name = String;

/// Propositions of the logic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Prop {
    Top,
    Bottom,
    Implies(Box<Prop>, Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Sup(Box<Prop>, Box<Prop>),
}

impl Prop {
    pub fn implies(a: Prop, b: Prop) -> Prop {
        Prop::Implies(Box::new(a), Box::new(b))
    }
    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::Or(Box::new(a), Box::new(b))
    }
    pub fn sup(a: Prop, b: Prop) -> Prop {
        Prop::Sup(Box::new(a), Box::new(b))
    }
}

/// A scalar-weighted proof. The children of `+` and `||` are weighted; in
/// plain-calculus mode every weight is the unit scalar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weighted {
    pub weight: Scalar,
    pub body: Box<Term>,
}

impl Weighted {
    pub fn new(weight: Scalar, body: Term) -> Weighted {
        Weighted { weight, body: Box::new(body) }
    }

    /// Weight `1`, the implicit weight of the plain calculus.
    pub fn unit(body: Term) -> Weighted {
        Weighted::new(Scalar::ONE, body)
    }
}

/// Proof terms of the unified AST covering both calculi.
///
/// `inl`/`inr` carry the absent side of the disjunction so that type
/// inference stays syntax-directed, mirroring the domain annotation on
/// lambdas and the target annotation on `absurd`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Par(Weighted, Weighted),
    Star,
    ElimBot { scrutinee: Box<Term>, target: Prop },
    Lam { binder: Name, domain: Prop, body: Box<Term> },
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    ElimAnd { scrutinee: Box<Term>, x: Name, y: Name, body: Box<Term> },
    Inl { body: Box<Term>, right: Prop },
    Inr { body: Box<Term>, left: Prop },
    ElimOr { scrutinee: Box<Term>, x: Name, left: Box<Term>, y: Name, right: Box<Term> },
    Sum(Weighted, Weighted),
    ElimSup { scrutinee: Box<Term>, x: Name, left: Box<Term>, y: Name, right: Box<Term> },
    ElimSupPar { scrutinee: Box<Term>, x: Name, left: Box<Term>, y: Name, right: Box<Term> },
}

impl Term {
    pub fn var(name: impl Into<Name>) -> Term {
        Term::Var(name.into())
    }

    pub fn lam(binder: impl Into<Name>, domain: Prop, body: Term) -> Term {
        Term::Lam { binder: binder.into(), domain, body: Box::new(body) }
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(body: Term, right: Prop) -> Term {
        Term::Inl { body: Box::new(body), right }
    }

    pub fn inr(body: Term, left: Prop) -> Term {
        Term::Inr { body: Box::new(body), left }
    }

    pub fn elim_bot(scrutinee: Term, target: Prop) -> Term {
        Term::ElimBot { scrutinee: Box::new(scrutinee), target }
    }

    pub fn elim_and(scrutinee: Term, x: impl Into<Name>, y: impl Into<Name>, body: Term) -> Term {
        Term::ElimAnd {
            scrutinee: Box::new(scrutinee),
            x: x.into(),
            y: y.into(),
            body: Box::new(body),
        }
    }

    pub fn elim_or(s: Term, x: impl Into<Name>, l: Term, y: impl Into<Name>, r: Term) -> Term {
        Term::ElimOr {
            scrutinee: Box::new(s),
            x: x.into(),
            left: Box::new(l),
            y: y.into(),
            right: Box::new(r),
        }
    }

    pub fn elim_sup(s: Term, x: impl Into<Name>, l: Term, y: impl Into<Name>, r: Term) -> Term {
        Term::ElimSup {
            scrutinee: Box::new(s),
            x: x.into(),
            left: Box::new(l),
            y: y.into(),
            right: Box::new(r),
        }
    }

    pub fn elim_sup_par(s: Term, x: impl Into<Name>, l: Term, y: impl Into<Name>, r: Term) -> Term {
        Term::ElimSupPar {
            scrutinee: Box::new(s),
            x: x.into(),
            left: Box::new(l),
            y: y.into(),
            right: Box::new(r),
        }
    }

    pub fn sum(a: Weighted, b: Weighted) -> Term {
        Term::Sum(a, b)
    }

    pub fn par(a: Weighted, b: Weighted) -> Term {
        Term::Par(a, b)
    }

    /// `t + u` with unit weights.
    pub fn sum1(a: Term, b: Term) -> Term {
        Term::Sum(Weighted::unit(a), Weighted::unit(b))
    }

    /// `t || u` with unit weights.
    pub fn par1(a: Term, b: Term) -> Term {
        Term::Par(Weighted::unit(a), Weighted::unit(b))
    }

    /// `a.t + b.u`.
    pub fn wsum(a: Scalar, t: Term, b: Scalar, u: Term) -> Term {
        Term::Sum(Weighted::new(a, t), Weighted::new(b, u))
    }

    /// `a.t || b.u`.
    pub fn wpar(a: Scalar, t: Term, b: Scalar, u: Term) -> Term {
        Term::Par(Weighted::new(a, t), Weighted::new(b, u))
    }

    /// Introductions are `*`, lambda, pair, `inl`, `inr` and `+`;
    /// variables and `||` are neither introductions nor eliminations.
    pub fn is_introduction(&self) -> bool {
        matches!(
            self,
            Term::Star
                | Term::Lam { .. }
                | Term::Pair(_, _)
                | Term::Inl { .. }
                | Term::Inr { .. }
                | Term::Sum(_, _)
        )
    }

    pub fn is_elimination(&self) -> bool {
        matches!(
            self,
            Term::ElimBot { .. }
                | Term::App(_, _)
                | Term::ElimAnd { .. }
                | Term::ElimOr { .. }
                | Term::ElimSup { .. }
                | Term::ElimSupPar { .. }
        )
    }

    pub fn is_closed(&self) -> bool {
        free_vars(self).is_empty()
    }
}

/// Number of term constructors in `t`.
pub fn term_size(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Star => 1,
        Term::Par(a, b) | Term::Sum(a, b) => 1 + term_size(&a.body) + term_size(&b.body),
        Term::ElimBot { scrutinee, .. } => 1 + term_size(scrutinee),
        Term::Lam { body, .. } => 1 + term_size(body),
        Term::App(a, b) | Term::Pair(a, b) => 1 + term_size(a) + term_size(b),
        Term::ElimAnd { scrutinee, body, .. } => 1 + term_size(scrutinee) + term_size(body),
        Term::Inl { body, .. } | Term::Inr { body, .. } => 1 + term_size(body),
        Term::ElimOr { scrutinee, left, right, .. }
        | Term::ElimSup { scrutinee, left, right, .. }
        | Term::ElimSupPar { scrutinee, left, right, .. } => {
            1 + term_size(scrutinee) + term_size(left) + term_size(right)
        }
    }
}

/// The set of variables with a free occurrence in `t`.
pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    fn go(t: &Term, bound: &mut Vec<Name>, acc: &mut BTreeSet<Name>) {
        match t {
            Term::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    acc.insert(x.clone());
                }
            }
            Term::Star => {}
            Term::Par(a, b) | Term::Sum(a, b) => {
                go(&a.body, bound, acc);
                go(&b.body, bound, acc);
            }
            Term::ElimBot { scrutinee, .. } => go(scrutinee, bound, acc),
            Term::Lam { binder, body, .. } => {
                bound.push(binder.clone());
                go(body, bound, acc);
                bound.pop();
            }
            Term::App(f, a) | Term::Pair(f, a) => {
                go(f, bound, acc);
                go(a, bound, acc);
            }
            Term::ElimAnd { scrutinee, x, y, body } => {
                go(scrutinee, bound, acc);
                bound.push(x.clone());
                bound.push(y.clone());
                go(body, bound, acc);
                bound.pop();
                bound.pop();
            }
            Term::Inl { body, .. } | Term::Inr { body, .. } => go(body, bound, acc),
            Term::ElimOr { scrutinee, x, left, y, right }
            | Term::ElimSup { scrutinee, x, left, y, right }
            | Term::ElimSupPar { scrutinee, x, left, y, right } => {
                go(scrutinee, bound, acc);
                bound.push(x.clone());
                go(left, bound, acc);
                bound.pop();
                bound.push(y.clone());
                go(right, bound, acc);
                bound.pop();
            }
        }
    }
    let mut acc = BTreeSet::new();
    go(t, &mut Vec::new(), &mut acc);
    acc
}

/// A name based on `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    let mut k: u64 = 1;
    loop {
        let candidate = format!("{stem}{k}");
        if !avoid.contains(&candidate) {
            return candidate;
        }
        k += 1;
    }
}

/// Simultaneous capture-avoiding substitution.
pub fn substitute(t: &Term, bindings: &HashMap<Name, Term>) -> Term {
    if bindings.is_empty() {
        return t.clone();
    }
    let mut range_fvs = BTreeSet::new();
    for v in bindings.values() {
        range_fvs.extend(free_vars(v));
    }
    subst_rec(t, bindings, &range_fvs)
}

/// Single substitution `(u/x)t`.
pub fn subst1(t: &Term, x: &str, u: &Term) -> Term {
    let mut m = HashMap::new();
    m.insert(x.to_string(), u.clone());
    substitute(t, &m)
}

fn subst_rec(t: &Term, sub: &HashMap<Name, Term>, range_fvs: &BTreeSet<Name>) -> Term {
    match t {
        Term::Var(x) => match sub.get(x) {
            Some(u) => u.clone(),
            None => t.clone(),
        },
        Term::Star => Term::Star,
        Term::Par(a, b) => Term::Par(
            Weighted::new(a.weight, subst_rec(&a.body, sub, range_fvs)),
            Weighted::new(b.weight, subst_rec(&b.body, sub, range_fvs)),
        ),
        Term::Sum(a, b) => Term::Sum(
            Weighted::new(a.weight, subst_rec(&a.body, sub, range_fvs)),
            Weighted::new(b.weight, subst_rec(&b.body, sub, range_fvs)),
        ),
        Term::ElimBot { scrutinee, target } => {
            Term::elim_bot(subst_rec(scrutinee, sub, range_fvs), target.clone())
        }
        Term::Lam { binder, domain, body } => {
            let (binder, body, sub) = rebind(binder, body, sub, range_fvs);
            Term::Lam {
                binder,
                domain: domain.clone(),
                body: Box::new(subst_rec(&body, &sub, range_fvs)),
            }
        }
        Term::App(f, a) => Term::app(subst_rec(f, sub, range_fvs), subst_rec(a, sub, range_fvs)),
        Term::Pair(a, b) => Term::pair(subst_rec(a, sub, range_fvs), subst_rec(b, sub, range_fvs)),
        Term::ElimAnd { scrutinee, x, y, body } => {
            let scrutinee = subst_rec(scrutinee, sub, range_fvs);
            let (x, body, sub_x) = rebind(x, body, sub, range_fvs);
            let (y, body, sub_y) = rebind(y, &body, &sub_x, range_fvs);
            Term::elim_and(scrutinee, x, y, subst_rec(&body, &sub_y, range_fvs))
        }
        Term::Inl { body, right } => Term::inl(subst_rec(body, sub, range_fvs), right.clone()),
        Term::Inr { body, left } => Term::inr(subst_rec(body, sub, range_fvs), left.clone()),
        Term::ElimOr { scrutinee, x, left, y, right } => {
            let scrutinee = subst_rec(scrutinee, sub, range_fvs);
            let (x, left, sub_x) = rebind(x, left, sub, range_fvs);
            let left = subst_rec(&left, &sub_x, range_fvs);
            let (y, right, sub_y) = rebind(y, right, sub, range_fvs);
            let right = subst_rec(&right, &sub_y, range_fvs);
            Term::elim_or(scrutinee, x, left, y, right)
        }
        Term::ElimSup { scrutinee, x, left, y, right } => {
            let scrutinee = subst_rec(scrutinee, sub, range_fvs);
            let (x, left, sub_x) = rebind(x, left, sub, range_fvs);
            let left = subst_rec(&left, &sub_x, range_fvs);
            let (y, right, sub_y) = rebind(y, right, sub, range_fvs);
            let right = subst_rec(&right, &sub_y, range_fvs);
            Term::elim_sup(scrutinee, x, left, y, right)
        }
        Term::ElimSupPar { scrutinee, x, left, y, right } => {
            let scrutinee = subst_rec(scrutinee, sub, range_fvs);
            let (x, left, sub_x) = rebind(x, left, sub, range_fvs);
            let left = subst_rec(&left, &sub_x, range_fvs);
            let (y, right, sub_y) = rebind(y, right, sub, range_fvs);
            let right = subst_rec(&right, &sub_y, range_fvs);
            Term::elim_sup_par(scrutinee, x, left, y, right)
        }
    }
}

/// Prepare to substitute under a binder: drop the shadowed binding and
/// rename the binder when it would capture a free variable of the range.
fn rebind(
    binder: &Name,
    body: &Term,
    sub: &HashMap<Name, Term>,
    range_fvs: &BTreeSet<Name>,
) -> (Name, Term, HashMap<Name, Term>) {
    let sub: HashMap<Name, Term> = sub
        .iter()
        .filter(|(k, _)| *k != binder)
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    // Capture is only possible when some remaining binding both applies under
    // this binder and mentions the binder free in its replacement.
    let capture_risk = !sub.is_empty()
        && range_fvs.contains(binder)
        && {
            let body_fvs = free_vars(body);
            sub.keys().any(|k| body_fvs.contains(k))
        };
    if !capture_risk {
        return (binder.clone(), body.clone(), sub);
    }
    let mut avoid: BTreeSet<Name> = range_fvs.clone();
    avoid.extend(free_vars(body));
    avoid.extend(sub.keys().cloned());
    avoid.insert(binder.clone());
    let fresh = fresh_name(binder, &avoid);
    let renamed = subst1(body, binder, &Term::var(fresh.clone()));
    (fresh, renamed, sub)
}

/// Equality up to consistent renaming of bound variables. Scalar weights and
/// proposition annotations are compared exactly.
pub fn alpha_eq(t: &Term, u: &Term) -> bool {
    fn go(t: &Term, u: &Term, lt: &mut Vec<Name>, lu: &mut Vec<Name>) -> bool {
        match (t, u) {
            (Term::Var(a), Term::Var(b)) => {
                let ia = lt.iter().rposition(|n| n == a);
                let ib = lu.iter().rposition(|n| n == b);
                match (ia, ib) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => a == b,
                    _ => false,
                }
            }
            (Term::Star, Term::Star) => true,
            (Term::Par(a1, b1), Term::Par(a2, b2)) | (Term::Sum(a1, b1), Term::Sum(a2, b2)) => {
                a1.weight == a2.weight
                    && b1.weight == b2.weight
                    && go(&a1.body, &a2.body, lt, lu)
                    && go(&b1.body, &b2.body, lt, lu)
            }
            (
                Term::ElimBot { scrutinee: s1, target: p1 },
                Term::ElimBot { scrutinee: s2, target: p2 },
            ) => p1 == p2 && go(s1, s2, lt, lu),
            (
                Term::Lam { binder: x1, domain: d1, body: b1 },
                Term::Lam { binder: x2, domain: d2, body: b2 },
            ) => {
                d1 == d2 && {
                    lt.push(x1.clone());
                    lu.push(x2.clone());
                    let r = go(b1, b2, lt, lu);
                    lt.pop();
                    lu.pop();
                    r
                }
            }
            (Term::App(f1, a1), Term::App(f2, a2)) | (Term::Pair(f1, a1), Term::Pair(f2, a2)) => {
                go(f1, f2, lt, lu) && go(a1, a2, lt, lu)
            }
            (
                Term::ElimAnd { scrutinee: s1, x: x1, y: y1, body: b1 },
                Term::ElimAnd { scrutinee: s2, x: x2, y: y2, body: b2 },
            ) => {
                go(s1, s2, lt, lu) && {
                    lt.push(x1.clone());
                    lt.push(y1.clone());
                    lu.push(x2.clone());
                    lu.push(y2.clone());
                    let r = go(b1, b2, lt, lu);
                    lt.pop();
                    lt.pop();
                    lu.pop();
                    lu.pop();
                    r
                }
            }
            (Term::Inl { body: b1, right: p1 }, Term::Inl { body: b2, right: p2 })
            | (Term::Inr { body: b1, left: p1 }, Term::Inr { body: b2, left: p2 }) => {
                p1 == p2 && go(b1, b2, lt, lu)
            }
            (
                Term::ElimOr { scrutinee: s1, x: x1, left: l1, y: y1, right: r1 },
                Term::ElimOr { scrutinee: s2, x: x2, left: l2, y: y2, right: r2 },
            )
            | (
                Term::ElimSup { scrutinee: s1, x: x1, left: l1, y: y1, right: r1 },
                Term::ElimSup { scrutinee: s2, x: x2, left: l2, y: y2, right: r2 },
            )
            | (
                Term::ElimSupPar { scrutinee: s1, x: x1, left: l1, y: y1, right: r1 },
                Term::ElimSupPar { scrutinee: s2, x: x2, left: l2, y: y2, right: r2 },
            ) => {
                go(s1, s2, lt, lu)
                    && {
                        lt.push(x1.clone());
                        lu.push(x2.clone());
                        let r = go(l1, l2, lt, lu);
                        lt.pop();
                        lu.pop();
                        r
                    }
                    && {
                        lt.push(y1.clone());
                        lu.push(y2.clone());
                        let r = go(r1, r2, lt, lu);
                        lt.pop();
                        lu.pop();
                        r
                    }
            }
            _ => false,
        }
    }
    go(t, u, &mut Vec::new(), &mut Vec::new())
}

/// Rename all binders to `v0`, `v1`, ... in traversal order. Two terms are
/// alpha-equivalent iff their canonical forms are structurally equal, which
/// makes canonical forms usable as map keys.
pub fn canonicalize(t: &Term) -> Term {
    fn next(counter: &mut usize) -> Name {
        let n = format!("v{}", *counter);
        *counter += 1;
        n
    }
    fn go(t: &Term, env: &mut Vec<(Name, Name)>, counter: &mut usize) -> Term {
        match t {
            Term::Var(x) => match env.iter().rev().find(|(old, _)| old == x) {
                Some((_, new)) => Term::Var(new.clone()),
                None => t.clone(),
            },
            Term::Star => Term::Star,
            Term::Par(a, b) => Term::Par(
                Weighted::new(a.weight, go(&a.body, env, counter)),
                Weighted::new(b.weight, go(&b.body, env, counter)),
            ),
            Term::Sum(a, b) => Term::Sum(
                Weighted::new(a.weight, go(&a.body, env, counter)),
                Weighted::new(b.weight, go(&b.body, env, counter)),
            ),
            Term::ElimBot { scrutinee, target } => {
                Term::elim_bot(go(scrutinee, env, counter), target.clone())
            }
            Term::Lam { binder, domain, body } => {
                let fresh = next(counter);
                env.push((binder.clone(), fresh.clone()));
                let body = go(body, env, counter);
                env.pop();
                Term::lam(fresh, domain.clone(), body)
            }
            Term::App(f, a) => Term::app(go(f, env, counter), go(a, env, counter)),
            Term::Pair(a, b) => Term::pair(go(a, env, counter), go(b, env, counter)),
            Term::ElimAnd { scrutinee, x, y, body } => {
                let scrutinee = go(scrutinee, env, counter);
                let fx = next(counter);
                let fy = next(counter);
                env.push((x.clone(), fx.clone()));
                env.push((y.clone(), fy.clone()));
                let body = go(body, env, counter);
                env.pop();
                env.pop();
                Term::elim_and(scrutinee, fx, fy, body)
            }
            Term::Inl { body, right } => Term::inl(go(body, env, counter), right.clone()),
            Term::Inr { body, left } => Term::inr(go(body, env, counter), left.clone()),
            Term::ElimOr { scrutinee, x, left, y, right } => {
                let (s, fx, l, fy, r) = canon_branches(scrutinee, x, left, y, right, env, counter);
                Term::elim_or(s, fx, l, fy, r)
            }
            Term::ElimSup { scrutinee, x, left, y, right } => {
                let (s, fx, l, fy, r) = canon_branches(scrutinee, x, left, y, right, env, counter);
                Term::elim_sup(s, fx, l, fy, r)
            }
            Term::ElimSupPar { scrutinee, x, left, y, right } => {
                let (s, fx, l, fy, r) = canon_branches(scrutinee, x, left, y, right, env, counter);
                Term::elim_sup_par(s, fx, l, fy, r)
            }
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn canon_branches(
        scrutinee: &Term,
        x: &Name,
        left: &Term,
        y: &Name,
        right: &Term,
        env: &mut Vec<(Name, Name)>,
        counter: &mut usize,
    ) -> (Term, Name, Term, Name, Term) {
        let s = go(scrutinee, env, counter);
        let fx = next(counter);
        env.push((x.clone(), fx.clone()));
        let l = go(left, env, counter);
        env.pop();
        let fy = next(counter);
        env.push((y.clone(), fy.clone()));
        let r = go(right, env, counter);
        env.pop();
        (s, fx, l, fy, r)
    }
    go(t, &mut Vec::new(), &mut 0)
}
