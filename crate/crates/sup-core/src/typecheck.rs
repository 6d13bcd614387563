//! Syntax-directed type inference for the calculus, weights ignored.

use std::fmt;

use crate::syntax::{Name, Prop, Term};

/// Ordered variable-to-proposition bindings. Lookup returns the most recent
/// binding, so internally shadowed terms (which the surface parser never
/// produces) still check correctly.
#[derive(Debug, Clone, Default)]
pub struct Context {
    bindings: Vec<(Name, Prop)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn lookup(&self, name: &str) -> Option<&Prop> {
        self.bindings.iter().rev().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn extended(&self, name: Name, prop: Prop) -> Context {
        let mut bindings = self.bindings.clone();
        bindings.push((name, prop));
        Context { bindings }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

/// Path from the root of a term to a subterm, as child ordinals.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeErrorKind {
    UnboundVariable,
    Mismatch,
    NotAFunction,
    NotAPair,
    NotASum,
    NotAnOr,
    BranchDisagree,
}

/// A typing failure pinpointing one subterm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub location: Path,
    pub expected: Option<Prop>,
    pub found: Option<Prop>,
}

impl TypeError {
    fn here(kind: TypeErrorKind, expected: Option<Prop>, found: Option<Prop>) -> TypeError {
        TypeError { kind, location: Vec::new(), expected, found }
    }

    fn under(mut self, child: usize) -> TypeError {
        self.location.insert(0, child);
        self
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            TypeErrorKind::UnboundVariable => "unbound variable",
            TypeErrorKind::Mismatch => "type mismatch",
            TypeErrorKind::NotAFunction => "not a function",
            TypeErrorKind::NotAPair => "not a pair",
            TypeErrorKind::NotASum => "scrutinee is not a superposition",
            TypeErrorKind::NotAnOr => "scrutinee is not a disjunction",
            TypeErrorKind::BranchDisagree => "branch types disagree",
        };
        write!(f, "{what} at {:?}", self.location)?;
        if let Some(e) = &self.expected {
            write!(f, ", expected {e:?}")?;
        }
        if let Some(g) = &self.found {
            write!(f, ", found {g:?}")?;
        }
        Ok(())
    }
}

impl std::error::Error for TypeError {}

/// Infer the unique proposition proved by `t` in `ctx`.
pub fn infer(ctx: &Context, t: &Term) -> Result<Prop, TypeError> {
    match t {
        Term::Var(x) => ctx
            .lookup(x)
            .cloned()
            .ok_or_else(|| TypeError::here(TypeErrorKind::UnboundVariable, None, None)),
        Term::Star => Ok(Prop::Top),
        Term::Par(a, b) => {
            // Weights are irrelevant for typing; both children must agree.
            let ta = infer(ctx, &a.body).map_err(|e| e.under(0))?;
            let tb = infer(ctx, &b.body).map_err(|e| e.under(1))?;
            if ta != tb {
                return Err(TypeError::here(TypeErrorKind::Mismatch, Some(ta), Some(tb)).under(1));
            }
            Ok(ta)
        }
        Term::Sum(a, b) => {
            let ta = infer(ctx, &a.body).map_err(|e| e.under(0))?;
            let tb = infer(ctx, &b.body).map_err(|e| e.under(1))?;
            Ok(Prop::sup(ta, tb))
        }
        Term::ElimBot { scrutinee, target } => {
            let ts = infer(ctx, scrutinee).map_err(|e| e.under(0))?;
            if ts != Prop::Bottom {
                return Err(
                    TypeError::here(TypeErrorKind::Mismatch, Some(Prop::Bottom), Some(ts)).under(0)
                );
            }
            Ok(target.clone())
        }
        Term::Lam { binder, domain, body } => {
            let tb = infer(&ctx.extended(binder.clone(), domain.clone()), body)
                .map_err(|e| e.under(0))?;
            Ok(Prop::implies(domain.clone(), tb))
        }
        Term::App(fun, arg) => {
            let tf = infer(ctx, fun).map_err(|e| e.under(0))?;
            let (dom, cod) = match tf {
                Prop::Implies(dom, cod) => (*dom, *cod),
                other => {
                    return Err(
                        TypeError::here(TypeErrorKind::NotAFunction, None, Some(other)).under(0)
                    )
                }
            };
            let ta = infer(ctx, arg).map_err(|e| e.under(1))?;
            if ta != dom {
                return Err(TypeError::here(TypeErrorKind::Mismatch, Some(dom), Some(ta)).under(1));
            }
            Ok(cod)
        }
        Term::Pair(a, b) => {
            let ta = infer(ctx, a).map_err(|e| e.under(0))?;
            let tb = infer(ctx, b).map_err(|e| e.under(1))?;
            Ok(Prop::and(ta, tb))
        }
        Term::ElimAnd { scrutinee, x, y, body } => {
            let ts = infer(ctx, scrutinee).map_err(|e| e.under(0))?;
            let (ta, tb) = match ts {
                Prop::And(a, b) => (*a, *b),
                other => {
                    return Err(TypeError::here(TypeErrorKind::NotAPair, None, Some(other)).under(0))
                }
            };
            let ctx2 = ctx.extended(x.clone(), ta).extended(y.clone(), tb);
            infer(&ctx2, body).map_err(|e| e.under(1))
        }
        Term::Inl { body, right } => {
            let ta = infer(ctx, body).map_err(|e| e.under(0))?;
            Ok(Prop::or(ta, right.clone()))
        }
        Term::Inr { body, left } => {
            let tb = infer(ctx, body).map_err(|e| e.under(0))?;
            Ok(Prop::or(left.clone(), tb))
        }
        Term::ElimOr { scrutinee, x, left, y, right } => {
            let ts = infer(ctx, scrutinee).map_err(|e| e.under(0))?;
            let (ta, tb) = match ts {
                Prop::Or(a, b) => (*a, *b),
                other => {
                    return Err(TypeError::here(TypeErrorKind::NotAnOr, None, Some(other)).under(0))
                }
            };
            branches(ctx, (x, ta, left), (y, tb, right))
        }
        Term::ElimSup { scrutinee, x, left, y, right }
        | Term::ElimSupPar { scrutinee, x, left, y, right } => {
            let ts = infer(ctx, scrutinee).map_err(|e| e.under(0))?;
            let (ta, tb) = match ts {
                Prop::Sup(a, b) => (*a, *b),
                other => {
                    return Err(TypeError::here(TypeErrorKind::NotASum, None, Some(other)).under(0))
                }
            };
            branches(ctx, (x, ta, left), (y, tb, right))
        }
    }
}

fn branches(
    ctx: &Context,
    (x, ta, left): (&Name, Prop, &Term),
    (y, tb, right): (&Name, Prop, &Term),
) -> Result<Prop, TypeError> {
    let tl = infer(&ctx.extended(x.clone(), ta), left).map_err(|e| e.under(1))?;
    let tr = infer(&ctx.extended(y.clone(), tb), right).map_err(|e| e.under(2))?;
    if tl != tr {
        return Err(TypeError::here(TypeErrorKind::BranchDisagree, Some(tl), Some(tr)).under(2));
    }
    Ok(tl)
}

/// Check that `t` proves exactly `expected`.
pub fn check(ctx: &Context, t: &Term, expected: &Prop) -> Result<(), TypeError> {
    let found = infer(ctx, t)?;
    if &found == expected {
        Ok(())
    } else {
        Err(TypeError::here(TypeErrorKind::Mismatch, Some(expected.clone()), Some(found)))
    }
}
