//! Random closed well-typed terms, generated by running the typing rules
//! backwards. Used by the termination, subject-reduction and round-trip
//! suites.

use rand::seq::IndexedRandom;
use rand::Rng;

use sup_core::reduction::Mode;
use sup_core::scalar::Scalar;
use sup_core::syntax::{term_size, Prop, Term, Weighted};

/// No term of the requested type was found within the retry budget, e.g.
/// bottom in an empty context.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("could not generate a closed term of the requested type")]
pub struct GenerationFailed;

/// A random proposition of limited depth, biased toward small types.
pub fn random_prop(rng: &mut impl Rng, depth: usize) -> Prop {
    let leaf = depth == 0 || rng.random_bool(0.4);
    if leaf {
        if rng.random_bool(0.15) {
            Prop::Bottom
        } else {
            Prop::Top
        }
    } else {
        let a = random_prop(rng, depth - 1);
        let b = random_prop(rng, depth - 1);
        match rng.random_range(0..4) {
            0 => Prop::implies(a, b),
            1 => Prop::and(a, b),
            2 => Prop::or(a, b),
            _ => Prop::sup(a, b),
        }
    }
}

/// Generate a closed well-typed term of `target` (or of a random type).
/// Eliminations are favored near the root so the output has redexes.
pub fn gen_typed_term(
    rng: &mut impl Rng,
    max_depth: usize,
    target: Option<&Prop>,
    mode: Mode,
) -> Result<Term, GenerationFailed> {
    assert!(max_depth >= 1, "max_depth must be at least 1");
    // Full reduction graphs grow exponentially with the number of
    // independent redexes, so oversized draws are rejected and retried.
    let size_cap = 6 * max_depth;
    for _ in 0..64 {
        // With no requested type, draw a fresh goal per attempt: a random
        // proposition may be uninhabited (e.g. bottom).
        let goal = match target {
            Some(p) => p.clone(),
            None => random_prop(rng, 2),
        };
        let mut ctx = Vec::new();
        if let Some(t) = gen(rng, &mut ctx, &goal, max_depth, mode) {
            if term_size(&t) <= size_cap {
                return Ok(t);
            }
        }
    }
    Err(GenerationFailed)
}

type Ctx = Vec<(String, Prop)>;

fn weight(rng: &mut impl Rng, mode: Mode) -> Scalar {
    if mode == Mode::Plain {
        return Scalar::ONE;
    }
    let pool = [
        Scalar::ONE,
        Scalar::ZERO,
        Scalar::real(-1.0),
        Scalar::real(0.5),
        Scalar::I,
    ];
    *pool.choose(rng).expect("non-empty pool")
}

fn binder(ctx: &Ctx) -> String {
    format!("x{}", ctx.len())
}

/// A small proposition usable as the hidden type of an elimination.
fn small_prop(rng: &mut impl Rng, ctx: &Ctx) -> Prop {
    if !ctx.is_empty() && rng.random_bool(0.35) {
        return ctx[rng.random_range(0..ctx.len())].1.clone();
    }
    match rng.random_range(0..6) {
        0 | 1 => Prop::Top,
        2 => Prop::Bottom,
        3 => Prop::or(Prop::Top, Prop::Top),
        4 => Prop::and(Prop::Top, Prop::Top),
        _ => Prop::sup(Prop::Top, Prop::Top),
    }
}

fn gen(rng: &mut impl Rng, ctx: &mut Ctx, target: &Prop, depth: usize, mode: Mode) -> Option<Term> {
    if depth == 0 {
        return leaf(rng, ctx, target);
    }
    // Strategy weights; eliminations get likelier the more depth remains.
    let elim_weight = depth.min(4) as u32;
    let choices: [(u32, u8); 4] = [
        (3, 0), // variable
        (5, 1), // introduction
        (1, 2), // parallel
        (2 * elim_weight, 3), // elimination
    ];
    for _ in 0..12 {
        let total: u32 = choices.iter().map(|(w, _)| w).sum();
        let mut roll = rng.random_range(0..total);
        let mut kind = 0u8;
        for (w, k) in choices {
            if roll < w {
                kind = k;
                break;
            }
            roll -= w;
        }
        let t = match kind {
            0 => leaf(rng, ctx, target),
            1 => intro(rng, ctx, target, depth, mode),
            2 => {
                let a = Weighted::new(weight(rng, mode), gen(rng, ctx, target, depth - 1, mode)?);
                let b = Weighted::new(weight(rng, mode), gen(rng, ctx, target, depth - 1, mode)?);
                Some(Term::Par(a, b))
            }
            _ => elim(rng, ctx, target, depth, mode),
        };
        if t.is_some() {
            return t;
        }
    }
    None
}

fn leaf(rng: &mut impl Rng, ctx: &Ctx, target: &Prop) -> Option<Term> {
    let vars: Vec<&(String, Prop)> = ctx.iter().filter(|(_, p)| p == target).collect();
    if !vars.is_empty() && (*target != Prop::Top || rng.random_bool(0.5)) {
        let (name, _) = vars[rng.random_range(0..vars.len())];
        return Some(Term::var(name.clone()));
    }
    (*target == Prop::Top).then_some(Term::Star)
}

fn intro(
    rng: &mut impl Rng,
    ctx: &mut Ctx,
    target: &Prop,
    depth: usize,
    mode: Mode,
) -> Option<Term> {
    match target {
        Prop::Top => Some(Term::Star),
        Prop::Bottom => None,
        Prop::Implies(a, b) => {
            let name = binder(ctx);
            ctx.push((name.clone(), (**a).clone()));
            let body = gen(rng, ctx, b, depth - 1, mode);
            ctx.pop();
            Some(Term::lam(name, (**a).clone(), body?))
        }
        Prop::And(a, b) => Some(Term::pair(
            gen(rng, ctx, a, depth - 1, mode)?,
            gen(rng, ctx, b, depth - 1, mode)?,
        )),
        Prop::Or(a, b) => {
            if rng.random_bool(0.5) {
                Some(Term::inl(gen(rng, ctx, a, depth - 1, mode)?, (**b).clone()))
            } else {
                Some(Term::inr(gen(rng, ctx, b, depth - 1, mode)?, (**a).clone()))
            }
        }
        Prop::Sup(a, b) => {
            let wa = Weighted::new(weight(rng, mode), gen(rng, ctx, a, depth - 1, mode)?);
            let wb = Weighted::new(weight(rng, mode), gen(rng, ctx, b, depth - 1, mode)?);
            Some(Term::Sum(wa, wb))
        }
    }
}

fn elim(
    rng: &mut impl Rng,
    ctx: &mut Ctx,
    target: &Prop,
    depth: usize,
    mode: Mode,
) -> Option<Term> {
    match rng.random_range(0..6) {
        0 => {
            let a = small_prop(rng, ctx);
            let fun_ty = Prop::implies(a.clone(), target.clone());
            let fun = gen(rng, ctx, &fun_ty, depth - 1, mode)?;
            let arg = gen(rng, ctx, &a, depth - 1, mode)?;
            Some(Term::app(fun, arg))
        }
        1 => {
            let a = small_prop(rng, ctx);
            let b = small_prop(rng, ctx);
            let scrut = gen(rng, ctx, &Prop::and(a.clone(), b.clone()), depth - 1, mode)?;
            let x = binder(ctx);
            ctx.push((x.clone(), a));
            let y = binder(ctx);
            ctx.push((y.clone(), b));
            let body = gen(rng, ctx, target, depth - 1, mode);
            ctx.pop();
            ctx.pop();
            Some(Term::elim_and(scrut, x, y, body?))
        }
        2 => branching(rng, ctx, target, depth, mode, BranchKind::Or),
        3 => branching(rng, ctx, target, depth, mode, BranchKind::Sup),
        4 => branching(rng, ctx, target, depth, mode, BranchKind::SupPar),
        _ => {
            let scrut = gen(rng, ctx, &Prop::Bottom, depth - 1, mode)?;
            Some(Term::elim_bot(scrut, target.clone()))
        }
    }
}

enum BranchKind {
    Or,
    Sup,
    SupPar,
}

fn branching(
    rng: &mut impl Rng,
    ctx: &mut Ctx,
    target: &Prop,
    depth: usize,
    mode: Mode,
    kind: BranchKind,
) -> Option<Term> {
    let a = small_prop(rng, ctx);
    let b = small_prop(rng, ctx);
    let scrut_ty = match kind {
        BranchKind::Or => Prop::or(a.clone(), b.clone()),
        _ => Prop::sup(a.clone(), b.clone()),
    };
    let scrut = gen(rng, ctx, &scrut_ty, depth - 1, mode)?;
    let x = binder(ctx);
    ctx.push((x.clone(), a));
    let left = gen(rng, ctx, target, depth - 1, mode);
    ctx.pop();
    let left = left?;
    let y = binder(ctx);
    ctx.push((y.clone(), b));
    let right = gen(rng, ctx, target, depth - 1, mode);
    ctx.pop();
    let right = right?;
    Some(match kind {
        BranchKind::Or => Term::elim_or(scrut, x, left, y, right),
        BranchKind::Sup => Term::elim_sup(scrut, x, left, y, right),
        BranchKind::SupPar => Term::elim_sup_par(scrut, x, left, y, right),
    })
}
