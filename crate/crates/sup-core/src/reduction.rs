//! The rewrite engine: rule tables for both calculi, redex enumeration,
//! strategies, Born probabilities, seeded sampling and exact enumeration.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::scalar::Scalar;
use crate::syntax::{alpha_eq, canonicalize, fresh_name, subst1, Term, Weighted};
use crate::typecheck::Path;

/// Which rule table drives reduction. In plain mode every weight is the unit
/// scalar and the idempotence rule works on terms; in scalar mode it works on
/// weighted proofs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Plain,
    Scalar,
}

/// Redex filtering. `Quantum` defers sup-eliminations until their scrutinee
/// is closed and irreducible so that branch probabilities are defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    AnyRedex,
    Quantum,
}

/// How a sup-elimination choice point is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nondet {
    Sample,
    EnumerateAll,
    ForceLeft,
    ForceRight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub mode: Mode,
    pub strategy: Strategy,
    pub nondet: Nondet,
    pub ultra: bool,
    pub max_steps: usize,
}

pub const DEFAULT_MAX_STEPS: usize = 100_000;

impl Config {
    pub fn plain() -> Config {
        Config {
            mode: Mode::Plain,
            strategy: Strategy::AnyRedex,
            nondet: Nondet::Sample,
            ultra: false,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }

    pub fn scalar() -> Config {
        Config { mode: Mode::Scalar, ..Config::plain() }
    }

    /// Scalar mode with the measurement strategy of the quantum fragment.
    pub fn quantum() -> Config {
        Config { strategy: Strategy::Quantum, ..Config::scalar() }
    }

    pub fn with_nondet(self, nondet: Nondet) -> Config {
        Config { nondet, ..self }
    }

    pub fn with_ultra(self, ultra: bool) -> Config {
        Config { ultra, ..self }
    }

    pub fn validate(&self) -> Result<(), ReduceError> {
        if self.strategy == Strategy::Quantum && self.mode != Mode::Scalar {
            return Err(ReduceError::InvalidConfig("the quantum strategy requires scalar mode"));
        }
        Ok(())
    }
}

/// Identifies one rewrite rule of the active table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    Beta,
    ElimAndPair,
    ElimOrInl,
    ElimOrInr,
    ElimSupLeft,
    ElimSupRight,
    ElimSupPar,
    ParLam,
    ParPair,
    ParElimOr,
    ParSum,
    /// Plain: `t || t -> t` on terms. Scalar: `a.(b.t || c.t) -> (a(b+c)).t`
    /// on weighted proofs, so its position addresses a `+`/`||` slot.
    ParIdem,
    UltraLeft,
    UltraRight,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RuleId::Beta => "beta",
            RuleId::ElimAndPair => "and",
            RuleId::ElimOrInl => "or-inl",
            RuleId::ElimOrInr => "or-inr",
            RuleId::ElimSupLeft => "sup-left",
            RuleId::ElimSupRight => "sup-right",
            RuleId::ElimSupPar => "sup-par",
            RuleId::ParLam => "par-lam",
            RuleId::ParPair => "par-pair",
            RuleId::ParElimOr => "par-case-or",
            RuleId::ParSum => "par-sum",
            RuleId::ParIdem => "par-idem",
            RuleId::UltraLeft => "ultra-left",
            RuleId::UltraRight => "ultra-right",
        };
        f.write_str(s)
    }
}

/// One applicable rewrite. Probabilities are present only on the two
/// alternatives of a sup-elimination whose scrutinee is closed and
/// irreducible; the pair sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Redex {
    pub position: Path,
    pub rule: RuleId,
    pub probability: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReduceError {
    #[error("step limit exceeded")]
    StepLimitExceeded,
    #[error("reduction graph exceeded the node budget")]
    GraphBudgetExceeded,
    #[error("sup-elimination at {0:?} has no defined probability (scrutinee open or reducible); enumeration refuses this configuration")]
    UndefinedProbability(Path),
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("branch probabilities need a sum scrutinee")]
pub struct NotASum;

/// Born weights for the two reducts of a sup-elimination on a closed
/// irreducible sum. Qubit-shaped sums use `|a|^2 / (|a|^2+|b|^2)`,
/// 2-qubit-shaped sums the per-half squared-norm totals; anything else,
/// including all-zero amplitudes, splits evenly.
pub fn branch_probabilities(scrutinee: &Term) -> Result<(f64, f64), NotASum> {
    let Term::Sum(a, b) = scrutinee else {
        return Err(NotASum);
    };
    let qubit_shaped = matches!((&*a.body, &*b.body), (Term::Star, Term::Star));
    if qubit_shaped {
        return Ok(normalized(a.weight.norm_squared(), b.weight.norm_squared()));
    }
    if a.weight.is_one() && b.weight.is_one() {
        if let (Some((c, d)), Some((e, f))) = (star_sum(&a.body), star_sum(&b.body)) {
            return Ok(normalized(
                c.norm_squared() + d.norm_squared(),
                e.norm_squared() + f.norm_squared(),
            ));
        }
    }
    Ok((0.5, 0.5))
}

fn star_sum(t: &Term) -> Option<(Scalar, Scalar)> {
    match t {
        Term::Sum(a, b) if matches!((&*a.body, &*b.body), (Term::Star, Term::Star)) => {
            Some((a.weight, b.weight))
        }
        _ => None,
    }
}

fn normalized(pa: f64, pb: f64) -> (f64, f64) {
    let total = pa + pb;
    if total == 0.0 {
        (0.5, 0.5)
    } else {
        (pa / total, pb / total)
    }
}

/// All positions where a rule of the active table applies, in preorder, with
/// rule order as the tie-break at one position. The head of the list is the
/// redex a leftmost-outermost strategy contracts.
pub fn find_redexes(t: &Term, cfg: &Config) -> Vec<Redex> {
    let mut out = Vec::new();
    walk(t, cfg, &mut Vec::new(), &mut out);
    out
}

/// No redex anywhere, under the full (unrestricted) relation for the mode.
pub fn is_irreducible(t: &Term, mode: Mode) -> bool {
    let cfg = Config {
        mode,
        strategy: Strategy::AnyRedex,
        nondet: Nondet::Sample,
        ultra: false,
        max_steps: DEFAULT_MAX_STEPS,
    };
    find_redexes(t, &cfg).is_empty()
}

fn walk(t: &Term, cfg: &Config, path: &mut Path, out: &mut Vec<Redex>) {
    rules_at_node(t, cfg, path, out);
    match t {
        Term::Var(_) | Term::Star => {}
        Term::Par(a, b) | Term::Sum(a, b) => {
            for (i, w) in [a, b].into_iter().enumerate() {
                path.push(i);
                if cfg.mode == Mode::Scalar {
                    if let Some(()) = weighted_idem(w) {
                        // The slot encloses its body, so this precedes any
                        // redex found inside the body at the same path.
                        out.push(Redex { position: path.clone(), rule: RuleId::ParIdem, probability: None });
                    }
                }
                walk(&w.body, cfg, path, out);
                path.pop();
            }
        }
        Term::ElimBot { scrutinee, .. } => child(scrutinee, 0, cfg, path, out),
        Term::Lam { body, .. } => child(body, 0, cfg, path, out),
        Term::App(f, a) => {
            child(f, 0, cfg, path, out);
            child(a, 1, cfg, path, out);
        }
        Term::Pair(a, b) => {
            child(a, 0, cfg, path, out);
            child(b, 1, cfg, path, out);
        }
        Term::ElimAnd { scrutinee, body, .. } => {
            child(scrutinee, 0, cfg, path, out);
            child(body, 1, cfg, path, out);
        }
        Term::Inl { body, .. } | Term::Inr { body, .. } => child(body, 0, cfg, path, out),
        Term::ElimOr { scrutinee, left, right, .. }
        | Term::ElimSup { scrutinee, left, right, .. }
        | Term::ElimSupPar { scrutinee, left, right, .. } => {
            child(scrutinee, 0, cfg, path, out);
            child(left, 1, cfg, path, out);
            child(right, 2, cfg, path, out);
        }
    }
}

fn child(t: &Term, i: usize, cfg: &Config, path: &mut Path, out: &mut Vec<Redex>) {
    path.push(i);
    walk(t, cfg, path, out);
    path.pop();
}

fn weighted_idem(w: &Weighted) -> Option<()> {
    match &*w.body {
        Term::Par(b, c) if alpha_eq(&b.body, &c.body) => Some(()),
        _ => None,
    }
}

fn rules_at_node(t: &Term, cfg: &Config, path: &Path, out: &mut Vec<Redex>) {
    let mut push = |rule: RuleId, probability: Option<f64>| {
        out.push(Redex { position: path.clone(), rule, probability });
    };
    match t {
        Term::App(f, _) if matches!(**f, Term::Lam { .. }) => push(RuleId::Beta, None),
        Term::ElimAnd { scrutinee, .. } if matches!(**scrutinee, Term::Pair(_, _)) => {
            push(RuleId::ElimAndPair, None)
        }
        Term::ElimOr { scrutinee, .. } => match &**scrutinee {
            Term::Inl { .. } => push(RuleId::ElimOrInl, None),
            Term::Inr { .. } => push(RuleId::ElimOrInr, None),
            Term::Par(_, _) => push(RuleId::ParElimOr, None),
            _ => {}
        },
        Term::ElimSup { scrutinee, .. } if matches!(**scrutinee, Term::Sum(_, _)) => {
            if let Some(prob) = sup_probabilities(scrutinee, cfg) {
                push(RuleId::ElimSupLeft, prob.map(|p| p.0));
                push(RuleId::ElimSupRight, prob.map(|p| p.1));
            }
        }
        Term::ElimSupPar { scrutinee, .. } if matches!(**scrutinee, Term::Sum(_, _)) => {
            if sup_allowed(scrutinee, cfg) {
                push(RuleId::ElimSupPar, None);
            }
        }
        Term::Par(a, b) => {
            match (&*a.body, &*b.body) {
                (Term::Lam { domain: d1, .. }, Term::Lam { domain: d2, .. }) if d1 == d2 => {
                    push(RuleId::ParLam, None)
                }
                (Term::Pair(_, _), Term::Pair(_, _)) => push(RuleId::ParPair, None),
                (Term::Sum(_, _), Term::Sum(_, _)) => push(RuleId::ParSum, None),
                _ => {}
            }
            if cfg.mode == Mode::Plain && a.weight == b.weight && alpha_eq(&a.body, &b.body) {
                push(RuleId::ParIdem, None);
            }
            if cfg.ultra {
                push(RuleId::UltraLeft, None);
                push(RuleId::UltraRight, None);
            }
        }
        _ => {}
    }
}

/// Whether a sup-elimination at this scrutinee may fire, and with which
/// probabilities. Under the quantum strategy the scrutinee must be closed and
/// irreducible; under any-redex the redex always fires but carries
/// probabilities only when they are defined.
fn sup_probabilities(scrutinee: &Term, cfg: &Config) -> Option<Option<(f64, f64)>> {
    let ready = scrutinee.is_closed() && is_irreducible(scrutinee, cfg.mode);
    match cfg.strategy {
        Strategy::Quantum if !ready => None,
        _ => Some(if ready { branch_probabilities(scrutinee).ok() } else { None }),
    }
}

fn sup_allowed(scrutinee: &Term, cfg: &Config) -> bool {
    cfg.strategy != Strategy::Quantum
        || (scrutinee.is_closed() && is_irreducible(scrutinee, cfg.mode))
}

/// Contract the redex `r`, previously produced by [`find_redexes`] on `t`
/// under the same configuration. Every other subterm is left untouched.
pub fn apply_rule(t: &Term, r: &Redex, cfg: &Config) -> Term {
    if r.rule == RuleId::ParIdem && cfg.mode == Mode::Scalar {
        let (slot, prefix) =
            r.position.split_last().expect("scalar par-idem rewrites a weighted slot");
        return map_term_at(t, prefix, &|parent| {
            let (a, b) = match parent {
                Term::Par(a, b) => (a, b),
                Term::Sum(a, b) => (a, b),
                other => panic!("par-idem slot parent must be + or ||, got {other:?}"),
            };
            let w = if *slot == 0 { a } else { b };
            let contracted = contract_weighted_idem(w);
            match parent {
                Term::Par(a, b) => {
                    if *slot == 0 {
                        Term::Par(contracted, b.clone())
                    } else {
                        Term::Par(a.clone(), contracted)
                    }
                }
                Term::Sum(a, b) => {
                    if *slot == 0 {
                        Term::Sum(contracted, b.clone())
                    } else {
                        Term::Sum(a.clone(), contracted)
                    }
                }
                _ => unreachable!(),
            }
        });
    }
    map_term_at(t, &r.position, &|node| contract(node, r.rule))
}

/// `a.(b.t || c.t) -> (a(b+c)).t`
fn contract_weighted_idem(w: &Weighted) -> Weighted {
    match &*w.body {
        Term::Par(b, c) => Weighted::new(w.weight * (b.weight + c.weight), (*b.body).clone()),
        other => panic!("weighted par-idem needs a || body, got {other:?}"),
    }
}

fn contract(t: &Term, rule: RuleId) -> Term {
    match (rule, t) {
        (RuleId::Beta, Term::App(f, arg)) => match &**f {
            Term::Lam { binder, body, .. } => subst1(body, binder, arg),
            other => panic!("beta needs a lambda, got {other:?}"),
        },
        (RuleId::ElimAndPair, Term::ElimAnd { scrutinee, x, y, body }) => match &**scrutinee {
            Term::Pair(t1, t2) => {
                let mut m = HashMap::new();
                m.insert(x.clone(), (**t1).clone());
                m.insert(y.clone(), (**t2).clone());
                crate::syntax::substitute(body, &m)
            }
            other => panic!("and-elimination needs a pair, got {other:?}"),
        },
        (RuleId::ElimOrInl, Term::ElimOr { scrutinee, x, left, .. }) => match &**scrutinee {
            Term::Inl { body, .. } => subst1(left, x, body),
            other => panic!("or-inl needs inl, got {other:?}"),
        },
        (RuleId::ElimOrInr, Term::ElimOr { scrutinee, y, right, .. }) => match &**scrutinee {
            Term::Inr { body, .. } => subst1(right, y, body),
            other => panic!("or-inr needs inr, got {other:?}"),
        },
        (RuleId::ElimSupLeft, Term::ElimSup { scrutinee, x, left, .. }) => match &**scrutinee {
            Term::Sum(a, _) => subst1(left, x, &a.body),
            other => panic!("sup-left needs a sum, got {other:?}"),
        },
        (RuleId::ElimSupRight, Term::ElimSup { scrutinee, y, right, .. }) => match &**scrutinee {
            Term::Sum(_, b) => subst1(right, y, &b.body),
            other => panic!("sup-right needs a sum, got {other:?}"),
        },
        (RuleId::ElimSupPar, Term::ElimSupPar { scrutinee, x, left, y, right }) => {
            match &**scrutinee {
                Term::Sum(a, b) => Term::Par(
                    Weighted::new(a.weight, subst1(left, x, &a.body)),
                    Weighted::new(b.weight, subst1(right, y, &b.body)),
                ),
                other => panic!("sup-par needs a sum, got {other:?}"),
            }
        }
        (RuleId::ParLam, Term::Par(a, b)) => match (&*a.body, &*b.body) {
            (
                Term::Lam { binder: x, domain, body: t1 },
                Term::Lam { binder: y, body: t2, .. },
            ) => {
                let (binder, t1, t2) = merge_binders(x, t1, y, t2);
                Term::lam(
                    binder,
                    domain.clone(),
                    Term::wpar(a.weight, t1, b.weight, t2),
                )
            }
            other => panic!("par-lam needs two lambdas, got {other:?}"),
        },
        (RuleId::ParPair, Term::Par(a, b)) => match (&*a.body, &*b.body) {
            (Term::Pair(t, u), Term::Pair(v, w)) => Term::pair(
                Term::wpar(a.weight, (**t).clone(), b.weight, (**v).clone()),
                Term::wpar(a.weight, (**u).clone(), b.weight, (**w).clone()),
            ),
            other => panic!("par-pair needs two pairs, got {other:?}"),
        },
        (RuleId::ParElimOr, Term::ElimOr { scrutinee, x, left, y, right }) => match &**scrutinee {
            Term::Par(a, b) => Term::Par(
                Weighted::new(
                    a.weight,
                    Term::elim_or(
                        (*a.body).clone(),
                        x.clone(),
                        (**left).clone(),
                        y.clone(),
                        (**right).clone(),
                    ),
                ),
                Weighted::new(
                    b.weight,
                    Term::elim_or(
                        (*b.body).clone(),
                        x.clone(),
                        (**left).clone(),
                        y.clone(),
                        (**right).clone(),
                    ),
                ),
            ),
            other => panic!("par-case-or needs a || scrutinee, got {other:?}"),
        },
        (RuleId::ParSum, Term::Par(a, b)) => match (&*a.body, &*b.body) {
            (Term::Sum(c, d), Term::Sum(e, f)) => Term::sum(
                Weighted::unit(Term::wpar(
                    a.weight * c.weight,
                    (*c.body).clone(),
                    b.weight * e.weight,
                    (*e.body).clone(),
                )),
                Weighted::unit(Term::wpar(
                    a.weight * d.weight,
                    (*d.body).clone(),
                    b.weight * f.weight,
                    (*f.body).clone(),
                )),
            ),
            other => panic!("par-sum needs two sums, got {other:?}"),
        },
        (RuleId::ParIdem, Term::Par(a, _)) => (*a.body).clone(),
        (RuleId::UltraLeft, Term::Par(a, _)) => (*a.body).clone(),
        (RuleId::UltraRight, Term::Par(_, b)) => (*b.body).clone(),
        (rule, t) => panic!("rule {rule:?} does not apply to {t:?}"),
    }
}

/// Put two lambda bodies under one binder, renaming as needed.
fn merge_binders(x: &str, t: &Term, y: &str, u: &Term) -> (String, Term, Term) {
    if x == y {
        return (x.to_string(), t.clone(), u.clone());
    }
    let fv_u = crate::syntax::free_vars(u);
    if !fv_u.contains(x) {
        return (x.to_string(), t.clone(), subst1(u, y, &Term::var(x)));
    }
    let mut avoid = fv_u;
    avoid.extend(crate::syntax::free_vars(t));
    avoid.insert(x.to_string());
    avoid.insert(y.to_string());
    let z = fresh_name(x, &avoid);
    (z.clone(), subst1(t, x, &Term::var(z.clone())), subst1(u, y, &Term::var(z)))
}

fn map_term_at(t: &Term, path: &[usize], f: &dyn Fn(&Term) -> Term) -> Term {
    let Some((&step, rest)) = path.split_first() else {
        return f(t);
    };
    match (t, step) {
        (Term::Par(a, b), 0) => {
            Term::Par(Weighted::new(a.weight, map_term_at(&a.body, rest, f)), b.clone())
        }
        (Term::Par(a, b), 1) => {
            Term::Par(a.clone(), Weighted::new(b.weight, map_term_at(&b.body, rest, f)))
        }
        (Term::Sum(a, b), 0) => {
            Term::Sum(Weighted::new(a.weight, map_term_at(&a.body, rest, f)), b.clone())
        }
        (Term::Sum(a, b), 1) => {
            Term::Sum(a.clone(), Weighted::new(b.weight, map_term_at(&b.body, rest, f)))
        }
        (Term::ElimBot { scrutinee, target }, 0) => {
            Term::elim_bot(map_term_at(scrutinee, rest, f), target.clone())
        }
        (Term::Lam { binder, domain, body }, 0) => {
            Term::lam(binder.clone(), domain.clone(), map_term_at(body, rest, f))
        }
        (Term::App(g, a), 0) => Term::app(map_term_at(g, rest, f), (**a).clone()),
        (Term::App(g, a), 1) => Term::app((**g).clone(), map_term_at(a, rest, f)),
        (Term::Pair(a, b), 0) => Term::pair(map_term_at(a, rest, f), (**b).clone()),
        (Term::Pair(a, b), 1) => Term::pair((**a).clone(), map_term_at(b, rest, f)),
        (Term::ElimAnd { scrutinee, x, y, body }, 0) => Term::elim_and(
            map_term_at(scrutinee, rest, f),
            x.clone(),
            y.clone(),
            (**body).clone(),
        ),
        (Term::ElimAnd { scrutinee, x, y, body }, 1) => Term::elim_and(
            (**scrutinee).clone(),
            x.clone(),
            y.clone(),
            map_term_at(body, rest, f),
        ),
        (Term::Inl { body, right }, 0) => Term::inl(map_term_at(body, rest, f), right.clone()),
        (Term::Inr { body, left }, 0) => Term::inr(map_term_at(body, rest, f), left.clone()),
        (Term::ElimOr { scrutinee, x, left, y, right }, i @ 0..=2) => {
            let (s, l, r) = map_branch(scrutinee, left, right, i, rest, f);
            Term::elim_or(s, x.clone(), l, y.clone(), r)
        }
        (Term::ElimSup { scrutinee, x, left, y, right }, i @ 0..=2) => {
            let (s, l, r) = map_branch(scrutinee, left, right, i, rest, f);
            Term::elim_sup(s, x.clone(), l, y.clone(), r)
        }
        (Term::ElimSupPar { scrutinee, x, left, y, right }, i @ 0..=2) => {
            let (s, l, r) = map_branch(scrutinee, left, right, i, rest, f);
            Term::elim_sup_par(s, x.clone(), l, y.clone(), r)
        }
        (t, step) => panic!("path step {step} does not exist in {t:?}"),
    }
}

fn map_branch(
    s: &Term,
    l: &Term,
    r: &Term,
    i: usize,
    rest: &[usize],
    f: &dyn Fn(&Term) -> Term,
) -> (Term, Term, Term) {
    match i {
        0 => (map_term_at(s, rest, f), l.clone(), r.clone()),
        1 => (s.clone(), map_term_at(l, rest, f), r.clone()),
        _ => (s.clone(), l.clone(), map_term_at(r, rest, f)),
    }
}

/// Repeatedly contract the leftmost-outermost redex until no rule applies.
/// Sup-elimination choice points are resolved by `cfg.nondet`: `ForceLeft`
/// and `ForceRight` pick a branch, `Sample` draws from the branch
/// probabilities (evenly when they are undefined).
pub fn normalize(t: &Term, cfg: &Config, rng: &mut impl Rng) -> Result<Term, ReduceError> {
    cfg.validate()?;
    if cfg.nondet == Nondet::EnumerateAll {
        return Err(ReduceError::InvalidConfig("normalize needs sample, left, or right policy"));
    }
    let mut current = t.clone();
    for _ in 0..cfg.max_steps {
        let redexes = find_redexes(&current, cfg);
        let Some(head) = redexes.first() else {
            return Ok(current);
        };
        let chosen = if head.rule == RuleId::ElimSupLeft {
            let right = &redexes[1];
            debug_assert_eq!(right.rule, RuleId::ElimSupRight);
            match cfg.nondet {
                Nondet::ForceLeft => head,
                Nondet::ForceRight => right,
                Nondet::Sample => {
                    let p_left = head.probability.filter(|p| p.is_finite()).unwrap_or(0.5);
                    if rng.random_bool(p_left.clamp(0.0, 1.0)) {
                        head
                    } else {
                        right
                    }
                }
                Nondet::EnumerateAll => unreachable!(),
            }
        } else {
            head
        };
        current = apply_rule(&current, chosen, cfg);
    }
    Err(ReduceError::StepLimitExceeded)
}

/// A finite probability distribution over normal forms, keyed up to alpha.
#[derive(Debug, Clone, Default)]
pub struct Distribution {
    entries: HashMap<Term, f64>,
}

impl Distribution {
    pub fn point(t: &Term) -> Distribution {
        let mut d = Distribution::default();
        d.add(t, 1.0);
        d
    }

    fn add(&mut self, t: &Term, mass: f64) {
        *self.entries.entry(canonicalize(t)).or_insert(0.0) += mass;
    }

    /// Probability of the alpha-class of `t` (zero when absent).
    pub fn probability(&self, t: &Term) -> f64 {
        self.entries.get(&canonicalize(t)).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, f64)> {
        self.entries.iter().map(|(t, p)| (t, *p))
    }

    /// Entries sorted by descending probability; ties broken by the debug
    /// rendering of the canonical term so the order is reproducible.
    pub fn sorted(&self) -> Vec<(&Term, f64)> {
        let mut v: Vec<(&Term, f64)> = self.iter().collect();
        v.sort_by(|(t1, p1), (t2, p2)| {
            p2.total_cmp(p1).then_with(|| format!("{t1:?}").cmp(&format!("{t2:?}")))
        });
        v
    }
}

/// Exhaustively explore the reduction tree of the strategy, splitting mass at
/// each sup-elimination choice point, and return the exact distribution over
/// normal forms. Zero-probability branches are pruned. A choice point with
/// undefined probabilities (possible only under `AnyRedex`) is refused.
pub fn enumerate(t: &Term, cfg: &Config) -> Result<Distribution, ReduceError> {
    cfg.validate()?;
    if cfg.nondet != Nondet::EnumerateAll {
        return Err(ReduceError::InvalidConfig("enumerate needs the enumerate-all policy"));
    }
    let mut dist = Distribution::default();
    enumerate_rec(t, cfg, 1.0, cfg.max_steps, &mut dist)?;
    Ok(dist)
}

fn enumerate_rec(
    t: &Term,
    cfg: &Config,
    mass: f64,
    steps_left: usize,
    dist: &mut Distribution,
) -> Result<(), ReduceError> {
    let redexes = find_redexes(t, cfg);
    let Some(head) = redexes.first() else {
        dist.add(t, mass);
        return Ok(());
    };
    if steps_left == 0 {
        return Err(ReduceError::StepLimitExceeded);
    }
    if head.rule == RuleId::ElimSupLeft {
        let right = &redexes[1];
        let (p_left, p_right) = match (head.probability, right.probability) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() => (a, b),
            _ => return Err(ReduceError::UndefinedProbability(head.position.clone())),
        };
        if p_left > 0.0 {
            let reduct = apply_rule(t, head, cfg);
            enumerate_rec(&reduct, cfg, mass * p_left, steps_left - 1, dist)?;
        }
        if p_right > 0.0 {
            let reduct = apply_rule(t, right, cfg);
            enumerate_rec(&reduct, cfg, mass * p_right, steps_left - 1, dist)?;
        }
        Ok(())
    } else {
        let reduct = apply_rule(t, head, cfg);
        enumerate_rec(&reduct, cfg, mass, steps_left - 1, dist)
    }
}
