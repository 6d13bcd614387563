//! The typed-term generator: soundness (each output typechecks at the
//! requested type) and constructor coverage.

use std::collections::BTreeSet;
use std::mem::discriminant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sup_core::reduction::Mode;
use sup_core::syntax::{Prop, Term};
use sup_core::typecheck::{infer, Context};
use sup_oracle::gen_typed_term;

fn constructor_names(t: &Term, seen: &mut BTreeSet<&'static str>) {
    let name = match t {
        Term::Var(_) => "var",
        Term::Par(_, _) => "par",
        Term::Star => "star",
        Term::ElimBot { .. } => "elim_bot",
        Term::Lam { .. } => "lam",
        Term::App(_, _) => "app",
        Term::Pair(_, _) => "pair",
        Term::ElimAnd { .. } => "elim_and",
        Term::Inl { .. } => "inl",
        Term::Inr { .. } => "inr",
        Term::ElimOr { .. } => "elim_or",
        Term::Sum(_, _) => "sum",
        Term::ElimSup { .. } => "elim_sup",
        Term::ElimSupPar { .. } => "elim_sup_par",
    };
    seen.insert(name);
    match t {
        Term::Var(_) | Term::Star => {}
        Term::Par(a, b) | Term::Sum(a, b) => {
            constructor_names(&a.body, seen);
            constructor_names(&b.body, seen);
        }
        Term::ElimBot { scrutinee, .. } => constructor_names(scrutinee, seen),
        Term::Lam { body, .. } => constructor_names(body, seen),
        Term::App(a, b) | Term::Pair(a, b) => {
            constructor_names(a, seen);
            constructor_names(b, seen);
        }
        Term::ElimAnd { scrutinee, body, .. } => {
            constructor_names(scrutinee, seen);
            constructor_names(body, seen);
        }
        Term::Inl { body, .. } | Term::Inr { body, .. } => constructor_names(body, seen),
        Term::ElimOr { scrutinee, left, right, .. }
        | Term::ElimSup { scrutinee, left, right, .. }
        | Term::ElimSupPar { scrutinee, left, right, .. } => {
            constructor_names(scrutinee, seen);
            constructor_names(left, seen);
            constructor_names(right, seen);
        }
    }
}

#[test]
fn generated_terms_are_closed_and_well_typed() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let ctx = Context::new();
    for i in 0..2000 {
        let t = gen_typed_term(&mut rng, 5, None, Mode::Scalar).expect("generation");
        assert!(t.is_closed(), "draw {i} is not closed: {t:?}");
        assert!(infer(&ctx, &t).is_ok(), "draw {i} does not typecheck: {t:?}");
    }
}

#[test]
fn generator_respects_target_types() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let ctx = Context::new();
    let targets = [
        Prop::Top,
        Prop::or(Prop::Top, Prop::Top),
        Prop::sup(Prop::Top, Prop::Top),
        Prop::implies(Prop::Top, Prop::Top),
        Prop::and(Prop::Top, Prop::sup(Prop::Top, Prop::Top)),
    ];
    for target in &targets {
        for _ in 0..50 {
            let t = gen_typed_term(&mut rng, 5, Some(target), Mode::Plain).expect("generation");
            assert_eq!(infer(&ctx, &t).as_ref(), Ok(target));
        }
    }
}

#[test]
fn top_at_depth_one_is_star() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let t = gen_typed_term(&mut rng, 1, Some(&Prop::Top), Mode::Plain).unwrap();
    assert_eq!(t, Term::Star);
}

#[test]
fn bottom_in_empty_context_fails() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    assert!(gen_typed_term(&mut rng, 4, Some(&Prop::Bottom), Mode::Plain).is_err());
}

#[test]
fn every_constructor_appears_within_ten_thousand_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut seen = BTreeSet::new();
    for _ in 0..10_000 {
        if seen.len() == 14 {
            break;
        }
        let t = gen_typed_term(&mut rng, 6, None, Mode::Scalar).expect("generation");
        constructor_names(&t, &mut seen);
    }
    let all: BTreeSet<&'static str> = [
        "var",
        "par",
        "star",
        "elim_bot",
        "lam",
        "app",
        "pair",
        "elim_and",
        "inl",
        "inr",
        "elim_or",
        "sum",
        "elim_sup",
        "elim_sup_par",
    ]
    .into_iter()
    .collect();
    assert_eq!(seen, all, "missing constructors after 10000 draws");
    // Term has exactly 14 constructors; keep the count in sync.
    let _ = discriminant(&Term::Star);
}
