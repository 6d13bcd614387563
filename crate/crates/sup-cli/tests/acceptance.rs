//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (visible with `cargo test --test acceptance --
//! --nocapture`).

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sup_core::graph::{reduction_graph, ReductionGraph};
use sup_core::parse::parse_term;
use sup_core::print::print_term;
use sup_core::reduction::{
    enumerate, find_redexes, normalize, Config, Mode, Nondet, RuleId,
};
use sup_core::scalar::Scalar;
use sup_core::stdlib::{
    app_q, app_q2, bit, bit2, deutsch, measure, measure_first, measure_pair, measure_pair_first,
    mk_matrix, mk_matrix4, mk_test, plus_minus, post_state, post_state_first, qubit, qubit2,
    qubits, u_oracle, xor, BoolFn, Matrix2, Matrix4,
};
use sup_core::syntax::{alpha_eq, Prop, Term};
use sup_core::typecheck::{infer, Context};
use sup_oracle::{
    amplitudes_of, chi_square, chi_square_p_value, gen_typed_term, mat_mul4, mat_vec2, mat_vec4,
    oracle_u_f, Amplitudes,
};

fn enumerate_quantum(t: &Term) -> sup_core::reduction::Distribution {
    let cfg = Config::quantum().with_nondet(Nondet::EnumerateAll);
    enumerate(t, &cfg).expect("enumeration")
}

fn normalize_quantum(t: &Term) -> Term {
    let cfg = Config::quantum().with_nondet(Nondet::ForceLeft);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    normalize(t, &cfg, &mut rng).expect("normalization")
}

fn norm_sq(s: Scalar) -> f64 {
    s.re * s.re + s.im * s.im
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// A random complex amplitude bounded away from zero modulus.
fn random_amplitude(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = random_scalar(rng);
        if norm_sq(s) > 0.0625 {
            return s;
        }
    }
}

// ---------------------------------------------------------------- 1

#[test]
fn criterion_01_deutsch_distributions() {
    for f in BoolFn::ALL {
        let start = Instant::now();
        let dist = enumerate_quantum(&Term::app(deutsch(), f.term()));
        let elapsed = start.elapsed();
        let expected_mass = if f.is_constant() {
            dist.probability(&bit(false))
        } else {
            dist.probability(&bit(true))
        };
        let stray_mass = if f.is_constant() {
            dist.probability(&bit(true))
        } else {
            dist.probability(&bit(false))
        };
        assert_eq!(dist.len(), 1, "{}: {dist:?}", f.name());
        assert_eq!(expected_mass, 1.0, "{}", f.name());
        assert!(stray_mass < 1e-12, "{}: stray mass {stray_mass}", f.name());
        assert!(elapsed < Duration::from_secs(1), "{}: took {elapsed:?}", f.name());
    }
    println!("PASS criterion 1: deutsch is a point mass on false/true for all four oracles, < 1 s each");
}

// ---------------------------------------------------------------- 2

#[test]
fn criterion_02_deutsch_premeasurement_state() {
    let half = Scalar::real(0.5);
    let neg_half = Scalar::real(-0.5);
    let input = [half, neg_half, half, neg_half];
    let mut worst = 0.0f64;
    for f in BoolFn::ALL {
        let apply_uf = Term::apps(
            app_q2(),
            [Term::app(u_oracle(), f.term()), plus_minus()],
        );
        let state = Term::apps(app_q2(), [mk_matrix4(&Matrix4::h_tensor_i()), apply_uf]);
        let nf = normalize_quantum(&state);
        let got = amplitudes_of(&nf).expect("canonical 2-qubit");
        let want = mat_vec4(&mat_mul4(&Matrix4::h_tensor_i(), &oracle_u_f(|x| f.apply(x))), &input);
        let diff = got.max_abs_diff(&want);
        assert!(diff < 1e-9, "{}: engine {got:?} oracle {want:?}", f.name());
        worst = worst.max(diff);
    }
    println!("PASS criterion 2: pre-measurement states match the 4x4 oracle, max |diff| = {worst:.3e}");
}

// ---------------------------------------------------------------- 3

#[test]
fn criterion_03_matrix_application_against_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = Matrix2 {
            m: [
                [random_scalar(&mut rng), random_scalar(&mut rng)],
                [random_scalar(&mut rng), random_scalar(&mut rng)],
            ],
        };
        let v = [random_scalar(&mut rng), random_scalar(&mut rng)];
        let term = Term::apps(app_q(), [mk_matrix(&m), qubit(v[0], v[1])]);
        let got = amplitudes_of(&normalize_quantum(&term)).expect("qubit");
        let diff = got.max_abs_diff(&mat_vec2(&m, &v));
        assert!(diff < 1e-9);
        worst = worst.max(diff);
    }
    for _ in 0..100 {
        let mut m = [[Scalar::ZERO; 4]; 4];
        for row in m.iter_mut() {
            for cell in row.iter_mut() {
                *cell = random_scalar(&mut rng);
            }
        }
        let m = Matrix4 { m };
        let v = [
            random_scalar(&mut rng),
            random_scalar(&mut rng),
            random_scalar(&mut rng),
            random_scalar(&mut rng),
        ];
        let term = Term::apps(app_q2(), [mk_matrix4(&m), qubit2(v[0], v[1], v[2], v[3])]);
        let got = amplitudes_of(&normalize_quantum(&term)).expect("2-qubit");
        assert!(matches!(got, Amplitudes::Four(_)));
        let diff = got.max_abs_diff(&mat_vec4(&m, &v));
        assert!(diff < 1e-9);
        worst = worst.max(diff);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    println!(
        "PASS criterion 3: 100 random 2x2 and 100 random 4x4 applications within 1e-9 (max {worst:.3e}) in {elapsed:?}"
    );
}

// ---------------------------------------------------------------- 4

#[test]
fn criterion_04_measurement_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let zero = Scalar::ZERO;
    let one = Scalar::ONE;
    for _ in 0..50 {
        let (a, b) = (random_amplitude(&mut rng), random_amplitude(&mut rng));
        let p_false = norm_sq(a) / (norm_sq(a) + norm_sq(b));
        let p_true = norm_sq(b) / (norm_sq(a) + norm_sq(b));

        let outcome = enumerate_quantum(&measure(qubit(a, b)));
        assert!((outcome.probability(&bit(false)) - p_false).abs() < 1e-12);
        assert!((outcome.probability(&bit(true)) - p_true).abs() < 1e-12);
        assert!((outcome.total() - 1.0).abs() < 1e-9);

        // Post-measurement states are exactly 1.* + 0.* and 0.* + 1.*.
        let post = enumerate_quantum(&post_state(qubit(a, b)));
        let down = Term::wsum(one, Term::Star, zero, Term::Star);
        let up = Term::wsum(zero, Term::Star, one, Term::Star);
        assert_eq!(post.len(), 2);
        assert!((post.probability(&down) - p_false).abs() < 1e-12);
        assert!((post.probability(&up) - p_true).abs() < 1e-12);

        let both = enumerate_quantum(&measure_pair(qubit(a, b)));
        assert!((both.probability(&Term::pair(bit(false), down)) - p_false).abs() < 1e-12);
        assert!((both.probability(&Term::pair(bit(true), up)) - p_true).abs() < 1e-12);
    }
    for _ in 0..50 {
        let amps: Vec<Scalar> = (0..4).map(|_| random_amplitude(&mut rng)).collect();
        let (a, b, c, d) = (amps[0], amps[1], amps[2], amps[3]);
        let total = norm_sq(a) + norm_sq(b) + norm_sq(c) + norm_sq(d);
        let p_false = (norm_sq(a) + norm_sq(b)) / total;
        let p_true = (norm_sq(c) + norm_sq(d)) / total;
        let q2 = qubit2(a, b, c, d);

        let outcome = enumerate_quantum(&measure_first(q2.clone()));
        assert!((outcome.probability(&bit(false)) - p_false).abs() < 1e-12);
        assert!((outcome.probability(&bit(true)) - p_true).abs() < 1e-12);
        assert!((outcome.total() - 1.0).abs() < 1e-9);

        let post = enumerate_quantum(&post_state_first(q2.clone()));
        let down = Term::sum1(qubit(a, b), qubit(zero, zero));
        let up = Term::sum1(qubit(zero, zero), qubit(c, d));
        assert!((post.probability(&down) - p_false).abs() < 1e-12);
        assert!((post.probability(&up) - p_true).abs() < 1e-12);

        let both = enumerate_quantum(&measure_pair_first(q2));
        assert!((both.probability(&Term::pair(bit(false), down)) - p_false).abs() < 1e-12);
        assert!((both.probability(&Term::pair(bit(true), up)) - p_true).abs() < 1e-12);
    }
    println!("PASS criterion 4: all six measurement operators reproduce the Born probabilities within 1e-12 on 50+50 random states");
}

// ---------------------------------------------------------------- 5

#[test]
fn criterion_05_born_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let n = 10_000u64;
    let cfg = Config::quantum();
    let mut worst_sigma = 0.0f64;
    let mut worst_p_value = 1.0f64;
    for round in 0..20 {
        let (a, b) = (random_amplitude(&mut rng), random_amplitude(&mut rng));
        let p_false = norm_sq(a) / (norm_sq(a) + norm_sq(b));
        let term = measure(qubit(a, b));
        let expected = enumerate_quantum(&term);
        let mut observed_false = 0u64;
        for _ in 0..n {
            let nf = normalize(&term, &cfg, &mut rng).expect("normalization");
            if alpha_eq(&nf, &bit(false)) {
                observed_false += 1;
            }
        }
        let freq = observed_false as f64 / n as f64;
        let sigma = (p_false * (1.0 - p_false) / n as f64).sqrt();
        let deviations = (freq - p_false).abs() / sigma;
        assert!(
            deviations <= 3.0,
            "round {round}: freq {freq} is {deviations:.2} sigma from {p_false}"
        );
        worst_sigma = worst_sigma.max(deviations);

        let observed =
            vec![(bit(false), observed_false), (bit(true), n - observed_false)];
        let stat = chi_square(&observed, &expected);
        let p_value = chi_square_p_value(stat, expected.len() - 1);
        assert!(p_value > 0.001, "round {round}: chi2 {stat:.4}, p {p_value:.6}");
        worst_p_value = worst_p_value.min(p_value);
    }
    println!(
        "PASS criterion 5: 20 qubits x 10000 draws, worst deviation {worst_sigma:.2} sigma, worst chi-square p-value {worst_p_value:.4}"
    );
}

// ------------------------------------------------------------ 6/7/8

struct TerminationCorpus {
    graphs: Vec<(Prop, ReductionGraph)>,
    build_time: Duration,
}

static CORPUS: OnceLock<TerminationCorpus> = OnceLock::new();

fn termination_corpus() -> &'static TerminationCorpus {
    CORPUS.get_or_init(|| {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(106);
        let ctx = Context::new();
        let cfg = Config::plain().with_ultra(true);
        let mut graphs = Vec::with_capacity(1000);
        for i in 0..1000 {
            let t = gen_typed_term(&mut rng, 6, None, Mode::Plain).expect("generation");
            let ty = infer(&ctx, &t).expect("generated term is typed");
            let g = reduction_graph(&t, &cfg, 10_000)
                .unwrap_or_else(|e| panic!("graph budget violation on draw {i}: {e}"));
            graphs.push((ty, g));
        }
        TerminationCorpus { graphs, build_time: start.elapsed() }
    })
}

#[test]
fn criterion_06_strong_termination() {
    let corpus = termination_corpus();
    assert_eq!(corpus.graphs.len(), 1000);
    let mut nodes = 0usize;
    let mut longest = 0usize;
    for (i, (_, g)) in corpus.graphs.iter().enumerate() {
        assert!(g.is_acyclic(), "cycle in graph {i}");
        longest = longest.max(g.longest_path().expect("acyclic"));
        nodes += g.node_count();
    }
    assert!(
        corpus.build_time < Duration::from_secs(60),
        "graph exploration took {:?}",
        corpus.build_time
    );
    println!(
        "PASS criterion 6: 1000 ultra-reduction graphs acyclic within the 10000-node budget ({nodes} nodes total, longest path {longest}) in {:?}",
        corpus.build_time
    );
}

#[test]
fn criterion_07_subject_reduction() {
    let corpus = termination_corpus();
    let ctx = Context::new();
    let mut edges = 0usize;
    for (i, (ty, g)) in corpus.graphs.iter().enumerate() {
        for edge in &g.edges {
            let reduct_ty = infer(&ctx, &g.terms[edge.to]);
            assert_eq!(
                reduct_ty.as_ref(),
                Ok(ty),
                "graph {i}: rule {:?} changed the type",
                edge.rule
            );
            edges += 1;
        }
    }
    println!("PASS criterion 7: subject reduction holds on all {edges} graph edges");
}

/// The shape table of closed irreducible proofs.
fn introduction_shape_ok(t: &Term, p: &Prop) -> bool {
    match p {
        Prop::Top => matches!(t, Term::Star),
        Prop::Bottom => false,
        Prop::Implies(_, _) => matches!(t, Term::Lam { .. }),
        Prop::And(_, _) => matches!(t, Term::Pair(_, _)),
        Prop::Or(_, _) => matches!(t, Term::Inl { .. } | Term::Inr { .. } | Term::Par(_, _)),
        Prop::Sup(_, _) => matches!(t, Term::Sum(_, _)),
    }
}

/// From a closed normal proof of a disjunction, descending parallel branches
/// reaches an injection.
fn disjunction_witness(t: &Term) -> bool {
    match t {
        Term::Inl { .. } | Term::Inr { .. } => true,
        Term::Par(a, b) => disjunction_witness(&a.body) || disjunction_witness(&b.body),
        _ => false,
    }
}

#[test]
fn criterion_08_introduction_theorem() {
    let corpus = termination_corpus();
    let mut checked = 0usize;
    for (i, (ty, g)) in corpus.graphs.iter().enumerate() {
        for nf in g.normal_forms() {
            assert!(nf.is_closed());
            assert!(
                introduction_shape_ok(nf, ty),
                "graph {i}: normal form {nf:?} does not match {ty:?}"
            );
            assert_ne!(*ty, Prop::Bottom, "closed normal proof of bottom");
            if matches!(ty, Prop::Or(_, _)) {
                assert!(disjunction_witness(nf), "no injection reachable in {nf:?}");
            }
            checked += 1;
        }
    }
    // Normal forms reached by the quantum pipelines of criteria 1-5.
    let b = Prop::or(Prop::Top, Prop::Top);
    let q2 = Prop::sup(Prop::sup(Prop::Top, Prop::Top), Prop::sup(Prop::Top, Prop::Top));
    for f in BoolFn::ALL {
        for (nf, _) in enumerate_quantum(&Term::app(deutsch(), f.term())).iter() {
            assert!(introduction_shape_ok(nf, &b));
            assert!(disjunction_witness(nf));
            checked += 1;
        }
        let apply_uf = Term::apps(app_q2(), [Term::app(u_oracle(), f.term()), plus_minus()]);
        let state = normalize_quantum(&Term::apps(
            app_q2(),
            [mk_matrix4(&Matrix4::h_tensor_i()), apply_uf],
        ));
        assert!(introduction_shape_ok(&state, &q2));
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for _ in 0..25 {
        let (a, bq) = (random_amplitude(&mut rng), random_amplitude(&mut rng));
        for (nf, _) in enumerate_quantum(&measure(qubit(a, bq))).iter() {
            assert!(introduction_shape_ok(nf, &b));
            checked += 1;
        }
        let q = Prop::sup(Prop::Top, Prop::Top);
        for (nf, _) in enumerate_quantum(&post_state(qubit(a, bq))).iter() {
            assert!(introduction_shape_ok(nf, &q));
            checked += 1;
        }
    }
    println!("PASS criterion 8: {checked} closed normal forms match the introduction shape table, none of type F");
}

// ---------------------------------------------------------------- 9

struct Golden {
    name: &'static str,
    mode: Mode,
    ultra: bool,
    lhs: &'static str,
    rule: RuleId,
    rhs: &'static str,
}

fn golden_cases() -> Vec<Golden> {
    use RuleId::*;
    let plain = |name, lhs, rule, rhs| Golden { name, mode: Mode::Plain, ultra: false, lhs, rule, rhs };
    let scalar = |name, lhs, rule, rhs| Golden { name, mode: Mode::Scalar, ultra: false, lhs, rule, rhs };
    vec![
        plain("beta", r"(\x:T. f x) u", Beta, "f u"),
        plain("and", "case_and(<t, u>, [x,y] <y, x>)", ElimAndPair, "<u, t>"),
        plain("or-inl", "case_or(inl(t, T), [x] f x, [y] g y)", ElimOrInl, "f t"),
        plain("or-inr", "case_or(inr(u, T), [x] f x, [y] g y)", ElimOrInr, "g u"),
        plain("sup-left", "case_sup(t + u, [x] f x, [y] g y)", ElimSupLeft, "f t"),
        plain("sup-right", "case_sup(t + u, [x] f x, [y] g y)", ElimSupRight, "g u"),
        plain("sup-par", "case_sup_par(t + u, [x] f x, [y] g y)", ElimSupPar, "f t || g u"),
        plain("par-lam", r"(\x:T. f x) || (\x:T. g x)", ParLam, r"\x:T. f x || g x"),
        plain("par-pair", "<t, u> || <v, w>", ParPair, "<t || v, u || w>"),
        plain(
            "par-case-or",
            "case_or(t || u, [x] f x, [y] g y)",
            ParElimOr,
            "case_or(t, [x] f x, [y] g y) || case_or(u, [x] f x, [y] g y)",
        ),
        plain("par-sum", "(t + u) || (v + w)", ParSum, "(t || v) + (u || w)"),
        plain("par-idem", "t || t", ParIdem, "t"),
        scalar("beta-s", r"(\x:T. f x) u", Beta, "f u"),
        scalar("and-s", "case_and(<t, u>, [x,y] <y, x>)", ElimAndPair, "<u, t>"),
        scalar("or-inl-s", "case_or(inl(t, T), [x] f x, [y] g y)", ElimOrInl, "f t"),
        scalar("or-inr-s", "case_or(inr(u, T), [x] f x, [y] g y)", ElimOrInr, "g u"),
        scalar("sup-left-s", "case_sup(2 . t + 3 . u, [x] f x, [y] g y)", ElimSupLeft, "f t"),
        scalar("sup-right-s", "case_sup(2 . t + 3 . u, [x] f x, [y] g y)", ElimSupRight, "g u"),
        scalar(
            "sup-par-s",
            "case_sup_par(2 . t + 3 . u, [x] f x, [y] g y)",
            ElimSupPar,
            "2 . f t || 3 . g u",
        ),
        scalar(
            "par-lam-s",
            r"2 . (\x:T. f x) || 3 . (\x:T. g x)",
            ParLam,
            r"\x:T. 2 . f x || 3 . g x",
        ),
        scalar(
            "par-pair-s",
            "2 . <t, u> || 3 . <v, w>",
            ParPair,
            "<2 . t || 3 . v, 2 . u || 3 . w>",
        ),
        scalar(
            "par-case-or-s",
            "case_or(2 . t || 3 . u, [x] f x, [y] g y)",
            ParElimOr,
            "2 . case_or(t, [x] f x, [y] g y) || 3 . case_or(u, [x] f x, [y] g y)",
        ),
        scalar(
            "par-sum-s",
            "2 . (3 . t + 5 . u) || 7 . (11 . v + 13 . w)",
            ParSum,
            "1 . (6 . t || 77 . v) + 1 . (10 . u || 91 . w)",
        ),
        scalar("par-idem-s", "2 . (3 . t || 5 . t) + 7 . u", ParIdem, "16 . t + 7 . u"),
        Golden {
            name: "ultra-left",
            mode: Mode::Plain,
            ultra: true,
            lhs: "t || u",
            rule: UltraLeft,
            rhs: "t",
        },
        Golden {
            name: "ultra-right",
            mode: Mode::Plain,
            ultra: true,
            lhs: "t || u",
            rule: UltraRight,
            rhs: "u",
        },
    ]
}

#[test]
fn criterion_09_rule_table_goldens() {
    let cases = golden_cases();
    assert_eq!(cases.len(), 26);
    for case in &cases {
        let cfg = match case.mode {
            Mode::Plain => Config::plain(),
            Mode::Scalar => Config::scalar(),
        }
        .with_ultra(case.ultra);
        let lhs = parse_term(case.lhs, case.mode)
            .unwrap_or_else(|e| panic!("{}: parse error {e}", case.name));
        let redexes = find_redexes(&lhs, &cfg);
        let redex = redexes
            .iter()
            .find(|r| r.rule == case.rule)
            .unwrap_or_else(|| panic!("{}: no {:?} redex in {redexes:?}", case.name, case.rule));
        let contractum = sup_core::reduction::apply_rule(&lhs, redex, &cfg);
        let printed = print_term(&contractum, case.mode);
        assert_eq!(printed, case.rhs, "{}", case.name);
    }
    println!("PASS criterion 9: 26 rule goldens (12 plain, 12 scalar, 2 ultra) byte-exact");
}

// --------------------------------------------------------------- 10

#[test]
fn criterion_10_stdlib_identities() {
    // test and xor truth tables.
    let marker_l = Term::inl(Term::pair(Term::Star, Term::Star), Prop::Top);
    let marker_r = Term::inr(Term::Star, Prop::and(Prop::Top, Prop::Top));
    let picked = normalize_quantum(&mk_test(bit(false), marker_l.clone(), marker_r.clone()));
    assert_eq!(picked, marker_l);
    let picked = normalize_quantum(&mk_test(bit(true), marker_l, marker_r.clone()));
    assert_eq!(picked, marker_r);
    for (a, b) in [(false, false), (false, true), (true, false), (true, true)] {
        let t = Term::apps(xor(), [bit(a), bit(b)]);
        assert_eq!(normalize_quantum(&t), bit(a ^ b), "xor {a} {b}");
    }

    // qubits maps each 2-bit to the corresponding canonical 2-qubit.
    let (z, o) = (Scalar::ZERO, Scalar::ONE);
    let basis = |hi: bool, lo: bool| {
        let mut amps = [z; 4];
        amps[(hi as usize) * 2 + (lo as usize)] = o;
        qubit2(amps[0], amps[1], amps[2], amps[3])
    };
    for (hi, lo) in [(false, false), (false, true), (true, false), (true, true)] {
        let got = normalize_quantum(&Term::app(qubits(), bit2(hi, lo)));
        assert_eq!(got, basis(hi, lo), "qubits {hi} {lo}");
    }

    // U f on every basis 2-bit equals qubits of (x, y xor f(x)): 16 cases.
    for f in BoolFn::ALL {
        for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
            let applied = Term::apps(u_oracle(), [f.term(), bit2(x, y)]);
            let got = normalize_quantum(&applied);
            let expected = basis(x, y ^ f.apply(x));
            assert_eq!(got, expected, "U {} on {x},{y}", f.name());
        }
    }
    println!("PASS criterion 10: test/xor tables, qubits basis table, and all 16 U-oracle basis cases exact");
}
