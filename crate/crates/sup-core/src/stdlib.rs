//! Bits, qubits, measurement operators, matrices and Deutsch's algorithm as
//! pre-typechecked definitions, plus the prelude shipped in surface syntax.

use std::collections::BTreeSet;

use crate::scalar::Scalar;
use crate::syntax::{free_vars, fresh_name, Prop, Term};
use crate::typecheck::{check, Context};

/// A named, typechecked definition.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedDef {
    pub name: String,
    pub prop: Prop,
    pub body: Term,
}

/// `B = T \/ T`
pub fn bit_prop() -> Prop {
    Prop::or(Prop::Top, Prop::Top)
}

/// `B2 = B /\ B`
pub fn bit2_prop() -> Prop {
    Prop::and(bit_prop(), bit_prop())
}

/// `Q = T (+) T`
pub fn qubit_prop() -> Prop {
    Prop::sup(Prop::Top, Prop::Top)
}

/// `Q2 = Q (+) Q`
pub fn qubit2_prop() -> Prop {
    Prop::sup(qubit_prop(), qubit_prop())
}

/// `false = inl(*)`, `true = inr(*)`, both of type `B`.
pub fn bit(b: bool) -> Term {
    if b {
        Term::inr(Term::Star, Prop::Top)
    } else {
        Term::inl(Term::Star, Prop::Top)
    }
}

/// The four 2-bits `<false,false>`, `<false,true>`, `<true,false>`,
/// `<true,true>`.
pub fn bit2(hi: bool, lo: bool) -> Term {
    Term::pair(bit(hi), bit(lo))
}

/// `test(t, u, v)`: an or-elimination whose binders do not occur in the
/// branches, so `test(false, u, v)` reduces to `u` and `test(true, u, v)`
/// to `v`.
pub fn mk_test(t: Term, u: Term, v: Term) -> Term {
    let mut avoid: BTreeSet<String> = free_vars(&u);
    avoid.extend(free_vars(&v));
    let x = fresh_name("_", &avoid);
    let mut avoid2 = avoid;
    avoid2.insert(x.clone());
    let y = fresh_name("_", &avoid2);
    Term::elim_or(t, x, u, y, v)
}

/// Exclusive or on bits: `\x \y. test(x, y, test(y, true, false))`.
pub fn xor() -> Term {
    let body = mk_test(
        Term::var("x"),
        Term::var("y"),
        mk_test(Term::var("y"), bit(true), bit(false)),
    );
    Term::lam("x", bit_prop(), Term::lam("y", bit_prop(), body))
}

/// The qubit `a.* + b.*` of type `Q`.
pub fn qubit(a: Scalar, b: Scalar) -> Term {
    Term::wsum(a, Term::Star, b, Term::Star)
}

/// The 2-qubit `1.(a.* + b.*) + 1.(c.* + d.*)` of type `Q2`.
pub fn qubit2(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Term {
    Term::sum1(qubit(a, b), qubit(c, d))
}

/// Measurement of a qubit: the outcome bit.
pub fn measure(t: Term) -> Term {
    Term::elim_sup(t, "_", bit(false), "_", bit(true))
}

/// Measurement of a qubit: the state after the measurement,
/// `1.x + 0.*` or `0.* + 1.y`.
pub fn post_state(t: Term) -> Term {
    Term::elim_sup(
        t,
        "x",
        Term::wsum(Scalar::ONE, Term::var("x"), Scalar::ZERO, Term::Star),
        "y",
        Term::wsum(Scalar::ZERO, Term::Star, Scalar::ONE, Term::var("y")),
    )
}

/// Measurement of a qubit: the pair of outcome and post-measurement state.
pub fn measure_pair(t: Term) -> Term {
    Term::elim_sup(
        t,
        "x",
        Term::pair(bit(false), Term::wsum(Scalar::ONE, Term::var("x"), Scalar::ZERO, Term::Star)),
        "y",
        Term::pair(bit(true), Term::wsum(Scalar::ZERO, Term::Star, Scalar::ONE, Term::var("y"))),
    )
}

fn zero_qubit() -> Term {
    qubit(Scalar::ZERO, Scalar::ZERO)
}

/// Partial measurement of the first qubit of a 2-qubit: the outcome bit.
pub fn measure_first(t: Term) -> Term {
    Term::elim_sup(t, "_", bit(false), "_", bit(true))
}

/// Partial measurement of the first qubit: the state after it,
/// `1.x + 1.(0.* + 0.*)` or `1.(0.* + 0.*) + 1.y`.
pub fn post_state_first(t: Term) -> Term {
    Term::elim_sup(
        t,
        "x",
        Term::sum1(Term::var("x"), zero_qubit()),
        "y",
        Term::sum1(zero_qubit(), Term::var("y")),
    )
}

/// Partial measurement of the first qubit: outcome and post-state.
pub fn measure_pair_first(t: Term) -> Term {
    Term::elim_sup(
        t,
        "x",
        Term::pair(bit(false), Term::sum1(Term::var("x"), zero_qubit())),
        "y",
        Term::pair(bit(true), Term::sum1(zero_qubit(), Term::var("y"))),
    )
}

/// A 2x2 complex matrix, `entries[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    pub m: [[Scalar; 2]; 2],
}

/// A 4x4 complex matrix, `entries[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4 {
    pub m: [[Scalar; 4]; 4],
}

impl Matrix2 {
    pub fn identity() -> Matrix2 {
        let (o, z) = (Scalar::ONE, Scalar::ZERO);
        Matrix2 { m: [[o, z], [z, o]] }
    }

    /// The Hadamard gate. Entries are computed exactly as the surface forms
    /// `1/sqrt(2)` and `-1/sqrt(2)` evaluate, so parsed and built terms agree
    /// bitwise, signed zeros included.
    pub fn hadamard() -> Matrix2 {
        let h = Scalar::ONE / Scalar::real(2.0).sqrt();
        let nh = Scalar::real(-1.0) / Scalar::real(2.0).sqrt();
        Matrix2 { m: [[h, h], [h, nh]] }
    }
}

impl Matrix4 {
    pub fn identity() -> Matrix4 {
        let mut m = [[Scalar::ZERO; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Scalar::ONE;
        }
        Matrix4 { m }
    }

    /// The Hadamard gate on the first qubit, identity on the second.
    pub fn h_tensor_i() -> Matrix4 {
        let h = Scalar::ONE / Scalar::real(2.0).sqrt();
        let nh = Scalar::real(-1.0) / Scalar::real(2.0).sqrt();
        let z = Scalar::ZERO;
        Matrix4 { m: [[h, z, h, z], [z, h, z, h], [h, z, nh, z], [z, h, z, nh]] }
    }
}

/// A matrix as a proof of `B -> Q` mapping `false` and `true` to its columns.
pub fn mk_matrix(m: &Matrix2) -> Term {
    let col = |j: usize| qubit(m.m[0][j], m.m[1][j]);
    Term::lam("x", bit_prop(), mk_test(Term::var("x"), col(0), col(1)))
}

/// A matrix as a proof of `B2 -> Q2` mapping each 2-bit to its column.
pub fn mk_matrix4(m: &Matrix4) -> Term {
    let col = |j: usize| qubit2(m.m[0][j], m.m[1][j], m.m[2][j], m.m[3][j]);
    let dispatch = mk_test(
        Term::var("y"),
        mk_test(Term::var("z"), col(0), col(1)),
        mk_test(Term::var("z"), col(2), col(3)),
    );
    Term::lam("x", bit2_prop(), Term::elim_and(Term::var("x"), "y", "z", dispatch))
}

/// The proof of `B2 -> Q2` mapping each 2-bit to the corresponding 2-qubit.
pub fn qubits() -> Term {
    mk_matrix4(&Matrix4::identity())
}

/// Application of a matrix to a vector in `Q`:
/// `\M \t. case_sup_par(t, [x] M false, [y] M true)`.
pub fn app_q() -> Term {
    let body = Term::elim_sup_par(
        Term::var("t"),
        "x",
        Term::app(Term::var("M"), bit(false)),
        "y",
        Term::app(Term::var("M"), bit(true)),
    );
    Term::lam(
        "M",
        Prop::implies(bit_prop(), qubit_prop()),
        Term::lam("t", qubit_prop(), body),
    )
}

/// Application of a matrix to a vector in `Q2`, with one nested
/// sup-par-elimination per half.
pub fn app_q2() -> Term {
    let half = |var: &str, a: Term, b: Term| {
        Term::elim_sup_par(Term::var(var), "_", a, "_", b)
    };
    let body = Term::elim_sup_par(
        Term::var("t"),
        "y",
        half("y", Term::app(Term::var("M"), bit2(false, false)), Term::app(Term::var("M"), bit2(false, true))),
        "z",
        half("z", Term::app(Term::var("M"), bit2(true, false)), Term::app(Term::var("M"), bit2(true, true))),
    );
    Term::lam(
        "M",
        Prop::implies(bit2_prop(), qubit2_prop()),
        Term::lam("t", qubit2_prop(), body),
    )
}

/// The literal initial state `1.(1/2.* + -1/2.*) + 1.(1/2.* + -1/2.*)`.
pub fn plus_minus() -> Term {
    let half = Scalar::real(0.5);
    let neg_half = Scalar::real(-0.5);
    qubit2(half, neg_half, half, neg_half)
}

/// The operator mapping a function `f : B -> B` to the oracle matrix
/// sending the 2-bit `(x, y)` to the 2-qubit for `(x, y xor f(x))`.
pub fn u_oracle() -> Term {
    let f = |bitval: bool| Term::app(Term::var("f"), bit(bitval));
    let column = |x: bool, y: bool| {
        Term::app(
            qubits(),
            Term::pair(bit(x), Term::apps(xor(), [bit(y), f(x)])),
        )
    };
    let dispatch = mk_test(
        Term::var("y"),
        mk_test(Term::var("z"), column(false, false), column(false, true)),
        mk_test(Term::var("z"), column(true, false), column(true, true)),
    );
    let matrix = Term::lam("x", bit2_prop(), Term::elim_and(Term::var("x"), "y", "z", dispatch));
    Term::lam("f", Prop::implies(bit_prop(), bit_prop()), matrix)
}

/// Deutsch's algorithm:
/// `\f. pi2(app2 (H (x) I) (app2 (U f) |+->))` of type `(B -> B) -> B`.
pub fn deutsch() -> Term {
    let uf_applied = Term::apps(
        app_q2(),
        [Term::app(u_oracle(), Term::var("f")), plus_minus()],
    );
    let hi_applied = Term::apps(app_q2(), [mk_matrix4(&Matrix4::h_tensor_i()), uf_applied]);
    Term::lam("f", Prop::implies(bit_prop(), bit_prop()), measure_first(hi_applied))
}

/// The four one-bit functions usable as Deutsch oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoolFn {
    Const0,
    Const1,
    Id,
    Not,
}

impl BoolFn {
    pub const ALL: [BoolFn; 4] = [BoolFn::Const0, BoolFn::Const1, BoolFn::Id, BoolFn::Not];

    pub fn name(self) -> &'static str {
        match self {
            BoolFn::Const0 => "const0",
            BoolFn::Const1 => "const1",
            BoolFn::Id => "id",
            BoolFn::Not => "not",
        }
    }

    pub fn is_constant(self) -> bool {
        matches!(self, BoolFn::Const0 | BoolFn::Const1)
    }

    pub fn apply(self, x: bool) -> bool {
        match self {
            BoolFn::Const0 => false,
            BoolFn::Const1 => true,
            BoolFn::Id => x,
            BoolFn::Not => !x,
        }
    }

    /// The function as a proof of `B -> B`.
    pub fn term(self) -> Term {
        let body = match self {
            BoolFn::Const0 => bit(false),
            BoolFn::Const1 => bit(true),
            BoolFn::Id => Term::var("x"),
            BoolFn::Not => mk_test(Term::var("x"), bit(true), bit(false)),
        };
        Term::lam("x", bit_prop(), body)
    }
}

/// Every definition of the prelude, typechecked at construction.
pub fn prelude() -> Vec<NamedDef> {
    let b = bit_prop();
    let b2 = bit2_prop();
    let q = qubit_prop();
    let q2 = qubit2_prop();
    let lam_q = |name: &str, f: fn(Term) -> Term, cod: Prop| NamedDef {
        name: name.to_string(),
        prop: Prop::implies(q.clone(), cod),
        body: Term::lam("t", qubit_prop(), f(Term::var("t"))),
    };
    let lam_q2 = |name: &str, f: fn(Term) -> Term, cod: Prop| NamedDef {
        name: name.to_string(),
        prop: Prop::implies(q2.clone(), cod),
        body: Term::lam("t", qubit2_prop(), f(Term::var("t"))),
    };
    let defs = vec![
        NamedDef { name: "false".into(), prop: b.clone(), body: bit(false) },
        NamedDef { name: "true".into(), prop: b.clone(), body: bit(true) },
        NamedDef {
            name: "xor".into(),
            prop: Prop::implies(b.clone(), Prop::implies(b.clone(), b.clone())),
            body: xor(),
        },
        NamedDef { name: "ff".into(), prop: b2.clone(), body: bit2(false, false) },
        NamedDef { name: "ft".into(), prop: b2.clone(), body: bit2(false, true) },
        NamedDef { name: "tf".into(), prop: b2.clone(), body: bit2(true, false) },
        NamedDef { name: "tt".into(), prop: b2.clone(), body: bit2(true, true) },
        lam_q("pi", measure, b.clone()),
        lam_q("pi'", post_state, q.clone()),
        lam_q("pi''", measure_pair, Prop::and(b.clone(), q.clone())),
        lam_q2("pi2", measure_first, b.clone()),
        lam_q2("pi2'", post_state_first, q2.clone()),
        lam_q2("pi2''", measure_pair_first, Prop::and(b.clone(), q2.clone())),
        NamedDef {
            name: "qubits".into(),
            prop: Prop::implies(b2.clone(), q2.clone()),
            body: qubits(),
        },
        NamedDef {
            name: "app".into(),
            prop: Prop::implies(
                Prop::implies(b.clone(), q.clone()),
                Prop::implies(q.clone(), q.clone()),
            ),
            body: app_q(),
        },
        NamedDef {
            name: "app2".into(),
            prop: Prop::implies(
                Prop::implies(b2.clone(), q2.clone()),
                Prop::implies(q2.clone(), q2.clone()),
            ),
            body: app_q2(),
        },
        NamedDef {
            name: "had".into(),
            prop: Prop::implies(b.clone(), q.clone()),
            body: mk_matrix(&Matrix2::hadamard()),
        },
        NamedDef {
            name: "had_i".into(),
            prop: Prop::implies(b2.clone(), q2.clone()),
            body: mk_matrix4(&Matrix4::h_tensor_i()),
        },
        NamedDef { name: "plus_minus".into(), prop: q2.clone(), body: plus_minus() },
        NamedDef {
            name: "u".into(),
            prop: Prop::implies(
                Prop::implies(b.clone(), b.clone()),
                Prop::implies(b2.clone(), q2.clone()),
            ),
            body: u_oracle(),
        },
        NamedDef {
            name: "const0".into(),
            prop: Prop::implies(b.clone(), b.clone()),
            body: BoolFn::Const0.term(),
        },
        NamedDef {
            name: "const1".into(),
            prop: Prop::implies(b.clone(), b.clone()),
            body: BoolFn::Const1.term(),
        },
        NamedDef {
            name: "id".into(),
            prop: Prop::implies(b.clone(), b.clone()),
            body: BoolFn::Id.term(),
        },
        NamedDef {
            name: "not".into(),
            prop: Prop::implies(b.clone(), b.clone()),
            body: BoolFn::Not.term(),
        },
        NamedDef {
            name: "deutsch".into(),
            prop: Prop::implies(Prop::implies(b.clone(), b.clone()), b.clone()),
            body: deutsch(),
        },
    ];
    let ctx = Context::new();
    for def in &defs {
        check(&ctx, &def.body, &def.prop)
            .unwrap_or_else(|e| panic!("prelude definition `{}` does not check: {e}", def.name));
    }
    defs
}

/// The prelude file shipped with the command-line tool. Tests check that it
/// parses to exactly the definitions of [`prelude`] up to alpha-equivalence.
pub const PRELUDE_SOURCE: &str = include_str!("../../../prelude.sup");
