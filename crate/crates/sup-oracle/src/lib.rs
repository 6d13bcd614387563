//! Verification machinery kept independent of the rewrite engine: a numeric
//! complex linear-algebra oracle, random well-typed term generation, and
//! statistical helpers. Nothing here calls the engine, and the engine never
//! calls this crate.

pub mod gen;
pub mod stats;

use sup_core::scalar::Scalar;
use sup_core::stdlib::{Matrix2, Matrix4};
use sup_core::syntax::Term;

pub use gen::{gen_typed_term, random_prop, GenerationFailed};
pub use stats::{chi_square, chi_square_p_value};

pub type CVec2 = [Scalar; 2];
pub type CVec4 = [Scalar; 4];

/// Textbook complex matrix-vector product, 2x2.
pub fn mat_vec2(m: &Matrix2, v: &CVec2) -> CVec2 {
    [
        m.m[0][0] * v[0] + m.m[0][1] * v[1],
        m.m[1][0] * v[0] + m.m[1][1] * v[1],
    ]
}

/// Textbook complex matrix-vector product, 4x4.
pub fn mat_vec4(m: &Matrix4, v: &CVec4) -> CVec4 {
    let row = |i: usize| {
        m.m[i][0] * v[0] + m.m[i][1] * v[1] + m.m[i][2] * v[2] + m.m[i][3] * v[3]
    };
    [row(0), row(1), row(2), row(3)]
}

/// Complex matrix product, 4x4.
pub fn mat_mul4(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut m = [[Scalar::ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut acc = Scalar::ZERO;
            for k in 0..4 {
                acc = acc + a.m[i][k] * b.m[k][j];
            }
            *cell = acc;
        }
    }
    Matrix4 { m }
}

/// The numeric oracle matrix for `U f`, permuting basis vectors by
/// `(x, y) -> (x, y xor f(x))` in the basis order 00, 01, 10, 11.
#[allow(clippy::needless_range_loop)]
pub fn oracle_u_f(f: impl Fn(bool) -> bool) -> Matrix4 {
    let mut m = [[Scalar::ZERO; 4]; 4];
    for col in 0..4usize {
        let x = col >= 2;
        let y = col % 2 == 1;
        let out_y = y ^ f(x);
        let row = (x as usize) * 2 + (out_y as usize);
        m[row][col] = Scalar::ONE;
    }
    Matrix4 { m }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    Two(CVec2),
    Four(CVec4),
}

impl Amplitudes {
    pub fn as_slice(&self) -> &[Scalar] {
        match self {
            Amplitudes::Two(v) => v,
            Amplitudes::Four(v) => v,
        }
    }

    pub fn max_abs_diff(&self, other: &[Scalar]) -> f64 {
        self.as_slice()
            .iter()
            .zip(other)
            .map(|(a, b)| {
                let d = *a - *b;
                d.re.abs().max(d.im.abs())
            })
            .fold(0.0, f64::max)
    }
}

/// A term that is not a canonical qubit or 2-qubit value: residual `||`
/// nodes, non-unit outer weights, or any other unexpected shape.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("term is not a canonical qubit or 2-qubit value: {0}")]
pub struct ShapeError(pub String);

/// Extract the amplitudes of a closed normal form in canonical qubit shape
/// `a.* + b.*` or 2-qubit shape `1.(a.* + b.*) + 1.(c.* + d.*)`.
pub fn amplitudes_of(t: &Term) -> Result<Amplitudes, ShapeError> {
    let Term::Sum(a, b) = t else {
        return Err(ShapeError("expected a sum".into()));
    };
    if let (Term::Star, Term::Star) = (&*a.body, &*b.body) {
        return Ok(Amplitudes::Two([a.weight, b.weight]));
    }
    if !a.weight.is_one() || !b.weight.is_one() {
        return Err(ShapeError("outer weight of a 2-qubit half is not 1".into()));
    }
    let half = |t: &Term| -> Result<(Scalar, Scalar), ShapeError> {
        match t {
            Term::Sum(x, y) if matches!((&*x.body, &*y.body), (Term::Star, Term::Star)) => {
                Ok((x.weight, y.weight))
            }
            Term::Par(_, _) => Err(ShapeError("residual || node".into())),
            other => Err(ShapeError(format!("unexpected half {other:?}"))),
        }
    };
    let (x0, x1) = half(&a.body)?;
    let (x2, x3) = half(&b.body)?;
    Ok(Amplitudes::Four([x0, x1, x2, x3]))
}
