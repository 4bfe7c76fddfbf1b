//! Subspace membership and strategic-equivalence classification.
//!
//! A game is strategically equivalent to a zero-sum (identical-interest)
//! game exactly when its doubly centered payoff matrices are negatively
//! (positively) proportional; the proportionality factor recovers the
//! scaling witnesses. All checks are structural and run in O(mn).

use std::fmt;

use crate::decompose::double_center;
use crate::error::{Error, Result};
use crate::game::BimatrixGame;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Structurally checkable subspaces of the game space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    /// `A + B = 0`.
    ZeroSum,
    /// `A = B`.
    IdenticalInterest,
    /// `A = 1 u^T`, `B = v 1^T`: payoffs ignore the owner's action.
    NonStrategic,
    /// Column sums of `A` and row sums of `B` vanish.
    Normalized,
    /// Normalized with `m A + n B = 0`.
    Harmonic,
    /// Normalized potential: normalized and `A - B` is non-strategic
    /// shaped (`C(A - B) = 0`).
    Potential,
    /// Both payoff matrices have the `u 1^T + 1 x^T` shape; each player
    /// has a dominant strategy.
    BothDominant,
}

/// Equivalence-class labels produced by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassLabel {
    /// Strategically equivalent to a zero-sum game (`SZ`).
    ZeroSumEquivalent,
    /// Strategically equivalent to an identical-interest game (`SI`).
    IdenticalInterestEquivalent,
    /// Both at once (`B`): every player has a dominant strategy.
    BothDominant,
    /// One payoff matrix is `u 1^T + 1 x^T` shaped (`D`): that player
    /// has a dominant strategy.
    OneDominant,
    /// None of the above.
    Unclassified,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ClassLabel::ZeroSumEquivalent => "SZ",
            ClassLabel::IdenticalInterestEquivalent => "SI",
            ClassLabel::BothDominant => "B",
            ClassLabel::OneDominant => "D",
            ClassLabel::Unclassified => "NONE",
        };
        f.write_str(name)
    }
}

/// Classification result with scaling and non-strategic witnesses.
///
/// For `SZ`: `(alpha A + E1) + (beta B + E2) = 0`.
/// For `SI`: `alpha A + E1 = beta B + E2`.
#[derive(Debug, Clone)]
pub struct ClassVerdict<S: Scalar> {
    pub label: ClassLabel,
    pub alpha: Option<S>,
    pub beta: Option<S>,
    pub witness: Option<BimatrixGame<S>>,
}

fn negligible<S: Scalar>(mat: &Matrix<S>, reference: &S) -> bool {
    if S::EXACT {
        mat.is_zero()
    } else {
        let floor = if *reference > S::one() {
            reference.clone()
        } else {
            S::one()
        };
        mat.max_abs() <= S::ratio_tol() * floor
    }
}

fn vec_negligible<S: Scalar>(values: &[S], reference: &S) -> bool {
    if S::EXACT {
        values.iter().all(S::is_zero_value)
    } else {
        let floor = if *reference > S::one() {
            reference.clone()
        } else {
            S::one()
        };
        let tol = S::ratio_tol() * floor;
        values.iter().all(|v| v.abs() <= tol)
    }
}

/// Exact (or tolerance-guarded, in the float backend) structural
/// membership test.
pub fn is_in_subspace<S: Scalar>(game: &BimatrixGame<S>, space: Subspace) -> bool {
    let scale = game.max_abs();
    match space {
        Subspace::ZeroSum => negligible(&game.payoff_sum(), &scale),
        Subspace::IdenticalInterest => negligible(&game.a().sub(game.b()), &scale),
        Subspace::NonStrategic => {
            let e_a = Matrix::from_fn(game.m(), game.n(), |_, j| game.a().get(0, j).clone());
            let e_b = Matrix::from_fn(game.m(), game.n(), |i, _| game.b().get(i, 0).clone());
            negligible(&game.a().sub(&e_a), &scale) && negligible(&game.b().sub(&e_b), &scale)
        }
        Subspace::Normalized => {
            vec_negligible(&game.a().col_sums(), &scale)
                && vec_negligible(&game.b().row_sums(), &scale)
        }
        Subspace::Harmonic => {
            let m = S::from_int(game.m() as i64);
            let n = S::from_int(game.n() as i64);
            is_in_subspace(game, Subspace::Normalized)
                && negligible(&game.a().scale(&m).add(&game.b().scale(&n)), &scale)
        }
        Subspace::Potential => {
            is_in_subspace(game, Subspace::Normalized)
                && negligible(&double_center(&game.a().sub(game.b())), &scale)
        }
        Subspace::BothDominant => {
            negligible(&double_center(game.a()), &scale)
                && negligible(&double_center(game.b()), &scale)
        }
    }
}

/// Splits a matrix known to satisfy `C(F) = 0` into a row-constant part
/// (depends only on the column index) and a column-constant part.
fn split_rank_one<S: Scalar>(f: &Matrix<S>) -> (Vec<S>, Vec<S>) {
    let grand = f.grand_mean();
    let by_col: Vec<S> = f
        .col_means()
        .into_iter()
        .map(|c| c - grand.clone())
        .collect();
    let by_row = f.row_means();
    (by_col, by_row)
}

fn sz_witness_games<S: Scalar>(game: &BimatrixGame<S>, t: &S) -> BimatrixGame<S> {
    // E such that (A + E1) + (tB + E2) = 0, with E1 row-identical and
    // E2 column-identical.
    let f = game.a().add(&game.b().scale(t));
    let (by_col, by_row) = split_rank_one(&f);
    let e1 = Matrix::from_fn(game.m(), game.n(), |_, j| -by_col[j].clone());
    let e2 = Matrix::from_fn(game.m(), game.n(), |i, _| -by_row[i].clone());
    BimatrixGame::new(e1, e2).expect("shapes match by construction")
}

fn si_witness_games<S: Scalar>(game: &BimatrixGame<S>, t: &S) -> BimatrixGame<S> {
    // E such that A + E1 = tB + E2.
    let f = game.b().scale(t).sub(game.a());
    let (by_col, by_row) = split_rank_one(&f);
    let e1 = Matrix::from_fn(game.m(), game.n(), |_, j| by_col[j].clone());
    let e2 = Matrix::from_fn(game.m(), game.n(), |i, _| -by_row[i].clone());
    BimatrixGame::new(e1, e2).expect("shapes match by construction")
}

/// The consistent proportionality factor `s` with `C(A) = s C(B)`, if
/// one exists. Pivot is the largest-magnitude entry of `C(B)`.
fn centered_ratio<S: Scalar>(ca: &Matrix<S>, cb: &Matrix<S>, scale: &S) -> Option<S> {
    let mut pivot = (0usize, 0usize);
    let mut pivot_abs = S::zero();
    for i in 0..cb.rows() {
        for j in 0..cb.cols() {
            let a = cb.get(i, j).abs();
            if a > pivot_abs {
                pivot_abs = a;
                pivot = (i, j);
            }
        }
    }
    let s = ca.get(pivot.0, pivot.1).clone() / cb.get(pivot.0, pivot.1).clone();
    let residual = ca.sub(&cb.scale(&s));
    negligible(&residual, scale).then_some(s)
}

/// Scaling and non-strategic witnesses placing the game in `S(Z)`, if
/// any: `(alpha A + E1) + (beta B + E2) = 0` with `alpha, beta > 0`.
pub fn sz_witness<S: Scalar>(game: &BimatrixGame<S>) -> Option<(S, S, BimatrixGame<S>)> {
    let scale = game.max_abs();
    let ca = double_center(game.a());
    let cb = double_center(game.b());
    if negligible(&ca, &scale) && negligible(&cb, &scale) {
        // Dominant-pair games sit in the intersection; unit scalings work.
        let witness = sz_witness_games(game, &S::one());
        return Some((S::one(), S::one(), witness));
    }
    if negligible(&ca, &scale) || negligible(&cb, &scale) {
        return None;
    }
    let s = centered_ratio(&ca, &cb, &scale)?;
    if s >= S::zero() {
        return None;
    }
    let t = -s;
    let witness = sz_witness_games(game, &t);
    Some((S::one(), t, witness))
}

/// Scaling and non-strategic witnesses placing the game in `S(I)`, if
/// any: `alpha A + E1 = beta B + E2` with `alpha, beta > 0`.
pub fn si_witness<S: Scalar>(game: &BimatrixGame<S>) -> Option<(S, S, BimatrixGame<S>)> {
    let scale = game.max_abs();
    let ca = double_center(game.a());
    let cb = double_center(game.b());
    if negligible(&ca, &scale) && negligible(&cb, &scale) {
        let witness = si_witness_games(game, &S::one());
        return Some((S::one(), S::one(), witness));
    }
    if negligible(&ca, &scale) || negligible(&cb, &scale) {
        return None;
    }
    let s = centered_ratio(&ca, &cb, &scale)?;
    if s <= S::zero() {
        return None;
    }
    let witness = si_witness_games(game, &s);
    Some((S::one(), s, witness))
}

/// Classifies a game among `SZ`, `SI`, `B`, `D`, and `NONE` via the
/// doubly centered proportionality test.
pub fn classify<S: Scalar>(game: &BimatrixGame<S>) -> ClassVerdict<S> {
    let scale = game.max_abs();
    let ca = double_center(game.a());
    let cb = double_center(game.b());
    let ca_zero = negligible(&ca, &scale);
    let cb_zero = negligible(&cb, &scale);
    if ca_zero && cb_zero {
        return ClassVerdict {
            label: ClassLabel::BothDominant,
            alpha: None,
            beta: None,
            witness: None,
        };
    }
    if ca_zero || cb_zero {
        return ClassVerdict {
            label: ClassLabel::OneDominant,
            alpha: None,
            beta: None,
            witness: None,
        };
    }
    match centered_ratio(&ca, &cb, &scale) {
        Some(s) if s < S::zero() => {
            let t = -s;
            let witness = sz_witness_games(game, &t);
            ClassVerdict {
                label: ClassLabel::ZeroSumEquivalent,
                alpha: Some(S::one()),
                beta: Some(t),
                witness: Some(witness),
            }
        }
        Some(s) if s > S::zero() => {
            let witness = si_witness_games(game, &s);
            ClassVerdict {
                label: ClassLabel::IdenticalInterestEquivalent,
                alpha: Some(S::one()),
                beta: Some(s),
                witness: Some(witness),
            }
        }
        _ => ClassVerdict {
            label: ClassLabel::Unclassified,
            alpha: None,
            beta: None,
            witness: None,
        },
    }
}

/// Closure check: adding a dominant-pair (`B` class) game to an
/// `SZ`/`SI`/`B` game must keep the sum inside `{SZ, SI, B, D}`.
pub fn check_closure_under_b<S: Scalar>(
    game: &BimatrixGame<S>,
    b_game: &BimatrixGame<S>,
) -> Result<bool> {
    let label = classify(game).label;
    if !matches!(
        label,
        ClassLabel::ZeroSumEquivalent
            | ClassLabel::IdenticalInterestEquivalent
            | ClassLabel::BothDominant
    ) {
        return Err(Error::PreconditionViolated(format!(
            "game classifies as {label}, expected SZ, SI, or B"
        )));
    }
    if !is_in_subspace(b_game, Subspace::BothDominant) {
        return Err(Error::PreconditionViolated(
            "additive game is not in the dominant-pair class".into(),
        ));
    }
    let sum = game.add(b_game)?;
    Ok(matches!(
        classify(&sum).label,
        ClassLabel::ZeroSumEquivalent
            | ClassLabel::IdenticalInterestEquivalent
            | ClassLabel::BothDominant
            | ClassLabel::OneDominant
    ))
}

/// Checks that dual membership (both an `SZ` and an `SI` witness exist)
/// coincides with membership in the dominant-pair class `B`.
pub fn intersection_is_b<S: Scalar>(game: &BimatrixGame<S>) -> bool {
    let dual = sz_witness(game).is_some() && si_witness(game).is_some();
    dual == is_in_subspace(game, Subspace::BothDominant)
}
