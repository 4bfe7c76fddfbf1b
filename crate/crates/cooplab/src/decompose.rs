//! Direct-sum decompositions of a bimatrix game into cooperative,
//! competitive, and trivial components, via closed-form centering
//! projections.
//!
//! Two decompositions are provided:
//!
//! * potential + harmonic + non-strategic (`P ⊕ H ⊕ E`), and
//! * normalized identical-interest + normalized zero-sum + dominant
//!   (`(I∩N) ⊕ (Z∩N) ⊕ B`).
//!
//! Both are exact in the rational backend: the parts recompose to the
//! original game with zero residual.

use crate::equivalence::{is_in_subspace, Subspace};
use crate::error::{Error, Result};
use crate::game::BimatrixGame;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Removes the row-mean and column-mean directions:
/// `C(M) = M - rowMeans - colMeans + grandMean`, broadcast per cell.
///
/// The output has all row sums and all column sums equal to zero, and
/// `C` is idempotent. Its kernel is exactly the matrices of the form
/// `u 1^T + 1 v^T`.
pub fn double_center<S: Scalar>(mat: &Matrix<S>) -> Matrix<S> {
    let row_means = mat.row_means();
    let col_means = mat.col_means();
    let grand = mat.grand_mean();
    Matrix::from_fn(mat.rows(), mat.cols(), |i, j| {
        mat.get(i, j).clone() - row_means[i].clone() - col_means[j].clone() + grand.clone()
    })
}

/// The non-strategic component `E = (1 u^T, v 1^T)` where `u` holds the
/// column means of `A` and `v` the row means of `B`. Subtracting it
/// normalizes the game: `A`'s columns and `B`'s rows then sum to zero.
pub fn nonstrategic_part<S: Scalar>(game: &BimatrixGame<S>) -> BimatrixGame<S> {
    let u = game.a().col_means();
    let v = game.b().row_means();
    let a = Matrix::from_fn(game.m(), game.n(), |_, j| u[j].clone());
    let b = Matrix::from_fn(game.m(), game.n(), |i, _| v[i].clone());
    BimatrixGame::new(a, b).expect("shapes match by construction")
}

/// Result of the potential/harmonic/non-strategic decomposition.
#[derive(Clone, Debug)]
pub struct HodgeParts<S: Scalar> {
    /// Normalized potential component (`P`).
    pub potential: BimatrixGame<S>,
    /// Normalized harmonic component (`H`), with `m A + n B = 0`.
    pub harmonic: BimatrixGame<S>,
    /// Non-strategic component (`E`).
    pub nonstrategic: BimatrixGame<S>,
}

impl<S: Scalar> HodgeParts<S> {
    pub fn recompose(&self) -> BimatrixGame<S> {
        self.potential
            .add(&self.harmonic)
            .and_then(|g| g.add(&self.nonstrategic))
            .expect("components share one shape")
    }
}

/// Splits `G = P + H + E`.
///
/// After extracting the non-strategic part, the normalized remainder
/// `(Â, B̂)` splits along `Z = C(Â - B̂) / (m + n)`: the harmonic part is
/// `(nZ, -mZ)` and the potential part is what is left.
pub fn hodge_decompose<S: Scalar>(game: &BimatrixGame<S>) -> HodgeParts<S> {
    let nonstrategic = nonstrategic_part(game);
    let a_hat = game.a().sub(nonstrategic.a());
    let b_hat = game.b().sub(nonstrategic.b());
    let m = S::from_int(game.m() as i64);
    let n = S::from_int(game.n() as i64);
    let z = double_center(&a_hat.sub(&b_hat)).scale(&(S::one() / (m.clone() + n.clone())));
    let harmonic_a = z.scale(&n);
    let harmonic_b = z.scale(&-m);
    let potential = BimatrixGame::new(a_hat.sub(&harmonic_a), b_hat.sub(&harmonic_b))
        .expect("shapes match by construction");
    let harmonic = BimatrixGame::new(harmonic_a, harmonic_b).expect("shapes match by construction");
    HodgeParts {
        potential,
        harmonic,
        nonstrategic,
    }
}

/// Result of the identical-interest/zero-sum/dominant decomposition.
#[derive(Clone, Debug)]
pub struct StrategicParts<S: Scalar> {
    /// Normalized identical-interest component (`I ∩ N`): `A = B`,
    /// doubly centered.
    pub identical: BimatrixGame<S>,
    /// Normalized zero-sum component (`Z ∩ N`): `A = -B`, doubly
    /// centered.
    pub zero_sum: BimatrixGame<S>,
    /// Component in which each player's payoff depends only on her own
    /// action; both players have dominant strategies.
    pub dominant: BimatrixGame<S>,
}

impl<S: Scalar> StrategicParts<S> {
    pub fn recompose(&self) -> BimatrixGame<S> {
        self.identical
            .add(&self.zero_sum)
            .and_then(|g| g.add(&self.dominant))
            .expect("components share one shape")
    }
}

/// Splits `G = I_N + Z_N + B` with `I_N = (J, J)`, `Z_N = (K, -K)`,
/// `J = (C(A) + C(B)) / 2`, `K = (C(A) - C(B)) / 2`.
pub fn strategic_decompose<S: Scalar>(game: &BimatrixGame<S>) -> StrategicParts<S> {
    let ca = double_center(game.a());
    let cb = double_center(game.b());
    let half = S::from_ratio(1, 2);
    let j = ca.add(&cb).scale(&half);
    let k = ca.sub(&cb).scale(&half);
    let identical = BimatrixGame::new(j.clone(), j).expect("shapes match by construction");
    let zero_sum = BimatrixGame::new(k.clone(), k.neg()).expect("shapes match by construction");
    let dominant = game
        .sub(&identical)
        .and_then(|g| g.sub(&zero_sum))
        .expect("components share one shape");
    StrategicParts {
        identical,
        zero_sum,
        dominant,
    }
}

/// Splits a normalized harmonic game `H` uniquely as `I + Z` with
/// `I ∈ I∩N`, `Z ∈ Z∩N`; the matrices satisfy
/// `I = ((n - m) / (m + n)) Z`.
pub fn harmonic_split<S: Scalar>(
    game: &BimatrixGame<S>,
) -> Result<(BimatrixGame<S>, BimatrixGame<S>)> {
    if !is_in_subspace(game, Subspace::Harmonic) {
        return Err(Error::NotHarmonic);
    }
    let half = S::from_ratio(1, 2);
    let j = game.a().add(game.b()).scale(&half);
    let k = game.a().sub(game.b()).scale(&half);
    let identical = BimatrixGame::new(j.clone(), j).expect("shapes match by construction");
    let zero_sum = BimatrixGame::new(k.clone(), k.neg()).expect("shapes match by construction");
    Ok((identical, zero_sum))
}

/// Basis of the normalized harmonic subspace: the `(m-1)(n-1)` games
/// `(n A^{ij}, -m A^{ij})` where `A^{ij}` carries `+1` at `(i, j)` and
/// `(i+1, j+1)` and `-1` at `(i+1, j)` and `(i, j+1)`.
pub fn harmonic_basis<S: Scalar>(m: usize, n: usize) -> Result<Vec<BimatrixGame<S>>> {
    if m < 2 || n < 2 {
        return Err(Error::DimensionTooSmall { min: 2 });
    }
    let mut basis = Vec::with_capacity((m - 1) * (n - 1));
    for i in 0..m - 1 {
        for j in 0..n - 1 {
            let corner = Matrix::from_fn(m, n, |r, c| {
                if (r, c) == (i, j) || (r, c) == (i + 1, j + 1) {
                    S::one()
                } else if (r, c) == (i + 1, j) || (r, c) == (i, j + 1) {
                    -S::one()
                } else {
                    S::zero()
                }
            });
            let a = corner.scale(&S::from_int(n as i64));
            let b = corner.scale(&S::from_int(-(m as i64)));
            basis.push(BimatrixGame::new(a, b).expect("shapes match by construction"));
        }
    }
    Ok(basis)
}
