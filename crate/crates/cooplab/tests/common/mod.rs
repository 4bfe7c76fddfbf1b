//! Shared test fixtures: exact linear-algebra oracle for the
//! decompositions and small seeded generators.
//!
//! The oracle projects a vectorized game onto explicitly enumerated
//! subspace bases by solving the normal equations in rational
//! arithmetic; it never calls the closed-form centering projections it
//! is used to check.

#![allow(dead_code)]

use cooplab::game::BimatrixGame;
use cooplab::matrix::Matrix;
use cooplab::scalar::{Rational, Scalar};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

pub fn int(v: i64) -> Rational {
    Rational::from_int(v)
}

/// Random integer-entry game, unstructured.
pub fn random_int_game(m: usize, n: usize, seed: u64) -> BimatrixGame<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Matrix::from_fn(m, n, |_, _| int(rng.gen_range(-6..=6)));
    let b = Matrix::from_fn(m, n, |_, _| int(rng.gen_range(-6..=6)));
    BimatrixGame::new(a, b).unwrap()
}

/// Random simplex vector with exact rational coordinates.
pub fn random_rational_simplex(len: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let weights: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = weights.iter().sum();
    weights.into_iter().map(|w| rat(w, total)).collect()
}

/// Random non-strategic game (row-constant `A`, column-constant `B`).
pub fn random_nonstrategic(m: usize, n: usize, rng: &mut ChaCha8Rng) -> BimatrixGame<Rational> {
    let u: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
    let v: Vec<i64> = (0..m).map(|_| rng.gen_range(-5..=5)).collect();
    let a = Matrix::from_fn(m, n, |_, j| int(u[j]));
    let b = Matrix::from_fn(m, n, |i, _| int(v[i]));
    BimatrixGame::new(a, b).unwrap()
}

/// Matrix from `(numerator, denominator)` rows.
pub fn rat_matrix(rows: &[&[(i64, i64)]]) -> Matrix<Rational> {
    Matrix::from_fn(rows.len(), rows[0].len(), |i, j| {
        rat(rows[i][j].0, rows[i][j].1)
    })
}

fn vectorize(game: &BimatrixGame<Rational>) -> Vec<Rational> {
    game.a().iter().chain(game.b().iter()).cloned().collect()
}

fn corner_pattern(m: usize, n: usize, i: usize, j: usize) -> Matrix<Rational> {
    Matrix::from_fn(m, n, |r, c| {
        if (r, c) == (i, j) || (r, c) == (i + 1, j + 1) {
            int(1)
        } else if (r, c) == (i + 1, j) || (r, c) == (i, j + 1) {
            int(-1)
        } else {
            int(0)
        }
    })
}

fn unit_matrix(m: usize, n: usize, i: usize, j: usize) -> Matrix<Rational> {
    Matrix::from_fn(m, n, |r, c| if (r, c) == (i, j) { int(1) } else { int(0) })
}

fn zero(m: usize, n: usize) -> Matrix<Rational> {
    Matrix::zeros(m, n)
}

fn game(a: Matrix<Rational>, b: Matrix<Rational>) -> BimatrixGame<Rational> {
    BimatrixGame::new(a, b).unwrap()
}

/// Basis of the normalized-potential subspace: images of the unit
/// matrices (all but one) under `K -> (K - colMeans, K - rowMeans)`.
fn potential_basis(m: usize, n: usize) -> Vec<BimatrixGame<Rational>> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..n {
            if (i, j) == (m - 1, n - 1) {
                continue;
            }
            let k = unit_matrix(m, n, i, j);
            let col_means = k.col_means();
            let row_means = k.row_means();
            let a = Matrix::from_fn(m, n, |r, c| k.get(r, c).clone() - col_means[c].clone());
            let b = Matrix::from_fn(m, n, |r, c| k.get(r, c).clone() - row_means[r].clone());
            out.push(game(a, b));
        }
    }
    out
}

/// Basis of the normalized-harmonic subspace: `(n C, -m C)` over the
/// corner patterns `C`.
fn harmonic_subspace_basis(m: usize, n: usize) -> Vec<BimatrixGame<Rational>> {
    let mut out = Vec::new();
    for i in 0..m - 1 {
        for j in 0..n - 1 {
            let c = corner_pattern(m, n, i, j);
            out.push(game(c.scale(&int(n as i64)), c.scale(&int(-(m as i64)))));
        }
    }
    out
}

/// Basis of the non-strategic subspace.
fn nonstrategic_basis(m: usize, n: usize) -> Vec<BimatrixGame<Rational>> {
    let mut out = Vec::new();
    for j in 0..n {
        let a = Matrix::from_fn(m, n, |_, c| if c == j { int(1) } else { int(0) });
        out.push(game(a, zero(m, n)));
    }
    for i in 0..m {
        let b = Matrix::from_fn(m, n, |r, _| if r == i { int(1) } else { int(0) });
        out.push(game(zero(m, n), b));
    }
    out
}

/// Basis of the doubly-centered identical-interest subspace `(C, C)`.
fn identical_normalized_basis(m: usize, n: usize) -> Vec<BimatrixGame<Rational>> {
    let mut out = Vec::new();
    for i in 0..m - 1 {
        for j in 0..n - 1 {
            let c = corner_pattern(m, n, i, j);
            out.push(game(c.clone(), c));
        }
    }
    out
}

/// Basis of the doubly-centered zero-sum subspace `(C, -C)`.
fn zero_sum_normalized_basis(m: usize, n: usize) -> Vec<BimatrixGame<Rational>> {
    let mut out = Vec::new();
    for i in 0..m - 1 {
        for j in 0..n - 1 {
            let c = corner_pattern(m, n, i, j);
            out.push(game(c.clone(), c.neg()));
        }
    }
    out
}

/// Basis of the dominant-pair class (`u 1^T + 1 x^T` on each side).
fn dominant_basis(m: usize, n: usize) -> Vec<BimatrixGame<Rational>> {
    let mut out = Vec::new();
    for i in 0..m {
        let a = Matrix::from_fn(m, n, |r, _| if r == i { int(1) } else { int(0) });
        out.push(game(a, zero(m, n)));
    }
    for j in 0..n - 1 {
        let a = Matrix::from_fn(m, n, |_, c| if c == j { int(1) } else { int(0) });
        out.push(game(a, zero(m, n)));
    }
    for j in 0..n {
        let b = Matrix::from_fn(m, n, |_, c| if c == j { int(1) } else { int(0) });
        out.push(game(zero(m, n), b));
    }
    for i in 0..m - 1 {
        let b = Matrix::from_fn(m, n, |r, _| if r == i { int(1) } else { int(0) });
        out.push(game(zero(m, n), b));
    }
    out
}

/// Exact Gaussian elimination over the rationals.
fn solve_exact(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Vec<Rational> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero_value())
            .expect("basis spans the space");
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let pivot_row = m[col].clone();
        let pivot_val = pivot_row[col].clone();
        for row in col + 1..n {
            if m[row][col].is_zero_value() {
                continue;
            }
            let factor = m[row][col].clone() / pivot_val.clone();
            for (cell, p) in m[row].iter_mut().zip(&pivot_row).skip(col) {
                *cell = cell.clone() - factor.clone() * p.clone();
            }
            rhs[row] = rhs[row].clone() - factor * rhs[col].clone();
        }
    }
    let mut x = vec![int(0); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for (k, xv) in x.iter().enumerate().skip(row + 1) {
            acc -= m[row][k].clone() * xv.clone();
        }
        x[row] = acc / m[row][row].clone();
    }
    x
}

/// Least-squares projection of `target` onto the concatenated bases via
/// the normal equations `(M^T M) x = M^T g`, solved exactly; returns
/// one reassembled game per basis group.
fn project_onto(
    target: &BimatrixGame<Rational>,
    groups: &[Vec<BimatrixGame<Rational>>],
) -> Vec<BimatrixGame<Rational>> {
    let columns: Vec<Vec<Rational>> = groups
        .iter()
        .flatten()
        .map(vectorize)
        .collect();
    let g = vectorize(target);
    let dim = columns.len();
    assert_eq!(dim, g.len(), "bases must span the whole game space");

    let dot = |a: &[Rational], b: &[Rational]| {
        a.iter()
            .zip(b)
            .fold(int(0), |acc, (x, y)| acc + x.clone() * y.clone())
    };
    let mut gram = vec![vec![int(0); dim]; dim];
    let mut rhs = vec![int(0); dim];
    for r in 0..dim {
        for c in 0..dim {
            gram[r][c] = dot(&columns[r], &columns[c]);
        }
        rhs[r] = dot(&columns[r], &g);
    }
    let coeffs = solve_exact(gram, rhs);

    let mut parts = Vec::new();
    let mut offset = 0;
    for group in groups {
        let mut acc = BimatrixGame::zero(target.m(), target.n());
        for basis_game in group {
            acc = acc
                .add(&basis_game.scale(&coeffs[offset]))
                .expect("same dimensions");
            offset += 1;
        }
        parts.push(acc);
    }
    parts
}

/// Oracle for the potential/harmonic/non-strategic split.
pub fn oracle_hodge(
    game: &BimatrixGame<Rational>,
) -> (
    BimatrixGame<Rational>,
    BimatrixGame<Rational>,
    BimatrixGame<Rational>,
) {
    let (m, n) = (game.m(), game.n());
    let parts = project_onto(
        game,
        &[
            potential_basis(m, n),
            harmonic_subspace_basis(m, n),
            nonstrategic_basis(m, n),
        ],
    );
    let mut it = parts.into_iter();
    (
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    )
}

/// Oracle for the identical-interest/zero-sum/dominant split.
pub fn oracle_strategic(
    game: &BimatrixGame<Rational>,
) -> (
    BimatrixGame<Rational>,
    BimatrixGame<Rational>,
    BimatrixGame<Rational>,
) {
    let (m, n) = (game.m(), game.n());
    let parts = project_onto(
        game,
        &[
            identical_normalized_basis(m, n),
            zero_sum_normalized_basis(m, n),
            dominant_basis(m, n),
        ],
    );
    let mut it = parts.into_iter();
    (
        it.next().unwrap(),
        it.next().unwrap(),
        it.next().unwrap(),
    )
}
