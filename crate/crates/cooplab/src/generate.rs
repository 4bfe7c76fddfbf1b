//! Seed-deterministic generators for the structured game classes used
//! by property suites and sweeps.
//!
//! Entries are kept to small rationals so that classification is
//! verifiable in the exact backend and desk-scale dynamics tolerances
//! hold in the float backend.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decompose::double_center;
use crate::error::{Error, Result};
use crate::game::BimatrixGame;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Game classes with constructive generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameClass {
    ZeroSum,
    IdenticalInterest,
    NonStrategic,
    NormalizedHarmonic,
    NormalizedPotential,
    /// Dominant-pair class: `(u 1^T + 1 x^T, 1 v^T + y 1^T)`.
    BClass,
    /// One-sided dominant class: exactly one payoff matrix is
    /// `u 1^T + 1 x^T` shaped.
    DClass,
    /// Strategically zero-sum equivalent: `(alpha Z, -beta Z) + E`.
    Sz,
    /// Strategically identical-interest equivalent:
    /// `(alpha I, beta I) + E`.
    Si,
}

impl fmt::Display for GameClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            GameClass::ZeroSum => "zero-sum",
            GameClass::IdenticalInterest => "identical-interest",
            GameClass::NonStrategic => "non-strategic",
            GameClass::NormalizedHarmonic => "normalized-harmonic",
            GameClass::NormalizedPotential => "normalized-potential",
            GameClass::BClass => "b-class",
            GameClass::DClass => "d-class",
            GameClass::Sz => "sz",
            GameClass::Si => "si",
        };
        f.write_str(name)
    }
}

impl FromStr for GameClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zero-sum" | "zerosum" | "z" => Ok(GameClass::ZeroSum),
            "identical-interest" | "i" => Ok(GameClass::IdenticalInterest),
            "non-strategic" | "e" => Ok(GameClass::NonStrategic),
            "normalized-harmonic" | "harmonic" | "h" => Ok(GameClass::NormalizedHarmonic),
            "normalized-potential" | "potential" | "p" => Ok(GameClass::NormalizedPotential),
            "b-class" | "b" => Ok(GameClass::BClass),
            "d-class" | "d" => Ok(GameClass::DClass),
            "sz" => Ok(GameClass::Sz),
            "si" => Ok(GameClass::Si),
            other => Err(Error::UnsupportedClass(other.to_string())),
        }
    }
}

fn entry<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    S::from_int(rng.gen_range(-4..=4))
}

fn int_matrix<S: Scalar>(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix<S> {
    Matrix::from_fn(m, n, |_, _| entry::<S>(rng))
}

fn int_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(-4..=4)).collect()
}

/// Positive scaling constant in {1/2, 1, 3/2, 2, 3}.
fn positive_scale<S: Scalar>(rng: &mut ChaCha8Rng) -> S {
    let (num, den) = [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1)][rng.gen_range(0..5)];
    S::from_ratio(num, den)
}

fn nonstrategic<S: Scalar>(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BimatrixGame<S> {
    let u = int_vec(rng, n);
    let v = int_vec(rng, m);
    let a = Matrix::from_fn(m, n, |_, j| S::from_int(u[j]));
    let b = Matrix::from_fn(m, n, |i, _| S::from_int(v[i]));
    BimatrixGame::new(a, b).expect("shapes match by construction")
}

fn dominant_pair<S: Scalar>(rng: &mut ChaCha8Rng, m: usize, n: usize) -> BimatrixGame<S> {
    let u = int_vec(rng, m);
    let x = int_vec(rng, n);
    let v = int_vec(rng, n);
    let y = int_vec(rng, m);
    let a = Matrix::from_fn(m, n, |i, j| S::from_int(u[i] + x[j]));
    let b = Matrix::from_fn(m, n, |i, j| S::from_int(v[j] + y[i]));
    BimatrixGame::new(a, b).expect("shapes match by construction")
}

/// Draws a matrix whose doubly centered part is nonzero.
fn centered_nonzero<S: Scalar>(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix<S> {
    loop {
        let candidate: Matrix<S> = int_matrix(rng, m, n);
        if !double_center(&candidate).is_zero() {
            return candidate;
        }
    }
}

/// Deterministic-in-seed generator; the output verifiably belongs to
/// the requested class.
pub fn random_game<S: Scalar>(
    class: GameClass,
    m: usize,
    n: usize,
    seed: u64,
) -> Result<BimatrixGame<S>> {
    if m < 1 || n < 1 {
        return Err(Error::DimensionTooSmall { min: 1 });
    }
    // Classes defined through a nonzero doubly centered matrix need
    // both dimensions at least 2.
    if matches!(
        class,
        GameClass::NormalizedHarmonic
            | GameClass::NormalizedPotential
            | GameClass::DClass
            | GameClass::Sz
            | GameClass::Si
    ) && (m < 2 || n < 2)
    {
        return Err(Error::DimensionTooSmall { min: 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let game = match class {
        GameClass::ZeroSum => {
            let a: Matrix<S> = int_matrix(&mut rng, m, n);
            let b = a.neg();
            BimatrixGame::new(a, b).expect("shapes match by construction")
        }
        GameClass::IdenticalInterest => {
            let a: Matrix<S> = int_matrix(&mut rng, m, n);
            BimatrixGame::new(a.clone(), a).expect("shapes match by construction")
        }
        GameClass::NonStrategic => nonstrategic(&mut rng, m, n),
        GameClass::NormalizedHarmonic => {
            let z0 = double_center(&centered_nonzero::<S>(&mut rng, m, n));
            let a = z0.scale(&S::from_int(n as i64));
            let b = z0.scale(&S::from_int(-(m as i64)));
            BimatrixGame::new(a, b).expect("shapes match by construction")
        }
        GameClass::NormalizedPotential => {
            // A = K - 1 colMeans(K), B = K - rowMeans(K) 1^T for a random
            // kernel K: normalized by construction with C(A - B) = 0.
            let k = centered_nonzero::<S>(&mut rng, m, n);
            let col_means = k.col_means();
            let row_means = k.row_means();
            let a = Matrix::from_fn(m, n, |i, j| k.get(i, j).clone() - col_means[j].clone());
            let b = Matrix::from_fn(m, n, |i, j| k.get(i, j).clone() - row_means[i].clone());
            BimatrixGame::new(a, b).expect("shapes match by construction")
        }
        GameClass::BClass => dominant_pair(&mut rng, m, n),
        GameClass::DClass => {
            let u = int_vec(&mut rng, m);
            let x = int_vec(&mut rng, n);
            let shaped = Matrix::from_fn(m, n, |i, j| S::from_int(u[i] + x[j]));
            let free = centered_nonzero::<S>(&mut rng, m, n);
            if rng.gen_bool(0.5) {
                BimatrixGame::new(shaped, free).expect("shapes match by construction")
            } else {
                BimatrixGame::new(free, shaped).expect("shapes match by construction")
            }
        }
        GameClass::Sz => {
            let z = centered_nonzero::<S>(&mut rng, m, n);
            let alpha: S = positive_scale(&mut rng);
            let beta: S = positive_scale(&mut rng);
            let core = BimatrixGame::new(z.scale(&alpha), z.scale(&-beta))
                .expect("shapes match by construction");
            core.add(&nonstrategic(&mut rng, m, n))
                .expect("same dimensions")
        }
        GameClass::Si => {
            let i = centered_nonzero::<S>(&mut rng, m, n);
            let alpha: S = positive_scale(&mut rng);
            let beta: S = positive_scale(&mut rng);
            let core = BimatrixGame::new(i.scale(&alpha), i.scale(&beta))
                .expect("shapes match by construction");
            core.add(&nonstrategic(&mut rng, m, n))
                .expect("same dimensions")
        }
    };
    Ok(game)
}
