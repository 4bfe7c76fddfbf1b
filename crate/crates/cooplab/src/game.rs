//! The linear space of bimatrix games: construction, algebra, payoffs,
//! best responses, and equilibrium approximation metrics.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{argmax_set, max_value, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    One,
    Two,
}

/// A two-player game in bimatrix form: `a[i][j]` is the row player's
/// payoff and `b[i][j]` the column player's, for actions `i` and `j`
/// (0-based).
#[derive(Clone, PartialEq, Eq)]
pub struct BimatrixGame<S> {
    a: Matrix<S>,
    b: Matrix<S>,
}

impl<S: Scalar> BimatrixGame<S> {
    /// Builds a game, rejecting mismatched shapes and non-finite entries.
    pub fn new(a: Matrix<S>, b: Matrix<S>) -> Result<Self> {
        if !a.same_shape(&b) {
            return Err(Error::DimensionMismatch {
                expected_rows: a.rows(),
                expected_cols: a.cols(),
                got_rows: b.rows(),
                got_cols: b.cols(),
            });
        }
        for (mat, _) in [(&a, "A"), (&b, "B")] {
            for i in 0..mat.rows() {
                for j in 0..mat.cols() {
                    if !mat.get(i, j).is_finite() {
                        return Err(Error::NonFiniteEntry { row: i, col: j });
                    }
                }
            }
        }
        Ok(BimatrixGame { a, b })
    }

    pub fn from_int_rows(a: &[&[i64]], b: &[&[i64]]) -> Result<Self> {
        Self::new(Matrix::from_int_rows(a), Matrix::from_int_rows(b))
    }

    pub fn zero(m: usize, n: usize) -> Self {
        BimatrixGame {
            a: Matrix::zeros(m, n),
            b: Matrix::zeros(m, n),
        }
    }

    /// Row player's action count.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Column player's action count.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &Matrix<S> {
        &self.a
    }

    pub fn b(&self) -> &Matrix<S> {
        &self.b
    }

    /// The matrix `A + B`, the per-cell payoff sum read by the cycle
    /// diagnostics.
    pub fn payoff_sum(&self) -> Matrix<S> {
        self.a.add(&self.b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.a.same_shape(&other.a) {
            return Err(Error::DimensionMismatch {
                expected_rows: self.m(),
                expected_cols: self.n(),
                got_rows: other.m(),
                got_cols: other.n(),
            });
        }
        Ok(BimatrixGame {
            a: self.a.add(&other.a),
            b: self.b.add(&other.b),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        BimatrixGame {
            a: self.a.scale(c),
            b: self.b.scale(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn max_abs(&self) -> S {
        let a = self.a.max_abs();
        let b = self.b.max_abs();
        if a > b {
            a
        } else {
            b
        }
    }

    pub fn to_f64(&self) -> BimatrixGame<f64> {
        BimatrixGame {
            a: self.a.map_to(Scalar::to_f64),
            b: self.b.map_to(Scalar::to_f64),
        }
    }

    /// `(p^T A q, p^T B q)`.
    pub fn payoffs(&self, profile: &MixedProfile<S>) -> Result<(S, S)> {
        self.check_profile(profile)?;
        let aq = self.a.matvec(profile.q());
        let bq = self.b.matvec(profile.q());
        let dot = |v: &[S], w: &[S]| {
            v.iter()
                .zip(w)
                .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        };
        Ok((dot(profile.p(), &aq), dot(profile.p(), &bq)))
    }

    /// Payoff vector a player maximizes over against the opponent's
    /// mixed strategy: `A q` for player 1, `p^T B` for player 2.
    pub fn response_values(&self, player: Player, opponent: &[S]) -> Result<Vec<S>> {
        match player {
            Player::One => {
                if opponent.len() != self.n() {
                    return Err(self.vector_mismatch(opponent.len()));
                }
                Ok(self.a.matvec(opponent))
            }
            Player::Two => {
                if opponent.len() != self.m() {
                    return Err(self.vector_mismatch(opponent.len()));
                }
                Ok(self.b.vecmat(opponent))
            }
        }
    }

    /// All best responses of `player` against `opponent`, ascending.
    /// Ties are resolved within the backend tie tolerance.
    pub fn best_response_set(&self, player: Player, opponent: &[S]) -> Result<Vec<usize>> {
        let values = self.response_values(player, opponent)?;
        Ok(argmax_set(&values, &S::tie_tol()))
    }

    /// Best-response utility, regrets, and exploitability at a profile.
    pub fn epsilon_report(&self, profile: &MixedProfile<S>) -> Result<EpsilonReport<S>> {
        self.check_profile(profile)?;
        let aq = self.a.matvec(profile.q());
        let pb = self.b.vecmat(profile.p());
        let dot = |v: &[S], w: &[S]| {
            v.iter()
                .zip(w)
                .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        };
        let p_payoff = dot(profile.p(), &aq);
        let q_payoff = dot(&pb, profile.q());
        let best1 = max_value(&aq);
        let best2 = max_value(&pb);

        let u = best1.clone() + best2.clone();
        let v = p_payoff.clone() + q_payoff.clone();
        let se = u.clone() - v.clone();
        let regret1 = best1 - p_payoff;
        let regret2 = best2 - q_payoff;
        let me = if regret1 > regret2 { regret1 } else { regret2 };
        Ok(EpsilonReport { u, v, se, me })
    }

    /// True iff the profile's maximum exploitability is at most `eps`.
    pub fn is_nash(&self, profile: &MixedProfile<S>, eps: &S) -> Result<bool> {
        if *eps < S::zero() {
            return Err(Error::NegativeEpsilon);
        }
        Ok(self.epsilon_report(profile)?.me <= *eps)
    }

    fn check_profile(&self, profile: &MixedProfile<S>) -> Result<()> {
        if profile.p().len() != self.m() || profile.q().len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected_rows: self.m(),
                expected_cols: self.n(),
                got_rows: profile.p().len(),
                got_cols: profile.q().len(),
            });
        }
        Ok(())
    }

    fn vector_mismatch(&self, got: usize) -> Error {
        Error::DimensionMismatch {
            expected_rows: self.m(),
            expected_cols: self.n(),
            got_rows: got,
            got_cols: got,
        }
    }
}

/// Constructs a game from payoff rows; alias of [`BimatrixGame::new`]
/// on pre-built matrices.
pub fn make_game<S: Scalar>(a: Vec<Vec<S>>, b: Vec<Vec<S>>) -> Result<BimatrixGame<S>> {
    BimatrixGame::new(Matrix::from_rows(a)?, Matrix::from_rows(b)?)
}

impl<S: Scalar> fmt::Debug for BimatrixGame<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BimatrixGame {}x{} [", self.m(), self.n())?;
        for i in 0..self.m() {
            write!(f, "  ")?;
            for j in 0..self.n() {
                write!(
                    f,
                    "{}, {}{}",
                    self.a.get(i, j),
                    self.b.get(i, j),
                    if j + 1 < self.n() { " | " } else { "" }
                )?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A pair of mixed strategies, one per player.
#[derive(Clone, PartialEq, Eq)]
pub struct MixedProfile<S> {
    p: Vec<S>,
    q: Vec<S>,
}

impl<S: Scalar> MixedProfile<S> {
    pub fn new(p: Vec<S>, q: Vec<S>) -> Result<Self> {
        validate_simplex(&p, "p")?;
        validate_simplex(&q, "q")?;
        Ok(MixedProfile { p, q })
    }

    /// Vertex profile `(e_i, e_j)`, 0-based actions.
    pub fn pure(i: usize, j: usize, m: usize, n: usize) -> Result<Self> {
        if i >= m || j >= n {
            return Err(Error::InvalidProfile(format!(
                "pure actions ({i}, {j}) out of range for {m}x{n}"
            )));
        }
        let mut p = vec![S::zero(); m];
        p[i] = S::one();
        let mut q = vec![S::zero(); n];
        q[j] = S::one();
        Ok(MixedProfile { p, q })
    }

    pub fn uniform(m: usize, n: usize) -> Self {
        MixedProfile {
            p: vec![S::from_ratio(1, m as i64); m],
            q: vec![S::from_ratio(1, n as i64); n],
        }
    }

    pub fn p(&self) -> &[S] {
        &self.p
    }

    pub fn q(&self) -> &[S] {
        &self.q
    }

    pub fn to_f64(&self) -> MixedProfile<f64> {
        MixedProfile {
            p: self.p.iter().map(Scalar::to_f64).collect(),
            q: self.q.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// L-inf distance between two profiles of identical shape.
    pub fn linf_distance(&self, other: &Self) -> S {
        let mut best = S::zero();
        for (a, b) in self.p.iter().zip(&other.p).chain(self.q.iter().zip(&other.q)) {
            let d = (a.clone() - b.clone()).abs();
            if d > best {
                best = d;
            }
        }
        best
    }
}

impl<S: Scalar> fmt::Debug for MixedProfile<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[S]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "(p = [{}], q = [{}])", join(&self.p), join(&self.q))
    }
}

fn validate_simplex<S: Scalar>(v: &[S], name: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::InvalidProfile(format!("{name} is empty")));
    }
    let tol = S::simplex_tol();
    let mut sum = S::zero();
    for x in v {
        if !x.is_finite() {
            return Err(Error::InvalidProfile(format!("{name} has a non-finite entry")));
        }
        if *x < -tol.clone() {
            return Err(Error::InvalidProfile(format!(
                "{name} has a negative coordinate {x}"
            )));
        }
        sum = sum + x.clone();
    }
    if (sum.clone() - S::one()).abs() > tol {
        return Err(Error::InvalidProfile(format!("{name} sums to {sum}, not 1")));
    }
    Ok(())
}

/// Best-response utility `U`, realized sum `V = p^T (A+B) q`, the sum of
/// regrets `SE = U - V`, and the maximum exploitability `ME`.
///
/// `ME = 0` exactly characterizes a Nash equilibrium, and
/// `SE >= ME >= 0` always.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonReport<S> {
    pub u: S,
    pub v: S,
    pub se: S,
    pub me: S,
}
