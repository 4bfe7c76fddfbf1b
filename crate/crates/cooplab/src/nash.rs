//! Equilibrium enumeration for small games by support enumeration.
//!
//! Used to supply the known-equilibria set that the convergence
//! certificate excludes; equal-size supports cover all equilibria of
//! nondegenerate games. Intended for games no larger than 4x4.

use crate::game::{BimatrixGame, MixedProfile};

/// Solves `M x = rhs` by Gaussian elimination with partial pivoting.
pub(crate) fn solve_linear(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&a, &b| {
            m[a][col]
                .abs()
                .partial_cmp(&m[b][col].abs())
                .expect("finite entries")
        })?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let pivot_row = m[col].clone();
        for row in col + 1..n {
            let factor = m[row][col] / pivot_row[col];
            for (cell, p) in m[row].iter_mut().zip(&pivot_row).skip(col) {
                *cell -= factor * p;
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for (k, xv) in x.iter().enumerate().skip(row + 1) {
            acc -= m[row][k] * xv;
        }
        x[row] = acc / m[row][row];
    }
    Some(x)
}

fn supports(len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << len) {
        out.push((0..len).filter(|i| mask & (1 << i) != 0).collect());
    }
    out
}

/// The opponent-side mixed strategy making every action in `support`
/// indifferent, if it exists and is feasible.
///
/// `payoff(k, j)` is the supported player's payoff for action `k` when
/// the opponent plays `j`; the strategy returned is the opponent's.
fn indifference_strategy(
    payoff: &dyn Fn(usize, usize) -> f64,
    support: &[usize],
    opp_support: &[usize],
    opp_len: usize,
    tol: f64,
) -> Option<Vec<f64>> {
    let k = opp_support.len();
    // Unknowns: opponent weights on its support, plus the common payoff u.
    // Rows: |support| indifference equations and one normalization.
    if support.len() != k {
        return None;
    }
    let n = k + 1;
    let mut m = vec![vec![0.0; n]; n];
    let mut rhs = vec![0.0; n];
    for (row, &i) in support.iter().enumerate() {
        for (col, &j) in opp_support.iter().enumerate() {
            m[row][col] = payoff(i, j);
        }
        m[row][k] = -1.0;
    }
    for cell in m[k].iter_mut().take(k) {
        *cell = 1.0;
    }
    rhs[k] = 1.0;
    let sol = solve_linear(m, rhs)?;
    let mut strategy = vec![0.0; opp_len];
    for (col, &j) in opp_support.iter().enumerate() {
        if sol[col] < -tol {
            return None;
        }
        strategy[j] = sol[col].max(0.0);
    }
    let total: f64 = strategy.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return None;
    }
    for v in &mut strategy {
        *v /= total;
    }
    Some(strategy)
}

/// All Nash equilibria found by equal-support enumeration, deduplicated.
pub fn support_enumeration(game: &BimatrixGame<f64>, tol: f64) -> Vec<MixedProfile<f64>> {
    let (m, n) = (game.m(), game.n());
    let row_supports = supports(m);
    let col_supports = supports(n);
    let mut found: Vec<MixedProfile<f64>> = Vec::new();

    for s1 in &row_supports {
        for s2 in &col_supports {
            if s1.len() != s2.len() {
                continue;
            }
            let a = |i: usize, j: usize| *game.a().get(i, j);
            let bt = |j: usize, i: usize| *game.b().get(i, j);
            let Some(q) = indifference_strategy(&a, s1, s2, n, tol) else {
                continue;
            };
            let Some(p) = indifference_strategy(&bt, s2, s1, m, tol) else {
                continue;
            };
            let Ok(profile) = MixedProfile::new(p, q) else {
                continue;
            };
            let Ok(report) = game.epsilon_report(&profile) else {
                continue;
            };
            if report.me > tol {
                continue;
            }
            let duplicate = found
                .iter()
                .any(|other| profile.linf_distance(other) < 1e-7);
            if !duplicate {
                found.push(profile);
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_pennies_has_unique_mixed_ne() {
        let g = BimatrixGame::from_int_rows(&[&[1, -1], &[-1, 1]], &[&[-1, 1], &[1, -1]])
            .unwrap();
        let nes = support_enumeration(&g, 1e-9);
        assert_eq!(nes.len(), 1);
        assert!((nes[0].p()[0] - 0.5).abs() < 1e-12);
        assert!((nes[0].q()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn shapley_uniform_is_the_unique_ne() {
        let g = BimatrixGame::from_int_rows(
            &[&[0, 2, 1], &[1, 0, 2], &[2, 1, 0]],
            &[&[0, 1, 2], &[2, 0, 1], &[1, 2, 0]],
        )
        .unwrap();
        let nes = support_enumeration(&g, 1e-9);
        assert_eq!(nes.len(), 1);
        let uniform = MixedProfile::uniform(3, 3);
        assert!(nes[0].linf_distance(&uniform) < 1e-9);
    }

    #[test]
    fn dominant_strategies_give_pure_ne() {
        // Prisoner's dilemma: defect/defect is the single equilibrium.
        let g = BimatrixGame::from_int_rows(&[&[3, 0], &[5, 1]], &[&[3, 5], &[0, 1]]).unwrap();
        let nes = support_enumeration(&g, 1e-9);
        assert_eq!(nes.len(), 1);
        assert!((nes[0].p()[1] - 1.0).abs() < 1e-12);
        assert!((nes[0].q()[1] - 1.0).abs() < 1e-12);
    }
}
