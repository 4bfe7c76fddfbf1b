//! Reproduction harness: built-in reference games, lambda-mixing of
//! decomposed components, classification sweeps, and threshold
//! localization.

use std::str::FromStr;

use rayon::prelude::*;

use crate::decompose::{double_center, hodge_decompose};
use crate::dfp::{detect_cycle, run_dfp, CycleDescriptor, DfpConfig, DfpInit};
use crate::equivalence::{classify, is_in_subspace, ClassLabel, Subspace};
use crate::error::{Error, Result};
use crate::game::{BimatrixGame, MixedProfile};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Reference games with exact integer payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinGame {
    /// The classic 3x3 game on which fictitious play fails to converge
    /// from asymmetric starts.
    Shapley,
    /// The 3x3 zero-sum-equivalent game `(2Z, -3Z)` used for the
    /// mixing-threshold experiments.
    Example1,
}

impl FromStr for BuiltinGame {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "shapley" => Ok(BuiltinGame::Shapley),
            "example1" => Ok(BuiltinGame::Example1),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

impl BuiltinGame {
    pub fn name(&self) -> &'static str {
        match self {
            BuiltinGame::Shapley => "shapley",
            BuiltinGame::Example1 => "example1",
        }
    }
}

/// Returns the named reference game.
pub fn builtin<S: Scalar>(name: BuiltinGame) -> Result<BimatrixGame<S>> {
    match name {
        BuiltinGame::Shapley => BimatrixGame::from_int_rows(
            &[&[0, 2, 1], &[1, 0, 2], &[2, 1, 0]],
            &[&[0, 1, 2], &[2, 0, 1], &[1, 2, 0]],
        ),
        BuiltinGame::Example1 => BimatrixGame::from_int_rows(
            &[&[-14, -20, -14], &[18, 14, 2], &[-18, 0, -16]],
            &[&[21, 30, 21], &[-27, -21, -3], &[27, 0, 24]],
        ),
    }
}

/// A mixing specification `lambda * P + (1 - lambda) * H` over verified
/// potential and harmonic components.
#[derive(Debug, Clone)]
pub struct MixSpec<S: Scalar> {
    potential: BimatrixGame<S>,
    harmonic: BimatrixGame<S>,
    lambda: S,
}

impl<S: Scalar> MixSpec<S> {
    pub fn new(potential: BimatrixGame<S>, harmonic: BimatrixGame<S>, lambda: S) -> Result<Self> {
        if !is_in_subspace(&potential, Subspace::Potential) {
            return Err(Error::MembershipViolation(
                "first component is not a normalized potential game".into(),
            ));
        }
        if !is_in_subspace(&harmonic, Subspace::Harmonic) {
            return Err(Error::MembershipViolation(
                "second component is not a normalized harmonic game".into(),
            ));
        }
        if !potential.a().same_shape(harmonic.a()) {
            return Err(Error::DimensionMismatch {
                expected_rows: potential.m(),
                expected_cols: potential.n(),
                got_rows: harmonic.m(),
                got_cols: harmonic.n(),
            });
        }
        Ok(MixSpec {
            potential,
            harmonic,
            lambda,
        })
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }
}

/// `lambda * P + (1 - lambda) * H`.
pub fn mix<S: Scalar>(spec: &MixSpec<S>) -> BimatrixGame<S> {
    mix_components(&spec.potential, &spec.harmonic, &spec.lambda)
}

/// Unchecked mixing of two same-shape games.
pub fn mix_components<S: Scalar>(
    potential: &BimatrixGame<S>,
    harmonic: &BimatrixGame<S>,
    lambda: &S,
) -> BimatrixGame<S> {
    let one_minus = S::one() - lambda.clone();
    potential
        .scale(lambda)
        .add(&harmonic.scale(&one_minus))
        .expect("same dimensions")
}

/// Per-lambda record of a classification-plus-dynamics sweep.
#[derive(Debug, Clone)]
pub struct SweepRecord<S: Scalar> {
    pub lambda: S,
    pub label: ClassLabel,
    pub converged: bool,
    pub final_me: f64,
    pub final_u: f64,
    pub final_profile: MixedProfile<f64>,
    pub cycle: Option<CycleDescriptor>,
}

/// Classifies and plays `lambda * P + (1 - lambda) * H` for every grid
/// point. Classification runs in the input backend; dynamics run in the
/// float backend. Records come back ordered by grid position regardless
/// of scheduling.
pub fn lambda_sweep<S: Scalar>(
    potential: &BimatrixGame<S>,
    harmonic: &BimatrixGame<S>,
    grid: &[S],
    init: (usize, usize),
    cfg: &DfpConfig<f64>,
) -> Result<Vec<SweepRecord<S>>> {
    if grid.is_empty() {
        return Err(Error::PreconditionViolated("empty lambda grid".into()));
    }
    // Membership and shape checks once up front.
    MixSpec::new(potential.clone(), harmonic.clone(), grid[0].clone())?;

    grid.par_iter()
        .map(|lambda| {
            let game = mix_components(potential, harmonic, lambda);
            let label = classify(&game).label;
            let float_game = game.to_f64();
            let traj = run_dfp(&float_game, DfpInit::Pure(init.0, init.1), cfg)?;
            let last = traj.samples.last().expect("runs record a final sample");
            Ok(SweepRecord {
                lambda: lambda.clone(),
                label,
                converged: traj.converged,
                final_me: last.report.me,
                final_u: last.report.u,
                final_profile: traj.final_profile.clone(),
                cycle: detect_cycle(&traj.br_stream),
            })
        })
        .collect()
}

/// Locates the classification flip between zero-sum-equivalent and
/// identical-interest-equivalent mixes.
///
/// Float backend: bisection on the classifier label down to `tol`.
/// Exact backend: solves the linear entry equations that make one
/// centered payoff matrix vanish, returning the exact rational root.
pub fn find_class_threshold<S: Scalar>(
    potential: &BimatrixGame<S>,
    harmonic: &BimatrixGame<S>,
    lo: &S,
    hi: &S,
    tol: &S,
) -> Result<S> {
    let label_at = |lambda: &S| classify(&mix_components(potential, harmonic, lambda)).label;
    let lo_label = label_at(lo);
    let hi_label = label_at(hi);
    let flips = matches!(
        (lo_label, hi_label),
        (
            ClassLabel::ZeroSumEquivalent,
            ClassLabel::IdenticalInterestEquivalent
        ) | (
            ClassLabel::IdenticalInterestEquivalent,
            ClassLabel::ZeroSumEquivalent
        )
    );
    if !flips {
        return Err(Error::BracketInvalid {
            lo_label: lo_label.to_string(),
            hi_label: hi_label.to_string(),
        });
    }

    if S::EXACT {
        return exact_threshold(potential, harmonic, lo, hi);
    }

    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let half = S::from_ratio(1, 2);
    while (hi.clone() - lo.clone()).abs() > *tol {
        let mid = (lo.clone() + hi.clone()) * half.clone();
        if label_at(&mid) == lo_label {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * half)
}

/// Roots of the per-side centered-matrix equations
/// `lambda C(side_P) + (1 - lambda) C(side_H) = 0`; a consistent root
/// inside the bracket puts the mix in the one-sided dominant class.
fn exact_threshold<S: Scalar>(
    potential: &BimatrixGame<S>,
    harmonic: &BimatrixGame<S>,
    lo: &S,
    hi: &S,
) -> Result<S> {
    let mut candidates = Vec::new();
    for (side_p, side_h) in [
        (potential.a(), harmonic.a()),
        (potential.b(), harmonic.b()),
    ] {
        if let Some(root) = affine_matrix_root(&double_center(side_p), &double_center(side_h)) {
            if root > *lo && root < *hi {
                candidates.push(root);
            }
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    candidates.dedup();
    candidates
        .into_iter()
        .next()
        .ok_or_else(|| Error::PreconditionViolated(
            "no dominant-class root inside the bracket".into(),
        ))
}

/// The `lambda` with `lambda * cp + (1 - lambda) * ch = 0` entrywise,
/// when the per-entry linear equations are consistent.
fn affine_matrix_root<S: Scalar>(cp: &Matrix<S>, ch: &Matrix<S>) -> Option<S> {
    let mut root: Option<S> = None;
    for i in 0..cp.rows() {
        for j in 0..cp.cols() {
            let coeff = cp.get(i, j).clone() - ch.get(i, j).clone();
            let offset = ch.get(i, j).clone();
            if coeff.is_zero_value() {
                if !offset.is_zero_value() {
                    return None;
                }
                continue;
            }
            let candidate = -offset / coeff;
            match &root {
                None => root = Some(candidate),
                Some(r) if *r == candidate => {}
                Some(_) => return None,
            }
        }
    }
    root
}

/// Terminal-metric sweep over mixes of the Shapley game's own
/// decomposition, from the asymmetric start `(1, 2)` (1-based), for
/// qualitative curve checks.
pub fn shapley_metric_sweep(grid: &[f64], cfg: &DfpConfig<f64>) -> Result<Vec<SweepRecord<f64>>> {
    let shapley: BimatrixGame<f64> = builtin(BuiltinGame::Shapley)?;
    let parts = hodge_decompose(&shapley);
    lambda_sweep(&parts.potential, &parts.harmonic, grid, (0, 1), cfg)
}

/// Centered moving average with an odd window, same length as the
/// input; the window shrinks symmetrically near the edges.
pub fn moving_average(series: &[f64], window: usize) -> Vec<f64> {
    assert!(window % 2 == 1, "window must be odd");
    let half = window / 2;
    (0..series.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(series.len());
            series[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Sign-change count of a derivative series plus its first and last
/// nonzero signs. Zero entries inherit the previous sign.
pub fn derivative_sign_profile(derivative: &[f64]) -> (usize, i8, i8) {
    let mut sign = 0i8;
    let mut changes = 0usize;
    let mut first_sign = 0i8;
    for &d in derivative {
        let s = if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            sign
        };
        if s != 0 && sign != 0 && s != sign {
            changes += 1;
        }
        if s != 0 && first_sign == 0 {
            first_sign = s;
        }
        if s != 0 {
            sign = s;
        }
    }
    (changes, first_sign, sign)
}

/// True when the series rises to a single peak and falls afterwards:
/// the sign of the discrete derivative changes exactly once, from
/// positive to negative.
pub fn is_one_peaked(series: &[f64]) -> bool {
    let derivative: Vec<f64> = series.windows(2).map(|w| w[1] - w[0]).collect();
    derivative_sign_profile(&derivative) == (1, 1, -1)
}

/// Largest jump between adjacent entries against the median jump;
/// the smoothness criterion asks for a ratio of at most 10.
pub fn max_over_median_jump(series: &[f64]) -> f64 {
    let mut jumps: Vec<f64> = series.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    if jumps.is_empty() {
        return 0.0;
    }
    jumps.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let median = jumps[jumps.len() / 2];
    let max = *jumps.last().expect("non-empty");
    if median == 0.0 {
        if max == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        max / median
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfp::TieRule;
    use crate::scalar::Rational;

    #[test]
    fn builtin_rows_match_published_payoffs() {
        let shapley: BimatrixGame<Rational> = builtin(BuiltinGame::Shapley).unwrap();
        assert_eq!(
            shapley.a().row(0),
            &[
                Rational::zero(),
                Rational::from_int(2),
                Rational::one()
            ]
        );
        let example1: BimatrixGame<Rational> = builtin(BuiltinGame::Example1).unwrap();
        assert_eq!(
            example1.a().row(1),
            &[
                Rational::from_int(18),
                Rational::from_int(14),
                Rational::from_int(2)
            ]
        );
        assert_eq!(
            example1.b().row(1),
            &[
                Rational::from_int(-27),
                Rational::from_int(-21),
                Rational::from_int(-3)
            ]
        );
        assert!(matches!(
            "foo".parse::<BuiltinGame>(),
            Err(Error::UnknownName(_))
        ));
    }

    #[test]
    fn example1_is_two_z_minus_three_z() {
        let example1: BimatrixGame<Rational> = builtin(BuiltinGame::Example1).unwrap();
        let z = example1.a().scale(&Rational::from_ratio(1, 2));
        assert_eq!(example1.b(), &z.scale(&Rational::from_int(-3)));
    }

    #[test]
    fn mix_endpoints() {
        let g: BimatrixGame<Rational> = builtin(BuiltinGame::Example1).unwrap();
        let parts = hodge_decompose(&g);
        let spec = MixSpec::new(
            parts.potential.clone(),
            parts.harmonic.clone(),
            Rational::zero(),
        )
        .unwrap();
        assert_eq!(mix(&spec), parts.harmonic);
        let spec = MixSpec::new(parts.potential.clone(), parts.harmonic.clone(), Rational::one())
            .unwrap();
        assert_eq!(mix(&spec), parts.potential);
    }

    #[test]
    fn mix_rejects_bad_memberships() {
        let g: BimatrixGame<Rational> = builtin(BuiltinGame::Shapley).unwrap();
        let parts = hodge_decompose(&g);
        assert!(matches!(
            MixSpec::new(g.clone(), parts.harmonic.clone(), Rational::one()),
            Err(Error::MembershipViolation(_))
        ));
        assert!(matches!(
            MixSpec::new(parts.potential.clone(), g, Rational::one()),
            Err(Error::MembershipViolation(_))
        ));
    }

    #[test]
    fn example1_mix_at_five_sixths_is_one_dominant() {
        let g: BimatrixGame<Rational> = builtin(BuiltinGame::Example1).unwrap();
        let parts = hodge_decompose(&g);
        let game = mix_components(
            &parts.potential,
            &parts.harmonic,
            &Rational::from_ratio(5, 6),
        );
        assert_eq!(classify(&game).label, ClassLabel::OneDominant);
    }

    #[test]
    fn exact_threshold_on_example1() {
        let g: BimatrixGame<Rational> = builtin(BuiltinGame::Example1).unwrap();
        let parts = hodge_decompose(&g);
        let root = find_class_threshold(
            &parts.potential,
            &parts.harmonic,
            &Rational::zero(),
            &Rational::one(),
            &Rational::zero(),
        )
        .unwrap();
        assert_eq!(root, Rational::from_ratio(5, 6));
    }

    #[test]
    fn float_threshold_bisection_matches() {
        let g: BimatrixGame<f64> = builtin(BuiltinGame::Example1).unwrap();
        let parts = hodge_decompose(&g);
        let root =
            find_class_threshold(&parts.potential, &parts.harmonic, &0.0, &1.0, &1e-6).unwrap();
        assert!((root - 5.0 / 6.0).abs() < 1e-6, "root = {root}");
    }

    #[test]
    fn threshold_rejects_same_label_bracket() {
        let g: BimatrixGame<Rational> = builtin(BuiltinGame::Example1).unwrap();
        let parts = hodge_decompose(&g);
        assert!(matches!(
            find_class_threshold(
                &parts.potential,
                &parts.harmonic,
                &Rational::zero(),
                &Rational::from_ratio(1, 2),
                &Rational::zero(),
            ),
            Err(Error::BracketInvalid { .. })
        ));
    }

    #[test]
    fn sweep_labels_flip_across_the_threshold() {
        let g: BimatrixGame<Rational> = builtin(BuiltinGame::Example1).unwrap();
        let parts = hodge_decompose(&g);
        let grid: Vec<Rational> = [
            (0, 1),
            (1, 2),
            (83, 100),
            (9, 10),
            (1, 1),
        ]
        .iter()
        .map(|&(n, d)| Rational::from_ratio(n, d))
        .collect();
        let cfg = DfpConfig::new(2_000, TieRule::LowestIndex, 5e-2, 2_000).unwrap();
        let records =
            lambda_sweep(&parts.potential, &parts.harmonic, &grid, (0, 0), &cfg).unwrap();
        let labels: Vec<ClassLabel> = records.iter().map(|r| r.label).collect();
        assert_eq!(
            labels,
            vec![
                ClassLabel::ZeroSumEquivalent,
                ClassLabel::ZeroSumEquivalent,
                ClassLabel::ZeroSumEquivalent,
                ClassLabel::IdenticalInterestEquivalent,
                ClassLabel::IdenticalInterestEquivalent,
            ]
        );
    }

    #[test]
    fn one_peak_detector() {
        assert!(is_one_peaked(&[0.1, 0.5, 0.9, 0.7, 0.2]));
        assert!(!is_one_peaked(&[0.5, 0.1, 0.9, 0.2]));
        assert!(!is_one_peaked(&[0.1, 0.2, 0.3]));
        assert!(is_one_peaked(&[0.1, 0.2, 0.2, 0.3, 0.1]));
    }

    #[test]
    fn moving_average_window() {
        let s = [0.0, 1.0, 2.0, 3.0, 4.0];
        let avg = moving_average(&s, 3);
        assert_eq!(avg[0], 0.5);
        assert_eq!(avg[2], 2.0);
        assert_eq!(avg[4], 3.5);
    }
}
