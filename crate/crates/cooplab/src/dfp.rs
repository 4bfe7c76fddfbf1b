//! Discrete-time fictitious play: belief updates, tie-breaking,
//! convergence and cycle diagnostics.
//!
//! One round moves the beliefs from time `t` to `t + 1`:
//! `p(t+1) = (t p(t) + e_i) / (t + 1)` with `i` a best response to
//! `q(t)`, and symmetrically for `q`. Both responses read the time-`t`
//! beliefs (simultaneous update).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, EpsilonReport, MixedProfile, Player};
use crate::scalar::{max_value, min_value, Scalar};

/// Deterministic rules for picking one action out of a best-response
/// tie. The dynamics commit to a single action every round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    /// Smallest action index; the default, makes golden runs exact.
    LowestIndex,
    /// Keep the previous round's action while it stays optimal.
    StickyPrevious,
    /// Uniform choice among tied actions from a seeded stream.
    SeededRandom(u64),
}

/// Stateful tie-breaker (tracks per-player previous actions and the
/// random stream).
#[derive(Debug, Clone)]
pub struct TieBreaker {
    rule: TieRule,
    prev: [Option<usize>; 2],
    rng: Option<ChaCha8Rng>,
}

impl TieBreaker {
    pub fn new(rule: TieRule) -> Self {
        let rng = match rule {
            TieRule::SeededRandom(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        TieBreaker {
            rule,
            prev: [None, None],
            rng,
        }
    }

    /// Chooses one maximizer of `values` under the backend tie
    /// tolerance, without allocating.
    pub fn choose<S: Scalar>(&mut self, player: Player, values: &[S]) -> usize {
        let floor = max_value(values) - S::tie_tol();
        let slot = match player {
            Player::One => 0,
            Player::Two => 1,
        };
        let choice = match self.rule {
            TieRule::LowestIndex => values
                .iter()
                .position(|v| *v >= floor)
                .expect("max exists"),
            TieRule::StickyPrevious => {
                let keep = self.prev[slot].filter(|&k| values[k] >= floor);
                keep.unwrap_or_else(|| {
                    values.iter().position(|v| *v >= floor).expect("max exists")
                })
            }
            TieRule::SeededRandom(_) => {
                let count = values.iter().filter(|v| **v >= floor).count();
                let rng = self.rng.as_mut().expect("seeded rule carries a stream");
                let pick = rng.gen_range(0..count);
                values
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v >= floor)
                    .nth(pick)
                    .expect("pick < count")
                    .0
            }
        };
        self.prev[slot] = Some(choice);
        choice
    }

    /// Chooses from an explicit non-empty candidate set (ascending
    /// indices), applying the same rule.
    pub fn choose_among(&mut self, player: Player, candidates: &[usize]) -> usize {
        assert!(!candidates.is_empty());
        let slot = match player {
            Player::One => 0,
            Player::Two => 1,
        };
        let choice = match self.rule {
            TieRule::LowestIndex => candidates[0],
            TieRule::StickyPrevious => self.prev[slot]
                .filter(|k| candidates.contains(k))
                .unwrap_or(candidates[0]),
            TieRule::SeededRandom(_) => {
                let rng = self.rng.as_mut().expect("seeded rule carries a stream");
                candidates[rng.gen_range(0..candidates.len())]
            }
        };
        self.prev[slot] = Some(choice);
        choice
    }
}

/// Run parameters for [`run_dfp`].
#[derive(Debug, Clone)]
pub struct DfpConfig<S: Scalar> {
    pub rounds: u64,
    pub tie_rule: TieRule,
    /// Maximum exploitability below which the final beliefs count as
    /// converged.
    pub convergence_eps: S,
    /// Metric sampling stride.
    pub record_every: u64,
}

impl<S: Scalar> DfpConfig<S> {
    pub fn new(rounds: u64, tie_rule: TieRule, convergence_eps: S, record_every: u64) -> Result<Self> {
        if rounds < 1 {
            return Err(Error::PreconditionViolated("rounds must be at least 1".into()));
        }
        if record_every < 1 || record_every > rounds {
            return Err(Error::PreconditionViolated(
                "record_every must be in 1..=rounds".into(),
            ));
        }
        if convergence_eps < S::zero() {
            return Err(Error::NegativeEpsilon);
        }
        Ok(DfpConfig {
            rounds,
            tie_rule,
            convergence_eps,
            record_every,
        })
    }
}

/// Starting condition: a pure action pair (the usual setup) or full
/// mixed beliefs.
#[derive(Debug, Clone)]
pub enum DfpInit<S: Scalar> {
    Pure(usize, usize),
    Mixed(MixedProfile<S>),
}

#[derive(Debug, Clone)]
pub struct TrajectorySample<S: Scalar> {
    pub t: u64,
    pub profile: MixedProfile<S>,
    pub br_pair: (usize, usize),
    pub report: EpsilonReport<S>,
}

/// Output of a fictitious-play run.
#[derive(Debug, Clone)]
pub struct Trajectory<S: Scalar> {
    /// Metric samples at stride `record_every`, plus the first and
    /// final states; `t` strictly increasing.
    pub samples: Vec<TrajectorySample<S>>,
    /// The played action sequence: the initial pure pair (when the run
    /// starts from one) followed by the best-response pair chosen at
    /// every round.
    pub br_stream: Vec<(usize, usize)>,
    pub converged: bool,
    pub final_profile: MixedProfile<S>,
}

/// One belief update from time `t` to `t + 1`; returns the new profile
/// and the best-response pair read from the old one.
pub fn dfp_step<S: Scalar>(
    game: &BimatrixGame<S>,
    profile: &MixedProfile<S>,
    t: u64,
    tie: &mut TieBreaker,
) -> Result<(MixedProfile<S>, (usize, usize))> {
    let aq = game.response_values(Player::One, profile.q())?;
    let pb = game.response_values(Player::Two, profile.p())?;
    let i = tie.choose(Player::One, &aq);
    let j = tie.choose(Player::Two, &pb);
    let t_s = S::from_int(t as i64);
    let t1 = S::from_int(t as i64 + 1);
    let step = |v: &[S], target: usize| -> Vec<S> {
        v.iter()
            .enumerate()
            .map(|(k, x)| {
                let pulled = t_s.clone() * x.clone()
                    + if k == target { S::one() } else { S::zero() };
                pulled / t1.clone()
            })
            .collect()
    };
    let profile = MixedProfile::new(step(profile.p(), i), step(profile.q(), j))?;
    Ok((profile, (i, j)))
}

/// Iterates fictitious play for `cfg.rounds` rounds from `init`.
pub fn run_dfp<S: Scalar>(
    game: &BimatrixGame<S>,
    init: DfpInit<S>,
    cfg: &DfpConfig<S>,
) -> Result<Trajectory<S>> {
    let mut br_stream = Vec::with_capacity(cfg.rounds as usize + 1);
    let (mut p, mut q) = match init {
        DfpInit::Pure(i, j) => {
            let profile = MixedProfile::pure(i, j, game.m(), game.n())?;
            br_stream.push((i, j));
            (profile.p().to_vec(), profile.q().to_vec())
        }
        DfpInit::Mixed(profile) => {
            if profile.p().len() != game.m() || profile.q().len() != game.n() {
                return Err(Error::DimensionMismatch {
                    expected_rows: game.m(),
                    expected_cols: game.n(),
                    got_rows: profile.p().len(),
                    got_cols: profile.q().len(),
                });
            }
            (profile.p().to_vec(), profile.q().to_vec())
        }
    };

    let mut tie = TieBreaker::new(cfg.tie_rule);
    let mut aq = vec![S::zero(); game.m()];
    let mut pb = vec![S::zero(); game.n()];
    let mut samples = Vec::new();

    for t in 1..=cfg.rounds {
        game.a().matvec_into(&q, &mut aq);
        game.b().vecmat_into(&p, &mut pb);
        let i = tie.choose(Player::One, &aq);
        let j = tie.choose(Player::Two, &pb);
        br_stream.push((i, j));

        if t == 1 || t % cfg.record_every == 0 {
            let profile = MixedProfile::new(p.clone(), q.clone())?;
            let report = game.epsilon_report(&profile)?;
            samples.push(TrajectorySample {
                t,
                profile,
                br_pair: (i, j),
                report,
            });
        }

        let t_s = S::from_int(t as i64);
        let t1 = S::from_int(t as i64 + 1);
        for (k, x) in p.iter_mut().enumerate() {
            let bump = if k == i { S::one() } else { S::zero() };
            *x = (t_s.clone() * x.clone() + bump) / t1.clone();
        }
        for (k, x) in q.iter_mut().enumerate() {
            let bump = if k == j { S::one() } else { S::zero() };
            *x = (t_s.clone() * x.clone() + bump) / t1.clone();
        }
    }

    let final_profile = MixedProfile::new(p, q)?;
    let report = game.epsilon_report(&final_profile)?;
    let aq = game.response_values(Player::One, final_profile.q())?;
    let pb = game.response_values(Player::Two, final_profile.p())?;
    let final_pair = (
        tie.choose(Player::One, &aq),
        tie.choose(Player::Two, &pb),
    );
    let converged = report.me <= cfg.convergence_eps;
    samples.push(TrajectorySample {
        t: cfg.rounds + 1,
        profile: final_profile.clone(),
        br_pair: final_pair,
        report,
    });

    Ok(Trajectory {
        samples,
        br_stream,
        converged,
        final_profile,
    })
}

/// A periodic best-response pattern: `pairs` in cyclic order (rotated
/// so the lexicographically smallest pair comes first), where the
/// pattern begins in the observed stream, and how many full periods
/// were seen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleDescriptor {
    pub pairs: Vec<(usize, usize)>,
    pub entry_round: usize,
    pub repetitions: usize,
}

/// Detects an eventually-periodic best-response pattern.
///
/// Consecutive duplicate pairs are compressed away first, so run
/// lengths do not matter — under fictitious play they grow
/// geometrically, which also fixes the evidence bar: a period counts
/// as repeating three times once its starting pair has been seen
/// thrice, i.e. the trailing `2L + 1` compressed entries are
/// `L`-periodic (two complete traversals plus the confirmed re-entry).
pub fn detect_cycle(stream: &[(usize, usize)]) -> Option<CycleDescriptor> {
    if stream.len() < 4 {
        return None;
    }
    // (first raw index of the run, pair)
    let mut comp: Vec<(usize, (usize, usize))> = Vec::new();
    for (idx, &pair) in stream.iter().enumerate() {
        if comp.last().is_none_or(|&(_, prev)| prev != pair) {
            comp.push((idx, pair));
        }
    }

    // Eventually-constant stream: a single pair covering the trailing
    // half is a length-1 cycle.
    let (last_run_start, last_pair) = *comp.last().expect("non-empty stream");
    let last_run = stream.len() - last_run_start;
    if last_run >= 3 && last_run >= stream.len() / 2 {
        return Some(CycleDescriptor {
            pairs: vec![last_pair],
            entry_round: last_run_start,
            repetitions: last_run,
        });
    }

    let len = comp.len();
    let max_period = ((len - 1) / 2).min(96);
    for period in 1..=max_period {
        let anchored =
            (len - 2 * period - 1..len - period).all(|i| comp[i].1 == comp[i + period].1);
        if !anchored {
            continue;
        }
        // Extend the periodic tail backwards as far as it holds.
        let mut start = len - 2 * period - 1;
        while start > 0 && comp[start - 1].1 == comp[start - 1 + period].1 {
            start -= 1;
        }
        let repetitions = (len - start - 1) / period + 1;
        if repetitions < 3 {
            continue;
        }
        let window: Vec<(usize, usize)> = comp[len - period..].iter().map(|&(_, p)| p).collect();
        let min_pos = window
            .iter()
            .enumerate()
            .min_by_key(|&(_, p)| p)
            .expect("non-empty window")
            .0;
        let pairs: Vec<(usize, usize)> = window[min_pos..]
            .iter()
            .chain(&window[..min_pos])
            .copied()
            .collect();
        return Some(CycleDescriptor {
            pairs,
            entry_round: comp[start].0,
            repetitions,
        });
    }
    None
}

/// Values of `A + B` along a cycle, whether they all agree, and whether
/// the common value is the minimum entry of `A + B`.
#[derive(Debug, Clone)]
pub struct CycleSumCheck<S> {
    pub values: Vec<S>,
    pub all_equal: bool,
    pub equals_min: bool,
}

pub fn cycle_sum_check<S: Scalar>(
    game: &BimatrixGame<S>,
    cycle: &CycleDescriptor,
) -> Result<CycleSumCheck<S>> {
    let sum = game.payoff_sum();
    let mut values = Vec::with_capacity(cycle.pairs.len());
    for &(i, j) in &cycle.pairs {
        if i >= game.m() || j >= game.n() {
            return Err(Error::IndexOutOfRange {
                row: i,
                col: j,
                rows: game.m(),
                cols: game.n(),
            });
        }
        values.push(sum.get(i, j).clone());
    }
    let tol = S::tie_tol();
    let hi = max_value(&values);
    let lo = min_value(&values);
    let all_equal = (hi.clone() - lo.clone()) <= tol;
    let global_min = min_value(&sum.to_rows().concat());
    let equals_min = all_equal && (lo - global_min).abs() <= tol;
    Ok(CycleSumCheck {
        values,
        all_equal,
        equals_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{builtin, BuiltinGame};
    use crate::scalar::Rational;

    fn shapley() -> BimatrixGame<Rational> {
        builtin(BuiltinGame::Shapley).unwrap()
    }

    #[test]
    fn single_step_from_shapley_corner() {
        let g = shapley();
        let profile = MixedProfile::pure(0, 0, 3, 3).unwrap();
        let mut tie = TieBreaker::new(TieRule::LowestIndex);
        let (next, pair) = dfp_step(&g, &profile, 1, &mut tie).unwrap();
        // Against e_1 both players' payoff vectors are (0, 1, 2).
        assert_eq!(pair, (2, 2));
        let half = Rational::from_ratio(1, 2);
        assert_eq!(next.p(), &[half.clone(), Rational::zero(), half.clone()]);
        assert_eq!(next.q(), &[half.clone(), Rational::zero(), half]);
    }

    #[test]
    fn nonstrategic_game_always_picks_lowest() {
        let g: BimatrixGame<Rational> =
            BimatrixGame::from_int_rows(&[&[2, 2], &[2, 2]], &[&[7, 7], &[7, 7]]).unwrap();
        let mut tie = TieBreaker::new(TieRule::LowestIndex);
        let profile = MixedProfile::uniform(2, 2);
        let (_, pair) = dfp_step(&g, &profile, 3, &mut tie).unwrap();
        assert_eq!(pair, (0, 0));
    }

    #[test]
    fn update_magnitude_bound() {
        let g = shapley();
        let profile = MixedProfile::uniform(3, 3);
        let mut tie = TieBreaker::new(TieRule::LowestIndex);
        let t = 500;
        let (next, _) = dfp_step(&g, &profile, t, &mut tie).unwrap();
        let l1: Rational = profile
            .p()
            .iter()
            .zip(next.p())
            .map(|(a, b)| (a.clone() - b.clone()).abs())
            .fold(Rational::zero(), |acc, d| acc + d);
        assert!(l1 <= Rational::from_ratio(2, t as i64 + 1));
    }

    #[test]
    fn sticky_rule_keeps_previous_choice() {
        let g: BimatrixGame<Rational> =
            BimatrixGame::from_int_rows(&[&[1, 1], &[1, 1]], &[&[1, 1], &[1, 1]]).unwrap();
        let mut tie = TieBreaker::new(TieRule::StickyPrevious);
        let values = g.response_values(Player::One, &[Rational::one(), Rational::zero()]).unwrap();
        assert_eq!(tie.choose(Player::One, &values), 0);
        tie.prev[0] = Some(1);
        assert_eq!(tie.choose(Player::One, &values), 1);
    }

    #[test]
    fn seeded_random_rule_is_reproducible() {
        let values = vec![1.0, 1.0, 0.0, 1.0];
        let picks1: Vec<usize> = {
            let mut tie = TieBreaker::new(TieRule::SeededRandom(9));
            (0..16).map(|_| tie.choose(Player::One, &values)).collect()
        };
        let picks2: Vec<usize> = {
            let mut tie = TieBreaker::new(TieRule::SeededRandom(9));
            (0..16).map(|_| tie.choose(Player::One, &values)).collect()
        };
        assert_eq!(picks1, picks2);
        assert!(picks1.iter().all(|&i| i != 2));
    }

    #[test]
    fn detect_cycle_needs_enough_data() {
        assert!(detect_cycle(&[(0, 0), (1, 1)]).is_none());
    }

    #[test]
    fn detect_cycle_constant_stream() {
        let stream = vec![(1, 1); 10];
        let cycle = detect_cycle(&stream).unwrap();
        assert_eq!(cycle.pairs, vec![(1, 1)]);
        assert_eq!(cycle.entry_round, 0);
    }

    #[test]
    fn detect_cycle_period_three_with_growing_runs() {
        // Runs grow like fictitious-play cycles do; compression makes
        // the period visible.
        let mut stream = Vec::new();
        let pattern = [(2, 2), (0, 0), (1, 1)];
        let mut run = 1usize;
        for k in 0..12 {
            for _ in 0..run {
                stream.push(pattern[k % 3]);
            }
            run += k;
        }
        let cycle = detect_cycle(&stream).unwrap();
        assert_eq!(cycle.pairs, vec![(0, 0), (1, 1), (2, 2)]);
        assert!(cycle.repetitions >= 3);
    }

    #[test]
    fn detect_cycle_rejects_aperiodic_tail() {
        let stream: Vec<(usize, usize)> =
            (0..64).map(|k| (k % 5, (k * k + k / 3) % 7)).collect();
        assert!(detect_cycle(&stream).is_none());
    }

    #[test]
    fn cycle_sum_check_bounds() {
        let g = shapley();
        let bad = CycleDescriptor {
            pairs: vec![(5, 0)],
            entry_round: 0,
            repetitions: 3,
        };
        assert!(matches!(
            cycle_sum_check(&g, &bad),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn cycle_sums_on_shapley() {
        let g = shapley();
        let diagonal = CycleDescriptor {
            pairs: vec![(1, 1), (0, 0), (2, 2)],
            entry_round: 0,
            repetitions: 3,
        };
        let check = cycle_sum_check(&g, &diagonal).unwrap();
        assert_eq!(check.values, vec![Rational::zero(); 3]);
        assert!(check.all_equal);
        assert!(check.equals_min);

        let hexagon = CycleDescriptor {
            pairs: vec![(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)],
            entry_round: 0,
            repetitions: 3,
        };
        let check = cycle_sum_check(&g, &hexagon).unwrap();
        assert_eq!(check.values, vec![Rational::from_int(3); 6]);
        assert!(check.all_equal);
        assert!(!check.equals_min);
    }

    #[test]
    fn zero_sum_cycles_hit_the_minimum() {
        let g: BimatrixGame<Rational> =
            BimatrixGame::from_int_rows(&[&[1, -1], &[-1, 1]], &[&[-1, 1], &[1, -1]]).unwrap();
        let cyc = CycleDescriptor {
            pairs: vec![(0, 0), (1, 0), (1, 1), (0, 1)],
            entry_round: 0,
            repetitions: 3,
        };
        let check = cycle_sum_check(&g, &cyc).unwrap();
        assert!(check.all_equal && check.equals_min);
    }
}
