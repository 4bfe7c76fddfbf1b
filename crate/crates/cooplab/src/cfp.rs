//! Continuous-time fictitious play by exact event-driven integration.
//!
//! In log-time `s = ln t` the flow while the response targets stay
//! fixed is `p' = b_p - p`, `q' = b_q - q`, so the profile moves along
//! `p(s0 + d) = w p(s0) + (1 - w) b_p` with `w = e^{-d}`. Payoffs are
//! affine in `w`, which makes every switch time the root of a linear
//! equation: no step size, no truncation error.
//!
//! Targets are usually pure vertices. When a trajectory hits an
//! indifference surface that attracts from both sides, no pure
//! continuation is consistent and the solution slides along the
//! surface with a mixed response; the integrator detects this by
//! support enumeration and follows the sliding flow exactly. A rest
//! point (response target equal to the profile itself) is the special
//! case where the slide has zero velocity.
//!
//! This module works in the float backend; switch roots are generally
//! irrational.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dfp::{
    detect_cycle, run_dfp, CycleDescriptor, DfpConfig, DfpInit, TieBreaker, TieRule,
};
use crate::error::{Error, Result};
use crate::game::{BimatrixGame, MixedProfile, Player};
use crate::nash::{solve_linear, support_enumeration};
use crate::scalar::{argmax_set, Scalar};

/// Segment duration below which the run is treated as sitting on a
/// rest point (checked against the convergence threshold).
const CHURN_DURATION: f64 = 1e-12;
/// Switch interval in `w` below which repeated events count as a
/// numerical stall when the profile is not near an equilibrium.
const STALL_INTERVAL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct CfpConfig {
    pub tie_rule: TieRule,
    /// Maximum exploitability below which the run counts as converged.
    pub eps: f64,
    /// Safety bound on the number of switch events.
    pub max_segments: usize,
    /// Maximum log-time gap between consecutive BRU samples.
    pub bru_sample_ds: f64,
}

impl Default for CfpConfig {
    fn default() -> Self {
        CfpConfig {
            tie_rule: TieRule::LowestIndex,
            eps: 1e-3,
            max_segments: 1 << 18,
            bru_sample_ds: 0.02,
        }
    }
}

/// The committed response pair driving one segment of the flow.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseTarget {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    /// Representative pure pair: the chosen actions for a vertex
    /// target, the lowest-index supported actions for a sliding one.
    pub pair: (usize, usize),
    /// True when either side of the target is mixed.
    pub sliding: bool,
}

impl ResponseTarget {
    fn vertex(i: usize, j: usize, m: usize, n: usize) -> Self {
        let mut p = vec![0.0; m];
        p[i] = 1.0;
        let mut q = vec![0.0; n];
        q[j] = 1.0;
        ResponseTarget {
            p,
            q,
            pair: (i, j),
            sliding: false,
        }
    }
}

/// Instantaneous integrator state.
#[derive(Debug, Clone)]
pub struct CfpState {
    /// Log-time `s = ln t`.
    pub s: f64,
    pub profile: MixedProfile<f64>,
    pub target: ResponseTarget,
}

impl CfpState {
    pub fn br_pair(&self) -> (usize, usize) {
        self.target.pair
    }
}

/// Maximal interval on which the committed response target is constant.
#[derive(Debug, Clone)]
pub struct Segment {
    pub s_start: f64,
    pub s_end: f64,
    pub target: ResponseTarget,
    pub profile_start: MixedProfile<f64>,
    /// Value of `d(tU)/dt` on the segment: `(A+B)_{ij}` toward a
    /// vertex pair, `b_p^T (A+B) b_q` on a slide.
    pub rate: f64,
}

impl Segment {
    pub fn br_pair(&self) -> (usize, usize) {
        self.target.pair
    }

    /// Profile at `s` within `[s_start, s_end]`.
    pub fn profile_at(&self, s: f64) -> MixedProfile<f64> {
        let w = (-(s - self.s_start)).exp();
        let p: Vec<f64> = self
            .profile_start
            .p()
            .iter()
            .zip(&self.target.p)
            .map(|(x, b)| w * x + (1.0 - w) * b)
            .collect();
        let q: Vec<f64> = self
            .profile_start
            .q()
            .iter()
            .zip(&self.target.q)
            .map(|(x, b)| w * x + (1.0 - w) * b)
            .collect();
        MixedProfile::new(p, q).expect("convex combination stays on the simplex")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CfpVerdict {
    ConvergedToNe,
    EnteredCycle(CycleDescriptor),
    HorizonExhausted,
}

#[derive(Debug, Clone)]
pub struct CfpTrajectory {
    /// Contiguous segments: each `s_end` equals the next `s_start`.
    pub segments: Vec<Segment>,
    /// Sampled `(s, U)` pairs along the run.
    pub bru_series: Vec<(f64, f64)>,
    pub verdict: CfpVerdict,
    pub final_profile: MixedProfile<f64>,
}

impl CfpTrajectory {
    /// Pure best-response pairs in segment order (sliding pieces
    /// excluded); the stream the cycle definition applies to.
    pub fn segment_pairs(&self) -> Vec<(usize, usize)> {
        self.segments
            .iter()
            .filter(|seg| !seg.target.sliding)
            .map(|seg| seg.br_pair())
            .collect()
    }

    pub fn s_end(&self) -> f64 {
        self.segments.last().map_or(0.0, |seg| seg.s_end)
    }

    /// Reconstructs the profile at any covered log-time.
    pub fn profile_at(&self, s: f64) -> Option<MixedProfile<f64>> {
        if self.segments.is_empty() || s < self.segments[0].s_start || s > self.s_end() {
            return None;
        }
        let idx = match self
            .segments
            .binary_search_by(|seg| seg.s_start.partial_cmp(&s).expect("finite times"))
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        Some(self.segments[idx].profile_at(s))
    }
}

/// Best-response utility `U = max(Aq) + max(pB)`.
pub fn bru(game: &BimatrixGame<f64>, profile: &MixedProfile<f64>) -> f64 {
    let aq = game.a().matvec(profile.q());
    let pb = game.b().vecmat(profile.p());
    let max = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max(&aq) + max(&pb)
}

/// `U' = ((A+B)_{ij} - U(profile)) / t` along a CFP solution with
/// active pair `(i, j)` at real time `t`.
///
/// Non-positive on zero-sum games; identically zero when each player's
/// payoff depends only on her own action (the canonical dominant-pair
/// form).
pub fn bru_derivative(
    game: &BimatrixGame<f64>,
    profile: &MixedProfile<f64>,
    br_pair: (usize, usize),
    t: f64,
) -> f64 {
    let sum = *game.a().get(br_pair.0, br_pair.1) + *game.b().get(br_pair.0, br_pair.1);
    (sum - bru(game, profile)) / t
}

/// Earliest switch against one player's payoffs, as the largest `w` in
/// `(0, 1]` where a rival action overtakes the currently committed
/// ones. `values` holds payoffs at the current profile, `toward` the
/// payoffs once the opponent reaches their response target, and `cur`
/// a committed action (for a slide, any supported one; they agree).
fn next_switch(values: &[f64], toward: &[f64], cur: usize) -> Option<f64> {
    let tol = f64::tie_tol();
    let mut best: Option<f64> = None;
    for k in 0..values.len() {
        if k == cur {
            continue;
        }
        let d_now = values[k] - values[cur];
        let d_toward = toward[k] - toward[cur];
        if d_toward <= tol {
            continue;
        }
        let w = if d_now >= 0.0 {
            1.0
        } else {
            (d_toward / (d_toward - d_now)).min(1.0)
        };
        best = Some(best.map_or(w, |b: f64| b.max(w)));
    }
    best
}

/// Mixed strategy over `support` (zero elsewhere) equalizing
/// `payoff(i, .)` across `kept`, or `None` when the system is singular
/// or leaves the simplex.
fn indifferent_mix(
    payoff: &dyn Fn(usize, usize) -> f64,
    kept: &[usize],
    support: &[usize],
    len: usize,
) -> Option<Vec<f64>> {
    let k = support.len();
    let mut m = vec![vec![0.0; k]; k];
    let mut rhs = vec![0.0; k];
    for (row, &i) in kept.iter().skip(1).enumerate() {
        for (col, &j) in support.iter().enumerate() {
            m[row][col] = payoff(kept[0], j) - payoff(i, j);
        }
    }
    for cell in m[k - 1].iter_mut() {
        *cell = 1.0;
    }
    rhs[k - 1] = 1.0;
    let sol = solve_linear(m, rhs)?;
    let mut out = vec![0.0; len];
    let mut total = 0.0;
    for (col, &j) in support.iter().enumerate() {
        if sol[col] < -1e-9 {
            return None;
        }
        let v = sol[col].max(0.0);
        out[j] = v;
        total += v;
    }
    if !(total.is_finite() && total > 0.5) {
        return None;
    }
    for v in &mut out {
        *v /= total;
    }
    Some(out)
}

fn subsets_of_size(set: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = set.len();
    let mut pick = vec![0usize; size];
    fn rec(
        set: &[usize],
        size: usize,
        start: usize,
        depth: usize,
        pick: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == size {
            out.push(pick.clone());
            return;
        }
        for idx in start..set.len() {
            pick[depth] = set[idx];
            rec(set, size, idx + 1, depth + 1, pick, out);
        }
    }
    if size <= n {
        rec(set, size, 0, 0, &mut pick, &mut out);
    }
    out
}

/// Picks the consistent response continuation at the current profile:
/// the committed actions must remain best responses just ahead of the
/// flow they themselves generate.
///
/// Tries sliding supports from largest to smallest (the attracting
/// sliding mode, when one exists, is the solution that stays on the
/// indifference surface); pure pairs are the size-1 case, with
/// remaining freedom resolved by the tie rule.
fn pick_continuation(
    game: &BimatrixGame<f64>,
    profile: &MixedProfile<f64>,
    tie: &mut TieBreaker,
) -> ResponseTarget {
    let tol = f64::tie_tol();
    let aq = game.a().matvec(profile.q());
    let pb = game.b().vecmat(profile.p());
    let ties1 = argmax_set(&aq, &tol);
    let ties2 = argmax_set(&pb, &tol);

    let a = |i: usize, j: usize| *game.a().get(i, j);
    let b_t = |j: usize, i: usize| *game.b().get(i, j);

    let max_k = ties1.len().min(ties2.len());
    for k in (2..=max_k).rev() {
        for kept1 in subsets_of_size(&ties1, k) {
            for kept2 in subsets_of_size(&ties2, k) {
                let Some(bq) = indifferent_mix(&a, &kept1, &kept2, game.n()) else {
                    continue;
                };
                let Some(bp) = indifferent_mix(&b_t, &kept2, &kept1, game.m()) else {
                    continue;
                };
                // Dropped tied actions must fall behind along the flow.
                let toward1 = game.a().matvec(&bq);
                let c1 = toward1[kept1[0]];
                if ties1
                    .iter()
                    .any(|&i| !kept1.contains(&i) && toward1[i] > c1 + tol)
                {
                    continue;
                }
                let toward2 = game.b().vecmat(&bp);
                let c2 = toward2[kept2[0]];
                if ties2
                    .iter()
                    .any(|&j| !kept2.contains(&j) && toward2[j] > c2 + tol)
                {
                    continue;
                }
                return ResponseTarget {
                    p: bp,
                    q: bq,
                    pair: (kept1[0], kept2[0]),
                    sliding: true,
                };
            }
        }
    }

    // Pure continuations: (i, j) is consistent when i stays maximal
    // among the tied actions as q flows to e_j, and vice versa.
    let mut feasible: Vec<(usize, usize)> = Vec::new();
    for &i in &ties1 {
        for &j in &ties2 {
            let i_ok = ties1.iter().all(|&r| a(i, j) >= a(r, j) - tol);
            let j_ok = ties2.iter().all(|&c| b_t(j, i) >= b_t(c, i) - tol);
            if i_ok && j_ok {
                feasible.push((i, j));
            }
        }
    }
    if feasible.is_empty() {
        // Transversal data admits no consistent commitment (can happen
        // under float noise); fall back to the plain argmax pair and
        // let the stall guard catch persistent flip-flop.
        return ResponseTarget::vertex(ties1[0], ties2[0], game.m(), game.n());
    }
    let mut rows: Vec<usize> = feasible.iter().map(|&(i, _)| i).collect();
    rows.sort_unstable();
    rows.dedup();
    let i = tie.choose_among(Player::One, &rows);
    let cols: Vec<usize> = feasible
        .iter()
        .filter(|&&(r, _)| r == i)
        .map(|&(_, j)| j)
        .collect();
    let j = tie.choose_among(Player::Two, &cols);
    ResponseTarget::vertex(i, j, game.m(), game.n())
}

/// Advances the state to the next response switch, or to `s_horizon`
/// if the committed target never changes. Returns the new state and
/// the target switched to (`None` when the horizon was reached).
pub fn cfp_segment_advance(
    game: &BimatrixGame<f64>,
    state: &CfpState,
    s_horizon: f64,
    tie: &mut TieBreaker,
) -> Result<(CfpState, Option<ResponseTarget>)> {
    let aq = game.a().matvec(state.profile.q());
    let pb = game.b().vecmat(state.profile.p());
    let toward1 = game.a().matvec(&state.target.q);
    let toward2 = game.b().vecmat(&state.target.p);

    let w1 = next_switch(&aq, &toward1, state.target.pair.0);
    let w2 = next_switch(&pb, &toward2, state.target.pair.1);
    let w_switch = match (w1, w2) {
        (None, None) => None,
        (a, b) => Some(a.unwrap_or(0.0).max(b.unwrap_or(0.0))),
    };

    let w_horizon = (-(s_horizon - state.s)).exp();
    match w_switch {
        Some(w) if w > w_horizon => {
            let w = w.min(1.0);
            let mid = advance_profile(&state.profile, &state.target, w);
            let s_next = state.s - w.ln();
            let target = pick_continuation(game, &mid, tie);
            let next = CfpState {
                s: s_next,
                profile: mid,
                target: target.clone(),
            };
            Ok((next, Some(target)))
        }
        _ => {
            let end = advance_profile(&state.profile, &state.target, w_horizon);
            let next = CfpState {
                s: s_horizon,
                profile: end,
                target: state.target.clone(),
            };
            Ok((next, None))
        }
    }
}

fn advance_profile(
    profile: &MixedProfile<f64>,
    target: &ResponseTarget,
    w: f64,
) -> MixedProfile<f64> {
    let p: Vec<f64> = profile
        .p()
        .iter()
        .zip(&target.p)
        .map(|(x, b)| w * x + (1.0 - w) * b)
        .collect();
    let q: Vec<f64> = profile
        .q()
        .iter()
        .zip(&target.q)
        .map(|(x, b)| w * x + (1.0 - w) * b)
        .collect();
    MixedProfile::new(p, q).expect("convex combination stays on the simplex")
}

fn segment_rate(game: &BimatrixGame<f64>, target: &ResponseTarget) -> f64 {
    if target.sliding {
        let sums = game.payoff_sum().matvec(&target.q);
        target.p.iter().zip(&sums).map(|(p, v)| p * v).sum()
    } else {
        *game.a().get(target.pair.0, target.pair.1) + *game.b().get(target.pair.0, target.pair.1)
    }
}

/// Runs CFP from `init` (log-time 0, i.e. `t = 1`) to `s_horizon`.
pub fn run_cfp(
    game: &BimatrixGame<f64>,
    init: &MixedProfile<f64>,
    s_horizon: f64,
    cfg: &CfpConfig,
) -> Result<CfpTrajectory> {
    if s_horizon <= 0.0 {
        return Err(Error::PreconditionViolated(
            "log-time horizon must be positive".into(),
        ));
    }
    // Validates dimensions as a side effect.
    game.epsilon_report(init)?;

    let mut tie = TieBreaker::new(cfg.tie_rule);
    let mut state = CfpState {
        s: 0.0,
        profile: init.clone(),
        target: pick_continuation(game, init, &mut tie),
    };

    let mut segments: Vec<Segment> = Vec::new();
    let mut bru_series: Vec<(f64, f64)> = Vec::new();
    let mut converged = false;
    let mut stall_count = 0usize;
    let stall_limit = 8 * (game.m() + game.n());

    loop {
        if segments.len() >= cfg.max_segments {
            break;
        }
        let (next, switched) = cfp_segment_advance(game, &state, s_horizon, &mut tie)?;
        push_segment(
            &mut segments,
            Segment {
                s_start: state.s,
                s_end: next.s,
                target: state.target.clone(),
                profile_start: state.profile.clone(),
                rate: segment_rate(game, &state.target),
            },
        );
        sample_bru(game, &mut bru_series, segments.last().expect("just pushed"), cfg);

        match switched {
            None => {
                state = next;
                break;
            }
            Some(_) => {
                let duration = next.s - state.s;
                if duration < CHURN_DURATION {
                    let me = game.epsilon_report(&next.profile)?.me;
                    if me <= cfg.eps {
                        converged = true;
                        state = next;
                        break;
                    }
                    let interval = 1.0 - (-duration).exp();
                    if interval < STALL_INTERVAL {
                        stall_count += 1;
                        if stall_count > stall_limit {
                            return Err(Error::NumericalStall {
                                s: next.s,
                                interval,
                            });
                        }
                    }
                } else {
                    stall_count = 0;
                }
                state = next;
            }
        }
    }

    if converged && state.s < s_horizon {
        // Zeno accumulation onto a rest point: pin the profile there
        // for the remaining log-time so the trajectory covers the full
        // range.
        let profile = state.profile.clone();
        let rest = ResponseTarget {
            p: profile.p().to_vec(),
            q: profile.q().to_vec(),
            pair: state.target.pair,
            sliding: true,
        };
        push_segment(
            &mut segments,
            Segment {
                s_start: state.s,
                s_end: s_horizon,
                target: rest.clone(),
                profile_start: profile.clone(),
                rate: segment_rate(game, &rest),
            },
        );
        sample_bru(game, &mut bru_series, segments.last().expect("just pushed"), cfg);
        state = CfpState {
            s: s_horizon,
            profile,
            target: rest,
        };
    }

    bru_series.push((state.s, bru(game, &state.profile)));

    let final_me = game.epsilon_report(&state.profile)?.me;
    let pure_pairs: Vec<(usize, usize)> = segments
        .iter()
        .filter(|seg| !seg.target.sliding)
        .map(|seg| seg.br_pair())
        .collect();
    let verdict = if converged || final_me <= cfg.eps {
        CfpVerdict::ConvergedToNe
    } else if let Some(cycle) = detect_cycle(&pure_pairs) {
        CfpVerdict::EnteredCycle(cycle)
    } else {
        CfpVerdict::HorizonExhausted
    };

    Ok(CfpTrajectory {
        segments,
        bru_series,
        verdict,
        final_profile: state.profile,
    })
}

/// Extends the last segment instead of pushing when the target repeats.
fn push_segment(segments: &mut Vec<Segment>, seg: Segment) {
    if let Some(last) = segments.last_mut() {
        if last.target == seg.target {
            last.s_end = seg.s_end;
            return;
        }
    }
    segments.push(seg);
}

fn sample_bru(
    game: &BimatrixGame<f64>,
    series: &mut Vec<(f64, f64)>,
    seg: &Segment,
    cfg: &CfpConfig,
) {
    let mut s = seg.s_start;
    while s < seg.s_end {
        let profile = seg.profile_at(s);
        series.push((s, bru(game, &profile)));
        s += cfg.bru_sample_ds;
    }
}

/// Evaluates the renewal identity
/// `U(t) = t0 U(t0) / t + (1/t) \int_{t0}^{t} rate(tau) dtau`
/// segmentwise (the rate is constant per segment, so the integral is
/// closed-form) against directly computed `U` at `samples` points;
/// returns the maximum absolute residual.
pub fn bru_integral_check(
    traj: &CfpTrajectory,
    game: &BimatrixGame<f64>,
    t0: f64,
    samples: usize,
) -> f64 {
    assert!(t0 >= 1.0, "t0 must be at least 1 (log-time 0)");
    let s0 = t0.ln();
    let s_end = traj.s_end();
    assert!(s0 < s_end, "trajectory must cover [ln t0, horizon]");

    let u0 = bru(game, &traj.profile_at(s0).expect("covered"));
    let mut max_residual: f64 = 0.0;
    for k in 0..samples {
        let s = s0 + (s_end - s0) * (k as f64 + 1.0) / samples as f64;
        let t = s.exp();
        let direct = bru(game, &traj.profile_at(s).expect("covered"));
        let mut integral = 0.0;
        for seg in &traj.segments {
            let lo = seg.s_start.max(s0);
            let hi = seg.s_end.min(s);
            if hi > lo {
                integral += seg.rate * (hi.exp() - lo.exp());
            }
        }
        let predicted = (t0 * u0 + integral) / t;
        max_residual = max_residual.max((direct - predicted).abs());
    }
    max_residual
}

/// Outcome of the sampled sign check behind the cycle-convergence
/// criterion.
#[derive(Debug, Clone)]
pub enum CertificateOutcome {
    /// `U' < 0` strictly at every sampled point off the equilibrium set.
    CertifiedNegative,
    /// Witness profile with `U' >= 0`.
    FoundNonNegative(MixedProfile<f64>),
    /// Not enough usable path data to decide.
    Inconclusive,
}

/// Exclusion radius around known equilibria of the unscaled game.
const NE_EXCLUSION: f64 = 1e-2;

/// Samples the sign of `U'` over convex combinations of traced path
/// points that follow `cycle` on `game = lambda * identical + Z`.
///
/// Paths are traced with discrete fictitious play (whose best-response
/// stream realizes the cycle; the exact continuous flow cuts the
/// corner along sliding surfaces), then checked pointwise with the
/// continuous-time derivative. This is a numerical check of the
/// convergence condition, not a proof: the equilibria of the
/// `lambda = 0` game are excluded by a small ball.
pub fn cycle_convergence_certificate(
    game: &BimatrixGame<f64>,
    lambda: f64,
    identical: &BimatrixGame<f64>,
    cycle: &CycleDescriptor,
    samples: usize,
    seed: u64,
) -> Result<CertificateOutcome> {
    if cycle.pairs.is_empty() {
        return Err(Error::InsufficientPathData);
    }
    if game.m() > 4 || game.n() > 4 {
        return Err(Error::PreconditionViolated(
            "certificate supports games up to 4x4".into(),
        ));
    }
    let base = game.sub(&identical.scale(&lambda))?;
    let equilibria = support_enumeration(&base, 1e-9);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<MixedProfile<f64>> = Vec::new();

    let mut starts: Vec<DfpInit<f64>> = Vec::new();
    for &(i, j) in &cycle.pairs {
        starts.push(DfpInit::Pure(i, j));
    }
    for i in 0..game.m().min(game.n()) {
        starts.push(DfpInit::Pure(i, i));
    }
    for _ in 0..8 {
        if game.m() == game.n() {
            let v = random_simplex(&mut rng, game.m());
            starts.push(DfpInit::Mixed(
                MixedProfile::new(v.clone(), v).expect("simplex point"),
            ));
        }
        starts.push(DfpInit::Mixed(
            MixedProfile::new(
                random_simplex(&mut rng, game.m()),
                random_simplex(&mut rng, game.n()),
            )
            .expect("simplex point"),
        ));
    }

    let cfg = DfpConfig::new(4_000, TieRule::LowestIndex, 0.0, 25)?;
    for start in starts {
        let Ok(traj) = run_dfp(game, start, &cfg) else {
            continue;
        };
        let Some(observed) = detect_cycle(&traj.br_stream) else {
            continue;
        };
        if observed.pairs != cycle.pairs {
            continue;
        }
        for sample in &traj.samples {
            if (sample.t as usize) >= observed.entry_round {
                points.push(sample.profile.clone());
            }
        }
    }

    if points.len() < 2 * cycle.pairs.len() {
        return Ok(CertificateOutcome::Inconclusive);
    }

    let mut evaluated = 0usize;
    for _ in 0..samples {
        let k = rng.gen_range(2..=4.min(points.len()));
        let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(1e-3..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        let chosen: Vec<&MixedProfile<f64>> = (0..k)
            .map(|_| &points[rng.gen_range(0..points.len())])
            .collect();
        let mut p = vec![0.0; game.m()];
        let mut q = vec![0.0; game.n()];
        for (w, point) in weights.iter().zip(&chosen) {
            for (acc, x) in p.iter_mut().zip(point.p()) {
                *acc += w * x;
            }
            for (acc, x) in q.iter_mut().zip(point.q()) {
                *acc += w * x;
            }
        }
        let profile = MixedProfile::new(p, q).expect("convex combination stays on the simplex");
        if equilibria
            .iter()
            .any(|ne| profile.linf_distance(ne) <= NE_EXCLUSION)
        {
            continue;
        }
        evaluated += 1;
        let aq = game.a().matvec(profile.q());
        let pb = game.b().vecmat(profile.p());
        let mut tie = TieBreaker::new(TieRule::LowestIndex);
        let pair = (
            tie.choose(Player::One, &aq),
            tie.choose(Player::Two, &pb),
        );
        if bru_derivative(game, &profile, pair, 1.0) >= 0.0 {
            return Ok(CertificateOutcome::FoundNonNegative(profile));
        }
    }

    if evaluated == 0 {
        return Ok(CertificateOutcome::Inconclusive);
    }
    Ok(CertificateOutcome::CertifiedNegative)
}

fn random_simplex(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..len).map(|_| -rng.gen_range(1e-9..1.0f64).ln()).collect();
    let total: f64 = v.iter().sum();
    for x in &mut v {
        *x /= total;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{builtin, BuiltinGame};

    fn shapley() -> BimatrixGame<f64> {
        builtin::<f64>(BuiltinGame::Shapley).unwrap()
    }

    #[test]
    fn nonstrategic_game_never_switches() {
        let g = BimatrixGame::from_int_rows(&[&[2, 2], &[2, 2]], &[&[5, 5], &[7, 7]]).unwrap();
        let init = MixedProfile::pure(1, 1, 2, 2).unwrap();
        let traj = run_cfp(&g, &init, 3.0, &CfpConfig::default()).unwrap();
        assert_eq!(traj.segments.len(), 1);
        assert_eq!(traj.segment_pairs(), vec![(0, 0)]);
    }

    #[test]
    fn zero_game_is_one_permanently_tied_segment() {
        let g = BimatrixGame::<f64>::zero(3, 2);
        let init = MixedProfile::uniform(3, 2);
        let traj = run_cfp(&g, &init, 2.0, &CfpConfig::default()).unwrap();
        assert_eq!(traj.segment_pairs(), vec![(0, 0)]);
    }

    #[test]
    fn first_switch_on_symmetric_shapley_start() {
        // From p = q = e_1 both players flow toward action 3; rows 3 and
        // 2 of A q(s) tie when 3w - 2 = 0.
        let g = shapley();
        let init = MixedProfile::pure(0, 0, 3, 3).unwrap();
        let mut tie = TieBreaker::new(TieRule::LowestIndex);
        let state = CfpState {
            s: 0.0,
            profile: init.clone(),
            target: pick_continuation(&g, &init, &mut tie),
        };
        assert_eq!(state.br_pair(), (2, 2));
        let (next, switched) = cfp_segment_advance(&g, &state, 20.0, &mut tie).unwrap();
        assert!(switched.is_some());
        let w = (-next.s).exp();
        assert!((w - 2.0 / 3.0).abs() < 1e-12, "w = {w}");
        // The hit is an attracting indifference surface: the consistent
        // continuation slides with a mixed response.
        assert!(next.target.sliding);
        assert!((next.target.q[1] - 2.0 / 3.0).abs() < 1e-12);
        assert!((next.target.q[2] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_shapley_run_slides_into_the_uniform_equilibrium() {
        let g = shapley();
        let init = MixedProfile::pure(0, 0, 3, 3).unwrap();
        let traj = run_cfp(&g, &init, (1e6f64).ln(), &CfpConfig::default()).unwrap();
        assert_eq!(traj.verdict, CfpVerdict::ConvergedToNe);
        let uniform = MixedProfile::uniform(3, 3);
        assert!(traj.final_profile.linf_distance(&uniform) < 1e-9);
        // One vertex segment, one slide, then rest at the equilibrium.
        assert!(traj.segments.len() <= 4);
        let me = g.epsilon_report(&traj.final_profile).unwrap().me;
        assert!(me < 1e-9);
    }

    #[test]
    fn asymmetric_shapley_run_enters_the_hexagonal_cycle() {
        let g = shapley();
        let init = MixedProfile::pure(0, 1, 3, 3).unwrap();
        // One hexagon lap takes about 5.6 units of log-time; run long
        // enough to observe three full repetitions.
        let traj = run_cfp(&g, &init, 24.0, &CfpConfig::default()).unwrap();
        match &traj.verdict {
            CfpVerdict::EnteredCycle(cycle) => {
                assert_eq!(
                    cycle.pairs,
                    vec![(0, 1), (0, 2), (1, 2), (1, 0), (2, 0), (2, 1)]
                );
            }
            other => panic!("expected a cycle verdict, got {other:?}"),
        }
        let me = g.epsilon_report(&traj.final_profile).unwrap().me;
        assert!(me > 0.1, "exploitability stays bounded away from 0, got {me}");
    }

    #[test]
    fn bru_derivative_signs() {
        // Zero-sum: derivative is -U/t.
        let z = BimatrixGame::from_int_rows(&[&[1, -1], &[-1, 1]], &[&[-1, 1], &[1, -1]])
            .unwrap();
        let profile = MixedProfile::pure(0, 0, 2, 2).unwrap();
        let u = bru(&z, &profile);
        assert!((bru_derivative(&z, &profile, (0, 0), 2.0) + u / 2.0).abs() < 1e-12);

        // Shapley at uniform with the (1,1) pair: (0 - 2) / t.
        let g = shapley();
        let uniform = MixedProfile::uniform(3, 3);
        assert!((bru_derivative(&g, &uniform, (0, 0), 1.0) + 2.0).abs() < 1e-12);

        // Own-action-only payoffs (canonical dominant-pair form):
        // identically zero.
        let b = BimatrixGame::from_int_rows(&[&[3, 3], &[4, 4]], &[&[1, 2], &[1, 2]]).unwrap();
        let x = MixedProfile::new(vec![0.3, 0.7], vec![0.6, 0.4]).unwrap();
        let aq = b.a().matvec(x.q());
        let pb = b.b().vecmat(x.p());
        let mut tie = TieBreaker::new(TieRule::LowestIndex);
        let pair = (
            tie.choose(Player::One, &aq),
            tie.choose(Player::Two, &pb),
        );
        assert_eq!(bru_derivative(&b, &x, pair, 1.0).abs(), 0.0);
    }

    #[test]
    fn renewal_identity_holds_on_zero_sum() {
        let z = BimatrixGame::from_int_rows(
            &[&[2, -1, 0], &[-3, 1, 2], &[0, 2, -2]],
            &[&[-2, 1, 0], &[3, -1, -2], &[0, -2, 2]],
        )
        .unwrap();
        let init = MixedProfile::pure(0, 1, 3, 3).unwrap();
        let traj = run_cfp(&z, &init, (1e5f64).ln(), &CfpConfig::default()).unwrap();
        let residual = bru_integral_check(&traj, &z, 1.0, 200);
        assert!(residual < 1e-8, "residual = {residual}");
    }

    #[test]
    fn certificate_rejects_empty_cycle() {
        let g = shapley();
        let parts = crate::decompose::strategic_decompose(&g);
        let empty = CycleDescriptor {
            pairs: vec![],
            entry_round: 0,
            repetitions: 0,
        };
        assert!(matches!(
            cycle_convergence_certificate(&g, 1.0, &parts.identical, &empty, 10, 0),
            Err(Error::InsufficientPathData)
        ));
    }
}
