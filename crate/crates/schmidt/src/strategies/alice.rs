//! Alice's winning strategy for badly approximable numbers.
//!
//! With `rho = rho(B_1) <= 1/2`, `delta = alpha beta / 6` and
//! `Q = ceil(sqrt(alpha beta / (2 rho)))`, Alice keeps every point of the
//! nested intersection at distance at least `delta / q^2` from every reduced
//! `p/q` with `q >= Q`, and keeps `B_2` free of fractions of denominator
//! below `Q`.
//!
//! At move `n` the relevant denominators are those in the window
//! `alpha beta / (2 rho_n) <= q^2 < 1 / (2 rho_n)` where `rho_n = rho(B_n)`.
//! Two distinct fractions from the window are more than `2 rho_n` apart, so
//! at most one of them lies in `B_n`, and Alice steers a third of the radius
//! away from it.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand_chacha::ChaCha8Rng;

use crate::arith::{ceil_sqrt, floor_sqrt_strict, from_big, int, pow, rat, Interval, Rational};
use crate::farey::{farey_in_range, FareyFraction};
use crate::game::{closest_ball, GameError, GameParams, MoveContext, Play, Strategy};

/// Fixed data of Alice's strategy after reindexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliceState {
    params: GameParams,
    delta: Rational,
    rho: Rational,
    q_min: BigInt,
    /// Fractions of denominator below `Q` lying in the first ball.
    excluded: Vec<FareyFraction>,
    /// 1-based index of the Bob ball Alice regards as her first.
    start_index: usize,
}

impl AliceState {
    /// Sets Alice up with `first` as Bob's first ball (`rho(first) <= 1/2`).
    pub fn new(params: &GameParams, first: &Interval, start_index: usize) -> Result<Self, GameError> {
        if params.alpha() > &rat(1, 3) {
            return Err(GameError::Domain(format!("Alice's strategy needs alpha <= 1/3, got {}", params.alpha())));
        }
        let rho = first.radius().clone();
        if !rho.is_positive() || rho > rat(1, 2) {
            return Err(GameError::Domain(format!("Alice's first ball needs 0 < radius <= 1/2, got {rho}")));
        }
        let ab = params.ab();
        let delta = &ab / int(6);
        let q_min = ceil_sqrt(&(&ab / (int(2) * &rho)))?;
        let excluded = if q_min > BigInt::one() {
            farey_in_range(&first.lo(), &first.hi(), &(&q_min - 1))
                .iter()
                .map(FareyFraction::from_rational)
                .collect()
        } else {
            Vec::new()
        };
        Ok(Self { params: params.clone(), delta, rho, q_min, excluded, start_index })
    }

    pub fn params(&self) -> &GameParams {
        &self.params
    }

    /// `alpha beta / 6`.
    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// Radius of Alice's first ball.
    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    /// `Q = ceil(sqrt(alpha beta / (2 rho)))`.
    pub fn q_min(&self) -> &BigInt {
        &self.q_min
    }

    /// The members of the excluded set that lie in the first ball.
    pub fn excluded(&self) -> &[FareyFraction] {
        &self.excluded
    }

    pub fn start_index(&self) -> usize {
        self.start_index
    }
}

/// Denominator range `[q_lo, q_hi]` of the window for a ball of radius `rho_n`.
fn window(params: &GameParams, rho_n: &Rational) -> Result<Option<(BigInt, BigInt)>, GameError> {
    let two_rho = int(2) * rho_n;
    let lo = params.ab() / &two_rho;
    let hi = two_rho.recip();
    let q_lo = ceil_sqrt(&lo)?;
    let q_hi = floor_sqrt_strict(&hi)?;
    Ok((q_lo <= q_hi).then_some((q_lo, q_hi)))
}

/// Window fractions in `[lo, hi]`.
fn window_fractions(lo: &Rational, hi: &Rational, q_lo: &BigInt, q_hi: &BigInt) -> Vec<Rational> {
    farey_in_range(lo, hi, q_hi).into_iter().filter(|x| x.denom() >= q_lo).collect()
}

/// Alice's answer `A_n` to Bob's ball `b_ball = B_n`, where `n` counts from
/// Alice's own first ball.
pub fn alice_move(state: &AliceState, b_ball: &Interval, n: usize) -> Result<Interval, GameError> {
    let rho_n = b_ball.radius().clone();
    if !rho_n.is_positive() {
        return Err(GameError::Domain("Bob's ball must have a positive radius".into()));
    }
    let radius = state.params.alpha() * &rho_n;
    let b = b_ball.center().clone();
    let third = &rho_n / int(3);
    let two_thirds = &third * int(2);

    let mut relevant = Vec::new();
    if let Some((q_lo, q_hi)) = window(&state.params, &rho_n)? {
        let reach = int(2) * &rho_n;
        relevant = window_fractions(&(&b - &reach), &(&b + &reach), &q_lo, &q_hi);
    }
    let inside: Vec<&Rational> = relevant.iter().filter(|x| b_ball.contains_point(x)).collect();
    let target = match inside.as_slice() {
        [pq] => {
            let pq = (*pq).clone();
            if pq <= b {
                Interval::from_endpoints(&pq + &third, &pq + &rho_n)?
            } else {
                Interval::from_endpoints(&pq - &rho_n, &pq - &third)?
            }
        }
        [] => {
            let lo = b_ball.lo();
            let hi = b_ball.hi();
            let eps = relevant
                .iter()
                .filter(|x| **x < lo)
                .max()
                .map(|left| (&lo - left).min(third.clone()))
                .unwrap_or_else(|| third.clone());
            let eps_right = relevant
                .iter()
                .filter(|x| **x > hi)
                .min()
                .map(|right| (right - &hi).min(third.clone()))
                .unwrap_or_else(|| third.clone());
            let middle = Interval::from_endpoints(&b - &two_thirds - &eps, &b + &two_thirds + &eps_right)?;
            let excluded_hit = if n == 1 && state.q_min > BigInt::one() {
                farey_in_range(&middle.lo(), &middle.hi(), &(&state.q_min - 1)).into_iter().next()
            } else {
                None
            };
            match excluded_hit {
                Some(x) if x < b => Interval::from_endpoints(&b + &eps_right, &b + &two_thirds + &eps_right)?,
                Some(_) => Interval::from_endpoints(&b - &two_thirds - &eps, &b - &eps)?,
                None => middle,
            }
        }
        _ => {
            return Err(GameError::Domain(format!(
                "two window fractions lie in {b_ball}; the separation property failed"
            )))
        }
    };
    let ball = closest_ball(&target, &radius, target.center())?;
    debug_assert!(b_ball.contains(&ball));
    Ok(ball)
}

/// Alice's strategy as a game participant. While Bob's balls are wider than
/// `1/2` she plays centered balls; the first Bob ball of radius at most `1/2`
/// becomes her first ball.
#[derive(Debug, Clone)]
pub struct AliceBad {
    state: Option<AliceState>,
}

impl AliceBad {
    pub fn new() -> Self {
        Self { state: None }
    }

    pub fn state(&self) -> Option<&AliceState> {
        self.state.as_ref()
    }
}

impl Default for AliceBad {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for AliceBad {
    fn choose(&mut self, ctx: &MoveContext<'_>, _rng: &mut ChaCha8Rng) -> Result<Interval, GameError> {
        if ctx.accel_term != 0 {
            return Err(GameError::Domain("Alice's strategy is defined for the plain game".into()));
        }
        if self.state.is_none() {
            if ctx.parent.radius() > &rat(1, 2) {
                return Ok(Interval::new(ctx.parent.center().clone(), ctx.radius.clone())?);
            }
            self.state = Some(AliceState::new(ctx.params, ctx.parent, ctx.index)?);
        }
        let state = self.state.as_ref().expect("initialized above");
        alice_move(state, ctx.parent, ctx.index + 1 - state.start_index)
    }
}

/// Index of the first Bob ball of radius at most `1/2` (1-based).
pub fn reindex_start(play: &Play) -> Option<usize> {
    play.bob_balls().iter().position(|b| b.radius() <= &rat(1, 2)).map(|i| i + 1)
}

/// Outcome of [`certify_bad`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// Smallest denominator covered by the guarantee.
    pub q_min: BigInt,
    /// Largest denominator covered at this depth.
    pub q_bound: BigInt,
    pub ok: bool,
    /// Fractions that come within `delta / q^2` of the last Bob ball.
    pub violations: Vec<Rational>,
}

/// Checks the finite-depth guarantee on the last Bob ball `B_n` of `play`:
/// every reduced `p/q` with `Q <= q <= q_bound` keeps distance at least
/// `delta / q^2` from `B_n`, where `q_bound` is the largest `q` with
/// `q^2 < (alpha beta / (2 rho)) (alpha beta)^{-(n-1)}`.
pub fn certify_bad(play: &Play, delta: &Rational) -> Result<Certificate, GameError> {
    let start = reindex_start(play)
        .ok_or_else(|| GameError::Domain("no Bob ball of radius at most 1/2 to start from".into()))?;
    let params = play.params();
    let rho = play.bob_balls()[start - 1].radius().clone();
    let n = play.depth() + 1 - start;
    let ab = params.ab();
    let q_min = ceil_sqrt(&(&ab / (int(2) * &rho)))?;
    let bound_sq = &ab / (int(2) * &rho) * pow(&ab, -(n as i64 - 1));
    let q_bound = floor_sqrt_strict(&bound_sq)?;
    let last = play.bob_balls().last().expect("non-empty play");
    let violations = close_fractions(last, delta, &q_min, &q_bound);
    Ok(Certificate { q_min, q_bound, ok: violations.is_empty(), violations })
}

/// Reduced fractions `p/q` with `q_min <= q <= q_max` and
/// `dist(ball, p/q) < delta / q^2`.
///
/// Denominators are scanned in dyadic shells `[X, 2X)`; inside a shell the
/// search range `ball ± delta / X^2` contains every candidate.
pub fn close_fractions(ball: &Interval, delta: &Rational, q_min: &BigInt, q_max: &BigInt) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut shell_lo: BigInt = std::cmp::max(q_min.clone(), BigInt::one());
    while &shell_lo <= q_max {
        let shell_hi: BigInt = std::cmp::min(&shell_lo * 2u32 - 1u32, q_max.clone());
        let x2 = from_big(&shell_lo * &shell_lo);
        let reach = delta / x2;
        for x in farey_in_range(&(ball.lo() - &reach), &(ball.hi() + &reach), &shell_hi) {
            if x.denom() < &shell_lo {
                continue;
            }
            let q2 = from_big(x.denom() * x.denom());
            if ball.distance_to(&x) < delta / q2 {
                out.push(x);
            }
        }
        shell_lo = shell_hi + 1;
    }
    out.sort();
    out
}

/// Whether `B_2` (Alice's second-round target) avoids every fraction of
/// denominator below `Q`; vacuous when `Q = 1` or the play is too short.
pub fn excluded_set_avoided(play: &Play) -> Result<bool, GameError> {
    let Some(start) = reindex_start(play) else { return Ok(true) };
    let first = &play.bob_balls()[start - 1];
    let state = AliceState::new(play.params(), first, start)?;
    if state.q_min <= BigInt::one() {
        return Ok(true);
    }
    let Some(second) = play.bob_balls().get(start) else { return Ok(true) };
    Ok(farey_in_range(&second.lo(), &second.hi(), &(&state.q_min - 1)).is_empty())
}
