//! Schmidt `(alpha, beta)`-games and accelerated games on the real line.
//!
//! Bob opens with a closed ball `B_1`. Alice answers with `A_n ⊆ B_n` of
//! radius `alpha * rho(B_n)`, and Bob answers with `B_{n+1} ⊆ A_n` of radius
//! `beta * (alpha beta)^{s_n} * rho(A_n)`, where `s_n` is the `n`-th term of
//! the acceleration sequence. The plain game is the all-zero sequence.

use std::fmt;

use num_traits::{One, Signed};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{clamp, pow, ArithError, Interval, Rational};
use crate::farey::FareyError;

/// The player making a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mover {
    Alice,
    Bob,
}

impl fmt::Display for Mover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mover::Alice => write!(f, "alice"),
            Mover::Bob => write!(f, "bob"),
        }
    }
}

/// Errors raised by game play and play surgery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("strategy fault: {mover} returned an invalid ball at move {index}: {reason}")]
    StrategyFault { mover: Mover, index: usize, reason: String },
    #[error("ball is not insertable: {0}")]
    NotInsertable(String),
    #[error("ball is not appendable: {0}")]
    NotAppendable(String),
}

impl From<ArithError> for GameError {
    fn from(e: ArithError) -> Self {
        GameError::Domain(e.to_string())
    }
}

impl From<FareyError> for GameError {
    fn from(e: FareyError) -> Self {
        GameError::Domain(e.to_string())
    }
}

/// The two game parameters, each strictly between zero and one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameParams {
    alpha: Rational,
    beta: Rational,
}

impl GameParams {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self, GameError> {
        let one = Rational::one();
        for (name, v) in [("alpha", &alpha), ("beta", &beta)] {
            if !v.is_positive() || *v >= one {
                return Err(GameError::Domain(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// The product `alpha * beta`.
    pub fn ab(&self) -> Rational {
        &self.alpha * &self.beta
    }
}

/// Acceleration sequence `s_1, s_2, ...` with an implicit zero tail.
#[derive(Debug, Clone, Default)]
pub struct AccelSeq {
    terms: Vec<u64>,
}

impl AccelSeq {
    pub fn new(terms: Vec<u64>) -> Self {
        let mut s = Self { terms };
        s.trim();
        s
    }

    /// The all-zero sequence of the plain game.
    pub fn zero() -> Self {
        Self::default()
    }

    fn trim(&mut self) {
        while self.terms.last() == Some(&0) {
            self.terms.pop();
        }
    }

    /// The term `s_n` (1-based).
    pub fn term(&self, n: usize) -> u64 {
        assert!(n >= 1, "acceleration terms are 1-based");
        self.terms.get(n - 1).copied().unwrap_or(0)
    }

    /// The first `len` terms.
    pub fn prefix(&self, len: usize) -> Vec<u64> {
        (1..=len).map(|n| self.term(n)).collect()
    }

    /// The materialized terms, without trailing zeros.
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// `sum_{i <= n} (s_i + 1)`.
    pub fn partial_sum(&self, n: usize) -> u64 {
        (1..=n).map(|i| self.term(i) + 1).sum()
    }
}

impl PartialEq for AccelSeq {
    fn eq(&self, other: &Self) -> bool {
        let len = self.terms.len().max(other.terms.len());
        self.prefix(len) == other.prefix(len)
    }
}

impl Eq for AccelSeq {}

/// A (finite) play: Bob's balls `B_1 ⊇ B_2 ⊇ ...` interleaved with Alice's
/// balls `A_1 ⊇ A_2 ⊇ ...`.
///
/// A play in progress has either as many Alice balls as Bob balls (Bob to
/// move) or one fewer (Alice to move).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Play {
    params: GameParams,
    accel: AccelSeq,
    bob_balls: Vec<Interval>,
    alice_balls: Vec<Interval>,
}

impl Play {
    /// A play consisting of Bob's opening ball only.
    pub fn start(params: GameParams, accel: AccelSeq, opening: Interval) -> Result<Self, GameError> {
        if !opening.radius().is_positive() {
            return Err(GameError::Domain("the opening ball needs a positive radius".into()));
        }
        Ok(Self { params, accel, bob_balls: vec![opening], alice_balls: Vec::new() })
    }

    /// Builds a play from explicit ball lists and checks every rule.
    pub fn from_balls(
        params: GameParams,
        accel: AccelSeq,
        bob_balls: Vec<Interval>,
        alice_balls: Vec<Interval>,
    ) -> Result<Self, GameError> {
        let mut iter_bob = bob_balls.into_iter();
        let first = iter_bob
            .next()
            .ok_or_else(|| GameError::Domain("a play needs an opening ball".into()))?;
        let mut play = Play::start(params, accel, first)?;
        let mut iter_alice = alice_balls.into_iter();
        loop {
            match iter_alice.next() {
                Some(a) => play.push(Mover::Alice, a)?,
                None => break,
            }
            match iter_bob.next() {
                Some(b) => play.push(Mover::Bob, b)?,
                None => break,
            }
        }
        if iter_bob.next().is_some() || iter_alice.next().is_some() {
            return Err(GameError::Domain("ball lists do not interleave".into()));
        }
        Ok(play)
    }

    pub fn params(&self) -> &GameParams {
        &self.params
    }

    pub fn accel(&self) -> &AccelSeq {
        &self.accel
    }

    pub fn bob_balls(&self) -> &[Interval] {
        &self.bob_balls
    }

    pub fn alice_balls(&self) -> &[Interval] {
        &self.alice_balls
    }

    /// Number of Bob balls.
    pub fn depth(&self) -> usize {
        self.bob_balls.len()
    }

    /// The player whose turn it is.
    pub fn next_mover(&self) -> Mover {
        if self.alice_balls.len() < self.bob_balls.len() {
            Mover::Alice
        } else {
            Mover::Bob
        }
    }

    /// The most recent ball of either player.
    pub fn last_ball(&self) -> &Interval {
        match self.next_mover() {
            Mover::Alice => self.bob_balls.last().expect("play has an opening ball"),
            Mover::Bob => self.alice_balls.last().expect("Bob moves after Alice"),
        }
    }

    /// Radius the rules require of the next move.
    pub fn required_radius(&self) -> Rational {
        match self.next_mover() {
            Mover::Alice => self.params.alpha() * self.last_ball().radius(),
            Mover::Bob => {
                let n = self.alice_balls.len();
                let factor = pow(&self.params.ab(), self.accel.term(n) as i64);
                self.params.beta() * factor * self.last_ball().radius()
            }
        }
    }

    /// Appends a move after checking it against the rules.
    pub fn push(&mut self, mover: Mover, ball: Interval) -> Result<(), GameError> {
        if let Err(reason) = self.check_move(&ball, mover) {
            let index = match mover {
                Mover::Alice => self.alice_balls.len() + 1,
                Mover::Bob => self.bob_balls.len() + 1,
            };
            return Err(GameError::StrategyFault { mover, index, reason });
        }
        match mover {
            Mover::Alice => self.alice_balls.push(ball),
            Mover::Bob => self.bob_balls.push(ball),
        }
        Ok(())
    }

    fn check_move(&self, proposed: &Interval, mover: Mover) -> Result<(), String> {
        if mover != self.next_mover() {
            return Err(format!("it is not {mover}'s turn"));
        }
        let required = self.required_radius();
        if proposed.radius() != &required {
            return Err(format!("radius {} but the rules require {}", proposed.radius(), required));
        }
        if !self.last_ball().contains(proposed) {
            return Err(format!("{proposed} is not inside {}", self.last_ball()));
        }
        Ok(())
    }

    /// Re-checks every move of the play from scratch.
    pub fn validate(&self) -> Result<(), GameError> {
        Play::from_balls(
            self.params.clone(),
            self.accel.clone(),
            self.bob_balls.clone(),
            self.alice_balls.clone(),
        )
        .map(|_| ())
    }
}

/// Whether `proposed` is a legal next move of `mover` in `play`.
pub fn validate_move(play: &Play, proposed: &Interval, mover: Mover) -> bool {
    play.check_move(proposed, mover).is_ok()
}

/// What a strategy sees when asked to move.
#[derive(Debug)]
pub struct MoveContext<'a> {
    pub mover: Mover,
    /// 1-based index of the ball being chosen (`A_n` or `B_n`).
    pub index: usize,
    /// The opponent's last ball, which must contain the answer.
    pub parent: &'a Interval,
    /// Radius the rules require of the answer.
    pub radius: Rational,
    pub params: &'a GameParams,
    /// Acceleration term governing Bob's next radius (`s_n` for `A_n` / `B_{n+1}`).
    pub accel_term: u64,
}

/// A positional strategy: a function of the opponent's last ball plus fixed
/// configuration (and, for seeded adversaries, a random stream).
pub trait Strategy {
    fn choose(&mut self, ctx: &MoveContext<'_>, rng: &mut ChaCha8Rng) -> Result<Interval, GameError>;
}

/// The ball of the given radius inside `parent` whose center is closest to
/// `target`, ties toward the smaller coordinate.
pub fn closest_ball(parent: &Interval, radius: &Rational, target: &Rational) -> Result<Interval, GameError> {
    let lo = parent.lo() + radius;
    let hi = parent.hi() - radius;
    if lo > hi {
        return Err(GameError::Domain(format!("no ball of radius {radius} fits in {parent}")));
    }
    Ok(Interval::new(clamp(target, &lo, &hi), radius.clone())?)
}

/// The centered answer, used for fast-forwarding and as a default move.
#[derive(Debug, Clone, Default)]
pub struct Centered;

impl Strategy for Centered {
    fn choose(&mut self, ctx: &MoveContext<'_>, _rng: &mut ChaCha8Rng) -> Result<Interval, GameError> {
        Ok(Interval::new(ctx.parent.center().clone(), ctx.radius.clone())?)
    }
}

/// Plays `depth` rounds (Bob balls `B_1..B_depth` and Alice balls
/// `A_1..A_depth`) from Bob's opening ball.
pub fn run_game(
    params: &GameParams,
    accel: &AccelSeq,
    opening: Interval,
    bob: &mut dyn Strategy,
    alice: &mut dyn Strategy,
    depth: usize,
    seed: u64,
) -> Result<Play, GameError> {
    if depth < 1 {
        return Err(GameError::Domain("depth must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut play = Play::start(params.clone(), accel.clone(), opening)?;
    loop {
        let mover = play.next_mover();
        if mover == Mover::Bob && play.depth() == depth {
            break;
        }
        let index = match mover {
            Mover::Alice => play.alice_balls.len() + 1,
            Mover::Bob => play.bob_balls.len() + 1,
        };
        let accel_term = match mover {
            Mover::Alice => accel.term(index),
            Mover::Bob => accel.term(index - 1),
        };
        let parent = play.last_ball().clone();
        let ctx = MoveContext { mover, index, parent: &parent, radius: play.required_radius(), params, accel_term };
        let strategy: &mut dyn Strategy = match mover {
            Mover::Alice => &mut *alice,
            Mover::Bob => &mut *bob,
        };
        let ball = strategy.choose(&ctx, &mut rng).map_err(|e| match e {
            GameError::StrategyFault { .. } => e,
            other => GameError::StrategyFault { mover, index, reason: other.to_string() },
        })?;
        play.push(mover, ball)?;
    }
    Ok(play)
}

/// Integer `l >= 0` with `ratio = base^l`, for `0 < base < 1`.
fn exact_exponent(ratio: &Rational, base: &Rational) -> Option<u64> {
    if !ratio.is_positive() || ratio > &Rational::one() {
        return None;
    }
    let mut power = Rational::one();
    let mut l = 0u64;
    while &power > ratio {
        power *= base;
        l += 1;
    }
    (&power == ratio).then_some(l)
}

/// Alice's canonical ball of radius `radius` inside `outer` containing
/// `inner`: centered on `inner` when that fits, otherwise the leftmost
/// admissible placement.
pub fn canonical_alice(outer: &Interval, inner: &Interval, radius: &Rational) -> Result<Interval, GameError> {
    let lo = (outer.lo() + radius).max(inner.hi() - radius);
    let hi = (outer.hi() - radius).min(inner.lo() + radius);
    if lo > hi {
        return Err(GameError::Domain(format!(
            "no ball of radius {radius} lies in {outer} and contains {inner}"
        )));
    }
    let c = inner.center();
    let center = if &lo <= c && c <= &hi { c.clone() } else { lo };
    Ok(Interval::new(center, radius.clone())?)
}

/// Splices `ball` between two consecutive Bob balls `B_m ⊋ ball ⊋ B_{m+1}`.
///
/// Requires `rho(ball) = rho(B_1) (alpha beta)^l` for an integer `l >= 1`.
/// Returns the induced play and its acceleration sequence, in which
/// `s_m` becomes `l - sum_{i<m}(s_i + 1) - 1` and `s_{m+1}` becomes
/// `sum_{i<=m}(s_i + 1) - l - 1`, with later terms shifted by one.
pub fn insert_ball(play: &Play, ball: &Interval) -> Result<(Play, AccelSeq), GameError> {
    let k = play.depth();
    let ab = play.params.ab();
    let ratio = ball.radius() / play.bob_balls[0].radius();
    let l = exact_exponent(&ratio, &ab)
        .filter(|&l| l >= 1)
        .ok_or_else(|| GameError::NotInsertable(format!("radius ratio {ratio} is not a positive power of {ab}")))?;
    let m = (1..k)
        .find(|&m| play.bob_balls[m - 1].strictly_contains(ball) && ball.strictly_contains(&play.bob_balls[m]))
        .ok_or_else(|| GameError::NotInsertable(format!("{ball} does not fit strictly between consecutive Bob balls")))?;
    let before = play.accel.partial_sum(m - 1);
    let through = play.accel.partial_sum(m);
    if !(before < l && l < through) {
        return Err(GameError::NotInsertable(format!(
            "exponent {l} does not lie strictly between {before} and {through}"
        )));
    }
    let old_len = play.accel.terms().len().max(k);
    let mut terms: Vec<u64> = play.accel.prefix(m - 1);
    terms.push(l - before - 1);
    terms.push(through - l - 1);
    terms.extend((m + 1..=old_len).map(|j| play.accel.term(j)));
    let accel = AccelSeq::new(terms);

    let alpha = play.params.alpha();
    let b_m = &play.bob_balls[m - 1];
    let b_next = &play.bob_balls[m];
    let mut bob_balls = play.bob_balls[..m].to_vec();
    bob_balls.push(ball.clone());
    bob_balls.extend_from_slice(&play.bob_balls[m..]);
    let mut alice_balls = play.alice_balls[..m - 1].to_vec();
    alice_balls.push(canonical_alice(b_m, ball, &(alpha * b_m.radius()))?);
    alice_balls.push(canonical_alice(ball, b_next, &(alpha * ball.radius()))?);
    alice_balls.extend_from_slice(&play.alice_balls[m..]);
    let out = Play::from_balls(play.params.clone(), accel.clone(), bob_balls, alice_balls)?;
    Ok((out, accel))
}

/// Appends `ball ⊊ B_k` after the last Bob ball, continuing with the
/// acceleration sequence `s_star`.
///
/// Requires `rho(ball) = rho(B_1) (alpha beta)^l` with
/// `l > sum_{i<k}(s_i + 1)`. The induced sequence keeps `s_1..s_{k-1}`, sets
/// `s_k = l - sum_{i<k}(s_i + 1) - 1`, and continues with `s_star`.
pub fn append_ball(play: &Play, ball: &Interval, s_star: &AccelSeq) -> Result<(Play, AccelSeq), GameError> {
    let k = play.depth();
    let ab = play.params.ab();
    let ratio = ball.radius() / play.bob_balls[0].radius();
    let l = exact_exponent(&ratio, &ab)
        .ok_or_else(|| GameError::NotAppendable(format!("radius ratio {ratio} is not a power of {ab}")))?;
    let b_k = &play.bob_balls[k - 1];
    if !b_k.strictly_contains(ball) {
        return Err(GameError::NotAppendable(format!("{ball} is not strictly inside {b_k}")));
    }
    let before = play.accel.partial_sum(k - 1);
    if l <= before {
        return Err(GameError::NotAppendable(format!("exponent {l} does not exceed {before}")));
    }
    let mut terms = play.accel.prefix(k - 1);
    terms.push(l - before - 1);
    terms.extend_from_slice(s_star.terms());
    let accel = AccelSeq::new(terms);

    let alpha = play.params.alpha();
    let mut bob_balls = play.bob_balls.clone();
    bob_balls.push(ball.clone());
    let mut alice_balls = play.alice_balls[..k - 1].to_vec();
    alice_balls.push(canonical_alice(b_k, ball, &(alpha * b_k.radius()))?);
    alice_balls.push(Interval::new(ball.center().clone(), alpha * ball.radius())?);
    let out = Play::from_balls(play.params.clone(), accel.clone(), bob_balls, alice_balls)?;
    Ok((out, accel))
}

/// Restricts a complete play to the Bob balls at the given 1-based indices.
///
/// Between chosen indices `i < i'` the radius shrinks by
/// `(alpha beta)^{E}` with `E = sum_{n=i}^{i'-1}(s_n + 1)`, so the induced
/// term is `E - 1`. Alice's balls are the original `A_i`.
pub fn restrict_play(play: &Play, indices: &[usize]) -> Result<(Play, AccelSeq), GameError> {
    if indices.is_empty() {
        return Err(GameError::Domain("restriction needs at least one index".into()));
    }
    if play.alice_balls.len() != play.bob_balls.len() {
        return Err(GameError::Domain("restriction needs a play ending with an Alice ball".into()));
    }
    for w in indices.windows(2) {
        if w[0] >= w[1] {
            return Err(GameError::Domain(format!("indices must be strictly ascending, got {indices:?}")));
        }
    }
    if indices[0] < 1 || *indices.last().expect("non-empty") > play.depth() {
        return Err(GameError::Domain(format!("indices out of range 1..={}", play.depth())));
    }
    let terms: Vec<u64> = indices
        .windows(2)
        .map(|w| (w[0]..w[1]).map(|n| play.accel.term(n) + 1).sum::<u64>() - 1)
        .collect();
    let accel = AccelSeq::new(terms);
    let bob_balls = indices.iter().map(|&i| play.bob_balls[i - 1].clone()).collect();
    let alice_balls = indices.iter().map(|&i| play.alice_balls[i - 1].clone()).collect();
    let out = Play::from_balls(play.params.clone(), accel.clone(), bob_balls, alice_balls)?;
    Ok((out, accel))
}

/// Radius of `B_n` predicted by the radius law from `rho(B_1)`.
pub fn predicted_radius(params: &GameParams, accel: &AccelSeq, first: &Rational, n: usize) -> Rational {
    first * pow(&params.ab(), accel.partial_sum(n - 1) as i64)
}

/// Seeded uniform placement helper: a center on a grid of `steps + 1` points
/// spanning `[lo, hi]`.
pub fn grid_point(lo: &Rational, hi: &Rational, numerator: u64, steps: u64) -> Rational {
    if steps == 0 {
        return lo.clone();
    }
    lo + (hi - lo) * Rational::new(numerator.into(), steps.into())
}
