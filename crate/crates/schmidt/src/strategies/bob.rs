//! Bob's Farey strategy for the game with `alpha = 1/2`, `beta <= 1/2`.
//!
//! Each recursion step starts from an Alice ball `A` with minimal-order Farey
//! element `gamma` of order `q`:
//!
//! * if `rho(A) < 1/q^2`, Bob plays inside the Farey half-interval of `A`
//!   and keeps `gamma`, so every point of his ball is within `2 beta / q^2`
//!   of `gamma`;
//! * otherwise he finds an element `p'/q'` of the half Farey partition of `A`
//!   near the center of a suitable Alice ball (first descending inside the
//!   Farey half-interval while his radius is at least `2/q^2`), centers his
//!   ball on it, and after Alice's forced reply keeps it again. Then every
//!   point is within `2 beta / q^2 < 18 beta / q'^2` of `p'/q'`, with
//!   `q' < 3q`.

use num_bigint::BigInt;
use num_traits::Signed;
use rand_chacha::ChaCha8Rng;

use crate::arith::{from_big, int, rat, Interval, Rational};
use crate::farey::{
    farey_half_interval, half_farey_partition, minimal_order_farey_element, FareyFraction, HalfFareyPartition,
};
use crate::game::{closest_ball, GameError, GameParams, MoveContext, Play, Strategy};

/// How a witness was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessKind {
    /// Bob kept the anchor inside the Farey half-interval; bound `2 beta / q^2`.
    HalfInterval,
    /// Bob centered on a partition element and forced Alice to keep it;
    /// bound `18 beta / q'^2`.
    Forced {
        /// Order of the anchor of the step.
        anchor_order: BigInt,
        /// True when the partition element was reached after descending.
        descended: bool,
    },
}

/// A rational close to every point of a recorded Bob ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BobWitness {
    /// Recursion step (1-based).
    pub step: usize,
    pub nu: FareyFraction,
    /// 1-based index of the Bob ball the bound is stated for.
    pub ball_index: usize,
    /// Every `x` in the ball satisfies `|x - nu| < bound`.
    pub bound: Rational,
    /// The sharper intermediate bound `2 beta / q^2` with `q` the anchor order.
    pub anchor_bound: Rational,
    pub kind: WitnessKind,
}

impl BobWitness {
    /// Checks `|x - nu| < bound` (and the sharper anchor bound) for both
    /// endpoints of `ball`, which covers every point of it.
    pub fn holds_on(&self, ball: &Interval) -> bool {
        let far = ball.farthest_distance(&self.nu.value());
        far < self.bound && far < self.anchor_bound
    }
}

/// Anchor of a recursion step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepAnchor {
    pub step: usize,
    pub anchor: FareyFraction,
    pub order: BigInt,
    /// Index of the Alice ball that opened the step.
    pub alice_index: usize,
}

/// Pending multi-move commitment of the strategy.
#[derive(Debug, Clone)]
pub enum Phase {
    /// The next Alice ball opens a new recursion step.
    Fresh,
    /// Bob is shrinking inside the Farey half-interval of the step's first
    /// Alice ball until his radius drops below `2/q^2`.
    Descend { partition: HalfFareyPartition, q: BigInt },
    /// Bob centered his last ball on `nu`; Alice's reply must contain it.
    Forced { nu: FareyFraction, q: BigInt, descended: bool },
}

/// Bob's Farey strategy.
#[derive(Debug, Clone)]
pub struct FareyBob {
    beta: Rational,
    phase: Phase,
    started: bool,
    step: usize,
    witnesses: Vec<BobWitness>,
    anchors: Vec<StepAnchor>,
}

impl FareyBob {
    /// Requires `alpha = 1/2` and `0 < beta <= 1/2`.
    pub fn new(params: &GameParams) -> Result<Self, GameError> {
        if params.alpha() != &rat(1, 2) || params.beta() > &rat(1, 2) {
            return Err(GameError::Domain(format!(
                "the Farey strategy needs alpha = 1/2 and beta <= 1/2, got alpha = {}, beta = {}",
                params.alpha(),
                params.beta()
            )));
        }
        Ok(Self {
            beta: params.beta().clone(),
            phase: Phase::Fresh,
            started: false,
            step: 0,
            witnesses: Vec::new(),
            anchors: Vec::new(),
        })
    }

    pub fn witnesses(&self) -> &[BobWitness] {
        &self.witnesses
    }

    pub fn anchors(&self) -> &[StepAnchor] {
        &self.anchors
    }

    pub fn phase(&self) -> &Phase {
        &self.phase
    }

    /// One move of the plain game: answer `alice` with a ball of radius
    /// `beta * rho(alice)`. Returns the ball and the witness it carries, if any.
    pub fn bob_move(
        &mut self,
        alice: &Interval,
        alice_index: usize,
        ball_index: usize,
    ) -> Result<(Interval, Option<BobWitness>), GameError> {
        let radius = &self.beta * alice.radius();
        let phase = std::mem::replace(&mut self.phase, Phase::Fresh);
        match phase {
            Phase::Fresh => self.open_step(alice, &radius, alice_index, ball_index),
            Phase::Descend { partition, q } => {
                if radius < int(2) / q_squared(&q) {
                    let nu = nearest_partition_element(&partition, alice)?;
                    let ball = Interval::new(nu.value(), radius)?;
                    self.phase = Phase::Forced { nu, q, descended: true };
                    Ok((ball, None))
                } else {
                    let ball = Interval::new(alice.center().clone(), radius)?;
                    self.phase = Phase::Descend { partition, q };
                    Ok((ball, None))
                }
            }
            Phase::Forced { nu, q, descended } => {
                let v = nu.value();
                if !alice.contains_point(&v) {
                    return Err(GameError::Domain(format!("Alice's ball {alice} does not contain the forced point {v}")));
                }
                let ball = closest_ball(alice, &radius, &v)?;
                let q_prime = nu.q().clone();
                let witness = BobWitness {
                    step: self.step,
                    nu,
                    ball_index,
                    bound: int(18) * &self.beta / q_squared(&q_prime),
                    anchor_bound: int(2) * &self.beta / q_squared(&q),
                    kind: WitnessKind::Forced { anchor_order: q, descended },
                };
                self.witnesses.push(witness.clone());
                Ok((ball, Some(witness)))
            }
        }
    }

    fn open_step(
        &mut self,
        alice: &Interval,
        radius: &Rational,
        alice_index: usize,
        ball_index: usize,
    ) -> Result<(Interval, Option<BobWitness>), GameError> {
        let (anchor, q) = minimal_order_farey_element(alice)?;
        self.step += 1;
        self.anchors.push(StepAnchor { step: self.step, anchor: anchor.clone(), order: q.clone(), alice_index });
        let q2 = q_squared(&q);
        let half = farey_half_interval(alice)?;
        if alice.radius() < &q2.recip() {
            let g = anchor.value();
            // Centers keeping the ball inside the half-interval and on the anchor.
            let lo = (half.interval.lo() + radius).max(&g - radius);
            let hi = (half.interval.hi() - radius).min(&g + radius);
            let target = half.interval.center();
            let center = crate::arith::clamp(target, &lo, &hi);
            let ball = Interval::new(center, radius.clone())?;
            let witness = BobWitness {
                step: self.step,
                nu: anchor,
                ball_index,
                bound: int(2) * &self.beta / &q2,
                anchor_bound: int(2) * &self.beta / &q2,
                kind: WitnessKind::HalfInterval,
            };
            self.witnesses.push(witness.clone());
            return Ok((ball, Some(witness)));
        }
        let partition = half_farey_partition(alice)?;
        if radius < &(int(2) / &q2) {
            let nu = nearest_partition_element(&partition, alice)?;
            let ball = Interval::new(nu.value(), radius.clone())?;
            self.phase = Phase::Forced { nu, q, descended: false };
            Ok((ball, None))
        } else {
            let ball = closest_ball(&half.interval, radius, half.interval.center())?;
            self.phase = Phase::Descend { partition, q };
            Ok((ball, None))
        }
    }
}

fn q_squared(q: &BigInt) -> Rational {
    from_big(q * q)
}

/// The partition element in `[a - rho(A)/2, a + rho(A)/2]` closest to the
/// center `a` of `alice`, ties toward the smaller one.
fn nearest_partition_element(partition: &HalfFareyPartition, alice: &Interval) -> Result<FareyFraction, GameError> {
    let a = alice.center();
    let half = alice.radius() / int(2);
    partition
        .elements()
        .into_iter()
        .filter(|f| (f.value() - a).abs() <= half)
        .min_by(|x, y| {
            let dx = (x.value() - a).abs();
            let dy = (y.value() - a).abs();
            dx.cmp(&dy).then_with(|| x.cmp(y))
        })
        .ok_or_else(|| GameError::Domain(format!("no partition element near the center of {alice}")))
}

impl Strategy for FareyBob {
    fn choose(&mut self, ctx: &MoveContext<'_>, _rng: &mut ChaCha8Rng) -> Result<Interval, GameError> {
        let alice = ctx.parent;
        let alice_index = ctx.index - 1;
        if !self.started {
            // Bob's previous ball has radius 2 rho(A); start once it is at most 1/2.
            if alice.radius() > &rat(1, 4) {
                return Ok(Interval::new(alice.center().clone(), ctx.radius.clone())?);
            }
            self.started = true;
        }
        // In an accelerated round Bob also chooses the intermediate Alice
        // balls himself (centered), so the plain-game procedure runs
        // `s + 1` times and only the last ball is played.
        let mut current = alice.clone();
        let mut ball = None;
        for round in 0..=ctx.accel_term {
            let (b, _) = self.bob_move(&current, alice_index, ctx.index)?;
            if round < ctx.accel_term {
                current = Interval::new(b.center().clone(), b.radius() / int(2))?;
            }
            ball = Some(b);
        }
        Ok(ball.expect("at least one round"))
    }
}

/// Witnesses and anchors recovered from a play.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub witnesses: Vec<BobWitness>,
    pub anchors: Vec<StepAnchor>,
    /// The anchor the play settled on, when the last three steps share it and
    /// it lies in the last Bob ball.
    pub stabilized: Option<FareyFraction>,
    /// False when the play's Bob moves differ from the Farey strategy's
    /// answers; the lists then cover only the agreeing prefix.
    pub exact: bool,
}

impl WitnessReport {
    /// Anchor orders never decrease from one recursion step to the next.
    pub fn anchor_orders_monotone(&self) -> bool {
        self.anchors.windows(2).all(|w| w[0].order <= w[1].order)
    }

    /// Length of the longest strictly increasing run (as a subsequence) of
    /// witness denominators.
    pub fn increasing_denominators(&self) -> usize {
        let mut tails: Vec<BigInt> = Vec::new();
        for w in &self.witnesses {
            let q = w.nu.q().clone();
            match tails.binary_search(&q) {
                Ok(_) => {}
                Err(pos) if pos == tails.len() => tails.push(q),
                Err(pos) => tails[pos] = q,
            }
        }
        tails.len()
    }
}

/// Replays the Farey strategy on the Alice balls of a plain `(1/2, beta)`
/// play and collects its witnesses and anchors.
pub fn extract_witnesses(play: &Play) -> Result<WitnessReport, GameError> {
    let params = play.params();
    let mut bob = FareyBob::new(params)?;
    let mut exact = true;
    let alice_balls = play.alice_balls();
    let bob_balls = play.bob_balls();
    for (i, alice) in alice_balls.iter().enumerate() {
        let Some(actual) = bob_balls.get(i + 1) else { break };
        let n = i + 1;
        if play.accel().term(n) != 0 {
            exact = false;
            break;
        }
        let answer = if !bob.started && alice.radius() > &rat(1, 4) {
            Interval::new(alice.center().clone(), params.beta() * alice.radius())?
        } else {
            bob.started = true;
            bob.bob_move(alice, n, n + 1)?.0
        };
        if &answer != actual {
            exact = false;
            break;
        }
    }
    let stabilized = stabilization(&bob.anchors, bob_balls.last().expect("non-empty play"));
    Ok(WitnessReport { witnesses: bob.witnesses, anchors: bob.anchors, stabilized, exact })
}

fn stabilization(anchors: &[StepAnchor], last: &Interval) -> Option<FareyFraction> {
    if anchors.len() < 3 {
        return None;
    }
    let tail = &anchors[anchors.len() - 3..];
    let a = &tail[0].anchor;
    (tail.iter().all(|s| &s.anchor == a) && last.contains_point(&a.value())).then(|| a.clone())
}
