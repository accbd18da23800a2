//! Seeded adversaries usable by either player.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{int, Interval, Rational};
use crate::farey::minimal_order_farey_element;
use crate::game::{closest_ball, grid_point, GameError, MoveContext, Strategy};

/// Number of grid steps used by the random adversary across the admissible
/// center range.
pub const RANDOM_GRID_STEPS: u64 = 1 << 16;

/// The kinds of adversary available by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Adversary {
    /// Uniform center on a grid over the admissible range.
    Random,
    /// Greedy placement toward a fixed rational.
    TargetRational(Rational),
    /// Center as far as possible from the parent's minimal-order Farey element.
    AvoidAnchor,
}

impl Adversary {
    /// Parses `random`, `avoid_anchor` or `target:<p/q>`.
    pub fn parse(name: &str) -> Result<Self, GameError> {
        match name {
            "random" => Ok(Self::Random),
            "avoid_anchor" => Ok(Self::AvoidAnchor),
            other => match other.strip_prefix("target:") {
                Some(v) => Ok(Self::TargetRational(
                    crate::arith::parse_rational(v).map_err(|e| GameError::Domain(e.to_string()))?,
                )),
                None => Err(GameError::Domain(format!("unknown adversary '{other}'"))),
            },
        }
    }
}

fn center_bounds(parent: &Interval, radius: &Rational) -> Result<(Rational, Rational), GameError> {
    let lo = parent.lo() + radius;
    let hi = parent.hi() - radius;
    if lo > hi {
        return Err(GameError::Domain(format!("no ball of radius {radius} fits in {parent}")));
    }
    Ok((lo, hi))
}

/// The minimal-order rational of `ball`; an integer in it when the ball is
/// at least one unit wide.
fn anchor_of(ball: &Interval) -> Result<Rational, GameError> {
    if ball.diam() >= int(1) {
        return Ok(ball.center().round());
    }
    Ok(minimal_order_farey_element(ball)?.0.value())
}

impl Strategy for Adversary {
    fn choose(&mut self, ctx: &MoveContext<'_>, rng: &mut ChaCha8Rng) -> Result<Interval, GameError> {
        let (lo, hi) = center_bounds(ctx.parent, &ctx.radius)?;
        let center = match self {
            Self::Random => grid_point(&lo, &hi, rng.gen_range(0..=RANDOM_GRID_STEPS), RANDOM_GRID_STEPS),
            Self::TargetRational(t) => return closest_ball(ctx.parent, &ctx.radius, t),
            Self::AvoidAnchor => {
                let anchor = anchor_of(ctx.parent)?;
                if (&hi - &anchor) > (&anchor - &lo) {
                    hi
                } else {
                    lo
                }
            }
        };
        Ok(Interval::new(center, ctx.radius.clone())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::game::{run_game, AccelSeq, Centered, GameParams};

    fn params() -> GameParams {
        GameParams::new(rat(1, 3), rat(1, 2)).unwrap()
    }

    #[test]
    fn random_is_reproducible() {
        let opening = Interval::from_endpoints(int(0), int(1)).unwrap();
        let run = |seed| {
            run_game(&params(), &AccelSeq::zero(), opening.clone(), &mut Adversary::Random, &mut Adversary::Random, 12, seed)
                .unwrap()
        };
        assert_eq!(run(5).bob_balls(), run(5).bob_balls());
        assert_ne!(run(5).bob_balls(), run(6).bob_balls());
    }

    #[test]
    fn target_moves_toward_the_target() {
        let opening = Interval::from_endpoints(int(0), int(1)).unwrap();
        let mut bob = Adversary::TargetRational(rat(1, 2));
        let play = run_game(&params(), &AccelSeq::zero(), opening, &mut bob, &mut Centered, 10, 0).unwrap();
        play.validate().unwrap();
        for b in play.bob_balls() {
            assert!(b.contains_point(&rat(1, 2)));
        }
    }

    #[test]
    fn avoid_anchor_takes_the_far_endpoint() {
        let parent = Interval::from_endpoints(rat(1, 5), rat(3, 5)).unwrap();
        let p = params();
        let ctx = MoveContext {
            mover: crate::game::Mover::Alice,
            index: 1,
            parent: &parent,
            radius: rat(1, 15),
            params: &p,
            accel_term: 0,
        };
        let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
        // Anchor 1/2; the center range is [4/15, 8/15].
        let ball = Adversary::AvoidAnchor.choose(&ctx, &mut rng).unwrap();
        assert_eq!(ball.center(), &rat(4, 15));
    }

    #[test]
    fn parses_names() {
        assert_eq!(Adversary::parse("random").unwrap(), Adversary::Random);
        assert_eq!(Adversary::parse("target:1/2").unwrap(), Adversary::TargetRational(rat(1, 2)));
        assert!(Adversary::parse("nope").is_err());
    }
}
