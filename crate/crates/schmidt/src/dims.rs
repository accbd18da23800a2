//! Dimension bounds, counting formulas and the hole/cover construction.
//!
//! Exact inequalities are decided in rational arithmetic. Logarithms are
//! evaluated as decimal floats at a configurable number of significant
//! digits (see [`DEFAULT_PRECISION`]), with extra guard digits during the
//! computation.

use std::str::FromStr;

use dashu_float::DBig;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{ceil, floor, floor_nth_root, from_big, int, is_integer, pow, rat, ArithError, BallD, Interval, Rational};
use crate::game::{GameError, GameParams};
use crate::strategies::bob::FareyBob;
use crate::tess::{m_tessellation, maximal_tessellation, minimal_tessellation, CompleteTess, TessError};

/// Decimal floating-point values used for logarithmic bounds.
pub type Decimal = DBig;

/// Default number of significant decimal digits for logarithms.
pub const DEFAULT_PRECISION: usize = 50;

/// Guard digits added while evaluating logarithms.
const GUARD_DIGITS: usize = 10;

/// Deepest cover construction accepted by [`build_cover_levels`].
pub const MAX_COVER_DEPTH: usize = 4;

/// Errors raised by the dimension formulas and the cover construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("construction out of range: {0}")]
    Feasibility(String),
}

impl From<ArithError> for DimsError {
    fn from(e: ArithError) -> Self {
        DimsError::Domain(e.to_string())
    }
}

impl From<TessError> for DimsError {
    fn from(e: TessError) -> Self {
        DimsError::Domain(e.to_string())
    }
}

impl From<GameError> for DimsError {
    fn from(e: GameError) -> Self {
        DimsError::Domain(e.to_string())
    }
}

/// Natural logarithm of a positive rational, rounded to `precision`
/// significant digits.
pub fn ln_rational(x: &Rational, precision: usize) -> Result<Decimal, DimsError> {
    if !x.is_positive() {
        return Err(DimsError::Domain(format!("logarithm of non-positive {x}")));
    }
    let guard = precision + GUARD_DIGITS;
    let ln_int = |n: &BigInt| -> Decimal {
        DBig::from_str(&n.to_string()).expect("integer literal").with_precision(guard).value().ln()
    };
    Ok((ln_int(x.numer()) - ln_int(x.denom())).with_precision(precision).value())
}

/// Nearest `f64` to a decimal value.
pub fn to_f64(x: &Decimal) -> f64 {
    x.to_f64().value()
}

fn ratio_of_logs(num: &Rational, den: &Rational, scale: &Rational, precision: usize) -> Result<Decimal, DimsError> {
    let guard = precision + GUARD_DIGITS;
    let value = ln_rational(num, guard)? / ln_rational(den, guard)?;
    let scaled = if scale.is_one() {
        value
    } else {
        value * DBig::from_str(&scale.numer().to_string()).expect("integer literal")
            / DBig::from_str(&scale.denom().to_string()).expect("integer literal")
    };
    Ok(scaled.with_precision(precision).value())
}

/// Parameters `(d, s, j, beta)` of the upper bound for ubiquitously losing
/// sets: integers `d >= 1`, `s >= d`, `j >= 2` and `0 < beta <= 1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundInputs {
    pub d: u32,
    pub s: u32,
    pub j: u32,
    pub beta: Rational,
}

impl BoundInputs {
    pub fn new(d: u32, s: u32, j: u32, beta: Rational) -> Result<Self, DimsError> {
        if d < 1 || s < d || j < 2 {
            return Err(DimsError::Domain(format!("need d >= 1, s >= d and j >= 2, got d = {d}, s = {s}, j = {j}")));
        }
        if !beta.is_positive() || beta > rat(1, 2) {
            return Err(DimsError::Domain(format!("need 0 < beta <= 1/2, got {beta}")));
        }
        Ok(Self { d, s, j, beta })
    }

    /// `j^s beta^{-s-1}`: radius of an Alice ball over the cell radius.
    pub fn outer_ratio(&self) -> Rational {
        pow(&int(self.j as i64), self.s as i64) * pow(&self.beta, -(self.s as i64) - 1)
    }

    /// `j^s beta^{-s}`: radius of a hole over the cell radius.
    pub fn hole_ratio(&self) -> Rational {
        pow(&int(self.j as i64), self.s as i64) * pow(&self.beta, -(self.s as i64))
    }

    /// `j^{s+1} beta^{-(s+1)}`: scale factor between consecutive levels.
    pub fn level_ratio(&self) -> Rational {
        pow(&(int(self.j as i64) / &self.beta), self.s as i64 + 1)
    }

    /// Whether `1/beta` is an integer.
    pub fn integer_beta(&self) -> bool {
        is_integer(&self.beta.recip())
    }
}

/// Which hole count applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoleVariant {
    /// `1/beta` is an integer and holes are representable.
    IntegerBeta,
    /// Any `beta`; cells come from an arbitrary complete tessellation.
    General,
}

/// Cells per hole: `(j^s b^{-s-1} + 1)^d - j^{sd} b^{-sd}` for integer
/// `1/beta`, or `(ceil(j^s b^{-s-1}) + 1)^d - (floor(j^s b^{-s}) - 1)^d` in
/// general.
pub fn hole_count(inputs: &BoundInputs, variant: HoleVariant) -> Result<BigInt, DimsError> {
    let d = inputs.d as usize;
    match variant {
        HoleVariant::IntegerBeta => {
            if !inputs.integer_beta() {
                return Err(DimsError::Domain(format!("1/beta is not an integer for beta = {}", inputs.beta)));
            }
            let outer = inputs.outer_ratio().to_integer();
            let hole = inputs.hole_ratio().to_integer();
            Ok(num_traits::pow(outer + 1, d) - num_traits::pow(hole, d))
        }
        HoleVariant::General => {
            let outer = ceil(&inputs.outer_ratio());
            let hole = floor(&inputs.hole_ratio());
            Ok(num_traits::pow(outer + 1, d) - num_traits::pow(hole - 1, d))
        }
    }
}

/// An upper bound `log(j^d N) / log(j^{s+1} beta^{-(s+1)})` with its exact
/// arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionBound {
    pub value: Decimal,
    /// `j^d N`.
    pub numerator_argument: BigInt,
    /// `j^{s+1} beta^{-(s+1)}`.
    pub denominator_argument: Rational,
}

impl DimensionBound {
    /// The bound as `log(a) / log(b)` with exact arguments.
    pub fn expression(&self) -> String {
        format!("log({}) / log({})", self.numerator_argument, self.denominator_argument)
    }
}

/// The general bound and, for integer `1/beta`, the sharper one.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperBounds {
    pub general: DimensionBound,
    pub integer_case: Option<DimensionBound>,
}

fn dimension_bound(inputs: &BoundInputs, variant: HoleVariant, precision: usize) -> Result<DimensionBound, DimsError> {
    let n = hole_count(inputs, variant)?;
    let numerator_argument = num_traits::pow(BigInt::from(inputs.j), inputs.d as usize) * n;
    let denominator_argument = inputs.level_ratio();
    let value = ratio_of_logs(&from_big(numerator_argument.clone()), &denominator_argument, &Rational::one(), precision)?;
    Ok(DimensionBound { value, numerator_argument, denominator_argument })
}

/// Upper bounds on the Hausdorff dimension of a ubiquitously losing set.
pub fn upper_bound_ubiq_losing(inputs: &BoundInputs, precision: usize) -> Result<UpperBounds, DimsError> {
    let general = dimension_bound(inputs, HoleVariant::General, precision)?;
    let integer_case = if inputs.integer_beta() {
        Some(dimension_bound(inputs, HoleVariant::IntegerBeta, precision)?)
    } else {
        None
    };
    Ok(UpperBounds { general, integer_case })
}

/// Exact check of `j^d N_R < j^{(s+1)d} beta^{-(s+1)d}`, which keeps the
/// upper bounds below `d`.
pub fn aux_inequality_holds(inputs: &BoundInputs) -> Result<bool, DimsError> {
    let lhs = num_traits::pow(BigInt::from(inputs.j), inputs.d as usize) * hole_count(inputs, HoleVariant::General)?;
    let rhs = pow(&inputs.level_ratio(), inputs.d as i64);
    Ok(from_big(lhs) < rhs)
}

/// Lower bound `d log(floor(1/beta)) / (-log(alpha beta))` for winning sets.
pub fn lower_bound_winning(d: u32, alpha: &Rational, beta: &Rational, precision: usize) -> Result<Decimal, DimsError> {
    GameParams::new(alpha.clone(), beta.clone())?;
    if d < 1 {
        return Err(DimsError::Domain("dimension must be at least 1".into()));
    }
    let k = floor(&beta.recip());
    if k.is_one() {
        return Ok(DBig::ZERO);
    }
    ratio_of_logs(&from_big(k), &(alpha * beta).recip(), &int(d as i64), precision)
}

/// Dimension bounds for the badly approximable numbers with constant `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaBounds {
    /// `log floor(1/(18 delta)) / log(1/(6 delta))`, for `delta < 1/18`.
    pub lower: Option<Decimal>,
    /// `(log 2 + log(ceil(648/d^2) - floor(36/d) + 2)) / (2 log(36/d))`.
    pub upper: Option<Decimal>,
    /// `1 + log(1 - d/18 + d^2/648) / (2 log(36/d))`, when `18/delta` is an integer.
    pub upper_integer_case: Option<Decimal>,
    /// True when `5 delta^2 >= 1`, where the set is empty.
    pub empty: bool,
}

/// Lower and upper dimension bounds for `Bad(delta)`.
///
/// The upper formulas are the ubiquitously-losing bounds with `d = s = 1`,
/// `j = 2` and `beta = delta/18`, so they are evaluated whenever
/// `beta <= 1/2`, i.e. `delta <= 9`; `empty` flags the range where the set
/// itself is empty.
pub fn bad_delta_bounds(delta: &Rational, precision: usize) -> Result<DeltaBounds, DimsError> {
    if !delta.is_positive() {
        return Err(DimsError::Domain(format!("delta must be positive, got {delta}")));
    }
    let lower = if delta < &rat(1, 18) {
        let k = floor(&(int(18) * delta).recip());
        Some(ratio_of_logs(&from_big(k), &(int(6) * delta).recip(), &Rational::one(), precision)?)
    } else {
        None
    };
    let empty = int(5) * delta * delta >= int(1);
    let (upper, upper_integer_case) = if delta <= &int(9) {
        let inputs = BoundInputs::new(1, 1, 2, delta / int(18))?;
        let bounds = upper_bound_ubiq_losing(&inputs, precision)?;
        (Some(bounds.general.value), bounds.integer_case.map(|b| b.value))
    } else {
        (None, None)
    };
    Ok(DeltaBounds { lower, upper, upper_integer_case, empty })
}

/// Lower bound for the intersection of `n` translates of `Bad(delta)`:
/// `n log floor((1/(18 delta 3^{n-1}))^{1/n}) / log(1/(6 delta))`.
pub fn intersection_bound(n: u32, delta: &Rational, precision: usize) -> Result<Decimal, DimsError> {
    if n < 1 {
        return Err(DimsError::Domain("number of translates must be at least 1".into()));
    }
    let limit = pow(&int(3), 1 - n as i64) / int(18);
    if !delta.is_positive() || delta >= &limit {
        return Err(DimsError::Domain(format!("need 0 < delta < {limit}, got {delta}")));
    }
    let x = (int(18) * delta * pow(&int(3), n as i64 - 1)).recip();
    let k = floor_nth_root(&x, n)?;
    if k.is_one() {
        return Ok(DBig::ZERO);
    }
    ratio_of_logs(&from_big(k), &(int(6) * delta).recip(), &int(n as i64), precision)
}

/// How winning parameters move under the transfer results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransferMode {
    /// Same product: `alpha beta = alpha' beta'` with `beta' <= beta`.
    LosingInvariance { alpha_prime: Rational },
    /// A larger Alice parameter: `(alpha' | alpha beta0 / alpha')`.
    BiggerAlpha { alpha_prime: Rational },
    /// Image under a bilipschitz map with constant `K >= 1`:
    /// `(alpha K^2 | beta0 K^{-2})`.
    Bilipschitz { k: Rational },
    /// Image under a bijection with Lipschitz constants `K` and `L` (map and
    /// inverse): `(alpha K L | beta0 (K L)^{-1})`.
    Lipschitz { k: Rational, l: Rational },
}

/// Transferred parameters `(alpha', beta')` (or `(alpha', beta0')`).
pub fn param_transfer(alpha: &Rational, beta: &Rational, mode: &TransferMode) -> Result<(Rational, Rational), DimsError> {
    GameParams::new(alpha.clone(), beta.clone())?;
    let out = match mode {
        TransferMode::LosingInvariance { alpha_prime } => {
            let beta_prime = alpha * beta / alpha_prime;
            if &beta_prime > beta {
                return Err(DimsError::Domain(format!("beta' = {beta_prime} exceeds beta = {beta}")));
            }
            (alpha_prime.clone(), beta_prime)
        }
        TransferMode::BiggerAlpha { alpha_prime } => {
            if alpha_prime < alpha {
                return Err(DimsError::Domain(format!("alpha' = {alpha_prime} is below alpha = {alpha}")));
            }
            (alpha_prime.clone(), alpha * beta / alpha_prime)
        }
        TransferMode::Bilipschitz { k } => {
            if k < &int(1) {
                return Err(DimsError::Domain(format!("bilipschitz constant must be at least 1, got {k}")));
            }
            let k2 = k * k;
            (alpha * &k2, beta / k2)
        }
        TransferMode::Lipschitz { k, l } => {
            let kl = k * l;
            if kl < int(1) {
                return Err(DimsError::Domain(format!("K L must be at least 1, got {kl}")));
            }
            (alpha * &kl, beta / kl)
        }
    };
    GameParams::new(out.0.clone(), out.1.clone())?;
    Ok(out)
}

/// One level of the cover construction on the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverLevel {
    pub t: usize,
    /// The `j`-refinement cells of the previous level's cells (Alice's balls).
    pub alice_balls: Vec<Interval>,
    /// Bob's Farey answers to `alice_balls`, one per Alice ball.
    pub holes: Vec<Interval>,
    /// The covering cells, exactly the prescribed count per hole.
    pub cells: Vec<Interval>,
    pub cell_radius: Rational,
    /// Number of cells actually needed before padding to the prescribed count.
    pub tight_cells: usize,
}

/// Cells covering `alice \ hole`: the minimal covering tessellation of the
/// Alice ball minus the maximal tessellation inside the hole, padded with
/// cells of the removed block (lowest index first) up to `target`.
fn annulus_cover(
    alice: &Interval,
    hole: &Interval,
    tess: &CompleteTess,
    target: usize,
) -> Result<(Vec<Interval>, usize), DimsError> {
    let outer = minimal_tessellation(&BallD::try_from(alice)?, tess)?;
    let inner = maximal_tessellation(&BallD::try_from(hole)?, tess)?;
    let to_interval = |b: &BallD| b.axis(0);
    let (kept, removed): (Vec<BallD>, Vec<BallD>) = outer
        .cells()
        .into_iter()
        .partition(|c| !inner.contains_index(&tess.index_of(c).expect("cell of the tessellation")));
    let tight = kept.len();
    if tight > target {
        return Err(DimsError::Domain(format!("annulus needs {tight} cells, more than the count {target}")));
    }
    let mut cells: Vec<Interval> = kept.iter().map(to_interval).collect();
    let mut hi = outer.hi()[0].clone();
    let mut padding = removed.into_iter();
    while cells.len() < target {
        match padding.next() {
            Some(c) => cells.push(to_interval(&c)),
            None => {
                hi += 1;
                cells.push(to_interval(&tess.cell(std::slice::from_ref(&hi))));
            }
        }
    }
    cells.sort_by(|a, b| a.center().cmp(b.center()));
    Ok((cells, tight))
}

/// Builds levels `1..=depth` of the cover construction from `b1` (`d = 1`).
///
/// Each cell of the previous level (starting from `b1`) is refined into `j`
/// Alice balls; Bob answers each with the opening move of the Farey strategy
/// at ratio `beta`, which is the hole. The annulus between an Alice ball and
/// its hole is covered by cells of radius
/// `R'_t = rho(b1) beta^{t(s+1)} / j^{t(s+1)}` taken from a complete
/// tessellation: the completion of the `j^s beta^{-s}`-tessellation of the
/// hole for [`HoleVariant::IntegerBeta`], or the one based at the hole's
/// center for [`HoleVariant::General`].
pub fn build_cover_levels(
    b1: &Interval,
    inputs: &BoundInputs,
    variant: HoleVariant,
    depth: usize,
) -> Result<Vec<CoverLevel>, DimsError> {
    if inputs.d != 1 {
        return Err(DimsError::Feasibility("the cover construction is implemented for d = 1".into()));
    }
    if depth < 1 || depth > MAX_COVER_DEPTH {
        return Err(DimsError::Feasibility(format!("depth must be in 1..={MAX_COVER_DEPTH}, got {depth}")));
    }
    if b1.radius() / int(inputs.j as i64) > rat(1, 4) || !b1.radius().is_positive() {
        return Err(DimsError::Domain(format!("need 0 < rho(B_1)/j <= 1/4, got rho(B_1) = {}", b1.radius())));
    }
    let target = hole_count(inputs, variant)?
        .to_usize()
        .ok_or_else(|| DimsError::Feasibility("hole count too large".into()))?;
    let hole_ratio = inputs.hole_ratio();
    let m = match variant {
        HoleVariant::IntegerBeta => Some(hole_ratio.to_integer().to_u64().expect("small ratio")),
        HoleVariant::General => None,
    };
    let bob_params = GameParams::new(rat(1, 2), inputs.beta.clone())?;
    let mut parents = vec![b1.clone()];
    let mut levels = Vec::with_capacity(depth);
    for t in 1..=depth {
        let cell_radius = b1.radius() * pow(&inputs.level_ratio().recip(), t as i64);
        let per_parent: Vec<Result<Vec<(Interval, Interval, Vec<Interval>, usize)>, DimsError>> = parents
            .par_iter()
            .map(|parent| {
                let mut out = Vec::new();
                for alice in m_tessellation(&BallD::try_from(parent)?, inputs.j as u64)? {
                    let alice = alice.axis(0);
                    let mut bob = FareyBob::new(&bob_params)?;
                    let (hole, _) = bob.bob_move(&alice, 1, 2)?;
                    let tess = match m {
                        Some(m) => CompleteTess::completion(&BallD::try_from(&hole)?, m)?,
                        None => CompleteTess::new(vec![hole.center().clone()], cell_radius.clone())?,
                    };
                    debug_assert_eq!(tess.cell_radius(), &cell_radius);
                    let (cells, tight) = annulus_cover(&alice, &hole, &tess, target)?;
                    out.push((alice, hole, cells, tight));
                }
                Ok(out)
            })
            .collect();
        let mut level = CoverLevel {
            t,
            alice_balls: Vec::new(),
            holes: Vec::new(),
            cells: Vec::new(),
            cell_radius: cell_radius.clone(),
            tight_cells: 0,
        };
        for group in per_parent {
            for (alice, hole, cells, tight) in group? {
                level.alice_balls.push(alice);
                level.holes.push(hole);
                level.cells.extend(cells);
                level.tight_cells += tight;
            }
        }
        parents = level.cells.clone();
        levels.push(level);
    }
    Ok(levels)
}

/// A connected piece of a subset of the line, with endpoint membership.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Piece {
    fn meets(&self, other: &Interval) -> bool {
        let (a, b) = (other.lo(), other.hi());
        if self.hi < a || b < self.lo {
            return false;
        }
        if self.hi == a {
            return self.hi_closed;
        }
        if b == self.lo {
            return self.lo_closed;
        }
        true
    }
}

/// `outer` minus the union of the closed `holes`, as disjoint pieces in
/// increasing order.
pub fn remove_holes(outer: &Interval, holes: &[Interval]) -> Vec<Piece> {
    let mut sorted: Vec<&Interval> = holes.iter().filter(|h| h.intersects(outer)).collect();
    sorted.sort_by(|a, b| a.lo().cmp(&b.lo()));
    let mut pieces = Vec::new();
    let mut cursor = outer.lo();
    let mut cursor_closed = true;
    for h in sorted {
        let (a, b) = (h.lo(), h.hi());
        if a > cursor {
            pieces.push(Piece { lo: cursor.clone(), hi: a.clone(), lo_closed: cursor_closed, hi_closed: false });
        }
        if b >= cursor {
            cursor = b;
            cursor_closed = false;
        }
    }
    let end = outer.hi();
    if cursor < end || (cursor == end && cursor_closed) {
        pieces.push(Piece { lo: cursor, hi: end, lo_closed: cursor_closed, hi_closed: true });
    }
    pieces
}

/// Union of closed intervals as disjoint closed intervals in increasing order.
pub fn merge_closed(intervals: &[Interval]) -> Vec<Interval> {
    let mut sorted: Vec<&Interval> = intervals.iter().collect();
    sorted.sort_by(|a, b| a.lo().cmp(&b.lo()));
    let mut out: Vec<(Rational, Rational)> = Vec::new();
    for iv in sorted {
        match out.last_mut() {
            Some((_, hi)) if iv.lo() <= *hi => {
                if iv.hi() > *hi {
                    *hi = iv.hi();
                }
            }
            _ => out.push((iv.lo(), iv.hi())),
        }
    }
    out.into_iter().map(|(lo, hi)| Interval::from_endpoints(lo, hi).expect("lo <= hi")).collect()
}

/// Outcome of [`verify_cover_levels`], one entry per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCheck {
    /// `F_t` lies in the union of the level's cells.
    pub covered: Vec<bool>,
    /// Every hole removed up to level `t` misses `F_t`.
    pub holes_disjoint: Vec<bool>,
    /// Every hole and cell lies in one of the shifted copies of `B_1`.
    pub shifted_contain: bool,
}

/// The `3^d` balls of radius `rho(B_1)` centered at the cells of the
/// 3-tessellation of `B_1` (`d = 1`), the first one concentric with `B_1`.
pub fn shifted_balls(b1: &Interval) -> Vec<Interval> {
    let third = b1.radius() * rat(2, 3);
    let mut out = vec![b1.clone(), b1.shifted(&-third.clone()), b1.shifted(&third)];
    out.dedup();
    out
}

/// Checks the cover levels exactly against `F_t = B_1` minus all holes of
/// levels `1..=t`.
pub fn verify_cover_levels(b1: &Interval, levels: &[CoverLevel]) -> CoverCheck {
    let mut holes: Vec<Interval> = Vec::new();
    let mut covered = Vec::new();
    let mut holes_disjoint = Vec::new();
    for level in levels {
        holes.extend(level.holes.iter().cloned());
        let pieces = remove_holes(b1, &holes);
        let union = merge_closed(&level.cells);
        covered.push(pieces.iter().all(|p| union.iter().any(|u| u.lo() <= p.lo && p.hi <= u.hi())));
        holes_disjoint.push(holes.iter().all(|h| pieces.iter().all(|p| !p.meets(h))));
    }
    let shifted = shifted_balls(b1);
    let shifted_contain = levels
        .iter()
        .flat_map(|l| l.holes.iter().chain(l.cells.iter()))
        .all(|b| shifted.iter().any(|s| s.contains(b)));
    CoverCheck { covered, holes_disjoint, shifted_contain }
}

/// Box-counting exponent `log(count) / log(rho(B_1) / R'_t)` of a level.
pub fn box_count_exponent(count: usize, rho1: &Rational, cell_radius: &Rational, precision: usize) -> Result<Decimal, DimsError> {
    ratio_of_logs(&int(count as i64), &(rho1 / cell_radius), &Rational::one(), precision)
}
