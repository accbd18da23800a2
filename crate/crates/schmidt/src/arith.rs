//! Exact rational scalars, closed intervals and sup-norm balls.
//!
//! Every quantity in the crate is a [`Rational`]; there is no floating point
//! anywhere in the geometric or game code. Square roots never appear: a
//! condition such as `a <= q < b` with irrational endpoints is always tested
//! through the squared form `a^2 <= q^2 < b^2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Errors raised by the arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// Builds `p/q` from machine integers.
///
/// # Panics
/// Panics when `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Embeds an arbitrary-precision integer.
pub fn from_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Parses `"p/q"` or `"n"`, allowing surrounding whitespace.
pub fn parse_rational(text: &str) -> Result<Rational, ArithError> {
    let t = text.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| ArithError::Parse(t.to_string()))?;
            let q: BigInt = q.trim().parse().map_err(|_| ArithError::Parse(t.to_string()))?;
            if q.is_zero() {
                return Err(ArithError::Parse(t.to_string()));
            }
            Rational::new(p, q)
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| ArithError::Parse(t.to_string()))?;
            Rational::from_integer(n)
        }
    };
    Ok(parsed)
}

/// Formats a rational as `"p/q"`, or `"n"` when it is an integer.
pub fn format_rational(x: &Rational) -> String {
    x.to_string()
}

/// Largest integer `<= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Smallest integer `>= x`.
pub fn ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Converts an integer that is known to be small into `i64`.
pub fn small(n: &BigInt) -> Result<i64, ArithError> {
    n.to_i64()
        .ok_or_else(|| ArithError::Domain(format!("integer {n} does not fit in 64 bits")))
}

/// Least non-negative integer `n` with `n^2 >= m` for an integer `m`.
fn ceil_sqrt_int(m: &BigInt) -> BigInt {
    if !m.is_positive() {
        return BigInt::zero();
    }
    let s = m.sqrt();
    if &(&s * &s) == m {
        s
    } else {
        s + 1
    }
}

/// Least positive integer `n` with `n^2 >= r`, computed with integer
/// arithmetic only.
///
/// Since `n^2` is an integer, `n^2 >= r` is equivalent to `n^2 >= ceil(r)`.
pub fn ceil_sqrt(r: &Rational) -> Result<BigInt, ArithError> {
    if !r.is_positive() {
        return Err(ArithError::Domain(format!("ceil_sqrt needs r > 0, got {r}")));
    }
    Ok(ceil_sqrt_int(&ceil(r)))
}

/// Largest non-negative integer `q` with `q^2 < r` (for `r > 0`).
pub fn floor_sqrt_strict(r: &Rational) -> Result<BigInt, ArithError> {
    Ok(ceil_sqrt(r)? - 1)
}

/// Whether `lo <= q^2 < hi`, i.e. whether `q` lies in `[sqrt(lo), sqrt(hi))`.
pub fn in_sqrt_window(q: &BigInt, lo: &Rational, hi: &Rational) -> Result<bool, ArithError> {
    if !lo.is_positive() || lo >= hi {
        return Err(ArithError::Domain(format!(
            "sqrt window needs 0 < lo < hi, got [{lo}, {hi})"
        )));
    }
    let q2 = Rational::from_integer(q * q);
    Ok(lo <= &q2 && &q2 < hi)
}

/// Largest integer `k >= 0` with `k^n <= x`, for `x >= 0` and `n >= 1`.
pub fn floor_nth_root(x: &Rational, n: u32) -> Result<BigInt, ArithError> {
    if x.is_negative() || n == 0 {
        return Err(ArithError::Domain(format!("floor_nth_root needs x >= 0 and n >= 1, got x = {x}, n = {n}")));
    }
    // k^n <= x  iff  k^n <= floor(x) because k^n is an integer.
    let m = floor(x);
    let mut k = m.nth_root(n);
    while num_traits::pow(&k + 1u32, n as usize) <= m {
        k += 1;
    }
    while k.is_positive() && num_traits::pow(k.clone(), n as usize) > m {
        k -= 1;
    }
    Ok(k)
}

/// Integer power of a rational with a possibly negative exponent.
pub fn pow(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Whether the rational is an integer.
pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Closed ball of the real line, stored as `(center, radius)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    center: Rational,
    radius: Rational,
}

impl Interval {
    /// Closed ball `[center - radius, center + radius]`; `radius >= 0`.
    pub fn new(center: Rational, radius: Rational) -> Result<Self, ArithError> {
        if radius.is_negative() {
            return Err(ArithError::Domain(format!("negative radius {radius}")));
        }
        Ok(Self { center, radius })
    }

    /// Interval `[lo, hi]` with `lo <= hi`.
    pub fn from_endpoints(lo: Rational, hi: Rational) -> Result<Self, ArithError> {
        if lo > hi {
            return Err(ArithError::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        let two = int(2);
        let center = (&lo + &hi) / &two;
        let radius = (hi - lo) / two;
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    pub fn lo(&self) -> Rational {
        &self.center - &self.radius
    }

    pub fn hi(&self) -> Rational {
        &self.center + &self.radius
    }

    pub fn diam(&self) -> Rational {
        &self.radius * int(2)
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        self.lo() <= *x && *x <= self.hi()
    }

    /// Closed containment `other ⊆ self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    /// Containment with `other != self`.
    pub fn strictly_contains(&self, other: &Interval) -> bool {
        self.contains(other) && self != other
    }

    /// Whether the closed intervals share a point.
    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }

    /// Distance from `x` to the nearest point of the interval (zero inside).
    pub fn distance_to(&self, x: &Rational) -> Rational {
        let lo = self.lo();
        let hi = self.hi();
        if *x < lo {
            lo - x
        } else if *x > hi {
            x - hi
        } else {
            Rational::zero()
        }
    }

    /// Largest distance from `x` to a point of the interval.
    pub fn farthest_distance(&self, x: &Rational) -> Rational {
        let a = (x - self.lo()).abs();
        let b = (self.hi() - x).abs();
        a.max(b)
    }

    /// The interval translated by `shift`.
    pub fn shifted(&self, shift: &Rational) -> Interval {
        Interval { center: &self.center + shift, radius: self.radius.clone() }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo(), self.hi())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo(), self.hi())
    }
}

/// Centers `c` of balls of radius `r` inside `outer`: the closed range
/// `[outer.lo + r, outer.hi - r]`, or `None` when `r` exceeds the radius.
pub fn center_range(outer: &Interval, r: &Rational) -> Option<(Rational, Rational)> {
    if r > outer.radius() {
        return None;
    }
    Some((outer.lo() + r, outer.hi() - r))
}

/// Clamps `x` into `[lo, hi]`.
pub fn clamp(x: &Rational, lo: &Rational, hi: &Rational) -> Rational {
    if x < lo {
        lo.clone()
    } else if x > hi {
        hi.clone()
    } else {
        x.clone()
    }
}

/// Closed sup-norm ball of `R^d`: the product of `[x_i - R, x_i + R]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BallD {
    center: Vec<Rational>,
    radius: Rational,
}

impl BallD {
    /// Ball with `d = center.len() >= 1` and `radius > 0`.
    pub fn new(center: Vec<Rational>, radius: Rational) -> Result<Self, ArithError> {
        if center.is_empty() {
            return Err(ArithError::Domain("ball needs dimension >= 1".into()));
        }
        if !radius.is_positive() {
            return Err(ArithError::Domain(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[Rational] {
        &self.center
    }

    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    /// Coordinate interval along `axis`.
    pub fn axis(&self, axis: usize) -> Interval {
        Interval { center: self.center[axis].clone(), radius: self.radius.clone() }
    }

    /// Closed containment `other ⊆ self`.
    pub fn contains(&self, other: &BallD) -> bool {
        self.dim() == other.dim() && (0..self.dim()).all(|i| self.axis(i).contains(&other.axis(i)))
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        x.len() == self.dim() && (0..self.dim()).all(|i| self.axis(i).contains_point(&x[i]))
    }

    /// Whether the interiors of the two balls meet.
    pub fn interiors_meet(&self, other: &BallD) -> bool {
        (0..self.dim()).all(|i| {
            let a = self.axis(i);
            let b = other.axis(i);
            a.lo() < b.hi() && b.lo() < a.hi()
        })
    }
}

impl TryFrom<&Interval> for BallD {
    type Error = ArithError;

    fn try_from(interval: &Interval) -> Result<Self, ArithError> {
        BallD::new(vec![interval.center.clone()], interval.radius.clone())
    }
}

impl fmt::Debug for BallD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.center.iter().map(|x| x.to_string()).collect();
        write!(f, "B(({}), {})", c.join(", "), self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_sqrt_examples() {
        assert_eq!(ceil_sqrt(&int(4)).unwrap(), BigInt::from(2));
        assert_eq!(ceil_sqrt(&rat(5, 12)).unwrap(), BigInt::from(1));
        assert_eq!(ceil_sqrt(&int(540)).unwrap(), BigInt::from(24));
        assert!(ceil_sqrt(&int(0)).is_err());
        assert!(ceil_sqrt(&rat(-1, 3)).is_err());
    }

    #[test]
    fn sqrt_window_examples() {
        let one = BigInt::from(1);
        assert!(in_sqrt_window(&one, &rat(5, 12), &rat(5, 2)).unwrap());
        assert!(!in_sqrt_window(&BigInt::from(2), &rat(5, 12), &rat(5, 2)).unwrap());
        assert!(in_sqrt_window(&BigInt::from(3), &rat(5, 2), &int(15)).unwrap());
        assert!(in_sqrt_window(&one, &int(2), &int(1)).is_err());
    }

    #[test]
    fn nth_root_floor() {
        assert_eq!(floor_nth_root(&int(8), 2).unwrap(), BigInt::from(2));
        assert_eq!(floor_nth_root(&int(9), 2).unwrap(), BigInt::from(3));
        assert_eq!(floor_nth_root(&rat(26, 1), 3).unwrap(), BigInt::from(2));
        assert_eq!(floor_nth_root(&int(27), 3).unwrap(), BigInt::from(3));
        assert_eq!(floor_nth_root(&rat(1, 2), 3).unwrap(), BigInt::from(0));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational(" 6/4 ").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(3, 2)), "3/2");
        assert_eq!(format_rational(&int(5)), "5");
    }

    #[test]
    fn interval_predicates() {
        let a = Interval::from_endpoints(int(0), int(1)).unwrap();
        let b = Interval::from_endpoints(rat(1, 3), rat(2, 3)).unwrap();
        assert!(a.contains(&b));
        assert!(!b.contains(&a));
        assert!(a.strictly_contains(&b));
        assert!(a.contains_point(&int(1)));
        assert_eq!(b.distance_to(&int(1)), rat(1, 3));
        assert_eq!(a.diam(), int(1));
        assert!(Interval::from_endpoints(int(1), int(0)).is_err());
        assert!(Interval::new(int(0), int(-1)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ceil_sqrt_is_least(p in 1i64..1_000_000_000, q in 1i64..1000) {
                let r = rat(p, q);
                let n = ceil_sqrt(&r).unwrap();
                let n2 = Rational::from_integer(&n * &n);
                prop_assert!(n2 >= r);
                let m = &n - 1;
                prop_assert!(Rational::from_integer(&m * &m) < r);
            }

            #[test]
            fn containment_matches_endpoints(a in -50i64..50, b in 0i64..50, c in -50i64..50, d in 0i64..50) {
                let x = Interval::from_endpoints(int(a), int(a + b)).unwrap();
                let y = Interval::from_endpoints(int(c), int(c + d)).unwrap();
                prop_assert_eq!(x.contains(&y), a <= c && c + d <= a + b);
                prop_assert_eq!(x.intersects(&y), a <= c + d && c <= a + b);
            }
        }
    }
}
