//! Farey sequences on `[0, 1]` and on the whole line, mediants, minimal-order
//! Farey elements of intervals, half Farey partitions and Farey
//! half-intervals.
//!
//! The Farey sequence of order `n` on the line is the set of all rationals
//! whose reduced denominator is at most `n`. Elements are written as
//! `p/q + k` with `0 <= p < q` (or `p/q = 0/1`), so the order of an element
//! is its reduced denominator `q`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{ceil, floor, from_big, int, ArithError, Interval, Rational};

/// Errors raised by Farey computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FareyError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("order error: {0}")]
    Order(String),
}

impl From<ArithError> for FareyError {
    fn from(e: ArithError) -> Self {
        FareyError::Domain(e.to_string())
    }
}

/// A rational written as `p/q + k` with `gcd(p, q) = 1` and `0 <= p < q`
/// (the value zero modulo one is `0/1`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FareyFraction {
    p: BigInt,
    q: BigInt,
    k: BigInt,
}

impl FareyFraction {
    /// Splits a rational into its integer translate and reduced fractional part.
    pub fn from_rational(x: &Rational) -> Self {
        let k = floor(x);
        let frac = x - from_big(k.clone());
        Self { p: frac.numer().clone(), q: frac.denom().clone(), k }
    }

    /// `p/q + k`; the fraction is reduced and `p` is taken modulo `q`.
    pub fn new(p: BigInt, q: BigInt, k: BigInt) -> Result<Self, FareyError> {
        if !q.is_positive() {
            return Err(FareyError::Domain(format!("denominator must be positive, got {q}")));
        }
        let value = Rational::new(p, q) + from_big(k);
        Ok(Self::from_rational(&value))
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    /// The order (reduced denominator).
    pub fn order(&self) -> &BigInt {
        &self.q
    }

    /// Numerator of the value `p/q + k` written over `q`.
    pub fn full_numerator(&self) -> BigInt {
        &self.p + &self.k * &self.q
    }

    pub fn value(&self) -> Rational {
        Rational::new(self.full_numerator(), self.q.clone())
    }
}

impl PartialOrd for FareyFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FareyFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value().cmp(&other.value())
    }
}

impl fmt::Debug for FareyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl fmt::Display for FareyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Reduced numerator/denominator pair used internally by the Farey walks.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Frac {
    num: BigInt,
    den: BigInt,
}

impl Frac {
    fn of(x: &Rational) -> Self {
        Frac { num: x.numer().clone(), den: x.denom().clone() }
    }

    fn value(&self) -> Rational {
        Rational::new(self.num.clone(), self.den.clone())
    }
}

/// The Farey sequence of order `n` on `[0, 1]`, ascending, ending with `1/1`.
///
/// The value one is stored as `0/1 + 1`.
pub fn farey_sequence(n: u64) -> Result<Vec<FareyFraction>, FareyError> {
    if n < 1 {
        return Err(FareyError::Domain("Farey order must be at least 1".into()));
    }
    let n = BigInt::from(n);
    let mut out = Vec::new();
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    let (mut c, mut d) = (BigInt::one(), n.clone());
    out.push(FareyFraction::from_rational(&Rational::zero()));
    while c <= d {
        out.push(FareyFraction::from_rational(&Rational::new(c.clone(), d.clone())));
        let step = (&n + &b) / &d;
        let next_c = &step * &c - &a;
        let next_d = &step * &d - &b;
        a = c;
        b = d;
        c = next_c;
        d = next_d;
    }
    Ok(out)
}

/// The mediant `(P + P')/(Q + Q')` of two values given in lowest terms.
pub fn mediant(x: &FareyFraction, y: &FareyFraction) -> Result<FareyFraction, FareyError> {
    if x >= y {
        return Err(FareyError::Order(format!("mediant needs x < y, got {x} and {y}")));
    }
    let num = x.full_numerator() + y.full_numerator();
    let den = x.q() + y.q();
    Ok(FareyFraction::from_rational(&Rational::new(num, den)))
}

/// Left and right neighbours of a member `x` of the order-`n` Farey sequence
/// on the line (`x` must have denominator at most `n`).
///
/// With `x = P/Q`, the right neighbour `C/D` solves `C Q - P D = 1` with the
/// largest `D <= n`, and the left neighbour `A/B` solves `P B - A Q = 1` with
/// the largest `B <= n`.
pub fn neighbors(x: &Rational, n: &BigInt) -> Result<(Rational, Rational), FareyError> {
    let big_p = x.numer();
    let big_q = x.denom();
    if big_q > n {
        return Err(FareyError::Domain(format!("{x} is not in the Farey sequence of order {n}")));
    }
    // Inverse of P modulo Q (any residue works when Q = 1).
    let inv = if big_q.is_one() {
        BigInt::zero()
    } else {
        let g = big_p.extended_gcd(big_q);
        g.x.mod_floor(big_q)
    };
    // Largest B <= n with B = inv (mod Q), B >= 1.
    let largest_in_class = |residue: &BigInt| -> BigInt {
        let r = residue.mod_floor(big_q);
        let r = if r.is_zero() { big_q.clone() } else { r };
        &r + ((n - &r) / big_q) * big_q
    };
    let b = largest_in_class(&inv);
    let a = (big_p * &b - 1) / big_q;
    let d = largest_in_class(&(-&inv));
    let c = (big_p * &d + 1) / big_q;
    Ok((Rational::new(a, b), Rational::new(c, d)))
}

/// Consecutive elements `lower <= x <= upper` of the order-`n` Farey sequence
/// on the line. When `x` itself has denominator at most `n`, both are `x`.
pub fn bracket(x: &Rational, n: &BigInt) -> (Rational, Rational) {
    if x.denom() <= n {
        return (x.clone(), x.clone());
    }
    let fl = floor(x);
    let mut lower = Frac { num: fl.clone(), den: BigInt::one() };
    let mut upper = Frac { num: fl + 1, den: BigInt::one() };
    let xn = x.numer();
    let xd = x.denom();
    loop {
        let mut moved = false;
        // lower + k upper stays <= x while k (up*xd - xn*uq) <= xn*lq - lp*xd.
        let slack = xn * &lower.den - &lower.num * xd;
        let rate = &upper.num * xd - xn * &upper.den;
        if rate.is_positive() && slack.is_positive() {
            let k_value = &slack / &rate;
            let k_den = (n - &lower.den) / &upper.den;
            let k = k_value.min(k_den);
            if k.is_positive() {
                lower = Frac { num: &lower.num + &k * &upper.num, den: &lower.den + &k * &upper.den };
                moved = true;
            }
        }
        // upper + k lower stays >= x while k (xn*lq - lp*xd) <= up*xd - xn*uq.
        let slack = &upper.num * xd - xn * &upper.den;
        let rate = xn * &lower.den - &lower.num * xd;
        if rate.is_positive() && slack.is_positive() {
            let k_value = &slack / &rate;
            let k_den = (n - &upper.den) / &lower.den;
            let k = k_value.min(k_den);
            if k.is_positive() {
                upper = Frac { num: &upper.num + &k * &lower.num, den: &upper.den + &k * &lower.den };
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    (lower.value(), upper.value())
}

/// All elements of the order-`n` Farey sequence on the line lying in the
/// closed range `[lo, hi]`, ascending.
pub fn farey_in_range(lo: &Rational, hi: &Rational, n: &BigInt) -> Vec<Rational> {
    let mut out = Vec::new();
    if lo > hi || !n.is_positive() {
        return out;
    }
    let first = {
        let (l, u) = bracket(lo, n);
        if &l == lo {
            l
        } else {
            u
        }
    };
    if &first > hi {
        return out;
    }
    let (left, _) = neighbors(&first, n).expect("first element is in the sequence");
    let mut prev = Frac::of(&left);
    let mut cur = Frac::of(&first);
    loop {
        let value = cur.value();
        if &value > hi {
            break;
        }
        out.push(value);
        let step = (n + &prev.den) / &cur.den;
        let next = Frac { num: &step * &cur.num - &prev.num, den: &step * &cur.den - &prev.den };
        prev = cur;
        cur = next;
    }
    out
}

fn check_diam(interval: &Interval) -> Result<(), FareyError> {
    let d = interval.diam();
    if !d.is_positive() || d >= Rational::one() {
        return Err(FareyError::Domain(format!(
            "interval {interval} must satisfy 0 < diam < 1, diam is {d}"
        )));
    }
    Ok(())
}

/// The rational of smallest denominator in the closed range `[lo, hi]`.
fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let c = ceil(lo);
    if from_big(c.clone()) <= *hi {
        return from_big(c);
    }
    let fl = floor(lo);
    let base = from_big(fl);
    let y = simplest_between(&(hi - &base).recip(), &(lo - &base).recip());
    base + y.recip()
}

/// The minimal-order Farey element of `interval` and its order: the least `q`
/// for which the interval meets the order-`q` Farey sequence on the line,
/// together with the unique element of that intersection.
pub fn minimal_order_farey_element(
    interval: &Interval,
) -> Result<(FareyFraction, BigInt), FareyError> {
    check_diam(interval)?;
    let x = simplest_between(&interval.lo(), &interval.hi());
    let f = FareyFraction::from_rational(&x);
    let q = f.q().clone();
    Ok((f, q))
}

/// The half Farey partition of an interval together with its cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfFareyPartition {
    /// Minimal-order Farey element of the source interval.
    pub anchor: FareyFraction,
    /// Left neighbour of the anchor in the Farey sequence of its own order.
    pub left_neighbor: Rational,
    /// Right neighbour of the anchor in the Farey sequence of its own order.
    pub right_neighbor: Rational,
    /// Chain elements left of the anchor, ascending.
    pub left_chain: Vec<FareyFraction>,
    /// Chain elements right of the anchor, ascending.
    pub right_chain: Vec<FareyFraction>,
    /// `q / b` for the left neighbour `a/b`.
    pub l: Rational,
    /// `q / d` for the right neighbour `c/d`.
    pub r: Rational,
    /// Closed interval spanned by the extreme chain elements.
    pub cover: Interval,
}

impl HalfFareyPartition {
    /// The whole partition in ascending order, with the anchor once.
    pub fn elements(&self) -> Vec<FareyFraction> {
        let mut all = self.left_chain.clone();
        all.push(self.anchor.clone());
        all.extend(self.right_chain.iter().cloned());
        all
    }
}

/// Builds the half Farey partition of `interval`.
///
/// With anchor `P/Q` and neighbours `A/B < P/Q < C/D` in the Farey sequence of
/// order `Q` (all in lowest terms on the line), the left chain is
/// `(jA + P)/(jB + Q)` for `1 <= j <= ceil(Q/B)` and the right chain is
/// `(P + jC)/(Q + jD)` for `1 <= j <= ceil(Q/D)`. For an integer anchor this
/// gives exactly `{k - 1/2, k, k + 1/2}`.
pub fn half_farey_partition(interval: &Interval) -> Result<HalfFareyPartition, FareyError> {
    let (anchor, q) = minimal_order_farey_element(interval)?;
    partition_for_anchor(&anchor, &q)
}

/// Half Farey partition around a given anchor of order `q`.
pub fn partition_for_anchor(anchor: &FareyFraction, q: &BigInt) -> Result<HalfFareyPartition, FareyError> {
    let value = anchor.value();
    let (left, right) = neighbors(&value, q)?;
    let big_p = value.numer().clone();
    let big_q = value.denom().clone();
    let (a, b) = (left.numer().clone(), left.denom().clone());
    let (c, d) = (right.numer().clone(), right.denom().clone());
    let l = Rational::new(big_q.clone(), b.clone());
    let r = Rational::new(big_q.clone(), d.clone());
    let l_steps = ceil(&l);
    let r_steps = ceil(&r);

    let mut left_chain = Vec::new();
    let mut j = l_steps.clone();
    while j.is_positive() {
        let x = Rational::new(&j * &a + &big_p, &j * &b + &big_q);
        left_chain.push(FareyFraction::from_rational(&x));
        j -= 1;
    }
    let mut right_chain = Vec::new();
    let mut j = BigInt::one();
    while j <= r_steps {
        let x = Rational::new(&big_p + &j * &c, &big_q + &j * &d);
        right_chain.push(FareyFraction::from_rational(&x));
        j += 1;
    }
    let lo = left_chain.first().map(|f| f.value()).unwrap_or_else(|| value.clone());
    let hi = right_chain.last().map(|f| f.value()).unwrap_or_else(|| value.clone());
    let cover = Interval::from_endpoints(lo, hi)?;
    Ok(HalfFareyPartition {
        anchor: anchor.clone(),
        left_neighbor: left,
        right_neighbor: right,
        left_chain,
        right_chain,
        l,
        r,
        cover,
    })
}

/// The Farey half-interval of an interval `[xi, eta]` with anchor `g`:
/// `[g - L/2, g + R/2]` where `L = g - xi` and `R = eta - g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareyHalfInterval {
    pub anchor: FareyFraction,
    /// Distance from the left endpoint of the source interval to the anchor.
    pub left_length: Rational,
    /// Distance from the anchor to the right endpoint of the source interval.
    pub right_length: Rational,
    pub interval: Interval,
}

/// Computes the Farey half-interval of `interval`.
pub fn farey_half_interval(interval: &Interval) -> Result<FareyHalfInterval, FareyError> {
    let (anchor, _) = minimal_order_farey_element(interval)?;
    let g = anchor.value();
    let left_length = &g - interval.lo();
    let right_length = interval.hi() - &g;
    let two = int(2);
    let half = Interval::from_endpoints(&g - &left_length / &two, &g + &right_length / &two)?;
    Ok(FareyHalfInterval { anchor, left_length, right_length, interval: half })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn iv(lo: Rational, hi: Rational) -> Interval {
        Interval::from_endpoints(lo, hi).unwrap()
    }

    fn values(v: &[FareyFraction]) -> Vec<Rational> {
        v.iter().map(|f| f.value()).collect()
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(values(&farey_sequence(1).unwrap()), vec![int(0), int(1)]);
        assert_eq!(
            values(&farey_sequence(4).unwrap()),
            vec![int(0), rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3), rat(3, 4), int(1)]
        );
        assert_eq!(farey_sequence(5).unwrap().len(), 11);
        assert!(farey_sequence(0).is_err());
    }

    #[test]
    fn mediant_examples() {
        let f = |x: Rational| FareyFraction::from_rational(&x);
        assert_eq!(mediant(&f(int(0)), &f(int(1))).unwrap().value(), rat(1, 2));
        assert_eq!(mediant(&f(rat(1, 3)), &f(rat(1, 2))).unwrap().value(), rat(2, 5));
        assert_eq!(mediant(&f(rat(2, 5)), &f(rat(1, 2))).unwrap().value(), rat(3, 7));
        assert!(mediant(&f(rat(1, 2)), &f(rat(1, 3))).is_err());
    }

    #[test]
    fn fraction_normal_form() {
        let f = FareyFraction::from_rational(&rat(-7, 3));
        assert_eq!((f.p().clone(), f.q().clone(), f.k().clone()), (BigInt::from(2), BigInt::from(3), BigInt::from(-3)));
        let one = FareyFraction::from_rational(&int(1));
        assert_eq!((one.p().clone(), one.q().clone(), one.k().clone()), (BigInt::zero(), BigInt::one(), BigInt::one()));
    }

    #[test]
    fn anchor_examples() {
        let (a, q) = minimal_order_farey_element(&iv(rat(-1, 4), rat(1, 4))).unwrap();
        assert_eq!((a.value(), q), (int(0), BigInt::from(1)));
        let (a, q) = minimal_order_farey_element(&iv(rat(3, 10), rat(7, 20))).unwrap();
        assert_eq!((a.value(), q), (rat(1, 3), BigInt::from(3)));
        let c = rat(2, 5);
        let (a, q) = minimal_order_farey_element(&iv(&c - rat(1, 100), &c + rat(1, 100))).unwrap();
        assert_eq!((a.value(), q), (rat(2, 5), BigInt::from(5)));
        assert!(minimal_order_farey_element(&iv(int(0), int(1))).is_err());
        assert!(minimal_order_farey_element(&iv(int(0), int(0))).is_err());
    }

    #[test]
    fn partition_examples() {
        let p = half_farey_partition(&iv(rat(-1, 4), rat(1, 4))).unwrap();
        assert_eq!(values(&p.elements()), vec![rat(-1, 2), int(0), rat(1, 2)]);
        assert_eq!(p.cover, iv(rat(-1, 2), rat(1, 2)));

        let p = half_farey_partition(&iv(rat(3, 10), rat(7, 20))).unwrap();
        assert_eq!((p.left_neighbor.clone(), p.right_neighbor.clone()), (int(0), rat(1, 2)));
        assert_eq!((p.l.clone(), p.r.clone()), (int(3), rat(3, 2)));
        assert_eq!(
            values(&p.elements()),
            vec![rat(1, 6), rat(1, 5), rat(1, 4), rat(1, 3), rat(2, 5), rat(3, 7)]
        );
        let q = int(3);
        let gap = rat(1, 3) - rat(1, 4);
        assert_eq!(gap, rat(1, 12));
        assert!(Rational::one() / (int(6) * &q * &q) < gap && gap < Rational::one() / (&q * &q));
    }

    #[test]
    fn half_interval_examples() {
        let r = rat(1, 5);
        let h = farey_half_interval(&iv(int(3) - &r, int(3) + &r)).unwrap();
        assert_eq!(h.interval, iv(int(3) - rat(1, 10), int(3) + rat(1, 10)));

        let source = iv(rat(3, 10), rat(7, 20));
        let h = farey_half_interval(&source).unwrap();
        assert_eq!(h.interval, iv(rat(19, 60), rat(41, 120)));
        assert_eq!((h.left_length.clone(), h.right_length.clone()), (rat(1, 30), rat(1, 60)));
        assert_eq!(h.interval.diam(), rat(1, 40));
        assert!(source.contains(&h.interval));
        assert!(half_farey_partition(&source).unwrap().cover.contains(&h.interval));
    }

    #[test]
    fn neighbors_and_bracket() {
        let n = BigInt::from(5);
        assert_eq!(neighbors(&rat(1, 3), &n).unwrap(), (rat(1, 4), rat(2, 5)));
        assert_eq!(neighbors(&int(2), &n).unwrap(), (rat(9, 5), rat(11, 5)));
        assert_eq!(bracket(&rat(7, 20), &n), (rat(1, 3), rat(2, 5)));
        assert_eq!(bracket(&rat(-7, 20), &n), (rat(-2, 5), rat(-1, 3)));
        assert_eq!(
            farey_in_range(&rat(1, 5), &rat(1, 2), &n),
            vec![rat(1, 5), rat(1, 4), rat(1, 3), rat(2, 5), rat(1, 2)]
        );
        assert_eq!(farey_in_range(&int(-1), &int(1), &BigInt::one()), vec![int(-1), int(0), int(1)]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn brute_range(lo: &Rational, hi: &Rational, n: i64) -> Vec<Rational> {
            let mut out = Vec::new();
            for q in 1..=n {
                let qq = int(q);
                let start = ceil(&(lo * &qq));
                let end = floor(&(hi * &qq));
                let mut p = start;
                while p <= end {
                    let x = Rational::new(p.clone(), BigInt::from(q));
                    if x.denom() == &BigInt::from(q) {
                        out.push(x);
                    }
                    p += 1;
                }
            }
            out.sort();
            out
        }

        proptest! {
            #[test]
            fn range_enumeration_matches_brute_force(a in -300i64..300, w in 0i64..200, den in 1i64..120, n in 1i64..40) {
                let lo = rat(a, den);
                let hi = rat(a + w, den);
                prop_assert_eq!(farey_in_range(&lo, &hi, &BigInt::from(n)), brute_range(&lo, &hi, n));
            }

            #[test]
            fn bracket_is_tight(a in -1000i64..1000, den in 1i64..500, n in 1i64..60) {
                let x = rat(a, den);
                let nn = BigInt::from(n);
                let (l, u) = bracket(&x, &nn);
                prop_assert!(l <= x && x <= u);
                prop_assert!(l.denom() <= &nn && u.denom() <= &nn);
                if l != u {
                    // consecutive: determinant one
                    prop_assert_eq!(u.numer() * l.denom() - l.numer() * u.denom(), BigInt::one());
                    prop_assert!(l.denom() + u.denom() > nn);
                }
            }

            #[test]
            fn anchor_is_smallest_denominator(a in -500i64..500, den in 2i64..300, w in 1i64..200) {
                let lo = rat(a, den);
                let hi = &lo + rat(w, 211);
                let interval = Interval::from_endpoints(lo.clone(), hi.clone()).unwrap();
                let (anchor, q) = minimal_order_farey_element(&interval).unwrap();
                prop_assert!(interval.contains_point(&anchor.value()));
                let qs = crate::arith::small(&q).unwrap();
                for smaller in 1..qs {
                    prop_assert!(brute_range(&lo, &hi, smaller).is_empty());
                }
                let at_q: Vec<Rational> = brute_range(&lo, &hi, qs).into_iter().filter(|x| x.denom() == &q).collect();
                prop_assert_eq!(at_q, vec![anchor.value()]);
            }
        }
    }
}
