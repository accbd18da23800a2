//! Finite-depth diagnostics for badly approximable and Dirichlet-improvable
//! type conditions: continued fractions, witness scans and avoidance checks.
//!
//! A point is either an exact rational or a truncated continued fraction.
//! A truncation is evaluated exactly at its last convergent and carries an
//! enclosure radius, the distance to the previous convergent; verdicts are
//! marked certain only when they hold for every real within that radius.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{ceil, floor, from_big, Rational};

/// Errors raised by the diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("cannot parse continued fraction from {0:?}")]
    Parse(String),
}

/// A point of the line given by finite data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealSpec {
    Rational(Rational),
    /// Partial quotients `a0; a1, a2, ...` with `a_i >= 1` for `i >= 1`.
    ContinuedFraction(Vec<BigInt>),
}

impl RealSpec {
    /// Continued fraction with validated partial quotients.
    pub fn continued_fraction(terms: Vec<BigInt>) -> Result<Self, DiophError> {
        if terms.is_empty() {
            return Err(DiophError::Domain("a continued fraction needs at least one term".into()));
        }
        if terms[1..].iter().any(|a| !a.is_positive()) {
            return Err(DiophError::Domain("partial quotients after the first must be positive".into()));
        }
        Ok(Self::ContinuedFraction(terms))
    }

    /// Parses `"a0;a1,a2,..."` (or just `"a0"`).
    pub fn parse_cf(text: &str) -> Result<Self, DiophError> {
        let err = || DiophError::Parse(text.to_string());
        let (head, tail) = match text.split_once(';') {
            Some((h, t)) => (h, t),
            None => (text, ""),
        };
        let mut terms = vec![head.trim().parse::<BigInt>().map_err(|_| err())?];
        for part in tail.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            terms.push(part.parse::<BigInt>().map_err(|_| err())?);
        }
        Self::continued_fraction(terms)
    }

    /// The exact value used for scanning.
    pub fn value(&self) -> Rational {
        match self {
            Self::Rational(x) => x.clone(),
            Self::ContinuedFraction(terms) => evaluate_cf(terms),
        }
    }

    /// Radius around [`value`](Self::value) known to contain the intended
    /// real: zero for rationals, the gap between the last two convergents for
    /// truncations (one for a single term).
    pub fn enclosure(&self) -> Rational {
        match self {
            Self::Rational(_) => Rational::zero(),
            Self::ContinuedFraction(terms) => {
                let c = convergents(terms);
                match c.len() {
                    1 => Rational::one(),
                    n => (&c[n - 1] - &c[n - 2]).abs(),
                }
            }
        }
    }
}

/// Continued fraction expansion by the Euclidean algorithm; non-integers end
/// with a term of at least 2.
pub fn continued_fraction(x: &Rational) -> Vec<BigInt> {
    let mut terms = Vec::new();
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    while !den.is_zero() {
        let (q, r) = num.div_mod_floor(&den);
        terms.push(q);
        num = std::mem::replace(&mut den, r);
    }
    terms
}

/// All convergents `p_n / q_n` of a finite continued fraction.
pub fn convergents(terms: &[BigInt]) -> Vec<Rational> {
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::with_capacity(terms.len());
    for a in terms {
        let p_next = a * &p_prev + &p;
        let q_next = a * &q_prev + &q;
        p = std::mem::replace(&mut p_prev, p_next);
        q = std::mem::replace(&mut q_prev, q_next);
        out.push(Rational::new(p_prev.clone(), q_prev.clone()));
    }
    out
}

/// Exact value of a finite continued fraction.
pub fn evaluate_cf(terms: &[BigInt]) -> Rational {
    convergents(terms).pop().unwrap_or_else(Rational::zero)
}

/// A reduced pair `(p, q)` with `|x - p/q| < delta / q^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirWitness {
    pub p: BigInt,
    pub q: BigInt,
    /// The inequality holds for every real within the enclosure radius.
    pub certain: bool,
}

impl DirWitness {
    pub fn value(&self) -> Rational {
        Rational::new(self.p.clone(), self.q.clone())
    }
}

/// Reduced fractions `p/q` with `|x - p/q| < delta/q^2 + slack`, for one `q`.
fn near_fractions(x: &Rational, delta: &Rational, q: &BigInt, slack: &Rational) -> Vec<(BigInt, Rational)> {
    let qr = from_big(q.clone());
    let reach = (delta / (&qr * &qr) + slack) * &qr;
    let center = x * &qr;
    let mut out = Vec::new();
    let mut p = ceil(&(&center - &reach));
    let last = floor(&(&center + &reach));
    while p <= last {
        if p.gcd(q).is_one() {
            let dist = (x - Rational::new(p.clone(), q.clone())).abs();
            out.push((p.clone(), dist));
        }
        p += 1;
    }
    out
}

fn check_delta(delta: &Rational) -> Result<(), DiophError> {
    if !delta.is_positive() {
        return Err(DiophError::Domain(format!("delta must be positive, got {delta}")));
    }
    Ok(())
}

/// All reduced `(p, q)` with `q <= q_max` and `|x - p/q| < delta / q^2`,
/// ordered by `q` then `p`.
pub fn dir_witnesses(x: &RealSpec, delta: &Rational, q_max: u64) -> Result<Vec<DirWitness>, DiophError> {
    check_delta(delta)?;
    if q_max < 1 {
        return Err(DiophError::Domain("q_max must be at least 1".into()));
    }
    let v = x.value();
    let enc = x.enclosure();
    let per_q: Vec<Vec<DirWitness>> = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let q = BigInt::from(q);
            let bound = delta / from_big(&q * &q);
            near_fractions(&v, delta, &q, &Rational::zero())
                .into_iter()
                .filter(|(_, dist)| dist < &bound)
                .map(|(p, dist)| DirWitness { p, q: q.clone(), certain: dist + &enc < bound })
                .collect()
        })
        .collect();
    Ok(per_q.into_iter().flatten().collect())
}

/// Outcome of [`bad_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadVerdict {
    /// No reduced `p/q` with `q_min <= q <= q_max` is within `delta/q^2`.
    pub ok: bool,
    /// The verdict holds for every real within the enclosure radius.
    pub certain: bool,
    /// The offending fractions when `ok` is false.
    pub violations: Vec<Rational>,
}

/// Checks `|x - p/q| >= delta / q^2` for all reduced `p/q` with
/// `q_min <= q <= q_max`.
pub fn bad_check(x: &RealSpec, delta: &Rational, q_min: u64, q_max: u64) -> Result<BadVerdict, DiophError> {
    check_delta(delta)?;
    if q_min < 1 || q_max < q_min {
        return Err(DiophError::Domain(format!("need 1 <= Q <= q_max, got Q = {q_min}, q_max = {q_max}")));
    }
    let v = x.value();
    let enc = x.enclosure();
    // For each q: (violations at the value, robust violation, violation possible within the enclosure).
    let per_q: Vec<(Vec<Rational>, bool, bool)> = (q_min..=q_max)
        .into_par_iter()
        .map(|q| {
            let q = BigInt::from(q);
            let bound = delta / from_big(&q * &q);
            let mut violations = Vec::new();
            let (mut robust, mut possible) = (false, false);
            for (p, dist) in near_fractions(&v, delta, &q, &enc) {
                if dist < bound {
                    violations.push(Rational::new(p, q.clone()));
                    robust |= &dist + &enc < bound;
                }
                possible |= &dist - &enc < bound;
            }
            (violations, robust, possible)
        })
        .collect();
    let violations: Vec<Rational> = per_q.iter().flat_map(|(v, _, _)| v.iter().cloned()).collect();
    let ok = violations.is_empty();
    let certain = if ok { !per_q.iter().any(|(_, _, p)| *p) } else { per_q.iter().any(|(_, r, _)| *r) };
    Ok(BadVerdict { ok, certain, violations })
}

/// Whether some `q <= q_max` both carries a witness for `delta` and keeps
/// every `p/q` at distance at least `delta/q^2`; the answer is always
/// `false` because the two conditions exclude each other.
pub fn complement_conflicts(x: &RealSpec, delta: &Rational, q_max: u64) -> Result<Vec<BigInt>, DiophError> {
    let witnesses = dir_witnesses(x, delta, q_max)?;
    let mut conflicts = Vec::new();
    let mut qs: Vec<&BigInt> = witnesses.iter().map(|w| &w.q).collect();
    qs.dedup();
    for q in qs {
        let q64: u64 = q.try_into().expect("q <= q_max");
        if bad_check(x, delta, q64, q64)?.ok {
            conflicts.push(q.clone());
        }
    }
    Ok(conflicts)
}

/// Witnesses `s/t` of a rational `x = s'/t'` other than `x` itself satisfy
/// `1/(t t') <= |x - s/t| < delta/t^2`, hence `t < delta t'`. Returns the
/// witnesses breaking that bound (always none).
pub fn rational_witness_excess(x: &Rational, delta: &Rational, q_max: u64) -> Result<Vec<DirWitness>, DiophError> {
    let limit = delta * from_big(x.denom().clone());
    Ok(dir_witnesses(&RealSpec::Rational(x.clone()), delta, q_max)?
        .into_iter()
        .filter(|w| &w.value() != x && from_big(w.q.clone()) >= limit)
        .collect())
}

/// The truncation `[1; 1, 1, ...]` of the golden ratio with `terms` terms.
pub fn golden_truncation(terms: usize) -> RealSpec {
    RealSpec::ContinuedFraction(vec![BigInt::one(); terms.max(1)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn expansions() {
        assert_eq!(continued_fraction(&rat(355, 113)), big(&[3, 7, 16]));
        assert_eq!(continued_fraction(&rat(1, 2)), big(&[0, 2]));
        assert_eq!(continued_fraction(&int(7)), big(&[7]));
        assert_eq!(continued_fraction(&rat(-7, 3)), big(&[-3, 1, 2]));
    }

    #[test]
    fn parse_cf_text() {
        assert_eq!(RealSpec::parse_cf("3;7,16").unwrap().value(), rat(355, 113));
        assert_eq!(RealSpec::parse_cf("7").unwrap().value(), int(7));
        assert!(RealSpec::parse_cf("1;0").is_err());
        assert!(RealSpec::parse_cf("x").is_err());
    }

    #[test]
    fn golden_convergents_are_witnesses() {
        let x = golden_truncation(40);
        let w = dir_witnesses(&x, &rat(1, 2), 100).unwrap();
        let pairs: Vec<(BigInt, BigInt)> = w.iter().map(|w| (w.p.clone(), w.q.clone())).collect();
        let fib = [1i64, 1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144];
        for k in 1..fib.len() - 1 {
            let (p, q) = (fib[k + 1], fib[k]);
            if q <= 100 {
                assert!(pairs.contains(&(BigInt::from(p), BigInt::from(q))), "{p}/{q}");
            }
        }
        assert!(w.iter().all(|w| w.certain));
    }

    #[test]
    fn rational_has_few_witnesses() {
        let w = dir_witnesses(&RealSpec::Rational(rat(1, 2)), &rat(1, 10), 1000).unwrap();
        assert!(w.iter().all(|w| w.q < BigInt::from(10) || w.value() == rat(1, 2)));
        assert!(rational_witness_excess(&rat(1, 2), &rat(1, 10), 1000).unwrap().is_empty());
        assert!(dir_witnesses(&RealSpec::Rational(rat(1, 3)), &rat(1, 1_000_000), 1).unwrap().is_empty());
    }

    #[test]
    fn bad_check_examples() {
        // 2/1 is within 0.382 < 2/5 of the golden ratio, so the scan has to
        // start at q = 2.
        let verdict = bad_check(&golden_truncation(40), &rat(2, 5), 1, 50).unwrap();
        assert!(!verdict.ok && verdict.certain);
        assert_eq!(verdict.violations, vec![int(2)]);
        let verdict = bad_check(&golden_truncation(40), &rat(2, 5), 2, 50).unwrap();
        assert!(verdict.ok && verdict.certain);
        let verdict = bad_check(&RealSpec::Rational(rat(1, 2)), &rat(1, 1000), 1, 10).unwrap();
        assert!(!verdict.ok);
        assert!(verdict.violations.contains(&rat(1, 2)));
    }

    proptest! {
        #[test]
        fn round_trip(p in -1_000_000i64..=1_000_000, q in 1i64..=1_000_000) {
            let x = rat(p, q);
            let terms = continued_fraction(&x);
            prop_assert_eq!(evaluate_cf(&terms), x.clone());
            if !crate::arith::is_integer(&x) {
                prop_assert!(terms.last().unwrap() >= &BigInt::from(2));
            }
        }

        #[test]
        fn filtration_direction(p in 1i64..1000, q in 1001i64..3000, dn in 1i64..20, shrink in 1i64..5) {
            let x = RealSpec::Rational(rat(p, q));
            let delta = rat(1, dn * 10);
            if bad_check(&x, &delta, 1, 40).unwrap().ok {
                prop_assert!(bad_check(&x, &(delta / int(shrink)), 1, 40).unwrap().ok);
            }
        }

        #[test]
        fn witnesses_and_compliance_exclude(terms in proptest::collection::vec(1i64..6, 2..12), dn in 1i64..12) {
            let x = RealSpec::ContinuedFraction(terms.into_iter().map(BigInt::from).collect());
            prop_assert!(complement_conflicts(&x, &rat(1, dn), 200).unwrap().is_empty());
        }
    }
}
