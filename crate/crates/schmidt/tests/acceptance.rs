//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use schmidt::arith::{ceil, floor, from_big, int, is_integer, pow, rat, BallD, Interval, Rational};
use schmidt::dims::{
    aux_inequality_holds, bad_delta_bounds, build_cover_levels, hole_count, intersection_bound, ln_rational, to_f64,
    upper_bound_ubiq_losing, verify_cover_levels, BoundInputs, HoleVariant, DEFAULT_PRECISION,
};
use schmidt::dioph::{bad_check, complement_conflicts, dir_witnesses, rational_witness_excess, RealSpec};
use schmidt::farey::{
    farey_half_interval, farey_in_range, farey_sequence, half_farey_partition, mediant, minimal_order_farey_element,
    FareyFraction,
};
use schmidt::game::{run_game, AccelSeq, GameParams, Play, Strategy};
use schmidt::strategies::adversary::Adversary;
use schmidt::strategies::alice::{certify_bad, excluded_set_avoided, AliceBad};
use schmidt::strategies::bob::{extract_witnesses, FareyBob, WitnessKind};
use schmidt::tess::{
    brute_force_blocks, is_representable, m_tessellation, maximal_tessellations, minimal_tessellations, BlockMode,
    CompleteTess, TessBlock, DEFAULT_BRUTE_FORCE_BOUND,
};

type Outcome = Result<String, String>;

fn random_opening(rng: &mut ChaCha8Rng, max_radius_num: i64) -> Interval {
    let center = rat(rng.gen_range(-2000..=2000), 1000);
    let radius = rat(rng.gen_range(1..=max_radius_num), 1000);
    Interval::new(center, radius).unwrap()
}

fn adversaries() -> Vec<Adversary> {
    vec![Adversary::Random, Adversary::TargetRational(rat(1, 2)), Adversary::AvoidAnchor]
}

fn prefix(play: &Play, depth: usize) -> Play {
    Play::from_balls(
        play.params().clone(),
        play.accel().clone(),
        play.bob_balls()[..depth].to_vec(),
        play.alice_balls()[..depth - 1].to_vec(),
    )
    .unwrap()
}

fn farey_identities() -> Outcome {
    let pairs: usize = (1..=300u64)
        .into_par_iter()
        .map(|n| -> Result<usize, String> {
            let seq = farey_sequence(n).map_err(|e| e.to_string())?;
            for w in seq.windows(2) {
                let gap = w[1].value() - w[0].value();
                let expected = Rational::new(BigInt::one(), w[0].order() * w[1].order());
                if gap != expected {
                    return Err(format!("F_{n}: {} - {} = {gap}", w[1].value(), w[0].value()));
                }
            }
            Ok(seq.len() - 1)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    // Every pair that is consecutive in some F_n is a Stern-Brocot pair; walk
    // those with q + q' <= 400.
    let mut stack = vec![(rat(0, 1), rat(1, 1))];
    let mut mediants = 0usize;
    let limit = BigInt::from(400);
    let mut work = Vec::new();
    while let Some((a, b)) = stack.pop() {
        let sum = a.denom() + b.denom();
        if sum > limit {
            continue;
        }
        let m = Rational::new(a.numer() + b.numer(), sum.clone());
        stack.push((a.clone(), m.clone()));
        stack.push((m, b.clone()));
        work.push((a, b));
    }
    for chunk in work.par_chunks(256).map(|chunk| -> Result<usize, String> {
        for (a, b) in chunk {
            let sum = a.denom() + b.denom();
            let (fa, fb) = (FareyFraction::from_rational(a), FareyFraction::from_rational(b));
            let m = mediant(&fa, &fb).map_err(|e| e.to_string())?;
            if m.order() != &sum || m.value() <= *a || m.value() >= *b {
                return Err(format!("mediant of {a} and {b} is {}", m.value()));
            }
            // Nested sequences: absence from F_{q+q'-1} covers every m in [n, q+q').
            let before = farey_in_range(a, b, &(&sum - 1));
            if before != vec![a.clone(), b.clone()] {
                return Err(format!("F_{} has {before:?} between {a} and {b}", &sum - 1));
            }
            let at = farey_in_range(a, b, &sum);
            if at != vec![a.clone(), m.value(), b.clone()] {
                return Err(format!("F_{sum} has {at:?} between {a} and {b}"));
            }
        }
        Ok(chunk.len())
    }).collect::<Result<Vec<_>, _>>()? {
        mediants += chunk;
    }
    Ok(format!("{pairs} consecutive pairs for n <= 300, {mediants} mediant insertions"))
}

fn random_interval(rng: &mut ChaCha8Rng) -> Interval {
    loop {
        let center = rat(rng.gen_range(-300..=300), rng.gen_range(1..=60));
        let radius = rat(rng.gen_range(1..=499), 1000);
        let interval = Interval::new(center, radius).unwrap();
        let (_, order) = minimal_order_farey_element(&interval).unwrap();
        if order <= BigInt::from(50) {
            return interval;
        }
    }
}

fn half_farey() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut gaps = 0;
    for i in 0..1000 {
        let interval = random_interval(&mut rng);
        let partition = half_farey_partition(&interval).map_err(|e| e.to_string())?;
        let q = from_big(partition.anchor.order().clone());
        let (low, high) = ((int(6) * &q * &q).recip(), (&q * &q).recip());
        for w in partition.elements().windows(2) {
            let gap = w[1].value() - w[0].value();
            if !(low < gap && gap < high) {
                return Err(format!("interval {i} {interval}: gap {gap} outside ({low}, {high})"));
            }
            gaps += 1;
        }
        let half = farey_half_interval(&interval).map_err(|e| e.to_string())?;
        if half.interval.diam() != interval.diam() / int(2) {
            return Err(format!("interval {i} {interval}: half-interval diameter {}", half.interval.diam()));
        }
        if !interval.contains(&half.interval) || !partition.cover.contains(&half.interval) {
            return Err(format!("interval {i} {interval}: half-interval {} escapes", half.interval));
        }
    }
    Ok(format!("1000 intervals, {gaps} partition gaps"))
}

fn alice_certification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut games = 0;
    for adversary in adversaries() {
        for g in 0..200u64 {
            let beta = if g % 2 == 0 { rat(1, 4) } else { rat(1, 2) };
            let params = GameParams::new(rat(1, 3), beta).unwrap();
            let delta = params.ab() / int(6);
            let opening = random_opening(&mut rng, 2000);
            let mut bob = adversary.clone();
            let mut alice = AliceBad::new();
            let play = run_game(&params, &AccelSeq::zero(), opening, &mut bob, &mut alice, 30, g)
                .map_err(|e| format!("{adversary:?} game {g}: {e}"))?;
            let start = schmidt::strategies::alice::reindex_start(&play).unwrap();
            for depth in start..=play.depth() {
                let cert = certify_bad(&prefix(&play, depth), &delta).map_err(|e| e.to_string())?;
                if !cert.ok {
                    return Err(format!("{adversary:?} game {g} depth {depth}: violations {:?}", cert.violations));
                }
            }
            if !excluded_set_avoided(&play).map_err(|e| e.to_string())? {
                return Err(format!("{adversary:?} game {g}: B_2 meets the excluded set"));
            }
            games += 1;
        }
    }
    Ok(format!("{games} games, every prefix certified"))
}

fn bob_witnesses() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let kinds = adversaries();
    let (mut stabilized, mut increasing, mut witnesses) = (0, 0, 0);
    for g in 0..200u64 {
        let beta = if g % 2 == 0 { rat(1, 4) } else { rat(1, 2) };
        let params = GameParams::new(rat(1, 2), beta).unwrap();
        let opening = random_opening(&mut rng, 1000);
        let mut alice: Box<dyn Strategy> = Box::new(kinds[g as usize % kinds.len()].clone());
        let mut bob = FareyBob::new(&params).unwrap();
        let play = run_game(&params, &AccelSeq::zero(), opening, &mut bob, alice.as_mut(), 30, g)
            .map_err(|e| format!("game {g}: {e}"))?;
        let report = extract_witnesses(&play).map_err(|e| e.to_string())?;
        if !report.exact || report.witnesses != bob.witnesses() {
            return Err(format!("game {g}: replay disagrees with the recorded play"));
        }
        for w in &report.witnesses {
            let ball = &play.bob_balls()[w.ball_index - 1];
            if !w.holds_on(ball) {
                return Err(format!("game {g}: witness {} fails on {ball}", w.nu));
            }
            if let WitnessKind::Forced { anchor_order, .. } = &w.kind {
                if w.nu.q() >= &(anchor_order * BigInt::from(3)) {
                    return Err(format!("game {g}: q' = {} not below 3q = {}", w.nu.q(), anchor_order * 3));
                }
            }
        }
        if !report.anchor_orders_monotone() {
            return Err(format!("game {g}: anchor orders decrease"));
        }
        witnesses += report.witnesses.len();
        if report.increasing_denominators() >= 3 {
            increasing += 1;
        } else if report.stabilized.is_some() {
            stabilized += 1;
        } else {
            return Err(format!("game {g}: neither three increasing denominators nor stabilization"));
        }
    }
    Ok(format!("{witnesses} witnesses; {increasing} games with increasing denominators, {stabilized} stabilized"))
}

fn block_key(b: &TessBlock) -> (Vec<BigInt>, Vec<BigInt>) {
    (b.lo().to_vec(), b.hi().to_vec())
}

fn same_blocks(built: &[TessBlock], oracle: &[TessBlock]) -> bool {
    let mut a: Vec<_> = built.iter().map(block_key).collect();
    let mut b: Vec<_> = oracle.iter().map(block_key).collect();
    a.sort();
    b.sort();
    a == b
}

/// Representability by the parity/congruence characterization.
fn congruent(ball: &BallD, base: &[Rational], cell_radius: &Rational) -> bool {
    let ratio = ball.radius() / cell_radius;
    if !is_integer(&ratio) {
        return false;
    }
    let shift = if ratio.to_integer() % 2 == BigInt::zero() { cell_radius.clone() } else { Rational::zero() };
    let period = cell_radius * int(2);
    ball.center().iter().zip(base).all(|(x, y)| is_integer(&((x - y - &shift) / &period)))
}

fn allowed_sizes(ratio: &Rational, representable: bool, outer: bool) -> Vec<BigInt> {
    if representable {
        return vec![ratio.to_integer()];
    }
    match (outer, is_integer(ratio)) {
        (true, true) => vec![ratio.to_integer() + 1],
        (true, false) => vec![ceil(ratio), ceil(ratio) + 1],
        (false, true) => vec![ratio.to_integer() - 1],
        (false, false) => vec![floor(ratio), floor(ratio) - 1],
    }
}

fn tess_case(ball: &BallD, tess: &CompleteTess) -> Result<(), String> {
    let d = ball.dim();
    let ratio = ball.radius() / tess.cell_radius();
    let representation = is_representable(ball, tess).map_err(|e| e.to_string())?;
    let expected = congruent(ball, tess.base(), tess.cell_radius());
    if representation.is_some() != expected {
        return Err(format!("representability {} but congruence says {expected}", representation.is_some()));
    }
    let mut families = vec![(true, minimal_tessellations(ball, tess), BlockMode::Cover)];
    if ratio >= int(2) {
        families.push((false, maximal_tessellations(ball, tess), BlockMode::Packing));
    }
    for (outer, built, mode) in families {
        let built = built.map_err(|e| e.to_string())?;
        let oracle = brute_force_blocks(ball, tess, mode, DEFAULT_BRUTE_FORCE_BOUND).map_err(|e| e.to_string())?;
        if !same_blocks(&built, &oracle) {
            return Err(format!("{mode:?}: construction and oracle disagree"));
        }
        let sides = allowed_sizes(&ratio, representation.is_some(), outer);
        let sizes: Vec<BigInt> = sides.iter().map(|s| num_traits::pow(s.clone(), d)).collect();
        if let Some(b) = built.iter().find(|b| !sizes.contains(&b.cardinality())) {
            return Err(format!("{mode:?}: {} cells, allowed {sizes:?}", b.cardinality()));
        }
        if let Some(rep) = &representation {
            if built.len() != 1 || block_key(&built[0]) != block_key(rep) {
                return Err(format!("{mode:?}: representation is not the unique block"));
            }
        }
        if outer {
            let reach = tess.cell_radius() * int(4);
            for b in &built {
                for (i, side) in b.union_box().iter().enumerate() {
                    let axis = ball.axis(i);
                    if axis.lo() - side.lo() >= reach || side.hi() - axis.hi() >= reach {
                        return Err("a minimal block reaches 4R' beyond the ball".into());
                    }
                }
            }
        }
    }
    Ok(())
}

fn random_tess_case(rng: &mut ChaCha8Rng, d: usize) -> (BallD, CompleteTess) {
    let cell_radius = rat(1, rng.gen_range(1..=4));
    let den = rng.gen_range(1..=4);
    let ratio = rat(rng.gen_range(den..=6 * den), den);
    let grid = &cell_radius / int(rng.gen_range(1..=4));
    let coord = |rng: &mut ChaCha8Rng| &grid * int(rng.gen_range(-12..=12));
    let center: Vec<Rational> = (0..d).map(|_| coord(rng)).collect();
    let base: Vec<Rational> = (0..d).map(|_| coord(rng)).collect();
    let ball = BallD::new(center, &ratio * &cell_radius).unwrap();
    (ball, CompleteTess::new(base, cell_radius).unwrap())
}

fn representable_case(rng: &mut ChaCha8Rng, d: usize) -> (BallD, CompleteTess) {
    let cell_radius = rat(1, rng.gen_range(1..=4));
    let m = rng.gen_range(1..=6i64);
    let base: Vec<Rational> = (0..d).map(|_| rat(rng.gen_range(-20..=20), 8)).collect();
    let shift = if m % 2 == 0 { cell_radius.clone() } else { Rational::zero() };
    let center = base
        .iter()
        .map(|x| x + &shift + &cell_radius * int(2 * rng.gen_range(-5..=5)))
        .collect();
    let ball = BallD::new(center, &cell_radius * int(m)).unwrap();
    (ball, CompleteTess::new(base, cell_radius).unwrap())
}

fn tessellations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases = Vec::new();
    for (d, count) in [(1, 500), (2, 300)] {
        for _ in 0..count {
            cases.push(random_tess_case(&mut rng, d));
        }
        for _ in 0..count / 5 {
            cases.push(representable_case(&mut rng, d));
        }
    }
    let representable = cases
        .par_iter()
        .enumerate()
        .map(|(i, (ball, tess))| {
            tess_case(ball, tess).map_err(|e| format!("case {i} (ball {:?} r {}, base {:?} r' {}): {e}",
                ball.center().iter().map(|c| c.to_string()).collect::<Vec<_>>(), ball.radius(),
                tess.base().iter().map(|c| c.to_string()).collect::<Vec<_>>(), tess.cell_radius()))?;
            Ok(usize::from(is_representable(ball, tess).unwrap().is_some()))
        })
        .collect::<Result<Vec<_>, String>>()?
        .into_iter()
        .sum::<usize>();
    Ok(format!("{} instances ({representable} representable) match the oracle", cases.len()))
}

fn dimension_formulas() -> Outcome {
    let prec = DEFAULT_PRECISION;
    let inputs = BoundInputs::new(1, 1, 2, rat(1, 2)).map_err(|e| e.to_string())?;
    if hole_count(&inputs, HoleVariant::IntegerBeta).map_err(|e| e.to_string())? != BigInt::from(5) {
        return Err("N != 5 for (1, 1, 2, 1/2)".into());
    }
    let bounds = upper_bound_ubiq_losing(&inputs, prec).map_err(|e| e.to_string())?;
    let sharp = bounds.integer_case.ok_or("no integer-case bound")?.value;
    let ln = |n: i64| ln_rational(&int(n), prec).unwrap();
    let reference = (ln(2) + ln(5)) / ln(16);
    let diff = to_f64(&(sharp.clone() - reference));
    if (to_f64(&sharp) - 0.83).abs() >= 5e-3 || diff.abs() >= 1e-12 {
        return Err(format!("bound {sharp} vs (log 2 + log 5)/log 16 differs by {diff:e}"));
    }
    let mut sweep = 0;
    for d in 1..=3u32 {
        for s in d..=d + 3 {
            for j in 2..=6u32 {
                for beta in [rat(1, 2), rat(1, 3), rat(1, 4), rat(2, 5)] {
                    let inp = BoundInputs::new(d, s, j, beta.clone()).map_err(|e| e.to_string())?;
                    if !aux_inequality_holds(&inp).map_err(|e| e.to_string())? {
                        return Err(format!("auxiliary inequality fails at d={d} s={s} j={j} beta={beta}"));
                    }
                    sweep += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let delta = rat(1, rng.gen_range(19..=5000));
        let delta = delta * rat(rng.gen_range(50..=100), 100);
        let lower = bad_delta_bounds(&delta, prec).map_err(|e| e.to_string())?.lower.ok_or("no lower bound")?;
        let single = intersection_bound(1, &delta, prec).map_err(|e| e.to_string())?;
        if single != lower {
            return Err(format!("delta {delta}: intersection bound {single} vs {lower}"));
        }
    }
    Ok(format!("bound {:.6}; {sweep} sweep points; 20 deltas", to_f64(&sharp)))
}

fn cover_construction() -> Outcome {
    let b1 = Interval::from_endpoints(rat(0, 1), rat(1, 2)).unwrap();
    let inputs = BoundInputs::new(1, 1, 2, rat(1, 2)).map_err(|e| e.to_string())?;
    let bob_params = GameParams::new(rat(1, 2), rat(1, 2)).unwrap();
    let mut summary = Vec::new();
    for variant in [HoleVariant::IntegerBeta, HoleVariant::General] {
        let n = hole_count(&inputs, variant).map_err(|e| e.to_string())?;
        let levels = build_cover_levels(&b1, &inputs, variant, 3).map_err(|e| e.to_string())?;
        let check = verify_cover_levels(&b1, &levels);
        let mut parents = vec![b1.clone()];
        for (i, level) in levels.iter().enumerate() {
            let expected = pow(&from_big(&n * BigInt::from(inputs.j)), level.t as i64);
            if from_big(BigInt::from(level.cells.len())) != expected {
                return Err(format!("{variant:?} level {}: {} cells, expected {expected}", level.t, level.cells.len()));
            }
            if !check.covered[i] || !check.holes_disjoint[i] {
                return Err(format!("{variant:?} level {}: cover or hole check failed", level.t));
            }
            let mut alice_balls = Vec::new();
            for p in &parents {
                for cell in m_tessellation(&BallD::try_from(p).unwrap(), inputs.j as u64).map_err(|e| e.to_string())? {
                    alice_balls.push(cell.axis(0));
                }
            }
            if alice_balls != level.alice_balls {
                return Err(format!("{variant:?} level {}: Alice balls are not the refined cells", level.t));
            }
            for (alice, hole) in level.alice_balls.iter().zip(&level.holes) {
                let mut bob = FareyBob::new(&bob_params).unwrap();
                let (answer, _) = bob.bob_move(alice, 1, 2).map_err(|e| e.to_string())?;
                if &answer != hole || !alice.contains(hole) {
                    return Err(format!("{variant:?} level {}: hole {hole} is not Bob's answer {answer}", level.t));
                }
            }
            parents = level.cells.clone();
        }
        let shifted = schmidt::dims::shifted_balls(&b1);
        if !check.shifted_contain || !levels[0].holes.iter().all(|h| shifted.iter().any(|s| s.contains(h))) {
            return Err(format!("{variant:?}: shifted balls miss a hole"));
        }
        summary.push(format!("{variant:?} N={n}"));
    }
    Ok(format!("{} with (jN)^t cells for t <= 3", summary.join(", ")))
}

fn sample_point(rng: &mut ChaCha8Rng, i: usize) -> RealSpec {
    if i % 2 == 0 {
        RealSpec::Rational(rat(rng.gen_range(-500..=500), rng.gen_range(1..=200)))
    } else {
        let len = rng.gen_range(2..=12);
        let mut terms = vec![BigInt::from(rng.gen_range(-3..=3))];
        terms.extend((1..len).map(|_| BigInt::from(rng.gen_range(1..=6))));
        RealSpec::continued_fraction(terms).unwrap()
    }
}

fn complement_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut witnesses_seen = 0;
    for i in 0..50 {
        let x = sample_point(&mut rng, i);
        let delta = rat(rng.gen_range(1..=100), 100);
        let q_max = rng.gen_range(50..=500u64);
        let witnesses = dir_witnesses(&x, &delta, q_max).map_err(|e| e.to_string())?;
        for q in 1..=q_max {
            let is_witness = witnesses.iter().any(|w| w.q == BigInt::from(q));
            let compliant = bad_check(&x, &delta, q, q).map_err(|e| e.to_string())?.ok;
            if is_witness == compliant {
                return Err(format!("sample {i} ({:?}, delta {delta}): q = {q} witness {is_witness}, compliant {compliant}", x.value()));
            }
        }
        if !complement_conflicts(&x, &delta, q_max).map_err(|e| e.to_string())?.is_empty() {
            return Err(format!("sample {i}: complement_conflicts reports a conflict"));
        }
        if let RealSpec::Rational(v) = &x {
            let limit = &delta * from_big(v.denom().clone());
            for w in &witnesses {
                if &w.value() != v && from_big(w.q.clone()) >= limit {
                    return Err(format!("sample {i}: witness {} of {v} has q >= delta * {}", w.value(), v.denom()));
                }
                if (v - w.value()).abs() >= &delta / from_big(&w.q * &w.q) {
                    return Err(format!("sample {i}: {} is not a witness", w.value()));
                }
            }
            if !rational_witness_excess(v, &delta, q_max).map_err(|e| e.to_string())?.is_empty() {
                return Err(format!("sample {i}: rational_witness_excess is non-empty"));
            }
        }
        witnesses_seen += witnesses.len();
    }
    Ok(format!("50 samples, {witnesses_seen} witnesses, every q classified exactly once"))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 Farey identities", farey_identities),
        ("2 half Farey partition", half_farey),
        ("3 Alice certification", alice_certification),
        ("4 Bob witnesses", bob_witnesses),
        ("5 tessellations", tessellations),
        ("6 dimension formulas", dimension_formulas),
        ("7 cover construction", cover_construction),
        ("8 complement identity", complement_identity),
    ];
    let mut failed = false;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = check();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed = true;
                println!("FAIL criterion {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
