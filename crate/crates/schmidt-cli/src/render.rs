//! JSON encodings of library values. Rationals and big integers are always
//! written as strings so that no precision is lost.

use serde_json::{json, Value};

use schmidt::arith::{format_rational, Interval, Rational};
use schmidt::dims::{CoverLevel, Decimal};
use schmidt::farey::{FareyFraction, HalfFareyPartition};
use schmidt::strategies::alice::Certificate;
use schmidt::strategies::bob::{BobWitness, WitnessKind};
use schmidt::tess::TessBlock;

pub fn rational(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn big(x: &impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn decimal(x: &Decimal) -> Value {
    Value::String(x.to_string())
}

pub fn fraction(f: &FareyFraction) -> Value {
    json!({ "p": big(f.p()), "q": big(f.q()), "k": big(f.k()), "value": rational(&f.value()) })
}

pub fn interval(i: &Interval) -> Value {
    json!({ "center": rational(i.center()), "radius": rational(i.radius()), "lo": rational(&i.lo()), "hi": rational(&i.hi()) })
}

pub fn partition(p: &HalfFareyPartition) -> Value {
    json!({
        "anchor": fraction(&p.anchor),
        "left_neighbor": rational(&p.left_neighbor),
        "right_neighbor": rational(&p.right_neighbor),
        "l": rational(&p.l),
        "r": rational(&p.r),
        "left_chain": p.left_chain.iter().map(fraction).collect::<Vec<_>>(),
        "right_chain": p.right_chain.iter().map(fraction).collect::<Vec<_>>(),
        "cover": interval(&p.cover),
    })
}

pub fn block(b: &TessBlock) -> Value {
    json!({
        "lo": b.lo().iter().map(big).collect::<Vec<_>>(),
        "hi": b.hi().iter().map(big).collect::<Vec<_>>(),
        "cells": big(&b.cardinality()),
    })
}

pub fn witness(w: &BobWitness) -> Value {
    let (kind, anchor_order) = match &w.kind {
        WitnessKind::HalfInterval => ("half_interval", big(w.nu.q())),
        WitnessKind::Forced { anchor_order, .. } => ("forced", big(anchor_order)),
    };
    json!({
        "step": w.step,
        "nu": rational(&w.nu.value()),
        "ball_index": w.ball_index,
        "bound": rational(&w.bound),
        "anchor_bound": rational(&w.anchor_bound),
        "kind": kind,
        "anchor_order": anchor_order,
    })
}

pub fn certificate(c: &Certificate, delta: &Rational) -> Value {
    json!({
        "delta": rational(delta),
        "q_min": big(&c.q_min),
        "q_bound": big(&c.q_bound),
        "ok": c.ok,
        "violations": c.violations.iter().map(rational).collect::<Vec<_>>(),
    })
}

pub fn cover_level(level: &CoverLevel, expected: &Value, covered: bool, holes_disjoint: bool) -> Value {
    json!({
        "t": level.t,
        "cells": level.cells.len(),
        "expected_cells": expected,
        "tight_cells": level.tight_cells,
        "holes": level.holes.len(),
        "cell_radius": rational(&level.cell_radius),
        "covered": covered,
        "holes_disjoint": holes_disjoint,
    })
}
