//! Point Algebra, Interval Algebra, and INDU relation classifiers.

use std::cmp::Ordering;

use crate::geometry::Interval;
use crate::schema::RelIx;

// PA indices, in schema order <, =, >.
pub const PA_LT: RelIx = 0;
pub const PA_EQ: RelIx = 1;
pub const PA_GT: RelIx = 2;

pub const PA_SYMBOLS: [&str; 3] = ["<", "=", ">"];

// IA indices; the order is symmetric so that converse(i) = 12 - i.
pub const IA_B: RelIx = 0;
pub const IA_M: RelIx = 1;
pub const IA_O: RelIx = 2;
pub const IA_S: RelIx = 3;
pub const IA_D: RelIx = 4;
pub const IA_F: RelIx = 5;
pub const IA_EQ: RelIx = 6;
pub const IA_FI: RelIx = 7;
pub const IA_DI: RelIx = 8;
pub const IA_SI: RelIx = 9;
pub const IA_OI: RelIx = 10;
pub const IA_MI: RelIx = 11;
pub const IA_BI: RelIx = 12;

pub const IA_SYMBOLS: [&str; 13] = [
    "b", "m", "o", "s", "d", "f", "eq", "fi", "di", "si", "oi", "mi", "bi",
];

/// INDU symbols: each splittable IA relation carries the three duration
/// variants <, =, >; containment relations force a single variant. The order
/// again mirrors so that converse(i) = 24 - i.
pub const INDU_SYMBOLS: [&str; 25] = [
    "b<", "b=", "b>", "m<", "m=", "m>", "o<", "o=", "o>", "s<", "d<", "f<", "eq=", "fi>", "di>",
    "si>", "oi<", "oi=", "oi>", "mi<", "mi=", "mi>", "bi<", "bi=", "bi>",
];

/// Exactly one of <, =, > holds between two points.
pub fn pa_relate(a: i64, b: i64) -> RelIx {
    match a.cmp(&b) {
        Ordering::Less => PA_LT,
        Ordering::Equal => PA_EQ,
        Ordering::Greater => PA_GT,
    }
}

/// Classifies two intervals into one of the 13 basic IA relations by
/// endpoint order.
pub fn ia_relate(a: Interval, b: Interval) -> RelIx {
    match (a.lo.cmp(&b.lo), a.hi.cmp(&b.hi)) {
        (Ordering::Equal, Ordering::Equal) => IA_EQ,
        (Ordering::Equal, Ordering::Less) => IA_S,
        (Ordering::Equal, Ordering::Greater) => IA_SI,
        (Ordering::Less, Ordering::Equal) => IA_FI,
        (Ordering::Greater, Ordering::Equal) => IA_F,
        (Ordering::Greater, Ordering::Less) => IA_D,
        (Ordering::Less, Ordering::Greater) => IA_DI,
        (Ordering::Less, Ordering::Less) => match a.hi.cmp(&b.lo) {
            Ordering::Less => IA_B,
            Ordering::Equal => IA_M,
            Ordering::Greater => IA_O,
        },
        (Ordering::Greater, Ordering::Greater) => match b.hi.cmp(&a.lo) {
            Ordering::Less => IA_BI,
            Ordering::Equal => IA_MI,
            Ordering::Greater => IA_OI,
        },
    }
}

/// INDU relation: the IA relation refined by the duration comparison.
/// For d, s, f the geometry forces <; for eq it forces =; for di, si, fi
/// it forces >.
pub fn indu_relate(a: Interval, b: Interval) -> RelIx {
    let ia = ia_relate(a, b);
    let dur = pa_relate(a.len(), b.len());
    match ia {
        IA_B => dur,
        IA_M => 3 + dur,
        IA_O => 6 + dur,
        IA_S => {
            debug_assert_eq!(dur, PA_LT);
            9
        }
        IA_D => {
            debug_assert_eq!(dur, PA_LT);
            10
        }
        IA_F => {
            debug_assert_eq!(dur, PA_LT);
            11
        }
        IA_EQ => {
            debug_assert_eq!(dur, PA_EQ);
            12
        }
        IA_FI => {
            debug_assert_eq!(dur, PA_GT);
            13
        }
        IA_DI => {
            debug_assert_eq!(dur, PA_GT);
            14
        }
        IA_SI => {
            debug_assert_eq!(dur, PA_GT);
            15
        }
        IA_OI => 16 + dur,
        IA_MI => 19 + dur,
        IA_BI => 22 + dur,
        _ => unreachable!(),
    }
}

/// Splits an INDU index back into its IA and duration components.
pub fn indu_components(indu: RelIx) -> (RelIx, RelIx) {
    match indu {
        0..=2 => (IA_B, indu),
        3..=5 => (IA_M, indu - 3),
        6..=8 => (IA_O, indu - 6),
        9 => (IA_S, PA_LT),
        10 => (IA_D, PA_LT),
        11 => (IA_F, PA_LT),
        12 => (IA_EQ, PA_EQ),
        13 => (IA_FI, PA_GT),
        14 => (IA_DI, PA_GT),
        15 => (IA_SI, PA_GT),
        16..=18 => (IA_OI, indu - 16),
        19..=21 => (IA_MI, indu - 19),
        22..=24 => (IA_BI, indu - 22),
        _ => panic!("INDU index out of range: {indu}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi)
    }

    #[test]
    fn pa_relate_examples() {
        assert_eq!(pa_relate(1, 2), PA_LT);
        assert_eq!(pa_relate(2, 2), PA_EQ);
        assert_eq!(pa_relate(3, 1), PA_GT);
    }

    #[test]
    fn ia_relate_examples() {
        assert_eq!(ia_relate(iv(0, 1), iv(2, 3)), IA_B);
        assert_eq!(ia_relate(iv(0, 2), iv(2, 4)), IA_M);
        assert_eq!(ia_relate(iv(1, 2), iv(0, 4)), IA_D);
        assert_eq!(ia_relate(iv(0, 3), iv(0, 3)), IA_EQ);
        assert_eq!(ia_relate(iv(0, 2), iv(1, 3)), IA_O);
        assert_eq!(ia_relate(iv(0, 1), iv(0, 2)), IA_S);
        assert_eq!(ia_relate(iv(1, 3), iv(0, 3)), IA_F);
        assert_eq!(ia_relate(iv(2, 3), iv(0, 1)), IA_BI);
    }

    #[test]
    fn indu_relate_examples() {
        let indu = |a: Interval, b: Interval| INDU_SYMBOLS[indu_relate(a, b) as usize];
        assert_eq!(indu(iv(0, 1), iv(2, 5)), "b<");
        assert_eq!(indu(iv(0, 1), iv(2, 3)), "b=");
        assert_eq!(indu(iv(1, 2), iv(0, 4)), "d<");
        assert_eq!(indu(iv(0, 3), iv(0, 3)), "eq=");
        assert_eq!(indu(iv(0, 4), iv(1, 3)), "di>");
    }

    #[test]
    fn indu_components_roundtrip() {
        for i in 0..25 {
            let (ia, dur) = indu_components(i);
            let sym = INDU_SYMBOLS[i as usize];
            assert!(sym.starts_with(IA_SYMBOLS[ia as usize]));
            assert!(sym.ends_with(PA_SYMBOLS[dur as usize]));
        }
    }
}
