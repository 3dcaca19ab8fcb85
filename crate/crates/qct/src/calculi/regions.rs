//! RCC-8 classifiers over axis-parallel rectangles and closed disks.
//!
//! Both classifiers are exact: rectangles compare closed boxes and open
//! interiors with integer comparisons, disks compare squared integer center
//! distances against squared radius sums and differences.

use crate::geometry::{Disk, Rect};
use crate::schema::RelIx;

pub const RCC8_DC: RelIx = 0;
pub const RCC8_EC: RelIx = 1;
pub const RCC8_PO: RelIx = 2;
pub const RCC8_TPP: RelIx = 3;
pub const RCC8_NTPP: RelIx = 4;
pub const RCC8_TPPI: RelIx = 5;
pub const RCC8_NTPPI: RelIx = 6;
pub const RCC8_EQ: RelIx = 7;

pub const RCC8_SYMBOLS: [&str; 8] = ["DC", "EC", "PO", "TPP", "NTPP", "TPPi", "NTPPi", "EQ"];
pub const RCC8_CONVERSE: [RelIx; 8] = [0, 1, 2, 5, 6, 3, 4, 7];

pub fn rcc8_relate_rect(a: Rect, b: Rect) -> RelIx {
    let closures_meet = a.x1 <= b.x2 && b.x1 <= a.x2 && a.y1 <= b.y2 && b.y1 <= a.y2;
    if !closures_meet {
        return RCC8_DC;
    }
    let interiors_meet = a.x1 < b.x2 && b.x1 < a.x2 && a.y1 < b.y2 && b.y1 < a.y2;
    if !interiors_meet {
        return RCC8_EC;
    }
    if a == b {
        return RCC8_EQ;
    }
    if b.x1 <= a.x1 && a.x2 <= b.x2 && b.y1 <= a.y1 && a.y2 <= b.y2 {
        // a is a proper part of b; tangential unless strictly inside.
        return if b.x1 < a.x1 && a.x2 < b.x2 && b.y1 < a.y1 && a.y2 < b.y2 {
            RCC8_NTPP
        } else {
            RCC8_TPP
        };
    }
    if a.x1 <= b.x1 && b.x2 <= a.x2 && a.y1 <= b.y1 && b.y2 <= a.y2 {
        return if a.x1 < b.x1 && b.x2 < a.x2 && a.y1 < b.y1 && b.y2 < a.y2 {
            RCC8_NTPPI
        } else {
            RCC8_TPPI
        };
    }
    RCC8_PO
}

pub fn rcc8_relate_disk(a: Disk, b: Disk) -> RelIx {
    let d2 = (a.cx - b.cx).pow(2) + (a.cy - b.cy).pow(2);
    let sum2 = (a.r + b.r).pow(2);
    if d2 > sum2 {
        return RCC8_DC;
    }
    if d2 == sum2 {
        return RCC8_EC;
    }
    let diff2 = (a.r - b.r).pow(2);
    if a.r == b.r {
        return if d2 == 0 { RCC8_EQ } else { RCC8_PO };
    }
    if a.r < b.r {
        if d2 < diff2 {
            RCC8_NTPP
        } else if d2 == diff2 {
            RCC8_TPP
        } else {
            RCC8_PO
        }
    } else if d2 < diff2 {
        RCC8_NTPPI
    } else if d2 == diff2 {
        RCC8_TPPI
    } else {
        RCC8_PO
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(x1: i64, x2: i64, y1: i64, y2: i64) -> Rect {
        Rect::new(x1, x2, y1, y2)
    }

    #[test]
    fn rect_examples() {
        assert_eq!(rcc8_relate_rect(rect(0, 1, 0, 1), rect(2, 3, 2, 3)), RCC8_DC);
        assert_eq!(rcc8_relate_rect(rect(0, 2, 0, 2), rect(2, 4, 0, 2)), RCC8_EC);
        assert_eq!(rcc8_relate_rect(rect(0, 2, 0, 2), rect(1, 3, 1, 3)), RCC8_PO);
        assert_eq!(rcc8_relate_rect(rect(0, 2, 0, 2), rect(0, 3, 0, 3)), RCC8_TPP);
        assert_eq!(rcc8_relate_rect(rect(1, 2, 1, 2), rect(0, 3, 0, 3)), RCC8_NTPP);
        assert_eq!(rcc8_relate_rect(rect(0, 3, 0, 3), rect(0, 2, 0, 2)), RCC8_TPPI);
        assert_eq!(rcc8_relate_rect(rect(0, 3, 0, 3), rect(1, 2, 1, 2)), RCC8_NTPPI);
        assert_eq!(rcc8_relate_rect(rect(0, 2, 0, 2), rect(0, 2, 0, 2)), RCC8_EQ);
    }

    #[test]
    fn rect_corner_touch_is_ec() {
        assert_eq!(rcc8_relate_rect(rect(0, 1, 0, 1), rect(1, 2, 1, 2)), RCC8_EC);
    }

    #[test]
    fn disk_examples() {
        let d = |cx, cy, r| Disk::new(cx, cy, r);
        assert_eq!(rcc8_relate_disk(d(0, 0, 1), d(3, 0, 1)), RCC8_DC);
        assert_eq!(rcc8_relate_disk(d(0, 0, 1), d(2, 0, 1)), RCC8_EC);
        assert_eq!(rcc8_relate_disk(d(0, 0, 1), d(1, 0, 2)), RCC8_TPP);
        assert_eq!(rcc8_relate_disk(d(0, 0, 1), d(0, 0, 3)), RCC8_NTPP);
        assert_eq!(rcc8_relate_disk(d(1, 0, 2), d(0, 0, 1)), RCC8_TPPI);
        assert_eq!(rcc8_relate_disk(d(0, 0, 3), d(0, 0, 1)), RCC8_NTPPI);
        assert_eq!(rcc8_relate_disk(d(0, 0, 2), d(1, 0, 2)), RCC8_PO);
        assert_eq!(rcc8_relate_disk(d(1, 1, 2), d(1, 1, 2)), RCC8_EQ);
    }
}
