//! Concrete geometric elements the calculi classify: grid points, integer
//! intervals, axis-parallel rectangles, closed disks, and oriented points.

use std::fmt;

/// Closed interval `[lo, hi]` with distinct integer endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    /// Panics if `lo >= hi`; intervals are nondegenerate by construction.
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo < hi, "interval requires lo < hi, got [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn len(&self) -> i64 {
        self.hi - self.lo
    }
}

/// Axis-parallel rectangle `[x1,x2] × [y1,y2]` with `x1 < x2`, `y1 < y2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rect {
    pub x1: i64,
    pub x2: i64,
    pub y1: i64,
    pub y2: i64,
}

impl Rect {
    pub fn new(x1: i64, x2: i64, y1: i64, y2: i64) -> Self {
        assert!(x1 < x2 && y1 < y2, "rect requires x1 < x2 and y1 < y2");
        Rect { x1, x2, y1, y2 }
    }
}

/// Closed disk with integer center and positive integer radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disk {
    pub cx: i64,
    pub cy: i64,
    pub r: i64,
}

impl Disk {
    pub fn new(cx: i64, cy: i64, r: i64) -> Self {
        assert!(r >= 1, "disk radius must be at least 1");
        Disk { cx, cy, r }
    }
}

/// Position of an oriented point: exact integer Cartesian coordinates, or a
/// polar grid point (integer radius, angle index `theta` meaning
/// `theta · 2π/M₂`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Cart { x: i64, y: i64 },
    Polar { rho: u32, theta: u32 },
}

/// Oriented point: a position plus an orientation given as an angle index
/// over the `M₂`-grid (`phi` meaning `phi · 2π/M₂`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OPoint {
    pub pos: Position,
    pub phi: u32,
}

impl OPoint {
    pub fn cart(x: i64, y: i64, phi: u32) -> Self {
        OPoint {
            pos: Position::Cart { x, y },
            phi,
        }
    }

    /// Polar o-point; the origin is canonicalized to angle index 0 so element
    /// equality is well-defined.
    pub fn polar(rho: u32, theta: u32, phi: u32) -> Self {
        OPoint {
            pos: Position::Polar {
                rho,
                theta: if rho == 0 { 0 } else { theta },
            },
            phi,
        }
    }
}

/// One concrete element of some calculus domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Point(i64),
    Interval(Interval),
    Rect(Rect),
    Disk(Disk),
    OPoint(OPoint),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Point(p) => write!(f, "{p}"),
            Element::Interval(i) => write!(f, "[{},{}]", i.lo, i.hi),
            Element::Rect(r) => write!(f, "[{},{}]x[{},{}]", r.x1, r.x2, r.y1, r.y2),
            Element::Disk(d) => write!(f, "B(({},{}),{})", d.cx, d.cy, d.r),
            Element::OPoint(o) => match o.pos {
                Position::Cart { x, y } => write!(f, "(({x},{y}),phi={})", o.phi),
                Position::Polar { rho, theta } => {
                    write!(f, "((rho={rho},theta={theta}),phi={})", o.phi)
                }
            },
        }
    }
}
