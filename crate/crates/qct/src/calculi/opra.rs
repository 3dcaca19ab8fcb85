//! Oriented-point relation algebra OPRA_m: sector classification and
//! relation encoding.
//!
//! Around an o-point, the 2m rays at angles k·π/m (counted counterclockwise
//! from the point's own orientation) get even sector index 2k, and the open
//! section between ray k and ray k+1 gets odd index 2k+1, for 4m sectors in
//! total. The relation between two o-points at distinct positions is the pair
//! (s, t) of sector indices each point assigns the other; coincident o-points
//! are related by the single sector s in which the second orientation lies.
//! That yields 4m(4m+1) basic relations.
//!
//! Positions are exact grid points but classification evaluates angles in
//! floating point; an angle within [`RAY_EPS`] of a ray snaps to the ray. For
//! the grid extents used here, genuinely off-ray angles differ from ray
//! angles by far more than the tolerance, so the classification is exact in
//! effect.

use std::f64::consts::{PI, TAU};

use crate::geometry::{OPoint, Position};
use crate::schema::RelIx;

/// Angular tolerance for snapping to a ray, in radians.
pub const RAY_EPS: f64 = 1e-9;

/// Angle of grid index `k` over an `m2`-step circle.
#[inline]
pub fn grid_angle(k: u32, m2: u32) -> f64 {
    f64::from(k) * TAU / f64::from(m2)
}

/// Sector index in [0, 4m) of the direction `delta` (radians, relative to
/// the own orientation).
pub fn opra_sector(m: u32, delta: f64) -> u32 {
    let rays = 2 * m;
    let step = PI / f64::from(m);
    let delta = delta.rem_euclid(TAU);
    let nearest = (delta / step).round();
    if (delta - nearest * step).abs() <= RAY_EPS {
        return 2 * (nearest as u32 % rays);
    }
    let below = (delta / step).floor() as u32;
    2 * (below % rays) + 1
}

/// Exact planar coordinates of a position; polar grid points expand through
/// the angle grid.
#[inline]
fn coords(pos: Position, m2: u32) -> (f64, f64) {
    match pos {
        Position::Cart { x, y } => (x as f64, y as f64),
        Position::Polar { rho, theta } => {
            let ang = grid_angle(theta, m2);
            (f64::from(rho) * ang.cos(), f64::from(rho) * ang.sin())
        }
    }
}

/// Number of basic OPRA_m relations: 4m same-position ones plus 16m² pairs.
pub fn opra_relation_count(m: u32) -> usize {
    let fm = 4 * m as usize;
    fm * (fm + 1)
}

/// Encodes a same-position relation; the identity (s = 0) gets index 0.
#[inline]
pub fn opra_same_index(m: u32, s: u32) -> RelIx {
    debug_assert!(s < 4 * m);
    s as RelIx
}

/// Encodes a two-position relation (s, t).
#[inline]
pub fn opra_pair_index(m: u32, s: u32, t: u32) -> RelIx {
    let fm = 4 * m;
    debug_assert!(s < fm && t < fm);
    (fm + s * fm + t) as RelIx
}

/// Decodes a relation index into `(s, Some(t))` for pairs or `(s, None)` for
/// same-position relations.
pub fn opra_decode(m: u32, ix: RelIx) -> (u32, Option<u32>) {
    let fm = 4 * m;
    let ix = u32::from(ix);
    if ix < fm {
        (ix, None)
    } else {
        let rest = ix - fm;
        (rest / fm, Some(rest % fm))
    }
}

/// Relation between two o-points over the `m2` orientation grid.
pub fn opra_relate(m: u32, m2: u32, a: &OPoint, b: &OPoint) -> RelIx {
    if a.pos == b.pos {
        // Orientation difference is an exact grid step.
        let diff = (b.phi + m2 - a.phi) % m2;
        return opra_same_index(m, opra_sector(m, grid_angle(diff, m2)));
    }
    let (ax, ay) = coords(a.pos, m2);
    let (bx, by) = coords(b.pos, m2);
    let ang_ab = (by - ay).atan2(bx - ax);
    let s = opra_sector(m, ang_ab - grid_angle(a.phi, m2));
    let t = opra_sector(m, ang_ab + PI - grid_angle(b.phi, m2));
    opra_pair_index(m, s, t)
}

/// Builds the OPRA_m symbol list: `s_0 … s_{4m-1}` for the same-position
/// block, then `s_t` pairs in lexicographic order.
pub fn opra_symbols(m: u32) -> Vec<String> {
    let fm = 4 * m;
    let mut symbols = Vec::with_capacity(opra_relation_count(m));
    for s in 0..fm {
        symbols.push(format!("s_{s}"));
    }
    for s in 0..fm {
        for t in 0..fm {
            symbols.push(format!("{s}_{t}"));
        }
    }
    symbols
}

/// Converse permutation: pairs swap (s, t) ↦ (t, s); a same-position sector
/// reflects to (4m − s) mod 4m.
pub fn opra_converse(m: u32) -> Vec<RelIx> {
    let fm = 4 * m;
    let mut conv = Vec::with_capacity(opra_relation_count(m));
    for s in 0..fm {
        conv.push(opra_same_index(m, (fm - s) % fm));
    }
    for s in 0..fm {
        for t in 0..fm {
            conv.push(opra_pair_index(m, t, s));
        }
    }
    conv
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn sector_m2_examples() {
        assert_eq!(opra_sector(2, 0.0), 0);
        assert_eq!(opra_sector(2, PI / 4.0), 1);
        assert_eq!(opra_sector(2, PI), 4);
        assert_eq!(opra_sector(2, FRAC_PI_2 - 1e-12), 2);
        assert_eq!(opra_sector(2, 7.0 * PI / 4.0), 7);
        assert_eq!(opra_sector(2, -PI / 4.0), 7);
        assert_eq!(opra_sector(2, TAU - 1e-12), 0);
    }

    #[test]
    fn relate_collinear_pair() {
        let a = OPoint::cart(0, 0, 0);
        let b = OPoint::cart(1, 0, 0);
        let ix = opra_relate(2, 8, &a, &b);
        assert_eq!(opra_decode(2, ix), (0, Some(4)));
    }

    #[test]
    fn relate_same_position_left_ray() {
        // B's orientation is π/2 counterclockwise of A's: A's left ray, s = 2.
        let a = OPoint::cart(0, 0, 0);
        let b = OPoint::cart(0, 0, 2);
        let ix = opra_relate(2, 8, &a, &b);
        assert_eq!(opra_decode(2, ix), (2, None));
    }

    #[test]
    fn relate_diagonal_pair() {
        let a = OPoint::cart(0, 0, 0);
        let b = OPoint::cart(1, 1, 0);
        let ix = opra_relate(2, 8, &a, &b);
        assert_eq!(opra_decode(2, ix), (1, Some(5)));
    }

    #[test]
    fn relation_count_matches_formula() {
        assert_eq!(opra_relation_count(1), 20);
        assert_eq!(opra_relation_count(2), 72);
        assert_eq!(opra_relation_count(3), 156);
        assert_eq!(opra_relation_count(4), 272);
    }

    #[test]
    fn converse_is_involution() {
        for m in 1..=4 {
            let conv = opra_converse(m);
            for (i, &c) in conv.iter().enumerate() {
                assert_eq!(usize::from(conv[usize::from(c)]), i);
            }
        }
    }

    #[test]
    fn acute_triangle_realizes_the_polar_only_triad() {
        // Equilateral (hence acute) triangle on the 60°-grid with each
        // orientation aimed exactly at the next vertex: relations (0,1),
        // (0,1), (1,0) — the configuration with no Cartesian-grid
        // realization.
        let m2 = 6;
        let a = OPoint::polar(0, 0, 0);
        let b = OPoint::polar(1, 0, 2); // at angle 0°, oriented 120°
        let c = OPoint::polar(1, 1, 4); // at angle 60°, oriented 240°
        let ab = opra_decode(2, opra_relate(2, m2, &a, &b));
        let bc = opra_decode(2, opra_relate(2, m2, &b, &c));
        let ac = opra_decode(2, opra_relate(2, m2, &a, &c));
        assert_eq!(ab, (0, Some(1)));
        assert_eq!(bc, (0, Some(1)));
        assert_eq!(ac, (1, Some(0)));
    }
}
