//! Concrete calculi: schemas, JEPD classification functions ρ(x, y), and
//! uniform samplers over finite subdomains.

pub mod linear;
pub mod opra;
pub mod regions;

use std::collections::BTreeMap;

use rand::Rng;

use crate::geometry::{Disk, Element, Interval, OPoint, Rect};
use crate::schema::{CalculusSchema, RelIx, Schema};
use crate::{Error, Result};

pub use linear::{ia_relate, indu_relate, pa_relate};
pub use opra::{opra_relate, opra_sector};
pub use regions::{rcc8_relate_disk, rcc8_relate_rect};

/// Builds the schema for a calculus token: `pa`, `ia`, `indu`, `rcc8`, or
/// `opra<m>`.
pub fn build_schema(token: &str) -> Result<Schema> {
    match token {
        "pa" => CalculusSchema::new(
            "pa",
            linear::PA_SYMBOLS.iter().map(|s| s.to_string()).collect(),
            vec![2, 1, 0],
            linear::PA_EQ,
        ),
        "ia" => CalculusSchema::new(
            "ia",
            linear::IA_SYMBOLS.iter().map(|s| s.to_string()).collect(),
            (0..13).map(|i| 12 - i).collect(),
            linear::IA_EQ,
        ),
        "indu" => CalculusSchema::new(
            "indu",
            linear::INDU_SYMBOLS.iter().map(|s| s.to_string()).collect(),
            (0..25).map(|i| 24 - i).collect(),
            12, // eq=
        ),
        "rcc8" => CalculusSchema::new(
            "rcc8",
            regions::RCC8_SYMBOLS.iter().map(|s| s.to_string()).collect(),
            regions::RCC8_CONVERSE.to_vec(),
            regions::RCC8_EQ,
        ),
        _ => {
            let m: u32 = token
                .strip_prefix("opra")
                .and_then(|rest| rest.parse().ok())
                .filter(|&m| (1..=16).contains(&m))
                .ok_or_else(|| Error::UnknownCalculus(token.to_string()))?;
            CalculusSchema::new(
                token,
                opra::opra_symbols(m),
                opra::opra_converse(m),
                0, // same-position s = 0
            )
        }
    }
}

/// A finite subdomain of one calculus, identified by a domain token and its
/// size parameters. Domain tokens appear verbatim in CLI flags and in table
/// provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainSpec {
    /// Integer points {0, …, M−1}.
    Pa { size: u32 },
    /// Intervals with integer endpoints within [0, M).
    Ia { size: u32 },
    /// Same interval domain, classified by INDU.
    Indu { size: u32 },
    /// Axis-parallel rectangles with corners in [0, M)².
    Rcc8Rect { size: u32 },
    /// Closed disks with centers in [0, M]² and radii in [1, M].
    Rcc8Disk { size: u32 },
    /// O-points with integer coordinates in [−M₁, M₁]² and orientations on
    /// the M₂ angle grid.
    OpraCart { m: u32, m1: u32, m2: u32 },
    /// O-points with integer radius in [0, M₁], positions and orientations on
    /// the M₂ angle grid.
    OpraPolar { m: u32, m1: u32, m2: u32 },
    /// The customised OPRA₂ restriction to ℤ² with the four axis
    /// orientations.
    Opra2Grid4 { m1: u32 },
}

impl DomainSpec {
    /// Parses a domain token plus `M=…` / `M1=…,M2=…` parameters.
    pub fn parse(calculus: &str, params: &BTreeMap<String, u32>) -> Result<DomainSpec> {
        let m_param = || {
            params
                .get("M")
                .copied()
                .ok_or_else(|| Error::InvalidDomain(format!("calculus `{calculus}` needs M=<n>")))
        };
        let m12_params = || -> Result<(u32, u32)> {
            match (params.get("M1"), params.get("M2")) {
                (Some(&m1), Some(&m2)) => Ok((m1, m2)),
                _ => Err(Error::InvalidDomain(format!(
                    "calculus `{calculus}` needs M1=<n>,M2=<n>"
                ))),
            }
        };
        let spec = match calculus {
            "pa" => DomainSpec::Pa { size: m_param()? },
            "ia" => DomainSpec::Ia { size: m_param()? },
            "indu" => DomainSpec::Indu { size: m_param()? },
            "rcc8-rect" => DomainSpec::Rcc8Rect { size: m_param()? },
            "rcc8-disk" => DomainSpec::Rcc8Disk { size: m_param()? },
            "opra2-grid4" => DomainSpec::Opra2Grid4 {
                m1: params.get("M1").or_else(|| params.get("M")).copied().ok_or_else(
                    || Error::InvalidDomain("opra2-grid4 needs M1=<n>".to_string()),
                )?,
            },
            _ => {
                let rest = calculus
                    .strip_prefix("opra")
                    .ok_or_else(|| Error::UnknownCalculus(calculus.to_string()))?;
                let (digits, coords) = rest
                    .split_once('-')
                    .ok_or_else(|| Error::UnknownCalculus(calculus.to_string()))?;
                let m: u32 = digits
                    .parse()
                    .ok()
                    .filter(|&m| (1..=16).contains(&m))
                    .ok_or_else(|| Error::UnknownCalculus(calculus.to_string()))?;
                let (m1, m2) = m12_params()?;
                match coords {
                    "cart" => DomainSpec::OpraCart { m, m1, m2 },
                    "polar" => DomainSpec::OpraPolar { m, m1, m2 },
                    _ => return Err(Error::UnknownCalculus(calculus.to_string())),
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the size parameters admit at least one element.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::DegenerateDomain(msg));
        match *self {
            DomainSpec::Pa { size } if size == 0 => fail("pa needs M >= 1".into()),
            DomainSpec::Ia { size } | DomainSpec::Indu { size } if size < 2 => {
                fail(format!("{} needs M >= 2 to form an interval", self.token()))
            }
            DomainSpec::Rcc8Rect { size } if size < 2 => {
                fail("rcc8-rect needs M >= 2 to form a rectangle".into())
            }
            DomainSpec::Rcc8Disk { size } if size == 0 => fail("rcc8-disk needs M >= 1".into()),
            DomainSpec::OpraCart { m1, m2, .. } | DomainSpec::OpraPolar { m1, m2, .. }
                if m1 == 0 || m2 == 0 =>
            {
                fail(format!("{} needs positive M1 and M2", self.token()))
            }
            DomainSpec::Opra2Grid4 { m1 } if m1 == 0 => {
                fail("opra2-grid4 needs positive M1".into())
            }
            _ => Ok(()),
        }
    }

    /// The domain token as used in CLI flags and provenance.
    pub fn token(&self) -> String {
        match self {
            DomainSpec::Pa { .. } => "pa".into(),
            DomainSpec::Ia { .. } => "ia".into(),
            DomainSpec::Indu { .. } => "indu".into(),
            DomainSpec::Rcc8Rect { .. } => "rcc8-rect".into(),
            DomainSpec::Rcc8Disk { .. } => "rcc8-disk".into(),
            DomainSpec::OpraCart { m, .. } => format!("opra{m}-cart"),
            DomainSpec::OpraPolar { m, .. } => format!("opra{m}-polar"),
            DomainSpec::Opra2Grid4 { .. } => "opra2-grid4".into(),
        }
    }

    /// Size parameters in canonical `key=value` form.
    pub fn params_string(&self) -> String {
        match *self {
            DomainSpec::Pa { size }
            | DomainSpec::Ia { size }
            | DomainSpec::Indu { size }
            | DomainSpec::Rcc8Rect { size }
            | DomainSpec::Rcc8Disk { size } => format!("M={size}"),
            DomainSpec::OpraCart { m1, m2, .. } | DomainSpec::OpraPolar { m1, m2, .. } => {
                format!("M1={m1},M2={m2}")
            }
            DomainSpec::Opra2Grid4 { m1 } => format!("M1={m1}"),
        }
    }

    /// Token of the schema this domain classifies into; distinct domains of
    /// one calculus (e.g. `rcc8-rect` and `rcc8-disk`) share a schema so
    /// their tables can be compared.
    pub fn schema_token(&self) -> String {
        match self {
            DomainSpec::Pa { .. } => "pa".into(),
            DomainSpec::Ia { .. } => "ia".into(),
            DomainSpec::Indu { .. } => "indu".into(),
            DomainSpec::Rcc8Rect { .. } | DomainSpec::Rcc8Disk { .. } => "rcc8".into(),
            DomainSpec::OpraCart { m, .. } | DomainSpec::OpraPolar { m, .. } => format!("opra{m}"),
            DomainSpec::Opra2Grid4 { .. } => "opra2".into(),
        }
    }

    pub fn schema(&self) -> Schema {
        build_schema(&self.schema_token()).expect("domain spec implies a known schema")
    }

    /// Number of distinct canonical elements.
    pub fn size(&self) -> u128 {
        let pairs = |m: u128| m * (m - 1) / 2;
        match *self {
            DomainSpec::Pa { size } => u128::from(size),
            DomainSpec::Ia { size } | DomainSpec::Indu { size } => pairs(u128::from(size)),
            DomainSpec::Rcc8Rect { size } => pairs(u128::from(size)).pow(2),
            DomainSpec::Rcc8Disk { size } => {
                let m = u128::from(size);
                (m + 1) * (m + 1) * m
            }
            DomainSpec::OpraCart { m1, m2, .. } => {
                let side = 2 * u128::from(m1) + 1;
                side * side * u128::from(m2)
            }
            DomainSpec::OpraPolar { m1, m2, .. } => {
                let m2 = u128::from(m2);
                (1 + u128::from(m1) * m2) * m2
            }
            DomainSpec::Opra2Grid4 { m1 } => {
                let side = 2 * u128::from(m1) + 1;
                side * side * 4
            }
        }
    }

    /// Draws one element uniformly over the domain's canonical encodings.
    ///
    /// Intervals and rectangle edges draw two distinct grid values and order
    /// them, which is uniform over valid pairs. Polar o-points draw the
    /// radius, angle, and orientation independently, so the canonicalized
    /// origin is slightly oversampled relative to other positions.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Element {
        match *self {
            DomainSpec::Pa { size } => Element::Point(rng.gen_range(0..i64::from(size))),
            DomainSpec::Ia { size } | DomainSpec::Indu { size } => {
                let (lo, hi) = distinct_ordered_pair(rng, size);
                Element::Interval(Interval::new(lo, hi))
            }
            DomainSpec::Rcc8Rect { size } => {
                let (x1, x2) = distinct_ordered_pair(rng, size);
                let (y1, y2) = distinct_ordered_pair(rng, size);
                Element::Rect(Rect::new(x1, x2, y1, y2))
            }
            DomainSpec::Rcc8Disk { size } => {
                let m = i64::from(size);
                Element::Disk(Disk::new(
                    rng.gen_range(0..=m),
                    rng.gen_range(0..=m),
                    rng.gen_range(1..=m),
                ))
            }
            DomainSpec::OpraCart { m1, m2, .. } => {
                let ext = i64::from(m1);
                Element::OPoint(OPoint::cart(
                    rng.gen_range(-ext..=ext),
                    rng.gen_range(-ext..=ext),
                    rng.gen_range(0..m2),
                ))
            }
            DomainSpec::OpraPolar { m1, m2, .. } => {
                let rho = rng.gen_range(0..=m1);
                let theta = rng.gen_range(0..m2);
                let phi = rng.gen_range(0..m2);
                Element::OPoint(OPoint::polar(rho, theta, phi))
            }
            DomainSpec::Opra2Grid4 { m1 } => {
                let ext = i64::from(m1);
                Element::OPoint(OPoint::cart(
                    rng.gen_range(-ext..=ext),
                    rng.gen_range(-ext..=ext),
                    rng.gen_range(0..4),
                ))
            }
        }
    }

    /// All distinct canonical elements in a deterministic order.
    pub fn enumerate(&self) -> Vec<Element> {
        let mut out = Vec::new();
        match *self {
            DomainSpec::Pa { size } => {
                out.extend((0..i64::from(size)).map(Element::Point));
            }
            DomainSpec::Ia { size } | DomainSpec::Indu { size } => {
                let m = i64::from(size);
                for lo in 0..m {
                    for hi in lo + 1..m {
                        out.push(Element::Interval(Interval::new(lo, hi)));
                    }
                }
            }
            DomainSpec::Rcc8Rect { size } => {
                let m = i64::from(size);
                for x1 in 0..m {
                    for x2 in x1 + 1..m {
                        for y1 in 0..m {
                            for y2 in y1 + 1..m {
                                out.push(Element::Rect(Rect::new(x1, x2, y1, y2)));
                            }
                        }
                    }
                }
            }
            DomainSpec::Rcc8Disk { size } => {
                let m = i64::from(size);
                for cx in 0..=m {
                    for cy in 0..=m {
                        for r in 1..=m {
                            out.push(Element::Disk(Disk::new(cx, cy, r)));
                        }
                    }
                }
            }
            DomainSpec::OpraCart { m1, m2, .. } => {
                let ext = i64::from(m1);
                for x in -ext..=ext {
                    for y in -ext..=ext {
                        for phi in 0..m2 {
                            out.push(Element::OPoint(OPoint::cart(x, y, phi)));
                        }
                    }
                }
            }
            DomainSpec::OpraPolar { m1, m2, .. } => {
                for phi in 0..m2 {
                    out.push(Element::OPoint(OPoint::polar(0, 0, phi)));
                }
                for rho in 1..=m1 {
                    for theta in 0..m2 {
                        for phi in 0..m2 {
                            out.push(Element::OPoint(OPoint::polar(rho, theta, phi)));
                        }
                    }
                }
            }
            DomainSpec::Opra2Grid4 { m1 } => {
                let ext = i64::from(m1);
                for x in -ext..=ext {
                    for y in -ext..=ext {
                        for phi in 0..4 {
                            out.push(Element::OPoint(OPoint::cart(x, y, phi)));
                        }
                    }
                }
            }
        }
        debug_assert_eq!(out.len() as u128, self.size());
        out
    }

    /// The basic relation between two elements of this domain.
    ///
    /// Panics if the elements do not belong to this kind of domain; elements
    /// only ever travel together with the spec that produced them.
    pub fn relate(&self, a: &Element, b: &Element) -> RelIx {
        match (self, a, b) {
            (DomainSpec::Pa { .. }, Element::Point(a), Element::Point(b)) => pa_relate(*a, *b),
            (DomainSpec::Ia { .. }, Element::Interval(a), Element::Interval(b)) => {
                ia_relate(*a, *b)
            }
            (DomainSpec::Indu { .. }, Element::Interval(a), Element::Interval(b)) => {
                indu_relate(*a, *b)
            }
            (DomainSpec::Rcc8Rect { .. }, Element::Rect(a), Element::Rect(b)) => {
                rcc8_relate_rect(*a, *b)
            }
            (DomainSpec::Rcc8Disk { .. }, Element::Disk(a), Element::Disk(b)) => {
                rcc8_relate_disk(*a, *b)
            }
            (DomainSpec::OpraCart { m, m2, .. }, Element::OPoint(a), Element::OPoint(b))
            | (DomainSpec::OpraPolar { m, m2, .. }, Element::OPoint(a), Element::OPoint(b)) => {
                opra_relate(*m, *m2, a, b)
            }
            (DomainSpec::Opra2Grid4 { .. }, Element::OPoint(a), Element::OPoint(b)) => {
                opra_relate(2, 4, a, b)
            }
            _ => panic!(
                "element kind does not match domain `{}`: {a} / {b}",
                self.token()
            ),
        }
    }
}

/// Two distinct values from [0, m), ordered. Uniform over the m(m−1)/2
/// unordered pairs without a rejection loop over ordered pairs.
fn distinct_ordered_pair<R: Rng>(rng: &mut R, m: u32) -> (i64, i64) {
    let m = i64::from(m);
    let a = rng.gen_range(0..m);
    let mut b = rng.gen_range(0..m - 1);
    if b >= a {
        b += 1;
    }
    (a.min(b), a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(pairs: &[(&str, u32)]) -> BTreeMap<String, u32> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn schema_sizes() {
        assert_eq!(build_schema("pa").unwrap().len(), 3);
        assert_eq!(build_schema("ia").unwrap().len(), 13);
        assert_eq!(build_schema("indu").unwrap().len(), 25);
        assert_eq!(build_schema("rcc8").unwrap().len(), 8);
        assert_eq!(build_schema("opra1").unwrap().len(), 20);
        assert_eq!(build_schema("opra2").unwrap().len(), 72);
    }

    #[test]
    fn unknown_calculus_rejected() {
        assert!(build_schema("rcc5").is_err());
        assert!(build_schema("opra0").is_err());
        assert!(build_schema("opra").is_err());
    }

    #[test]
    fn schema_identities() {
        for (tok, id_sym) in [
            ("pa", "="),
            ("ia", "eq"),
            ("indu", "eq="),
            ("rcc8", "EQ"),
            ("opra2", "s_0"),
        ] {
            let schema = build_schema(tok).unwrap();
            assert_eq!(schema.symbol(schema.identity()), id_sym);
        }
    }

    #[test]
    fn domain_sizes() {
        let ia6 = DomainSpec::parse("ia", &params(&[("M", 6)])).unwrap();
        assert_eq!(ia6.size(), 15);
        let ia4 = DomainSpec::parse("ia", &params(&[("M", 4)])).unwrap();
        assert_eq!(ia4.size(), 6);
        let rect6 = DomainSpec::parse("rcc8-rect", &params(&[("M", 6)])).unwrap();
        assert_eq!(rect6.size(), 225);
        let polar = DomainSpec::parse("opra1-polar", &params(&[("M1", 2), ("M2", 8)])).unwrap();
        assert_eq!(polar.size(), 136);
        let pa3 = DomainSpec::parse("pa", &params(&[("M", 3)])).unwrap();
        assert_eq!(pa3.size(), 3);
    }

    #[test]
    fn enumerate_matches_size_and_is_distinct() {
        let specs = [
            DomainSpec::Pa { size: 4 },
            DomainSpec::Ia { size: 5 },
            DomainSpec::Rcc8Rect { size: 4 },
            DomainSpec::Rcc8Disk { size: 3 },
            DomainSpec::OpraCart { m: 1, m1: 2, m2: 4 },
            DomainSpec::OpraPolar { m: 2, m1: 2, m2: 4 },
            DomainSpec::Opra2Grid4 { m1: 2 },
        ];
        for spec in specs {
            let mut elems = spec.enumerate();
            assert_eq!(elems.len() as u128, spec.size(), "{}", spec.token());
            elems.sort();
            elems.dedup();
            assert_eq!(elems.len() as u128, spec.size(), "{}", spec.token());
        }
    }

    #[test]
    fn degenerate_domains_rejected() {
        assert!(DomainSpec::parse("ia", &params(&[("M", 1)])).is_err());
        assert!(DomainSpec::parse("rcc8-rect", &params(&[("M", 1)])).is_err());
        assert!(DomainSpec::parse("pa", &params(&[("M", 0)])).is_err());
        assert!(DomainSpec::parse("opra2-cart", &params(&[("M1", 0), ("M2", 8)])).is_err());
    }

    #[test]
    fn parse_roundtrips_token_and_params() {
        for (tok, ps) in [
            ("ia", params(&[("M", 8)])),
            ("rcc8-disk", params(&[("M", 5)])),
            ("opra2-polar", params(&[("M1", 4), ("M2", 16)])),
            ("opra2-grid4", params(&[("M1", 6)])),
        ] {
            let spec = DomainSpec::parse(tok, &ps).unwrap();
            assert_eq!(spec.token(), tok);
        }
    }

    #[test]
    fn sampled_elements_are_in_domain() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let spec = DomainSpec::Ia { size: 6 };
        let all = spec.enumerate();
        for _ in 0..1000 {
            let e = spec.sample(&mut rng);
            assert!(all.contains(&e));
        }
    }
}
