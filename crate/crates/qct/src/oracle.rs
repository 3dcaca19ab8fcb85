//! Exhaustive ground truth: enumerate every element triple of a finite
//! subdomain and record the exact composition table relative to it.
//!
//! The result equals the true table of the calculus precisely when the
//! subdomain is 3-complete.

use crate::calculi::DomainSpec;
use crate::geometry::Element;
use crate::schema::{RelIx, Triad};
use crate::table::CompositionTable;
use crate::{Error, Result};

/// Hard cap on |D|³ for exhaustive enumeration. A guard on input size rather
/// than a timer, so runs stay deterministic.
pub const DEFAULT_TRIPLE_BUDGET: u128 = 2_000_000_000;

/// All distinct canonical elements of the subdomain, in deterministic order.
pub fn enumerate_elements(spec: &DomainSpec) -> Result<Vec<Element>> {
    spec.validate()?;
    Ok(spec.enumerate())
}

/// Exact composition table of the calculus restricted to the subdomain,
/// under the default triple budget.
pub fn enumerate_ct(spec: &DomainSpec) -> Result<CompositionTable> {
    enumerate_ct_with_budget(spec, DEFAULT_TRIPLE_BUDGET)
}

/// As [`enumerate_ct`], with an explicit budget on |D|³.
///
/// Relations are computed once per ordered pair into a |D|×|D| matrix; the
/// triple scan then only does table lookups, which is what keeps domains with
/// 10⁷–10⁹ triples tractable.
pub fn enumerate_ct_with_budget(spec: &DomainSpec, budget: u128) -> Result<CompositionTable> {
    spec.validate()?;
    let elements = spec.enumerate();
    let d = elements.len();
    let needed = (d as u128).pow(3);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }

    let mut matrix: Vec<RelIx> = Vec::with_capacity(d * d);
    for a in &elements {
        for b in &elements {
            matrix.push(spec.relate(a, b));
        }
    }

    let schema = spec.schema();
    let mut table = CompositionTable::new(&schema);
    table.set_provenance("mode", "enumerate");
    table.set_provenance("domain", spec.token());
    table.set_provenance("params", spec.params_string());
    for i in 0..d {
        for j in 0..d {
            let alpha = matrix[i * d + j];
            for k in 0..d {
                let beta = matrix[j * d + k];
                let gamma = matrix[i * d + k];
                table.insert(Triad::new(alpha, gamma, beta));
            }
        }
    }
    debug_assert!(table.is_permutation_closed());
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::build_schema;
    use crate::schema::RelationSet;

    #[test]
    fn element_counts() {
        let ia6 = DomainSpec::Ia { size: 6 };
        assert_eq!(enumerate_elements(&ia6).unwrap().len(), 15);
        let polar = DomainSpec::OpraPolar { m: 1, m1: 2, m2: 8 };
        assert_eq!(enumerate_elements(&polar).unwrap().len(), 136);
        let pa3 = DomainSpec::Pa { size: 3 };
        assert_eq!(enumerate_elements(&pa3).unwrap().len(), 3);
    }

    #[test]
    fn pa_oracle_reproduces_point_algebra_table() {
        let table = enumerate_ct(&DomainSpec::Pa { size: 3 }).unwrap();
        assert_eq!(table.triad_count(), 13);
        let pa = build_schema("pa").unwrap();
        let (lt, eq, gt) = (0, 1, 2);
        let expect = |a: RelIx, b: RelIx, members: &[RelIx]| {
            assert_eq!(
                table.cell(a, b),
                RelationSet::from_indices(&pa, members.iter().copied()),
                "cell({}, {})",
                pa.symbol(a),
                pa.symbol(b)
            );
        };
        expect(lt, lt, &[lt]);
        expect(lt, eq, &[lt]);
        expect(lt, gt, &[lt, eq, gt]);
        expect(eq, lt, &[lt]);
        expect(eq, eq, &[eq]);
        expect(eq, gt, &[gt]);
        expect(gt, lt, &[lt, eq, gt]);
        expect(gt, eq, &[gt]);
        expect(gt, gt, &[gt]);
    }

    #[test]
    fn ia_oracle_counts_for_small_domains() {
        assert_eq!(
            enumerate_ct(&DomainSpec::Ia { size: 4 }).unwrap().triad_count(),
            139
        );
        assert_eq!(
            enumerate_ct(&DomainSpec::Ia { size: 5 }).unwrap().triad_count(),
            319
        );
    }

    #[test]
    fn budget_guard_trips() {
        let spec = DomainSpec::Rcc8Rect { size: 6 };
        match enumerate_ct_with_budget(&spec, 1000) {
            Err(Error::BudgetExceeded { needed, budget }) => {
                assert_eq!(needed, 225u128.pow(3));
                assert_eq!(budget, 1000);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn superset_domain_contains_smaller_ia_table() {
        let small = enumerate_ct(&DomainSpec::Ia { size: 4 }).unwrap();
        let large = enumerate_ct(&DomainSpec::Ia { size: 5 }).unwrap();
        for t in small.triads() {
            assert!(large.contains(t));
        }
    }
}
