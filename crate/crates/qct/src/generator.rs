//! Monte-Carlo table generation: sample random element triples from a finite
//! subdomain and record the composition triads they realize, until a
//! termination condition stops the run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::calculi::DomainSpec;
use crate::geometry::Element;
use crate::schema::{seed_identity_triads, Triad};
use crate::table::{CompositionTable, GenStats};
use crate::{Error, Result};

/// When to stop sampling. All variants are continuation predicates evaluated
/// against the current [`GenStats`] before each loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TerminationCondition {
    /// Run exactly this many loops.
    MaxLoops(u64),
    /// Stop once no new triad has appeared within the last `w` loops.
    StallWindow(u64),
    /// Stop as soon as the table holds this many triads (for double-checking
    /// a table whose size is known).
    TargetTriads(u64),
    /// Continue only while every member would continue.
    All(Vec<TerminationCondition>),
    /// Continue while any member would continue.
    Any(Vec<TerminationCondition>),
}

impl TerminationCondition {
    /// The paper's two suggested bounds combined: at most 10⁶ loops, stopping
    /// early after 10⁵ loops without a new triad.
    pub fn default_for_unknown() -> Self {
        TerminationCondition::All(vec![
            TerminationCondition::MaxLoops(1_000_000),
            TerminationCondition::StallWindow(100_000),
        ])
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TerminationCondition::MaxLoops(0)
            | TerminationCondition::StallWindow(0)
            | TerminationCondition::TargetTriads(0) => Err(Error::InvalidTermination(
                "limits must be positive".to_string(),
            )),
            TerminationCondition::All(members) | TerminationCondition::Any(members) => {
                if members.is_empty() {
                    return Err(Error::InvalidTermination(
                        "combination must have at least one bound".to_string(),
                    ));
                }
                members.iter().try_for_each(TerminationCondition::validate)
            }
            _ => Ok(()),
        }
    }

    /// Whether another loop should run given the stats so far.
    pub fn should_continue(&self, stats: &GenStats) -> bool {
        match self {
            TerminationCondition::MaxLoops(limit) => stats.loops < *limit,
            TerminationCondition::StallWindow(w) => {
                stats.loops < stats.last_found.saturating_add(*w)
            }
            TerminationCondition::TargetTriads(n) => stats.triads < *n,
            TerminationCondition::All(members) => {
                members.iter().all(|m| m.should_continue(stats))
            }
            TerminationCondition::Any(members) => {
                members.iter().any(|m| m.should_continue(stats))
            }
        }
    }

    /// Compact provenance form, e.g. `max_loops:1000000+stall:100000`.
    pub fn describe(&self) -> String {
        match self {
            TerminationCondition::MaxLoops(n) => format!("max_loops:{n}"),
            TerminationCondition::StallWindow(w) => format!("stall:{w}"),
            TerminationCondition::TargetTriads(n) => format!("target:{n}"),
            TerminationCondition::All(members) => members
                .iter()
                .map(TerminationCondition::describe)
                .collect::<Vec<_>>()
                .join("+"),
            TerminationCondition::Any(members) => members
                .iter()
                .map(TerminationCondition::describe)
                .collect::<Vec<_>>()
                .join("|"),
        }
    }
}

/// Algorithm switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenOptions {
    /// Compute only α, β, γ per triple and derive the reversed relations
    /// through the schema converse instead of relating the pairs again.
    pub use_converse_shortcut: bool,
    /// Seed the identity-involving triads analytically and sample
    /// pairwise-distinct triples.
    ///
    /// Every triad with an identity component has the form ⟨id,β,β⟩,
    /// ⟨α,α,id⟩, or ⟨α,id,α~⟩, so they need not be sampled — but only for
    /// relations the subdomain actually realizes. A customised calculus such
    /// as the four-orientation OPRA₂ grid realizes just a subset of the
    /// schema's relations, so seeds are inserted lazily: the identity's own
    /// triads up front, each other relation's the first time the sampler
    /// observes it.
    pub seed_identity: bool,
    pub record_hits: bool,
    pub record_witnesses: bool,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            use_converse_shortcut: true,
            seed_identity: true,
            record_hits: false,
            record_witnesses: false,
        }
    }
}

fn record_run_provenance(
    table: &mut CompositionTable,
    spec: &DomainSpec,
    psi: &TerminationCondition,
    seed: u64,
    opts: &GenOptions,
    stats: &GenStats,
) {
    table.set_provenance("mode", "generate");
    table.set_provenance("domain", spec.token());
    table.set_provenance("params", spec.params_string());
    table.set_provenance("seed", seed.to_string());
    table.set_provenance("psi", psi.describe());
    table.set_provenance("converse_shortcut", opts.use_converse_shortcut.to_string());
    table.set_provenance("seed_identity", opts.seed_identity.to_string());
    table.set_provenance("hits", opts.record_hits.to_string());
    table.set_provenance("witnesses", opts.record_witnesses.to_string());
    table.set_provenance("loops", stats.loops.to_string());
}

/// One sampling run. Deterministic for fixed (spec, psi, seed, opts).
///
/// Each loop draws a triple (a, b, c), computes α = ρ(a,b), β = ρ(b,c),
/// γ = ρ(a,c) plus the reversed relations, and records all six permutation
/// triads. Every recorded triad is valid by construction, since a concrete
/// triple realizes it.
pub fn generate_ct(
    spec: &DomainSpec,
    psi: &TerminationCondition,
    seed: u64,
    opts: &GenOptions,
) -> Result<(CompositionTable, GenStats)> {
    spec.validate()?;
    psi.validate()?;
    if opts.seed_identity && spec.size() < 3 {
        return Err(Error::DegenerateDomain(format!(
            "domain `{}` has {} elements; pairwise-distinct triples need at least 3",
            spec.token(),
            spec.size()
        )));
    }

    let schema = spec.schema();
    let mut table = CompositionTable::new(&schema);
    if opts.record_hits {
        table.enable_hits();
    }
    if opts.record_witnesses {
        table.enable_witnesses();
    }

    let mut stats = GenStats::default();
    let identity = schema.identity();
    let mut seeded = vec![false; schema.len()];
    let seed_relation = |table: &mut CompositionTable, stats: &mut GenStats, r| {
        let triads = [
            Triad::new(identity, r, r),
            Triad::new(r, r, identity),
            Triad::new(r, identity, schema.converse(r)),
        ];
        for t in triads {
            if table.seed(t) {
                stats.triads += 1;
            }
        }
    };
    if opts.seed_identity {
        seeded[usize::from(identity)] = true;
        seed_relation(&mut table, &mut stats, identity);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let record = |table: &mut CompositionTable,
                      stats: &mut GenStats,
                      t: Triad,
                      elems: &[Element; 3]| {
        let fresh = if opts.record_witnesses {
            table.insert_witnessed(t, elems)
        } else {
            table.insert(t)
        };
        if fresh {
            stats.triads += 1;
            stats.last_found = stats.loops;
        }
    };

    while psi.should_continue(&stats) {
        stats.loops += 1;
        let (a, b, c) = loop {
            let a = spec.sample(&mut rng);
            let b = spec.sample(&mut rng);
            let c = spec.sample(&mut rng);
            if !opts.seed_identity || (a != b && b != c && a != c) {
                break (a, b, c);
            }
        };
        let alpha = spec.relate(&a, &b);
        let beta = spec.relate(&b, &c);
        let gamma = spec.relate(&a, &c);
        let (alpha_c, beta_c, gamma_c) = if opts.use_converse_shortcut {
            (
                schema.converse(alpha),
                schema.converse(beta),
                schema.converse(gamma),
            )
        } else {
            (spec.relate(&b, &a), spec.relate(&c, &b), spec.relate(&c, &a))
        };
        if opts.seed_identity {
            for r in [alpha, beta, gamma, alpha_c, beta_c, gamma_c] {
                if !seeded[usize::from(r)] {
                    seeded[usize::from(r)] = true;
                    seed_relation(&mut table, &mut stats, r);
                }
            }
        }
        // The six permutations of (a, b, c), each paired with the element
        // order that realizes it.
        record(&mut table, &mut stats, Triad::new(alpha, gamma, beta), &[a, b, c]);
        record(&mut table, &mut stats, Triad::new(alpha_c, beta, gamma), &[b, a, c]);
        record(&mut table, &mut stats, Triad::new(gamma, alpha, beta_c), &[a, c, b]);
        record(&mut table, &mut stats, Triad::new(beta, alpha_c, gamma_c), &[b, c, a]);
        record(&mut table, &mut stats, Triad::new(beta_c, gamma_c, alpha_c), &[c, b, a]);
        record(&mut table, &mut stats, Triad::new(gamma_c, beta_c, alpha), &[c, a, b]);
    }

    debug_assert_eq!(stats.triads, table.triad_count());
    verify_witnesses(spec, &table);
    record_run_provenance(&mut table, spec, psi, seed, opts, &stats);
    Ok((table, stats))
}

/// Every stored witness triple must reproduce its triad exactly; a failure
/// here is an implementation bug, not bad input.
fn verify_witnesses(spec: &DomainSpec, table: &CompositionTable) {
    for (t, [a, b, c]) in table.witnesses() {
        let realized = Triad::new(spec.relate(a, b), spec.relate(a, c), spec.relate(b, c));
        assert_eq!(
            realized, *t,
            "witness ({a}, {b}, {c}) does not reproduce its triad"
        );
    }
}

/// Cell-wise union of tables over one schema and domain. Relation content is
/// independent of merge order; provenance records the summed loop count and
/// leaves `last_found` cleared.
pub fn merge_tables(tables: &[CompositionTable]) -> Result<CompositionTable> {
    let first = tables.first().ok_or(Error::EmptyMerge)?;
    let domain = first.provenance().get("domain").cloned();
    for t in &tables[1..] {
        if t.provenance().get("domain") != domain.as_ref() {
            return Err(Error::SchemaMismatch(
                domain.clone().unwrap_or_default(),
                t.provenance().get("domain").cloned().unwrap_or_default(),
            ));
        }
    }
    let loops: u64 = tables
        .iter()
        .filter_map(|t| t.provenance().get("loops").and_then(|l| l.parse::<u64>().ok()))
        .sum();
    let mut merged = CompositionTable::merge(tables)?;
    for key in ["mode", "params", "psi", "converse_shortcut", "seed_identity", "hits", "witnesses"]
    {
        if let Some(v) = first.provenance().get(key) {
            let v = v.clone();
            merged.set_provenance(key, v);
        }
    }
    if let Some(domain) = domain {
        merged.set_provenance("domain", domain);
    }
    merged.set_provenance("loops", loops.to_string());
    merged.set_provenance("merged", tables.len().to_string());
    Ok(merged)
}

/// Derives the shard seed for `shard` of a sharded run from the master seed.
pub fn shard_seed(master: u64, shard: u64) -> u64 {
    // splitmix64 step; decorrelates sequential shard indices.
    let mut z = master ^ shard.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `shards` independent seeded generations and merges them. The merged
/// relation content does not depend on scheduling; stats sum loops, recount
/// triads, and clear `last_found`.
pub fn generate_sharded(
    spec: &DomainSpec,
    psi: &TerminationCondition,
    seed: u64,
    opts: &GenOptions,
    shards: u64,
) -> Result<(CompositionTable, GenStats)> {
    if shards <= 1 {
        return generate_ct(spec, psi, seed, opts);
    }
    let results: Vec<Result<(CompositionTable, GenStats)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..shards)
            .map(|i| scope.spawn(move || generate_ct(spec, psi, shard_seed(seed, i), opts)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("shard thread panicked"))
            .collect()
    });
    let mut tables = Vec::with_capacity(results.len());
    for r in results {
        tables.push(r?.0);
    }
    let mut merged = merge_tables(&tables)?;
    merged.set_provenance("seed", seed.to_string());
    merged.set_provenance("shards", shards.to_string());
    let stats = GenStats {
        loops: tables
            .iter()
            .filter_map(|t| t.provenance().get("loops").and_then(|l| l.parse::<u64>().ok()))
            .sum(),
        triads: merged.triad_count(),
        last_found: 0,
    };
    Ok((merged, stats))
}
