//! Composition tables: an n×n grid of relation sets, with optional per-triad
//! hit counters, witness triples, and generation provenance.

use std::collections::{BTreeMap, HashMap};

use crate::geometry::Element;
use crate::schema::{triad_permutations, RelIx, RelationSet, Schema, Triad};
use crate::{Error, Result};

/// Counters reported by a generation or enumeration run.
///
/// `loops` is the number of sampling loops executed, `triads` the number of
/// distinct triads in the produced table, and `last_found` the loop at which
/// the newest triad was first recorded (0 if none was found by sampling, or
/// after a merge).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenStats {
    pub loops: u64,
    pub triads: u64,
    pub last_found: u64,
}

impl std::fmt::Display for GenStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Loop={} Triad={} LastFound={}",
            self.loops, self.triads, self.last_found
        )
    }
}

/// A weak composition table. Cell (α, β) holds every basic γ recorded for the
/// triad ⟨α, γ, β⟩.
#[derive(Debug, Clone)]
pub struct CompositionTable {
    schema: Schema,
    words_per_cell: usize,
    bits: Vec<u64>,
    hits: Option<Vec<u64>>,
    witnesses: Option<HashMap<Triad, [Element; 3]>>,
    provenance: BTreeMap<String, String>,
}

impl CompositionTable {
    pub fn new(schema: &Schema) -> Self {
        let n = schema.len();
        let words_per_cell = schema.words_per_set();
        CompositionTable {
            schema: schema.clone(),
            words_per_cell,
            bits: vec![0; n * n * words_per_cell],
            hits: None,
            witnesses: None,
            provenance: BTreeMap::new(),
        }
    }

    /// Enables per-triad hit counters (64-bit, saturating).
    pub fn enable_hits(&mut self) {
        let n = self.schema.len();
        self.hits.get_or_insert_with(|| vec![0; n * n * n]);
    }

    /// Enables witness storage; the first element triple that instantiates a
    /// triad is kept.
    pub fn enable_witnesses(&mut self) {
        self.witnesses.get_or_insert_with(HashMap::new);
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    #[inline]
    fn cell_base(&self, alpha: RelIx, beta: RelIx) -> usize {
        (usize::from(alpha) * self.schema.len() + usize::from(beta)) * self.words_per_cell
    }

    /// Records a triad: sets the γ bit in cell (α, β) and bumps its hit
    /// counter if counting is enabled. Returns true iff the bit was newly
    /// set.
    pub fn insert(&mut self, t: Triad) -> bool {
        debug_assert!(t.valid_for(&self.schema));
        let base = self.cell_base(t.alpha, t.beta);
        let g = usize::from(t.gamma);
        let word = &mut self.bits[base + g / 64];
        let mask = 1u64 << (g % 64);
        let fresh = *word & mask == 0;
        *word |= mask;
        if let Some(hits) = &mut self.hits {
            let n = self.schema.len();
            let ix = (usize::from(t.alpha) * n + usize::from(t.gamma)) * n + usize::from(t.beta);
            hits[ix] = hits[ix].saturating_add(1);
        }
        fresh
    }

    /// Records a triad obtained analytically rather than from an element
    /// triple: membership is set but no hit is counted. Returns true iff the
    /// triad was newly recorded.
    pub fn seed(&mut self, t: Triad) -> bool {
        debug_assert!(t.valid_for(&self.schema));
        let base = self.cell_base(t.alpha, t.beta);
        let g = usize::from(t.gamma);
        let word = &mut self.bits[base + g / 64];
        let mask = 1u64 << (g % 64);
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    /// Sets membership and, when counting is enabled, writes the counter
    /// directly. Deserialization uses this to restore tables bit-exactly,
    /// including zero-hit entries such as seeded identity triads.
    pub(crate) fn restore(&mut self, t: Triad, hit_count: Option<u64>) {
        self.seed(t);
        if let (Some(hits), Some(count)) = (&mut self.hits, hit_count) {
            let n = self.schema.len();
            let ix = (usize::from(t.alpha) * n + usize::from(t.gamma)) * n + usize::from(t.beta);
            hits[ix] = count;
        }
    }

    /// [`insert`](Self::insert) plus witness capture on first insertion.
    pub fn insert_witnessed(&mut self, t: Triad, elements: &[Element; 3]) -> bool {
        let fresh = self.insert(t);
        if fresh {
            if let Some(witnesses) = &mut self.witnesses {
                witnesses.insert(t, *elements);
            }
        }
        fresh
    }

    pub fn contains(&self, t: Triad) -> bool {
        debug_assert!(t.valid_for(&self.schema));
        let base = self.cell_base(t.alpha, t.beta);
        let g = usize::from(t.gamma);
        self.bits[base + g / 64] & (1u64 << (g % 64)) != 0
    }

    /// The recorded γ's for (α, β) as a relation set.
    pub fn cell(&self, alpha: RelIx, beta: RelIx) -> RelationSet {
        let base = self.cell_base(alpha, beta);
        RelationSet::from_words(&self.schema, &self.bits[base..base + self.words_per_cell])
    }

    /// Total number of recorded triads (the sum of all cell sizes).
    pub fn triad_count(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Iterates all recorded triads, row-major by (α, β) and then by γ.
    pub fn triads(&self) -> impl Iterator<Item = Triad> + '_ {
        let n = self.schema.len() as RelIx;
        (0..n).flat_map(move |alpha| {
            (0..n).flat_map(move |beta| {
                self.cell(alpha, beta)
                    .iter()
                    .collect::<Vec<_>>()
                    .into_iter()
                    .map(move |gamma| Triad::new(alpha, gamma, beta))
            })
        })
    }

    /// Hit count for a triad, if counting was enabled.
    pub fn hits(&self, t: Triad) -> Option<u64> {
        self.hits.as_ref().map(|hits| {
            let n = self.schema.len();
            hits[(usize::from(t.alpha) * n + usize::from(t.gamma)) * n + usize::from(t.beta)]
        })
    }

    pub fn has_hits(&self) -> bool {
        self.hits.is_some()
    }

    pub fn witness(&self, t: Triad) -> Option<&[Element; 3]> {
        self.witnesses.as_ref().and_then(|w| w.get(&t))
    }

    pub fn witnesses(&self) -> impl Iterator<Item = (&Triad, &[Element; 3])> {
        self.witnesses.iter().flatten()
    }

    pub fn provenance(&self) -> &BTreeMap<String, String> {
        &self.provenance
    }

    pub fn set_provenance(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.provenance.insert(key.into(), value.into());
    }

    pub fn clear_provenance(&mut self) {
        self.provenance.clear();
    }

    /// True iff both tables record exactly the same triad set. Provenance,
    /// hits, and witnesses are not compared.
    pub fn same_cells(&self, other: &CompositionTable) -> bool {
        self.schema.same_as(&other.schema) && self.bits == other.bits
    }

    /// True iff the table is closed under the six triad permutations.
    pub fn is_permutation_closed(&self) -> bool {
        self.triads().all(|t| {
            triad_permutations(&self.schema, t)
                .into_iter()
                .all(|p| self.contains(p))
        })
    }

    /// Cell-wise union of tables over one schema; hit counts add, witnesses
    /// keep the first-merged entry, provenance is dropped (the caller records
    /// new provenance for the merged table).
    pub fn merge(tables: &[CompositionTable]) -> Result<CompositionTable> {
        let first = tables.first().ok_or(Error::EmptyMerge)?;
        let mut out = CompositionTable::new(&first.schema);
        if tables.iter().all(|t| t.hits.is_some()) {
            out.enable_hits();
        }
        if tables.iter().all(|t| t.witnesses.is_some()) {
            out.enable_witnesses();
        }
        for table in tables {
            if !table.schema.same_as(&out.schema) {
                return Err(out.schema.mismatch(&table.schema));
            }
            for (acc, w) in out.bits.iter_mut().zip(&table.bits) {
                *acc |= w;
            }
            if let (Some(acc), Some(h)) = (&mut out.hits, &table.hits) {
                for (a, b) in acc.iter_mut().zip(h) {
                    *a = a.saturating_add(*b);
                }
            }
            if let (Some(acc), Some(w)) = (&mut out.witnesses, &table.witnesses) {
                for (t, elems) in w {
                    acc.entry(*t).or_insert(*elems);
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::build_schema;
    use crate::schema::seed_identity_triads;

    #[test]
    fn insert_is_idempotent_in_membership() {
        let ia = build_schema("ia").unwrap();
        let mut table = CompositionTable::new(&ia);
        let b = ia.lookup("b").unwrap();
        assert!(table.insert(Triad::new(b, b, b)));
        assert_eq!(table.triad_count(), 1);
        assert!(!table.insert(Triad::new(b, b, b)));
        assert_eq!(table.triad_count(), 1);
    }

    #[test]
    fn empty_table_has_zero_triads() {
        let pa = build_schema("pa").unwrap();
        assert_eq!(CompositionTable::new(&pa).triad_count(), 0);
    }

    #[test]
    fn hits_count_every_insertion() {
        let pa = build_schema("pa").unwrap();
        let mut table = CompositionTable::new(&pa);
        table.enable_hits();
        let t = Triad::new(0, 0, 0);
        table.insert(t);
        table.insert(t);
        assert_eq!(table.hits(t), Some(2));
        assert_eq!(table.hits(Triad::new(1, 1, 1)), Some(0));
    }

    #[test]
    fn permutation_images_inserted_count_distinct() {
        let ia = build_schema("ia").unwrap();
        let (b, o) = (ia.lookup("b").unwrap(), ia.lookup("o").unwrap());
        let mut perms = triad_permutations(&ia, Triad::new(b, o, o)).to_vec();
        let mut table = CompositionTable::new(&ia);
        for &t in perms.iter() {
            table.insert(t);
        }
        perms.sort_unstable();
        perms.dedup();
        assert_eq!(table.triad_count(), perms.len() as u64);
    }

    #[test]
    fn merge_with_empty_and_self() {
        let ia = build_schema("ia").unwrap();
        let mut t = CompositionTable::new(&ia);
        for triad in seed_identity_triads(&ia) {
            t.insert(triad);
        }
        let empty = CompositionTable::new(&ia);
        let merged = CompositionTable::merge(&[t.clone(), empty]).unwrap();
        assert!(merged.same_cells(&t));
        let doubled = CompositionTable::merge(&[t.clone(), t.clone()]).unwrap();
        assert!(doubled.same_cells(&t));
    }

    #[test]
    fn merge_rejects_schema_mismatch() {
        let ia = build_schema("ia").unwrap();
        let pa = build_schema("pa").unwrap();
        let a = CompositionTable::new(&ia);
        let b = CompositionTable::new(&pa);
        assert!(CompositionTable::merge(&[a, b]).is_err());
    }

    #[test]
    fn triads_iterate_in_canonical_order() {
        let pa = build_schema("pa").unwrap();
        let mut table = CompositionTable::new(&pa);
        table.insert(Triad::new(2, 1, 0));
        table.insert(Triad::new(0, 2, 1));
        table.insert(Triad::new(0, 1, 1));
        let listed: Vec<_> = table.triads().collect();
        let mut sorted = listed.clone();
        sorted.sort_by_key(|t| (t.alpha, t.beta, t.gamma));
        assert_eq!(listed, sorted);
    }
}
