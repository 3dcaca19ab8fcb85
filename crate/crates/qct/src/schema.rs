//! Schema-level relation algebra: basic-relation symbol tables, converse
//! permutations, relation sets, and composition triads.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::{Error, Result};

/// Index of a basic relation inside its schema.
pub type RelIx = u16;

/// Shared handle to a calculus schema.
pub type Schema = Arc<CalculusSchema>;

/// Names the basic relations of a calculus, their converse permutation, and
/// the identity relation.
///
/// Schemas are immutable once built and shared behind an [`Arc`]; every
/// [`RelationSet`] and table keeps a handle to the schema it belongs to.
#[derive(Debug)]
pub struct CalculusSchema {
    name: String,
    symbols: Vec<String>,
    index: HashMap<String, RelIx>,
    converse: Vec<RelIx>,
    identity: RelIx,
}

impl CalculusSchema {
    /// Builds a schema, validating that `converse` is an involution fixing
    /// `identity` and that the symbols are distinct and nonempty.
    pub fn new(
        name: impl Into<String>,
        symbols: Vec<String>,
        converse: Vec<RelIx>,
        identity: RelIx,
    ) -> Result<Schema> {
        let name = name.into();
        let n = symbols.len();
        if n == 0 || n > usize::from(RelIx::MAX) {
            return Err(Error::InvalidSchema(format!(
                "schema `{name}` must have between 1 and {} relations",
                RelIx::MAX
            )));
        }
        if converse.len() != n {
            return Err(Error::InvalidSchema(format!(
                "schema `{name}`: converse permutation has length {} for {n} relations",
                converse.len()
            )));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, sym) in symbols.iter().enumerate() {
            if sym.is_empty() || sym.split_whitespace().count() != 1 {
                return Err(Error::InvalidSchema(format!(
                    "schema `{name}`: symbol {i:?} must be a single nonempty token"
                )));
            }
            if index.insert(sym.clone(), i as RelIx).is_some() {
                return Err(Error::InvalidSchema(format!(
                    "schema `{name}`: duplicate symbol `{sym}`"
                )));
            }
        }
        for (i, &c) in converse.iter().enumerate() {
            if usize::from(c) >= n || usize::from(converse[usize::from(c)]) != i {
                return Err(Error::InvalidSchema(format!(
                    "schema `{name}`: converse is not an involution at index {i}"
                )));
            }
        }
        if usize::from(identity) >= n || converse[usize::from(identity)] != identity {
            return Err(Error::InvalidSchema(format!(
                "schema `{name}`: identity must be a self-converse relation"
            )));
        }
        Ok(Arc::new(CalculusSchema {
            name,
            symbols,
            index,
            converse,
            identity,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of basic relations.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a valid schema always has at least one relation
    }

    pub fn symbol(&self, i: RelIx) -> &str {
        &self.symbols[usize::from(i)]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(String::as_str)
    }

    pub fn lookup(&self, symbol: &str) -> Option<RelIx> {
        self.index.get(symbol).copied()
    }

    /// Converse of a basic relation; basic relations stay basic.
    pub fn converse(&self, i: RelIx) -> RelIx {
        self.converse[usize::from(i)]
    }

    pub fn identity(&self) -> RelIx {
        self.identity
    }

    pub fn indices(&self) -> impl Iterator<Item = RelIx> {
        (0..self.len() as RelIx).into_iter()
    }

    /// Two schema handles describe the same calculus if they agree on name and
    /// relation list. Separately-built handles for one calculus are
    /// interchangeable.
    pub fn same_as(&self, other: &CalculusSchema) -> bool {
        std::ptr::eq(self, other) || (self.name == other.name && self.symbols == other.symbols)
    }

    pub(crate) fn mismatch(&self, other: &CalculusSchema) -> Error {
        Error::SchemaMismatch(self.name.clone(), other.name.clone())
    }

    pub(crate) fn words_per_set(&self) -> usize {
        self.len().div_ceil(64)
    }
}

/// A set of basic relations over one schema, stored as a fixed-width bit
/// vector (bit `i` set ⇔ basic relation `i` present).
///
/// The empty set is representable; the reasoner uses it to signal
/// inconsistency.
#[derive(Debug, Clone)]
pub struct RelationSet {
    schema: Schema,
    words: SmallVec<[u64; 4]>,
}

impl RelationSet {
    pub fn empty(schema: &Schema) -> Self {
        RelationSet {
            schema: Arc::clone(schema),
            words: SmallVec::from_elem(0, schema.words_per_set()),
        }
    }

    pub fn universal(schema: &Schema) -> Self {
        let mut set = Self::empty(schema);
        let n = schema.len();
        for (w, word) in set.words.iter_mut().enumerate() {
            let bits = n - (w * 64).min(n);
            *word = if bits >= 64 { u64::MAX } else { (1u64 << bits) - 1 };
        }
        set
    }

    pub fn singleton(schema: &Schema, i: RelIx) -> Self {
        let mut set = Self::empty(schema);
        set.insert(i);
        set
    }

    pub fn from_indices(schema: &Schema, indices: impl IntoIterator<Item = RelIx>) -> Self {
        let mut set = Self::empty(schema);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn contains(&self, i: RelIx) -> bool {
        let i = usize::from(i);
        debug_assert!(i < self.schema.len());
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    /// Adds relation `i`; returns true iff it was newly set.
    pub fn insert(&mut self, i: RelIx) -> bool {
        let i = usize::from(i);
        assert!(i < self.schema.len(), "relation index out of range");
        let word = &mut self.words[i / 64];
        let mask = 1u64 << (i % 64);
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = RelIx> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros();
                rest &= rest - 1;
                Some((w * 64 + bit as usize) as RelIx)
            })
        })
    }

    fn check_schema(&self, other: &RelationSet) -> Result<()> {
        if self.schema.same_as(&other.schema) {
            Ok(())
        } else {
            Err(self.schema.mismatch(&other.schema))
        }
    }

    pub fn union(&self, other: &RelationSet) -> Result<RelationSet> {
        self.check_schema(other)?;
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        Ok(out)
    }

    pub fn intersection(&self, other: &RelationSet) -> Result<RelationSet> {
        self.check_schema(other)?;
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        Ok(out)
    }

    pub fn is_subset(&self, other: &RelationSet) -> bool {
        self.schema.same_as(&other.schema)
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Converse of the set: bit `converse(i)` is set in the result iff bit `i`
    /// is set here. Involutive because the schema's permutation is.
    pub fn converse(&self) -> RelationSet {
        let mut out = Self::empty(&self.schema);
        for i in self.iter() {
            out.insert(self.schema.converse(i));
        }
        out
    }

    pub(crate) fn from_words(schema: &Schema, words: &[u64]) -> Self {
        debug_assert_eq!(words.len(), schema.words_per_set());
        RelationSet {
            schema: Arc::clone(schema),
            words: SmallVec::from_slice(words),
        }
    }
}

impl PartialEq for RelationSet {
    fn eq(&self, other: &Self) -> bool {
        self.schema.same_as(&other.schema) && self.words == other.words
    }
}

impl Eq for RelationSet {}

impl fmt::Display for RelationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            f.write_str(self.schema.symbol(i))?;
            first = false;
        }
        Ok(())
    }
}

/// A composition triad ⟨α, γ, β⟩: γ is a basic relation contained in the weak
/// composition α ∘w β, i.e. the triangle {x α y, y β z, x γ z} is satisfiable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triad {
    pub alpha: RelIx,
    pub gamma: RelIx,
    pub beta: RelIx,
}

impl Triad {
    pub fn new(alpha: RelIx, gamma: RelIx, beta: RelIx) -> Self {
        Triad { alpha, gamma, beta }
    }

    pub fn valid_for(&self, schema: &CalculusSchema) -> bool {
        let n = schema.len();
        usize::from(self.alpha) < n && usize::from(self.gamma) < n && usize::from(self.beta) < n
    }
}

/// The six triads derivable from one ⟨α, γ, β⟩ by permuting the underlying
/// element triple, with reversed pairs rewritten through the schema converse:
/// ⟨α,γ,β⟩, ⟨α~,β,γ⟩, ⟨γ,α,β~⟩, ⟨β,α~,γ~⟩, ⟨β~,γ~,α~⟩, ⟨γ~,β~,α⟩.
///
/// Duplicates are allowed; callers deduplicate.
pub fn triad_permutations(schema: &CalculusSchema, t: Triad) -> [Triad; 6] {
    debug_assert!(t.valid_for(schema));
    let (a, g, b) = (t.alpha, t.gamma, t.beta);
    let (ac, gc, bc) = (schema.converse(a), schema.converse(g), schema.converse(b));
    [
        Triad::new(a, g, b),
        Triad::new(ac, b, g),
        Triad::new(g, a, bc),
        Triad::new(b, ac, gc),
        Triad::new(bc, gc, ac),
        Triad::new(gc, bc, a),
    ]
}

/// All composition triads involving the identity relation:
/// {⟨id,β,β⟩} ∪ {⟨α,α,id⟩} ∪ {⟨α,id,α~⟩}, deduplicated in sorted order.
///
/// Since α ∘w id = α = id ∘w α and id ⊆ α ∘w α~, these are exactly the
/// identity-involving triads of any calculus whose identity relation holds
/// precisely between equal elements, so a generator that pre-seeds them can
/// restrict itself to pairwise-distinct element triples.
pub fn seed_identity_triads(schema: &CalculusSchema) -> Vec<Triad> {
    let id = schema.identity();
    let mut triads = Vec::with_capacity(3 * schema.len());
    for r in schema.indices() {
        triads.push(Triad::new(id, r, r));
        triads.push(Triad::new(r, r, id));
        triads.push(Triad::new(r, id, schema.converse(r)));
    }
    triads.sort_unstable();
    triads.dedup();
    triads
}
