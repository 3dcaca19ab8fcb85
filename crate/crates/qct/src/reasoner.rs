//! Consuming a composition table: weak composition of relation sets,
//! algebraic closure (weak-composition path consistency) on constraint
//! networks, triangle checks, and the INDU candidate filter.

use std::collections::VecDeque;

use crate::calculi::linear::{indu_components, IA_SYMBOLS, PA_SYMBOLS};
use crate::calculi::build_schema;
use crate::schema::{RelIx, RelationSet, Schema, Triad};
use crate::table::CompositionTable;
use crate::{Error, Result};

/// Default cap on network size; this is a desk-scale reasoner.
pub const DEFAULT_MAX_VARS: usize = 256;

/// A constraint network: variables 0..n with a relation-set label on every
/// ordered pair. The diagonal holds the identity and γⱼᵢ is kept equal to
/// the converse of γᵢⱼ at all times.
#[derive(Debug, Clone)]
pub struct ConstraintNetwork {
    schema: Schema,
    n: usize,
    labels: Vec<RelationSet>,
}

impl PartialEq for ConstraintNetwork {
    fn eq(&self, other: &Self) -> bool {
        self.schema.same_as(&other.schema) && self.n == other.n && self.labels == other.labels
    }
}

impl Eq for ConstraintNetwork {}

impl ConstraintNetwork {
    /// A network of `n` variables with universal labels (and identity on the
    /// diagonal), capped at [`DEFAULT_MAX_VARS`].
    pub fn new(schema: &Schema, n: usize) -> Result<Self> {
        Self::with_limit(schema, n, DEFAULT_MAX_VARS)
    }

    pub fn with_limit(schema: &Schema, n: usize, max_vars: usize) -> Result<Self> {
        if n == 0 || n > max_vars {
            return Err(Error::TooManyVariables(n, max_vars));
        }
        let universal = RelationSet::universal(schema);
        let mut labels = vec![universal; n * n];
        for i in 0..n {
            labels[i * n + i] = RelationSet::singleton(schema, schema.identity());
        }
        Ok(ConstraintNetwork {
            schema: schema.clone(),
            n,
            labels,
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn label(&self, i: usize, j: usize) -> &RelationSet {
        &self.labels[i * self.n + j]
    }

    /// Intersects the (i, j) label with `set` and the (j, i) label with its
    /// converse, keeping the symmetry invariant.
    pub fn constrain(&mut self, i: usize, j: usize, set: &RelationSet) -> Result<()> {
        if !self.schema.same_as(set.schema()) {
            return Err(self.schema.mismatch(set.schema()));
        }
        assert!(i < self.n && j < self.n, "variable index out of range");
        let refined = self.labels[i * self.n + j].intersection(set)?;
        self.labels[i * self.n + j] = refined;
        let conv = self.labels[j * self.n + i].intersection(&set.converse())?;
        self.labels[j * self.n + i] = conv;
        Ok(())
    }

    fn set_pair(&mut self, i: usize, j: usize, set: RelationSet) {
        self.labels[j * self.n + i] = set.converse();
        self.labels[i * self.n + j] = set;
    }

    pub fn has_empty_label(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in 0..self.n {
                if self.labels[i * self.n + j].is_empty() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Parses the line-oriented network format: a `vars: <n>` header, then
    /// `<i> <j> <sym>[,<sym>…]` lines. Unlisted pairs stay universal.
    pub fn parse(schema: &Schema, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (mut lineno, mut header) = (0, None);
        for (ix, line) in lines.by_ref() {
            lineno = ix + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            header = Some(line.to_string());
            break;
        }
        let header = header.ok_or(Error::Parse {
            line: lineno,
            msg: "missing `vars: <n>` header".to_string(),
        })?;
        let n: usize = header
            .strip_prefix("vars:")
            .map(str::trim)
            .and_then(|v| v.parse().ok())
            .ok_or(Error::Parse {
                line: lineno,
                msg: format!("expected `vars: <n>`, found `{header}`"),
            })?;
        let mut net = ConstraintNetwork::new(schema, n).map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        for (ix, line) in lines {
            let lineno = ix + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let parse_var = |field: Option<&str>| -> Result<usize> {
                field
                    .and_then(|v| v.parse::<usize>().ok())
                    .filter(|&v| v < n)
                    .ok_or(Error::Parse {
                        line: lineno,
                        msg: format!("expected variable index below {n}"),
                    })
            };
            let i = parse_var(fields.next())?;
            let j = parse_var(fields.next())?;
            let syms = fields.next().ok_or(Error::Parse {
                line: lineno,
                msg: "expected relation symbols".to_string(),
            })?;
            if let Some(extra) = fields.next() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unexpected trailing field `{extra}`"),
                });
            }
            let mut set = RelationSet::empty(schema);
            for sym in syms.split(',') {
                let ix = schema.lookup(sym).ok_or(Error::Parse {
                    line: lineno,
                    msg: format!("unknown relation symbol `{sym}`"),
                })?;
                set.insert(ix);
            }
            net.constrain(i, j, &set).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
        }
        Ok(net)
    }

    /// Canonical text form: every off-diagonal i < j label that is not
    /// universal, in index order.
    pub fn to_text(&self) -> String {
        let universal = RelationSet::universal(&self.schema);
        let mut out = format!("vars: {}\n", self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let label = self.label(i, j);
                if *label != universal {
                    let syms: Vec<_> =
                        label.iter().map(|r| self.schema.symbol(r)).collect();
                    out.push_str(&format!("{i} {j} {}\n", syms.join(",")));
                }
            }
        }
        out
    }
}

/// Weak composition of two relation sets: the union of table cells over all
/// basic pairs.
pub fn weak_compose(
    table: &CompositionTable,
    a: &RelationSet,
    b: &RelationSet,
) -> Result<RelationSet> {
    if !table.schema().same_as(a.schema()) {
        return Err(table.schema().mismatch(a.schema()));
    }
    if !table.schema().same_as(b.schema()) {
        return Err(table.schema().mismatch(b.schema()));
    }
    let mut out = RelationSet::empty(table.schema());
    for alpha in a.iter() {
        for beta in b.iter() {
            out = out.union(&table.cell(alpha, beta))?;
        }
    }
    Ok(out)
}

/// True iff the triangle {x α y, y β z, x γ z} is consistent according to the
/// table, i.e. γ ∈ cell(α, β).
pub fn triangle_is_ct_consistent(table: &CompositionTable, t: Triad) -> bool {
    table.contains(t)
}

/// Result of algebraic closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closure {
    /// The greatest fixed point of the updating rule.
    Stable(ConstraintNetwork),
    /// Some label emptied; the network has no solution.
    Inconsistent { i: usize, j: usize },
}

impl Closure {
    pub fn stable(self) -> Option<ConstraintNetwork> {
        match self {
            Closure::Stable(net) => Some(net),
            Closure::Inconsistent { .. } => None,
        }
    }
}

/// Weak-composition path consistency: applies γᵢⱼ ← γᵢⱼ ∩ γᵢₖ ∘w γₖⱼ until
/// the network is stable or a label empties.
///
/// Propagation is queue-driven over arcs; on a change to (i, k) both arc
/// orientations around it are re-enqueued. The fixed point is independent of
/// scheduling because each update is an intersection with a monotone bound.
/// This decides only algebraic closure, not consistency, which the rule is
/// incomplete for in some calculi.
pub fn algebraic_closure(net: &ConstraintNetwork, table: &CompositionTable) -> Result<Closure> {
    if !net.schema().same_as(table.schema()) {
        return Err(net.schema().mismatch(table.schema()));
    }
    let mut net = net.clone();
    if let Some((i, j)) = net.has_empty_label() {
        return Ok(Closure::Inconsistent { i, j });
    }
    let n = net.var_count();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    let mut queued = vec![false; n * n];
    let enqueue = |queue: &mut VecDeque<(usize, usize)>, queued: &mut Vec<bool>, i: usize, j: usize| {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        if !queued[i * n + j] {
            queued[i * n + j] = true;
            queue.push_back((i, j));
        }
    };
    for i in 0..n {
        for j in (i + 1)..n {
            enqueue(&mut queue, &mut queued, i, j);
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        queued[i * n + j] = false;
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            // γᵢₖ ← γᵢₖ ∩ γᵢⱼ ∘w γⱼₖ
            let bound = weak_compose(table, net.label(i, j), net.label(j, k))?;
            let refined = net.label(i, k).intersection(&bound)?;
            if refined != *net.label(i, k) {
                if refined.is_empty() {
                    return Ok(Closure::Inconsistent { i, j: k });
                }
                net.set_pair(i, k, refined);
                enqueue(&mut queue, &mut queued, i, k);
            }
            // γₖⱼ ← γₖⱼ ∩ γₖᵢ ∘w γᵢⱼ
            let bound = weak_compose(table, net.label(k, i), net.label(i, j))?;
            let refined = net.label(k, j).intersection(&bound)?;
            if refined != *net.label(k, j) {
                if refined.is_empty() {
                    return Ok(Closure::Inconsistent { i: k, j });
                }
                net.set_pair(k, j, refined);
                enqueue(&mut queue, &mut queued, k, j);
            }
        }
    }
    Ok(Closure::Stable(net))
}

/// All INDU triples ⟨α^{★₁}, γ^{★₂}, β^{★₃}⟩ whose three symbols are valid
/// INDU relations, whose IA projection ⟨α, γ, β⟩ is in the IA table, and
/// whose duration projection ⟨★₁, ★₂, ★₃⟩ is in the PA table.
///
/// With complete input tables this is exactly the INDU composition table.
pub fn indu_candidate_filter(
    ia_table: &CompositionTable,
    pa_table: &CompositionTable,
) -> Result<CompositionTable> {
    if ia_table.schema().name() != "ia" {
        return Err(Error::IncompleteTable(format!(
            "expected an IA table, got `{}`",
            ia_table.schema().name()
        )));
    }
    if pa_table.schema().name() != "pa" {
        return Err(Error::IncompleteTable(format!(
            "expected a PA table, got `{}`",
            pa_table.schema().name()
        )));
    }
    if ia_table.triad_count() != 409 {
        return Err(Error::IncompleteTable(format!(
            "IA table has {} triads, expected the complete 409",
            ia_table.triad_count()
        )));
    }
    if pa_table.triad_count() != 13 {
        return Err(Error::IncompleteTable(format!(
            "PA table has {} triads, expected the complete 13",
            pa_table.triad_count()
        )));
    }
    let indu = build_schema("indu")?;
    let n = indu.len() as RelIx;
    let mut out = CompositionTable::new(&indu);
    out.set_provenance("mode", "indu-filter");
    for alpha in 0..n {
        let (ia_a, pa_a) = indu_components(alpha);
        for gamma in 0..n {
            let (ia_g, pa_g) = indu_components(gamma);
            for beta in 0..n {
                let (ia_b, pa_b) = indu_components(beta);
                if ia_table.contains(Triad::new(ia_a, ia_g, ia_b))
                    && pa_table.contains(Triad::new(pa_a, pa_g, pa_b))
                {
                    out.insert(Triad::new(alpha, gamma, beta));
                }
            }
        }
    }
    // Sanity: the projections really index the schemas we checked against.
    debug_assert!(IA_SYMBOLS.len() == ia_table.schema().len());
    debug_assert!(PA_SYMBOLS.len() == pa_table.schema().len());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::DomainSpec;
    use crate::oracle::enumerate_ct;

    fn pa_table() -> CompositionTable {
        enumerate_ct(&DomainSpec::Pa { size: 3 }).unwrap()
    }

    fn ia_table() -> CompositionTable {
        enumerate_ct(&DomainSpec::Ia { size: 6 }).unwrap()
    }

    #[test]
    fn weak_compose_pa_examples() {
        let table = pa_table();
        let pa = table.schema().clone();
        let lt = RelationSet::singleton(&pa, 0);
        let gt = RelationSet::singleton(&pa, 2);
        assert_eq!(weak_compose(&table, &lt, &lt).unwrap(), lt);
        assert_eq!(
            weak_compose(&table, &lt, &gt).unwrap(),
            RelationSet::universal(&pa)
        );
        let id = RelationSet::singleton(&pa, pa.identity());
        for beta in 0..3 {
            let b = RelationSet::singleton(&pa, beta);
            assert_eq!(weak_compose(&table, &id, &b).unwrap(), b);
        }
    }

    #[test]
    fn closure_refines_ia_before_chain() {
        let table = ia_table();
        let ia = table.schema().clone();
        let b = ia.lookup("b").unwrap();
        let mut net = ConstraintNetwork::new(&ia, 3).unwrap();
        net.constrain(0, 1, &RelationSet::singleton(&ia, b)).unwrap();
        net.constrain(1, 2, &RelationSet::singleton(&ia, b)).unwrap();
        match algebraic_closure(&net, &table).unwrap() {
            Closure::Stable(refined) => {
                assert_eq!(*refined.label(0, 2), RelationSet::singleton(&ia, b));
            }
            Closure::Inconsistent { .. } => panic!("consistent network reported inconsistent"),
        }
    }

    #[test]
    fn closure_detects_pa_cycle() {
        let table = pa_table();
        let pa = table.schema().clone();
        let mut net = ConstraintNetwork::new(&pa, 3).unwrap();
        net.constrain(0, 1, &RelationSet::singleton(&pa, 0)).unwrap(); // x < y
        net.constrain(1, 2, &RelationSet::singleton(&pa, 0)).unwrap(); // y < z
        net.constrain(0, 2, &RelationSet::singleton(&pa, 2)).unwrap(); // x > z
        assert!(matches!(
            algebraic_closure(&net, &table).unwrap(),
            Closure::Inconsistent { .. }
        ));
    }

    #[test]
    fn closure_is_idempotent() {
        let table = ia_table();
        let ia = table.schema().clone();
        let mut net = ConstraintNetwork::new(&ia, 4).unwrap();
        let set = RelationSet::from_indices(
            &ia,
            [ia.lookup("b").unwrap(), ia.lookup("m").unwrap(), ia.lookup("o").unwrap()],
        );
        net.constrain(0, 1, &set).unwrap();
        net.constrain(1, 2, &set).unwrap();
        net.constrain(2, 3, &RelationSet::singleton(&ia, ia.lookup("d").unwrap()))
            .unwrap();
        let once = algebraic_closure(&net, &table).unwrap().stable().unwrap();
        let twice = algebraic_closure(&once, &table).unwrap().stable().unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn triangle_consistency_examples() {
        let pa = pa_table();
        assert!(!triangle_is_ct_consistent(&pa, Triad::new(0, 2, 0))); // ⟨<,>,<⟩
        assert!(triangle_is_ct_consistent(&pa, Triad::new(0, 0, 0)));
        let rcc8 = enumerate_ct(&DomainSpec::Rcc8Disk { size: 4 }).unwrap();
        let ntpp = rcc8.schema().lookup("NTPP").unwrap();
        assert!(triangle_is_ct_consistent(&rcc8, Triad::new(ntpp, ntpp, ntpp)));
        // ⟨α, id, α~⟩ holds for every α.
        let schema = rcc8.schema().clone();
        for alpha in schema.indices() {
            let t = Triad::new(alpha, schema.identity(), schema.converse(alpha));
            assert!(triangle_is_ct_consistent(&rcc8, t));
        }
    }

    #[test]
    fn indu_filter_rejects_incomplete_inputs() {
        let partial_ia = enumerate_ct(&DomainSpec::Ia { size: 4 }).unwrap(); // 139 triads
        let pa = pa_table();
        assert!(matches!(
            indu_candidate_filter(&partial_ia, &pa),
            Err(Error::IncompleteTable(_))
        ));
    }

    #[test]
    fn indu_filter_counts_and_spot_checks() {
        let filtered = indu_candidate_filter(&ia_table(), &pa_table()).unwrap();
        assert_eq!(filtered.triad_count(), 2053);
        let indu = filtered.schema().clone();
        let blt = indu.lookup("b<").unwrap();
        assert!(filtered.contains(Triad::new(blt, blt, blt)));
        // No triad mentions an invalid duration variant like d= or d>.
        assert!(indu.lookup("d=").is_none());
        assert!(indu.lookup("d>").is_none());
    }

    #[test]
    fn network_text_roundtrip() {
        let ia = build_schema("ia").unwrap();
        let text = "vars: 3\n0 1 b,m\n1 2 d\n";
        let net = ConstraintNetwork::parse(&ia, text).unwrap();
        assert_eq!(net.to_text(), text);
        assert_eq!(net.label(1, 0).len(), 2); // converse maintained
    }

    #[test]
    fn network_parse_errors_name_lines() {
        let ia = build_schema("ia").unwrap();
        match ConstraintNetwork::parse(&ia, "vars: 2\n0 1 zz\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(ConstraintNetwork::parse(&ia, "vars: 2\n0 5 b\n").is_err());
    }

    #[test]
    fn network_size_cap() {
        let ia = build_schema("ia").unwrap();
        assert!(ConstraintNetwork::new(&ia, 257).is_err());
        assert!(ConstraintNetwork::with_limit(&ia, 300, 512).is_ok());
    }
}
