//! The `qct v1` table format: line-oriented UTF-8, symbols rather than
//! indices, one line per nonempty cell in row-major order. Canonical output
//! round-trips byte-identically.
//!
//! ```text
//! # qct v1
//! calculus: pa
//! relations: < = >
//! provenance: domain=pa mode=enumerate params=M=3
//! table:
//! < ; < ; <
//! < ; = ; <
//! < ; > ; < = >
//! ```
//!
//! With hit counts enabled, each γ is written as `<sym>@<count>`.

use std::fmt::Write as _;

use crate::calculi::build_schema;
use crate::schema::{RelIx, Triad};
use crate::table::CompositionTable;
use crate::{Error, Result};

const MAGIC: &str = "# qct v1";

/// Serializes a table in canonical form.
pub fn write_ct_to_string(table: &CompositionTable) -> String {
    let schema = table.schema();
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    writeln!(out, "calculus: {}", schema.name()).unwrap();
    writeln!(
        out,
        "relations: {}",
        schema.symbols().collect::<Vec<_>>().join(" ")
    )
    .unwrap();
    if !table.provenance().is_empty() {
        let fields: Vec<String> = table
            .provenance()
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(out, "provenance: {}", fields.join(" ")).unwrap();
    }
    out.push_str("table:\n");
    let n = schema.len() as RelIx;
    for alpha in 0..n {
        for beta in 0..n {
            let cell = table.cell(alpha, beta);
            if cell.is_empty() {
                continue;
            }
            let gammas: Vec<String> = cell
                .iter()
                .map(|gamma| {
                    let sym = schema.symbol(gamma);
                    match table.hits(Triad::new(alpha, gamma, beta)) {
                        Some(count) => format!("{sym}@{count}"),
                        None => sym.to_string(),
                    }
                })
                .collect();
            writeln!(
                out,
                "{} ; {} ; {}",
                schema.symbol(alpha),
                schema.symbol(beta),
                gammas.join(" ")
            )
            .unwrap();
        }
    }
    out
}

pub fn write_ct(table: &CompositionTable, sink: &mut impl std::io::Write) -> Result<()> {
    sink.write_all(write_ct_to_string(table).as_bytes())?;
    Ok(())
}

/// Parses a `qct v1` file back into a table.
pub fn read_ct(source: &str) -> Result<CompositionTable> {
    let mut lines = source.lines().enumerate();
    let err = |line: usize, msg: String| Error::Parse { line, msg };

    let (_, magic) = lines
        .next()
        .ok_or_else(|| err(1, "empty file".to_string()))?;
    if magic.trim_end() != MAGIC {
        return Err(err(1, format!("version mismatch: expected `{MAGIC}`")));
    }

    let mut calculus: Option<String> = None;
    let mut relations: Option<Vec<String>> = None;
    let mut provenance: Vec<(String, String)> = Vec::new();
    let mut saw_table = false;
    let mut header_end = 1;
    for (ix, raw) in lines.by_ref() {
        let lineno = ix + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "table:" {
            saw_table = true;
            header_end = lineno;
            break;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err(lineno, format!("expected `key: value`, found `{line}`")))?;
        match key.trim() {
            "calculus" => calculus = Some(value.trim().to_string()),
            "relations" => {
                relations = Some(value.split_whitespace().map(str::to_string).collect())
            }
            "provenance" => {
                for field in value.split_whitespace() {
                    let (k, v) = field.split_once('=').ok_or_else(|| {
                        err(lineno, format!("malformed provenance field `{field}`"))
                    })?;
                    provenance.push((k.to_string(), v.to_string()));
                }
            }
            other => return Err(err(lineno, format!("unknown header `{other}`"))),
        }
    }
    if !saw_table {
        return Err(err(header_end, "missing `table:` section".to_string()));
    }
    let calculus =
        calculus.ok_or_else(|| err(header_end, "missing `calculus:` header".to_string()))?;
    let schema = build_schema(&calculus)?;
    match relations {
        Some(rels) => {
            let expected: Vec<String> = schema.symbols().map(str::to_string).collect();
            if rels != expected {
                return Err(err(
                    header_end,
                    format!("relation list does not match calculus `{calculus}`"),
                ));
            }
        }
        None => return Err(err(header_end, "missing `relations:` header".to_string())),
    }

    let mut entries: Vec<(Triad, Option<u64>)> = Vec::new();
    let mut any_hits = false;
    let mut seen_cells = vec![false; schema.len() * schema.len()];
    for (ix, raw) in lines {
        let lineno = ix + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ';').map(str::trim);
        let (alpha_sym, beta_sym, gammas) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), Some(g)) => (a, b, g),
            _ => return Err(err(lineno, format!("expected `α ; β ; γ…`, found `{line}`"))),
        };
        let lookup = |sym: &str| {
            schema
                .lookup(sym)
                .ok_or_else(|| err(lineno, format!("unknown relation symbol `{sym}`")))
        };
        let alpha = lookup(alpha_sym)?;
        let beta = lookup(beta_sym)?;
        let cell_ix = usize::from(alpha) * schema.len() + usize::from(beta);
        if seen_cells[cell_ix] {
            return Err(err(
                lineno,
                format!("duplicate cell line for ({alpha_sym}, {beta_sym})"),
            ));
        }
        seen_cells[cell_ix] = true;
        for gamma_field in gammas.split_whitespace() {
            let (gamma_sym, count) = match gamma_field.split_once('@') {
                Some((sym, count)) => {
                    let count: u64 = count.parse().map_err(|_| {
                        err(lineno, format!("malformed hit count in `{gamma_field}`"))
                    })?;
                    any_hits = true;
                    (sym, Some(count))
                }
                None => (gamma_field, None),
            };
            entries.push((Triad::new(alpha, lookup(gamma_sym)?, beta), count));
        }
    }

    let mut table = CompositionTable::new(&schema);
    if any_hits {
        table.enable_hits();
    }
    for (triad, count) in entries {
        table.restore(triad, count);
    }
    for (k, v) in provenance {
        table.set_provenance(k, v);
    }
    Ok(table)
}

/// Difference between two tables over one schema: `missing` lists triads of
/// `b` absent from `a`, `extra` lists triads of `a` absent from `b`, both in
/// canonical order. Both empty iff the tables are identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtDiff {
    pub missing: Vec<Triad>,
    pub extra: Vec<Triad>,
}

impl CtDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

pub fn diff_ct(a: &CompositionTable, b: &CompositionTable) -> Result<CtDiff> {
    if !a.schema().same_as(b.schema()) {
        return Err(a.schema().mismatch(b.schema()));
    }
    let missing = b.triads().filter(|&t| !a.contains(t)).collect();
    let extra = a.triads().filter(|&t| !b.contains(t)).collect();
    Ok(CtDiff { missing, extra })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculi::DomainSpec;
    use crate::generator::{generate_ct, GenOptions, TerminationCondition};
    use crate::oracle::enumerate_ct;

    #[test]
    fn pa_table_has_nine_cell_lines_and_thirteen_symbols() {
        let table = enumerate_ct(&DomainSpec::Pa { size: 3 }).unwrap();
        let text = write_ct_to_string(&table);
        let cells: Vec<&str> = text
            .lines()
            .skip_while(|l| *l != "table:")
            .skip(1)
            .collect();
        assert_eq!(cells.len(), 9);
        let symbols: usize = cells
            .iter()
            .map(|l| l.splitn(3, ';').nth(2).unwrap().split_whitespace().count())
            .sum();
        assert_eq!(symbols, 13);
    }

    #[test]
    fn roundtrip_is_identity_on_ia_table() {
        let spec = DomainSpec::Ia { size: 8 };
        let (table, _) = generate_ct(
            &spec,
            &TerminationCondition::All(vec![
                TerminationCondition::MaxLoops(1_000_000),
                TerminationCondition::StallWindow(100_000),
            ]),
            1,
            &GenOptions::default(),
        )
        .unwrap();
        assert_eq!(table.triad_count(), 409);
        let text = write_ct_to_string(&table);
        let reread = read_ct(&text).unwrap();
        assert!(reread.same_cells(&table));
        assert_eq!(reread.provenance(), table.provenance());
        assert_eq!(write_ct_to_string(&reread), text);
    }

    #[test]
    fn roundtrip_preserves_hit_counts() {
        let spec = DomainSpec::Pa { size: 3 };
        let (table, _) = generate_ct(
            &spec,
            &TerminationCondition::MaxLoops(500),
            7,
            &GenOptions {
                record_hits: true,
                ..GenOptions::default()
            },
        )
        .unwrap();
        let text = write_ct_to_string(&table);
        let reread = read_ct(&text).unwrap();
        for t in table.triads() {
            assert_eq!(reread.hits(t), table.hits(t));
        }
        assert_eq!(write_ct_to_string(&reread), text);
    }

    #[test]
    fn unknown_symbol_errors_with_line_number() {
        let text = "# qct v1\ncalculus: pa\nrelations: < = >\ntable:\n< ; < ; zz\n";
        match read_ct(text) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 5);
                assert!(msg.contains("zz"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_cell_line_rejected() {
        let text = "# qct v1\ncalculus: pa\nrelations: < = >\ntable:\n< ; < ; <\n< ; < ; =\n";
        assert!(matches!(read_ct(text), Err(Error::Parse { line: 6, .. })));
    }

    #[test]
    fn version_mismatch_rejected() {
        assert!(matches!(
            read_ct("# qct v2\ncalculus: pa\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn diff_identical_tables_is_empty() {
        let t = enumerate_ct(&DomainSpec::Pa { size: 3 }).unwrap();
        let d = diff_ct(&t, &t).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn diff_of_growing_ia_domains() {
        let d5 = enumerate_ct(&DomainSpec::Ia { size: 5 }).unwrap();
        let d6 = enumerate_ct(&DomainSpec::Ia { size: 6 }).unwrap();
        let d = diff_ct(&d5, &d6).unwrap();
        assert_eq!(d.missing.len(), 90); // 409 - 319
        assert_eq!(d.extra.len(), 0);
        let reversed = diff_ct(&d6, &d5).unwrap();
        assert_eq!(reversed.missing, d.extra);
        assert_eq!(reversed.extra, d.missing);
    }

    #[test]
    fn diff_rejects_schema_mismatch() {
        let pa = enumerate_ct(&DomainSpec::Pa { size: 3 }).unwrap();
        let ia = enumerate_ct(&DomainSpec::Ia { size: 4 }).unwrap();
        assert!(diff_ct(&pa, &ia).is_err());
    }
}
