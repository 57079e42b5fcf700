//! File formats: relation matrices, scheme catalogs, tensor documents, and
//! analysis reports.
//!
//! The "rm" format is line-oriented: comments start with '#', blank lines
//! are skipped, the first content line is the order n, and n rows follow.
//! A row is either n whitespace-separated integers or a single token of
//! exactly n digits (one relation index per character); the two styles may
//! not be mixed within one matrix. A catalog is a sequence of blocks, each
//! introduced by a header line `# <id>` and holding one rm matrix.
//!
//! Tensor documents and analysis reports are JSON.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::AnalysisReport;
use crate::scheme::{IntersectionTensor, RelationMatrix};

/// Guard against accidental or hostile huge inputs; the library targets
/// desk-scale catalogs.
const MAX_ORDER: usize = 4096;

/// One block of a catalog.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub matrix: RelationMatrix,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// (1-based column, token) pairs of one line.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (idx, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..idx]));
            }
        } else if start.is_none() {
            start = Some(idx);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect()
}

#[derive(PartialEq, Clone, Copy)]
enum RowStyle {
    Spaced,
    DigitString,
}

fn parse_rm_lines(lines: &[(usize, &str)]) -> Result<RelationMatrix> {
    let Some(&(first_line, first)) = lines.first() else {
        return Err(parse_err(1, 1, "empty input: expected the order n"));
    };
    let toks = tokens(first);
    if toks.len() != 1 {
        return Err(parse_err(
            first_line,
            toks.get(1).map_or(1, |t| t.0),
            "the order line must hold a single integer",
        ));
    }
    let n: usize = toks[0]
        .1
        .parse()
        .map_err(|_| parse_err(first_line, toks[0].0, format!("invalid order '{}'", toks[0].1)))?;
    if n == 0 {
        return Err(parse_err(first_line, toks[0].0, "order must be positive"));
    }
    if n > MAX_ORDER {
        return Err(parse_err(
            first_line,
            toks[0].0,
            format!("order {n} exceeds the supported maximum of {MAX_ORDER}"),
        ));
    }

    let rows = &lines[1..];
    if rows.len() > n {
        return Err(parse_err(
            rows[n].0,
            1,
            format!("trailing content: expected exactly {n} rows"),
        ));
    }

    let mut style: Option<RowStyle> = None;
    let mut cells: Vec<u32> = Vec::with_capacity(n * n);
    for &(lineno, row) in rows {
        let toks = tokens(row);
        let row_style = if toks.len() == n {
            RowStyle::Spaced
        } else if toks.len() == 1
            && toks[0].1.len() == n
            && toks[0].1.chars().all(|c| c.is_ascii_digit())
        {
            RowStyle::DigitString
        } else {
            return Err(parse_err(
                lineno,
                1,
                format!("expected {n} entries, found {} tokens", toks.len()),
            ));
        };
        match style {
            None => style = Some(row_style),
            Some(s) if s != row_style => {
                return Err(parse_err(
                    lineno,
                    1,
                    "mixed row styles: digit-string and spaced rows in one matrix",
                ));
            }
            _ => {}
        }
        match row_style {
            RowStyle::Spaced => {
                for (col, tok) in toks {
                    let v: u32 = tok.parse().map_err(|_| {
                        parse_err(lineno, col, format!("invalid relation index '{tok}'"))
                    })?;
                    cells.push(v);
                }
            }
            RowStyle::DigitString => {
                for ch in toks[0].1.chars() {
                    cells.push(ch.to_digit(10).expect("checked ascii digit"));
                }
            }
        }
    }
    if rows.len() < n {
        let last = lines.last().map_or(first_line, |l| l.0);
        return Err(parse_err(
            last + 1,
            1,
            format!("unexpected end of input: expected {n} rows, found {}", rows.len()),
        ));
    }
    RelationMatrix::new(n, cells)
}

/// Parses a single relation matrix in rm format.
pub fn parse_relation_matrix(text: &str) -> Result<RelationMatrix> {
    parse_rm_lines(&content_lines(text))
}

/// A catalog block: (id, header line number, matrix lines).
type Block<'a> = (String, usize, Vec<(usize, &'a str)>);

fn split_blocks(text: &str) -> Result<Vec<Block<'_>>> {
    let mut blocks: Vec<Block<'_>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix('#') {
            let id = rest.trim().to_string();
            if id.is_empty() {
                return Err(parse_err(lineno, 1, "block header has an empty id"));
            }
            blocks.push((id, lineno, Vec::new()));
        } else {
            match blocks.last_mut() {
                Some((_, _, lines)) => lines.push((lineno, line)),
                None => {
                    return Err(parse_err(
                        lineno,
                        1,
                        "content before the first block header",
                    ));
                }
            }
        }
    }
    Ok(blocks)
}

/// Parses a catalog of relation matrices. Fails on the first malformed
/// block or duplicate id; entries keep file order.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (id, _, lines) in split_blocks(text)? {
        if !seen.insert(id.clone()) {
            return Err(Error::DuplicateId(id));
        }
        let matrix = parse_rm_lines(&lines)?;
        out.push(CatalogEntry { id, matrix });
    }
    Ok(out)
}

/// Catalog parse that keeps going past bad blocks: each entry carries
/// either its matrix or the error that block produced. Only a structurally
/// broken file (content before any header) fails outright.
pub fn parse_catalog_lossy(text: &str) -> Result<Vec<(String, Result<RelationMatrix>)>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (id, _, lines) in split_blocks(text)? {
        let result = if !seen.insert(id.clone()) {
            Err(Error::DuplicateId(id.clone()))
        } else {
            parse_rm_lines(&lines)
        };
        out.push((id, result));
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorDoc {
    d: usize,
    order: u64,
    p: Vec<Vec<Vec<u64>>>,
}

/// Parses the canonical tensor document: a JSON object with fields `d`,
/// `order`, and the nested `(d+1)^3` array `p`.
pub fn parse_tensor(text: &str) -> Result<IntersectionTensor> {
    let doc: TensorDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.p.len() != doc.d + 1 {
        return Err(Error::TensorShape(format!(
            "field d is {} but p has {} planes",
            doc.d,
            doc.p.len()
        )));
    }
    IntersectionTensor::from_nested(doc.order, &doc.p)
}

/// Writes the canonical tensor document. `parse_tensor` inverts this
/// bit-exactly.
pub fn emit_tensor(t: &IntersectionTensor) -> String {
    let doc = TensorDoc {
        d: t.class_count(),
        order: t.order(),
        p: t.to_nested(),
    };
    serde_json::to_string(&doc).expect("tensor document serializes")
}

/// Output flavour of `emit_report`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Structured,
}

/// One line of a batch report: a full analysis or a per-entry failure.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ReportEntry {
    Report(AnalysisReport),
    Failed { id: String, error: String },
}

fn subset_cell(indices: &[usize]) -> String {
    let mut s = String::from("{");
    for (i, idx) in indices.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&idx.to_string());
    }
    s.push('}');
    s
}

fn text_table(entries: &[ReportEntry]) -> String {
    const HEADERS: [&str; 16] = [
        "id",
        "order",
        "d",
        "prime",
        "quasi-thin",
        "thin-thin-res",
        "p'-valenced",
        "radical",
        "residue",
        "min-singular",
        "closure(S_p')",
        "dim",
        "oracle",
        "structural",
        "agree",
        "valencies",
    ];
    let mut rows: Vec<Vec<String>> = Vec::new();
    for entry in entries {
        match entry {
            ReportEntry::Report(r) => rows.push(vec![
                r.id.clone(),
                r.order.to_string(),
                r.d.to_string(),
                r.prime.to_string(),
                r.is_quasi_thin.to_string(),
                r.has_thin_thin_residue.to_string(),
                r.is_p_prime_valenced.to_string(),
                subset_cell(&r.thin_radical),
                subset_cell(&r.thin_residue),
                subset_cell(&r.min_singular),
                subset_cell(&r.s_p_prime_closure),
                r.fixed_space_dim.to_string(),
                if r.transitive_oracle { "transitive" } else { "not-transitive" }.to_string(),
                match r.transitive_structural {
                    Some(true) => "transitive".to_string(),
                    Some(false) => "not-transitive".to_string(),
                    None => "n/a".to_string(),
                },
                match r.methods_agree {
                    Some(b) => b.to_string(),
                    None => "not-run".to_string(),
                },
                format!(
                    "[{}]",
                    r.valencies
                        .iter()
                        .map(|k| k.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            ]),
            ReportEntry::Failed { id, error } => {
                let mut row = vec![id.clone(), format!("ERROR: {error}")];
                row.resize(HEADERS.len(), String::new());
                rows.push(row);
            }
        }
    }
    let mut widths: Vec<usize> = HEADERS.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let render = |cells: &[String], widths: &[usize], out: &mut String| {
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            if i + 1 < cells.len() {
                out.push_str(&" ".repeat(widths[i] - cell.len()));
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    let headers: Vec<String> = HEADERS.iter().map(|s| s.to_string()).collect();
    render(&headers, &widths, &mut out);
    for row in &rows {
        render(row, &widths, &mut out);
    }
    out
}

/// Serializes a batch report. Structured mode is a JSON array with
/// deterministic field and entry order; text mode is a table of the same
/// data.
pub fn emit_report(entries: &[ReportEntry], format: ReportFormat) -> String {
    match format {
        ReportFormat::Structured => {
            let mut s = serde_json::to_string_pretty(entries).expect("reports serialize");
            s.push('\n');
            s
        }
        ReportFormat::Text => text_table(entries),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::analyze;
    use crate::scheme::{
        scheme_from_relation_matrix, tensor_from_relation_matrix, CheckMode,
    };

    const PENTAGON_RM: &str = "5\n01221\n10122\n21012\n22101\n12210\n";

    #[test]
    fn parses_trivial_matrix() {
        let m = parse_relation_matrix("1\n0\n").unwrap();
        assert_eq!(m.n(), 1);
        assert_eq!(m.class_count(), 0);
    }

    #[test]
    fn parses_pentagon_digit_strings() {
        let m = parse_relation_matrix(PENTAGON_RM).unwrap();
        assert_eq!(m.n(), 5);
        assert_eq!(m.class_count(), 2);
        for x in 0..5i32 {
            for y in 0..5i32 {
                let diff = (x - y).rem_euclid(5);
                let want = match diff {
                    0 => 0,
                    1 | 4 => 1,
                    _ => 2,
                };
                assert_eq!(m.cell(x as usize, y as usize), want);
            }
        }
    }

    #[test]
    fn spaced_rows_and_comments() {
        let text = "# a comment\n\n3\n0 1 2\n2 0 1\n1 2 0\n";
        let m = parse_relation_matrix(text).unwrap();
        assert_eq!(m.cell(0, 1), 1);
        let crlf = text.replace('\n', "\r\n");
        assert_eq!(parse_relation_matrix(&crlf).unwrap(), m);
    }

    #[test]
    fn short_row_is_a_parse_error() {
        match parse_relation_matrix("3\n0 1\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn mixed_styles_rejected() {
        let text = "3\n012\n2 0 1\n120\n";
        assert!(matches!(
            parse_relation_matrix(text).unwrap_err(),
            Error::Parse { line: 3, .. }
        ));
    }

    #[test]
    fn trailing_rows_rejected() {
        let text = "1\n0\n0\n";
        assert!(matches!(
            parse_relation_matrix(text).unwrap_err(),
            Error::Parse { line: 3, .. }
        ));
    }

    #[test]
    fn catalog_roundtrip_and_errors() {
        let text = "# order01-no01\n1\n0\n";
        let entries = parse_catalog(text).unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].id, "order01-no01");

        assert!(parse_catalog("").unwrap().is_empty());

        let dup = "# a\n1\n0\n# a\n1\n0\n";
        assert!(matches!(
            parse_catalog(dup).unwrap_err(),
            Error::DuplicateId(id) if id == "a"
        ));

        let stray = "1\n0\n# a\n1\n0\n";
        assert!(matches!(
            parse_catalog(stray).unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn catalog_preserves_order() {
        let text = "# z\n1\n0\n# a\n2\n01\n10\n";
        let entries = parse_catalog(text).unwrap();
        assert_eq!(entries[0].id, "z");
        assert_eq!(entries[1].id, "a");
    }

    #[test]
    fn lossy_catalog_keeps_going() {
        let text = "# good\n1\n0\n# bad\n2\n01\n# dup\n1\n0\n# dup\n1\n0\n";
        let entries = parse_catalog_lossy(text).unwrap();
        assert_eq!(entries.len(), 4);
        assert!(entries[0].1.is_ok());
        assert!(entries[1].1.is_err());
        assert!(entries[2].1.is_ok());
        assert!(matches!(entries[3].1, Err(Error::DuplicateId(_))));
    }

    #[test]
    fn tensor_document_roundtrip() {
        let t = parse_tensor(r#"{"d":0,"order":1,"p":[[[1]]]}"#).unwrap();
        assert_eq!(t.class_count(), 0);
        assert_eq!(t.get(0, 0, 0), 1);

        let m = parse_relation_matrix(PENTAGON_RM).unwrap();
        let pent = tensor_from_relation_matrix(&m, CheckMode::Strict).unwrap();
        let doc = emit_tensor(&pent);
        let back = parse_tensor(&doc).unwrap();
        assert_eq!(back, pent);
        assert_eq!(back.get(1, 1, 2), 1);
    }

    #[test]
    fn ragged_tensor_rejected() {
        let err = parse_tensor(r#"{"d":1,"order":2,"p":[[[1,0],[0,1]],[[0,1]]]}"#).unwrap_err();
        assert!(matches!(err, Error::TensorShape(_)));
        assert!(matches!(
            parse_tensor("not json").unwrap_err(),
            Error::Parse { .. }
        ));
    }

    #[test]
    fn empty_report_is_empty_array() {
        assert_eq!(emit_report(&[], ReportFormat::Structured), "[]\n");
    }

    #[test]
    fn structured_report_field_order_and_values() {
        let m = parse_relation_matrix(PENTAGON_RM).unwrap();
        let s = scheme_from_relation_matrix(&m, CheckMode::Strict).unwrap();
        let r = analyze("order05-no02", &s, 2).unwrap();
        let doc = emit_report(&[ReportEntry::Report(r)], ReportFormat::Structured);
        assert!(doc.contains("\"fixed_space_dim\": 1"));
        assert!(doc.contains("\"transitive_oracle\": true"));
        let fields = [
            "\"id\"",
            "\"order\"",
            "\"d\"",
            "\"valencies\"",
            "\"prime\"",
            "\"is_quasi_thin\"",
            "\"has_thin_thin_residue\"",
            "\"is_p_prime_valenced\"",
            "\"thin_radical\"",
            "\"thin_residue\"",
            "\"min_singular\"",
            "\"s_p_prime_closure\"",
            "\"fixed_space_dim\"",
            "\"transitive_oracle\"",
            "\"transitive_structural\"",
            "\"methods_agree\"",
        ];
        let positions: Vec<usize> = fields
            .iter()
            .map(|f| doc.find(f).unwrap_or_else(|| panic!("missing field {f}")))
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "field order drifted");
    }

    #[test]
    fn not_applicable_sentinels() {
        let rows = ["012222", "102222", "220122", "221022", "222201", "222210"];
        let text = format!("6\n{}\n", rows.join("\n"));
        let m = parse_relation_matrix(&text).unwrap();
        let s = scheme_from_relation_matrix(&m, CheckMode::Strict).unwrap();
        let r = analyze("order06-no02", &s, 2).unwrap();
        let doc = emit_report(&[ReportEntry::Report(r)], ReportFormat::Structured);
        assert!(doc.contains("\"transitive_oracle\": false"));
        assert!(doc.contains("\"transitive_structural\": \"not-applicable\""));
        assert!(doc.contains("\"methods_agree\": \"not-run\""));
    }

    #[test]
    fn text_report_renders_errors() {
        let entries = [ReportEntry::Failed {
            id: "broken".into(),
            error: "no good".into(),
        }];
        let text = emit_report(&entries, ReportFormat::Text);
        assert!(text.contains("broken"));
        assert!(text.contains("ERROR: no good"));
    }
}
