//! Salvage of truncated or damaged SVG text.
//!
//! Repair re-scans the original bytes with the same tokenizer the parser
//! uses and accumulates an edit list: cut a trailing incomplete token or
//! attribute, drop the invalid tail of a path `d` value, cut bogus markup,
//! and finally append closing tags for every unclosed element in reverse
//! open order. A document that already parses comes back byte-identical.

use crate::model::{Issue, ValidationReport};
use crate::parse::xml::{self, Event, ScanError, Tokenizer};
use crate::parse::{longest_valid_prefix, parse_path_data, parse_svg_with_issues, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum RepairError {
    #[error("no <svg> start tag found")]
    Unrepairable,
}

pub fn validate(text: &str) -> ValidationReport {
    match parse_svg_with_issues(text) {
        Ok((_, issues)) => ValidationReport { compilable: true, repaired: false, issues },
        Err(e) => ValidationReport {
            compilable: false,
            repaired: false,
            issues: vec![parse_error_issue(&e)],
        },
    }
}

fn parse_error_issue(e: &ParseError) -> Issue {
    match e {
        ParseError::MalformedXml { offset, .. }
        | ParseError::MalformedPathData { offset, .. } => Issue::error(e.to_string(), *offset),
    }
}

/// Replace `[start, end)` with `replacement`. Cuts and insertions are the
/// degenerate cases.
struct Edit {
    start: usize,
    end: usize,
    replacement: String,
}

pub fn repair(text: &str) -> Result<(String, ValidationReport), RepairError> {
    let root_at = xml::find_svg_tag(text).ok_or(RepairError::Unrepairable)?;
    let eof = text.len();
    let mut tok = Tokenizer::new(text, root_at);
    let mut edits: Vec<Edit> = Vec::new();
    let mut issues: Vec<Issue> = Vec::new();
    // Open elements; the bool records whether the frame entered ignored
    // territory (unsupported element or shape children), which suppresses
    // path-data fixes exactly where the parser would not read them.
    let mut stack: Vec<(&str, bool)> = Vec::new();
    let mut skip_depth = 0usize;
    let mut seen_root = false;

    loop {
        match tok.next_event() {
            Ok(Event::Start(tag)) => {
                let is_root = !seen_root;
                seen_root = true;
                if skip_depth == 0 && tag.name == "path" {
                    fix_path_data(&tag.attrs, &mut edits, &mut issues);
                }
                if tag.self_closing {
                    if is_root {
                        break;
                    }
                    continue;
                }
                let container = tag.name == "g" || (is_root && tag.name == "svg");
                let enters_skip = skip_depth > 0 || !container;
                if enters_skip {
                    skip_depth += 1;
                }
                stack.push((tag.name, enters_skip));
            }
            Ok(Event::End { name, start }) => {
                let end_span = start..tok.pos();
                match stack.iter().rposition(|(n, _)| *n == name) {
                    Some(at) if at + 1 == stack.len() => {
                        let (_, skipped) = stack.pop().unwrap();
                        if skipped {
                            skip_depth -= 1;
                        }
                        if stack.is_empty() {
                            break;
                        }
                    }
                    Some(at) => {
                        // Close the elements left open above the match.
                        let mut closers = String::new();
                        while stack.len() > at + 1 {
                            let (n, skipped) = stack.pop().unwrap();
                            if skipped {
                                skip_depth -= 1;
                            }
                            closers.push_str("</");
                            closers.push_str(n);
                            closers.push('>');
                        }
                        issues.push(Issue::warning(
                            format!("inserted `{closers}` before mismatched </{name}>"),
                            start,
                        ));
                        edits.push(Edit { start, end: start, replacement: closers });
                        let (_, skipped) = stack.pop().unwrap();
                        if skipped {
                            skip_depth -= 1;
                        }
                        if stack.is_empty() {
                            break;
                        }
                    }
                    None => {
                        issues.push(Issue::warning(
                            format!("removed stray end tag </{name}>"),
                            start,
                        ));
                        edits.push(Edit {
                            start: end_span.start,
                            end: end_span.end,
                            replacement: String::new(),
                        });
                    }
                }
            }
            Ok(Event::Text | Event::Misc) => {}
            Ok(Event::Eof) => break,
            Err(ScanError::TruncatedStart(ts)) => {
                if ts.name.is_none() {
                    issues.push(Issue::warning("removed dangling `<` at end of input", ts.start));
                    edits.push(Edit { start: ts.start, end: eof, replacement: String::new() });
                    break;
                }
                let is_path = skip_depth == 0 && ts.name == Some("path");
                if is_path {
                    fix_path_data(&ts.attrs, &mut edits, &mut issues);
                }
                match &ts.open_value {
                    Some((attr_name, span)) => {
                        // EOF inside a quoted value: close the quote, after
                        // dropping any incomplete trailing path command.
                        let mut quote_at = eof;
                        if is_path && *attr_name == "d" {
                            let (_, valid_end) = longest_valid_prefix(&text[span.clone()]);
                            quote_at = span.start + valid_end;
                        }
                        edits.push(Edit { start: quote_at, end: eof, replacement: "\"".into() });
                    }
                    None => {
                        if ts.keep_end < eof {
                            edits.push(Edit {
                                start: ts.keep_end,
                                end: eof,
                                replacement: String::new(),
                            });
                        }
                    }
                }
                edits.push(Edit { start: eof, end: eof, replacement: "/>".into() });
                issues.push(Issue::warning(
                    format!("self-closed truncated <{}>", ts.name.unwrap()),
                    ts.start,
                ));
                break;
            }
            Err(ScanError::TruncatedOther { start }) => {
                issues.push(Issue::warning("removed unterminated markup at end of input", start));
                edits.push(Edit { start, end: eof, replacement: String::new() });
                break;
            }
            Err(ScanError::Bogus { start, resume, message }) => {
                if !seen_root {
                    // The root tag itself is mangled; salvaging a bare root
                    // keeps the output parseable.
                    seen_root = true;
                    stack.push(("svg", false));
                    issues.push(Issue::warning(
                        format!("rewrote damaged root tag ({message})"),
                        start,
                    ));
                    edits.push(Edit { start, end: resume, replacement: "<svg>".into() });
                } else {
                    issues.push(Issue::warning(format!("removed bogus markup ({message})"), start));
                    edits.push(Edit { start, end: resume, replacement: String::new() });
                }
            }
        }
    }

    if !stack.is_empty() {
        let mut closers = String::new();
        for (name, _) in stack.iter().rev() {
            closers.push_str("</");
            closers.push_str(name);
            closers.push('>');
        }
        issues.push(Issue::warning(
            format!("appended `{closers}` for unclosed elements"),
            eof,
        ));
        edits.push(Edit { start: eof, end: eof, replacement: closers });
    }

    let out = apply_edits(text, edits);
    let repaired = out != text;
    let report = match parse_svg_with_issues(&out) {
        Ok((_, mut parse_issues)) => {
            issues.append(&mut parse_issues);
            ValidationReport { compilable: true, repaired, issues }
        }
        Err(e) => {
            // The strategy above is meant to be total; reaching this arm is
            // a bug, but the report stays honest about the failure.
            debug_assert!(false, "repair produced unparseable output: {e}\n{out}");
            issues.push(parse_error_issue(&e));
            ValidationReport { compilable: false, repaired, issues }
        }
    };
    Ok((out, report))
}

/// Truncates an invalid `d` attribute to its longest valid prefix. The
/// parser reads the last duplicate, so that is the one checked.
fn fix_path_data(attrs: &[xml::Attr], edits: &mut Vec<Edit>, issues: &mut Vec<Issue>) {
    let Some(attr) = attrs.iter().rev().find(|a| a.name == "d") else {
        return;
    };
    if parse_path_data(&attr.value).is_ok() {
        return;
    }
    let (_, valid_end) = longest_valid_prefix(&attr.value);
    let replacement = escape_attr(&attr.value[..valid_end]);
    issues.push(Issue::warning(
        "dropped invalid tail of path data",
        attr.value_span.start,
    ));
    edits.push(Edit { start: attr.value_span.start, end: attr.value_span.end, replacement });
}

fn escape_attr(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for c in raw.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn apply_edits(text: &str, mut edits: Vec<Edit>) -> String {
    edits.retain(|e| e.start < e.end || !e.replacement.is_empty());
    edits.sort_by_key(|e| e.start);
    let mut out = String::with_capacity(text.len() + 16);
    let mut pos = 0;
    for e in edits {
        debug_assert!(e.start >= pos, "overlapping edits");
        out.push_str(&text[pos..e.start]);
        out.push_str(&e.replacement);
        pos = e.end;
    }
    out.push_str(&text[pos..]);
    out
}
