//! Facet file reading and canonical writing.
//!
//! Two input layouts are accepted: one facet per line (four integers, `#`
//! starts a comment), or a single bracketed list-of-lists such as
//! `[[1,2,3,4],[1,2,3,5]]`. The bracketed form may carry a `name=` prefix, as
//! in published triangulation lists.

use super::{ComplexError, FacetList};

pub fn parse_facet_list(text: &str) -> Result<FacetList, ComplexError> {
    let facets = read_facets(text)?;
    let n = facets.iter().flatten().copied().max().unwrap_or(0);
    FacetList::new(n, facets)
}

/// Like [`parse_facet_list`], but with an explicitly declared vertex count.
pub fn parse_facet_list_declared(text: &str, n_vertices: usize) -> Result<FacetList, ComplexError> {
    FacetList::new(n_vertices, read_facets(text)?)
}

fn read_facets(text: &str) -> Result<Vec<[usize; 4]>, ComplexError> {
    let trimmed = text.trim_start();
    let body = match trimmed.find('=') {
        Some(eq) if trimmed[eq + 1..].trim_start().starts_with('[') && !trimmed[..eq].contains('\n') => {
            &trimmed[eq + 1..]
        }
        _ => trimmed,
    };
    if body.starts_with('[') {
        read_bracketed(body)
    } else {
        read_lines(text)
    }
}

fn read_bracketed(body: &str) -> Result<Vec<[usize; 4]>, ComplexError> {
    let raw: Vec<Vec<i64>> = serde_json::from_str(body.trim())
        .map_err(|e| ComplexError::Malformed { line: e.line(), detail: e.to_string() })?;
    raw.into_iter()
        .enumerate()
        .map(|(idx, facet)| to_facet(&facet, idx + 1))
        .collect()
}

fn read_lines(text: &str) -> Result<Vec<[usize; 4]>, ComplexError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let ids = content
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|tok| {
                tok.parse::<i64>().map_err(|_| ComplexError::Malformed {
                    line: lineno + 1,
                    detail: format!("bad token `{tok}`"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(to_facet(&ids, lineno + 1)?);
    }
    Ok(out)
}

fn to_facet(ids: &[i64], line: usize) -> Result<[usize; 4], ComplexError> {
    if ids.len() != 4 {
        return Err(ComplexError::Malformed {
            line,
            detail: format!("expected 4 vertex ids, found {}", ids.len()),
        });
    }
    let mut facet = [0usize; 4];
    for (slot, &id) in facet.iter_mut().zip(ids) {
        if id < 1 {
            return Err(ComplexError::IdOutOfRange { id, n_vertices: None });
        }
        *slot = id as usize;
    }
    Ok(facet)
}

/// Writes the canonical one-facet-per-line form: each facet sorted, facets in
/// lexicographic order.
pub fn write_facet_list(fl: &FacetList) -> String {
    let mut facets: Vec<[usize; 4]> = fl
        .facets()
        .iter()
        .map(|f| {
            let mut s = *f;
            s.sort_unstable();
            s
        })
        .collect();
    facets.sort_unstable();
    let mut out = String::with_capacity(facets.len() * 12);
    for f in facets {
        out.push_str(&format!("{} {} {} {}\n", f[0], f[1], f[2], f[3]));
    }
    out
}
