//! Radii files: `vertex_id value` lines, or a JSON array in dense vertex
//! order. Values are written with 17 significant digits.

use thiserror::Error;

use super::{GeometryError, MetricStructure};
use crate::complex::Complex;
use crate::scalar::{fmt_exact, Real};

#[derive(Debug, Error)]
pub enum RadiiError {
    #[error("malformed radii file (line {line}): {detail}")]
    Malformed { line: usize, detail: String },
    #[error("radius given for unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("vertex {0} given more than once")]
    Duplicate(usize),
    #[error("no radius for vertex {0}")]
    Missing(usize),
    #[error("expected {expected} radii, found {found}")]
    Count { expected: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

pub fn read_radii<T: Real>(text: &str, c: &Complex) -> Result<MetricStructure<T>, RadiiError> {
    let body = text.trim_start();
    let values: Vec<f64> = if body.starts_with('[') {
        let v: Vec<f64> = serde_json::from_str(body.trim())
            .map_err(|e| RadiiError::Malformed { line: e.line(), detail: e.to_string() })?;
        if v.len() != c.n_vertices() {
            return Err(RadiiError::Count { expected: c.n_vertices(), found: v.len() });
        }
        v
    } else {
        read_lines(text, c)?
    };
    let radii = values
        .into_iter()
        .map(|x| T::from_f64(x).ok_or(RadiiError::Malformed { line: 0, detail: format!("{x} not representable") }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MetricStructure::new(radii)?)
}

fn read_lines(text: &str, c: &Complex) -> Result<Vec<f64>, RadiiError> {
    let mut slots: Vec<Option<f64>> = vec![None; c.n_vertices()];
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |detail: String| RadiiError::Malformed { line: lineno + 1, detail };
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(bad(format!("expected `vertex_id value`, got `{content}`")));
        }
        let id: usize = toks[0].parse().map_err(|_| bad(format!("bad vertex id `{}`", toks[0])))?;
        let value: f64 = toks[1].parse().map_err(|_| bad(format!("bad value `{}`", toks[1])))?;
        let v = c.index_of(id).map_err(|_| RadiiError::UnknownVertex(id))?;
        if slots[v].replace(value).is_some() {
            return Err(RadiiError::Duplicate(id));
        }
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(v, x)| x.ok_or(RadiiError::Missing(c.vertex_id(v))))
        .collect()
}

pub fn write_radii_lines<T: Real>(c: &Complex, m: &MetricStructure<T>) -> String {
    m.radii()
        .iter()
        .enumerate()
        .map(|(v, &r)| format!("{} {}\n", c.vertex_id(v), fmt_exact(r)))
        .collect()
}

pub fn write_radii_json<T: Real>(m: &MetricStructure<T>) -> String {
    let items: Vec<String> = m.radii().iter().map(|&r| fmt_exact(r)).collect();
    format!("[{}]\n", items.join(", "))
}
