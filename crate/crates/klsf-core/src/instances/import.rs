//! Best-effort importer for externally published instance files.
//!
//! The published corpora circulate in a few undocumented plain-text
//! layouts. This importer recognizes, in order:
//!
//! 1. the canonical format of this crate (`p klsf ...`),
//! 2. an n-by-n label matrix, optionally preceded by the label count:
//!    `n [l] a11 ... ann` where entry `(i, j)` is the label of edge
//!    `i-j` and `0` means no edge,
//! 3. an edge list `n m` followed by `m` triples `u v label`, 0- or
//!    1-based.
//!
//! Anything else fails loudly, describing why each layout was rejected.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use thiserror::Error;

use crate::graph::{Edge, LabeledGraph};
use crate::instances::format::read_instance;

#[derive(Debug, Error)]
pub enum ImportError {
    #[error("unrecognized instance layout: {0}")]
    Unrecognized(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses the graph of an official instance file. The published files do
/// not carry a budget; the caller picks one.
pub fn import_official<R: BufRead>(
    mut reader: R,
    source_name: &str,
) -> Result<LabeledGraph, ImportError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;

    if text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('c'))
        .is_some_and(|l| l.starts_with("p klsf"))
    {
        return read_instance(text.as_bytes(), source_name)
            .map(|inst| inst.graph)
            .map_err(|e| ImportError::Unrecognized(format!("canonical layout failed: {e}")));
    }

    let mut values = Vec::new();
    for token in text.split_whitespace() {
        match token.parse::<i64>() {
            Ok(v) if v >= 0 => values.push(v as usize),
            _ => {
                return Err(ImportError::Unrecognized(format!(
                    "non-numeric token {token:?}; expected whitespace-separated integers"
                )))
            }
        }
    }

    let matrix_err = match try_matrix(&values) {
        Ok(g) => return Ok(g),
        Err(e) => e,
    };
    let triples_err = match try_edge_list(&values) {
        Ok(g) => return Ok(g),
        Err(e) => e,
    };
    Err(ImportError::Unrecognized(format!(
        "matrix layout: {matrix_err}; edge-list layout: {triples_err}"
    )))
}

pub fn import_official_file<P: AsRef<Path>>(path: P) -> Result<LabeledGraph, ImportError> {
    let path = path.as_ref();
    let file = File::open(path)?;
    import_official(BufReader::new(file), &path.display().to_string())
}

fn try_matrix(values: &[usize]) -> Result<LabeledGraph, String> {
    if values.is_empty() {
        return Err("empty file".into());
    }
    let n = values[0];
    if n < 2 {
        return Err(format!("leading vertex count {n} is below 2"));
    }
    let (declared_labels, matrix) = if values.len() == 1 + n * n {
        (None, &values[1..])
    } else if values.len() == 2 + n * n {
        (Some(values[1]), &values[2..])
    } else {
        return Err(format!(
            "token count {} fits neither n^2+1 nor n^2+2 for n={n}",
            values.len()
        ));
    };
    let mut edges = Vec::new();
    let mut max_label = 0;
    for i in 0..n {
        if matrix[i * n + i] != 0 {
            return Err(format!("nonzero diagonal entry at row {}", i + 1));
        }
        for j in (i + 1)..n {
            let a = matrix[i * n + j];
            let b = matrix[j * n + i];
            if a != b {
                return Err(format!("matrix is not symmetric at ({}, {})", i + 1, j + 1));
            }
            if a > 0 {
                max_label = max_label.max(a);
                edges.push(Edge::new(i + 1, j + 1, a));
            }
        }
    }
    let labels = match declared_labels {
        Some(l) if l < max_label => {
            return Err(format!(
                "declared label count {l} below the largest entry {max_label}"
            ))
        }
        Some(l) if l >= 1 => l,
        Some(l) => return Err(format!("declared label count {l} is not positive")),
        None if max_label >= 1 => max_label,
        None => return Err("matrix holds no edges and no label count".into()),
    };
    LabeledGraph::new(n, edges, labels).map_err(|e| e.to_string())
}

fn try_edge_list(values: &[usize]) -> Result<LabeledGraph, String> {
    if values.len() < 2 {
        return Err("too few tokens for a header".into());
    }
    let n = values[0];
    let m = values[1];
    if n < 2 {
        return Err(format!("vertex count {n} is below 2"));
    }
    if values.len() != 2 + 3 * m {
        return Err(format!(
            "token count {} does not match n m plus {m} triples",
            values.len()
        ));
    }
    let triples: Vec<(usize, usize, usize)> = values[2..]
        .chunks_exact(3)
        .map(|c| (c[0], c[1], c[2]))
        .collect();
    // ids touching 0 mean the file is 0-based
    let zero_based = triples.iter().any(|&(u, v, l)| u == 0 || v == 0 || l == 0);
    let shift = usize::from(zero_based);
    let mut edges = Vec::with_capacity(m);
    let mut max_label = 0;
    for &(u, v, l) in &triples {
        let (u, v, l) = (u + shift, v + shift, l + shift);
        max_label = max_label.max(l);
        edges.push(Edge::new(u, v, l));
    }
    LabeledGraph::new(n, edges, max_label).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_a_label_matrix_with_declared_label_count() {
        // 3 vertices, 2 labels: edge 1-2 label 1, edge 2-3 label 2
        let text = "3 2\n0 1 0\n1 0 2\n0 2 0\n";
        let g = import_official(text.as_bytes(), "t").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.label_count(), 2);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn reads_a_label_matrix_without_label_count() {
        let text = "3\n0 1 0\n1 0 3\n0 3 0\n";
        let g = import_official(text.as_bytes(), "t").unwrap();
        assert_eq!(g.label_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn reads_a_one_based_edge_list() {
        let text = "4 3\n1 2 1\n2 3 2\n3 4 1\n";
        let g = import_official(text.as_bytes(), "t").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.label_count(), 2);
    }

    #[test]
    fn reads_a_zero_based_edge_list() {
        let text = "4 3\n0 1 0\n1 2 1\n2 3 0\n";
        let g = import_official(text.as_bytes(), "t").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges()[0], Edge::new(1, 2, 1));
    }

    #[test]
    fn reads_the_canonical_format_too() {
        let text = "p klsf 3 1 2 1\ne 1 2 2\n";
        let g = import_official(text.as_bytes(), "t").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn asymmetric_matrices_fail_loudly() {
        let text = "3\n0 1 0\n2 0 0\n0 0 0\n";
        let err = import_official(text.as_bytes(), "t").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("not symmetric"), "{msg}");
    }

    #[test]
    fn junk_fails_loudly_with_both_reasons() {
        let err = import_official("1 2 3 4 5\n".as_bytes(), "t").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("matrix layout"), "{msg}");
        assert!(msg.contains("edge-list layout"), "{msg}");
        let err = import_official("hello world\n".as_bytes(), "t").unwrap_err();
        assert!(err.to_string().contains("non-numeric"), "{err}");
    }
}
