//! Canonical instance file format.
//!
//! ```text
//! c optional comment lines
//! p klsf <n> <m> <l> <k>
//! e <u> <v> <label>        (m lines, 1-based ids)
//! ```
//!
//! ASCII, newline-terminated, trivially parseable from any language.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::graph::{Edge, LabeledGraph};
use crate::instances::{Instance, InstanceError, Provenance};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex id {id} out of range [1, {max}]")]
    VertexOutOfRange { line: usize, id: usize, max: usize },
    #[error("line {line}: label id {id} out of range [1, {max}]")]
    LabelOutOfRange { line: usize, id: usize, max: usize },
    #[error("line {line}: self-loop at vertex {id}")]
    SelfLoop { line: usize, id: usize },
    #[error("header declared {expected} edges but the file holds {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("line {line}: budget k={k} outside [1, {labels}]")]
    BudgetOutOfRange {
        line: usize,
        k: usize,
        labels: usize,
    },
    #[error("missing header line 'p klsf n m l k'")]
    MissingHeader,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Writes the instance; when it was generated, a comment line records the
/// generator parameters so regeneration is byte-identical.
pub fn write_instance<W: Write>(inst: &Instance, mut sink: W) -> io::Result<()> {
    if let Provenance::Generated { spec } = &inst.provenance {
        writeln!(
            sink,
            "c generated n={} l={} d={} seed={}",
            spec.n, spec.label_count, spec.density, spec.seed
        )?;
    }
    let g = &inst.graph;
    writeln!(
        sink,
        "p klsf {} {} {} {}",
        g.vertex_count(),
        g.edge_count(),
        g.label_count(),
        inst.k
    )?;
    for e in g.edges() {
        writeln!(sink, "e {} {} {}", e.u, e.v, e.label)?;
    }
    Ok(())
}

pub fn write_instance_file<P: AsRef<Path>>(inst: &Instance, path: P) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_instance(inst, &mut w)?;
    w.flush()
}

/// Reads an instance, preserving edge order. `source_name` ends up in the
/// provenance.
pub fn read_instance<R: BufRead>(reader: R, source_name: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize, usize, usize)> = None;
    let mut edges: Vec<Edge> = Vec::new();
    let mut header_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('c') {
            continue;
        }
        let mut fields = text.split_whitespace();
        match fields.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        message: "duplicate header line".into(),
                    });
                }
                if fields.next() != Some("klsf") {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        message: "header must read 'p klsf n m l k'".into(),
                    });
                }
                let mut next_int = |name: &str| -> Result<usize, ParseError> {
                    fields
                        .next()
                        .ok_or_else(|| ParseError::Malformed {
                            line: line_no,
                            message: format!("header is missing the {name} field"),
                        })?
                        .parse()
                        .map_err(|_| ParseError::Malformed {
                            line: line_no,
                            message: format!("header field {name} is not an integer"),
                        })
                };
                let n = next_int("n")?;
                let m = next_int("m")?;
                let l = next_int("l")?;
                let k = next_int("k")?;
                if fields.next().is_some() {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        message: "trailing fields after the header".into(),
                    });
                }
                if n < 1 {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        message: "vertex count must be positive".into(),
                    });
                }
                if k < 1 || k > l {
                    return Err(ParseError::BudgetOutOfRange {
                        line: line_no,
                        k,
                        labels: l,
                    });
                }
                header = Some((n, m, l, k));
                header_line = line_no;
                edges.reserve(m);
            }
            Some("e") => {
                let Some((n, m, l, _)) = header else {
                    return Err(ParseError::MissingHeader);
                };
                if edges.len() == m {
                    return Err(ParseError::EdgeCountMismatch {
                        expected: m,
                        found: edges.len() + 1,
                    });
                }
                let mut next_int = |name: &str| -> Result<usize, ParseError> {
                    fields
                        .next()
                        .ok_or_else(|| ParseError::Malformed {
                            line: line_no,
                            message: format!("edge line is missing the {name} field"),
                        })?
                        .parse()
                        .map_err(|_| ParseError::Malformed {
                            line: line_no,
                            message: format!("edge field {name} is not an integer"),
                        })
                };
                let u = next_int("u")?;
                let v = next_int("v")?;
                let label = next_int("label")?;
                if fields.next().is_some() {
                    return Err(ParseError::Malformed {
                        line: line_no,
                        message: "trailing fields after the edge".into(),
                    });
                }
                for id in [u, v] {
                    if id < 1 || id > n {
                        return Err(ParseError::VertexOutOfRange {
                            line: line_no,
                            id,
                            max: n,
                        });
                    }
                }
                if u == v {
                    return Err(ParseError::SelfLoop {
                        line: line_no,
                        id: u,
                    });
                }
                if label < 1 || label > l {
                    return Err(ParseError::LabelOutOfRange {
                        line: line_no,
                        id: label,
                        max: l,
                    });
                }
                edges.push(Edge::new(u, v, label));
            }
            Some(other) => {
                return Err(ParseError::Malformed {
                    line: line_no,
                    message: format!("unknown line type {other:?}"),
                });
            }
            None => unreachable!("blank lines are skipped"),
        }
    }
    let Some((n, m, l, k)) = header else {
        return Err(ParseError::MissingHeader);
    };
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    let graph = LabeledGraph::new(n, edges, l).map_err(|e| ParseError::Malformed {
        line: header_line,
        message: e.to_string(),
    })?;
    let instance = Instance::new(
        graph,
        k,
        Provenance::Loaded {
            source: source_name.to_string(),
        },
    )
    .map_err(|e: InstanceError| ParseError::Malformed {
        line: header_line,
        message: e.to_string(),
    })?;
    Ok(instance)
}

pub fn read_instance_file<P: AsRef<Path>>(path: P) -> Result<Instance, ParseError> {
    let path = path.as_ref();
    let file = File::open(path)?;
    read_instance(BufReader::new(file), &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{generate_instance, InstanceSpec};

    fn roundtrip(inst: &Instance) -> Instance {
        let mut buf = Vec::new();
        write_instance(inst, &mut buf).unwrap();
        read_instance(buf.as_slice(), "<memory>").unwrap()
    }

    #[test]
    fn roundtrip_preserves_graph_and_budget() {
        for seed in 0..50u64 {
            let spec = InstanceSpec::new(12, 5, 0.5, seed);
            if let Ok(inst) = generate_instance(&spec) {
                let back = roundtrip(&inst);
                assert_eq!(back.graph, inst.graph, "edge order must be preserved");
                assert_eq!(back.k, inst.k);
            }
        }
    }

    #[test]
    fn self_loop_is_a_parse_error() {
        let text = "p klsf 6 1 2 1\ne 5 5 1\n";
        let err = read_instance(text.as_bytes(), "t").unwrap_err();
        assert!(matches!(err, ParseError::SelfLoop { line: 2, id: 5 }));
    }

    #[test]
    fn declared_edge_count_must_match() {
        let text = "p klsf 4 3 2 1\ne 1 2 1\ne 2 3 2\n";
        let err = read_instance(text.as_bytes(), "t").unwrap_err();
        assert!(matches!(
            err,
            ParseError::EdgeCountMismatch {
                expected: 3,
                found: 2
            }
        ));
        let long = "p klsf 4 1 2 1\ne 1 2 1\ne 2 3 2\n";
        let err = read_instance(long.as_bytes(), "t").unwrap_err();
        assert!(matches!(err, ParseError::EdgeCountMismatch { .. }));
    }

    #[test]
    fn out_of_range_ids_carry_line_numbers() {
        let text = "c hi\np klsf 4 2 2 1\ne 1 9 1\ne 2 3 2\n";
        let err = read_instance(text.as_bytes(), "t").unwrap_err();
        assert!(matches!(
            err,
            ParseError::VertexOutOfRange {
                line: 3,
                id: 9,
                max: 4
            }
        ));
        let text = "p klsf 4 1 2 1\ne 1 2 7\n";
        let err = read_instance(text.as_bytes(), "t").unwrap_err();
        assert!(matches!(
            err,
            ParseError::LabelOutOfRange {
                line: 2,
                id: 7,
                max: 2
            }
        ));
    }

    #[test]
    fn malformed_headers_are_rejected() {
        assert!(matches!(
            read_instance("e 1 2 1\n".as_bytes(), "t").unwrap_err(),
            ParseError::MissingHeader
        ));
        assert!(matches!(
            read_instance("p dimacs 4 1 2 1\n".as_bytes(), "t").unwrap_err(),
            ParseError::Malformed { line: 1, .. }
        ));
        assert!(matches!(
            read_instance("p klsf 4 1 2\n".as_bytes(), "t").unwrap_err(),
            ParseError::Malformed { line: 1, .. }
        ));
        assert!(matches!(
            read_instance("p klsf 4 0 2 9\n".as_bytes(), "t").unwrap_err(),
            ParseError::BudgetOutOfRange {
                line: 1,
                k: 9,
                labels: 2
            }
        ));
    }

    #[test]
    fn budget_above_labels_is_rejected() {
        let text = "p klsf 4 0 3 4\n";
        assert!(matches!(
            read_instance(text.as_bytes(), "t").unwrap_err(),
            ParseError::BudgetOutOfRange { .. }
        ));
    }
}
