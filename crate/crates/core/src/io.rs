//! JSON instance and allocation files.
//!
//! Costs are written as exact rationals in lowest terms (`"3/4"`, `"2"`).
//! Emitting is canonical, so parsing and re-emitting a file written by this
//! module reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    format_rational, validate_instance, Allocation, Instance, InstanceError, RawInstance,
    ValidationErrors,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message} at line {line}, column {column}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: costs[{agent}][{item}]: {message}")]
    BadCell {
        path: String,
        agent: usize,
        item: usize,
        message: String,
    },
    #[error("{path}: unsupported format version {version}")]
    UnsupportedVersion { path: String, version: u32 },
    #[error("{path}: {source}")]
    Invalid {
        path: String,
        source: ValidationErrors,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Where an instance came from when it was generated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: String,
    pub seed: u64,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub provenance: Option<Provenance>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    version: u32,
    n: usize,
    m: usize,
    costs: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationFile {
    pub version: u32,
    pub bundles: Vec<Vec<usize>>,
    pub partial: bool,
}

impl AllocationFile {
    pub fn new(alloc: &Allocation, m: usize) -> Self {
        AllocationFile {
            version: FORMAT_VERSION,
            bundles: alloc.bundles().to_vec(),
            partial: !alloc.is_complete(m),
        }
    }

    pub fn allocation(&self) -> Allocation {
        Allocation::new(self.bundles.clone())
    }
}

impl InstanceFile {
    pub fn new(instance: Instance) -> Self {
        InstanceFile {
            instance,
            provenance: None,
        }
    }
}

fn syntax(path: &str, err: serde_json::Error) -> FormatError {
    FormatError::Syntax {
        path: path.to_string(),
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

/// Parses and validates an instance document. `path` is used in messages.
pub fn parse_instance(text: &str, path: &str) -> Result<InstanceFile, FormatError> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| syntax(path, e))?;
    if doc.version != FORMAT_VERSION {
        return Err(FormatError::UnsupportedVersion {
            path: path.to_string(),
            version: doc.version,
        });
    }
    let raw = RawInstance {
        n: doc.n,
        m: doc.m,
        costs: doc.costs,
        labels: doc.labels,
    };
    let instance = validate_instance(&raw).map_err(|errors| {
        // A malformed number is a parse failure; report its cell first.
        match errors.0.iter().find_map(|e| match e {
            InstanceError::BadRational {
                agent,
                item,
                source,
            } => Some((*agent, *item, source.to_string())),
            _ => None,
        }) {
            Some((agent, item, message)) => FormatError::BadCell {
                path: path.to_string(),
                agent,
                item,
                message,
            },
            None => FormatError::Invalid {
                path: path.to_string(),
                source: errors,
            },
        }
    })?;
    Ok(InstanceFile {
        instance,
        provenance: doc.provenance,
    })
}

/// Canonical pretty JSON with a trailing newline.
pub fn emit_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let doc = InstanceDoc {
        version: FORMAT_VERSION,
        n: inst.n(),
        m: inst.m(),
        costs: inst
            .rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect(),
        labels: inst.labels().map(<[String]>::to_vec),
        provenance: file.provenance.clone(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("instance documents always serialize");
    s.push('\n');
    s
}

pub fn parse_allocation(text: &str, path: &str) -> Result<AllocationFile, FormatError> {
    let file: AllocationFile = serde_json::from_str(text).map_err(|e| syntax(path, e))?;
    if file.version != FORMAT_VERSION {
        return Err(FormatError::UnsupportedVersion {
            path: path.to_string(),
            version: file.version,
        });
    }
    Ok(file)
}

pub fn emit_allocation(file: &AllocationFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("allocation documents always serialize");
    s.push('\n');
    s
}

fn read_text(path: &Path) -> Result<String, FormatError> {
    let shown = path.display().to_string();
    if shown == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|source| FormatError::Io {
                path: shown,
                source,
            })?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: shown,
        source,
    })
}

/// Reads an instance from a file, or from standard input when `path` is `-`.
pub fn load_instance(path: &Path) -> Result<InstanceFile, FormatError> {
    parse_instance(&read_text(path)?, &path.display().to_string())
}

pub fn load_allocation(path: &Path) -> Result<AllocationFile, FormatError> {
    parse_allocation(&read_text(path)?, &path.display().to_string())
}

/// Writes `text` to `path`, or to standard output when `path` is `-`.
pub fn write_text(path: &Path, text: &str) -> Result<(), FormatError> {
    let shown = path.display().to_string();
    if shown == "-" {
        print!("{text}");
        return Ok(());
    }
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: shown,
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    #[test]
    fn minimal_document() {
        let f = parse_instance(
            r#"{"version": 1, "n": 1, "m": 1, "costs": [["3/6"]]}"#,
            "mem",
        )
        .unwrap();
        assert_eq!(f.instance.n(), 1);
        assert_eq!(f.instance.cost(0, 0), &ratio(1, 2));
        assert!(emit_instance(&f).contains("\"1/2\""));
    }

    #[test]
    fn zero_denominator_names_the_cell() {
        let err = parse_instance(
            r#"{"version": 1, "n": 1, "m": 2, "costs": [["1", "3/0"]]}"#,
            "x.json",
        )
        .unwrap_err();
        assert!(
            matches!(
                err,
                FormatError::BadCell {
                    agent: 0,
                    item: 1,
                    ..
                }
            ),
            "{err}"
        );
        assert!(err.to_string().contains("costs[0][1]"));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_instance("{\n  \"version\": 1,\n  oops\n}", "x.json").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 3, .. }), "{err}");
    }

    #[test]
    fn shape_problems_are_validation_errors() {
        let err = parse_instance(
            r#"{"version": 1, "n": 2, "m": 2, "costs": [["1", "-2"]]}"#,
            "x",
        )
        .unwrap_err();
        let FormatError::Invalid { source, .. } = err else {
            panic!()
        };
        assert_eq!(source.0.len(), 2);
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = r#"{"version":1,"n":2,"m":2,"costs":[["2/4","1"],["0","7/3"]],"labels":["a","b"],
            "provenance":{"kind":"uniform","seed":3,"params":{"eps":"1/4"}}}"#;
        let once = emit_instance(&parse_instance(text, "mem").unwrap());
        let twice = emit_instance(&parse_instance(&once, "mem").unwrap());
        assert_eq!(once, twice);
    }

    #[test]
    fn allocation_documents() {
        let alloc = Allocation::new(vec![vec![1], vec![]]);
        let file = AllocationFile::new(&alloc, 2);
        assert!(file.partial);
        let back = parse_allocation(&emit_allocation(&file), "mem").unwrap();
        assert_eq!(back, file);
        assert!(
            parse_allocation(r#"{"version": 2, "bundles": [], "partial": false}"#, "m").is_err()
        );
    }
}
