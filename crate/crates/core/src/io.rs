//! Canonical on-disk representation of instances. Serialization is
//! deterministic (fixed field order, 0 encoding null), so writing the same
//! instance twice yields byte-identical files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{GridError, GridInstance, GridParams};
use crate::line::{LineError, LineFlavor, LineInstance};
use crate::potential::{
    PotentialError, PotentialFlavor, PotentialInstance, PotentialOracle,
};

pub const FORMAT_VERSION: u32 = 1;

/// Default dense-materialization bound, overridable via this environment
/// variable (and per-call by the CLI flag).
pub const CELL_LIMIT_ENV: &str = "TFGRID_CELL_LIMIT";
pub const DEFAULT_CELL_LIMIT: usize = 10_000_000;

pub fn default_cell_limit() -> usize {
    std::env::var(CELL_LIMIT_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_CELL_LIMIT)
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {found} (expected {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Line(#[from] LineError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("invalid document: {0}")]
    Invalid(String),
}

/// A serialized instance. Tables are dense wrapped views; `0` encodes null.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceDoc {
    Grid {
        format_version: u32,
        params: GridParams,
        succ: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pred: Option<Vec<Vec<usize>>>,
    },
    Line {
        format_version: u32,
        vertices: usize,
        vstar: usize,
        flavor: LineFlavor,
        succ: Vec<usize>,
        pred: Vec<usize>,
    },
    Potential {
        format_version: u32,
        vertices: usize,
        vstar: usize,
        max_potential: usize,
        flavor: PotentialFlavor,
        potential: Vec<usize>,
        succ: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pred: Option<Vec<usize>>,
    },
}

/// A decoded instance of any kind.
pub enum AnyInstance {
    Grid(GridInstance),
    Line(LineInstance),
    Potential(PotentialInstance),
}

impl InstanceDoc {
    fn format_version(&self) -> u32 {
        match self {
            InstanceDoc::Grid { format_version, .. }
            | InstanceDoc::Line { format_version, .. }
            | InstanceDoc::Potential { format_version, .. } => *format_version,
        }
    }

    pub fn from_grid(inst: &GridInstance, cell_limit: usize) -> Result<Self, IoError> {
        let tables = inst.materialize(cell_limit)?;
        Ok(InstanceDoc::Grid {
            format_version: FORMAT_VERSION,
            params: *inst.params(),
            succ: tables.succ,
            pred: tables.pred,
        })
    }

    pub fn from_line(inst: &LineInstance) -> Self {
        let (succ, pred) = inst.materialize();
        InstanceDoc::Line {
            format_version: FORMAT_VERSION,
            vertices: inst.vertex_count(),
            vstar: inst.vstar(),
            flavor: inst.flavor(),
            succ,
            pred,
        }
    }

    pub fn from_potential(inst: &PotentialInstance) -> Self {
        let v = inst.vertex_count();
        let reversible = inst.flavor() != PotentialFlavor::SoD;
        InstanceDoc::Potential {
            format_version: FORMAT_VERSION,
            vertices: v,
            vstar: inst.vstar(),
            max_potential: inst.max_potential(),
            flavor: inst.flavor(),
            potential: (1..=v).map(|u| inst.potential(u)).collect(),
            succ: (1..=v).map(|u| inst.succ(u).unwrap_or(0)).collect(),
            pred: reversible.then(|| (1..=v).map(|w| inst.pred(w).unwrap_or(0)).collect()),
        }
    }

    /// Rebuilds the instance, re-validating every structural condition.
    pub fn decode(&self) -> Result<AnyInstance, IoError> {
        let version = self.format_version();
        if version != FORMAT_VERSION {
            return Err(IoError::Version { found: version });
        }
        match self {
            InstanceDoc::Grid { params, succ, pred, .. } => {
                check_table_shape("succ", succ, params.n, params.m)?;
                if let Some(pred) = pred {
                    check_table_shape("pred", pred, params.n, params.m)?;
                }
                Ok(AnyInstance::Grid(GridInstance::from_tables(
                    *params,
                    succ.clone(),
                    pred.clone(),
                )?))
            }
            InstanceDoc::Line { vertices, vstar, flavor, succ, pred, .. } => {
                check_vector_shape("succ", succ, *vertices)?;
                check_vector_shape("pred", pred, *vertices)?;
                Ok(AnyInstance::Line(LineInstance::from_tables(
                    succ.clone(),
                    pred.clone(),
                    *vstar,
                    *flavor,
                )?))
            }
            InstanceDoc::Potential {
                vertices, vstar, max_potential, flavor, potential, succ, pred, ..
            } => {
                check_vector_shape("potential", potential, *vertices)?;
                check_vector_shape("succ", succ, *vertices)?;
                let reversible = *flavor != PotentialFlavor::SoD;
                if reversible != pred.is_some() {
                    return Err(IoError::Invalid(
                        "potential pred table required iff the flavor is reversible".to_string(),
                    ));
                }
                let raw_pred = match pred {
                    Some(p) => {
                        check_vector_shape("pred", p, *vertices)?;
                        Some(crate::line::VertexOracle::from_table(p.clone()))
                    }
                    None => None,
                };
                Ok(AnyInstance::Potential(PotentialInstance::new(
                    *vertices,
                    crate::line::VertexOracle::from_table(succ.clone()),
                    raw_pred,
                    PotentialOracle::from_table(potential.clone()),
                    *vstar,
                    *max_potential,
                    *flavor,
                )?))
            }
        }
    }

    /// Canonical text form: pretty JSON with a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

fn check_table_shape(name: &str, table: &[Vec<usize>], n: usize, m: usize) -> Result<(), IoError> {
    if table.len() != n || table.iter().any(|row| row.len() != m) {
        return Err(IoError::Invalid(format!("{name} table is not {n} rows of {m} cells")));
    }
    Ok(())
}

fn check_vector_shape(name: &str, table: &[usize], v: usize) -> Result<(), IoError> {
    if table.len() != v {
        return Err(IoError::Invalid(format!("{name} table must have {v} entries")));
    }
    Ok(())
}

pub fn read_document(path: &Path) -> Result<InstanceDoc, IoError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_instance(path: &Path) -> Result<AnyInstance, IoError> {
    read_document(path)?.decode()
}

/// Writes the canonical form atomically: a temp file in the target directory,
/// then a rename over the destination.
pub fn write_document(path: &Path, doc: &InstanceDoc) -> Result<(), IoError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::fs::write(tmp.path(), doc.to_canonical_json())?;
    tmp.persist(path).map_err(|e| IoError::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Node;

    fn sample_grid() -> GridInstance {
        let params = GridParams {
            n: 3,
            m: 3,
            a: 1,
            b: 0,
            reversible: false,
            bijective: false,
            collision: false,
        };
        GridInstance::from_tables(
            params,
            vec![vec![2, 3, 0], vec![3, 0, 0], vec![0, 1, 0]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn grid_round_trip_is_byte_identical() {
        let doc = InstanceDoc::from_grid(&sample_grid(), 100).unwrap();
        let text = doc.to_canonical_json();
        let doc2: InstanceDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(doc, doc2);
        assert_eq!(text, doc2.to_canonical_json());
        match doc2.decode().unwrap() {
            AnyInstance::Grid(inst) => {
                assert_eq!(inst.succ(Node::new(1, 1)), Some(2));
                assert_eq!(inst.succ(Node::new(2, 2)), None);
            }
            _ => panic!("expected a grid"),
        }
    }

    #[test]
    fn atomic_write_then_read() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("inst.json");
        let doc = InstanceDoc::from_grid(&sample_grid(), 100).unwrap();
        write_document(&path, &doc).unwrap();
        // Overwrite in place: still atomic, same bytes.
        write_document(&path, &doc).unwrap();
        assert_eq!(read_document(&path).unwrap(), doc);
    }

    #[test]
    fn wrong_version_rejected() {
        let doc = InstanceDoc::Line {
            format_version: 2,
            vertices: 1,
            vstar: 1,
            flavor: LineFlavor::EoL,
            succ: vec![0],
            pred: vec![0],
        };
        assert!(matches!(doc.decode(), Err(IoError::Version { found: 2 })));
    }

    #[test]
    fn shape_mismatch_rejected() {
        let doc = InstanceDoc::Line {
            format_version: 1,
            vertices: 2,
            vstar: 1,
            flavor: LineFlavor::SoL,
            succ: vec![0],
            pred: vec![0, 0],
        };
        assert!(matches!(doc.decode(), Err(IoError::Invalid(_))));
    }

    #[test]
    fn potential_round_trip() {
        use crate::potential::grid_to_potential;
        let (pi, _) = grid_to_potential(&sample_grid()).unwrap();
        let doc = InstanceDoc::from_potential(&pi);
        let text = doc.to_canonical_json();
        let doc2: InstanceDoc = serde_json::from_str(&text).unwrap();
        match doc2.decode().unwrap() {
            AnyInstance::Potential(pi2) => {
                for u in 1..=pi.vertex_count() {
                    assert_eq!(pi.succ(u), pi2.succ(u));
                    assert_eq!(pi.potential(u), pi2.potential(u));
                }
            }
            _ => panic!("expected a potential instance"),
        }
    }
}
