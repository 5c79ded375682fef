//! On-disk form of a truncated table.
//!
//! Scalars are written as decimal strings (`"3"`, `"-1/2"` over `Q`) so the
//! same schema serves every characteristic.

use serde::{Deserialize, Serialize};
use thinlie::arith::Field;
use thinlie::lie_engine::{GradedAlgebra, MaxClassTable, ThinTable};
use thinlie::linalg::Mat;
use thinlie::search::AlgebraKind;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// One matrix `phi_i`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "snake_case", deny_unknown_fields)]
pub enum Payload {
    /// `(a_i, b_i)` for `2 <= i < maxdeg`: `[e_i, x] = a_i e_{i+1}`,
    /// `[e_i, y] = b_i e_{i+1}`.
    Centralizers { pairs: Vec<[String; 2]> },
    /// `phi_1, ..., phi_{maxdeg-1}`.
    Brackets { phis: Vec<MatrixDoc> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub schema_version: u32,
    pub kind: AlgebraKind,
    pub p: u32,
    pub maxdeg: usize,
    pub payload: Payload,
}

fn parse<F: Field>(f: &F, s: &str) -> Result<F::Elem, CliError> {
    f.parse(s).ok_or_else(|| {
        CliError::Document(format!("`{s}` is not a scalar of characteristic {}", f.characteristic().p()))
    })
}

impl AlgebraDocument {
    pub fn from_maxclass<F: Field>(t: &MaxClassTable<F>) -> Self {
        let f = t.field();
        AlgebraDocument {
            schema_version: SCHEMA_VERSION,
            kind: AlgebraKind::MaxClass,
            p: f.characteristic().p(),
            maxdeg: t.maxdeg(),
            payload: Payload::Centralizers {
                pairs: t.pairs().iter().map(|(a, b)| [f.format(a), f.format(b)]).collect(),
            },
        }
    }

    pub fn from_thin<F: Field>(t: &ThinTable<F>) -> Self {
        let f = t.field();
        let phis = t
            .phis()
            .into_iter()
            .map(|m| MatrixDoc {
                rows: m.rows(),
                cols: m.cols(),
                entries: m.data().iter().map(|e| f.format(e)).collect(),
            })
            .collect();
        AlgebraDocument {
            schema_version: SCHEMA_VERSION,
            kind: AlgebraKind::Thin,
            p: f.characteristic().p(),
            maxdeg: t.maxdeg(),
            payload: Payload::Brackets { phis },
        }
    }

    fn check_header<F: Field>(&self, f: &F, kind: AlgebraKind) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Document(format!("unsupported schema version {}", self.schema_version)));
        }
        if self.p != f.characteristic().p() {
            return Err(CliError::Document(format!(
                "document has p = {}, field has p = {}",
                self.p,
                f.characteristic().p()
            )));
        }
        if self.kind != kind {
            return Err(CliError::KindMismatch { expected: kind, found: self.kind });
        }
        Ok(())
    }

    /// Rebuilds the engine table. Jacobi consistency is not checked here.
    pub fn to_maxclass<F: Field>(&self, f: F) -> Result<MaxClassTable<F>, CliError> {
        self.check_header(&f, AlgebraKind::MaxClass)?;
        let Payload::Centralizers { pairs } = &self.payload else {
            return Err(CliError::Document("maximal-class documents carry centralizer pairs".into()));
        };
        let pairs =
            pairs.iter().map(|[a, b]| Ok((parse(&f, a)?, parse(&f, b)?))).collect::<Result<Vec<_>, CliError>>()?;
        let t = MaxClassTable::new(f, self.maxdeg, pairs).map_err(|e| CliError::Document(e.to_string()))?;
        // canonical scaling is part of the format
        if &AlgebraDocument::from_maxclass(&t) != self {
            return Err(CliError::Document("centralizer pairs are not in canonical scaling".into()));
        }
        Ok(t)
    }

    pub fn to_thin<F: Field>(&self, f: F) -> Result<ThinTable<F>, CliError> {
        self.check_header(&f, AlgebraKind::Thin)?;
        let Payload::Brackets { phis } = &self.payload else {
            return Err(CliError::Document("thin documents carry bracket matrices".into()));
        };
        if phis.len() + 1 != self.maxdeg {
            return Err(CliError::Document(format!(
                "expected {} matrices, found {}",
                self.maxdeg.saturating_sub(1),
                phis.len()
            )));
        }
        let mats = phis
            .iter()
            .map(|m| {
                if m.entries.len() != m.rows * m.cols {
                    return Err(CliError::Document(format!(
                        "{}x{} matrix with {} entries",
                        m.rows,
                        m.cols,
                        m.entries.len()
                    )));
                }
                let data = m.entries.iter().map(|s| parse(&f, s)).collect::<Result<Vec<_>, _>>()?;
                Ok(Mat::from_rows(m.rows, m.cols, data))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let t = ThinTable::new(f, mats).map_err(|e| CliError::Document(e.to_string()))?;
        if &AlgebraDocument::from_thin(&t) != self {
            return Err(CliError::Document("bracket matrices are not in canonical form".into()));
        }
        Ok(t)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Document(e.to_string()))
    }
}
