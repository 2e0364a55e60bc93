use serde::{Deserialize, Serialize};

use super::{BoundaryRecord, Cell, ComplexError, GCWComplex};
use crate::group::{FiniteGroup, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCell {
    pub id: String,
    pub dim: usize,
    pub stabilizer: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRecord {
    pub from: String,
    pub to: String,
    pub a: usize,
    pub deg: i64,
}

/// The on-disk form. Field order is the canonical key order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawComplex {
    pub group: String,
    pub cells: Vec<RawCell>,
    #[serde(default)]
    pub boundary: Vec<RawRecord>,
}

impl RawComplex {
    pub fn parse(text: &str) -> Result<Self, ComplexError> {
        serde_json::from_str(text).map_err(|e| ComplexError::Json(e.to_string()))
    }

    /// Group, cells and records ready for validation. Stabilizer lists
    /// are taken as sets; out-of-range entries surface as violations.
    pub fn parts(&self) -> Result<(FiniteGroup, Vec<Cell>, Vec<BoundaryRecord>), ComplexError> {
        let group = FiniteGroup::parse(&self.group)?;
        let cells = self
            .cells
            .iter()
            .map(|c| {
                Cell::new(
                    c.id.clone(),
                    c.dim,
                    Subgroup::from_elems(c.stabilizer.clone()),
                )
            })
            .collect();
        let records = self
            .boundary
            .iter()
            .map(|r| BoundaryRecord::new(r.from.clone(), r.to.clone(), r.a, r.deg))
            .collect();
        Ok((group, cells, records))
    }

    pub fn into_complex(self) -> Result<GCWComplex, ComplexError> {
        let (group, cells, records) = self.parts()?;
        GCWComplex::new(group, cells, &records)
    }
}

impl GCWComplex {
    pub fn from_json(text: &str) -> Result<Self, ComplexError> {
        RawComplex::parse(text)?.into_complex()
    }

    pub fn to_raw(&self) -> Result<RawComplex, ComplexError> {
        let group = self
            .group()
            .spec()
            .ok_or(ComplexError::NoGroupSpec)?
            .to_string();
        Ok(RawComplex {
            group,
            cells: self
                .cells()
                .iter()
                .map(|c| RawCell {
                    id: c.id.clone(),
                    dim: c.dim,
                    stabilizer: c.stabilizer.elems().to_vec(),
                })
                .collect(),
            boundary: self
                .boundary_records()
                .into_iter()
                .map(|r| RawRecord {
                    from: r.from,
                    to: r.to,
                    a: r.a,
                    deg: r.deg,
                })
                .collect(),
        })
    }

    /// Pretty-printed canonical JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String, ComplexError> {
        let raw = self.to_raw()?;
        let mut s =
            serde_json::to_string_pretty(&raw).map_err(|e| ComplexError::Json(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}
