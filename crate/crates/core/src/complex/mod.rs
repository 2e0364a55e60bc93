//! Finite G-CW complexes given by cell orbits `G/H × D^n` and attaching
//! records `(from, to, a, deg)`, meaning the cell `from` meets the translate
//! `a·to` with degree `deg`.

mod builders;
mod io;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::coeff::TheoryTag;
use crate::group::{FiniteGroup, GroupError, Subgroup};
use crate::linalg::{chain_homology, ChainComplex, HomologyGroup, IntMatrix, LinalgError, Ring};

pub use builders::{
    build_example, disjoint_union, free_circle, orbit, parse_subgroup_arg, reflection_circle,
    subdivided_reflection_circle, trivial_sphere, Builder,
};
pub use io::{RawCell, RawComplex, RawRecord};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("malformed complex JSON: {0}")]
    Json(String),
    #[error("invalid complex:\n{0}")]
    Invalid(ValidationReport),
    #[error("cell '{0}' has a nontrivial stabilizer")]
    NotFree(String),
    #[error("not a subcomplex: '{cell}' is attached to '{missing}'")]
    NotClosed { cell: String, missing: String },
    #[error("unknown cell '{0}'")]
    UnknownCell(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("complex has no group spec and cannot be serialized")]
    NoGroupSpec,
    #[error("unknown builder '{0}'")]
    UnknownBuilder(String),
    #[error("bad builder arguments: {0}")]
    BadBuilder(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    pub stabilizer: Subgroup,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize, stabilizer: Subgroup) -> Self {
        Cell {
            id: id.into(),
            dim,
            stabilizer,
        }
    }
}

/// Attaching record in terms of cell ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryRecord {
    pub from: String,
    pub to: String,
    pub a: usize,
    pub deg: i64,
}

impl BoundaryRecord {
    pub fn new(from: impl Into<String>, to: impl Into<String>, a: usize, deg: i64) -> Self {
        BoundaryRecord {
            from: from.into(),
            to: to.into(),
            a,
            deg,
        }
    }
}

/// Attaching record in terms of cell positions, in normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Attachment {
    pub from: usize,
    pub to: usize,
    pub a: usize,
    pub deg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateId(String),
    NotASubgroup {
        cell: String,
    },
    UnknownCell {
        record: usize,
        id: String,
    },
    ElementOutOfRange {
        record: usize,
        a: usize,
    },
    DimensionMismatch {
        record: usize,
        from: String,
        to: String,
    },
    NotSubconjugate {
        record: usize,
        from: String,
        to: String,
        a: usize,
    },
    DegreeOverflow {
        from: String,
        to: String,
    },
    DSquaredNonzero {
        degree: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateId(id) => write!(f, "duplicate cell id '{id}'"),
            Violation::NotASubgroup { cell } => {
                write!(f, "stabilizer of '{cell}' is not a subgroup")
            }
            Violation::UnknownCell { record, id } => {
                write!(f, "record {record}: unknown cell '{id}'")
            }
            Violation::ElementOutOfRange { record, a } => {
                write!(f, "record {record}: element {a} out of range")
            }
            Violation::DimensionMismatch { record, from, to } => {
                write!(
                    f,
                    "record {record}: '{from}' → '{to}' does not lower dimension by one"
                )
            }
            Violation::NotSubconjugate {
                record,
                from,
                to,
                a,
            } => write!(
                f,
                "record {record}: stab('{from}') is not subconjugate to stab('{to}') via {a}"
            ),
            Violation::DegreeOverflow { from, to } => {
                write!(f, "degree overflow merging records '{from}' → '{to}'")
            }
            Violation::DSquaredNonzero { degree } => {
                write!(f, "d∘d ≠ 0 from degree {degree} in the oriented system")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// A validated G-CW complex in normal form: cells sorted by `(dim, id)`,
/// records merged over `a·stab(to)` with `a` the least coset element,
/// zero degrees dropped, records sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCWComplex {
    group: FiniteGroup,
    cells: Vec<Cell>,
    records: Vec<Attachment>,
}

/// Checks the parts and, when valid, returns the normalized complex.
fn assemble(
    group: FiniteGroup,
    mut cells: Vec<Cell>,
    boundary: &[BoundaryRecord],
) -> (Option<GCWComplex>, ValidationReport) {
    let mut violations = Vec::new();
    cells.sort_by(|x, y| (x.dim, &x.id).cmp(&(y.dim, &y.id)));
    let mut index = HashMap::new();
    for (k, c) in cells.iter().enumerate() {
        if index.insert(c.id.as_str(), k).is_some() {
            violations.push(Violation::DuplicateId(c.id.clone()));
        }
        if !group.is_subgroup(&c.stabilizer) {
            violations.push(Violation::NotASubgroup { cell: c.id.clone() });
        }
    }
    let mut merged: BTreeMap<(usize, usize, usize), i64> = BTreeMap::new();
    for (r, rec) in boundary.iter().enumerate() {
        let lookup = |id: &str| index.get(id).copied();
        let (Some(from), Some(to)) = (lookup(&rec.from), lookup(&rec.to)) else {
            for id in [&rec.from, &rec.to] {
                if lookup(id).is_none() {
                    violations.push(Violation::UnknownCell {
                        record: r,
                        id: id.clone(),
                    });
                }
            }
            continue;
        };
        if rec.a >= group.order() {
            violations.push(Violation::ElementOutOfRange {
                record: r,
                a: rec.a,
            });
            continue;
        }
        let (src, dst) = (&cells[from], &cells[to]);
        if src.dim != dst.dim + 1 {
            violations.push(Violation::DimensionMismatch {
                record: r,
                from: rec.from.clone(),
                to: rec.to.clone(),
            });
            continue;
        }
        if !group.is_subgroup(&src.stabilizer) || !group.is_subgroup(&dst.stabilizer) {
            continue;
        }
        if !group.is_subconjugate(&src.stabilizer, &dst.stabilizer, rec.a) {
            violations.push(Violation::NotSubconjugate {
                record: r,
                from: rec.from.clone(),
                to: rec.to.clone(),
                a: rec.a,
            });
            continue;
        }
        let a = dst.stabilizer.min_in_left_coset(&group, rec.a);
        let slot = merged.entry((from, to, a)).or_insert(0);
        match slot.checked_add(rec.deg) {
            Some(d) => *slot = d,
            None => violations.push(Violation::DegreeOverflow {
                from: rec.from.clone(),
                to: rec.to.clone(),
            }),
        }
    }
    if !violations.is_empty() {
        return (None, ValidationReport { violations });
    }
    let records = merged
        .into_iter()
        .filter(|&(_, deg)| deg != 0)
        .map(|((from, to, a), deg)| Attachment { from, to, a, deg })
        .collect();
    let x = GCWComplex {
        group,
        cells,
        records,
    };
    let violations = match crate::theory::differentials(&x, TheoryTag::OrientedSingular, 0) {
        Ok(_) => Vec::new(),
        Err(degree) => vec![Violation::DSquaredNonzero { degree }],
    };
    if violations.is_empty() {
        (Some(x), ValidationReport::default())
    } else {
        (None, ValidationReport { violations })
    }
}

/// Every violation in the given parts, with cell ids and record positions.
pub fn validate_complex(
    group: &FiniteGroup,
    cells: &[Cell],
    boundary: &[BoundaryRecord],
) -> ValidationReport {
    assemble(group.clone(), cells.to_vec(), boundary).1
}

impl GCWComplex {
    pub fn new(
        group: FiniteGroup,
        cells: Vec<Cell>,
        boundary: &[BoundaryRecord],
    ) -> Result<Self, ComplexError> {
        match assemble(group, cells, boundary) {
            (Some(x), _) => Ok(x),
            (None, report) => Err(ComplexError::Invalid(report)),
        }
    }

    pub fn empty(group: FiniteGroup) -> Self {
        GCWComplex {
            group,
            cells: Vec::new(),
            records: Vec::new(),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn records(&self) -> &[Attachment] {
        &self.records
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell_index(&self, id: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.id == id)
    }

    /// Top cell dimension, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.cells.last().map(|c| c.dim)
    }

    /// Positions of the `n`-cells, contiguous by the sort order.
    pub fn cells_in_dim(&self, n: usize) -> std::ops::Range<usize> {
        let start = self.cells.partition_point(|c| c.dim < n);
        let end = self.cells.partition_point(|c| c.dim <= n);
        start..end
    }

    pub fn is_free(&self) -> bool {
        self.cells.iter().all(|c| c.stabilizer.order() == 1)
    }

    /// True when every cell is 0-dimensional.
    pub fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.dim == 0)
    }

    pub fn boundary_records(&self) -> Vec<BoundaryRecord> {
        self.records
            .iter()
            .map(|r| {
                BoundaryRecord::new(
                    self.cells[r.from].id.clone(),
                    self.cells[r.to].id.clone(),
                    r.a,
                    r.deg,
                )
            })
            .collect()
    }

    /// Re-runs every check on the stored data.
    pub fn validate(&self) -> ValidationReport {
        validate_complex(&self.group, &self.cells, &self.boundary_records())
    }

    /// Cells with the given ids and the records among them; fails unless
    /// the set is closed under attaching.
    pub fn subcomplex<S: AsRef<str>>(&self, ids: &[S]) -> Result<GCWComplex, ComplexError> {
        let mut keep = HashSet::new();
        for id in ids {
            let k = self
                .cell_index(id.as_ref())
                .ok_or_else(|| ComplexError::UnknownCell(id.as_ref().to_string()))?;
            keep.insert(k);
        }
        for r in &self.records {
            if keep.contains(&r.from) && !keep.contains(&r.to) {
                return Err(ComplexError::NotClosed {
                    cell: self.cells[r.from].id.clone(),
                    missing: self.cells[r.to].id.clone(),
                });
            }
        }
        let cells: Vec<Cell> = (0..self.cells.len())
            .filter(|k| keep.contains(k))
            .map(|k| self.cells[k].clone())
            .collect();
        let records: Vec<BoundaryRecord> = self
            .boundary_records()
            .into_iter()
            .zip(&self.records)
            .filter(|(_, r)| keep.contains(&r.from))
            .map(|(b, _)| b)
            .collect();
        GCWComplex::new(self.group.clone(), cells, &records)
    }
}

/// `G ×_H X` for `X` over the abstract group `G.restrict(H)`: element `i`
/// of `X`'s group is `H.elems()[i]` in `G`.
pub fn induce_complex(
    g: &FiniteGroup,
    h: &Subgroup,
    x: &GCWComplex,
) -> Result<GCWComplex, ComplexError> {
    if !g.is_subgroup(h) {
        return Err(GroupError::NotASubgroup(h.elems().to_vec()).into());
    }
    if *x.group() != g.restrict(h) {
        return Err(ComplexError::GroupMismatch(format!(
            "complex group is not the restriction of the ambient group to {h}"
        )));
    }
    let lift =
        |s: &Subgroup| Subgroup::from_elems(s.elems().iter().map(|&i| h.elems()[i]).collect());
    let cells = x
        .cells()
        .iter()
        .map(|c| Cell::new(c.id.clone(), c.dim, lift(&c.stabilizer)))
        .collect();
    let records: Vec<BoundaryRecord> = x
        .boundary_records()
        .into_iter()
        .map(|mut r| {
            r.a = h.elems()[r.a];
            r
        })
        .collect();
    GCWComplex::new(g.clone(), cells, &records)
}

/// An ordinary CW complex: a G-CW complex over the trivial group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CWComplex(GCWComplex);

impl CWComplex {
    pub fn new(x: GCWComplex) -> Result<Self, ComplexError> {
        if x.group().order() != 1 {
            return Err(ComplexError::GroupMismatch(
                "an ordinary CW complex needs the trivial group".into(),
            ));
        }
        Ok(CWComplex(x))
    }

    pub fn inner(&self) -> &GCWComplex {
        &self.0
    }

    pub fn into_inner(self) -> GCWComplex {
        self.0
    }

    /// Total incidence degree of `from` on `to`.
    pub fn incidence(&self, from: usize, to: usize) -> i64 {
        self.0
            .records
            .iter()
            .filter(|r| r.from == from && r.to == to)
            .map(|r| r.deg)
            .sum()
    }

    pub fn chain_complex(&self, ring: Ring) -> ChainComplex {
        let x = &self.0;
        let Some(top) = x.dim() else {
            return ChainComplex::zero(ring);
        };
        let ranks: Vec<usize> = (0..=top).map(|n| x.cells_in_dim(n).len()).collect();
        let mut ds: Vec<IntMatrix> = (1..=top)
            .map(|n| IntMatrix::zeros(ranks[n - 1], ranks[n]))
            .collect();
        for r in &x.records {
            let n = x.cells[r.from].dim;
            let (row, col) = (
                r.to - x.cells_in_dim(n - 1).start,
                r.from - x.cells_in_dim(n).start,
            );
            ds[n - 1][(row, col)] += BigInt::from(r.deg);
        }
        ChainComplex::new(ring, ranks, ds).expect("shapes follow the cell counts")
    }

    pub fn homology(&self, ring: Ring) -> Result<Vec<HomologyGroup>, ComplexError> {
        Ok(chain_homology(&self.chain_complex(ring))?)
    }
}

/// One cell per orbit; the degree between quotient cells is the sum of the
/// degrees of all records between the orbits.
pub fn orbit_space(x: &GCWComplex, require_free: bool) -> Result<CWComplex, ComplexError> {
    if require_free {
        if let Some(c) = x.cells().iter().find(|c| c.stabilizer.order() != 1) {
            return Err(ComplexError::NotFree(c.id.clone()));
        }
    }
    let point = FiniteGroup::parse("C1")?;
    let cells = x
        .cells()
        .iter()
        .map(|c| Cell::new(c.id.clone(), c.dim, point.trivial()))
        .collect();
    let records: Vec<BoundaryRecord> = x
        .boundary_records()
        .into_iter()
        .map(|mut r| {
            r.a = 0;
            r
        })
        .collect();
    CWComplex::new(GCWComplex::new(point, cells, &records)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> FiniteGroup {
        FiniteGroup::parse("C2").unwrap()
    }

    #[test]
    fn antipodal_circle_is_valid() {
        let g = c2();
        let cells = vec![
            Cell::new("v", 0, g.trivial()),
            Cell::new("e", 1, g.trivial()),
        ];
        let recs = [
            BoundaryRecord::new("e", "v", 0, -1),
            BoundaryRecord::new("e", "v", 1, 1),
        ];
        let x = GCWComplex::new(g.clone(), cells, &recs).unwrap();
        assert_eq!(x.records().len(), 2);
        assert_eq!(x.cells()[0].id, "v");
        assert!(x.validate().is_valid());
        assert!(x.is_free());
    }

    #[test]
    fn records_merge_over_cosets() {
        let g = c2();
        let cells = vec![Cell::new("p", 0, g.whole()), Cell::new("e", 1, g.trivial())];
        let recs = [
            BoundaryRecord::new("e", "p", 0, -1),
            BoundaryRecord::new("e", "p", 1, 1),
        ];
        let x = GCWComplex::new(g, cells, &recs).unwrap();
        assert!(x.records().is_empty());
    }

    #[test]
    fn violations_are_named() {
        let g = c2();
        let cells = vec![
            Cell::new("p", 0, g.trivial()),
            Cell::new("e", 1, g.whole()),
            Cell::new("e", 1, g.whole()),
            Cell::new("bad", 0, Subgroup::from_elems(vec![1])),
        ];
        let recs = [
            BoundaryRecord::new("e", "p", 0, 1),
            BoundaryRecord::new("e", "nowhere", 0, 1),
            BoundaryRecord::new("p", "e", 0, 1),
            BoundaryRecord::new("e", "p", 7, 1),
        ];
        let report = validate_complex(&g, &cells, &recs);
        let v = &report.violations;
        assert!(v.contains(&Violation::DuplicateId("e".into())));
        assert!(v.contains(&Violation::NotASubgroup { cell: "bad".into() }));
        assert!(v.contains(&Violation::UnknownCell {
            record: 1,
            id: "nowhere".into()
        }));
        assert!(v.contains(&Violation::DimensionMismatch {
            record: 2,
            from: "p".into(),
            to: "e".into()
        }));
        assert!(v.contains(&Violation::ElementOutOfRange { record: 3, a: 7 }));
        assert!(v
            .iter()
            .any(|x| matches!(x, Violation::NotSubconjugate { record: 0, .. })));
    }

    #[test]
    fn d_squared_is_checked() {
        let g = FiniteGroup::parse("C1").unwrap();
        let t = g.trivial();
        let cells = vec![
            Cell::new("v", 0, t.clone()),
            Cell::new("w", 0, t.clone()),
            Cell::new("e", 1, t.clone()),
            Cell::new("f", 2, t),
        ];
        let recs = [
            BoundaryRecord::new("e", "v", 0, 1),
            BoundaryRecord::new("e", "w", 0, -1),
            BoundaryRecord::new("f", "e", 0, 1),
        ];
        let report = validate_complex(&g, &cells, &recs);
        assert_eq!(
            report.violations,
            vec![Violation::DSquaredNonzero { degree: 2 }]
        );
    }

    #[test]
    fn subcomplex_closure() {
        let x = build_example("trivial_sphere(C2,1)").unwrap();
        let lower = x.subcomplex(&["e0+", "e0-", "e1+"]).unwrap();
        assert_eq!(lower.num_cells(), 3);
        assert!(matches!(
            x.subcomplex(&["e1+", "e0+"]),
            Err(ComplexError::NotClosed { .. })
        ));
        assert!(matches!(
            x.subcomplex(&["zz"]),
            Err(ComplexError::UnknownCell(_))
        ));
    }

    #[test]
    fn orbit_space_of_antipodal_circle() {
        let x = build_example("free_circle(C2)").unwrap();
        let q = orbit_space(&x, true).unwrap();
        assert_eq!(q.incidence(1, 0), 0);
        let h = q.homology(Ring::Integers).unwrap();
        assert_eq!(h, vec![HomologyGroup::free(1), HomologyGroup::free(1)]);
        let s = build_example("trivial_sphere(C2,1)").unwrap();
        assert!(matches!(
            orbit_space(&s, true),
            Err(ComplexError::NotFree(_))
        ));
        assert!(orbit_space(&s, false).is_ok());
    }

    #[test]
    fn induction_from_trivial_group() {
        let c2 = c2();
        let circle = build_example("free_circle(C1)").unwrap();
        let up = induce_complex(&c2, &c2.trivial(), &circle).unwrap();
        assert_eq!(up.num_cells(), 2);
        assert!(up.is_free());
        assert_eq!(orbit_space(&up, true).unwrap().inner().num_cells(), 2);
        let same =
            induce_complex(&c2, &c2.whole(), &build_example("free_circle(C2)").unwrap()).unwrap();
        assert_eq!(same, build_example("free_circle(C2)").unwrap());
        assert!(matches!(
            induce_complex(&c2, &c2.whole(), &circle),
            Err(ComplexError::GroupMismatch(_))
        ));
    }
}
