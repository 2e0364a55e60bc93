//! Named example complexes. Sign conventions:
//!
//! * `trivial_sphere(G,n)`: cells `ek+`, `ek-` for `k = 0..=n`, all fixed by
//!   `G`, with `∂ek± = e(k-1)+ − e(k-1)-`.
//! * `free_circle(Cn)`: free cells `v`, `e` with `∂e = g·v − v`.
//! * `reflection_circle(C2)`: fixed points `p`, `q` and a free arc `e` with
//!   `∂e = q − p`; the arc `g·e` runs back from `q` to `p`.
//! * `subdivided_reflection_circle(C2)`: the same circle with a free vertex
//!   orbit `r` on each half, arcs `a` from `p` to `r` and `b` from `r` to
//!   `q`, so `{p, r, a}` and `{q, r, b}` are invariant arcs meeting in `r`.

use std::str::FromStr;

use super::{BoundaryRecord, Cell, ComplexError, GCWComplex};
use crate::group::{FiniteGroup, Subgroup, SubgroupClassTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builder {
    Orbit { group: String, subgroup: String },
    TrivialSphere { group: String, n: usize },
    FreeCircle { n: usize },
    ReflectionCircle,
    SubdividedReflectionCircle,
    DisjointUnion(Vec<Builder>),
    Empty { group: String },
}

/// Splits on commas outside brackets.
fn split_args(s: &str) -> Result<Vec<&str>, ComplexError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(ComplexError::BadBuilder(format!(
                "unbalanced brackets in '{s}'"
            )));
        }
    }
    if depth != 0 {
        return Err(ComplexError::BadBuilder(format!(
            "unbalanced brackets in '{s}'"
        )));
    }
    if !s.trim().is_empty() {
        out.push(s[start..].trim());
    }
    Ok(out)
}

fn expect_args<'a>(
    name: &str,
    args: &'a [&'a str],
    n: usize,
) -> Result<&'a [&'a str], ComplexError> {
    if args.len() == n {
        Ok(args)
    } else {
        Err(ComplexError::BadBuilder(format!(
            "{name} takes {n} argument(s), got {}",
            args.len()
        )))
    }
}

fn parse_count(s: &str) -> Result<usize, ComplexError> {
    s.parse().map_err(|_| {
        ComplexError::BadBuilder(format!("expected a non-negative integer, got '{s}'"))
    })
}

impl FromStr for Builder {
    type Err = ComplexError;

    fn from_str(spec: &str) -> Result<Self, ComplexError> {
        let spec = spec.trim();
        let (name, rest) = spec.split_once('(').unwrap_or((spec, ")"));
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| ComplexError::BadBuilder(format!("missing ')' in '{spec}'")))?;
        let args = split_args(inner)?;
        let name = name.trim();
        match name {
            "orbit" => {
                let a = expect_args(name, &args, 2)?;
                Ok(Builder::Orbit {
                    group: a[0].to_string(),
                    subgroup: a[1].to_string(),
                })
            }
            "trivial_sphere" => {
                let a = expect_args(name, &args, 2)?;
                Ok(Builder::TrivialSphere {
                    group: a[0].to_string(),
                    n: parse_count(a[1])?,
                })
            }
            "free_circle" => {
                let a = expect_args(name, &args, 1)?;
                let n = a[0].strip_prefix('C').unwrap_or(a[0]);
                Ok(Builder::FreeCircle { n: parse_count(n)? })
            }
            "reflection_circle" => {
                if !(args.is_empty() || args == ["C2"]) {
                    return Err(ComplexError::BadBuilder(
                        "reflection_circle is defined for C2 only".into(),
                    ));
                }
                Ok(Builder::ReflectionCircle)
            }
            "subdivided_reflection_circle" => {
                if !(args.is_empty() || args == ["C2"]) {
                    return Err(ComplexError::BadBuilder(
                        "subdivided_reflection_circle is defined for C2 only".into(),
                    ));
                }
                Ok(Builder::SubdividedReflectionCircle)
            }
            "disjoint_union" => Ok(Builder::DisjointUnion(
                args.iter().map(|a| a.parse()).collect::<Result<_, _>>()?,
            )),
            "empty" => {
                let a = expect_args(name, &args, 1)?;
                Ok(Builder::Empty {
                    group: a[0].to_string(),
                })
            }
            _ => Err(ComplexError::UnknownBuilder(name.to_string())),
        }
    }
}

impl Builder {
    pub fn build(&self) -> Result<GCWComplex, ComplexError> {
        match self {
            Builder::Orbit { group, subgroup } => {
                let g = FiniteGroup::parse(group)?;
                let h = parse_subgroup_arg(&g, subgroup)?;
                Ok(orbit(&g, &h))
            }
            Builder::TrivialSphere { group, n } => {
                Ok(trivial_sphere(&FiniteGroup::parse(group)?, *n))
            }
            Builder::FreeCircle { n } => free_circle(*n),
            Builder::ReflectionCircle => Ok(reflection_circle()),
            Builder::SubdividedReflectionCircle => Ok(subdivided_reflection_circle()),
            Builder::DisjointUnion(parts) => {
                let built = parts
                    .iter()
                    .map(Builder::build)
                    .collect::<Result<Vec<_>, _>>()?;
                disjoint_union(&built)
            }
            Builder::Empty { group } => Ok(GCWComplex::empty(FiniteGroup::parse(group)?)),
        }
    }
}

pub fn build_example(spec: &str) -> Result<GCWComplex, ComplexError> {
    spec.parse::<Builder>()?.build()
}

/// A subgroup given as `{i,j,...}` (closed element set) or by its class
/// label (`e`, `C2`, `C2#2`, ...), which selects the class representative.
/// A bare label that is shared by several classes means the first, `#1`.
pub fn parse_subgroup_arg(g: &FiniteGroup, arg: &str) -> Result<Subgroup, ComplexError> {
    let arg = arg.trim();
    if let Some(list) = arg.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        let elems = list
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| ComplexError::BadBuilder(format!("bad element '{t}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(g.subgroup(&elems)?);
    }
    let table = SubgroupClassTable::new(g);
    (0..table.num_classes())
        .find(|&c| {
            let label = table.label(c);
            label == arg || label.strip_suffix("#1") == Some(arg)
        })
        .map(|c| table.rep(c).clone())
        .ok_or_else(|| ComplexError::BadBuilder(format!("no subgroup class labelled '{arg}'")))
}

/// The orbit `G/H` as a single 0-cell `v`.
pub fn orbit(g: &FiniteGroup, h: &Subgroup) -> GCWComplex {
    GCWComplex::new(g.clone(), vec![Cell::new("v", 0, h.clone())], &[])
        .expect("a single orbit is valid")
}

/// `S^n` with trivial `G`-action, two cells per dimension.
pub fn trivial_sphere(g: &FiniteGroup, n: usize) -> GCWComplex {
    let mut cells = Vec::new();
    let mut records = Vec::new();
    for k in 0..=n {
        for s in ['+', '-'] {
            let id = format!("e{k}{s}");
            if k > 0 {
                records.push(BoundaryRecord::new(
                    id.clone(),
                    format!("e{}+", k - 1),
                    0,
                    1,
                ));
                records.push(BoundaryRecord::new(
                    id.clone(),
                    format!("e{}-", k - 1),
                    0,
                    -1,
                ));
            }
            cells.push(Cell::new(id, k, g.whole()));
        }
    }
    GCWComplex::new(g.clone(), cells, &records).expect("sphere is valid")
}

/// `C_n` rotating a circle with one free vertex orbit and one free edge
/// orbit.
pub fn free_circle(n: usize) -> Result<GCWComplex, ComplexError> {
    let g = FiniteGroup::parse(&format!("C{n}"))?;
    let t = g.trivial();
    let gen = 1 % n;
    let cells = vec![Cell::new("v", 0, t.clone()), Cell::new("e", 1, t)];
    let records = [
        BoundaryRecord::new("e", "v", 0, -1),
        BoundaryRecord::new("e", "v", gen, 1),
    ];
    GCWComplex::new(g, cells, &records)
}

/// `C_2` reflecting a circle across the axis through `p` and `q`.
pub fn reflection_circle() -> GCWComplex {
    let g = FiniteGroup::parse("C2").expect("C2");
    let cells = vec![
        Cell::new("p", 0, g.whole()),
        Cell::new("q", 0, g.whole()),
        Cell::new("e", 1, g.trivial()),
    ];
    let records = [
        BoundaryRecord::new("e", "p", 0, -1),
        BoundaryRecord::new("e", "q", 0, 1),
    ];
    GCWComplex::new(g, cells, &records).expect("reflection circle is valid")
}

pub fn subdivided_reflection_circle() -> GCWComplex {
    let g = FiniteGroup::parse("C2").expect("C2");
    let cells = vec![
        Cell::new("p", 0, g.whole()),
        Cell::new("q", 0, g.whole()),
        Cell::new("r", 0, g.trivial()),
        Cell::new("a", 1, g.trivial()),
        Cell::new("b", 1, g.trivial()),
    ];
    let records = [
        BoundaryRecord::new("a", "p", 0, -1),
        BoundaryRecord::new("a", "r", 0, 1),
        BoundaryRecord::new("b", "r", 0, -1),
        BoundaryRecord::new("b", "q", 0, 1),
    ];
    GCWComplex::new(g, cells, &records).expect("subdivided reflection circle is valid")
}

/// Disjoint union; ids of the `i`-th summand get the prefix `i.`.
pub fn disjoint_union(parts: &[GCWComplex]) -> Result<GCWComplex, ComplexError> {
    let Some(first) = parts.first() else {
        return Err(ComplexError::BadBuilder(
            "disjoint_union needs at least one part".into(),
        ));
    };
    let mut cells = Vec::new();
    let mut records = Vec::new();
    for (i, x) in parts.iter().enumerate() {
        if x.group() != first.group() {
            return Err(ComplexError::GroupMismatch(
                "disjoint union of complexes over different groups".into(),
            ));
        }
        cells.extend(
            x.cells()
                .iter()
                .map(|c| Cell::new(format!("{i}.{}", c.id), c.dim, c.stabilizer.clone())),
        );
        records.extend(x.boundary_records().into_iter().map(|mut r| {
            r.from = format!("{i}.{}", r.from);
            r.to = format!("{i}.{}", r.to);
            r
        }));
    }
    GCWComplex::new(first.group().clone(), cells, &records)
}
