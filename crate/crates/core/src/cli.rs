//! Command-line front end. Exit codes: 0 success, 1 domain error, 2 usage
//! error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::burnside::BurnsideRing;
use crate::coeff::{CoefficientSystem, OrbitMorphism, TheoryTag};
use crate::complex::{build_example, parse_subgroup_arg, GCWComplex};
use crate::group::{
    describe_subgroup, enumerate_subgroups, FiniteGroup, Subgroup, SubgroupClassTable,
};
use crate::linalg::IntMatrix;
use crate::theory::equivariant_homology;
use crate::verify::{run_all, run_suite, seed_from_env, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "bredonite",
    version,
    about = "Bredon homology of finite G-CW complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect a finite group
    #[command(subcommand)]
    Group(GroupCommand),
    /// Burnside ring data
    #[command(subcommand)]
    Burnside(BurnsideCommand),
    /// Coefficient group M_q(G/H) and induced maps
    Coeff(CoeffArgs),
    /// Equivariant homology of a complex file or builder
    Homology(HomologyArgs),
    /// Run a verification suite (or `all`)
    Verify { suite: String },
}

#[derive(Debug, Subcommand)]
enum GroupCommand {
    /// Subgroups, conjugacy classes and normalizers
    Info {
        spec: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
enum BurnsideCommand {
    /// Table of marks
    Table {
        spec: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
struct CoeffArgs {
    theory: TheoryTag,
    spec: String,
    /// Subgroup as `i,j,...`, `{i,j,...}` or a class label (default: G)
    #[arg(long)]
    subgroup: Option<String>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    degree: i64,
    /// Target subgroup and element, `i,j,...;a`
    #[arg(long)]
    to: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct HomologyArgs {
    theory: TheoryTag,
    /// Path to a complex file, or `build:<builder spec>`
    input: String,
    #[arg(long)]
    json: bool,
    /// Also write the canonical complex file to this path
    #[arg(long, value_name = "PATH")]
    emit_complex: Option<String>,
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: e.to_string(),
        }
    }

    fn usage(e: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(Output { text, code }) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Output {
    text: String,
    code: i32,
}

fn dispatch(command: Command) -> Result<Output, Failure> {
    let text = match command {
        Command::Group(GroupCommand::Info { spec, json }) => group_info(&spec, json)?,
        Command::Burnside(BurnsideCommand::Table { spec, json }) => burnside_table(&spec, json)?,
        Command::Coeff(args) => coeff(&args)?,
        Command::Homology(args) => homology(&args)?,
        Command::Verify { suite } => return verify(&suite),
    };
    Ok(Output {
        text,
        code: EXIT_OK,
    })
}

fn group(spec: &str) -> Result<FiniteGroup, Failure> {
    FiniteGroup::parse(spec).map_err(Failure::domain)
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn group_info(spec: &str, json: bool) -> Result<String, Failure> {
    let g = group(spec)?;
    let table = SubgroupClassTable::new(&g);
    let subs = enumerate_subgroups(&g);
    let rows: Vec<(usize, &Subgroup, Subgroup)> = subs
        .iter()
        .map(|s| {
            let class = table.class_of(s).expect("every subgroup has a class");
            (class, s, g.normalizer_within(&g.whole(), s))
        })
        .collect();
    if json {
        let subgroups: Vec<_> = rows
            .iter()
            .map(|(c, s, n)| {
                json!({"class": c, "elements": s.elems(), "label": table.label(*c), "normalizer": n.elems(), "order": s.order()})
            })
            .collect();
        let classes: Vec<_> = (0..table.num_classes())
            .map(|c| {
                let rep = table.rep(c);
                let weyl = g.normalizer_within(&g.whole(), rep).order() / rep.order();
                json!({"label": table.label(c), "representative": rep.elems(), "size": table.class_size(c), "weyl_index": weyl})
            })
            .collect();
        return Ok(pretty(
            &json!({"classes": classes, "group": spec, "order": g.order(), "subgroups": subgroups}),
        ));
    }
    let mut s = String::new();
    let _ = writeln!(
        s,
        "group {spec}: order {}, elements {}",
        g.order(),
        (0..g.order())
            .map(|x| g.name(x))
            .collect::<Vec<_>>()
            .join(" ")
    );
    let _ = writeln!(s, "{} subgroups", subs.len());
    let labels: Vec<String> = rows
        .iter()
        .map(|(c, ..)| table.label(*c).to_string())
        .collect();
    let elems: Vec<String> = rows.iter().map(|(_, s, ..)| s.to_string()).collect();
    let lw = labels.iter().map(String::len).max().unwrap_or(0).max(5);
    let ew = elems.iter().map(String::len).max().unwrap_or(0).max(8);
    let _ = writeln!(
        s,
        "  {:<lw$}  {:>5}  {:<ew$}  normalizer",
        "class", "order", "elements"
    );
    for (i, (_, sub, normal)) in rows.iter().enumerate() {
        let _ = writeln!(
            s,
            "  {:<lw$}  {:>5}  {:<ew$}  {}",
            labels[i],
            sub.order(),
            elems[i],
            normal
        );
    }
    let _ = writeln!(s, "{} conjugacy classes", table.num_classes());
    for c in 0..table.num_classes() {
        let rep = table.rep(c);
        let weyl = g.normalizer_within(&g.whole(), rep).order() / rep.order();
        let _ = writeln!(
            s,
            "  {:<lw$}  size {}  Weyl index {}  ({})",
            table.label(c),
            table.class_size(c),
            weyl,
            describe_subgroup(&g, rep)
        );
    }
    Ok(s)
}

fn burnside_table(spec: &str, json: bool) -> Result<String, Failure> {
    let g = group(spec)?;
    let ring = BurnsideRing::of_group(&g);
    if json {
        let n = ring.rank();
        let marks: Vec<Vec<i64>> = (0..n)
            .map(|k| (0..n).map(|l| ring.table().get(k, l)).collect())
            .collect();
        return Ok(pretty(&json!({"basis": ring.labels(), "marks": marks})));
    }
    Ok(ring.to_string())
}

fn elements_list(text: &str) -> Result<Vec<usize>, Failure> {
    text.trim()
        .trim_start_matches('{')
        .trim_end_matches('}')
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Failure::domain(format!("bad element '{t}'")))
        })
        .collect()
}

fn subgroup_arg(g: &FiniteGroup, text: &str) -> Result<Subgroup, Failure> {
    let is_list = text
        .chars()
        .all(|c| c.is_ascii_digit() || ",{} ".contains(c));
    if is_list {
        g.subgroup(&elements_list(text)?).map_err(Failure::domain)
    } else {
        parse_subgroup_arg(g, text).map_err(Failure::domain)
    }
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows()
        .expect("coefficient matrices have small entries")
}

fn coeff(args: &CoeffArgs) -> Result<String, Failure> {
    let g = group(&args.spec)?;
    let h = match &args.subgroup {
        Some(text) => subgroup_arg(&g, text)?,
        None => g.whole(),
    };
    let sys = CoefficientSystem::new(&g, args.theory);
    let value = sys.value(args.degree, &h).map_err(Failure::domain)?;
    let map = match &args.to {
        None => None,
        Some(text) => {
            let (k, a) = text.split_once(';').ok_or_else(|| {
                Failure::domain(format!("--to expects 'i,j,...;a', got '{text}'"))
            })?;
            let k = subgroup_arg(&g, k)?;
            let a: usize = a
                .trim()
                .parse()
                .map_err(|_| Failure::domain(format!("bad element '{a}'")))?;
            if a >= g.order() {
                return Err(Failure::domain(format!("element {a} out of range")));
            }
            let f = OrbitMorphism::new(&g, h.clone(), k, a).map_err(Failure::domain)?;
            let target = sys
                .value(args.degree, f.target())
                .map_err(Failure::domain)?;
            let q = usize::try_from(args.degree).expect("degree validated");
            let m = sys.map(q, &f);
            Some((f, target, m))
        }
    };
    let label = describe_subgroup(&g, &h);
    if args.json {
        let mut v = json!({
            "basis": value.basis_labels,
            "degree": args.degree,
            "group": args.spec,
            "rank": value.rank,
            "ring": value.ring,
            "subgroup": h.elems(),
            "theory": args.theory.name(),
        });
        if let Some((f, target, m)) = &map {
            v["map"] = json!({
                "element": f.element(),
                "matrix": matrix_rows(m),
                "target": f.target().elems(),
                "target_basis": target.basis_labels,
            });
        }
        return Ok(pretty(&v));
    }
    let mut s = String::new();
    let _ = writeln!(s, "M_{}(G/{label}) = {value}", args.degree);
    let name = match (args.theory, args.degree) {
        (TheoryTag::OrientedSingular, 0) => "rank A",
        (TheoryTag::UnorientedSingular, 0) => "dim V",
        (TheoryTag::OrientedSingular, _) => "rank",
        _ => "dim",
    };
    let _ = writeln!(
        s,
        "{name} = {}, basis {}",
        value.rank,
        value.basis_labels.join(",")
    );
    if let Some((f, target, m)) = &map {
        let _ = writeln!(
            s,
            "induced map G/{label} -> G/{} via {}:",
            describe_subgroup(&g, f.target()),
            g.name(f.element())
        );
        for (i, row) in matrix_rows(m).iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
            let _ = writeln!(s, "  {}  {}", cells.join(""), target.basis_labels[i]);
        }
    }
    Ok(s)
}

fn load_complex(input: &str) -> Result<GCWComplex, Failure> {
    if let Some(spec) = input.strip_prefix("build:") {
        return build_example(spec).map_err(Failure::domain);
    }
    let text =
        std::fs::read_to_string(input).map_err(|e| Failure::domain(format!("{input}: {e}")))?;
    GCWComplex::from_json(&text).map_err(|e| Failure::domain(format!("{input}: {e}")))
}

fn homology(args: &HomologyArgs) -> Result<String, Failure> {
    let x = load_complex(&args.input)?;
    if let Some(path) = &args.emit_complex {
        let text = x.to_json().map_err(Failure::domain)?;
        std::fs::write(path, text).map_err(|e| Failure::domain(format!("{path}: {e}")))?;
    }
    let result = equivariant_homology(&x, args.theory).map_err(Failure::domain)?;
    Ok(if args.json {
        result.to_json()
    } else {
        result.to_text()
    })
}

fn verify(suite: &str) -> Result<Output, Failure> {
    let seed = seed_from_env().map_err(Failure::usage)?;
    let reports = if suite == "all" {
        run_all(seed)
    } else {
        vec![run_suite(suite, seed).map_err(|e| match e {
            VerifyError::UnknownSuite(_) | VerifyError::BadSeed(_) => Failure::usage(e),
        })?]
    };
    let mut s = format!("seed {seed}\n");
    for r in &reports {
        let _ = writeln!(s, "{r}");
    }
    let code = if reports.iter().all(|r| r.passed()) {
        EXIT_OK
    } else {
        EXIT_DOMAIN
    };
    Ok(Output { text: s, code })
}
