//! `sma`: structural matrix algebra toolkit.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use sma_core::automorphism::{enumerate_relation_automorphisms, DEFAULT_ENUMERATION_BOUND};
use sma_core::blockform::{block_pattern, build_block_form, class_order_from_representatives, is_semisimple, Cell, PatternGrid};
use sma_core::factor::factor_automorphism;
use sma_core::io::{self, Completion};
use sma_core::oracle;
use sma_core::relation::{ClassPartition, CondensationDag};
use sma_core::transitive::{triviality_witness, Triviality};
use sma_core::{cocycle_rank, verify_automorphism, AutomorphismSpec, Error, Field, Relation, StructMatrix};

#[derive(Parser)]
#[command(name = "sma", version, about = "Structural matrix algebras M_n(F, ρ) over Q and GF(p)")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RelationArgs {
    /// Relation file: JSON {"n", "pairs"} or text (n, then "i j" lines).
    relation: PathBuf,
    /// Replace the relation by its reflexive transitive closure.
    #[arg(long, conflicts_with = "add_diagonal")]
    close: bool,
    /// Add missing diagonal pairs.
    #[arg(long)]
    add_diagonal: bool,
}

impl RelationArgs {
    fn load(&self) -> Result<Relation, CliError> {
        let completion = if self.close {
            Completion::Close
        } else if self.add_diagonal {
            Completion::AddDiagonal
        } else {
            Completion::Strict
        };
        Ok(io::parse_relation(&read(&self.relation)?, completion)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check reflexivity and transitivity.
    Validate {
        relation: PathBuf,
    },
    /// Equivalence classes and the order between them.
    Classes(RelationArgs),
    /// Permutation to block upper triangular form and the permuted pattern.
    Blockform {
        #[command(flatten)]
        rel: RelationArgs,
        /// Class order as 1-based class minima, e.g. 1,5,4,2.
        #[arg(long, value_delimiter = ',')]
        class_order: Option<Vec<usize>>,
    },
    /// Block-level F/0 pattern of the block form.
    Pattern(RelationArgs),
    /// Whether the algebra is semisimple (ρ symmetric).
    Semisimple(RelationArgs),
    /// Automorphisms of the relation (bound: SMA_MAX_N, default 10).
    Autos(RelationArgs),
    /// Rank and canonical generators of transitive functions modulo trivial ones.
    Transrank(RelationArgs),
    /// Decide whether a transitive function is trivial.
    Trivial {
        /// Relation file, optional when the function file embeds "relation".
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// Check that a map is an automorphism.
    Verify {
        /// [relation] phi
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// Apply an automorphism to a matrix.
    Apply {
        phi: PathBuf,
        matrix: PathBuf,
        #[arg(long)]
        relation: Option<PathBuf>,
    },
    /// Factor an automorphism as Ψ_A ∘ G ∘ P_τ.
    Factor {
        /// [relation] phi
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// Brute-force reference computations.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Relation automorphisms by filtering all n! permutations (n ≤ 8).
    Autos(RelationArgs),
    /// Cocycle rank from the unreduced linear system (n ≤ 6).
    Transrank(RelationArgs),
    /// Count (or list with --json) all quasi-orders on n ≤ 4 points.
    Quasiorders { n: usize },
    /// A random automorphism Ψ_A ∘ G ∘ P_τ, printed in the automorphism format.
    Random {
        #[command(flatten)]
        rel: RelationArgs,
        /// Q or GF(p) (a bare prime also works).
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum CliError {
    /// Bad usage, unreadable or malformed input: exit 2.
    Usage(String),
    /// Well-formed input with a negative answer or a domain error: exit 1.
    Domain(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidField(_) | Error::IndexOutOfRange { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

type Outcome = Result<String, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    io::parse_json(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Indented JSON with arrays free of objects kept on one line.
fn pretty(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out.push('\n');
    out
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(a) => a.iter().any(has_object),
        _ => false,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, val)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String(key.clone()));
                render(val, indent + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", "  ".repeat(indent));
        }
        Value::Array(items) if has_object(v) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad);
                render(item, indent + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", "  ".repeat(indent));
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn parse_field(text: &str) -> Result<Field, CliError> {
    let t = text.trim();
    if t == "Q" {
        return Ok(Field::Rational);
    }
    let inner = t.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')).unwrap_or(t);
    let p: u64 = inner.parse().map_err(|_| CliError::Usage(format!("unknown field {text:?}; use Q or GF(p)")))?;
    Ok(Field::prime(p)?)
}

fn enumeration_bound() -> Result<usize, CliError> {
    match std::env::var("SMA_MAX_N") {
        Ok(v) => v.parse().map_err(|_| CliError::Usage(format!("SMA_MAX_N={v:?} is not a number"))),
        Err(_) => Ok(DEFAULT_ENUMERATION_BOUND),
    }
}

/// Splits `[relation] file` positionals.
fn optional_relation(files: &[PathBuf]) -> Result<(Option<Arc<Relation>>, &Path), CliError> {
    match files {
        [f] => Ok((None, f)),
        [r, f] => Ok((Some(Arc::new(io::parse_relation(&read(r)?, Completion::Strict)?)), f)),
        _ => Err(CliError::Usage("expected [relation] file".into())),
    }
}

fn load_phi(relation: Option<Arc<Relation>>, path: &Path) -> Result<AutomorphismSpec, CliError> {
    Ok(io::automorphism_from_json(&read_json(path)?, relation)?)
}

fn pairs_json(pairs: &[(usize, usize)]) -> Value {
    pairs.iter().map(|&(i, j)| json!([i, j])).collect()
}

fn run(cli: Cli) -> Outcome {
    let as_json = cli.json;
    match cli.command {
        Command::Validate { relation } => validate(&relation, as_json),
        Command::Classes(args) => classes(&args.load()?, as_json),
        Command::Blockform { rel, class_order } => blockform(&rel.load()?, class_order.as_deref(), as_json),
        Command::Pattern(args) => pattern(&args.load()?, as_json),
        Command::Semisimple(args) => {
            let s = is_semisimple(&args.load()?)?;
            Ok(if as_json { pretty(&json!({ "semisimple": s })) } else { format!("semisimple: {}\n", yes_no(s)) })
        }
        Command::Autos(args) => autos(&args.load()?, as_json),
        Command::Transrank(args) => transrank(&args.load()?, as_json),
        Command::Trivial { files } => trivial(&files, as_json),
        Command::Verify { files } => {
            let (rel, path) = optional_relation(&files)?;
            verify(&load_phi(rel, path)?, as_json)
        }
        Command::Apply { phi, matrix, relation } => {
            let rel = match relation {
                Some(r) => Some(Arc::new(io::parse_relation(&read(&r)?, Completion::Strict)?)),
                None => None,
            };
            let phi = load_phi(rel, &phi)?;
            let m = StructMatrix::new(Arc::clone(phi.relation()), io::matrix_from_json(&read_json(&matrix)?)?)?;
            let out = phi.apply(&m)?;
            Ok(if as_json { pretty(&io::matrix_to_json(out.dense())) } else { out.to_string() })
        }
        Command::Factor { files } => {
            let (rel, path) = optional_relation(&files)?;
            factor(&load_phi(rel, path)?, as_json)
        }
        Command::Oracle(sub) => oracle_command(sub, as_json),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn validate(path: &Path, as_json: bool) -> Outcome {
    let rel = io::parse_relation_raw(&read(path)?)?;
    let report = rel.validate();
    let text = if as_json {
        let violations: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
        pretty(&json!({ "ok": report.ok, "total": report.total, "violations": violations }))
    } else if report.ok {
        format!("valid quasi-order on {} points with {} pairs\n", rel.n(), rel.len())
    } else {
        let mut s = format!("not a quasi-order: {} violation(s)\n", report.total);
        for v in &report.violations {
            let _ = writeln!(s, "  {v}");
        }
        if report.total > report.violations.len() {
            let _ = writeln!(s, "  ... {} more", report.total - report.violations.len());
        }
        s
    };
    if report.ok {
        Ok(text)
    } else if as_json {
        // the report itself is the answer; still signal failure
        print!("{text}");
        Err(CliError::Domain("relation is not a quasi-order".into()))
    } else {
        Err(CliError::Domain(text.trim_end().to_string()))
    }
}

fn classes(rel: &Relation, as_json: bool) -> Outcome {
    let part = ClassPartition::of(rel)?;
    let dag = CondensationDag::of(rel, &part);
    let rep = |k: usize| part.representative(k) + 1;
    let members: Vec<Vec<usize>> = part.classes().iter().map(|c| c.iter().map(|v| v + 1).collect()).collect();
    let edges: Vec<(usize, usize)> = dag.edges().iter().map(|&(a, b)| (rep(a), rep(b))).collect();
    let isolated: Vec<usize> = dag.isolated_classes().into_iter().map(rep).collect();
    if as_json {
        return Ok(pretty(&json!({
            "classes": members,
            "representatives": (0..part.len()).map(rep).collect::<Vec<_>>(),
            "edges": pairs_json(&edges),
            "isolated": isolated,
        })));
    }
    let mut s = String::new();
    for (k, m) in members.iter().enumerate() {
        let list: Vec<String> = m.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "[{}] = {{{}}}", rep(k), list.join(","));
    }
    let e: Vec<String> = edges.iter().map(|(a, b)| format!("[{a}]<[{b}]")).collect();
    let _ = writeln!(s, "order: {}", if e.is_empty() { "none".into() } else { e.join(" ") });
    let iso: Vec<String> = isolated.iter().map(|r| format!("[{r}]")).collect();
    let _ = writeln!(s, "isolated: {}", if iso.is_empty() { "none".into() } else { iso.join(" ") });
    Ok(s)
}

fn blockform(rel: &Relation, reps: Option<&[usize]>, as_json: bool) -> Outcome {
    let order = reps.map(|r| class_order_from_representatives(rel, r)).transpose()?;
    let bf = build_block_form(rel, order.as_deref())?;
    let rep_order: Vec<usize> = bf.class_order.iter().map(|&k| bf.partition.representative(k) + 1).collect();
    let pattern = block_pattern(&bf);
    if as_json {
        return Ok(pretty(&json!({
            "pi": bf.pi.images_one_based(),
            "block_sizes": bf.block_sizes,
            "class_order": rep_order,
            "permuted_pairs": pairs_json(&bf.permuted.pairs_one_based()),
            "pattern": pattern.cells,
        })));
    }
    let mut by_image: Vec<(usize, usize)> = (0..rel.n()).map(|i| (bf.pi.apply(i) + 1, i + 1)).collect();
    by_image.sort();
    let table: Vec<String> = by_image.iter().map(|(p, i)| format!("{i}→{p}")).collect();
    let mut s = String::new();
    let _ = writeln!(s, "pi: {{{}}}", table.join(", "));
    let _ = writeln!(s, "pi cycles: {}", bf.pi.cycle_notation());
    let _ = writeln!(s, "class order: {}", rep_order.iter().map(|r| format!("[{r}]")).collect::<Vec<_>>().join(" "));
    let _ = writeln!(s, "block sizes: {:?}", bf.block_sizes);
    let _ = writeln!(s, "comparable blocks: {}, isolated blocks: {}", bf.num_comparable, bf.num_isolated);
    let _ = writeln!(s);
    let _ = write!(s, "{}", PatternGrid(&bf));
    Ok(s)
}

fn pattern(rel: &Relation, as_json: bool) -> Outcome {
    let bf = build_block_form(rel, None)?;
    let pattern = block_pattern(&bf);
    if as_json {
        return Ok(pretty(&json!({ "block_sizes": bf.block_sizes, "pattern": pattern.cells })));
    }
    let mut s = String::new();
    for row in &pattern.cells {
        let cells: Vec<&str> = row.iter().map(|c| if *c == Cell::Full { "F" } else { "0" }).collect();
        let _ = writeln!(s, "{}", cells.join(" "));
    }
    Ok(s)
}

fn autos(rel: &Relation, as_json: bool) -> Outcome {
    let list = enumerate_relation_automorphisms(rel, enumeration_bound()?)?;
    if as_json {
        let images: Vec<Vec<usize>> = list.iter().map(|p| p.images_one_based()).collect();
        return Ok(pretty(&json!({ "count": list.len(), "automorphisms": images })));
    }
    let mut s = format!("{} relation automorphism(s)\n", list.len());
    for p in &list {
        let _ = writeln!(s, "  {}", p.cycle_notation());
    }
    Ok(s)
}

const TORSION_CAVEAT: &str =
    "rank computed over Q on exponents; over GF(p) it counts free parameters up to torsion";

fn transrank(rel: &Relation, as_json: bool) -> Outcome {
    let basis = cocycle_rank(rel)?;
    let supports: Vec<Vec<((usize, usize), i64)>> = (0..basis.rank).map(|t| basis.support(t)).collect();
    if as_json {
        let gens: Vec<Value> = supports
            .iter()
            .map(|sup| sup.iter().map(|&((i, j), e)| json!([i, j, e])).collect())
            .collect();
        return Ok(pretty(&json!({
            "rank": basis.rank,
            "generators": gens,
            "solution_dim": basis.solution_dim,
            "coboundary_dim": basis.coboundary_dim,
            "note": TORSION_CAVEAT,
        })));
    }
    let mut s = format!("rank: {}\n", basis.rank);
    for (t, sup) in supports.iter().enumerate() {
        let terms: Vec<String> = sup
            .iter()
            .map(|&((i, j), e)| if e == 1 { format!("({i},{j})") } else { format!("({i},{j})^{e}") })
            .collect();
        let _ = writeln!(s, "generator {}: {}", t + 1, terms.join(" "));
    }
    let _ = writeln!(s, "cocycles: {}, coboundaries: {}", basis.solution_dim, basis.coboundary_dim);
    let _ = writeln!(s, "note: {TORSION_CAVEAT}");
    Ok(s)
}

fn trivial(files: &[PathBuf], as_json: bool) -> Outcome {
    let (rel, path) = optional_relation(files)?;
    let v = read_json(path)?;
    let rel = match (rel, v.get("relation")) {
        (Some(r), _) => r,
        (None, Some(r)) => Arc::new(io::complete(io::relation_from_json(r)?, Completion::Strict)?),
        (None, None) => return Err(CliError::Usage("no relation: pass a relation file or embed \"relation\"".into())),
    };
    let g = io::transitive_from_json(rel, &v)?;
    let report = g.check_transitive();
    if !report.ok {
        let (i, j, k) = report.violations[0];
        return Err(CliError::Domain(format!(
            "not transitive: g({i},{j}) g({j},{k}) != g({i},{k}) ({} violation(s))",
            report.total
        )));
    }
    match triviality_witness(&g)? {
        Triviality::Coboundary(s) => {
            let vals: Vec<String> = s.values().iter().map(ToString::to_string).collect();
            Ok(if as_json {
                pretty(&json!({ "trivial": true, "s": vals }))
            } else {
                format!("trivial: g(i,j) = s(i)/s(j) with s = ({})\n", vals.join(", "))
            })
        }
        Triviality::Nontrivial(c) => {
            let walk: Vec<usize> = c.walk.iter().map(|v| v + 1).collect();
            Ok(if as_json {
                pretty(&json!({ "trivial": false, "cycle": walk, "product": c.product.to_string() }))
            } else {
                format!("not trivial: closed walk {c}\n")
            })
        }
    }
}

fn verify(phi: &AutomorphismSpec, as_json: bool) -> Outcome {
    let report = verify_automorphism(phi);
    if as_json {
        let out = pretty(&json!({ "ok": report.ok, "failure": report.failure.as_ref().map(ToString::to_string) }));
        if report.ok {
            return Ok(out);
        }
        print!("{out}");
        return Err(CliError::Domain("not an automorphism".into()));
    }
    match report.failure {
        None => Ok(format!(
            "automorphism of M_{}({}, ρ): images in pattern, products preserved, unit fixed, bijective\n",
            phi.relation().n(),
            phi.field()
        )),
        Some(f) => Err(CliError::Domain(format!("not an automorphism: {f}"))),
    }
}

fn factor(phi: &AutomorphismSpec, as_json: bool) -> Outcome {
    let fac = factor_automorphism(phi)?;
    let spec = fac.to_spec()?;
    let doc = pretty(&io::automorphism_to_json(&spec, true));
    if as_json {
        return Ok(doc);
    }
    let mut s = String::new();
    let _ = writeln!(s, "tau: {} = {}", fac.tau.cycle_notation(), fac.tau);
    let _ = writeln!(s, "g: {}", fac.g);
    let _ = writeln!(s, "A:");
    let _ = write!(s, "{}", fac.a);
    let _ = writeln!(
        s,
        "check: Ψ_A ∘ G ∘ P_τ agrees with the input on all {} basis elements",
        phi.relation().len()
    );
    let _ = writeln!(s);
    s.push_str(&doc);
    Ok(s)
}

fn oracle_command(sub: OracleCommand, as_json: bool) -> Outcome {
    match sub {
        OracleCommand::Autos(args) => {
            let list = oracle::brute_relation_automorphisms(&args.load()?)?;
            let images: Vec<Vec<usize>> = list.iter().map(|p| p.images_one_based()).collect();
            Ok(if as_json {
                pretty(&json!({ "count": list.len(), "automorphisms": images }))
            } else {
                let cycles: Vec<String> = list.iter().map(|p| format!("  {}\n", p.cycle_notation())).collect();
                format!("{} relation automorphism(s)\n{}", list.len(), cycles.concat())
            })
        }
        OracleCommand::Transrank(args) => {
            let r = oracle::brute_cocycle_rank(&args.load()?)?;
            Ok(if as_json { pretty(&json!({ "rank": r })) } else { format!("rank: {r}\n") })
        }
        OracleCommand::Quasiorders { n } => {
            let all = oracle::enumerate_quasiorders(n)?;
            Ok(if as_json {
                let rels: Vec<Value> = all.iter().map(io::relation_to_json).collect();
                pretty(&json!({ "count": all.len(), "relations": rels }))
            } else {
                format!("{} quasi-orders on {n} points\n", all.len())
            })
        }
        OracleCommand::Random { rel, field, seed } => {
            let rel = Arc::new(rel.load()?);
            let phi = oracle::random_factored_automorphism(&rel, parse_field(&field)?, seed)?;
            Ok(pretty(&io::automorphism_to_json(&phi, true)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
