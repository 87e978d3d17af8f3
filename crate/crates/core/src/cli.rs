//! The `qk` command line.
//!
//! Exit codes: 0 success, 1 a verification or oracle mismatch, 2 usage,
//! parse or budget errors, 3 I/O errors. Nothing is written to standard
//! output unless the whole command succeeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::cache::DiskCache;
use crate::error::Error;
use crate::gkm::{Engine, Orientation, Torus};
use crate::oracles::{lr_constants_setvalued, MomentGraph};
use crate::quantum::{QuantumK, VerificationReport};
use crate::table::{to_json, SpaceSpec};
use crate::weyl::{Partition, Permutation};

/// Largest `n` accepted without `--equivariant`.
pub const MAX_N_NONEQUIVARIANT: usize = 8;
/// Largest `n` accepted with `--equivariant`.
pub const MAX_N_EQUIVARIANT: usize = 5;

#[derive(Parser, Debug)]
#[command(name = "qk", version, about = "Quantum K-theory of Grassmannians")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Grassmannian, as gr:m,n
    #[arg(long, global = true)]
    space: Option<String>,
    /// Work in equivariant K-theory (default: ordinary K-theory)
    #[arg(long, global = true)]
    equivariant: bool,
    /// Basis of the second factor: plain (O_v) or opposite (O^v)
    #[arg(long, global = true, value_enum, default_value_t = VBasis::Plain)]
    v_basis: VBasis,
    /// Cross-check against the slow reference implementations
    #[arg(long, global = true)]
    oracle: bool,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Ignore the on-disk table cache
    #[arg(long, global = true)]
    no_cache: bool,
    /// Write the result here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VBasis {
    Plain,
    Opposite,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure constants of one product
    Product {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Smallest degree of a curve from X^u to X_v
    Dist {
        #[arg(long, allow_hyphen_values = true)]
        u: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// The index w(-d) of the degree-d curve neighborhood of X^w
    Neighborhood {
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long)]
        d: usize,
    },
    /// All pairs' tables, one JSON object per line
    Table,
    /// Check the three theorems on every pair
    Verify {
        /// Restrict to these theorems (repeatable)
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        theorem: Vec<u8>,
    },
    /// Inspect or clear the table cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum CacheAction {
    Path,
    Clear,
    Stats,
}

enum Failure {
    Usage(String),
    Violation(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Cache(_) => Failure::Io(e.to_string()),
            Error::Parse(_)
            | Error::OutsideBox { .. }
            | Error::InvalidShape(_)
            | Error::InvalidIndex { .. }
            | Error::InvalidPermutation(_)
            | Error::ShapeMismatch(_) => Failure::Usage(e.to_string()),
            _ => Failure::Violation(format!("internal error: {e}")),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Runs one invocation; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.global.jobs {
        Some(0) => Err(Failure::Usage("--jobs must be positive".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Failure::Usage(e.to_string())),
        },
        None => execute(&cli),
    };
    match result {
        Ok(output) => match write_output(&cli.global, &output, stdout) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                3
            }
        },
        Err(Failure::Violation(report)) => {
            // the report is the output; the exit code carries the verdict
            let _ = stdout.write_all(report.as_bytes());
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            3
        }
    }
}

fn write_output(global: &Global, output: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match &global.out {
        Some(path) => {
            let tmp = path.with_extension("partial");
            std::fs::write(&tmp, output)?;
            std::fs::rename(&tmp, path)
        }
        None => stdout.write_all(output.as_bytes()),
    }
}

fn cache(global: &Global) -> Option<DiskCache> {
    if global.no_cache {
        None
    } else {
        DiskCache::default_location()
    }
}

fn torus(global: &Global) -> Torus {
    if global.equivariant {
        Torus::Equivariant
    } else {
        Torus::NonEquivariant
    }
}

fn open_space(global: &Global) -> Result<QuantumK, Failure> {
    let spec: SpaceSpec = global
        .space
        .as_deref()
        .ok_or_else(|| Failure::Usage("--space gr:m,n is required".into()))?
        .parse()?;
    let limit = if global.equivariant { MAX_N_EQUIVARIANT } else { MAX_N_NONEQUIVARIANT };
    if spec.n > limit {
        let mode = if global.equivariant { "equivariant" } else { "non-equivariant" };
        return Err(Failure::Usage(format!("{spec} is over budget: {mode} runs are limited to n <= {limit}")));
    }
    let engine = match cache(global) {
        Some(c) => Engine::with_cache(torus(global), c),
        None => Engine::new(torus(global)),
    };
    Ok(QuantumK::new(Arc::new(engine), spec.m, spec.n)?)
}

fn index(qk: &QuantumK, s: &str) -> Result<Permutation, Failure> {
    Ok(qk.index_of(&s.parse::<Partition>()?)?)
}

fn v_basis(global: &Global) -> Orientation {
    match global.v_basis {
        VBasis::Plain => Orientation::Plain,
        VBasis::Opposite => Orientation::Opposite,
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Cache { action } => cache_command(*action),
        Command::Product { u, v } => {
            let qk = open_space(g)?;
            let (u, v) = (index(&qk, u)?, index(&qk, v)?);
            let table = qk.structure_constants(&u, &v, v_basis(g))?;
            if g.oracle {
                let bad = classical_mismatches(&qk, &u, &v, v_basis(g))?;
                if !bad.is_empty() {
                    return Err(Failure::Violation(bad.join("\n") + "\n"));
                }
            }
            Ok(to_json(&table, g.equivariant)? + "\n")
        }
        Command::Dist { u, v } => {
            let qk = open_space(g)?;
            let (pu, pv): (Partition, Partition) = (u.parse()?, v.parse()?);
            let d = qk.dist(&qk.index_of(&pu)?, &qk.index_of(&pv)?)?;
            if g.oracle {
                let od = MomentGraph::new(qk.m(), qk.n()).dist(&pu, &pv);
                if od != d {
                    return Err(Failure::Violation(format!("dist={d} moment_graph_dist={od}\n")));
                }
            }
            Ok(serde_json::json!({ "dist": d }).to_string() + "\n")
        }
        Command::Neighborhood { w, d } => {
            let qk = open_space(g)?;
            let pw: Partition = w.parse()?;
            let out = qk.partition_of(&qk.curve_neighborhood_index(&qk.index_of(&pw)?, *d)?)?;
            if g.oracle {
                let o = MomentGraph::new(qk.m(), qk.n()).neighborhood(&pw, *d);
                if o.as_ref() != Some(&out) {
                    let shown = o.map_or("none".to_string(), |p| format!("{p:?}"));
                    return Err(Failure::Violation(format!("w_minus_d={out:?} moment_graph={shown}\n")));
                }
            }
            Ok(serde_json::json!({ "w_minus_d": out.to_string() }).to_string() + "\n")
        }
        Command::Table => {
            let qk = open_space(g)?;
            // (|λ|, λ lex) order, then pairs in the product order
            let idx = Partition::all_in_box(qk.m(), qk.n() - qk.m())
                .iter()
                .map(|p| qk.index_of(p))
                .collect::<Result<Vec<_>, Error>>()?;
            let pairs: Vec<(&Permutation, &Permutation)> =
                idx.iter().flat_map(|u| idx.iter().map(move |v| (u, v))).collect();
            let basis = v_basis(g);
            let lines = pairs
                .par_iter()
                .map(|(u, v)| Ok(to_json(&qk.structure_constants(u, v, basis)?, g.equivariant)?))
                .collect::<Result<Vec<String>, Failure>>()?;
            Ok(lines.into_iter().map(|l| l + "\n").collect())
        }
        Command::Verify { theorem } => verify(g, theorem),
    }
}

fn cache_command(action: CacheAction) -> Result<String, Failure> {
    let cache = DiskCache::default_location().ok_or_else(|| Failure::Io("no cache directory available".into()))?;
    Ok(match action {
        CacheAction::Path => format!("{}\n", cache.dir().display()),
        CacheAction::Clear => format!("removed {}\n", cache.clear()?),
        CacheAction::Stats => {
            let s = cache.stats()?;
            serde_json::json!({ "dir": cache.dir().display().to_string(), "files": s.files, "bytes": s.bytes })
                .to_string()
                + "\n"
        }
    })
}

/// Degree-0 entries against the set-valued tableau rule (ordinary K-theory only).
fn classical_mismatches(qk: &QuantumK, u: &Permutation, v: &Permutation, basis: Orientation) -> Result<Vec<String>, Failure> {
    if qk.engine().is_equivariant() || basis != Orientation::Opposite {
        return Ok(Vec::new());
    }
    let table = qk.structure_constants(u, v, basis)?.specialized();
    let ours: std::collections::BTreeMap<Partition, crate::laurent::Int> = table
        .entries
        .iter()
        .filter(|e| e.1 == 0)
        .map(|(w, _, c)| Ok((qk.partition_of(w)?, c.specialize_ones())))
        .collect::<Result<_, Error>>()?;
    let (pu, pv) = (qk.partition_of(u)?, qk.partition_of(v)?);
    let oracle = lr_constants_setvalued(&pu, &pv, qk.m(), qk.n());
    Ok(if ours == oracle {
        Vec::new()
    } else {
        vec![format!("classical sector u=({pu}) v=({pv}): ours {ours:?} tableaux {oracle:?}")]
    })
}

fn verify(g: &Global, selected: &[u8]) -> Result<String, Failure> {
    let qk = open_space(g)?;
    let wanted = |t: u8| selected.is_empty() || selected.contains(&t);
    let mut reports: Vec<VerificationReport> = Vec::new();
    if wanted(1) {
        reports.push(qk.verify_theorem1()?);
    }
    if wanted(2) {
        reports.push(qk.verify_theorem2()?);
    }
    if wanted(3) {
        reports.push(qk.verify_theorem3(g.oracle)?);
    }
    let mut lines = Vec::new();
    let mut violations = 0;
    let pairs = qk.indices().len().pow(2);
    for r in &reports {
        for v in &r.violations {
            lines.push(format!("theorem{} FAIL {v}", r.theorem));
        }
        violations += r.violations.len();
    }
    if g.oracle {
        let graph = MomentGraph::new(qk.m(), qk.n());
        for w in qk.indices() {
            let p = qk.partition_of(&w)?;
            for d in 0..=2 * qk.diameter() {
                let ours = qk.partition_of(&qk.curve_neighborhood_index(&w, d)?)?;
                if graph.neighborhood(&p, d).as_ref() != Some(&ours) {
                    lines.push(format!("oracle FAIL neighborhood w=({p}) d={d} ours=({ours})"));
                    violations += 1;
                }
            }
        }
        let idx = qk.indices();
        for u in &idx {
            for v in &idx {
                for bad in classical_mismatches(&qk, u, v, Orientation::Opposite)? {
                    lines.push(format!("oracle FAIL {bad}"));
                    violations += 1;
                }
            }
        }
    }
    let mut report = lines.join("\n");
    if !report.is_empty() {
        report.push('\n');
    }
    if violations == 0 {
        report.push_str(&format!("PASS pairs={pairs}\n"));
        Ok(report)
    } else {
        report.push_str(&format!("FAIL violations={violations} pairs={pairs}\n"));
        Err(Failure::Violation(report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["qk", "--no-cache"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn product_on_p1() {
        let (code, out, _) = call(&["product", "--space", "gr:1,2", "--u", "1", "--v", ""]);
        assert_eq!(code, 0);
        assert!(out.contains(r#""terms":[{"w":"","d":1,"N":"1"}]"#), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["product", "--space", "gr:2,4", "--u", "3,1", "--v", ""]).0, 2);
        assert_eq!(call(&["verify", "--space", "gr:9,20"]).0, 2);
        assert_eq!(call(&["verify", "--space", "gr:2,6", "--equivariant"]).0, 2);
        assert_eq!(call(&["dist", "--u", "1", "--v", "1"]).0, 2);
        let (code, out, err) = call(&["product", "--space", "gr:2,4", "--u", "x", "--v", ""]);
        assert_eq!((code, out.as_str()), (2, ""));
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn dist_and_neighborhood() {
        let (code, out, _) = call(&["dist", "--space", "gr:2,4", "--u", "2,2", "--v", "", "--oracle"]);
        assert_eq!((code, out.as_str()), (0, "{\"dist\":2}\n"));
        let (code, out, _) = call(&["neighborhood", "--space", "gr:2,4", "--w", "2,2", "--d", "1", "--oracle"]);
        assert_eq!((code, out.as_str()), (0, "{\"w_minus_d\":\"1\"}\n"));
    }

    #[test]
    fn verify_passes() {
        let (code, out, _) = call(&["verify", "--space", "gr:2,4", "--equivariant", "--jobs", "2"]);
        assert_eq!((code, out.as_str()), (0, "PASS pairs=36\n"));
        let (code, out, _) = call(&["verify", "--space", "gr:2,4", "--oracle", "--theorem", "3"]);
        assert_eq!((code, out.as_str()), (0, "PASS pairs=36\n"));
    }
}
