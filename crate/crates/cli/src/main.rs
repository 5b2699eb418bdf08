//! `raney`: generate lattices, classify them, compute maps and quantale
//! operations, and run the verification suite.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input (including
//! caps), 3 internal error.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use raney_core::cdcheck::{classify_lattice, distributive_oracle, raney_join_criterion, raney_meet_criterion};
use raney_core::map::{
    compose, interior, left_adjoint, raney_join, raney_meet, right_adjoint, special,
};
use raney_core::quantaloid::{
    central_elements, cyclic_dualizing_elements, cyclic_elements, dual_tensor, enumerate_homset,
    residual_left, residual_right, star, DEFAULT_CAP,
};
use raney_core::suite::{builtin_corpus, run_suite_with_cap, DEFAULT_SEED};
use raney_core::{generate, Error, GeneratorSpec, LatMap, Lattice, MapDoc, Special};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "raney", version, about = "Finite lattice and quantale workbench")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Cap on enumerated homset sizes.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a lattice document.
    Gen {
        #[command(subcommand)]
        spec: Gen,
    },
    /// Classify a lattice and run both Raney criteria against the oracle.
    Check {
        lattice: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compute a special map on a lattice, or a transform of a map file.
    Map {
        #[command(subcommand)]
        kind: MapKind,
    },
    /// Operations in the quantale of join-continuous maps.
    Q {
        #[command(subcommand)]
        op: QOp,
    },
    /// Run the theorem checks over a corpus.
    Verify {
        /// `builtin` or a directory of lattice documents.
        #[arg(long, default_value = "builtin")]
        corpus: String,
        /// Comma-separated check ids; all when omitted.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Include per-cell timings.
        #[arg(long)]
        timing: bool,
    },
}

#[derive(Subcommand)]
enum Gen {
    Chain { n: usize },
    Boolean { k: usize },
    M3,
    N5,
    /// Product of two chains.
    Product { a: usize, b: usize },
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        size: usize,
    },
}

#[derive(Subcommand)]
enum MapKind {
    Id { lattice: PathBuf },
    O { lattice: PathBuf },
    Omega { lattice: PathBuf },
    /// Constant c_x (bottom still goes to bottom).
    C { x: usize, lattice: PathBuf },
    /// Annihilator a_x.
    A { x: usize, lattice: PathBuf },
    Alpha { x: usize, lattice: PathBuf },
    Nu { x: usize, lattice: PathBuf },
    Interior { map: PathBuf },
    RaneyJoin { map: PathBuf },
    RaneyMeet { map: PathBuf },
    /// Right adjoint, or with --left the left adjoint.
    Adjoint {
        map: PathBuf,
        #[arg(long)]
        left: bool,
    },
}

#[derive(Subcommand)]
enum QOp {
    Enumerate {
        lattice: PathBuf,
        /// Print every map.
        #[arg(long)]
        dump: bool,
    },
    Cyclic { lattice: PathBuf },
    Central { lattice: PathBuf },
    /// Cyclic dualizing elements.
    Dualizing { lattice: PathBuf },
    Star { map: PathBuf },
    /// g . f
    Compose { g: PathBuf, f: PathBuf },
    /// g \ h
    ResidualLeft { g: PathBuf, h: PathBuf },
    /// h / f
    ResidualRight { h: PathBuf, f: PathBuf },
    /// g (+) f
    Oplus { g: PathBuf, f: PathBuf },
}

enum Failure {
    Check(String),
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

/// Lattices loaded by path, shared between the maps that mention them.
#[derive(Default)]
struct Loader {
    lattices: HashMap<PathBuf, Arc<Lattice>>,
}

/// A map together with the files its domain and codomain came from.
struct Loaded {
    map: LatMap,
    dom: String,
    cod: String,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

impl Loader {
    fn lattice(&mut self, path: &Path) -> Result<Arc<Lattice>, Failure> {
        if let Some(l) = self.lattices.get(path) {
            return Ok(l.clone());
        }
        let l = Lattice::from_json(&read(path)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let l = Arc::new(l);
        self.lattices.insert(path.to_path_buf(), l.clone());
        Ok(l)
    }

    /// Lattice paths inside a map document are tried as given, then
    /// relative to the map file.
    fn resolve(&mut self, name: &str, near: &Path) -> Result<(Arc<Lattice>, String), Failure> {
        let direct = PathBuf::from(name);
        let path = if direct.exists() {
            direct
        } else {
            near.parent().unwrap_or(Path::new(".")).join(name)
        };
        Ok((self.lattice(&path)?, name.to_string()))
    }

    fn map(&mut self, path: &Path) -> Result<Loaded, Failure> {
        let doc: MapDoc = serde_json::from_str(&read(path)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let (dom, dom_name) = self.resolve(&doc.dom, path)?;
        let (cod, cod_name) = self.resolve(&doc.cod, path)?;
        Ok(Loaded {
            map: LatMap::new(dom, cod, doc.values)?,
            dom: dom_name,
            cod: cod_name,
        })
    }
}

fn map_doc(map: &LatMap, dom: &str, cod: &str) -> String {
    let doc = MapDoc {
        dom: dom.to_string(),
        cod: cod.to_string(),
        values: map.values().to_vec(),
    };
    serde_json::to_string(&doc).expect("map document serializes")
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializes")
}

fn gen(spec: Gen) -> Outcome {
    let spec = match spec {
        Gen::Chain { n } => GeneratorSpec::Chain(n),
        Gen::Boolean { k } => GeneratorSpec::Boolean(k),
        Gen::M3 => GeneratorSpec::M3,
        Gen::N5 => GeneratorSpec::N5,
        Gen::Product { a, b } => GeneratorSpec::Product(a, b),
        Gen::Random { seed, size } => GeneratorSpec::Random { seed, n: size },
    };
    Ok(generate(&spec)?.to_json())
}

#[derive(Serialize)]
struct CheckReport {
    name: String,
    size: usize,
    profile: raney_core::LatticeProfile,
    raney_join: raney_core::CheckResult,
    raney_meet: raney_core::CheckResult,
    oracle: raney_core::CheckResult,
    agreement: bool,
}

fn check(loader: &mut Loader, path: &Path, as_json: bool) -> Outcome {
    let l = loader.lattice(path)?;
    let strip = |mut r: raney_core::CheckResult| {
        r.elapsed = Default::default();
        r
    };
    let report = CheckReport {
        name: l.name().to_string(),
        size: l.len(),
        profile: classify_lattice(&l),
        raney_join: strip(raney_join_criterion(&l)),
        raney_meet: strip(raney_meet_criterion(&l)),
        oracle: strip(distributive_oracle(&l)),
        agreement: false,
    };
    let report = CheckReport {
        agreement: report.raney_join.holds == report.oracle.holds
            && report.raney_meet.holds == report.oracle.holds,
        ..report
    };
    if as_json {
        return Ok(json(&report));
    }
    let flag = |b: bool| if b { "T" } else { "F" };
    let witness = |r: &raney_core::CheckResult| {
        r.witness
            .as_ref()
            .map(|w| format!(" witness {}", serde_json::to_string(w).unwrap_or_default()))
            .unwrap_or_default()
    };
    let p = &report.profile;
    Ok(format!(
        "{} ({} elements)\nchain:{} distributive:{} CD:{} smooth:{} spatial:{} join-primes:{:?}\nraney-join:{}{}\nraney-meet:{}{}\noracle:{}{}\nagreement:{}\n",
        report.name,
        report.size,
        flag(p.chain),
        flag(p.distributive),
        flag(p.completely_distributive),
        flag(p.smooth),
        flag(p.spatial),
        p.join_primes,
        flag(report.raney_join.holds),
        witness(&report.raney_join),
        flag(report.raney_meet.holds),
        witness(&report.raney_meet),
        flag(report.oracle.holds),
        witness(&report.oracle),
        flag(report.agreement),
    ))
}

fn lattice_map(loader: &mut Loader, kind: MapKind) -> Outcome {
    let on = |loader: &mut Loader, path: &Path, kind: Special| -> Outcome {
        let l = loader.lattice(path)?;
        let name = path.to_string_lossy();
        Ok(map_doc(&special(&l, kind)?, &name, &name))
    };
    match kind {
        MapKind::Id { lattice } => {
            let l = loader.lattice(&lattice)?;
            let name = lattice.to_string_lossy();
            Ok(map_doc(&LatMap::identity(&l), &name, &name))
        }
        MapKind::O { lattice } => on(loader, &lattice, Special::O),
        MapKind::Omega { lattice } => on(loader, &lattice, Special::Omega),
        MapKind::C { x, lattice } => on(loader, &lattice, Special::Const(x)),
        MapKind::A { x, lattice } => on(loader, &lattice, Special::Annihilator(x)),
        MapKind::Alpha { x, lattice } => on(loader, &lattice, Special::Alpha(x)),
        MapKind::Nu { x, lattice } => on(loader, &lattice, Special::Nu(x)),
        MapKind::Interior { map } => {
            let f = loader.map(&map)?;
            Ok(map_doc(&interior(&f.map), &f.dom, &f.cod))
        }
        MapKind::RaneyJoin { map } => {
            let f = loader.map(&map)?;
            Ok(map_doc(&raney_join(&f.map), &f.dom, &f.cod))
        }
        MapKind::RaneyMeet { map } => {
            let f = loader.map(&map)?;
            Ok(map_doc(&raney_meet(&f.map), &f.dom, &f.cod))
        }
        MapKind::Adjoint { map, left } => {
            let f = loader.map(&map)?;
            let adj = if left {
                left_adjoint(&f.map)?
            } else {
                right_adjoint(&f.map)?
            };
            Ok(map_doc(&adj, &f.cod, &f.dom))
        }
    }
}

fn map_list(maps: Vec<LatMap>) -> String {
    let mut out = format!("count {}\n", maps.len());
    for m in maps {
        out.push_str(&serde_json::to_string(m.values()).expect("serializes"));
        out.push('\n');
    }
    out
}

fn quantale(loader: &mut Loader, op: QOp, cap: usize) -> Outcome {
    let endo = |loader: &mut Loader, path: &Path| {
        let l = loader.lattice(path)?;
        enumerate_homset(&l, &l, cap).map_err(Failure::from)
    };
    match op {
        QOp::Enumerate { lattice, dump } => {
            let q = endo(loader, &lattice)?;
            if dump {
                Ok(map_list(q.maps().to_vec()))
            } else {
                Ok(format!("count {}\n", q.len()))
            }
        }
        QOp::Cyclic { lattice } => Ok(map_list(cyclic_elements(&endo(loader, &lattice)?)?)),
        QOp::Central { lattice } => Ok(map_list(central_elements(&endo(loader, &lattice)?)?)),
        QOp::Dualizing { lattice } => {
            Ok(map_list(cyclic_dualizing_elements(&endo(loader, &lattice)?)?))
        }
        QOp::Star { map } => {
            let f = loader.map(&map)?;
            Ok(map_doc(&star(&f.map)?, &f.cod, &f.dom))
        }
        QOp::Compose { g, f } => {
            let (g, f) = (loader.map(&g)?, loader.map(&f)?);
            Ok(map_doc(&compose(&g.map, &f.map)?, &f.dom, &g.cod))
        }
        QOp::ResidualLeft { g, h } => {
            let (g, h) = (loader.map(&g)?, loader.map(&h)?);
            Ok(map_doc(&residual_left(&g.map, &h.map)?, &h.dom, &g.dom))
        }
        QOp::ResidualRight { h, f } => {
            let (h, f) = (loader.map(&h)?, loader.map(&f)?);
            Ok(map_doc(&residual_right(&h.map, &f.map)?, &f.cod, &h.cod))
        }
        QOp::Oplus { g, f } => {
            let (g, f) = (loader.map(&g)?, loader.map(&f)?);
            Ok(map_doc(&dual_tensor(&g.map, &f.map)?, &f.dom, &g.cod))
        }
    }
}

fn load_corpus(loader: &mut Loader, corpus: &str) -> Result<Vec<Arc<Lattice>>, Failure> {
    if corpus == "builtin" {
        return Ok(builtin_corpus());
    }
    let dir = Path::new(corpus);
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::Input(format!("{corpus}: {e}")))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Failure::Input(format!("{corpus}: no lattice documents")));
    }
    files.iter().map(|p| loader.lattice(p)).collect()
}

fn verify(
    loader: &mut Loader,
    corpus: &str,
    checks: &[String],
    as_json: bool,
    seed: u64,
    timing: bool,
    cap: usize,
) -> Outcome {
    let lattices = load_corpus(loader, corpus)?;
    let ids: Vec<&str> = checks.iter().map(String::as_str).collect();
    let mut report = run_suite_with_cap(&lattices, &ids, seed, cap)?;
    if !timing {
        report.strip_timing();
    }
    let text = if as_json {
        let mut s = report.to_json();
        s.push('\n');
        s
    } else {
        report.render_text()
    };
    if report.success() {
        Ok(text)
    } else {
        Err(Failure::Check(text))
    }
}

fn run(cli: Cli) -> Outcome {
    let mut loader = Loader::default();
    match cli.command {
        Command::Gen { spec } => gen(spec),
        Command::Check { lattice, json } => check(&mut loader, &lattice, json),
        Command::Map { kind } => lattice_map(&mut loader, kind),
        Command::Q { op } => quantale(&mut loader, op, cli.cap),
        Command::Verify {
            corpus,
            checks,
            json,
            seed,
            timing,
        } => verify(&mut loader, &corpus, &checks, json, seed, timing, cli.cap),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Internal(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let output = cli.output.clone();
    let result = std::panic::catch_unwind(|| run(cli))
        .unwrap_or_else(|_| Err(Failure::Internal("internal error".to_string())));
    let (text, code) = match result {
        Ok(text) => (Some(text), 0),
        Err(Failure::Check(text)) => (Some(text), 1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            (None, 2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            (None, 3)
        }
    };
    if let Some(text) = text {
        if let Err(f) = emit(output.as_deref(), &text) {
            let (msg, code) = match f {
                Failure::Input(m) => (m, 2),
                Failure::Check(m) | Failure::Internal(m) => (m, 3),
            };
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    }
    ExitCode::from(code)
}
