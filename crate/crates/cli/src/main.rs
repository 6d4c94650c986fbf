//! `lattice-pd`: batch front end for lattice-indexed persistence.
//!
//! Every command reads JSON files and writes JSON (or DOT / text) to stdout.
//! Exit status: 0 on success, 1 when an input fails validation (with a JSON
//! diagnostic on stderr), 2 on usage errors.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lattice_pd::distances::{
    bottleneck, critical_points, edit_bounds, interpolate, matching_norm, path_length, Category,
    CategoryMorphism, MorphismPath,
};
use lattice_pd::io::{self, AnyPath, Doc, End};
use lattice_pd::{
    bd, check_charge_morphism, check_filtration_morphism, check_mon_morphism, check_monotone, kan_extend,
    lift_map, mobius_invert, Error, Field, Report,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "lattice-pd", version, about = "Persistence diagrams over finite metric lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Cat {
    Fil,
    Mon,
    Fnc,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Barcode,
}

#[derive(Subcommand)]
enum Command {
    /// Check any input file and report what it is.
    Validate { file: PathBuf },
    /// List the intervals of a lattice.
    Intervals { lattice: PathBuf },
    /// Distortion of a lattice map and of its lift.
    Distortion { morphism: PathBuf },
    /// Birth-death function of a filtration (all dimensions unless `--dim`).
    Bd {
        filtration: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long)]
        full: bool,
    },
    /// Möbius inversion of an interval function.
    Mobius {
        function: PathBuf,
        #[arg(long)]
        full: bool,
    },
    /// Persistence diagram: Möbius inversion of the birth-death function.
    Pd {
        filtration: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long)]
        full: bool,
    },
    /// Check a morphism triple in one of the three categories.
    Check {
        #[arg(value_enum)]
        category: Cat,
        triple: PathBuf,
    },
    /// Left Kan extension of a filtration along a lattice map.
    Kan { filtration: PathBuf, map: PathBuf },
    /// Total distortion of a path of morphisms.
    PathLength { path: PathBuf },
    /// Bottleneck distance and an optimal matching.
    Bottleneck { sigma: PathBuf, tau: PathBuf },
    /// Critical times of a matching, or the interpolated diagram at `--t`.
    Interpolate {
        sigma: PathBuf,
        tau: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Edit-distance bounds with the witness path of an optimal matching.
    Witness {
        sigma: PathBuf,
        tau: PathBuf,
        /// Write the path file here instead of inlining it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Signed-sum diagram of a one-parameter filtration.
    ClassicalPd {
        filtration: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        field: u32,
        #[arg(long)]
        full: bool,
    },
    /// Graphviz DOT or a text barcode.
    Render {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

/// A failure destined for stderr with exit status 1.
struct Failure {
    kind: String,
    message: String,
    violations: Option<Report>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { kind: e.kind().to_string(), message: e.to_string(), violations: None }
    }
}

impl Failure {
    fn invalid(kind: &str, report: Report) -> Self {
        Failure { kind: kind.to_string(), message: report.summary(), violations: Some(report) }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({"error": self.kind, "message": self.message});
        if let Some(r) = &self.violations {
            v["violations"] = json!(r.violations);
        }
        v
    }
}

type Outcome = std::result::Result<String, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("LATTICE_PD_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(1)
        }
    }
}

fn pretty(v: &Value) -> String {
    io::to_text(v)
}

fn read(path: &Path) -> Result<Doc, Failure> {
    Ok(Doc::read(path)?)
}

fn field(p: u32) -> Result<Field, Failure> {
    Ok(Field::new(p)?)
}

fn ensure(kind: &str, report: Report) -> Result<Report, Failure> {
    if report.is_valid() {
        Ok(report)
    } else {
        Err(Failure::invalid(kind, report))
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => validate(&read(&file)?),
        Command::Intervals { lattice } => {
            let p = io::lattice_of(&read(&lattice)?)?.lattice;
            let index = lattice_pd::interval_lattice(&p);
            let names: Vec<&str> = (0..index.len()).map(|k| index.name(k)).collect();
            Ok(pretty(&json!({"count": index.len(), "intervals": names})))
        }
        Command::Distortion { morphism } => {
            let m = io::load_morphism(&read(&morphism)?)?;
            let lifted = lift_map(&m.map);
            Ok(pretty(&json!({
                "distortion": io::ext_real_json(m.map.distortion()),
                "lifted": io::ext_real_json(lifted.distortion()),
            })))
        }
        Command::Bd { filtration, dim, field: p, full } => {
            let f = io::load_filtration(&read(&filtration)?)?;
            let field = field(p)?;
            match dim {
                Some(i) => Ok(pretty(&io::function_to_json(&bd(&f, i, field)?, None, full))),
                None => {
                    let top = f.complex().dim().unwrap_or(0);
                    let dims = (0..=top)
                        .map(|i| Ok(json!({"dim": i, "function": io::function_to_json(&bd(&f, i, field)?, None, full)})))
                        .collect::<Result<Vec<_>, Failure>>()?;
                    Ok(pretty(&json!({"dimensions": dims})))
                }
            }
        }
        Command::Mobius { function, full } => {
            let (f, base) = io::load_function(&read(&function)?)?;
            Ok(pretty(&io::function_to_json(&mobius_invert(&f)?, base.coords.as_deref(), full)))
        }
        Command::Pd { filtration, dim, field: p, full } => {
            let f = io::load_filtration(&read(&filtration)?)?;
            let sigma = mobius_invert(&bd(&f, dim, field(p)?)?)?;
            Ok(pretty(&io::function_to_json(&sigma, None, full)))
        }
        Command::Check { category, triple } => check(category, &read(&triple)?),
        Command::Kan { filtration, map } => {
            let f = io::load_filtration(&read(&filtration)?)?;
            let alpha = io::load_map_from(&read(&map)?, f.index())?;
            Ok(pretty(&io::filtration_to_json(&kan_extend(&f, &alpha)?)))
        }
        Command::PathLength { path } => match io::load_path(&read(&path)?)? {
            AnyPath::Fil(p) => path_summary(&p),
            AnyPath::Mon(p) => path_summary(&p),
            AnyPath::Fnc(p) => path_summary(&p),
        },
        Command::Bottleneck { sigma, tau } => {
            let (s, t) = (io::load_diagram(&read(&sigma)?)?, io::load_diagram(&read(&tau)?)?);
            let (d, gamma) = bottleneck(&s, &t)?;
            Ok(pretty(&json!({"distance": io::ext_real_json(d), "matching": io::matching_to_json(&gamma)})))
        }
        Command::Interpolate { sigma, tau, matching, t } => {
            let (s, u) = (io::load_diagram(&read(&sigma)?)?, io::load_diagram(&read(&tau)?)?);
            let gamma = io::load_matching(&read(&matching)?, s, u)?;
            match t {
                Some(t) => Ok(pretty(&io::diagram_to_json(&interpolate(&gamma, t)?.diagram, false))),
                None => {
                    let critical = critical_points(&gamma)?;
                    Ok(pretty(&json!({
                        "norm": io::ext_real_json(matching_norm(&gamma)),
                        "critical_points": critical,
                    })))
                }
            }
        }
        Command::Witness { sigma, tau, out } => {
            let (s, t) = (io::load_diagram(&read(&sigma)?)?, io::load_diagram(&read(&tau)?)?);
            let bounds = edit_bounds(&s, &t)?;
            let mut v = json!({
                "bounds": [io::ext_real_json(bounds.lower), io::ext_real_json(bounds.upper)],
                "matching": io::matching_to_json(&bounds.matching),
            });
            // with d_B = ∞ there is no finite witness to write
            if let Some(p) = &bounds.path {
                let path = io::charge_path_to_json(p);
                v["steps"] = json!(p.steps().len());
                match out {
                    Some(file) => {
                        std::fs::write(&file, pretty(&path))
                            .map_err(|e| Error::Format(format!("{}: {e}", file.display())))?;
                        v["path"] = json!(file.display().to_string());
                    }
                    None => v["path"] = path,
                }
            }
            Ok(pretty(&v))
        }
        Command::ClassicalPd { filtration, dim, field: p, full } => {
            let (f, embedding) = io::load_classical(&read(&filtration)?)?;
            let sigma = lattice_pd::classical::classical_pd_signed(&f, dim, field(p)?)?;
            Ok(pretty(&io::function_to_json(&sigma, Some(embedding.coords()), full)))
        }
        Command::Render { file, format } => {
            let doc = read(&file)?;
            match io::kind_of(&doc.value) {
                "function" => {
                    let (f, _) = io::load_function(&doc)?;
                    Ok(match format {
                        Format::Barcode if f.base().is_chain() => render::barcode(&f),
                        _ => render::function_dot(&f),
                    })
                }
                _ => Ok(render::lattice_dot(&io::lattice_of(&doc)?.lattice)),
            }
        }
    }
}

fn path_summary<M: CategoryMorphism>(path: &MorphismPath<M>) -> Outcome {
    let length = path_length(path)?;
    let category = match path.category() {
        Category::Fil => "fil",
        Category::Mon => "mon",
        Category::Fnc => "fnc",
    };
    let steps: Vec<Value> = path.step_lengths().into_iter().map(io::ext_real_json).collect();
    Ok(pretty(&json!({"category": category, "length": io::ext_real_json(length), "steps": steps})))
}

fn check(category: Cat, doc: &Doc) -> Outcome {
    let m = io::load_morphism(doc)?;
    let report = match category {
        Cat::Fil => {
            let (f, g, alpha) = m.filtrations()?;
            check_filtration_morphism(&f, &g, &alpha)?
        }
        Cat::Mon => {
            let (f, g, lifted) = m.functions()?;
            let mut report = check_monotone(&f);
            report.violations.extend(check_monotone(&g).violations);
            report.violations.extend(check_mon_morphism(&f, &g, &lifted)?.violations);
            report
        }
        Cat::Fnc => {
            let (f, g, lifted) = m.functions()?;
            check_charge_morphism(&f, &g, &lifted)?
        }
    };
    let report = ensure("InvalidMorphism", report)?;
    Ok(pretty(&json!({"valid": report.is_valid(), "violations": report.violations})))
}

fn validate(doc: &Doc) -> Outcome {
    let kind = io::kind_of(&doc.value);
    let mut out = json!({"kind": kind, "valid": true});
    match kind {
        "lattice" => {
            let p = io::load_lattice(doc)?.lattice;
            out["elements"] = json!(p.len());
        }
        "complex" => {
            let k = io::load_complex(doc)?;
            out["simplices"] = json!(k.len());
        }
        "filtration" | "classical" => {
            let f = io::load_filtration(doc)?;
            out["stages"] = json!(f.index().len());
        }
        "function" => {
            let (f, _) = io::load_function(doc)?;
            out["monotone"] = json!(check_monotone(&f).is_valid());
        }
        "morphism" => {
            let m = io::load_morphism(doc)?;
            out["distortion"] = io::ext_real_json(m.map.distortion());
            match (&m.source, &m.target) {
                (End::Filtration(_), End::Filtration(_)) => {
                    let (f, g, alpha) = m.filtrations()?;
                    ensure("InvalidMorphism", check_filtration_morphism(&f, &g, &alpha)?)?;
                }
                (End::Function(_), End::Function(_)) => {
                    let (f, g, lifted) = m.functions()?;
                    out["mon"] = json!(check_mon_morphism(&f, &g, &lifted)?.is_valid());
                    out["fnc"] = json!(check_charge_morphism(&f, &g, &lifted)?.is_valid());
                }
                _ => {}
            }
        }
        "path" => {
            let (category, length) = match io::load_path(doc)? {
                AnyPath::Fil(p) => ("fil", path_length(&p)?),
                AnyPath::Mon(p) => ("mon", path_length(&p)?),
                AnyPath::Fnc(p) => ("fnc", path_length(&p)?),
            };
            out["category"] = json!(category);
            out["length"] = io::ext_real_json(length);
        }
        _ => return Err(Error::Format(format!("cannot tell what kind of object this is ({kind})")).into()),
    }
    Ok(pretty(&out))
}
