use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use plhm::chain::{BasisKind, ChainComplexData, Cochain, Direction};
use plhm::coefficients::CoefficientSystem;
use plhm::complex::SimplicialComplex;
use plhm::corpus;
use plhm::cover::orientability_and_double_cover;
use plhm::css::{css_report, triangulation_obstruction, CssOptions};
use plhm::manifold::is_homology_manifold;
use plhm::quotient::Budgets;
use plhm::theta::ThetaModel;

#[derive(Parser, Debug)]
#[command(name = "plhm", version, about = "Homology manifold certification and triangulation invariants")]
struct Cli {
    /// Coefficients: z, z2, zk:<k> or model:<path>.
    #[arg(long, global = true, default_value = "z")]
    coeff: String,
    /// Link-class model (JSON).
    #[arg(long, global = true)]
    theta: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 5000)]
    tietze_budget: usize,
    #[arg(long, global = true, default_value_t = 120)]
    quotient_bound: usize,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a named complex as a facet file.
    Gen {
        name: String,
        args: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Certify the link condition and report singular vertices.
    Check { file: String },
    /// Homology or cohomology groups.
    Homology {
        file: String,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        cohomology: bool,
        /// Orientation-twisted coefficients.
        #[arg(long)]
        twisted: bool,
    },
    /// Link-class cochain, its class, Rokhlin reduction and duality.
    Css {
        file: String,
        /// Fail on link classes missing from the model.
        #[arg(long)]
        strict: bool,
    },
    /// Lifting obstruction of a mod-2 cocycle through the model.
    Obstruct {
        file: String,
        /// Cochain JSON file, or `generator:<i>` for a generator of H^d(K; Z/2).
        #[arg(long)]
        cocycle: String,
        #[arg(long, default_value_t = 4)]
        degree: usize,
    },
}

/// Verdict-level outcome of a command that ran to completion.
enum Outcome {
    Ok,
    No,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    if cli.tietze_budget == 0 || cli.quotient_bound == 0 {
        bail!("budgets must be positive");
    }
    rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global().context("thread pool")?;
    match &cli.command {
        Command::Gen { name, args, output } => {
            let k = generate(name, args)?;
            let text = corpus::to_facet_file(&k);
            match output {
                Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
            Ok(Outcome::Ok)
        }
        Command::Check { file } => check(cli, file),
        Command::Homology { file, degree, cohomology, twisted } => homology(cli, file, *degree, *cohomology, *twisted),
        Command::Css { file, strict } => css(cli, file, *strict),
        Command::Obstruct { file, cocycle, degree } => obstruct(cli, file, cocycle, *degree),
    }
}

fn budgets(cli: &Cli) -> Budgets {
    Budgets { tietze_moves: cli.tietze_budget, quotient_bound: cli.quotient_bound, seed: cli.seed, ..Budgets::default() }
}

fn config_json(cli: &Cli) -> Value {
    json!({
        "seed": cli.seed,
        "tietze_budget": cli.tietze_budget,
        "quotient_bound": cli.quotient_bound,
        "coeff": cli.coeff,
    })
}

fn emit(cli: &Cli, report: Value, text: impl FnOnce() -> String) {
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("serializable")),
        Format::Text => print!("{}", text()),
    }
}

fn corpus_named(name: &str) -> Option<SimplicialComplex> {
    Some(match name {
        "rp2" => corpus::rp2(),
        "torus" => corpus::torus(),
        "poincare" => corpus::poincare(),
        "sigmap" | "sigma_p" => corpus::sigma_p(),
        "sigma2p" => corpus::sigma2p(),
        "sigma3rp2" => corpus::sigma3rp2(),
        _ => return None,
    })
}

/// A facet file path, or a parameter-free corpus name.
fn load(source: &str) -> Result<SimplicialComplex> {
    let path = Path::new(source);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {source}"))?;
        return corpus::parse_facets(&text).with_context(|| format!("parsing {source}"));
    }
    corpus_named(source).ok_or_else(|| anyhow!("{source}: no such file or corpus name"))
}

fn number(args: &[String], i: usize, what: &str) -> Result<usize> {
    let s = args.get(i).ok_or_else(|| anyhow!("missing {what}"))?;
    s.parse().with_context(|| format!("{what} must be a non-negative integer, got {s}"))
}

fn generate(name: &str, args: &[String]) -> Result<SimplicialComplex> {
    let arity = |n: usize| -> Result<()> {
        if args.len() > n {
            bail!("gen {name}: unexpected argument {}", args[n]);
        }
        Ok(())
    };
    let k = match name {
        "sphere" => {
            arity(1)?;
            corpus::sphere(number(args, 0, "dimension")?)
        }
        "simplex" => {
            arity(1)?;
            corpus::simplex(number(args, 0, "dimension")?)
        }
        "cone" => {
            arity(1)?;
            load(args.first().ok_or_else(|| anyhow!("missing complex"))?)?.cone()?
        }
        "susp" => {
            arity(2)?;
            let k = load(args.first().ok_or_else(|| anyhow!("missing complex"))?)?;
            let times = if args.len() > 1 { number(args, 1, "suspension count")? } else { 1 };
            corpus::iterated_suspension(&k, times)
        }
        "join" => {
            arity(2)?;
            let a = load(args.first().ok_or_else(|| anyhow!("missing first complex"))?)?;
            let mut b = load(args.get(1).ok_or_else(|| anyhow!("missing second complex"))?)?;
            while b.vertices().iter().any(|t| a.vertex_id(t).is_some()) {
                b = b.relabel(|t| format!("{t}'"))?;
            }
            a.join(&b)?
        }
        _ => {
            arity(0)?;
            corpus_named(name).ok_or_else(|| anyhow!("unknown complex name {name}"))?
        }
    };
    Ok(k)
}

fn check(cli: &Cli, file: &str) -> Result<Outcome> {
    let k = load(file)?;
    let report = is_homology_manifold(&k, &budgets(cli))?;
    let mut j = report.to_json();
    j["config"] = config_json(cli);
    emit(cli, j, || {
        let mut s = format!(
            "dimension: {}\nhomology manifold: {}\nclosed: {}\n",
            report.dimension,
            if report.is_homology_manifold { "yes" } else { "no" },
            report.closed
        );
        for b in report.bad_simplices() {
            s += &format!("bad link: {}\n", b.join(" "));
        }
        if let Some(sing) = &report.singular {
            s += &format!("singular vertices: [{}]\n", sing.singular.join(", "));
            if !sing.undetermined.is_empty() {
                s += &format!("undetermined vertices: [{}]\n", sing.undetermined.join(", "));
            }
        }
        for n in &report.notes {
            s += &format!("note: {n}\n");
        }
        s
    });
    Ok(if report.is_homology_manifold { Outcome::Ok } else { Outcome::No })
}

fn read_model(path: &Path) -> Result<ThetaModel> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ThetaModel::from_json(&text).with_context(|| format!("model {}", path.display()))
}

fn coefficients(spec: &str) -> Result<CoefficientSystem> {
    Ok(match spec {
        "z" => CoefficientSystem::integers(),
        "z2" => CoefficientSystem::mod_k(2),
        _ => {
            if let Some(k) = spec.strip_prefix("zk:") {
                let k: u64 = k.parse().with_context(|| format!("bad modulus in {spec}"))?;
                if k < 2 {
                    bail!("modulus must be at least 2");
                }
                CoefficientSystem::mod_k(k)
            } else if let Some(p) = spec.strip_prefix("model:") {
                read_model(Path::new(p))?.coefficients()
            } else {
                bail!("unknown coefficient spec {spec}; expected z, z2, zk:<k> or model:<path>")
            }
        }
    })
}

fn model(cli: &Cli) -> Result<Option<ThetaModel>> {
    if let Some(p) = &cli.theta {
        return read_model(p).map(Some);
    }
    match cli.coeff.strip_prefix("model:") {
        Some(p) => read_model(Path::new(p)).map(Some),
        None => Ok(None),
    }
}

fn homology(cli: &Cli, file: &str, degree: Option<usize>, cohomology: bool, twisted: bool) -> Result<Outcome> {
    let k = load(file)?;
    let mut coeffs = coefficients(&cli.coeff)?;
    let c = if twisted {
        let (_, cover) = orientability_and_double_cover(&k)?;
        coeffs = coeffs.orientation_twisted();
        ChainComplexData::twisted_simplicial(&k, &cover)
    } else {
        ChainComplexData::simplicial(&k)
    };
    let degrees: Vec<usize> = match degree {
        Some(d) => vec![d],
        None => (0..=c.top()).collect(),
    };
    let groups: Vec<_> = degrees
        .iter()
        .map(|&d| {
            if d > c.top() {
                plhm::GroupDescriptor::zero()
            } else if cohomology {
                c.cohomology(d, &coeffs)
            } else {
                c.homology(d, &coeffs)
            }
        })
        .collect();
    let j = json!({
        "kind": if cohomology { "cohomology" } else { "homology" },
        "twisted": twisted,
        "groups": degrees.iter().zip(&groups).map(|(d, g)| json!({"degree": d, "group": g})).collect::<Vec<_>>(),
        "config": config_json(cli),
    });
    emit(cli, j, || {
        let h = if cohomology { "H^" } else { "H_" };
        degrees.iter().zip(&groups).map(|(d, g)| format!("{h}{d} = {g}\n")).collect()
    });
    Ok(Outcome::Ok)
}

fn css(cli: &Cli, file: &str, strict: bool) -> Result<Outcome> {
    let k = load(file)?;
    let m = model(cli)?.unwrap_or_else(ThetaModel::empty);
    let options = CssOptions { auto_extend: !strict, budgets: budgets(cli) };
    let report = css_report(&k, &m, &options)?;
    let mut j = report.to_json();
    j["config"] = config_json(cli);
    emit(cli, j, || {
        let coeffs = report.cochain.model.coefficients();
        let mut s = format!("dimension: {}\n", report.cochain.dimension);
        let names: Vec<&str> = report.cochain.model.generators.iter().map(|g| g.name.as_str()).collect();
        s += &format!("model generators: [{}]\n", names.join(", "));
        let support = report.cochain.cochain.support(&coeffs);
        s += &format!("cochain support: {} cones\n", support.len());
        for i in support {
            let v: Vec<String> = report.cochain.cochain.values[i].iter().map(|x| x.to_string()).collect();
            s += &format!("  {} [{}] {}\n", report.cone_labels[i], v.join(", "), report.cochain.entries[i].label);
        }
        s += &format!("cocycle: {}\n", if report.is_cocycle { "yes" } else { "no" });
        s += &format!("class zero: {}\n", report.class.class.is_zero());
        s += &format!("duality: {}\n", if report.duality.matched() { "yes" } else { "no" });
        match &report.obstruction {
            Ok(o) => s += &format!("obstructed: {}\n", o.obstructed()),
            Err(e) => s += &format!("obstruction: {e}\n"),
        }
        for w in &report.cochain.warnings {
            s += &format!("warning: {w}\n");
        }
        s
    });
    Ok(Outcome::Ok)
}

fn obstruct(cli: &Cli, file: &str, cocycle: &str, degree: usize) -> Result<Outcome> {
    let k = load(file)?;
    let m = model(cli)?.ok_or_else(|| anyhow!("obstruct needs a model: pass --theta <path> or --coeff model:<path>"))?;
    let c = ChainComplexData::simplicial(&k);
    if degree > c.top() {
        bail!("degree {degree} exceeds the dimension of the complex");
    }
    let z2 = CoefficientSystem::mod_k(2);
    let x = if let Some(i) = cocycle.strip_prefix("generator:") {
        let i: usize = i.parse().with_context(|| format!("bad generator index in {cocycle}"))?;
        let gens = c.classes(degree, &z2, Direction::Cohomology)?.generators();
        let n = gens.len();
        gens.into_iter().nth(i).ok_or_else(|| anyhow!("generator {i} out of range: H^{degree}(K; Z/2) has {n}"))?
    } else {
        let text = std::fs::read_to_string(cocycle).with_context(|| format!("reading {cocycle}"))?;
        let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {cocycle}"))?;
        let x = Cochain::from_json(&v, BasisKind::Simplices, c.labels(degree), 1)?;
        if x.degree != degree {
            bail!("cocycle has degree {}, expected {degree}", x.degree);
        }
        x
    };
    let o = triangulation_obstruction(&c, &x, &m)?;
    let j = json!({
        "degree": degree,
        "cocycle": x.to_json(BasisKind::Simplices, c.labels(degree), &z2),
        "model": m,
        "obstruction": o.to_json(),
        "config": config_json(cli),
    });
    emit(cli, j, || {
        format!(
            "kernel: {}\nobstructed: {}\nlift exists: {}\nexact: {}\n",
            o.kernel,
            o.obstructed(),
            o.lift_exists,
            o.exact()
        )
    });
    Ok(Outcome::Ok)
}
