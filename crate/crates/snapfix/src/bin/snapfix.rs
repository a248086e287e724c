use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use snapfix::commands;
use snapfix::config::ObjectiveName;
use snapfix::report::{bench_csv, bench_table, Report};
use snapfix::{Driver, Error, MeshFormat, RunConfig};
use snapfix_core::generators;

const NO_FIXTURE: u8 = 3;

/// Snapping fixture synthesis for polyhedral workpieces.
#[derive(Parser)]
#[command(name = "snapfix", version)]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print vertex, edge, triangle, merged facet and genus counts.
    Check(Common),
    /// Find a fixture with the fewest fingers.
    Synth {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solid: SolidArgs,
        #[arg(long, value_enum)]
        objective: Option<Objective>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        max_fingers: Option<u8>,
    },
    /// Count fixtures at the minimal finger count.
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=4))]
        max_fingers: Option<u8>,
        /// Print every valid fixture as `palm body:tip ...`.
        #[arg(long)]
        list: bool,
    },
    /// Benchmark table over mesh files, a corpus directory or the built-in solids.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Mesh files or `builtin:<name>` inputs.
        inputs: Vec<PathBuf>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Add every built-in canonical solid.
        #[arg(long)]
        builtin: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write a built-in solid to a mesh file.
    Generate {
        /// tetrahedron, cube, octahedron, icosahedron, dodecahedron,
        /// square-pyramid, truncated-cuboctahedron, torus, prism-<n>
        name: String,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long)]
        format: Option<MeshFormat>,
    },
    /// Print the effective configuration as TOML.
    Config(Common),
}

#[derive(Args)]
struct Common {
    /// Mesh file (OFF, OBJ, STL) or `builtin:<name>`.
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long)]
    format: Option<MeshFormat>,
    #[arg(long)]
    angle_tol: Option<f64>,
    #[arg(long)]
    dist_tol: Option<f64>,
    #[arg(long)]
    eps_cover: Option<f64>,
    #[arg(long, env = "SNAPFIX_THREADS")]
    threads: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SolidArgs {
    #[arg(long)]
    alpha_p: Option<f64>,
    #[arg(long)]
    alpha_b: Option<f64>,
    #[arg(long)]
    alpha_t: Option<f64>,
    #[arg(long)]
    clearance: Option<f64>,
    #[arg(long)]
    body_shrink: Option<f64>,
    #[arg(long)]
    tip_width: Option<f64>,
    #[arg(long)]
    max_tip_width: Option<f64>,
    /// Write the fixture solid (format from the extension, binary STL by default).
    #[arg(long)]
    solid: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Objective {
    Fingers,
    Weight,
    Obscuration,
}

impl From<Objective> for ObjectiveName {
    fn from(o: Objective) -> Self {
        match o {
            Objective::Fingers => ObjectiveName::Fingers,
            Objective::Weight => ObjectiveName::Weight,
            Objective::Obscuration => ObjectiveName::Obscuration,
        }
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

impl Common {
    fn apply(self, cfg: &mut RunConfig) {
        if self.input.is_some() {
            cfg.input = self.input;
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        set(&mut cfg.tolerances.angle_tol, self.angle_tol);
        set(&mut cfg.tolerances.dist_tol, self.dist_tol);
        set(&mut cfg.tolerances.eps_cover, self.eps_cover);
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        if self.json.is_some() {
            cfg.json = self.json;
        }
    }
}

impl SolidArgs {
    fn apply(self, cfg: &mut RunConfig) {
        let e = &mut cfg.extrusion;
        set(&mut e.alpha_p, self.alpha_p);
        set(&mut e.alpha_b, self.alpha_b);
        set(&mut e.alpha_t, self.alpha_t);
        set(&mut e.clearance, self.clearance);
        set(&mut e.body_shrink, self.body_shrink);
        set(&mut e.tip_width, self.tip_width);
        if self.max_tip_width.is_some() {
            e.max_tip_width = self.max_tip_width;
        }
        if self.solid.is_some() {
            cfg.solid = self.solid;
        }
    }
}

fn print_mesh(r: &Report) {
    let m = r.mesh;
    println!("verts edges tris merged genus");
    println!("{} {} {} {} {}", m.vertices, m.edges, m.triangles, m.merged, m.genus);
}

fn run(cli: Cli) -> Result<u8, Error> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    match cli.command {
        Command::Check(common) => {
            cfg.command = Some("check".into());
            common.apply(&mut cfg);
            cfg.validate()?;
            print_mesh(&commands::check(&cfg)?);
            Ok(0)
        }
        Command::Synth { common, solid, objective, max_fingers } => {
            cfg.command = Some("synth".into());
            common.apply(&mut cfg);
            solid.apply(&mut cfg);
            if let Some(o) = objective {
                cfg.objective = o.into();
            }
            set(&mut cfg.max_fingers, max_fingers.map(usize::from));
            cfg.validate()?;
            let driver = Driver::new(cfg.threads)?;
            let r = commands::synth(&cfg, &driver)?;
            print_mesh(&r);
            match &r.fixture {
                Some(f) => {
                    let fingers: Vec<String> = f.fingers.iter().map(|g| format!("{}:{}", g.body, g.tip)).collect();
                    println!("min fingers: {}", f.fingers.len());
                    println!("palm {} fingers {}", f.palm, fingers.join(" "));
                    let d = f.serving_direction;
                    println!("serving direction: {:.9} {:.9} {:.9}", d[0], d[1], d[2]);
                    println!("weight proxy: {:.3} mm^3", f.metrics.weight_proxy);
                    println!("obscuration proxy: {:.3} mm^2", f.metrics.obscuration_proxy);
                    if let Some(s) = &r.solid {
                        println!("solid: {} ({} parts, {} triangles, volume {:.3} mm^3)", s.path.as_deref().unwrap_or("-"), s.parts, s.triangles, s.volume);
                    }
                    Ok(0)
                }
                None => {
                    println!("no fixture");
                    Ok(NO_FIXTURE)
                }
            }
        }
        Command::Enumerate { common, max_fingers, list } => {
            cfg.command = Some("enumerate".into());
            common.apply(&mut cfg);
            set(&mut cfg.max_fingers, max_fingers.map(usize::from));
            cfg.validate()?;
            let driver = Driver::new(cfg.threads)?;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let r = commands::enumerate(&cfg, &driver, if list { Some(&mut lock) } else { None })?;
            drop(lock);
            print_mesh(&r);
            match r.min_fingers {
                Some(k) => {
                    println!("min fingers: {k}");
                    println!("fixtures at minimum: {}", r.fixtures_at_min.unwrap_or(0));
                    Ok(0)
                }
                None => {
                    println!("no fixture");
                    Ok(NO_FIXTURE)
                }
            }
        }
        Command::Bench { common, mut inputs, corpus, builtin, csv } => {
            cfg.command = Some("bench".into());
            common.apply(&mut cfg);
            if csv.is_some() {
                cfg.csv = csv;
            }
            cfg.validate()?;
            if let Some(dir) = &corpus {
                inputs.extend(commands::corpus(dir)?);
            }
            if builtin {
                inputs.extend(generators::CANONICAL.iter().map(|n| PathBuf::from(format!("builtin:{n}"))));
            }
            if inputs.is_empty() {
                if let Some(i) = &cfg.input {
                    inputs.push(i.clone());
                }
            }
            let driver = Driver::new(cfg.threads)?;
            let (rows, errors) = commands::bench(&inputs, &cfg, &driver);
            print!("{}", bench_table(&rows));
            for (path, e) in &errors {
                eprintln!("{}: {e}", path.display());
            }
            if let Some(path) = &cfg.csv {
                std::fs::write(path, bench_csv(&rows)).map_err(|e| Error::Io { path: path.clone(), source: e })?;
            }
            if let Some(path) = &cfg.json {
                let s = serde_json::to_string_pretty(&rows)?;
                std::fs::write(path, s + "\n").map_err(|e| Error::Io { path: path.clone(), source: e })?;
            }
            Ok(0)
        }
        Command::Generate { name, output, format } => {
            let p = generators::by_name(&name).ok_or(Error::UnknownBuiltin(name))?;
            snapfix::save_mesh(&output, p.vertices(), p.triangles(), format)?;
            Ok(0)
        }
        Command::Config(common) => {
            common.apply(&mut cfg);
            cfg.validate()?;
            print!("{}", cfg.to_toml()?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => {
            let _ = std::io::stdout().flush();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
