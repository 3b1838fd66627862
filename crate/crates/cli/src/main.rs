mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Rendered;

/// Exact lattice, toric and cohomology checks for Hamiltonian circle
/// actions with four fixed points.
#[derive(Debug, Parser)]
#[command(name = "hamlat", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write an SVG picture to this path (polytope commands only).
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    /// Search depth: word length for find-word, part count for searches.
    #[arg(long, global = true, value_name = "N")]
    pub max_depth: Option<usize>,
    /// Rewrite the golden file for this command instead of printing.
    #[arg(long, global = true)]
    pub bless: bool,
    /// Directory holding golden files.
    #[arg(long, global = true, value_name = "DIR", default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/golden"))]
    pub golden_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every check and report pass, fail or flag for each.
    VerifyAll {
        /// Extra lattice map to check, as JSON `{"name": .., "images": [..]}`.
        #[arg(long, value_name = "PATH")]
        fixture: Vec<PathBuf>,
    },
    /// List the exceptional classes of the blow-up at k points.
    EnumerateExceptional {
        #[arg(long)]
        k: usize,
    },
    /// Shortest word in the reflection group taking one class to another.
    FindWord {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Number of blown-up points; inferred from the classes if omitted.
        #[arg(long)]
        k: Option<usize>,
        /// Longest word to try.
        #[arg(long)]
        max: Option<usize>,
    },
    /// Check a built-in basis change or one read from a file.
    VerifyDictionary {
        #[arg(long, value_enum, required_unless_present = "fixture")]
        name: Option<DictName>,
        #[arg(long, value_name = "PATH", conflicts_with = "name")]
        fixture: Option<PathBuf>,
    },
    /// Resolve the fan of a polygon, by default the cut triangle.
    ResolvePolytope {
        #[arg(long, default_value_t = 4)]
        l: i128,
        #[arg(long, default_value = "1/2")]
        lambda: String,
        /// Arbitrary polygon as `x,y;x,y;..` instead of the cut triangle.
        #[arg(long, conflicts_with_all = ["l", "lambda"])]
        vertices: Option<String>,
    },
    /// Values of the reduced-space classes at a level.
    ReducedClass {
        #[arg(long)]
        l: i128,
        #[arg(long, allow_hyphen_values = true)]
        kappa: String,
    },
    /// Exceptional classes of least area for a reduced symplectic class.
    MinArea {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "1/100")]
        eps: String,
    },
    /// Smith normal form of an integer matrix given as `a,b;c,d`.
    Snf {
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
    /// Decompositions of a class into admissible curve classes.
    Decompose {
        #[arg(long)]
        target: String,
        #[arg(long, value_enum, default_value_t = Profile::Step2)]
        profile: Profile,
        /// Allow an otherwise excluded class.
        #[arg(long, value_name = "CLASS")]
        lift: Vec<String>,
        /// Compare multiplicities up to reordering within each block.
        #[arg(long)]
        up_to_symmetry: bool,
    },
    /// Plane cubic checks.
    Cubic {
        #[command(subcommand)]
        action: CubicAction,
    },
    /// Fixed-point data and isotropy spheres.
    FixedPoints {
        #[arg(long)]
        l: i128,
    },
    /// Horizontal slice of the moment polytope.
    Slice {
        #[arg(long)]
        l: i128,
        #[arg(long)]
        x3: String,
    },
    /// Every computed quantity for one value of l.
    Report {
        #[arg(long)]
        l: i128,
    },
}

#[derive(Debug, Subcommand)]
pub enum CubicAction {
    /// Node, flex, tangency and symmetry checks.
    Verify {
        #[arg(long, value_enum, default_value_t = Preset::Mukai)]
        preset: Preset,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Preset {
    /// The nodal cubic z3(z1^2 - z2^2) - z1^3.
    Mukai,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DictName {
    Hat7,
    Tilde8,
    Primed7,
    Primed8,
    Hat5,
    Hat6,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Profile {
    Base,
    Step2,
    Step3,
}

fn emit(global: &Global, out: Rendered) -> anyhow::Result<ExitCode> {
    if global.bless {
        let name = out
            .golden
            .ok_or_else(|| anyhow::anyhow!("this command has no golden file"))?;
        let path = global.golden_dir.join(&name);
        std::fs::create_dir_all(&global.golden_dir)?;
        std::fs::write(&path, commands::to_pretty(&out.json)?)?;
        eprintln!("wrote {}", path.display());
        return Ok(ExitCode::SUCCESS);
    }
    if let Some(path) = &global.svg {
        let svg = out
            .svg
            .ok_or_else(|| anyhow::anyhow!("this command has no picture; --svg is for resolve-polytope and slice"))?;
        std::fs::write(path, svg)?;
    }
    if global.json {
        print!("{}", commands::to_pretty(&out.json)?);
    } else {
        println!("{}", out.text.trim_end());
    }
    Ok(if out.failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli).and_then(|out| emit(&cli.global, out)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
