//! `cayleytones`: command-line access to musical systems over `Z_n`.

use std::fmt::Write as _;
use std::io::{IsTerminal, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use cayleytones::audio::{self, RenderPlan};
use cayleytones::counterpoint::{
    enumerate_weak_witnesses, extend_to_partitions, maximal_consonant_extension_limited,
    minimal_oriented_refinement, strong_search, SearchReport,
};
use cayleytones::{AffineMap, CayleyGraph, Dichotomy, GeneratorSet, KPrime, MusicalSystem, Quality};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "cayleytones", version, about = "Chords, scales, circles of fifths and counterpoint over Z_n = <p, q>")]
struct Cli {
    #[command(flatten)]
    system: SystemArgs,

    /// Emit JSON on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Human-readable layout (indented JSON together with --json).
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SystemArgs {
    /// Larger generator (defaults to 4 with -q 3).
    #[arg(short, long, global = true)]
    p: Option<u32>,

    /// Smaller generator.
    #[arg(short, long, global = true)]
    q: Option<u32>,

    /// Number of notes; only accepted together with -p and -q.
    #[arg(short, long, global = true)]
    n: Option<u32>,

    /// Octave ratio.
    #[arg(short, long, global = true, default_value_t = 2.0)]
    s: f64,

    /// Frequency of note 0 in Hz.
    #[arg(long, global = true, default_value_t = 440.0)]
    f0: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the system parameters.
    Validate,
    /// Export the Cayley graph in DOT format.
    Graph {
        /// Drop arrow directions and symmetrize the generators.
        #[arg(long)]
        unoriented: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graph distance between two notes.
    Distance {
        a: u32,
        b: u32,
        /// Shortest directed walk with steps p and q.
        #[arg(long)]
        oriented: bool,
    },
    /// Named chords on a root.
    Chords {
        #[arg(long, default_value_t = 0)]
        root: u32,
        #[arg(long)]
        quality: Option<QualityArg>,
    },
    /// Major or minor scale.
    Scale {
        #[arg(long, default_value_t = 0)]
        root: u32,
        #[arg(long, default_value = "major")]
        quality: QualityArg,
    },
    /// Generalized circle of fifths.
    Circle,
    /// Consonant/dissonant dichotomy searches.
    Counterpoint {
        #[command(subcommand)]
        action: CounterpointAction,
    },
    /// Write a JSON render plan to stdout.
    Plan {
        #[arg(value_enum)]
        kind: PlanKind,
        #[arg(long, default_value_t = 0)]
        root: u32,
        #[arg(long, default_value = "major")]
        quality: QualityArg,
        /// Seconds per event.
        #[arg(long, default_value_t = 0.5)]
        duration: f64,
        /// Lower voice for two-voice plans.
        #[arg(long, value_delimiter = ',')]
        cantus: Vec<u32>,
        /// Upper voice for two-voice plans.
        #[arg(long, value_delimiter = ',')]
        counter: Vec<u32>,
    },
    /// Render a plan file to a 16-bit mono WAV.
    Render {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum CounterpointAction {
    /// Exhaustive scan over affine maps.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").args(["weak", "strong", "extend", "maximal"])))]
struct SearchArgs {
    /// Weak witnesses for K' = {0} ∪ S (default).
    #[arg(long)]
    weak: bool,
    /// Strong witnesses for a given consonant set.
    #[arg(long)]
    strong: bool,
    /// Extend K' to full partitions.
    #[arg(long)]
    extend: bool,
    /// Maximal consonant sets for one weak witness.
    #[arg(long)]
    maximal: bool,

    /// Consonant set for --strong; the Fux set is used for Z_12 = <4, 3>.
    #[arg(long, value_delimiter = ',')]
    consonant: Vec<u32>,
    /// Generators of the unoriented graph; symmetrized {p, q} by default.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    generators: Vec<i64>,
    /// Multiplier of the witness for --maximal.
    #[arg(long)]
    h: Option<i64>,
    /// Offset of the witness for --maximal.
    #[arg(long)]
    w: Option<i64>,
    /// Stop --maximal after this many sets.
    #[arg(long)]
    limit: Option<usize>,
    /// With --extend, pick the partition of least oriented cost.
    #[arg(long)]
    refine: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QualityArg {
    Major,
    Minor,
}

impl From<QualityArg> for Quality {
    fn from(q: QualityArg) -> Self {
        match q {
            QualityArg::Major => Quality::Major,
            QualityArg::Minor => Quality::Minor,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlanKind {
    Scale,
    Chord,
    Circle,
    TwoVoice,
}

enum Failure {
    Invalid(String),
    Internal(String),
}

impl From<cayleytones::Error> for Failure {
    fn from(e: cayleytones::Error) -> Self {
        if e.is_validation() {
            Failure::Invalid(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

struct Out {
    json: bool,
    pretty: bool,
}

impl Out {
    fn json_string<T: Serialize>(&self, value: &T) -> CliResult<String> {
        let s = if self.pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        };
        s.map_err(|e| Failure::Internal(e.to_string()))
    }

    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> CliResult<String> {
        if self.json {
            self.json_string(value)
        } else {
            Ok(text())
        }
    }

    fn table(&self) -> bool {
        self.pretty || std::io::stdout().is_terminal()
    }
}

fn system(args: &SystemArgs) -> CliResult<MusicalSystem> {
    match (args.p, args.q, args.n) {
        (Some(p), Some(q), Some(n)) => Ok(MusicalSystem::validate(n, p, q, args.s, args.f0)?),
        (Some(p), Some(q), None) => Ok(MusicalSystem::from_factors(p, q, args.s, args.f0)?),
        (None, None, Some(n)) => Err(Failure::Invalid(format!(
            "-n {n} alone is ambiguous; give the generators instead, e.g. -p 4 -q 3 for n = 12"
        ))),
        (None, None, None) => Ok(MusicalSystem::from_factors(4, 3, args.s, args.f0)?),
        _ => Err(Failure::Invalid("give both -p and -q".into())),
    }
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn sorted_reports() -> bool {
    std::env::var("CAYLEYTONES_SEED_SORT").map_or(true, |v| v != "0")
}

#[derive(Serialize)]
struct DistanceReport {
    from: u32,
    to: u32,
    oriented: bool,
    distance: u32,
}

#[derive(Serialize)]
struct RenderSummary {
    path: String,
    samples: usize,
    sample_rate: u32,
    duration: f64,
}

fn search(sys: &MusicalSystem, args: &SearchArgs) -> CliResult<SearchReport> {
    let ring = sys.ring();
    let generators = if args.generators.is_empty() {
        sys.symmetric_generators()
    } else {
        GeneratorSet::new(ring, args.generators.iter().copied())?
    };
    let graph = CayleyGraph::unoriented(generators.clone())?;
    let mut report = if args.strong {
        let dichotomy = if !args.consonant.is_empty() {
            Dichotomy::from_consonant(ring, args.consonant.iter().copied())?
        } else if sys.n() == 12 && sys.p() == 4 {
            Dichotomy::fux()
        } else {
            return Err(Failure::Invalid("--strong needs --consonant outside Z_12 = <4, 3>".into()));
        };
        strong_search(&dichotomy, &graph)?
    } else if args.extend {
        let kprime = KPrime::new(generators)?;
        let mut report = extend_to_partitions(&kprime, &graph)?;
        if args.refine {
            let oriented = sys.oriented_graph()?;
            let note = match minimal_oriented_refinement(&report.partitions, &kprime, &oriented) {
                Ok(d) => format!("oriented refinement: K = {:?}", d.consonant()),
                Err(e) => format!("oriented refinement: {e}"),
            };
            report.notes.push(note);
        }
        report
    } else if args.maximal {
        let kprime = KPrime::new(generators)?;
        let t = match (args.h, args.w) {
            (Some(h), Some(w)) => AffineMap::new(ring, h, w)?,
            (None, None) => {
                let weak = enumerate_weak_witnesses(&kprime);
                let first = weak
                    .witnesses
                    .first()
                    .ok_or_else(|| Failure::Invalid("no weak witness exists for this generating set".into()))?;
                AffineMap::new(ring, i64::from(first.h), i64::from(first.w))?
            }
            _ => return Err(Failure::Invalid("--maximal needs both --h and --w".into())),
        };
        maximal_consonant_extension_limited(&kprime, t, &graph, args.limit)?
    } else {
        enumerate_weak_witnesses(&KPrime::new(generators)?)
    };
    if sorted_reports() {
        report.sort();
    }
    Ok(report)
}

fn run(cli: &Cli) -> CliResult<String> {
    let out = Out {
        json: cli.json,
        pretty: cli.pretty,
    };
    if let Command::Render { plan, out: path } = &cli.command {
        let text = std::fs::read_to_string(plan)
            .map_err(|e| Failure::Invalid(format!("cannot read plan {}: {e}", plan.display())))?;
        let plan: RenderPlan =
            serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("invalid plan: {e}")))?;
        let buffer = audio::render(&plan)?;
        audio::write_wav(&buffer, path)?;
        let summary = RenderSummary {
            path: path.display().to_string(),
            samples: buffer.len(),
            sample_rate: buffer.sample_rate(),
            duration: buffer.duration(),
        };
        return out.emit(&summary, || {
            format!("wrote {} samples ({:.3} s) to {}", summary.samples, summary.duration, summary.path)
        });
    }

    let sys = system(&cli.system)?;
    match &cli.command {
        Command::Validate => out.emit(&sys, || {
            if out.table() {
                format!(
                    "n   {}\np   {}\nq   {}\ns   {}\nf0  {} Hz",
                    sys.n(),
                    sys.p(),
                    sys.q(),
                    sys.octave_ratio(),
                    sys.base_frequency()
                )
            } else {
                format!("Z_{} = <{}, {}> s={} f0={}", sys.n(), sys.p(), sys.q(), sys.octave_ratio(), sys.base_frequency())
            }
        }),
        Command::Graph { unoriented, out: path } => {
            let graph = if *unoriented {
                sys.unoriented_graph()?
            } else {
                sys.oriented_graph()?
            };
            let dot = graph.export_dot();
            match path {
                Some(path) => {
                    std::fs::write(path, &dot)?;
                    Ok(String::new())
                }
                None => Ok(dot.trim_end().to_string()),
            }
        }
        Command::Distance { a, b, oriented } => {
            let distance = if *oriented {
                sys.oriented_graph()?.oriented_path_length(*a, *b)?
            } else {
                sys.unoriented_graph()?.distance(*a, *b)?
            };
            let report = DistanceReport {
                from: *a,
                to: *b,
                oriented: *oriented,
                distance,
            };
            out.emit(&report, || distance.to_string())
        }
        Command::Chords { root, quality } => {
            let chords = sys.named_chords(*root, quality.map(Quality::from))?;
            out.emit(&chords, || {
                let width = chords.iter().map(|c| c.name.len()).max().unwrap_or(0);
                let mut s = String::new();
                for c in &chords {
                    let _ = writeln!(s, "{:width$}  {}", c.name, join(&c.chord.notes));
                }
                s.trim_end().to_string()
            })
        }
        Command::Scale { root, quality } => {
            if *root >= sys.n() {
                return Err(cayleytones::Error::ResidueOutOfRange { residue: *root, n: sys.n() }.into());
            }
            let scale = sys.scale(*root, (*quality).into());
            out.emit(&scale, || {
                if out.table() {
                    format!("notes  {}\nsteps  {}", join(&scale.notes), join(&scale.steps))
                } else {
                    join(&scale.notes)
                }
            })
        }
        Command::Circle => {
            let circle = sys.circle_of_fifths();
            out.emit(&circle, || join(&circle.sequence[..sys.n() as usize]))
        }
        Command::Counterpoint {
            action: CounterpointAction::Search(args),
        } => out.json_string(&search(&sys, args)?),
        Command::Plan {
            kind,
            root,
            quality,
            duration,
            cantus,
            counter,
        } => {
            if *root >= sys.n() {
                return Err(cayleytones::Error::ResidueOutOfRange { residue: *root, n: sys.n() }.into());
            }
            let plan = match kind {
                PlanKind::Scale => RenderPlan::scale(&sys, *root, (*quality).into(), *duration),
                PlanKind::Chord => RenderPlan::chord(&sys, *root, (*quality).into(), *duration),
                PlanKind::Circle => RenderPlan::circle(&sys, *duration),
                PlanKind::TwoVoice => {
                    if cantus.is_empty() || cantus.len() != counter.len() {
                        return Err(Failure::Invalid("--cantus and --counter need equal, non-empty lengths".into()));
                    }
                    RenderPlan::two_voice(&sys, cantus, counter, *duration)
                }
            };
            out.json_string(&plan)
        }
        Command::Render { .. } => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if !text.is_empty() && writeln!(stdout, "{text}").is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
