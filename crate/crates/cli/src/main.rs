//! `ellhiggs`: command-line front end.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ellhiggs::hitchin::{self, FiberDescription, HitchinBaseReport};
use ellhiggs::involution::{self, InvolutionReport};
use ellhiggs::linalg::Q;
use ellhiggs::moduli::{moduli_report, Analysis, ModuliReport};
use ellhiggs::oracle::{self, OracleReport};
use ellhiggs::realform::{resolve, LatticeChoice, Limits, RealFormSpec};
use ellhiggs::rootdata::DEFAULT_GROUP_CAP;
use ellhiggs::Error;

#[derive(Parser)]
#[command(
    name = "ellhiggs",
    version,
    about = "Moduli of G-Higgs bundles over an elliptic curve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan classes, components and dimension of the moduli space
    Report {
        /// preset such as "su(2,1)", a JSON object, or a path to a JSON file
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Hitchin fiber over a point of the base
    Fiber {
        spec: String,
        /// comma-separated rational coordinates on the a_D basis, e.g. "1/2,-3"
        #[arg(
            long,
            allow_hyphen_values = true,
            conflicts_with = "generic",
            required_unless_present = "generic"
        )]
        z: Option<String>,
        /// use a seeded generic point instead of --z
        #[arg(long)]
        generic: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Lattice involution, involutive Weyl elements and the etale index table
    Involution {
        spec: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the combinatorics with explicit matrix computations
    OracleCheck {
        spec: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value_t = LatticeArg::Sc)]
    lattice: LatticeArg,
    #[arg(long, default_value_t = DEFAULT_GROUP_CAP)]
    max_weyl_order: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// include wall-clock timings (makes output non-reproducible)
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    Sc,
    Ad,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Serialize)]
struct Input {
    spec: String,
    lattice: LatticeChoice,
    max_weyl_order: usize,
    seed: u64,
}

#[derive(Serialize)]
struct Envelope<P: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    input: Input,
    timings: Option<BTreeMap<&'static str, f64>>,
    warnings: Vec<String>,
    payload: P,
}

#[derive(Serialize)]
struct ReportPayload {
    moduli: ModuliReport,
    hitchin_base: HitchinBaseReport,
}

struct Timer {
    on: bool,
    start: Instant,
    marks: BTreeMap<&'static str, f64>,
}

impl Timer {
    fn new(on: bool) -> Self {
        Timer {
            on,
            start: Instant::now(),
            marks: BTreeMap::new(),
        }
    }

    fn mark(&mut self, stage: &'static str) {
        let ms = self.start.elapsed().as_secs_f64() * 1000.0;
        self.marks.insert(stage, ms);
        self.start = Instant::now();
    }

    fn finish(self) -> Option<BTreeMap<&'static str, f64>> {
        self.on.then_some(self.marks)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) => 2,
        Error::CapExceeded { .. } => 3,
        Error::InvariantViolation(_) => 4,
        Error::OracleMismatch(_) => 5,
    }
}

/// Reads the real-form spec from a file when the argument names one.
fn load_spec(arg: &str) -> Result<String, Error> {
    let p = Path::new(arg);
    if !arg.trim_start().starts_with('{') && p.is_file() {
        std::fs::read_to_string(p).map_err(|e| Error::invalid(format!("cannot read {arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_z(s: &str) -> Result<Vec<Q>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Q>()
                .map_err(|_| Error::invalid(format!("bad rational '{}' in --z", t.trim())))
        })
        .collect()
}

fn analysis(spec: &str, c: &Common, timer: &mut Timer) -> Result<Analysis, Error> {
    let lattice = match c.lattice {
        LatticeArg::Sc => LatticeChoice::SimplyConnected,
        LatticeArg::Ad => LatticeChoice::Adjoint,
    };
    let limits = Limits {
        max_group_order: c.max_weyl_order,
    };
    let rf = resolve(&RealFormSpec::parse(&load_spec(spec)?, lattice)?, limits)?;
    timer.mark("resolve");
    let an = Analysis::new(rf, limits)?;
    timer.mark("cartan_classes");
    Ok(an)
}

fn input(spec: &str, c: &Common, an: &Analysis) -> Input {
    Input {
        spec: spec.to_string(),
        lattice: an.rf.lattice_choice(),
        max_weyl_order: c.max_weyl_order,
        seed: c.seed,
    }
}

fn emit<P: Serialize>(
    env: &Envelope<P>,
    format: Format,
    text: impl FnOnce() -> String,
) -> Result<(), Error> {
    match format {
        Format::Json => {
            let s = serde_json::to_string_pretty(env)
                .map_err(|e| Error::invariant(format!("serialization failed: {e}")))?;
            println!("{s}");
        }
        Format::Text => {
            println!("{} {} ({})", env.command, env.input.spec, env.tool);
            print!("{}", text());
            for w in &env.warnings {
                println!("warning: {w}");
            }
            if let Some(t) = &env.timings {
                for (k, v) in t {
                    println!("time {k}: {v:.1} ms");
                }
            }
        }
    }
    Ok(())
}

fn report_text(p: &ReportPayload) -> String {
    let m = &p.moduli;
    let mut s = format!(
        "real form {} of type {}, rank {}, |W| = {}\nadmissible systems: {}, Cartan classes: {}\n",
        m.real_form.label,
        m.real_form.cartan_type,
        m.real_form.rank,
        m.real_form.weyl_order,
        m.upsilon_size,
        m.cartan_class_count
    );
    for c in &m.components {
        s += &format!("  [{}] {}\n", c.system.join(" "), c.description);
    }
    s += &format!("moduli dimension {}\n", m.moduli_dim);
    s += &format!(
        "hitchin base dim {}, small Weyl group orders {} / {}\n",
        p.hitchin_base.base_dim,
        p.hitchin_base.reflection_group_order,
        p.hitchin_base.normalizer_group_order
    );
    s
}

fn fiber_text(f: &FiberDescription) -> String {
    let z: Vec<String> = f.z.iter().map(|x| x.to_string()).collect();
    format!(
        "z = ({}), generic: {}\nminimal system [{}], stabilizer order {}\nfiber: {}\n",
        z.join(", "),
        f.is_generic,
        f.minimal_system.join(" "),
        f.stabilizer_order,
        f.quotient_summary
    )
}

fn involution_text(r: &InvolutionReport) -> String {
    let mut s = format!(
        "sigma: +1 dim {}, -1 dim {}; {} of {} Weyl elements are involutive\ndimension check: {}\n",
        r.sigma_plus_dim, r.sigma_minus_dim, r.involutive_count, r.weyl_order, r.dimension_check
    );
    for e in &r.etale {
        s += &format!(
            "  [{}] index {} ({} / {})\n",
            e.system.join(" "),
            e.index,
            e.big_image_order,
            e.small_image_order
        );
    }
    s
}

fn oracle_text(r: &OracleReport) -> String {
    format!(
        "{}\nreal rank {} (combinatorial {}), {} Cayley checks\n",
        r.summary(),
        r.real_rank_oracle,
        r.real_rank_combinatorial,
        r.cayley.len()
    )
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Report { spec, common } => {
            let mut timer = Timer::new(common.timings);
            let an = analysis(&spec, &common, &mut timer)?;
            let moduli = moduli_report(&an)?;
            timer.mark("components");
            let rs = hitchin::hitchin_base_unchecked(&an)?;
            let hitchin_base = HitchinBaseReport::of(&an, &rs);
            timer.mark("hitchin_base");
            let mut warnings = moduli.warnings.clone();
            if !hitchin_base.routes_agree {
                warnings.push(format!(
                    "small Weyl group routes differ on a_D (orders {} and {})",
                    hitchin_base.reflection_group_order, hitchin_base.normalizer_group_order
                ));
            }
            let payload = ReportPayload {
                moduli,
                hitchin_base,
            };
            let env = Envelope {
                tool: "ellhiggs",
                version: env!("CARGO_PKG_VERSION"),
                command: "report",
                input: input(&spec, &common, &an),
                timings: timer.finish(),
                warnings,
                payload,
            };
            emit(&env, common.format, || report_text(&env.payload))
        }
        Command::Fiber {
            spec,
            z,
            generic,
            common,
        } => {
            let mut timer = Timer::new(common.timings);
            let an = analysis(&spec, &common, &mut timer)?;
            let fiber = if generic {
                hitchin::generic_fiber(&an, common.seed)?
            } else {
                hitchin::fiber_over(&an, &parse_z(z.as_deref().unwrap_or(""))?)?
            };
            timer.mark("fiber");
            let mut warnings = an.rf.warnings().to_vec();
            warnings.extend(fiber.warnings.iter().cloned());
            let env = Envelope {
                tool: "ellhiggs",
                version: env!("CARGO_PKG_VERSION"),
                command: "fiber",
                input: input(&spec, &common, &an),
                timings: timer.finish(),
                warnings,
                payload: fiber,
            };
            emit(&env, common.format, || fiber_text(&env.payload))
        }
        Command::Involution { spec, common } => {
            let mut timer = Timer::new(common.timings);
            let an = analysis(&spec, &common, &mut timer)?;
            let rep = involution::involution_report(&an)?;
            timer.mark("involution");
            let env = Envelope {
                tool: "ellhiggs",
                version: env!("CARGO_PKG_VERSION"),
                command: "involution",
                input: input(&spec, &common, &an),
                timings: timer.finish(),
                warnings: an.rf.warnings().to_vec(),
                payload: rep,
            };
            emit(&env, common.format, || involution_text(&env.payload))
        }
        Command::OracleCheck { spec, common } => {
            let mut timer = Timer::new(common.timings);
            let an = analysis(&spec, &common, &mut timer)?;
            let rep = oracle::run(&an)?;
            timer.mark("oracle");
            let agrees = rep.agrees;
            let summary = rep.summary();
            let env = Envelope {
                tool: "ellhiggs",
                version: env!("CARGO_PKG_VERSION"),
                command: "oracle-check",
                input: input(&spec, &common, &an),
                timings: timer.finish(),
                warnings: an.rf.warnings().to_vec(),
                payload: rep,
            };
            emit(&env, common.format, || oracle_text(&env.payload))?;
            if agrees {
                Ok(())
            } else {
                Err(Error::OracleMismatch(summary))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
