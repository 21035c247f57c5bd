//! `quditc`: transpile OpenQASM 2.0 into ion qudit circuits, unmap samples,
//! verify against the simulator and report gate counts.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use quditc_core::benchmarks;
use quditc_core::iqc;
use quditc_core::mapping::load_mapping;
use quditc_core::pipeline::{self, Options, Regime, Transpiled};
use quditc_core::sim::DEFAULT_CAP;
use quditc_core::stats::{qudit_stats, ErrorRates};
use quditc_core::unmap::{self, SampleTable, UnmapMode};
use quditc_core::{Error, QuditParams, Runtime};

#[derive(Parser)]
#[command(name = "quditc", version, about = "OpenQASM 2.0 to trapped-ion qudit transpiler")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transpile QASM files into one `.iqc.json` file plus a `.map.json` sidecar.
    Transpile(TranspileArgs),
    /// Convert qudit samples into classical bit-string counts.
    Unmap(UnmapArgs),
    /// Check transpiled circuits against the qubit reference.
    Verify(VerifyArgs),
    /// Gate counts and error estimates per regime.
    Stats(StatsArgs),
    /// Write the benchmark QASM files and their ququart mappings.
    Generate(GenerateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Qubit,
    Qutrit,
    Ququart,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Qubit => Regime::Qubit,
            RegimeArg::Qutrit => Regime::Qutrit,
            RegimeArg::Ququart => Regime::Ququart,
        }
    }
}

#[derive(Args, Clone)]
struct PipelineArgs {
    /// Target regime: (d, b) = (2, 1), (3, 1) or (4, 2).
    #[arg(long, value_enum, default_value = "qutrit")]
    regime: RegimeArg,
    /// Levels per qudit, overriding the regime.
    #[arg(long)]
    levels: Option<usize>,
    /// Qubits per qudit, overriding the regime.
    #[arg(long = "qubits-per-qudit")]
    qubits_per_qudit: Option<usize>,
    /// Mapping file `{"qubits": [{"qudit": q, "slot": s}, ...]}`.
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// Run the rewrite rules and the qudit optimizer.
    #[arg(short = 'O', long = "optimize", overrides_with = "no_optimize")]
    optimize: bool,
    #[arg(long = "no-optimize")]
    no_optimize: bool,
    /// Drop phases after the last pulse on each qudit.
    #[arg(long = "strip-trailing-phases")]
    strip_trailing_phases: bool,
}

impl PipelineArgs {
    fn params(&self) -> anyhow::Result<QuditParams> {
        let base = Regime::from(self.regime).params();
        Ok(QuditParams::new(
            self.levels.unwrap_or(base.d),
            self.qubits_per_qudit.unwrap_or(base.b),
        )?)
    }

    fn options(&self) -> anyhow::Result<Options> {
        let params = self.params()?;
        let mut opts = Options::new(params);
        opts.optimize = self.optimize && !self.no_optimize;
        opts.strip_trailing_phases = self.strip_trailing_phases;
        if let Some(path) = &self.mapping {
            opts.mapping = Some(load_mapping(path, params.b).with_context(|| format!("mapping {}", path.display()))?);
        }
        Ok(opts)
    }
}

#[derive(Args)]
struct TranspileArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Qubit runtime (`emulator`, `ion`, `ion-ir` or a runtime directory);
    /// writes transpiled qubit QASM instead of a qudit circuit.
    #[arg(long)]
    runtime: Option<String>,
    #[arg(long, default_value_t = 100)]
    repetitions: u64,
    /// Output file; defaults to the first input with the extension replaced.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct UnmapArgs {
    /// Samples JSON `[{"state": "012", "count": 5}, ...]`.
    samples: PathBuf,
    /// Sidecar written by `transpile`.
    #[arg(long)]
    sidecar: PathBuf,
    /// Index of the circuit within the transpiled file.
    #[arg(long, default_value_t = 0)]
    circuit: usize,
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Nonstrict,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Check this `.iqc.json` (with its sidecar) instead of transpiling.
    #[arg(long)]
    iqc: Option<PathBuf>,
    /// Largest matrix dimension the simulator accepts.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Report every regime side by side instead of `--regime`.
    #[arg(long)]
    all_regimes: bool,
    /// Error rates `e1b,e2b,e1d,e2d` (qubit and qudit devices).
    #[arg(long)]
    rates: Option<String>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Output directory.
    #[arg(default_value = ".")]
    dir: PathBuf,
}

/// Exit statuses.
const USER_ERROR: u8 = 1;
const VERIFY_FAILED: u8 = 2;
const INTERNAL: u8 = 3;

struct Failure(u8, anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(USER_ERROR, e.into())
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn display_name(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

/// `a/b.iqc.json` → `a/b.map.json`.
fn sidecar_path(iqc_path: &Path) -> PathBuf {
    let name = iqc_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let stem = name
        .strip_suffix(".iqc.json")
        .or_else(|| name.strip_suffix(".json"))
        .unwrap_or(&name);
    iqc_path.with_file_name(format!("{stem}.map.json"))
}

fn run_pipeline(path: &Path, opts: &Options) -> anyhow::Result<Transpiled> {
    Ok(pipeline::transpile(&read(path)?, &display_name(path), opts)?)
}

fn transpile(args: TranspileArgs) -> CmdResult {
    if let Some(name) = &args.runtime {
        let runtime = Runtime::load(name)?;
        let optimize = args.pipeline.optimize && !args.pipeline.no_optimize;
        if args.output.is_some() && args.inputs.len() > 1 {
            return Err(anyhow::anyhow!("--output with --runtime takes a single input").into());
        }
        for input in &args.inputs {
            let (c, _) = pipeline::transpile_qubit(&read(input)?, &display_name(input), &runtime, optimize)?;
            let out = args
                .output
                .clone()
                .unwrap_or_else(|| input.with_extension(format!("{}.qasm", runtime.name)));
            write(&out, &c.to_qasm())?;
        }
        return Ok(());
    }
    let opts = args.pipeline.options()?;
    let mut circuits = Vec::new();
    let mut sidecars = Vec::new();
    for input in &args.inputs {
        let t = run_pipeline(input, &opts)?;
        circuits.push((t.circuit.clone(), args.repetitions));
        sidecars.push(t.sidecar());
    }
    let out = args.output.clone().unwrap_or_else(|| {
        let first = &args.inputs[0];
        first.with_file_name(format!(
            "{}.iqc.json",
            first.file_stem().unwrap_or_default().to_string_lossy()
        ))
    });
    write(&out, &iqc::emit(&circuits)?)?;
    write(&sidecar_path(&out), &unmap::sidecar_to_json(&sidecars))?;
    Ok(())
}

fn unmap_cmd(args: UnmapArgs) -> CmdResult {
    let samples = SampleTable::from_json(&read(&args.samples)?)?;
    let sidecars = unmap::sidecar_from_json(&read(&args.sidecar)?)?;
    let Some(side) = sidecars.get(args.circuit) else {
        return Err(anyhow::anyhow!(
            "sidecar has {} circuits, asked for index {}",
            sidecars.len(),
            args.circuit
        )
        .into());
    };
    let mode = match args.mode {
        ModeArg::Strict => UnmapMode::Strict,
        ModeArg::Nonstrict => UnmapMode::Nonstrict,
    };
    let bits = unmap::unmap(&samples, &side.mapping, side.params, &side.measures, mode)?;
    match &args.output {
        Some(path) => write(path, &bits.to_json())?,
        None => print!("{}", bits.to_json()),
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> CmdResult {
    let opts = args.pipeline.options()?;
    let loaded = match &args.iqc {
        Some(path) => {
            let circuits = iqc::parse_iqc(&read(path)?)?;
            let sidecars = unmap::sidecar_from_json(&read(&sidecar_path(path))?)?;
            if circuits.len() != args.inputs.len() || sidecars.len() != args.inputs.len() {
                return Err(anyhow::anyhow!(
                    "{} holds {} circuits for {} inputs",
                    path.display(),
                    circuits.len(),
                    args.inputs.len()
                )
                .into());
            }
            Some((circuits, sidecars))
        }
        None => None,
    };
    let mut failed = false;
    for (k, input) in args.inputs.iter().enumerate() {
        let t = run_pipeline(input, &opts)?;
        let (mut circuit, mapping) = match &loaded {
            Some((cs, ss)) => (cs[k].0.clone(), ss[k].mapping.clone()),
            None => (t.circuit.clone(), t.mapping.clone()),
        };
        circuit.qudits = circuit.qudits.max(mapping.qudits);
        let verdict = match pipeline::verify_circuit(&circuit, &t.reference, &mapping, args.cap) {
            Ok(v) => v,
            Err(Error::DimensionCap { dim, cap }) => {
                println!(
                    "{}: not verifiable at desk scale (dimension {dim} > cap {cap})",
                    input.display()
                );
                return Err(Failure(USER_ERROR, anyhow::anyhow!("dimension cap exceeded")));
            }
            Err(e) => return Err(e.into()),
        };
        let word = |ok: bool| if ok { "PASS" } else { "FAIL" };
        println!(
            "{}: {} GLOBAL_PHASE {} (max deviation {:.3e}) DIAGONAL_PHASE {} (max deviation {:.3e})",
            input.display(),
            word(verdict.passed(false)),
            word(verdict.global.equivalent),
            verdict.global.max_deviation,
            word(verdict.diagonal.equivalent),
            verdict.diagonal.max_deviation,
        );
        failed |= !verdict.passed(false);
    }
    if failed {
        return Err(Failure(VERIFY_FAILED, anyhow::anyhow!("verification failed")));
    }
    Ok(())
}

fn stats(args: StatsArgs) -> CmdResult {
    let rates = args.rates.as_deref().map(ErrorRates::parse).transpose()?;
    let regimes: Vec<Option<Regime>> = if args.all_regimes {
        Regime::ALL.into_iter().map(Some).collect()
    } else {
        vec![None]
    };
    println!(
        "{:<24} {:>8} {:>6} {:>6} {:>6}{}",
        "circuit",
        "regime",
        "Rz/Ph",
        "R",
        "XX",
        if rates.is_some() { "      E" } else { "" }
    );
    for input in &args.inputs {
        for regime in &regimes {
            let mut pipeline_args = args.pipeline.clone();
            if let Some(r) = regime {
                pipeline_args.regime = match r {
                    Regime::Qubit => RegimeArg::Qubit,
                    Regime::Qutrit => RegimeArg::Qutrit,
                    Regime::Ququart => RegimeArg::Ququart,
                };
                pipeline_args.levels = None;
                pipeline_args.qubits_per_qudit = None;
                if pipeline_args.mapping.is_some() && *r != Regime::Ququart {
                    pipeline_args.mapping = None;
                }
            }
            let opts = pipeline_args.options()?;
            let t = run_pipeline(input, &opts)?;
            let s = qudit_stats(&t.circuit, rates.as_ref());
            let label = format!("d={},b={}", opts.params.d, opts.params.b);
            let label = regime.map(|r| r.name().to_string()).unwrap_or(label);
            let err = s.error.map(|e| format!(" {e:>10.6}")).unwrap_or_default();
            println!(
                "{:<24} {:>8} {:>6} {:>6} {:>6}{err}",
                input.display(),
                label,
                s.counts.ph,
                s.counts.r,
                s.counts.xx
            );
        }
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> CmdResult {
    std::fs::create_dir_all(&args.dir)?;
    for b in benchmarks::suite() {
        write(&args.dir.join(b.file_name()), &b.qasm)?;
        if let Some(m) = b.mapping(Regime::Ququart) {
            write(
                &args.dir.join(format!("{}.ququart.map.json", b.name)),
                &mapping_json(&m),
            )?;
        }
    }
    Ok(())
}

fn mapping_json(m: &quditc_core::Mapping) -> String {
    let slots: Vec<String> = m
        .slots
        .iter()
        .map(|s| format!("{{\"qudit\": {}, \"slot\": {}}}", s.qudit, s.slot))
        .collect();
    format!("{{\"qubits\": [{}]}}\n", slots.join(", "))
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Transpile(a) => transpile(a),
        Command::Unmap(a) => unmap_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Stats(a) => stats(a),
        Command::Generate(a) => generate(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| dispatch(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failure(code, e))) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
        Err(_) => ExitCode::from(INTERNAL),
    }
}
