use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use memsim_core::cells::{build_cell, default_stimulus_for, exhaustive_stimulus, CellKind, StimulusPlan};
use memsim_core::engine::{run_transient, EngineError, SolverConfig, Waveform};
use memsim_core::measure::{build_report, characterize, simulate_cell, CellReport, RunError, Verdict};
use memsim_core::netlist::{parse, serialize, validate_for_simulation};

use crate::args::{CellAction, Format, Overrides, Settings};

/// A command failure carrying its process exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: unreadable or malformed netlist, unknown cell, bad flag.
    Input(String),
    /// The solver gave up.
    Solver(String),
    /// Simulation succeeded but a cell disagreed with its golden model.
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 1,
            Failure::Solver(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Solver(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Engine(e) => Failure::Solver(e.to_string()),
            RunError::Netlist(d) => Failure::Input(d.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn write_output(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    let result = match out {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            body(&mut w)?;
            w.flush()
        }),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock).and_then(|_| lock.flush())
        }
    };
    match result {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe && out.is_none() => Ok(()),
        other => other.map_err(|e| Failure::Input(format!("cannot write output: {e}"))),
    }
}

fn write_csv(waveform: &Waveform, out: Option<&Path>) -> Result<(), Failure> {
    write_output(out, |w| waveform.write_csv(w))
}

pub fn run(netlist: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let text = fs::read_to_string(netlist).map_err(|e| Failure::Input(format!("{}: {e}", netlist.display())))?;
    let parsed = parse(&text).map_err(|errors| {
        Failure::Input(
            errors
                .iter()
                .map(|e| format!("{}: {e}", netlist.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        )
    })?;
    let circuit = validate_for_simulation(&parsed).map_err(|diags| {
        Failure::Input(
            diags
                .iter()
                .map(|d| format!("{}: {d}", netlist.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        )
    })?;
    let waveform = run_transient(&circuit, &SolverConfig::for_circuit(&circuit)).map_err(|e| match e {
        EngineError::Config(_) | EngineError::MissingTran => Failure::Input(e.to_string()),
        _ => Failure::Solver(e.to_string()),
    })?;
    write_csv(&waveform, out)
}

fn plan_for(kind: CellKind, s: &Settings) -> Result<StimulusPlan, Failure> {
    let plan = if kind.is_gate() {
        exhaustive_stimulus(kind, s.cycles, &s.config)
    } else {
        default_stimulus_for(kind, s.cycles, s.seed, &s.config)
    };
    plan.map_err(|e| Failure::Input(e.to_string()))
}

fn verdict_for(kind: CellKind, s: &Settings) -> Result<Verdict, Failure> {
    let plan = plan_for(kind, s)?;
    log::info!("simulating {kind} for {} cycles", plan.cycles());
    let run = simulate_cell(kind, &s.config, &plan)?;
    run.verify(&s.thresholds).map_err(|e| Failure::Input(e.to_string()))
}

fn describe(kind: CellKind, verdict: &Verdict) -> String {
    if kind.is_gate() {
        let rows = 1usize << kind.inputs().len();
        let table: Vec<String> = verdict.sampled[..rows].iter().map(ToString::to_string).collect();
        format!("truth table {}", table.join(","))
    } else {
        format!("{} cycles, outputs {}", verdict.sampled.len(), verdict.sampled_string())
    }
}

pub fn cell(name: &str, action: CellAction, overrides: &Overrides, out: Option<&Path>) -> Result<(), Failure> {
    let kind: CellKind = name.parse().map_err(|e: memsim_core::cells::CellError| Failure::Input(e.to_string()))?;
    let s = overrides.settings().map_err(Failure::Input)?;
    match action {
        CellAction::Emit => {
            let netlist = build_cell(kind, &s.config).map_err(|e| Failure::Input(e.to_string()))?;
            let text = serialize(&netlist);
            write_output(out, |w| w.write_all(text.as_bytes()))
        }
        CellAction::Run => {
            let plan = plan_for(kind, &s)?;
            let run = simulate_cell(kind, &s.config, &plan)?;
            write_csv(&run.waveform, out)
        }
        CellAction::Verify => {
            let verdict = verdict_for(kind, &s)?;
            if verdict.passed() {
                println!("{kind}: PASS, {}", describe(kind, &verdict));
                Ok(())
            } else {
                let first = verdict.first_mismatch().expect("failed verdict has a mismatch");
                println!("{kind}: FAIL, {}", describe(kind, &verdict));
                Err(Failure::Verification(format!("{kind}: {first}")))
            }
        }
    }
}

pub fn verify_all(overrides: &Overrides) -> Result<(), Failure> {
    let s = overrides.settings().map_err(Failure::Input)?;
    let mut failed = Vec::new();
    for kind in CellKind::ALL {
        match verdict_for(kind, &s) {
            Ok(v) if v.passed() => println!("{kind:<8} PASS"),
            Ok(v) => {
                let first = v.first_mismatch().expect("failed verdict has a mismatch");
                println!("{kind:<8} FAIL  {first}");
                failed.push(kind);
            }
            Err(Failure::Solver(m)) => {
                println!("{kind:<8} FAIL  solver: {m}");
                failed.push(kind);
            }
            Err(other) => return Err(other),
        }
    }
    let total = CellKind::ALL.len();
    println!("{}/{total} cells pass", total - failed.len());
    if failed.is_empty() {
        Ok(())
    } else {
        let names: Vec<&str> = failed.iter().map(|k| k.name()).collect();
        Err(Failure::Verification(format!("failing cells: {}", names.join(", "))))
    }
}

pub fn report(overrides: &Overrides, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    let s = overrides.settings().map_err(Failure::Input)?;
    let reports = CellKind::SEQUENTIAL
        .into_iter()
        .map(|kind| {
            let plan = plan_for(kind, &s)?;
            log::info!("characterizing {kind}");
            Ok(characterize(kind, &s.config, &plan, &s.thresholds)?)
        })
        .collect::<Result<Vec<CellReport>, Failure>>()?;
    let mut text = build_report(&reports, format.into());
    if !text.ends_with('\n') {
        text.push('\n');
    }
    write_output(out, |w| w.write_all(text.as_bytes()))
}
