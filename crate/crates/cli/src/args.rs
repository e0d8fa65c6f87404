use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use memsim_core::cells::CellConfig;
use memsim_core::measure::{ReportFormat, ThresholdConfig};

#[derive(Debug, Parser)]
#[command(name = "memsim", version, about = "Hybrid memristor-CMOS logic simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a netlist file and write its waveform as CSV.
    Run {
        netlist: PathBuf,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit, simulate or verify one cell.
    Cell {
        /// Cell name, e.g. `xor` or `jk_ff`.
        name: String,
        action: CellAction,
        #[command(flatten)]
        overrides: Overrides,
        /// CSV destination for `run`; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify all eleven cells against their golden models.
    Verify {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Characterize the sequential cells and compare with published figures.
    Report {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        /// Report destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CellAction {
    Emit,
    Run,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Markdown,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Markdown => ReportFormat::Markdown,
        }
    }
}

/// Physical and stimulus settings shared by the cell commands.
#[derive(Debug, Clone, Args)]
pub struct Overrides {
    /// Supply voltage (V).
    #[arg(long)]
    pub vdd: Option<f64>,
    /// Clock period (s).
    #[arg(long)]
    pub clock_period: Option<f64>,
    /// Memristor state-rate multiplier.
    #[arg(long)]
    pub a_scale: Option<f64>,
    /// Stimulus seed.
    #[arg(long, env = "MEMSIM_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Clock cycles of stimulus (at least 4).
    #[arg(long, default_value_t = 32)]
    pub cycles: usize,
    /// Logic-high threshold as a fraction of the supply.
    #[arg(long, default_value_t = 0.7)]
    pub vhigh_frac: f64,
    /// Logic-low threshold as a fraction of the supply.
    #[arg(long, default_value_t = 0.3)]
    pub vlow_frac: f64,
}

/// Validated settings derived from [`Overrides`].
#[derive(Debug, Clone)]
pub struct Settings {
    pub config: CellConfig,
    pub thresholds: ThresholdConfig,
    pub seed: u64,
    pub cycles: usize,
}

impl Overrides {
    pub fn settings(&self) -> Result<Settings, String> {
        let mut config = CellConfig::default();
        if let Some(v) = self.vdd {
            config.vdd = v;
        }
        if let Some(t) = self.clock_period {
            config.clock_period = t;
        }
        if let Some(a) = self.a_scale {
            config.time_scale = a;
        }
        config.validate().map_err(|e| e.to_string())?;
        if self.cycles < 4 {
            return Err(format!("--cycles must be at least 4, got {}", self.cycles));
        }
        let thresholds = ThresholdConfig::from_fractions(config.vdd, self.vhigh_frac, self.vlow_frac);
        thresholds.validate(config.vdd).map_err(|e| e.to_string())?;
        Ok(Settings {
            config,
            thresholds,
            seed: self.seed,
            cycles: self.cycles,
        })
    }
}
