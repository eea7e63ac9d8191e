//! Command-line front end for the lattice scattering runs.
//!
//! Four subcommands map onto the four run modes; parameters come from
//! flags, a `--config` JSON file (either a bare run config or any output
//! file from a previous run), or a named `--preset`. Errors leave as a
//! single JSON record on stderr with exit code 1 so callers can script
//! against them.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use lattice_scatter::harness::{
    default_figure_id, expand_preset, run, KGrid, Mode, OutputFormat, RunConfig,
};
use lattice_scatter::{
    BarrierSpec, Error, FigureTable, GaussianPacketSpec, LatticeConfig, Result,
};

const PI: f64 = std::f64::consts::PI;

#[derive(Parser)]
#[command(
    name = "lattice-scatter",
    version,
    about = "Resonant scattering on a 1D tight-binding lattice: transmission \
             scans, resonance tables, wave-packet evolutions, and reflected-\
             profile comparisons, written as deterministic CSV/JSON tables."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form transmission and reflection over a wave-vector grid
    Scan(ScanArgs),
    /// Locate the barrier's unit-transmission wave vectors
    Resonances(ResonancesArgs),
    /// Propagate a Gaussian packet and tabulate density snapshots
    Evolve(EvolveArgs),
    /// Compare the reflected packet against its analytic profile
    Compare(CompareArgs),
}

#[derive(Args, Default)]
struct CommonArgs {
    /// JSON run config; bare config files and previous output files both work
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Built-in parameter set (fig1, fig2, fig4, fig5, fig6a, fig6b, fig8);
    /// presets are fixed, use --config to customize
    #[arg(long)]
    preset: Option<String>,

    /// Output directory [default: out]
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Write only this format instead of both
    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// File stem for the outputs (default: derived from the run)
    #[arg(long)]
    label: Option<String>,

    /// Number of impurities in the barrier
    #[arg(long)]
    n_impurities: Option<u32>,

    /// Impurity spacing in sites
    #[arg(long)]
    spacing: Option<u32>,

    /// Impurity strength V in units of t0
    #[arg(long)]
    strength: Option<f64>,

    /// Site of the first impurity
    #[arg(long)]
    start_site: Option<i64>,

    /// Lattice length in sites
    #[arg(long)]
    sites: Option<usize>,
}

#[derive(Args, Default)]
struct ScanArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Grid start, in units of pi/a
    #[arg(long)]
    k_min: Option<f64>,

    /// Grid end, in units of pi/a
    #[arg(long)]
    k_max: Option<f64>,

    /// Number of grid points
    #[arg(long)]
    k_points: Option<usize>,

    /// Resonant wave vector to expand R(k) around, in units of pi/a;
    /// adds the order-1/order-2 columns
    #[arg(long)]
    expansion_about: Option<f64>,
}

#[derive(Args, Default)]
struct ResonancesArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Sign-change scan resolution for the root search
    #[arg(long)]
    grid_points: Option<usize>,
}

#[derive(Args, Default)]
struct EvolveArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Packet mean wave vector, in units of pi/a
    #[arg(long)]
    k0: Option<f64>,

    /// Packet amplitude width alpha, in sites
    #[arg(long)]
    alpha: Option<f64>,

    /// Packet center site
    #[arg(long)]
    x0: Option<f64>,

    /// Snapshot times in units of hbar/t0, comma separated
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,

    /// Keep only sites with x/a >= this in the density table
    #[arg(long)]
    x_min: Option<f64>,

    /// Keep only sites with x/a <= this in the density table
    #[arg(long)]
    x_max: Option<f64>,
}

#[derive(Args, Default)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Packet mean wave vector, in units of pi/a (must be resonant)
    #[arg(long)]
    k0: Option<f64>,

    /// Packet amplitude width alpha, in sites
    #[arg(long)]
    alpha: Option<f64>,

    /// Packet center site
    #[arg(long)]
    x0: Option<f64>,

    /// Snapshot times; the comparison runs at the last one
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

/// Everything a subcommand may override on top of a base config. Units are
/// already converted (wave vectors in radians of ka).
#[derive(Default)]
struct Overrides {
    n_impurities: Option<u32>,
    spacing: Option<u32>,
    strength: Option<f64>,
    start_site: Option<i64>,
    sites: Option<usize>,
    k0: Option<f64>,
    alpha: Option<f64>,
    x0: Option<f64>,
    times: Option<Vec<f64>>,
    k_min: Option<f64>,
    k_max: Option<f64>,
    k_points: Option<usize>,
    expansion_about: Option<f64>,
    grid_points: Option<usize>,
    x_min: Option<f64>,
    x_max: Option<f64>,
}

impl Overrides {
    fn from_common(c: &CommonArgs) -> Self {
        Self {
            n_impurities: c.n_impurities,
            spacing: c.spacing,
            strength: c.strength,
            start_site: c.start_site,
            sites: c.sites,
            ..Self::default()
        }
    }

    fn any(&self) -> bool {
        self.n_impurities.is_some()
            || self.spacing.is_some()
            || self.strength.is_some()
            || self.start_site.is_some()
            || self.sites.is_some()
            || self.k0.is_some()
            || self.alpha.is_some()
            || self.x0.is_some()
            || self.times.is_some()
            || self.k_min.is_some()
            || self.k_max.is_some()
            || self.k_points.is_some()
            || self.expansion_about.is_some()
            || self.grid_points.is_some()
            || self.x_min.is_some()
            || self.x_max.is_some()
    }

    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(s) = self.sites {
            cfg.lattice.n_sites = s;
        }
        if self.n_impurities.is_some()
            || self.spacing.is_some()
            || self.strength.is_some()
            || self.start_site.is_some()
        {
            let mut b = cfg.lattice.barrier.unwrap_or(BarrierSpec {
                n_impurities: 2,
                spacing: 1,
                strength: 1.0,
                start_site: (cfg.lattice.n_sites / 2) as i64,
            });
            if let Some(n) = self.n_impurities {
                b.n_impurities = n;
            }
            if let Some(m) = self.spacing {
                b.spacing = m;
            }
            if let Some(v) = self.strength {
                b.strength = v;
            }
            if let Some(s) = self.start_site {
                b.start_site = s;
            }
            cfg.lattice.barrier = Some(b);
        }
        if self.k0.is_some() || self.alpha.is_some() || self.x0.is_some() {
            let mut p = cfg.packet.unwrap_or(GaussianPacketSpec {
                x0: 600.0,
                k0: PI / 2.0,
                alpha: 50.0,
            });
            if let Some(k0) = self.k0 {
                p.k0 = k0;
            }
            if let Some(a) = self.alpha {
                p.alpha = a;
            }
            if let Some(x0) = self.x0 {
                p.x0 = x0;
            }
            cfg.packet = Some(p);
        }
        if let Some(t) = &self.times {
            cfg.times = t.clone();
        }
        if self.k_min.is_some() || self.k_max.is_some() || self.k_points.is_some() {
            let mut g = cfg.k_grid.unwrap_or(KGrid {
                min: 0.01 * PI,
                max: 0.99 * PI,
                points: 1471,
            });
            if let Some(v) = self.k_min {
                g.min = v;
            }
            if let Some(v) = self.k_max {
                g.max = v;
            }
            if let Some(v) = self.k_points {
                g.points = v;
            }
            cfg.k_grid = Some(g);
        }
        if let Some(k0) = self.expansion_about {
            cfg.expansion_about = Some(k0);
        }
        if let Some(g) = self.grid_points {
            cfg.resonance_grid_points = Some(g);
        }
        if self.x_min.is_some() || self.x_max.is_some() {
            let (lo, hi) = cfg.x_window.unwrap_or((1.0, cfg.lattice.n_sites as f64));
            cfg.x_window = Some((self.x_min.unwrap_or(lo), self.x_max.unwrap_or(hi)));
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run_cli(cli) {
        let record = serde_json::json!({
            "error": { "kind": e.kind(), "message": e.to_string() }
        });
        eprintln!("{record}");
        std::process::exit(1);
    }
}

fn run_cli(cli: Cli) -> Result<()> {
    let (mode, common, overrides) = match &cli.command {
        Command::Scan(a) => {
            let mut o = Overrides::from_common(&a.common);
            o.k_min = a.k_min.map(|v| v * PI);
            o.k_max = a.k_max.map(|v| v * PI);
            o.k_points = a.k_points;
            o.expansion_about = a.expansion_about.map(|v| v * PI);
            (Mode::Scan, &a.common, o)
        }
        Command::Resonances(a) => {
            let mut o = Overrides::from_common(&a.common);
            o.grid_points = a.grid_points;
            (Mode::Resonances, &a.common, o)
        }
        Command::Evolve(a) => {
            let mut o = Overrides::from_common(&a.common);
            o.k0 = a.k0.map(|v| v * PI);
            o.alpha = a.alpha;
            o.x0 = a.x0;
            o.times = a.times.clone();
            o.x_min = a.x_min;
            o.x_max = a.x_max;
            (Mode::Evolve, &a.common, o)
        }
        Command::Compare(a) => {
            let mut o = Overrides::from_common(&a.common);
            o.k0 = a.k0.map(|v| v * PI);
            o.alpha = a.alpha;
            o.x0 = a.x0;
            o.times = a.times.clone();
            (Mode::Compare, &a.common, o)
        }
    };

    let runs = assemble_runs(mode, common, &overrides)?;
    for (id, mut cfg) in runs {
        if let Some(out) = &common.out {
            cfg.output_dir = out.clone();
        }
        if let Some(f) = common.format {
            cfg.format = Some(f.into());
        }
        let table = run(&cfg, &id)?;
        let dir = cfg.output_dir.clone();
        let paths = table.write(&dir)?;
        println!("{}", summary_line(&id, &table, &paths));
    }
    Ok(())
}

fn assemble_runs(
    mode: Mode,
    common: &CommonArgs,
    overrides: &Overrides,
) -> Result<Vec<(String, RunConfig)>> {
    if let Some(name) = &common.preset {
        if common.config.is_some() {
            return Err(Error::InvalidConfig(
                "--preset and --config are mutually exclusive".into(),
            ));
        }
        if overrides.any() || common.label.is_some() {
            return Err(Error::InvalidConfig(
                "presets are fixed parameter sets; use --config to customize a run".into(),
            ));
        }
        let runs = expand_preset(name)?;
        for (id, cfg) in &runs {
            if cfg.mode != mode {
                return Err(Error::InvalidConfig(format!(
                    "preset {name} is a {} preset (run {id}); invoke it as \
                     `lattice-scatter {} --preset {name}`",
                    cfg.mode, cfg.mode
                )));
            }
        }
        return Ok(runs);
    }

    let mut cfg = match &common.config {
        Some(path) => {
            let cfg = load_config(path)?;
            if cfg.mode != mode {
                return Err(Error::InvalidConfig(format!(
                    "config file describes a {} run; invoke `lattice-scatter {}`",
                    cfg.mode, cfg.mode
                )));
            }
            cfg
        }
        None => default_config(mode),
    };
    overrides.apply(&mut cfg);
    cfg.validate()?;
    let id = common.label.clone().unwrap_or_else(|| default_figure_id(&cfg));
    Ok(vec![(id, cfg)])
}

fn default_config(mode: Mode) -> RunConfig {
    let barrier = |n, m| BarrierSpec { n_impurities: n, spacing: m, strength: 1.0, start_site: 1500 };
    let lattice = |b| LatticeConfig { n_sites: 3000, t0: 1.0, barrier: Some(b) };
    let packet = GaussianPacketSpec { x0: 600.0, k0: PI / 2.0, alpha: 50.0 };
    match mode {
        Mode::Scan => RunConfig {
            mode,
            lattice: lattice(barrier(2, 1)),
            packet: None,
            k_grid: Some(KGrid { min: 0.01 * PI, max: 0.99 * PI, points: 1471 }),
            times: Vec::new(),
            expansion_about: None,
            x_window: None,
            resonance_grid_points: None,
            output_dir: PathBuf::from("out"),
            format: None,
        },
        Mode::Resonances => RunConfig {
            mode,
            lattice: lattice(barrier(2, 1)),
            packet: None,
            k_grid: None,
            times: Vec::new(),
            expansion_about: None,
            x_window: None,
            resonance_grid_points: None,
            output_dir: PathBuf::from("out"),
            format: None,
        },
        Mode::Evolve => RunConfig {
            mode,
            lattice: lattice(barrier(2, 1)),
            packet: Some(packet),
            k_grid: None,
            times: vec![0.0, 250.0, 500.0, 750.0, 1000.0],
            expansion_about: None,
            x_window: None,
            resonance_grid_points: None,
            output_dir: PathBuf::from("out"),
            format: None,
        },
        Mode::Compare => RunConfig {
            mode,
            lattice: lattice(barrier(3, 1)),
            packet: Some(packet),
            k_grid: None,
            times: vec![1000.0],
            expansion_about: None,
            x_window: None,
            resonance_grid_points: None,
            output_dir: PathBuf::from("out"),
            format: None,
        },
    }
}

#[derive(serde::Deserialize)]
struct ConfigCarrier {
    config: RunConfig,
}

fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    match serde_json::from_str::<RunConfig>(&text) {
        Ok(cfg) => Ok(cfg),
        // output files wrap the config; surface the bare-parse error if
        // neither shape fits
        Err(bare) => match serde_json::from_str::<ConfigCarrier>(&text) {
            Ok(carrier) => Ok(carrier.config),
            Err(_) => Err(Error::Json(bare)),
        },
    }
}

fn summary_line(id: &str, table: &FigureTable, paths: &[PathBuf]) -> String {
    let files: Vec<String> = paths.iter().map(|p| p.display().to_string()).collect();
    let files = files.join(", ");
    let meta = &table.metadata;
    let detail = match table.config.mode {
        Mode::Scan => format!("{} k points", table.rows()),
        Mode::Resonances => {
            let ks: Vec<String> = table.columns[0]
                .values
                .iter()
                .map(|k| format!("{k:.6}"))
                .collect();
            format!("{} resonances at ka/pi = [{}]", table.rows(), ks.join(", "))
        }
        Mode::Evolve => format!(
            "p_left = {:.4}, p_right = {:.4} at the final time",
            meta.get("p_left_final").copied().unwrap_or(f64::NAN),
            meta.get("p_right_final").copied().unwrap_or(f64::NAN),
        ),
        Mode::Compare => format!(
            "l2_rel_error = {:.3e}, p_left = {:.4}, |rho'|^2 = {:.4}",
            meta.get("l2_rel_error").copied().unwrap_or(f64::NAN),
            meta.get("p_left").copied().unwrap_or(f64::NAN),
            meta.get("rho_prime_abs2").copied().unwrap_or(f64::NAN),
        ),
    };
    format!("{id}: {detail} -> {files}")
}
