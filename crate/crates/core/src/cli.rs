//! Command-line front end. Exit codes: 0 success, 2 configuration error,
//! 3 solver failure, 4 I/O.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Config, Units};
use crate::error::{Error, Result};
use crate::export;
use crate::freespace::bound_states_free;
use crate::scan::{
    detect_crossings, run_scan, wavefunction_cut, CrossingOptions, CutGeometry, LevelFlags, Rendering, ScanRow,
    ScanSpec, ScanTable,
};
use crate::solver::{find_roots, solve_state, Parity, SystemSpec};
use crate::variational::{solve_variational, VariationalBasis};

#[derive(Debug, Parser)]
#[command(name = "trapdet", version, about = "Trapped atom with point impurities: spectra, sweeps and wave functions")]
pub struct Cli {
    /// JSON configuration; flags override its fields
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    pub format: OutFormat,

    /// write here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenenergies of one configuration
    Spectrum(SystemArgs),
    /// Spectrum along a sweep of 2d, a or Δz
    Scan(ScanArgs),
    /// Avoided crossings along a sweep
    Crossings {
        #[command(flatten)]
        scan: ScanArgs,
        /// a gap minimum must fall below this fraction of its surroundings
        #[arg(long)]
        prominence: Option<f64>,
    },
    /// Bound states of the untrapped pair along a sweep
    BoundStates(ScanArgs),
    /// Two- or three-state variational energies along a sweep
    Variational {
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, value_enum, default_value_t = BasisKind::Three)]
        basis: BasisKind,
    },
    /// Samples of one eigenstate along the z-axis or over the x–z plane
    Wavefunction {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, default_value = "even")]
        parity: String,
        /// adiabatic index within the parity sector
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, value_enum, default_value_t = CutKind::Z)]
        cut: CutKind,
        #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 241)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = RenderKind::Tamed)]
        render: RenderKind,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisKind {
    Two,
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutKind {
    Z,
    Xz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderKind {
    Raw,
    Tamed,
}

/// A symmetric or displaced pair; without these flags a config file's
/// impurity list is used if it has one.
#[derive(Debug, Clone, Default, Args)]
pub struct SystemArgs {
    /// scattering length, or "inf" for unitarity
    #[arg(long, short = 'a', allow_negative_numbers = true)]
    pub scattering_length: Option<String>,
    /// full separation 2d
    #[arg(long)]
    pub separation: Option<f64>,
    /// displacement of the first impurity along z
    #[arg(long, allow_negative_numbers = true)]
    pub dz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e_max: Option<f64>,
    /// also list oscillator levels the impurities leave alone
    #[arg(long)]
    pub unaffected: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// separation_2d, scattering_a or asym_dz
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// add the untrapped bound-state branches
    #[arg(long)]
    pub free_branches: bool,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Parse(_) => 2,
        Error::Io { .. } => 4,
        _ => 3,
    }
}

fn parse_length(s: &str) -> Result<f64> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse().map_err(|_| Error::Config(format!("bad scattering length {s:?}"))),
    }
}

struct Context {
    config: Config,
    units: Units,
}

impl Context {
    fn load(path: Option<&PathBuf>) -> Result<Context> {
        let config = match path {
            Some(p) => Config::from_json(&export::read_file(p)?)?,
            None => Config::default(),
        };
        let units = config.units()?;
        Ok(Context { config, units })
    }

    /// Every sweep variable is a length, so flags scale by the length unit.
    fn scan_spec(&self, args: &ScanArgs) -> Result<ScanSpec> {
        let mut s = self.config.scan_spec()?;
        if let Some(v) = &args.sweep {
            s.sweep = v.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
        }
        if let Some(v) = args.lo {
            s.lo = v / self.units.length;
        }
        if let Some(v) = args.hi {
            s.hi = v / self.units.length;
        }
        if let Some(v) = args.steps {
            s.steps = v;
        }
        s.free_branches |= args.free_branches;
        self.apply_system(&mut s, &args.system)?;
        s.validate()?;
        Ok(s)
    }

    fn apply_system(&self, s: &mut ScanSpec, a: &SystemArgs) -> Result<()> {
        let u = self.units;
        if let Some(v) = &a.scattering_length {
            s.scattering_length = parse_length(v)? / u.length;
        }
        if let Some(v) = a.separation {
            s.separation = v / u.length;
        }
        if let Some(v) = a.dz {
            s.dz = v / u.length;
        }
        if let Some(v) = a.e_min {
            s.e_min = v / u.energy;
        }
        if let Some(v) = a.e_max {
            s.e_max = v / u.energy;
        }
        s.unaffected |= a.unaffected;
        Ok(())
    }

    /// The configuration for single-point commands, plus the energy window.
    fn system(&self, a: &SystemArgs) -> Result<(SystemSpec, ScanSpec)> {
        let mut s = self.config.scan_spec()?;
        self.apply_system(&mut s, a)?;
        s.validate()?;
        let pair_flags = a.scattering_length.is_some() || a.separation.is_some() || a.dz.is_some();
        let spec = match self.config.system()? {
            Some(spec) if !pair_flags => spec,
            _ => SystemSpec::asymmetric_pair(s.separation / 2.0, s.scattering_length, s.dz)?,
        };
        Ok((spec, s))
    }

    /// Back to the user's units.
    fn present(&self, mut table: ScanTable) -> ScanTable {
        let u = self.units;
        if u != Units::OSCILLATOR {
            for r in &mut table.rows {
                if table.sweep.is_some() {
                    r.value *= u.length;
                }
                r.energy *= u.energy;
            }
        }
        table
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => export::write_file(p, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Io { path: "<stdout>".into(), message: e.to_string() })
        }
    }
}

fn render_table(table: &ScanTable, format: OutFormat) -> Result<String> {
    match format {
        OutFormat::Csv => Ok(export::table_to_csv(table)),
        OutFormat::Json => export::table_to_json(table),
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let ctx = Context::load(cli.config.as_ref())?;
    let opts = ctx.config.root_options()?;
    let text = match &cli.command {
        Command::Spectrum(a) => {
            let (spec, s) = ctx.system(a)?;
            let sp = find_roots(&spec, s.e_min, s.e_max, &opts)?;
            let mut rows: Vec<ScanRow> = sp
                .roots
                .iter()
                .map(|r| ScanRow {
                    value: 0.0,
                    level_index: r.index as i64,
                    energy: r.energy,
                    parity: r.parity,
                    flags: LevelFlags { degenerate: r.degenerate, near_pole: r.near_pole, ..Default::default() },
                })
                .collect();
            if s.unaffected {
                for u in &sp.unaffected {
                    for _ in 0..u.multiplicity {
                        rows.push(ScanRow {
                            value: 0.0,
                            level_index: -1,
                            energy: u.energy,
                            parity: u.parity,
                            flags: LevelFlags { unaffected: true, ..Default::default() },
                        });
                    }
                }
            }
            render_table(&ctx.present(ScanTable { sweep: None, rows }), cli.format)?
        }
        Command::Scan(a) => {
            let s = ctx.scan_spec(a)?;
            render_table(&ctx.present(run_scan(&s, &opts)?), cli.format)?
        }
        Command::Crossings { scan, prominence } => {
            let s = ctx.scan_spec(scan)?;
            let table = run_scan(&s, &opts)?;
            let mut copts = CrossingOptions::default();
            if let Some(p) = prominence {
                if !(*p > 0.0 && *p <= 1.0) {
                    return Err(Error::Config("prominence must lie in (0, 1]".into()));
                }
                copts.prominence = *p;
            }
            let mut records = detect_crossings(&table, &s, &opts, &copts)?;
            for c in &mut records {
                c.value *= ctx.units.length;
                c.gap *= ctx.units.energy;
                c.lower_energy *= ctx.units.energy;
                c.upper_energy *= ctx.units.energy;
            }
            match cli.format {
                OutFormat::Csv => export::crossings_to_csv(s.sweep, &records),
                OutFormat::Json => export::crossings_to_json(s.sweep, &records)?,
            }
        }
        Command::BoundStates(a) => {
            let s = ctx.scan_spec(a)?;
            let mut rows = Vec::new();
            for v in s.values() {
                let spec = s.system_at(v)?;
                let states = bound_states_free(&spec)?;
                for (k, st) in states.iter().enumerate() {
                    rows.push(ScanRow {
                        value: v,
                        level_index: k as i64,
                        energy: st.energy,
                        parity: st.parity,
                        flags: LevelFlags { free: true, ..Default::default() },
                    });
                }
            }
            render_table(&ctx.present(ScanTable { sweep: Some(s.sweep), rows }), cli.format)?
        }
        Command::Variational { scan, basis } => {
            let s = ctx.scan_spec(scan)?;
            let mut rows = Vec::new();
            for v in s.values() {
                let spec = s.system_at(v)?;
                let b = match basis {
                    BasisKind::Two => VariationalBasis::two_state(&spec)?,
                    BasisKind::Three => VariationalBasis::three_state(&spec)?,
                };
                match solve_variational(&b, &spec) {
                    Ok(sol) => {
                        for (k, (e, p)) in sol.energies.iter().zip(&sol.parities).enumerate() {
                            rows.push(ScanRow {
                                value: v,
                                level_index: k as i64,
                                energy: *e,
                                parity: *p,
                                flags: LevelFlags { variational: true, ..Default::default() },
                            });
                        }
                    }
                    Err(Error::Basis(_)) => rows.push(ScanRow {
                        value: v,
                        level_index: -1,
                        energy: f64::NAN,
                        parity: Parity::None,
                        flags: LevelFlags { variational: true, error: true, ..Default::default() },
                    }),
                    Err(e) => return Err(e),
                }
            }
            render_table(&ctx.present(ScanTable { sweep: Some(s.sweep), rows }), cli.format)?
        }
        Command::Wavefunction { system, parity, index, cut, from, to, samples, render } => {
            let (spec, s) = ctx.system(system)?;
            let parity: Parity = parity.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
            let sp = find_roots(&spec, s.e_min, s.e_max, &opts)?;
            let root = sp
                .roots
                .iter()
                .find(|r| r.parity == parity && r.index == *index)
                .ok_or_else(|| Error::Config(format!("no {} level with index {index} in the window", parity.as_str())))?;
            let state = solve_state(&spec, root.energy, parity)?;
            let geometry = match cut {
                CutKind::Z => CutGeometry::ZAxis { steps: *samples },
                CutKind::Xz => CutGeometry::XzPlane { steps: *samples },
            };
            let rendering = match render {
                RenderKind::Raw => Rendering::Raw,
                RenderKind::Tamed => Rendering::PoleTamed,
            };
            let l = ctx.units.length;
            let mut pts = wavefunction_cut(&state, &spec, geometry, from / l, to / l, rendering)?;
            for p in &mut pts {
                p.x *= l;
                p.z *= l;
            }
            match cli.format {
                OutFormat::Csv => export::cut_to_csv(&pts),
                OutFormat::Json => export::cut_to_json(&pts)?,
            }
        }
    };
    emit(&cli.output, &text)
}

/// Parse, run, and turn the outcome into an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("trapdet: {e}");
            exit_code(&e)
        }
    }
}

