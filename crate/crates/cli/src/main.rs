//! `fsmlattice`: simulate, verify, inspect and render lattices of
//! two-state machines.
//!
//! Exit codes: 0 success, 1 failed verification, 2 bad arguments or
//! configuration, 3 reverse run stopped with no preimage.

mod inputs;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fsmlattice_core::analysis::{
    atlas, check_reversibility, compare_m54_m60, verify_forward_r90_from, verify_reverse_r90,
    SharedInputs, Sweep,
};
use fsmlattice_core::eca::{preimages, Boundary, EcaRow};
use fsmlattice_core::engine::{reverse_outcome, run_with};
use fsmlattice_core::export::{from_json, rows_text, to_json};
use fsmlattice_core::machine::{canonical_ids, equivalence_class};
use fsmlattice_core::render::{
    render_atlas, render_trajectory, Bitmap, Palette, RasterSpec, RowFilter,
};
use fsmlattice_core::{Direction, EcaRule, Error as CoreError};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "fsmlattice",
    version,
    about = "Lattices of two-state, two-symbol machines"
)]
struct Cli {
    /// Worker threads for sweeps and atlases (default: available parallelism)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one lattice and write its trajectory
    Simulate(SimulateArgs),
    /// Run a cross-check and report PASS/FAIL
    Verify {
        #[command(subcommand)]
        kind: VerifyKind,
    },
    /// Inspect machines
    Machine {
        #[command(subcommand)]
        action: MachineAction,
    },
    /// Enumerate elementary CA preimages of a row
    Preimages(PreimageArgs),
    /// Rasterise a trajectory JSON file
    Render(RenderArgs),
    /// Render all 256 machines from a single centred cell
    Atlas(AtlasArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Filter {
    All,
    Even,
    Odd,
    Split,
}

impl From<Filter> for RowFilter {
    fn from(f: Filter) -> Self {
        match f {
            Filter::All => RowFilter::All,
            Filter::Even => RowFilter::Even,
            Filter::Odd => RowFilter::Odd,
            Filter::Split => RowFilter::SplitEvenOdd,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Colours {
    /// S0 black
    S0Black,
    /// S1 black
    S1Black,
}

#[derive(Clone, Copy, ValueEnum)]
enum FirstDirection {
    Ltr,
    Rtl,
}

#[derive(Args)]
struct RasterArgs {
    #[arg(long, value_enum, default_value = "all")]
    filter: Filter,
    #[arg(long, default_value_t = 1)]
    scale: usize,
    #[arg(long, value_enum, default_value = "s0-black")]
    palette: Colours,
    /// Write binary P4 instead of plain P1
    #[arg(long)]
    p4: bool,
}

impl RasterArgs {
    fn spec(&self) -> RasterSpec {
        RasterSpec::new(self.filter.into())
            .with_scale(self.scale)
            .with_palette(match self.palette {
                Colours::S0Black => Palette::S0Black,
                Colours::S1Black => Palette::S1Black,
            })
    }

    fn encode(&self, bmp: &Bitmap) -> Vec<u8> {
        if self.p4 {
            bmp.to_pbm_raw()
        } else {
            bmp.to_pbm_plain()
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Decimal id, 8-bit string, or @file holding a transition table
    #[arg(long)]
    machine: String,
    #[arg(long)]
    width: Option<usize>,
    /// centered-one | bits:<0/1> | random:<seed> | r90-row:<k>
    #[arg(long, default_value = "centered-one")]
    init: String,
    /// const0 | const1 | forward-r90 | reverse-r90 | scripted:<0/1>
    #[arg(long, default_value = "const0")]
    policy: String,
    #[arg(long)]
    steps: usize,
    #[arg(long, value_enum, default_value = "ltr")]
    first_direction: FirstDirection,
    /// Trajectory JSON output path
    #[arg(long)]
    json: Option<PathBuf>,
    /// Text rows output path
    #[arg(long)]
    rows: Option<PathBuf>,
    /// Raster output path
    #[arg(long)]
    pbm: Option<PathBuf>,
    #[command(flatten)]
    raster: RasterArgs,
}

#[derive(Subcommand)]
enum VerifyKind {
    /// M45 even rows against Rule 90 under the forward boundary policy
    R90Forward {
        #[arg(long, default_value_t = 129)]
        width: usize,
        #[arg(long, default_value_t = 128)]
        steps: usize,
        #[arg(long, default_value = "centered-one")]
        init: String,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Committed even rows of a reverse run step forward under Rule 90
    R90Reverse {
        #[arg(long, default_value = "54")]
        machine: String,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        init: String,
        #[command(flatten)]
        out: ReportOut,
    },
    /// Lattice reversal undoes a run
    Reversibility {
        #[arg(long, default_value = "44")]
        machine: String,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        steps: usize,
        /// Every configuration of the given width
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        /// Number of random configurations
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: ReportOut,
    },
    /// M60 against M54 on shared inputs
    #[command(name = "m54-m60-shift")]
    M54M60Shift {
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        init: String,
        #[arg(long)]
        steps: usize,
        /// `reverse` (M54's committed reverse inputs) or a 0/1 script
        #[arg(long, default_value = "reverse")]
        inputs: String,
        #[command(flatten)]
        out: ReportOut,
    },
}

#[derive(Args)]
struct ReportOut {
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MachineAction {
    /// Transition table
    Show {
        id: String,
    },
    /// State-reporting, message-propagating or constant
    Classify {
        id: String,
    },
    /// Machines equivalent under complement and mirror
    Class {
        id: String,
    },
    Transpose {
        id: String,
    },
    /// One line per equivalence class
    List {
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Args)]
struct PreimageArgs {
    /// Row of 0/1 cells
    row: String,
    #[arg(long, default_value_t = 90)]
    rule: u8,
    #[arg(long)]
    periodic: bool,
    /// Print only the count
    #[arg(long)]
    count_only: bool,
}

#[derive(Args)]
struct RenderArgs {
    /// Trajectory JSON written by `simulate --json`
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    raster: RasterArgs,
}

#[derive(Args)]
struct AtlasArgs {
    #[arg(long, default_value_t = 19)]
    width: usize,
    #[arg(long, default_value_t = 38)]
    steps: usize,
    #[arg(long, default_value_t = 16)]
    columns: usize,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    raster: RasterArgs,
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    VerifyFailed,
    NoPreimage,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn simulate(a: SimulateArgs) -> Result<Status> {
    let machine = inputs::machine(&a.machine)?;
    let initial = inputs::initial(&a.init, a.width)?;
    let policy = inputs::policy(&a.policy)?;
    let first = match a.first_direction {
        FirstDirection::Ltr => Direction::LeftToRight,
        FirstDirection::Rtl => Direction::RightToLeft,
    };
    let (traj, stopped) = reverse_outcome(run_with(machine, &initial, &policy, a.steps, first))?;

    if let Some(p) = &a.json {
        write_file(p, to_json(&traj, stopped).as_bytes())?;
    }
    if let Some(p) = &a.rows {
        write_file(p, rows_text(&traj).as_bytes())?;
    }
    if let Some(p) = &a.pbm {
        let bmp = render_trajectory(&traj, &a.raster.spec())?;
        write_file(p, &a.raster.encode(&bmp))?;
    }

    let mut out = std::io::stdout().lock();
    let bits =
        |v: Vec<fsmlattice_core::Symbol>| v.iter().map(|s| s.to_string()).collect::<String>();
    writeln!(
        out,
        "M{machine} width {} policy {policy}: {} of {} steps",
        traj.width(),
        traj.steps.len(),
        a.steps
    )?;
    writeln!(out, "inputs  {}", bits(traj.inputs()))?;
    writeln!(out, "outputs {}", bits(traj.outputs()))?;
    if a.json.is_none() && a.rows.is_none() && a.pbm.is_none() {
        out.write_all(rows_text(&traj).as_bytes())?;
    }
    Ok(match stopped {
        Some(t) => {
            writeln!(out, "no preimage at step {t}")?;
            Status::NoPreimage
        }
        None => Status::Ok,
    })
}

fn report<R: Serialize + std::fmt::Display>(
    r: &R,
    passed: bool,
    out: &ReportOut,
) -> Result<Status> {
    let json = serde_json::to_string_pretty(r)?;
    match &out.out {
        Some(p) => {
            write_file(p, json.as_bytes())?;
            println!("{r}");
        }
        None => {
            println!("{json}");
            eprintln!("{r}");
        }
    }
    Ok(if passed {
        Status::Ok
    } else {
        Status::VerifyFailed
    })
}

fn verify(kind: VerifyKind) -> Result<Status> {
    match kind {
        VerifyKind::R90Forward {
            width,
            steps,
            init,
            out,
        } => {
            let initial = inputs::initial(&init, Some(width))?;
            let r = verify_forward_r90_from(&initial, steps)?;
            report(&r, r.passed, &out)
        }
        VerifyKind::R90Reverse {
            machine,
            width,
            depth,
            init,
            out,
        } => {
            let initial = inputs::initial(&init, width)?;
            let r = verify_reverse_r90(inputs::machine(&machine)?, &initial, depth)?;
            // running out of preimages early is a failed check, not an error
            let ok = r.passed && r.no_preimage_at.is_none();
            report(&r, ok, &out)
        }
        VerifyKind::Reversibility {
            machine,
            width,
            steps,
            exhaustive,
            samples,
            seed,
            out,
        } => {
            let sweep = match (exhaustive, samples) {
                (true, _) => Sweep::Exhaustive,
                (false, Some(count)) => Sweep::Sampled { count, seed },
                (false, None) => bail!("give --exhaustive or --samples <n>"),
            };
            let r = check_reversibility(inputs::machine(&machine)?, width, steps, sweep)?;
            report(&r, r.passed, &out)
        }
        VerifyKind::M54M60Shift {
            width,
            init,
            steps,
            inputs: script,
            out,
        } => {
            let initial = inputs::initial(&init, width)?;
            let shared = match script.as_str() {
                "reverse" => SharedInputs::ReverseCommitted,
                s => SharedInputs::Scripted(inputs::symbols(
                    s.strip_prefix("scripted:").unwrap_or(s),
                )?),
            };
            let r = compare_m54_m60(&initial, &shared, steps)?;
            report(&r, r.passed, &out)
        }
    }
}

fn machine_cmd(action: MachineAction) -> Result<Status> {
    let ids = |set: std::collections::BTreeSet<fsmlattice_core::MachineId>| {
        set.iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    match action {
        MachineAction::Show { id } => print!("{}", inputs::machine(&id)?.machine().table()),
        MachineAction::Classify { id } => {
            println!("{}", inputs::machine(&id)?.machine().classify())
        }
        MachineAction::Class { id } => {
            println!("{}", ids(equivalence_class(inputs::machine(&id)?)))
        }
        MachineAction::Transpose { id } => {
            println!("{}", inputs::machine(&id)?.machine().transpose().encode())
        }
        MachineAction::List { count_only } => {
            let canon = canonical_ids();
            if count_only {
                println!("{}", canon.len());
            } else {
                for id in canon {
                    println!(
                        "{id:>3} {:<22} {}",
                        id.machine().classify().to_string(),
                        ids(equivalence_class(id))
                    );
                }
            }
        }
    }
    Ok(Status::Ok)
}

fn preimage_cmd(a: PreimageArgs) -> Result<Status> {
    let boundary = if a.periodic {
        Boundary::Periodic
    } else {
        Boundary::Null
    };
    let row = EcaRow::parse(&a.row, boundary)?;
    let found = preimages(&row, EcaRule(a.rule))?;
    if a.count_only {
        println!("{}", found.len());
    } else {
        for p in &found {
            println!("{p}");
        }
        eprintln!("{} preimage(s)", found.len());
    }
    Ok(Status::Ok)
}

fn render_cmd(a: RenderArgs) -> Result<Status> {
    let text =
        fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let (traj, _) = from_json(&text)?;
    let bmp = render_trajectory(&traj, &a.raster.spec())?;
    write_file(&a.out, &a.raster.encode(&bmp))?;
    Ok(Status::Ok)
}

fn atlas_cmd(a: AtlasArgs) -> Result<Status> {
    let tiles = atlas(a.width, a.steps)?;
    let bmp = render_atlas(&tiles, a.columns, &a.raster.spec())?;
    write_file(&a.out, &a.raster.encode(&bmp))?;
    let blank = tiles.iter().filter(|t| t.blank).count();
    println!(
        "256 tiles, {blank} blank, {}x{} pixels",
        bmp.width(),
        bmp.height()
    );
    Ok(Status::Ok)
}

fn dispatch(cli: Cli) -> Result<Status> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring worker pool")?;
    }
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Verify { kind } => verify(kind),
        Command::Machine { action } => machine_cmd(action),
        Command::Preimages(a) => preimage_cmd(a),
        Command::Render(a) => render_cmd(a),
        Command::Atlas(a) => atlas_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerifyFailed) => ExitCode::from(1),
        Ok(Status::NoPreimage) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<CoreError>() {
                Some(CoreError::NoPreimage { .. }) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
