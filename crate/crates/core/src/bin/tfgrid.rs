//! Command-line front end: generate, verify, solve, reduce, map solutions
//! back through reductions, certify reductions, and render instances.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use tfgrid::gen::{gen_grid, gen_line, GenStyle};
use tfgrid::grid::{
    check_meet_solution, check_solution, solve_brute_force, GridInstance, GridParams, GridSolution,
    MeetInstance, MeetPart, SolveMode, SurplusFn, SURPLUS_DOUBLE, SURPLUS_SQUARE, SURPLUS_SUCC,
};
use tfgrid::io::{
    default_cell_limit, read_document, write_document, AnyInstance, InstanceDoc, FORMAT_VERSION,
};
use tfgrid::line::{
    brute_force_solve_line, check_line_solution, line_to_php, php_to_line, LineFlavor,
    LineInstance, LineSolution,
};
use tfgrid::potential::{
    brute_force_solve_potential, check_potential_solution, grid_to_potential, potential_to_grid,
    PotentialInstance, PotentialSolution,
};
use tfgrid::reductions::{
    build_pipeline, grid_collision_to_pigeon_circuit, pad_instance, path_php_to_php,
    php_to_path_php, sod_meet_gadget_to_merge_free, sopl_meet_bijphp_to_eopl,
    transfer_sources_to_first_column, GadgetFlavor, PathPhpFlavor, PipelineKind,
};

const EXIT_REJECT: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

enum CliError {
    /// Bad arguments or inputs outside a command's domain.
    Usage(String),
    /// The verifier said no, a certification failed, or no solution exists.
    Reject(String),
    /// I/O failures and internal invariant breaks.
    Internal(String),
}

impl CliError {
    fn usage(e: impl ToString) -> Self {
        CliError::Usage(e.to_string())
    }

    fn internal(e: impl ToString) -> Self {
        CliError::Internal(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "tfgrid", version, about = "Grid search instances: generate, solve, reduce")]
struct Cli {
    /// Dense-materialization bound; also read from TFGRID_CELL_LIMIT.
    #[arg(long, global = true)]
    cell_limit: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deterministically generate an instance.
    Gen(GenArgs),
    /// Check a candidate solution against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Exhaustively solve an instance.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        /// Report every solution instead of the first.
        #[arg(long)]
        all: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Apply a reduction, writing the output instance and a lineage record.
    Reduce {
        #[command(flatten)]
        spec: ReduceSpec,
        #[arg(long, short)]
        out: PathBuf,
        /// Where to record the reduction arguments for `map-back`.
        #[arg(long)]
        lineage: Option<PathBuf>,
    },
    /// Pull a target solution back through a recorded reduction.
    MapBack {
        #[arg(long)]
        lineage: PathBuf,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Re-run a reduction, solve its output exhaustively, and check that
    /// every solution pulls back to a verified source solution.
    Certify {
        #[command(flatten)]
        spec: ReduceSpec,
    },
    /// Emit an instance as Graphviz DOT.
    Render {
        #[arg(long)]
        instance: PathBuf,
        /// Fill entered dead ends.
        #[arg(long)]
        highlight_sinks: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    /// sod | sopl | eopl | sod-no-merge | inj-php | bij-php | pigeon-circuit | eol | sol
    #[arg(long)]
    class: String,
    /// Rows (grids) or vertices (lines).
    #[arg(long)]
    rows: usize,
    /// Columns; ignored by two-column and line classes.
    #[arg(long, default_value_t = 2)]
    cols: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// random | single-path | layered-adversarial | forced-minimal
    #[arg(long, default_value = "random")]
    style: String,
    #[arg(long, short)]
    out: PathBuf,
}

/// Everything needed to re-run a reduction; serialized verbatim into lineage
/// records.
#[derive(Args, Serialize, Deserialize, Clone)]
struct ReduceSpec {
    /// pad | php-to-path | path-to-php | transfer | pigeon | merge-free |
    /// eopl | php-to-line | line-to-php | grid-to-potential |
    /// potential-to-grid | eol-to-eopl | sol-to-sopl | collision-to-merge-free
    #[arg(long)]
    reduction: String,
    #[arg(long)]
    input: PathBuf,
    /// Second input for meet-style reductions and pipelines.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    companion: Option<PathBuf>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_rows: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target_cols: Option<usize>,
    /// square | succ | double
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    surplus: Option<String>,
    /// inj | bij | collision
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flavor: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct Lineage {
    format_version: u32,
    #[serde(flatten)]
    spec: ReduceSpec,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version requests are not usage errors.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let cell_limit = cli.cell_limit.unwrap_or_else(default_cell_limit);
    match run(cli.command, cell_limit) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Reject(msg)) => {
            println!("reject: {msg}");
            ExitCode::from(EXIT_REJECT)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn run(command: Command, cell_limit: usize) -> CliResult<()> {
    match command {
        Command::Gen(args) => cmd_gen(args, cell_limit),
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Solve { instance, all, out } => cmd_solve(&instance, all, out.as_deref(), cell_limit),
        Command::Reduce { spec, out, lineage } => cmd_reduce(spec, &out, lineage.as_deref(), cell_limit),
        Command::MapBack { lineage, solution, out } => {
            cmd_map_back(&lineage, &solution, out.as_deref(), cell_limit)
        }
        Command::Certify { spec } => cmd_certify(spec, cell_limit),
        Command::Render { instance, highlight_sinks, out } => {
            cmd_render(&instance, highlight_sinks, out.as_deref(), cell_limit)
        }
    }
}

fn load_any(path: &Path) -> CliResult<AnyInstance> {
    read_document(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        .decode()
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn load_grid(path: &Path) -> CliResult<GridInstance> {
    match load_any(path)? {
        AnyInstance::Grid(g) => Ok(g),
        _ => Err(CliError::usage(format!("{}: expected a grid instance", path.display()))),
    }
}

fn load_line(path: &Path) -> CliResult<LineInstance> {
    match load_any(path)? {
        AnyInstance::Line(l) => Ok(l),
        _ => Err(CliError::usage(format!("{}: expected a line instance", path.display()))),
    }
}

fn load_potential(path: &Path) -> CliResult<PotentialInstance> {
    match load_any(path)? {
        AnyInstance::Potential(p) => Ok(p),
        _ => Err(CliError::usage(format!("{}: expected a potential instance", path.display()))),
    }
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(CliError::internal),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_instance(path: &Path, doc: &InstanceDoc) -> CliResult<()> {
    write_document(path, doc).map_err(CliError::internal)
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

// --- gen ---

fn cmd_gen(args: GenArgs, cell_limit: usize) -> CliResult<()> {
    let style: GenStyle = args.style.parse().map_err(CliError::Usage)?;
    let grid_params = |m: usize, a: usize, b: usize, r: bool, bij: bool, c: bool| GridParams {
        n: args.rows,
        m,
        a,
        b,
        reversible: r,
        bijective: bij,
        collision: c,
    };
    let n = args.rows;
    let doc = match args.class.as_str() {
        "sod" => grid_doc(grid_params(args.cols, 1, 0, false, false, false), &args, style, cell_limit)?,
        "sopl" => grid_doc(grid_params(args.cols, 1, 0, true, false, false), &args, style, cell_limit)?,
        "eopl" => grid_doc(grid_params(args.cols, 1, 0, true, true, false), &args, style, cell_limit)?,
        "sod-no-merge" => {
            grid_doc(grid_params(args.cols, 1, 0, false, false, true), &args, style, cell_limit)?
        }
        "inj-php" => grid_doc(grid_params(2, n, n - 1, true, false, false), &args, style, cell_limit)?,
        "bij-php" => grid_doc(grid_params(2, n, n - 1, true, true, false), &args, style, cell_limit)?,
        "pigeon-circuit" => {
            grid_doc(grid_params(2, n, n - 1, false, false, true), &args, style, cell_limit)?
        }
        "eol" | "sol" => {
            let flavor = if args.class == "eol" { LineFlavor::EoL } else { LineFlavor::SoL };
            let line = gen_line(n, args.seed, style, flavor).map_err(CliError::usage)?;
            InstanceDoc::from_line(&line)
        }
        other => return Err(CliError::Usage(format!("unknown class {other:?}"))),
    };
    emit_instance(&args.out, &doc)
}

fn grid_doc(
    params: GridParams,
    args: &GenArgs,
    style: GenStyle,
    cell_limit: usize,
) -> CliResult<InstanceDoc> {
    let inst = gen_grid(params, args.seed, style).map_err(CliError::usage)?;
    InstanceDoc::from_grid(&inst, cell_limit).map_err(CliError::internal)
}

// --- verify / solve ---

fn parse_solution<T: serde::de::DeserializeOwned>(value: &Value) -> CliResult<T> {
    serde_json::from_value(value.clone())
        .map_err(|e| CliError::usage(format!("solution does not match the instance kind: {e}")))
}

fn check_any(inst: &AnyInstance, value: &Value) -> CliResult<Result<(), String>> {
    Ok(match inst {
        AnyInstance::Grid(g) => {
            check_solution(g, &parse_solution::<GridSolution>(value)?).map_err(|r| r.to_string())
        }
        AnyInstance::Line(l) => check_line_solution(l, &parse_solution::<LineSolution>(value)?)
            .map_err(|r| r.to_string()),
        AnyInstance::Potential(p) => {
            check_potential_solution(p, &parse_solution::<PotentialSolution>(value)?)
        }
    })
}

fn cmd_verify(instance: &Path, solution: &Path) -> CliResult<()> {
    let inst = load_any(instance)?;
    let value = read_json(solution)?;
    match check_any(&inst, &value)? {
        Ok(()) => {
            println!("accept");
            Ok(())
        }
        Err(reason) => Err(CliError::Reject(reason)),
    }
}

fn solve_any(inst: &AnyInstance, mode: SolveMode, cell_limit: usize) -> CliResult<Vec<Value>> {
    let to_values = |it: Vec<Value>| it;
    match inst {
        AnyInstance::Grid(g) => {
            let sols = solve_brute_force(g, mode, cell_limit).map_err(CliError::internal)?;
            Ok(to_values(sols.iter().map(|s| serde_json::to_value(s).unwrap()).collect()))
        }
        AnyInstance::Line(l) => {
            let mut sols = brute_force_solve_line(l);
            if mode == SolveMode::First {
                sols.truncate(1);
            }
            Ok(sols.iter().map(|s| serde_json::to_value(s).unwrap()).collect())
        }
        AnyInstance::Potential(p) => {
            let mut sols = brute_force_solve_potential(p);
            if mode == SolveMode::First {
                sols.truncate(1);
            }
            Ok(sols.iter().map(|s| serde_json::to_value(s).unwrap()).collect())
        }
    }
}

fn cmd_solve(instance: &Path, all: bool, out: Option<&Path>, cell_limit: usize) -> CliResult<()> {
    let inst = load_any(instance)?;
    let mode = if all { SolveMode::All } else { SolveMode::First };
    let sols = solve_any(&inst, mode, cell_limit)?;
    if sols.is_empty() {
        return Err(CliError::Reject("instance has no solutions".to_string()));
    }
    write_text(out, &pretty(&Value::Array(sols)))
}

// --- reduce / map-back / certify ---

/// A forward-applied reduction, homogenized over instance kinds: the output
/// document plus a closure pulling a target solution (as JSON) back to a
/// verified source solution (as JSON).
struct Applied {
    output_doc: InstanceDoc,
    output: AnyInstance,
    pull: Box<dyn Fn(&Value) -> CliResult<Value>>,
}

fn reject_if(check: Result<(), String>, context: &str) -> CliResult<()> {
    check.map_err(|r| CliError::Reject(format!("{context}: {r}")))
}

fn surplus_by_name(name: &str) -> CliResult<&'static SurplusFn> {
    match name {
        "square" => Ok(&SURPLUS_SQUARE),
        "succ" => Ok(&SURPLUS_SUCC),
        "double" => Ok(&SURPLUS_DOUBLE),
        other => Err(CliError::Usage(format!("unknown surplus {other:?}"))),
    }
}

fn require<T>(opt: Option<T>, flag: &str) -> CliResult<T> {
    opt.ok_or_else(|| CliError::Usage(format!("--{flag} is required for this reduction")))
}

fn apply_reduction(spec: &ReduceSpec, cell_limit: usize) -> CliResult<Applied> {
    let companion = |kind: &str| -> CliResult<&PathBuf> {
        spec.companion
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("--companion ({kind}) is required")))
    };

    // Grid-to-grid reductions share one wiring.
    let grid_applied = |input: GridInstance,
                        result: Result<
        (GridInstance, tfgrid::reductions::GridPullBack),
        tfgrid::reductions::ReductionError,
    >|
     -> CliResult<Applied> {
        let (out, pull) = result.map_err(CliError::usage)?;
        let output_doc = InstanceDoc::from_grid(&out, cell_limit).map_err(CliError::internal)?;
        let out_for_pull = out.clone();
        Ok(Applied {
            output_doc,
            output: AnyInstance::Grid(out),
            pull: Box::new(move |value| {
                let sol: GridSolution = parse_solution(value)?;
                reject_if(
                    check_solution(&out_for_pull, &sol).map_err(|r| r.to_string()),
                    "target solution",
                )?;
                let back = pull(&sol).map_err(CliError::internal)?;
                reject_if(
                    check_solution(&input, &back).map_err(|r| r.to_string()),
                    "pulled-back solution",
                )?;
                Ok(serde_json::to_value(&back).unwrap())
            }),
        })
    };

    // Meet-producing reductions share another.
    let meet_applied = |meet: MeetInstance,
                        result: Result<
        (GridInstance, tfgrid::reductions::MeetPullBack),
        tfgrid::reductions::ReductionError,
    >|
     -> CliResult<Applied> {
        let (out, pull) = result.map_err(CliError::usage)?;
        let output_doc = InstanceDoc::from_grid(&out, cell_limit).map_err(CliError::internal)?;
        let out_for_pull = out.clone();
        Ok(Applied {
            output_doc,
            output: AnyInstance::Grid(out),
            pull: Box::new(move |value| {
                let sol: GridSolution = parse_solution(value)?;
                reject_if(
                    check_solution(&out_for_pull, &sol).map_err(|r| r.to_string()),
                    "target solution",
                )?;
                let back = pull(&sol).map_err(CliError::internal)?;
                reject_if(check_meet_solution(&meet, &back), "pulled-back solution")?;
                Ok(serde_json::to_value(&back).unwrap())
            }),
        })
    };

    match spec.reduction.as_str() {
        "pad" => {
            let input = load_grid(&spec.input)?;
            let tn = require(spec.target_rows, "target-rows")?;
            let tm = require(spec.target_cols, "target-cols")?;
            let result = pad_instance(&input, tn, tm);
            grid_applied(input, result)
        }
        "php-to-path" => {
            let input = load_grid(&spec.input)?;
            let f = surplus_by_name(require(spec.surplus.as_deref(), "surplus")?)?;
            let flavor = match require(spec.flavor.as_deref(), "flavor")? {
                "inj" => PathPhpFlavor::Inj,
                "bij" => PathPhpFlavor::Bij,
                "collision" => PathPhpFlavor::Collision,
                other => return Err(CliError::Usage(format!("unknown flavor {other:?}"))),
            };
            let result = php_to_path_php(&input, f, flavor);
            grid_applied(input, result)
        }
        "path-to-php" => {
            let input = load_grid(&spec.input)?;
            let result = path_php_to_php(&input);
            grid_applied(input, result)
        }
        "transfer" => {
            let input = load_grid(&spec.input)?;
            let result = transfer_sources_to_first_column(&input);
            grid_applied(input, result)
        }
        "pigeon" => {
            let input = load_grid(&spec.input)?;
            let result = grid_collision_to_pigeon_circuit(&input);
            grid_applied(input, result)
        }
        "merge-free" => {
            let input = load_grid(&spec.input)?;
            let gadget = load_grid(companion("gadget grid")?)?;
            let flavor = match require(spec.flavor.as_deref(), "flavor")? {
                "inj" => GadgetFlavor::Inj,
                "collision" => GadgetFlavor::Collision,
                other => return Err(CliError::Usage(format!("unknown flavor {other:?}"))),
            };
            let result = sod_meet_gadget_to_merge_free(&input, &gadget, flavor);
            meet_applied(MeetInstance::of_grids(input, gadget), result)
        }
        "eopl" => {
            let input = load_grid(&spec.input)?;
            let gadget = load_grid(companion("bijective two-column grid")?)?;
            let result = sopl_meet_bijphp_to_eopl(&input, &gadget);
            meet_applied(MeetInstance::of_grids(input, gadget), result)
        }
        "php-to-line" => {
            let input = load_grid(&spec.input)?;
            let (line, pull) = php_to_line(&input).map_err(CliError::usage)?;
            let line_for_pull = line.clone();
            Ok(Applied {
                output_doc: InstanceDoc::from_line(&line),
                output: AnyInstance::Line(line),
                pull: Box::new(move |value| {
                    let sol: LineSolution = parse_solution(value)?;
                    reject_if(
                        check_line_solution(&line_for_pull, &sol).map_err(|r| r.to_string()),
                        "target solution",
                    )?;
                    let back = pull(&sol).map_err(CliError::internal)?;
                    reject_if(
                        check_solution(&input, &back).map_err(|r| r.to_string()),
                        "pulled-back solution",
                    )?;
                    Ok(serde_json::to_value(&back).unwrap())
                }),
            })
        }
        "line-to-php" => {
            let input = load_line(&spec.input)?;
            let (out, pull) = line_to_php(&input).map_err(CliError::usage)?;
            let output_doc = InstanceDoc::from_grid(&out, cell_limit).map_err(CliError::internal)?;
            let out_for_pull = out.clone();
            Ok(Applied {
                output_doc,
                output: AnyInstance::Grid(out),
                pull: Box::new(move |value| {
                    let sol: GridSolution = parse_solution(value)?;
                    reject_if(
                        check_solution(&out_for_pull, &sol).map_err(|r| r.to_string()),
                        "target solution",
                    )?;
                    let back = pull(&sol).map_err(CliError::internal)?;
                    reject_if(
                        check_line_solution(&input, &back).map_err(|r| r.to_string()),
                        "pulled-back solution",
                    )?;
                    Ok(serde_json::to_value(&back).unwrap())
                }),
            })
        }
        "grid-to-potential" => {
            let input = load_grid(&spec.input)?;
            let (pi, pull) = grid_to_potential(&input).map_err(CliError::usage)?;
            let pi_for_pull = pi.clone();
            Ok(Applied {
                output_doc: InstanceDoc::from_potential(&pi),
                output: AnyInstance::Potential(pi),
                pull: Box::new(move |value| {
                    let sol: PotentialSolution = parse_solution(value)?;
                    reject_if(check_potential_solution(&pi_for_pull, &sol), "target solution")?;
                    let back = pull(&sol).map_err(CliError::internal)?;
                    reject_if(
                        check_solution(&input, &back).map_err(|r| r.to_string()),
                        "pulled-back solution",
                    )?;
                    Ok(serde_json::to_value(&back).unwrap())
                }),
            })
        }
        "potential-to-grid" => {
            let input = load_potential(&spec.input)?;
            let (out, pull) = potential_to_grid(&input).map_err(CliError::usage)?;
            let output_doc = InstanceDoc::from_grid(&out, cell_limit).map_err(CliError::internal)?;
            let out_for_pull = out.clone();
            Ok(Applied {
                output_doc,
                output: AnyInstance::Grid(out),
                pull: Box::new(move |value| {
                    let sol: GridSolution = parse_solution(value)?;
                    reject_if(
                        check_solution(&out_for_pull, &sol).map_err(|r| r.to_string()),
                        "target solution",
                    )?;
                    let back = pull(&sol).map_err(CliError::internal)?;
                    reject_if(check_potential_solution(&input, &back), "pulled-back solution")?;
                    Ok(serde_json::to_value(&back).unwrap())
                }),
            })
        }
        name @ ("eol-to-eopl" | "sol-to-sopl" | "collision-to-merge-free") => {
            let kind: PipelineKind = name.parse().map_err(CliError::Usage)?;
            let input = load_grid(&spec.input)?;
            let part = match kind {
                PipelineKind::CollisionToMergeFree => {
                    MeetPart::Grid(load_grid(companion("gadget grid")?)?)
                }
                _ => MeetPart::Line(load_line(companion("line instance")?)?),
            };
            let pipeline = build_pipeline(kind, &input, &part).map_err(CliError::usage)?;
            let out = pipeline.output.clone();
            let output_doc = InstanceDoc::from_grid(&out, cell_limit).map_err(CliError::internal)?;
            Ok(Applied {
                output_doc,
                output: AnyInstance::Grid(out.clone()),
                pull: Box::new(move |value| {
                    let sol: GridSolution = parse_solution(value)?;
                    reject_if(
                        check_solution(&out, &sol).map_err(|r| r.to_string()),
                        "target solution",
                    )?;
                    let back = pipeline.pull_back(&sol).map_err(CliError::internal)?;
                    reject_if(check_meet_solution(&pipeline.source, &back), "pulled-back solution")?;
                    Ok(serde_json::to_value(&back).unwrap())
                }),
            })
        }
        other => Err(CliError::Usage(format!("unknown reduction {other:?}"))),
    }
}

fn cmd_reduce(
    spec: ReduceSpec,
    out: &Path,
    lineage: Option<&Path>,
    cell_limit: usize,
) -> CliResult<()> {
    let applied = apply_reduction(&spec, cell_limit)?;
    emit_instance(out, &applied.output_doc)?;
    if let Some(lineage_path) = lineage {
        let record = Lineage { format_version: FORMAT_VERSION, spec };
        let mut text = serde_json::to_string_pretty(&record).map_err(CliError::internal)?;
        text.push('\n');
        std::fs::write(lineage_path, text).map_err(CliError::internal)?;
    }
    Ok(())
}

fn cmd_map_back(
    lineage: &Path,
    solution: &Path,
    out: Option<&Path>,
    cell_limit: usize,
) -> CliResult<()> {
    let record: Lineage = serde_json::from_value(read_json(lineage)?)
        .map_err(|e| CliError::usage(format!("{}: {e}", lineage.display())))?;
    if record.format_version != FORMAT_VERSION {
        return Err(CliError::usage(format!(
            "unsupported lineage version {}",
            record.format_version
        )));
    }
    let applied = apply_reduction(&record.spec, cell_limit)?;
    let value = read_json(solution)?;
    let back = (applied.pull)(&value)?;
    write_text(out, &pretty(&back))
}

fn cmd_certify(spec: ReduceSpec, cell_limit: usize) -> CliResult<()> {
    let applied = apply_reduction(&spec, cell_limit)?;
    let sols = solve_any(&applied.output, SolveMode::All, cell_limit)?;
    if sols.is_empty() {
        return Err(CliError::Reject("output has no solutions (totality violated)".to_string()));
    }
    let mut failures = 0usize;
    for sol in &sols {
        match (applied.pull)(sol) {
            Ok(_) => {}
            Err(CliError::Reject(msg)) | Err(CliError::Internal(msg)) => {
                failures += 1;
                eprintln!("fail: {sol}: {msg}");
            }
            Err(e) => return Err(e),
        }
    }
    println!(
        "{}: {} solutions checked, {} failures",
        spec.reduction,
        sols.len(),
        failures
    );
    if failures > 0 {
        return Err(CliError::Reject(format!("{failures} pull-back failures")));
    }
    Ok(())
}

// --- render ---

fn cmd_render(
    instance: &Path,
    highlight_sinks: bool,
    out: Option<&Path>,
    cell_limit: usize,
) -> CliResult<()> {
    let inst = load_grid(instance)?;
    let opts = tfgrid::render::RenderOptions { highlight_sinks };
    let dot = tfgrid::render::render_dot(&inst, &opts, cell_limit).map_err(CliError::internal)?;
    write_text(out, &dot)
}
