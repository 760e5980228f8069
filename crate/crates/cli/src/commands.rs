use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dtomo_core::ghost::elementary_ghost;
use dtomo_core::hull::{face_audit, hull3, project_hull, BorderFan, GenLabel};
use dtomo_core::lattice::forward_project;
use dtomo_core::order2d::WeightTable;
use dtomo_core::recon::{reconstruct_2d, reconstruct_3d, verify, FreeChoicePolicy, ReconResult};
use dtomo_core::{Axis, Direction3, LineSumTable, OpCounter, Value};
use num_bigint::BigInt;
use num_rational::Ratio;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::bench::{self, BenchRecord};
use crate::format::{
    directions_of, grid_of, values_of, FreeValuesFile, InstanceFile, LineSumFile, Rational,
    ReconstructionFile, ValuesOnly,
};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "dtomo", version, about = "Exact reconstruction of lattice functions from line sums")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the line sums of an instance with values.
    Project(ProjectArgs),
    /// Reconstruct a function from a line-sum file.
    Reconstruct(ReconstructArgs),
    /// Print the elementary ghost of a direction set.
    Ghost(GhostArgs),
    /// Print the hull of the switching union and its shadows.
    Hull(HullArgs),
    /// Print the weight map and solving order of a 2D border fan.
    Weights(WeightsArgs),
    /// Check values against a line-sum file.
    Verify(VerifyArgs),
    /// Run the operation-count benchmark.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Geometry given on the command line, overriding the input file.
#[derive(Debug, Args)]
pub struct Geometry {
    /// Grid extents, e.g. `5,5,6`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Directions, e.g. `"1,1,2;1,-2,1"`.
    #[arg(long, allow_hyphen_values = true)]
    pub dirs: Option<String>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Instance file with values.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub geometry: Geometry,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    /// Line-sum file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Values for the free positions; all zero when absent.
    #[arg(long)]
    pub free_values: Option<PathBuf>,
    /// Leave the timestamp out of the output.
    #[arg(long)]
    pub no_timestamp: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct GhostArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub dirs: String,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct HullArgs {
    /// Instance file; `--grid` and `--dirs` may replace or override it.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub geometry: Geometry,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    /// Fan directions `(a, b)` with `a > 0`, `b < 0`, in any order.
    #[arg(long, allow_hyphen_values = true)]
    pub dirs: String,
    /// Page extents; defaults to the bounding box of the border points.
    #[arg(long)]
    pub grid: Option<String>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Line-sum file.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Instance or reconstruction file with values.
    #[arg(long)]
    pub values: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Cube sides of the size sweep.
    #[arg(long, value_delimiter = ',', default_values_t = bench::CUBE_SIDES)]
    pub sizes: Vec<usize>,
    /// Direction counts of the d sweep.
    #[arg(long, value_delimiter = ',', default_values_t = bench::D_VALUES)]
    pub d_values: Vec<usize>,
    /// Cube side of the d sweep.
    #[arg(long, default_value_t = bench::D_SWEEP_SIDE)]
    pub side: usize,
    /// Direction count of the size sweep.
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Sweep::Both)]
    pub sweep: Sweep,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sweep {
    Size,
    D,
    Both,
}

/// Runs one command. JSON goes to `--out` or `stdout`, human-readable
/// reports to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Project(a) => project(a, stdout),
        Command::Reconstruct(a) => reconstruct(a, stdout, stderr),
        Command::Ghost(a) => ghost(a, stdout),
        Command::Hull(a) => hull(a, stdout),
        Command::Weights(a) => weights(a, stdout),
        Command::Verify(a) => verify_cmd(a, stdout, stderr),
        Command::Bench(a) => bench_cmd(a, stdout, stderr),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| malformed(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(out: &Output, value: &T, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut text = serde_json::to_string(value).expect("serializable");
    text.push('\n');
    match &out.out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| usage(format!("cannot write output: {e}"))),
    }
}

/// Parses `5,5,6`.
pub fn parse_grid(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| usage(format!("bad grid extent {t:?} in {s:?}"))))
        .collect()
}

/// Parses `"1,1,2;1,-2,1"`.
pub fn parse_dirs(s: &str) -> Result<Vec<Vec<i64>>, CliError> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            t.split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| usage(format!("bad direction component {c:?} in {s:?}"))))
                .collect()
        })
        .collect()
}

fn geometry(file: Option<InstanceFile>, g: &Geometry) -> Result<InstanceFile, CliError> {
    let mut inst = file.unwrap_or(InstanceFile { grid: Vec::new(), directions: Vec::new(), values: None });
    if let Some(s) = &g.grid {
        inst.grid = parse_grid(s)?;
    }
    if let Some(s) = &g.dirs {
        inst.directions = parse_dirs(s)?;
    }
    if inst.grid.is_empty() || inst.directions.is_empty() {
        return Err(usage("grid and directions are required"));
    }
    Ok(inst)
}

fn project(a: ProjectArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let inst = geometry(Some(read_json(&a.input)?), &a.geometry)?;
    let Some(values) = &inst.values else {
        return Err(usage("the instance has no values to project"));
    };
    let file = match inst.grid.len() {
        2 => project_n::<2>(&inst, values)?,
        3 => project_n::<3>(&inst, values)?,
        k => return Err(malformed(format!("grids must be 2D or 3D, got {k} extents"))),
    };
    emit(&a.output, &file, stdout)
}

fn project_n<const N: usize>(inst: &InstanceFile, values: &[Rational]) -> Result<LineSumFile, CliError> {
    let grid = grid_of::<N>(&inst.grid)?;
    let dirs = directions_of::<N>(&inst.directions)?;
    let values = values_of(values, grid.len())?;
    Ok(LineSumFile::from_table(&forward_project(&grid, &values, &dirs)?))
}

fn policy<const N: usize>(path: Option<&Path>) -> Result<FreeChoicePolicy<N>, CliError> {
    let Some(path) = path else {
        return Ok(FreeChoicePolicy::Default);
    };
    let file: FreeValuesFile = read_json(path)?;
    let list = file
        .free_values
        .into_iter()
        .map(|f| {
            let x: [usize; N] = f
                .position
                .as_slice()
                .try_into()
                .map_err(|_| malformed(format!("free position {:?} should have {N} coordinates", f.position)))?;
            Ok((x, f.value.0))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(FreeChoicePolicy::Explicit(list))
}

/// Replaces the direction index of an inconsistency by the direction.
fn name_line<const N: usize>(table: &LineSumTable<N>, e: dtomo_core::Error) -> CliError {
    match e {
        dtomo_core::Error::Inconsistent { direction, base } => CliError::Inconsistent(format!(
            "line in direction {:?} with base point {:?}",
            table.directions()[direction],
            base
        )),
        e => e.into(),
    }
}

fn recon_file<const N: usize>(file: &LineSumFile, r: &ReconResult<N>, timestamp: Option<u64>) -> ReconstructionFile {
    ReconstructionFile {
        grid: file.grid.clone(),
        directions: file.directions.clone(),
        values: r.values.iter().cloned().map(Rational).collect(),
        free_choices: r.free_count(),
        free_positions: r.free_positions.iter().map(|x| x.to_vec()).collect(),
        provenance: r.provenance.iter().map(|p| p.code()).collect(),
        op_counts: r.ops.into(),
        timestamp,
    }
}

fn reconstruct(a: ReconstructArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let file: LineSumFile = read_json(&a.input)?;
    let timestamp = (!a.no_timestamp)
        .then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
    let free = a.free_values.as_deref();
    let out = match file.grid.len() {
        2 => {
            let table = file.to_table::<2>()?;
            let r = reconstruct_2d(&table, &policy(free)?).map_err(|e| name_line(&table, e))?;
            recon_file(&file, &r, timestamp)
        }
        3 => {
            let table = file.to_table::<3>()?;
            let r = reconstruct_3d(&table, &policy(free)?).map_err(|e| name_line(&table, e))?;
            recon_file(&file, &r, timestamp)
        }
        k => return Err(malformed(format!("grids must be 2D or 3D, got {k} extents"))),
    };
    emit(&a.output, &out, stdout)?;
    let _ = write_report(&out, stderr);
    Ok(())
}

fn write_report(r: &ReconstructionFile, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "free choices: {}", r.free_choices)?;
    for x in &r.free_positions {
        writeln!(w, "  free position {x:?}")?;
    }
    let c = &r.op_counts;
    writeln!(
        w,
        "operations: {} (add/sub {}, mul/div {}, comparisons {}, assignments {}); value-path mul/div {}",
        c.total, c.add_sub, c.mul_div, c.comparisons, c.assignments, c.value_mul_div
    )
}

#[derive(Debug, Serialize)]
struct GhostPoint {
    point: Vec<i64>,
    value: i64,
}

#[derive(Debug, Serialize)]
struct GhostFile {
    directions: Vec<Vec<i64>>,
    anchor: Vec<i64>,
    extent: Vec<i64>,
    support: Vec<GhostPoint>,
}

fn ghost(a: GhostArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let dirs = parse_dirs(&a.dirs)?;
    let file = match dirs.first().map(Vec::len) {
        Some(2) => ghost_n::<2>(&dirs)?,
        Some(3) => ghost_n::<3>(&dirs)?,
        _ => return Err(usage("directions must all have 2 or 3 components")),
    };
    emit(&a.output, &file, stdout)
}

fn ghost_n<const N: usize>(dirs: &[Vec<i64>]) -> Result<GhostFile, CliError> {
    let arr = dirs
        .iter()
        .map(|d| <[i64; N]>::try_from(d.as_slice()).map_err(|_| usage("directions must all have the same length")))
        .collect::<Result<Vec<_>, _>>()?;
    let g = elementary_ghost(&arr)?;
    Ok(GhostFile {
        directions: dirs.to_vec(),
        anchor: g.anchor().to_vec(),
        extent: g.extent().to_vec(),
        support: g.values().iter().map(|(x, &v)| GhostPoint { point: x.to_vec(), value: v }).collect(),
    })
}

#[derive(Debug, Serialize)]
struct GeneratorOut {
    vector: Vec<i64>,
    labels: Vec<String>,
}

#[derive(Debug, Serialize)]
struct FaceOut {
    vertices: Vec<[i64; 3]>,
    edges: Vec<[i64; 3]>,
}

#[derive(Debug, Serialize)]
struct ShadowOut {
    axis: &'static str,
    vertices: Vec<[i64; 2]>,
    exterior: Vec<[usize; 2]>,
}

#[derive(Debug, Serialize)]
struct HullFile {
    grid: Vec<usize>,
    directions: Vec<Vec<i64>>,
    empty: bool,
    vertices: Vec<[i64; 3]>,
    generators: Vec<GeneratorOut>,
    faces: Vec<FaceOut>,
    faces_ok: bool,
    shadows: Vec<ShadowOut>,
}

fn axis_name(a: Axis) -> &'static str {
    match a {
        Axis::X => "x",
        Axis::Y => "y",
        Axis::Z => "z",
    }
}

fn label(l: &GenLabel) -> String {
    match l {
        GenLabel::Direction(h) => format!("d{h}"),
        GenLabel::Axis(a) => axis_name(*a).to_string(),
    }
}

fn hull(a: HullArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let file = a.input.as_deref().map(read_json::<InstanceFile>).transpose()?;
    let inst = geometry(file, &a.geometry)?;
    let grid = grid_of::<3>(&inst.grid)?;
    let dirs: Vec<Direction3> = directions_of::<3>(&inst.directions)?
        .into_iter()
        .map(|v| Direction3::new(v[0], v[1], v[2]))
        .collect::<Result<_, _>>()?;
    let h = hull3(&grid, &dirs);
    let ext = grid.extents();
    let shadows = Axis::ALL
        .iter()
        .map(|&axis| {
            let s = project_hull(&h, axis);
            let [i, j] = axis.kept();
            ShadowOut { axis: axis_name(axis), vertices: s.vertices().to_vec(), exterior: s.exterior([ext[i], ext[j]]) }
        })
        .collect();
    let out = HullFile {
        grid: inst.grid.clone(),
        directions: dirs.iter().map(|d| d.vector().to_vec()).collect(),
        empty: h.is_empty(),
        vertices: h.vertices().to_vec(),
        generators: h
            .generators()
            .iter()
            .map(|g| GeneratorOut { vector: g.vector.to_vec(), labels: g.labels.iter().map(label).collect() })
            .collect(),
        faces: h.faces().iter().map(|f| FaceOut { vertices: f.vertices.to_vec(), edges: f.edges.to_vec() }).collect(),
        faces_ok: face_audit(&h, &dirs).passed(),
        shadows,
    };
    emit(&a.output, &out, stdout)
}

#[derive(Debug, Serialize)]
struct WeightEntry {
    point: [usize; 2],
    weight: Rational,
    triangle: usize,
    /// 1-based position in the solving order; absent for points of weight
    /// 1 or more.
    #[serde(skip_serializing_if = "Option::is_none")]
    order: Option<usize>,
}

#[derive(Debug, Serialize)]
struct WeightsFile {
    directions: Vec<[i64; 2]>,
    border_points: Vec<[i64; 2]>,
    extent: [usize; 2],
    weights: Vec<WeightEntry>,
}

fn ratio(r: Ratio<i128>) -> Rational {
    Rational(Value::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
}

fn weights(a: WeightsArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let raw = parse_dirs(&a.dirs)?;
    let dirs = raw
        .iter()
        .map(|d| <[i64; 2]>::try_from(d.as_slice()).map_err(|_| usage("fan directions have 2 components")))
        .collect::<Result<Vec<_>, _>>()?;
    let tagged: Vec<([i64; 2], usize)> = dirs.iter().copied().zip(0..).collect();
    let fan = BorderFan::from_tagged(&tagged, true).map_err(|e| usage(e.to_string()))?;
    let pts = fan.border_points().to_vec();
    let extent = match &a.grid {
        Some(s) => <[usize; 2]>::try_from(parse_grid(s)?.as_slice()).map_err(|_| usage("weight pages are 2D"))?,
        None => [pts[0][0] as usize + 1, pts[pts.len() - 1][1] as usize + 1],
    };
    if extent.contains(&0) {
        return Err(usage("page extents must be positive"));
    }
    let mut ops = OpCounter::default();
    let table = WeightTable::build(&fan, extent, &mut ops)?;
    let mut rank = vec![None; extent[0] * extent[1]];
    for (i, x) in table.order(false, &mut ops).into_iter().enumerate() {
        rank[x[0] + extent[0] * x[1]] = Some(i + 1);
    }
    let mut entries = Vec::with_capacity(rank.len());
    for q in 0..extent[1] {
        for p in 0..extent[0] {
            let x = [p, q];
            entries.push(WeightEntry {
                point: x,
                weight: ratio(table.weight(x)),
                triangle: table.segment(x) + 1,
                order: rank[p + extent[0] * q],
            });
        }
    }
    emit(&a.output, &WeightsFile { directions: dirs, border_points: pts, extent, weights: entries }, stdout)
}

#[derive(Debug, Serialize)]
struct MismatchOut {
    direction: Vec<i64>,
    base: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct VerifyFile {
    passed: bool,
    max_discrepancy: Vec<Rational>,
    mismatched: Vec<MismatchOut>,
}

fn verify_cmd(a: VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let file: LineSumFile = read_json(&a.input)?;
    let values: ValuesOnly = read_json(&a.values)?;
    let out = match file.grid.len() {
        2 => verify_n::<2>(&file, &values.values)?,
        3 => verify_n::<3>(&file, &values.values)?,
        k => return Err(malformed(format!("grids must be 2D or 3D, got {k} extents"))),
    };
    emit(&a.output, &out, stdout)?;
    if out.passed {
        let _ = writeln!(stderr, "all line sums match");
        Ok(())
    } else {
        let first = &out.mismatched[0];
        Err(CliError::Inconsistent(format!(
            "{} lines differ, first in direction {:?} with base point {:?}",
            out.mismatched.len(),
            first.direction,
            first.base
        )))
    }
}

fn verify_n<const N: usize>(file: &LineSumFile, values: &[Rational]) -> Result<VerifyFile, CliError> {
    let table = file.to_table::<N>()?;
    let values = values_of(values, table.grid().len())?;
    let report = verify(&table, &values)?;
    Ok(VerifyFile {
        passed: report.passed(),
        max_discrepancy: report.max_discrepancy.into_iter().map(Rational).collect(),
        mismatched: report
            .mismatched
            .iter()
            .map(|k| MismatchOut { direction: table.directions()[k.direction].to_vec(), base: k.base.to_vec() })
            .collect(),
    })
}

#[derive(Debug, Serialize)]
struct BenchFile {
    records: Vec<BenchRecord>,
}

fn bench_cmd(a: BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    if a.d == 0 || a.d > bench::BENCH_DIRS.len() || a.d_values.iter().any(|&d| d == 0 || d > bench::BENCH_DIRS.len()) {
        return Err(usage(format!("direction counts must lie in 1..={}", bench::BENCH_DIRS.len())));
    }
    if a.side == 0 || a.sizes.contains(&0) {
        return Err(usage("cube sides must be positive"));
    }
    let mut records = Vec::new();
    if a.sweep != Sweep::D {
        records.extend(bench::size_sweep(&a.sizes, a.d, a.seed)?);
    }
    if a.sweep != Sweep::Size {
        records.extend(bench::d_sweep(&a.d_values, a.side, a.seed)?);
    }
    let _ = bench::write_table(&records, stderr);
    emit(&a.output, &BenchFile { records }, stdout)
}
