//! Command execution: input resolution, dispatch, CSV/JSON emission.
//!
//! Every evaluation becomes one CSV row with the fixed columns
//! `kind,n,t,method,value,excess,error_bound,wall_time_ns` (numbers printed
//! with 17 significant digits; empty cell when a column does not apply).
//! Each command additionally produces a small JSON summary with verdicts.
//! Output files are written atomically (temp file + rename), so an
//! interrupted run never leaves a truncated report behind.

use std::io::Write as IoWrite;
use std::path::{Path, PathBuf};
use std::time::Instant;

use equidist::{
    arc_discrepancy, bound_check, calibrate_c, energy_profile, gaussian_energy, generate,
    generate_circle, heat_energy, pair_count, read_points_file, star_discrepancy, theta_energy,
    theta_energy_fast, theta_energy_spectral, EnergyReport, GeneratedSet, PointSet, Sphere2,
    GAUSSIAN_TOL,
};
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::report;
use crate::CliError;

/// CLI invocation options (the flags).
#[derive(Clone, Debug)]
pub struct RunOpts {
    pub config: PathBuf,
    pub out: PathBuf,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
}

/// What a run produced, for the final status line.
#[derive(Debug)]
pub struct ExecOutcome {
    pub rows: usize,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

pub const CSV_HEADER: &str = "kind,n,t,method,value,excess,error_bound,wall_time_ns";

/// One CSV row; `None` renders as an empty cell.
struct Row {
    kind: String,
    n: usize,
    t: Option<f64>,
    method: String,
    value: f64,
    excess: Option<f64>,
    error_bound: Option<f64>,
    wall_time_ns: u128,
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

impl Row {
    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.kind,
            self.n,
            fmt_opt(self.t),
            self.method,
            fmt_f(self.value),
            fmt_opt(self.excess),
            fmt_opt(self.error_bound),
            self.wall_time_ns
        )
    }

    fn from_energy_report(kind: &str, r: &EnergyReport, elapsed_ns: u128) -> Row {
        Row {
            kind: kind.to_string(),
            n: r.n_points,
            t: Some(r.t),
            method: r.method.to_string(),
            value: r.energy,
            excess: Some(r.excess),
            error_bound: Some(r.error_bound),
            wall_time_ns: elapsed_ns,
        }
    }
}

/// A named circle family.
#[derive(Debug)]
struct Family {
    kind: String,
    pts: PointSet,
}

/// A named sphere family.
#[derive(Debug)]
struct SphereFamily {
    kind: String,
    pts: Vec<[f64; 3]>,
}

enum Input {
    Circle(Vec<Family>),
    Sphere(Vec<SphereFamily>),
}

fn resolve_input(cfg: &RunConfig, seed: Option<u64>) -> Result<Input, CliError> {
    if let Some(path) = &cfg.input.file {
        let set = read_points_file(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        return Ok(match set {
            GeneratedSet::Circle(pts) => {
                Input::Circle(vec![Family { kind: "file".into(), pts }])
            }
            GeneratedSet::Sphere(pts) => {
                Input::Sphere(vec![SphereFamily { kind: "file".into(), pts }])
            }
        });
    }
    let spec = cfg.input.generator(seed)?;
    let tag = spec.tag().to_string();
    if spec.is_sphere() {
        let mut fams = Vec::with_capacity(cfg.n_schedule.len());
        for &n in &cfg.n_schedule {
            match generate(&spec, n).map_err(CliError::from_math)? {
                GeneratedSet::Sphere(pts) => fams.push(SphereFamily { kind: tag.clone(), pts }),
                GeneratedSet::Circle(_) => unreachable!("sphere spec produced circle points"),
            }
        }
        Ok(Input::Sphere(fams))
    } else {
        let mut fams = Vec::with_capacity(cfg.n_schedule.len());
        for &n in &cfg.n_schedule {
            let pts = generate_circle(&spec, n).map_err(CliError::from_math)?;
            fams.push(Family { kind: tag.clone(), pts });
        }
        Ok(Input::Circle(fams))
    }
}

fn circle_only(input: Input, cmd: Command) -> Result<Vec<Family>, CliError> {
    match input {
        Input::Circle(fams) => Ok(fams),
        Input::Sphere(_) => Err(CliError::Config(format!(
            "command '{cmd}' needs circle points, got a sphere family"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Per-command handlers. Each returns the CSV rows plus a JSON summary string
// (typed structs serialized directly, so key order is fixed and the bytes
// are deterministic).

#[derive(Serialize)]
struct FloorVerdict {
    command: String,
    kind: String,
    method: String,
    evaluations: usize,
    /// Every value at or above its documented floor minus its error bound.
    floor_ok: bool,
}

fn run_energy(cfg: &RunConfig, input: Input) -> Result<(Vec<Row>, String), CliError> {
    let ts = cfg.t_schedule.as_ref().expect("validated");
    let tol = cfg.tolerances.energy;
    let mut rows = Vec::new();
    let mut floor_ok = true;
    let mut kind_tag = String::new();
    let method = cfg.method.as_str();
    match input {
        Input::Circle(fams) => {
            for fam in &fams {
                kind_tag = fam.kind.clone();
                for t in ts.times_for(fam.pts.len()) {
                    let start = Instant::now();
                    match method {
                        "gaussian" => {
                            let value = gaussian_energy(&fam.pts, t).map_err(CliError::from_math)?;
                            let ns = start.elapsed().as_nanos();
                            floor_ok &= value > 0.0;
                            rows.push(Row {
                                kind: fam.kind.clone(),
                                n: fam.pts.len(),
                                t: Some(t),
                                method: "gaussian".into(),
                                value,
                                excess: None,
                                error_bound: Some(GAUSSIAN_TOL),
                                wall_time_ns: ns,
                            });
                        }
                        _ => {
                            let r = match method {
                                "direct" => theta_energy(&fam.pts, t, tol),
                                "fast" => theta_energy_fast(&fam.pts, t, tol),
                                "spectral" => theta_energy_spectral(&fam.pts, t, tol),
                                other => unreachable!("method '{other}' passed validation"),
                            }
                            .map_err(CliError::from_math)?;
                            let ns = start.elapsed().as_nanos();
                            floor_ok &= r.energy >= 1.0 - r.error_bound;
                            rows.push(Row::from_energy_report(&fam.kind, &r, ns));
                        }
                    }
                }
            }
        }
        Input::Sphere(fams) => {
            if method == "spectral" || method == "gaussian" {
                return Err(CliError::Config(format!(
                    "sphere energy supports methods 'direct' and 'fast', not '{method}'"
                )));
            }
            for fam in &fams {
                kind_tag = fam.kind.clone();
                for t in ts.times_for(fam.pts.len()) {
                    let start = Instant::now();
                    let r = heat_energy(&Sphere2, &fam.pts, t, tol).map_err(CliError::from_math)?;
                    let ns = start.elapsed().as_nanos();
                    let floor = 1.0 / (4.0 * std::f64::consts::PI);
                    floor_ok &= r.energy >= floor - r.error_bound;
                    rows.push(Row {
                        kind: fam.kind.clone(),
                        n: r.n_points,
                        t: Some(r.t),
                        method: r.method.to_string(),
                        value: r.energy,
                        excess: Some(r.excess),
                        error_bound: Some(r.error_bound),
                        wall_time_ns: ns,
                    });
                }
            }
        }
    }
    let summary = FloorVerdict {
        command: "energy".into(),
        kind: kind_tag,
        method: cfg.method.clone(),
        evaluations: rows.len(),
        floor_ok,
    };
    Ok((rows, to_pretty_json(&summary)?))
}

#[derive(Serialize)]
struct ProfileSummaryPerN {
    n: usize,
    t_first: f64,
    t_last: f64,
    energy_first: f64,
    energy_last: f64,
}

#[derive(Serialize)]
struct ProfileSummary {
    command: String,
    kind: String,
    /// The profile routine verifies the nonincreasing-in-t law itself and
    /// fails the run otherwise, so a written summary always says true.
    monotone: bool,
    per_n: Vec<ProfileSummaryPerN>,
}

fn run_profile(cfg: &RunConfig, input: Input) -> Result<(Vec<Row>, String), CliError> {
    let fams = circle_only(input, cfg.command)?;
    let ts = cfg.t_schedule.as_ref().expect("validated");
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    let mut kind_tag = String::new();
    for fam in &fams {
        kind_tag = fam.kind.clone();
        let times = ts.times_for(fam.pts.len());
        let start = Instant::now();
        let reports = energy_profile(&fam.pts, &times).map_err(CliError::from_math)?;
        let ns = start.elapsed().as_nanos() / reports.len().max(1) as u128;
        for r in &reports {
            rows.push(Row::from_energy_report(&fam.kind, r, ns));
        }
        let first = reports.first().expect("nonempty validated schedule");
        let last = reports.last().expect("nonempty validated schedule");
        per_n.push(ProfileSummaryPerN {
            n: fam.pts.len(),
            t_first: first.t,
            t_last: last.t,
            energy_first: first.energy,
            energy_last: last.energy,
        });
    }
    let summary = ProfileSummary {
        command: "profile".into(),
        kind: kind_tag,
        monotone: true,
        per_n,
    };
    Ok((rows, to_pretty_json(&summary)?))
}

#[derive(Serialize)]
struct DiscrepancyPerN {
    n: usize,
    d_n: f64,
    star: f64,
    witness_arc: [f64; 2],
    witness_closed: bool,
}

#[derive(Serialize)]
struct DiscrepancySummary {
    command: String,
    kind: String,
    per_n: Vec<DiscrepancyPerN>,
    /// `star <= d_n <= 2 * star` held for every family.
    sandwich_ok: bool,
}

fn run_discrepancy(cfg: &RunConfig, input: Input) -> Result<(Vec<Row>, String), CliError> {
    let fams = circle_only(input, cfg.command)?;
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    let mut sandwich_ok = true;
    let mut kind_tag = String::new();
    for fam in &fams {
        kind_tag = fam.kind.clone();
        let start = Instant::now();
        let d = arc_discrepancy(&fam.pts);
        let ns_arc = start.elapsed().as_nanos();
        let start = Instant::now();
        let star = star_discrepancy(&fam.pts);
        let ns_star = start.elapsed().as_nanos();
        sandwich_ok &= star <= d.d_n && d.d_n <= 2.0 * star;
        rows.push(Row {
            kind: fam.kind.clone(),
            n: d.n_points,
            t: None,
            method: "arc".into(),
            value: d.d_n,
            excess: None,
            error_bound: Some(0.0),
            wall_time_ns: ns_arc,
        });
        rows.push(Row {
            kind: fam.kind.clone(),
            n: d.n_points,
            t: None,
            method: "star".into(),
            value: star,
            excess: None,
            error_bound: Some(0.0),
            wall_time_ns: ns_star,
        });
        per_n.push(DiscrepancyPerN {
            n: d.n_points,
            d_n: d.d_n,
            star,
            witness_arc: [d.witness_arc.0, d.witness_arc.1],
            witness_closed: d.witness_closed,
        });
    }
    let summary = DiscrepancySummary {
        command: "discrepancy".into(),
        kind: kind_tag,
        per_n,
        sandwich_ok,
    };
    Ok((rows, to_pretty_json(&summary)?))
}

#[derive(Serialize)]
struct PairCorrPerN {
    n: usize,
    s_grid: Vec<f64>,
    values: Vec<f64>,
    /// Deviation from the Poissonian line `2s`; only written in the
    /// Poissonian regime (alpha = 1, diagonal excluded).
    #[serde(skip_serializing_if = "Option::is_none")]
    max_abs_dev_from_2s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    poissonian_pass: Option<bool>,
}

#[derive(Serialize)]
struct PairCorrSummary {
    command: String,
    kind: String,
    alpha: f64,
    include_diagonal: bool,
    poissonian_tol: f64,
    per_n: Vec<PairCorrPerN>,
}

fn run_paircorr(cfg: &RunConfig, input: Input) -> Result<(Vec<Row>, String), CliError> {
    let fams = circle_only(input, cfg.command)?;
    let pc = &cfg.paircorr;
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    let mut kind_tag = String::new();
    for fam in &fams {
        kind_tag = fam.kind.clone();
        let mut values = Vec::with_capacity(pc.s_grid.len());
        for &s in &pc.s_grid {
            let start = Instant::now();
            let v = pair_count(&fam.pts, s, pc.alpha, pc.include_diagonal)
                .map_err(CliError::from_math)?;
            let ns = start.elapsed().as_nanos();
            let poissonian = pc.alpha == 1.0 && !pc.include_diagonal;
            rows.push(Row {
                kind: fam.kind.clone(),
                n: fam.pts.len(),
                t: Some(s),
                method: "paircorr".into(),
                value: v,
                excess: poissonian.then(|| v - 2.0 * s),
                error_bound: Some(0.0),
                wall_time_ns: ns,
            });
            values.push(v);
        }
        let dev = (pc.alpha == 1.0 && !pc.include_diagonal).then(|| {
            pc.s_grid
                .iter()
                .zip(&values)
                .map(|(&s, &v)| (v - 2.0 * s).abs())
                .fold(0.0f64, f64::max)
        });
        per_n.push(PairCorrPerN {
            n: fam.pts.len(),
            s_grid: pc.s_grid.clone(),
            values,
            max_abs_dev_from_2s: dev,
            poissonian_pass: dev.map(|d| d <= pc.poissonian_tol),
        });
    }
    let summary = PairCorrSummary {
        command: "paircorr".into(),
        kind: kind_tag,
        alpha: pc.alpha,
        include_diagonal: pc.include_diagonal,
        poissonian_tol: pc.poissonian_tol,
        per_n,
    };
    Ok((rows, to_pretty_json(&summary)?))
}

#[derive(Serialize)]
struct BoundPerN {
    n: usize,
    d_n: f64,
    t_star: f64,
    rhs: f64,
    holds: bool,
}

#[derive(Serialize)]
struct BoundSummary {
    command: String,
    kind: String,
    c: f64,
    c_source: String,
    per_n: Vec<BoundPerN>,
    all_hold: bool,
}

fn run_bound(cfg: &RunConfig, input: Input) -> Result<(Vec<Row>, String), CliError> {
    let fams = circle_only(input, cfg.command)?;
    let (c, c_source) = match cfg.bound.c {
        Some(c) => (c, "config"),
        None => {
            let members: Vec<PointSet> = fams.iter().map(|f| f.pts.clone()).collect();
            (calibrate_c(&members).map_err(CliError::from_math)?, "calibrated")
        }
    };
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    let mut all_hold = true;
    let mut kind_tag = String::new();
    for fam in &fams {
        kind_tag = fam.kind.clone();
        let start = Instant::now();
        let bc = bound_check(&fam.pts, c).map_err(CliError::from_math)?;
        let ns = start.elapsed().as_nanos();
        all_hold &= bc.holds;
        rows.push(Row {
            kind: fam.kind.clone(),
            n: fam.pts.len(),
            t: Some(bc.t_star),
            method: "bound".into(),
            value: bc.d_n,
            excess: Some(bc.rhs - bc.d_n * bc.d_n),
            error_bound: None,
            wall_time_ns: ns,
        });
        per_n.push(BoundPerN {
            n: fam.pts.len(),
            d_n: bc.d_n,
            t_star: bc.t_star,
            rhs: bc.rhs,
            holds: bc.holds,
        });
    }
    let summary = BoundSummary {
        command: "bound".into(),
        kind: kind_tag,
        c,
        c_source: c_source.into(),
        per_n,
        all_hold,
    };
    Ok((rows, to_pretty_json(&summary)?))
}

// ---------------------------------------------------------------------------
// Output plumbing.

fn to_pretty_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Internal(format!("json serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn resolve_out(out_dir: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        out_dir.join(path)
    }
}

/// Writes `bytes` to `path` through a temp file in the same directory plus
/// an atomic rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let io_err =
        |e: &dyn std::fmt::Display| CliError::Internal(format!("writing {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| io_err(&e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(&e))?;
    tmp.write_all(bytes).map_err(|e| io_err(&e))?;
    tmp.persist(path).map_err(|e| io_err(&e))?;
    Ok(())
}

fn render_csv(rows: &[Row]) -> String {
    let mut text = String::with_capacity(64 * (rows.len() + 1));
    text.push_str(CSV_HEADER);
    text.push('\n');
    for row in rows {
        text.push_str(&row.csv_line());
        text.push('\n');
    }
    text
}

/// Loads the config and runs it. CSV rows go to `output.csv` (stdout when
/// unset), the JSON summary to `output.json` when set; `report` writes its
/// JSON document to `output.json`.
pub fn execute(opts: &RunOpts) -> Result<ExecOutcome, CliError> {
    if let Some(k) = opts.threads {
        if k == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        // Ignore the error when a pool already exists (repeated in-process
        // calls); determinism does not depend on the pool size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    let cfg = RunConfig::load(&opts.config)?;

    if cfg.command == Command::Report {
        let doc = report::corollary_report(&cfg, opts.seed)?;
        let json_rel = cfg.output.json.as_ref().expect("validated: report needs output.json");
        let json_path = resolve_out(&opts.out, json_rel);
        write_atomic(&json_path, to_pretty_json(&doc)?.as_bytes())?;
        return Ok(ExecOutcome { rows: 0, csv: None, json: Some(json_path) });
    }

    let input = resolve_input(&cfg, opts.seed)?;
    let (rows, summary) = match cfg.command {
        Command::Energy => run_energy(&cfg, input)?,
        Command::Profile => run_profile(&cfg, input)?,
        Command::Discrepancy => run_discrepancy(&cfg, input)?,
        Command::Paircorr => run_paircorr(&cfg, input)?,
        Command::Bound => run_bound(&cfg, input)?,
        Command::Report => unreachable!("handled above"),
    };

    let csv_text = render_csv(&rows);
    let csv_path = cfg.output.csv.as_ref().map(|p| resolve_out(&opts.out, p));
    match &csv_path {
        Some(p) => write_atomic(p, csv_text.as_bytes())?,
        None => print!("{csv_text}"),
    }
    let json_path = cfg.output.json.as_ref().map(|p| resolve_out(&opts.out, p));
    if let Some(p) = &json_path {
        write_atomic(p, summary.as_bytes())?;
    }
    Ok(ExecOutcome { rows: rows.len(), csv: csv_path, json: json_path })
}
