//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 no bound state,
//! 3 verification failure.

use crate::eigensolver::{
    solve_batch, EigenCondition, EnergyBranch, RootResult, SolverConfig, SolverError,
};
use crate::morse_model::{MorsePotential, MorseProblem, SymmetryMode};
use crate::ode_oracle::{pekeris_error_report, shoot_near, DEFAULT_STEPS};
use crate::units_presets::{
    co_preset, convention_scan, to_internal, ConventionReport, MoleculePreset, UnitConvention,
    CO_TABLE,
};
use crate::wavefunctions::{component_at_r, default_quadrature, normalize, BoundState};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NO_ROOTS: i32 = 2;
pub const EXIT_VERIFY_FAIL: i32 = 3;

/// Relative tolerance between closed-form and shooting eigenvalues.
pub const VERIFY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Pdm,
    Pseudospin,
    Spin,
}

impl ModeKind {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "pdm" => Some(ModeKind::Pdm),
            "pseudospin" => Some(ModeKind::Pseudospin),
            "spin" => Some(ModeKind::Spin),
            _ => None,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            ModeKind::Pdm => "pdm",
            ModeKind::Pseudospin => "pseudospin",
            ModeKind::Spin => "spin",
        }
    }
}

/// Problem description. `depth`, `r0`, `width`, `m0` and `a_const` are in
/// eV, Å, Å⁻¹, amu and eV, converted through `convention`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: ModeKind,
    pub depth: f64,
    pub r0: f64,
    pub width: f64,
    pub m0: f64,
    pub a_const: Option<f64>,
    pub kappas: Vec<i32>,
    pub ns: Vec<u32>,
    pub convention: UnitConvention,
    pub tol: f64,
    pub condition: EigenCondition,
    pub branch: Option<EnergyBranch>,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let co = co_preset();
        Self {
            mode: ModeKind::Pdm,
            depth: co.d_ev,
            r0: co.r0_angstrom,
            width: co.a_width,
            m0: co.m0_amu,
            a_const: None,
            kappas: vec![-1, -2, -3, -4],
            ns: vec![0],
            convention: UnitConvention::RawNumbers,
            tol: SolverConfig::default().abs_tol,
            condition: EigenCondition::Normalizable,
            branch: None,
            out: None,
        }
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str) -> Result<Vec<T>, String> {
    let items: Vec<&str> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(format!("{key} list is empty"));
    }
    items
        .iter()
        .map(|s| s.parse::<T>().map_err(|_| format!("bad {key} entry '{s}'")))
        .collect()
}

fn parse_float(key: &str, value: &str) -> Result<f64, String> {
    value
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("{key} must be a finite number, got '{value}'"))
}

fn condition_from(s: &str) -> Option<EigenCondition> {
    match s {
        "normalizable" => Some(EigenCondition::Normalizable),
        "printed" => Some(EigenCondition::Printed),
        _ => None,
    }
}

fn branch_from(s: &str) -> Option<Option<EnergyBranch>> {
    match s {
        "auto" => Some(None),
        "negative" => Some(Some(EnergyBranch::Negative)),
        "positive" => Some(Some(EnergyBranch::Positive)),
        "any" => Some(Some(EnergyBranch::Any)),
        _ => None,
    }
}

impl RunConfig {
    /// Set one key; keys match the long flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key {
            "mode" => {
                self.mode =
                    ModeKind::parse(value).ok_or_else(|| format!("unknown mode '{value}'"))?
            }
            "D" => self.depth = parse_float(key, value)?,
            "r0" => self.r0 = parse_float(key, value)?,
            "a" => self.width = parse_float(key, value)?,
            "m0" => self.m0 = parse_float(key, value)?,
            "A" => self.a_const = Some(parse_float(key, value)?),
            "kappa" => self.kappas = parse_list(key, value)?,
            "n" => self.ns = parse_list(key, value)?,
            "convention" => {
                self.convention = UnitConvention::parse(value)
                    .ok_or_else(|| format!("unknown convention '{value}'"))?
            }
            "tol" => self.tol = parse_float(key, value)?,
            "condition" => {
                self.condition =
                    condition_from(value).ok_or_else(|| format!("unknown condition '{value}'"))?
            }
            "branch" => {
                self.branch =
                    branch_from(value).ok_or_else(|| format!("unknown branch '{value}'"))?
            }
            "out" => self.out = Some(value.to_string()),
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Apply `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected 'key = value'", idx + 1))?;
            self.set(key.trim(), value)
                .map_err(|e| format!("line {}: {e}", idx + 1))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("D", self.depth),
            ("r0", self.r0),
            ("a", self.width),
            ("m0", self.m0),
        ] {
            if !(v > 0.0) {
                return Err(format!("{name} must be > 0, got {v}"));
            }
        }
        if self.kappas.is_empty() {
            return Err("kappa list is empty".into());
        }
        if self.kappas.contains(&0) {
            return Err("kappa must be nonzero".into());
        }
        if self.ns.is_empty() {
            return Err("n list is empty".into());
        }
        if self.mode != ModeKind::Pdm && self.a_const.is_none() {
            return Err(format!("mode {} needs A", self.mode.name()));
        }
        if !(self.tol > 0.0) {
            return Err(format!("tol must be > 0, got {}", self.tol));
        }
        Ok(())
    }

    /// Text that [`Self::apply_text`] turns back into this config.
    pub fn dump(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let mut s = String::new();
        let _ = writeln!(s, "mode = {}", self.mode.name());
        let _ = writeln!(s, "D = {}", self.depth);
        let _ = writeln!(s, "r0 = {}", self.r0);
        let _ = writeln!(s, "a = {}", self.width);
        let _ = writeln!(s, "m0 = {}", self.m0);
        if let Some(a) = self.a_const {
            let _ = writeln!(s, "A = {a}");
        }
        let _ = writeln!(
            s,
            "kappa = {}",
            join(self.kappas.iter().map(|k| k.to_string()).collect())
        );
        let _ = writeln!(
            s,
            "n = {}",
            join(self.ns.iter().map(|k| k.to_string()).collect())
        );
        let _ = writeln!(s, "convention = {}", self.convention.name());
        let _ = writeln!(s, "tol = {}", self.tol);
        let _ = writeln!(s, "condition = {}", self.condition.name());
        let _ = writeln!(
            s,
            "branch = {}",
            self.branch.map(|b| b.name()).unwrap_or("auto")
        );
        if let Some(out) = &self.out {
            let _ = writeln!(s, "out = {out}");
        }
        s
    }

    pub fn solver(&self) -> SolverConfig {
        SolverConfig {
            abs_tol: self.tol,
            condition: self.condition,
            branch: self.branch,
            ..SolverConfig::default()
        }
    }

    pub fn preset(&self) -> MoleculePreset {
        MoleculePreset {
            name: "config".into(),
            d_ev: self.depth,
            r0_angstrom: self.r0,
            m0_amu: self.m0,
            a_width: self.width,
        }
    }

    pub fn problem(&self, kappa: i32) -> Result<MorseProblem, String> {
        let p = to_internal(&self.preset(), self.convention);
        let energy = self.convention.factors().0;
        let a_const = self.a_const.unwrap_or(0.0) * energy;
        let mode = match self.mode {
            ModeKind::Pdm => SymmetryMode::Pdm,
            ModeKind::Pseudospin => SymmetryMode::PseudospinExact { a_const },
            ModeKind::Spin => SymmetryMode::SpinExact { a_const },
        };
        let pot = MorsePotential::new(p.depth, p.r0, p.width).map_err(|e| e.to_string())?;
        MorseProblem::new(pot, p.m0, mode, kappa).map_err(|e| e.to_string())
    }

    fn jobs(&self) -> Result<Vec<(MorseProblem, u32)>, String> {
        let mut jobs = Vec::new();
        for &kappa in &self.kappas {
            let problem = self.problem(kappa)?;
            for &n in &self.ns {
                jobs.push((problem, n));
            }
        }
        Ok(jobs)
    }
}

/// `x` with 9 significant digits.
pub fn fmt9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp).max(0) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// `key = value` config file
    #[arg(long)]
    config: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long = "D", allow_hyphen_values = true)]
    depth: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r0: Option<String>,
    #[arg(long = "a", allow_hyphen_values = true)]
    width: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m0: Option<String>,
    #[arg(long = "A", allow_hyphen_values = true)]
    a_const: Option<String>,
    /// Comma-separated list, e.g. -1,-2
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<String>,
    /// Comma-separated list
    #[arg(long)]
    n: Option<String>,
    /// raw | hartree | amu
    #[arg(long)]
    convention: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// normalizable | printed
    #[arg(long)]
    condition: Option<String>,
    /// auto | negative | positive | any
    #[arg(long)]
    branch: Option<String>,
}

#[derive(Parser, Debug)]
#[command(
    name = "dirac-morse",
    about = "Dirac-Morse bound states by the parametric Nikiforov-Uvarov method"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for eigenvalues over the kappa and n lists
    Solve(CommonArgs),
    /// Sample the normalized component of the first (kappa, n) state
    Wavefunction {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long = "r-lo")]
        r_lo: Option<f64>,
        #[arg(long = "r-hi")]
        r_hi: Option<f64>,
        #[arg(long, default_value_t = 400)]
        count: usize,
    },
    /// Compare closed-form eigenvalues with the shooting solver
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Added to each closed-form energy before comparison (testing aid)
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        perturb: f64,
    },
    /// Solve the reference CO rows under every unit convention
    ScanConventions(CommonArgs),
    /// Print the merged configuration
    DumpConfig(CommonArgs),
}

fn build_config(args: &CommonArgs) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        cfg.apply_text(&text).map_err(|e| format!("{path}: {e}"))?;
    }
    let flags = [
        ("mode", &args.mode),
        ("D", &args.depth),
        ("r0", &args.r0),
        ("a", &args.width),
        ("m0", &args.m0),
        ("A", &args.a_const),
        ("kappa", &args.kappa),
        ("n", &args.n),
        ("convention", &args.convention),
        ("out", &args.out),
        ("tol", &args.tol),
        ("condition", &args.condition),
        ("branch", &args.branch),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v).map_err(|e| format!("--{key}: {e}"))?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

enum Failure {
    Config(String),
    Exit(i32),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(format!("io error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Config(format!("csv error: {e}"))
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn write_csv(path: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let file = std::fs::File::create(Path::new(path))
        .map_err(|e| Failure::Config(format!("cannot write {path}: {e}")))?;
    let mut w = csv_writer(file);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

fn error_status(e: &SolverError) -> &'static str {
    match e {
        SolverError::EmptyDomain => "empty_domain",
        SolverError::NoRoot => "no_root",
        SolverError::DomainError { .. } => "domain_error",
        SolverError::InvalidConfig(_) => "invalid_config",
    }
}

const SOLVE_HEADER: [&str; 11] = [
    "mode",
    "kappa",
    "ell",
    "ell_tilde",
    "label",
    "n",
    "status",
    "E",
    "residual",
    "w1",
    "w2",
];

fn solve_rows(
    cfg: &RunConfig,
    jobs: &[(MorseProblem, u32)],
    results: &[Result<RootResult, SolverError>],
) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for ((problem, n), result) in jobs.iter().zip(results) {
        let q = problem.quantum;
        let prefix = vec![
            cfg.mode.name().to_string(),
            q.kappa.to_string(),
            q.ell.to_string(),
            q.ell_tilde.to_string(),
            q.label(*n),
            n.to_string(),
        ];
        let blank = |status: &str| {
            let mut r = prefix.clone();
            r.extend([
                status.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]);
            r
        };
        match result {
            Err(e) => rows.push(blank(error_status(e))),
            Ok(res) if res.roots.is_empty() => rows.push(blank("unresolved")),
            Ok(res) => {
                for root in &res.roots {
                    let mut r = prefix.clone();
                    let (w1, w2) = BoundState::new(problem, res.center, root.offset, *n)
                        .map(|s| (fmt9(s.w1), fmt9(s.w2)))
                        .unwrap_or_default();
                    r.extend([
                        "ok".to_string(),
                        fmt9(root.energy),
                        format!("{:.3e}", root.residual),
                        w1,
                        w2,
                    ]);
                    rows.push(r);
                }
            }
        }
    }
    rows
}

fn print_table(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(out, "{}", line(header.to_vec()))?;
    for r in rows {
        writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn cmd_solve(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let jobs = cfg.jobs().map_err(Failure::Config)?;
    let results = solve_batch(&jobs, &cfg.solver());
    let rows = solve_rows(cfg, &jobs, &results);
    print_table(out, &SOLVE_HEADER, &rows)?;
    if let Some(path) = &cfg.out {
        write_csv(path, &SOLVE_HEADER, &rows)?;
    }
    let any = results
        .iter()
        .any(|r| r.as_ref().is_ok_and(|r| !r.roots.is_empty()));
    if any {
        Ok(())
    } else {
        Err(Failure::Exit(EXIT_NO_ROOTS))
    }
}

fn cmd_wavefunction(
    cfg: &RunConfig,
    r_lo: Option<f64>,
    r_hi: Option<f64>,
    count: usize,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let kappa = cfg.kappas[0];
    let n = cfg.ns[0];
    let problem = cfg.problem(kappa).map_err(Failure::Config)?;
    let result = crate::eigensolver::solve_energy(&problem, n, &cfg.solver());
    let Ok(result) = result else {
        return Err(Failure::Exit(EXIT_NO_ROOTS));
    };
    let Some(state) = BoundState::from_roots(&problem, &result, n) else {
        return Err(Failure::Exit(EXIT_NO_ROOTS));
    };
    let state = state.map_err(|e| Failure::Config(e.to_string()))?;
    let normed = normalize(&state, &default_quadrature(&state))
        .map_err(|e| Failure::Config(e.to_string()))?;
    let r0 = problem.potential.r0();
    let width = problem.potential.width();
    let lo = r_lo.unwrap_or(0.05 * r0);
    let hi = r_hi.unwrap_or(4.0 * r0 + 20.0 / width);
    if !(lo > 0.0 && lo < hi) || count < 2 {
        return Err(Failure::Config(format!(
            "need 0 < r-lo < r-hi and count >= 2, got [{lo}, {hi}], {count}"
        )));
    }
    let step = (hi - lo) / (count - 1) as f64;
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let r = if i + 1 == count {
            hi
        } else {
            lo + step * i as f64
        };
        let raw = component_at_r(&state, r).map_err(|e| Failure::Config(e.to_string()))?;
        let value = component_at_r(&normed, r).map_err(|e| Failure::Config(e.to_string()))?;
        rows.push(vec![
            format!("{r:e}"),
            format!("{:e}", state.s_of_r(r)),
            format!("{raw:e}"),
            format!("{value:e}"),
        ]);
    }
    let header = ["r", "s", "value", "value_normalized"];
    match &cfg.out {
        Some(path) => write_csv(path, &header, &rows)?,
        None => {
            let mut w = csv_writer(&mut *out);
            w.write_record(header)?;
            for r in &rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

const VERIFY_HEADER: [&str; 10] = [
    "kappa",
    "n",
    "label",
    "E_closed",
    "E_oracle",
    "rel_dev",
    "nodes",
    "pekeris_error",
    "status",
    "note",
];

fn verify_one(problem: &MorseProblem, n: u32, root_energy: f64, perturb: f64) -> Vec<String> {
    let q = problem.quantum;
    let closed = root_energy + perturb;
    let mut row = vec![q.kappa.to_string(), n.to_string(), q.label(n), fmt9(closed)];
    match shoot_near(problem, n, root_energy, true, DEFAULT_STEPS) {
        Ok(shot) => {
            let dev = ((closed - shot.energy) / shot.energy).abs();
            let pass = dev <= VERIFY_TOLERANCE && shot.nodes == n;
            let pekeris = pekeris_error_report(problem, n, root_energy)
                .map(|v| format!("{v:.3e}"))
                .unwrap_or_else(|_| "n/a".into());
            row.extend([
                fmt9(shot.energy),
                format!("{dev:.3e}"),
                shot.nodes.to_string(),
                pekeris,
                if pass { "PASS" } else { "FAIL" }.to_string(),
                String::new(),
            ]);
        }
        Err(e) => {
            row.extend([
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                "FAIL".into(),
                e.to_string(),
            ]);
        }
    }
    row
}

fn cmd_verify(cfg: &RunConfig, perturb: f64, out: &mut dyn Write) -> Result<(), Failure> {
    let jobs = cfg.jobs().map_err(Failure::Config)?;
    let results = solve_batch(&jobs, &cfg.solver());
    let mut tasks: Vec<(usize, MorseProblem, u32, Option<f64>, String)> = Vec::new();
    for (i, ((problem, n), result)) in jobs.iter().zip(&results).enumerate() {
        match result {
            Ok(res) if !res.roots.is_empty() => {
                for root in &res.roots {
                    tasks.push((i, *problem, *n, Some(root.energy), String::new()));
                }
            }
            Ok(_) => tasks.push((i, *problem, *n, None, "unresolved".into())),
            Err(e) => tasks.push((i, *problem, *n, None, error_status(e).into())),
        }
    }
    let rows: Vec<Vec<String>> = tasks
        .par_iter()
        .map(|(_, problem, n, energy, note)| match energy {
            Some(e) => verify_one(problem, *n, *e, perturb),
            None => {
                let q = problem.quantum;
                let mut row = vec![q.kappa.to_string(), n.to_string(), q.label(*n)];
                row.extend(std::iter::repeat_n(String::new(), 5));
                row.extend(["SKIPPED".to_string(), note.clone()]);
                row
            }
        })
        .collect();
    print_table(out, &VERIFY_HEADER, &rows)?;
    if let Some(path) = &cfg.out {
        write_csv(path, &VERIFY_HEADER, &rows)?;
    }
    if rows.iter().any(|r| r[8] == "FAIL") {
        Err(Failure::Exit(EXIT_VERIFY_FAIL))
    } else {
        Ok(())
    }
}

pub const SCAN_HEADER: [&str; 12] = [
    "convention",
    "condition",
    "row",
    "kappa",
    "ell_tilde",
    "n_reference",
    "n_solved",
    "target",
    "status",
    "energies",
    "deviations",
    "residuals",
];

pub fn scan_rows(report: &ConventionReport) -> Vec<Vec<String>> {
    let join = |v: &[f64], f: &dyn Fn(f64) -> String| {
        v.iter().map(|x| f(*x)).collect::<Vec<_>>().join(";")
    };
    report
        .entries
        .iter()
        .map(|e| {
            vec![
                e.convention.name().to_string(),
                e.condition.name().to_string(),
                (e.row + 1).to_string(),
                e.target.kappa.to_string(),
                e.target.ell_tilde.to_string(),
                e.target.n.to_string(),
                e.n.to_string(),
                fmt9(e.target.energy),
                e.status.name().to_string(),
                join(&e.energies, &fmt9),
                join(&e.deviations, &|x| format!("{x:.3e}")),
                join(&e.residuals, &|x| format!("{x:.3e}")),
            ]
        })
        .collect()
}

fn cmd_scan(cfg: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let conditions = [EigenCondition::Normalizable, EigenCondition::Printed];
    let report = convention_scan(&cfg.preset(), &CO_TABLE, &conditions, &cfg.solver());
    write!(out, "{}", report.summary())?;
    let rows = scan_rows(&report);
    match &cfg.out {
        Some(path) => write_csv(path, &SCAN_HEADER, &rows)?,
        None => {
            writeln!(out)?;
            let mut w = csv_writer(&mut *out);
            w.write_record(SCAN_HEADER)?;
            for r in &rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Run with explicit arguments (first item is the program name) and return
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let common = match &cli.command {
        Command::Solve(c) | Command::ScanConventions(c) | Command::DumpConfig(c) => c,
        Command::Wavefunction { common, .. } | Command::Verify { common, .. } => common,
    };
    let cfg = match build_config(common) {
        Ok(cfg) => cfg,
        Err(msg) => {
            let _ = writeln!(err, "config error: {msg}");
            return EXIT_CONFIG;
        }
    };
    let result = match &cli.command {
        Command::Solve(_) => cmd_solve(&cfg, out),
        Command::Wavefunction {
            r_lo, r_hi, count, ..
        } => cmd_wavefunction(&cfg, *r_lo, *r_hi, *count, out),
        Command::Verify { perturb, .. } => cmd_verify(&cfg, *perturb, out),
        Command::ScanConventions(_) => cmd_scan(&cfg, out),
        Command::DumpConfig(_) => write!(out, "{}", cfg.dump()).map_err(Failure::from),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Exit(code)) => code,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt9_digits() {
        assert_eq!(fmt9(6.15913020), "6.15913020");
        assert_eq!(fmt9(-4.781695123), "-4.78169512");
        assert_eq!(fmt9(12506.2), "12506.2000");
        assert_eq!(fmt9(1.5e-7), "1.50000000e-7");
    }

    #[test]
    fn config_text_with_comments() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# header\nmode = spin\nA = 0 # inline\nkappa = -1, 2\n\nn = 0,1\n")
            .unwrap();
        assert_eq!(cfg.mode, ModeKind::Spin);
        assert_eq!(cfg.a_const, Some(0.0));
        assert_eq!(cfg.kappas, vec![-1, 2]);
        assert_eq!(cfg.ns, vec![0, 1]);
    }

    #[test]
    fn config_errors_carry_line_numbers() {
        let mut cfg = RunConfig::default();
        let err = cfg.apply_text("mode = pdm\n\nbogus = 3\n").unwrap_err();
        assert!(err.starts_with("line 3:"), "{err}");
        let err = RunConfig::default().apply_text("D = x").unwrap_err();
        assert!(err.starts_with("line 1:"));
        let err = RunConfig::default().apply_text("kappa").unwrap_err();
        assert!(err.contains("key = value"));
    }

    #[test]
    fn validation_rules() {
        let mut cfg = RunConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.mode = ModeKind::Pseudospin;
        assert!(cfg.validate().is_err());
        cfg.a_const = Some(-12.0);
        assert!(cfg.validate().is_ok());
        cfg.kappas = vec![0];
        assert!(cfg.validate().is_err());
        assert!(RunConfig::default().set("kappa", " , ").is_err());
    }

    #[test]
    fn dump_round_trips() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("mode = pseudospin\nA = -12.5\nkappa = -1,2\nn = 0,3\nbranch = any\ncondition = printed\nout = x.csv\ntol = 1e-11")
            .unwrap();
        let mut again = RunConfig::default();
        again.apply_text(&cfg.dump()).unwrap();
        assert_eq!(cfg, again);
        let mut plain = RunConfig::default();
        plain.apply_text(&RunConfig::default().dump()).unwrap();
        assert_eq!(plain, RunConfig::default());
    }
}
