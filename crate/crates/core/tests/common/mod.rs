#![allow(dead_code)]

use dirac_morse::eigensolver::{solve_energy, SolverConfig};
use dirac_morse::morse_model::{MorsePotential, MorseProblem, SymmetryMode};
use serde::Deserialize;

pub const SUITE_CSV: &str = include_str!("../data/oracle_suite.csv");

#[derive(Debug, Clone, Deserialize)]
pub struct SuiteRow {
    pub mode: String,
    #[serde(rename = "D")]
    pub depth: f64,
    pub r0: f64,
    pub a: f64,
    pub m0: f64,
    #[serde(rename = "A")]
    pub a_const: f64,
    pub kappa: i32,
    pub n_max: u32,
}

impl SuiteRow {
    pub fn problem(&self) -> MorseProblem {
        let mode = match self.mode.as_str() {
            "spin" => SymmetryMode::SpinExact {
                a_const: self.a_const,
            },
            "pseudospin" => SymmetryMode::PseudospinExact {
                a_const: self.a_const,
            },
            other => panic!("unknown suite mode {other}"),
        };
        let pot = MorsePotential::new(self.depth, self.r0, self.a).expect("suite potential");
        MorseProblem::new(pot, self.m0, mode, self.kappa).expect("suite problem")
    }
}

pub fn suite() -> Vec<SuiteRow> {
    csv::Reader::from_reader(SUITE_CSV.as_bytes())
        .deserialize()
        .collect::<Result<Vec<SuiteRow>, _>>()
        .expect("suite csv")
}

/// One closed-form root of a suite problem.
#[derive(Debug, Clone, Copy)]
pub struct SuiteState {
    pub problem: MorseProblem,
    pub n: u32,
    pub center: f64,
    pub offset: f64,
    pub energy: f64,
}

/// Every closed-form root for `n = 0..=n_max`. Panics if some `n` has none.
pub fn suite_states(row: &SuiteRow) -> Vec<SuiteState> {
    let problem = row.problem();
    let mut out = Vec::new();
    for n in 0..=row.n_max {
        let res = solve_energy(&problem, n, &SolverConfig::default())
            .unwrap_or_else(|e| panic!("{row:?} n={n}: {e}"));
        assert!(!res.roots.is_empty(), "{row:?} n={n}: no root");
        for root in &res.roots {
            out.push(SuiteState {
                problem,
                n,
                center: res.center,
                offset: root.offset,
                energy: root.energy,
            });
        }
    }
    out
}

/// Arguments selecting a suite row on the command line, with `n = 0..=n_max`.
pub fn cli_args(row: &SuiteRow) -> Vec<String> {
    let ns: Vec<String> = (0..=row.n_max).map(|n| n.to_string()).collect();
    cli_args_with_n(row, &ns.join(","))
}

pub fn cli_args_with_n(row: &SuiteRow, ns: &str) -> Vec<String> {
    vec![
        "--mode".into(),
        row.mode.clone(),
        "--D".into(),
        row.depth.to_string(),
        "--r0".into(),
        row.r0.to_string(),
        "--a".into(),
        row.a.to_string(),
        "--m0".into(),
        row.m0.to_string(),
        "--A".into(),
        row.a_const.to_string(),
        "--kappa".into(),
        row.kappa.to_string(),
        "--n".into(),
        ns.into(),
    ]
}

/// Run the CLI in-process, returning (exit code, stdout, stderr).
pub fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("dirac-morse").chain(args.iter().copied());
    let code = dirac_morse::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}
