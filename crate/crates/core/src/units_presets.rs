//! Unit conventions, the CO preset, and the scan of reference CO energies
//! across conventions.
//!
//! Constants are pinned literals. CODATA 2018 values for comparison:
//! Hartree energy 27.211386245988 eV, Bohr radius 0.529177210903 Å,
//! proton-to-electron scale for the atomic mass unit 1822.888486209,
//! amu·c² = 931.49410242 MeV, ħc = 197.3269804 MeV·fm.

use crate::eigensolver::{solve_energy, EigenCondition, EnergyBranch, SolverConfig, SolverError};
use crate::morse_model::{ModelError, MorsePotential, MorseProblem, SymmetryMode};
use std::collections::BTreeSet;

pub const HARTREE_EV: f64 = 27.211386;
pub const BOHR_ANGSTROM: f64 = 0.529177211;
pub const AMU_ELECTRON_MASSES: f64 = 1822.888486;
pub const AMU_EV: f64 = 931.49410242e6;
pub const HBAR_C_EV_ANGSTROM: f64 = 197.3269804e6 * 1e-5;

pub const CODATA_HARTREE_EV: f64 = 27.211386245988;
pub const CODATA_BOHR_ANGSTROM: f64 = 0.529177210903;
pub const CODATA_AMU_ELECTRON_MASSES: f64 = 1822.888486209;

/// Length unit `ħ/(amu·c)` in Å.
pub fn amu_length_angstrom() -> f64 {
    HBAR_C_EV_ANGSTROM / AMU_EV
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitConvention {
    /// Numbers used as printed.
    RawNumbers,
    /// Hartree energies, Bohr lengths, electron-mass masses.
    HartreeAtomic,
    /// Energies and masses in amu·c², lengths in `ħ/(amu·c)`.
    AmuMassUnit,
}

impl UnitConvention {
    pub const ALL: [UnitConvention; 3] = [
        UnitConvention::RawNumbers,
        UnitConvention::HartreeAtomic,
        UnitConvention::AmuMassUnit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            UnitConvention::RawNumbers => "raw",
            UnitConvention::HartreeAtomic => "hartree",
            UnitConvention::AmuMassUnit => "amu",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Internal units per eV, per Å, per amu, and per Å⁻¹.
    pub fn factors(&self) -> (f64, f64, f64, f64) {
        match self {
            UnitConvention::RawNumbers => (1.0, 1.0, 1.0, 1.0),
            UnitConvention::HartreeAtomic => (
                1.0 / HARTREE_EV,
                1.0 / BOHR_ANGSTROM,
                AMU_ELECTRON_MASSES,
                BOHR_ANGSTROM,
            ),
            UnitConvention::AmuMassUnit => {
                let len = amu_length_angstrom();
                (1.0 / AMU_EV, 1.0 / len, 1.0, len)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoleculePreset {
    pub name: String,
    pub d_ev: f64,
    pub r0_angstrom: f64,
    pub m0_amu: f64,
    /// Width in Å⁻¹.
    pub a_width: f64,
}

// r0 = 1.1283 Å is a measured bond length, not 2/√π
#[allow(clippy::approx_constant)]
pub fn co_preset() -> MoleculePreset {
    MoleculePreset {
        name: "CO".into(),
        d_ev: 11.2256,
        r0_angstrom: 1.1283,
        m0_amu: 6.8606719,
        a_width: 2.59441,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InternalParams {
    pub depth: f64,
    pub r0: f64,
    pub width: f64,
    pub m0: f64,
}

impl InternalParams {
    pub fn potential(&self) -> Result<MorsePotential, ModelError> {
        MorsePotential::new(self.depth, self.r0, self.width)
    }
}

pub fn to_internal(preset: &MoleculePreset, convention: UnitConvention) -> InternalParams {
    let (energy, length, mass, inv_length) = convention.factors();
    InternalParams {
        depth: preset.d_ev * energy,
        r0: preset.r0_angstrom * length,
        width: preset.a_width * inv_length,
        m0: preset.m0_amu * mass,
    }
}

pub fn from_internal(
    params: &InternalParams,
    convention: UnitConvention,
    name: &str,
) -> MoleculePreset {
    let (energy, length, mass, inv_length) = convention.factors();
    MoleculePreset {
        name: name.into(),
        d_ev: params.depth / energy,
        r0_angstrom: params.r0 / length,
        m0_amu: params.m0 / mass,
        a_width: params.width / inv_length,
    }
}

/// Reference CO row: `(ℓ̃, n, κ, |E|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub ell_tilde: u32,
    pub n: u32,
    pub kappa: i32,
    pub energy: f64,
}

pub const CO_TABLE: [TableRow; 4] = [
    TableRow {
        ell_tilde: 1,
        n: 1,
        kappa: -1,
        energy: 6.15913020,
    },
    TableRow {
        ell_tilde: 2,
        n: 1,
        kappa: -2,
        energy: 6.52968379,
    },
    TableRow {
        ell_tilde: 3,
        n: 1,
        kappa: -3,
        energy: 6.89146288,
    },
    TableRow {
        ell_tilde: 4,
        n: 1,
        kappa: -4,
        energy: 7.24974882,
    },
];

/// Relative deviation that counts as reproducing a row.
pub const MATCH_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanStatus {
    Matched,
    Mismatch,
    EmptyDomain,
    NoRoot,
    /// Sign changes found, none resolved to tolerance.
    Unresolved,
    InvalidInput,
}

impl ScanStatus {
    pub fn name(&self) -> &'static str {
        match self {
            ScanStatus::Matched => "matched",
            ScanStatus::Mismatch => "mismatch",
            ScanStatus::EmptyDomain => "empty_domain",
            ScanStatus::NoRoot => "no_root",
            ScanStatus::Unresolved => "unresolved",
            ScanStatus::InvalidInput => "invalid_input",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanEntry {
    pub convention: UnitConvention,
    pub condition: EigenCondition,
    pub row: usize,
    pub target: TableRow,
    /// Degree actually solved for.
    pub n: u32,
    pub status: ScanStatus,
    pub energies: Vec<f64>,
    /// `(|E| − target)/target` per energy.
    pub deviations: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl ScanEntry {
    pub fn best_deviation(&self) -> Option<f64> {
        self.deviations
            .iter()
            .copied()
            .map(f64::abs)
            .min_by(f64::total_cmp)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConventionReport {
    pub entries: Vec<ScanEntry>,
}

impl ConventionReport {
    /// Conventions (with condition) whose entries reproduce every row for
    /// some n, with the worst of the per-row best deviations.
    pub fn reproducing(&self) -> Vec<(UnitConvention, EigenCondition, f64)> {
        let mut out = Vec::new();
        let mut seen: Vec<(UnitConvention, EigenCondition)> = Vec::new();
        for e in &self.entries {
            if !seen.contains(&(e.convention, e.condition)) {
                seen.push((e.convention, e.condition));
            }
        }
        for (conv, cond) in seen {
            let rows: BTreeSet<usize> = self.entries.iter().map(|e| e.row).collect();
            let mut worst = 0.0f64;
            let mut all = true;
            for row in rows {
                let best = self
                    .entries
                    .iter()
                    .filter(|e| {
                        e.convention == conv
                            && e.condition == cond
                            && e.row == row
                            && e.status == ScanStatus::Matched
                    })
                    .filter_map(|e| e.best_deviation())
                    .min_by(f64::total_cmp);
                match best {
                    Some(d) => worst = worst.max(d),
                    None => all = false,
                }
            }
            if all {
                out.push((conv, cond, worst));
            }
        }
        out
    }

    /// Human-readable outcome.
    pub fn summary(&self) -> String {
        let mut text = String::new();
        let winners = self.reproducing();
        if winners.is_empty() {
            text.push_str("no convention reproduces all reference rows to 1e-3 relative\n");
        } else {
            let (conv, cond, dev) = winners
                .iter()
                .copied()
                .min_by(|a, b| a.2.total_cmp(&b.2))
                .expect("nonempty");
            text.push_str(&format!(
                "best convention: {} ({} condition), max relative deviation {:.3e}\n",
                conv.name(),
                cond.name(),
                dev
            ));
        }
        for e in &self.entries {
            let best = e
                .best_deviation()
                .map(|d| format!("{d:.3e}"))
                .unwrap_or_else(|| "-".into());
            text.push_str(&format!(
                "{:<8} {:<13} kappa={:>3} n={} {:<13} roots={} best_dev={}\n",
                e.convention.name(),
                e.condition.name(),
                e.target.kappa,
                e.n,
                e.status.name(),
                e.energies.len(),
                best
            ));
        }
        text
    }
}

/// Solve each row in PDM mode under every convention and both readings of
/// the row's n (`n − 1` and `n`), comparing `|E|` to the target. Failures
/// are recorded, not raised.
pub fn convention_scan(
    preset: &MoleculePreset,
    rows: &[TableRow],
    conditions: &[EigenCondition],
    base: &SolverConfig,
) -> ConventionReport {
    let mut entries = Vec::new();
    for convention in UnitConvention::ALL {
        let params = to_internal(preset, convention);
        for &condition in conditions {
            for (row, target) in rows.iter().enumerate() {
                for n in [target.n.saturating_sub(1), target.n] {
                    entries.push(scan_one(
                        &params, convention, condition, row, *target, n, base,
                    ));
                }
            }
        }
    }
    ConventionReport { entries }
}

fn scan_one(
    params: &InternalParams,
    convention: UnitConvention,
    condition: EigenCondition,
    row: usize,
    target: TableRow,
    n: u32,
    base: &SolverConfig,
) -> ScanEntry {
    let mut entry = ScanEntry {
        convention,
        condition,
        row,
        target,
        n,
        status: ScanStatus::InvalidInput,
        energies: Vec::new(),
        deviations: Vec::new(),
        residuals: Vec::new(),
    };
    let problem = params
        .potential()
        .and_then(|pot| MorseProblem::new(pot, params.m0, SymmetryMode::Pdm, target.kappa));
    let Ok(problem) = problem else { return entry };
    let config = SolverConfig {
        condition,
        branch: Some(EnergyBranch::Any),
        ..*base
    };
    entry.status = match solve_energy(&problem, n, &config) {
        Err(SolverError::EmptyDomain) => ScanStatus::EmptyDomain,
        Err(SolverError::NoRoot) => ScanStatus::NoRoot,
        Err(_) => ScanStatus::InvalidInput,
        Ok(res) if res.roots.is_empty() => ScanStatus::Unresolved,
        Ok(res) => {
            for r in &res.roots {
                entry.energies.push(r.energy);
                entry
                    .deviations
                    .push((r.energy.abs() - target.energy) / target.energy);
                entry.residuals.push(r.residual);
            }
            if entry.best_deviation().is_some_and(|d| d < MATCH_TOLERANCE) {
                ScanStatus::Matched
            } else {
                ScanStatus::Mismatch
            }
        }
    };
    entry
}
