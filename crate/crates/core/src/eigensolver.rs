//! Real energy roots of the closed-form spectrum condition.
//!
//! The unknown is the offset `ε = E − E_ref` with `E_ref` from
//! [`MorseProblem::reference_energy`]. ξ₁ is linear and ξ₃ a concave
//! quadratic in ε, so the admissible set `{ξ₁ > 0, ξ₃ ≥ 0}` is one interval
//! with closed-form ends. Roots are bracketed on a grid over that interval
//! and bisected.

use crate::morse_model::{MorseProblem, SymmetryMode, XiExpansion, XiTriple};
use rayon::prelude::*;
use thiserror::Error;

/// Which root of the NU `k` quadratic the spectrum condition follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenCondition {
    /// `ξ₂/√ξ₁ − 2√ξ₃ = 2n + 1`. Pairs with the decaying
    /// `s^{√ξ₃} e^{−√ξ₁ s} L_n^{2√ξ₃}(2√ξ₁ s)` and yields bound states.
    Normalizable,
    /// `ξ₂/√ξ₁ + 2√ξ₃ = 2n + 1`, the condition as usually printed for this
    /// model. Its roots do not make the Laguerre form solve the ODE.
    Printed,
}

impl EigenCondition {
    pub fn name(&self) -> &'static str {
        match self {
            EigenCondition::Normalizable => "normalizable",
            EigenCondition::Printed => "printed",
        }
    }

    fn sqrt_xi3_sign(&self) -> f64 {
        match self {
            EigenCondition::Normalizable => -1.0,
            EigenCondition::Printed => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyBranch {
    Negative,
    Positive,
    Any,
}

impl EnergyBranch {
    /// Negative energies for PDM and pseudospin, positive for spin.
    pub fn for_mode(mode: &SymmetryMode) -> Self {
        match mode {
            SymmetryMode::SpinExact { .. } => EnergyBranch::Positive,
            _ => EnergyBranch::Negative,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EnergyBranch::Negative => "negative",
            EnergyBranch::Positive => "positive",
            EnergyBranch::Any => "any",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub scan_points: usize,
    pub abs_tol: f64,
    pub max_bisections: u32,
    pub energy_window: Option<(f64, f64)>,
    pub condition: EigenCondition,
    /// `None` picks [`EnergyBranch::for_mode`].
    pub branch: Option<EnergyBranch>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            scan_points: 2000,
            abs_tol: 1e-12,
            max_bisections: 200,
            energy_window: None,
            condition: EigenCondition::Normalizable,
            branch: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("admissible energy domain is empty")]
    EmptyDomain,
    #[error("no sign change of the residual inside the admissible domain")]
    NoRoot,
    #[error("energy {energy} is outside the admissible domain (xi1 = {xi1}, xi3 = {xi3})")]
    DomainError { energy: f64, xi1: f64, xi3: f64 },
    #[error("invalid solver config: {0}")]
    InvalidConfig(String),
}

/// Energy interval; `lo_open` marks a ξ₁ = 0 end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl EnergyInterval {
    pub fn contains(&self, e: f64) -> bool {
        let above = if self.lo_open {
            e > self.lo
        } else {
            e >= self.lo
        };
        let below = if self.hi_open {
            e < self.hi
        } else {
            e <= self.hi
        };
        above && below
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub energy: f64,
    /// `energy − center`, carried at full precision.
    pub offset: f64,
    pub residual: f64,
    /// Scan bracket in energy.
    pub bracket: (f64, f64),
    /// Final bisection bracket in offset.
    pub offset_bracket: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootResult {
    pub roots: Vec<Root>,
    /// Sign changes whose bisection could not reach `abs_tol`.
    pub unresolved: Vec<Root>,
    pub domain: Vec<EnergyInterval>,
    pub branch: EnergyBranch,
    pub condition: EigenCondition,
    pub center: f64,
}

/// ξ-form residual: `ξ₂/√ξ₁ ± 2√ξ₃ − (2n+1)`.
pub fn xi_residual(xi: &XiTriple, n: u32, condition: EigenCondition) -> Option<f64> {
    if !(xi.xi1 > 0.0 && xi.xi3 >= 0.0) {
        return None;
    }
    let value = xi.xi2 / xi.xi1.sqrt() + condition.sqrt_xi3_sign() * 2.0 * xi.xi3.sqrt()
        - (2.0 * n as f64 + 1.0);
    value.is_finite().then_some(value)
}

pub fn xi_form_residual(
    problem: &MorseProblem,
    e: f64,
    n: u32,
    condition: EigenCondition,
) -> Result<f64, SolverError> {
    let xi = problem.xi(e);
    xi_residual(&xi, n, condition).ok_or(SolverError::DomainError {
        energy: e,
        xi1: xi.xi1,
        xi3: xi.xi3,
    })
}

/// Positive factor relating [`physical_form_residual`] to [`xi_form_residual`]:
/// 1 for PDM and spin, the width `a` for pseudospin.
pub fn physical_form_scale(problem: &MorseProblem) -> f64 {
    match problem.mode {
        SymmetryMode::PseudospinExact { .. } => problem.potential.width(),
        _ => 1.0,
    }
}

/// Spectrum condition written in physical parameters, LHS − RHS.
///
/// PDM: `±2δ√(a₀c₁+m₀²−E²) − δ[a₀c₂+(m₀−E)(m₁+2D)]/√(a₀c₃+(m₀−E)(m₂−D)) − (2n+1)`.
/// Pseudospin: `±2√(a₀c₁+M(m₀+E)) − (a₀c₂+2DM)/√(a₀c₃−DM) − a(2n+1)`.
/// Spin: `δ(2DM′−b₀c₂)/√(b₀c₃+DM′) ± 2δ√(b₀c₁+M′(m₀−E)) − (2n+1)`.
/// The upper sign is [`EigenCondition::Printed`].
pub fn physical_form_residual(
    problem: &MorseProblem,
    e: f64,
    n: u32,
    condition: EigenCondition,
) -> Result<f64, SolverError> {
    let pk = problem.pekeris();
    let (s1, s2, s3) = (
        pk.strength * pk.c1,
        pk.strength * pk.c2,
        pk.strength * pk.c3,
    );
    let delta = problem.potential.delta();
    let depth = problem.potential.depth();
    let m = problem.mass;
    let sign = condition.sqrt_xi3_sign();
    let two_n1 = 2.0 * n as f64 + 1.0;
    let (root_arg, pole_arg) = match problem.mode {
        SymmetryMode::Pdm => (
            s1 + (m.m0 - e) * (m.m0 + e),
            s3 + (m.m0 - e) * (m.m2 - depth),
        ),
        SymmetryMode::PseudospinExact { a_const } => {
            let big_m = m.m0 + a_const - e;
            (s1 + big_m * (m.m0 + e), s3 - depth * big_m)
        }
        SymmetryMode::SpinExact { a_const } => {
            let big_m = m.m0 + e - a_const;
            (s1 + big_m * (m.m0 - e), s3 + depth * big_m)
        }
    };
    if !(pole_arg > 0.0 && root_arg >= 0.0) {
        let d2 = delta * delta;
        return Err(SolverError::DomainError {
            energy: e,
            xi1: d2 * pole_arg,
            xi3: d2 * root_arg,
        });
    }
    let value = match problem.mode {
        SymmetryMode::Pdm => {
            sign * 2.0 * delta * root_arg.sqrt()
                - delta * (s2 + (m.m0 - e) * (m.m1 + 2.0 * depth)) / pole_arg.sqrt()
                - two_n1
        }
        SymmetryMode::PseudospinExact { a_const } => {
            let big_m = m.m0 + a_const - e;
            sign * 2.0 * root_arg.sqrt()
                - (s2 + 2.0 * depth * big_m) / pole_arg.sqrt()
                - problem.potential.width() * two_n1
        }
        SymmetryMode::SpinExact { a_const } => {
            let big_m = m.m0 + e - a_const;
            delta * (2.0 * depth * big_m - s2) / pole_arg.sqrt()
                + sign * 2.0 * delta * root_arg.sqrt()
                - two_n1
        }
    };
    Ok(value)
}

/// Printed-form residual in physical parameters.
pub fn residual(problem: &MorseProblem, e: f64, n: u32) -> Result<f64, SolverError> {
    physical_form_residual(problem, e, n, EigenCondition::Printed)
}

fn validate(config: &SolverConfig) -> Result<(), SolverError> {
    if config.scan_points < 2 {
        return Err(SolverError::InvalidConfig(format!(
            "scan_points must be >= 2, got {}",
            config.scan_points
        )));
    }
    if !(config.abs_tol > 0.0 && config.abs_tol.is_finite()) {
        return Err(SolverError::InvalidConfig(format!(
            "abs_tol must be > 0, got {}",
            config.abs_tol
        )));
    }
    if config.max_bisections == 0 {
        return Err(SolverError::InvalidConfig(
            "max_bisections must be > 0".into(),
        ));
    }
    if let Some((lo, hi)) = config.energy_window {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(SolverError::InvalidConfig(format!(
                "energy window needs lo <= hi, got [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

pub fn default_window(problem: &MorseProblem) -> (f64, f64) {
    let span = problem.mass.m0
        + 2.0 * problem.potential.depth()
        + problem.mode.a_const().unwrap_or(0.0).abs();
    (-span, span)
}

/// Admissible set in offset coordinates before any window is applied:
/// `(lo, hi)` with `lo` the ξ₁ = 0 point (open) and `hi` the upper ξ₃ = 0
/// point (closed). `None` when ξ₃ < 0 everywhere or the ends cross.
fn offset_domain(exp: &XiExpansion) -> Option<(f64, f64, f64)> {
    let [p0, p1, _] = exp.xi1.0;
    let [q0, q1, q2] = exp.xi3.0;
    // ξ₁ increasing in ε in every mode
    debug_assert!(p1 > 0.0 && q2 < 0.0);
    let xi1_zero = -p0 / p1;
    // q2 ε² + q1 ε + q0 = 0
    let disc = q1 * q1 - 4.0 * q2 * q0;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (q1 + q1.signum() * disc.sqrt());
    let (r1, r2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / q2, q0 / q)
    };
    let (lo3, hi3) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    Some((xi1_zero, lo3, hi3))
}

/// Maximal admissible interval of E within the window and branch. The
/// returned list has at most one element.
pub fn admissible_domain(
    problem: &MorseProblem,
    config: &SolverConfig,
) -> Result<Vec<EnergyInterval>, SolverError> {
    validate(config)?;
    let center = problem.reference_energy();
    let exp = problem.xi_expansion(center);
    Ok(offset_interval(problem, config, &exp)
        .map(|iv| EnergyInterval {
            lo: center + iv.lo,
            hi: center + iv.hi,
            ..iv
        })
        .into_iter()
        .collect())
}

fn offset_interval(
    problem: &MorseProblem,
    config: &SolverConfig,
    exp: &XiExpansion,
) -> Option<EnergyInterval> {
    let center = exp.center;
    let (xi1_zero, lo3, hi3) = offset_domain(exp)?;
    let (wlo, whi) = config
        .energy_window
        .unwrap_or_else(|| default_window(problem));
    let branch = config
        .branch
        .unwrap_or_else(|| EnergyBranch::for_mode(&problem.mode));
    let (blo, bhi) = match branch {
        EnergyBranch::Negative => (f64::NEG_INFINITY, 0.0),
        EnergyBranch::Positive => (0.0, f64::INFINITY),
        EnergyBranch::Any => (f64::NEG_INFINITY, f64::INFINITY),
    };
    // (lo, open) candidates; the largest lower bound wins
    let lowers = [
        (xi1_zero, true),
        (lo3, false),
        (wlo - center, false),
        (blo - center, false),
    ];
    let uppers = [(hi3, false), (whi - center, false), (bhi - center, false)];
    let (lo, lo_open) = lowers
        .iter()
        .copied()
        .fold((f64::NEG_INFINITY, false), |acc, c| {
            if c.0 > acc.0 || (c.0 == acc.0 && c.1) {
                c
            } else {
                acc
            }
        });
    let (hi, hi_open) =
        uppers.iter().copied().fold(
            (f64::INFINITY, false),
            |acc, c| if c.0 < acc.0 { c } else { acc },
        );
    let nonempty = if lo_open || hi_open {
        lo < hi
    } else {
        lo < hi || (lo == hi && wlo < whi)
    };
    // ends that coincide analytically can be split by rounding
    let resolvable = hi - lo > 1e-13 * (1.0 + center.abs() + lo.abs() + hi.abs());
    if !nonempty || !(resolvable || (!lo_open && !hi_open)) {
        return None;
    }
    let xi = exp.at_offset(lo + 0.5 * (hi - lo));
    (xi.xi1 > 0.0 && xi.xi3 >= 0.0).then_some(EnergyInterval {
        lo,
        hi,
        lo_open,
        hi_open,
    })
}

struct Scan<'a> {
    exp: &'a XiExpansion,
    n: u32,
    condition: EigenCondition,
}

impl Scan<'_> {
    fn eval(&self, eps: f64) -> Option<f64> {
        xi_residual(&self.exp.at_offset(eps), self.n, self.condition)
    }
}

/// Solve for every root of the selected condition inside the admissible
/// interval, sorted by energy.
pub fn solve_energy(
    problem: &MorseProblem,
    n: u32,
    config: &SolverConfig,
) -> Result<RootResult, SolverError> {
    validate(config)?;
    let center = problem.reference_energy();
    let exp = problem.xi_expansion(center);
    let interval = offset_interval(problem, config, &exp).ok_or(SolverError::EmptyDomain)?;
    let scan = Scan {
        exp: &exp,
        n,
        condition: config.condition,
    };

    // grade the grid quadratically toward an open (pole) end
    let count = config.scan_points;
    let width = interval.hi - interval.lo;
    let samples: Vec<(f64, Option<f64>)> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            let eps = if i + 1 == count {
                interval.hi
            } else if interval.lo_open {
                interval.lo + width * t * t
            } else {
                interval.lo + width * t
            };
            let skip = (i == 0 && interval.lo_open) || (i + 1 == count && interval.hi_open);
            (eps, if skip { None } else { scan.eval(eps) })
        })
        .collect();

    let mut roots = Vec::new();
    let mut unresolved = Vec::new();
    for (i, &(eps, value)) in samples.iter().enumerate() {
        let Some(f) = value else { continue };
        if f == 0.0 {
            let e = center + eps;
            roots.push(Root {
                energy: e,
                offset: eps,
                residual: 0.0,
                bracket: (e, e),
                offset_bracket: (eps, eps),
            });
            continue;
        }
        let Some(&(next_eps, Some(g))) = samples.get(i + 1) else {
            continue;
        };
        if f.signum() == g.signum() || g == 0.0 {
            continue;
        }
        let root = bisect(&scan, (eps, f), (next_eps, g), config, center);
        if root.residual.abs() <= config.abs_tol {
            roots.push(root);
        } else {
            unresolved.push(root);
        }
    }
    if roots.is_empty() && unresolved.is_empty() {
        return Err(SolverError::NoRoot);
    }
    let domain = vec![EnergyInterval {
        lo: center + interval.lo,
        hi: center + interval.hi,
        ..interval
    }];
    Ok(RootResult {
        roots,
        unresolved,
        domain,
        branch: config
            .branch
            .unwrap_or_else(|| EnergyBranch::for_mode(&problem.mode)),
        condition: config.condition,
        center,
    })
}

fn bisect(
    scan: &Scan,
    (mut a, mut fa): (f64, f64),
    (mut b, mut fb): (f64, f64),
    config: &SolverConfig,
    center: f64,
) -> Root {
    let bracket = (center + a, center + b);
    let mut best = if fa.abs() <= fb.abs() {
        (a, fa)
    } else {
        (b, fb)
    };
    for _ in 0..config.max_bisections {
        if best.1.abs() <= config.abs_tol {
            break;
        }
        let mid = a + 0.5 * (b - a);
        if mid <= a || mid >= b {
            break;
        }
        // inside the open interval the residual is finite
        let Some(fm) = scan.eval(mid) else { break };
        if fm.abs() < best.1.abs() {
            best = (mid, fm);
        }
        if fm == 0.0 {
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
            fb = fm;
        }
    }
    let _ = fb;
    Root {
        energy: center + best.0,
        offset: best.0,
        residual: best.1,
        bracket,
        offset_bracket: (a, b),
    }
}

/// Residual at a root offset, recomputed from a fresh expansion.
pub fn offset_residual(
    problem: &MorseProblem,
    center: f64,
    offset: f64,
    n: u32,
    condition: EigenCondition,
) -> Option<f64> {
    xi_residual(
        &problem.xi_expansion(center).at_offset(offset),
        n,
        condition,
    )
}

/// Independent solves in parallel; output order follows input order.
pub fn solve_batch(
    jobs: &[(MorseProblem, u32)],
    config: &SolverConfig,
) -> Vec<Result<RootResult, SolverError>> {
    jobs.par_iter()
        .map(|(p, n)| solve_energy(p, *n, config))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse_model::MorsePotential;
    use crate::nu_core::{
        derive_parameters, eigen_residual_degenerate, eigen_residual_normalizable, NuInput,
    };
    use proptest::prelude::*;

    fn toy_pdm() -> MorseProblem {
        MorseProblem::new(
            MorsePotential::new(1.0, 1.0, 1.0).unwrap(),
            5.0,
            SymmetryMode::Pdm,
            -1,
        )
        .unwrap()
    }

    fn spin(d: f64, r0: f64, a: f64, m0: f64, a_const: f64, kappa: i32) -> MorseProblem {
        MorseProblem::new(
            MorsePotential::new(d, r0, a).unwrap(),
            m0,
            SymmetryMode::SpinExact { a_const },
            kappa,
        )
        .unwrap()
    }

    fn pseudo(d: f64, r0: f64, a: f64, m0: f64, a_const: f64, kappa: i32) -> MorseProblem {
        MorseProblem::new(
            MorsePotential::new(d, r0, a).unwrap(),
            m0,
            SymmetryMode::PseudospinExact { a_const },
            kappa,
        )
        .unwrap()
    }

    #[test]
    fn toy_domain_is_three_to_root27() {
        let cfg = SolverConfig {
            branch: Some(EnergyBranch::Any),
            ..Default::default()
        };
        let dom = admissible_domain(&toy_pdm(), &cfg).unwrap();
        assert_eq!(dom.len(), 1);
        assert!((dom[0].lo - 3.0).abs() < 1e-14 && dom[0].lo_open);
        assert!((dom[0].hi - 27f64.sqrt()).abs() < 1e-14 && !dom[0].hi_open);
    }

    #[test]
    fn toy_domain_negative_branch_is_empty() {
        let dom = admissible_domain(&toy_pdm(), &SolverConfig::default()).unwrap();
        assert!(dom.is_empty());
        assert_eq!(
            solve_energy(&toy_pdm(), 0, &SolverConfig::default()),
            Err(SolverError::EmptyDomain)
        );
    }

    #[test]
    fn zero_width_window_is_empty() {
        let cfg = SolverConfig {
            energy_window: Some((0.0, 0.0)),
            branch: Some(EnergyBranch::Any),
            ..Default::default()
        };
        assert_eq!(
            solve_energy(&toy_pdm(), 0, &cfg),
            Err(SolverError::EmptyDomain)
        );
        let p = spin(1.0, 1.0, 1.5, 5.0, 5.0, 1);
        assert_eq!(solve_energy(&p, 0, &cfg), Err(SolverError::EmptyDomain));
    }

    #[test]
    fn bad_config_rejected() {
        let cfg = SolverConfig {
            scan_points: 1,
            ..Default::default()
        };
        assert!(matches!(
            solve_energy(&toy_pdm(), 0, &cfg),
            Err(SolverError::InvalidConfig(_))
        ));
        let cfg = SolverConfig {
            energy_window: Some((1.0, 0.0)),
            ..Default::default()
        };
        assert!(matches!(
            admissible_domain(&toy_pdm(), &cfg),
            Err(SolverError::InvalidConfig(_))
        ));
    }

    #[test]
    fn toy_residual_value() {
        let r = residual(&toy_pdm(), 4.0, 2).unwrap();
        assert!((r - (2.0 * 11f64.sqrt() - 5.0)).abs() < 1e-14);
        assert!((r - 1.63325).abs() < 1e-5);
        assert!(matches!(
            residual(&toy_pdm(), 2.0, 0),
            Err(SolverError::DomainError { .. })
        ));
    }

    #[test]
    fn residual_continuity() {
        let p = toy_pdm();
        let base = residual(&p, 4.2, 1).unwrap();
        for h in [1e-4, 1e-6, 1e-8] {
            assert!((residual(&p, 4.2 + h, 1).unwrap() - base).abs() < 100.0 * h);
        }
    }

    #[test]
    fn xi_form_matches_nu_core() {
        let p = spin(1.0, 1.0, 1.5, 5.0, 0.0, 1);
        for &e in &[4.2, 4.6, 5.0] {
            let xi = p.xi(e);
            let input = NuInput::exponential_type(xi.xi1, xi.xi2, xi.xi3).unwrap();
            let d = derive_parameters(&input).unwrap();
            for n in 0..3 {
                let norm = xi_form_residual(&p, e, n, EigenCondition::Normalizable).unwrap();
                let printed = xi_form_residual(&p, e, n, EigenCondition::Printed).unwrap();
                let nu_norm = eigen_residual_normalizable(&d, &input, n).unwrap();
                let nu_printed = eigen_residual_degenerate(&d, &input, n).unwrap();
                assert!((nu_norm + xi.xi1.sqrt() * norm).abs() < 1e-12);
                assert!((nu_printed + xi.xi1.sqrt() * printed).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spin_ground_state_near_rest_mass() {
        let p = spin(1.0, 1.0, 1.5, 5.0, 5.0, 1);
        let res = solve_energy(&p, 0, &SolverConfig::default()).unwrap();
        assert_eq!(res.roots.len(), 1);
        let e = res.roots[0].energy;
        assert!(e < 5.0 && e > 4.0, "{e}");
        assert!(res.domain[0].contains(e));
    }

    #[test]
    fn roots_satisfy_postconditions() {
        let cases = [
            spin(2.0, 1.0, 1.2, 5.0, 0.0, -1),
            spin(2.0, 1.0, 1.0, 3.0, 0.0, -2),
            pseudo(2.0, 1.0, 1.0, 3.0, -8.0, 3),
            pseudo(1.0, 1.0, 1.5, 5.0, -12.0, -1),
        ];
        let cfg = SolverConfig::default();
        for p in &cases {
            for n in 0..3 {
                let Ok(res) = solve_energy(p, n, &cfg) else {
                    continue;
                };
                for r in &res.roots {
                    let again = offset_residual(p, res.center, r.offset, n, cfg.condition).unwrap();
                    assert!(again.abs() <= cfg.abs_tol);
                    let xi = p.xi_expansion(res.center).at_offset(r.offset);
                    assert!(xi.xi1 > 0.0 && xi.xi3 >= 0.0);
                    let (a, b) = r.offset_bracket;
                    if a < b {
                        let fa = offset_residual(p, res.center, a, n, cfg.condition).unwrap();
                        let fb = offset_residual(p, res.center, b, n, cfg.condition).unwrap();
                        assert!(fa * fb <= 0.0);
                    }
                }
                let sorted = res.roots.windows(2).all(|w| w[0].energy <= w[1].energy);
                assert!(sorted);
            }
        }
    }

    #[test]
    fn known_spin_levels() {
        let p = spin(2.0, 1.0, 1.2, 5.0, 0.0, -1);
        let expected = [3.538607, 4.320027, 4.792491, 4.992678];
        for (n, want) in expected.iter().enumerate() {
            let res = solve_energy(&p, n as u32, &SolverConfig::default()).unwrap();
            assert_eq!(res.roots.len(), 1);
            assert!(
                (res.roots[0].energy - want).abs() < 1e-5,
                "n={n}: {}",
                res.roots[0].energy
            );
        }
    }

    #[test]
    fn pseudospin_doublet_is_degenerate() {
        // κ = −1 and κ = 2 share ℓ̃ = 1
        let a = solve_energy(
            &pseudo(1.0, 1.0, 1.5, 5.0, -12.0, -1),
            0,
            &SolverConfig::default(),
        )
        .unwrap();
        let b = solve_energy(
            &pseudo(1.0, 1.0, 1.5, 5.0, -12.0, 2),
            0,
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(a.roots[0].energy, b.roots[0].energy);
        assert!((a.roots[0].energy + 4.781695).abs() < 1e-5);
    }

    #[test]
    fn deterministic_and_batch_ordered() {
        let jobs: Vec<(MorseProblem, u32)> = (0..4)
            .map(|n| (spin(2.0, 1.0, 1.2, 5.0, 0.0, -1), n))
            .collect();
        let cfg = SolverConfig::default();
        let batch = solve_batch(&jobs, &cfg);
        for ((p, n), r) in jobs.iter().zip(&batch) {
            let single = solve_energy(p, *n, &cfg).unwrap();
            let r = r.as_ref().unwrap();
            assert_eq!(r.roots.len(), single.roots.len());
            for (x, y) in r.roots.iter().zip(&single.roots) {
                assert_eq!(x.energy.to_bits(), y.energy.to_bits());
            }
        }
    }

    #[test]
    fn hartree_scale_resolves() {
        // offsets well below ulp(E)·1e4 still resolve
        let p = spin(0.4125, 2.13218, 1.373, 12506.2, 0.0, 1);
        if let Ok(res) = solve_energy(&p, 0, &SolverConfig::default()) {
            for r in &res.roots {
                assert!(r.residual.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn scan_cross_check_of_domain() {
        // dense sign scan of ξ₁ and ξ₃ agrees with the closed-form ends
        let cfg = SolverConfig {
            branch: Some(EnergyBranch::Any),
            ..Default::default()
        };
        for p in [
            toy_pdm(),
            spin(1.0, 1.0, 1.5, 5.0, 5.0, 1),
            pseudo(2.0, 1.0, 1.2, 5.0, -12.0, -1),
        ] {
            let dom = admissible_domain(&p, &cfg).unwrap();
            let (lo, hi) = default_window(&p);
            let steps = 200_000;
            let mut inside = Vec::new();
            for i in 0..=steps {
                let e = lo + (hi - lo) * i as f64 / steps as f64;
                let xi = p.xi(e);
                inside.push((e, xi.xi1 > 0.0 && xi.xi3 >= 0.0));
            }
            let h = (hi - lo) / steps as f64;
            for (e, ok) in inside {
                let in_dom = dom.iter().any(|iv| iv.contains(e));
                let near_edge = dom
                    .iter()
                    .any(|iv| (e - iv.lo).abs() < h || (e - iv.hi).abs() < h);
                assert!(ok == in_dom || near_edge, "e={e}");
            }
        }
    }

    fn random_problem() -> impl Strategy<Value = MorseProblem> {
        (
            0.5..3.0f64,
            0.8..1.5f64,
            0.8..2.0f64,
            2.0..6.0f64,
            0usize..3,
            -3i32..4,
            -10.0..10.0f64,
        )
            .prop_map(|(d, r0, a, m0, mode, kappa, a_const)| {
                let kappa = if kappa == 0 { -1 } else { kappa };
                let mode = match mode {
                    0 => SymmetryMode::Pdm,
                    1 => SymmetryMode::PseudospinExact { a_const },
                    _ => SymmetryMode::SpinExact { a_const },
                };
                MorseProblem::new(MorsePotential::new(d, r0, a).unwrap(), m0, mode, kappa).unwrap()
            })
    }

    proptest! {
        #[test]
        fn physical_form_equals_scaled_xi_form(p in random_problem(), t in 0.01..0.99f64, n in 0u32..4) {
            let cfg = SolverConfig { branch: Some(EnergyBranch::Any), ..Default::default() };
            let dom = admissible_domain(&p, &cfg).unwrap();
            prop_assume!(!dom.is_empty());
            let e = dom[0].lo + t * (dom[0].hi - dom[0].lo);
            for cond in [EigenCondition::Printed, EigenCondition::Normalizable] {
                let xi_form = xi_form_residual(&p, e, n, cond).unwrap();
                let physical = physical_form_residual(&p, e, n, cond).unwrap();
                let scale = physical_form_scale(&p);
                prop_assert!((physical - scale * xi_form).abs() < 1e-10 * (1.0 + physical.abs()));
            }
        }
    }
}
