//! Shooting solver for the radial equation `φ''(x) = Q(x)φ(x)`.
//!
//! Q is built from the physical potential, mass and centrifugal terms at a
//! trial energy without going through the ξ mapping. The approximated
//! equation uses the Pekeris form and lives on the whole x line; the exact
//! one keeps `κ(κ∓1)/(1+x)²` and starts just off `r = 0`.
//!
//! Numerov from both ends, matched at the bottom of Q with the normalized
//! Casoratian `uL(m)uR(m+1) − uL(m+1)uR(m)`, which has no poles in E.

use crate::morse_model::{Component, MorseProblem, SymmetryMode};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("r <= 0 at x = {x} in the unapproximated equation")]
    DomainError { x: f64 },
    #[error("no eigenvalue with {n} nodes in [{lo}, {hi}]")]
    NoEigenvalue { n: u32, lo: f64, hi: f64 },
    #[error("Q <= 0 at grid end x = {x} (E = {energy}); no decaying boundary condition")]
    NonDecayingBoundary { x: f64, energy: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub const DEFAULT_STEPS: usize = 20_000;

/// WKB action each grid end lies beyond the well.
const EDGE_ACTION: f64 = 40.0;

/// `r/r₀` where the unapproximated equation starts.
const R_START: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, steps: usize) -> Result<Self, OracleError> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(OracleError::InvalidGrid(format!(
                "need x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if steps < 100 {
            return Err(OracleError::InvalidGrid(format!(
                "steps must be >= 100, got {steps}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            steps,
        })
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / self.steps as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i == self.steps {
            self.x_max
        } else {
            self.x_min + self.step() * i as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootResult {
    pub energy: f64,
    pub nodes: u32,
    pub mismatch: f64,
    pub converged: bool,
}

/// `Q(x)` in `φ'' = Qφ`, derivatives in x.
pub fn effective_ode_rhs(
    problem: &MorseProblem,
    e: f64,
    x: f64,
    approximated: bool,
) -> Result<f64, OracleError> {
    let pot = &problem.potential;
    let pk = problem.pekeris();
    let s = pot.s_of_x(x);
    let centrifugal = if approximated {
        pk.value(s)
    } else {
        if x <= -1.0 {
            return Err(OracleError::DomainError { x });
        }
        pk.strength / ((1.0 + x) * (1.0 + x))
    };
    let v = pot.value(x);
    let m0 = problem.mass.m0;
    let coupling = match problem.mode {
        SymmetryMode::Pdm => {
            let m = problem.mass.value(pot.beta(), x);
            (m + e - v) * (m0 - e)
        }
        SymmetryMode::PseudospinExact { a_const } => (m0 + a_const - e) * (m0 + e - v),
        SymmetryMode::SpinExact { a_const } => (m0 + e - a_const) * (m0 - e + v),
    };
    let r0 = pot.r0();
    Ok(r0 * r0 * (centrifugal + coupling))
}

/// Orbital number of the regular solution `r^{l+1}` at the origin.
fn regular_power(problem: &MorseProblem) -> u32 {
    match problem.component() {
        Component::Lower => problem.quantum.ell_tilde,
        Component::Upper => problem.quantum.ell,
    }
}

/// Grid from the bottom of Q outward until the WKB action reaches
/// [`EDGE_ACTION`] on each side.
pub fn auto_grid(
    problem: &MorseProblem,
    e: f64,
    approximated: bool,
    steps: usize,
) -> Result<GridSpec, OracleError> {
    let beta = problem.potential.beta();
    let q = |x: f64| effective_ode_rhs(problem, e, x, approximated);
    let lo_search = if approximated {
        -1.0 - 5.0 / beta
    } else {
        -1.0 + 1e-3
    };
    let hi_search = 5.0 + 40.0 / beta;
    let probes = 4000;
    let mut x_bottom = lo_search;
    let mut q_bottom = f64::INFINITY;
    for i in 0..=probes {
        let x = lo_search + (hi_search - lo_search) * i as f64 / probes as f64;
        let v = q(x)?;
        if v < q_bottom {
            q_bottom = v;
            x_bottom = x;
        }
    }
    let dx = 0.01 / beta.max(1e-3);
    let walk = |dir: f64| -> Result<f64, OracleError> {
        let mut x = x_bottom;
        let mut action = 0.0;
        for _ in 0..2_000_000 {
            let next = x + dir * dx;
            if !approximated && next <= -1.0 + R_START {
                return Ok(-1.0 + R_START);
            }
            let v = q(next)?;
            action += dx * v.max(0.0).sqrt();
            x = next;
            if action >= EDGE_ACTION && v > 0.0 {
                return Ok(x);
            }
        }
        Err(OracleError::NonDecayingBoundary { x, energy: e })
    };
    let x_max = walk(1.0)?;
    let x_min = if approximated {
        walk(-1.0)?
    } else {
        -1.0 + R_START
    };
    GridSpec::new(x_min, x_max, steps)
}

/// Energy-independent parts of Q on a grid.
struct Prepared<'a> {
    problem: &'a MorseProblem,
    grid: GridSpec,
    approximated: bool,
    /// `r₀²·centrifugal`
    centrifugal: Vec<f64>,
    /// `m − V` (PDM), `−V` (pseudospin) or `V` (spin)
    shift: Vec<f64>,
}

impl<'a> Prepared<'a> {
    fn new(
        problem: &'a MorseProblem,
        grid: GridSpec,
        approximated: bool,
    ) -> Result<Self, OracleError> {
        let pot = &problem.potential;
        let pk = problem.pekeris();
        let r0sq = pot.r0() * pot.r0();
        let mut centrifugal = Vec::with_capacity(grid.steps + 1);
        let mut shift = Vec::with_capacity(grid.steps + 1);
        for i in 0..=grid.steps {
            let x = grid.x(i);
            let c = if approximated {
                pk.value(pot.s_of_x(x))
            } else {
                if x <= -1.0 {
                    return Err(OracleError::DomainError { x });
                }
                pk.strength / ((1.0 + x) * (1.0 + x))
            };
            centrifugal.push(r0sq * c);
            let v = pot.value(x);
            shift.push(match problem.mode {
                SymmetryMode::Pdm => problem.mass.value(pot.beta(), x) - v,
                SymmetryMode::PseudospinExact { .. } => -v,
                SymmetryMode::SpinExact { .. } => v,
            });
        }
        Ok(Self {
            problem,
            grid,
            approximated,
            centrifugal,
            shift,
        })
    }

    fn q(&self, i: usize, e: f64) -> f64 {
        let m0 = self.problem.mass.m0;
        let g = self.shift[i];
        let coupling = match self.problem.mode {
            SymmetryMode::Pdm => (g + e) * (m0 - e),
            SymmetryMode::PseudospinExact { a_const } => (m0 + a_const - e) * (m0 + e + g),
            SymmetryMode::SpinExact { a_const } => (m0 + e - a_const) * (m0 - e + g),
        };
        let r0 = self.problem.potential.r0();
        self.centrifugal[i] + r0 * r0 * coupling
    }

    /// Bottom of Q, away from the ends.
    fn match_index(&self, e: f64) -> usize {
        let n = self.grid.steps;
        let mut best = (n / 2, f64::INFINITY);
        for i in 2..n - 1 {
            let q = self.q(i, e);
            if q < best.1 {
                best = (i, q);
            }
        }
        best.0
    }
}

struct Solution {
    left: Vec<f64>,
    right: Vec<f64>,
    mismatch: f64,
}

const RESCALE: f64 = 1e150;

fn numerov_step(u_prev: f64, u: f64, f_prev: f64, f: f64, f_next: f64) -> f64 {
    (2.0 * u * (1.0 + 5.0 * f) - u_prev * (1.0 - f_prev)) / (1.0 - f_next)
}

fn integrate(prep: &Prepared, e: f64, m: usize) -> Result<Solution, OracleError> {
    let grid = &prep.grid;
    let n = grid.steps;
    let h = grid.step();
    let h2 = h * h / 12.0;
    let q: Vec<f64> = (0..=n).map(|i| prep.q(i, e)).collect();
    let f: Vec<f64> = q.iter().map(|v| h2 * v).collect();

    if q[n] <= 0.0 {
        return Err(OracleError::NonDecayingBoundary {
            x: grid.x_max,
            energy: e,
        });
    }
    if prep.approximated && q[0] <= 0.0 {
        return Err(OracleError::NonDecayingBoundary {
            x: grid.x_min,
            energy: e,
        });
    }

    let mut left = vec![0.0; n + 1];
    let start = if prep.approximated {
        left[0] = 1.0;
        left[1] = (h * 0.5 * (q[0].sqrt() + q[1].sqrt())).exp() * (q[0] / q[1]).powf(0.25);
        0
    } else {
        // regular series r^{l+1}, started once Numerov is well resolved
        let power = regular_power(prep.problem) as i32 + 1;
        let i0 = (0..m)
            .find(|&i| f[i].abs() <= 0.1 && f[i + 1].abs() <= 0.1)
            .unwrap_or(0);
        left[i0] = (1.0 + grid.x(i0)).powi(power);
        left[i0 + 1] = (1.0 + grid.x(i0 + 1)).powi(power);
        i0
    };
    for i in start + 1..=m {
        left[i + 1] = numerov_step(left[i - 1], left[i], f[i - 1], f[i], f[i + 1]);
        if left[i + 1].abs() > RESCALE {
            left[start..=i + 1].iter_mut().for_each(|v| *v /= RESCALE);
        }
    }

    let mut right = vec![0.0; n + 1];
    right[n] = 1.0;
    right[n - 1] = (h * 0.5 * (q[n].sqrt() + q[n - 1].sqrt())).exp() * (q[n] / q[n - 1]).powf(0.25);
    for i in (m..n).rev() {
        right[i - 1] = numerov_step(right[i + 1], right[i], f[i + 1], f[i], f[i - 1]);
        if right[i - 1].abs() > RESCALE {
            right[i - 1..=n].iter_mut().for_each(|v| *v /= RESCALE);
        }
    }

    let (l0, l1, r0, r1) = (left[m], left[m + 1], right[m], right[m + 1]);
    let norm = l0.hypot(l1) * r0.hypot(r1);
    let mismatch = if norm > 0.0 {
        (l0 * r1 - l1 * r0) / norm
    } else {
        0.0
    };
    Ok(Solution {
        left,
        right,
        mismatch,
    })
}

fn count_nodes(sol: &Solution, m: usize) -> u32 {
    let scale = if sol.right[m] != 0.0 {
        sol.left[m] / sol.right[m]
    } else {
        1.0
    };
    let stitched = sol.left[..m]
        .iter()
        .copied()
        .chain(sol.right[m..].iter().map(|v| v * scale));
    let mut nodes = 0;
    let mut last = 0.0f64;
    for v in stitched {
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                nodes += 1;
            }
            last = v;
        }
    }
    nodes
}

/// Eigenvalue with exactly `n` nodes inside `bracket`.
///
/// `grid = None` builds one with [`auto_grid`] at the bracket midpoint.
pub fn shoot_eigenvalue(
    problem: &MorseProblem,
    n: u32,
    bracket: (f64, f64),
    grid: Option<GridSpec>,
    approximated: bool,
) -> Result<ShootResult, OracleError> {
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(OracleError::NoEigenvalue { n, lo, hi });
    }
    let mid = 0.5 * (lo + hi);
    let grid = match grid {
        Some(g) => g,
        None => auto_grid(problem, mid, approximated, DEFAULT_STEPS)?,
    };
    let prep = Prepared::new(problem, grid, approximated)?;
    for samples in SAMPLE_PASSES {
        if let Some(r) = shoot_pass(&prep, n, bracket, samples)? {
            return Ok(r);
        }
    }
    Err(OracleError::NoEigenvalue { n, lo, hi })
}

/// Coarse then fine sampling of the matching function.
const SAMPLE_PASSES: [usize; 2] = [64, 1024];

/// One sampling pass over `bracket`; `None` when no sign change yields a
/// solution with `n` nodes.
fn shoot_pass(
    prep: &Prepared,
    n: u32,
    bracket: (f64, f64),
    samples: usize,
) -> Result<Option<ShootResult>, OracleError> {
    let (lo, hi) = bracket;
    let mid = 0.5 * (lo + hi);
    let m = prep.match_index(mid);
    // energies without a decaying boundary are skipped, not fatal
    let mismatch = |e: f64| match integrate(prep, e, m) {
        Ok(s) => Ok(Some(s.mismatch)),
        Err(OracleError::NonDecayingBoundary { .. }) => Ok(None),
        Err(err) => Err(err),
    };
    let energies: Vec<f64> = (0..=samples)
        .map(|i| {
            if i == samples {
                hi
            } else {
                lo + (hi - lo) * i as f64 / samples as f64
            }
        })
        .collect();
    let values = energies
        .iter()
        .map(|&e| mismatch(e))
        .collect::<Result<Vec<_>, _>>()?;
    if values.iter().all(Option::is_none) {
        return Err(OracleError::NonDecayingBoundary {
            x: prep.grid.x_max,
            energy: mid,
        });
    }
    let mut checked = Vec::new();
    for k in 0..samples {
        let (Some(f_lo), Some(f_hi)) = (values[k], values[k + 1]) else {
            continue;
        };
        let (mut a, mut fa, mut b) = (energies[k], f_lo, energies[k + 1]);
        if fa == 0.0 || fa.signum() == f_hi.signum() {
            continue;
        }
        for _ in 0..200 {
            let c = a + 0.5 * (b - a);
            if c <= a || c >= b {
                break;
            }
            let Some(fc) = mismatch(c)? else { break };
            if fc == 0.0 {
                a = c;
                b = c;
                break;
            }
            if fc.signum() == fa.signum() {
                a = c;
                fa = fc;
            } else {
                b = c;
            }
        }
        let e = a + 0.5 * (b - a);
        if checked.contains(&e.to_bits()) {
            continue;
        }
        checked.push(e.to_bits());
        let sol = integrate(prep, e, m)?;
        let nodes = count_nodes(&sol, m);
        if nodes == n {
            let converged = (b - a) <= 1e-13 * e.abs().max(1.0);
            return Ok(Some(ShootResult {
                energy: e,
                nodes,
                mismatch: sol.mismatch,
                converged,
            }));
        }
    }
    Ok(None)
}

/// Shoot with brackets widening around `guess`. Every bracket gets the
/// coarse pass before any gets the fine one.
pub fn shoot_near(
    problem: &MorseProblem,
    n: u32,
    guess: f64,
    approximated: bool,
    steps: usize,
) -> Result<ShootResult, OracleError> {
    let scale = problem.potential.depth().max(guess.abs() * 1e-3);
    let grid = auto_grid(problem, guess, approximated, steps)?;
    let prep = Prepared::new(problem, grid, approximated)?;
    let widths = [1e-3, 1e-2, 1e-1];
    let mut last = None;
    for samples in SAMPLE_PASSES {
        for w in widths {
            let bracket = (guess - w * scale, guess + w * scale);
            match shoot_pass(&prep, n, bracket, samples) {
                Ok(Some(r)) => return Ok(r),
                Ok(None) => {}
                Err(err) => last = Some(err),
            }
        }
    }
    let w = widths[widths.len() - 1] * scale;
    Err(last.unwrap_or(OracleError::NoEigenvalue {
        n,
        lo: guess - w,
        hi: guess + w,
    }))
}

/// Relative shift `|E_a − E_b|/|E_b|` between two shoots near `guess`.
pub fn compare_shoots(
    problem: &MorseProblem,
    n: u32,
    guess: f64,
    first_approximated: bool,
    second_approximated: bool,
) -> Result<f64, OracleError> {
    let a = shoot_near(problem, n, guess, first_approximated, DEFAULT_STEPS)?;
    let b = shoot_near(problem, n, guess, second_approximated, DEFAULT_STEPS)?;
    Ok((a.energy - b.energy).abs() / b.energy.abs())
}

/// Relative eigenvalue shift caused by the Pekeris replacement.
/// Exactly 0 when there is no centrifugal term.
pub fn pekeris_error_report(
    problem: &MorseProblem,
    n: u32,
    energy: f64,
) -> Result<f64, OracleError> {
    if problem.pekeris().strength == 0.0 {
        return Ok(0.0);
    }
    compare_shoots(problem, n, energy, true, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{solve_energy, SolverConfig};
    use crate::morse_model::MorsePotential;

    fn spin(d: f64, r0: f64, a: f64, m0: f64, a_const: f64, kappa: i32) -> MorseProblem {
        MorseProblem::new(
            MorsePotential::new(d, r0, a).unwrap(),
            m0,
            SymmetryMode::SpinExact { a_const },
            kappa,
        )
        .unwrap()
    }

    #[test]
    fn spin_with_zero_mass_factor_is_pure_centrifugal() {
        let p = spin(1.0, 1.2, 1.5, 5.0, 3.0, 2);
        let e = 3.0 - 5.0;
        for x in [-0.3, 0.0, 0.7] {
            let q = effective_ode_rhs(&p, e, x, false).unwrap();
            let pure = p.potential.r0().powi(2) * p.pekeris().strength / (1.0 + x).powi(2);
            assert!((q - pure).abs() < 1e-12);
        }
    }

    #[test]
    fn approximated_matches_exact_to_second_order() {
        let p = spin(1.0, 1.2, 1.5, 5.0, 0.0, 3);
        let e = 4.5;
        let h = 1e-3;
        let qa = |x| effective_ode_rhs(&p, e, x, true).unwrap();
        let qe = |x| effective_ode_rhs(&p, e, x, false).unwrap();
        assert!((qa(0.0) - qe(0.0)).abs() < 1e-12);
        let d1 = |q: &dyn Fn(f64) -> f64| (q(h) - q(-h)) / (2.0 * h);
        let d2 = |q: &dyn Fn(f64) -> f64| (q(h) - 2.0 * q(0.0) + q(-h)) / (h * h);
        assert!((d1(&qa) - d1(&qe)).abs() < 1e-5);
        assert!((d2(&qa) - d2(&qe)).abs() < 1e-4);
    }

    #[test]
    fn no_centrifugal_contribution_when_strength_vanishes() {
        let p = MorseProblem::new(
            MorsePotential::new(1.0, 1.0, 1.0).unwrap(),
            5.0,
            SymmetryMode::Pdm,
            1,
        )
        .unwrap();
        assert_eq!(p.pekeris().strength, 0.0);
        let a = effective_ode_rhs(&p, 4.0, 0.3, true).unwrap();
        let b = effective_ode_rhs(&p, 4.0, 0.3, false).unwrap();
        assert_eq!(a, b);
        assert_eq!(pekeris_error_report(&p, 0, 4.0).unwrap(), 0.0);
    }

    #[test]
    fn exact_equation_rejects_origin() {
        let p = spin(1.0, 1.0, 1.0, 5.0, 0.0, 1);
        assert!(matches!(
            effective_ode_rhs(&p, 4.0, -1.0, false),
            Err(OracleError::DomainError { .. })
        ));
    }

    #[test]
    fn shoot_matches_closed_form_levels() {
        let p = spin(2.0, 1.0, 1.2, 5.0, 0.0, -1);
        let mut previous = f64::NEG_INFINITY;
        for n in 0..4 {
            let closed = solve_energy(&p, n, &SolverConfig::default()).unwrap().roots[0].energy;
            let shot = shoot_near(&p, n, closed, true, DEFAULT_STEPS).unwrap();
            assert_eq!(shot.nodes, n);
            assert!(shot.converged);
            assert!(
                ((shot.energy - closed) / closed).abs() < 1e-6,
                "n={n}: {} vs {closed}",
                shot.energy
            );
            assert!(shot.energy > previous);
            previous = shot.energy;
        }
    }

    #[test]
    fn bracket_without_root_fails() {
        let p = spin(2.0, 1.0, 1.2, 5.0, 0.0, -1);
        let closed = solve_energy(&p, 0, &SolverConfig::default()).unwrap().roots[0].energy;
        let res = shoot_eigenvalue(&p, 0, (closed + 0.01, closed + 0.05), None, true);
        assert!(matches!(res, Err(OracleError::NoEigenvalue { .. })));
    }

    #[test]
    fn continuum_energy_has_no_decaying_boundary() {
        // above m₀ the spin equation has Q → r₀²M′(m₀ − E) < 0 at large x
        let p = spin(2.0, 1.0, 1.2, 5.0, 0.0, -1);
        let grid = GridSpec::new(-2.0, 30.0, 1000).unwrap();
        let res = shoot_eigenvalue(&p, 0, (5.1, 5.2), Some(grid), true);
        assert!(matches!(res, Err(OracleError::NonDecayingBoundary { .. })));
    }

    #[test]
    fn grid_convergence() {
        let p = spin(2.0, 1.0, 1.2, 5.0, 0.0, -1);
        let closed = solve_energy(&p, 1, &SolverConfig::default()).unwrap().roots[0].energy;
        let a = shoot_near(&p, 1, closed, true, DEFAULT_STEPS)
            .unwrap()
            .energy;
        let b = shoot_near(&p, 1, closed, true, 2 * DEFAULT_STEPS)
            .unwrap()
            .energy;
        assert!(((a - b) / b).abs() < 1e-8);
    }

    #[test]
    fn identical_settings_give_zero_shift() {
        let p = spin(2.0, 1.0, 1.2, 5.0, 0.0, -1);
        let closed = solve_energy(&p, 0, &SolverConfig::default()).unwrap().roots[0].energy;
        assert_eq!(compare_shoots(&p, 0, closed, true, true).unwrap(), 0.0);
        let p = spin(1.0, 1.0, 1.5, 5.0, 0.0, 1);
        let closed = solve_energy(&p, 0, &SolverConfig::default()).unwrap().roots[0].energy;
        let shift = pekeris_error_report(&p, 0, closed).unwrap();
        assert!(shift > 0.0 && shift < 0.05, "{shift}");
    }
}
