//! Radial spinor component `norm · s^{w₁} e^{−w₂s} L_n^{2w₁}(2w₂s)`.
//!
//! `w₁ = √ξ₃` and `w₂ = √ξ₁` at the eigenvalue. PDM and pseudospin give the
//! lower component, spin the upper one. Normalization is over the single
//! component on `r ∈ (0, ∞)`.

use crate::eigensolver::RootResult;
use crate::morse_model::{Component, MorseProblem, SymmetryMode};
use crate::special_functions::{integrate, laguerre, QuadratureError, QuadratureSpec};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveError {
    #[error("invalid bound state: {0}")]
    InvalidState(String),
    #[error("normalization integral did not converge (value {value}, error {error})")]
    DivergentNorm { value: f64, error: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    pub energy: f64,
    pub n: u32,
    pub kappa: i32,
    pub mode: SymmetryMode,
    pub component: Component,
    pub w1: f64,
    pub w2: f64,
    pub norm: f64,
    /// Potential width `a`.
    pub width: f64,
    pub r0: f64,
}

/// `(w₁, w₂)` straight from the physical parameters at energy `e`.
pub fn recompute_parameters(problem: &MorseProblem, e: f64) -> (f64, f64) {
    let pk = problem.pekeris();
    let (s1, s3) = (pk.strength * pk.c1, pk.strength * pk.c3);
    let delta = problem.potential.delta();
    let depth = problem.potential.depth();
    let m = problem.mass;
    let (a1, a3) = match problem.mode {
        SymmetryMode::Pdm => (s1 + m.m0 * m.m0 - e * e, s3 + (m.m0 - e) * (m.m2 - depth)),
        SymmetryMode::PseudospinExact { a_const } => {
            let big_m = m.m0 + a_const - e;
            (s1 + big_m * (m.m0 + e), s3 - depth * big_m)
        }
        SymmetryMode::SpinExact { a_const } => {
            let big_m = m.m0 + e - a_const;
            (s1 + big_m * (m.m0 - e), s3 + depth * big_m)
        }
    };
    (delta * a1.sqrt(), delta * a3.sqrt())
}

impl BoundState {
    /// State at `E = center + offset`, with ξ evaluated at the offset.
    pub fn new(
        problem: &MorseProblem,
        center: f64,
        offset: f64,
        n: u32,
    ) -> Result<Self, WaveError> {
        let xi = problem.xi_expansion(center).at_offset(offset);
        if !(xi.xi1 > 0.0) || !(xi.xi3 >= 0.0) {
            return Err(WaveError::InvalidState(format!(
                "xi1 = {}, xi3 = {}",
                xi.xi1, xi.xi3
            )));
        }
        Ok(Self {
            energy: center + offset,
            n,
            kappa: problem.kappa(),
            mode: problem.mode,
            component: problem.component(),
            w1: xi.xi3.sqrt(),
            w2: xi.xi1.sqrt(),
            norm: 1.0,
            width: problem.potential.width(),
            r0: problem.potential.r0(),
        })
    }

    /// First root of a solve.
    pub fn from_roots(
        problem: &MorseProblem,
        result: &RootResult,
        n: u32,
    ) -> Option<Result<Self, WaveError>> {
        result
            .roots
            .first()
            .map(|r| Self::new(problem, result.center, r.offset, n))
    }

    fn check(&self) -> Result<(), WaveError> {
        if !(self.w2 > 0.0) || !(self.w1 >= 0.0) || !(self.norm > 0.0) || !self.norm.is_finite() {
            return Err(WaveError::InvalidState(format!(
                "w1 = {}, w2 = {}, norm = {}",
                self.w1, self.w2, self.norm
            )));
        }
        Ok(())
    }

    pub fn s_of_r(&self, r: f64) -> f64 {
        (-self.width * (r - self.r0)).exp()
    }

    pub fn with_norm(mut self, norm: f64) -> Self {
        self.norm = norm;
        self
    }
}

pub fn component_value(state: &BoundState, s: f64) -> Result<f64, WaveError> {
    state.check()?;
    if !(s >= 0.0) {
        return Err(WaveError::InvalidState(format!("s must be >= 0, got {s}")));
    }
    let decay = (-state.w2 * s).exp();
    if decay == 0.0 {
        return Ok(0.0);
    }
    let poly = laguerre(state.n as usize, 2.0 * state.w1, 2.0 * state.w2 * s);
    Ok(state.norm * s.powf(state.w1) * decay * poly)
}

pub fn component_at_r(state: &BoundState, r: f64) -> Result<f64, WaveError> {
    component_value(state, state.s_of_r(r))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSamples {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub component: Component,
}

fn uniform_grid(r_lo: f64, r_hi: f64, count: usize) -> Result<Vec<f64>, WaveError> {
    if !(r_lo > 0.0 && r_lo < r_hi && r_hi.is_finite()) {
        return Err(WaveError::InvalidGrid(format!(
            "need 0 < r_lo < r_hi, got [{r_lo}, {r_hi}]"
        )));
    }
    if count < 2 {
        return Err(WaveError::InvalidGrid(format!(
            "count must be >= 2, got {count}"
        )));
    }
    let step = (r_hi - r_lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                r_hi
            } else {
                r_lo + step * i as f64
            }
        })
        .collect())
}

pub fn sample_radial(
    state: &BoundState,
    r_lo: f64,
    r_hi: f64,
    count: usize,
) -> Result<RadialSamples, WaveError> {
    let grid = uniform_grid(r_lo, r_hi, count)?;
    let values = grid
        .iter()
        .map(|&r| component_at_r(state, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RadialSamples {
        grid,
        values,
        component: state.component,
    })
}

/// Quadrature over `r ∈ [0, ∞)` scaled to the state.
pub fn default_quadrature(state: &BoundState) -> QuadratureSpec {
    QuadratureSpec::semi_infinite(0.0, state.r0.max(1.0 / state.width))
}

/// `∫₀^∞ |component(r)|² dr` at the current norm.
pub fn norm_integral(
    state: &BoundState,
    quad: &QuadratureSpec,
) -> Result<crate::special_functions::Integral, WaveError> {
    state.check()?;
    let f = |r: f64| component_at_r(state, r).map(|v| v * v).unwrap_or(f64::NAN);
    Ok(integrate(f, quad)?)
}

pub fn normalize(state: &BoundState, quad: &QuadratureSpec) -> Result<BoundState, WaveError> {
    let integral = norm_integral(state, quad)?;
    let ok = integral.value.is_finite()
        && integral.value > 0.0
        && integral.error <= 1e-10 * integral.value;
    if !ok {
        return Err(WaveError::DivergentNorm {
            value: integral.value,
            error: integral.error,
        });
    }
    Ok(state.with_norm(state.norm / integral.value.sqrt()))
}

/// Mass the Laguerre form places at `r < 0` (`s > e^{β}`), relative to the
/// physical-range mass. Diagnostic only.
pub fn truncated_tail_mass(state: &BoundState, quad: &QuadratureSpec) -> Result<f64, WaveError> {
    let inside = norm_integral(state, quad)?.value;
    let f = |y: f64| component_at_r(state, -y).map(|v| v * v).unwrap_or(f64::NAN);
    let tail = integrate(f, quad)?.value;
    Ok(tail / inside)
}

/// Sign changes on a uniform r grid, ignoring exact zeros.
pub fn count_nodes(
    state: &BoundState,
    r_lo: f64,
    r_hi: f64,
    count: usize,
) -> Result<usize, WaveError> {
    let samples = sample_radial(state, r_lo, r_hi, count)?;
    let mut nodes = 0;
    let mut last = 0.0f64;
    for v in samples.values {
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                nodes += 1;
            }
            last = v;
        }
    }
    Ok(nodes)
}
