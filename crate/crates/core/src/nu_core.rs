//! Parametric Nikiforov-Uvarov method.
//!
//! Equations of the form
//!
//! ```text
//! Ψ'' + (α₁ − α₂s)/(s(1 − α₃s)) Ψ' + (−ξ₁s² + ξ₂s − ξ₃)/(s(1 − α₃s))² Ψ = 0
//! ```
//!
//! are characterised by six inputs. Everything else (the spectrum condition
//! and the polynomial eigenfunctions) follows from the derived parameters
//! α₄…α₁₃ computed here.
//!
//! Two spectrum conditions exist for `α₃ = 0`, one per root of the
//! quadratic for `k`:
//!
//! * [`eigen_residual_degenerate`] is the printed degenerate-case formula,
//!   whose `−2√(α₈α₉)` term belongs to the `s^{α₄−√α₈}` root.
//! * [`eigen_residual_normalizable`] is the `α₃ → 0` limit of the general
//!   condition. It belongs to the `s^{α₄+√α₈}` eigenfunction returned by
//!   [`eigenfunction_degenerate`], so it is the one that yields bound states.

use crate::special_functions::{jacobi, laguerre};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discriminant {
    Alpha8,
    Alpha9,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NuError {
    #[error("NU input contains a non-finite value")]
    NonFinite,
    #[error("negative square-root argument for {which:?}: {value}")]
    NegativeDiscriminant { which: Discriminant, value: f64 },
    #[error("operation requires alpha3 {expected}, got alpha3 = {alpha3}")]
    WrongBranch { expected: &'static str, alpha3: f64 },
    #[error("s = {s} outside the eigenfunction domain")]
    DomainError { s: f64 },
    #[error("alpha13 = {alpha13} >= 0: eigenfunction does not decay")]
    NonDecaying { alpha13: f64 },
}

/// The six coefficients of the hypergeometric-type equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuInput {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

impl NuInput {
    pub fn new(
        alpha1: f64,
        alpha2: f64,
        alpha3: f64,
        xi1: f64,
        xi2: f64,
        xi3: f64,
    ) -> Result<Self, NuError> {
        let input = Self {
            alpha1,
            alpha2,
            alpha3,
            xi1,
            xi2,
            xi3,
        };
        if [alpha1, alpha2, alpha3, xi1, xi2, xi3]
            .iter()
            .all(|v| v.is_finite())
        {
            Ok(input)
        } else {
            Err(NuError::NonFinite)
        }
    }

    /// The Morse-type shape `α₁ = 1, α₂ = α₃ = 0`.
    pub fn exponential_type(xi1: f64, xi2: f64, xi3: f64) -> Result<Self, NuError> {
        Self::new(1.0, 0.0, 0.0, xi1, xi2, xi3)
    }

    fn is_degenerate(&self) -> bool {
        self.alpha3 == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuDerived {
    pub alpha4: f64,
    pub alpha5: f64,
    pub alpha6: f64,
    pub alpha7: f64,
    pub alpha8: f64,
    pub alpha9: f64,
    pub alpha10: f64,
    pub alpha11: f64,
    pub alpha12: f64,
    pub alpha13: f64,
}

impl NuDerived {
    /// Roots `k₁,₂ = −(α₇ + 2α₃α₈) ± 2√(α₈α₉)` of the square-completion condition.
    pub fn k_roots(&self, input: &NuInput) -> (f64, f64) {
        let base = -(self.alpha7 + 2.0 * input.alpha3 * self.alpha8);
        let spread = 2.0 * (self.alpha8 * self.alpha9).sqrt();
        (base + spread, base - spread)
    }
}

pub fn derive_parameters(input: &NuInput) -> Result<NuDerived, NuError> {
    let NuInput {
        alpha1,
        alpha2,
        alpha3,
        xi1,
        xi2,
        xi3,
    } = *input;
    if ![alpha1, alpha2, alpha3, xi1, xi2, xi3]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(NuError::NonFinite);
    }
    let alpha4 = 0.5 * (1.0 - alpha1);
    let alpha5 = 0.5 * (alpha2 - 2.0 * alpha3);
    let alpha6 = alpha5 * alpha5 + xi1;
    let alpha7 = 2.0 * alpha4 * alpha5 - xi2;
    let alpha8 = alpha4 * alpha4 + xi3;
    if alpha8 < 0.0 {
        return Err(NuError::NegativeDiscriminant {
            which: Discriminant::Alpha8,
            value: alpha8,
        });
    }
    let alpha9 = alpha3 * alpha7 + alpha3 * alpha3 * alpha8 + alpha6;
    if alpha9 < 0.0 {
        return Err(NuError::NegativeDiscriminant {
            which: Discriminant::Alpha9,
            value: alpha9,
        });
    }
    let sq8 = alpha8.sqrt();
    let sq9 = alpha9.sqrt();
    Ok(NuDerived {
        alpha4,
        alpha5,
        alpha6,
        alpha7,
        alpha8,
        alpha9,
        alpha10: alpha1 + 2.0 * alpha4 + 2.0 * sq8,
        alpha11: alpha2 - 2.0 * alpha5 + 2.0 * (sq9 + alpha3 * sq8),
        alpha12: alpha4 + sq8,
        alpha13: alpha5 - (sq9 + alpha3 * sq8),
    })
}

/// Left-hand side of the general (`α₃ ≠ 0`) spectrum condition.
pub fn eigen_residual_general(d: &NuDerived, input: &NuInput, n: u32) -> Result<f64, NuError> {
    if input.is_degenerate() {
        return Err(NuError::WrongBranch {
            expected: "!= 0",
            alpha3: input.alpha3,
        });
    }
    Ok(general_lhs(d, input, n))
}

fn general_lhs(d: &NuDerived, input: &NuInput, n: u32) -> f64 {
    let n = n as f64;
    let a3 = input.alpha3;
    let sq8 = d.alpha8.sqrt();
    let sq9 = d.alpha9.sqrt();
    input.alpha2 * n - (2.0 * n + 1.0) * d.alpha5
        + (2.0 * n + 1.0) * (sq9 + a3 * sq8)
        + n * (n - 1.0) * a3
        + d.alpha7
        + 2.0 * a3 * d.alpha8
        + 2.0 * (d.alpha8 * d.alpha9).sqrt()
}

/// Printed degenerate-case condition, reduced to `α₃ = 0`:
/// `α₂n − 2α₅n + (2n+1)√α₉ + α₇ − 2√(α₈α₉) + α₅`.
///
/// The printed form also carries `−α₃√α₈` and `+2α₃α₈` terms; they vanish
/// identically on this branch and are not evaluated.
pub fn eigen_residual_degenerate(d: &NuDerived, input: &NuInput, n: u32) -> Result<f64, NuError> {
    if !input.is_degenerate() {
        return Err(NuError::WrongBranch {
            expected: "== 0",
            alpha3: input.alpha3,
        });
    }
    let nf = n as f64;
    Ok(
        input.alpha2 * nf - 2.0 * d.alpha5 * nf + (2.0 * nf + 1.0) * d.alpha9.sqrt() + d.alpha7
            - 2.0 * (d.alpha8 * d.alpha9).sqrt()
            + d.alpha5,
    )
}

/// `α₃ = 0` limit of the general condition:
/// `α₂n − (2n+1)α₅ + (2n+1)√α₉ + α₇ + 2√(α₈α₉)`.
pub fn eigen_residual_normalizable(d: &NuDerived, input: &NuInput, n: u32) -> Result<f64, NuError> {
    if !input.is_degenerate() {
        return Err(NuError::WrongBranch {
            expected: "== 0",
            alpha3: input.alpha3,
        });
    }
    Ok(general_lhs(d, input, n))
}

/// Unnormalized `s^{α₁₂}(1 − α₃s)^{−α₁₂−α₁₃/α₃} P_n^{(α₁₀−1, α₁₁/α₃−α₁₀−1)}(1 − 2α₃s)`.
///
/// Valid for `s ∈ (0, 1/α₃)` when `α₃ > 0` and `s > 0` when `α₃ < 0`.
pub fn eigenfunction_general(
    d: &NuDerived,
    input: &NuInput,
    n: u32,
    s: f64,
) -> Result<f64, NuError> {
    let a3 = input.alpha3;
    if input.is_degenerate() {
        return Err(NuError::WrongBranch {
            expected: "!= 0",
            alpha3: a3,
        });
    }
    let inside = s > 0.0 && (a3 < 0.0 || s < 1.0 / a3);
    if !inside {
        return Err(NuError::DomainError { s });
    }
    let jac_a = d.alpha10 - 1.0;
    let jac_b = d.alpha11 / a3 - d.alpha10 - 1.0;
    let weight = s.powf(d.alpha12) * (1.0 - a3 * s).powf(-d.alpha12 - d.alpha13 / a3);
    Ok(weight * jacobi(n as usize, jac_a, jac_b, 1.0 - 2.0 * a3 * s))
}

/// Unnormalized `s^{α₁₂} e^{α₁₃s} L_n^{α₁₀−1}(α₁₁s)` for `s ≥ 0`.
pub fn eigenfunction_degenerate(
    d: &NuDerived,
    input: &NuInput,
    n: u32,
    s: f64,
) -> Result<f64, NuError> {
    if !input.is_degenerate() {
        return Err(NuError::WrongBranch {
            expected: "== 0",
            alpha3: input.alpha3,
        });
    }
    if d.alpha13 >= 0.0 {
        return Err(NuError::NonDecaying { alpha13: d.alpha13 });
    }
    if !(s >= 0.0) {
        return Err(NuError::DomainError { s });
    }
    Ok(s.powf(d.alpha12)
        * (d.alpha13 * s).exp()
        * laguerre(n as usize, d.alpha10 - 1.0, d.alpha11 * s))
}
