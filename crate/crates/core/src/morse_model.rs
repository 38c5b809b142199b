//! Generalized Morse potential, centrifugal approximation, mass function and
//! the maps from a physical problem to the energy-dependent `(ξ₁, ξ₂, ξ₃)`.
//!
//! Coordinates: `x = r/r₀ − 1`, `β = a·r₀`, `δ = 1/a`, `s = e^{−βx}`.
//!
//! In every mode ξ₁ is linear and ξ₃ is a concave quadratic in the energy.
//! [`MorseProblem::xi_expansion`] returns those polynomials expanded about a
//! reference energy with the rest-mass cancellations done symbolically, so
//! offsets far below `ulp(E)` stay resolvable.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("{name} must be finite and > 0, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("kappa must be nonzero")]
    ZeroKappa,
}

fn positive(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ModelError::NotPositive { name, value })
    }
}

fn finite(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ModelError::NonFinite { name, value })
    }
}

/// `V(x) = D e^{−2βx} − 2D e^{−βx}`. β is always derived from `a·r₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorsePotential {
    depth: f64,
    r0: f64,
    width: f64,
}

impl MorsePotential {
    pub fn new(depth: f64, r0: f64, width: f64) -> Result<Self, ModelError> {
        Ok(Self {
            depth: positive("D", depth)?,
            r0: positive("r0", r0)?,
            width: positive("a", width)?,
        })
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn beta(&self) -> f64 {
        self.width * self.r0
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.width
    }

    pub fn x_of_r(&self, r: f64) -> f64 {
        r / self.r0 - 1.0
    }

    pub fn r_of_x(&self, x: f64) -> f64 {
        self.r0 * (1.0 + x)
    }

    pub fn s_of_x(&self, x: f64) -> f64 {
        (-self.beta() * x).exp()
    }

    /// `s = e^{−a(r − r₀)}`.
    pub fn s_of_r(&self, r: f64) -> f64 {
        (-self.width * (r - self.r0)).exp()
    }

    pub fn value(&self, x: f64) -> f64 {
        let e = self.s_of_x(x);
        self.depth * e * e - 2.0 * self.depth * e
    }
}

/// `m(x) = m₀ + m₁e^{−βx} + m₂e^{−2βx}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassFunction {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
}

impl MassFunction {
    /// Position-dependent mass tied to the potential: `m₁ = 2D`, `m₂ = −D`.
    pub fn position_dependent(m0: f64, pot: &MorsePotential) -> Result<Self, ModelError> {
        Ok(Self {
            m0: positive("m0", m0)?,
            m1: 2.0 * pot.depth,
            m2: -pot.depth,
        })
    }

    pub fn constant(m0: f64) -> Result<Self, ModelError> {
        Ok(Self {
            m0: positive("m0", m0)?,
            m1: 0.0,
            m2: 0.0,
        })
    }

    pub fn value(&self, beta: f64, x: f64) -> f64 {
        let e = (-beta * x).exp();
        self.m0 + self.m1 * e + self.m2 * e * e
    }
}

const ORBITAL_LETTERS: &[u8] = b"spdfghiklmnoqrtuvwxyz";

/// κ with the orbital and pseudo-orbital numbers it fixes.
///
/// `κ(κ+1) = ℓ(ℓ+1)`, `κ(κ−1) = ℓ̃(ℓ̃+1)`, `j = |κ| − ½`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumNumbers {
    pub kappa: i32,
    pub ell: u32,
    pub ell_tilde: u32,
    /// `2j`, always odd.
    pub two_j: u32,
}

impl QuantumNumbers {
    pub fn from_kappa(kappa: i32) -> Result<Self, ModelError> {
        if kappa == 0 {
            return Err(ModelError::ZeroKappa);
        }
        let abs = kappa.unsigned_abs();
        let (ell, ell_tilde) = if kappa < 0 {
            (abs - 1, abs)
        } else {
            (abs, abs - 1)
        };
        Ok(Self {
            kappa,
            ell,
            ell_tilde,
            two_j: 2 * abs - 1,
        })
    }

    /// Aligned spin, `j = ℓ + ½`, `κ < 0`.
    pub fn aligned(&self) -> bool {
        self.kappa < 0
    }

    pub fn kappa_from(two_j: u32, aligned: bool) -> i32 {
        let magnitude = two_j.div_ceil(2) as i32;
        if aligned {
            -magnitude
        } else {
            magnitude
        }
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Spectroscopic label such as `1s1/2`, prefixed by `n + 1`. The letter
    /// follows ℓ, which for κ < 0 equals ℓ̃ − 1.
    pub fn label(&self, n: u32) -> String {
        let letter = ORBITAL_LETTERS
            .get(self.ell as usize)
            .map(|&c| c as char)
            .unwrap_or('?');
        format!("{}{}{}/2", n + 1, letter, self.two_j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymmetryMode {
    /// Position-dependent mass with `dm/dr = −dΣ/dr` and Δ the Morse potential.
    Pdm,
    /// Constant mass, `Σ = A`, Δ the Morse potential.
    PseudospinExact { a_const: f64 },
    /// Constant mass, `Δ = A`, Σ the Morse potential.
    SpinExact { a_const: f64 },
}

impl SymmetryMode {
    pub fn name(&self) -> &'static str {
        match self {
            SymmetryMode::Pdm => "pdm",
            SymmetryMode::PseudospinExact { .. } => "pseudospin",
            SymmetryMode::SpinExact { .. } => "spin",
        }
    }

    pub fn a_const(&self) -> Option<f64> {
        match *self {
            SymmetryMode::Pdm => None,
            SymmetryMode::PseudospinExact { a_const } | SymmetryMode::SpinExact { a_const } => {
                Some(a_const)
            }
        }
    }

    pub fn component(&self) -> Component {
        match self {
            SymmetryMode::SpinExact { .. } => Component::Upper,
            _ => Component::Lower,
        }
    }
}

/// Spinor component solved for: lower (φ, centrifugal `κ(κ−1)`) or upper
/// (χ, centrifugal `κ(κ+1)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Lower,
    Upper,
}

/// `c₁ + c₂e^{−βx} + c₃e^{−2βx}` matched to `1/(1+x)²` through second order.
pub fn pekeris_coefficients(beta: f64) -> Result<(f64, f64, f64), ModelError> {
    let beta = positive("beta", beta)?;
    let inv = 1.0 / beta;
    let inv2 = inv * inv;
    Ok((
        1.0 - 3.0 * inv + 3.0 * inv2,
        4.0 * inv - 6.0 * inv2,
        -inv + 3.0 * inv2,
    ))
}

pub fn centrifugal_strength(kappa: i32, r0: f64, component: Component) -> f64 {
    let k = kappa as f64;
    let factor = match component {
        Component::Lower => k * (k - 1.0),
        Component::Upper => k * (k + 1.0),
    };
    factor / (r0 * r0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PekerisCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `a₀` or `b₀`.
    pub strength: f64,
}

impl PekerisCoefficients {
    /// Approximated centrifugal term `strength·(c₁ + c₂s + c₃s²)`.
    pub fn value(&self, s: f64) -> f64 {
        self.strength * (self.c1 + self.c2 * s + self.c3 * s * s)
    }
}

/// ξ values, already multiplied by δ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiTriple {
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

/// `p₀ + p₁ε + p₂ε²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic(pub [f64; 3]);

impl Quadratic {
    pub fn eval(&self, eps: f64) -> f64 {
        let [p0, p1, p2] = self.0;
        p0 + eps * (p1 + eps * p2)
    }
}

/// ξ's as polynomials in `ε = E − center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiExpansion {
    pub center: f64,
    pub xi1: Quadratic,
    pub xi2: Quadratic,
    pub xi3: Quadratic,
}

impl XiExpansion {
    pub fn at_offset(&self, eps: f64) -> XiTriple {
        XiTriple {
            xi1: self.xi1.eval(eps),
            xi2: self.xi2.eval(eps),
            xi3: self.xi3.eval(eps),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseProblem {
    pub potential: MorsePotential,
    pub mass: MassFunction,
    pub mode: SymmetryMode,
    pub quantum: QuantumNumbers,
}

impl MorseProblem {
    pub fn new(
        potential: MorsePotential,
        m0: f64,
        mode: SymmetryMode,
        kappa: i32,
    ) -> Result<Self, ModelError> {
        let mass = match mode {
            SymmetryMode::Pdm => MassFunction::position_dependent(m0, &potential)?,
            SymmetryMode::PseudospinExact { a_const } | SymmetryMode::SpinExact { a_const } => {
                finite("A", a_const)?;
                MassFunction::constant(m0)?
            }
        };
        Ok(Self {
            potential,
            mass,
            mode,
            quantum: QuantumNumbers::from_kappa(kappa)?,
        })
    }

    pub fn kappa(&self) -> i32 {
        self.quantum.kappa
    }

    pub fn component(&self) -> Component {
        self.mode.component()
    }

    pub fn pekeris(&self) -> PekerisCoefficients {
        let (c1, c2, c3) =
            pekeris_coefficients(self.potential.beta()).expect("beta > 0 by construction");
        let strength = centrifugal_strength(self.kappa(), self.potential.r0(), self.component());
        PekerisCoefficients {
            c1,
            c2,
            c3,
            strength,
        }
    }

    /// Energy about which the ξ polynomials are expanded: the rest mass on
    /// the side where bound states of the mode live.
    pub fn reference_energy(&self) -> f64 {
        match self.mode {
            SymmetryMode::PseudospinExact { .. } => -self.mass.m0,
            _ => self.mass.m0,
        }
    }

    /// Direct evaluation of the ξ mapping at energy `e`.
    pub fn xi(&self, e: f64) -> XiTriple {
        let pk = self.pekeris();
        let d2 = self.potential.delta().powi(2);
        let depth = self.potential.depth();
        let MassFunction { m0, m1, m2 } = self.mass;
        let (s1, s2, s3) = (
            pk.strength * pk.c1,
            pk.strength * pk.c2,
            pk.strength * pk.c3,
        );
        match self.mode {
            SymmetryMode::Pdm => XiTriple {
                xi1: d2 * (s3 + (m0 - e) * (m2 - depth)),
                xi2: -d2 * (s2 + (m0 - e) * (m1 + 2.0 * depth)),
                xi3: d2 * (s1 + (m0 - e) * (m0 + e)),
            },
            SymmetryMode::PseudospinExact { a_const } => {
                let big_m = m0 + a_const - e;
                XiTriple {
                    xi1: d2 * (s3 - big_m * depth),
                    xi2: -d2 * (2.0 * big_m * depth + s2),
                    xi3: d2 * (s1 + big_m * (m0 + e)),
                }
            }
            SymmetryMode::SpinExact { a_const } => {
                let big_m = m0 + e - a_const;
                XiTriple {
                    xi1: d2 * (s3 + depth * big_m),
                    xi2: d2 * (2.0 * depth * big_m - s2),
                    xi3: d2 * (s1 + big_m * (m0 - e)),
                }
            }
        }
    }

    /// The same mapping as [`Self::xi`], written as polynomials in
    /// `ε = E − center`.
    pub fn xi_expansion(&self, center: f64) -> XiExpansion {
        let pk = self.pekeris();
        let d2 = self.potential.delta().powi(2);
        let depth = self.potential.depth();
        let MassFunction { m0, m1, m2 } = self.mass;
        let (s1, s2, s3) = (
            pk.strength * pk.c1,
            pk.strength * pk.c2,
            pk.strength * pk.c3,
        );
        let scale = |p: [f64; 3]| Quadratic([d2 * p[0], d2 * p[1], d2 * p[2]]);
        let (xi1, xi2, xi3) = match self.mode {
            SymmetryMode::Pdm => {
                // m₀ − E = u − ε, m₀ + E = v + ε
                let (u, v) = (m0 - center, m0 + center);
                (
                    scale([s3 + u * (m2 - depth), -(m2 - depth), 0.0]),
                    scale([-(s2 + u * (m1 + 2.0 * depth)), m1 + 2.0 * depth, 0.0]),
                    scale([s1 + u * v, u - v, -1.0]),
                )
            }
            SymmetryMode::PseudospinExact { a_const } => {
                // M = μ − ε, m₀ + E = v + ε
                let (mu, v) = (m0 + a_const - center, m0 + center);
                (
                    scale([s3 - mu * depth, depth, 0.0]),
                    scale([-(2.0 * mu * depth + s2), 2.0 * depth, 0.0]),
                    scale([s1 + mu * v, mu - v, -1.0]),
                )
            }
            SymmetryMode::SpinExact { a_const } => {
                // M′ = μ + ε, m₀ − E = u − ε
                let (mu, u) = (m0 + center - a_const, m0 - center);
                (
                    scale([s3 + depth * mu, depth, 0.0]),
                    scale([2.0 * depth * mu - s2, 2.0 * depth, 0.0]),
                    scale([s1 + mu * u, u - mu, -1.0]),
                )
            }
        };
        XiExpansion {
            center,
            xi1,
            xi2,
            xi3,
        }
    }
}

/// ξ mapping at energy `e`; see [`MorseProblem::xi`].
pub fn xi_parameters(problem: &MorseProblem, e: f64) -> XiTriple {
    problem.xi(e)
}
