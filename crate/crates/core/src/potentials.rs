//! 4-potential families `b_μ` (charge-scaled, `b_μ = qA_μ`) and the direction
//! `κ_μ` along which they can be shifted without disturbing a degenerate
//! spinor.

use std::fmt;

use crate::algebra::{bilinear, gammas, BilinearMode, Complex};
use crate::error::{Error, Result};
use crate::spinors::{SpinorField, MIN_SIN_XI, NEAR_DEGENERATE_BOUND};
use crate::symexpr::{ScalarExpr, SpacetimePoint, Var};

/// Bound on imaginary parts of the κ ratios, relative to their magnitude.
pub const KAPPA_IMAG_TOL: f64 = 1e-10;
/// Bound on the point-to-point spread of a constant κ.
pub const KAPPA_SPREAD_TOL: f64 = 1e-10;
/// `|Ψᵀγ²Ψ|` below this fraction of `‖Ψ‖²` counts as vanishing.
pub const DENOMINATOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialFamily {
    Zero,
    /// `a_μ` for the degenerate family.
    Degenerate {
        xi: f64,
        mass: f64,
    },
    /// `a_μ + sκ_μ`.
    Shifted {
        kappa: KappaVector,
    },
    Perturbed {
        e2: f64,
        mass: f64,
        kappa2: KappaSign,
    },
    Control {
        e0: f64,
        v0: f64,
        charge: f64,
    },
    Custom,
}

impl fmt::Display for PotentialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialFamily::Zero => f.write_str("zero"),
            PotentialFamily::Degenerate { .. } => f.write_str("a"),
            PotentialFamily::Shifted { .. } => f.write_str("a+s*kappa"),
            PotentialFamily::Perturbed { .. } => f.write_str("perturbed"),
            PotentialFamily::Control { .. } => f.write_str("control"),
            PotentialFamily::Custom => f.write_str("custom"),
        }
    }
}

/// Charge-scaled 4-potential `(b₀, b₁, b₂, b₃)` with lower indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FourPotentialField {
    components: [ScalarExpr; 4],
    family: PotentialFamily,
}

impl FourPotentialField {
    pub fn new(components: [ScalarExpr; 4], family: PotentialFamily) -> Self {
        FourPotentialField { components, family }
    }

    pub fn zero() -> Self {
        FourPotentialField::new(std::array::from_fn(|_| ScalarExpr::zero()), PotentialFamily::Zero)
    }

    pub fn components(&self) -> &[ScalarExpr; 4] {
        &self.components
    }

    pub fn family(&self) -> &PotentialFamily {
        &self.family
    }

    pub fn value(&self, p: &SpacetimePoint) -> Result<[f64; 4]> {
        Ok([
            self.components[0].eval(p)?,
            self.components[1].eval(p)?,
            self.components[2].eval(p)?,
            self.components[3].eval(p)?,
        ])
    }

    /// Componentwise sum, tagged as custom.
    pub fn plus(&self, other: &FourPotentialField) -> Self {
        FourPotentialField::new(
            std::array::from_fn(|mu| &self.components[mu] + &other.components[mu]),
            PotentialFamily::Custom,
        )
    }
}

/// `a_μ` solving the Dirac equation with the degenerate family:
/// `a₀ = cos ξ ∂ₜf + ∂_z f − g`, `a₁ = cos ξ ∂ₓf − m cot ξ`,
/// `a₂ = cos ξ ∂ᵧf + (∂_z f − g) sin ξ`, `a₃ = g cos ξ`.
pub fn potential_a(f: &ScalarExpr, g: &ScalarExpr, xi: f64, mass: f64) -> Result<FourPotentialField> {
    let (s, c) = xi.sin_cos();
    if !xi.is_finite() || s.abs() < MIN_SIN_XI {
        return Err(Error::invalid("xi", format!("{xi} is a multiple of π")));
    }
    if !(mass > 0.0) {
        return Err(Error::invalid("mass", "must be positive"));
    }
    let d = |v| f.diff(v);
    let dz_minus_g = d(Var::Z) - g;
    Ok(FourPotentialField::new(
        [
            d(Var::T) * c + &dz_minus_g,
            d(Var::X) * c - mass * c / s,
            d(Var::Y) * c + &dz_minus_g * s,
            g * c,
        ],
        PotentialFamily::Degenerate { xi, mass },
    ))
}

/// Constant `κ_μ`, lower index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaVector(pub [f64; 4]);

impl KappaVector {
    /// `(1, 0, sin ξ, −cos ξ)`.
    pub fn degenerate(xi: f64) -> Self {
        let (s, c) = xi.sin_cos();
        KappaVector([1.0, 0.0, s, -c])
    }

    /// `(1, 0, ±1, 0)` of the barrier families.
    pub fn barrier(sign: KappaSign) -> Self {
        KappaVector([1.0, 0.0, sign.value(), 0.0])
    }

    pub fn max_abs_diff(&self, other: &KappaVector) -> f64 {
        self.0
            .iter()
            .zip(other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for KappaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// Sign of `κ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KappaSign {
    Plus,
    Minus,
}

impl KappaSign {
    pub fn value(self) -> f64 {
        match self {
            KappaSign::Plus => 1.0,
            KappaSign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            KappaSign::Plus => '+',
            KappaSign::Minus => '-',
        }
    }
}

impl std::str::FromStr for KappaSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "plus" => Ok(KappaSign::Plus),
            "-" | "-1" | "minus" => Ok(KappaSign::Minus),
            other => Err(Error::invalid("kappa2-sign", format!("expected + or -, got `{other}`"))),
        }
    }
}

/// The raw complex bilinear ratios `(1, κ₁, κ₂, κ₃)` at one point.
pub fn kappa_ratios(field: &SpinorField, p: &SpacetimePoint) -> Result<[Complex; 4]> {
    let psi = field.value(p)?;
    let g = gammas();
    let [g0, g1, g2, g3] = &g.upper;
    let t = BilinearMode::Transpose;
    let den = bilinear(&psi, g2, &psi, t);
    if !(den.norm() > DENOMINATOR_TOL * psi.norm_sqr()) {
        return Err(Error::DegenerateDenominator { magnitude: den.norm() });
    }
    Ok([
        Complex::from(1.0),
        -bilinear(&psi, &(*g0 * *g1 * *g2), &psi, t) / den,
        -bilinear(&psi, g0, &psi, t) / den,
        bilinear(&psi, &(*g0 * *g2 * *g3), &psi, t) / den,
    ])
}

/// κ at one point; imaginary parts must be negligible.
pub fn kappa_from_spinor(field: &SpinorField, p: &SpacetimePoint) -> Result<KappaVector> {
    let r = kappa_ratios(field, p)?;
    let mut k = [0.0; 4];
    for (mu, z) in r.iter().enumerate() {
        let magnitude = z.norm().max(1.0);
        if z.im.abs() > KAPPA_IMAG_TOL * magnitude {
            return Err(Error::ComplexKappa {
                component: mu,
                imag: z.im,
                magnitude,
            });
        }
        k[mu] = z.re;
    }
    Ok(KappaVector(k))
}

/// κ evaluated at every point, required to be the same everywhere.
pub fn constant_kappa(field: &SpinorField, points: &[SpacetimePoint]) -> Result<KappaVector> {
    let mut iter = points.iter();
    let first = match iter.next() {
        Some(p) => kappa_from_spinor(field, p)?,
        None => return Err(Error::invalid("points", "need at least one point")),
    };
    let mut spread: f64 = 0.0;
    for p in iter {
        spread = spread.max(kappa_from_spinor(field, p)?.max_abs_diff(&first));
    }
    if spread > KAPPA_SPREAD_TOL {
        return Err(Error::KappaSpread {
            spread,
            tol: KAPPA_SPREAD_TOL,
        });
    }
    Ok(first)
}

/// Pointwise complex ratios, for inspecting arbitrary spinors.
pub fn kappa_field(field: &SpinorField, points: &[SpacetimePoint]) -> Vec<Result<[Complex; 4]>> {
    points.iter().map(|p| kappa_ratios(field, p)).collect()
}

/// `b_μ = a_μ + sκ_μ`.
pub fn family_b(a: &FourPotentialField, s: &ScalarExpr, kappa: KappaVector) -> FourPotentialField {
    FourPotentialField::new(
        std::array::from_fn(|mu| &a.components[mu] + s * kappa.0[mu]),
        PotentialFamily::Shifted { kappa },
    )
}

/// `(m e₂ + s, 0, −s, 0)`.
pub fn perturbed_potential(e2: f64, mass: f64, s: &ScalarExpr) -> Result<FourPotentialField> {
    perturbed_potential_with(e2, mass, s, KappaSign::Minus)
}

/// `(m e₂ + s, 0, ±s, 0)` with the sign of the `s` term in `b₂` chosen.
pub fn perturbed_potential_with(e2: f64, mass: f64, s: &ScalarExpr, kappa2: KappaSign) -> Result<FourPotentialField> {
    if !(e2.abs() < NEAR_DEGENERATE_BOUND) {
        return Err(Error::invalid("e2", format!("|e2| = {e2} must be below 0.1")));
    }
    Ok(FourPotentialField::new(
        [
            s + mass * e2,
            ScalarExpr::zero(),
            s * kappa2.value(),
            ScalarExpr::zero(),
        ],
        PotentialFamily::Perturbed { e2, mass, kappa2 },
    ))
}

/// `(qU′, 0, qA′_y, 0)` with `U′ = A′_y = −E₀(z − v₀y)`.
pub fn control_potential(e0: f64, v0: f64, charge: f64) -> Result<FourPotentialField> {
    if !(v0.abs() < 1.0) {
        return Err(Error::invalid("v0", "speed must be below c"));
    }
    let u = (ScalarExpr::z() - ScalarExpr::y() * v0) * (-e0 * charge);
    Ok(FourPotentialField::new(
        [u.clone(), ScalarExpr::zero(), u, ScalarExpr::zero()],
        PotentialFamily::Control { e0, v0, charge },
    ))
}
