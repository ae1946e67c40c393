//! Dirac residual `iγ^μ∂_μΨ + b_μγ^μΨ − mΨ` for spinor/potential pairs,
//! degeneracy conditions, and the first-order residual of the nearly
//! degenerate spinors.

use std::fmt;

use crate::algebra::{
    bilinear, gammas, make_gammas_with, BilinearMode, Complex, GammaSet, IndexConvention, Spinor4, I,
};
use crate::error::{Error, Result};
use crate::numerics::{loglog_slope, step_underflows, CENTRAL4};
use crate::potentials::{family_b, perturbed_potential_with, FourPotentialField, KappaSign, KappaVector};
use crate::sampling::PointSampler;
use crate::spinors::{degenerate_spinor, near_degenerate_spinor, DegenerateParams, NearDegenerateParams, SpinorField};
use crate::symexpr::{ScalarExpr, SpacetimePoint, Var};

/// Default finite-difference step, in units of `1/m`.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Pass threshold for analytic residuals.
pub const ANALYTIC_TOL: f64 = 1e-10;
/// Pass threshold for finite-difference residuals.
pub const FD_TOL: f64 = 1e-6;
/// `e|s|/m` at or below this counts as small.
pub const SMALLNESS_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Analytic,
    /// 4th-order central differences with the given step.
    FiniteDifference {
        step: f64,
    },
}

impl Method {
    pub fn fd() -> Self {
        Method::FiniteDifference { step: DEFAULT_FD_STEP }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Method::Analytic => ANALYTIC_TOL,
            Method::FiniteDifference { .. } => FD_TOL,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Analytic => f.write_str("analytic"),
            Method::FiniteDifference { .. } => f.write_str("fd"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub residual: Spinor4,
    /// `‖residual‖ / (m‖Ψ‖)`.
    pub relative_norm: f64,
    pub point: SpacetimePoint,
    pub method: Method,
}

fn relative(r: &Spinor4, psi: &Spinor4, mass: f64) -> f64 {
    let (rn, pn) = (r.norm(), psi.norm());
    if pn > 0.0 {
        rn / (mass * pn)
    } else if rn == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// `∂_μΨ` for every μ by the 4th-order central stencil.
pub fn fd_gradient(field: &SpinorField, p: &SpacetimePoint, step: f64) -> Result<[Spinor4; 4]> {
    let mut out = [Spinor4::zero(); 4];
    for (mu, slot) in out.iter_mut().enumerate() {
        let v = Var::from_index(mu);
        let coord = p.get(v);
        if step_underflows(step, coord) {
            return Err(Error::StepUnderflow {
                step,
                coordinate: coord,
            });
        }
        let mut acc = Spinor4::zero();
        for (offset, w) in CENTRAL4 {
            acc = acc + field.value(&p.shifted(v, offset * step))? * w;
        }
        *slot = acc * (1.0 / step);
    }
    Ok(out)
}

/// Residual from precomputed `Ψ`, `∂_μΨ` and `b_μ`.
pub fn operator_residual(psi: &Spinor4, grad: &[Spinor4; 4], b: &[f64; 4], mass: f64) -> Spinor4 {
    let g = &gammas().upper;
    let mut r = *psi * (-mass);
    for mu in 0..4 {
        r = r + (g[mu] * grad[mu]) * I + (g[mu] * *psi) * b[mu];
    }
    r
}

pub fn dirac_residual(
    field: &SpinorField,
    b: &FourPotentialField,
    mass: f64,
    p: &SpacetimePoint,
    method: Method,
) -> Result<ResidualReport> {
    if !(mass > 0.0) {
        return Err(Error::invalid("mass", "must be positive"));
    }
    let psi = field.value(p)?;
    let grad = match method {
        Method::Analytic => field.gradient(p)?,
        Method::FiniteDifference { step } => fd_gradient(field, p, step)?,
    };
    let r = operator_residual(&psi, &grad, &b.value(p)?, mass);
    Ok(ResidualReport {
        residual: r,
        relative_norm: relative(&r, &psi, mass),
        point: *p,
        method,
    })
}

/// One-dimensional time-independent operator `iγ³∂_zΨ − mΨ`.
pub fn barrier_operator_residual(field: &SpinorField, mass: f64, p: &SpacetimePoint) -> Result<ResidualReport> {
    if !(mass > 0.0) {
        return Err(Error::invalid("mass", "must be positive"));
    }
    let psi = field.value(p)?;
    let dz = field.partial(Var::Z, p)?;
    let r = (gammas().upper[3] * dz) * I - psi * mass;
    Ok(ResidualReport {
        residual: r,
        relative_norm: relative(&r, &psi, mass),
        point: *p,
        method: Method::Analytic,
    })
}

/// `Ψ†γΨ` and `Ψᵀγ₂Ψ` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneracyCheck {
    pub dagger: Complex,
    pub transpose: Complex,
    pub norm_sqr: f64,
}

impl DegeneracyCheck {
    pub fn dagger_vanishes(&self, tol: f64) -> bool {
        self.dagger.norm() <= tol * self.norm_sqr
    }

    pub fn transpose_nonzero(&self, tol: f64) -> bool {
        self.transpose.norm() > tol * self.norm_sqr
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.dagger_vanishes(tol) && self.transpose_nonzero(tol)
    }
}

pub fn degeneracy_check_with(field: &SpinorField, p: &SpacetimePoint, g: &GammaSet) -> Result<DegeneracyCheck> {
    let psi = field.value(p)?;
    Ok(DegeneracyCheck {
        dagger: bilinear(&psi, &g.gamma_deg, &psi, BilinearMode::Dagger),
        transpose: bilinear(&psi, g.gamma2_lower(), &psi, BilinearMode::Transpose),
        norm_sqr: psi.norm_sqr(),
    })
}

pub fn degeneracy_check(field: &SpinorField, p: &SpacetimePoint) -> Result<DegeneracyCheck> {
    degeneracy_check_with(field, p, gammas())
}

/// Worst analytic relative residual over `b_base + sκ` for each `s`, or
/// over `b_base` alone when `s_list` is empty.
pub fn degeneracy_sweep(
    field: &SpinorField,
    b_base: &FourPotentialField,
    kappa: KappaVector,
    s_list: &[ScalarExpr],
    mass: f64,
    points: &[SpacetimePoint],
) -> Result<f64> {
    let potentials: Vec<FourPotentialField> = if s_list.is_empty() {
        vec![b_base.clone()]
    } else {
        s_list.iter().map(|s| family_b(b_base, s, kappa)).collect()
    };
    let mut worst: f64 = 0.0;
    for b in &potentials {
        for p in points {
            worst = worst.max(dirac_residual(field, b, mass, p, Method::Analytic)?.relative_norm);
        }
    }
    Ok(worst)
}

/// FD-versus-analytic residual gaps at `h0`, `h0/2`, `h0/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdConvergence {
    pub steps: Vec<f64>,
    /// `‖r_fd − r_analytic‖ / (m‖Ψ‖)` per step.
    pub errors: Vec<f64>,
    pub slope: f64,
}

pub fn fd_convergence(
    field: &SpinorField,
    b: &FourPotentialField,
    mass: f64,
    p: &SpacetimePoint,
    h0: f64,
) -> Result<FdConvergence> {
    let exact = dirac_residual(field, b, mass, p, Method::Analytic)?;
    let psi = field.value(p)?;
    let steps = vec![h0, h0 / 2.0, h0 / 4.0];
    let mut errors = Vec::with_capacity(3);
    for &h in &steps {
        let fd = dirac_residual(field, b, mass, p, Method::FiniteDifference { step: h })?;
        errors.push(relative(&(fd.residual - exact.residual), &psi, mass));
    }
    let slope = loglog_slope(&steps, &errors);
    Ok(FdConvergence { steps, errors, slope })
}

/// Measured residual of a nearly degenerate spinor against its first-order
/// prediction `c₀e^{−mz}s(2e₁+e₂, −2e₁+e₂, −i(2e₁−e₂), −i(2e₁+e₂))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationResidual {
    pub measured: Spinor4,
    pub predicted: Spinor4,
    pub point: SpacetimePoint,
}

impl PerturbationResidual {
    pub fn deviation(&self) -> f64 {
        (self.measured - self.predicted).norm()
    }

    /// `‖measured‖ / ‖predicted‖`; `NaN` when both vanish.
    pub fn ratio(&self) -> f64 {
        self.measured.norm() / self.predicted.norm()
    }
}

pub fn predicted_perturbation(nd: &NearDegenerateParams, s: f64, z: f64) -> Spinor4 {
    let (e1, e2) = (nd.e1, nd.e2);
    let v = Spinor4([
        Complex::from(2.0 * e1 + e2),
        Complex::from(-2.0 * e1 + e2),
        Complex::new(0.0, -(2.0 * e1 - e2)),
        Complex::new(0.0, -(2.0 * e1 + e2)),
    ]);
    v.scale(nd.c0 * (s * (-nd.mass * z).exp()))
}

/// Residual under the perturbed potential with `b₂ = −s`.
pub fn perturbation_residual(
    nd: &NearDegenerateParams,
    s: &ScalarExpr,
    p: &SpacetimePoint,
) -> Result<PerturbationResidual> {
    perturbation_residual_with(nd, s, p, KappaSign::Minus)
}

pub fn perturbation_residual_with(
    nd: &NearDegenerateParams,
    s: &ScalarExpr,
    p: &SpacetimePoint,
    kappa2: KappaSign,
) -> Result<PerturbationResidual> {
    let field = near_degenerate_spinor(nd)?;
    let b = perturbed_potential_with(nd.e2, nd.mass, s, kappa2)?;
    let measured = dirac_residual(&field, &b, nd.mass, p, Method::Analytic)?.residual;
    Ok(PerturbationResidual {
        measured,
        predicted: predicted_perturbation(nd, s.eval(p)?, p.z),
        point: *p,
    })
}

/// `e₁|s|/m` and `e₂|s|/m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smallness {
    pub e1_s_over_m: f64,
    pub e2_s_over_m: f64,
}

impl Smallness {
    pub fn satisfied(&self) -> bool {
        self.e1_s_over_m.max(self.e2_s_over_m) <= SMALLNESS_THRESHOLD
    }
}

pub fn smallness(nd: &NearDegenerateParams, s_amplitude: f64) -> Smallness {
    let s = s_amplitude.abs() / nd.mass;
    Smallness {
        e1_s_over_m: nd.e1.abs() * s,
        e2_s_over_m: nd.e2.abs() * s,
    }
}

/// Outcome of checking `Ψ†γΨ = 0` under each index placement.
#[derive(Debug, Clone, PartialEq)]
pub struct ConventionReport {
    pub results: Vec<(IndexConvention, f64)>,
    /// First placement whose worst relative bilinear is below tolerance.
    pub chosen: Option<IndexConvention>,
}

/// Evaluates `|Ψ†γΨ|/‖Ψ‖²` on the closed-form family for each index
/// placement of `γ` over random angles and points.
pub fn convention_self_test(seed: u64, tol: f64) -> Result<ConventionReport> {
    let mut results = Vec::new();
    let mut chosen = None;
    for conv in IndexConvention::ALL {
        let g = make_gammas_with(conv);
        let mut sampler = PointSampler::new(seed, 1.0);
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let xi = sampler.angle();
            let c1 = Complex::new(sampler.uniform(-1.0, 1.0), sampler.uniform(-1.0, 1.0));
            let f = ScalarExpr::x() * ScalarExpr::t() + ScalarExpr::z().sin();
            let field = degenerate_spinor(&DegenerateParams::new(c1, xi, f, 1.0)?)?;
            for p in sampler.degenerate_points(xi, 1.0, 10, 20.0) {
                let d = degeneracy_check_with(&field, &p, &g)?;
                worst = worst.max(d.dagger.norm() / d.norm_sqr);
            }
        }
        if chosen.is_none() && worst <= tol {
            chosen = Some(conv);
        }
        results.push((conv, worst));
    }
    Ok(ConventionReport { results, chosen })
}
