//! Spinor families: the general ansatz, the closed-form degenerate family, the
//! helicity 4-vectors inside and outside the barrier, the time-independent
//! barrier families and the nearly degenerate perturbation.
//!
//! Every [`SpinorField`] is stored as four complex expression pairs, so its
//! partial derivatives are exact.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Complex, Spinor4, I, ONE};
use crate::error::{Error, Result};
use crate::symexpr::{ScalarExpr, SpacetimePoint, Var};
use crate::tunneling::decay_factor;

/// Largest real exponent a field may be evaluated at.
pub const EXPONENT_LIMIT: f64 = 300.0;

/// Smallest `|sin ξ|` accepted by the degenerate family.
pub const MIN_SIN_XI: f64 = 1e-12;

/// Bound on `|e₁|`, `|e₂|` for the first-order perturbation to be meaningful.
pub const NEAR_DEGENERATE_BOUND: f64 = 0.1;

/// Complex-valued expression `re + i·im`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexExpr {
    pub re: ScalarExpr,
    pub im: ScalarExpr,
}

impl ComplexExpr {
    pub fn new(re: ScalarExpr, im: ScalarExpr) -> Self {
        ComplexExpr { re, im }
    }

    pub fn real(re: ScalarExpr) -> Self {
        ComplexExpr::new(re, ScalarExpr::zero())
    }

    pub fn zero() -> Self {
        ComplexExpr::real(ScalarExpr::zero())
    }

    pub fn constant(c: Complex) -> Self {
        ComplexExpr::new(ScalarExpr::constant(c.re), ScalarExpr::constant(c.im))
    }

    /// `exp(i·phase)`.
    pub fn unit_phase(phase: &ScalarExpr) -> Self {
        ComplexExpr::new(phase.cos(), phase.sin())
    }

    pub fn scale(&self, k: Complex) -> Self {
        ComplexExpr::new(&self.re * k.re - &self.im * k.im, &self.re * k.im + &self.im * k.re)
    }

    pub fn scale_real(&self, k: &ScalarExpr) -> Self {
        ComplexExpr::new(&self.re * k, &self.im * k)
    }

    pub fn mul(&self, other: &ComplexExpr) -> Self {
        ComplexExpr::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    pub fn add(&self, other: &ComplexExpr) -> Self {
        ComplexExpr::new(&self.re + &other.re, &self.im + &other.im)
    }

    pub fn sub(&self, other: &ComplexExpr) -> Self {
        ComplexExpr::new(&self.re - &other.re, &self.im - &other.im)
    }

    pub fn diff(&self, v: Var) -> Self {
        ComplexExpr::new(self.re.diff(v), self.im.diff(v))
    }

    pub fn eval(&self, p: &SpacetimePoint) -> Result<Complex> {
        Ok(Complex::new(self.re.eval(p)?, self.im.eval(p)?))
    }
}

/// Restricts evaluation to `|exponent(p)| ≤ limit`.
#[derive(Debug, Clone, PartialEq)]
pub struct Guard {
    pub exponent: ScalarExpr,
    pub limit: f64,
}

impl Guard {
    pub fn new(exponent: ScalarExpr) -> Self {
        Guard {
            exponent,
            limit: EXPONENT_LIMIT,
        }
    }

    pub fn check(&self, p: &SpacetimePoint) -> Result<f64> {
        let e = self.exponent.eval(p)?;
        if e.abs() > self.limit {
            Err(Error::Domain {
                exponent: e,
                limit: self.limit,
            })
        } else {
            Ok(e)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Particle,
    Antiparticle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Helicity {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    PlusZ,
    MinusZ,
}

/// Sign choice `±` of the barrier 4-vectors; `Upper` is the top sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Upper,
    Lower,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Upper => 1.0,
            Sign::Lower => -1.0,
        }
    }
}

/// `Primary` is built from the upper-sign 4-vectors, `Primed` from the lower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Primary,
    Primed,
}

impl Branch {
    pub fn sign(self) -> Sign {
        match self {
            Branch::Primary => Sign::Upper,
            Branch::Primed => Sign::Lower,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NearDegenerateForm {
    /// `c₀e^{−mz}(1+e₁, 1−e₁, i(1+e₁)(1−e₂), −i(1−e₁)(1−e₂))`.
    FirstOrder,
    /// General `+z` solution with `k = m√(1−e₂²)`, exact at `s = 0`.
    Exact,
}

/// What a field was built from; used for reporting.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Ansatz {
        zeta: f64,
        eta: f64,
    },
    Degenerate {
        xi: f64,
        mass: f64,
    },
    Barrier {
        kind: Kind,
        branch: Branch,
        mass: f64,
    },
    GeneralPlusZ {
        mass: f64,
        offset: f64,
    },
    NearDegenerate {
        e1: f64,
        e2: f64,
        mass: f64,
        form: NearDegenerateForm,
    },
    PlaneWave {
        kind: Kind,
        helicity: Helicity,
        direction: Direction,
    },
    Combination,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = |k: &Kind| match k {
            Kind::Particle => "particle",
            Kind::Antiparticle => "antiparticle",
        };
        match self {
            Family::Ansatz { .. } => f.write_str("ansatz"),
            Family::Degenerate { .. } => f.write_str("degenerate"),
            Family::Barrier { kind: k, branch, .. } => {
                let b = match branch {
                    Branch::Primary => "primary",
                    Branch::Primed => "primed",
                };
                write!(f, "barrier-{}-{b}", kind(k))
            }
            Family::GeneralPlusZ { .. } => f.write_str("general-plus-z"),
            Family::NearDegenerate { form, .. } => match form {
                NearDegenerateForm::FirstOrder => f.write_str("near-degenerate"),
                NearDegenerateForm::Exact => f.write_str("near-degenerate-exact"),
            },
            Family::PlaneWave { kind: k, .. } => write!(f, "plane-wave-{}", kind(k)),
            Family::Combination => f.write_str("combination"),
        }
    }
}

/// A spinor-valued function of spacetime with exact partial derivatives.
#[derive(Debug, Clone)]
pub struct SpinorField {
    components: [ComplexExpr; 4],
    partials: Arc<[[ComplexExpr; 4]; 4]>,
    guards: Vec<Guard>,
    family: Family,
}

impl SpinorField {
    pub fn new(components: [ComplexExpr; 4], guards: Vec<Guard>, family: Family) -> Self {
        let partials = Arc::new(std::array::from_fn(|mu| {
            let v = Var::from_index(mu);
            std::array::from_fn(|k| components[k].diff(v))
        }));
        SpinorField {
            components,
            partials,
            guards,
            family,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn components(&self) -> &[ComplexExpr; 4] {
        &self.components
    }

    pub fn guards(&self) -> &[Guard] {
        &self.guards
    }

    /// Fails with [`Error::Domain`] outside the guarded region.
    pub fn check_domain(&self, p: &SpacetimePoint) -> Result<()> {
        for g in &self.guards {
            g.check(p)?;
        }
        Ok(())
    }

    /// Whether `p` lies inside a reduced exponent window `|exponent| ≤ cap`.
    pub fn within(&self, p: &SpacetimePoint, cap: f64) -> bool {
        self.guards
            .iter()
            .all(|g| matches!(g.exponent.eval(p), Ok(e) if e.abs() <= cap.min(g.limit)))
    }

    pub fn value(&self, p: &SpacetimePoint) -> Result<Spinor4> {
        self.check_domain(p)?;
        eval4(&self.components, p)
    }

    /// Analytic `∂_v Ψ`.
    pub fn partial(&self, v: Var, p: &SpacetimePoint) -> Result<Spinor4> {
        self.check_domain(p)?;
        eval4(&self.partials[v.index()], p)
    }

    /// All four partials, indexed by μ.
    pub fn gradient(&self, p: &SpacetimePoint) -> Result<[Spinor4; 4]> {
        self.check_domain(p)?;
        let mut out = [Spinor4::zero(); 4];
        for (mu, slot) in out.iter_mut().enumerate() {
            *slot = eval4(&self.partials[mu], p)?;
        }
        Ok(out)
    }

    /// `Σ αᵢ Fᵢ`; the result carries every guard of its terms.
    pub fn linear_combination(terms: &[(Complex, &SpinorField)]) -> SpinorField {
        let mut comps: [ComplexExpr; 4] = std::array::from_fn(|_| ComplexExpr::zero());
        let mut guards = Vec::new();
        for (alpha, field) in terms {
            for (c, fc) in comps.iter_mut().zip(&field.components) {
                *c = c.add(&fc.scale(*alpha));
            }
            guards.extend(field.guards.iter().cloned());
        }
        SpinorField::new(comps, guards, Family::Combination)
    }
}

fn eval4(c: &[ComplexExpr; 4], p: &SpacetimePoint) -> Result<Spinor4> {
    Ok(Spinor4([c[0].eval(p)?, c[1].eval(p)?, c[2].eval(p)?, c[3].eval(p)?]))
}

/// Constant 4-vector times a complex scalar expression.
fn profile(amplitude: &ComplexExpr, v: Spinor4) -> [ComplexExpr; 4] {
    std::array::from_fn(|k| amplitude.scale(v[k]))
}

/// Ansatz `(e^{iη} d sin ζ, e − d cos ζ, e^{iη} e sin ζ, d − e cos ζ)`.
#[derive(Debug, Clone)]
pub struct AnsatzParams {
    pub d: ComplexExpr,
    pub e: ComplexExpr,
    pub zeta: f64,
    pub eta: f64,
    /// Domain guards inherited from `d` and `e`, if any.
    pub guards: Vec<Guard>,
}

impl AnsatzParams {
    pub fn new(d: ComplexExpr, e: ComplexExpr, zeta: f64, eta: f64) -> Result<Self> {
        if !zeta.is_finite() || !eta.is_finite() {
            return Err(Error::invalid("zeta/eta", "must be finite"));
        }
        Ok(AnsatzParams {
            d,
            e,
            zeta,
            eta,
            guards: Vec::new(),
        })
    }

    /// Ansatz parameters that reproduce the closed-form degenerate family:
    /// `ζ = ξ`, `η = π/2`, `d = Φ`, `e = −iΦ` with `Φ` the common scalar factor.
    pub fn matching_degenerate(dp: &DegenerateParams) -> Result<Self> {
        dp.validate()?;
        let (amp, exponent) = degenerate_amplitude(dp);
        Ok(AnsatzParams {
            e: amp.scale(-I),
            d: amp,
            zeta: dp.xi,
            eta: FRAC_PI_2,
            guards: vec![Guard::new(exponent)],
        })
    }
}

pub fn ansatz_spinor(ap: &AnsatzParams) -> SpinorField {
    let (sz, cz) = ap.zeta.sin_cos();
    let phase = Complex::from_polar(1.0, ap.eta);
    let comps = [
        ap.d.scale(phase * sz),
        ap.e.sub(&ap.d.scale(Complex::from(cz))),
        ap.e.scale(phase * sz),
        ap.d.sub(&ap.e.scale(Complex::from(cz))),
    ];
    SpinorField::new(
        comps,
        ap.guards.clone(),
        Family::Ansatz {
            zeta: ap.zeta,
            eta: ap.eta,
        },
    )
}

/// Parameters of the closed-form degenerate family.
#[derive(Debug, Clone)]
pub struct DegenerateParams {
    pub c1: Complex,
    pub xi: f64,
    pub f: ScalarExpr,
    pub mass: f64,
}

impl DegenerateParams {
    pub fn new(c1: Complex, xi: f64, f: ScalarExpr, mass: f64) -> Result<Self> {
        let dp = DegenerateParams { c1, xi, f, mass };
        dp.validate()?;
        Ok(dp)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.xi.is_finite() || self.xi.sin().abs() < MIN_SIN_XI {
            return Err(Error::invalid("xi", format!("{} is a multiple of π", self.xi)));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::invalid("mass", "must be positive"));
        }
        Ok(())
    }

    /// `(m/sin²ξ)(z − t cos ξ)`, the real exponent of the family.
    pub fn exponent(&self) -> ScalarExpr {
        let (s, c) = self.xi.sin_cos();
        (ScalarExpr::z() - ScalarExpr::t() * c) * (self.mass / (s * s))
    }
}

/// `c₁·exp(i f cos ξ)·exp[(m/sin²ξ)(z − t cos ξ)]` and its real exponent.
fn degenerate_amplitude(dp: &DegenerateParams) -> (ComplexExpr, ScalarExpr) {
    let exponent = dp.exponent();
    let phase = &dp.f * dp.xi.cos();
    let amp = ComplexExpr::unit_phase(&phase).scale_real(&exponent.exp()).scale(dp.c1);
    (amp, exponent)
}

/// The closed-form degenerate family
/// `c₁e^{i f cos ξ}e^{−(m/sin²ξ)(−z + t cos ξ)}(i sin ξ, −i − cos ξ, sin ξ, 1 + i cos ξ)`.
pub fn degenerate_spinor(dp: &DegenerateParams) -> Result<SpinorField> {
    dp.validate()?;
    let (s, c) = dp.xi.sin_cos();
    let (amp, exponent) = degenerate_amplitude(dp);
    let v = Spinor4([
        Complex::new(0.0, s),
        Complex::new(-c, -1.0),
        Complex::new(s, 0.0),
        Complex::new(1.0, c),
    ]);
    Ok(SpinorField::new(
        profile(&amp, v),
        vec![Guard::new(exponent)],
        Family::Degenerate {
            xi: dp.xi,
            mass: dp.mass,
        },
    ))
}

/// Propagation direction of a helicity state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Propagation {
    /// Along ±z with `φ = 0`; half-angle factors are exact.
    Axis(Direction),
    Angles {
        theta: f64,
        phi: f64,
    },
}

impl Propagation {
    /// `(cos θ/2, sin θ/2, e^{iφ})`.
    fn half_angles(self) -> (f64, f64, Complex) {
        match self {
            Propagation::Axis(Direction::PlusZ) => (1.0, 0.0, ONE),
            Propagation::Axis(Direction::MinusZ) => (0.0, 1.0, ONE),
            Propagation::Angles { theta, phi } => {
                let (s, c) = (theta / 2.0).sin_cos();
                (c, s, Complex::from_polar(1.0, phi))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicityParams {
    pub kind: Kind,
    pub helicity: Helicity,
    pub propagation: Propagation,
    /// `|p⃗|` outside the barrier.
    pub momentum: f64,
    pub energy: f64,
    pub mass: f64,
    /// `V₀`, used only inside the barrier.
    pub barrier_height: f64,
}

impl HelicityParams {
    /// Free particle along an axis.
    pub fn free(kind: Kind, helicity: Helicity, direction: Direction, momentum: f64, mass: f64) -> Self {
        HelicityParams {
            kind,
            helicity,
            propagation: Propagation::Axis(direction),
            momentum,
            energy: (momentum * momentum + mass * mass).sqrt(),
            mass,
            barrier_height: 0.0,
        }
    }

    /// Inside a barrier of height `barrier_height` along an axis.
    pub fn in_barrier(
        kind: Kind,
        helicity: Helicity,
        direction: Direction,
        energy: f64,
        barrier_height: f64,
        mass: f64,
    ) -> Self {
        HelicityParams {
            kind,
            helicity,
            propagation: Propagation::Axis(direction),
            momentum: 0.0,
            energy,
            mass,
            barrier_height,
        }
    }
}

/// Helicity 4-vector for a general (possibly complex) momentum factor
/// `|p⃗|/(E+m)`.
fn helicity_vector(kind: Kind, helicity: Helicity, prop: Propagation, factor: Complex) -> Spinor4 {
    let (c, s, e) = prop.half_angles();
    let (c, s) = (Complex::from(c), Complex::from(s));
    let f = factor;
    Spinor4(match (kind, helicity) {
        (Kind::Particle, Helicity::Up) => [c, e * s, f * c, f * e * s],
        (Kind::Particle, Helicity::Down) => [-s, e * c, f * s, -f * e * c],
        (Kind::Antiparticle, Helicity::Up) => [f * s, -f * e * c, -s, e * c],
        (Kind::Antiparticle, Helicity::Down) => [f * c, f * e * s, c, e * s],
    })
}

/// Free-particle helicity state, unnormalized.
pub fn helicity_spinor(hp: &HelicityParams) -> Result<Spinor4> {
    let denom = hp.energy + hp.mass;
    if !(denom > 0.0) {
        return Err(Error::invalid("energy", "E + m must be positive"));
    }
    if !(hp.momentum >= 0.0) {
        return Err(Error::invalid("momentum", "|p| must be non-negative"));
    }
    let factor = Complex::from(hp.momentum / denom);
    Ok(helicity_vector(hp.kind, hp.helicity, hp.propagation, factor))
}

/// Helicity state inside the barrier, `|p⃗| → ±ik` and `E + m → |E − V₀| + m`.
pub fn barrier_helicity(hp: &HelicityParams, sign: Sign) -> Result<Spinor4> {
    let offset = hp.energy - hp.barrier_height;
    let k = decay_factor(hp.energy, hp.barrier_height, hp.mass)?;
    let factor = I * (sign.value() * k / (offset.abs() + hp.mass));
    Ok(helicity_vector(hp.kind, hp.helicity, hp.propagation, factor))
}

/// Equal-weight sum of both helicities at `E = V₀`.
pub fn equal_mix(kind: Kind, direction: Direction, sign: Sign) -> Spinor4 {
    let factor = I * sign.value();
    let prop = Propagation::Axis(direction);
    helicity_vector(kind, Helicity::Up, prop, factor) + helicity_vector(kind, Helicity::Down, prop, factor)
}

/// Time-independent degenerate family at `E = V₀`:
/// `c₊e^{∓mz}·mix(+z) + c₋e^{±mz}·mix(−z)`.
pub fn barrier_spinor_family(
    kind: Kind,
    branch: Branch,
    c_plus: Complex,
    c_minus: Complex,
    mass: f64,
) -> Result<SpinorField> {
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::invalid("mass", "must be positive"));
    }
    let kind_sign = match kind {
        Kind::Particle => 1.0,
        Kind::Antiparticle => -1.0,
    };
    let plus_rate = -kind_sign * branch.sign().value() * mass;
    let mz = ScalarExpr::z() * mass;
    let term = |c: Complex, rate: f64, dir: Direction| {
        let amp = ComplexExpr::real((ScalarExpr::z() * rate).exp()).scale(c);
        profile(&amp, equal_mix(kind, dir, branch.sign()))
    };
    let a = term(c_plus, plus_rate, Direction::PlusZ);
    let b = term(c_minus, -plus_rate, Direction::MinusZ);
    let comps = std::array::from_fn(|k| a[k].add(&b[k]));
    Ok(SpinorField::new(
        comps,
        vec![Guard::new(mz)],
        Family::Barrier { kind, branch, mass },
    ))
}

/// General `+z` particle solution inside the barrier,
/// `e^{−kz}[c₁u↑(+z) + c₂u↓(+z)]` with the upper-sign barrier 4-vectors.
/// `offset` is `|E − V₀|`.
pub fn general_plus_z_solution(c1: Complex, c2: Complex, offset: f64, mass: f64) -> Result<SpinorField> {
    if !(mass > 0.0) {
        return Err(Error::invalid("mass", "must be positive"));
    }
    if offset < 0.0 {
        return Err(Error::invalid("offset", "|E - V0| must be non-negative"));
    }
    let k = decay_factor(offset, 0.0, mass)?;
    let factor = I * (k / (offset + mass));
    let prop = Propagation::Axis(Direction::PlusZ);
    let up = helicity_vector(Kind::Particle, Helicity::Up, prop, factor);
    let down = helicity_vector(Kind::Particle, Helicity::Down, prop, factor);
    let v = up.scale(c1) + down.scale(c2);
    let exponent = ScalarExpr::z() * (-k);
    let amp = ComplexExpr::real(exponent.exp());
    Ok(SpinorField::new(
        profile(&amp, v),
        vec![Guard::new(exponent)],
        Family::GeneralPlusZ { mass, offset },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearDegenerateParams {
    pub c0: Complex,
    /// Helicity imbalance.
    pub e1: f64,
    /// Energy detuning `|E − V₀|/m`.
    pub e2: f64,
    pub mass: f64,
    pub form: NearDegenerateForm,
}

impl NearDegenerateParams {
    pub fn new(c0: Complex, e1: f64, e2: f64, mass: f64) -> Result<Self> {
        let nd = NearDegenerateParams {
            c0,
            e1,
            e2,
            mass,
            form: NearDegenerateForm::FirstOrder,
        };
        nd.validate()?;
        Ok(nd)
    }

    pub fn with_form(mut self, form: NearDegenerateForm) -> Self {
        self.form = form;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e1.abs() < NEAR_DEGENERATE_BOUND) {
            return Err(Error::invalid("e1", format!("|e1| = {} must be below 0.1", self.e1)));
        }
        if !(self.e2 >= 0.0 && self.e2 < NEAR_DEGENERATE_BOUND) {
            return Err(Error::invalid("e2", format!("e2 = {} must lie in [0, 0.1)", self.e2)));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::invalid("mass", "must be positive"));
        }
        Ok(())
    }
}

pub fn near_degenerate_spinor(nd: &NearDegenerateParams) -> Result<SpinorField> {
    nd.validate()?;
    let family = Family::NearDegenerate {
        e1: nd.e1,
        e2: nd.e2,
        mass: nd.mass,
        form: nd.form,
    };
    match nd.form {
        NearDegenerateForm::FirstOrder => {
            let (p, q) = (1.0 + nd.e1, 1.0 - nd.e1);
            let r = 1.0 - nd.e2;
            let v = Spinor4([
                Complex::from(p),
                Complex::from(q),
                Complex::new(0.0, p * r),
                Complex::new(0.0, -q * r),
            ]);
            let exponent = ScalarExpr::z() * (-nd.mass);
            let amp = ComplexExpr::real(exponent.exp()).scale(nd.c0);
            Ok(SpinorField::new(profile(&amp, v), vec![Guard::new(exponent)], family))
        }
        NearDegenerateForm::Exact => {
            let f = general_plus_z_solution(nd.c0 * (1.0 + nd.e1), nd.c0 * (1.0 - nd.e1), nd.e2 * nd.mass, nd.mass)?;
            Ok(SpinorField::new(f.components, f.guards, family))
        }
    }
}

/// Free helicity state with its plane-wave phase `e^{i(p_z z − E t)}`.
pub fn plane_wave_field(hp: &HelicityParams) -> Result<SpinorField> {
    let direction = match hp.propagation {
        Propagation::Axis(d) => d,
        Propagation::Angles { .. } => return Err(Error::invalid("propagation", "plane-wave fields are axis-aligned")),
    };
    let u = helicity_spinor(hp)?;
    let pz = match direction {
        Direction::PlusZ => hp.momentum,
        Direction::MinusZ => -hp.momentum,
    };
    let phase = ScalarExpr::z() * pz - ScalarExpr::t() * hp.energy;
    let amp = ComplexExpr::unit_phase(&phase);
    Ok(SpinorField::new(
        profile(&amp, u),
        Vec::new(),
        Family::PlaneWave {
            kind: hp.kind,
            helicity: hp.helicity,
            direction,
        },
    ))
}

/// Zero spinor, handy as a neutral element.
pub fn zero_field() -> SpinorField {
    SpinorField::new(
        std::array::from_fn(|_| ComplexExpr::zero()),
        Vec::new(),
        Family::Combination,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ZERO;
    use crate::sampling::PointSampler;
    use crate::symexpr::parse;
    use std::f64::consts::{FRAC_PI_3, PI};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn close(a: &Spinor4, b: &Spinor4, tol: f64) -> bool {
        (*a - *b).max_abs() <= tol * a.max_abs().max(b.max_abs()).max(1.0)
    }

    fn sp(v: [(f64, f64); 4]) -> Spinor4 {
        Spinor4::from_parts(v)
    }

    #[test]
    fn ansatz_zero_functions_vanish() {
        let ap = AnsatzParams::new(ComplexExpr::zero(), ComplexExpr::zero(), 0.4, 1.1).unwrap();
        let f = ansatz_spinor(&ap);
        assert_eq!(
            f.value(&SpacetimePoint::new(0.3, 1., 2., -1.)).unwrap(),
            Spinor4::zero()
        );
    }

    #[test]
    fn ansatz_zeta_zero_reduces() {
        let d = ComplexExpr::new(parse("x+1").unwrap(), parse("t").unwrap());
        let e = ComplexExpr::new(parse("y^2").unwrap(), parse("-z").unwrap());
        let ap = AnsatzParams::new(d.clone(), e.clone(), 0.0, 0.7).unwrap();
        let f = ansatz_spinor(&ap);
        let p = SpacetimePoint::new(0.2, 0.5, -0.3, 0.9);
        let (dv, ev) = (d.eval(&p).unwrap(), e.eval(&p).unwrap());
        let v = f.value(&p).unwrap();
        assert!(close(&v, &Spinor4([ZERO, ev - dv, ZERO, dv - ev]), 1e-15));
    }

    // Least-squares oracle: with ζ = ξ, η = π/2 fixed, solve the 4×2 complex
    // system for (d, e) at each point from the degenerate-family components
    // and compare with the frozen correspondence d = Φ, e = −iΦ.
    #[test]
    fn ansatz_correspondence_least_squares() {
        let dp = DegenerateParams::new(c(0.7, -0.4), 1.1, parse("sin(x)*t + z^2").unwrap(), 1.3).unwrap();
        let deg = degenerate_spinor(&dp).unwrap();
        let ap = AnsatzParams::matching_degenerate(&dp).unwrap();
        let ans = ansatz_spinor(&ap);
        let (s, cz) = dp.xi.sin_cos();
        let ph = I;
        // columns multiplying d and e
        let a_d = [ph * s, c(-cz, 0.), ZERO, ONE];
        let a_e = [ZERO, ONE, ph * s, c(-cz, 0.)];
        let mut sampler = PointSampler::new(7, 1.0);
        for p in sampler.sample_within(&deg, 50, 20.0) {
            let psi = deg.value(&p).unwrap();
            // normal equations A†A x = A†ψ
            let dot =
                |u: &[Complex; 4], v: &[Complex; 4]| -> Complex { u.iter().zip(v).map(|(a, b)| a.conj() * b).sum() };
            let (g11, g12, g22) = (dot(&a_d, &a_d), dot(&a_d, &a_e), dot(&a_e, &a_e));
            let (r1, r2) = (dot(&a_d, &psi.0), dot(&a_e, &psi.0));
            let det = g11 * g22 - g12 * g12.conj();
            let d = (g22 * r1 - g12 * r2) / det;
            let e = (g11 * r2 - g12.conj() * r1) / det;
            let (d_fix, e_fix) = (ap.d.eval(&p).unwrap(), ap.e.eval(&p).unwrap());
            let scale = psi.max_abs();
            assert!((d - d_fix).norm() <= 1e-12 * scale);
            assert!((e - e_fix).norm() <= 1e-12 * scale);
            assert!(close(&ans.value(&p).unwrap(), &psi, 1e-12));
        }
    }

    #[test]
    fn degenerate_time_independent_at_half_pi() {
        let c1 = c(0.3, 0.8);
        let dp = DegenerateParams::new(c1, FRAC_PI_2, ScalarExpr::zero(), 1.5).unwrap();
        let f = degenerate_spinor(&dp).unwrap();
        for (t, z) in [(0.0, 0.4), (7.0, -1.2), (-3.0, 2.0)] {
            let p = SpacetimePoint::new(t, 0.1, 0.2, z);
            let expect = sp([(0., 1.), (0., -1.), (1., 0.), (1., 0.)]).scale(c1 * (1.5 * z).exp());
            assert!(close(&f.value(&p).unwrap(), &expect, 1e-14));
        }
    }

    #[test]
    fn degenerate_at_origin() {
        let xi = 0.9;
        let c1 = c(-1.2, 0.5);
        let dp = DegenerateParams::new(c1, xi, ScalarExpr::zero(), 2.0).unwrap();
        let v = degenerate_spinor(&dp).unwrap().value(&SpacetimePoint::ORIGIN).unwrap();
        let (s, co) = xi.sin_cos();
        let expect = Spinor4([c(0., s), c(-co, -1.), c(s, 0.), c(1., co)]).scale(c1);
        assert!(close(&v, &expect, 1e-15));
    }

    #[test]
    fn degenerate_rejects_multiples_of_pi() {
        for xi in [0.0, PI, -2.0 * PI] {
            let r = DegenerateParams::new(ONE, xi, ScalarExpr::zero(), 1.0);
            assert!(matches!(r, Err(Error::InvalidParameter { name: "xi", .. })), "{xi}");
        }
    }

    #[test]
    fn degenerate_guard_raises_domain_error() {
        let dp = DegenerateParams::new(ONE, FRAC_PI_3, ScalarExpr::zero(), 1.0).unwrap();
        let f = degenerate_spinor(&dp).unwrap();
        // exponent (1/sin²ξ)·z = 4z/3
        let err = f.value(&SpacetimePoint::new(0., 0., 0., 300.0)).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
        assert!(f.value(&SpacetimePoint::new(0., 0., 0., 200.0)).is_ok());
    }

    #[test]
    fn free_helicity_axis_forms() {
        let (p, m): (f64, f64) = (0.8, 1.0);
        let e = (p * p + m * m).sqrt();
        let r = p / (e + m);
        let hp = |kind, hel, dir| HelicityParams::free(kind, hel, dir, p, m);
        use Direction::*;
        use Helicity::*;
        use Kind::*;
        let cases = [
            (Particle, Up, PlusZ, [(1., 0.), (0., 0.), (r, 0.), (0., 0.)]),
            (Particle, Down, PlusZ, [(0., 0.), (1., 0.), (0., 0.), (-r, 0.)]),
            (Particle, Up, MinusZ, [(0., 0.), (1., 0.), (0., 0.), (r, 0.)]),
            (Particle, Down, MinusZ, [(-1., 0.), (0., 0.), (r, 0.), (0., 0.)]),
            (Antiparticle, Up, PlusZ, [(0., 0.), (-r, 0.), (0., 0.), (1., 0.)]),
            (Antiparticle, Down, PlusZ, [(r, 0.), (0., 0.), (1., 0.), (0., 0.)]),
            (Antiparticle, Up, MinusZ, [(r, 0.), (0., 0.), (-1., 0.), (0., 0.)]),
            (Antiparticle, Down, MinusZ, [(0., 0.), (r, 0.), (0., 0.), (1., 0.)]),
        ];
        for (k, h, d, expect) in cases {
            assert_eq!(helicity_spinor(&hp(k, h, d)).unwrap(), sp(expect), "{k:?} {h:?} {d:?}");
        }
    }

    #[test]
    fn general_angles_match_axis_forms() {
        for (theta, dir) in [(0.0, Direction::PlusZ), (PI, Direction::MinusZ)] {
            for kind in [Kind::Particle, Kind::Antiparticle] {
                for hel in [Helicity::Up, Helicity::Down] {
                    let mut hp = HelicityParams::free(kind, hel, dir, 0.6, 1.0);
                    let axis = helicity_spinor(&hp).unwrap();
                    hp.propagation = Propagation::Angles { theta, phi: 0.0 };
                    let ang = helicity_spinor(&hp).unwrap();
                    assert!(close(&axis, &ang, 1e-15));
                }
            }
        }
    }

    #[test]
    fn zero_momentum_puts_norm_in_one_half() {
        let up = helicity_spinor(&HelicityParams::free(
            Kind::Particle,
            Helicity::Up,
            Direction::PlusZ,
            0.0,
            1.0,
        ))
        .unwrap();
        assert_eq!(up[2].norm() + up[3].norm(), 0.0);
        let v = helicity_spinor(&HelicityParams::free(
            Kind::Antiparticle,
            Helicity::Down,
            Direction::MinusZ,
            0.0,
            1.0,
        ))
        .unwrap();
        assert_eq!(v[0].norm() + v[1].norm(), 0.0);
    }

    #[test]
    fn barrier_limit_forms() {
        let hp = HelicityParams::in_barrier(Kind::Particle, Helicity::Up, Direction::PlusZ, 5.0, 5.0, 1.0);
        assert_eq!(
            barrier_helicity(&hp, Sign::Upper).unwrap(),
            sp([(1., 0.), (0., 0.), (0., 1.), (0., 0.)])
        );
        let hp = HelicityParams::in_barrier(Kind::Antiparticle, Helicity::Up, Direction::MinusZ, 2.0, 2.0, 1.0);
        assert_eq!(
            barrier_helicity(&hp, Sign::Upper).unwrap(),
            sp([(0., 1.), (0., 0.), (-1., 0.), (0., 0.)])
        );
    }

    #[test]
    fn barrier_helicity_half_mass_offset() {
        let m = 2.0;
        let hp = HelicityParams::in_barrier(Kind::Particle, Helicity::Up, Direction::PlusZ, 4.0, 3.0, m);
        let v = barrier_helicity(&hp, Sign::Upper).unwrap();
        let k = m * (1.0 - 0.25f64).sqrt();
        let expect = c(0.0, k / (1.0 + m));
        assert!((v[2] - expect).norm() < 1e-15);
    }

    #[test]
    fn barrier_helicity_rejects_propagating_regime() {
        let hp = HelicityParams::in_barrier(Kind::Particle, Helicity::Up, Direction::PlusZ, 3.0, 1.0, 1.0);
        assert!(matches!(
            barrier_helicity(&hp, Sign::Upper),
            Err(Error::NotEvanescent { .. })
        ));
    }

    #[test]
    fn equal_mix_forms() {
        use Direction::*;
        use Kind::*;
        use Sign::*;
        assert_eq!(
            equal_mix(Particle, PlusZ, Upper),
            sp([(1., 0.), (1., 0.), (0., 1.), (0., -1.)])
        );
        assert_eq!(
            equal_mix(Particle, MinusZ, Upper),
            sp([(-1., 0.), (1., 0.), (0., 1.), (0., 1.)])
        );
        assert_eq!(
            equal_mix(Antiparticle, PlusZ, Upper),
            sp([(0., 1.), (0., -1.), (1., 0.), (1., 0.)])
        );
        assert_eq!(
            equal_mix(Antiparticle, MinusZ, Upper),
            sp([(0., 1.), (0., 1.), (-1., 0.), (1., 0.)])
        );
        assert_eq!(
            equal_mix(Particle, PlusZ, Lower),
            sp([(1., 0.), (1., 0.), (0., -1.), (0., 1.)])
        );
        for kind in [Particle, Antiparticle] {
            for dir in [PlusZ, MinusZ] {
                for sign in [Upper, Lower] {
                    let hp = |h| HelicityParams::in_barrier(kind, h, dir, 1.0, 1.0, 1.0);
                    let sum = barrier_helicity(&hp(Helicity::Up), sign).unwrap()
                        + barrier_helicity(&hp(Helicity::Down), sign).unwrap();
                    assert_eq!(sum, equal_mix(kind, dir, sign));
                }
            }
        }
    }

    #[test]
    fn barrier_family_values_at_origin() {
        let o = SpacetimePoint::ORIGIN;
        let f = barrier_spinor_family(Kind::Particle, Branch::Primary, ONE, ZERO, 1.0).unwrap();
        assert_eq!(f.value(&o).unwrap(), sp([(1., 0.), (1., 0.), (0., 1.), (0., -1.)]));
        let f = barrier_spinor_family(Kind::Antiparticle, Branch::Primed, ZERO, ONE, 1.0).unwrap();
        assert_eq!(f.value(&o).unwrap(), sp([(0., -1.), (0., -1.), (-1., 0.), (1., 0.)]));
    }

    #[test]
    fn barrier_family_exponent_signs() {
        let m = 0.7;
        let z = 1.3;
        let p = SpacetimePoint::new(0., 0., 0., z);
        let cases = [
            (Kind::Particle, Branch::Primary, -1.0),
            (Kind::Antiparticle, Branch::Primary, 1.0),
            (Kind::Particle, Branch::Primed, 1.0),
            (Kind::Antiparticle, Branch::Primed, -1.0),
        ];
        for (kind, branch, s) in cases {
            let f = barrier_spinor_family(kind, branch, ONE, ZERO, m).unwrap();
            let v = f.value(&p).unwrap();
            let v0 = f.value(&SpacetimePoint::ORIGIN).unwrap();
            assert!(close(&v, &v0.scale(Complex::from((s * m * z).exp())), 1e-15));
        }
    }

    #[test]
    fn near_degenerate_limits() {
        let nd = NearDegenerateParams::new(ONE, 0.0, 0.0, 1.0).unwrap();
        let f = near_degenerate_spinor(&nd).unwrap();
        let g = barrier_spinor_family(Kind::Particle, Branch::Primary, ONE, ZERO, 1.0).unwrap();
        for z in [-1.0, 0.0, 0.5] {
            let p = SpacetimePoint::new(0.1, 0.2, 0.3, z);
            assert!(close(&f.value(&p).unwrap(), &g.value(&p).unwrap(), 1e-15));
        }
        let nd = NearDegenerateParams::new(ONE, 0.01, 0.0, 1.0).unwrap();
        let v = near_degenerate_spinor(&nd)
            .unwrap()
            .value(&SpacetimePoint::ORIGIN)
            .unwrap();
        assert!(close(&v, &sp([(1.01, 0.), (0.99, 0.), (0., 1.01), (0., -0.99)]), 1e-15));
    }

    #[test]
    fn near_degenerate_bounds() {
        assert!(NearDegenerateParams::new(ONE, 0.1, 0.0, 1.0).is_err());
        assert!(NearDegenerateParams::new(ONE, 0.0, -0.01, 1.0).is_err());
        assert!(NearDegenerateParams::new(ONE, -0.09, 0.09, 1.0).is_ok());
    }

    // Exact general solution against the first-order form, second-order gap.
    #[test]
    fn first_order_form_tracks_exact_solution() {
        let m = 1.0;
        for &e1 in &[0.0, 0.01, 0.03, 0.05] {
            for &e2 in &[0.0, 0.01, 0.03, 0.05] {
                let c0 = c(0.6, -0.2);
                let exact = general_plus_z_solution(c0 * (1.0 + e1), c0 * (1.0 - e1), e2 * m, m).unwrap();
                let nd = NearDegenerateParams::new(c0, e1, e2, m).unwrap();
                let approx = near_degenerate_spinor(&nd).unwrap();
                let bound = 3.0 * f64::max(e1, e2).powi(2);
                for z in [-0.5, 0.0, 0.5] {
                    let p = SpacetimePoint::new(0.0, 0.0, 0.0, z);
                    let scale = (-m * z).exp() * c0.norm();
                    let diff = (exact.value(&p).unwrap() - approx.value(&p).unwrap()).max_abs() / scale;
                    assert!(diff <= bound + 1e-15, "e1={e1} e2={e2} z={z}: {diff} > {bound}");
                }
            }
        }
    }

    #[test]
    fn exact_form_matches_middle_expression() {
        let (e1, e2, m) = (0.02, 0.04, 1.5);
        let nd = NearDegenerateParams::new(ONE, e1, e2, m)
            .unwrap()
            .with_form(NearDegenerateForm::Exact);
        let f = near_degenerate_spinor(&nd).unwrap();
        let k = m * (1.0 - e2 * e2).sqrt();
        let z = 0.3;
        let a = (-k * z).exp();
        let expect = sp([
            (1.0 + e1, 0.),
            (1.0 - e1, 0.),
            (0., k * (1.0 + e1) / (m * (1.0 + e2))),
            (0., -k * (1.0 - e1) / (m * (1.0 + e2))),
        ]) * a;
        assert!(close(
            &f.value(&SpacetimePoint::new(0., 0., 0., z)).unwrap(),
            &expect,
            1e-14
        ));
    }

    fn fd_partial(f: &SpinorField, v: Var, p: &SpacetimePoint, h: f64) -> Spinor4 {
        let fp = f.value(&p.shifted(v, h)).unwrap();
        let fm = f.value(&p.shifted(v, -h)).unwrap();
        (fp - fm) * (0.5 / h)
    }

    // Every built-in family: analytic partials against central differences.
    #[test]
    fn partials_match_finite_differences() {
        let m = 1.0;
        let mut fields = vec![
            degenerate_spinor(
                &DegenerateParams::new(c(1., 0.5), 1.2, parse("cos(x+2*t)*y + z^2").unwrap(), m).unwrap(),
            )
            .unwrap(),
            near_degenerate_spinor(&NearDegenerateParams::new(c(0.3, 1.), 0.02, 0.03, m).unwrap()).unwrap(),
            near_degenerate_spinor(
                &NearDegenerateParams::new(c(0.3, 1.), 0.02, 0.03, m)
                    .unwrap()
                    .with_form(NearDegenerateForm::Exact),
            )
            .unwrap(),
            plane_wave_field(&HelicityParams::free(
                Kind::Particle,
                Helicity::Up,
                Direction::PlusZ,
                0.7,
                m,
            ))
            .unwrap(),
        ];
        let dp = DegenerateParams::new(c(-0.4, 0.9), 2.0, parse("x*y - t^3 + sin(z)").unwrap(), m).unwrap();
        fields.push(ansatz_spinor(&AnsatzParams::matching_degenerate(&dp).unwrap()));
        for kind in [Kind::Particle, Kind::Antiparticle] {
            for branch in [Branch::Primary, Branch::Primed] {
                fields.push(barrier_spinor_family(kind, branch, c(0.5, 0.2), c(-0.3, 0.7), m).unwrap());
            }
        }
        let mut sampler = PointSampler::new(11, 10.0);
        for f in &fields {
            let pts = sampler.sample_within(f, 20, 10.0);
            assert_eq!(pts.len(), 20);
            for p in pts {
                let scale = f.value(&p).unwrap().max_abs() * m;
                for v in Var::ALL {
                    let an = f.partial(v, &p).unwrap();
                    let fd = fd_partial(f, v, &p, 1e-5);
                    let err = (an - fd).max_abs();
                    assert!(err <= 1e-6 * scale.max(an.max_abs()), "{} {v}: {err}", f.family());
                }
            }
        }
    }

    #[test]
    fn linear_combination_is_pointwise() {
        let a = barrier_spinor_family(Kind::Particle, Branch::Primary, ONE, ZERO, 1.0).unwrap();
        let b = barrier_spinor_family(Kind::Particle, Branch::Primary, ZERO, ONE, 1.0).unwrap();
        let both = barrier_spinor_family(Kind::Particle, Branch::Primary, c(2., 1.), c(0., -3.), 1.0).unwrap();
        let comb = SpinorField::linear_combination(&[(c(2., 1.), &a), (c(0., -3.), &b)]);
        let p = SpacetimePoint::new(0.0, 0.0, 0.0, 0.4);
        assert!(close(&comb.value(&p).unwrap(), &both.value(&p).unwrap(), 1e-15));
    }
}
