//! Electric and magnetic fields from charge-scaled 4-potentials, the
//! plane-wave member of the barrier family, Poynting vector, Lorentz force and
//! grid-based vacuum Maxwell checks. Gaussian units, `c = 1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::loglog_slope;
use crate::potentials::{FourPotentialField, KappaSign};
use crate::symexpr::{ScalarExpr, SpacetimePoint, Var};

pub type Vec3 = [f64; 3];

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// Largest componentwise gap, relative to the larger vector's magnitude
/// (floored at 1).
pub fn rel_diff(a: Vec3, b: Vec3) -> f64 {
    let gap = (0..3).map(|i| (a[i] - b[i]).abs()).fold(0.0, f64::max);
    gap / norm(a).max(norm(b)).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EMSample {
    pub e: Vec3,
    pub b: Vec3,
}

impl EMSample {
    pub fn is_finite(&self) -> bool {
        self.e.iter().chain(&self.b).all(|v| v.is_finite())
    }

    /// Larger of the E and B relative gaps.
    pub fn rel_diff(&self, other: &EMSample) -> f64 {
        rel_diff(self.e, other.e).max(rel_diff(self.b, other.b))
    }
}

/// Field components as expressions, `E = −∇U − ∂ₜA`, `B = ∇ × A`.
#[derive(Debug, Clone)]
pub struct FieldExprs {
    pub e: [ScalarExpr; 3],
    pub b: [ScalarExpr; 3],
}

impl FieldExprs {
    pub fn eval(&self, p: &SpacetimePoint) -> Result<EMSample> {
        let ev = |xs: &[ScalarExpr; 3]| -> Result<Vec3> { Ok([xs[0].eval(p)?, xs[1].eval(p)?, xs[2].eval(p)?]) };
        Ok(EMSample {
            e: ev(&self.e)?,
            b: ev(&self.b)?,
        })
    }
}

/// `U = b₀/q` and `A = (b₁, b₂, b₃)/q`, taken componentwise.
pub fn field_exprs(b: &FourPotentialField, q: f64) -> Result<FieldExprs> {
    if q == 0.0 || !q.is_finite() {
        return Err(Error::invalid("charge", "q must be non-zero"));
    }
    let c = b.components();
    let u = c[0].scaled(1.0 / q);
    let a: [ScalarExpr; 3] = std::array::from_fn(|i| c[i + 1].scaled(1.0 / q));
    let space = [Var::X, Var::Y, Var::Z];
    let e = std::array::from_fn(|i| -u.diff(space[i]) - a[i].diff(Var::T));
    let d = |i: usize, v: Var| a[i].diff(v);
    let b = [
        d(2, Var::Y) - d(1, Var::Z),
        d(0, Var::Z) - d(2, Var::X),
        d(1, Var::X) - d(0, Var::Y),
    ];
    Ok(FieldExprs { e, b })
}

pub fn derive_fields(b: &FourPotentialField, q: f64, p: &SpacetimePoint) -> Result<EMSample> {
    field_exprs(b, q)?.eval(p)
}

/// Expanded field formulas for `b = a + sκ` with `g = ∂f/∂z`:
/// `E = −∇s_q − ∂ₜs_q(0, sin ξ, −cos ξ) − 2cos ξ ∇∂ₜf_q`,
/// `B = (−sin ξ ∂_z s_q − cos ξ ∂ᵧs_q, cos ξ ∂ₓs_q, sin ξ ∂ₓs_q)`.
pub fn general_fields_closed_form(f_q: &ScalarExpr, s_q: &ScalarExpr, xi: f64, p: &SpacetimePoint) -> Result<EMSample> {
    let (sn, cs) = xi.sin_cos();
    let ds = |v: Var| s_q.diff(v).eval(p);
    let dft = f_q.diff(Var::T);
    let dtf = |v: Var| dft.diff(v).eval(p);
    let (sx, sy, sz, st) = (ds(Var::X)?, ds(Var::Y)?, ds(Var::Z)?, ds(Var::T)?);
    Ok(EMSample {
        e: [
            -(sx + 2.0 * cs * dtf(Var::X)?),
            -(sn * st + sy + 2.0 * cs * dtf(Var::Y)?),
            -(-cs * st + sz + 2.0 * cs * dtf(Var::Z)?),
        ],
        b: [-(sn * sz + cs * sy), cs * sx, sn * sx],
    })
}

/// Fields of `b = s(1, 0, ±1, 0)`:
/// `E = (−∂ₓs_q, ∓∂ₜs_q − ∂ᵧs_q, −∂_z s_q)`, `B = ±(−∂_z s_q, 0, ∂ₓs_q)`.
///
/// For the minus sign this is the general formula at `sin ξ = −1`; the
/// alternative with `+(∂ₜs_q + ∂ᵧs_q)` in `E_y` is [`primed_fields_summed_ey`].
pub fn barrier_fields_closed_form(s_q: &ScalarExpr, sign: KappaSign, p: &SpacetimePoint) -> Result<EMSample> {
    let ds = |v: Var| s_q.diff(v).eval(p);
    let (sx, sy, sz, st) = (ds(Var::X)?, ds(Var::Y)?, ds(Var::Z)?, ds(Var::T)?);
    let k = sign.value();
    Ok(EMSample {
        e: [-sx, -k * st - sy, -sz],
        b: [-k * sz, 0.0, k * sx],
    })
}

/// Primed-family fields with the summed `E_y = +(∂ₜs_q + ∂ᵧs_q)`. Kept for
/// comparison only: it disagrees with the derived fields unless `∂ᵧs_q = 0`.
pub fn primed_fields_summed_ey(s_q: &ScalarExpr, p: &SpacetimePoint) -> Result<EMSample> {
    let ds = |v: Var| s_q.diff(v).eval(p);
    let (sx, sy, sz, st) = (ds(Var::X)?, ds(Var::Y)?, ds(Var::Z)?, ds(Var::T)?);
    Ok(EMSample {
        e: [-sx, st + sy, -sz],
        b: [sz, 0.0, -sx],
    })
}

/// Plane wave travelling along `+y` with independent `x` and `z` polarizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveParams {
    pub e1: f64,
    pub delta1: f64,
    pub e2: f64,
    pub delta2: f64,
    pub k: f64,
}

impl WaveParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.e1, self.delta1, self.e2, self.delta2, self.k];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("wave", "parameters must be finite"));
        }
        if self.k == 0.0 {
            return Err(Error::invalid("k_w", "wavenumber must be non-zero"));
        }
        Ok(())
    }

    /// `k_w(y − t) + δ`.
    fn phase(&self, delta: f64) -> ScalarExpr {
        (ScalarExpr::y() - ScalarExpr::t()) * self.k + delta
    }

    fn cosines(&self, p: &SpacetimePoint) -> (f64, f64) {
        let arg = self.k * (p.y - p.t);
        ((arg + self.delta1).cos(), (arg + self.delta2).cos())
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.k.abs()
    }
}

/// `s_q = −E_w1 cos[k_w(y−t)+δ₁] x − E_w2 cos[k_w(y−t)+δ₂] z`.
pub fn plane_wave_s(w: &WaveParams) -> ScalarExpr {
    -(w.phase(w.delta1).cos() * ScalarExpr::x() * w.e1) - w.phase(w.delta2).cos() * ScalarExpr::z() * w.e2
}

/// `E = (E_w1 c₁, 0, E_w2 c₂)`, `B = (E_w2 c₂, 0, −E_w1 c₁)` with
/// `cᵢ = cos[k_w(y−t)+δᵢ]`.
pub fn wave_fields_closed_form(w: &WaveParams, p: &SpacetimePoint) -> EMSample {
    let (c1, c2) = w.cosines(p);
    EMSample {
        e: [w.e1 * c1, 0.0, w.e2 * c2],
        b: [w.e2 * c2, 0.0, -w.e1 * c1],
    }
}

/// `S = (1/4π)(E_w1²c₁² + E_w2²c₂²) ŷ`.
pub fn wave_poynting_closed_form(w: &WaveParams, p: &SpacetimePoint) -> Vec3 {
    let (c1, c2) = w.cosines(p);
    [0.0, ((w.e1 * c1).powi(2) + (w.e2 * c2).powi(2)) / (4.0 * PI), 0.0]
}

/// `S = (1/4π) E × B`.
pub fn poynting(s: &EMSample) -> Vec3 {
    cross(s.e, s.b).map(|c| c / (4.0 * PI))
}

/// `F = qE + q v × B`.
pub fn lorentz_force(q: f64, v: Vec3, s: &EMSample) -> Result<Vec3> {
    if !(norm(v) < 1.0) {
        return Err(Error::invalid("velocity", "|v| must be below c"));
    }
    let vb = cross(v, s.b);
    Ok(std::array::from_fn(|i| q * (s.e[i] + vb[i])))
}

/// `E = −v₀E₀ ŷ + E₀ ẑ`, `B = E₀ x̂`.
pub fn control_fields(e0: f64, v0: f64) -> Result<EMSample> {
    if !(v0.abs() < 1.0) {
        return Err(Error::invalid("v0", "speed must be below c"));
    }
    Ok(EMSample {
        e: [0.0, -v0 * e0, e0],
        b: [e0, 0.0, 0.0],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub origin: f64,
    pub step: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(origin: f64, step: f64, count: usize) -> Self {
        Axis { origin, step, count }
    }

    /// Single point at `origin`; `step` still sets the difference spacing.
    pub fn point(origin: f64, step: f64) -> Self {
        Axis::new(origin, step, 1)
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.origin + self.step * i as f64
    }
}

/// Rectangular grid over `(t, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub axes: [Axis; 4],
}

impl Grid {
    pub fn new(axes: [Axis; 4]) -> Self {
        Grid { axes }
    }

    /// Same spacing on every axis, `n` points on the spatial axes and one time slice.
    pub fn uniform(origin: SpacetimePoint, h: f64, n: usize) -> Self {
        let o = origin.to_array();
        Grid::new([
            Axis::new(o[0], h, 1),
            Axis::new(o[1], h, n),
            Axis::new(o[2], h, n),
            Axis::new(o[3], h, n),
        ])
    }

    pub fn validate(&self) -> Result<()> {
        for (mu, a) in self.axes.iter().enumerate() {
            if !(a.step > 0.0) || !a.origin.is_finite() {
                return Err(Error::invalid(
                    "grid",
                    format!("axis {} needs a positive step", Var::from_index(mu)),
                ));
            }
            if a.count == 0 {
                return Err(Error::invalid(
                    "grid",
                    format!("axis {} has no points", Var::from_index(mu)),
                ));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in `t, x, y, z` lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = SpacetimePoint> + '_ {
        let [at, ax, ay, az] = self.axes;
        (0..at.count).flat_map(move |i| {
            (0..ax.count).flat_map(move |j| {
                (0..ay.count).flat_map(move |k| {
                    (0..az.count).map(move |l| SpacetimePoint::new(at.coord(i), ax.coord(j), ay.coord(k), az.coord(l)))
                })
            })
        })
    }

    /// Every step multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Grid {
        Grid::new(self.axes.map(|a| Axis::new(a.origin, a.step * factor, a.count)))
    }
}

/// Largest vacuum Maxwell residuals over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MaxwellReport {
    pub div_e: f64,
    pub div_b: f64,
    /// `|∇ × E + ∂ₜB|`
    pub faraday: f64,
    /// `|∇ × B − ∂ₜE|`
    pub ampere: f64,
}

impl MaxwellReport {
    pub fn max(&self) -> f64 {
        self.div_e.max(self.div_b).max(self.faraday).max(self.ampere)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.div_e, self.div_b, self.faraday, self.ampere]
    }
}

/// Maxwell residuals at one point from second-order central differences
/// with per-axis steps `h`.
pub fn maxwell_at<F>(fields: &F, p: &SpacetimePoint, h: [f64; 4]) -> Result<MaxwellReport>
where
    F: Fn(&SpacetimePoint) -> Result<EMSample>,
{
    let mut d = [EMSample::default(); 4];
    for (mu, slot) in d.iter_mut().enumerate() {
        let v = Var::from_index(mu);
        let plus = fields(&p.shifted(v, h[mu]))?;
        let minus = fields(&p.shifted(v, -h[mu]))?;
        let inv = 0.5 / h[mu];
        *slot = EMSample {
            e: std::array::from_fn(|i| (plus.e[i] - minus.e[i]) * inv),
            b: std::array::from_fn(|i| (plus.b[i] - minus.b[i]) * inv),
        };
    }
    // d[μ] holds ∂_μ of (E, B); spatial μ = 1, 2, 3
    let div = |sel: fn(&EMSample) -> Vec3| sel(&d[1])[0] + sel(&d[2])[1] + sel(&d[3])[2];
    let curl = |sel: fn(&EMSample) -> Vec3| -> Vec3 {
        [
            sel(&d[2])[2] - sel(&d[3])[1],
            sel(&d[3])[0] - sel(&d[1])[2],
            sel(&d[1])[1] - sel(&d[2])[0],
        ]
    };
    let (ce, cb) = (curl(|s| s.e), curl(|s| s.b));
    let faraday: Vec3 = std::array::from_fn(|i| ce[i] + d[0].b[i]);
    let ampere: Vec3 = std::array::from_fn(|i| cb[i] - d[0].e[i]);
    Ok(MaxwellReport {
        div_e: div(|s| s.e).abs(),
        div_b: div(|s| s.b).abs(),
        faraday: norm(faraday),
        ampere: norm(ampere),
    })
}

/// Worst residuals over all grid points, differencing with the grid steps.
pub fn maxwell_vacuum_check<F>(fields: F, grid: &Grid) -> Result<MaxwellReport>
where
    F: Fn(&SpacetimePoint) -> Result<EMSample>,
{
    grid.validate()?;
    let h = grid.axes.map(|a| a.step);
    let mut worst = MaxwellReport::default();
    for p in grid.points() {
        let r = maxwell_at(&fields, &p, h)?;
        worst.div_e = worst.div_e.max(r.div_e);
        worst.div_b = worst.div_b.max(r.div_b);
        worst.faraday = worst.faraday.max(r.faraday);
        worst.ampere = worst.ampere.max(r.ampere);
    }
    Ok(worst)
}

/// Residual maxima at `grid`, `grid/2`, `grid/4` and the log-log slope of
/// the overall maximum against the step.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellConvergence {
    pub steps: Vec<f64>,
    pub reports: Vec<MaxwellReport>,
    pub slope: f64,
}

pub fn maxwell_convergence<F>(fields: F, grid: &Grid) -> Result<MaxwellConvergence>
where
    F: Fn(&SpacetimePoint) -> Result<EMSample>,
{
    let mut steps = Vec::new();
    let mut reports = Vec::new();
    for factor in [1.0, 0.5, 0.25] {
        let g = grid.rescaled(factor);
        reports.push(maxwell_vacuum_check(&fields, &g)?);
        steps.push(g.axes[1].step);
    }
    let errs: Vec<f64> = reports.iter().map(MaxwellReport::max).collect();
    let slope = loglog_slope(&steps, &errs);
    Ok(MaxwellConvergence { steps, reports, slope })
}
