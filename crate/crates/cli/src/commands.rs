//! The four commands. Each returns the rendered CSV and whether every
//! tolerance check passed.

use dirac_degen::algebra::{gammas, I};
use dirac_degen::em::{field_exprs, maxwell_at, plane_wave_s};
use dirac_degen::potentials::{family_b, potential_a, FourPotentialField, KappaSign, KappaVector};
use dirac_degen::residual::{dirac_residual, perturbation_residual_with, smallness, Method, DEFAULT_FD_STEP};
use dirac_degen::sampling::PointSampler;
use dirac_degen::spinors::{
    barrier_spinor_family, degenerate_spinor, Branch, DegenerateParams, Kind, NearDegenerateForm, NearDegenerateParams,
};
use dirac_degen::symexpr::parse;
use dirac_degen::tunneling::{length_scale, max_transmittance, transmittance, UnitSystem, C};
use dirac_degen::{ScalarExpr, SpacetimePoint, Var};

use crate::config::{RunConfig, UnitChoice};
use crate::format::{fmt_g, Table};
use crate::CliError;

/// Exponent window for sampled degenerate-family points.
const SAMPLE_CAP: f64 = 20.0;

pub const DEFAULT_F: [&str; 3] = ["1.5", "x*y + t^2*z", "sin(x - t)*cos(z)"];
pub const DEFAULT_G: &str = "y*t";
pub const DEFAULT_S: [&str; 4] = ["1", "t", "x^2", "cos(2*(y - t))*x"];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    pub passed: bool,
}

fn eval_err(e: dirac_degen::Error) -> CliError {
    CliError::Eval(e.to_string())
}

fn builtin(src: &str) -> (String, ScalarExpr) {
    (src.to_string(), parse(src).expect("built-in expression parses"))
}

fn convention_lines(t: &mut Table) {
    t.comment("gamma: dirac-pauli; signature: (+,-,-,-)");
    t.comment(format!(
        "degeneracy matrix: gamma_0 + i gamma_1 gamma_2 gamma_3, {}-index reading",
        gammas().convention.name()
    ));
}

fn sign_label(s: KappaSign) -> String {
    s.symbol().to_string()
}

struct VerifyRows<'a> {
    table: Table,
    passed: bool,
    cfg: &'a RunConfig,
}

impl VerifyRows<'_> {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        family: &str,
        xi: Option<f64>,
        f: &str,
        g: &str,
        s: &str,
        p: &SpacetimePoint,
        method: Method,
        norm: f64,
    ) {
        let tol = match method {
            Method::Analytic => self.cfg.tol,
            Method::FiniteDifference { .. } => self.cfg.fd_tol,
        };
        let ok = norm <= tol;
        self.passed &= ok;
        self.table.row(vec![
            family.to_string(),
            xi.map(fmt_g).unwrap_or_default(),
            f.to_string(),
            g.to_string(),
            s.to_string(),
            fmt_g(p.t),
            fmt_g(p.x),
            fmt_g(p.y),
            fmt_g(p.z),
            method.to_string(),
            fmt_g(norm),
            ok.to_string(),
        ]);
    }

    fn check(
        &mut self,
        field: &dirac_degen::spinors::SpinorField,
        b: &FourPotentialField,
        labels: (&str, Option<f64>, &str, &str, &str),
        points: &[SpacetimePoint],
    ) {
        let (family, xi, f, g, s) = labels;
        let fd = Method::FiniteDifference {
            step: DEFAULT_FD_STEP / self.cfg.mass,
        };
        for p in points {
            for method in [Method::Analytic, fd] {
                let norm = dirac_residual(field, b, self.cfg.mass, p, method)
                    .map(|r| r.relative_norm)
                    .unwrap_or(f64::NAN);
                self.push(family, xi, f, g, s, p, method, norm);
            }
        }
    }
}

/// Residual sweep over the closed-form and barrier families.
pub fn verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut table = Table::new(&[
        "family",
        "xi",
        "f",
        "g",
        "s",
        "t",
        "x",
        "y",
        "z",
        "method",
        "relative_norm",
        "pass",
    ]);
    table.comment("dirac-degen verify");
    convention_lines(&mut table);
    table.comment(format!("seed: {}", cfg.seed));
    table.comment(format!(
        "operator mass: {}; spinor mass: {}",
        fmt_g(cfg.mass),
        fmt_g(cfg.spinor_mass)
    ));
    table.comment(format!(
        "tolerance: analytic {:e}, fd {:e}; fd step: {:e}",
        cfg.tol,
        cfg.fd_tol,
        DEFAULT_FD_STEP / cfg.mass
    ));
    table.comment(match cfg.kappa2_sign {
        Some(s) => format!("kappa2-sign: {} (all barrier families)", sign_label(s)),
        None => "kappa2-sign: + primary, - primed".to_string(),
    });
    let mut rows = VerifyRows {
        table,
        passed: true,
        cfg,
    };

    let m = cfg.spinor_mass;
    let mut sampler = PointSampler::new(cfg.seed, m);
    let fs: Vec<(String, ScalarExpr)> = match &cfg.f_expr {
        Some(f) => vec![f.clone()],
        None => DEFAULT_F.iter().map(|s| builtin(s)).collect(),
    };
    let independent_g = cfg.g_expr.clone().unwrap_or_else(|| builtin(DEFAULT_G));
    let ss: Vec<(String, ScalarExpr)> = match &cfg.s_expr {
        Some(s) => vec![s.clone()],
        None => DEFAULT_S.iter().map(|s| builtin(s)).collect(),
    };

    for xi in cfg.xi_list() {
        let kappa = KappaVector::degenerate(xi);
        for (fsrc, f) in &fs {
            let field = degenerate_spinor(&DegenerateParams::new(cfg.c1, xi, f.clone(), m).map_err(eval_err)?)
                .map_err(eval_err)?;
            let points = sampler.degenerate_points(xi, m, cfg.points, SAMPLE_CAP);
            let gs = [("dz(f)".to_string(), f.diff(Var::Z)), independent_g.clone()];
            for (gsrc, g) in &gs {
                let a = potential_a(f, g, xi, m).map_err(eval_err)?;
                rows.check(&field, &a, ("degenerate", Some(xi), fsrc, gsrc, "0"), &points);
                for (ssrc, s) in &ss {
                    let b = family_b(&a, s, kappa);
                    rows.check(&field, &b, ("degenerate", Some(xi), fsrc, gsrc, ssrc), &points);
                }
            }
        }
    }

    let c_minus = cfg.c1 * I * 0.5;
    for kind in [Kind::Particle, Kind::Antiparticle] {
        for branch in [Branch::Primary, Branch::Primed] {
            let field = barrier_spinor_family(kind, branch, cfg.c1, c_minus, m).map_err(eval_err)?;
            let family = field.family().to_string();
            let sign = cfg.kappa2_sign.unwrap_or(match branch {
                Branch::Primary => KappaSign::Plus,
                Branch::Primed => KappaSign::Minus,
            });
            let points = sampler.points(cfg.points);
            let zero = FourPotentialField::zero();
            rows.check(&field, &zero, (&family, None, "", "", "0"), &points);
            for (ssrc, s) in &ss {
                let b = family_b(&zero, s, KappaVector::barrier(sign));
                rows.check(&field, &b, (&family, None, "", "", ssrc), &points);
            }
        }
    }

    Ok(Outcome {
        csv: rows.table.render(),
        passed: rows.passed,
    })
}

/// E and B over the grid for `b = a + sκ(ξ)` when `xi` is set, otherwise
/// for `b = s(1, 0, ±1, 0)`. `wave_preset` replaces `s` by the plane wave.
pub fn fields(cfg: &RunConfig, wave_preset: bool) -> Result<Outcome, CliError> {
    let sign = cfg.kappa2_sign.unwrap_or(KappaSign::Plus);
    let (s_src, s) = if wave_preset {
        let s = plane_wave_s(&cfg.wave);
        (s.to_string(), s)
    } else {
        cfg.s_expr.clone().unwrap_or_else(|| builtin("0"))
    };
    let mut table_header = vec!["t", "x", "y", "z", "Ex", "Ey", "Ez", "Bx", "By", "Bz"];
    if cfg.maxwell {
        table_header.extend(["div_E", "div_B", "faraday", "ampere"]);
    }
    let mut table = Table::new(&table_header);
    table.comment(if wave_preset {
        "dirac-degen wave"
    } else {
        "dirac-degen fields"
    });
    convention_lines(&mut table);
    table.comment(format!("charge: {}", fmt_g(cfg.charge)));

    let xi = if wave_preset { None } else { cfg.xi };
    let b = match xi {
        Some(xi) => {
            let (fsrc, f) = cfg.f_expr.clone().unwrap_or_else(|| builtin("0"));
            let (gsrc, g) = cfg
                .g_expr
                .clone()
                .unwrap_or_else(|| ("dz(f)".to_string(), f.diff(Var::Z)));
            table.comment(format!(
                "potential: a + s*kappa; xi: {}; mass: {}; f: {fsrc}; g: {gsrc}",
                fmt_g(xi),
                fmt_g(cfg.mass)
            ));
            let a = potential_a(&f, &g, xi, cfg.mass).map_err(|e| CliError::Config(e.to_string()))?;
            family_b(&a, &s, KappaVector::degenerate(xi))
        }
        None => {
            table.comment(format!(
                "potential: s*(1,0,{}1,0); kappa2-sign: {}",
                sign.symbol(),
                sign.symbol()
            ));
            family_b(&FourPotentialField::zero(), &s, KappaVector::barrier(sign))
        }
    };
    table.comment(format!("s: {s_src}"));

    let exprs = field_exprs(&b, cfg.charge).map_err(|e| CliError::Config(e.to_string()))?;
    let length = if wave_preset {
        cfg.wave.wavelength()
    } else {
        1.0 / cfg.mass
    };
    let h = cfg.maxwell_step.unwrap_or(1e-3 * length);
    if cfg.maxwell {
        table.comment(format!("maxwell step: {} in x, y, z; half that in t", fmt_g(h)));
    }
    let eval = |p: &SpacetimePoint| exprs.eval(p);
    for p in cfg.grid.points() {
        let f = eval(&p).map_err(eval_err)?;
        let mut row: Vec<String> = p.to_array().into_iter().chain(f.e).chain(f.b).map(fmt_g).collect();
        if cfg.maxwell {
            // A time step equal to the y step would cancel the truncation error of (y − t) waves.
            let r = maxwell_at(&eval, &p, [0.5 * h, h, h, h]).map_err(eval_err)?;
            row.extend(r.as_array().map(fmt_g));
        }
        table.row(row);
    }
    Ok(Outcome {
        csv: table.render(),
        passed: true,
    })
}

/// Transmittance against `p/mc` on a logarithmic grid.
pub fn transmit(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut table = Table::new(&["p_over_mc", "T", "T_max"]);
    table.comment("dirac-degen transmit");
    let (units, mass, z0, momentum_unit) = match cfg.units {
        UnitChoice::Natural => {
            table.comment("units: natural (hbar = c = 1)");
            table.comment(format!("mass: {}; width: {}", fmt_g(cfg.mass), fmt_g(cfg.width)));
            (UnitSystem::natural(cfg.mass), cfg.mass, 1.0 / cfg.mass, cfg.mass)
        }
        UnitChoice::Si => {
            let z0 = length_scale(cfg.mass_kg);
            table.comment("units: si");
            table.comment(format!(
                "particle: {}; mass: {} kg; width: {} m",
                cfg.particle,
                fmt_g(cfg.mass_kg),
                fmt_g(cfg.width)
            ));
            table.comment(format!("z0 = {} m", fmt_g(z0)));
            (UnitSystem::si(), cfg.mass_kg, z0, cfg.mass_kg * C)
        }
    };
    let t_max = max_transmittance(cfg.width, z0).map_err(|e| CliError::Config(e.to_string()))?;
    let ratio = (cfg.p_max / cfg.p_min).ln();
    let n = cfg.p_count;
    let mut passed = true;
    let mut prev = f64::NEG_INFINITY;
    for i in 0..n {
        let r = cfg.p_min * (ratio * i as f64 / (n - 1) as f64).exp();
        let t = transmittance(r * momentum_unit, mass, cfg.width, z0, &units)
            .map_err(eval_err)?
            .value;
        passed &= t >= prev && t <= t_max * (1.0 + 1e-15);
        prev = t;
        table.row(vec![fmt_g(r), fmt_g(t), fmt_g(t_max)]);
    }
    Ok(Outcome {
        csv: table.render(),
        passed,
    })
}

/// Measured against predicted first-order residual over the `(e₁, e₂, |s|)` grid.
pub fn perturb(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let sign = cfg.kappa2_sign.unwrap_or(KappaSign::Plus);
    let (shape_src, shape) = cfg.s_expr.clone().unwrap_or_else(|| builtin("1"));
    let mut table = Table::new(&[
        "e1",
        "e2",
        "s_amplitude",
        "measured_norm",
        "predicted_norm",
        "ratio",
        "e1_s_over_m",
        "e2_s_over_m",
    ]);
    table.comment("dirac-degen perturb");
    convention_lines(&mut table);
    table.comment(format!("kappa2-sign: {}", sign.symbol()));
    table.comment(format!(
        "form: {}; mass: {}; s: amplitude*({shape_src}); point: origin",
        match cfg.form {
            NearDegenerateForm::FirstOrder => "first-order",
            NearDegenerateForm::Exact => "exact",
        },
        fmt_g(cfg.mass)
    ));
    let p = SpacetimePoint::ORIGIN;
    for &e1 in &cfg.e1 {
        for &e2 in &cfg.e2 {
            for &amp in &cfg.s_amp {
                let nd = NearDegenerateParams::new(cfg.c1, e1, e2, cfg.mass)
                    .map_err(|e| CliError::Config(e.to_string()))?
                    .with_form(cfg.form);
                let s = shape.scaled(amp);
                let r = perturbation_residual_with(&nd, &s, &p, sign).map_err(eval_err)?;
                let small = smallness(&nd, amp);
                let (mn, pn) = (r.measured.norm(), r.predicted.norm());
                table.row(vec![
                    fmt_g(e1),
                    fmt_g(e2),
                    fmt_g(amp),
                    fmt_g(mn),
                    fmt_g(pn),
                    fmt_g(if pn == 0.0 { f64::NAN } else { r.ratio() }),
                    fmt_g(small.e1_s_over_m),
                    fmt_g(small.e2_s_over_m),
                ]);
            }
        }
    }
    Ok(Outcome {
        csv: table.render(),
        passed: true,
    })
}
